//! Piece descriptors of `Z_{J,y,delta}`.
//!
//! A point `(P, P', gamma)` determines a sequence `(J_n, J'_n, u_n)` by
//! repeatedly replacing the pair of parabolics with a smaller pair inside
//! `P`. Combinatorially one step is
//!
//! ```text
//! J_{n+1}  = J_n ∩ delta^{-1} Ad(y_n^{-1} u_n) J_n
//! J'_{n+1} = J_n ∩ Ad(u_n^{-1} y_n) delta(J_n)
//! y_{n+1}  = u_n^{-1} y_n
//! ```
//!
//! where `u_0` ranges over `^{J'}W^{J}` and, for `n >= 1`, `u_n` ranges over
//! `^{J'_n}W^{J_n} ∩ W_{J_{n-1}}`. Conjugates that are not simple
//! reflections are dropped from the intersections. A branch stops at the
//! first `n` where `u_n = 1` and the step leaves `(J_n, J'_n, y_n)` fixed.
//!
//! Each stabilized sequence is one piece. With `w = u_0 u_1 ... u_r` the piece
//! has `#G(F_q) q^{l(w) + nu_J - nu_I}` rational points.

use crate::poly::{CountPolynomial, PolyError};
use crate::weyl::{NodeSubset, Side, WeylDatum, WeylElement, WeylError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PieceError {
    #[error("invalid twisted pair: {0}")]
    InvalidPair(String),
    #[error("{element} is not an admissible choice at step {step}")]
    InadmissibleChoice { step: usize, element: String },
    #[error("invariant breach: {0}")]
    InvariantBreach(String),
    #[error("enumeration did not stabilize within {guard} steps")]
    NoStabilization { guard: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
}

/// `(J, y)` with `Ad(y) delta(J) = J'` and `y` minimal in `W_{J'} y W_{delta(J)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TwistedPair {
    pub j: NodeSubset,
    pub y: WeylElement,
    pub jp: NodeSubset,
}

impl TwistedPair {
    pub fn new(w: &WeylDatum, j: NodeSubset, y: WeylElement) -> Result<Self, PieceError> {
        if !w.owns(y) {
            return Err(WeylError::MixedDatum.into());
        }
        if !j.is_subset(w.all_nodes()) {
            return Err(PieceError::InvalidPair(format!("{j} is not a set of nodes")));
        }
        let dj = w.delta_subset(j);
        let img = w.ad_subset(y, dj);
        if !img.all_simple {
            return Err(PieceError::InvalidPair(format!(
                "Ad({}) delta({j}) is not a set of simple reflections",
                w.word_string(y)
            )));
        }
        if !w.is_min_double(img.subset, y, dj) {
            return Err(PieceError::InvalidPair(format!(
                "{} is not minimal in W_{} y W_{}",
                w.word_string(y),
                img.subset,
                dj
            )));
        }
        Ok(TwistedPair { j, y, jp: img.subset })
    }

    /// Every valid pair with first entry `j`.
    pub fn all_for(w: &WeylDatum, j: NodeSubset) -> Vec<TwistedPair> {
        w.elements().filter_map(|y| TwistedPair::new(w, j, y).ok()).collect()
    }

    /// Every valid pair, ordered by `J` (bit pattern) then `y`.
    pub fn all(w: &WeylDatum) -> Vec<TwistedPair> {
        NodeSubset::all(w.rank()).flat_map(|j| Self::all_for(w, j)).collect()
    }
}

/// The state `(J_n, J'_n, y_n)` reached after `n` steps, with `J_{n-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PieceState {
    pub n: usize,
    pub j: NodeSubset,
    pub jp: NodeSubset,
    pub y: WeylElement,
    /// `J_{n-1}`, or all of `I` at `n = 0`.
    pub prev_j: NodeSubset,
}

impl PieceState {
    pub fn initial(w: &WeylDatum, tp: &TwistedPair) -> Self {
        PieceState { n: 0, j: tp.j, jp: tp.jp, y: tp.y, prev_j: w.all_nodes() }
    }

    fn same_point(&self, other: &PieceState) -> bool {
        (self.j, self.jp, self.y) == (other.j, other.jp, other.y)
    }
}

/// One recorded step `(J_n, J'_n, u_n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Step {
    pub j: NodeSubset,
    pub jp: NodeSubset,
    pub u: WeylElement,
}

/// A stabilized sequence together with the invariants derived from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceDescriptor {
    pub pair: TwistedPair,
    /// Steps `0..=r`; the last one has `u_r = 1` and `J_r = J'_r`.
    pub steps: Vec<Step>,
    /// `u_0 u_1 ... u_r`.
    pub w: WeylElement,
    /// `J_r`, the type of the Levi carrying the orbit parametrization.
    pub j_inf: NodeSubset,
    /// `y_r`.
    pub twist: WeylElement,
    /// `l(w) + nu_J - nu_I`; may be negative.
    pub exponent: i64,
    /// `#G(F_q) q^exponent`.
    pub count: CountPolynomial,
    pub dim: u32,
}

impl PieceDescriptor {
    /// The stabilization index `r`.
    pub fn r(&self) -> usize {
        self.steps.len() - 1
    }

    /// Partial products `u_0, u_0 u_1, ...`.
    pub fn partial_products(&self, w: &WeylDatum) -> Vec<WeylElement> {
        let mut acc = w.identity();
        self.steps
            .iter()
            .map(|s| {
                acc = w.mul_u(acc, s.u);
                acc
            })
            .collect()
    }

    /// Fibre dimension of the iterated affine bundle: `l(w) + nu_J - nu_{J_r}`.
    pub fn fibre_dim(&self, w: &WeylDatum) -> i64 {
        w.len_u(self.w) as i64 + w.nu(self.pair.j) as i64 - w.nu(self.j_inf) as i64
    }
}

/// Iteration guard: `4 |I| + 4`.
pub fn guard(w: &WeylDatum) -> usize {
    4 * w.rank() + 4
}

/// `^{J'_0}W^{J_0}` at `n = 0`, and `^{J'_n}W^{J_n} ∩ W_{J_{n-1}}` afterwards.
pub fn admissible_choices(w: &WeylDatum, state: &PieceState) -> Vec<WeylElement> {
    let reps = w.double_reps(state.jp, state.j);
    if state.n == 0 {
        reps
    } else {
        reps.into_iter().filter(|&u| w.in_parabolic(u, state.prev_j)).collect()
    }
}

fn is_admissible(w: &WeylDatum, state: &PieceState, u: WeylElement) -> bool {
    w.is_min_double(state.jp, u, state.j) && (state.n == 0 || w.in_parabolic(u, state.prev_j))
}

/// Applies one step of the recursion with the choice `u = u_n`.
pub fn step(w: &WeylDatum, state: &PieceState, u: WeylElement) -> Result<PieceState, PieceError> {
    if !w.owns(u) {
        return Err(WeylError::MixedDatum.into());
    }
    if !is_admissible(w, state, u) {
        return Err(PieceError::InadmissibleChoice { step: state.n, element: w.word_string(u) });
    }
    let y_inv_u = w.mul_u(w.inv_u(state.y), u);
    let u_inv_y = w.inv_u(y_inv_u);
    let j = state.j.intersection(w.delta_inv_subset(w.ad_subset(y_inv_u, state.j).subset));
    let jp = state.j.intersection(w.ad_subset(u_inv_y, w.delta_subset(state.j)).subset);
    let next = PieceState { n: state.n + 1, j, jp, y: u_inv_y, prev_j: state.j };
    check_state(w, &next)?;
    Ok(next)
}

fn check_state(w: &WeylDatum, s: &PieceState) -> Result<(), PieceError> {
    let dj = w.delta_subset(s.j);
    let img = w.ad_subset(s.y, dj);
    if !img.all_simple || img.subset != s.jp {
        return Err(PieceError::InvariantBreach(format!(
            "step {}: Ad({}) delta({}) != {}",
            s.n,
            w.word_string(s.y),
            s.j,
            s.jp
        )));
    }
    if !w.is_min_double(s.jp, s.y, dj) {
        return Err(PieceError::InvariantBreach(format!(
            "step {}: y = {} is not minimal in its ({},{}) double coset",
            s.n,
            w.word_string(s.y),
            s.jp,
            dj
        )));
    }
    if !s.j.is_subset(s.prev_j) || !s.jp.is_subset(s.prev_j) {
        return Err(PieceError::InvariantBreach(format!("step {}: subsets grew", s.n)));
    }
    Ok(())
}

/// All piece descriptors of `Z_{J,y,delta}`, ordered lexicographically by
/// the canonical indices of `(u_0, u_1, ...)`.
pub fn enumerate(w: &WeylDatum, tp: &TwistedPair) -> Result<Vec<PieceDescriptor>, PieceError> {
    let start = PieceState::initial(w, tp);
    check_state(w, &start)?;
    let order = w.order_poly();
    let mut out = Vec::new();
    let mut path = Vec::new();
    descend(w, tp, &order, start, &mut path, &mut out)?;
    Ok(out)
}

fn descend(
    w: &WeylDatum,
    tp: &TwistedPair,
    order: &CountPolynomial,
    state: PieceState,
    path: &mut Vec<Step>,
    out: &mut Vec<PieceDescriptor>,
) -> Result<(), PieceError> {
    if state.n > guard(w) {
        return Err(PieceError::NoStabilization { guard: guard(w) });
    }
    for u in admissible_choices(w, &state) {
        let next = step(w, &state, u)?;
        path.push(Step { j: state.j, jp: state.jp, u });
        if u.is_identity() && next.same_point(&state) {
            out.push(finish(w, tp, order, path.clone(), state)?);
        } else {
            descend(w, tp, order, next, path, out)?;
        }
        path.pop();
    }
    Ok(())
}

fn finish(
    w: &WeylDatum,
    tp: &TwistedPair,
    order: &CountPolynomial,
    steps: Vec<Step>,
    last: PieceState,
) -> Result<PieceDescriptor, PieceError> {
    let prod = steps.iter().fold(w.identity(), |acc, s| w.mul_u(acc, s.u));
    let exponent = w.len_u(prod) as i64 + w.nu(tp.j) as i64 - w.nu_total() as i64;
    let count = order.shift(exponent)?;
    let dim = count.degree().expect("order polynomial is nonzero");
    let desc = PieceDescriptor {
        pair: *tp,
        steps,
        w: prod,
        j_inf: last.j,
        twist: last.y,
        exponent,
        count,
        dim,
    };
    check_descriptor(w, &desc)?;
    Ok(desc)
}

/// Checks every structural invariant of a descriptor.
pub fn check_descriptor(w: &WeylDatum, d: &PieceDescriptor) -> Result<(), PieceError> {
    let breach = |m: String| Err(PieceError::InvariantBreach(m));
    let first = d.steps[0];
    if (first.j, first.jp) != (d.pair.j, d.pair.jp) || !w.is_min_double(first.jp, first.u, first.j)
    {
        return breach("u_0 is not in ^{J'}W^{J}".into());
    }
    for n in 1..d.steps.len() {
        let (prev, s) = (d.steps[n - 1], d.steps[n]);
        if !w.is_min_double(s.jp, s.u, s.j) || !w.in_parabolic(s.u, prev.j) {
            return breach(format!("u_{n} is not admissible"));
        }
    }
    let last = d.steps[d.r()];
    if !last.u.is_identity() || last.j != last.jp || last.j != d.j_inf {
        return breach("tail is not stable".into());
    }
    // the product is length-additive, so the fibre dimensions telescope
    let telescoped: i64 = d
        .steps
        .iter()
        .enumerate()
        .map(|(n, s)| {
            let next_j = d.steps.get(n + 1).map_or(d.j_inf, |t| t.j);
            w.len_u(s.u) as i64 + w.nu(s.j) as i64 - w.nu(next_j) as i64
        })
        .sum();
    if telescoped != d.fibre_dim(w) {
        return breach(format!("fibre dimensions sum to {telescoped}, expected {}", d.fibre_dim(w)));
    }
    if d.fibre_dim(w) < 0 {
        return breach("negative fibre dimension".into());
    }
    Ok(())
}

/// `(J_r, y_r)`: the Levi type and the twist indexing the component of its normalizer.
pub fn orbit_data(d: &PieceDescriptor) -> (NodeSubset, WeylElement) {
    (d.j_inf, d.twist)
}

/// `#G(F_q) q^{l(w)+nu_J-nu_I}`, optionally divided by `(q-1)^{|I|-|J|}` for
/// the free action of the torus `Delta_J`.
pub fn piece_count(
    w: &WeylDatum,
    d: &PieceDescriptor,
    quotient_by_delta: bool,
) -> Result<CountPolynomial, PieceError> {
    if !quotient_by_delta {
        return Ok(d.count.clone());
    }
    let delta_rank = (w.rank() - d.pair.j.len()) as u32;
    Ok(d.count.div_q_minus_one(delta_rank)?)
}

/// Outcome of the Poincare identity check for one pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumCheck {
    pub pieces: usize,
    /// `sum_sigma q^{l(w_sigma)}`.
    pub lhs: CountPolynomial,
    /// Poincare polynomial of `W^{J'}`.
    pub rhs: CountPolynomial,
    /// `sum_sigma #G q^{e_sigma}`.
    pub counts: CountPolynomial,
    /// `[G:P_J] [G:P_{J'}] #L_{J'}`.
    pub triples: CountPolynomial,
}

impl SumCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs && self.counts == self.triples
    }
}

/// Compares the piece decomposition with a direct count of the triples
/// `(P, P', gamma)`.
pub fn verify_sum(w: &WeylDatum, tp: &TwistedPair) -> Result<SumCheck, PieceError> {
    let pieces = enumerate(w, tp)?;
    let lhs = CountPolynomial::from_lengths(pieces.iter().map(|d| w.len_u(d.w)));
    let rhs = w.poincare(&w.coset_reps(tp.jp, Side::Right));
    let counts = pieces.iter().map(|d| d.count.clone()).sum();
    let triples = &(&w.poincare(&w.coset_reps(tp.j, Side::Right)) * &rhs) * &w.levi_order_poly(tp.jp);
    Ok(SumCheck { pieces: pieces.len(), lhs, rhs, counts, triples })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn datum(t: &str) -> WeylDatum {
        let rank = crate::weyl::parse_type(t).unwrap().len();
        WeylDatum::from_type(t, None, rank).unwrap()
    }

    fn lengths(w: &WeylDatum, ds: &[PieceDescriptor]) -> Vec<u32> {
        ds.iter().map(|d| w.len_u(d.w)).collect()
    }

    #[test]
    fn twisted_pair_validation() {
        let a2 = datum("A2");
        let j1 = NodeSubset::from_labels([1]);
        let err = TwistedPair::new(&a2, j1, a2.simple(0)).unwrap_err();
        assert!(matches!(err, PieceError::InvalidPair(_)));
        // s2 conjugates s1 to a non-simple reflection
        assert!(TwistedPair::new(&a2, j1, a2.simple(1)).is_err());
        assert!(TwistedPair::new(&a2, j1, a2.from_word(&[2, 1]).unwrap()).is_err());
        let tp = TwistedPair::new(&a2, j1, a2.from_word(&[1, 2]).unwrap()).unwrap();
        assert_eq!(tp.jp, NodeSubset::from_labels([2]));
    }

    #[test]
    fn whole_group_step_is_a_fixed_point() {
        let a2 = datum("A2");
        let tp = TwistedPair::new(&a2, a2.all_nodes(), a2.identity()).unwrap();
        let s0 = PieceState::initial(&a2, &tp);
        assert_eq!(admissible_choices(&a2, &s0), vec![a2.identity()]);
        let s1 = step(&a2, &s0, a2.identity()).unwrap();
        assert_eq!((s1.j, s1.jp, s1.y), (a2.all_nodes(), a2.all_nodes(), a2.identity()));
    }

    #[test]
    fn a2_hand_step() {
        let a2 = datum("A2");
        let j2 = NodeSubset::from_labels([2]);
        let tp = TwistedPair::new(&a2, j2, a2.identity()).unwrap();
        let s0 = PieceState::initial(&a2, &tp);
        let s1 = step(&a2, &s0, a2.simple(0)).unwrap();
        assert_eq!((s1.j, s1.jp, s1.y), (NodeSubset::EMPTY, NodeSubset::EMPTY, a2.simple(0)));
        assert_eq!(admissible_choices(&a2, &s1), vec![a2.identity(), a2.simple(1)]);
        assert!(matches!(
            step(&a2, &s0, a2.simple(1)),
            Err(PieceError::InadmissibleChoice { step: 0, .. })
        ));
    }

    #[test]
    fn empty_subset_stays_empty() {
        let a2 = datum("A2");
        for y in a2.elements() {
            let tp = TwistedPair::new(&a2, NodeSubset::EMPTY, y).unwrap();
            let s0 = PieceState::initial(&a2, &tp);
            for u in admissible_choices(&a2, &s0) {
                let s1 = step(&a2, &s0, u).unwrap();
                assert_eq!((s1.j, s1.jp), (NodeSubset::EMPTY, NodeSubset::EMPTY));
                assert_eq!(s1.y, a2.mul_u(a2.inv_u(u), y));
                assert_eq!(admissible_choices(&a2, &s1), vec![a2.identity()]);
            }
        }
    }

    #[test]
    fn enumerate_examples() {
        let a1 = datum("A1");
        let tp = TwistedPair::new(&a1, NodeSubset::EMPTY, a1.identity()).unwrap();
        let ds = enumerate(&a1, &tp).unwrap();
        assert_eq!(lengths(&a1, &ds), vec![0, 1]);
        assert_eq!(ds.iter().map(|d| d.exponent).collect::<Vec<_>>(), vec![-1, 0]);

        let a2 = datum("A2");
        let tp = TwistedPair::new(&a2, NodeSubset::from_labels([2]), a2.identity()).unwrap();
        let ds = enumerate(&a2, &tp).unwrap();
        let ws: Vec<_> = ds.iter().map(|d| d.w).collect();
        let expected =
            vec![a2.identity(), a2.simple(0), a2.from_word(&[1, 2]).unwrap()];
        assert_eq!(ws, expected);
        assert_eq!(lengths(&a2, &ds), vec![0, 1, 2]);
        let top = &ds[2];
        assert_eq!(orbit_data(top), (NodeSubset::EMPTY, a2.from_word(&[2, 1]).unwrap()));
        assert_eq!(top.r(), 2);

        let tp = TwistedPair::new(&a2, a2.all_nodes(), a2.identity()).unwrap();
        let ds = enumerate(&a2, &tp).unwrap();
        assert_eq!(ds.len(), 1);
        assert_eq!(ds[0].w, a2.identity());
        assert_eq!(ds[0].count, a2.order_poly());
        assert_eq!(orbit_data(&ds[0]), (a2.all_nodes(), a2.identity()));
    }

    #[test]
    fn orbit_data_for_empty_j() {
        let a2 = datum("A2");
        for y in a2.elements() {
            let tp = TwistedPair::new(&a2, NodeSubset::EMPTY, y).unwrap();
            for d in enumerate(&a2, &tp).unwrap() {
                assert_eq!(d.r(), if d.w.is_identity() { 0 } else { 1 });
                assert_eq!(orbit_data(&d), (NodeSubset::EMPTY, a2.mul_u(a2.inv_u(d.w), y)));
            }
        }
    }

    #[test]
    fn verify_sum_examples() {
        let a1 = datum("A1");
        let tp = TwistedPair::new(&a1, NodeSubset::EMPTY, a1.identity()).unwrap();
        let c = verify_sum(&a1, &tp).unwrap();
        assert_eq!(c.lhs.to_string(), "1+q");
        assert!(c.holds());

        let a2 = datum("A2");
        let tp = TwistedPair::new(&a2, NodeSubset::from_labels([2]), a2.identity()).unwrap();
        let c = verify_sum(&a2, &tp).unwrap();
        assert_eq!((c.lhs.to_string(), c.rhs.to_string()), ("1+q+q^2".into(), "1+q+q^2".into()));
        assert!(c.holds());

        let tp = TwistedPair::new(&a2, a2.all_nodes(), a2.identity()).unwrap();
        let c = verify_sum(&a2, &tp).unwrap();
        assert_eq!(c.lhs, CountPolynomial::one());
        assert!(c.holds());
    }

    #[test]
    fn piece_count_examples() {
        let a1 = datum("A1");
        let tp = TwistedPair::new(&a1, NodeSubset::EMPTY, a1.identity()).unwrap();
        let ds = enumerate(&a1, &tp).unwrap();
        assert_eq!(piece_count(&a1, &ds[1], true).unwrap().to_string(), "q+q^2");
        assert_eq!(piece_count(&a1, &ds[0], true).unwrap().to_string(), "1+q");
        let full = TwistedPair::new(&a1, a1.all_nodes(), a1.identity()).unwrap();
        let d = &enumerate(&a1, &full).unwrap()[0];
        assert_eq!(piece_count(&a1, d, false).unwrap(), a1.order_poly());

        // a torus of rank 0 cannot absorb the quotient
        let thin = WeylDatum::from_type("A1", None, 0).unwrap();
        let tp = TwistedPair::new(&thin, NodeSubset::EMPTY, thin.identity()).unwrap();
        let d = &enumerate(&thin, &tp).unwrap()[0];
        assert!(matches!(
            piece_count(&thin, d, true),
            Err(PieceError::Poly(PolyError::NonDivisible { .. }))
        ));
    }

    #[test]
    fn sweep_counts_for_a2() {
        let a2 = datum("A2");
        let pairs = TwistedPair::all(&a2);
        // J = {} pairs with every y, J = I with y = 1, and singletons
        let by_j = |j: NodeSubset| pairs.iter().filter(|p| p.j == j).count();
        assert_eq!(by_j(NodeSubset::EMPTY), 6);
        assert_eq!(by_j(a2.all_nodes()), 1);
        for p in &pairs {
            assert!(verify_sum(&a2, p).unwrap().holds());
        }
    }
}
