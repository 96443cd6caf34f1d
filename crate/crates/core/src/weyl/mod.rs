//! Finite Weyl groups: elements, lengths, parabolic subgroups, minimal coset
//! representatives, diagram automorphisms and order polynomials.
//!
//! Every element of the group is enumerated once when the datum is built.
//! An element is the index of its action on the simple roots in a table
//! sorted by length and then by the lexicographically smallest reduced word,
//! so equality is index equality and index order is the canonical order.

mod cartan;
mod subset;

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

pub use cartan::{cartan_from_coxeter, parse_type};
pub use subset::NodeSubset;

use crate::poly::CountPolynomial;

const MAX_ROOTS: usize = 20_000;
const MAX_ORDER: usize = 500_000;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeylError {
    #[error("not a finite Coxeter type: {0}")]
    NonFiniteType(String),
    #[error("delta does not preserve the diagram: {0}")]
    InvalidAutomorphism(String),
    #[error("elements belong to different Weyl data")]
    MixedDatum,
    #[error("{element} is not a minimal ({left},{right}) double coset representative")]
    NotMinimalRep { element: String, left: NodeSubset, right: NodeSubset },
    #[error("cannot parse Cartan type {0:?}")]
    ParseType(String),
    #[error("bad Coxeter matrix: {0}")]
    BadMatrix(String),
    #[error("cannot parse {0:?} as a word in the simple reflections")]
    ParseWord(String),
    #[error("node label {0} is outside 1..={1}")]
    NodeOutOfRange(usize, usize),
    #[error("group order exceeds {MAX_ORDER}")]
    GroupTooLarge,
}

/// An element of a [`WeylDatum`].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeylElement {
    owner: u64,
    idx: u32,
}

impl WeylElement {
    /// Position in the canonical order of the owning datum.
    pub fn index(self) -> usize {
        self.idx as usize
    }

    pub fn is_identity(self) -> bool {
        self.idx == 0
    }
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w#{}", self.idx)
    }
}

/// Result of conjugating a set of simple reflections.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdImage {
    /// Nodes `j` such that `s_j` is one of the conjugates.
    pub subset: NodeSubset,
    /// Whether every conjugate was a simple reflection.
    pub all_simple: bool,
}

/// Which side the parabolic subgroup sits on for one-sided coset representatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `^J W`: minimal representatives of the right cosets `W_J w`.
    Left,
    /// `W^J`: minimal representatives of the left cosets `w W_J`.
    Right,
}

struct ElementData {
    /// Row-major `rank x rank`; column `c` holds `w(alpha_c)` in the simple-root basis.
    action: Vec<i32>,
    word: Vec<u8>,
    inverse: u32,
    support: NodeSubset,
    right_descents: NodeSubset,
    left_descents: NodeSubset,
}

/// A finite Weyl group together with a diagram automorphism and the rank of
/// the ambient maximal torus.
pub struct WeylDatum {
    id: u64,
    label: String,
    coxeter: Vec<Vec<u32>>,
    cartan: Vec<Vec<i32>>,
    delta: Vec<usize>,
    delta_inv: Vec<usize>,
    torus_rank: usize,
    positive_roots: Vec<Vec<i32>>,
    elems: Vec<ElementData>,
    right_mul: Vec<Vec<u32>>,
    left_mul: Vec<Vec<u32>>,
}

impl fmt::Debug for WeylDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeylDatum")
            .field("label", &self.label)
            .field("rank", &self.rank())
            .field("order", &self.order())
            .field("delta", &self.delta)
            .field("torus_rank", &self.torus_rank)
            .finish()
    }
}

fn is_negative(v: &[i32]) -> bool {
    v.iter().any(|&c| c < 0)
}

impl WeylDatum {
    /// Builds the datum for a Cartan type string such as `"A2"` or `"A1xB2"`.
    ///
    /// `delta` is the image list of the nodes, 0-based; `None` means identity.
    pub fn from_type(
        type_spec: &str,
        delta: Option<&[usize]>,
        torus_rank: usize,
    ) -> Result<Self, WeylError> {
        let m = parse_type(type_spec)?;
        Self::from_coxeter(type_spec.trim(), m, delta, torus_rank)
    }

    /// Builds the datum for an explicit Coxeter matrix.
    pub fn from_coxeter(
        label: &str,
        coxeter: Vec<Vec<u32>>,
        delta: Option<&[usize]>,
        torus_rank: usize,
    ) -> Result<Self, WeylError> {
        let n = coxeter.len();
        if n == 0 || n > 16 {
            return Err(WeylError::BadMatrix(format!("rank {n} is not in 1..=16")));
        }
        let cartan = cartan_from_coxeter(&coxeter)?;
        let delta: Vec<usize> = delta.map(<[usize]>::to_vec).unwrap_or_else(|| (0..n).collect());
        check_automorphism(&coxeter, &cartan, &delta)?;
        let mut delta_inv = vec![0; n];
        for (i, &d) in delta.iter().enumerate() {
            delta_inv[d] = i;
        }
        let positive_roots = root_closure(&cartan)?;
        let (elems, right_mul, left_mul) = enumerate_group(&cartan)?;
        Ok(WeylDatum {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            label: label.to_string(),
            coxeter,
            cartan,
            delta,
            delta_inv,
            torus_rank,
            positive_roots,
            elems,
            right_mul,
            left_mul,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn rank(&self) -> usize {
        self.coxeter.len()
    }

    pub fn all_nodes(&self) -> NodeSubset {
        NodeSubset::full(self.rank())
    }

    pub fn coxeter_matrix(&self) -> &[Vec<u32>] {
        &self.coxeter
    }

    pub fn cartan_matrix(&self) -> &[Vec<i32>] {
        &self.cartan
    }

    /// The diagram automorphism as a 0-based image list.
    pub fn delta(&self) -> &[usize] {
        &self.delta
    }

    pub fn delta_is_identity(&self) -> bool {
        self.delta.iter().enumerate().all(|(i, &d)| i == d)
    }

    pub fn torus_rank(&self) -> usize {
        self.torus_rank
    }

    /// The same group and automorphism with a different torus rank.
    pub fn with_torus_rank(&self, torus_rank: usize) -> Result<Self, WeylError> {
        Self::from_coxeter(&self.label, self.coxeter.clone(), Some(&self.delta), torus_rank)
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    /// Positive roots in the simple-root basis.
    pub fn positive_roots(&self) -> &[Vec<i32>] {
        &self.positive_roots
    }

    /// Number of reflections of the whole group.
    pub fn nu_total(&self) -> u32 {
        self.positive_roots.len() as u32
    }

    fn elem(&self, idx: u32) -> WeylElement {
        WeylElement { owner: self.id, idx }
    }

    fn data(&self, x: WeylElement) -> &ElementData {
        assert_eq!(x.owner, self.id, "element from a different Weyl datum");
        &self.elems[x.idx as usize]
    }

    fn check(&self, x: WeylElement) -> Result<(), WeylError> {
        if x.owner == self.id {
            Ok(())
        } else {
            Err(WeylError::MixedDatum)
        }
    }

    pub fn owns(&self, x: WeylElement) -> bool {
        x.owner == self.id
    }

    pub fn identity(&self) -> WeylElement {
        self.elem(0)
    }

    /// `s_i` for a 0-based node.
    pub fn simple(&self, node: usize) -> WeylElement {
        self.elem(self.right_mul[node][0])
    }

    /// The longest element `w0`.
    pub fn longest(&self) -> WeylElement {
        self.elem(self.elems.len() as u32 - 1)
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = WeylElement> + '_ {
        (0..self.elems.len() as u32).map(|i| self.elem(i))
    }

    pub fn element(&self, index: usize) -> WeylElement {
        assert!(index < self.elems.len());
        self.elem(index as u32)
    }

    /// Lexicographically smallest reduced word, 1-based node labels.
    pub fn reduced_word(&self, x: WeylElement) -> Vec<usize> {
        self.data(x).word.iter().map(|&i| i as usize + 1).collect()
    }

    /// Renders as `s1 s2 s1`, or `e` for the identity.
    pub fn word_string(&self, x: WeylElement) -> String {
        let w = self.reduced_word(x);
        if w.is_empty() {
            "e".into()
        } else {
            w.iter().map(|i| format!("s{i}")).collect::<Vec<_>>().join(" ")
        }
    }

    /// Product of simple reflections given by 1-based labels (any word, not
    /// necessarily reduced).
    pub fn from_word(&self, labels: &[usize]) -> Result<WeylElement, WeylError> {
        let mut idx = 0u32;
        for &l in labels {
            if l == 0 || l > self.rank() {
                return Err(WeylError::NodeOutOfRange(l, self.rank()));
            }
            idx = self.right_mul[l - 1][idx as usize];
        }
        Ok(self.elem(idx))
    }

    /// Parses `"e"`, `""`, `"s1 s2"`, `"s1s2"`, `"1 2"` or `"1,2"`.
    pub fn parse_word(&self, text: &str) -> Result<WeylElement, WeylError> {
        let t = text.trim();
        if t.is_empty() || t == "e" {
            return Ok(self.identity());
        }
        let bad = || WeylError::ParseWord(text.to_string());
        let labels: Vec<usize> = if t.contains('s') {
            t.split('s')
                .map(|p| p.trim().trim_matches(','))
                .filter(|p| !p.is_empty())
                .map(|p| p.parse().map_err(|_| bad()))
                .collect::<Result<_, _>>()?
        } else {
            t.split([',', ' '])
                .filter(|p| !p.is_empty())
                .map(|p| p.parse().map_err(|_| bad()))
                .collect::<Result<_, _>>()?
        };
        self.from_word(&labels)
    }

    pub(crate) fn mul_u(&self, x: WeylElement, y: WeylElement) -> WeylElement {
        assert_eq!(x.owner, self.id, "element from a different Weyl datum");
        let mut cur = x.idx;
        for &i in &self.data(y).word {
            cur = self.right_mul[i as usize][cur as usize];
        }
        self.elem(cur)
    }

    pub(crate) fn inv_u(&self, x: WeylElement) -> WeylElement {
        self.elem(self.data(x).inverse)
    }

    pub(crate) fn len_u(&self, x: WeylElement) -> u32 {
        self.data(x).word.len() as u32
    }

    pub fn mul(&self, x: WeylElement, y: WeylElement) -> Result<WeylElement, WeylError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul_u(x, y))
    }

    pub fn inv(&self, x: WeylElement) -> Result<WeylElement, WeylError> {
        self.check(x)?;
        Ok(self.inv_u(x))
    }

    pub fn length(&self, x: WeylElement) -> Result<u32, WeylError> {
        self.check(x)?;
        Ok(self.len_u(x))
    }

    /// `w(beta)` for a vector in the simple-root basis.
    pub fn act(&self, x: WeylElement, beta: &[i32]) -> Vec<i32> {
        let n = self.rank();
        let a = &self.data(x).action;
        (0..n).map(|r| (0..n).map(|c| a[r * n + c] * beta[c]).sum()).collect()
    }

    /// Length computed from the definition: positive roots sent to negative ones.
    pub fn length_by_inversions(&self, x: WeylElement) -> u32 {
        self.positive_roots.iter().filter(|b| is_negative(&self.act(x, b))).count() as u32
    }

    /// Nodes used by (every) reduced word of `x`.
    pub fn support(&self, x: WeylElement) -> NodeSubset {
        self.data(x).support
    }

    /// `{ i : l(x s_i) < l(x) }`.
    pub fn right_descents(&self, x: WeylElement) -> NodeSubset {
        self.data(x).right_descents
    }

    /// `{ i : l(s_i x) < l(x) }`.
    pub fn left_descents(&self, x: WeylElement) -> NodeSubset {
        self.data(x).left_descents
    }

    pub fn in_parabolic(&self, x: WeylElement, j: NodeSubset) -> bool {
        self.support(x).is_subset(j)
    }

    /// Elements of the standard parabolic subgroup `W_J`, canonical order.
    pub fn parabolic(&self, j: NodeSubset) -> Vec<WeylElement> {
        self.elements().filter(|&w| self.in_parabolic(w, j)).collect()
    }

    /// Whether `x` is the minimal element of `W_{jp} x W_j`.
    pub fn is_min_double(&self, jp: NodeSubset, x: WeylElement, j: NodeSubset) -> bool {
        let d = self.data(x);
        d.left_descents.intersection(jp).is_empty() && d.right_descents.intersection(j).is_empty()
    }

    /// Minimal representatives: `W^J` for [`Side::Right`], `^J W` for [`Side::Left`].
    pub fn coset_reps(&self, j: NodeSubset, side: Side) -> Vec<WeylElement> {
        self.elements()
            .filter(|&w| match side {
                Side::Right => self.right_descents(w).intersection(j).is_empty(),
                Side::Left => self.left_descents(w).intersection(j).is_empty(),
            })
            .collect()
    }

    /// `^{jp} W^{j}`, canonical order.
    pub fn double_reps(&self, jp: NodeSubset, j: NodeSubset) -> Vec<WeylElement> {
        self.elements().filter(|&w| self.is_min_double(jp, w, j)).collect()
    }

    /// The unique minimal-length element of `W_{jp} x W_j`.
    pub fn min_double_coset(&self, jp: NodeSubset, x: WeylElement, j: NodeSubset) -> WeylElement {
        let mut cur = x.idx;
        loop {
            let d = &self.elems[cur as usize];
            if let Some(i) = d.left_descents.intersection(jp).iter().next() {
                cur = self.left_mul[i][cur as usize];
            } else if let Some(i) = d.right_descents.intersection(j).iter().next() {
                cur = self.right_mul[i][cur as usize];
            } else {
                return self.elem(cur);
            }
        }
    }

    /// Conjugates `{ s_k : k in K }` by `x` and keeps the simple conjugates.
    pub fn ad_subset(&self, x: WeylElement, k: NodeSubset) -> AdImage {
        let n = self.rank();
        let a = &self.data(x).action;
        let mut subset = NodeSubset::EMPTY;
        let mut all_simple = true;
        for c in k.iter() {
            // x s_c x^-1 is the reflection in the root x(alpha_c)
            let col: Vec<i32> = (0..n).map(|r| a[r * n + c]).collect();
            let nz: Vec<usize> = (0..n).filter(|&r| col[r] != 0).collect();
            if nz.len() == 1 && col[nz[0]].abs() == 1 {
                subset.insert(nz[0]);
            } else {
                all_simple = false;
            }
        }
        AdImage { subset, all_simple }
    }

    /// Number of reflections in `W_J`.
    pub fn nu(&self, j: NodeSubset) -> u32 {
        self.positive_roots
            .iter()
            .filter(|r| r.iter().enumerate().all(|(i, &c)| c == 0 || j.contains(i)))
            .count() as u32
    }

    pub fn delta_subset(&self, j: NodeSubset) -> NodeSubset {
        j.map(&self.delta)
    }

    pub fn delta_inv_subset(&self, j: NodeSubset) -> NodeSubset {
        j.map(&self.delta_inv)
    }

    /// Extension of the diagram automorphism to the group.
    pub fn delta_element(&self, x: WeylElement) -> WeylElement {
        let mut cur = 0u32;
        for &i in &self.data(x).word {
            cur = self.right_mul[self.delta[i as usize]][cur as usize];
        }
        self.elem(cur)
    }

    /// Longest element of `W^K`.
    pub fn longest_coset_rep(&self, k: NodeSubset) -> WeylElement {
        // the longest element of W^K is w0 times the longest element of W_K
        let w0_k = self.parabolic(k).into_iter().last().expect("W_K contains 1");
        self.mul_u(self.longest(), w0_k)
    }

    /// `y_J`: the longest element of `W^{delta(J)}`.
    pub fn longest_in_w_upper(&self, j: NodeSubset) -> WeylElement {
        self.longest_coset_rep(self.delta_subset(j))
    }

    /// `J*`, the image of `J` under `s_i -> w0 s_i w0`.
    pub fn star(&self, j: NodeSubset) -> NodeSubset {
        let img = self.ad_subset(self.longest(), j);
        debug_assert!(img.all_simple);
        img.subset
    }

    /// `sum_{w in S} q^{l(w)}`.
    pub fn poincare(&self, set: &[WeylElement]) -> CountPolynomial {
        CountPolynomial::from_lengths(set.iter().map(|&w| self.len_u(w)))
    }

    /// Poincare polynomial of the whole group.
    pub fn poincare_total(&self) -> CountPolynomial {
        CountPolynomial::from_lengths(self.elems.iter().map(|e| e.word.len() as u32))
    }

    /// `q^{nu_I} (q-1)^{torus_rank} P_W(q)`: the order of the split group.
    pub fn order_poly(&self) -> CountPolynomial {
        &(&CountPolynomial::monomial(self.nu_total())
            * &CountPolynomial::q_minus_one_pow(self.torus_rank as u32))
            * &self.poincare_total()
    }

    /// Order polynomial of a Levi subgroup of type `J` in the same ambient group.
    pub fn levi_order_poly(&self, j: NodeSubset) -> CountPolynomial {
        &(&CountPolynomial::monomial(self.nu(j))
            * &CountPolynomial::q_minus_one_pow(self.torus_rank as u32))
            * &self.poincare(&self.parabolic(j))
    }

    /// `l(u) + nu_J - nu_{J cap Ad(u)K}` for `u` in `^J W^K`.
    pub fn unipotent_codim(
        &self,
        j: NodeSubset,
        u: WeylElement,
        k: NodeSubset,
    ) -> Result<u32, WeylError> {
        self.check(u)?;
        if !self.is_min_double(j, u, k) {
            return Err(WeylError::NotMinimalRep {
                element: self.word_string(u),
                left: j,
                right: k,
            });
        }
        let meet = j.intersection(self.ad_subset(u, k).subset);
        Ok(self.len_u(u) + self.nu(j) - self.nu(meet))
    }
}

fn check_automorphism(
    coxeter: &[Vec<u32>],
    cartan: &[Vec<i32>],
    delta: &[usize],
) -> Result<(), WeylError> {
    let n = coxeter.len();
    if delta.len() != n {
        return Err(WeylError::InvalidAutomorphism(format!(
            "{} images given for {n} nodes",
            delta.len()
        )));
    }
    let mut seen = vec![false; n];
    for &d in delta {
        if d >= n || std::mem::replace(&mut seen[d], true) {
            return Err(WeylError::InvalidAutomorphism("not a bijection of the nodes".into()));
        }
    }
    for i in 0..n {
        for j in 0..n {
            if coxeter[delta[i]][delta[j]] != coxeter[i][j] {
                return Err(WeylError::InvalidAutomorphism(format!(
                    "m({},{}) is not preserved",
                    i + 1,
                    j + 1
                )));
            }
            // root lengths must be preserved too, so B2, G2 and F4 have no flips
            if cartan[delta[i]][delta[j]] != cartan[i][j] {
                return Err(WeylError::InvalidAutomorphism(format!(
                    "edge ({},{}) changes orientation",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(())
}

fn reflect(cartan: &[Vec<i32>], i: usize, beta: &[i32]) -> Vec<i32> {
    let pairing: i32 = beta.iter().enumerate().map(|(k, &b)| cartan[i][k] * b).sum();
    let mut out = beta.to_vec();
    out[i] -= pairing;
    out
}

fn root_closure(cartan: &[Vec<i32>]) -> Result<Vec<Vec<i32>>, WeylError> {
    let n = cartan.len();
    let mut seen: HashMap<Vec<i32>, ()> = HashMap::new();
    let mut queue: Vec<Vec<i32>> = (0..n)
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = 1;
            e
        })
        .collect();
    let mut roots = Vec::new();
    while let Some(r) = queue.pop() {
        if seen.contains_key(&r) {
            continue;
        }
        seen.insert(r.clone(), ());
        if seen.len() > MAX_ROOTS {
            return Err(WeylError::NonFiniteType("root system does not close up".into()));
        }
        for i in 0..n {
            let img = reflect(cartan, i, &r);
            if !seen.contains_key(&img) {
                queue.push(img);
            }
        }
        roots.push(r);
    }
    let mut pos: Vec<Vec<i32>> = roots.into_iter().filter(|r| !is_negative(r)).collect();
    pos.sort_by_key(|r| (r.iter().sum::<i32>(), r.clone()));
    Ok(pos)
}

type Tables = (Vec<ElementData>, Vec<Vec<u32>>, Vec<Vec<u32>>);

fn enumerate_group(cartan: &[Vec<i32>]) -> Result<Tables, WeylError> {
    let n = cartan.len();
    let mut identity = vec![0i32; n * n];
    for i in 0..n {
        identity[i * n + i] = 1;
    }
    let mut index: HashMap<Vec<i32>, u32> = HashMap::new();
    index.insert(identity.clone(), 0);
    let mut actions = vec![identity];
    let mut words: Vec<Vec<u8>> = vec![Vec::new()];
    let mut right_mul: Vec<Vec<u32>> = vec![Vec::new(); n];
    // breadth-first: discovery order is (length, lexicographically least reduced word)
    let mut head = 0;
    while head < actions.len() {
        for i in 0..n {
            let a = &actions[head];
            // (w s_i)(alpha_c) = w(alpha_c) - A[i][c] w(alpha_i)
            let mut b = a.clone();
            for c in 0..n {
                let k = cartan[i][c];
                if k != 0 {
                    for r in 0..n {
                        b[r * n + c] -= k * a[r * n + i];
                    }
                }
            }
            let next = match index.get(&b) {
                Some(&j) => j,
                None => {
                    let j = actions.len() as u32;
                    if actions.len() >= MAX_ORDER {
                        return Err(WeylError::GroupTooLarge);
                    }
                    let mut w = words[head].clone();
                    w.push(i as u8);
                    index.insert(b.clone(), j);
                    actions.push(b);
                    words.push(w);
                    j
                }
            };
            right_mul[i].push(next);
        }
        head += 1;
    }
    let order = actions.len();
    let mut left_mul: Vec<Vec<u32>> = vec![vec![0; order]; n];
    for (i, row) in left_mul.iter_mut().enumerate() {
        for (w, slot) in row.iter_mut().enumerate() {
            // s_i applied to every column
            let a = &actions[w];
            let mut b = a.clone();
            for c in 0..n {
                let col: Vec<i32> = (0..n).map(|r| a[r * n + c]).collect();
                let img = reflect(cartan, i, &col);
                for r in 0..n {
                    b[r * n + c] = img[r];
                }
            }
            *slot = index[&b];
        }
    }
    let mut elems = Vec::with_capacity(order);
    for (action, word) in actions.into_iter().zip(words) {
        let mut inverse = 0u32;
        for &i in word.iter().rev() {
            inverse = right_mul[i as usize][inverse as usize];
        }
        let support = NodeSubset::from_nodes(word.iter().map(|&i| i as usize));
        let right_descents = NodeSubset::from_nodes((0..n).filter(|&c| {
            let col: Vec<i32> = (0..n).map(|r| action[r * n + c]).collect();
            is_negative(&col)
        }));
        elems.push(ElementData {
            action,
            word,
            inverse,
            support,
            right_descents,
            left_descents: NodeSubset::EMPTY,
        });
    }
    for w in 0..order {
        let inv = elems[w].inverse as usize;
        elems[w].left_descents = elems[inv].right_descents;
    }
    Ok((elems, right_mul, left_mul))
}
