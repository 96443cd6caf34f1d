//! Filtrations, their types, and relative position as an element of `S_d`.
//!
//! `S_d` is identified with the Weyl group of type `A_{d-1}` by sending the
//! transposition `(i, i+1)` to `s_i`. A permutation is stored in one-line
//! notation, 0-based: `perm[k] = w(k)`, and acts by `e_k -> e_{w(k)}`.

use super::linalg::{Field, Matrix, Subspace};
use super::GlError;
use crate::weyl::{NodeSubset, WeylDatum, WeylElement};

/// A chain `0 = F_0 ⊆ F_1 ⊆ ... ⊆ F_n = F_q^d`. Repeated members are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Filtration {
    members: Vec<Subspace>,
}

impl Filtration {
    pub fn new(members: Vec<Subspace>) -> Result<Self, GlError> {
        let bad = |m: &str| Err(GlError::InvalidFiltration(m.to_string()));
        let (Some(first), Some(last)) = (members.first(), members.last()) else {
            return bad("no members");
        };
        if members.len() < 2 || first.dim() != 0 || last.dim() != last.ambient() {
            return bad("must run from 0 to the whole space");
        }
        if members.iter().any(|m| m.ambient() != first.ambient()) {
            return Err(GlError::AmbientMismatch);
        }
        if members.windows(2).any(|w| !w[1].contains(&w[0])) {
            return bad("members are not nested");
        }
        Ok(Filtration { members })
    }

    /// The standard filtration by `span(e_1..e_k)` over the given dimensions,
    /// which should increase from 0 to `d`.
    pub fn standard(f: Field, d: usize, dims: &[usize]) -> Result<Self, GlError> {
        Filtration::new(dims.iter().map(|&k| Subspace::standard(f, d, k.min(d))).collect())
    }

    /// Standard filtration whose jumps are the complement of `j` in `[1, d-1]`.
    pub fn standard_of_type(f: Field, d: usize, j: NodeSubset) -> Self {
        let dims: Vec<usize> = (0..=d).filter(|&k| k == 0 || k == d || !j.contains(k - 1)).collect();
        Filtration::standard(f, d, &dims).expect("standard dims are valid")
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    pub fn member(&self, i: usize) -> &Subspace {
        &self.members[i]
    }

    /// Number of steps `n`.
    pub fn len(&self) -> usize {
        self.members.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn ambient(&self) -> usize {
        self.members[0].ambient()
    }

    pub fn field(&self) -> Field {
        self.members[0].field()
    }

    /// Dimensions of the blocks `F_i / F_{i-1}`, `i = 1..=n`.
    pub fn block_dims(&self) -> Vec<usize> {
        self.members.windows(2).map(|w| w[1].dim() - w[0].dim()).collect()
    }

    /// Same chain with repeated members removed.
    pub fn collapsed(&self) -> Filtration {
        let mut members = self.members.clone();
        members.dedup();
        Filtration { members }
    }

    /// Image under `g`.
    pub fn image(&self, g: &Matrix) -> Filtration {
        Filtration { members: self.members.iter().map(|m| m.image(g)).collect() }
    }

    /// Nodes `i` of `A_{d-1}` (0-based `i-1`) such that no member has dimension `i`.
    pub fn filtration_type(&self) -> NodeSubset {
        let d = self.ambient();
        let mut t = NodeSubset::full(d.saturating_sub(1));
        for m in &self.members {
            if m.dim() >= 1 && m.dim() < d {
                t = t.difference(NodeSubset::singleton(m.dim() - 1));
            }
        }
        t
    }

    /// Every filtration with the given block dimensions.
    pub fn all_with_blocks(f: Field, blocks: &[usize]) -> Vec<Filtration> {
        let d: usize = blocks.iter().sum();
        let mut chains = vec![vec![Subspace::zero(f, d)]];
        let mut dim = 0;
        for &b in blocks {
            dim += b;
            let candidates = Subspace::all_of_dim(f, d, dim);
            chains = chains
                .into_iter()
                .flat_map(|c| {
                    let last = c.last().expect("nonempty").clone();
                    candidates.iter().filter(move |s| s.contains(&last)).map(move |s| {
                        let mut c2 = c.clone();
                        c2.push(s.clone());
                        c2
                    })
                })
                .collect();
        }
        chains.into_iter().map(|members| Filtration { members }).collect()
    }
}

/// Number of filtrations of `F_q^d` with the given block dimensions.
pub fn count_with_blocks(q: u64, blocks: &[usize]) -> u64 {
    // q-multinomial: [d]! / prod [b_i]!
    let fact = |n: usize| -> u128 {
        (1..=n as u32).map(|k| (0..k).map(|i| q.pow(i) as u128).sum::<u128>()).product()
    };
    let d: usize = blocks.iter().sum();
    (fact(d) / blocks.iter().map(|&b| fact(b)).product::<u128>()) as u64
}

/// The Weyl datum of `GL_d`: type `A_{d-1}` with torus rank `d`.
pub fn gl_datum(d: usize) -> Result<WeylDatum, GlError> {
    if !(2..=8).contains(&d) {
        return Err(GlError::BadDimension(d));
    }
    Ok(WeylDatum::from_type(&format!("A{}", d - 1), None, d)?)
}

/// Reduced word (1-based labels) of a permutation, by bubble sort.
pub fn perm_word(perm: &[usize]) -> Vec<usize> {
    let mut p = perm.to_vec();
    let mut word = Vec::new();
    // peel right descents: w = (w s_i) s_i
    while let Some(i) = (0..p.len().saturating_sub(1)).find(|&i| p[i] > p[i + 1]) {
        p.swap(i, i + 1);
        word.push(i + 1);
    }
    word.reverse();
    word
}

pub fn perm_to_element(w: &WeylDatum, perm: &[usize]) -> WeylElement {
    w.from_word(&perm_word(perm)).expect("labels are in range")
}

pub fn element_to_perm(w: &WeylDatum, x: WeylElement) -> Vec<usize> {
    let mut p: Vec<usize> = (0..=w.rank()).collect();
    // p = s_{a1} ∘ ... ∘ s_{am}: apply the word right to left on positions
    for &a in w.reduced_word(x).iter() {
        // p ∘ s_a swaps entries a-1, a
        p.swap(a - 1, a);
    }
    p
}

/// Permutation matrix of `w`: `e_k -> e_{w(k)}`.
pub fn perm_matrix(perm: &[usize]) -> Matrix {
    let d = perm.len();
    let mut m = vec![vec![0u8; d]; d];
    for (k, &v) in perm.iter().enumerate() {
        m[v][k] = 1;
    }
    m
}

/// `M_{ij} = dim` of block `(i, j)` of `F` against `F'`.
pub fn block_matrix(f: &Filtration, fp: &Filtration) -> Vec<Vec<usize>> {
    let n = f.len();
    let m = fp.len();
    let dims: Vec<Vec<usize>> = (0..=n)
        .map(|i| (0..=m).map(|j| f.member(i).intersect(fp.member(j)).dim()).collect())
        .collect();
    (1..=n)
        .map(|i| {
            (1..=m)
                .map(|j| dims[i][j] + dims[i - 1][j - 1] - dims[i - 1][j] - dims[i][j - 1])
                .collect()
        })
        .collect()
}

/// The relative position of `F` and `F'` as the minimal permutation of its
/// `(type F, type F')` double coset.
///
/// For complete flags `dim(F_i ∩ F'_j) = #{k <= j : w(k) <= i}`; in
/// particular the standard flag `E` and `wE` are in position `w`.
pub fn rel_pos_perm(f: &Filtration, fp: &Filtration) -> Result<Vec<usize>, GlError> {
    if f.ambient() != fp.ambient() {
        return Err(GlError::AmbientMismatch);
    }
    let (f, fp) = (f.collapsed(), fp.collapsed());
    let m = block_matrix(&f, &fp);
    let rows = f.block_dims();
    let cols = fp.block_dims();
    let d = f.ambient();
    // values of row block i go, in increasing order, to column blocks 1, 2, ...
    let mut next_value: Vec<usize> =
        rows.iter().scan(0, |acc, &r| Some(std::mem::replace(acc, *acc + r))).collect();
    let mut perm = vec![0usize; d];
    let mut pos = 0;
    for (j, &c) in cols.iter().enumerate() {
        let mut vals = Vec::with_capacity(c);
        for (i, row) in m.iter().enumerate() {
            for _ in 0..row[j] {
                vals.push(next_value[i]);
                next_value[i] += 1;
            }
        }
        debug_assert_eq!(vals.len(), c);
        vals.sort_unstable();
        for v in vals {
            perm[pos] = v;
            pos += 1;
        }
    }
    Ok(perm)
}

pub fn rel_pos(w: &WeylDatum, f: &Filtration, fp: &Filtration) -> Result<WeylElement, GlError> {
    if w.rank() + 1 != f.ambient() {
        return Err(GlError::AmbientMismatch);
    }
    Ok(perm_to_element(w, &rel_pos_perm(f, fp)?))
}
