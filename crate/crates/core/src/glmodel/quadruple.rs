//! Quadruples `(V_*, V'_*, sigma, a)` and their iterated refinement.

use super::flag::{rel_pos, Filtration};
use super::linalg::{from_columns, inverse, mat_mul, mat_vec, Field, Matrix, Subquotient, Subspace};
use super::GlError;
use crate::weyl::{NodeSubset, WeylDatum, WeylElement};

/// Two `n`-step filtrations of `F_q^d`, a permutation `sigma` of the blocks
/// (0-based) and isomorphisms `a_i : V_i/V_{i-1} -> V'_{sigma(i)}/V'_{sigma(i)-1}`.
///
/// Each `a_i` is a matrix in the bases of [`Subquotient::new`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quadruple {
    pub v: Filtration,
    pub vp: Filtration,
    pub sigma: Vec<usize>,
    pub a: Vec<Matrix>,
}

impl Quadruple {
    pub fn new(
        v: Filtration,
        vp: Filtration,
        sigma: Vec<usize>,
        a: Vec<Matrix>,
    ) -> Result<Self, GlError> {
        let bad = |m: String| Err(GlError::InvalidQuadruple(m));
        let n = v.len();
        if vp.len() != n || sigma.len() != n || a.len() != n {
            return bad("step counts differ".into());
        }
        if v.ambient() != vp.ambient() {
            return Err(GlError::AmbientMismatch);
        }
        let mut seen = vec![false; n];
        for &s in &sigma {
            if s >= n || std::mem::replace(&mut seen[s], true) {
                return bad("sigma is not a permutation".into());
            }
        }
        let (dv, dvp) = (v.block_dims(), vp.block_dims());
        for i in 0..n {
            let k = dv[i];
            if dvp[sigma[i]] != k {
                return bad(format!("block {} has dimension {k}, its target {}", i + 1, dvp[sigma[i]]));
            }
            if a[i].len() != k || a[i].iter().any(|r| r.len() != k) {
                return bad(format!("a_{} has the wrong shape", i + 1));
            }
            if inverse(v.field(), &a[i]).is_none() {
                return bad(format!("a_{} is not invertible", i + 1));
            }
        }
        Ok(Quadruple { v, vp, sigma, a })
    }

    pub fn field(&self) -> Field {
        self.v.field()
    }

    pub fn steps(&self) -> usize {
        self.v.len()
    }

    /// Drops zero blocks from both sides; `sigma` pairs zero blocks with zero blocks.
    pub fn compacted(&self) -> Quadruple {
        let dv = self.v.block_dims();
        let dvp = self.vp.block_dims();
        let keep_v: Vec<usize> = (0..dv.len()).filter(|&i| dv[i] > 0).collect();
        let keep_vp: Vec<usize> = (0..dvp.len()).filter(|&j| dvp[j] > 0).collect();
        let squeeze = |fl: &Filtration, keep: &[usize]| {
            let mut m = vec![fl.member(0).clone()];
            m.extend(keep.iter().map(|&i| fl.member(i + 1).clone()));
            Filtration::new(m).expect("compacting keeps a valid chain")
        };
        let renumber = |j: usize| keep_vp.iter().position(|&k| k == j).expect("nonzero target");
        Quadruple {
            v: squeeze(&self.v, &keep_v),
            vp: squeeze(&self.vp, &keep_vp),
            sigma: keep_v.iter().map(|&i| renumber(self.sigma[i])).collect(),
            a: keep_v.iter().map(|&i| self.a[i].clone()).collect(),
        }
    }

    /// Transport along `g`; the block maps are rewritten in the new bases.
    pub fn transport(&self, g: &Matrix) -> Quadruple {
        let f = self.field();
        let (v2, vp2) = (self.v.image(g), self.vp.image(g));
        let a = (0..self.steps())
            .map(|i| {
                let k = self.sigma[i];
                let src = block(&self.v, i);
                let dst = block(&self.vp, k);
                let src2 = block(&v2, i);
                let dst2 = block(&vp2, k);
                let cols: Vec<Vec<u8>> = (0..src2.dim())
                    .map(|t| {
                        let mut e = vec![0u8; src2.dim()];
                        e[t] = 1;
                        let x = inverse(f, g).map(|gi| mat_vec(f, &gi, &src2.lift(&e))).expect("g invertible");
                        let y = dst.lift(&mat_vec(f, &self.a[i], &src.coords(&x)));
                        dst2.coords(&mat_vec(f, g, &y))
                    })
                    .collect();
                from_columns(src2.dim(), &cols)
            })
            .collect();
        Quadruple { v: v2, vp: vp2, sigma: self.sigma.clone(), a }
    }
}

fn block(fl: &Filtration, i: usize) -> Subquotient {
    Subquotient::new(fl.member(i + 1), fl.member(i))
}

/// `(V_i ∩ V'_j) / ((V_{i-1} ∩ V'_j) + (V_i ∩ V'_{j-1}))`, with 1-based `i, j`.
fn middle(v: &Filtration, vp: &Filtration, i: usize, j: usize) -> Subquotient {
    let top = v.member(i).intersect(vp.member(j));
    let bottom = v.member(i - 1).intersect(vp.member(j)).sum(&v.member(i).intersect(vp.member(j - 1)));
    Subquotient::new(&top, &bottom)
}

/// `V_{i-1} + (V_i ∩ V'_j)`.
fn cross(v: &Filtration, vp: &Filtration, i: usize, j: usize) -> Subspace {
    v.member(i - 1).sum(&v.member(i).intersect(vp.member(j)))
}

/// One refinement step: returns `(Y_*, X_*, tau, b)` with `n^2` steps.
///
/// `X_{ij} = V_{i-1} + (V_i ∩ V'_j)` and `X'_{ij} = V'_{i-1} + (V'_i ∩ V_j)`;
/// `Y_{ij} ⊆ V_i` is the pullback under `a_i` of `X'_{sigma(i), j}`. The block
/// `(i, j)` of `Y` goes to block `(j, sigma(i))` of `X` via `b_{ij} = t a_i`,
/// where `t` is the Zassenhaus isomorphism
/// `X'_{kj}/X'_{k,j-1} -> X_{jk}/X_{j,k-1}` realized through the middle
/// quotient `(V_j ∩ V'_k)/((V_{j-1} ∩ V'_k) + (V_j ∩ V'_{k-1}))`.
/// Block `(i, j)` has flat index `(i-1) n + (j-1)`.
pub fn refine(qd: &Quadruple) -> Quadruple {
    let f = qd.field();
    let n = qd.steps();
    let (v, vp) = (&qd.v, &qd.vp);
    let d = v.ambient();
    let mut x = vec![Subspace::zero(f, d)];
    let mut y = vec![Subspace::zero(f, d)];
    let mut sigma = vec![0usize; n * n];
    let mut b = vec![Vec::new(); n * n];
    for i in 1..=n {
        let k = qd.sigma[i - 1] + 1;
        let vblock = block(v, i - 1);
        let vpblock = block(vp, k - 1);
        let a_inv = inverse(f, &qd.a[i - 1]).expect("a_i is invertible");
        for j in 1..=n {
            x.push(cross(v, vp, i, j));
            let xp = cross(vp, v, k, j);
            let pulled = Subspace::span(
                f,
                vblock.dim(),
                vpblock.image_of(&xp).basis().iter().map(|c| mat_vec(f, &a_inv, c)).collect(),
            );
            y.push(vblock.preimage(&pulled));
        }
        for j in 1..=n {
            let flat = (i - 1) * n + (j - 1);
            sigma[flat] = (j - 1) * n + (k - 1);
            let yblock = Subquotient::new(&y[flat + 1], &y[flat]);
            let xp_block = Subquotient::new(&cross(vp, v, k, j), &cross(vp, v, k, j - 1));
            let x_block = Subquotient::new(&cross(v, vp, j, k), &cross(v, vp, j, k - 1));
            let mid = middle(v, vp, j, k);
            let s = xp_block.matrix_from(&mid);
            let t = x_block.matrix_from(&mid);
            let zassenhaus = mat_mul(f, &t, &inverse(f, &s).expect("Zassenhaus map is invertible"));
            let cols: Vec<Vec<u8>> = (0..yblock.dim())
                .map(|c| {
                    let mut e = vec![0u8; yblock.dim()];
                    e[c] = 1;
                    let img = vpblock.lift(&mat_vec(f, &qd.a[i - 1], &vblock.coords(&yblock.lift(&e))));
                    mat_vec(f, &zassenhaus, &xp_block.coords(&img))
                })
                .collect();
            b[flat] = from_columns(yblock.dim(), &cols);
        }
    }
    Quadruple {
        v: Filtration::new(y).expect("Y is a chain"),
        vp: Filtration::new(x).expect("X is a chain"),
        sigma,
        a: b,
    }
}

/// Record `(type V^m, type V'^m, pos(V'^m, V^m))` of one iterate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Record {
    pub j: NodeSubset,
    pub jp: NodeSubset,
    pub pos: WeylElement,
}

/// The records up to stabilization, with the filtrations `V^m` they came from.
#[derive(Debug, Clone)]
pub struct Trace {
    pub records: Vec<Record>,
    pub v_iterates: Vec<Filtration>,
}

/// The stabilized record sequence classifying a quadruple.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModelSignature {
    pub records: Vec<Record>,
}

impl ModelSignature {
    /// Index of the last record.
    pub fn stabilization(&self) -> usize {
        self.records.len() - 1
    }
}

/// Iteration guard `2d + 4`.
pub fn signature_guard(d: usize) -> usize {
    2 * d + 4
}

/// Refines until two consecutive records agree; the repeated record is dropped.
///
/// Zero blocks are removed before each refinement, which leaves the records
/// unchanged and keeps the step count at most `d`.
pub fn trace(w: &WeylDatum, qd: &Quadruple, max_iter: usize) -> Result<Trace, GlError> {
    let mut cur = qd.compacted();
    let mut records: Vec<Record> = Vec::new();
    let mut v_iterates = Vec::new();
    for _ in 0..=max_iter {
        let rec = Record {
            j: cur.v.filtration_type(),
            jp: cur.vp.filtration_type(),
            pos: rel_pos(w, &cur.vp, &cur.v)?,
        };
        if records.last() == Some(&rec) {
            return Ok(Trace { records, v_iterates });
        }
        records.push(rec);
        v_iterates.push(cur.v.clone());
        cur = refine(&cur).compacted();
    }
    Err(GlError::NoStabilization { guard: max_iter })
}

pub fn signature(w: &WeylDatum, qd: &Quadruple, max_iter: usize) -> Result<ModelSignature, GlError> {
    Ok(ModelSignature { records: trace(w, qd, max_iter)?.records })
}

/// `pos(V'_*, V^m_*)` equals the projection of `u_0 u_1 ... u_m` for every `m`.
pub fn verify_position_product(w: &WeylDatum, qd: &Quadruple) -> Result<bool, GlError> {
    let t = trace(w, qd, signature_guard(qd.v.ambient()))?;
    position_product_on_trace(w, qd, &t)
}

pub(crate) fn position_product_on_trace(w: &WeylDatum, qd: &Quadruple, t: &Trace) -> Result<bool, GlError> {
    let jp0 = t.records[0].jp;
    let mut prod = w.identity();
    for (rec, vm) in t.records.iter().zip(&t.v_iterates) {
        prod = w.mul(prod, rec.pos)?;
        let measured = rel_pos(w, &qd.vp, vm)?;
        if measured != w.min_double_coset(jp0, prod, vm.filtration_type()) {
            return Ok(false);
        }
    }
    Ok(true)
}
