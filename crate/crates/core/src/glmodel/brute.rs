//! Exhaustive enumerations over `GL_d(F_q)`.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rayon::prelude::*;

use super::classify::{classify_line_hyperplane, classify_line_pair};
use super::flag::{count_with_blocks, element_to_perm, perm_matrix, rel_pos, Filtration};
use super::linalg::{general_linear, gl_order, identity, mat_mul, Field, Matrix};
use super::quadruple::{position_product_on_trace, signature_guard, trace, ModelSignature, Quadruple};
use super::GlError;
use crate::pieces::{self, Step, TwistedPair};
use crate::weyl::{NodeSubset, WeylDatum, WeylElement};

/// Default bound on the number of objects an enumeration may visit.
pub const DEFAULT_GUARD: u128 = 10_000_000;

/// Which quadruples to enumerate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Config {
    /// `V = (0, V_1, V)`, `V' = (0, V'_1, V)` with lines `V_1, V'_1` and `sigma = id`.
    LinePair,
    /// `V = (0, V_1, V)`, `V' = (0, H, V)` with a hyperplane `H`; `sigma` swaps the blocks.
    LineHyperplane,
    /// Block dimensions of `V_*` and a matching `sigma` (0-based).
    Full { blocks: Vec<usize>, sigma: Vec<usize> },
}

impl Config {
    pub fn name(&self) -> String {
        match self {
            Config::LinePair => "two_step_1dim".into(),
            Config::LineHyperplane => "hyperplane_dual".into(),
            Config::Full { blocks, sigma } => {
                let s: Vec<usize> = sigma.iter().map(|x| x + 1).collect();
                format!("full(blocks={blocks:?},sigma={s:?})")
            }
        }
    }

    /// Block dimensions of `V_*` and `V'_*`, and `sigma`.
    #[allow(clippy::type_complexity)]
    pub fn shape(&self, d: usize) -> Result<(Vec<usize>, Vec<usize>, Vec<usize>), GlError> {
        let (blocks, sigma) = match self {
            Config::LinePair => (vec![1, d - 1], vec![0, 1]),
            Config::LineHyperplane => (vec![1, d - 1], vec![1, 0]),
            Config::Full { blocks, sigma } => (blocks.clone(), sigma.clone()),
        };
        let n = blocks.len();
        let mut sorted = sigma.clone();
        sorted.sort_unstable();
        if blocks.iter().sum::<usize>() != d
            || blocks.contains(&0)
            || sigma.len() != n
            || sorted != (0..n).collect::<Vec<_>>()
        {
            return Err(GlError::InvalidConfig(format!("{blocks:?} with sigma {sigma:?} in dimension {d}")));
        }
        let mut target = vec![0; n];
        for i in 0..n {
            target[sigma[i]] = blocks[i];
        }
        Ok((blocks, target, sigma))
    }

    /// Every composition of `d` with every matching.
    pub fn all_full(d: usize) -> Vec<Config> {
        let mut out = Vec::new();
        for blocks in compositions(d) {
            for sigma in permutations(blocks.len()) {
                out.push(Config::Full { blocks: blocks.clone(), sigma });
            }
        }
        out
    }

    /// Number of quadruples.
    pub fn size(&self, d: usize, q: u64) -> Result<u128, GlError> {
        let (blocks, target, _) = self.shape(d)?;
        let gl: u128 = blocks.iter().map(|&b| gl_order(q, b) as u128).product();
        Ok(count_with_blocks(q, &blocks) as u128 * count_with_blocks(q, &target) as u128 * gl)
    }

    /// The twisted pair `(J, y)` of `GL_d` whose variety this configuration enumerates:
    /// `J` is the type of `V_*` and `y` the minimal representative of the block
    /// permutation sending block `i` of `V_*` onto block `sigma(i)` of `V'_*`.
    pub fn pair(&self, w: &WeylDatum) -> Result<TwistedPair, GlError> {
        let d = w.rank() + 1;
        let (blocks, target, sigma) = self.shape(d)?;
        let starts = |b: &[usize]| -> Vec<usize> {
            b.iter().scan(0, |acc, &x| Some(std::mem::replace(acc, *acc + x))).collect()
        };
        let (s, sp) = (starts(&blocks), starts(&target));
        let mut perm = vec![0; d];
        for i in 0..blocks.len() {
            for t in 0..blocks[i] {
                perm[s[i] + t] = sp[sigma[i]] + t;
            }
        }
        let j = type_of_blocks(&blocks);
        let jp = type_of_blocks(&target);
        let y = w.min_double_coset(jp, super::flag::perm_to_element(w, &perm), j);
        Ok(TwistedPair::new(w, j, y)?)
    }
}

fn type_of_blocks(blocks: &[usize]) -> NodeSubset {
    let d: usize = blocks.iter().sum();
    let mut t = NodeSubset::full(d - 1);
    let mut acc = 0;
    for &b in &blocks[..blocks.len() - 1] {
        acc += b;
        t = t.difference(NodeSubset::singleton(acc - 1));
    }
    t
}

fn compositions(d: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![Vec::new()];
    }
    (1..=d)
        .flat_map(|first| {
            compositions(d - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for slot in 0..n {
            let mut v = p.clone();
            v.insert(slot, n - 1);
            out.push(v);
        }
    }
    out.sort();
    out
}

/// One signature class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bucket {
    pub signature: ModelSignature,
    pub size: u64,
    /// Index of the descriptor with the same step sequence, if any.
    pub matched_sigma: Option<usize>,
    /// The matched descriptor's point count at `q`.
    pub predicted: Option<i128>,
    /// Values of the direct classifier seen in this class (named configurations only).
    pub classes: BTreeSet<usize>,
    /// Quadruples violating `pos(V'_*, V^m_*) = u_0 ... u_m`.
    pub position_failures: u64,
}

/// Outcome of one exhaustive run.
#[derive(Debug, Clone)]
pub struct PartitionReport {
    pub config: Config,
    pub d: usize,
    pub q: u32,
    pub pair: TwistedPair,
    pub buckets: Vec<Bucket>,
    pub descriptors: usize,
    pub total: u64,
}

impl PartitionReport {
    pub fn all_matched(&self) -> bool {
        let matched: BTreeSet<_> = self.buckets.iter().filter_map(|b| b.matched_sigma).collect();
        self.buckets.iter().all(|b| b.matched_sigma.is_some()) && matched.len() == self.descriptors
    }

    pub fn sizes_agree(&self) -> bool {
        self.buckets.iter().all(|b| b.predicted == Some(b.size as i128))
    }

    /// Each class sees a single classifier value and distinct classes see distinct values.
    pub fn classifier_agrees(&self) -> bool {
        if matches!(self.config, Config::Full { .. }) {
            return true;
        }
        let values: BTreeSet<_> = self.buckets.iter().flat_map(|b| b.classes.iter()).collect();
        self.buckets.iter().all(|b| b.classes.len() == 1) && values.len() == self.buckets.len()
    }

    pub fn position_failures(&self) -> u64 {
        self.buckets.iter().map(|b| b.position_failures).sum()
    }

    pub fn expected_bucket_count(&self) -> Option<usize> {
        match self.config {
            Config::Full { .. } => None,
            _ => Some(self.d),
        }
    }

    pub fn holds(&self) -> bool {
        self.all_matched()
            && self.sizes_agree()
            && self.classifier_agrees()
            && self.position_failures() == 0
            && self.expected_bucket_count().is_none_or(|n| n == self.buckets.len())
    }
}

#[derive(Default)]
struct Acc {
    size: u64,
    classes: BTreeSet<usize>,
    failures: u64,
}

fn merge(
    mut a: BTreeMap<ModelSignature, Acc>,
    b: BTreeMap<ModelSignature, Acc>,
) -> BTreeMap<ModelSignature, Acc> {
    for (k, v) in b {
        let e = a.entry(k).or_default();
        e.size += v.size;
        e.classes.extend(v.classes);
        e.failures += v.failures;
    }
    a
}

/// The ambient dimension `d` if `w` is of type `A_{d-1}` with torus rank `d`.
fn check_gl(w: &WeylDatum) -> Result<usize, GlError> {
    let d = w.rank() + 1;
    let chain = (0..w.rank()).all(|i| {
        (0..w.rank()).all(|j| {
            let want = match i.abs_diff(j) {
                0 => 1,
                1 => 3,
                _ => 2,
            };
            w.coxeter_matrix()[i][j] == want
        })
    });
    if !chain || w.torus_rank() != d || !w.delta_is_identity() {
        return Err(GlError::InvalidConfig(format!("{w:?} is not the Weyl datum of GL_{d}")));
    }
    Ok(d)
}

fn check_guard(size: u128, guard: u128) -> Result<(), GlError> {
    if size > guard {
        return Err(GlError::TooLarge { size, limit: guard });
    }
    Ok(())
}

/// Enumerates every quadruple of the configuration, buckets by signature and
/// matches buckets with the piece descriptors of the corresponding pair.
///
/// `w` must be the datum of [`gl_datum`](super::gl_datum).
pub fn brute_force_partition(
    w: &WeylDatum,
    q: u32,
    config: &Config,
    guard: u128,
) -> Result<PartitionReport, GlError> {
    let f = Field::new(q)?;
    let d = check_gl(w)?;
    check_guard(config.size(d, q as u64)?, guard)?;
    let (blocks, target, sigma) = config.shape(d)?;
    let tp = config.pair(w)?;
    let vs = Filtration::all_with_blocks(f, &blocks);
    let vps = Filtration::all_with_blocks(f, &target);
    let mut maps: Vec<Vec<Matrix>> = vec![Vec::new()];
    for &b in &blocks {
        let gl = general_linear(f, b);
        maps = maps
            .into_iter()
            .flat_map(|m| {
                gl.iter().map(move |g| {
                    let mut m2 = m.clone();
                    m2.push(g.clone());
                    m2
                })
            })
            .collect();
    }
    let max_iter = signature_guard(d);
    let classify = |qd: &Quadruple| match config {
        Config::LinePair => Some(classify_line_pair(qd.v.member(1), qd.vp.member(1), &qd.a[1])),
        Config::LineHyperplane => {
            Some(classify_line_hyperplane(qd.v.member(1), qd.vp.member(1), &qd.a[1]))
        }
        Config::Full { .. } => None,
    };
    let buckets = vs
        .par_iter()
        .map(|v| -> Result<BTreeMap<ModelSignature, Acc>, GlError> {
            let mut local: BTreeMap<ModelSignature, Acc> = BTreeMap::new();
            for vp in &vps {
                for a in &maps {
                    let qd = Quadruple::new(v.clone(), vp.clone(), sigma.clone(), a.clone())?;
                    let t = trace(w, &qd, max_iter)?;
                    let ok = position_product_on_trace(w, &qd, &t)?;
                    let e = local.entry(ModelSignature { records: t.records }).or_default();
                    e.size += 1;
                    e.failures += u64::from(!ok);
                    e.classes.extend(classify(&qd));
                }
            }
            Ok(local)
        })
        .try_reduce(BTreeMap::new, |a, b| Ok(merge(a, b)))?;
    let descriptors = pieces::enumerate(w, &tp)?;
    let mut out: Vec<Bucket> = buckets
        .into_iter()
        .map(|(signature, acc)| {
            let steps: Vec<Step> =
                signature.records.iter().map(|r| Step { j: r.j, jp: r.jp, u: r.pos }).collect();
            let matched = descriptors.iter().position(|dsc| dsc.steps == steps);
            Bucket {
                predicted: matched.map(|i| descriptors[i].count.eval(q as i128)),
                matched_sigma: matched,
                signature,
                size: acc.size,
                classes: acc.classes,
                position_failures: acc.failures,
            }
        })
        .collect();
    out.sort_by(|a, b| (a.matched_sigma.is_none(), a.matched_sigma, &a.signature).cmp(&(
        b.matched_sigma.is_none(),
        b.matched_sigma,
        &b.signature,
    )));
    let total = out.iter().map(|b| b.size).sum();
    Ok(PartitionReport {
        config: config.clone(),
        d,
        q,
        pair: tp,
        buckets: out,
        descriptors: descriptors.len(),
        total,
    })
}

/// Block number of each coordinate for the standard filtration of type `j`.
fn block_of(d: usize, j: NodeSubset) -> Vec<usize> {
    let mut b = 0;
    (0..d)
        .map(|k| {
            if k > 0 && !j.contains(k - 1) {
                b += 1;
            }
            b
        })
        .collect()
}

/// The stabilizer of the standard filtration of type `j`: block upper triangular matrices.
pub fn standard_parabolic(f: Field, d: usize, j: NodeSubset) -> Vec<Matrix> {
    let blk = block_of(d, j);
    general_linear(f, d)
        .into_iter()
        .filter(|g| (0..d).all(|r| (0..d).all(|c| blk[r] <= blk[c] || g[r][c] == 0)))
        .collect()
}

/// Its unipotent radical: identity on the diagonal blocks, zero below them.
pub fn standard_unipotent(f: Field, d: usize, j: NodeSubset) -> Vec<Matrix> {
    let blk = block_of(d, j);
    let slots: Vec<(usize, usize)> =
        (0..d).flat_map(|r| (0..d).map(move |c| (r, c))).filter(|&(r, c)| blk[r] < blk[c]).collect();
    f.vectors(slots.len())
        .into_iter()
        .map(|fill| {
            let mut g = identity(d);
            for (&(r, c), &x) in slots.iter().zip(&fill) {
                g[r][c] = x;
            }
            g
        })
        .collect()
}

/// Result of the double-coset check for one `(J, J', y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleCosetCheck {
    /// `#{g : pos(P', gPg^-1) = y}`.
    pub a_y: usize,
    /// Whether that set equals `P' y U_P`.
    pub single_coset: bool,
    /// Number of `U_{P'} x U_P` orbits on it.
    pub gamma_count: usize,
    /// `#L_{J'}(F_q)`.
    pub levi_order: u64,
}

impl DoubleCosetCheck {
    pub fn holds(&self) -> bool {
        self.single_coset && self.gamma_count as u64 == self.levi_order
    }
}

/// For standard `P` of type `j` and `P'` of type `jp`: the set
/// `A_y = {g : pos(P', gPg^-1) = y}` is one `(P', U_P)` double coset and
/// carries `#L_{J'}(F_q)` orbits of `U_{P'} x U_P`.
pub fn verify_double_coset(
    q: u32,
    w: &WeylDatum,
    j: NodeSubset,
    jp: NodeSubset,
    y: WeylElement,
    guard: u128,
) -> Result<DoubleCosetCheck, GlError> {
    let f = Field::new(q)?;
    let d = check_gl(w)?;
    check_guard(gl_order(q as u64, d) as u128, guard)?;
    let flag = Filtration::standard_of_type(f, d, j);
    let flag_p = Filtration::standard_of_type(f, d, jp);
    let gl = general_linear(f, d);
    let mut a_y: Vec<Matrix> = Vec::new();
    for g in gl {
        if rel_pos(w, &flag_p, &flag.image(&g))? == y {
            a_y.push(g);
        }
    }
    let a_set: HashSet<&Matrix> = a_y.iter().collect();
    let p_prime = standard_parabolic(f, d, jp);
    let u_p = standard_unipotent(f, d, j);
    let u_pp = standard_unipotent(f, d, jp);
    let g0 = perm_matrix(&element_to_perm(w, y));
    let mut coset: HashSet<Matrix> = HashSet::new();
    for p in &p_prime {
        let pg = mat_mul(f, p, &g0);
        for u in &u_p {
            coset.insert(mat_mul(f, &pg, u));
        }
    }
    let single_coset = coset.len() == a_set.len() && coset.iter().all(|g| a_set.contains(g));
    // orbits of (x, z) : g -> x g z
    let mut seen: HashSet<Matrix> = HashSet::new();
    let mut gamma_count = 0;
    for g in &a_y {
        if seen.contains(g) {
            continue;
        }
        gamma_count += 1;
        for x in &u_pp {
            let xg = mat_mul(f, x, g);
            for z in &u_p {
                seen.insert(mat_mul(f, &xg, z));
            }
        }
    }
    let levi_order = super::flag::Filtration::standard_of_type(f, d, jp)
        .block_dims()
        .iter()
        .map(|&b| gl_order(q as u64, b))
        .product();
    Ok(DoubleCosetCheck { a_y: a_y.len(), single_coset, gamma_count, levi_order })
}

/// `#U_P / #(U_P ∩ U_Q)` for standard `P` of type `j` and `Q = u P_K u^-1`.
pub fn measure_unipotent_quotient(
    q: u32,
    w: &WeylDatum,
    j: NodeSubset,
    u: WeylElement,
    k: NodeSubset,
) -> Result<u64, GlError> {
    let f = Field::new(q)?;
    let d = check_gl(w)?;
    let perm = element_to_perm(w, u);
    let g = perm_matrix(&perm);
    let g_inv = super::linalg::inverse(f, &g).expect("permutation matrices are invertible");
    let u_p = standard_unipotent(f, d, j);
    let u_q: HashSet<Matrix> =
        standard_unipotent(f, d, k).iter().map(|x| mat_mul(f, &mat_mul(f, &g, x), &g_inv)).collect();
    let meet = u_p.iter().filter(|x| u_q.contains(*x)).count() as u64;
    Ok(u_p.len() as u64 / meet)
}
