//! Linear algebra over a prime field `F_q`.
//!
//! Vectors are `Vec<u8>` of residues; matrices are row-major and act on
//! column vectors. A [`Subspace`] stores its basis in reduced row-echelon
//! form, so two subspaces are equal exactly when their structs are.

use super::GlError;

/// Residue arithmetic modulo a prime `q < 256`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Field {
    q: u8,
}

impl Field {
    pub fn new(q: u32) -> Result<Self, GlError> {
        let prime = q >= 2 && (2..q).take_while(|p| p * p <= q).all(|p| !q.is_multiple_of(p));
        if !prime || q > 255 {
            return Err(GlError::NotPrime(q));
        }
        Ok(Field { q: q as u8 })
    }

    pub fn order(self) -> u32 {
        self.q as u32
    }

    pub fn add(self, a: u8, b: u8) -> u8 {
        ((a as u16 + b as u16) % self.q as u16) as u8
    }

    pub fn sub(self, a: u8, b: u8) -> u8 {
        ((a as u16 + self.q as u16 - b as u16) % self.q as u16) as u8
    }

    pub fn mul(self, a: u8, b: u8) -> u8 {
        ((a as u16 * b as u16) % self.q as u16) as u8
    }

    pub fn neg(self, a: u8) -> u8 {
        self.sub(0, a)
    }

    pub fn inv(self, a: u8) -> u8 {
        assert!(a != 0, "zero has no inverse");
        // a^(q-2)
        let mut acc = 1u8;
        for _ in 0..self.q - 2 {
            acc = self.mul(acc, a);
        }
        acc
    }

    /// `row += c * other`.
    fn axpy(self, row: &mut [u8], c: u8, other: &[u8]) {
        if c == 0 {
            return;
        }
        for (x, &y) in row.iter_mut().zip(other) {
            *x = self.add(*x, self.mul(c, y));
        }
    }

    /// All vectors of `F_q^n` in lexicographic order.
    pub fn vectors(self, n: usize) -> Vec<Vec<u8>> {
        let mut out = vec![Vec::with_capacity(n)];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..self.q).map(move |c| {
                        let mut w = v.clone();
                        w.push(c);
                        w
                    })
                })
                .collect();
        }
        out
    }
}

pub type Matrix = Vec<Vec<u8>>;

/// Reduced row-echelon form of `rows`, zero rows dropped, with pivot columns.
pub fn rref(f: Field, mut rows: Vec<Vec<u8>>) -> (Vec<Vec<u8>>, Vec<usize>) {
    let width = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, p);
        let s = f.inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, s);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let c0 = f.neg(row[c]);
                f.axpy(row, c0, &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| u8::from(i == j)).collect()).collect()
}

pub fn mat_vec(f: Field, m: &Matrix, v: &[u8]) -> Vec<u8> {
    m.iter()
        .map(|row| row.iter().zip(v).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
        .collect()
}

pub fn mat_mul(f: Field, a: &Matrix, b: &Matrix) -> Matrix {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b).fold(0, |acc, (&x, br)| f.add(acc, f.mul(x, br[j]))))
                .collect()
        })
        .collect()
}

/// Matrix whose columns are the given vectors.
pub fn from_columns(n_rows: usize, cols: &[Vec<u8>]) -> Matrix {
    (0..n_rows).map(|i| cols.iter().map(|c| c[i]).collect()).collect()
}

pub fn inverse(f: Field, m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let aug: Vec<Vec<u8>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| u8::from(i == j)));
            r
        })
        .collect();
    let (red, pivots) = rref(f, aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(red.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// All of `GL_n(F_q)`, built row by row outside the span of earlier rows.
pub fn general_linear(f: Field, n: usize) -> Vec<Matrix> {
    let vectors = f.vectors(n);
    let mut out: Vec<Matrix> = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for m in &out {
            let span = Subspace::span(f, n, m.clone());
            for v in &vectors {
                if !span.contains_vec(v) {
                    let mut m2 = m.clone();
                    m2.push(v.clone());
                    next.push(m2);
                }
            }
        }
        out = next;
    }
    out
}

/// `#GL_n(F_q)`.
pub fn gl_order(q: u64, n: usize) -> u64 {
    let qn = q.pow(n as u32);
    (0..n as u32).map(|i| qn - q.pow(i)).product()
}

/// A subspace of `F_q^d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    d: usize,
    q: u8,
    rows: Vec<Vec<u8>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn span(f: Field, d: usize, vectors: Vec<Vec<u8>>) -> Self {
        debug_assert!(vectors.iter().all(|v| v.len() == d));
        let (rows, pivots) = rref(f, vectors);
        Subspace { d, q: f.q, rows, pivots }
    }

    pub fn zero(f: Field, d: usize) -> Self {
        Subspace { d, q: f.q, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(f: Field, d: usize) -> Self {
        Subspace::span(f, d, identity(d))
    }

    /// Span of the first `k` standard basis vectors.
    pub fn standard(f: Field, d: usize, k: usize) -> Self {
        Subspace::span(f, d, identity(d).into_iter().take(k).collect())
    }

    pub fn field(&self) -> Field {
        Field { q: self.q }
    }

    pub fn ambient(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// `v` reduced against the basis: zero exactly when `v` lies in the subspace.
    pub fn reduce(&self, v: &[u8]) -> Vec<u8> {
        let f = self.field();
        let mut r = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = f.neg(r[p]);
            f.axpy(&mut r, c, row);
        }
        r
    }

    pub fn contains_vec(&self, v: &[u8]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        other.rows.iter().all(|r| self.contains_vec(r))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Subspace::span(self.field(), self.d, rows)
    }

    /// The annihilator under the standard pairing.
    pub fn annihilator(&self) -> Subspace {
        let f = self.field();
        let free = (0..self.d).filter(|c| !self.pivots.contains(c));
        let basis = free
            .map(|c| {
                let mut v = vec![0u8; self.d];
                v[c] = 1;
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    v[p] = f.neg(row[c]);
                }
                v
            })
            .collect();
        Subspace::span(f, self.d, basis)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        self.annihilator().sum(&other.annihilator()).annihilator()
    }

    /// Image under `g`.
    pub fn image(&self, g: &Matrix) -> Subspace {
        let f = self.field();
        Subspace::span(f, self.d, self.rows.iter().map(|r| mat_vec(f, g, r)).collect())
    }

    /// Every `k`-dimensional subspace of `F_q^d`, ordered by pivot set then entries.
    pub fn all_of_dim(f: Field, d: usize, k: usize) -> Vec<Subspace> {
        let mut out = Vec::new();
        for pivots in combinations(d, k) {
            // free slots: row r, column c > pivot r, c not a pivot
            let slots: Vec<(usize, usize)> = (0..k)
                .flat_map(|r| {
                    let pv = pivots.clone();
                    ((pivots[r] + 1)..d).filter(move |c| !pv.contains(c)).map(move |c| (r, c))
                })
                .collect();
            for fill in f.vectors(slots.len()) {
                let mut rows = vec![vec![0u8; d]; k];
                for (r, &p) in pivots.iter().enumerate() {
                    rows[r][p] = 1;
                }
                for (&(r, c), &x) in slots.iter().zip(&fill) {
                    rows[r][c] = x;
                }
                out.push(Subspace { d, q: f.q, rows, pivots: pivots.clone() });
            }
        }
        out
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    for first in 0..n {
        for rest in combinations(n - first - 1, k - 1) {
            let mut c = vec![first];
            c.extend(rest.into_iter().map(|x| x + first + 1));
            out.push(c);
        }
    }
    out
}

/// `top / bottom` with the basis obtained by reducing `top` modulo `bottom`,
/// so the coset representatives vanish on the pivot columns of `bottom`.
#[derive(Debug, Clone)]
pub struct Subquotient {
    bottom: Subspace,
    basis: Subspace,
}

impl Subquotient {
    pub fn new(top: &Subspace, bottom: &Subspace) -> Self {
        debug_assert!(top.contains(bottom), "bottom must lie in top");
        let reduced = top.rows.iter().map(|r| bottom.reduce(r)).collect();
        let basis = Subspace::span(top.field(), top.d, reduced);
        debug_assert_eq!(basis.dim() + bottom.dim(), top.dim());
        Subquotient { bottom: bottom.clone(), basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// Coordinates of the class of `v`, which must lie in `top`.
    pub fn coords(&self, v: &[u8]) -> Vec<u8> {
        let r = self.bottom.reduce(v);
        let c: Vec<u8> = self.basis.pivots.iter().map(|&p| r[p]).collect();
        debug_assert!(self.basis.reduce(&r).iter().all(|&x| x == 0), "vector not in top");
        c
    }

    /// The representative with the given coordinates.
    pub fn lift(&self, c: &[u8]) -> Vec<u8> {
        let f = self.basis.field();
        let mut v = vec![0u8; self.basis.d];
        for (row, &x) in self.basis.rows.iter().zip(c) {
            f.axpy(&mut v, x, row);
        }
        v
    }

    /// The image in coordinates of a subspace `s ⊆ top`.
    pub fn image_of(&self, s: &Subspace) -> Subspace {
        let f = self.basis.field();
        Subspace::span(f, self.dim(), s.rows.iter().map(|r| self.coords(r)).collect())
    }

    /// `bottom + lift(w)` for a subspace `w` of the coordinate space.
    pub fn preimage(&self, w: &Subspace) -> Subspace {
        let f = self.basis.field();
        let lifted = Subspace::span(f, self.basis.d, w.rows.iter().map(|c| self.lift(c)).collect());
        self.bottom.sum(&lifted)
    }

    /// Matrix of the map induced by the inclusion of `from`'s representatives.
    pub fn matrix_from(&self, from: &Subquotient) -> Matrix {
        let cols: Vec<Vec<u8>> = (0..from.dim())
            .map(|k| {
                let mut e = vec![0u8; from.dim()];
                e[k] = 1;
                self.coords(&from.lift(&e))
            })
            .collect();
        from_columns(self.dim(), &cols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u32) -> Field {
        Field::new(q).unwrap()
    }

    #[test]
    fn field_rejects_composites() {
        for q in [0, 1, 4, 6, 9, 256] {
            assert!(Field::new(q).is_err(), "{q}");
        }
        let f5 = f(5);
        assert_eq!(f5.mul(f5.inv(3), 3), 1);
    }

    #[test]
    fn subspace_counts_are_gaussian_binomials() {
        assert_eq!(Subspace::all_of_dim(f(2), 3, 1).len(), 7);
        assert_eq!(Subspace::all_of_dim(f(2), 4, 2).len(), 35);
        assert_eq!(Subspace::all_of_dim(f(3), 3, 2).len(), 13);
        assert_eq!(Subspace::all_of_dim(f(3), 2, 0).len(), 1);
    }

    #[test]
    fn general_linear_orders() {
        assert_eq!(general_linear(f(2), 3).len() as u64, gl_order(2, 3));
        assert_eq!(general_linear(f(3), 2).len() as u64, 48);
        assert_eq!(general_linear(f(2), 0).len(), 1);
        for g in general_linear(f(3), 2) {
            let h = inverse(f(3), &g).unwrap();
            assert_eq!(mat_mul(f(3), &g, &h), identity(2));
        }
    }

    #[test]
    fn dimension_formula_and_canonicity_exhaustive() {
        for (q, d) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
            let fq = f(q);
            let all: Vec<Subspace> =
                (0..=d).flat_map(|k| Subspace::all_of_dim(fq, d, k)).collect();
            for a in &all {
                assert_eq!(a.annihilator().dim(), d - a.dim());
                for b in &all {
                    let s = a.sum(b);
                    let i = a.intersect(b);
                    assert!(a.contains(&i) && b.contains(&i) && s.contains(a));
                    assert_eq!(a.dim() + b.dim(), s.dim() + i.dim());
                    assert_eq!(s, b.sum(a));
                    assert_eq!(a == b, a.contains(b) && b.contains(a));
                }
            }
        }
    }

    #[test]
    fn subquotient_round_trip() {
        let fq = f(3);
        let top = Subspace::full(fq, 3);
        for bottom in Subspace::all_of_dim(fq, 3, 1) {
            let sq = Subquotient::new(&top, &bottom);
            assert_eq!(sq.dim(), 2);
            for c in fq.vectors(2) {
                assert_eq!(sq.coords(&sq.lift(&c)), c);
            }
            for b in bottom.basis() {
                assert!(sq.coords(b).iter().all(|&x| x == 0));
            }
        }
    }
}
