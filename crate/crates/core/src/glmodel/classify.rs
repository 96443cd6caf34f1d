//! Direct classifiers for the two one-line configurations.

use super::linalg::{inverse, mat_vec, Matrix, Subquotient, Subspace};

fn pull_back(sq: &Subquotient, b_inv: &Matrix, coords: &Subspace) -> Subspace {
    let f = coords.field();
    let rows = coords.basis().iter().map(|c| mat_vec(f, b_inv, c)).collect();
    sq.preimage(&Subspace::span(f, sq.dim(), rows))
}

/// Two lines `V_1`, `V'_1` and `b : V/V_1 -> V/V'_1`. Builds
/// `V_j = V_1 + b^{-1}((V_{j-1} + V'_1)/V'_1)` and returns the first `k`
/// with `V'_1 ⊆ V_k`.
pub fn classify_line_pair(v1: &Subspace, vp1: &Subspace, b: &Matrix) -> usize {
    let f = v1.field();
    let d = v1.ambient();
    let whole = Subspace::full(f, d);
    let src = Subquotient::new(&whole, v1);
    let dst = Subquotient::new(&whole, vp1);
    let b_inv = inverse(f, b).expect("b is invertible");
    let mut cur = v1.clone();
    for k in 1..=d {
        if cur.contains(vp1) {
            return k;
        }
        cur = pull_back(&src, &b_inv, &dst.image_of(&cur.sum(vp1)));
        debug_assert_eq!(cur.dim(), k + 1);
    }
    unreachable!("V_d is the whole space")
}

/// A line `V_1`, a hyperplane `H` and `b : V/V_1 -> H`. Builds
/// `V_j = V_1 + b^{-1}(V_{j-1})` while `V_{j-1} ⊆ H` and returns the first
/// `k` with `V_k ⊄ H`.
pub fn classify_line_hyperplane(v1: &Subspace, h: &Subspace, b: &Matrix) -> usize {
    let f = v1.field();
    let d = v1.ambient();
    let src = Subquotient::new(&Subspace::full(f, d), v1);
    let dst = Subquotient::new(h, &Subspace::zero(f, d));
    let b_inv = inverse(f, b).expect("b is invertible");
    let mut cur = v1.clone();
    for k in 1..=d {
        if !h.contains(&cur) {
            return k;
        }
        cur = pull_back(&src, &b_inv, &dst.image_of(&cur));
        debug_assert_eq!(cur.dim(), k + 1);
    }
    unreachable!("V_d is not inside a hyperplane")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::glmodel::linalg::{general_linear, Field};

    #[test]
    fn equal_lines_give_one() {
        let f = Field::new(3).unwrap();
        for l in Subspace::all_of_dim(f, 3, 1) {
            for b in general_linear(f, 2).iter().take(5) {
                assert_eq!(classify_line_pair(&l, &l, b), 1);
            }
        }
    }

    #[test]
    fn plane_cases() {
        let f = Field::new(2).unwrap();
        let lines = Subspace::all_of_dim(f, 2, 1);
        let one = vec![vec![1u8]];
        for a in &lines {
            for b in &lines {
                assert_eq!(classify_line_pair(a, b, &one), if a == b { 1 } else { 2 });
                // in the plane the hyperplane is a line
                assert_eq!(classify_line_hyperplane(a, b, &one), if a == b { 2 } else { 1 });
            }
        }
    }
}
