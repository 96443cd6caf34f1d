//! Integer polynomials in `q` kept in the normalized factored form
//! `q^a (q-1)^b P(q)` with `P(0) != 0` and `P(1) != 0`.

use std::fmt;
use std::ops::{Add, Mul};

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

/// A point-count polynomial.
///
/// The factored form is normalized: every power of `q` and of `q - 1` that
/// divides the polynomial is pulled out of the cofactor, so two values are
/// equal exactly when their expansions are equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CountPolynomial {
    q_power: u32,
    qm1_power: u32,
    /// Cofactor coefficients, ascending degree. Empty means the zero polynomial.
    cofactor: Vec<i128>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("(q-1)^{wanted} does not divide a polynomial with (q-1)-valuation {have}")]
    NonDivisible { wanted: u32, have: u32 },
    #[error("q^{shift} would leave a negative power of q (valuation {have})")]
    NegativeQPower { shift: i64, have: u32 },
}

fn trim(c: &mut Vec<i128>) {
    while c.last() == Some(&0) {
        c.pop();
    }
}

fn mul_coeffs(a: &[i128], b: &[i128]) -> Vec<i128> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Divides by `(q - 1)` when the remainder vanishes.
fn div_qm1(c: &[i128]) -> Option<Vec<i128>> {
    if c.is_empty() {
        return None;
    }
    // synthetic division by the root 1, from the top coefficient down
    let n = c.len();
    let mut quot = vec![0i128; n - 1];
    let mut acc = 0i128;
    for k in (1..n).rev() {
        acc += c[k];
        quot[k - 1] = acc;
    }
    if acc + c[0] != 0 {
        return None;
    }
    Some(quot)
}

fn qm1_pow(b: u32) -> Vec<i128> {
    let mut out = vec![1i128];
    for _ in 0..b {
        out = mul_coeffs(&out, &[-1, 1]);
    }
    out
}

impl CountPolynomial {
    pub fn zero() -> Self {
        CountPolynomial { q_power: 0, qm1_power: 0, cofactor: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    /// `q^k`.
    pub fn monomial(k: u32) -> Self {
        CountPolynomial { q_power: k, qm1_power: 0, cofactor: vec![1] }
    }

    /// `(q - 1)^k`.
    pub fn q_minus_one_pow(k: u32) -> Self {
        CountPolynomial { q_power: 0, qm1_power: k, cofactor: vec![1] }
    }

    /// Builds from ascending coefficients and normalizes the factorization.
    pub fn from_coeffs(coeffs: &[i128]) -> Self {
        let mut c = coeffs.to_vec();
        trim(&mut c);
        if c.is_empty() {
            return Self::zero();
        }
        let a = c.iter().take_while(|&&x| x == 0).count();
        let mut c = c.split_off(a);
        let mut b = 0;
        while let Some(next) = div_qm1(&c) {
            c = next;
            b += 1;
        }
        CountPolynomial { q_power: a as u32, qm1_power: b, cofactor: c }
    }

    /// `sum_{w} q^{l(w)}` for a list of lengths.
    pub fn from_lengths<I: IntoIterator<Item = u32>>(lengths: I) -> Self {
        let mut c: Vec<i128> = Vec::new();
        for l in lengths {
            let l = l as usize;
            if c.len() <= l {
                c.resize(l + 1, 0);
            }
            c[l] += 1;
        }
        Self::from_coeffs(&c)
    }

    pub fn is_zero(&self) -> bool {
        self.cofactor.is_empty()
    }

    pub fn q_power(&self) -> u32 {
        self.q_power
    }

    pub fn qm1_power(&self) -> u32 {
        self.qm1_power
    }

    pub fn cofactor(&self) -> &[i128] {
        &self.cofactor
    }

    /// Ascending coefficients of the expanded polynomial.
    pub fn coeffs(&self) -> Vec<i128> {
        if self.is_zero() {
            return Vec::new();
        }
        let mut out = vec![0i128; self.q_power as usize];
        out.extend(mul_coeffs(&qm1_pow(self.qm1_power), &self.cofactor));
        trim(&mut out);
        out
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        if self.is_zero() {
            None
        } else {
            Some(self.q_power + self.qm1_power + self.cofactor.len() as u32 - 1)
        }
    }

    pub fn leading_coefficient(&self) -> i128 {
        self.cofactor.last().copied().unwrap_or(0)
    }

    pub fn eval(&self, q: i128) -> i128 {
        self.coeffs().iter().rev().fold(0, |acc, &c| acc * q + c)
    }

    /// Multiplies by `q^shift`; a negative shift must be absorbed by the
    /// existing power of `q`.
    pub fn shift(&self, shift: i64) -> Result<Self, PolyError> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let a = self.q_power as i64 + shift;
        if a < 0 {
            return Err(PolyError::NegativeQPower { shift, have: self.q_power });
        }
        Ok(CountPolynomial { q_power: a as u32, ..self.clone() })
    }

    /// Exact division by `(q - 1)^k`.
    pub fn div_q_minus_one(&self, k: u32) -> Result<Self, PolyError> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        if self.qm1_power < k {
            return Err(PolyError::NonDivisible { wanted: k, have: self.qm1_power });
        }
        Ok(CountPolynomial { qm1_power: self.qm1_power - k, ..self.clone() })
    }

    /// Factored rendering, e.g. `q^3 (q-1)^2 (1+q)`.
    pub fn factored_string(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        match self.q_power {
            0 => {}
            1 => parts.push("q".to_string()),
            a => parts.push(format!("q^{a}")),
        }
        match self.qm1_power {
            0 => {}
            1 => parts.push("(q-1)".to_string()),
            b => parts.push(format!("(q-1)^{b}")),
        }
        if self.cofactor != [1] || parts.is_empty() {
            let body = render(&self.cofactor);
            if parts.is_empty() && self.cofactor.len() == 1 {
                parts.push(body);
            } else {
                parts.push(format!("({body})"));
            }
        }
        parts.join(" ")
    }
}

fn render(coeffs: &[i128]) -> String {
    let mut s = String::new();
    for (k, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        if c < 0 {
            s.push('-');
        } else if !s.is_empty() {
            s.push('+');
        }
        let m = c.abs();
        match k {
            0 => s.push_str(&m.to_string()),
            _ => {
                if m != 1 {
                    s.push_str(&m.to_string());
                }
                s.push('q');
                if k > 1 {
                    s.push_str(&format!("^{k}"));
                }
            }
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

impl fmt::Display for CountPolynomial {
    /// Expanded form in ascending degree, e.g. `1+q+q^2+q^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(&self.coeffs()))
    }
}

impl fmt::Debug for CountPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.factored_string(), self)
    }
}

impl Mul for &CountPolynomial {
    type Output = CountPolynomial;
    fn mul(self, rhs: &CountPolynomial) -> CountPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return CountPolynomial::zero();
        }
        // cofactors stay free of q and (q-1) factors under multiplication
        CountPolynomial {
            q_power: self.q_power + rhs.q_power,
            qm1_power: self.qm1_power + rhs.qm1_power,
            cofactor: mul_coeffs(&self.cofactor, &rhs.cofactor),
        }
    }
}

impl Mul for CountPolynomial {
    type Output = CountPolynomial;
    fn mul(self, rhs: CountPolynomial) -> CountPolynomial {
        &self * &rhs
    }
}

impl Add for &CountPolynomial {
    type Output = CountPolynomial;
    fn add(self, rhs: &CountPolynomial) -> CountPolynomial {
        let (a, b) = (self.coeffs(), rhs.coeffs());
        let mut out = vec![0i128; a.len().max(b.len())];
        for (k, c) in a.iter().enumerate() {
            out[k] += c;
        }
        for (k, c) in b.iter().enumerate() {
            out[k] += c;
        }
        CountPolynomial::from_coeffs(&out)
    }
}

impl Add for CountPolynomial {
    type Output = CountPolynomial;
    fn add(self, rhs: CountPolynomial) -> CountPolynomial {
        &self + &rhs
    }
}

impl std::iter::Sum for CountPolynomial {
    fn sum<I: Iterator<Item = CountPolynomial>>(iter: I) -> Self {
        iter.fold(CountPolynomial::zero(), |acc, p| &acc + &p)
    }
}

impl Serialize for CountPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let coeffs: Vec<i64> = self.coeffs().into_iter().map(|c| c as i64).collect();
        let mut st = s.serialize_struct("CountPolynomial", 2)?;
        st.serialize_field("factored", &self.factored_string())?;
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn normalizes_q_and_q_minus_one_factors() {
        // q^3 - q = q (q-1) (q+1)
        let p = CountPolynomial::from_coeffs(&[0, -1, 0, 1]);
        assert_eq!(p.q_power(), 1);
        assert_eq!(p.qm1_power(), 1);
        assert_eq!(p.cofactor(), &[1, 1]);
        assert_eq!(p.factored_string(), "q (q-1) (1+q)");
        assert_eq!(p.to_string(), "-q+q^3");
        assert_eq!(p.degree(), Some(3));
        assert_eq!(p.eval(2), 6);
    }

    #[test]
    fn shift_and_division() {
        let p = CountPolynomial::from_coeffs(&[0, -1, 0, 1]);
        let quot = p.shift(-1).unwrap().div_q_minus_one(1).unwrap();
        assert_eq!(quot.to_string(), "1+q");
        assert!(matches!(p.shift(-2), Err(PolyError::NegativeQPower { .. })));
        assert!(matches!(p.div_q_minus_one(2), Err(PolyError::NonDivisible { .. })));
    }

    #[test]
    fn zero_and_one_render() {
        assert_eq!(CountPolynomial::zero().to_string(), "0");
        assert_eq!(CountPolynomial::one().factored_string(), "1");
        assert_eq!(CountPolynomial::from_coeffs(&[3]).factored_string(), "3");
        assert_eq!(CountPolynomial::from_lengths([0, 1, 1, 2]).to_string(), "1+2q+q^2");
    }

    fn coeffs() -> impl Strategy<Value = Vec<i128>> {
        prop::collection::vec(-5i128..=5, 0..7)
    }

    proptest! {
        #[test]
        fn factored_form_expands_back(c in coeffs()) {
            let p = CountPolynomial::from_coeffs(&c);
            let mut trimmed = c.clone();
            trim(&mut trimmed);
            prop_assert_eq!(p.coeffs(), trimmed);
        }

        #[test]
        fn ring_operations_agree_with_evaluation(a in coeffs(), b in coeffs(), q in 2i128..6) {
            let (pa, pb) = (CountPolynomial::from_coeffs(&a), CountPolynomial::from_coeffs(&b));
            prop_assert_eq!((&pa * &pb).eval(q), pa.eval(q) * pb.eval(q));
            prop_assert_eq!((&pa + &pb).eval(q), pa.eval(q) + pb.eval(q));
        }
    }
}
