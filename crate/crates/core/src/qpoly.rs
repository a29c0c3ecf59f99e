//! Dense univariate polynomials in `q`, the q-analogs built from them, and
//! symmetric functions evaluated on lists of polynomials.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::numbers::binomial;
use crate::scalar::Scalar;
use crate::QPoly;

/// A polynomial `c_0 + c_1 q + ... + c_d q^d` with `c_d != 0`.
///
/// The zero polynomial has an empty coefficient vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Poly<S> {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    pub fn constant(c: S) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The indeterminate `q`.
    pub fn q() -> Self {
        Self::monomial(S::one(), 1)
    }

    /// `c q^exp`.
    pub fn monomial(c: S, exp: usize) -> Self {
        let mut coeffs = vec![S::zero(); exp];
        coeffs.push(c);
        Self::from_coeffs(coeffs)
    }

    /// Builds a polynomial from coefficients in increasing degree.
    pub fn from_coeffs(coeffs: Vec<S>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| S::from_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    /// Coefficient of `q^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> S {
        self.coeffs.get(i).cloned().unwrap_or_else(S::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: &S) -> S {
        let mut acc = S::zero();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| {
                let mut t = S::from_int(i as i64);
                t *= c;
                t
            })
            .collect();
        Self::from_coeffs(coeffs)
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![S::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .map(|a| {
                    let mut t = a.clone();
                    t *= c;
                    t
                })
                .collect(),
        )
    }

    /// Multiplies by the q-integer `[m] = 1 + q + ... + q^(m-1)` with a
    /// sliding-window sum instead of a full product.
    pub fn mul_q_int(&self, m: usize) -> Self {
        if m == 0 || self.is_zero() {
            return Self::zero();
        }
        let len = self.coeffs.len() + m - 1;
        let mut out = Vec::with_capacity(len);
        let mut window = S::zero();
        for k in 0..len {
            if let Some(c) = self.coeffs.get(k) {
                window += c;
            }
            if k >= m {
                window -= &self.coeffs[k - m];
            }
            out.push(window.clone());
        }
        Self::from_coeffs(out)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Quotient of an exact division. A nonzero remainder, or a leading
    /// coefficient that does not divide in `S`, is an identity violation.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        let dd = divisor
            .degree()
            .ok_or_else(|| Error::IdentityViolation("division by the zero polynomial".into()))?;
        let Some(nd) = self.degree() else {
            return Ok(Self::zero());
        };
        if nd < dd {
            return Err(Error::IdentityViolation(format!(
                "degree {nd} dividend is not divisible by degree {dd} divisor"
            )));
        }
        let lead = &divisor.coeffs[dd];
        let mut rem = self.coeffs.clone();
        let mut quot = vec![S::zero(); nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            let top = &rem[i + dd];
            if top.is_zero() {
                continue;
            }
            let c = top.exact_quotient(lead).ok_or_else(|| {
                Error::IdentityViolation(format!("leading coefficient does not divide at q^{i}"))
            })?;
            for (j, d) in divisor.coeffs.iter().enumerate() {
                let mut t = c.clone();
                t *= d;
                rem[i + j] -= &t;
            }
            quot[i] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::IdentityViolation("nonzero remainder in polynomial division".into()));
        }
        Ok(Self::from_coeffs(quot))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Poly<T> {
        Poly::from_coeffs(self.coeffs.iter().map(f).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }
}

impl<S: Scalar> Default for Poly<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> From<S> for Poly<S> {
    fn from(c: S) -> Self {
        Self::constant(c)
    }
}

impl<S: Scalar> AddAssign<&Poly<S>> for Poly<S> {
    fn add_assign(&mut self, rhs: &Poly<S>) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), S::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
        self.trim();
    }
}

impl<S: Scalar> SubAssign<&Poly<S>> for Poly<S> {
    fn sub_assign(&mut self, rhs: &Poly<S>) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), S::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
        self.trim();
    }
}

impl<S: Scalar> Add for &Poly<S> {
    type Output = Poly<S>;
    fn add(self, rhs: &Poly<S>) -> Poly<S> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<S: Scalar> Sub for &Poly<S> {
    type Output = Poly<S>;
    fn sub(self, rhs: &Poly<S>) -> Poly<S> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<S: Scalar> Mul for &Poly<S> {
    type Output = Poly<S>;
    fn mul(self, rhs: &Poly<S>) -> Poly<S> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        Poly::from_coeffs(S::convolve(&self.coeffs, &rhs.coeffs))
    }
}

impl<S: Scalar> Neg for &Poly<S> {
    type Output = Poly<S>;
    fn neg(self) -> Poly<S> {
        Poly {
            coeffs: self.coeffs.iter().cloned().map(Neg::neg).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl<S: Scalar> $tr for Poly<S> {
            type Output = Poly<S>;
            fn $m(self, rhs: Poly<S>) -> Poly<S> {
                (&self).$m(&rhs)
            }
        }
        impl<S: Scalar> $tr<&Poly<S>> for Poly<S> {
            type Output = Poly<S>;
            fn $m(self, rhs: &Poly<S>) -> Poly<S> {
                (&self).$m(rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl<S: Scalar> Neg for Poly<S> {
    type Output = Poly<S>;
    fn neg(self) -> Poly<S> {
        -&self
    }
}

impl<S: Scalar> Sum for Poly<S> {
    fn sum<I: Iterator<Item = Poly<S>>>(iter: I) -> Self {
        iter.fold(Poly::zero(), |mut acc, p| {
            acc += &p;
            acc
        })
    }
}

impl<'a, S: Scalar> Sum<&'a Poly<S>> for Poly<S> {
    fn sum<I: Iterator<Item = &'a Poly<S>>>(iter: I) -> Self {
        iter.fold(Poly::zero(), |mut acc, p| {
            acc += p;
            acc
        })
    }
}

impl<S: Scalar + fmt::Display + Signed> fmt::Display for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let unit = mag.is_one();
            match i {
                0 => write!(f, "{mag}")?,
                1 if unit => write!(f, "q")?,
                1 => write!(f, "{mag}q")?,
                _ if unit => write!(f, "q^{i}")?,
                _ => write!(f, "{mag}q^{i}")?,
            }
        }
        Ok(())
    }
}

impl<S: fmt::Debug> fmt::Debug for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Poly").field(&self.coeffs).finish()
    }
}

/// `[n] = 1 + q + ... + q^(n-1)`; `[0] = 0`.
pub fn q_int<S: Scalar>(n: usize) -> Poly<S> {
    Poly::from_coeffs(vec![S::one(); n])
}

/// `[m]! = [1][2]...[m]`.
pub fn q_factorial<S: Scalar>(m: usize) -> Poly<S> {
    (1..=m).fold(Poly::one(), |acc, i| acc.mul_q_int(i))
}

/// Gaussian binomial `[n brack k]`, zero unless `0 <= k <= n`.
///
/// Built with the q-Pascal rule `[n,k] = [n-1,k-1] + q^k [n-1,k]`.
pub fn q_binomial<S: Scalar>(n: i64, k: i64) -> Poly<S> {
    if k < 0 || n < 0 || k > n {
        return Poly::zero();
    }
    let k = k as usize;
    let mut row: Vec<Poly<S>> = vec![Poly::one()];
    for m in 1..=n as usize {
        let width = (m + 1).min(k + 1);
        let mut next = Vec::with_capacity(width);
        for i in 0..width {
            let mut p = if i > 0 { row[i - 1].clone() } else { Poly::zero() };
            if let Some(prev) = row.get(i) {
                p += &prev.shift(i);
            }
            next.push(p);
        }
        row = next;
    }
    row.swap_remove(k)
}

/// `e_j(X)`: sum of products of `j` distinct entries of `xs`.
///
/// Edge conventions: `e_0 = 1`, `e_j = 0` for `j < 0`, and on the empty list
/// `e_j = [j == 1]` (checked after the `j = 0` rule).
pub fn elementary_e<S: Scalar>(j: i64, xs: &[Poly<S>]) -> Poly<S> {
    if let Some(v) = edge_value(j, xs) {
        return v;
    }
    let j = j as usize;
    let mut e = vec![Poly::<S>::zero(); j + 1];
    e[0] = Poly::one();
    for x in xs {
        for t in (1..=j).rev() {
            let add = &e[t - 1] * x;
            e[t] += &add;
        }
    }
    e.swap_remove(j)
}

/// `e'_j(X)`: sum of products of `j` pairwise non-adjacent entries of `xs`.
pub fn nonadjacent_e_prime<S: Scalar>(j: i64, xs: &[Poly<S>]) -> Poly<S> {
    if let Some(v) = edge_value(j, xs) {
        return v;
    }
    let j = j as usize;
    // prev2/prev1: tables for prefixes of length i-2 and i-1.
    let mut base = vec![Poly::<S>::zero(); j + 1];
    base[0] = Poly::one();
    let mut prev2 = base.clone();
    let mut prev1 = base;
    for x in xs {
        let mut cur = prev1.clone();
        for t in 1..=j {
            let add = &prev2[t - 1] * x;
            cur[t] += &add;
        }
        prev2 = std::mem::replace(&mut prev1, cur);
    }
    prev1.swap_remove(j)
}

/// `h_j(X)`: sum of products of `j` entries of `xs`, repetition allowed.
pub fn complete_h<S: Scalar>(j: i64, xs: &[Poly<S>]) -> Poly<S> {
    if let Some(v) = edge_value(j, xs) {
        return v;
    }
    let j = j as usize;
    let mut h = vec![Poly::<S>::zero(); j + 1];
    h[0] = Poly::one();
    for x in xs {
        for t in 1..=j {
            let add = &h[t - 1] * x;
            h[t] += &add;
        }
    }
    h.swap_remove(j)
}

fn edge_value<S: Scalar>(j: i64, xs: &[Poly<S>]) -> Option<Poly<S>> {
    if j < 0 {
        Some(Poly::zero())
    } else if j == 0 {
        Some(Poly::one())
    } else if xs.is_empty() {
        Some(if j == 1 { Poly::one() } else { Poly::zero() })
    } else {
        None
    }
}

fn one_minus_q_pow(j: usize) -> QPoly {
    QPoly::from_ints(&[1, -1]).pow(j as u32)
}

/// `e_j([1], [2], ..., [k-3])` via the alternating q-binomial sum
/// `(1-q)^{-j} sum_a (-1)^a q^{C(a+1,2)} [k-3 brack a] C(k-3-a, k-3-j)`.
pub fn e_on_qints_closed_form(j: usize, k: usize) -> Result<QPoly> {
    if k < 3 || j < 1 {
        return Err(Error::OutOfRange {
            what: if k < 3 { "k" } else { "j" },
            value: if k < 3 { k as i64 } else { j as i64 },
            lo: if k < 3 { 3 } else { 1 },
            hi: i64::MAX,
        });
    }
    let m = (k - 3) as i64;
    let j = j as i64;
    let mut num = QPoly::zero();
    for a in 0..=m {
        let c = binomial(m - a, m - j);
        if c.is_zero() {
            continue;
        }
        let sign = if a % 2 == 0 { c } else { -c };
        let term = q_binomial::<BigInt>(m, a).shift((a * (a + 1) / 2) as usize).scale(&sign);
        num += &term;
    }
    num.exact_div(&one_minus_q_pow(j as usize))
}

/// `h_{j-1}({[n], [n+1], ..., [n+k-j-1]})` via
/// `(1-q)^{-(j-1)} sum_i (-1)^i [k-j-1+i brack i] C(k-2, j-1-i) q^{i n}`.
pub fn h_on_qint_window_closed_form(j: usize, k: usize, n: usize) -> Result<QPoly> {
    if k == 0 || j > k - 1 {
        return Err(Error::OutOfRange {
            what: "j",
            value: j as i64,
            lo: 0,
            hi: k as i64 - 1,
        });
    }
    if j == 0 {
        return Ok(QPoly::zero());
    }
    let (j, k) = (j as i64, k as i64);
    let mut num = QPoly::zero();
    for i in 0..j {
        let c = binomial(k - 2, j - 1 - i);
        if c.is_zero() {
            continue;
        }
        let sign = if i % 2 == 0 { c } else { -c };
        let term = q_binomial::<BigInt>(k - j - 1 + i, i)
            .shift((i as usize) * n)
            .scale(&sign);
        num += &term;
    }
    num.exact_div(&one_minus_q_pow((j - 1) as usize))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> QPoly {
        QPoly::from_ints(c)
    }

    #[test]
    fn ring_examples() {
        assert_eq!(&p(&[-1, 1]) * &p(&[1, 1]), p(&[-1, 0, 1]));
        assert_eq!(p(&[-1, 1]).pow(0), QPoly::one());
        assert_eq!(&q_int::<BigInt>(2) * &q_int(3), p(&[1, 2, 2, 1]));
        assert_eq!(&p(&[1, 2]) - &p(&[1, 2]), QPoly::zero());
        assert!(QPoly::zero().degree().is_none());
    }

    #[test]
    fn exact_division() {
        assert_eq!(p(&[-1, 0, 1]).exact_div(&p(&[-1, 1])).unwrap(), p(&[1, 1]));
        assert_eq!(q_int::<BigInt>(4).exact_div(&q_int(2)).unwrap(), p(&[1, 0, 1]));
        assert!(matches!(
            q_int::<BigInt>(3).exact_div(&q_int(2)),
            Err(Error::IdentityViolation(_))
        ));
        assert!(p(&[1]).exact_div(&QPoly::zero()).is_err());
        // Over a field the leading coefficient always divides.
        let half = Poly::<f64>::from_coeffs(vec![1.0, 2.0]);
        let prod = &half * &Poly::from_coeffs(vec![3.0, 1.0]);
        assert_eq!(prod.exact_div(&half).unwrap(), Poly::from_coeffs(vec![3.0, 1.0]));
    }

    #[test]
    fn q_analogs() {
        assert_eq!(q_int::<BigInt>(0), QPoly::zero());
        assert_eq!(q_int::<BigInt>(1), QPoly::one());
        assert_eq!(q_binomial::<BigInt>(4, 2), p(&[1, 1, 2, 1, 1]));
        assert_eq!(q_binomial::<BigInt>(3, 5), QPoly::zero());
        assert_eq!(q_binomial::<BigInt>(-1, 0), QPoly::zero());
        for n in 1..8 {
            assert_eq!(q_int::<BigInt>(n).eval(&BigInt::zero()), BigInt::one());
            // [n]'(1) = C(n, 2)
            assert_eq!(q_int::<BigInt>(n).derivative().eval(&BigInt::one()), binomial(n as i64, 2));
        }
        assert_eq!(q_factorial::<BigInt>(3), p(&[1, 2, 2, 1]));
    }

    #[test]
    fn mul_q_int_matches_product() {
        let a = p(&[3, -1, 0, 7]);
        for m in 0..6 {
            assert_eq!(a.mul_q_int(m), &a * &q_int(m));
        }
    }

    #[test]
    fn symmetric_function_examples() {
        let q = QPoly::q();
        let xs = [q.clone(), QPoly::one(), q.pow(2)];
        assert_eq!(elementary_e(2, &xs), p(&[0, 1, 1, 1]));
        assert_eq!(complete_h(2, &[QPoly::one(), q.clone()]), p(&[1, 1, 1]));
        let abc = [p(&[2]), p(&[3]), p(&[5])];
        assert_eq!(nonadjacent_e_prime(2, &abc), p(&[10]));
        assert_eq!(nonadjacent_e_prime(1, &abc), p(&[10]));
        assert_eq!(nonadjacent_e_prime(3, &abc), QPoly::zero());
    }

    #[test]
    fn empty_set_conventions() {
        let none: [QPoly; 0] = [];
        for f in [elementary_e::<BigInt>, complete_h::<BigInt>, nonadjacent_e_prime::<BigInt>] {
            assert_eq!(f(0, &none), QPoly::one());
            assert_eq!(f(1, &none), QPoly::one());
            assert_eq!(f(2, &none), QPoly::zero());
            assert_eq!(f(-1, &[QPoly::one()]), QPoly::zero());
            assert_eq!(f(0, &[p(&[4])]), QPoly::one());
        }
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(e_on_qints_closed_form(1, 5).unwrap(), p(&[2, 1]));
        assert_eq!(e_on_qints_closed_form(2, 5).unwrap(), p(&[1, 1]));
        assert_eq!(h_on_qint_window_closed_form(1, 4, 1).unwrap(), QPoly::one());
        assert_eq!(h_on_qint_window_closed_form(2, 4, 1).unwrap(), p(&[2, 1]));
        assert!(e_on_qints_closed_form(1, 2).is_err());
        assert!(h_on_qint_window_closed_form(4, 4, 0).is_err());
    }

    #[test]
    fn closed_form_sweeps_agree_with_definitions() {
        for k in 3..=10 {
            let xs: Vec<QPoly> = (1..=k - 3).map(q_int).collect();
            // j = k - 2 exceeds the list length (zero) once the list is nonempty.
            let top = if k > 3 { k - 2 } else { 0 };
            for j in 1..=top {
                assert_eq!(
                    e_on_qints_closed_form(j, k).unwrap(),
                    elementary_e(j as i64, &xs),
                    "e_{j} at k={k}"
                );
            }
        }
        for k in 1..=10 {
            for n in 0..=5 {
                for j in 0..k {
                    let xs: Vec<QPoly> = (0..k - j).map(|i| q_int(n + i)).collect();
                    assert_eq!(
                        h_on_qint_window_closed_form(j, k, n).unwrap(),
                        complete_h(j as i64 - 1, &xs),
                        "h at j={j} k={k} n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn display() {
        assert_eq!(p(&[2, 4]).to_string(), "4q + 2");
        assert_eq!(p(&[-1, 0, 1]).to_string(), "q^2 - 1");
        assert_eq!(p(&[0, -3]).to_string(), "-3q");
        assert_eq!(QPoly::zero().to_string(), "0");
    }

    fn arb_poly() -> impl Strategy<Value = QPoly> {
        prop::collection::vec(-20i64..20, 0..6).prop_map(|v| QPoly::from_ints(&v))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
        }

        #[test]
        fn product_divides_back(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b).exact_div(&b).unwrap(), a);
        }

        #[test]
        fn q_binomial_symmetry_and_value_at_one(n in 0i64..12, k in 0i64..12) {
            prop_assume!(k <= n);
            let b = q_binomial::<BigInt>(n, k);
            prop_assert_eq!(&b, &q_binomial::<BigInt>(n, n - k));
            prop_assert_eq!(b.eval(&BigInt::one()), binomial(n, k));
        }

        #[test]
        fn elementary_generating_function(vals in prop::collection::vec(-5i64..6, 0..=6)) {
            // sum_j e_j(X) z^j = prod (1 + x z), with z a second variable
            // represented by the coefficient index of a plain i64 polynomial.
            let xs: Vec<QPoly> = vals.iter().map(|&v| QPoly::from_ints(&[v])).collect();
            let prod = vals.iter().fold(Poly::<i64>::one(), |acc, &v| &acc * &Poly::from_ints(&[1, v]));
            for j in 1..=vals.len() {
                let e = elementary_e(j as i64, &xs).coeff(0);
                prop_assert_eq!(e, BigInt::from(prod.coeff(j)));
            }
        }
    }
}
