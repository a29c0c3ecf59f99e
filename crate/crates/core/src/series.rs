//! Truncated formal power series over a field, and the generating functions
//! for 31-2 occurrence counts and for the 21-3 and 12-3 avoiders.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;

use crate::closed_forms::SpecialNumberCache;
use crate::error::{Error, Result};
use crate::numbers::factorial;
use crate::qpoly::Poly;
use crate::scalar::Field;
use crate::{PowerSeries, Rational};

/// Order used when none is given.
pub const DEFAULT_ORDER: usize = 24;

/// `sum_{i < order} c_i x^i`, known modulo `x^order`.
#[derive(Clone, PartialEq, Debug)]
pub struct Series<F> {
    coeffs: Vec<F>,
}

impl<F: Field> Series<F> {
    pub fn zero(order: usize) -> Self {
        Series {
            coeffs: vec![F::zero(); order],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::from_coeffs(vec![F::one()], order)
    }

    /// The series `x`.
    pub fn x(order: usize) -> Self {
        Self::from_coeffs(vec![F::zero(), F::one()], order)
    }

    /// Pads with zeros or truncates to `order` terms.
    pub fn from_coeffs(mut coeffs: Vec<F>, order: usize) -> Self {
        coeffs.resize(order, F::zero());
        Series { coeffs }
    }

    pub fn from_ints(coeffs: &[i64], order: usize) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| F::from_int(c)).collect(), order)
    }

    pub fn from_poly(p: &Poly<F>, order: usize) -> Self {
        Self::from_coeffs(p.coeffs().to_vec(), order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    /// `[x^i]`, or `None` beyond the truncation order.
    pub fn coeff(&self, i: usize) -> Option<&F> {
        self.coeffs.get(i)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(self.coeffs[..order.min(self.order())].to_vec(), order.min(self.order()))
    }

    /// Equality on the coefficients both series know.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let n = self.order().min(other.order());
        self.coeffs[..n] == other.coeffs[..n]
    }

    pub fn scale(&self, c: &F) -> Self {
        Series {
            coeffs: self
                .coeffs
                .iter()
                .map(|a| {
                    let mut t = a.clone();
                    t *= c;
                    t
                })
                .collect(),
        }
    }

    /// Formal derivative; one order shorter.
    pub fn derive(&self) -> Self {
        Series {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| {
                    let mut t = c.clone();
                    t *= &F::from_int(i as i64);
                    t
                })
                .collect(),
        }
    }

    /// Antiderivative with zero constant term; one order longer.
    pub fn integrate(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.order() + 1);
        coeffs.push(F::zero());
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c.clone() / F::from_int(i as i64 + 1));
        }
        Series { coeffs }
    }

    fn constant_term(&self) -> F {
        self.coeffs.first().cloned().unwrap_or_else(F::zero)
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::Domain("series with zero constant term is not invertible".into()));
        }
        let n = self.order();
        let mut out: Vec<F> = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = if i == 0 { F::one() } else { F::zero() };
            for j in 1..=i {
                let mut t = self.coeffs[j].clone();
                t *= &out[i - j];
                acc -= &t;
            }
            out.push(acc / c0.clone());
        }
        Ok(Series { coeffs: out })
    }

    /// `self / rhs`; `rhs` must have a nonzero constant term.
    pub fn exact_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inverse()?)
    }

    /// `self / x^k`, after checking that the first `k` coefficients vanish.
    pub fn div_x_pow(&self, k: usize) -> Result<Self> {
        if let Some(i) = self.coeffs.iter().take(k).position(|c| !c.is_zero()) {
            return Err(Error::IdentityViolation(format!(
                "series is not divisible by x^{k}: coefficient of x^{i} is nonzero"
            )));
        }
        Ok(Series {
            coeffs: self.coeffs.iter().skip(k).cloned().collect(),
        })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Series::one(self.order());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `exp(s)` for `s(0) = 0`, from `E' = s' E`.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::Domain("exp needs a series with zero constant term".into()));
        }
        let n = self.order();
        let mut e: Vec<F> = Vec::with_capacity(n);
        if n > 0 {
            e.push(F::one());
        }
        for m in 1..n {
            let mut acc = F::zero();
            for k in 1..=m {
                let mut t = self.coeffs[k].clone();
                t *= &F::from_int(k as i64);
                t *= &e[m - k];
                acc += &t;
            }
            e.push(acc / F::from_int(m as i64));
        }
        Ok(Series { coeffs: e })
    }

    /// The square root with constant term 1, for `s(0) = 1`, by Newton
    /// iteration `y <- (y + s/y)/2` doubling the precision each round.
    pub fn sqrt(&self) -> Result<Self> {
        if self.constant_term() != F::one() {
            return Err(Error::Domain("sqrt needs a series with constant term 1".into()));
        }
        let n = self.order();
        let half = F::one() / F::from_int(2);
        let mut y = Series::one(n.min(1));
        let mut prec = 1;
        while prec < n {
            prec = (2 * prec).min(n);
            let y_ext = Series::from_coeffs(y.coeffs.clone(), prec);
            let quotient = self.truncate(prec).exact_div(&y_ext)?;
            y = (&y_ext + &quotient).scale(&half);
        }
        Ok(Series::from_coeffs(y.coeffs, n))
    }
}

impl<F: Field> Add for &Series<F> {
    type Output = Series<F>;
    fn add(self, rhs: &Series<F>) -> Series<F> {
        let n = self.order().min(rhs.order());
        Series {
            coeffs: (0..n)
                .map(|i| {
                    let mut t = self.coeffs[i].clone();
                    t += &rhs.coeffs[i];
                    t
                })
                .collect(),
        }
    }
}

impl<F: Field> Sub for &Series<F> {
    type Output = Series<F>;
    fn sub(self, rhs: &Series<F>) -> Series<F> {
        self + &(-rhs)
    }
}

impl<F: Field> Neg for &Series<F> {
    type Output = Series<F>;
    fn neg(self) -> Series<F> {
        Series {
            coeffs: self.coeffs.iter().cloned().map(Neg::neg).collect(),
        }
    }
}

impl<F: Field> Mul for &Series<F> {
    type Output = Series<F>;
    fn mul(self, rhs: &Series<F>) -> Series<F> {
        let n = self.order().min(rhs.order());
        let mut out = vec![F::zero(); n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(n - i).enumerate() {
                let mut t = a.clone();
                t *= b;
                out[i + j] += &t;
            }
        }
        Series { coeffs: out }
    }
}

fn rat(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Numerators of the 31-2 generating functions: `(A_r, B_r, p_r)` with
/// `G_r(x) = (A_r + B_r sqrt(1-4x)) / (x^{p_r} sqrt(1-4x)^{2r+1})`.
fn numerators_31_2(r: usize) -> (&'static [i64], &'static [i64], usize) {
    match r {
        0 => (&[0, 1], &[0, -1, -2], 0),
        // (3x-1)(1-5x+2x^2)
        1 => (&[-1, 8, -17, 6], &[1, -6, 7], 1),
        2 => (&[1, -12, 50, -76, 22], &[-1, 10, -32, 28], 1),
        3 => (&[2, -37, 270, -972, 1748, -1346, 220], &[-2, 33, -208, 614, -824, 368], 2),
        _ => unreachable!("checked by caller"),
    }
}

/// `G_r(x)`, whose `x^n` coefficient is the number of `π in S_n` with
/// exactly `r` occurrences of 31-2 in the flattened form (`n >= 3`).
pub fn expand_g_r_31_2(r: usize, order: usize) -> Result<PowerSeries> {
    if r > 3 {
        return Err(Error::OutOfRange {
            what: "r",
            value: r as i64,
            lo: 0,
            hi: 3,
        });
    }
    if order < 4 {
        return Err(Error::OutOfRange {
            what: "order",
            value: order as i64,
            lo: 4,
            hi: i64::MAX,
        });
    }
    let (a, b, p) = numerators_31_2(r);
    let work = order + p;
    let root = PowerSeries::from_ints(&[1, -4], work).sqrt()?;
    let numerator = &PowerSeries::from_ints(a, work) + &(&PowerSeries::from_ints(b, work) * &root);
    let denominator = root.pow(2 * r as u32 + 1);
    numerator.exact_div(&denominator)?.div_x_pow(p)
}

/// `sum_n g_{n+2}(0) x^n / n! = 2 exp(e^x + 2x - 1)` for 21-3.
pub fn expand_egf_21_3_avoid(order: usize) -> Result<PowerSeries> {
    check_egf_order(order)?;
    let ex_minus_1 = &PowerSeries::x(order).exp()? - &PowerSeries::one(order);
    let inner = &ex_minus_1 + &PowerSeries::from_ints(&[0, 2], order);
    Ok(inner.exp()?.scale(&rat(2)))
}

/// `sum_n g_{n+2}(0) x^n / n! = 2(e^x+1) e^{e^x-1} (1 - ∫_0^x e^{1-e^t} dt) - 2`
/// for 12-3, with `e^{1-e^t}` taken from the complementary Bell numbers.
pub fn expand_egf_12_3_avoid(order: usize) -> Result<PowerSeries> {
    check_egf_order(order)?;
    let cache = SpecialNumberCache::new(order);
    let comp_bell = PowerSeries::from_coeffs(
        (0..order)
            .map(|n| Rational::new(cache.complementary_bell(n as i64).clone(), factorial(n)))
            .collect(),
        order,
    );
    egf_12_3_from(&comp_bell, order)
}

/// `e^{1-e^t}` computed directly by series `exp`.
pub fn exp_one_minus_exp(order: usize) -> Result<PowerSeries> {
    (&PowerSeries::one(order) - &PowerSeries::x(order).exp()?).exp()
}

/// `e^{e^x-1}`, the exponential generating function of the Bell numbers.
pub fn exp_exp_minus_one(order: usize) -> Result<PowerSeries> {
    (&PowerSeries::x(order).exp()? - &PowerSeries::one(order)).exp()
}

fn egf_12_3_from(e_one_minus_exp: &PowerSeries, order: usize) -> Result<PowerSeries> {
    let ex = PowerSeries::x(order).exp()?;
    let one = PowerSeries::one(order);
    let bell = exp_exp_minus_one(order)?;
    let integral = e_one_minus_exp.integrate().truncate(order);
    let product = &(&(&ex + &one) * &bell) * &(&one - &integral);
    Ok(&product.scale(&rat(2)) - &PowerSeries::from_ints(&[2], order))
}

/// The 12-3 EGF with `e^{1-e^t}` from series `exp` instead of the
/// complementary Bell numbers.
pub fn expand_egf_12_3_avoid_direct(order: usize) -> Result<PowerSeries> {
    check_egf_order(order)?;
    egf_12_3_from(&exp_one_minus_exp(order)?, order)
}

fn check_egf_order(order: usize) -> Result<()> {
    if order < 2 {
        Err(Error::OutOfRange {
            what: "order",
            value: order as i64,
            lo: 2,
            hi: i64::MAX,
        })
    } else {
        Ok(())
    }
}

/// `n! [x^n] s`, which must be an integer.
pub fn egf_coefficient(s: &PowerSeries, n: usize) -> Option<BigInt> {
    let c = s.coeff(n)? * Rational::from_integer(factorial(n));
    c.is_integer().then(|| c.to_integer())
}
