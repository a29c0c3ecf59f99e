//! Coefficient rings used by [`Poly`](crate::qpoly::Poly) and
//! [`Series`](crate::series::Series).
//!
//! Everything in the combinatorial layers runs over `BigInt` / `BigRational`,
//! but the containers only need ring (or field) operations, so they are
//! written against these traits and also work over machine integers and
//! floats.

use std::fmt::Debug;
use std::ops::{AddAssign, MulAssign, Neg, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num};

/// A commutative ring with a partial, exact division.
pub trait Scalar:
    Num
    + Clone
    + Debug
    + Neg<Output = Self>
    + FromPrimitive
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
{
    /// `self / rhs` if the quotient exists in the ring, `None` otherwise
    /// (including `rhs == 0`).
    fn exact_quotient(&self, rhs: &Self) -> Option<Self>;

    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("every scalar type represents small integers")
    }

    /// Coefficients of the product of two dense polynomials, neither empty.
    fn convolve(a: &[Self], b: &[Self]) -> Vec<Self> {
        schoolbook(a, b)
    }
}

fn schoolbook<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    let mut out = vec![S::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let mut t = x.clone();
            t *= y;
            out[i + j] += &t;
        }
    }
    out
}

/// A [`Scalar`] in which every nonzero element is invertible.
pub trait Field: Scalar {}

fn integral_quotient<T: Num + Clone>(a: &T, b: &T) -> Option<T> {
    if b.is_zero() {
        return None;
    }
    let r = a.clone() % b.clone();
    if r.is_zero() {
        Some(a.clone() / b.clone())
    } else {
        None
    }
}

macro_rules! integral_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            fn exact_quotient(&self, rhs: &Self) -> Option<Self> {
                integral_quotient(self, rhs)
            }
        }
    )*};
}

impl Scalar for BigInt {
    fn exact_quotient(&self, rhs: &Self) -> Option<Self> {
        integral_quotient(self, rhs)
    }

    fn convolve(a: &[Self], b: &[Self]) -> Vec<Self> {
        if a.len().min(b.len()) < KRONECKER_THRESHOLD {
            schoolbook(a, b)
        } else {
            kronecker::convolve(a, b)
        }
    }
}

/// Below this operand length, plain convolution wins.
const KRONECKER_THRESHOLD: usize = 24;

/// Polynomial products by packing coefficients into one big integer.
/// Signed inputs are split into nonnegative parts first.
mod kronecker {
    use num_bigint::{BigInt, BigUint, Sign};
    use num_traits::Zero;

    fn split(a: &[BigInt]) -> (Vec<BigUint>, Vec<BigUint>) {
        let mut pos = Vec::with_capacity(a.len());
        let mut neg = Vec::with_capacity(a.len());
        for c in a {
            let (sign, mag) = (c.sign(), c.magnitude().clone());
            if sign == Sign::Minus {
                pos.push(BigUint::zero());
                neg.push(mag);
            } else {
                pos.push(mag);
                neg.push(BigUint::zero());
            }
        }
        (pos, neg)
    }

    fn all_zero(a: &[BigUint]) -> bool {
        a.iter().all(Zero::is_zero)
    }

    fn max_bits(a: &[BigUint]) -> u64 {
        a.iter().map(BigUint::bits).max().unwrap_or(0)
    }

    fn from_words(words: &[u64]) -> BigUint {
        BigUint::new(words.iter().flat_map(|w| [*w as u32, (*w >> 32) as u32]).collect())
    }

    fn pack(a: &[BigUint], slot: u64) -> BigUint {
        let total_bits = slot * a.len() as u64;
        let mut words = vec![0u64; total_bits.div_ceil(64) as usize + 1];
        for (i, c) in a.iter().enumerate() {
            let offset = slot * i as u64;
            let (w, s) = ((offset / 64) as usize, (offset % 64) as u32);
            for (k, d) in c.iter_u64_digits().enumerate() {
                words[w + k] |= d << s;
                if s != 0 {
                    words[w + k + 1] |= d >> (64 - s);
                }
            }
        }
        from_words(&words)
    }

    fn unpack(p: &BigUint, slot: u64, len: usize) -> Vec<BigUint> {
        let words: Vec<u64> = p.iter_u64_digits().collect();
        let slot_words = slot.div_ceil(64) as usize;
        (0..len)
            .map(|i| {
                let offset = slot * i as u64;
                let (w, s) = ((offset / 64) as usize, (offset % 64) as u32);
                let mut out = vec![0u64; slot_words];
                for (k, o) in out.iter_mut().enumerate() {
                    let lo = words.get(w + k).copied().unwrap_or(0) >> s;
                    let hi = if s == 0 {
                        0
                    } else {
                        words.get(w + k + 1).copied().unwrap_or(0) << (64 - s)
                    };
                    *o = lo | hi;
                }
                let rem = slot % 64;
                if rem != 0 {
                    out[slot_words - 1] &= (1u64 << rem) - 1;
                }
                from_words(&out)
            })
            .collect()
    }

    fn product(a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
        let len = a.len() + b.len() - 1;
        let slot = max_bits(a) + max_bits(b) + (a.len().min(b.len()) as u64).ilog2() as u64 + 2;
        let p = pack(a, slot) * pack(b, slot);
        unpack(&p, slot, len)
    }

    pub(super) fn convolve(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let (ap, an) = split(a);
        let (bp, bn) = split(b);
        let len = a.len() + b.len() - 1;
        let mut out = vec![BigInt::zero(); len];
        let mut accumulate = |x: &[BigUint], y: &[BigUint], sign: Sign| {
            if all_zero(x) || all_zero(y) {
                return;
            }
            for (o, c) in out.iter_mut().zip(product(x, y)) {
                *o += BigInt::from_biguint(sign, c);
            }
        };
        accumulate(&ap, &bp, Sign::Plus);
        accumulate(&an, &bn, Sign::Plus);
        accumulate(&ap, &bn, Sign::Minus);
        accumulate(&an, &bp, Sign::Minus);
        out
    }
}

macro_rules! field_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            fn exact_quotient(&self, rhs: &Self) -> Option<Self> {
                if num_traits::Zero::is_zero(rhs) {
                    None
                } else {
                    Some(self.clone() / rhs.clone())
                }
            }
        }
        impl Field for $t {}
    )*};
}

integral_scalar!(i32, i64, i128);
field_scalar!(f32, f64, BigRational);

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn integer_quotients_are_exact_only() {
        assert_eq!(12i64.exact_quotient(&4), Some(3));
        assert_eq!(12i64.exact_quotient(&5), None);
        assert_eq!(BigInt::from(-9).exact_quotient(&BigInt::from(3)), Some(BigInt::from(-3)));
        assert_eq!(BigInt::from(1).exact_quotient(&BigInt::from(0)), None);
    }

    #[test]
    fn field_quotients_always_exist() {
        let a = BigRational::from_int(3);
        let b = BigRational::from_int(4);
        assert_eq!(
            a.exact_quotient(&b),
            Some(BigRational::new(BigInt::from(3), BigInt::from(4)))
        );
        assert_eq!(2.0f64.exact_quotient(&0.0), None);
    }

    proptest! {
        #[test]
        fn kronecker_matches_schoolbook(
            a in proptest::collection::vec(-1_000_000_000_000i64..1_000_000_000_000, 1..80),
            b in proptest::collection::vec(-1_000i64..1_000, 1..80),
            big in 0u32..200,
        ) {
            let scale = BigInt::from(3).pow(big);
            let a: Vec<BigInt> = a.into_iter().map(|x| BigInt::from(x) * &scale).collect();
            let b: Vec<BigInt> = b.into_iter().map(BigInt::from).collect();
            prop_assert_eq!(kronecker::convolve(&a, &b), schoolbook(&a, &b));
            prop_assert_eq!(kronecker::convolve(&b, &b), schoolbook(&b, &b));
        }
    }
}
