//! Stirling, Bell and harmonic numbers, and the closed forms for avoider
//! counts, average occurrence counts and occurrence totals.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numbers::{binomial, factorial};
use crate::perm::VincularPattern3;
use crate::recurrences::PatternId;
use crate::Rational;

/// Tables of `S(n, k)`, `B_n`, the complementary Bell numbers and `H_n`
/// for `0 <= n <= n_max`.
#[derive(Clone, Debug)]
pub struct SpecialNumberCache {
    stirling2: Vec<Vec<BigInt>>,
    bell: Vec<BigInt>,
    /// Offset by one: entry `i` holds the complementary Bell number at `i - 1`.
    complementary_bell: Vec<BigInt>,
    harmonic: Vec<Rational>,
}

impl SpecialNumberCache {
    pub fn new(n_max: usize) -> Self {
        let mut stirling2: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
        for n in 1..=n_max {
            let prev = &stirling2[n - 1];
            let row: Vec<BigInt> = (0..=n)
                .map(|k| {
                    let mut v = BigInt::zero();
                    if k >= 1 {
                        v += &prev[k - 1];
                    }
                    if k < n {
                        v += &prev[k] * BigInt::from(k);
                    }
                    v
                })
                .collect();
            stirling2.push(row);
        }
        let bell = stirling2.iter().map(|row| row.iter().sum()).collect();
        let mut complementary_bell = vec![-BigInt::one()];
        complementary_bell.extend(stirling2.iter().map(|row| {
            row.iter()
                .enumerate()
                .map(|(k, s)| if k % 2 == 0 { s.clone() } else { -s })
                .sum::<BigInt>()
        }));
        let mut harmonic = vec![Rational::zero()];
        for n in 1..=n_max {
            let next = &harmonic[n - 1] + Rational::new(BigInt::one(), BigInt::from(n));
            harmonic.push(next);
        }
        SpecialNumberCache {
            stirling2,
            bell,
            complementary_bell,
            harmonic,
        }
    }

    pub fn n_max(&self) -> usize {
        self.bell.len() - 1
    }

    /// `S(n, k)`; zero for `k > n`. Panics if `n > n_max`.
    pub fn stirling2(&self, n: usize, k: usize) -> BigInt {
        self.stirling2[n].get(k).cloned().unwrap_or_default()
    }

    pub fn bell(&self, n: usize) -> &BigInt {
        &self.bell[n]
    }

    /// The complementary Bell number at `n >= -1`, with value `-1` at `-1`.
    pub fn complementary_bell(&self, n: i64) -> &BigInt {
        let i = usize::try_from(n + 1).expect("complementary Bell index is at least -1");
        &self.complementary_bell[i]
    }

    pub fn harmonic(&self, n: usize) -> &Rational {
        &self.harmonic[n]
    }

    /// Number of `π in S_n` whose flattened form avoids `pattern`.
    pub fn avoiders(&self, pattern: PatternId, n: usize) -> Result<BigInt> {
        check_n(n)?;
        if n == 1 {
            return Ok(BigInt::one());
        }
        let m = n - 1;
        Ok(match pattern {
            PatternId::P31_2 => binomial(2 * m as i64, m as i64),
            PatternId::P32_1 | PatternId::P23_1 => (1..=m)
                .map(|k| self.stirling2(m, k) << k)
                .sum(),
            PatternId::P21_3 => (1..=m)
                .map(|k| self.stirling2(m, k) * BigInt::from(k))
                .sum::<BigInt>()
                * 2,
            // The sum is stated for n >= 2 but only holds from n = 3; at n = 2 it gives 4.
            PatternId::P12_3 if n == 2 => BigInt::from(2),
            PatternId::P12_3 => {
                let s: BigInt = (0..=n - 2)
                    .map(|i| {
                        binomial(n as i64 - 2, i as i64)
                            * (self.bell(i) + self.bell(i + 1))
                            * self.complementary_bell(n as i64 - i as i64 - 3)
                    })
                    .sum();
                -s * 2
            }
            PatternId::P13_2 => BigInt::one() << m,
        })
    }

    /// Average number of occurrences over `S_n`, exactly.
    pub fn average_occurrences(&self, pattern: PatternId, n: usize) -> Result<Rational> {
        check_n(n)?;
        let ni = n as i64;
        let h = self.harmonic(n).clone();
        let frac = |num: i64, den: i64| Rational::new(BigInt::from(num), BigInt::from(den));
        Ok(match pattern {
            PatternId::P31_2 | PatternId::P21_3 => frac(ni * ni * ni - 3 * ni * ni + 26 * ni - 12, 12 * ni) - h,
            PatternId::P32_1 | PatternId::P23_1 => frac(ni * ni - 9 * ni - 4, 12) + h,
            PatternId::P12_3 => frac(ni * ni * ni + 3 * ni * ni - 40 * ni + 24, 12 * ni) + h,
            PatternId::P13_2 => frac(ni * ni + 3 * ni + 8, 12) - h,
        })
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::OutOfRange {
            what: "n",
            value: 0,
            lo: 1,
            hi: i64::MAX,
        })
    } else {
        Ok(())
    }
}

/// [`SpecialNumberCache::avoiders`] with a cache sized for `n`.
pub fn avoiders(pattern: PatternId, n: usize) -> Result<BigInt> {
    SpecialNumberCache::new(n).avoiders(pattern, n)
}

/// [`SpecialNumberCache::average_occurrences`] with a cache sized for `n`.
pub fn average_occurrences(pattern: PatternId, n: usize) -> Result<Rational> {
    SpecialNumberCache::new(n).average_occurrences(pattern, n)
}

/// The two `x-yz` patterns that appear in the totals identities.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum AuxPattern {
    P3_21,
    P3_12,
}

impl AuxPattern {
    pub fn name(&self) -> &'static str {
        match self {
            AuxPattern::P3_21 => "3-21",
            AuxPattern::P3_12 => "3-12",
        }
    }

    pub fn vincular(&self) -> VincularPattern3 {
        self.name().parse().expect("built-in pattern names parse")
    }
}

/// `sum_{i=lo}^{n-1} (n-i) w(i) (n-1)!/i`, required to be an integer.
fn weighted_total(n: usize, lo: usize, w: impl Fn(i64) -> BigInt) -> Result<BigInt> {
    let f = factorial(n.saturating_sub(1));
    let mut acc = Rational::zero();
    for i in lo..n {
        let ii = i as i64;
        acc += Rational::new(BigInt::from(n - i) * w(ii) * &f, BigInt::from(ii));
    }
    if acc.is_integer() {
        Ok(acc.to_integer())
    } else {
        Err(Error::IdentityViolation(format!("occurrence total {acc} is not an integer at n={n}")))
    }
}

/// `(n-1)! sum_{i=lo}^{n-1} (n-i) w(i)`.
fn plain_total(n: usize, lo: usize, w: impl Fn(i64) -> i64) -> BigInt {
    let s: i64 = (lo..n).map(|i| (n - i) as i64 * w(i as i64)).sum();
    factorial(n.saturating_sub(1)) * s
}

/// `tot(21-3) + tot(3-21) = (n-1)! sum_{i=3}^{n-1} (n-i)(i-2)`.
pub fn total_21_3_plus_3_21(n: usize) -> BigInt {
    plain_total(n, 3, |i| i - 2)
}

/// `tot(12-3) + tot(3-12) = (n-1)! sum_{i=2}^{n-1} (n-i) i`.
pub fn total_12_3_plus_3_12(n: usize) -> BigInt {
    plain_total(n, 2, |i| i)
}

/// Total occurrences of an auxiliary pattern over `S_n`.
pub fn aux_total(pattern: AuxPattern, n: usize) -> Result<BigInt> {
    match pattern {
        AuxPattern::P3_21 => weighted_total(n, 3, |i| binomial(i - 1, 2)),
        AuxPattern::P3_12 => weighted_total(n, 2, |i| binomial(i, 2) - 1),
    }
}

/// Total occurrences of `pattern` summed over `S_n`; the 21-3 and 12-3
/// values come from the paired sums minus the auxiliary totals.
pub fn total_occurrences(pattern: PatternId, n: usize) -> Result<BigInt> {
    check_n(n)?;
    match pattern {
        PatternId::P32_1 | PatternId::P23_1 => weighted_total(n, 3, |i| binomial(i - 1, 2)),
        PatternId::P31_2 => weighted_total(n, 3, |i| binomial(i, 2) - 1),
        PatternId::P21_3 => Ok(total_21_3_plus_3_21(n) - aux_total(AuxPattern::P3_21, n)?),
        PatternId::P12_3 => Ok(total_12_3_plus_3_12(n) - aux_total(AuxPattern::P3_12, n)?),
        PatternId::P13_2 => Err(Error::Unsupported(
            "no occurrence-total formula for 13-2".into(),
        )),
    }
}

/// `avr(n) / n^2` for one pattern over `n_lo..=n_hi`.
#[derive(Clone, Debug)]
pub struct LimitCheck {
    pub pattern: PatternId,
    pub ratios: Vec<(usize, Rational)>,
    /// Whether `|avr(n)/n^2 - 1/12|` strictly decreases from `max(n_lo, 20)` on.
    pub deviation_decreasing: bool,
    /// First `n` at which the deviation fails to decrease.
    pub first_violation: Option<usize>,
}

impl LimitCheck {
    /// `|avr(n)/n^2 - 1/12|` at the last `n`, as a float for display.
    pub fn final_deviation(&self) -> f64 {
        self.ratios
            .last()
            .map(|(_, r)| deviation(r).to_f64().unwrap_or(f64::NAN))
            .unwrap_or(f64::NAN)
    }
}

fn deviation(r: &Rational) -> Rational {
    (r - Rational::new(BigInt::one(), BigInt::from(12))).abs()
}

/// `avr(n)/n^2` for the five recurrence patterns on `n_lo..=n_hi`.
pub fn limit_check(n_lo: usize, n_hi: usize) -> Result<Vec<LimitCheck>> {
    if n_lo < 3 || n_lo >= n_hi {
        return Err(Error::OutOfRange {
            what: "n_lo",
            value: n_lo as i64,
            lo: 3,
            hi: n_hi as i64 - 1,
        });
    }
    let cache = SpecialNumberCache::new(n_hi);
    PatternId::RECURRENCE
        .into_iter()
        .map(|pattern| {
            let ratios = (n_lo..=n_hi)
                .map(|n| {
                    let avr = cache.average_occurrences(pattern, n)?;
                    Ok((n, avr / Rational::from_integer(BigInt::from(n * n))))
                })
                .collect::<Result<Vec<_>>>()?;
            let start = n_lo.max(20);
            let first_violation = ratios
                .windows(2)
                .filter(|w| w[0].0 >= start)
                .find(|w| deviation(&w[1].1) >= deviation(&w[0].1))
                .map(|w| w[1].0);
            Ok(LimitCheck {
                pattern,
                ratios,
                deviation_decreasing: first_violation.is_none(),
                first_violation,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::BruteForce;
    use crate::recurrences::distribution_table;

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn frac(a: i64, b: i64) -> Rational {
        Rational::new(int(a), int(b))
    }

    /// Set partitions of `[n]` by restricted growth strings, counted by block number.
    fn partitions_by_blocks(n: usize) -> Vec<u64> {
        let mut counts = vec![0u64; n + 1];
        fn go(pos: usize, n: usize, max: usize, counts: &mut [u64]) {
            if pos == n {
                counts[max] += 1;
                return;
            }
            for b in 0..=max {
                go(pos + 1, n, max.max(b + 1), counts);
            }
        }
        if n == 0 {
            counts[0] = 1;
        } else {
            go(1, n, 1, &mut counts);
        }
        counts
    }

    #[test]
    fn special_numbers() {
        let c = SpecialNumberCache::new(12);
        let bell = [1, 1, 2, 5, 15, 52, 203, 877, 4140];
        let comp = [1, -1, 0, 1, 1, -2, -9, -9, 50, 267, 413];
        for (n, b) in bell.iter().enumerate() {
            assert_eq!(c.bell(n), &int(*b));
        }
        for (n, b) in comp.iter().enumerate() {
            assert_eq!(c.complementary_bell(n as i64), &int(*b));
        }
        assert_eq!(c.complementary_bell(-1), &int(-1));
        assert_eq!(c.stirling2(5, 2), int(15));
        assert_eq!(c.stirling2(3, 5), int(0));
        assert_eq!(c.harmonic(3), &frac(11, 6));
        for n in 1..=12 {
            assert_eq!(c.harmonic(n) - c.harmonic(n - 1), frac(1, n as i64));
        }
        for n in 0..=8 {
            let counts = partitions_by_blocks(n);
            for (k, cnt) in counts.iter().enumerate() {
                assert_eq!(c.stirling2(n, k), BigInt::from(*cnt), "S({n},{k})");
            }
        }
    }

    #[test]
    fn avoider_examples() {
        assert_eq!(avoiders(PatternId::P31_2, 4).unwrap(), int(20));
        assert_eq!(avoiders(PatternId::P23_1, 4).unwrap(), int(22));
        assert_eq!(avoiders(PatternId::P12_3, 3).unwrap(), int(2));
        assert_eq!(avoiders(PatternId::P12_3, 2).unwrap(), int(2));
        for p in PatternId::ALL {
            assert_eq!(avoiders(p, 1).unwrap(), int(1));
            assert_eq!(average_occurrences(p, 1).unwrap(), Rational::zero());
        }
        assert!(avoiders(PatternId::P31_2, 0).is_err());
    }

    #[test]
    fn average_examples() {
        assert_eq!(average_occurrences(PatternId::P23_1, 3).unwrap(), Rational::zero());
        assert_eq!(average_occurrences(PatternId::P31_2, 4).unwrap(), frac(1, 6));
        for p in PatternId::ALL {
            assert_eq!(average_occurrences(p, 2).unwrap(), Rational::zero(), "{p}");
        }
    }

    #[test]
    fn closed_forms_match_brute_force() {
        let bf = BruteForce::default();
        let cache = SpecialNumberCache::new(8);
        for p in PatternId::ALL {
            for n in 1..=8 {
                let g = bf.distribution(n, &p.vincular()).unwrap();
                assert_eq!(cache.avoiders(p, n).unwrap(), g.coeff(0), "{p} n={n}");
                let total = g.derivative().eval(&BigInt::one());
                let avg = cache.average_occurrences(p, n).unwrap() * Rational::from_integer(factorial(n));
                assert_eq!(avg, Rational::from_integer(total.clone()), "{p} n={n}");
                if p.has_recurrence() {
                    assert_eq!(total_occurrences(p, n).unwrap(), total, "{p} n={n}");
                }
            }
        }
        for a in [AuxPattern::P3_21, AuxPattern::P3_12] {
            for n in 1..=8 {
                let total = bf.total(n, &a.vincular()).unwrap();
                assert_eq!(aux_total(a, n).unwrap(), total, "{} n={n}", a.name());
            }
        }
    }

    #[test]
    fn closed_forms_match_recurrences() {
        let cache = SpecialNumberCache::new(30);
        for p in PatternId::RECURRENCE {
            let t = distribution_table(p, 30).unwrap();
            for (n, g) in t.iter() {
                assert_eq!(cache.avoiders(p, n).unwrap(), g.coeff(0), "{p} n={n}");
                let total = g.derivative().eval(&BigInt::one());
                assert_eq!(total_occurrences(p, n).unwrap(), total, "{p} n={n}");
                let avg = cache.average_occurrences(p, n).unwrap() * Rational::from_integer(factorial(n));
                assert_eq!(avg, Rational::from_integer(total), "{p} n={n}");
            }
        }
    }

    #[test]
    fn totals_examples() {
        assert_eq!(total_occurrences(PatternId::P31_2, 4).unwrap(), int(4));
        assert_eq!(total_21_3_plus_3_21(5), int(96));
        for n in 1..=12 {
            assert_eq!(
                total_occurrences(PatternId::P32_1, n).unwrap(),
                total_occurrences(PatternId::P23_1, n).unwrap()
            );
        }
        assert!(total_occurrences(PatternId::P13_2, 4).is_err());
    }

    #[test]
    fn limit() {
        let checks = limit_check(3, 200).unwrap();
        assert_eq!(checks.len(), 5);
        for c in &checks {
            assert!(c.deviation_decreasing, "{} at {:?}", c.pattern, c.first_violation);
            assert_eq!(c.ratios.len(), 198);
        }
        let cache = SpecialNumberCache::new(1000);
        for p in PatternId::RECURRENCE {
            let r = cache.average_occurrences(p, 1000).unwrap() / Rational::from_integer(int(1_000_000));
            assert!(deviation(&r) < frac(1, 100), "{p}");
        }
        assert!(limit_check(2, 10).is_err());
        assert!(limit_check(10, 10).is_err());
    }
}
