//! Distribution polynomials `g_n(q)` for the five `xy-z` patterns, computed
//! by recurrence, and the refined families `g_n(1k)`.
//!
//! Every table stores `g_0 = 1` internally so that `g_{n-j}` is always
//! addressable; public accessors start at `n = 1`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numbers::binomial;
use crate::perm::VincularPattern3;
use crate::qpoly::{complete_h, q_binomial, q_int};
use crate::scalar::Scalar;
use crate::QPoly;

/// The patterns covered by the library. `P13_2` only has closed forms.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum PatternId {
    P12_3,
    P21_3,
    P23_1,
    P32_1,
    P31_2,
    P13_2,
}

impl PatternId {
    /// Patterns with a distribution recurrence.
    pub const RECURRENCE: [PatternId; 5] = [
        PatternId::P12_3,
        PatternId::P21_3,
        PatternId::P23_1,
        PatternId::P32_1,
        PatternId::P31_2,
    ];

    pub const ALL: [PatternId; 6] = [
        PatternId::P12_3,
        PatternId::P21_3,
        PatternId::P23_1,
        PatternId::P32_1,
        PatternId::P31_2,
        PatternId::P13_2,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            PatternId::P12_3 => "12-3",
            PatternId::P21_3 => "21-3",
            PatternId::P23_1 => "23-1",
            PatternId::P32_1 => "32-1",
            PatternId::P31_2 => "31-2",
            PatternId::P13_2 => "13-2",
        }
    }

    pub fn vincular(&self) -> VincularPattern3 {
        self.name().parse().expect("built-in pattern names parse")
    }

    pub fn has_recurrence(&self) -> bool {
        *self != PatternId::P13_2
    }
}

impl fmt::Display for PatternId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PatternId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PatternId::ALL
            .into_iter()
            .find(|p| p.name() == s.trim())
            .ok_or_else(|| Error::InvalidPattern(format!("{s:?} is not one of 12-3, 21-3, 23-1, 32-1, 31-2, 13-2")))
    }
}

/// `g_1, ..., g_{n_max}` for one pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistributionTable {
    pattern: PatternId,
    gs: Vec<QPoly>,
}

impl DistributionTable {
    pub fn pattern(&self) -> PatternId {
        self.pattern
    }

    pub fn n_max(&self) -> usize {
        self.gs.len() - 1
    }

    /// `g_n`, for `1 <= n <= n_max`.
    pub fn get(&self, n: usize) -> Option<&QPoly> {
        if n == 0 {
            None
        } else {
            self.gs.get(n)
        }
    }

    /// `(n, g_n)` for `n = 1..=n_max`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &QPoly)> {
        self.gs.iter().enumerate().skip(1)
    }

    /// Includes `g_0 = 1` at index 0.
    fn with_zero(&self) -> &[QPoly] {
        &self.gs
    }
}

/// Computes the table for any pattern with a recurrence.
pub fn distribution_table(pattern: PatternId, n_max: usize) -> Result<DistributionTable> {
    match pattern {
        PatternId::P12_3 => g_12_3(n_max),
        PatternId::P21_3 => g_21_3(n_max),
        PatternId::P23_1 => g_23_1(n_max),
        PatternId::P32_1 => g_32_1(n_max),
        PatternId::P31_2 => g_31_2(n_max),
        PatternId::P13_2 => Err(Error::Unsupported(
            "13-2 has closed forms only, no distribution recurrence".into(),
        )),
    }
}

fn check_n_max(n_max: usize) -> Result<()> {
    if n_max == 0 {
        Err(Error::OutOfRange {
            what: "n_max",
            value: 0,
            lo: 1,
            hi: i64::MAX,
        })
    } else {
        Ok(())
    }
}

fn int(v: usize) -> QPoly {
    QPoly::constant(BigInt::from(v))
}

/// `(q - 1)^i` for `i = 0..=m`.
fn q_minus_one_powers(m: usize) -> Vec<QPoly> {
    let base = QPoly::from_ints(&[-1, 1]);
    let mut out = vec![QPoly::one()];
    for i in 1..=m {
        out.push(&out[i - 1] * &base);
    }
    out
}

/// `(1 - q)^i` from `(q - 1)^i`.
fn one_minus_q_pow(pm: &[QPoly], i: usize) -> QPoly {
    if i.is_multiple_of(2) {
        pm[i].clone()
    } else {
        -&pm[i]
    }
}

/// `sum of coeff * g[index]`, with the products formed in parallel.
fn combine(terms: &[(QPoly, usize)], gs: &[QPoly]) -> QPoly {
    terms
        .par_iter()
        .map(|(c, i)| c * &gs[*i])
        .reduce(QPoly::zero, |a, b| &a + &b)
}

fn start_table() -> Vec<QPoly> {
    vec![QPoly::one(), QPoly::one()]
}

fn finish(pattern: PatternId, mut gs: Vec<QPoly>, n_max: usize) -> DistributionTable {
    gs.truncate(n_max + 1);
    DistributionTable { pattern, gs }
}

/// The coefficient `b_{n,j}` (`j >= 2`) of the 31-2 recurrence:
/// `sum_k (n-k)/j C(n-j-1-k, j-1) C(j-2+k, j-2) q^k`.
pub fn b_31_2(n: usize, j: usize) -> Result<QPoly> {
    if j < 2 || n < 2 * j {
        return Ok(QPoly::zero());
    }
    let (n, j) = (n as i64, j as i64);
    let den = BigInt::from(j);
    let mut coeffs = Vec::with_capacity((n - j) as usize);
    for k in 0..n - j {
        let num = BigInt::from(n - k) * binomial(n - j - 1 - k, j - 1) * binomial(j - 2 + k, j - 2);
        let c = num.exact_quotient(&den).ok_or_else(|| {
            Error::IdentityViolation(format!("31-2 coefficient not integral at n={n}, j={j}, k={k}"))
        })?;
        coeffs.push(c);
    }
    Ok(QPoly::from_coeffs(coeffs))
}

/// `g_n = n g_{n-1} + sum_{j=2}^{floor(n/2)} (q-1)^{j-1} b_{n,j} g_{n-j}`.
pub fn g_31_2(n_max: usize) -> Result<DistributionTable> {
    check_n_max(n_max)?;
    let pm = q_minus_one_powers(n_max / 2);
    let mut gs = start_table();
    for n in 2..=n_max {
        let mut terms = vec![(int(n), n - 1)];
        for j in 2..=n / 2 {
            terms.push((&pm[j - 1] * &b_31_2(n, j)?, n - j));
        }
        gs.push(combine(&terms, &gs));
    }
    Ok(finish(PatternId::P31_2, gs, n_max))
}

/// Row `m` of the q-binomial triangle, built from row `m - 1`.
fn next_q_binomial_row(prev: &[QPoly]) -> Vec<QPoly> {
    let m = prev.len();
    (0..=m)
        .map(|r| {
            let mut v = if r > 0 { prev[r - 1].clone() } else { QPoly::zero() };
            if r < m {
                v += &prev[r].shift(r);
            }
            v
        })
        .collect()
}

/// `g_n = n g_{n-1} + sum_{j=2}^{n-2} T_{n,j} g_{n-j}` with `T_{n,j}` the
/// alternating q-binomial sum. Each `T_{n,j}` is also checked against
/// `(q-1)^{j-1} sum_{k=j+2}^n e_{j-1}([1], ..., [k-3])`.
pub fn g_32_1(n_max: usize) -> Result<DistributionTable> {
    check_n_max(n_max)?;
    let pm = q_minus_one_powers(n_max);
    let mut gs = start_table();
    // t[j]: the q-binomial route; b[j]: the elementary symmetric route.
    let mut t = vec![QPoly::zero(); n_max + 1];
    let mut b = vec![QPoly::zero(); n_max + 1];
    // Row n-3 of the q-binomial triangle and e_s([1..n-3]) for s >= 0.
    let mut qbin_row: Vec<QPoly> = Vec::new();
    let mut e_row: Vec<QPoly> = Vec::new();
    for n in 2..=n_max {
        if n >= 3 {
            let m = n - 3;
            if m == 0 {
                qbin_row = vec![QPoly::one()];
                e_row = vec![QPoly::one()];
            } else {
                qbin_row = next_q_binomial_row(&qbin_row);
                let mut next = vec![QPoly::one()];
                for s in 1..=m {
                    let mut v = e_row.get(s).cloned().unwrap_or_default();
                    v += &e_row[s - 1].mul_q_int(m);
                    next.push(v);
                }
                e_row = next;
            }
        }
        let mut terms = vec![(int(n), n - 1)];
        for j in 2..=n.saturating_sub(2) {
            let k = (n - 2 - j) as i64;
            for a in 1..=j {
                let c = binomial(j as i64 - a as i64 + k, k);
                let term = qbin_row[a - 1].shift(a * (a - 1) / 2).scale(&c);
                if (j - a) % 2 == 0 {
                    t[j] += &term;
                } else {
                    t[j] -= &term;
                }
            }
            b[j] += &e_row[j - 1];
            if &pm[j - 1] * &b[j] != t[j] {
                return Err(Error::IdentityViolation(format!(
                    "32-1 routes disagree at n={n}, j={j}"
                )));
            }
            terms.push((t[j].clone(), n - j));
        }
        gs.push(combine(&terms, &gs));
    }
    Ok(finish(PatternId::P32_1, gs, n_max))
}

/// Coefficients `b_{n,j}` (`j = 2..=n-1`) of the 12-3 recurrence for every
/// `n <= n_max`, indexed `[n][j]`, from the diagonal recurrence
/// `Q(U,t) = Q(U-1,t) + [U] Q(U,t-1)` with `Q(U,0) = [U+1]`, where
/// `Q(U,t) = sum_{L=0}^{U} q^L h_t([L], ..., [U])` and
/// `b_{n,j} = 2 Q(U,t) - Q(U-1,t)` at `U = n-j-1`, `t = j-1`.
struct Diagonal12_3 {
    prev: Vec<QPoly>,
    cur: Vec<QPoly>,
}

impl Diagonal12_3 {
    fn new() -> Self {
        Diagonal12_3 {
            prev: Vec::new(),
            cur: Vec::new(),
        }
    }

    /// Moves to the diagonal `U + t = d`; entry `t` is `Q(d-t, t)`.
    fn advance(&mut self, d: usize) {
        let mut next = Vec::with_capacity(d + 1);
        next.push(q_int::<BigInt>(d + 1));
        for t in 1..=d {
            let u = d - t;
            let mut v = self.cur.get(t).cloned().unwrap_or_default();
            v += &self.cur[t - 1].mul_q_int(u);
            next.push(v);
        }
        self.prev = std::mem::replace(&mut self.cur, next);
    }

    /// `b_{n,j}` for the current diagonal `d = n - 2`.
    fn b(&self, t: usize) -> QPoly {
        let mut v = self.cur[t].scale(&BigInt::from(2));
        if let Some(p) = self.prev.get(t) {
            v -= p;
        }
        v
    }
}

/// `g_n = (2q^{n-2} + [n-2]) g_{n-1} + sum_{j=2}^{n-1} b_{n,j} (1-q)^{j-1} g_{n-j}`.
pub fn g_12_3(n_max: usize) -> Result<DistributionTable> {
    check_n_max(n_max)?;
    let pm = q_minus_one_powers(n_max);
    let mut gs = start_table();
    let mut diag = Diagonal12_3::new();
    for n in 2..=n_max {
        diag.advance(n - 2);
        let lead = &QPoly::monomial(BigInt::from(2), n - 2) + &q_int(n - 2);
        let mut terms = vec![(lead, n - 1)];
        for j in 2..n {
            terms.push((&one_minus_q_pow(&pm, j - 1) * &diag.b(j - 1), n - j));
        }
        gs.push(combine(&terms, &gs));
    }
    Ok(finish(PatternId::P12_3, gs, n_max))
}

/// The coefficient of `g_{n-j}` in the 12-3 recurrence above, including
/// the leading `j = 1` term.
pub fn recurrence_coefficient_12_3(n: usize, j: usize) -> QPoly {
    if j == 0 || j >= n {
        return QPoly::zero();
    }
    if j == 1 {
        return &QPoly::monomial(BigInt::from(2), n - 2) + &q_int(n - 2);
    }
    let mut diag = Diagonal12_3::new();
    for d in 0..=n - 2 {
        diag.advance(d);
    }
    let pm = q_minus_one_powers(j - 1);
    &one_minus_q_pow(&pm, j - 1) * &diag.b(j - 1)
}

/// The closed coefficient
/// `c_{n,j} = sum_{i<j} sum_{k<n-j} (-1)^i (2[k+i, i] C(k+j-1, j-i-1)
///   - [k+i-1, i] C(k+j-2, j-i-1)) q^{(i+1)(n-j-k-1)}`.
pub fn c_12_3(n: usize, j: usize) -> QPoly {
    if j == 0 || j >= n {
        return QPoly::zero();
    }
    let (ni, ji) = (n as i64, j as i64);
    let mut acc = QPoly::zero();
    for i in 0..ji {
        for k in 0..ni - ji {
            let first = q_binomial::<BigInt>(k + i, i).scale(&(binomial(k + ji - 1, ji - i - 1) * 2));
            let second = q_binomial::<BigInt>(k + i - 1, i).scale(&binomial(k + ji - 2, ji - i - 1));
            let term = (&first - &second).shift(((i + 1) * (ni - ji - k - 1)) as usize);
            if i % 2 == 0 {
                acc += &term;
            } else {
                acc -= &term;
            }
        }
    }
    acc
}

/// How the closed `c_{n,j}` form relates to the computed `g_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CForm12_3 {
    pub n: usize,
    /// `c_{n,j}` equals the recurrence coefficient for every `1 <= j <= n-1`.
    pub coefficients_match: bool,
    /// `sum_{j=2}^{n-1} c_{n,j} g_{n-j} = g_n`.
    pub sum_from_2_matches: bool,
    /// `sum_{j=1}^{n-1} c_{n,j} g_{n-j} = g_n`.
    pub sum_from_1_matches: bool,
}

/// Evaluates the `c_{n,j}` form against a 12-3 table for `3 <= n <= n_hi`.
pub fn c_form_12_3_report(table: &DistributionTable, n_hi: usize) -> Result<Vec<CForm12_3>> {
    if table.pattern() != PatternId::P12_3 {
        return Err(Error::Unsupported("the c_{n,j} form belongs to 12-3".into()));
    }
    let gs = table.with_zero();
    let n_hi = n_hi.min(table.n_max());
    Ok((3..=n_hi)
        .map(|n| {
            let cs: Vec<QPoly> = (0..n).map(|j| c_12_3(n, j)).collect();
            let coefficients_match = (1..n).all(|j| cs[j] == recurrence_coefficient_12_3(n, j));
            let from2: QPoly = (2..n).map(|j| &cs[j] * &gs[n - j]).sum();
            let from1 = &from2 + &(&cs[1] * &gs[n - 1]);
            CForm12_3 {
                n,
                coefficients_match,
                sum_from_2_matches: from2 == gs[n],
                sum_from_1_matches: from1 == gs[n],
            }
        })
        .collect())
}

/// Row `m` of `W(m, t) = sum_{1<=i_1<...<i_t<=m} (1+[i_1]) [i_1]...[i_t]`,
/// indexed by `t` (entry 0 unused).
fn next_w_row(prev: &[QPoly], m: usize) -> Vec<QPoly> {
    let mut row = vec![QPoly::zero(); m + 1];
    if m == 0 {
        return row;
    }
    let qm = q_int::<BigInt>(m);
    let mut w1 = prev.get(1).cloned().unwrap_or_default();
    w1 += &(&(&QPoly::one() + &qm) * &qm);
    row[1] = w1;
    for t in 2..=m {
        let mut v = prev.get(t).cloned().unwrap_or_default();
        v += &prev[t - 1].mul_q_int(m);
        row[t] = v;
    }
    row
}

/// `g_n = (1 + [n-1]) g_{n-1} + sum_{j=2}^{n-1} b_{n,j} (1-q)^{j-1} g_{n-j}`,
/// `b_{n,2} = sum_{k=1}^{n-2} [k](1+[k])`,
/// `b_{n,j} = sum_{k=j+1}^{n} [k-2] W(k-3, j-2)` for `j >= 3`.
pub fn g_23_1(n_max: usize) -> Result<DistributionTable> {
    check_n_max(n_max)?;
    let pm = q_minus_one_powers(n_max);
    let mut gs = start_table();
    let mut b = vec![QPoly::zero(); n_max + 1];
    // W rows for m = n-3 and m = n-2.
    let mut w_lo: Vec<QPoly> = vec![QPoly::zero()];
    let mut w_hi: Vec<QPoly> = vec![QPoly::zero()];
    for n in 2..=n_max {
        if n >= 3 {
            w_lo = std::mem::take(&mut w_hi);
            w_hi = next_w_row(&w_lo, n - 2);
        }
        let lead = &QPoly::one() + &q_int(n - 1);
        let mut terms = vec![(lead, n - 1)];
        for j in 2..n {
            if j == 2 {
                b[2] = w_hi[1].clone();
            } else {
                b[j] += &w_lo[j - 2].mul_q_int(n - 2);
            }
            terms.push((&one_minus_q_pow(&pm, j - 1) * &b[j], n - j));
        }
        gs.push(combine(&terms, &gs));
    }
    Ok(finish(PatternId::P23_1, gs, n_max))
}

/// Diagonal tables for 21-3, with `U + t = d`:
/// `M_t(U) = h_t([0], ..., [U])` and
/// `P_t(U) = sum_{0<=i_1<=...<=i_t<=U} [i_1]...[i_t] (U + 2 - i_t)`,
/// so that `b_{n,j} = P_{j-1}(n-j-1)`.
struct Diagonal21_3 {
    p: Vec<QPoly>,
    m: Vec<QPoly>,
}

impl Diagonal21_3 {
    fn new() -> Self {
        Diagonal21_3 {
            p: Vec::new(),
            m: Vec::new(),
        }
    }

    /// Moves to the diagonal `U + t = d`; entry `t` is at `U = d - t`.
    fn advance(&mut self, d: usize) {
        let mut p = Vec::with_capacity(d + 1);
        let mut m = Vec::with_capacity(d + 1);
        p.push(int(d + 2));
        m.push(QPoly::one());
        for t in 1..=d {
            let u = d - t;
            // Values at U - 1 sit at the same t on the previous diagonal;
            // U - 1 = -1 gives zero for t >= 1.
            let prev_p = self.p.get(t).cloned().unwrap_or_default();
            let prev_m = self.m.get(t).cloned().unwrap_or_default();
            let m_lower = self.m[t - 1].mul_q_int(u);
            let mut pt = prev_p;
            pt += &prev_m;
            pt += &m_lower.scale(&BigInt::from(2));
            let mut mt = prev_m;
            mt += &m_lower;
            p.push(pt);
            m.push(mt);
        }
        self.p = p;
        self.m = m;
    }
}

/// `g_n = n g_{n-1} + sum_{j=2}^{n-1} b_{n,j} (q-1)^{j-1} g_{n-j}`,
/// `b_{n,2} = sum_{k=3}^n (k-1)[n-k]` and for `j >= 3` the nested sum over
/// `n-k <= i_1 <= ... <= i_{j-2} <= n-j-1` weighted by `n-j-i_{j-2}+1`.
pub fn g_21_3(n_max: usize) -> Result<DistributionTable> {
    check_n_max(n_max)?;
    let pm = q_minus_one_powers(n_max);
    let mut gs = start_table();
    let mut diag = Diagonal21_3::new();
    for n in 2..=n_max {
        diag.advance(n - 2);
        let mut terms = vec![(int(n), n - 1)];
        for j in 2..n {
            terms.push((&pm[j - 1] * &diag.p[j - 1], n - j));
        }
        gs.push(combine(&terms, &gs));
    }
    Ok(finish(PatternId::P21_3, gs, n_max))
}

/// `b_{n,2}` for 23-1 as the polynomial sum `sum_{k=1}^{n-2} [k](1+[k])`.
pub fn b2_23_1(n: usize) -> QPoly {
    (1..n.saturating_sub(1))
        .map(|k| {
            let qk = q_int::<BigInt>(k);
            &qk * &(&QPoly::one() + &qk)
        })
        .sum()
}

/// `b_{n,2}` for 21-3 as the polynomial sum `sum_{k=3}^n (k-1)[n-k]`.
pub fn b2_21_3(n: usize) -> QPoly {
    (3..=n).map(|k| q_int::<BigInt>(n - k).scale(&BigInt::from(k - 1))).sum()
}

/// Checks the rational closed form of the 23-1 `b_{n,2}` with denominators
/// cleared: `(q-1)^3 (q+1) b = (2-q) n (q-1)(q+1) + q^3-3q^2+q+4
/// + (q-3) q^{n-1} (q+1) + q^{2n-2}`. Valid for `n >= 2`.
pub fn b2_23_1_closed_form_holds(n: usize) -> bool {
    let q1 = QPoly::from_ints(&[-1, 1]);
    let qp1 = QPoly::from_ints(&[1, 1]);
    let lhs = &(&q1.pow(3) * &qp1) * &b2_23_1(n);
    let mut rhs = &(&QPoly::from_ints(&[2, -1]) * &q1) * &qp1.scale(&BigInt::from(n));
    rhs += &QPoly::from_ints(&[4, 1, -3, 1]);
    rhs += &(&QPoly::from_ints(&[-3, 1]) * &qp1).shift(n - 1);
    rhs += &QPoly::monomial(BigInt::one(), 2 * n - 2);
    lhs == rhs
}

/// Checks the rational closed form of the 21-3 `b_{n,2}` with denominators
/// cleared: `2(q-1)^3 b = -n^2 (q-1)^2 + (q-3) n (q-1) + 2q(2q^{n-2} - q^{n-3} + q - 2)`.
/// Valid for `n >= 3`.
pub fn b2_21_3_closed_form_holds(n: usize) -> bool {
    let q1 = QPoly::from_ints(&[-1, 1]);
    let lhs = q1.pow(3).scale(&BigInt::from(2)) * b2_21_3(n);
    let mut rhs = -q1.pow(2).scale(&BigInt::from(n * n));
    rhs += &(&QPoly::from_ints(&[-3, 1]) * &q1).scale(&BigInt::from(n));
    let mut inner = QPoly::monomial(BigInt::from(2), n - 2);
    inner -= &QPoly::monomial(BigInt::one(), n - 3);
    inner += &QPoly::from_ints(&[-2, 1]);
    rhs += &inner.shift(1).scale(&BigInt::from(2));
    lhs == rhs
}

/// `g_n(1k)` for `2 <= k <= n <= n_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinedTable {
    pattern: PatternId,
    /// `rows[n][k - 2] = g_n(1k)`; rows 0 and 1 are empty.
    rows: Vec<Vec<QPoly>>,
}

impl RefinedTable {
    pub fn pattern(&self) -> PatternId {
        self.pattern
    }

    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn get(&self, n: usize, k: usize) -> Option<&QPoly> {
        if k < 2 {
            return None;
        }
        self.rows.get(n)?.get(k - 2)
    }

    /// `[g_n(12), ..., g_n(1n)]`.
    pub fn row(&self, n: usize) -> Option<&[QPoly]> {
        self.rows.get(n).filter(|r| !r.is_empty()).map(Vec::as_slice)
    }
}

/// `g_n(1k)` for a single `(n, k)`.
pub fn refined_g1k(pattern: PatternId, n: usize, k: usize) -> Result<QPoly> {
    if k < 2 || k > n {
        return Err(Error::OutOfRange {
            what: "k",
            value: k as i64,
            lo: 2,
            hi: n as i64,
        });
    }
    Ok(refined_table(pattern, n)?.rows[n][k - 2].clone())
}

/// Builds `g_n(1k)` for every `2 <= k <= n <= n_max` and checks, for each
/// row, that it sums to `g_n` and satisfies the pattern's difference
/// recurrence (with any denominators multiplied through).
pub fn refined_table(pattern: PatternId, n_max: usize) -> Result<RefinedTable> {
    let table = distribution_table(pattern, n_max)?;
    let g = table.with_zero();
    let pm = q_minus_one_powers(n_max);
    let mut rows: Vec<Vec<QPoly>> = vec![Vec::new(), Vec::new()];
    for n in 2..=n_max {
        let row = match pattern {
            PatternId::P31_2 => refined_row_31_2(n, g, &rows),
            PatternId::P32_1 => refined_row_32_1(n, g, &rows),
            PatternId::P12_3 => refined_row_12_3(n, g, &pm),
            PatternId::P23_1 => refined_row_23_1(n, g, &pm),
            PatternId::P21_3 => refined_row_21_3(n, g, &pm),
            PatternId::P13_2 => unreachable!("rejected by distribution_table"),
        };
        let total: QPoly = row.iter().sum();
        if total != g[n] {
            return Err(Error::IdentityViolation(format!(
                "{pattern}: refined values do not sum to g_{n}"
            )));
        }
        rows.push(row);
        check_refined_identities(pattern, n, g, &rows)?;
    }
    Ok(RefinedTable { pattern, rows })
}

fn refined_row_31_2(n: usize, g: &[QPoly], rows: &[Vec<QPoly>]) -> Vec<QPoly> {
    let q1 = QPoly::from_ints(&[-1, 1]);
    let qp1 = QPoly::from_ints(&[1, 1]);
    let mut row: Vec<QPoly> = Vec::with_capacity(n - 1);
    for k in 2..=n {
        let v = match k {
            2 => g[n - 1].scale(&BigInt::from(2)),
            3 => g[n - 1].clone(),
            4 => &g[n - 1] + &(&q1 * &g[n - 2]).scale(&BigInt::from(2)),
            _ => {
                let mut v = &qp1 * &row[k - 3];
                v -= &row[k - 4].shift(1);
                v += &(&q1 * &rows[n - 1][k - 4]);
                v
            }
        };
        row.push(v);
    }
    row
}

fn refined_row_32_1(n: usize, g: &[QPoly], rows: &[Vec<QPoly>]) -> Vec<QPoly> {
    let mut row: Vec<QPoly> = Vec::with_capacity(n - 1);
    for k in 2..=n {
        let v = match k {
            2 => g[n - 1].scale(&BigInt::from(2)),
            3 => g[n - 1].clone(),
            _ => {
                let factor = &QPoly::monomial(BigInt::one(), k - 3) - &QPoly::one();
                &row[k - 3] + &(&factor * &rows[n - 1][k - 3])
            }
        };
        row.push(v);
    }
    row
}

/// `h_t` of the q-integers `[lo], ..., [hi]`, zero on an empty window for `t >= 1`.
fn h_window(t: i64, lo: i64, hi: i64) -> QPoly {
    if t >= 1 && lo > hi {
        return QPoly::zero();
    }
    let xs: Vec<QPoly> = (lo..=hi).map(|i| q_int::<BigInt>(i as usize)).collect();
    complete_h(t, &xs)
}

fn refined_row_12_3(n: usize, g: &[QPoly], pm: &[QPoly]) -> Vec<QPoly> {
    let mut row = vec![g[n - 1].shift(n - 2).scale(&BigInt::from(2))];
    for k in 3..=n {
        let mut s = QPoly::zero();
        for j in 1..k {
            let (t, lo) = ((j - 1) as i64, (n - k) as i64);
            let hi = (n - j - 1) as i64;
            let a = &h_window(t, lo, hi).scale(&BigInt::from(2)) - &h_window(t, lo, hi - 1);
            s += &(&(&one_minus_q_pow(pm, j - 1) * &a) * &g[n - j]);
        }
        row.push(s.shift(n - k));
    }
    row
}

fn refined_row_23_1(n: usize, g: &[QPoly], pm: &[QPoly]) -> Vec<QPoly> {
    let mut row = vec![g[n - 1].scale(&BigInt::from(2))];
    // W rows up to m = n - 3.
    let mut w_rows = vec![vec![QPoly::zero()]];
    for m in 1..n.saturating_sub(2) {
        let next = next_w_row(&w_rows[m - 1], m);
        w_rows.push(next);
    }
    for k in 3..=n {
        let mut s = QPoly::zero();
        for j in 2..k {
            let a = if j == 2 {
                &QPoly::one() + &q_int(k - 2)
            } else {
                w_rows[k - 3][j - 2].clone()
            };
            s += &(&(&one_minus_q_pow(pm, j - 1) * &a) * &g[n - j]);
        }
        let mut v = g[n - 1].shift(k - 2);
        v += &s.mul_q_int(k - 2);
        row.push(v);
    }
    row
}

/// `A_t(L) = sum_{L<=i_1<=...<=i_t<=U} [i_1]...[i_t] (U + 2 - i_t)` for
/// `t = 0..=t_max` and `L = 0..=U+1`, indexed `[t][L]`.
fn weighted_windows(u: usize, t_max: usize) -> Vec<Vec<QPoly>> {
    let mut a: Vec<Vec<QPoly>> = vec![(0..=u + 1).map(|l| int(u + 2 - l)).collect()];
    for t in 1..=t_max {
        let mut cur = vec![QPoly::zero(); u + 2];
        for l in (0..=u).rev() {
            let mut v = cur[l + 1].clone();
            v += &a[t - 1][l].mul_q_int(l);
            cur[l] = v;
        }
        a.push(cur);
    }
    a
}

fn refined_row_21_3(n: usize, g: &[QPoly], pm: &[QPoly]) -> Vec<QPoly> {
    let mut row = vec![g[n - 1].scale(&BigInt::from(2))];
    let windows: Vec<Vec<Vec<QPoly>>> = (2..n).map(|j| weighted_windows(n - j - 1, j - 2)).collect();
    for k in 3..=n {
        let mut s = QPoly::zero();
        for j in 2..k {
            let a = &windows[j - 2][j - 2][n - k];
            s += &(&(&pm[j - 1] * a) * &g[n - j]);
        }
        let mut v = g[n - 1].clone();
        v += &s.mul_q_int(n - k);
        row.push(v);
    }
    row
}

fn check_refined_identities(pattern: PatternId, n: usize, g: &[QPoly], rows: &[Vec<QPoly>]) -> Result<()> {
    let at = |n: usize, k: usize| &rows[n][k - 2];
    let q1 = QPoly::from_ints(&[-1, 1]);
    let fail = |what: &str, k: usize| {
        Err(Error::IdentityViolation(format!(
            "{pattern}: {what} fails at n={n}, k={k}"
        )))
    };
    if n >= 3 {
        let g13 = at(n, 3);
        let expected = match pattern {
            PatternId::P12_3 => {
                let qn3 = QPoly::monomial(BigInt::one(), n - 3);
                let mut e = &qn3 * &g[n - 1];
                e -= &(&(&qn3 * &(&qn3 - &QPoly::one())) * &g[n - 2]).scale(&BigInt::from(2));
                e
            }
            PatternId::P23_1 => {
                let mut e = g[n - 1].shift(1);
                e -= &(&q1 * &g[n - 2]).scale(&BigInt::from(2));
                e
            }
            PatternId::P21_3 => &g[n - 1] + &(&q1 * &g[n - 2].mul_q_int(n - 3)).scale(&BigInt::from(2)),
            PatternId::P31_2 | PatternId::P32_1 => g[n - 1].clone(),
            PatternId::P13_2 => unreachable!(),
        };
        if *g13 != expected {
            return fail("initial value g_n(13)", 3);
        }
    }
    for k in 4..=n {
        let holds = match pattern {
            // q g_n(1k) = g_n(1(k-1)) + q (1 - q^{n-k}) g_{n-1}(1(k-1))
            PatternId::P12_3 => {
                let factor = &QPoly::one() - &QPoly::monomial(BigInt::one(), n - k);
                at(n, k).shift(1) == at(n, k - 1) + &(&factor * at(n - 1, k - 1)).shift(1)
            }
            // [k-3] g_n(1k) = -q^{k-3} g_{n-1} + [k-2] g_n(1(k-1))
            //                 + (1-q) [k-2][k-3] g_{n-1}(1(k-1))
            PatternId::P23_1 => {
                let lhs = at(n, k).mul_q_int(k - 3);
                let mut rhs = -g[n - 1].shift(k - 3);
                rhs += &at(n, k - 1).mul_q_int(k - 2);
                rhs -= &(&q1 * at(n - 1, k - 1)).mul_q_int(k - 2).mul_q_int(k - 3);
                lhs == rhs
            }
            // [n-k+1] g_n(1k) = q^{n-k} g_{n-1} + [n-k] g_n(1(k-1))
            //                   + (q-1) [n-k][n-k+1] g_{n-1}(1(k-1))
            PatternId::P21_3 => {
                let lhs = at(n, k).mul_q_int(n - k + 1);
                let mut rhs = g[n - 1].shift(n - k);
                rhs += &at(n, k - 1).mul_q_int(n - k);
                rhs += &(&q1 * at(n - 1, k - 1)).mul_q_int(n - k).mul_q_int(n - k + 1);
                lhs == rhs
            }
            PatternId::P31_2 | PatternId::P32_1 => true,
            PatternId::P13_2 => unreachable!(),
        };
        if !holds {
            return fail("difference recurrence", k);
        }
    }
    Ok(())
}
