//! Verification suites: every recurrence, closed form, series and bijection
//! checked against brute force or an independent route.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::bijections::{check_31_2_equivalence, sweep};
use crate::closed_forms::{
    aux_total, limit_check, total_12_3_plus_3_12, total_21_3_plus_3_21,
    total_occurrences, AuxPattern, SpecialNumberCache,
};
use crate::error::{Error, Result};
use crate::numbers::factorial;
use crate::perm::{BruteForce, VincularPattern3};
use crate::qpoly::{complete_h, e_on_qints_closed_form, elementary_e, h_on_qint_window_closed_form, q_int};
use crate::recurrences::{
    b2_21_3_closed_form_holds, b2_23_1_closed_form_holds, c_form_12_3_report, distribution_table,
    refined_table, DistributionTable, PatternId,
};
use crate::series::{
    egf_coefficient, expand_egf_12_3_avoid, expand_egf_12_3_avoid_direct, expand_egf_21_3_avoid,
    expand_g_r_31_2,
};
use crate::{QPoly, Rational};

/// Upper end of the recurrence-only cross-pattern checks.
pub const CROSS_N: usize = 40;
/// Upper end of the series checks.
pub const SERIES_N: usize = 12;
/// Range of the monotone-deviation check and the far point.
pub const LIMIT_RANGE: (usize, usize) = (20, 200);
pub const LIMIT_FAR_N: usize = 1000;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Suite {
    Oracle,
    Refined,
    ClosedForms,
    Series,
    Bijections,
    Identities,
    All,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Oracle,
        Suite::Refined,
        Suite::ClosedForms,
        Suite::Series,
        Suite::Bijections,
        Suite::Identities,
        Suite::All,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Oracle => "oracle",
            Suite::Refined => "refined",
            Suite::ClosedForms => "closed-forms",
            Suite::Series => "series",
            Suite::Bijections => "bijections",
            Suite::Identities => "identities",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Unsupported(format!("unknown suite {s:?}")))
    }
}

/// One pass/fail line; `detail` describes the range on success and the
/// counterexample on failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// A reported discrepancy that does not fail the run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Finding {
    pub name: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<Check>,
    pub findings: Vec<Finding>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{tag} {}: {}", c.name, c.detail)?;
        }
        for x in &self.findings {
            writeln!(f, "NOTE {}: {}", x.name, x.detail)?;
        }
        let failed = self.failures().count();
        write!(f, "{} passed, {} failed", self.checks.len() - failed, failed)
    }
}

/// Runs suites up to `n_max` for everything that touches brute force.
pub struct Verifier {
    n_max: usize,
    brute: BruteForce,
    // brute[n][i]: distribution of pattern i (PatternId::ALL, then 3-21, 3-12).
    brute_table: OnceLock<Result<Vec<Vec<QPoly>>>>,
}

impl Verifier {
    pub fn new(n_max: usize) -> Result<Self> {
        Self::with_brute(n_max, BruteForce::default())
    }

    pub fn with_brute(n_max: usize, brute: BruteForce) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::OutOfRange {
                what: "n_max",
                value: 0,
                lo: 1,
                hi: brute.cap() as i64,
            });
        }
        if n_max > brute.cap() {
            return Err(Error::CapExceeded { n: n_max, cap: brute.cap() });
        }
        Ok(Verifier { n_max, brute, brute_table: OnceLock::new() })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn run(&self, suite: Suite) -> Result<Report> {
        let mut r = Report::default();
        match suite {
            Suite::Oracle => self.oracle(&mut r)?,
            Suite::Refined => self.refined(&mut r)?,
            Suite::ClosedForms => self.closed_forms(&mut r)?,
            Suite::Series => self.series(&mut r)?,
            Suite::Bijections => self.bijections(&mut r)?,
            Suite::Identities => self.identities(&mut r)?,
            Suite::All => {
                for s in &Suite::ALL[..6] {
                    let sub = self.run(*s)?;
                    r.checks.extend(sub.checks);
                    r.findings.extend(sub.findings);
                }
            }
        }
        Ok(r)
    }

    fn brute(&self) -> Result<&[Vec<QPoly>]> {
        self.brute_table
            .get_or_init(|| {
                let pats: Vec<VincularPattern3> = PatternId::ALL
                    .iter()
                    .map(PatternId::vincular)
                    .chain([AuxPattern::P3_21.vincular(), AuxPattern::P3_12.vincular()])
                    .collect();
                let mut rows = vec![Vec::new()];
                for n in 1..=self.n_max {
                    rows.push(self.brute.distributions(n, &pats)?);
                }
                Ok(rows)
            })
            .as_ref()
            .map(Vec::as_slice)
            .map_err(Clone::clone)
    }

    fn brute_of(&self, p: PatternId, n: usize) -> Result<&QPoly> {
        let i = PatternId::ALL.iter().position(|x| *x == p).expect("listed");
        Ok(&self.brute()?[n][i])
    }

    fn brute_aux(&self, a: AuxPattern, n: usize) -> Result<&QPoly> {
        let i = match a {
            AuxPattern::P3_21 => 6,
            AuxPattern::P3_12 => 7,
        };
        Ok(&self.brute()?[n][i])
    }

    fn tables(&self, n_max: usize) -> Result<Vec<DistributionTable>> {
        PatternId::RECURRENCE.iter().map(|&p| distribution_table(p, n_max)).collect()
    }

    fn oracle(&self, r: &mut Report) -> Result<()> {
        let tables = self.tables(self.n_max)?;
        for t in &tables {
            let mut bad = None;
            for n in 1..=self.n_max {
                let brute = self.brute_of(t.pattern(), n)?;
                let rec = t.get(n).expect("in range");
                if rec != brute {
                    bad = Some(format!("n={n}: recurrence {rec}, brute force {brute}"));
                    break;
                }
            }
            push(r, Suite::Oracle, format!("oracle {}", t.pattern()), bad, format!("g_n equal for n=1..={}", self.n_max));
        }
        let mut bad = None;
        for n in 1..=self.n_max {
            for p in PatternId::ALL {
                let g = self.brute_of(p, n)?;
                if g.eval(&BigInt::one()) != factorial(n) {
                    bad = Some(format!("{p} n={n}: g_n(1) = {}", g.eval(&BigInt::one())));
                }
            }
        }
        push(r, Suite::Oracle, "oracle g_n(1) = n!".into(), bad, format!("all six patterns, n=1..={}", self.n_max));
        Ok(())
    }

    fn refined(&self, r: &mut Report) -> Result<()> {
        for p in PatternId::RECURRENCE {
            let outcome = refined_table(p, self.n_max).and_then(|t| {
                for n in 2..=self.n_max {
                    let brute = self.brute.refined_distributions(n, &p.vincular())?;
                    let row = t.row(n).expect("in range");
                    if let Some(k) = (0..brute.len()).find(|&i| row[i] != brute[i]) {
                        return Ok(Some(format!(
                            "n={n} k={}: recurrence {}, brute force {}",
                            k + 2,
                            row[k],
                            brute[k]
                        )));
                    }
                    if row.iter().sum::<QPoly>() != *self.brute_of(p, n)? {
                        return Ok(Some(format!("n={n}: refined rows do not sum to g_n")));
                    }
                }
                Ok(None)
            });
            push_result(
                r,
                Suite::Refined,
                format!("refined {p}"),
                outcome,
                format!("g_n(1k) equal for 2<=k<=n<={}", self.n_max),
            );
        }
        Ok(())
    }

    fn closed_forms(&self, r: &mut Report) -> Result<()> {
        let cache = SpecialNumberCache::new(self.n_max.max(LIMIT_FAR_N));
        let tables = self.tables(self.n_max)?;
        for p in PatternId::ALL {
            let table = tables.iter().find(|t| t.pattern() == p);
            let mut bad = None;
            for n in 1..=self.n_max {
                let formula = cache.avoiders(p, n)?;
                let brute = self.brute_of(p, n)?.coeff(0);
                let rec = table.map(|t| t.get(n).expect("in range").coeff(0));
                if formula != brute || rec.as_ref().is_some_and(|c| *c != formula) {
                    bad = Some(format!("n={n}: formula {formula}, brute force {brute}, recurrence {rec:?}"));
                    break;
                }
            }
            push(r, Suite::ClosedForms, format!("avoiders {p}"), bad, format!("n=1..={}", self.n_max));

            let mut bad = None;
            for n in 1..=self.n_max {
                let scaled = cache.average_occurrences(p, n)? * Rational::from_integer(factorial(n));
                let brute = self.brute_of(p, n)?.derivative().eval(&BigInt::one());
                let rec = table.map(|t| t.get(n).expect("in range").derivative().eval(&BigInt::one()));
                let ok = scaled.is_integer()
                    && scaled.to_integer() == brute
                    && rec.as_ref().is_none_or(|d| *d == brute);
                if !ok {
                    bad = Some(format!("n={n}: n!*average {scaled}, brute force total {brute}, recurrence {rec:?}"));
                    break;
                }
            }
            push(r, Suite::ClosedForms, format!("average {p}"), bad, format!("n!*avr(n) = g'_n(1) for n=1..={}", self.n_max));
        }

        let big = self.tables(CROSS_N)?;
        let get = |p: PatternId| big.iter().find(|t| t.pattern() == p).expect("listed");
        let (t231, t321, t213, t312) = (get(PatternId::P23_1), get(PatternId::P32_1), get(PatternId::P21_3), get(PatternId::P31_2));
        let bad = (1..=CROSS_N)
            .find(|&n| t231.get(n).unwrap().coeff(0) != t321.get(n).unwrap().coeff(0))
            .map(|n| format!("n={n}"));
        push(r, Suite::ClosedForms, "avoiders 23-1 = 32-1".into(), bad, format!("recurrences, n=1..={CROSS_N}"));
        let one = BigInt::one();
        let bad = (1..=CROSS_N)
            .find(|&n| t213.get(n).unwrap().derivative().eval(&one) != t312.get(n).unwrap().derivative().eval(&one))
            .map(|n| format!("n={n}"));
        push(r, Suite::ClosedForms, "g'_n(1) 21-3 = 31-2".into(), bad, format!("recurrences, n=1..={CROSS_N}"));

        let (lo, hi) = LIMIT_RANGE;
        let twelfth = Rational::new(BigInt::one(), BigInt::from(12));
        let tol = Rational::new(BigInt::one(), BigInt::from(100));
        for lc in limit_check(lo, hi)? {
            let far = &cache.average_occurrences(lc.pattern, LIMIT_FAR_N)?
                / Rational::from_integer(BigInt::from(LIMIT_FAR_N * LIMIT_FAR_N));
            let far_dev = (far - &twelfth).abs();
            let bad = match (lc.first_violation, far_dev < tol) {
                (Some(n), _) => Some(format!("deviation does not decrease at n={n}")),
                (None, false) => Some(format!("deviation at n={LIMIT_FAR_N} is {far_dev}")),
                (None, true) => None,
            };
            push(
                r,
                Suite::ClosedForms,
                format!("limit {}", lc.pattern),
                bad,
                format!(
                    "|avr(n)/n^2 - 1/12| strictly decreasing on [{lo},{hi}], {:.3e} at n={LIMIT_FAR_N}",
                    to_f64(&far_dev)
                ),
            );
        }
        Ok(())
    }

    fn series(&self, r: &mut Report) -> Result<()> {
        let order = SERIES_N + 1;
        let table = distribution_table(PatternId::P31_2, SERIES_N)?;
        let mut g0 = None;
        for rr in 0..=3 {
            let s = expand_g_r_31_2(rr, order)?;
            if rr == 0 {
                g0 = Some(s.clone());
            }
            let bad = (3..=SERIES_N).find_map(|n| {
                let c = s.coeff(n).expect("within order");
                let want = table.get(n).unwrap().coeff(rr);
                (!c.is_integer() || c.to_integer() != want).then(|| format!("n={n}: series {c}, recurrence {want}"))
            });
            push(r, Suite::Series, format!("series G_{rr} 31-2"), bad, format!("[x^n] = [q^{rr}] g_n for n=3..={SERIES_N}"));
        }

        let cache = SpecialNumberCache::new(SERIES_N + 2);
        let egf_21 = expand_egf_21_3_avoid(order)?;
        let bad = (0..=SERIES_N).find_map(|n| {
            let want = cache.avoiders(PatternId::P21_3, n + 2).ok()?;
            let got = egf_coefficient(&egf_21, n);
            (got.as_ref() != Some(&want)).then(|| format!("n={n}: n![x^n] = {got:?}, avoiders(n+2) = {want}"))
        });
        push(r, Suite::Series, "series EGF 21-3".into(), bad, format!("n![x^n] = avoiders(21-3, n+2) for n=0..={SERIES_N}"));

        let egf_12 = expand_egf_12_3_avoid(order)?;
        let direct = expand_egf_12_3_avoid_direct(order)?;
        let bad = if !egf_12.agrees_with(&direct) {
            Some("complementary Bell route and series exp route differ".to_string())
        } else {
            (0..=SERIES_N).find_map(|n| {
                let want = cache.avoiders(PatternId::P12_3, n + 2).ok()?;
                let got = egf_coefficient(&egf_12, n);
                (got.as_ref() != Some(&want)).then(|| format!("n={n}: n![x^n] = {got:?}, avoiders(n+2) = {want}"))
            })
        };
        push(
            r,
            Suite::Series,
            "series EGF 12-3".into(),
            bad,
            format!("(n-2)![x^(n-2)] = avoiders(12-3, n) for n=2..={}; both exp routes agree", SERIES_N + 2),
        );

        let g0 = g0.expect("r = 0 expanded");
        let x2 = g0.coeff(2).expect("within order").clone();
        let g2 = table.get(2).unwrap().coeff(0);
        r.findings.push(Finding {
            name: "G_0 x^2 coefficient".into(),
            detail: format!(
                "[x^2] G_0(x) = {x2} but g_2(0) = {g2}; the closed form for G_0 matches g_n(0) only from n = 3 ({} at n = 3)",
                g0.coeff(3).expect("within order")
            ),
        });
        Ok(())
    }

    fn bijections(&self, r: &mut Report) -> Result<()> {
        for n in 1..=self.n_max {
            let s = sweep(n)?;
            let bad = (!s.all_pass()).then(|| format!("{s:?}"));
            push(
                r,
                Suite::Bijections,
                format!("bijections n={n}"),
                bad,
                format!(
                    "{} marked partitions = {} 23-1 avoiders = {} 32-1 avoiders; both round trips are identities",
                    s.marked_partitions, s.avoiders_23_1, s.avoiders_32_1
                ),
            );
        }
        let bad = (1..=self.n_max)
            .find(|&n| !check_31_2_equivalence(n).unwrap_or(false))
            .map(|n| format!("n={n}: {:?}", self.brute.avoidance_agrees(n, &PatternId::P31_2.vincular(), &"3-1-2".parse().expect("valid"))));
        push(r, Suite::Bijections, "31-2 avoiders = 3-1-2 avoiders".into(), bad, format!("n=1..={}", self.n_max));
        Ok(())
    }

    fn identities(&self, r: &mut Report) -> Result<()> {
        let one = BigInt::one();
        let total = |g: &QPoly| g.derivative().eval(&one);
        let mut bad = None;
        for n in 1..=self.n_max {
            let f32 = total_occurrences(PatternId::P32_1, n)?;
            let f23 = total_occurrences(PatternId::P23_1, n)?;
            let b32 = total(self.brute_of(PatternId::P32_1, n)?);
            let b23 = total(self.brute_of(PatternId::P23_1, n)?);
            if f32 != f23 || f32 != b32 || b32 != b23 {
                bad = Some(format!("n={n}: formulas {f32}, {f23}; brute force {b32}, {b23}"));
                break;
            }
        }
        push(r, Suite::Identities, "tot(32-1) = tot(23-1)".into(), bad, format!("n=1..={}", self.n_max));

        type Pair = (PatternId, AuxPattern, fn(usize) -> BigInt);
        let pairs: [(&str, Pair); 2] = [
            ("tot(21-3) + tot(3-21)", (PatternId::P21_3, AuxPattern::P3_21, total_21_3_plus_3_21)),
            ("tot(12-3) + tot(3-12)", (PatternId::P12_3, AuxPattern::P3_12, total_12_3_plus_3_12)),
        ];
        for (name, (p, a, formula)) in pairs {
            let mut bad = None;
            for n in 1..=self.n_max {
                let f = formula(n);
                let bp = total(self.brute_of(p, n)?);
                let ba = total(self.brute_aux(a, n)?);
                let fa = aux_total(a, n)?;
                let fp = total_occurrences(p, n)?;
                if f != &bp + &ba || fa != ba || fp != bp {
                    bad = Some(format!("n={n}: formula {f} vs brute force {bp} + {ba}; {} formula {fa}", a.name()));
                    break;
                }
            }
            push(r, Suite::Identities, name.into(), bad, format!("formula and brute force, n=1..={}", self.n_max));
        }

        let mut bad = None;
        'e: for k in 3..=10 {
            let xs: Vec<QPoly> = (1..=k - 3).map(q_int).collect();
            for j in 1..=k - 3 {
                let closed = e_on_qints_closed_form(j, k);
                let direct = elementary_e(j as i64, &xs);
                if closed.as_ref() != Ok(&direct) {
                    bad = Some(format!("j={j} k={k}: closed {closed:?}, direct {direct}"));
                    break 'e;
                }
            }
        }
        push(r, Suite::Identities, "e_j([1],...,[k-3]) closed form".into(), bad, "1<=j<=k-3, k<=10".into());

        let mut bad = None;
        'h: for k in 2..=10 {
            for n in 1..=5 {
                for j in 1..k {
                    let xs: Vec<QPoly> = (n..n + k - j).map(q_int).collect();
                    let closed = h_on_qint_window_closed_form(j, k, n);
                    let direct = complete_h(j as i64 - 1, &xs);
                    if closed.as_ref() != Ok(&direct) {
                        bad = Some(format!("j={j} k={k} n={n}: closed {closed:?}, direct {direct}"));
                        break 'h;
                    }
                }
            }
        }
        push(r, Suite::Identities, "h_{j-1}([n],...,[n+k-j-1]) closed form".into(), bad, "1<=j<k<=10, 1<=n<=5".into());

        let bad = (3..=CROSS_N)
            .find(|&n| !b2_23_1_closed_form_holds(n) || !b2_21_3_closed_form_holds(n))
            .map(|n| format!("n={n}"));
        push(r, Suite::Identities, "b_{n,2} closed forms 23-1, 21-3".into(), bad, format!("n=3..={CROSS_N}"));

        let hi = self.n_max.max(SERIES_N);
        let table = distribution_table(PatternId::P12_3, hi)?;
        let rows = c_form_12_3_report(&table, hi)?;
        let bad = rows
            .iter()
            .find(|x| !x.coefficients_match || !x.sum_from_1_matches)
            .map(|x| format!("{x:?}"));
        push(
            r,
            Suite::Identities,
            "12-3 c_{n,j} form summed from j=1".into(),
            bad,
            format!("sum_(j=1)^(n-1) c_(n,j) g_(n-j) = g_n for n=3..={hi}"),
        );
        let from2: Vec<usize> = rows.iter().filter(|x| x.sum_from_2_matches).map(|x| x.n).collect();
        let from2 = if from2.is_empty() {
            format!("for no n in 3..={hi}")
        } else {
            format!("only for n in {from2:?} out of 3..={hi}")
        };
        r.findings.push(Finding {
            name: "12-3 c_{n,j} form".into(),
            detail: format!(
                "c_(n,j) equals the recurrence coefficient for every 1<=j<=n-1 (c_(n,1) = 2q^(n-2) + [n-2]); \
                 summed from j=2 it reproduces g_n {from2}, summed from j=1 it reproduces g_n for all of them"
            ),
        });
        Ok(())
    }
}

fn push(r: &mut Report, suite: Suite, name: String, bad: Option<String>, ok_detail: String) {
    let passed = bad.is_none();
    r.checks.push(Check { suite, name, passed, detail: bad.unwrap_or(ok_detail) });
}

fn push_result(r: &mut Report, suite: Suite, name: String, outcome: Result<Option<String>>, ok_detail: String) {
    let bad = match outcome {
        Ok(b) => b,
        Err(e) => Some(e.to_string()),
    };
    push(r, suite, name, bad, ok_detail);
}

fn to_f64(x: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    if x.is_zero() {
        return 0.0;
    }
    x.to_f64().unwrap_or(f64::NAN)
}

/// Runs one suite with the default brute-force cap.
pub fn run_suite(suite: Suite, n_max: usize) -> Result<Report> {
    Verifier::new(n_max)?.run(suite)
}
