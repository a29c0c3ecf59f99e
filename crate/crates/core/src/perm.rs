//! Permutations, standard cycle form, the flatten map, and the brute-force
//! occurrence oracle that every other module is checked against.
//!
//! Values and positions are 1-based throughout.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::QPoly;

/// Largest `n` the brute-force oracle enumerates unless told otherwise.
pub const DEFAULT_CAP: usize = 10;

/// A permutation of `[n]` in one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Permutation {
    word: Vec<usize>,
}

impl Permutation {
    pub fn new(word: Vec<usize>) -> Result<Self> {
        let n = word.len();
        let mut seen = vec![false; n + 1];
        for &v in &word {
            if v == 0 || v > n {
                return Err(Error::InvalidPermutation(format!("value {v} outside 1..={n}")));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidPermutation(format!("value {v} repeated")));
            }
        }
        Ok(Permutation { word })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            word: (1..=n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    /// Image of `i` (1-based).
    pub fn apply(&self, i: usize) -> usize {
        self.word[i - 1]
    }

    /// Orbits of the permutation, each starting at its minimum, ordered by
    /// increasing minima.
    pub fn to_standard_cycle_form(&self) -> CycleForm {
        let n = self.len();
        let mut seen = vec![false; n + 1];
        let mut cycles = Vec::new();
        for start in 1..=n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            cycles.push(cycle);
        }
        CycleForm { cycles, n }
    }

    /// The word obtained by erasing the parentheses of the standard cycle form.
    pub fn flatten(&self) -> Permutation {
        Permutation {
            word: flatten_word(&self.word),
        }
    }
}

/// Flattens a one-line word without the intermediate [`CycleForm`].
fn flatten_word(word: &[usize]) -> Vec<usize> {
    let n = word.len();
    let mut seen = vec![false; n + 1];
    let mut out = Vec::with_capacity(n);
    for start in 1..=n {
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            out.push(x);
            x = word[x - 1];
        }
    }
    out
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.len() < 10 { "" } else { " " };
        let parts: Vec<String> = self.word.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(sep))
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Accepts `71564328` (single digits) or separated values `10 2 1 ...`.
    fn from_str(s: &str) -> Result<Self> {
        Permutation::new(parse_letters(s.trim()).map_err(Error::InvalidPermutation)?)
    }
}

fn parse_letters(s: &str) -> std::result::Result<Vec<usize>, String> {
    if s.contains(|c: char| c == ',' || c.is_whitespace()) {
        s.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().map_err(|e| format!("{t:?}: {e}")))
            .collect()
    } else {
        s.chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as usize)
                    .ok_or_else(|| format!("unexpected character {c:?}"))
            })
            .collect()
    }
}

/// A permutation written as disjoint cycles in standard form: each cycle
/// starts with its minimum and cycles appear in increasing order of minima.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CycleForm {
    cycles: Vec<Vec<usize>>,
    n: usize,
}

impl CycleForm {
    /// Validates that `cycles` is already in standard form over `[n]`.
    pub fn new(cycles: Vec<Vec<usize>>) -> Result<Self> {
        let n: usize = cycles.iter().map(Vec::len).sum();
        let mut seen = vec![false; n + 1];
        let mut last_min = 0;
        for c in &cycles {
            let Some(&first) = c.first() else {
                return Err(Error::InvalidCycleForm("empty cycle".into()));
            };
            for &v in c {
                if v == 0 || v > n {
                    return Err(Error::InvalidCycleForm(format!("letter {v} outside 1..={n}")));
                }
                if std::mem::replace(&mut seen[v], true) {
                    return Err(Error::InvalidCycleForm(format!("letter {v} repeated")));
                }
                if v < first {
                    return Err(Error::InvalidCycleForm(format!(
                        "cycle starting at {first} contains smaller letter {v}"
                    )));
                }
            }
            if first <= last_min {
                return Err(Error::InvalidCycleForm("cycles not ordered by their minima".into()));
            }
            last_min = first;
        }
        Ok(CycleForm { cycles, n })
    }

    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn to_permutation(&self) -> Permutation {
        let mut word = vec![0; self.n];
        for c in &self.cycles {
            for (i, &v) in c.iter().enumerate() {
                word[v - 1] = c[(i + 1) % c.len()];
            }
        }
        Permutation { word }
    }

    pub fn flatten_word(&self) -> Vec<usize> {
        self.cycles.concat()
    }

    pub fn flatten(&self) -> Permutation {
        Permutation {
            word: self.flatten_word(),
        }
    }

    /// Rebuilds cycles from a flattened word and the positions (0-based)
    /// where cycles start. Position 0 must be among them.
    pub(crate) fn from_word_and_starts(word: &[usize], starts: &[usize]) -> Result<Self> {
        let mut cycles = Vec::with_capacity(starts.len());
        for (i, &s) in starts.iter().enumerate() {
            let end = starts.get(i + 1).copied().unwrap_or(word.len());
            cycles.push(word[s..end].to_vec());
        }
        CycleForm::new(cycles)
    }

    /// 0-based positions in the flattened word at which cycles begin.
    pub(crate) fn start_positions(&self) -> Vec<usize> {
        let mut pos = 0;
        self.cycles
            .iter()
            .map(|c| {
                let p = pos;
                pos += c.len();
                p
            })
            .collect()
    }
}

impl fmt::Display for CycleForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cycles {
            let parts: Vec<String> = c.iter().map(ToString::to_string).collect();
            write!(f, "({})", parts.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for CycleForm {
    type Err = Error;

    /// Parses `(1,7,2)(3,5,4,6)(8)`, `(1 7 2)(3546)(8)` or with commas
    /// between cycles as in `(1,6,5,2,10,7),(3),(4,9,8)`. A group without
    /// separators is read digit by digit, falling back to a single number.
    fn from_str(s: &str) -> Result<Self> {
        let mut groups = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            rest = rest.trim_start_matches(|c: char| c == ',' || c.is_whitespace());
            if rest.is_empty() {
                break;
            }
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::InvalidCycleForm(format!("expected '(' at {rest:?}")))?;
            let close = body
                .find(')')
                .ok_or_else(|| Error::InvalidCycleForm("unclosed cycle".into()))?;
            groups.push(body[..close].trim());
            rest = &body[close + 1..];
        }
        let parse_all = |as_number: bool| -> std::result::Result<Vec<Vec<usize>>, String> {
            groups
                .iter()
                .map(|g| {
                    if as_number && !g.contains(|c: char| c == ',' || c.is_whitespace()) {
                        g.parse::<usize>().map(|v| vec![v]).map_err(|e| format!("{g:?}: {e}"))
                    } else {
                        parse_letters(g)
                    }
                })
                .collect()
        };
        let first = parse_all(false)
            .map_err(Error::InvalidCycleForm)
            .and_then(CycleForm::new);
        match first {
            Ok(c) => Ok(c),
            Err(e) => match parse_all(true).ok().map(CycleForm::new) {
                Some(Ok(c)) => Ok(c),
                _ => Err(e),
            },
        }
    }
}

/// The placement type of a length-3 pattern.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum PatternType {
    /// `xy-z`: first two letters adjacent.
    Type21,
    /// `x-yz`: last two letters adjacent.
    Type12,
    /// `x-y-z`: no adjacency.
    Classical,
    /// `xyz`: all three adjacent.
    Consecutive,
}

/// A length-3 pattern with optional adjacency requirements.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct VincularPattern3 {
    letters: [u8; 3],
    glue12: bool,
    glue23: bool,
}

impl VincularPattern3 {
    pub fn new(letters: [u8; 3], glue12: bool, glue23: bool) -> Result<Self> {
        let mut sorted = letters;
        sorted.sort_unstable();
        if sorted != [1, 2, 3] {
            return Err(Error::InvalidPattern(format!("{letters:?} is not a permutation of 123")));
        }
        Ok(VincularPattern3 {
            letters,
            glue12,
            glue23,
        })
    }

    /// `xy-z`.
    pub fn dashed21(letters: [u8; 3]) -> Result<Self> {
        Self::new(letters, true, false)
    }

    pub fn letters(&self) -> [u8; 3] {
        self.letters
    }

    pub fn kind(&self) -> PatternType {
        match (self.glue12, self.glue23) {
            (true, false) => PatternType::Type21,
            (false, true) => PatternType::Type12,
            (false, false) => PatternType::Classical,
            (true, true) => PatternType::Consecutive,
        }
    }

    /// The same letters with no adjacency requirements.
    pub fn classical(&self) -> Self {
        VincularPattern3 {
            glue12: false,
            glue23: false,
            ..*self
        }
    }

    fn matches(&self, a: usize, b: usize, c: usize) -> bool {
        order_type(a, b, c) == self.letters
    }
}

fn order_type(a: usize, b: usize, c: usize) -> [u8; 3] {
    let rank = |x: usize| 1 + u8::from(a < x) + u8::from(b < x) + u8::from(c < x);
    [rank(a), rank(b), rank(c)]
}

impl fmt::Display for VincularPattern3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.letters;
        let d1 = if self.glue12 { "" } else { "-" };
        let d2 = if self.glue23 { "" } else { "-" };
        write!(f, "{a}{d1}{b}{d2}{c}")
    }
}

impl FromStr for VincularPattern3 {
    type Err = Error;

    /// `31-2`, `3-21`, `3-1-2` or `312`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidPattern(format!("cannot parse {s:?}"));
        let mut letters = Vec::new();
        let mut dashes = Vec::new();
        let mut pending_dash = false;
        for ch in s.trim().chars() {
            match ch {
                '-' if !letters.is_empty() && !pending_dash => pending_dash = true,
                '1'..='3' => {
                    if !letters.is_empty() {
                        dashes.push(pending_dash);
                    }
                    pending_dash = false;
                    letters.push(ch as u8 - b'0');
                }
                _ => return Err(bad()),
            }
        }
        if letters.len() != 3 || pending_dash {
            return Err(bad());
        }
        Self::new([letters[0], letters[1], letters[2]], !dashes[0], !dashes[1])
    }
}

/// Number of occurrences of `pat` in `host` (order-isomorphic index
/// triples, honoring the adjacency requirements). Hosts shorter than three
/// letters have none.
pub fn count_occurrences(host: &[usize], pat: &VincularPattern3) -> u64 {
    let n = host.len();
    if n < 3 {
        return 0;
    }
    let mut count = 0;
    match pat.kind() {
        PatternType::Type21 => {
            for i in 0..n - 2 {
                let (a, b) = (host[i], host[i + 1]);
                if (a < b) != (pat.letters[0] < pat.letters[1]) {
                    continue;
                }
                count += host[i + 2..].iter().filter(|&&c| pat.matches(a, b, c)).count() as u64;
            }
        }
        PatternType::Type12 => {
            for j in 1..n - 1 {
                let (b, c) = (host[j], host[j + 1]);
                if (b < c) != (pat.letters[1] < pat.letters[2]) {
                    continue;
                }
                count += host[..j].iter().filter(|&&a| pat.matches(a, b, c)).count() as u64;
            }
        }
        PatternType::Consecutive => {
            count = host.windows(3).filter(|w| pat.matches(w[0], w[1], w[2])).count() as u64;
        }
        PatternType::Classical => {
            for i in 0..n {
                for j in i + 1..n {
                    for k in j + 1..n {
                        if pat.matches(host[i], host[j], host[k]) {
                            count += 1;
                        }
                    }
                }
            }
        }
    }
    count
}

/// Occurrences of `pat` in `flatten(p)`.
pub fn count_in_flattened_sense(p: &Permutation, pat: &VincularPattern3) -> u64 {
    count_occurrences(&flatten_word(p.word()), pat)
}

/// All permutations of `[n]` in lexicographic order, generated lazily.
#[derive(Clone, Debug)]
pub struct LexPermutations {
    next: Option<Vec<usize>>,
    /// Number of leading positions that stay fixed (used to split work).
    frozen: usize,
}

impl LexPermutations {
    fn new(n: usize) -> Self {
        LexPermutations {
            next: Some((1..=n).collect()),
            frozen: 0,
        }
    }

    /// The block of permutations whose first letter is `first`.
    fn starting_with(n: usize, first: usize) -> Self {
        let mut word = vec![first];
        word.extend((1..=n).filter(|&v| v != first));
        LexPermutations {
            next: Some(word),
            frozen: 1,
        }
    }
}

impl Iterator for LexPermutations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if next_permutation(&mut succ[self.frozen..]) {
            self.next = Some(succ);
        }
        Some(current)
    }
}

fn next_permutation(a: &mut [usize]) -> bool {
    let Some(i) = a.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = a.iter().rposition(|&x| x > a[i]).expect("a successor exists past a rise");
    a.swap(i, j);
    a[i + 1..].reverse();
    true
}

/// Lazily yields the `n!` permutations of `[n]` in lexicographic order.
pub fn enumerate_permutations(n: usize, cap: usize) -> Result<impl Iterator<Item = Permutation>> {
    check_cap(n, cap)?;
    if n == 0 {
        return Err(Error::OutOfRange {
            what: "n",
            value: 0,
            lo: 1,
            hi: cap as i64,
        });
    }
    Ok(LexPermutations::new(n).map(|word| Permutation { word }))
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::CapExceeded { n, cap })
    } else {
        Ok(())
    }
}

/// Exhaustive enumeration over `S_n`, parallelised by first letter.
#[derive(Clone, Copy, Debug)]
pub struct BruteForce {
    cap: usize,
}

impl Default for BruteForce {
    fn default() -> Self {
        BruteForce { cap: DEFAULT_CAP }
    }
}

impl BruteForce {
    pub fn with_cap(cap: usize) -> Self {
        BruteForce { cap }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Folds `f(flattened word)` over `S_n` into per-thread histograms of
    /// `width` counters, then sums them.
    fn histogram<F>(&self, n: usize, width: usize, f: F) -> Result<Vec<Vec<u64>>>
    where
        F: Fn(&[usize], &mut [Vec<u64>]) + Sync,
    {
        check_cap(n, self.cap)?;
        if n == 0 {
            return Err(Error::OutOfRange {
                what: "n",
                value: 0,
                lo: 1,
                hi: self.cap as i64,
            });
        }
        let merged = (1..=n)
            .into_par_iter()
            .map(|first| {
                let mut hist = vec![Vec::new(); width];
                for word in LexPermutations::starting_with(n, first) {
                    f(&flatten_word(&word), &mut hist);
                }
                hist
            })
            .reduce(
                || vec![Vec::new(); width],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        merge_counts(x, &y);
                    }
                    a
                },
            );
        Ok(merged)
    }

    /// `sum over S_n of q^(occurrences of pat in the flattened form)`.
    pub fn distribution(&self, n: usize, pat: &VincularPattern3) -> Result<QPoly> {
        Ok(self.distributions(n, std::slice::from_ref(pat))?.remove(0))
    }

    /// Several distributions from a single sweep of `S_n`.
    pub fn distributions(&self, n: usize, pats: &[VincularPattern3]) -> Result<Vec<QPoly>> {
        let hist = self.histogram(n, pats.len(), |flat, hist| {
            for (h, pat) in hist.iter_mut().zip(pats) {
                bump(h, count_occurrences(flat, pat) as usize);
            }
        })?;
        Ok(hist.iter().map(|h| counts_to_poly(h)).collect())
    }

    /// The part of the distribution coming from permutations whose flattened
    /// form begins `1, k`.
    pub fn refined_distribution(&self, n: usize, pat: &VincularPattern3, k: usize) -> Result<QPoly> {
        if k < 2 || k > n {
            return Err(Error::OutOfRange {
                what: "k",
                value: k as i64,
                lo: 2,
                hi: n as i64,
            });
        }
        Ok(self.refined_distributions(n, pat)?.swap_remove(k - 2))
    }

    /// `g_n(1k)` for `k = 2..=n`, indexed from `k = 2`.
    pub fn refined_distributions(&self, n: usize, pat: &VincularPattern3) -> Result<Vec<QPoly>> {
        if n < 2 {
            return Err(Error::OutOfRange {
                what: "n",
                value: n as i64,
                lo: 2,
                hi: self.cap as i64,
            });
        }
        let hist = self.histogram(n, n - 1, |flat, hist| {
            bump(&mut hist[flat[1] - 2], count_occurrences(flat, pat) as usize);
        })?;
        Ok(hist.iter().map(|h| counts_to_poly(h)).collect())
    }

    /// Total number of occurrences over `S_n`.
    pub fn total(&self, n: usize, pat: &VincularPattern3) -> Result<BigInt> {
        let dist = self.distribution(n, pat)?;
        Ok(dist.derivative().eval(&BigInt::from(1)))
    }

    /// Whether, for every `p` in `S_n`, `flatten(p)` avoids `pat` exactly when
    /// it avoids `other`. Returns the first counterexample otherwise.
    pub fn avoidance_agrees(
        &self,
        n: usize,
        pat: &VincularPattern3,
        other: &VincularPattern3,
    ) -> Result<Option<Permutation>> {
        check_cap(n, self.cap)?;
        let found = (1..=n).into_par_iter().find_map_first(|first| {
            LexPermutations::starting_with(n, first).find_map(|word| {
                let flat = flatten_word(&word);
                let a = count_occurrences(&flat, pat) == 0;
                let b = count_occurrences(&flat, other) == 0;
                (a != b).then_some(Permutation { word })
            })
        });
        Ok(found)
    }
}

fn bump(h: &mut Vec<u64>, i: usize) {
    if h.len() <= i {
        h.resize(i + 1, 0);
    }
    h[i] += 1;
}

fn merge_counts(a: &mut Vec<u64>, b: &[u64]) {
    if a.len() < b.len() {
        a.resize(b.len(), 0);
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
}

fn counts_to_poly(h: &[u64]) -> QPoly {
    QPoly::from_coeffs(h.iter().map(|&c| BigInt::from(c)).collect())
}

/// [`BruteForce::distribution`] with the default cap.
pub fn brute_distribution(n: usize, pat: &VincularPattern3) -> Result<QPoly> {
    BruteForce::default().distribution(n, pat)
}

/// [`BruteForce::refined_distribution`] with the default cap.
pub fn brute_refined_distribution(n: usize, pat: &VincularPattern3, k: usize) -> Result<QPoly> {
    BruteForce::default().refined_distribution(n, pat, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::factorial;
    use proptest::prelude::*;

    fn pat(s: &str) -> VincularPattern3 {
        s.parse().unwrap()
    }

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn standard_cycle_form_examples() {
        assert_eq!(perm("71564328").to_standard_cycle_form().to_string(), "(1,7,2)(3,5,4,6)(8)");
        assert_eq!(perm("1").to_standard_cycle_form().to_string(), "(1)");
        assert_eq!(perm("123").to_standard_cycle_form().to_string(), "(1)(2)(3)");
    }

    #[test]
    fn flatten_examples() {
        assert_eq!(perm("71564328").flatten(), perm("17235468"));
        assert_eq!(Permutation::identity(6).flatten(), Permutation::identity(6));
        assert_eq!(perm("213").flatten(), perm("123"));
    }

    #[test]
    fn counting_examples() {
        let host = perm("17235468");
        assert_eq!(count_occurrences(host.word(), &pat("31-2")), 4);
        assert_eq!(count_occurrences(host.word(), &pat("23-1")), 0);
        assert_eq!(count_occurrences(&[1, 2, 3], &pat("12-3")), 1);
        assert_eq!(count_in_flattened_sense(&perm("71564328"), &pat("31-2")), 4);
        assert_eq!(count_in_flattened_sense(&Permutation::identity(7), &pat("21-3")), 0);
        assert_eq!(count_in_flattened_sense(&perm("231"), &pat("12-3")), 1);
        assert_eq!(count_occurrences(&[2, 1], &pat("21-3")), 0);
        assert_eq!(count_occurrences(&[1, 3, 2, 4], &pat("132")), 1);
    }

    #[test]
    fn pattern_parsing() {
        assert_eq!(pat("31-2").kind(), PatternType::Type21);
        assert_eq!(pat("3-21").kind(), PatternType::Type12);
        assert_eq!(pat("3-1-2").kind(), PatternType::Classical);
        assert_eq!(pat("31-2").to_string(), "31-2");
        assert_eq!(pat("3-1-2").to_string(), "3-1-2");
        for bad in ["", "12", "1-2-", "-12-3", "11-2", "12--3", "4-12"] {
            assert!(bad.parse::<VincularPattern3>().is_err(), "{bad}");
        }
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(vec![1, 1]).is_err());
        assert!(Permutation::new(vec![0, 1]).is_err());
        assert!(Permutation::new(vec![3, 1]).is_err());
        assert_eq!("10 2 3 4 5 6 7 8 9 1".parse::<Permutation>().unwrap().len(), 10);
    }

    #[test]
    fn cycle_form_validation_and_parsing() {
        let c: CycleForm = "(1,6,5,2,10,7),(3),(4,9,8)".parse().unwrap();
        assert_eq!(c.len(), 10);
        assert_eq!(c.flatten_word(), vec![1, 6, 5, 2, 10, 7, 3, 4, 9, 8]);
        assert_eq!("(172)(3546)(8)".parse::<CycleForm>().unwrap().to_permutation(), perm("71564328"));
        assert!(CycleForm::new(vec![vec![2, 1]]).is_err());
        assert!(CycleForm::new(vec![vec![2], vec![1]]).is_err());
        assert!(CycleForm::new(vec![vec![1], vec![]]).is_err());
        assert!(CycleForm::new(vec![vec![1, 3]]).is_err());
    }

    #[test]
    fn enumeration() {
        let one: Vec<_> = enumerate_permutations(1, DEFAULT_CAP).unwrap().collect();
        assert_eq!(one, vec![Permutation::identity(1)]);
        let three: Vec<_> = enumerate_permutations(3, DEFAULT_CAP).unwrap().collect();
        assert_eq!(three.len(), 6);
        assert_eq!(three[0], perm("123"));
        assert_eq!(three[5], perm("321"));
        assert!(three.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(enumerate_permutations(8, DEFAULT_CAP).unwrap().count(), 40320);
        assert_eq!(
            enumerate_permutations(11, DEFAULT_CAP).err(),
            Some(Error::CapExceeded { n: 11, cap: 10 })
        );
    }

    #[test]
    fn brute_examples() {
        for p in ["12-3", "21-3", "23-1", "32-1", "31-2"] {
            assert_eq!(brute_distribution(2, &pat(p)).unwrap(), QPoly::from_ints(&[2]));
        }
        assert_eq!(brute_distribution(3, &pat("31-2")).unwrap(), QPoly::from_ints(&[6]));
        assert_eq!(brute_distribution(3, &pat("12-3")).unwrap(), QPoly::from_ints(&[2, 4]));
        assert_eq!(brute_refined_distribution(3, &pat("31-2"), 2).unwrap(), QPoly::from_ints(&[4]));
        assert_eq!(brute_refined_distribution(3, &pat("31-2"), 3).unwrap(), QPoly::from_ints(&[2]));
        assert!(brute_refined_distribution(3, &pat("31-2"), 4).is_err());
        assert!(brute_refined_distribution(3, &pat("31-2"), 1).is_err());
        assert!(BruteForce::with_cap(5).distribution(6, &pat("31-2")).is_err());
    }

    #[test]
    fn brute_normalisation_and_refined_partition() {
        for p in ["12-3", "21-3", "23-1", "32-1", "31-2", "13-2", "3-21"] {
            let pat = pat(p);
            for n in 2..=7 {
                let g = brute_distribution(n, &pat).unwrap();
                assert_eq!(g.eval(&BigInt::from(1)), factorial(n));
                let parts: QPoly = BruteForce::default().refined_distributions(n, &pat).unwrap().iter().sum();
                assert_eq!(parts, g);
            }
        }
    }

    #[test]
    fn fast_counters_agree_with_classical_restriction() {
        // A type (2,1) count equals the classical triple count restricted to
        // adjacent first pairs; recount that way by brute force.
        for word in LexPermutations::new(7) {
            for p in ["31-2", "12-3", "3-21"] {
                let pat = pat(p);
                let mut slow = 0;
                for i in 0..word.len() {
                    for j in i + 1..word.len() {
                        for k in j + 1..word.len() {
                            let adj = match pat.kind() {
                                PatternType::Type21 => j == i + 1,
                                _ => k == j + 1,
                            };
                            if adj && pat.matches(word[i], word[j], word[k]) {
                                slow += 1;
                            }
                        }
                    }
                }
                let fast = count_occurrences(&word, &pat);
                assert_eq!(fast, slow);
                let n = word.len() as u64;
                assert!(fast <= (n - 2) * (n - 2));
            }
        }
    }

    #[test]
    fn flattened_31_2_avoidance_matches_classical_3_1_2() {
        let bf = BruteForce::default();
        for n in 1..=8 {
            assert_eq!(bf.avoidance_agrees(n, &pat("31-2"), &pat("3-1-2")).unwrap(), None, "n={n}");
        }
    }

    fn arb_perm() -> impl Strategy<Value = Permutation> {
        (1usize..12)
            .prop_flat_map(|n| Just((1..=n).collect::<Vec<_>>()).prop_shuffle())
            .prop_map(|w| Permutation::new(w).unwrap())
    }

    proptest! {
        #[test]
        fn cycle_form_round_trips(p in arb_perm()) {
            let c = p.to_standard_cycle_form();
            prop_assert_eq!(c.to_permutation(), p.clone());
            prop_assert_eq!(CycleForm::new(c.cycles().to_vec()).unwrap(), c.clone());
            prop_assert_eq!(c.to_string().parse::<CycleForm>().unwrap(), c.clone());
            let flat = p.flatten();
            prop_assert_eq!(flat.word()[0], 1);
            prop_assert_eq!(flat.word(), &c.flatten_word()[..]);
        }
    }
}
