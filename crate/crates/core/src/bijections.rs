//! Marked set partitions and the bijections between them, 23-1 avoiders
//! and 32-1 avoiders (all in the flattened sense).

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::closed_forms::SpecialNumberCache;
use crate::error::{Error, Result};
use crate::perm::{
    count_occurrences, enumerate_permutations, BruteForce, CycleForm, VincularPattern3, DEFAULT_CAP,
};

/// A set partition of `{2, ..., n}` with some blocks marked. Blocks are
/// stored in descending order and listed by ascending minima.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MarkedPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
    marks: Vec<bool>,
}

impl MarkedPartition {
    /// Normalises block order and element order; the ground set is
    /// `{2, ..., n}` with `n` one more than the number of elements.
    pub fn new(blocks: Vec<Vec<usize>>, marks: Vec<bool>) -> Result<Self> {
        if blocks.len() != marks.len() {
            return Err(Error::InvalidPartition(format!(
                "{} blocks but {} marks",
                blocks.len(),
                marks.len()
            )));
        }
        let n = blocks.iter().map(Vec::len).sum::<usize>() + 1;
        let mut seen = vec![false; n + 1];
        let mut pairs = Vec::with_capacity(blocks.len());
        for (mut b, m) in blocks.into_iter().zip(marks) {
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for &v in &b {
                if v < 2 || v > n {
                    return Err(Error::InvalidPartition(format!("element {v} outside 2..={n}")));
                }
                if std::mem::replace(&mut seen[v], true) {
                    return Err(Error::InvalidPartition(format!("element {v} repeated")));
                }
            }
            b.sort_unstable_by(|x, y| y.cmp(x));
            pairs.push((b, m));
        }
        pairs.sort_by_key(|(b, _)| *b.last().expect("blocks are nonempty"));
        let (blocks, marks) = pairs.into_iter().unzip();
        Ok(MarkedPartition { n, blocks, marks })
    }

    /// Size of the permutations this partition corresponds to.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn marks(&self) -> &[bool] {
        &self.marks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }
}

impl fmt::Display for MarkedPartition {
    /// `{6,5,2}{10,7,3}*{4}*{9,8}`: a trailing `*` marks a block.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (b, &m) in self.blocks.iter().zip(&self.marks) {
            let parts: Vec<String> = b.iter().map(ToString::to_string).collect();
            write!(f, "{{{}}}{}", parts.join(","), if m { "*" } else { "" })?;
        }
        Ok(())
    }
}

impl FromStr for MarkedPartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut blocks = Vec::new();
        let mut marks = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            rest = rest.trim_start_matches(|c: char| c == ',' || c == '/' || c.is_whitespace());
            if rest.is_empty() {
                break;
            }
            let body = rest
                .strip_prefix('{')
                .ok_or_else(|| Error::InvalidPartition(format!("expected '{{' at {rest:?}")))?;
            let close = body
                .find('}')
                .ok_or_else(|| Error::InvalidPartition("unclosed block".into()))?;
            let block = body[..close]
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().map_err(|e| Error::InvalidPartition(format!("{t:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            blocks.push(block);
            rest = &body[close + 1..];
            let marked = rest.starts_with('*');
            if marked {
                rest = &rest[1..];
            }
            marks.push(marked);
        }
        MarkedPartition::new(blocks, marks)
    }
}

/// Every marked partition of `{2, ..., n}`.
pub fn marked_partitions(n: usize) -> Result<Vec<MarkedPartition>> {
    if n == 0 {
        return Err(Error::OutOfRange {
            what: "n",
            value: 0,
            lo: 1,
            hi: DEFAULT_CAP as i64,
        });
    }
    if n > DEFAULT_CAP {
        return Err(Error::CapExceeded { n, cap: DEFAULT_CAP });
    }
    let mut out = Vec::new();
    let m = n - 1;
    let mut rgs = vec![0usize; m];
    loop {
        let k = rgs.iter().max().map_or(0, |&x| x + 1);
        let mut blocks = vec![Vec::new(); k];
        // Element 2 + i goes to block rgs[i]; iterating in reverse keeps
        // each block descending.
        for i in (0..m).rev() {
            blocks[rgs[i]].push(i + 2);
        }
        for mask in 0u32..(1 << k) {
            out.push(MarkedPartition {
                n,
                blocks: blocks.clone(),
                marks: (0..k).map(|b| mask >> b & 1 == 1).collect(),
            });
        }
        if !next_rgs(&mut rgs) {
            break;
        }
    }
    Ok(out)
}

/// Advances a restricted growth string; false after the last one.
fn next_rgs(a: &mut [usize]) -> bool {
    for i in (1..a.len()).rev() {
        let max_before = a[..i].iter().max().copied().unwrap_or(0);
        if a[i] <= max_before {
            a[i] += 1;
            for x in &mut a[i + 1..] {
                *x = 0;
            }
            return true;
        }
    }
    false
}

/// Writes `1`, then each block in turn at the end of the most recently
/// opened cycle; a marked block's minimum instead opens a new cycle.
pub fn partition_to_23_1_avoider(p: &MarkedPartition) -> CycleForm {
    let mut cycles: Vec<Vec<usize>> = vec![vec![1]];
    for (b, &marked) in p.blocks.iter().zip(&p.marks) {
        let (m, rest) = b.split_last().expect("blocks are nonempty");
        let last = cycles.last_mut().expect("there is always a current cycle");
        last.extend_from_slice(rest);
        if marked {
            cycles.push(vec![*m]);
        } else {
            last.push(*m);
        }
    }
    CycleForm::new(cycles).expect("the construction yields standard cycle form")
}

fn pattern(s: &str) -> VincularPattern3 {
    s.parse().expect("built-in pattern names parse")
}

fn require_avoids(c: &CycleForm, pat: &str) -> Result<Vec<usize>> {
    let word = c.flatten_word();
    if count_occurrences(&word, &pattern(pat)) != 0 {
        return Err(Error::Domain(format!("flattened form of {c} contains {pat}")));
    }
    Ok(word)
}

/// Inverse of [`partition_to_23_1_avoider`]: the blocks are the maximal
/// descending runs after the leading 1, and a block is marked exactly
/// when its smallest letter starts a cycle.
pub fn avoider_23_1_to_partition(c: &CycleForm) -> Result<MarkedPartition> {
    let word = require_avoids(c, "23-1")?;
    let starts: HashSet<usize> = c.cycles().iter().map(|cy| cy[0]).collect();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for (i, &v) in word.iter().enumerate().skip(1) {
        if i == 1 || word[i - 1] < v {
            blocks.push(Vec::new());
        }
        blocks.last_mut().expect("a block was opened").push(v);
    }
    let marks = blocks.iter().map(|b| starts.contains(b.last().expect("nonempty"))).collect();
    MarkedPartition::new(blocks, marks)
}

/// Reverses the letters strictly between consecutive anchor positions,
/// keeping cycle boundaries in place.
fn reverse_between(c: &CycleForm, word: &[usize], anchors: &[usize]) -> Result<CycleForm> {
    let mut out = word.to_vec();
    for w in anchors.windows(2) {
        out[w[0] + 1..w[1]].reverse();
    }
    CycleForm::from_word_and_starts(&out, &c.start_positions())
}

/// Number of ascents in a word.
pub fn ascents(word: &[usize]) -> usize {
    word.windows(2).filter(|w| w[0] < w[1]).count()
}

/// Reverses each run of letters between consecutive left letters of
/// ascents. The last letter of the flattened form also closes a run, so
/// the tail after the final ascent is reversed too.
pub fn map_23_1_to_32_1(c: &CycleForm) -> Result<CycleForm> {
    let word = require_avoids(c, "23-1")?;
    let n = word.len();
    let mut anchors: Vec<usize> = (0..n.saturating_sub(1)).filter(|&i| word[i] < word[i + 1]).collect();
    if n > 1 {
        anchors.push(n - 1);
    }
    reverse_between(c, &word, &anchors)
}

/// Inverse of [`map_23_1_to_32_1`]: the anchors are 1 followed by, each
/// time, the smallest letter to the right of the previous anchor.
pub fn inverse_32_1_to_23_1(c: &CycleForm) -> Result<CycleForm> {
    let word = require_avoids(c, "32-1")?;
    let n = word.len();
    let mut is_anchor = vec![false; n];
    let mut min_right = usize::MAX;
    for i in (0..n).rev() {
        if word[i] < min_right {
            min_right = word[i];
            is_anchor[i] = true;
        }
    }
    let anchors: Vec<usize> = (0..n).filter(|&i| is_anchor[i]).collect();
    reverse_between(c, &word, &anchors)
}

/// Whether, over `S_n`, the flattened form avoids 31-2 exactly when it
/// avoids the classical 3-1-2.
pub fn check_31_2_equivalence(n: usize) -> Result<bool> {
    Ok(BruteForce::default()
        .avoidance_agrees(n, &pattern("31-2"), &pattern("3-1-2"))?
        .is_none())
}

/// Outcome of an exhaustive sweep of both bijections at one `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BijectionSweep {
    pub n: usize,
    pub marked_partitions: usize,
    /// `sum_k 2^k S(n-1, k)`, or 1 when `n = 1`.
    pub expected_count: BigInt,
    /// Distinct images of the partition map.
    pub image_size: usize,
    /// Permutations of `S_n` whose flattened form avoids 23-1 / 32-1.
    pub avoiders_23_1: usize,
    pub avoiders_32_1: usize,
    /// Every image avoids 23-1 and has as many ascents as blocks.
    pub images_avoid_with_k_ascents: bool,
    pub partition_round_trip: bool,
    /// Reversal images avoid 32-1, are pairwise distinct, and keep each
    /// cycle's letters.
    pub reversal_into_32_1: bool,
    pub reversal_round_trip: bool,
    pub inverse_round_trip: bool,
}

impl BijectionSweep {
    pub fn all_pass(&self) -> bool {
        BigInt::from(self.marked_partitions) == self.expected_count
            && BigInt::from(self.image_size) == self.expected_count
            && self.avoiders_23_1 == self.image_size
            && self.avoiders_32_1 == self.avoiders_23_1
            && self.images_avoid_with_k_ascents
            && self.partition_round_trip
            && self.reversal_into_32_1
            && self.reversal_round_trip
            && self.inverse_round_trip
    }
}

fn same_cycle_letters(a: &CycleForm, b: &CycleForm) -> bool {
    a.cycles().len() == b.cycles().len()
        && a.cycles().iter().zip(b.cycles()).all(|(x, y)| {
            let mut x = x.clone();
            let mut y = y.clone();
            x.sort_unstable();
            y.sort_unstable();
            x == y
        })
}

/// Runs both bijections over their full domains at `n`.
pub fn sweep(n: usize) -> Result<BijectionSweep> {
    let partitions = marked_partitions(n)?;
    let cache = SpecialNumberCache::new(n);
    let expected_count = if n == 1 {
        BigInt::from(1)
    } else {
        (1..n).map(|k| cache.stirling2(n - 1, k) << k).sum()
    };
    let p231 = pattern("23-1");
    let p321 = pattern("32-1");

    let mut images = HashSet::new();
    let mut images_avoid_with_k_ascents = true;
    let mut partition_round_trip = true;
    for p in &partitions {
        let c = partition_to_23_1_avoider(p);
        let word = c.flatten_word();
        if count_occurrences(&word, &p231) != 0 || ascents(&word) != p.num_blocks() {
            images_avoid_with_k_ascents = false;
        }
        if avoider_23_1_to_partition(&c).ok().as_ref() != Some(p) {
            partition_round_trip = false;
        }
        images.insert(c);
    }

    let mut avoiders_23_1 = 0;
    let mut avoiders_32_1 = 0;
    let mut reversal_images = HashSet::new();
    let mut reversal_into_32_1 = true;
    let mut reversal_round_trip = true;
    let mut inverse_round_trip = true;
    for perm in enumerate_permutations(n, DEFAULT_CAP)? {
        let c = perm.to_standard_cycle_form();
        let word = c.flatten_word();
        if count_occurrences(&word, &p321) == 0 {
            avoiders_32_1 += 1;
            let back = inverse_32_1_to_23_1(&c)?;
            if map_23_1_to_32_1(&back).ok().as_ref() != Some(&c) {
                inverse_round_trip = false;
            }
        }
        if count_occurrences(&word, &p231) != 0 {
            continue;
        }
        avoiders_23_1 += 1;
        let image = map_23_1_to_32_1(&c)?;
        if count_occurrences(&image.flatten_word(), &p321) != 0 || !same_cycle_letters(&c, &image) {
            reversal_into_32_1 = false;
        }
        if inverse_32_1_to_23_1(&image).ok().as_ref() != Some(&c) {
            reversal_round_trip = false;
        }
        reversal_images.insert(image);
    }
    if reversal_images.len() != avoiders_23_1 {
        reversal_into_32_1 = false;
    }

    Ok(BijectionSweep {
        n,
        marked_partitions: partitions.len(),
        expected_count,
        image_size: images.len(),
        avoiders_23_1,
        avoiders_32_1,
        images_avoid_with_k_ascents,
        partition_round_trip,
        reversal_into_32_1,
        reversal_round_trip,
        inverse_round_trip,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;
    use proptest::prelude::*;

    fn cf(s: &str) -> CycleForm {
        s.parse().unwrap()
    }

    fn mp(s: &str) -> MarkedPartition {
        s.parse().unwrap()
    }

    #[test]
    fn worked_example() {
        let p = mp("{6,5,2}{10,7,3}*{4}*{9,8}");
        assert_eq!(p.n(), 10);
        assert_eq!(p.to_string(), "{6,5,2}{10,7,3}*{4}*{9,8}");
        let sigma = partition_to_23_1_avoider(&p);
        assert_eq!(sigma, cf("(1,6,5,2,10,7),(3),(4,9,8)"));
        assert_eq!(avoider_23_1_to_partition(&sigma).unwrap(), p);
        let image = map_23_1_to_32_1(&sigma).unwrap();
        assert_eq!(image, cf("(1,5,6,2,7,10),(3),(4,9,8)"));
        assert_eq!(inverse_32_1_to_23_1(&image).unwrap(), sigma);
    }

    #[test]
    fn small_and_identity_cases() {
        assert_eq!(partition_to_23_1_avoider(&mp("{2}")), cf("(1,2)"));
        let n = 6;
        let id = Permutation::identity(n).to_standard_cycle_form();
        let singletons = MarkedPartition::new((2..=n).map(|i| vec![i]).collect(), vec![true; n - 1]).unwrap();
        assert_eq!(partition_to_23_1_avoider(&singletons), id);
        assert_eq!(avoider_23_1_to_partition(&id).unwrap(), singletons);
        assert_eq!(map_23_1_to_32_1(&id).unwrap(), id);
        assert_eq!(inverse_32_1_to_23_1(&id).unwrap(), id);
        let one = Permutation::identity(1).to_standard_cycle_form();
        assert_eq!(map_23_1_to_32_1(&one).unwrap(), one);
        assert_eq!(marked_partitions(1).unwrap().len(), 1);
    }

    #[test]
    fn domain_errors() {
        // Flattened 1342 contains 23-1 (3,4,2); flattened 1432 contains 32-1.
        let c = cf("(1,3,4,2)");
        assert!(matches!(avoider_23_1_to_partition(&c), Err(Error::Domain(_))));
        assert!(matches!(map_23_1_to_32_1(&c), Err(Error::Domain(_))));
        assert!(matches!(inverse_32_1_to_23_1(&cf("(1,4,3,2)")), Err(Error::Domain(_))));
        assert!(MarkedPartition::new(vec![vec![2, 3]], vec![]).is_err());
        assert!(MarkedPartition::new(vec![vec![2], vec![2]], vec![false, false]).is_err());
        assert!(MarkedPartition::new(vec![vec![4]], vec![false]).is_err());
        assert!("{2}{".parse::<MarkedPartition>().is_err());
    }

    #[test]
    fn partition_parsing_normalises() {
        let p = mp("{2,5,6}, {9,8} {3,7,10}* {4}*");
        assert_eq!(p.to_string(), "{6,5,2}{10,7,3}*{4}*{9,8}");
    }

    #[test]
    fn exhaustive_sweeps() {
        for n in 1..=7 {
            let s = sweep(n).unwrap();
            assert!(s.all_pass(), "{s:?}");
        }
    }

    #[test]
    fn equivalence_31_2() {
        assert!(check_31_2_equivalence(3).unwrap());
        assert!(check_31_2_equivalence(8).unwrap());
    }

    #[test]
    fn tail_run_must_be_reversed() {
        // Flattened 1 4 3 2 has no ascent after 1, so only the closing
        // anchor at the last letter gets 4 3 reversed.
        let c = cf("(1,4,3,2)");
        let image = map_23_1_to_32_1(&c).unwrap();
        assert_eq!(image, cf("(1,3,4,2)"));
        assert_eq!(count_occurrences(&image.flatten_word(), &pattern("32-1")), 0);
        assert_eq!(inverse_32_1_to_23_1(&image).unwrap(), c);
    }

    proptest! {
        #[test]
        fn forward_then_back(n in 2usize..9, seed in any::<u64>()) {
            let all = marked_partitions(n).unwrap();
            let p = &all[(seed % all.len() as u64) as usize];
            let c = partition_to_23_1_avoider(p);
            prop_assert_eq!(&avoider_23_1_to_partition(&c).unwrap(), p);
            prop_assert_eq!(ascents(&c.flatten_word()), p.num_blocks());
            let image = map_23_1_to_32_1(&c).unwrap();
            prop_assert_eq!(inverse_32_1_to_23_1(&image).unwrap(), c);
            prop_assert_eq!(p.to_string().parse::<MarkedPartition>().unwrap(), p.clone());
        }
    }
}
