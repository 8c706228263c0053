//! Suffix-automaton index over a finite word: exact factor counting,
//! membership, occurrence counts, minimal periods, recurrence checks, and the
//! ultimately-periodic gap criterion.
//!
//! The automaton is the standard online construction (one state per endpos
//! class, at most `2L` states). Occurrence counts are endpos sizes aggregated
//! over the suffix-link tree once at build time, so queries are a single walk.

use crate::error::{Error, Result};
use crate::word::{check_prefix_len, FiniteWord, Letter, WordStream};

const NONE: u32 = u32::MAX;

/// Immutable factor index over one finite word.
pub struct FactorIndex {
    len: Vec<u32>,
    link: Vec<i32>,
    trans: Vec<u32>, // flat, state * asize + letter
    occ: Vec<u64>,
    p: Vec<u64>, // p[n] = distinct factors of length n, p[0] = 1
    asize: usize,
    source_length: usize,
    n_trust: usize,
    descriptor: String,
}

impl FactorIndex {
    /// Index a finite word. Counts are exact for the word itself, so the
    /// trusted horizon is its full length.
    pub fn build(word: &FiniteWord) -> Result<Self> {
        Self::build_with(word, word.len(), "word".to_string())
    }

    /// Index `prefix(len)` of a stream. The trusted horizon is certified by
    /// doubling: it is the largest `n` such that the profiles computed from
    /// `prefix(len)` and `prefix(ceil(len/2))` agree at every length `<= n`.
    pub fn index_stream(stream: &dyn WordStream, len: u64) -> Result<Self> {
        check_prefix_len(len)?;
        let word = stream.prefix(len)?;
        Self::index_prefix(&word, format!("{}[0..{}]", stream.descriptor(), len))
    }

    /// Index a finite word regarded as a prefix of a longer source, with the
    /// same doubling-certified trusted horizon as [`FactorIndex::index_stream`].
    pub fn index_prefix(word: &FiniteWord, descriptor: String) -> Result<Self> {
        if word.len() < 2 {
            return Err(Error::UntrustedHorizon {
                needed: 2,
                available: word.len() as u64,
            });
        }
        let half_len = word.len().div_ceil(2);
        let half_p = {
            let half = FiniteWord::new(word.letters()[..half_len].to_vec());
            let idx = Self::build_with(&half, half_len, String::new())?;
            idx.p
        };
        let mut idx = Self::build_with(word, 0, descriptor)?;
        let mut trust = 0;
        while trust + 1 < half_p.len() && half_p[trust + 1] == idx.p[trust + 1] {
            trust += 1;
        }
        idx.n_trust = trust;
        Ok(idx)
    }

    /// Index enough of the periodic word `y y y ...` that every factor of
    /// length `<= horizon` of the infinite word is present. Any such factor
    /// starts within the first period, so `horizon + |y|` letters suffice.
    pub fn index_periodic(period: &FiniteWord, horizon: usize) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidWord("empty period".into()));
        }
        let reps = (horizon + 2 * period.len()).div_ceil(period.len());
        Self::build_with(
            &period.power(reps),
            horizon,
            format!("periodic[{}]", period.len()),
        )
    }

    fn build_with(word: &FiniteWord, n_trust: usize, descriptor: String) -> Result<Self> {
        if word.is_empty() {
            return Err(Error::InvalidWord("cannot index the empty word".into()));
        }
        check_prefix_len(word.len() as u64)?;
        let asize = word.letters().iter().copied().max().unwrap() as usize + 1;
        let cap = 2 * word.len() + 2;
        let mut idx = FactorIndex {
            len: Vec::with_capacity(cap),
            link: Vec::with_capacity(cap),
            trans: Vec::with_capacity(cap * asize),
            occ: Vec::new(),
            p: Vec::new(),
            asize,
            source_length: word.len(),
            n_trust,
            descriptor,
        };
        let mut primary = Vec::with_capacity(cap);
        idx.new_state(0, -1);
        primary.push(false);
        let mut last: u32 = 0;
        for &c in word.letters() {
            last = idx.extend(last, c, &mut primary);
        }
        idx.finalize(&primary);
        Ok(idx)
    }

    fn new_state(&mut self, len: u32, link: i32) -> u32 {
        let id = self.len.len() as u32;
        self.len.push(len);
        self.link.push(link);
        self.trans.extend(std::iter::repeat_n(NONE, self.asize));
        id
    }

    #[inline]
    fn tr(&self, state: u32, c: Letter) -> u32 {
        self.trans[state as usize * self.asize + c as usize]
    }

    #[inline]
    fn set_tr(&mut self, state: u32, c: Letter, to: u32) {
        self.trans[state as usize * self.asize + c as usize] = to;
    }

    fn extend(&mut self, last: u32, c: Letter, primary: &mut Vec<bool>) -> u32 {
        let cur = self.new_state(self.len[last as usize] + 1, 0);
        primary.push(true);
        let mut p = last as i32;
        while p >= 0 && self.tr(p as u32, c) == NONE {
            self.set_tr(p as u32, c, cur);
            p = self.link[p as usize];
        }
        if p < 0 {
            self.link[cur as usize] = 0;
            return cur;
        }
        let q = self.tr(p as u32, c);
        if self.len[p as usize] + 1 == self.len[q as usize] {
            self.link[cur as usize] = q as i32;
            return cur;
        }
        let clone = self.new_state(self.len[p as usize] + 1, self.link[q as usize]);
        primary.push(false);
        for l in 0..self.asize {
            let t = self.trans[q as usize * self.asize + l];
            self.trans[clone as usize * self.asize + l] = t;
        }
        while p >= 0 && self.tr(p as u32, c) == q {
            self.set_tr(p as u32, c, clone);
            p = self.link[p as usize];
        }
        self.link[q as usize] = clone as i32;
        self.link[cur as usize] = clone as i32;
        cur
    }

    fn finalize(&mut self, primary: &[bool]) {
        let n = self.len.len();
        // counting sort by state length
        let max_len = self.source_length;
        let mut bucket = vec![0u32; max_len + 2];
        for &l in &self.len {
            bucket[l as usize + 1] += 1;
        }
        for i in 1..bucket.len() {
            bucket[i] += bucket[i - 1];
        }
        let mut order = vec![0u32; n];
        for s in 0..n {
            let l = self.len[s] as usize;
            order[bucket[l] as usize] = s as u32;
            bucket[l] += 1;
        }
        self.occ = primary.iter().map(|&b| u64::from(b)).collect();
        for &s in order.iter().rev() {
            let l = self.link[s as usize];
            if l >= 0 {
                self.occ[l as usize] += self.occ[s as usize];
            }
        }
        // factor counts per length via a difference array over [minlen, len]
        let mut diff = vec![0i64; max_len + 2];
        for s in 1..n {
            let minlen = self.len[self.link[s] as usize] as usize + 1;
            diff[minlen] += 1;
            diff[self.len[s] as usize + 1] -= 1;
        }
        let mut p = vec![0u64; max_len + 1];
        p[0] = 1;
        let mut running = 0i64;
        for n_ in 1..=max_len {
            running += diff[n_];
            p[n_] = running as u64;
        }
        self.p = p;
    }

    pub fn source_length(&self) -> usize {
        self.source_length
    }

    /// Largest factor length at which counts are certified stable for the
    /// underlying (possibly infinite) source.
    pub fn n_trust(&self) -> usize {
        self.n_trust
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    pub fn state_count(&self) -> usize {
        self.len.len()
    }

    fn walk(&self, w: &FiniteWord) -> Option<u32> {
        let mut s = 0u32;
        for &c in w.letters() {
            if (c as usize) >= self.asize {
                return None;
            }
            s = self.tr(s, c);
            if s == NONE {
                return None;
            }
        }
        Some(s)
    }

    /// Whether `w` is a factor of the indexed word.
    pub fn contains(&self, w: &FiniteWord) -> bool {
        self.walk(w).is_some()
    }

    /// Number of (possibly overlapping) occurrences of `w`; 0 if absent.
    /// The empty word occurs `source_length + 1` times.
    pub fn occurrences(&self, w: &FiniteWord) -> u64 {
        if w.is_empty() {
            return self.source_length as u64 + 1;
        }
        match self.walk(w) {
            Some(s) => self.occ[s as usize],
            None => 0,
        }
    }

    /// Exact number of distinct factors of length `n` of the indexed word.
    pub fn complexity(&self, n: usize) -> Result<u64> {
        if n < 1 || n > self.source_length {
            return Err(Error::IndexRange(format!(
                "factor length {n} outside 1..={}",
                self.source_length
            )));
        }
        Ok(self.p[n])
    }

    /// The complexity profile truncated to `n_max`.
    pub fn profile(&self, n_max: usize) -> ComplexityProfile {
        let n_max = n_max.min(self.source_length);
        ComplexityProfile {
            p: self.p[..=n_max].to_vec(),
            n_trust: self.n_trust.min(n_max),
            source: self.descriptor.clone(),
        }
    }

    /// All distinct nonempty factors of length exactly `n`, lexicographic.
    pub fn factors_of_length(&self, n: usize) -> Vec<FiniteWord> {
        self.dfs_factors(n, true)
    }

    /// All distinct nonempty factors of length at most `n`, lexicographic.
    pub fn factors_up_to(&self, n: usize) -> Vec<FiniteWord> {
        self.dfs_factors(n, false)
    }

    fn dfs_factors(&self, max_len: usize, exact: bool) -> Vec<FiniteWord> {
        let mut out = Vec::new();
        if max_len == 0 {
            return out;
        }
        let mut path: Vec<Letter> = Vec::new();
        let mut stack: Vec<(u32, u8)> = vec![(0, 0)];
        while let Some(&(state, cursor)) = stack.last() {
            if path.len() >= max_len || cursor as usize >= self.asize {
                stack.pop();
                path.pop();
                continue;
            }
            stack.last_mut().unwrap().1 += 1;
            let t = self.tr(state, cursor);
            if t != NONE {
                path.push(cursor);
                if !exact || path.len() == max_len {
                    out.push(FiniteWord::new(path.clone()));
                }
                stack.push((t, 0));
            }
        }
        out
    }
}

/// Complexity profile `n -> p(n)` of a word, trusted up to `n_trust`.
#[derive(Debug, Clone)]
pub struct ComplexityProfile {
    p: Vec<u64>,
    n_trust: usize,
    source: String,
}

impl ComplexityProfile {
    pub fn from_counts(p: Vec<u64>, n_trust: usize, source: String) -> Self {
        assert!(!p.is_empty() && p[0] == 1, "profile must start at p(0) = 1");
        let n_trust = n_trust.min(p.len() - 1);
        ComplexityProfile { p, n_trust, source }
    }

    /// Largest length with a stored count.
    pub fn n_max(&self) -> usize {
        self.p.len() - 1
    }

    pub fn n_trust(&self) -> usize {
        self.n_trust
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// `p(n)`; panics if `n` exceeds `n_max`.
    pub fn p(&self, n: usize) -> u64 {
        self.p[n]
    }
}

/// Failure function: `b[i]` is the length of the longest proper border of
/// the prefix ending at `i`.
pub fn border_array(w: &[Letter]) -> Vec<usize> {
    let n = w.len();
    let mut b = vec![0usize; n];
    let mut k = 0;
    for i in 1..n {
        while k > 0 && w[i] != w[k] {
            k = b[k - 1];
        }
        if w[i] == w[k] {
            k += 1;
        }
        b[i] = k;
    }
    b
}

/// Smallest `p >= 1` with `w[i] = w[i+p]` throughout: length minus the
/// longest proper border.
pub fn minimal_period(w: &FiniteWord) -> usize {
    assert!(!w.is_empty(), "minimal_period of the empty word");
    let b = border_array(w.letters());
    w.len() - b[w.len() - 1]
}

/// A word is primitive when it is no proper power of a shorter word.
pub fn is_primitive(w: &FiniteWord) -> bool {
    let p = minimal_period(w);
    p == w.len() || !w.len().is_multiple_of(p)
}

/// The shortest word `u` with `w = u^k`; `w` itself when primitive.
pub fn primitive_root(w: &FiniteWord) -> FiniteWord {
    let p = minimal_period(w);
    if p < w.len() && w.len().is_multiple_of(p) {
        FiniteWord::new(w.letters()[..p].to_vec())
    } else {
        w.clone()
    }
}

/// Classification from the gap criterion: complexity at or below `n` at any
/// length forces ultimate periodicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PeriodicityClass {
    UltimatelyPeriodic { witness: usize },
    AperiodicAtHorizon { n_trust: usize },
}

/// Scan the trusted part of a profile for a length `n` with `p(n) <= n`.
pub fn bergman_gap_check(profile: &ComplexityProfile) -> PeriodicityClass {
    for n in 1..=profile.n_trust() {
        if profile.p(n) <= n as u64 {
            return PeriodicityClass::UltimatelyPeriodic { witness: n };
        }
    }
    PeriodicityClass::AperiodicAtHorizon {
        n_trust: profile.n_trust(),
    }
}

/// Outcome of one recurrence check at a fixed factor length.
#[derive(Debug, Clone)]
pub struct RecurrenceReport {
    pub factor_len: usize,
    pub k_min: u64,
    pub ok: bool,
    /// Number of distinct factors of the half prefix that were checked.
    pub checked: usize,
    /// The factor with the fewest occurrences in the full prefix.
    pub worst: Option<(FiniteWord, u64)>,
}

/// Paired full/half indexes for recurrence checks at many factor lengths.
pub struct RecurrenceScan {
    full: FactorIndex,
    half: FactorIndex,
}

impl RecurrenceScan {
    pub fn new(stream: &dyn WordStream, len: u64) -> Result<Self> {
        check_prefix_len(len)?;
        let word = stream.prefix(len)?;
        Self::over_word(&word)
    }

    /// Treat an already-materialized word as the full prefix.
    pub fn over_word(word: &FiniteWord) -> Result<Self> {
        let half = FiniteWord::new(word.letters()[..word.len().div_ceil(2)].to_vec());
        Ok(RecurrenceScan {
            full: FactorIndex::build(word)?,
            half: FactorIndex::build(&half)?,
        })
    }

    pub fn full_len(&self) -> usize {
        self.full.source_length()
    }

    /// True iff every factor of length `factor_len` of the half prefix
    /// occurs at least `k_min` times in the full prefix.
    pub fn check(&self, factor_len: usize, k_min: u64) -> Result<RecurrenceReport> {
        let needed = 4 * factor_len as u64;
        if (self.full.source_length() as u64) < needed {
            return Err(Error::UntrustedHorizon {
                needed,
                available: self.full.source_length() as u64,
            });
        }
        let mut worst: Option<(FiniteWord, u64)> = None;
        let mut checked = 0usize;
        for f in self.half.factors_of_length(factor_len) {
            let c = self.full.occurrences(&f);
            checked += 1;
            if worst.as_ref().is_none_or(|(_, w)| c < *w) {
                worst = Some((f, c));
            }
        }
        let ok = worst.as_ref().is_none_or(|(_, c)| *c >= k_min);
        Ok(RecurrenceReport {
            factor_len,
            k_min,
            ok,
            checked,
            worst,
        })
    }
}

/// One-shot form of [`RecurrenceScan::check`] on `prefix(len)` of a stream.
pub fn recurrence_check(
    stream: &dyn WordStream,
    len: u64,
    factor_len: usize,
    k_min: u64,
) -> Result<RecurrenceReport> {
    if len < 4 * factor_len as u64 {
        return Err(Error::UntrustedHorizon {
            needed: 4 * factor_len as u64,
            available: len,
        });
    }
    RecurrenceScan::new(stream, len)?.check(factor_len, k_min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{Alphabet, PeriodicStream};
    use proptest::prelude::*;
    use std::collections::{HashMap, HashSet};

    fn ab() -> Alphabet {
        Alphabet::binary()
    }

    fn w(text: &str) -> FiniteWord {
        Alphabet::new("abcdefghij").unwrap().word(text).unwrap()
    }

    // Brute-force reference for factor sets and occurrence counts.
    fn brute_factors(word: &FiniteWord, n: usize) -> HashSet<Vec<Letter>> {
        let mut out = HashSet::new();
        if n >= 1 && n <= word.len() {
            for i in 0..=word.len() - n {
                out.insert(word.letters()[i..i + n].to_vec());
            }
        }
        out
    }

    fn brute_occurrences(word: &FiniteWord, pat: &FiniteWord) -> u64 {
        if pat.is_empty() {
            return word.len() as u64 + 1;
        }
        if pat.len() > word.len() {
            return 0;
        }
        (0..=word.len() - pat.len())
            .filter(|&i| &word.letters()[i..i + pat.len()] == pat.letters())
            .count() as u64
    }

    #[test]
    fn small_word_factor_set() {
        let word = w("aab");
        let idx = FactorIndex::build(&word).unwrap();
        for t in ["a", "b", "aa", "ab", "aab"] {
            assert!(idx.contains(&w(t)), "{t} should be a factor");
        }
        assert!(idx.contains(&FiniteWord::empty()));
        for t in ["ba", "bb", "aba", "aaa"] {
            assert!(!idx.contains(&w(t)), "{t} should not be a factor");
        }
        assert_eq!(idx.complexity(1).unwrap(), 2);
        assert_eq!(idx.complexity(2).unwrap(), 2);
        assert_eq!(idx.complexity(3).unwrap(), 1);
        assert!(idx.complexity(4).is_err());
        assert!(idx.complexity(0).is_err());
    }

    #[test]
    fn unary_word_profile() {
        let idx = FactorIndex::build(&w("aaaa")).unwrap();
        for n in 1..=4 {
            assert_eq!(idx.complexity(n).unwrap(), 1);
        }
        assert_eq!(idx.occurrences(&w("aa")), 3);
        assert_eq!(idx.occurrences(&w("ba")), 0);
    }

    #[test]
    fn ababa_complexity() {
        let idx = FactorIndex::build(&w("ababa")).unwrap();
        assert_eq!(idx.complexity(2).unwrap(), 2);
    }

    #[test]
    fn matches_brute_force_on_random_words() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..60 {
            let len = rng.gen_range(1..=200);
            let asize = rng.gen_range(2..=3);
            let letters: Vec<Letter> = (0..len).map(|_| rng.gen_range(0..asize)).collect();
            let word = FiniteWord::new(letters);
            let idx = FactorIndex::build(&word).unwrap();
            assert!(idx.state_count() <= 2 * word.len().max(2));
            let mut occs: HashMap<Vec<Letter>, u64> = HashMap::new();
            for n in 1..=word.len() {
                let brute = brute_factors(&word, n);
                assert_eq!(idx.complexity(n).unwrap(), brute.len() as u64);
                let listed = idx.factors_of_length(n);
                assert_eq!(listed.len(), brute.len());
                for f in &listed {
                    assert!(brute.contains(f.letters()));
                }
                for f in brute {
                    *occs.entry(f).or_insert(0) += 0;
                }
            }
            for (f, _) in occs {
                let pat = FiniteWord::new(f);
                assert_eq!(idx.occurrences(&pat), brute_occurrences(&word, &pat));
            }
        }
    }

    #[test]
    fn minimal_period_examples() {
        assert_eq!(minimal_period(&w("abab")), 2);
        assert_eq!(minimal_period(&w("aaaa")), 1);
        assert_eq!(minimal_period(&w("abca")), 3);
        assert_eq!(minimal_period(&w("aba")), 2);
    }

    #[test]
    fn primitivity() {
        assert!(is_primitive(&w("aba")));
        assert!(!is_primitive(&w("abab")));
        assert!(is_primitive(&w("ababa")));
        assert_eq!(primitive_root(&w("abaaba")), w("aba"));
        assert_eq!(primitive_root(&w("abaab")), w("abaab"));
    }

    #[test]
    fn periodic_index_covers_rotations() {
        let idx = FactorIndex::index_periodic(&w("ab"), 10).unwrap();
        assert!(idx.contains(&w("ababa")));
        assert!(idx.contains(&w("babab")));
        assert!(!idx.contains(&w("abba")));
        assert_eq!(idx.n_trust(), 10);
    }

    #[test]
    fn stream_index_trust_on_periodic() {
        let s = PeriodicStream::new(ab(), ab().word("ab").unwrap()).unwrap();
        let idx = FactorIndex::index_stream(&s, 100).unwrap();
        assert!(idx.n_trust() >= 40);
        let profile = idx.profile(20);
        assert_eq!(
            bergman_gap_check(&profile),
            PeriodicityClass::UltimatelyPeriodic { witness: 2 }
        );
    }

    #[test]
    fn recurrence_examples() {
        // a then all b: the factor "ab" occurs exactly once
        let mut letters = vec![1u8; 100];
        letters[0] = 0;
        let word = FiniteWord::new(letters);
        let scan = RecurrenceScan::over_word(&word).unwrap();
        let rep = scan.check(2, 2).unwrap();
        assert!(!rep.ok);
        let (worst, count) = rep.worst.unwrap();
        assert_eq!(worst, w("ab"));
        assert_eq!(count, 1);

        let s = PeriodicStream::new(ab(), ab().word("ab").unwrap()).unwrap();
        let rep = recurrence_check(&s, 400, 3, 10).unwrap();
        assert!(rep.ok);
        assert!(recurrence_check(&s, 10, 3, 1).is_err());
    }

    proptest! {
        #[test]
        fn complexity_is_submultiplicative(letters in prop::collection::vec(0u8..2, 2..80)) {
            let word = FiniteWord::new(letters);
            let idx = FactorIndex::build(&word).unwrap();
            let l = word.len();
            for m in 1..l {
                for n in 1..(l - m).min(8) {
                    let pm = idx.complexity(m).unwrap();
                    let pn = idx.complexity(n).unwrap();
                    let pmn = idx.complexity(m + n).unwrap();
                    prop_assert!(pmn <= pm * pn);
                }
            }
        }

        #[test]
        fn primitive_powers_recover_period(letters in prop::collection::vec(0u8..2, 1..=16),
                                           k in 2usize..=4) {
            let word = FiniteWord::new(letters);
            prop_assume!(is_primitive(&word));
            prop_assert_eq!(minimal_period(&word.power(k)), word.len());
        }

        #[test]
        fn high_entropy_windows(letters in prop::collection::vec(0u8..20, 4..64), n in 1usize..8) {
            let word = FiniteWord::new(letters);
            prop_assume!(n <= word.len());
            let idx = FactorIndex::build(&word).unwrap();
            let distinct = brute_factors(&word, n).len();
            let all_distinct = distinct == word.len() - n + 1;
            prop_assert_eq!(
                idx.complexity(n).unwrap() == (word.len() - n + 1) as u64,
                all_distinct
            );
        }

        #[test]
        fn profile_shape(letters in prop::collection::vec(0u8..2, 2..60)) {
            let word = FiniteWord::new(letters);
            let idx = FactorIndex::build(&word).unwrap();
            for n in 1..word.len() {
                let here = idx.complexity(n).unwrap();
                let next = idx.complexity(n + 1).unwrap();
                prop_assert!(next <= 2 * here);
            }
        }
    }
}
