//! The nested-prefix construction of a right-infinite word from a Sturmian
//! base: anchor prefixes, palindromic power blocks, doubled stages, and the
//! limit stream.
//!
//! Anchors grow by at least a fixed factor, each ending with its predecessor;
//! block `n` is the anchor-power arrangement
//! `W_n W_{n-1}^{a} ... W_1^{a} ... W_{n-1}^{a} W_n` with exponents
//! `a_{i,j} = ceil(|W_i| / |W_j|)`, and stage `n` squares the previous stage
//! followed by the block. Stages nest as prefixes, so the limit is a
//! well-defined stream.

use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor_index::border_array;
use crate::word::{check_prefix_len, Alphabet, FiniteWord, Letter, WordStream};

pub const DEFAULT_GROWTH_FACTOR: u64 = 2;
pub const DEFAULT_SCAN_FACTOR: u64 = 64;
pub const DEFAULT_STAGE_CAP: u64 = 1 << 26;

/// Anchor selection policy. Only the deterministic shortest-qualifying-prefix
/// rule is implemented; any qualifying prefix would satisfy the bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum AnchorRule {
    #[default]
    Shortest,
}

/// Parameters of the construction.
#[derive(Clone)]
pub struct ConstructionParams {
    pub base: Arc<dyn WordStream>,
    /// Maximum stage recorded in a trace.
    pub depth: usize,
    /// Each anchor must be at least this many times longer than the last.
    pub growth_factor: u64,
    pub anchor_rule: AnchorRule,
    /// Anchor scans give up after `scan_factor * growth_factor * |W_{n-1}|`
    /// letters of the base, so a non-recurrent base fails instead of hanging.
    pub scan_factor: u64,
    /// Stages are materialized only up to this many letters; beyond it,
    /// letters are resolved through the recursive stage structure.
    pub stage_cap: u64,
}

impl ConstructionParams {
    pub fn new(base: Arc<dyn WordStream>, depth: usize) -> Self {
        ConstructionParams {
            base,
            depth,
            growth_factor: DEFAULT_GROWTH_FACTOR,
            anchor_rule: AnchorRule::Shortest,
            scan_factor: DEFAULT_SCAN_FACTOR,
            stage_cap: DEFAULT_STAGE_CAP,
        }
    }
}

/// First scan position (as a prefix length) at or after `min_len` where the
/// base prefix ends with `pattern`, searching no further than `scan_limit`.
fn shortest_qualifying_prefix(
    base: &dyn WordStream,
    pattern: &FiniteWord,
    min_len: u64,
    scan_limit: u64,
) -> Result<Option<u64>> {
    let hay = base.prefix(scan_limit)?;
    let pat = pattern.letters();
    let borders = border_array(pat);
    let mut k = 0usize;
    for (i, &c) in hay.letters().iter().enumerate() {
        while k > 0 && c != pat[k] {
            k = borders[k - 1];
        }
        if c == pat[k] {
            k += 1;
        }
        if k == pat.len() {
            let end = i as u64 + 1;
            if end >= min_len {
                return Ok(Some(end));
            }
            k = borders[k - 1];
        }
    }
    Ok(None)
}

/// Anchors `W_1..W_depth`: the first letter of the base, then for each stage
/// the shortest base prefix of length at least `growth_factor` times the
/// previous anchor that ends with the previous anchor.
pub fn select_anchors(
    base: &dyn WordStream,
    depth: usize,
    growth_factor: u64,
) -> Result<Vec<FiniteWord>> {
    select_anchors_with(base, depth, growth_factor, DEFAULT_SCAN_FACTOR)
}

pub fn select_anchors_with(
    base: &dyn WordStream,
    depth: usize,
    growth_factor: u64,
    scan_factor: u64,
) -> Result<Vec<FiniteWord>> {
    if depth < 1 {
        return Err(Error::IndexRange("construction depth must be >= 1".into()));
    }
    let mut anchors = vec![base.prefix(1)?];
    extend_anchors(base, &mut anchors, depth, growth_factor, scan_factor)?;
    Ok(anchors)
}

/// Keep selecting anchors until the list reaches `depth`.
fn extend_anchors(
    base: &dyn WordStream,
    anchors: &mut Vec<FiniteWord>,
    depth: usize,
    growth_factor: u64,
    scan_factor: u64,
) -> Result<()> {
    while anchors.len() < depth {
        let prev = anchors.last().unwrap();
        let min_len = growth_factor * prev.len() as u64;
        let scan_limit = scan_factor * min_len;
        match shortest_qualifying_prefix(base, prev, min_len, scan_limit)? {
            Some(end) => anchors.push(base.prefix(end)?),
            None => {
                return Err(Error::AnchorSearch {
                    stage: anchors.len() + 1,
                    needed: min_len,
                    scanned: scan_limit,
                })
            }
        }
    }
    Ok(())
}

/// Keep selecting anchors until the last one is longer than `min_len`.
pub fn anchors_to_length(
    base: &dyn WordStream,
    min_len: usize,
    growth_factor: u64,
) -> Result<Vec<FiniteWord>> {
    let mut anchors = vec![base.prefix(1)?];
    while anchors.last().unwrap().len() <= min_len {
        let depth = anchors.len() + 1;
        extend_anchors(base, &mut anchors, depth, growth_factor, DEFAULT_SCAN_FACTOR)?;
    }
    Ok(anchors)
}

/// `a_{i,j} = ceil(|W_i| / |W_j|)` for `1 <= j < i`.
pub fn exponent(anchors: &[FiniteWord], i: usize, j: usize) -> Result<u64> {
    if j < 1 || j >= i || i > anchors.len() {
        return Err(Error::IndexRange(format!(
            "exponent indices (i, j) = ({i}, {j}) need 1 <= j < i <= {}",
            anchors.len()
        )));
    }
    let li = anchors[i - 1].len() as u64;
    let lj = anchors[j - 1].len() as u64;
    Ok(li.div_ceil(lj))
}

/// Block `n` as segments `(anchor index, repetitions)`, in order.
fn block_segments(n: usize, anchors: &[FiniteWord]) -> Result<Vec<(usize, u64)>> {
    if n < 1 || n > anchors.len() {
        return Err(Error::IndexRange(format!(
            "block {n} needs {n} anchors, have {}",
            anchors.len()
        )));
    }
    if n == 1 {
        return Ok(vec![(1, 1)]);
    }
    let mut segs = Vec::with_capacity(2 * n - 1);
    segs.push((n, 1));
    for j in (1..n).rev() {
        segs.push((j, exponent(anchors, n, j)?));
    }
    for j in 2..n {
        segs.push((j, exponent(anchors, n, j)?));
    }
    segs.push((n, 1));
    Ok(segs)
}

fn segments_len(segs: &[(usize, u64)], anchors: &[FiniteWord]) -> u64 {
    segs.iter()
        .map(|&(j, reps)| anchors[j - 1].len() as u64 * reps)
        .sum()
}

/// Materialize block `n` over the given anchors. Block 1 is the degenerate
/// single-anchor case so the block list is total.
pub fn build_block(n: usize, anchors: &[FiniteWord]) -> Result<FiniteWord> {
    let segs = block_segments(n, anchors)?;
    let total = segments_len(&segs, anchors) as usize;
    let mut letters = Vec::with_capacity(total);
    for (j, reps) in segs {
        for _ in 0..reps {
            letters.extend_from_slice(anchors[j - 1].letters());
        }
    }
    Ok(FiniteWord::new(letters))
}

/// The anchors, exponents, blocks, and stages of a finite-depth construction,
/// with the final stage materialized.
#[derive(Debug, Clone)]
pub struct ConstructionTrace {
    pub anchors: Vec<FiniteWord>,
    /// Row `i - 2` holds `a_{i,1} .. a_{i,i-1}` for `i = 2..=depth`.
    pub exponents: Vec<Vec<u64>>,
    pub blocks: Vec<FiniteWord>,
    pub stage_lengths: Vec<u64>,
    /// The final stage `U_depth`.
    pub u_prefix: FiniteWord,
}

impl ConstructionTrace {
    pub fn build(params: &ConstructionParams) -> Result<Self> {
        let anchors = select_anchors_with(
            params.base.as_ref(),
            params.depth,
            params.growth_factor,
            params.scan_factor,
        )?;
        let mut exponents = Vec::new();
        for i in 2..=params.depth {
            let row: Result<Vec<u64>> = (1..i).map(|j| exponent(&anchors, i, j)).collect();
            exponents.push(row?);
        }
        let mut blocks = Vec::with_capacity(params.depth);
        let mut stage_lengths = Vec::with_capacity(params.depth);
        let mut stage = anchors[0].clone();
        stage_lengths.push(stage.len() as u64);
        blocks.push(anchors[0].clone());
        for n in 2..=params.depth {
            let block = build_block(n, &anchors)?;
            let next_len = 2 * (stage.len() as u64 + block.len() as u64);
            if next_len > params.stage_cap {
                return Err(Error::StageCapExceeded {
                    stage: n,
                    needed: next_len,
                    cap: params.stage_cap,
                });
            }
            let mut letters = Vec::with_capacity(next_len as usize);
            letters.extend_from_slice(stage.letters());
            letters.extend_from_slice(block.letters());
            letters.extend_from_within(..);
            stage = FiniteWord::new(letters);
            stage_lengths.push(stage.len() as u64);
            blocks.push(block);
        }
        Ok(ConstructionTrace {
            anchors,
            exponents,
            blocks,
            stage_lengths,
            u_prefix: stage,
        })
    }

    pub fn depth(&self) -> usize {
        self.anchors.len()
    }

    pub fn block_lengths(&self) -> Vec<u64> {
        self.blocks.iter().map(|b| b.len() as u64).collect()
    }
}

/// One row of the stage-length bound check `|U_d| <= 4 d^2 |W_d|`.
#[derive(Debug, Clone, Serialize)]
pub struct StageBoundRow {
    pub stage: usize,
    pub stage_length: u64,
    pub anchor_length: u64,
    pub bound: u64,
    pub pass: bool,
    /// `|U_d| / (d^2 |W_d|)`; the bound holds exactly when this is <= 4.
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct StageBoundReport {
    pub rows: Vec<StageBoundRow>,
    pub all_pass: bool,
}

/// Exact per-stage check of the stage-length bound.
pub fn verify_stage_length_bound(trace: &ConstructionTrace) -> StageBoundReport {
    let mut rows = Vec::with_capacity(trace.depth());
    for (idx, &len) in trace.stage_lengths.iter().enumerate() {
        let d = (idx + 1) as u64;
        let anchor_length = trace.anchors[idx].len() as u64;
        let bound = 4 * d * d * anchor_length;
        rows.push(StageBoundRow {
            stage: idx + 1,
            stage_length: len,
            anchor_length,
            bound,
            pass: len <= bound,
            ratio: len as f64 / (d * d * anchor_length) as f64,
        });
    }
    let all_pass = rows.iter().all(|r| r.pass);
    StageBoundReport { rows, all_pass }
}

/// JSON form of a trace, stable across runs of identical configurations.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TraceFile {
    pub anchors: Vec<String>,
    pub exponents: Vec<Vec<u64>>,
    pub block_lengths: Vec<u64>,
    pub stage_lengths: Vec<u64>,
    pub length_bound_ok: bool,
}

impl TraceFile {
    pub fn from_trace(trace: &ConstructionTrace, alphabet: &Alphabet) -> Self {
        TraceFile {
            anchors: trace.anchors.iter().map(|a| alphabet.text(a)).collect(),
            exponents: trace.exponents.clone(),
            block_lengths: trace.block_lengths(),
            stage_lengths: trace.stage_lengths.clone(),
            length_bound_ok: verify_stage_length_bound(trace).all_pass,
        }
    }

    pub fn parse_anchors(&self, alphabet: &Alphabet) -> Result<Vec<FiniteWord>> {
        self.anchors.iter().map(|a| alphabet.word(a)).collect()
    }
}

struct StageMeta {
    anchors: Vec<FiniteWord>,
    /// Per stage: segments of the block as (anchor index, reps, cumulative
    /// end offset within the block).
    seg_tables: Vec<Vec<(usize, u64, u64)>>,
    block_lens: Vec<u64>,
    stage_lens: Vec<u64>,
    /// Materialized prefix; always equal to the deepest stage that fits the
    /// cap, so it is a prefix of every later stage.
    buf: Vec<Letter>,
}

/// The limit stream of the construction. Stages are built lazily on demand;
/// positions beyond the materialization cap are resolved by descending the
/// recursive stage structure without materializing.
pub struct UStream {
    base: Arc<dyn WordStream>,
    alphabet: Alphabet,
    growth_factor: u64,
    scan_factor: u64,
    stage_cap: u64,
    descriptor: String,
    meta: RwLock<StageMeta>,
}

pub fn u_stream(params: &ConstructionParams) -> Result<UStream> {
    let first = params.base.prefix(1)?;
    let meta = StageMeta {
        buf: first.letters().to_vec(),
        anchors: vec![first],
        seg_tables: vec![vec![(1, 1, 1)]],
        block_lens: vec![1],
        stage_lens: vec![1],
    };
    Ok(UStream {
        base: Arc::clone(&params.base),
        alphabet: params.base.alphabet().clone(),
        growth_factor: params.growth_factor,
        scan_factor: params.scan_factor,
        stage_cap: params.stage_cap,
        descriptor: format!(
            "u({}, growth={})",
            params.base.descriptor(),
            params.growth_factor
        ),
        meta: RwLock::new(meta),
    })
}

impl UStream {
    /// Extend stage metadata (and the materialized prefix, within the cap)
    /// until the last stage covers `pos`.
    fn ensure_covers(&self, pos: u64) -> Result<()> {
        {
            let meta = self.meta.read().unwrap();
            if *meta.stage_lens.last().unwrap() > pos {
                return Ok(());
            }
        }
        let mut meta = self.meta.write().unwrap();
        while *meta.stage_lens.last().unwrap() <= pos {
            let n = meta.stage_lens.len() + 1;
            let depth = n;
            extend_anchors(
                self.base.as_ref(),
                &mut meta.anchors,
                depth,
                self.growth_factor,
                self.scan_factor,
            )?;
            let segs = block_segments(n, &meta.anchors)?;
            let mut cum = 0u64;
            let table: Vec<(usize, u64, u64)> = segs
                .iter()
                .map(|&(j, reps)| {
                    cum += meta.anchors[j - 1].len() as u64 * reps;
                    (j, reps, cum)
                })
                .collect();
            let block_len = cum;
            let stage_len = 2 * (meta.stage_lens.last().unwrap() + block_len);
            if stage_len <= self.stage_cap && meta.buf.len() as u64 == meta.stage_lens[n - 2] {
                let reserve = stage_len as usize - meta.buf.len();
                meta.buf.reserve(reserve);
                for &(j, reps, _) in &table {
                    let start = meta.buf.len();
                    let alen = meta.anchors[j - 1].len();
                    let anchor = meta.anchors[j - 1].letters().to_vec();
                    meta.buf.extend_from_slice(&anchor);
                    for _ in 1..reps {
                        meta.buf.extend_from_within(start..start + alen);
                    }
                }
                meta.buf.extend_from_within(..);
            }
            meta.seg_tables.push(table);
            meta.block_lens.push(block_len);
            meta.stage_lens.push(stage_len);
        }
        Ok(())
    }

    fn resolve(meta: &StageMeta, mut pos: u64) -> Letter {
        let mut n = meta.stage_lens.partition_point(|&l| l <= pos) + 1;
        loop {
            if (pos as usize) < meta.buf.len() {
                return meta.buf[pos as usize];
            }
            debug_assert!(n >= 2);
            let prev = meta.stage_lens[n - 2];
            let unit = prev + meta.block_lens[n - 1];
            pos %= unit;
            if pos < prev {
                n -= 1;
                continue;
            }
            // inside block n
            let off = pos - prev;
            let table = &meta.seg_tables[n - 1];
            let seg = table.partition_point(|&(_, _, end)| end <= off);
            let (j, reps, end) = table[seg];
            let anchor = &meta.anchors[j - 1];
            let start = end - reps * anchor.len() as u64;
            return anchor.letters()[((off - start) % anchor.len() as u64) as usize];
        }
    }
}

impl WordStream for UStream {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn letter_at(&self, pos: u64) -> Result<Letter> {
        self.ensure_covers(pos)?;
        let meta = self.meta.read().unwrap();
        Ok(Self::resolve(&meta, pos))
    }

    fn descriptor(&self) -> String {
        self.descriptor.clone()
    }

    fn prefix(&self, len: u64) -> Result<FiniteWord> {
        check_prefix_len(len)?;
        if len == 0 {
            return Ok(FiniteWord::empty());
        }
        self.ensure_covers(len - 1)?;
        let meta = self.meta.read().unwrap();
        let have = meta.buf.len().min(len as usize);
        let mut letters = Vec::with_capacity(len as usize);
        letters.extend_from_slice(&meta.buf[..have]);
        for pos in have as u64..len {
            letters.push(Self::resolve(&meta, pos));
        }
        Ok(FiniteWord::new(letters))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor_index::FactorIndex;
    use crate::sturmian::fibonacci_stream;
    use crate::word::PeriodicStream;

    fn ab() -> Alphabet {
        Alphabet::binary()
    }

    fn fib_params(depth: usize) -> ConstructionParams {
        ConstructionParams::new(Arc::new(fibonacci_stream()), depth)
    }

    fn texts(words: &[FiniteWord]) -> Vec<String> {
        words.iter().map(|w| ab().text(w)).collect()
    }

    #[test]
    fn fibonacci_anchors() {
        let f = fibonacci_stream();
        assert_eq!(
            texts(&select_anchors(&f, 3, 2).unwrap()),
            vec!["a", "aba", "abaaba"]
        );
        assert_eq!(texts(&select_anchors(&f, 1, 2).unwrap()), vec!["a"]);
    }

    #[test]
    fn periodic_base_anchors() {
        let p = PeriodicStream::new(ab(), ab().word("ab").unwrap()).unwrap();
        let anchors = select_anchors(&p, 2, 2).unwrap();
        assert_eq!(texts(&anchors), vec!["a", "aba"]);
    }

    #[test]
    fn anchor_nesting_and_growth() {
        let f = fibonacci_stream();
        let anchors = select_anchors(&f, 8, 2).unwrap();
        for n in 1..anchors.len() {
            assert!(anchors[n].starts_with(&anchors[n - 1]));
            assert!(anchors[n].ends_with(&anchors[n - 1]));
            assert!(anchors[n].len() >= 2 * anchors[n - 1].len());
        }
    }

    #[test]
    fn non_recurrent_base_fails_scan() {
        let mut letters = vec![1u8; 4096];
        letters[0] = 0;
        let s = PeriodicStream::new(ab(), FiniteWord::new(letters)).unwrap();
        match select_anchors(&s, 2, 2) {
            Err(Error::AnchorSearch { stage: 2, .. }) => {}
            other => panic!("expected anchor-search failure, got {other:?}"),
        }
    }

    #[test]
    fn exponent_examples() {
        let anchors = vec![
            FiniteWord::new(vec![0]),
            FiniteWord::new(vec![0; 3]),
            FiniteWord::new(vec![0; 6]),
        ];
        assert_eq!(exponent(&anchors, 3, 2).unwrap(), 2);
        assert_eq!(exponent(&anchors, 3, 1).unwrap(), 6);
        let anchors7 = vec![FiniteWord::new(vec![0; 3]), FiniteWord::new(vec![0; 7])];
        assert_eq!(exponent(&anchors7, 2, 1).unwrap(), 3);
        assert!(exponent(&anchors, 2, 2).is_err());
        assert!(exponent(&anchors, 4, 1).is_err());
    }

    #[test]
    fn block_examples() {
        let f = fibonacci_stream();
        let anchors = select_anchors(&f, 3, 2).unwrap();
        assert_eq!(ab().text(&build_block(2, &anchors).unwrap()), "abaaaaaba");
        assert_eq!(ab().text(&build_block(1, &anchors).unwrap()), "a");
        assert_eq!(build_block(3, &anchors).unwrap().len(), 30);
    }

    #[test]
    fn stage_examples() {
        let trace = ConstructionTrace::build(&fib_params(2)).unwrap();
        assert_eq!(ab().text(&trace.u_prefix), "aabaaaaabaaabaaaaaba");
        assert_eq!(trace.stage_lengths, vec![1, 20]);

        let trace = ConstructionTrace::build(&fib_params(6)).unwrap();
        for n in 1..trace.depth() {
            assert_eq!(
                trace.stage_lengths[n],
                2 * (trace.stage_lengths[n - 1] + trace.blocks[n].len() as u64)
            );
        }
    }

    #[test]
    fn stage_length_bound_holds() {
        let trace = ConstructionTrace::build(&fib_params(6)).unwrap();
        let report = verify_stage_length_bound(&trace);
        assert!(report.all_pass);
        assert_eq!(report.rows[1].stage_length, 20);
        assert_eq!(report.rows[1].bound, 48);
        assert_eq!(report.rows[0].bound, 4);
    }

    #[test]
    fn u_stream_matches_trace() {
        let params = fib_params(2);
        let u = u_stream(&params).unwrap();
        let trace = ConstructionTrace::build(&params).unwrap();
        assert_eq!(u.prefix(20).unwrap(), trace.u_prefix);
        assert_eq!(ab().text(&u.prefix(1).unwrap()), "a");

        let deep = ConstructionTrace::build(&fib_params(8)).unwrap();
        let len = deep.u_prefix.len() as u64;
        assert_eq!(u.prefix(len).unwrap(), deep.u_prefix);
    }

    #[test]
    fn u_prefixes_nest() {
        let u = u_stream(&fib_params(1)).unwrap();
        let big = u.prefix(2000).unwrap();
        for l in [10usize, 100, 1000] {
            assert_eq!(&big.letters()[..l], u.prefix(l as u64).unwrap().letters());
        }
    }

    #[test]
    fn unmaterialized_positions_resolve_identically() {
        let mut params = fib_params(1);
        params.stage_cap = 64;
        let capped = u_stream(&params).unwrap();
        let full = u_stream(&fib_params(1)).unwrap();
        let expect = full.prefix(3000).unwrap();
        let got = capped.prefix(3000).unwrap();
        assert_eq!(got, expect);
        assert_eq!(capped.letter_at(2999).unwrap(), expect.letters()[2999]);
    }

    #[test]
    fn rebuild_is_bit_identical() {
        let a = ConstructionTrace::build(&fib_params(6)).unwrap();
        let b = ConstructionTrace::build(&fib_params(6)).unwrap();
        assert_eq!(a.u_prefix, b.u_prefix);
        assert_eq!(a.anchors, b.anchors);
        assert_eq!(a.exponents, b.exponents);
    }

    #[test]
    fn anchor_powers_appear_in_stage() {
        let trace = ConstructionTrace::build(&fib_params(4)).unwrap();
        let idx = FactorIndex::build(&trace.u_prefix).unwrap();
        for j in 1..trace.depth() {
            let a = exponent(&trace.anchors, trace.depth(), j).unwrap();
            for m in 1..=a {
                assert!(
                    idx.contains(&trace.anchors[j - 1].power(m as usize)),
                    "power {m} of anchor {j} missing"
                );
            }
        }
    }

    #[test]
    fn trace_roundtrips_through_json() {
        let trace = ConstructionTrace::build(&fib_params(3)).unwrap();
        let file = TraceFile::from_trace(&trace, &ab());
        assert_eq!(file.anchors, vec!["a", "aba", "abaaba"]);
        assert_eq!(file.exponents, vec![vec![3], vec![6, 2]]);
        assert!(file.length_bound_ok);
        let json = serde_json::to_string(&file).unwrap();
        let back: TraceFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back.parse_anchors(&ab()).unwrap(), trace.anchors);
    }
}
