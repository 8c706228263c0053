//! Exact arithmetic in the monomial algebra of a word, periodic quotients
//! with their PI-degree data, and enumeration of candidates for prime
//! quotients of growth-exponent one.
//!
//! An element is a finite rational combination of basis words; the product
//! of two basis words is their concatenation when that is a factor of the
//! defining word and zero otherwise. Coefficients stay exact rationals so
//! the centrality checks are equalities, not approximations.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::factor_index::{is_primitive, minimal_period, primitive_root, FactorIndex};
use crate::word::FiniteWord;

/// A finite formal linear combination of basis words with nonzero exact
/// rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AlgebraElement {
    terms: BTreeMap<FiniteWord, BigRational>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        AlgebraElement::default()
    }

    /// The unit: the empty word with coefficient one.
    pub fn one() -> Self {
        AlgebraElement::from_word(FiniteWord::empty())
    }

    pub fn from_word(w: FiniteWord) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(w, BigRational::one());
        AlgebraElement { terms }
    }

    pub fn from_terms(pairs: impl IntoIterator<Item = (FiniteWord, BigRational)>) -> Self {
        let mut out = AlgebraElement::zero();
        for (w, c) in pairs {
            out.add_term(w, c);
        }
        out
    }

    fn add_term(&mut self, w: FiniteWord, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FiniteWord, &BigRational)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> AlgebraElement {
        if c.is_zero() {
            return AlgebraElement::zero();
        }
        AlgebraElement {
            terms: self
                .terms
                .iter()
                .map(|(w, x)| (w.clone(), x * c))
                .collect(),
        }
    }

    pub fn sub(&self, other: &AlgebraElement) -> AlgebraElement {
        self.add(&other.scale(&-BigRational::one()))
    }

    /// Bilinear extension of concatenation-or-zero over the factor set of
    /// the indexed word. Basis words that are not factors are zero in the
    /// algebra and drop out; concatenations longer than the certified
    /// horizon are an error rather than a silent zero.
    pub fn mul(&self, other: &AlgebraElement, factors: &FactorIndex) -> Result<AlgebraElement> {
        let mut out = AlgebraElement::zero();
        for (u, cu) in &self.terms {
            for (v, cv) in &other.terms {
                let w = u.concat(v);
                if w.len() > factors.n_trust() {
                    return Err(Error::FactorHorizon {
                        requested: w.len() as u64,
                        trusted: factors.n_trust() as u64,
                    });
                }
                if factors.contains(&w) {
                    out.add_term(w, cu * cv);
                }
            }
        }
        Ok(out)
    }
}

/// The quotient data of a periodic word: its primitive period, the rotations
/// of that period, and the PI degree `2d` of the standard identity the
/// quotient satisfies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicQuotient {
    period: FiniteWord,
    rotations: Vec<FiniteWord>,
    pi_degree: usize,
}

/// Build the quotient data for the periodic word `y y y ...`, replacing `y`
/// by its primitive root first.
pub fn build_periodic_quotient(y: &FiniteWord) -> Result<PeriodicQuotient> {
    if y.is_empty() {
        return Err(Error::InvalidWord("empty period word".into()));
    }
    let root = primitive_root(y);
    let d = root.len();
    let doubled = root.concat(&root);
    let rotations: Vec<FiniteWord> = (0..d)
        .map(|r| FiniteWord::new(doubled.letters()[r..r + d].to_vec()))
        .collect();
    Ok(PeriodicQuotient {
        period: root,
        pi_degree: 2 * d,
        rotations,
    })
}

impl PeriodicQuotient {
    pub fn period(&self) -> &FiniteWord {
        &self.period
    }

    /// The minimal period `d` of the infinite word.
    pub fn d(&self) -> usize {
        self.period.len()
    }

    /// The `d` distinct length-`d` factors of the infinite word.
    pub fn rotations(&self) -> &[FiniteWord] {
        &self.rotations
    }

    pub fn pi_degree(&self) -> usize {
        self.pi_degree
    }

    /// The central element: the sum of the rotations.
    pub fn central_sum(&self) -> AlgebraElement {
        AlgebraElement::from_terms(
            self.rotations
                .iter()
                .map(|r| (r.clone(), BigRational::one())),
        )
    }
}

/// Per-identity outcome of checking the quotient relations in exact
/// arithmetic over a truncated factor set.
#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub check_len: usize,
    pub central_ok: bool,
    pub central_witness: Option<FiniteWord>,
    pub orthogonal_ok: bool,
    pub orthogonal_witness: Option<(usize, usize)>,
    pub squares_ok: bool,
    pub squares_witness: Option<usize>,
    pub all_pass: bool,
    pub words_checked: usize,
}

/// Verify, over the factor set of the periodic word truncated at
/// `check_len`: the rotation sum commutes with every basis word; distinct
/// rotations multiply to zero; and each rotation squared equals its product
/// with the rotation sum on either side.
pub fn verify_quotient_identities(q: &PeriodicQuotient, check_len: usize) -> Result<IdentityReport> {
    let d = q.d();
    if check_len < 2 * d {
        return Err(Error::UntrustedHorizon {
            needed: 2 * d as u64,
            available: check_len as u64,
        });
    }
    let index = FactorIndex::index_periodic(q.period(), check_len)?;
    let z = q.central_sum();

    let mut central_ok = true;
    let mut central_witness = None;
    let mut words_checked = 0usize;
    for w in index.factors_up_to(check_len - d) {
        let el = AlgebraElement::from_word(w.clone());
        let zw = z.mul(&el, &index)?;
        let wz = el.mul(&z, &index)?;
        words_checked += 1;
        if zw != wz {
            central_ok = false;
            central_witness = Some(w);
            break;
        }
    }

    let mut orthogonal_ok = true;
    let mut orthogonal_witness = None;
    'outer: for i in 0..d {
        for j in 0..d {
            if i == j {
                continue;
            }
            let yi = AlgebraElement::from_word(q.rotations()[i].clone());
            let yj = AlgebraElement::from_word(q.rotations()[j].clone());
            if !yi.mul(&yj, &index)?.is_zero() {
                orthogonal_ok = false;
                orthogonal_witness = Some((i + 1, j + 1));
                break 'outer;
            }
        }
    }

    let mut squares_ok = true;
    let mut squares_witness = None;
    for i in 0..d {
        let yi = AlgebraElement::from_word(q.rotations()[i].clone());
        let sq = yi.mul(&yi, &index)?;
        let yz = yi.mul(&z, &index)?;
        let zy = z.mul(&yi, &index)?;
        if sq != yz || sq != zy {
            squares_ok = false;
            squares_witness = Some(i + 1);
            break;
        }
    }

    let all_pass = central_ok && orthogonal_ok && squares_ok;
    Ok(IdentityReport {
        check_len,
        central_ok,
        central_witness,
        orthogonal_ok,
        orthogonal_witness,
        squares_ok,
        squares_witness,
        all_pass,
        words_checked,
    })
}

/// Index of the lexicographically least rotation (Booth's tournament).
fn least_rotation_index(s: &[u8]) -> usize {
    let n = s.len();
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        let a = s[(i + k) % n];
        let b = s[(j + k) % n];
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i += k + 1;
        } else {
            j += k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j)
}

/// The lexicographically least rotation of a nonempty word.
pub fn canonical_rotation(w: &FiniteWord) -> FiniteWord {
    assert!(!w.is_empty(), "canonical rotation of the empty word");
    let r = least_rotation_index(w.letters());
    let doubled = w.concat(w);
    FiniteWord::new(doubled.letters()[r..r + w.len()].to_vec())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CandidateStatus {
    /// The requested power was found; `verified_power` is the largest
    /// confirmed exponent at this horizon.
    ConfirmedAtK,
    Rejected,
}

/// A primitive word whose high powers are factors of the indexed word: the
/// desk-scale candidate for a prime quotient of growth-exponent one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeCandidate {
    pub canonical_word: FiniteWord,
    /// Minimal period of the periodic quotient word, equal to the length.
    pub period: usize,
    pub pi_degree: usize,
    /// Largest `k` with the `k`-th power confirmed a factor.
    pub verified_power: u64,
    pub status: CandidateStatus,
}

fn largest_power(index: &FactorIndex, v: &FiniteWord) -> u64 {
    if !index.contains(v) {
        return 0;
    }
    let mut lo = 1u64;
    let mut hi = (index.source_length() / v.len()) as u64 + 1;
    // contains(v^hi) is false: the power would be longer than the source
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if index.contains(&v.power(mid as usize)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Check a single primitive word against the power threshold.
pub fn check_candidate(index: &FactorIndex, v: &FiniteWord, k: u64) -> PrimeCandidate {
    debug_assert!(is_primitive(v));
    let verified = largest_power(index, v);
    PrimeCandidate {
        canonical_word: canonical_rotation(v),
        period: v.len(),
        pi_degree: 2 * v.len(),
        verified_power: verified,
        status: if verified >= k {
            CandidateStatus::ConfirmedAtK
        } else {
            CandidateStatus::Rejected
        },
    }
}

/// All primitive words of length at most `d_max`, deduplicated by canonical
/// rotation, whose `k`-th power is a factor of the indexed word. Only factors
/// of the word can qualify, so the enumeration walks the factor index.
pub fn enumerate_cogk1_candidates(
    index: &FactorIndex,
    k: u64,
    d_max: usize,
) -> Result<Vec<PrimeCandidate>> {
    if k < 2 {
        return Err(Error::IndexRange("power threshold must be >= 2".into()));
    }
    let needed = d_max as u64 * k;
    if needed > index.n_trust() as u64 {
        return Err(Error::FactorHorizon {
            requested: needed,
            trusted: index.n_trust() as u64,
        });
    }
    let mut best: BTreeMap<FiniteWord, u64> = BTreeMap::new();
    for d in 1..=d_max {
        for v in index.factors_of_length(d) {
            if !is_primitive(&v) {
                continue;
            }
            if !index.contains(&v.power(k as usize)) {
                continue;
            }
            let canonical = canonical_rotation(&v);
            let verified = largest_power(index, &v);
            best.entry(canonical)
                .and_modify(|b| *b = (*b).max(verified))
                .or_insert(verified);
        }
    }
    let mut out: Vec<PrimeCandidate> = best
        .into_iter()
        .map(|(canonical_word, verified_power)| PrimeCandidate {
            period: canonical_word.len(),
            pi_degree: 2 * canonical_word.len(),
            canonical_word,
            verified_power,
            status: CandidateStatus::ConfirmedAtK,
        })
        .collect();
    out.sort_by(|a, b| {
        (a.period, a.canonical_word.letters()).cmp(&(b.period, b.canonical_word.letters()))
    });
    Ok(out)
}

/// PI-degree data of one anchor's periodic quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeRow {
    pub j: usize,
    pub anchor_len: usize,
    /// Minimal period of the infinite repetition of the anchor.
    pub d_j: usize,
    pub pi_degree: usize,
    /// Running maximum of `d_i` for `i <= j`.
    pub envelope: usize,
}

/// For each anchor: the minimal period of its infinite repetition and the
/// PI degree `2 d_j` of the quotient, after confirming the `k`-th power of
/// the anchor is a factor of the indexed word. The minimal period of the
/// repetition is computed on the doubled anchor, which is exact; the anchor
/// alone can show a shorter apparent period that does not extend.
pub fn matrix_image_degrees(
    anchors: &[FiniteWord],
    index: &FactorIndex,
    k: u64,
) -> Result<Vec<DegreeRow>> {
    let mut rows = Vec::with_capacity(anchors.len());
    let mut envelope = 0usize;
    for (j0, w) in anchors.iter().enumerate() {
        if !index.contains(&w.power(k as usize)) {
            return Err(Error::UnverifiedPower {
                word: format!("{w:?}"),
                power: k,
            });
        }
        let d_j = minimal_period(&w.concat(w));
        envelope = envelope.max(d_j);
        rows.push(DegreeRow {
            j: j0 + 1,
            anchor_len: w.len(),
            d_j,
            pi_degree: 2 * d_j,
            envelope,
        });
    }
    Ok(rows)
}

/// Number of strict increases of the envelope along the rows.
pub fn envelope_increases(rows: &[DegreeRow]) -> usize {
    rows.windows(2)
        .filter(|w| w[1].envelope > w[0].envelope)
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sturmian::fibonacci_stream;
    use crate::word::{Alphabet, WordStream};
    use proptest::prelude::*;

    fn ab() -> Alphabet {
        Alphabet::binary()
    }

    fn w(text: &str) -> FiniteWord {
        ab().word(text).unwrap()
    }

    #[test]
    fn products_in_period_two_quotient() {
        let index = FactorIndex::index_periodic(&w("ab"), 12).unwrap();
        let ab_el = AlgebraElement::from_word(w("ab"));
        let ba_el = AlgebraElement::from_word(w("ba"));
        assert!(ab_el.mul(&ba_el, &index).unwrap().is_zero());

        let q = build_periodic_quotient(&w("ab")).unwrap();
        let z = q.central_sum();
        let a = AlgebraElement::from_word(w("a"));
        let za = z.mul(&a, &index).unwrap();
        let az = a.mul(&z, &index).unwrap();
        assert_eq!(za, az);
        assert_eq!(za, AlgebraElement::from_word(w("aba")));

        let x = AlgebraElement::from_terms([
            (w("ab"), BigRational::new(1.into(), 2.into())),
            (w("ba"), BigRational::new((-2).into(), 3.into())),
        ]);
        assert_eq!(AlgebraElement::one().mul(&x, &index).unwrap(), x);
        assert_eq!(x.mul(&AlgebraElement::one(), &index).unwrap(), x);
    }

    #[test]
    fn multiplication_respects_horizon() {
        let index = FactorIndex::index_periodic(&w("ab"), 4).unwrap();
        let long = AlgebraElement::from_word(w("ababa"));
        assert!(matches!(
            long.mul(&AlgebraElement::from_word(w("a")), &index),
            Err(Error::FactorHorizon { .. })
        ));
    }

    #[test]
    fn quotient_construction() {
        let q = build_periodic_quotient(&w("aab")).unwrap();
        assert_eq!(q.d(), 3);
        assert_eq!(q.pi_degree(), 6);
        let rots: Vec<FiniteWord> = q.rotations().to_vec();
        assert_eq!(rots, vec![w("aab"), w("aba"), w("baa")]);

        let q = build_periodic_quotient(&w("abab")).unwrap();
        assert_eq!(q.period(), &w("ab"));
        assert_eq!(q.d(), 2);
        assert_eq!(q.pi_degree(), 4);

        let q = build_periodic_quotient(&w("a")).unwrap();
        assert_eq!(q.d(), 1);
        assert_eq!(q.pi_degree(), 2);
    }

    #[test]
    fn quotient_identities_hold() {
        for y in ["aab", "a", "ab", "aabab"] {
            let q = build_periodic_quotient(&w(y)).unwrap();
            let report = verify_quotient_identities(&q, 30.max(2 * q.d())).unwrap();
            assert!(report.all_pass, "{y}: {report:?}");
            assert!(report.words_checked > 0);
        }
        let q = build_periodic_quotient(&w("aab")).unwrap();
        assert!(verify_quotient_identities(&q, 5).is_err());
    }

    #[test]
    fn perturbed_rotation_breaks_orthogonality() {
        let mut q = build_periodic_quotient(&w("aab")).unwrap();
        q.rotations[1] = q.rotations[0].clone();
        let report = verify_quotient_identities(&q, 30).unwrap();
        assert!(!report.all_pass);
        assert!(!report.orthogonal_ok);
        assert!(report.orthogonal_witness.is_some());
    }

    #[test]
    fn canonical_rotation_examples() {
        assert_eq!(canonical_rotation(&w("aba")), w("aab"));
        assert_eq!(canonical_rotation(&w("ba")), w("ab"));
        assert_eq!(canonical_rotation(&w("a")), w("a"));
        assert_eq!(canonical_rotation(&w("bab")), w("abb"));
    }

    fn brute_least_rotation(v: &FiniteWord) -> FiniteWord {
        let doubled = v.concat(v);
        (0..v.len())
            .map(|r| FiniteWord::new(doubled.letters()[r..r + v.len()].to_vec()))
            .min()
            .unwrap()
    }

    #[test]
    fn canonical_rotation_exhaustive_small() {
        for len in 1..=12usize {
            for bits in 0..(1u32 << len) {
                let letters: Vec<u8> = (0..len).map(|i| ((bits >> i) & 1) as u8).collect();
                let v = FiniteWord::new(letters);
                assert_eq!(canonical_rotation(&v), brute_least_rotation(&v), "{v:?}");
            }
        }
    }

    #[test]
    fn candidates_in_periodic_word() {
        let index = FactorIndex::index_periodic(&w("ab"), 40).unwrap();
        let candidates = enumerate_cogk1_candidates(&index, 10, 4).unwrap();
        assert_eq!(candidates.len(), 1);
        assert_eq!(candidates[0].canonical_word, w("ab"));
        assert_eq!(candidates[0].status, CandidateStatus::ConfirmedAtK);
        assert!(candidates[0].verified_power >= 10);

        assert!(enumerate_cogk1_candidates(&index, 10, 5).is_err());
        assert!(enumerate_cogk1_candidates(&index, 1, 2).is_err());
    }

    #[test]
    fn fourth_power_free_base_has_no_candidates() {
        let f = fibonacci_stream();
        let index = FactorIndex::build(&f.prefix(20_000).unwrap()).unwrap();
        let candidates = enumerate_cogk1_candidates(&index, 4, 12).unwrap();
        assert!(candidates.is_empty(), "{candidates:?}");
    }

    #[test]
    fn rejected_candidate_is_reported() {
        let f = fibonacci_stream();
        let index = FactorIndex::build(&f.prefix(1000).unwrap()).unwrap();
        let c = check_candidate(&index, &w("aba"), 4);
        assert_eq!(c.status, CandidateStatus::Rejected);
        assert!(c.verified_power < 4);
    }

    #[test]
    fn degree_rows_on_fibonacci_anchors() {
        let f = fibonacci_stream();
        let anchors = crate::construction::select_anchors(&f, 3, 2).unwrap();
        // powers of the anchors are not factors of the base itself
        let base_index = FactorIndex::build(&f.prefix(10_000).unwrap()).unwrap();
        assert!(matches!(
            matrix_image_degrees(&anchors, &base_index, 4),
            Err(Error::UnverifiedPower { .. })
        ));

        // index a word that does contain the powers
        let mut letters = Vec::new();
        for a in &anchors {
            letters.extend_from_slice(a.power(5).letters());
        }
        let index = FactorIndex::build(&FiniteWord::new(letters)).unwrap();
        let rows = matrix_image_degrees(&anchors, &index, 4).unwrap();
        assert_eq!(rows[0].d_j, 1);
        assert_eq!(rows[0].pi_degree, 2);
        assert_eq!(rows[1].d_j, 3);
        assert_eq!(rows[1].pi_degree, 6);
        assert_eq!(rows[2].d_j, 3, "the third anchor is a square of the second");
        assert_eq!(rows[2].envelope, 3);
    }

    proptest! {
        #[test]
        fn canonical_is_rotation_invariant(letters in prop::collection::vec(0u8..3, 1..40),
                                           r in 0usize..40) {
            let v = FiniteWord::new(letters);
            let r = r % v.len();
            let doubled = v.concat(&v);
            let rotated = FiniteWord::new(doubled.letters()[r..r + v.len()].to_vec());
            prop_assert_eq!(canonical_rotation(&v), canonical_rotation(&rotated));
        }

        #[test]
        fn basis_multiplication_is_associative(seed in prop::collection::vec(0u8..2, 3..9)) {
            let index = FactorIndex::index_periodic(&w("aab"), 64).unwrap();
            let n = seed.len() / 3;
            let u = AlgebraElement::from_word(FiniteWord::new(seed[..n].to_vec()));
            let v = AlgebraElement::from_word(FiniteWord::new(seed[n..2 * n].to_vec()));
            let x = AlgebraElement::from_word(FiniteWord::new(seed[2 * n..].to_vec()));
            let lhs = u.mul(&v, &index).unwrap().mul(&x, &index).unwrap();
            let rhs = u.mul(&v.mul(&x, &index).unwrap(), &index).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
