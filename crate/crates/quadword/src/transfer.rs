//! Word counting for monomial presentations: an Aho-Corasick automaton over
//! the forbidden set, complemented to count the words avoiding every
//! forbidden factor. The count at degree `n` is the dimension of the
//! degree-`n` component of the presented algebra, so the sweep is the
//! Hilbert function.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::word::{Alphabet, FiniteWord};

/// A monomial presentation: the relations are the words containing some
/// forbidden factor. Normalized to an antichain (no forbidden word is a
/// factor of another) at construction.
#[derive(Debug, Clone)]
pub struct ForbiddenPresentation {
    alphabet: Alphabet,
    forbidden: Vec<FiniteWord>,
}

fn is_factor(needle: &FiniteWord, hay: &FiniteWord) -> bool {
    if needle.len() > hay.len() {
        return false;
    }
    hay.letters()
        .windows(needle.len())
        .any(|w| w == needle.letters())
}

impl ForbiddenPresentation {
    pub fn new(alphabet: Alphabet, forbidden: Vec<FiniteWord>) -> Result<Self> {
        for w in &forbidden {
            if w.is_empty() {
                return Err(Error::InvalidPresentation(
                    "the empty word cannot be a relation".into(),
                ));
            }
            if w.letters().iter().any(|&l| l as usize >= alphabet.size()) {
                return Err(Error::InvalidPresentation(format!(
                    "forbidden word {w:?} has letters outside the alphabet"
                )));
            }
        }
        let mut sorted = forbidden;
        sorted.sort_by(|a, b| (a.len(), a.letters()).cmp(&(b.len(), b.letters())));
        sorted.dedup();
        let reduced: Vec<FiniteWord> = sorted
            .iter()
            .filter(|w| {
                !sorted
                    .iter()
                    .any(|u| u.len() < w.len() && is_factor(u, w))
            })
            .cloned()
            .collect();
        Ok(ForbiddenPresentation {
            alphabet,
            forbidden: reduced,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn forbidden(&self) -> &[FiniteWord] {
        &self.forbidden
    }
}

/// Goto-completed Aho-Corasick automaton with dead (matching) states marked.
struct Automaton {
    next: Vec<u32>, // flat, state * asize + letter
    dead: Vec<bool>,
    asize: usize,
}

const MISSING: u32 = u32::MAX;

fn automaton(pres: &ForbiddenPresentation) -> Automaton {
    let asize = pres.alphabet.size();
    let mut next: Vec<u32> = vec![MISSING; asize];
    let mut terminal = vec![false];
    for w in &pres.forbidden {
        let mut s = 0usize;
        for &c in w.letters() {
            let slot = s * asize + c as usize;
            if next[slot] == MISSING {
                let id = terminal.len();
                next.extend(std::iter::repeat_n(MISSING, asize));
                terminal.push(false);
                next[slot] = id as u32;
                s = id;
            } else {
                s = next[slot] as usize;
            }
        }
        terminal[s] = true;
    }
    let n_states = terminal.len();
    let mut fail = vec![0u32; n_states];
    let mut dead = terminal.clone();
    let mut queue = std::collections::VecDeque::new();
    for slot in next.iter_mut().take(asize) {
        if *slot == MISSING {
            *slot = 0;
        } else {
            fail[*slot as usize] = 0;
            queue.push_back(*slot);
        }
    }
    while let Some(u) = queue.pop_front() {
        let u = u as usize;
        dead[u] = dead[u] || dead[fail[u] as usize];
        for c in 0..asize {
            let slot = u * asize + c;
            let v = next[slot];
            let via_fail = next[fail[u] as usize * asize + c];
            if v == MISSING {
                next[slot] = via_fail;
            } else {
                fail[v as usize] = via_fail;
                queue.push_back(v);
            }
        }
    }
    Automaton { next, dead, asize }
}

impl Automaton {
    fn state_count(&self) -> usize {
        self.dead.len()
    }

    /// Counting transition matrix over live states: `m[s][t]` is the number
    /// of letters moving `s` to `t`.
    fn live_matrix(&self) -> (Vec<Vec<u64>>, Option<usize>) {
        let live: Vec<usize> = (0..self.state_count()).filter(|&s| !self.dead[s]).collect();
        let pos: Vec<Option<usize>> = {
            let mut p = vec![None; self.state_count()];
            for (i, &s) in live.iter().enumerate() {
                p[s] = Some(i);
            }
            p
        };
        let mut m = vec![vec![0u64; live.len()]; live.len()];
        for (i, &s) in live.iter().enumerate() {
            for c in 0..self.asize {
                let t = self.next[s * self.asize + c] as usize;
                if let Some(j) = pos[t] {
                    m[i][j] += 1;
                }
            }
        }
        (m, pos[0])
    }
}

fn mat_mul(a: &[Vec<BigUint>], b: &[Vec<BigUint>]) -> Vec<Vec<BigUint>> {
    let n = a.len();
    let mut out = vec![vec![BigUint::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

/// Exact count of length-`n` words avoiding every forbidden factor, by
/// integer matrix powering of the live transition matrix.
pub fn transfer_count(pres: &ForbiddenPresentation, n: usize) -> BigUint {
    let auto = automaton(pres);
    let (m, root) = auto.live_matrix();
    let Some(root) = root else {
        return BigUint::zero();
    };
    let dim = m.len();
    let mut result: Vec<Vec<BigUint>> = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| if i == j { BigUint::one() } else { BigUint::zero() })
                .collect()
        })
        .collect();
    let mut base: Vec<Vec<BigUint>> = m
        .iter()
        .map(|row| row.iter().map(|&x| BigUint::from(x)).collect())
        .collect();
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            result = mat_mul(&result, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mat_mul(&base, &base);
        }
    }
    result[root].iter().sum()
}

/// The full sweep `counts[k]` for `0 <= k <= n_max`, advancing a state
/// vector one degree at a time.
pub fn transfer_counts(pres: &ForbiddenPresentation, n_max: usize) -> Vec<BigUint> {
    let auto = automaton(pres);
    let (m, root) = auto.live_matrix();
    let Some(root) = root else {
        return vec![BigUint::zero(); n_max + 1];
    };
    let dim = m.len();
    let mut v = vec![BigUint::zero(); dim];
    v[root] = BigUint::one();
    let mut counts = Vec::with_capacity(n_max + 1);
    counts.push(v.iter().sum());
    for _ in 1..=n_max {
        let mut w = vec![BigUint::zero(); dim];
        for s in 0..dim {
            if v[s].is_zero() {
                continue;
            }
            for t in 0..dim {
                if m[s][t] > 0 {
                    w[t] += &v[s] * m[s][t];
                }
            }
        }
        v = w;
        counts.push(v.iter().sum());
    }
    counts
}

/// Growth classification of a presentation's Hilbert function.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum GrowthClass {
    Exponential { rate: f64 },
    Polynomial { degree: u32 },
    Inconclusive,
}

const RATIO_TOLERANCE: f64 = 1e-6;

/// Classify by geometric-ratio stabilization: the last 10 count ratios lying
/// within 1e-6 of each other above 1 means exponential growth; otherwise a
/// log-log degree fit decides, or the status is inconclusive.
pub fn classify_growth(pres: &ForbiddenPresentation, horizon: usize) -> Result<GrowthClass> {
    let states = automaton(pres).state_count();
    if horizon < 2 * states {
        return Err(Error::InsufficientWindow {
            lo: 2 * states,
            hi: horizon,
            reason: "classification horizon must cover twice the automaton".into(),
        });
    }
    let counts = transfer_counts(pres, horizon);
    if counts[horizon].is_zero() {
        return Ok(GrowthClass::Polynomial { degree: 0 });
    }
    let mut ratios = Vec::new();
    for n in horizon.saturating_sub(10)..horizon {
        let r = BigRational::new(
            counts[n + 1].clone().into(),
            counts[n].clone().into(),
        )
        .to_f64()
        .unwrap_or(f64::NAN);
        ratios.push(r);
    }
    let lo = ratios.iter().copied().fold(f64::MAX, f64::min);
    let hi = ratios.iter().copied().fold(f64::MIN, f64::max);
    if hi - lo <= RATIO_TOLERANCE {
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        if mean > 1.0 + RATIO_TOLERANCE {
            return Ok(GrowthClass::Exponential { rate: mean });
        }
    }
    // ratios at 1 or still drifting: try a polynomial degree fit on the top
    // half of the window
    let points: Vec<(f64, f64)> = (horizon / 2..=horizon)
        .filter(|&n| n >= 1 && !counts[n].is_zero())
        .map(|n| {
            let c = counts[n].to_f64().unwrap_or(f64::MAX);
            ((n as f64).ln(), c.ln())
        })
        .collect();
    if points.len() < 3 {
        return Ok(GrowthClass::Inconclusive);
    }
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    let max_residual = points
        .iter()
        .map(|p| (p.1 - slope * p.0 - intercept).abs())
        .fold(0.0, f64::max);
    let rounded = slope.round();
    if (slope - rounded).abs() <= 0.25 && max_residual <= 0.15 && rounded >= 0.0 {
        Ok(GrowthClass::Polynomial {
            degree: rounded as u32,
        })
    } else {
        Ok(GrowthClass::Inconclusive)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::binary()
    }

    fn pres(forbidden: &[&str]) -> ForbiddenPresentation {
        let words = forbidden.iter().map(|t| ab().word(t).unwrap()).collect();
        ForbiddenPresentation::new(ab(), words).unwrap()
    }

    // Reference count by explicit enumeration with substring scanning.
    fn brute_count(p: &ForbiddenPresentation, n: usize) -> u64 {
        fn rec(p: &ForbiddenPresentation, word: &mut Vec<u8>, remaining: usize) -> u64 {
            if p.forbidden().iter().any(|f| {
                word.len() >= f.len() && word[word.len() - f.len()..] == *f.letters()
            }) {
                return 0;
            }
            if remaining == 0 {
                return 1;
            }
            let mut total = 0;
            for c in 0..p.alphabet().size() as u8 {
                word.push(c);
                total += rec(p, word, remaining - 1);
                word.pop();
            }
            total
        }
        rec(p, &mut Vec::new(), n)
    }

    #[test]
    fn golden_counts() {
        let p = pres(&["aa"]);
        let counts: Vec<u64> = (1..=5)
            .map(|n| transfer_count(&p, n).try_into().unwrap())
            .collect();
        assert_eq!(counts, vec![2, 3, 5, 8, 13]);
    }

    #[test]
    fn free_algebra_counts() {
        let p = pres(&[]);
        assert_eq!(transfer_count(&p, 4), BigUint::from(16u32));
        assert_eq!(transfer_count(&p, 0), BigUint::from(1u32));
    }

    #[test]
    fn constant_words_only() {
        let p = pres(&["ab", "ba"]);
        assert_eq!(transfer_count(&p, 3), BigUint::from(2u32));
    }

    #[test]
    fn sweep_matches_powering() {
        for forbidden in [vec!["aa"], vec!["ab", "bb"], vec!["aab", "ba"]] {
            let p = pres(&forbidden);
            let sweep = transfer_counts(&p, 12);
            for (n, c) in sweep.iter().enumerate() {
                assert_eq!(&transfer_count(&p, n), c);
            }
        }
    }

    #[test]
    fn matches_brute_force() {
        for forbidden in [
            vec!["aa"],
            vec!["ab"],
            vec!["aba"],
            vec!["aa", "bb"],
            vec!["abab", "bb"],
        ] {
            let p = pres(&forbidden);
            for n in 0..=10 {
                let expected = brute_count(&p, n);
                assert_eq!(
                    transfer_count(&p, n),
                    BigUint::from(expected),
                    "forbidden {forbidden:?}, n = {n}"
                );
            }
        }
    }

    #[test]
    fn normalization_reduces_to_antichain() {
        let p = pres(&["aa", "aab", "aa", "baab"]);
        assert_eq!(p.forbidden().len(), 1);
        assert_eq!(p.forbidden()[0], ab().word("aa").unwrap());
        assert!(ForbiddenPresentation::new(ab(), vec![FiniteWord::empty()]).is_err());
    }

    #[test]
    fn classifications() {
        let golden = classify_growth(&pres(&["aa"]), 100).unwrap();
        match golden {
            GrowthClass::Exponential { rate } => assert!((rate - 1.618).abs() < 1e-3),
            other => panic!("expected exponential, got {other:?}"),
        }
        assert_eq!(
            classify_growth(&pres(&["ab"]), 100).unwrap(),
            GrowthClass::Polynomial { degree: 1 }
        );
        assert_eq!(
            classify_growth(&pres(&["ab", "ba", "bb"]), 100).unwrap(),
            GrowthClass::Polynomial { degree: 0 }
        );
        assert!(classify_growth(&pres(&["aa"]), 4).is_err());
    }

    #[test]
    fn all_words_die() {
        let p = pres(&["a", "b"]);
        assert_eq!(transfer_count(&p, 1), BigUint::zero());
        assert_eq!(
            classify_growth(&pres(&["a", "b"]), 100).unwrap(),
            GrowthClass::Polynomial { degree: 0 }
        );
    }
}
