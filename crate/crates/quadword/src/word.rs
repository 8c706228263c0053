//! Alphabets, finite words, and right-infinite word streams.
//!
//! Letters are stored as small integer indices everywhere; the symbol table
//! lives only in [`Alphabet`]. Public slicing is 1-based inclusive to match
//! the usual `W(a,b)` notation for subwords; everything internal is 0-based.

use std::fmt;
use std::sync::LazyLock;

use crate::error::{Error, Result};

/// Index of a letter within its alphabet.
pub type Letter = u8;

/// Maximum supported alphabet size.
pub const MAX_ALPHABET: usize = 26;

/// Global cap on materialized prefixes, overridable via `QUADWORD_MAX_PREFIX`.
pub fn prefix_cap() -> u64 {
    static CAP: LazyLock<u64> = LazyLock::new(|| {
        std::env::var("QUADWORD_MAX_PREFIX")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(100_000_000)
    });
    *CAP
}

/// An ordered alphabet of 2..=26 distinct symbols drawn from `a..z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<u8>,
}

impl Alphabet {
    pub fn new(symbols: &str) -> Result<Self> {
        let bytes: Vec<u8> = symbols.bytes().collect();
        if bytes.len() < 2 || bytes.len() > MAX_ALPHABET {
            return Err(Error::InvalidAlphabet(format!(
                "size {} outside 2..=26",
                bytes.len()
            )));
        }
        let mut seen = [false; 256];
        for &b in &bytes {
            if !b.is_ascii_lowercase() {
                return Err(Error::InvalidAlphabet(format!(
                    "symbol {:?} is not in 'a'..'z'",
                    b as char
                )));
            }
            if seen[b as usize] {
                return Err(Error::InvalidAlphabet(format!(
                    "duplicate symbol {:?}",
                    b as char
                )));
            }
            seen[b as usize] = true;
        }
        Ok(Alphabet { symbols: bytes })
    }

    /// The two-letter alphabet `{a, b}` used by every word in the pipeline.
    pub fn binary() -> Self {
        Alphabet {
            symbols: vec![b'a', b'b'],
        }
    }

    pub fn size(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbol(&self, letter: Letter) -> char {
        self.symbols[letter as usize] as char
    }

    pub fn index_of(&self, ch: char) -> Option<Letter> {
        self.symbols
            .iter()
            .position(|&s| s as char == ch)
            .map(|i| i as Letter)
    }

    /// Parse a word over this alphabet from its text form.
    pub fn word(&self, text: &str) -> Result<FiniteWord> {
        let mut letters = Vec::with_capacity(text.len());
        for ch in text.chars() {
            match self.index_of(ch) {
                Some(l) => letters.push(l),
                None => {
                    return Err(Error::InvalidWord(format!(
                        "symbol {ch:?} is not in the alphabet"
                    )))
                }
            }
        }
        Ok(FiniteWord::new(letters))
    }

    /// Render a word over this alphabet as text.
    pub fn text(&self, word: &FiniteWord) -> String {
        word.letters()
            .iter()
            .map(|&l| self.symbol(l))
            .collect()
    }
}

/// A finite word stored as a sequence of alphabet indices. The empty word is
/// permitted and acts as the multiplicative unit in the algebra modules.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FiniteWord {
    letters: Vec<Letter>,
}

impl FiniteWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        FiniteWord { letters }
    }

    pub fn empty() -> Self {
        FiniteWord::default()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// `w` concatenated `k` times; `power(w, 0)` is the empty word.
    pub fn power(&self, k: usize) -> FiniteWord {
        let mut letters = Vec::with_capacity(self.len() * k);
        for _ in 0..k {
            letters.extend_from_slice(&self.letters);
        }
        FiniteWord::new(letters)
    }

    /// Letters from position `a` through `b` inclusive, 1-based.
    pub fn subword(&self, a: usize, b: usize) -> Result<FiniteWord> {
        if a < 1 || a > b || b > self.len() {
            return Err(Error::Range {
                from: a,
                to: b,
                len: self.len(),
            });
        }
        Ok(FiniteWord::new(self.letters[a - 1..b].to_vec()))
    }

    pub fn concat(&self, other: &FiniteWord) -> FiniteWord {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        FiniteWord::new(letters)
    }

    pub fn starts_with(&self, other: &FiniteWord) -> bool {
        self.letters.starts_with(&other.letters)
    }

    pub fn ends_with(&self, other: &FiniteWord) -> bool {
        self.letters.ends_with(&other.letters)
    }
}

impl fmt::Debug for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Debug rendering assumes the standard a..z symbol order, which every
        // alphabet in this crate uses.
        write!(f, "\"")?;
        for &l in &self.letters {
            write!(f, "{}", (b'a' + l) as char)?;
        }
        write!(f, "\"")
    }
}

/// A deterministic right-infinite word, addressable by position.
///
/// Implementations must be immutable after construction: repeated queries at
/// the same position return the same letter, and `prefix(l)` agrees with
/// `prefix(l')` on the first `l` positions for every `l' >= l`. Memoization,
/// if any, is internally synchronized.
pub trait WordStream: Send + Sync {
    fn alphabet(&self) -> &Alphabet;

    /// The letter at a 0-based position. Fails only when a stream cannot
    /// certify the letter (truncated slope) or a resource cap is hit.
    fn letter_at(&self, pos: u64) -> Result<Letter>;

    /// Construction parameters sufficient to reproduce the stream.
    fn descriptor(&self) -> String;

    /// The first `len` letters of the stream.
    fn prefix(&self, len: u64) -> Result<FiniteWord> {
        check_prefix_len(len)?;
        let mut letters = Vec::with_capacity(len as usize);
        for pos in 0..len {
            letters.push(self.letter_at(pos)?);
        }
        Ok(FiniteWord::new(letters))
    }
}

pub(crate) fn check_prefix_len(len: u64) -> Result<()> {
    let cap = prefix_cap();
    if len > cap {
        return Err(Error::PrefixCapExceeded {
            requested: len,
            cap,
        });
    }
    Ok(())
}

/// The purely periodic stream `w w w ...` for a nonempty finite word `w`.
#[derive(Debug, Clone)]
pub struct PeriodicStream {
    alphabet: Alphabet,
    period: FiniteWord,
}

impl PeriodicStream {
    pub fn new(alphabet: Alphabet, period: FiniteWord) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidWord("empty period".into()));
        }
        if let Some(&l) = period.letters().iter().find(|&&l| (l as usize) >= alphabet.size()) {
            return Err(Error::InvalidWord(format!(
                "letter index {l} outside alphabet of size {}",
                alphabet.size()
            )));
        }
        Ok(PeriodicStream { alphabet, period })
    }

    /// The constant stream repeating a single letter.
    pub fn constant(alphabet: Alphabet, letter: Letter) -> Result<Self> {
        PeriodicStream::new(alphabet, FiniteWord::new(vec![letter]))
    }

    pub fn period(&self) -> &FiniteWord {
        &self.period
    }
}

impl WordStream for PeriodicStream {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn letter_at(&self, pos: u64) -> Result<Letter> {
        let idx = (pos % self.period.len() as u64) as usize;
        Ok(self.period.letters()[idx])
    }

    fn descriptor(&self) -> String {
        format!("periodic:{}", self.alphabet.text(&self.period))
    }

    fn prefix(&self, len: u64) -> Result<FiniteWord> {
        check_prefix_len(len)?;
        let len = len as usize;
        let mut letters = Vec::with_capacity(len);
        while letters.len() < len {
            let take = (len - letters.len()).min(self.period.len());
            letters.extend_from_slice(&self.period.letters()[..take]);
        }
        Ok(FiniteWord::new(letters))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ab() -> Alphabet {
        Alphabet::binary()
    }

    #[test]
    fn alphabet_rejects_bad_inputs() {
        assert!(Alphabet::new("a").is_err());
        assert!(Alphabet::new("aab").is_err());
        assert!(Alphabet::new("aB").is_err());
        assert!(Alphabet::new("abcdefghijklmnopqrstuvwxyz").is_ok());
    }

    #[test]
    fn power_examples() {
        let w = ab().word("ab").unwrap();
        assert_eq!(ab().text(&w.power(3)), "ababab");
        let a = ab().word("a").unwrap();
        assert!(a.power(0).is_empty());
        let aba = ab().word("aba").unwrap();
        assert_eq!(ab().text(&aba.power(2)), "abaaba");
    }

    #[test]
    fn subword_examples() {
        let w = ab().word("abaab").unwrap();
        assert_eq!(ab().text(&w.subword(2, 4).unwrap()), "baa");
        let abc = Alphabet::new("abc").unwrap();
        let v = abc.word("abc").unwrap();
        assert_eq!(abc.text(&v.subword(1, 3).unwrap()), "abc");
        assert_eq!(ab().text(&w.subword(3, 3).unwrap()), "a");
        assert!(w.subword(0, 2).is_err());
        assert!(w.subword(4, 3).is_err());
        assert!(w.subword(2, 6).is_err());
    }

    #[test]
    fn periodic_and_constant_prefixes() {
        let p = PeriodicStream::new(ab(), ab().word("ab").unwrap()).unwrap();
        assert_eq!(ab().text(&p.prefix(5).unwrap()), "ababa");
        let c = PeriodicStream::constant(ab(), 0).unwrap();
        assert_eq!(ab().text(&c.prefix(3).unwrap()), "aaa");
    }

    #[test]
    fn prefix_consistency_on_periodic() {
        let p = PeriodicStream::new(ab(), ab().word("aab").unwrap()).unwrap();
        let long = p.prefix(50).unwrap();
        for l in [1u64, 7, 20, 49] {
            let short = p.prefix(l).unwrap();
            assert_eq!(&long.letters()[..l as usize], short.letters());
        }
    }

    proptest! {
        #[test]
        fn power_is_additive(letters in prop::collection::vec(0u8..2, 0..32),
                             j in 0usize..=16, k in 0usize..=16) {
            let w = FiniteWord::new(letters);
            let lhs = w.power(j + k);
            let rhs = w.power(j).concat(&w.power(k));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn full_subword_is_identity(letters in prop::collection::vec(0u8..3, 1..64)) {
            let w = FiniteWord::new(letters);
            prop_assert_eq!(w.subword(1, w.len()).unwrap(), w);
        }
    }
}
