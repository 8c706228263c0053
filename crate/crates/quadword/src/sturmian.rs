//! Sturmian word generation with exact arithmetic, and verification of the
//! defining complexity property `p(n) = n + 1`.
//!
//! A slope is given by the partial quotients of a continued fraction for an
//! irrational in (0, 1). Letters are computed from the last two convergents
//! by integer floors only; a position is answered only when every floor
//! involved agrees at both bracketing convergents, which pins the letter for
//! every slope strictly between them. Beyond that point the stream reports a
//! horizon error instead of guessing.

use std::sync::RwLock;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::factor_index::FactorIndex;
use crate::word::{check_prefix_len, Alphabet, FiniteWord, Letter, WordStream};

/// Truncated continued-fraction expansion `[0; a_1, a_2, ...]` of a slope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeSpec {
    quotients: Vec<u64>,
}

impl SlopeSpec {
    pub fn new(quotients: &[u64]) -> Result<Self> {
        if quotients.len() < 2 {
            return Err(Error::InvalidSlope(format!(
                "depth {} < 2: a single convergent is a rational slope and yields a periodic word",
                quotients.len()
            )));
        }
        if quotients.contains(&0) {
            return Err(Error::InvalidSlope("partial quotients must be >= 1".into()));
        }
        let spec = SlopeSpec {
            quotients: quotients.to_vec(),
        };
        let (p, q) = spec.convergent(quotients.len())?;
        if !(p > 0 && p < q && p.gcd(&q) == 1) {
            return Err(Error::InvalidSlope(format!(
                "final convergent {p}/{q} is not a reduced fraction in (0, 1)"
            )));
        }
        Ok(spec)
    }

    pub fn quotients(&self) -> &[u64] {
        &self.quotients
    }

    pub fn depth(&self) -> usize {
        self.quotients.len()
    }

    /// The k-th convergent `p_k / q_k` (k >= 1).
    fn convergent(&self, k: usize) -> Result<(u128, u128)> {
        let (mut p0, mut q0) = (1u128, 0u128);
        let (mut p1, mut q1) = (0u128, 1u128);
        for &a in &self.quotients[..k] {
            let a = a as u128;
            let p2 = a
                .checked_mul(p1)
                .and_then(|x| x.checked_add(p0))
                .ok_or(Error::Overflow("slope convergent"))?;
            let q2 = a
                .checked_mul(q1)
                .and_then(|x| x.checked_add(q0))
                .ok_or(Error::Overflow("slope convergent"))?;
            if p2 >= 1 << 62 || q2 >= 1 << 62 {
                return Err(Error::Overflow("slope convergent"));
            }
            (p0, q0) = (p1, q1);
            (p1, q1) = (p2, q2);
        }
        Ok((p1, q1))
    }

    /// The last two convergents, which bracket every deeper slope.
    pub fn bracketing(&self) -> ((u128, u128), (u128, u128)) {
        let a = self.convergent(self.depth() - 1).expect("validated");
        let b = self.convergent(self.depth()).expect("validated");
        (a, b)
    }
}

/// Mechanical word stream: letter `b` at position `n` exactly when
/// `floor((n+1) a) - floor(n a) = 1`, with exact integer arithmetic.
#[derive(Debug)]
pub struct MechanicalStream {
    alphabet: Alphabet,
    p1: u128,
    q1: u128,
    p2: u128,
    q2: u128,
    descriptor: String,
}

pub fn mechanical_stream(slope: &SlopeSpec) -> MechanicalStream {
    let ((p1, q1), (p2, q2)) = slope.bracketing();
    MechanicalStream {
        alphabet: Alphabet::binary(),
        p1,
        q1,
        p2,
        q2,
        descriptor: format!(
            "mechanical[{}]",
            slope
                .quotients()
                .iter()
                .map(|a| a.to_string())
                .collect::<Vec<_>>()
                .join(",")
        ),
    }
}

impl MechanicalStream {
    /// Every position strictly below this is guaranteed answerable. Queries
    /// are still checked exactly, so positions beyond it may also succeed.
    pub fn guaranteed_horizon(&self) -> u64 {
        (self.q1.min(self.q2) as u64).saturating_sub(2)
    }

    fn floor_pair(&self, m: u128) -> Result<u128> {
        let f1 = m * self.p1 / self.q1;
        let f2 = m * self.p2 / self.q2;
        if f1 != f2 {
            return Err(Error::HorizonExceeded {
                position: m.saturating_sub(1) as u64,
            });
        }
        Ok(f1)
    }
}

impl WordStream for MechanicalStream {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn letter_at(&self, pos: u64) -> Result<Letter> {
        let n = pos as u128;
        let lo = self.floor_pair(n)?;
        let hi = self.floor_pair(n + 1)?;
        Ok((hi - lo) as Letter)
    }

    fn descriptor(&self) -> String {
        self.descriptor.clone()
    }
}

struct FibBuf {
    letters: Vec<Letter>,
    prev_len: usize,
}

/// The fixed point of the substitution `a -> ab`, `b -> a`, starting from
/// `a`. The default base word for the whole pipeline.
pub struct FibonacciStream {
    alphabet: Alphabet,
    buf: RwLock<FibBuf>,
}

pub fn fibonacci_stream() -> FibonacciStream {
    FibonacciStream {
        alphabet: Alphabet::binary(),
        buf: RwLock::new(FibBuf {
            letters: vec![0, 1],
            prev_len: 1,
        }),
    }
}

impl FibonacciStream {
    fn ensure(&self, len: usize) {
        {
            let buf = self.buf.read().unwrap();
            if buf.letters.len() >= len {
                return;
            }
        }
        let mut buf = self.buf.write().unwrap();
        while buf.letters.len() < len {
            let prev = buf.prev_len;
            buf.prev_len = buf.letters.len();
            buf.letters.extend_from_within(..prev);
        }
    }
}

impl WordStream for FibonacciStream {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn letter_at(&self, pos: u64) -> Result<Letter> {
        check_prefix_len(pos + 1)?;
        self.ensure(pos as usize + 1);
        Ok(self.buf.read().unwrap().letters[pos as usize])
    }

    fn descriptor(&self) -> String {
        "fibonacci".into()
    }

    fn prefix(&self, len: u64) -> Result<FiniteWord> {
        check_prefix_len(len)?;
        self.ensure(len as usize);
        Ok(FiniteWord::new(
            self.buf.read().unwrap().letters[..len as usize].to_vec(),
        ))
    }
}

/// Outcome of checking `p(n) = n + 1` for `1 <= n <= n_max` on a prefix.
#[derive(Debug, Clone)]
pub struct SturmianReport {
    pub ok: bool,
    pub n_max: usize,
    pub n_trust: usize,
    /// First `n` with `p(n) != n + 1`, with the observed count.
    pub first_failure: Option<(usize, u64)>,
    /// Set when the prefix could not certify counts all the way to `n_max`.
    pub untrusted_from: Option<usize>,
}

/// Check the Sturmian complexity property on `prefix(len)` of a stream.
pub fn verify_sturmian(stream: &dyn WordStream, len: u64, n_max: usize) -> Result<SturmianReport> {
    let needed = 3 * n_max as u64;
    if len < needed {
        return Err(Error::UntrustedHorizon {
            needed,
            available: len,
        });
    }
    let index = FactorIndex::index_stream(stream, len)?;
    let profile = index.profile(n_max);
    let mut first_failure = None;
    for n in 1..=n_max.min(profile.n_max()) {
        let p = profile.p(n);
        if p != n as u64 + 1 {
            first_failure = Some((n, p));
            break;
        }
    }
    let untrusted_from = if profile.n_trust() < n_max {
        Some(profile.n_trust() + 1)
    } else {
        None
    };
    Ok(SturmianReport {
        ok: first_failure.is_none() && untrusted_from.is_none(),
        n_max,
        n_trust: profile.n_trust(),
        first_failure,
        untrusted_from,
    })
}
