//! Cardinal dimensions and eventually-constant sequences of them.
//!
//! Only finite cardinals and the alephs `ℵ_k` with integer index `k` are
//! representable. Sums follow ZFC arithmetic: infinite cardinals absorb
//! anything not larger than themselves, and a countable sum is computed
//! from its supremum and from whether infinitely many terms are nonzero.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CardinalError {
    #[error("finite cardinal arithmetic overflowed: {0} {1} {2}")]
    Overflow(u64, &'static str, u64),
}

/// A Hilbert-space dimension: a finite number or `ℵ_k`.
///
/// The derived order is the cardinal order because every `Finite` variant
/// sorts before every `Aleph` variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Cardinal {
    #[serde(rename = "fin")]
    Finite(u64),
    #[serde(rename = "aleph")]
    Aleph(u32),
}

pub use Cardinal::{Aleph, Finite};

pub const ZERO: Cardinal = Finite(0);
pub const ALEPH_0: Cardinal = Aleph(0);

impl Cardinal {
    pub fn is_finite(self) -> bool {
        matches!(self, Finite(_))
    }

    pub fn is_infinite(self) -> bool {
        !self.is_finite()
    }

    pub fn is_zero(self) -> bool {
        self == ZERO
    }
}

impl fmt::Display for Cardinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finite(n) => write!(f, "{n}"),
            Aleph(k) => write!(f, "ℵ_{k}"),
        }
    }
}

/// `a + b`. Overflow of the finite case is an error, never a silent `ℵ_0`.
pub fn card_add(a: Cardinal, b: Cardinal) -> Result<Cardinal, CardinalError> {
    match (a, b) {
        (Finite(x), Finite(y)) => x
            .checked_add(y)
            .map(Finite)
            .ok_or(CardinalError::Overflow(x, "+", y)),
        _ => Ok(a.max(b)),
    }
}

/// `a · b`. Zero annihilates; otherwise an infinite factor gives the max.
pub fn card_mul(a: Cardinal, b: Cardinal) -> Result<Cardinal, CardinalError> {
    match (a, b) {
        (Finite(x), Finite(y)) => x
            .checked_mul(y)
            .map(Finite)
            .ok_or(CardinalError::Overflow(x, "*", y)),
        _ if a.is_zero() || b.is_zero() => Ok(ZERO),
        _ => Ok(a.max(b)),
    }
}

pub fn card_cmp(a: Cardinal, b: Cardinal) -> Ordering {
    a.cmp(&b)
}

/// Entry `n` (1-based) is `prefix[n-1]` while `n <= prefix.len()`, and
/// `tail` afterwards. Always stored in canonical form: the last prefix
/// entry differs from the tail.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "RawDimSeq")]
pub struct DimSeq {
    prefix: Vec<Cardinal>,
    tail: Cardinal,
}

#[derive(Deserialize)]
struct RawDimSeq {
    prefix: Vec<Cardinal>,
    tail: Cardinal,
}

impl From<RawDimSeq> for DimSeq {
    fn from(raw: RawDimSeq) -> Self {
        DimSeq::new(raw.prefix, raw.tail)
    }
}

impl DimSeq {
    pub fn new(mut prefix: Vec<Cardinal>, tail: Cardinal) -> Self {
        while prefix.last() == Some(&tail) {
            prefix.pop();
        }
        DimSeq { prefix, tail }
    }

    /// The constant sequence `c, c, c, …`.
    pub fn constant(c: Cardinal) -> Self {
        DimSeq { prefix: Vec::new(), tail: c }
    }

    /// Finitely many entries followed by zeros.
    pub fn finite(prefix: Vec<Cardinal>) -> Self {
        DimSeq::new(prefix, ZERO)
    }

    pub fn prefix(&self) -> &[Cardinal] {
        &self.prefix
    }

    pub fn tail(&self) -> Cardinal {
        self.tail
    }

    /// # Panics
    /// If `n == 0`; entries are indexed from 1.
    pub fn entry(&self, n: usize) -> Cardinal {
        assert!(n >= 1, "DimSeq entries are 1-based");
        self.prefix.get(n - 1).copied().unwrap_or(self.tail)
    }

    /// The first `len` entries, reading into the tail when needed.
    pub fn materialize(&self, len: usize) -> Vec<Cardinal> {
        (1..=len).map(|n| self.entry(n)).collect()
    }

    /// The sequence of entries `n+1, n+2, …`.
    pub fn shifted(&self, n: usize) -> DimSeq {
        let prefix = self.prefix.iter().skip(n).copied().collect();
        DimSeq::new(prefix, self.tail)
    }

    /// Apply `f` entrywise and re-canonicalize.
    pub fn try_map<E>(&self, mut f: impl FnMut(Cardinal) -> Result<Cardinal, E>) -> Result<DimSeq, E> {
        let prefix = self.prefix.iter().map(|&c| f(c)).collect::<Result<Vec<_>, E>>()?;
        Ok(DimSeq::new(prefix, f(self.tail)?))
    }

    /// Largest entry anywhere in the sequence.
    pub fn sup(&self) -> Cardinal {
        self.prefix.iter().copied().fold(self.tail, Cardinal::max)
    }

    pub fn iter_prefix(&self) -> impl Iterator<Item = Cardinal> + '_ {
        self.prefix.iter().copied()
    }
}

/// The countable sum `Σ_n s(n)`.
pub fn card_series_sum(s: &DimSeq) -> Result<Cardinal, CardinalError> {
    match s.tail {
        Finite(0) => s.iter_prefix().try_fold(ZERO, card_add),
        // Infinitely many nonzero terms: at least ℵ_0, and the sum of
        // countably many cardinals bounded by an infinite sup is that sup.
        _ => Ok(s.sup().max(ALEPH_0)),
    }
}
