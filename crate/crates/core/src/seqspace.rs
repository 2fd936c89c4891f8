//! The diagonal model `rg diag(2^{-n})` inside `ℓ²(ℕ)`.
//!
//! A vector `x ∈ ℓ²` lies in the range exactly when `Σ 4^n |x_n|² < ∞`.
//! Vectors here have a finite exact head and an optional geometric tail, so
//! membership is decided with exact rational arithmetic.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeqError {
    #[error("zero denominator in {0}")]
    ZeroDenominator(&'static str),
    #[error("tail amplitude must be nonnegative")]
    NegativeAmplitude,
    #[error("tail ratio must lie in [0, 1)")]
    RatioOutOfRange,
    #[error("weight base must exceed 1")]
    BaseTooSmall,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Exact complex rational `re + i·im`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl ComplexRational {
    pub fn real(re: BigRational) -> Self {
        ComplexRational { re, im: BigRational::zero() }
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
}

/// `|x_n| = a · r^n` for every `n` past the head.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeometricTail {
    pub amplitude: BigRational,
    pub ratio: BigRational,
}

impl GeometricTail {
    pub fn new(amplitude: BigRational, ratio: BigRational) -> Result<Self, SeqError> {
        if amplitude.is_negative() {
            return Err(SeqError::NegativeAmplitude);
        }
        if ratio.is_negative() || ratio >= BigRational::one() {
            return Err(SeqError::RatioOutOfRange);
        }
        Ok(GeometricTail { amplitude, ratio })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SeqVectorJson", into = "SeqVectorJson")]
pub struct SeqVector {
    head: Vec<ComplexRational>,
    tail: Option<GeometricTail>,
}

/// Weighted norm `Σ base^n |x_n|²`, exact when finite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extended {
    Finite(BigRational),
    Infinite,
}

impl SeqVector {
    pub fn new(head: Vec<ComplexRational>, tail: Option<GeometricTail>) -> Self {
        SeqVector { head, tail }
    }

    pub fn finite(head: Vec<ComplexRational>) -> Self {
        SeqVector { head, tail: None }
    }

    pub fn head(&self) -> &[ComplexRational] {
        &self.head
    }

    pub fn tail(&self) -> Option<&GeometricTail> {
        self.tail.as_ref()
    }

    /// `|x_n|²` for `n >= 1`.
    pub fn abs_sq(&self, n: usize) -> BigRational {
        assert!(n >= 1, "sequence entries are 1-based");
        if let Some(x) = self.head.get(n - 1) {
            return x.norm_sqr();
        }
        match &self.tail {
            Some(t) => {
                let a = &t.amplitude * pow(&t.ratio, n);
                &a * &a
            }
            None => BigRational::zero(),
        }
    }

    /// Exact `Σ_n base^n |x_n|²`.
    pub fn weighted_norm_sq(&self, base: &BigRational) -> Result<Extended, SeqError> {
        if *base <= BigRational::one() {
            return Err(SeqError::BaseTooSmall);
        }
        let mut sum = BigRational::zero();
        let mut weight = BigRational::one();
        for x in &self.head {
            weight *= base;
            sum += &weight * x.norm_sqr();
        }
        let Some(t) = &self.tail else {
            return Ok(Extended::Finite(sum));
        };
        if t.amplitude.is_zero() {
            return Ok(Extended::Finite(sum));
        }
        // Σ_{n>m} base^n a² r^{2n} = a² q^{m+1} / (1 - q) with q = base·r².
        let q = base * &t.ratio * &t.ratio;
        if q >= BigRational::one() {
            return Ok(Extended::Infinite);
        }
        let m = self.head.len();
        let a2 = &t.amplitude * &t.amplitude;
        sum += a2 * pow(&q, m + 1) / (BigRational::one() - q);
        Ok(Extended::Finite(sum))
    }

    /// Floating partial sums `S_1, …, S_len` of `Σ base^n |x_n|²`. Diagnostic
    /// only; the decision is `canonical_membership`.
    pub fn partial_weighted_sums(&self, base: f64, len: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(len);
        let mut acc = 0.0;
        for n in 1..=len {
            acc += base.powi(n as i32) * self.abs_sq(n).to_f64().unwrap_or(f64::NAN);
            out.push(acc);
        }
        out
    }
}

/// Whether `x ∈ rg diag(2^{-n})`, i.e. `Σ 4^n |x_n|² < ∞`.
pub fn canonical_membership(x: &SeqVector) -> bool {
    match &x.tail {
        None => true,
        Some(t) => {
            // 4 r² < 1
            let half = BigRational::new(BigInt::from(1), BigInt::from(2));
            t.amplitude.is_zero() || t.ratio < half
        }
    }
}

pub fn weighted_norm_sq(x: &SeqVector, base: &BigRational) -> Result<Extended, SeqError> {
    x.weighted_norm_sq(base)
}

fn pow(x: &BigRational, n: usize) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..n {
        acc *= x;
    }
    acc
}

pub fn rational(num: i64, den: i64) -> Result<BigRational, SeqError> {
    if den == 0 {
        return Err(SeqError::ZeroDenominator("rational"));
    }
    Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

#[derive(Serialize, Deserialize)]
struct SeqVectorJson {
    head: Vec<[i64; 4]>,
    tail: Option<TailJson>,
}

#[derive(Serialize, Deserialize)]
struct TailJson {
    a: [i64; 2],
    r: [i64; 2],
}

impl TryFrom<SeqVectorJson> for SeqVector {
    type Error = SeqError;

    fn try_from(js: SeqVectorJson) -> Result<Self, SeqError> {
        let head = js
            .head
            .iter()
            .map(|[rn, rd, imn, imd]| {
                if *rd == 0 || *imd == 0 {
                    return Err(SeqError::ZeroDenominator("head"));
                }
                Ok(ComplexRational { re: rational(*rn, *rd)?, im: rational(*imn, *imd)? })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let tail = match js.tail {
            None => None,
            Some(t) => {
                if t.a[1] == 0 || t.r[1] == 0 {
                    return Err(SeqError::ZeroDenominator("tail"));
                }
                Some(GeometricTail::new(rational(t.a[0], t.a[1])?, rational(t.r[0], t.r[1])?)?)
            }
        };
        Ok(SeqVector { head, tail })
    }
}

fn to_pair(q: &BigRational) -> [i64; 2] {
    // Values built from the JSON form always fit; anything else saturates.
    let num = q.numer().to_i64().unwrap_or(i64::MAX);
    let den = q.denom().to_i64().unwrap_or(i64::MAX);
    [num, den]
}

impl From<SeqVector> for SeqVectorJson {
    fn from(x: SeqVector) -> Self {
        let head = x
            .head
            .iter()
            .map(|c| {
                let [rn, rd] = to_pair(&c.re);
                let [imn, imd] = to_pair(&c.im);
                [rn, rd, imn, imd]
            })
            .collect();
        let tail = x.tail.map(|t| TailJson { a: to_pair(&t.amplitude), r: to_pair(&t.ratio) });
        SeqVectorJson { head, tail }
    }
}

/// Block `n` of the redistribution input, split as `x_n = x^{(n)}_1 + … + x^{(n)}_n`
/// with `x^{(n)}_k ∈ ℋ_k`.
#[derive(Debug, Clone)]
pub struct BlockSplit {
    pub components: Vec<Vec<Complex64>>,
}

impl BlockSplit {
    pub fn total(&self) -> Vec<Complex64> {
        let dim = self.components.first().map_or(0, Vec::len);
        let mut out = vec![Complex64::zero(); dim];
        for c in &self.components {
            for (o, v) in out.iter_mut().zip(c) {
                *o += v;
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct Redistribution {
    /// `y_k = Σ_{n ≥ k} x^{(n)}_k`.
    pub y_blocks: Vec<Vec<Complex64>>,
    /// `Σ_k 4^k Σ_{n ≥ k} ‖x^{(n)}_k‖²`.
    pub regrouped_weight: f64,
    /// `Σ_n 4^n ‖x_n‖²`.
    pub original_weight: f64,
    pub bound_ok: bool,
    /// `Σ_k 4^k ‖y_k‖²`. Bounded by `2 Σ_n 4^n ‖x_n‖²` (Cauchy-Schwarz), not
    /// by the unscaled sum in general.
    pub y_weight: f64,
    pub y_bound_ok: bool,
    /// `‖Σ_k y_k − Σ_n x_n‖`.
    pub conservation_residual: f64,
}

pub const REDISTRIBUTE_REL_TOL: f64 = 1e-10;

/// Regroup the components of each block by shell and check the weighted
/// estimate `Σ_k 4^k Σ_{n≥k} ‖x^{(n)}_k‖² ≤ Σ_n 4^n ‖x_n‖²`.
pub fn redistribute(blocks: &[BlockSplit]) -> Result<Redistribution, SeqError> {
    let n_blocks = blocks.len();
    let dim = blocks.first().and_then(|b| b.components.first()).map_or(0, Vec::len);
    for (i, b) in blocks.iter().enumerate() {
        if b.components.len() != i + 1 {
            return Err(SeqError::DimensionMismatch(format!(
                "block {} has {} components, expected {}",
                i + 1,
                b.components.len(),
                i + 1
            )));
        }
        if let Some(c) = b.components.iter().find(|c| c.len() != dim) {
            return Err(SeqError::DimensionMismatch(format!(
                "block {} has a component of length {}, expected {dim}",
                i + 1,
                c.len()
            )));
        }
    }

    let mut y_blocks = vec![vec![Complex64::zero(); dim]; n_blocks];
    let mut regrouped_weight = 0.0;
    let mut original_weight = 0.0;
    let mut x_sum = vec![Complex64::zero(); dim];
    for (i, b) in blocks.iter().enumerate() {
        let w_n = 4f64.powi(i as i32 + 1);
        let x_n = b.total();
        original_weight += w_n * norm_sq(&x_n);
        for (s, v) in x_sum.iter_mut().zip(&x_n) {
            *s += v;
        }
        for (k, comp) in b.components.iter().enumerate() {
            regrouped_weight += 4f64.powi(k as i32 + 1) * norm_sq(comp);
            for (y, v) in y_blocks[k].iter_mut().zip(comp) {
                *y += v;
            }
        }
    }
    let mut residual = x_sum;
    for y in &y_blocks {
        for (r, v) in residual.iter_mut().zip(y) {
            *r -= v;
        }
    }
    let bound_ok = regrouped_weight <= original_weight * (1.0 + REDISTRIBUTE_REL_TOL) + f64::MIN_POSITIVE;
    let y_weight: f64 = y_blocks.iter().enumerate().map(|(k, y)| 4f64.powi(k as i32 + 1) * norm_sq(y)).sum();
    let y_bound_ok = y_weight <= 2.0 * original_weight * (1.0 + REDISTRIBUTE_REL_TOL) + f64::MIN_POSITIVE;
    Ok(Redistribution {
        y_blocks,
        regrouped_weight,
        original_weight,
        bound_ok,
        y_weight,
        y_bound_ok,
        conservation_residual: norm_sq(&residual).sqrt(),
    })
}

fn norm_sq(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}
