//! Symbolic operator ranges and the exact decisions on them.
//!
//! An operator range `𝓡 ⊆ H` is described up to unitary equivalence by the
//! dimension of `𝓡⊥` and the dimensions of the pairwise orthogonal closed
//! shells `ℋ_1, ℋ_2, …` with
//! `𝓡 = { Σ x_n : x_n ∈ ℋ_n, Σ 4^n ‖x_n‖² < ∞ }`.
//! Shell dimensions are restricted to eventually-constant sequences, which
//! makes every decision below terminate.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cardinal::{card_add, card_mul, card_series_sum, Cardinal, CardinalError, DimSeq, ALEPH_0, ZERO};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RangeError {
    #[error(transparent)]
    Cardinal(#[from] CardinalError),
    #[error("enlargement inapplicable: {0}")]
    EnlargeInapplicable(&'static str),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// Symbolic operator range: `dim 𝓡⊥` plus the shell dimensions `dim ℋ_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawRangeRep")]
pub struct RangeRep {
    perp: Cardinal,
    shells: DimSeq,
}

#[derive(Deserialize)]
struct RawRangeRep {
    perp: Cardinal,
    shells: DimSeq,
}

impl TryFrom<RawRangeRep> for RangeRep {
    type Error = RangeError;

    fn try_from(raw: RawRangeRep) -> Result<Self, Self::Error> {
        RangeRep::new(raw.perp, raw.shells)
    }
}

/// Outcome of the subspace criterion: either every closed `K ⊆ 𝓡` has
/// `dim K ≤ dim K⊥`, or `K = ℋ_1 ⊕ … ⊕ ℋ_n` violates it for the reported `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VneuWitness {
    Satisfied,
    ViolatingIndex(usize),
}

/// Serialized decision result: `{"admits": bool, "witness": null | n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    pub admits: bool,
    pub witness: Option<usize>,
}

impl RangeRep {
    /// Fails if `perp + Σ prefix` overflows; this bounds every partial sum
    /// the decisions below need.
    pub fn new(perp: Cardinal, shells: DimSeq) -> Result<Self, RangeError> {
        let prefix_total = shells.iter_prefix().try_fold(perp, card_add)?;
        card_add(prefix_total, card_series_sum(&shells)?)?;
        Ok(RangeRep { perp, shells })
    }

    /// `perp 0`, every shell one-dimensional: the range of `diag(2^{-n})`
    /// on `ℓ²(ℕ)`.
    pub fn canonical_separable() -> Self {
        RangeRep { perp: ZERO, shells: DimSeq::constant(Cardinal::Finite(1)) }
    }

    pub fn perp_dim(&self) -> Cardinal {
        self.perp
    }

    pub fn shells(&self) -> &DimSeq {
        &self.shells
    }

    pub fn closure_dim(&self) -> Cardinal {
        card_series_sum(&self.shells).expect("validated at construction")
    }

    /// `dim H = dim 𝓡⊥ + Σ dim ℋ_n`.
    pub fn total_dim(&self) -> Cardinal {
        card_add(self.perp, self.closure_dim()).expect("validated at construction")
    }

    pub fn is_closed(&self) -> bool {
        self.shells.tail() == ZERO
    }

    pub fn is_dense(&self) -> bool {
        self.perp == ZERO
    }

    /// `dim (ℋ_1 ⊕ … ⊕ ℋ_n)`.
    pub fn prefix_dim(&self, n: usize) -> Result<Cardinal, CardinalError> {
        (1..=n).map(|k| self.shells.entry(k)).try_fold(ZERO, card_add)
    }

    /// `dim (𝓡⊥ ⊕ ℋ_{n+1} ⊕ ℋ_{n+2} ⊕ …) = dim (ℋ_1 ⊕ … ⊕ ℋ_n)⊥`.
    pub fn tail_dim(&self, n: usize) -> Result<Cardinal, CardinalError> {
        card_add(self.perp, card_series_sum(&self.shells.shifted(n))?)
    }

    /// The value `tail_dim(n)` takes for every `n >= prefix length`.
    pub fn stable_tail_dim(&self) -> Cardinal {
        self.tail_dim(self.shells.prefix().len()).expect("validated at construction")
    }

    /// Whether some unitary `U` satisfies `U𝓡 ∩ 𝓡 = {0}`.
    ///
    /// The criterion is `prefix_dim(n) <= tail_dim(n)` for all `n`. As
    /// `prefix_dim` is nondecreasing and `tail_dim` is nonincreasing and
    /// constant from the prefix length on, this is equivalent to comparing
    /// the full shell sum with the stable tail dimension.
    pub fn admits_disjoint_unitary(&self) -> bool {
        self.closure_dim() <= self.stable_tail_dim()
    }

    /// Least `n` such that `K = ℋ_1 ⊕ … ⊕ ℋ_n` has `dim K > dim K⊥`.
    pub fn vneu_witness(&self) -> VneuWitness {
        if self.admits_disjoint_unitary() {
            return VneuWitness::Satisfied;
        }
        // A violation exists at some n <= max(prefix length, 1); all sums in
        // that window are bounded by the sum checked in `new`.
        let last = self.shells.prefix().len().max(1);
        (1..=last)
            .find(|&n| {
                let head = self.prefix_dim(n).expect("validated at construction");
                let rest = self.tail_dim(n).expect("validated at construction");
                head > rest
            })
            .map(VneuWitness::ViolatingIndex)
            .expect("a refuted range has a violating index within its prefix")
    }

    pub fn decide(&self) -> Decision {
        match self.vneu_witness() {
            VneuWitness::Satisfied => Decision { admits: true, witness: None },
            VneuWitness::ViolatingIndex(n) => Decision { admits: false, witness: Some(n) },
        }
    }

    /// Replace shells `n, n+1` by `({0}, ℋ_n ⊕ ℋ_{n+1})`. The represented
    /// range is unchanged.
    pub fn merge_adjacent(&self, n: usize) -> Result<RangeRep, RangeError> {
        if n == 0 {
            return Err(RangeError::Precondition("merge index is 1-based".into()));
        }
        let len = self.shells.prefix().len().max(n + 1);
        let mut entries = self.shells.materialize(len);
        let merged = card_add(entries[n - 1], entries[n])?;
        entries[n - 1] = ZERO;
        entries[n] = merged;
        Ok(RangeRep { perp: self.perp, shells: DimSeq::new(entries, self.shells.tail()) })
    }

    /// Prepend a zero shell: `({0}, ℋ_1, ℋ_2, …)`.
    pub fn shift_right(&self) -> RangeRep {
        let mut prefix = vec![ZERO];
        prefix.extend(self.shells.iter_prefix());
        RangeRep { perp: self.perp, shells: DimSeq::new(prefix, self.shells.tail()) }
    }

    /// A dense range containing this one whose shells all have dimension
    /// `dim H`. Requires an infinite-dimensional ambient space in which the
    /// range admits a disjoint-moving unitary.
    pub fn enlarge(&self) -> Result<RangeRep, RangeError> {
        if !self.admits_disjoint_unitary() {
            return Err(RangeError::EnlargeInapplicable("range admits no disjoint-moving unitary"));
        }
        let total = self.total_dim();
        if total.is_finite() {
            return Err(RangeError::EnlargeInapplicable("ambient dimension is finite"));
        }
        Ok(RangeRep { perp: ZERO, shells: DimSeq::constant(total) })
    }

    /// Entrywise equality of `dim 𝓡⊥` and all shell dimensions, which
    /// guarantees a unitary `U` with `U𝓡 = 𝒮`. `false` is inconclusive:
    /// representations are not unique.
    pub fn unitarily_equiv_sufficient(&self, other: &RangeRep) -> bool {
        self == other
    }

    /// Hilbert direct sum of `kappa` copies of the range.
    pub fn direct_sum_copies(&self, kappa: Cardinal) -> Result<RangeRep, RangeError> {
        if kappa == ZERO {
            return Err(RangeError::Precondition("direct sum needs at least one copy".into()));
        }
        let perp = card_mul(self.perp, kappa)?;
        let shells = self.shells.try_map(|c| card_mul(c, kappa))?;
        RangeRep::new(perp, shells)
    }

    /// Whether the range is that of an operator in `C_κ(H)` for `κ = ambient`:
    /// every shell (hence every finite block of shells, for infinite
    /// `ambient`) has dimension below `ambient`. For finite `ambient` the
    /// whole closure must be a proper subspace.
    pub fn is_small(&self, ambient: Cardinal) -> Result<bool, RangeError> {
        let total = self.total_dim();
        if total > ambient {
            return Err(RangeError::Precondition(format!("total dimension {total} exceeds ambient {ambient}")));
        }
        if ambient.is_finite() {
            return Ok(self.closure_dim() < ambient);
        }
        Ok(self.shells.sup() < ambient)
    }
}

/// For `small` the range of an operator in `C_{dim H}(H)`, whether `small + s`
/// admits a disjoint-moving unitary. This holds exactly when `s` does: a
/// violating subspace of `s` also violates the criterion for the sum.
pub fn sum_pert_admits(small: &RangeRep, s: &RangeRep, ambient: Cardinal) -> Result<bool, RangeError> {
    if ambient < ALEPH_0 {
        return Err(RangeError::Precondition("ambient dimension must be infinite".into()));
    }
    if s.total_dim() > ambient {
        return Err(RangeError::Precondition(format!("total dimension {} exceeds ambient {ambient}", s.total_dim())));
    }
    if !small.is_small(ambient)? {
        return Err(RangeError::Precondition("perturbing range is not small".into()));
    }
    Ok(s.admits_disjoint_unitary())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cardinal::{Aleph, Finite};

    fn rep(perp: Cardinal, prefix: Vec<Cardinal>, tail: Cardinal) -> RangeRep {
        RangeRep::new(perp, DimSeq::new(prefix, tail)).unwrap()
    }

    fn nonseparable() -> RangeRep {
        rep(ZERO, vec![Aleph(1)], Finite(1))
    }

    fn closed_small() -> RangeRep {
        rep(Finite(3), vec![Finite(2)], ZERO)
    }

    #[test]
    fn prefix_dim_examples() {
        assert_eq!(RangeRep::canonical_separable().prefix_dim(4), Ok(Finite(4)));
        assert_eq!(nonseparable().prefix_dim(1), Ok(Aleph(1)));
        let r = rep(Finite(1), vec![Finite(7), Aleph(0)], Finite(2));
        assert_eq!(r.prefix_dim(1), Ok(r.shells().entry(1)));
    }

    #[test]
    fn tail_dim_examples() {
        assert_eq!(RangeRep::canonical_separable().tail_dim(10), Ok(Aleph(0)));
        assert_eq!(nonseparable().tail_dim(1), Ok(Aleph(0)));
        assert_eq!(closed_small().tail_dim(1), Ok(Finite(3)));
    }

    #[test]
    fn admits_examples() {
        assert!(RangeRep::canonical_separable().admits_disjoint_unitary());
        assert!(!nonseparable().admits_disjoint_unitary());
        assert!(closed_small().admits_disjoint_unitary());
    }

    #[test]
    fn witness_examples() {
        assert_eq!(nonseparable().vneu_witness(), VneuWitness::ViolatingIndex(1));
        assert_eq!(RangeRep::canonical_separable().vneu_witness(), VneuWitness::Satisfied);
        let r = rep(ZERO, vec![Finite(2), Finite(1)], ZERO);
        // prefix_dim(1) = 2 > tail_dim(1) = 1 already.
        assert_eq!(r.vneu_witness(), VneuWitness::ViolatingIndex(1));
        assert_eq!(r.decide(), Decision { admits: false, witness: Some(1) });
    }

    #[test]
    fn merge_examples() {
        let r = rep(ZERO, vec![Finite(1), Finite(1)], Finite(1)).merge_adjacent(1).unwrap();
        assert_eq!(r.shells(), &DimSeq::new(vec![ZERO, Finite(2)], Finite(1)));
        let r = rep(ZERO, vec![Finite(3), ZERO], ZERO).merge_adjacent(1).unwrap();
        assert_eq!(r.shells(), &DimSeq::new(vec![ZERO, Finite(3)], ZERO));
        let r = rep(ZERO, vec![Aleph(0), Aleph(0)], ZERO).merge_adjacent(1).unwrap();
        assert_eq!(r.shells(), &DimSeq::new(vec![ZERO, Aleph(0)], ZERO));
        assert!(RangeRep::canonical_separable().merge_adjacent(0).is_err());
    }

    #[test]
    fn merge_inside_the_tail_extends_the_prefix() {
        let r = RangeRep::canonical_separable().merge_adjacent(3).unwrap();
        assert_eq!(r.shells().prefix(), &[Finite(1), Finite(1), ZERO, Finite(2)]);
        assert_eq!(r.shells().tail(), Finite(1));
    }

    #[test]
    fn enlarge_examples() {
        let e = RangeRep::canonical_separable().enlarge().unwrap();
        assert_eq!(e, rep(ZERO, vec![], Aleph(0)));
        let r = rep(Aleph(1), vec![Finite(4)], Aleph(0));
        assert!(r.admits_disjoint_unitary());
        assert_eq!(r.enlarge().unwrap(), rep(ZERO, vec![], Aleph(1)));
        assert!(matches!(nonseparable().enlarge(), Err(RangeError::EnlargeInapplicable(_))));
        assert!(matches!(closed_small().enlarge(), Err(RangeError::EnlargeInapplicable(_))));
    }

    #[test]
    fn equivalence_examples() {
        let a = RangeRep::canonical_separable();
        assert!(a.unitarily_equiv_sufficient(&RangeRep::canonical_separable()));
        assert!(!a.unitarily_equiv_sufficient(&a.merge_adjacent(1).unwrap()));
        let b = rep(Aleph(0), vec![], Finite(1));
        assert!(!b.unitarily_equiv_sufficient(&a));
    }

    #[test]
    fn direct_sum_examples() {
        let r = RangeRep::canonical_separable().direct_sum_copies(Aleph(1)).unwrap();
        assert_eq!(r, rep(ZERO, vec![], Aleph(1)));
        let n = nonseparable();
        assert_eq!(n.direct_sum_copies(Finite(1)).unwrap(), n);
        let r = rep(ZERO, vec![Finite(2)], ZERO).direct_sum_copies(Finite(3)).unwrap();
        assert_eq!(r, rep(ZERO, vec![Finite(6)], ZERO));
        assert!(n.direct_sum_copies(ZERO).is_err());
    }

    #[test]
    fn small_examples() {
        assert_eq!(RangeRep::canonical_separable().is_small(Aleph(1)), Ok(true));
        assert_eq!(nonseparable().is_small(Aleph(1)), Ok(false));
        assert_eq!(rep(ZERO, vec![], Finite(5)).is_small(Aleph(0)), Ok(true));
        assert!(nonseparable().is_small(Aleph(0)).is_err());
        assert_eq!(closed_small().is_small(Finite(5)), Ok(true));
        assert_eq!(rep(ZERO, vec![Finite(5)], ZERO).is_small(Finite(5)), Ok(false));
    }

    #[test]
    fn sum_pert_examples() {
        let sep = RangeRep::canonical_separable();
        assert_eq!(sum_pert_admits(&sep, &sep, Aleph(0)), Ok(true));
        let finite_shells = rep(ZERO, vec![], Finite(3));
        assert_eq!(sum_pert_admits(&finite_shells, &nonseparable(), Aleph(1)), Ok(false));
        assert_eq!(nonseparable().vneu_witness(), VneuWitness::ViolatingIndex(1));
        let zero = rep(ZERO, vec![], ZERO);
        for s in [sep.clone(), nonseparable(), rep(Aleph(1), vec![], Aleph(0))] {
            assert_eq!(sum_pert_admits(&zero, &s, Aleph(1)), Ok(s.admits_disjoint_unitary()));
        }
        assert!(sum_pert_admits(&nonseparable(), &sep, Aleph(1)).is_err());
        assert!(sum_pert_admits(&sep, &sep, Finite(10)).is_err());
    }

    #[test]
    fn construction_rejects_overflowing_prefix() {
        let shells = DimSeq::new(vec![Finite(u64::MAX), Finite(u64::MAX)], Finite(1));
        assert!(RangeRep::new(ZERO, shells).is_err());
    }

    #[test]
    fn json_roundtrip_and_decision_shape() {
        let js = r#"{"perp":{"fin":0},"shells":{"prefix":[{"aleph":1}],"tail":{"fin":1}}}"#;
        let r: RangeRep = serde_json::from_str(js).unwrap();
        assert_eq!(r, nonseparable());
        assert_eq!(serde_json::to_string(&r).unwrap(), js);
        assert_eq!(serde_json::to_string(&r.decide()).unwrap(), r#"{"admits":false,"witness":1}"#);
        assert_eq!(
            serde_json::to_string(&RangeRep::canonical_separable().decide()).unwrap(),
            r#"{"admits":true,"witness":null}"#
        );
    }
}
