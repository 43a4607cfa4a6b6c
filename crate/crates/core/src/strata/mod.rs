//! Stratification of first-class parameter space and the isomorphism
//! decision on the generic strata.
//!
//! ```text
//! U    : α_3(α_4 + 2α_3²) ≠ 0
//! U'_1 : α_3 ≠ 0, α_4 + 2α_3² = 0   → U''_1 if (α_5 − 5α_3³)(α_6 + 6α_3α_5 − 16α_3⁴) ≠ 0, else F''_1
//! U'_2 : α_3 = 0, α_4 ≠ 0           → U''_2 if α_5 ≠ 0, else F''_2
//! F'   : α_3 = 0, α_4 = 0
//! ```
//!
//! On `U`, `U''_1` and `U''_2` each algebra has a canonical group element
//! sending it to a normal form; the free coordinates of that normal form
//! (`ρ_i` for `i ≥ 3` on `U`, `i ≥ 4` on the others) form the invariant
//! vector, and two algebras in the same stratum are isomorphic exactly when
//! their invariant vectors agree.

mod printed;

pub use printed::lowdim_invariant_lists;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::action::{apply_rho, ActionError, GroupElement};
use crate::algebra::{rho_position, AlgebraError, FirstClassParams};
use crate::scalar::{Scalar, ScalarError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Stratum {
    U,
    U1pp,
    F1pp,
    U2pp,
    F2pp,
    Fprime,
}

impl Stratum {
    pub const ALL: [Stratum; 6] = [
        Stratum::U,
        Stratum::U1pp,
        Stratum::F1pp,
        Stratum::U2pp,
        Stratum::F2pp,
        Stratum::Fprime,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Stratum::U => "U",
            Stratum::U1pp => "U1pp",
            Stratum::F1pp => "F1pp",
            Stratum::U2pp => "U2pp",
            Stratum::F2pp => "F2pp",
            Stratum::Fprime => "Fprime",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Stratum> {
        Stratum::ALL.into_iter().find(|s| s.tag() == tag)
    }

    /// Whether an isomorphism criterion is implemented on this stratum.
    pub fn is_supported(self) -> bool {
        matches!(self, Stratum::U | Stratum::U1pp | Stratum::U2pp)
    }

    /// Index of the first invariant component `ρ_i`.
    pub fn first_invariant_index(self) -> usize {
        if self == Stratum::U {
            3
        } else {
            4
        }
    }

    /// Smallest `n` at which the criterion applies.
    pub fn min_n(self) -> usize {
        match self {
            Stratum::U1pp | Stratum::F1pp => 6,
            Stratum::U2pp | Stratum::F2pp => 5,
            Stratum::U | Stratum::Fprime => 4,
        }
    }
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// The always-decidable first split `U ∪ U'_1 ∪ U'_2 ∪ F'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CoarseStratum {
    U,
    U1p,
    U2p,
    Fprime,
}

impl CoarseStratum {
    pub fn tag(self) -> &'static str {
        match self {
            CoarseStratum::U => "U",
            CoarseStratum::U1p => "U1p",
            CoarseStratum::U2p => "U2p",
            CoarseStratum::Fprime => "Fprime",
        }
    }
}

/// Why no verdict or invariant is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Deferral {
    /// `F'`, `F''_1`, `F''_2`.
    ResidualStratum,
    /// `U'_1` for `n < 6`, `U'_2` for `n < 5`.
    BelowDimensionRange,
    SecondClass,
}

impl Deferral {
    pub fn reason(self) -> &'static str {
        match self {
            Deferral::ResidualStratum => {
                "no isomorphism criterion is established on the closed strata F', F''1, F''2"
            }
            Deferral::BelowDimensionRange => {
                "the U'1 split needs n >= 6 and the U'2 split needs n >= 5; the low-dimensional analogues are not established"
            }
            Deferral::SecondClass => "isomorphism of second-class algebras is not covered",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrataError {
    #[error("unsupported: {region} at n = {n}: {}", .deferral.reason())]
    Unsupported {
        region: &'static str,
        n: usize,
        deferral: Deferral,
    },
    #[error("parameters lie in {found}, not in {expected}")]
    NotInStratum { expected: Stratum, found: &'static str },
    #[error("the first U1pp invariant can never equal -14")]
    ForbiddenInvariant,
    #[error("expected {expected} invariant targets, got {found}")]
    TargetLength { expected: usize, found: usize },
    #[error("dimension mismatch: n = {left} vs n = {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("no printed invariant list for {stratum} at n = {n}")]
    Uncovered { stratum: Stratum, n: usize },
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

fn c(v: i64) -> Scalar {
    Scalar::from_int(v)
}

/// `α_4 + 2α_3²`.
fn u_discriminant(p: &FirstClassParams) -> Scalar {
    p.alpha(4) + &(&c(2) * &p.alpha(3).square())
}

/// `(α_5 − 5α_3³, α_6 + 6α_3α_5 − 16α_3⁴)`, the two factors cutting `U''_1`.
fn u1_factors(p: &FirstClassParams) -> (Scalar, Scalar) {
    let a3 = p.alpha(3);
    let a5 = p.alpha(5);
    let first = a5 - &(&c(5) * &a3.pow(3));
    let second = &(p.alpha(6) + &(&(&c(6) * a3) * a5)) - &(&c(16) * &a3.pow(4));
    (first, second)
}

pub fn coarse_stratum(p: &FirstClassParams) -> CoarseStratum {
    let a3_zero = p.alpha(3).is_zero();
    let disc_zero = u_discriminant(p).is_zero();
    match (a3_zero, disc_zero) {
        (false, false) => CoarseStratum::U,
        (false, true) => CoarseStratum::U1p,
        (true, false) => CoarseStratum::U2p,
        (true, true) => CoarseStratum::Fprime,
    }
}

pub fn classify_stratum(p: &FirstClassParams) -> Result<Stratum, StrataError> {
    let n = p.n();
    let below = |region| StrataError::Unsupported {
        region,
        n,
        deferral: Deferral::BelowDimensionRange,
    };
    Ok(match coarse_stratum(p) {
        CoarseStratum::U => Stratum::U,
        CoarseStratum::Fprime => Stratum::Fprime,
        CoarseStratum::U1p => {
            if n < 6 {
                return Err(below("U1p"));
            }
            let (f, g) = u1_factors(p);
            if f.is_zero() || g.is_zero() {
                Stratum::F1pp
            } else {
                Stratum::U1pp
            }
        }
        CoarseStratum::U2p => {
            if n < 5 {
                return Err(below("U2p"));
            }
            if p.alpha(5).is_zero() {
                Stratum::F2pp
            } else {
                Stratum::U2pp
            }
        }
    })
}

fn require_supported(s: Stratum, n: usize) -> Result<(), StrataError> {
    if s.is_supported() {
        Ok(())
    } else {
        Err(StrataError::Unsupported {
            region: s.tag(),
            n,
            deferral: Deferral::ResidualStratum,
        })
    }
}

/// The group element taking `p` to its normal form on stratum `s`.
pub fn canonical_element(p: &FirstClassParams, s: Stratum) -> Result<GroupElement, StrataError> {
    require_supported(s, p.n())?;
    let found = classify_stratum(p)?;
    if found != s {
        return Err(StrataError::NotInStratum {
            expected: s,
            found: found.tag(),
        });
    }
    let a3 = p.alpha(3);
    let a4 = p.alpha(4);
    let g = match s {
        Stratum::U => {
            // A_0 = (α_4 + 2α_3²)/(2α_3),  B_0 = α_4(α_4 + 2α_3²)/(4α_3³)
            let disc = u_discriminant(p);
            let a = disc.checked_div(&(&c(2) * a3))?;
            let b = (a4 * &disc).checked_div(&(&c(4) * &a3.pow(3)))?;
            GroupElement::new(a, b)?
        }
        Stratum::U1pp => {
            // x = (5α_3³ − α_5)/(α_6 + 6α_3α_5 − 16α_3⁴)
            // y = (α_6 + 7α_3α_5 − 21α_3⁴)/(α_3(5α_3³ − α_5))
            let (f, den) = u1_factors(p);
            let num = -f;
            let x = num.checked_div(&den)?;
            let a5 = p.alpha(5);
            let y_num = &(p.alpha(6) + &(&(&c(7) * a3) * a5)) - &(&c(21) * &a3.pow(4));
            let y = y_num.checked_div(&(a3 * &num))?;
            GroupElement::from_xy(&x, &y)?
        }
        Stratum::U2pp => {
            // x = α_4/α_5,  y = (α_5² − α_4³)/α_4³
            let a5 = p.alpha(5);
            let x = a4.checked_div(a5)?;
            let a4_3 = a4.pow(3);
            let y = (&a5.square() - &a4_3).checked_div(&a4_3)?;
            GroupElement::from_xy(&x, &y)?
        }
        _ => unreachable!("checked by require_supported"),
    };
    Ok(g)
}

/// Invariant components `ρ_i`, `i = first_index..=n-1`, of a supported
/// stratum.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct InvariantVector {
    pub n: usize,
    pub stratum: Stratum,
    pub first_index: usize,
    pub components: Vec<Scalar>,
}

impl InvariantVector {
    fn from_normal_form(stratum: Stratum, normal: &FirstClassParams) -> Self {
        let n = normal.n();
        let first_index = stratum.first_invariant_index();
        InvariantVector {
            n,
            stratum,
            first_index,
            components: (first_index..n).map(|i| normal.rho_component(i).clone()).collect(),
        }
    }

    /// `ρ_index`.
    pub fn component(&self, index: usize) -> Option<&Scalar> {
        index
            .checked_sub(self.first_index)
            .and_then(|k| self.components.get(k))
    }

    /// `n:stratum:c1,c2,...`, byte-stable since scalar formatting is canonical.
    pub fn canonical_key(&self) -> String {
        let comps: Vec<String> = self.components.iter().map(Scalar::to_string).collect();
        format!("{}:{}:{}", self.n, self.stratum.tag(), comps.join(","))
    }
}

pub fn invariant_vector(p: &FirstClassParams) -> Result<InvariantVector, StrataError> {
    let s = classify_stratum(p)?;
    require_supported(s, p.n())?;
    let g = canonical_element(p, s)?;
    Ok(InvariantVector::from_normal_form(s, &apply_rho(&g, p)))
}

/// `ρ(canonical element; p)`.
pub fn canonicalize(p: &FirstClassParams) -> Result<FirstClassParams, StrataError> {
    let s = classify_stratum(p)?;
    let g = canonical_element(p, s)?;
    Ok(apply_rho(&g, p))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NoReason {
    DifferentStrata { left: Stratum, right: Stratum },
    InvariantMismatch { index: usize, left: Scalar, right: Scalar },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// `apply_rho(witness, p1) == p2`.
    Yes { witness: GroupElement },
    No(NoReason),
    Unsupported {
        region: &'static str,
        deferral: Deferral,
    },
}

pub fn decide_isomorphic(p1: &FirstClassParams, p2: &FirstClassParams) -> Result<Verdict, StrataError> {
    if p1.n() != p2.n() {
        return Err(StrataError::DimensionMismatch {
            left: p1.n(),
            right: p2.n(),
        });
    }
    let supported = |p| match classify_stratum(p) {
        Ok(s) if s.is_supported() => Ok(Ok(s)),
        Ok(s) => Ok(Err(Verdict::Unsupported {
            region: s.tag(),
            deferral: Deferral::ResidualStratum,
        })),
        Err(StrataError::Unsupported { region, deferral, .. }) => {
            Ok(Err(Verdict::Unsupported { region, deferral }))
        }
        Err(e) => Err(e),
    };
    let s1 = match supported(p1)? {
        Ok(s) => s,
        Err(v) => return Ok(v),
    };
    let s2 = match supported(p2)? {
        Ok(s) => s,
        Err(v) => return Ok(v),
    };
    if s1 != s2 {
        return Ok(Verdict::No(NoReason::DifferentStrata { left: s1, right: s2 }));
    }
    let g1 = canonical_element(p1, s1)?;
    let g2 = canonical_element(p2, s2)?;
    let v1 = InvariantVector::from_normal_form(s1, &apply_rho(&g1, p1));
    let v2 = InvariantVector::from_normal_form(s2, &apply_rho(&g2, p2));
    let mismatch = v1
        .components
        .iter()
        .zip(&v2.components)
        .enumerate()
        .find(|(_, (a, b))| a != b);
    if let Some((k, (a, b))) = mismatch {
        return Ok(Verdict::No(NoReason::InvariantMismatch {
            index: v1.first_index + k,
            left: a.clone(),
            right: b.clone(),
        }));
    }
    let witness = g1.compose(&g2.inverse());
    if &apply_rho(&witness, p1) != p2 {
        return Err(StrataError::Inconsistent(
            "equal invariants but the witness does not map one algebra onto the other".into(),
        ));
    }
    Ok(Verdict::Yes { witness })
}

/// An algebra in `stratum` whose invariant vector is `targets`.
///
/// The leading entries are fixed so that the canonical element is known
/// (the normal form of the stratum); every later position is then found
/// from a linear equation in that position alone, in increasing order.
pub fn realize_from_invariants(
    n: usize,
    targets: &[Scalar],
    stratum: Stratum,
) -> Result<FirstClassParams, StrataError> {
    require_supported(stratum, n)?;
    if n < stratum.min_n() {
        return Err(StrataError::Unsupported {
            region: stratum.tag(),
            n,
            deferral: Deferral::BelowDimensionRange,
        });
    }
    let first = stratum.first_invariant_index();
    let expected = n - first;
    if targets.len() != expected {
        return Err(StrataError::TargetLength {
            expected,
            found: targets.len(),
        });
    }
    let mut p = FirstClassParams::zero(n)?;
    let solve_from = match stratum {
        Stratum::U => {
            p.set_z(3, c(1));
            first
        }
        Stratum::U1pp => {
            let a4 = &targets[0];
            if a4 == &c(-14) {
                return Err(StrataError::ForbiddenInvariant);
            }
            // normal form: α_3 = 1, α_4 = −2, α_5 = (21 − a_4)/7, α_6 = a_4
            p.set_z(3, c(1));
            p.set_z(4, c(-2));
            p.set_z(5, (&c(21) - a4).checked_div(&c(7))?);
            p.set_z(6, a4.clone());
            first + 1
        }
        Stratum::U2pp => {
            p.set_z(4, c(1));
            p.set_z(5, c(1));
            first
        }
        _ => unreachable!("checked by require_supported"),
    };
    let g = canonical_element(&p, stratum)?;
    for i in solve_from..n {
        let pos = rho_position(n, i);
        let target = &targets[i - first];
        p.set_z(pos, Scalar::zero());
        let at_zero = apply_rho(&g, &p).rho_component(i).clone();
        p.set_z(pos, Scalar::one());
        let at_one = apply_rho(&g, &p).rho_component(i).clone();
        let slope = &at_one - &at_zero;
        if slope.is_zero() {
            return Err(StrataError::Inconsistent(format!(
                "invariant {i} does not depend on position {pos}"
            )));
        }
        p.set_z(pos, (target - &at_zero).checked_div(&slope)?);
    }
    let check = invariant_vector(&p)?;
    if check.stratum != stratum || check.components != targets {
        return Err(StrataError::Inconsistent(
            "realized algebra does not reproduce the targets".into(),
        ));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &str) -> Scalar {
        v.parse().unwrap()
    }

    fn params(n: usize, alpha: &[&str], theta: &str) -> FirstClassParams {
        FirstClassParams::new(n, alpha.iter().map(|a| s(a)).collect(), s(theta)).unwrap()
    }

    fn scalars(v: &[&str]) -> Vec<Scalar> {
        v.iter().map(|x| s(x)).collect()
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_stratum(&params(4, &["1", "2"], "3")).unwrap(), Stratum::U);
        assert_eq!(
            classify_stratum(&params(6, &["1", "-2", "0", "21"], "0")).unwrap(),
            Stratum::U1pp
        );
        assert_eq!(classify_stratum(&FirstClassParams::zero(4).unwrap()).unwrap(), Stratum::Fprime);
        assert_eq!(
            classify_stratum(&params(6, &["1", "-2", "5", "0"], "0")).unwrap(),
            Stratum::F1pp
        );
        assert_eq!(classify_stratum(&params(5, &["0", "1", "1"], "2")).unwrap(), Stratum::U2pp);
        assert_eq!(classify_stratum(&params(5, &["0", "3", "0"], "2")).unwrap(), Stratum::F2pp);
    }

    #[test]
    fn subsplits_below_range_are_unsupported() {
        let e = classify_stratum(&params(4, &["1", "-2"], "1")).unwrap_err();
        assert!(matches!(e, StrataError::Unsupported { region: "U1p", n: 4, .. }));
        let e = classify_stratum(&params(5, &["1", "-2", "0"], "1")).unwrap_err();
        assert!(matches!(e, StrataError::Unsupported { region: "U1p", .. }));
        let e = classify_stratum(&params(4, &["0", "1"], "1")).unwrap_err();
        assert!(matches!(e, StrataError::Unsupported { region: "U2p", .. }));
        assert_eq!(coarse_stratum(&params(4, &["1", "-2"], "1")), CoarseStratum::U1p);
    }

    #[test]
    fn canonical_element_on_u() {
        let p = params(4, &["1", "2"], "3");
        let g = canonical_element(&p, Stratum::U).unwrap();
        assert_eq!(g, GroupElement::new(s("2"), s("2")).unwrap());
        assert!(matches!(
            canonical_element(&p, Stratum::U2pp),
            Err(StrataError::NotInStratum { .. })
        ));
        assert!(matches!(
            canonical_element(&p, Stratum::Fprime),
            Err(StrataError::Unsupported { .. })
        ));
    }

    #[test]
    fn invariant_examples() {
        let v = invariant_vector(&params(4, &["1", "2"], "3")).unwrap();
        assert_eq!(v.components, scalars(&["1/4"]));
        assert_eq!(v.canonical_key(), "4:U:1/4");

        let v = invariant_vector(&params(6, &["1", "-2", "0", "21"], "0")).unwrap();
        assert_eq!(v.components, scalars(&["21", "0"]));
        assert_eq!(v.first_index, 4);

        // Operational value. The verbatim printed n = 5 list gives -1 here
        // and is not orbit-invariant; see printed::tests.
        let v = invariant_vector(&params(5, &["0", "1", "1"], "2")).unwrap();
        assert_eq!(v.components, scalars(&["2"]));
        assert_eq!(v.component(4), Some(&s("2")));
        assert_eq!(v.component(3), None);
    }

    #[test]
    fn canonicalize_examples() {
        let p = params(4, &["1", "2"], "3");
        let cf = canonicalize(&p).unwrap();
        assert_eq!(cf, params(4, &["1", "0"], "1/4"));
        assert_eq!(canonicalize(&cf).unwrap(), cf);
        assert!(canonical_element(&cf, Stratum::U).unwrap().is_identity());
        assert!(canonicalize(&FirstClassParams::zero(6).unwrap()).is_err());
    }

    #[test]
    fn decision_examples() {
        let p = params(4, &["1", "2"], "3");
        match decide_isomorphic(&p, &params(4, &["2", "0"], "1")).unwrap() {
            Verdict::Yes { witness } => {
                assert_eq!(apply_rho(&witness, &p), params(4, &["2", "0"], "1"));
            }
            v => panic!("{v:?}"),
        }
        assert_eq!(
            decide_isomorphic(&p, &params(4, &["1", "2"], "4")).unwrap(),
            Verdict::No(NoReason::InvariantMismatch {
                index: 3,
                left: s("1/4"),
                right: s("1/2"),
            })
        );
        let v = decide_isomorphic(&params(4, &["1", "-2"], "1"), &p).unwrap();
        assert!(matches!(v, Verdict::Unsupported { region: "U1p", .. }));
        let v = decide_isomorphic(&p, &FirstClassParams::zero(4).unwrap()).unwrap();
        assert!(matches!(
            v,
            Verdict::Unsupported {
                region: "Fprime",
                deferral: Deferral::ResidualStratum
            }
        ));
        assert!(matches!(
            decide_isomorphic(&p, &FirstClassParams::zero(5).unwrap()),
            Err(StrataError::DimensionMismatch { left: 4, right: 5 })
        ));
        let u = params(6, &["1", "0", "0", "0"], "0");
        let u1 = params(6, &["1", "-2", "0", "21"], "0");
        assert_eq!(
            decide_isomorphic(&u, &u1).unwrap(),
            Verdict::No(NoReason::DifferentStrata {
                left: Stratum::U,
                right: Stratum::U1pp
            })
        );
    }

    #[test]
    fn realization_examples() {
        let p = realize_from_invariants(4, &scalars(&["1/4"]), Stratum::U).unwrap();
        assert_eq!(p, params(4, &["1", "0"], "1/4"));

        let p = realize_from_invariants(6, &scalars(&["2", "-3", "5/7"]), Stratum::U).unwrap();
        assert_eq!(p, params(6, &["1", "0", "2", "-3"], "5/7"));

        let p = realize_from_invariants(6, &scalars(&["21", "0"]), Stratum::U1pp).unwrap();
        assert_eq!(p, params(6, &["1", "-2", "0", "21"], "0"));

        let p = realize_from_invariants(7, &scalars(&["1/2", "3", "-1"]), Stratum::U2pp).unwrap();
        assert_eq!(invariant_vector(&p).unwrap().components, scalars(&["1/2", "3", "-1"]));

        assert_eq!(
            realize_from_invariants(6, &scalars(&["-14", "1"]), Stratum::U1pp),
            Err(StrataError::ForbiddenInvariant)
        );
        assert!(matches!(
            realize_from_invariants(5, &scalars(&["1"]), Stratum::U1pp),
            Err(StrataError::Unsupported { .. })
        ));
        assert!(matches!(
            realize_from_invariants(6, &scalars(&["1"]), Stratum::U),
            Err(StrataError::TargetLength { expected: 3, found: 1 })
        ));
        assert!(matches!(
            realize_from_invariants(6, &scalars(&["1", "2"]), Stratum::F2pp),
            Err(StrataError::Unsupported { .. })
        ));
    }
}
