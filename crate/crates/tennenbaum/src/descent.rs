//! The descent maps, their applicability predicates, orbits, and
//! machine-checkable irrationality certificates.
//!
//! A single descent step sends a candidate `(p, q)` for `n·q² = p²` to a
//! strictly smaller candidate. The full map `(p, q) ↦ (nq−p, p−q)` shrinks
//! `p` only for `n ∈ {2, 3}`; the halved map `(p, q) ↦ ((nq−p)/2, (p−q)/2)`
//! extends the argument to `n ∈ {3, 5, 7}` using the parity forced on `p`
//! and `q` when `n` is odd. Both laws transform the defect `n·q² − p²` by an
//! exact linear rule, so near-solutions descend just as well as exact ones.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};

use crate::arith::{defect, Candidate, Defect, Radicand};

/// Which descent transformation to apply.
///
/// `Full` denotes `(p,q) ↦ (nq−p, p−q)`; `Halved` denotes
/// `(p,q) ↦ ((nq−p)/2, (p−q)/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MapVariant {
    Full,
    Halved,
}

impl MapVariant {
    /// Applies this variant's map to `c`.
    pub fn apply(self, n: &Radicand, c: &Candidate) -> Result<Candidate, MapError> {
        match self {
            MapVariant::Full => full_map(n, c),
            MapVariant::Halved => halved_map(n, c),
        }
    }
}

impl fmt::Display for MapVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapVariant::Full => write!(f, "full"),
            MapVariant::Halved => write!(f, "halved"),
        }
    }
}

/// Why a descent map refused its input.
///
/// Range violations (`QZero`, `PBelowQ`, `PNotBelowNq`) mean the candidate
/// descended out of the map's domain; `ParityMismatch` and `EvenRadicand`
/// mean the halved map is mathematically inapplicable at this input. Orbits
/// preserve the distinction in their stop reason.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapError {
    /// Requires `q ≥ 1`.
    QZero,
    /// Requires `q ≤ p`.
    PBelowQ { p: BigUint, q: BigUint },
    /// Requires `p < n·q`.
    PNotBelowNq { p: BigUint, nq: BigUint },
    /// Halved map requires `p ≡ q (mod 2)`.
    ParityMismatch { p: BigUint, q: BigUint },
    /// Halved map requires odd `n`; even `n` never forces matching parity.
    EvenRadicand { n: BigUint },
}

impl MapError {
    /// True when the map is mathematically inapplicable at the input, as
    /// opposed to the candidate having descended out of range.
    pub fn is_inapplicable(&self) -> bool {
        matches!(
            self,
            MapError::ParityMismatch { .. } | MapError::EvenRadicand { .. }
        )
    }
}

impl fmt::Display for MapError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapError::QZero => write!(f, "requires q >= 1"),
            MapError::PBelowQ { p, q } => {
                write!(f, "requires q <= p, got p = {p} < q = {q}")
            }
            MapError::PNotBelowNq { p, nq } => {
                write!(f, "requires p < n*q, got p = {p} >= n*q = {nq}")
            }
            MapError::ParityMismatch { p, q } => {
                write!(f, "requires p = q (mod 2), got p = {p}, q = {q}")
            }
            MapError::EvenRadicand { n } => {
                write!(f, "requires odd n, got n = {n}")
            }
        }
    }
}

impl std::error::Error for MapError {}

fn check_range(n: &Radicand, c: &Candidate) -> Result<BigUint, MapError> {
    if c.q().is_zero() {
        return Err(MapError::QZero);
    }
    if c.p() < c.q() {
        return Err(MapError::PBelowQ {
            p: c.p().clone(),
            q: c.q().clone(),
        });
    }
    let nq = n.value() * c.q();
    if c.p() >= &nq {
        return Err(MapError::PNotBelowNq {
            p: c.p().clone(),
            nq,
        });
    }
    Ok(nq)
}

/// The map `(p, q) ↦ (nq−p, p−q)`.
///
/// Requires `q ≥ 1` and `q ≤ p < n·q`, which keeps both outputs
/// non-negative. The defect transforms exactly by
/// `defect_after = −(n−1)·defect_before`.
pub fn full_map(n: &Radicand, c: &Candidate) -> Result<Candidate, MapError> {
    let nq = check_range(n, c)?;
    Ok(Candidate::new(nq - c.p(), c.p() - c.q()))
}

/// The map `(p, q) ↦ ((nq−p)/2, (p−q)/2)`.
///
/// Requires odd `n`, `p ≡ q (mod 2)`, `q ≥ 1`, and `q ≤ p < n·q`. Both
/// divisions are exact: `nq−p` and `p−q` share the parity of `p − q`, which
/// is even by the precondition. The defect transforms exactly by
/// `4·defect_after = −(n−1)·defect_before`.
pub fn halved_map(n: &Radicand, c: &Candidate) -> Result<Candidate, MapError> {
    if !n.is_odd() {
        return Err(MapError::EvenRadicand {
            n: n.value().clone(),
        });
    }
    if c.p().bit(0) != c.q().bit(0) {
        return Err(MapError::ParityMismatch {
            p: c.p().clone(),
            q: c.q().clone(),
        });
    }
    let nq = check_range(n, c)?;
    Ok(Candidate::new((nq - c.p()) >> 1, (c.p() - c.q()) >> 1))
}

/// One recorded application of a descent map, with the defect on both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentStep {
    before: Candidate,
    after: Candidate,
    variant: MapVariant,
    defect_before: Defect,
    defect_after: Defect,
}

impl DescentStep {
    /// Applies `variant` once and records the step.
    pub fn take(n: &Radicand, c: &Candidate, variant: MapVariant) -> Result<Self, MapError> {
        let after = variant.apply(n, c)?;
        Ok(DescentStep {
            defect_before: defect(n, c),
            defect_after: defect(n, &after),
            before: c.clone(),
            after,
            variant,
        })
    }

    pub fn before(&self) -> &Candidate {
        &self.before
    }

    pub fn after(&self) -> &Candidate {
        &self.after
    }

    pub fn variant(&self) -> MapVariant {
        self.variant
    }

    pub fn defect_before(&self) -> &Defect {
        &self.defect_before
    }

    pub fn defect_after(&self) -> &Defect {
        &self.defect_after
    }
}

/// Why an orbit stopped iterating.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StopReason {
    /// The latest candidate has `q = 0`.
    QReachedZero,
    /// The next step's precondition failed.
    PreconditionFailed(MapError),
    /// The latest step returned its own input.
    FixedPoint,
    /// The step budget ran out.
    MaxSteps,
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StopReason::QReachedZero => write!(f, "q reached zero"),
            StopReason::PreconditionFailed(err) => write!(f, "precondition failed: {err}"),
            StopReason::FixedPoint => write!(f, "fixed point"),
            StopReason::MaxSteps => write!(f, "max steps reached"),
        }
    }
}

/// A recorded sequence of descent steps and the reason iteration stopped.
///
/// Consecutive steps chain: each step's `after` is the next step's `before`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    n: Radicand,
    start: Candidate,
    steps: Vec<DescentStep>,
    stop_reason: StopReason,
}

impl Orbit {
    pub fn radicand(&self) -> &Radicand {
        &self.n
    }

    pub fn start(&self) -> &Candidate {
        &self.start
    }

    pub fn steps(&self) -> &[DescentStep] {
        &self.steps
    }

    pub fn stop_reason(&self) -> &StopReason {
        &self.stop_reason
    }

    /// The last candidate reached (the start, if no step was taken).
    pub fn last(&self) -> &Candidate {
        self.steps.last().map_or(&self.start, DescentStep::after)
    }
}

/// Iterates `variant`'s map from `start`, recording every step, until `q`
/// hits 0, a precondition fails, a fixed point is reached, or `max_steps`
/// steps have been taken. Fixed-point detection takes priority over the
/// step budget.
pub fn orbit(n: &Radicand, start: &Candidate, variant: MapVariant, max_steps: usize) -> Orbit {
    let mut steps = Vec::new();
    let mut current = start.clone();
    let stop_reason = loop {
        if current.q().is_zero() {
            break StopReason::QReachedZero;
        }
        match DescentStep::take(n, &current, variant) {
            Err(err) => break StopReason::PreconditionFailed(err),
            Ok(step) => {
                let fixed = step.after() == step.before();
                current = step.after().clone();
                steps.push(step);
                if current.q().is_zero() {
                    break StopReason::QReachedZero;
                }
                if fixed {
                    break StopReason::FixedPoint;
                }
                if steps.len() >= max_steps {
                    break StopReason::MaxSteps;
                }
            }
        }
    };
    Orbit {
        n: n.clone(),
        start: start.clone(),
        steps,
        stop_reason,
    }
}

/// Why no descent variant applies to a radicand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Unsupported {
    /// Exact solutions exist, so there is nothing to refute.
    PerfectSquare { sqrt: BigUint },
    /// Neither variant's strict-decrease inequality can be certified.
    NoDecreasingVariant {
        /// `n(n−4)`, which must be negative for the full map; it is not.
        full_inequality: BigInt,
        /// `n(n−9)`, which must be negative for the halved map.
        halved_inequality: BigInt,
        /// Whether `n·q² = p²` forces `p ≡ q (mod 2)`; false for even `n`.
        parity_guaranteed: bool,
    },
}

impl fmt::Display for Unsupported {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Unsupported::PerfectSquare { sqrt } => {
                write!(f, "exact solutions exist: n = {sqrt}^2 is a perfect square")
            }
            Unsupported::NoDecreasingVariant {
                full_inequality,
                halved_inequality,
                parity_guaranteed,
            } => {
                write!(f, "full map: n*(n-4) = {full_inequality} >= 0")?;
                if *parity_guaranteed {
                    write!(f, "; halved map: n*(n-9) = {halved_inequality} >= 0")
                } else {
                    write!(f, "; halved map: parity of p and q not forced for even n")
                }
            }
        }
    }
}

/// The outcome of selecting a descent variant for a radicand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VariantDecision {
    Chosen(MapVariant),
    Unsupported(Unsupported),
}

impl VariantDecision {
    pub fn chosen(&self) -> Option<MapVariant> {
        match self {
            VariantDecision::Chosen(v) => Some(*v),
            VariantDecision::Unsupported(_) => None,
        }
    }
}

/// `n(n−4)`, negative exactly when the full map strictly decreases `p`.
pub fn full_decrease_inequality(n: &Radicand) -> BigInt {
    let n = n.signed();
    &n * (&n - BigInt::from(4))
}

/// `n(n−9)`, negative exactly when the halved map strictly decreases `p`.
pub fn halved_decrease_inequality(n: &Radicand) -> BigInt {
    let n = n.signed();
    &n * (&n - BigInt::from(9))
}

/// Whether `n·q² = p²` forces `p ≡ q (mod 2)`, decided symbolically: every
/// residue pair `(p, q) mod 2` compatible with the congruence
/// `n·q² ≡ p² (mod 2)` must already have matching parity.
pub fn parity_lemma_holds(n: &Radicand) -> bool {
    let n_parity = if n.is_odd() { 1u8 } else { 0 };
    for p_res in 0u8..2 {
        for q_res in 0u8..2 {
            let congruent = (n_parity * q_res * q_res) % 2 == (p_res * p_res) % 2;
            if congruent && p_res != q_res {
                return false;
            }
        }
    }
    true
}

/// Selects the descent variant for `n`.
///
/// Perfect squares are unsupported (exact solutions exist). The halved map
/// is preferred whenever it applies — for `n = 3` both variants work and
/// [`full_map`] stays directly callable — so the result is `Full` exactly
/// for `n = 2` and `Halved` exactly for `n ∈ {3, 5, 7}`.
pub fn variant_for(n: &Radicand) -> VariantDecision {
    if n.is_square() {
        return VariantDecision::Unsupported(Unsupported::PerfectSquare {
            sqrt: n.sqrt_floor().clone(),
        });
    }
    let full_inequality = full_decrease_inequality(n);
    let halved_inequality = halved_decrease_inequality(n);
    let parity_guaranteed = parity_lemma_holds(n);
    if parity_guaranteed && halved_inequality.is_negative() {
        VariantDecision::Chosen(MapVariant::Halved)
    } else if full_inequality.is_negative() {
        VariantDecision::Chosen(MapVariant::Full)
    } else {
        VariantDecision::Unsupported(Unsupported::NoDecreasingVariant {
            full_inequality,
            halved_inequality,
            parity_guaranteed,
        })
    }
}

/// Verdict of an irrationality certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Conclusion {
    IrrationalByDescent,
    MethodInapplicable,
}

/// A machine-checkable record of whether descent proves `√n` irrational.
///
/// `IrrationalByDescent` is emitted only when the chosen variant's exact
/// integer decrease inequality holds and, for the halved variant, the parity
/// lemma holds as well.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    n: Radicand,
    decision: VariantDecision,
    parity_lemma_holds: bool,
    full_inequality: BigInt,
    halved_inequality: BigInt,
    conclusion: Conclusion,
}

impl Certificate {
    pub fn radicand(&self) -> &Radicand {
        &self.n
    }

    /// The variant the certificate is issued for, if any applies.
    pub fn variant(&self) -> Option<MapVariant> {
        self.decision.chosen()
    }

    pub fn decision(&self) -> &VariantDecision {
        &self.decision
    }

    pub fn parity_lemma_holds(&self) -> bool {
        self.parity_lemma_holds
    }

    /// Whether the chosen variant's strict-decrease inequality holds:
    /// `n(n−4) < 0` for the full map, `n(n−9) < 0` for the halved map.
    pub fn decrease_inequality_holds(&self) -> bool {
        match self.decision.chosen() {
            Some(MapVariant::Full) => self.full_inequality.is_negative(),
            Some(MapVariant::Halved) => self.halved_inequality.is_negative(),
            None => false,
        }
    }

    /// `n(n−4)`, the full map's decrease inequality left-hand side.
    pub fn full_inequality(&self) -> &BigInt {
        &self.full_inequality
    }

    /// `n(n−9)`, the halved map's decrease inequality left-hand side.
    pub fn halved_inequality(&self) -> &BigInt {
        &self.halved_inequality
    }

    pub fn conclusion(&self) -> Conclusion {
        self.conclusion
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n.value();
        match (&self.conclusion, &self.decision) {
            (Conclusion::IrrationalByDescent, VariantDecision::Chosen(MapVariant::Full)) => {
                write!(
                    f,
                    "irrational by full descent; {n}*({n}-4) = {} < 0",
                    self.full_inequality
                )
            }
            (Conclusion::IrrationalByDescent, VariantDecision::Chosen(MapVariant::Halved)) => {
                write!(
                    f,
                    "irrational by halved descent; {n}*({n}-9) = {} < 0; parity lemma holds",
                    self.halved_inequality
                )
            }
            (_, VariantDecision::Unsupported(reason)) => {
                write!(f, "method inapplicable; {reason}")
            }
            // Unreachable by construction: a chosen variant always certifies.
            (Conclusion::MethodInapplicable, VariantDecision::Chosen(v)) => {
                write!(f, "method inapplicable for {v} variant")
            }
        }
    }
}

/// Builds the irrationality certificate for `n`: selects a variant, checks
/// its exact integer decrease inequality, and for the halved variant also
/// the parity lemma.
pub fn prove_irrational(n: &Radicand) -> Certificate {
    let decision = variant_for(n);
    let parity = parity_lemma_holds(n);
    let full_inequality = full_decrease_inequality(n);
    let halved_inequality = halved_decrease_inequality(n);
    let conclusion = match &decision {
        VariantDecision::Chosen(MapVariant::Full) if full_inequality.is_negative() => {
            Conclusion::IrrationalByDescent
        }
        VariantDecision::Chosen(MapVariant::Halved)
            if parity && halved_inequality.is_negative() =>
        {
            Conclusion::IrrationalByDescent
        }
        _ => Conclusion::MethodInapplicable,
    };
    Certificate {
        n: n.clone(),
        decision,
        parity_lemma_holds: parity,
        full_inequality,
        halved_inequality,
        conclusion,
    }
}
