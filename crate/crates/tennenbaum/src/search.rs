//! Candidate generators: exhaustive zero-defect search (the minimality
//! surrogate) and continued-fraction convergents of √n as sources of
//! small-defect candidates for orbits and figures.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{CheckedSub, One, Zero};

use crate::arith::{defect, Candidate, Defect, Radicand};

/// Rejection raised when asking for the continued fraction of an integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CfError {
    /// √n is the integer `sqrt`; its continued fraction terminates
    /// immediately instead of becoming periodic.
    PerfectSquare { sqrt: BigUint },
}

impl fmt::Display for CfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CfError::PerfectSquare { sqrt } => {
                write!(f, "the radicand is the perfect square {sqrt}^2")
            }
        }
    }
}

impl std::error::Error for CfError {}

/// One state of the quadratic-irrational continued-fraction recurrence
/// for √n: the value being expanded is `(√n + m) / d`, and `a` is its
/// integer part (the next partial quotient).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CfState {
    m: BigUint,
    d: BigUint,
    a: BigUint,
}

impl CfState {
    pub fn m(&self) -> &BigUint {
        &self.m
    }

    pub fn d(&self) -> &BigUint {
        &self.d
    }

    /// The partial quotient contributed by this state.
    pub fn a(&self) -> &BigUint {
        &self.a
    }
}

/// Infinite iterator over the continued-fraction states of √n, starting
/// from `(m, d, a) = (0, 1, sqrt_floor(n))`.
///
/// Each step applies the exact integer recurrence `m' = d·a − m`,
/// `d' = (n − m'²) / d`, `a' = (a₀ + m') / d'` (both divisions exact or
/// flooring as the invariant `d | n − m²` dictates; here the first is
/// exact and the second is a floor).
#[derive(Clone, Debug)]
pub struct CfStates {
    n: BigUint,
    a0: BigUint,
    state: CfState,
}

impl Iterator for CfStates {
    type Item = CfState;

    fn next(&mut self) -> Option<CfState> {
        let current = self.state.clone();
        let m_next = &current.d * &current.a - &current.m;
        let d_next = (&self.n - &m_next * &m_next) / &current.d;
        let a_next = (&self.a0 + &m_next) / &d_next;
        debug_assert!(
            ((&self.n - &m_next * &m_next) % &current.d).is_zero(),
            "division in the CF recurrence must be exact"
        );
        self.state = CfState {
            m: m_next,
            d: d_next,
            a: a_next,
        };
        Some(current)
    }
}

/// The continued-fraction state stream for √n. Rejects perfect squares,
/// whose expansion terminates instead of recurring.
pub fn cf_states(n: &Radicand) -> Result<CfStates, CfError> {
    if n.is_square() {
        return Err(CfError::PerfectSquare {
            sqrt: n.sqrt_floor().clone(),
        });
    }
    let a0 = n.sqrt_floor().clone();
    Ok(CfStates {
        n: n.value().clone(),
        a0: a0.clone(),
        state: CfState {
            m: BigUint::zero(),
            d: BigUint::one(),
            a: a0,
        },
    })
}

/// The first `count` partial quotients `[a₀; a₁, a₂, …]` of √n.
pub fn cf_expansion(n: &Radicand, count: usize) -> Result<Vec<BigUint>, CfError> {
    Ok(cf_states(n)?.take(count).map(|s| s.a).collect())
}

/// The first `count` convergents p/q of √n as candidates, via the
/// standard recurrence `p_k = a_k·p_{k−1} + p_{k−2}` (and likewise for
/// q), seeded so the list starts at `(a₀, 1)`. Convergents are coprime
/// by construction.
pub fn convergents(n: &Radicand, count: usize) -> Result<Vec<Candidate>, CfError> {
    let states = cf_states(n)?;
    let mut out = Vec::with_capacity(count);
    let (mut p_prev, mut p) = (BigUint::zero(), BigUint::one());
    let (mut q_prev, mut q) = (BigUint::one(), BigUint::zero());
    for state in states.take(count) {
        let p_next = &state.a * &p + &p_prev;
        let q_next = &state.a * &q + &q_prev;
        (p_prev, p) = (p, p_next);
        (q_prev, q) = (q, q_next);
        out.push(Candidate::new(p.clone(), q.clone()));
    }
    Ok(out)
}

/// All candidates `(p, q)` with `1 ≤ q ≤ q_max` and `p² = n·q²` exactly.
/// Empty precisely when √n is irrational; for `n = k²` it returns the
/// family `(k·q, q)`.
pub fn find_exact(n: &Radicand, q_max: u64) -> Vec<Candidate> {
    let mut out = Vec::new();
    for q in 1..=q_max {
        let q = BigUint::from(q);
        let target = n.value() * &q * &q;
        let p = target.sqrt();
        if &p * &p == target {
            out.push(Candidate::new(p, q));
        }
    }
    out
}

/// A candidate paired with its measured defect.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NearSolution {
    pub candidate: Candidate,
    pub defect: Defect,
}

impl fmt::Display for NearSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} defect {}", self.candidate, self.defect)
    }
}

/// All layout-valid candidates — `q ≤ q_max`, `q < p ≤ n·q` — whose
/// defect satisfies `|n·q² − p²| ≤ defect_bound`, sorted by q then p.
///
/// For each q only `p` near `√(n·q²)` is scanned: `|n·q² − p²| ≤ B`
/// means exactly `n·q² − B ≤ p² ≤ n·q² + B`, so every qualifying `p`
/// lies in `[⌈√(n·q² − B)⌉, ⌊√(n·q² + B)⌋]` and the scan is complete
/// within the bound despite never enumerating all p.
pub fn near_solutions(n: &Radicand, q_max: u64, defect_bound: u64) -> Vec<NearSolution> {
    let bound = BigUint::from(defect_bound);
    let mut out = Vec::new();
    for q in 1..=q_max {
        let q = BigUint::from(q);
        let target = n.value() * &q * &q;
        let mut lo = match target.checked_sub(&bound) {
            Some(floor_sq) => {
                let lo = floor_sq.sqrt();
                if &lo * &lo < floor_sq {
                    lo + 1u32
                } else {
                    lo
                }
            }
            None => BigUint::zero(),
        };
        let min_p = &q + 1u32;
        if lo < min_p {
            lo = min_p;
        }
        let hi_sq = &target + &bound;
        let mut hi = hi_sq.sqrt();
        let nq = n.value() * &q;
        if hi > nq {
            hi = nq;
        }
        let mut p = lo;
        while p <= hi {
            let candidate = Candidate::new(p.clone(), q.clone());
            let d = defect(n, &candidate);
            debug_assert!(d.magnitude() <= bound);
            out.push(NearSolution {
                candidate,
                defect: d,
            });
            p += 1u32;
        }
    }
    out
}
