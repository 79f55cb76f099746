//! Exact integer domain types shared by every other module.
//!
//! Everything here is arbitrary-precision: a defect of a million-digit
//! candidate is computed exactly, never rounded and never overflowed.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

/// The integer under the radical, classified by its exact integer square root.
///
/// `sqrt_floor` is the greatest integer whose square does not exceed `n`, and
/// `is_square` records whether that bound is attained.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Radicand {
    n: BigUint,
    sqrt_floor: BigUint,
    is_square: bool,
}

/// Rejection raised by [`Radicand::classify`] for integers below 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadicandTooSmall {
    n: BigUint,
}

impl fmt::Display for RadicandTooSmall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "radicand must be at least 2, got {}", self.n)
    }
}

impl std::error::Error for RadicandTooSmall {}

impl Radicand {
    /// Classifies `n`: computes the exact floor square root and whether `n`
    /// is a perfect square. Rejects `n < 2`.
    pub fn classify(n: impl Into<BigUint>) -> Result<Self, RadicandTooSmall> {
        let n = n.into();
        if n < BigUint::from(2u32) {
            return Err(RadicandTooSmall { n });
        }
        let sqrt_floor = n.sqrt();
        let is_square = &sqrt_floor * &sqrt_floor == n;
        Ok(Radicand {
            n,
            sqrt_floor,
            is_square,
        })
    }

    pub fn value(&self) -> &BigUint {
        &self.n
    }

    pub fn sqrt_floor(&self) -> &BigUint {
        &self.sqrt_floor
    }

    pub fn is_square(&self) -> bool {
        self.is_square
    }

    pub fn is_odd(&self) -> bool {
        self.n.bit(0)
    }

    /// `n − 1`, the fine-unit scale used by the geometry module.
    pub fn scale(&self) -> BigUint {
        &self.n - BigUint::one()
    }

    /// `n` as a signed integer, for defect and inequality arithmetic.
    pub fn signed(&self) -> BigInt {
        BigInt::from(self.n.clone())
    }
}

impl fmt::Display for Radicand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.n)
    }
}

/// A proposed witness pair `(p, q)` for `n·q² = p²`: `p` is the side of the
/// big square and `q` the side of each small square, in length units.
///
/// `q = 0` is representable so descent orbits can terminate at a well-defined
/// state; layout construction separately insists on `q ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Candidate {
    p: BigUint,
    q: BigUint,
}

impl Candidate {
    pub fn new(p: impl Into<BigUint>, q: impl Into<BigUint>) -> Self {
        Candidate {
            p: p.into(),
            q: q.into(),
        }
    }

    pub fn p(&self) -> &BigUint {
        &self.p
    }

    pub fn q(&self) -> &BigUint {
        &self.q
    }
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

/// The exact residual `n·q² − p²`, in squared length units.
///
/// Zero exactly when `(p, q)` solves `n·q² = p²`; nonzero defects measure how
/// far a near-solution misses.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Defect(BigInt);

impl Defect {
    pub fn value(&self) -> &BigInt {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn magnitude(&self) -> BigUint {
        self.0.magnitude().clone()
    }

    pub fn into_inner(self) -> BigInt {
        self.0
    }
}

impl From<BigInt> for Defect {
    fn from(value: BigInt) -> Self {
        Defect(value)
    }
}

impl fmt::Display for Defect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `n·q² − p²`, computed exactly.
pub fn defect(n: &Radicand, c: &Candidate) -> Defect {
    let nq2 = BigInt::from(n.value() * c.q() * c.q());
    let p2 = BigInt::from(c.p() * c.p());
    Defect(nq2 - p2)
}

/// The triangular number `k(k+1)/2`.
pub fn triangular(k: impl Into<BigUint>) -> BigUint {
    let k = k.into();
    let succ = &k + BigUint::one();
    (k * succ) >> 1
}
