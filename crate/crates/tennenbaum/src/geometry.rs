//! Exact construction of the diagonal square packing, its overlap/gap
//! decomposition, a brute-force multiplicity oracle, and the area ledger
//! tying the geometry back to the defect `n·q² − p²`.
//!
//! All coordinates are kept integral by working in *fine units*: every
//! length is scaled by `n − 1`, so the diagonal offset between consecutive
//! small squares is the integer `p − q` instead of the rational
//! `(p − q)/(n − 1)`. Areas in fine units are `(n−1)²` times areas in
//! squared length units.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use crate::arith::{defect, triangular, Candidate, Radicand};

/// Hard ceiling on multiplicity-grid size, in cells.
pub const MAX_GRID_CELLS: u64 = 100_000_000;

/// A point in fine units.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinePoint {
    pub x: BigUint,
    pub y: BigUint,
}

impl FinePoint {
    pub fn new(x: impl Into<BigUint>, y: impl Into<BigUint>) -> Self {
        FinePoint {
            x: x.into(),
            y: y.into(),
        }
    }
}

impl fmt::Display for FinePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// An axis-aligned square in fine units, identified by its lower-left
/// corner and side. The covered cell set is the half-open box
/// `[x, x+side) × [y, y+side)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FineSquare {
    pub corner: FinePoint,
    pub side: BigUint,
}

impl FineSquare {
    pub fn new(corner: FinePoint, side: BigUint) -> Self {
        FineSquare { corner, side }
    }

    pub fn area(&self) -> BigUint {
        &self.side * &self.side
    }

    /// Whether the unit cell with lower-left corner `(x, y)` lies inside.
    pub fn contains_cell(&self, x: &BigUint, y: &BigUint) -> bool {
        x >= &self.corner.x
            && y >= &self.corner.y
            && x - &self.corner.x < self.side
            && y - &self.corner.y < self.side
    }
}

/// Rejection raised when a candidate cannot be packed along the diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LayoutError {
    /// Requires `q ≥ 1` and `q < p`: equal or inverted sides leave no gap
    /// to distribute.
    NoGap { p: BigUint, q: BigUint },
    /// Requires `p ≤ n·q`: otherwise the small squares cannot tile the
    /// diagonal without gaps along it.
    DiagonalGap { p: BigUint, nq: BigUint },
    /// The placement list needs one entry per small square.
    TooManySquares { n: BigUint },
}

impl fmt::Display for LayoutError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LayoutError::NoGap { p, q } => {
                write!(f, "requires 1 <= q < p, got p = {p}, q = {q}")
            }
            LayoutError::DiagonalGap { p, nq } => {
                write!(
                    f,
                    "requires p <= n*q, got p = {p} > n*q = {nq}: squares cannot tile the diagonal without gaps along it"
                )
            }
            LayoutError::TooManySquares { n } => {
                write!(f, "cannot enumerate {n} square placements")
            }
        }
    }
}

impl std::error::Error for LayoutError {}

/// The canonical diagonal packing of `n` q-squares inside the p-square,
/// in fine units (all lengths scaled by `n − 1`).
///
/// Square `i` sits at `(i·step, i·step)` for `i = 0..n−1`; the last one
/// touches the top-right corner exactly. The construction is purely a
/// function of `(n, p, q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FineLayout {
    n: Radicand,
    p: BigUint,
    q: BigUint,
    square_count: usize,
}

impl FineLayout {
    /// Builds the canonical layout. Requires `1 ≤ q < p ≤ n·q`; the
    /// boundary `p = n·q` is accepted and degenerates the overlap side
    /// to zero.
    pub fn build(n: &Radicand, c: &Candidate) -> Result<Self, LayoutError> {
        if c.q().is_zero() || c.p() <= c.q() {
            return Err(LayoutError::NoGap {
                p: c.p().clone(),
                q: c.q().clone(),
            });
        }
        let nq = n.value() * c.q();
        if c.p() > &nq {
            return Err(LayoutError::DiagonalGap {
                p: c.p().clone(),
                nq,
            });
        }
        let square_count = n
            .value()
            .to_usize()
            .ok_or_else(|| LayoutError::TooManySquares {
                n: n.value().clone(),
            })?;
        Ok(FineLayout {
            n: n.clone(),
            p: c.p().clone(),
            q: c.q().clone(),
            square_count,
        })
    }

    pub fn radicand(&self) -> &Radicand {
        &self.n
    }

    pub fn p(&self) -> &BigUint {
        &self.p
    }

    pub fn q(&self) -> &BigUint {
        &self.q
    }

    pub fn candidate(&self) -> Candidate {
        Candidate::new(self.p.clone(), self.q.clone())
    }

    /// Fine units per length unit: `n − 1`.
    pub fn scale(&self) -> BigUint {
        self.n.scale()
    }

    /// Side of the big square: `(n−1)·p` fine units.
    pub fn big_side(&self) -> BigUint {
        self.scale() * &self.p
    }

    /// Diagonal offset between consecutive small squares: `p − q` fine
    /// units, i.e. `(p−q)/(n−1)` length units.
    pub fn step(&self) -> BigUint {
        &self.p - &self.q
    }

    /// Side of each small square: `(n−1)·q` fine units.
    pub fn small_side(&self) -> BigUint {
        self.scale() * &self.q
    }

    /// Side of each overlap square: `small_side − step`, which equals
    /// `(nq−p)/(n−1)` length units. Zero exactly when `p = n·q`.
    pub fn overlap_side(&self) -> BigUint {
        self.small_side() - self.step()
    }

    /// Number of small squares, `n`.
    pub fn square_count(&self) -> usize {
        self.square_count
    }

    /// The `i`-th small square, at `(i·step, i·step)`.
    pub fn placement(&self, i: usize) -> FineSquare {
        let offset = self.step() * BigUint::from(i);
        FineSquare::new(FinePoint::new(offset.clone(), offset), self.small_side())
    }

    /// All `n` small squares, ascending the main diagonal.
    pub fn placements(&self) -> Vec<FineSquare> {
        (0..self.square_count).map(|i| self.placement(i)).collect()
    }

    /// The `n − 1` overlap squares. The `i`-th is the intersection of
    /// consecutive small squares `i` and `i + 1`.
    pub fn overlap_squares(&self) -> Vec<OverlapSquare> {
        let step = self.step();
        let side = self.overlap_side();
        (0..self.square_count - 1)
            .map(|i| {
                let offset = &step * BigUint::from(i + 1);
                OverlapSquare {
                    index: i,
                    square: FineSquare::new(FinePoint::new(offset.clone(), offset), side.clone()),
                }
            })
            .collect()
    }

    /// The `2·t(n−1)` corner gap squares of side `step` whose union is
    /// exactly the uncovered region of the big square.
    ///
    /// Per corner they form a staircase of rows parallel to the main
    /// diagonal: row `k` (1-based, starting at the big square's corner and
    /// moving toward the diagonal) holds `k` squares.
    pub fn corner_gap_squares(&self) -> Vec<CornerGapSquare> {
        let step = self.step();
        let small = self.small_side();
        let rows = self.square_count - 1;
        let mut out = Vec::with_capacity(2 * rows * (rows + 1) / 2);
        for corner in [Corner::BottomRight, Corner::TopLeft] {
            for row in 1..=rows {
                // Diagonal band at offset small_side + (n−1−row)·step.
                let band = &small + &step * BigUint::from(rows - row);
                for col in 0..row {
                    let along = &step * BigUint::from(col);
                    let (x, y) = match corner {
                        Corner::BottomRight => (&band + &along, along.clone()),
                        Corner::TopLeft => (along.clone(), &band + &along),
                    };
                    out.push(CornerGapSquare {
                        corner,
                        row,
                        col,
                        square: FineSquare::new(FinePoint::new(x, y), step.clone()),
                    });
                }
            }
        }
        out
    }

    /// The exact per-cell coverage counts, by direct accumulation over the
    /// `n` placed squares. Refuses grids beyond [`MAX_GRID_CELLS`].
    pub fn multiplicity_grid(&self) -> Result<MultiplicityGrid, GridError> {
        let big = self.big_side();
        let cells = &big * &big;
        if cells > BigUint::from(MAX_GRID_CELLS) {
            return Err(GridError::TooManyCells { cells });
        }
        // The guard bounds big_side by 10^4, so u64 conversions are exact.
        let side = big.to_u64().expect("bounded by grid guard");
        let squares: Vec<(u64, u64, u64)> = self
            .placements()
            .iter()
            .map(|s| {
                (
                    s.corner.x.to_u64().expect("bounded by grid guard"),
                    s.corner.y.to_u64().expect("bounded by grid guard"),
                    s.side.to_u64().expect("bounded by grid guard"),
                )
            })
            .collect();
        MultiplicityGrid::from_squares(side, &squares)
    }

    /// The area ledger from closed forms: `uncovered = 2·t(n−1)·step²`,
    /// `excess = (n−1)·(small_side−step)²`, `union = big_side² − uncovered`,
    /// `sum_small = n·small_side²`, `defect_fine = (n−1)²·(nq²−p²)`.
    pub fn area_ledger(&self) -> AreaLedger {
        let scale = self.scale();
        let step = self.step();
        let small = self.small_side();
        let big = self.big_side();
        let overlap = self.overlap_side();
        let uncovered = triangular(scale.clone()) * 2u32 * &step * &step;
        let excess = &scale * &overlap * &overlap;
        let union = &big * &big - &uncovered;
        let sum_small = self.n.value() * &small * &small;
        let defect_fine =
            BigInt::from(&scale * &scale) * defect(&self.n, &self.candidate()).into_inner();
        AreaLedger {
            sum_small,
            union,
            uncovered,
            excess,
            defect_fine,
        }
    }

    /// The area ledger measured cell-by-cell on the multiplicity grid.
    /// Subject to the same size guard as [`FineLayout::multiplicity_grid`].
    pub fn area_ledger_via_grid(&self) -> Result<AreaLedger, GridError> {
        Ok(self.multiplicity_grid()?.ledger())
    }

    /// Computes the ledger both ways and insists they agree. The grid size
    /// guard is the only error; disagreement would be a broken internal
    /// invariant and panics.
    pub fn area_ledger_checked(&self) -> Result<AreaLedger, GridError> {
        let closed = self.area_ledger();
        let oracle = self.area_ledger_via_grid()?;
        assert_eq!(
            closed, oracle,
            "closed-form ledger disagrees with grid oracle for {}",
            self.candidate()
        );
        Ok(closed)
    }

    /// The serializable record: `(n, p, q, scale)` plus the ledger in fine
    /// units and the defect in both fine and squared length units.
    pub fn ledger_record(&self) -> LedgerRecord {
        let ledger = self.area_ledger();
        LedgerRecord {
            n: self.n.value().clone(),
            p: self.p.clone(),
            q: self.q.clone(),
            scale: self.scale(),
            uncovered: ledger.uncovered,
            excess: ledger.excess,
            union: ledger.union,
            sum_small: ledger.sum_small,
            defect_fine: ledger.defect_fine,
            defect: defect(&self.n, &self.candidate()).into_inner(),
        }
    }
}

/// Which corner of the big square a gap staircase occupies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Corner {
    TopLeft,
    BottomRight,
}

/// The overlap square between consecutive small squares `index` and
/// `index + 1`, at `((index+1)·step, (index+1)·step)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverlapSquare {
    pub index: usize,
    pub square: FineSquare,
}

/// One square of a corner gap staircase; `row` is 1-based from the big
/// square's corner toward the diagonal and holds `row` squares, indexed
/// by `col`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CornerGapSquare {
    pub corner: Corner,
    pub row: usize,
    pub col: usize,
    pub square: FineSquare,
}

/// Rejection raised by the multiplicity-grid oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GridError {
    /// The grid would exceed [`MAX_GRID_CELLS`] cells.
    TooManyCells { cells: BigUint },
    /// A square pokes outside the grid.
    OutOfBounds { x: u64, y: u64, side: u64 },
}

impl fmt::Display for GridError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridError::TooManyCells { cells } => {
                write!(
                    f,
                    "grid of {cells} cells exceeds the {MAX_GRID_CELLS}-cell guard"
                )
            }
            GridError::OutOfBounds { x, y, side } => {
                write!(f, "square at ({x},{y}) with side {side} exceeds the grid")
            }
        }
    }
}

impl std::error::Error for GridError {}

/// Per-cell coverage counts over a `side × side` grid of fine unit cells:
/// the brute-force oracle behind the closed-form area accounting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityGrid {
    side: usize,
    counts: Vec<u32>,
}

impl MultiplicityGrid {
    /// Accumulates coverage counts for axis-aligned `(x, y, side)` squares
    /// on a `side_len × side_len` grid.
    pub fn from_squares(side_len: u64, squares: &[(u64, u64, u64)]) -> Result<Self, GridError> {
        let cells = u128::from(side_len) * u128::from(side_len);
        if cells > u128::from(MAX_GRID_CELLS) {
            return Err(GridError::TooManyCells {
                cells: BigUint::from(cells),
            });
        }
        let side = side_len as usize;
        let mut counts = vec![0u32; side * side];
        for &(x, y, sq_side) in squares {
            let in_bounds = |start: u64| start.checked_add(sq_side).is_some_and(|end| end <= side_len);
            if !in_bounds(x) || !in_bounds(y) {
                return Err(GridError::OutOfBounds { x, y, side: sq_side });
            }
            for row in y..y + sq_side {
                let base = row as usize * side;
                for cell in &mut counts[base + x as usize..base + (x + sq_side) as usize] {
                    *cell += 1;
                }
            }
        }
        Ok(MultiplicityGrid { side, counts })
    }

    pub fn side(&self) -> usize {
        self.side
    }

    /// Coverage count of the unit cell with lower-left corner `(x, y)`.
    pub fn count(&self, x: usize, y: usize) -> u32 {
        self.counts[y * self.side + x]
    }

    pub fn max_count(&self) -> u32 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    /// Number of cells covered by no square.
    pub fn uncovered_area(&self) -> u64 {
        self.counts.iter().filter(|&&c| c == 0).count() as u64
    }

    /// Number of cells covered by at least one square.
    pub fn union_area(&self) -> u64 {
        self.counts.iter().filter(|&&c| c > 0).count() as u64
    }

    /// Total multiplicity beyond single coverage: `Σ max(count − 1, 0)`.
    pub fn excess_area(&self) -> u64 {
        self.counts
            .iter()
            .map(|&c| u64::from(c.saturating_sub(1)))
            .sum()
    }

    /// Total coverage `Σ count`, the summed area of the placed squares.
    pub fn summed_area(&self) -> u64 {
        self.counts.iter().map(|&c| u64::from(c)).sum()
    }

    /// The ledger measured directly from the counts.
    pub fn ledger(&self) -> AreaLedger {
        let uncovered = self.uncovered_area();
        let excess = self.excess_area();
        AreaLedger {
            sum_small: BigUint::from(self.summed_area()),
            union: BigUint::from(self.union_area()),
            uncovered: BigUint::from(uncovered),
            excess: BigUint::from(excess),
            defect_fine: BigInt::from(excess) - BigInt::from(uncovered),
        }
    }
}

/// Exact area accounting for a layout, in fine-area units.
///
/// Satisfies `union + uncovered = big_side²`, `sum_small = union + excess`,
/// and the master identity `excess − uncovered = defect_fine`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AreaLedger {
    pub sum_small: BigUint,
    pub union: BigUint,
    pub uncovered: BigUint,
    pub excess: BigUint,
    pub defect_fine: BigInt,
}

/// True exactly when the layout's excess area equals its uncovered area,
/// i.e. when the defect `n·q² − p²` is zero. For non-square `n` this is
/// always false — the geometric restatement of irrationality.
pub fn areas_balance(n: &Radicand, c: &Candidate) -> Result<bool, LayoutError> {
    let ledger = FineLayout::build(n, c)?.area_ledger();
    Ok(ledger.excess == ledger.uncovered)
}

/// The flat `key = integer` serialization of a layout's ledger.
///
/// Keys, in order: `n, p, q, scale, uncovered, excess, union, sum_small,
/// defect_fine, defect`. Area fields are fine units; `defect` is
/// `n·q² − p²` in squared length units.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LedgerRecord {
    pub n: BigUint,
    pub p: BigUint,
    pub q: BigUint,
    pub scale: BigUint,
    pub uncovered: BigUint,
    pub excess: BigUint,
    pub union: BigUint,
    pub sum_small: BigUint,
    pub defect_fine: BigInt,
    pub defect: BigInt,
}

impl fmt::Display for LedgerRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n = {}", self.n)?;
        writeln!(f, "p = {}", self.p)?;
        writeln!(f, "q = {}", self.q)?;
        writeln!(f, "scale = {}", self.scale)?;
        writeln!(f, "uncovered = {}", self.uncovered)?;
        writeln!(f, "excess = {}", self.excess)?;
        writeln!(f, "union = {}", self.union)?;
        writeln!(f, "sum_small = {}", self.sum_small)?;
        writeln!(f, "defect_fine = {}", self.defect_fine)?;
        write!(f, "defect = {}", self.defect)
    }
}

/// Rejection raised when parsing a ledger record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RecordParseError {
    BadLine(String),
    UnknownKey(String),
    DuplicateKey(String),
    MissingKey(&'static str),
    BadInteger { key: String, text: String },
}

impl fmt::Display for RecordParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecordParseError::BadLine(line) => write!(f, "expected `key = integer`, got {line:?}"),
            RecordParseError::UnknownKey(key) => write!(f, "unknown key {key:?}"),
            RecordParseError::DuplicateKey(key) => write!(f, "duplicate key {key:?}"),
            RecordParseError::MissingKey(key) => write!(f, "missing key {key:?}"),
            RecordParseError::BadInteger { key, text } => {
                write!(f, "key {key:?} has non-integer value {text:?}")
            }
        }
    }
}

impl std::error::Error for RecordParseError {}

impl FromStr for LedgerRecord {
    type Err = RecordParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut unsigned: [Option<BigUint>; 8] = Default::default();
        let mut signed: [Option<BigInt>; 2] = Default::default();
        const UNSIGNED_KEYS: [&str; 8] = [
            "n",
            "p",
            "q",
            "scale",
            "uncovered",
            "excess",
            "union",
            "sum_small",
        ];
        const SIGNED_KEYS: [&str; 2] = ["defect_fine", "defect"];
        for line in s.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| RecordParseError::BadLine(line.to_string()))?;
            let (key, value) = (key.trim(), value.trim());
            if let Some(slot) = UNSIGNED_KEYS.iter().position(|&k| k == key) {
                let parsed =
                    BigUint::from_str(value).map_err(|_| RecordParseError::BadInteger {
                        key: key.to_string(),
                        text: value.to_string(),
                    })?;
                if unsigned[slot].replace(parsed).is_some() {
                    return Err(RecordParseError::DuplicateKey(key.to_string()));
                }
            } else if let Some(slot) = SIGNED_KEYS.iter().position(|&k| k == key) {
                let parsed = BigInt::from_str(value).map_err(|_| RecordParseError::BadInteger {
                    key: key.to_string(),
                    text: value.to_string(),
                })?;
                if signed[slot].replace(parsed).is_some() {
                    return Err(RecordParseError::DuplicateKey(key.to_string()));
                }
            } else {
                return Err(RecordParseError::UnknownKey(key.to_string()));
            }
        }
        let mut unsigned = unsigned.into_iter();
        let mut take_unsigned = |key: &'static str| {
            unsigned
                .next()
                .flatten()
                .ok_or(RecordParseError::MissingKey(key))
        };
        let n = take_unsigned("n")?;
        let p = take_unsigned("p")?;
        let q = take_unsigned("q")?;
        let scale = take_unsigned("scale")?;
        let uncovered = take_unsigned("uncovered")?;
        let excess = take_unsigned("excess")?;
        let union = take_unsigned("union")?;
        let sum_small = take_unsigned("sum_small")?;
        let mut signed = signed.into_iter();
        let mut take_signed = |key: &'static str| {
            signed
                .next()
                .flatten()
                .ok_or(RecordParseError::MissingKey(key))
        };
        let defect_fine = take_signed("defect_fine")?;
        let defect = take_signed("defect")?;
        Ok(LedgerRecord {
            n,
            p,
            q,
            scale,
            uncovered,
            excess,
            union,
            sum_small,
            defect_fine,
            defect,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use proptest::prelude::*;

    fn layout(n: u32, p: u64, q: u64) -> FineLayout {
        let n = Radicand::classify(n).unwrap();
        FineLayout::build(&n, &Candidate::new(p, q)).unwrap()
    }

    fn corners(squares: &[FineSquare]) -> Vec<(u64, u64)> {
        squares
            .iter()
            .map(|s| {
                (
                    s.corner.x.to_u64().unwrap(),
                    s.corner.y.to_u64().unwrap(),
                )
            })
            .collect()
    }

    #[test]
    fn layout_reference_3_19_11() {
        let layout = layout(3, 19, 11);
        assert_eq!(layout.scale(), BigUint::from(2u32));
        assert_eq!(layout.big_side(), BigUint::from(38u32));
        assert_eq!(layout.step(), BigUint::from(8u32));
        assert_eq!(layout.small_side(), BigUint::from(22u32));
        let placements = layout.placements();
        assert_eq!(corners(&placements), vec![(0, 0), (8, 8), (16, 16)]);
        assert!(placements.iter().all(|s| s.side == BigUint::from(22u32)));
        // 7 length units = 14 fine units at scale 2.
        let overlaps = layout.overlap_squares();
        assert_eq!(overlaps.len(), 2);
        assert!(overlaps
            .iter()
            .all(|o| o.square.side == BigUint::from(14u32)));
        let squares: Vec<FineSquare> = overlaps.into_iter().map(|o| o.square).collect();
        assert_eq!(corners(&squares), vec![(8, 8), (16, 16)]);
    }

    #[test]
    fn layout_reference_5_29_13() {
        let layout = layout(5, 29, 13);
        assert_eq!(layout.scale(), BigUint::from(4u32));
        assert_eq!(layout.big_side(), BigUint::from(116u32));
        assert_eq!(layout.step(), BigUint::from(16u32));
        assert_eq!(layout.small_side(), BigUint::from(52u32));
        let placements = layout.placements();
        assert_eq!(
            corners(&placements),
            vec![(0, 0), (16, 16), (32, 32), (48, 48), (64, 64)]
        );
        // The last square touches the far corner exactly.
        let last = placements.last().unwrap();
        assert_eq!(&last.corner.x + &last.side, layout.big_side());
        assert_eq!(layout.overlap_side(), BigUint::from(36u32));
        assert_eq!(layout.overlap_squares().len(), 4);
    }

    #[test]
    fn layout_reference_2_17_12() {
        let layout = layout(2, 17, 12);
        assert_eq!(layout.scale(), BigUint::one());
        assert_eq!(layout.big_side(), BigUint::from(17u32));
        assert_eq!(layout.step(), BigUint::from(5u32));
        assert_eq!(layout.small_side(), BigUint::from(12u32));
        assert_eq!(corners(&layout.placements()), vec![(0, 0), (5, 5)]);
        let overlaps = layout.overlap_squares();
        assert_eq!(overlaps.len(), 1);
        assert_eq!(overlaps[0].index, 0);
        assert_eq!(overlaps[0].square.side, BigUint::from(7u32));
        assert_eq!(overlaps[0].square.corner, FinePoint::new(5u32, 5u32));
    }

    #[test]
    fn layout_rejects_when_sides_leave_no_gap() {
        let n = Radicand::classify(2u32).unwrap();
        for (p, q) in [(12u64, 12u64), (11, 12), (3, 0)] {
            let err = FineLayout::build(&n, &Candidate::new(p, q)).unwrap_err();
            assert_eq!(
                err,
                LayoutError::NoGap {
                    p: BigUint::from(p),
                    q: BigUint::from(q)
                }
            );
        }
    }

    #[test]
    fn layout_rejects_steps_that_overshoot_the_diagonal() {
        let n = Radicand::classify(2u32).unwrap();
        let err = FineLayout::build(&n, &Candidate::new(25u32, 12u32)).unwrap_err();
        assert_eq!(
            err,
            LayoutError::DiagonalGap {
                p: BigUint::from(25u32),
                nq: BigUint::from(24u32)
            }
        );
        assert!(err.to_string().contains("tile the diagonal"));
    }

    #[test]
    fn layout_boundary_p_equals_nq_degenerates_overlaps() {
        let layout = layout(2, 4, 2);
        assert_eq!(layout.overlap_side(), BigUint::zero());
        assert_eq!(layout.overlap_squares()[0].square.area(), BigUint::zero());
        assert_eq!(layout.area_ledger().excess, BigUint::zero());
    }

    #[test]
    fn corner_gap_squares_reference_counts_and_sides() {
        for (n, p, q, count, side) in [
            (3u32, 19u64, 11u64, 6usize, 8u32),
            (5, 29, 13, 20, 16),
            (2, 17, 12, 2, 5),
        ] {
            let gaps = layout(n, p, q).corner_gap_squares();
            assert_eq!(gaps.len(), count, "gap count for n = {n}");
            assert!(gaps.iter().all(|g| g.square.side == BigUint::from(side)));
            for corner in [Corner::BottomRight, Corner::TopLeft] {
                assert_eq!(
                    gaps.iter().filter(|g| g.corner == corner).count(),
                    count / 2
                );
            }
        }
    }

    #[test]
    fn corner_gap_squares_reference_positions() {
        let gaps = layout(3, 19, 11).corner_gap_squares();
        let at = |corner, row, col| -> (u64, u64) {
            let g = gaps
                .iter()
                .find(|g| g.corner == corner && g.row == row && g.col == col)
                .unwrap();
            (
                g.square.corner.x.to_u64().unwrap(),
                g.square.corner.y.to_u64().unwrap(),
            )
        };
        // Bottom-right staircase: row 1 hugs the corner, row 2 hugs the
        // small squares.
        assert_eq!(at(Corner::BottomRight, 1, 0), (30, 0));
        assert_eq!(at(Corner::BottomRight, 2, 0), (22, 0));
        assert_eq!(at(Corner::BottomRight, 2, 1), (30, 8));
        // Top-left staircase is the mirror image across the diagonal.
        assert_eq!(at(Corner::TopLeft, 1, 0), (0, 30));
        assert_eq!(at(Corner::TopLeft, 2, 0), (0, 22));
        assert_eq!(at(Corner::TopLeft, 2, 1), (8, 30));
        // n = 2 has a single gap square per corner.
        let gaps = layout(2, 17, 12).corner_gap_squares();
        let positions = corners(&gaps.iter().map(|g| g.square.clone()).collect::<Vec<_>>());
        assert_eq!(positions, vec![(12, 0), (0, 12)]);
    }

    #[test]
    fn gap_squares_exactly_tile_the_uncovered_region() {
        for (n, p, q) in [(2u32, 17u64, 12u64), (3, 19, 11), (5, 29, 13), (7, 8, 3)] {
            let layout = layout(n, p, q);
            let grid = layout.multiplicity_grid().unwrap();
            let side = layout.big_side().to_u64().unwrap();
            let gap_squares: Vec<(u64, u64, u64)> = layout
                .corner_gap_squares()
                .iter()
                .map(|g| {
                    (
                        g.square.corner.x.to_u64().unwrap(),
                        g.square.corner.y.to_u64().unwrap(),
                        g.square.side.to_u64().unwrap(),
                    )
                })
                .collect();
            let gap_grid = MultiplicityGrid::from_squares(side, &gap_squares).unwrap();
            // Gap squares never overlap each other or any small square,
            // and together they exhaust the uncovered cells.
            assert!(gap_grid.max_count() <= 1);
            assert_eq!(gap_grid.union_area(), grid.uncovered_area());
            for y in 0..side as usize {
                for x in 0..side as usize {
                    assert!(gap_grid.count(x, y) == 0 || grid.count(x, y) == 0);
                }
            }
        }
    }

    #[test]
    fn multiplicity_reference_3_5_3() {
        let grid = layout(3, 5, 3).multiplicity_grid().unwrap();
        assert_eq!(grid.side(), 10);
        // All three small squares share the fine cells [4,6) × [4,6).
        for x in 4..6 {
            for y in 4..6 {
                assert_eq!(grid.count(x, y), 3);
            }
        }
        assert_eq!(grid.max_count(), 3);
        assert_eq!(grid.count(0, 0), 1);
        assert_eq!(grid.count(2, 2), 2);
        assert_eq!(grid.count(9, 9), 1);
        assert_eq!(grid.count(9, 0), 0);
    }

    #[test]
    fn multiplicity_counts_stay_at_two_for_two_squares() {
        let grid = layout(2, 17, 12).multiplicity_grid().unwrap();
        assert_eq!(grid.max_count(), 2);
        // The overlap square [5,12) × [5,12) is exactly the count-2 set.
        let twos = grid
            .ledger()
            .excess
            .to_u64()
            .unwrap();
        assert_eq!(twos, 49);
    }

    #[test]
    fn ledger_reference_values() {
        let cases: [(u32, u64, u64, u64, u64, i64); 3] = [
            // (n, p, q, uncovered, excess, defect)
            (5, 29, 13, 5120, 5184, 4),
            (3, 19, 11, 384, 392, 2),
            (2, 17, 12, 50, 49, -1),
        ];
        for (n, p, q, uncovered, excess, defect) in cases {
            let layout = layout(n, p, q);
            let ledger = layout.area_ledger_checked().unwrap();
            assert_eq!(ledger.uncovered, BigUint::from(uncovered));
            assert_eq!(ledger.excess, BigUint::from(excess));
            let scale = (n - 1) as i64;
            assert_eq!(ledger.defect_fine, BigInt::from(scale * scale * defect));
            let big = layout.big_side();
            assert_eq!(&ledger.union + &ledger.uncovered, &big * &big);
            assert_eq!(ledger.sum_small, &ledger.union + &ledger.excess);
        }
    }

    #[test]
    fn ledger_balances_exactly_for_perfect_squares() {
        let n = Radicand::classify(9u32).unwrap();
        let c = Candidate::new(3u32, 1u32);
        let ledger = FineLayout::build(&n, &c).unwrap().area_ledger_checked().unwrap();
        assert_eq!(ledger.uncovered, BigUint::from(288u32));
        assert_eq!(ledger.excess, BigUint::from(288u32));
        assert_eq!(ledger.defect_fine, BigInt::zero());
        assert!(areas_balance(&n, &c).unwrap());
    }

    #[test]
    fn areas_never_balance_for_nonsquare_radicands() {
        for (n, p, q) in [(2u32, 17u64, 12u64), (3, 19, 11), (5, 29, 13), (7, 45, 17)] {
            let n = Radicand::classify(n).unwrap();
            assert!(!areas_balance(&n, &Candidate::new(p, q)).unwrap());
        }
    }

    #[test]
    fn grid_guard_rejects_oversized_layouts() {
        let layout = layout(2, 1_000_001, 1_000_000);
        assert!(matches!(
            layout.multiplicity_grid(),
            Err(GridError::TooManyCells { .. })
        ));
        // Closed forms keep working far beyond the grid guard.
        let ledger = layout.area_ledger();
        assert_eq!(
            ledger.defect_fine,
            BigInt::from(2i64 * 1_000_000 * 1_000_000 - 1_000_001i64 * 1_000_001)
        );
    }

    #[test]
    fn grid_rejects_out_of_bounds_squares() {
        assert!(matches!(
            MultiplicityGrid::from_squares(10, &[(5, 0, 6)]),
            Err(GridError::OutOfBounds { .. })
        ));
        assert!(matches!(
            MultiplicityGrid::from_squares(10, &[(u64::MAX, 0, 2)]),
            Err(GridError::OutOfBounds { .. })
        ));
        assert!(matches!(
            MultiplicityGrid::from_squares(100_000, &[]),
            Err(GridError::TooManyCells { .. })
        ));
    }

    #[test]
    fn record_display_is_stable() {
        let record = layout(5, 29, 13).ledger_record();
        let expected = "\
n = 5
p = 29
q = 13
scale = 4
uncovered = 5120
excess = 5184
union = 8336
sum_small = 13520
defect_fine = 64
defect = 4";
        assert_eq!(record.to_string(), expected);
    }

    #[test]
    fn record_round_trips_through_display() {
        for (n, p, q) in [(2u32, 17u64, 12u64), (3, 19, 11), (5, 29, 13), (7, 8, 3)] {
            let record = layout(n, p, q).ledger_record();
            let reparsed: LedgerRecord = record.to_string().parse().unwrap();
            assert_eq!(reparsed, record);
        }
    }

    #[test]
    fn record_parse_rejections() {
        let full = layout(2, 17, 12).ledger_record().to_string();
        let missing = full.lines().skip(1).collect::<Vec<_>>().join("\n");
        assert_eq!(
            missing.parse::<LedgerRecord>().unwrap_err(),
            RecordParseError::MissingKey("n")
        );
        let duplicated = format!("{full}\nn = 2");
        assert_eq!(
            duplicated.parse::<LedgerRecord>().unwrap_err(),
            RecordParseError::DuplicateKey("n".into())
        );
        let unknown = format!("{full}\nextra = 1");
        assert_eq!(
            unknown.parse::<LedgerRecord>().unwrap_err(),
            RecordParseError::UnknownKey("extra".into())
        );
        let negative = full.replace("uncovered = 50", "uncovered = -50");
        assert_eq!(
            negative.parse::<LedgerRecord>().unwrap_err(),
            RecordParseError::BadInteger {
                key: "uncovered".into(),
                text: "-50".into()
            }
        );
        assert_eq!(
            "n: 2".parse::<LedgerRecord>().unwrap_err(),
            RecordParseError::BadLine("n: 2".into())
        );
    }

    proptest! {
        // Closed forms satisfy the accounting identities for any valid
        // triple, far beyond grid-oracle reach.
        #[test]
        fn closed_form_ledger_identities(
            (n, p, q) in (2u64..=50, 1u64..=1_000_000)
                .prop_flat_map(|(n, q)| (Just(n), q + 1..=n * q, Just(q)))
        ) {
            let n = Radicand::classify(n).unwrap();
            let c = Candidate::new(p, q);
            let layout = FineLayout::build(&n, &c).unwrap();
            let ledger = layout.area_ledger();
            let big = layout.big_side();
            prop_assert_eq!(&ledger.union + &ledger.uncovered, &big * &big);
            prop_assert_eq!(&ledger.sum_small, &(&ledger.union + &ledger.excess));
            prop_assert_eq!(
                BigInt::from(ledger.excess.clone()) - BigInt::from(ledger.uncovered.clone()),
                ledger.defect_fine.clone()
            );
            let scale = BigInt::from(layout.scale());
            prop_assert_eq!(
                ledger.defect_fine,
                &scale * &scale * defect(&n, &c).into_inner()
            );
        }

        // The grid oracle recovers every closed form exactly.
        #[test]
        fn grid_oracle_agrees_with_closed_forms(
            (n, p, q) in (2u64..=7, 1u64..=12)
                .prop_flat_map(|(n, q)| (Just(n), q + 1..=n * q, Just(q)))
        ) {
            let n = Radicand::classify(n).unwrap();
            let layout = FineLayout::build(&n, &Candidate::new(p, q)).unwrap();
            prop_assert_eq!(
                layout.area_ledger(),
                layout.area_ledger_via_grid().unwrap()
            );
        }

        // Each cell's covering squares form a contiguous run of indices, so
        // all excess is attributable to consecutive pairs.
        #[test]
        fn covering_squares_form_contiguous_runs(
            (n, p, q) in (2u64..=5, 1u64..=8)
                .prop_flat_map(|(n, q)| (Just(n), q + 1..=n * q, Just(q)))
        ) {
            let n = Radicand::classify(n).unwrap();
            let layout = FineLayout::build(&n, &Candidate::new(p, q)).unwrap();
            let grid = layout.multiplicity_grid().unwrap();
            let placements = layout.placements();
            for y in 0..grid.side() {
                for x in 0..grid.side() {
                    let bx = BigUint::from(x);
                    let by = BigUint::from(y);
                    let members: Vec<usize> = placements
                        .iter()
                        .enumerate()
                        .filter(|(_, s)| s.contains_cell(&bx, &by))
                        .map(|(i, _)| i)
                        .collect();
                    prop_assert_eq!(members.len() as u32, grid.count(x, y));
                    if let (Some(first), Some(last)) = (members.first(), members.last()) {
                        prop_assert_eq!(last - first + 1, members.len());
                    }
                }
            }
        }

        // Grid bookkeeping identities hold for arbitrary square sets, not
        // just diagonal layouts.
        #[test]
        fn grid_identities_for_arbitrary_squares(
            squares in proptest::collection::vec((0u64..40, 0u64..40, 0u64..=15), 0..8)
        ) {
            let side = 55u64;
            let grid = MultiplicityGrid::from_squares(side, &squares).unwrap();
            let ledger = grid.ledger();
            let summed: u64 = squares.iter().map(|&(_, _, s)| s * s).sum();
            prop_assert_eq!(&ledger.sum_small, &BigUint::from(summed));
            prop_assert_eq!(
                &ledger.union + &ledger.uncovered,
                BigUint::from(side * side)
            );
            prop_assert_eq!(
                BigInt::from(ledger.sum_small) - BigInt::from(ledger.union),
                BigInt::from(ledger.excess)
            );
        }
    }
}
