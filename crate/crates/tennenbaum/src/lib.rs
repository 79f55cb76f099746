//! Exact-arithmetic geometric infinite descent for square-root
//! irrationality.
//!
//! The crate packs `n` squares of side `q` along the diagonal of a square
//! of side `p`, balances the packing's area ledger against the defect
//! `n·q² − p²`, and iterates the descent maps that shrink exact solutions —
//! certifying, with integer inequalities, that `√n` is irrational for
//! `n ∈ {2, 3, 5, 7}`. Every length, area, and defect is an
//! arbitrary-precision integer; no floating point is involved anywhere.
//!
//! A chapter-by-chapter guide with runnable examples lives in `book/` at
//! the repository root; its code blocks run as doc-tests of this crate.

pub mod arith;
pub mod descent;
pub mod geometry;
pub mod render;
pub mod search;

/// Runs every Rust snippet in the guide as a doc-test, so the prose in
/// `book/` can never drift from the library it describes.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}

    #[doc = include_str!("../../../book/src/packing.md")]
    mod packing {}

    #[doc = include_str!("../../../book/src/ledger.md")]
    mod ledger {}

    #[doc = include_str!("../../../book/src/descent.md")]
    mod descent {}

    #[doc = include_str!("../../../book/src/certificates.md")]
    mod certificates {}

    #[doc = include_str!("../../../book/src/search.md")]
    mod search {}

    #[doc = include_str!("../../../book/src/figures.md")]
    mod figures {}

    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
