//! Byte-exact golden files for figure output.
//!
//! Any intentional change to the SVG format will fail these tests; rerun
//! with `GOLDEN_BLESS=1` to regenerate the files under `tests/golden/`
//! after reviewing the new output.

use std::fs;
use std::path::PathBuf;

use tennenbaum::arith::{Candidate, Radicand};
use tennenbaum::geometry::FineLayout;
use tennenbaum::render::{render_equation_banner, render_layout, FigureStyle, Orientation};

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

fn check(name: &str, actual: &str) {
    // Golden output must always be well-formed XML, blessed or not.
    roxmltree::Document::parse(actual).expect("figure must parse as XML");
    let path = golden_path(name);
    if std::env::var_os("GOLDEN_BLESS").is_some() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("missing golden file {}: {e}", path.display()));
    assert_eq!(
        actual,
        expected,
        "{name} drifted from its golden copy; rerun with GOLDEN_BLESS=1 if intentional"
    );
}

fn full_style() -> FigureStyle {
    FigureStyle {
        labels: true,
        corner_grid: true,
        ..FigureStyle::default()
    }
}

fn figure(n: u32, p: u32, q: u32) -> String {
    let n = Radicand::classify(n).unwrap();
    let layout = FineLayout::build(&n, &Candidate::new(p, q)).unwrap();
    render_layout(&layout, &full_style(), Orientation::Reflected)
        .unwrap()
        .text()
        .to_string()
}

#[test]
fn sqrt2_reflected_figure() {
    check("fig_sqrt2_reflected.svg", &figure(2, 17, 12));
}

#[test]
fn sqrt3_reflected_figure() {
    check("fig_sqrt3_reflected.svg", &figure(3, 19, 11));
}

#[test]
fn sqrt5_reflected_figure() {
    check("fig_sqrt5_reflected.svg", &figure(5, 29, 13));
}

#[test]
fn sqrt3_equation_banner() {
    let n = Radicand::classify(3u32).unwrap();
    let doc =
        render_equation_banner(&n, &Candidate::new(19u32, 11u32), &FigureStyle::default())
            .unwrap();
    check("banner_sqrt3.svg", doc.text());
}
