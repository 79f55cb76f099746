//! Deterministic SVG emission of packing figures and equation banners.
//!
//! Output is plain SVG 1.1 text assembled by string concatenation with a
//! fixed attribute order, so identical inputs yield byte-identical files.
//! All emitted coordinates are exact integers: fine-unit lengths are
//! multiplied by `unit_scale / (n−1)`, and [`render_layout`] insists that
//! `unit_scale` is a multiple of `n−1`.

use std::fmt;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{Candidate, Radicand};
use crate::geometry::FineLayout;

/// Pixels of whitespace around every figure.
pub const MARGIN: u32 = 10;

/// Width in pixels of the slot holding an `=` or `+` glyph in an
/// equation banner.
const GLYPH_SLOT: u32 = 24;

/// Which way the packing is drawn.
///
/// `Canonical` keeps the layout's own coordinates: the first small square
/// sits at the lower-left corner and the chain ascends to the upper
/// right. `Reflected` mirrors across the vertical axis
/// (`x ↦ big_side − x − side`), so the chain descends from the upper
/// left — the arrangement used by the reference figures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Canonical,
    Reflected,
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::Canonical => "canonical",
            Orientation::Reflected => "reflected",
        })
    }
}

/// An opacity value in `[0, 1]`, kept as the exact decimal string that
/// will be emitted (no floating point anywhere).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Opacity(String);

impl Opacity {
    /// Accepts `0`, `1`, or a decimal like `0.35` (and `1.00`); rejects
    /// anything outside `[0, 1]` or not a plain decimal numeral.
    pub fn new(text: &str) -> Result<Self, StyleError> {
        let bad = || StyleError::BadOpacity {
            text: text.to_string(),
        };
        let (int, frac) = match text.split_once('.') {
            Some((int, frac)) => (int, Some(frac)),
            None => (text, None),
        };
        if !matches!(int, "0" | "1") {
            return Err(bad());
        }
        if let Some(frac) = frac {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            if int == "1" && !frac.bytes().all(|b| b == b'0') {
                return Err(bad());
            }
        }
        Ok(Opacity(text.to_string()))
    }

    pub fn opaque() -> Self {
        Opacity("1".to_string())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Opacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Rejection raised while building a [`FigureStyle`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StyleError {
    /// Opacity must be an exact decimal in `[0, 1]`.
    BadOpacity { text: String },
}

impl fmt::Display for StyleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StyleError::BadOpacity { text } => {
                write!(f, "opacity must be a decimal in [0,1], got {text:?}")
            }
        }
    }
}

impl std::error::Error for StyleError {}

/// Colors, stroke, scale, and toggles for figure output.
///
/// `unit_scale` is output pixels per *length* unit (the side of the big
/// square is `p` length units). [`render_layout`] requires it to be a
/// multiple of `n − 1` so that every fine-unit coordinate lands on an
/// integer pixel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FigureStyle {
    pub small_fill: String,
    pub small_opacity: Opacity,
    pub overlap_fill: String,
    pub overlap_opacity: Opacity,
    pub stroke_width: u32,
    pub unit_scale: u64,
    /// Emit `p`, `q`, step, and overlap-side annotations.
    pub labels: bool,
    /// Outline the corner gap staircase.
    pub corner_grid: bool,
}

impl Default for FigureStyle {
    /// Muted blue on red, hairline strokes, 12 pixels per length unit
    /// (12 is divisible by `n − 1` for every n in {2, 3, 5, 7}), labels
    /// and corner grid off.
    fn default() -> Self {
        FigureStyle {
            small_fill: "#9999ff".to_string(),
            small_opacity: Opacity::opaque(),
            overlap_fill: "#ff9999".to_string(),
            overlap_opacity: Opacity::opaque(),
            stroke_width: 1,
            unit_scale: 12,
            labels: false,
            corner_grid: false,
        }
    }
}

impl FigureStyle {
    /// The smallest multiple of `n − 1` that is at least `unit_scale`
    /// (and at least `n − 1` itself), or `None` if that exceeds `u64`.
    /// Use this to repair an arbitrary requested scale before rendering.
    pub fn snapped_unit_scale(&self, n: &Radicand) -> Option<u64> {
        let scale = n.scale();
        let u = BigUint::from(self.unit_scale.max(1));
        let snapped = ((&u + &scale - 1u32) / &scale) * &scale;
        snapped.to_u64()
    }
}

/// What a rectangle in the element list depicts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RectKind {
    /// The big square, stroked only.
    Outline,
    /// One square of the corner gap staircase, stroked only.
    GapGrid,
    /// A small square, filled with `small_fill`.
    Small,
    /// An overlap square, filled with `overlap_fill`.
    Overlap,
}

/// A rectangle to paint, in pixel coordinates (SVG y grows downward).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RectElement {
    pub kind: RectKind,
    pub x: BigUint,
    pub y: BigUint,
    pub side: BigUint,
}

/// Horizontal anchoring of a text element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TextAnchor {
    End,
    Middle,
}

impl TextAnchor {
    fn as_svg(self) -> &'static str {
        match self {
            TextAnchor::End => "end",
            TextAnchor::Middle => "middle",
        }
    }
}

/// A text annotation, in pixel coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TextElement {
    pub x: BigUint,
    pub y: BigUint,
    pub anchor: TextAnchor,
    pub content: String,
}

/// One entry of the paint list, in paint order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PaintElement {
    Rect(RectElement),
    Text(TextElement),
}

/// A finished figure: viewport size, the paint list that produced it,
/// and the serialized SVG text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SvgDocument {
    width: BigUint,
    height: BigUint,
    elements: Vec<PaintElement>,
    text: String,
}

impl SvgDocument {
    fn build(
        width: BigUint,
        height: BigUint,
        elements: Vec<PaintElement>,
        style: &FigureStyle,
    ) -> Self {
        let mut text = String::new();
        text.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        let _ = writeln!(
            text,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
        );
        for element in &elements {
            match element {
                PaintElement::Rect(r) => {
                    let paint = match r.kind {
                        RectKind::Outline => format!(
                            "fill=\"none\" stroke=\"#000000\" stroke-width=\"{}\"",
                            style.stroke_width
                        ),
                        RectKind::GapGrid => format!(
                            "fill=\"none\" stroke=\"#888888\" stroke-width=\"{}\"",
                            style.stroke_width
                        ),
                        RectKind::Small => format!(
                            "fill=\"{}\" fill-opacity=\"{}\" stroke=\"#000000\" stroke-width=\"{}\"",
                            escape(&style.small_fill),
                            style.small_opacity,
                            style.stroke_width
                        ),
                        RectKind::Overlap => format!(
                            "fill=\"{}\" fill-opacity=\"{}\" stroke=\"#000000\" stroke-width=\"{}\"",
                            escape(&style.overlap_fill),
                            style.overlap_opacity,
                            style.stroke_width
                        ),
                    };
                    let _ = writeln!(
                        text,
                        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" {}/>",
                        r.x, r.y, r.side, r.side, paint
                    );
                }
                PaintElement::Text(t) => {
                    let _ = writeln!(
                        text,
                        "<text x=\"{}\" y=\"{}\" text-anchor=\"{}\" font-family=\"monospace\" font-size=\"12\" fill=\"#000000\">{}</text>",
                        t.x,
                        t.y,
                        t.anchor.as_svg(),
                        escape(&t.content)
                    );
                }
            }
        }
        text.push_str("</svg>\n");
        SvgDocument {
            width,
            height,
            elements,
            text,
        }
    }

    pub fn width(&self) -> &BigUint {
        &self.width
    }

    pub fn height(&self) -> &BigUint {
        &self.height
    }

    /// The paint list, in paint order.
    pub fn elements(&self) -> &[PaintElement] {
        &self.elements
    }

    /// The complete SVG file contents.
    pub fn text(&self) -> &str {
        &self.text
    }
}

/// Rejection raised when a figure cannot be produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RenderError {
    /// `unit_scale` must be positive.
    UnitScaleZero,
    /// `unit_scale` must be a multiple of `n − 1` to keep pixel
    /// coordinates integral.
    UnitScaleNotMultiple { unit_scale: u64, scale: BigUint },
    /// The banner needs one square per unit of n.
    TooManySquares { n: BigUint },
}

impl fmt::Display for RenderError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RenderError::UnitScaleZero => write!(f, "unit scale must be a positive integer"),
            RenderError::UnitScaleNotMultiple { unit_scale, scale } => write!(
                f,
                "unit scale {unit_scale} is not a multiple of n-1 = {scale}; coordinates would not be integral"
            ),
            RenderError::TooManySquares { n } => {
                write!(f, "cannot draw {n} squares in one banner")
            }
        }
    }
}

impl std::error::Error for RenderError {}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for ch in text.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(ch),
        }
    }
    out
}

/// `num/den` reduced, printed as an integer when the division is exact.
fn ratio_string(num: &BigUint, den: &BigUint) -> String {
    if num.is_zero() {
        return "0".to_string();
    }
    let g = num.gcd(den);
    let (num, den) = (num / &g, den / &g);
    if den == BigUint::from(1u32) {
        num.to_string()
    } else {
        format!("{num}/{den}")
    }
}

/// Draws a layout as SVG: the big-square outline, optionally the corner
/// gap staircase, the n small squares, the n−1 overlap squares, and
/// optionally annotations — in exactly that paint order.
///
/// `unit_scale` must be a positive multiple of `n − 1`.
pub fn render_layout(
    layout: &FineLayout,
    style: &FigureStyle,
    orientation: Orientation,
) -> Result<SvgDocument, RenderError> {
    if style.unit_scale == 0 {
        return Err(RenderError::UnitScaleZero);
    }
    let scale = layout.scale();
    let u = BigUint::from(style.unit_scale);
    if !(&u % &scale).is_zero() {
        return Err(RenderError::UnitScaleNotMultiple {
            unit_scale: style.unit_scale,
            scale,
        });
    }
    let k = &u / &layout.scale();
    let margin = BigUint::from(MARGIN);
    let big = layout.big_side();
    let side_px = &big * &k;
    let extent = &side_px + BigUint::from(2 * MARGIN);

    // Math coordinates are y-up with the origin at the big square's
    // lower-left corner; pixels are y-down. Reflection happens in math
    // coordinates before the flip.
    let place = |x: &BigUint, y: &BigUint, side: &BigUint, kind: RectKind| -> RectElement {
        let x = match orientation {
            Orientation::Canonical => x.clone(),
            Orientation::Reflected => &big - x - side,
        };
        RectElement {
            kind,
            x: &margin + &x * &k,
            y: &margin + (&big - y - side) * &k,
            side: side * &k,
        }
    };
    let zero = BigUint::zero();

    let mut elements = Vec::new();
    let outline = place(&zero, &zero, &big, RectKind::Outline);
    elements.push(PaintElement::Rect(outline.clone()));

    let gaps = layout.corner_gap_squares();
    let first_gap = place(
        &gaps[0].square.corner.x,
        &gaps[0].square.corner.y,
        &gaps[0].square.side,
        RectKind::GapGrid,
    );
    if style.corner_grid {
        for gap in &gaps {
            elements.push(PaintElement::Rect(place(
                &gap.square.corner.x,
                &gap.square.corner.y,
                &gap.square.side,
                RectKind::GapGrid,
            )));
        }
    }

    let mut first_small = None;
    for square in layout.placements() {
        let rect = place(
            &square.corner.x,
            &square.corner.y,
            &square.side,
            RectKind::Small,
        );
        first_small.get_or_insert(rect.clone());
        elements.push(PaintElement::Rect(rect));
    }
    let first_small = first_small.expect("layouts have at least two squares");

    let mut first_overlap = None;
    for overlap in layout.overlap_squares() {
        let rect = place(
            &overlap.square.corner.x,
            &overlap.square.corner.y,
            &overlap.square.side,
            RectKind::Overlap,
        );
        first_overlap.get_or_insert(rect.clone());
        elements.push(PaintElement::Rect(rect));
    }
    let first_overlap = first_overlap.expect("layouts have at least one overlap");

    if style.labels {
        let two = BigUint::from(2u32);
        let label = |rect: &RectElement, content: String| -> PaintElement {
            PaintElement::Text(TextElement {
                x: &rect.x + &rect.side,
                y: &rect.y + &rect.side / &two,
                anchor: TextAnchor::End,
                content,
            })
        };
        let step_len = ratio_string(&layout.step(), &layout.scale());
        let overlap_len = ratio_string(&layout.overlap_side(), &layout.scale());
        elements.push(label(&outline, format!("p = {}", layout.p())));
        elements.push(label(&first_small, format!("q = {}", layout.q())));
        elements.push(label(&first_gap, format!("(p-q)/(n-1) = {step_len}")));
        elements.push(label(
            &first_overlap,
            format!("(nq-p)/(n-1) = {overlap_len}"),
        ));
    }

    Ok(SvgDocument::build(extent.clone(), extent, elements, style))
}

/// Draws the area equation `p² = q² + q² + …` as a banner: one outlined
/// p-square, an `=` glyph, and n filled q-squares separated by `+`
/// glyphs, all sides to scale (`unit_scale` pixels per length unit,
/// no divisibility requirement) and bottom-aligned.
pub fn render_equation_banner(
    n: &Radicand,
    c: &Candidate,
    style: &FigureStyle,
) -> Result<SvgDocument, RenderError> {
    if style.unit_scale == 0 {
        return Err(RenderError::UnitScaleZero);
    }
    let count = n
        .value()
        .to_usize()
        .ok_or_else(|| RenderError::TooManySquares {
            n: n.value().clone(),
        })?;
    let u = BigUint::from(style.unit_scale);
    let margin = BigUint::from(MARGIN);
    let slot = BigUint::from(GLYPH_SLOT);
    let two = BigUint::from(2u32);

    let p_px = c.p() * &u;
    let q_px = c.q() * &u;
    let tall = p_px.clone().max(q_px.clone());
    let baseline = &margin + &tall;
    let height = &baseline + &margin;
    // Glyphs sit vertically centered on the q-squares.
    let glyph_y = &baseline - &q_px / &two;

    let mut elements = Vec::new();
    let mut x = margin.clone();
    elements.push(PaintElement::Rect(RectElement {
        kind: RectKind::Outline,
        x: x.clone(),
        y: &baseline - &p_px,
        side: p_px.clone(),
    }));
    x += &p_px;
    for i in 0..count {
        let glyph = if i == 0 { "=" } else { "+" };
        elements.push(PaintElement::Text(TextElement {
            x: &x + &slot / &two,
            y: glyph_y.clone(),
            anchor: TextAnchor::Middle,
            content: glyph.to_string(),
        }));
        x += &slot;
        elements.push(PaintElement::Rect(RectElement {
            kind: RectKind::Small,
            x: x.clone(),
            y: &baseline - &q_px,
            side: q_px.clone(),
        }));
        x += &q_px;
    }
    let width = &x + &margin;
    Ok(SvgDocument::build(width, height, elements, style))
}
