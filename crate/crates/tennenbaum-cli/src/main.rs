//! Command-line surface over the `tennenbaum` library: irrationality
//! certificates, descent orbits, area ledgers, exact searches,
//! convergents, and SVG figures.
//!
//! Every number printed here is computed by the library in exact integer
//! arithmetic; the binary only parses arguments and formats results.
//! Exit codes: 0 success, 2 usage error, 3 precondition violation,
//! 4 resource guard tripped.

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use tennenbaum::arith::{defect, Candidate, Radicand};
use tennenbaum::descent::{
    orbit, prove_irrational, variant_for, MapVariant, StopReason, Unsupported, VariantDecision,
};
use tennenbaum::geometry::{FineLayout, GridError, LayoutError};
use tennenbaum::render::{
    render_equation_banner, render_layout, FigureStyle, Orientation, RenderError,
};
use tennenbaum::search::{convergents, find_exact};

const EXIT_FAILURE: u8 = 1;
const EXIT_PRECONDITION: u8 = 3;
const EXIT_GUARD: u8 = 4;

type Failure = (u8, String);

#[derive(Parser)]
#[command(
    name = "tennenbaum",
    version,
    about = "Exact geometric infinite-descent irrationality proofs",
    long_about = "Constructs diagonal square packings with exact integer \
                  arithmetic, balances their area ledgers against the defect \
                  n*q^2 - p^2, runs descent maps, and certifies for which n \
                  the geometric descent proves sqrt(n) irrational."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn parse_biguint(text: &str) -> Result<BigUint, String> {
    text.parse()
        .map_err(|_| format!("expected a nonnegative integer, got {text:?}"))
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Full,
    Halved,
}

impl From<VariantArg> for MapVariant {
    fn from(v: VariantArg) -> MapVariant {
        match v {
            VariantArg::Full => MapVariant::Full,
            VariantArg::Halved => MapVariant::Halved,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OrientationArg {
    Canonical,
    Reflected,
}

impl From<OrientationArg> for Orientation {
    fn from(o: OrientationArg) -> Orientation {
        match o {
            OrientationArg::Canonical => Orientation::Canonical,
            OrientationArg::Reflected => Orientation::Reflected,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Certify whether geometric descent proves sqrt(n) irrational
    Prove {
        #[arg(value_parser = parse_biguint)]
        n: BigUint,
    },
    /// Run a descent orbit from (p, q), one line per step
    Descend {
        #[arg(value_parser = parse_biguint)]
        n: BigUint,
        #[arg(value_parser = parse_biguint)]
        p: BigUint,
        #[arg(value_parser = parse_biguint)]
        q: BigUint,
        /// Map variant; defaults to the certified choice for n
        #[arg(long, value_enum)]
        variant: Option<VariantArg>,
        /// Step budget
        #[arg(long, default_value_t = 100)]
        max_steps: usize,
    },
    /// Print the exact area ledger of the diagonal packing for (p, q)
    Layout {
        #[arg(value_parser = parse_biguint)]
        n: BigUint,
        #[arg(value_parser = parse_biguint)]
        p: BigUint,
        #[arg(value_parser = parse_biguint)]
        q: BigUint,
        /// Write the record to this file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// Re-measure every ledger entry on the multiplicity grid
        #[arg(long)]
        oracle: bool,
    },
    /// Draw the packing (or the area-equation banner) as an SVG file
    Render {
        #[arg(value_parser = parse_biguint)]
        n: BigUint,
        #[arg(value_parser = parse_biguint)]
        p: BigUint,
        #[arg(value_parser = parse_biguint)]
        q: BigUint,
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = OrientationArg::Reflected)]
        orientation: OrientationArg,
        /// Pixels per length unit; must be a multiple of n-1
        #[arg(long, default_value_t = 12)]
        scale: u64,
        /// Draw the p^2 = q^2 + ... + q^2 strip instead of the packing
        #[arg(long)]
        banner: bool,
        /// Annotate p, q, the step, and the overlap side
        #[arg(long)]
        labels: bool,
        /// Outline the corner gap staircase
        #[arg(long)]
        corner_grid: bool,
    },
    /// List exact solutions of n*q^2 = p^2 with q up to q_max
    Search {
        #[arg(value_parser = parse_biguint)]
        n: BigUint,
        q_max: u64,
    },
    /// List continued-fraction convergents of sqrt(n) with their defects
    Convergents {
        #[arg(value_parser = parse_biguint)]
        n: BigUint,
        count: usize,
    },
    /// Tabulate the usable descent variant for every n up to n_max
    Limits { n_max: u64 },
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}

fn classify(n: BigUint) -> Result<Radicand, Failure> {
    Radicand::classify(n).map_err(|e| (EXIT_PRECONDITION, e.to_string()))
}

fn layout_failure(err: LayoutError) -> Failure {
    let code = match err {
        LayoutError::TooManySquares { .. } => EXIT_GUARD,
        _ => EXIT_PRECONDITION,
    };
    (code, err.to_string())
}

fn grid_failure(err: GridError) -> Failure {
    (EXIT_GUARD, err.to_string())
}

fn render_failure(err: RenderError, style: &FigureStyle, n: &Radicand) -> Failure {
    match err {
        RenderError::TooManySquares { .. } => (EXIT_GUARD, err.to_string()),
        RenderError::UnitScaleZero => (EXIT_PRECONDITION, err.to_string()),
        RenderError::UnitScaleNotMultiple { .. } => {
            let mut message = err.to_string();
            if let Some(snapped) = style.snapped_unit_scale(n) {
                message.push_str(&format!("; try --scale {snapped}"));
            }
            (EXIT_PRECONDITION, message)
        }
    }
}

fn io_failure(path: &Path, err: std::io::Error) -> Failure {
    (EXIT_FAILURE, format!("cannot write {}: {err}", path.display()))
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Prove { n } => {
            let n = classify(n)?;
            let certificate = prove_irrational(&n);
            if let VariantDecision::Unsupported(Unsupported::PerfectSquare { sqrt }) =
                certificate.decision()
            {
                println!(
                    "sqrt({n}) = {sqrt} exactly: ({sqrt},1) satisfies {n}*1^2 = {sqrt}^2, \
                     as does every multiple ({sqrt}m,m)",
                    n = n.value()
                );
            } else {
                println!("{certificate}");
            }
            Ok(())
        }
        Command::Descend {
            n,
            p,
            q,
            variant,
            max_steps,
        } => {
            let n = classify(n)?;
            let variant = match variant {
                Some(v) => v.into(),
                None => match variant_for(&n) {
                    VariantDecision::Chosen(v) => v,
                    VariantDecision::Unsupported(reason) => {
                        return Err((
                            EXIT_PRECONDITION,
                            format!(
                                "no descending variant for n = {}: {reason}; \
                                 pass --variant to force one",
                                n.value()
                            ),
                        ));
                    }
                },
            };
            let start = Candidate::new(p, q);
            let orbit = orbit(&n, &start, variant, max_steps);
            if orbit.steps().is_empty() {
                if let StopReason::PreconditionFailed(err) = orbit.stop_reason() {
                    return Err((
                        EXIT_PRECONDITION,
                        format!("cannot start a {variant} step at {start}: {err}"),
                    ));
                }
            }
            for step in orbit.steps() {
                println!(
                    "{} -> {}  defect {} -> {}",
                    step.before(),
                    step.after(),
                    step.defect_before(),
                    step.defect_after()
                );
            }
            println!("{}", orbit.stop_reason());
            Ok(())
        }
        Command::Layout { n, p, q, out, oracle } => {
            let n = classify(n)?;
            let layout =
                FineLayout::build(&n, &Candidate::new(p, q)).map_err(layout_failure)?;
            if oracle {
                layout.area_ledger_checked().map_err(grid_failure)?;
                eprintln!("oracle: closed forms match the multiplicity grid");
            }
            let record = layout.ledger_record();
            match out {
                Some(path) => fs::write(&path, format!("{record}\n"))
                    .map_err(|e| io_failure(&path, e))?,
                None => println!("{record}"),
            }
            Ok(())
        }
        Command::Render {
            n,
            p,
            q,
            out,
            orientation,
            scale,
            banner,
            labels,
            corner_grid,
        } => {
            let n = classify(n)?;
            let candidate = Candidate::new(p, q);
            let style = FigureStyle {
                unit_scale: scale,
                labels,
                corner_grid,
                ..FigureStyle::default()
            };
            let document = if banner {
                render_equation_banner(&n, &candidate, &style)
                    .map_err(|e| render_failure(e, &style, &n))?
            } else {
                let layout =
                    FineLayout::build(&n, &candidate).map_err(layout_failure)?;
                render_layout(&layout, &style, orientation.into())
                    .map_err(|e| render_failure(e, &style, &n))?
            };
            fs::write(&out, document.text()).map_err(|e| io_failure(&out, e))?;
            println!(
                "wrote {} ({} x {} px)",
                out.display(),
                document.width(),
                document.height()
            );
            Ok(())
        }
        Command::Search { n, q_max } => {
            let n = classify(n)?;
            let found = find_exact(&n, q_max);
            if found.is_empty() {
                println!("none up to q_max = {q_max}");
            } else {
                for candidate in found {
                    println!("{candidate}");
                }
            }
            Ok(())
        }
        Command::Convergents { n, count } => {
            let n = classify(n)?;
            let list =
                convergents(&n, count).map_err(|e| (EXIT_PRECONDITION, e.to_string()))?;
            for candidate in list {
                println!("{candidate} defect {}", defect(&n, &candidate));
            }
            Ok(())
        }
        Command::Limits { n_max } => {
            print_row("n", "variant", "n*(n-4)", "n*(n-9)", "parity lemma");
            for value in 2..=n_max {
                let n = Radicand::classify(value).expect("loop starts at 2");
                let certificate = prove_irrational(&n);
                let variant = match certificate.decision() {
                    VariantDecision::Chosen(v) => v.to_string(),
                    VariantDecision::Unsupported(Unsupported::PerfectSquare { sqrt }) => {
                        format!("none ({sqrt}^2)")
                    }
                    VariantDecision::Unsupported(_) => "none".to_string(),
                };
                print_row(
                    value,
                    variant,
                    certificate.full_inequality(),
                    certificate.halved_inequality(),
                    if certificate.parity_lemma_holds() { "yes" } else { "no" },
                );
            }
            Ok(())
        }
    }
}

fn print_row(
    n: impl Display,
    variant: impl Display,
    full: impl Display,
    halved: impl Display,
    parity: impl Display,
) {
    println!("{n:<6} {variant:<12} {full:>10} {halved:>10}  {parity}");
}
