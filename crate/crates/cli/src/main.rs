//! `sabar`: exact persistent-homology barcodes of filtered simplicial
//! complexes, Rips filtrations, and sub-level filtrations of bounded
//! semi-algebraic sets.

mod emit;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sabar_core::filtration::{parse_filtration, Barcode};
use sabar_core::formula::{parse_formula, ClosedFormula};
use sabar_core::multipoly::parse_poly;
use sabar_core::pipeline::{barcode_semialgebraic, PipelineOptions, SemialgebraicInput};
use sabar_core::rational::{format_rational, parse_rational, Q};
use sabar_core::realize::{make_closed, realize_univariate, DEFAULT_ATOM_BUDGET};
use sabar_core::reduction::barcodes_by_reduction;
use sabar_core::rips::rips_filtration;
use sabar_core::thom::order_roots;
use sabar_core::unipoly::UniPoly;

#[derive(Parser)]
#[command(name = "sabar", version, about = "Exact persistent-homology barcodes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute barcodes.
    Barcode {
        #[command(subcommand)]
        kind: BarcodeKind,
    },
    /// Real-root utilities on univariate polynomials.
    Roots {
        #[command(subcommand)]
        kind: RootsKind,
    },
    /// Formula utilities.
    Formula {
        #[command(subcommand)]
        kind: FormulaKind,
    },
}

#[derive(Args)]
struct OutputArgs {
    /// Write the barcode JSON to this path.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write an SVG bar plot to this path.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Subcommand)]
enum BarcodeKind {
    /// Barcode of a filtration file (`filtration v1` format).
    Simplicial {
        /// Path to the filtration file.
        file: PathBuf,
        /// Highest homology dimension to report.
        #[arg(long = "max-dim")]
        max_dim: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Barcode of the sub-level filtration of a semi-algebraic set.
    Sublevel {
        /// Closed region formula, e.g. '(x^2 + y^2 - 1 <= 0)'.
        #[arg(long)]
        formula: String,
        /// Filtering polynomial, e.g. 'x'.
        #[arg(long)]
        poly: String,
        /// Cube half-width (also the ball constant of the perturbed family).
        #[arg(long)]
        radius: String,
        /// Highest homology dimension to report.
        #[arg(long = "max-dim")]
        max_dim: usize,
        /// Grid subdivisions per axis (at least 2).
        #[arg(long)]
        grid: usize,
        /// Relax every formula atom by this amount on the grid.
        #[arg(long, default_value = "0")]
        thicken: String,
        /// Width of reported isolating intervals.
        #[arg(long = "approx-width", default_value = "1/1000")]
        approx_width: String,
        /// Extra non-critical levels to insert (repeatable).
        #[arg(long = "extra-level")]
        extra_levels: Vec<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Barcode of the Rips filtration of a rational point cloud.
    Rips {
        /// CSV of points, one per line, rational coordinates.
        #[arg(long)]
        points: PathBuf,
        /// Highest simplex dimension to build (at most 3).
        #[arg(long = "max-dim")]
        max_dim: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Subcommand)]
enum RootsKind {
    /// Thom encodings of all real roots of the given polynomials, in order.
    Order {
        /// Semicolon-separated univariate polynomials, e.g. 'X^2-2;X^2-3'.
        #[arg(long)]
        polys: String,
        /// Width of printed isolating intervals.
        #[arg(long = "approx-width", default_value = "1/1000")]
        approx_width: String,
    },
}

#[derive(Subcommand)]
enum FormulaKind {
    /// Convert a univariate formula with closed realization into a closed
    /// formula (weak relations, no negations).
    MakeClosed {
        /// Univariate formula, e.g. '(x^2 - 2 <= 0)'.
        #[arg(long)]
        formula: String,
    },
}

/// Input-contract violations exit with 3, internal invariant failures with 4.
enum Failure {
    Input(String),
    Internal(String),
}

impl From<String> for Failure {
    fn from(message: String) -> Self {
        Failure::Input(message)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(3)
        }
        Err(Failure::Internal(message)) => {
            eprintln!("internal error: {message}");
            ExitCode::from(4)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Barcode { kind } => match kind {
            BarcodeKind::Simplicial {
                file,
                max_dim,
                output,
            } => {
                let text = std::fs::read_to_string(&file)
                    .map_err(|e| format!("cannot read {}: {e}", file.display()))?;
                let filtration = parse_filtration(&text)?;
                let dim = max_dim
                    .or_else(|| {
                        filtration
                            .complexes()
                            .last()
                            .and_then(|k| k.dim())
                    })
                    .unwrap_or(0);
                let codes = barcodes_by_reduction(&filtration, dim);
                write_outputs(&codes, &output)
            }
            BarcodeKind::Sublevel {
                formula,
                poly,
                radius,
                max_dim,
                grid,
                thicken,
                approx_width,
                extra_levels,
                output,
            } => {
                if grid < 2 {
                    return Err(Failure::Input("--grid must be at least 2".to_string()));
                }
                let input = SemialgebraicInput {
                    formula: parse_closed_formula(&formula)?,
                    poly: parse_poly(&poly)?,
                    radius: parse_positive(&radius, "--radius")?,
                    level: max_dim,
                };
                let opts = PipelineOptions {
                    grid_n: grid,
                    thicken: {
                        let t = parse_rational(&thicken)?;
                        if t < Q::from_integer(0.into()) {
                            return Err(Failure::Input(
                                "--thicken must be non-negative".to_string(),
                            ));
                        }
                        t
                    },
                    approx_width: parse_positive(&approx_width, "--approx-width")?,
                    extra_levels: extra_levels
                        .iter()
                        .map(|s| parse_rational(s))
                        .collect::<Result<_, _>>()?,
                };
                let codes = barcode_semialgebraic(&input, &opts).map_err(classify)?;
                write_outputs(&codes, &output)
            }
            BarcodeKind::Rips {
                points,
                max_dim,
                output,
            } => {
                let text = std::fs::read_to_string(&points)
                    .map_err(|e| format!("cannot read {}: {e}", points.display()))?;
                let cloud = parse_points(&text)?;
                let filtration = rips_filtration(&cloud, max_dim)?;
                let codes = barcodes_by_reduction(&filtration, max_dim);
                write_outputs(&codes, &output)
            }
        },
        Command::Roots {
            kind:
                RootsKind::Order {
                    polys,
                    approx_width,
                },
        } => {
            let width = parse_positive(&approx_width, "--approx-width")?;
            let mut family = Vec::new();
            for chunk in polys.split(';') {
                let chunk = chunk.trim();
                if chunk.is_empty() {
                    continue;
                }
                let p = parse_poly(chunk)?;
                let var = p
                    .support_vars()
                    .first()
                    .cloned()
                    .unwrap_or_else(|| "X".to_string());
                family.push(UniPoly::from_multipoly(&p, &var)?);
            }
            if family.is_empty() {
                return Err(Failure::Input("--polys names no polynomials".to_string()));
            }
            let var = family[0].var().to_string();
            let family: Vec<UniPoly> = family
                .into_iter()
                .map(|u| {
                    if u.var() == var {
                        u
                    } else {
                        UniPoly::new(&var, u.coeffs().to_vec())
                    }
                })
                .collect();
            let roots = order_roots(&family)?;
            for t in &roots {
                let (lo, hi) = t.rational_approx(&width);
                println!(
                    "{}  approx [{}, {}]",
                    t.to_json(),
                    format_rational(&lo),
                    format_rational(&hi)
                );
            }
            Ok(())
        }
        Command::Formula {
            kind: FormulaKind::MakeClosed { formula },
        } => {
            let theta = parse_formula(&formula)?;
            let psi = make_closed(&theta, DEFAULT_ATOM_BUDGET).map_err(classify)?;
            let as_formula = psi.to_formula();
            println!("{}", as_formula.to_text());
            let realization = realize_univariate(&as_formula).map_err(classify)?;
            println!("realization: {realization}");
            Ok(())
        }
    }
}

fn classify(message: String) -> Failure {
    if message.contains("invariant") {
        Failure::Internal(message)
    } else {
        Failure::Input(message)
    }
}

fn parse_closed_formula(text: &str) -> Result<ClosedFormula, Failure> {
    let f = parse_formula(text)?;
    ClosedFormula::from_formula(&f).map_err(|e| {
        Failure::Input(format!(
            "--formula must be a closed formula (weak relations, no negations): {e}"
        ))
    })
}

fn parse_positive(text: &str, flag: &str) -> Result<Q, Failure> {
    let q = parse_rational(text)?;
    if q <= Q::from_integer(0.into()) {
        return Err(Failure::Input(format!("{flag} must be positive")));
    }
    Ok(q)
}

fn parse_points(text: &str) -> Result<Vec<Vec<Q>>, Failure> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let coords: Result<Vec<Q>, String> =
            line.split(',').map(|t| parse_rational(t.trim())).collect();
        out.push(coords?);
    }
    if out.is_empty() {
        return Err(Failure::Input("points file is empty".to_string()));
    }
    Ok(out)
}

fn write_outputs(codes: &[Barcode], output: &OutputArgs) -> Result<(), Failure> {
    print!("{}", emit::barcodes_text(codes));
    if let Some(path) = &output.json {
        std::fs::write(path, emit::barcodes_json(codes))
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    if let Some(path) = &output.svg {
        std::fs::write(path, svg::barcodes_svg(codes))
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}
