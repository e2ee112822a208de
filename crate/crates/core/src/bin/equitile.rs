use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use equitile::assembler::{generate_plane, plane_squared_edge_budget, PlaneConfig};
use equitile::document::{Parameters, TilingDocument};
use equitile::selector::{certify_strip_with_budget, Certification, ShearConfig};
use equitile::strip::{
    in_certified_interval, perimeter_budget, StripWindow, CERTIFIED_INTERVAL, DEFAULT_BIT_BUDGET,
};
use equitile::supertile::{supertile_plane_window_with, SupertileConfig};
use equitile::svg::{render_svg, SvgOptions};
use equitile::tiling::{TilingWindow, WindowKind};
use equitile::verify::verify_window;
use equitile::{Error, Scalar};

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_BUDGET: u8 = 4;

#[derive(Parser)]
#[command(
    name = "equitile",
    version,
    about = "Exact unit-area tilings by pairwise incongruent convex polygons"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Strip,
    Plane,
    Pentagon,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a tiling window and write it as JSON.
    Generate {
        #[arg(long, value_enum, default_value = "plane")]
        mode: Mode,
        /// Start height, `p/q`, `r+s*sqrt3` or `1/sqrt3`.
        #[arg(long, default_value = "3/5")]
        y0: String,
        #[arg(long, default_value_t = 4)]
        imax: u64,
        #[arg(long, default_value_t = 5)]
        strips: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        rows: usize,
        #[arg(long, default_value_t = 3)]
        cols: usize,
        /// Maximum bit length of any exact coordinate during generation.
        #[arg(long, default_value_t = DEFAULT_BIT_BUDGET)]
        bit_budget: u64,
        #[arg(long, default_value_t = 10_000)]
        max_draws: usize,
        /// Strip mode only: accept any start height in (0, 1) and skip
        /// certification.
        #[arg(long)]
        uncertified: bool,
        /// Output file; defaults to `<mode>.json` in `$EQUITILE_OUT_DIR` or
        /// the working directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every exact check on a document.
    Verify {
        file: PathBuf,
        /// Print the report as JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Render a document as SVG.
    Render {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        labels: bool,
        /// Colour tiles by congruence class.
        #[arg(long)]
        classes: bool,
        #[arg(long, default_value_t = 1200.0)]
        width: f64,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) => EXIT_IO,
        Error::ExactBudget { .. } | Error::DrawBudget { .. } => EXIT_BUDGET,
        Error::Parse(_)
        | Error::Json(_)
        | Error::InvalidStartHeight(..)
        | Error::Precondition(_) => EXIT_USAGE,
        _ => EXIT_VERIFY,
    }
}

fn parse_y0(text: &str) -> Result<Scalar, Error> {
    match text.trim() {
        "1/sqrt3" => Ok(Scalar::inv_sqrt3()),
        t => t.parse(),
    }
}

fn default_out(mode: &str, ext: &str) -> PathBuf {
    let dir = std::env::var_os("EQUITILE_OUT_DIR")
        .map(PathBuf::from)
        .unwrap_or_default();
    dir.join(format!("{mode}.{ext}"))
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Strip => "strip",
        Mode::Plane => "plane",
        Mode::Pentagon => "pentagon",
    }
}

#[allow(clippy::too_many_arguments)]
fn generate(
    mode: Mode,
    y0: &str,
    imax: u64,
    strips: usize,
    seed: u64,
    rows: usize,
    cols: usize,
    bit_budget: u64,
    max_draws: usize,
    uncertified: bool,
) -> Result<TilingDocument, Error> {
    match mode {
        Mode::Strip => {
            let y = parse_y0(y0)?;
            let budget = if in_certified_interval(&y) {
                perimeter_budget(&y).ok().map(|p| p.squared_edge)
            } else {
                None
            };
            let window = if uncertified {
                StripWindow::generate_with_budget(&y, imax, bit_budget)?
            } else {
                let Some(r) = y.as_rational() else {
                    return Err(Error::InvalidStartHeight(y.to_string(), CERTIFIED_INTERVAL));
                };
                match certify_strip_with_budget(r, imax, bit_budget)? {
                    Ok(c) => {
                        eprintln!(
                            "certified: {} triangles, {} key comparisons, no translation-congruent pair",
                            c.certificate.scan.triangles, c.certificate.scan.key_comparisons
                        );
                        c.window
                    }
                    Err(Certification::Offending { pair: (a, b), .. }) => {
                        return Err(Error::TranslationCongruent(format!("{a} and {b}")))
                    }
                    Err(Certification::Certified(_)) => unreachable!(),
                }
            };
            let w = TilingWindow::from_triangles(WindowKind::Strip, &window.triangles, imax);
            Ok(TilingDocument::from_window(
                &w,
                Parameters {
                    y0: Some(y),
                    horizon: imax,
                    edge_budget: budget,
                    ..Default::default()
                },
            ))
        }
        Mode::Plane => {
            let y = parse_y0(y0)?;
            let Some(r) = y.as_rational() else {
                return Err(Error::InvalidStartHeight(y.to_string(), CERTIFIED_INTERVAL));
            };
            let config = PlaneConfig {
                shear: ShearConfig {
                    max_draws,
                    ..ShearConfig::default()
                },
                bit_budget,
            };
            let build = generate_plane(r, imax, strips, seed, &config)?;
            eprintln!(
                "shears: {}",
                build
                    .selection
                    .choices
                    .iter()
                    .map(|c| c.delta.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            );
            Ok(TilingDocument::from_window(
                &build.window,
                Parameters {
                    y0: Some(y.clone()),
                    deltas: build
                        .selection
                        .choices
                        .iter()
                        .map(|c| c.delta.clone())
                        .collect(),
                    seed: Some(seed),
                    horizon: imax,
                    edge_budget: Some(plane_squared_edge_budget(&y)?),
                    ..Default::default()
                },
            ))
        }
        Mode::Pentagon => {
            let config = SupertileConfig {
                max_draws,
                ..SupertileConfig::default()
            };
            let build = supertile_plane_window_with(rows, cols, seed, &config)?;
            Ok(TilingDocument::from_window(
                &build.window,
                Parameters {
                    seed: Some(seed),
                    horizon: build.window.horizon,
                    rows: Some(rows),
                    cols: Some(cols),
                    edge_budget: Some(Scalar::int(17)),
                    ..Default::default()
                },
            ))
        }
    }
}

fn verify(file: &Path, json: bool) -> Result<bool, Error> {
    let doc = TilingDocument::load(file)?;
    let w = match doc.to_window() {
        Ok(w) => w,
        Err(Error::InvalidPolygon(msg)) => {
            println!(
                "window {}\n  tile validity  FAIL\n    {msg}\n  overall        FAIL",
                file.display()
            );
            return Ok(false);
        }
        Err(e) => return Err(e),
    };
    let id = format!("{} {} ({})", doc.kind, file.display(), w.len());
    let report = verify_window(&w, &id, doc.parameters.edge_budget.as_ref());
    if json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!("{}", report.to_text());
    }
    Ok(report.passed())
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Generate {
            mode,
            y0,
            imax,
            strips,
            seed,
            rows,
            cols,
            bit_budget,
            max_draws,
            uncertified,
            out,
        } => {
            let doc = generate(
                mode,
                &y0,
                imax,
                strips,
                seed,
                rows,
                cols,
                bit_budget,
                max_draws,
                uncertified,
            )?;
            let path = out.unwrap_or_else(|| default_out(mode_name(mode), "json"));
            doc.save(&path)?;
            eprintln!(
                "wrote {} polygons to {}",
                doc.polygons.len(),
                path.display()
            );
            Ok(0)
        }
        Command::Verify { file, json } => Ok(if verify(&file, json)? { 0 } else { EXIT_VERIFY }),
        Command::Render {
            file,
            out,
            labels,
            classes,
            width,
        } => {
            let doc = TilingDocument::load(&file)?;
            let w = doc.to_window()?;
            let svg = render_svg(
                &w,
                &SvgOptions {
                    width,
                    labels,
                    color_by_class: classes,
                    ..SvgOptions::default()
                },
            );
            let path = out.unwrap_or_else(|| file.with_extension("svg"));
            std::fs::write(&path, svg)?;
            eprintln!("wrote {}", path.display());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
