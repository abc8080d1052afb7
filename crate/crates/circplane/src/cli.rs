//! Command-line interface.
//!
//! Exit codes: 0 success, 2 certification failed, 64 usage error,
//! 65 invalid input value (epsilon, window, graph), 74 I/O error.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use circplane_core::explore::{optimize_family, threshold_report, OptimizeResult, DEFAULT_SWEEP_SAMPLES};
use circplane_core::finite::circular_chromatic;
use circplane_core::render::{RenderMode, Window};
use circplane_core::verify::{
    adversarial_min_margin, verify_cases, AdversarialReport, CertificateReport, MarginReport, DEFAULT_TOLERANCE,
};
use circplane_core::{Point, StripScheme};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::formats::{encode_ppm, parse_graph, sweep_csv, write_json, FormatError};
use crate::parallel::{eps_sweep_par, render_par, sample_pairs_par, thread_count};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CERT_FAILED: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_IO: i32 = 74;

/// Reports list at most this many violating pairs; the count is always exact.
pub const MAX_REPORTED_VIOLATIONS: usize = 100;

/// Scheme selector: `thm1`, `eps:<value>` or `explicit:h,sigma,ell,slope[,eps]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchemeSpec {
    Thm1,
    Eps(f64),
    Explicit {
        h: f64,
        sigma: f64,
        ell: f64,
        slope: f64,
        eps: f64,
    },
}

impl FromStr for SchemeSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("not a number: {t:?}"));
        if s == "thm1" {
            return Ok(Self::Thm1);
        }
        if let Some(v) = s.strip_prefix("eps:") {
            return Ok(Self::Eps(num(v)?));
        }
        if let Some(list) = s.strip_prefix("explicit:") {
            let v = list.split(',').map(num).collect::<Result<Vec<_>, _>>()?;
            return match v[..] {
                [h, sigma, ell, slope] => Ok(Self::Explicit {
                    h,
                    sigma,
                    ell,
                    slope,
                    eps: 0.0,
                }),
                [h, sigma, ell, slope, eps] => Ok(Self::Explicit {
                    h,
                    sigma,
                    ell,
                    slope,
                    eps,
                }),
                _ => Err("explicit scheme takes h,sigma,ell,slope[,eps]".into()),
            };
        }
        Err("expected thm1, eps:<value> or explicit:h,sigma,ell,slope[,eps]".into())
    }
}

impl SchemeSpec {
    pub fn build(self) -> circplane_core::Result<StripScheme> {
        match self {
            Self::Thm1 => Ok(StripScheme::thm1()),
            Self::Eps(e) => StripScheme::thm2(e),
            Self::Explicit {
                h,
                sigma,
                ell,
                slope,
                eps,
            } => StripScheme::explicit(h, sigma, ell, slope, eps),
        }
    }
}

/// Plane window `x0:x1:y0:y1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowSpec([f64; 4]);

impl FromStr for WindowSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let v: Vec<f64> = s
            .split(':')
            .map(|t| t.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| "window must be x0:x1:y0:y1".to_string())?;
        <[f64; 4]>::try_from(v)
            .map(WindowSpec)
            .map_err(|_| "window must be x0:x1:y0:y1".into())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "circplane",
    version,
    about = "Strip colorings of the plane: certify, explore, render"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SchemeArg {
    /// thm1 | eps:<value> | explicit:h,sigma,ell,slope[,eps]
    #[arg(long, default_value = "thm1", allow_hyphen_values = true)]
    pub scheme: SchemeSpec,
}

#[derive(Debug, Args)]
pub struct SeedArg {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Interval case analysis plus random sampling; exit 2 if either fails.
    Verify {
        #[command(flatten)]
        scheme: SchemeArg,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Adversarial search for the smallest margin, with a sampled baseline.
    Search {
        #[command(flatten)]
        scheme: SchemeArg,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        /// Grid points per unit length (at least 8).
        #[arg(long, default_value_t = 12)]
        density: u32,
        /// Local descent iterations per seed point.
        #[arg(long, default_value_t = 200)]
        iters: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Perimeter, certificate and sampled margin per epsilon, as CSV.
    Sweep {
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            default_value = "0,0.01,0.02,0.03,0.04,0.05,0.06,0.07,0.08,0.09,0.2"
        )]
        eps: Vec<f64>,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long, default_value_t = DEFAULT_SWEEP_SAMPLES)]
        samples: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Epsilon at which the band scheme's perimeter reaches the target.
    Threshold {
        #[arg(long, allow_hyphen_values = true)]
        target_r: f64,
        #[arg(long)]
        json: bool,
    },
    /// Local search for a smaller certified perimeter.
    Optimize {
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        /// Starting scheme; defaults to thm1 at eps 0 and eps:<eps> otherwise.
        #[arg(long, allow_hyphen_values = true)]
        scheme: Option<SchemeSpec>,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long, default_value_t = 300)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Circular chromatic number of an edge-list graph file.
    Chic {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render the coloring over a window as binary PPM.
    Render {
        #[command(flatten)]
        scheme: SchemeArg,
        #[arg(long, default_value = "-8:8:-3:3", allow_hyphen_values = true)]
        window: WindowSpec,
        #[arg(long, default_value_t = 60)]
        ppu: u32,
        #[arg(long, value_enum, default_value_t = Mode::Hue)]
        mode: Mode,
        /// Draw the rectangle partition.
        #[arg(long)]
        overlay: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Color of a single point.
    ColorAt {
        #[command(flatten)]
        scheme: SchemeArg,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, allow_hyphen_values = true)]
        y: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Hue,
    Gray,
}

impl From<Mode> for RenderMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Hue => RenderMode::Hue,
            Mode::Gray => RenderMode::Gray,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Domain(#[from] circplane_core::Error),
    #[error("{0}")]
    Format(#[from] FormatError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Stdout(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(circplane_core::Error::InfeasibleInit) => EXIT_CERT_FAILED,
            CliError::Domain(_) | CliError::Format(_) => EXIT_DATA,
            CliError::Io { .. } | CliError::Stdout(_) => EXIT_IO,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub samples: u64,
    pub tolerance: f64,
    pub pass: bool,
    pub certificate: CertificateReport,
    pub sampling: MarginReport,
}

#[derive(Debug, Serialize)]
pub struct SearchReport {
    pub scheme: StripScheme,
    pub seed: u64,
    pub density: u32,
    pub iters: u32,
    pub adversarial: AdversarialReport,
    pub sampling: MarginReport,
}

#[derive(Debug, Serialize)]
pub struct OptimizeReport {
    pub seed: u64,
    pub epsilon: f64,
    pub budget: u64,
    pub result: OptimizeResult,
}

#[derive(Debug, Serialize)]
pub struct ChicReport {
    pub k: u32,
    pub d: u32,
    pub value: f64,
    pub witness: Vec<u32>,
}

fn truncated(mut r: MarginReport) -> MarginReport {
    r.violations.truncate(MAX_REPORTED_VIOLATIONS);
    r
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn emit_json<T: Serialize>(out: &mut dyn Write, path: Option<&Path>, value: &T) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let mut buf = Vec::new();
            write_json(&mut buf, value)?;
            write_file(p, &buf)
        }
        None => Ok(write_json(out, value)?),
    }
}

/// Runs one command and returns its exit code.
pub fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    let threads = thread_count();
    match cmd {
        Command::Verify {
            scheme,
            seed,
            samples,
            tolerance,
            out: path,
        } => {
            let sch = scheme.scheme.build()?;
            let certificate = verify_cases(&sch, tolerance)?;
            let sampling = truncated(sample_pairs_par(&sch, samples, seed.seed, threads));
            let pass = certificate.pass && sampling.violation_count == 0;
            let report = VerifyReport {
                seed: seed.seed,
                samples,
                tolerance,
                pass,
                certificate,
                sampling,
            };
            emit_json(out, path.as_deref(), &report)?;
            Ok(if pass { EXIT_OK } else { EXIT_CERT_FAILED })
        }
        Command::Search {
            scheme,
            seed,
            samples,
            density,
            iters,
            out: path,
        } => {
            let sch = scheme.scheme.build()?;
            let adversarial = adversarial_min_margin(&sch, density, iters)?;
            let sampling = truncated(sample_pairs_par(&sch, samples, seed.seed, threads));
            let report = SearchReport {
                scheme: sch,
                seed: seed.seed,
                density,
                iters,
                adversarial,
                sampling,
            };
            emit_json(out, path.as_deref(), &report)?;
            Ok(EXIT_OK)
        }
        Command::Sweep {
            eps,
            seed,
            samples,
            out: path,
        } => {
            let csv = sweep_csv(&eps_sweep_par(&eps, samples, seed.seed, threads));
            match path {
                Some(p) => write_file(&p, csv.as_bytes())?,
                None => out.write_all(csv.as_bytes())?,
            }
            Ok(EXIT_OK)
        }
        Command::Threshold { target_r, json } => {
            let rep = threshold_report(target_r);
            if json {
                write_json(out, &rep)?;
                return Ok(EXIT_OK);
            }
            match (rep.epsilon, rep.band) {
                (Some(e), Some([lo, hi])) => {
                    writeln!(out, "{e}")?;
                    writeln!(out, "band [{lo}, {hi}]")?;
                }
                _ => writeln!(out, "none")?,
            }
            let cmp = if rep.reference_within_target { "<=" } else { ">" };
            writeln!(out, "reference_epsilon {}", rep.reference_epsilon)?;
            writeln!(out, "r_at_reference {} ({cmp} {})", rep.r_at_reference, rep.target_r)?;
            Ok(EXIT_OK)
        }
        Command::Optimize {
            eps,
            scheme,
            seed,
            budget,
            out: path,
        } => {
            let spec = scheme.unwrap_or(if eps == 0.0 {
                SchemeSpec::Thm1
            } else {
                SchemeSpec::Eps(eps)
            });
            let init = spec.build()?;
            let result = optimize_family(eps, &init, budget)?;
            let report = OptimizeReport {
                seed: seed.seed,
                epsilon: eps,
                budget,
                result,
            };
            emit_json(out, path.as_deref(), &report)?;
            Ok(EXIT_OK)
        }
        Command::Chic { graph, out: path } => {
            let text = fs::read_to_string(&graph).map_err(|source| CliError::Io {
                path: graph.clone(),
                source,
            })?;
            let cc = circular_chromatic(&parse_graph(&text)?)?;
            let report = ChicReport {
                k: cc.k,
                d: cc.d,
                value: cc.value,
                witness: cc.witness,
            };
            emit_json(out, path.as_deref(), &report)?;
            Ok(EXIT_OK)
        }
        Command::Render {
            scheme,
            window,
            ppu,
            mode,
            overlay,
            out: path,
        } => {
            let sch = scheme.scheme.build()?;
            let [x0, x1, y0, y1] = window.0;
            let w = Window::new(x0, x1, y0, y1, ppu)?;
            let img = render_par(&sch, &w, mode.into(), overlay, threads);
            write_file(&path, &encode_ppm(&img))?;
            Ok(EXIT_OK)
        }
        Command::ColorAt { scheme, x, y } => {
            let sch = scheme.scheme.build()?;
            writeln!(out, "{}", sch.color_at(Point::new(x, y)))?;
            Ok(EXIT_OK)
        }
    }
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
