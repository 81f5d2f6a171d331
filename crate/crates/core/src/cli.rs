//! The `barrier-occ` command line.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bridge_laws::{first_hit_density, q_closed, q_integral, BridgeSpec};
use crate::error::{Error, Result};
use crate::limit_laws::{reduce_to_unit_budget, tabulate_law, LawName, StartSpec};
use crate::numerics::QuadratureSpec;
use crate::samplers::{last_zero, occupation_below_zero};
use crate::samplers::{
    sample_conditioned_bm, GridPath, LimitSampler, RngStream, DEFAULT_MAX_ATTEMPTS, LIMIT_STREAM_OFFSET,
};
use crate::validation::{run_suite, Tolerances};

/// Starting points of the published distribution-function figure.
pub const FIGURE_STARTS: [f64; 5] = [-2.0, -1.0, 0.0, 1.0, 2.0];

#[derive(Debug, Parser)]
#[command(
    name = "barrier-occ",
    version,
    about = "Laws and samplers for Brownian motion with a budget of time below zero"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, clap::Args)]
pub struct Common {
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, clap::Args)]
pub struct Start {
    /// Starting point.
    #[arg(long, allow_negative_numbers = true)]
    pub y: f64,
    /// Budget of time below zero.
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
}

#[derive(Debug, clap::Args)]
pub struct Seed {
    #[arg(long, env = "BARRIER_OCC_SEED", default_value_t = 7)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Distribution function of the last zero g on a 400-point log grid.
    CdfG {
        #[command(flatten)]
        start: Start,
        #[command(flatten)]
        io: Common,
    },
    /// Distribution function of the occupation time Γ on a 400-point log grid.
    CdfGamma {
        #[command(flatten)]
        start: Start,
        #[command(flatten)]
        io: Common,
    },
    /// Occupation law of a bridge to zero, by integral and by closed form.
    Q {
        #[command(flatten)]
        start: Start,
        /// Bridge length.
        #[arg(long)]
        t: f64,
        /// Occupation level.
        #[arg(long)]
        u: f64,
        #[command(flatten)]
        io: Common,
    },
    /// Density of the first zero of a bridge from y to 0 of length t.
    TauDensity {
        #[command(flatten)]
        start: Start,
        #[arg(long)]
        t: f64,
        #[command(flatten)]
        io: Common,
    },
    /// Paths of the limit process.
    SampleX {
        #[command(flatten)]
        start: Start,
        /// Horizon.
        #[arg(long = "T", default_value_t = 5.0)]
        horizon: f64,
        #[arg(long, default_value_t = 1.0 / 256.0)]
        step: f64,
        /// Number of paths.
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[command(flatten)]
        seed: Seed,
        /// Output CSV; a JSON sidecar is written next to it.
        #[arg(long)]
        out: PathBuf,
    },
    /// Paths of Brownian motion conditioned on its time below zero.
    SampleCbm {
        #[command(flatten)]
        start: Start,
        #[arg(long = "T", default_value_t = 5.0)]
        horizon: f64,
        #[arg(long, default_value_t = 1.0 / 256.0)]
        step: f64,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[command(flatten)]
        seed: Seed,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the acceptance suite and write its reports as JSON.
    Validate {
        #[command(flatten)]
        seed: Seed,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Distribution functions of g and Γ for y in {-2, -1, 0, 1, 2}.
    Figure1 {
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[command(flatten)]
        io: Common,
    },
}

/// Failure of a command after its arguments were accepted.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Numerical(#[from] Error),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("{0} check(s) failed")]
    ChecksFailed(usize),
}

/// Twelve significant digits, dot decimal separator, shortest form.
pub fn fmt_num(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("round trip");
    if rounded != 0.0 && !(1e-5..1e15).contains(&rounded.abs()) {
        format!("{rounded:e}")
    } else {
        rounded.to_string()
    }
}

fn write_out(out: Option<&Path>, text: &str) -> io::Result<()> {
    match out {
        Some(p) => fs::write(p, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serialisable") + "\n"
}

#[derive(Serialize)]
struct CdfRow {
    x: f64,
    cdf: f64,
}

/// `(x, cdf)` rows for a law at `(y, c)`, in the caller's time units.
fn law_rows(law: LawName, start: &Start) -> Result<Vec<CdfRow>> {
    let (y1, c) = reduce_to_unit_budget(&StartSpec::new(start.y, start.c)?)?;
    let report = tabulate_law(law, y1)?;
    let table = &report.table;
    Ok(table
        .grid()
        .iter()
        .zip(table.values())
        .map(|(&x, &cdf)| CdfRow { x: x * c, cdf })
        .collect())
}

fn cdf_text(rows: &[CdfRow], format: Format) -> String {
    match format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut s = String::from("x,cdf\n");
            for r in rows {
                s.push_str(&format!("{},{}\n", fmt_num(r.x), fmt_num(r.cdf)));
            }
            s
        }
    }
}

#[derive(Serialize)]
struct QReport {
    y: f64,
    t: f64,
    u: f64,
    integral: f64,
    closed: f64,
    difference: f64,
}

fn path_csv(path: &GridPath, time_scale: f64, space_scale: f64) -> String {
    let mut s = String::from("t,value\n");
    for (t, v) in path.times().zip(path.values()) {
        s.push_str(&format!("{},{}\n", fmt_num(t * time_scale), fmt_num(v * space_scale)));
    }
    s
}

/// File for path `i` of `n`: the given name when `n == 1`, else `stem_i.ext`.
fn indexed(out: &Path, i: usize, n: usize) -> PathBuf {
    if n == 1 {
        return out.to_path_buf();
    }
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("path");
    let name = match out.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}_{i}.{ext}"),
        None => format!("{stem}_{i}"),
    };
    out.with_file_name(name)
}

fn sidecar(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

#[derive(Serialize)]
struct LimitSidecarRow {
    file: String,
    stream_id: u64,
    g: f64,
    tau: Option<f64>,
    gamma: f64,
}

#[derive(Serialize)]
struct CbmSidecarRow {
    file: String,
    stream_id: u64,
    #[serde(rename = "g_T")]
    g_t: f64,
    #[serde(rename = "Gamma_T")]
    gamma_t: f64,
    n_rejected: u64,
}

#[derive(Serialize)]
struct Sidecar<R> {
    y: f64,
    c: f64,
    horizon: f64,
    step: f64,
    seed: u64,
    draws: Vec<R>,
}

#[derive(Serialize)]
struct FigureCurve {
    law: LawName,
    y: f64,
    x: Vec<f64>,
    cdf: Vec<f64>,
}

/// Executes one command.
pub fn execute(command: Command) -> std::result::Result<(), CliError> {
    match command {
        Command::CdfG { start, io } => {
            let rows = law_rows(LawName::G, &start)?;
            write_out(io.out.as_deref(), &cdf_text(&rows, io.format))?;
        }
        Command::CdfGamma { start, io } => {
            let rows = law_rows(LawName::Gamma, &start)?;
            write_out(io.out.as_deref(), &cdf_text(&rows, io.format))?;
        }
        Command::Q { start, t, u, io } => {
            // Brownian scaling: q at (y, t, u) equals q at (y/√c, t/c, u/c).
            let (y1, c) = reduce_to_unit_budget(&StartSpec::new(start.y, start.c)?)?;
            let integral = q_integral(y1, t / c, u / c, &QuadratureSpec::default())?;
            let closed = q_closed(y1, t / c, u / c)?;
            let report = QReport {
                y: start.y,
                t,
                u,
                integral,
                closed,
                difference: integral - closed,
            };
            let text = match io.format {
                Format::Json => to_json(&report),
                Format::Csv => format!(
                    "method,value\nintegral,{}\nclosed,{}\ndifference,{}\n",
                    fmt_num(integral),
                    fmt_num(closed),
                    fmt_num(report.difference)
                ),
            };
            write_out(io.out.as_deref(), &text)?;
        }
        Command::TauDensity { start, t, io } => {
            StartSpec::new(start.y, start.c)?;
            let spec = BridgeSpec::to_zero(start.y, t)?;
            let rows = (0..400)
                .map(|k| {
                    let s = t * (k as f64 + 0.5) / 400.0;
                    Ok(CdfRow {
                        x: s,
                        cdf: first_hit_density(&spec, s)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let text = match io.format {
                Format::Json => to_json(&rows),
                Format::Csv => {
                    let mut s = String::from("s,density\n");
                    for r in &rows {
                        s.push_str(&format!("{},{}\n", fmt_num(r.x), fmt_num(r.cdf)));
                    }
                    s
                }
            };
            write_out(io.out.as_deref(), &text)?;
        }
        Command::SampleX {
            start,
            horizon,
            step,
            n,
            seed,
            out,
        } => {
            let (y1, c) = reduce_to_unit_budget(&StartSpec::new(start.y, start.c)?)?;
            let sampler = LimitSampler::new(y1)?;
            let mut draws = Vec::with_capacity(n);
            for i in 0..n {
                let stream_id = LIMIT_STREAM_OFFSET + i as u64;
                let d = sampler.sample(horizon / c, step / c, &mut RngStream::new(seed.seed, stream_id))?;
                let file = indexed(&out, i, n);
                fs::write(&file, path_csv(&d.path, c, c.sqrt()))?;
                let s = d.summary;
                draws.push(LimitSidecarRow {
                    file: file.display().to_string(),
                    stream_id,
                    g: s.g * c,
                    tau: s.tau.is_finite().then_some(s.tau * c),
                    gamma: s.gamma * c,
                });
            }
            let meta = Sidecar {
                y: start.y,
                c,
                horizon,
                step,
                seed: seed.seed,
                draws,
            };
            fs::write(sidecar(&out), to_json(&meta))?;
        }
        Command::SampleCbm {
            start,
            horizon,
            step,
            n,
            seed,
            out,
        } => {
            StartSpec::new(start.y, start.c)?;
            let mut draws = Vec::with_capacity(n);
            for i in 0..n {
                let stream_id = i as u64;
                let mut rng = RngStream::new(seed.seed, stream_id);
                let d = sample_conditioned_bm(start.y, horizon, step, start.c, &mut rng, DEFAULT_MAX_ATTEMPTS)?;
                let file = indexed(&out, i, n);
                fs::write(&file, path_csv(&d.path, 1.0, 1.0))?;
                draws.push(CbmSidecarRow {
                    file: file.display().to_string(),
                    stream_id,
                    g_t: last_zero(&d.path, horizon)?,
                    gamma_t: occupation_below_zero(&d.path, horizon)?,
                    n_rejected: d.n_rejected,
                });
            }
            let meta = Sidecar {
                y: start.y,
                c: start.c,
                horizon,
                step,
                seed: seed.seed,
                draws,
            };
            fs::write(sidecar(&out), to_json(&meta))?;
        }
        Command::Validate { seed, out } => {
            let outcome = run_suite(seed.seed, &Tolerances::frozen())?;
            write_out(out.as_deref(), &outcome.reports_json())?;
            if let Some(p) = &out {
                let mut timing = p.as_os_str().to_owned();
                timing.push(".timing.json");
                fs::write(PathBuf::from(timing), outcome.timing_json())?;
            }
            let failed: Vec<_> = outcome.failures().collect();
            for r in &failed {
                eprintln!("FAILED {}", serde_json::to_string(r).expect("serialisable"));
            }
            if !failed.is_empty() {
                return Err(CliError::ChecksFailed(failed.len()));
            }
        }
        Command::Figure1 { c, io } => {
            let mut curves = Vec::new();
            for &y in &FIGURE_STARTS {
                let start = Start { y, c };
                for law in [LawName::G, LawName::Gamma] {
                    let rows = law_rows(law, &start)?;
                    curves.push(FigureCurve {
                        law,
                        y,
                        x: rows.iter().map(|r| r.x).collect(),
                        cdf: rows.iter().map(|r| r.cdf).collect(),
                    });
                }
            }
            let text = match io.format {
                Format::Json => to_json(&curves),
                Format::Csv => {
                    let mut s = String::from("law,y,x,cdf\n");
                    for curve in &curves {
                        let law = match curve.law {
                            LawName::G => "g",
                            _ => "gamma",
                        };
                        for (x, f) in curve.x.iter().zip(&curve.cdf) {
                            s.push_str(&format!("{law},{},{},{}\n", fmt_num(curve.y), fmt_num(*x), fmt_num(*f)));
                        }
                    }
                    s
                }
            };
            write_out(io.out.as_deref(), &text)?;
        }
    }
    Ok(())
}

/// Parses `args` and runs the command, returning the process exit code:
/// 0 on success, 1 on numerical failure or failed checks, 2 on usage errors.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(CliError::Numerical(Error::Domain(msg))) => {
            eprintln!("error: {msg}");
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
