//! The `toric-sections` command line.
//!
//! Divisor files list coefficients in the ray order of the fan file they are used with;
//! everything printed uses that order too. Exit codes: 0 success, 1 domain error,
//! 2 usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::io::{
    csv_bytes, emit_svg, load_divisor_for, load_fan, sweep_rows, write_csv, write_divisor,
    write_fan,
};
use crate::multiplication::{check_surjectivity, cokernel_dim, CheckMode, DecompositionPath};
use crate::reduction::{
    edge_lattice_report, reduce_to_globally_generated, sweep_cokernel_with, FamilyFilter,
    SweepOptions, DEFAULT_SWEEP_BUDGET,
};
use crate::toric::{
    classify, generate_family, h0, random_divisor, Fan, FamilySpec, PositivityClass,
    TorusDivisor,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "toric-sections", version, about = "Sections and their products on smooth toric surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Structured,
    Brute,
    Both,
}

impl From<ModeArg> for CheckMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Structured => CheckMode::Structured,
            ModeArg::Brute => CheckMode::Brute,
            ModeArg::Both => CheckMode::Both,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ClassArg {
    Ample,
    Gg,
    Sections,
    None,
}

impl From<ClassArg> for PositivityClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::Ample => PositivityClass::Ample,
            ClassArg::Gg => PositivityClass::GloballyGeneratedNotAmple,
            ClassArg::Sections => PositivityClass::EffectiveSectionsOnly,
            ClassArg::None => PositivityClass::NoSections,
        }
    }
}

#[derive(Debug, Args)]
struct Pair {
    fan: PathBuf,
    d: PathBuf,
    e: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a fan file.
    FanCheck { fan: PathBuf },
    /// Number of lattice points of P_D.
    H0 { fan: PathBuf, divisor: PathBuf },
    /// Positivity class of a divisor.
    Classify { fan: PathBuf, divisor: PathBuf },
    /// Globally generated reduction.
    Reduce {
        fan: PathBuf,
        divisor: PathBuf,
        /// Write the reduced divisor here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decompose every lattice point of P_{D+E}.
    Verify {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, value_enum, default_value = "brute")]
        mode: ModeArg,
    },
    /// Cokernel of the multiplication map.
    Cokernel {
        #[command(flatten)]
        pair: Pair,
    },
    /// Cokernel sweep over E in [0, max-coeff]^n with L fixed.
    Sweep {
        fan: PathBuf,
        l: PathBuf,
        #[arg(long)]
        max_coeff: i64,
        /// Comma-separated terms: integers, `*`, or variable names.
        #[arg(long)]
        filter: Option<String>,
        #[arg(long, default_value_t = DEFAULT_SWEEP_BUDGET)]
        budget: u64,
        /// Sample this many instances at random when the family exceeds the budget.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "brute")]
        mode: ModeArg,
        /// CSV output; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Value of the fan_id column; defaults to the fan file stem.
        #[arg(long)]
        fan_id: Option<String>,
    },
    /// Generate fans and random divisors.
    #[command(subcommand)]
    Gen(Gen),
    /// SVG figure of P_D, P_E and P_{D+E} with missing points highlighted.
    Plot {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum Gen {
    /// A named fan: p2, p1xp1, f<a>, with /<corner> blowup suffixes.
    Fan {
        family: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A divisor of the given class with coefficients in [0, max-coeff].
    Divisor {
        fan: PathBuf,
        #[arg(long, value_enum)]
        class: ClassArg,
        #[arg(long)]
        max_coeff: i64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        label: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load_pair(pair: &Pair) -> Result<(Fan, TorusDivisor, TorusDivisor)> {
    let fan = load_fan(&pair.fan)?;
    let d = load_divisor_for(&fan, &pair.d)?;
    let e = load_divisor_for(&fan, &pair.e)?;
    Ok((fan, d, e))
}

fn shown(fan: &Fan, d: &TorusDivisor) -> TorusDivisor {
    TorusDivisor::new(fan.to_input_order(d.coeffs()))
}

fn io_err(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

/// Filter terms are given in file order; the sweep works in stored order.
fn aligned_filter(fan: &Fan, f: &FamilyFilter) -> Result<FamilyFilter> {
    if f.len() != fan.len() {
        return Err(Error::LengthMismatch {
            expected: fan.len(),
            got: f.len(),
        });
    }
    Ok(FamilyFilter::new(
        (0..fan.len())
            .map(|i| f.terms()[fan.input_index(i)].clone())
            .collect(),
    ))
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::FanCheck { fan } => {
            let fan = load_fan(fan)?;
            writeln!(out, "valid: smooth complete, {} rays", fan.len()).map_err(io_err)?;
        }
        Command::H0 { fan, divisor } => {
            let fan = load_fan(fan)?;
            let d = load_divisor_for(&fan, divisor)?;
            writeln!(out, "{}", h0(&fan, &d)?).map_err(io_err)?;
        }
        Command::Classify { fan, divisor } => {
            let fan = load_fan(fan)?;
            let d = load_divisor_for(&fan, divisor)?;
            writeln!(out, "{}", classify(&fan, &d)?).map_err(io_err)?;
        }
        Command::Reduce {
            fan,
            divisor,
            out: path,
        } => {
            let fan = load_fan(fan)?;
            let d = load_divisor_for(&fan, divisor)?;
            let r = reduce_to_globally_generated(&fan, &d)?;
            let mut j: Vec<usize> = r.j.iter().map(|&i| fan.input_index(i)).collect();
            j.sort_unstable();
            let mut report: Vec<String> = edge_lattice_report(&fan, &r)?
                .into_iter()
                .map(|(i, n)| (fan.input_index(i), n))
                .collect::<std::collections::BTreeMap<_, _>>()
                .into_iter()
                .map(|(i, n)| format!("{i}:{n}"))
                .collect();
            if report.is_empty() {
                report.push("-".into());
            }
            let reduced = shown(&fan, &r.reduced);
            writeln!(out, "reduced: {reduced}").map_err(io_err)?;
            writeln!(out, "J: {j:?}").map_err(io_err)?;
            writeln!(out, "edge_lattice_counts: {}", report.join(" ")).map_err(io_err)?;
            if let Some(p) = path {
                write_divisor(&reduced, Some("reduced"), p)?;
            }
        }
        Command::Verify { pair, mode } => {
            let (fan, d, e) = load_pair(&pair)?;
            let r = check_surjectivity(&fan, &d, &e, mode.into())?;
            writeln!(out, "mode: {}", r.mode).map_err(io_err)?;
            writeln!(out, "points: {}", r.total_points).map_err(io_err)?;
            writeln!(out, "decomposed: {}", r.decomposed).map_err(io_err)?;
            writeln!(out, "surjective: {}", r.surjective).map_err(io_err)?;
            if r.mode.runs_structured() {
                writeln!(out, "structured_fallbacks: {}", r.structured_fallbacks).map_err(io_err)?;
                for path in DecompositionPath::ALL {
                    let n = r.path_count(path);
                    if n > 0 {
                        writeln!(out, "  {path}: {n}").map_err(io_err)?;
                    }
                }
            }
            for p in &r.undecomposed {
                writeln!(out, "undecomposed: {p}").map_err(io_err)?;
            }
        }
        Command::Cokernel { pair } => {
            let (fan, d, e) = load_pair(&pair)?;
            let r = cokernel_dim(&fan, &d, &e)?;
            writeln!(out, "h0_D: {}", r.h0_d).map_err(io_err)?;
            writeln!(out, "h0_E: {}", r.h0_e).map_err(io_err)?;
            writeln!(out, "h0_sum: {}", r.h0_sum).map_err(io_err)?;
            writeln!(out, "sumset_size: {}", r.sumset_size).map_err(io_err)?;
            writeln!(out, "coker_dim: {}", r.coker_dim).map_err(io_err)?;
            for p in &r.missing_points {
                writeln!(out, "missing: {p}").map_err(io_err)?;
            }
        }
        Command::Sweep {
            fan: fan_path,
            l,
            max_coeff,
            filter,
            budget,
            seed,
            mode,
            out: path,
            fan_id,
        } => {
            let fan = load_fan(&fan_path)?;
            let l = load_divisor_for(&fan, l)?;
            let filter = match filter {
                Some(s) => Some(aligned_filter(&fan, &s.parse()?)?),
                None => None,
            };
            let opts = SweepOptions {
                budget,
                seed,
                mode: mode.into(),
                ..SweepOptions::default()
            };
            let r = sweep_cokernel_with(&fan, &l, max_coeff, filter.as_ref(), &opts)?;
            let id = fan_id.unwrap_or_else(|| stem(&fan_path));
            let rows = sweep_rows(&id, &fan, &r);
            match path {
                Some(p) => {
                    write_csv(&rows, p)?;
                    writeln!(out, "instances: {}", r.instance_count).map_err(io_err)?;
                    writeln!(out, "classes: {}", r.class_count).map_err(io_err)?;
                    writeln!(out, "max_coker: {}", r.max_coker).map_err(io_err)?;
                    writeln!(out, "pipeline_violations: {}", r.pipeline_violations)
                        .map_err(io_err)?;
                    if let Some(s) = r.sampled_seed {
                        writeln!(out, "sampled with seed {s} from {} candidates", r.candidates)
                            .map_err(io_err)?;
                    }
                }
                None => out.write_all(&csv_bytes(&rows)?).map_err(io_err)?,
            }
        }
        Command::Gen(Gen::Fan { family, out: path }) => {
            let fan = generate_family(&family.parse::<FamilySpec>()?)?;
            match path {
                Some(p) => write_fan(&fan, p)?,
                None => out
                    .write_all(crate::io::fan_to_json(&fan)?.as_bytes())
                    .map_err(io_err)?,
            }
        }
        Command::Gen(Gen::Divisor {
            fan,
            class,
            max_coeff,
            seed,
            label,
            out: path,
        }) => {
            let fan = load_fan(fan)?;
            let d = shown(&fan, &random_divisor(&fan, class.into(), max_coeff, seed)?);
            match path {
                Some(p) => write_divisor(&d, label.as_deref(), p)?,
                None => out
                    .write_all(crate::io::divisor_to_json(&d, label.as_deref())?.as_bytes())
                    .map_err(io_err)?,
            }
        }
        Command::Plot { pair, out: path } => {
            let (fan, d, e) = load_pair(&pair)?;
            let report = cokernel_dim(&fan, &d, &e)?;
            emit_svg(&fan, &d, &e, &report, path)?;
        }
    }
    Ok(())
}

/// Runs the CLI with explicit output streams and returns the exit code.
pub fn run_cli_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                EXIT_USAGE
            } else {
                let _ = write!(out, "{}", e.render());
                EXIT_OK
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_DOMAIN
        }
    }
}

pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_cli_with(argv, &mut stdout.lock(), &mut stderr.lock())
}
