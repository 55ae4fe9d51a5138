//! `xdiscord`: quantum discord of two-qubit X-states from the command line.
//!
//! Exit status is 0 on success, 2 for invalid flags or states, 3 when a
//! library self-check fails.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use xdiscord::{
    classify, discord_ab, grid_minimize, quantum_discord_with, region_map, sweep_z, trace_boundary,
    xxz_discord, xxz_region, xxz_region_map, BoundaryCriterion, Diagonals, LineSegment,
    MeasurementClass, OracleConfig, RegionMapSpec, StateJson, SweepSpec, XState, XxzState,
    DEFAULT_EPSILON_ZERO,
};

use output::{emit_object, emit_records, merge, CliError, CliResult, Format};

#[derive(Parser, Debug)]
#[command(
    name = "xdiscord",
    version,
    about = "Quantum discord of two-qubit X-states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Default)]
struct StateArgs {
    /// JSON file with fields a, b, c, d, w, z (and optional w_im, z_im).
    /// Flags given alongside override the file.
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    d: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    w: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    z: Option<f64>,
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Defaults to standard output.
    #[arg(long, short, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct TableOutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long, short, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct OracleArgs {
    #[arg(long, default_value_t = 721)]
    n_theta: usize,
    #[arg(long, default_value_t = 181)]
    n_phi: usize,
    #[arg(long, default_value_t = 1e-10)]
    refine_tol: f64,
}

impl OracleArgs {
    fn config(&self) -> CliResult<OracleConfig<f64>> {
        let cfg = OracleConfig {
            n_theta: self.n_theta,
            n_phi: self.n_phi,
            refine_tol: self.refine_tol,
            ..OracleConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CriterionArg {
    C0,
    Cplus,
    Both,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Discord, classical correlation and mutual information of one state.
    Compute {
        #[command(flatten)]
        state: StateArgs,
        /// Measure qubit B instead of qubit A.
        #[arg(long)]
        measure_b: bool,
        #[arg(long, default_value_t = DEFAULT_EPSILON_ZERO)]
        epsilon_zero: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Curvature criteria and the optimal measurement class.
    Classify {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value_t = DEFAULT_EPSILON_ZERO)]
        epsilon_zero: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Interior optimal angle; fails unless the class is SE.
    ThetaE {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value_t = DEFAULT_EPSILON_ZERO)]
        epsilon_zero: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Brute-force grid minimisation, for cross-checks.
    Oracle {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        oracle: OracleArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Discord along z at fixed w.
    Sweep {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, allow_negative_numbers = true)]
        z_min: Option<f64>,
        /// Defaults to sqrt(bc).
        #[arg(long, allow_negative_numbers = true)]
        z_max: Option<f64>,
        #[arg(long, default_value_t = 201)]
        samples: usize,
        /// Add a brute-force discord column and check it row by row.
        #[arg(long)]
        with_oracle: bool,
        /// Largest accepted |analytic - oracle| with --with-oracle.
        #[arg(long, default_value_t = 1e-9)]
        oracle_tol: f64,
        #[command(flatten)]
        oracle: OracleArgs,
        #[command(flatten)]
        out: TableOutputArgs,
    },
    /// Measurement-class map over the (w, z) plane.
    ScanRegion {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, allow_negative_numbers = true)]
        w_min: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        w_max: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        z_min: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        z_max: Option<f64>,
        #[arg(long, default_value_t = 400)]
        nw: usize,
        #[arg(long, default_value_t = 400)]
        nz: usize,
        #[command(flatten)]
        out: TableOutputArgs,
    },
    /// Spin-flip symmetric states with diagonal (a, 1/2-a, 1/2-a, a).
    Xxz {
        #[arg(long, allow_negative_numbers = true)]
        a: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        w: f64,
        #[arg(long, allow_negative_numbers = true)]
        z: Option<f64>,
        /// Emit the (a, z) region map instead of a single state.
        #[arg(long)]
        map: bool,
        #[arg(long, default_value_t = 0.0)]
        a_min: f64,
        #[arg(long, default_value_t = 0.5)]
        a_max: f64,
        #[arg(long, default_value_t = 0.0)]
        z_min: f64,
        #[arg(long, default_value_t = 0.5)]
        z_max: f64,
        #[arg(long, default_value_t = 200)]
        na: usize,
        #[arg(long, default_value_t = 200)]
        nz: usize,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long, short, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Zero crossings of C0 and/or C+ along a straight line in (w, z).
    TraceBoundary {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, value_enum, default_value_t = CriterionArg::Both)]
        criterion: CriterionArg,
        #[arg(long)]
        w0: f64,
        #[arg(long)]
        z0: f64,
        #[arg(long)]
        w1: f64,
        #[arg(long)]
        z1: f64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

fn positive(name: &str, v: f64) -> CliResult<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Usage(format!(
            "--{name} must be a positive number, got {v}"
        )))
    }
}

fn threads() -> CliResult<Option<usize>> {
    match std::env::var("XDISCORD_THREADS") {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!(
                "XDISCORD_THREADS must be a positive integer, got {s:?}"
            ))),
        },
    }
}

/// Merges the input file and the flags. `need_coherences` makes w and z
/// mandatory; otherwise they default to 0.
fn raw_state(args: &StateArgs, need_coherences: bool) -> CliResult<StateJson<f64>> {
    let file: Option<Value> =
        match &args.input {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", p.display())))?;
                Some(serde_json::from_str(&text).map_err(|e| {
                    CliError::Usage(format!("{} is not valid JSON: {e}", p.display()))
                })?)
            }
            None => None,
        };
    let from_file = |key: &str| -> CliResult<Option<f64>> {
        match file.as_ref().and_then(|v| v.get(key)) {
            None | Some(Value::Null) => Ok(None),
            Some(v) => v
                .as_f64()
                .map(Some)
                .ok_or_else(|| CliError::Usage(format!("field {key:?} is not a number"))),
        }
    };
    let pick = |key: &str, flag: Option<f64>, required: bool| -> CliResult<Option<f64>> {
        match flag.or(from_file(key)?) {
            Some(v) => Ok(Some(v)),
            None if required => Err(CliError::Usage(format!("missing value for {key}"))),
            None => Ok(None),
        }
    };
    let req = |key, flag| pick(key, flag, true).map(|v| v.unwrap_or_default());
    Ok(StateJson {
        a: req("a", args.a)?,
        b: req("b", args.b)?,
        c: req("c", args.c)?,
        d: req("d", args.d)?,
        w: pick("w", args.w, need_coherences)?.unwrap_or(0.0),
        z: pick("z", args.z, need_coherences)?.unwrap_or(0.0),
        w_im: if args.w.is_some() {
            None
        } else {
            from_file("w_im")?
        },
        z_im: if args.z.is_some() {
            None
        } else {
            from_file("z_im")?
        },
    })
}

fn load_state(args: &StateArgs) -> CliResult<XState<f64>> {
    Ok(XState::try_from(raw_state(args, true)?)?)
}

fn load_diagonals(args: &StateArgs) -> CliResult<(Diagonals<f64>, StateJson<f64>)> {
    let raw = raw_state(args, false)?;
    Ok((Diagonals::new(raw.a, raw.b, raw.c, raw.d)?, raw))
}

fn state_fields(s: &XState<f64>) -> CliResult<Map<String, Value>> {
    let mut m = Map::new();
    merge(&mut m, &StateJson::from(*s))?;
    Ok(m)
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Compute {
            state,
            measure_b,
            epsilon_zero,
            out,
        } => {
            positive("epsilon-zero", epsilon_zero)?;
            let s = load_state(&state)?;
            let r = if measure_b {
                discord_ab(&s)?
            } else {
                quantum_discord_with(&s, epsilon_zero)?
            };
            let mut m = state_fields(&s)?;
            merge(&mut m, &r)?;
            m.insert("measured".into(), json!(if measure_b { "B" } else { "A" }));
            emit_object(&m, out.format, out.output.as_deref())
        }
        Command::Classify {
            state,
            epsilon_zero,
            out,
        } => {
            positive("epsilon-zero", epsilon_zero)?;
            let s = load_state(&state)?;
            let rep = classify(&s, epsilon_zero)?;
            let mut m = state_fields(&s)?;
            merge(&mut m, &rep)?;
            emit_object(&m, out.format, out.output.as_deref())
        }
        Command::ThetaE {
            state,
            epsilon_zero,
            out,
        } => {
            positive("epsilon-zero", epsilon_zero)?;
            let s = load_state(&state)?;
            let rep = classify(&s, epsilon_zero)?;
            match rep.class {
                MeasurementClass::SigmaE { theta_e } => {
                    let mut m = state_fields(&s)?;
                    m.insert("theta_e".into(), json!(theta_e));
                    m.insert("f_min".into(), json!(rep.f_min));
                    emit_object(&m, out.format, out.output.as_deref())
                }
                other => Err(CliError::Usage(format!(
                    "state is in class {}, theta_e is only defined for SE",
                    other.code()
                ))),
            }
        }
        Command::Oracle { state, oracle, out } => {
            let cfg = oracle.config()?;
            let s = load_state(&state)?;
            let min = grid_minimize(&s, &cfg)?;
            let mut m = state_fields(&s)?;
            m.insert(
                "oracle_discord".into(),
                json!(min.f - s.entropy_joint() + s.entropy_a()),
            );
            merge(&mut m, &min)?;
            emit_object(&m, out.format, out.output.as_deref())
        }
        Command::Sweep {
            state,
            z_min,
            z_max,
            samples,
            with_oracle,
            oracle_tol,
            oracle,
            out,
        } => {
            positive("oracle-tol", oracle_tol)?;
            let (diag, raw) = load_diagonals(&state)?;
            let z_range = (z_min.unwrap_or(0.0), z_max.unwrap_or_else(|| diag.z_max()));
            let spec = SweepSpec::new(diag, raw.w, z_range, samples)?;
            let cfg = if with_oracle {
                Some(oracle.config()?)
            } else {
                None
            };
            let recs = sweep_z(&spec, cfg.as_ref(), threads()?)?;
            emit_records(&recs, out.format, out.output.as_deref())?;
            let worst = recs
                .iter()
                .filter_map(|r| Some((r.z, (r.discord? - r.oracle_discord?).abs())))
                .fold(None, |acc: Option<(f64, f64)>, (z, e)| match acc {
                    Some((_, best)) if best >= e => acc,
                    _ => Some((z, e)),
                });
            match worst {
                Some((z, e)) if e.is_nan() || e > oracle_tol => Err(CliError::Internal(format!(
                    "analytic and oracle discord differ by {e:e} at z = {z} (tolerance {oracle_tol:e})"
                ))),
                _ => Ok(()),
            }
        }
        Command::ScanRegion {
            state,
            w_min,
            w_max,
            z_min,
            z_max,
            nw,
            nz,
            out,
        } => {
            let (diag, _) = load_diagonals(&state)?;
            let spec = RegionMapSpec::new(
                diag,
                (w_min.unwrap_or(0.0), w_max.unwrap_or_else(|| diag.w_max())),
                (z_min.unwrap_or(0.0), z_max.unwrap_or_else(|| diag.z_max())),
                (nw, nz),
            )?;
            let recs = region_map(&spec, threads()?)?;
            emit_records(&recs, out.format, out.output.as_deref())
        }
        Command::Xxz {
            a,
            w,
            z,
            map,
            a_min,
            a_max,
            z_min,
            z_max,
            na,
            nz,
            format,
            output,
        } => {
            if map {
                let recs = xxz_region_map((a_min, a_max), (z_min, z_max), w, (na, nz), threads()?)?;
                return emit_records(&recs, format.unwrap_or(Format::Csv), output.as_deref());
            }
            let (Some(a), Some(z)) = (a, z) else {
                return Err(CliError::Usage("xxz needs --a and --z (or --map)".into()));
            };
            let x = XxzState::new(a, w, z)?;
            let region = xxz_region(&x);
            let r = xxz_discord(&x)?;
            let mut m = Map::new();
            merge(&mut m, &x)?;
            merge(&mut m, &r)?;
            m.insert("branch".into(), json!(region.branch.code()));
            m.insert("on_boundary".into(), json!(region.on_boundary));
            m.insert("threshold".into(), json!(x.threshold()));
            emit_object(&m, format.unwrap_or(Format::Json), output.as_deref())
        }
        Command::TraceBoundary {
            state,
            criterion,
            w0,
            z0,
            w1,
            z1,
            tol,
            out,
        } => {
            positive("tol", tol)?;
            let (diag, _) = load_diagonals(&state)?;
            let line = LineSegment { w0, z0, w1, z1 };
            let mut m = Map::new();
            merge(&mut m, &diag)?;
            merge(&mut m, &line)?;
            let wanted: &[(&str, BoundaryCriterion)] = match criterion {
                CriterionArg::C0 => &[("c0", BoundaryCriterion::C0)],
                CriterionArg::Cplus => &[("c_plus", BoundaryCriterion::CPlus)],
                CriterionArg::Both => &[
                    ("c0", BoundaryCriterion::C0),
                    ("c_plus", BoundaryCriterion::CPlus),
                ],
            };
            for &(key, crit) in wanted {
                let pts = trace_boundary(&diag, crit, &line, tol);
                m.insert(
                    key.into(),
                    serde_json::to_value(pts)
                        .map_err(|e| CliError::Internal(format!("serialisation failed: {e}")))?,
                );
            }
            emit_object(&m, out.format, out.output.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("xdiscord: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
