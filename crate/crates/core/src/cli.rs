//! Command-line front end. Exit codes: 0 success, 2 parse, 3 invariant,
//! 4 amplitude, 5 unsupported.

use std::f64::consts::TAU;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::audit::{run_audit, PhaseSampling};
use crate::concurrence::{classify, ClassifyConfig, GhzM1Enumeration, NormalizationPolicy};
use crate::entangler::{build_entangler, verify_built};
use crate::error::Error;
use crate::io::{self, InputError, Num};
use crate::povm::{delta, povm_resolution_check, PhaseSpec};
use crate::tensor::dagger;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;
pub const EXIT_AMPLITUDE: i32 = 4;
pub const EXIT_UNSUPPORTED: i32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormArg {
    Raw,
    Canonical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GhzM1Arg {
    Compact,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputArg {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PhasesArg {
    Continuous,
    Binary,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("tolerance must be positive, got {s}"))
    }
}

#[derive(Debug, Parser)]
#[command(name = "qentangle", version, about = "Concurrence classes and gate entanglers for pure multi-qubit states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Threshold for the nonzero-concurrence conditions and the separability oracle
    #[arg(long, global = true, default_value_t = 1e-10, value_parser = positive_f64)]
    pub tol: f64,

    #[arg(long, global = true, value_enum, default_value_t = NormArg::Canonical)]
    pub norm: NormArg,

    /// GHZ^{m-1} operator enumeration
    #[arg(long, global = true, value_enum, default_value_t = GhzM1Arg::Compact)]
    pub ghzm1: GhzM1Arg,

    #[arg(long, global = true, value_enum, default_value_t = OutputArg::Json)]
    pub output: OutputArg,

    /// Seed for random sampling
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Allow non-unit-modulus entangler amplitudes (the result is not a gate)
    #[arg(long, global = true)]
    pub raw: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a pure state read from a JSON file
    Classify { state_file: PathBuf },
    /// Build the block entangler from a JSON amplitude file, apply it to H^m|0>, and classify
    BuildEntangler { alphas_file: PathBuf },
    /// Check POVM resolution of identity, Hermiticity and positivity on a phase grid
    PovmCheck {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        grid: usize,
    },
    /// Compare class verdicts with the separability oracle over random entanglers
    Audit {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = PhasesArg::Continuous)]
        phases: PhasesArg,
    },
}

impl Cli {
    pub fn classify_config(&self) -> ClassifyConfig {
        ClassifyConfig {
            tol: self.tol,
            policy: match self.norm {
                NormArg::Raw => NormalizationPolicy::Raw,
                NormArg::Canonical => NormalizationPolicy::CanonicalUnit,
            },
            ghz_m1: match self.ghzm1 {
                GhzM1Arg::Compact => GhzM1Enumeration::Compact,
                GhzM1Arg::Full => GhzM1Enumeration::Full,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn fail(code: i32, stderr: String) -> Self {
        Self { code, stdout: String::new(), stderr }
    }
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NonUnitaryAmplitude { .. } => EXIT_AMPLITUDE,
        Error::UnsupportedDimension(_) => EXIT_UNSUPPORTED,
        _ => EXIT_INVARIANT,
    }
}

fn from_error(err: Error) -> Outcome {
    Outcome::fail(exit_code(&err), format!("error: {err}\n"))
}

fn from_input_error(err: InputError) -> Outcome {
    match err {
        InputError::Parse(msg) => Outcome::fail(EXIT_PARSE, format!("error: {msg}\n")),
        InputError::Invalid(e) => from_error(e),
    }
}

fn read(path: &Path) -> Result<String, Outcome> {
    fs::read_to_string(path)
        .map_err(|e| Outcome::fail(EXIT_PARSE, format!("error: cannot read {}: {e}\n", path.display())))
}

pub fn run(cli: &Cli) -> Outcome {
    let config = cli.classify_config();
    let result = match &cli.command {
        Command::Classify { state_file } => cmd_classify(state_file, cli, &config),
        Command::BuildEntangler { alphas_file } => cmd_build_entangler(alphas_file, cli, &config),
        Command::PovmCheck { n, grid } => cmd_povm_check(*n, *grid, cli),
        Command::Audit { m, samples, phases } => {
            let sampling = match phases {
                PhasesArg::Continuous => PhaseSampling::Continuous,
                PhasesArg::Binary => PhaseSampling::Binary,
            };
            run_audit(*m, *samples, cli.seed, sampling, &config)
                .map(|r| {
                    Outcome::ok(match cli.output {
                        OutputArg::Json => io::audit_to_json(&r) + "\n",
                        OutputArg::Text => io::audit_to_text(&r),
                    })
                })
                .map_err(from_error)
        }
    };
    result.unwrap_or_else(|o| o)
}

fn cmd_classify(path: &Path, cli: &Cli, config: &ClassifyConfig) -> Result<Outcome, Outcome> {
    let state = io::parse_state(&read(path)?).map_err(from_input_error)?;
    let report = classify(&state, config).map_err(from_error)?;
    Ok(Outcome::ok(match cli.output {
        OutputArg::Json => io::report_to_json(&report) + "\n",
        OutputArg::Text => io::report_to_text(&report),
    }))
}

fn cmd_build_entangler(path: &Path, cli: &Cli, config: &ClassifyConfig) -> Result<Outcome, Outcome> {
    let (m, alphas, branch) = io::parse_entangler(&read(path)?).map_err(from_input_error)?;
    let z = build_entangler(m, &alphas, branch, !cli.raw).map_err(from_error)?;
    let report = verify_built(z, None, config).map_err(from_error)?;
    Ok(Outcome::ok(match cli.output {
        OutputArg::Json => io::entangler_report_to_json(&report) + "\n",
        OutputArg::Text => io::entangler_report_to_text(&report),
    }))
}

#[derive(Debug, Serialize)]
struct PovmCheckJson {
    n: usize,
    grid: usize,
    resolution_residual: Num,
    hermiticity_residual: Num,
    psd_residual: Num,
    tolerance: Num,
    pass: bool,
}

fn cmd_povm_check(n: usize, grid: usize, cli: &Cli) -> Result<Outcome, Outcome> {
    let resolution = povm_resolution_check(n, grid).map_err(from_error)?;
    let mut herm: f64 = 0.0;
    let mut psd: f64 = 0.0;
    for k in 0..grid {
        let phi = TAU * k as f64 / grid as f64;
        let d = PhaseSpec::qubit(phi).and_then(|s| delta(&s)).map_err(from_error)?;
        herm = herm.max(d.max_abs_diff(&dagger(&d)).map_err(from_error)?);
        let min_ev = d.min_eigenvalue_hermitian().map_err(from_error)?;
        psd = psd.max(-min_ev);
    }
    let pass = resolution <= cli.tol && herm <= cli.tol && psd <= cli.tol;
    let stdout = match cli.output {
        OutputArg::Json => {
            let j = PovmCheckJson {
                n,
                grid,
                resolution_residual: Num(resolution),
                hermiticity_residual: Num(herm),
                psd_residual: Num(psd.max(0.0)),
                tolerance: Num(cli.tol),
                pass,
            };
            serde_json::to_string_pretty(&j).expect("serializes") + "\n"
        }
        OutputArg::Text => format!(
            "povm-check: N = {n}, grid = {grid}\nresolution residual: {}\nhermiticity residual: {}\npsd residual: {}\n{}\n",
            io::round_sig12(resolution),
            io::round_sig12(herm),
            io::round_sig12(psd.max(0.0)),
            if pass { "pass" } else { "FAIL" }
        ),
    };
    Ok(Outcome { code: if pass { EXIT_OK } else { EXIT_INVARIANT }, stdout, stderr: String::new() })
}
