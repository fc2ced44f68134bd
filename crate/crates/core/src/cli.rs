//! Command-line front end. Parsing and execution live here so they can be
//! tested without spawning the binary; `main.rs` only wires up I/O.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::error::Error;
use crate::protocol::{
    efficiency_report, run_protocol, Limits, SampledSelector, SecretState, DEFAULT_BRANCH_CAP, DEFAULT_QUBIT_CAP,
};
use crate::verify::{self, EnumerationSummary, FIDELITY_TOLERANCE};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ASSERTION_FAILED: i32 = 1;
pub const EXIT_RESOURCE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "qsts", version, about = "Simulate and verify multiparty sharing of a two-qubit state")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the protocol once with seeded outcome sampling.
    Run(CommonArgs),
    /// Enumerate every measurement branch and check each reconstruction.
    Enumerate(EnumerateArgs),
    /// Compare the correction rule with a brute-force oracle at two agents.
    VerifyTable(VerifyTableArgs),
    /// Sample protocol runs and test outcome uniformity.
    MonteCarlo(MonteCarloArgs),
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Number of agents N (the receiver plus N-1 controllers).
    #[arg(long, default_value_t = 2)]
    agents: usize,
    /// Eight comma-separated reals `re,im` for α,β,γ,δ, or `random`.
    #[arg(long, default_value = "random", allow_hyphen_values = true)]
    secret: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Report destination; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_QUBIT_CAP)]
    qubit_cap: usize,
}

#[derive(Debug, Args)]
struct EnumerateArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, default_value_t = DEFAULT_BRANCH_CAP)]
    branch_cap: u64,
}

#[derive(Debug, Args)]
struct VerifyTableArgs {
    /// Number of seeded generic secrets.
    #[arg(long, default_value_t = 100)]
    secrets: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MonteCarloArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Run,
    Enumerate,
    VerifyTable,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SecretSource {
    Explicit(SecretState),
    Random,
}

/// Validated command-line configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub n_agents: usize,
    pub secret: SecretSource,
    pub seed: u64,
    pub trials: usize,
    pub n_secrets: usize,
    pub output_path: Option<PathBuf>,
    pub qubit_cap: usize,
    pub branch_cap: u64,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Usage(#[from] clap::Error),
    #[error("malformed --secret: {0}")]
    MalformedSecret(String),
    #[error("--agents must be at least 2, got {0}")]
    TooFewAgents(usize),
    #[error("--trials must be at least 1")]
    NoTrials,
    #[error("--secrets must be at least 1")]
    NoSecrets,
}

impl CliError {
    /// Prints the error the way clap would and returns the exit status.
    pub fn report(&self) -> i32 {
        match self {
            CliError::Usage(e) => {
                let _ = e.print();
                e.exit_code()
            }
            other => {
                eprintln!("error: {other}");
                EXIT_RESOURCE
            }
        }
    }
}

fn parse_secret(text: &str) -> Result<SecretSource, CliError> {
    if text.trim().eq_ignore_ascii_case("random") {
        return Ok(SecretSource::Random);
    }
    let values = text
        .split(',')
        .map(|v| v.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::MalformedSecret(e.to_string()))?;
    if values.len() != 8 {
        return Err(CliError::MalformedSecret(format!("expected 8 numbers, got {}", values.len())));
    }
    let amps: Vec<Complex64> = values.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect();
    SecretState::from_amplitudes([amps[0], amps[1], amps[2], amps[3]])
        .map(SecretSource::Explicit)
        .map_err(|e| CliError::MalformedSecret(e.to_string()))
}

/// Parses a full argument vector, program name first.
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    let common_config = |mode: Mode, c: CommonArgs, trials: usize, branch_cap: u64| -> Result<RunConfig, CliError> {
        if c.agents < 2 {
            return Err(CliError::TooFewAgents(c.agents));
        }
        Ok(RunConfig {
            mode,
            n_agents: c.agents,
            secret: parse_secret(&c.secret)?,
            seed: c.seed,
            trials,
            n_secrets: 0,
            output_path: c.output,
            qubit_cap: c.qubit_cap,
            branch_cap,
        })
    };
    match cli.command {
        Command::Run(c) => common_config(Mode::Run, c, 1, DEFAULT_BRANCH_CAP),
        Command::Enumerate(e) => common_config(Mode::Enumerate, e.common, 0, e.branch_cap),
        Command::MonteCarlo(m) => {
            if m.trials == 0 {
                return Err(CliError::NoTrials);
            }
            common_config(Mode::MonteCarlo, m.common, m.trials, DEFAULT_BRANCH_CAP)
        }
        Command::VerifyTable(v) => {
            if v.secrets == 0 {
                return Err(CliError::NoSecrets);
            }
            Ok(RunConfig {
                mode: Mode::VerifyTable,
                n_agents: verify::TABLE_AGENTS,
                secret: SecretSource::Random,
                seed: v.seed,
                trials: 0,
                n_secrets: v.secrets,
                output_path: v.output,
                qubit_cap: DEFAULT_QUBIT_CAP,
                branch_cap: DEFAULT_BRANCH_CAP,
            })
        }
    }
}

/// Secret used by `run`, `enumerate` and `monte-carlo`: the explicit one, or
/// a generic secret drawn from a stream of `seed` separate from the one that
/// drives outcome sampling.
pub fn resolve_secret(source: &SecretSource, seed: u64) -> SecretState {
    match source {
        SecretSource::Explicit(s) => *s,
        SecretSource::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(1);
            SecretState::random_generic(&mut rng)
        }
    }
}

/// Exit status plus the JSON report for one invocation.
#[derive(Debug, Clone)]
pub struct Execution {
    pub exit_code: i32,
    pub report: Value,
}

impl Execution {
    pub fn render(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.report).expect("report is serializable");
        text.push('\n');
        text
    }
}

fn config_json(config: &RunConfig, secret: Option<&SecretState>) -> Value {
    let mut v = json!({
        "n_agents": config.n_agents,
        "seed": config.seed,
        "qubit_cap": config.qubit_cap,
    });
    if let Some(s) = secret {
        v["secret"] = json!(s);
        v["secret_source"] = json!(match config.secret {
            SecretSource::Explicit(_) => "explicit",
            SecretSource::Random => "random",
        });
    }
    match config.mode {
        Mode::Enumerate => v["branch_cap"] = json!(config.branch_cap),
        Mode::MonteCarlo => v["trials"] = json!(config.trials),
        Mode::VerifyTable => v["secrets"] = json!(config.n_secrets),
        Mode::Run => {}
    }
    v
}

/// Runs the selected mode. Exit 0 iff every check passes, 1 on a failed
/// check, 2 when a resource cap or input error stops the run.
pub fn execute(config: &RunConfig) -> Execution {
    let limits = Limits {
        qubit_cap: config.qubit_cap,
        branch_cap: config.branch_cap,
    };
    let secret = (config.mode != Mode::VerifyTable).then(|| resolve_secret(&config.secret, config.seed));
    let mut report = json!({
        "schema_version": SCHEMA_VERSION,
        "mode": config.mode,
        "config": config_json(config, secret.as_ref()),
    });

    let outcome: Result<(bool, Value), Error> = match config.mode {
        Mode::Run => {
            let secret = secret.expect("resolved above");
            let mut selector = SampledSelector::new(config.seed);
            run_protocol(&secret, config.n_agents, &mut selector, &limits).map(|t| {
                let passed = t.final_fidelity >= 1.0 - FIDELITY_TOLERANCE
                    && t.alice_bits() == 4
                    && t.published_bits() == 2 * (config.n_agents + 1);
                let efficiency = efficiency_report(&t);
                (passed, json!({ "transcript": t, "efficiency": efficiency }))
            })
        }
        Mode::Enumerate => {
            let secret = secret.expect("resolved above");
            verify::enumerate_branches(&secret, config.n_agents, &limits).map(|reports| {
                let summary = EnumerationSummary::from_reports(config.n_agents, &reports);
                (summary.passed, json!({ "summary": summary, "branches": reports }))
            })
        }
        Mode::VerifyTable => verify::verify_table(config.n_secrets, config.seed).map(|s| (s.passed, json!(s))),
        Mode::MonteCarlo => {
            let secret = secret.expect("resolved above");
            verify::monte_carlo(&secret, config.n_agents, config.trials, config.seed, &limits)
                .map(|s| (s.passed, json!(s)))
        }
    };

    let exit_code = match outcome {
        Ok((passed, result)) => {
            report["result"] = result;
            report["passed"] = json!(passed);
            if passed {
                EXIT_OK
            } else {
                EXIT_ASSERTION_FAILED
            }
        }
        Err(e) => {
            report["error"] = json!(e.to_string());
            report["passed"] = json!(false);
            EXIT_RESOURCE
        }
    };
    Execution { exit_code, report }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &str) -> Result<RunConfig, CliError> {
        parse_args(std::iter::once("qsts").chain(args.split_whitespace()))
    }

    #[test]
    fn parses_run_with_explicit_secret() {
        let c = parse("run --agents 2 --secret 0.5,0,0.5,0,0.5,0,0.5,0 --seed 7").unwrap();
        assert_eq!(c.mode, Mode::Run);
        assert_eq!(c.n_agents, 2);
        assert_eq!(c.seed, 7);
        let half = Complex64::new(0.5, 0.0);
        assert_eq!(c.secret, SecretSource::Explicit(SecretState::new(half, half, half, half).unwrap()));
    }

    #[test]
    fn parses_verify_table() {
        let c = parse("verify-table --secrets 100 --seed 1").unwrap();
        assert_eq!(c.mode, Mode::VerifyTable);
        assert_eq!((c.n_secrets, c.seed), (100, 1));
    }

    #[test]
    fn negative_amplitudes_parse() {
        let c = parse("run --secret -0.5,0,0.5,0,0.5,0,-0.5,0").unwrap();
        assert!(matches!(c.secret, SecretSource::Explicit(_)));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse("run --agents 1"), Err(CliError::TooFewAgents(1))));
        assert!(matches!(parse("run --secret 1,0,0"), Err(CliError::MalformedSecret(_))));
        assert!(matches!(parse("run --secret a,b,c,d,e,f,g,h"), Err(CliError::MalformedSecret(_))));
        assert!(matches!(parse("run --secret 1,0,1,0,0,0,0,0"), Err(CliError::MalformedSecret(_))));
        assert!(matches!(parse("run --bogus 3"), Err(CliError::Usage(_))));
        assert!(matches!(parse("monte-carlo --trials 0"), Err(CliError::NoTrials)));
        assert!(matches!(parse("frobnicate"), Err(CliError::Usage(_))));
    }

    #[test]
    fn run_report_is_deterministic() {
        let c = parse("run --agents 3 --seed 42").unwrap();
        let a = execute(&c);
        let b = execute(&c);
        assert_eq!(a.exit_code, EXIT_OK);
        assert_eq!(a.render(), b.render());
        assert_eq!(a.report["schema_version"], 1);
        assert_eq!(a.report["result"]["efficiency"]["ratio"], 1.0);
    }

    #[test]
    fn cap_exceeded_exits_two() {
        let c = parse("run --agents 3 --qubit-cap 10").unwrap();
        let e = execute(&c);
        assert_eq!(e.exit_code, EXIT_RESOURCE);
        assert!(e.report["error"].as_str().unwrap().contains("cap"));
        let c = parse("enumerate --agents 3 --branch-cap 100").unwrap();
        assert_eq!(execute(&c).exit_code, EXIT_RESOURCE);
    }

    #[test]
    fn random_secret_differs_from_sampling_stream() {
        let a = resolve_secret(&SecretSource::Random, 5);
        let b = resolve_secret(&SecretSource::Random, 5);
        let c = resolve_secret(&SecretSource::Random, 6);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
