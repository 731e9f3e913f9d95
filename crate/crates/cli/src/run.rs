//! Executes a parsed command line and renders its report.

use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::Parser;
use serde::Serialize;
use serde_json::{json, Value};

use sumset_core::construct::{find_bc_high_density, verify_bc, HighDensityParams};
use sumset_core::density::{default_schedule, density_report};
use sumset_core::io::{format_set, read_set, ReadOptions, SetFormat};
use sumset_core::mixing::{find_bc_pseudorandom, mixing_report, MixingParams, Mode, PseudorandomParams};
use sumset_core::ramsey::{one_shift, OneShiftParams};
use sumset_core::transform::{default_n_schedule, fatten};
use sumset_core::{generate, GeneratorKind, GeneratorSpec, WindowSet};

use crate::args::{Cli, Command, FileFormat, InputArgs, ModeArg, Pipeline};
use crate::harness;

pub const SCHEMA: &str = "sumset/1";

/// Everything that determines a run's output. Thread count is left out on
/// purpose: it never changes results.
#[derive(Debug, Serialize)]
pub struct RunConfig {
    pub subcommand: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<InputSource>,
    pub params: Value,
    pub seed: u64,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum InputSource {
    File { path: PathBuf, lenient: bool },
    Generator(GeneratorSpec),
}

/// Rendered report plus exit status: 0 success, 1 structured negative.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub body: String,
}

fn input_source(args: &InputArgs) -> anyhow::Result<InputSource> {
    match (&args.input, &args.gen) {
        (Some(path), _) => Ok(InputSource::File {
            path: path.clone(),
            lenient: args.lenient,
        }),
        (None, Some(text)) => {
            let kind: GeneratorKind = text.parse()?;
            let window_len = if matches!(kind, GeneratorKind::File { .. }) {
                0
            } else {
                args.window_len
            };
            let spec = GeneratorSpec::new(kind, args.seed, window_len);
            spec.validate()?;
            Ok(InputSource::Generator(spec))
        }
        (None, None) => bail!("one of --input or --gen is required"),
    }
}

fn load(source: &InputSource) -> anyhow::Result<WindowSet> {
    Ok(match source {
        InputSource::File { path, lenient } => read_set(path, ReadOptions { lenient: *lenient })
            .with_context(|| format!("reading {}", path.display()))?,
        InputSource::Generator(spec) => generate(spec)?,
    })
}

fn envelope(config: &RunConfig, result: impl Serialize) -> anyhow::Result<String> {
    let mut text = serde_json::to_string_pretty(&json!({
        "schema": SCHEMA,
        "config": config,
        "result": result,
    }))?;
    text.push('\n');
    Ok(text)
}

/// Runs `cli` on the current rayon pool.
pub fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let (input, params) = match &cli.command {
        Command::Gen { input, format } => (Some(input), json!({ "format": format })),
        Command::Density { input, params } => (Some(input), serde_json::to_value(params)?),
        Command::Fatten { input, params } => (Some(input), serde_json::to_value(params)?),
        Command::FindBc { input, params } => (Some(input), serde_json::to_value(params)?),
        Command::OneShift { input, params } => (Some(input), serde_json::to_value(params)?),
        Command::Mixing { input, params } => (Some(input), serde_json::to_value(params)?),
        Command::Verify { input, params } => (Some(input), serde_json::to_value(params)?),
        Command::Harness { params } => (None, serde_json::to_value(params)?),
    };
    let source = input.map(input_source).transpose()?;
    let config = RunConfig {
        subcommand: cli.command.name(),
        seed: input.map_or(0, |i| i.seed),
        input: source,
        params,
        output: cli.output.clone(),
    };
    let set = || load(config.input.as_ref().expect("subcommand takes an input"));

    let outcome = match &cli.command {
        Command::Gen { format, .. } => {
            let format = match format {
                FileFormat::List => SetFormat::List,
                FileFormat::Rle => SetFormat::Rle,
            };
            Outcome {
                code: 0,
                body: format_set(&set()?, format),
            }
        }
        Command::Density { params, .. } => {
            let a = set()?;
            let schedule = if params.schedule.is_empty() {
                default_schedule(a.window_len())
            } else {
                params.schedule.clone()
            };
            Outcome {
                code: 0,
                body: envelope(&config, density_report(&a, &schedule)?)?,
            }
        }
        Command::Fatten { params, .. } => {
            let a = set()?;
            let schedule = if params.n_schedule.is_empty() {
                default_n_schedule(a.window_len())
            } else {
                params.n_schedule.clone()
            };
            let out = fatten(&a, params.epsilon, &schedule)?;
            Outcome {
                code: if out.found().is_some() { 0 } else { 1 },
                body: envelope(&config, out)?,
            }
        }
        Command::FindBc { params, .. } => {
            let a = set()?;
            let cert = match params.pipeline {
                Pipeline::HighDensity => find_bc_high_density(
                    &a,
                    HighDensityParams {
                        size: params.size,
                        candidates: params.candidates,
                        tau: params.tau,
                        rho: params.rho,
                        d_len: params.d_len,
                    },
                )?,
                Pipeline::Pseudorandom => {
                    let mut p = PseudorandomParams::new(params.size);
                    p.candidates = params.candidates;
                    p.tau = params.tau;
                    p.rho = params.rho;
                    p.d_len = params.d_len;
                    find_bc_pseudorandom(&a, p)?
                }
            };
            Outcome {
                code: if cert.is_verified_at_size() { 0 } else { 1 },
                body: envelope(&config, cert)?,
            }
        }
        Command::OneShift { params, .. } => {
            let a = set()?;
            let cert = one_shift(&a, OneShiftParams::new(params.size, params.epsilon))?;
            Outcome {
                code: if cert.certificate.is_verified_at_size() { 0 } else { 1 },
                body: envelope(&config, cert)?,
            }
        }
        Command::Mixing { params, .. } => {
            let a = set()?;
            let mut p = MixingParams::new(params.n_max);
            if !params.eps.is_empty() {
                p.eps = params.eps.clone();
            }
            p.mode = match params.mode {
                ModeArg::Cyclic => Mode::Cyclic,
                ModeArg::Truncated => Mode::Truncated,
            };
            p.theta_mix = params.theta_mix;
            p.theta_str = params.theta_str;
            Outcome {
                code: 0,
                body: envelope(&config, mixing_report(&a, &p)?)?,
            }
        }
        Command::Verify { params, .. } => {
            let a = set()?;
            let text = fs::read_to_string(&params.certificate)
                .with_context(|| format!("reading {}", params.certificate.display()))?;
            let claimed = ClaimedCertificate::parse(&text)?;
            if let Some(w) = claimed.window_len {
                if w != a.window_len() {
                    bail!("certificate window {w} does not match the set window {}", a.window_len());
                }
            }
            let cert = verify_bc(&a, &claimed.b, &claimed.c, claimed.k);
            Outcome {
                code: if cert.verified { 0 } else { 1 },
                body: envelope(&config, cert)?,
            }
        }
        Command::Harness { params } => {
            let report = harness::run_suite(params.suite)?;
            Outcome {
                code: if report.all_passed() { 0 } else { 1 },
                body: envelope(&config, report)?,
            }
        }
    };
    Ok(outcome)
}

/// The parts of a certificate `verify` needs, from any `sumset/1` report.
#[derive(Debug, PartialEq)]
pub struct ClaimedCertificate {
    pub b: Vec<usize>,
    pub c: Vec<usize>,
    pub k: i64,
    pub window_len: Option<usize>,
}

impl ClaimedCertificate {
    pub fn parse(text: &str) -> anyhow::Result<Self> {
        let root: Value = serde_json::from_str(text).context("certificate is not JSON")?;
        if let Some(schema) = root.get("schema").and_then(Value::as_str) {
            if schema != SCHEMA {
                bail!("unsupported schema `{schema}`");
            }
        }
        let body = root.get("result").unwrap_or(&root);
        let list = |key: &str| -> anyhow::Result<Vec<usize>> {
            let arr = body
                .get(key)
                .and_then(Value::as_array)
                .with_context(|| format!("certificate has no `{key}` list"))?;
            arr.iter()
                .map(|v| v.as_u64().map(|x| x as usize).context("members must be non-negative integers"))
                .collect()
        };
        Ok(Self {
            b: list("b")?,
            c: list("c")?,
            k: body.get("k").and_then(Value::as_i64).unwrap_or(0),
            window_len: body.get("window_len").and_then(Value::as_u64).map(|w| w as usize),
        })
    }
}

/// Parses `args` (without the program name) and runs on a pool of `threads`.
pub fn execute<I, S>(args: I, threads: Option<usize>) -> anyhow::Result<Outcome>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("sumset")).chain(args.into_iter().map(Into::into));
    let cli = Cli::try_parse_from(argv)?;
    run_on_pool(&cli, threads.or(cli.threads))
}

pub fn run_on_pool(cli: &Cli, threads: Option<usize>) -> anyhow::Result<Outcome> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t.max(1));
    }
    builder.build()?.install(|| run(cli))
}
