use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use finisig_core::composite::{compose_components, compose_lattice, composite_distance, Component, Lattice, Symbol};
use finisig_core::scenario::{replay, run_scenario, Report, ScenarioConfig};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const BUILTIN: [(&str, &str); 6] = [
    ("ftw_cubic", include_str!("../../../scenarios/ftw_cubic.toml")),
    ("ftw_cubic_wide", include_str!("../../../scenarios/ftw_cubic_wide.toml")),
    ("compacton_cubic", include_str!("../../../scenarios/compacton_cubic.toml")),
    ("oscillatory_cubic", include_str!("../../../scenarios/oscillatory_cubic.toml")),
    ("compacton_quintic", include_str!("../../../scenarios/compacton_quintic.toml")),
    ("canard", include_str!("../../../scenarios/canard.toml")),
];

#[derive(Parser)]
#[command(name = "finisig", version, about = "Validated traveling waves and passage times through finite-time singularities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its report.
    Run {
        scenario: String,
        /// Config file; the built-in config of the scenario otherwise.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        step: Option<f64>,
        #[arg(long)]
        pieces: Option<usize>,
        #[arg(long, default_value = "reports")]
        out: PathBuf,
    },
    /// Re-verify a report from its stored evidence.
    Replay { report: PathBuf },
    /// Superpose copies of a profile from a report.
    Compose {
        /// Report holding the profile.
        report: PathBuf,
        /// Profile name inside the report; the first one otherwise.
        #[arg(long)]
        profile: Option<String>,
        /// Signs, e.g. `+-+`.
        #[arg(long)]
        symbols: String,
        /// Comma-separated offsets, one per symbol.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "spacing")]
        offsets: Vec<f64>,
        /// Lattice spacing; copies sit at `j · spacing` from `--first`.
        #[arg(long)]
        spacing: Option<f64>,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        first: i64,
        /// Indices of components taken as `φ(−ξ)`.
        #[arg(long, value_delimiter = ',')]
        reflect: Vec<usize>,
        /// Second symbol sequence on the same lattice to measure the distance to.
        #[arg(long, requires = "spacing")]
        compare: Option<String>,
    },
}

fn builtin(name: &str) -> Result<ScenarioConfig> {
    let (_, text) = BUILTIN
        .iter()
        .find(|(n, _)| *n == name)
        .with_context(|| format!("unknown scenario {name:?}; pass --config"))?;
    Ok(ScenarioConfig::from_toml(text)?)
}

fn symbols(s: &str) -> Result<Vec<Symbol>> {
    s.chars()
        .map(|c| match c {
            '+' => Ok(Symbol::Plus),
            '-' => Ok(Symbol::Minus),
            other => bail!("symbol {other:?} is not + or -"),
        })
        .collect()
}

fn load_report(path: &Path) -> Result<Report> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Report::from_json(&text)?)
}

fn run(
    scenario: &str,
    config: Option<&Path>,
    order: Option<usize>,
    step: Option<f64>,
    pieces: Option<usize>,
    out: &Path,
) -> Result<bool> {
    let mut cfg = match config {
        Some(p) => ScenarioConfig::load(p)?,
        None => builtin(scenario)?,
    };
    cfg.name = scenario.to_string();
    if let Some(o) = order {
        cfg.integrator.order = o;
    }
    if let Some(h) = step {
        cfg.integrator.step = h;
    }
    if let Some(k) = pieces {
        cfg.integrator.pieces = k;
    }
    let report = run_scenario(&cfg)?;
    for v in &report.verdicts {
        println!("{} {}: {}", if v.ok { "ok  " } else { "FAIL" }, v.stage, v.detail);
    }
    for t in &report.times {
        println!("time {} ∈ {}", t.name, t.time.value.render());
    }
    report.write_to(out)?;
    println!("report written to {}", out.join(format!("{}.json", report.scenario)).display());
    Ok(report.passed())
}

fn main() -> Result<ExitCode> {
    let cli = Cli::parse();
    let ok = match cli.command {
        Command::Run {
            scenario,
            config,
            order,
            step,
            pieces,
            out,
        } => run(&scenario, config.as_deref(), order, step, pieces, &out)?,
        Command::Replay { report } => {
            let rep = load_report(&report)?;
            let outcome = replay(&rep)?;
            for v in &outcome.verdicts {
                println!("{} {}", if v.ok { "ok  " } else { "FAIL" }, v.stage);
            }
            for m in &outcome.mismatches {
                println!("mismatch {m}");
            }
            println!(
                "{} stages, verdicts {}",
                outcome.verdicts.len(),
                if outcome.identical() { "identical" } else { "differ" }
            );
            outcome.passed()
        }
        Command::Compose {
            report,
            profile,
            symbols: syms,
            offsets,
            spacing,
            first,
            reflect,
            compare,
        } => {
            let rep = load_report(&report)?;
            let entry = match &profile {
                Some(n) => rep.profiles.iter().find(|p| &p.name == n),
                None => rep.profiles.first(),
            }
            .context("report has no such profile")?;
            let syms = symbols(&syms)?;
            let wave = match spacing {
                Some(xi0) => compose_lattice(&entry.profile, Lattice { xi0, first_index: first }, &syms)?,
                None => {
                    if offsets.len() != syms.len() {
                        bail!("{} offsets for {} symbols", offsets.len(), syms.len());
                    }
                    let components = offsets
                        .iter()
                        .zip(&syms)
                        .enumerate()
                        .map(|(i, (&offset, &symbol))| Component {
                            profile: 0,
                            offset,
                            symbol,
                            reflected: reflect.contains(&i),
                        })
                        .collect();
                    compose_components(std::slice::from_ref(&entry.profile), components)?
                }
            };
            println!("{}", serde_json::to_string_pretty(&wave)?);
            if let (Some(other), Some(xi0)) = (compare, spacing) {
                let w2 = compose_lattice(&entry.profile, Lattice { xi0, first_index: first }, &symbols(&other)?)?;
                let d = composite_distance(&wave, &w2)?;
                println!("distance {} (terms beyond the window ≤ {})", d.value, d.tail_bound);
            }
            true
        }
    };
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}
