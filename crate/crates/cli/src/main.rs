//! `stator`: run remote-operation scenarios and verification suites, emitting
//! a JSON report plus a short human summary derived from it.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use serde_json::Value;
use stator::protocol::MeasureMode;
use stator::report::Report;
use stator::stator::{default_spectrum, lift_generator};
use stator::verify::{count_eigenoperators, run_batch};
use stator::{Error, Generator, GeneratorSpec, Involution, NLevel, Scenario, StateVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Rotate2,
    Rotaten,
    Multi,
    Interact,
    Cnot,
    Measure,
    Prepare,
    CountOps,
    Stats,
}

/// Simulate entanglement-assisted remote operations.
///
/// `stats` runs `--trials` sampled trials of the scenario named by
/// `--scenario` and tests every classical channel for uniformity.
#[derive(Debug, Parser)]
#[command(name = "stator", version)]
struct Cli {
    /// Scenario to run (same as `--scenario`, except for `stats`).
    #[arg(value_enum)]
    command: Option<Kind>,
    #[arg(long, value_enum)]
    scenario: Option<Kind>,
    /// Level count of each remote system.
    #[arg(long)]
    n: Option<usize>,
    /// Number of remote parties.
    #[arg(long)]
    parties: Option<usize>,
    /// Single rotation angle (or coupling strength).
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// Comma-separated angle list.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    angles: Option<Vec<f64>>,
    /// Involution axis: `x`, `y`, `z` or `a,b,c`.
    #[arg(long, allow_hyphen_values = true)]
    axis: Option<String>,
    /// Integer spectrum of the n-level generator.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    spectrum: Option<Vec<i64>>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Input state as inline JSON or a path to a JSON file.
    #[arg(long)]
    state: Option<String>,
    /// Write the report here; the summary then goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated measurement outcomes to force, in order.
    #[arg(long, value_delimiter = ',')]
    force_branch: Option<Vec<usize>>,
}

#[derive(Debug)]
enum Failure {
    Config { field: &'static str, msg: String },
    Run(String),
}

fn bad(field: &'static str, msg: impl Into<String>) -> Failure {
    Failure::Config { field, msg: msg.into() }
}

const DEFAULT_TRIALS: u64 = 10_000;

fn axis(cli: &Cli) -> Result<Involution, Failure> {
    let raw = cli.axis.as_deref().unwrap_or("z").trim();
    let parsed = if raw.len() == 1 {
        Involution::named(raw.chars().next().unwrap())
    } else {
        let parts = raw.split(',').map(|p| p.trim().parse::<f64>()).collect::<Result<Vec<_>, _>>();
        match parts.ok().and_then(|v| <[f64; 3]>::try_from(v).ok()) {
            Some(v) => Involution::from_axis(v),
            None => return Err(bad("axis", format!("expected x, y, z or three comma-separated numbers, got {raw:?}"))),
        }
    };
    parsed.map_err(|e| bad("axis", e.to_string()))
}

/// `lifted`: the spectrum must admit a shift-operator lift on Alice's side.
fn n_level(cli: &Cli, default_n: usize, lifted: bool) -> Result<NLevel, Failure> {
    let spectrum = match (&cli.spectrum, cli.n) {
        (Some(s), Some(n)) if s.len() != n => {
            return Err(bad("spectrum", format!("{} entries for --n {n}", s.len())));
        }
        (Some(s), _) => s.clone(),
        (None, n) => {
            let n = n.unwrap_or(default_n);
            if n < 2 {
                return Err(bad("n", "needs at least 2 levels"));
            }
            default_spectrum(n)
        }
    };
    let field = if cli.spectrum.is_some() { "spectrum" } else { "n" };
    let nl = NLevel::with_spectrum(spectrum).map_err(|e| bad(field, e.to_string()))?;
    if lifted {
        lift_generator(&nl).map_err(|e| bad(field, e.to_string()))?;
    }
    Ok(nl)
}

/// The angle list, from `--angles` or a lone `--alpha`.
fn angle_list(cli: &Cli, want: usize) -> Result<Vec<f64>, Failure> {
    let angles = match (&cli.angles, cli.alpha) {
        (Some(_), Some(_)) => return Err(bad("angles", "give either --alpha or --angles, not both")),
        (Some(a), None) => a.clone(),
        (None, Some(a)) => vec![a],
        (None, None) => return Err(bad("angles", format!("{want} angle(s) required"))),
    };
    if angles.len() != want {
        return Err(bad("angles", format!("expected {want} angle(s), got {}", angles.len())));
    }
    if angles.iter().any(|a| !a.is_finite()) {
        return Err(bad("angles", "angles must be finite"));
    }
    Ok(angles)
}

fn alpha(cli: &Cli) -> Result<f64, Failure> {
    if cli.angles.is_some() {
        return Err(bad("alpha", "this scenario takes a single --alpha"));
    }
    match cli.alpha {
        Some(a) if a.is_finite() => Ok(a),
        Some(_) => Err(bad("alpha", "must be finite")),
        None => Err(bad("alpha", "required")),
    }
}

fn scenario(cli: &Cli, kind: Kind) -> Result<Scenario, Failure> {
    Ok(match kind {
        Kind::Rotate2 => Scenario::Rotate2 { axis: axis(cli)?, alpha: alpha(cli)? },
        Kind::Rotaten => {
            let spec = n_level(cli, 3, true)?;
            let angles = angle_list(cli, spec.n() - 1)?;
            Scenario::RotateN { spec, angles }
        }
        Kind::Multi => {
            let parties = cli.parties.unwrap_or(2);
            if parties == 0 {
                return Err(bad("parties", "needs at least one remote party"));
            }
            let part = match cli.n {
                None | Some(2) if cli.spectrum.is_none() => Generator::Involution(axis(cli)?),
                _ => Generator::NLevel(n_level(cli, 2, true)?),
            };
            let generator = Generator::Product(vec![part; parties]);
            let spec = if cli.angles.is_none() && cli.alpha.is_some() {
                // a lone --alpha couples the first power of every party
                GeneratorSpec::product(generator.parts().to_vec(), [(vec![1; parties], alpha(cli)?)])
            } else {
                GeneratorSpec::new(generator.clone(), angle_list(cli, generator.angle_count())?)
            };
            Scenario::Multi { spec: spec.map_err(|e| bad("angles", e.to_string()))? }
        }
        Kind::Interact => {
            let op_a = n_level(cli, 2, false)?.generator();
            Scenario::Interact { axis: axis(cli)?, op_a, lambda: alpha(cli)? }
        }
        Kind::Cnot => Scenario::Cnot,
        Kind::Measure => Scenario::Measure { axis: axis(cli)?, mode: MeasureMode::WaitForCbit },
        Kind::Prepare => {
            let generator = if cli.spectrum.is_some() || cli.n.is_some_and(|n| n != 2) {
                Generator::NLevel(n_level(cli, 2, true)?)
            } else {
                Generator::Involution(axis(cli)?)
            };
            Scenario::Prepare { generator }
        }
        Kind::CountOps | Kind::Stats => unreachable!("not a protocol scenario"),
    })
}

fn input_state(cli: &Cli, dims: &[usize]) -> Result<StateVector, Failure> {
    let Some(raw) = &cli.state else {
        return StateVector::basis(dims.to_vec(), 0).map_err(|e| Failure::Run(e.to_string()));
    };
    let text = if raw.trim_start().starts_with('{') {
        raw.clone()
    } else {
        std::fs::read_to_string(raw).map_err(|e| bad("state", format!("cannot read {raw}: {e}")))?
    };
    let psi: StateVector = serde_json::from_str(&text).map_err(|e| bad("state", e.to_string()))?;
    if psi.dims() != dims {
        return Err(bad("state", format!("dims {:?} do not match the scenario's {:?}", psi.dims(), dims)));
    }
    Ok(psi)
}

fn run_error(e: Error) -> Failure {
    match e {
        Error::ImpossibleForcedOutcome { .. } | Error::SymbolOutOfRange { .. } => bad("force-branch", e.to_string()),
        e => Failure::Run(e.to_string()),
    }
}

fn resolve(cli: &Cli) -> Result<(Kind, Option<Kind>), Failure> {
    match (cli.command, cli.scenario) {
        (Some(Kind::Stats), Some(inner)) | (None, Some(inner)) if matches!(inner, Kind::Stats | Kind::CountOps) => {
            if cli.command.is_some() {
                Err(bad("scenario", "stats needs a protocol scenario"))
            } else if inner == Kind::Stats {
                Err(bad("scenario", "stats needs a command form: stats --scenario <name>"))
            } else {
                Ok((inner, None))
            }
        }
        (Some(Kind::Stats), Some(inner)) => Ok((Kind::Stats, Some(inner))),
        (Some(Kind::Stats), None) => Err(bad("scenario", "stats needs --scenario naming the scenario to sample")),
        (Some(k), Some(s)) if k != s => Err(bad("scenario", format!("conflicts with positional {k:?}"))),
        (Some(k), _) | (None, Some(k)) => Ok((k, None)),
        (None, None) => Err(bad("scenario", "required")),
    }
}

fn execute(cli: &Cli) -> Result<Report, Failure> {
    let (kind, inner) = resolve(cli)?;
    let forced = cli.force_branch.clone().unwrap_or_default();
    if cli.trials.is_some() && kind != Kind::Stats {
        return Err(bad("trials", "only used by stats"));
    }
    if kind == Kind::CountOps {
        let n = cli.n.ok_or_else(|| bad("n", "required"))?;
        let parties = cli.parties.unwrap_or(1);
        if !forced.is_empty() {
            return Err(bad("force-branch", "count-ops makes no measurements"));
        }
        let family = count_eigenoperators(n, parties).map_err(|e| bad("n", e.to_string()))?;
        return Ok(Report::from_family(cli.seed, family));
    }
    let scenario = scenario(cli, inner.unwrap_or(kind))?;
    let psi = input_state(cli, &scenario.system_dims())?;
    let sample = scenario.run(&psi, cli.seed, 0, &forced).map_err(run_error)?;
    if sample.branch_record.len() < forced.len() {
        return Err(bad(
            "force-branch",
            format!("{} outcomes forced but the run makes {} measurements", forced.len(), sample.branch_record.len()),
        ));
    }
    if kind != Kind::Stats {
        return Ok(Report::from_run(&scenario, cli.seed, &sample));
    }
    let trials = cli.trials.unwrap_or(DEFAULT_TRIALS);
    if trials == 0 {
        return Err(bad("trials", "must be positive"));
    }
    let batch = run_batch(&scenario, &psi, trials, cli.seed).map_err(run_error)?;
    Report::from_batch(&scenario, cli.seed, &sample, &batch).map_err(run_error)
}

fn party(v: &Value) -> String {
    match v.as_u64() {
        Some(0) => "Alice".to_string(),
        Some(i) => format!("B{i}"),
        None => v.to_string(),
    }
}

/// Human-readable lines read back from the JSON report.
fn summary(report: &Value) -> String {
    let mut lines = Vec::new();
    let field = |k: &str| report.get(k).cloned().unwrap_or(Value::Null);
    lines.push(format!(
        "scenario {} (seed {}, dims {})",
        field("scenario").as_str().unwrap_or("?"),
        field("seed"),
        field("dims")
    ));
    match field("fidelity").as_f64() {
        Some(f) => lines.push(format!("fidelity 1 - {:.1e}", (1.0 - f).max(0.0))),
        None => lines.push("fidelity n/a".to_string()),
    }
    if let Some(o) = report.get("outcome") {
        lines.push(format!("measured eigenvalue {o}"));
    }
    if let Some(b) = field("branches").as_array().filter(|b| !b.is_empty()) {
        let parts: Vec<String> = b.iter().map(|x| format!("{} (p={})", x["outcome"], x["prob"])).collect();
        lines.push(format!("branches: {}", parts.join(", ")));
    }
    lines.push(format!("ledger {}", field("ledger")));
    if let Some(tests) = report.get("chi_square").and_then(Value::as_array) {
        for t in tests {
            lines.push(format!(
                "chi-square {} -> {}: {} (statistic {}, critical {}, dof {})",
                party(&t["from"]),
                party(&t["to"]),
                if t["pass"].as_bool() == Some(true) { "uniform" } else { "NOT uniform" },
                t["statistic"],
                t["critical"],
                t["dof"]
            ));
        }
    }
    if let Some(f) = report.get("operator_family") {
        lines.push(format!(
            "eigenoperators: {} generated, {} independent (expected {}), max residual {}",
            f["generated"], f["independent"], f["expected"], f["max_residual"]
        ));
    }
    lines.push(if field("pass").as_bool() == Some(true) { "PASS" } else { "FAIL" }.to_string());
    lines.join("\n")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(Failure::Config { field, msg }) => {
            eprintln!("error: invalid --{field}: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let value = serde_json::to_value(&report).expect("report serializes");
    let json = serde_json::to_string_pretty(&value).expect("report serializes") + "\n";
    let text = summary(&value);
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, json) {
                eprintln!("error: invalid --out: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
            println!("{text}");
        }
        None => {
            print!("{json}");
            eprintln!("{text}");
        }
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
