//! Argument parsing, report assembly and serialization for the `wbell`
//! binary.
//!
//! Every command produces a [`RunReport`]. JSON output is a single line with
//! keys `command`, `params`, `results`, `seed`, `version`; object keys are
//! sorted and every floating-point number is written with 17 significant
//! digits, so identical invocations are byte-identical.

use std::fmt::Write as _;
use std::io;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::experiment::{
    estimate_ch, noise_sweep, noise_threshold, simulate_experiment, SweepMode, SweepRow,
    SWEEP_CSV_HEADER,
};
use crate::inequalities::{
    ch_report, ch_value, chsh_report, chsh_value, cirelson_ch_bound, lhv_enumerate_ch,
    lhv_enumerate_chsh, lhv_enumerate_w_selection, tsirelson_max, ChshSpec, CIRELSON_CHSH_BOUND,
};
use crate::optimize::{maximize, probe_quoted_angles, singlet_chsh, AngleBox, EvaluationModel};
use crate::scenario::{all_outcomes, QuantumState};
use crate::selection::{
    ch_terms_from_distributions, classify_trio, counterfactual_ch_probabilities,
    counterfactual_correlations, epr_certainty_checks, five_distributions, membership_is_local,
    PairAssignment, SelectionRule,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(
    name = "wbell",
    version,
    about = "CHSH/CH violations by post-selected qubit pairs of a three-qubit W state"
)]
pub struct Cli {
    /// Output format (default: csv for `sweep`, json otherwise)
    #[arg(long, global = true, value_enum)]
    pub output: Option<OutputFormat>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateArg {
    W,
    Ghz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LhvScenario {
    Chsh,
    Ch,
    WSelection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelArg {
    SymOperator,
    CondProduct,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeArg {
    Exact,
    Sampled,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact distributions, counterfactual correlations, CHSH and CH values
    Exact(ExactArgs),
    /// Local-hidden-variable bounds by exhaustive enumeration
    Lhv(LhvArgs),
    /// Sampled and refined quantum maximum of the two-qubit CHSH operator
    Tsirelson(TsirelsonArgs),
    /// Maximize the constrained W functional and probe the quoted angles
    Optimize(OptimizeArgs),
    /// Monte Carlo of the five-setup experiment and the CH estimate
    Simulate(SimulateArgs),
    /// CH lower bound across white-noise levels
    Sweep(SweepArgs),
    /// Noise level at which the exact CH lower bound reaches a target
    Threshold(ThresholdArgs),
    /// Pair-selection rules and whether membership is locally decidable
    Selection,
}

#[derive(Debug, Args, Serialize)]
pub struct ExactArgs {
    #[arg(long, value_enum, default_value_t = StateArg::W)]
    pub state: StateArg,
    /// White-noise mixing parameter p in [0, 1]
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct LhvArgs {
    #[arg(long, value_enum, default_value_t = LhvScenario::Chsh)]
    pub scenario: LhvScenario,
}

#[derive(Debug, Args, Serialize)]
pub struct TsirelsonArgs {
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct OptimizeArgs {
    #[arg(long, value_enum, default_value_t = ModelArg::Both)]
    pub model: ModelArg,
    /// Grid points per axis for the two-angle W functional
    #[arg(long, default_value_t = 200)]
    pub grid: usize,
    /// Grid points per axis for the four-angle singlet CHSH objective
    #[arg(long, default_value_t = 9)]
    pub chsh_grid: usize,
    /// Simplex parameter tolerance (radians)
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    /// Shots per measurement setup
    #[arg(long, default_value_t = 100_000)]
    pub shots: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    #[arg(long = "from", default_value_t = 0.0)]
    pub p_from: f64,
    #[arg(long = "to", default_value_t = 1.0)]
    pub p_to: f64,
    #[arg(long, default_value_t = 11)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
    /// Shots per setup and point (sampled mode)
    #[arg(long, default_value_t = 10_000)]
    pub shots: u64,
    /// Base seed; point i uses seed + i (sampled mode)
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct ThresholdArgs {
    #[arg(long, default_value_t = 0.0)]
    pub target: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub params: Value,
    pub results: Value,
    pub seed: Option<u64>,
    pub version: String,
}

#[derive(Debug)]
pub enum CliError {
    /// Invalid flags or flag combinations; exit code 1.
    Usage(String),
    /// Computation failed; exit code 2.
    Compute(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 1,
            Self::Compute(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Usage(msg) => write!(f, "usage error: {msg}"),
            Self::Compute(e) => write!(f, "computation failed: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self::Compute(e)
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn check_noise(p: f64) -> Result<(), CliError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(usage(format!("--noise {p} outside [0, 1]")))
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn outcome_table(probabilities: &[f64], n: usize) -> Value {
    Value::Array(
        all_outcomes(n)
            .zip(probabilities)
            .map(|(o, &p)| json!({ "outcome": o, "probability": p.clamp(0.0, 1.0) }))
            .collect(),
    )
}

fn build_state(state: StateArg, noise: f64) -> Result<QuantumState, CliError> {
    check_noise(noise)?;
    let base = match state {
        StateArg::W => QuantumState::w(),
        StateArg::Ghz => QuantumState::ghz(),
    };
    if noise == 0.0 {
        Ok(base)
    } else {
        Ok(base.white_noise(noise)?)
    }
}

fn cmd_exact(args: &ExactArgs) -> Result<Value, CliError> {
    let state = build_state(args.state, args.noise)?;
    let dists = five_distributions(&state)?;
    let distributions: serde_json::Map<String, Value> = dists
        .iter()
        .map(|d| (d.setup().to_string(), outcome_table(d.probabilities(), 3)))
        .collect();
    let terms = ch_terms_from_distributions(&dists)?;

    let (counterfactual, chsh, ch_probabilities, ch_val, note) =
        match counterfactual_correlations(&state) {
            Ok(c) => {
                let v = chsh_value(c.zz, c.zx, c.xz, c.xx, ChshSpec::symbolic());
                let probs = counterfactual_ch_probabilities(&state)?;
                let ch = ch_value(probs.as_array().map(|p| p.clamp(0.0, 1.0)))?;
                (
                    to_value(&c),
                    json!({
                        "value": v,
                        "at_xk_minus": v.eval(-1),
                        "at_xk_plus": v.eval(1),
                        "report": chsh_report(v),
                    }),
                    to_value(&probs),
                    to_value(&ch_report(ch)),
                    Value::Null,
                )
            }
            Err(Error::NotWState { fidelity }) => (
                Value::Null,
                Value::Null,
                Value::Null,
                Value::Null,
                json!(format!(
                    "counterfactual chain needs the exact W state (fidelity {fidelity}); \
                     only the measurable ch_lower is reported"
                )),
            ),
            Err(e) => return Err(e.into()),
        };

    Ok(json!({
        "distributions": distributions,
        "counterfactual_correlations": counterfactual,
        "chsh_value": chsh,
        "ch_probabilities": ch_probabilities,
        "ch_value": ch_val,
        "ch_terms": terms,
        "ch_lower": terms.ch_lower,
        "lhv_ch_bound": 0.0,
        "cirelson_ch_bound": cirelson_ch_bound(),
        "cirelson_chsh_bound": CIRELSON_CHSH_BOUND,
        "certainty_checks": epr_certainty_checks(&state)?,
        "note": note,
    }))
}

fn cmd_lhv(args: &LhvArgs) -> Value {
    match args.scenario {
        LhvScenario::Chsh => to_value(&lhv_enumerate_chsh()),
        LhvScenario::Ch => to_value(&lhv_enumerate_ch()),
        LhvScenario::WSelection => to_value(&lhv_enumerate_w_selection()),
    }
}

fn cmd_tsirelson(args: &TsirelsonArgs) -> Result<Value, CliError> {
    if args.samples == 0 {
        return Err(usage("--samples must be ≥ 1"));
    }
    let r = tsirelson_max(args.samples, args.seed)?;
    Ok(json!({
        "report": r,
        "sampled_within_bound": r.sampled_max_spectral <= CIRELSON_CHSH_BOUND + 1e-9,
        "refined_gap": (r.refined_max - CIRELSON_CHSH_BOUND).abs(),
    }))
}

fn cmd_optimize(args: &OptimizeArgs) -> Result<Value, CliError> {
    if args.grid < 2 || args.chsh_grid < 2 {
        return Err(usage("--grid and --chsh-grid must be ≥ 2"));
    }
    if !(args.tol >= 0.0) {
        return Err(usage("--tol must be ≥ 0"));
    }
    let models: &[EvaluationModel] = match args.model {
        ModelArg::SymOperator => &[EvaluationModel::SymOperator],
        ModelArg::CondProduct => &[EvaluationModel::CondProduct],
        ModelArg::Both => &EvaluationModel::ALL,
    };
    let mut probes = serde_json::Map::new();
    for &m in models {
        let r = probe_quoted_angles(m, args.grid, args.tol, args.seed)?;
        probes.insert(m.name().to_string(), to_value(&r));
    }
    let chsh_box = AngleBox::square(4, -std::f64::consts::PI, std::f64::consts::PI)?;
    let chsh = maximize(singlet_chsh, &chsh_box, args.chsh_grid, args.tol, args.seed)?;
    Ok(json!({
        "w_functional": probes,
        "singlet_chsh": {
            "value": chsh.value,
            "argmax": chsh.argmax,
            "grid_best_value": chsh.grid_best_value,
            "bound": CIRELSON_CHSH_BOUND,
            "gap": (chsh.value - CIRELSON_CHSH_BOUND).abs(),
        },
    }))
}

fn cmd_simulate(args: &SimulateArgs) -> Result<Value, CliError> {
    if args.shots == 0 {
        return Err(usage("--shots must be ≥ 1"));
    }
    let state = build_state(StateArg::W, args.noise)?;
    let tables = simulate_experiment(&state, args.shots, args.seed)?;
    let est = estimate_ch(&tables)?;
    let counts: serde_json::Map<String, Value> = tables
        .iter()
        .map(|t| {
            let rows = all_outcomes(3)
                .zip(t.counts())
                .map(|(o, &c)| json!({ "outcome": o, "count": c }))
                .collect();
            (t.setup().to_string(), Value::Array(rows))
        })
        .collect();
    let cirelson = cirelson_ch_bound();
    Ok(json!({
        "counts": counts,
        "estimate": est,
        "ch_lower_exact": crate::selection::ch_lower_bound(&state)?,
        "cirelson_ch_bound": cirelson,
        "ci_excludes_cirelson": !est.ci_contains(cirelson) && est.ci95[0] > cirelson,
        "ci_excludes_lhv": est.ci95[0] > 0.0,
    }))
}

fn sweep_mode(args: &SweepArgs) -> Result<SweepMode, CliError> {
    if !(0.0 <= args.p_from && args.p_from <= args.p_to && args.p_to <= 1.0) {
        return Err(usage("need 0 ≤ --from ≤ --to ≤ 1"));
    }
    if args.steps < 2 {
        return Err(usage("--steps must be ≥ 2"));
    }
    match args.mode {
        ModeArg::Exact => Ok(SweepMode::Exact),
        ModeArg::Sampled if args.shots == 0 => Err(usage("--shots must be ≥ 1")),
        ModeArg::Sampled => Ok(SweepMode::Sampled {
            shots: args.shots,
            seed: args.seed,
        }),
    }
}

fn cmd_threshold(args: &ThresholdArgs) -> Result<Value, CliError> {
    if !args.target.is_finite() {
        return Err(usage("--target must be finite"));
    }
    let p = noise_threshold(args.target)?;
    Ok(json!({
        "target": args.target,
        "p": p,
        "ch_lower_at_p": crate::selection::ch_lower_bound(&QuantumState::w().white_noise(p)?)?,
    }))
}

fn cmd_selection() -> Value {
    let rule_report = |rule: SelectionRule| {
        let patterns: Vec<Value> = all_outcomes(3)
            .map(|z| {
                let a = classify_trio(rule, [z[0], z[1], z[2]]);
                let pair = match a {
                    PairAssignment::Pair { i, j, k } => {
                        json!({ "i": i + 1, "j": j + 1, "k": k + 1 })
                    }
                    PairAssignment::Invalid => Value::Null,
                };
                json!({ "z": z, "pair": pair })
            })
            .collect();
        json!({
            "membership_is_local": membership_is_local(rule),
            "patterns": patterns,
        })
    };
    json!({
        "w_minus_minus": rule_report(SelectionRule::WMinusMinus),
        "ghz_rule": rule_report(SelectionRule::GhzRule),
    })
}

/// Runs a parsed command and returns the report plus, for `sweep`, its rows.
pub fn execute(cli: &Cli) -> Result<(RunReport, Option<Vec<SweepRow>>), CliError> {
    let mut rows = None;
    let (name, params, results, seed) = match &cli.command {
        Command::Exact(a) => ("exact", to_value(a), cmd_exact(a)?, None),
        Command::Lhv(a) => ("lhv", to_value(a), cmd_lhv(a), None),
        Command::Tsirelson(a) => ("tsirelson", to_value(a), cmd_tsirelson(a)?, Some(a.seed)),
        Command::Optimize(a) => ("optimize", to_value(a), cmd_optimize(a)?, Some(a.seed)),
        Command::Simulate(a) => ("simulate", to_value(a), cmd_simulate(a)?, Some(a.seed)),
        Command::Sweep(a) => {
            let mode = sweep_mode(a)?;
            let r = noise_sweep(a.p_from, a.p_to, a.steps, mode)?;
            let value = json!({ "rows": r });
            rows = Some(r);
            let seed = matches!(mode, SweepMode::Sampled { .. }).then_some(a.seed);
            ("sweep", to_value(a), value, seed)
        }
        Command::Threshold(a) => ("threshold", to_value(a), cmd_threshold(a)?, None),
        Command::Selection => ("selection", json!({}), cmd_selection(), None),
    };
    let output = cli.output.unwrap_or(if rows.is_some() {
        OutputFormat::Csv
    } else {
        OutputFormat::Json
    });
    if output == OutputFormat::Csv && rows.is_none() {
        return Err(usage("--output csv is only available for `sweep`"));
    }
    Ok((
        RunReport {
            command: name.into(),
            params,
            results,
            seed,
            version: VERSION.into(),
        },
        rows,
    ))
}

/// Formats `x` with 17 significant digits in scientific notation, e.g.
/// `2.5000000000000000e-1`. Non-finite values become `null`.
pub fn format_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".into()
    }
}

struct Sig17;

impl serde_json::ser::Formatter for Sig17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

pub fn render_json(report: &RunReport) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig17);
    report.serialize(&mut ser).expect("in-memory serialization");
    let mut s = String::from_utf8(buf).expect("serde_json emits UTF-8");
    s.push('\n');
    s
}

pub fn render_csv(rows: &[SweepRow]) -> String {
    let mut out = SWEEP_CSV_HEADER.join(",");
    out.push('\n');
    let opt = |x: Option<f64>| x.map(format_f64).unwrap_or_default();
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            format_f64(r.p),
            format_f64(r.ch_lower_exact),
            opt(r.estimate),
            opt(r.sigma)
        );
    }
    out
}

fn render_text_value(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            let _ = writeln!(out, "{pad}{key}:");
            for (k, child) in map {
                render_text_value(out, k, child, depth + 1);
            }
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let parts: Vec<String> = items.iter().map(scalar_text).collect();
            let _ = writeln!(out, "{pad}{key}: [{}]", parts.join(", "));
        }
        Value::Array(items) => {
            let _ = writeln!(out, "{pad}{key}:");
            for (i, child) in items.iter().enumerate() {
                render_text_value(out, &format!("[{i}]"), child, depth + 1);
            }
        }
        scalar => {
            let _ = writeln!(out, "{pad}{key}: {}", scalar_text(scalar));
        }
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => format!("{x}"),
            _ => n.to_string(),
        },
        other => other.to_string(),
    }
}

pub fn render_text(report: &RunReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "wbell {} {}", report.version, report.command);
    if let Some(seed) = report.seed {
        let _ = writeln!(out, "seed: {seed}");
    }
    render_text_value(&mut out, "params", &report.params, 0);
    render_text_value(&mut out, "results", &report.results, 0);
    out
}

/// Parses `args`, runs the command and renders it. Returns the text for
/// stdout, or the message for stderr together with the exit code.
pub fn run<I, T>(args: I) -> Result<String, (i32, String)>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Ok(e.to_string()),
                _ => Err((1, e.to_string())),
            };
        }
    };
    let (report, rows) = execute(&cli).map_err(|e| (e.exit_code(), e.to_string()))?;
    let format = cli.output.unwrap_or(if rows.is_some() {
        OutputFormat::Csv
    } else {
        OutputFormat::Json
    });
    Ok(match format {
        OutputFormat::Json => render_json(&report),
        OutputFormat::Text => render_text(&report),
        OutputFormat::Csv => render_csv(rows.as_deref().unwrap_or_default()),
    })
}
