//! The `bellkit` command line.
//!
//! Every subcommand writes one payload to stdout: a JSON [`RunReport`] by
//! default, or CSV rows with `--format csv`. Exit codes: 0 success, 1 usage
//! or input error, 2 enumeration budget exceeded, 3 consistency failure.

use std::path::PathBuf;
use std::time::Instant;

use bellkit_core::bounds::{
    ns_bound_report, svetlichny_bound_with_budget, BoundKind, BoundReport, Method, SvetlichnyMode, Tightness,
    Witness, DEFAULT_HYBRID_BUDGET,
};
use bellkit_core::coefficients::CoefficientSet;
use bellkit_core::expression::{evaluate_correlator_form, evaluate_probability_form, functional_table};
use bellkit_core::quantum::{born_behavior, ghz, verify_stabilizer, ObservableSet};
use bellkit_core::scenario::{check_no_signaling_with, to_correlators};
use bellkit_core::sos::{quantum_bound, quantum_bound_probability};
use bellkit_core::Scenario;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::golden::{self, GoldenRef, DERIVED_LABEL};
use crate::io::{read_behavior, write_behavior, CoefficientsFile, FunctionalFile};
use crate::parallel::{budget_from_env, budget_override, classical_bound, sos_check, sos_check_optimal, thread_pool, tilted_scan};
use crate::report::{fmt_f64, to_json, RunReport, VERSION};
use crate::verify::{compute_cell, verify_all, VerifyOptions};
use crate::{BellkitError, Result};

pub const CONJECTURED_LABEL: &str = "conjectured";

#[derive(Debug, Parser)]
#[command(name = "bellkit", version, about = "Bell inequalities for N parties, m settings, d outcomes")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Include wall time in the report (makes output run-dependent).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, Args, Serialize)]
pub struct ScenarioArgs {
    /// Number of parties.
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: usize,
    /// Settings per party.
    #[arg(long)]
    pub m: usize,
    /// Outcomes per setting.
    #[arg(long)]
    pub d: usize,
}

impl ScenarioArgs {
    fn scenario(&self) -> Result<Scenario> {
        Ok(Scenario::new(self.n, self.m, self.d)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Classical,
    Svetlichny,
    Ns,
    Quantum,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Auto,
    Enumerate,
    Formula,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Probability and correlator coefficients.
    Coeffs(ScenarioArgs),
    /// Classical, Svetlichny, nonsignaling and quantum bounds.
    Bounds {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, value_enum, default_value_t = KindArg::All)]
        kind: KindArg,
        /// Svetlichny route.
        #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
        mode: ModeArg,
    },
    /// Quantum value of the GHZ realization.
    Quantum(ScenarioArgs),
    /// Nonsignaling construction.
    Ns {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Write the behavior as JSON.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// SOS residual on random observables.
    SosCheck {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Tilted classes.
    Tilted {
        #[command(subcommand)]
        command: TiltedCommand,
    },
    /// Recompute a published table.
    Tables {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        which: u8,
    },
    /// Run every invariant check.
    VerifyAll {
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long, default_value_t = 100)]
        behaviors: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Skip the classical enumeration left blank in the tables.
        #[arg(long)]
        skip_gap_cell: bool,
        #[arg(long, hide = true)]
        perturb_coefficients: Option<f64>,
    },
    /// Evaluate both pictures on a behavior file.
    Evaluate {
        #[arg(long)]
        behavior: PathBuf,
    },
    /// Coefficient-table export.
    Functional {
        #[command(subcommand)]
        command: FunctionalCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum TiltedCommand {
    /// Classical bound, optimal state and realized value over a ξ grid.
    Scan {
        #[arg(long = "N", default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = -0.9, allow_negative_numbers = true)]
        xi_min: f64,
        #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
        xi_max: f64,
        #[arg(long, default_value_t = 0.1)]
        step: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum FunctionalCommand {
    /// Nonzero entries of the probability-picture table.
    Export(ScenarioArgs),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(&cli) {
        Ok((stdout, code)) => Outcome { code, stdout, stderr: String::new() },
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

struct Ctx {
    format: Format,
    threads: usize,
    timing: bool,
    start: Instant,
}

/// Rows for CSV output, header first.
type Rows = Vec<Vec<String>>;

impl Ctx {
    fn emit<P: Serialize, R: Serialize>(
        &self,
        command: &str,
        parameters: P,
        results: R,
        seed: Option<u64>,
        rows: impl FnOnce() -> Rows,
    ) -> Result<String> {
        match self.format {
            Format::Json => {
                let report = RunReport {
                    command: command.to_string(),
                    parameters,
                    results,
                    threads: self.threads,
                    version: VERSION,
                    seed,
                    wall_time_s: self.timing.then(|| self.start.elapsed().as_secs_f64()),
                };
                let mut s = to_json(&report)?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                for r in rows() {
                    w.write_record(&r)?;
                }
                let bytes = w.into_inner().map_err(|e| BellkitError::Io(e.into_error()))?;
                Ok(String::from_utf8(bytes).expect("csv of UTF-8 fields"))
            }
        }
    }
}

fn row<const N: usize>(fields: [&str; N]) -> Vec<String> {
    fields.iter().map(|s| s.to_string()).collect()
}

fn opt_f64(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

fn execute(cli: &Cli) -> Result<(String, i32)> {
    let pool = thread_pool(cli.threads)?;
    let ctx = Ctx {
        format: cli.format,
        threads: pool.current_num_threads(),
        timing: cli.timing,
        start: Instant::now(),
    };
    pool.install(|| dispatch(&ctx, &cli.command))
}

fn dispatch(ctx: &Ctx, command: &Command) -> Result<(String, i32)> {
    let out = match command {
        Command::Coeffs(a) => coeffs(ctx, a)?,
        Command::Bounds { scenario, kind, mode } => bounds(ctx, scenario, *kind, *mode)?,
        Command::Quantum(a) => quantum(ctx, a)?,
        Command::Ns { scenario, output } => ns(ctx, scenario, output.as_deref())?,
        Command::SosCheck { scenario, trials, seed } => sos(ctx, scenario, *trials, *seed)?,
        Command::Tilted { command: TiltedCommand::Scan { n, xi_min, xi_max, step } } => {
            tilted(ctx, *n, *xi_min, *xi_max, *step)?
        }
        Command::Tables { which } => tables(ctx, *which)?,
        Command::VerifyAll { trials, behaviors, seed, skip_gap_cell, perturb_coefficients } => {
            let mut opts = VerifyOptions {
                sos_trials: *trials,
                behaviors: *behaviors,
                seed: *seed,
                gap_cell: !skip_gap_cell,
                perturb: *perturb_coefficients,
                ..Default::default()
            };
            opts.budget = budget_from_env()?;
            return verify(ctx, &opts);
        }
        Command::Evaluate { behavior } => evaluate(ctx, behavior)?,
        Command::Functional { command: FunctionalCommand::Export(a) } => functional(ctx, a)?,
    };
    Ok((out, 0))
}

fn coeffs(ctx: &Ctx, a: &ScenarioArgs) -> Result<String> {
    let s = a.scenario()?;
    let f = CoefficientsFile::new(&CoefficientSet::new(&s));
    ctx.emit("coeffs", a, &f, None, || {
        let mut rows = vec![row(["n", "alpha", "beta", "alpha_hat"])];
        for (n, &h) in f.alpha_hat.iter().enumerate() {
            let (a, b) = (f.alpha.get(n).copied(), f.beta.get(n).copied());
            rows.push(vec![n.to_string(), opt_f64(a), opt_f64(b), fmt_f64(h)]);
        }
        rows
    })
}

#[derive(Debug, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum WitnessOut {
    Strategy { outcomes: Vec<usize> },
    Hybrid { group: Vec<usize>, group_answers: Vec<usize>, rest_answers: Vec<usize> },
    Behavior,
}

#[derive(Debug, Serialize)]
struct BoundOut {
    kind: &'static str,
    value: f64,
    method: &'static str,
    tightness: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<WitnessOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness_gap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reference: Option<GoldenRef>,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<&'static str>,
}

fn kind_name(k: BoundKind) -> &'static str {
    match k {
        BoundKind::Classical => "classical",
        BoundKind::Svetlichny => "svetlichny",
        BoundKind::Nonsignaling => "ns",
        BoundKind::Quantum => "quantum",
    }
}

fn bound_out(r: &BoundReport, s: &Scenario, c: &CoefficientSet) -> BoundOut {
    let method = match r.method {
        Method::Enumeration => "enumeration",
        Method::ClosedForm => "closed_form",
        Method::Construction => "construction",
    };
    let tightness = match r.tightness {
        Tightness::Exact => "exact",
        Tightness::UpperBound => "upper_bound",
    };
    let witness = r.witness.as_ref().map(|w| match w {
        Witness::Strategy(st) => WitnessOut::Strategy { outcomes: st.outcomes().to_vec() },
        Witness::Hybrid(h) => WitnessOut::Hybrid {
            group: h.group.clone(),
            group_answers: h.group_answers.clone(),
            rest_answers: h.rest_answers.clone(),
        },
        Witness::Behavior(_) => WitnessOut::Behavior,
    });
    let reference = golden::lookup(r.kind, s.n_parties(), s.n_settings(), s.n_outcomes()).map(|g| GoldenRef::new(g, r.value));
    // classical values outside the published cells are derived as well
    let label = match (&reference, r.kind) {
        (None, BoundKind::Classical | BoundKind::Svetlichny) if s.n_parties() > 2 => Some(DERIVED_LABEL),
        _ => None,
    };
    BoundOut {
        kind: kind_name(r.kind),
        value: r.value,
        method,
        tightness,
        witness,
        witness_gap: r.witness_gap(&functional_table(c)),
        reference,
        label,
    }
}

fn bounds(ctx: &Ctx, a: &ScenarioArgs, kind: KindArg, mode: ModeArg) -> Result<String> {
    let s = a.scenario()?;
    let c = CoefficientSet::new(&s);
    let want = |k: KindArg| kind == k || kind == KindArg::All;
    let mut reports = Vec::new();
    if want(KindArg::Classical) {
        reports.push(classical_bound(&s, &c, budget_from_env()?)?);
    }
    if want(KindArg::Svetlichny) {
        let mode = match mode {
            ModeArg::Auto => SvetlichnyMode::Auto,
            ModeArg::Enumerate => SvetlichnyMode::Enumeration,
            ModeArg::Formula => SvetlichnyMode::Formula,
        };
        let budget = budget_override()?.unwrap_or(DEFAULT_HYBRID_BUDGET);
        reports.push(svetlichny_bound_with_budget(&s, &c, mode, budget)?);
    }
    if want(KindArg::Ns) {
        reports.push(ns_bound_report(&s, &c)?);
    }
    if want(KindArg::Quantum) {
        reports.push(BoundReport {
            kind: BoundKind::Quantum,
            value: quantum_bound_probability(&c),
            method: Method::ClosedForm,
            tightness: Tightness::Exact,
            witness: None,
        });
    }
    let out: Vec<BoundOut> = reports.iter().map(|r| bound_out(r, &s, &c)).collect();
    ctx.emit("bounds", a, &out, None, || {
        let mut rows = vec![row(["kind", "value", "method", "tightness", "paper_value", "delta", "label"])];
        for b in &out {
            let r = b.reference.as_ref();
            rows.push(vec![
                b.kind.into(),
                fmt_f64(b.value),
                b.method.into(),
                b.tightness.into(),
                opt_f64(r.and_then(|r| r.paper_value)),
                opt_f64(r.and_then(|r| r.delta)),
                r.and_then(|r| r.label).or(b.label).unwrap_or_default().into(),
            ]);
        }
        rows
    })
}

#[derive(Debug, Serialize)]
struct QuantumOut {
    #[serde(rename = "I_tilde")]
    i_tilde: f64,
    #[serde(rename = "I")]
    i: f64,
    #[serde(rename = "born_I_tilde")]
    born_i_tilde: f64,
    #[serde(rename = "born_I")]
    born_i: f64,
    stabilizer_deviation: f64,
}

fn quantum(ctx: &Ctx, a: &ScenarioArgs) -> Result<String> {
    let s = a.scenario()?;
    let c = CoefficientSet::new(&s);
    let b = born_behavior(&ghz(s.n_parties(), s.n_outcomes()), &ObservableSet::optimal(&s))?;
    let out = QuantumOut {
        i_tilde: quantum_bound(&s),
        i: quantum_bound_probability(&c),
        born_i_tilde: evaluate_correlator_form(&to_correlators(&b), &c)?,
        born_i: evaluate_probability_form(&b, &c)?,
        stabilizer_deviation: verify_stabilizer(&s),
    };
    ctx.emit("quantum", a, &out, None, || {
        vec![
            row(["I_tilde", "I", "born_I_tilde", "born_I", "stabilizer_deviation"]),
            [out.i_tilde, out.i, out.born_i_tilde, out.born_i, out.stabilizer_deviation].map(fmt_f64).to_vec(),
        ]
    })
}

#[derive(Debug, Serialize)]
struct NsOut {
    value: f64,
    evaluated: f64,
    max_marginal_discrepancy: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    output: Option<String>,
}

fn ns(ctx: &Ctx, a: &ScenarioArgs, output: Option<&std::path::Path>) -> Result<String> {
    let s = a.scenario()?;
    let c = CoefficientSet::new(&s);
    let r = ns_bound_report(&s, &c)?;
    let b = r.witness.as_ref().expect("construction witness").behavior();
    if let Some(p) = output {
        write_behavior(p, &b)?;
    }
    let out = NsOut {
        value: r.value,
        evaluated: evaluate_probability_form(&b, &c)?,
        max_marginal_discrepancy: check_no_signaling_with(&b, 0.0).max_discrepancy(),
        output: output.map(|p| p.display().to_string()),
    };
    ctx.emit("ns", a, &out, None, || {
        vec![
            row(["value", "evaluated", "max_marginal_discrepancy"]),
            [out.value, out.evaluated, out.max_marginal_discrepancy].map(fmt_f64).to_vec(),
        ]
    })
}

#[derive(Debug, Serialize)]
struct SosOut {
    residual_max: f64,
    min_eig: f64,
    trials: usize,
    optimal_residual: f64,
    optimal_min_eig: f64,
}

fn sos(ctx: &Ctx, a: &ScenarioArgs, trials: usize, seed: u64) -> Result<String> {
    let s = a.scenario()?;
    let r = sos_check(&s, trials, seed)?;
    let o = sos_check_optimal(&s)?;
    let out = SosOut {
        residual_max: r.residual_max,
        min_eig: r.min_eig,
        trials: r.trials,
        optimal_residual: o.residual_max,
        optimal_min_eig: o.min_eig,
    };
    ctx.emit("sos-check", a, &out, Some(seed), || {
        vec![
            row(["residual_max", "min_eig", "trials", "optimal_residual", "optimal_min_eig"]),
            vec![
                fmt_f64(out.residual_max),
                fmt_f64(out.min_eig),
                out.trials.to_string(),
                fmt_f64(out.optimal_residual),
                fmt_f64(out.optimal_min_eig),
            ],
        ]
    })
}

/// `xi_min, xi_min + step, …` up to `xi_max` (inclusive within rounding).
pub fn xi_grid(xi_min: f64, xi_max: f64, step: f64) -> Result<Vec<f64>> {
    if step.is_nan() || step <= 0.0 || !xi_min.is_finite() || !xi_max.is_finite() || xi_max < xi_min {
        return Err(BellkitError::Input("need finite xi-min <= xi-max and step > 0".into()));
    }
    let count = ((xi_max - xi_min) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| xi_min + i as f64 * step).collect())
}

#[derive(Debug, Serialize)]
struct TiltedParams {
    #[serde(rename = "N")]
    n: usize,
    xi_min: f64,
    xi_max: f64,
    step: f64,
}

#[derive(Debug, Serialize)]
struct TiltedRow {
    xi: f64,
    gamma_opt: f64,
    classical_bound: f64,
    realized_quantum: f64,
    conjectured_max: f64,
    ratio: f64,
    max_status: &'static str,
}

fn tilted(ctx: &Ctx, n: usize, xi_min: f64, xi_max: f64, step: f64) -> Result<String> {
    let points = tilted_scan(n, &xi_grid(xi_min, xi_max, step)?)?;
    let out: Vec<TiltedRow> = points
        .iter()
        .map(|p| TiltedRow {
            xi: p.xi,
            gamma_opt: p.gamma_opt,
            classical_bound: p.classical_bound,
            realized_quantum: p.realized_quantum,
            conjectured_max: p.conjectured_max,
            ratio: p.ratio,
            max_status: CONJECTURED_LABEL,
        })
        .collect();
    let params = TiltedParams { n, xi_min, xi_max, step };
    ctx.emit("tilted scan", &params, &out, None, || {
        let mut rows = vec![row([
            "xi",
            "gamma_opt",
            "classical_bound",
            "realized_quantum",
            "conjectured_max",
            "ratio",
            "max_status",
        ])];
        for p in &out {
            let mut r = [p.xi, p.gamma_opt, p.classical_bound, p.realized_quantum, p.conjectured_max, p.ratio]
                .map(fmt_f64)
                .to_vec();
            r.push(p.max_status.into());
            rows.push(r);
        }
        rows
    })
}

#[derive(Debug, Serialize)]
struct CellOut {
    source: String,
    row: &'static str,
    #[serde(rename = "N")]
    n: usize,
    m: usize,
    d: usize,
    computed: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    paper_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<&'static str>,
}

#[derive(Debug, Serialize)]
struct TablesParams {
    which: u8,
}

fn tables(ctx: &Ctx, which: u8) -> Result<String> {
    let cells = golden::table(which).ok_or_else(|| BellkitError::Input(format!("no table {which}")))?;
    let budget = budget_from_env()?;
    let mut out = Vec::with_capacity(cells.len());
    for cell in cells {
        let computed = compute_cell(cell, budget)?;
        let g = GoldenRef::new(cell, computed);
        out.push(CellOut {
            source: g.source,
            row: cell.row,
            n: cell.n_parties,
            m: cell.m,
            d: cell.d,
            computed,
            paper_value: g.paper_value,
            delta: g.delta,
            exact: cell.exact(),
            label: g.label,
        });
    }
    ctx.emit("tables", TablesParams { which }, &out, None, || {
        let mut rows = vec![row(["row", "N", "m", "d", "computed", "paper_value", "delta", "exact", "label"])];
        for c in &out {
            rows.push(vec![
                c.row.into(),
                c.n.to_string(),
                c.m.to_string(),
                c.d.to_string(),
                fmt_f64(c.computed),
                opt_f64(c.paper_value),
                opt_f64(c.delta),
                opt_f64(c.exact),
                c.label.unwrap_or_default().into(),
            ]);
        }
        rows
    })
}

#[derive(Debug, Serialize)]
struct VerifyParams {
    trials: usize,
    behaviors: usize,
    gap_cell: bool,
}

fn verify(ctx: &Ctx, opts: &VerifyOptions) -> Result<(String, i32)> {
    let summary = verify_all(opts)?;
    let params = VerifyParams { trials: opts.sos_trials, behaviors: opts.behaviors, gap_cell: opts.gap_cell };
    let text = ctx.emit("verify-all", params, &summary, Some(opts.seed), || {
        let mut rows = vec![row(["check", "passed", "cases", "worst", "tolerance", "worst_case"])];
        for c in &summary.checks {
            rows.push(vec![
                c.name.into(),
                c.passed.to_string(),
                c.cases.to_string(),
                fmt_f64(c.worst),
                fmt_f64(c.tolerance),
                c.worst_case.clone().unwrap_or_default(),
            ]);
        }
        rows
    })?;
    Ok((text, if summary.passed { 0 } else { 3 }))
}

#[derive(Debug, Serialize)]
struct EvaluateParams {
    behavior: String,
}

#[derive(Debug, Serialize)]
struct EvaluateOut {
    #[serde(rename = "N")]
    n: usize,
    m: usize,
    d: usize,
    #[serde(rename = "I")]
    i: f64,
    #[serde(rename = "I_tilde")]
    i_tilde: f64,
    picture_offset: f64,
    max_marginal_discrepancy: f64,
}

fn evaluate(ctx: &Ctx, path: &std::path::Path) -> Result<String> {
    let b = read_behavior(path)?;
    let s = *b.scenario();
    let c = CoefficientSet::new(&s);
    let out = EvaluateOut {
        n: s.n_parties(),
        m: s.n_settings(),
        d: s.n_outcomes(),
        i: evaluate_probability_form(&b, &c)?,
        i_tilde: evaluate_correlator_form(&to_correlators(&b), &c)?,
        picture_offset: c.picture_offset(),
        max_marginal_discrepancy: check_no_signaling_with(&b, 0.0).max_discrepancy(),
    };
    let params = EvaluateParams { behavior: path.display().to_string() };
    ctx.emit("evaluate", params, &out, None, || {
        vec![
            row(["I", "I_tilde", "picture_offset", "max_marginal_discrepancy"]),
            [out.i, out.i_tilde, out.picture_offset, out.max_marginal_discrepancy].map(fmt_f64).to_vec(),
        ]
    })
}

fn functional(ctx: &Ctx, a: &ScenarioArgs) -> Result<String> {
    let s = a.scenario()?;
    let f = FunctionalFile::from_functional(&functional_table(&CoefficientSet::new(&s)));
    ctx.emit("functional export", a, &f, None, || {
        let mut rows = vec![row(["x", "a", "t"])];
        for e in &f.entries {
            let join = |v: &[usize]| v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
            rows.push(vec![join(&e.x), join(&e.a), fmt_f64(e.t)]);
        }
        rows
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ok(args: &[&str]) -> serde_json::Value {
        let o = run(std::iter::once("bellkit").chain(args.iter().copied()));
        assert_eq!(o.code, 0, "{}", o.stderr);
        serde_json::from_str(&o.stdout).unwrap()
    }

    #[test]
    fn coeffs_bipartite_qubits() {
        let v = ok(&["coeffs", "--N", "2", "--m", "2", "--d", "2"]);
        let alpha = v["results"]["alpha"][0].as_f64().unwrap();
        assert!((alpha - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(v["results"]["beta"][0].as_f64().unwrap().abs() < 1e-15);
    }

    #[test]
    fn quantum_value_reported() {
        let v = ok(&["quantum", "--N", "3", "--m", "2", "--d", "3"]);
        let it = v["results"]["I_tilde"].as_f64().unwrap();
        assert!((it - 8.0 / 3.0).abs() < 1e-14);
        assert!((v["results"]["born_I_tilde"].as_f64().unwrap() - it).abs() < 1e-10);
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(["bellkit", "coeffs", "--N", "2", "--bogus"]).code, 1);
        assert_eq!(run(["bellkit", "coeffs", "--N", "1", "--m", "2", "--d", "2"]).code, 1);
        assert_eq!(run(["bellkit", "tables", "--which", "3"]).code, 1);
        assert_eq!(run(["bellkit", "--help"]).code, 0);
    }

    #[test]
    fn xi_grid_includes_endpoint() {
        let g = xi_grid(-0.5, 0.5, 0.25).unwrap();
        assert_eq!(g.len(), 5);
        assert!((g[4] - 0.5).abs() < 1e-15);
        assert!(xi_grid(1.0, 0.0, 0.1).is_err());
    }
}
