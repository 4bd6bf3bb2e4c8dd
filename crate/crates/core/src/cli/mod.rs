//! `exciton` command line.
//!
//! Exit codes: 0 success, 1 failed validation, 2 invalid input, 3 numerical
//! failure, 4 I/O failure.

pub mod format;
pub mod initial;
pub mod validate;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::dynamics::{
    evolve, fig1_presets, fig2_presets, uniform_grid, EvolveOptions, Method, Preset, Scenario,
    TimeSeries, Trajectory, DEFAULT_ALPHA, DEFAULT_DT, DEFAULT_T_MAX,
};
use crate::error::{Error, Result};
use crate::liouville::{liouvillian_block, BlockIndex, GammaConvention, Mode};
use crate::model::ModelParams;
use crate::oracle::DEFAULT_TRUNCATION;
use crate::smallmat::{eigen_order, CMat, C64, DEGENERACY_RTOL};
use crate::spectral::{
    match_eigenvalues, numerical_decomposition, spectral_decomposition, trace_consistency, Source,
    SpectralDecomposition,
};

use format::{round12, series_csv, write_atomic};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_IO: i32 = 4;

/// Trace and hermiticity tolerance applied before any trajectory is written.
const EMIT_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "exciton",
    version,
    about = "Dissipative Jaynes-Cummings dynamics in excitation blocks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Eigenvalues and eigenmatrices of one block generator, as JSON.
    Spectrum(SpectrumArgs),
    /// Atomic observables along a trajectory, as CSV.
    Evolve(EvolveArgs),
    /// CSV series for both figure scenarios plus a manifest.
    Figures(FiguresArgs),
    /// Run the invariant suite and print a pass/fail table.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
struct ModelArgs {
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    delta: f64,
    #[arg(long, default_value_t = 1.0)]
    g: f64,
    #[arg(long, default_value_t = 0.0)]
    gamma0: f64,
    #[arg(long, default_value_t = 0.0)]
    gamma1: f64,
}

impl ModelArgs {
    fn params(&self) -> Result<ModelParams> {
        ModelParams::new(self.delta, self.g, self.gamma0, self.gamma1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Printed,
    Canonical,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Printed => Mode::Printed,
            ModeArg::Canonical => Mode::Canonical,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Spectral,
    Expm,
    Ode,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Spectral => Method::Spectral,
            MethodArg::Expm => Method::Expm,
            MethodArg::Ode => Method::Ode,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SourceArg {
    /// Closed form when available, numerical otherwise.
    Auto,
    Closed,
    Numerical,
    Both,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, value_enum, default_value_t = ModeArg::Printed)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = SourceArg::Auto)]
    source: SourceArg,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GridArgs {
    /// Sample spacing; defaults to 0.01/g.
    #[arg(long)]
    dt: Option<f64>,
    /// Horizon; defaults to 20/g.
    #[arg(long)]
    t_max: Option<f64>,
}

impl GridArgs {
    fn times(&self, g: f64) -> Result<Vec<f64>> {
        uniform_grid(
            self.dt.unwrap_or(DEFAULT_DT / g),
            self.t_max.unwrap_or(DEFAULT_T_MAX / g),
        )
    }
}

#[derive(Debug, Args)]
struct EvolveArgs {
    /// dressed:n=N | superposition:n=N,alpha=A | fock:photons=P,atom=A | file:PATH
    #[arg(long)]
    initial: String,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, value_enum, default_value_t = MethodArg::Spectral)]
    method: MethodArg,
    #[arg(long, value_enum, default_value_t = ModeArg::Canonical)]
    mode: ModeArg,
    #[command(flatten)]
    grid: GridArgs,
    /// Photon cutoff of the ode method.
    #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
    n_max: usize,
    /// Output CSV; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Optional JSON file with run metadata (fallbacks, step estimate).
    #[arg(long)]
    meta: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FiguresArgs {
    #[arg(long)]
    outdir: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeArg::Printed)]
    mode: ModeArg,
    /// Mixing angle of the superposition scenario.
    #[arg(long, default_value_t = DEFAULT_ALPHA, allow_hyphen_values = true)]
    alpha: f64,
    #[command(flatten)]
    grid: GridArgs,
    /// Record the wall-clock time in the manifest.
    #[arg(long)]
    timestamp: bool,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    /// Build closed-form eigenvalues with γ₁ - γ₀ to exercise the suite.
    #[arg(long)]
    inject_gamma_sign_flip: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Maps an error to the process exit code.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => EXIT_IO,
        Error::Parse(_)
        | Error::InvalidParams(_)
        | Error::InvalidState(_)
        | Error::InvalidExcitation(_)
        | Error::PreconditionViolated(_)
        | Error::MethodUnavailable(_)
        | Error::TruncationTooLarge(_)
        | Error::TruncationTooSmall { .. } => EXIT_USAGE,
        _ => EXIT_NUMERICAL,
    }
}

/// Entry point; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = match cli.command {
        Command::Spectrum(a) => cmd_spectrum(&a),
        Command::Evolve(a) => cmd_evolve(&a),
        Command::Figures(a) => cmd_figures(&a),
        Command::Validate(a) => Ok(cmd_validate(&a)),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, text),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn complex_json(z: C64) -> Value {
    json!({ "re": round12(z.re), "im": round12(z.im) })
}

fn matrix_json(m: &CMat) -> Value {
    let (re, im) = initial::split_matrix(m);
    let r = |rows: Vec<Vec<f64>>| -> Vec<Vec<f64>> {
        rows.into_iter()
            .map(|row| row.into_iter().map(round12).collect())
            .collect()
    };
    json!({ "re": r(re), "im": r(im) })
}

fn decomposition_json(dec: &SpectralDecomposition, scale: f64) -> Value {
    let order = eigen_order(&dec.eigenvalues, DEGENERACY_RTOL * scale);
    let entries: Vec<Value> = order
        .iter()
        .map(|&k| {
            let mut e = json!({
                "value": complex_json(dec.eigenvalues[k]),
                "right": matrix_json(dec.right[k].matrix()),
                "left": matrix_json(&dec.left[k]),
            });
            if dec.source == Source::ClosedForm {
                e["label"] = json!(k + 1);
            }
            e
        })
        .collect();
    json!({
        "source": dec.source,
        "degenerate": dec.degenerate,
        "eigenvalues": order.iter().map(|&k| complex_json(dec.eigenvalues[k])).collect::<Vec<_>>(),
        "eigensystem": entries,
        "biorthonormality_defect": round12(dec.biorthonormality_defect()),
    })
}

fn cmd_spectrum(a: &SpectrumArgs) -> Result<i32> {
    let p = a.model.params()?;
    let index = BlockIndex::new(a.n, a.m);
    let mode: Mode = a.mode.into();
    let lblock = liouvillian_block(index, &p, mode);
    let scale = 1.0 + lblock.matrix.norm_1();
    let auto = spectral_decomposition(index, &p, mode);
    let closed = || -> Result<SpectralDecomposition> {
        if auto.source == Source::ClosedForm {
            Ok(auto.clone())
        } else {
            Err(Error::MethodUnavailable(format!(
                "no closed form for block {index} in {mode} mode with these parameters"
            )))
        }
    };
    let decs = match a.source {
        SourceArg::Auto => vec![auto.clone()],
        SourceArg::Closed => vec![closed()?],
        SourceArg::Numerical => vec![numerical_decomposition(&lblock)],
        SourceArg::Both => vec![closed()?, numerical_decomposition(&lblock)],
    };
    let mut doc = json!({
        "block": { "n": a.n, "m": a.m },
        "mode": mode,
        "params": { "delta": p.delta, "g": p.g, "gamma0": p.gamma0, "gamma1": p.gamma1 },
        "decompositions": decs.iter().map(|d| decomposition_json(d, scale)).collect::<Vec<_>>(),
    });
    if decs.len() == 2 {
        let perm = match_eigenvalues(&decs[0].eigenvalues, &decs[1].eigenvalues);
        let gap = perm
            .iter()
            .enumerate()
            .map(|(i, &j)| (decs[0].eigenvalues[i] - decs[1].eigenvalues[j]).norm())
            .fold(0.0, f64::max);
        doc["source_agreement"] = json!({ "max_eigenvalue_gap": round12(gap) });
    }
    let consistency = |conv| trace_consistency(index, &p, conv).ok().map(round12);
    doc["trace_consistency"] = json!({
        "generator_trace": complex_json(lblock.matrix.trace()),
        "eigenvalue_sum": complex_json(auto.eigenvalue_sum()),
        "closed_form_sum_convention": consistency(GammaConvention::Sum),
        "closed_form_difference_convention": consistency(GammaConvention::Difference),
    });
    let mut text = serde_json::to_string_pretty(&doc).map_err(|e| Error::Parse(e.to_string()))?;
    text.push('\n');
    emit(a.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}

fn check_emittable(traj: &Trajectory) -> Result<()> {
    for (t, s) in traj.times.iter().zip(&traj.states) {
        let tr = (s.trace() - 1.0).norm();
        let herm = s.hermiticity_defect();
        if !(tr <= EMIT_TOL && herm <= EMIT_TOL) {
            return Err(Error::Unphysical(format!(
                "trajectory leaves the physical set at t={t}: trace error {tr:.3e}, hermiticity defect {herm:.3e}"
            )));
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct RunMeta {
    method: Method,
    mode: Mode,
    fallbacks: Vec<BlockIndex>,
    halving_estimate: Option<f64>,
    samples: usize,
}

impl RunMeta {
    fn of(traj: &Trajectory) -> Self {
        Self {
            method: traj.method,
            mode: traj.mode,
            fallbacks: traj.fallbacks.clone(),
            halving_estimate: traj.halving_estimate,
            samples: traj.times.len(),
        }
    }
}

fn cmd_evolve(a: &EvolveArgs) -> Result<i32> {
    let p = a.model.params()?;
    let rho0 = initial::parse_initial(&a.initial)?;
    let times = a.grid.times(p.g)?;
    let traj = evolve(
        &rho0,
        &p,
        &times,
        a.method.into(),
        a.mode.into(),
        EvolveOptions { n_max: a.n_max },
    )?;
    check_emittable(&traj)?;
    for idx in &traj.fallbacks {
        eprintln!("note: block {idx} is degenerate and was propagated with the matrix exponential");
    }
    emit(
        a.out.as_deref(),
        &series_csv(&TimeSeries::from_trajectory(&traj)),
    )?;
    if let Some(meta) = &a.meta {
        let mut text = serde_json::to_string_pretty(&RunMeta::of(&traj))
            .map_err(|e| Error::Parse(e.to_string()))?;
        text.push('\n');
        write_atomic(meta, &text)?;
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct CurveEntry {
    file: String,
    figure: u8,
    curve: &'static str,
    scenario: Scenario,
    gamma0: f64,
    gamma1: f64,
    fallbacks: Vec<BlockIndex>,
    /// Largest `|ΔW|`, `|ΔP|` and block-entry difference against the same
    /// run in canonical mode.
    canonical_deviation: Deviation,
}

#[derive(Serialize)]
struct Deviation {
    w: f64,
    p: f64,
    state: f64,
}

fn deviation(a: &Trajectory, b: &Trajectory) -> Deviation {
    let sa = TimeSeries::from_trajectory(a);
    let sb = TimeSeries::from_trajectory(b);
    let mut d = Deviation {
        w: 0.0,
        p: 0.0,
        state: 0.0,
    };
    for (x, y) in sa.rows.iter().zip(&sb.rows) {
        d.w = d.w.max((x.w - y.w).abs());
        d.p = d.p.max((x.p - y.p).abs());
    }
    for (x, y) in a.states.iter().zip(&b.states) {
        for (idx, bx) in x.iter() {
            if let Some(by) = y.get(*idx) {
                d.state = d.state.max(bx.matrix().max_abs_diff(by.matrix()));
            }
        }
    }
    d.w = round12(d.w);
    d.p = round12(d.p);
    d.state = round12(d.state);
    d
}

fn cmd_figures(a: &FiguresArgs) -> Result<i32> {
    let mode: Mode = a.mode.into();
    let times = a.grid.times(1.0)?;
    if !a.alpha.is_finite() {
        return Err(Error::Parse("alpha must be finite".into()));
    }
    std::fs::create_dir_all(&a.outdir)?;
    let figures: [(u8, Scenario, [Preset; 4]); 2] = [
        (1, Scenario::Dressed { n: 2 }, fig1_presets()),
        (
            2,
            Scenario::Superposition {
                n: 2,
                alpha: a.alpha,
            },
            fig2_presets(),
        ),
    ];
    let mut curves = Vec::new();
    for (figure, scenario, presets) in figures {
        let rho0 = scenario.initial_state()?;
        for preset in presets {
            let p = preset.params();
            let traj = evolve(
                &rho0,
                &p,
                &times,
                Method::Spectral,
                mode,
                EvolveOptions::default(),
            )?;
            check_emittable(&traj)?;
            let reference = evolve(
                &rho0,
                &p,
                &times,
                Method::Spectral,
                Mode::Canonical,
                EvolveOptions::default(),
            )?;
            let file = format!("fig{figure}_{}.csv", preset.name);
            write_atomic(
                &a.outdir.join(&file),
                &series_csv(&TimeSeries::from_trajectory(&traj)),
            )?;
            curves.push(CurveEntry {
                file,
                figure,
                curve: preset.name,
                scenario,
                gamma0: preset.gamma0,
                gamma1: preset.gamma1,
                fallbacks: traj.fallbacks.clone(),
                canonical_deviation: deviation(&traj, &reference),
            });
        }
    }
    let timestamp = if a.timestamp {
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .ok()
            .map(|d| d.as_secs())
    } else {
        None
    };
    let manifest = json!({
        "mode": mode,
        "delta": 0.0,
        "g": 1.0,
        "n": 2,
        "alpha": a.alpha,
        "dt": times.get(1).copied().unwrap_or(0.0),
        "t_max": times.last().copied().unwrap_or(0.0),
        "samples": times.len(),
        "method": Method::Spectral,
        "curves": curves,
        "timestamp": timestamp,
    });
    let mut text =
        serde_json::to_string_pretty(&manifest).map_err(|e| Error::Parse(e.to_string()))?;
    text.push('\n');
    write_atomic(&a.outdir.join("manifest.json"), &text)?;
    Ok(EXIT_OK)
}

fn cmd_validate(a: &ValidateArgs) -> i32 {
    let checks = validate::run_suite(validate::SuiteOptions {
        inject_gamma_sign_flip: a.inject_gamma_sign_flip,
        seed: a.seed,
    });
    print!("{}", validate::render_table(&checks));
    if validate::all_passed(&checks) {
        println!("all checks passed");
        EXIT_OK
    } else {
        println!("some checks failed");
        EXIT_VALIDATION
    }
}
