//! Blocked density matrices, their time evolution and the atomic
//! observables derived from them.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::liouville::{devectorize, liouvillian_block, vectorize, BlockIndex, DensityBlock, Mode};
use crate::model::{BasisLabel, ModelParams};
use crate::oracle;
use crate::smallmat::{c, expm, hermitian_eigenvalues, CMat, C64};
use crate::spectral::{
    checked, eigenvalues_closed, numerical_decomposition, propagate_block, spectral_decomposition,
    LValues,
};

pub const HERMITICITY_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-10;
pub const POSITIVITY_TOL: f64 = 1e-9;

/// Default sample spacing and horizon, in units of `1/g`.
pub const DEFAULT_DT: f64 = 0.01;
pub const DEFAULT_T_MAX: f64 = 20.0;

/// Default `α` of the superposition scenario.
pub const DEFAULT_ALPHA: f64 = FRAC_PI_4;

/// A density matrix stored as its nonzero `(n, m)` blocks.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BlockedDensity {
    blocks: BTreeMap<BlockIndex, DensityBlock>,
}

impl BlockedDensity {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_blocks(blocks: impl IntoIterator<Item = DensityBlock>) -> Self {
        let mut out = Self::new();
        for b in blocks {
            out.insert(b);
        }
        out
    }

    /// Inserts or replaces the block at `block.index()`.
    pub fn insert(&mut self, block: DensityBlock) {
        self.blocks.insert(block.index(), block);
    }

    pub fn get(&self, index: BlockIndex) -> Option<&DensityBlock> {
        self.blocks.get(&index)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BlockIndex, &DensityBlock)> {
        self.blocks.iter()
    }

    pub fn blocks(&self) -> impl Iterator<Item = &DensityBlock> {
        self.blocks.values()
    }

    pub fn indices(&self) -> Vec<BlockIndex> {
        self.blocks.keys().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Largest excitation number carrying nonzero weight.
    pub fn max_excitation(&self) -> usize {
        self.blocks
            .values()
            .filter(|b| b.matrix().max_abs() > 0.0)
            .map(|b| b.index().n.max(b.index().m))
            .max()
            .unwrap_or(0)
    }

    pub fn trace(&self) -> C64 {
        self.blocks
            .values()
            .filter(|b| b.index().is_diagonal())
            .map(DensityBlock::trace)
            .sum()
    }

    /// Largest entry of `ρ - ρ†`, comparing each block with the adjoint of
    /// its transposed partner.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (idx, b) in &self.blocks {
            let partner = match self.blocks.get(&idx.transposed()) {
                Some(p) => p.adjoint().into_matrix(),
                None => CMat::zeros(idx.dim_left(), idx.dim_right()),
            };
            worst = worst.max(b.matrix().max_abs_diff(&partner));
        }
        worst
    }

    /// The state on the smallest truncation that holds it.
    pub fn to_full(&self) -> oracle::FullState {
        let n_max = self.max_excitation().max(1);
        oracle::assemble(self, n_max).expect("truncation covers the support")
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.to_full().min_eigenvalue()
    }

    /// `Tr ρ²` of the full state.
    pub fn purity(&self) -> f64 {
        self.blocks
            .iter()
            .filter_map(|(idx, b)| {
                self.blocks
                    .get(&idx.transposed())
                    .map(|p| b.matrix().matmul(p.matrix()).trace().re)
            })
            .sum()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::from_blocks(self.blocks().map(|b| b.scale(c(s, 0.0))))
    }

    /// Checks hermiticity, unit trace and positivity.
    pub fn validate(&self) -> Result<()> {
        let herm = self.hermiticity_defect();
        if herm > HERMITICITY_TOL {
            return Err(Error::InvalidState(format!(
                "hermiticity defect {herm:.3e}"
            )));
        }
        let tr = self.trace();
        if (tr - 1.0).norm() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min = self.min_eigenvalue();
        if !(min >= -POSITIVITY_TOL) {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(())
    }

    pub fn physicality(&self) -> Physicality {
        Physicality {
            trace_error: (self.trace() - 1.0).norm(),
            hermiticity_defect: self.hermiticity_defect(),
            min_eigenvalue: self.min_eigenvalue(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Physicality {
    pub trace_error: f64,
    pub hermiticity_defect: f64,
    pub min_eigenvalue: f64,
}

impl Physicality {
    pub fn worst(items: impl IntoIterator<Item = Physicality>) -> Physicality {
        items.into_iter().fold(
            Physicality {
                trace_error: 0.0,
                hermiticity_defect: 0.0,
                min_eigenvalue: f64::INFINITY,
            },
            |a, b| Physicality {
                trace_error: a.trace_error.max(b.trace_error),
                hermiticity_defect: a.hermiticity_defect.max(b.hermiticity_defect),
                min_eigenvalue: a.min_eigenvalue.min(b.min_eigenvalue),
            },
        )
    }
}

/// Reduced state of the atom, `[[ϱ₁₁, ϱ₁₀], [ϱ₀₁, ϱ₀₀]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomState {
    pub rho11: C64,
    pub rho10: C64,
    pub rho01: C64,
    pub rho00: C64,
}

impl AtomState {
    pub fn matrix(&self) -> CMat {
        CMat::from_rows(&[vec![self.rho11, self.rho10], vec![self.rho01, self.rho00]])
    }

    pub fn trace(&self) -> C64 {
        self.rho11 + self.rho00
    }

    pub fn eigenvalues(&self) -> [f64; 2] {
        let ev = hermitian_eigenvalues(&self.matrix()).expect("2x2");
        [ev[0], ev[1]]
    }
}

/// Partial trace over the field.
pub fn reduce_atom(rho: &BlockedDensity) -> AtomState {
    let zero = c(0.0, 0.0);
    let mut a = AtomState {
        rho11: zero,
        rho10: zero,
        rho01: zero,
        rho00: zero,
    };
    for (idx, b) in rho.iter() {
        if idx.is_diagonal() {
            a.rho11 += b.entry(1, 1);
            a.rho00 += b.entry(0, 0);
        } else if idx.n == idx.m + 1 {
            a.rho10 += b.entry(1, 0);
        } else if idx.m == idx.n + 1 {
            a.rho01 += b.entry(0, 1);
        }
    }
    a
}

/// `W = ϱ₁₁ - ϱ₀₀`.
pub fn population_inversion(a: &AtomState) -> f64 {
    a.rho11.re - a.rho00.re
}

/// `P = ϱ₁₁² + ϱ₀₀² + 2|ϱ₀₁|²`.
pub fn purity(a: &AtomState) -> f64 {
    a.rho11.re.powi(2) + a.rho00.re.powi(2) + 2.0 * a.rho01.norm_sqr()
}

/// `|φ_n⁺⟩⟨φ_n⁺|` of the resonant model.
pub fn initial_dressed(n: usize) -> Result<BlockedDensity> {
    if n == 0 {
        return Err(Error::InvalidExcitation(0));
    }
    let half = CMat::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]);
    Ok(BlockedDensity::from_blocks([DensityBlock::new(
        BlockIndex::new(n, n),
        half,
    )?]))
}

/// Product state `cos α |n,0⟩ + sin α |n,1⟩`.
pub fn initial_superposition(n: usize, alpha: f64) -> Result<BlockedDensity> {
    if n == 0 {
        return Err(Error::InvalidExcitation(0));
    }
    if !alpha.is_finite() {
        return Err(Error::InvalidState("alpha must be finite".into()));
    }
    // Snap so that α = π/2 gives exactly one block.
    let (s, co) = alpha.sin_cos();
    let snap = |x: f64| if x.abs() < f64::EPSILON { 0.0 } else { x };
    let (s, co) = (snap(s), snap(co));
    let lower = BlockIndex::new(n, n);
    let upper = BlockIndex::new(n + 1, n + 1);
    let mut blocks = vec![
        DensityBlock::zeros(lower),
        DensityBlock::zeros(upper),
        DensityBlock::zeros(BlockIndex::new(n + 1, n)),
        DensityBlock::zeros(BlockIndex::new(n, n + 1)),
    ];
    blocks[0].set_entry(0, 0, c(co * co, 0.0))?;
    blocks[1].set_entry(1, 1, c(s * s, 0.0))?;
    blocks[2].set_entry(1, 0, c(co * s, 0.0))?;
    blocks[3].set_entry(0, 1, c(co * s, 0.0))?;
    Ok(BlockedDensity::from_blocks(
        blocks.into_iter().filter(|b| b.matrix().max_abs() > 0.0),
    ))
}

/// `|photons, atom⟩⟨photons, atom|`.
pub fn initial_fock(photons: usize, atom: u8) -> Result<BlockedDensity> {
    let label = BasisLabel::new(photons, atom)?;
    let n = label.excitation();
    let mut block = DensityBlock::zeros(BlockIndex::new(n, n));
    block.set_entry(atom, atom, c(1.0, 0.0))?;
    Ok(BlockedDensity::from_blocks([block]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Spectral,
    Expm,
    Ode,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Spectral => "spectral",
            Method::Expm => "expm",
            Method::Ode => "ode",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spectral" => Ok(Method::Spectral),
            "expm" => Ok(Method::Expm),
            "ode" => Ok(Method::Ode),
            other => Err(Error::Parse(format!("unknown method '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveOptions {
    /// Photon cutoff for the `ode` method.
    pub n_max: usize,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self {
            n_max: oracle::DEFAULT_TRUNCATION,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<BlockedDensity>,
    pub method: Method,
    pub mode: Mode,
    /// Blocks whose spectral decomposition was degenerate and which were
    /// propagated with the matrix exponential instead.
    pub fallbacks: Vec<BlockIndex>,
    /// RK4 step-halving estimate, for the `ode` method.
    pub halving_estimate: Option<f64>,
}

impl Trajectory {
    pub fn physicality(&self) -> Physicality {
        Physicality::worst(self.states.iter().map(BlockedDensity::physicality))
    }
}

/// `t_k = k dt` for `k = 0..=round(t_max/dt)`.
pub fn uniform_grid(dt: f64, t_max: f64) -> Result<Vec<f64>> {
    if !(dt > 0.0) || !(t_max >= 0.0) || !t_max.is_finite() {
        return Err(Error::PreconditionViolated(format!(
            "invalid time grid dt={dt} t_max={t_max}"
        )));
    }
    let steps = (t_max / dt).round() as usize;
    Ok((0..=steps).map(|k| k as f64 * dt).collect())
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::PreconditionViolated("empty time grid".into()));
    }
    for (k, &t) in times.iter().enumerate() {
        if !t.is_finite() || t < 0.0 || (k > 0 && t <= times[k - 1]) {
            return Err(Error::PreconditionViolated(
                "times must be finite, non-negative and strictly increasing".into(),
            ));
        }
    }
    Ok(())
}

fn expm_block(
    block0: &DensityBlock,
    p: &ModelParams,
    mode: Mode,
    times: &[f64],
) -> Result<Vec<DensityBlock>> {
    let idx = block0.index();
    let l = liouvillian_block(idx, p, mode);
    let v = vectorize(block0);
    times
        .iter()
        .map(|&t| {
            if t == 0.0 {
                return Ok(block0.clone());
            }
            devectorize(&expm(&l.matrix, t)?.matvec(&v), idx)
        })
        .collect()
}

fn spectral_block(
    block0: &DensityBlock,
    p: &ModelParams,
    mode: Mode,
    times: &[f64],
) -> Result<Option<Vec<DensityBlock>>> {
    let dec = spectral_decomposition(block0.index(), p, mode);
    if dec.degenerate {
        return Ok(None);
    }
    times
        .iter()
        .map(|&t| {
            if t == 0.0 {
                Ok(block0.clone())
            } else {
                propagate_block(&dec, block0, t)
            }
        })
        .collect::<Result<Vec<_>>>()
        .map(Some)
}

/// Evolves `rho0` under the master equation and samples it at `times`.
pub fn evolve(
    rho0: &BlockedDensity,
    p: &ModelParams,
    times: &[f64],
    method: Method,
    mode: Mode,
    opts: EvolveOptions,
) -> Result<Trajectory> {
    p.validate()?;
    check_times(times)?;
    let mut traj = Trajectory {
        times: times.to_vec(),
        states: vec![BlockedDensity::new(); times.len()],
        method,
        mode,
        fallbacks: Vec::new(),
        halving_estimate: None,
    };
    if method == Method::Ode {
        if mode != Mode::Canonical {
            return Err(Error::MethodUnavailable(
                "the ode method integrates the canonical master equation only".into(),
            ));
        }
        let needed = rho0.max_excitation();
        if needed > opts.n_max {
            return Err(Error::MethodUnavailable(format!(
                "state reaches excitation {needed}, above the ode truncation {}",
                opts.n_max
            )));
        }
        let sup = oracle::build_full_superoperator(p, opts.n_max)?;
        let full0 = oracle::assemble(rho0, opts.n_max)?;
        let spacing = ode_spacing(times);
        let dt = oracle::grid_step(&sup, spacing);
        let run = oracle::rk4_evolve(&full0, &sup, times, dt)?;
        traj.states = run.states.iter().map(oracle::disassemble).collect();
        traj.halving_estimate = Some(run.halving_estimate);
        return Ok(traj);
    }
    for block0 in rho0.blocks() {
        let samples = match method {
            Method::Expm => expm_block(block0, p, mode, times)?,
            _ => match spectral_block(block0, p, mode, times)? {
                Some(s) => s,
                None => {
                    traj.fallbacks.push(block0.index());
                    expm_block(block0, p, mode, times)?
                }
            },
        };
        for (state, b) in traj.states.iter_mut().zip(samples) {
            state.insert(b);
        }
    }
    Ok(traj)
}

/// Common spacing of the sample times (assumed to lie on a grid through 0).
fn ode_spacing(times: &[f64]) -> f64 {
    let mut prev = 0.0;
    let mut spacing = f64::INFINITY;
    for &t in times {
        if t > prev {
            spacing = spacing.min(t - prev);
        }
        prev = t;
    }
    if spacing.is_finite() {
        spacing
    } else {
        DEFAULT_DT
    }
}

/// Unit-trace right eigenmatrix of `ℒ_{n,n}` for the eigenvalue closest to 0.
pub fn stationary_block(n: usize, p: &ModelParams, mode: Mode) -> Result<DensityBlock> {
    let idx = BlockIndex::new(n, n);
    let dec = numerical_decomposition(&liouvillian_block(idx, p, mode));
    let k = (0..dec.dim())
        .min_by(|&a, &b| {
            dec.eigenvalues[a]
                .norm()
                .total_cmp(&dec.eigenvalues[b].norm())
        })
        .expect("nonempty spectrum");
    let r = &dec.right[k];
    let tr = r.trace();
    if tr.norm() < 1e-12 {
        return Err(Error::FallbackRequired(format!(
            "stationary block {idx} has zero trace"
        )));
    }
    Ok(r.scale(tr.inv()))
}

/// `Σ_n Tr{ρ_{n,n}(0)} ρ̂_{n,n}`, the `t → ∞` limit for dissipative rates.
pub fn asymptotic_state(
    rho0: &BlockedDensity,
    p: &ModelParams,
    mode: Mode,
) -> Result<BlockedDensity> {
    let mut out = BlockedDensity::new();
    for b in rho0.blocks().filter(|b| b.index().is_diagonal()) {
        out.insert(stationary_block(b.index().n, p, mode)?.scale(b.trace()));
    }
    Ok(out)
}

fn require_resonant(p: &ModelParams) -> Result<()> {
    p.validate()?;
    if !p.is_resonant_unit_coupling() {
        return Err(Error::PreconditionViolated(
            "closed-form trajectories need delta = 0 and g = 1".into(),
        ));
    }
    Ok(())
}

fn closed_values(index: BlockIndex, p: &ModelParams) -> Result<([C64; 4], [C64; 4])> {
    let lam = eigenvalues_closed(index, p)?;
    let l = LValues::from_eigenvalues(index, p.gamma_tilde(), &lam).0;
    Ok((lam, l))
}

/// `(ρ^{1,1}_{n,n}(t), ρ^{1,0}_{n,n}(t))` for the initial dressed state
/// `|φ_n⁺⟩`.
pub fn closed_form_dressed(n: usize, p: &ModelParams, t: f64) -> Result<(f64, C64)> {
    require_resonant(p)?;
    if n == 0 {
        return Err(Error::InvalidExcitation(0));
    }
    let (lam, l) = closed_values(BlockIndex::new(n, n), p)?;
    let gt = p.gamma_tilde();
    let dg = p.gamma0 - p.gamma1;
    let sn = (n as f64).sqrt();
    let dl = checked("l1 - l2", l[0] - l[1])?;
    let lam3 = checked("lambda3", lam[2])?;
    let e = |j: usize| (lam[j] * t).exp();

    let stationary = (2.0 - p.gamma1 * lam3) / checked("4 - lambda3 gt", 4.0 - lam3 * gt)?;
    let mut osc = c(0.0, 0.0);
    for (j, sign) in [(0, 1.0), (1, -1.0)] {
        osc += sign * l[j] * l[j] * e(j) / checked("8 + 2 l gt", 8.0 + 2.0 * l[j] * gt)?;
    }
    let rho11 = stationary + dg / dl * osc;

    let i = c(0.0, 1.0);
    let mut coh = c(0.0, 0.0);
    for (j, sign) in [(0, -1.0), (1, 1.0)] {
        coh += sign * l[j] * e(j) / checked("4 + l gt", 4.0 + l[j] * gt)?;
    }
    let rho10 = i * sn * dg / checked("gt lambda3 - 4", gt * lam3 - 4.0)?
        - gt * n as f64 * e(2) / (4.0 * lam3)
        - i * sn * dg / dl * coh;
    Ok((rho11.re, rho10))
}

/// `(ϱ₁₁(t), ϱ₀₁(t))` for the initial product state
/// `cos α |n,0⟩ + sin α |n,1⟩`.
pub fn closed_form_superposition(
    n: usize,
    alpha: f64,
    p: &ModelParams,
    t: f64,
) -> Result<(f64, C64)> {
    require_resonant(p)?;
    if n == 0 {
        return Err(Error::InvalidExcitation(0));
    }
    let gt = p.gamma_tilde();
    let (s, co) = alpha.sin_cos();

    // Diagonal sectors n (weight cos²α) and n+1 (weight sin²α).
    let population = |k: usize, rate: f64, sign: f64| -> Result<C64> {
        let (lam, l) = closed_values(BlockIndex::new(k, k), p)?;
        let kf = k as f64;
        let dl = checked("l2 - l1", l[1] - l[0])?;
        let mut out = c((4.0 + kf * gt * p.gamma1) / (8.0 + kf * gt * gt), 0.0);
        for (j, sj) in [(0, 1.0), (1, -1.0)] {
            let den = checked("4 + l gt", 4.0 + l[j] * gt)? * dl;
            out += sign * sj * l[j] * (2.0 + l[j] * rate) * (lam[j] * t).exp() / den;
        }
        Ok(out)
    };
    let rho11 =
        co * co * population(n, p.gamma1, 1.0)? + s * s * population(n + 1, p.gamma0, -1.0)?;

    let (mu, k) = closed_values(BlockIndex::new(n, n + 1), p)?;
    let ng = n as f64 * gt;
    let dk = checked("l2 - l1", k[1] - k[0])?;
    let dmu = checked("lambda4 - lambda3", mu[3] - mu[2])?;
    let e = |j: usize| (mu[j] * t).exp();
    let mut bracket = (ng + p.gamma1 - 2.0 * k[0]) * e(0)
        / (checked("4 + l gt", 4.0 + k[0] * gt)? * dk)
        - (ng + p.gamma1 - 2.0 * k[1]) * e(1) / (checked("4 + l gt", 4.0 + k[1] * gt)? * dk);
    bracket += (ng + p.gamma0 + 2.0 * mu[3]) * e(2)
        / (checked("4 - lambda gt", 4.0 - mu[3] * gt)? * dmu)
        - (ng + p.gamma0 + 2.0 * mu[2]) * e(3)
            / (checked("4 - lambda gt", 4.0 - mu[2] * gt)? * dmu);
    Ok((rho11.re, co * s * bracket))
}

/// One sample of the atomic observables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeRow {
    pub t: f64,
    pub w: f64,
    pub p: f64,
    pub trace: C64,
    pub atom: AtomState,
}

impl TimeRow {
    pub fn from_state(t: f64, rho: &BlockedDensity) -> Self {
        let atom = reduce_atom(rho);
        Self {
            t,
            w: population_inversion(&atom),
            p: purity(&atom),
            trace: rho.trace(),
            atom,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TimeSeries {
    pub rows: Vec<TimeRow>,
}

impl TimeSeries {
    pub const HEADER: [&'static str; 9] = [
        "t", "W", "P", "trace_re", "trace_im", "rho11", "rho00", "re_rho01", "im_rho01",
    ];

    pub fn from_trajectory(traj: &Trajectory) -> Self {
        Self {
            rows: traj
                .times
                .iter()
                .zip(&traj.states)
                .map(|(&t, s)| TimeRow::from_state(t, s))
                .collect(),
        }
    }

    pub fn last(&self) -> Option<&TimeRow> {
        self.rows.last()
    }
}

/// Initial state of a figure scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Scenario {
    Dressed { n: usize },
    Superposition { n: usize, alpha: f64 },
}

impl Scenario {
    pub fn initial_state(&self) -> Result<BlockedDensity> {
        match *self {
            Scenario::Dressed { n } => initial_dressed(n),
            Scenario::Superposition { n, alpha } => initial_superposition(n, alpha),
        }
    }
}

/// A named rate pair of one figure curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Preset {
    pub name: &'static str,
    pub gamma0: f64,
    pub gamma1: f64,
}

impl Preset {
    pub fn params(&self) -> ModelParams {
        ModelParams::resonant(self.gamma0, self.gamma1).expect("preset rates are valid")
    }
}

const DAMPED: [Preset; 3] = [
    Preset {
        name: "black",
        gamma0: 0.08,
        gamma1: 0.0,
    },
    Preset {
        name: "dashed",
        gamma0: 1.2,
        gamma1: 0.0,
    },
    Preset {
        name: "dotted",
        gamma0: 0.0,
        gamma1: 1.2,
    },
];

/// Dressed-state curves; the equal-rate curve uses 0.4 for both rates.
pub fn fig1_presets() -> [Preset; 4] {
    let gray = Preset {
        name: "gray",
        gamma0: 0.4,
        gamma1: 0.4,
    };
    [gray, DAMPED[0], DAMPED[1], DAMPED[2]]
}

/// Superposition curves; the gray curve is the dissipation-free one.
pub fn fig2_presets() -> [Preset; 4] {
    let gray = Preset {
        name: "gray",
        gamma0: 0.0,
        gamma1: 0.0,
    };
    [gray, DAMPED[0], DAMPED[1], DAMPED[2]]
}
