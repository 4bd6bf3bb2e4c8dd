//! Brute-force reference: the full Lindblad superoperator on a truncated
//! Fock ⊗ atom space, built from ladder-operator matrices, and a
//! fixed-step RK4 integrator for it.
//!
//! Nothing here uses the block generators, so comparing the two is an
//! independent check. Basis order is `(photons, atom)` lexicographic with
//! the atom index fastest: `|p, a⟩ ↦ 2p + a`.

use crate::dynamics::BlockedDensity;
use crate::error::{Error, Result};
use crate::liouville::{sector_atoms, BlockIndex, DensityBlock};
use crate::model::ModelParams;
use crate::smallmat::{c, hermitian_eigenvalues, CMat, C64};

/// Largest supported photon cutoff.
pub const MAX_TRUNCATION: usize = 12;

/// Default photon cutoff.
pub const DEFAULT_TRUNCATION: usize = 8;

/// Step-halving estimates above this fail the integration.
pub const HALVING_TOLERANCE: f64 = 1e-6;

pub fn basis_index(photons: usize, atom: u8) -> usize {
    2 * photons + atom as usize
}

fn hilbert_dim(n_max: usize) -> usize {
    2 * (n_max + 1)
}

/// Full-space indices of the states in excitation sector `n`, in sector
/// order.
pub fn sector_states(n: usize) -> Vec<usize> {
    sector_atoms(n)
        .iter()
        .map(|&a| basis_index(n - a as usize, a))
        .collect()
}

fn excitation_of_index(k: usize) -> usize {
    k / 2 + k % 2
}

/// Dense density matrix on photons `0..=n_max` times a two-level atom.
#[derive(Debug, Clone, PartialEq)]
pub struct FullState {
    pub n_max: usize,
    pub rho: CMat,
}

impl FullState {
    pub fn trace(&self) -> C64 {
        self.rho.trace()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.rho.hermiticity_defect()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.rho).map_or(f64::NAN, |ev| ev[0])
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.rho.matmul(&self.rho).trace().re
    }
}

/// Matrix of the full master-equation generator (row-major vectorization).
#[derive(Debug, Clone)]
pub struct FullSuperoperator {
    pub n_max: usize,
    pub params: ModelParams,
    pub matrix: CMat,
}

/// `a` on photons `0..=n_max`.
pub fn annihilation(n_max: usize) -> CMat {
    let mut a = CMat::zeros(n_max + 1, n_max + 1);
    for p in 1..=n_max {
        a[(p - 1, p)] = c((p as f64).sqrt(), 0.0);
    }
    a
}

/// Atomic raising operator `|1⟩⟨0|` in the atom basis (0, 1).
pub fn sigma_plus() -> CMat {
    CMat::from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0]])
}

pub fn sigma_z() -> CMat {
    CMat::from_real_rows(&[&[-1.0, 0.0], &[0.0, 1.0]])
}

/// Jaynes-Cummings Hamiltonian `δσ_z + g(aσ₊ + a†σ₋)` on the truncated space.
pub fn full_hamiltonian(p: &ModelParams, n_max: usize) -> CMat {
    let a = annihilation(n_max).kron(&CMat::identity(2));
    let sp = CMat::identity(n_max + 1).kron(&sigma_plus());
    let sz = CMat::identity(n_max + 1).kron(&sigma_z());
    let coupling = a.matmul(&sp);
    sz.scale_re(p.delta)
        .add(&coupling.add(&coupling.adjoint()).scale_re(p.g))
}

/// Jump operators `(a† σ₋, a σ₊)` on the truncated space.
pub fn full_jumps(n_max: usize) -> (CMat, CMat) {
    let a = annihilation(n_max).kron(&CMat::identity(2));
    let sp = CMat::identity(n_max + 1).kron(&sigma_plus());
    let raise = a.matmul(&sp);
    (raise.adjoint(), raise)
}

pub fn build_full_superoperator(p: &ModelParams, n_max: usize) -> Result<FullSuperoperator> {
    p.validate()?;
    if n_max > MAX_TRUNCATION {
        return Err(Error::TruncationTooLarge(n_max));
    }
    if n_max == 0 {
        return Err(Error::PreconditionViolated(
            "photon cutoff must be at least 1".into(),
        ));
    }
    let d = hilbert_dim(n_max);
    let id = CMat::identity(d);
    let h = full_hamiltonian(p, n_max);
    // vec(A ρ B) = (A ⊗ Bᵀ) vec(ρ) for row-major vec.
    let mut l = h
        .kron(&id)
        .sub(&id.kron(&h.transpose()))
        .scale(c(0.0, -1.0));
    let (lower, raise) = full_jumps(n_max);
    for (rate, j) in [(p.gamma0, lower), (p.gamma1, raise)] {
        if rate == 0.0 {
            continue;
        }
        let jdj = j.adjoint().matmul(&j);
        let term = j
            .kron(&j.conj())
            .sub(&jdj.kron(&id).scale_re(0.5))
            .sub(&id.kron(&jdj.transpose()).scale_re(0.5));
        l = l.add(&term.scale_re(rate));
    }
    Ok(FullSuperoperator {
        n_max,
        params: *p,
        matrix: l,
    })
}

impl FullSuperoperator {
    pub fn hilbert_dim(&self) -> usize {
        hilbert_dim(self.n_max)
    }

    /// Restriction to the vectorized block `(n, m)`; both sectors must be
    /// complete inside the truncation.
    pub fn sector_block(&self, index: BlockIndex) -> Result<CMat> {
        let needed = index.n.max(index.m);
        if needed > self.n_max {
            return Err(Error::TruncationTooSmall {
                needed,
                n_max: self.n_max,
            });
        }
        let d = self.hilbert_dim();
        let rows = sector_states(index.n);
        let cols = sector_states(index.m);
        let pos: Vec<usize> = rows
            .iter()
            .flat_map(|&a| cols.iter().map(move |&b| a * d + b))
            .collect();
        Ok(CMat::from_fn(pos.len(), pos.len(), |i, j| {
            self.matrix[(pos[i], pos[j])]
        }))
    }

    /// Largest matrix element linking different `(n, m)` sectors.
    pub fn max_cross_sector_element(&self) -> f64 {
        let d = self.hilbert_dim();
        let label = |k: usize| (excitation_of_index(k / d), excitation_of_index(k % d));
        let mut worst: f64 = 0.0;
        for i in 0..d * d {
            let li = label(i);
            for (j, z) in self.matrix.row(i).iter().enumerate() {
                if label(j) != li {
                    worst = worst.max(z.norm());
                }
            }
        }
        worst
    }

    /// `|t · ℒ|_∞` for the full trace functional.
    pub fn trace_defect(&self) -> f64 {
        let d = self.hilbert_dim();
        let mut t = vec![c(0.0, 0.0); d * d];
        for k in 0..d {
            t[k * d + k] = c(1.0, 0.0);
        }
        self.matrix
            .vecmat(&t)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Largest admissible RK4 step: `0.01 / (g + γ₀ + γ₁ + |δ| + r)` with
    /// `r` the largest absolute row sum of the generator.
    pub fn max_step(&self) -> f64 {
        let p = &self.params;
        let norm = (0..self.matrix.rows())
            .map(|k| self.matrix.row(k).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max);
        0.01 / (p.g + p.gamma0 + p.gamma1 + p.delta.abs() + norm)
    }

    fn compressed(&self) -> Vec<Vec<(usize, C64)>> {
        (0..self.matrix.rows())
            .map(|i| {
                self.matrix
                    .row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, z)| z.norm() != 0.0)
                    .map(|(j, z)| (j, *z))
                    .collect()
            })
            .collect()
    }
}

/// Embeds a blocked density into the truncated space.
pub fn assemble(blocked: &BlockedDensity, n_max: usize) -> Result<FullState> {
    let needed = blocked.max_excitation();
    if needed > n_max {
        return Err(Error::TruncationTooSmall { needed, n_max });
    }
    let d = hilbert_dim(n_max);
    let mut rho = CMat::zeros(d, d);
    for block in blocked.blocks() {
        let idx = block.index();
        for (a, &ra) in sector_states(idx.n).iter().enumerate() {
            for (b, &cb) in sector_states(idx.m).iter().enumerate() {
                rho[(ra, cb)] = block.matrix()[(a, b)];
            }
        }
    }
    Ok(FullState { n_max, rho })
}

/// Splits a full state into its nonzero `(n, m)` blocks with `n, m <= n_max`.
pub fn disassemble(full: &FullState) -> BlockedDensity {
    let mut out = BlockedDensity::new();
    for n in 0..=full.n_max {
        let rows = sector_states(n);
        for m in 0..=full.n_max {
            let cols = sector_states(m);
            let mat = CMat::from_fn(rows.len(), cols.len(), |a, b| full.rho[(rows[a], cols[b])]);
            if mat.max_abs() > 0.0 {
                let block = DensityBlock::new(BlockIndex::new(n, m), mat).expect("sector shapes");
                out.insert(block);
            }
        }
    }
    out
}

/// Result of a fixed-step RK4 run.
#[derive(Debug, Clone)]
pub struct Rk4Run {
    pub states: Vec<FullState>,
    pub dt: f64,
    /// Largest entrywise difference to a run with half the step, over all
    /// sample times.
    pub halving_estimate: f64,
}

fn rk4_samples(
    csr: &[Vec<(usize, C64)>],
    rho0: &FullState,
    times: &[f64],
    dt: f64,
) -> Vec<FullState> {
    let d = hilbert_dim(rho0.n_max);
    let apply = |v: &[C64]| -> Vec<C64> {
        csr.iter()
            .map(|row| row.iter().map(|&(j, z)| z * v[j]).sum())
            .collect()
    };
    let mut v = rho0.rho.as_slice().to_vec();
    let mut step = 0usize;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        let target = (t / dt).round() as usize;
        while step < target {
            let k1 = apply(&v);
            let tmp: Vec<C64> = v.iter().zip(&k1).map(|(a, k)| a + k * (0.5 * dt)).collect();
            let k2 = apply(&tmp);
            let tmp: Vec<C64> = v.iter().zip(&k2).map(|(a, k)| a + k * (0.5 * dt)).collect();
            let k3 = apply(&tmp);
            let tmp: Vec<C64> = v.iter().zip(&k3).map(|(a, k)| a + k * dt).collect();
            let k4 = apply(&tmp);
            for (i, x) in v.iter_mut().enumerate() {
                *x += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (dt / 6.0);
            }
            step += 1;
        }
        out.push(FullState {
            n_max: rho0.n_max,
            rho: CMat::new(d, d, v.clone()).expect("finite state"),
        });
    }
    out
}

/// Integrates `dρ/dt = ℒρ` from `ρ(0) = rho0` with classical RK4, sampling
/// at `times` (which must lie on the `dt` grid).
pub fn rk4_evolve(
    rho0: &FullState,
    sup: &FullSuperoperator,
    times: &[f64],
    dt: f64,
) -> Result<Rk4Run> {
    if rho0.n_max != sup.n_max {
        return Err(Error::DimensionMismatch {
            expected: format!("cutoff {}", sup.n_max),
            found: format!("cutoff {}", rho0.n_max),
        });
    }
    if !(dt > 0.0) || dt > sup.max_step() * (1.0 + 1e-12) {
        return Err(Error::PreconditionViolated(format!(
            "RK4 step {dt} outside (0, {}]",
            sup.max_step()
        )));
    }
    for (k, &t) in times.iter().enumerate() {
        if !(t >= 0.0) || (k > 0 && t <= times[k - 1]) {
            return Err(Error::PreconditionViolated(
                "sample times must be non-negative and strictly increasing".into(),
            ));
        }
        let steps = t / dt;
        if (steps - steps.round()).abs() > 1e-6 {
            return Err(Error::PreconditionViolated(format!(
                "sample time {t} is not on the dt = {dt} grid"
            )));
        }
    }
    let csr = sup.compressed();
    let states = rk4_samples(&csr, rho0, times, dt);
    let halved = rk4_samples(&csr, rho0, times, 0.5 * dt);
    let halving_estimate = states
        .iter()
        .zip(&halved)
        .map(|(a, b)| a.rho.max_abs_diff(&b.rho))
        .fold(0.0, f64::max);
    if halving_estimate > HALVING_TOLERANCE {
        return Err(Error::StepTooLarge {
            estimate: halving_estimate,
        });
    }
    Ok(Rk4Run {
        states,
        dt,
        halving_estimate,
    })
}

/// Largest step not exceeding `sup.max_step()` that divides `spacing`.
pub fn grid_step(sup: &FullSuperoperator, spacing: f64) -> f64 {
    let per = (spacing / sup.max_step()).ceil().max(1.0);
    spacing / per
}
