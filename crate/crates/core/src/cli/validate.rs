//! Runtime invariant suite behind `exciton validate`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dynamics::{
    evolve, fig1_presets, fig2_presets, initial_dressed, uniform_grid, BlockedDensity,
    EvolveOptions, Method, Physicality, Scenario, DEFAULT_ALPHA,
};
use crate::liouville::{liouvillian_block, BlockIndex, GammaConvention, Mode};
use crate::model::ModelParams;
use crate::oracle::build_full_superoperator;
use crate::smallmat::C64;
use crate::spectral::{
    eigenvalues_closed_with, numerical_decomposition, spectral_decomposition, trace_consistency,
};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub limit: String,
    pub passed: bool,
    /// Reported but never counted as a failure.
    pub informational: bool,
}

impl Check {
    fn at_most(name: &'static str, value: f64, limit: f64) -> Self {
        Self {
            name,
            value,
            limit: format!("<= {limit:.0e}"),
            passed: value <= limit,
            informational: false,
        }
    }

    fn at_least(name: &'static str, value: f64, limit: f64) -> Self {
        Self {
            name,
            value,
            limit: format!(">= {limit}"),
            passed: value >= limit,
            informational: false,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SuiteOptions {
    /// Builds the closed-form eigenvalues with `γ̃ = γ₁ - γ₀`, which the
    /// trace-consistency check must catch.
    pub inject_gamma_sign_flip: bool,
    pub seed: u64,
}

fn random_params(rng: &mut ChaCha8Rng, count: usize) -> Vec<ModelParams> {
    (0..count)
        .map(|_| {
            ModelParams::resonant(rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0))
                .expect("valid rates")
        })
        .collect()
}

fn max_diff(a: &BlockedDensity, b: &BlockedDensity) -> f64 {
    a.iter()
        .map(|(idx, x)| {
            b.get(*idx)
                .map_or(f64::INFINITY, |y| x.matrix().max_abs_diff(y.matrix()))
        })
        .fold(0.0, f64::max)
}

pub fn run_suite(opts: SuiteOptions) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let params = random_params(&mut rng, 12);
    let convention = if opts.inject_gamma_sign_flip {
        GammaConvention::Difference
    } else {
        GammaConvention::Sum
    };
    let mut checks = Vec::new();

    let mut closed_nonzero = 0usize;
    let mut numeric_zero: f64 = 0.0;
    for p in &params {
        for n in 1..=6 {
            let idx = BlockIndex::new(n, n);
            let lam = eigenvalues_closed_with(idx, p, convention).expect("resonant block");
            if lam[3] != C64::new(0.0, 0.0) {
                closed_nonzero += 1;
            }
            let dec = numerical_decomposition(&liouvillian_block(idx, p, Mode::Printed));
            let smallest = dec
                .eigenvalues
                .iter()
                .map(|z| z.norm())
                .fold(f64::INFINITY, f64::min);
            numeric_zero = numeric_zero.max(smallest);
        }
    }
    let mut c = Check::at_most("stationary eigenvalue", numeric_zero, 1e-10);
    c.passed &= closed_nonzero == 0;
    checks.push(c);

    let mut biorth: f64 = 0.0;
    let mut residual: f64 = 0.0;
    let mut consistency: f64 = 0.0;
    for p in &params {
        for n in 1..=6 {
            for m in 1..=6 {
                let idx = BlockIndex::new(n, m);
                for mode in [Mode::Printed, Mode::Canonical] {
                    let lblock = liouvillian_block(idx, p, mode);
                    let scale = 1.0 + lblock.matrix.norm_1();
                    for dec in [
                        spectral_decomposition(idx, p, mode),
                        numerical_decomposition(&lblock),
                    ] {
                        if dec.degenerate {
                            continue;
                        }
                        biorth = biorth.max(dec.biorthonormality_defect());
                        let (r, l) = dec.residuals(&lblock);
                        residual = residual.max(r.max(l) / scale);
                    }
                }
                consistency =
                    consistency.max(trace_consistency(idx, p, convention).expect("resonant block"));
            }
        }
    }
    checks.push(Check::at_most("biorthonormality", biorth, 1e-9));
    checks.push(Check::at_most("eigen-residuals (relative)", residual, 1e-9));
    checks.push(Check::at_most("trace consistency", consistency, 1e-10));
    let flipped = trace_consistency(
        BlockIndex::new(2, 2),
        &ModelParams::resonant(1.2, 0.0).expect("valid rates"),
        GammaConvention::Difference,
    )
    .expect("resonant block");
    checks.push(Check::at_least(
        "sign-flipped convention detected",
        flipped,
        0.1,
    ));

    let mut diag_modes: f64 = 0.0;
    let mut offdiag_modes: f64 = 0.0;
    for p in &params {
        for n in 0..=10 {
            let idx = BlockIndex::new(n, n);
            let a = liouvillian_block(idx, p, Mode::Printed).matrix;
            let b = liouvillian_block(idx, p, Mode::Canonical).matrix;
            diag_modes = diag_modes.max(a.max_abs_diff(&b));
        }
        for n in 1..=6 {
            for m in (1..=6).filter(|&m| m != n) {
                let idx = BlockIndex::new(n, m);
                let a = liouvillian_block(idx, p, Mode::Printed).matrix;
                let b = liouvillian_block(idx, p, Mode::Canonical).matrix;
                offdiag_modes = offdiag_modes.max(a.max_abs_diff(&b));
            }
        }
    }
    checks.push(Check::at_most(
        "printed = canonical on diagonal blocks",
        diag_modes,
        1e-13,
    ));
    checks.push(Check {
        name: "printed vs canonical, off-diagonal blocks",
        value: offdiag_modes,
        limit: "reported".into(),
        passed: true,
        informational: true,
    });

    let mut sector: f64 = 0.0;
    let mut leakage: f64 = 0.0;
    for p in params.iter().take(3) {
        let sup = build_full_superoperator(p, 8).expect("cutoff in range");
        leakage = leakage.max(sup.max_cross_sector_element());
        for n in 0..=7 {
            for m in 0..=7 {
                let idx = BlockIndex::new(n, m);
                let block = sup.sector_block(idx).expect("sector inside cutoff");
                sector = sector
                    .max(block.max_abs_diff(&liouvillian_block(idx, p, Mode::Canonical).matrix));
            }
        }
    }
    checks.push(Check::at_most("oracle sector restriction", sector, 1e-13));
    checks.push(Check::at_most(
        "oracle cross-sector elements",
        leakage,
        1e-14,
    ));

    let times = uniform_grid(0.5, 20.0).expect("valid grid");
    let mut spectral_expm: f64 = 0.0;
    let mut phys = Vec::new();
    let scenarios = [
        (Scenario::Dressed { n: 2 }, fig1_presets()),
        (
            Scenario::Superposition {
                n: 2,
                alpha: DEFAULT_ALPHA,
            },
            fig2_presets(),
        ),
    ];
    for (scenario, presets) in &scenarios {
        let rho0 = scenario.initial_state().expect("valid scenario");
        for preset in presets {
            let p = preset.params();
            for mode in [Mode::Printed, Mode::Canonical] {
                let s = evolve(
                    &rho0,
                    &p,
                    &times,
                    Method::Spectral,
                    mode,
                    EvolveOptions::default(),
                );
                let e = evolve(
                    &rho0,
                    &p,
                    &times,
                    Method::Expm,
                    mode,
                    EvolveOptions::default(),
                );
                match (s, e) {
                    (Ok(s), Ok(e)) => {
                        for (a, b) in s.states.iter().zip(&e.states) {
                            spectral_expm = spectral_expm.max(max_diff(a, b));
                        }
                        if mode == Mode::Canonical {
                            phys.push(e.physicality());
                        }
                    }
                    _ => spectral_expm = f64::INFINITY,
                }
            }
        }
    }
    checks.push(Check::at_most("spectral vs expm", spectral_expm, 1e-9));

    let p = ModelParams::resonant(0.08, 0.0).expect("valid rates");
    let rho0 = initial_dressed(2).expect("valid state");
    let short = uniform_grid(0.5, 5.0).expect("valid grid");
    let opts = EvolveOptions { n_max: 4 };
    let ode_gap = match (
        evolve(&rho0, &p, &short, Method::Expm, Mode::Canonical, opts),
        evolve(&rho0, &p, &short, Method::Ode, Mode::Canonical, opts),
    ) {
        (Ok(e), Ok(o)) => e
            .states
            .iter()
            .zip(&o.states)
            .map(|(a, b)| max_diff(a, b))
            .fold(0.0, f64::max),
        _ => f64::INFINITY,
    };
    checks.push(Check::at_most("expm vs RK4 oracle", ode_gap, 1e-6));

    let worst = Physicality::worst(phys);
    checks.push(Check::at_most(
        "trace along trajectories",
        worst.trace_error,
        1e-9,
    ));
    checks.push(Check::at_most(
        "hermiticity along trajectories",
        worst.hermiticity_defect,
        1e-9,
    ));
    checks.push(Check::at_least(
        "min eigenvalue along trajectories",
        worst.min_eigenvalue,
        -1e-8,
    ));

    let ep = ModelParams::resonant(6.0, 2.0).expect("valid rates");
    let flagged = spectral_decomposition(BlockIndex::new(1, 1), &ep, Mode::Printed).degenerate;
    let fell_back = evolve(
        &initial_dressed(1).expect("valid state"),
        &ep,
        &[0.0, 1.0],
        Method::Spectral,
        Mode::Canonical,
        EvolveOptions::default(),
    )
    .map(|t| t.fallbacks == vec![BlockIndex::new(1, 1)])
    .unwrap_or(false);
    checks.push(Check {
        name: "exceptional point falls back to expm",
        value: if flagged && fell_back { 1.0 } else { 0.0 },
        limit: "flagged".into(),
        passed: flagged && fell_back,
        informational: false,
    });
    checks
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed || c.informational)
}

pub fn render_table(checks: &[Check]) -> String {
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for c in checks {
        let status = match (c.informational, c.passed) {
            (true, _) => "INFO",
            (false, true) => "PASS",
            (false, false) => "FAIL",
        };
        out.push_str(&format!(
            "{status}  {:<width$}  {:>12.3e}  {}\n",
            c.name, c.value, c.limit
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_suite_passes() {
        let checks = run_suite(SuiteOptions::default());
        assert!(all_passed(&checks), "{}", render_table(&checks));
        assert!(checks.iter().any(|c| c.informational && c.value > 0.01));
    }

    #[test]
    fn sign_flip_is_caught() {
        let checks = run_suite(SuiteOptions {
            inject_gamma_sign_flip: true,
            seed: 0,
        });
        assert!(!all_passed(&checks));
        let failed: Vec<_> = checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name)
            .collect();
        assert!(failed.contains(&"trace consistency"), "{failed:?}");
    }
}
