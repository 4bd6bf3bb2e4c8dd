//! The closed Jaynes-Cummings system in the excitation basis.
//!
//! Every excitation sector `n >= 1` is spanned by `|n-1, 1⟩` (one photon
//! fewer, atom excited) and `|n, 0⟩` (atom in the ground state), always in
//! that order. Sector `n = 0` holds only the vacuum `|0, 0⟩`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::smallmat::{c, CMat};

/// Physical constants, all in units of the coupling once `g = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Detuning δ multiplying σ_z.
    pub delta: f64,
    /// Atom-cavity coupling g.
    pub g: f64,
    /// Rate of the jump `a† σ₋`.
    pub gamma0: f64,
    /// Rate of the jump `a σ₊`.
    pub gamma1: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            delta: 0.0,
            g: 1.0,
            gamma0: 0.0,
            gamma1: 0.0,
        }
    }
}

impl ModelParams {
    pub fn new(delta: f64, g: f64, gamma0: f64, gamma1: f64) -> Result<Self> {
        let p = Self {
            delta,
            g,
            gamma0,
            gamma1,
        };
        p.validate()?;
        Ok(p)
    }

    /// Resonant model with unit coupling.
    pub fn resonant(gamma0: f64, gamma1: f64) -> Result<Self> {
        Self::new(0.0, 1.0, gamma0, gamma1)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.delta, self.g, self.gamma0, self.gamma1];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParams("parameters must be finite".into()));
        }
        if self.g <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "g must be positive, got {}",
                self.g
            )));
        }
        if self.gamma0 < 0.0 || self.gamma1 < 0.0 {
            return Err(Error::InvalidParams(format!(
                "rates must be non-negative, got gamma0={} gamma1={}",
                self.gamma0, self.gamma1
            )));
        }
        Ok(())
    }

    /// Total dissipation rate γ̃ = γ₀ + γ₁ entering the block Liouvillian.
    pub fn gamma_tilde(&self) -> f64 {
        self.gamma0 + self.gamma1
    }

    /// True when the closed-form zero-detuning eigensystem applies.
    pub fn is_resonant_unit_coupling(&self) -> bool {
        self.delta == 0.0 && self.g == 1.0
    }
}

/// A product basis state `|photons, atom⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisLabel {
    pub photons: usize,
    pub atom: u8,
}

impl BasisLabel {
    pub fn new(photons: usize, atom: u8) -> Result<Self> {
        if atom > 1 {
            return Err(Error::InvalidState(format!(
                "atom index must be 0 or 1, got {atom}"
            )));
        }
        Ok(Self { photons, atom })
    }

    /// Position inside its excitation sector: 0 for the excited-atom state,
    /// 1 for the ground-atom state (0 in the vacuum sector).
    pub fn sector_position(&self) -> usize {
        if self.excitation() == 0 {
            0
        } else {
            1 - self.atom as usize
        }
    }

    pub fn excitation(&self) -> usize {
        excitation_of(*self)
    }
}

/// Eigenvalue of the excitation operator `a†a + (σ_z + 1)/2`.
pub fn excitation_of(label: BasisLabel) -> usize {
    label.photons + label.atom as usize
}

/// Dimension of excitation sector `n`.
pub fn sector_dim(n: usize) -> usize {
    if n == 0 {
        1
    } else {
        2
    }
}

/// 2x2 Hamiltonian block `[[δ, g√n], [g√n, -δ]]` of sector `n >= 1`.
pub fn hamiltonian_block(n: usize, p: &ModelParams) -> Result<CMat> {
    if n == 0 {
        return Err(Error::InvalidExcitation(0));
    }
    let off = p.g * (n as f64).sqrt();
    Ok(CMat::from_real_rows(&[&[p.delta, off], &[off, -p.delta]]))
}

/// Hamiltonian restricted to sector `n`, including the 1x1 vacuum sector.
///
/// The vacuum `|0,0⟩` has the atom in its ground state, so its energy under
/// `δ σ_z` is `-δ`.
pub fn hamiltonian_sector(n: usize, p: &ModelParams) -> CMat {
    if n == 0 {
        CMat::from_rows(&[vec![c(-p.delta, 0.0)]])
    } else {
        hamiltonian_block(n, p).expect("n >= 1")
    }
}

/// `(+E_n, -E_n)` with `E_n = sqrt(δ² + g² n)`.
pub fn eigenenergies(n: usize, p: &ModelParams) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::InvalidExcitation(0));
    }
    let e = p.delta.hypot(p.g * (n as f64).sqrt());
    Ok((e, -e))
}

/// Dressed-state mixing angle θ_n = arctan(sqrt((E_n - δ)/(E_n + δ))).
pub fn mixing_angle(n: usize, p: &ModelParams) -> Result<f64> {
    let (e, _) = eigenenergies(n, p)?;
    let coupling2 = p.g * p.g * n as f64;
    // E² - δ² = g²n avoids the cancellation in whichever of E ± δ is small.
    let (num, den) = if p.delta >= 0.0 {
        (coupling2 / (e + p.delta), e + p.delta)
    } else {
        (e - p.delta, coupling2 / (e - p.delta))
    };
    Ok((num / den).sqrt().atan())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DressedSign {
    Plus,
    Minus,
}

/// Dressed state |φ_n^±⟩ in the sector basis (|n-1,1⟩, |n,0⟩).
pub fn dressed_state(n: usize, sign: DressedSign, p: &ModelParams) -> Result<[f64; 2]> {
    let theta = mixing_angle(n, p)?;
    let (s, co) = theta.sin_cos();
    Ok(match sign {
        DressedSign::Plus => [co, s],
        DressedSign::Minus => [-s, co],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smallmat::eig_general;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};

    fn params(delta: f64, g: f64) -> ModelParams {
        ModelParams::new(delta, g, 0.0, 0.0).unwrap()
    }

    #[test]
    fn excitation_numbers() {
        assert_eq!(excitation_of(BasisLabel::new(0, 0).unwrap()), 0);
        assert_eq!(excitation_of(BasisLabel::new(1, 1).unwrap()), 2);
        assert_eq!(excitation_of(BasisLabel::new(5, 0).unwrap()), 5);
        assert!(BasisLabel::new(3, 2).is_err());
    }

    #[test]
    fn parameter_validation() {
        assert!(ModelParams::new(0.0, 0.0, 0.0, 0.0).is_err());
        assert!(ModelParams::new(0.0, 1.0, -0.1, 0.0).is_err());
        assert!(ModelParams::new(f64::NAN, 1.0, 0.0, 0.0).is_err());
        assert!((ModelParams::resonant(0.2, 0.4).unwrap().gamma_tilde() - 0.6).abs() < 1e-15);
    }

    #[test]
    fn hamiltonian_blocks() {
        let h = hamiltonian_block(1, &params(0.0, 1.0)).unwrap();
        assert_eq!(h, CMat::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]));
        let h = hamiltonian_block(2, &params(0.5, 1.0)).unwrap();
        let r2 = 2f64.sqrt();
        assert_eq!(h, CMat::from_real_rows(&[&[0.5, r2], &[r2, -0.5]]));
        assert_eq!(
            hamiltonian_block(0, &params(0.0, 1.0)),
            Err(Error::InvalidExcitation(0))
        );
        assert_eq!(
            hamiltonian_sector(0, &params(0.3, 1.0))[(0, 0)],
            c(-0.3, 0.0)
        );
    }

    #[test]
    fn block_spectrum_matches_energies() {
        let p = params(1.0, 2.0);
        let e = eig_general(&hamiltonian_block(3, &p).unwrap()).unwrap();
        assert!((e.values[0].re - 13f64.sqrt()).abs() < 1e-12);
        assert!((e.values[1].re + 13f64.sqrt()).abs() < 1e-12);
        assert_eq!(eigenenergies(1, &params(0.0, 1.0)).unwrap(), (1.0, -1.0));
        assert_eq!(eigenenergies(4, &params(3.0, 2.0)).unwrap(), (5.0, -5.0));
    }

    #[test]
    fn mixing_angle_values() {
        for n in 1..6 {
            assert!((mixing_angle(n, &params(0.0, 1.0)).unwrap() - FRAC_PI_4).abs() < 1e-15);
        }
        assert!(mixing_angle(1, &params(1e9, 1.0)).unwrap() < 1e-9);
        // sqrt((√2-1)/(√2+1)) = √2-1 = tan(π/8)
        assert!((mixing_angle(1, &params(1.0, 1.0)).unwrap() - FRAC_PI_8).abs() < 1e-15);
        let theta = mixing_angle(2, &params(-40.0, 1.0)).unwrap();
        assert!(theta < std::f64::consts::FRAC_PI_2 && theta > 1.5);
    }

    #[test]
    fn resonant_dressed_states() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let p = params(0.0, 1.0);
        let plus = dressed_state(2, DressedSign::Plus, &p).unwrap();
        let minus = dressed_state(2, DressedSign::Minus, &p).unwrap();
        assert!((plus[0] - h).abs() < 1e-15 && (plus[1] - h).abs() < 1e-15);
        assert!((minus[0] + h).abs() < 1e-15 && (minus[1] - h).abs() < 1e-15);
        assert!((plus[0] * minus[0] + plus[1] * minus[1]).abs() < 1e-16);
    }

    proptest! {
        #[test]
        fn dressed_states_diagonalize_block(n in 1usize..30, delta in -5.0f64..5.0, g in 0.05f64..3.0) {
            let p = params(delta, g);
            let h = hamiltonian_block(n, &p).unwrap();
            let (e, _) = eigenenergies(n, &p).unwrap();
            for (sign, energy) in [(DressedSign::Plus, e), (DressedSign::Minus, -e)] {
                let v = dressed_state(n, sign, &p).unwrap();
                let hv = h.matvec(&[c(v[0], 0.0), c(v[1], 0.0)]);
                let res = ((hv[0].re - energy * v[0]).powi(2) + (hv[1].re - energy * v[1]).powi(2)).sqrt();
                prop_assert!(res <= 1e-12 * (1.0 + e));
                prop_assert!((v[0].hypot(v[1]) - 1.0).abs() < 1e-14);
            }
            // Rotation by θ_n brings H_n to diag(E, -E).
            let th = mixing_angle(n, &p).unwrap();
            let (s, co) = th.sin_cos();
            let rot = CMat::from_real_rows(&[&[co, -s], &[s, co]]);
            let d = rot.transpose().matmul(&h).matmul(&rot);
            let want = CMat::from_real_rows(&[&[e, 0.0], &[0.0, -e]]);
            prop_assert!(d.max_abs_diff(&want) <= 1e-12 * (1.0 + e));
            prop_assert!((0.0..std::f64::consts::FRAC_PI_2).contains(&th));
        }

        #[test]
        fn numerical_spectrum_matches_energies(n in 1usize..20, delta in -3.0f64..3.0, g in 0.1f64..2.0) {
            let p = params(delta, g);
            let ev = eig_general(&hamiltonian_block(n, &p).unwrap()).unwrap();
            let (e, _) = eigenenergies(n, &p).unwrap();
            prop_assert!((ev.values[0].re - e).abs() < 1e-12 * (1.0 + e));
            prop_assert!((ev.values[1].re + e).abs() < 1e-12 * (1.0 + e));
        }
    }
}
