//! Eigensystems of single Liouvillian blocks and spectral propagation.
//!
//! Right eigenmatrices `ρ̂_j` have the shape of the block they act on.
//! Left eigenmatrices `ρ̌_j` are stored so that the biorthonormality
//! relation reads `Tr{ρ̌_j ρ̂_k} = δ_jk`; for a block `(n,m)` they are
//! therefore `dim(m) x dim(n)`, and the corresponding left row vector of
//! `ℒ` is the row-major flattening of `ρ̌_jᵀ`.
//!
//! At zero detuning with unit coupling the printed generator has a closed
//! eigensystem. The closed-form left matrices are written in the row-vector
//! orientation, so they are transposed on the way in, and every left matrix
//! is rescaled so that `Tr{ρ̌_j ρ̂_j} = 1` exactly.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::liouville::{
    devectorize, liouvillian_block, liouvillian_block_with, vectorize, BlockIndex, DensityBlock,
    GammaConvention, LiouvillianBlock, Mode,
};
use crate::model::ModelParams;
use crate::smallmat::{c, dot, eig_general, vec_norm, CMat, C64, DEGENERACY_RTOL};

/// Closed-form denominators smaller than this force the numerical path.
pub const DENOMINATOR_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    ClosedForm,
    Numerical,
}

#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub index: BlockIndex,
    pub mode: Mode,
    /// Closed form: labels 1..4 in order. Numerical: descending real part,
    /// then ascending imaginary part.
    pub eigenvalues: Vec<C64>,
    pub right: Vec<DensityBlock>,
    pub left: Vec<CMat>,
    pub source: Source,
    /// Coinciding eigenvalues or an ill-conditioned eigenbasis. Degenerate
    /// decompositions must not be used for propagation.
    pub degenerate: bool,
}

/// `l_j = (√(nm)/2) γ̃ + λ_j` for the four closed-form eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LValues(pub [C64; 4]);

impl LValues {
    pub fn from_eigenvalues(index: BlockIndex, gamma_tilde: f64, lambdas: &[C64; 4]) -> Self {
        let shift = 0.5 * ((index.n * index.m) as f64).sqrt() * gamma_tilde;
        Self(lambdas.map(|l| l + shift))
    }
}

fn require_closed_domain(index: BlockIndex, p: &ModelParams) -> Result<()> {
    if !p.is_resonant_unit_coupling() {
        return Err(Error::PreconditionViolated(
            "closed-form eigensystem needs delta = 0 and g = 1".into(),
        ));
    }
    if index.n == 0 || index.m == 0 {
        return Err(Error::PreconditionViolated(format!(
            "closed-form eigensystem needs n, m >= 1, got {index}"
        )));
    }
    Ok(())
}

/// Closed-form eigenvalues λ₁..λ₄ of the printed block (principal square
/// roots).
pub fn eigenvalues_closed(index: BlockIndex, p: &ModelParams) -> Result<[C64; 4]> {
    eigenvalues_closed_with(index, p, GammaConvention::Sum)
}

pub fn eigenvalues_closed_with(
    index: BlockIndex,
    p: &ModelParams,
    convention: GammaConvention,
) -> Result<[C64; 4]> {
    require_closed_domain(index, p)?;
    let (n, m) = (index.n as f64, index.m as f64);
    let (sn, sm) = (n.sqrt(), m.sqrt());
    let smn = (m * n).sqrt();
    let gt = convention.gamma_tilde(p);
    let base = m * n * gt * gt / 16.0;
    let outer = c(base - (sm + sn).powi(2), 0.0).sqrt();
    // At m = n the radicand is a perfect square; use it so λ₄ is exactly 0.
    let inner = if index.n == index.m {
        c(0.25 * smn * gt.abs(), 0.0)
    } else {
        c(base - (sm - sn).powi(2), 0.0).sqrt()
    };
    let fast = c(-0.75 * smn * gt, 0.0);
    let slow = c(-0.25 * smn * gt, 0.0);
    Ok([fast - outer, fast + outer, slow - inner, slow + inner])
}

/// Closed-form eigenmatrices, before any renormalization.
#[derive(Debug, Clone)]
pub struct ClosedEigenvectors {
    pub eigenvalues: [C64; 4],
    /// Left matrices in trace orientation (`Tr{ρ̌ ρ̂} = δ` after scaling).
    pub left: [CMat; 4],
    pub right: [CMat; 4],
}

pub(crate) fn checked(label: &str, z: C64) -> Result<C64> {
    if z.norm() < DENOMINATOR_FLOOR {
        Err(Error::FallbackRequired(format!(
            "closed-form denominator {label} = {z:.3e} vanishes"
        )))
    } else {
        Ok(z)
    }
}

fn m2(a: C64, b: C64, cc: C64, d: C64) -> CMat {
    CMat::from_rows(&[vec![a, b], vec![cc, d]])
}

fn spectrum_is_degenerate(values: &[C64], scale: f64) -> bool {
    values.iter().enumerate().any(|(i, a)| {
        values[i + 1..]
            .iter()
            .any(|b| (a - b).norm() < DEGENERACY_RTOL * scale)
    })
}

/// Closed-form left and right eigenmatrices of the printed block.
///
/// The left matrix for λ₂ is the λ₁ ↔ λ₂ counterpart of the λ₁ matrix; for
/// `m = n` the right matrix for λ₄ is replaced by its finite limit.
pub fn eigenvectors_closed(index: BlockIndex, p: &ModelParams) -> Result<ClosedEigenvectors> {
    let lam = eigenvalues_closed(index, p)?;
    let lblock = liouvillian_block(index, p, Mode::Printed);
    if spectrum_is_degenerate(&lam, 1.0 + lblock.matrix.norm_1()) {
        return Err(Error::FallbackRequired(format!(
            "degenerate closed-form spectrum in block {index}"
        )));
    }
    let (n, m) = (index.n as f64, index.m as f64);
    let (sn, sm) = (n.sqrt(), m.sqrt());
    let (g0, g1) = (p.gamma0, p.gamma1);
    let gt = p.gamma_tilde();
    let lv = LValues::from_eigenvalues(index, gt, &lam).0;
    let (l1, l2) = (lv[0], lv[1]);
    let (la3, la4) = (lam[2], lam[3]);
    let i = c(0.0, 1.0);
    let r = |x: f64| c(x, 0.0);
    let plus = r(sm + sn);
    let minus = sm - sn;

    let d1 = checked("l2 (4 + l1 γ̃)", l2 * (4.0 + l1 * gt))?;
    let d2 = checked("l1 (4 + l2 γ̃)", l1 * (4.0 + l2 * gt))?;
    let d34 = checked("λ3 - λ4", la3 - la4)?;
    let d12 = checked("l2 - l1", l2 - l1)?;
    checked("4 + l1 γ̃", 4.0 + l1 * gt)?;
    checked("4 + l2 γ̃", 4.0 + l2 * gt)?;
    let d3 = checked("λ3 (4 - λ4 γ̃)", la3 * (4.0 - la4 * gt))?;

    // Left matrices as written for the row-vector equation ρ̌ ℒ = λ ρ̌.
    let row_left = [
        m2(
            i * (2.0 + g0 * l1) * plus / d1,
            -(m * g0 + n * g1 - 2.0 * l1) / d1,
            (n * g0 + m * g1 - 2.0 * l1) / d1,
            -i * (2.0 + g1 * l1) * plus / d1,
        ),
        m2(
            i * (2.0 + g0 * l2) * plus / d2,
            -(m * g0 + n * g1 - 2.0 * l2) / d2,
            (n * g0 + m * g1 - 2.0 * l2) / d2,
            -i * (2.0 + g1 * l2) * plus / d2,
        ),
        m2(i * minus / d34, la3 / d34, la3 / d34, i * minus / d34),
        m2(la3 / d34, -i * minus / d34, -i * minus / d34, la3 / d34),
    ];

    let right4 = if index.n == index.m {
        let d = 8.0 + n * gt * gt;
        let off = 2.0 * sn * (g0 - g1) / d;
        m2(
            r((4.0 + n * gt * g1) / d),
            -i * off,
            i * off,
            r((4.0 + n * gt * g0) / d),
        )
    } else {
        let d4 = checked("(√m - √n)(4 - λ3 γ̃)", minus * (4.0 - la3 * gt))?;
        let d4b = checked("4 - λ3 γ̃", 4.0 - la3 * gt)?;
        m2(
            (2.0 - g1 * la3) / d4b,
            i * (n * g0 + m * g1 + 2.0 * la3) / d4,
            i * (m * g0 + n * g1 + 2.0 * la3) / d4,
            (2.0 - g0 * la3) / d4b,
        )
    };
    let right = [
        m2(i * plus / d12, -l2 / d12, l2 / d12, -i * plus / d12),
        m2(-l2 / d12, -i * plus / d12, i * plus / d12, l2 / d12),
        m2(
            i * (2.0 - g1 * la4) * minus / d3,
            -(n * g0 + m * g1 + 2.0 * la4) / d3,
            -(m * g0 + n * g1 + 2.0 * la4) / d3,
            i * (2.0 - g0 * la4) * minus / d3,
        ),
        right4,
    ];

    Ok(ClosedEigenvectors {
        eigenvalues: lam,
        left: row_left.map(|mat| mat.transpose()),
        right,
    })
}

/// Left row vector of `ℒ` corresponding to a stored left matrix.
pub fn left_row_vector(left: &CMat) -> Vec<C64> {
    left.transpose().into_vec()
}

fn left_matrix_from_row(row: &[C64], index: BlockIndex) -> CMat {
    CMat::from_fn(index.dim_right(), index.dim_left(), |a, b| {
        row[b * index.dim_right() + a]
    })
}

/// Eigensystem of block `index`, closed form when available.
pub fn spectral_decomposition(
    index: BlockIndex,
    p: &ModelParams,
    mode: Mode,
) -> SpectralDecomposition {
    let lblock = liouvillian_block(index, p, mode);
    let scale = 1.0 + lblock.matrix.norm_1();
    let mut force_degenerate = false;
    if mode == Mode::Printed && require_closed_domain(index, p).is_ok() {
        match eigenvectors_closed(index, p) {
            Ok(closed) => return from_closed(index, closed),
            Err(_) => {
                let lam = eigenvalues_closed(index, p).expect("domain checked");
                force_degenerate = spectrum_is_degenerate(&lam, scale);
            }
        }
    }
    let mut dec = numerical_decomposition(&lblock);
    dec.degenerate |= force_degenerate;
    dec
}

fn from_closed(index: BlockIndex, closed: ClosedEigenvectors) -> SpectralDecomposition {
    let mut right = Vec::with_capacity(4);
    let mut left = Vec::with_capacity(4);
    for (rmat, lmat) in closed.right.into_iter().zip(closed.left) {
        let rb = DensityBlock::new(index, rmat).expect("2x2 block");
        let overlap = dot(&left_row_vector(&lmat), &vectorize(&rb));
        left.push(lmat.scale(overlap.inv()));
        right.push(rb);
    }
    SpectralDecomposition {
        index,
        mode: Mode::Printed,
        eigenvalues: closed.eigenvalues.to_vec(),
        right,
        left,
        source: Source::ClosedForm,
        degenerate: false,
    }
}

/// Numerical eigensystem of an explicit block generator.
pub fn numerical_decomposition(lblock: &LiouvillianBlock) -> SpectralDecomposition {
    let index = lblock.index;
    let eig = eig_general(&lblock.matrix).expect("block generators are at most 4x4");
    let right = eig
        .right
        .iter()
        .map(|v| devectorize(v, index).expect("eigenvector length matches block"))
        .collect();
    let left = eig
        .left
        .iter()
        .map(|row| left_matrix_from_row(row, index))
        .collect();
    SpectralDecomposition {
        index,
        mode: lblock.mode,
        eigenvalues: eig.values,
        right,
        left,
        source: Source::Numerical,
        degenerate: eig.degenerate,
    }
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `c_j = Tr{ρ̌_j ρ₀}`.
    pub fn coefficients(&self, block0: &DensityBlock) -> Result<Vec<C64>> {
        if block0.index() != self.index {
            return Err(Error::DimensionMismatch {
                expected: format!("block {}", self.index),
                found: format!("block {}", block0.index()),
            });
        }
        Ok(self
            .left
            .iter()
            .map(|l| l.matmul(block0.matrix()).trace())
            .collect())
    }

    /// Largest `|Tr{ρ̌_j ρ̂_k} - δ_jk|`.
    pub fn biorthonormality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (j, l) in self.left.iter().enumerate() {
            for (k, r) in self.right.iter().enumerate() {
                let want = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((l.matmul(r.matrix()).trace() - want).norm());
            }
        }
        worst
    }

    /// Largest normalized right and left eigen-residuals against `lblock`,
    /// `|ℒv - λv| / |v|`.
    pub fn residuals(&self, lblock: &LiouvillianBlock) -> (f64, f64) {
        let mut right_max: f64 = 0.0;
        let mut left_max: f64 = 0.0;
        for (k, lam) in self.eigenvalues.iter().enumerate() {
            let v = vectorize(&self.right[k]);
            let lv = lblock.matrix.matvec(&v);
            let res: Vec<C64> = lv.iter().zip(&v).map(|(a, b)| a - lam * b).collect();
            right_max = right_max.max(vec_norm(&res) / vec_norm(&v));
            let w = left_row_vector(&self.left[k]);
            let wl = lblock.matrix.vecmat(&w);
            let res: Vec<C64> = wl.iter().zip(&w).map(|(a, b)| a - lam * b).collect();
            left_max = left_max.max(vec_norm(&res) / vec_norm(&w));
        }
        (right_max, left_max)
    }

    /// Eigenvalue sum, compared against the generator trace in validation.
    pub fn eigenvalue_sum(&self) -> C64 {
        self.eigenvalues.iter().sum()
    }
}

/// `Σ_j c_j e^{λ_j t} ρ̂_j`.
pub fn propagate_block(
    dec: &SpectralDecomposition,
    block0: &DensityBlock,
    t: f64,
) -> Result<DensityBlock> {
    if dec.degenerate {
        return Err(Error::DegenerateBlock {
            n: dec.index.n,
            m: dec.index.m,
        });
    }
    let coeffs = dec.coefficients(block0)?;
    let mut out = CMat::zeros(dec.index.dim_left(), dec.index.dim_right());
    for ((cj, lam), r) in coeffs.iter().zip(&dec.eigenvalues).zip(&dec.right) {
        out = out.add(&r.matrix().scale(cj * (lam * t).exp()));
    }
    DensityBlock::new(dec.index, out)
}

/// Pairs each value in `a` with a distinct value in `b` by repeatedly
/// taking the globally closest remaining pair. Returns `perm` with
/// `a[i] ↔ b[perm[i]]`.
pub fn match_eigenvalues(a: &[C64], b: &[C64]) -> Vec<usize> {
    assert_eq!(a.len(), b.len());
    let mut perm = vec![usize::MAX; a.len()];
    let mut used = vec![false; b.len()];
    for _ in 0..a.len() {
        let mut best = (f64::INFINITY, 0, 0);
        for (i, x) in a.iter().enumerate() {
            if perm[i] != usize::MAX {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !used[j] && (x - y).norm() < best.0 {
                    best = ((x - y).norm(), i, j);
                }
            }
        }
        perm[best.1] = best.2;
        used[best.2] = true;
    }
    perm
}

/// Σλ of the closed form against the trace of the printed block, both
/// built with the same γ̃ convention. Returns `|Σλ - Tr ℒ|`.
pub fn trace_consistency(
    index: BlockIndex,
    p: &ModelParams,
    convention: GammaConvention,
) -> Result<f64> {
    let lam = eigenvalues_closed_with(index, p, convention)?;
    let l = liouvillian_block_with(index, p, Mode::Printed, GammaConvention::Sum);
    let sum: C64 = lam.iter().sum();
    Ok((sum - l.matrix.trace()).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smallmat::expm;
    use proptest::prelude::*;

    fn rates(g0: f64, g1: f64) -> ModelParams {
        ModelParams::resonant(g0, g1).unwrap()
    }

    #[test]
    fn stationary_eigenvalue_is_exactly_zero() {
        for n in 1..8 {
            for (g0, g1) in [(0.0, 0.3), (1.2, 0.0), (0.7, 1.9)] {
                let lam = eigenvalues_closed(BlockIndex::new(n, n), &rates(g0, g1)).unwrap();
                assert_eq!(lam[3], c(0.0, 0.0));
            }
        }
    }

    #[test]
    fn unitary_eigenvalues() {
        let lam = eigenvalues_closed(BlockIndex::new(2, 2), &rates(0.0, 0.0)).unwrap();
        let w = 8f64.sqrt();
        assert!((lam[0] - c(0.0, -w)).norm() < 1e-15);
        assert!((lam[1] - c(0.0, w)).norm() < 1e-15);
        assert_eq!(lam[2], c(0.0, 0.0));
        assert_eq!(lam[3], c(0.0, 0.0));
    }

    #[test]
    fn dissipative_eigenvalues() {
        let lam = eigenvalues_closed(BlockIndex::new(1, 1), &rates(0.2, 0.4)).unwrap();
        let w = 3.9775f64.sqrt();
        assert!((lam[0] - c(-0.45, -w)).norm() < 1e-14);
        assert!((lam[1] - c(-0.45, w)).norm() < 1e-14);
        assert!((lam[2] - c(-0.3, 0.0)).norm() < 1e-14);
        assert_eq!(lam[3], c(0.0, 0.0));
    }

    #[test]
    fn closed_domain_is_enforced() {
        let p = ModelParams::new(0.5, 1.0, 0.1, 0.1).unwrap();
        assert!(matches!(
            eigenvalues_closed(BlockIndex::new(1, 1), &p),
            Err(Error::PreconditionViolated(_))
        ));
        assert!(matches!(
            eigenvalues_closed(BlockIndex::new(0, 1), &rates(0.1, 0.1)),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn stationary_left_is_identity_and_right_has_unit_trace() {
        let p = rates(0.2, 0.4);
        let closed = eigenvectors_closed(BlockIndex::new(1, 1), &p).unwrap();
        assert!(closed.left[3].max_abs_diff(&CMat::identity(2)) < 1e-15);
        let r4 = &closed.right[3];
        // (4 + n γ̃ γ₁)/(8 + n γ̃²) with γ̃ = 0.6, γ₁ = 0.4 and its partners.
        assert!((r4[(0, 0)] - c(4.24 / 8.36, 0.0)).norm() < 1e-15);
        assert!((r4[(0, 0)].re - 0.50718).abs() < 1e-5);
        assert!((r4[(0, 1)] - c(0.0, 0.04785)).norm() < 1e-5);
        assert!((r4[(1, 0)] - c(0.0, -0.04785)).norm() < 1e-5);
        assert!((r4[(1, 1)].re - 0.49282).abs() < 1e-5);
        assert!((r4.trace() - 1.0).norm() < 1e-15);
        let l = liouvillian_block(BlockIndex::new(1, 1), &p, Mode::Printed);
        let lr = l.matrix.matvec(r4.as_slice());
        assert!(vec_norm(&lr) < 1e-15);
    }

    #[test]
    fn closed_form_biorthonormal_off_diagonal() {
        let p = rates(0.3, 0.1);
        let dec = spectral_decomposition(BlockIndex::new(2, 3), &p, Mode::Printed);
        assert_eq!(dec.source, Source::ClosedForm);
        assert!(dec.biorthonormality_defect() < 1e-12);
        let l = liouvillian_block(BlockIndex::new(2, 3), &p, Mode::Printed);
        let (r, lft) = dec.residuals(&l);
        assert!(r < 1e-13 && lft < 1e-13);
    }

    #[test]
    fn dispatch_rules() {
        assert_eq!(
            spectral_decomposition(BlockIndex::new(2, 2), &rates(0.08, 0.0), Mode::Printed).source,
            Source::ClosedForm
        );
        let detuned = ModelParams::new(0.5, 1.0, 0.08, 0.0).unwrap();
        assert_eq!(
            spectral_decomposition(BlockIndex::new(2, 2), &detuned, Mode::Printed).source,
            Source::Numerical
        );
        assert_eq!(
            spectral_decomposition(BlockIndex::new(2, 2), &rates(0.08, 0.0), Mode::Canonical)
                .source,
            Source::Numerical
        );
        assert_eq!(
            spectral_decomposition(BlockIndex::new(0, 2), &rates(0.08, 0.0), Mode::Printed).source,
            Source::Numerical
        );
    }

    #[test]
    fn exceptional_point_is_flagged() {
        // m n γ̃²/16 = (√m + √n)² at n = m = 1 means γ̃ = 8.
        let p = rates(6.0, 2.0);
        let lam = eigenvalues_closed(BlockIndex::new(1, 1), &p).unwrap();
        assert_eq!(lam[0], lam[1]);
        for mode in [Mode::Printed, Mode::Canonical] {
            let dec = spectral_decomposition(BlockIndex::new(1, 1), &p, mode);
            assert!(dec.degenerate, "{mode}");
            let b = DensityBlock::zeros(BlockIndex::new(1, 1));
            assert!(matches!(
                propagate_block(&dec, &b, 1.0),
                Err(Error::DegenerateBlock { .. })
            ));
        }
    }

    #[test]
    fn unitary_double_zero_is_degenerate() {
        let dec = spectral_decomposition(BlockIndex::new(2, 2), &rates(0.0, 0.0), Mode::Printed);
        assert!(dec.degenerate);
    }

    #[test]
    fn long_time_limit_is_stationary_state() {
        let p = rates(0.0, 1.2);
        let idx = BlockIndex::new(2, 2);
        let dec = spectral_decomposition(idx, &p, Mode::Printed);
        let b0 = DensityBlock::new(idx, CMat::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]])).unwrap();
        let late = propagate_block(&dec, &b0, 200.0).unwrap();
        let closed = eigenvectors_closed(idx, &p).unwrap();
        assert!(late.matrix().max_abs_diff(&closed.right[3]) < 1e-12);
    }

    #[test]
    fn dressed_block_matches_expm() {
        let p = rates(0.08, 0.0);
        let idx = BlockIndex::new(2, 2);
        let dec = spectral_decomposition(idx, &p, Mode::Printed);
        let b0 = DensityBlock::new(idx, CMat::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]])).unwrap();
        let spec = propagate_block(&dec, &b0, 5.0).unwrap();
        let l = liouvillian_block(idx, &p, Mode::Printed);
        let v = expm(&l.matrix, 5.0).unwrap().matvec(&vectorize(&b0));
        let direct = devectorize(&v, idx).unwrap();
        assert!(spec.matrix().max_abs_diff(direct.matrix()) < 1e-9);
    }

    #[test]
    fn eigenvalue_matching() {
        let a = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)];
        let b = [c(-1.0, 1e-9), c(1.0, -1e-9), c(0.0, 1.0)];
        assert_eq!(match_eigenvalues(&a, &b), vec![1, 2, 0]);
    }

    #[test]
    fn trace_consistency_pins_gamma_sign() {
        let p = rates(1.2, 0.0);
        let idx = BlockIndex::new(2, 2);
        assert!(trace_consistency(idx, &p, GammaConvention::Sum).unwrap() < 1e-12);
        assert!(trace_consistency(idx, &p, GammaConvention::Difference).unwrap() >= 0.1);
    }

    proptest! {
        #[test]
        fn closed_and_numerical_agree(n in 1usize..7, m in 1usize..7, g0 in 0.0f64..2.0, g1 in 0.0f64..2.0) {
            let p = rates(g0, g1);
            let idx = BlockIndex::new(n, m);
            let closed = spectral_decomposition(idx, &p, Mode::Printed);
            let numeric = numerical_decomposition(&liouvillian_block(idx, &p, Mode::Printed));
            prop_assume!(!closed.degenerate && !numeric.degenerate);
            let perm = match_eigenvalues(&closed.eigenvalues, &numeric.eigenvalues);
            for (i, &j) in perm.iter().enumerate() {
                prop_assert!((closed.eigenvalues[i] - numeric.eigenvalues[j]).norm() < 1e-8);
            }
            let l = liouvillian_block(idx, &p, Mode::Printed);
            let tol = 1e-9 * (1.0 + l.matrix.norm_1());
            for dec in [&closed, &numeric] {
                prop_assert!(dec.biorthonormality_defect() < 1e-9);
                let (r, lft) = dec.residuals(&l);
                prop_assert!(r <= tol && lft <= tol);
            }
            prop_assert!((closed.eigenvalue_sum() - l.matrix.trace()).norm() < 1e-12);
        }

        #[test]
        fn propagation_semigroup(n in 1usize..5, m in 1usize..5, g0 in 0.01f64..2.0, g1 in 0.01f64..2.0,
                                 t1 in 0.0f64..3.0, t2 in 0.0f64..3.0, canonical in any::<bool>(),
                                 seed in proptest::collection::vec(-1.0f64..1.0, 8)) {
            let mode = if canonical { Mode::Canonical } else { Mode::Printed };
            let p = rates(g0, g1);
            let idx = BlockIndex::new(n, m);
            let dec = spectral_decomposition(idx, &p, mode);
            prop_assume!(!dec.degenerate);
            let v: Vec<C64> = (0..4).map(|k| c(seed[2 * k], seed[2 * k + 1])).collect();
            let b0 = devectorize(&v, idx).unwrap();
            let at0 = propagate_block(&dec, &b0, 0.0).unwrap();
            prop_assert!(at0.matrix().max_abs_diff(b0.matrix()) < 1e-10);
            let once = propagate_block(&dec, &b0, t1 + t2).unwrap();
            let twice = propagate_block(&dec, &propagate_block(&dec, &b0, t1).unwrap(), t2).unwrap();
            prop_assert!(once.matrix().max_abs_diff(twice.matrix()) < 1e-9);
        }
    }
}
