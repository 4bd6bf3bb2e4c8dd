//! Block Liouvillians `ℒ_{n,m}` acting on vectorized density blocks.
//!
//! A density block `ρ_{n,m}` couples sector `n` (rows) to sector `m`
//! (columns). Full blocks are 2x2 with rows/columns ordered
//! (excited atom, ground atom); sector 0 contributes a single ground-atom
//! row or column. Vectorization is row-major, so a full block becomes
//! `[ρ^{11}, ρ^{10}, ρ^{01}, ρ^{00}]`.
//!
//! Two generators are provided:
//!
//! * [`Mode::Printed`] is the closed 4x4 matrix whose eigensystem is known
//!   in closed form. Its dissipative entries use `√(nm)` for every block.
//! * [`Mode::Canonical`] is assembled term by term from `-i[H,ρ]` and the
//!   two Lindblad dissipators restricted to the block. Anticommutator terms
//!   then carry `(n+m)/2` and `(nγ₀+mγ₁)/2`.
//!
//! The two coincide on diagonal blocks `n = m` and differ elsewhere.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{hamiltonian_sector, sector_dim, ModelParams};
use crate::smallmat::{c, CMat, C64};

/// Pair of left and right excitation numbers labelling a density block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BlockIndex {
    pub n: usize,
    pub m: usize,
}

impl BlockIndex {
    pub const fn new(n: usize, m: usize) -> Self {
        Self { n, m }
    }

    pub fn dim_left(&self) -> usize {
        sector_dim(self.n)
    }

    pub fn dim_right(&self) -> usize {
        sector_dim(self.m)
    }

    /// Length of the vectorized block.
    pub fn vec_dim(&self) -> usize {
        self.dim_left() * self.dim_right()
    }

    pub fn transposed(&self) -> Self {
        Self::new(self.m, self.n)
    }

    pub fn is_diagonal(&self) -> bool {
        self.n == self.m
    }
}

impl fmt::Display for BlockIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.n, self.m)
    }
}

/// Atom indices present in sector `n`, in row/column order.
pub fn sector_atoms(n: usize) -> &'static [u8] {
    if n == 0 {
        &[0]
    } else {
        &[1, 0]
    }
}

/// Row/column of atom index `atom` inside sector `n`, if it exists there.
pub fn atom_position(n: usize, atom: u8) -> Option<usize> {
    sector_atoms(n).iter().position(|&a| a == atom)
}

/// One block `ρ_{n,m}` of a density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityBlock {
    index: BlockIndex,
    mat: CMat,
}

impl DensityBlock {
    pub fn new(index: BlockIndex, mat: CMat) -> Result<Self> {
        if mat.rows() != index.dim_left() || mat.cols() != index.dim_right() {
            return Err(Error::DimensionMismatch {
                expected: format!(
                    "{}x{} for block {index}",
                    index.dim_left(),
                    index.dim_right()
                ),
                found: format!("{}x{}", mat.rows(), mat.cols()),
            });
        }
        Ok(Self { index, mat })
    }

    pub fn zeros(index: BlockIndex) -> Self {
        Self {
            index,
            mat: CMat::zeros(index.dim_left(), index.dim_right()),
        }
    }

    pub fn index(&self) -> BlockIndex {
        self.index
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn into_matrix(self) -> CMat {
        self.mat
    }

    /// Element `ρ^{j,k}_{n,m}`; zero when the atom index does not exist in
    /// the sector.
    pub fn entry(&self, j: u8, k: u8) -> C64 {
        match (
            atom_position(self.index.n, j),
            atom_position(self.index.m, k),
        ) {
            (Some(a), Some(b)) => self.mat[(a, b)],
            _ => c(0.0, 0.0),
        }
    }

    pub fn set_entry(&mut self, j: u8, k: u8, value: C64) -> Result<()> {
        match (
            atom_position(self.index.n, j),
            atom_position(self.index.m, k),
        ) {
            (Some(a), Some(b)) => {
                self.mat[(a, b)] = value;
                Ok(())
            }
            _ => Err(Error::InvalidState(format!(
                "atom indices ({j},{k}) do not exist in block {}",
                self.index
            ))),
        }
    }

    /// Conjugate transpose, which lives at the transposed index.
    pub fn adjoint(&self) -> Self {
        Self {
            index: self.index.transposed(),
            mat: self.mat.adjoint(),
        }
    }

    /// `Tr ρ` over the diagonal atom positions present in the block.
    pub fn trace(&self) -> C64 {
        crate::smallmat::dot(&block_trace_vector(self.index), &vectorize(self))
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            index: self.index,
            mat: self.mat.scale(s),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.index != other.index {
            return Err(Error::DimensionMismatch {
                expected: format!("block {}", self.index),
                found: format!("block {}", other.index),
            });
        }
        Ok(Self {
            index: self.index,
            mat: self.mat.add(&other.mat),
        })
    }
}

/// Row-major flattening of a block.
pub fn vectorize(block: &DensityBlock) -> Vec<C64> {
    block.mat.as_slice().to_vec()
}

pub fn devectorize(v: &[C64], index: BlockIndex) -> Result<DensityBlock> {
    if v.len() != index.vec_dim() {
        return Err(Error::DimensionMismatch {
            expected: format!("vector of length {} for block {index}", index.vec_dim()),
            found: format!("length {}", v.len()),
        });
    }
    let mat = CMat::new(index.dim_left(), index.dim_right(), v.to_vec())?;
    DensityBlock::new(index, mat)
}

/// Row vector `t` with `t · vectorize(ρ) = Σ_j ρ^{j,j}` over the atom
/// indices present on both sides.
pub fn block_trace_vector(index: BlockIndex) -> Vec<C64> {
    let mut out = Vec::with_capacity(index.vec_dim());
    for &j in sector_atoms(index.n) {
        for &k in sector_atoms(index.m) {
            out.push(c(if j == k { 1.0 } else { 0.0 }, 0.0));
        }
    }
    out
}

/// Which block generator to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Printed,
    Canonical,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Printed => "printed",
            Mode::Canonical => "canonical",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "printed" => Ok(Mode::Printed),
            "canonical" => Ok(Mode::Canonical),
            other => Err(Error::Parse(format!("unknown mode '{other}'"))),
        }
    }
}

/// Sign convention for the combined rate in the printed generator.
///
/// Only [`GammaConvention::Sum`] is physically consistent; the difference
/// form exists so validation can demonstrate that it breaks the trace
/// identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum GammaConvention {
    /// γ̃ = γ₀ + γ₁
    #[default]
    Sum,
    /// γ̃ = γ₁ - γ₀
    Difference,
}

impl GammaConvention {
    pub fn gamma_tilde(self, p: &ModelParams) -> f64 {
        match self {
            GammaConvention::Sum => p.gamma0 + p.gamma1,
            GammaConvention::Difference => p.gamma1 - p.gamma0,
        }
    }
}

/// A block generator together with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct LiouvillianBlock {
    pub index: BlockIndex,
    pub mode: Mode,
    pub matrix: CMat,
}

impl LiouvillianBlock {
    /// `ℒ` applied to a density block of the same index.
    pub fn apply(&self, block: &DensityBlock) -> Result<DensityBlock> {
        if block.index() != self.index {
            return Err(Error::DimensionMismatch {
                expected: format!("block {}", self.index),
                found: format!("block {}", block.index()),
            });
        }
        devectorize(&self.matrix.matvec(&vectorize(block)), self.index)
    }

    /// `|t · ℒ|_∞` for the block trace functional `t`.
    pub fn trace_defect(&self) -> f64 {
        self.matrix
            .vecmat(&block_trace_vector(self.index))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

pub fn liouvillian_block(index: BlockIndex, p: &ModelParams, mode: Mode) -> LiouvillianBlock {
    liouvillian_block_with(index, p, mode, GammaConvention::Sum)
}

/// Like [`liouvillian_block`] with an explicit γ̃ convention (printed mode
/// only; canonical mode never uses γ̃).
pub fn liouvillian_block_with(
    index: BlockIndex,
    p: &ModelParams,
    mode: Mode,
    convention: GammaConvention,
) -> LiouvillianBlock {
    let matrix = match mode {
        Mode::Printed => printed_matrix(index, p, convention),
        Mode::Canonical => canonical_matrix(index, p),
    };
    LiouvillianBlock {
        index,
        mode,
        matrix,
    }
}

/// Full-vector position of `ρ^{j,k}` in `[ρ^{11}, ρ^{10}, ρ^{01}, ρ^{00}]`.
fn full_position(j: u8, k: u8) -> usize {
    (1 - j as usize) * 2 + (1 - k as usize)
}

fn printed_matrix(index: BlockIndex, p: &ModelParams, convention: GammaConvention) -> CMat {
    let (n, m) = (index.n as f64, index.m as f64);
    let (sn, sm) = (n.sqrt(), m.sqrt());
    let smn = (m * n).sqrt();
    let gt = convention.gamma_tilde(p);
    let (g0, g1, g, d) = (p.gamma0, p.gamma1, p.g, p.delta);
    let r = |x: f64| c(x, 0.0);
    let i = |x: f64| c(0.0, x);
    let full = CMat::from_rows(&[
        vec![r(-smn * g0), i(g * sm), i(-g * sn), r(smn * g1)],
        vec![i(g * sm), c(-0.5 * smn * gt, -2.0 * d), r(0.0), i(-g * sn)],
        vec![i(-g * sn), r(0.0), c(-0.5 * smn * gt, 2.0 * d), i(g * sm)],
        vec![r(smn * g0), i(-g * sn), i(g * sm), r(-smn * g1)],
    ]);
    let keep: Vec<usize> = sector_atoms(index.n)
        .iter()
        .flat_map(|&j| {
            sector_atoms(index.m)
                .iter()
                .map(move |&k| full_position(j, k))
        })
        .collect();
    CMat::from_fn(keep.len(), keep.len(), |a, b| full[(keep[a], keep[b])])
}

/// `a† σ₋` restricted to sector `n`: `|n-1,1⟩ → √n |n,0⟩`.
fn sector_lowering_jump(n: usize) -> CMat {
    if n == 0 {
        return CMat::zeros(1, 1);
    }
    let mut j = CMat::zeros(2, 2);
    j[(1, 0)] = c((n as f64).sqrt(), 0.0);
    j
}

/// `a σ₊` restricted to sector `n`: `|n,0⟩ → √n |n-1,1⟩`.
fn sector_raising_jump(n: usize) -> CMat {
    if n == 0 {
        return CMat::zeros(1, 1);
    }
    let mut j = CMat::zeros(2, 2);
    j[(0, 1)] = c((n as f64).sqrt(), 0.0);
    j
}

fn canonical_matrix(index: BlockIndex, p: &ModelParams) -> CMat {
    let (n, m) = (index.n, index.m);
    let id_l = CMat::identity(index.dim_left());
    let id_r = CMat::identity(index.dim_right());
    let minus_i = c(0.0, -1.0);

    // Row-major vec(A ρ B) = (A ⊗ Bᵀ) vec(ρ).
    let hn = hamiltonian_sector(n, p);
    let hm = hamiltonian_sector(m, p);
    let mut out = hn
        .kron(&id_r)
        .sub(&id_l.kron(&hm.transpose()))
        .scale(minus_i);

    let jumps = [
        (p.gamma0, sector_lowering_jump(n), sector_lowering_jump(m)),
        (p.gamma1, sector_raising_jump(n), sector_raising_jump(m)),
    ];
    for (rate, jn, jm) in jumps {
        if rate == 0.0 {
            continue;
        }
        let sandwich = jn.kron(&jm.conj());
        let kn = jn.adjoint().matmul(&jn);
        let km = jm.adjoint().matmul(&jm);
        let anti = kn.kron(&id_r).add(&id_l.kron(&km.transpose()));
        out = out.add(&sandwich.sub(&anti.scale_re(0.5)).scale_re(rate));
    }
    out
}
