//! Dense complex linear algebra for the tiny matrices that appear in the
//! block Liouvillian (dimension at most 4), plus the handful of arbitrary
//! dimension routines the brute-force oracle needs (products, Kronecker
//! products, exponentials and Hermitian spectra).
//!
//! Eigenvalues of the small matrices come from the characteristic
//! polynomial (Faddeev-LeVerrier coefficients, Aberth-Ehrlich roots) and are
//! then polished on the matrix itself with a two-sided Rayleigh quotient.
//! Eigenvectors are null vectors of `M - λI` obtained by Gaussian
//! elimination with complete pivoting.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Largest dimension handled by [`eig_general`].
pub const MAX_SMALL_DIM: usize = 4;

/// Two eigenvalues closer than `DEGENERACY_RTOL * (1 + |M|)` are treated as
/// coincident.
pub const DEGENERACY_RTOL: f64 = 1e-8;

/// Eigenvector matrices with a Frobenius condition estimate above this are
/// flagged degenerate: the pair is numerically a split exceptional point.
pub const CONDITION_LIMIT: f64 = 1e7;

/// `expm` refuses arguments whose 1-norm exceeds this bound.
pub const EXPM_MAX_NORM: f64 = 1e6;

/// Pivots below `SINGULAR_RTOL * |M|_1` make [`solve`] fail.
pub const SINGULAR_RTOL: f64 = 1e-12;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Dense complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMat {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::DimensionMismatch {
                expected: format!("{} entries", rows * cols),
                found: format!("{} entries", data.len()),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from nested rows. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let r = rows.len();
        let cc = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == cc), "ragged rows");
        Self {
            rows: r,
            cols: cc,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn diag(values: &[C64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "matvec shape mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Row vector times matrix.
    pub fn vecmat(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.rows, v.len(), "vecmat shape mismatch");
        let mut out = vec![C64::new(0.0, 0.0); self.cols];
        for (i, vi) in v.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += vi * a;
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (r, cc) = (self.rows * other.rows, self.cols * other.cols);
        Self::from_fn(r, cc, |i, j| {
            self[(i / other.rows, j / other.cols)] * other[(i % other.rows, j % other.cols)]
        })
    }

    pub fn determinant(&self) -> Result<C64> {
        self.require_square()?;
        let n = self.rows;
        let mut a = self.clone();
        let mut det = C64::new(1.0, 0.0);
        for k in 0..n {
            let p = (k..n)
                .max_by(|&x, &y| a[(x, k)].norm().total_cmp(&a[(y, k)].norm()))
                .unwrap_or(k);
            if a[(p, k)].norm() == 0.0 {
                return Ok(C64::new(0.0, 0.0));
            }
            if p != k {
                a.swap_rows(p, k);
                det = -det;
            }
            let piv = a[(k, k)];
            det *= piv;
            for i in k + 1..n {
                let f = a[(i, k)] / piv;
                for j in k..n {
                    let akj = a[(k, j)];
                    a[(i, j)] -= f * akj;
                }
            }
        }
        Ok(det)
    }

    /// Largest deviation from Hermiticity, `max |M_ij - conj(M_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:>11.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

pub fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigenvalues with matching right (column) and left (row) eigenvectors.
///
/// When `degenerate` is false the left vectors are scaled so that
/// `left[i] · right[j] = δ_ij`; right vectors have unit 2-norm.
#[derive(Debug, Clone)]
pub struct EigSystem {
    pub values: Vec<C64>,
    pub right: Vec<Vec<C64>>,
    pub left: Vec<Vec<C64>>,
    pub degenerate: bool,
    /// Frobenius condition estimate of the right eigenvector matrix.
    pub condition: f64,
}

/// Sort permutation for eigenvalues: descending real part, ties (real parts
/// within `tol`) broken by ascending imaginary part.
pub fn eigen_order(values: &[C64], tol: f64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[b].re.total_cmp(&values[a].re));
    let mut out = Vec::with_capacity(idx.len());
    let mut start = 0;
    while start < idx.len() {
        let mut end = start + 1;
        while end < idx.len() && (values[idx[end - 1]].re - values[idx[end]].re).abs() <= tol {
            end += 1;
        }
        let mut group = idx[start..end].to_vec();
        group.sort_by(|&a, &b| values[a].im.total_cmp(&values[b].im));
        out.extend(group);
        start = end;
    }
    out
}

/// Monic characteristic polynomial coefficients `[1, c1, ..., cd]` with
/// `det(λI - M) = λ^d + c1 λ^{d-1} + ... + cd`.
pub fn characteristic_polynomial(m: &CMat) -> Result<Vec<C64>> {
    m.require_square()?;
    let d = m.rows();
    let mut coeffs = vec![C64::new(1.0, 0.0)];
    let mut nk = CMat::zeros(d, d);
    for k in 1..=d {
        let shifted = nk.add(&CMat::identity(d).scale(coeffs[k - 1]));
        nk = m.matmul(&shifted);
        coeffs.push(-nk.trace() / k as f64);
    }
    Ok(coeffs)
}

fn horner(coeffs: &[C64], z: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for &a in coeffs {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// Roots of a monic polynomial by Aberth-Ehrlich simultaneous iteration.
pub fn polynomial_roots(coeffs: &[C64]) -> Vec<C64> {
    let d = coeffs.len().saturating_sub(1);
    if d == 0 {
        return Vec::new();
    }
    if d == 1 {
        return vec![-coeffs[1]];
    }
    let radius = coeffs[1..]
        .iter()
        .enumerate()
        .map(|(k, a)| a.norm().powf(1.0 / (k + 1) as f64))
        .fold(0.0, f64::max)
        .max(1e-3);
    let mut z: Vec<C64> = (0..d)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * k as f64 / d as f64 + 0.4;
            C64::from_polar(radius, ang)
        })
        .collect();
    for _ in 0..2000 {
        let mut max_step: f64 = 0.0;
        for k in 0..d {
            let (p, dp) = horner(coeffs, z[k]);
            if p == C64::new(0.0, 0.0) {
                continue;
            }
            let ratio = if dp.norm() > 0.0 {
                p / dp
            } else {
                p / C64::new(f64::EPSILON, 0.0)
            };
            let s: C64 = (0..d)
                .filter(|&j| j != k)
                .map(|j| {
                    let diff = z[k] - z[j];
                    if diff.norm() > 0.0 {
                        diff.inv()
                    } else {
                        C64::new(0.0, 0.0)
                    }
                })
                .sum();
            let denom = C64::new(1.0, 0.0) - ratio * s;
            let step = if denom.norm() > 0.0 {
                ratio / denom
            } else {
                ratio
            };
            if step.re.is_finite() && step.im.is_finite() {
                z[k] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[k].norm()));
            }
        }
        if max_step < 1e-16 {
            break;
        }
    }
    z
}

/// Gaussian elimination with complete pivoting; returns a unit-norm vector
/// spanning (numerically) the null space of a rank-deficient square matrix.
/// For a full-rank input it returns the right singular-ish direction of the
/// smallest pivot, which is what inverse iteration would converge to.
pub fn null_vector(a: &CMat) -> Vec<C64> {
    let n = a.rows();
    debug_assert!(a.is_square());
    let mut u = a.clone();
    let mut colperm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let (mut pi, mut pj, mut best) = (k, k, -1.0);
        for i in k..n {
            for j in k..n {
                let v = u[(i, j)].norm();
                if v > best {
                    best = v;
                    pi = i;
                    pj = j;
                }
            }
        }
        u.swap_rows(k, pi);
        if pj != k {
            for i in 0..n {
                u.data.swap(i * n + k, i * n + pj);
            }
            colperm.swap(k, pj);
        }
        let piv = u[(k, k)];
        if piv.norm() == 0.0 {
            continue;
        }
        for i in k + 1..n {
            let f = u[(i, k)] / piv;
            if f == C64::new(0.0, 0.0) {
                continue;
            }
            for j in k..n {
                let ukj = u[(k, j)];
                u[(i, j)] -= f * ukj;
            }
        }
    }
    // The last pivot is the smallest; make its variable free.
    let mut y = vec![C64::new(0.0, 0.0); n];
    y[n - 1] = C64::new(1.0, 0.0);
    for k in (0..n - 1).rev() {
        let s: C64 = (k + 1..n).map(|j| u[(k, j)] * y[j]).sum();
        let piv = u[(k, k)];
        y[k] = if piv.norm() > 0.0 {
            -s / piv
        } else {
            C64::new(0.0, 0.0)
        };
    }
    let mut x = vec![C64::new(0.0, 0.0); n];
    for (k, &p) in colperm.iter().enumerate() {
        x[p] = y[k];
    }
    let nrm = vec_norm(&x);
    x.iter_mut().for_each(|z| *z /= nrm);
    x
}

fn shifted(m: &CMat, lambda: C64) -> CMat {
    let mut a = m.clone();
    for i in 0..a.rows() {
        a[(i, i)] -= lambda;
    }
    a
}

/// Eigen-decomposition of a square complex matrix of dimension 1..=4.
pub fn eig_general(m: &CMat) -> Result<EigSystem> {
    m.require_square()?;
    let d = m.rows();
    if d == 0 || d > MAX_SMALL_DIM {
        return Err(Error::UnsupportedDimension(d));
    }
    let scale = 1.0 + m.norm_1();
    let mut values = polynomial_roots(&characteristic_polynomial(m)?);

    // Polish each root against the matrix with a two-sided Rayleigh quotient.
    for i in 0..d {
        let sep = (0..d)
            .filter(|&j| j != i)
            .map(|j| (values[i] - values[j]).norm())
            .fold(f64::INFINITY, f64::min);
        for _ in 0..3 {
            let a = shifted(m, values[i]);
            let r = null_vector(&a);
            let l = null_vector(&a.transpose());
            let denom = dot(&l, &r);
            if denom.norm() < 1e-12 {
                break;
            }
            let candidate = dot(&l, &m.matvec(&r)) / denom;
            let step = (candidate - values[i]).norm();
            if !(step < 0.5 * sep) {
                break;
            }
            values[i] = candidate;
            if step <= 1e-16 * scale {
                break;
            }
        }
    }

    let order = eigen_order(&values, DEGENERACY_RTOL * scale);
    let values: Vec<C64> = order.iter().map(|&i| values[i]).collect();

    let mut degenerate = false;
    for i in 0..d {
        for j in i + 1..d {
            if (values[i] - values[j]).norm() < DEGENERACY_RTOL * scale {
                degenerate = true;
            }
        }
    }

    let mut right = Vec::with_capacity(d);
    let mut left = Vec::with_capacity(d);
    for &lambda in &values {
        let a = shifted(m, lambda);
        let r = null_vector(&a);
        let mut l = null_vector(&a.transpose());
        let overlap = dot(&l, &r);
        if overlap.norm() > 1e-14 {
            l.iter_mut().for_each(|z| *z /= overlap);
        } else {
            degenerate = true;
        }
        right.push(r);
        left.push(l);
    }

    let rmat = CMat::from_fn(d, d, |i, j| right[j][i]);
    let condition = match inverse(&rmat) {
        Ok(inv) => rmat.norm_fro() * inv.norm_fro(),
        Err(_) => f64::INFINITY,
    };
    if !(condition < CONDITION_LIMIT) {
        degenerate = true;
    }

    Ok(EigSystem {
        values,
        right,
        left,
        degenerate,
        condition,
    })
}

/// LU solve with partial pivoting.
pub fn solve(m: &CMat, b: &[C64]) -> Result<Vec<C64>> {
    m.require_square()?;
    let n = m.rows();
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: format!("rhs of length {n}"),
            found: format!("length {}", b.len()),
        });
    }
    let threshold = SINGULAR_RTOL * m.norm_1();
    let mut a = m.clone();
    let mut x = b.to_vec();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[(i, k)].norm().total_cmp(&a[(j, k)].norm()))
            .unwrap_or(k);
        let pivot = a[(p, k)].norm();
        if pivot <= threshold || pivot == 0.0 {
            return Err(Error::SingularMatrix { pivot, threshold });
        }
        a.swap_rows(p, k);
        x.swap(p, k);
        let piv = a[(k, k)];
        for i in k + 1..n {
            let f = a[(i, k)] / piv;
            if f == C64::new(0.0, 0.0) {
                continue;
            }
            for j in k..n {
                let akj = a[(k, j)];
                a[(i, j)] -= f * akj;
            }
            let xk = x[k];
            x[i] -= f * xk;
        }
    }
    for k in (0..n).rev() {
        let s: C64 = (k + 1..n).map(|j| a[(k, j)] * x[j]).sum();
        x[k] = (x[k] - s) / a[(k, k)];
    }
    Ok(x)
}

pub fn inverse(m: &CMat) -> Result<CMat> {
    m.require_square()?;
    let n = m.rows();
    let mut out = CMat::zeros(n, n);
    for j in 0..n {
        let mut e = vec![C64::new(0.0, 0.0); n];
        e[j] = C64::new(1.0, 0.0);
        let col = solve(m, &e)?;
        for i in 0..n {
            out[(i, j)] = col[i];
        }
    }
    Ok(out)
}

/// `exp(M t)` by scaling and squaring around a truncated Taylor series.
///
/// Works for any dimension, including defective (non-diagonalizable)
/// matrices. Fails with [`Error::ExpmOverflow`] when `|M t|_1` exceeds
/// [`EXPM_MAX_NORM`] or the result is not finite.
pub fn expm(m: &CMat, t: f64) -> Result<CMat> {
    m.require_square()?;
    if !t.is_finite() {
        return Err(Error::PreconditionViolated(
            "expm time must be finite".into(),
        ));
    }
    let n = m.rows();
    let a = m.scale_re(t);
    let norm = a.norm_1();
    if !(norm <= EXPM_MAX_NORM) {
        return Err(Error::ExpmOverflow {
            norm,
            limit: EXPM_MAX_NORM,
        });
    }
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let b = a.scale_re(0.5f64.powi(squarings));
    let mut result = CMat::identity(n);
    let mut term = CMat::identity(n);
    for k in 1..=24 {
        term = term.matmul(&b).scale_re(1.0 / k as f64);
        result = result.add(&term);
        if term.max_abs() <= 1e-18 * result.max_abs() {
            break;
        }
    }
    for _ in 0..squarings {
        result = result.matmul(&result);
    }
    if result
        .as_slice()
        .iter()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(Error::ExpmOverflow {
            norm,
            limit: EXPM_MAX_NORM,
        });
    }
    Ok(result)
}

/// Eigenvalues (ascending) of a Hermitian matrix of any dimension.
///
/// The Hermitian `A + iB` is embedded as the real symmetric
/// `[[A, -B], [B, A]]`, whose spectrum is that of the original with every
/// eigenvalue doubled; cyclic Jacobi rotations diagonalize the embedding.
pub fn hermitian_eigenvalues(m: &CMat) -> Result<Vec<f64>> {
    m.require_square()?;
    let n = m.rows();
    let dim = 2 * n;
    let mut s = vec![0.0f64; dim * dim];
    for i in 0..n {
        for j in 0..n {
            // Symmetrize so tiny Hermiticity defects do not bias the result.
            let z = 0.5 * (m[(i, j)] + m[(j, i)].conj());
            s[i * dim + j] = z.re;
            s[(i + n) * dim + (j + n)] = z.re;
            s[i * dim + (j + n)] = -z.im;
            s[(i + n) * dim + j] = z.im;
        }
    }
    let total: f64 = s.iter().map(|x| x * x).sum::<f64>().sqrt();
    for _sweep in 0..100 {
        let off: f64 = (0..dim)
            .flat_map(|i| (0..dim).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| s[i * dim + j].powi(2))
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * total.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..dim {
            for q in p + 1..dim {
                let apq = s[p * dim + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = s[p * dim + p];
                let aqq = s[q * dim + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                for k in 0..dim {
                    let akp = s[k * dim + p];
                    let akq = s[k * dim + q];
                    s[k * dim + p] = cs * akp - sn * akq;
                    s[k * dim + q] = sn * akp + cs * akq;
                }
                for k in 0..dim {
                    let apk = s[p * dim + k];
                    let aqk = s[q * dim + k];
                    s[p * dim + k] = cs * apk - sn * aqk;
                    s[q * dim + k] = sn * apk + cs * aqk;
                }
            }
        }
    }
    let mut diag: Vec<f64> = (0..dim).map(|i| s[i * dim + i]).collect();
    diag.sort_by(f64::total_cmp);
    Ok(diag.into_iter().step_by(2).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut impl Rng, d: usize) -> CMat {
        CMat::from_fn(d, d, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    }

    fn check_pairs(m: &CMat, e: &EigSystem, tol: f64) {
        let scale = m.norm_1().max(1.0);
        for (k, lam) in e.values.iter().enumerate() {
            let mr = m.matvec(&e.right[k]);
            let res_r: f64 = vec_norm(
                &mr.iter()
                    .zip(&e.right[k])
                    .map(|(a, b)| a - lam * b)
                    .collect::<Vec<_>>(),
            );
            let lm = m.vecmat(&e.left[k]);
            let res_l: f64 = vec_norm(
                &lm.iter()
                    .zip(&e.left[k])
                    .map(|(a, b)| a - lam * b)
                    .collect::<Vec<_>>(),
            ) / vec_norm(&e.left[k]);
            assert!(res_r <= tol * scale, "right residual {res_r}");
            assert!(res_l <= tol * scale, "left residual {res_l}");
        }
    }

    #[test]
    fn exchange_matrix() {
        let m = CMat::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let e = eig_general(&m).unwrap();
        assert!(!e.degenerate);
        assert_abs_diff_eq!(e.values[0].re, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.values[1].re, -1.0, epsilon = 1e-14);
        check_pairs(&m, &e, 1e-12);
    }

    #[test]
    fn diagonal_input_gives_standard_basis() {
        let m = CMat::diag(&[c(3.0, 0.0), c(1.0, 2.0)]);
        let e = eig_general(&m).unwrap();
        assert!((e.values[0] - c(3.0, 0.0)).norm() < 1e-14);
        assert!((e.values[1] - c(1.0, 2.0)).norm() < 1e-14);
        assert!((e.right[0][0].norm() - 1.0).abs() < 1e-14 && e.right[0][1].norm() < 1e-14);
        assert!((e.left[1][1] * e.right[1][1] - 1.0).norm() < 1e-14);
        assert!(e.left[1][0].norm() < 1e-14);
    }

    #[test]
    fn printed_block_example() {
        // Dissipative block at n=m=1, rates 0.2/0.4, entered by hand.
        let i = c(0.0, 1.0);
        let r = |x: f64| c(x, 0.0);
        let m = CMat::from_rows(&[
            vec![r(-0.2), i, -i, r(0.4)],
            vec![i, r(-0.3), r(0.0), -i],
            vec![-i, r(0.0), r(-0.3), i],
            vec![r(0.2), -i, i, r(-0.4)],
        ]);
        let e = eig_general(&m).unwrap();
        assert!(!e.degenerate);
        // Frozen from the roots of the characteristic polynomial
        // λ(λ+0.3)(λ² + 0.9λ + 4.18): λ = -0.45 ± i·sqrt(3.9775).
        let w = 3.9775f64.sqrt();
        let expected = [c(0.0, 0.0), c(-0.3, 0.0), c(-0.45, -w), c(-0.45, w)];
        for (got, want) in e.values.iter().zip(expected) {
            assert!((got - want).norm() < 1e-12, "{got} vs {want}");
        }
        assert!((w - 1.99437).abs() < 1e-5);
        check_pairs(&m, &e, 1e-12);
    }

    #[test]
    fn jordan_block_is_degenerate() {
        let m = CMat::from_real_rows(&[&[-1.0, 1.0], &[0.0, -1.0]]);
        assert!(eig_general(&m).unwrap().degenerate);
    }

    #[test]
    fn too_large_dimension_rejected() {
        assert_eq!(
            eig_general(&CMat::identity(5)).unwrap_err(),
            Error::UnsupportedDimension(5)
        );
    }

    #[test]
    fn random_matrices_satisfy_trace_det_and_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in 1..=4 {
            for _ in 0..200 {
                let m = random_matrix(&mut rng, d);
                let e = eig_general(&m).unwrap();
                if e.degenerate {
                    continue;
                }
                check_pairs(&m, &e, 1e-10);
                let sum: C64 = e.values.iter().sum();
                assert!((sum - m.trace()).norm() < 1e-9);
                let prod: C64 = e.values.iter().product();
                let det = m.determinant().unwrap();
                assert!((prod - det).norm() <= 1e-8 * det.norm().max(1e-3));
                let mut rec = CMat::zeros(d, d);
                for k in 0..d {
                    rec = rec.add(&CMat::from_fn(d, d, |i, j| {
                        e.values[k] * e.right[k][i] * e.left[k][j]
                    }));
                }
                assert!(rec.max_abs_diff(&m) < 1e-8);
                for i in 0..d {
                    for j in 0..d {
                        let want = if i == j { 1.0 } else { 0.0 };
                        assert!((dot(&e.left[i], &e.right[j]) - want).norm() < 1e-8);
                    }
                }
            }
        }
    }

    #[test]
    fn eigenvalues_follow_sort_key() {
        let m = CMat::diag(&[c(-1.0, 2.0), c(0.5, 0.0), c(-1.0, -2.0), c(-3.0, 0.0)]);
        let e = eig_general(&m).unwrap();
        let want = [c(0.5, 0.0), c(-1.0, -2.0), c(-1.0, 2.0), c(-3.0, 0.0)];
        for (g, w) in e.values.iter().zip(want) {
            assert!((g - w).norm() < 1e-12);
        }
    }

    #[test]
    fn solve_examples() {
        let b = vec![c(1.0, 2.0), c(-3.0, 0.5)];
        assert_eq!(solve(&CMat::identity(2), &b).unwrap(), b);
        let m = CMat::from_real_rows(&[&[2.0, 0.0], &[0.0, 4.0]]);
        let x = solve(&m, &[c(2.0, 0.0), c(4.0, 0.0)]).unwrap();
        assert!((x[0] - 1.0).norm() < 1e-15 && (x[1] - 1.0).norm() < 1e-15);
    }

    #[test]
    fn solve_residual_on_random_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let m = random_matrix(&mut rng, 4).add(&CMat::identity(4).scale_re(3.0));
            let b: Vec<C64> = (0..4).map(|_| c(rng.gen(), rng.gen())).collect();
            let x = solve(&m, &b).unwrap();
            let r = m.matvec(&x);
            let res = vec_norm(&r.iter().zip(&b).map(|(a, b)| a - b).collect::<Vec<_>>());
            assert!(res <= 1e-10 * (m.norm_fro() * vec_norm(&x) + vec_norm(&b)));
        }
    }

    #[test]
    fn solve_rejects_singular() {
        let m = CMat::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert!(matches!(
            solve(&m, &[c(1.0, 0.0), c(0.0, 0.0)]),
            Err(Error::SingularMatrix { .. })
        ));
    }

    #[test]
    fn expm_basics() {
        let m = CMat::from_real_rows(&[&[0.3, -2.0], &[1.0, 0.1]]);
        assert!(expm(&m, 0.0).unwrap().max_abs_diff(&CMat::identity(2)) == 0.0);
        let d = CMat::diag(&[c(-1.0, 0.0), c(-2.0, 0.0)]);
        let e = expm(&d, 1.0).unwrap();
        assert!((e[(0, 0)].re - (-1.0f64).exp()).abs() < 1e-15);
        assert!((e[(1, 1)].re - (-2.0f64).exp()).abs() < 1e-15);
        assert!(e[(0, 1)].norm() == 0.0);
    }

    #[test]
    fn expm_of_jordan_block() {
        // exp([[a,1],[0,a]] t) = e^{at} [[1,t],[0,1]]
        let m = CMat::from_real_rows(&[&[-0.5, 1.0], &[0.0, -0.5]]);
        let e = expm(&m, 3.0).unwrap();
        let s = (-1.5f64).exp();
        assert!((e[(0, 0)].re - s).abs() < 1e-14);
        assert!((e[(0, 1)].re - 3.0 * s).abs() < 1e-14);
    }

    #[test]
    fn expm_overflow_guard() {
        let m = CMat::from_real_rows(&[&[1.0]]);
        assert!(matches!(expm(&m, 2e6), Err(Error::ExpmOverflow { .. })));
        assert!(matches!(expm(&m, 800.0), Err(Error::ExpmOverflow { .. })));
    }

    #[test]
    fn hermitian_spectrum() {
        let i = c(0.0, 1.0);
        let m = CMat::from_rows(&[vec![c(2.0, 0.0), i], vec![-i, c(2.0, 0.0)]]);
        let ev = hermitian_eigenvalues(&m).unwrap();
        assert!((ev[0] - 1.0).abs() < 1e-13 && (ev[1] - 3.0).abs() < 1e-13);
    }

    #[test]
    fn kron_shape_and_entries() {
        let a = CMat::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let k = a.kron(&CMat::identity(2));
        assert_eq!((k.rows(), k.cols()), (4, 4));
        assert_eq!(k[(2, 0)], c(3.0, 0.0));
        assert_eq!(k[(3, 3)], c(4.0, 0.0));
        assert_eq!(k[(2, 1)], c(0.0, 0.0));
    }

    proptest! {
        #[test]
        fn expm_semigroup(seed in 0u64..500, t1 in 0.0f64..2.0, t2 in 0.0f64..2.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_matrix(&mut rng, 4);
            let lhs = expm(&m, t1 + t2).unwrap();
            let rhs = expm(&m, t1).unwrap().matmul(&expm(&m, t2).unwrap());
            prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-10 * lhs.max_abs().max(1.0));
        }

        #[test]
        fn null_vector_of_rank_deficient(seed in 0u64..500) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_matrix(&mut rng, 3);
            let e = eig_general(&m).unwrap();
            let a = shifted(&m, e.values[0]);
            let v = null_vector(&a);
            prop_assert!(vec_norm(&a.matvec(&v)) < 1e-10);
        }
    }
}
