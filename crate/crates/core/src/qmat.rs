//! Dense complex linear algebra for qubit (2×2) and qubit-pair (4×4) operators.
//!
//! Two-party operators use the (system ⊗ auxiliary) ordering: basis index
//! `2 * s + a` for system index `s` and auxiliary index `a`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{OttoError, Result};

pub type C64 = Complex64;

/// A qubit state vector.
pub type Ket = [C64; 2];

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-12;
pub const UNITARY_TOL: f64 = 1e-10;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

#[inline]
fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Square complex matrix of dimension 2 or 4, stored row-major in a fixed buffer.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: [C64; 16],
}

impl ComplexMatrix {
    fn check_dim(dim: usize) -> Result<()> {
        match dim {
            2 | 4 => Ok(()),
            other => Err(OttoError::UnsupportedDimension(other)),
        }
    }

    pub(crate) fn zeros_unchecked(dim: usize) -> Self {
        debug_assert!(dim == 2 || dim == 4);
        ComplexMatrix {
            dim,
            data: [ZERO; 16],
        }
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::check_dim(dim)?;
        Ok(Self::zeros_unchecked(dim))
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::check_dim(dim)?;
        Ok(Self::identity_unchecked(dim))
    }

    pub(crate) fn identity_unchecked(dim: usize) -> Self {
        let mut m = Self::zeros_unchecked(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries; `entries.len()` must be 4 or 16.
    pub fn from_entries(entries: &[C64]) -> Result<Self> {
        let dim = match entries.len() {
            4 => 2,
            16 => 4,
            n => {
                return Err(OttoError::InvalidParameter {
                    name: "entries",
                    reason: format!("expected 4 or 16 entries, got {n}"),
                })
            }
        };
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(OttoError::NonFinite);
        }
        let mut m = Self::zeros_unchecked(dim);
        m.data[..entries.len()].copy_from_slice(entries);
        Ok(m)
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        let v: Vec<C64> = entries.iter().map(|&x| c(x, 0.0)).collect();
        Self::from_entries(&v)
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        Self::check_dim(values.len())?;
        let mut m = Self::zeros_unchecked(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = c(v, 0.0);
        }
        Ok(m)
    }

    /// `|ket⟩⟨ket|` for a 2- or 4-component vector.
    pub fn projector(ket: &[C64]) -> Result<Self> {
        Self::outer(ket, ket)
    }

    /// `|ket⟩⟨bra|`.
    pub fn outer(ket: &[C64], bra: &[C64]) -> Result<Self> {
        Self::check_dim(ket.len())?;
        if bra.len() != ket.len() {
            return Err(OttoError::DimensionMismatch {
                expected: ket.len(),
                found: bra.len(),
            });
        }
        let n = ket.len();
        let mut m = Self::zeros_unchecked(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = ket[i] * bra[j].conj();
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.data[..self.dim * self.dim]
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut m = Self::zeros_unchecked(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = self[(j, i)].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, factor: C64) -> Self {
        let mut m = *self;
        m.data.iter_mut().for_each(|z| *z *= factor);
        m
    }

    /// Largest entrywise modulus of `self − other`; infinite on dimension mismatch.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.entries()
            .iter()
            .zip(other.entries())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermiticity_error(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    pub fn is_finite(&self) -> bool {
        self.entries()
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `(M + M†)/2`.
    pub fn hermitian_part(&self) -> Self {
        let adj = self.adjoint();
        let mut m = *self;
        for (z, w) in m.data.iter_mut().zip(adj.data.iter()) {
            *z = (*z + *w) * 0.5;
        }
        m
    }

    /// `U · self · U†`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Self {
        (u * self) * u.adjoint()
    }

    /// Real part of `Tr(self · rho)`, the expectation value for Hermitian operators.
    pub fn expectation(&self, rho: &ComplexMatrix) -> f64 {
        let n = self.dim;
        let mut acc = 0.0;
        for i in 0..n {
            for k in 0..n {
                acc += (self[(i, k)] * rho[(k, i)]).re;
            }
        }
        acc
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let n = self.dim;
        (0..n)
            .map(|i| (0..n).map(|k| self[(i, k)] * v[k]).sum())
            .collect()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (r, col): (usize, usize)) -> &C64 {
        &self.data[r * self.dim + col]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (r, col): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.dim + col]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut m = ComplexMatrix::zeros_unchecked(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    m.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        m
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        #[allow(clippy::op_ref)]
        let out = &self * &rhs;
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix sum dimension mismatch");
        let mut m = *self;
        m.data
            .iter_mut()
            .zip(rhs.data.iter())
            .for_each(|(a, b)| *a += b);
        m
    }
}

impl Add for ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: ComplexMatrix) -> ComplexMatrix {
        #[allow(clippy::op_ref)]
        let out = &self + &rhs;
        out
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix difference dimension mismatch");
        let mut m = *self;
        m.data
            .iter_mut()
            .zip(rhs.data.iter())
            .for_each(|(a, b)| *a -= b);
        m
    }
}

impl Sub for ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: ComplexMatrix) -> ComplexMatrix {
        #[allow(clippy::op_ref)]
        let out = &self - &rhs;
        out
    }
}

impl Mul<f64> for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: f64) -> ComplexMatrix {
        self.scale(c(rhs, 0.0))
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

// ---------------------------------------------------------------------------
// Standard operators and states

pub fn identity2() -> ComplexMatrix {
    ComplexMatrix::identity_unchecked(2)
}

pub fn pauli_x() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros_unchecked(2);
    m[(0, 1)] = ONE;
    m[(1, 0)] = ONE;
    m
}

pub fn pauli_y() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros_unchecked(2);
    m[(0, 1)] = c(0.0, -1.0);
    m[(1, 0)] = c(0.0, 1.0);
    m
}

pub fn pauli_z() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros_unchecked(2);
    m[(0, 0)] = ONE;
    m[(1, 1)] = -ONE;
    m
}

pub fn hadamard() -> ComplexMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = ComplexMatrix::zeros_unchecked(2);
    m[(0, 0)] = c(h, 0.0);
    m[(0, 1)] = c(h, 0.0);
    m[(1, 0)] = c(h, 0.0);
    m[(1, 1)] = c(-h, 0.0);
    m
}

pub fn ket_zero() -> Ket {
    [ONE, ZERO]
}

pub fn ket_one() -> Ket {
    [ZERO, ONE]
}

pub fn ket_plus() -> Ket {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [c(h, 0.0), c(h, 0.0)]
}

pub fn ket_minus() -> Ket {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [c(h, 0.0), c(-h, 0.0)]
}

/// `⟨a|b⟩`.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

// ---------------------------------------------------------------------------
// Validated wrappers

/// Positive semidefinite, unit-trace Hermitian matrix.
#[derive(Clone, Copy, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_finite() {
            return Err(OttoError::NonFinite);
        }
        let herm = matrix.hermiticity_error();
        if herm > HERMITIAN_TOL {
            return Err(OttoError::NotHermitian(herm));
        }
        let tr = matrix.trace();
        if (tr - ONE).norm() > TRACE_TOL {
            return Err(OttoError::InvalidDensityMatrix(format!(
                "trace {:.3e}{:+.3e}i differs from 1",
                tr.re, tr.im
            )));
        }
        let eig = hermitian_eig(&matrix)?;
        if let Some(&lowest) = eig.values.first() {
            if lowest < -PSD_TOL {
                return Err(OttoError::InvalidDensityMatrix(format!(
                    "negative eigenvalue {lowest:.3e}"
                )));
            }
        }
        Ok(DensityMatrix(matrix))
    }

    /// Wraps the output of a trace-preserving completely positive map applied to a
    /// valid state, removing the rounding-level anti-Hermitian part.
    pub(crate) fn from_channel_output(matrix: ComplexMatrix) -> Self {
        DensityMatrix(matrix.hermitian_part())
    }

    pub fn pure(ket: &[C64]) -> Result<Self> {
        let norm: f64 = ket.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
            return Err(OttoError::InvalidDensityMatrix("zero state vector".into()));
        }
        let normalized: Vec<C64> = ket.iter().map(|z| z / norm).collect();
        Ok(Self::from_channel_output(ComplexMatrix::projector(
            &normalized,
        )?))
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        let id = ComplexMatrix::identity(dim)?;
        Ok(DensityMatrix(id * (1.0 / dim as f64)))
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    /// Eigenvalues in ascending order, with values in `[−PSD_TOL, 0)` clamped to zero.
    pub fn eigenvalues(&self) -> Vec<f64> {
        // Density matrices are Hermitian by construction.
        let eig = hermitian_eig_unchecked(&self.0);
        eig.values
            .into_iter()
            .map(|v| if (-PSD_TOL..0.0).contains(&v) { 0.0 } else { v })
            .collect()
    }

    /// `Tr(h ρ)`.
    pub fn energy(&self, h: &ComplexMatrix) -> f64 {
        h.expectation(&self.0)
    }

    /// `U ρ U†`.
    pub fn evolve(&self, u: &UnitaryMatrix) -> DensityMatrix {
        Self::from_channel_output(self.0.conjugate_by(u.matrix()))
    }
}

impl fmt::Debug for DensityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DensityMatrix {:?}", self.0)
    }
}

/// Matrix with `U†U = I` to within [`UNITARY_TOL`].
#[derive(Clone, Copy, PartialEq)]
pub struct UnitaryMatrix(ComplexMatrix);

impl UnitaryMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_finite() {
            return Err(OttoError::NonFinite);
        }
        let dev = unitarity_error(&matrix);
        if dev > UNITARY_TOL {
            return Err(OttoError::NotUnitary(dev));
        }
        Ok(UnitaryMatrix(matrix))
    }

    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        debug_assert!(unitarity_error(&matrix) <= UNITARY_TOL);
        UnitaryMatrix(matrix)
    }

    /// Skips validation entirely, so tests can feed deliberately broken operators.
    #[cfg(test)]
    pub(crate) fn from_raw(matrix: ComplexMatrix) -> Self {
        UnitaryMatrix(matrix)
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Ok(UnitaryMatrix(ComplexMatrix::identity(dim)?))
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn adjoint(&self) -> UnitaryMatrix {
        UnitaryMatrix(self.0.adjoint())
    }

    /// Column `j` as a state vector.
    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.0.dim()).map(|i| self.0[(i, j)]).collect()
    }

    pub fn compose(&self, other: &UnitaryMatrix) -> UnitaryMatrix {
        UnitaryMatrix(self.0 * other.0)
    }
}

impl fmt::Debug for UnitaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UnitaryMatrix {:?}", self.0)
    }
}

/// Largest entrywise deviation of `U†U` from the identity.
pub fn unitarity_error(u: &ComplexMatrix) -> f64 {
    let prod = &u.adjoint() * u;
    prod.max_abs_diff(&ComplexMatrix::identity_unchecked(u.dim()))
}

// ---------------------------------------------------------------------------
// Operations

/// Kronecker product `a ⊗ b` of two qubit operators.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    for m in [a, b] {
        if m.dim() != 2 {
            return Err(OttoError::DimensionMismatch {
                expected: 2,
                found: m.dim(),
            });
        }
    }
    let mut out = ComplexMatrix::zeros_unchecked(4);
    for i in 0..2 {
        for j in 0..2 {
            let aij = a[(i, j)];
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    Ok(out)
}

pub fn tensor_states(a: &DensityMatrix, b: &DensityMatrix) -> Result<DensityMatrix> {
    Ok(DensityMatrix::from_channel_output(tensor_product(
        a.matrix(),
        b.matrix(),
    )?))
}

fn require_two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(OttoError::DimensionMismatch {
            expected: 4,
            found: rho.dim(),
        });
    }
    Ok(())
}

/// System marginal `Tr_a(ρ_sa)`.
pub fn partial_trace_aux(rho_sa: &DensityMatrix) -> Result<DensityMatrix> {
    require_two_qubit(rho_sa)?;
    let m = rho_sa.matrix();
    let mut out = ComplexMatrix::zeros_unchecked(2);
    for i in 0..2 {
        for j in 0..2 {
            out[(i, j)] = m[(2 * i, 2 * j)] + m[(2 * i + 1, 2 * j + 1)];
        }
    }
    Ok(DensityMatrix::from_channel_output(out))
}

/// Auxiliary marginal `Tr_s(ρ_sa)`.
pub fn partial_trace_system(rho_sa: &DensityMatrix) -> Result<DensityMatrix> {
    require_two_qubit(rho_sa)?;
    let m = rho_sa.matrix();
    let mut out = ComplexMatrix::zeros_unchecked(2);
    for k in 0..2 {
        for l in 0..2 {
            out[(k, l)] = m[(k, l)] + m[(2 + k, 2 + l)];
        }
    }
    Ok(DensityMatrix::from_channel_output(out))
}

/// Spectral decomposition `h = W diag(values) W†`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector of `values[k]`.
    pub vectors: UnitaryMatrix,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let w = self.vectors.matrix();
        let n = w.dim();
        let mut out = ComplexMatrix::zeros_unchecked(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = (0..n)
                    .map(|k| w[(i, k)] * self.values[k] * w[(j, k)].conj())
                    .sum();
            }
        }
        out
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Eigenvalues come back ascending. Each eigenvector is phase-fixed so its first
/// nonzero component is real and positive; inside a degenerate cluster, vectors are
/// ordered lexicographically by their components.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<HermitianEigen> {
    if !h.is_finite() {
        return Err(OttoError::NonFinite);
    }
    let herm = h.hermiticity_error();
    if herm > HERMITIAN_TOL * h.max_abs().max(1.0) {
        return Err(OttoError::NotHermitian(herm));
    }
    Ok(hermitian_eig_unchecked(h))
}

pub(crate) fn hermitian_eig_unchecked(h: &ComplexMatrix) -> HermitianEigen {
    let n = h.dim();
    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::identity_unchecked(n);

    let scale: f64 = a.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if scale > 0.0 {
        for _sweep in 0..64 {
            let mut off = 0.0;
            for p in 0..n {
                for q in (p + 1)..n {
                    off += a[(p, q)].norm_sqr();
                }
            }
            if off.sqrt() <= 1e-17 * scale {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    jacobi_rotate(&mut a, &mut v, p, q);
                }
            }
        }
    }

    let mut pairs: Vec<(f64, Vec<C64>)> = (0..n)
        .map(|k| {
            let mut col: Vec<C64> = (0..n).map(|i| v[(i, k)]).collect();
            fix_phase(&mut col);
            (a[(k, k)].re, col)
        })
        .collect();
    sort_eigenpairs(&mut pairs);

    let mut w = ComplexMatrix::zeros_unchecked(n);
    for (k, (_, col)) in pairs.iter().enumerate() {
        for i in 0..n {
            w[(i, k)] = col[i];
        }
    }
    HermitianEigen {
        values: pairs.into_iter().map(|(val, _)| val).collect(),
        vectors: UnitaryMatrix(w),
    }
}

/// One Jacobi step zeroing `a[p][q]`: `a ← G† a G`, `v ← v G`.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let cs = 1.0 / (t * t + 1.0).sqrt();
    let sn = t * cs;

    let g_pp = c(cs, 0.0);
    let g_pq = c(sn, 0.0);
    let g_qp = phase.conj() * (-sn);
    let g_qq = phase.conj() * cs;

    let n = a.dim();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = c(a[(p, p)].re, 0.0);
    a[(q, q)] = c(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

fn fix_phase(col: &mut [C64]) {
    if let Some(lead) = col.iter().copied().find(|z| z.norm() > 1e-12) {
        let rot = lead.conj() / lead.norm();
        col.iter_mut().for_each(|z| *z *= rot);
        // exact real leading entry
        if let Some(z) = col.iter_mut().find(|z| z.norm() > 1e-12) {
            *z = c(z.re, 0.0);
        }
    }
}

fn lexicographic(a: &[C64], b: &[C64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let ord = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if ord != Ordering::Equal {
            return ord;
        }
    }
    Ordering::Equal
}

fn sort_eigenpairs(pairs: &mut [(f64, Vec<C64>)]) {
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let spread = pairs
        .iter()
        .map(|(v, _)| v.abs())
        .fold(0.0_f64, f64::max)
        .max(1.0);
    let tol = 1e-10 * spread;
    let mut start = 0;
    while start < pairs.len() {
        let mut end = start + 1;
        while end < pairs.len() && pairs[end].0 - pairs[end - 1].0 <= tol {
            end += 1;
        }
        if end - start > 1 {
            let cluster = &mut pairs[start..end];
            let mut values: Vec<f64> = cluster.iter().map(|(v, _)| *v).collect();
            values.sort_by(f64::total_cmp);
            cluster.sort_by(|a, b| lexicographic(&a.1, &b.1));
            for (slot, val) in cluster.iter_mut().zip(values) {
                slot.0 = val;
            }
        }
        start = end;
    }
}

/// `exp(i g)` for Hermitian `g`, via `g = W Λ W† ⇒ exp(i g) = W e^{iΛ} W†`.
pub fn exp_i_hermitian(g: &ComplexMatrix) -> Result<UnitaryMatrix> {
    let eig = hermitian_eig(g)?;
    Ok(UnitaryMatrix(exp_i_from_eigen(&eig)))
}

pub(crate) fn exp_i_from_eigen(eig: &HermitianEigen) -> ComplexMatrix {
    let w = eig.vectors.matrix();
    let n = w.dim();
    let phases: Vec<C64> = eig
        .values
        .iter()
        .map(|&l| C64::from_polar(1.0, l))
        .collect();
    let mut out = ComplexMatrix::zeros_unchecked(n);
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = (0..n)
                .map(|k| w[(i, k)] * phases[k] * w[(j, k)].conj())
                .sum();
        }
    }
    out
}

/// Shannon entropy in bits of a probability vector, with `0 · log 0 = 0`.
pub fn shannon_entropy_bits(probabilities: &[f64]) -> f64 {
    probabilities
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum::<f64>()
        .max(0.0)
}

/// Von Neumann entropy `−Tr ρ log₂ ρ` in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    shannon_entropy_bits(&rho.eigenvalues())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn thermal_qubit(v: f64) -> DensityMatrix {
        let z = 2.0 * v.cosh();
        DensityMatrix::new(ComplexMatrix::diagonal(&[(-v).exp() / z, v.exp() / z]).unwrap())
            .unwrap()
    }

    #[test]
    fn identity_tensor_identity() {
        let i4 = tensor_product(&identity2(), &identity2()).unwrap();
        assert_eq!(i4, ComplexMatrix::identity(4).unwrap());
    }

    #[test]
    fn sz_tensor_sz_is_diagonal() {
        let zz = tensor_product(&pauli_z(), &pauli_z()).unwrap();
        let expected = ComplexMatrix::diagonal(&[1.0, -1.0, -1.0, 1.0]).unwrap();
        assert!(zz.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn h2_tensor_identity_spectrum() {
        let h2 = pauli_x() * 1.5;
        let big = tensor_product(&h2, &identity2()).unwrap();
        let eig = hermitian_eig(&big).unwrap();
        for (got, want) in eig.values.iter().zip([-1.5, -1.5, 1.5, 1.5]) {
            assert!((got - want).abs() < 1e-12);
        }
        // upper eigenspace is spanned by |++⟩, |+−⟩: projector = |+⟩⟨+| ⊗ I
        let w = eig.vectors.matrix();
        let mut upper = ComplexMatrix::zeros(4).unwrap();
        for k in 2..4 {
            let col: Vec<C64> = (0..4).map(|i| w[(i, k)]).collect();
            upper = upper + ComplexMatrix::projector(&col).unwrap();
        }
        let plus_proj = ComplexMatrix::projector(&ket_plus()).unwrap();
        let expected = tensor_product(&plus_proj, &identity2()).unwrap();
        assert!(upper.max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn tensor_product_rejects_4x4() {
        let i4 = ComplexMatrix::identity(4).unwrap();
        assert!(matches!(
            tensor_product(&i4, &identity2()),
            Err(OttoError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn partial_trace_of_bell_state_is_maximally_mixed() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = [c(h, 0.0), ZERO, ZERO, c(h, 0.0)];
        let rho = DensityMatrix::pure(&bell).unwrap();
        let marginal = partial_trace_aux(&rho).unwrap();
        assert!(marginal.matrix().max_abs_diff(&(identity2() * 0.5)) < 1e-15);
        let other = partial_trace_system(&rho).unwrap();
        assert!(other.matrix().max_abs_diff(&(identity2() * 0.5)) < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_qubit_input() {
        let rho = DensityMatrix::maximally_mixed(2).unwrap();
        assert!(partial_trace_aux(&rho).is_err());
    }

    #[test]
    fn eig_pauli_z() {
        let eig = hermitian_eig(&pauli_z()).unwrap();
        assert_eq!(eig.values, vec![-1.0, 1.0]);
    }

    #[test]
    fn eig_h2_has_minus_then_plus() {
        let eig = hermitian_eig(&(pauli_x() * 1.5)).unwrap();
        assert!((eig.values[0] + 1.5).abs() < 1e-14);
        assert!((eig.values[1] - 1.5).abs() < 1e-14);
        let minus = eig.vectors.column(0);
        let plus = eig.vectors.column(1);
        assert!((inner(&minus, &ket_minus()).norm() - 1.0).abs() < 1e-12);
        assert!((inner(&plus, &ket_plus()).norm() - 1.0).abs() < 1e-12);
        // phase convention: first nonzero component real positive
        assert!(minus[0].re > 0.0 && minus[0].im == 0.0);
    }

    #[test]
    fn eig_thermal_populations() {
        let rho = thermal_qubit(1.0);
        let vals = rho.eigenvalues();
        assert!((vals[0] - 0.119_202_922_022_117_6).abs() < 1e-12);
        assert!((vals[1] - 0.880_797_077_977_882_3).abs() < 1e-12);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(&[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(hermitian_eig(&m), Err(OttoError::NotHermitian(_))));
    }

    #[test]
    fn degenerate_ordering_is_deterministic() {
        let h = ComplexMatrix::diagonal(&[1.0, 0.0, 1.0, 0.0]).unwrap();
        let a = hermitian_eig(&h).unwrap();
        let b = hermitian_eig(&h).unwrap();
        assert_eq!(a.values, b.values);
        assert_eq!(a.vectors, b.vectors);
        // lexicographic order inside the zero cluster puts e_3 (leading 0) before e_1 (leading 0, then 1)
        assert_eq!(a.values, vec![0.0, 0.0, 1.0, 1.0]);
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let u = exp_i_hermitian(&ComplexMatrix::zeros(2).unwrap()).unwrap();
        assert!(u.matrix().max_abs_diff(&identity2()) < 1e-15);
    }

    #[test]
    fn exp_of_half_pi_sigma_x() {
        let u = exp_i_hermitian(&(pauli_x() * FRAC_PI_2)).unwrap();
        let expected = pauli_x().scale(c(0.0, 1.0));
        assert!(u.matrix().max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn exp_of_diagonal_phase() {
        let g = ComplexMatrix::diagonal(&[PI, 0.0, 0.0, 0.0]).unwrap();
        let u = exp_i_hermitian(&g).unwrap();
        let expected = ComplexMatrix::diagonal(&[-1.0, 1.0, 1.0, 1.0]).unwrap();
        assert!(u.matrix().max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn entropy_reference_values() {
        let plus = DensityMatrix::pure(&ket_plus()).unwrap();
        assert!(von_neumann_entropy(&plus).abs() < 1e-12);
        let mixed = DensityMatrix::maximally_mixed(2).unwrap();
        assert!((von_neumann_entropy(&mixed) - 1.0).abs() < 1e-12);
        let p = (1.0 + 1f64.tanh()) / 2.0;
        let binary = -p * p.log2() - (1.0 - p) * (1.0 - p).log2();
        let rho = thermal_qubit(1.0);
        assert!((von_neumann_entropy(&rho) - binary).abs() < 1e-12);
        assert!((binary - 0.527_065_341_003_161_7).abs() < 1e-12);
    }

    #[test]
    fn density_validation_failures() {
        let bad_trace = ComplexMatrix::diagonal(&[0.6, 0.6]).unwrap();
        assert!(DensityMatrix::new(bad_trace).is_err());
        let negative = ComplexMatrix::diagonal(&[1.1, -0.1]).unwrap();
        assert!(DensityMatrix::new(negative).is_err());
        let skew =
            ComplexMatrix::from_entries(&[c(0.5, 0.0), c(0.1, 0.0), ZERO, c(0.5, 0.0)]).unwrap();
        assert!(matches!(
            DensityMatrix::new(skew),
            Err(OttoError::NotHermitian(_))
        ));
        assert!(ComplexMatrix::from_real(&[f64::NAN, 0.0, 0.0, 1.0]).is_err());
        assert!(ComplexMatrix::zeros(3).is_err());
    }

    #[test]
    fn unitary_validation() {
        assert!(UnitaryMatrix::new(hadamard()).is_ok());
        assert!(UnitaryMatrix::new(pauli_x() * 1.1).is_err());
    }

    // --- property tests ---

    fn arb_c64(range: f64) -> impl Strategy<Value = C64> {
        (-range..range, -range..range).prop_map(|(re, im)| c(re, im))
    }

    fn arb_hermitian(dim: usize, range: f64) -> impl Strategy<Value = ComplexMatrix> {
        proptest::collection::vec(arb_c64(range), dim * dim)
            .prop_map(move |v| ComplexMatrix::from_entries(&v).unwrap().hermitian_part())
    }

    fn arb_state(dim: usize) -> impl Strategy<Value = DensityMatrix> {
        proptest::collection::vec(arb_c64(1.0), dim * dim).prop_map(move |v| {
            let a = ComplexMatrix::from_entries(&v).unwrap();
            let mut m = a * a.adjoint();
            let tr = m.trace().re;
            m = m * (1.0 / tr);
            DensityMatrix::new(m.hermitian_part()).unwrap()
        })
    }

    fn arb_dim() -> impl Strategy<Value = usize> {
        prop_oneof![Just(2usize), Just(4usize)]
    }

    proptest! {
        #[test]
        fn partial_trace_of_product_recovers_system(rs in arb_state(2), ra in arb_state(2)) {
            let joint = tensor_states(&rs, &ra).unwrap();
            let marginal = partial_trace_aux(&joint).unwrap();
            prop_assert!(marginal.matrix().max_abs_diff(rs.matrix()) < 1e-12);
            let other = partial_trace_system(&joint).unwrap();
            prop_assert!(other.matrix().max_abs_diff(ra.matrix()) < 1e-12);
        }

        #[test]
        fn exp_inverse_pair(g in arb_dim().prop_flat_map(|d| arb_hermitian(d, 5.0))) {
            let u = exp_i_hermitian(&g).unwrap();
            let v = exp_i_hermitian(&(g * -1.0)).unwrap();
            let prod = u.matrix() * v.matrix();
            prop_assert!(prod.max_abs_diff(&ComplexMatrix::identity(g.dim()).unwrap()) < 1e-10);
            prop_assert!(unitarity_error(u.matrix()) < 1e-10);
        }

        #[test]
        fn eig_reconstructs(h in arb_dim().prop_flat_map(|d| arb_hermitian(d, 5.0))) {
            let eig = hermitian_eig(&h).unwrap();
            prop_assert!(eig.reconstruct().max_abs_diff(&h) < 1e-10);
            prop_assert!(unitarity_error(eig.vectors.matrix()) < 1e-10);
            prop_assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        }

        #[test]
        fn entropy_unitarily_invariant(
            rho in arb_dim().prop_flat_map(|d| (arb_state(d), arb_hermitian(d, 3.0)))
        ) {
            let (rho, g) = rho;
            let u = exp_i_hermitian(&g).unwrap();
            let rotated = rho.evolve(&u);
            let s0 = von_neumann_entropy(&rho);
            let s1 = von_neumann_entropy(&rotated);
            prop_assert!((s0 - s1).abs() < 1e-10);
            prop_assert!(s0 >= 0.0 && s0 <= (rho.dim() as f64).log2() + 1e-12);
        }

        #[test]
        fn trace_of_tensor_is_product_of_traces(
            a in proptest::collection::vec(arb_c64(3.0), 4),
            b in proptest::collection::vec(arb_c64(3.0), 4),
        ) {
            let a = ComplexMatrix::from_entries(&a).unwrap();
            let b = ComplexMatrix::from_entries(&b).unwrap();
            let ab = tensor_product(&a, &b).unwrap();
            prop_assert!((ab.trace() - a.trace() * b.trace()).norm() < 1e-12);
        }
    }
}
