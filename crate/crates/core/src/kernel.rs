//! Dense complex linear algebra for matrices of dimension 2 to 4.
//!
//! Everything here is stack allocated. The eigensolver is a cyclic complex
//! Jacobi iteration, which at these sizes converges in a handful of sweeps and
//! gives eigenvalues with absolute error of order `eps * ‖H‖_F`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest supported matrix dimension.
pub const MAX_DIM: usize = 4;

/// Relative hermiticity tolerance accepted by the eigensolver.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues down to `-PSD_TOL` are treated as zero.
pub const PSD_TOL: f64 = 1e-10;

const JACOBI_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Identity and the three Pauli matrices, indexed 0..=3.
pub const PAULI: [[[Complex64; 2]; 2]; 4] = [
    [[ONE, ZERO], [ZERO, ONE]],
    [[ZERO, ONE], [ONE, ZERO]],
    [[ZERO, Complex64::new(0.0, -1.0)], [I, ZERO]],
    [[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]],
];

/// Square complex matrix of dimension 2, 3 or 4, stored row-major.
///
/// Entries outside the leading `dim × dim` block are always zero.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: [[Complex64; MAX_DIM]; MAX_DIM],
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!((2..=MAX_DIM).contains(&dim), "unsupported dimension {dim}");
        ComplexMatrix {
            dim,
            data: [[ZERO; MAX_DIM]; MAX_DIM],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.data[i][j] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from nested rows; fails on ragged input or a bad size.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if !(2..=MAX_DIM).contains(&dim) || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::WrongDimension {
                expected: "square, 2 to 4",
                found: dim,
            });
        }
        let m = Self::from_fn(dim, |i, j| rows[i][j]);
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(m)
    }

    pub fn from_real_diagonal(values: &[f64]) -> Self {
        Self::from_fn(values.len(), |i, j| {
            if i == j {
                Complex64::new(values[i], 0.0)
            } else {
                ZERO
            }
        })
    }

    /// Outer product `v v†`.
    pub fn projector(v: &[Complex64]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn pauli(k: usize) -> Self {
        Self::from_fn(2, |i, j| PAULI[k][i][j])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_finite(&self) -> bool {
        self.entries().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    fn entries(&self) -> impl Iterator<Item = &Complex64> {
        self.data[..self.dim].iter().flat_map(move |r| &r[..self.dim])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.data[j][i].conj())
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.data[i][j].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.data[j][i])
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i][i]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self::from_fn(self.dim, |i, j| self.data[i][j] * k)
    }

    /// `(H + H†) / 2`
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| {
            (self.data[i][j] + self.data[j][i].conj()) * 0.5
        })
    }

    /// Distance from hermiticity, `‖H − H†‖_F`.
    pub fn hermiticity_defect(&self) -> f64 {
        (*self - self.adjoint()).frobenius_norm()
    }

    /// Kronecker product of two 2×2 matrices.
    pub fn kron(&self, other: &Self) -> Self {
        assert!(self.dim == 2 && other.dim == 2, "kron is defined for 2x2 factors");
        Self::from_fn(4, |i, j| self.data[i / 2][j / 2] * other.data[i % 2][j % 2])
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> [Complex64; MAX_DIM] {
        let mut out = [ZERO; MAX_DIM];
        for (i, o) in out.iter_mut().enumerate().take(self.dim) {
            *o = (0..self.dim).map(|j| self.data[i][j] * v[j]).sum();
        }
        out
    }

    /// `tr(A B)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex64 {
        let mut acc = ZERO;
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc += self.data[i][j] * other.data[j][i];
            }
        }
        acc
    }

    /// Column `j` as an array (entries past `dim` are zero).
    pub fn column(&self, j: usize) -> [Complex64; MAX_DIM] {
        let mut out = [ZERO; MAX_DIM];
        for (i, o) in out.iter_mut().enumerate().take(self.dim) {
            *o = self.data[i][j];
        }
        out
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i != j {
                    acc += self.data[i][j].norm_sqr();
                }
            }
        }
        acc.sqrt()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.dim && j < self.dim);
        &self.data[i][j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.dim && j < self.dim);
        &mut self.data[i][j]
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i][k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i][j] += a * rhs.data[k][j];
                }
            }
        }
        out
    }
}

impl Add for ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix::from_fn(self.dim, |i, j| self.data[i][j] + rhs.data[i][j])
    }
}

impl Sub for ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix::from_fn(self.dim, |i, j| self.data[i][j] - rhs.data[i][j])
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for row in &self.data[..self.dim] {
            let cells: Vec<String> = row[..self.dim]
                .iter()
                .map(|z| format!("{:+.6}{:+.6}i", z.re, z.im))
                .collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Eigenvalues (ascending) and orthonormal eigenvectors (as columns).
#[derive(Clone, Copy, Debug)]
pub struct EigenSystem {
    dim: usize,
    values: [f64; MAX_DIM],
    vectors: ComplexMatrix,
}

impl EigenSystem {
    pub fn values(&self) -> &[f64] {
        &self.values[..self.dim]
    }

    pub fn vectors(&self) -> &ComplexMatrix {
        &self.vectors
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.dim - 1]
    }

    /// `V f(Λ) V†`
    pub fn reassemble(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let mapped: [f64; MAX_DIM] = std::array::from_fn(|k| f(self.values[k]));
        self.reassemble_with(&mapped[..self.dim])
    }

    /// `V diag(values) V†` with replacement eigenvalues (same order as
    /// [`values`](Self::values)).
    pub fn reassemble_with(&self, values: &[f64]) -> ComplexMatrix {
        let n = self.dim;
        assert_eq!(values.len(), n);
        let v = &self.vectors;
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| v.data[i][k] * v.data[j][k].conj() * values[k])
                .sum()
        })
    }
}

/// Parameters of the unitary plane rotation that annihilates the `(p, q)`
/// entry of a hermitian 2×2 block `[[app, apq], [conj(apq), aqq]]`.
///
/// The rotation is `G = D·P` with `D = diag(1, conj(phase))` making the
/// coherence real and `P` the classic real Jacobi rotation.
#[derive(Clone, Copy)]
struct Rotation {
    c: f64,
    s: f64,
    phase: Complex64,
}

impl Rotation {
    fn annihilating(app: f64, aqq: f64, apq: Complex64) -> Option<Self> {
        let mag = apq.norm();
        if mag == 0.0 {
            return None;
        }
        let theta = (aqq - app) / (2.0 * mag);
        let t = if theta.is_finite() {
            let t = 1.0 / (theta.abs() + theta.hypot(1.0));
            if theta < 0.0 {
                -t
            } else {
                t
            }
        } else {
            0.0
        };
        let c = 1.0 / t.hypot(1.0);
        Some(Rotation {
            c,
            s: t * c,
            phase: apq / mag,
        })
    }

    /// Applies `M ← M G` on columns `p`, `q`.
    #[inline]
    fn right(&self, m: &mut ComplexMatrix, p: usize, q: usize) {
        let e = self.phase.conj();
        for k in 0..m.dim {
            let mp = m.data[k][p];
            let mq = m.data[k][q];
            m.data[k][p] = mp * self.c - mq * e * self.s;
            m.data[k][q] = mp * self.s + mq * e * self.c;
        }
    }

    /// Applies `M ← G† M` on rows `p`, `q`.
    #[inline]
    fn left_adjoint(&self, m: &mut ComplexMatrix, p: usize, q: usize) {
        let e = self.phase;
        for k in 0..m.dim {
            let mp = m.data[p][k];
            let mq = m.data[q][k];
            m.data[p][k] = mp * self.c - mq * e * self.s;
            m.data[q][k] = mp * self.s + mq * e * self.c;
        }
    }
}

/// Eigendecomposition of a hermitian matrix by cyclic complex Jacobi sweeps.
///
/// The input must satisfy `‖H − H†‖_F ≤ 1e-10 · max(1, ‖H‖_F)`; its hermitian
/// part is what actually gets diagonalized.
pub fn hermitian_eigensystem(h: &ComplexMatrix) -> Result<EigenSystem> {
    if !h.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = h.dim;
    let norm = h.frobenius_norm();
    let defect = h.hermiticity_defect();
    if defect > HERMITIAN_TOL * norm.max(1.0) {
        return Err(Error::NotHermitian { defect });
    }

    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let target = JACOBI_TOL * norm;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if a.off_diagonal_norm() <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let Some(rot) = Rotation::annihilating(a.data[p][p].re, a.data[q][q].re, a.data[p][q])
                else {
                    continue;
                };
                rot.right(&mut a, p, q);
                rot.left_adjoint(&mut a, p, q);
                a.data[p][q] = ZERO;
                a.data[q][p] = ZERO;
                a.data[p][p].im = 0.0;
                a.data[q][q].im = 0.0;
                rot.right(&mut v, p, q);
            }
        }
    }
    if !converged && a.off_diagonal_norm() > target {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: [usize; MAX_DIM] = [0, 1, 2, 3];
    order[..n].sort_by(|&x, &y| a.data[x][x].re.total_cmp(&a.data[y][y].re));
    let mut values = [0.0; MAX_DIM];
    let mut vectors = ComplexMatrix::zeros(n);
    for (dst, &src) in order[..n].iter().enumerate() {
        values[dst] = a.data[src][src].re;
        for i in 0..n {
            vectors.data[i][dst] = v.data[i][src];
        }
    }
    Ok(EigenSystem {
        dim: n,
        values,
        vectors,
    })
}

/// Principal square root of a hermitian positive-semidefinite matrix.
///
/// Eigenvalues in `[-1e-10, 0)` are clipped to zero; anything more negative is
/// rejected.
pub fn psd_sqrt(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eigensystem(h)?;
    if eig.min() < -PSD_TOL {
        return Err(Error::NotPsd {
            min_eigenvalue: eig.min(),
        });
    }
    Ok(eig.reassemble(|x| x.max(0.0).sqrt()))
}

/// Singular values, descending, by one-sided (Hestenes) Jacobi.
///
/// Small singular values come out with absolute error of order `eps · ‖A‖`,
/// unlike square roots of the eigenvalues of `A A†`.
pub fn singular_values(a: &ComplexMatrix) -> Result<[f64; MAX_DIM]> {
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = a.dim;
    let mut w = *a;
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = ZERO;
                for k in 0..n {
                    alpha += w.data[k][p].norm_sqr();
                    beta += w.data[k][q].norm_sqr();
                    gamma += w.data[k][p].conj() * w.data[k][q];
                }
                if gamma.norm() <= JACOBI_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                if let Some(rot) = Rotation::annihilating(alpha, beta, gamma) {
                    rot.right(&mut w, p, q);
                    rotated = true;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }
    let mut out = [0.0; MAX_DIM];
    for (j, o) in out.iter_mut().enumerate().take(n) {
        *o = (0..n).map(|k| w.data[k][j].norm_sqr()).sum::<f64>().sqrt();
    }
    out[..n].sort_by(|x, y| y.total_cmp(x));
    Ok(out)
}
