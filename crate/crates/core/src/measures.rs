//! Scalar functionals of a two-qubit state: concurrence, the Horodecki CHSH
//! quantity `m(ρ)`, CHSH expectation values with optimal settings, and the
//! fully entangled fraction.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernel::{hermitian_eigensystem, singular_values, ComplexMatrix, PAULI};
use crate::qstate::{DensityMatrix, QuantityTriple};

pub type Vec3 = [f64; 3];
pub type Mat3 = [[f64; 3]; 3];

const UNIT_TOL: f64 = 1e-9;
const DEGENERATE_TOL: f64 = 1e-12;
/// Relative size below which an eigenvalue of `ρ` is indistinguishable from 0.
const ROUNDOFF_EIGENVALUE: f64 = 64.0 * f64::EPSILON;

/// Measurement directions `(a, a′, b, b′)` of a CHSH operator
/// `a·σ ⊗ (b + b′)·σ + a′·σ ⊗ (b − b′)·σ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BellSettings {
    pub a: Vec3,
    pub a_prime: Vec3,
    pub b: Vec3,
    pub b_prime: Vec3,
}

impl BellSettings {
    pub fn vectors(&self) -> [&Vec3; 4] {
        [&self.a, &self.a_prime, &self.b, &self.b_prime]
    }

    fn check_unit(&self) -> Result<()> {
        for v in self.vectors() {
            let n = norm(v);
            if (n - 1.0).abs() > UNIT_TOL {
                return Err(Error::NonUnitVector { norm: n });
            }
        }
        Ok(())
    }
}

/// Correlation matrix `t_nm = tr(ρ σ_n ⊗ σ_m)` and the ascending spectrum of
/// `TᵀT`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorrelationData {
    pub t: Mat3,
    pub u: Vec3,
}

/// Wootters values (descending) and the resulting concurrence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConcurrenceDecomposition {
    pub lambdas: [f64; 4],
    pub c: f64,
}

fn norm(v: &Vec3) -> f64 {
    dot(v, v).sqrt()
}

fn dot(x: &Vec3, y: &Vec3) -> f64 {
    x[0] * y[0] + x[1] * y[1] + x[2] * y[2]
}

fn mat_vec(t: &Mat3, v: &Vec3) -> Vec3 {
    std::array::from_fn(|i| dot(&t[i], v))
}

fn scaled(v: &Vec3, k: f64) -> Vec3 {
    v.map(|x| x * k)
}

fn cross(x: &Vec3, y: &Vec3) -> Vec3 {
    [
        x[1] * y[2] - x[2] * y[1],
        x[2] * y[0] - x[0] * y[2],
        x[0] * y[1] - x[1] * y[0],
    ]
}

/// `xᵀ T y`
fn bilinear(x: &Vec3, t: &Mat3, y: &Vec3) -> f64 {
    dot(x, &mat_vec(t, y))
}

/// Real symmetric 3×3 eigensystem via the complex kernel; returns ascending
/// values and the matching real unit eigenvectors.
fn symmetric_eigen3(m: &Mat3) -> Result<(Vec3, [Vec3; 3])> {
    let h = ComplexMatrix::from_fn(3, |i, j| Complex64::new(m[i][j], 0.0));
    let eig = hermitian_eigensystem(&h)?;
    let vals = [eig.values()[0], eig.values()[1], eig.values()[2]];
    let vecs = std::array::from_fn(|k| {
        let col = eig.vectors().column(k);
        let v = [col[0].re, col[1].re, col[2].re];
        scaled(&v, 1.0 / norm(&v))
    });
    Ok((vals, vecs))
}

/// Pauli correlation matrix and the eigenvalues `u_j` of `TᵀT`.
pub fn correlation_matrix(rho: &DensityMatrix) -> Result<CorrelationData> {
    let t = correlation_tensor(rho);
    let u = u_matrix(&t);
    let (vals, _) = symmetric_eigen3(&u)?;
    Ok(CorrelationData {
        t,
        u: vals.map(|x| x.max(0.0)),
    })
}

fn correlation_tensor(rho: &DensityMatrix) -> Mat3 {
    let r = rho.matrix();
    let mut t = [[0.0; 3]; 3];
    for (n, row) in t.iter_mut().enumerate() {
        for (m, entry) in row.iter_mut().enumerate() {
            let sn = &PAULI[n + 1];
            let sm = &PAULI[m + 1];
            // tr(ρ (σ_n ⊗ σ_m)) = Σ_ij ρ_ij (σ_n ⊗ σ_m)_ji
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..4 {
                for j in 0..4 {
                    let op = sn[j / 2][i / 2] * sm[j % 2][i % 2];
                    if op.re != 0.0 || op.im != 0.0 {
                        acc += r[(i, j)] * op;
                    }
                }
            }
            *entry = acc.re;
        }
    }
    t
}

fn u_matrix(t: &Mat3) -> Mat3 {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| t[k][i] * t[k][j]).sum()))
}

/// `m(ρ)`: sum of the two largest eigenvalues of `TᵀT`. A CHSH inequality is
/// violated iff `m > 1`.
pub fn chsh_m(rho: &DensityMatrix) -> Result<f64> {
    let data = correlation_matrix(rho)?;
    Ok(data.u[1] + data.u[2])
}

/// `tr(ρ B_CHSH) = aᵀT(b + b′) + a′ᵀT(b − b′)`.
pub fn bell_value(rho: &DensityMatrix, settings: &BellSettings) -> Result<f64> {
    settings.check_unit()?;
    Ok(bell_value_with(&correlation_tensor(rho), settings))
}

fn bell_value_with(t: &Mat3, s: &BellSettings) -> f64 {
    let sum: Vec3 = std::array::from_fn(|i| s.b[i] + s.b_prime[i]);
    let diff: Vec3 = std::array::from_fn(|i| s.b[i] - s.b_prime[i]);
    bilinear(&s.a, t, &sum) + bilinear(&s.a_prime, t, &diff)
}

/// Any unit vector orthogonal to `v` (which must be unit).
fn orthogonal_to(v: &Vec3) -> Vec3 {
    let axis = if v[0].abs() <= v[1].abs() && v[0].abs() <= v[2].abs() {
        [1.0, 0.0, 0.0]
    } else if v[1].abs() <= v[2].abs() {
        [0.0, 1.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    let w = cross(v, &axis);
    scaled(&w, 1.0 / norm(&w))
}

/// Settings attaining `max tr(ρ B_CHSH) = 2√m(ρ)`, and that maximum.
///
/// With `z₁, z₂` the top two eigenvectors of `TᵀT` (eigenvalues `u₁ ≥ u₂`):
/// `a ∝ Tz₁`, `a′ ∝ Tz₂`, `b, b′ = cos φ z₁ ± sin φ z₂` with
/// `tan φ = √(u₂/u₁)`. When `Tz₂` vanishes, `a′` is any unit vector
/// orthogonal to `a`; when `T = 0`, canonical axes are returned with value 0.
pub fn optimal_settings(rho: &DensityMatrix) -> Result<(BellSettings, f64)> {
    let t = correlation_tensor(rho);
    let (vals, vecs) = symmetric_eigen3(&u_matrix(&t))?;
    let (u1, u2) = (vals[2].max(0.0), vals[1].max(0.0));
    let (z1, z2) = (vecs[2], vecs[1]);

    let tz1 = mat_vec(&t, &z1);
    let tz2 = mat_vec(&t, &z2);
    let (n1, n2) = (norm(&tz1), norm(&tz2));

    if n1 <= DEGENERATE_TOL {
        let x = [1.0, 0.0, 0.0];
        let y = [0.0, 1.0, 0.0];
        let settings = BellSettings {
            a: x,
            a_prime: y,
            b: x,
            b_prime: y,
        };
        return Ok((settings, 2.0 * (u1 + u2).sqrt()));
    }

    let a = scaled(&tz1, 1.0 / n1);
    let a_prime = if n2 <= DEGENERATE_TOL {
        orthogonal_to(&a)
    } else {
        scaled(&tz2, 1.0 / n2)
    };
    let phi = u2.sqrt().atan2(u1.sqrt());
    let (sin, cos) = phi.sin_cos();
    let b = std::array::from_fn(|i| cos * z1[i] + sin * z2[i]);
    let b_prime = std::array::from_fn(|i| cos * z1[i] - sin * z2[i]);
    let settings = BellSettings {
        a,
        a_prime,
        b,
        b_prime,
    };
    Ok((settings, 2.0 * (u1 + u2).sqrt()))
}

/// Wootters concurrence.
///
/// The Wootters values `λ_i` (square roots of the eigenvalues of
/// `√ρ ρ̃ √ρ`) are computed as the singular values of `√ρ (σ_y⊗σ_y) √ρ̄`,
/// whose Gram matrix is exactly `√ρ ρ̃ √ρ`. Taking singular values directly
/// keeps the small `λ_i` accurate to `~1e-16` for rank-deficient states,
/// where a square root of a roundoff-level eigenvalue would be `~1e-8`.
///
/// For the same reason eigenvalues of `ρ` at roundoff level are taken as
/// exactly zero before the square root: otherwise a rank-deficient state and
/// its rotated copy can differ in `C` by a few `1e-9`.
pub fn concurrence(rho: &DensityMatrix) -> Result<ConcurrenceDecomposition> {
    let eig = rho.eigensystem();
    let floor = ROUNDOFF_EIGENVALUE * eig.max();
    let sqrt_rho = eig.reassemble(|x| if x <= floor { 0.0 } else { x.sqrt() });
    // (σ_y ⊗ σ_y) as a signed index reversal, see DensityMatrix::spin_flip.
    const SIGN: [f64; 4] = [-1.0, 1.0, 1.0, -1.0];
    let conj = sqrt_rho.conj();
    let flipped = ComplexMatrix::from_fn(4, |i, j| conj[(3 - i, j)] * SIGN[i]);
    let a = sqrt_rho * flipped;
    let lambdas = singular_values(&a)?;
    let c = (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0);
    Ok(ConcurrenceDecomposition { lambdas, c })
}

/// Fully entangled fraction `max ⟨ψ|ρ|ψ⟩` over maximally entangled `ψ`.
///
/// In the magic basis the maximally entangled states are the real unit
/// vectors (up to a global phase), so the maximum is the top eigenvalue of the
/// real part of `ρ` written in that basis.
pub fn fidelity(rho: &DensityMatrix) -> Result<f64> {
    let m = rho.to_magic_basis();
    let re = ComplexMatrix::from_fn(4, |i, j| Complex64::new(m[(i, j)].re, 0.0));
    Ok(hermitian_eigensystem(&re)?.max())
}

/// `(S_L, C, m)` through the generic numerical route.
pub fn quantity_triple(rho: &DensityMatrix) -> Result<QuantityTriple> {
    Ok(QuantityTriple {
        s: rho.linear_entropy(),
        c: concurrence(rho)?.c,
        m: chsh_m(rho)?,
    })
}
