//! Validated two-qubit density matrices.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernel::{hermitian_eigensystem, ComplexMatrix, EigenSystem, PSD_TOL};

/// Absolute tolerance for the hermiticity and trace checks.
pub const STATE_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A 4×4 hermitian, unit-trace, positive-semidefinite matrix.
///
/// The stored matrix is the exact hermitian part of the validated input, so
/// `ρ == ρ†` holds bitwise for every instance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

/// Coordinates of a state in the entropy–concurrence plane plus its CHSH
/// quantity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuantityTriple {
    /// Normalized linear entropy.
    pub s: f64,
    /// Concurrence.
    pub c: f64,
    /// Sum of the two largest eigenvalues of `TᵀT`.
    pub m: f64,
}

impl QuantityTriple {
    pub fn violates_chsh(&self) -> bool {
        self.m > 1.0
    }

    /// Range check with `1e-9` slack on each component.
    pub fn in_range(&self) -> bool {
        const SLACK: f64 = 1e-9;
        (0.0..=1.0 + SLACK).contains(&self.s)
            && (0.0..=1.0 + SLACK).contains(&self.c)
            && (-SLACK..=2.0 + SLACK).contains(&self.m)
    }
}

impl DensityMatrix {
    /// Checks hermiticity, unit trace and positivity, in that order.
    pub fn validate(mat: ComplexMatrix) -> Result<Self> {
        Self::validate_with_spectrum(mat).map(|(rho, _)| rho)
    }

    /// Like [`validate`](Self::validate), also handing back the spectrum
    /// computed for the positivity check.
    pub fn validate_with_spectrum(mat: ComplexMatrix) -> Result<(Self, EigenSystem)> {
        if mat.dim() != 4 {
            return Err(Error::WrongDimension {
                expected: "4x4",
                found: mat.dim(),
            });
        }
        if !mat.is_finite() {
            return Err(Error::NonFinite);
        }
        let defect = mat.hermiticity_defect();
        if defect > STATE_TOL {
            return Err(Error::NotHermitian { defect });
        }
        let tr = mat.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > STATE_TOL {
            return Err(Error::TraceNotOne { trace: tr.re });
        }
        let mat = mat.hermitian_part();
        let eig = hermitian_eigensystem(&mat)?;
        if eig.min() < -PSD_TOL {
            return Err(Error::NotPsd {
                min_eigenvalue: eig.min(),
            });
        }
        Ok((DensityMatrix { mat }, eig))
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalized) nonzero vector.
    pub fn pure(psi: [Complex64; 4]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::ConstraintViolation(
                "state vector must be finite and nonzero".into(),
            ));
        }
        let unit = psi.map(|z| z / norm);
        Self::validate(ComplexMatrix::projector(&unit))
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix {
            mat: ComplexMatrix::identity(4).scale(Complex64::new(0.25, 0.0)),
        }
    }

    /// `|Φ⁺⟩ = (|00⟩ + |11⟩)/√2`
    pub fn phi_plus() -> Self {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Self::pure([h, ZERO, ZERO, h]).expect("Bell state is valid")
    }

    /// `|Ψ⁻⟩ = (|01⟩ − |10⟩)/√2`
    pub fn psi_minus() -> Self {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Self::pure([ZERO, h, -h, ZERO]).expect("Bell state is valid")
    }

    /// Computational basis product state `|ab⟩`.
    pub fn basis(index: usize) -> Self {
        assert!(index < 4);
        let mut psi = [ZERO; 4];
        psi[index] = Complex64::new(1.0, 0.0);
        Self::pure(psi).expect("basis state is valid")
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn eigensystem(&self) -> EigenSystem {
        hermitian_eigensystem(&self.mat).expect("validated state is hermitian")
    }

    /// `tr ρ²`, in `[1/4, 1]`.
    pub fn purity(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                acc += self.mat[(i, j)].norm_sqr();
            }
        }
        acc
    }

    /// `(4/3)(1 − tr ρ²)`, clamped to `[0, 1]`.
    pub fn linear_entropy(&self) -> f64 {
        (4.0 / 3.0 * (1.0 - self.purity())).clamp(0.0, 1.0)
    }

    /// `ρ̃ = (σ_y ⊗ σ_y) ρ̄ (σ_y ⊗ σ_y)`.
    pub fn spin_flip(&self) -> ComplexMatrix {
        // σ_y ⊗ σ_y is the real antidiagonal (-1, 1, 1, -1); conjugating by it
        // reverses both indices and flips the sign when exactly one index is
        // 0 or 3.
        const SIGN: [f64; 4] = [-1.0, 1.0, 1.0, -1.0];
        ComplexMatrix::from_fn(4, |i, j| {
            self.mat[(3 - i, 3 - j)].conj() * (SIGN[i] * SIGN[j])
        })
    }

    /// `Q†ρQ` where `Q` holds the magic basis
    /// `(|00⟩+|11⟩)/√2, i(|00⟩−|11⟩)/√2, i(|01⟩+|10⟩)/√2, (|01⟩−|10⟩)/√2`
    /// as columns.
    pub fn to_magic_basis(&self) -> ComplexMatrix {
        let q = magic_basis();
        q.adjoint() * self.mat * q
    }

    /// `(U_A ⊗ U_B) ρ (U_A ⊗ U_B)†` for 2×2 unitaries.
    pub fn apply_local_unitary(&self, ua: &ComplexMatrix, ub: &ComplexMatrix) -> Result<Self> {
        let u = ua.kron(ub);
        Self::validate(u * self.mat * u.adjoint())
    }
}

/// Unitary whose columns are the magic basis vectors.
pub fn magic_basis() -> ComplexMatrix {
    let h = FRAC_1_SQRT_2;
    let r = |x: f64| Complex64::new(x, 0.0);
    let i = |x: f64| Complex64::new(0.0, x);
    let cols = [
        [r(h), r(0.0), r(0.0), r(h)],
        [i(h), r(0.0), r(0.0), i(-h)],
        [r(0.0), i(h), i(h), r(0.0)],
        [r(0.0), r(h), r(-h), r(0.0)],
    ];
    ComplexMatrix::from_fn(4, |row, col| cols[col][row])
}
