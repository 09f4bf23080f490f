//! Parametrized state families with closed-form `(S_L, C, m)`, and the
//! reference curves of the entropy–concurrence plane.
//!
//! * `E0`: coherence only between `|01⟩` and `|10⟩`, with `ρ₁₁ = 0`.
//! * `E1`: "X" states, diagonal plus the `14` and `23` coherences.
//! * Werner states `(1−p) I/4 + p |Ψ⁻⟩⟨Ψ⁻|`.
//! * MVB states, which maximize `m` at fixed linear entropy within `E0`.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernel::ComplexMatrix;
use crate::qstate::{DensityMatrix, QuantityTriple};

const PARAM_TOL: f64 = 1e-12;

/// Linear entropy above which no state violates a CHSH inequality.
pub const SANTOS_ENTROPY_BOUND: f64 = 2.0 / 3.0;

/// Concurrence above which every state violates a CHSH inequality.
pub const VW_CONCURRENCE_BOUND: f64 = FRAC_1_SQRT_2;

/// Smallest `m` attainable at concurrence `c`: `max(1, 2c²)`.
pub fn min_chsh_m(c: f64) -> f64 {
    (2.0 * c * c).max(1.0)
}

/// Largest `m` attainable at concurrence `c`: `1 + c²`.
pub fn max_chsh_m(c: f64) -> f64 {
    1.0 + c * c
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct E0Params {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub theta: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct E1Params {
    /// `ρ₁₁ … ρ₄₄`
    pub diag: [f64; 4],
    pub r14: Complex64,
    pub r23: Complex64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MvbParams {
    pub beta: f64,
    pub theta: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WernerParam {
    p: f64,
}

/// Parameters of any family member.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FamilyParams {
    E0(E0Params),
    E1(E1Params),
    Werner(WernerParam),
    Mvb(MvbParams),
}

fn check_range(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if value.is_finite() && value >= lo && value <= hi {
        Ok(())
    } else {
        Err(Error::OutOfRange { name, value, lo, hi })
    }
}

fn violation(msg: String) -> Error {
    Error::ConstraintViolation(msg)
}

impl E0Params {
    pub fn new(a: f64, b: f64, c: f64, theta: f64) -> Result<Self> {
        let p = E0Params { a, b, c, theta };
        p.check()?;
        Ok(p)
    }

    pub fn check(&self) -> Result<()> {
        let E0Params { a, b, c, theta } = *self;
        if ![a, b, c, theta].iter().all(|x| x.is_finite()) {
            return Err(violation("parameters must be finite".into()));
        }
        if a < 0.0 || b < 0.0 {
            return Err(violation(format!("a = {a}, b = {b} must be nonnegative")));
        }
        if !(0.0..=1.0).contains(&c) {
            return Err(violation(format!("c = {c} must lie in [0, 1]")));
        }
        if a + b > 1.0 + PARAM_TOL {
            return Err(violation(format!("a + b = {} exceeds 1", a + b)));
        }
        if a * b < c * c / 4.0 - PARAM_TOL {
            return Err(violation(format!(
                "ab = {} is below c²/4 = {}",
                a * b,
                c * c / 4.0
            )));
        }
        Ok(())
    }
}

impl E1Params {
    pub fn new(diag: [f64; 4], r14: Complex64, r23: Complex64) -> Result<Self> {
        let p = E1Params { diag, r14, r23 };
        p.check()?;
        Ok(p)
    }

    pub fn check(&self) -> Result<()> {
        let d = self.diag;
        let finite = d.iter().all(|x| x.is_finite())
            && [self.r14, self.r23].iter().all(|z| z.re.is_finite() && z.im.is_finite());
        if !finite {
            return Err(violation("parameters must be finite".into()));
        }
        if d.iter().any(|&x| x < 0.0) {
            return Err(violation(format!("diagonal {d:?} has a negative entry")));
        }
        let sum: f64 = d.iter().sum();
        if (sum - 1.0).abs() > PARAM_TOL {
            return Err(violation(format!("diagonal sums to {sum}, not 1")));
        }
        if d[0] * d[3] < self.r14.norm_sqr() - PARAM_TOL {
            return Err(violation(format!(
                "ρ₁₁ρ₄₄ = {} is below |ρ₁₄|² = {}",
                d[0] * d[3],
                self.r14.norm_sqr()
            )));
        }
        if d[1] * d[2] < self.r23.norm_sqr() - PARAM_TOL {
            return Err(violation(format!(
                "ρ₂₂ρ₃₃ = {} is below |ρ₂₃|² = {}",
                d[1] * d[2],
                self.r23.norm_sqr()
            )));
        }
        Ok(())
    }
}

impl MvbParams {
    pub fn new(beta: f64, theta: f64) -> Result<Self> {
        check_range("beta", beta, 1.0, 2.0)?;
        if !theta.is_finite() {
            return Err(violation("theta must be finite".into()));
        }
        Ok(MvbParams { beta, theta })
    }
}

impl WernerParam {
    pub fn new(p: f64) -> Result<Self> {
        check_range("p", p, 0.0, 1.0)?;
        Ok(WernerParam { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

pub fn make_e0(params: E0Params) -> Result<DensityMatrix> {
    params.check()?;
    let E0Params { a, b, c, theta } = params;
    let coh = Complex64::from_polar(c / 2.0, theta);
    let mut m = ComplexMatrix::zeros(4);
    m[(1, 1)] = Complex64::new(a, 0.0);
    m[(2, 2)] = Complex64::new(b, 0.0);
    m[(3, 3)] = Complex64::new((1.0 - a - b).max(0.0), 0.0);
    m[(1, 2)] = coh;
    m[(2, 1)] = coh.conj();
    DensityMatrix::validate(m)
}

/// `S_L = (4/3)(1 − a² − b² − (1−a−b)² − c²/2)`, `C = c`,
/// `m = max(2c², (2(a+b) − 1)² + c²)`.
pub fn closed_form_e0(params: E0Params) -> Result<QuantityTriple> {
    params.check()?;
    let E0Params { a, b, c, .. } = params;
    let rest = 1.0 - a - b;
    let s = 4.0 / 3.0 * (1.0 - a * a - b * b - rest * rest - c * c / 2.0);
    let z = 2.0 * (a + b) - 1.0;
    Ok(QuantityTriple {
        s,
        c,
        m: (2.0 * c * c).max(z * z + c * c),
    })
}

pub fn make_e1(params: E1Params) -> Result<DensityMatrix> {
    params.check()?;
    let mut m = ComplexMatrix::zeros(4);
    for (i, &d) in params.diag.iter().enumerate() {
        m[(i, i)] = Complex64::new(d, 0.0);
    }
    m[(0, 3)] = params.r14;
    m[(3, 0)] = params.r14.conj();
    m[(1, 2)] = params.r23;
    m[(2, 1)] = params.r23.conj();
    DensityMatrix::validate(m)
}

/// Closed forms for X states.
///
/// The correlation spectrum is `{4(|ρ₁₄|+|ρ₂₃|)², 4(|ρ₁₄|−|ρ₂₃|)²,
/// (ρ₁₁−ρ₂₂−ρ₃₃+ρ₄₄)²}` and `m` is the sum of its two largest members.
pub fn closed_form_e1(params: E1Params) -> Result<QuantityTriple> {
    params.check()?;
    let [d1, d2, d3, d4] = params.diag;
    let (x, y) = (params.r14.norm(), params.r23.norm());
    let c1 = 2.0 * (x - (d2 * d3).sqrt());
    let c2 = 2.0 * (y - (d1 * d4).sqrt());
    let purity = d1 * d1 + d2 * d2 + d3 * d3 + d4 * d4 + 2.0 * x * x + 2.0 * y * y;
    let z = d1 - d2 - d3 + d4;
    let mut u = [4.0 * (x + y).powi(2), 4.0 * (x - y).powi(2), z * z];
    u.sort_by(f64::total_cmp);
    Ok(QuantityTriple {
        s: 4.0 / 3.0 * (1.0 - purity),
        c: c1.max(c2).max(0.0),
        m: u[1] + u[2],
    })
}

pub fn make_werner(param: WernerParam) -> Result<DensityMatrix> {
    let p = param.p;
    let mixed = ComplexMatrix::identity(4).scale(Complex64::new((1.0 - p) / 4.0, 0.0));
    let singlet = DensityMatrix::psi_minus()
        .into_matrix()
        .scale(Complex64::new(p, 0.0));
    DensityMatrix::validate(mixed + singlet)
}

/// `s = 1 − p²`, `c = max(0, (3p − 1)/2)`, `m = 2p²`.
pub fn closed_form_werner(param: WernerParam) -> QuantityTriple {
    let p = param.p;
    QuantityTriple {
        s: 1.0 - p * p,
        c: ((3.0 * p - 1.0) / 2.0).max(0.0),
        m: 2.0 * p * p,
    }
}

/// `½ [[0,0,0,0],[0,1,√(β−1)e^{iθ},0],[0,√(β−1)e^{−iθ},1,0],[0,0,0,0]]`
pub fn make_mvb(params: MvbParams) -> Result<DensityMatrix> {
    let MvbParams { beta, theta } = MvbParams::new(params.beta, params.theta)?;
    make_e0(E0Params {
        a: 0.5,
        b: 0.5,
        c: (beta - 1.0).sqrt(),
        theta,
    })
}

/// `s = (2/3)(2 − β)`, `c = √(β − 1)`, `m = β`.
pub fn closed_form_mvb(params: MvbParams) -> Result<QuantityTriple> {
    let MvbParams { beta, .. } = MvbParams::new(params.beta, params.theta)?;
    Ok(QuantityTriple {
        s: 2.0 / 3.0 * (2.0 - beta),
        c: (beta - 1.0).sqrt(),
        m: beta,
    })
}

/// Builds the state for any family parameter record.
pub fn make_state(params: &FamilyParams) -> Result<DensityMatrix> {
    match *params {
        FamilyParams::E0(p) => make_e0(p),
        FamilyParams::E1(p) => make_e1(p),
        FamilyParams::Werner(p) => make_werner(p),
        FamilyParams::Mvb(p) => make_mvb(p),
    }
}

/// Closed-form triple for any family parameter record.
pub fn closed_form(params: &FamilyParams) -> Result<QuantityTriple> {
    match *params {
        FamilyParams::E0(p) => closed_form_e0(p),
        FamilyParams::E1(p) => closed_form_e1(p),
        FamilyParams::Werner(p) => Ok(closed_form_werner(p)),
        FamilyParams::Mvb(p) => closed_form_mvb(p),
    }
}

/// One row of the reference curve table at linear entropy `s`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvePoint {
    pub s: f64,
    /// `2 − 2s`
    pub m_werner: f64,
    /// `1 − 3s/4 + √(1 − 3s/2)`
    pub m_mems: f64,
    /// `2 − 3s/2`
    pub m_mvb: f64,
    /// `(3√(1−s) − 1)/2`, clamped at 0
    pub c_werner: f64,
    /// `√(1 − 3s/2)`
    pub c_mvb: f64,
}

/// Concurrence of the Werner state with linear entropy `s`.
pub fn werner_concurrence_at(s: f64) -> f64 {
    ((3.0 * (1.0 - s).max(0.0).sqrt() - 1.0) / 2.0).max(0.0)
}

pub fn curve_point(s: f64) -> Result<CurvePoint> {
    if !(s.is_finite() && (0.0..=SANTOS_ENTROPY_BOUND + 1e-12).contains(&s)) {
        return Err(Error::OutOfDomain { s });
    }
    let radicand = (1.0 - 1.5 * s).max(0.0);
    Ok(CurvePoint {
        s,
        m_werner: 2.0 - 2.0 * s,
        m_mems: 1.0 - 0.75 * s + radicand.sqrt(),
        m_mvb: 2.0 - 1.5 * s,
        c_werner: werner_concurrence_at(s),
        c_mvb: radicand.sqrt(),
    })
}

pub fn reference_curves(s_grid: &[f64]) -> Result<Vec<CurvePoint>> {
    s_grid.iter().map(|&s| curve_point(s)).collect()
}

/// `points` equally spaced values covering `[0, 2/3]` inclusive.
pub fn uniform_entropy_grid(points: usize) -> Vec<f64> {
    assert!(points >= 2, "need at least two grid points");
    let last = (points - 1) as f64;
    (0..points)
        .map(|i| {
            if i == points - 1 {
                SANTOS_ENTROPY_BOUND
            } else {
                SANTOS_ENTROPY_BOUND * i as f64 / last
            }
        })
        .collect()
}
