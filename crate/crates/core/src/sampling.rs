//! Seeded random two-qubit states.
//!
//! Sample `i` of a run with seed `s` is drawn from its own ChaCha8 stream
//! (`ChaCha8Rng::seed_from_u64(s)` with `set_stream(i)`, rand_chacha 0.9), so
//! every sample is a pure function of `(s, i)` and any partition of the index
//! range across threads reproduces the sequential output exactly.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::families::{make_state, E0Params, E1Params, FamilyParams, WernerParam};
use crate::kernel::ComplexMatrix;
use crate::qstate::DensityMatrix;

pub const DEFAULT_EPSILON: f64 = 1e-4;
const MAX_EPSILON: f64 = 1e-2;

/// Which ensemble to draw from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    /// Hilbert–Schmidt measure, `GG† / tr(GG†)` for complex Ginibre `G`.
    Hs,
    /// Hilbert–Schmidt state with its smallest eigenvalue pushed below epsilon.
    Boundary,
    E0,
    E1,
    Werner,
}

impl Generator {
    pub const ALL: [Generator; 5] = [
        Generator::Hs,
        Generator::Boundary,
        Generator::E0,
        Generator::E1,
        Generator::Werner,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Generator::Hs => "hs",
            Generator::Boundary => "boundary",
            Generator::E0 => "e0",
            Generator::E1 => "e1",
            Generator::Werner => "werner",
        }
    }

    pub fn is_family(self) -> bool {
        matches!(self, Generator::E0 | Generator::E1 | Generator::Werner)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Generator::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown generator '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplerConfig {
    pub seed: u64,
    pub generator: Generator,
    pub count: u64,
    /// Upper bound on the smallest eigenvalue for [`Generator::Boundary`].
    pub epsilon: f64,
}

impl SamplerConfig {
    pub fn new(generator: Generator, count: u64, seed: u64) -> Self {
        SamplerConfig {
            seed,
            generator,
            count,
            epsilon: DEFAULT_EPSILON,
        }
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn check(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::InvalidConfig("count must be at least 1".into()));
        }
        if !(self.epsilon > 0.0 && self.epsilon <= MAX_EPSILON) {
            return Err(Error::InvalidConfig(format!(
                "epsilon = {} must lie in (0, 1e-2]",
                self.epsilon
            )));
        }
        Ok(())
    }
}

/// One generated state, with its family parameters when it has any.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    pub state: DensityMatrix,
    pub params: Option<FamilyParams>,
}

/// Stateless sampler: every draw is addressed by its index.
#[derive(Clone, Copy, Debug)]
pub struct Sampler {
    config: SamplerConfig,
}

impl Sampler {
    pub fn new(config: SamplerConfig) -> Result<Self> {
        config.check()?;
        Ok(Sampler { config })
    }

    pub fn config(&self) -> &SamplerConfig {
        &self.config
    }

    /// The RNG stream owned by sample `index`.
    pub fn rng_for(&self, index: u64) -> ChaCha8Rng {
        stream_rng(self.config.seed, index)
    }

    pub fn draw(&self, index: u64) -> Result<Sample> {
        let mut rng = self.rng_for(index);
        match self.config.generator {
            Generator::Hs => Ok(Sample {
                state: hilbert_schmidt_state(&mut rng)?,
                params: None,
            }),
            Generator::Boundary => Ok(Sample {
                state: boundary_state(&mut rng, self.config.epsilon)?,
                params: None,
            }),
            Generator::E0 => family_sample(FamilyParams::E0(random_e0_params(&mut rng))),
            Generator::E1 => family_sample(FamilyParams::E1(random_e1_params(&mut rng))),
            Generator::Werner => family_sample(FamilyParams::Werner(random_werner_param(&mut rng))),
        }
    }

    /// Samples `0..count` in order.
    pub fn iter(&self) -> impl Iterator<Item = Result<Sample>> + '_ {
        (0..self.config.count).map(move |i| self.draw(i))
    }

    /// Samples in `range`, generated in parallel, returned in index order.
    pub fn par_draw_range(&self, range: std::ops::Range<u64>) -> Result<Vec<Sample>> {
        range.into_par_iter().map(|i| self.draw(i)).collect()
    }

    pub fn par_draw_all(&self) -> Result<Vec<Sample>> {
        self.par_draw_range(0..self.config.count)
    }
}

fn family_sample(params: FamilyParams) -> Result<Sample> {
    Ok(Sample {
        state: make_state(&params)?,
        params: Some(params),
    })
}

fn expect_generator(config: &SamplerConfig, allowed: &[Generator]) -> Result<Sampler> {
    if !allowed.contains(&config.generator) {
        return Err(Error::InvalidConfig(format!(
            "generator '{}' not accepted here",
            config.generator
        )));
    }
    Sampler::new(*config)
}

/// Hilbert–Schmidt distributed states.
pub fn sample_hs(config: &SamplerConfig) -> Result<impl Iterator<Item = Result<DensityMatrix>>> {
    let sampler = expect_generator(config, &[Generator::Hs])?;
    Ok((0..config.count).map(move |i| sampler.draw(i).map(|s| s.state)))
}

/// States with one eigenvalue in `[0, epsilon]`.
pub fn sample_boundary(
    config: &SamplerConfig,
) -> Result<impl Iterator<Item = Result<DensityMatrix>>> {
    let sampler = expect_generator(config, &[Generator::Boundary])?;
    Ok((0..config.count).map(move |i| sampler.draw(i).map(|s| s.state)))
}

/// Members of the `E0`, `E1` or Werner families.
pub fn sample_family(config: &SamplerConfig) -> Result<impl Iterator<Item = Result<Sample>>> {
    let sampler = expect_generator(config, &[Generator::E0, Generator::E1, Generator::Werner])?;
    Ok((0..config.count).map(move |i| sampler.draw(i)))
}

pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// `GG† / tr(GG†)` with `G` a 4×4 matrix of standard complex Gaussians.
pub fn ginibre_state_matrix<R: Rng + ?Sized>(rng: &mut R) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(4, |_, _| complex_gaussian(rng));
    let w = g * g.adjoint();
    let tr = w.trace().re;
    w.scale(Complex64::new(1.0 / tr, 0.0)).hermitian_part()
}

pub fn hilbert_schmidt_state<R: Rng + ?Sized>(rng: &mut R) -> Result<DensityMatrix> {
    DensityMatrix::validate(ginibre_state_matrix(rng))
}

/// Hilbert–Schmidt state whose smallest eigenvalue is replaced by `u·ε`
/// (`u` uniform on `[0, 1)`); the other three eigenvalues are rescaled to sum
/// to `1 − u·ε` so the result stays normalized with `λ_min ≤ ε`.
pub fn boundary_state<R: Rng + ?Sized>(rng: &mut R, epsilon: f64) -> Result<DensityMatrix> {
    let (_, eig) = DensityMatrix::validate_with_spectrum(ginibre_state_matrix(rng))?;
    let small = rng.random::<f64>() * epsilon;
    let vals = eig.values();
    let rest: f64 = vals[1..].iter().map(|x| x.max(0.0)).sum();
    let k = (1.0 - small) / rest;
    let new_vals = [small, vals[1].max(0.0) * k, vals[2].max(0.0) * k, vals[3].max(0.0) * k];
    DensityMatrix::validate(eig.reassemble_with(&new_vals).hermitian_part())
}

/// `(a, b)` uniform on the triangle `a, b ≥ 0, a + b ≤ 1`; `c` uniform on
/// `[0, min(1, 2√(ab))]`; `θ` uniform on `[0, 2π)`.
pub fn random_e0_params<R: Rng + ?Sized>(rng: &mut R) -> E0Params {
    let (mut a, mut b): (f64, f64) = (rng.random(), rng.random());
    if a + b > 1.0 {
        a = 1.0 - a;
        b = 1.0 - b;
    }
    let c_max = (2.0 * (a * b).sqrt()).min(1.0);
    E0Params {
        a,
        b,
        c: rng.random::<f64>() * c_max,
        theta: rng.random::<f64>() * TAU,
    }
}

/// Diagonal uniform on the 3-simplex, coherence moduli uniform up to their
/// positivity bounds, phases uniform.
pub fn random_e1_params<R: Rng + ?Sized>(rng: &mut R) -> E1Params {
    let e: [f64; 4] = std::array::from_fn(|_| rng.sample(Exp1));
    let total: f64 = e.iter().sum();
    let mut diag = e.map(|x| x / total);
    // exact unit sum
    diag[3] = 1.0 - diag[0] - diag[1] - diag[2];
    if diag[3] < 0.0 {
        diag[3] = 0.0;
    }
    let m14 = rng.random::<f64>() * (diag[0] * diag[3]).sqrt();
    let m23 = rng.random::<f64>() * (diag[1] * diag[2]).sqrt();
    let r14 = Complex64::from_polar(m14, rng.random::<f64>() * TAU);
    let r23 = Complex64::from_polar(m23, rng.random::<f64>() * TAU);
    E1Params { diag, r14, r23 }
}

pub fn random_werner_param<R: Rng + ?Sized>(rng: &mut R) -> WernerParam {
    WernerParam::new(rng.random::<f64>()).expect("unit interval")
}

/// Isotropic random unit vector in R³.
pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-12 {
            return v.map(|x| x / n);
        }
    }
}

/// Haar-random element of SU(2).
pub fn random_su2<R: Rng + ?Sized>(rng: &mut R) -> ComplexMatrix {
    let q: [f64; 4] = loop {
        let q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-12 {
            break q.map(|x| x / n);
        }
    };
    let alpha = Complex64::new(q[0], q[1]);
    let beta = Complex64::new(q[2], q[3]);
    ComplexMatrix::from_fn(2, |i, j| match (i, j) {
        (0, 0) => alpha,
        (0, 1) => -beta.conj(),
        (1, 0) => beta,
        _ => alpha.conj(),
    })
}

/// Random maximally entangled vector `(I ⊗ U)|Φ⁺⟩` with Haar `U`.
pub fn random_maximally_entangled<R: Rng + ?Sized>(rng: &mut R) -> [Complex64; 4] {
    let u = random_su2(rng);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    // (I ⊗ U)(|00⟩ + |11⟩)/√2 = (|0⟩⊗U|0⟩ + |1⟩⊗U|1⟩)/√2
    [u[(0, 0)] * h, u[(1, 0)] * h, u[(0, 1)] * h, u[(1, 1)] * h]
}
