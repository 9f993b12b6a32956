use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{DensityMatrix, PureState, PSD_TOL};
use crate::error::{Error, Result};
use crate::matrix::{hermitian_eigen, hs_norm, ComplexMatrix};

/// Consecutive non-positive draws tolerated before the sampler gives up.
pub const MAX_REJECTIONS: usize = 1_000_000;

/// Parameters of the noisy-singlet family `ρ(p, d)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseBallConfig {
    /// Singlet weight.
    pub p: f64,
    /// Hilbert–Schmidt radius of the noise ball around 𝟙/4.
    pub d: f64,
    pub seed: u64,
    pub samples: usize,
}

impl Default for NoiseBallConfig {
    fn default() -> Self {
        Self {
            p: 0.0,
            d: 0.2,
            seed: 42,
            samples: 2000,
        }
    }
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re * scale, im * scale)
}

/// Traceless Hermitian 4×4 matrix with an isotropic Gaussian law in the
/// Hilbert–Schmidt metric (GUE projected onto the traceless subspace).
fn traceless_gaussian<R: Rng + ?Sized>(rng: &mut R) -> ComplexMatrix {
    let n = 4;
    let mut g = ComplexMatrix::zeros(n);
    for i in 0..n {
        let d: f64 = StandardNormal.sample(rng);
        g[(i, i)] = Complex64::new(d, 0.0);
        for j in i + 1..n {
            let z = complex_gaussian(rng, std::f64::consts::FRAC_1_SQRT_2);
            g[(i, j)] = z;
            g[(j, i)] = z.conj();
        }
    }
    let mean = g.trace().re / n as f64;
    for i in 0..n {
        g[(i, i)] -= mean;
    }
    g
}

/// Draws σ uniformly from the 15-dimensional ball `‖σ − 𝟙/4‖ ≤ d` of
/// two-qubit Hermitian unit-trace matrices, rejecting draws that are not
/// positive semidefinite.
pub fn sample_noise_ball<R: Rng + ?Sized>(d: f64, rng: &mut R) -> Result<DensityMatrix> {
    if !(d.is_finite() && d >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "noise radius {d} must be ≥ 0"
        )));
    }
    let center = ComplexMatrix::identity(4).scale(0.25);
    for _ in 0..MAX_REJECTIONS {
        let g = traceless_gaussian(rng);
        let u: f64 = rng.random();
        let norm = hs_norm(&g);
        if norm == 0.0 {
            continue;
        }
        let r = d * u.powf(1.0 / 15.0);
        let sigma = &center + &g.scale(r / norm);
        if hermitian_eigen(&sigma)?.min_eigenvalue() >= PSD_TOL {
            return Ok(DensityMatrix {
                matrix: sigma,
                dims: (2, 2),
            });
        }
    }
    Err(Error::RejectionOverflow(MAX_REJECTIONS))
}

/// Haar-random pure state on `C^dA ⊗ C^dB`.
pub fn random_pure_state<R: Rng + ?Sized>(dims: (usize, usize), rng: &mut R) -> PureState {
    let amps = (0..dims.0 * dims.1)
        .map(|_| complex_gaussian(rng, 1.0))
        .collect();
    PureState::normalized(amps, dims).expect("gaussian vector is nonzero")
}

/// `|a⟩ ⊗ |b⟩` with independently Haar-random local factors.
pub fn random_product_state<R: Rng + ?Sized>(dims: (usize, usize), rng: &mut R) -> PureState {
    let a = random_pure_state((1, dims.0), rng);
    let b = random_pure_state((1, dims.1), rng);
    PureState::product(a.amplitudes(), b.amplitudes()).expect("product of unit vectors")
}

/// Random mixed state `GG†/Tr(GG†)` with `G` a square complex Ginibre
/// matrix (Hilbert–Schmidt measure).
pub fn random_density_matrix<R: Rng + ?Sized>(dims: (usize, usize), rng: &mut R) -> DensityMatrix {
    let n = dims.0 * dims.1;
    let mut g = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = complex_gaussian(rng, 1.0);
        }
    }
    let w = &g * &g.adjoint();
    let tr = w.trace().re;
    DensityMatrix {
        matrix: w.scale(1.0 / tr),
        dims,
    }
}

/// Convex mixture of `components` random product states with flat
/// (Dirichlet(1, …, 1)) weights.
pub fn random_separable<R: Rng + ?Sized>(
    components: usize,
    dims: (usize, usize),
    rng: &mut R,
) -> Result<DensityMatrix> {
    if components == 0 {
        return Err(Error::InvalidParameter(
            "need at least one product component".into(),
        ));
    }
    let weights: Vec<f64> = (0..components).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = weights.iter().sum();
    let n = dims.0 * dims.1;
    let mut m = ComplexMatrix::zeros(n);
    for w in weights {
        let prod = random_product_state(dims, rng);
        m = &m + &prod.projector().scale(w / total);
    }
    DensityMatrix::new(m, dims)
}
