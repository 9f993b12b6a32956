//! Bipartite quantum states: validated density matrices, pure states and
//! their Schmidt coefficients, the two-qubit Bell family, the noise-ball
//! sampler, and the partial-transpose test.

mod bell;
mod json;
mod sampling;

pub use bell::{
    bell_diagonal_state, bell_populations, bell_projectors, bell_states, coords_of,
    in_state_tetrahedron, in_witness_octahedron, populations_of, BellDiagonalCoords,
};
pub use json::{DensityMatrixFile, LoadError};
pub use sampling::{
    random_density_matrix, random_product_state, random_pure_state, random_separable,
    sample_noise_ball, NoiseBallConfig, MAX_REJECTIONS,
};

use num_complex::Complex64;

use crate::error::{Error, Invariant, InvariantViolation, Result};
use crate::matrix::{hermitian_eigen, partial_transpose, ComplexMatrix, HERMITIAN_TOL};

pub const TRACE_TOL: f64 = 1e-10;

/// Minimum eigenvalue accepted as positive semidefinite.
pub const PSD_TOL: f64 = -1e-9;

pub const NORM_TOL: f64 = 1e-12;

/// A Hermitian, unit-trace, positive-semidefinite operator on `C^dA ⊗ C^dB`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    dims: (usize, usize),
}

impl DensityMatrix {
    /// Validates every invariant and reports the first one that fails.
    pub fn new(matrix: ComplexMatrix, dims: (usize, usize)) -> Result<Self> {
        validate(&matrix, dims)?;
        Ok(Self { matrix, dims })
    }

    pub fn maximally_mixed(dims: (usize, usize)) -> Self {
        let n = dims.0 * dims.1;
        Self {
            matrix: ComplexMatrix::identity(n).scale(1.0 / n as f64),
            dims,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn is_two_qubit(&self) -> bool {
        self.dims == (2, 2)
    }

    pub fn require_two_qubit(&self) -> Result<()> {
        if self.is_two_qubit() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: 4,
                found: self.dim(),
            })
        }
    }

    /// `λ·self + (1−λ)·other`.
    pub fn mix(&self, other: &Self, weight: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&weight) {
            return Err(Error::InvalidWeight(weight));
        }
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let m = &self.matrix.scale(weight) + &other.matrix.scale(1.0 - weight);
        Self::new(m, self.dims)
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }
}

fn validate(
    m: &ComplexMatrix,
    dims: (usize, usize),
) -> std::result::Result<(), InvariantViolation> {
    if dims.0 == 0 || dims.1 == 0 || dims.0 * dims.1 != m.dim() {
        return Err(InvariantViolation::new(
            Invariant::Dimensions,
            format!(
                "dims {}x{} do not match matrix dimension {}",
                dims.0,
                dims.1,
                m.dim()
            ),
        ));
    }
    if !m.is_finite() {
        return Err(InvariantViolation::new(
            Invariant::Finite,
            "matrix has non-finite entries",
        ));
    }
    let dev = m.hermiticity_deviation();
    if dev > HERMITIAN_TOL {
        return Err(InvariantViolation::new(
            Invariant::Hermitian,
            format!("‖ρ − ρ†‖ = {dev:.3e} exceeds {HERMITIAN_TOL:e}"),
        ));
    }
    let tr = m.trace().re;
    if (tr - 1.0).abs() > TRACE_TOL {
        return Err(InvariantViolation::new(
            Invariant::UnitTrace,
            format!("trace is {tr} (expected 1)"),
        ));
    }
    let min = hermitian_eigen(m)
        .map_err(|e| InvariantViolation::new(Invariant::PositiveSemidefinite, e.to_string()))?
        .min_eigenvalue();
    if min < PSD_TOL {
        return Err(InvariantViolation::new(
            Invariant::PositiveSemidefinite,
            format!("minimum eigenvalue {min:.3e} is negative"),
        ));
    }
    Ok(())
}

/// A normalized vector in `C^dA ⊗ C^dB`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
    dims: (usize, usize),
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>, dims: (usize, usize)) -> Result<Self> {
        check_dims(amplitudes.len(), dims)?;
        let norm = norm(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(InvariantViolation::new(
                Invariant::UnitNorm,
                format!("state norm is {norm}"),
            )
            .into());
        }
        Ok(Self { amplitudes, dims })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(amplitudes: Vec<Complex64>, dims: (usize, usize)) -> Result<Self> {
        check_dims(amplitudes.len(), dims)?;
        let norm = norm(&amplitudes);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidParameter(
                "cannot normalize a zero or non-finite vector".into(),
            ));
        }
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|a| a / norm).collect(),
            dims,
        })
    }

    /// Computational basis state `|a⟩ ⊗ |b⟩`.
    pub fn basis(a: usize, b: usize, dims: (usize, usize)) -> Result<Self> {
        if a >= dims.0 || b >= dims.1 {
            return Err(Error::InvalidParameter(format!(
                "basis index ({a},{b}) out of range for dims {dims:?}"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dims.0 * dims.1];
        amps[a * dims.1 + b] = Complex64::new(1.0, 0.0);
        Ok(Self {
            amplitudes: amps,
            dims,
        })
    }

    /// `|a⟩ ⊗ |b⟩` for normalized local vectors.
    pub fn product(a: &[Complex64], b: &[Complex64]) -> Result<Self> {
        let amps = a
            .iter()
            .flat_map(|x| b.iter().map(move |y| x * y))
            .collect();
        Self::normalized(amps, (a.len(), b.len()))
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::projector(&self.amplitudes)
    }

    pub fn density_matrix(&self) -> DensityMatrix {
        DensityMatrix {
            matrix: self.projector(),
            dims: self.dims,
        }
    }
}

fn check_dims(len: usize, dims: (usize, usize)) -> Result<()> {
    if dims.0 == 0 || dims.1 == 0 || dims.0 * dims.1 != len {
        return Err(Error::DimensionMismatch {
            expected: dims.0 * dims.1,
            found: len,
        });
    }
    Ok(())
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Schmidt coefficients in descending order (`min(dA, dB)` of them).
///
/// These are the singular values of the `dA × dB` amplitude matrix Ψ,
/// obtained as square roots of the eigenvalues of ΨΨ†.
pub fn schmidt_coefficients(psi: &PureState) -> Result<Vec<f64>> {
    let (da, db) = psi.dims;
    check_dims(psi.amplitudes.len(), psi.dims)?;
    let amp = |i: usize, k: usize| psi.amplitudes[i * db + k];
    let small = da.min(db);
    let mut gram = ComplexMatrix::zeros(small);
    for i in 0..small {
        for j in 0..small {
            gram[(i, j)] = if da <= db {
                (0..db).map(|k| amp(i, k) * amp(j, k).conj()).sum()
            } else {
                (0..da).map(|k| amp(k, i).conj() * amp(k, j)).sum()
            };
        }
    }
    let spectrum = hermitian_eigen(&gram)?;
    Ok(spectrum
        .eigenvalues
        .iter()
        .rev()
        .map(|&l| l.max(0.0).sqrt())
        .collect())
}

/// `p·|ψ⁻⟩⟨ψ⁻| + (1−p)·σ` for a two-qubit noise state σ.
pub fn noisy_singlet(p: f64, sigma: &DensityMatrix) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidWeight(p));
    }
    sigma.require_two_qubit()?;
    let singlet = bell_states()[3].density_matrix();
    singlet.mix(sigma, p)
}

/// Werner state `p·|ψ⁻⟩⟨ψ⁻| + (1−p)·𝟙/4`.
pub fn werner(p: f64) -> Result<DensityMatrix> {
    noisy_singlet(p, &DensityMatrix::maximally_mixed((2, 2)))
}

/// Negative-partial-transpose test: `(min eig(ρ^Γ) < −1e-9, min eig(ρ^Γ))`.
pub fn is_npt(rho: &DensityMatrix) -> Result<(bool, f64)> {
    let pt = partial_transpose(&rho.matrix, rho.dims)?;
    let min = hermitian_eigen(&pt)?.min_eigenvalue();
    Ok((min < PSD_TOL, min))
}
