//! Separability criteria built from uncertainty relations.
//!
//! Variance-based: [`lur_value`] for arbitrary observables and bounds,
//! [`pauli_lur`] for the collective Pauli observables `σi⊗𝟙 + 𝟙⊗σi` with the
//! separable bound 4, and the equivalent nonlinear witness
//! [`nonlinear_witness_value`] together with its linear part.
//!
//! Entropic: measurement distributions, Shannon and Tsallis entropies, the
//! Maassen–Uffink constant, the product-observable criterion
//! [`eur_criterion3`] and the Schmidt-coefficient bound [`criterion4_bound`]
//! with its Bell-basis specializations. See [`entropy`].
//!
//! Every criterion is a necessary condition for separability, so a verdict
//! only reports `detected` when the value is strictly below the threshold.

pub mod entropy;

pub use entropy::{
    bell_tsallis_criterion, bell_tsallis_from_populations, bell_variance_criterion,
    bell_variance_from_populations, criterion4_bound, eur_criterion3, eur_criterion3_with,
    maassen_bound, max_squared_schmidt, measurement_distribution, shannon_entropy,
    tsallis_criterion, tsallis_entropy, EntropicFunction, ProbabilityDistribution,
    ProductObservable, Shannon, Tsallis,
};

use std::fmt;
use std::sync::OnceLock;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::{expectation, hermitian_eigen, kron, pauli, Axis, ComplexMatrix, Spectrum};
use crate::states::DensityMatrix;

/// Eigenvalues closer than this are treated as one outcome.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// Separable bound of the collective Pauli LUR.
pub const PAULI_LUR_BOUND: f64 = 4.0;

/// One eigenspace of an observable.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralComponent {
    pub eigenvalue: f64,
    pub projector: ComplexMatrix,
    pub rank: usize,
}

/// A Hermitian operator together with its spectral decomposition
/// `M = Σ μ_i X_i` over pairwise distinct eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    matrix: ComplexMatrix,
    spectrum: Spectrum,
    components: Vec<SpectralComponent>,
}

impl Observable {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let spectrum = hermitian_eigen(&matrix)?;
        let n = matrix.dim();
        let mut components: Vec<SpectralComponent> = Vec::new();
        let mut group_start = f64::NAN;
        let mut members: Vec<usize> = Vec::new();

        let flush = |members: &mut Vec<usize>, out: &mut Vec<SpectralComponent>| {
            if members.is_empty() {
                return;
            }
            let mut projector = ComplexMatrix::zeros(n);
            for &j in members.iter() {
                projector = &projector + &ComplexMatrix::projector(&spectrum.eigenvector(j));
            }
            let eigenvalue = members
                .iter()
                .map(|&j| spectrum.eigenvalues[j])
                .sum::<f64>()
                / members.len() as f64;
            out.push(SpectralComponent {
                eigenvalue,
                projector,
                rank: members.len(),
            });
            members.clear();
        };

        for (j, &lambda) in spectrum.eigenvalues.iter().enumerate() {
            if members.is_empty() || lambda - group_start > DEGENERACY_TOL {
                flush(&mut members, &mut components);
                group_start = lambda;
            }
            members.push(j);
        }
        flush(&mut members, &mut components);

        Ok(Self {
            matrix,
            spectrum,
            components,
        })
    }

    pub fn pauli(axis: Axis) -> Self {
        Self::new(pauli(axis)).expect("Pauli matrices are Hermitian")
    }

    /// `A ⊗ 𝟙 + 𝟙 ⊗ B`.
    pub fn collective(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Self> {
        let ia = ComplexMatrix::identity(a.dim());
        let ib = ComplexMatrix::identity(b.dim());
        Self::new(&kron(a, &ib) + &kron(&ia, b))
    }

    /// `A ⊗ B`.
    pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Self> {
        Self::new(kron(a, b))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    /// Distinct eigenvalues in ascending order with their eigenprojectors.
    pub fn components(&self) -> &[SpectralComponent] {
        &self.components
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.components.iter().all(|c| c.rank == 1)
    }
}

/// Identifies which criterion produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CriterionId {
    LinearWitness,
    NonlinearWitness,
    Lur,
    PauliLur,
    EntropicPair,
    Tsallis { q: f64 },
    BellVariance,
    BellTsallis { q: f64 },
}

impl fmt::Display for CriterionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CriterionId::LinearWitness => f.write_str("linear_witness"),
            CriterionId::NonlinearWitness => f.write_str("nonlinear_witness"),
            CriterionId::Lur => f.write_str("lur"),
            CriterionId::PauliLur => f.write_str("pauli_lur"),
            CriterionId::EntropicPair => f.write_str("entropic_pair"),
            CriterionId::Tsallis { q } => write!(f, "tsallis_q{q}"),
            CriterionId::BellVariance => f.write_str("bell_variance"),
            CriterionId::BellTsallis { q } => write!(f, "bell_tsallis_q{q}"),
        }
    }
}

impl Serialize for CriterionId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Outcome of evaluating one criterion: entanglement is detected exactly when
/// `value < threshold`.
///
/// For Tsallis criteria at large `q` both numbers approach `1/(q − 1)` and may
/// round to the same double; `detected` is then decided from the
/// well-conditioned difference `value − threshold` (see
/// [`CriterionVerdict::from_margin`]).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriterionVerdict {
    #[serde(rename = "id")]
    pub criterion: CriterionId,
    pub value: f64,
    pub threshold: f64,
    pub detected: bool,
}

impl CriterionVerdict {
    pub fn new(criterion: CriterionId, value: f64, threshold: f64) -> Self {
        Self {
            criterion,
            value,
            threshold,
            detected: value < threshold,
        }
    }

    /// Verdict whose detection flag comes from a separately computed
    /// `margin = value − threshold`.
    pub fn from_margin(criterion: CriterionId, value: f64, threshold: f64, margin: f64) -> Self {
        Self {
            criterion,
            value,
            threshold,
            detected: margin < 0.0,
        }
    }
}

fn check_dim(rho: &DensityMatrix, m: &Observable) -> Result<()> {
    if rho.dim() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: m.dim(),
        });
    }
    Ok(())
}

/// `δ²(M)_ρ = ⟨M²⟩ − ⟨M⟩²`, clamped at zero.
pub fn variance(rho: &DensityMatrix, m: &Observable) -> Result<f64> {
    check_dim(rho, m)?;
    let mean = expectation(rho.matrix(), m.matrix())?;
    let square = m.matrix() * m.matrix();
    let second = expectation(rho.matrix(), &square)?;
    let v = second - mean * mean;
    debug_assert!(v >= -1e-10, "negative variance {v}");
    Ok(v.max(0.0))
}

/// `Σ δ²(M_i)_ρ` against a separable lower bound.
pub fn lur_value(
    rho: &DensityMatrix,
    observables: &[Observable],
    bound: f64,
) -> Result<CriterionVerdict> {
    let mut total = 0.0;
    for m in observables {
        total += variance(rho, m)?;
    }
    Ok(CriterionVerdict::new(CriterionId::Lur, total, bound))
}

struct TwoQubitOperators {
    /// σi ⊗ σi
    correlations: [ComplexMatrix; 3],
    /// σi ⊗ 𝟙 + 𝟙 ⊗ σi
    collective: [Observable; 3],
}

fn two_qubit_operators() -> &'static TwoQubitOperators {
    static OPS: OnceLock<TwoQubitOperators> = OnceLock::new();
    OPS.get_or_init(|| TwoQubitOperators {
        correlations: Axis::ALL.map(|a| kron(&pauli(a), &pauli(a))),
        collective: Axis::ALL
            .map(|a| Observable::collective(&pauli(a), &pauli(a)).expect("Hermitian")),
    })
}

/// The observables `σi⊗𝟙 + 𝟙⊗σi`, `i = x, y, z`.
pub fn collective_paulis() -> &'static [Observable; 3] {
    &two_qubit_operators().collective
}

/// `Σ_i δ²(σi⊗𝟙 + 𝟙⊗σi)` with bound 4.
pub fn pauli_lur(rho: &DensityMatrix) -> Result<CriterionVerdict> {
    rho.require_two_qubit()?;
    let v = lur_value(rho, collective_paulis(), PAULI_LUR_BOUND)?;
    Ok(CriterionVerdict::new(
        CriterionId::PauliLur,
        v.value,
        v.threshold,
    ))
}

/// `⟨𝟙⊗𝟙 + σx⊗σx + σy⊗σy + σz⊗σz⟩_ρ`; negative values certify entanglement.
pub fn linear_witness_value(rho: &DensityMatrix) -> Result<f64> {
    rho.require_two_qubit()?;
    let mut total = 1.0;
    for corr in &two_qubit_operators().correlations {
        total += expectation(rho.matrix(), corr)?;
    }
    Ok(total)
}

pub fn linear_witness(rho: &DensityMatrix) -> Result<CriterionVerdict> {
    Ok(CriterionVerdict::new(
        CriterionId::LinearWitness,
        linear_witness_value(rho)?,
        0.0,
    ))
}

/// Linear witness minus `½ Σ_i ⟨σi⊗𝟙 + 𝟙⊗σi⟩²`, threshold 0.
///
/// Since `(σi⊗𝟙 + 𝟙⊗σi)² = 2·𝟙 + 2·σi⊗σi`, this equals
/// `(Σ δ²(M_i) − 4)/2`, i.e. it detects exactly the states the Pauli LUR
/// detects.
pub fn nonlinear_witness_value(rho: &DensityMatrix) -> Result<CriterionVerdict> {
    let linear = linear_witness_value(rho)?;
    let mut squares = 0.0;
    for m in collective_paulis() {
        let mean = expectation(rho.matrix(), m.matrix())?;
        squares += mean * mean;
    }
    let value = linear - 0.5 * squares;
    debug_assert!(
        {
            let lur = pauli_lur(rho)?.value;
            (value - (lur - PAULI_LUR_BOUND) / 2.0).abs() < 1e-9
        },
        "nonlinear witness disagrees with the Pauli LUR"
    );
    Ok(CriterionVerdict::new(
        CriterionId::NonlinearWitness,
        value,
        0.0,
    ))
}
