//! Measurement statistics, entropic functions and the entropic criteria.

use super::{check_dim, CriterionId, CriterionVerdict, Observable, DEGENERACY_TOL};
use crate::error::{Error, Result};
use crate::matrix::{expectation, ComplexMatrix};
use crate::states::{populations_of, schmidt_coefficients, DensityMatrix, PureState};

/// Entries above `-NEGATIVE_TOL` are clamped to zero.
const NEGATIVE_TOL: f64 = 1e-12;
const SUM_TOL: f64 = 1e-9;

/// Outcome probabilities of a measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityDistribution {
    probabilities: Vec<f64>,
}

impl ProbabilityDistribution {
    pub fn new(mut probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(Error::InvalidParameter("empty distribution".into()));
        }
        for p in probabilities.iter_mut() {
            if !p.is_finite() || *p < -NEGATIVE_TOL {
                return Err(Error::InvalidParameter(format!("invalid probability {p}")));
            }
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        let sum: f64 = probabilities.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidParameter(format!(
                "probabilities sum to {sum}"
            )));
        }
        Ok(Self { probabilities })
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0);
        Self {
            probabilities: vec![1.0 / n as f64; n],
        }
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }
}

/// An entropy of the form `S(P) = Σ_k s(p_k)` with concave `s`.
///
/// Shannon and Tsallis entropies are provided; other concave functions plug
/// into [`eur_criterion3_with`] the same way.
pub trait EntropicFunction {
    fn term(&self, p: f64) -> f64;

    fn entropy(&self, dist: &ProbabilityDistribution) -> f64 {
        dist.probabilities()
            .iter()
            .map(|&p| self.term(p))
            .sum::<f64>()
            .max(0.0)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Shannon;

impl EntropicFunction for Shannon {
    fn term(&self, p: f64) -> f64 {
        if p <= 0.0 {
            0.0
        } else {
            -p * p.ln()
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Tsallis {
    q: f64,
}

impl Tsallis {
    pub fn new(q: f64) -> Result<Self> {
        if !(q.is_finite() && q > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "Tsallis parameter q = {q} must be > 0"
            )));
        }
        Ok(Self { q })
    }

    pub fn q(&self) -> f64 {
        self.q
    }
}

impl EntropicFunction for Tsallis {
    fn term(&self, p: f64) -> f64 {
        if self.q == 1.0 {
            return Shannon.term(p);
        }
        (p - p.powf(self.q)) / (self.q - 1.0)
    }

    fn entropy(&self, dist: &ProbabilityDistribution) -> f64 {
        if self.q == 1.0 {
            return Shannon.entropy(dist);
        }
        let power_sum: f64 = dist.probabilities().iter().map(|&p| p.powf(self.q)).sum();
        ((1.0 - power_sum) / (self.q - 1.0)).max(0.0)
    }
}

/// `−Σ p ln p` with `0 ln 0 = 0`.
pub fn shannon_entropy(p: &ProbabilityDistribution) -> f64 {
    Shannon.entropy(p)
}

/// `(1 − Σ p^q)/(q − 1)`, Shannon at `q = 1`.
pub fn tsallis_entropy(p: &ProbabilityDistribution, q: f64) -> Result<f64> {
    Ok(Tsallis::new(q)?.entropy(p))
}

/// Outcome distribution `p_i = Tr(ρ X_i)` over the distinct eigenvalues of
/// `m`, in ascending eigenvalue order.
pub fn measurement_distribution(
    rho: &DensityMatrix,
    m: &Observable,
) -> Result<ProbabilityDistribution> {
    check_dim(rho, m)?;
    let probs = m
        .components()
        .iter()
        .map(|c| expectation(rho.matrix(), &c.projector))
        .collect::<Result<Vec<_>>>()?;
    ProbabilityDistribution::new(probs)
}

/// Maassen–Uffink constant `−2 ln max_{i,j} |⟨m_i|n_j⟩|` for two
/// nondegenerate observables.
pub fn maassen_bound(m: &Observable, n: &Observable) -> Result<f64> {
    if m.dim() != n.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: n.dim(),
        });
    }
    if !m.is_nondegenerate() || !n.is_nondegenerate() {
        return Err(Error::DegenerateObservable);
    }
    let (vm, vn) = (&m.spectrum().eigenvectors, &n.spectrum().eigenvectors);
    let dim = m.dim();
    let mut max_overlap: f64 = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            let overlap: num_complex::Complex64 =
                (0..dim).map(|k| vm[(k, i)].conj() * vn[(k, j)]).sum();
            max_overlap = max_overlap.max(overlap.norm());
        }
    }
    Ok((-2.0 * max_overlap.ln()).max(0.0))
}

/// A product observable `A ⊗ B` whose local factors have no zero eigenvalue.
#[derive(Debug, Clone)]
pub struct ProductObservable {
    alice: Observable,
    bob: Observable,
    joint: Observable,
}

impl ProductObservable {
    pub fn new(alice: &ComplexMatrix, bob: &ComplexMatrix) -> Result<Self> {
        let alice = Observable::new(alice.clone())?;
        let bob = Observable::new(bob.clone())?;
        for (party, obs) in [("first", &alice), ("second", &bob)] {
            if obs
                .components()
                .iter()
                .any(|c| c.eigenvalue.abs() <= DEGENERACY_TOL)
            {
                return Err(Error::InvalidParameter(format!(
                    "{party} factor has a zero eigenvalue"
                )));
            }
        }
        let joint = Observable::tensor(alice.matrix(), bob.matrix())?;
        Ok(Self { alice, bob, joint })
    }

    pub fn alice(&self) -> &Observable {
        &self.alice
    }

    pub fn bob(&self) -> &Observable {
        &self.bob
    }

    pub fn joint(&self) -> &Observable {
        &self.joint
    }
}

/// `S(A₁⊗B₁) + S(A₂⊗B₂)` (Shannon, degeneracy-aware) against a constant `c`
/// taken from a valid single-party entropic uncertainty relation.
///
/// The validity of `c` is the caller's responsibility; [`maassen_bound`] is
/// one way to obtain it. Factors with a zero eigenvalue are rejected by
/// [`ProductObservable::new`]; dropping that requirement is untested.
pub fn eur_criterion3(
    rho: &DensityMatrix,
    m1: &ProductObservable,
    m2: &ProductObservable,
    c: f64,
) -> Result<CriterionVerdict> {
    eur_criterion3_with(&Shannon, rho, m1, m2, c)
}

pub fn eur_criterion3_with<S: EntropicFunction>(
    entropy: &S,
    rho: &DensityMatrix,
    m1: &ProductObservable,
    m2: &ProductObservable,
    c: f64,
) -> Result<CriterionVerdict> {
    let s1 = entropy.entropy(&measurement_distribution(rho, m1.joint())?);
    let s2 = entropy.entropy(&measurement_distribution(rho, m2.joint())?);
    Ok(CriterionVerdict::new(CriterionId::EntropicPair, s1 + s2, c))
}

/// Separable lower bound on `S^T_q(M)` when every eigenvector of `M` has
/// squared Schmidt coefficients at most `c`:
///
/// `(1 − ⌊1/c⌋ c^q − (1 − ⌊1/c⌋ c)^q)/(q − 1)`,
///
/// and at `q = 1` the Shannon form `⌊1/c⌋(−c ln c) − r ln r` with
/// `r = 1 − ⌊1/c⌋ c`.
pub fn criterion4_bound(c: f64, q: f64) -> Result<f64> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "Schmidt bound c = {c} must lie in (0, 1)"
        )));
    }
    if !(q.is_finite() && q > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "Tsallis parameter q = {q} must be > 0"
        )));
    }
    let k = (1.0 / c).floor();
    let r = (1.0 - k * c).max(0.0);
    let bound = if q == 1.0 {
        let r_ln_r = if r > 0.0 { r * r.ln() } else { 0.0 };
        k * (-c * c.ln()) - r_ln_r
    } else {
        (1.0 - k * c.powf(q) - r.powf(q)) / (q - 1.0)
    };
    Ok(bound.max(0.0))
}

/// Largest squared Schmidt coefficient over the eigenvectors of a
/// nondegenerate observable on `C^dA ⊗ C^dB`.
pub fn max_squared_schmidt(m: &Observable, dims: (usize, usize)) -> Result<f64> {
    if !m.is_nondegenerate() {
        return Err(Error::DegenerateObservable);
    }
    let mut best: f64 = 0.0;
    for j in 0..m.dim() {
        let psi = PureState::normalized(m.spectrum().eigenvector(j), dims)?;
        let top = schmidt_coefficients(&psi)?[0];
        best = best.max(top * top);
    }
    Ok(best)
}

/// Tsallis verdict for a measured distribution against
/// [`criterion4_bound`]`(c, q)`.
///
/// `value − threshold = (⌊1/c⌋ c^q + r^q − Σ p^q)/(q − 1)`; detection is
/// decided from this form because at large `q` the entropy and the bound
/// agree to far more digits than a double carries.
fn tsallis_verdict(
    criterion: CriterionId,
    dist: &ProbabilityDistribution,
    c: f64,
    q: f64,
) -> Result<CriterionVerdict> {
    let value = tsallis_entropy(dist, q)?;
    let threshold = criterion4_bound(c, q)?;
    if q == 1.0 {
        return Ok(CriterionVerdict::new(criterion, value, threshold));
    }
    let k = (1.0 / c).floor();
    let r = (1.0 - k * c).max(0.0);
    let bound_sum = k * c.powf(q) + r.powf(q);
    let power_sum: f64 = dist.probabilities().iter().map(|&p| p.powf(q)).sum();
    let margin = (bound_sum - power_sum) / (q - 1.0);
    Ok(CriterionVerdict::from_margin(
        criterion, value, threshold, margin,
    ))
}

/// Tsallis criterion for a general nondegenerate observable: `S^T_q(M)_ρ`
/// against [`criterion4_bound`]`(c, q)`.
pub fn tsallis_criterion(
    rho: &DensityMatrix,
    m: &Observable,
    c: f64,
    q: f64,
) -> Result<CriterionVerdict> {
    if !m.is_nondegenerate() {
        return Err(Error::DegenerateObservable);
    }
    let dist = measurement_distribution(rho, m)?;
    tsallis_verdict(CriterionId::Tsallis { q }, &dist, c, q)
}

/// `1 − Σ_i p_i²` over the Bell populations, threshold 1/2.
pub fn bell_variance_from_populations(populations: &[f64; 4]) -> CriterionVerdict {
    let value = 1.0 - populations.iter().map(|p| p * p).sum::<f64>();
    CriterionVerdict::new(CriterionId::BellVariance, value, 0.5)
}

pub fn bell_variance_criterion(rho: &DensityMatrix) -> Result<CriterionVerdict> {
    Ok(bell_variance_from_populations(&populations_of(rho)?))
}

/// Tsallis entropy of the Bell populations against the bound for Schmidt
/// coefficient `c = 1/2`, i.e. `(1 − 2^{1−q})/(q − 1)`.
pub fn bell_tsallis_from_populations(populations: &[f64; 4], q: f64) -> Result<CriterionVerdict> {
    let dist = ProbabilityDistribution::new(populations.to_vec())?;
    tsallis_verdict(CriterionId::BellTsallis { q }, &dist, 0.5, q)
}

pub fn bell_tsallis_criterion(rho: &DensityMatrix, q: f64) -> Result<CriterionVerdict> {
    bell_tsallis_from_populations(&populations_of(rho)?, q)
}
