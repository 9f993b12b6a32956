//! Bell states and the correlation coordinates of Bell-diagonal states.
//!
//! With `x = ⟨σx⊗σx⟩`, `y = ⟨σy⊗σy⟩`, `z = ⟨σz⊗σz⟩` the Bell populations of a
//! two-qubit state are
//!
//! ```text
//! p1 = (1 + x − y + z)/4    |BS1⟩ = (|00⟩ + |11⟩)/√2
//! p2 = (1 − x + y + z)/4    |BS2⟩ = (|00⟩ − |11⟩)/√2
//! p3 = (1 + x + y − z)/4    |BS3⟩ = (|01⟩ + |10⟩)/√2
//! p4 = (1 − x − y − z)/4    |BS4⟩ = (|01⟩ − |10⟩)/√2
//! ```
//!
//! The state tetrahedron is `p_i ≥ 0` for all `i`, the separable octahedron
//! additionally requires `p_i ≤ 1/2`. Written as half-spaces, positivity of
//! `p1` is `−x + y − z ≤ 1` while `p1 ≤ 1/2` is `x − y + z ≤ 1`; the two
//! regions are derived here from the populations directly, not from
//! half-space lists.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{DensityMatrix, PureState};
use crate::error::{Error, Result};
use crate::matrix::{expectation, kron, pauli, Axis, ComplexMatrix};

/// Slack used by the region tests.
const REGION_TOL: f64 = 1e-12;

/// The four Bell vectors, `|BS4⟩` being the singlet.
pub fn bell_states() -> [PureState; 4] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z = 0.0;
    let amps = [[s, z, z, s], [s, z, z, -s], [z, s, s, z], [z, s, -s, z]];
    amps.map(|a| PureState {
        amplitudes: a.iter().map(|&re| Complex64::new(re, 0.0)).collect(),
        dims: (2, 2),
    })
}

pub fn bell_projectors() -> [ComplexMatrix; 4] {
    bell_states().map(|b| b.projector())
}

/// Correlation coordinates `(Tr ρσx⊗σx, Tr ρσy⊗σy, Tr ρσz⊗σz)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BellDiagonalCoords {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BellDiagonalCoords {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn radius_squared(&self) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z
    }
}

/// Bell populations `⟨BS_i|ρ|BS_i⟩` of the Bell-diagonal state at `c`.
pub fn bell_populations(c: BellDiagonalCoords) -> [f64; 4] {
    let BellDiagonalCoords { x, y, z } = c;
    [
        (1.0 + x - y + z) / 4.0,
        (1.0 - x + y + z) / 4.0,
        (1.0 + x + y - z) / 4.0,
        (1.0 - x - y - z) / 4.0,
    ]
}

/// Bell populations of an arbitrary two-qubit state.
pub fn populations_of(rho: &DensityMatrix) -> Result<[f64; 4]> {
    rho.require_two_qubit()?;
    let states = bell_states();
    let mut out = [0.0; 4];
    for (p, b) in out.iter_mut().zip(&states) {
        let v = rho.matrix().apply(b.amplitudes());
        let amp: Complex64 = b
            .amplitudes()
            .iter()
            .zip(&v)
            .map(|(a, w)| a.conj() * w)
            .sum();
        *p = amp.re;
    }
    Ok(out)
}

/// `(𝟙⊗𝟙 + x σx⊗σx + y σy⊗σy + z σz⊗σz)/4`, provided it is a state.
pub fn bell_diagonal_state(c: BellDiagonalCoords) -> Result<DensityMatrix> {
    let min_population = bell_populations(c)
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    if min_population < -REGION_TOL || !min_population.is_finite() {
        return Err(Error::NotPositive { min_population });
    }
    let mut m = ComplexMatrix::identity(4);
    for (axis, w) in Axis::ALL.into_iter().zip([c.x, c.y, c.z]) {
        let corr = kron(&pauli(axis), &pauli(axis));
        m = &m + &corr.scale(w);
    }
    DensityMatrix::new(m.scale(0.25), (2, 2))
}

pub fn coords_of(rho: &DensityMatrix) -> Result<BellDiagonalCoords> {
    rho.require_two_qubit()?;
    let corr = |axis| expectation(rho.matrix(), &kron(&pauli(axis), &pauli(axis)));
    Ok(BellDiagonalCoords {
        x: corr(Axis::X)?,
        y: corr(Axis::Y)?,
        z: corr(Axis::Z)?,
    })
}

/// All four Bell populations nonnegative.
pub fn in_state_tetrahedron(c: BellDiagonalCoords) -> bool {
    bell_populations(c).iter().all(|&p| p >= -REGION_TOL)
}

/// Inside the tetrahedron and `Tr(ρ(𝟙/2 − |BS_i⟩⟨BS_i|)) ≥ 0` for every `i`.
pub fn in_witness_octahedron(c: BellDiagonalCoords) -> bool {
    in_state_tetrahedron(c) && bell_populations(c).iter().all(|&p| 0.5 - p >= -REGION_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::hs_norm;

    #[test]
    fn bell_basis_is_orthonormal_and_complete() {
        let bs = bell_states();
        for i in 0..4 {
            for j in 0..4 {
                let ip = bs[i].inner(&bs[j]);
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((ip.re - want).abs() < 1e-15 && ip.im.abs() < 1e-15);
            }
        }
        let sum = bell_projectors()
            .iter()
            .fold(ComplexMatrix::zeros(4), |acc, p| &acc + p);
        assert!(hs_norm(&(&sum - &ComplexMatrix::identity(4))) < 1e-15);
    }

    #[test]
    fn singlet_amplitudes() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let a: Vec<f64> = bell_states()[3].amplitudes().iter().map(|z| z.re).collect();
        assert_eq!(a, vec![0.0, s, -s, 0.0]);
    }

    #[test]
    fn bell_diagonal_examples() {
        let origin = bell_diagonal_state(BellDiagonalCoords::new(0.0, 0.0, 0.0)).unwrap();
        assert_eq!(
            origin.matrix(),
            DensityMatrix::maximally_mixed((2, 2)).matrix()
        );

        let singlet = bell_diagonal_state(BellDiagonalCoords::new(-1.0, -1.0, -1.0)).unwrap();
        let want = bell_states()[3].projector();
        assert!(hs_norm(&(singlet.matrix() - &want)) < 1e-15);

        let bs1 = bell_diagonal_state(BellDiagonalCoords::new(1.0, -1.0, 1.0)).unwrap();
        let want = bell_states()[0].projector();
        assert!(hs_norm(&(bs1.matrix() - &want)) < 1e-15);

        assert!(matches!(
            bell_diagonal_state(BellDiagonalCoords::new(1.0, 1.0, 1.0)),
            Err(Error::NotPositive { .. })
        ));
    }

    #[test]
    fn coords_examples() {
        let c = coords_of(&DensityMatrix::maximally_mixed((2, 2))).unwrap();
        assert_eq!((c.x, c.y, c.z), (0.0, 0.0, 0.0));

        let c = coords_of(&bell_states()[3].density_matrix()).unwrap();
        for v in [c.x, c.y, c.z] {
            assert!((v + 1.0).abs() < 1e-15);
        }

        let c = coords_of(&bell_states()[2].density_matrix()).unwrap();
        assert!((c.x - 1.0).abs() < 1e-15);
        assert!((c.y - 1.0).abs() < 1e-15);
        assert!((c.z + 1.0).abs() < 1e-15);

        assert!(coords_of(&DensityMatrix::maximally_mixed((2, 3))).is_err());
    }

    #[test]
    fn population_formulas_match_projections() {
        let c = BellDiagonalCoords::new(0.3, -0.2, 0.1);
        let rho = bell_diagonal_state(c).unwrap();
        let direct = populations_of(&rho).unwrap();
        for (a, b) in direct.iter().zip(bell_populations(c)) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn region_examples() {
        let o = BellDiagonalCoords::new(0.0, 0.0, 0.0);
        assert!(in_state_tetrahedron(o) && in_witness_octahedron(o));

        let s = BellDiagonalCoords::new(-1.0, -1.0, -1.0);
        assert!(in_state_tetrahedron(s) && !in_witness_octahedron(s));

        let bad = BellDiagonalCoords::new(1.0, 1.0, 1.0);
        assert!(!in_state_tetrahedron(bad) && !in_witness_octahedron(bad));

        // octahedron vertex (1,0,0) lies on its boundary
        assert!(in_witness_octahedron(BellDiagonalCoords::new(
            1.0, 0.0, 0.0
        )));
    }
}
