//! JSON density-matrix files: `{"dims":[dA,dB],"re":[[...]],"im":[[...]]}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::DensityMatrix;
use crate::error::{Error as CoreError, InvariantViolation};
use crate::matrix::ComplexMatrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityMatrixFile {
    pub dims: [usize; 2],
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

#[derive(Debug, Error)]
pub enum LoadError {
    /// Not parseable, or the shape does not describe a square matrix.
    #[error("malformed density-matrix file: {0}")]
    Malformed(String),
    /// Well-formed, but not a density matrix.
    #[error(transparent)]
    Invalid(#[from] InvariantViolation),
}

impl DensityMatrixFile {
    pub fn from_density_matrix(rho: &DensityMatrix) -> Self {
        let m = rho.matrix();
        let n = m.dim();
        let part = |f: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..n).map(|i| m.row(i).iter().map(f).collect()).collect()
        };
        Self {
            dims: [rho.dims().0, rho.dims().1],
            re: part(|z| z.re),
            im: part(|z| z.im),
        }
    }

    pub fn to_density_matrix(&self) -> Result<DensityMatrix, LoadError> {
        let n = self.re.len();
        if n == 0 {
            return Err(LoadError::Malformed("empty matrix".into()));
        }
        if self.im.len() != n {
            return Err(LoadError::Malformed(format!(
                "re has {n} rows but im has {}",
                self.im.len()
            )));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (r, (re_row, im_row)) in self.re.iter().zip(&self.im).enumerate() {
            if re_row.len() != n || im_row.len() != n {
                return Err(LoadError::Malformed(format!(
                    "row {r} is not of length {n}"
                )));
            }
            entries.extend(
                re_row
                    .iter()
                    .zip(im_row)
                    .map(|(&a, &b)| Complex64::new(a, b)),
            );
        }
        let matrix = ComplexMatrix::from_row_major(entries).map_err(|e| match e {
            CoreError::InvalidParameter(msg) => LoadError::Malformed(msg),
            other => LoadError::Malformed(other.to_string()),
        })?;
        DensityMatrix::new(matrix, (self.dims[0], self.dims[1])).map_err(|e| match e {
            CoreError::Invariant(v) => LoadError::Invalid(v),
            other => LoadError::Malformed(other.to_string()),
        })
    }
}

impl DensityMatrix {
    pub fn from_json(text: &str) -> Result<Self, LoadError> {
        let file: DensityMatrixFile =
            serde_json::from_str(text).map_err(|e| LoadError::Malformed(e.to_string()))?;
        file.to_density_matrix()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&DensityMatrixFile::from_density_matrix(self))
            .expect("density-matrix file serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Invariant;
    use crate::states::bell_states;

    #[test]
    fn round_trip_singlet() {
        let rho = bell_states()[3].density_matrix();
        let back = DensityMatrix::from_json(&rho.to_json()).unwrap();
        assert_eq!(back, rho);
    }

    #[test]
    fn parses_documented_layout() {
        let text = r#"{"dims":[2,2],
            "re":[[0.25,0,0,0],[0,0.25,0,0],[0,0,0.25,0],[0,0,0,0.25]],
            "im":[[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}"#;
        let rho = DensityMatrix::from_json(text).unwrap();
        assert_eq!(rho, DensityMatrix::maximally_mixed((2, 2)));
    }

    #[test]
    fn reports_failed_invariant() {
        let text = r#"{"dims":[2,2],
            "re":[[0.225,0,0,0],[0,0.225,0,0],[0,0,0.225,0],[0,0,0,0.225]],
            "im":[[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}"#;
        match DensityMatrix::from_json(text) {
            Err(LoadError::Invalid(v)) => {
                assert_eq!(v.invariant, Invariant::UnitTrace);
                assert!(v.to_string().contains("trace"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_inputs() {
        for text in [
            "not json",
            r#"{"dims":[2,2],"re":[[1,0],[0,0]]}"#,
            r#"{"dims":[2,2],"re":[[1,0,0]],"im":[[0,0,0]]}"#,
            r#"{"dims":[1,1],"re":[],"im":[]}"#,
            r#"{"dims":[2,2],"re":[[1]],"im":[[0]],"extra":1}"#,
        ] {
            assert!(
                matches!(DensityMatrix::from_json(text), Err(LoadError::Malformed(_))),
                "{text}"
            );
        }
    }
}
