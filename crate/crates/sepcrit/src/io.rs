//! JSON state files and report documents for the command-line interface.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::criteria::CriterionReport;
use crate::error::{Error, Result};
use crate::operator_algebra::{CMatrix, DensityMatrix, Tolerances};
use crate::scan::ScanResult;

/// On-disk state format: `{"dim_a": int, "dim_b": int, "matrix": [[[re,
/// im], ...], ...]}` with the matrix given row-major, (d_A d_B)^2 entries.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub dim_a: usize,
    pub dim_b: usize,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl StateFile {
    pub fn from_density(rho: &DensityMatrix) -> Self {
        let d = rho.dim();
        let matrix = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let z = rho.mat()[(i, j)];
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect();
        StateFile {
            dim_a: rho.dim_a(),
            dim_b: rho.dim_b(),
            matrix,
        }
    }

    /// Parses and validates the stored matrix as a density matrix.
    pub fn to_density(&self, tol: &Tolerances) -> Result<DensityMatrix> {
        let d = self.dim_a * self.dim_b;
        if self.matrix.len() != d || self.matrix.iter().any(|row| row.len() != d) {
            return Err(Error::DimMismatch(format!(
                "state file matrix must be {d}x{d} for dims ({}, {})",
                self.dim_a, self.dim_b
            )));
        }
        let mat = CMatrix::from_fn(d, d, |i, j| {
            Complex64::new(self.matrix[i][j][0], self.matrix[i][j][1])
        });
        DensityMatrix::with_tolerances(mat, self.dim_a, self.dim_b, tol)
    }
}

/// Provenance block attached to report documents unless suppressed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Meta {
    pub toolkit_version: String,
    pub seed: u64,
    pub tol_detect: f64,
    pub tol_herm: f64,
    pub tol_trace: f64,
    pub tol_psd: f64,
}

impl Meta {
    pub fn new(seed: u64, tol_detect: f64, tol: &Tolerances) -> Self {
        Meta {
            toolkit_version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            tol_detect,
            tol_herm: tol.herm,
            tol_trace: tol.trace,
            tol_psd: tol.psd,
        }
    }
}

/// Output of `check`: one report per requested criterion.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckDocument {
    pub reports: Vec<CriterionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub meta: Option<Meta>,
}

/// Output of `scan`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanDocument {
    pub scan: ScanResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub meta: Option<Meta>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator_algebra::max_abs_diff;
    use crate::states;

    #[test]
    fn state_file_round_trip() {
        let rho = states::random_bipartite_density(2, 3, 4, 77).unwrap();
        let file = StateFile::from_density(&rho);
        let json = serde_json::to_string(&file).unwrap();
        let parsed: StateFile = serde_json::from_str(&json).unwrap();
        let back = parsed.to_density(&Tolerances::default()).unwrap();
        assert!(max_abs_diff(back.mat(), rho.mat()) < 1e-15);
    }

    #[test]
    fn state_file_rejects_bad_shapes_and_invalid_states() {
        let rho = states::singlet();
        let mut file = StateFile::from_density(&rho);
        file.matrix[0].pop();
        assert!(file.to_density(&Tolerances::default()).is_err());

        let mut not_psd = StateFile::from_density(&rho);
        not_psd.matrix[0][0] = [2.0, 0.0];
        assert!(not_psd.to_density(&Tolerances::default()).is_err());
    }
}
