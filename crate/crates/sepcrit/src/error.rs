use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("matrix is not Hermitian: max |M - M^\u{2020}| = {defect:.3e} exceeds {tol:.3e}")]
    NotHermitian { defect: f64, tol: f64 },

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error(
        "not a valid density matrix: hermiticity defect {herm_defect:.3e}, \
         trace defect {trace_defect:.3e}, min eigenvalue {min_eigenvalue:.3e}"
    )]
    InvalidDensity {
        herm_defect: f64,
        trace_defect: f64,
        min_eigenvalue: f64,
    },

    #[error("eigen/singular value decomposition failed to converge")]
    NoConvergence,

    #[error("matrix is not orthogonal: max |O O^T - 1| = {defect:.3e}")]
    NotOrthogonal { defect: f64 },

    #[error("matrix is not unitary: max |U^\u{2020} U - 1| = {defect:.3e}")]
    NotUnitary { defect: f64 },

    #[error("operators are not orthonormal: defect {defect:.3e}")]
    NotOrthonormal { defect: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
