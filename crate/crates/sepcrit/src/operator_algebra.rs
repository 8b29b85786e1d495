//! Dense complex matrix kernel: Kronecker products, partial transpose/trace,
//! Hermitian eigendecomposition, SVD, trace norm, expectation values and
//! variances. Everything downstream is built on these operations.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix, the universal numeric carrier.
pub type CMatrix = DMatrix<Complex64>;
/// Dense complex column vector (state vectors).
pub type CVector = DVector<Complex64>;

/// Numerical tolerances for validity checks. Sized for dimensions up to
/// roughly 100 in double precision; override per call site if needed.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Hermiticity: max entry of |M - M†|.
    pub herm: f64,
    /// Trace deviation from 1.
    pub trace: f64,
    /// Allowed negativity of the smallest eigenvalue.
    pub psd: f64,
    /// Eigen/SVD residuals.
    pub eig: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            herm: 1e-10,
            trace: 1e-9,
            psd: 1e-9,
            eig: 1e-10,
        }
    }
}

/// Default detection margin for all criteria: a state is flagged only when
/// the criterion value lies beyond its threshold by more than this.
pub const TOL_DETECT: f64 = 1e-9;

/// Which subsystem of a bipartite operator to keep in a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// A bipartite quantum state: subsystem dimensions plus a validated
/// (Hermitian, unit-trace, positive semidefinite) matrix.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    dim_a: usize,
    dim_b: usize,
    mat: CMatrix,
}

impl DensityMatrix {
    /// Validates `mat` as a density matrix on a `dim_a` x `dim_b` system
    /// with the default tolerances.
    pub fn new(mat: CMatrix, dim_a: usize, dim_b: usize) -> Result<Self> {
        Self::with_tolerances(mat, dim_a, dim_b, &Tolerances::default())
    }

    /// Validates `mat` with caller-supplied tolerances.
    pub fn with_tolerances(
        mat: CMatrix,
        dim_a: usize,
        dim_b: usize,
        tol: &Tolerances,
    ) -> Result<Self> {
        let report = is_density_matrix(&mat, dim_a, dim_b, tol)?;
        if !report.valid {
            return Err(Error::InvalidDensity {
                herm_defect: report.herm_defect,
                trace_defect: report.trace_defect,
                min_eigenvalue: report.min_eigenvalue,
            });
        }
        Ok(DensityMatrix { dim_a, dim_b, mat })
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    /// Total dimension d_A * d_B.
    pub fn dim(&self) -> usize {
        self.dim_a * self.dim_b
    }

    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }

    /// Purity Tr(rho^2).
    pub fn purity(&self) -> f64 {
        (&self.mat * &self.mat).trace().re
    }
}

/// A Hermitian operator on a single system.
#[derive(Debug, Clone)]
pub struct Observable {
    dim: usize,
    mat: CMatrix,
}

impl Observable {
    /// Validates `mat` as square, finite and Hermitian (default tolerance).
    pub fn new(mat: CMatrix) -> Result<Self> {
        Self::with_tolerance(mat, Tolerances::default().herm)
    }

    pub fn with_tolerance(mat: CMatrix, tol_herm: f64) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimMismatch(format!(
                "observable must be square, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        check_finite(&mat)?;
        let defect = herm_defect(&mat);
        if defect > tol_herm {
            return Err(Error::NotHermitian {
                defect,
                tol: tol_herm,
            });
        }
        Ok(Observable {
            dim: mat.nrows(),
            mat,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }
}

/// Validity report for a candidate density matrix.
#[derive(Debug, Clone, Copy)]
pub struct DensityReport {
    pub herm_defect: f64,
    pub trace_defect: f64,
    pub min_eigenvalue: f64,
    pub valid: bool,
}

pub(crate) fn check_finite(m: &CMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Max entry of |M - M†|.
pub(crate) fn herm_defect(m: &CMatrix) -> f64 {
    let adj = m.adjoint();
    max_abs_diff(m, &adj)
}

/// Max entrywise modulus of the difference of two matrices.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in max_abs_diff");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Standard Kronecker product: (A ⊗ B)[(i·rB+k),(j·cB+l)] = A[i,j]·B[k,l].
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

fn check_bipartite(m: &CMatrix, dim_a: usize, dim_b: usize) -> Result<()> {
    let d = dim_a * dim_b;
    if dim_a == 0 || dim_b == 0 || m.nrows() != d || m.ncols() != d {
        return Err(Error::DimMismatch(format!(
            "expected a {d}x{d} matrix for dims ({dim_a},{dim_b}), got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

/// Partial transpose on subsystem B, composite index (i,k) = i·d_B + k:
/// out[(i,k),(j,l)] = m[(i,l),(j,k)].
pub fn partial_transpose(m: &CMatrix, dim_a: usize, dim_b: usize) -> Result<CMatrix> {
    check_bipartite(m, dim_a, dim_b)?;
    let d = dim_a * dim_b;
    let mut out = CMatrix::zeros(d, d);
    for i in 0..dim_a {
        for j in 0..dim_a {
            for k in 0..dim_b {
                for l in 0..dim_b {
                    out[(i * dim_b + k, j * dim_b + l)] = m[(i * dim_b + l, j * dim_b + k)];
                }
            }
        }
    }
    Ok(out)
}

/// Reduced operator on the kept subsystem; preserves the trace.
pub fn partial_trace(m: &CMatrix, dim_a: usize, dim_b: usize, keep: Subsystem) -> Result<CMatrix> {
    check_bipartite(m, dim_a, dim_b)?;
    match keep {
        Subsystem::A => {
            let mut out = CMatrix::zeros(dim_a, dim_a);
            for i in 0..dim_a {
                for j in 0..dim_a {
                    let mut s = Complex64::new(0.0, 0.0);
                    for k in 0..dim_b {
                        s += m[(i * dim_b + k, j * dim_b + k)];
                    }
                    out[(i, j)] = s;
                }
            }
            Ok(out)
        }
        Subsystem::B => {
            let mut out = CMatrix::zeros(dim_b, dim_b);
            for k in 0..dim_b {
                for l in 0..dim_b {
                    let mut s = Complex64::new(0.0, 0.0);
                    for i in 0..dim_a {
                        s += m[(i * dim_b + k, i * dim_b + l)];
                    }
                    out[(k, l)] = s;
                }
            }
            Ok(out)
        }
    }
}

/// Eigendecomposition of a Hermitian matrix. Returns the real eigenvalues in
/// ascending order and the corresponding orthonormal eigenvectors as the
/// columns of the second component.
pub fn eig_hermitian(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimMismatch(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    check_finite(m)?;
    // symmetrize so upper-triangle round-off cannot leak in
    let h = (m + m.adjoint()).scale(0.5);
    crate::jacobi::eig_hermitian_jacobi(&h)
}

/// Eigenvalues only, ascending.
pub fn eigvals_hermitian(m: &CMatrix) -> Result<Vec<f64>> {
    Ok(eig_hermitian(m)?.0)
}

/// Singular values of `m`, descending, each >= 0.
pub fn svd_values(m: &CMatrix) -> Result<Vec<f64>> {
    check_finite(m)?;
    let (_, sigma, _) = crate::jacobi::svd_jacobi(m)?;
    Ok(sigma)
}

/// Thin SVD m = U Σ V†, singular values descending. Returns (U, σ, V†).
pub fn svd_thin(m: &CMatrix) -> Result<(CMatrix, Vec<f64>, CMatrix)> {
    check_finite(m)?;
    crate::jacobi::svd_jacobi(m)
}

/// Thin SVD of a real matrix with real orthogonal factors, descending.
/// All Jacobi rotations of a real input stay exactly real, so taking real
/// parts after the complex decomposition is lossless.
pub fn svd_thin_real(m: &DMatrix<f64>) -> Result<(DMatrix<f64>, Vec<f64>, DMatrix<f64>)> {
    let complexified = CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
        Complex64::new(m[(i, j)], 0.0)
    });
    let (u, sigma, v_t) = crate::jacobi::svd_jacobi(&complexified)?;
    debug_assert!(u.iter().chain(v_t.iter()).all(|z| z.im == 0.0));
    let u_r = DMatrix::from_fn(u.nrows(), u.ncols(), |i, j| u[(i, j)].re);
    let v_t_r = DMatrix::from_fn(v_t.nrows(), v_t.ncols(), |i, j| v_t[(i, j)].re);
    Ok((u_r, sigma, v_t_r))
}

/// Trace norm: the sum of the singular values.
pub fn trace_norm(m: &CMatrix) -> Result<f64> {
    Ok(svd_values(m)?.iter().sum())
}

/// Tr(rho · O) with the imaginary residue checked against the Hermiticity
/// tolerance and then discarded.
pub fn expectation(rho: &DensityMatrix, o: &Observable) -> Result<f64> {
    if rho.dim() != o.dim() {
        return Err(Error::DimMismatch(format!(
            "state dimension {} vs observable dimension {}",
            rho.dim(),
            o.dim()
        )));
    }
    expectation_raw(rho.mat(), o.mat())
}

/// Tr(a · b) for a Hermitian pair, as a real number.
pub(crate) fn expectation_raw(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    let v = trace_product(a, b);
    let tol = Tolerances::default().herm;
    if v.im.abs() > tol * 10.0_f64.max(v.re.abs()) {
        return Err(Error::NotHermitian {
            defect: v.im.abs(),
            tol,
        });
    }
    Ok(v.re)
}

/// Tr(a · b) without forming the product matrix.
pub(crate) fn trace_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    debug_assert_eq!(a.ncols(), b.nrows());
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            s += a[(i, k)] * b[(k, i)];
        }
    }
    s
}

/// Variance <O^2> - <O>^2 on the given state.
pub fn variance(rho: &DensityMatrix, o: &Observable) -> Result<f64> {
    if rho.dim() != o.dim() {
        return Err(Error::DimMismatch(format!(
            "state dimension {} vs observable dimension {}",
            rho.dim(),
            o.dim()
        )));
    }
    let o2 = o.mat() * o.mat();
    let mean_sq = expectation_raw(rho.mat(), &o2)?;
    let mean = expectation_raw(rho.mat(), o.mat())?;
    Ok(mean_sq - mean * mean)
}

/// Checks Hermiticity, unit trace and positive semidefiniteness of a
/// candidate density matrix and reports the defects.
pub fn is_density_matrix(
    m: &CMatrix,
    dim_a: usize,
    dim_b: usize,
    tol: &Tolerances,
) -> Result<DensityReport> {
    check_bipartite(m, dim_a, dim_b)?;
    check_finite(m)?;
    let herm_defect = herm_defect(m);
    let trace_defect = (m.trace().re - 1.0).abs().max(m.trace().im.abs());
    let min_eigenvalue = if herm_defect < 1e-6 {
        *eigvals_hermitian(m)?
            .first()
            .expect("nonempty spectrum")
    } else {
        // Grossly non-Hermitian input: report the defect without
        // pretending its spectrum is real.
        f64::NAN
    };
    let valid = herm_defect <= tol.herm
        && trace_defect <= tol.trace
        && min_eigenvalue >= -tol.psd;
    Ok(DensityReport {
        herm_defect,
        trace_defect,
        min_eigenvalue,
        valid,
    })
}

/// d-dimensional identity matrix.
pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}
