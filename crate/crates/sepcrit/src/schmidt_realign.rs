//! Operator Schmidt decomposition rho = sum_k lambda_k G^A_k x G^B_k over
//! LOO bases, and the realignment map R with its inverse. The trace norm of
//! R(rho) equals the Schmidt coefficient sum, which is what the CCN
//! (realignment) criterion tests.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::loo_basis::{canonical_loos, LooBasis};
use crate::operator_algebra::{
    svd_thin_real, CMatrix, CVector, DensityMatrix, Observable, Tolerances,
};

/// Coefficient matrix mu_kl = Tr(rho (G^A_k x G^B_l)) over a LOO basis pair.
#[derive(Debug, Clone)]
pub struct CoefficientMatrix {
    pub mu: DMatrix<f64>,
    pub basis_a: LooBasis,
    pub basis_b: LooBasis,
}

/// Operator Schmidt decomposition: nonnegative coefficients in descending
/// order and the paired HS-orthonormal Hermitian operators on each side.
#[derive(Debug, Clone)]
pub struct OperatorSchmidt {
    pub lambdas: Vec<f64>,
    pub ops_a: Vec<Observable>,
    pub ops_b: Vec<Observable>,
    pub schmidt_sum: f64,
}

/// Expands a bipartite state over the given LOO bases. The coefficients of
/// a Hermitian operator over Hermitian bases are real; the imaginary
/// residues are checked against the Hermiticity tolerance and dropped.
pub fn coefficient_matrix(
    rho: &DensityMatrix,
    basis_a: &LooBasis,
    basis_b: &LooBasis,
) -> Result<CoefficientMatrix> {
    coefficient_matrix_raw(rho.mat(), rho.dim_a(), rho.dim_b(), basis_a, basis_b)
}

pub(crate) fn coefficient_matrix_raw(
    mat: &CMatrix,
    dim_a: usize,
    dim_b: usize,
    basis_a: &LooBasis,
    basis_b: &LooBasis,
) -> Result<CoefficientMatrix> {
    if basis_a.dim() != dim_a || basis_b.dim() != dim_b {
        return Err(Error::DimMismatch(format!(
            "basis dimensions ({}, {}) do not match state dimensions ({}, {})",
            basis_a.dim(),
            basis_b.dim(),
            dim_a,
            dim_b
        )));
    }
    let tol = Tolerances::default().herm;
    let na = basis_a.len();
    let nb = basis_b.len();
    let mut mu = DMatrix::zeros(na, nb);
    // mu_kl = Tr(rho (A_k x B_l)) = sum_{ijpq} rho[(i,p),(j,q)] A_k[j,i] B_l[q,p];
    // contract rho against each A_k once, then against the B_l.
    for (k, ga) in basis_a.ops().iter().enumerate() {
        // t[p,q] = sum_{ij} rho[(i,p),(j,q)] A_k[j,i]
        let mut t = CMatrix::zeros(dim_b, dim_b);
        for p in 0..dim_b {
            for q in 0..dim_b {
                let mut s = Complex64::new(0.0, 0.0);
                for i in 0..dim_a {
                    for j in 0..dim_a {
                        s += mat[(i * dim_b + p, j * dim_b + q)] * ga.mat()[(j, i)];
                    }
                }
                t[(p, q)] = s;
            }
        }
        for (l, gb) in basis_b.ops().iter().enumerate() {
            let mut s = Complex64::new(0.0, 0.0);
            for p in 0..dim_b {
                for q in 0..dim_b {
                    s += t[(p, q)] * gb.mat()[(q, p)];
                }
            }
            if s.im.abs() > tol * 10.0_f64.max(s.re.abs()) {
                return Err(Error::NotHermitian {
                    defect: s.im.abs(),
                    tol,
                });
            }
            mu[(k, l)] = s.re;
        }
    }
    Ok(CoefficientMatrix {
        mu,
        basis_a: basis_a.clone(),
        basis_b: basis_b.clone(),
    })
}

/// Computes the operator Schmidt decomposition via the SVD of the
/// coefficient matrix over the canonical LOO bases. The SVD of the real mu
/// is taken over the reals, so the rotated operators stay Hermitian.
pub fn operator_schmidt(rho: &DensityMatrix) -> Result<OperatorSchmidt> {
    let basis_a = canonical_loos(rho.dim_a())?;
    let basis_b = canonical_loos(rho.dim_b())?;
    let coeff = coefficient_matrix(rho, &basis_a, &basis_b)?;
    let (o_a, sigma, o_b_t) = svd_thin_real(&coeff.mu)?;
    let r = sigma.len();
    let da = rho.dim_a();
    let db = rho.dim_b();
    let mut ops_a = Vec::with_capacity(r);
    let mut ops_b = Vec::with_capacity(r);
    for k in 0..r {
        let mut ga = CMatrix::zeros(da, da);
        for (l, src) in basis_a.ops().iter().enumerate() {
            ga += src.mat().scale(o_a[(l, k)]);
        }
        ops_a.push(Observable::new(ga)?);
        let mut gb = CMatrix::zeros(db, db);
        for (l, src) in basis_b.ops().iter().enumerate() {
            gb += src.mat().scale(o_b_t[(k, l)]);
        }
        ops_b.push(Observable::new(gb)?);
    }
    let schmidt_sum = sigma.iter().sum();
    Ok(OperatorSchmidt {
        lambdas: sigma,
        ops_a,
        ops_b,
        schmidt_sum,
    })
}

/// Column-stacking vectorization: |G>[j*rows + i] = G[i, j].
pub fn vectorize(g: &CMatrix) -> CVector {
    let (rows, cols) = g.shape();
    CVector::from_fn(rows * cols, |idx, _| g[(idx % rows, idx / rows)])
}

fn check_shape(m: &CMatrix, rows: usize, cols: usize, what: &str) -> Result<()> {
    if m.nrows() != rows || m.ncols() != cols {
        return Err(Error::DimMismatch(format!(
            "{what}: expected {rows}x{cols}, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

/// The realignment map as a direct entry reshuffle:
/// R(rho)[j*d_A + i, l*d_B + k] = rho[(i,k), (j,l)].
///
/// Equivalently R(rho) = sum_kl mu_kl |G^A_k><G^B_l| with column-stacked
/// vectorizations and a transposed (not conjugated) bra; the expansion form
/// is kept as a cross-check in the tests.
pub fn realign(mat: &CMatrix, dim_a: usize, dim_b: usize) -> Result<CMatrix> {
    let d = dim_a * dim_b;
    check_shape(mat, d, d, "realign input")?;
    let mut out = CMatrix::zeros(dim_a * dim_a, dim_b * dim_b);
    for i in 0..dim_a {
        for j in 0..dim_a {
            for k in 0..dim_b {
                for l in 0..dim_b {
                    out[(j * dim_a + i, l * dim_b + k)] = mat[(i * dim_b + k, j * dim_b + l)];
                }
            }
        }
    }
    Ok(out)
}

/// Inverse of [`realign`]: inverse_realign(realign(X)) = X.
pub fn inverse_realign(m: &CMatrix, dim_a: usize, dim_b: usize) -> Result<CMatrix> {
    check_shape(m, dim_a * dim_a, dim_b * dim_b, "inverse_realign input")?;
    let d = dim_a * dim_b;
    let mut out = CMatrix::zeros(d, d);
    for i in 0..dim_a {
        for j in 0..dim_a {
            for k in 0..dim_b {
                for l in 0..dim_b {
                    out[(i * dim_b + k, j * dim_b + l)] = m[(j * dim_a + i, l * dim_b + k)];
                }
            }
        }
    }
    Ok(out)
}
