//! Cyclic Jacobi kernels for Hermitian eigendecomposition and SVD.
//!
//! Both use the same 2x2 unitary rotation. Jacobi converges on every
//! input, including exactly rank-deficient and degenerate matrices, and
//! its singular values carry high relative accuracy, which is what the
//! criterion boundary tests need.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator_algebra::CMatrix;

const MAX_SWEEPS: usize = 64;

/// Rotation parameters (c, s, phase) zeroing the off-diagonal of the
/// Hermitian 2x2 [[a_pp, g], [g*, a_qq]] with g = |g| * phase.
fn rotation(a_pp: f64, a_qq: f64, g: Complex64) -> (f64, f64, Complex64) {
    let ag = g.norm();
    let tau = (a_qq - a_pp) / (2.0 * ag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, c * t, g / ag)
}

/// Eigendecomposition of a Hermitian matrix by two-sided cyclic Jacobi.
/// Returns eigenvalues ascending and eigenvectors as matching columns.
pub(crate) fn eig_hermitian_jacobi(h: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let n = h.nrows();
    debug_assert_eq!(n, h.ncols());
    let mut a = h.clone();
    let mut vecs = CMatrix::identity(n, n);
    if n > 1 {
        let scale: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let tol = (f64::EPSILON * scale).max(f64::MIN_POSITIVE);
        let mut converged = false;
        for _ in 0..MAX_SWEEPS {
            let off: f64 = (0..n)
                .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
                .map(|(p, q)| 2.0 * a[(p, q)].norm_sqr())
                .sum::<f64>()
                .sqrt();
            if off <= tol {
                converged = true;
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let g = a[(p, q)];
                    if g.norm() <= tol / (n as f64) {
                        continue;
                    }
                    let (c, s, phase) = rotation(a[(p, p)].re, a[(q, q)].re, g);
                    let (cs, sp, spc) = (
                        Complex64::new(c, 0.0),
                        phase * s,
                        phase.conj() * s,
                    );
                    // columns: A <- A G,  G = [[c, s*phase], [-s*conj(phase), c]]
                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = cs * akp - spc * akq;
                        a[(k, q)] = sp * akp + cs * akq;
                    }
                    // rows: A <- G† A
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = cs * apk - sp * aqk;
                        a[(q, k)] = spc * apk + cs * aqk;
                    }
                    a[(p, q)] = Complex64::new(0.0, 0.0);
                    a[(q, p)] = Complex64::new(0.0, 0.0);
                    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
                    for k in 0..n {
                        let vkp = vecs[(k, p)];
                        let vkq = vecs[(k, q)];
                        vecs[(k, p)] = cs * vkp - spc * vkq;
                        vecs[(k, q)] = sp * vkp + cs * vkq;
                    }
                }
            }
        }
        if !converged {
            // final check after the last sweep
            let off: f64 = (0..n)
                .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
                .map(|(p, q)| 2.0 * a[(p, q)].norm_sqr())
                .sum::<f64>()
                .sqrt();
            if off > tol {
                return Err(Error::NoConvergence);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut sorted = CMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        sorted.set_column(col, &vecs.column(i));
    }
    Ok((values, sorted))
}

/// Thin SVD by one-sided Jacobi: orthogonalizes the columns of `a` with
/// rotations accumulated into V. Returns (U, sigma, V†) with sigma
/// descending; U gains orthonormal filler columns for zero singular
/// values so that U† U = 1 always holds.
pub(crate) fn svd_jacobi(a: &CMatrix) -> Result<(CMatrix, Vec<f64>, CMatrix)> {
    let (rows, cols) = a.shape();
    if rows < cols {
        let (u, sigma, v_t) = svd_jacobi(&a.adjoint())?;
        return Ok((v_t.adjoint(), sigma, u.adjoint()));
    }
    let mut w = a.clone();
    let mut v = CMatrix::identity(cols, cols);
    let scale: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    // columns this far below the overall scale are numerically zero and
    // must not drive further rotations, or the sweep never settles
    let floor_sq = (scale * f64::EPSILON).powi(2);
    if cols > 1 && scale > 0.0 {
        let mut converged = false;
        for _ in 0..MAX_SWEEPS {
            let mut rotated = false;
            for p in 0..cols {
                for q in (p + 1)..cols {
                    let col_p = w.column(p);
                    let col_q = w.column(q);
                    let g_pp: f64 = col_p.iter().map(|z| z.norm_sqr()).sum();
                    let g_qq: f64 = col_q.iter().map(|z| z.norm_sqr()).sum();
                    if g_pp <= floor_sq || g_qq <= floor_sq {
                        continue;
                    }
                    let g_pq: Complex64 = col_p
                        .iter()
                        .zip(col_q.iter())
                        .map(|(x, y)| x.conj() * y)
                        .sum();
                    if g_pq.norm() <= f64::EPSILON * (g_pp * g_qq).sqrt() + f64::MIN_POSITIVE {
                        continue;
                    }
                    rotated = true;
                    let (c, s, phase) = rotation(g_pp, g_qq, g_pq);
                    let (cs, sp, spc) = (
                        Complex64::new(c, 0.0),
                        phase * s,
                        phase.conj() * s,
                    );
                    for k in 0..rows {
                        let wkp = w[(k, p)];
                        let wkq = w[(k, q)];
                        w[(k, p)] = cs * wkp - spc * wkq;
                        w[(k, q)] = sp * wkp + cs * wkq;
                    }
                    for k in 0..cols {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = cs * vkp - spc * vkq;
                        v[(k, q)] = sp * vkp + cs * vkq;
                    }
                }
            }
            if !rotated {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence);
        }
    }

    let mut sigma: Vec<f64> = (0..cols)
        .map(|j| w.column(j).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| sigma[j].partial_cmp(&sigma[i]).unwrap());
    sigma = order.iter().map(|&j| sigma[j]).collect();

    let mut u = CMatrix::zeros(rows, cols);
    let mut v_sorted = CMatrix::zeros(cols, cols);
    let rank_tol = scale * f64::EPSILON * (rows.max(cols) as f64);
    let mut filler = Vec::new();
    for (col, &j) in order.iter().enumerate() {
        v_sorted.set_column(col, &v.column(j));
        if sigma[col] > rank_tol {
            let scaled = w.column(j).map(|z| z / sigma[col]);
            u.set_column(col, &scaled);
        } else {
            filler.push(col);
        }
    }
    // orthonormal completion for the null-space columns of U
    for col in filler {
        let mut basis_idx = 0;
        'fill: loop {
            if basis_idx >= rows {
                return Err(Error::NoConvergence);
            }
            let mut cand = nalgebra::DVector::<Complex64>::zeros(rows);
            cand[basis_idx] = Complex64::new(1.0, 0.0);
            basis_idx += 1;
            for other in 0..cols {
                if other == col {
                    continue;
                }
                let uo = u.column(other);
                let ip: Complex64 = uo.iter().zip(cand.iter()).map(|(x, y)| x.conj() * y).sum();
                let correction = uo.map(|z| z * ip);
                cand -= correction;
            }
            let norm = cand.norm();
            if norm > 0.5 {
                cand /= Complex64::new(norm, 0.0);
                u.set_column(col, &cand);
                break 'fill;
            }
        }
    }
    Ok((u, sigma, v_sorted.adjoint()))
}
