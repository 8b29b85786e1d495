//! Local orthogonal observables (LOOs): ordered sets of d^2 Hermitian
//! operators orthonormal in the Hilbert-Schmidt inner product,
//! Tr(G_k G_l) = delta_kl. Construction, validation, orthogonal
//! transformation, and completion of partial sets.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator_algebra::{identity, max_abs_diff, CMatrix, Observable};

/// Hilbert-Schmidt orthonormality tolerance.
pub const TOL_ORTH: f64 = 1e-10;

/// An ordered set of d^2 local orthogonal observables.
#[derive(Debug, Clone)]
pub struct LooBasis {
    dim: usize,
    ops: Vec<Observable>,
}

impl LooBasis {
    /// Wraps an operator list as a basis; checks cardinality and local
    /// dimension only. Use [`validate_loos`] for the numeric invariants.
    pub fn new(dim: usize, ops: Vec<Observable>) -> Result<Self> {
        if ops.len() != dim * dim {
            return Err(Error::DimMismatch(format!(
                "a LOO basis for dimension {dim} needs {} operators, got {}",
                dim * dim,
                ops.len()
            )));
        }
        if let Some(bad) = ops.iter().find(|o| o.dim() != dim) {
            return Err(Error::DimMismatch(format!(
                "operator of dimension {} in a dimension-{dim} basis",
                bad.dim()
            )));
        }
        Ok(LooBasis { dim, ops })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ops(&self) -> &[Observable] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }
}

/// Hilbert-Schmidt inner product Tr(A† B), real part (inputs Hermitian).
pub(crate) fn hs_inner(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    for (x, y) in a.iter().zip(b.iter()) {
        s += x.conj() * y;
    }
    s
}

/// The canonical LOO basis for local dimension d, ordered as: the
/// d(d-1)/2 symmetric pair operators (|m><n| + |n><m|)/sqrt(2) for m < n,
/// then the d(d-1)/2 antisymmetric ones (i|m><n| - i|n><m|)/sqrt(2) for
/// m < n, then the d diagonal projectors |m><m|. Pair blocks are ordered
/// lexicographically in (m, n).
pub fn canonical_loos(d: usize) -> Result<LooBasis> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!(
            "LOO bases need dimension >= 2, got {d}"
        )));
    }
    let inv_sqrt2 = 1.0 / 2f64.sqrt();
    let mut ops = Vec::with_capacity(d * d);
    for m in 0..d {
        for n in (m + 1)..d {
            let mut g = CMatrix::zeros(d, d);
            g[(m, n)] = Complex64::new(inv_sqrt2, 0.0);
            g[(n, m)] = Complex64::new(inv_sqrt2, 0.0);
            ops.push(Observable::new(g).expect("symmetric pair operator"));
        }
    }
    for m in 0..d {
        for n in (m + 1)..d {
            let mut g = CMatrix::zeros(d, d);
            g[(m, n)] = Complex64::new(0.0, inv_sqrt2);
            g[(n, m)] = Complex64::new(0.0, -inv_sqrt2);
            ops.push(Observable::new(g).expect("antisymmetric pair operator"));
        }
    }
    for m in 0..d {
        let mut g = CMatrix::zeros(d, d);
        g[(m, m)] = Complex64::new(1.0, 0.0);
        ops.push(Observable::new(g).expect("diagonal projector"));
    }
    LooBasis::new(d, ops)
}

/// Defect report from [`validate_loos`].
#[derive(Debug, Clone, Copy)]
pub struct LooReport {
    /// max |Tr(G_k G_l) - delta_kl|
    pub orth_defect: f64,
    /// max Hermiticity defect over the operators
    pub herm_defect: f64,
    /// max entry of |sum_k G_k^2 - d 1|
    pub sum_sq_defect: f64,
    /// max entry of |sum_k Tr(G_k) G_k - 1|
    pub completeness_defect: f64,
    pub valid: bool,
}

/// Checks the LOO laws: pairwise HS orthonormality, Hermiticity,
/// sum_k G_k^2 = d 1 and sum_k Tr(G_k) G_k = 1.
pub fn validate_loos(basis: &LooBasis) -> Result<LooReport> {
    let d = basis.dim();
    let ops = basis.ops();
    if ops.len() != d * d {
        return Err(Error::DimMismatch(format!(
            "expected {} operators, got {}",
            d * d,
            ops.len()
        )));
    }
    let mut orth_defect: f64 = 0.0;
    for (k, a) in ops.iter().enumerate() {
        for (l, b) in ops.iter().enumerate() {
            let ip = hs_inner(a.mat(), b.mat());
            let expected = if k == l { 1.0 } else { 0.0 };
            orth_defect = orth_defect.max((ip - Complex64::new(expected, 0.0)).norm());
        }
    }
    let herm_defect = ops
        .iter()
        .map(|o| max_abs_diff(o.mat(), &o.mat().adjoint()))
        .fold(0.0, f64::max);
    let mut sum_sq = CMatrix::zeros(d, d);
    let mut completeness = CMatrix::zeros(d, d);
    for o in ops {
        sum_sq += o.mat() * o.mat();
        completeness += o.mat().scale(o.mat().trace().re);
    }
    let sum_sq_defect = max_abs_diff(&sum_sq, &identity(d).scale(d as f64));
    let completeness_defect = max_abs_diff(&completeness, &identity(d));
    let valid =
        orth_defect <= TOL_ORTH && herm_defect <= TOL_ORTH && sum_sq_defect <= 1e-9
            && completeness_defect <= 1e-9;
    Ok(LooReport {
        orth_defect,
        herm_defect,
        sum_sq_defect,
        completeness_defect,
        valid,
    })
}

/// Rotates a basis by a real orthogonal d^2 x d^2 matrix:
/// G~_l = sum_k O[l,k] G_k. Any LOO basis arises this way.
pub fn transform_loos(basis: &LooBasis, o: &DMatrix<f64>) -> Result<LooBasis> {
    let n = basis.len();
    if o.nrows() != n || o.ncols() != n {
        return Err(Error::DimMismatch(format!(
            "orthogonal matrix must be {n}x{n}, got {}x{}",
            o.nrows(),
            o.ncols()
        )));
    }
    let gram = o * o.transpose();
    let defect = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| (gram[(i, j)] - if i == j { 1.0 } else { 0.0 }).abs())
        .fold(0.0, f64::max);
    if defect > 1e-10 {
        return Err(Error::NotOrthogonal { defect });
    }
    let d = basis.dim();
    let mut ops = Vec::with_capacity(n);
    for l in 0..n {
        let mut g = CMatrix::zeros(d, d);
        for (k, src) in basis.ops().iter().enumerate() {
            g += src.mat().scale(o[(l, k)]);
        }
        ops.push(Observable::new(g)?);
    }
    LooBasis::new(d, ops)
}

/// Completes a partial set of mutually orthonormal Hermitian operators to
/// a full LOO basis via Gram-Schmidt over the real space of Hermitian
/// matrices, seeding with canonical basis elements outside the input span.
/// The input operators appear first, unchanged.
pub fn complete_loos(partial: &[Observable], d: usize) -> Result<LooBasis> {
    if partial.len() > d * d {
        return Err(Error::DimMismatch(format!(
            "{} operators exceed the basis size {}",
            partial.len(),
            d * d
        )));
    }
    for o in partial {
        if o.dim() != d {
            return Err(Error::DimMismatch(format!(
                "operator of dimension {} in a dimension-{d} completion",
                o.dim()
            )));
        }
    }
    // Verify the input is orthonormal before extending it.
    let mut defect: f64 = 0.0;
    for (k, a) in partial.iter().enumerate() {
        for (l, b) in partial.iter().enumerate() {
            let ip = hs_inner(a.mat(), b.mat());
            let expected = if k == l { 1.0 } else { 0.0 };
            defect = defect.max((ip - Complex64::new(expected, 0.0)).norm());
        }
    }
    if defect > TOL_ORTH {
        return Err(Error::NotOrthonormal { defect });
    }

    let mut ops: Vec<Observable> = partial.to_vec();
    let seeds = canonical_loos(d)?;
    for seed in seeds.ops() {
        if ops.len() == d * d {
            break;
        }
        let mut g = seed.mat().clone();
        for existing in &ops {
            let ip = hs_inner(existing.mat(), &g);
            g -= existing.mat() * ip;
        }
        let norm = hs_inner(&g, &g).re.sqrt();
        if norm < 1e-8 {
            continue; // seed already in span
        }
        g.unscale_mut(norm);
        ops.push(Observable::new(g)?);
    }
    if ops.len() != d * d {
        return Err(Error::InvalidParameter(
            "could not complete the operator set to a full basis".into(),
        ));
    }
    LooBasis::new(d, ops)
}

/// Signed-Pauli LOO pair diagonalizing the singlet's operator Schmidt
/// decomposition: A side {-sx, -sy, -sz, 1}/sqrt(2), B side
/// {sx, sy, sz, 1}/sqrt(2).
pub fn singlet_schmidt_loos() -> (LooBasis, LooBasis) {
    let s = 1.0 / 2f64.sqrt();
    let c = Complex64::new;
    let sx = CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
    let sy = CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]);
    let sz = CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]);
    let id = identity(2);
    let wrap = |m: CMatrix| Observable::new(m).expect("Pauli operators are Hermitian");
    let side_a = vec![
        wrap(sx.scale(-s)),
        wrap(sy.scale(-s)),
        wrap(sz.scale(-s)),
        wrap(id.scale(s)),
    ];
    let side_b = vec![
        wrap(sx.scale(s)),
        wrap(sy.scale(s)),
        wrap(sz.scale(s)),
        wrap(id.scale(s)),
    ];
    (
        LooBasis::new(2, side_a).expect("four operators on dimension 2"),
        LooBasis::new(2, side_b).expect("four operators on dimension 2"),
    )
}
