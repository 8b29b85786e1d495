//! Entanglement detection criteria: positivity of the partial transpose
//! (PPT), the computable cross norm / realignment (CCN) criterion with its
//! witness in both constructions, and the local uncertainty relations
//! (LURs) adapted to the CCN witness.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::loo_basis::complete_loos;
use crate::operator_algebra::{
    eigvals_hermitian, expectation_raw, herm_defect, identity, kron, partial_transpose,
    svd_thin, CMatrix, DensityMatrix, Observable, Tolerances,
};
use crate::schmidt_realign::{inverse_realign, operator_schmidt, realign};

pub use crate::operator_algebra::TOL_DETECT;

/// Criterion tags used in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    Ppt,
    Ccn,
    LurCcn,
    LurGeneric,
    Witness,
    Nonlinear,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Criterion::Ppt => "ppt",
            Criterion::Ccn => "ccn",
            Criterion::LurCcn => "lur_ccn",
            Criterion::LurGeneric => "lur_generic",
            Criterion::Witness => "witness",
            Criterion::Nonlinear => "nonlinear",
        };
        f.write_str(s)
    }
}

/// Outcome of one criterion evaluation. `detected == true` certifies
/// entanglement; the meaning of `value` is criterion-specific (minimum
/// partial-transpose eigenvalue, Schmidt coefficient sum, LUR functional).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriterionReport {
    pub criterion: Criterion,
    pub value: f64,
    pub detected: bool,
    pub details: BTreeMap<String, f64>,
}

impl CriterionReport {
    fn new(criterion: Criterion, value: f64, detected: bool) -> Self {
        CriterionReport {
            criterion,
            value,
            detected,
            details: BTreeMap::new(),
        }
    }

    fn with(mut self, key: &str, value: f64) -> Self {
        self.details.insert(key.into(), value);
        self
    }
}

/// How a witness matrix was constructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessOrigin {
    /// 1 - sum_k G^A_k x G^B_k from the operator Schmidt decomposition.
    CcnSchmidt,
    /// 1 - R^{-1}(U V†) from the SVD of the realigned matrix.
    CcnRealign,
}

/// An entanglement witness: Hermitian, with nonnegative expectation on
/// every separable state; a negative expectation certifies entanglement.
#[derive(Debug, Clone)]
pub struct Witness {
    dim_a: usize,
    dim_b: usize,
    mat: CMatrix,
    origin: WitnessOrigin,
}

impl Witness {
    pub fn new(mat: CMatrix, dim_a: usize, dim_b: usize, origin: WitnessOrigin) -> Result<Self> {
        let d = dim_a * dim_b;
        if mat.nrows() != d || mat.ncols() != d {
            return Err(Error::DimMismatch(format!(
                "witness must be {d}x{d}, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let defect = herm_defect(&mat);
        let tol = Tolerances::default().herm;
        if defect > tol {
            return Err(Error::NotHermitian { defect, tol });
        }
        Ok(Witness {
            dim_a,
            dim_b,
            mat,
            origin,
        })
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }

    pub fn origin(&self) -> WitnessOrigin {
        self.origin
    }

    /// Tr(W rho).
    pub fn expectation(&self, rho: &DensityMatrix) -> Result<f64> {
        if rho.dim_a() != self.dim_a || rho.dim_b() != self.dim_b {
            return Err(Error::DimMismatch(format!(
                "witness on ({}, {}) applied to state on ({}, {})",
                self.dim_a,
                self.dim_b,
                rho.dim_a(),
                rho.dim_b()
            )));
        }
        expectation_raw(rho.mat(), &self.mat)
    }
}

/// PPT criterion: the smallest eigenvalue of the partial transpose.
/// Negative (beyond tolerance) certifies entanglement.
pub fn ppt_check(rho: &DensityMatrix, tol_detect: f64) -> Result<CriterionReport> {
    let pt = partial_transpose(rho.mat(), rho.dim_a(), rho.dim_b())?;
    let evs = eigvals_hermitian(&pt)?;
    let min = evs[0];
    let report = CriterionReport::new(Criterion::Ppt, min, min < -tol_detect)
        .with("min_eigenvalue", min)
        .with("max_eigenvalue", *evs.last().unwrap());
    Ok(report)
}

/// CCN (realignment) criterion: the Schmidt coefficient sum
/// sum_k lambda_k. Values above 1 (beyond tolerance) certify entanglement.
pub fn ccn_check(rho: &DensityMatrix, tol_detect: f64) -> Result<CriterionReport> {
    let schmidt = operator_schmidt(rho)?;
    let sum = schmidt.schmidt_sum;
    let report = CriterionReport::new(Criterion::Ccn, sum, sum > 1.0 + tol_detect)
        .with("lambda_sum", sum)
        .with("lambda_max", schmidt.lambdas.first().copied().unwrap_or(0.0));
    Ok(report)
}

/// Witness for the CCN criterion: W = 1 - sum_k G^A_k x G^B_k with the
/// operators from the state's operator Schmidt decomposition. Then
/// Tr(W rho) = 1 - sum_k lambda_k.
pub fn ccn_witness(rho: &DensityMatrix) -> Result<Witness> {
    let schmidt = operator_schmidt(rho)?;
    let d = rho.dim();
    let mut m = identity(d);
    for (ga, gb) in schmidt.ops_a.iter().zip(&schmidt.ops_b) {
        m -= kron(ga.mat(), gb.mat());
    }
    Witness::new(m, rho.dim_a(), rho.dim_b(), WitnessOrigin::CcnSchmidt)
}

/// The same witness built from the realigned matrix: with the full SVD
/// R(rho) = U Σ V†, W = 1 - R^{-1}(U V†). Agrees with [`ccn_witness`]
/// whenever the Schmidt coefficients are all nonzero (the zero-coefficient
/// operator pairs are not unique).
pub fn ccn_witness_realign(rho: &DensityMatrix) -> Result<Witness> {
    let da = rho.dim_a();
    let db = rho.dim_b();
    let r = realign(rho.mat(), da, db)?;
    let (u, _sigma, v_t) = svd_thin(&r)?;
    let uv = &u * &v_t;
    let m = identity(da * db) - inverse_realign(&uv, da, db)?;
    Witness::new(m, da, db, WitnessOrigin::CcnRealign)
}

/// The LOO variance bound: any complete set of d^2 LOOs satisfies
/// sum_k Delta^2(G_k) >= d - 1 on every state.
pub fn lur_bound(d: usize) -> f64 {
    d as f64 - 1.0
}

/// Generic local uncertainty relation. Given observables A_k, B_k and
/// caller-supplied variance bounds sum_k Delta^2(A_k) >= C_A (resp. C_B),
/// every separable state obeys
/// sum_k Delta^2(A_k x 1 + 1 x B_k) >= C_A + C_B.
/// The report value is the left side minus the right side; negative
/// (beyond tolerance) certifies entanglement.
pub fn lur_generic(
    rho: &DensityMatrix,
    obs_a: &[Observable],
    obs_b: &[Observable],
    c_a: f64,
    c_b: f64,
    tol_detect: f64,
) -> Result<CriterionReport> {
    if obs_a.len() != obs_b.len() {
        return Err(Error::DimMismatch(format!(
            "observable lists of unequal length: {} vs {}",
            obs_a.len(),
            obs_b.len()
        )));
    }
    let da = rho.dim_a();
    let db = rho.dim_b();
    let mut variance_sum = 0.0;
    for (a, b) in obs_a.iter().zip(obs_b) {
        if a.dim() != da || b.dim() != db {
            return Err(Error::DimMismatch(format!(
                "observables of dimensions ({}, {}) on a ({da}, {db}) state",
                a.dim(),
                b.dim()
            )));
        }
        let joint = kron(a.mat(), &identity(db)) + kron(&identity(da), b.mat());
        let sq = &joint * &joint;
        let mean_sq = expectation_raw(rho.mat(), &sq)?;
        let mean = expectation_raw(rho.mat(), &joint)?;
        variance_sum += mean_sq - mean * mean;
    }
    let bound = c_a + c_b;
    let value = variance_sum - bound;
    let report = CriterionReport::new(Criterion::LurGeneric, value, value < -tol_detect)
        .with("variance_sum", variance_sum)
        .with("bound", bound);
    Ok(report)
}

/// The CCN-adapted LUR functional over paired operator lists:
///
///   1 - sum_k <A_k x B_k> - (1/2) sum_k <A_k x 1 - 1 x B_k>^2.
///
/// Nonnegative on every separable state when the lists come from LOO sets
/// (zero padding allowed); negative values certify entanglement. The value
/// never exceeds the plain witness expectation 1 - sum_k <A_k x B_k>.
pub fn lur_ccn_value(
    rho: &DensityMatrix,
    ops_a: &[Observable],
    ops_b: &[Observable],
    tol_detect: f64,
) -> Result<CriterionReport> {
    if ops_a.len() != ops_b.len() {
        return Err(Error::DimMismatch(format!(
            "operator lists of unequal length: {} vs {}",
            ops_a.len(),
            ops_b.len()
        )));
    }
    let da = rho.dim_a();
    let db = rho.dim_b();
    let mut linear = 0.0;
    let mut quadratic = 0.0;
    for (a, b) in ops_a.iter().zip(ops_b) {
        if a.dim() != da || b.dim() != db {
            return Err(Error::DimMismatch(format!(
                "operators of dimensions ({}, {}) on a ({da}, {db}) state",
                a.dim(),
                b.dim()
            )));
        }
        linear += expectation_raw(rho.mat(), &kron(a.mat(), b.mat()))?;
        let diff = kron(a.mat(), &identity(db)) - kron(&identity(da), b.mat());
        let mean = expectation_raw(rho.mat(), &diff)?;
        quadratic += mean * mean;
    }
    let value = 1.0 - linear - 0.5 * quadratic;
    let report = CriterionReport::new(Criterion::LurCcn, value, value < -tol_detect)
        .with("linear_part", linear)
        .with("quadratic_part", quadratic)
        .with("num_terms", ops_a.len() as f64);
    Ok(report)
}

/// Full LUR detection for a state: evaluates the CCN-adapted LUR with the
/// state's own operator Schmidt decomposition. For unequal local
/// dimensions the shorter operator list on the larger subsystem is
/// completed to a full LOO basis and the other side is padded with zero
/// operators, which only strengthens the test. Detects every state the
/// CCN criterion detects.
pub fn lur_detect(rho: &DensityMatrix, tol_detect: f64) -> Result<CriterionReport> {
    let schmidt = operator_schmidt(rho)?;
    let da = rho.dim_a();
    let db = rho.dim_b();
    let mut ops_a = schmidt.ops_a;
    let mut ops_b = schmidt.ops_b;
    let mut padded = 0usize;
    if da != db {
        if da < db {
            let full_b = complete_loos(&ops_b, db)?;
            padded = full_b.len() - ops_b.len();
            ops_b = full_b.ops().to_vec();
            let zero = Observable::new(CMatrix::zeros(da, da))?;
            ops_a.resize(ops_b.len(), zero);
        } else {
            let full_a = complete_loos(&ops_a, da)?;
            padded = full_a.len() - ops_a.len();
            ops_a = full_a.ops().to_vec();
            let zero = Observable::new(CMatrix::zeros(db, db))?;
            ops_b.resize(ops_a.len(), zero);
        }
    }
    let mut report = lur_ccn_value(rho, &ops_a, &ops_b, tol_detect)?;
    report.details.insert("lambda_sum".into(), schmidt.schmidt_sum);
    report.details.insert("padded_terms".into(), padded as f64);
    Ok(report)
}
