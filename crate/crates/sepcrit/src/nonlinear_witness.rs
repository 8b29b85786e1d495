//! Nonlinear refinements of the CCN witness via the Jamiolkowski
//! isomorphism. A witness W on a d x d system induces a positive map
//! Lambda(rho) = Tr_A[W (rho^T x 1_B)]; after rescaling W so that
//! d*Lambda is trace non-increasing, the functional
//!
//!   F(rho) = <W'> - <X><X†>/s(psi),   X = (I x d Lambda)(|phi+><psi|),
//!
//! is nonnegative on all separable states for any unit vector psi with
//! maximal squared Schmidt coefficient s(psi), and improves on the linear
//! witness wherever <X> is nonzero.

use crate::criteria::{Criterion, CriterionReport, Witness};
use crate::error::{Error, Result};
use crate::loo_basis::LooBasis;
use crate::operator_algebra::{
    eigvals_hermitian, expectation_raw, identity, kron, max_abs_diff, partial_trace,
    trace_product, CMatrix, CVector, DensityMatrix, Observable, Subsystem,
};
use crate::states::{max_entangled, projector};

/// A nonlinear witness: the rescaled linear witness, the reference vector
/// psi, its maximal squared Schmidt coefficient, and the correction
/// operator X (generally non-Hermitian).
#[derive(Debug, Clone)]
pub struct NonlinearWitness {
    w_scaled: CMatrix,
    dim: usize,
    psi: CVector,
    s_psi: f64,
    x_op: CMatrix,
}

impl NonlinearWitness {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The rescaled witness matrix W' = W / (d * lambda_max(Tr_B W)).
    pub fn witness_matrix(&self) -> &CMatrix {
        &self.w_scaled
    }

    pub fn psi(&self) -> &CVector {
        &self.psi
    }

    /// Maximal squared Schmidt coefficient of psi.
    pub fn s_psi(&self) -> f64 {
        self.s_psi
    }

    pub fn x_op(&self) -> &CMatrix {
        &self.x_op
    }
}

/// The positive map of a witness under the Jamiolkowski correspondence:
/// Lambda(rho) = Tr_A[W (rho^T x 1_B)], unscaled.
pub fn jamiolkowski_apply(w: &Witness, rho_a: &Observable) -> Result<Observable> {
    if rho_a.dim() != w.dim_a() {
        return Err(Error::DimMismatch(format!(
            "input of dimension {} for a map from dimension {}",
            rho_a.dim(),
            w.dim_a()
        )));
    }
    let out = apply_map_raw(w.mat(), w.dim_a(), w.dim_b(), rho_a.mat());
    Observable::with_tolerance(out, 1e-9)
}

/// Linear extension of the Jamiolkowski map to arbitrary (not necessarily
/// Hermitian) inputs on subsystem A.
fn apply_map_raw(w: &CMatrix, dim_a: usize, dim_b: usize, m: &CMatrix) -> CMatrix {
    let big = w * kron(&m.transpose(), &identity(dim_b));
    partial_trace(&big, dim_a, dim_b, Subsystem::B)
        .expect("witness and kron factor share dimensions")
}

/// Checks the maximally-entangled expansion identity
/// |phi+><phi+| = sum_i G_i x G_i^T / d, valid for every complete LOO
/// basis. Returns the max-entry defect.
pub fn max_entangled_expansion_check(basis: &LooBasis) -> Result<f64> {
    let d = basis.dim();
    let phi = max_entangled(d)?;
    let target = projector(&phi);
    let mut sum = CMatrix::zeros(d * d, d * d);
    for g in basis.ops() {
        sum += kron(g.mat(), &g.mat().transpose());
    }
    sum.unscale_mut(d as f64);
    Ok(max_abs_diff(&sum, &target))
}

/// Rescale factor making d*Lambda trace non-increasing: the map scales
/// traces by at most d * lambda_max(Tr_B W).
fn witness_scale(w: &Witness) -> Result<f64> {
    let d = w.dim_a();
    let tr_b = partial_trace(w.mat(), d, w.dim_b(), Subsystem::A)?;
    let evs = eigvals_hermitian(&tr_b)?;
    let lmax = *evs.last().unwrap();
    if lmax <= 1e-12 {
        return Err(Error::InvalidParameter(
            "witness has a non-positive reduced trace map; cannot normalize".into(),
        ));
    }
    Ok(d as f64 * lmax)
}

/// (I x d Lambda_{w'}) applied to an operator on H_A x H_A, blockwise on
/// the A-major composite index.
fn apply_map_second_factor(w_scaled: &CMatrix, d: usize, t: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(d * d, d * d);
    for p in 0..d {
        for q in 0..d {
            let block = CMatrix::from_fn(d, d, |k, l| t[(p * d + k, q * d + l)]);
            let mapped = apply_map_raw(w_scaled, d, d, &block).scale(d as f64);
            for k in 0..d {
                for l in 0..d {
                    out[(p * d + k, q * d + l)] = mapped[(k, l)];
                }
            }
        }
    }
    out
}

/// Builds the nonlinear witness for a square-system witness `w` and a unit
/// vector `psi` on H_A x H_A.
pub fn build_nonlinear(w: &Witness, psi: &CVector) -> Result<NonlinearWitness> {
    let d = w.dim_a();
    if w.dim_b() != d {
        return Err(Error::DimMismatch(format!(
            "nonlinear construction needs a square system, got ({}, {})",
            w.dim_a(),
            w.dim_b()
        )));
    }
    if psi.len() != d * d {
        return Err(Error::DimMismatch(format!(
            "psi must have {} amplitudes for a {d}x{d} system, got {}",
            d * d,
            psi.len()
        )));
    }
    let norm = psi.norm();
    if norm < 1e-12 {
        return Err(Error::InvalidParameter("psi must be nonzero".into()));
    }
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidParameter(format!(
            "psi must be normalized, got |psi| = {norm}"
        )));
    }

    let scale = witness_scale(w)?;
    let w_scaled = w.mat().scale(1.0 / scale);

    // s(psi): largest eigenvalue of the reduced state of psi
    let psi_proj = projector(psi);
    let reduced = partial_trace(&psi_proj, d, d, Subsystem::A)?;
    let s_psi = *eigvals_hermitian(&reduced)?.last().unwrap();

    // X = (I x d Lambda_{w'})(|phi+><psi|)
    let phi = max_entangled(d)?;
    let t = &phi * psi.adjoint();
    let x_op = apply_map_second_factor(&w_scaled, d, &t);

    Ok(NonlinearWitness {
        w_scaled,
        dim: d,
        psi: psi.clone(),
        s_psi,
        x_op,
    })
}

/// Evaluates F(rho) = <W'> - |<X>|^2 / s(psi). Negative values (beyond
/// tolerance) certify entanglement.
pub fn nonlinear_value(
    nw: &NonlinearWitness,
    rho: &DensityMatrix,
    tol_detect: f64,
) -> Result<CriterionReport> {
    if rho.dim_a() != nw.dim || rho.dim_b() != nw.dim {
        return Err(Error::DimMismatch(format!(
            "nonlinear witness on {0}x{0} applied to a ({1}, {2}) state",
            nw.dim,
            rho.dim_a(),
            rho.dim_b()
        )));
    }
    let w_part = expectation_raw(rho.mat(), &nw.w_scaled)?;
    let x_mean = trace_product(rho.mat(), &nw.x_op);
    let correction = x_mean.norm_sqr() / nw.s_psi;
    let value = w_part - correction;
    let mut report = CriterionReport {
        criterion: Criterion::Nonlinear,
        value,
        detected: value < -tol_detect,
        details: Default::default(),
    };
    report.details.insert("witness_part".into(), w_part);
    report.details.insert("correction".into(), correction);
    report.details.insert("s_psi".into(), nw.s_psi);
    Ok(report)
}

fn check_unitary(u: &CMatrix, d: usize) -> Result<()> {
    if u.nrows() != d || u.ncols() != d {
        return Err(Error::DimMismatch(format!(
            "unitary must be {d}x{d}, got {}x{}",
            u.nrows(),
            u.ncols()
        )));
    }
    let defect = max_abs_diff(&(u.adjoint() * u), &identity(d));
    if defect > 1e-10 {
        return Err(Error::NotUnitary { defect });
    }
    Ok(())
}

/// Closed form for psi = (U^A)† x 1 |phi+> (so s(psi) = 1/d):
/// F(rho) = <W'> - d <W'(U x 1)><(U x 1)† W'>.
pub fn nl_example_unitary(
    w: &Witness,
    u: &CMatrix,
    rho: &DensityMatrix,
    tol_detect: f64,
) -> Result<CriterionReport> {
    let d = w.dim_a();
    if w.dim_b() != d {
        return Err(Error::DimMismatch(
            "unitary example needs a square system".into(),
        ));
    }
    check_unitary(u, d)?;
    if rho.dim_a() != d || rho.dim_b() != d {
        return Err(Error::DimMismatch(format!(
            "witness on {0}x{0} applied to a ({1}, {2}) state",
            d,
            rho.dim_a(),
            rho.dim_b()
        )));
    }
    let scale = witness_scale(w)?;
    let w_scaled = w.mat().scale(1.0 / scale);
    let w_part = expectation_raw(rho.mat(), &w_scaled)?;
    // <W'(U x 1)> and <(U x 1)† W'> are complex conjugates on Hermitian rho
    let shifted = &w_scaled * kron(u, &identity(d));
    let mean = trace_product(rho.mat(), &shifted);
    let value = w_part - d as f64 * mean.norm_sqr();
    let mut report = CriterionReport {
        criterion: Criterion::Nonlinear,
        value,
        detected: value < -tol_detect,
        details: Default::default(),
    };
    report.details.insert("witness_part".into(), w_part);
    report
        .details
        .insert("correction".into(), d as f64 * mean.norm_sqr());
    report.details.insert("s_psi".into(), 1.0 / d as f64);
    Ok(report)
}

/// Closed form for psi = 1 x (U^A)† |phi+> through the coefficients
/// eta_ij = Tr[(G_i)^T (G_j)^T U] over a complete LOO basis:
///
///   X = (U^T x 1 - sum_ij eta_ji G_i x B_j) / scale,
///
/// where B_j = Tr(G_j) 1 - Lambda_W((G_j)^T) are the witness's partner
/// operators in this basis. At U = 1 the bracket reduces to the plain CCN
/// witness. F(rho) = <W'> - d |<X>|^2.
pub fn nl_example_eta(
    w: &Witness,
    u: &CMatrix,
    basis: &LooBasis,
    rho: &DensityMatrix,
    tol_detect: f64,
) -> Result<CriterionReport> {
    let d = w.dim_a();
    if w.dim_b() != d {
        return Err(Error::DimMismatch(
            "eta example needs a square system".into(),
        ));
    }
    if basis.dim() != d {
        return Err(Error::DimMismatch(format!(
            "basis dimension {} does not match witness dimension {d}",
            basis.dim()
        )));
    }
    check_unitary(u, d)?;
    if rho.dim_a() != d || rho.dim_b() != d {
        return Err(Error::DimMismatch(format!(
            "witness on {0}x{0} applied to a ({1}, {2}) state",
            d,
            rho.dim_a(),
            rho.dim_b()
        )));
    }
    let scale = witness_scale(w)?;
    let n = basis.len();
    let ops = basis.ops();

    // partner operators of the basis under the unscaled map
    let partners: Vec<CMatrix> = ops
        .iter()
        .map(|g| {
            identity(d).scale(g.mat().trace().re)
                - apply_map_raw(w.mat(), d, d, &g.mat().transpose())
        })
        .collect();

    // eta_ij = Tr[(G_i)^T (G_j)^T U]
    let eta = nalgebra::DMatrix::from_fn(n, n, |i, j| {
        trace_product(&(ops[i].mat().transpose() * ops[j].mat().transpose()), u)
    });

    let mut x = kron(&u.transpose(), &identity(d));
    for i in 0..n {
        for j in 0..n {
            x -= kron(ops[i].mat(), &partners[j]) * eta[(j, i)];
        }
    }
    x.unscale_mut(scale);

    let w_scaled = w.mat().scale(1.0 / scale);
    let w_part = expectation_raw(rho.mat(), &w_scaled)?;
    let x_mean = trace_product(rho.mat(), &x);
    let value = w_part - d as f64 * x_mean.norm_sqr();
    let mut report = CriterionReport {
        criterion: Criterion::Nonlinear,
        value,
        detected: value < -tol_detect,
        details: Default::default(),
    };
    report.details.insert("witness_part".into(), w_part);
    report
        .details
        .insert("correction".into(), d as f64 * x_mean.norm_sqr());
    report.details.insert("s_psi".into(), 1.0 / d as f64);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::{ccn_witness, TOL_DETECT};
    use crate::loo_basis::{canonical_loos, singlet_schmidt_loos, LooBasis};
    use crate::operator_algebra::test_support::*;
    use crate::states;

    fn singlet_witness() -> Witness {
        ccn_witness(&states::singlet()).unwrap()
    }

    fn phi_plus(d: usize) -> CVector {
        max_entangled(d).unwrap()
    }

    #[test]
    fn jamiolkowski_trace_behavior() {
        let w = singlet_witness();
        let half = Observable::new(identity(2).scale(0.5)).unwrap();
        let out = jamiolkowski_apply(&w, &half).unwrap();
        assert!((out.mat().trace().re - 1.0).abs() < 1e-12);

        let mut e00 = CMatrix::zeros(2, 2);
        e00[(0, 0)] = c(1., 0.);
        let out = jamiolkowski_apply(&w, &Observable::new(e00).unwrap()).unwrap();
        assert!((out.mat().trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn jamiolkowski_is_linear() {
        let w = singlet_witness();
        for seed in 0..20 {
            let r1 = states::random_hermitian(2, seed);
            let r2 = states::random_hermitian(2, seed + 100);
            let (a, b) = (0.3, -1.7);
            let combo = r1.scale(a) + r2.scale(b);
            let lhs = apply_map_raw(w.mat(), 2, 2, &combo);
            let rhs = apply_map_raw(w.mat(), 2, 2, &r1).scale(a)
                + apply_map_raw(w.mat(), 2, 2, &r2).scale(b);
            assert!(max_abs_diff(&lhs, &rhs) < 1e-12);
        }
    }

    #[test]
    fn expansion_identity_for_loo_bases() {
        assert!(max_entangled_expansion_check(&canonical_loos(2).unwrap()).unwrap() < 1e-12);
        assert!(max_entangled_expansion_check(&canonical_loos(3).unwrap()).unwrap() < 1e-12);
        // sign flips cancel in G x G^T
        let (a, _) = singlet_schmidt_loos();
        assert!(max_entangled_expansion_check(&a).unwrap() < 1e-12);
    }

    #[test]
    fn jamiolkowski_round_trip_reconstructs_witness() {
        for (w, d) in [
            (singlet_witness(), 2usize),
            (ccn_witness(&states::tiles_rho_be()).unwrap(), 3),
        ] {
            let scale = witness_scale(&w).unwrap();
            let w_scaled = w.mat().scale(1.0 / scale);
            let rebuilt =
                apply_map_second_factor(&w_scaled, d, &projector(&phi_plus(d)));
            assert!(max_abs_diff(&rebuilt, &w_scaled) < 1e-9);
        }
    }

    #[test]
    fn s_psi_values() {
        let w = singlet_witness();
        let nw = build_nonlinear(&w, &phi_plus(2)).unwrap();
        assert!((nw.s_psi() - 0.5).abs() < 1e-12);

        // any (U† x 1)|phi+> stays maximally entangled
        for seed in 0..10 {
            let u = states::haar_unitary(2, seed).unwrap();
            let psi = kron(&u.adjoint(), &identity(2)) * phi_plus(2);
            let nw = build_nonlinear(&w, &psi).unwrap();
            assert!((nw.s_psi() - 0.5).abs() < 1e-10);
        }

        let mut prod = CVector::zeros(4);
        prod[0] = c(1., 0.);
        let nw = build_nonlinear(&w, &prod).unwrap();
        assert!((nw.s_psi() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn build_rejects_bad_inputs() {
        let w = singlet_witness();
        assert!(build_nonlinear(&w, &CVector::zeros(4)).is_err());
        assert!(build_nonlinear(&w, &CVector::zeros(9)).is_err());
        let unnormalized = CVector::from_vec(vec![c(2., 0.), c(0., 0.), c(0., 0.), c(0., 0.)]);
        assert!(build_nonlinear(&w, &unnormalized).is_err());
    }

    #[test]
    fn fixed_points_with_singlet_witness() {
        let w = singlet_witness();
        let nw = build_nonlinear(&w, &phi_plus(2)).unwrap();

        // X(phi+) is the rescaled witness itself
        assert!(max_abs_diff(nw.x_op(), nw.witness_matrix()) < 1e-10);

        let f = nonlinear_value(&nw, &states::singlet(), TOL_DETECT).unwrap();
        assert!(f.detected);
        assert!((f.value + 1.0).abs() < 1e-9);

        let f = nonlinear_value(&nw, &states::product_basis_state(2, 2, 0, 0), TOL_DETECT)
            .unwrap();
        assert!(!f.detected);
        assert!(f.value.abs() < 1e-9, "boundary value {}", f.value);

        let mixed = DensityMatrix::new(identity(4).scale(0.25), 2, 2).unwrap();
        let f = nonlinear_value(&nw, &mixed, TOL_DETECT).unwrap();
        assert!(!f.detected);
        assert!((f.value - 0.125).abs() < 1e-9);
    }

    #[test]
    fn unitary_form_matches_direct_construction() {
        let w = singlet_witness();
        // u = 1 on the singlet
        let direct = nonlinear_value(
            &build_nonlinear(&w, &phi_plus(2)).unwrap(),
            &states::singlet(),
            TOL_DETECT,
        )
        .unwrap();
        let closed = nl_example_unitary(&w, &identity(2), &states::singlet(), TOL_DETECT)
            .unwrap();
        assert!((direct.value + 1.0).abs() < 1e-9);
        assert!((closed.value - direct.value).abs() < 1e-10);

        // frozen from the independent oracle: u = sigma_x on the singlet
        let closed =
            nl_example_unitary(&w, &pauli_x(), &states::singlet(), TOL_DETECT).unwrap();
        assert!((closed.value + 0.5).abs() < 1e-9);

        // random u, random rho: closed form equals the direct path
        for seed in 0..30 {
            let u = states::haar_unitary(2, seed).unwrap();
            let rho = states::random_bipartite_density(2, 2, 1 + seed as usize % 4, seed)
                .unwrap();
            let psi = kron(&u.adjoint(), &identity(2)) * phi_plus(2);
            let direct =
                nonlinear_value(&build_nonlinear(&w, &psi).unwrap(), &rho, TOL_DETECT)
                    .unwrap();
            let closed = nl_example_unitary(&w, &u, &rho, TOL_DETECT).unwrap();
            assert!(
                (direct.value - closed.value).abs() < 1e-10,
                "seed {seed}: {} vs {}",
                direct.value,
                closed.value
            );
        }

        let not_unitary = identity(2).scale(2.0);
        assert!(nl_example_unitary(&w, &not_unitary, &states::singlet(), TOL_DETECT).is_err());
    }

    #[test]
    fn eta_form_reduces_to_unitary_form_at_identity() {
        let w = singlet_witness();
        let schmidt = crate::schmidt_realign::operator_schmidt(&states::singlet()).unwrap();
        let basis = LooBasis::new(2, schmidt.ops_a).unwrap();
        let eta = nl_example_eta(&w, &identity(2), &basis, &states::singlet(), TOL_DETECT)
            .unwrap();
        let unitary =
            nl_example_unitary(&w, &identity(2), &states::singlet(), TOL_DETECT).unwrap();
        assert!((eta.value - unitary.value).abs() < 1e-10);
        assert!((eta.value + 1.0).abs() < 1e-9);

        // also over the canonical basis, which differs from the Schmidt one
        let eta = nl_example_eta(
            &w,
            &identity(2),
            &canonical_loos(2).unwrap(),
            &states::singlet(),
            TOL_DETECT,
        )
        .unwrap();
        assert!((eta.value + 1.0).abs() < 1e-9);
    }

    #[test]
    fn eta_form_matches_direct_construction_for_random_u() {
        let w = singlet_witness();
        let basis = canonical_loos(2).unwrap();
        for seed in 0..30 {
            let u = states::haar_unitary(2, seed).unwrap();
            let rho = states::random_bipartite_density(2, 2, 1 + seed as usize % 4, seed + 7)
                .unwrap();
            let psi = kron(&identity(2), &u.adjoint()) * phi_plus(2);
            let direct =
                nonlinear_value(&build_nonlinear(&w, &psi).unwrap(), &rho, TOL_DETECT)
                    .unwrap();
            let closed = nl_example_eta(&w, &u, &basis, &rho, TOL_DETECT).unwrap();
            assert!(
                (direct.value - closed.value).abs() < 1e-10,
                "seed {seed}: {} vs {}",
                direct.value,
                closed.value
            );
        }
    }

    #[test]
    fn never_exceeds_linear_witness() {
        let w = singlet_witness();
        let nw = build_nonlinear(&w, &phi_plus(2)).unwrap();
        for seed in 0..50 {
            let rho = states::random_bipartite_density(2, 2, 1 + seed as usize % 4, seed)
                .unwrap();
            let f = nonlinear_value(&nw, &rho, TOL_DETECT).unwrap();
            let linear = expectation_raw(rho.mat(), nw.witness_matrix()).unwrap();
            assert!(f.value <= linear + 1e-12);
        }
    }

    #[test]
    fn nonnegative_on_separable_states() {
        let w2 = singlet_witness();
        let nw2 = build_nonlinear(&w2, &phi_plus(2)).unwrap();
        let w3 = ccn_witness(&states::tiles_rho_be()).unwrap();
        let nw3 = build_nonlinear(&w3, &phi_plus(3)).unwrap();
        let basis2 = canonical_loos(2).unwrap();
        for seed in 0..200 {
            let sep2 = states::random_separable(2, 2, 1 + seed as usize % 4, seed).unwrap();
            assert!(
                nonlinear_value(&nw2, &sep2, TOL_DETECT).unwrap().value >= -1e-9,
                "direct 2x2 seed {seed}"
            );
            let u = states::haar_unitary(2, seed + 500).unwrap();
            assert!(
                nl_example_unitary(&w2, &u, &sep2, TOL_DETECT).unwrap().value >= -1e-9,
                "unitary 2x2 seed {seed}"
            );
            assert!(
                nl_example_eta(&w2, &u, &basis2, &sep2, TOL_DETECT).unwrap().value >= -1e-9,
                "eta 2x2 seed {seed}"
            );
        }
        for seed in 0..60 {
            let sep3 = states::random_separable(3, 3, 1 + seed as usize % 4, seed).unwrap();
            assert!(
                nonlinear_value(&nw3, &sep3, TOL_DETECT).unwrap().value >= -1e-9,
                "direct 3x3 seed {seed}"
            );
        }
    }
}
