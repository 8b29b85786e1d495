//! Constructors for the reference states used throughout (singlet, noisy
//! singlet, the 3x3 Tiles bound-entangled family, maximally entangled
//! states) and seeded random-state generators for property testing.
//!
//! All randomness comes from ChaCha8 seeded with a caller-supplied 64-bit
//! seed, so every corpus is reproducible.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::operator_algebra::{identity, kron, CMatrix, CVector, DensityMatrix};

/// A one-parameter family of states p -> rho(p).
pub struct StateFamily {
    name: String,
    dim_a: usize,
    dim_b: usize,
    p_range: (f64, f64),
    generator: Box<dyn Fn(f64) -> Result<DensityMatrix> + Send + Sync>,
}

impl StateFamily {
    /// A user-supplied family. Scans spot-check detection monotonicity in
    /// p and flag violations rather than trusting the generator.
    pub fn new(
        name: impl Into<String>,
        dim_a: usize,
        dim_b: usize,
        p_range: (f64, f64),
        generator: impl Fn(f64) -> Result<DensityMatrix> + Send + Sync + 'static,
    ) -> Self {
        StateFamily {
            name: name.into(),
            dim_a,
            dim_b,
            p_range,
            generator: Box::new(generator),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn p_range(&self) -> (f64, f64) {
        self.p_range
    }

    pub fn generate(&self, p: f64) -> Result<DensityMatrix> {
        (self.generator)(p)
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// |v><v| for a (not necessarily normalized) column vector.
pub fn projector(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

/// Computational product basis state |i,j><i,j| on a d_A x d_B system.
pub fn product_basis_state(dim_a: usize, dim_b: usize, i: usize, j: usize) -> DensityMatrix {
    assert!(i < dim_a && j < dim_b);
    let mut v = CVector::zeros(dim_a * dim_b);
    v[i * dim_b + j] = c(1.0, 0.0);
    DensityMatrix::new(projector(&v), dim_a, dim_b).expect("basis projector is a valid state")
}

/// The two-qubit singlet projector |psi_s><psi_s|, psi_s = (|01> - |10>)/sqrt(2).
pub fn singlet() -> DensityMatrix {
    let s = 1.0 / 2f64.sqrt();
    let v = CVector::from_vec(vec![c(0., 0.), c(s, 0.), c(-s, 0.), c(0., 0.)]);
    DensityMatrix::new(projector(&v), 2, 2).expect("singlet is a valid state")
}

/// Singlet mixed with the separable noise 2/3 |00><00| + 1/3 |01><01|:
/// rho(p) = p |psi_s><psi_s| + (1-p) rho_sep.
pub fn noisy_singlet(p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "noisy_singlet parameter p = {p} outside [0, 1]"
        )));
    }
    let sep = product_basis_state(2, 2, 0, 0).mat().scale(2.0 / 3.0)
        + product_basis_state(2, 2, 0, 1).mat().scale(1.0 / 3.0);
    let mat = singlet().mat().scale(p) + sep.scale(1.0 - p);
    DensityMatrix::new(mat, 2, 2)
}

/// The noisy-singlet family over p in [0, 1].
pub fn noisy_singlet_family() -> StateFamily {
    StateFamily {
        name: "noisy_singlet".into(),
        dim_a: 2,
        dim_b: 2,
        p_range: (0.0, 1.0),
        generator: Box::new(noisy_singlet),
    }
}

/// The five Tiles product vectors on a 3x3 system.
pub fn tiles_vectors() -> [CVector; 5] {
    let e = |i: usize| {
        let mut v = CVector::zeros(3);
        v[i] = c(1., 0.);
        v
    };
    let s = 1.0 / 2f64.sqrt();
    let k = |a: &CVector, b: &CVector| a.kronecker(b);
    [
        k(&e(0), &(e(0) - e(1))).scale(s),
        k(&(e(0) - e(1)), &e(2)).scale(s),
        k(&e(2), &(e(1) - e(2))).scale(s),
        k(&(e(1) - e(2)), &e(0)).scale(s),
        k(&(e(0) + e(1) + e(2)), &(e(0) + e(1) + e(2))).scale(1.0 / 3.0),
    ]
}

/// The 3x3 bound-entangled Tiles state: (1 - sum_i |psi_i><psi_i|)/4.
pub fn tiles_rho_be() -> DensityMatrix {
    let mut m = identity(9);
    for v in tiles_vectors() {
        m -= projector(&v);
    }
    DensityMatrix::new(m.scale(0.25), 3, 3).expect("Tiles state is a valid state")
}

/// Tiles state mixed with white noise: rho(p) = p rho_BE + (1-p) 1/9.
pub fn tiles_state(p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "tiles parameter p = {p} outside [0, 1]"
        )));
    }
    let mat = tiles_rho_be().mat().scale(p) + identity(9).scale((1.0 - p) / 9.0);
    DensityMatrix::new(mat, 3, 3)
}

/// The Tiles family over p in [0, 1].
pub fn tiles_family() -> StateFamily {
    StateFamily {
        name: "tiles".into(),
        dim_a: 3,
        dim_b: 3,
        p_range: (0.0, 1.0),
        generator: Box::new(tiles_state),
    }
}

/// Maximally entangled vector sum_i |ii>/sqrt(d) on a d x d system.
pub fn max_entangled(d: usize) -> Result<CVector> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!(
            "maximally entangled state needs local dimension >= 2, got {d}"
        )));
    }
    let mut v = CVector::zeros(d * d);
    let amp = 1.0 / (d as f64).sqrt();
    for i in 0..d {
        v[i * d + i] = c(amp, 0.0);
    }
    Ok(v)
}

fn ginibre(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        c(re, im)
    })
}

/// Random density matrix rho = G G† / Tr(G G†) with G a d x rank complex
/// Gaussian (Ginibre) matrix. Deterministic per seed.
pub fn random_density(d: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    if rank == 0 || rank > d {
        return Err(Error::InvalidParameter(format!(
            "rank {rank} outside 1..={d}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = ginibre(d, rank, &mut rng);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m.scale(1.0 / tr), 1, d)
}

/// Same as `random_density` but tagged with bipartite dimensions.
pub fn random_bipartite_density(
    dim_a: usize,
    dim_b: usize,
    rank: usize,
    seed: u64,
) -> Result<DensityMatrix> {
    let rho = random_density(dim_a * dim_b, rank, seed)?;
    DensityMatrix::new(rho.mat().clone(), dim_a, dim_b)
}

/// Random separable state: a Dirichlet-weighted mixture of `terms` random
/// product states rho_A x rho_B. Separable by construction.
pub fn random_separable(
    dim_a: usize,
    dim_b: usize,
    terms: usize,
    seed: u64,
) -> Result<DensityMatrix> {
    if terms == 0 {
        return Err(Error::InvalidParameter("terms must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Dirichlet-uniform weights via normalized exponentials.
    let mut weights: Vec<f64> = (0..terms).map(|_| Exp1.sample(&mut rng)).collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    let mut mat = CMatrix::zeros(dim_a * dim_b, dim_a * dim_b);
    for w in weights {
        let ga = ginibre(dim_a, dim_a, &mut rng);
        let gb = ginibre(dim_b, dim_b, &mut rng);
        let ma = &ga * ga.adjoint();
        let mb = &gb * gb.adjoint();
        let ra = ma.scale(1.0 / ma.trace().re);
        let rb = mb.scale(1.0 / mb.trace().re);
        mat += kron(&ra, &rb).scale(w);
    }
    DensityMatrix::new(mat, dim_a, dim_b)
}

/// Haar-random unitary: QR of a Ginibre matrix with the phases of the R
/// diagonal absorbed into Q.
pub fn haar_unitary(d: usize, seed: u64) -> Result<CMatrix> {
    if d == 0 {
        return Err(Error::InvalidParameter("dimension must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = ginibre(d, d, &mut rng);
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let mut u = q;
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            c(1.0, 0.0)
        };
        for i in 0..d {
            u[(i, j)] *= phase;
        }
    }
    Ok(u)
}

/// Random Hermitian matrix (Gaussian entries), for property tests.
pub fn random_hermitian(d: usize, seed: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = ginibre(d, d, &mut rng);
    (&g + g.adjoint()).scale(0.5)
}

/// Random normalized state vector of dimension `n`.
pub fn random_state_vector(n: usize, seed: u64) -> CVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = CVector::from_fn(n, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        c(re, im)
    });
    let norm = v.norm();
    v /= c(norm, 0.0);
    v
}

/// Looks up a built-in family by name.
pub fn family_by_name(name: &str) -> Result<StateFamily> {
    match name {
        "noisy_singlet" => Ok(noisy_singlet_family()),
        "tiles" => Ok(tiles_family()),
        other => Err(Error::InvalidParameter(format!(
            "unknown state family '{other}' (expected noisy_singlet or tiles)"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator_algebra::{
        eigvals_hermitian, expectation, is_density_matrix, max_abs_diff, partial_trace,
        Observable, Subsystem, Tolerances,
    };

    #[test]
    fn singlet_properties() {
        let rho = singlet();
        let sz = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1., 0.), c(-1., 0.)]));
        let zz = Observable::new(kron(&sz, &sz)).unwrap();
        assert!((expectation(&rho, &zz).unwrap() + 1.0).abs() < 1e-12);
        let red = partial_trace(rho.mat(), 2, 2, Subsystem::A).unwrap();
        assert!(max_abs_diff(&red, &identity(2).scale(0.5)) < 1e-12);
        assert!((rho.purity() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn noisy_singlet_endpoints_and_range() {
        let p0 = noisy_singlet(0.0).unwrap();
        assert!((p0.mat()[(0, 0)].re - 2.0 / 3.0).abs() < 1e-15);
        let p1 = noisy_singlet(1.0).unwrap();
        assert!(max_abs_diff(p1.mat(), singlet().mat()) < 1e-15);
        assert!(noisy_singlet(-0.1).is_err());
        assert!(noisy_singlet(1.1).is_err());
    }

    #[test]
    fn families_affine_in_p() {
        for family in [noisy_singlet_family(), tiles_family()] {
            let (p1, p2) = (0.2, 0.9);
            let mid = family.generate((p1 + p2) / 2.0).unwrap();
            let avg = (family.generate(p1).unwrap().mat()
                + family.generate(p2).unwrap().mat())
            .scale(0.5);
            assert!(max_abs_diff(mid.mat(), &avg) < 1e-12);
        }
    }

    #[test]
    fn tiles_vectors_orthonormal() {
        let vs = tiles_vectors();
        for (i, a) in vs.iter().enumerate() {
            for (j, b) in vs.iter().enumerate() {
                let ip = a.dotc(b);
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (ip - c(expected, 0.)).norm() < 1e-12,
                    "<psi_{i}|psi_{j}> = {ip}"
                );
            }
        }
    }

    #[test]
    fn tiles_state_is_valid_and_unit_trace() {
        let rho = tiles_rho_be();
        assert!((rho.mat().trace().re - 1.0).abs() < 1e-12);
        for p in [0.0, 0.33, 0.8897, 1.0] {
            let s = tiles_state(p).unwrap();
            let rep =
                is_density_matrix(s.mat(), 3, 3, &Tolerances::default()).unwrap();
            assert!(rep.valid, "tiles({p}) invalid: {rep:?}");
        }
    }

    #[test]
    fn max_entangled_properties() {
        let v = max_entangled(2).unwrap();
        let s = 1.0 / 2f64.sqrt();
        assert!((v[0] - c(s, 0.)).norm() < 1e-15);
        assert!((v[3] - c(s, 0.)).norm() < 1e-15);

        for d in [2usize, 3] {
            let v = max_entangled(d).unwrap();
            let rho = projector(&v);
            let red = partial_trace(&rho, d, d, Subsystem::A).unwrap();
            let evs = eigvals_hermitian(&red).unwrap();
            assert!(evs.iter().all(|&x| (x - 1.0 / d as f64).abs() < 1e-12));
        }

        // the singlet is orthogonal to |phi+>
        let phi = max_entangled(2).unwrap();
        let overlap = (singlet().mat() * &phi).dotc(&phi).norm();
        assert!(overlap < 1e-12);
        assert!(max_entangled(1).is_err());
    }

    #[test]
    fn random_density_rank_and_determinism() {
        let pure = random_density(4, 1, 11).unwrap();
        assert!((pure.purity() - 1.0).abs() < 1e-12);

        let full = random_density(4, 4, 11).unwrap();
        let evs = eigvals_hermitian(full.mat()).unwrap();
        assert!(evs[0] > 0.0);

        let a = random_density(5, 3, 42).unwrap();
        let b = random_density(5, 3, 42).unwrap();
        assert!(max_abs_diff(a.mat(), b.mat()) == 0.0);

        assert!(random_density(4, 0, 1).is_err());
        assert!(random_density(4, 5, 1).is_err());
    }

    #[test]
    fn random_separable_is_valid() {
        for seed in 0..20 {
            let rho = random_separable(2, 3, 4, seed).unwrap();
            let rep =
                is_density_matrix(rho.mat(), 2, 3, &Tolerances::default()).unwrap();
            assert!(rep.valid);
        }
        assert!(random_separable(2, 2, 0, 1).is_err());
    }

    #[test]
    fn haar_unitary_properties() {
        let u1 = haar_unitary(1, 3).unwrap();
        assert!((u1[(0, 0)].norm() - 1.0).abs() < 1e-12);

        for seed in 0..10 {
            let u = haar_unitary(4, seed).unwrap();
            let defect = max_abs_diff(&(u.adjoint() * &u), &identity(4));
            assert!(defect < 1e-10);
        }
        let a = haar_unitary(3, 1).unwrap();
        let b = haar_unitary(3, 2).unwrap();
        assert!(max_abs_diff(&a, &b) > 1e-3);
    }
}
