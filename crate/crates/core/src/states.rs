//! Canonical two-qubit states and seeded random-state generators.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::{tensor, tensor_vec, ComplexMatrix, DensityMatrix, C0, C1};

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

pub(crate) fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ket0() -> [Complex64; 2] {
    [C1, C0]
}

pub fn ket1() -> [Complex64; 2] {
    [C0, C1]
}

pub fn ket_plus() -> [Complex64; 2] {
    let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
    [s, s]
}

pub fn ket_minus() -> [Complex64; 2] {
    let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
    [s, -s]
}

/// |00><00|.
pub fn projector_00() -> ComplexMatrix {
    ComplexMatrix::outer(&tensor_vec(&ket0(), &ket0()))
}

/// |1+><1+|, built from exact entries rather than (1/sqrt 2)^2.
pub fn projector_1plus() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4, 4);
    for (r, c) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
        m.set(r, c, Complex64::new(0.5, 0.0));
    }
    m
}

/// The separable but nonclassically correlated state 1/2 (|00><00| + |1+><1+|).
pub fn sigma_ncc() -> DensityMatrix {
    let m = &projector_00() + &projector_1plus();
    DensityMatrix::from_trusted(m.scale_real(0.5))
}

/// (|00> + |11>)/sqrt 2.
pub fn bell_phi_plus() -> DensityMatrix {
    let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
    DensityMatrix::from_trusted(ComplexMatrix::outer(&[s, C0, C0, s]))
}

/// |00><00|.
pub fn ground_state() -> DensityMatrix {
    DensityMatrix::from_trusted(projector_00())
}

pub fn maximally_mixed_pair() -> DensityMatrix {
    DensityMatrix::from_trusted(ComplexMatrix::identity(4).scale_real(0.25))
}

pub fn product_state(a: &DensityMatrix, b: &DensityMatrix) -> Result<DensityMatrix> {
    if a.dim() != 2 || b.dim() != 2 {
        return Err(Error::dim("two single-qubit states", format!("{} and {}", a.dim(), b.dim())));
    }
    Ok(DensityMatrix::from_trusted(tensor(a.matrix(), b.matrix())))
}

/// Two local orthonormal bases and a joint distribution over their product.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PccSpec {
    /// Columns are the local eigenbasis of qubit 1.
    pub basis_a: ComplexMatrix,
    /// Columns are the local eigenbasis of qubit 2.
    pub basis_b: ComplexMatrix,
    /// `probs[i][j]` weighs |e_i><e_i| ⊗ |f_j><f_j|.
    pub probs: [[f64; 2]; 2],
}

impl PccSpec {
    pub fn computational(probs: [[f64; 2]; 2]) -> Self {
        PccSpec {
            basis_a: ComplexMatrix::identity(2),
            basis_b: ComplexMatrix::identity(2),
            probs,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let flat = self.probs.iter().flatten();
        if flat.clone().any(|&p| !(p >= 0.0) || !p.is_finite()) {
            return Err(Error::InvalidProbabilities(format!(
                "negative or non-finite entry in {:?}",
                self.probs
            )));
        }
        let total: f64 = flat.sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidProbabilities(format!("entries sum to {total}")));
        }
        for (name, basis) in [("A", &self.basis_a), ("B", &self.basis_b)] {
            if basis.rows() != 2 || basis.cols() != 2 {
                return Err(Error::InvalidBasis(format!("basis {name} is not 2x2")));
            }
            let deviation = basis.unitarity_deviation();
            if deviation > 1e-10 {
                return Err(Error::InvalidBasis(format!(
                    "basis {name} columns are not orthonormal (deviation {deviation:e})"
                )));
            }
        }
        Ok(())
    }

    /// |e_i> ⊗ |f_j> for the product eigenbasis element (i, j).
    pub fn product_vector(&self, i: usize, j: usize) -> Vec<Complex64> {
        tensor_vec(&self.basis_a.column(i), &self.basis_b.column(j))
    }
}

/// sum_ij p_ij |e_i><e_i| ⊗ |f_j><f_j|.
pub fn pcc_state(spec: &PccSpec) -> Result<DensityMatrix> {
    spec.validate()?;
    Ok(DensityMatrix::from_trusted(assemble_pcc(spec)))
}

pub(crate) fn assemble_pcc(spec: &PccSpec) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            let p = spec.probs[i][j];
            if p == 0.0 {
                continue;
            }
            m = &m + &ComplexMatrix::outer(&spec.product_vector(i, j)).scale_real(p);
        }
    }
    m.hermitian_part()
}

fn gaussian_complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn ginibre<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let data = (0..n * n).map(|_| gaussian_complex(rng)).collect();
    ComplexMatrix::new(n, n, data).expect("n x n")
}

/// Haar-distributed unitary from Gram-Schmidt orthonormalization of a Ginibre
/// matrix (equivalent to QR with the R diagonal made positive).
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = ginibre(rng, n);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for c in 0..n {
        let mut v = g.column(c);
        for u in &cols {
            let proj: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= proj * ui;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    let mut u = ComplexMatrix::zeros(n, n);
    for (c, col) in cols.iter().enumerate() {
        for (r, &z) in col.iter().enumerate() {
            u.set(r, c, z);
        }
    }
    u
}

/// Ginibre-induced random mixed state G G^dagger / Tr.
pub fn random_density(dim: usize, seed: u64) -> Result<DensityMatrix> {
    if dim != 2 && dim != 4 {
        return Err(Error::dim("2 or 4", dim));
    }
    let mut rng = rng_from_seed(seed);
    Ok(random_density_with(&mut rng, dim))
}

pub(crate) fn random_density_with<R: Rng>(rng: &mut R, dim: usize) -> DensityMatrix {
    let g = ginibre(rng, dim);
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::from_trusted(m.scale_real(1.0 / tr).hermitian_part())
}

/// Haar-random pure state of dimension `dim`.
pub fn random_pure(dim: usize, seed: u64) -> Result<DensityMatrix> {
    if dim != 2 && dim != 4 {
        return Err(Error::dim("2 or 4", dim));
    }
    let mut rng = rng_from_seed(seed);
    let psi: Vec<Complex64> = (0..dim).map(|_| gaussian_complex(&mut rng)).collect();
    DensityMatrix::pure(&psi)
}

/// rho_A ⊗ rho_B with both factors drawn from the Ginibre ensemble.
pub fn random_product(seed: u64) -> DensityMatrix {
    let mut rng = rng_from_seed(seed);
    let a = random_density_with(&mut rng, 2);
    let b = random_density_with(&mut rng, 2);
    DensityMatrix::from_trusted(tensor(a.matrix(), b.matrix()))
}

/// Random local unitary U_A ⊗ U_B.
pub fn random_local_unitary(seed: u64) -> ComplexMatrix {
    let mut rng = rng_from_seed(seed);
    let ua = random_unitary(&mut rng, 2);
    let ub = random_unitary(&mut rng, 2);
    tensor(&ua, &ub)
}

/// Uniform point on the probability simplex with `n` vertices.
pub(crate) fn random_simplex<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..n)
        .map(|_| {
            let u: f64 = rng.random();
            -(1.0 - u).ln()
        })
        .collect();
    let total: f64 = e.iter().sum();
    e.into_iter().map(|x| x / total).collect()
}

/// Random properly classically correlated state with Haar local bases and
/// uniform joint probabilities.
pub fn random_pcc(seed: u64) -> (PccSpec, DensityMatrix) {
    let mut rng = rng_from_seed(seed);
    random_pcc_with(&mut rng)
}

pub(crate) fn random_pcc_with<R: Rng>(rng: &mut R) -> (PccSpec, DensityMatrix) {
    let basis_a = random_unitary(rng, 2);
    let basis_b = random_unitary(rng, 2);
    let p = random_simplex(rng, 4);
    // exact unit sum for validate()
    let last = 1.0 - p[0] - p[1] - p[2];
    let spec = PccSpec {
        basis_a,
        basis_b,
        probs: [[p[0], p[1]], [p[2], last.max(0.0)]],
    };
    let rho = DensityMatrix::from_trusted(assemble_pcc(&spec));
    (spec, rho)
}

/// Named built-in states understood by the CLI.
pub fn builtin(name: &str) -> Option<DensityMatrix> {
    match name {
        "sigma" => Some(sigma_ncc()),
        "bell" => Some(bell_phi_plus()),
        "mixed" => Some(maximally_mixed_pair()),
        "zero" => Some(ground_state()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{partial_trace, Subsystem};

    #[test]
    fn sigma_entries() {
        let s = sigma_ncc();
        for r in 0..4 {
            for c in 0..4 {
                let expected = match (r, c) {
                    (0, 0) => 0.5,
                    (2, 2) | (2, 3) | (3, 2) | (3, 3) => 0.25,
                    _ => 0.0,
                };
                assert!((s.get(r, c) - Complex64::new(expected, 0.0)).norm() < 1e-15);
            }
        }
        let ev = s.eigenvalues().unwrap();
        for (got, want) in ev.iter().zip([0.5, 0.5, 0.0, 0.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn sigma_reductions() {
        let s = sigma_ncc();
        let a = partial_trace(&s, Subsystem::A).unwrap();
        assert!(a.matrix().approx_eq(&ComplexMatrix::from_diag(&[0.5, 0.5]), 1e-12));
        // brute force: sum over the qubit-1 index of the 2x2 diagonal blocks
        let mut b = ComplexMatrix::zeros(2, 2);
        for i in 0..2 {
            for j in 0..2 {
                b.set(i, j, s.get(i, j) + s.get(2 + i, 2 + j));
            }
        }
        let reduced = partial_trace(&s, Subsystem::B).unwrap();
        assert!(reduced.matrix().approx_eq(&b, 1e-15));
        assert!(reduced
            .matrix()
            .approx_eq(&ComplexMatrix::from_real(2, 2, &[0.75, 0.25, 0.25, 0.25]).unwrap(), 1e-15));
    }

    #[test]
    fn pcc_examples() {
        let rho = pcc_state(&PccSpec::computational([[1.0, 0.0], [0.0, 0.0]])).unwrap();
        assert!(rho.matrix().approx_eq(&projector_00(), 1e-15));

        let rho = pcc_state(&PccSpec::computational([[0.25; 2]; 2])).unwrap();
        assert!(rho
            .matrix()
            .approx_eq(&ComplexMatrix::identity(4).scale_real(0.25), 1e-15));

        let bad = PccSpec::computational([[0.5, 0.6], [0.0, 0.0]]);
        assert!(matches!(pcc_state(&bad), Err(Error::InvalidProbabilities(_))));
        let negative = PccSpec::computational([[1.5, -0.5], [0.0, 0.0]]);
        assert!(matches!(pcc_state(&negative), Err(Error::InvalidProbabilities(_))));
        let mut skew = PccSpec::computational([[1.0, 0.0], [0.0, 0.0]]);
        skew.basis_b = ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 0.0, 1.0]).unwrap();
        assert!(matches!(pcc_state(&skew), Err(Error::InvalidBasis(_))));
    }

    #[test]
    fn pcc_in_hadamard_basis() {
        let spec = PccSpec {
            basis_a: ComplexMatrix::identity(2),
            basis_b: ComplexMatrix::from_real(
                2,
                2,
                &[FRAC_1_SQRT_2, FRAC_1_SQRT_2, FRAC_1_SQRT_2, -FRAC_1_SQRT_2],
            )
            .unwrap(),
            probs: [[0.5, 0.0], [0.0, 0.5]],
        };
        let rho = pcc_state(&spec).unwrap();
        let expected = &ComplexMatrix::outer(&tensor_vec(&ket0(), &ket_plus())).scale_real(0.5)
            + &ComplexMatrix::outer(&tensor_vec(&ket1(), &ket_minus())).scale_real(0.5);
        assert!(rho.matrix().approx_eq(&expected, 1e-15));
    }

    #[test]
    fn random_density_is_deterministic_and_valid() {
        let a = random_density(2, 42).unwrap();
        let b = random_density(2, 42).unwrap();
        assert_eq!(a, b);
        for seed in 0..50 {
            let rho = random_density(4, seed).unwrap();
            DensityMatrix::new(rho.matrix().clone()).unwrap();
        }
        assert!(random_density(3, 0).is_err());
    }

    #[test]
    fn random_unitaries_are_unitary() {
        let mut rng = rng_from_seed(9);
        for n in [2, 4] {
            for _ in 0..20 {
                assert!(random_unitary(&mut rng, n).unitarity_deviation() < 1e-12);
            }
        }
    }

    #[test]
    fn random_pcc_consistent() {
        for seed in 0..20 {
            let (spec, rho) = random_pcc(seed);
            let rebuilt = pcc_state(&spec).unwrap();
            assert!(rebuilt.matrix().approx_eq(rho.matrix(), 1e-12));
        }
    }

    #[test]
    fn builtin_names() {
        for name in ["sigma", "bell", "mixed", "zero"] {
            assert!(builtin(name).is_some());
        }
        assert!(builtin("werner").is_none());
    }
}
