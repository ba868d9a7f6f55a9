//! Simulated two-qubit Pauli tomography with linear inversion and projection
//! onto the set of density matrices.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::{eig_hermitian, tensor, ComplexMatrix, DensityMatrix, Pauli};
use crate::states::rng_from_seed;
use crate::witness::map_value_direct;

/// The 15 non-identity two-qubit Pauli labels; the first letter acts on qubit 1.
pub const PAULI_LABELS: [&str; 15] = [
    "IX", "IY", "IZ", "XI", "XX", "XY", "XZ", "YI", "YX", "YY", "YZ", "ZI", "ZX", "ZY", "ZZ",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TomographyRecord {
    #[serde(rename = "labels")]
    pub basis_labels: Vec<String>,
    pub values: Vec<f64>,
    pub noise_sigma: f64,
    #[serde(default)]
    pub seed: u64,
}

impl TomographyRecord {
    pub fn validate(&self) -> Result<()> {
        if self.basis_labels.len() != 15 || self.values.len() != 15 {
            return Err(Error::InvalidRecord(format!(
                "expected 15 labels and values, got {} and {}",
                self.basis_labels.len(),
                self.values.len()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for label in &self.basis_labels {
            let (a, b) = parse_label(label)?;
            if a == Pauli::I && b == Pauli::I {
                return Err(Error::InvalidRecord("II is not a measured label".into()));
            }
            if !seen.insert((a, b)) {
                return Err(Error::InvalidRecord(format!("duplicate label {label}")));
            }
        }
        if let Some(v) = self.values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidRecord(format!("non-finite value {v}")));
        }
        if !(self.noise_sigma >= 0.0) {
            return Err(Error::InvalidRecord(format!(
                "noise_sigma must be >= 0, got {}",
                self.noise_sigma
            )));
        }
        Ok(())
    }

    pub fn value(&self, label: &str) -> Option<f64> {
        self.basis_labels
            .iter()
            .position(|l| l.eq_ignore_ascii_case(label))
            .map(|i| self.values[i])
    }
}

fn parse_label(label: &str) -> Result<(Pauli, Pauli)> {
    let mut chars = label.chars();
    match (
        chars.next().and_then(Pauli::from_symbol),
        chars.next().and_then(Pauli::from_symbol),
        chars.next(),
    ) {
        (Some(a), Some(b), None) => Ok((a, b)),
        _ => Err(Error::InvalidRecord(format!("bad Pauli label {label:?}"))),
    }
}

/// P_a ⊗ P_b for a two-letter label such as "ZX".
pub fn pauli_operator(label: &str) -> Result<ComplexMatrix> {
    let (a, b) = parse_label(label)?;
    Ok(tensor(&a.matrix(), &b.matrix()))
}

/// Tr(rho P) for every label, plus Gaussian noise clamped to [-1, 1].
pub fn measure_all(rho: &DensityMatrix, noise_sigma: f64, seed: u64) -> Result<TomographyRecord> {
    if rho.dim() != 4 {
        return Err(Error::dim("4x4 state", format!("{0}x{0}", rho.dim())));
    }
    if !(noise_sigma >= 0.0) || !noise_sigma.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "noise_sigma must be finite and >= 0, got {noise_sigma}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let mut values = Vec::with_capacity(15);
    for label in PAULI_LABELS {
        let ideal = rho.expectation(&pauli_operator(label)?)?;
        let value = if noise_sigma > 0.0 {
            let g: f64 = rng.sample(StandardNormal);
            (ideal + noise_sigma * g).clamp(-1.0, 1.0)
        } else {
            ideal
        };
        values.push(value);
    }
    Ok(TomographyRecord {
        basis_labels: PAULI_LABELS.iter().map(|s| s.to_string()).collect(),
        values,
        noise_sigma,
        seed,
    })
}

/// Euclidean projection of `v` onto the probability simplex
/// {x >= 0, sum x = 1}: x_i = max(v_i - tau, 0).
pub fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut tau = 0.0;
    for (k, &x) in sorted.iter().enumerate() {
        cumulative += x;
        let candidate = (cumulative - 1.0) / (k + 1) as f64;
        if x - candidate > 0.0 {
            tau = candidate;
        }
    }
    v.iter().map(|&x| (x - tau).max(0.0)).collect()
}

/// Closest density matrix (Frobenius norm) to a Hermitian matrix.
pub fn project_to_density(m: &ComplexMatrix) -> Result<DensityMatrix> {
    let eig = eig_hermitian(&m.hermitian_part())?;
    let clipped = project_to_simplex(&eig.values);
    let out = eig.reassemble(&clipped);
    Ok(DensityMatrix::from_trusted(out.hermitian_part()))
}

/// Linear inversion I/4 + sum_i v_i P_i / 4, before any projection.
pub fn linear_inversion(record: &TomographyRecord) -> Result<ComplexMatrix> {
    record.validate()?;
    let mut m = ComplexMatrix::identity(4).scale_real(0.25);
    for (label, &v) in record.basis_labels.iter().zip(&record.values) {
        m = &m + &pauli_operator(label)?.scale_real(v / 4.0);
    }
    Ok(m)
}

/// Linear inversion followed by projection onto the physical states.
pub fn reconstruct(record: &TomographyRecord) -> Result<DensityMatrix> {
    project_to_density(&linear_inversion(record)?)
}

/// Map value of the reconstructed state.
pub fn mv_from_tomography(record: &TomographyRecord, c: f64) -> Result<f64> {
    Ok(map_value_direct(&reconstruct(record)?, c)?.map_value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{ground_state, maximally_mixed_pair, sigma_ncc};
    use crate::witness::C_OPT;

    #[test]
    fn labels_are_the_fifteen_non_identity_products() {
        let mut expected = Vec::new();
        for a in "IXYZ".chars() {
            for b in "IXYZ".chars() {
                if (a, b) != ('I', 'I') {
                    expected.push(format!("{a}{b}"));
                }
            }
        }
        assert_eq!(PAULI_LABELS.to_vec(), expected);
    }

    #[test]
    fn ideal_records() {
        let r = measure_all(&maximally_mixed_pair(), 0.0, 0).unwrap();
        assert!(r.values.iter().all(|v| v.abs() < 1e-15));

        let r = measure_all(&ground_state(), 0.0, 0).unwrap();
        for (label, v) in r.basis_labels.iter().zip(&r.values) {
            let expected = if ["ZI", "IZ", "ZZ"].contains(&label.as_str()) { 1.0 } else { 0.0 };
            assert!((v - expected).abs() < 1e-15, "{label}");
        }

        let r = measure_all(&sigma_ncc(), 0.0, 0).unwrap();
        for (label, v) in r.basis_labels.iter().zip(&r.values) {
            let expected = match label.as_str() {
                "IZ" | "IX" | "ZZ" => 0.5,
                "ZX" => -0.5,
                _ => 0.0,
            };
            assert!((v - expected).abs() < 1e-15, "{label}");
        }
    }

    #[test]
    fn empty_record_gives_maximally_mixed() {
        let r = measure_all(&maximally_mixed_pair(), 0.0, 0).unwrap();
        let rho = reconstruct(&r).unwrap();
        assert!(rho.matrix().approx_eq(maximally_mixed_pair().matrix(), 1e-12));
    }

    #[test]
    fn map_values_from_ideal_records() {
        let mv = |rho| mv_from_tomography(&measure_all(&rho, 0.0, 0).unwrap(), C_OPT).unwrap();
        assert!((mv(sigma_ncc()) + 0.067862).abs() < 1e-9);
        assert!((mv(maximally_mixed_pair()) - 0.119638).abs() < 1e-9);
        assert!((mv(ground_state()) - C_OPT).abs() < 1e-9);
    }

    #[test]
    fn noise_is_seeded() {
        let a = measure_all(&sigma_ncc(), 0.1, 4).unwrap();
        let b = measure_all(&sigma_ncc(), 0.1, 4).unwrap();
        let c = measure_all(&sigma_ncc(), 0.1, 5).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.values, c.values);
        assert!(a.values.iter().all(|v| (-1.0..=1.0).contains(v)));
    }

    #[test]
    fn malformed_records_are_rejected() {
        let mut r = measure_all(&sigma_ncc(), 0.0, 0).unwrap();
        r.basis_labels[0] = "ZZ".into();
        assert!(matches!(reconstruct(&r), Err(Error::InvalidRecord(_))));
        let mut r = measure_all(&sigma_ncc(), 0.0, 0).unwrap();
        r.values.pop();
        assert!(reconstruct(&r).is_err());
        let mut r = measure_all(&sigma_ncc(), 0.0, 0).unwrap();
        r.basis_labels[3] = "Q1".into();
        assert!(reconstruct(&r).is_err());
    }

    #[test]
    fn simplex_projection_examples() {
        assert_eq!(project_to_simplex(&[0.5, 0.5]), vec![0.5, 0.5]);
        assert_eq!(project_to_simplex(&[2.0, 0.0]), vec![1.0, 0.0]);
        let p = project_to_simplex(&[0.6, 0.6, -0.2]);
        assert!((p[0] - 0.5).abs() < 1e-15 && (p[1] - 0.5).abs() < 1e-15 && p[2] == 0.0);
    }

    #[test]
    fn json_field_names() {
        let r = measure_all(&sigma_ncc(), 0.0, 9).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert!(v.get("labels").is_some());
        assert!(v.get("values").is_some());
        assert_eq!(v["noise_sigma"], 0.0);
        assert_eq!(v["seed"], 9);
    }
}
