//! The nonclassicality witness map
//!
//! ```text
//! W(rho) = c - Tr(rho |00><00|) * Tr(rho |1+><1+|)
//! ```
//!
//! evaluated either directly from the state or from the three polarizations
//! of the detection circuit, plus a numerical re-derivation of the constant
//! `c` as the maximum of the product term over properly classically
//! correlated (PCC) states.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{detection_readout, Readout};
use crate::error::{Error, Result};
use crate::qmat::{ComplexMatrix, DensityMatrix};
use crate::simplex::NelderMead;
use crate::states::{assemble_pcc, projector_00, projector_1plus, rng_from_seed, PccSpec};

/// Published witness constant for the (|00><00|, |1+><1+|) map.
pub const C_OPT: f64 = 0.182138;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub map_value: f64,
    pub factor_00: f64,
    pub factor_1plus: f64,
    pub polarizations: Readout,
    pub c_used: f64,
    pub ncc_detected: bool,
}

impl WitnessReport {
    pub fn product_term(&self) -> f64 {
        self.factor_00 * self.factor_1plus
    }
}

fn check_constant(c: f64) -> Result<()> {
    if !(c >= 0.0) || !c.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "witness constant must be finite and >= 0, got {c}"
        )));
    }
    Ok(())
}

fn check_two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::dim("4x4 state", format!("{0}x{0}", rho.dim())));
    }
    Ok(())
}

/// Witness map from the operator expectation values.
pub fn map_value_direct(rho: &DensityMatrix, c: f64) -> Result<WitnessReport> {
    check_constant(c)?;
    check_two_qubit(rho)?;
    let (factor_00, factor_1plus) = witness_factors(rho.matrix());
    let map_value = c - factor_00 * factor_1plus;
    Ok(WitnessReport {
        map_value,
        factor_00,
        factor_1plus,
        polarizations: detection_readout(rho)?,
        c_used: c,
        ncc_detected: map_value < 0.0,
    })
}

/// (Tr rho|00><00|, Tr rho|1+><1+|) in closed form.
pub(crate) fn witness_factors(rho: &ComplexMatrix) -> (f64, f64) {
    let f00 = rho.get(0, 0).re;
    // <1+|rho|1+> = (rho_22 + rho_33 + 2 Re rho_23) / 2
    let f1p = 0.5 * (rho.get(2, 2).re + rho.get(3, 3).re + 2.0 * rho.get(2, 3).re);
    (f00, f1p)
}

/// Witness map from the detection-circuit polarizations.
pub fn map_value_polarization(z1: f64, z2: f64, z2prime: f64, c: f64) -> f64 {
    c - (1.0 + z1 + z2 + z2prime) * (1.0 - z1 + z2 - z2prime) / 16.0
}

pub fn map_value_from_readout(readout: &Readout, c: f64) -> f64 {
    map_value_polarization(readout.z1, readout.z2, readout.z2prime, c)
}

/// General form c - prod_k Tr(rho A_k) for any list of positive operators.
pub fn map_value_general(rho: &DensityMatrix, c: f64, operators: &[ComplexMatrix]) -> Result<f64> {
    check_constant(c)?;
    let mut product = 1.0;
    for op in operators {
        product *= rho.expectation(op)?;
    }
    Ok(c - product)
}

/// The two operators of the sigma witness.
pub fn sigma_witness_operators() -> [ComplexMatrix; 2] {
    [projector_00(), projector_1plus()]
}

#[derive(Clone, Debug)]
pub struct COptOptions {
    /// Nelder-Mead restarts per round.
    pub starts: usize,
    pub seed: u64,
    /// Evaluation budget per restart.
    pub max_evals: usize,
    /// Convergence threshold on the best value between rounds.
    pub tolerance: f64,
    pub max_rounds: usize,
}

impl Default for COptOptions {
    fn default() -> Self {
        COptOptions {
            starts: 64,
            seed: 0,
            max_evals: 4000,
            tolerance: 1e-9,
            max_rounds: 8,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct COptimum {
    pub c_opt: f64,
    pub argmax: PccSpec,
    pub rounds: usize,
    pub evaluations: usize,
}

/// Local basis {(cos t, e^{i p} sin t), (-e^{-i p} sin t, cos t)} as columns.
fn local_basis(theta: f64, phase: f64) -> ComplexMatrix {
    let (s, c) = theta.sin_cos();
    let e = Complex64::from_polar(1.0, phase);
    let mut m = ComplexMatrix::zeros(2, 2);
    m.set(0, 0, Complex64::new(c, 0.0));
    m.set(1, 0, e * s);
    m.set(0, 1, -e.conj() * s);
    m.set(1, 1, Complex64::new(c, 0.0));
    m
}

/// Maps 7 unconstrained parameters onto the PCC manifold: two (angle, phase)
/// pairs for the local bases and three softmax logits for the probabilities.
pub(crate) fn pcc_from_params(x: &[f64]) -> PccSpec {
    let logits = [0.0, x[4], x[5], x[6]];
    let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = logits.iter().map(|l| (l - max).exp()).collect();
    let total: f64 = w.iter().sum();
    let p: Vec<f64> = w.iter().map(|v| v / total).collect();
    PccSpec {
        basis_a: local_basis(x[0], x[1]),
        basis_b: local_basis(x[2], x[3]),
        probs: [[p[0], p[1]], [p[2], 1.0 - p[0] - p[1] - p[2]]],
    }
}

fn product_term_of(spec: &PccSpec) -> f64 {
    let (a, b) = witness_factors(&assemble_pcc(spec));
    a * b
}

/// Maximizes Tr(rho|00><00|) Tr(rho|1+><1+|) over PCC states with multi-start
/// Nelder-Mead. Rounds of `starts` restarts run until the best value moves by
/// less than `tolerance` between rounds.
pub fn optimize_c(options: &COptOptions) -> Result<COptimum> {
    if options.starts == 0 || options.max_rounds < 2 {
        return Err(Error::InvalidArgument(
            "optimize_c needs at least one start and two rounds".into(),
        ));
    }
    let mut rng = rng_from_seed(options.seed);
    let nm = NelderMead {
        step: 0.4,
        ftol: 1e-13,
        max_evals: options.max_evals,
    };
    let mut best_value = f64::NEG_INFINITY;
    let mut best_x = vec![0.0; 7];
    let mut evaluations = 0;
    let mut previous_round = f64::NEG_INFINITY;

    for round in 1..=options.max_rounds {
        for _ in 0..options.starts {
            let x0: Vec<f64> = (0..7)
                .map(|k| {
                    let u: f64 = rng.random();
                    if k < 4 {
                        u * std::f64::consts::TAU
                    } else {
                        4.0 * u - 2.0
                    }
                })
                .collect();
            let m = nm.minimize(|x| -product_term_of(&pcc_from_params(x)), &x0);
            evaluations += m.evals;
            // strict comparison keeps the earliest restart on ties
            if -m.value > best_value {
                best_value = -m.value;
                best_x = m.x;
            }
        }
        if round > 1 && (best_value - previous_round).abs() < options.tolerance {
            return Ok(COptimum {
                c_opt: best_value,
                argmax: pcc_from_params(&best_x),
                rounds: round,
                evaluations,
            });
        }
        previous_round = best_value;
    }
    Err(Error::NotConverged {
        what: "optimize_c",
        detail: format!(
            "best value {best_value} still moving after {} rounds",
            options.max_rounds
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{ground_state, maximally_mixed_pair, pcc_state, sigma_ncc};

    #[test]
    fn sigma_map_value() {
        let r = map_value_direct(&sigma_ncc(), C_OPT).unwrap();
        assert!((r.product_term() - 0.25).abs() < 1e-12);
        assert!((r.map_value + 0.067862).abs() < 1e-9);
        assert!(r.ncc_detected);
        assert_eq!(r.c_used, C_OPT);
    }

    #[test]
    fn ground_and_mixed_map_values() {
        let r = map_value_direct(&ground_state(), C_OPT).unwrap();
        assert_eq!(r.factor_1plus, 0.0);
        assert!((r.map_value - 0.182138).abs() < 1e-12);
        assert!(!r.ncc_detected);

        let r = map_value_direct(&maximally_mixed_pair(), C_OPT).unwrap();
        assert!((r.factor_00 - 0.25).abs() < 1e-12);
        assert!((r.factor_1plus - 0.25).abs() < 1e-12);
        assert!((r.map_value - 0.119638).abs() < 1e-12);
    }

    #[test]
    fn polarization_form_examples() {
        assert!((map_value_polarization(0.0, 1.0, 0.0, C_OPT) + 0.067862).abs() < 1e-12);
        assert!((map_value_polarization(0.0, 0.0, 0.0, C_OPT) - 0.119638).abs() < 1e-12);
        assert!((map_value_polarization(1.0, 1.0, 1.0, C_OPT) - C_OPT).abs() < 1e-15);
    }

    #[test]
    fn closed_form_factors_match_traces() {
        let [p00, p1p] = sigma_witness_operators();
        for seed in 0..20 {
            let rho = crate::states::random_density(4, seed).unwrap();
            let (a, b) = witness_factors(rho.matrix());
            assert!((a - rho.expectation(&p00).unwrap()).abs() < 1e-14);
            assert!((b - rho.expectation(&p1p).unwrap()).abs() < 1e-14);
            let general = map_value_general(&rho, C_OPT, &sigma_witness_operators()).unwrap();
            let direct = map_value_direct(&rho, C_OPT).unwrap().map_value;
            assert!((general - direct).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_constant_and_dimension() {
        assert!(map_value_direct(&sigma_ncc(), -0.1).is_err());
        assert!(map_value_direct(&sigma_ncc(), f64::NAN).is_err());
        let qubit = DensityMatrix::maximally_mixed(2).unwrap();
        assert!(matches!(
            map_value_direct(&qubit, C_OPT),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn computational_pcc_restriction_gives_one_eighth() {
        // factor_1plus = (p10 + p11)/2, so maximize p00 (1 - p00)/2 on a fine grid
        let n = 2000;
        let mut best: f64 = 0.0;
        for i in 0..=n {
            let p00 = i as f64 / n as f64;
            let spec = PccSpec::computational([[p00, 0.0], [1.0 - p00, 0.0]]);
            let r = map_value_direct(&pcc_state(&spec).unwrap(), C_OPT).unwrap();
            best = best.max(r.product_term());
        }
        assert!((best - 0.125).abs() < 1e-12);
    }

    #[test]
    fn params_produce_valid_specs() {
        let spec = pcc_from_params(&[0.3, 1.0, -2.0, 0.5, 3.0, -1.0, 0.2]);
        spec.validate().unwrap();
    }

    #[test]
    fn optimizer_reports_non_convergence() {
        let opts = COptOptions {
            starts: 1,
            max_evals: 5,
            tolerance: 0.0,
            max_rounds: 2,
            seed: 3,
        };
        assert!(matches!(optimize_c(&opts), Err(Error::NotConverged { .. })));
    }
}
