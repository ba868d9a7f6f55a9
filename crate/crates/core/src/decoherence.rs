//! Free evolution under per-qubit T1/T2 relaxation, and the time-series
//! engine for map-value and discord dynamics.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::circuit::Gate;
use crate::discord::discord;
use crate::error::{Error, Result};
use crate::qmat::{fidelity, tensor, ComplexMatrix, DensityMatrix, Subsystem, C0};
use crate::states::sigma_ncc;
use crate::witness::{map_value_direct, C_OPT};

/// Sampling multiples n of 2/J used for the dynamics schedule.
pub const STANDARD_SCHEDULE_N: [u32; 16] = [0, 1, 3, 5, 7, 9, 11, 13, 15, 20, 25, 30, 35, 40, 45, 50];

/// Subsystem on which discord is measured along a dynamics sweep. The sigma
/// family is classical on qubit 1, so qubit 2 carries the signal.
pub const SWEEP_MEASURED: Subsystem = Subsystem::B;

/// Relaxation times in seconds, coupling in Hz.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    pub t1_q1: f64,
    pub t2_q1: f64,
    pub t1_q2: f64,
    pub t2_q2: f64,
    pub j_coupling: f64,
    #[serde(default)]
    pub include_j: bool,
}

impl Default for ChannelSpec {
    /// Placeholder chloroform-like values; experiments should pass explicit specs.
    fn default() -> Self {
        ChannelSpec {
            t1_q1: 7.9,
            t2_q1: 0.12,
            t1_q2: 16.6,
            t2_q2: 0.20,
            j_coupling: 215.0,
            include_j: true,
        }
    }
}

impl ChannelSpec {
    /// Pure dephasing on both qubits with effectively infinite T1.
    pub fn dephasing_only(t2_q1: f64, t2_q2: f64, j_coupling: f64) -> Self {
        ChannelSpec {
            t1_q1: 1e9,
            t2_q1,
            t1_q2: 1e9,
            t2_q2,
            j_coupling,
            include_j: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let times = [
            ("t1_q1", self.t1_q1),
            ("t2_q1", self.t2_q1),
            ("t1_q2", self.t1_q2),
            ("t2_q2", self.t2_q2),
        ];
        for (name, t) in times {
            if !(t > 0.0) || !t.is_finite() {
                return Err(Error::InvalidChannel(format!("{name} must be > 0, got {t}")));
            }
        }
        for (q, t1, t2) in [(1, self.t1_q1, self.t2_q1), (2, self.t1_q2, self.t2_q2)] {
            if 1.0 / t2 - 1.0 / (2.0 * t1) < 0.0 {
                return Err(Error::InvalidChannel(format!(
                    "qubit {q}: T2 = {t2} exceeds 2 T1 = {}",
                    2.0 * t1
                )));
            }
        }
        if !(self.j_coupling > 0.0) || !self.j_coupling.is_finite() {
            return Err(Error::InvalidChannel(format!(
                "j_coupling must be > 0, got {}",
                self.j_coupling
            )));
        }
        Ok(())
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::InvalidChannel(format!("{}: {e}", path.display()))
        })?;
        let spec: ChannelSpec = serde_json::from_str(&text).map_err(|e| {
            Error::InvalidChannel(format!("{}: line {}: {e}", path.display(), e.line()))
        })?;
        spec.validate()?;
        Ok(spec)
    }

    /// Sampling times 2n/J for the standard n-list.
    pub fn standard_schedule(&self) -> Vec<f64> {
        STANDARD_SCHEDULE_N
            .iter()
            .map(|&n| 2.0 * n as f64 / self.j_coupling)
            .collect()
    }
}

fn mat2(a: f64, b: f64, c: f64, d: f64) -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[a, b, c, d]).expect("2x2")
}

/// Amplitude-damping Kraus pair toward |0> with gamma = 1 - exp(-t/T1).
pub fn amplitude_damping_kraus(t1: f64, t: f64) -> [ComplexMatrix; 2] {
    let gamma = -(-t / t1).exp_m1();
    [
        mat2(1.0, 0.0, 0.0, (1.0 - gamma).sqrt()),
        mat2(0.0, gamma.sqrt(), 0.0, 0.0),
    ]
}

/// Pure-dephasing Kraus pair with coherence decay exp(-(1/T2 - 1/(2 T1)) t).
pub fn dephasing_kraus(t1: f64, t2: f64, t: f64) -> [ComplexMatrix; 2] {
    let rate = (1.0 / t2 - 1.0 / (2.0 * t1)).max(0.0);
    let lambda = (-rate * t).exp();
    let keep = (0.5 * (1.0 + lambda)).sqrt();
    let flip = (0.5 * (1.0 - lambda)).max(0.0).sqrt();
    [mat2(keep, 0.0, 0.0, keep), mat2(flip, 0.0, 0.0, -flip)]
}

/// Operator-sum set for one qubit: dephasing after amplitude damping.
pub fn qubit_kraus(t1: f64, t2: f64, t: f64) -> Vec<ComplexMatrix> {
    let damping = amplitude_damping_kraus(t1, t);
    let dephasing = dephasing_kraus(t1, t2, t);
    let mut out = Vec::with_capacity(4);
    for d in &dephasing {
        for a in &damping {
            out.push(d * a);
        }
    }
    out
}

fn apply_kraus(m: &ComplexMatrix, ops: &[ComplexMatrix]) -> ComplexMatrix {
    let mut acc = ComplexMatrix::zeros(m.rows(), m.cols());
    for k in ops {
        if k.data().iter().all(|&z| z == C0) {
            continue;
        }
        acc = &acc + &m.conjugate_by(k).expect("matching dims");
    }
    acc
}

/// Evolves a two-qubit state for `t` seconds: optional J-coupling unitary,
/// then amplitude damping and pure dephasing on each qubit.
pub fn evolve(rho: &DensityMatrix, spec: &ChannelSpec, t: f64) -> Result<DensityMatrix> {
    spec.validate()?;
    if rho.dim() != 4 {
        return Err(Error::dim("4x4 state", format!("{0}x{0}", rho.dim())));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidArgument(format!("evolution time must be >= 0, got {t}")));
    }
    let mut m = rho.matrix().clone();
    if spec.include_j {
        m = m.conjugate_by(&Gate::j_evolution(spec.j_coupling, t).unitary)?;
    }
    let id = ComplexMatrix::identity(2);
    let q1: Vec<ComplexMatrix> = qubit_kraus(spec.t1_q1, spec.t2_q1, t)
        .iter()
        .map(|k| tensor(k, &id))
        .collect();
    let q2: Vec<ComplexMatrix> = qubit_kraus(spec.t1_q2, spec.t2_q2, t)
        .iter()
        .map(|k| tensor(&id, k))
        .collect();
    m = apply_kraus(&m, &q1);
    m = apply_kraus(&m, &q2);
    Ok(DensityMatrix::from_trusted(m.hermitian_part()))
}

fn map_value_at(spec: &ChannelSpec, c: f64, t: f64) -> Result<f64> {
    Ok(map_value_direct(&evolve(&sigma_ncc(), spec, t)?, c)?.map_value)
}

/// First time at which the map value of the evolving sigma state becomes
/// nonnegative, located to within `resolution` seconds. The search horizon is
/// the last point of the standard schedule, 100/J, scanned at 50 points before
/// bisection. Returns `None` if the map value stays negative.
pub fn mv_crossing_time(spec: &ChannelSpec, c: f64, resolution: f64) -> Result<Option<f64>> {
    spec.validate()?;
    if !(resolution > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "resolution must be > 0, got {resolution}"
        )));
    }
    if map_value_at(spec, c, 0.0)? >= 0.0 {
        return Ok(Some(0.0));
    }
    const SCAN_POINTS: usize = 50;
    let horizon = 100.0 / spec.j_coupling;
    let mut lo = 0.0;
    let mut hi = None;
    for k in 1..=SCAN_POINTS {
        let t = horizon * k as f64 / SCAN_POINTS as f64;
        if map_value_at(spec, c, t)? >= 0.0 {
            hi = Some(t);
            break;
        }
        lo = t;
    }
    let Some(mut hi) = hi else {
        return Ok(None);
    };
    while hi - lo > resolution {
        let mid = 0.5 * (lo + hi);
        if map_value_at(spec, c, mid)? >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DynamicsPoint {
    pub time: f64,
    pub map_value: f64,
    pub discord: f64,
    pub fidelity_vs_ideal: f64,
    pub state: DensityMatrix,
}

/// Evolves sigma along `schedule` and records map value (c = C_OPT), discord
/// (measured on qubit 2) and fidelity with the ideal sigma.
pub fn dynamics_sweep(spec: &ChannelSpec, schedule: &[f64]) -> Result<Vec<DynamicsPoint>> {
    spec.validate()?;
    if schedule.is_empty() {
        return Err(Error::InvalidSchedule("schedule is empty".into()));
    }
    if let Some(t) = schedule.iter().find(|t| !(**t >= 0.0) || !t.is_finite()) {
        return Err(Error::InvalidSchedule(format!("negative or non-finite time {t}")));
    }
    if schedule.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidSchedule("times must be nondecreasing".into()));
    }
    let ideal = sigma_ncc();
    schedule
        .iter()
        .map(|&time| {
            let state = evolve(&ideal, spec, time)?;
            Ok(DynamicsPoint {
                time,
                map_value: map_value_direct(&state, C_OPT)?.map_value,
                discord: discord(&state, SWEEP_MEASURED)?.discord,
                fidelity_vs_ideal: fidelity(&state, &ideal)?,
                state,
            })
        })
        .collect()
}

/// Sum of K^dagger K over an operator set.
pub fn kraus_completeness(ops: &[ComplexMatrix]) -> ComplexMatrix {
    let n = ops.first().map_or(2, |k| k.rows());
    ops.iter()
        .fold(ComplexMatrix::zeros(n, n), |acc, k| &acc + &(&k.adjoint() * k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{ground_state, random_density};

    fn dephasing(t: f64) -> ChannelSpec {
        ChannelSpec::dephasing_only(0.1, t, 215.0)
    }

    #[test]
    fn zero_time_is_identity() {
        let rho = random_density(4, 1).unwrap();
        let out = evolve(&rho, &ChannelSpec::default(), 0.0).unwrap();
        assert!(out.matrix().approx_eq(rho.matrix(), 1e-12));
    }

    #[test]
    fn long_time_relaxes_to_ground() {
        let spec = ChannelSpec::default();
        let rho = random_density(4, 2).unwrap();
        let out = evolve(&rho, &spec, 1e6 * spec.t1_q2.max(spec.t1_q1)).unwrap();
        assert!(out.matrix().approx_eq(ground_state().matrix(), 1e-6));
    }

    #[test]
    fn dephasing_scales_sigma_coherence() {
        let t2 = 0.15;
        let out = evolve(&sigma_ncc(), &dephasing(t2), t2).unwrap();
        let s = sigma_ncc();
        let e = (-1.0f64).exp();
        assert!((out.get(2, 3) - s.get(2, 3) * e).norm() < 1e-9);
        assert!((out.get(3, 2) - s.get(3, 2) * e).norm() < 1e-9);
        for i in 0..4 {
            assert!((out.get(i, i) - s.get(i, i)).norm() < 1e-9);
        }
    }

    #[test]
    fn kraus_sets_are_complete() {
        for &(t1, t2, t) in &[(1.0, 0.5, 0.3), (7.9, 0.12, 2.0), (1e9, 0.2, 0.01), (2.0, 4.0, 1.0)] {
            let sum = kraus_completeness(&qubit_kraus(t1, t2, t));
            assert!(sum.approx_eq(&ComplexMatrix::identity(2), 1e-12));
        }
    }

    #[test]
    fn spec_validation() {
        let mut bad = ChannelSpec::default();
        bad.t2_q1 = 2.0 * bad.t1_q1 + 1.0;
        assert!(matches!(bad.validate(), Err(Error::InvalidChannel(_))));
        let mut bad = ChannelSpec::default();
        bad.t1_q2 = 0.0;
        assert!(bad.validate().is_err());
        assert!(evolve(&sigma_ncc(), &ChannelSpec::default(), -1.0).is_err());
    }

    #[test]
    fn crossing_boundaries() {
        let spec = dephasing(0.1);
        assert_eq!(mv_crossing_time(&spec, 0.25, 1e-6).unwrap(), Some(0.0));
        assert_eq!(mv_crossing_time(&spec, 0.124, 1e-6).unwrap(), None);
        assert!(mv_crossing_time(&spec, C_OPT, 0.0).is_err());
    }

    #[test]
    fn schedule_validation() {
        let spec = dephasing(0.1);
        assert!(dynamics_sweep(&spec, &[]).is_err());
        assert!(dynamics_sweep(&spec, &[0.1, 0.05]).is_err());
        assert!(dynamics_sweep(&spec, &[-0.1]).is_err());
    }

    #[test]
    fn standard_schedule_times() {
        let spec = ChannelSpec::default();
        let s = spec.standard_schedule();
        assert_eq!(s.len(), 16);
        assert_eq!(s[0], 0.0);
        assert!((s[15] - 100.0 / 215.0).abs() < 1e-15);
    }

    #[test]
    fn sweep_at_zero() {
        let pts = dynamics_sweep(&dephasing(0.1), &[0.0]).unwrap();
        assert!((pts[0].map_value + 0.067862).abs() < 1e-9);
        assert!((pts[0].fidelity_vs_ideal - 1.0).abs() < 1e-9);
    }
}
