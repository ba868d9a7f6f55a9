//! Gate-level and product-operator simulation of the NCC preparation pulse
//! chain and of the CH/CNOT detection circuit.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::{tensor, ComplexMatrix, DensityMatrix, Pauli};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Qubit {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
}

impl Qubit {
    /// Embeds a single-qubit operator into the two-qubit space.
    pub fn embed(self, op: &ComplexMatrix) -> ComplexMatrix {
        let id = ComplexMatrix::identity(2);
        match self {
            Qubit::One => tensor(op, &id),
            Qubit::Two => tensor(&id, op),
        }
    }
}

impl fmt::Display for Qubit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Qubit::One => "1",
            Qubit::Two => "2",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    pub name: String,
    pub unitary: ComplexMatrix,
    pub control: Option<Qubit>,
    pub target: Option<Qubit>,
}

impl Gate {
    pub fn new(
        name: impl Into<String>,
        unitary: ComplexMatrix,
        control: Option<Qubit>,
        target: Option<Qubit>,
    ) -> Result<Self> {
        let deviation = unitary.unitarity_deviation();
        if deviation > 1e-10 {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Gate {
            name: name.into(),
            unitary,
            control,
            target,
        })
    }

    pub fn identity(dim: usize) -> Self {
        Gate {
            name: "I".into(),
            unitary: ComplexMatrix::identity(dim),
            control: None,
            target: None,
        }
    }

    /// Exact rotation exp(-i angle sigma_axis / 2) on one qubit, i.e. a pulse
    /// of flip angle `angle` about `axis`.
    pub fn rotation(qubit: Qubit, axis: Pauli, angle: f64) -> Self {
        let half = angle / 2.0;
        let cos = Complex64::new(half.cos(), 0.0);
        let isin = Complex64::new(0.0, -half.sin());
        let single = &ComplexMatrix::identity(2).scale(cos) + &axis.matrix().scale(isin);
        Gate {
            name: format!("R{}{}({angle:.4})", axis.symbol().to_ascii_lowercase(), qubit),
            unitary: qubit.embed(&single),
            control: None,
            target: Some(qubit),
        }
    }

    /// Free evolution under the scalar coupling, exp(-i 2 pi J t I1z I2z).
    pub fn j_evolution(j_hz: f64, t: f64) -> Self {
        let phi = 2.0 * PI * j_hz * t / 4.0;
        let diag = [-phi, phi, phi, -phi];
        let mut u = ComplexMatrix::zeros(4, 4);
        for (i, &p) in diag.iter().enumerate() {
            u.set(i, i, Complex64::from_polar(1.0, p));
        }
        Gate {
            name: format!("J({t:e} s)"),
            unitary: u,
            control: None,
            target: None,
        }
    }
}

pub fn hadamard() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[FRAC_1_SQRT_2, FRAC_1_SQRT_2, FRAC_1_SQRT_2, -FRAC_1_SQRT_2])
        .expect("2x2")
}

fn controlled(op: &ComplexMatrix) -> ComplexMatrix {
    let mut u = ComplexMatrix::identity(4);
    for r in 0..2 {
        for c in 0..2 {
            u.set(2 + r, 2 + c, op.get(r, c));
        }
    }
    u
}

/// Controlled-Hadamard, control qubit 1, target qubit 2: diag(I, H).
pub fn ch_gate() -> Gate {
    Gate {
        name: "CH".into(),
        unitary: controlled(&hadamard()),
        control: Some(Qubit::One),
        target: Some(Qubit::Two),
    }
}

/// CNOT, control qubit 1, target qubit 2.
pub fn cnot_gate() -> Gate {
    Gate {
        name: "CNOT".into(),
        unitary: controlled(&Pauli::X.matrix()),
        control: Some(Qubit::One),
        target: Some(Qubit::Two),
    }
}

pub fn apply_gate(rho: &DensityMatrix, gate: &Gate) -> Result<DensityMatrix> {
    rho.evolve_unitary(&gate.unitary)
}

/// <Z> on the given qubit; |0> has polarization +1.
pub fn polarization(rho: &DensityMatrix, qubit: Qubit) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::dim("4x4 state", format!("{0}x{0}", rho.dim())));
    }
    // diagonal-only observable
    let sign = |i: usize| -> f64 {
        let bit = match qubit {
            Qubit::One => i >> 1,
            Qubit::Two => i & 1,
        };
        if bit == 0 {
            1.0
        } else {
            -1.0
        }
    };
    Ok((0..4).map(|i| sign(i) * rho.get(i, i).re).sum())
}

/// Polarizations read out by the detection circuit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Readout {
    /// Qubit-1 polarization after CH.
    pub z1: f64,
    /// Qubit-2 polarization after CH.
    pub z2: f64,
    /// Qubit-2 polarization after the subsequent CNOT.
    #[serde(rename = "z2p")]
    pub z2prime: f64,
}

/// CH, read both qubits, then CNOT on the same ensemble and read qubit 2.
///
/// With p_ab the populations after CH, z2p = p00 - p01 - p10 + p11, which
/// makes the polarization form of the witness an exact identity.
pub fn detection_readout(rho: &DensityMatrix) -> Result<Readout> {
    let after_ch = apply_gate(rho, &ch_gate())?;
    let after_cnot = apply_gate(&after_ch, &cnot_gate())?;
    Ok(Readout {
        z1: polarization(&after_ch, Qubit::One)?,
        z2: polarization(&after_ch, Qubit::Two)?,
        z2prime: polarization(&after_cnot, Qubit::Two)?,
    })
}

/// Deviation operator expanded over {I,X,Y,Z}⊗{I,X,Y,Z}.
///
/// `coeffs[a][b]` multiplies (P_a ⊗ P_b)/2. With I_kα = σ_α/2 this makes the
/// single-spin terms I_1α, I_2β and the two-spin terms 2 I_1α I_2β all have
/// unit normalization, matching the usual product-operator bookkeeping.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct ProductOperatorState {
    pub coeffs: [[f64; 4]; 4],
}

impl ProductOperatorState {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn with(mut self, a: Pauli, b: Pauli, value: f64) -> Self {
        self.coeffs[a.index()][b.index()] = value;
        self
    }

    pub fn get(&self, a: Pauli, b: Pauli) -> f64 {
        self.coeffs[a.index()][b.index()]
    }

    pub fn basis_operator(a: Pauli, b: Pauli) -> ComplexMatrix {
        tensor(&a.matrix(), &b.matrix()).scale_real(0.5)
    }

    pub fn to_deviation(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(4, 4);
        for a in Pauli::ALL {
            for b in Pauli::ALL {
                let c = self.get(a, b);
                if c != 0.0 {
                    m = &m + &Self::basis_operator(a, b).scale_real(c);
                }
            }
        }
        m
    }

    /// Projects a Hermitian 4x4 operator onto the basis; coefficient is
    /// Tr(D P_a⊗P_b) / 2.
    pub fn from_deviation(m: &ComplexMatrix) -> Result<Self> {
        if m.rows() != 4 || m.cols() != 4 {
            return Err(Error::dim("4x4", format!("{}x{}", m.rows(), m.cols())));
        }
        let deviation = m.hermitian_deviation();
        if deviation > 1e-10 {
            return Err(Error::NotHermitian { deviation });
        }
        let mut out = Self::zero();
        for a in Pauli::ALL {
            for b in Pauli::ALL {
                let p = tensor(&a.matrix(), &b.matrix());
                out.coeffs[a.index()][b.index()] = (m * &p).trace().re / 2.0;
            }
        }
        Ok(out)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                worst = worst.max((self.coeffs[a][b] - other.coeffs[a][b]).abs());
            }
        }
        worst
    }

    fn conjugate(&self, u: &ComplexMatrix) -> Self {
        let evolved = self
            .to_deviation()
            .conjugate_by(u)
            .expect("4x4 operators")
            .hermitian_part();
        Self::from_deviation(&evolved).expect("Hermitian by construction")
    }

    /// Ideal gradient crusher: drops every term with X or Y on qubit 1.
    pub fn crush_qubit1_transverse(&self) -> Self {
        let mut out = *self;
        for b in 0..4 {
            out.coeffs[Pauli::X.index()][b] = 0.0;
            out.coeffs[Pauli::Y.index()][b] = 0.0;
        }
        out
    }

    pub fn apply(&self, step: &PulseStep) -> Self {
        match *step {
            PulseStep::Pulse { qubit, axis, angle } => {
                self.conjugate(&Gate::rotation(qubit, axis, angle).unitary)
            }
            PulseStep::SpatialAverage => self.crush_qubit1_transverse(),
            PulseStep::JEvolution { j_hz, duration } => {
                self.conjugate(&Gate::j_evolution(j_hz, duration).unitary)
            }
        }
    }
}

impl fmt::Display for ProductOperatorState {
    /// Prints terms as `I1z`, `I2x`, `2I1zI2y` with their coefficients.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for a in Pauli::ALL {
            for b in Pauli::ALL {
                let c = self.get(a, b);
                if c.abs() < 1e-12 {
                    continue;
                }
                let lower = |p: Pauli| p.symbol().to_ascii_lowercase();
                let term = match (a, b) {
                    (Pauli::I, Pauli::I) => "E".to_string(),
                    (Pauli::I, _) => format!("I2{}", lower(b)),
                    (_, Pauli::I) => format!("I1{}", lower(a)),
                    _ => format!("2I1{}I2{}", lower(a), lower(b)),
                };
                if !first {
                    f.write_str(if c < 0.0 { " - " } else { " + " })?;
                } else if c < 0.0 {
                    f.write_str("-")?;
                }
                write!(f, "{:.6} {term}", c.abs())?;
                first = false;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// One element of an NMR pulse sequence acting on a deviation operator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PulseStep {
    Pulse { qubit: Qubit, axis: Pauli, angle: f64 },
    SpatialAverage,
    JEvolution { j_hz: f64, duration: f64 },
}

impl fmt::Display for PulseStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PulseStep::Pulse { qubit, axis, angle } => write!(
                f,
                "({:+.4} rad)^{}_{}",
                angle,
                qubit,
                axis.symbol().to_ascii_lowercase()
            ),
            PulseStep::SpatialAverage => f.write_str("spatial average"),
            PulseStep::JEvolution { duration, .. } => write!(f, "J evolution {duration:e} s"),
        }
    }
}

/// Thermal deviation I1z + I2z (equal polarizations).
pub fn thermal_deviation() -> ProductOperatorState {
    ProductOperatorState::zero()
        .with(Pauli::Z, Pauli::I, 1.0)
        .with(Pauli::I, Pauli::Z, 1.0)
}

/// The NCC preparation sequence for scalar coupling `j_hz`.
pub fn ncc_preparation_sequence(j_hz: f64) -> Vec<PulseStep> {
    vec![
        PulseStep::Pulse {
            qubit: Qubit::One,
            axis: Pauli::X,
            angle: FRAC_PI_2,
        },
        PulseStep::SpatialAverage,
        PulseStep::Pulse {
            qubit: Qubit::Two,
            axis: Pauli::Y,
            angle: FRAC_PI_2,
        },
        PulseStep::JEvolution {
            j_hz,
            duration: 1.0 / (4.0 * j_hz),
        },
        PulseStep::Pulse {
            qubit: Qubit::Two,
            axis: Pauli::X,
            angle: FRAC_PI_2,
        },
        PulseStep::Pulse {
            qubit: Qubit::Two,
            axis: Pauli::Y,
            angle: -FRAC_PI_4,
        },
    ]
}

/// Each step of the preparation chain paired with the deviation after it,
/// starting from the thermal deviation.
pub fn prepare_ncc_chain(j_hz: f64) -> Vec<(PulseStep, ProductOperatorState)> {
    let mut state = thermal_deviation();
    let mut out = Vec::new();
    for step in ncc_preparation_sequence(j_hz) {
        state = state.apply(&step);
        out.push((step, state));
    }
    out
}

/// Final deviation (I2z + I2x + 2I1zI2z - 2I1zI2x)/2 of the preparation chain.
pub fn prepare_ncc_product_operator() -> ProductOperatorState {
    // the chain is independent of J because the delay is 1/(4J)
    prepare_ncc_chain(DEFAULT_PULSE_J_HZ)
        .last()
        .map(|(_, s)| *s)
        .unwrap_or_else(thermal_deviation)
}

const DEFAULT_PULSE_J_HZ: f64 = 215.0;

/// Pseudo-pure reading of a deviation: I/4 + scale * D.
pub fn state_from_deviation(deviation: &ComplexMatrix, scale: f64) -> Result<DensityMatrix> {
    let m = &ComplexMatrix::identity(4).scale_real(0.25) + &deviation.scale_real(scale);
    DensityMatrix::new(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{tensor_vec, C0, C1};
    use crate::states::{ket1, ket_plus, maximally_mixed_pair, sigma_ncc};

    fn basis_state(i: usize) -> DensityMatrix {
        let mut v = vec![C0; 4];
        v[i] = C1;
        DensityMatrix::pure(&v).unwrap()
    }

    #[test]
    fn ch_action() {
        let out = apply_gate(&basis_state(0), &ch_gate()).unwrap();
        assert!(out.matrix().approx_eq(basis_state(0).matrix(), 1e-15));
        let out = apply_gate(&basis_state(2), &ch_gate()).unwrap();
        let one_plus = DensityMatrix::pure(&tensor_vec(&ket1(), &ket_plus())).unwrap();
        assert!(out.matrix().approx_eq(one_plus.matrix(), 1e-15));
    }

    #[test]
    fn cnot_action() {
        let out = apply_gate(&basis_state(2), &cnot_gate()).unwrap();
        assert!(out.matrix().approx_eq(basis_state(3).matrix(), 1e-15));
        let out = apply_gate(&basis_state(0), &cnot_gate()).unwrap();
        assert!(out.matrix().approx_eq(basis_state(0).matrix(), 1e-15));
    }

    #[test]
    fn gates_are_unitary_and_ch_is_involutive() {
        for g in [ch_gate(), cnot_gate(), Gate::j_evolution(215.0, 1e-3)] {
            assert!(g.unitary.unitarity_deviation() < 1e-12, "{}", g.name);
        }
        let ch = ch_gate().unitary;
        assert!((&ch * &ch).approx_eq(&ComplexMatrix::identity(4), 1e-12));
        let s = sigma_ncc();
        let twice = apply_gate(&apply_gate(&s, &ch_gate()).unwrap(), &ch_gate()).unwrap();
        assert!(twice.matrix().approx_eq(s.matrix(), 1e-12));
        let same = apply_gate(&s, &Gate::identity(4)).unwrap();
        assert!(same.matrix().approx_eq(s.matrix(), 1e-15));
    }

    #[test]
    fn gate_rejects_non_unitary() {
        let m = ComplexMatrix::from_diag(&[1.0, 2.0]);
        assert!(matches!(
            Gate::new("bad", m, None, None),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn polarization_conventions() {
        assert_eq!(polarization(&basis_state(0), Qubit::One).unwrap(), 1.0);
        let mixed = maximally_mixed_pair();
        assert!(polarization(&mixed, Qubit::One).unwrap().abs() < 1e-15);
        assert!(polarization(&mixed, Qubit::Two).unwrap().abs() < 1e-15);
        assert!(polarization(&sigma_ncc(), Qubit::One).unwrap().abs() < 1e-15);
    }

    #[test]
    fn readout_examples() {
        let r = detection_readout(&sigma_ncc()).unwrap();
        assert!(r.z1.abs() < 1e-12 && (r.z2 - 1.0).abs() < 1e-12 && r.z2prime.abs() < 1e-12);
        let r = detection_readout(&maximally_mixed_pair()).unwrap();
        assert!(r.z1.abs() < 1e-12 && r.z2.abs() < 1e-12 && r.z2prime.abs() < 1e-12);
        let r = detection_readout(&basis_state(0)).unwrap();
        assert!((r.z1 - 1.0).abs() < 1e-12);
        assert!((r.z2 - 1.0).abs() < 1e-12);
        assert!((r.z2prime - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_operator_round_trip() {
        let s = thermal_deviation().with(Pauli::X, Pauli::Y, -0.3);
        let back = ProductOperatorState::from_deviation(&s.to_deviation()).unwrap();
        assert!(back.max_abs_diff(&s) < 1e-15);
        assert_eq!(format!("{}", thermal_deviation()), "1.000000 I2z + 1.000000 I1z");
    }
}
