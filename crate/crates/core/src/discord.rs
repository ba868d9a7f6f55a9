//! Quantum discord of a two-qubit state.
//!
//! The measured qubit is probed with the projective basis
//! `cos t |0> + e^{ip} sin t |1>`, `e^{-ip} sin t |0> - cos t |1>`, and the
//! conditional entropy of the other qubit is minimized over `(t, p)`:
//!
//! ```text
//! D_A = S(rho_A) - S(rho_AB) + min_{t,p} sum_j p_j S(rho_B | Pi_j)
//! ```
//!
//! The matrix path (`post_measurement_state`, `conditional_entropy`) follows
//! the definitions literally. The optimizer evaluates the same objective
//! through the Pauli correlation tensor, which is much cheaper per call.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::{
    partial_trace, tensor, von_neumann_entropy, ComplexMatrix, DensityMatrix, Pauli, Subsystem,
};
use crate::simplex::NelderMead;

/// Branches below this probability carry zero weight.
pub const ZERO_PROBABILITY: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementBasis {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementBasis {
    pub fn new(theta: f64, phi: f64) -> Self {
        MeasurementBasis { theta, phi }
    }

    pub fn computational() -> Self {
        Self::new(0.0, 0.0)
    }

    /// The two orthonormal measurement vectors.
    pub fn vectors(&self) -> [[Complex64; 2]; 2] {
        let (s, c) = self.theta.sin_cos();
        let e = Complex64::from_polar(1.0, self.phi);
        [
            [Complex64::new(c, 0.0), e * s],
            [e.conj() * s, Complex64::new(-c, 0.0)],
        ]
    }

    pub fn projector(&self, outcome: Outcome) -> ComplexMatrix {
        let v = self.vectors();
        ComplexMatrix::outer(&v[outcome.index()])
    }

    /// Bloch vector of the first projector; the second one is its negative.
    pub fn bloch(&self) -> [f64; 3] {
        let (s2, c2) = (2.0 * self.theta).sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [s2 * cp, s2 * sp, c2]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    First,
    Second,
}

impl Outcome {
    pub const BOTH: [Outcome; 2] = [Outcome::First, Outcome::Second];

    fn index(self) -> usize {
        match self {
            Outcome::First => 0,
            Outcome::Second => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscordResult {
    pub discord: f64,
    pub optimal_basis: MeasurementBasis,
    pub mutual_information: f64,
    /// Classical correlation J = S(unmeasured) - min conditional entropy.
    pub classical_correlation: f64,
    pub conditional_entropy_min: f64,
    pub measured_subsystem: Subsystem,
}

fn check_two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::dim("4x4 state", format!("{0}x{0}", rho.dim())));
    }
    Ok(())
}

/// I(A:B) = S(A) + S(B) - S(AB), in bits.
pub fn mutual_information(rho: &DensityMatrix) -> Result<f64> {
    check_two_qubit(rho)?;
    let sa = von_neumann_entropy(&partial_trace(rho, Subsystem::A)?)?;
    let sb = von_neumann_entropy(&partial_trace(rho, Subsystem::B)?)?;
    Ok(sa + sb - von_neumann_entropy(rho)?)
}

fn embed_projector(p: &ComplexMatrix, measured: Subsystem) -> ComplexMatrix {
    let id = ComplexMatrix::identity(2);
    match measured {
        Subsystem::A => tensor(p, &id),
        Subsystem::B => tensor(&id, p),
    }
}

/// Normalized state after `outcome` of a projective measurement on `measured`,
/// together with the outcome probability.
pub fn post_measurement_state(
    rho: &DensityMatrix,
    basis: &MeasurementBasis,
    outcome: Outcome,
    measured: Subsystem,
) -> Result<(DensityMatrix, f64)> {
    check_two_qubit(rho)?;
    let p = embed_projector(&basis.projector(outcome), measured);
    let unnormalized = rho.matrix().conjugate_by(&p)?;
    let prob = unnormalized.trace().re;
    if prob < ZERO_PROBABILITY {
        return Err(Error::ZeroProbability { prob });
    }
    let state = DensityMatrix::from_trusted(unnormalized.scale_real(1.0 / prob).hermitian_part());
    Ok((state, prob))
}

/// sum_j p_j S(rho_unmeasured | Pi_j) evaluated through explicit projections
/// and partial traces.
pub fn conditional_entropy(
    rho: &DensityMatrix,
    basis: &MeasurementBasis,
    measured: Subsystem,
) -> Result<f64> {
    let mut total = 0.0;
    for outcome in Outcome::BOTH {
        match post_measurement_state(rho, basis, outcome, measured) {
            Ok((state, prob)) => {
                let reduced = partial_trace(&state, measured.other())?;
                total += prob * von_neumann_entropy(&reduced)?;
            }
            Err(Error::ZeroProbability { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(total)
}

/// Pauli decomposition rho = 1/4 (II + a.sigma⊗I + I⊗b.sigma + sum T_ij sigma_i⊗sigma_j),
/// oriented so that `a` belongs to the measured qubit.
#[derive(Clone, Debug)]
pub(crate) struct CorrelationTensor {
    a: [f64; 3],
    b: [f64; 3],
    t: [[f64; 3]; 3],
}

impl CorrelationTensor {
    pub(crate) fn new(rho: &DensityMatrix, measured: Subsystem) -> Self {
        let paulis = [Pauli::X, Pauli::Y, Pauli::Z];
        let expect = |p: Pauli, q: Pauli| -> f64 {
            let (first, second) = match measured {
                Subsystem::A => (p, q),
                Subsystem::B => (q, p),
            };
            let op = tensor(&first.matrix(), &second.matrix());
            rho.expectation(&op).expect("4x4")
        };
        let mut a = [0.0; 3];
        let mut b = [0.0; 3];
        let mut t = [[0.0; 3]; 3];
        for (i, &p) in paulis.iter().enumerate() {
            a[i] = expect(p, Pauli::I);
            b[i] = expect(Pauli::I, p);
            for (j, &q) in paulis.iter().enumerate() {
                t[i][j] = expect(p, q);
            }
        }
        CorrelationTensor { a, b, t }
    }

    /// Conditional entropy for a measurement along Bloch direction `n`.
    pub(crate) fn conditional_entropy(&self, n: [f64; 3]) -> f64 {
        let na = n[0] * self.a[0] + n[1] * self.a[1] + n[2] * self.a[2];
        let mut tn = [0.0; 3];
        for (j, out) in tn.iter_mut().enumerate() {
            *out = n[0] * self.t[0][j] + n[1] * self.t[1][j] + n[2] * self.t[2][j];
        }
        let mut total = 0.0;
        for sign in [1.0, -1.0] {
            let weight = 1.0 + sign * na;
            let prob = 0.5 * weight;
            if prob < ZERO_PROBABILITY {
                continue;
            }
            let r2: f64 = (0..3).map(|j| (self.b[j] + sign * tn[j]).powi(2)).sum();
            let r = (r2.sqrt() / weight).min(1.0);
            total += prob * binary_entropy(0.5 * (1.0 + r));
        }
        total
    }
}

fn binary_entropy(p: f64) -> f64 {
    let h = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
    h(p) + h(1.0 - p)
}

#[derive(Clone, Debug)]
pub struct DiscordOptions {
    /// Grid points per axis: theta over [0, pi/2], phi over [0, 2 pi).
    pub grid: usize,
    /// Number of best grid points used to seed local refinement.
    pub refine_starts: usize,
    pub max_evals: usize,
    pub tolerance: f64,
}

impl Default for DiscordOptions {
    fn default() -> Self {
        DiscordOptions {
            grid: 61,
            refine_starts: 3,
            max_evals: 500,
            tolerance: 1e-9,
        }
    }
}

/// Discord with measurement on `measured`, using the default search options.
pub fn discord(rho: &DensityMatrix, measured: Subsystem) -> Result<DiscordResult> {
    discord_with(rho, measured, &DiscordOptions::default())
}

pub fn discord_with(
    rho: &DensityMatrix,
    measured: Subsystem,
    options: &DiscordOptions,
) -> Result<DiscordResult> {
    check_two_qubit(rho)?;
    if options.grid < 2 {
        return Err(Error::InvalidArgument(format!(
            "grid must have at least 2 points per axis, got {}",
            options.grid
        )));
    }
    let tensor = CorrelationTensor::new(rho, measured);
    let objective = |theta: f64, phi: f64| tensor.conditional_entropy(MeasurementBasis::new(theta, phi).bloch());

    let n = options.grid;
    let thetas: Vec<f64> = (0..n).map(|i| FRAC_PI_2 * i as f64 / (n - 1) as f64).collect();
    let phis: Vec<f64> = (0..n).map(|j| TAU * j as f64 / n as f64).collect();
    let phi_trig: Vec<(f64, f64)> = phis.iter().map(|p| p.sin_cos()).collect();

    // (value, theta index, phi index); ties go to the smallest theta, then phi
    let mut grid_values: Vec<(f64, usize, usize)> = Vec::with_capacity(n * n);
    for (i, &theta) in thetas.iter().enumerate() {
        let (s2, c2) = (2.0 * theta).sin_cos();
        for (j, &(sp, cp)) in phi_trig.iter().enumerate() {
            let v = tensor.conditional_entropy([s2 * cp, s2 * sp, c2]);
            grid_values.push((v, i, j));
        }
    }
    let order = |x: &(f64, usize, usize), y: &(f64, usize, usize)| {
        x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2))
    };
    let keep = options.refine_starts.clamp(1, grid_values.len());
    if keep < grid_values.len() {
        grid_values.select_nth_unstable_by(keep - 1, order);
    }
    grid_values.truncate(keep);
    grid_values.sort_by(order);

    let (mut best_value, bi, bj) = grid_values[0];
    let mut best = MeasurementBasis::new(thetas[bi], phis[bj]);

    let nm = NelderMead {
        step: FRAC_PI_2 / (n - 1) as f64,
        ftol: options.tolerance,
        max_evals: options.max_evals,
    };
    for &(_, i, j) in grid_values.iter().take(options.refine_starts) {
        let m = nm.minimize(|x| objective(x[0], x[1]), &[thetas[i], phis[j]]);
        if m.value < best_value {
            best_value = m.value;
            best = MeasurementBasis::new(m.x[0], m.x[1]);
        }
    }

    let s_measured = von_neumann_entropy(&partial_trace(rho, measured)?)?;
    let s_other = von_neumann_entropy(&partial_trace(rho, measured.other())?)?;
    let s_joint = von_neumann_entropy(rho)?;
    let mutual = s_measured + s_other - s_joint;
    let classical = s_other - best_value;
    Ok(DiscordResult {
        discord: s_measured - s_joint + best_value,
        optimal_basis: canonical_basis(best),
        mutual_information: mutual,
        classical_correlation: classical,
        conditional_entropy_min: best_value,
        measured_subsystem: measured,
    })
}

/// Folds an unconstrained (theta, phi) into theta in [0, pi/2], phi in [0, 2 pi)
/// describing the same pair of projectors.
pub fn canonical_basis(basis: MeasurementBasis) -> MeasurementBasis {
    let [x, y, z] = basis.bloch();
    // outcome relabelling maps n to -n; pick the upper hemisphere
    let (x, y, z) = if z < 0.0 { (-x, -y, -z) } else { (x, y, z) };
    let theta = 0.5 * z.clamp(-1.0, 1.0).acos();
    let phi = if x == 0.0 && y == 0.0 { 0.0 } else { y.atan2(x).rem_euclid(TAU) };
    MeasurementBasis::new(theta, phi)
}
