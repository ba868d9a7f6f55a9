//! Dense complex linear algebra for one- and two-qubit Hilbert spaces.
//!
//! Everything here works on tiny matrices (at most 4x4), so the routines
//! favour plain loops over `Vec<Complex64>` storage. Matrices are row-major.
//! Qubit 1 (subsystem A) is always the left tensor factor, giving the basis
//! order |00>, |01>, |10>, |11>.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const C0: Complex64 = Complex64::new(0.0, 0.0);
pub const C1: Complex64 = Complex64::new(1.0, 0.0);
pub const CI: Complex64 = Complex64::new(0.0, 1.0);

/// Hermiticity tolerance used when validating density matrices.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Unit-trace tolerance used when validating density matrices.
pub const TRACE_TOL: f64 = 1e-10;
/// Smallest eigenvalue accepted for a positive semidefinite state.
pub const PSD_TOL: f64 = -1e-9;

const JACOBI_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl TryFrom<MatrixRepr> for ComplexMatrix {
    type Error = Error;

    fn try_from(repr: MatrixRepr) -> Result<Self> {
        if repr.re.len() != repr.im.len() {
            return Err(Error::dim(
                format!("{} imaginary parts", repr.re.len()),
                repr.im.len(),
            ));
        }
        let data = repr
            .re
            .iter()
            .zip(&repr.im)
            .map(|(&re, &im)| Complex64::new(re, im))
            .collect();
        ComplexMatrix::new(repr.rows, repr.cols, data)
    }
}

impl From<ComplexMatrix> for MatrixRepr {
    fn from(m: ComplexMatrix) -> Self {
        MatrixRepr {
            rows: m.rows,
            cols: m.cols,
            re: m.data.iter().map(|z| z.re).collect(),
            im: m.data.iter().map(|z| z.im).collect(),
        }
    }
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::dim(
                format!("{} entries ({rows}x{cols})", rows * cols),
                data.len(),
            ));
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![C0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = C1;
        }
        m
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::new(
            rows,
            cols,
            entries.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = Complex64::new(d, 0.0);
        }
        m
    }

    /// |v><v| for a (not necessarily normalized) column vector `v`.
    pub fn outer(v: &[Complex64]) -> Self {
        let n = v.len();
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: Complex64) {
        self.data[r * self.cols + c] = value;
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.get(r, c).conj();
            }
        }
        out
    }

    pub fn scale(&self, k: Complex64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * k).collect(),
        }
    }

    pub fn scale_real(&self, k: f64) -> Self {
        self.scale(Complex64::new(k, 0.0))
    }

    pub fn checked_mul(&self, other: &ComplexMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::dim(
                format!("{} rows", self.cols),
                format!("{} rows", other.rows),
            ));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == C0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    /// U M U^dagger.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<Self> {
        u.checked_mul(self)?.checked_mul(&u.adjoint())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`; infinite when shapes differ.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &ComplexMatrix, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// (M + M^dagger) / 2.
    pub fn hermitian_part(&self) -> Self {
        let mut out = self.clone();
        let n = self.rows;
        for i in 0..n {
            for j in 0..n {
                out.data[i * n + j] = (self.get(i, j) + self.get(j, i).conj()) * 0.5;
            }
        }
        out
    }

    pub fn unitarity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let prod = self
            .adjoint()
            .checked_mul(self)
            .expect("square matrix product");
        prod.max_abs_diff(&Self::identity(self.rows))
    }

    /// AB - BA.
    pub fn commutator(&self, other: &ComplexMatrix) -> Result<Self> {
        let ab = self.checked_mul(other)?;
        let ba = other.checked_mul(self)?;
        Ok(&ab - &ba)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self.get(r, c);
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    /// Panics on incompatible shapes; use [`ComplexMatrix::checked_mul`] otherwise.
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.checked_mul(rhs).expect("incompatible matrix shapes")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Kronecker product `a ⊗ b`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = ComplexMatrix::zeros(rows, cols);
    for ar in 0..a.rows {
        for ac in 0..a.cols {
            let x = a.get(ar, ac);
            if x == C0 {
                continue;
            }
            for br in 0..b.rows {
                for bc in 0..b.cols {
                    out.data[(ar * b.rows + br) * cols + ac * b.cols + bc] = x * b.get(br, bc);
                }
            }
        }
    }
    out
}

/// Kronecker product of two state vectors.
pub fn tensor_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .flat_map(|&x| b.iter().map(move |&y| x * y))
        .collect()
}

/// Single-qubit Pauli labels. `I` is included so that two-qubit product
/// operators can be indexed uniformly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> ComplexMatrix {
        let e = match self {
            Pauli::I => [C1, C0, C0, C1],
            Pauli::X => [C0, C1, C1, C0],
            Pauli::Y => [C0, -CI, CI, C0],
            Pauli::Z => [C1, C0, C0, -C1],
        };
        ComplexMatrix::new(2, 2, e.to_vec()).expect("2x2")
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Subsystem label of a two-qubit state. A is qubit 1, B is qubit 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

impl Subsystem {
    pub fn other(self) -> Self {
        match self {
            Subsystem::A => Subsystem::B,
            Subsystem::B => Subsystem::A,
        }
    }
}

impl fmt::Display for Subsystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Subsystem::A => "A",
            Subsystem::B => "B",
        })
    }
}

impl std::str::FromStr for Subsystem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" | "1" => Ok(Subsystem::A),
            "B" | "b" | "2" => Ok(Subsystem::B),
            other => Err(Error::InvalidArgument(format!(
                "unknown subsystem {other:?} (expected A or B)"
            ))),
        }
    }
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// V diag(f(lambda)) V^dagger.
    pub fn reassemble_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let weights: Vec<f64> = self.values.iter().map(|&v| f(v)).collect();
        self.reassemble(&weights)
    }

    /// sum_k w_k |v_k><v_k| with one weight per eigenvector.
    pub fn reassemble(&self, weights: &[f64]) -> ComplexMatrix {
        let n = self.values.len();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &w) in weights.iter().enumerate().take(n) {
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = self.vectors.get(i, k) * w;
                for j in 0..n {
                    out.data[i * n + j] += vik * self.vectors.get(j, k).conj();
                }
            }
        }
        out
    }
}

/// Cyclic complex Jacobi eigensolver for Hermitian matrices.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<HermitianEigen> {
    if !m.is_square() {
        return Err(Error::dim("square matrix", format!("{}x{}", m.rows, m.cols)));
    }
    let deviation = m.hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let n = m.rows;
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let threshold = JACOBI_TOL * a.frobenius_norm().max(1.0);

    let off_norm = |a: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a.get(i, j).norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = off_norm(&a) <= threshold;
    let mut sweeps = 0;
    while !converged {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::EigenNotConverged { sweeps });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let mag = apq.norm();
                if mag < 1e-300 {
                    continue;
                }
                // Phase-rotate so that the (p, q) entry is real and positive,
                // then apply a real symmetric Jacobi rotation.
                let phase = apq / mag;
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // J = D R with D = diag(1, conj(phase)) on (p, q).
                let jpp = Complex64::new(c, 0.0);
                let jpq = Complex64::new(s, 0.0);
                let jqp = phase.conj() * (-s);
                let jqq = phase.conj() * c;

                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, akp * jpp + akq * jqp);
                    a.set(k, q, akp * jpq + akq * jqq);
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, vkp * jpp + vkq * jqp);
                    v.set(k, q, vkp * jpq + vkq * jqq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, jpp.conj() * apk + jqp.conj() * aqk);
                    a.set(q, k, jpq.conj() * apk + jqq.conj() * aqk);
                }
                a.set(p, q, C0);
                a.set(q, p, C0);
                a.set(p, p, Complex64::new(a.get(p, p).re, 0.0));
                a.set(q, q, Complex64::new(a.get(q, q).re, 0.0));
            }
        }
        converged = off_norm(&a) <= threshold;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(j, j).re.total_cmp(&a.get(i, i).re));
    let values = order.iter().map(|&i| a.get(i, i).re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for r in 0..n {
            vectors.set(r, new_col, v.get(r, old_col));
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// Square root of a positive semidefinite matrix; negative eigenvalues are clamped to 0.
pub fn sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(eig_hermitian(m)?.reassemble_with(|x| x.max(0.0).sqrt()))
}

/// A validated one- or two-qubit density matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DensityRepr", into = "DensityRepr")]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

#[derive(Serialize, Deserialize)]
struct DensityRepr {
    dim: usize,
    #[serde(flatten)]
    matrix: MatrixRepr,
}

impl TryFrom<DensityRepr> for DensityMatrix {
    type Error = Error;

    fn try_from(repr: DensityRepr) -> Result<Self> {
        if repr.matrix.rows != repr.dim || repr.matrix.cols != repr.dim {
            return Err(Error::dim(
                format!("{0}x{0}", repr.dim),
                format!("{}x{}", repr.matrix.rows, repr.matrix.cols),
            ));
        }
        DensityMatrix::new(ComplexMatrix::try_from(repr.matrix)?)
    }
}

impl From<DensityMatrix> for DensityRepr {
    fn from(rho: DensityMatrix) -> Self {
        DensityRepr {
            dim: rho.dim(),
            matrix: rho.matrix.into(),
        }
    }
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() || !(matrix.rows == 2 || matrix.rows == 4) {
            return Err(Error::dim(
                "2x2 or 4x4",
                format!("{}x{}", matrix.rows, matrix.cols),
            ));
        }
        let deviation = matrix.hermitian_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = matrix.trace();
        if (trace - C1).norm() > TRACE_TOL {
            return Err(Error::NotUnitTrace { trace: trace.re });
        }
        let eig = eig_hermitian(&matrix)?;
        let min_eigenvalue = *eig.values.last().expect("nonempty");
        if min_eigenvalue < PSD_TOL {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(DensityMatrix { matrix })
    }

    /// Skips validation. Only for matrices that are states by construction.
    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        debug_assert!(matrix.is_square());
        DensityMatrix { matrix }
    }

    /// Pure state |psi><psi|; `psi` is normalized first.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidArgument("zero or non-finite state vector".into()));
        }
        let unit: Vec<Complex64> = psi.iter().map(|z| z / norm).collect();
        DensityMatrix::new(ComplexMatrix::outer(&unit))
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        DensityMatrix::new(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.matrix.get(r, c)
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(eig_hermitian(&self.matrix)?.values)
    }

    /// Tr(rho O), real part.
    pub fn expectation(&self, observable: &ComplexMatrix) -> Result<f64> {
        if observable.rows != self.dim() || observable.cols != self.dim() {
            return Err(Error::dim(
                format!("{0}x{0}", self.dim()),
                format!("{}x{}", observable.rows, observable.cols),
            ));
        }
        let n = self.dim();
        let mut acc = C0;
        for i in 0..n {
            for k in 0..n {
                acc += self.matrix.get(i, k) * observable.get(k, i);
            }
        }
        Ok(acc.re)
    }

    /// U rho U^dagger for a unitary `u`.
    pub fn evolve_unitary(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.rows != self.dim() || u.cols != self.dim() {
            return Err(Error::dim(
                format!("{0}x{0}", self.dim()),
                format!("{}x{}", u.rows, u.cols),
            ));
        }
        Ok(DensityMatrix::from_trusted(
            self.matrix.conjugate_by(u)?.hermitian_part(),
        ))
    }
}

/// Reduced state of the `keep` subsystem of a two-qubit state.
pub fn partial_trace(rho: &DensityMatrix, keep: Subsystem) -> Result<DensityMatrix> {
    if rho.dim() != 4 {
        return Err(Error::dim("4x4 state", format!("{0}x{0}", rho.dim())));
    }
    Ok(DensityMatrix::from_trusted(partial_trace_matrix(
        rho.matrix(),
        keep,
    )))
}

/// Partial trace of any 4x4 operator (not necessarily a state).
pub(crate) fn partial_trace_matrix(m: &ComplexMatrix, keep: Subsystem) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(2, 2);
    for i in 0..2 {
        for j in 0..2 {
            let mut acc = C0;
            for k in 0..2 {
                acc += match keep {
                    // index = 2 * a + b
                    Subsystem::A => m.get(2 * i + k, 2 * j + k),
                    Subsystem::B => m.get(2 * k + i, 2 * k + j),
                };
            }
            out.set(i, j, acc);
        }
    }
    out
}

/// -sum lambda log2 lambda with 0 log 0 = 0.
pub fn entropy_of_spectrum(values: &[f64]) -> f64 {
    values
        .iter()
        .map(|&x| x.clamp(0.0, 1.0))
        .filter(|&x| x > 0.0)
        .map(|x| -x * x.log2())
        .sum()
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    Ok(entropy_of_spectrum(&rho.eigenvalues()?))
}

// Unit-trace states have spectra in [0, 1], so this floor is absolute.
const SPECTRUM_NOISE: f64 = 1e-13;

/// Uhlmann-Jozsa fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::dim(
            format!("{0}x{0}", rho.dim()),
            format!("{0}x{0}", sigma.dim()),
        ));
    }
    // Eigenvalues at rounding level are zeroed before the square roots,
    // which would otherwise turn 1e-17 noise into 1e-9 errors.
    let eig = eig_hermitian(rho.matrix())?;
    let root = eig.reassemble_with(|x| if x > SPECTRUM_NOISE { x.sqrt() } else { 0.0 });
    let inner = (&(&root * sigma.matrix()) * &root).hermitian_part();
    let eig = eig_hermitian(&inner)?;
    let trace_root: f64 = eig
        .values
        .iter()
        .map(|&x| if x > SPECTRUM_NOISE { x.sqrt() } else { 0.0 })
        .sum();
    Ok((trace_root * trace_root).clamp(0.0, 1.0))
}

/// Trace norm ||A||_1 of a Hermitian matrix.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(eig_hermitian(m)?.values.iter().map(|x| x.abs()).sum())
}
