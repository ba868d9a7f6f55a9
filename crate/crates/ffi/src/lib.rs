//! C ABI for `ncwitness`.
//!
//! States and tomography records are opaque heap handles created by the
//! `ncw_*` constructors and released with the matching `*_free` function.
//! Every fallible call returns an [`NcwStatus`]; on failure a description is
//! available from [`ncw_last_error`] on the same thread. Panics are caught at
//! the boundary and reported as `NCW_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ncwitness::decoherence::{evolve, ChannelSpec};
use ncwitness::discord::discord;
use ncwitness::qmat::{fidelity, von_neumann_entropy, ComplexMatrix, DensityMatrix, Subsystem};
use ncwitness::states;
use ncwitness::tomography::{measure_all, reconstruct, TomographyRecord};
use ncwitness::witness::{map_value_direct, map_value_polarization};
use ncwitness::Error;
use num_complex::Complex64;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NcwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidState = 3,
    DimensionMismatch = 4,
    NotConverged = 5,
    ParseError = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

/// Which qubit a projective measurement acts on.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NcwSubsystem {
    A = 0,
    B = 1,
}

/// Opaque density matrix.
pub struct NcwState(DensityMatrix);

/// Opaque tomography record.
pub struct NcwRecord(TomographyRecord);

/// Witness evaluation; polarizations are from the CH/CNOT readout.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct NcwWitnessReport {
    pub map_value: f64,
    pub factor_00: f64,
    pub factor_1plus: f64,
    pub z1: f64,
    pub z2: f64,
    pub z2prime: f64,
    pub c_used: f64,
    pub ncc_detected: bool,
}

/// Discord and the optimal measurement angles.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct NcwDiscordResult {
    pub discord: f64,
    pub mutual_information: f64,
    pub classical_correlation: f64,
    pub conditional_entropy_min: f64,
    pub theta: f64,
    pub phi: f64,
}

/// Relaxation times in seconds and scalar coupling in Hz.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct NcwChannelSpec {
    pub t1_q1: f64,
    pub t2_q1: f64,
    pub t1_q2: f64,
    pub t2_q2: f64,
    pub j_coupling: f64,
    pub include_j: bool,
}

struct Failure(NcwStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Dimension { .. } => NcwStatus::DimensionMismatch,
            Error::NotHermitian { .. } | Error::NotUnitTrace { .. } | Error::NotPositive { .. } => {
                NcwStatus::InvalidState
            }
            Error::EigenNotConverged { .. } | Error::NotConverged { .. } => NcwStatus::NotConverged,
            _ => NcwStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let text = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> NcwStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            NcwStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("panic inside ncwitness");
            NcwStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(NcwStatus::NullPointer, format!("{what} is null"))
}

unsafe fn state_ref<'a>(p: *const NcwState) -> Result<&'a DensityMatrix, Failure> {
    p.as_ref().map(|s| &s.0).ok_or_else(|| null("state"))
}

unsafe fn out_ref<'a, T>(p: *mut T) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null("output pointer"))
}

unsafe fn c_str<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null("string"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(NcwStatus::InvalidArgument, format!("string is not UTF-8: {e}")))
}

fn boxed_state(rho: DensityMatrix) -> *mut NcwState {
    Box::into_raw(Box::new(NcwState(rho)))
}

fn subsystem(s: NcwSubsystem) -> Subsystem {
    match s {
        NcwSubsystem::A => Subsystem::A,
        NcwSubsystem::B => Subsystem::B,
    }
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn ncw_status_message(status: NcwStatus) -> *const c_char {
    let s: &'static CStr = match status {
        NcwStatus::Ok => c"ok",
        NcwStatus::NullPointer => c"null pointer argument",
        NcwStatus::InvalidArgument => c"invalid argument",
        NcwStatus::InvalidState => c"matrix is not a valid density matrix",
        NcwStatus::DimensionMismatch => c"dimension mismatch",
        NcwStatus::NotConverged => c"numerical routine did not converge",
        NcwStatus::ParseError => c"malformed JSON",
        NcwStatus::BufferTooSmall => c"output buffer too small",
        NcwStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}

/// Message of the last failed call on this thread, or "" after a success.
/// The pointer stays valid until the next `ncw_*` call on this thread.
#[no_mangle]
pub extern "C" fn ncw_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Built-in state by name: "sigma", "bell", "mixed" or "zero".
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ncw_state_builtin(name: *const c_char, out: *mut *mut NcwState) -> NcwStatus {
    guard(|| {
        let out = out_ref(out)?;
        let name = c_str(name)?;
        let rho = states::builtin(name)
            .ok_or_else(|| Failure(NcwStatus::InvalidArgument, format!("unknown state {name:?}")))?;
        *out = boxed_state(rho);
        Ok(())
    })
}

/// Seeded random density matrix of dimension 2 or 4.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ncw_state_random(dim: usize, seed: u64, out: *mut *mut NcwState) -> NcwStatus {
    guard(|| {
        let out = out_ref(out)?;
        *out = boxed_state(states::random_density(dim, seed)?);
        Ok(())
    })
}

/// State from row-major real and imaginary parts, each `dim * dim` long.
/// `im` may be null for a real matrix. The input is validated.
///
/// # Safety
/// `re` (and `im` if non-null) must point to `dim * dim` doubles.
#[no_mangle]
pub unsafe extern "C" fn ncw_state_from_entries(
    dim: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut NcwState,
) -> NcwStatus {
    guard(|| {
        let out = out_ref(out)?;
        if re.is_null() {
            return Err(null("re"));
        }
        let n = dim
            .checked_mul(dim)
            .filter(|&n| n > 0 && n <= 16)
            .ok_or_else(|| Failure(NcwStatus::DimensionMismatch, format!("unsupported dimension {dim}")))?;
        let re = std::slice::from_raw_parts(re, n);
        let data = (0..n)
            .map(|k| {
                let i = if im.is_null() { 0.0 } else { *im.add(k) };
                Complex64::new(re[k], i)
            })
            .collect();
        let m = ComplexMatrix::new(dim, dim, data)?;
        *out = boxed_state(DensityMatrix::new(m)?);
        Ok(())
    })
}

/// State from DensityMatrix JSON {"dim", "rows", "cols", "re", "im"}.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ncw_state_from_json(json: *const c_char, out: *mut *mut NcwState) -> NcwStatus {
    guard(|| {
        let out = out_ref(out)?;
        let rho: DensityMatrix = serde_json::from_str(c_str(json)?).map_err(|e| {
            Failure(NcwStatus::ParseError, format!("line {}, column {}: {e}", e.line(), e.column()))
        })?;
        *out = boxed_state(rho);
        Ok(())
    })
}

/// Serializes a state as JSON into `buf` (NUL-terminated). `needed` receives
/// the required size including the terminator; if `len` is too small the
/// call returns `NCW_STATUS_BUFFER_TOO_SMALL` and writes nothing to `buf`.
///
/// # Safety
/// `buf` must have room for `len` bytes (it may be null when `len` is 0).
#[no_mangle]
pub unsafe extern "C" fn ncw_state_to_json(
    state: *const NcwState,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> NcwStatus {
    guard(|| {
        let rho = state_ref(state)?;
        let text = serde_json::to_string(rho)
            .map_err(|e| Failure(NcwStatus::InvalidArgument, e.to_string()))?;
        let size = text.len() + 1;
        if let Some(n) = needed.as_mut() {
            *n = size;
        }
        if len < size || buf.is_null() {
            return Err(Failure(
                NcwStatus::BufferTooSmall,
                format!("need {size} bytes, have {len}"),
            ));
        }
        ptr::copy_nonoverlapping(text.as_ptr().cast::<c_char>(), buf, text.len());
        *buf.add(text.len()) = 0;
        Ok(())
    })
}

/// Dimension of a state (2 or 4), or 0 for a null handle.
///
/// # Safety
/// `state` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ncw_state_dim(state: *const NcwState) -> usize {
    state.as_ref().map_or(0, |s| s.0.dim())
}

/// Copies the row-major entries into `re` and `im` (each `dim * dim` long).
///
/// # Safety
/// `re` and `im` must each have room for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ncw_state_entries(
    state: *const NcwState,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> NcwStatus {
    guard(|| {
        let rho = state_ref(state)?;
        if re.is_null() || im.is_null() {
            return Err(null("entry buffer"));
        }
        let n = rho.dim();
        if len < n * n {
            return Err(Failure(NcwStatus::BufferTooSmall, format!("need {} entries", n * n)));
        }
        for r in 0..n {
            for c in 0..n {
                let z = rho.get(r, c);
                *re.add(r * n + c) = z.re;
                *im.add(r * n + c) = z.im;
            }
        }
        Ok(())
    })
}

/// Releases a state handle. Null is ignored.
///
/// # Safety
/// `state` must come from an `ncw_*` constructor and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ncw_state_free(state: *mut NcwState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Witness map c - Tr(rho|00><00|) Tr(rho|1+><1+|) of a two-qubit state.
///
/// # Safety
/// `state` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ncw_witness(
    state: *const NcwState,
    c: f64,
    out: *mut NcwWitnessReport,
) -> NcwStatus {
    guard(|| {
        let out = out_ref(out)?;
        let r = map_value_direct(state_ref(state)?, c)?;
        *out = NcwWitnessReport {
            map_value: r.map_value,
            factor_00: r.factor_00,
            factor_1plus: r.factor_1plus,
            z1: r.polarizations.z1,
            z2: r.polarizations.z2,
            z2prime: r.polarizations.z2prime,
            c_used: r.c_used,
            ncc_detected: r.ncc_detected,
        };
        Ok(())
    })
}

/// Witness map from the three readout polarizations.
#[no_mangle]
pub extern "C" fn ncw_map_value_polarization(z1: f64, z2: f64, z2prime: f64, c: f64) -> f64 {
    map_value_polarization(z1, z2, z2prime, c)
}

/// Quantum discord in bits with the measurement on `measured`.
///
/// # Safety
/// `state` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ncw_discord(
    state: *const NcwState,
    measured: NcwSubsystem,
    out: *mut NcwDiscordResult,
) -> NcwStatus {
    guard(|| {
        let out = out_ref(out)?;
        let r = discord(state_ref(state)?, subsystem(measured))?;
        *out = NcwDiscordResult {
            discord: r.discord,
            mutual_information: r.mutual_information,
            classical_correlation: r.classical_correlation,
            conditional_entropy_min: r.conditional_entropy_min,
            theta: r.optimal_basis.theta,
            phi: r.optimal_basis.phi,
        };
        Ok(())
    })
}

/// Von Neumann entropy in bits.
///
/// # Safety
/// `state` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ncw_entropy(state: *const NcwState, out: *mut f64) -> NcwStatus {
    guard(|| {
        let out = out_ref(out)?;
        *out = von_neumann_entropy(state_ref(state)?)?;
        Ok(())
    })
}

/// Uhlmann-Jozsa fidelity of two states of equal dimension.
///
/// # Safety
/// `a` and `b` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ncw_fidelity(a: *const NcwState, b: *const NcwState, out: *mut f64) -> NcwStatus {
    guard(|| {
        let out = out_ref(out)?;
        *out = fidelity(state_ref(a)?, state_ref(b)?)?;
        Ok(())
    })
}

/// Evolves a two-qubit state for `t` seconds under the relaxation channel.
///
/// # Safety
/// `state` and `spec` must be valid and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ncw_evolve(
    state: *const NcwState,
    spec: *const NcwChannelSpec,
    t: f64,
    out: *mut *mut NcwState,
) -> NcwStatus {
    guard(|| {
        let out = out_ref(out)?;
        let s = spec.as_ref().ok_or_else(|| null("spec"))?;
        let spec = ChannelSpec {
            t1_q1: s.t1_q1,
            t2_q1: s.t2_q1,
            t1_q2: s.t1_q2,
            t2_q2: s.t2_q2,
            j_coupling: s.j_coupling,
            include_j: s.include_j,
        };
        *out = boxed_state(evolve(state_ref(state)?, &spec, t)?);
        Ok(())
    })
}

/// Simulated Pauli tomography with Gaussian noise of width `noise_sigma`.
///
/// # Safety
/// `state` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ncw_tomo_measure(
    state: *const NcwState,
    noise_sigma: f64,
    seed: u64,
    out: *mut *mut NcwRecord,
) -> NcwStatus {
    guard(|| {
        let out = out_ref(out)?;
        let record = measure_all(state_ref(state)?, noise_sigma, seed)?;
        *out = Box::into_raw(Box::new(NcwRecord(record)));
        Ok(())
    })
}

/// Expectation value stored in a record for a label such as "ZX".
///
/// # Safety
/// `record` must be a live handle, `label` a NUL-terminated string and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ncw_record_value(
    record: *const NcwRecord,
    label: *const c_char,
    out: *mut f64,
) -> NcwStatus {
    guard(|| {
        let out = out_ref(out)?;
        let record = record.as_ref().ok_or_else(|| null("record"))?;
        let label = c_str(label)?;
        *out = record
            .0
            .value(label)
            .ok_or_else(|| Failure(NcwStatus::InvalidArgument, format!("no label {label:?}")))?;
        Ok(())
    })
}

/// Linear inversion followed by projection onto the density matrices.
///
/// # Safety
/// `record` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ncw_tomo_reconstruct(record: *const NcwRecord, out: *mut *mut NcwState) -> NcwStatus {
    guard(|| {
        let out = out_ref(out)?;
        let record = record.as_ref().ok_or_else(|| null("record"))?;
        *out = boxed_state(reconstruct(&record.0)?);
        Ok(())
    })
}

/// Releases a record handle. Null is ignored.
///
/// # Safety
/// `record` must come from `ncw_tomo_measure` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ncw_record_free(record: *mut NcwRecord) {
    if !record.is_null() {
        drop(Box::from_raw(record));
    }
}
