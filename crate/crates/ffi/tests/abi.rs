use std::ffi::{CStr, CString};
use std::ptr;

use ncwitness_ffi::*;

fn builtin(name: &str) -> *mut NcwState {
    let name = CString::new(name).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ncw_state_builtin(name.as_ptr(), &mut out) }, NcwStatus::Ok);
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(ncw_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn witness_and_discord_of_sigma() {
    let sigma = builtin("sigma");
    let mut report = NcwWitnessReport::default();
    assert_eq!(unsafe { ncw_witness(sigma, 0.182138, &mut report) }, NcwStatus::Ok);
    assert!((report.map_value + 0.067862).abs() < 1e-12);
    assert!(report.ncc_detected);
    assert!((report.z2 - 1.0).abs() < 1e-12);
    let from_pol = ncw_map_value_polarization(report.z1, report.z2, report.z2prime, 0.182138);
    assert!((from_pol - report.map_value).abs() < 1e-12);

    let mut d = NcwDiscordResult::default();
    assert_eq!(unsafe { ncw_discord(sigma, NcwSubsystem::B, &mut d) }, NcwStatus::Ok);
    assert!((d.discord - 0.2017521).abs() < 1e-5);
    assert!((d.discord - (d.mutual_information - d.classical_correlation)).abs() < 1e-10);
    unsafe { ncw_state_free(sigma) };
}

#[test]
fn entries_round_trip() {
    let re = [0.5, 0.0, 0.0, 0.5];
    let im = [0.0, -0.5, 0.5, 0.0];
    let mut state = ptr::null_mut();
    let status = unsafe { ncw_state_from_entries(2, re.as_ptr(), im.as_ptr(), &mut state) };
    assert_eq!(status, NcwStatus::Ok);
    assert_eq!(unsafe { ncw_state_dim(state) }, 2);
    let (mut r, mut i) = ([0.0; 4], [0.0; 4]);
    let status = unsafe { ncw_state_entries(state, r.as_mut_ptr(), i.as_mut_ptr(), 4) };
    assert_eq!(status, NcwStatus::Ok);
    assert_eq!((r, i), (re, im));
    let mut s = f64::NAN;
    assert_eq!(unsafe { ncw_entropy(state, &mut s) }, NcwStatus::Ok);
    assert!(s.abs() < 1e-12);
    unsafe { ncw_state_free(state) };
}

#[test]
fn invalid_inputs_map_to_status_codes() {
    let mut state = ptr::null_mut();
    let trace_two = [1.0, 0.0, 0.0, 1.0];
    let status = unsafe { ncw_state_from_entries(2, trace_two.as_ptr(), ptr::null(), &mut state) };
    assert_eq!(status, NcwStatus::InvalidState);
    assert!(last_error().contains("trace"));
    assert!(state.is_null());

    let status = unsafe { ncw_state_from_entries(3, trace_two.as_ptr(), ptr::null(), &mut state) };
    assert_eq!(status, NcwStatus::DimensionMismatch);

    let name = CString::new("nonsense").unwrap();
    assert_eq!(unsafe { ncw_state_builtin(name.as_ptr(), &mut state) }, NcwStatus::InvalidArgument);
    assert_eq!(unsafe { ncw_state_builtin(ptr::null(), &mut state) }, NcwStatus::NullPointer);

    let bad = CString::new("{\n \"dim\": 4,\n \"rows\": }").unwrap();
    assert_eq!(unsafe { ncw_state_from_json(bad.as_ptr(), &mut state) }, NcwStatus::ParseError);
    assert!(last_error().contains("line 3"), "{}", last_error());

    let mut report = NcwWitnessReport::default();
    assert_eq!(unsafe { ncw_witness(ptr::null(), 0.1, &mut report) }, NcwStatus::NullPointer);

    let sigma = builtin("sigma");
    assert_eq!(unsafe { ncw_witness(sigma, -1.0, &mut report) }, NcwStatus::InvalidArgument);
    assert_eq!(unsafe { ncw_witness(sigma, 0.1, &mut report) }, NcwStatus::Ok);
    assert_eq!(last_error(), "");
    unsafe { ncw_state_free(sigma) };
    unsafe { ncw_state_free(ptr::null_mut()) };
}

#[test]
fn status_messages_are_static_strings() {
    for status in [NcwStatus::Ok, NcwStatus::ParseError, NcwStatus::Panic] {
        let msg = unsafe { CStr::from_ptr(ncw_status_message(status)) };
        assert!(!msg.to_bytes().is_empty());
    }
}

#[test]
fn json_buffer_protocol() {
    let bell = builtin("bell");
    let mut needed = 0usize;
    let status = unsafe { ncw_state_to_json(bell, ptr::null_mut(), 0, &mut needed) };
    assert_eq!(status, NcwStatus::BufferTooSmall);
    assert!(needed > 1);
    let mut buf = vec![0 as std::ffi::c_char; needed];
    assert_eq!(unsafe { ncw_state_to_json(bell, buf.as_mut_ptr(), needed, &mut needed) }, NcwStatus::Ok);

    let mut back = ptr::null_mut();
    assert_eq!(unsafe { ncw_state_from_json(buf.as_ptr(), &mut back) }, NcwStatus::Ok);
    let mut f = 0.0;
    assert_eq!(unsafe { ncw_fidelity(bell, back, &mut f) }, NcwStatus::Ok);
    assert!((f - 1.0).abs() < 1e-12);
    unsafe {
        ncw_state_free(back);
        ncw_state_free(bell);
    }
}

#[test]
fn evolution_and_tomography() {
    let sigma = builtin("sigma");
    let spec = NcwChannelSpec {
        t1_q1: 1.0e9,
        t2_q1: 0.3,
        t1_q2: 1.0e9,
        t2_q2: 0.1,
        j_coupling: 215.0,
        include_j: false,
    };
    let mut evolved = ptr::null_mut();
    assert_eq!(unsafe { ncw_evolve(sigma, &spec, 0.1, &mut evolved) }, NcwStatus::Ok);
    let mut report = NcwWitnessReport::default();
    assert_eq!(unsafe { ncw_witness(evolved, 0.182138, &mut report) }, NcwStatus::Ok);
    let expected = (1.0 + (-1.0f64).exp()) / 4.0;
    assert!((report.factor_1plus - expected).abs() < 1e-9);

    let mut record = ptr::null_mut();
    assert_eq!(unsafe { ncw_tomo_measure(evolved, 0.0, 0, &mut record) }, NcwStatus::Ok);
    let label = CString::new("ZI").unwrap();
    let mut zi = f64::NAN;
    assert_eq!(unsafe { ncw_record_value(record, label.as_ptr(), &mut zi) }, NcwStatus::Ok);
    assert!(zi.is_finite());
    let mut rebuilt = ptr::null_mut();
    assert_eq!(unsafe { ncw_tomo_reconstruct(record, &mut rebuilt) }, NcwStatus::Ok);
    let mut f = 0.0;
    assert_eq!(unsafe { ncw_fidelity(evolved, rebuilt, &mut f) }, NcwStatus::Ok);
    assert!(f > 1.0 - 1e-9);
    unsafe {
        ncw_state_free(rebuilt);
        ncw_record_free(record);
        ncw_state_free(evolved);
        ncw_state_free(sigma);
    }
}

#[test]
fn header_declares_the_exported_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/ncwitness.h")).unwrap();
    for name in [
        "typedef struct NcwState NcwState",
        "NCW_STATUS_BUFFER_TOO_SMALL",
        "ncw_state_builtin",
        "ncw_state_from_entries",
        "ncw_state_to_json",
        "ncw_witness",
        "ncw_discord",
        "ncw_evolve",
        "ncw_tomo_reconstruct",
        "ncw_record_free",
        "ncw_last_error",
    ] {
        assert!(header.contains(name), "{name}");
    }
}
