use std::ffi::{c_char, CStr};
use std::path::Path;
use std::process::Command;
use std::ptr;

use linbandit_ffi::*;

fn conf() -> LbConfidence {
    LbConfidence {
        nu: 0.5,
        lambda: 1.0,
        s_bound: 1.0,
        delta: 0.05,
    }
}

fn last_error() -> String {
    let mut buf = [0 as c_char; 256];
    unsafe {
        lb_last_error_message(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

fn new_policy(kind: LbPolicyKind, inference: LbInference, dim: usize) -> *mut LbPolicy {
    let mut p = ptr::null_mut();
    let s = unsafe { lb_policy_new(kind, inference, dim, 100, conf(), 0.9, 7, &mut p) };
    assert_eq!(s, LbStatus::Ok, "{}", last_error());
    assert!(!p.is_null());
    p
}

#[test]
fn policy_round_trip() {
    for kind in [LbPolicyKind::LinTs, LbPolicyKind::LinBucb] {
        for inf in [LbInference::Exact, LbInference::Approximate] {
            let p = new_policy(kind, inf, 2);
            let arms = [1.0, 0.0, 0.0, 1.0];
            let mut idx = usize::MAX;
            for _ in 0..20 {
                assert_eq!(
                    unsafe { lb_policy_select(p, arms.as_ptr(), 2, 2, &mut idx) },
                    LbStatus::Ok
                );
                assert!(idx < 2);
                let reward = if idx == 0 { 1.0 } else { 0.0 };
                assert_eq!(
                    unsafe { lb_policy_update(p, arms[2 * idx..].as_ptr(), 2, reward) },
                    LbStatus::Ok
                );
            }
            let mut step = 0;
            assert_eq!(unsafe { lb_policy_step(p, &mut step) }, LbStatus::Ok);
            assert_eq!(step, 20);
            let mut est = [0.0; 2];
            assert_eq!(unsafe { lb_policy_estimate(p, est.as_mut_ptr(), 2) }, LbStatus::Ok);
            assert!(est.iter().all(|v| v.is_finite()));
            unsafe { lb_policy_free(p) };
        }
    }
}

#[test]
fn first_update_matches_direct_inverse() {
    // V = I + e1 e1ᵀ, b = e1 → θ̂ = (0.5, 0).
    let p = new_policy(LbPolicyKind::LinTs, LbInference::Exact, 2);
    assert_eq!(
        unsafe { lb_policy_update(p, [1.0, 0.0].as_ptr(), 2, 1.0) },
        LbStatus::Ok
    );
    let mut est = [0.0; 2];
    unsafe { lb_policy_estimate(p, est.as_mut_ptr(), 2) };
    assert_eq!(est, [0.5, 0.0]);
    unsafe { lb_policy_free(p) };
}

#[test]
fn errors_are_reported_not_panicked() {
    let mut p = ptr::null_mut();
    let s = unsafe { lb_policy_new(LbPolicyKind::LinBucb, LbInference::Exact, 2, 10, conf(), 1.5, 0, &mut p) };
    assert_eq!(s, LbStatus::InvalidArgument);
    assert!(p.is_null());
    assert!(last_error().contains("gamma"));

    let p = new_policy(LbPolicyKind::LinTs, LbInference::Exact, 3);
    let mut idx = 0;
    let arms = [0.0; 4];
    assert_eq!(
        unsafe { lb_policy_select(p, arms.as_ptr(), 2, 2, &mut idx) },
        LbStatus::DimensionMismatch
    );
    assert_eq!(
        unsafe { lb_policy_select(p, ptr::null(), 2, 3, &mut idx) },
        LbStatus::NullPointer
    );
    assert_eq!(
        unsafe { lb_policy_update(p, [0.1, 0.2, 0.3].as_ptr(), 3, f64::NAN) },
        LbStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { lb_policy_select(p, arms.as_ptr(), 0, 3, &mut idx) },
        LbStatus::InvalidArgument
    );
    unsafe { lb_policy_free(p) };
    unsafe { lb_policy_free(ptr::null_mut()) };
    let mut out = 0.0;
    assert_eq!(unsafe { lb_beta(conf(), 0, 2, ptr::null_mut()) }, LbStatus::NullPointer);
    assert_eq!(unsafe { lb_norm_quantile(1.0, &mut out) }, LbStatus::InvalidArgument);
}

#[test]
fn error_message_length_query() {
    let mut out = 0.0;
    assert_eq!(unsafe { lb_norm_quantile(-1.0, &mut out) }, LbStatus::InvalidArgument);
    let n = unsafe { lb_last_error_message(ptr::null_mut(), 0) };
    assert_eq!(n, last_error().len());
    let mut tiny = [1 as c_char; 4];
    unsafe { lb_last_error_message(tiny.as_mut_ptr(), tiny.len()) };
    assert_eq!(tiny[3], 0);
    // Success clears the message.
    assert_eq!(unsafe { lb_norm_quantile(0.5, &mut out) }, LbStatus::Ok);
    assert_eq!(unsafe { lb_last_error_message(ptr::null_mut(), 0) }, 0);
}

#[test]
fn scalar_functions_match_reference_values() {
    let mut out = 0.0;
    unsafe { lb_norm_quantile(0.9, &mut out) };
    assert!((out - 1.281_551_565_544_6).abs() < 1e-9);

    // β_0 = ν√(2 ln(1/δ)) + √λ S.
    unsafe { lb_beta(conf(), 0, 4, &mut out) };
    assert!((out - (0.5 * (2.0 * 20f64.ln()).sqrt() + 1.0)).abs() < 1e-12);

    // KL(N(0,1) ‖ N(1,1)) = 1/2.
    let (m1, m2, c) = ([0.0], [1.0], [1.0]);
    let s = unsafe { lb_alpha_divergence_gaussian(1, m1.as_ptr(), c.as_ptr(), m2.as_ptr(), c.as_ptr(), 1.0, &mut out) };
    assert_eq!(s, LbStatus::Ok);
    assert!((out - 0.5).abs() < 1e-12);
    // Order 2 with σ2² < σ1²/2 diverges.
    let (c1, c2) = ([1.0], [0.4]);
    let s =
        unsafe { lb_alpha_divergence_gaussian(1, m1.as_ptr(), c1.as_ptr(), m1.as_ptr(), c2.as_ptr(), 2.0, &mut out) };
    assert_eq!(s, LbStatus::Infinite);
    assert_eq!(out, f64::INFINITY);

    // γ = 0.9, ε = 0.1, α = 2: base 1.2, so 0.1 − 0.01/1.2.
    assert_eq!(
        unsafe { lb_quantile_shift_bound(0.9, 0.1, 2.0, &mut out) },
        LbStatus::Ok
    );
    assert!((out - (0.1 - 0.01 / 1.2)).abs() < 1e-12);
    assert_eq!(
        unsafe { lb_quantile_shift_bound(0.9, 0.1, 0.5, &mut out) },
        LbStatus::InvalidArgument
    );
}

#[test]
fn version_is_crate_version() {
    let v = unsafe { CStr::from_ptr(lb_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_entry_point() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/linbandit.h")).unwrap();
    for f in [
        "lb_policy_new",
        "lb_policy_free",
        "lb_policy_select",
        "lb_policy_update",
        "lb_policy_estimate",
        "lb_policy_step",
        "lb_beta",
        "lb_norm_quantile",
        "lb_alpha_divergence_gaussian",
        "lb_quantile_shift_bound",
        "lb_last_error_message",
        "lb_version",
    ] {
        assert!(header.contains(&format!("{f}(")), "{f} missing from header");
    }
    assert!(header.contains("typedef struct LbPolicy LbPolicy;"));
}

#[test]
fn header_compiles_as_c() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let Ok(status) = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(dir.join("include"))
        .arg(dir.join("tests/smoke.c"))
        .status()
    else {
        eprintln!("no C compiler on PATH; skipping");
        return;
    };
    assert!(status.success());
}
