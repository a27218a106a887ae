use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use tatm_ffi::*;

const CONFIG: &str = r#"
[scenario.gg10]
atomic = "gg"
field = "fock"
n = 1
m = 0
t_max = 25.0
samples = 2501
"#;

fn last_error() -> String {
    unsafe {
        let need = tatm_last_error(ptr::null_mut(), 0);
        let mut buf = vec![0u8; need];
        tatm_last_error(buf.as_mut_ptr().cast(), buf.len());
        CStr::from_bytes_until_nul(&buf).unwrap().to_string_lossy().into_owned()
    }
}

fn open(config: &str, name: &str) -> (TatmStatus, *mut TatmTrajectory) {
    let (c, n) = (CString::new(config).unwrap(), CString::new(name).unwrap());
    let mut h = ptr::null_mut();
    let s = unsafe { tatm_trajectory_new(c.as_ptr(), n.as_ptr(), &mut h) };
    (s, h)
}

#[test]
fn gg10_round_trip() {
    let (s, h) = open(CONFIG, "gg10");
    assert_eq!(s, TatmStatus::Ok, "{}", last_error());
    let times = [0.0, 0.4, 1.3, 2.0];
    let mut c = [0.0; 4];
    unsafe {
        assert_eq!(tatm_trajectory_concurrence(h, times.as_ptr(), 4, c.as_mut_ptr()), TatmStatus::Ok);
    }
    for (t, c) in times.iter().zip(c) {
        assert!((c - 0.5 * (2.0 * t).sin().powi(2)).abs() < 1e-10);
    }
    let mut rho = [0.0; 32];
    unsafe {
        assert_eq!(tatm_trajectory_atomic_state(h, 0.4, rho.as_mut_ptr()), TatmStatus::Ok);
    }
    let trace: f64 = (0..4).map(|i| rho[2 * (5 * i)]).sum();
    assert!((trace - 1.0).abs() < 1e-12);
    let mut cc = 0.0;
    unsafe {
        assert_eq!(tatm_concurrence(rho.as_ptr(), &mut cc), TatmStatus::Ok);
    }
    assert!((cc - c[1]).abs() < 1e-12);

    let mut v = TatmVerdict {
        label: TatmLabel::None,
        generated: false,
        first_generation_time: 0.0,
        max_value: 0.0,
        dead_intervals: 0,
        isolated_zeros: 0,
        horizon: 0.0,
    };
    unsafe {
        assert_eq!(tatm_trajectory_classify(h, &mut v), TatmStatus::Ok, "{}", last_error());
        tatm_trajectory_free(h);
    }
    assert_eq!(v.label, TatmLabel::DeadInstants);
    assert!(v.generated);
    assert!(v.isolated_zeros > 10);
}

#[test]
fn errors_carry_codes_and_messages() {
    let (s, h) = open("[scenario.x]\nbogus = 1\n", "x");
    assert_eq!(s, TatmStatus::Config);
    assert!(h.is_null());
    assert!(last_error().contains("bogus"));

    let (s, _) = open(CONFIG, "missing");
    assert_eq!(s, TatmStatus::Config);
    assert!(last_error().contains("missing"));

    let too_small = "[scenario.c]\natomic = \"gg\"\nfield = \"coherent\"\nalpha_re = 3.0\nn_max = 3\n";
    let (s, _) = open(too_small, "c");
    assert_eq!(s, TatmStatus::Physics, "{}", last_error());

    let mut out = ptr::null_mut();
    let s = unsafe { tatm_trajectory_new(ptr::null(), ptr::null(), &mut out) };
    assert_eq!(s, TatmStatus::NullPointer);
    unsafe { tatm_trajectory_free(ptr::null_mut()) };

    let bad = [0.0f64; 32];
    let mut c = 0.0;
    assert_eq!(unsafe { tatm_concurrence(bad.as_ptr(), &mut c) }, TatmStatus::Physics);
}

#[test]
fn version_is_a_c_string() {
    let v = unsafe { CStr::from_ptr(tatm_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_api_and_compiles() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/tatm.h");
    let text = std::fs::read_to_string(&header).expect("build script writes the header");
    for f in [
        "tatm_trajectory_new",
        "tatm_trajectory_free",
        "tatm_trajectory_concurrence",
        "tatm_trajectory_classify",
        "tatm_last_error",
        "typedef struct TatmTrajectory TatmTrajectory",
    ] {
        assert!(text.contains(f), "header lacks {f}");
    }
    let Ok(out) = Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c"])
        .arg(&header)
        .output()
    else {
        eprintln!("no C compiler; skipping syntax check");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
