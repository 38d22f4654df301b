use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use sonine_ffi::*;

fn kernel(json: &str) -> *mut SonineKernel {
    let text = CString::new(json).unwrap();
    let mut k = ptr::null_mut();
    let status = unsafe { sonine_kernel_from_json(text.as_ptr(), &mut k) };
    assert_eq!(status, SonineStatus::Ok, "{}", last_error());
    k
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(sonine_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn evaluates_and_transforms() {
    let k = kernel(
        r#"{"variant": "scalar_times_matrix",
            "params": {"scalar": {"variant": "power_law", "params": {"alpha": 0.5}}},
            "K0": [[2, 1], [1, 2]]}"#,
    );
    let mut rank = 0;
    assert_eq!(unsafe { sonine_kernel_rank(k, &mut rank) }, SonineStatus::Ok);
    assert_eq!(rank, 2);
    let mut buf = [0.0; 4];
    assert_eq!(unsafe { sonine_kernel_laplace(k, 4.0, buf.as_mut_ptr(), 4) }, SonineStatus::Ok);
    // p^{-1/2} K0
    assert_eq!(buf, [1.0, 0.5, 0.5, 1.0]);
    assert_eq!(unsafe { sonine_kernel_eval(k, 1.0, buf.as_mut_ptr(), 4) }, SonineStatus::Ok);
    let g = 1.0 / std::f64::consts::PI.sqrt();
    assert!((buf[0] - 2.0 * g).abs() < 1e-14 && (buf[1] - g).abs() < 1e-14);
    unsafe { sonine_kernel_free(k) };
}

#[test]
fn sonine_solution_of_exponential_has_unit_atom() {
    let k = kernel(r#"{"variant": "exponential", "params": {"lambda": 1}}"#);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { sonine_solve_sonine(k, 1.0, 100, &mut s) }, SonineStatus::Ok);
    let (mut n, mut m) = (0, 0);
    assert_eq!(unsafe { sonine_solution_shape(s, &mut n, &mut m) }, SonineStatus::Ok);
    assert_eq!((n, m), (100, 1));
    let mut atom = [0.0];
    assert_eq!(unsafe { sonine_solution_atom(s, atom.as_mut_ptr(), 1) }, SonineStatus::Ok);
    assert_eq!(atom[0], 1.0);
    let mut times = vec![0.0; n];
    let mut values = vec![0.0; n];
    let status = unsafe { sonine_solution_samples(s, times.as_mut_ptr(), n, values.as_mut_ptr(), n) };
    assert_eq!(status, SonineStatus::Ok);
    assert_eq!(times[n - 1], 1.0);
    assert!(values.iter().all(|v| (v - 1.0).abs() < 1e-3));
    unsafe {
        sonine_solution_free(s);
        sonine_kernel_free(k);
    }
}

#[test]
fn duality_values_are_row_major() {
    let k = kernel(r#"{"variant": "diagonal_of_scalars", "params": {"components": [
        {"variant": "power_law", "params": {"alpha": 0.5}},
        {"variant": "exponential", "params": {"lambda": 1}}]}}"#);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { sonine_solve_duality(k, 1.0, 200, &mut s) }, SonineStatus::Ok, "{}", last_error());
    let mut times = vec![0.0; 200];
    let mut values = vec![0.0; 800];
    unsafe { sonine_solution_samples(s, times.as_mut_ptr(), 200, values.as_mut_ptr(), 800) };
    let last = &values[796..];
    // diag(2√(t/π), 1 + t) at t = 1, off-diagonals zero
    assert!((last[0] - 2.0 / std::f64::consts::PI.sqrt()).abs() < 1e-2);
    assert_eq!((last[1], last[2]), (0.0, 0.0));
    assert!((last[3] - 2.0).abs() < 1e-2);
    unsafe {
        sonine_solution_free(s);
        sonine_kernel_free(k);
    }
}

#[test]
fn failures_carry_status_and_message() {
    let bad = CString::new(r#"{"variant": "power_law", "params": {"alpha": }}"#).unwrap();
    let mut k = ptr::null_mut();
    assert_eq!(unsafe { sonine_kernel_from_json(bad.as_ptr(), &mut k) }, SonineStatus::Parse);
    assert!(k.is_null());
    assert!(last_error().contains("column"));

    assert_eq!(
        unsafe { sonine_kernel_from_json(ptr::null(), &mut k) },
        SonineStatus::NullPointer
    );

    let k = kernel(r#"{"variant": "power_law", "params": {"alpha": 0.5}}"#);
    let mut buf = [0.0; 1];
    assert_eq!(unsafe { sonine_kernel_eval(k, -1.0, buf.as_mut_ptr(), 1) }, SonineStatus::OutOfRange);
    assert_eq!(unsafe { sonine_kernel_eval(k, 1.0, buf.as_mut_ptr(), 0) }, SonineStatus::InvalidArgument);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { sonine_solve_sonine(k, 1.0, 1, &mut s) }, SonineStatus::OutOfRange);
    unsafe { sonine_kernel_free(k) };

    let zero = kernel(r#"{"variant": "constant", "params": {"value": 0}}"#);
    assert_eq!(unsafe { sonine_solve_duality(zero, 1.0, 10, &mut s) }, SonineStatus::Singular);
    assert!(s.is_null());
    unsafe { sonine_kernel_free(zero) };

    let bessel = kernel(r#"{"variant": "bessel_k", "params": {"lambda": 0.5}}"#);
    assert_eq!(unsafe { sonine_solve_duality(bessel, 1.0, 10, &mut s) }, SonineStatus::Unsupported);
    unsafe { sonine_kernel_free(bessel) };

    unsafe {
        sonine_kernel_free(ptr::null_mut());
        sonine_solution_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_the_api_and_compiles() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/sonine.h");
    let text = std::fs::read_to_string(header).expect("build script writes the header");
    for name in [
        "SonineKernel",
        "SonineSolution",
        "SONINE_STATUS_OK",
        "SONINE_STATUS_PANIC",
        "sonine_kernel_from_json",
        "sonine_kernel_free",
        "sonine_kernel_rank",
        "sonine_kernel_eval",
        "sonine_kernel_laplace",
        "sonine_solve_sonine",
        "sonine_solve_duality",
        "sonine_solution_shape",
        "sonine_solution_atom",
        "sonine_solution_samples",
        "sonine_solution_free",
        "sonine_last_error_message",
    ] {
        assert!(text.contains(name), "header lacks {name}");
    }
    // a C compiler, when present, must accept the header as is
    let dir = tempfile_dir();
    let src = dir.join("use_header.c");
    std::fs::write(&src, "#include \"sonine.h\"\nint main(void) { return SONINE_STATUS_OK; }\n").unwrap();
    match Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include"))
        .arg(&src)
        .output()
    {
        Ok(out) => assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr)),
        Err(_) => eprintln!("no C compiler found; skipping the compile check"),
    }
}

fn tempfile_dir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("sonine-capi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
