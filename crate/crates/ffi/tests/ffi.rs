use ncgf_ffi::*;
use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::ptr;

fn chart(group: NcgfGroup) -> *mut NcgfChart {
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { ncgf_chart_new(group, 1, NcgfChartKind::Exponential, &mut c) }, NcgfStatus::Ok);
    c
}

fn last_error() -> String {
    let p = ncgf_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(ncgf_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn chart_errors_are_reported() {
    let mut c = ptr::null_mut();
    let s = unsafe { ncgf_chart_new(NcgfGroup::U1, 1, NcgfChartKind::Trace, &mut c) };
    assert_eq!(s, NcgfStatus::UnsupportedChart);
    assert!(c.is_null());
    assert!(last_error().contains("chart"));
    let s = unsafe { ncgf_chart_new(NcgfGroup::Su2, 0, NcgfChartKind::Exponential, ptr::null_mut()) };
    assert_eq!(s, NcgfStatus::NullPointer);
    let c = chart(NcgfGroup::Su2);
    assert_eq!(unsafe { ncgf_chart_dim(c) }, 3);
    assert!(ncgf_last_error_message().is_null());
    let mut v = 1.0;
    assert_eq!(unsafe { ncgf_chart_validate(c, 100, 3, &mut v) }, NcgfStatus::Ok);
    assert!(v <= 1e-6);
    unsafe { ncgf_chart_free(c) };
    unsafe { ncgf_chart_free(ptr::null_mut()) };
}

#[test]
fn plane_wave_at_identity_is_one() {
    let c = chart(NcgfGroup::So3);
    let (z, x) = ([0.0; 3], [0.3, -1.0, 2.0]);
    let mut out = [0.0; 2];
    assert_eq!(unsafe { ncgf_plane_wave(c, z.as_ptr(), x.as_ptr(), out.as_mut_ptr()) }, NcgfStatus::Ok);
    assert_eq!(out, [1.0, 0.0]);
    let far = [4.0, 0.0, 0.0];
    assert_eq!(unsafe { ncgf_plane_wave(c, far.as_ptr(), x.as_ptr(), out.as_mut_ptr()) }, NcgfStatus::OutOfRange);
    unsafe { ncgf_chart_free(c) };
}

#[test]
fn transform_round_trip_and_star_product() {
    let c = chart(NcgfGroup::U1);
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { ncgf_grid_new(c, 64, 0.0, &mut g) }, NcgfStatus::Ok);
    let n = unsafe { ncgf_grid_len(g) };
    assert_eq!(n, 64);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    unsafe {
        assert_eq!(ncgf_grid_nodes(g, nodes.as_mut_ptr(), n), NcgfStatus::Ok);
        assert_eq!(ncgf_grid_weights(g, weights.as_mut_ptr(), n), NcgfStatus::Ok);
        assert_eq!(ncgf_grid_weights(g, weights.as_mut_ptr(), n + 1), NcgfStatus::LengthMismatch);
    }
    assert!((weights.iter().sum::<f64>() - 2.0 * std::f64::consts::PI).abs() < 1e-12);
    let values: Vec<f64> = nodes.iter().flat_map(|t| [t.cos(), t.sin()]).collect();
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { ncgf_transform(g, values.as_ptr(), 2 * n, &mut f) }, NcgfStatus::Ok);
    let mut back = vec![0.0; 2 * n];
    assert_eq!(unsafe { ncgf_inverse_transform(f, back.as_mut_ptr(), 2 * n) }, NcgfStatus::Ok);
    assert!(back.iter().zip(&values).all(|(a, b)| (a - b).abs() < 1e-12));
    // e^{iθ} ⋆ e^{iθ} = ∫ e^{iφ} e^{i(θ−φ)} dφ = 2π e^{iθ}; its transform at X = 0 vanishes
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { ncgf_star_product(f, f, &mut p) }, NcgfStatus::Ok);
    let mut out = [1.0; 2];
    assert_eq!(unsafe { ncgf_dual_evaluate(p, [0.0].as_ptr(), out.as_mut_ptr()) }, NcgfStatus::Ok);
    assert!(out[0].abs() < 1e-10 && out[1].abs() < 1e-10, "{out:?}");
    assert_eq!(unsafe { ncgf_star_product(f, ptr::null(), &mut p) }, NcgfStatus::NullPointer);
    unsafe {
        ncgf_dual_free(p);
        ncgf_dual_free(f);
        ncgf_grid_free(g);
        ncgf_chart_free(c);
    }
}

#[test]
fn free_kernel_matches_heat_kernel() {
    let c = chart(NcgfGroup::U1);
    let mut k = ptr::null_mut();
    let s = unsafe { ncgf_propagate_free(c, 0.5 / 64.0, 64, NcgfScheme::ImaginaryTime, 257, 0.0, &mut k) };
    assert_eq!(s, NcgfStatus::Ok);
    let n = unsafe { ncgf_kernel_len(k) };
    let mut row = vec![0.0; 2 * n];
    assert_eq!(unsafe { ncgf_kernel_values(k, row.as_mut_ptr(), 2 * n) }, NcgfStatus::Ok);
    let mut exact = 0.0;
    assert_eq!(unsafe { ncgf_heat_kernel(NcgfGroup::U1, 0.0, 0.5, &mut exact) }, NcgfStatus::Ok);
    let peak = row.chunks(2).map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
    assert!((peak - exact).abs() < 1e-2 * exact, "{peak} {exact}");
    let mut cj = 0.0;
    assert_eq!(unsafe { ncgf_kernel_character_coefficient(k, 1, &mut cj) }, NcgfStatus::UnsupportedGroup);
    unsafe {
        ncgf_kernel_free(k);
        ncgf_chart_free(c);
    }
    let mut v = 0.0;
    assert_eq!(unsafe { ncgf_heat_kernel(NcgfGroup::Rd, 0.0, 1.0, &mut v) }, NcgfStatus::UnsupportedGroup);
}

#[test]
fn run_config_reports_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let json = format!(r#"{{"command": "validate", "group": "u1", "out": {:?}}}"#, dir.path());
    let json = CString::new(json).unwrap();
    let mut code = -1;
    assert_eq!(unsafe { ncgf_run_config(json.as_ptr(), &mut code) }, NcgfStatus::Ok);
    assert_eq!(code, 0);
    assert!(dir.path().join("report.json").exists());
    let bad = CString::new(r#"{"command": "validate", "group": "g2"}"#).unwrap();
    assert_eq!(unsafe { ncgf_run_config(bad.as_ptr(), &mut code) }, NcgfStatus::InvalidConfig);
    assert_eq!(unsafe { ncgf_run_config(ptr::null(), &mut code) }, NcgfStatus::NullPointer);
}

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/ncgf.h")
}

#[test]
fn header_declares_every_export() {
    let text = std::fs::read_to_string(header()).unwrap();
    let src = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() > 15);
    for name in exports {
        assert!(text.contains(&format!("{name}(")), "{name} missing from header");
    }
}

/// Compiles and runs tests/c/smoke.c against the static library when a C
/// compiler is available.
#[test]
fn c_program_links_and_runs() {
    let Ok(exe) = std::env::current_exe() else { return };
    let profile_dir = exe.parent().and_then(Path::parent).unwrap();
    let lib = profile_dir.join("libncgf_ffi.a");
    if !lib.exists() || std::process::Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no static library or C compiler");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let bin = dir.path().join("smoke");
    let status = std::process::Command::new("cc")
        .arg(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/c/smoke.c"))
        .arg("-I")
        .arg(header().parent().unwrap())
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = std::process::Command::new(&bin).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with(env!("CARGO_PKG_VERSION")));
}
