//! C ABI over `ncgf`.
//!
//! Objects are opaque handles created by `ncgf_*_new` (or returned through
//! an out-pointer) and released with the matching `ncgf_*_free`. Every
//! fallible call returns an [`NcgfStatus`]; on failure
//! [`ncgf_last_error_message`] describes the error. Complex values are
//! passed as interleaved `re, im` pairs of doubles.

#![allow(clippy::missing_safety_doc)]

use ncgf::cli::{execute, RunConfig};
use ncgf::lie::{AlgebraVector, Chart, ChartKind, LieGroup};
use ncgf::noncomm::{fourier_transform, inverse_transform, plane_wave, star_product, DualFunction, GroupFunction};
use ncgf::oracle::{su2_heat_kernel_at_angle, u1_heat_kernel, SpectralTruncation};
use ncgf::propagator::{propagate, GridSpec, Kernel, PropagatorConfig};
use ncgf::quadrature::GroupGrid;
use ncgf::quantum::{free_particle_symbol, quantum_correct};
use ncgf::{Error, Scheme};
use num_complex::Complex64;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

/// Result codes. `Ok` is 0; the others mirror the library error kinds.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NcgfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Panic = 3,
    GroupMismatch = 10,
    CutLocus = 11,
    OutOfDomain = 12,
    OutOfRange = 13,
    LengthMismatch = 14,
    GridMismatch = 15,
    UnsupportedChart = 16,
    NotRegular = 17,
    OrderOverflow = 18,
    ChartAnomaly = 19,
    TaylorFailure = 20,
    UnsupportedGroup = 21,
    TruncationInadequate = 22,
    NonCentral = 23,
    QuadratureFailure = 24,
    InvalidConfig = 25,
    Io = 26,
    Json = 27,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NcgfGroup {
    Rd = 0,
    U1 = 1,
    Su2 = 2,
    So3 = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NcgfChartKind {
    Exponential = 0,
    Trace = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NcgfScheme {
    ImaginaryTime = 0,
    RealTime = 1,
}

pub struct NcgfChart(Chart);
pub struct NcgfGrid(Arc<GroupGrid>);
pub struct NcgfDual(DualFunction);
pub struct NcgfKernel(Kernel);

enum Failure {
    Null(&'static str),
    Utf8,
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = std::result::Result<(), Failure>;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> NcgfStatus {
    match e {
        Error::GroupMismatch(..) => NcgfStatus::GroupMismatch,
        Error::CutLocus => NcgfStatus::CutLocus,
        Error::OutOfDomain(_) => NcgfStatus::OutOfDomain,
        Error::OutOfRange(_) => NcgfStatus::OutOfRange,
        Error::LengthMismatch { .. } => NcgfStatus::LengthMismatch,
        Error::GridMismatch => NcgfStatus::GridMismatch,
        Error::UnsupportedChart(_) => NcgfStatus::UnsupportedChart,
        Error::NotRegular => NcgfStatus::NotRegular,
        Error::OrderOverflow(_) => NcgfStatus::OrderOverflow,
        Error::ChartAnomaly(_) => NcgfStatus::ChartAnomaly,
        Error::TaylorFailure(_) => NcgfStatus::TaylorFailure,
        Error::UnsupportedGroup(_) => NcgfStatus::UnsupportedGroup,
        Error::TruncationInadequate(_) => NcgfStatus::TruncationInadequate,
        Error::NonCentral => NcgfStatus::NonCentral,
        Error::QuadratureFailure(_) => NcgfStatus::QuadratureFailure,
        Error::InvalidConfig(_) => NcgfStatus::InvalidConfig,
        Error::Io(_) => NcgfStatus::Io,
        Error::Json(_) => NcgfStatus::Json,
    }
}

fn guard(f: impl FnOnce() -> Outcome) -> NcgfStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NcgfStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            NcgfStatus::NullPointer
        }
        Ok(Err(Failure::Utf8)) => {
            set_error("string is not valid UTF-8".into());
            NcgfStatus::InvalidUtf8
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            NcgfStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &'static str) -> std::result::Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &'static str) -> std::result::Result<&'a [f64], Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn slice_mut<'a>(p: *mut f64, len: usize, what: &'static str) -> std::result::Result<&'a mut [f64], Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Outcome {
    if out.is_null() {
        return Err(Failure::Null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

fn check_len(expected: usize, got: usize) -> Outcome {
    if expected != got {
        return Err(Error::LengthMismatch { expected, got }.into());
    }
    Ok(())
}

fn write_complex(out: &mut [f64], values: &[Complex64]) {
    for (pair, v) in out.chunks_exact_mut(2).zip(values) {
        pair[0] = v.re;
        pair[1] = v.im;
    }
}

fn lie_group(group: NcgfGroup, dim: usize) -> LieGroup {
    match group {
        NcgfGroup::Rd => LieGroup::rd(dim),
        NcgfGroup::U1 => LieGroup::u1(),
        NcgfGroup::Su2 => LieGroup::su2(),
        NcgfGroup::So3 => LieGroup::so3(),
    }
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ncgf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL. Valid until
/// the next `ncgf_*` call on the same thread.
#[no_mangle]
pub extern "C" fn ncgf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// `dim` is used for `Rd` only.
#[no_mangle]
pub unsafe extern "C" fn ncgf_chart_new(
    group: NcgfGroup,
    dim: usize,
    kind: NcgfChartKind,
    out: *mut *mut NcgfChart,
) -> NcgfStatus {
    guard(|| {
        let kind = match kind {
            NcgfChartKind::Exponential => ChartKind::Exponential,
            NcgfChartKind::Trace => ChartKind::Trace,
        };
        if group == NcgfGroup::Rd && dim == 0 {
            return Err(Error::InvalidConfig("R^d needs d > 0".into()).into());
        }
        put(out, NcgfChart(Chart::new(lie_group(group, dim), kind)?))
    })
}

#[no_mangle]
pub unsafe extern "C" fn ncgf_chart_free(chart: *mut NcgfChart) {
    if !chart.is_null() {
        drop(Box::from_raw(chart));
    }
}

/// Algebra dimension, 0 for NULL.
#[no_mangle]
pub unsafe extern "C" fn ncgf_chart_dim(chart: *const NcgfChart) -> usize {
    chart.as_ref().map_or(0, |c| c.0.dim())
}

/// Largest violation of the chart conditions over `samples` points.
#[no_mangle]
pub unsafe extern "C" fn ncgf_chart_validate(
    chart: *const NcgfChart,
    samples: usize,
    seed: u64,
    out_violation: *mut f64,
) -> NcgfStatus {
    guard(|| {
        let chart = borrow(chart, "chart")?;
        let out = out_violation.as_mut().ok_or(Failure::Null("out_violation"))?;
        *out = chart.0.validate(samples, seed).max_violation();
        Ok(())
    })
}

/// `E_g(X)` for `g` at chart coordinates `z`; `z`, `x` have `dim` entries,
/// `out` receives one complex number.
#[no_mangle]
pub unsafe extern "C" fn ncgf_plane_wave(
    chart: *const NcgfChart,
    z: *const f64,
    x: *const f64,
    out: *mut f64,
) -> NcgfStatus {
    guard(|| {
        let chart = &borrow(chart, "chart")?.0;
        let d = chart.dim();
        let g = chart.point(&AlgebraVector::new(slice(z, d, "z")?.to_vec()))?;
        let v = plane_wave(chart, &g, &AlgebraVector::new(slice(x, d, "x")?.to_vec()))?;
        write_complex(slice_mut(out, 2, "out")?, &[v]);
        Ok(())
    })
}

/// Midpoint grid with `n` nodes per dimension. `half_width > 0` sets the
/// extent (required on R^d); otherwise the chart range is used.
#[no_mangle]
pub unsafe extern "C" fn ncgf_grid_new(
    chart: *const NcgfChart,
    n: usize,
    half_width: f64,
    out: *mut *mut NcgfGrid,
) -> NcgfStatus {
    guard(|| {
        let chart = &borrow(chart, "chart")?.0;
        let grid = if half_width > 0.0 { GroupGrid::with_extent(chart, n, half_width)? } else { GroupGrid::new(chart, n)? };
        put(out, NcgfGrid(Arc::new(grid)))
    })
}

#[no_mangle]
pub unsafe extern "C" fn ncgf_grid_free(grid: *mut NcgfGrid) {
    if !grid.is_null() {
        drop(Box::from_raw(grid));
    }
}

/// Number of nodes, 0 for NULL.
#[no_mangle]
pub unsafe extern "C" fn ncgf_grid_len(grid: *const NcgfGrid) -> usize {
    grid.as_ref().map_or(0, |g| g.0.len())
}

/// Node coordinates, row-major; `len` must be `ncgf_grid_len * dim`.
#[no_mangle]
pub unsafe extern "C" fn ncgf_grid_nodes(grid: *const NcgfGrid, out: *mut f64, len: usize) -> NcgfStatus {
    guard(|| {
        let grid = &borrow(grid, "grid")?.0;
        let d = grid.chart().dim();
        check_len(grid.len() * d, len)?;
        let out = slice_mut(out, len, "out")?;
        for (row, z) in out.chunks_exact_mut(d).zip(grid.nodes()) {
            row.copy_from_slice(z.components());
        }
        Ok(())
    })
}

/// Haar quadrature weights; `len` must be `ncgf_grid_len`.
#[no_mangle]
pub unsafe extern "C" fn ncgf_grid_weights(grid: *const NcgfGrid, out: *mut f64, len: usize) -> NcgfStatus {
    guard(|| {
        let grid = &borrow(grid, "grid")?.0;
        check_len(grid.len(), len)?;
        slice_mut(out, len, "out")?.copy_from_slice(grid.weights());
        Ok(())
    })
}

/// Transform of the complex node samples `values` (`len = 2 * ncgf_grid_len`).
#[no_mangle]
pub unsafe extern "C" fn ncgf_transform(
    grid: *const NcgfGrid,
    values: *const f64,
    len: usize,
    out: *mut *mut NcgfDual,
) -> NcgfStatus {
    guard(|| {
        let grid = &borrow(grid, "grid")?.0;
        check_len(2 * grid.len(), len)?;
        let v = slice(values, len, "values")?.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect();
        put(out, NcgfDual(fourier_transform(&GroupFunction::new(grid.clone(), v)?)))
    })
}

#[no_mangle]
pub unsafe extern "C" fn ncgf_dual_free(f: *mut NcgfDual) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// `φ̃(X)`; `x` has `dim` entries, `out` receives one complex number.
#[no_mangle]
pub unsafe extern "C" fn ncgf_dual_evaluate(f: *const NcgfDual, x: *const f64, out: *mut f64) -> NcgfStatus {
    guard(|| {
        let f = &borrow(f, "f")?.0;
        let d = f.grid().chart().dim();
        let v = f.evaluate(&AlgebraVector::new(slice(x, d, "x")?.to_vec()));
        write_complex(slice_mut(out, 2, "out")?, &[v]);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ncgf_star_product(
    a: *const NcgfDual,
    b: *const NcgfDual,
    out: *mut *mut NcgfDual,
) -> NcgfStatus {
    guard(|| {
        let p = star_product(&borrow(a, "a")?.0, &borrow(b, "b")?.0)?;
        put(out, NcgfDual(p))
    })
}

/// Group-side node values of `f` (`len = 2 * grid length`).
#[no_mangle]
pub unsafe extern "C" fn ncgf_inverse_transform(f: *const NcgfDual, out: *mut f64, len: usize) -> NcgfStatus {
    guard(|| {
        let g = inverse_transform(&borrow(f, "f")?.0);
        check_len(2 * g.values().len(), len)?;
        write_complex(slice_mut(out, len, "out")?, g.values());
        Ok(())
    })
}

/// Free-particle kernel at `T = epsilon * steps` on a group grid with
/// `n` nodes per dimension (`half_width` as in [`ncgf_grid_new`]).
#[no_mangle]
pub unsafe extern "C" fn ncgf_propagate_free(
    chart: *const NcgfChart,
    epsilon: f64,
    steps: usize,
    scheme: NcgfScheme,
    n: usize,
    half_width: f64,
    out: *mut *mut NcgfKernel,
) -> NcgfStatus {
    guard(|| {
        let chart = &borrow(chart, "chart")?.0;
        let h = quantum_correct(&free_particle_symbol(chart)?)?;
        let scheme = match scheme {
            NcgfScheme::ImaginaryTime => Scheme::ImaginaryTime,
            NcgfScheme::RealTime => Scheme::RealTime,
        };
        let grid = GridSpec::Group {
            n_per_dim: n,
            half_width: (half_width > 0.0).then_some(half_width),
            interpolation: Default::default(),
        };
        let run = propagate(&PropagatorConfig::new(h, epsilon, steps, scheme, grid))?;
        put(out, NcgfKernel(run.kernel))
    })
}

#[no_mangle]
pub unsafe extern "C" fn ncgf_kernel_free(k: *mut NcgfKernel) {
    if !k.is_null() {
        drop(Box::from_raw(k));
    }
}

/// Number of sample points, 0 for NULL.
#[no_mangle]
pub unsafe extern "C" fn ncgf_kernel_len(k: *const NcgfKernel) -> usize {
    k.as_ref().map_or(0, |k| k.0.support().len())
}

/// `K(e, g_k)` at the grid nodes (`len = 2 * ncgf_kernel_len`).
#[no_mangle]
pub unsafe extern "C" fn ncgf_kernel_values(k: *const NcgfKernel, out: *mut f64, len: usize) -> NcgfStatus {
    guard(|| {
        let row = borrow(k, "k")?.0.identity_row()?;
        check_len(2 * row.len(), len)?;
        write_complex(slice_mut(out, len, "out")?, &row);
        Ok(())
    })
}

/// `(1/V) ∫ K χ_j` for `two_j = 2j` (SU(2)/SO(3) central kernels).
#[no_mangle]
pub unsafe extern "C" fn ncgf_kernel_character_coefficient(
    k: *const NcgfKernel,
    two_j: usize,
    out: *mut f64,
) -> NcgfStatus {
    guard(|| {
        let c = borrow(k, "k")?.0.character_coefficient(two_j)?;
        *out.as_mut().ok_or(Failure::Null("out"))? = c;
        Ok(())
    })
}

/// Exact heat kernel `e^{tΔ/2}(θ)` on U(1), SU(2) or SO(3), with `θ` the
/// rotation angle (the U(1) angle on U(1)).
#[no_mangle]
pub unsafe extern "C" fn ncgf_heat_kernel(group: NcgfGroup, theta: f64, t: f64, out: *mut f64) -> NcgfStatus {
    guard(|| {
        let g = lie_group(group, 1);
        let trunc = SpectralTruncation::adequate(&g, t)?;
        let v = match group {
            NcgfGroup::Rd => return Err(Error::UnsupportedGroup("heat kernel by angle on R^d".into()).into()),
            NcgfGroup::U1 => u1_heat_kernel(theta, t, &trunc)?,
            _ => su2_heat_kernel_at_angle(&g, theta, t, &trunc)?,
        };
        *out.as_mut().ok_or(Failure::Null("out"))? = v;
        Ok(())
    })
}

/// Runs a CLI configuration given as JSON (must name its `command`).
/// `out_exit_code` receives 0 when every check passed, 1 otherwise.
#[no_mangle]
pub unsafe extern "C" fn ncgf_run_config(json: *const c_char, out_exit_code: *mut i32) -> NcgfStatus {
    guard(|| {
        if json.is_null() {
            return Err(Failure::Null("json"));
        }
        let text = CStr::from_ptr(json).to_str().map_err(|_| Failure::Utf8)?;
        let config: RunConfig =
            serde_json::from_str(text).map_err(|e| Error::InvalidConfig(format!("config: {e}")))?;
        let report = execute(&config)?;
        *out_exit_code.as_mut().ok_or(Failure::Null("out_exit_code"))? = report.exit_code();
        Ok(())
    })
}
