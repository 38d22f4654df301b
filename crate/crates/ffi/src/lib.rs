//! C ABI over the `sonine` library.
//!
//! Kernels and solutions are opaque handles created and freed here.
//! Matrices cross the boundary as row-major `double` buffers whose length
//! the caller passes explicitly. Every fallible call returns a
//! [`SonineStatus`]; the message for the most recent failure on the calling
//! thread is available from [`sonine_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sonine::{solve_duality, solve_sonine, Error, Grid, KernelSpec, Regular, SymMatrix};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SonineStatus {
    Ok = 0,
    InvalidArgument = 1,
    OutOfRange = 2,
    Singular = 3,
    Unsupported = 4,
    NumericalFailure = 5,
    NullPointer = 6,
    Parse = 7,
    Panic = 8,
}

/// A validated kernel description.
pub struct SonineKernel {
    spec: KernelSpec,
}

/// A solved `X = B·δ + F`, with `F` sampled at the grid nodes.
pub struct SonineSolution {
    rank: usize,
    nodes: Vec<f64>,
    /// `rank²` row-major entries per node.
    values: Vec<f64>,
    atom: Vec<f64>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    // interior NULs would truncate the message; replace them
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).unwrap_or_default());
}

fn fail(status: SonineStatus, msg: impl Into<String>) -> SonineStatus {
    set_error(msg);
    status
}

fn status_of(e: &Error) -> SonineStatus {
    match e {
        Error::InvalidArgument(_) => SonineStatus::InvalidArgument,
        Error::OutOfRange { .. } => SonineStatus::OutOfRange,
        Error::SingularMatrix { .. } | Error::SingularLeadingMoment { .. } | Error::SingularTransform { .. } => {
            SonineStatus::Singular
        }
        Error::Unsupported(_) | Error::UnsupportedKernel(_) => SonineStatus::Unsupported,
        _ => SonineStatus::NumericalFailure,
    }
}

/// Runs `f`, turning library errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), SonineStatus>) -> SonineStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SonineStatus::Ok,
        Ok(Err(status)) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(SonineStatus::Panic, format!("panic: {msg}"))
        }
    }
}

fn lib<T>(r: sonine::Result<T>) -> Result<T, SonineStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, SonineStatus> {
    p.as_ref()
        .ok_or_else(|| fail(SonineStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out_slice<'a>(p: *mut f64, len: usize, need: usize, what: &str) -> Result<&'a mut [f64], SonineStatus> {
    if p.is_null() {
        return Err(fail(SonineStatus::NullPointer, format!("{what} is null")));
    }
    if len < need {
        return Err(fail(
            SonineStatus::InvalidArgument,
            format!("{what} holds {len} values, {need} needed"),
        ));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

fn write_matrix(m: &SymMatrix, out: &mut [f64]) {
    let k = m.rank();
    for i in 0..k {
        for j in 0..k {
            out[i * k + j] = m.get(i, j);
        }
    }
}

/// Parses a JSON kernel description into a new handle.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sonine_kernel_from_json(json: *const c_char, out: *mut *mut SonineKernel) -> SonineStatus {
    guard(|| {
        if json.is_null() || out.is_null() {
            return Err(fail(SonineStatus::NullPointer, "json and out must not be null"));
        }
        *out = ptr::null_mut();
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| fail(SonineStatus::Parse, format!("kernel JSON is not UTF-8: {e}")))?;
        let spec = KernelSpec::from_json(text).map_err(|e| fail(SonineStatus::Parse, e.to_string()))?;
        *out = Box::into_raw(Box::new(SonineKernel { spec }));
        Ok(())
    })
}

/// Releases a kernel handle. Null is ignored.
///
/// # Safety
/// `kernel` must come from [`sonine_kernel_from_json`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sonine_kernel_free(kernel: *mut SonineKernel) {
    if !kernel.is_null() {
        drop(Box::from_raw(kernel));
    }
}

/// Matrix size `m` of the kernel; values are `m × m`.
///
/// # Safety
/// Pointers must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn sonine_kernel_rank(kernel: *const SonineKernel, out: *mut usize) -> SonineStatus {
    guard(|| {
        let k = deref(kernel, "kernel")?;
        if out.is_null() {
            return Err(fail(SonineStatus::NullPointer, "out is null"));
        }
        *out = k.spec.rank();
        Ok(())
    })
}

/// Writes `A(t)` row-major into `out[0..m²]`.
///
/// # Safety
/// `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn sonine_kernel_eval(
    kernel: *const SonineKernel,
    t: f64,
    out: *mut f64,
    len: usize,
) -> SonineStatus {
    guard(|| {
        let k = deref(kernel, "kernel")?;
        let m = k.spec.rank();
        let buf = out_slice(out, len, m * m, "out")?;
        write_matrix(&lib(k.spec.eval(t))?, buf);
        Ok(())
    })
}

/// Writes the closed-form Laplace transform `Ã(p)` row-major into `out[0..m²]`.
///
/// # Safety
/// `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn sonine_kernel_laplace(
    kernel: *const SonineKernel,
    p: f64,
    out: *mut f64,
    len: usize,
) -> SonineStatus {
    guard(|| {
        let k = deref(kernel, "kernel")?;
        let m = k.spec.rank();
        let buf = out_slice(out, len, m * m, "out")?;
        write_matrix(&lib(k.spec.laplace(p))?, buf);
        Ok(())
    })
}

unsafe fn solve_with(
    kernel: *const SonineKernel,
    horizon: f64,
    cells: usize,
    out: *mut *mut SonineSolution,
    solver: fn(&KernelSpec, &Grid) -> sonine::Result<sonine::DeltaPlusFunction>,
) -> SonineStatus {
    guard(|| {
        let k = deref(kernel, "kernel")?;
        if out.is_null() {
            return Err(fail(SonineStatus::NullPointer, "out is null"));
        }
        *out = ptr::null_mut();
        let grid = lib(Grid::uniform(horizon, cells))?;
        let x = lib(solver(&k.spec, &grid))?;
        let m = x.rank();
        let mut values = Vec::with_capacity(grid.len() * m * m);
        for (i, &t) in grid.nodes().iter().enumerate() {
            match x.regular() {
                Regular::Sampled(f) => values.extend(f.value(i).transpose().iter()),
                Regular::Kernel(r) => {
                    let v = lib(r.eval(t))?;
                    values.extend(v.as_matrix().transpose().iter());
                }
            }
        }
        let mut atom = vec![0.0; m * m];
        write_matrix(x.atom(), &mut atom);
        *out = Box::into_raw(Box::new(SonineSolution {
            rank: m,
            nodes: grid.nodes().to_vec(),
            values,
            atom,
        }));
        Ok(())
    })
}

/// Solves `A∗X = I` on a uniform grid of `cells` cells over `(0, horizon]`.
///
/// # Safety
/// `out` must be a valid pointer; free the result with [`sonine_solution_free`].
#[no_mangle]
pub unsafe extern "C" fn sonine_solve_sonine(
    kernel: *const SonineKernel,
    horizon: f64,
    cells: usize,
    out: *mut *mut SonineSolution,
) -> SonineStatus {
    solve_with(kernel, horizon, cells, out, solve_sonine)
}

/// Solves `A∗X = t·I` on a uniform grid of `cells` cells over `(0, horizon]`.
///
/// # Safety
/// `out` must be a valid pointer; free the result with [`sonine_solution_free`].
#[no_mangle]
pub unsafe extern "C" fn sonine_solve_duality(
    kernel: *const SonineKernel,
    horizon: f64,
    cells: usize,
    out: *mut *mut SonineSolution,
) -> SonineStatus {
    solve_with(kernel, horizon, cells, out, solve_duality)
}

/// Releases a solution handle. Null is ignored.
///
/// # Safety
/// `solution` must come from a solver call and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sonine_solution_free(solution: *mut SonineSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}

/// Number of nodes and matrix size of a solution.
///
/// # Safety
/// Pointers must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn sonine_solution_shape(
    solution: *const SonineSolution,
    nodes: *mut usize,
    rank: *mut usize,
) -> SonineStatus {
    guard(|| {
        let s = deref(solution, "solution")?;
        if nodes.is_null() || rank.is_null() {
            return Err(fail(SonineStatus::NullPointer, "nodes and rank must not be null"));
        }
        *nodes = s.nodes.len();
        *rank = s.rank;
        Ok(())
    })
}

/// Copies the δ-atom `B` row-major into `out[0..m²]`.
///
/// # Safety
/// `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn sonine_solution_atom(solution: *const SonineSolution, out: *mut f64, len: usize) -> SonineStatus {
    guard(|| {
        let s = deref(solution, "solution")?;
        out_slice(out, len, s.atom.len(), "out")?[..s.atom.len()].copy_from_slice(&s.atom);
        Ok(())
    })
}

/// Copies the node times into `times[0..n]` and the regular part, node by
/// node and row-major within a node, into `values[0..n·m²]`.
///
/// # Safety
/// `times` and `values` must point to `times_len` and `values_len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn sonine_solution_samples(
    solution: *const SonineSolution,
    times: *mut f64,
    times_len: usize,
    values: *mut f64,
    values_len: usize,
) -> SonineStatus {
    guard(|| {
        let s = deref(solution, "solution")?;
        out_slice(times, times_len, s.nodes.len(), "times")?[..s.nodes.len()].copy_from_slice(&s.nodes);
        out_slice(values, values_len, s.values.len(), "values")?[..s.values.len()].copy_from_slice(&s.values);
        Ok(())
    })
}

/// Message for the most recent failed call on this thread, or an empty
/// string if none has failed.
/// The pointer stays valid until the next call into this library on the
/// same thread.
#[no_mangle]
pub extern "C" fn sonine_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn library_errors_map_to_statuses() {
        assert_eq!(status_of(&Error::SingularMatrix { minor: 2 }), SonineStatus::Singular);
        assert_eq!(status_of(&Error::UnsupportedKernel("k".into())), SonineStatus::Unsupported);
        let quad = Error::Quadrature { a: 0.0, b: 1.0, estimate: 0.0, error: 1.0 };
        assert_eq!(status_of(&quad), SonineStatus::NumericalFailure);
    }

    #[test]
    fn panics_become_a_status() {
        assert_eq!(guard(|| panic!("boom")), SonineStatus::Panic);
        let msg = unsafe { CStr::from_ptr(sonine_last_error_message()) };
        assert_eq!(msg.to_str().unwrap(), "panic: boom");
    }

    #[test]
    fn matrices_are_written_row_major() {
        let m = SymMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 3.0]]).unwrap();
        let mut out = [0.0; 4];
        write_matrix(&m, &mut out);
        assert_eq!(out, [1.0, 2.0, 2.0, 3.0]);
    }
}
