//! C ABI for the cat2d toolkit: opaque scene handles, integer status codes
//! and a thread-local last-error message. See include/cat2d.h.

use cat2d::fillrad::{filling_radius_estimate, fundamental_cycle, FiniteMetric};
use cat2d::polygon::polygon_domain_distance;
use cat2d::predicates::Point;
use cat2d::scene::{Scene, ScenePayload};
use cat2d::verify::{
    exhaustive_comparison_search, verify_theorem_1_1, SceneRef, SphericalCap, Verdict,
    VerifyBudget,
};
use libc::{c_char, c_double, c_int, size_t};
use std::cell::RefCell;
use std::ffi::{CStr, CString};

pub const CAT2D_OK: c_int = 0;
pub const CAT2D_ERR_NULL: c_int = 1;
pub const CAT2D_ERR_BAD_INPUT: c_int = 2;
pub const CAT2D_ERR_UNSUPPORTED: c_int = 3;
pub const CAT2D_ERR_GEOMETRY: c_int = 4;

pub const CAT2D_VERDICT_CONSISTENT: c_int = 0;
pub const CAT2D_VERDICT_VIOLATION: c_int = 1;
pub const CAT2D_VERDICT_INCONCLUSIVE: c_int = 2;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let sanitized: String = msg.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(sanitized).unwrap());
}

/// Message describing the most recent failure on this thread. The pointer
/// stays valid until the next failing cat2d call on the same thread.
#[no_mangle]
pub extern "C" fn cat2d_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Opaque handle around a parsed scene.
pub struct Cat2dScene {
    scene: Scene,
}

/// Parse a scene from JSON text. On success `*out` owns a new handle that
/// must be released with `cat2d_scene_free`.
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cat2d_scene_load_json(
    json: *const c_char,
    out: *mut *mut Cat2dScene,
) -> c_int {
    if json.is_null() || out.is_null() {
        set_error("null pointer argument");
        return CAT2D_ERR_NULL;
    }
    let text = match CStr::from_ptr(json).to_str() {
        Ok(t) => t,
        Err(_) => {
            set_error("scene JSON is not valid UTF-8");
            return CAT2D_ERR_BAD_INPUT;
        }
    };
    match Scene::from_str(text) {
        Ok(scene) => {
            *out = Box::into_raw(Box::new(Cat2dScene { scene }));
            CAT2D_OK
        }
        Err(e) => {
            set_error(&e.to_string());
            CAT2D_ERR_BAD_INPUT
        }
    }
}

/// Release a scene handle. Passing NULL is a no-op.
///
/// # Safety
/// `scene` must have come from `cat2d_scene_load_json` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn cat2d_scene_free(scene: *mut Cat2dScene) {
    if !scene.is_null() {
        drop(Box::from_raw(scene));
    }
}

/// Run the comparison-inequality verifier. `trials == 0` and `tol <= 0`
/// select the built-in defaults. On success `*verdict` is one of the
/// `CAT2D_VERDICT_*` constants.
///
/// # Safety
/// `scene` must be a live handle and `verdict` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cat2d_verify(
    scene: *const Cat2dScene,
    seed: u64,
    trials: size_t,
    tol: c_double,
    verdict: *mut c_int,
) -> c_int {
    if scene.is_null() || verdict.is_null() {
        set_error("null pointer argument");
        return CAT2D_ERR_NULL;
    }
    let scene = &(*scene).scene;
    let mut budget = VerifyBudget::default();
    if trials > 0 {
        budget.trials = trials;
    }
    if tol > 0.0 {
        budget.tol = tol;
    }
    let result = match &scene.payload {
        ScenePayload::Planar(d) => {
            verify_theorem_1_1(&SceneRef::Planar(d), &scene.kappa, &budget, seed)
                .map(|r| r.verdict)
        }
        ScenePayload::Complex(c) => {
            verify_theorem_1_1(&SceneRef::Complex(c), &scene.kappa, &budget, seed)
                .map(|r| r.verdict)
        }
        ScenePayload::SphericalCap { radius, samples } => SphericalCap::new(*radius, *samples)
            .and_then(|cap| exhaustive_comparison_search(&cap, &scene.kappa, budget.tol))
            .map(|report| {
                if report.pass {
                    Verdict::Consistent
                } else {
                    Verdict::Violation
                }
            }),
    };
    match result {
        Ok(v) => {
            *verdict = match v {
                Verdict::Consistent => CAT2D_VERDICT_CONSISTENT,
                Verdict::Violation => CAT2D_VERDICT_VIOLATION,
                Verdict::Inconclusive => CAT2D_VERDICT_INCONCLUSIVE,
            };
            CAT2D_OK
        }
        Err(e) => {
            set_error(&e.to_string());
            CAT2D_ERR_GEOMETRY
        }
    }
}

/// Intrinsic distance between two points of a plane-domain scene.
///
/// # Safety
/// `scene` must be a live handle and `dist` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cat2d_distance(
    scene: *const Cat2dScene,
    x1: c_double,
    y1: c_double,
    x2: c_double,
    y2: c_double,
    dist: *mut c_double,
) -> c_int {
    if scene.is_null() || dist.is_null() {
        set_error("null pointer argument");
        return CAT2D_ERR_NULL;
    }
    let scene = &(*scene).scene;
    let domain = match &scene.payload {
        ScenePayload::Planar(d) => d,
        _ => {
            set_error("cat2d_distance needs a plane-domain scene");
            return CAT2D_ERR_UNSUPPORTED;
        }
    };
    match polygon_domain_distance(domain, Point::new(x1, y1), Point::new(x2, y2)) {
        Ok((d, _)) => {
            *dist = d;
            CAT2D_OK
        }
        Err(e) => {
            set_error(&e.to_string());
            CAT2D_ERR_GEOMETRY
        }
    }
}

/// Filling-radius estimate for a dense row-major `n x n` distance matrix,
/// taking the fundamental cycle 0-1-...-(n-1)-0.
///
/// # Safety
/// `matrix` must point to `n * n` doubles and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cat2d_filling_radius(
    matrix: *const c_double,
    n: size_t,
    out: *mut c_double,
) -> c_int {
    if matrix.is_null() || out.is_null() {
        set_error("null pointer argument");
        return CAT2D_ERR_NULL;
    }
    let data = std::slice::from_raw_parts(matrix, n * n).to_vec();
    let metric = match FiniteMetric::new(n, data) {
        Ok(m) => m,
        Err(e) => {
            set_error(&e.to_string());
            return CAT2D_ERR_BAD_INPUT;
        }
    };
    match filling_radius_estimate(&metric, &fundamental_cycle(n)) {
        Ok(r) => {
            *out = r;
            CAT2D_OK
        }
        Err(e) => {
            set_error(&e.to_string());
            CAT2D_ERR_GEOMETRY
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    const SQUARE: &str = r#"{"schema":1,"kind":"plane-domain","kappa":0.0,
        "metadata":{"name":"square","seed":7},
        "payload":{"outer":[[0,0],[1,0],[1,1],[0,1]],"holes":[]}}"#;

    #[test]
    fn load_verify_distance_free() {
        unsafe {
            let mut handle: *mut Cat2dScene = ptr::null_mut();
            assert_eq!(
                cat2d_scene_load_json(c"not json".as_ptr(), &mut handle),
                CAT2D_ERR_BAD_INPUT
            );
            assert!(!CStr::from_ptr(cat2d_last_error()).to_bytes().is_empty());

            let json = CString::new(SQUARE).unwrap();
            assert_eq!(cat2d_scene_load_json(json.as_ptr(), &mut handle), CAT2D_OK);

            let mut verdict = -1;
            assert_eq!(cat2d_verify(handle, 7, 2000, 0.0, &mut verdict), CAT2D_OK);
            assert_eq!(verdict, CAT2D_VERDICT_CONSISTENT);

            let mut d = 0.0;
            assert_eq!(
                cat2d_distance(handle, 0.0, 0.0, 1.0, 1.0, &mut d),
                CAT2D_OK
            );
            assert!((d - 2f64.sqrt()).abs() < 1e-12);

            cat2d_scene_free(handle);
        }
    }

    #[test]
    fn null_arguments_are_rejected() {
        unsafe {
            assert_eq!(
                cat2d_scene_load_json(ptr::null(), ptr::null_mut()),
                CAT2D_ERR_NULL
            );
            let mut v = 0;
            assert_eq!(cat2d_verify(ptr::null(), 0, 0, 0.0, &mut v), CAT2D_ERR_NULL);
            cat2d_scene_free(ptr::null_mut());
        }
    }

    #[test]
    fn filling_radius_of_simplex_boundary() {
        // Four equidistant points: the cycle dies at the full simplex scale.
        let m = [
            0.0, 1.0, 1.0, 1.0, //
            1.0, 0.0, 1.0, 1.0, //
            1.0, 1.0, 0.0, 1.0, //
            1.0, 1.0, 1.0, 0.0,
        ];
        let mut r = 0.0;
        unsafe {
            assert_eq!(cat2d_filling_radius(m.as_ptr(), 4, &mut r), CAT2D_OK);
        }
        assert!((r - 0.5).abs() < 1e-12);
    }
}
