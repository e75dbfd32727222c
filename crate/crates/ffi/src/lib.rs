//! C ABI for the expanderlab workbench.
//!
//! Conventions:
//! - Every fallible call returns an `int32_t` status: `EXL_OK` (0) on
//!   success, otherwise one of the `EXL_ERR_*` codes (the same numbers the
//!   CLI uses as process exit codes). A human-readable message for the most
//!   recent failure on the current thread is available from
//!   [`exl_last_error`].
//! - Objects are returned through opaque handles that must be released with
//!   the matching `*_free` function. Strings returned through `char**` out
//!   parameters are NUL-terminated, UTF-8, and must be released with
//!   [`exl_string_free`].
//! - Structured results (spectral reports, expansion brackets, character
//!   scans) are returned as JSON documents matching the CLI artifact
//!   `result` payloads, so one schema serves both interfaces.
//! - Panics never unwind across the boundary; they are caught and reported
//!   as `EXL_ERR_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;

use expanderlab::bsgs::{factorial, Bsgs};
use expanderlab::characters::scan::{
    default_lambda1_cap, default_support_floor, roichman_bound_scan,
};
use expanderlab::config::ExperimentConfig;
use expanderlab::construction::GeneratingFamily;
use expanderlab::error::LabError;
use expanderlab::spectral::eigen::second_eigenvalue;
use expanderlab::spectral::expansion::{
    brute_force_expansion, spectral_expansion_bounds, BRUTE_FORCE_VERTEX_CAP,
};
use expanderlab::spectral::kazhdan::kazhdan_numeric;
use expanderlab::spectral::{
    build_action_graph, ActionGraph, EigenMethod, GraphKind, DENSE_VERTEX_CAP,
};

/// The call succeeded.
pub const EXL_OK: i32 = 0;
/// Filesystem or serialization failure.
pub const EXL_ERR_IO: i32 = 1;
/// Malformed or inconsistent input (bad JSON, NULL pointer, unknown name).
pub const EXL_ERR_INVALID: i32 = 2;
/// The request exceeds a configured resource budget.
pub const EXL_ERR_BUDGET: i32 = 3;
/// A constructed object failed its certification check.
pub const EXL_ERR_CERTIFICATION: i32 = 4;
/// An iterative solver ran out of iterations before reaching tolerance.
pub const EXL_ERR_NONCONVERGENCE: i32 = 5;
/// An internal invariant was violated; the message holds the panic text.
pub const EXL_ERR_PANIC: i32 = 6;

/// A generating family: a degree, a list of permutations, and their labels.
pub struct ExlFamily(GeneratingFamily);

/// A graph presented as one vertex map per generator (Cayley or Schreier).
pub struct ExlGraph(ActionGraph);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

fn fail(e: LabError) -> i32 {
    let code = e.exit_code();
    set_error(e.to_string());
    code
}

/// Runs a fallible body, catching panics and recording the error message.
fn guarded(body: impl FnOnce() -> Result<(), LabError>) -> i32 {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => EXL_OK,
        Ok(Err(e)) => fail(e),
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal panic: {msg}"));
            EXL_ERR_PANIC
        }
    }
}

unsafe fn want_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, LabError> {
    if p.is_null() {
        return Err(LabError::Invalid(format!("{what} is NULL")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| LabError::Invalid(format!("{what} is not valid UTF-8")))
}

unsafe fn want_ref<'a, T>(p: *const T, what: &str) -> Result<&'a T, LabError> {
    p.as_ref()
        .ok_or_else(|| LabError::Invalid(format!("{what} is NULL")))
}

unsafe fn want_out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, LabError> {
    p.as_mut()
        .ok_or_else(|| LabError::Invalid(format!("{what} is NULL")))
}

fn give_string(out: &mut *mut c_char, s: String) -> Result<(), LabError> {
    let c = CString::new(s)
        .map_err(|_| LabError::Invalid("result contains an interior NUL byte".into()))?;
    *out = c.into_raw();
    Ok(())
}

fn solver_from(name: &str, n: usize) -> Result<EigenMethod, LabError> {
    match name {
        "auto" => Ok(if n <= DENSE_VERTEX_CAP {
            EigenMethod::Dense
        } else {
            EigenMethod::Lanczos
        }),
        "dense" => Ok(EigenMethod::Dense),
        "power" => Ok(EigenMethod::PowerDeflation),
        "lanczos" => Ok(EigenMethod::Lanczos),
        other => Err(LabError::Invalid(format!(
            "unknown solver '{other}' (auto | dense | power | lanczos)"
        ))),
    }
}

// ---------------------------------------------------------------------------
// Library-wide
// ---------------------------------------------------------------------------

/// Library version as a static NUL-terminated string. Do not free.
#[no_mangle]
pub extern "C" fn exl_version() -> *const c_char {
    static VERSION: OnceLock<CString> = OnceLock::new();
    VERSION
        .get_or_init(|| CString::new(expanderlab::TOOL_VERSION).unwrap())
        .as_ptr()
}

/// Message for the most recent failure on the calling thread (empty string
/// if none). The pointer stays valid until the next failing call on the
/// same thread. Do not free.
#[no_mangle]
pub extern "C" fn exl_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Releases a string returned through a `char**` out parameter.
/// NULL is ignored.
///
/// # Safety
/// `s` must be a pointer previously returned by this library and not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn exl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---------------------------------------------------------------------------
// Families
// ---------------------------------------------------------------------------

/// Parses a family from its JSON document (the `family.json` schema:
/// kind, degree, elements in cycle notation, labels).
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn exl_family_from_json(
    json: *const c_char,
    out: *mut *mut ExlFamily,
) -> i32 {
    guarded(|| {
        let text = want_str(json, "json")?;
        let out = want_out(out, "out")?;
        let family = GeneratingFamily::from_json(text)?;
        *out = Box::into_raw(Box::new(ExlFamily(family)));
        Ok(())
    })
}

/// Builds a family from an experiment-config JSON document (the same flat
/// key set the CLI reads; unknown keys are rejected). An empty document
/// `{}` builds the default K=7, d=2 union family on 49 points.
///
/// # Safety
/// `config_json` must be a NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn exl_family_from_config_json(
    config_json: *const c_char,
    out: *mut *mut ExlFamily,
) -> i32 {
    guarded(|| {
        let text = want_str(config_json, "config_json")?;
        let out = want_out(out, "out")?;
        let cfg = ExperimentConfig::from_json(text)?;
        let family = cfg.build_family()?;
        *out = Box::into_raw(Box::new(ExlFamily(family)));
        Ok(())
    })
}

/// Serializes the family back to its JSON document.
///
/// # Safety
/// `family` must be a live handle; `out` must be valid. The returned string
/// is released with `exl_string_free`.
#[no_mangle]
pub unsafe extern "C" fn exl_family_to_json(
    family: *const ExlFamily,
    out: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        let family = want_ref(family, "family")?;
        let out = want_out(out, "out")?;
        give_string(out, family.0.to_json()?)
    })
}

/// Number of points the family permutes.
///
/// # Safety
/// `family` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn exl_family_degree(family: *const ExlFamily, out: *mut u64) -> i32 {
    guarded(|| {
        let family = want_ref(family, "family")?;
        *want_out(out, "out")? = family.0.degree() as u64;
        Ok(())
    })
}

/// Number of generators in the family (before inverse closure).
///
/// # Safety
/// `family` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn exl_family_element_count(
    family: *const ExlFamily,
    out: *mut u64,
) -> i32 {
    guarded(|| {
        let family = want_ref(family, "family")?;
        *want_out(out, "out")? = family.0.len() as u64;
        Ok(())
    })
}

/// Order of the group the family generates, as a decimal string, computed
/// with a full deterministic stabilizer chain.
///
/// # Safety
/// `family` must be a live handle; `out` must be valid. The returned string
/// is released with `exl_string_free`.
#[no_mangle]
pub unsafe extern "C" fn exl_family_order(
    family: *const ExlFamily,
    seed: u64,
    out: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        let family = want_ref(family, "family")?;
        let out = want_out(out, "out")?;
        let chain = Bsgs::build(family.0.elements(), seed)?;
        give_string(out, chain.order().to_string())
    })
}

/// Certifies that the family generates the full target group for its kind:
/// the alternating group Alt(n) for even kinds, the symmetric group Sym(n)
/// otherwise. Returns `EXL_OK` when the order matches, and
/// `EXL_ERR_CERTIFICATION` (with the observed and expected orders in the
/// error message) when it does not. `order_out` may be NULL; when given it
/// receives the observed order as a decimal string.
///
/// # Safety
/// `family` must be a live handle. `order_out`, when non-NULL, receives a
/// string released with `exl_string_free`.
#[no_mangle]
pub unsafe extern "C" fn exl_family_certify(
    family: *const ExlFamily,
    seed: u64,
    order_out: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        let family = want_ref(family, "family")?;
        let n = family.0.degree();
        let expected = if family.0.kind().requires_even() {
            factorial(n) / 2u32
        } else {
            factorial(n)
        };
        let chain = Bsgs::build_with_target(family.0.elements(), seed, Some(expected.clone()))?;
        if !order_out.is_null() {
            give_string(&mut *order_out, chain.order().to_string())?;
        }
        if *chain.order() == expected {
            Ok(())
        } else {
            Err(LabError::Certification(format!(
                "the family generates a group of order {}, not {expected}",
                chain.order()
            )))
        }
    })
}

/// Releases a family handle. NULL is ignored.
///
/// # Safety
/// `family` must be a live handle or NULL; it must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn exl_family_free(family: *mut ExlFamily) {
    if !family.is_null() {
        drop(Box::from_raw(family));
    }
}

// ---------------------------------------------------------------------------
// Graphs and spectra
// ---------------------------------------------------------------------------

/// Builds the action graph of a family. `kind` is one of
/// "schreier_points" (vertices are points), "schreier_tuples" (vertices are
/// ordered `tuple_r`-tuples of distinct points), or "cayley" (vertices are
/// group elements; bounded by `max_vertices`). Generators are closed under
/// inverses before edges are laid down.
///
/// # Safety
/// `family` must be a live handle; `kind` a NUL-terminated string; `out`
/// valid. The graph is released with `exl_graph_free`.
#[no_mangle]
pub unsafe extern "C" fn exl_graph_build(
    family: *const ExlFamily,
    kind: *const c_char,
    tuple_r: u64,
    max_vertices: u64,
    out: *mut *mut ExlGraph,
) -> i32 {
    guarded(|| {
        let family = want_ref(family, "family")?;
        let kind = want_str(kind, "kind")?;
        let out = want_out(out, "out")?;
        let kind = match kind {
            "schreier_points" => GraphKind::SchreierPoints,
            "schreier_tuples" => GraphKind::SchreierTuples,
            "cayley" => GraphKind::Cayley,
            other => {
                return Err(LabError::Invalid(format!(
                    "unknown graph kind '{other}' (schreier_points | schreier_tuples | cayley)"
                )))
            }
        };
        let r = (kind == GraphKind::SchreierTuples).then_some(tuple_r as usize);
        let graph = build_action_graph(&family.0, kind, r, max_vertices as usize)?;
        *out = Box::into_raw(Box::new(ExlGraph(graph)));
        Ok(())
    })
}

/// Number of vertices in the graph.
///
/// # Safety
/// `graph` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn exl_graph_vertex_count(graph: *const ExlGraph, out: *mut u64) -> i32 {
    guarded(|| {
        let graph = want_ref(graph, "graph")?;
        *want_out(out, "out")? = graph.0.n() as u64;
        Ok(())
    })
}

/// Second-largest eigenvalue of the normalized adjacency operator.
/// `solver` is "auto", "dense", "power", or "lanczos"; "auto" uses the
/// dense solver up to its vertex cap and Lanczos beyond it.
///
/// # Safety
/// `graph` must be a live handle; `solver` a NUL-terminated string; `out`
/// must be valid.
#[no_mangle]
pub unsafe extern "C" fn exl_graph_lambda2(
    graph: *const ExlGraph,
    solver: *const c_char,
    tol: f64,
    seed: u64,
    out: *mut f64,
) -> i32 {
    guarded(|| {
        let graph = want_ref(graph, "graph")?;
        let method = solver_from(want_str(solver, "solver")?, graph.0.n())?;
        let out = want_out(out, "out")?;
        *out = second_eigenvalue(&graph.0, method, tol, seed)?.lambda2;
        Ok(())
    })
}

/// Full spectral report (λ₂, gap, residual, iterations, …) as a JSON
/// document identical to the CLI `spectrum.json` result payload.
///
/// # Safety
/// `graph` must be a live handle; `solver` a NUL-terminated string; `out`
/// receives a string released with `exl_string_free`.
#[no_mangle]
pub unsafe extern "C" fn exl_graph_spectrum_json(
    graph: *const ExlGraph,
    solver: *const c_char,
    tol: f64,
    seed: u64,
    out: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        let graph = want_ref(graph, "graph")?;
        let method = solver_from(want_str(solver, "solver")?, graph.0.n())?;
        let out = want_out(out, "out")?;
        let report = second_eigenvalue(&graph.0, method, tol, seed)?;
        give_string(out, serde_json::to_string(&report)?)
    })
}

/// Edge-expansion report as JSON: the Cheeger bracket derived from λ₂,
/// plus the exact expansion constant and a witness cut when the graph is
/// small enough for exhaustive search.
///
/// # Safety
/// `graph` must be a live handle; `solver` a NUL-terminated string; `out`
/// receives a string released with `exl_string_free`.
#[no_mangle]
pub unsafe extern "C" fn exl_graph_expansion_json(
    graph: *const ExlGraph,
    solver: *const c_char,
    tol: f64,
    seed: u64,
    out: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        let graph = want_ref(graph, "graph")?;
        let method = solver_from(want_str(solver, "solver")?, graph.0.n())?;
        let out = want_out(out, "out")?;
        let spectral = second_eigenvalue(&graph.0, method, tol, seed)?;
        let mut report = spectral_expansion_bounds(&graph.0, &spectral)?;
        if graph.0.n() <= BRUTE_FORCE_VERTEX_CAP {
            let exact = brute_force_expansion(&graph.0)?;
            report.exact = exact.exact;
            report.exact_value = exact.exact_value;
            report.witness = exact.witness;
        }
        give_string(out, serde_json::to_string(&report)?)
    })
}

/// Releases a graph handle. NULL is ignored.
///
/// # Safety
/// `graph` must be a live handle or NULL; it must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn exl_graph_free(graph: *mut ExlGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

// ---------------------------------------------------------------------------
// Group-level measurements
// ---------------------------------------------------------------------------

/// Numeric Kazhdan-constant report for the finite group the family
/// generates (JSON, identical to the CLI `kazhdan.json` result payload).
/// The group order is capped; exceeding the cap is a budget error.
///
/// # Safety
/// `family` must be a live handle; `out` receives a string released with
/// `exl_string_free`.
#[no_mangle]
pub unsafe extern "C" fn exl_kazhdan_json(
    family: *const ExlFamily,
    seed: u64,
    out: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        let family = want_ref(family, "family")?;
        let out = want_out(out, "out")?;
        let report = kazhdan_numeric(family.0.elements(), seed)?;
        give_string(out, serde_json::to_string(&report)?)
    })
}

/// Scans every irreducible character of Sym(n) in the standard scope
/// (first row and column at most n − ⌈n^{1/4}⌉, support at least n/2) for
/// the exponential decay bound with base max(λ₁/n, λ₁′/n, q) and exponent
/// multiplier `c`, and fits the largest exponent the data supports.
/// Returns the scan report as JSON.
///
/// # Safety
/// `out` receives a string released with `exl_string_free`.
#[no_mangle]
pub unsafe extern "C" fn exl_character_scan_json(
    n: u64,
    c: f64,
    q: f64,
    out: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        let out = want_out(out, "out")?;
        let n = n as usize;
        let report = roichman_bound_scan(
            n,
            c,
            q,
            default_lambda1_cap(n),
            default_support_floor(n),
        )?;
        give_string(out, report.to_json()?)
    })
}
