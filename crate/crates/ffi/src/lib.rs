//! C interface to `aiaiut`.
//!
//! Every fallible function returns an [`AiaiutStatus`]; on failure a message
//! is kept per thread and can be read with [`aiaiut_last_error`]. Objects are
//! opaque handles released with their `_free` function.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use aiaiut::inference::{Alternative, MarginalMode};
use aiaiut::models::{CovarianceKind, Dataset};
use aiaiut::mvdist::{CorrelationMatrix, MvtIntegrator, MvtOptions};
use aiaiut::simulation::{simulate_power_with, PowerRow, Scenario, SimOptions};
use aiaiut::Error;
use nalgebra::DMatrix;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AiaiutStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidCorrelation = 3,
    DegenerateGroup = 4,
    SingularDesign = 5,
    Nonconvergence = 6,
    BufferTooSmall = 7,
    Panic = 99,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AiaiutAlternative {
    Greater = 0,
    Less = 1,
    TwoSided = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AiaiutCovariance {
    ModelBased = 0,
    Sandwich = 1,
}

/// Global decisions of one analysis.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiaiutDecisions {
    pub iut_reject: bool,
    pub uit_reject: bool,
    pub aia_reject: bool,
    pub p_iut_max: f64,
    pub p_aia_max: f64,
}

/// Group-labelled response matrix.
pub struct AiaiutDataset(Dataset);

/// Result of [`aiaiut_analyze`].
pub struct AiaiutAnalysis(aiaiut::cli::report::Analysis);

/// Result of [`aiaiut_simulate_power`].
pub struct AiaiutPowerRow(PowerRow);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> AiaiutStatus {
    match e {
        Error::NotPsd { .. } | Error::InvalidCorrelation(_) => AiaiutStatus::InvalidCorrelation,
        Error::DegenerateGroup { .. } => AiaiutStatus::DegenerateGroup,
        Error::SingularDesign(_) => AiaiutStatus::SingularDesign,
        Error::Nonconvergence(_) => AiaiutStatus::Nonconvergence,
        _ => AiaiutStatus::InvalidArgument,
    }
}

struct Failure(AiaiutStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(name: &str) -> Failure {
    Failure(AiaiutStatus::NullPointer, format!("`{name}` is null"))
}

/// Runs `f`, recording any error or panic.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> AiaiutStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AiaiutStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            AiaiutStatus::Panic
        }
    }
}

unsafe fn input<'a, T>(p: *const T, len: usize, name: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(name));
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn output<'a, T>(
    p: *mut T,
    len: usize,
    needed: usize,
    name: &str,
) -> Result<&'a mut [T], Failure> {
    if len < needed {
        return Err(Failure(
            AiaiutStatus::BufferTooSmall,
            format!("`{name}` holds {len} values, {needed} needed"),
        ));
    }
    if needed == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null(name));
    }
    Ok(slice::from_raw_parts_mut(p, needed))
}

fn store<T>(out: *mut *mut T, value: T, name: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(name));
    }
    // SAFETY: checked non-null; the caller provides a writable slot.
    unsafe { *out = Box::into_raw(Box::new(value)) };
    Ok(())
}

fn correlation(dim: usize, corr: &[f64]) -> Result<CorrelationMatrix, Failure> {
    Ok(CorrelationMatrix::from_row_major(dim, corr)?)
}

/// Message of the last failure on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn aiaiut_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn aiaiut_status_message(status: AiaiutStatus) -> *const c_char {
    let s: &'static CStr = match status {
        AiaiutStatus::Ok => c"ok",
        AiaiutStatus::NullPointer => c"null pointer",
        AiaiutStatus::InvalidArgument => c"invalid argument",
        AiaiutStatus::InvalidCorrelation => c"invalid correlation matrix",
        AiaiutStatus::DegenerateGroup => c"group with fewer than two observations",
        AiaiutStatus::SingularDesign => c"singular design",
        AiaiutStatus::Nonconvergence => c"numerical procedure did not converge",
        AiaiutStatus::BufferTooSmall => c"output buffer too small",
        AiaiutStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}

/// `P(T <= upper)` for the central multivariate t with `df` degrees of
/// freedom (infinite for the normal); `corr` is `dim x dim`, row-major.
///
/// # Safety
/// `upper` must hold `dim` values and `corr` `dim * dim`; `value` and
/// `complement` must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn aiaiut_mvt_cdf(
    dim: usize,
    upper: *const f64,
    corr: *const f64,
    df: f64,
    seed: u64,
    value: *mut f64,
    complement: *mut f64,
) -> AiaiutStatus {
    guard(|| {
        let upper = input(upper, dim, "upper")?;
        let r = correlation(dim, input(corr, dim * dim, "corr")?)?;
        let integ = MvtIntegrator::new(
            df,
            MvtOptions {
                seed,
                ..MvtOptions::default()
            },
        )?;
        let p = integ.cdf(upper, &r)?;
        if !value.is_null() {
            *value = p.value;
        }
        if !complement.is_null() {
            *complement = p.complement;
        }
        Ok(())
    })
}

/// Builds a data set from `n` rows. `groups[i]` is the group of row `i`,
/// group 0 being the control; `responses` is `n x n_endpoints`, row-major.
///
/// # Safety
/// Pointers must reference arrays of the stated sizes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn aiaiut_dataset_new(
    n: usize,
    n_endpoints: usize,
    groups: *const u32,
    responses: *const f64,
    out: *mut *mut AiaiutDataset,
) -> AiaiutStatus {
    guard(|| {
        let groups = input(groups, n, "groups")?;
        let y = input(responses, n * n_endpoints, "responses")?;
        let k = groups.iter().map(|&g| g as usize + 1).max().unwrap_or(0);
        let levels: Vec<String> = (0..k).map(|g| g.to_string()).collect();
        let names = (1..=n_endpoints).map(|j| format!("E{j}")).collect();
        let ds = Dataset::from_levels(
            levels,
            groups.iter().map(|&g| g as usize).collect(),
            DMatrix::from_row_slice(n, n_endpoints, y),
            names,
        )?;
        store(out, AiaiutDataset(ds), "out")
    })
}

/// # Safety
/// `ds` must come from [`aiaiut_dataset_new`] or be null.
#[no_mangle]
pub unsafe extern "C" fn aiaiut_dataset_free(ds: *mut AiaiutDataset) {
    if !ds.is_null() {
        drop(Box::from_raw(ds));
    }
}

/// Dunnett contrasts of every endpoint against group 0, max-T adjusted over
/// the whole family, with simultaneous limits at level `1 - alpha`.
/// Marginal p-values are per hypothesis.
///
/// # Safety
/// `ds` must be a live data set; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn aiaiut_analyze(
    ds: *const AiaiutDataset,
    alpha: f64,
    alternative: AiaiutAlternative,
    covariance: AiaiutCovariance,
    out: *mut *mut AiaiutAnalysis,
) -> AiaiutStatus {
    guard(|| {
        let ds = ds.as_ref().ok_or_else(|| null("ds"))?;
        let cfg = aiaiut::cli::report::AnalysisConfig {
            alpha,
            alternative: match alternative {
                AiaiutAlternative::Greater => Alternative::Greater,
                AiaiutAlternative::Less => Alternative::Less,
                AiaiutAlternative::TwoSided => Alternative::TwoSided,
            },
            covariance: match covariance {
                AiaiutCovariance::ModelBased => CovarianceKind::ModelBased,
                AiaiutCovariance::Sandwich => CovarianceKind::Sandwich,
            },
            marginal: MarginalMode::Univariate,
        };
        let a = aiaiut::cli::report::analyze(&ds.0, &cfg)?;
        store(out, AiaiutAnalysis(a), "out")
    })
}

/// # Safety
/// `a` must come from [`aiaiut_analyze`] or be null.
#[no_mangle]
pub unsafe extern "C" fn aiaiut_analysis_free(a: *mut AiaiutAnalysis) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Number of hypotheses (endpoint-major), or 0 for a null handle.
///
/// # Safety
/// `a` must be a live analysis or null.
#[no_mangle]
pub unsafe extern "C" fn aiaiut_analysis_len(a: *const AiaiutAnalysis) -> usize {
    a.as_ref().map_or(0, |a| a.0.joint.len())
}

/// Which per-hypothesis vector [`aiaiut_analysis_values`] copies.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AiaiutQuantity {
    Estimate = 0,
    StdError = 1,
    TStat = 2,
    AdjustedP = 3,
    MarginalP = 4,
    Lower = 5,
    Upper = 6,
}

/// Copies one per-hypothesis vector into `buf` (capacity `len`).
///
/// # Safety
/// `a` must be a live analysis; `buf` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn aiaiut_analysis_values(
    a: *const AiaiutAnalysis,
    quantity: AiaiutQuantity,
    buf: *mut f64,
    len: usize,
) -> AiaiutStatus {
    guard(|| {
        let a = &a.as_ref().ok_or_else(|| null("a"))?.0;
        let src: &[f64] = match quantity {
            AiaiutQuantity::Estimate => &a.joint.estimates,
            AiaiutQuantity::StdError => &a.joint.std_errors,
            AiaiutQuantity::TStat => &a.joint.t_stats,
            AiaiutQuantity::AdjustedP => &a.outcome.adjusted_p,
            AiaiutQuantity::MarginalP => &a.outcome.raw_p,
            AiaiutQuantity::Lower => &a.ci.lower,
            AiaiutQuantity::Upper => &a.ci.upper,
        };
        output(buf, len, src.len(), "buf")?.copy_from_slice(src);
        Ok(())
    })
}

/// # Safety
/// `a` must be a live analysis; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn aiaiut_analysis_decisions(
    a: *const AiaiutAnalysis,
    out: *mut AiaiutDecisions,
) -> AiaiutStatus {
    guard(|| {
        let o = &a.as_ref().ok_or_else(|| null("a"))?.0.outcome;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = AiaiutDecisions {
            iut_reject: o.iut_reject,
            uit_reject: o.uit_reject,
            aia_reject: o.aia_reject,
            p_iut_max: o.p_iut_max,
            p_aia_max: o.p_aia_max,
        };
        Ok(())
    })
}

/// Monte Carlo power of one scenario. `group_sizes` has `k` entries (group
/// 0 is the control), `means` is `k x j` row-major, `sds` has `j` entries and
/// `corr` is `j x j` row-major. `workers = 0` uses all cores; results do not
/// depend on it.
///
/// # Safety
/// Pointers must reference arrays of the stated sizes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn aiaiut_simulate_power(
    k: usize,
    j: usize,
    group_sizes: *const usize,
    means: *const f64,
    sds: *const f64,
    corr: *const f64,
    alpha: f64,
    sims: usize,
    seed: u64,
    workers: usize,
    out: *mut *mut AiaiutPowerRow,
) -> AiaiutStatus {
    guard(|| {
        let sc = Scenario::new(
            input(group_sizes, k, "group_sizes")?.to_vec(),
            DMatrix::from_row_slice(k, j, input(means, k * j, "means")?),
            input(sds, j, "sds")?.to_vec(),
            correlation(j, input(corr, j * j, "corr")?)?,
            alpha,
            sims,
            seed,
        )?;
        let opts = SimOptions {
            workers: (workers > 0).then_some(workers),
            ..SimOptions::default()
        };
        store(out, AiaiutPowerRow(simulate_power_with(&sc, &opts)?), "out")
    })
}

/// # Safety
/// `row` must come from [`aiaiut_simulate_power`] or be null.
#[no_mangle]
pub unsafe extern "C" fn aiaiut_power_free(row: *mut AiaiutPowerRow) {
    if !row.is_null() {
        drop(Box::from_raw(row));
    }
}

/// Global rejection rates; `rr` is NaN when IUT never rejected.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiaiutPowerSummary {
    pub iut: f64,
    pub uit: f64,
    pub aia: f64,
    pub rr: f64,
    pub n_hypotheses: usize,
    pub resampled: u64,
}

/// # Safety
/// `row` must be a live power row; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn aiaiut_power_summary(
    row: *const AiaiutPowerRow,
    out: *mut AiaiutPowerSummary,
) -> AiaiutStatus {
    guard(|| {
        let r = &row.as_ref().ok_or_else(|| null("row"))?.0;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = AiaiutPowerSummary {
            iut: r.iut,
            uit: r.uit,
            aia: r.aia,
            rr: r.rr.unwrap_or(f64::NAN),
            n_hypotheses: r.m.len(),
            resampled: r.resampled,
        };
        Ok(())
    })
}

/// Per-hypothesis rates: adjusted (`m`) and marginal (`e`), each of
/// length `n_hypotheses`.
///
/// # Safety
/// `row` must be a live power row; buffers must hold `len` values each.
#[no_mangle]
pub unsafe extern "C" fn aiaiut_power_rates(
    row: *const AiaiutPowerRow,
    m: *mut f64,
    e: *mut f64,
    len: usize,
) -> AiaiutStatus {
    guard(|| {
        let r = &row.as_ref().ok_or_else(|| null("row"))?.0;
        output(m, len, r.m.len(), "m")?.copy_from_slice(&r.m);
        output(e, len, r.e.len(), "e")?.copy_from_slice(&r.e);
        Ok(())
    })
}
