//! Rectangle probabilities of the central multivariate t (and normal)
//! distribution.
//!
//! The general path is a randomized lattice rule over the
//! separation-of-variables transform with variable prioritisation. An exactly
//! equicorrelated matrix with non-negative correlation is integrated by nested
//! adaptive quadrature over the common latent factor (and the chi scale).
//!
//! Every path estimates the probability *and* its complement without
//! subtracting from one, so upper-tail p-values stay accurate far below the
//! absolute error target.

use std::sync::Arc;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::bivariate;
use super::chi::{self, ChiScaleTable};
use super::correlation::CorrelationMatrix;
use super::quadrature;
use super::univariate::{
    check_df, is_normal_df, norm_cdf, norm_pdf, norm_quantile_fast, norm_sf, t_cdf, t_sf,
};
use crate::error::{Error, Result};

/// Result of a probability computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbResult {
    /// Estimated probability, in `[0, 1]`.
    pub value: f64,
    /// `1 - value`, estimated directly.
    pub complement: f64,
    /// Absolute error bound (three standard errors for the lattice rule).
    pub error_estimate: f64,
    /// `false` when the accuracy target was not met within the point budget.
    pub converged: bool,
}

impl ProbResult {
    fn exact(value: f64, complement: f64) -> Self {
        ProbResult {
            value: value.clamp(0.0, 1.0),
            complement: complement.clamp(0.0, 1.0),
            error_estimate: 0.0,
            converged: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MvtOptions {
    /// Absolute error target for the probability.
    pub abs_tol: f64,
    /// Relative error target; values of 1 or more disable it.
    pub rel_tol: f64,
    /// Which probability the relative target applies to.
    pub relative_to: RelativeTo,
    /// Budget of integrand evaluations for the lattice rule.
    pub max_points: usize,
    /// Seed for the random lattice shifts.
    pub seed: u64,
    /// When set, the lattice rule also stops as soon as its error band for
    /// the complement excludes this level.
    pub decision_level: Option<f64>,
}

impl Default for MvtOptions {
    fn default() -> Self {
        MvtOptions {
            abs_tol: 1e-4,
            rel_tol: 1e-2,
            relative_to: RelativeTo::Smaller,
            max_points: 4_000_000,
            seed: 0x5eed_1234_abcd_0001,
            decision_level: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RelativeTo {
    /// The smaller of value and complement.
    #[default]
    Smaller,
    /// The complement only, as for p-values.
    Complement,
}

const SHIFTS: usize = 12;
const DEGENERATE_PIVOT: f64 = 1e-10;
const Z_TRUNCATION: f64 = 9.0;

/// Reusable integrator for one degrees-of-freedom value.
///
/// Holds the tabulated chi scale so repeated calls with the same `df` do not
/// pay for it again. Immutable after construction.
#[derive(Debug, Clone)]
pub struct MvtIntegrator {
    df: f64,
    opts: MvtOptions,
    chi: Option<Arc<ChiScaleTable>>,
}

impl MvtIntegrator {
    /// `df = f64::INFINITY` selects the multivariate normal.
    pub fn new(df: f64, opts: MvtOptions) -> Result<Self> {
        check_df(df)?;
        if !(opts.abs_tol > 0.0) {
            return Err(Error::invalid("abs_tol", "must be positive"));
        }
        let chi = if is_normal_df(df) {
            None
        } else {
            Some(Arc::new(ChiScaleTable::new(df)))
        };
        Ok(MvtIntegrator { df, opts, chi })
    }

    pub fn df(&self) -> f64 {
        self.df
    }

    pub fn options(&self) -> &MvtOptions {
        &self.opts
    }

    /// Same integrator with the relative target moved (shares the chi table).
    pub fn relative_to(&self, target: RelativeTo) -> Self {
        let mut out = self.clone();
        out.opts.relative_to = target;
        out
    }

    /// Same integrator with a different lattice seed (shares the chi table).
    pub fn with_seed(&self, seed: u64) -> Self {
        let mut out = self.clone();
        out.opts.seed = seed;
        out
    }

    /// `P(T_j <= upper_j for all j)`.
    pub fn cdf(&self, upper: &[f64], corr: &CorrelationMatrix) -> Result<ProbResult> {
        let lower = vec![f64::NEG_INFINITY; upper.len()];
        self.rectangle(&lower, upper, corr)
    }

    /// `P(lower_j <= T_j <= upper_j for all j)`.
    pub fn rectangle(
        &self,
        lower: &[f64],
        upper: &[f64],
        corr: &CorrelationMatrix,
    ) -> Result<ProbResult> {
        let n = corr.dim();
        for (name, v) in [("lower", lower), ("upper", upper)] {
            if v.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: v.len(),
                });
            }
            if v.iter().any(|x| x.is_nan()) {
                return Err(Error::invalid(name, "limits must not be NaN"));
            }
        }
        let Some(reduced) = reduce(lower, upper, corr) else {
            return Ok(ProbResult::exact(0.0, 1.0));
        };
        match reduced.lower.len() {
            0 => Ok(ProbResult::exact(1.0, 0.0)),
            1 => Ok(self.univariate(reduced.lower[0], reduced.upper[0])),
            2 if bivariate::supports(self.df) => {
                let rho = corr.get(reduced.index[0], reduced.index[1]);
                let (lo, hi) = (&reduced.lower, &reduced.upper);
                let (v, c) =
                    bivariate::bvt_rectangle(self.df as u32, [lo[0], lo[1]], [hi[0], hi[1]], rho);
                Ok(ProbResult::exact(v, c))
            }
            m => {
                let r = corr.submatrix(&reduced.index);
                match r.common_correlation() {
                    Some(rho) if (0.0..1.0 - 1e-12).contains(&rho) => {
                        Ok(self.equicorrelated(&reduced.lower, &reduced.upper, rho))
                    }
                    _ => {
                        debug_assert_eq!(m, r.dim());
                        if let Some(p) = self.tail_bracket(&reduced.lower, &reduced.upper, &r) {
                            return Ok(p);
                        }
                        self.lattice(&reduced.lower, &reduced.upper, &r)
                    }
                }
            }
        }
    }

    fn univariate(&self, a: f64, b: f64) -> ProbResult {
        let (below, above) = if is_normal_df(self.df) {
            (norm_cdf(a), norm_sf(b))
        } else {
            (t_cdf(a, self.df), t_sf(b, self.df))
        };
        let outside = below + above;
        ProbResult::exact(1.0 - outside, outside)
    }

    fn equicorrelated(&self, lower: &[f64], upper: &[f64], rho: f64) -> ProbResult {
        // Quadrature error is far below the lattice tolerance; the relative
        // target keeps small complements accurate.
        let abs_tol = (self.opts.abs_tol * 1e-3).max(1e-300);
        let rel_tol = if self.opts.rel_tol >= 1.0 {
            1e-3
        } else {
            (self.opts.rel_tol * 1e-3).max(1e-10)
        };
        let sr = rho.sqrt();
        let sc = (1.0 - rho).sqrt();
        // complement of the conditional probability given latent z and scale s
        let inner = |s: f64| {
            let f = |z: f64| {
                let mut ln_inside = 0.0;
                for (&a, &b) in lower.iter().zip(upper) {
                    let lo = (a * s - sr * z) / sc;
                    let hi = (b * s - sr * z) / sc;
                    let d = norm_cdf(lo) + norm_sf(hi);
                    if d >= 1.0 {
                        return norm_pdf(z);
                    }
                    ln_inside += (-d).ln_1p();
                }
                -ln_inside.exp_m1() * norm_pdf(z)
            };
            quadrature::integrate(
                f,
                -Z_TRUNCATION,
                Z_TRUNCATION,
                abs_tol * 1e-2,
                rel_tol * 1e-1,
                400,
            )
        };
        let (comp, err, converged) = if is_normal_df(self.df) {
            let r = inner(1.0);
            (r.value, r.error, r.converged)
        } else {
            let df = self.df;
            let (s_lo, s_hi) = scale_range(df);
            let mut inner_err: f64 = 0.0;
            let mut inner_ok = true;
            let r = quadrature::integrate(
                |s| {
                    let q = inner(s);
                    inner_err = inner_err.max(q.error);
                    inner_ok &= q.converged;
                    q.value * chi::density(s, df)
                },
                s_lo,
                s_hi,
                abs_tol,
                rel_tol,
                400,
            );
            (r.value, r.error + inner_err, r.converged && inner_ok)
        };
        let comp = comp.clamp(0.0, 1.0);
        ProbResult {
            value: 1.0 - comp,
            complement: comp,
            error_estimate: err,
            converged,
        }
    }

    /// Far in the tails the probability of leaving the box is pinned between
    /// the second-order Bonferroni bound and the Hunter-Worsley bound, both
    /// exact sums of bivariate t probabilities. Returns their midpoint when
    /// the bracket is narrower than the accuracy target.
    ///
    /// This matters with strong correlations: the lattice integrand of a tiny
    /// complement is then a narrow spike that finite point sets under-sample.
    fn tail_bracket(
        &self,
        lower: &[f64],
        upper: &[f64],
        r: &CorrelationMatrix,
    ) -> Option<ProbResult> {
        if !bivariate::supports(self.df) {
            return None;
        }
        let (lo, hi) = exceedance_bounds(self.df as u32, lower, upper, r);
        let width = hi - lo;
        let rel_ok = self.opts.rel_tol >= 1.0 || width <= self.opts.rel_tol * lo;
        (width <= 0.1 * self.opts.abs_tol && rel_ok).then(|| {
            let comp = 0.5 * (lo + hi);
            ProbResult {
                value: 1.0 - comp,
                complement: comp,
                error_estimate: 0.5 * width,
                converged: true,
            }
        })
    }

    fn lattice(&self, lower: &[f64], upper: &[f64], r: &CorrelationMatrix) -> Result<ProbResult> {
        let plan = SovPlan::new(lower, upper, r);
        let scale = self.chi.as_deref();
        let ndim = plan.uniforms_needed() + usize::from(scale.is_some());
        if ndim == 0 {
            // Single non-degenerate variable and normal scale: closed form.
            let (v, c) = plan.evaluate(&[], 1.0, &mut Vec::new());
            return Ok(ProbResult::exact(v, c));
        }
        // In the upper-tail regime the complement lives at small chi scales;
        // draw the scale from a compressed proposal and reweight.
        let tilt = scale.and_then(|_| {
            let c = tail_distance(lower, upper);
            (c > 4.0).then(|| {
                let k = (self.df / (self.df + c * c)).sqrt();
                (k, c, self.df * k.ln())
            })
        });
        let generators = richtmyer_generators(ndim);
        let mut rng = ChaCha8Rng::seed_from_u64(self.opts.seed);
        let mut n = (16 * ndim).max(32);
        let mut used = 0usize;
        let mut value = 0.0;
        let mut comp = 0.0;
        let mut var = f64::INFINITY;
        let mut x = vec![0.0; ndim];
        let mut y = Vec::with_capacity(plan.m);
        loop {
            let mut sum_v = 0.0;
            let mut sum_c = 0.0;
            let mut sq_c = 0.0;
            for _ in 0..SHIFTS {
                let shift: Vec<f64> = (0..ndim).map(|_| rng.random::<f64>()).collect();
                let mut acc_v = 0.0;
                let mut acc_c = 0.0;
                for k in 1..=n {
                    for d in 0..ndim {
                        let w = (k as f64 * generators[d] + shift[d]).fract();
                        x[d] = (2.0 * w - 1.0).abs();
                    }
                    for anti in 0..2 {
                        if anti == 1 {
                            for xd in x.iter_mut() {
                                *xd = 1.0 - *xd;
                            }
                        }
                        let (v, c) = match (scale, tilt) {
                            (Some(t), None) => {
                                let s = t.quantile(x[ndim - 1]);
                                plan.evaluate(&x[..ndim - 1], s, &mut y)
                            }
                            (Some(t), Some((k, c, ln_kdf))) => {
                                let s = k * t.quantile(x[ndim - 1]);
                                let (_, comp) = plan.evaluate(&x[..ndim - 1], s, &mut y);
                                // weight f(s) / f_proposal(s) = k^df exp(c^2 s^2 / 2)
                                let wc = comp * (ln_kdf + 0.5 * c * c * s * s).exp();
                                (1.0 - wc, wc)
                            }
                            (None, _) => plan.evaluate(&x, 1.0, &mut y),
                        };
                        acc_v += v;
                        acc_c += c;
                    }
                }
                let mv = acc_v / (2 * n) as f64;
                let mc = acc_c / (2 * n) as f64;
                sum_v += mv;
                sum_c += mc;
                sq_c += mc * mc;
            }
            used += SHIFTS * 2 * n;
            let est_v = sum_v / SHIFTS as f64;
            let est_c = sum_c / SHIFTS as f64;
            // variance of the mean over shifts
            let batch_var = (sq_c / SHIFTS as f64 - est_c * est_c).max(0.0) / (SHIFTS - 1) as f64;
            if var.is_infinite() {
                value = est_v;
                comp = est_c;
                var = batch_var;
            } else if batch_var == 0.0 && var == 0.0 {
                value = 0.5 * (value + est_v);
                comp = 0.5 * (comp + est_c);
            } else {
                let w_old = batch_var / (var + batch_var);
                value = w_old * value + (1.0 - w_old) * est_v;
                comp = w_old * comp + (1.0 - w_old) * est_c;
                var = var * batch_var / (var + batch_var);
            }
            let err = 3.0 * var.sqrt();
            let small = match self.opts.relative_to {
                RelativeTo::Smaller => value.min(comp),
                RelativeTo::Complement => comp,
            }
            .max(0.0);
            let rel_ok =
                self.opts.rel_tol >= 1.0 || err <= self.opts.rel_tol * small || err <= 1e-15;
            let decided = self
                .opts
                .decision_level
                .is_some_and(|t| (comp - t).abs() > err);
            let tol_ok = (err <= self.opts.abs_tol && rel_ok) || decided;
            if tol_ok || used >= self.opts.max_points {
                let comp = comp.clamp(0.0, 1.0);
                let value = value.clamp(0.0, 1.0);
                return Ok(ProbResult {
                    value,
                    complement: comp,
                    error_estimate: err,
                    converged: tol_ok,
                });
            }
            n = n * 3 / 2 + 1;
        }
    }
}

/// Lower and upper bounds on `P(T outside the box)` from single and pairwise
/// exceedance probabilities.
pub fn exceedance_bounds(
    nu: u32,
    lower: &[f64],
    upper: &[f64],
    r: &CorrelationMatrix,
) -> (f64, f64) {
    let df = f64::from(nu);
    // events: (coordinate, signed limit), T_i > b or -T_i > -a
    let mut events: Vec<(usize, f64, f64)> = Vec::new();
    for (i, (&a, &b)) in lower.iter().zip(upper).enumerate() {
        if b.is_finite() {
            events.push((i, 1.0, b));
        }
        if a.is_finite() {
            events.push((i, -1.0, -a));
        }
    }
    let n = events.len();
    let single: f64 = events.iter().map(|&(_, _, c)| t_sf(c, df)).sum();
    let mut pair = vec![0.0; n * n];
    let mut pair_sum = 0.0;
    for x in 0..n {
        for y in x + 1..n {
            let (i, si, ci) = events[x];
            let (j, sj, cj) = events[y];
            let p = if i == j {
                0.0
            } else {
                bivariate::bvt_lower(nu, -ci, -cj, si * sj * r.get(i, j))
            };
            pair[x * n + y] = p;
            pair[y * n + x] = p;
            pair_sum += p;
        }
    }
    // maximum spanning tree of the pairwise probabilities (Prim)
    let mut tree = 0.0;
    if n > 1 {
        let mut in_tree = vec![false; n];
        let mut best = vec![f64::NEG_INFINITY; n];
        in_tree[0] = true;
        best[1..n].copy_from_slice(&pair[1..n]);
        for _ in 1..n {
            let (next, w) = (0..n).filter(|&y| !in_tree[y]).map(|y| (y, best[y])).fold(
                (usize::MAX, f64::NEG_INFINITY),
                |acc, c| if c.1 > acc.1 { c } else { acc },
            );
            in_tree[next] = true;
            tree += w;
            for y in 0..n {
                if !in_tree[y] {
                    best[y] = best[y].max(pair[next * n + y]);
                }
            }
        }
    }
    let max_single = events
        .iter()
        .map(|&(_, _, c)| t_sf(c, df))
        .fold(0.0, f64::max);
    let lo = (single - pair_sum).max(max_single);
    let hi = (single - tree).min(1.0).max(lo);
    (lo, hi)
}

/// Smallest distance from the origin to a bounding hyperplane of the box,
/// zero when the origin lies outside or on the boundary.
fn tail_distance(lower: &[f64], upper: &[f64]) -> f64 {
    lower
        .iter()
        .zip(upper)
        .map(|(&a, &b)| (-a).min(b))
        .fold(f64::INFINITY, f64::min)
        .max(0.0)
}

/// Integration range for the chi scale carrying all but ~1e-17 of its mass.
fn scale_range(df: f64) -> (f64, f64) {
    let hi = ((df + 60.0 + 15.0 * df.sqrt()) / df).sqrt();
    let lo = ((df - 12.0 * (2.0 * df).sqrt()) / df).max(0.0).sqrt();
    (lo, hi)
}

/// Variables left after merging perfectly correlated coordinates and
/// dropping unbounded ones.
struct Reduced {
    index: Vec<usize>,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

/// Returns `None` when the region is empty.
fn reduce(lower: &[f64], upper: &[f64], corr: &CorrelationMatrix) -> Option<Reduced> {
    let n = corr.dim();
    let mut lo = lower.to_vec();
    let mut hi = upper.to_vec();
    let mut alias: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        for k in 0..i {
            if alias[k].is_some() {
                continue;
            }
            let r = corr.get(i, k);
            if r >= 1.0 - 1e-12 {
                lo[k] = lo[k].max(lo[i]);
                hi[k] = hi[k].min(hi[i]);
                alias[i] = Some(k);
                break;
            } else if r <= -1.0 + 1e-12 {
                lo[k] = lo[k].max(-hi[i]);
                hi[k] = hi[k].min(-lo[i]);
                alias[i] = Some(k);
                break;
            }
        }
    }
    let mut out = Reduced {
        index: Vec::new(),
        lower: Vec::new(),
        upper: Vec::new(),
    };
    for i in 0..n {
        if alias[i].is_some() {
            continue;
        }
        if lo[i] >= hi[i] {
            return None;
        }
        if lo[i] == f64::NEG_INFINITY && hi[i] == f64::INFINITY {
            continue;
        }
        out.index.push(i);
        out.lower.push(lo[i]);
        out.upper.push(hi[i]);
    }
    Some(out)
}

/// Separation-of-variables plan: reordered, row-normalised Cholesky factor
/// and limits.
struct SovPlan {
    m: usize,
    /// Row-normalised lower-triangular factor (unit diagonal on active rows).
    l: DMatrix<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    /// Number of leading non-degenerate rows.
    active: usize,
}

impl SovPlan {
    fn new(lower: &[f64], upper: &[f64], r: &CorrelationMatrix) -> Self {
        let m = lower.len();
        let mut cov = r.as_matrix().clone();
        let mut a = lower.to_vec();
        let mut b = upper.to_vec();
        let mut l = DMatrix::<f64>::zeros(m, m);
        let mut y = vec![0.0; m];
        let mut active = m;
        for i in 0..m {
            // Prioritise the variable with the smallest conditional probability.
            let mut best: Option<(usize, f64)> = None;
            for j in i..m {
                let ss: f64 = (0..i).map(|k| l[(j, k)] * l[(j, k)]).sum();
                let den = (cov[(j, j)] - ss).max(0.0).sqrt();
                if den <= DEGENERATE_PIVOT {
                    continue;
                }
                let shift: f64 = (0..i).map(|k| l[(j, k)] * y[k]).sum();
                let lo = (a[j] - shift) / den;
                let hi = (b[j] - shift) / den;
                let p = interval_prob(lo, hi);
                if best.is_none_or(|(_, bp)| p < bp) {
                    best = Some((j, p));
                }
            }
            let Some((j, _)) = best else {
                active = i;
                break;
            };
            if j != i {
                cov.swap_rows(i, j);
                cov.swap_columns(i, j);
                l.swap_rows(i, j);
                a.swap(i, j);
                b.swap(i, j);
            }
            let ss: f64 = (0..i).map(|k| l[(i, k)] * l[(i, k)]).sum();
            let d = (cov[(i, i)] - ss).max(0.0).sqrt();
            l[(i, i)] = d;
            for row in (i + 1)..m {
                let s: f64 = (0..i).map(|k| l[(row, k)] * l[(i, k)]).sum();
                l[(row, i)] = (cov[(row, i)] - s) / d;
            }
            let shift: f64 = (0..i).map(|k| l[(i, k)] * y[k]).sum();
            let lo = (a[i] - shift) / d;
            let hi = (b[i] - shift) / d;
            y[i] = truncated_mean(lo, hi);
        }
        // Normalise active rows so the diagonal is one.
        for i in 0..active {
            let d = l[(i, i)];
            for k in 0..=i {
                l[(i, k)] /= d;
            }
            a[i] /= d;
            b[i] /= d;
        }
        SovPlan {
            m,
            l,
            lower: a,
            upper: b,
            active,
        }
    }

    fn uniforms_needed(&self) -> usize {
        if self.active < self.m {
            self.active
        } else {
            self.active - 1
        }
    }

    /// Integrand value and its complement at uniforms `w` and chi scale `s`.
    fn evaluate(&self, w: &[f64], s: f64, y: &mut Vec<f64>) -> (f64, f64) {
        y.clear();
        let mut ln_inside = 0.0;
        for i in 0..self.active {
            let shift: f64 = (0..i).map(|k| self.l[(i, k)] * y[k]).sum();
            let lo = self.lower[i] * s - shift;
            let hi = self.upper[i] * s - shift;
            let below = norm_cdf(lo);
            let above = norm_sf(hi);
            let outside = below + above;
            if outside >= 1.0 {
                return (0.0, 1.0);
            }
            let inside = if lo > 0.0 {
                norm_sf(lo) - above
            } else if hi < 0.0 {
                norm_cdf(hi) - below
            } else {
                1.0 - outside
            };
            if inside <= 0.0 {
                return (0.0, 1.0);
            }
            ln_inside += if outside < 0.5 {
                (-outside).ln_1p()
            } else {
                inside.ln()
            };
            if i < w.len() {
                let u = w[i];
                let yi = if lo > 0.0 {
                    -norm_quantile_fast(norm_sf(lo) - u * inside)
                } else {
                    norm_quantile_fast(below + u * inside)
                };
                y.push(yi.clamp(lo, hi));
            }
        }
        for i in self.active..self.m {
            let v: f64 = (0..self.active).map(|k| self.l[(i, k)] * y[k]).sum();
            if v < self.lower[i] * s || v > self.upper[i] * s {
                return (0.0, 1.0);
            }
        }
        (ln_inside.exp(), -ln_inside.exp_m1())
    }
}

fn interval_prob(lo: f64, hi: f64) -> f64 {
    if lo > 0.0 {
        norm_sf(lo) - norm_sf(hi)
    } else {
        norm_cdf(hi) - norm_cdf(lo)
    }
}

/// `E[Z | lo < Z < hi]` for a standard normal `Z`.
fn truncated_mean(lo: f64, hi: f64) -> f64 {
    let p = interval_prob(lo, hi);
    let pdf = |x: f64| if x.is_finite() { norm_pdf(x) } else { 0.0 };
    if p > 1e-300 {
        ((pdf(lo) - pdf(hi)) / p).clamp(lo, hi)
    } else if lo.is_finite() && hi.is_finite() {
        0.5 * (lo + hi)
    } else if lo.is_finite() {
        lo
    } else {
        hi
    }
}

/// Fractional parts of square roots of the first primes.
fn richtmyer_generators(dim: usize) -> Vec<f64> {
    let mut primes = Vec::with_capacity(dim);
    let mut c = 2u64;
    while primes.len() < dim {
        if (2..c)
            .take_while(|d| d * d <= c)
            .all(|d| !c.is_multiple_of(d))
        {
            primes.push(c);
        }
        c += 1;
    }
    primes.iter().map(|&p| (p as f64).sqrt().fract()).collect()
}

/// `P(T <= b)` for the central multivariate t with correlation `r` and `df`
/// degrees of freedom (`f64::INFINITY` for the normal), default options.
pub fn mvt_cdf(b: &[f64], r: &CorrelationMatrix, df: f64) -> Result<ProbResult> {
    MvtIntegrator::new(df, MvtOptions::default())?.cdf(b, r)
}
