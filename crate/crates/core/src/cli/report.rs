//! Per-hypothesis report of an analysed data set.

use std::fmt::Write as _;

use super::format;
use crate::error::Result;
use crate::inference::{
    simultaneous_ci_with, test_family, Alternative, MarginalMode, SimultaneousCI, TestOutcome,
};
use crate::models::{
    dunnett_contrasts, fit_all, joint_inference, CovarianceKind, Dataset, JointInference,
};
use crate::mvdist::{MvtIntegrator, MvtOptions};

/// Lattice seed of every analysis, so reports are reproducible.
pub const INTEGRATION_SEED: u64 = 17_051_949;

/// Integration targets of reports: `1e-4` absolute, and 10% relative for
/// tail p-values (three standard errors).
pub fn report_options() -> MvtOptions {
    MvtOptions {
        abs_tol: 1e-4,
        rel_tol: 0.1,
        seed: INTEGRATION_SEED,
        ..MvtOptions::default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisConfig {
    pub alpha: f64,
    pub alternative: Alternative,
    pub covariance: CovarianceKind,
    pub marginal: MarginalMode,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            alpha: 0.05,
            alternative: Alternative::Greater,
            covariance: CovarianceKind::Sandwich,
            marginal: MarginalMode::Univariate,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub joint: JointInference,
    pub outcome: TestOutcome,
    /// Limits at level `1 - alpha`.
    pub ci: SimultaneousCI,
}

/// Dunnett contrasts of every endpoint against the control level.
pub fn analyze(data: &Dataset, cfg: &AnalysisConfig) -> Result<Analysis> {
    let fits = fit_all(data)?;
    let contrasts = dunnett_contrasts(data.k())?.with_labels(data.levels())?;
    let joint = joint_inference(&fits, &contrasts, cfg.covariance)?;
    let integ = MvtIntegrator::new(joint.df, report_options())?;
    let outcome = test_family(&integ, &joint, cfg.alpha, cfg.alternative, cfg.marginal)?;
    let ci = simultaneous_ci_with(&integ, &joint, 1.0 - cfg.alpha, cfg.alternative)?;
    Ok(Analysis { joint, outcome, ci })
}

impl Analysis {
    /// `hypothesis,estimate,std_error,t,adjusted_p,marginal_p`.
    pub fn report_csv(&self) -> String {
        let mut out = String::from("hypothesis,estimate,std_error,t,adjusted_p,marginal_p\n");
        let ji = &self.joint;
        for i in 0..ji.len() {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                ji.hypothesis_names[i],
                format::value(ji.estimates[i]),
                format::value(ji.std_errors[i]),
                format::value(ji.t_stats[i]),
                format::prob(self.outcome.adjusted_p[i]),
                format::prob(self.outcome.raw_p[i]),
            )
            .expect("writing to a String");
        }
        out
    }

    /// `hypothesis,estimate,lower,upper`, ready for plotting.
    pub fn ci_csv(&self) -> String {
        let mut out = String::from("hypothesis,estimate,lower,upper\n");
        let ji = &self.joint;
        for i in 0..ji.len() {
            writeln!(
                out,
                "{},{},{},{}",
                ji.hypothesis_names[i],
                format::value(ji.estimates[i]),
                format::value(self.ci.lower[i]),
                format::value(self.ci.upper[i]),
            )
            .expect("writing to a String");
        }
        out
    }

    pub fn summary(&self) -> String {
        let o = &self.outcome;
        let width = self
            .joint
            .hypothesis_names
            .iter()
            .map(String::len)
            .max()
            .unwrap_or(0)
            .max(10);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<width$}  {:>10}  {:>10}",
            "hypothesis", "p aiaUIT", "p IUT"
        );
        for (i, name) in self.joint.hypothesis_names.iter().enumerate() {
            let _ = writeln!(
                out,
                "{name:<width$}  {:>10}  {:>10}",
                format::prob(o.adjusted_p[i]),
                format::prob(o.raw_p[i])
            );
        }
        let verdict = |r: bool| if r { "reject" } else { "do not reject" };
        let _ = writeln!(out, "df = {}, alpha = {}", self.joint.df, o.alpha);
        let _ = writeln!(
            out,
            "IUT:    p_max = {}  -> {}",
            format::prob(o.p_iut_max),
            verdict(o.iut_reject)
        );
        let _ = writeln!(
            out,
            "aiaUIT: p_max = {}  -> {}",
            format::prob(o.p_aia_max),
            verdict(o.aia_reject)
        );
        let _ = writeln!(out, "UIT:    {}", verdict(o.uit_reject));
        out
    }
}
