use nalgebra::DMatrix;
#[cfg(test)]
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::scenario::{Design, Scenario};
use crate::error::{Error, Result};
use crate::inference::{adjusted_p_block, marginal_p_with, Alternative, MarginalMode};
use crate::models::{
    dunnett_contrasts, fit_all, joint_inference, ContrastSet, CovarianceKind, Dataset,
};
use crate::mvdist::sample::{fill_rows, prepare};
use crate::mvdist::{MvtIntegrator, MvtOptions};

/// Resampling attempts allowed for a degenerate replicate.
pub const MAX_RETRIES: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimOptions {
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
    /// Absolute error target of each multivariate t probability.
    pub abs_tol: f64,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions {
            workers: None,
            abs_tol: 1e-3,
        }
    }
}

/// p-values of one simulated trial, resolved only as far as their comparison
/// with the scenario's alpha requires.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicateRecord {
    /// Joint max-T adjusted p-values over all hypotheses.
    pub adjusted: Vec<f64>,
    /// Per-endpoint p-values (within-endpoint adjusted when an endpoint has
    /// several contrasts).
    pub marginal: Vec<f64>,
    /// Data sets discarded as degenerate before this one.
    pub resampled: u32,
}

/// Empirical rejection rates of one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerRow {
    pub iut: f64,
    pub uit: f64,
    pub m: Vec<f64>,
    pub e: Vec<f64>,
    pub aia: f64,
    /// `aia / iut`, absent when `iut = 0`.
    pub rr: Option<f64>,
    pub sims: usize,
    /// Degenerate data sets that were redrawn.
    pub resampled: u64,
}

/// Shared per-scenario state: sampling factor, contrasts and integrator.
struct Prepared<'a> {
    sc: &'a Scenario,
    factor: DMatrix<f64>,
    contrasts: ContrastSet,
    integ: MvtIntegrator,
    levels: Vec<String>,
    group_index: Vec<usize>,
    names: Vec<String>,
}

impl<'a> Prepared<'a> {
    fn new(sc: &'a Scenario, opts: &SimOptions) -> Result<Self> {
        sc.validate()?;
        let mu0: Vec<f64> = sc.means.row(0).iter().copied().collect();
        let factor = prepare(&mu0, &sc.sds, &sc.rho)?;
        let k = sc.k();
        let df = (sc.group_sizes.iter().sum::<usize>() - k) as f64;
        let mvt = MvtOptions {
            abs_tol: opts.abs_tol,
            // only comparisons with alpha matter here
            rel_tol: 1.0,
            decision_level: Some(sc.alpha),
            ..MvtOptions::default()
        };
        let levels: Vec<String> = (0..k)
            .map(|g| {
                if g == 0 {
                    "C".to_string()
                } else {
                    format!("D{g}")
                }
            })
            .collect();
        let group_index = sc
            .group_sizes
            .iter()
            .enumerate()
            .flat_map(|(g, &n)| std::iter::repeat_n(g, n))
            .collect();
        Ok(Prepared {
            sc,
            factor,
            contrasts: dunnett_contrasts(k)?,
            integ: MvtIntegrator::new(df, mvt)?,
            levels,
            group_index,
            names: (1..=sc.n_endpoints()).map(|j| format!("E{j}")).collect(),
        })
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> Result<Dataset> {
        let n: usize = self.sc.group_sizes.iter().sum();
        let mut y = DMatrix::zeros(n, self.sc.n_endpoints());
        let mut start = 0;
        for (g, &ng) in self.sc.group_sizes.iter().enumerate() {
            let mu: Vec<f64> = self.sc.means.row(g).iter().copied().collect();
            fill_rows(
                &mut y,
                start..start + ng,
                &mu,
                &self.sc.sds,
                &self.factor,
                rng,
            );
            start += ng;
        }
        Dataset::from_levels(
            self.levels.clone(),
            self.group_index.clone(),
            y,
            self.names.clone(),
        )
    }

    fn replicate(&self, rep: u64) -> Result<ReplicateRecord> {
        let mut resampled = 0;
        loop {
            let mut rng = replicate_rng(self.sc.seed, rep, resampled);
            let data = self.draw(&mut rng)?;
            let fits = fit_all(&data)?;
            match joint_inference(&fits, &self.contrasts, CovarianceKind::ModelBased) {
                Ok(ji) => {
                    let integ = self.integ.with_seed(integration_seed(self.sc.seed, rep));
                    let adjusted =
                        adjusted_p_block(&integ, &ji.t_stats, &ji.corr, Alternative::Greater)?;
                    let marginal = marginal_p_with(
                        &integ,
                        &ji,
                        Alternative::Greater,
                        &ji.endpoint_partition(),
                        MarginalMode::WithinEndpoint,
                    )?;
                    return Ok(ReplicateRecord {
                        adjusted,
                        marginal,
                        resampled,
                    });
                }
                Err(Error::SingularDesign(msg)) => {
                    resampled += 1;
                    log::warn!("replicate {rep}: degenerate data ({msg}); redrawing");
                    if resampled > MAX_RETRIES {
                        return Err(Error::SingularDesign(format!(
                            "replicate {rep} stayed degenerate after {MAX_RETRIES} redraws: {msg}"
                        )));
                    }
                }
                Err(e) => return Err(e),
            }
        }
    }
}

/// Random stream of replicate `rep`: the scenario seed keys a ChaCha
/// generator and the replicate index selects its stream, so every replicate
/// is reproducible on its own.
pub fn replicate_rng(seed: u64, rep: u64, attempt: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(rep);
    // redraws continue far beyond any single data set in the same stream
    rng.set_word_pos(u128::from(attempt) << 64);
    rng
}

fn integration_seed(seed: u64, rep: u64) -> u64 {
    // splitmix64 finaliser over the pair
    let mut z = seed ^ rep.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn run_replicate(sc: &Scenario, rep: u64) -> Result<ReplicateRecord> {
    Prepared::new(sc, &SimOptions::default())?.replicate(rep)
}

pub fn simulate_power(sc: &Scenario) -> Result<PowerRow> {
    simulate_power_with(sc, &SimOptions::default())
}

#[derive(Debug, Clone, Default)]
struct Tally {
    iut: u64,
    uit: u64,
    aia: u64,
    m: Vec<u64>,
    e: Vec<u64>,
    resampled: u64,
}

impl Tally {
    fn zero(h: usize) -> Self {
        Tally {
            m: vec![0; h],
            e: vec![0; h],
            ..Tally::default()
        }
    }

    fn add(mut self, rec: &ReplicateRecord, alpha: f64) -> Self {
        let adj_rej: Vec<bool> = rec.adjusted.iter().map(|&p| p < alpha).collect();
        let mar_rej: Vec<bool> = rec.marginal.iter().map(|&p| p < alpha).collect();
        self.iut += u64::from(mar_rej.iter().all(|&r| r));
        self.uit += u64::from(adj_rej.iter().any(|&r| r));
        self.aia += u64::from(adj_rej.iter().all(|&r| r));
        for (c, &r) in self.m.iter_mut().zip(&adj_rej) {
            *c += u64::from(r);
        }
        for (c, &r) in self.e.iter_mut().zip(&mar_rej) {
            *c += u64::from(r);
        }
        self.resampled += u64::from(rec.resampled);
        self
    }

    fn merge(mut self, other: Tally) -> Self {
        self.iut += other.iut;
        self.uit += other.uit;
        self.aia += other.aia;
        for (a, b) in self.m.iter_mut().zip(other.m) {
            *a += b;
        }
        for (a, b) in self.e.iter_mut().zip(other.e) {
            *a += b;
        }
        self.resampled += other.resampled;
        self
    }
}

/// Rejection rates over `sc.sims` replicates.
///
/// Replicates are independent and tallied with integer counts, so the result
/// is identical for any number of workers.
pub fn simulate_power_with(sc: &Scenario, opts: &SimOptions) -> Result<PowerRow> {
    let prep = Prepared::new(sc, opts)?;
    let h = sc.n_hypotheses();
    let alpha = sc.alpha;
    let run = || {
        (0..sc.sims as u64)
            .into_par_iter()
            .map(|rep| prep.replicate(rep))
            .try_fold(|| Tally::zero(h), |t, rec| rec.map(|r| t.add(&r, alpha)))
            .try_reduce(|| Tally::zero(h), |a, b| Ok(a.merge(b)))
    };
    let tally = match opts.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| Error::invalid("workers", e.to_string()))?
            .install(run)?,
        None => run()?,
    };
    let n = sc.sims as f64;
    let rate = |c: u64| c as f64 / n;
    let iut = rate(tally.iut);
    let aia = rate(tally.aia);
    if sc.design == Design::TwoSample && tally.aia > tally.iut {
        log::debug!("aia count {} exceeds iut count {}", tally.aia, tally.iut);
    }
    Ok(PowerRow {
        iut,
        uit: rate(tally.uit),
        m: tally.m.into_iter().map(rate).collect(),
        e: tally.e.into_iter().map(rate).collect(),
        aia,
        rr: (tally.iut > 0).then(|| tally.aia as f64 / tally.iut as f64),
        sims: sc.sims,
        resampled: tally.resampled,
    })
}

/// One result per scenario; a failing row does not stop the others.
pub fn run_table(rows: &[Scenario], opts: &SimOptions) -> Result<Vec<Result<PowerRow>>> {
    if rows.is_empty() {
        return Err(Error::invalid("rows", "at least one scenario is required"));
    }
    Ok(rows
        .iter()
        .map(|sc| simulate_power_with(sc, opts))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inference::raw_p;
    use crate::mvdist::CorrelationMatrix;

    fn scenario(k: usize, j: usize, shift: f64, rho: f64, sims: usize) -> Scenario {
        let mut means = DMatrix::zeros(k, j);
        for g in 1..k {
            for e in 0..j {
                means[(g, e)] = shift;
            }
        }
        Scenario::new(
            vec![10; k],
            means,
            vec![1.0; j],
            CorrelationMatrix::equicorrelated(j, rho).unwrap(),
            0.05,
            sims,
            99,
        )
        .unwrap()
    }

    #[test]
    fn singleton_family_adjusted_is_raw() {
        let sc = scenario(2, 1, 0.5, 0.0, 1);
        for rep in 0..20 {
            let rec = run_replicate(&sc, rep).unwrap();
            assert_eq!(rec.adjusted, rec.marginal);
        }
    }

    #[test]
    fn raw_null_p_values_are_uniform() {
        let sc = scenario(2, 1, 0.0, 0.0, 1);
        let prep = Prepared::new(&sc, &SimOptions::default()).unwrap();
        let mut p: Vec<f64> = (0..10_000)
            .map(|r| prep.replicate(r).unwrap().marginal[0])
            .collect();
        p.sort_by(f64::total_cmp);
        let n = p.len() as f64;
        let d = p
            .iter()
            .enumerate()
            .map(|(i, &x)| (x - i as f64 / n).max((i + 1) as f64 / n - x))
            .fold(0.0, f64::max);
        // 1% critical value of the one-sample KS statistic
        assert!(d < 1.628 / n.sqrt(), "D = {d}");
    }

    #[test]
    fn null_size_of_single_endpoint() {
        let sc = scenario(2, 1, 0.0, 0.0, 4000);
        let row = simulate_power(&sc).unwrap();
        let band = 3.0 * (0.05_f64 * 0.95 / 4000.0).sqrt();
        assert!((row.e[0] - 0.05).abs() < band, "{row:?}");
    }

    #[test]
    fn huge_effect_has_full_power() {
        for k in [2, 3] {
            let row = simulate_power(&scenario(k, 2, 100.0, 0.5, 50)).unwrap();
            assert_eq!(row.iut, 1.0);
            assert_eq!(row.uit, 1.0);
            assert_eq!(row.aia, 1.0);
            assert!(row.m.iter().chain(&row.e).all(|&r| r == 1.0));
            assert_eq!(row.rr, Some(1.0));
        }
    }

    #[test]
    fn rates_are_nested() {
        let row = simulate_power(&scenario(3, 2, 0.8, 0.6, 300)).unwrap();
        for &m in &row.m {
            assert!(row.aia <= m && m <= row.uit, "{row:?}");
        }
        let sc = scenario(2, 3, 0.9, 0.7, 300);
        let prep = Prepared::new(&sc, &SimOptions::default()).unwrap();
        for rep in 0..300 {
            let rec = prep.replicate(rep).unwrap();
            if rec.adjusted.iter().all(|&p| p < 0.05) {
                assert!(rec.marginal.iter().all(|&p| p < 0.05), "{rec:?}");
            }
            for (a, m) in rec.adjusted.iter().zip(&rec.marginal) {
                assert!(a >= m);
            }
        }
    }

    #[test]
    fn marginal_p_matches_univariate_t() {
        let sc = scenario(2, 2, 0.3, 0.2, 1);
        let prep = Prepared::new(&sc, &SimOptions::default()).unwrap();
        let mut rng = replicate_rng(sc.seed, 0, 0);
        let data = prep.draw(&mut rng).unwrap();
        let ji = joint_inference(
            &fit_all(&data).unwrap(),
            &prep.contrasts,
            CovarianceKind::ModelBased,
        )
        .unwrap();
        let rec = prep.replicate(0).unwrap();
        for (p, &t) in rec.marginal.iter().zip(&ji.t_stats) {
            assert_eq!(*p, raw_p(t, 18.0, Alternative::Greater));
        }
    }

    #[test]
    fn independent_of_worker_count() {
        let sc = scenario(3, 2, 0.7, 0.5, 200);
        let one = simulate_power_with(
            &sc,
            &SimOptions {
                workers: Some(1),
                ..SimOptions::default()
            },
        )
        .unwrap();
        let three = simulate_power_with(
            &sc,
            &SimOptions {
                workers: Some(3),
                ..SimOptions::default()
            },
        )
        .unwrap();
        assert_eq!(one, three);
    }

    #[test]
    fn table_runs_each_row() {
        assert!(run_table(&[], &SimOptions::default()).is_err());
        let sc = scenario(2, 2, 0.0, 0.9, 100);
        let rows = run_table(std::slice::from_ref(&sc), &SimOptions::default()).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].as_ref().unwrap(), &simulate_power(&sc).unwrap());
    }

    #[test]
    fn replicate_streams_differ() {
        let a = replicate_rng(1, 0, 0).random::<u64>();
        let b = replicate_rng(1, 1, 0).random::<u64>();
        let c = replicate_rng(1, 0, 1).random::<u64>();
        assert!(a != b && a != c && b != c);
        assert_eq!(a, replicate_rng(1, 0, 0).random::<u64>());
    }
}
