//! Acceptance suite: one PASS/FAIL line per criterion on stdout.
//!
//! Runs without the libtest harness so every line is printed whether or not
//! it passes; the process exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use aiaiut::cli::report::{analyze, report_options, AnalysisConfig};
use aiaiut::cli::scenarios::{parse, Overrides, ScenarioRecord};
use aiaiut::cli::{data, table};
use aiaiut::inference::{simultaneous_ci_with, test_family, Alternative, MarginalMode};
use aiaiut::models::{dunnett_contrasts, fit_all, joint_inference, CovarianceKind, Dataset};
use aiaiut::mvdist::{
    mvt_cdf, norm_cdf, norm_quantile, quantile_with, t_cdf, t_quantile, CorrelationMatrix,
    MvtIntegrator, MvtOptions, Tail,
};
use aiaiut::simulation::{run_replicate, run_table, PowerRow, SimOptions};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};

const SIMS: f64 = 10_000.0;

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    pass: bool,
    detail: String,
}

fn rate_tol(p: f64) -> f64 {
    3.0 * (p * (1.0 - p) / SIMS).sqrt() + 0.005
}

fn records(json_rows: &[String]) -> Vec<ScenarioRecord> {
    let text = format!("{{\"scenarios\": [{}]}}", json_rows.join(","));
    parse(&text, Overrides::default()).expect("valid scenarios")
}

fn simulate(recs: &[ScenarioRecord], workers: Option<usize>) -> Vec<PowerRow> {
    let scs: Vec<_> = recs.iter().map(|r| r.scenario.clone()).collect();
    run_table(
        &scs,
        &SimOptions {
            workers,
            ..SimOptions::default()
        },
    )
    .expect("valid table")
    .into_iter()
    .map(|r| r.expect("row simulates"))
    .collect()
}

/// Compares named rates against reference values; misses are listed.
fn compare_rates(
    label: &str,
    got: &[(&str, f64)],
    want: &[f64],
    misses: &mut Vec<String>,
) -> usize {
    for ((name, g), &w) in got.iter().zip(want) {
        if (g - w).abs() > rate_tol(w) {
            misses.push(format!("{label} {name} {g:.3} vs {w:.3}"));
        }
    }
    got.len()
}

fn named_rates(row: &PowerRow) -> Vec<(String, f64)> {
    let mut out = vec![("IUT".to_string(), row.iut), ("UIT".to_string(), row.uit)];
    out.extend(
        row.m
            .iter()
            .enumerate()
            .map(|(i, &p)| (format!("m{}", i + 1), p)),
    );
    out.extend(
        row.e
            .iter()
            .enumerate()
            .map(|(i, &p)| (format!("e{}", i + 1), p)),
    );
    out.push(("aiaUIT".to_string(), row.aia));
    out
}

fn rates_verdict(checked: usize, misses: Vec<String>) -> Verdict {
    Verdict {
        pass: misses.is_empty(),
        detail: if misses.is_empty() {
            format!("{checked} rates within tolerance")
        } else {
            format!(
                "{} of {checked} rates outside tolerance: {}",
                misses.len(),
                misses.join("; ")
            )
        },
    }
}

fn two_endpoint_table() -> Verdict {
    // rho, ma2, then IUT UIT m1 m2 e1 e2 aiaUIT
    let rows: [(f64, f64, [f64; 7]); 9] = [
        (0.9, 1.0, [0.046, 0.682, 0.031, 0.682, 0.046, 0.735, 0.031]),
        (0.9, 1.3, [0.233, 0.682, 0.194, 0.682, 0.233, 0.735, 0.194]),
        (0.9, 1.7, [0.654, 0.731, 0.648, 0.682, 0.699, 0.735, 0.599]),
        (0.7, 1.0, [0.046, 0.671, 0.028, 0.671, 0.046, 0.749, 0.028]),
        (0.7, 1.3, [0.227, 0.674, 0.162, 0.671, 0.233, 0.749, 0.159]),
        (0.7, 1.7, [0.616, 0.759, 0.611, 0.671, 0.699, 0.749, 0.523]),
        (0.09, 1.0, [0.041, 0.652, 0.024, 0.648, 0.046, 0.748, 0.020]),
        (0.09, 1.3, [0.191, 0.680, 0.148, 0.648, 0.233, 0.748, 0.116]),
        (0.09, 1.7, [0.535, 0.838, 0.581, 0.648, 0.699, 0.748, 0.391]),
    ];
    let json: Vec<String> = rows
        .iter()
        .map(|(rho, ma2, _)| {
            format!(
                r#"{{"n1": 20, "n2": 20, "ma1": 1, "ma2": {ma2}, "mb1": 10, "mb2": 18,
                    "sa": 1, "sb": 11, "rho": {rho}}}"#
            )
        })
        .collect();
    let power = simulate(&records(&json), None);
    let mut misses = Vec::new();
    let mut checked = 0;
    for ((rho, ma2, want), row) in rows.iter().zip(&power) {
        let got = named_rates(row);
        let got: Vec<(&str, f64)> = got.iter().map(|(n, p)| (n.as_str(), *p)).collect();
        checked += compare_rates(&format!("rho={rho} ma2={ma2}"), &got, want, &mut misses);
    }
    rates_verdict(checked, misses)
}

fn four_endpoint_table() -> Verdict {
    // IUT UIT m1..m4 e1..e4 aiaUIT
    let rows: [(f64, [f64; 11]); 2] = [
        (
            1.0,
            [
                0.061, 0.723, 0.039, 0.668, 0.639, 0.639, 0.061, 0.752, 0.727, 0.788, 0.039,
            ],
        ),
        (
            1.8,
            [
                0.659, 0.793, 0.734, 0.685, 0.664, 0.663, 0.803, 0.757, 0.739, 0.800, 0.597,
            ],
        ),
    ];
    let json: Vec<String> = rows
        .iter()
        .map(|(ma2, _)| {
            format!(
                r#"{{"n1": 20, "n2": 20, "ma1": 1, "ma2": {ma2}, "mb1": 2, "mb2": 5,
                    "mc1": 10, "mc2": 18, "md1": 0.1, "md2": 0.5,
                    "sa": 1, "sb": 4, "sc": 11, "sd": 0.5, "rho": 0.9}}"#
            )
        })
        .collect();
    let power = simulate(&records(&json), None);
    let mut misses = Vec::new();
    let mut checked = 0;
    for ((ma2, want), row) in rows.iter().zip(&power) {
        let got = named_rates(row);
        let got: Vec<(&str, f64)> = got.iter().map(|(n, p)| (n.as_str(), *p)).collect();
        checked += compare_rates(&format!("ma2={ma2}"), &got, want, &mut misses);
    }
    rates_verdict(checked, misses)
}

fn three_sample_table() -> Verdict {
    // ma2 = ma3, then IUT UIT aiaUIT
    let rows: [(f64, [f64; 3]); 2] = [(1.6, [0.28, 0.80, 0.196]), (1.9, [0.40, 0.87, 0.315])];
    let json: Vec<String> = rows
        .iter()
        .map(|(ma, _)| {
            format!(
                r#"{{"n1": 20, "n2": 20, "n3": 20, "ma1": 1, "ma2": {ma}, "ma3": {ma},
                    "mb1": 2, "mb2": 5, "mb3": 5, "mc1": 10, "mc2": 18, "mc3": 18,
                    "sa": 1, "sb": 4, "sc": 11, "rho": 0.9}}"#
            )
        })
        .collect();
    let power = simulate(&records(&json), None);
    let mut misses = Vec::new();
    let mut checked = 0;
    for ((ma, want), row) in rows.iter().zip(&power) {
        let got = [("IUT", row.iut), ("UIT", row.uit), ("aiaUIT", row.aia)];
        checked += compare_rates(&format!("ma2=ma3={ma}"), &got, want, &mut misses);
    }
    rates_verdict(checked, misses)
}

fn within(got: f64, want: f64, abs: f64, factor: f64) -> bool {
    if want > 0.005 {
        (got - want).abs() <= abs
    } else {
        got > 0.0 && got / want <= factor && want / got <= factor
    }
}

fn dose_finding_example() -> Verdict {
    let dataset = data::dose_finding()
        .into_dataset(Some("C"))
        .expect("embedded data");
    let analysis = analyze(&dataset, &AnalysisConfig::default()).expect("analysis runs");
    let names = [
        "EP1: C vs 5",
        "EP1: C vs 20",
        "EP1: C vs 80",
        "EP2: C vs 5",
        "EP2: C vs 20",
        "EP2: C vs 80",
    ];
    let adjusted = [0.681, 0.033, 0.0086, 8.47e-3, 5.13e-9, 3.21e-10];
    let marginal = [0.341, 0.008, 0.002, 1.96e-3, 5.59e-10, 3.75e-10];
    let mut misses = Vec::new();
    if analysis.joint.hypothesis_names != names {
        misses.push(format!("hypotheses {:?}", analysis.joint.hypothesis_names));
    }
    for i in 0..names.len() {
        let (a, m) = (analysis.outcome.adjusted_p[i], analysis.outcome.raw_p[i]);
        if !within(a, adjusted[i], 0.005, 3.0) {
            misses.push(format!(
                "{} adjusted {a:.3e} vs {:.3e}",
                names[i], adjusted[i]
            ));
        }
        if !within(m, marginal[i], 0.003, 2.0) {
            misses.push(format!(
                "{} marginal {m:.3e} vs {:.3e}",
                names[i], marginal[i]
            ));
        }
    }
    Verdict {
        pass: misses.is_empty(),
        detail: if misses.is_empty() {
            "12 p-values within tolerance".into()
        } else {
            format!(
                "{} of 12 p-values outside tolerance: {}",
                misses.len(),
                misses.join("; ")
            )
        },
    }
}

fn oracle_grid() -> Verdict {
    const DRAWS: usize = 10_000_000;
    let bs = [0.0, 1.0, 2.0, 3.0];
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let mut misses = Vec::new();
    let mut worst = 0.0f64;
    let mut checked = 0;
    for j in [2usize, 3, 6] {
        for rho in [0.0, 0.5, 0.9] {
            for df in [10.0, 38.0, f64::INFINITY] {
                let chi = df
                    .is_finite()
                    .then(|| ChiSquared::new(df).expect("positive df"));
                let (a, c) = (f64::sqrt(rho), f64::sqrt(1.0 - rho));
                let mut hits = [0u64; 4];
                for _ in 0..DRAWS {
                    let z0: f64 = rng.sample(StandardNormal);
                    let mut max = f64::NEG_INFINITY;
                    for _ in 0..j {
                        let z: f64 = rng.sample(StandardNormal);
                        max = max.max(a * z0 + c * z);
                    }
                    if let Some(chi) = &chi {
                        max /= (chi.sample(&mut rng) / df).sqrt();
                    }
                    for (h, &b) in hits.iter_mut().zip(&bs) {
                        *h += u64::from(max <= b);
                    }
                }
                let r = CorrelationMatrix::equicorrelated(j, rho).expect("valid correlation");
                for (&h, &b) in hits.iter().zip(&bs) {
                    let mc = h as f64 / DRAWS as f64;
                    let se_mc = (mc * (1.0 - mc) / DRAWS as f64).sqrt();
                    let p = mvt_cdf(&vec![b; j], &r, df).expect("integrates");
                    let se = (se_mc.powi(2) + (p.error_estimate / 3.0).powi(2)).sqrt();
                    let z = (p.value - mc).abs() / se.max(1e-300);
                    worst = worst.max(z);
                    if z > 3.0 {
                        misses.push(format!(
                            "J={j} rho={rho} df={df} b={b}: {:.6} vs {mc:.6}",
                            p.value
                        ));
                    }
                    checked += 1;
                }
            }
        }
    }
    Verdict {
        pass: misses.is_empty(),
        detail: format!(
            "{} of {checked} cells beyond 3 combined SE (largest {worst:.2}){}",
            misses.len(),
            if misses.is_empty() {
                String::new()
            } else {
                format!(": {}", misses.join("; "))
            }
        ),
    }
}

fn random_correlation(j: usize, rng: &mut ChaCha8Rng) -> CorrelationMatrix {
    let a = DMatrix::from_fn(j, j + 1, |_, _| rng.sample::<f64, _>(StandardNormal));
    let cov = &a * a.transpose();
    CorrelationMatrix::from_covariance(&cov).expect("positive definite")
}

fn random_dataset(rng: &mut ChaCha8Rng) -> Dataset {
    let k = rng.random_range(2..=4);
    let j = rng.random_range(1..=3);
    let sizes: Vec<usize> = (0..k).map(|_| rng.random_range(3..=12)).collect();
    let n: usize = sizes.iter().sum();
    let shift = DMatrix::from_fn(k, j, |_, _| rng.random_range(-1.5..1.5));
    let scale: Vec<f64> = (0..j).map(|_| rng.random_range(0.3..3.0)).collect();
    let coupling = rng.random_range(0.0..0.95f64);
    let mut group_index = Vec::with_capacity(n);
    let mut y = DMatrix::zeros(n, j);
    let mut row = 0;
    for (g, &size) in sizes.iter().enumerate() {
        for _ in 0..size {
            let common: f64 = rng.sample(StandardNormal);
            for e in 0..j {
                let own: f64 = rng.sample(StandardNormal);
                let z = coupling.sqrt() * common + (1.0 - coupling).sqrt() * own;
                y[(row, e)] = shift[(g, e)] + scale[e] * z;
            }
            group_index.push(g);
            row += 1;
        }
    }
    let levels = (0..k)
        .map(|g| if g == 0 { "C".into() } else { format!("D{g}") })
        .collect();
    let names = (0..j).map(|e| format!("Y{}", e + 1)).collect();
    Dataset::from_levels(levels, group_index, y, names).expect("valid data")
}

/// Invariants on 1000 random instances each.
fn invariants() -> Verdict {
    const N: usize = 1000;
    let mut rng = ChaCha8Rng::seed_from_u64(1_000_003);
    let mut failures: Vec<String> = Vec::new();
    let mut note = |name: &str, bad: usize| {
        if bad > 0 {
            failures.push(format!("{name}: {bad} of {N}"));
        }
    };

    // dominance, Bonferroni sandwich, CI/test duality, aia => uit
    let (mut dom, mut bonf, mut dual, mut aia_uit) = (0, 0, 0, 0);
    let alpha = 0.05;
    // coarser than reports so 1000 families of up to nine hypotheses stay cheap;
    // every tolerance below scales with it
    let opts = MvtOptions {
        abs_tol: 1e-3,
        ..report_options()
    };
    for _ in 0..N {
        let data = random_dataset(&mut rng);
        let alternative = [
            Alternative::Greater,
            Alternative::Less,
            Alternative::TwoSided,
        ][rng.random_range(0..3)];
        let covariance =
            [CovarianceKind::ModelBased, CovarianceKind::Sandwich][rng.random_range(0..2)];
        let fits = fit_all(&data).expect("fits");
        let contrasts = dunnett_contrasts(data.k()).expect("contrasts");
        let ji = joint_inference(&fits, &contrasts, covariance).expect("joint");
        let integ = MvtIntegrator::new(ji.df, opts).expect("integrator");
        let out =
            test_family(&integ, &ji, alpha, alternative, MarginalMode::Univariate).expect("tests");
        let ci = simultaneous_ci_with(&integ, &ji, 1.0 - alpha, alternative).expect("ci");
        let m = ji.len() as f64;
        for i in 0..ji.len() {
            let (raw, adj) = (out.raw_p[i], out.adjusted_p[i]);
            dom += usize::from(adj < raw);
            // the unclamped integral must also respect the bounds
            let t = ji.t_stats[i];
            let n = ji.len();
            let prob = match alternative {
                Alternative::Greater => integ.cdf(&vec![t; n], &ji.corr),
                Alternative::Less => integ.cdf(&vec![-t; n], &ji.corr),
                Alternative::TwoSided => {
                    integ.rectangle(&vec![-t.abs(); n], &vec![t.abs(); n], &ji.corr)
                }
            }
            .expect("integrates");
            let slack = prob.error_estimate + 1e-12;
            bonf += usize::from(
                adj > (m * raw).min(1.0)
                    || prob.complement < raw - slack
                    || prob.complement > (m * raw).min(1.0) + slack,
            );
            // the two only differ inside the integration error band around alpha
            let excludes_zero = ci.lower[i] > 0.0 || ci.upper[i] < 0.0;
            if (adj - alpha).abs() > 5.0 * opts.abs_tol {
                dual += usize::from(excludes_zero != (adj < alpha));
            }
        }
        aia_uit += usize::from(out.aia_reject && !out.uit_reject);
    }
    note("adjusted >= raw", dom);
    note("Bonferroni sandwich", bonf);
    note("CI/test duality", dual);
    note("aia => uit", aia_uit);

    // per-replicate aia => iut in two-sample scenarios
    let mut aia_iut = 0;
    for rep in 0..N as u64 {
        let rho: f64 = rng.random_range(-0.3..0.95);
        let ma2 = rng.random_range(1.0..2.0);
        let recs = records(&[format!(
            r#"{{"n1": 10, "n2": 10, "ma1": 1, "ma2": {ma2}, "mb1": 0, "mb2": 1, "mc1": 0, "mc2": 0.8,
                "sa": 1, "sb": 1.5, "sc": 1, "rho": {rho}, "seed": {rep}}}"#
        )]);
        let sc = &recs[0].scenario;
        let rec = run_replicate(sc, rep).expect("replicate");
        let aia = rec.adjusted.iter().all(|&p| p < sc.alpha);
        let iut = rec.marginal.iter().all(|&p| p < sc.alpha);
        aia_iut += usize::from(aia && !iut);
    }
    note("per-replicate aia => iut", aia_iut);

    // Frechet bounds and quantile/CDF roundtrips
    let (mut frechet, mut roundtrip) = (0, 0);
    for _ in 0..N {
        let j = rng.random_range(2..=5);
        let r = random_correlation(j, &mut rng);
        let df = [3.0, 10.0, 38.0, f64::INFINITY][rng.random_range(0..4)];
        let b: Vec<f64> = (0..j).map(|_| rng.random_range(-1.0..3.0)).collect();
        let integ = MvtIntegrator::new(df, opts).expect("integrator");
        let p = integ.cdf(&b, &r).expect("integrates");
        let marg: Vec<f64> = b
            .iter()
            .map(|&x| {
                if df.is_finite() {
                    t_cdf(x, df)
                } else {
                    norm_cdf(x)
                }
            })
            .collect();
        let upper = marg.iter().copied().fold(1.0, f64::min);
        let lower = (1.0 - marg.iter().map(|f| 1.0 - f).sum::<f64>()).max(0.0);
        let slack = p.error_estimate + 1e-12;
        frechet += usize::from(p.value < lower - slack || p.value > upper + slack);

        let level = rng.random_range(0.5..0.99);
        let q = quantile_with(&integ, level, &r, Tail::Lower).expect("quantile");
        let back = integ.cdf(&vec![q; j], &r).expect("integrates");
        let u = rng.random_range(1e-6..1.0 - 1e-6);
        let uq = if df.is_finite() {
            t_cdf(t_quantile(u, df).expect("quantile"), df)
        } else {
            norm_cdf(norm_quantile(u))
        };
        roundtrip += usize::from(
            (back.value - level).abs() > 5.0 * opts.abs_tol || (uq - u).abs() > 1e-9 * u.max(1e-3),
        );
    }
    note("Frechet bounds", frechet);
    note("quantile/CDF roundtrip", roundtrip);

    // uniformity of raw null p-values, KS at 1%
    let recs = records(&[
        r#"{"n1": 12, "n2": 12, "ma1": 0, "ma2": 0, "mb1": 5, "mb2": 5,
        "sa": 1, "sb": 2, "rho": 0.5, "seed": 99}"#
            .to_string(),
    ]);
    let sc = &recs[0].scenario;
    let mut ps: Vec<f64> = (0..N as u64)
        .map(|rep| run_replicate(sc, rep).expect("replicate").marginal[0])
        .collect();
    ps.sort_by(f64::total_cmp);
    let d = ps
        .iter()
        .enumerate()
        .map(|(i, &p)| ((i + 1) as f64 / N as f64 - p).max(p - i as f64 / N as f64))
        .fold(0.0, f64::max);
    let crit = 1.628 / (N as f64).sqrt();
    if d > crit {
        failures.push(format!(
            "null p-value uniformity: KS D = {d:.4} > {crit:.4}"
        ));
    }

    Verdict {
        pass: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("9 suites of {N} instances hold (null KS D = {d:.4})")
        } else {
            failures.join("; ")
        },
    }
}

fn determinism() -> Verdict {
    let json = [
        r#"{"n1": 20, "n2": 20, "ma1": 1, "ma2": 1.5, "mb1": 10, "mb2": 18, "sa": 1, "sb": 11,
            "rho": 0.7, "sims": 4000}"#
            .to_string(),
        r#"{"n1": 20, "n2": 20, "n3": 20, "ma1": 1, "ma2": 1.7, "ma3": 1.7, "mb1": 2, "mb2": 5, "mb3": 5,
            "mc1": 10, "mc2": 18, "mc3": 18, "sa": 1, "sb": 4, "sc": 11, "rho": 0.9, "sims": 400}"#
            .to_string(),
    ];
    let csv = |workers: usize| -> String {
        json.iter()
            .map(|row| {
                let recs = records(std::slice::from_ref(row));
                table::to_csv(&recs, &simulate(&recs, Some(workers)))
            })
            .collect()
    };
    let (one, eight, again) = (csv(1), csv(8), csv(8));
    Verdict {
        pass: one == eight && eight == again,
        detail: format!(
            "{} bytes, 1 vs 8 workers {}",
            one.len(),
            if one == eight { "identical" } else { "differ" }
        ),
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("two-endpoint power table", two_endpoint_table),
        ("four-endpoint power rows", four_endpoint_table),
        ("three-sample Dunnett power rows", three_sample_table),
        ("dose-finding example p-values", dose_finding_example),
        ("mvt_cdf vs brute-force sampling", oracle_grid),
        ("invariant suites", invariants),
        ("worker-count determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = check();
        failed += usize::from(!v.pass);
        println!(
            "criterion {} {name}: {} ({:.0?}) {}",
            i + 1,
            if v.pass { "PASS" } else { "FAIL" },
            start.elapsed(),
            v.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
