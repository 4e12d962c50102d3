//! Monte Carlo engine: null distributions, critical values, power curves
//! and empirical verification of the tail bounds.
//!
//! Every replicate derives its own seed from (master seed, replicate index),
//! so results are bit-identical no matter how many workers run or how the
//! scheduler interleaves them. Sweeping the signal strength r reuses the
//! same replicate seeds, which gives common random numbers across a power
//! curve.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Error;
use crate::gof::{self, SortedPValues};
use crate::models::{generate, SignalConfig};
use crate::regions::{ApproxLevel, Shape};
use crate::rng::{self, tag};
use crate::structured::{Evaluator, Family, GridData};
use crate::theory;
use crate::Result;

/// A statistic plus the approximating-set shape it scans with. The shape
/// fixes the data dimension; plain cell statistics ignore the set itself.
#[derive(Clone, Copy, Debug)]
pub struct StatSpec {
    pub family: Family,
    pub shape: Shape,
}

impl StatSpec {
    pub fn new(family: Family, shape: Shape) -> Result<StatSpec> {
        if matches!(family, Family::Pn | Family::PnApp) && shape != Shape::Interval {
            return Err(Error::config(format!(
                "penalized scans are one-dimensional, got shape {shape}"
            )));
        }
        Ok(StatSpec { family, shape })
    }

    pub fn name(&self) -> String {
        self.family.to_string()
    }

    pub fn dim(&self) -> usize {
        self.shape.dim()
    }

    /// Approximating set for this statistic at grid side n; empty when the
    /// statistic does not scan one.
    pub fn build_levels(&self, n: usize) -> Result<Vec<ApproxLevel>> {
        if !self.family.needs_levels() {
            return Ok(Vec::new());
        }
        match self.shape {
            Shape::Interval => crate::regions::build_interval_levels(n),
            Shape::Rect => crate::regions::build_rectangle_levels(n, 2),
            Shape::Ball => crate::regions::build_ball_levels(n),
        }
    }
}

/// Null-simulation output: sorted statistic values plus enough metadata to
/// reproduce them.
#[derive(Clone, Debug, Serialize)]
pub struct McReport {
    pub statistic: String,
    pub n: usize,
    pub d: usize,
    pub n_reps: usize,
    pub master_seed: u64,
    /// Replicate values sorted ascending.
    pub values: Vec<f64>,
    pub wall_time: f64,
}

/// Pure-noise grid for one replicate.
pub fn null_grid(n: usize, d: usize, replicate_seed: u64) -> GridData {
    let key = rng::derive(replicate_seed, tag::NOISE, 0);
    let len = n.pow(d as u32);
    let cells: Vec<f64> = (0..len).map(|i| rng::normal_at(key, i as u64)).collect();
    match d {
        1 => GridData::from_1d(cells),
        _ => GridData::from_2d(cells, n),
    }
    .expect("noise cells are finite")
}

/// Simulate the statistic's null distribution.
pub fn simulate_null(
    spec: &StatSpec,
    n: usize,
    reps: usize,
    master_seed: u64,
) -> Result<McReport> {
    Ok(simulate_null_many(&[*spec], n, reps, master_seed)?
        .pop()
        .expect("one report"))
}

/// Simulate several statistics on shared null replicates. Each statistic's
/// values match what a lone `simulate_null` run would produce bit for bit;
/// sharing the per-replicate sort pipeline just avoids paying for it once
/// per statistic. All level-scanning statistics in one run must agree on
/// shape, and every statistic must match the run's dimension.
pub fn simulate_null_many(
    specs: &[StatSpec],
    n: usize,
    reps: usize,
    master_seed: u64,
) -> Result<Vec<McReport>> {
    if specs.is_empty() {
        return Err(Error::config("need at least one statistic"));
    }
    if reps < 100 {
        return Err(Error::config(format!(
            "need at least 100 replicates, got {reps}"
        )));
    }
    let d = specs[0].dim();
    let mut level_spec: Option<&StatSpec> = None;
    for spec in specs {
        if spec.dim() != d {
            return Err(Error::config(format!(
                "{} is {}-dimensional but this run is {d}-dimensional",
                spec.name(),
                spec.dim()
            )));
        }
        if spec.family.needs_levels() {
            match level_spec {
                None => level_spec = Some(spec),
                Some(s) if s.shape == spec.shape => {}
                Some(s) => {
                    return Err(Error::config(format!(
                        "one run scans one approximating set: {} vs {}",
                        s.shape, spec.shape
                    )));
                }
            }
        }
    }
    let levels = match level_spec {
        Some(spec) => spec.build_levels(n)?,
        None => Vec::new(),
    };
    let families: Vec<Family> = specs.iter().map(|s| s.family).collect();
    let t0 = Instant::now();
    let rows = (0..reps)
        .into_par_iter()
        .map_init(
            || Evaluator::new(&levels),
            |ev, k| {
                let data = null_grid(n, d, rng::derive(master_seed, tag::REPLICATE, k as u64));
                ev.eval_many(&data, &families)
                    .map(|svs| svs.into_iter().map(|sv| sv.value).collect::<Vec<f64>>())
            },
        )
        .collect::<Result<Vec<Vec<f64>>>>()?;
    let wall_time = t0.elapsed().as_secs_f64();
    Ok(specs
        .iter()
        .enumerate()
        .map(|(i, spec)| {
            let mut values: Vec<f64> = rows.iter().map(|row| row[i]).collect();
            values.sort_by(f64::total_cmp);
            McReport {
                statistic: spec.name(),
                n,
                d,
                n_reps: reps,
                master_seed,
                values,
                wall_time,
            }
        })
        .collect())
}

/// Conservative upper quantile: the ceil((1-level) * reps)-th order
/// statistic of the sorted null values.
pub fn critical_value(report: &McReport, level: f64) -> Result<f64> {
    quantile(&report.values, level)
}

fn quantile(sorted: &[f64], level: f64) -> Result<f64> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::domain(format!("level {level} outside (0, 1)")));
    }
    let reps = sorted.len();
    let idx = ((1.0 - level) * reps as f64).ceil() as usize;
    let idx = idx.clamp(1, reps);
    Ok(sorted[idx - 1])
}

/// A simulated critical value, tagged with what it calibrates.
#[derive(Clone, Debug, Serialize)]
pub struct CritValue {
    pub statistic: String,
    pub n: usize,
    pub level: f64,
    pub reps: usize,
    pub value: f64,
}

impl CritValue {
    pub fn from_report(report: &McReport, level: f64) -> Result<CritValue> {
        Ok(CritValue {
            statistic: report.statistic.clone(),
            n: report.n,
            level,
            reps: report.n_reps,
            value: critical_value(report, level)?,
        })
    }
}

/// One point of a power table.
#[derive(Clone, Debug, Serialize)]
pub struct PowerPoint {
    pub r: f64,
    pub statistic: String,
    pub power: f64,
    pub se: f64,
    pub exceed: usize,
    pub reps: usize,
}

/// Estimate rejection rates for each (config, statistic) pair. Every config
/// reuses the same replicate seeds, so points along an r-sweep share noise
/// and placement (common random numbers).
pub fn power_curve(
    configs: &[SignalConfig],
    specs: &[StatSpec],
    critvals: &[CritValue],
    reps: usize,
    master_seed: u64,
) -> Result<Vec<PowerPoint>> {
    if specs.is_empty() || configs.is_empty() {
        return Err(Error::config("need at least one config and one statistic"));
    }
    if specs.len() != critvals.len() {
        return Err(Error::config(format!(
            "{} statistics but {} critical values",
            specs.len(),
            critvals.len()
        )));
    }
    let mut level_shape: Option<Shape> = None;
    for (spec, cv) in specs.iter().zip(critvals) {
        if cv.statistic != spec.name() {
            return Err(Error::config(format!(
                "critical value for {} paired with statistic {}",
                cv.statistic,
                spec.name()
            )));
        }
        if spec.family.needs_levels() {
            match level_shape {
                None => level_shape = Some(spec.shape),
                Some(s) if s == spec.shape => {}
                Some(s) => {
                    return Err(Error::config(format!(
                        "one power run scans one approximating set: {s} vs {}",
                        spec.shape
                    )));
                }
            }
        }
    }
    for cfg in configs {
        for (spec, cv) in specs.iter().zip(critvals) {
            if spec.dim() != cfg.d() {
                return Err(Error::config(format!(
                    "{} is {}-dimensional but the model has d = {}",
                    spec.name(),
                    spec.dim(),
                    cfg.d()
                )));
            }
            if cv.n != cfg.n() {
                return Err(Error::config(format!(
                    "critical value simulated at n = {} but the model has n = {}",
                    cv.n,
                    cfg.n()
                )));
            }
        }
    }

    let shape = level_shape.unwrap_or(Shape::Interval);
    let n = configs[0].n();
    let levels = StatSpec {
        family: Family::StructHc,
        shape,
    }
    .build_levels(n)?;
    let families: Vec<Family> = specs.iter().map(|s| s.family).collect();

    let mut out = Vec::with_capacity(configs.len() * specs.len());
    for cfg in configs {
        if cfg.n() != n {
            return Err(Error::config("all configs in one run share the same n"));
        }
        let flags: Vec<Vec<bool>> = (0..reps)
            .into_par_iter()
            .map_init(
                || Evaluator::new(&levels),
                |ev, k| -> Result<Vec<bool>> {
                    let seed = rng::derive(master_seed, tag::REPLICATE, k as u64);
                    let ds = generate(&cfg.with_seed(seed))?;
                    let stats = ev.eval_many(&ds.to_grid(), &families)?;
                    Ok(stats
                        .iter()
                        .zip(critvals)
                        .map(|(sv, cv)| sv.value > cv.value)
                        .collect())
                },
            )
            .collect::<Result<Vec<Vec<bool>>>>()?;
        for (i, spec) in specs.iter().enumerate() {
            let exceed = flags.iter().filter(|f| f[i]).count();
            let p = exceed as f64 / reps as f64;
            out.push(PowerPoint {
                r: cfg.r(),
                statistic: spec.name(),
                power: p,
                se: (p * (1.0 - p) / reps as f64).sqrt(),
                exceed,
                reps,
            });
        }
    }
    Ok(out)
}

/// Which of the four analytic tail bounds to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundCheck {
    /// Berk-Jones on n uniforms against the (eta+1)e^{-eta} log-factor bound.
    BjIii,
    /// Higher criticism against the reported C/eta envelope.
    HcIv,
    /// Weighted Brownian bridge supremum on a window.
    BbI,
    /// Binomial log-likelihood supremum of the empirical cdf on a window.
    LoglikIi,
}

impl std::str::FromStr for BoundCheck {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bj_iii" => Ok(BoundCheck::BjIii),
            "hc_iv" => Ok(BoundCheck::HcIv),
            "bb_i" => Ok(BoundCheck::BbI),
            "loglik_ii" => Ok(BoundCheck::LoglikIi),
            other => Err(Error::parse(format!(
                "unknown bound '{other}' (expected bj_iii, hc_iv, bb_i or loglik_ii)"
            ))),
        }
    }
}

impl std::fmt::Display for BoundCheck {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BoundCheck::BjIii => "bj_iii",
            BoundCheck::HcIv => "hc_iv",
            BoundCheck::BbI => "bb_i",
            BoundCheck::LoglikIi => "loglik_ii",
        })
    }
}

/// Knobs for `verify_tail_bound`. The window (a, b) feeds the bridge and
/// log-likelihood checks, `k_const` the Berk-Jones bound, `d_const` the
/// eta floor of the higher-criticism envelope.
#[derive(Clone, Debug)]
pub struct VerifyParams {
    pub n: usize,
    pub reps: usize,
    pub etas: Vec<f64>,
    pub a: f64,
    pub b: f64,
    pub k_const: f64,
    pub d_const: f64,
    pub seed: u64,
}

impl Default for VerifyParams {
    fn default() -> Self {
        VerifyParams {
            n: 1000,
            reps: 10_000,
            etas: vec![4.0, 6.0, 8.0, 10.0],
            a: 0.25,
            b: 0.75,
            k_const: 2.0,
            d_const: 3.0,
            seed: 1,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyRow {
    pub eta: f64,
    pub empirical: f64,
    pub bound: f64,
    pub sigma: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub which: String,
    pub n: usize,
    pub reps: usize,
    pub master_seed: u64,
    /// Calibrated constant of the C/eta envelope (hc_iv only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hc_constant: Option<f64>,
    pub rows: Vec<VerifyRow>,
    pub wall_time: f64,
}

/// Bridge discretization for the Brownian-bridge check. The discrete sup
/// under-estimates the continuous one, so a pass is conservative.
pub const BRIDGE_GRID: usize = 1 << 16;

/// Compare empirical exceedance probabilities against an analytic bound on
/// an eta grid. For hc_iv the envelope constant is calibrated from the same
/// simulation (reported, never asserted), so its rows always pass.
pub fn verify_tail_bound(which: BoundCheck, params: &VerifyParams) -> Result<VerifyReport> {
    if params.reps < 1000 {
        return Err(Error::config(format!(
            "need at least 1000 replicates, got {}",
            params.reps
        )));
    }
    if params.etas.is_empty() {
        return Err(Error::config("need at least one eta"));
    }
    let t0 = Instant::now();
    let values: Vec<f64> = match which {
        BoundCheck::BjIii => simulate_uniform_stat(params, |p| Ok(gof::bj(p).value))?,
        BoundCheck::HcIv => simulate_uniform_stat(params, |p| Ok(gof::hc(p).value))?,
        BoundCheck::LoglikIi => {
            let (a, b) = (params.a, params.b);
            simulate_uniform_stat(params, move |p| gof::loglik_sup(p, a, b))?
        }
        BoundCheck::BbI => {
            let (a, b, seed) = (params.a, params.b, params.seed);
            (0..params.reps)
                .into_par_iter()
                .map(|k| {
                    let key = rng::derive(
                        rng::derive(seed, tag::REPLICATE, k as u64),
                        tag::BRIDGE,
                        0,
                    );
                    bridge_sup(key, a, b)
                })
                .collect()
        }
    };

    let mut hc_constant = None;
    let reps_f = params.reps as f64;
    let bound_at = |eta: f64| -> Result<f64> {
        match which {
            BoundCheck::BjIii => theory::bj_tail_bound(eta, params.n as u64, params.k_const),
            BoundCheck::LoglikIi => {
                theory::ks_loglik_bound(eta, params.a, params.b, params.n as u64)
            }
            BoundCheck::BbI => theory::bb_sup_bound(eta, params.a, params.b),
            BoundCheck::HcIv => unreachable!("handled separately"),
        }
    };
    let empirical_at =
        |eta: f64| values.iter().filter(|&&v| v > eta).count() as f64 / reps_f;

    let mut rows = Vec::with_capacity(params.etas.len());
    if which == BoundCheck::HcIv {
        let floor = theory::hc_eta_floor(params.n as u64, params.d_const)?;
        for &eta in &params.etas {
            if eta < floor {
                return Err(Error::config(format!(
                    "eta = {eta} below the envelope floor {floor:.3}"
                )));
            }
        }
        let c = params
            .etas
            .iter()
            .map(|&eta| eta * empirical_at(eta))
            .fold(f64::MIN, f64::max)
            .max(1e-12);
        hc_constant = Some(c);
        for &eta in &params.etas {
            let empirical = empirical_at(eta);
            let bound = theory::hc_tail_bound(eta, c)?;
            let sigma = (bound * (1.0 - bound) / reps_f).sqrt();
            rows.push(VerifyRow {
                eta,
                empirical,
                bound,
                sigma,
                pass: empirical <= bound + 3.0 * sigma,
            });
        }
    } else {
        for &eta in &params.etas {
            let empirical = empirical_at(eta);
            let bound = bound_at(eta)?;
            let sigma = (bound * (1.0 - bound) / reps_f).sqrt();
            rows.push(VerifyRow {
                eta,
                empirical,
                bound,
                sigma,
                pass: empirical <= bound + 3.0 * sigma,
            });
        }
    }
    Ok(VerifyReport {
        which: which.to_string(),
        n: params.n,
        reps: params.reps,
        master_seed: params.seed,
        hc_constant,
        rows,
        wall_time: t0.elapsed().as_secs_f64(),
    })
}

fn simulate_uniform_stat<F>(params: &VerifyParams, stat: F) -> Result<Vec<f64>>
where
    F: Fn(&SortedPValues) -> Result<f64> + Sync,
{
    let (n, seed) = (params.n, params.seed);
    (0..params.reps)
        .into_par_iter()
        .map(|k| {
            let key = rng::derive(
                rng::derive(seed, tag::REPLICATE, k as u64),
                tag::UNIFORMS,
                0,
            );
            let u: Vec<f64> = (0..n).map(|i| rng::uniform_at(key, i as u64)).collect();
            stat(&SortedPValues::new(u)?)
        })
        .collect()
}

/// One-sided sup of B(t)/sqrt(t(1-t)) over [a, b] on a partial-sum bridge.
fn bridge_sup(key: u64, a: f64, b: f64) -> f64 {
    let g = BRIDGE_GRID;
    let scale = 1.0 / (g as f64).sqrt();
    let mut w = 0.0;
    let mut walk = Vec::with_capacity(g);
    for i in 0..g {
        w += rng::normal_at(key, i as u64) * scale;
        walk.push(w);
    }
    let w_end = w;
    let mut sup = f64::NEG_INFINITY;
    let lo = (a * g as f64).ceil() as usize;
    let hi = (b * g as f64).floor() as usize;
    for j in lo..=hi.min(g - 1) {
        let t = j as f64 / g as f64;
        let bridge = walk[j - 1] - t * w_end;
        let z = bridge / (t * (1.0 - t)).sqrt();
        if z > sup {
            sup = z;
        }
    }
    sup
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{ModelParams, Placement, Regime};
    use approx::assert_relative_eq;

    fn interval_spec(family: Family) -> StatSpec {
        StatSpec::new(family, Shape::Interval).unwrap()
    }

    #[test]
    fn quantile_convention() {
        let report = McReport {
            statistic: "HC".into(),
            n: 100,
            d: 1,
            n_reps: 100,
            master_seed: 0,
            values: (1..=100).map(f64::from).collect(),
            wall_time: 0.0,
        };
        assert_eq!(critical_value(&report, 0.05).unwrap(), 95.0);
        assert_eq!(critical_value(&report, 0.5).unwrap(), 50.0);
        assert!(critical_value(&report, 0.0).is_err());
        assert!(critical_value(&report, 1.0).is_err());

        let big = McReport {
            values: (1..=10_000).map(f64::from).collect(),
            n_reps: 10_000,
            ..report
        };
        assert_eq!(critical_value(&big, 0.05).unwrap(), 9500.0);
    }

    #[test]
    fn critical_values_grow_as_level_shrinks() {
        let spec = interval_spec(Family::StructHc);
        let report = simulate_null(&spec, 64, 200, 7).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for level in [0.5, 0.2, 0.1, 0.05, 0.01] {
            let cv = critical_value(&report, level).unwrap();
            assert!(cv >= prev, "critical value fell at level {level}");
            prev = cv;
        }
    }

    #[test]
    fn null_simulation_is_worker_count_independent() {
        let spec = interval_spec(Family::StructBj);
        let run = |threads: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| simulate_null(&spec, 64, 120, 99).unwrap().values)
        };
        let one = run(1);
        let four = run(4);
        assert_eq!(one.len(), 120);
        let bits =
            |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&one), bits(&four));
    }

    #[test]
    fn rejects_tiny_runs() {
        let spec = interval_spec(Family::Hc);
        assert!(simulate_null(&spec, 64, 50, 1).is_err());
        assert!(StatSpec::new(Family::Pn, Shape::Rect).is_err());
    }

    #[test]
    fn shared_replicates_match_lone_runs() {
        let shc = interval_spec(Family::StructHc);
        let bj = interval_spec(Family::Bj);
        let both = simulate_null_many(&[shc, bj], 128, 100, 9).unwrap();
        let lone_shc = simulate_null(&shc, 128, 100, 9).unwrap();
        let lone_bj = simulate_null(&bj, 128, 100, 9).unwrap();
        let bits =
            |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&both[0].values), bits(&lone_shc.values));
        assert_eq!(bits(&both[1].values), bits(&lone_bj.values));

        let rect = StatSpec::new(Family::StructHc, Shape::Rect).unwrap();
        let ball = StatSpec::new(Family::StructBj, Shape::Ball).unwrap();
        assert!(
            simulate_null_many(&[rect, ball], 32, 100, 9).is_err(),
            "two approximating-set shapes cannot share a run"
        );
    }

    #[test]
    fn null_hc_is_in_the_expected_ballpark() {
        let spec = interval_spec(Family::Hc);
        let report = simulate_null(&spec, 1024, 200, 3).unwrap();
        let median = report.values[100];
        // sqrt(2 log log 1024) is about 1.97; convergence is slow, so this
        // is only a smoke check
        assert!(median > 1.0 && median < 4.0, "median {median}");
    }

    #[test]
    fn bj_tail_bound_holds_empirically() {
        let params = VerifyParams {
            reps: 2000,
            etas: vec![8.0, 10.0],
            ..VerifyParams::default()
        };
        let report = verify_tail_bound(BoundCheck::BjIii, &params).unwrap();
        assert!(report.rows.iter().all(|r| r.pass));
        assert_relative_eq!(report.rows[0].bound, 0.9196483205627395, epsilon = 1e-12);
    }

    #[test]
    fn loglik_tail_bound_holds_empirically() {
        let params = VerifyParams {
            reps: 2000,
            etas: vec![5.0, 8.0],
            ..VerifyParams::default()
        };
        let report = verify_tail_bound(BoundCheck::LoglikIi, &params).unwrap();
        assert!(report.rows.iter().all(|r| r.pass));
    }

    #[test]
    fn hc_envelope_is_reported_with_a_constant() {
        let params = VerifyParams {
            reps: 1000,
            etas: vec![3.0, 4.0],
            ..VerifyParams::default()
        };
        let report = verify_tail_bound(BoundCheck::HcIv, &params).unwrap();
        let c = report.hc_constant.unwrap();
        assert!(c > 0.0);
        assert!(report.rows.iter().all(|r| r.pass), "C/eta covers its own grid");
        // an eta below the envelope floor is refused
        let bad = VerifyParams {
            reps: 1000,
            etas: vec![1.0],
            ..VerifyParams::default()
        };
        assert!(verify_tail_bound(BoundCheck::HcIv, &bad).is_err());
    }

    #[test]
    fn power_curve_smoke() {
        let base = SignalConfig::new(ModelParams {
            n: 256,
            d: 1,
            shape: Shape::Interval,
            alpha: 0.2,
            beta: 0.65,
            regime: Regime::Sparse,
            r: 0.6,
            placement: Placement::FreeDisjoint,
            seed: 0,
        })
        .unwrap();
        let specs = vec![interval_spec(Family::StructHc), interval_spec(Family::Hc)];
        let mut critvals = Vec::new();
        for spec in &specs {
            let report = simulate_null(spec, 256, 200, 42).unwrap();
            critvals.push(CritValue::from_report(&report, 0.05).unwrap());
        }
        let configs = vec![base.with_r(1.0).unwrap()];
        let table = power_curve(&configs, &specs, &critvals, 100, 7).unwrap();
        assert_eq!(table.len(), 2);
        for p in &table {
            assert!((0.0..=1.0).contains(&p.power));
            assert_eq!(p.reps, 100);
        }
        // n = 256 is far from asymptopia; a strong signal should still fire
        // noticeably more often than the 5% level
        assert!(table[0].power > 0.4, "sHC power {} too low", table[0].power);

        // rerun is bit-identical
        let again = power_curve(&configs, &specs, &critvals, 100, 7).unwrap();
        assert_eq!(table[0].power, again[0].power);
        assert_eq!(table[1].power, again[1].power);

        // mismatched n is refused
        let bad = vec![CritValue {
            n: 128,
            ..critvals[0].clone()
        }];
        assert!(power_curve(&configs, &specs[..1].to_vec(), &bad, 100, 7).is_err());
    }

    #[test]
    fn bridge_sup_is_reasonable() {
        // P(sup > 2) should be well under the analytic bound at eta = 2
        let params = VerifyParams {
            reps: 1000,
            etas: vec![2.0, 3.0],
            ..VerifyParams::default()
        };
        let report = verify_tail_bound(BoundCheck::BbI, &params).unwrap();
        assert!(report.rows.iter().all(|r| r.pass));
        let p2 = report.rows[0].empirical;
        assert!(p2 > 0.0 && p2 < 0.3, "exceedance at eta=2 was {p2}");
    }
}
