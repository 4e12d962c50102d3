//! Block-signal generators: i.i.d. standard Gaussian noise on a grid with m
//! disjoint elevated blocks of n^{d alpha} cells placed at random.
//!
//! The calibration ties the signal height mu to the exponents (alpha, beta,
//! r) so that r sweeps across the detection boundary: sparse regime
//! mu = sqrt(2 r log n^d)/n^{d alpha/2}, dense regime mu = n^{r - alpha/2}
//! (one-dimensional only; no dense calibration exists for d = 2).

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Error;
use crate::regions::{Region, Shape};
use crate::rng::{self, tag};
use crate::structured::GridData;
use crate::theory;
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Sparse,
    Dense,
}

impl Regime {
    /// Regime the exponents themselves imply: sparse when beta/(1-alpha)
    /// exceeds 1/2, dense otherwise.
    pub fn auto(alpha: f64, beta: f64) -> Regime {
        if beta / (1.0 - alpha) > 0.5 {
            Regime::Sparse
        } else {
            Regime::Dense
        }
    }
}

impl std::str::FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sparse" => Ok(Regime::Sparse),
            "dense" => Ok(Regime::Dense),
            other => Err(Error::parse(format!(
                "unknown regime '{other}' (expected sparse or dense)"
            ))),
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::Sparse => "sparse",
            Regime::Dense => "dense",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    /// Exactly uniform over all disjoint arrangements (d = 1 via a direct
    /// bijection, d = 2 via whole-configuration rejection).
    FreeDisjoint,
    /// Blocks sit on the aligned partition grid of its own size.
    GridAligned,
}

impl std::str::FromStr for Placement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "free_disjoint" | "free-disjoint" | "free" => Ok(Placement::FreeDisjoint),
            "grid_aligned" | "grid-aligned" | "grid" => Ok(Placement::GridAligned),
            other => Err(Error::parse(format!(
                "unknown placement '{other}' (expected free_disjoint or grid_aligned)"
            ))),
        }
    }
}

impl std::fmt::Display for Placement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Placement::FreeDisjoint => "free_disjoint",
            Placement::GridAligned => "grid_aligned",
        })
    }
}

/// Caller-chosen knobs of the signal model.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ModelParams {
    pub n: usize,
    pub d: usize,
    pub shape: Shape,
    pub alpha: f64,
    pub beta: f64,
    pub regime: Regime,
    pub r: f64,
    pub placement: Placement,
    pub seed: u64,
}

/// A validated model configuration with its derived quantities.
#[derive(Clone, Debug, Serialize)]
pub struct SignalConfig {
    #[serde(flatten)]
    params: ModelParams,
    block_cells: u64,
    m: u64,
    mu: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    side: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ball_r2: Option<f64>,
}

impl SignalConfig {
    pub fn new(params: ModelParams) -> Result<SignalConfig> {
        let ModelParams {
            n,
            d,
            shape,
            alpha,
            beta,
            regime,
            r,
            placement,
            seed: _,
        } = params;
        if !(1..=2).contains(&d) {
            return Err(Error::config(format!("d = {d} not in {{1, 2}}")));
        }
        if shape.dim() != d {
            return Err(Error::config(format!("{shape} blocks need d = {}", shape.dim())));
        }
        if n < 2 || n > u32::MAX as usize {
            return Err(Error::config(format!("grid side {n} out of range")));
        }
        check_exponents(alpha, beta)?;
        match regime {
            Regime::Sparse if !(r > 0.0 && r.is_finite()) => {
                return Err(Error::config(format!(
                    "sparse calibration needs r > 0, got {r}"
                )));
            }
            Regime::Dense if !r.is_finite() => {
                return Err(Error::config("dense calibration needs finite r"));
            }
            _ => {}
        }
        if regime == Regime::Dense && d == 2 {
            return Err(Error::config(
                "no dense-regime calibration exists for d = 2",
            ));
        }
        if shape == Shape::Ball && placement == Placement::GridAligned {
            return Err(Error::config("balls do not tile a partition grid"));
        }

        let n_f = n as f64;
        let (block_cells, side, ball_r2) = match shape {
            Shape::Interval => {
                let len = (n_f.powf(alpha).round() as u64).max(1);
                (len, Some(len as u32), None)
            }
            Shape::Rect => {
                let side = (n_f.powf(alpha).round() as u64).max(1);
                (side * side, Some(side as u32), None)
            }
            Shape::Ball => {
                let target = (n_f.powf(2.0 * alpha).round() as u64).max(1);
                let (r2, size) = ball_for_target(target);
                (size, None, Some(r2))
            }
        };
        let rest = (1.0 - alpha - beta).max(0.0);
        let m = (n_f.powf(d as f64 * rest).round() as u64).max(1);
        let n_grid = (n as u64).pow(d as u32);
        if m.saturating_mul(block_cells) > n_grid {
            return Err(Error::config(format!(
                "{m} blocks of {block_cells} cells exceed the {n_grid}-cell grid"
            )));
        }
        let mu = match regime {
            Regime::Sparse => {
                (2.0 * r * d as f64 * n_f.ln()).sqrt() / n_f.powf(d as f64 * alpha / 2.0)
            }
            Regime::Dense => n_f.powf(r - alpha / 2.0),
        };
        Ok(SignalConfig {
            params,
            block_cells,
            m,
            mu,
            side,
            ball_r2,
        })
    }

    pub fn params(&self) -> ModelParams {
        self.params
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn d(&self) -> usize {
        self.params.d
    }

    pub fn shape(&self) -> Shape {
        self.params.shape
    }

    pub fn r(&self) -> f64 {
        self.params.r
    }

    pub fn seed(&self) -> u64 {
        self.params.seed
    }

    /// Cells per block after rounding (for balls: the achieved ball size).
    pub fn block_cells(&self) -> u64 {
        self.block_cells
    }

    /// Number of blocks.
    pub fn m(&self) -> u64 {
        self.m
    }

    /// Calibrated signal height.
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Same model, different randomness.
    pub fn with_seed(&self, seed: u64) -> SignalConfig {
        let mut out = self.clone();
        out.params.seed = seed;
        out
    }

    /// Same model, different signal strength (placement and noise keys are
    /// untouched, so sweeping r keeps common random numbers).
    pub fn with_r(&self, r: f64) -> Result<SignalConfig> {
        let mut params = self.params;
        params.r = r;
        SignalConfig::new(params)
    }

    fn n_grid(&self) -> usize {
        self.params.n.pow(self.params.d as u32)
    }
}

fn check_exponents(alpha: f64, beta: f64) -> Result<()> {
    if !alpha.is_finite() || !beta.is_finite() {
        return Err(Error::config("alpha and beta must be finite"));
    }
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::config(format!("alpha = {alpha} outside [0, 1)")));
    }
    let s = alpha + beta;
    if s <= 0.0 || s > 1.0 {
        return Err(Error::config(format!("alpha + beta = {s} outside (0, 1]")));
    }
    Ok(())
}

/// Signal height after calibration; exposed for tables and sanity checks.
pub fn calibrated_mu(config: &SignalConfig) -> f64 {
    config.mu
}

/// How far the configured r sits above the optimal detection boundary.
pub fn boundary_gap(config: &SignalConfig) -> f64 {
    let b = theory::rho_star(config.params.alpha, config.params.beta)
        .expect("exponents validated at construction");
    config.params.r - b.rho_star
}

/// One generated instance.
#[derive(Clone, Debug, Serialize)]
pub struct Dataset {
    pub cells: Vec<f64>,
    pub truth: Vec<Region>,
    pub config: SignalConfig,
}

impl Dataset {
    pub fn to_grid(&self) -> GridData {
        match self.config.d() {
            1 => GridData::from_1d(self.cells.clone()),
            _ => GridData::from_2d(self.cells.clone(), self.config.n()),
        }
        .expect("generated cells are finite and well-shaped")
    }
}

/// Draw noise, place the blocks, add the signal.
pub fn generate(config: &SignalConfig) -> Result<Dataset> {
    let len = config.n_grid();
    let noise_key = rng::derive(config.params.seed, tag::NOISE, 0);
    let mut cells: Vec<f64> = if len >= (1 << 17) {
        use rayon::prelude::*;
        (0..len)
            .into_par_iter()
            .map(|i| rng::normal_at(noise_key, i as u64))
            .collect()
    } else {
        (0..len).map(|i| rng::normal_at(noise_key, i as u64)).collect()
    };
    let truth = sample_placement(config)?;
    let n = config.n();
    let mu = config.mu;
    for region in &truth {
        region.for_each_cell(n, &mut |c| cells[c] += mu);
    }
    Ok(Dataset {
        cells,
        truth,
        config: config.clone(),
    })
}

/// Retry budget for rejection-sampled 2-d placements.
const PLACEMENT_ATTEMPTS: usize = 10_000;

pub(crate) fn sample_placement(config: &SignalConfig) -> Result<Vec<Region>> {
    let mut gen = rng::stream(config.params.seed, tag::PLACEMENT, 0);
    let n = config.n() as u64;
    let m = config.m;
    let mut regions = match (config.params.shape, config.params.placement) {
        (Shape::Interval, Placement::FreeDisjoint) => {
            // disjoint length-L intervals correspond one-to-one with
            // m-subsets of {0 .. n - m(L-1) - 1}: subtract (L-1) per block
            // already placed to the left
            let len = config.block_cells;
            let pool = n - m * (len - 1);
            sample_indices(&mut gen, m, pool)
                .into_iter()
                .enumerate()
                .map(|(i, t)| {
                    let j = (t + i as u64 * (len - 1)) as u32;
                    Region::Interval {
                        j,
                        k: j + len as u32,
                    }
                })
                .collect()
        }
        (Shape::Interval, Placement::GridAligned) => {
            let len = config.block_cells;
            let slots = n / len;
            if m > slots {
                return Err(Error::config(format!(
                    "{m} blocks do not fit the {slots} aligned slots"
                )));
            }
            sample_indices(&mut gen, m, slots)
                .into_iter()
                .map(|s| Region::Interval {
                    j: (s * len) as u32,
                    k: (s * len + len) as u32,
                })
                .collect()
        }
        (Shape::Rect, Placement::GridAligned) => {
            let side = config.side.expect("rect blocks carry a side") as u64;
            let per_side = n / side;
            let slots = per_side * per_side;
            if m > slots {
                return Err(Error::config(format!(
                    "{m} blocks do not fit the {slots} aligned slots"
                )));
            }
            sample_indices(&mut gen, m, slots)
                .into_iter()
                .map(|s| {
                    let (sx, sy) = (s % per_side, s / per_side);
                    Region::Rect {
                        j1: (sx * side) as u32,
                        k1: (sx * side + side) as u32,
                        j2: (sy * side) as u32,
                        k2: (sy * side + side) as u32,
                    }
                })
                .collect()
        }
        (Shape::Rect, Placement::FreeDisjoint) => {
            let side = config.side.expect("rect blocks carry a side") as u64;
            place_rects_free(&mut gen, n, m, side)?
        }
        (Shape::Ball, Placement::FreeDisjoint) => {
            let r2 = config.ball_r2.expect("ball blocks carry a radius");
            place_balls_free(&mut gen, n, m, r2)?
        }
        (Shape::Ball, Placement::GridAligned) => unreachable!("rejected at construction"),
    };
    regions.sort_by_key(|r: &Region| r.sort_key());
    Ok(regions)
}

fn place_rects_free(gen: &mut ChaCha8Rng, n: u64, m: u64, side: u64) -> Result<Vec<Region>> {
    let hi = n - side;
    let mut corners: Vec<(u64, u64)> = Vec::with_capacity(m as usize);
    'attempt: for _ in 0..PLACEMENT_ATTEMPTS {
        corners.clear();
        for _ in 0..m {
            corners.push((gen.gen_range(0..=hi), gen.gen_range(0..=hi)));
        }
        for i in 0..corners.len() {
            for j in 0..i {
                let (xi, yi) = corners[i];
                let (xj, yj) = corners[j];
                if xi.abs_diff(xj) < side && yi.abs_diff(yj) < side {
                    continue 'attempt;
                }
            }
        }
        return Ok(corners
            .iter()
            .map(|&(x, y)| Region::Rect {
                j1: x as u32,
                k1: (x + side) as u32,
                j2: y as u32,
                k2: (y + side) as u32,
            })
            .collect());
    }
    Err(Error::config(format!(
        "no disjoint configuration found in {PLACEMENT_ATTEMPTS} attempts"
    )))
}

fn place_balls_free(gen: &mut ChaCha8Rng, n: u64, m: u64, r2: f64) -> Result<Vec<Region>> {
    let off = r2.sqrt().floor() as u64;
    if 1 + off > n - off {
        return Err(Error::config("ball does not fit inside the grid"));
    }
    let mut stamp = vec![0u32; (n * n) as usize];
    let mut epoch = 0u32;
    let mut centers: Vec<(u64, u64)> = Vec::with_capacity(m as usize);
    'attempt: for _ in 0..PLACEMENT_ATTEMPTS {
        epoch += 1;
        centers.clear();
        for _ in 0..m {
            centers.push((
                gen.gen_range(1 + off..=n - off),
                gen.gen_range(1 + off..=n - off),
            ));
        }
        for &(cx, cy) in &centers {
            let mut clash = false;
            crate::regions::ball_rows(cx as f64, cy as f64, r2, |y, lo, hi| {
                for x in lo..=hi {
                    let cell = ((y as u64 - 1) * n + (x as u64 - 1)) as usize;
                    if stamp[cell] == epoch {
                        clash = true;
                    } else {
                        stamp[cell] = epoch;
                    }
                }
            });
            if clash {
                continue 'attempt;
            }
        }
        return Ok(centers
            .iter()
            .map(|&(cx, cy)| Region::Ball {
                cx: cx as f64,
                cy: cy as f64,
                r2,
            })
            .collect());
    }
    Err(Error::config(format!(
        "no disjoint configuration found in {PLACEMENT_ATTEMPTS} attempts"
    )))
}

/// Uniform m-subset of {0..pool-1} (Floyd's algorithm), sorted ascending.
fn sample_indices(gen: &mut ChaCha8Rng, m: u64, pool: u64) -> Vec<u64> {
    debug_assert!(m <= pool);
    let mut chosen: Vec<u64> = Vec::with_capacity(m as usize);
    for j in (pool - m)..pool {
        let t = gen.gen_range(0..=j);
        if chosen.contains(&t) {
            chosen.push(j);
        } else {
            chosen.push(t);
        }
    }
    chosen.sort_unstable();
    chosen
}

/// Lattice ball whose cell count is closest to `target` (ties prefer the
/// smaller radius). Squared radii sit halfway between consecutive integers
/// so membership is never decided by an exact boundary hit.
fn ball_for_target(target: u64) -> (f64, u64) {
    if target <= 1 {
        return (0.5, 1);
    }
    let bound = (target as f64).sqrt().ceil() as i64 + 1;
    let mut d2: Vec<i64> = Vec::new();
    for dx in -bound..=bound {
        for dy in -bound..=bound {
            d2.push(dx * dx + dy * dy);
        }
    }
    d2.sort_unstable();
    let mut best = (0.5f64, 1u64);
    let mut best_err = (target - 1) as i64;
    let mut i = 0;
    while i < d2.len() {
        let k = d2[i];
        while i < d2.len() && d2[i] == k {
            i += 1;
        }
        let size = i as u64;
        let err = (size as i64 - target as i64).abs();
        if err < best_err {
            best = (k as f64 + 0.5, size);
            best_err = err;
        }
        if size >= target {
            break;
        }
    }
    best
}
