//! Level-rescaled structured statistics over an approximating set, plus the
//! penalized scan.
//!
//! For each level l the evaluator turns region aggregates X(I) into
//! z-scores X(I)/sqrt(|I|), sorts them descending, converts only the top
//! half into p-values (the goodness-of-fit scans never look past the median)
//! and rescales the per-level statistic: by sqrt(n_grid/(2^l n_l)) for
//! higher criticism and by n_grid/(2^l n_l) for the likelihood-ratio family.
//! The reported statistic is the maximum over levels. Aggregation is O(1)
//! per region through prefix sums (1-D), a summed-area table (2-D) or row
//! spans against the table (balls), so a full evaluation is sort-bound.

use serde::Serialize;

use crate::error::Error;
use crate::gauss;
use crate::gof;
use crate::regions::{ball_rows, ApproxLevel, LevelKind, Region};
use crate::sort;
use crate::Result;

/// Observations on {1..n} (d=1) or {1..n}^2 (d=2, row-major) with their
/// prefix-sum structure.
#[derive(Debug, Clone)]
pub struct GridData {
    dim: usize,
    n: usize,
    values: Vec<f64>,
    /// d=1: prefix[k] = sum of the first k cells, length n+1.
    /// d=2: summed-area table, (n+1) x (n+1) row-major.
    prefix: Vec<f64>,
}

impl GridData {
    pub fn from_1d(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::domain("need at least two observations"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("observations must be finite"));
        }
        let n = values.len();
        let mut prefix = Vec::with_capacity(n + 1);
        let mut acc = 0.0;
        prefix.push(0.0);
        for &v in &values {
            acc += v;
            prefix.push(acc);
        }
        Ok(GridData { dim: 1, n, values, prefix })
    }

    pub fn from_2d(values: Vec<f64>, n: usize) -> Result<Self> {
        if n < 2 || values.len() != n * n {
            return Err(Error::domain(format!(
                "need an n x n grid, got {} values for n = {n}",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("observations must be finite"));
        }
        let w = n + 1;
        let mut sat = vec![0.0f64; w * w];
        for y in 1..=n {
            let mut row_acc = 0.0;
            for x in 1..=n {
                row_acc += values[(y - 1) * n + (x - 1)];
                sat[y * w + x] = sat[(y - 1) * w + x] + row_acc;
            }
        }
        Ok(GridData { dim: 2, n, values, prefix: sat })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Side length of the grid.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Total number of cells, n^d.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn interval_sum(&self, j: usize, k: usize) -> f64 {
        debug_assert!(self.dim == 1 && j <= k && k <= self.n);
        self.prefix[k] - self.prefix[j]
    }

    #[inline]
    pub fn rect_sum(&self, j1: usize, k1: usize, j2: usize, k2: usize) -> f64 {
        debug_assert!(self.dim == 2);
        let w = self.n + 1;
        self.prefix[k2 * w + k1] - self.prefix[j2 * w + k1] - self.prefix[k2 * w + j1]
            + self.prefix[j2 * w + j1]
    }

    /// Sum over one row segment [lo, hi] of row y, via the area table.
    #[inline]
    fn row_sum(&self, y: usize, lo: usize, hi: usize) -> f64 {
        let w = self.n + 1;
        self.prefix[y * w + hi] - self.prefix[(y - 1) * w + hi] - self.prefix[y * w + lo - 1]
            + self.prefix[(y - 1) * w + lo - 1]
    }

    /// Aggregate and cell count in one pass.
    pub fn region_sum_size(&self, region: &Region) -> (f64, u64) {
        match *region {
            Region::Interval { j, k } => {
                (self.interval_sum(j as usize, k as usize), (k - j) as u64)
            }
            Region::Rect { j1, k1, j2, k2 } => (
                self.rect_sum(j1 as usize, k1 as usize, j2 as usize, k2 as usize),
                (k1 - j1) as u64 * (k2 - j2) as u64,
            ),
            Region::Ball { cx, cy, r2 } => {
                let mut sum = 0.0;
                let mut size = 0u64;
                ball_rows(cx, cy, r2, |y, lo, hi| {
                    sum += self.row_sum(y as usize, lo as usize, hi as usize);
                    size += (hi - lo + 1) as u64;
                });
                (sum, size)
            }
        }
    }

    /// Standardized region score X(I)/sqrt(|I|).
    pub fn region_score(&self, region: &Region) -> f64 {
        let (sum, size) = self.region_sum_size(region);
        gauss::region_score(sum, size)
    }
}

/// Statistic family. The structured variants run over an approximating set;
/// the plain ones treat single cells as regions; the penalized scans are
/// interval statistics with a scale-dependent penalty.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family {
    /// Structured higher criticism, no side restriction in the inner max.
    StructHc,
    /// Indicator-restricted variant, the square root of twice sS(2).
    StructHcPlus,
    StructBj,
    /// Phi-divergence with index s in [-1, 2].
    StructPhi(f64),
    /// Higher criticism on the raw cells.
    Hc,
    /// Berk-Jones on the raw cells.
    Bj,
    /// Penalized scan over all intervals (d=1, guarded at n = 2^14).
    Pn,
    /// Penalized scan over the approximating intervals.
    PnApp,
}

impl Family {
    pub fn is_structured(self) -> bool {
        matches!(
            self,
            Family::StructHc | Family::StructHcPlus | Family::StructBj | Family::StructPhi(_)
        )
    }

    pub fn needs_levels(self) -> bool {
        self.is_structured() || self == Family::PnApp
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shc" => Ok(Family::StructHc),
            "shc+" => Ok(Family::StructHcPlus),
            "sbj" => Ok(Family::StructBj),
            "hc" => Ok(Family::Hc),
            "bj" => Ok(Family::Bj),
            "pn" => Ok(Family::Pn),
            "pnapp" => Ok(Family::PnApp),
            _ => {
                if let Some(arg) = s.strip_prefix("ss:") {
                    let v: f64 = arg
                        .parse()
                        .map_err(|_| Error::parse(format!("bad divergence index '{arg}'")))?;
                    if !(-1.0..=2.0).contains(&v) {
                        return Err(Error::domain(format!(
                            "divergence index {v} outside [-1, 2]"
                        )));
                    }
                    Ok(Family::StructPhi(v))
                } else {
                    Err(Error::parse(format!(
                        "unknown family '{s}' (expected shc, sbj, ss:<s>, hc, bj, pn or pnapp)"
                    )))
                }
            }
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Family::StructHc => f.write_str("sHC"),
            Family::StructHcPlus => f.write_str("sHC+"),
            Family::StructBj => f.write_str("sBJ"),
            Family::StructPhi(s) => write!(f, "sS({s})"),
            Family::Hc => f.write_str("HC"),
            Family::Bj => f.write_str("BJ"),
            Family::Pn => f.write_str("Pn"),
            Family::PnApp => f.write_str("PnApp"),
        }
    }
}

/// A computed statistic with its maximizer, when one exists. `level` and
/// `region` are the first maximizers in scan order; the one-sided statistics
/// report no region when no index qualifies.
#[derive(Clone, Debug, Serialize)]
pub struct StatValue {
    pub name: String,
    pub value: f64,
    pub level: Option<u32>,
    pub region: Option<Region>,
}

/// Largest n the all-intervals penalized scan accepts before the O(n^2)
/// cost guard trips.
pub const PN_ALL_MAX_N: usize = 1 << 14;

/// Reusable evaluation state: z-score, p-value and sort buffers persist
/// across calls so Monte Carlo loops allocate nothing per replicate.
pub struct Evaluator<'a> {
    levels: &'a [ApproxLevel],
    z: Vec<f64>,
    p: Vec<f64>,
    scratch: sort::SortScratch,
}

struct BestLevel {
    value: f64,
    level: u32,
    z_star: f64,
    has_region: bool,
    started: bool,
}

impl<'a> Evaluator<'a> {
    /// `levels` may be empty when only cell statistics or the all-intervals
    /// scan will be requested.
    pub fn new(levels: &'a [ApproxLevel]) -> Self {
        Evaluator {
            levels,
            z: Vec::new(),
            p: Vec::new(),
            scratch: sort::SortScratch::new(),
        }
    }

    pub fn eval(&mut self, data: &GridData, family: Family) -> Result<StatValue> {
        Ok(self.eval_many(data, &[family])?.pop().expect("one result"))
    }

    /// Evaluate several families on one dataset. The per-level sorted
    /// z-scores are computed once and shared by every structured family.
    pub fn eval_many(&mut self, data: &GridData, families: &[Family]) -> Result<Vec<StatValue>> {
        self.validate(data, families)?;
        let mut out: Vec<Option<StatValue>> = (0..families.len()).map(|_| None).collect();

        let structured: Vec<(usize, Family)> = families
            .iter()
            .copied()
            .enumerate()
            .filter(|(_, f)| f.is_structured())
            .collect();
        if !structured.is_empty() {
            let results = self.eval_structured(data, &structured)?;
            for ((slot, _), sv) in structured.iter().zip(results) {
                out[*slot] = Some(sv);
            }
        }
        for (slot, fam) in families.iter().copied().enumerate() {
            match fam {
                Family::Hc | Family::Bj => out[slot] = Some(self.eval_cells(data, fam)),
                Family::Pn => out[slot] = Some(self.scan_all_intervals(data)),
                Family::PnApp => out[slot] = Some(self.scan_approx_intervals(data)),
                _ => {}
            }
        }
        Ok(out.into_iter().map(|sv| sv.expect("all slots filled")).collect())
    }

    fn validate(&self, data: &GridData, families: &[Family]) -> Result<()> {
        for &fam in families {
            if let Family::StructPhi(s) = fam {
                if !(-1.0..=2.0).contains(&s) {
                    return Err(Error::domain(format!(
                        "divergence index {s} outside [-1, 2]"
                    )));
                }
            }
            if fam.needs_levels() {
                if self.levels.is_empty() {
                    return Err(Error::config(format!(
                        "family {fam} needs an approximating set, none given"
                    )));
                }
                let shape = self.levels[0].shape;
                if shape.dim() != data.dim() {
                    return Err(Error::config(format!(
                        "{shape} regions cannot scan a {}-dimensional dataset",
                        data.dim()
                    )));
                }
                if self.levels[0].n as usize != data.n() {
                    return Err(Error::config(format!(
                        "approximating set built for n = {}, data has n = {}",
                        self.levels[0].n,
                        data.n()
                    )));
                }
            }
            if matches!(fam, Family::Pn | Family::PnApp) && data.dim() != 1 {
                return Err(Error::config("penalized scans are one-dimensional"));
            }
            if fam == Family::Pn && data.n() > PN_ALL_MAX_N {
                return Err(Error::guard(format!(
                    "all-intervals scan is O(n^2) and n = {} exceeds {PN_ALL_MAX_N}; \
                     use the approximating-set scan instead",
                    data.n()
                )));
            }
        }
        Ok(())
    }

    /// Fill `self.z` with the level's region z-scores in enumeration order.
    fn fill_z(&mut self, data: &GridData, level: &ApproxLevel) {
        self.z.clear();
        match &level.kind {
            LevelKind::Intervals { n, lengths } => {
                let step = level.grid_step as usize;
                for &len in lengths {
                    let inv = 1.0 / (len as f64).sqrt();
                    let (len, n) = (len as usize, *n as usize);
                    let mut s = 0;
                    while s + len <= n {
                        self.z.push(data.interval_sum(s, s + len) * inv);
                        s += step;
                    }
                }
            }
            LevelKind::Explicit { regions, .. } => {
                for r in regions {
                    let (sum, size) = data.region_sum_size(r);
                    self.z.push(gauss::region_score(sum, size));
                }
            }
        }
    }

    fn eval_structured(
        &mut self,
        data: &GridData,
        requests: &[(usize, Family)],
    ) -> Result<Vec<StatValue>> {
        let n_grid = data.len() as f64;
        let mut best: Vec<BestLevel> = requests
            .iter()
            .map(|_| BestLevel {
                value: f64::NEG_INFINITY,
                level: 0,
                z_star: f64::NAN,
                has_region: false,
                started: false,
            })
            .collect();

        let levels = self.levels;
        for level in levels {
            let n_ell = level.n_regions() as usize;
            if n_ell < 2 {
                continue;
            }
            self.fill_z(data, level);
            debug_assert_eq!(self.z.len(), n_ell);
            // the scan indices stop at n_ell / 2, so only the top half of the
            // order statistics is ever read; select it, then sort just that
            let half = n_ell / 2;
            self.z.select_nth_unstable_by(half, |a, b| b.total_cmp(a));
            sort::sort_desc(&mut self.z[..half], &mut self.scratch);
            self.p.clear();
            self.p.extend(self.z[..half].iter().map(|&z| gauss::upper_tail(z)));

            let factor = n_grid / (f64::exp2(level.level as f64) * n_ell as f64);
            let root = factor.sqrt();
            for ((_, fam), b) in requests.iter().zip(best.iter_mut()) {
                let raw = match fam {
                    Family::StructHc => gof::hc_scan(&self.p, n_ell),
                    Family::StructHcPlus => gof::hc_plus_scan(&self.p, n_ell),
                    Family::StructBj => gof::bj_scan(&self.p, n_ell),
                    Family::StructPhi(s) => gof::phi_scan(&self.p, n_ell, *s),
                    _ => unreachable!("structured families only"),
                };
                let scaled = match fam {
                    Family::StructHc | Family::StructHcPlus => root * raw.value,
                    _ => factor * raw.value,
                };
                if !b.started || scaled > b.value {
                    b.started = true;
                    b.value = scaled;
                    b.level = level.level;
                    match raw.index {
                        Some(i) => {
                            b.z_star = self.z[i - 1];
                            b.has_region = true;
                        }
                        None => b.has_region = false,
                    }
                }
            }
        }

        requests
            .iter()
            .zip(best)
            .map(|((_, fam), b)| {
                if !b.started {
                    return Err(Error::config("no level holds two or more regions"));
                }
                let region = if b.has_region {
                    let level = levels.iter().find(|l| l.level == b.level).expect("built");
                    Some(self.find_region_with_score(data, level, b.z_star))
                } else {
                    None
                };
                Ok(StatValue {
                    name: fam.to_string(),
                    value: b.value,
                    level: Some(b.level),
                    region,
                })
            })
            .collect()
    }

    /// First region in enumeration order whose z-score is bit-identical to
    /// the sorted entry the scan picked.
    fn find_region_with_score(&self, data: &GridData, level: &ApproxLevel, z_star: f64) -> Region {
        match &level.kind {
            LevelKind::Intervals { n, lengths } => {
                let step = level.grid_step as usize;
                for &len in lengths {
                    let inv = 1.0 / (len as f64).sqrt();
                    let (len, n) = (len as usize, *n as usize);
                    let mut s = 0;
                    while s + len <= n {
                        let z = data.interval_sum(s, s + len) * inv;
                        if z.to_bits() == z_star.to_bits() {
                            return Region::Interval {
                                j: s as u32,
                                k: (s + len) as u32,
                            };
                        }
                        s += step;
                    }
                }
            }
            LevelKind::Explicit { regions, .. } => {
                for r in regions {
                    let (sum, size) = data.region_sum_size(r);
                    if gauss::region_score(sum, size).to_bits() == z_star.to_bits() {
                        return *r;
                    }
                }
            }
        }
        unreachable!("score came from this level");
    }

    /// Plain HC/BJ on the raw cells. Cell scores go through the same
    /// aggregation path as unit regions, so a degenerate approximating set
    /// of unit intervals reproduces these values exactly.
    fn eval_cells(&mut self, data: &GridData, family: Family) -> StatValue {
        let n_grid = data.len();
        self.z.clear();
        if data.dim() == 1 {
            for j in 0..n_grid {
                self.z.push(data.interval_sum(j, j + 1));
            }
        } else {
            let n = data.n();
            for y in 0..n {
                for x in 0..n {
                    self.z.push(data.rect_sum(x, x + 1, y, y + 1));
                }
            }
        }
        let half = n_grid / 2;
        self.z.select_nth_unstable_by(half, |a, b| b.total_cmp(a));
        sort::sort_desc(&mut self.z[..half], &mut self.scratch);
        self.p.clear();
        self.p.extend(self.z[..half].iter().map(|&z| gauss::upper_tail(z)));
        let raw = match family {
            Family::Hc => gof::hc_scan(&self.p, n_grid),
            Family::Bj => gof::bj_scan(&self.p, n_grid),
            _ => unreachable!("cell families only"),
        };
        let region = raw.index.map(|i| {
            let z_star = self.z[i - 1];
            self.find_cell_with_score(data, z_star)
        });
        StatValue {
            name: family.to_string(),
            value: raw.value,
            level: None,
            region,
        }
    }

    fn find_cell_with_score(&self, data: &GridData, z_star: f64) -> Region {
        let n = data.n();
        if data.dim() == 1 {
            for j in 0..n {
                if data.interval_sum(j, j + 1).to_bits() == z_star.to_bits() {
                    return Region::Interval {
                        j: j as u32,
                        k: j as u32 + 1,
                    };
                }
            }
        } else {
            for y in 0..n {
                for x in 0..n {
                    if data.rect_sum(x, x + 1, y, y + 1).to_bits() == z_star.to_bits() {
                        return Region::Rect {
                            j1: x as u32,
                            k1: x as u32 + 1,
                            j2: y as u32,
                            k2: y as u32 + 1,
                        };
                    }
                }
            }
        }
        unreachable!("score came from a cell");
    }

    fn scan_all_intervals(&mut self, data: &GridData) -> StatValue {
        let n = data.n();
        let mut best = f64::NEG_INFINITY;
        let mut arg = (0usize, 0usize);
        for len in 1..=n {
            let inv = 1.0 / (len as f64).sqrt();
            let pen = penalty(n, len);
            for j in 0..=n - len {
                let v = data.interval_sum(j, j + len) * inv - pen;
                if v > best {
                    best = v;
                    arg = (j, j + len);
                }
            }
        }
        StatValue {
            name: Family::Pn.to_string(),
            value: best,
            level: None,
            region: Some(Region::Interval {
                j: arg.0 as u32,
                k: arg.1 as u32,
            }),
        }
    }

    fn scan_approx_intervals(&mut self, data: &GridData) -> StatValue {
        let n = data.n();
        let mut best = f64::NEG_INFINITY;
        let mut arg = (0u32, 0usize, 0usize);
        for level in self.levels {
            if let LevelKind::Intervals { lengths, .. } = &level.kind {
                let step = level.grid_step as usize;
                for &len in lengths {
                    let len = len as usize;
                    let inv = 1.0 / (len as f64).sqrt();
                    let pen = penalty(n, len);
                    let mut s = 0;
                    while s + len <= n {
                        let v = data.interval_sum(s, s + len) * inv - pen;
                        if v > best {
                            best = v;
                            arg = (level.level, s, s + len);
                        }
                        s += step;
                    }
                }
            }
        }
        StatValue {
            name: Family::PnApp.to_string(),
            value: best,
            level: Some(arg.0),
            region: Some(Region::Interval {
                j: arg.1 as u32,
                k: arg.2 as u32,
            }),
        }
    }
}

/// Scale-dependent penalty sqrt(2 log(e n / len)).
#[inline]
fn penalty(n: usize, len: usize) -> f64 {
    (2.0 * ((n as f64 / len as f64).ln() + 1.0)).sqrt()
}

/// Structured statistic over an approximating set; `family` must be one of
/// the structured variants.
pub fn structured_stat(
    data: &GridData,
    levels: &[ApproxLevel],
    family: Family,
) -> Result<StatValue> {
    if !family.is_structured() {
        return Err(Error::config(format!("{family} is not a structured family")));
    }
    Evaluator::new(levels).eval(data, family)
}

/// Penalized scan; `levels` is only consulted in approx mode.
pub fn penalized_scan(
    data: &GridData,
    approx_mode: bool,
    levels: &[ApproxLevel],
) -> Result<StatValue> {
    let family = if approx_mode { Family::PnApp } else { Family::Pn };
    Evaluator::new(levels).eval(data, family)
}
