//! Multiscale approximating sets of candidate regions.
//!
//! A level `l` collects regions whose volume falls in the dyadic bracket
//! (2^(l-1), 2^l], with endpoints or centers restricted to a level-dependent
//! grid. Coarse levels get a fine relative grid and vice versa, so every
//! admissible region is close to some member while the total count stays
//! near-linear in the number of cells. Each level also carries a partition
//! of its regions into groups of pairwise disjoint members; within a group,
//! region p-values are independent under the null, which is what the
//! structured statistics exploit.

mod approx;
mod balls;
mod intervals;
mod rectangles;

pub use approx::{approximate_region, ball_symdiff_bound, symmetric_difference};
pub use balls::build_ball_levels;
pub use intervals::build_interval_levels;
pub use rectangles::build_rectangle_levels;

use serde::Serialize;

use crate::error::Error;
use crate::Result;

/// Cap on the explicitly materialized regions of one 2-d approximating set.
/// Interval levels stay implicit at any n, but rectangle and ball levels
/// hold every member, so their builders refuse grids past this total
/// (rectangles up to roughly n = 200, balls up to n = 1024) instead of
/// thrashing memory.
pub const MAX_EXPLICIT_REGIONS: u64 = 1 << 25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Interval,
    Rect,
    Ball,
}

impl Shape {
    pub fn dim(self) -> usize {
        match self {
            Shape::Interval => 1,
            Shape::Rect | Shape::Ball => 2,
        }
    }
}

impl std::str::FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "interval" => Ok(Shape::Interval),
            "rect" => Ok(Shape::Rect),
            "ball" => Ok(Shape::Ball),
            other => Err(Error::parse(format!(
                "unknown shape '{other}' (expected interval, rect or ball)"
            ))),
        }
    }
}

impl std::fmt::Display for Shape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Shape::Interval => "interval",
            Shape::Rect => "rect",
            Shape::Ball => "ball",
        })
    }
}

/// A candidate region on the cell grid {1..n} or {1..n}^2.
///
/// Intervals are half-open: (j, k] covers cells j+1..=k, so adjacent
/// grid-aligned intervals tile without overlap. Rectangles are products of
/// two such intervals. Balls are open (strict inequality), with real-valued
/// center and squared radius; constructed balls have integer centers, but
/// approximation targets may not.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Region {
    Interval { j: u32, k: u32 },
    Rect { j1: u32, k1: u32, j2: u32, k2: u32 },
    Ball { cx: f64, cy: f64, r2: f64 },
}

impl Region {
    /// Number of covered grid cells.
    pub fn size(&self) -> u64 {
        match *self {
            Region::Interval { j, k } => (k - j) as u64,
            Region::Rect { j1, k1, j2, k2 } => (k1 - j1) as u64 * (k2 - j2) as u64,
            Region::Ball { cx, cy, r2 } => {
                let mut count = 0u64;
                ball_rows(cx, cy, r2, |_, lo, hi| count += (hi - lo + 1) as u64);
                count
            }
        }
    }

    /// Visit covered cells as linear indices: c-1 in one dimension,
    /// (y-1)*n + (x-1) in two.
    pub fn for_each_cell(&self, n: usize, f: &mut dyn FnMut(usize)) {
        match *self {
            Region::Interval { j, k } => {
                debug_assert!((k as usize) <= n);
                for c in j..k {
                    f(c as usize);
                }
            }
            Region::Rect { j1, k1, j2, k2 } => {
                debug_assert!((k1 as usize) <= n && (k2 as usize) <= n);
                for y in j2..k2 {
                    let row = y as usize * n;
                    for x in j1..k1 {
                        f(row + x as usize);
                    }
                }
            }
            Region::Ball { cx, cy, r2 } => {
                ball_rows(cx, cy, r2, |y, lo, hi| {
                    debug_assert!(y >= 1 && y as usize <= n && lo >= 1 && hi as usize <= n);
                    let row = (y as usize - 1) * n;
                    for x in lo..=hi {
                        f(row + x as usize - 1);
                    }
                });
            }
        }
    }

    /// Lexicographic key for deterministic tie-breaking: left/lower
    /// endpoints first. Monotone in each coordinate (all values nonnegative).
    pub(crate) fn sort_key(&self) -> [u64; 4] {
        match *self {
            Region::Interval { j, k } => [j as u64, k as u64, 0, 0],
            Region::Rect { j1, k1, j2, k2 } => [j1 as u64, j2 as u64, k1 as u64, k2 as u64],
            Region::Ball { cx, cy, r2 } => [cx.to_bits(), cy.to_bits(), r2.to_bits(), 0],
        }
    }
}

/// Visit an open ball's cells row by row as (y, x_lo, x_hi) inclusive spans.
/// Membership is the exact test (x-cx)^2 + (y-cy)^2 < r2; the float
/// comparisons are exact for integer coordinates, and the sqrt-derived span
/// guesses are corrected by at most one cell each side.
pub(crate) fn ball_rows(cx: f64, cy: f64, r2: f64, mut f: impl FnMut(i64, i64, i64)) {
    let r = r2.sqrt();
    let y_first = (cy - r).floor() as i64;
    let y_last = (cy + r).ceil() as i64;
    for y in y_first..=y_last {
        let dy = y as f64 - cy;
        let rem = r2 - dy * dy;
        if rem <= 0.0 {
            continue;
        }
        let w = rem.sqrt();
        let inside = |x: i64| {
            let dx = x as f64 - cx;
            dx * dx + dy * dy < r2
        };
        let mut lo = (cx - w).floor() as i64 + 1;
        let mut hi = (cx + w).ceil() as i64 - 1;
        while inside(lo - 1) {
            lo -= 1;
        }
        while lo <= hi && !inside(lo) {
            lo += 1;
        }
        while inside(hi + 1) {
            hi += 1;
        }
        while hi >= lo && !inside(hi) {
            hi -= 1;
        }
        if lo <= hi {
            f(y, lo, hi);
        }
    }
}

/// One level of an approximating set.
#[derive(Clone, Debug)]
pub struct ApproxLevel {
    pub shape: Shape,
    /// Grid side length the set was built for.
    pub n: u32,
    pub level: u32,
    pub epsilon: f64,
    /// Grid spacing d_l for endpoints/centers. For rectangles, where each
    /// marginal level has its own spacing, this is the coarsest one used.
    pub grid_step: u32,
    /// Shift period L_l of the disjoint-group construction. For rectangles,
    /// where the period is the side length itself, this is the largest one.
    pub shift_period: u32,
    pub kind: LevelKind,
}

/// Region storage. Interval levels stay implicit (start grids are arithmetic
/// progressions), which keeps evaluation at n ~ 10^6 free of any region
/// materialization; rectangle and ball levels are enumerated explicitly.
#[derive(Clone, Debug)]
pub enum LevelKind {
    /// Intervals (s, s+len] for each len in `lengths` (ascending) and each
    /// start s that is a multiple of `grid_step` with s + len <= n.
    Intervals { n: u32, lengths: Vec<u32> },
    /// Explicit region list plus the disjoint-group partition as index lists.
    Explicit {
        regions: Vec<Region>,
        groups: Vec<Vec<u32>>,
    },
}

impl ApproxLevel {
    pub fn n_regions(&self) -> u64 {
        match &self.kind {
            LevelKind::Intervals { n, lengths } => {
                let d = self.grid_step as u64;
                lengths
                    .iter()
                    .map(|&len| (*n as u64 - len as u64) / d + 1)
                    .sum()
            }
            LevelKind::Explicit { regions, .. } => regions.len() as u64,
        }
    }

    pub fn i_max(&self) -> usize {
        match &self.kind {
            LevelKind::Intervals { lengths, .. } => {
                (self.shift_period / self.grid_step) as usize * lengths.len()
            }
            LevelKind::Explicit { groups, .. } => groups.len(),
        }
    }

    pub fn group_sizes(&self) -> Vec<u64> {
        match &self.kind {
            LevelKind::Intervals { n, lengths } => {
                let (d, period) = (self.grid_step, self.shift_period);
                let mut sizes = Vec::with_capacity(self.i_max());
                for &len in lengths {
                    for j in (0..period).step_by(d as usize) {
                        debug_assert!(j + len <= *n);
                        sizes.push(((*n - len - j) / period) as u64 + 1);
                    }
                }
                sizes
            }
            LevelKind::Explicit { groups, .. } => {
                groups.iter().map(|g| g.len() as u64).collect()
            }
        }
    }

    /// Visit regions in enumeration order (the order `materialize` uses and
    /// the order the structured statistics report argmax regions in).
    pub fn for_each_region(&self, f: &mut dyn FnMut(Region)) {
        match &self.kind {
            LevelKind::Intervals { n, lengths } => {
                let d = self.grid_step;
                for &len in lengths {
                    let mut s = 0;
                    while s + len <= *n {
                        f(Region::Interval { j: s, k: s + len });
                        s += d;
                    }
                }
            }
            LevelKind::Explicit { regions, .. } => {
                for r in regions {
                    f(*r);
                }
            }
        }
    }

    pub fn materialize(&self) -> Vec<Region> {
        let mut out = Vec::with_capacity(self.n_regions() as usize);
        self.for_each_region(&mut |r| out.push(r));
        out
    }

    /// Disjoint groups as indices into the enumeration order.
    pub fn group_indices(&self) -> Vec<Vec<u32>> {
        match &self.kind {
            LevelKind::Intervals { n, lengths } => {
                let (d, period) = (self.grid_step, self.shift_period);
                // enumeration index of (length rank, start) is base + start/d
                let mut base = 0u32;
                let mut groups = Vec::with_capacity(self.i_max());
                for &len in lengths {
                    for j in (0..period).step_by(d as usize) {
                        let mut g = Vec::new();
                        let mut s = j;
                        while s + len <= *n {
                            g.push(base + s / d);
                            s += period;
                        }
                        groups.push(g);
                    }
                    base += (*n - len) / d + 1;
                }
                groups
            }
            LevelKind::Explicit { groups, .. } => groups.clone(),
        }
    }
}

/// Verify that a level's groups exactly partition its regions and that each
/// group is pairwise disjoint as cell sets, by painting cells on an epoch
/// grid. Intended for tests and the acceptance harness at moderate n.
pub fn check_partition(level: &ApproxLevel, n: usize) -> std::result::Result<(), String> {
    let regions = level.materialize();
    let groups = level.group_indices();
    let mut seen = vec![false; regions.len()];
    for g in &groups {
        for &i in g {
            let i = i as usize;
            if i >= regions.len() {
                return Err(format!("group index {i} out of range"));
            }
            if seen[i] {
                return Err(format!("region {i} appears in two groups"));
            }
            seen[i] = true;
        }
    }
    if let Some(miss) = seen.iter().position(|s| !s) {
        return Err(format!("region {miss} missing from all groups"));
    }
    let cells = match level.shape {
        Shape::Interval => n,
        Shape::Rect | Shape::Ball => n * n,
    };
    let mut epoch = vec![0u32; cells];
    let mut overlap = false;
    for (gi, g) in groups.iter().enumerate() {
        let stamp = gi as u32 + 1;
        for &i in g {
            regions[i as usize].for_each_cell(n, &mut |c| {
                if epoch[c] == stamp {
                    overlap = true;
                }
                epoch[c] = stamp;
            });
            if overlap {
                return Err(format!("overlap inside group {gi} at region {i}"));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_cells_are_half_open() {
        let r = Region::Interval { j: 3, k: 6 };
        let mut cells = Vec::new();
        r.for_each_cell(10, &mut |c| cells.push(c));
        assert_eq!(cells, vec![3, 4, 5]);
        assert_eq!(r.size(), 3);
    }

    #[test]
    fn rect_cells_row_major() {
        let r = Region::Rect { j1: 0, k1: 2, j2: 1, k2: 3 };
        let mut cells = Vec::new();
        r.for_each_cell(4, &mut |c| cells.push(c));
        // rows y=2,3; columns x=1,2
        assert_eq!(cells, vec![4, 5, 8, 9]);
        assert_eq!(r.size(), 4);
    }

    #[test]
    fn ball_membership_is_strict() {
        // r2 = 4: cell at distance exactly 2 is excluded
        let r = Region::Ball { cx: 5.0, cy: 5.0, r2: 4.0 };
        let mut cells = Vec::new();
        r.for_each_cell(10, &mut |c| cells.push(c));
        let has = |x: usize, y: usize| cells.contains(&((y - 1) * 10 + x - 1));
        assert!(has(5, 5) && has(6, 5) && has(5, 4));
        assert!(!has(7, 5) && !has(5, 7));
        // open disk of radius 2: 9 lattice points
        assert_eq!(r.size(), 9);
    }

    #[test]
    fn ball_size_matches_brute_force() {
        for &(cx, cy, r2) in &[(8.0, 8.0, 20.0), (7.5, 9.25, 13.7), (4.0, 12.0, 2.0)] {
            let r = Region::Ball { cx, cy, r2 };
            let mut brute = 0u64;
            for x in 1..=16i64 {
                for y in 1..=16i64 {
                    let (dx, dy) = (x as f64 - cx, y as f64 - cy);
                    if dx * dx + dy * dy < r2 {
                        brute += 1;
                    }
                }
            }
            assert_eq!(r.size(), brute, "ball ({cx},{cy},{r2})");
        }
    }

    #[test]
    fn tiny_ball_covers_only_its_center() {
        let r = Region::Ball { cx: 3.0, cy: 3.0, r2: 0.7 };
        let mut cells = Vec::new();
        r.for_each_cell(6, &mut |c| cells.push(c));
        assert_eq!(cells, vec![2 * 6 + 2]);
    }

    #[test]
    fn shape_round_trips_through_strings() {
        for s in [Shape::Interval, Shape::Rect, Shape::Ball] {
            assert_eq!(s.to_string().parse::<Shape>().unwrap(), s);
        }
        assert!("square".parse::<Shape>().is_err());
    }
}
