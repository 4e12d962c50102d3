//! Approximation queries against a built set: find the member closest to an
//! arbitrary target region in symmetric difference.

use std::f64::consts::PI;

use super::{ball_rows, ApproxLevel, Region, Shape};
use crate::error::Error;
use crate::Result;

/// Continuous-area bound on |B_R(0) triangle B_r(x)| for 0 < r <= R and
/// center distance `dist`: (1 - r^2/R^2 + 2 dist/R) pi R^2.
pub fn ball_symdiff_bound(big_r: f64, small_r: f64, dist: f64) -> Result<f64> {
    if !(small_r > 0.0 && small_r <= big_r && big_r.is_finite()) || dist < 0.0 {
        return Err(Error::domain(format!(
            "need 0 < r <= R and dist >= 0, got r = {small_r}, R = {big_r}, dist = {dist}"
        )));
    }
    Ok((1.0 - (small_r * small_r) / (big_r * big_r) + 2.0 * dist / big_r) * PI * big_r * big_r)
}

/// Cell count of the symmetric difference of two same-kind regions.
pub fn symmetric_difference(a: &Region, b: &Region) -> Result<u64> {
    match (a, b) {
        (&Region::Interval { j: aj, k: ak }, &Region::Interval { j: bj, k: bk }) => {
            Ok(interval_symdiff(aj, ak, bj, bk))
        }
        (
            &Region::Rect { j1: a1, k1: b1, j2: a2, k2: b2 },
            &Region::Rect { j1: c1, k1: d1, j2: c2, k2: d2 },
        ) => Ok(rect_symdiff((a1, b1, a2, b2), (c1, d1, c2, d2))),
        (&Region::Ball { cx, cy, r2 }, other @ &Region::Ball { .. }) => {
            let (spans, size) = ball_spans(cx, cy, r2);
            Ok(ball_symdiff(&spans, size, other))
        }
        _ => Err(Error::domain("regions are of different kinds")),
    }
}

fn overlap_1d(aj: u32, ak: u32, bj: u32, bk: u32) -> u64 {
    let lo = aj.max(bj);
    let hi = ak.min(bk);
    hi.saturating_sub(lo) as u64
}

fn interval_symdiff(aj: u32, ak: u32, bj: u32, bk: u32) -> u64 {
    (ak - aj) as u64 + (bk - bj) as u64 - 2 * overlap_1d(aj, ak, bj, bk)
}

type RectSides = (u32, u32, u32, u32);

fn rect_symdiff(a: RectSides, b: RectSides) -> u64 {
    let area_a = (a.1 - a.0) as u64 * (a.3 - a.2) as u64;
    let area_b = (b.1 - b.0) as u64 * (b.3 - b.2) as u64;
    let inter = overlap_1d(a.0, a.1, b.0, b.1) * overlap_1d(a.2, a.3, b.2, b.3);
    area_a + area_b - 2 * inter
}

fn ball_spans(cx: f64, cy: f64, r2: f64) -> (Vec<(i64, i64, i64)>, u64) {
    let mut spans = Vec::new();
    let mut size = 0u64;
    ball_rows(cx, cy, r2, |y, lo, hi| {
        spans.push((y, lo, hi));
        size += (hi - lo + 1) as u64;
    });
    (spans, size)
}

/// Symmetric difference against precomputed target spans; rows arrive from
/// `ball_rows` in ascending y order, so a two-pointer merge suffices.
fn ball_symdiff(target: &[(i64, i64, i64)], target_size: u64, cand: &Region) -> u64 {
    let &Region::Ball { cx, cy, r2 } = cand else {
        unreachable!("caller guarantees a ball");
    };
    let mut cand_size = 0u64;
    let mut inter = 0u64;
    let mut it = target.iter().peekable();
    ball_rows(cx, cy, r2, |y, lo, hi| {
        cand_size += (hi - lo + 1) as u64;
        while let Some(&&(ty, _, _)) = it.peek() {
            if ty < y {
                it.next();
            } else {
                break;
            }
        }
        if let Some(&&(ty, tlo, thi)) = it.peek() {
            if ty == y {
                let o_lo = lo.max(tlo);
                let o_hi = hi.min(thi);
                if o_lo <= o_hi {
                    inter += (o_hi - o_lo + 1) as u64;
                }
            }
        }
    });
    target_size + cand_size - 2 * inter
}

fn validate_target(target: &Region, shape: Shape, n: usize) -> Result<()> {
    let side_ok = |j: u32, k: u32| j < k && (k as usize) <= n && 8 * (k - j) as usize <= n;
    match (target, shape) {
        (&Region::Interval { j, k }, Shape::Interval) => {
            if !side_ok(j, k) {
                return Err(Error::domain(format!(
                    "interval ({j}, {k}] outside the grid or longer than n/8 = {}",
                    n / 8
                )));
            }
        }
        (&Region::Rect { j1, k1, j2, k2 }, Shape::Rect) => {
            if !side_ok(j1, k1) || !side_ok(j2, k2) {
                return Err(Error::domain(
                    "rectangle outside the grid or with a side longer than n/8",
                ));
            }
        }
        (&Region::Ball { cx, cy, r2 }, Shape::Ball) => {
            let nn = (n * n) as f64;
            if !(1.0..=nn / 8.0).contains(&r2) {
                return Err(Error::domain(format!(
                    "squared radius {r2} outside [1, n^2/8 = {}]",
                    nn / 8.0
                )));
            }
            let r = r2.sqrt();
            let inside =
                |c: f64| c - r >= 0.0 && c + r <= n as f64 + 1.0 && c.is_finite();
            if !inside(cx) || !inside(cy) {
                return Err(Error::domain("ball extends outside the grid"));
            }
        }
        _ => {
            return Err(Error::domain(
                "target kind does not match the approximating set's shape",
            ))
        }
    }
    Ok(())
}

/// Member of the approximating set minimizing the symmetric difference to
/// `target`, together with the achieved cell count. Ties break to the lowest
/// level, then to the smallest left/lower endpoint.
pub fn approximate_region(target: &Region, levels: &[ApproxLevel]) -> Result<(Region, u64)> {
    let first = levels
        .first()
        .ok_or_else(|| Error::config("empty approximating set"))?;
    let (shape, n) = (first.shape, first.n as usize);
    debug_assert!(levels.iter().all(|l| l.shape == shape && l.n == first.n));
    validate_target(target, shape, n)?;

    let mut best: Option<(u64, u32, [u64; 4], Region)> = None;
    let mut consider = |sd: u64, lvl: u32, r: Region| {
        let key = r.sort_key();
        let better = match &best {
            None => true,
            Some((bsd, bl, bk, _)) => (sd, lvl, key) < (*bsd, *bl, *bk),
        };
        if better {
            best = Some((sd, lvl, key, r));
        }
    };

    match *target {
        Region::Interval { j, k } => {
            for level in levels {
                level.for_each_region(&mut |r| {
                    if let Region::Interval { j: bj, k: bk } = r {
                        consider(interval_symdiff(j, k, bj, bk), level.level, r);
                    }
                });
            }
        }
        Region::Rect { j1, k1, j2, k2 } => {
            for level in levels {
                level.for_each_region(&mut |r| {
                    if let Region::Rect { j1: c1, k1: d1, j2: c2, k2: d2 } = r {
                        consider(
                            rect_symdiff((j1, k1, j2, k2), (c1, d1, c2, d2)),
                            level.level,
                            r,
                        );
                    }
                });
            }
        }
        Region::Ball { cx, cy, r2 } => {
            let (spans, size) = ball_spans(cx, cy, r2);
            for level in levels {
                level.for_each_region(&mut |r| {
                    consider(ball_symdiff(&spans, size, &r), level.level, r);
                });
            }
        }
    }
    let (sd, _, _, region) = best.ok_or_else(|| Error::config("approximating set is empty"))?;
    Ok((region, sd))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regions::{build_ball_levels, build_interval_levels, build_rectangle_levels};
    use approx::assert_relative_eq;

    #[test]
    fn members_approximate_themselves() {
        let il = build_interval_levels(64).unwrap();
        let member = il[2].materialize()[5];
        assert_eq!(approximate_region(&member, &il).unwrap(), (member, 0));

        let rl = build_rectangle_levels(64, 2).unwrap();
        let member = rl[3].materialize()[10];
        assert_eq!(approximate_region(&member, &rl).unwrap(), (member, 0));

        let bl = build_ball_levels(64).unwrap();
        let member = bl[5].materialize()[7];
        let (got, sd) = approximate_region(&member, &bl).unwrap();
        assert_eq!(sd, 0);
        assert_eq!(got, member);
    }

    #[test]
    fn interval_bound_holds_exhaustively() {
        // every admissible interval sits within 2 d_l of some member, where
        // l is the level whose length bracket contains it
        let n = 256u32;
        let levels = build_interval_levels(n as usize).unwrap();
        for len in 1..=n / 8 {
            let l = levels.iter().find(|lv| len <= 1 << lv.level).unwrap();
            let cap = 2 * l.grid_step as u64;
            for j in 0..=(n - len) {
                let target = Region::Interval { j, k: j + len };
                let (_, sd) = approximate_region(&target, &levels).unwrap();
                assert!(sd <= cap, "({j}, {}] sd {sd} > {cap}", j + len);
            }
        }
    }

    #[test]
    fn ties_break_to_lowest_level_then_smallest_endpoint() {
        let levels = build_interval_levels(256).unwrap();
        for target in [
            Region::Interval { j: 3, k: 22 },
            Region::Interval { j: 100, k: 131 },
            Region::Interval { j: 17, k: 43 },
        ] {
            let (got, sd) = approximate_region(&target, &levels).unwrap();
            // re-scan to confirm minimality and canonical tie choice
            let mut winners = Vec::new();
            for level in &levels {
                level.for_each_region(&mut |r| {
                    let d = symmetric_difference(&target, &r).unwrap();
                    if d <= sd {
                        winners.push((d, level.level, r));
                    }
                });
            }
            let min_sd = winners.iter().map(|w| w.0).min().unwrap();
            assert_eq!(min_sd, sd);
            let canonical = winners
                .iter()
                .filter(|w| w.0 == sd)
                .min_by_key(|w| (w.1, w.2.sort_key()))
                .unwrap();
            assert_eq!(canonical.2, got);
        }
    }

    #[test]
    fn rejects_out_of_range_targets() {
        let levels = build_interval_levels(64).unwrap();
        // longer than n/8
        assert!(approximate_region(&Region::Interval { j: 0, k: 9 }, &levels).is_err());
        // past the right edge
        assert!(approximate_region(&Region::Interval { j: 62, k: 65 }, &levels).is_err());
        // wrong kind
        let ball = Region::Ball { cx: 10.0, cy: 10.0, r2: 4.0 };
        assert!(approximate_region(&ball, &levels).is_err());
        let bl = build_ball_levels(64).unwrap();
        // squared radius above n^2/8
        let big = Region::Ball { cx: 32.0, cy: 32.0, r2: 513.0 };
        assert!(approximate_region(&big, &bl).is_err());
        // pokes outside the grid
        let edge = Region::Ball { cx: 2.0, cy: 32.0, r2: 9.0 };
        assert!(approximate_region(&edge, &bl).is_err());
    }

    #[test]
    fn symdiff_bound_exact_values() {
        assert_relative_eq!(ball_symdiff_bound(1.0, 1.0, 0.0).unwrap(), 0.0);
        assert_relative_eq!(ball_symdiff_bound(1.0, 1.0, 1.0).unwrap(), 2.0 * PI);
        assert_relative_eq!(ball_symdiff_bound(2.0, 1.0, 0.0).unwrap(), 3.0 * PI);
        assert!(ball_symdiff_bound(1.0, 2.0, 0.0).is_err());
        assert!(ball_symdiff_bound(2.0, 1.0, -0.5).is_err());
    }

    #[test]
    fn raster_symdiff_stays_under_the_bound() {
        // discretization adds at most a perimeter-order slack
        let center = 200.0;
        for &(big, small, dist) in &[
            (5.0, 4.0, 0.0),
            (9.5, 9.5, 3.0),
            (20.0, 13.0, 2.5),
            (50.0, 49.0, 0.25),
            (7.3, 2.1, 6.0),
        ] {
            let a = Region::Ball { cx: center, cy: center, r2: big * big };
            let b = Region::Ball { cx: center + dist, cy: center, r2: small * small };
            let raster = symmetric_difference(&a, &b).unwrap() as f64;
            let bound = ball_symdiff_bound(big, small, dist).unwrap();
            let slack = 8.0 * big.max(1.0);
            assert!(
                raster <= bound + slack,
                "R={big} r={small} d={dist}: {raster} > {bound} + {slack}"
            );
        }
    }

    #[test]
    fn ball_targets_approximate_within_the_area_bound() {
        let n = 64usize;
        let levels = build_ball_levels(n).unwrap();
        for &(cx, cy, radius) in &[
            (20.5, 33.0, 4.3),
            (10.0, 50.0, 2.0),
            (32.0, 32.0, 20.0),
            (44.25, 17.75, 7.9),
            (31.0, 30.0, 11.0),
        ] {
            let target = Region::Ball { cx, cy, r2: radius * radius };
            let (_, sd) = approximate_region(&target, &levels).unwrap();
            let area = PI * radius * radius;
            let cap = 3.0 * area / ((n * n) as f64 / area).log2().sqrt()
                + 8.0 * radius.max(1.0);
            assert!(
                (sd as f64) <= cap,
                "ball ({cx}, {cy}, R={radius}): sd {sd} > {cap}"
            );
        }
    }

    #[test]
    fn rect_targets_get_reasonable_approximations() {
        let levels = build_rectangle_levels(64, 2).unwrap();
        let target = Region::Rect { j1: 3, k1: 10, j2: 17, k2: 22 };
        let (got, sd) = approximate_region(&target, &levels).unwrap();
        assert!(sd <= target.size());
        assert!(got.size() > 0);
    }
}
