//! Univariate interval approximating sets.
//!
//! Level l holds intervals (j, k] whose length lies in (2^(l-1), 2^l], with
//! both endpoints multiples of the spacing d_l = ceil(eps_l 2^(l-1)). The
//! relative spacing eps_l = 1/(6 sqrt(l_max - l + 4)) tightens at coarse
//! levels, which is what the risk analysis of the structured statistics
//! needs. Groups shift a base interval by the period L_l, the largest
//! multiple of d_l not exceeding 2^l; since every length at the level is at
//! most L_l, same-group intervals never overlap.

use super::{ApproxLevel, LevelKind, Shape};
use crate::error::Error;
use crate::Result;

/// Smallest l >= 0 with 2^(l+3) >= n, the top level for side lengths up to n/8.
pub(crate) fn top_level(n: usize) -> u32 {
    let mut l = 0;
    while (1u64 << (l + 3)) < n as u64 {
        l += 1;
    }
    l
}

pub fn build_interval_levels(n: usize) -> Result<Vec<ApproxLevel>> {
    if n < 16 {
        return Err(Error::config(format!("grid too small (n = {n}, need n >= 16)")));
    }
    if n > u32::MAX as usize {
        return Err(Error::config(format!("grid too large (n = {n})")));
    }
    let l_max = top_level(n);
    let mut levels = Vec::with_capacity(l_max as usize + 1);
    for level in 0..=l_max {
        let epsilon = 1.0 / (6.0 * ((l_max - level + 4) as f64).sqrt());
        let step = (epsilon * f64::exp2(level as f64 - 1.0)).ceil() as u32;
        let half = (1u32 << level) >> 1;
        let full = 1u32 << level;
        // lengths: multiples of step in (half, full]
        let lengths: Vec<u32> = (1..)
            .map(|m| m * step)
            .skip_while(|&len| len <= half)
            .take_while(|&len| len <= full)
            .collect();
        debug_assert!(!lengths.is_empty());
        let period = (full / step) * step;
        debug_assert!(period >= *lengths.last().unwrap());
        levels.push(ApproxLevel {
            shape: Shape::Interval,
            n: n as u32,
            level,
            epsilon,
            grid_step: step,
            shift_period: period,
            kind: LevelKind::Intervals {
                n: n as u32,
                lengths,
            },
        });
    }
    Ok(levels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regions::{check_partition, Region};

    #[test]
    fn rejects_small_grids() {
        assert!(build_interval_levels(15).is_err());
        assert!(build_interval_levels(16).is_ok());
    }

    #[test]
    fn top_level_matches_ceil_log2() {
        for (n, want) in [(16, 1), (64, 3), (256, 5), (287, 6), (1024, 7), (1_000_000, 17)] {
            assert_eq!(top_level(n), want, "n = {n}");
        }
    }

    #[test]
    fn coarsest_level_epsilon_is_one_twelfth() {
        for n in [16, 64, 256, 1024, 4096] {
            let levels = build_interval_levels(n).unwrap();
            assert_eq!(levels.last().unwrap().epsilon, 1.0 / 12.0);
        }
    }

    #[test]
    fn unit_level_is_all_unit_intervals_in_one_group() {
        let levels = build_interval_levels(64).unwrap();
        let l0 = &levels[0];
        assert_eq!(l0.grid_step, 1);
        assert_eq!(l0.n_regions(), 64);
        assert_eq!(l0.i_max(), 1);
        assert_eq!(l0.group_sizes(), vec![64]);
        let regions = l0.materialize();
        assert_eq!(regions[0], Region::Interval { j: 0, k: 1 });
        assert_eq!(regions[63], Region::Interval { j: 63, k: 64 });
    }

    #[test]
    fn per_level_counts_match_independent_enumeration() {
        // frozen from a separate reference implementation
        let cases: &[(usize, &[u64])] = &[
            (64, &[64, 63, 123, 234]),
            (256, &[256, 255, 507, 1002, 1956, 932]),
            (1024, &[1024, 1023, 2043, 4074, 8100, 4004, 3586, 1705]),
        ];
        for &(n, want) in cases {
            let levels = build_interval_levels(n).unwrap();
            let got: Vec<u64> = levels.iter().map(|l| l.n_regions()).collect();
            assert_eq!(got, want, "n = {n}");
        }
    }

    #[test]
    fn grid_steps_and_periods_at_1024() {
        let levels = build_interval_levels(1024).unwrap();
        let steps: Vec<u32> = levels.iter().map(|l| l.grid_step).collect();
        let periods: Vec<u32> = levels.iter().map(|l| l.shift_period).collect();
        assert_eq!(steps, vec![1, 1, 1, 1, 1, 2, 3, 6]);
        assert_eq!(periods, vec![1, 2, 4, 8, 16, 32, 63, 126]);
    }

    #[test]
    fn lengths_stay_in_the_dyadic_bracket() {
        for n in [16, 64, 100, 287, 1024] {
            for level in build_interval_levels(n).unwrap() {
                let (half, full) = ((1u64 << level.level) >> 1, 1u64 << level.level);
                level.for_each_region(&mut |r| {
                    let len = r.size();
                    assert!(len > half && len <= full, "n={n} l={} len={len}", level.level);
                });
            }
        }
    }

    #[test]
    fn cardinality_bound_per_level() {
        for n in [64usize, 256, 1024] {
            for level in build_interval_levels(n).unwrap() {
                let l = level.level;
                let eps = level.epsilon;
                let cap = n as f64 * f64::exp2(-(l as f64))
                    * f64::exp2(2.0 * l as f64).min(4.0 / (eps * eps));
                assert!(
                    level.n_regions() as f64 <= cap,
                    "n={n} l={l}: {} > {cap}",
                    level.n_regions()
                );
                // looser logarithmic form of the same count
                let log_cap = 144.0 * n as f64 * f64::exp2(-(l as f64)) * (n as f64).log2();
                assert!(level.n_regions() as f64 <= log_cap);
            }
        }
    }

    #[test]
    fn groups_partition_and_are_disjoint() {
        for n in [16usize, 64, 100, 256, 287] {
            for level in build_interval_levels(n).unwrap() {
                check_partition(&level, n).unwrap_or_else(|e| panic!("n={n}: {e}"));
            }
        }
    }

    #[test]
    fn group_sizes_match_index_lists() {
        for n in [64usize, 287, 1024] {
            for level in build_interval_levels(n).unwrap() {
                let sizes = level.group_sizes();
                let lens: Vec<u64> = level.group_indices().iter().map(|g| g.len() as u64).collect();
                assert_eq!(sizes, lens, "n={n} l={}", level.level);
            }
        }
    }

    #[test]
    fn group_sizes_hug_the_shift_quotient() {
        // at powers of two every group holds floor(n/L) or floor(n/L) - 1
        // intervals; at general n a boundary group can pick up one extra
        for n in [64u64, 256, 1024] {
            for level in build_interval_levels(n as usize).unwrap() {
                let q = n / level.shift_period as u64;
                for s in level.group_sizes() {
                    assert!(s == q || s + 1 == q, "n={n} l={}: size {s}, q {q}", level.level);
                }
            }
        }
        for n in [100u64, 287] {
            for level in build_interval_levels(n as usize).unwrap() {
                let q = n / level.shift_period as u64;
                for s in level.group_sizes() {
                    assert!(
                        s + 1 == q || s == q || s == q + 1,
                        "n={n} l={}: size {s}, q {q}",
                        level.level
                    );
                }
            }
        }
    }

    #[test]
    fn total_count_is_near_linear() {
        let n = 1 << 16;
        let total: u64 = build_interval_levels(n)
            .unwrap()
            .iter()
            .map(|l| l.n_regions())
            .sum();
        // sum over levels of n_l stays a bounded multiple of n (the per-cell
        // peak sits where the grid spacing first exceeds one cell)
        assert!(total < n as u64 * 64, "total {total}");
        assert!(total > n as u64, "total {total}");
    }
}
