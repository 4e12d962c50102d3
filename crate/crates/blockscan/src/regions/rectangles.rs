//! Axis-aligned rectangle approximating sets on the square grid.
//!
//! Level l brackets the area: 2^(l-1) < |R| <= 2^l. Rectangles are products
//! of marginal intervals drawn from univariate sets built with a shared
//! relative spacing eps_l = 1/(6 sqrt(log2(n^2 / 2^(l-1)))), over marginal
//! level pairs (l1, l2) with l <= l1 + l2 <= l + 1. The per-side dyadic
//! brackets make each side length identify its marginal level, so no
//! rectangle is produced twice. Groups shift a base rectangle by its own
//! side length in each dimension, which keeps same-group members disjoint.

use std::collections::BTreeMap;

use super::{intervals, ApproxLevel, LevelKind, Region, Shape};
use crate::error::Error;
use crate::Result;

pub fn build_rectangle_levels(n: usize, d: usize) -> Result<Vec<ApproxLevel>> {
    match d {
        1 => intervals::build_interval_levels(n),
        2 => build_2d(n),
        _ => Err(Error::config(format!("unsupported dimension d = {d}"))),
    }
}

/// Multiples of `step` in the half-open bracket (2^(l-1), 2^l].
fn bracket_lengths(li: u32, step: u32) -> Vec<u32> {
    let half = (1u32 << li) >> 1;
    let full = 1u32 << li;
    (half / step + 1..=full / step).map(|m| m * step).collect()
}

fn level_epsilon(n: usize, level: u32) -> f64 {
    1.0 / (6.0 * (2.0 * (n as f64).log2() - level as f64 + 1.0).sqrt())
}

/// Visit every admissible (d1, len1, d2, len2) side combination of one
/// area level.
fn for_each_side_pair(
    n32: u32,
    side_top: u32,
    level: u32,
    epsilon: f64,
    f: &mut impl FnMut(u32, u32, u32, u32),
) {
    let marginal = |li: u32| -> (u32, Vec<u32>) {
        let step = (epsilon * f64::exp2(li as f64 - 1.0)).ceil() as u32;
        (step, bracket_lengths(li, step))
    };
    for l1 in 0..=side_top {
        let (d1, lens1) = marginal(l1);
        for l2 in 0..=side_top {
            if l1 + l2 < level || l1 + l2 > level + 1 {
                continue;
            }
            let (d2, lens2) = marginal(l2);
            for &len1 in &lens1 {
                if len1 > n32 {
                    continue;
                }
                for &len2 in &lens2 {
                    if len2 > n32 {
                        continue;
                    }
                    let area = len1 as u64 * len2 as u64;
                    if 2 * area <= (1u64 << level) || area > (1u64 << level) {
                        continue;
                    }
                    f(d1, len1, d2, len2);
                }
            }
        }
    }
}

fn build_2d(n: usize) -> Result<Vec<ApproxLevel>> {
    if n < 16 {
        return Err(Error::config(format!("grid too small (n = {n}, need n >= 16)")));
    }
    let nn = (n as u64) * (n as u64);
    let side_top = intervals::top_level(n);
    // top level for areas up to (n/8)^2
    let mut area_top = 0u32;
    while (1u128 << area_top) * 64 < nn as u128 {
        area_top += 1;
    }
    let n32 = n as u32;

    // dry pass: refuse scales whose enumeration would thrash memory before
    // allocating anything
    let mut total: u64 = 0;
    for level in 0..=area_top {
        let epsilon = level_epsilon(n, level);
        for_each_side_pair(n32, side_top, level, epsilon, &mut |d1, len1, d2, len2| {
            let starts1 = ((n32 - len1) / d1) as u64 + 1;
            let starts2 = ((n32 - len2) / d2) as u64 + 1;
            total += starts1 * starts2;
        });
    }
    if total > super::MAX_EXPLICIT_REGIONS {
        return Err(Error::guard(format!(
            "rectangle approximating set at n = {n} holds {total} regions, over the cap of {}",
            super::MAX_EXPLICIT_REGIONS
        )));
    }

    let mut levels = Vec::with_capacity(area_top as usize + 1);
    for level in 0..=area_top {
        let epsilon = level_epsilon(n, level);
        let mut regions: Vec<Region> = Vec::new();
        let mut groups: BTreeMap<(u32, u32, u32, u32), Vec<u32>> = BTreeMap::new();
        let mut max_step = 1u32;
        let mut max_period = 1u32;
        for_each_side_pair(n32, side_top, level, epsilon, &mut |d1, len1, d2, len2| {
            max_step = max_step.max(d1).max(d2);
            max_period = max_period.max(len1).max(len2);
            for s1 in (0..=n32 - len1).step_by(d1 as usize) {
                for s2 in (0..=n32 - len2).step_by(d2 as usize) {
                    let idx = regions.len() as u32;
                    regions.push(Region::Rect {
                        j1: s1,
                        k1: s1 + len1,
                        j2: s2,
                        k2: s2 + len2,
                    });
                    groups
                        .entry((len1, len2, s1 % len1, s2 % len2))
                        .or_default()
                        .push(idx);
                }
            }
        });
        levels.push(ApproxLevel {
            shape: Shape::Rect,
            n: n32,
            level,
            epsilon,
            grid_step: max_step,
            shift_period: max_period,
            kind: LevelKind::Explicit {
                regions,
                groups: groups.into_values().collect(),
            },
        });
    }
    Ok(levels)
}
