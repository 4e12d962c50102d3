//! Build the multiscale approximating sets and show what they contain:
//! per-level sizes, the approximation guarantee in action, and the region
//! counts of the two-dimensional families.

use blockscan::regions::{
    approximate_region, build_ball_levels, build_interval_levels, build_rectangle_levels, Region,
};

fn main() -> blockscan::Result<()> {
    let n = 256;
    let levels = build_interval_levels(n)?;

    println!("interval approximating set at n = {n}");
    println!(
        "{:>5} {:>9} {:>9} {:>8} {:>7}",
        "level", "epsilon", "grid", "regions", "groups"
    );
    for lv in &levels {
        println!(
            "{:>5} {:>9.5} {:>9} {:>8} {:>7}",
            lv.level,
            lv.epsilon,
            lv.grid_step,
            lv.n_regions(),
            lv.i_max()
        );
    }
    let total: u64 = levels.iter().map(|lv| lv.n_regions()).sum();
    println!("total: {total} intervals (out of {} arbitrary ones)", n * (n + 1) / 2);

    // Every interval up to the maximal block length is close to some
    // member in symmetric difference.
    println!("\nnearest members:");
    for (j, k) in [(17u32, 43u32), (100, 130), (3, 7)] {
        let target = Region::Interval { j, k };
        let (member, sym_diff) = approximate_region(&target, &levels)?;
        println!("  ({j:>3}, {k:>3}]  ->  {member:?}  |sym diff| = {sym_diff}");
    }

    // The two-dimensional families grow much faster with n; their builders
    // refuse grids whose explicit region list would not fit in memory.
    let n2 = 64;
    let rects: u64 = build_rectangle_levels(n2, 2)?.iter().map(|lv| lv.n_regions()).sum();
    let balls: u64 = build_ball_levels(n2)?.iter().map(|lv| lv.n_regions()).sum();
    println!("\non a {n2} x {n2} grid: {rects} rectangles, {balls} lattice balls");
    Ok(())
}
