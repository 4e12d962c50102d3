//! Multiscale detection of block-structured signals in Gaussian noise.
//!
//! The library builds dyadic families of candidate regions (intervals,
//! rectangles, lattice balls), aggregates observations over each region in
//! O(1) via prefix sums, and applies goodness-of-fit statistics (higher
//! criticism, Berk-Jones, and the surrounding phi-divergence family) to the
//! per-level p-values. A Monte Carlo engine calibrates critical values,
//! traces power curves, and stress-tests the analytic tail bounds.
//!
//! Each major capability has a runnable example:
//!
//! ```text
//! cargo run --release --example approx_sets        # region families + grouping
//! cargo run --release --example gof_statistics     # HC / BJ / phi-divergence
//! cargo run --release --example generate_data      # signal models + calibration
//! cargo run --release --example structured_detect  # end-to-end detection
//! cargo run --release --example boundaries         # detection boundary tables
//! cargo run --release --example critical_values    # null simulation
//! cargo run --release --example power_study        # power comparison
//! cargo run --release --example tail_bounds        # analytic vs empirical tails
//! ```
//!
//! The same functionality is scriptable through the `blockscan` binary; see
//! the README for the subcommand reference.

pub mod cli;
pub mod error;
pub mod gauss;
pub mod gof;
pub mod io;
pub mod mc;
pub mod models;
pub mod regions;
pub mod rng;
pub mod sort;
pub mod structured;
pub mod theory;

pub use error::Error;

/// Shorthand used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
