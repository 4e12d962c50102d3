//! The goodness-of-fit statistics on sorted p-values: higher criticism,
//! Berk-Jones, and the divergence family that interpolates between them.

use blockscan::gof::{bj, hc, hc_plus, phi_divergence, SortedPValues};
use blockscan::rng;

fn main() -> blockscan::Result<()> {
    // A null sample: n independent uniforms.
    let n = 1000;
    let p = SortedPValues::new((0..n).map(|i| rng::uniform_at(42, i)).collect())?;

    println!("null p-values, n = {n}");
    println!("  HC  = {:.4}", hc(&p).value);
    println!("  HC+ = {:.4}", hc_plus(&p).value);
    println!("  BJ  = {:.4}", bj(&p).value);
    for s in [-1.0, 0.0, 0.5, 1.0, 1.5, 2.0] {
        println!("  S({s:>4}) = {:.4}", phi_divergence(&p, s)?.value);
    }

    // The s = 2 member is half the squared one-sided higher criticism.
    let s2 = phi_divergence(&p, 2.0)?.value;
    let hcp = hc_plus(&p).value;
    println!("\ns = 2 identity: {s2:.10} = {:.10}", 0.5 * hcp * hcp);

    // A handful of very small p-values sends every member up.
    let mut spiked: Vec<f64> = p.values().to_vec();
    for (i, q) in spiked.iter_mut().take(5).enumerate() {
        *q = 1e-8 * (i + 1) as f64;
    }
    let spiked = SortedPValues::new(spiked)?;
    println!(
        "\nwith five p-values spiked to ~1e-8: HC = {:.2}, BJ = {:.2}",
        hc(&spiked).value,
        bj(&spiked).value
    );
    Ok(())
}
