//! CH lower bound under white noise, exact and sampled, plus the noise
//! levels where it crosses 0 and (√2−1)/2.

use wbell::experiment::{noise_sweep, noise_threshold, SweepMode};
use wbell::inequalities::cirelson_ch_bound;

fn main() -> wbell::Result<()> {
    let rows = noise_sweep(
        0.0,
        0.5,
        11,
        SweepMode::Sampled {
            shots: 20_000,
            seed: 3,
        },
    )?;
    println!(
        "{:>6} {:>10} {:>10} {:>8}",
        "p", "exact", "sampled", "sigma"
    );
    for r in rows {
        println!(
            "{:>6.3} {:>10.5} {:>10.5} {:>8.5}",
            r.p,
            r.ch_lower_exact,
            r.estimate.unwrap_or(f64::NAN),
            r.sigma.unwrap_or(f64::NAN)
        );
    }
    println!("CH = 0 at p = {:.10}", noise_threshold(0.0)?);
    println!(
        "CH = (√2−1)/2 at p = {:.10}",
        noise_threshold(cirelson_ch_bound())?
    );
    Ok(())
}
