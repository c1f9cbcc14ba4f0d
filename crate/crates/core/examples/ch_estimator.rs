//! Simulated coincidence counts for the five setups and the resulting CH
//! estimate with its 95% interval.

use wbell::experiment::{estimate_ch, simulate_experiment};
use wbell::inequalities::cirelson_ch_bound;
use wbell::scenario::QuantumState;

fn main() -> wbell::Result<()> {
    let mut args = std::env::args().skip(1);
    let shots = args.next().and_then(|s| s.parse().ok()).unwrap_or(100_000);
    let noise = args.next().and_then(|s| s.parse().ok()).unwrap_or(0.0);

    let state = QuantumState::w().white_noise(noise)?;
    let tables = simulate_experiment(&state, shots, 1)?;
    for t in &tables {
        println!("{} {:?}", t.setup(), t.counts());
    }
    let est = estimate_ch(&tables)?;
    println!(
        "CH estimate {:.5} ± {:.5}, 95% CI {:?}",
        est.value, est.sigma, est.ci95
    );
    println!(
        "exceeds the quantum bound {:.5}: {}",
        cirelson_ch_bound(),
        est.ci95[0] > cirelson_ch_bound()
    );
    Ok(())
}
