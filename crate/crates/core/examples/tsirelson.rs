//! Random search plus simplex refinement for the largest CHSH value any
//! two-qubit state reaches with x–z plane observables.

use wbell::inequalities::{
    bell_operator, canonical_chsh_observables, tsirelson_max, ChshSpec, CIRELSON_CHSH_BOUND,
};
use wbell::qmath::hermitian_eigenvalues;

fn main() -> wbell::Result<()> {
    let samples = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(20_000);
    let r = tsirelson_max(samples, 7)?;
    println!(
        "{} draws: sampled max {:.12}",
        r.samples, r.sampled_max_spectral
    );
    println!(
        "refined max {:.15} at {:?}",
        r.refined_max, r.refined_angles
    );
    println!("2√2         {CIRELSON_CHSH_BOUND:.15}");

    let [a_upper, a, b_upper, b] = canonical_chsh_observables();
    let op = bell_operator(&a_upper, &a, &b_upper, &b, ChshSpec::numeric(1, 1))?;
    println!("canonical spectrum {:?}", hermitian_eigenvalues(&op)?);
    Ok(())
}
