//! Born-rule distributions of |W⟩ for the five measurement setups and the
//! counterfactual CHSH value of the selected pair.

use wbell::inequalities::{chsh_value, ChshSpec};
use wbell::scenario::QuantumState;
use wbell::selection::{counterfactual_correlations, epr_certainty_checks, five_distributions};

fn main() -> wbell::Result<()> {
    let w = QuantumState::w();
    for dist in five_distributions(&w)? {
        println!("{}", dist.setup());
        for (outcome, p) in dist.iter().filter(|(_, p)| *p > 1e-12) {
            println!("  {outcome:?}  {p:.6}");
        }
    }

    let c = counterfactual_correlations(&w)?;
    println!(
        "C(A,B) = {:?}  C(A,b) = {:?}  C(a,B) = {:?}  C(a,b) = {:?}",
        c.zz, c.zx, c.xz, c.xx
    );
    let s = chsh_value(c.zz, c.zx, c.xz, c.xx, ChshSpec::symbolic());
    println!(
        "CHSH with m = n = x_k: {:?} (x_k = +1: {}, x_k = -1: {})",
        s,
        s.eval(1),
        s.eval(-1)
    );
    println!("certainty checks: {:?}", epr_certainty_checks(&w)?);
    Ok(())
}
