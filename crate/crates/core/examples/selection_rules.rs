//! Which pair each σ_z pattern selects under the W rule and the GHZ rule,
//! and whether a participant can decide membership locally.

use wbell::scenario::all_outcomes;
use wbell::selection::{classify_trio, membership_is_local, SelectionRule};

fn main() {
    for rule in [SelectionRule::WMinusMinus, SelectionRule::GhzRule] {
        println!("{rule:?} (local membership: {})", membership_is_local(rule));
        for z in all_outcomes(3) {
            println!("  {z:?} -> {:?}", classify_trio(rule, [z[0], z[1], z[2]]));
        }
    }
}
