//! Exhaustive deterministic local strategies for CHSH, CH and the W-selection
//! scenario where the signs follow the hidden x_k.

use wbell::inequalities::{lhv_enumerate_ch, lhv_enumerate_chsh, lhv_enumerate_w_selection};

fn main() {
    let chsh = lhv_enumerate_chsh();
    println!("CHSH: {} cases, max |S| = {}", chsh.cases, chsh.max_abs);
    for s in &chsh.per_setting {
        println!(
            "  m = {:+}, n = {:+}: max {} reached by {} strategies",
            s.m, s.n, s.max_abs, s.attaining
        );
    }

    let ch = lhv_enumerate_ch();
    println!("CH: {} cases, range [{}, {}]", ch.cases, ch.min, ch.max);

    let w = lhv_enumerate_w_selection();
    println!(
        "W selection: {} cases, max |S| = {} ({} attaining)",
        w.cases, w.max_abs, w.attaining
    );
}
