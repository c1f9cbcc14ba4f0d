//! Grid plus Nelder–Mead maximization of the singlet CHSH value and of the
//! two-angle W functional under both evaluation models.

use std::f64::consts::PI;

use wbell::optimize::{
    maximize, probe_quoted_angles, singlet_chsh, AngleBox, EvaluationModel, PROBE_GRID, PROBE_TOL,
};

fn main() -> wbell::Result<()> {
    let chsh = maximize(singlet_chsh, &AngleBox::square(4, -PI, PI)?, 9, 1e-8, 0)?;
    println!("singlet CHSH max {:.12} at {:?}", chsh.value, chsh.argmax);

    for model in EvaluationModel::ALL {
        let r = probe_quoted_angles(model, PROBE_GRID, PROBE_TOL, 0)?;
        println!(
            "{}: canonical {:.6}, at ({}, {}) {:.6}, box max {:.6} at {:?}, target {} (gap {:.4})",
            model.name(),
            r.canonical_value,
            r.alpha,
            r.beta,
            r.value_at_quoted_angles,
            r.box_max_value,
            r.box_argmax,
            r.target,
            r.gap_box_max
        );
    }
    Ok(())
}
