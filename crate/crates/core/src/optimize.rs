//! Derivative-free maximization: a coarse grid scan followed by bounded
//! Nelder–Mead refinement, plus the objectives it is pointed at.
//!
//! Two objectives are provided. The two-qubit CHSH expectation on the
//! singlet should reach `2√2`. The constrained W functional (`A = B`,
//! `a = b`, observables in the x–z plane) has no unique definition away
//! from the perfectly correlated Z/X point, so it comes in two evaluation
//! models, see [`EvaluationModel`].

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::inequalities::{bell_operator, ChshSpec};
use crate::qmath::{expectation_pure, kron, kron_all, ComplexMatrix, ComplexVector};
use crate::scenario::{QuantumState, SpinObservable};

/// Closed interval per parameter, in radians.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngleBox {
    bounds: Vec<(f64, f64)>,
}

impl AngleBox {
    pub fn new(bounds: Vec<(f64, f64)>) -> Result<Self> {
        if bounds.is_empty() || bounds.iter().any(|&(lo, hi)| !(lo <= hi)) {
            return Err(Error::EmptyBox);
        }
        Ok(Self { bounds })
    }

    pub fn square(dims: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![(lo, hi); dims])
    }

    pub fn dims(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn clamp(&self, x: &mut [f64]) {
        for (v, &(lo, hi)) in x.iter_mut().zip(&self.bounds) {
            *v = v.clamp(lo, hi);
        }
    }

    fn width(&self, d: usize) -> f64 {
        self.bounds[d].1 - self.bounds[d].0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Optimum {
    pub point: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
}

/// Iteration cap per free dimension for [`nelder_mead`].
pub const NELDER_MEAD_ITERATIONS_PER_DIM: usize = 5_000;

/// Bounded Nelder–Mead maximization started from `x0`, stopping when every
/// vertex lies within `tol` (max-norm) of the best one. Dimensions with a
/// zero-width interval stay fixed. Trial points are clamped into the box.
pub fn nelder_mead(
    f: impl Fn(&[f64]) -> f64,
    x0: &[f64],
    bounds: &AngleBox,
    tol: f64,
) -> Result<Optimum> {
    let step: Vec<f64> = (0..bounds.dims()).map(|d| 0.05 * bounds.width(d)).collect();
    nelder_mead_with_step(f, x0, bounds, &step, tol)
}

pub fn nelder_mead_with_step(
    f: impl Fn(&[f64]) -> f64,
    x0: &[f64],
    bounds: &AngleBox,
    step: &[f64],
    tol: f64,
) -> Result<Optimum> {
    if x0.len() != bounds.dims() || step.len() != bounds.dims() {
        return Err(Error::DimensionMismatch {
            expected: bounds.dims(),
            found: x0.len(),
        });
    }
    let free: Vec<usize> = (0..bounds.dims())
        .filter(|&d| bounds.width(d) > 0.0)
        .collect();
    let mut start = x0.to_vec();
    bounds.clamp(&mut start);
    if free.is_empty() {
        let value = f(&start);
        return Ok(Optimum {
            point: start,
            value,
            iterations: 0,
        });
    }

    let n = free.len();
    let embed = |y: &[f64]| -> Vec<f64> {
        let mut x = start.clone();
        for (&d, &v) in free.iter().zip(y) {
            x[d] = v;
        }
        bounds.clamp(&mut x);
        x
    };
    // Minimize the negated objective over the free coordinates.
    let g = |y: &[f64]| -f(&embed(y));
    let project = |y: Vec<f64>| -> Vec<f64> {
        let x = embed(&y);
        free.iter().map(|&d| x[d]).collect()
    };

    let y0: Vec<f64> = free.iter().map(|&d| start[d]).collect();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((y0.clone(), g(&y0)));
    for (slot, &d) in free.iter().enumerate() {
        let mut y = y0.clone();
        let h = step[d].max(tol).min(bounds.width(d));
        // step away from the nearer face so the vertex stays distinct
        y[slot] += if y[slot] + h <= bounds.bounds[d].1 {
            h
        } else {
            -h
        };
        let y = project(y);
        let v = g(&y);
        simplex.push((y, v));
    }

    let cap = NELDER_MEAD_ITERATIONS_PER_DIM * n;
    for iteration in 0..cap {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = &simplex[0].0;
        let diameter = simplex[1..]
            .iter()
            .flat_map(|(y, _)| y.iter().zip(best).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if diameter < tol {
            let point = embed(&simplex[0].0);
            return Ok(Optimum {
                value: f(&point),
                point,
                iterations: iteration,
            });
        }

        let centroid: Vec<f64> = (0..n)
            .map(|i| simplex[..n].iter().map(|(y, _)| y[i]).sum::<f64>() / n as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            project(
                centroid
                    .iter()
                    .zip(&simplex[n].0)
                    .map(|(c, w)| c + t * (c - w))
                    .collect(),
            )
        };

        let reflected = along(1.0);
        let fr = g(&reflected);
        if fr < simplex[0].1 {
            let expanded = along(2.0);
            let fe = g(&expanded);
            simplex[n] = if fe < fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
        } else {
            let (contracted, fc) = if fr < simplex[n].1 {
                let c = along(0.5);
                let v = g(&c);
                (c, v)
            } else {
                let c = along(-0.5);
                let v = g(&c);
                (c, v)
            };
            if fc < simplex[n].1.min(fr) {
                simplex[n] = (contracted, fc);
            } else {
                let best = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    let y = project(
                        best.iter()
                            .zip(&vertex.0)
                            .map(|(b, v)| b + 0.5 * (v - b))
                            .collect(),
                    );
                    let v = g(&y);
                    *vertex = (y, v);
                }
            }
        }
    }
    Err(Error::OptimizerNoConvergence { tol, cap })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Maximum {
    pub argmax: Vec<f64>,
    pub value: f64,
    pub grid_best: Vec<f64>,
    pub grid_best_value: f64,
    pub evaluations: usize,
}

/// Extra simplex starts drawn uniformly from the box, besides the best grid
/// point.
pub const RANDOM_RESTARTS: usize = 2;

fn grid_point(bounds: &AngleBox, grid: usize, mut flat: usize) -> Vec<f64> {
    let mut x = vec![0.0; bounds.dims()];
    for d in (0..bounds.dims()).rev() {
        let (lo, hi) = bounds.bounds[d];
        let idx = flat % grid;
        flat /= grid;
        x[d] = lo + (hi - lo) * idx as f64 / (grid - 1) as f64;
    }
    x
}

/// Grid scan with `grid` points per axis, then Nelder–Mead refinement to
/// parameter tolerance `refine_tol` from the best grid point and from
/// [`RANDOM_RESTARTS`] seeded random points. Never returns less than the
/// best grid value.
pub fn maximize(
    objective: impl Fn(&[f64]) -> f64 + Sync,
    bounds: &AngleBox,
    grid: usize,
    refine_tol: f64,
    seed: u64,
) -> Result<Maximum> {
    if grid < 2 {
        return Err(Error::InvalidArgument("grid must be ≥ 2".into()));
    }
    let total = u32::try_from(bounds.dims())
        .ok()
        .and_then(|d| grid.checked_pow(d))
        .ok_or_else(|| Error::InvalidArgument("grid too large".into()))?;

    let (grid_best_index, grid_best_value) = (0..total)
        .into_par_iter()
        .map(|i| (i, objective(&grid_point(bounds, grid, i))))
        .reduce(
            || (usize::MAX, f64::NEG_INFINITY),
            |a, b| match a.1.total_cmp(&b.1) {
                std::cmp::Ordering::Less => b,
                std::cmp::Ordering::Greater => a,
                std::cmp::Ordering::Equal => {
                    if a.0 <= b.0 {
                        a
                    } else {
                        b
                    }
                }
            },
        );
    let grid_best = grid_point(bounds, grid, grid_best_index);

    let spacing: Vec<f64> = (0..bounds.dims())
        .map(|d| bounds.width(d) / (grid - 1) as f64)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts = vec![grid_best.clone()];
    for _ in 0..RANDOM_RESTARTS {
        starts.push(
            bounds
                .bounds
                .iter()
                .map(|&(lo, hi)| {
                    if hi > lo {
                        rng.random_range(lo..=hi)
                    } else {
                        lo
                    }
                })
                .collect(),
        );
    }

    let mut best = (grid_best.clone(), grid_best_value);
    for start in &starts {
        let opt = nelder_mead_with_step(&objective, start, bounds, &spacing, refine_tol)?;
        if opt.value > best.1 {
            best = (opt.point, opt.value);
        }
    }
    Ok(Maximum {
        argmax: best.0,
        value: best.1,
        grid_best,
        grid_best_value,
        evaluations: total,
    })
}

/// `⟨ψ⁻|B|ψ⁻⟩` for x–z plane observables at `angles = [A, a, B, b]`
/// (plus-sin-z convention) with `m = n = 1`, on the singlet
/// `(|+−⟩ − |−+⟩)/√2`.
pub fn singlet_chsh(angles: &[f64]) -> f64 {
    let o: Vec<_> = angles
        .iter()
        .map(|&t| SpinObservable::plus_sin_z(t))
        .collect();
    let op = bell_operator(&o[0], &o[1], &o[2], &o[3], ChshSpec::numeric(1, 1)).unwrap();
    expectation_pure(&singlet(), &op).unwrap()
}

fn singlet() -> ComplexVector {
    ComplexVector::from_real(&[0.0, FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0])
}

/// How correlations of the selected pair are evaluated for general x–z
/// plane observables with `A = B` and `a = b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvaluationModel {
    /// Three-qubit operator expectations: the diagonal terms use the
    /// projector onto `z_k = +1` of the unselected qubit, the mixed terms use
    /// `A` on one qubit and `a` on the other two (the `x_k` factor realized
    /// as a measurement on qubit `k`).
    SymOperator,
    /// Conditional product: given `z_k = +1` the pair is `|−−⟩` for the
    /// diagonal terms, and the mixed terms factor as `⟨−|A|−⟩` times the
    /// `a⊗a` correlation of the pair state `(|+−⟩ + |−+⟩)/√2`.
    CondProduct,
}

impl EvaluationModel {
    pub const ALL: [Self; 2] = [Self::SymOperator, Self::CondProduct];

    pub fn name(&self) -> &'static str {
        match self {
            Self::SymOperator => "sym-operator",
            Self::CondProduct => "cond-product",
        }
    }
}

/// `α` with `A(α) = Z` under the minus-sin-z convention.
pub const CANONICAL_ALPHA: f64 = -FRAC_PI_2;
/// `β` with `a(β) = X` under the plus-sin-z convention.
pub const CANONICAL_BETA: f64 = 0.0;

/// Angles quoted for the maximal constrained violation.
pub const QUOTED_ALPHA: f64 = 0.628;
pub const QUOTED_BETA: f64 = 1.154;
pub const QUOTED_TARGET: f64 = 3.046;

fn place(n: usize, at: usize, special: &ComplexMatrix, rest: &ComplexMatrix) -> ComplexMatrix {
    let factors: Vec<&ComplexMatrix> = (0..n)
        .map(|q| if q == at { special } else { rest })
        .collect();
    kron_all(factors)
}

/// Per-placement terms of the operator model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymOperatorTerms {
    /// `⟨Π_k(z=+1) ⊗ A ⊗ A⟩` for `k = 0, 1, 2`.
    pub upper_diagonal: [f64; 3],
    /// `⟨A at p, a elsewhere⟩` for `p = 0, 1, 2`.
    pub middle: [f64; 3],
    /// `⟨Π_k(z=+1) ⊗ a ⊗ a⟩` for `k = 0, 1, 2`.
    pub lower_diagonal: [f64; 3],
}

impl SymOperatorTerms {
    pub fn value(&self) -> f64 {
        self.upper_diagonal.iter().sum::<f64>()
            - self.middle.iter().sum::<f64>()
            - self.lower_diagonal.iter().sum::<f64>()
    }
}

pub fn sym_operator_terms(alpha: f64, beta: f64) -> Result<SymOperatorTerms> {
    let w = QuantumState::w();
    let a_upper = SpinObservable::minus_sin_z(alpha).matrix();
    let a_lower = SpinObservable::plus_sin_z(beta).matrix();
    let z_plus = SpinObservable::Z.projector(1);
    let mut terms = SymOperatorTerms {
        upper_diagonal: [0.0; 3],
        middle: [0.0; 3],
        lower_diagonal: [0.0; 3],
    };
    for q in 0..3 {
        terms.upper_diagonal[q] = w.expectation(&place(3, q, &z_plus, &a_upper))?;
        terms.middle[q] = w.expectation(&place(3, q, &a_upper, &a_lower))?;
        terms.lower_diagonal[q] = w.expectation(&place(3, q, &z_plus, &a_lower))?;
    }
    Ok(terms)
}

/// The constrained CHSH combination at `A = B = A(α)` (minus-sin-z) and
/// `a = b = a(β)` (plus-sin-z) under `model`.
pub fn w_functional(model: EvaluationModel, alpha: f64, beta: f64) -> Result<f64> {
    match model {
        EvaluationModel::SymOperator => Ok(sym_operator_terms(alpha, beta)?.value()),
        EvaluationModel::CondProduct => {
            let a_upper = SpinObservable::minus_sin_z(alpha).matrix();
            let a_lower = SpinObservable::plus_sin_z(beta).matrix();
            let minus = ComplexVector::basis(2, 1);
            let pair = ComplexVector::from_real(&[0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0]);
            let big = expectation_pure(&minus, &a_upper)?;
            let small = expectation_pure(&minus, &a_lower)?;
            let pair_corr = expectation_pure(&pair, &kron(&a_lower, &a_lower))?;
            Ok(big * big - 2.0 * big * pair_corr - small * small)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub model: EvaluationModel,
    pub target: f64,
    pub alpha: f64,
    pub beta: f64,
    pub value_at_quoted_angles: f64,
    pub gap_at_quoted_angles: f64,
    pub canonical_value: f64,
    pub box_max_value: f64,
    pub box_argmax: Vec<f64>,
    pub gap_box_max: f64,
}

pub const PROBE_GRID: usize = 200;
pub const PROBE_TOL: f64 = 1e-6;

/// Evaluates `model` at the quoted angles and maximizes it over `[−π, π]²`,
/// reporting both against the quoted 3.046. Draws no pass/fail conclusion.
pub fn probe_quoted_angles(
    model: EvaluationModel,
    grid: usize,
    refine_tol: f64,
    seed: u64,
) -> Result<ProbeReport> {
    let value_at_quoted_angles = w_functional(model, QUOTED_ALPHA, QUOTED_BETA)?;
    let canonical_value = w_functional(model, CANONICAL_ALPHA, CANONICAL_BETA)?;
    let bounds = AngleBox::square(2, -PI, PI)?;
    let max = maximize(
        |x| w_functional(model, x[0], x[1]).unwrap_or(f64::NEG_INFINITY),
        &bounds,
        grid,
        refine_tol,
        seed,
    )?;
    Ok(ProbeReport {
        model,
        target: QUOTED_TARGET,
        alpha: QUOTED_ALPHA,
        beta: QUOTED_BETA,
        value_at_quoted_angles,
        gap_at_quoted_angles: (value_at_quoted_angles - QUOTED_TARGET).abs(),
        canonical_value,
        box_max_value: max.value,
        gap_box_max: (max.value - QUOTED_TARGET).abs(),
        box_argmax: max.argmax,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    // Hand expansions. On |W⟩ the only nonzero x–z Pauli strings are
    // ZZZ (= 1) and the three XXZ placements (= −2/3), so for
    // O_q = x_q σ_x + z_q σ_z:
    //   ⟨O1 O2 O3⟩ = z1 z2 z3 − (2/3)(x1 x2 z3 + x1 z2 x3 + z1 x2 x3).
    // With A = (cos α, −sin α), a = (cos β, sin β) and ⟨−|A|−⟩ = sin α,
    // ⟨−|a|−⟩ = −sin β the two models reduce to the expressions below.
    fn sym_closed(alpha: f64, beta: f64) -> f64 {
        let (sa, ca) = alpha.sin_cos();
        let (sb, cb) = beta.sin_cos();
        sa * sa + 3.0 * sa * sb * sb + 2.0 * ca * (2.0 * beta).sin() - 2.0 * sa * cb * cb - sb * sb
    }

    fn cond_closed(alpha: f64, beta: f64) -> f64 {
        let sa = alpha.sin();
        let sb = beta.sin();
        sa * sa - 2.0 * sa * (2.0 * beta).cos() - sb * sb
    }

    #[test]
    fn both_models_give_three_at_canonical_point() {
        for model in EvaluationModel::ALL {
            let v = w_functional(model, CANONICAL_ALPHA, CANONICAL_BETA).unwrap();
            assert!((v - 3.0).abs() < 1e-12, "{model:?}: {v}");
        }
        let t = sym_operator_terms(CANONICAL_ALPHA, CANONICAL_BETA).unwrap();
        assert!((t.middle.iter().sum::<f64>() + 2.0).abs() < 1e-12);
    }

    #[test]
    fn models_match_closed_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let alpha = rng.random_range(-PI..PI);
            let beta = rng.random_range(-PI..PI);
            let s = w_functional(EvaluationModel::SymOperator, alpha, beta).unwrap();
            let c = w_functional(EvaluationModel::CondProduct, alpha, beta).unwrap();
            assert!((s - sym_closed(alpha, beta)).abs() < 1e-9);
            assert!((c - cond_closed(alpha, beta)).abs() < 1e-9);
        }
    }

    #[test]
    fn pair_correlation_is_cos_two_beta() {
        let pair = ComplexVector::from_real(&[0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0]);
        for beta in [0.0, 0.3, 1.154, -2.0] {
            let a = SpinObservable::plus_sin_z(beta).matrix();
            let v = expectation_pure(&pair, &kron(&a, &a)).unwrap();
            assert!((v - (2.0 * beta).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn middle_placements_are_symmetric() {
        let t = sym_operator_terms(0.4, -1.1).unwrap();
        for arr in [t.upper_diagonal, t.middle, t.lower_diagonal] {
            assert!((arr[0] - arr[1]).abs() < 1e-12 && (arr[1] - arr[2]).abs() < 1e-12);
        }
    }

    #[test]
    fn nelder_mead_on_quadratic() {
        let bounds = AngleBox::square(2, -3.0, 3.0).unwrap();
        let f = |x: &[f64]| -(x[0] - 1.0).powi(2) - 2.0 * (x[1] + 0.5).powi(2);
        let opt = nelder_mead(f, &[0.0, 0.0], &bounds, 1e-8).unwrap();
        assert!((opt.point[0] - 1.0).abs() < 1e-6);
        assert!((opt.point[1] + 0.5).abs() < 1e-6);
    }

    #[test]
    fn nelder_mead_respects_bounds() {
        let bounds = AngleBox::new(vec![(0.0, 1.0)]).unwrap();
        let opt = nelder_mead(|x| x[0], &[0.5], &bounds, 1e-9).unwrap();
        assert!((opt.point[0] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn zero_tolerance_does_not_converge() {
        let bounds = AngleBox::square(1, -1.0, 1.0).unwrap();
        let err = nelder_mead(|x| -x[0] * x[0], &[0.3], &bounds, 0.0).unwrap_err();
        assert!(matches!(err, Error::OptimizerNoConvergence { .. }));
    }

    #[test]
    fn degenerate_box_returns_the_point() {
        let bounds = AngleBox::new(vec![(0.7, 0.7), (-0.2, -0.2)]).unwrap();
        let m = maximize(|x| x[0] + x[1], &bounds, 5, 1e-6, 0).unwrap();
        assert_eq!(m.argmax, vec![0.7, -0.2]);
        assert!((m.value - 0.5).abs() < 1e-15);
    }

    #[test]
    fn empty_box_rejected() {
        assert!(matches!(
            AngleBox::new(vec![(1.0, 0.0)]),
            Err(Error::EmptyBox)
        ));
        assert!(matches!(AngleBox::new(vec![]), Err(Error::EmptyBox)));
        let b = AngleBox::square(1, 0.0, 1.0).unwrap();
        assert!(maximize(|x| x[0], &b, 1, 1e-6, 0).is_err());
    }

    #[test]
    fn singlet_chsh_reaches_tsirelson() {
        let bounds = AngleBox::square(4, -PI, PI).unwrap();
        let m = maximize(singlet_chsh, &bounds, 9, 1e-7, 5).unwrap();
        assert!((m.value - 2.0 * SQRT_2).abs() < 1e-6, "{}", m.value);
        assert!(m.value >= m.grid_best_value);
    }

    #[test]
    fn sym_operator_box_max_at_least_three() {
        let bounds = AngleBox::square(2, -PI, PI).unwrap();
        let m = maximize(
            |x| w_functional(EvaluationModel::SymOperator, x[0], x[1]).unwrap(),
            &bounds,
            41,
            1e-6,
            1,
        )
        .unwrap();
        assert!(m.value >= 3.0 - 1e-9);
    }

    #[test]
    fn probe_reports_gaps() {
        let r = probe_quoted_angles(EvaluationModel::CondProduct, 21, 1e-6, 0).unwrap();
        assert_eq!(r.target, 3.046);
        assert_eq!(
            r.gap_at_quoted_angles,
            (r.value_at_quoted_angles - 3.046).abs()
        );
        assert_eq!(r.gap_box_max, (r.box_max_value - 3.046).abs());
        assert!((r.value_at_quoted_angles - cond_closed(QUOTED_ALPHA, QUOTED_BETA)).abs() < 1e-12);
    }
}
