//! CHSH and CH functionals, the CHSH→CH bound map, local-hidden-variable
//! enumeration oracles and the spectral Tsirelson verifier.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::optimize::{nelder_mead, AngleBox};
use crate::qmath::{expectation_pure, kron, spectral_norm, ComplexMatrix, ComplexVector};
use crate::scenario::SpinObservable;
use crate::selection::{classify_trio, PairAssignment, SelectionRule, SignLinear};

pub const LHV_CHSH_BOUND: f64 = 2.0;
pub const CIRELSON_CHSH_BOUND: f64 = 2.0 * SQRT_2;

/// `(√2 − 1)/2`, the CHSH quantum bound mapped into CH form.
pub fn cirelson_ch_bound() -> f64 {
    map_chsh_bound_to_ch(CIRELSON_CHSH_BOUND)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ChshSign {
    Plus,
    Minus,
    /// The unknown outcome `x_k` of qubit `k`.
    Xk,
}

impl ChshSign {
    pub fn from_i8(s: i8) -> Self {
        if s >= 0 {
            Self::Plus
        } else {
            Self::Minus
        }
    }

    pub fn as_sign_linear(self) -> SignLinear {
        match self {
            Self::Plus => SignLinear::constant(1.0),
            Self::Minus => SignLinear::constant(-1.0),
            Self::Xk => SignLinear::XK,
        }
    }

    fn numeric(self) -> Option<f64> {
        match self {
            Self::Plus => Some(1.0),
            Self::Minus => Some(-1.0),
            Self::Xk => None,
        }
    }
}

/// The coefficients `m`, `n` of `C(A,B) − m·C(A,b) − n·C(a,B) − m·n·C(a,b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ChshSpec {
    pub m: ChshSign,
    pub n: ChshSign,
}

impl ChshSpec {
    pub fn numeric(m: i8, n: i8) -> Self {
        Self {
            m: ChshSign::from_i8(m),
            n: ChshSign::from_i8(n),
        }
    }

    /// `m = n = x_k`.
    pub fn symbolic() -> Self {
        Self {
            m: ChshSign::Xk,
            n: ChshSign::Xk,
        }
    }
}

pub fn chsh_value(
    c_ab_upper: SignLinear,
    c_a_b: SignLinear,
    c_a_upper_b: SignLinear,
    c_ab: SignLinear,
    spec: ChshSpec,
) -> SignLinear {
    let m = spec.m.as_sign_linear();
    let n = spec.n.as_sign_linear();
    c_ab_upper - m * c_a_b - n * c_a_upper_b - m * n * c_ab
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InequalityReport {
    pub value: SignLinear,
    pub lhv_bound: f64,
    pub cirelson_bound: f64,
    /// `|value| > lhv_bound` for both signs of `x_k`.
    pub violated_lhv: bool,
    /// `|value| > cirelson_bound` for both signs of `x_k`.
    pub violated_cirelson: bool,
}

pub fn chsh_report(value: SignLinear) -> InequalityReport {
    let smallest = value
        .values()
        .iter()
        .map(|v| v.abs())
        .fold(f64::INFINITY, f64::min);
    InequalityReport {
        value,
        lhv_bound: LHV_CHSH_BOUND,
        cirelson_bound: CIRELSON_CHSH_BOUND,
        violated_lhv: smallest > LHV_CHSH_BOUND,
        violated_cirelson: smallest > CIRELSON_CHSH_BOUND,
    }
}

/// `P1 − P2 − P3 − P4`.
pub fn ch_value(p: [f64; 4]) -> Result<f64> {
    if let Some(&bad) = p.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(Error::InvalidProbability { value: bad });
    }
    Ok(p[0] - p[1] - p[2] - p[3])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChReport {
    pub value: f64,
    pub lhv_min: f64,
    pub lhv_max: f64,
    pub cirelson_bound: f64,
    pub violated_lhv: bool,
    pub below_lhv_range: bool,
    pub violated_cirelson: bool,
}

pub fn ch_report(value: f64) -> ChReport {
    let cirelson = cirelson_ch_bound();
    ChReport {
        value,
        lhv_min: -1.0,
        lhv_max: 0.0,
        cirelson_bound: cirelson,
        violated_lhv: value > 0.0,
        below_lhv_range: value < -1.0,
        violated_cirelson: value > cirelson,
    }
}

/// `l ↦ (l − 2)/4`.
pub fn map_chsh_bound_to_ch(l: f64) -> f64 {
    (l - 2.0) / 4.0
}

/// `¼·[1 + s_i·C_i + s_j·C_j + s_i·s_j·C_ij]`, the joint probability of
/// outcomes `(s_i, s_j)` from means and the correlation.
pub fn joint_prob_from_correlations(
    sign_i: i8,
    sign_j: i8,
    c_i: f64,
    c_j: f64,
    c_ij: f64,
) -> Result<f64> {
    for c in [c_i, c_j, c_ij] {
        if !(-1.0..=1.0).contains(&c) {
            return Err(Error::InvalidCorrelation { value: c });
        }
    }
    for s in [sign_i, sign_j] {
        if s != 1 && s != -1 {
            return Err(Error::InvalidArgument(format!("sign {s} is not ±1")));
        }
    }
    let (si, sj) = (f64::from(sign_i), f64::from(sign_j));
    Ok(0.25 * (1.0 + si * c_i + sj * c_j + si * sj * c_ij))
}

const SIGNS: [i32; 2] = [1, -1];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SettingExtremum {
    pub m: i32,
    pub n: i32,
    pub max_abs: i32,
    pub attaining: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChshEnumeration {
    pub cases: usize,
    pub max_abs: i32,
    pub per_setting: Vec<SettingExtremum>,
}

fn deterministic_strategies() -> impl Iterator<Item = [i32; 4]> {
    (0..16u32).map(|bits| {
        let s = |b: u32| if bits >> b & 1 == 0 { 1 } else { -1 };
        [s(3), s(2), s(1), s(0)]
    })
}

fn chsh_int(a_upper: i32, a: i32, b_upper: i32, b: i32, m: i32, n: i32) -> i32 {
    a_upper * b_upper - m * a_upper * b - n * a * b_upper - m * n * a * b
}

/// All 16 deterministic assignments `(A, a, B, b)` against all four `(m, n)`.
pub fn lhv_enumerate_chsh() -> ChshEnumeration {
    let mut per_setting = Vec::with_capacity(4);
    let mut cases = 0;
    for m in SIGNS {
        for n in SIGNS {
            let values: Vec<i32> = deterministic_strategies()
                .map(|[au, a, bu, b]| chsh_int(au, a, bu, b, m, n).abs())
                .collect();
            cases += values.len();
            let max_abs = *values.iter().max().unwrap();
            let attaining = values.iter().filter(|&&v| v == max_abs).count();
            per_setting.push(SettingExtremum {
                m,
                n,
                max_abs,
                attaining,
            });
        }
    }
    ChshEnumeration {
        cases,
        max_abs: per_setting.iter().map(|s| s.max_abs).max().unwrap(),
        per_setting,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WSelectionEnumeration {
    pub cases: usize,
    pub max_abs: i32,
    pub attaining: usize,
    /// Sorted distinct values attained.
    pub values: Vec<i32>,
}

/// Local-realistic trios with exactly one `z = +1`: three choices of `k`
/// times eight `x` assignments. Each trio is post-selected by the W rule and
/// scored with `z_i z_j − x_k z_i x_j − x_k x_i z_j − x_i x_j`.
pub fn lhv_enumerate_w_selection() -> WSelectionEnumeration {
    let mut values = Vec::with_capacity(24);
    for k in 0..3 {
        let z: [i8; 3] = std::array::from_fn(|q| if q == k { 1 } else { -1 });
        let PairAssignment::Pair { i, j, k } = classify_trio(SelectionRule::WMinusMinus, z) else {
            unreachable!("one +1 is always accepted")
        };
        for xbits in 0..8u32 {
            let x: [i32; 3] = std::array::from_fn(|q| if xbits >> q & 1 == 0 { 1 } else { -1 });
            let (zi, zj) = (i32::from(z[i]), i32::from(z[j]));
            values.push(zi * zj - x[k] * zi * x[j] - x[k] * x[i] * zj - x[i] * x[j]);
        }
    }
    let max_abs = values.iter().map(|v| v.abs()).max().unwrap();
    let attaining = values.iter().filter(|v| v.abs() == max_abs).count();
    let cases = values.len();
    values.sort_unstable();
    values.dedup();
    WSelectionEnumeration {
        cases,
        max_abs,
        attaining,
        values,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChEnumeration {
    pub cases: usize,
    pub min: i32,
    pub max: i32,
    pub attaining_min: usize,
    pub attaining_max: usize,
}

/// CH combination `P_AB(−1,−1) − P_Ab(−1,−m) − P_aB(−n,−1) − P_ab(n,m)` for
/// every deterministic strategy and every `(m, n)`, with the four joint
/// probabilities as 0/1 indicators.
pub fn lhv_enumerate_ch() -> ChEnumeration {
    let ind = |cond: bool| i32::from(cond);
    let mut values = Vec::with_capacity(64);
    for m in SIGNS {
        for n in SIGNS {
            for [au, a, bu, b] in deterministic_strategies() {
                values.push(
                    ind(au == -1 && bu == -1)
                        - ind(au == -1 && b == -m)
                        - ind(a == -n && bu == -1)
                        - ind(a == n && b == m),
                );
            }
        }
    }
    let min = *values.iter().min().unwrap();
    let max = *values.iter().max().unwrap();
    ChEnumeration {
        cases: values.len(),
        min,
        max,
        attaining_min: values.iter().filter(|&&v| v == min).count(),
        attaining_max: values.iter().filter(|&&v| v == max).count(),
    }
}

/// `A⊗B − m·A⊗b − n·a⊗B − m·n·a⊗b`.
pub fn bell_operator(
    a_upper: &SpinObservable,
    a: &SpinObservable,
    b_upper: &SpinObservable,
    b: &SpinObservable,
    spec: ChshSpec,
) -> Result<ComplexMatrix> {
    let (Some(m), Some(n)) = (spec.m.numeric(), spec.n.numeric()) else {
        return Err(Error::SymbolicSpec);
    };
    let (au, al, bu, bl) = (a_upper.matrix(), a.matrix(), b_upper.matrix(), b.matrix());
    let terms = [
        (kron(&au, &bu), 1.0),
        (kron(&au, &bl), -m),
        (kron(&al, &bu), -n),
        (kron(&al, &bl), -m * n),
    ];
    Ok(terms
        .iter()
        .skip(1)
        .fold(terms[0].0.clone(), |acc, (t, c)| &acc + &t.scale_real(*c)))
}

/// The canonical observables reaching `2√2` with `m = n = 1`:
/// `A = Z`, `a = X`, `B = (Z+X)/√2`, `b = (Z−X)/√2`.
pub fn canonical_chsh_observables() -> [SpinObservable; 4] {
    [
        SpinObservable::Z,
        SpinObservable::X,
        SpinObservable::plus_sin_z(PI / 4.0),
        SpinObservable::plus_sin_z(3.0 * PI / 4.0),
    ]
}

fn plane_bell_operator(angles: &[f64]) -> ComplexMatrix {
    let o: Vec<_> = angles
        .iter()
        .map(|&t| SpinObservable::plus_sin_z(t))
        .collect();
    bell_operator(&o[0], &o[1], &o[2], &o[3], ChshSpec::numeric(1, 1)).unwrap()
}

fn gaussian_state(rng: &mut impl Rng, dim: usize) -> ComplexVector {
    let data = (0..dim)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    ComplexVector::new(data).normalized()
}

/// Per-draw generator: ChaCha8 keyed by `seed`, one stream per draw index,
/// so results do not depend on how draws are partitioned across threads.
pub fn draw_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, Copy)]
struct TsirelsonDraw {
    index: u64,
    angles: [f64; 4],
    spectral: f64,
    entangled: f64,
    product: f64,
}

fn tsirelson_draw(seed: u64, index: u64) -> Result<TsirelsonDraw> {
    let mut rng = draw_rng(seed, index);
    let angles: [f64; 4] = std::array::from_fn(|_| rng.random_range(-PI..PI));
    let op = plane_bell_operator(&angles);
    let spectral = spectral_norm(&op)?;
    let psi = gaussian_state(&mut rng, 4);
    let entangled = expectation_pure(&psi, &op)?.abs();
    let product_state = gaussian_state(&mut rng, 2).kron(&gaussian_state(&mut rng, 2));
    let product = expectation_pure(&product_state, &op)?.abs();
    Ok(TsirelsonDraw {
        index,
        angles,
        spectral,
        entangled,
        product,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TsirelsonReport {
    pub samples: u64,
    pub seed: u64,
    pub bound: f64,
    /// Largest spectral norm of the Bell operator over sampled angles.
    pub sampled_max_spectral: f64,
    /// Largest `|⟨ψ|B|ψ⟩|` over sampled angles and random pure states.
    pub sampled_max_expectation: f64,
    /// Largest `|⟨ψ|B|ψ⟩|` over sampled angles and random product states.
    pub sampled_max_product: f64,
    /// Spectral norm after simplex refinement from the best draw.
    pub refined_max: f64,
    pub refined_angles: [f64; 4],
}

pub const TSIRELSON_REFINE_TOL: f64 = 1e-9;

/// Samples `samples` angle quadruples in the x–z plane (with `m = n = 1`;
/// other signs are reached by rotating an angle by π) and locally refines
/// the best spectral norm.
pub fn tsirelson_max(samples: u64, seed: u64) -> Result<TsirelsonReport> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be ≥ 1".into()));
    }
    let draws = (0..samples)
        .into_par_iter()
        .map(|i| tsirelson_draw(seed, i))
        .collect::<Result<Vec<_>>>()?;

    let best = draws
        .iter()
        .max_by(|a, b| {
            a.spectral
                .total_cmp(&b.spectral)
                .then(b.index.cmp(&a.index))
        })
        .copied()
        .unwrap();
    let fold_max = |f: fn(&TsirelsonDraw) -> f64| draws.iter().map(f).fold(0.0, f64::max);

    let bounds = AngleBox::new(vec![(-2.0 * PI, 2.0 * PI); 4])?;
    let refined = nelder_mead(
        |x| spectral_norm(&plane_bell_operator(x)).unwrap_or(f64::NEG_INFINITY),
        &best.angles,
        &bounds,
        TSIRELSON_REFINE_TOL,
    )?;
    let (refined_max, refined_angles) = if refined.value >= best.spectral {
        (
            refined.value,
            [
                refined.point[0],
                refined.point[1],
                refined.point[2],
                refined.point[3],
            ],
        )
    } else {
        (best.spectral, best.angles)
    };

    Ok(TsirelsonReport {
        samples,
        seed,
        bound: CIRELSON_CHSH_BOUND,
        sampled_max_spectral: best.spectral,
        sampled_max_expectation: fold_max(|d| d.entangled),
        sampled_max_product: fold_max(|d| d.product),
        refined_max,
        refined_angles,
    })
}
