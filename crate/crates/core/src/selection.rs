//! Pair post-selection from qubit trios, correlations that depend on the
//! unknown sign `x_k`, certainty checks, and the measurable three-qubit
//! expressions for the pair probabilities entering the CH inequality.

use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qmath::{tol, ComplexVector};
use crate::scenario::{
    all_outcomes, born_distribution, MeasurementSetup, OutcomeDistribution, QuantumState,
};

/// Minimum fidelity with `|W⟩` accepted by [`counterfactual_correlations`].
pub const W_FIDELITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SelectionRule {
    /// Select the two qubits whose σ_z value is −1 when exactly one is +1.
    WMinusMinus,
    /// As `WMinusMinus`, and additionally select qubits 0 and 1 when all
    /// three σ_z values are +1.
    GhzRule,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PairAssignment {
    /// Selected pair `(i, j)` with `i < j`, and the remaining qubit `k`.
    Pair {
        i: usize,
        j: usize,
        k: usize,
    },
    Invalid,
}

impl PairAssignment {
    pub fn contains(&self, qubit: usize) -> bool {
        matches!(*self, Self::Pair { i, j, .. } if i == qubit || j == qubit)
    }

    pub fn is_valid(&self) -> bool {
        matches!(self, Self::Pair { .. })
    }
}

pub fn classify_trio(rule: SelectionRule, z: [i8; 3]) -> PairAssignment {
    let plus: Vec<usize> = (0..3).filter(|&q| z[q] == 1).collect();
    match (plus.as_slice(), rule) {
        (&[k], _) => {
            let mut others = (0..3).filter(|&q| q != k);
            let i = others.next().unwrap();
            let j = others.next().unwrap();
            PairAssignment::Pair { i, j, k }
        }
        (&[_, _, _], SelectionRule::GhzRule) => PairAssignment::Pair { i: 0, j: 1, k: 2 },
        _ => PairAssignment::Invalid,
    }
}

/// True iff, over all accepted z-patterns, whether qubit `q` belongs to the
/// selected pair is a function of `z_q` alone.
pub fn membership_is_local(rule: SelectionRule) -> bool {
    (0..3).all(|q| {
        // membership seen for z_q = +1 and z_q = −1
        let mut seen: [Option<bool>; 2] = [None, None];
        for z in all_outcomes(3) {
            let z = [z[0], z[1], z[2]];
            let assignment = classify_trio(rule, z);
            if !assignment.is_valid() {
                continue;
            }
            let slot = &mut seen[usize::from(z[q] == -1)];
            let member = assignment.contains(q);
            match *slot {
                Some(prev) if prev != member => return false,
                _ => *slot = Some(member),
            }
        }
        true
    })
}

/// A value `c0 + c1·x_k` in which the sign `x_k ∈ {−1, +1}` is unknown.
///
/// Products use `x_k² = 1`, so the algebra never needs the sign itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignLinear {
    pub c0: f64,
    pub c1: f64,
}

impl SignLinear {
    pub const ZERO: Self = Self { c0: 0.0, c1: 0.0 };
    pub const XK: Self = Self { c0: 0.0, c1: 1.0 };

    pub fn new(c0: f64, c1: f64) -> Self {
        Self { c0, c1 }
    }

    pub fn constant(c0: f64) -> Self {
        Self { c0, c1: 0.0 }
    }

    pub fn eval(&self, xk: i8) -> f64 {
        self.c0 + self.c1 * f64::from(xk)
    }

    /// Values at `x_k = −1` and `x_k = +1`.
    pub fn values(&self) -> [f64; 2] {
        [self.eval(-1), self.eval(1)]
    }

    pub fn is_sign_independent(&self) -> bool {
        self.c1 == 0.0
    }
}

impl Add for SignLinear {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.c0 + rhs.c0, self.c1 + rhs.c1)
    }
}

impl Sub for SignLinear {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.c0 - rhs.c0, self.c1 - rhs.c1)
    }
}

impl Neg for SignLinear {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.c0, -self.c1)
    }
}

impl Mul for SignLinear {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.c0 * rhs.c0 + self.c1 * rhs.c1,
            self.c0 * rhs.c1 + self.c1 * rhs.c0,
        )
    }
}

impl Mul<f64> for SignLinear {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self::new(self.c0 * rhs, self.c1 * rhs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CounterfactualCorrelations {
    pub zz: SignLinear,
    pub zx: SignLinear,
    pub xz: SignLinear,
    pub xx: SignLinear,
}

fn w_amplitudes() -> ComplexVector {
    match QuantumState::w() {
        QuantumState::Pure { amplitudes, .. } => amplitudes,
        QuantumState::Mixed { .. } => unreachable!(),
    }
}

/// `P(x_r = x_s | given) − P(x_r ≠ x_s | given)` for the two qubits other
/// than `q` in the setup with σ_z on `q`, conditioned on `z_q = given_z`.
fn x_agreement(state: &QuantumState, q: usize, given_z: i8) -> Result<f64> {
    let dist = born_distribution(state, &MeasurementSetup::z_at(3, q))?;
    let (r, s) = others(q);
    let same = dist.conditional_probability(|o| o[r] == o[s], |o| o[q] == given_z)?;
    Ok(2.0 * same - 1.0)
}

fn others(q: usize) -> (usize, usize) {
    let mut it = (0..3).filter(|&r| r != q);
    (it.next().unwrap(), it.next().unwrap())
}

/// The four pair correlations of the selected subensemble, each derived from
/// exact three-qubit distributions:
///
/// - `C(Z_i,Z_j)`: mean of `z_i z_j` over the accepted σ_z patterns;
/// - `C(Z_i,X_j)`: `z_i = −1` by selection, and given `z_i = −1` the other
///   two X outcomes agree, so `x_j` equals `x_k` and the correlation is
///   `−(agreement)·x_k`. `C(X_i,Z_j)` follows by exchanging `i` and `j`;
/// - `C(X_i,X_j)`: given `z_k = +1`, same and opposite X outcomes on `i, j`
///   are equally likely.
///
/// Only the exact W state is accepted: the chain needs perfect correlations.
pub fn counterfactual_correlations(state: &QuantumState) -> Result<CounterfactualCorrelations> {
    if state.num_qubits() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: state.num_qubits(),
        });
    }
    let fidelity = state.fidelity_with(&w_amplitudes())?;
    if fidelity < 1.0 - W_FIDELITY_TOLERANCE {
        return Err(Error::NotWState { fidelity });
    }

    let zzz = born_distribution(state, &MeasurementSetup::parse("ZZZ")?)?;
    let accepted =
        |o: &[i8]| classify_trio(SelectionRule::WMinusMinus, [o[0], o[1], o[2]]).is_valid();
    let p_accepted = zzz.probability_of(accepted);
    if p_accepted <= tol::STRUCTURAL {
        return Err(Error::NullCondition {
            probability: p_accepted,
        });
    }
    let zz: f64 = zzz
        .iter()
        .filter_map(
            |(o, p)| match classify_trio(SelectionRule::WMinusMinus, [o[0], o[1], o[2]]) {
                PairAssignment::Pair { i, j, .. } => Some(p * f64::from(o[i] * o[j])),
                PairAssignment::Invalid => None,
            },
        )
        .sum::<f64>()
        / p_accepted;

    let mut agree_given_minus = 0.0;
    let mut agree_given_plus = 0.0;
    for q in 0..3 {
        agree_given_minus += x_agreement(state, q, -1)? / 3.0;
        agree_given_plus += x_agreement(state, q, 1)? / 3.0;
    }

    let zx = SignLinear::new(0.0, -agree_given_minus);
    Ok(CounterfactualCorrelations {
        zz: SignLinear::constant(zz),
        zx,
        xz: zx,
        xx: SignLinear::constant(agree_given_plus),
    })
}

/// `P_{Z_iZ_j}(−1,−1)`, `P_{Z_iX_j}(−1,−x_k)`, `P_{X_iZ_j}(−x_k,−1)` and
/// `P_{X_iX_j}(x_k,x_k)` of the selected pair of the exact W state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CounterfactualChProbabilities {
    pub p_zz: f64,
    pub p_zx: f64,
    pub p_xz: f64,
    pub p_xx: f64,
}

impl CounterfactualChProbabilities {
    pub fn as_array(&self) -> [f64; 4] {
        [self.p_zz, self.p_zx, self.p_xz, self.p_xx]
    }
}

/// Expands the counterfactual correlations into joint probabilities with
/// `¼[1 + s_i C_i + s_j C_j + s_i s_j C_ij]`, assuming each mean is the same
/// in every setup it appears in.
///
/// Outcomes relative to `x_k` are handled through `Y_q = x_k·X_q`, so an
/// event such as `x_j = −x_k` becomes `Y_j = −1`. The moments of `Y` are
/// products with `x_k` and must come out sign independent; the
/// single-qubit means are `C(Z_i) = −1` by selection and `C(Y_j) = E[x_k x_j]`,
/// the X agreement given `z_i = −1`.
pub fn counterfactual_ch_probabilities(
    state: &QuantumState,
) -> Result<CounterfactualChProbabilities> {
    let c = counterfactual_correlations(state)?;
    let zzz = born_distribution(state, &MeasurementSetup::parse("ZZZ")?)?;
    let p_accepted = zzz.probability_of(|o| {
        classify_trio(SelectionRule::WMinusMinus, [o[0], o[1], o[2]]).is_valid()
    });
    let mean_z: f64 = zzz
        .iter()
        .filter_map(
            |(o, p)| match classify_trio(SelectionRule::WMinusMinus, [o[0], o[1], o[2]]) {
                PairAssignment::Pair { i, .. } => Some(p * f64::from(o[i])),
                PairAssignment::Invalid => None,
            },
        )
        .sum::<f64>()
        / p_accepted;
    let mut y_mean = 0.0;
    for q in 0..3 {
        y_mean += x_agreement(state, q, -1)? / 3.0;
    }

    let constant = |v: SignLinear| -> Result<f64> {
        if v.is_sign_independent() {
            Ok(v.c0)
        } else {
            Err(Error::InvalidState(format!("x_k-dependent moment {v:?}")))
        }
    };
    let xk = SignLinear::XK;
    let jp = crate::inequalities::joint_prob_from_correlations;
    Ok(CounterfactualChProbabilities {
        p_zz: jp(-1, -1, mean_z, mean_z, constant(c.zz)?)?,
        p_zx: jp(-1, -1, mean_z, y_mean, constant(xk * c.zx)?)?,
        p_xz: jp(-1, -1, y_mean, mean_z, constant(xk * c.xz)?)?,
        p_xx: jp(1, 1, y_mean, y_mean, constant(xk * xk * c.xx)?)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EprCertaintyReport {
    /// Each `z_q` is fixed by the other two σ_z outcomes.
    pub z_determined_by_others: bool,
    /// `z_q = −1` implies equal X outcomes on the other two qubits.
    pub x_pair_equal_given_z_minus: bool,
    /// `z_q = +1` implies `z = −1` on the other two qubits.
    pub others_minus_given_z_plus: bool,
}

impl EprCertaintyReport {
    pub fn all(&self) -> bool {
        self.z_determined_by_others
            && self.x_pair_equal_given_z_minus
            && self.others_minus_given_z_plus
    }
}

/// `P(event | given) = 1`; vacuously true when `given` is impossible.
fn certain(
    dist: &OutcomeDistribution,
    event: impl Fn(&[i8]) -> bool,
    given: impl Fn(&[i8]) -> bool,
) -> bool {
    match dist.conditional_probability(event, given) {
        Ok(p) => p >= 1.0 - tol::STRUCTURAL,
        Err(_) => true,
    }
}

pub fn epr_certainty_checks(state: &QuantumState) -> Result<EprCertaintyReport> {
    let zzz = born_distribution(state, &MeasurementSetup::parse("ZZZ")?)?;

    let z_determined_by_others = (0..3).all(|q| {
        let (r, s) = others(q);
        [(1i8, 1i8), (1, -1), (-1, 1), (-1, -1)]
            .iter()
            .all(|&(zr, zs)| {
                let given = |o: &[i8]| o[r] == zr && o[s] == zs;
                certain(&zzz, |o| o[q] == 1, given) || certain(&zzz, |o| o[q] == -1, given)
            })
    });

    let mut x_pair_equal_given_z_minus = true;
    for q in 0..3 {
        let dist = born_distribution(state, &MeasurementSetup::z_at(3, q))?;
        let (r, s) = others(q);
        x_pair_equal_given_z_minus &= certain(&dist, |o| o[r] == o[s], |o| o[q] == -1);
    }

    let others_minus_given_z_plus = (0..3).all(|q| {
        let (r, s) = others(q);
        certain(&zzz, |o| o[r] == -1 && o[s] == -1, |o| o[q] == 1)
    });

    Ok(EprCertaintyReport {
        z_determined_by_others,
        x_pair_equal_given_z_minus,
        others_minus_given_z_plus,
    })
}

fn require_setup(dist: &OutcomeDistribution, letters: &str) -> Result<()> {
    let expected = MeasurementSetup::parse(letters)?;
    if dist.setup() != &expected {
        return Err(Error::WrongSetup {
            expected: letters.into(),
            found: dist.setup().to_string(),
        });
    }
    Ok(())
}

/// `P_{Z_iZ_j}(−1,−1)`: every σ_z pattern with at least two −1 values.
pub fn pair_prob_zz(zzz: &OutcomeDistribution) -> Result<f64> {
    require_setup(zzz, "ZZZ")?;
    Ok(zzz.probability_of(|o| o.iter().filter(|&&s| s == -1).count() >= 2))
}

/// The six-term sum bounding both `P_{Z_iX_j}(−1,−x_k)` and
/// `P_{X_iZ_j}(−x_k,−1)` from above: for each setup with σ_z on qubit `q`,
/// the probability of `z_q = −1` with differing X outcomes on the others.
pub fn middle_upper_bound(
    zxx: &OutcomeDistribution,
    xzx: &OutcomeDistribution,
    xxz: &OutcomeDistribution,
) -> Result<f64> {
    require_setup(zxx, "ZXX")?;
    require_setup(xzx, "XZX")?;
    require_setup(xxz, "XXZ")?;
    Ok([zxx, xzx, xxz]
        .iter()
        .enumerate()
        .map(|(q, dist)| {
            let (r, s) = others(q);
            dist.probability_of(|o| o[q] == -1 && o[r] != o[s])
        })
        .sum())
}

/// `P_{X_iX_j}(x_k,x_k)`: all three X outcomes equal.
pub fn pair_prob_xx_same(xxx: &OutcomeDistribution) -> Result<f64> {
    require_setup(xxx, "XXX")?;
    Ok(xxx.probability_of(|o| o.iter().all(|&s| s == o[0])))
}

/// The measurable ingredients of the CH statistic and the resulting
/// certified lower bound on its left-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChTerms {
    pub pair_prob_zz: f64,
    pub middle_upper_bound: f64,
    pub pair_prob_xx_same: f64,
    pub ch_lower: f64,
}

impl ChTerms {
    pub fn new(pair_prob_zz: f64, middle_upper_bound: f64, pair_prob_xx_same: f64) -> Self {
        Self {
            pair_prob_zz,
            middle_upper_bound,
            pair_prob_xx_same,
            ch_lower: pair_prob_zz - middle_upper_bound - pair_prob_xx_same,
        }
    }
}

/// Five distributions in the order `ZZZ, ZXX, XZX, XXZ, XXX`.
pub fn ch_terms_from_distributions(dists: &[OutcomeDistribution; 5]) -> Result<ChTerms> {
    Ok(ChTerms::new(
        pair_prob_zz(&dists[0])?,
        middle_upper_bound(&dists[1], &dists[2], &dists[3])?,
        pair_prob_xx_same(&dists[4])?,
    ))
}

pub fn five_distributions(state: &QuantumState) -> Result<[OutcomeDistribution; 5]> {
    let [a, b, c, d, e] = MeasurementSetup::five_setups();
    Ok([
        born_distribution(state, &a)?,
        born_distribution(state, &b)?,
        born_distribution(state, &c)?,
        born_distribution(state, &d)?,
        born_distribution(state, &e)?,
    ])
}

pub fn ch_terms(state: &QuantumState) -> Result<ChTerms> {
    ch_terms_from_distributions(&five_distributions(state)?)
}

/// `pair_prob_zz − middle_upper_bound − pair_prob_xx_same` on exact
/// distributions.
pub fn ch_lower_bound(state: &QuantumState) -> Result<f64> {
    Ok(ch_terms(state)?.ch_lower)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-12;

    #[test]
    fn classify_w_rule() {
        assert_eq!(
            classify_trio(SelectionRule::WMinusMinus, [1, -1, -1]),
            PairAssignment::Pair { i: 1, j: 2, k: 0 }
        );
        assert_eq!(
            classify_trio(SelectionRule::WMinusMinus, [-1, -1, -1]),
            PairAssignment::Invalid
        );
        assert_eq!(
            classify_trio(SelectionRule::WMinusMinus, [1, 1, 1]),
            PairAssignment::Invalid
        );
    }

    #[test]
    fn classify_ghz_rule() {
        assert_eq!(
            classify_trio(SelectionRule::GhzRule, [1, 1, 1]),
            PairAssignment::Pair { i: 0, j: 1, k: 2 }
        );
        assert_eq!(
            classify_trio(SelectionRule::GhzRule, [-1, 1, -1]),
            PairAssignment::Pair { i: 0, j: 2, k: 1 }
        );
    }

    #[test]
    fn membership_locality() {
        assert!(membership_is_local(SelectionRule::WMinusMinus));
        assert!(!membership_is_local(SelectionRule::GhzRule));
    }

    #[test]
    fn w_rule_membership_is_z_minus() {
        for z in all_outcomes(3) {
            let z = [z[0], z[1], z[2]];
            let a = classify_trio(SelectionRule::WMinusMinus, z);
            if a.is_valid() {
                for q in 0..3 {
                    assert_eq!(a.contains(q), z[q] == -1);
                }
            }
        }
    }

    #[test]
    fn w_accepted_patterns_carry_all_mass() {
        let d = born_distribution(&QuantumState::w(), &MeasurementSetup::parse("ZZZ").unwrap())
            .unwrap();
        let p = d.probability_of(|o| {
            classify_trio(SelectionRule::WMinusMinus, [o[0], o[1], o[2]]).is_valid()
        });
        assert!((p - 1.0).abs() < EPS);
    }

    #[test]
    fn sign_linear_algebra() {
        let xk = SignLinear::XK;
        assert_eq!(xk * xk, SignLinear::constant(1.0));
        let a = SignLinear::new(1.0, 2.0);
        let b = SignLinear::new(-0.5, 3.0);
        for s in [-1i8, 1] {
            assert!(((a * b).eval(s) - a.eval(s) * b.eval(s)).abs() < EPS);
            assert!(((a - b).eval(s) - (a.eval(s) - b.eval(s))).abs() < EPS);
        }
    }

    #[test]
    fn counterfactuals_on_w() {
        let c = counterfactual_correlations(&QuantumState::w()).unwrap();
        assert!((c.zz.c0 - 1.0).abs() < EPS && c.zz.c1 == 0.0);
        assert!(c.zx.c0 == 0.0 && (c.zx.c1 + 1.0).abs() < EPS);
        assert!(c.xz.c0 == 0.0 && (c.xz.c1 + 1.0).abs() < EPS);
        assert!(c.xx.c0.abs() < EPS && c.xx.c1 == 0.0);
    }

    #[test]
    fn counterfactuals_reject_other_states() {
        assert!(matches!(
            counterfactual_correlations(&QuantumState::ghz()),
            Err(Error::NotWState { .. })
        ));
        let noisy = QuantumState::w().white_noise(0.01).unwrap();
        assert!(matches!(
            counterfactual_correlations(&noisy),
            Err(Error::NotWState { .. })
        ));
        let exact_mixed = QuantumState::w().white_noise(0.0).unwrap();
        assert!(counterfactual_correlations(&exact_mixed).is_ok());
    }

    #[test]
    fn counterfactual_ch_chain() {
        let p = counterfactual_ch_probabilities(&QuantumState::w()).unwrap();
        let expected = [1.0, 0.0, 0.0, 0.75];
        for (a, b) in p.as_array().iter().zip(expected) {
            assert!((a - b).abs() < EPS, "{p:?}");
        }
        let t = ch_terms(&QuantumState::w()).unwrap();
        assert!((p.p_zz - t.pair_prob_zz).abs() < EPS);
        assert!((p.p_xx - t.pair_prob_xx_same).abs() < EPS);
        assert!(p.p_zx <= t.middle_upper_bound + EPS && p.p_xz <= t.middle_upper_bound + EPS);
    }

    #[test]
    fn certainty_checks() {
        let w = epr_certainty_checks(&QuantumState::w()).unwrap();
        assert!(w.all());
        let mixed = epr_certainty_checks(&QuantumState::maximally_mixed(3)).unwrap();
        assert!(!mixed.x_pair_equal_given_z_minus);
        assert!(!mixed.z_determined_by_others);
        let wrapped = epr_certainty_checks(&QuantumState::w().white_noise(0.0).unwrap()).unwrap();
        assert_eq!(wrapped, w);
    }

    #[test]
    fn measurable_terms() {
        let w = ch_terms(&QuantumState::w()).unwrap();
        assert!((w.pair_prob_zz - 1.0).abs() < EPS);
        assert!(w.middle_upper_bound.abs() < EPS);
        assert!((w.pair_prob_xx_same - 0.75).abs() < EPS);
        assert!((w.ch_lower - 0.25).abs() < EPS);

        let m = ch_terms(&QuantumState::maximally_mixed(3)).unwrap();
        assert!((m.pair_prob_zz - 0.5).abs() < EPS);
        assert!((m.middle_upper_bound - 0.75).abs() < EPS);
        assert!((m.pair_prob_xx_same - 0.25).abs() < EPS);
        assert!((m.ch_lower + 0.5).abs() < EPS);

        let ppp =
            QuantumState::eigenstate(&MeasurementSetup::parse("ZZZ").unwrap(), &[1, 1, 1]).unwrap();
        let d = born_distribution(&ppp, &MeasurementSetup::parse("ZZZ").unwrap()).unwrap();
        assert_eq!(pair_prob_zz(&d).unwrap(), 0.0);

        let xxx = MeasurementSetup::parse("XXX").unwrap();
        let xplus = QuantumState::eigenstate(&xxx, &[1, 1, 1]).unwrap();
        let d = born_distribution(&xplus, &xxx).unwrap();
        assert!((pair_prob_xx_same(&d).unwrap() - 1.0).abs() < EPS);
    }

    #[test]
    fn noisy_closed_forms() {
        for p in [0.0, 0.3, 1.0] {
            let t = ch_terms(&QuantumState::w().white_noise(p).unwrap()).unwrap();
            assert!((t.pair_prob_zz - (1.0 - p / 2.0)).abs() < EPS);
            assert!((t.middle_upper_bound - 0.75 * p).abs() < EPS);
            assert!((t.pair_prob_xx_same - (0.75 - p / 2.0)).abs() < EPS);
            assert!((t.ch_lower - (0.25 - 0.75 * p)).abs() < EPS);
        }
    }

    #[test]
    fn wrong_setups_rejected() {
        let dists = five_distributions(&QuantumState::w()).unwrap();
        assert!(matches!(
            pair_prob_zz(&dists[4]),
            Err(Error::WrongSetup { .. })
        ));
        assert!(matches!(
            pair_prob_xx_same(&dists[0]),
            Err(Error::WrongSetup { .. })
        ));
        assert!(middle_upper_bound(&dists[2], &dists[1], &dists[3]).is_err());
    }
}
