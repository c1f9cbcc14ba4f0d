//! States, ±1-valued spin observables, measurement setups and exact
//! Born-rule outcome distributions.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qmath::{
    self, expectation_mixed, expectation_pure, hermitian_eigenvalues, kron_all, pauli, tol,
    ComplexMatrix, ComplexVector,
};

/// Sign in front of the σ_z component of an x–z plane observable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PlaneSign {
    /// `cos(θ)·σ_x − sin(θ)·σ_z`
    MinusSinZ,
    /// `cos(θ)·σ_x + sin(θ)·σ_z`
    PlusSinZ,
}

/// A single-qubit observable with eigenvalues ±1 lying in the x–z plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SpinObservable {
    Z,
    X,
    Plane { angle: f64, sign: PlaneSign },
}

impl SpinObservable {
    pub fn minus_sin_z(angle: f64) -> Self {
        Self::Plane {
            angle,
            sign: PlaneSign::MinusSinZ,
        }
    }

    pub fn plus_sin_z(angle: f64) -> Self {
        Self::Plane {
            angle,
            sign: PlaneSign::PlusSinZ,
        }
    }

    /// Coefficients `(x, z)` with `O = x·σ_x + z·σ_z`.
    pub fn components(&self) -> (f64, f64) {
        match *self {
            Self::Z => (0.0, 1.0),
            Self::X => (1.0, 0.0),
            Self::Plane { angle, sign } => {
                let z = match sign {
                    PlaneSign::MinusSinZ => -angle.sin(),
                    PlaneSign::PlusSinZ => angle.sin(),
                };
                (angle.cos(), z)
            }
        }
    }

    pub fn matrix(&self) -> ComplexMatrix {
        match self {
            Self::Z => pauli::z(),
            Self::X => pauli::x(),
            Self::Plane { .. } => {
                let (x, z) = self.components();
                ComplexMatrix::from_real(2, 2, &[z, x, x, -z]).unwrap()
            }
        }
    }

    /// The spectral projector `(I + outcome·O)/2`.
    pub fn projector(&self, outcome: i8) -> ComplexMatrix {
        let o = self.matrix().scale_real(f64::from(outcome));
        (&pauli::identity() + &o).scale_real(0.5)
    }

    /// Normalized eigenvector with eigenvalue `outcome` (real amplitudes).
    pub fn eigenvector(&self, outcome: i8) -> ComplexVector {
        let (x, z) = self.components();
        let half = x.atan2(z) / 2.0;
        if outcome >= 0 {
            ComplexVector::from_real(&[half.cos(), half.sin()])
        } else {
            ComplexVector::from_real(&[-half.sin(), half.cos()])
        }
    }

    pub fn is_z(&self) -> bool {
        matches!(self, Self::Z)
    }

    pub fn is_x(&self) -> bool {
        matches!(self, Self::X)
    }
}

impl fmt::Display for SpinObservable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Z => write!(f, "Z"),
            Self::X => write!(f, "X"),
            Self::Plane { angle, sign } => {
                let s = match sign {
                    PlaneSign::MinusSinZ => '-',
                    PlaneSign::PlusSinZ => '+',
                };
                write!(f, "P{s}({angle})")
            }
        }
    }
}

/// One observable per qubit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasurementSetup(Vec<SpinObservable>);

impl MeasurementSetup {
    pub fn new(observables: Vec<SpinObservable>) -> Self {
        assert!(!observables.is_empty(), "setup needs at least one qubit");
        Self(observables)
    }

    /// Parses a string of `Z`/`X` letters, e.g. `"ZXX"`.
    pub fn parse(letters: &str) -> Result<Self> {
        let obs = letters
            .chars()
            .map(|c| match c.to_ascii_uppercase() {
                'Z' => Ok(SpinObservable::Z),
                'X' => Ok(SpinObservable::X),
                other => Err(Error::InvalidArgument(format!(
                    "unknown observable letter {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        if obs.is_empty() {
            return Err(Error::InvalidArgument("empty setup".into()));
        }
        Ok(Self(obs))
    }

    pub fn num_qubits(&self) -> usize {
        self.0.len()
    }

    pub fn observables(&self) -> &[SpinObservable] {
        &self.0
    }

    /// `ZZZ`, `ZXX`, `XZX`, `XXZ`, `XXX`: the five setups of the
    /// three-qubit experiment, in canonical order.
    pub fn five_setups() -> [Self; 5] {
        ["ZZZ", "ZXX", "XZX", "XXZ", "XXX"].map(|s| Self::parse(s).unwrap())
    }

    /// Setup with `Z` on `z_qubit` and `X` elsewhere.
    pub fn z_at(num_qubits: usize, z_qubit: usize) -> Self {
        Self(
            (0..num_qubits)
                .map(|q| {
                    if q == z_qubit {
                        SpinObservable::Z
                    } else {
                        SpinObservable::X
                    }
                })
                .collect(),
        )
    }
}

impl fmt::Display for MeasurementSetup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.0 {
            write!(f, "{o}")?;
        }
        Ok(())
    }
}

/// Outcome tuple index: qubit 0 is the most significant bit, bit value 0
/// stands for +1 and 1 for −1 (matching the computational basis ordering).
pub fn outcome_from_index(num_qubits: usize, index: usize) -> Vec<i8> {
    (0..num_qubits)
        .map(|q| {
            if (index >> (num_qubits - 1 - q)) & 1 == 0 {
                1
            } else {
                -1
            }
        })
        .collect()
}

pub fn index_of_outcome(outcome: &[i8]) -> Result<usize> {
    outcome.iter().try_fold(0usize, |acc, &o| match o {
        1 => Ok(acc << 1),
        -1 => Ok((acc << 1) | 1),
        other => Err(Error::InvalidArgument(format!("outcome {other} is not ±1"))),
    })
}

/// All outcome tuples in `{+1, −1}^n`, in index order.
pub fn all_outcomes(num_qubits: usize) -> impl Iterator<Item = Vec<i8>> {
    (0..1usize << num_qubits).map(move |i| outcome_from_index(num_qubits, i))
}

#[derive(Debug, Clone, PartialEq)]
pub enum QuantumState {
    Pure {
        num_qubits: usize,
        amplitudes: ComplexVector,
    },
    Mixed {
        num_qubits: usize,
        density: ComplexMatrix,
    },
}

fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::InvalidState(format!("dimension {dim} is not 2^n")));
    }
    Ok(dim.trailing_zeros() as usize)
}

impl QuantumState {
    pub fn pure(amplitudes: ComplexVector) -> Result<Self> {
        let num_qubits = qubits_for_dim(amplitudes.dim())?;
        let norm = amplitudes.norm_sqr();
        if (norm - 1.0).abs() > tol::STRUCTURAL {
            return Err(Error::InvalidState(format!("squared norm {norm} ≠ 1")));
        }
        Ok(Self::Pure {
            num_qubits,
            amplitudes,
        })
    }

    pub fn mixed(density: ComplexMatrix) -> Result<Self> {
        if !density.is_square() {
            return Err(Error::DimensionMismatch {
                expected: density.rows(),
                found: density.cols(),
            });
        }
        let num_qubits = qubits_for_dim(density.rows())?;
        density
            .ensure_hermitian()
            .map_err(|e| Error::InvalidState(e.to_string()))?;
        let tr = density.trace().re;
        if (tr - 1.0).abs() > tol::STRUCTURAL {
            return Err(Error::InvalidState(format!("trace {tr} ≠ 1")));
        }
        let min_eig = hermitian_eigenvalues(&density)?[0];
        if min_eig < -tol::EIGEN {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min_eig}"
            )));
        }
        Ok(Self::Mixed {
            num_qubits,
            density,
        })
    }

    /// `(|+−−⟩ + |−+−⟩ + |−−+⟩)/√3`.
    pub fn w() -> Self {
        let a = 1.0 / 3f64.sqrt();
        // indices of |+−−⟩, |−+−⟩, |−−+⟩ = 0b011, 0b101, 0b110
        let mut amp = [0.0; 8];
        amp[0b011] = a;
        amp[0b101] = a;
        amp[0b110] = a;
        Self::pure(ComplexVector::from_real(&amp)).unwrap()
    }

    /// `(|+++⟩ + |−−−⟩)/√2`.
    pub fn ghz() -> Self {
        let mut amp = [0.0; 8];
        amp[0] = FRAC_1_SQRT_2;
        amp[7] = FRAC_1_SQRT_2;
        Self::pure(ComplexVector::from_real(&amp)).unwrap()
    }

    /// Product of single-qubit pure states, qubit 0 first.
    pub fn product(qubits: &[ComplexVector]) -> Result<Self> {
        let mut iter = qubits.iter();
        let first = iter
            .next()
            .ok_or_else(|| Error::InvalidArgument("empty product".into()))?
            .clone();
        Self::pure(iter.fold(first, |acc, q| acc.kron(q)).normalized())
    }

    /// Product of eigenstates: qubit `q` in the `outcomes[q]` eigenstate of
    /// `setup[q]`.
    pub fn eigenstate(setup: &MeasurementSetup, outcomes: &[i8]) -> Result<Self> {
        if outcomes.len() != setup.num_qubits() {
            return Err(Error::DimensionMismatch {
                expected: setup.num_qubits(),
                found: outcomes.len(),
            });
        }
        let vs: Vec<_> = setup
            .observables()
            .iter()
            .zip(outcomes)
            .map(|(o, &s)| o.eigenvector(s))
            .collect();
        Self::product(&vs)
    }

    pub fn maximally_mixed(num_qubits: usize) -> Self {
        let dim = 1 << num_qubits;
        Self::Mixed {
            num_qubits,
            density: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    pub fn num_qubits(&self) -> usize {
        match self {
            Self::Pure { num_qubits, .. } | Self::Mixed { num_qubits, .. } => *num_qubits,
        }
    }

    pub fn dim(&self) -> usize {
        1 << self.num_qubits()
    }

    pub fn density_matrix(&self) -> ComplexMatrix {
        match self {
            Self::Pure { amplitudes, .. } => amplitudes.outer(),
            Self::Mixed { density, .. } => density.clone(),
        }
    }

    /// `⟨ψ|O|ψ⟩` or `tr(ρO)`.
    pub fn expectation(&self, op: &ComplexMatrix) -> Result<f64> {
        match self {
            Self::Pure { amplitudes, .. } => expectation_pure(amplitudes, op),
            Self::Mixed { density, .. } => expectation_mixed(density, op),
        }
    }

    /// `(1−p)·ρ + p·I/2^n`.
    pub fn white_noise(&self, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!(
                "noise parameter {p} outside [0, 1]"
            )));
        }
        let dim = self.dim();
        let rho = self.density_matrix().scale_real(1.0 - p);
        let noise = ComplexMatrix::identity(dim).scale_real(p / dim as f64);
        Ok(Self::Mixed {
            num_qubits: self.num_qubits(),
            density: &rho + &noise,
        })
    }

    /// `⟨φ|ρ|φ⟩` for a pure reference `φ`.
    pub fn fidelity_with(&self, reference: &ComplexVector) -> Result<f64> {
        match self {
            Self::Pure { amplitudes, .. } => {
                if amplitudes.dim() != reference.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: reference.dim(),
                        found: amplitudes.dim(),
                    });
                }
                Ok(reference.inner(amplitudes).norm_sqr())
            }
            Self::Mixed { density, .. } => expectation_mixed(density, &reference.outer()),
        }
    }

    /// `½·Σ|λ(ρ − σ)|`.
    pub fn trace_distance(&self, other: &Self) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let diff = &self.density_matrix() - &other.density_matrix();
        let eig = hermitian_eigenvalues(&diff)?;
        Ok(0.5 * eig.iter().map(|x| x.abs()).sum::<f64>())
    }
}

/// Joint outcome probabilities for one measurement setup.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    setup: MeasurementSetup,
    probabilities: Vec<f64>,
}

impl OutcomeDistribution {
    /// Wraps probabilities given in outcome-index order.
    pub fn new(setup: MeasurementSetup, probabilities: Vec<f64>) -> Result<Self> {
        let expected = 1usize << setup.num_qubits();
        if probabilities.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: probabilities.len(),
            });
        }
        if let Some(&bad) = probabilities
            .iter()
            .find(|&&p| p < -tol::STRUCTURAL || p.is_nan())
        {
            return Err(Error::InvalidProbability { value: bad });
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > tol::STRUCTURAL {
            return Err(Error::InvalidArgument(format!(
                "probabilities sum to {total}"
            )));
        }
        Ok(Self {
            setup,
            probabilities,
        })
    }

    pub fn setup(&self) -> &MeasurementSetup {
        &self.setup
    }

    pub fn num_qubits(&self) -> usize {
        self.setup.num_qubits()
    }

    /// Probabilities in outcome-index order.
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn probability(&self, outcome: &[i8]) -> Result<f64> {
        if outcome.len() != self.num_qubits() {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits(),
                found: outcome.len(),
            });
        }
        Ok(self.probabilities[index_of_outcome(outcome)?])
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vec<i8>, f64)> + '_ {
        let n = self.num_qubits();
        self.probabilities
            .iter()
            .enumerate()
            .map(move |(i, &p)| (outcome_from_index(n, i), p))
    }

    /// Total probability of outcomes satisfying `event`.
    pub fn probability_of(&self, event: impl Fn(&[i8]) -> bool) -> f64 {
        self.iter().filter(|(o, _)| event(o)).map(|(_, p)| p).sum()
    }

    fn check_qubits(&self, qubits: &[usize]) -> Result<()> {
        match qubits.iter().find(|&&q| q >= self.num_qubits()) {
            Some(&index) => Err(Error::InvalidQubit {
                index,
                num_qubits: self.num_qubits(),
            }),
            None => Ok(()),
        }
    }

    /// `Σ P(o)·Π_{q∈qubits} o_q`; a mean for one qubit, 1 for none.
    pub fn correlation(&self, qubits: &[usize]) -> Result<f64> {
        self.check_qubits(qubits)?;
        Ok(self
            .iter()
            .map(|(o, p)| p * qubits.iter().map(|&q| f64::from(o[q])).product::<f64>())
            .sum())
    }

    /// `P(event ∧ given) / P(given)`.
    pub fn conditional_probability(
        &self,
        event: impl Fn(&[i8]) -> bool,
        given: impl Fn(&[i8]) -> bool,
    ) -> Result<f64> {
        let p_given = self.probability_of(&given);
        if p_given <= tol::STRUCTURAL {
            return Err(Error::NullCondition {
                probability: p_given,
            });
        }
        Ok(self.probability_of(|o| given(o) && event(o)) / p_given)
    }

    /// Marginal distribution over `qubits`, in the order given.
    pub fn marginal(&self, qubits: &[usize]) -> Result<Self> {
        self.check_qubits(qubits)?;
        let setup = MeasurementSetup::new(
            qubits
                .iter()
                .map(|&q| self.setup.observables()[q])
                .collect(),
        );
        let mut probs = vec![0.0; 1 << qubits.len()];
        for (o, p) in self.iter() {
            let sub: Vec<i8> = qubits.iter().map(|&q| o[q]).collect();
            probs[index_of_outcome(&sub)?] += p;
        }
        Ok(Self {
            setup,
            probabilities: probs,
        })
    }
}

/// Exact joint outcome probabilities: `P(o) = ⟨⊗_q (I + o_q·O_q)/2⟩`.
pub fn born_distribution(
    state: &QuantumState,
    setup: &MeasurementSetup,
) -> Result<OutcomeDistribution> {
    if state.num_qubits() != setup.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: state.num_qubits(),
            found: setup.num_qubits(),
        });
    }
    let n = setup.num_qubits();
    let probabilities = all_outcomes(n)
        .map(|o| {
            let projectors: Vec<_> = setup
                .observables()
                .iter()
                .zip(&o)
                .map(|(obs, &s)| obs.projector(s))
                .collect();
            state.expectation(&kron_all(&projectors))
        })
        .collect::<Result<Vec<_>>>()?;
    OutcomeDistribution::new(setup.clone(), probabilities)
}

/// Operator `⊗_q O_q` for a setup.
pub fn setup_operator(setup: &MeasurementSetup) -> ComplexMatrix {
    let mats: Vec<_> = setup
        .observables()
        .iter()
        .map(SpinObservable::matrix)
        .collect();
    qmath::kron_all(&mats)
}

/// Amplitude of a computational basis pattern given as z outcomes.
pub fn amplitude(state: &QuantumState, z_pattern: &[i8]) -> Result<Complex64> {
    match state {
        QuantumState::Pure { amplitudes, .. } => Ok(amplitudes[index_of_outcome(z_pattern)?]),
        QuantumState::Mixed { .. } => Err(Error::InvalidState(
            "mixed states have no amplitudes".into(),
        )),
    }
}
