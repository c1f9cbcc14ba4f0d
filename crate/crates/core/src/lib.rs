//! Exact, enumerative and statistical analysis of CHSH and CH violations by
//! pairs of qubits post-selected from a three-qubit W state.
//!
//! The crate is organized bottom-up:
//!
//! - [`qmath`]: dense complex matrices for at most three qubits, Kronecker
//!   products, expectation values and a Jacobi eigensolver for Hermitian
//!   matrices.
//! - [`scenario`]: states (W, GHZ, white-noise mixtures), ±1-valued spin
//!   observables in the x–z plane, measurement setups and exact Born-rule
//!   outcome distributions.
//! - [`selection`]: the post-selection rules, correlations carrying the
//!   unknown sign `x_k` symbolically, the certainty checks and the measurable
//!   three-qubit estimators of the pair probabilities.
//! - [`inequalities`]: CHSH and CH functionals, local-hidden-variable
//!   enumeration with exact integers and the spectral Tsirelson verifier.
//! - [`experiment`]: seeded Monte Carlo coincidence counts, the CH estimator
//!   with normal-approximation confidence intervals and noise sweeps.
//! - [`optimize`]: grid-then-simplex maximization of the two-qubit CHSH
//!   expectation and of the constrained W functional.
//! - [`cli`]: report construction and serialization behind the `wbell`
//!   binary.
//!
//! Basis convention: `|+⟩` (σ_z = +1) is index 0, `|−⟩` is index 1, and
//! qubit 0 is the most significant bit of a basis index. Qubits are indexed
//! from 0 throughout the API; reports print them 1-based.

pub mod cli;
pub mod error;
pub mod experiment;
pub mod inequalities;
pub mod optimize;
pub mod qmath;
pub mod scenario;
pub mod selection;

pub use error::{Error, Result};
