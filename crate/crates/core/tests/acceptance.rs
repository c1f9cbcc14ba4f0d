//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any fails.

use std::f64::consts::SQRT_2;
use std::process::{Command, ExitCode};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wbell::experiment::{
    estimate_ch, noise_sweep, noise_threshold, simulate_experiment, CountsTable, SweepMode,
};
use wbell::inequalities::{
    bell_operator, canonical_chsh_observables, ch_value, chsh_value, cirelson_ch_bound,
    joint_prob_from_correlations, lhv_enumerate_ch, lhv_enumerate_chsh, lhv_enumerate_w_selection,
    map_chsh_bound_to_ch, tsirelson_max, ChshSpec, CIRELSON_CHSH_BOUND,
};
use wbell::optimize::{probe_quoted_angles, EvaluationModel, PROBE_GRID, PROBE_TOL, QUOTED_TARGET};
use wbell::qmath::{hermitian_eigenvalues, kron, pauli, ComplexVector};
use wbell::scenario::{born_distribution, MeasurementSetup, QuantumState, SpinObservable};
use wbell::selection::{
    ch_lower_bound, counterfactual_ch_probabilities, counterfactual_correlations,
    five_distributions, membership_is_local, SelectionRule,
};

type Check = Result<(), String>;

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn close(label: &str, got: f64, want: f64, tol: f64) -> Check {
    ensure((got - want).abs() <= tol, || {
        format!("{label}: got {got:.17e}, want {want:.17e} (tol {tol:e})")
    })
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn exact_w_facts() -> Check {
    let w = QuantumState::w();
    let zzz = born_distribution(&w, &MeasurementSetup::parse("ZZZ").map_err(err)?).map_err(err)?;
    for o in [[1, -1, -1], [-1, 1, -1], [-1, -1, 1]] {
        close(
            &format!("ZZZ {o:?}"),
            zzz.probability(&o).map_err(err)?,
            1.0 / 3.0,
            1e-12,
        )?;
    }
    for (q, letters) in ["ZXX", "XZX", "XXZ"].into_iter().enumerate() {
        let d =
            born_distribution(&w, &MeasurementSetup::parse(letters).map_err(err)?).map_err(err)?;
        for xs in [[1, -1], [-1, 1]] {
            let mut o = [0i8; 3];
            o[q] = -1;
            let mut it = xs.iter();
            for (r, slot) in o.iter_mut().enumerate() {
                if r != q {
                    *slot = *it.next().unwrap();
                }
            }
            close(
                &format!("{letters} {o:?}"),
                d.probability(&o).map_err(err)?,
                0.0,
                1e-12,
            )?;
        }
    }
    let xxx = born_distribution(&w, &MeasurementSetup::parse("XXX").map_err(err)?).map_err(err)?;
    close(
        "XXX +++",
        xxx.probability(&[1, 1, 1]).map_err(err)?,
        0.375,
        1e-12,
    )?;
    close(
        "XXX ---",
        xxx.probability(&[-1, -1, -1]).map_err(err)?,
        0.375,
        1e-12,
    )
}

fn counterfactual_chsh() -> Check {
    let c = counterfactual_correlations(&QuantumState::w()).map_err(err)?;
    let v = chsh_value(c.zz, c.zx, c.xz, c.xx, ChshSpec::symbolic());
    ensure(v.c1 == 0.0, || format!("x_k coefficient {} is not 0", v.c1))?;
    ensure(v.eval(1) == 3.0 && v.eval(-1) == 3.0, || {
        format!("CHSH values {:?} are not exactly 3", v.values())
    })
}

fn ch_chain() -> Check {
    let probs = counterfactual_ch_probabilities(&QuantumState::w()).map_err(err)?;
    for (got, want) in probs.as_array().into_iter().zip([1.0, 0.0, 0.0, 0.75]) {
        close("CH probability", got, want, 1e-12)?;
    }
    let ch = ch_value(probs.as_array()).map_err(err)?;
    close("ch_value", ch, 0.25, 1e-12)?;
    close("map(2)", map_chsh_bound_to_ch(2.0), 0.0, 1e-12)?;
    close(
        "map(2√2)",
        map_chsh_bound_to_ch(2.0 * SQRT_2),
        (SQRT_2 - 1.0) / 2.0,
        1e-12,
    )?;
    ensure(ch > cirelson_ch_bound(), || {
        format!("{ch} does not exceed {}", cirelson_ch_bound())
    })
}

fn lhv_oracles() -> Check {
    let chsh = lhv_enumerate_chsh();
    ensure(chsh.cases == 64 && chsh.max_abs == 2, || {
        format!("CHSH: {} cases, max {}", chsh.cases, chsh.max_abs)
    })?;
    let ch = lhv_enumerate_ch();
    ensure(ch.min == -1 && ch.max == 0, || {
        format!("CH range [{}, {}]", ch.min, ch.max)
    })?;
    let w = lhv_enumerate_w_selection();
    ensure(w.cases == 24 && w.max_abs == 2, || {
        format!("W selection: {} cases, max {}", w.cases, w.max_abs)
    })
}

fn cirelson_verifier() -> Check {
    let r = tsirelson_max(100_000, 7).map_err(err)?;
    close("refined optimum", r.refined_max, CIRELSON_CHSH_BOUND, 1e-6)?;
    for (label, v) in [
        ("sampled spectral", r.sampled_max_spectral),
        ("sampled expectation", r.sampled_max_expectation),
        ("sampled product", r.sampled_max_product),
    ] {
        ensure(v <= CIRELSON_CHSH_BOUND + 1e-9, || {
            format!("{label} {v} exceeds 2√2")
        })?;
    }
    let [a_upper, a, b_upper, b] = canonical_chsh_observables();
    let op = bell_operator(&a_upper, &a, &b_upper, &b, ChshSpec::numeric(1, 1)).map_err(err)?;
    let spectrum = hermitian_eigenvalues(&op).map_err(err)?;
    let want = [-2.0 * SQRT_2, 0.0, 0.0, 2.0 * SQRT_2];
    for (got, want) in spectrum.into_iter().zip(want) {
        close("canonical spectrum", got, want, 1e-9)?;
    }
    Ok(())
}

fn monte_carlo() -> Check {
    let w = QuantumState::w();
    let est = estimate_ch(&simulate_experiment(&w, 100_000, 2024).map_err(err)?).map_err(err)?;
    ensure((0.24..=0.26).contains(&est.value), || {
        format!("estimate {} outside [0.24, 0.26]", est.value)
    })?;
    ensure(est.ci95[0] > cirelson_ch_bound(), || {
        format!("CI {:?} does not exclude {}", est.ci95, cirelson_ch_bound())
    })?;
    let mut covered = 0;
    for seed in 0..200 {
        let e = estimate_ch(&simulate_experiment(&w, 10_000, seed).map_err(err)?).map_err(err)?;
        covered += usize::from(e.ci_contains(0.25));
    }
    ensure(covered >= 180, || {
        format!("coverage {covered}/200 below 90%")
    })
}

fn noise_robustness() -> Check {
    for row in noise_sweep(0.0, 1.0, 11, SweepMode::Exact).map_err(err)? {
        close(
            &format!("ch_lower({})", row.p),
            row.ch_lower_exact,
            0.25 - 0.75 * row.p,
            1e-12,
        )?;
    }
    close(
        "p(CH=0)",
        noise_threshold(0.0).map_err(err)?,
        1.0 / 3.0,
        1e-9,
    )?;
    close(
        "p(CH=(√2−1)/2)",
        noise_threshold(cirelson_ch_bound()).map_err(err)?,
        (3.0 - 2.0 * SQRT_2) / 3.0,
        1e-9,
    )
}

fn angle_probe() -> Check {
    for model in EvaluationModel::ALL {
        let r = probe_quoted_angles(model, PROBE_GRID, PROBE_TOL, 0).map_err(err)?;
        close(
            &format!("{} canonical", model.name()),
            r.canonical_value,
            3.0,
            1e-12,
        )?;
        ensure(r.target == QUOTED_TARGET, || "target not reported".into())?;
        close(
            "gap at quoted angles",
            r.gap_at_quoted_angles,
            (r.value_at_quoted_angles - QUOTED_TARGET).abs(),
            1e-15,
        )?;
        close(
            "gap at box max",
            r.gap_box_max,
            (r.box_max_value - QUOTED_TARGET).abs(),
            1e-15,
        )?;
        println!(
            "      {}: value at (0.628, 1.154) = {:.6}, box max = {:.6}, target {QUOTED_TARGET}",
            model.name(),
            r.value_at_quoted_angles,
            r.box_max_value
        );
    }
    Ok(())
}

fn random_pure_two_qubit(rng: &mut ChaCha8Rng) -> QuantumState {
    let amps: Vec<_> = (0..4)
        .map(|_| {
            num_complex::Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
        .collect();
    QuantumState::pure(ComplexVector::new(amps).normalized()).expect("normalized")
}

fn cross_module() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let id = pauli::identity();
    for case in 0..100 {
        let state = random_pure_two_qubit(&mut rng);
        let angles: [f64; 2] = [rng.random_range(-3.2..3.2), rng.random_range(-3.2..3.2)];
        let obs = angles.map(SpinObservable::plus_sin_z);
        let (m0, m1) = (obs[0].matrix(), obs[1].matrix());
        let c0 = state.expectation(&kron(&m0, &id)).map_err(err)?;
        let c1 = state.expectation(&kron(&id, &m1)).map_err(err)?;
        let c01 = state.expectation(&kron(&m0, &m1)).map_err(err)?;
        let dist = born_distribution(&state, &MeasurementSetup::new(obs.to_vec())).map_err(err)?;
        for (o, p) in dist.iter() {
            let clamp = |c: f64| c.clamp(-1.0, 1.0);
            let jp = joint_prob_from_correlations(o[0], o[1], clamp(c0), clamp(c1), clamp(c01))
                .map_err(err)?;
            close(&format!("case {case} {o:?}"), jp, p, 1e-10)?;
        }
    }
    for p in [0.0, 0.1, 0.3, 0.7, 1.0] {
        let state = QuantumState::w().white_noise(p).map_err(err)?;
        let tables: Vec<_> = five_distributions(&state)
            .map_err(err)?
            .iter()
            .map(|d| CountsTable::from_probabilities(d, 1_000_000_000_000))
            .collect::<Result<_, _>>()
            .map_err(err)?;
        let est = estimate_ch(&tables).map_err(err)?;
        close(
            &format!("pseudo-counts p={p}"),
            est.value,
            ch_lower_bound(&state).map_err(err)?,
            1e-9,
        )?;
    }
    Ok(())
}

fn reproducibility() -> Check {
    let bin = env!("CARGO_BIN_EXE_wbell");
    let invocations: [&[&str]; 4] = [
        &["exact", "--state", "w"],
        &["simulate", "--shots", "20000", "--seed", "5"],
        &[
            "sweep", "--mode", "sampled", "--shots", "2000", "--seed", "3",
        ],
        &["tsirelson", "--samples", "5000", "--seed", "11"],
    ];
    for args in invocations {
        let run = || Command::new(bin).args(args).output().map_err(err);
        let (a, b) = (run()?, run()?);
        ensure(a.status.success(), || {
            format!("{args:?} exited with {}", a.status)
        })?;
        ensure(a.stdout == b.stdout, || {
            format!("{args:?} output differs between runs")
        })?;
    }
    ensure(membership_is_local(SelectionRule::WMinusMinus), || {
        "W rule not local".into()
    })?;
    ensure(!membership_is_local(SelectionRule::GhzRule), || {
        "GHZ rule reported local".into()
    })
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("exact W-state distributions", exact_w_facts),
        (
            "counterfactual CHSH = 3, sign independent",
            counterfactual_chsh,
        ),
        ("CH chain and bound mapping", ch_chain),
        ("LHV enumeration oracles", lhv_oracles),
        ("Cirel'son verifier", cirelson_verifier),
        ("Monte Carlo estimate and coverage", monte_carlo),
        ("noise robustness and thresholds", noise_robustness),
        ("angle probe of the W functional", angle_probe),
        ("cross-module consistency", cross_module),
        ("reproducibility and membership locality", reproducibility),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(()) => println!("PASS {:>2} {name}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
