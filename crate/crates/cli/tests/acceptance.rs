//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Run with `cargo test -p qgames-cli --test acceptance`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use qgames::games::newcomb::lower_marginal;
use qgames::games::{
    forgery_experiment, mint_banknote, newcomb_exact, round_pass_probability,
    run_bomb_tester_antizeno, run_bomb_tester_zeno, supply_demand_survival, tally_tester,
    zeno_survival, BasisPolicy, BombState, BreakerKind, Forger, Polarization, VerifyVariant,
};
use qgames::gate::max_entry_distance;
use qgames::ising::{
    classical_cell_law, exact_correlation, quantum_cell_law, simulate, ActivationSchedule,
    IsingChain, MetropolisParams, UpdateMode,
};
use qgames::{Amplitude, RngStream, SingleQubitGate};
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

type Check = fn() -> Outcome;

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn gate_identities() -> Outcome {
    let (h, not) = (SingleQubitGate::hadamard(), SingleQubitGate::not());
    let z = Amplitude::new(0.0, 0.0);
    let diag =
        SingleQubitGate::new(Amplitude::new(0.0, -1.0), z, z, Amplitude::new(0.0, 1.0)).unwrap();
    let hnoth = max_entry_distance(&(h * not * h), &diag);
    let mut rng = RngStream::new(1, 0);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let alpha = rng.random_range(0.0..2.0 * PI);
        let b1 = rng.random_range(-PI..PI);
        let b2 = rng.random_range(-PI..PI);
        let lhs = SingleQubitGate::v(alpha, b2) * not.pow(3) * SingleQubitGate::v(alpha, b1);
        worst = worst.max(max_entry_distance(
            &lhs,
            &SingleQubitGate::v(alpha, b1 + b2),
        ));
    }
    outcome(
        hnoth <= 1e-10 && worst <= 1e-10,
        format!("HNOTH dev {hnoth:.1e}, V composition worst dev {worst:.1e} over 100 draws"),
    )
}

fn binomial_within(freq: f64, p: f64, trials: u64, k: f64) -> (bool, f64) {
    let sigma = (p * (1.0 - p) / trials as f64).sqrt();
    let z = (freq - p) / sigma;
    (z.abs() <= k, z)
}

fn zeno_survival_mc() -> Outcome {
    let trials = 100_000;
    let tally = tally_tester(trials, &RngStream::new(2, 0), |r| {
        run_bomb_tester_zeno(10, BombState::Working, r)
    })
    .unwrap();
    let expected = (PI / 20.0).cos().powi(20);
    let freq = tally.survival().mean;
    let (ok, z) = binomial_within(freq, expected, trials, 3.0);
    outcome(
        ok,
        format!("survival {freq:.5} vs {expected:.5}, z = {z:+.2}"),
    )
}

fn expansion() -> Outcome {
    let mut worst = 0.0f64;
    for n in (8..=1024u32).step_by(8) {
        let nf = n as f64;
        let series = 1.0 - PI * PI / (4.0 * nf) + PI.powi(4) / (32.0 * nf * nf);
        worst = worst.max(nf.powi(3) * (zeno_survival(n).unwrap() - series).abs());
    }
    outcome(worst <= 30.0, format!("max n^3 * error = {worst:.3}"))
}

fn dominance() -> Outcome {
    let mut margin = f64::INFINITY;
    for n in 1..=128u32 {
        margin = margin.min(supply_demand_survival(n).unwrap() - zeno_survival(n).unwrap());
    }
    outcome(margin > 0.0, format!("smallest margin {margin:.3e}"))
}

fn qutrojan() -> Outcome {
    let c = |re: f64| Amplitude::new(re, 0.0);
    let tactics = [
        [c(1.0), c(0.0)],
        [c(0.0), c(1.0)],
        [c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)],
    ];
    let mut worst = 0.0f64;
    for t in tactics {
        let lower = lower_marginal(&newcomb_exact(t, BreakerKind::Qutrojan).unwrap());
        worst = worst.max((lower[0] - 1.0).abs()).max(lower[1].abs());
    }
    outcome(
        worst <= 1e-12,
        format!("lower qubit distance from delta_0 {worst:.1e}"),
    )
}

fn anti_zeno() -> Outcome {
    let mut worst = 0.0f64;
    for n in 1..=16u32 {
        let damaged = run_bomb_tester_antizeno(n, 0.0, BombState::Damaged).unwrap();
        let working = run_bomb_tester_antizeno(n, 0.0, BombState::Working).unwrap();
        worst = worst
            .max((damaged.verdict[1] - 1.0).abs())
            .max((working.verdict[0] - 1.0).abs());
    }
    outcome(
        worst <= 1e-12,
        format!("n = 1..16, worst deviation from certainty {worst:.1e}"),
    )
}

fn wiesner() -> Outcome {
    let trials = 100_000;
    let base = RngStream::new(3, 0);
    let est = forgery_experiment(
        16,
        trials,
        VerifyVariant::Swap,
        BasisPolicy::HaarRandom,
        Forger::UniformGuess,
        &base,
    )
    .unwrap();
    let expected = 0.75f64.powi(16);
    let (ok, z) = binomial_within(est.mean, expected, trials, 3.0);
    let legit_mc = forgery_experiment(
        16,
        10_000,
        VerifyVariant::Swap,
        BasisPolicy::HaarRandom,
        Forger::Legitimate,
        &base.fork(1),
    )
    .unwrap();
    let mut rng = base.fork(2);
    let mut legit_exact = 1.0f64;
    for _ in 0..200 {
        let note = mint_banknote(16, BasisPolicy::HaarRandom, 0, &mut rng).unwrap();
        for r in &note.rounds {
            let p = round_pass_probability(
                r,
                r.alice_bit,
                VerifyVariant::Swap,
                Polarization::haar(&mut rng),
            );
            legit_exact = legit_exact.min(p.unwrap());
        }
    }
    let legit_ok = legit_mc.mean == 1.0 && (legit_exact - 1.0).abs() < 1e-12;
    outcome(
        ok && legit_ok,
        format!(
            "forger pass {:.5} vs {expected:.5}, z = {z:+.2}; legitimate MC {}, exact min {legit_exact:.12}",
            est.mean, legit_mc.mean
        ),
    )
}

fn ising() -> Outcome {
    let (n, beta_j) = (16, 0.5);
    let params = MetropolisParams::from_beta_j(beta_j).unwrap();
    let sim = simulate(
        &IsingChain::aligned(n).unwrap(),
        &params,
        ActivationSchedule::SingleRandomCell,
        220_000,
        20_000,
        UpdateMode::Classical,
        &mut RngStream::new(4, 0),
    )
    .unwrap();
    let t = beta_j.tanh();
    let expected = (t + t.powi(15)) / (1.0 + t.powi(16));
    let oracle_gap = (expected - exact_correlation(n, beta_j, 1).unwrap()).abs();
    let est = sim.nn_correlation;
    let z = (est.mean - expected) / est.std_err;
    let mut tv = 0.0f64;
    for p in [0.0, 0.25, 0.7, 1.0] {
        let mp = MetropolisParams::from_p(p).unwrap();
        for idx in 0..8u8 {
            let (l, k, r) = (idx & 1, (idx >> 1) & 1, (idx >> 2) & 1);
            let q = quantum_cell_law(l, k, r, &mp).unwrap();
            let c = classical_cell_law(l, k, r, p);
            tv = tv.max(0.5 * ((q[0] - c[0]).abs() + (q[1] - c[1]).abs()));
        }
    }
    outcome(
        z.abs() <= 3.0 && tv < 1e-10 && oracle_gap < 1e-15,
        format!(
            "nn correlation {:.5} +/- {:.5} vs {expected:.5}, z = {z:+.2}; max TV {tv:.1e}",
            est.mean, est.std_err
        ),
    )
}

fn run_cli(args: &[&str], workers: &str, out: &Path) -> Result<Vec<u8>, String> {
    let status = Command::new(env!("CARGO_BIN_EXE_qgames"))
        .args(args)
        .args(["--workers", workers, "--out"])
        .arg(out)
        .status()
        .map_err(|e| e.to_string())?;
    if !status.success() {
        return Err(format!("`{}` exited with {status}", args.join(" ")));
    }
    std::fs::read(out).map_err(|e| e.to_string())
}

fn determinism() -> Outcome {
    let invocations: &[&[&str]] = &[
        &["newcomb", "--seed", "5", "--trials", "20000"],
        &["ev-breaker", "--seed", "5", "--n", "6", "--trials", "20000"],
        &["bomb-zeno", "--seed", "5", "--n", "10", "--trials", "20000"],
        &["bomb-antizeno", "--n", "7", "--alpha", "0.3"],
        &[
            "supply-demand",
            "--seed",
            "5",
            "--n",
            "10",
            "--trials",
            "20000",
        ],
        &["wiesner", "--seed", "5", "--k", "4", "--trials", "5000"],
        &[
            "ising",
            "--seed",
            "5",
            "--sweeps",
            "3000",
            "--burn-in",
            "500",
        ],
        &["identities", "--seed", "5"],
        &[
            "bomb-zeno",
            "--seed",
            "5",
            "--trials",
            "5000",
            "--sweep-param",
            "n",
            "--sweep-values",
            "1,2,4,8",
        ],
    ];
    let dir = tempfile::tempdir().unwrap();
    let mut failures = Vec::new();
    for (i, args) in invocations.iter().enumerate() {
        let path = |tag: &str| dir.path().join(format!("{i}-{tag}.csv"));
        let runs = (
            run_cli(args, "1", &path("a")),
            run_cli(args, "1", &path("b")),
            run_cli(args, "4", &path("c")),
        );
        match runs {
            (Ok(a), Ok(b), Ok(c)) => {
                if a != b {
                    failures.push(format!("{}: rerun differs", args[0]));
                }
                if a != c {
                    failures.push(format!("{}: 1 vs 4 workers differ", args[0]));
                }
            }
            (a, b, c) => {
                for e in [a.err(), b.err(), c.err()].into_iter().flatten() {
                    failures.push(e);
                }
            }
        }
    }
    outcome(
        failures.is_empty(),
        if failures.is_empty() {
            format!(
                "{} invocations byte-identical across reruns and 1/4 workers",
                invocations.len()
            )
        } else {
            failures.join("; ")
        },
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, Check); 9] = [
        ("1 gate identities", Duration::from_secs(1), gate_identities),
        (
            "2 Zeno survival Monte Carlo",
            Duration::from_secs(10),
            zeno_survival_mc,
        ),
        ("3 Zeno expansion error", Duration::from_secs(1), expansion),
        (
            "4 supply-demand dominance",
            Duration::from_secs(1),
            dominance,
        ),
        ("5 qutrojan invisibility", Duration::from_secs(1), qutrojan),
        ("6 anti-Zeno verdicts", Duration::from_secs(1), anti_zeno),
        ("7 Wiesner decay", Duration::from_secs(60), wiesner),
        ("8 Ising fidelity", Duration::from_secs(300), ising),
        ("9 CLI determinism", Duration::from_secs(600), determinism),
    ];
    let mut failed = 0;
    for (name, limit, check) in criteria {
        let start = Instant::now();
        let mut result = check();
        let elapsed = start.elapsed();
        if elapsed > limit {
            result.pass = false;
            result
                .detail
                .push_str(&format!("; over time limit {limit:?}"));
        }
        let tag = if result.pass { "PASS" } else { "FAIL" };
        println!(
            "{tag} [{name}] {} ({:.2}s)",
            result.detail,
            elapsed.as_secs_f64()
        );
        failed += usize::from(!result.pass);
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
