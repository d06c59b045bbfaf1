//! One runner per subcommand, plus parameter sweeps.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use qgames::games::{
    bomb_tester_zeno_law, ev_breaker_law, forgery_experiment, in_exp_not_class,
    run_bomb_tester_antizeno, run_bomb_tester_zeno, run_ev_breaker, run_newcomb, run_supply_demand,
    supply_demand_law, tally_tester, BasisPolicy, BombState, BreakerKind, Forger, TesterLaw,
    TesterTally, VerifyVariant,
};
use qgames::gate::catalog_deviations;
use qgames::ising::{
    exact_correlation, simulate, ActivationSchedule, IsingChain, MetropolisParams, UpdateMode,
};
use qgames::{Amplitude, RngStream, SingleQubitGate};
use rayon::prelude::*;

use crate::params::{choose, Params, Subcommand, NUMERIC_KEYS};
use crate::table::{Table, Value};
use crate::CliError;

/// Runs one configuration on the base stream `(seed, stream_id)`.
pub fn run(params: &Params, stream_id: u64) -> Result<Table, CliError> {
    let base = || {
        params
            .require_seed()
            .map(|seed| RngStream::new(seed, stream_id))
    };
    match params.subcommand {
        Subcommand::Newcomb => newcomb(params, &base()?),
        Subcommand::EvBreaker => ev_breaker(params, &base()?),
        Subcommand::BombZeno => bomb_zeno(params, &base()?),
        Subcommand::SupplyDemand => supply_demand(params, &base()?),
        Subcommand::BombAntizeno => bomb_antizeno(params),
        Subcommand::Wiesner => wiesner(params, &base()?),
        Subcommand::Ising => ising(params, &mut base()?),
        Subcommand::Identities => identities(params, &mut base()?),
    }
}

/// Runs `params` once per value of `key`, in ascending value order. Row `i`
/// uses base stream `(seed, i)`. Ising sweeps always report summaries.
pub fn sweep(params: &Params, key: &str, values: &[String]) -> Result<Table, CliError> {
    let key = key.replace('-', "_");
    if !NUMERIC_KEYS.contains(&key.as_str()) {
        return Err(CliError::invalid(format!(
            "cannot sweep non-numeric parameter `{key}`"
        )));
    }
    if values.is_empty() {
        return Err(CliError::invalid("sweep needs at least one value"));
    }
    let mut ordered = values
        .iter()
        .map(|v| {
            let x: f64 = v
                .trim()
                .parse()
                .map_err(|_| CliError::invalid(format!("sweep value `{v}` is not a number")))?;
            Ok((x, v.trim().to_string()))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    ordered.sort_by(|a, b| a.0.total_cmp(&b.0));
    let configs = ordered
        .iter()
        .map(|(_, v)| {
            let mut p = params.clone();
            p.apply(&key, v)?;
            if p.subcommand == Subcommand::Ising {
                p.apply("output", "summary")?;
            }
            Ok(p)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let tables = configs
        .par_iter()
        .enumerate()
        .map(|(i, p)| run(p, i as u64))
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut merged = Table::new(&tables[0].header);
    for t in tables {
        merged.rows.extend(t.rows);
    }
    Ok(merged)
}

fn bomb(params: &Params) -> Result<BombState, CliError> {
    choose(
        "bomb",
        params.raw("bomb").unwrap_or_default(),
        &[
            ("working", BombState::Working),
            ("damaged", BombState::Damaged),
        ],
    )
}

fn bomb_name(b: BombState) -> Value {
    Value::text(if b.is_working() { "working" } else { "damaged" })
}

fn newcomb(params: &Params, base: &RngStream) -> Result<Table, CliError> {
    let r = FRAC_1_SQRT_2;
    let tactic_name = params.raw("tactic").unwrap_or_default();
    let tactic: [(f64, f64); 2] = choose(
        "tactic",
        tactic_name,
        &[
            ("zero", [(1.0, 0.0), (0.0, 0.0)]),
            ("one", [(0.0, 0.0), (1.0, 0.0)]),
            ("plus", [(r, 0.0), (r, 0.0)]),
        ],
    )?;
    let tactic = tactic.map(|(re, im)| Amplitude::new(re, im));
    let prob_not: f64 = params.get("prob_not")?;
    let breaker_name = params.raw("breaker").unwrap_or_default();
    let breaker = match choose(
        "breaker",
        breaker_name,
        &[("classical", 0u8), ("qutrojan", 1)],
    )? {
        0 => BreakerKind::classical_switch(prob_not)?,
        _ => BreakerKind::Qutrojan,
    };
    let trials: u64 = params.get("trials")?;
    let report = run_newcomb(tactic, breaker, trials, base)?;
    let empirical = report.empirical();
    let mut t = Table::new(&[
        "tactic",
        "breaker",
        "prob_not",
        "trials",
        "upper",
        "lower",
        "count",
        "frequency",
        "exact",
    ]);
    for (u, l) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        t.push(vec![
            Value::text(tactic_name),
            Value::text(breaker_name),
            Value::Real(prob_not),
            Value::Int(trials),
            Value::Int(u as u64),
            Value::Int(l as u64),
            Value::Int(report.counts[u][l]),
            Value::Real(empirical[u][l]),
            Value::Real(report.exact[u][l]),
        ]);
    }
    Ok(t)
}

fn tester_values(tally: &TesterTally, law: &TesterLaw) -> Vec<Value> {
    let survival = tally.survival();
    vec![
        Value::Int(tally.trials),
        Value::Real(survival.mean),
        Value::Real(law.survival()),
        Value::Real(survival.std_err),
        Value::Real(tally.verdict_one().mean),
        Value::Real(law.verdict[1]),
    ]
}

fn ev_breaker(params: &Params, base: &RngStream) -> Result<Table, CliError> {
    let n: u32 = params.get("n")?;
    let first: u8 = params.get("first_qubit")?;
    let trials: u64 = params.get("trials")?;
    let law = ev_breaker_law(n, first)?;
    let tally = tally_tester(trials, base, |r| run_ev_breaker(n, first, r))?;
    let mut t = Table::new(&[
        "n",
        "first_qubit",
        "trials",
        "survival_mc",
        "survival_exact",
        "std_err",
        "verdict1_mc",
        "verdict1_exact",
    ]);
    let mut row = vec![Value::Int(n.into()), Value::Int(first.into())];
    row.extend(tester_values(&tally, &law));
    t.push(row);
    Ok(t)
}

fn bomb_zeno(params: &Params, base: &RngStream) -> Result<Table, CliError> {
    let n: u32 = params.get("n")?;
    let bomb = bomb(params)?;
    let trials: u64 = params.get("trials")?;
    let law = bomb_tester_zeno_law(n, bomb)?;
    let tally = tally_tester(trials, base, |r| run_bomb_tester_zeno(n, bomb, r))?;
    let mut t = Table::new(&[
        "n",
        "bomb",
        "trials",
        "survival_mc",
        "survival_exact",
        "std_err",
        "verdict1_mc",
        "verdict1_exact",
    ]);
    let mut row = vec![Value::Int(n.into()), bomb_name(bomb)];
    row.extend(tester_values(&tally, &law));
    t.push(row);
    Ok(t)
}

fn supply_demand(params: &Params, base: &RngStream) -> Result<Table, CliError> {
    let n: u32 = params.get("n")?;
    let bomb = bomb(params)?;
    let trials: u64 = params.get("trials")?;
    let law = supply_demand_law(n, bomb)?;
    let zeno = bomb_tester_zeno_law(n, bomb)?.survival();
    let tally = tally_tester(trials, base, |r| run_supply_demand(n, bomb, r))?;
    let survival = tally.survival();
    let mut t = Table::new(&[
        "n",
        "bomb",
        "trials",
        "survival_mc",
        "survival_exact",
        "std_err",
        "zeno_survival_exact",
        "dominates",
    ]);
    t.push(vec![
        Value::Int(n.into()),
        bomb_name(bomb),
        Value::Int(trials),
        Value::Real(survival.mean),
        Value::Real(law.survival()),
        Value::Real(survival.std_err),
        Value::Real(zeno),
        Value::Bool(law.survival() > zeno),
    ]);
    Ok(t)
}

fn bomb_antizeno(params: &Params) -> Result<Table, CliError> {
    let n: u32 = params.get("n")?;
    let alpha: f64 = params.get("alpha")?;
    let bomb = bomb(params)?;
    let law = run_bomb_tester_antizeno(n, alpha, bomb)?;
    let stage = SingleQubitGate::v(alpha, PI / (2.0 * n as f64));
    let mut t = Table::new(&[
        "n",
        "alpha",
        "bomb",
        "verdict0",
        "verdict1",
        "stage_in_exp_not_class",
    ]);
    t.push(vec![
        Value::Int(n.into()),
        Value::Real(alpha),
        bomb_name(bomb),
        Value::Real(law.verdict[0]),
        Value::Real(law.verdict[1]),
        Value::Bool(in_exp_not_class(&stage, 1e-10)),
    ]);
    Ok(t)
}

fn wiesner(params: &Params, base: &RngStream) -> Result<Table, CliError> {
    let k: usize = params.get("k")?;
    let trials: u64 = params.get("trials")?;
    let variant_name = params.raw("variant").unwrap_or_default();
    let variant = choose(
        "variant",
        variant_name,
        &[
            ("swap", VerifyVariant::Swap),
            ("hadamard", VerifyVariant::Hadamard),
        ],
    )?;
    let policy_name = params.raw("policy").unwrap_or_default();
    let policy = choose(
        "policy",
        policy_name,
        &[
            ("haar", BasisPolicy::HaarRandom),
            ("computational_pair", BasisPolicy::ComputationalPair),
        ],
    )?;
    let forger_name = params.raw("forger").unwrap_or_default();
    let forger = choose(
        "forger",
        forger_name,
        &[
            ("uniform_guess", Forger::UniformGuess),
            ("measure_resend", Forger::MeasureResend),
            ("legitimate", Forger::Legitimate),
        ],
    )?;
    let est = forgery_experiment(k, trials, variant, policy, forger, base)?;
    let mut t = Table::new(&[
        "k",
        "variant",
        "policy",
        "forger",
        "trials",
        "pass_rate",
        "std_err",
    ]);
    t.push(vec![
        Value::Int(k as u64),
        Value::text(variant_name),
        Value::text(policy_name),
        Value::text(forger_name),
        Value::Int(trials),
        Value::Real(est.mean),
        Value::Real(est.std_err),
    ]);
    Ok(t)
}

fn ising(params: &Params, rng: &mut RngStream) -> Result<Table, CliError> {
    let cells: usize = params.get("cells")?;
    let beta_j: Option<f64> = params
        .raw("beta_j")
        .map(|_| params.get("beta_j"))
        .transpose()?;
    let metropolis = match beta_j {
        Some(b) => MetropolisParams::from_beta_j(b)?,
        None => MetropolisParams::from_p(params.get("p")?)?,
    };
    let sweeps: u64 = params.get("sweeps")?;
    let burn_in: u64 = params.get("burn_in")?;
    let schedule_name = params.raw("schedule").unwrap_or_default();
    let schedule = choose(
        "schedule",
        schedule_name,
        &[
            ("single_random_cell", ActivationSchedule::SingleRandomCell),
            ("even_odd", ActivationSchedule::EvenOddSublattices),
        ],
    )?;
    let mode_name = params.raw("mode").unwrap_or_default();
    let mode = choose(
        "mode",
        mode_name,
        &[
            ("classical", UpdateMode::Classical),
            ("quantum_cell", UpdateMode::QuantumCell),
        ],
    )?;
    let series = choose(
        "output",
        params.raw("output").unwrap_or_default(),
        &[("series", true), ("summary", false)],
    )?;
    let sim = simulate(
        &IsingChain::aligned(cells)?,
        &metropolis,
        schedule,
        sweeps,
        burn_in,
        mode,
        rng,
    )?;
    if series {
        let mut t = Table::new(&["sweep", "magnetization", "energy", "nn_correlation"]);
        for o in &sim.series {
            t.push(vec![
                Value::Int(o.sweep),
                Value::Real(o.magnetization),
                Value::Real(o.energy),
                Value::Real(o.nn_correlation),
            ]);
        }
        return Ok(t);
    }
    let exact = match metropolis.beta_j() {
        Some(b) => Value::Real(exact_correlation(cells, b, 1)?),
        None => Value::Missing,
    };
    let mut t = Table::new(&[
        "cells",
        "beta_j",
        "p",
        "schedule",
        "mode",
        "sweeps",
        "burn_in",
        "magnetization",
        "magnetization_err",
        "energy",
        "energy_err",
        "nn_correlation",
        "nn_correlation_err",
        "nn_correlation_exact",
    ]);
    t.push(vec![
        Value::Int(cells as u64),
        metropolis.beta_j().map_or(Value::Missing, Value::Real),
        Value::Real(metropolis.p()),
        Value::text(schedule_name),
        Value::text(mode_name),
        Value::Int(sweeps),
        Value::Int(burn_in),
        Value::Real(sim.magnetization.mean),
        Value::Real(sim.magnetization.std_err),
        Value::Real(sim.energy.mean),
        Value::Real(sim.energy.std_err),
        Value::Real(sim.nn_correlation.mean),
        Value::Real(sim.nn_correlation.std_err),
        exact,
    ]);
    Ok(t)
}

fn identities(params: &Params, rng: &mut RngStream) -> Result<Table, CliError> {
    let tol: f64 = params.get("tol")?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(CliError::invalid("`tol` must be positive"));
    }
    let draws: usize = params.get("draws")?;
    let mut t = Table::new(&["identity", "max_deviation", "tol", "pass"]);
    for (name, dev) in catalog_deviations(draws, rng) {
        t.push(vec![
            Value::text(name),
            Value::Real(dev),
            Value::Real(tol),
            Value::Bool(dev <= tol),
        ]);
    }
    Ok(t)
}
