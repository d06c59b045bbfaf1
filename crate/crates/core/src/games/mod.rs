//! Executable models of the game circuits.

pub mod antizeno;
pub mod newcomb;
pub mod tester;
pub mod wiesner;

use rayon::prelude::*;

pub use antizeno::{in_exp_not_class, run_bomb_tester_antizeno};
pub use newcomb::{newcomb_exact, run_newcomb, BreakerKind, NewcombReport};
pub use tester::{
    bomb_tester_zeno_law, ev_breaker_law, run_bomb_tester_zeno, run_ev_breaker, run_supply_demand,
    supply_demand_law, supply_demand_survival, tally_tester, zeno_survival, BombState, TesterLaw,
    TesterOutcome, TesterResult, TesterTally,
};
pub use wiesner::{
    forgery_experiment, mint_banknote, round_pass_probability, verify_banknote, Banknote,
    BasisPolicy, Forger, Polarization, ProjectiveCoord, SubGameRecord, Verification, VerifyVariant,
};

use crate::error::Result;
use crate::rng::RngStream;

/// Runs `trials` independent trials and counts them into `K` buckets.
///
/// Trial `t` draws from `base.fork(t)`, and counts are summed, so the result
/// does not depend on the rayon pool size.
pub fn tally<const K: usize, F>(trials: u64, base: &RngStream, outcome: F) -> Result<[u64; K]>
where
    F: Fn(&mut RngStream) -> Result<usize> + Sync + Send,
{
    (0..trials)
        .into_par_iter()
        .map(|t| outcome(&mut base.fork(t)))
        .try_fold(
            || [0u64; K],
            |mut acc, bucket| {
                acc[bucket?] += 1;
                Ok(acc)
            },
        )
        .try_reduce(
            || [0u64; K],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                Ok(a)
            },
        )
}
