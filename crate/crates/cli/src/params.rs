//! Experiment parameters shared by the config file, the flags and sweeps.
//!
//! Every source funnels through [`Params::apply`], so a key means the same
//! thing wherever it comes from.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Subcommand {
    Newcomb,
    EvBreaker,
    BombZeno,
    BombAntizeno,
    SupplyDemand,
    Wiesner,
    Ising,
    Identities,
}

impl Subcommand {
    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Newcomb => "newcomb",
            Subcommand::EvBreaker => "ev-breaker",
            Subcommand::BombZeno => "bomb-zeno",
            Subcommand::BombAntizeno => "bomb-antizeno",
            Subcommand::SupplyDemand => "supply-demand",
            Subcommand::Wiesner => "wiesner",
            Subcommand::Ising => "ising",
            Subcommand::Identities => "identities",
        }
    }

    /// Keys this subcommand understands, besides `seed`.
    pub fn keys(self) -> &'static [&'static str] {
        match self {
            Subcommand::Newcomb => &["tactic", "breaker", "prob_not", "trials"],
            Subcommand::EvBreaker => &["n", "first_qubit", "trials"],
            Subcommand::BombZeno | Subcommand::SupplyDemand => &["n", "bomb", "trials"],
            Subcommand::BombAntizeno => &["n", "alpha", "bomb"],
            Subcommand::Wiesner => &["k", "trials", "variant", "policy", "forger"],
            Subcommand::Ising => &[
                "cells", "beta_j", "p", "sweeps", "burn_in", "schedule", "mode", "output",
            ],
            Subcommand::Identities => &["tol", "draws"],
        }
    }

    /// Whether the subcommand draws random numbers and so needs `--seed`.
    pub fn needs_seed(self) -> bool {
        !matches!(self, Subcommand::BombAntizeno)
    }
}

impl fmt::Display for Subcommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Keys whose values are numbers, and so may be swept.
pub const NUMERIC_KEYS: &[&str] = &[
    "n",
    "trials",
    "k",
    "p",
    "beta_j",
    "cells",
    "sweeps",
    "burn_in",
    "alpha",
    "prob_not",
    "first_qubit",
    "tol",
    "draws",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    pub subcommand: Subcommand,
    pub seed: Option<u64>,
    /// Raw values as given; typed accessors parse them on demand.
    values: BTreeMap<&'static str, String>,
}

fn defaults(sub: Subcommand) -> &'static [(&'static str, &'static str)] {
    match sub {
        Subcommand::Newcomb => &[
            ("tactic", "plus"),
            ("breaker", "classical"),
            ("prob_not", "0.5"),
            ("trials", "100000"),
        ],
        Subcommand::EvBreaker => &[("n", "10"), ("first_qubit", "1"), ("trials", "100000")],
        Subcommand::BombZeno | Subcommand::SupplyDemand => {
            &[("n", "10"), ("bomb", "working"), ("trials", "100000")]
        }
        Subcommand::BombAntizeno => &[("n", "8"), ("alpha", "0"), ("bomb", "working")],
        Subcommand::Wiesner => &[
            ("k", "16"),
            ("trials", "100000"),
            ("variant", "swap"),
            ("policy", "haar"),
            ("forger", "uniform_guess"),
        ],
        Subcommand::Ising => &[
            ("cells", "16"),
            ("beta_j", "0.5"),
            ("sweeps", "22000"),
            ("burn_in", "2000"),
            ("schedule", "single_random_cell"),
            ("mode", "classical"),
            ("output", "series"),
        ],
        Subcommand::Identities => &[("tol", "1e-10"), ("draws", "100")],
    }
}

impl Params {
    pub fn new(subcommand: Subcommand) -> Self {
        let values = defaults(subcommand)
            .iter()
            .map(|&(k, v)| (k, v.to_string()))
            .collect();
        Self {
            subcommand,
            seed: None,
            values,
        }
    }

    /// Sets one key from its textual form.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let value = value.trim();
        if key == "seed" {
            self.seed = Some(parse(key, value)?);
            return Ok(());
        }
        let key = *self
            .subcommand
            .keys()
            .iter()
            .find(|&&k| k == key)
            .ok_or_else(|| {
                CliError::invalid(format!("unknown parameter `{key}` for {}", self.subcommand))
            })?;
        if key == "beta_j" {
            self.values.remove("p");
        } else if key == "p" {
            self.values.remove("beta_j");
        }
        self.values.insert(key, value.to_string());
        Ok(())
    }

    /// Reads a flat `key = value` file. Blank lines and `#` comments are skipped.
    pub fn apply_config(&mut self, text: &str) -> Result<(), CliError> {
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::invalid(format!("config line {}: expected `key = value`", no + 1))
            })?;
            self.apply(key.trim(), value)?;
        }
        Ok(())
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<T, CliError> {
        let raw = self
            .raw(key)
            .ok_or_else(|| CliError::invalid(format!("missing parameter `{key}`")))?;
        parse(key, raw)
    }

    pub fn require_seed(&self) -> Result<u64, CliError> {
        self.seed
            .ok_or_else(|| CliError::invalid(format!("--seed is required for {}", self.subcommand)))
    }

    /// `key=value` pairs in key order, for the metadata line.
    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        if let Some(seed) = self.seed {
            parts.push(format!("seed={seed}"));
        }
        parts.extend(self.values.iter().map(|(k, v)| format!("{k}={v}")));
        parts.join(" ")
    }
}

fn parse<T: FromStr>(key: &str, raw: &str) -> Result<T, CliError> {
    raw.parse()
        .map_err(|_| CliError::invalid(format!("invalid value `{raw}` for `{key}`")))
}

/// Picks one of `choices` by name.
pub fn choose<T: Copy>(key: &str, raw: &str, choices: &[(&str, T)]) -> Result<T, CliError> {
    choices
        .iter()
        .find(|(name, _)| *name == raw)
        .map(|&(_, v)| v)
        .ok_or_else(|| {
            let names: Vec<&str> = choices.iter().map(|(n, _)| *n).collect();
            CliError::invalid(format!(
                "`{key}` must be one of {}, got `{raw}`",
                names.join(", ")
            ))
        })
}
