//! Seeded experiments over random and exhaustive function families.
//!
//! Sample `i` of a run with seed `s` is drawn from a ChaCha8 stream keyed by
//! `s` with stream id `i`, so any sample can be regenerated on its own and
//! samples can be computed in any order.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::{build_covering, build_majority_bnn, build_symmetric, build_threshold};
use crate::covering::{cover_hypercube, MAX_COVERING_ARITY};
use crate::error::{Error, Result};
use crate::function::{BooleanFunction, SymmetricSpec, ThresholdSpec};
use crate::minimize::{exact_bnn_with, SearchLimits, MAX_EXACT_ARITY};
use crate::ptf::{compile_ptf, verify_ptf};
use crate::representation::{is_nn_representation, NNRepresentation};

pub const MAX_SWEEP_ARITY: usize = 6;

fn rng_for(seed: u64, sample: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(sample);
    rng
}

/// Uniformly random truth table for sample `sample` of seed `seed`.
pub fn random_function(seed: u64, sample: u64, n: usize) -> Result<BooleanFunction> {
    let mut rng = rng_for(seed, sample);
    let bits: Vec<bool> = (0..1usize << n).map(|_| rng.gen()).collect();
    BooleanFunction::from_bools(&bits)
}

/// Random integer threshold function: weights in `[-8, 8]`, threshold in
/// `[-S - 1, S + 1]` where `S` is the sum of absolute weights.
pub fn random_threshold(seed: u64, sample: u64, n: usize) -> Result<ThresholdSpec> {
    let mut rng = rng_for(seed, sample);
    let weights: Vec<i64> = (0..n).map(|_| rng.gen_range(-8..=8)).collect();
    let span: i64 = weights.iter().map(|w| w.abs()).sum::<i64>() + 1;
    let t = rng.gen_range(-span..=span);
    ThresholdSpec::new(weights, t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    RandomBnn,
    CoveringSize,
    CompileSweep,
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random-bnn" => Ok(ExperimentKind::RandomBnn),
            "covering-size" => Ok(ExperimentKind::CoveringSize),
            "compile-sweep" => Ok(ExperimentKind::CompileSweep),
            other => Err(Error::Format(format!("unknown experiment kind `{other}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub arity: usize,
    pub samples: u64,
    pub seed: u64,
    /// Size cutoff for searches.
    pub max_size: Option<usize>,
    pub time_limit: Option<std::time::Duration>,
}

/// Tabular output plus an aggregate summary.
#[derive(Clone, Debug, Serialize)]
pub struct ExperimentOutput {
    pub kind: ExperimentKind,
    pub arity: usize,
    pub seed: u64,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub summary: BTreeMap<String, serde_json::Value>,
}

impl ExperimentOutput {
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    /// Whether every row passed its check (all rows carry an `ok` column).
    pub fn all_ok(&self) -> bool {
        let Some(col) = self.header.iter().position(|h| h == "ok") else {
            return true;
        };
        self.rows.iter().all(|r| r[col] == "true")
    }
}

/// Sample `i` is the truth table with index `i` when the sample count
/// covers every function of the arity; otherwise a random table.
fn sample_function(config: &ExperimentConfig, i: u64) -> Result<BooleanFunction> {
    let n = config.arity;
    let exhaustive = n <= 4 && config.samples >= 1u64 << (1 << n);
    if exhaustive {
        BooleanFunction::from_fn(n, |x| (i >> x) & 1 == 1)
    } else {
        random_function(config.seed, i, n)
    }
}

fn header(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|c| c.to_string()).collect()
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let n = config.arity;
    let deadline = config.time_limit.map(|d| Instant::now() + d);
    let mut summary = BTreeMap::new();
    let (header, rows) = match config.kind {
        ExperimentKind::RandomBnn => {
            if n == 0 || n > MAX_EXACT_ARITY {
                return Err(Error::ArityOutOfRange(n, 1, MAX_EXACT_ARITY));
            }
            let limits = SearchLimits {
                max_size: config.max_size,
                deadline,
            };
            let rows: Vec<Vec<String>> = (0..config.samples)
                .into_par_iter()
                .map(|i| {
                    let f = sample_function(config, i)?;
                    let r = exact_bnn_with(&f, limits)?;
                    let ok = match r.optimum {
                        Some(opt) => {
                            if f.is_constant() {
                                opt == 1
                            } else {
                                opt >= 2
                            }
                        }
                        None => false,
                    };
                    Ok(vec![
                        i.to_string(),
                        f.to_hex(),
                        r.optimum.map_or("unknown".into(), |o| o.to_string()),
                        r.explored.to_string(),
                        ok.to_string(),
                    ])
                })
                .collect::<Result<_>>()?;
            let mut hist: BTreeMap<String, u64> = BTreeMap::new();
            for r in &rows {
                *hist.entry(r[2].clone()).or_default() += 1;
            }
            summary.insert("histogram".into(), serde_json::to_value(hist).unwrap());
            (
                header(&["sample", "table", "optimum", "explored", "ok"]),
                rows,
            )
        }
        ExperimentKind::CoveringSize => {
            if n == 0 || n > MAX_COVERING_ARITY {
                return Err(Error::ArityOutOfRange(n, 1, MAX_COVERING_ARITY));
            }
            let cells = cover_hypercube(n)?.len();
            let rows: Vec<Vec<String>> = (0..config.samples)
                .into_par_iter()
                .map(|i| {
                    let f = sample_function(config, i)?;
                    let rep = build_covering(&f)?;
                    let ok = rep.size() <= 5 * cells && is_nn_representation(&f, &rep);
                    Ok(vec![
                        i.to_string(),
                        f.to_hex(),
                        rep.size().to_string(),
                        cells.to_string(),
                        (5 * cells).to_string(),
                        ok.to_string(),
                    ])
                })
                .collect::<Result<_>>()?;
            let max = rows
                .iter()
                .map(|r| r[2].parse::<usize>().unwrap())
                .max()
                .unwrap_or(0);
            summary.insert("cells".into(), cells.into());
            summary.insert("bound".into(), (5 * cells).into());
            summary.insert("max_size".into(), max.into());
            (
                header(&["sample", "table", "size", "cells", "bound", "ok"]),
                rows,
            )
        }
        ExperimentKind::CompileSweep => {
            if n == 0 || n > MAX_SWEEP_ARITY {
                return Err(Error::ArityOutOfRange(n, 1, MAX_SWEEP_ARITY));
            }
            let cases = sweep_cases(config)?;
            let rows: Vec<Vec<String>> = cases
                .into_par_iter()
                .map(|(name, f, rep)| {
                    let (terms, ok) = match compile_ptf(&f, &rep) {
                        Ok((poly, _)) => (
                            poly.term_count(),
                            poly.term_count() == rep.size() && verify_ptf(&f, &poly),
                        ),
                        Err(_) => (0, false),
                    };
                    vec![
                        name,
                        f.arity().to_string(),
                        f.to_hex(),
                        rep.size().to_string(),
                        terms.to_string(),
                        ok.to_string(),
                    ]
                })
                .collect();
            (
                header(&["construction", "n", "table", "prototypes", "terms", "ok"]),
                rows,
            )
        }
    };
    summary.insert("samples".into(), rows.len().into());
    let mut out = ExperimentOutput {
        kind: config.kind,
        arity: n,
        seed: config.seed,
        header,
        rows,
        summary,
    };
    let all_ok = out.all_ok();
    out.summary.insert("all_ok".into(), all_ok.into());
    Ok(out)
}

/// Every construction for every arity up to `config.arity`: all symmetric
/// functions, `samples` random thresholds, majority, and the covering
/// construction on `samples` random functions.
fn sweep_cases(
    config: &ExperimentConfig,
) -> Result<Vec<(String, BooleanFunction, NNRepresentation)>> {
    let mut cases = Vec::new();
    for n in 1..=config.arity {
        for mask in 0u32..1 << (n + 1) {
            let spec = SymmetricSpec::new(n, (0..=n).filter(|l| (mask >> l) & 1 == 1))?;
            cases.push((
                "symmetric".to_string(),
                spec.function(),
                build_symmetric(&spec),
            ));
        }
        for i in 0..config.samples {
            let t = random_threshold(config.seed, (n as u64) << 32 | i, n)?;
            cases.push(("threshold".to_string(), t.function(), build_threshold(&t)));
        }
        let maj = SymmetricSpec::majority(n)?.function();
        cases.push(("majority-bnn".to_string(), maj, build_majority_bnn(n)?));
        for i in 0..config.samples {
            let f = random_function(config.seed, (n as u64) << 32 | i, n)?;
            let rep = build_covering(&f)?;
            cases.push(("covering".to_string(), f, rep));
        }
    }
    Ok(cases)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(kind: ExperimentKind, arity: usize, samples: u64, seed: u64) -> ExperimentConfig {
        ExperimentConfig {
            kind,
            arity,
            samples,
            seed,
            max_size: None,
            time_limit: None,
        }
    }

    #[test]
    fn random_streams_are_reproducible_and_distinct() {
        let a = random_function(7, 3, 5).unwrap();
        assert_eq!(a, random_function(7, 3, 5).unwrap());
        assert_ne!(a, random_function(7, 4, 5).unwrap());
        assert_ne!(a, random_function(8, 3, 5).unwrap());
        let t = random_threshold(1, 0, 6).unwrap();
        assert!(t.weights().iter().all(|w| (-8..=8).contains(w)));
    }

    #[test]
    fn random_bnn_all_functions_n2() {
        let out = run_experiment(&config(ExperimentKind::RandomBnn, 2, 16, 0)).unwrap();
        assert_eq!(out.rows.len(), 16);
        assert!(out.all_ok());
        // exhaustive: table i is function i
        assert_eq!(out.rows[6][1], "6");
        assert_eq!(out.rows[6][2], "4"); // parity_2
        assert_eq!(out.rows[0][2], "1");
        assert_eq!(out.rows[15][2], "1");
    }

    #[test]
    fn random_bnn_is_deterministic() {
        let c = config(ExperimentKind::RandomBnn, 3, 20, 7);
        let a = run_experiment(&c).unwrap();
        let b = run_experiment(&c).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        assert_eq!(a.to_json(), b.to_json());
        assert!(a.all_ok());
        for r in &a.rows {
            if r[1] == "96" {
                assert_eq!(r[2], "8");
            }
        }
    }

    #[test]
    fn covering_size_all_n3() {
        let out = run_experiment(&config(ExperimentKind::CoveringSize, 3, 256, 0)).unwrap();
        assert!(out.all_ok());
        assert_eq!(out.summary["bound"], 10);
        assert!(out.summary["max_size"].as_u64().unwrap() <= 10);
    }

    #[test]
    fn compile_sweep_small() {
        let out = run_experiment(&config(ExperimentKind::CompileSweep, 3, 3, 1)).unwrap();
        assert!(out.all_ok());
        assert!(out.rows.len() > 14);
    }

    #[test]
    fn caps() {
        assert!(run_experiment(&config(ExperimentKind::RandomBnn, 5, 1, 0)).is_err());
        assert!(run_experiment(&config(ExperimentKind::CompileSweep, 7, 1, 0)).is_err());
        assert!(run_experiment(&config(ExperimentKind::CoveringSize, 13, 1, 0)).is_err());
        assert!("bogus".parse::<ExperimentKind>().is_err());
    }
}
