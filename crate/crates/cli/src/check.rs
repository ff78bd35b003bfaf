//! `check` subcommand: every cross-route and oracle identity over a sweep.

use anyhow::{bail, Result};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use quanta_stats::continuum::{moments, Moments};
use quanta_stats::occupancy::{
    configurations, count_level_states, enumerate_level_states, gf_mean_occupancy, gf_total_configurations,
    level_pmf, level_pmf_by_enumeration, mean_occupancy, most_probable_states, total_configurations,
};
use quanta_stats::quanta::cross_route_check;

use crate::cli::Format;
use crate::emit::{json_doc, Csv};
use crate::{EXIT_CHECK_FAILED, EXIT_OK};

/// Enumeration-based oracles only run below this many level states.
const ENUMERATION_LIMIT: u64 = 200_000;

#[derive(Debug, Clone, Serialize)]
pub struct CaseResult {
    #[serde(rename = "N")]
    pub n: u64,
    pub s: u64,
    pub cross_route: bool,
    pub moments: bool,
    pub generating_function: bool,
    /// `None` when the state space was too large to enumerate.
    pub enumeration: Option<bool>,
    /// Number of states sharing the maximal configuration count.
    pub most_probable_count: Option<usize>,
}

impl CaseResult {
    fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.cross_route {
            out.push("cross_route");
        }
        if !self.moments {
            out.push("moments");
        }
        if !self.generating_function {
            out.push("generating_function");
        }
        if self.enumeration == Some(false) {
            out.push("enumeration");
        }
        out
    }
}

#[derive(Serialize)]
struct Failure {
    #[serde(rename = "N")]
    n: u64,
    s: u64,
    check: &'static str,
}

#[derive(Serialize)]
struct Tie {
    #[serde(rename = "N")]
    n: u64,
    s: u64,
    states: usize,
}

#[derive(Serialize)]
struct CheckDoc {
    max_n: u64,
    max_s: u64,
    cases: usize,
    passed: bool,
    failures: Vec<Failure>,
    /// Informational: sizes where the most probable state is not unique.
    most_probable_ties: Vec<Tie>,
}

pub fn check_case(n: u64, s: u64) -> quanta_stats::Result<CaseResult> {
    let cross_route = cross_route_check(n, s)?.passed();
    let table = level_pmf(n, s)?;
    let moments_ok = moments(n, s)? == Moments::from_table(&table);

    let total = total_configurations(n, s)?;
    let mut gf_ok = gf_total_configurations(n, s)? == total;
    for k in 0..=s {
        gf_ok &= gf_mean_occupancy(n, s, k)? == mean_occupancy(n, s, k)?;
    }

    let (enumeration, most_probable_count) = if count_level_states(n, s) <= BigInt::from(ENUMERATION_LIMIT) {
        let states = enumerate_level_states(n, s)?;
        let summed: BigInt = states.iter().map(configurations).sum();
        let ok = summed == total
            && BigInt::from(states.len()) == count_level_states(n, s)
            && level_pmf_by_enumeration(n, s)? == table;
        (Some(ok), Some(most_probable_states(n, s)?.len()))
    } else {
        (None, None)
    };

    Ok(CaseResult {
        n,
        s,
        cross_route,
        moments: moments_ok,
        generating_function: gf_ok,
        enumeration,
        most_probable_count,
    })
}

pub fn run(max_n: u64, max_s: u64, format: Format) -> Result<(Vec<u8>, u8)> {
    if max_n == 0 {
        bail!("--N must be at least 1");
    }
    let grid: Vec<(u64, u64)> = (1..=max_n).flat_map(|n| (0..=max_s).map(move |s| (n, s))).collect();
    let results: Vec<CaseResult> = grid
        .par_iter()
        .map(|&(n, s)| check_case(n, s))
        .collect::<quanta_stats::Result<_>>()?;

    let failures: Vec<Failure> = results
        .iter()
        .flat_map(|r| r.failures().into_iter().map(|check| Failure { n: r.n, s: r.s, check }))
        .collect();
    let ties: Vec<Tie> = results
        .iter()
        .filter_map(|r| match r.most_probable_count {
            Some(c) if c > 1 => Some(Tie { n: r.n, s: r.s, states: c }),
            _ => None,
        })
        .collect();
    let passed = failures.is_empty();
    eprintln!(
        "{} cases, {} failures, {} sizes with a non-unique most probable state",
        results.len(),
        failures.len(),
        ties.len()
    );
    for f in &failures {
        eprintln!("FAIL N={} s={} {}", f.n, f.s, f.check);
    }

    let bytes = match format {
        Format::Json => json_doc(
            "check",
            CheckDoc {
                max_n,
                max_s,
                cases: results.len(),
                passed,
                failures,
                most_probable_ties: ties,
            },
        )?,
        Format::Csv => {
            let mut csv = Csv::new([
                "N",
                "s",
                "cross_route",
                "moments",
                "generating_function",
                "enumeration",
                "most_probable_count",
            ])?;
            for r in &results {
                csv.row([
                    r.n.to_string(),
                    r.s.to_string(),
                    r.cross_route.to_string(),
                    r.moments.to_string(),
                    r.generating_function.to_string(),
                    r.enumeration.map_or("skipped".into(), |b| b.to_string()),
                    r.most_probable_count.map_or(String::new(), |c| c.to_string()),
                ])?;
            }
            csv.finish()?
        }
    };
    Ok((bytes, if passed { EXIT_OK } else { EXIT_CHECK_FAILED }))
}
