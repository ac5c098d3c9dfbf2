//! Registry-driven verification of the Franel congruences over prime ranges.

mod mining;
mod registry;

use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::modring::ModError;
use crate::primes::PrimeRange;
use crate::report::{CheckResult, Report, Skipped};

pub use mining::{
    check_3adic_integrality, cornacchia_x2_3y2, scan_ar, ArScan, IntegralityRow, IntegralityScan,
    QuadraticRepresentation,
};
pub use registry::{
    evaluate, registry, CheckSpec, Evaluation, PrimeContext, Statement, WolstenholmePart, R_SAMPLES,
    X_SAMPLES,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SuiteError {
    #[error("unknown check id `{0}`")]
    UnknownId(String),
    #[error("check `{id}` has {count} parameter instances; name one, e.g. `{example}`")]
    AmbiguousId { id: String, count: usize, example: String },
    #[error("prime {p} is not admissible for `{id}` (needs a prime >= {min})")]
    Inadmissible { id: String, p: u64, min: u64 },
    #[error("no primes in range {0}")]
    NoPrimes(PrimeRange),
    #[error("no checks selected")]
    EmptySelection,
    #[error("worker count must be at least 1")]
    NoWorkers,
    #[error("cannot evaluate `{id}` at p = {p}: {reason}")]
    Skipped { id: String, p: u64, reason: String },
    #[error("a_{r}: residue at p = {p} lifts to {lifted}, other primes give {candidate}")]
    InconsistentAr { r: u32, p: u64, lifted: i128, candidate: i128 },
    #[error("a_{r}: only {usable} primes large enough to pin the value, need 3")]
    TooFewPrimes { r: u32, usable: usize },
    #[error("{0} must be a prime greater than 3")]
    BadPrime(u64),
    #[error(transparent)]
    Mod(#[from] ModError),
}

/// Selects checks by family id (`T14_r`) or full instance label (`T14_r:r=-1/2`).
/// An empty filter selects everything.
pub fn select(ids: &[String]) -> Result<Vec<CheckSpec>, SuiteError> {
    let all = registry();
    if ids.is_empty() {
        return Ok(all);
    }
    for id in ids {
        if !all.iter().any(|s| s.id == id || &s.label() == id) {
            return Err(SuiteError::UnknownId(id.clone()));
        }
    }
    let chosen: Vec<CheckSpec> = all
        .into_iter()
        .filter(|s| ids.iter().any(|id| s.id == id || &s.label() == id))
        .collect();
    if chosen.is_empty() {
        return Err(SuiteError::EmptySelection);
    }
    Ok(chosen)
}

/// Looks up exactly one instance.
pub fn find(id: &str) -> Result<CheckSpec, SuiteError> {
    let all = registry();
    if let Some(s) = all.iter().find(|s| s.label() == id) {
        return Ok(s.clone());
    }
    let family: Vec<&CheckSpec> = all.iter().filter(|s| s.id == id).collect();
    match family.len() {
        0 => Err(SuiteError::UnknownId(id.to_string())),
        1 => Ok(family[0].clone()),
        count => Err(SuiteError::AmbiguousId { id: id.to_string(), count, example: family[0].label() }),
    }
}

fn run_cell(spec: &CheckSpec, ctx: &PrimeContext) -> CheckResult {
    let start = Instant::now();
    let mut row = match evaluate(spec, ctx) {
        Ok(ev) => CheckResult::evaluated(spec.id, spec.class, spec.params.clone(), ev.lhs, ev.rhs, ev.witness),
        Err(e) => CheckResult::errored(
            spec.id,
            spec.class,
            spec.params.clone(),
            ctx.p(),
            spec.modulus_exponent,
            e.to_string(),
        ),
    };
    row.elapsed = start.elapsed();
    row
}

/// Evaluates one check instance at one prime.
pub fn run_check(id: &str, p: u64) -> Result<CheckResult, SuiteError> {
    let spec = find(id)?;
    run_spec(&spec, p)
}

pub fn run_spec(spec: &CheckSpec, p: u64) -> Result<CheckResult, SuiteError> {
    if !spec.admits(p) || !crate::primes::is_prime(p) {
        return Err(SuiteError::Inadmissible { id: spec.label(), p, min: spec.min_prime });
    }
    if let Some(reason) = spec.skip_reason(p) {
        return Err(SuiteError::Skipped { id: spec.label(), p, reason });
    }
    let ctx = PrimeContext::new(p)?;
    Ok(run_cell(spec, &ctx))
}

/// Runs every admissible `(check, prime)` pair on a pool of `workers` threads.
///
/// Rows come back sorted by check id, instance, then prime, so the report
/// does not depend on the worker count.
pub fn run_suite(specs: &[CheckSpec], range: PrimeRange, workers: usize) -> Result<Report, SuiteError> {
    if specs.is_empty() {
        return Err(SuiteError::EmptySelection);
    }
    if workers == 0 {
        return Err(SuiteError::NoWorkers);
    }
    let primes: Vec<u64> = range.primes().into_iter().filter(|&p| p >= 3).collect();
    if primes.is_empty() {
        return Err(SuiteError::NoPrimes(range));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool");
    let per_prime: Vec<Vec<(usize, CheckResult)>> = pool.install(|| {
        primes
            .par_iter()
            .map(|&p| {
                let ctx = PrimeContext::new(p).expect("p is an odd prime below the sieve limit");
                specs
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| s.admits(p) && s.skip_reason(p).is_none())
                    .map(|(i, s)| (i, run_cell(s, &ctx)))
                    .collect()
            })
            .collect()
    });
    let mut skipped = Vec::new();
    for &p in &primes {
        for s in specs.iter().filter(|s| s.admits(p)) {
            if let Some(reason) = s.skip_reason(p) {
                log::info!("skipping {} at p = {p}: {reason}", s.label());
                skipped.push(Skipped { label: s.label(), prime: p, reason });
            }
        }
    }
    let mut rows: Vec<(usize, CheckResult)> = per_prime.into_iter().flatten().collect();
    rows.sort_by(|(ia, a), (ib, b)| {
        a.check_id.cmp(&b.check_id).then(ia.cmp(ib)).then(a.prime.cmp(&b.prime))
    });
    Ok(Report::new(rows.into_iter().map(|(_, r)| r).collect(), skipped))
}
