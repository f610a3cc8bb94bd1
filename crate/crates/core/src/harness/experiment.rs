//! Differential runs against the oracle, counter accounting and the
//! success-rate experiment for the randomized reduction.

use rayon::prelude::*;

use crate::config::{mix_seed, HittingSize, Param, ReductionConfig};
use crate::counters::Counters;
use crate::error::Result;
use crate::oracle::product;
use crate::problem::{Family, MonotonicityCase, ProblemKind};
use crate::reduce::folklore::slice_count;
use crate::solver::{build_solver, Chain, Link};

use super::gen::{gen_instance, Distribution, Instance, InstanceSpec};
use super::report::{wilson_interval, CounterCheck, SuccessRate, TrialReport};

/// Chains from `family` all the way down to the naive Boolean solver. The
/// Boolean problem has two: through min-plus, and through min-witness.
pub fn full_cycle_chains(family: Family) -> Vec<Chain> {
    use Link::*;
    let down_from_minmax = [MinMaxFromDom, DomFromEq, EqFromBool];
    let links: Vec<Vec<Link>> = match family {
        Family::Bool => vec![
            vec![BoolFromBmmp, BmmpFromEq, EqFromBool],
            [&[BoolFromMinWit, MinWitFromMinMax][..], &down_from_minmax].concat(),
        ],
        Family::Eq => vec![vec![EqFromBool]],
        Family::Dom => vec![vec![DomFromEq, EqFromBool]],
        Family::MinMax => vec![down_from_minmax.to_vec()],
        Family::MinWit => vec![[&[MinWitFromMinMax][..], &down_from_minmax].concat()],
        Family::Bmmp => vec![vec![BmmpFromEq, EqFromBool]],
    };
    links
        .into_iter()
        .map(|l| Chain::new(l).expect("cycle chains are well formed"))
        .collect()
}

/// Config with the randomized link forced to sample every column.
pub fn forced_hit(cfg: &ReductionConfig) -> ReductionConfig {
    ReductionConfig {
        hitting: HittingSize::Full,
        ..cfg.clone()
    }
}

/// Runs `chain` over the instance's stream and compares every answer with
/// the oracle.
pub fn run_trial(chain: &Chain, inst: &Instance, cfg: &ReductionConfig) -> TrialReport {
    let hash = inst.hash();
    let mut solver = match build_solver(inst.kind, &inst.matrix, chain, cfg) {
        Ok(s) => s,
        Err(e) => return TrialReport::failed(hash, e.to_string()),
    };
    let mut mismatches = Vec::new();
    for (j, q) in inst.queries.iter().enumerate() {
        let got = match solver.query(q) {
            Ok(a) => a,
            Err(e) => return TrialReport::failed(hash, format!("query {}: {e}", j + 1)),
        };
        let want = product(inst.kind, &inst.matrix, q).expect("generated queries are valid");
        mismatches.extend(
            (0..inst.n())
                .filter(|&i| got[i] != want[i])
                .map(|i| (j + 1, i + 1)),
        );
    }
    let mut report = TrialReport::new(hash, mismatches, solver.report().total());
    let failures = report.counters.witness_failures;
    if failures > 0 {
        report.success = false;
        report.error = Some(format!("{failures} witness failures"));
    }
    report
}

/// `trials` independent trials; trial `t` uses instance seed and solver seed
/// derived from `(spec.seed, t)` and `(cfg.seed, t)`.
pub fn differential_check(
    chain: &Chain,
    spec: &InstanceSpec,
    trials: usize,
    cfg: &ReductionConfig,
) -> Result<Vec<TrialReport>> {
    chain.check_solves(spec.kind.family())?;
    (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let inst = gen_instance(&spec.clone().with_seed(mix_seed(spec.seed, t)))?;
            let trial_cfg = ReductionConfig {
                seed: mix_seed(cfg.seed, t),
                ..cfg.clone()
            };
            Ok(run_trial(chain, &inst, &trial_cfg))
        })
        .collect()
}

fn exact(name: &str, expected: u64, observed: u64) -> CounterCheck {
    CounterCheck {
        name: name.into(),
        bound: format!("== {expected}"),
        observed,
        pass: observed == expected,
    }
}

fn at_most(name: &str, limit: u64, observed: u64) -> CounterCheck {
    CounterCheck {
        name: name.into(),
        bound: format!("<= {limit}"),
        observed,
        pass: observed <= limit,
    }
}

/// Structural counts of the chain's top reduction, checked per outer query
/// (and over the whole stream for amortized bounds).
pub fn accounting_check(
    chain: &Chain,
    spec: &InstanceSpec,
    cfg: &ReductionConfig,
) -> Result<Vec<CounterCheck>> {
    let inst = gen_instance(spec)?;
    let n = inst.n();
    let mut solver = build_solver(inst.kind, &inst.matrix, chain, cfg)?;
    let Some(link) = chain.head() else {
        return Ok(Vec::new());
    };
    let t = cfg.t_for(n) as u64;
    let per_t = (n.div_ceil(cfg.t_for(n))) as u64;
    let n64 = n as u64;
    let delta = cfg.delta_for(n) as u64;
    let bound_updates = cfg.bound_c as u64 * n64 * n64 / delta;

    let mut checks = Vec::new();
    let mut total = Counters::default();
    for (j, q) in inst.queries.iter().enumerate() {
        let before = *solver.counters();
        solver.query(q)?;
        let d = *solver.counters() - before;
        total.add(&d);
        let tag = |what: &str| format!("{} query {} {what}", link.name(), j + 1);
        match link {
            Link::EqFromBool => {
                checks.push(exact(&tag("inner queries"), t, d.inner_queries));
                checks.push(at_most(&tag("rare scan"), n64 * per_t, d.scan_length));
            }
            Link::MinMaxFromDom => {
                checks.push(exact(&tag("inner queries"), 2 * t, d.inner_queries));
                checks.push(at_most(&tag("bucket scan"), 2 * n64 * per_t, d.scan_length));
            }
            Link::DomFromEq => {
                checks.push(exact(
                    &tag("inner queries"),
                    slice_count(n) as u64,
                    d.inner_queries,
                ));
            }
            Link::BmmpFromEq => {
                let r = cfg.hitting_for(n, delta as usize) as u64;
                let copies = cfg.repeats.max(1) as u64;
                if copies == 1 {
                    checks.push(exact(
                        &tag("inner queries"),
                        r * (3 * delta - 1),
                        d.inner_queries,
                    ));
                }
                if inst.kind.monotonicity() == Some(MonotonicityCase::Columns) {
                    checks.push(at_most(
                        &tag("multiset updates"),
                        bound_updates,
                        d.multiset_updates,
                    ));
                }
            }
            Link::MinWitFromMinMax | Link::BoolFromBmmp | Link::BoolFromMinWit => {
                checks.push(exact(&tag("inner queries"), 1, d.inner_queries));
            }
        }
    }
    if link == Link::BmmpFromEq && inst.kind.monotonicity() == Some(MonotonicityCase::AcrossQueries)
    {
        // Each coordinate of the rounded query rises at most `c*n/delta`
        // times over any stream, each rise touching `n` multisets.
        let stream_bound = bound_updates * n64.max(inst.queries.len() as u64);
        checks.push(at_most(
            &format!(
                "{} stream multiset updates (amortized <= {bound_updates} per query over {} queries)",
                link.name(),
                n64.max(inst.queries.len() as u64)
            ),
            stream_bound,
            total.multiset_updates,
        ));
    }
    Ok(checks)
}

/// Parameters of the success-rate experiment.
#[derive(Clone, Debug)]
pub struct SuccessExperiment {
    pub n: usize,
    pub case: MonotonicityCase,
    pub delta: Param,
    pub hitting: HittingSize,
    pub trials: usize,
    pub seed: u64,
    /// Instance distribution; `None` uses the default for the kind.
    pub dist: Option<Distribution>,
}

impl SuccessExperiment {
    pub fn new(n: usize, trials: usize, seed: u64) -> Self {
        SuccessExperiment {
            n,
            case: MonotonicityCase::Rows,
            delta: Param::Auto,
            hitting: HittingSize::Auto,
            trials,
            seed,
            dist: None,
        }
    }
}

/// Fraction of trials with every output entry correct, for
/// `bmmp<-eq,naive` on independent random instances with `n` queries each.
pub fn success_rate_experiment(exp: &SuccessExperiment) -> Result<SuccessRate> {
    let kind = ProblemKind::BoundedMonotoneMinPlus(exp.case);
    let chain = Chain::new(vec![Link::BmmpFromEq])?;
    let mut spec = InstanceSpec::new(kind, exp.n, exp.seed);
    if let Some(d) = exp.dist {
        spec = spec.with_dist(d);
    }
    let cfg = ReductionConfig {
        delta: exp.delta,
        hitting: exp.hitting,
        seed: exp.seed,
        ..Default::default()
    };
    let reports = differential_check(&chain, &spec, exp.trials, &cfg)?;
    if let Some(e) = reports.iter().find_map(|r| r.error.clone()) {
        return Err(crate::error::OmvError::Chain(e));
    }
    let successes = reports.iter().filter(|r| r.success).count();
    let entries = (exp.trials * spec.queries * exp.n) as u64;
    let entry_failures: u64 = reports.iter().map(|r| r.mismatches.len() as u64).sum();
    Ok(SuccessRate {
        trials: exp.trials,
        successes,
        rate: successes as f64 / exp.trials.max(1) as f64,
        interval: wilson_interval(successes, exp.trials),
        entries,
        entry_failures,
        entry_failure_rate: entry_failures as f64 / entries.max(1) as f64,
        entry_bound: 1.0 / (exp.n as f64).powi(3),
    })
}
