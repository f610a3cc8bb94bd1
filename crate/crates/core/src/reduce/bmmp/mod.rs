//! Bounded monotone min-plus answered by exists-equality instances.
//!
//! Step 1 rounds everything down by `delta` and lists the candidate sets
//! `C_i` that are small enough; their minima are computed directly. Step 2
//! covers the large sets: for every sampled column `r` and offset
//! `delta' in 0..=3*delta-2`, the equality instance on
//! `M^(r)[i,k] = M[i,k] - M[i,r]` finds the rows where some `k` has
//! `M[i,k] + v[k] = M[i,r] + v[r] - delta'`. The answer is the smaller of
//! the two steps.

pub mod candidates;
pub mod multiset;
pub mod rmq;

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{HittingSize, ReductionConfig};
use crate::counters::{CounterReport, Counters};
use crate::error::{check_len, Result};
use crate::matrix::{Domain, SquareMatrix};
use crate::problem::{MonotonicityCase, ProblemKind};
use crate::solver::{build_solver, Chain, OnlineSolver};
use crate::value::Value;

pub use candidates::{CandidateLister, CandidateReport, Candidates};
pub use multiset::OrderedMultiset;
pub use rmq::RangeMinIndex;

/// Builds the min-plus solver, wrapped in a majority vote when
/// `cfg.repeats > 1`.
pub fn build(
    m: &SquareMatrix,
    case: MonotonicityCase,
    inner_chain: &Chain,
    cfg: &ReductionConfig,
) -> Result<Box<dyn OnlineSolver>> {
    if cfg.repeats <= 1 {
        return Ok(Box::new(BmmpFromEq::new(m, case, inner_chain, cfg)?));
    }
    Ok(Box::new(MajorityVote::new(m, case, inner_chain, cfg)?))
}

pub struct BmmpFromEq {
    n: usize,
    case: MonotonicityCase,
    delta: usize,
    entries: Vec<i64>,
    lister: CandidateLister,
    hitting: Vec<usize>,
    inner: Vec<Box<dyn OnlineSolver>>,
    previous: Option<Vec<Value>>,
    cfg: ReductionConfig,
    counters: Counters,
}

impl BmmpFromEq {
    pub fn new(
        m: &SquareMatrix,
        case: MonotonicityCase,
        inner_chain: &Chain,
        cfg: &ReductionConfig,
    ) -> Result<Self> {
        let kind = ProblemKind::BoundedMonotoneMinPlus(case);
        cfg.check_matrix(m, kind)?;
        let n = m.n();
        let delta = cfg.delta_for(n);
        let key_bound = cfg.bound_c * n as i64 / delta as i64;
        let lister = CandidateLister::new(m, case, delta, n / delta, key_bound);

        let hitting: Vec<usize> = match cfg.hitting {
            HittingSize::Full => (0..n).collect(),
            _ => {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                (0..cfg.hitting_for(n, delta))
                    .map(|_| rng.gen_range(0..n))
                    .collect()
            }
        };
        let entries: Vec<i64> = m.entries().iter().map(|x| x.expect_finite()).collect();
        let inner = hitting
            .iter()
            .enumerate()
            .map(|(idx, &r)| {
                let shifted = SquareMatrix::from_fn(n, Domain::Integer, |i, k| {
                    Value::Fin(entries[i * n + k] - entries[i * n + r])
                });
                build_solver(
                    ProblemKind::ExistsEquality,
                    &shifted,
                    inner_chain,
                    &cfg.child(idx as u64),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BmmpFromEq {
            n,
            case,
            delta,
            entries,
            lister,
            hitting,
            inner,
            previous: None,
            cfg: cfg.clone(),
            counters: Counters::default(),
        })
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    /// Sampled columns, 0-based, duplicates kept.
    pub fn hitting_set(&self) -> &[usize] {
        &self.hitting
    }

    /// Inner equality queries issued per outer query.
    pub fn inner_queries_per_query(&self) -> usize {
        self.hitting.len() * (3 * self.delta - 1)
    }

    fn entry(&self, i: usize, k: usize) -> i64 {
        self.entries[i * self.n + k]
    }

    fn validate(&self, v: &[Value]) -> Result<Vec<i64>> {
        check_len(self.n, v.len())?;
        self.cfg
            .check_query(v, self.kind(), self.n, self.previous.as_deref())?;
        Ok(v.iter().map(|x| x.expect_finite()).collect())
    }

    fn record(&mut self, v: &[Value]) {
        if self.case == MonotonicityCase::AcrossQueries {
            self.previous = Some(v.to_vec());
        }
    }

    /// Step 1 alone: validates `v` and lists the candidate sets. In the
    /// across-queries case this consumes `v` as the next query of the stream.
    pub fn list_candidates(&mut self, v: &[Value]) -> Result<CandidateReport> {
        let vals = self.validate(v)?;
        self.record(v);
        let d = self.delta as i64;
        let vhat: Vec<i64> = vals.iter().map(|x| x / d).collect();
        Ok(self.lister.list(&vhat, &mut self.counters))
    }

    /// In forced-hit mode every `r` in `C_i` is queried, so the offset
    /// `M[i,r] + v[r] - min` must fall in `0..=3*delta-2`.
    fn check_offsets(&mut self, v: &[i64], report: &CandidateReport) {
        let n = self.n;
        let d = self.delta as i64;
        for i in 0..n {
            let sums: Vec<i64> = (0..n).map(|k| self.entry(i, k) + v[k]).collect();
            let min = *sums.iter().min().expect("n > 0");
            for k in 0..n {
                if self.entry(i, k) / d + v[k] / d <= report.rounded_min[i] + 1 {
                    self.counters.witness_checks += 1;
                    if !(0..=3 * d - 2).contains(&(sums[k] - min)) {
                        self.counters.witness_failures += 1;
                    }
                }
            }
        }
    }
}

impl OnlineSolver for BmmpFromEq {
    fn kind(&self) -> ProblemKind {
        ProblemKind::BoundedMonotoneMinPlus(self.case)
    }

    fn n(&self) -> usize {
        self.n
    }

    fn query(&mut self, v: &[Value]) -> Result<Vec<Value>> {
        let report = self.list_candidates(v)?;
        let n = self.n;
        let v: Vec<i64> = v.iter().map(|x| x.expect_finite()).collect();
        let track = self.cfg.track_witnesses;
        if track && self.cfg.hitting == HittingSize::Full {
            self.check_offsets(&v, &report);
        }

        let mut best: Vec<Option<i64>> = report
            .sets
            .iter()
            .enumerate()
            .map(|(i, set)| match set {
                Candidates::Small(list) => list.iter().map(|&k| self.entry(i, k) + v[k]).min(),
                Candidates::Oversize => None,
            })
            .collect();

        let offsets = 3 * self.delta as i64 - 1;
        for idx in 0..self.hitting.len() {
            let r = self.hitting[idx];
            for off in 0..offsets {
                let q: Vec<Value> = v.iter().map(|&x| Value::Fin(-(x - v[r] + off))).collect();
                let ans = self.inner[idx].query(&q)?;
                self.counters.inner_queries += 1;
                for i in (0..n).filter(|&i| ans[i].is_one()) {
                    let value = self.entry(i, r) + v[r] - off;
                    if track {
                        self.counters.witness_checks += 1;
                        let witness = self.inner[idx].witnesses().and_then(|w| w[i]);
                        let sound = match witness {
                            Some(k) => self.entry(i, k) + v[k] == value,
                            None => (0..n).any(|k| self.entry(i, k) + v[k] == value),
                        };
                        if !sound {
                            self.counters.witness_failures += 1;
                        }
                    }
                    best[i] = Some(best[i].map_or(value, |b| b.min(value)));
                }
            }
        }
        self.counters.queries += 1;
        Ok(best
            .into_iter()
            .map(|b| b.map_or(Value::PosInf, Value::Fin))
            .collect())
    }

    fn counters(&self) -> &Counters {
        &self.counters
    }

    fn report(&self) -> CounterReport {
        CounterReport {
            solver: "bmmp<-eq".into(),
            counters: self.counters,
            children: self.inner.iter().map(|s| s.report()).collect(),
        }
    }
}

/// Independent copies of the randomized solver; each output entry is the
/// most common answer, ties to the smaller value.
pub struct MajorityVote {
    kind: ProblemKind,
    n: usize,
    copies: Vec<Box<dyn OnlineSolver>>,
    counters: Counters,
}

impl MajorityVote {
    pub fn new(
        m: &SquareMatrix,
        case: MonotonicityCase,
        inner_chain: &Chain,
        cfg: &ReductionConfig,
    ) -> Result<Self> {
        let copies = (0..cfg.repeats.max(1))
            .map(|c| {
                let copy_cfg = ReductionConfig {
                    repeats: 1,
                    ..cfg.child(c as u64)
                };
                BmmpFromEq::new(m, case, inner_chain, &copy_cfg)
                    .map(|s| Box::new(s) as Box<dyn OnlineSolver>)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MajorityVote {
            kind: ProblemKind::BoundedMonotoneMinPlus(case),
            n: m.n(),
            copies,
            counters: Counters::default(),
        })
    }
}

/// Most frequent value, ties to the smaller one.
pub fn majority(values: &[Value]) -> Value {
    let mut counts: HashMap<Value, usize> = HashMap::new();
    for &x in values {
        *counts.entry(x).or_insert(0) += 1;
    }
    counts
        .into_iter()
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        .map(|(x, _)| x)
        .expect("at least one copy")
}

impl OnlineSolver for MajorityVote {
    fn kind(&self) -> ProblemKind {
        self.kind
    }

    fn n(&self) -> usize {
        self.n
    }

    fn query(&mut self, v: &[Value]) -> Result<Vec<Value>> {
        let answers = self
            .copies
            .iter_mut()
            .map(|s| s.query(v))
            .collect::<Result<Vec<_>>>()?;
        self.counters.inner_queries += answers.len() as u64;
        self.counters.queries += 1;
        Ok((0..self.n)
            .map(|i| majority(&answers.iter().map(|a| a[i]).collect::<Vec<_>>()))
            .collect())
    }

    fn counters(&self) -> &Counters {
        &self.counters
    }

    fn report(&self) -> CounterReport {
        CounterReport {
            solver: "bmmp-majority".into(),
            counters: self.counters,
            children: self.copies.iter().map(|s| s.report()).collect(),
        }
    }
}
