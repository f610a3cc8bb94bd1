//! Adaptive query streams: query `j+1` is derived from a hash of the seed and
//! the solver's answer to query `j`, so a solver cannot know a query before
//! it has answered the previous one.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::config::ReductionConfig;
use crate::counters::{CounterReport, Counters};
use crate::error::{check_len, Result};
use crate::matrix::SquareMatrix;
use crate::oracle::product;
use crate::problem::{MonotonicityCase, ProblemKind, DEFAULT_BOUND_C};
use crate::solver::OnlineSolver;
use crate::value::Value;

use super::report::TrialReport;

pub struct AdaptiveAdversary {
    kind: ProblemKind,
    n: usize,
    bound_c: i64,
    state: [u8; 32],
    round: u64,
    previous: Option<Vec<Value>>,
}

impl AdaptiveAdversary {
    pub fn new(kind: ProblemKind, n: usize, seed: u64) -> Self {
        let mut h = Sha256::new();
        h.update(b"omv adaptive");
        h.update(seed.to_le_bytes());
        AdaptiveAdversary {
            kind,
            n,
            bound_c: DEFAULT_BOUND_C,
            state: h.finalize().into(),
            round: 0,
            previous: None,
        }
    }

    /// Next query; `answer` is the reply to the previous one (`None` before
    /// the first query).
    pub fn next_query(&mut self, answer: Option<&[Value]>) -> Vec<Value> {
        let mut h = Sha256::new();
        h.update(self.state);
        h.update(self.round.to_le_bytes());
        for x in answer.unwrap_or(&[]) {
            h.update(x.to_string().as_bytes());
            h.update(b",");
        }
        self.state = h.finalize().into();
        self.round += 1;
        let mut rng = ChaCha8Rng::from_seed(self.state);
        let q = self.sample(&mut rng);
        self.previous = Some(q.clone());
        q
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<Value> {
        let n = self.n;
        let ni = n as i64;
        match self.kind {
            ProblemKind::Boolean | ProblemKind::MinWitness => {
                let density = rng.gen_range(0.05..0.6);
                (0..n)
                    .map(|_| Value::from_bool(rng.gen_bool(density)))
                    .collect()
            }
            ProblemKind::ExistsEquality => (0..n)
                .map(|_| Value::Fin(rng.gen_range(-ni..=ni)))
                .collect(),
            ProblemKind::ExistsDominance | ProblemKind::MinMax => (0..n)
                .map(|_| match rng.gen_range(0..10) {
                    0 => Value::PosInf,
                    1 => Value::NegInf,
                    _ => Value::Fin(rng.gen_range(-ni..=ni)),
                })
                .collect(),
            ProblemKind::BoundedMonotoneMinPlus(case) => {
                let hi = self.bound_c * ni;
                let mut xs: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=hi)).collect();
                match case {
                    MonotonicityCase::WithinQuery => xs.sort_unstable(),
                    MonotonicityCase::AcrossQueries => {
                        if let Some(prev) = &self.previous {
                            let step = (hi / ni).max(1);
                            for (x, p) in xs.iter_mut().zip(prev) {
                                *x = (p.expect_finite() + rng.gen_range(0..=step)).min(hi);
                            }
                        } else {
                            for x in xs.iter_mut() {
                                *x /= 4;
                            }
                        }
                    }
                    _ => {}
                }
                xs.into_iter().map(Value::Fin).collect()
            }
        }
    }
}

/// Drives `solver` through `rounds` adaptive queries on matrix `m` and
/// compares each answer with the oracle on the same stream.
pub fn adaptive_session(
    solver: &mut dyn OnlineSolver,
    m: &SquareMatrix,
    rounds: usize,
    seed: u64,
) -> TrialReport {
    let kind = solver.kind();
    let mut adversary = AdaptiveAdversary::new(kind, m.n(), seed);
    let mut answer: Option<Vec<Value>> = None;
    let mut mismatches = Vec::new();
    let mut hasher = Sha256::new();
    for x in m.entries() {
        hasher.update(x.to_string().as_bytes());
    }
    hasher.update(seed.to_le_bytes());
    let digest = hasher.finalize();
    let hash = u64::from_le_bytes(digest[..8].try_into().expect("32-byte digest"));
    for j in 0..rounds {
        let q = adversary.next_query(answer.as_deref());
        let got = match solver.query(&q) {
            Ok(a) => a,
            Err(e) => return TrialReport::failed(hash, format!("round {}: {e}", j + 1)),
        };
        let want = product(kind, m, &q).expect("adversary queries are valid");
        mismatches.extend(
            (0..m.n())
                .filter(|&i| got[i] != want[i])
                .map(|i| (j + 1, i + 1)),
        );
        answer = Some(got);
    }
    TrialReport::new(hash, mismatches, solver.report().total())
}

/// Negative control: precomputes its answers for an anticipated query
/// stream before seeing any query, then replays them. Indistinguishable from
/// a correct solver on a fixed stream, wrong as soon as queries adapt.
pub struct BatchingMock {
    kind: ProblemKind,
    n: usize,
    answers: Vec<Vec<Value>>,
    counters: Counters,
}

impl BatchingMock {
    pub fn new(
        kind: ProblemKind,
        m: &SquareMatrix,
        anticipated: &[Vec<Value>],
        cfg: &ReductionConfig,
    ) -> Result<Self> {
        cfg.check_matrix(m, kind)?;
        let answers = anticipated
            .iter()
            .map(|q| product(kind, m, q))
            .collect::<Result<Vec<_>>>()?;
        Ok(BatchingMock {
            kind,
            n: m.n(),
            answers,
            counters: Counters::default(),
        })
    }
}

impl OnlineSolver for BatchingMock {
    fn kind(&self) -> ProblemKind {
        self.kind
    }

    fn n(&self) -> usize {
        self.n
    }

    fn query(&mut self, v: &[Value]) -> Result<Vec<Value>> {
        check_len(self.n, v.len())?;
        let j = self.counters.queries as usize;
        self.counters.queries += 1;
        Ok(self
            .answers
            .get(j)
            .cloned()
            .unwrap_or_else(|| vec![Value::ZERO; self.n]))
    }

    fn counters(&self) -> &Counters {
        &self.counters
    }

    fn report(&self) -> CounterReport {
        CounterReport::leaf("batching mock", self.counters)
    }
}
