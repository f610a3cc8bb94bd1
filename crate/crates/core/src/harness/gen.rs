//! Seeded random instances for every problem kind.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::error::{OmvError, Result};
use crate::matrix::SquareMatrix;
use crate::problem::{MonotonicityCase, ProblemKind, DEFAULT_BOUND_C};
use crate::value::Value;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Distribution {
    /// Entries are `1` with probability `density`.
    Boolean {
        density: f64,
    },
    Uniform {
        lo: i64,
        hi: i64,
    },
    /// `heavy` fixed values from `[lo, hi]` take most of the mass: the first
    /// gets 80% of the heavy mass, the rest share 20%. A small fraction of
    /// entries is uniform noise.
    Skewed {
        heavy: usize,
        lo: i64,
        hi: i64,
    },
}

/// Share of skewed entries drawn from the heavy values.
pub const HEAVY_MASS: f64 = 0.9;

#[derive(Clone, Debug, PartialEq)]
pub struct InstanceSpec {
    pub kind: ProblemKind,
    pub n: usize,
    pub dist: Distribution,
    pub queries: usize,
    pub seed: u64,
    /// Probability that an entry becomes `+inf` or `-inf`, for kinds that
    /// accept infinities.
    pub inf_rate: f64,
    pub bound_c: i64,
}

impl InstanceSpec {
    /// `n` queries over the natural distribution of `kind`.
    pub fn new(kind: ProblemKind, n: usize, seed: u64) -> Self {
        InstanceSpec {
            kind,
            n,
            dist: default_distribution(kind, n),
            queries: n,
            seed,
            inf_rate: 0.0,
            bound_c: DEFAULT_BOUND_C,
        }
    }

    pub fn with_dist(mut self, dist: Distribution) -> Self {
        self.dist = dist;
        self
    }

    pub fn with_queries(mut self, queries: usize) -> Self {
        self.queries = queries;
        self
    }

    pub fn with_inf_rate(mut self, rate: f64) -> Self {
        self.inf_rate = rate;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

pub fn default_distribution(kind: ProblemKind, n: usize) -> Distribution {
    let n = n as i64;
    match kind {
        ProblemKind::Boolean | ProblemKind::MinWitness => Distribution::Boolean { density: 0.25 },
        ProblemKind::BoundedMonotoneMinPlus(_) => Distribution::Uniform {
            lo: 0,
            hi: DEFAULT_BOUND_C * n,
        },
        _ => Distribution::Uniform { lo: -n, hi: n },
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub kind: ProblemKind,
    pub matrix: SquareMatrix,
    pub queries: Vec<Vec<Value>>,
}

impl Instance {
    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    /// First 64 bits of SHA-256 over the kind, matrix and queries.
    pub fn hash(&self) -> u64 {
        let mut h = Sha256::new();
        h.update(self.kind.to_string().as_bytes());
        h.update((self.n() as u64).to_le_bytes());
        for x in self
            .matrix
            .entries()
            .iter()
            .chain(self.queries.iter().flatten())
        {
            h.update(x.to_string().as_bytes());
            h.update(b" ");
        }
        let digest = h.finalize();
        u64::from_le_bytes(digest[..8].try_into().expect("32-byte digest"))
    }
}

fn unsatisfiable(msg: impl Into<String>) -> OmvError {
    OmvError::Unsatisfiable(msg.into())
}

fn check_spec(spec: &InstanceSpec) -> Result<()> {
    if spec.n == 0 {
        return Err(unsatisfiable("n must be positive"));
    }
    let (lo, hi) = match spec.dist {
        Distribution::Boolean { density } => {
            if !(0.0..=1.0).contains(&density) {
                return Err(unsatisfiable(format!("density {density} outside [0, 1]")));
            }
            (0, 1)
        }
        Distribution::Uniform { lo, hi } => (lo, hi),
        Distribution::Skewed { heavy, lo, hi } => {
            if heavy == 0 || (heavy as i64) > hi.saturating_sub(lo).saturating_add(1) {
                return Err(unsatisfiable(format!(
                    "{heavy} heavy values do not fit in [{lo}, {hi}]"
                )));
            }
            (lo, hi)
        }
    };
    if lo > hi {
        return Err(unsatisfiable(format!("empty range [{lo}, {hi}]")));
    }
    match spec.kind {
        ProblemKind::Boolean | ProblemKind::MinWitness if lo < 0 || hi > 1 => {
            Err(unsatisfiable(format!(
                "{} needs values in {{0, 1}}, range is [{lo}, {hi}]",
                spec.kind
            )))
        }
        ProblemKind::BoundedMonotoneMinPlus(_) => {
            let bound = spec.bound_c * spec.n as i64;
            if lo < 0 || hi > bound {
                Err(unsatisfiable(format!(
                    "min-plus values must lie in [0, {bound}], range is [{lo}, {hi}]"
                )))
            } else {
                Ok(())
            }
        }
        _ => Ok(()),
    }
}

struct Sampler {
    dist: Distribution,
    heavy: Vec<i64>,
    inf_rate: f64,
}

impl Sampler {
    fn new(rng: &mut ChaCha8Rng, spec: &InstanceSpec) -> Self {
        let heavy = match spec.dist {
            Distribution::Skewed { heavy, lo, hi } => {
                let mut chosen: Vec<i64> = Vec::with_capacity(heavy);
                while chosen.len() < heavy {
                    let x = rng.gen_range(lo..=hi);
                    if !chosen.contains(&x) {
                        chosen.push(x);
                    }
                }
                chosen
            }
            _ => Vec::new(),
        };
        let inf_rate = if spec.kind.allows_infinity() {
            spec.inf_rate
        } else {
            0.0
        };
        Sampler {
            dist: spec.dist,
            heavy,
            inf_rate,
        }
    }

    fn finite(&self, rng: &mut ChaCha8Rng) -> i64 {
        match self.dist {
            Distribution::Boolean { density } => rng.gen_bool(density) as i64,
            Distribution::Uniform { lo, hi } => rng.gen_range(lo..=hi),
            Distribution::Skewed { lo, hi, .. } => {
                if !rng.gen_bool(HEAVY_MASS) {
                    rng.gen_range(lo..=hi)
                } else if self.heavy.len() == 1 || rng.gen_bool(0.8) {
                    self.heavy[0]
                } else {
                    self.heavy[rng.gen_range(1..self.heavy.len())]
                }
            }
        }
    }

    fn value(&self, rng: &mut ChaCha8Rng) -> Value {
        if self.inf_rate > 0.0 && rng.gen_bool(self.inf_rate) {
            if rng.gen_bool(0.5) {
                Value::PosInf
            } else {
                Value::NegInf
            }
        } else {
            Value::Fin(self.finite(rng))
        }
    }
}

fn sorted(mut xs: Vec<i64>) -> Vec<i64> {
    xs.sort_unstable();
    xs
}

/// Matrix and query stream for `spec`; identical for identical specs.
pub fn gen_instance(spec: &InstanceSpec) -> Result<Instance> {
    check_spec(spec)?;
    let n = spec.n;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let sampler = Sampler::new(&mut rng, spec);
    let domain = spec.kind.input_domain();

    let mut matrix = SquareMatrix::from_fn(n, domain, |_, _| sampler.value(&mut rng));
    let mut queries: Vec<Vec<Value>> = (0..spec.queries)
        .map(|_| (0..n).map(|_| sampler.value(&mut rng)).collect())
        .collect();

    if let Some(case) = spec.kind.monotonicity() {
        let fin = |xs: Vec<i64>| xs.into_iter().map(Value::Fin).collect::<Vec<_>>();
        match case {
            MonotonicityCase::Rows => {
                for i in 0..n {
                    let row = sorted(matrix.row(i).iter().map(|x| x.expect_finite()).collect());
                    for (k, x) in row.into_iter().enumerate() {
                        matrix.set(i, k, Value::Fin(x));
                    }
                }
            }
            MonotonicityCase::Columns => {
                for k in 0..n {
                    let col = sorted((0..n).map(|i| matrix.get(i, k).expect_finite()).collect());
                    for (i, x) in col.into_iter().enumerate() {
                        matrix.set(i, k, Value::Fin(x));
                    }
                }
            }
            MonotonicityCase::WithinQuery => {
                for q in queries.iter_mut() {
                    *q = fin(sorted(q.iter().map(|x| x.expect_finite()).collect()));
                }
            }
            MonotonicityCase::AcrossQueries => {
                for k in 0..n {
                    let col = sorted(queries.iter().map(|q| q[k].expect_finite()).collect());
                    for (q, x) in queries.iter_mut().zip(col) {
                        q[k] = Value::Fin(x);
                    }
                }
            }
        }
    }

    Ok(Instance {
        kind: spec.kind,
        matrix,
        queries,
    })
}
