//! The three light reductions: dominance through equality (bit slicing of
//! ranks), min-witness through min-max, and Boolean through bounded monotone
//! min-plus. Also the projection of a min-witness answer to a Boolean one.

use crate::config::ReductionConfig;
use crate::counters::{CounterReport, Counters};
use crate::error::{check_len, Result};
use crate::matrix::{Domain, SquareMatrix};
use crate::problem::{MonotonicityCase, ProblemKind};
use crate::solver::{build_solver, Chain, OnlineSolver};
use crate::value::Value;

/// Order-embedding of matrix values and query values into small integers.
///
/// With `d_1 < ... < d_D` the distinct matrix values, the matrix value `d_p`
/// gets rank `p` (so ranks start at 1) and a query value `y` gets
/// `#{ p : d_p <= y }`. Then `a <= y` iff `rank(a) <= query_rank(y)`.
#[derive(Clone, Debug)]
pub struct RankMap {
    distinct: Vec<Value>,
}

impl RankMap {
    pub fn build(m: &SquareMatrix) -> Self {
        let mut distinct = m.entries().to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        RankMap { distinct }
    }

    pub fn distinct(&self) -> usize {
        self.distinct.len()
    }

    /// Rank of a value that occurs in the matrix.
    pub fn rank(&self, a: Value) -> u64 {
        let p = self.distinct.partition_point(|&d| d < a);
        debug_assert!(
            self.distinct.get(p) == Some(&a),
            "{a} is not a matrix value"
        );
        p as u64 + 1
    }

    pub fn query_rank(&self, y: Value) -> u64 {
        self.distinct.partition_point(|&d| d <= y) as u64
    }
}

/// Number of bit slices: `ceil(log2(n^2)) + 1`, and at least 2 so that the
/// shifted query ranks of a 1x1 instance fit.
pub fn slice_count(n: usize) -> u32 {
    let sq = (n * n) as u64;
    let ceil_log = if sq <= 1 {
        0
    } else {
        64 - (sq - 1).leading_zeros()
    };
    (ceil_log + 1).max(2)
}

/// Matrix side of slice `l`: `floor(a / 2^(l+1))` if bit `l` of `a` is 0, else -1.
pub fn matrix_slice_value(a: u64, l: u32) -> i64 {
    if (a >> l) & 1 == 0 {
        (a >> (l + 1)) as i64
    } else {
        -1
    }
}

/// Query side of slice `l` for `b' = b + 1`: `floor(b' / 2^(l+1))` if bit
/// `l` of `b'` is 1, else -2.
pub fn query_slice_value(b_plus_one: u64, l: u32) -> i64 {
    if (b_plus_one >> l) & 1 == 1 {
        (b_plus_one >> (l + 1)) as i64
    } else {
        -2
    }
}

pub struct DomFromEq {
    n: usize,
    ranks: RankMap,
    slices: Vec<Box<dyn OnlineSolver>>,
    cfg: ReductionConfig,
    counters: Counters,
}

impl DomFromEq {
    pub fn new(m: &SquareMatrix, inner_chain: &Chain, cfg: &ReductionConfig) -> Result<Self> {
        let n = m.n();
        let ranks = RankMap::build(m);
        let ranked: Vec<u64> = m.entries().iter().map(|&a| ranks.rank(a)).collect();
        let slices = (0..slice_count(n))
            .map(|l| {
                let slice = SquareMatrix::from_fn(n, Domain::Integer, |i, k| {
                    Value::Fin(matrix_slice_value(ranked[i * n + k], l))
                });
                build_solver(
                    ProblemKind::ExistsEquality,
                    &slice,
                    inner_chain,
                    &cfg.child(l as u64),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DomFromEq {
            n,
            ranks,
            slices,
            cfg: cfg.clone(),
            counters: Counters::default(),
        })
    }

    pub fn rank_map(&self) -> &RankMap {
        &self.ranks
    }
}

impl OnlineSolver for DomFromEq {
    fn kind(&self) -> ProblemKind {
        ProblemKind::ExistsDominance
    }

    fn n(&self) -> usize {
        self.n
    }

    fn query(&mut self, v: &[Value]) -> Result<Vec<Value>> {
        check_len(self.n, v.len())?;
        self.cfg
            .check_query(v, ProblemKind::ExistsDominance, self.n, None)?;
        let shifted: Vec<u64> = v.iter().map(|&y| self.ranks.query_rank(y) + 1).collect();
        let mut out = vec![false; self.n];
        for (l, solver) in self.slices.iter_mut().enumerate() {
            let sliced: Vec<Value> = shifted
                .iter()
                .map(|&b| Value::Fin(query_slice_value(b, l as u32)))
                .collect();
            let ans = solver.query(&sliced)?;
            self.counters.inner_queries += 1;
            for (o, a) in out.iter_mut().zip(&ans) {
                *o |= a.is_one();
            }
        }
        self.counters.queries += 1;
        Ok(out.into_iter().map(Value::from_bool).collect())
    }

    fn counters(&self) -> &Counters {
        &self.counters
    }

    fn report(&self) -> CounterReport {
        CounterReport {
            solver: "dom<-eq".into(),
            counters: self.counters,
            children: self.slices.iter().map(|s| s.report()).collect(),
        }
    }
}

/// Min-witness via min-max: `M'[i,k] = k` where `M[i,k] = 1` and `+inf`
/// elsewhere; the query is encoded the same way.
pub struct MinWitFromMinMax {
    n: usize,
    inner: Box<dyn OnlineSolver>,
    cfg: ReductionConfig,
    counters: Counters,
}

fn witness_encode(k: usize, bit: Value) -> Value {
    if bit.is_one() {
        Value::Fin(k as i64 + 1)
    } else {
        Value::PosInf
    }
}

impl MinWitFromMinMax {
    pub fn encode_matrix(m: &SquareMatrix) -> SquareMatrix {
        m.map(Domain::Integer, |_, k, x| witness_encode(k, x))
    }

    pub fn new(m: &SquareMatrix, inner_chain: &Chain, cfg: &ReductionConfig) -> Result<Self> {
        let inner = build_solver(
            ProblemKind::MinMax,
            &Self::encode_matrix(m),
            inner_chain,
            &cfg.child(0),
        )?;
        Ok(MinWitFromMinMax {
            n: m.n(),
            inner,
            cfg: cfg.clone(),
            counters: Counters::default(),
        })
    }
}

impl OnlineSolver for MinWitFromMinMax {
    fn kind(&self) -> ProblemKind {
        ProblemKind::MinWitness
    }

    fn n(&self) -> usize {
        self.n
    }

    fn query(&mut self, v: &[Value]) -> Result<Vec<Value>> {
        check_len(self.n, v.len())?;
        self.cfg
            .check_query(v, ProblemKind::MinWitness, self.n, None)?;
        let encoded: Vec<Value> = v
            .iter()
            .enumerate()
            .map(|(k, &x)| witness_encode(k, x))
            .collect();
        let ans = self.inner.query(&encoded)?;
        self.counters.inner_queries += 1;
        self.counters.queries += 1;
        let n = self.n as i64;
        Ok(ans
            .into_iter()
            .map(|x| match x {
                Value::Fin(k) if (1..=n).contains(&k) => x,
                _ => Value::PosInf,
            })
            .collect())
    }

    fn counters(&self) -> &Counters {
        &self.counters
    }

    fn report(&self) -> CounterReport {
        CounterReport {
            solver: "minwit<-minmax".into(),
            counters: self.counters,
            children: vec![self.inner.report()],
        }
    }
}

/// Boolean via bounded monotone min-plus.
///
/// `M'[i,k] = 2(i+k) - M[i,k]` and `v''_j[k] = 2(j-k) - v_j[k] + 2n` with
/// 1-based `i, j, k`; then `(M v_j)[i] = 1` iff
/// `(M' minplus v''_j)[i] = 2(i+j) - 2 + 2n`. The `+2n` keeps the query
/// nonnegative. Entries grow with `j`, so the inner instance is rebuilt
/// every `n` queries with `j` counted from 1 again; within each block the
/// inner stream is coordinatewise nondecreasing and bounded by `4n`.
pub struct BoolFromBmmp {
    n: usize,
    encoded: SquareMatrix,
    inner_chain: Chain,
    inner: Box<dyn OnlineSolver>,
    retired: Vec<CounterReport>,
    block: u64,
    /// 1-based position within the current block.
    j: usize,
    cfg: ReductionConfig,
    counters: Counters,
}

impl BoolFromBmmp {
    pub fn encode_matrix(m: &SquareMatrix) -> SquareMatrix {
        m.map(Domain::Bounded, |i, k, x| {
            Value::Fin(2 * (i as i64 + 1 + k as i64 + 1) - x.expect_finite())
        })
    }

    /// Shifted query for the `j`-th (1-based) query of a block.
    pub fn encode_query(v: &[Value], j: usize) -> Vec<Value> {
        let n = v.len() as i64;
        v.iter()
            .enumerate()
            .map(|(k, x)| Value::Fin(2 * (j as i64 - (k as i64 + 1)) - x.expect_finite() + 2 * n))
            .collect()
    }

    /// The inner answer that certifies `(M v_j)[i] = 1`, for 0-based `i`.
    pub fn target(n: usize, i: usize, j: usize) -> i64 {
        2 * (i as i64 + 1 + j as i64) - 2 + 2 * n as i64
    }

    fn inner_kind() -> ProblemKind {
        ProblemKind::BoundedMonotoneMinPlus(MonotonicityCase::AcrossQueries)
    }

    pub fn new(m: &SquareMatrix, inner_chain: &Chain, cfg: &ReductionConfig) -> Result<Self> {
        let encoded = Self::encode_matrix(m);
        let inner = build_solver(Self::inner_kind(), &encoded, inner_chain, &cfg.child(0))?;
        Ok(BoolFromBmmp {
            n: m.n(),
            encoded,
            inner_chain: inner_chain.clone(),
            inner,
            retired: Vec::new(),
            block: 0,
            j: 1,
            cfg: cfg.clone(),
            counters: Counters::default(),
        })
    }
}

impl OnlineSolver for BoolFromBmmp {
    fn kind(&self) -> ProblemKind {
        ProblemKind::Boolean
    }

    fn n(&self) -> usize {
        self.n
    }

    fn query(&mut self, v: &[Value]) -> Result<Vec<Value>> {
        check_len(self.n, v.len())?;
        self.cfg
            .check_query(v, ProblemKind::Boolean, self.n, None)?;
        if self.j > self.n {
            self.block += 1;
            let fresh = build_solver(
                Self::inner_kind(),
                &self.encoded,
                &self.inner_chain,
                &self.cfg.child(self.block),
            )?;
            let old = std::mem::replace(&mut self.inner, fresh);
            self.retired.push(old.report());
            self.j = 1;
        }
        let ans = self.inner.query(&Self::encode_query(v, self.j))?;
        self.counters.inner_queries += 1;
        let out = (0..self.n)
            .map(|i| Value::from_bool(ans[i] == Value::Fin(Self::target(self.n, i, self.j))))
            .collect();
        self.j += 1;
        self.counters.queries += 1;
        Ok(out)
    }

    fn counters(&self) -> &Counters {
        &self.counters
    }

    fn report(&self) -> CounterReport {
        let mut children = self.retired.clone();
        children.push(self.inner.report());
        CounterReport {
            solver: "bool<-bmmp".into(),
            counters: self.counters,
            children,
        }
    }
}

/// Boolean answers as `witness != inf` of a min-witness instance on the same matrix.
pub struct BoolFromMinWit {
    n: usize,
    inner: Box<dyn OnlineSolver>,
    cfg: ReductionConfig,
    counters: Counters,
}

impl BoolFromMinWit {
    pub fn new(m: &SquareMatrix, inner_chain: &Chain, cfg: &ReductionConfig) -> Result<Self> {
        let inner = build_solver(ProblemKind::MinWitness, m, inner_chain, &cfg.child(0))?;
        Ok(BoolFromMinWit {
            n: m.n(),
            inner,
            cfg: cfg.clone(),
            counters: Counters::default(),
        })
    }
}

impl OnlineSolver for BoolFromMinWit {
    fn kind(&self) -> ProblemKind {
        ProblemKind::Boolean
    }

    fn n(&self) -> usize {
        self.n
    }

    fn query(&mut self, v: &[Value]) -> Result<Vec<Value>> {
        check_len(self.n, v.len())?;
        self.cfg
            .check_query(v, ProblemKind::Boolean, self.n, None)?;
        let ans = self.inner.query(v)?;
        self.counters.inner_queries += 1;
        self.counters.queries += 1;
        Ok(ans
            .into_iter()
            .map(|x| Value::from_bool(x != Value::PosInf))
            .collect())
    }

    fn counters(&self) -> &Counters {
        &self.counters
    }

    fn report(&self) -> CounterReport {
        CounterReport {
            solver: "bool<-minwit".into(),
            counters: self.counters,
            children: vec![self.inner.report()],
        }
    }
}
