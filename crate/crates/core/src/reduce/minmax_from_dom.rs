//! Min-max answered by exists-dominance instances.
//!
//! `(M minmax v)[i] = min(u[i], w[i])` with
//! `u[i] = min { M[i,k] : M[i,k] >= v[k] }` and
//! `w[i] = min { v[k] : v[k] >= M[i,k] }`.
//!
//! Phase u splits each sorted row into `t` buckets and asks one dominance
//! query per bucket against the negated query; the first bucket that reports
//! a hit is scanned in sorted order. Phase w does the same with the sorted
//! query split into buckets against one dominance instance on `M`.

use crate::config::ReductionConfig;
use crate::counters::{CounterReport, Counters};
use crate::error::{check_len, Result};
use crate::matrix::{Domain, SquareMatrix};
use crate::problem::ProblemKind;
use crate::solver::{build_solver, Chain, OnlineSolver};
use crate::value::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Matrix,
    Query,
}

/// Replaces infinities by finite stand-ins without changing any comparison
/// `a <= b` between a matrix entry `a` (finite entries bounded by `w` in
/// magnitude) and a query entry `b` (any integer or infinity).
///
/// Matrix `+-inf` become `+-(3w+2)`. Query entries above `w` become `2w+1`,
/// below `-w` become `-(2w+1)`, and query infinities become `+-(3w+2)` so a
/// matrix `+inf` still compares equal to a query `+inf`.
pub fn finitize(x: Value, w: i64, role: Role) -> i64 {
    let inf = 3 * w + 2;
    match (role, x) {
        (_, Value::PosInf) => inf,
        (_, Value::NegInf) => -inf,
        (Role::Matrix, Value::Fin(a)) => a,
        (Role::Query, Value::Fin(b)) if b > w => 2 * w + 1,
        (Role::Query, Value::Fin(b)) if b < -w => -(2 * w + 1),
        (Role::Query, Value::Fin(b)) => b,
    }
}

/// Stand-in for "not in this bucket" in a matrix slice; exceeds every
/// finitized query entry so it never dominates.
pub fn matrix_filler(w: i64) -> i64 {
    4 * w + 3
}

/// Stand-in for "not in this bucket" in a query slice; below every
/// finitized matrix entry.
pub fn query_filler(w: i64) -> i64 {
    -(4 * w + 3)
}

/// Start of bucket `l` when `len` sorted items are split into `t` buckets
/// whose sizes differ by at most one.
pub fn bucket_start(len: usize, t: usize, l: usize) -> usize {
    l * len / t
}

/// Every row sorted by `(value, column)` and cut into `t` buckets.
#[derive(Clone, Debug)]
pub struct RowBucketIndex {
    t: usize,
    /// `sorted[i]` lists the 0-based columns of row `i` in ascending
    /// `(value, column)` order.
    sorted: Vec<Vec<usize>>,
    /// Largest finite magnitude in the matrix.
    w: i64,
}

impl RowBucketIndex {
    pub fn build(m: &SquareMatrix, t: usize) -> Self {
        let sorted = m
            .rows()
            .map(|row| {
                let mut cols: Vec<usize> = (0..row.len()).collect();
                cols.sort_by_key(|&k| (row[k], k));
                cols
            })
            .collect();
        RowBucketIndex {
            t,
            sorted,
            w: m.max_abs_finite(),
        }
    }

    pub fn w(&self) -> i64 {
        self.w
    }

    /// Columns of bucket `l` of row `i`, in sorted order.
    pub fn bucket(&self, i: usize, l: usize) -> &[usize] {
        let n = self.sorted[i].len();
        &self.sorted[i][bucket_start(n, self.t, l)..bucket_start(n, self.t, l + 1)]
    }

    /// Bucket number of each column of row `i`.
    fn bucket_of(&self, i: usize) -> Vec<usize> {
        let mut of = vec![0; self.sorted[i].len()];
        for l in 0..self.t {
            for &k in self.bucket(i, l) {
                of[k] = l;
            }
        }
        of
    }
}

pub struct MinMaxFromDom {
    m: SquareMatrix,
    t: usize,
    index: RowBucketIndex,
    /// One dominance instance per row bucket: negated entries in the bucket,
    /// filler elsewhere.
    slices: Vec<Box<dyn OnlineSolver>>,
    /// Dominance instance on the finitized matrix, used by phase w.
    whole: Box<dyn OnlineSolver>,
    cfg: ReductionConfig,
    counters: Counters,
}

impl MinMaxFromDom {
    pub fn new(m: &SquareMatrix, inner_chain: &Chain, cfg: &ReductionConfig) -> Result<Self> {
        let n = m.n();
        let t = cfg.t_for(n);
        let index = RowBucketIndex::build(m, t);
        let w = index.w();
        let bucket_of: Vec<Vec<usize>> = (0..n).map(|i| index.bucket_of(i)).collect();

        let slices = (0..t)
            .map(|l| {
                let slice = SquareMatrix::from_fn(n, Domain::Integer, |i, k| {
                    Value::Fin(if bucket_of[i][k] == l {
                        finitize(m.get(i, k).neg(), w, Role::Matrix)
                    } else {
                        matrix_filler(w)
                    })
                });
                build_solver(
                    ProblemKind::ExistsDominance,
                    &slice,
                    inner_chain,
                    &cfg.child(l as u64),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        let finite = m.map(Domain::Integer, |_, _, x| {
            Value::Fin(finitize(x, w, Role::Matrix))
        });
        let whole = build_solver(
            ProblemKind::ExistsDominance,
            &finite,
            inner_chain,
            &cfg.child(t as u64),
        )?;
        Ok(MinMaxFromDom {
            m: m.clone(),
            t,
            index,
            slices,
            whole,
            cfg: cfg.clone(),
            counters: Counters::default(),
        })
    }

    pub fn index(&self) -> &RowBucketIndex {
        &self.index
    }

    /// `u[i] = min { M[i,k] : M[i,k] >= v[k] }`, `+inf` if empty.
    pub fn phase_u(&mut self, v: &[Value]) -> Result<Vec<Value>> {
        let n = self.m.n();
        let w = self.index.w();
        let neg: Vec<Value> = v
            .iter()
            .map(|x| Value::Fin(finitize(x.neg(), w, Role::Query)))
            .collect();
        let mut first_hit: Vec<Option<usize>> = vec![None; n];
        for (l, solver) in self.slices.iter_mut().enumerate() {
            let ans = solver.query(&neg)?;
            self.counters.inner_queries += 1;
            for i in 0..n {
                if first_hit[i].is_none() && ans[i].is_one() {
                    first_hit[i] = Some(l);
                }
            }
        }
        let mut u = vec![Value::PosInf; n];
        for i in 0..n {
            let Some(l) = first_hit[i] else { continue };
            let bucket = self.index.bucket(i, l);
            let mut found = None;
            for &k in bucket {
                self.counters.scan_length += 1;
                if self.m.get(i, k) >= v[k] {
                    found = Some(self.m.get(i, k));
                    break;
                }
            }
            debug_assert!(
                found.is_some(),
                "row {i}: bucket {l} reported a hit but has none"
            );
            u[i] = found.unwrap_or(Value::PosInf);
        }
        Ok(u)
    }

    /// `w[i] = min { v[k] : v[k] >= M[i,k] }`, `+inf` if empty.
    pub fn phase_w(&mut self, v: &[Value]) -> Result<Vec<Value>> {
        let n = self.m.n();
        let w = self.index.w();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&k| (v[k], k));

        let mut first_hit: Vec<Option<usize>> = vec![None; n];
        for l in 0..self.t {
            let bucket = &order[bucket_start(n, self.t, l)..bucket_start(n, self.t, l + 1)];
            let mut sliced = vec![Value::Fin(query_filler(w)); n];
            for &k in bucket {
                sliced[k] = Value::Fin(finitize(v[k], w, Role::Query));
            }
            let ans = self.whole.query(&sliced)?;
            self.counters.inner_queries += 1;
            for i in 0..n {
                if first_hit[i].is_none() && ans[i].is_one() {
                    first_hit[i] = Some(l);
                }
            }
        }
        let mut out = vec![Value::PosInf; n];
        for i in 0..n {
            let Some(l) = first_hit[i] else { continue };
            let bucket = &order[bucket_start(n, self.t, l)..bucket_start(n, self.t, l + 1)];
            let mut found = None;
            for &k in bucket {
                self.counters.scan_length += 1;
                if v[k] >= self.m.get(i, k) {
                    found = Some(v[k]);
                    break;
                }
            }
            debug_assert!(
                found.is_some(),
                "row {i}: query bucket {l} reported a hit but has none"
            );
            out[i] = found.unwrap_or(Value::PosInf);
        }
        Ok(out)
    }
}

impl OnlineSolver for MinMaxFromDom {
    fn kind(&self) -> ProblemKind {
        ProblemKind::MinMax
    }

    fn n(&self) -> usize {
        self.m.n()
    }

    fn query(&mut self, v: &[Value]) -> Result<Vec<Value>> {
        check_len(self.m.n(), v.len())?;
        self.cfg
            .check_query(v, ProblemKind::MinMax, self.m.n(), None)?;
        let u = self.phase_u(v)?;
        let w = self.phase_w(v)?;
        self.counters.queries += 1;
        Ok(u.into_iter().zip(w).map(|(a, b)| a.min(b)).collect())
    }

    fn counters(&self) -> &Counters {
        &self.counters
    }

    fn report(&self) -> CounterReport {
        let mut children: Vec<_> = self.slices.iter().map(|s| s.report()).collect();
        children.push(self.whole.report());
        CounterReport {
            solver: "minmax<-dom".into(),
            counters: self.counters,
            children,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Param;
    use crate::matrix::fin_vec;
    use crate::oracle::minmax_mv;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cfg_t(t: usize) -> ReductionConfig {
        ReductionConfig {
            t: Param::Fixed(t),
            ..Default::default()
        }
    }

    #[test]
    fn finitize_examples() {
        assert_eq!(finitize(Value::PosInf, 9, Role::Matrix), 29);
        assert_eq!(finitize(Value::NegInf, 9, Role::Matrix), -29);
        assert_eq!(finitize(Value::Fin(15), 9, Role::Query), 19);
        assert_eq!(finitize(Value::Fin(-15), 9, Role::Query), -19);
        for x in -9..=9 {
            assert_eq!(finitize(Value::Fin(x), 9, Role::Matrix), x);
            assert_eq!(finitize(Value::Fin(x), 9, Role::Query), x);
        }
    }

    #[test]
    fn finitize_preserves_every_comparison() {
        for w in 0..=4i64 {
            let matrix_side: Vec<Value> = (-w..=w)
                .map(Value::Fin)
                .chain([Value::PosInf, Value::NegInf])
                .collect();
            let query_side: Vec<Value> = (-(3 * w + 6)..=(3 * w + 6))
                .map(Value::Fin)
                .chain([Value::PosInf, Value::NegInf])
                .collect();
            for &a in &matrix_side {
                for &b in &query_side {
                    let before = a <= b;
                    let after = finitize(a, w, Role::Matrix) <= finitize(b, w, Role::Query);
                    assert_eq!(before, after, "w={w} a={a} b={b}");
                    assert!(matrix_filler(w) > finitize(b, w, Role::Query));
                    assert!(query_filler(w) < finitize(a, w, Role::Matrix));
                }
            }
        }
    }

    #[test]
    fn row_buckets_sort_and_split() {
        let m = SquareMatrix::from_fn(4, Domain::Integer, |i, k| {
            Value::Fin(if i == 0 { [7, 2, 9, 4][k] } else { 0 })
        });
        let idx = RowBucketIndex::build(&m, 2);
        assert_eq!(idx.bucket(0, 0), &[1, 3]);
        assert_eq!(idx.bucket(0, 1), &[0, 2]);
        let one = RowBucketIndex::build(&m, 1);
        assert_eq!(one.bucket(0, 0), &[1, 3, 0, 2]);
    }

    #[test]
    fn equal_values_may_straddle_buckets() {
        let m = SquareMatrix::from_fn(3, Domain::Integer, |_, k| Value::Fin([5, 1, 5][k]));
        let idx = RowBucketIndex::build(&m, 2);
        // Sorted (1,2) (5,1) (5,3); split 1 | 2.
        assert_eq!(idx.bucket(0, 0), &[1]);
        assert_eq!(idx.bucket(0, 1), &[0, 2]);
        let idx3 = RowBucketIndex::build(&m, 3);
        assert_eq!(idx3.bucket(0, 1), &[0]);
        assert_eq!(idx3.bucket(0, 2), &[2]);
    }

    #[test]
    fn bucket_sizes_balanced() {
        for n in 1..40 {
            for t in 1..=n + 2 {
                for l in 0..t {
                    let size = bucket_start(n, t, l + 1) - bucket_start(n, t, l);
                    assert!(size >= n / t && size <= n.div_ceil(t), "n={n} t={t} l={l}");
                }
                assert_eq!(bucket_start(n, t, t), n);
            }
        }
    }

    #[test]
    fn query_examples() {
        let m = SquareMatrix::from_rows(Domain::Integer, &[vec![1i64, 5], vec![7, 2]]);
        let mut s = MinMaxFromDom::new(&m, &Chain::naive(), &cfg_t(2)).unwrap();
        assert_eq!(s.query(&fin_vec(&[3, 4])).unwrap(), fin_vec(&[3, 4]));
        assert_eq!(s.query(&fin_vec(&[7, 2])).unwrap()[1], Value::Fin(2));
        // Query below every entry: answered by phase u alone.
        let v = fin_vec(&[-5, -5]);
        assert_eq!(s.phase_w(&v).unwrap(), vec![Value::PosInf; 2]);
        assert_eq!(s.query(&v).unwrap(), fin_vec(&[1, 2]));
    }

    fn random_value(rng: &mut ChaCha8Rng, hi: i64, inf_rate: f64) -> Value {
        if rng.gen_bool(inf_rate) {
            if rng.gen_bool(0.5) {
                Value::PosInf
            } else {
                Value::NegInf
            }
        } else {
            Value::Fin(rng.gen_range(-hi..=hi))
        }
    }

    #[test]
    fn matches_oracle_including_infinities() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for trial in 0..80 {
            let n = rng.gen_range(1..=14);
            let hi = if trial % 3 == 0 { 2 } else { 50 };
            let inf_rate = [0.0, 0.1, 0.4][trial % 3];
            let m = SquareMatrix::from_fn(n, Domain::Integer, |_, _| {
                random_value(&mut rng, hi, inf_rate)
            });
            for t in [1, 2, crate::config::ceil_sqrt(n), n] {
                let mut s = MinMaxFromDom::new(&m, &Chain::naive(), &cfg_t(t)).unwrap();
                for _ in 0..3 {
                    let v: Vec<Value> = (0..n)
                        .map(|_| random_value(&mut rng, hi + 3, inf_rate))
                        .collect();
                    let before = *s.counters();
                    assert_eq!(
                        s.query(&v).unwrap(),
                        minmax_mv(&m, &v).unwrap(),
                        "m={m:?} v={v:?}"
                    );
                    let d = *s.counters() - before;
                    assert_eq!(d.inner_queries, 2 * t as u64);
                    assert!(d.scan_length <= (2 * n * n.div_ceil(t)) as u64);
                }
            }
        }
    }

    #[test]
    fn phase_u_matches_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..40 {
            let n = rng.gen_range(1..=10);
            let m =
                SquareMatrix::from_fn(n, Domain::Integer, |_, _| Value::Fin(rng.gen_range(-6..=6)));
            let mut s = MinMaxFromDom::new(&m, &Chain::naive(), &cfg_t(3)).unwrap();
            let v: Vec<Value> = (0..n).map(|_| Value::Fin(rng.gen_range(-8..=8))).collect();
            let u = s.phase_u(&v).unwrap();
            for i in 0..n {
                let expect = (0..n)
                    .filter(|&k| m.get(i, k) >= v[k])
                    .map(|k| m.get(i, k))
                    .min()
                    .unwrap_or(Value::PosInf);
                assert_eq!(u[i], expect);
            }
        }
    }
}
