//! Naive reference products and brute-force helpers.
//!
//! Everything here evaluates the defining formulas directly in `O(n^2)` per
//! query and serves as ground truth for the reductions.

use crate::config::ReductionConfig;
use crate::counters::{CounterReport, Counters};
use crate::error::{check_len, Result};
use crate::matrix::SquareMatrix;
use crate::problem::ProblemKind;
use crate::solver::OnlineSolver;
use crate::value::Value;

fn first_witness(row: &[Value], v: &[Value], pred: impl Fn(Value, Value) -> bool) -> Option<usize> {
    row.iter().zip(v).position(|(&a, &b)| pred(a, b))
}

fn existence(
    m: &SquareMatrix,
    v: &[Value],
    pred: impl Fn(Value, Value) -> bool + Copy,
) -> Result<Vec<Value>> {
    check_len(m.n(), v.len())?;
    Ok(m.rows()
        .map(|row| Value::from_bool(first_witness(row, v, pred).is_some()))
        .collect())
}

/// Boolean product: `out[i] = OR_k (M[i,k] AND v[k])`.
pub fn bool_mv(m: &SquareMatrix, v: &[Value]) -> Result<Vec<Value>> {
    existence(m, v, |a, b| a.is_one() && b.is_one())
}

/// `out[i] = 1` iff `M[i,k] = v[k]` for some `k`.
pub fn eq_exists_mv(m: &SquareMatrix, v: &[Value]) -> Result<Vec<Value>> {
    existence(m, v, |a, b| a == b)
}

/// `out[i] = 1` iff `M[i,k] <= v[k]` for some `k`, in extended order.
pub fn dom_exists_mv(m: &SquareMatrix, v: &[Value]) -> Result<Vec<Value>> {
    existence(m, v, |a, b| a <= b)
}

/// Smallest 1-based `k` with `M[i,k] = v[k] = 1`, or `+inf`.
pub fn minwitness_mv(m: &SquareMatrix, v: &[Value]) -> Result<Vec<Value>> {
    check_len(m.n(), v.len())?;
    Ok(m.rows()
        .map(
            |row| match first_witness(row, v, |a, b| a.is_one() && b.is_one()) {
                Some(k) => Value::Fin(k as i64 + 1),
                None => Value::PosInf,
            },
        )
        .collect())
}

/// `out[i] = min_k max(M[i,k], v[k])`.
pub fn minmax_mv(m: &SquareMatrix, v: &[Value]) -> Result<Vec<Value>> {
    check_len(m.n(), v.len())?;
    Ok(m.rows()
        .map(|row| {
            row.iter()
                .zip(v)
                .map(|(&a, &b)| a.max(b))
                .min()
                .expect("n > 0")
        })
        .collect())
}

/// `out[i] = min_k (M[i,k] + v[k])`, where any sum involving `+inf` is `+inf`.
pub fn minplus_mv(m: &SquareMatrix, v: &[Value]) -> Result<Vec<Value>> {
    check_len(m.n(), v.len())?;
    Ok(m.rows()
        .map(|row| {
            row.iter()
                .zip(v)
                .map(|(&a, &b)| a.saturating_add(b))
                .min()
                .expect("n > 0")
        })
        .collect())
}

/// The product that defines `kind`.
pub fn product(kind: ProblemKind, m: &SquareMatrix, v: &[Value]) -> Result<Vec<Value>> {
    match kind {
        ProblemKind::Boolean => bool_mv(m, v),
        ProblemKind::ExistsEquality => eq_exists_mv(m, v),
        ProblemKind::ExistsDominance => dom_exists_mv(m, v),
        ProblemKind::MinWitness => minwitness_mv(m, v),
        ProblemKind::MinMax => minmax_mv(m, v),
        ProblemKind::BoundedMonotoneMinPlus(_) => minplus_mv(m, v),
    }
}

/// Candidate set of row `i` (0-based) by full enumeration: all 0-based `k`
/// whose rounded sum `floor(M[i,k]/d) + floor(v[k]/d)` is within one of the
/// rounded minimum.
pub fn candidate_set_bruteforce(
    m: &SquareMatrix,
    v: &[Value],
    delta: usize,
    i: usize,
) -> Vec<usize> {
    let d = delta as i64;
    let sums: Vec<i64> = (0..m.n())
        .map(|k| m.get(i, k).expect_finite().div_euclid(d) + v[k].expect_finite().div_euclid(d))
        .collect();
    let min = *sums.iter().min().expect("n > 0");
    sums.iter()
        .enumerate()
        .filter(|&(_, &s)| s == min || s == min + 1)
        .map(|(k, _)| k)
        .collect()
}

/// `true` iff some bit position `l < bits` has bit `l` of `a` clear, bit `l`
/// of `b` set, and `a`, `b` agreeing above `l`. For `a, b < 2^bits` this is
/// exactly `a < b`.
pub fn bit_trick_predicate(a: u64, b: u64, bits: u32) -> bool {
    (0..bits).any(|l| (a >> l) & 1 == 0 && (b >> l) & 1 == 1 && (a >> (l + 1)) == (b >> (l + 1)))
}

/// Reference solver: stores the matrix and evaluates the product per query.
pub struct NaiveSolver {
    kind: ProblemKind,
    m: SquareMatrix,
    cfg: ReductionConfig,
    previous: Option<Vec<Value>>,
    witnesses: Vec<Option<usize>>,
    counters: Counters,
}

impl NaiveSolver {
    pub fn new(kind: ProblemKind, m: SquareMatrix, cfg: &ReductionConfig) -> Self {
        NaiveSolver {
            kind,
            m,
            cfg: cfg.clone(),
            previous: None,
            witnesses: Vec::new(),
            counters: Counters::default(),
        }
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.m
    }
}

impl OnlineSolver for NaiveSolver {
    fn kind(&self) -> ProblemKind {
        self.kind
    }

    fn n(&self) -> usize {
        self.m.n()
    }

    fn query(&mut self, v: &[Value]) -> Result<Vec<Value>> {
        self.cfg
            .check_query(v, self.kind, self.m.n(), self.previous.as_deref())?;
        let pred: Option<fn(Value, Value) -> bool> = match self.kind {
            ProblemKind::Boolean => Some(|a, b| a.is_one() && b.is_one()),
            ProblemKind::ExistsEquality => Some(|a, b| a == b),
            ProblemKind::ExistsDominance => Some(|a, b| a <= b),
            _ => None,
        };
        let out = match pred {
            Some(p) => {
                self.witnesses = self.m.rows().map(|row| first_witness(row, v, p)).collect();
                self.witnesses
                    .iter()
                    .map(|w| Value::from_bool(w.is_some()))
                    .collect()
            }
            None => product(self.kind, &self.m, v)?,
        };
        if self.kind.monotonicity().is_some() {
            self.previous = Some(v.to_vec());
        }
        self.counters.queries += 1;
        Ok(out)
    }

    fn counters(&self) -> &Counters {
        &self.counters
    }

    fn report(&self) -> CounterReport {
        CounterReport::leaf(format!("naive {}", self.kind), self.counters)
    }

    fn witnesses(&self) -> Option<&[Option<usize>]> {
        if self.kind.boolean_output() {
            Some(&self.witnesses)
        } else {
            None
        }
    }
}
