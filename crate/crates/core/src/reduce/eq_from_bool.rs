//! Exists-equality answered by `t` Boolean instances plus rare-value lists.
//!
//! For every column the `t` most frequent values get a Boolean slice
//! `M_l[i,k] = [M[i,k] = f_k(l)]`; a query coordinate equal to a frequent
//! value lights up the matching slice. Every other value of a column occurs
//! at most `n/(t+1)` times and is matched by walking its row list directly.

use std::collections::HashMap;

use crate::config::ReductionConfig;
use crate::counters::{CounterReport, Counters};
use crate::error::{check_len, Result};
use crate::matrix::{Domain, SquareMatrix};
use crate::problem::ProblemKind;
use crate::solver::{build_solver, Chain, OnlineSolver};
use crate::value::Value;

/// Per-column split of values into the `t` most frequent and the rest.
#[derive(Clone, Debug)]
pub struct FrequencyTable {
    t: usize,
    /// `frequent[k][l]` is the `(l+1)`-th most frequent value of column `k`;
    /// ties go to the smaller value, missing slots are `None`.
    frequent: Vec<Vec<Option<i64>>>,
    slot: Vec<HashMap<i64, usize>>,
    /// Rare value -> ascending 0-based rows holding it.
    rare: Vec<HashMap<i64, Vec<usize>>>,
}

impl FrequencyTable {
    pub fn build(m: &SquareMatrix, t: usize) -> Self {
        let n = m.n();
        let mut frequent = Vec::with_capacity(n);
        let mut slot = Vec::with_capacity(n);
        let mut rare = Vec::with_capacity(n);
        for k in 0..n {
            let mut rows_of: HashMap<i64, Vec<usize>> = HashMap::new();
            for i in 0..n {
                rows_of
                    .entry(m.get(i, k).expect_finite())
                    .or_default()
                    .push(i);
            }
            let mut by_freq: Vec<(i64, usize)> =
                rows_of.iter().map(|(&x, rows)| (x, rows.len())).collect();
            by_freq.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));

            let mut f = vec![None; t];
            let mut s = HashMap::new();
            for (l, &(x, _)) in by_freq.iter().take(t).enumerate() {
                f[l] = Some(x);
                s.insert(x, l);
                rows_of.remove(&x);
            }
            frequent.push(f);
            slot.push(s);
            rare.push(rows_of);
        }
        FrequencyTable {
            t,
            frequent,
            slot,
            rare,
        }
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn frequent(&self, k: usize) -> &[Option<i64>] {
        &self.frequent[k]
    }

    /// Slot of `x` among the frequent values of column `k`.
    pub fn slot(&self, k: usize, x: i64) -> Option<usize> {
        self.slot[k].get(&x).copied()
    }

    /// Rows where the rare value `x` occurs in column `k` (empty if `x` is
    /// frequent or absent).
    pub fn rare_rows(&self, k: usize, x: i64) -> &[usize] {
        self.rare[k].get(&x).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn rare_values(&self, k: usize) -> impl Iterator<Item = (i64, &[usize])> {
        self.rare[k].iter().map(|(&x, rows)| (x, rows.as_slice()))
    }

    /// Boolean slice `l`: `1` where the entry equals the column's `l`-th value.
    pub fn slice(&self, m: &SquareMatrix, l: usize) -> SquareMatrix {
        SquareMatrix::from_fn(m.n(), Domain::Boolean, |i, k| {
            Value::from_bool(self.frequent[k][l] == m.get(i, k).finite())
        })
    }
}

pub struct EqFromBool {
    m: SquareMatrix,
    table: FrequencyTable,
    inner: Vec<Box<dyn OnlineSolver>>,
    cfg: ReductionConfig,
    witnesses: Vec<Option<usize>>,
    counters: Counters,
}

impl EqFromBool {
    /// Preprocessing: frequency table, `t` Boolean slices and one inner
    /// Boolean instance per slice.
    pub fn new(m: &SquareMatrix, inner_chain: &Chain, cfg: &ReductionConfig) -> Result<Self> {
        let t = cfg.t_for(m.n());
        let table = FrequencyTable::build(m, t);
        let inner = (0..t)
            .map(|l| {
                build_solver(
                    ProblemKind::Boolean,
                    &table.slice(m, l),
                    inner_chain,
                    &cfg.child(l as u64),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(EqFromBool {
            m: m.clone(),
            table,
            inner,
            cfg: cfg.clone(),
            witnesses: Vec::new(),
            counters: Counters::default(),
        })
    }

    pub fn table(&self) -> &FrequencyTable {
        &self.table
    }
}

impl OnlineSolver for EqFromBool {
    fn kind(&self) -> ProblemKind {
        ProblemKind::ExistsEquality
    }

    fn n(&self) -> usize {
        self.m.n()
    }

    fn query(&mut self, v: &[Value]) -> Result<Vec<Value>> {
        let n = self.m.n();
        check_len(n, v.len())?;
        self.cfg
            .check_query(v, ProblemKind::ExistsEquality, n, None)?;
        let v: Vec<i64> = v.iter().map(|x| x.expect_finite()).collect();
        let track = self.cfg.track_witnesses;

        let mut out = vec![false; n];
        let mut witness: Vec<Option<usize>> = vec![None; n];
        let slots: Vec<Option<usize>> = (0..n).map(|k| self.table.slot(k, v[k])).collect();

        for (l, solver) in self.inner.iter_mut().enumerate() {
            let sliced: Vec<Value> = slots
                .iter()
                .map(|&s| Value::from_bool(s == Some(l)))
                .collect();
            let ans = solver.query(&sliced)?;
            self.counters.inner_queries += 1;
            for i in 0..n {
                if ans[i].is_one() && !out[i] {
                    out[i] = true;
                    if track {
                        witness[i] = solver.witnesses().and_then(|w| w[i]).or_else(|| {
                            (0..n).find(|&k| {
                                slots[k] == Some(l) && self.m.get(i, k) == Value::Fin(v[k])
                            })
                        });
                    }
                }
            }
        }

        for k in 0..n {
            if slots[k].is_some() {
                continue;
            }
            let rows = self.table.rare_rows(k, v[k]);
            self.counters.scan_length += rows.len() as u64;
            for &i in rows {
                if !out[i] {
                    out[i] = true;
                    witness[i] = Some(k);
                }
            }
        }

        if track {
            for i in (0..n).filter(|&i| out[i]) {
                self.counters.witness_checks += 1;
                let ok = matches!(witness[i], Some(k) if self.m.get(i, k) == Value::Fin(v[k]));
                if !ok {
                    self.counters.witness_failures += 1;
                }
            }
            self.witnesses = witness;
        }
        self.counters.queries += 1;
        Ok(out.into_iter().map(Value::from_bool).collect())
    }

    fn counters(&self) -> &Counters {
        &self.counters
    }

    fn report(&self) -> CounterReport {
        CounterReport {
            solver: "eq<-bool".into(),
            counters: self.counters,
            children: self.inner.iter().map(|s| s.report()).collect(),
        }
    }

    fn witnesses(&self) -> Option<&[Option<usize>]> {
        self.cfg
            .track_witnesses
            .then_some(self.witnesses.as_slice())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Param;
    use crate::matrix::fin_vec;
    use crate::oracle::eq_exists_mv;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cfg_t(t: usize) -> ReductionConfig {
        ReductionConfig {
            t: Param::Fixed(t),
            track_witnesses: true,
            ..Default::default()
        }
    }

    fn column_matrix(col: &[i64]) -> SquareMatrix {
        let n = col.len();
        SquareMatrix::from_fn(n, Domain::Integer, |i, _| Value::Fin(col[i]))
    }

    #[test]
    fn frequency_table_breaks_ties_by_value() {
        let m = column_matrix(&[5, 5, 7, 9]);
        let table = FrequencyTable::build(&m, 2);
        assert_eq!(table.frequent(0), &[Some(5), Some(7)]);
        let rare: Vec<_> = table.rare_values(0).collect();
        assert_eq!(rare, vec![(9, &[3usize][..])]);
    }

    #[test]
    fn frequency_table_all_distinct_with_t_equal_n() {
        let m = column_matrix(&[4, 1, 3, 2]);
        let table = FrequencyTable::build(&m, 4);
        assert_eq!(table.frequent(0), &[Some(1), Some(2), Some(3), Some(4)]);
        assert_eq!(table.rare_values(0).count(), 0);
    }

    #[test]
    fn frequency_table_constant_column() {
        let m = column_matrix(&[6, 6, 6]);
        let table = FrequencyTable::build(&m, 1);
        assert_eq!(table.frequent(0), &[Some(6)]);
        assert_eq!(table.rare_values(0).count(), 0);
        let wide = FrequencyTable::build(&m, 3);
        assert_eq!(wide.frequent(0), &[Some(6), None, None]);
    }

    #[test]
    fn slices_are_disjoint() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 9;
        let m = SquareMatrix::from_fn(n, Domain::Integer, |_, _| Value::Fin(rng.gen_range(0..4)));
        let table = FrequencyTable::build(&m, 3);
        let slices: Vec<_> = (0..3).map(|l| table.slice(&m, l)).collect();
        for i in 0..n {
            for k in 0..n {
                assert!(slices.iter().filter(|s| s.get(i, k).is_one()).count() <= 1);
            }
        }
    }

    #[test]
    fn query_examples() {
        let m = SquareMatrix::from_rows(Domain::Integer, &[vec![1i64, 2], vec![3, 4]]);
        let mut s = EqFromBool::new(&m, &Chain::naive(), &cfg_t(1)).unwrap();
        assert_eq!(s.query(&fin_vec(&[1, 4])).unwrap(), fin_vec(&[1, 1]));
        assert_eq!(s.query(&fin_vec(&[2, 3])).unwrap(), fin_vec(&[0, 0]));
        // A value absent from the column matches nothing.
        assert_eq!(s.query(&fin_vec(&[100, 100])).unwrap(), fin_vec(&[0, 0]));
        assert_eq!(s.counters().inner_queries, 3);
        assert_eq!(s.counters().witness_failures, 0);
    }

    #[test]
    fn matches_oracle_with_witnesses() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..60 {
            let n = rng.gen_range(2..=16);
            let hi = if trial % 2 == 0 { 3 } else { 40 };
            let m =
                SquareMatrix::from_fn(n, Domain::Integer, |_, _| Value::Fin(rng.gen_range(0..=hi)));
            for t in [1, 2, crate::config::ceil_sqrt(n), n] {
                let mut s = EqFromBool::new(&m, &Chain::naive(), &cfg_t(t)).unwrap();
                for _ in 0..4 {
                    let v: Vec<Value> = (0..n).map(|_| Value::Fin(rng.gen_range(0..=hi))).collect();
                    let before = *s.counters();
                    assert_eq!(s.query(&v).unwrap(), eq_exists_mv(&m, &v).unwrap());
                    let d = *s.counters() - before;
                    assert_eq!(d.inner_queries, t as u64);
                    assert!(d.scan_length <= (n * n.div_ceil(t)) as u64);
                    let w = s.witnesses().unwrap();
                    for i in 0..n {
                        if let Some(k) = w[i] {
                            assert_eq!(m.get(i, k), v[k]);
                        }
                    }
                }
                assert_eq!(s.counters().witness_failures, 0);
            }
        }
    }

    #[test]
    fn rejects_wrong_length() {
        let m = SquareMatrix::from_rows(Domain::Integer, &[vec![1i64, 2], vec![3, 4]]);
        let mut s = EqFromBool::new(&m, &Chain::naive(), &cfg_t(1)).unwrap();
        assert!(s.query(&fin_vec(&[1])).is_err());
    }
}
