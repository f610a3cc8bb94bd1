//! Listing the candidate sets `C_i = { k : M^[i,k] + v^[k] <= u^[i] + 1 }`
//! of the rounded instance, one procedure per monotonicity case.

use crate::counters::Counters;
use crate::matrix::SquareMatrix;
use crate::problem::MonotonicityCase;

use super::multiset::OrderedMultiset;
use super::rmq::RangeMinIndex;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Candidates {
    /// Ascending 0-based column indices.
    Small(Vec<usize>),
    Oversize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateReport {
    /// `u^[i] = min_k M^[i,k] + v^[k]`.
    pub rounded_min: Vec<i64>,
    pub sets: Vec<Candidates>,
}

/// Maximal run of equal values `values[lo..=hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Block {
    pub value: i64,
    pub lo: usize,
    pub hi: usize,
}

pub fn constant_blocks(values: &[i64]) -> Vec<Block> {
    let mut out: Vec<Block> = Vec::new();
    for (k, &x) in values.iter().enumerate() {
        match out.last_mut() {
            Some(b) if b.value == x => b.hi = k,
            _ => out.push(Block {
                value: x,
                lo: k,
                hi: k,
            }),
        }
    }
    out
}

/// Sorted positions per value, indexed by value in `0..=bound`.
fn positions_by_value(values: &[i64], bound: i64) -> Vec<Vec<usize>> {
    let mut pos = vec![Vec::new(); bound as usize + 1];
    for (k, &x) in values.iter().enumerate() {
        pos[x as usize].push(k);
    }
    pos
}

/// Positions of `value` within `lo..=hi`.
fn positions_in(pos: &[Vec<usize>], value: i64, lo: usize, hi: usize) -> &[usize] {
    let Some(list) = usize::try_from(value).ok().and_then(|x| pos.get(x)) else {
        return &[];
    };
    let a = list.partition_point(|&k| k < lo);
    let b = list.partition_point(|&k| k <= hi);
    &list[a..b]
}

enum CaseState {
    Columns {
        /// `increases[i]`: columns with `M^[i,k] > M^[i-1,k]`.
        increases: Vec<Vec<usize>>,
    },
    AcrossQueries {
        trees: Vec<OrderedMultiset>,
        previous: Option<Vec<i64>>,
    },
    Rows {
        blocks: Vec<Vec<Block>>,
    },
    WithinQuery {
        rmq: Vec<RangeMinIndex>,
        positions: Vec<Vec<Vec<usize>>>,
    },
}

/// Candidate-set lister over the rounded matrix `M^ = floor(M / delta)`.
pub struct CandidateLister {
    n: usize,
    cap: usize,
    key_bound: i64,
    mhat: Vec<i64>,
    state: CaseState,
}

impl CandidateLister {
    /// `m` must be nonnegative, bounded by `key_bound * delta + delta - 1`
    /// and monotone as `case` requires; `cap` is the largest listed set.
    pub fn new(
        m: &SquareMatrix,
        case: MonotonicityCase,
        delta: usize,
        cap: usize,
        key_bound: i64,
    ) -> Self {
        let n = m.n();
        let d = delta as i64;
        let mhat: Vec<i64> = m.entries().iter().map(|x| x.expect_finite() / d).collect();
        assert!(
            mhat.iter().all(|&x| (0..=key_bound).contains(&x)),
            "rounded entries outside 0..={key_bound}"
        );
        let row = |i: usize| &mhat[i * n..(i + 1) * n];
        let state = match case {
            MonotonicityCase::Columns => CaseState::Columns {
                increases: (0..n)
                    .map(|i| {
                        if i == 0 {
                            return Vec::new();
                        }
                        (0..n).filter(|&k| row(i)[k] != row(i - 1)[k]).collect()
                    })
                    .collect(),
            },
            MonotonicityCase::AcrossQueries => CaseState::AcrossQueries {
                trees: Vec::new(),
                previous: None,
            },
            MonotonicityCase::Rows => CaseState::Rows {
                blocks: (0..n).map(|i| constant_blocks(row(i))).collect(),
            },
            MonotonicityCase::WithinQuery => CaseState::WithinQuery {
                rmq: (0..n).map(|i| RangeMinIndex::build(row(i))).collect(),
                positions: (0..n)
                    .map(|i| positions_by_value(row(i), key_bound))
                    .collect(),
            },
        };
        CandidateLister {
            n,
            cap,
            key_bound,
            mhat,
            state,
        }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn rounded_matrix(&self) -> &[i64] {
        &self.mhat
    }

    /// Lists every `C_i` for the rounded query `vhat`, which must lie in
    /// `0..=key_bound` and respect the monotonicity case (for the
    /// across-queries case: coordinatewise at least the previous `vhat`).
    pub fn list(&mut self, vhat: &[i64], counters: &mut Counters) -> CandidateReport {
        let n = self.n;
        assert_eq!(vhat.len(), n);
        assert!(
            vhat.iter().all(|&x| (0..=self.key_bound).contains(&x)),
            "rounded query outside 0..={}",
            self.key_bound
        );
        let cap = self.cap;
        let mhat = &self.mhat;
        let mut rounded_min = Vec::with_capacity(n);
        let mut sets = Vec::with_capacity(n);

        let from_tree = |tree: &OrderedMultiset, counters: &mut Counters| {
            let u = tree.min().expect("n > 0");
            let set = if tree.count_le(u + 1) > cap {
                Candidates::Oversize
            } else {
                let mut list = tree.enumerate_le(u + 1, cap);
                list.sort_unstable();
                counters.candidates_enumerated += list.len() as u64;
                Candidates::Small(list)
            };
            (u, set)
        };

        match &mut self.state {
            CaseState::Columns { increases } => {
                let mut tree = OrderedMultiset::new(2 * self.key_bound);
                for k in 0..n {
                    tree.insert(mhat[k] + vhat[k], k);
                }
                for i in 0..n {
                    if i > 0 {
                        for &k in &increases[i] {
                            tree.remove(mhat[(i - 1) * n + k] + vhat[k], k);
                            tree.insert(mhat[i * n + k] + vhat[k], k);
                            counters.multiset_updates += 1;
                        }
                    }
                    let (u, set) = from_tree(&tree, counters);
                    rounded_min.push(u);
                    sets.push(set);
                }
            }
            CaseState::AcrossQueries { trees, previous } => {
                match previous.as_deref() {
                    None => {
                        *trees = (0..n)
                            .map(|i| {
                                let mut t = OrderedMultiset::new(2 * self.key_bound);
                                for k in 0..n {
                                    t.insert(mhat[i * n + k] + vhat[k], k);
                                }
                                t
                            })
                            .collect();
                    }
                    Some(prev) => {
                        for k in 0..n {
                            assert!(vhat[k] >= prev[k], "rounded query decreased at {k}");
                            if vhat[k] == prev[k] {
                                continue;
                            }
                            for (i, tree) in trees.iter_mut().enumerate() {
                                tree.remove(mhat[i * n + k] + prev[k], k);
                                tree.insert(mhat[i * n + k] + vhat[k], k);
                                counters.multiset_updates += 1;
                            }
                        }
                    }
                }
                *previous = Some(vhat.to_vec());
                for tree in trees.iter() {
                    let (u, set) = from_tree(tree, counters);
                    rounded_min.push(u);
                    sets.push(set);
                }
            }
            CaseState::Rows { blocks } => {
                let rmq = RangeMinIndex::build(vhat);
                let pos = positions_by_value(vhat, self.key_bound);
                for row_blocks in blocks.iter() {
                    let mins: Vec<(Block, i64)> = row_blocks
                        .iter()
                        .map(|&b| (b, rmq.range_min(b.lo, b.hi).0))
                        .collect();
                    counters.rmq_queries += mins.len() as u64;
                    let (u, set) = collect_blocks(
                        &mins,
                        cap,
                        |value, b| positions_in(&pos, value - b.value, b.lo, b.hi),
                        counters,
                    );
                    rounded_min.push(u);
                    sets.push(set);
                }
            }
            CaseState::WithinQuery { rmq, positions } => {
                let vblocks = constant_blocks(vhat);
                for i in 0..n {
                    let mins: Vec<(Block, i64)> = vblocks
                        .iter()
                        .map(|&b| (b, rmq[i].range_min(b.lo, b.hi).0))
                        .collect();
                    counters.rmq_queries += mins.len() as u64;
                    let pos = &positions[i];
                    let (u, set) = collect_blocks(
                        &mins,
                        cap,
                        |value, b| positions_in(pos, value - b.value, b.lo, b.hi),
                        counters,
                    );
                    rounded_min.push(u);
                    sets.push(set);
                }
            }
        }
        CandidateReport { rounded_min, sets }
    }
}

/// Shared enumeration for the block-based cases. Each block has a constant
/// part `b.value` and a varying part whose minimum over the block is given;
/// `lookup(s, b)` returns the positions in `b` where the total equals `s`.
fn collect_blocks<'a>(
    mins: &[(Block, i64)],
    cap: usize,
    lookup: impl Fn(i64, Block) -> &'a [usize],
    counters: &mut Counters,
) -> (i64, Candidates) {
    let u = mins.iter().map(|&(b, m)| b.value + m).min().expect("n > 0");
    let mut parts: Vec<&[usize]> = Vec::new();
    let mut total = 0;
    for &(b, m) in mins {
        let s = b.value + m;
        if s > u + 1 {
            continue;
        }
        for target in s..=u + 1 {
            let found = lookup(target, b);
            total += found.len();
            if total > cap {
                return (u, Candidates::Oversize);
            }
            parts.push(found);
        }
    }
    let mut list: Vec<usize> = parts.concat();
    list.sort_unstable();
    counters.candidates_enumerated += list.len() as u64;
    (u, Candidates::Small(list))
}
