//! Operation counts kept by every solver.
//!
//! Each solver owns one [`Counters`] value for its own work; the work of the
//! inner instances it drives is reported through [`CounterReport::children`].
//! Counts only grow while an instance lives.

use std::fmt;
use std::ops::Sub;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counters {
    /// Queries answered by this solver.
    pub queries: u64,
    /// Queries this solver issued to its inner instances.
    pub inner_queries: u64,
    /// Entries examined while scanning rare-value lists or buckets.
    pub scan_length: u64,
    /// Key changes applied to ordered multisets after their initial build.
    pub multiset_updates: u64,
    /// Candidate indices enumerated while listing candidate sets.
    pub candidates_enumerated: u64,
    pub rmq_queries: u64,
    pub witness_checks: u64,
    pub witness_failures: u64,
}

impl Sub for Counters {
    type Output = Counters;

    fn sub(self, rhs: Counters) -> Counters {
        Counters {
            queries: self.queries - rhs.queries,
            inner_queries: self.inner_queries - rhs.inner_queries,
            scan_length: self.scan_length - rhs.scan_length,
            multiset_updates: self.multiset_updates - rhs.multiset_updates,
            candidates_enumerated: self.candidates_enumerated - rhs.candidates_enumerated,
            rmq_queries: self.rmq_queries - rhs.rmq_queries,
            witness_checks: self.witness_checks - rhs.witness_checks,
            witness_failures: self.witness_failures - rhs.witness_failures,
        }
    }
}

impl Counters {
    pub fn add(&mut self, other: &Counters) {
        self.queries += other.queries;
        self.inner_queries += other.inner_queries;
        self.scan_length += other.scan_length;
        self.multiset_updates += other.multiset_updates;
        self.candidates_enumerated += other.candidates_enumerated;
        self.rmq_queries += other.rmq_queries;
        self.witness_checks += other.witness_checks;
        self.witness_failures += other.witness_failures;
    }
}

impl fmt::Display for Counters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "queries={} inner_queries={} scan_length={} multiset_updates={} \
             candidates={} rmq_queries={} witness_checks={} witness_failures={}",
            self.queries,
            self.inner_queries,
            self.scan_length,
            self.multiset_updates,
            self.candidates_enumerated,
            self.rmq_queries,
            self.witness_checks,
            self.witness_failures
        )
    }
}

/// Counters of a solver together with those of its inner instances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterReport {
    pub solver: String,
    pub counters: Counters,
    pub children: Vec<CounterReport>,
}

impl CounterReport {
    pub fn leaf(solver: impl Into<String>, counters: Counters) -> Self {
        CounterReport {
            solver: solver.into(),
            counters,
            children: Vec::new(),
        }
    }

    /// Sum over this node and all descendants.
    pub fn total(&self) -> Counters {
        let mut acc = self.counters;
        for c in &self.children {
            acc.add(&c.total());
        }
        acc
    }

    /// Sum of witness failures anywhere in the tree.
    pub fn witness_failures(&self) -> u64 {
        self.total().witness_failures
    }

    fn write_indented(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        writeln!(
            f,
            "{:indent$}{}: {}",
            "",
            self.solver,
            self.counters,
            indent = depth * 2
        )?;
        // Inner instances of the same solver type are summarized as one line.
        let mut groups: Vec<(String, usize, Counters, Option<&CounterReport>)> = Vec::new();
        for c in &self.children {
            match groups.iter_mut().find(|g| g.0 == c.solver) {
                Some(g) => {
                    g.1 += 1;
                    g.2.add(&c.counters);
                }
                None => groups.push((c.solver.clone(), 1, c.counters, Some(c))),
            }
        }
        for (name, count, counters, first) in groups {
            if count == 1 {
                first.unwrap().write_indented(f, depth + 1)?;
            } else {
                writeln!(
                    f,
                    "{:indent$}{} x{}: {}",
                    "",
                    name,
                    count,
                    counters,
                    indent = (depth + 1) * 2
                )?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for CounterReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_indented(f, 0)
    }
}
