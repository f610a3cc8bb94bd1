//! Tunables shared by every reduction in a chain.

use crate::error::Result;
use crate::matrix::SquareMatrix;
use crate::problem::{validate_query_within, validate_within, ProblemKind, DEFAULT_BOUND_C};
use crate::value::{Value, FINITE_LIMIT};

/// Magnitude limit for finite entries of instances created by a reduction.
///
/// Finitizing infinities multiplies the largest magnitude by at most four,
/// so instances derived from user input stay below this bound.
pub const INNER_LIMIT: i64 = FINITE_LIMIT << 4;

/// A positive integer parameter, or "pick the default for this `n`".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Param {
    #[default]
    Auto,
    Fixed(usize),
}

/// Size of the random column sample used by the min-plus reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum HittingSize {
    /// `ceil(3 * delta * ln n)` columns sampled with replacement.
    #[default]
    Auto,
    Fixed(usize),
    /// Every column exactly once; removes all randomness.
    Full,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionConfig {
    /// Number of frequent values / buckets in the equality and min-max reductions.
    pub t: Param,
    /// Rounding granularity in the min-plus reduction.
    pub delta: Param,
    pub hitting: HittingSize,
    pub seed: u64,
    /// Min-plus inputs are accepted in `[0, bound_c * n]`.
    pub bound_c: i64,
    /// Independent copies of the randomized reduction, combined by majority vote.
    pub repeats: usize,
    /// Record and check per-output witnesses where a solver can produce them.
    pub track_witnesses: bool,
    /// Largest accepted magnitude of a finite entry.
    pub value_limit: i64,
}

impl Default for ReductionConfig {
    fn default() -> Self {
        ReductionConfig {
            t: Param::Auto,
            delta: Param::Auto,
            hitting: HittingSize::Auto,
            seed: 0,
            bound_c: DEFAULT_BOUND_C,
            repeats: 1,
            track_witnesses: false,
            value_limit: FINITE_LIMIT,
        }
    }
}

/// Smallest `r` with `r * r >= n`.
pub fn ceil_sqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r < n {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r
}

/// Smallest `r` with `r^3 >= n`.
pub fn ceil_cbrt(n: usize) -> usize {
    let mut r = (n as f64).cbrt() as usize;
    while r * r * r < n {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r
}

impl ReductionConfig {
    pub fn with_seed(seed: u64) -> Self {
        ReductionConfig {
            seed,
            ..Default::default()
        }
    }

    pub fn t_for(&self, n: usize) -> usize {
        match self.t {
            Param::Auto => ceil_sqrt(n).max(1),
            Param::Fixed(t) => t.max(1),
        }
    }

    pub fn delta_for(&self, n: usize) -> usize {
        match self.delta {
            Param::Auto => ceil_cbrt(n).max(1),
            Param::Fixed(d) => d.max(1),
        }
    }

    /// Default hitting-set size `ceil(3 * delta * ln n)`.
    pub fn hitting_for(&self, n: usize, delta: usize) -> usize {
        match self.hitting {
            HittingSize::Auto => (3.0 * delta as f64 * (n as f64).ln()).ceil() as usize,
            HittingSize::Fixed(r) => r,
            HittingSize::Full => n,
        }
    }

    /// Configuration handed to the `index`-th inner instance: identical
    /// tunables with an independent seed.
    pub fn child(&self, index: u64) -> Self {
        ReductionConfig {
            seed: mix_seed(self.seed, index),
            value_limit: INNER_LIMIT,
            ..self.clone()
        }
    }

    pub fn check_matrix(&self, m: &SquareMatrix, kind: ProblemKind) -> Result<()> {
        Ok(validate_within(m, kind, self.bound_c, self.value_limit)?)
    }

    pub fn check_query(
        &self,
        v: &[Value],
        kind: ProblemKind,
        n: usize,
        previous: Option<&[Value]>,
    ) -> Result<()> {
        Ok(validate_query_within(
            v,
            kind,
            n,
            self.bound_c,
            self.value_limit,
            previous,
        )?)
    }
}

/// splitmix64 finalizer over `seed + index`.
pub fn mix_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
