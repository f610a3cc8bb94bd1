//! The six online products and the domain checks each one imposes.

use std::fmt;
use std::str::FromStr;

use crate::matrix::{Domain, SquareMatrix};
use crate::value::{Value, FINITE_LIMIT};

/// Default multiplier `c` in the relaxed bound `[0, c*n]` for min-plus inputs.
pub const DEFAULT_BOUND_C: i64 = 4;

/// Which of the four monotonicity guarantees a min-plus instance carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MonotonicityCase {
    /// Every row of the matrix is nondecreasing.
    Rows,
    /// Every column of the matrix is nondecreasing.
    Columns,
    /// Every query vector is nondecreasing in its index.
    WithinQuery,
    /// Each coordinate of the query is nondecreasing over the stream.
    AcrossQueries,
}

impl MonotonicityCase {
    pub const ALL: [MonotonicityCase; 4] = [
        MonotonicityCase::Rows,
        MonotonicityCase::Columns,
        MonotonicityCase::WithinQuery,
        MonotonicityCase::AcrossQueries,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MonotonicityCase::Rows => "rows",
            MonotonicityCase::Columns => "cols",
            MonotonicityCase::WithinQuery => "query",
            MonotonicityCase::AcrossQueries => "stream",
        }
    }
}

impl FromStr for MonotonicityCase {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MonotonicityCase::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown monotonicity case `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProblemKind {
    Boolean,
    ExistsEquality,
    ExistsDominance,
    MinWitness,
    MinMax,
    BoundedMonotoneMinPlus(MonotonicityCase),
}

/// A problem family without the min-plus monotonicity parameter; used for
/// matching reduction signatures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Bool,
    Eq,
    Dom,
    MinWit,
    MinMax,
    Bmmp,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Bool,
        Family::Eq,
        Family::Dom,
        Family::MinWit,
        Family::MinMax,
        Family::Bmmp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Bool => "bool",
            Family::Eq => "eq",
            Family::Dom => "dom",
            Family::MinWit => "minwit",
            Family::MinMax => "minmax",
            Family::Bmmp => "bmmp",
        }
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown problem `{s}`"))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl ProblemKind {
    pub fn family(self) -> Family {
        match self {
            ProblemKind::Boolean => Family::Bool,
            ProblemKind::ExistsEquality => Family::Eq,
            ProblemKind::ExistsDominance => Family::Dom,
            ProblemKind::MinWitness => Family::MinWit,
            ProblemKind::MinMax => Family::MinMax,
            ProblemKind::BoundedMonotoneMinPlus(_) => Family::Bmmp,
        }
    }

    pub fn monotonicity(self) -> Option<MonotonicityCase> {
        match self {
            ProblemKind::BoundedMonotoneMinPlus(c) => Some(c),
            _ => None,
        }
    }

    /// Builds a kind from its family; `case` must be given exactly for min-plus.
    pub fn from_family(family: Family, case: Option<MonotonicityCase>) -> Result<Self, String> {
        match (family, case) {
            (Family::Bmmp, Some(c)) => Ok(ProblemKind::BoundedMonotoneMinPlus(c)),
            (Family::Bmmp, None) => Err("bmmp requires a monotonicity case".into()),
            (_, Some(_)) => Err(format!("{family} does not take a monotonicity case")),
            (Family::Bool, None) => Ok(ProblemKind::Boolean),
            (Family::Eq, None) => Ok(ProblemKind::ExistsEquality),
            (Family::Dom, None) => Ok(ProblemKind::ExistsDominance),
            (Family::MinWit, None) => Ok(ProblemKind::MinWitness),
            (Family::MinMax, None) => Ok(ProblemKind::MinMax),
        }
    }

    pub fn input_domain(self) -> Domain {
        match self {
            ProblemKind::Boolean | ProblemKind::MinWitness => Domain::Boolean,
            ProblemKind::ExistsEquality | ProblemKind::ExistsDominance | ProblemKind::MinMax => {
                Domain::Integer
            }
            ProblemKind::BoundedMonotoneMinPlus(_) => Domain::Bounded,
        }
    }

    /// Whether `+inf`/`-inf` may appear in matrix and query entries.
    pub fn allows_infinity(self) -> bool {
        matches!(self, ProblemKind::ExistsDominance | ProblemKind::MinMax)
    }

    /// Whether answers are 0/1 vectors.
    pub fn boolean_output(self) -> bool {
        matches!(
            self,
            ProblemKind::Boolean | ProblemKind::ExistsEquality | ProblemKind::ExistsDominance
        )
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemKind::BoundedMonotoneMinPlus(c) => write!(f, "bmmp[{}]", c.name()),
            other => f.write_str(other.family().name()),
        }
    }
}

/// Where a validation failure occurred. Indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Matrix { row: usize, col: usize },
    Query { index: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reason {
    NotBoolean(Value),
    Infinite(Value),
    OutOfRange { value: Value, lo: i64, hi: i64 },
    DecreasingRow,
    DecreasingColumn,
    DecreasingQuery,
    DecreasingAcrossQueries { previous: Value },
    Length { expected: usize, got: usize },
}

/// The first offending entry found by [`validate`] or [`validate_query`].
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct Violation {
    pub at: Location,
    pub reason: Reason,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.at {
            Location::Matrix { row, col } => write!(f, "matrix entry ({row},{col}): ")?,
            Location::Query { index } => write!(f, "query entry {index}: ")?,
        }
        match &self.reason {
            Reason::NotBoolean(x) => write!(f, "{x} is not 0 or 1"),
            Reason::Infinite(x) => write!(f, "{x} is not allowed here"),
            Reason::OutOfRange { value, lo, hi } => write!(f, "{value} outside [{lo}, {hi}]"),
            Reason::DecreasingRow => f.write_str("row decreases"),
            Reason::DecreasingColumn => f.write_str("column decreases"),
            Reason::DecreasingQuery => f.write_str("query vector decreases"),
            Reason::DecreasingAcrossQueries { previous } => {
                write!(f, "smaller than previous query's {previous}")
            }
            Reason::Length { expected, got } => write!(f, "length {got}, expected {expected}"),
        }
    }
}

fn check_entry(kind: ProblemKind, x: Value, hi: i64, limit: i64) -> Result<(), Reason> {
    match kind.input_domain() {
        Domain::Boolean => {
            if x == Value::ZERO || x == Value::ONE {
                Ok(())
            } else {
                Err(Reason::NotBoolean(x))
            }
        }
        Domain::Integer => match x {
            Value::Fin(v) if v.abs() <= limit => Ok(()),
            Value::Fin(_) => Err(Reason::OutOfRange {
                value: x,
                lo: -limit,
                hi: limit,
            }),
            _ if kind.allows_infinity() => Ok(()),
            _ => Err(Reason::Infinite(x)),
        },
        Domain::Bounded => match x {
            Value::Fin(v) if (0..=hi).contains(&v) => Ok(()),
            Value::Fin(_) => Err(Reason::OutOfRange {
                value: x,
                lo: 0,
                hi,
            }),
            _ => Err(Reason::Infinite(x)),
        },
    }
}

/// Validates a matrix against `kind` with the default bound constant.
pub fn validate(m: &SquareMatrix, kind: ProblemKind) -> Result<(), Violation> {
    validate_with_bound(m, kind, DEFAULT_BOUND_C)
}

/// Validates a matrix; min-plus entries must lie in `[0, bound_c * n]` and
/// satisfy the declared row/column monotonicity.
pub fn validate_with_bound(
    m: &SquareMatrix,
    kind: ProblemKind,
    bound_c: i64,
) -> Result<(), Violation> {
    validate_within(m, kind, bound_c, FINITE_LIMIT)
}

/// As [`validate_with_bound`] with an explicit magnitude limit for finite
/// integer entries.
pub fn validate_within(
    m: &SquareMatrix,
    kind: ProblemKind,
    bound_c: i64,
    limit: i64,
) -> Result<(), Violation> {
    let n = m.n();
    let hi = bound_c.saturating_mul(n as i64);
    for i in 0..n {
        for k in 0..n {
            let at = Location::Matrix {
                row: i + 1,
                col: k + 1,
            };
            check_entry(kind, m.get(i, k), hi, limit).map_err(|reason| Violation { at, reason })?;
            match kind.monotonicity() {
                Some(MonotonicityCase::Rows) if k > 0 && m.get(i, k) < m.get(i, k - 1) => {
                    return Err(Violation {
                        at,
                        reason: Reason::DecreasingRow,
                    })
                }
                Some(MonotonicityCase::Columns) if i > 0 && m.get(i, k) < m.get(i - 1, k) => {
                    return Err(Violation {
                        at,
                        reason: Reason::DecreasingColumn,
                    })
                }
                _ => {}
            }
        }
    }
    Ok(())
}

/// Validates one query vector. `previous` is the prior query of the same
/// stream, needed for the across-queries monotonicity case.
pub fn validate_query(
    v: &[Value],
    kind: ProblemKind,
    n: usize,
    bound_c: i64,
    previous: Option<&[Value]>,
) -> Result<(), Violation> {
    validate_query_within(v, kind, n, bound_c, FINITE_LIMIT, previous)
}

pub fn validate_query_within(
    v: &[Value],
    kind: ProblemKind,
    n: usize,
    bound_c: i64,
    limit: i64,
    previous: Option<&[Value]>,
) -> Result<(), Violation> {
    if v.len() != n {
        return Err(Violation {
            at: Location::Query {
                index: v.len().min(n),
            },
            reason: Reason::Length {
                expected: n,
                got: v.len(),
            },
        });
    }
    let hi = bound_c.saturating_mul(n as i64);
    for (k, &x) in v.iter().enumerate() {
        let at = Location::Query { index: k + 1 };
        check_entry(kind, x, hi, limit).map_err(|reason| Violation { at, reason })?;
        match kind.monotonicity() {
            Some(MonotonicityCase::WithinQuery) if k > 0 && x < v[k - 1] => {
                return Err(Violation {
                    at,
                    reason: Reason::DecreasingQuery,
                })
            }
            Some(MonotonicityCase::AcrossQueries) => {
                if let Some(prev) = previous {
                    if x < prev[k] {
                        return Err(Violation {
                            at,
                            reason: Reason::DecreasingAcrossQueries { previous: prev[k] },
                        });
                    }
                }
            }
            _ => {}
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows_case() -> ProblemKind {
        ProblemKind::BoundedMonotoneMinPlus(MonotonicityCase::Rows)
    }

    #[test]
    fn boolean_rejects_two() {
        let m = SquareMatrix::from_rows(Domain::Boolean, &[vec![0i64, 1], vec![2, 0]]);
        let err = validate(&m, ProblemKind::Boolean).unwrap_err();
        assert_eq!(err.at, Location::Matrix { row: 2, col: 1 });
        assert_eq!(err.reason, Reason::NotBoolean(Value::Fin(2)));
    }

    #[test]
    fn rows_case_accepts_nondecreasing_rows() {
        let m = SquareMatrix::from_rows(Domain::Bounded, &[vec![1i64, 2], vec![5, 5]]);
        assert!(validate(&m, rows_case()).is_ok());
    }

    #[test]
    fn rows_case_reports_first_decrease() {
        let m = SquareMatrix::from_rows(Domain::Bounded, &[vec![2i64, 1], vec![5, 5]]);
        let err = validate(&m, rows_case()).unwrap_err();
        assert_eq!(err.at, Location::Matrix { row: 1, col: 2 });
        assert_eq!(err.reason, Reason::DecreasingRow);
    }

    #[test]
    fn columns_case() {
        let kind = ProblemKind::BoundedMonotoneMinPlus(MonotonicityCase::Columns);
        let ok = SquareMatrix::from_rows(Domain::Bounded, &[vec![1i64, 7], vec![1, 8]]);
        assert!(validate(&ok, kind).is_ok());
        let bad = SquareMatrix::from_rows(Domain::Bounded, &[vec![1i64, 7], vec![1, 6]]);
        assert_eq!(
            validate(&bad, kind).unwrap_err().at,
            Location::Matrix { row: 2, col: 2 }
        );
    }

    #[test]
    fn bounded_range_scales_with_c() {
        let m = SquareMatrix::from_rows(Domain::Bounded, &[vec![0i64, 8], vec![0, 8]]);
        assert!(validate_with_bound(&m, rows_case(), 4).is_ok());
        assert!(validate_with_bound(&m, rows_case(), 3).is_err());
        let neg = SquareMatrix::from_rows(Domain::Bounded, &[vec![-1i64, 0], vec![0, 0]]);
        assert!(validate(&neg, rows_case()).is_err());
    }

    #[test]
    fn infinities_only_where_permitted() {
        let m = SquareMatrix::from_rows(
            Domain::Integer,
            &[
                vec![Value::PosInf, Value::Fin(0)],
                vec![Value::NegInf, Value::Fin(3)],
            ],
        );
        assert!(validate(&m, ProblemKind::MinMax).is_ok());
        assert!(validate(&m, ProblemKind::ExistsDominance).is_ok());
        assert!(validate(&m, ProblemKind::ExistsEquality).is_err());
    }

    #[test]
    fn finite_limit_enforced() {
        let m = SquareMatrix::from_rows(Domain::Integer, &[vec![FINITE_LIMIT + 1]]);
        assert!(matches!(
            validate(&m, ProblemKind::ExistsEquality)
                .unwrap_err()
                .reason,
            Reason::OutOfRange { .. }
        ));
    }

    #[test]
    fn query_monotonicity() {
        let within = ProblemKind::BoundedMonotoneMinPlus(MonotonicityCase::WithinQuery);
        assert!(validate_query(&crate::fin_vec(&[1, 1, 2]), within, 3, 4, None).is_ok());
        assert!(validate_query(&crate::fin_vec(&[1, 0, 2]), within, 3, 4, None).is_err());

        let across = ProblemKind::BoundedMonotoneMinPlus(MonotonicityCase::AcrossQueries);
        let prev = crate::fin_vec(&[1, 5, 2]);
        assert!(validate_query(&crate::fin_vec(&[1, 5, 3]), across, 3, 4, Some(&prev)).is_ok());
        let err =
            validate_query(&crate::fin_vec(&[1, 4, 3]), across, 3, 4, Some(&prev)).unwrap_err();
        assert_eq!(err.at, Location::Query { index: 2 });
    }

    #[test]
    fn query_length() {
        let err = validate_query(
            &crate::fin_vec(&[1]),
            ProblemKind::ExistsEquality,
            2,
            4,
            None,
        )
        .unwrap_err();
        assert!(matches!(
            err.reason,
            Reason::Length {
                expected: 2,
                got: 1
            }
        ));
    }
}
