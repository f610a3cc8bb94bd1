//! Instance and answer text formats.
//!
//! ```text
//! OMV 1
//! problem bmmp
//! n 2
//! monotone rows
//! 1 2
//! 3 4
//! queries 1
//! 0 5
//! ```
//!
//! Answer files hold one line of `n` values per query. `inf` and `-inf`
//! stand for the infinities.

use std::fmt::Write as _;

use omv_core::harness::Instance;
use omv_core::problem::DEFAULT_BOUND_C;
use omv_core::problem::{validate, validate_query};
use omv_core::{Family, MonotonicityCase, ProblemKind, SquareMatrix, Value, Violation};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid {what}: {violation}")]
    Invalid { what: String, violation: Violation },
}

fn parse_err(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        msg: msg.into(),
    }
}

/// Header and matrix of an instance, without the queries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Header {
    pub kind: ProblemKind,
    pub matrix: SquareMatrix,
}

/// Line source that skips blank lines and remembers line numbers.
pub struct Lines<I> {
    inner: I,
    line: usize,
}

impl<I: Iterator<Item = std::io::Result<String>>> Lines<I> {
    pub fn new(inner: I) -> Self {
        Lines { inner, line: 0 }
    }

    pub fn line(&self) -> usize {
        self.line
    }

    /// Next nonblank line, trimmed.
    pub fn next_line(&mut self) -> Result<Option<String>, FormatError> {
        for l in self.inner.by_ref() {
            self.line += 1;
            let l = l.map_err(|e| parse_err(self.line, e.to_string()))?;
            let t = l.trim();
            if !t.is_empty() {
                return Ok(Some(t.to_string()));
            }
        }
        Ok(None)
    }

    fn expect_line(&mut self, what: &str) -> Result<String, FormatError> {
        self.next_line()?.ok_or_else(|| {
            parse_err(
                self.line + 1,
                format!("expected {what}, found end of input"),
            )
        })
    }

    fn keyword(&mut self, key: &str) -> Result<String, FormatError> {
        let l = self.expect_line(&format!("`{key} ...`"))?;
        match l.split_once(char::is_whitespace) {
            Some((k, rest)) if k == key => Ok(rest.trim().to_string()),
            _ => Err(parse_err(
                self.line,
                format!("expected `{key} ...`, found `{l}`"),
            )),
        }
    }
}

pub fn parse_values(text: &str, n: usize, line: usize) -> Result<Vec<Value>, FormatError> {
    let values = text
        .split_whitespace()
        .map(|tok| {
            tok.parse::<Value>()
                .map_err(|e| parse_err(line, format!("bad value `{tok}`: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if values.len() != n {
        return Err(parse_err(
            line,
            format!("expected {n} values, found {}", values.len()),
        ));
    }
    Ok(values)
}

pub fn format_values(values: &[Value]) -> String {
    let mut s = String::new();
    for (i, x) in values.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        write!(s, "{x}").expect("writing to a String");
    }
    s
}

/// Reads `OMV 1`, the problem, `n`, the optional monotonicity line and the
/// matrix rows; validates the matrix.
pub fn read_header<I: Iterator<Item = std::io::Result<String>>>(
    lines: &mut Lines<I>,
) -> Result<Header, FormatError> {
    let magic = lines.expect_line("`OMV 1`")?;
    if magic.split_whitespace().collect::<Vec<_>>() != ["OMV", "1"] {
        return Err(parse_err(
            lines.line(),
            format!("expected `OMV 1`, found `{magic}`"),
        ));
    }
    let problem = lines.keyword("problem")?;
    let family: Family = problem
        .parse()
        .map_err(|e: String| parse_err(lines.line(), e))?;
    let n_text = lines.keyword("n")?;
    let n: usize = n_text
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| parse_err(lines.line(), format!("bad dimension `{n_text}`")))?;

    let mut first_row = lines.expect_line("matrix row")?;
    let mut case = None;
    if let Some(rest) = first_row.strip_prefix("monotone") {
        let c: MonotonicityCase = rest
            .trim()
            .parse()
            .map_err(|e: String| parse_err(lines.line(), e))?;
        case = Some(c);
        first_row = lines.expect_line("matrix row")?;
    }
    let kind = ProblemKind::from_family(family, case).map_err(|e| parse_err(lines.line(), e))?;

    let mut entries = parse_values(&first_row, n, lines.line())?;
    for _ in 1..n {
        let row = lines.expect_line("matrix row")?;
        entries.extend(parse_values(&row, n, lines.line())?);
    }
    let matrix = SquareMatrix::from_vec(n, kind.input_domain(), entries);
    validate(&matrix, kind).map_err(|violation| FormatError::Invalid {
        what: "matrix".into(),
        violation,
    })?;
    Ok(Header { kind, matrix })
}

/// Parses the `queries q` line if `line` is one.
pub fn queries_line(line: &str) -> Option<Result<usize, String>> {
    let rest = line.strip_prefix("queries")?;
    if !rest.starts_with(char::is_whitespace) {
        return None;
    }
    Some(
        rest.trim()
            .parse()
            .map_err(|_| format!("bad query count `{}`", rest.trim())),
    )
}

pub fn parse_instance(text: &str) -> Result<Instance, FormatError> {
    let mut lines = Lines::new(text.lines().map(|l| Ok(l.to_string())));
    let Header { kind, matrix } = read_header(&mut lines)?;
    let n = matrix.n();
    let count_line = lines.expect_line("`queries <q>`")?;
    let q = match queries_line(&count_line) {
        Some(Ok(q)) => q,
        Some(Err(e)) => return Err(parse_err(lines.line(), e)),
        None => {
            return Err(parse_err(
                lines.line(),
                format!("expected `queries <q>`, found `{count_line}`"),
            ))
        }
    };
    let mut queries: Vec<Vec<Value>> = Vec::with_capacity(q);
    for j in 0..q {
        let row = lines.expect_line("query row")?;
        let v = parse_values(&row, n, lines.line())?;
        validate_query(
            &v,
            kind,
            n,
            DEFAULT_BOUND_C,
            queries.last().map(Vec::as_slice),
        )
        .map_err(|violation| FormatError::Invalid {
            what: format!("query {}", j + 1),
            violation,
        })?;
        queries.push(v);
    }
    if let Some(extra) = lines.next_line()? {
        return Err(parse_err(
            lines.line(),
            format!("unexpected trailing line `{extra}`"),
        ));
    }
    Ok(Instance {
        kind,
        matrix,
        queries,
    })
}

pub fn format_header(kind: ProblemKind, matrix: &SquareMatrix) -> String {
    let mut s = String::new();
    writeln!(s, "OMV 1").unwrap();
    writeln!(s, "problem {}", kind.family()).unwrap();
    writeln!(s, "n {}", matrix.n()).unwrap();
    if let Some(case) = kind.monotonicity() {
        writeln!(s, "monotone {}", case.name()).unwrap();
    }
    for row in matrix.rows() {
        writeln!(s, "{}", format_values(row)).unwrap();
    }
    s
}

pub fn format_instance(inst: &Instance) -> String {
    let mut s = format_header(inst.kind, &inst.matrix);
    writeln!(s, "queries {}", inst.queries.len()).unwrap();
    for q in &inst.queries {
        writeln!(s, "{}", format_values(q)).unwrap();
    }
    s
}

pub fn format_answers(answers: &[Vec<Value>]) -> String {
    answers.iter().map(|a| format_values(a) + "\n").collect()
}

/// Answer lines; `n` values each.
pub fn parse_answers(text: &str, n: usize) -> Result<Vec<Vec<Value>>, FormatError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| parse_values(l, n, i + 1))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use omv_core::harness::{gen_instance, InstanceSpec};
    use proptest::prelude::*;

    const SAMPLE: &str = "OMV 1\nproblem bmmp\nn 2\nmonotone rows\n1 2\n3 4\nqueries 1\n0 5\n";

    #[test]
    fn sample_round_trip() {
        let inst = parse_instance(SAMPLE).unwrap();
        assert_eq!(
            inst.kind,
            ProblemKind::BoundedMonotoneMinPlus(MonotonicityCase::Rows)
        );
        assert_eq!(format_instance(&inst), SAMPLE);
    }

    #[test]
    fn infinity_tokens() {
        let text = "OMV 1\nproblem minmax\nn 2\ninf -inf\n0 1\nqueries 1\n-inf 3\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.matrix.get(0, 0), Value::PosInf);
        assert_eq!(inst.queries[0][0], Value::NegInf);
        assert_eq!(format_instance(&inst), text);
    }

    #[test]
    fn parse_errors_name_the_line() {
        let bad = "OMV 1\nproblem eq\nn 2\n1 2\n3\nqueries 0\n";
        assert_eq!(
            parse_instance(bad).unwrap_err(),
            FormatError::Parse {
                line: 5,
                msg: "expected 2 values, found 1".into()
            }
        );
        assert!(matches!(
            parse_instance("OMV 2\n"),
            Err(FormatError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_instance("OMV 1\nproblem xor\n"),
            Err(FormatError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_instance("OMV 1\nproblem bmmp\nn 1\n3\nqueries 0\n"),
            Err(FormatError::Parse { .. })
        ));
    }

    #[test]
    fn validation_errors_are_separate() {
        let text = "OMV 1\nproblem bmmp\nn 2\nmonotone rows\n2 1\n5 5\nqueries 0\n";
        assert!(matches!(
            parse_instance(text),
            Err(FormatError::Invalid { .. })
        ));
        let text = "OMV 1\nproblem bool\nn 1\n2\nqueries 0\n";
        assert!(matches!(
            parse_instance(text),
            Err(FormatError::Invalid { .. })
        ));
        let text = "OMV 1\nproblem eq\nn 1\ninf\nqueries 0\n";
        assert!(matches!(
            parse_instance(text),
            Err(FormatError::Invalid { .. })
        ));
    }

    fn any_kind() -> impl Strategy<Value = ProblemKind> {
        prop_oneof![
            Just(ProblemKind::Boolean),
            Just(ProblemKind::ExistsEquality),
            Just(ProblemKind::ExistsDominance),
            Just(ProblemKind::MinWitness),
            Just(ProblemKind::MinMax),
            (0usize..4).prop_map(|c| ProblemKind::BoundedMonotoneMinPlus(MonotonicityCase::ALL[c])),
        ]
    }

    proptest! {
        #[test]
        fn print_then_parse_is_identity(kind in any_kind(), n in 1usize..7, q in 0usize..6, seed in any::<u64>()) {
            let spec = InstanceSpec::new(kind, n, seed).with_queries(q).with_inf_rate(0.2);
            let inst = gen_instance(&spec).unwrap();
            let text = format_instance(&inst);
            let back = parse_instance(&text).unwrap();
            prop_assert_eq!(&back, &inst);
            prop_assert_eq!(format_instance(&back), text);
        }
    }
}
