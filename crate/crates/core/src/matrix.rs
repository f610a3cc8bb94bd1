use crate::value::Value;

/// Value domain a matrix or vector is declared over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Domain {
    Boolean,
    Integer,
    /// Finite, nonnegative and bounded by `c * n`.
    Bounded,
}

/// Dense `n x n` matrix stored row-major.
///
/// Storage is 0-based; every index reported to users (violations, mismatch
/// positions, witnesses in files) is converted to 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<Value>,
    domain: Domain,
}

impl SquareMatrix {
    pub fn from_fn(n: usize, domain: Domain, mut f: impl FnMut(usize, usize) -> Value) -> Self {
        assert!(n > 0, "matrix dimension must be positive");
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for k in 0..n {
                data.push(f(i, k));
            }
        }
        SquareMatrix { n, data, domain }
    }

    /// Builds a matrix from nested rows. Panics if the rows are not square.
    pub fn from_rows<T: Into<Value> + Copy>(domain: Domain, rows: &[Vec<T>]) -> Self {
        let n = rows.len();
        assert!(
            rows.iter().all(|r| r.len() == n),
            "rows must form a square matrix"
        );
        SquareMatrix::from_fn(n, domain, |i, k| rows[i][k].into())
    }

    pub fn from_vec(n: usize, domain: Domain, data: Vec<Value>) -> Self {
        assert!(n > 0 && data.len() == n * n, "expected {} entries", n * n);
        SquareMatrix { n, data, domain }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    #[inline]
    pub fn get(&self, i: usize, k: usize) -> Value {
        self.data[i * self.n + k]
    }

    #[inline]
    pub fn set(&mut self, i: usize, k: usize, x: Value) {
        self.data[i * self.n + k] = x;
    }

    pub fn row(&self, i: usize) -> &[Value] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Value]> {
        self.data.chunks(self.n)
    }

    pub fn entries(&self) -> &[Value] {
        &self.data
    }

    /// Largest absolute value among finite entries, 0 if there are none.
    pub fn max_abs_finite(&self) -> i64 {
        self.data
            .iter()
            .filter_map(|x| x.finite())
            .map(i64::abs)
            .max()
            .unwrap_or(0)
    }

    pub fn map(&self, domain: Domain, mut f: impl FnMut(usize, usize, Value) -> Value) -> Self {
        SquareMatrix::from_fn(self.n, domain, |i, k| f(i, k, self.get(i, k)))
    }

    /// Returns the matrix with its rows reordered: row `i` of the result is
    /// row `perm[i]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        SquareMatrix::from_fn(self.n, self.domain, |i, k| self.get(perm[i], k))
    }
}

/// A length-`n` query or answer vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColumnVector {
    data: Vec<Value>,
    domain: Domain,
}

impl ColumnVector {
    pub fn new(domain: Domain, data: Vec<Value>) -> Self {
        ColumnVector { data, domain }
    }

    pub fn from_ints(domain: Domain, xs: &[i64]) -> Self {
        ColumnVector::new(domain, xs.iter().map(|&x| Value::Fin(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn as_slice(&self) -> &[Value] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Value> {
        self.data
    }
}

impl std::ops::Index<usize> for ColumnVector {
    type Output = Value;

    fn index(&self, k: usize) -> &Value {
        &self.data[k]
    }
}

/// Shorthand used throughout the tests: a vector of finite values.
pub fn fin_vec(xs: &[i64]) -> Vec<Value> {
    xs.iter().map(|&x| Value::Fin(x)).collect()
}
