/// Sparse table over a fixed array: `O(n log n)` build, `O(1)` range minimum.
///
/// `table[j][i]` holds the position of the leftmost minimum of
/// `values[i..i + 2^j]`.
#[derive(Clone, Debug)]
pub struct RangeMinIndex {
    values: Vec<i64>,
    table: Vec<Vec<u32>>,
}

impl RangeMinIndex {
    pub fn build(values: &[i64]) -> Self {
        let n = values.len();
        let mut table: Vec<Vec<u32>> = vec![(0..n as u32).collect()];
        let mut width = 1;
        while 2 * width <= n {
            let prev = table.last().unwrap();
            let next = (0..=n - 2 * width)
                .map(|i| {
                    let (a, b) = (prev[i], prev[i + width]);
                    if values[b as usize] < values[a as usize] {
                        b
                    } else {
                        a
                    }
                })
                .collect();
            table.push(next);
            width *= 2;
        }
        RangeMinIndex {
            values: values.to_vec(),
            table,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Minimum of `values[lo..=hi]` and its leftmost position.
    pub fn range_min(&self, lo: usize, hi: usize) -> (i64, usize) {
        assert!(lo <= hi && hi < self.values.len(), "bad range {lo}..={hi}");
        let len = hi - lo + 1;
        let j = (usize::BITS - 1 - len.leading_zeros()) as usize;
        let a = self.table[j][lo] as usize;
        let b = self.table[j][hi + 1 - (1 << j)] as usize;
        // Ties resolve to `a`, which is never right of `b`.
        if self.values[b] < self.values[a] {
            (self.values[b], b)
        } else {
            (self.values[a], a)
        }
    }
}
