use std::collections::BTreeMap;

/// Multiset of `(key, payload)` pairs over the bounded key domain
/// `0..=max_key`.
///
/// A Fenwick tree over keys answers `count_le` in `O(log K)`; an ordered map
/// keeps the pairs for `min` and in-order enumeration.
#[derive(Clone, Debug)]
pub struct OrderedMultiset {
    fenwick: Vec<u32>,
    entries: BTreeMap<(i64, usize), u32>,
    len: usize,
}

impl OrderedMultiset {
    pub fn new(max_key: i64) -> Self {
        assert!(max_key >= 0);
        OrderedMultiset {
            fenwick: vec![0; max_key as usize + 2],
            entries: BTreeMap::new(),
            len: 0,
        }
    }

    pub fn max_key(&self) -> i64 {
        self.fenwick.len() as i64 - 2
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn bump(&mut self, key: i64, up: bool) {
        assert!(
            (0..=self.max_key()).contains(&key),
            "key {key} outside 0..={}",
            self.max_key()
        );
        let mut i = key as usize + 1;
        while i < self.fenwick.len() {
            if up {
                self.fenwick[i] += 1;
            } else {
                self.fenwick[i] -= 1;
            }
            i += i & i.wrapping_neg();
        }
    }

    pub fn insert(&mut self, key: i64, payload: usize) {
        self.bump(key, true);
        *self.entries.entry((key, payload)).or_insert(0) += 1;
        self.len += 1;
    }

    /// Removes one copy of the pair; returns whether it was present.
    pub fn remove(&mut self, key: i64, payload: usize) -> bool {
        let Some(count) = self.entries.get_mut(&(key, payload)) else {
            return false;
        };
        *count -= 1;
        if *count == 0 {
            self.entries.remove(&(key, payload));
        }
        self.bump(key, false);
        self.len -= 1;
        true
    }

    pub fn min(&self) -> Option<i64> {
        self.entries.keys().next().map(|&(k, _)| k)
    }

    /// Number of pairs with key `<= x`.
    pub fn count_le(&self, x: i64) -> usize {
        if x < 0 {
            return 0;
        }
        let mut i = (x.min(self.max_key()) as usize) + 1;
        let mut s = 0usize;
        while i > 0 {
            s += self.fenwick[i] as usize;
            i &= i - 1;
        }
        s
    }

    /// Payloads with key `<= x` in `(key, payload)` order, at most `cap + 1`
    /// of them (so callers can tell "more than cap" apart).
    pub fn enumerate_le(&self, x: i64, cap: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (&(_, payload), &count) in self.entries.range(..=(x, usize::MAX)) {
            for _ in 0..count {
                if out.len() > cap {
                    return out;
                }
                out.push(payload);
            }
        }
        out.truncate(cap + 1);
        out
    }
}
