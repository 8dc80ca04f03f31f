//! Dense bit matrix used for edge orders, favor relations and closures.

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct BitMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub(crate) fn new(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        BitMatrix { rows, cols, words, data: vec![0; rows * words] }
    }

    #[inline]
    pub(crate) fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    #[inline]
    pub(crate) fn set(&mut self, r: usize, c: usize, v: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.words + c / 64];
        if v {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    /// Row `dst |= row src`. Returns true if `dst` changed.
    pub(crate) fn or_row(&mut self, dst: usize, src: usize) -> bool {
        let mut changed = false;
        for w in 0..self.words {
            let s = self.data[src * self.words + w];
            let d = &mut self.data[dst * self.words + w];
            let nd = *d | s;
            changed |= nd != *d;
            *d = nd;
        }
        changed
    }

    /// Whether row `r` is contained in row `r2` of `other` (same width).
    #[inline]
    pub(crate) fn row_subset(&self, r: usize, other: &BitMatrix, r2: usize) -> bool {
        debug_assert_eq!(self.words, other.words);
        let a = &self.data[r * self.words..(r + 1) * self.words];
        let b = &other.data[r2 * other.words..(r2 + 1) * other.words];
        a.iter().zip(b).all(|(x, y)| x & !y == 0)
    }

    pub(crate) fn ones_in_row(&self, r: usize) -> impl Iterator<Item = usize> + '_ {
        let words = &self.data[r * self.words..(r + 1) * self.words];
        words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + tz)
            })
        })
    }

    pub(crate) fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Warshall's algorithm on a square matrix.
    pub(crate) fn close_transitively(&mut self) {
        assert_eq!(self.rows, self.cols);
        for k in 0..self.rows {
            for i in 0..self.rows {
                if i != k && self.get(i, k) {
                    self.or_row(i, k);
                }
            }
        }
    }
}
