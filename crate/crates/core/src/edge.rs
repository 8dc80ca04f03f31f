use std::fmt;

use crate::error::{Error, Result};

/// An element of the ground set `0..n`.
pub type Element = usize;

/// A 2-element subset `{lo, hi}` of the ground set, always stored with `lo < hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    lo: Element,
    hi: Element,
}

impl Edge {
    /// Builds the edge `{a, b}` in canonical order. Singletons are rejected.
    pub fn new(a: Element, b: Element) -> Result<Edge> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(Edge { lo: a, hi: b }),
            std::cmp::Ordering::Greater => Ok(Edge { lo: b, hi: a }),
            std::cmp::Ordering::Equal => Err(Error::Format(format!("edge {{{a},{a}}} is a singleton"))),
        }
    }

    /// Panicking variant of [`Edge::new`] for literals in code and tests.
    pub fn of(a: Element, b: Element) -> Edge {
        Edge::new(a, b).expect("edge endpoints must differ")
    }

    pub fn lo(self) -> Element {
        self.lo
    }

    pub fn hi(self) -> Element {
        self.hi
    }

    pub fn contains(self, x: Element) -> bool {
        self.lo == x || self.hi == x
    }

    pub fn shares_vertex(self, other: Edge) -> bool {
        self.contains(other.lo) || self.contains(other.hi)
    }

    /// The endpoint that is not `x`, if `x` is an endpoint.
    pub fn other(self, x: Element) -> Option<Element> {
        if self.lo == x {
            Some(self.hi)
        } else if self.hi == x {
            Some(self.lo)
        } else {
            None
        }
    }

    /// Colexicographic index: edges on `0..k` occupy indices `0..k(k-1)/2`.
    pub(crate) fn index(self) -> usize {
        self.hi * (self.hi - 1) / 2 + self.lo
    }

    pub(crate) fn from_index(idx: usize) -> Edge {
        // largest hi with hi(hi-1)/2 <= idx
        let mut hi = (((8 * idx + 1) as f64).sqrt() as usize).div_ceil(2);
        while hi * (hi - 1) / 2 > idx {
            hi -= 1;
        }
        while (hi + 1) * hi / 2 <= idx {
            hi += 1;
        }
        Edge { lo: idx - hi * (hi - 1) / 2, hi }
    }

    /// Image of the edge under an element map. `None` if the map collapses it.
    pub fn map(self, f: impl Fn(Element) -> Element) -> Option<Edge> {
        Edge::new(f(self.lo), f(self.hi)).ok()
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.lo, self.hi)
    }
}

/// Number of edges on an `n`-element ground set.
pub fn edge_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// All edges on `0..n` in index (colex) order.
pub(crate) fn edges_by_index(n: usize) -> impl Iterator<Item = Edge> {
    (0..edge_count(n)).map(Edge::from_index)
}

/// All edges on `0..n` in lexicographic order.
pub fn edges_lex(n: usize) -> impl Iterator<Item = Edge> {
    (0..n).flat_map(move |lo| (lo + 1..n).map(move |hi| Edge { lo, hi }))
}
