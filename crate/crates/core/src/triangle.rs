//! The single-relation presentation of labeled switchboards.
//!
//! `x ◁ y` holds when `x ↑ y` (element, edge) or `x < y` (edge, edge).
//! Relations of this form are exactly the ones satisfying five axioms:
//!
//! 1. transitive;
//! 2. `{x,y} ◁ {z,w}` implies `x ◁ {z,w}`;
//! 3. the right-hand side is always an edge;
//! 4. irreflexive;
//! 5. `x ⋪ {x,y}`.

use std::collections::BTreeSet;
use std::fmt;

use crate::bits::BitMatrix;
use crate::board::{LabeledSwitchboard, Switchboard};
use crate::edge::{edges_by_index, Edge, Element};
use crate::error::{Error, Result};

/// An element or an edge of the same ground set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    Elem(Element),
    Edge(Edge),
}

impl Node {
    pub fn map(self, f: impl Fn(Element) -> Element) -> Option<Node> {
        match self {
            Node::Elem(x) => Some(Node::Elem(f(x))),
            Node::Edge(e) => e.map(f).map(Node::Edge),
        }
    }

    fn within(self, n: usize) -> bool {
        match self {
            Node::Elem(x) => x < n,
            Node::Edge(e) => e.hi() < n,
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Elem(x) => write!(f, "{x}"),
            Node::Edge(e) => write!(f, "{e}"),
        }
    }
}

/// All nodes of an `n`-element ground set: elements first, then edges.
pub fn nodes(n: usize) -> impl Iterator<Item = Node> {
    (0..n).map(Node::Elem).chain(edges_by_index(n).map(Node::Edge))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangleRelation {
    n: usize,
    rel: BTreeSet<(Node, Node)>,
}

impl TriangleRelation {
    /// Stores the pairs as given; only ranges are checked here.
    pub fn new(n: usize, rel: impl IntoIterator<Item = (Node, Node)>) -> Result<TriangleRelation> {
        let rel: BTreeSet<(Node, Node)> = rel.into_iter().collect();
        if let Some((x, y)) = rel.iter().find(|(x, y)| !x.within(n) || !y.within(n)) {
            return Err(Error::Format(format!("pair ({x},{y}) out of range for n = {n}")));
        }
        Ok(TriangleRelation { n, rel })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &BTreeSet<(Node, Node)> {
        &self.rel
    }

    pub fn holds(&self, x: Node, y: Node) -> bool {
        self.rel.contains(&(x, y))
    }

    /// First failing axiom, with a witness.
    pub fn check_axioms(&self) -> Result<()> {
        let fail = |axiom: u8, witness: String| Err(Error::Triangle { axiom, witness });
        for &(x, y) in &self.rel {
            if let Node::Elem(_) = y {
                return fail(3, format!("{x} ◁ {y}"));
            }
            if x == y {
                return fail(4, format!("{x} ◁ {x}"));
            }
            if let (Node::Elem(a), Node::Edge(e)) = (x, y) {
                if e.contains(a) {
                    return fail(5, format!("{a} ◁ {e}"));
                }
            }
        }
        for &(x, y) in &self.rel {
            if let Node::Edge(e) = x {
                for a in [e.lo(), e.hi()] {
                    if !self.holds(Node::Elem(a), y) {
                        return fail(2, format!("{e} ◁ {y} but not {a} ◁ {y}"));
                    }
                }
            }
        }
        let all: Vec<Node> = nodes(self.n).collect();
        let index = |x: Node| all.binary_search_by(|p| node_key(*p).cmp(&node_key(x))).unwrap();
        let mut m = BitMatrix::new(all.len(), all.len());
        for &(x, y) in &self.rel {
            m.set(index(x), index(y), true);
        }
        for &(x, y) in &self.rel {
            for z in m.ones_in_row(index(y)) {
                if !m.get(index(x), z) {
                    return fail(1, format!("{x} ◁ {y} ◁ {} but not {x} ◁ {}", all[z], all[z]));
                }
            }
        }
        Ok(())
    }
}

// Sort key matching the order produced by `nodes`.
fn node_key(x: Node) -> (u8, usize) {
    match x {
        Node::Elem(a) => (0, a),
        Node::Edge(e) => (1, e.index()),
    }
}

pub fn to_triangle(l: &LabeledSwitchboard) -> Result<TriangleRelation> {
    l.ensure_valid()?;
    let rel = l
        .lt_pairs()
        .into_iter()
        .map(|(e, f)| (Node::Edge(e), Node::Edge(f)))
        .chain(l.up_facts().into_iter().map(|(a, e)| (Node::Elem(a), Node::Edge(e))));
    TriangleRelation::new(l.n(), rel)
}

pub fn from_triangle(t: &TriangleRelation) -> Result<LabeledSwitchboard> {
    t.check_axioms()?;
    let mut base = Switchboard::empty(t.n);
    let mut ups = Vec::new();
    for &(x, y) in &t.rel {
        match (x, y) {
            (Node::Edge(e), Node::Edge(f)) => base.set_lt(e, f, true),
            (Node::Elem(a), Node::Edge(e)) => ups.push((a, e)),
            _ => unreachable!("axiom 3 checked"),
        }
    }
    let l = LabeledSwitchboard::new(base, ups)?;
    debug_assert!(l.is_valid());
    Ok(l)
}
