use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use crate::board::Switchboard;
use crate::edge::Edge;
use crate::error::{Error, Result};

/// A finite strict partial order on opaque keys.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset<K: Ord> {
    carrier: Vec<K>,
    pairs: BTreeSet<(K, K)>,
}

/// Height of every element plus the height of the poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Heights<K: Ord> {
    /// Length of the longest chain ending at the key (minimal elements: 0).
    pub of: BTreeMap<K, usize>,
    /// Largest chain cardinality; 0 for the empty poset.
    pub height: usize,
}

impl<K: Ord + Clone + fmt::Display> FinitePoset<K> {
    /// Checks that keys are distinct, pairs stay inside the carrier, and the
    /// pairs form a strict partial order.
    pub fn new(carrier: Vec<K>, pairs: impl IntoIterator<Item = (K, K)>) -> Result<Self> {
        let keys: BTreeSet<&K> = carrier.iter().collect();
        if keys.len() != carrier.len() {
            return Err(Error::Format("duplicate poset key".into()));
        }
        let pairs: BTreeSet<(K, K)> = pairs.into_iter().collect();
        for (a, b) in &pairs {
            if !keys.contains(a) || !keys.contains(b) {
                return Err(Error::Format(format!("pair ({a},{b}) mentions an unknown key")));
            }
        }
        let p = FinitePoset { carrier, pairs };
        p.validate()?;
        Ok(p)
    }

    pub fn carrier(&self) -> &[K] {
        &self.carrier
    }

    pub fn pairs(&self) -> &BTreeSet<(K, K)> {
        &self.pairs
    }

    pub fn lt(&self, a: &K, b: &K) -> bool {
        self.pairs.contains(&(a.clone(), b.clone()))
    }

    fn successors<'a>(&'a self, a: &'a K) -> impl Iterator<Item = &'a K> + 'a {
        self.pairs.range((a.clone(), a.clone())..).take_while(move |(x, _)| x == a).map(|(_, y)| y)
    }

    pub fn validate(&self) -> Result<()> {
        for (a, b) in &self.pairs {
            if a == b {
                return Err(Error::Precondition(format!("not irreflexive at {a}")));
            }
            if self.lt(b, a) {
                return Err(Error::Precondition(format!("not asymmetric: {a} < {b} < {a}")));
            }
        }
        for (a, b) in &self.pairs {
            for c in self.successors(b) {
                if !self.lt(a, c) {
                    return Err(Error::Precondition(format!("not transitive: {a} < {b} < {c}")));
                }
            }
        }
        Ok(())
    }

    pub fn heights(&self) -> Result<Heights<K>> {
        self.validate()?;
        // In a transitive order every predecessor is a direct pair, so
        // processing keys by number of predecessors is a topological order.
        let mut preds: BTreeMap<&K, Vec<&K>> = self.carrier.iter().map(|k| (k, Vec::new())).collect();
        for (a, b) in &self.pairs {
            preds.get_mut(b).unwrap().push(a);
        }
        let mut order: Vec<&K> = self.carrier.iter().collect();
        order.sort_by_key(|k| preds[k].len());
        let mut of: BTreeMap<K, usize> = BTreeMap::new();
        for k in order {
            let h = preds[k].iter().map(|p| of[*p] + 1).max().unwrap_or(0);
            of.insert(k.clone(), h);
        }
        let height = of.values().max().map_or(0, |h| h + 1);
        Ok(Heights { of, height })
    }

    /// `node <key>` lines in carrier order, then sorted `lt <key> <key>` lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for k in &self.carrier {
            writeln!(out, "node {k}").unwrap();
        }
        for (a, b) in &self.pairs {
            writeln!(out, "lt {a} {b}").unwrap();
        }
        out
    }
}

/// Reads `node` / `lt` lines; keys are whitespace-free tokens.
pub fn parse_poset(text: &str) -> Result<FinitePoset<String>> {
    let mut carrier = Vec::new();
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.as_slice() {
            ["node", k] => carrier.push(k.to_string()),
            ["lt", a, b] => pairs.push((a.to_string(), b.to_string())),
            _ => return Err(Error::Parse { line: i + 1, msg: format!("expected `node <key>` or `lt <key> <key>`, found `{line}`") }),
        }
    }
    FinitePoset::new(carrier, pairs)
}

/// Edges `{2i,2i+1}` on `2k` elements, ordered in one chain.
pub fn chain_switchboard(k: usize) -> Switchboard {
    let gens = (0..k.saturating_sub(1)).map(|i| (Edge::of(2 * i, 2 * i + 1), Edge::of(2 * i + 2, 2 * i + 3)));
    Switchboard::from_generators(2 * k, gens).expect("chain edges are in range")
}

/// The edge order of a switchboard as a finite poset.
pub fn edge_poset(s: &Switchboard) -> Result<FinitePoset<Edge>> {
    FinitePoset::new(s.edges().collect(), s.lt_pairs())
}
