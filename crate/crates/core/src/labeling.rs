//! Enumeration of all labeled expansions of a switchboard.

use crate::board::{LabeledSwitchboard, Switchboard};
use crate::edge::{edge_count, edges_by_index, Edge, Element};
use crate::error::{Error, Result};

/// Size limits for exhaustive enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationCap {
    pub max_elements: usize,
    pub max_nodes: u64,
}

impl Default for EnumerationCap {
    fn default() -> Self {
        EnumerationCap { max_elements: 12, max_nodes: 1 << 20 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Label {
    Open,
    Up,
    Down,
    Incident,
}

/// Every valid labeled expansion of `s`, each exactly once.
///
/// Labels forced by the order (`{a,x} < e` forces `a ↑ e`, `{a,x} > e`
/// forces `a ↓ e`) are fixed first; the remaining choices are branched on
/// with ↓ tried before ↑, each choice propagated along the order.
pub fn enumerate_labelings(s: &Switchboard, cap: EnumerationCap) -> Result<Vec<LabeledSwitchboard>> {
    s.ensure_valid()?;
    if s.n() > cap.max_elements {
        return Err(Error::CapExceeded(format!(
            "{} elements exceeds the limit of {}",
            s.n(),
            cap.max_elements
        )));
    }
    let m = edge_count(s.n());
    let mut labels = vec![Label::Open; s.n() * m];
    for e in edges_by_index(s.n()) {
        labels[e.lo() * m + e.index()] = Label::Incident;
        labels[e.hi() * m + e.index()] = Label::Incident;
    }
    let mut search = Search { s, m, nodes: 0, cap, out: Vec::new() };
    for e in edges_by_index(s.n()) {
        for f in s.above(e) {
            for a in [e.lo(), e.hi()] {
                search.assign(&mut labels, a, f, Label::Up);
            }
            for a in [f.lo(), f.hi()] {
                search.assign(&mut labels, a, e, Label::Down);
            }
        }
    }
    search.branch(labels, 0)?;
    Ok(search.out)
}

struct Search<'a> {
    s: &'a Switchboard,
    m: usize,
    nodes: u64,
    cap: EnumerationCap,
    out: Vec<LabeledSwitchboard>,
}

impl Search<'_> {
    fn assign(&self, labels: &mut [Label], a: Element, e: Edge, v: Label) {
        let slot = &mut labels[a * self.m + e.index()];
        assert!(*slot == Label::Open || *slot == v, "conflicting forced label for {a} at {e}");
        *slot = v;
        let next: Vec<Edge> = match v {
            Label::Up => self.s.above(e).collect(),
            _ => self.s.below(e).collect(),
        };
        for f in next {
            let slot = &mut labels[a * self.m + f.index()];
            assert!(*slot == Label::Open || *slot == v, "conflicting propagated label for {a} at {f}");
            *slot = v;
        }
    }

    fn branch(&mut self, labels: Vec<Label>, from: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.cap.max_nodes {
            return Err(Error::CapExceeded(format!("more than {} branch nodes", self.cap.max_nodes)));
        }
        let Some(pos) = labels[from..].iter().position(|&l| l == Label::Open).map(|p| p + from) else {
            let mut l = LabeledSwitchboard::all_down(self.s.clone());
            for (i, &lab) in labels.iter().enumerate() {
                if lab == Label::Up {
                    l.set_up(i / self.m, Edge::from_index(i % self.m), true);
                }
            }
            debug_assert!(l.is_valid());
            self.out.push(l);
            return Ok(());
        };
        let (a, e) = (pos / self.m, Edge::from_index(pos % self.m));
        for v in [Label::Down, Label::Up] {
            let mut next = labels.clone();
            self.assign(&mut next, a, e, v);
            self.branch(next, pos + 1)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::label_canonical;
    use crate::order::chain_switchboard;

    #[test]
    fn three_elements_give_eight() {
        let all = enumerate_labelings(&Switchboard::empty(3), EnumerationCap::default()).unwrap();
        assert_eq!(all.len(), 8);
        for (i, a) in all.iter().enumerate() {
            assert!(a.is_valid());
            for b in &all[..i] {
                assert_ne!(a, b);
            }
        }
    }

    #[test]
    fn two_elements_give_one() {
        let all = enumerate_labelings(&Switchboard::empty(2), EnumerationCap::default()).unwrap();
        assert_eq!(all.len(), 1);
    }

    #[test]
    fn chain_matches_brute_force() {
        let s = chain_switchboard(2);
        let all = enumerate_labelings(&s, EnumerationCap::default()).unwrap();
        // every assignment of ↑/↓ to the 12 (a, e) slots, filtered by the validator
        let slots: Vec<(usize, Edge)> =
            (0..4).flat_map(|a| s.edges().filter(move |e| !e.contains(a)).map(move |e| (a, e))).collect();
        assert_eq!(slots.len(), 12);
        let mut brute = Vec::new();
        for mask in 0u32..(1 << slots.len()) {
            let ups = slots.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p);
            let l = LabeledSwitchboard::new(s.clone(), ups).unwrap();
            if l.validate().is_valid() {
                brute.push(l);
            }
        }
        assert_eq!(all.len(), brute.len());
        assert_eq!(all.len(), 256);
        for l in &all {
            assert!(brute.contains(l));
            assert!(l.up(0, Edge::of(2, 3)) && l.up(1, Edge::of(2, 3)));
            assert!(l.down(2, Edge::of(0, 1)) && l.down(3, Edge::of(0, 1)));
        }
        assert!(all.contains(&label_canonical(&s).unwrap()));
    }

    #[test]
    fn caps_refuse_instead_of_truncating() {
        let small = EnumerationCap { max_elements: 2, ..EnumerationCap::default() };
        assert!(matches!(enumerate_labelings(&Switchboard::empty(3), small), Err(Error::CapExceeded(_))));
        let few = EnumerationCap { max_nodes: 5, ..EnumerationCap::default() };
        assert!(matches!(enumerate_labelings(&Switchboard::empty(3), few), Err(Error::CapExceeded(_))));
    }
}
