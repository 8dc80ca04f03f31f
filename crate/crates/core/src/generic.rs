//! Finite extension constructions: existential witnesses for favor and
//! disfavor, free copies of a one-type, and seeded random structures.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::amalg::{amalgamate_along, free_amalgam_one_point};
use crate::bits::BitMatrix;
use crate::board::{check_id_list, LabeledSwitchboard, Switchboard};
use crate::edge::{edge_count, edges_by_index, edges_lex, Edge, Element};
use crate::error::{Error, Result};

/// A one-point extension: `structure` is `B ∪ {point}`, and the base `B` is
/// every other id in ascending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneTypeSpec {
    pub structure: LabeledSwitchboard,
    pub point: Element,
}

impl OneTypeSpec {
    pub fn new(structure: LabeledSwitchboard, point: Element) -> Result<Self> {
        structure.ensure_valid()?;
        structure.base().check_element(point)?;
        Ok(OneTypeSpec { structure, point })
    }

    pub fn base_ids(&self) -> Vec<Element> {
        (0..self.structure.n()).filter(|&x| x != self.point).collect()
    }
}

/// A two-point extension `B ∪ {s, t}` with the ordered pair `(s, t)`; the
/// base is every other id in ascending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoTypeSpec {
    pub structure: LabeledSwitchboard,
    pub s: Element,
    pub t: Element,
}

impl TwoTypeSpec {
    pub fn new(structure: LabeledSwitchboard, s: Element, t: Element) -> Result<Self> {
        structure.ensure_valid()?;
        structure.base().check_element(s)?;
        structure.base().check_element(t)?;
        if s == t {
            return Err(Error::Precondition("the two points of a two-type must differ".into()));
        }
        Ok(TwoTypeSpec { structure, s, t })
    }

    pub fn base_ids(&self) -> Vec<Element> {
        (0..self.structure.n()).filter(|&x| x != self.s && x != self.t).collect()
    }
}

fn witness_preconditions(m: &LabeledSwitchboard, x: Element, e: Edge) -> Result<()> {
    m.ensure_valid()?;
    m.base().check_element(x)?;
    m.base().check_edge(e)?;
    if e.contains(x) {
        return Err(Error::Precondition(format!("{x} lies on {e}; no witness exists")));
    }
    Ok(())
}

// Gadget ids: x = 0, y = 1, z = 2, w = 3. Labels of y and z on the edges of
// {x,y,z} are copied from `m`; unforced facts about w are disfavor.
fn attach_gadget(m: &LabeledSwitchboard, x: Element, e: Edge, gadget: LabeledSwitchboard) -> Result<(LabeledSwitchboard, Element)> {
    let mut g = gadget;
    for (gy, my, other) in [(1, e.lo(), Edge::of(0, 2)), (2, e.hi(), Edge::of(0, 1))] {
        let my_other = Edge::of(x, if gy == 1 { e.hi() } else { e.lo() });
        if m.up(my, my_other) {
            g.set_up(gy, other, true);
        }
    }
    g.ensure_valid()?;
    let ids = [x, e.lo(), e.hi()];
    let base = m.induced(&ids)?;
    let r = amalgamate_along(&base, m, &ids, &g, &[0, 1, 2])?;
    Ok((r.result, r.right_embedding[3]))
}

/// Extends `m` by a fresh `w` with `{x,w} < e`. Requires `x ↑ e`.
pub fn witness_up(m: &LabeledSwitchboard, x: Element, e: Edge) -> Result<(LabeledSwitchboard, Element)> {
    witness_preconditions(m, x, e)?;
    if !m.up(x, e) {
        return Err(Error::Precondition(format!("{x} does not favor {e}")));
    }
    let yz = Edge::of(1, 2);
    let base = Switchboard::from_pairs(4, [(Edge::of(0, 3), yz)])?;
    attach_gadget(m, x, e, LabeledSwitchboard::new(base, [(0, yz), (3, yz)])?)
}

/// Extends `m` by a fresh `w` with `{x,w} > e`. Requires `x ↓ e`.
pub fn witness_down(m: &LabeledSwitchboard, x: Element, e: Edge) -> Result<(LabeledSwitchboard, Element)> {
    witness_preconditions(m, x, e)?;
    if !m.down(x, e) {
        return Err(Error::Precondition(format!("{x} does not disfavor {e}")));
    }
    let xw = Edge::of(0, 3);
    let base = Switchboard::from_pairs(4, [(Edge::of(1, 2), xw)])?;
    attach_gadget(m, x, e, LabeledSwitchboard::new(base, [(1, xw), (2, xw)])?)
}

/// Extends `m` by a fresh `e2` realizing `spec` over `base`, freely
/// amalgamated with `a` over `base`. `spec`'s base ids correspond to
/// `base` sorted ascending.
pub fn free_copy(
    m: &LabeledSwitchboard,
    base: &[Element],
    a: Element,
    spec: &OneTypeSpec,
) -> Result<(LabeledSwitchboard, Element)> {
    m.ensure_valid()?;
    check_id_list(m.n(), base)?;
    m.base().check_element(a)?;
    if base.contains(&a) {
        return Err(Error::Precondition(format!("{a} lies in the base")));
    }
    let mut b = base.to_vec();
    b.sort_unstable();
    let spec_base = spec.base_ids();
    let here = m.induced(&b)?;
    if spec_base.len() != b.len() || !here.same_facts(&spec.structure.induced(&spec_base)?) {
        return Err(Error::Precondition("the type's base does not match the given base".into()));
    }
    let mut with_a = b.clone();
    with_a.push(a);
    let a_ext = m.induced(&with_a)?;
    let mut spec_ids = spec_base;
    spec_ids.push(spec.point);
    let spec_ext = spec.structure.induced(&spec_ids)?;
    let pair = free_amalgam_one_point(&here, &a_ext, &spec_ext)?;
    let prefix: Vec<Element> = (0..with_a.len()).collect();
    let r = amalgamate_along(&a_ext, m, &with_a, &pair, &prefix)?;
    Ok((r.result, r.right_embedding[b.len() + 1]))
}

/// Adds `e < f` with its transitive consequences when the result is still a
/// switchboard; otherwise leaves `s` untouched.
fn try_add_order(s: &mut Switchboard, e: Edge, f: Edge) -> bool {
    if s.lt(e, f) {
        return true;
    }
    if s.lt(f, e) {
        return false;
    }
    let lows: Vec<Edge> = std::iter::once(e).chain(s.below(e)).collect();
    let highs: Vec<Edge> = std::iter::once(f).chain(s.above(f)).collect();
    if lows.iter().any(|d| highs.iter().any(|u| d.shares_vertex(*u))) {
        return false;
    }
    for &d in &lows {
        for &u in &highs {
            s.set_lt(d, u, true);
        }
    }
    true
}

/// A seeded random labeled switchboard on `n` elements. Each ordered pair of
/// disjoint edges is proposed with probability `density`; labels not forced
/// by the order are fair coin flips.
///
/// # Panics
///
/// If `density` is outside `[0, 1]`.
pub fn random_labeled(n: usize, seed: u64, density: f64) -> LabeledSwitchboard {
    assert!((0.0..=1.0).contains(&density), "density {density} outside [0, 1]");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<Edge> = edges_lex(n).collect();
    let mut candidates: Vec<(Edge, Edge)> = edges
        .iter()
        .flat_map(|&e| edges.iter().filter(move |&&f| !e.shares_vertex(f) && e != f).map(move |&f| (e, f)))
        .collect();
    candidates.shuffle(&mut rng);
    let mut s = Switchboard::empty(n);
    for (e, f) in candidates {
        if rng.gen_bool(density) {
            try_add_order(&mut s, e, f);
        }
    }

    let mut topo = edges.clone();
    topo.sort_by_key(|&e| s.below(e).count());
    let mut l = LabeledSwitchboard::all_down(s);
    for &e in &topo {
        for a in (0..n).filter(|&a| !e.contains(a)) {
            let lower_favored = l.base().below(e).any(|f| l.up(a, f));
            let proto_up = l.base().below(e).any(|f| f.contains(a));
            let proto_down = l.base().above(e).any(|f| f.contains(a));
            // {a,x} < e < {a,y} would break the Switchboard Axiom.
            assert!(!((lower_favored || proto_up) && proto_down), "conflicting forced labels for {a} on {e}");
            let up = lower_favored || proto_up || (!proto_down && rng.gen_bool(0.5));
            l.set_up(a, e, up);
        }
    }
    assert!(l.is_valid(), "random_labeled produced an invalid structure");
    l
}

// Triangle relation on the nodes of an n-element carrier: elements are
// nodes 0..n, edge e is node n + e.index().
struct NodeRelation {
    n: usize,
    rel: BitMatrix,
}

impl NodeRelation {
    fn new(n: usize) -> Self {
        let size = n + edge_count(n);
        NodeRelation { n, rel: BitMatrix::new(size, size) }
    }

    fn edge(&self, e: Edge) -> usize {
        self.n + e.index()
    }

    fn add_structure(&mut self, l: &LabeledSwitchboard, ids: &[Element]) {
        for (e, f) in l.lt_pairs() {
            let (e, f) = (e.map(|x| ids[x]).unwrap(), f.map(|x| ids[x]).unwrap());
            self.rel.set(self.edge(e), self.edge(f), true);
        }
        for (a, e) in l.up_facts() {
            let e = e.map(|x| ids[x]).unwrap();
            self.rel.set(ids[a], self.edge(e), true);
        }
    }

    /// Closes under transitivity and `{x,y} ◁ f ⇒ x ◁ f`, then reads the
    /// structure back if it is a valid labeled switchboard.
    fn close(&mut self) -> Option<LabeledSwitchboard> {
        self.rel.close_transitively();
        let edges: Vec<Edge> = edges_by_index(self.n).collect();
        for &e in &edges {
            let above: Vec<usize> = self.rel.ones_in_row(self.edge(e)).collect();
            for j in above {
                self.rel.set(e.lo(), j, true);
                self.rel.set(e.hi(), j, true);
            }
        }
        self.rel.close_transitively();
        let mut base = Switchboard::empty(self.n);
        for &e in &edges {
            for j in self.rel.ones_in_row(self.edge(e)) {
                base.set_lt(e, edges[j - self.n], true);
            }
        }
        let mut l = LabeledSwitchboard::all_down(base);
        for a in 0..self.n {
            for j in self.rel.ones_in_row(a) {
                l.set_up(a, edges[j - self.n], true);
            }
        }
        l.is_valid().then_some(l)
    }
}

/// A seeded random two-type over a base of `base_size` points: a random
/// one-point extension `B ∪ {s}` is doubled into `B ∪ {s, t}` with both
/// points of the same one-type, then random cross facts between `s` and
/// `t` are kept whenever the result stays valid and both one-point
/// restrictions stay unchanged. Base ids are `0..base_size`, `s` and `t`
/// follow.
pub fn random_two_type(base_size: usize, seed: u64, density: f64) -> TwoTypeSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = base_size;
    let one = random_labeled(k + 1, rng.gen(), density);
    let (s, t) = (k, k + 1);
    let side_s: Vec<Element> = (0..=k).collect();
    let mut side_t: Vec<Element> = (0..k).collect();
    side_t.push(t);

    let mut facts = NodeRelation::new(k + 2);
    facts.add_structure(&one, &side_s);
    facts.add_structure(&one, &side_t);
    let mut current = facts.close().expect("the free doubling is a valid structure");

    enum Cand {
        Lt(Edge, Edge),
        Up(Element, Edge),
    }
    let mut cands = Vec::new();
    for b in 0..k {
        for c in (0..k).filter(|&c| c != b) {
            cands.push(Cand::Lt(Edge::of(s, b), Edge::of(t, c)));
            cands.push(Cand::Lt(Edge::of(t, c), Edge::of(s, b)));
        }
        cands.push(Cand::Up(s, Edge::of(t, b)));
        cands.push(Cand::Up(t, Edge::of(s, b)));
        cands.push(Cand::Up(b, Edge::of(s, t)));
    }
    for g in edges_lex(k) {
        cands.push(Cand::Lt(Edge::of(s, t), g));
        cands.push(Cand::Lt(g, Edge::of(s, t)));
    }
    cands.shuffle(&mut rng);
    for cand in cands {
        if !rng.gen_bool(density) {
            continue;
        }
        let mut trial = NodeRelation::new(k + 2);
        trial.add_structure(&current, &(0..k + 2).collect::<Vec<_>>());
        match cand {
            Cand::Lt(e, f) => trial.rel.set(trial.edge(e), trial.edge(f), true),
            Cand::Up(a, e) => trial.rel.set(a, trial.edge(e), true),
        }
        if let Some(next) = trial.close() {
            let keeps = |ids: &[Element]| next.induced(ids).map(|r| r.same_facts(&one)).unwrap_or(false);
            if keeps(&side_s) && keeps(&side_t) {
                current = next;
            }
        }
    }
    TwoTypeSpec { structure: current, s, t }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::label_canonical;
    use crate::order::chain_switchboard;

    #[test]
    fn witness_up_on_short_chain() {
        let m = label_canonical(&chain_switchboard(2)).unwrap();
        let (out, w) = witness_up(&m, 0, Edge::of(2, 3)).unwrap();
        assert_eq!(w, 4);
        assert!(out.is_valid());
        assert!(out.lt(Edge::of(0, 4), Edge::of(2, 3)));
        assert!(out.induced(&[0, 1, 2, 3]).unwrap().same_facts(&m));
        assert!(witness_up(&m, 2, Edge::of(2, 3)).is_err());
        assert!(witness_up(&m, 2, Edge::of(0, 1)).is_err());
    }

    #[test]
    fn witness_down_cases() {
        let m = label_canonical(&chain_switchboard(2)).unwrap();
        let (out, w) = witness_down(&m, 2, Edge::of(0, 1)).unwrap();
        assert!(out.lt(Edge::of(0, 1), Edge::of(2, w)));
        assert!(witness_down(&m, 0, Edge::of(2, 3)).is_err());
        let flat = LabeledSwitchboard::all_down(Switchboard::empty(3));
        let (out, w) = witness_down(&flat, 0, Edge::of(1, 2)).unwrap();
        assert!(out.is_valid() && out.lt(Edge::of(1, 2), Edge::of(0, w)));
    }

    #[test]
    fn random_labeled_is_deterministic_and_valid() {
        for seed in 0..50 {
            let a = random_labeled(7, seed, 0.3);
            assert_eq!(a, random_labeled(7, seed, 0.3));
            assert!(a.is_valid());
        }
        assert_eq!(random_labeled(3, 9, 1.0).base().order_size(), 0);
        assert_ne!(random_labeled(8, 1, 0.5), random_labeled(8, 2, 0.5));
    }

    #[test]
    fn random_two_type_keeps_one_types() {
        for seed in 0..30 {
            let q = random_two_type(3, seed, 0.4);
            assert!(q.structure.is_valid());
            let a = q.structure.induced(&[0, 1, 2, 3]).unwrap();
            let b = q.structure.induced(&[0, 1, 2, 4]).unwrap();
            assert!(a.same_facts(&b));
        }
    }

    #[test]
    fn free_copy_over_empty_base() {
        let m = label_canonical(&chain_switchboard(2)).unwrap();
        let spec = OneTypeSpec::new(LabeledSwitchboard::all_down(Switchboard::empty(1)), 0).unwrap();
        let (out, e2) = free_copy(&m, &[], 1, &spec).unwrap();
        assert_eq!(e2, 4);
        assert!(out.base().edges().all(|e| !e.contains(e2) || out.base().above(e).count() + out.base().below(e).count() == 0));
        assert!(free_copy(&m, &[1], 1, &spec).is_err());
        assert!(free_copy(&m, &[0], 1, &spec).is_err());
    }
}
