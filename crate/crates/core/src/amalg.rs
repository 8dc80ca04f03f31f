//! Amalgamation: of transitive relations, of one-point extensions (freely),
//! and of arbitrary labeled switchboards over a common substructure.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::bits::BitMatrix;
use crate::board::{check_id_list, LabeledSwitchboard, Switchboard};
use crate::edge::{edge_count, edges_by_index, Edge, Element};
use crate::error::{Error, Result};

/// A transitive relation on an explicit carrier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialRelation<T: Ord> {
    carrier: BTreeSet<T>,
    pairs: BTreeSet<(T, T)>,
}

impl<T: Ord + Clone + fmt::Debug> PartialRelation<T> {
    /// Checks that every pair lies in the carrier and that the pairs are
    /// transitive.
    pub fn new(carrier: BTreeSet<T>, pairs: BTreeSet<(T, T)>) -> Result<Self> {
        for (a, b) in &pairs {
            if !carrier.contains(a) || !carrier.contains(b) {
                return Err(Error::Format(format!("pair ({a:?},{b:?}) leaves the carrier")));
            }
        }
        let r = PartialRelation { carrier, pairs };
        if let Some(min) = r.carrier.first() {
            for (a, b) in &r.pairs {
                let succ = r.pairs.range((b.clone(), min.clone())..).take_while(|(b2, _)| b2 == b);
                for (_, c) in succ {
                    if !r.pairs.contains(&(a.clone(), c.clone())) {
                        return Err(Error::Precondition(format!(
                            "relation is not transitive: {a:?} < {b:?} < {c:?} but not {a:?} < {c:?}"
                        )));
                    }
                }
            }
        }
        Ok(r)
    }

    pub fn carrier(&self) -> &BTreeSet<T> {
        &self.carrier
    }

    pub fn pairs(&self) -> &BTreeSet<(T, T)> {
        &self.pairs
    }

    pub fn holds(&self, a: &T, b: &T) -> bool {
        self.pairs.contains(&(a.clone(), b.clone()))
    }

    /// The relation restricted to `sub ∩ carrier`.
    pub fn restrict(&self, sub: &BTreeSet<T>) -> PartialRelation<T> {
        let carrier: BTreeSet<T> = self.carrier.intersection(sub).cloned().collect();
        let pairs = self
            .pairs
            .iter()
            .filter(|(a, b)| carrier.contains(a) && carrier.contains(b))
            .cloned()
            .collect();
        PartialRelation { carrier, pairs }
    }
}

/// Transitive closure of `r1 ∪ r2` on the union of the carriers.
///
/// The inputs must agree on the intersection of their carriers.
pub fn union_closure<T: Ord + Clone + fmt::Debug>(
    r1: &PartialRelation<T>,
    r2: &PartialRelation<T>,
) -> Result<PartialRelation<T>> {
    let shared: BTreeSet<T> = r1.carrier.intersection(&r2.carrier).cloned().collect();
    if r1.restrict(&shared) != r2.restrict(&shared) {
        return Err(Error::Precondition("relations disagree on the shared carrier".into()));
    }
    let carrier: Vec<T> = r1.carrier.union(&r2.carrier).cloned().collect();
    let index = |x: &T| carrier.binary_search(x).unwrap();
    let mut m = BitMatrix::new(carrier.len(), carrier.len());
    for (a, b) in r1.pairs.iter().chain(&r2.pairs) {
        m.set(index(a), index(b), true);
    }
    m.close_transitively();
    let pairs = (0..carrier.len())
        .flat_map(|i| m.ones_in_row(i).map(move |j| (i, j)).collect::<Vec<_>>())
        .map(|(i, j)| (carrier[i].clone(), carrier[j].clone()))
        .collect();
    Ok(PartialRelation { carrier: carrier.into_iter().collect(), pairs })
}

/// Freely amalgamates two one-point extensions of `s`.
///
/// Both extensions must have `s` on ids `0..k` and their new point at id
/// `k`. The result has `s` on `0..k`, the first new point at `k` and the
/// second at `k + 1`; it restricts to each extension and the two new points
/// are freely amalgamated over `s`.
pub fn free_amalgam_one_point(
    s: &LabeledSwitchboard,
    a1ext: &LabeledSwitchboard,
    a2ext: &LabeledSwitchboard,
) -> Result<LabeledSwitchboard> {
    s.ensure_valid()?;
    a1ext.ensure_valid()?;
    a2ext.ensure_valid()?;
    let k = s.n();
    let prefix: Vec<Element> = (0..k).collect();
    for (side, ext) in [("first", a1ext), ("second", a2ext)] {
        if ext.n() != k + 1 || !ext.embeds(s, &prefix) {
            return Err(Error::Precondition(format!(
                "{side} input is not a one-point extension of the base on ids 0..{k}"
            )));
        }
    }
    Ok(free_amalgam_raw(a1ext, a2ext))
}

// Triangle relations of both sides as bit matrices over the nodes of the
// (k+2)-element carrier, united and closed. The edge {k, k+1} never gets a
// pair because neither input mentions it. Colex edge indices on 0..k+1 are
// also the indices of those edges on the larger carrier.
fn free_amalgam_raw(a1ext: &LabeledSwitchboard, a2ext: &LabeledSwitchboard) -> LabeledSwitchboard {
    let k = a1ext.n() - 1;
    let n = k + 2;
    let side = edge_count(k + 1);
    let second = |x: Element| if x == k { k + 1 } else { x };
    let first_ids: Vec<usize> = (0..side).collect();
    let second_ids: Vec<usize> =
        edges_by_index(k + 1).map(|e| e.map(second).expect("injective").index()).collect();
    let mut rel = BitMatrix::new(n + edge_count(n), n + edge_count(n));
    for (ext, ids, f) in [(a1ext, &first_ids, &(|x: Element| x) as &dyn Fn(Element) -> Element), (a2ext, &second_ids, &second)] {
        let (lt, up) = (ext.base().lt_bits(), ext.up_bits());
        for i in 0..side {
            for j in lt.ones_in_row(i) {
                rel.set(n + ids[i], n + ids[j], true);
            }
        }
        for a in 0..=k {
            for i in up.ones_in_row(a) {
                rel.set(f(a), n + ids[i], true);
            }
        }
    }
    rel.close_transitively();
    let mut base = Switchboard::empty(n);
    let edges: Vec<Edge> = edges_by_index(n).collect();
    for &e in &edges {
        for j in rel.ones_in_row(n + e.index()) {
            base.set_lt(e, edges[j - n], true);
        }
    }
    if !a1ext.base().names().is_empty() || a2ext.name(k).is_some() {
        let mut names = a1ext.base().names().clone();
        if let Some(nm) = a2ext.name(k) {
            if !names.values().any(|v| v == nm) {
                names.insert(k + 1, nm.to_string());
            }
        }
        base = base.with_names(names).expect("names checked");
    }
    let mut out = LabeledSwitchboard::all_down(base);
    for a in 0..n {
        for j in rel.ones_in_row(a) {
            out.set_up(a, edges[j - n], true);
        }
    }
    debug_assert!(out.is_valid());
    out
}

/// Which clause of the free-amalgamation definition fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum FreeCondition {
    /// `{a1,x} < {a2,y}` iff it factors through an edge of the base.
    I,
    /// `{a2,y} < {a1,x}` iff it factors through an edge of the base.
    II,
    /// `{a1,a2}` is incomparable to every other edge.
    III,
    /// every base element disfavors `{a1,a2}`.
    IV,
    /// `a1 ↑ {a2,x}` iff `a1 ↑ p < {a2,x}` for some base edge `p`.
    V,
    /// `a2 ↑ {a1,x}` iff `a2 ↑ p < {a1,x}` for some base edge `p`.
    VI,
}

impl fmt::Display for FreeCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FreeCondition::I => "(i)",
            FreeCondition::II => "(ii)",
            FreeCondition::III => "(iii)",
            FreeCondition::IV => "(iv)",
            FreeCondition::V => "(v)",
            FreeCondition::VI => "(vi)",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeFailure {
    pub condition: FreeCondition,
    /// Elements that exhibit the failure: `x, y` for (i)/(ii), the edge
    /// endpoints for (iii), `x` for (iv)–(vi).
    pub witness: Vec<Element>,
}

impl fmt::Display for FreeFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "condition {} fails at {:?}", self.condition, self.witness)
    }
}

fn check_pair_outside(m: &LabeledSwitchboard, base: &[Element], a1: Element, a2: Element) -> Result<()> {
    check_id_list(m.n(), base)?;
    if a1 == a2 {
        return Err(Error::Precondition(format!("the two points coincide ({a1})")));
    }
    for a in [a1, a2] {
        if a >= m.n() {
            return Err(Error::Precondition(format!("element {a} out of range")));
        }
        if base.contains(&a) {
            return Err(Error::Precondition(format!("element {a} lies in the base")));
        }
    }
    Ok(())
}

/// First failing condition of free amalgamation of `a1`, `a2` over `base`,
/// or `None` when all six hold.
pub fn free_amalgamation_failure(
    m: &LabeledSwitchboard,
    base: &[Element],
    a1: Element,
    a2: Element,
) -> Result<Option<FreeFailure>> {
    check_pair_outside(m, base, a1, a2)?;
    let base_edges: Vec<Edge> = base
        .iter()
        .enumerate()
        .flat_map(|(i, &p)| base[i + 1..].iter().map(move |&q| Edge::of(p, q)))
        .collect();
    let fail = |condition, witness| Ok(Some(FreeFailure { condition, witness }));

    for (cond, lo, hi) in [(FreeCondition::I, a1, a2), (FreeCondition::II, a2, a1)] {
        for &x in base {
            for &y in base {
                let (e, f) = (Edge::of(lo, x), Edge::of(hi, y));
                let direct = m.lt(e, f);
                let through = base_edges.iter().any(|&p| m.lt(e, p) && m.lt(p, f));
                if direct != through {
                    return fail(cond, vec![x, y]);
                }
            }
        }
    }
    let new_edge = Edge::of(a1, a2);
    let mut local: Vec<Element> = base.to_vec();
    local.extend([a1, a2]);
    for (i, &p) in local.iter().enumerate() {
        for &q in &local[i + 1..] {
            let g = Edge::of(p, q);
            if g != new_edge && m.base().comparable(new_edge, g) {
                return fail(FreeCondition::III, vec![g.lo(), g.hi()]);
            }
        }
    }
    for &x in base {
        if !m.down(x, new_edge) {
            return fail(FreeCondition::IV, vec![x]);
        }
    }
    for (cond, fav, other) in [(FreeCondition::V, a1, a2), (FreeCondition::VI, a2, a1)] {
        for &x in base {
            let target = Edge::of(other, x);
            let direct = m.up(fav, target);
            let through = base_edges.iter().any(|&p| m.up(fav, p) && m.lt(p, target));
            if direct != through {
                return fail(cond, vec![x]);
            }
        }
    }
    Ok(None)
}

pub fn is_freely_amalgamated(m: &LabeledSwitchboard, base: &[Element], a1: Element, a2: Element) -> Result<bool> {
    Ok(free_amalgamation_failure(m, base, a1, a2)?.is_none())
}

/// An amalgam with the embeddings of both sides (index: side id, value:
/// result id).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmalgamResult {
    pub result: LabeledSwitchboard,
    pub left_embedding: Vec<Element>,
    pub right_embedding: Vec<Element>,
}

impl AmalgamResult {
    /// Canonical text of the result followed by both embeddings.
    pub fn to_text(&self) -> String {
        let mut out = crate::format::write_labeled(&self.result);
        crate::format::write_embedding(&mut out, "left", &self.left_embedding);
        crate::format::write_embedding(&mut out, "right", &self.right_embedding);
        out
    }
}

/// Amalgamates `left` and `right` over `base`, which sits on ids `0..k` in
/// both.
pub fn amalgamate(
    base: &LabeledSwitchboard,
    left: &LabeledSwitchboard,
    right: &LabeledSwitchboard,
) -> Result<AmalgamResult> {
    let prefix: Vec<Element> = (0..base.n()).collect();
    amalgamate_along(base, left, &prefix, right, &prefix)
}

/// Amalgamates `left` and `right` over `base` along the given embeddings
/// (`left_map[i]` is the image of base element `i` in `left`).
///
/// Left ids are kept as they are. Right points outside the base are added
/// one at a time in ascending id order and numbered `left.n()`, `left.n()+1`,
/// and so on. Each such point is glued on by a chain of one-point free
/// amalgams that runs through the left points outside the current base in
/// ascending order.
pub fn amalgamate_along(
    base: &LabeledSwitchboard,
    left: &LabeledSwitchboard,
    left_map: &[Element],
    right: &LabeledSwitchboard,
    right_map: &[Element],
) -> Result<AmalgamResult> {
    base.ensure_valid()?;
    left.ensure_valid()?;
    right.ensure_valid()?;
    for (side, ext, map) in [("left", left, left_map), ("right", right, right_map)] {
        if !ext.embeds(base, map) {
            return Err(Error::Precondition(format!("{side} map is not an embedding of the base")));
        }
    }
    let mut current = left.clone();
    let mut right_embedding: BTreeMap<Element, Element> = BTreeMap::new();
    for (i, &r) in right_map.iter().enumerate() {
        right_embedding.insert(r, left_map[i]);
    }
    let mut known: Vec<Element> = right_map.to_vec();
    for c in 0..right.n() {
        if right_embedding.contains_key(&c) {
            continue;
        }
        let mut with_c = known.clone();
        with_c.push(c);
        let ext = right.induced(&with_c)?;
        let images: Vec<Element> = known.iter().map(|x| right_embedding[x]).collect();
        current = add_point(&current, &ext, &images)?;
        right_embedding.insert(c, current.n() - 1);
        known = with_c;
    }
    Ok(AmalgamResult {
        result: current,
        left_embedding: (0..left.n()).collect(),
        right_embedding: (0..right.n()).map(|c| right_embedding[&c]).collect(),
    })
}

/// Adds the new point of `ext` to `d`. `ext` has its base on ids
/// `0..images.len()` and its new point last; `images[i]` is where base
/// element `i` sits in `d`. The new point gets id `d.n()`.
pub(crate) fn add_point(d: &LabeledSwitchboard, ext: &LabeledSwitchboard, images: &[Element]) -> Result<LabeledSwitchboard> {
    debug_assert_eq!(ext.n(), images.len() + 1);
    debug_assert!(d.embeds(&ext.induced(&(0..images.len()).collect::<Vec<_>>())?, images));
    let mut list: Vec<Element> = images.to_vec();
    let mut glued = ext.clone();
    for r in 0..d.n() {
        if images.contains(&r) {
            continue;
        }
        list.push(r);
        let with_r = d.induced(&list)?;
        // glued: ids = list without r, then the new point
        glued = free_amalgam_raw(&with_r, &glued);
    }
    let mut perm = vec![0; d.n() + 1];
    for (pos, &x) in list.iter().enumerate() {
        perm[x] = pos;
    }
    perm[d.n()] = d.n();
    glued.induced(&perm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::label_canonical;
    use crate::labeling::{enumerate_labelings, EnumerationCap};

    fn e(a: usize, b: usize) -> Edge {
        Edge::of(a, b)
    }

    fn rel(carrier: &[u32], pairs: &[(u32, u32)]) -> PartialRelation<u32> {
        PartialRelation::new(carrier.iter().copied().collect(), pairs.iter().copied().collect()).unwrap()
    }

    #[test]
    fn closure_adds_transitive_pair() {
        let r = union_closure(&rel(&[0, 1], &[(0, 1)]), &rel(&[1, 2], &[(1, 2)])).unwrap();
        assert!(r.holds(&0, &2));
        assert_eq!(r.pairs().len(), 3);
    }

    #[test]
    fn disjoint_carriers_have_no_cross_pairs() {
        let r = union_closure(&rel(&[0, 1], &[(0, 1)]), &rel(&[2, 3], &[(3, 2)])).unwrap();
        assert_eq!(r.pairs().len(), 2);
    }

    #[test]
    fn disagreement_and_non_transitive_inputs() {
        assert!(union_closure(&rel(&[0, 1], &[(0, 1)]), &rel(&[0, 1], &[])).is_err());
        let bad = PartialRelation::new([0u32, 1, 2].into_iter().collect(), [(0, 1), (1, 2)].into_iter().collect());
        assert!(bad.is_err());
    }

    #[test]
    fn empty_base_gives_two_bare_points() {
        let s = LabeledSwitchboard::all_down(Switchboard::empty(0));
        let p = LabeledSwitchboard::all_down(Switchboard::empty(1));
        let out = free_amalgam_one_point(&s, &p, &p).unwrap();
        assert_eq!(out.n(), 2);
        assert!(out.lt_pairs().is_empty() && out.up_facts().is_empty());
        assert!(is_freely_amalgamated(&out, &[], 0, 1).unwrap());
    }

    // s=0, t=1, a1=2, a2=3
    #[test]
    fn favored_base_edge_does_not_leak() {
        let s = LabeledSwitchboard::all_down(Switchboard::empty(2));
        let a1 = LabeledSwitchboard::new(Switchboard::empty(3), [(2, e(0, 1))]).unwrap();
        let a2 = LabeledSwitchboard::all_down(Switchboard::empty(3));
        let out = free_amalgam_one_point(&s, &a1, &a2).unwrap();
        assert!(out.lt_pairs().is_empty());
        assert_eq!(out.up_facts(), vec![(2, e(0, 1))]);
        for (x, edge) in [(2, e(3, 0)), (2, e(3, 1)), (3, e(2, 0)), (3, e(2, 1)), (0, e(2, 3)), (1, e(2, 3))] {
            assert!(out.down(x, edge));
        }
        // the six conditions evaluated directly
        assert_eq!(free_amalgamation_failure(&out, &[0, 1], 2, 3).unwrap(), None);
    }

    // s=0, t=1, u=2, v=3, a1=4, a2=4 (then 5)
    #[test]
    fn cross_relation_through_a_middle() {
        let a1 = label_canonical(&Switchboard::from_pairs(5, [(e(0, 4), e(2, 3))]).unwrap()).unwrap();
        // 0 ↑ {2,3} is in the base, so 0 ↑ {1,4} follows upward.
        let a2_order = Switchboard::from_pairs(5, [(e(2, 3), e(1, 4))]).unwrap();
        let a2 = LabeledSwitchboard::new(a2_order, [(0, e(2, 3)), (0, e(1, 4)), (2, e(1, 4)), (3, e(1, 4))]).unwrap();
        let s = a1.induced(&[0, 1, 2, 3]).unwrap();
        let out = free_amalgam_one_point(&s, &a1, &a2).unwrap();
        assert!(out.lt(e(0, 4), e(1, 5)));
        assert!(out.lt(e(0, 4), e(2, 3)) && out.lt(e(2, 3), e(1, 5)));
        assert!(out.is_valid());
        assert!(is_freely_amalgamated(&out, &[0, 1, 2, 3], 4, 5).unwrap());
        assert_eq!(out.restrict(&[0, 1, 2, 3, 4]).unwrap(), a1);
    }

    #[test]
    fn direct_cross_relation_breaks_condition_one() {
        let m = label_canonical(&Switchboard::from_pairs(4, [(e(0, 2), e(1, 3))]).unwrap()).unwrap();
        let f = free_amalgamation_failure(&m, &[0, 1], 2, 3).unwrap().unwrap();
        assert_eq!(f.condition, FreeCondition::I);
        assert_eq!(f.witness, vec![0, 1]);
    }

    #[test]
    fn base_favoring_new_edge_breaks_condition_four() {
        let m = LabeledSwitchboard::new(Switchboard::empty(3), [(0, e(1, 2))]).unwrap();
        let f = free_amalgamation_failure(&m, &[0], 1, 2).unwrap().unwrap();
        assert_eq!(f.condition, FreeCondition::IV);
    }

    #[test]
    fn preconditions() {
        let m = LabeledSwitchboard::all_down(Switchboard::empty(3));
        assert!(matches!(free_amalgamation_failure(&m, &[0], 0, 1), Err(Error::Precondition(_))));
        assert!(matches!(free_amalgamation_failure(&m, &[0], 1, 1), Err(Error::Precondition(_))));
        let s = LabeledSwitchboard::all_down(Switchboard::empty(1));
        let not_ext = LabeledSwitchboard::all_down(Switchboard::empty(3));
        let ext = LabeledSwitchboard::all_down(Switchboard::empty(2));
        assert!(matches!(free_amalgam_one_point(&s, &not_ext, &ext), Err(Error::Precondition(_))));
    }

    #[test]
    fn exhaustive_small_bases() {
        for k in 0..=2 {
            let bases = enumerate_labelings(&Switchboard::empty(k), EnumerationCap::default()).unwrap();
            for s in &bases {
                let exts: Vec<_> = enumerate_labelings(&Switchboard::empty(k + 1), EnumerationCap::default())
                    .unwrap()
                    .into_iter()
                    .filter(|x| x.embeds(s, &(0..k).collect::<Vec<_>>()))
                    .collect();
                for a1 in &exts {
                    for a2 in &exts {
                        let out = free_amalgam_one_point(s, a1, a2).unwrap();
                        assert!(out.validate().is_valid());
                        let base: Vec<_> = (0..k).collect();
                        assert!(is_freely_amalgamated(&out, &base, k, k + 1).unwrap());
                        assert!(is_freely_amalgamated(&out, &base, k + 1, k).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn amalgamate_base_cases() {
        let c = label_canonical(&crate::order::chain_switchboard(2)).unwrap();
        let a = c.restrict(&[0, 1, 2]).unwrap();
        // A = B: the result is a copy of C
        let r = amalgamate(&a, &a, &c).unwrap();
        assert!(r.result.isomorphic(&c));
        assert!(r.result.embeds(&c, &r.right_embedding));
        // A empty, B and C singletons
        let empty = LabeledSwitchboard::all_down(Switchboard::empty(0));
        let one = LabeledSwitchboard::all_down(Switchboard::empty(1));
        let r = amalgamate(&empty, &one, &one).unwrap();
        assert_eq!(r.result.n(), 2);
        assert!(r.result.lt_pairs().is_empty() && r.result.up_facts().is_empty());
        // one new point on each side
        let b = LabeledSwitchboard::new(Switchboard::empty(4), [(3, e(0, 1)), (0, e(2, 3))]).unwrap();
        let r = amalgamate(&a, &b, &c).unwrap();
        let direct = free_amalgam_one_point(&a, &b, &c).unwrap();
        assert_eq!(r.result, direct);
        assert_eq!(r.right_embedding, vec![0, 1, 2, 4]);
    }

    #[test]
    fn embeddings_must_embed() {
        let a = LabeledSwitchboard::new(Switchboard::empty(3), [(0, e(1, 2))]).unwrap();
        let b = LabeledSwitchboard::all_down(Switchboard::empty(3));
        assert!(matches!(amalgamate(&a, &b, &a), Err(Error::Precondition(_))));
    }
}
