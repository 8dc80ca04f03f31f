//! Switchboards and labeled switchboards.
//!
//! A switchboard is a strict partial order on the edges of a finite ground set
//! in which edges that share an element are incomparable. A labeled
//! switchboard adds a favor relation `a ↑ e` between elements and edges not
//! containing them; disfavor `a ↓ e` is whatever remains.
//!
//! Structures are plain data. They may hold facts that break the axioms so
//! that [`Switchboard::validate`] can report them; operations that need a
//! valid input check it up front.

use std::collections::BTreeMap;
use std::fmt;

use crate::bits::BitMatrix;
use crate::edge::{edge_count, edges_by_index, edges_lex, Edge, Element};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Switchboard {
    n: usize,
    lt: BitMatrix,
    names: BTreeMap<Element, String>,
}

impl Switchboard {
    pub fn empty(n: usize) -> Switchboard {
        let m = edge_count(n);
        Switchboard { n, lt: BitMatrix::new(m, m), names: BTreeMap::new() }
    }

    /// Exactly the given order pairs; nothing is closed or repaired.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (Edge, Edge)>) -> Result<Switchboard> {
        let mut s = Switchboard::empty(n);
        for (e, f) in pairs {
            s.check_edge(e)?;
            s.check_edge(f)?;
            s.lt.set(e.index(), f.index(), true);
        }
        Ok(s)
    }

    /// The transitive closure of the given generating pairs.
    pub fn from_generators(n: usize, pairs: impl IntoIterator<Item = (Edge, Edge)>) -> Result<Switchboard> {
        let mut s = Switchboard::from_pairs(n, pairs)?;
        s.lt.close_transitively();
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        edge_count(self.n)
    }

    pub(crate) fn check_element(&self, x: Element) -> Result<()> {
        if x < self.n {
            Ok(())
        } else {
            Err(Error::Format(format!("element {x} out of range for n = {}", self.n)))
        }
    }

    pub(crate) fn check_edge(&self, e: Edge) -> Result<()> {
        self.check_element(e.hi())
    }

    /// `e < f`.
    #[inline]
    pub fn lt(&self, e: Edge, f: Edge) -> bool {
        self.lt.get(e.index(), f.index())
    }

    pub fn comparable(&self, e: Edge, f: Edge) -> bool {
        self.lt(e, f) || self.lt(f, e)
    }

    pub(crate) fn lt_bits(&self) -> &BitMatrix {
        &self.lt
    }

    pub(crate) fn set_lt(&mut self, e: Edge, f: Edge, v: bool) {
        self.lt.set(e.index(), f.index(), v);
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> {
        edges_lex(self.n)
    }

    /// Edges strictly above `e`.
    pub fn above(&self, e: Edge) -> impl Iterator<Item = Edge> + '_ {
        self.lt.ones_in_row(e.index()).map(Edge::from_index)
    }

    /// Edges strictly below `e`.
    pub fn below(&self, e: Edge) -> impl Iterator<Item = Edge> + '_ {
        let col = e.index();
        edges_by_index(self.n).filter(move |g| self.lt.get(g.index(), col))
    }

    /// All `(e, f)` with `e < f`, sorted lexicographically.
    pub fn lt_pairs(&self) -> Vec<(Edge, Edge)> {
        let mut out: Vec<(Edge, Edge)> = edges_by_index(self.n)
            .flat_map(|e| self.above(e).map(move |f| (e, f)))
            .collect();
        out.sort();
        out
    }

    pub fn order_size(&self) -> usize {
        self.lt.count_ones()
    }

    pub fn name(&self, x: Element) -> Option<&str> {
        self.names.get(&x).map(String::as_str)
    }

    pub fn names(&self) -> &BTreeMap<Element, String> {
        &self.names
    }

    /// Attaches display names; names must be unique and ids in range.
    pub fn with_names(mut self, names: BTreeMap<Element, String>) -> Result<Switchboard> {
        let mut seen = std::collections::BTreeSet::new();
        for (&id, name) in &names {
            self.check_element(id)?;
            if !seen.insert(name.as_str()) {
                return Err(Error::Format(format!("duplicate element name {name}")));
            }
        }
        self.names = names;
        Ok(self)
    }

    /// Same order facts, ignoring names.
    pub fn same_facts(&self, other: &Switchboard) -> bool {
        self.n == other.n && self.lt == other.lt
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        self.order_violations(&mut violations);
        ValidationReport { violations }
    }

    pub fn is_valid(&self) -> bool {
        for e in edges_by_index(self.n) {
            for f in self.above(e) {
                if e == f || e.shares_vertex(f) || self.lt(f, e) || !self.lt.row_subset(f.index(), &self.lt, e.index()) {
                    return false;
                }
            }
        }
        true
    }

    // The report is only built on the failing path.
    pub fn ensure_valid(&self) -> Result<()> {
        if self.is_valid() {
            return Ok(());
        }
        Err(Error::Invalid(self.validate()))
    }

    fn order_violations(&self, out: &mut Vec<Violation>) {
        let edges: Vec<Edge> = self.edges().collect();
        for &e in &edges {
            for &f in &edges {
                if !self.lt(e, f) {
                    continue;
                }
                if e == f {
                    out.push(Violation::Irreflexive { e });
                    continue;
                }
                if let Some(x) = [f.lo(), f.hi()].into_iter().find(|&x| e.contains(x)) {
                    out.push(Violation::SwitchboardAxiom { x, e, f });
                }
                if e < f && self.lt(f, e) {
                    out.push(Violation::Asymmetric { e, f });
                }
            }
        }
        for &e in &edges {
            for &f in &edges {
                if e == f || !self.lt(e, f) {
                    continue;
                }
                for &g in &edges {
                    if g != e && g != f && self.lt(f, g) && !self.lt(e, g) {
                        out.push(Violation::Transitive { e, f, g });
                    }
                }
            }
        }
    }

    /// The structure induced on `ids`, renumbered so that `ids[i]` becomes `i`.
    pub fn induced(&self, ids: &[Element]) -> Result<Switchboard> {
        check_id_list(self.n, ids)?;
        let k = ids.len();
        let mut out = Switchboard::empty(k);
        for e in edges_by_index(k) {
            let pe = Edge::of(ids[e.lo()], ids[e.hi()]);
            for f in edges_by_index(k) {
                let pf = Edge::of(ids[f.lo()], ids[f.hi()]);
                if self.lt(pe, pf) {
                    out.set_lt(e, f, true);
                }
            }
        }
        out.names = ids
            .iter()
            .enumerate()
            .filter_map(|(i, id)| self.names.get(id).map(|nm| (i, nm.clone())))
            .collect();
        Ok(out)
    }
}

pub(crate) fn check_id_list(n: usize, ids: &[Element]) -> Result<()> {
    let mut seen = vec![false; n];
    for &x in ids {
        if x >= n {
            return Err(Error::Format(format!("element {x} out of range for n = {n}")));
        }
        if std::mem::replace(&mut seen[x], true) {
            return Err(Error::Format(format!("element {x} listed twice")));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabeledSwitchboard {
    base: Switchboard,
    // rows: elements, cols: edge indices
    up: BitMatrix,
}

impl LabeledSwitchboard {
    /// Every `(a, e)` with `a ∉ e` is disfavored.
    pub fn all_down(base: Switchboard) -> LabeledSwitchboard {
        let up = BitMatrix::new(base.n(), base.edge_count());
        LabeledSwitchboard { base, up }
    }

    /// Favor facts exactly as given. Facts `a ↑ e` with `a ∈ e` are kept so
    /// that validation can report them.
    pub fn new(base: Switchboard, ups: impl IntoIterator<Item = (Element, Edge)>) -> Result<LabeledSwitchboard> {
        let mut l = LabeledSwitchboard::all_down(base);
        for (a, e) in ups {
            l.base.check_element(a)?;
            l.base.check_edge(e)?;
            l.up.set(a, e.index(), true);
        }
        Ok(l)
    }

    pub fn base(&self) -> &Switchboard {
        &self.base
    }

    pub fn into_base(self) -> Switchboard {
        self.base
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn lt(&self, e: Edge, f: Edge) -> bool {
        self.base.lt(e, f)
    }

    /// `a ↑ e`.
    #[inline]
    pub fn up(&self, a: Element, e: Edge) -> bool {
        self.up.get(a, e.index())
    }

    /// `a ↓ e`, derived: `a ∉ e` and not `a ↑ e`.
    #[inline]
    pub fn down(&self, a: Element, e: Edge) -> bool {
        !e.contains(a) && !self.up(a, e)
    }

    pub(crate) fn up_bits(&self) -> &BitMatrix {
        &self.up
    }

    pub(crate) fn set_up(&mut self, a: Element, e: Edge, v: bool) {
        self.up.set(a, e.index(), v);
    }

    /// All `(a, e)` with `a ↑ e`, sorted.
    pub fn up_facts(&self) -> Vec<(Element, Edge)> {
        let mut out: Vec<(Element, Edge)> = (0..self.n())
            .flat_map(|a| self.up.ones_in_row(a).map(move |i| (a, Edge::from_index(i))))
            .collect();
        out.sort();
        out
    }

    pub fn lt_pairs(&self) -> Vec<(Edge, Edge)> {
        self.base.lt_pairs()
    }

    pub fn name(&self, x: Element) -> Option<&str> {
        self.base.name(x)
    }

    pub fn with_names(mut self, names: BTreeMap<Element, String>) -> Result<LabeledSwitchboard> {
        self.base = self.base.with_names(names)?;
        Ok(self)
    }

    /// Same order and favor facts, ignoring names.
    pub fn same_facts(&self, other: &LabeledSwitchboard) -> bool {
        self.base.same_facts(&other.base) && self.up == other.up
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        self.base.order_violations(&mut violations);
        let edges: Vec<Edge> = self.base.edges().collect();
        for a in 0..self.n() {
            for &e in &edges {
                if self.up(a, e) && e.contains(a) {
                    violations.push(Violation::Trichotomy { a, e });
                }
            }
            for &e in &edges {
                if self.up(a, e) {
                    for &f in &edges {
                        if self.lt(e, f) && !(self.up(a, f) && !f.contains(a)) {
                            violations.push(Violation::Upward { a, e, f });
                        }
                    }
                }
                if self.down(a, e) {
                    for &f in &edges {
                        if self.lt(f, e) && !self.down(a, f) {
                            violations.push(Violation::Downward { a, e, f });
                        }
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    pub fn is_valid(&self) -> bool {
        if !self.base.is_valid() {
            return false;
        }
        let lt = &self.base.lt;
        // Trichotomy, then upward: everything above a favored edge is favored.
        for a in 0..self.n() {
            for i in self.up.ones_in_row(a) {
                if Edge::from_index(i).contains(a) || !lt.row_subset(i, &self.up, a) {
                    return false;
                }
            }
        }
        // Given the above, downward fails only when some f < e has a ∈ f
        // and a ↓ e, i.e. an endpoint of f does not favor all of above(f).
        edges_by_index(self.n())
            .all(|f| lt.row_subset(f.index(), &self.up, f.lo()) && lt.row_subset(f.index(), &self.up, f.hi()))
    }

    // The report is only built on the failing path.
    pub fn ensure_valid(&self) -> Result<()> {
        if self.is_valid() {
            return Ok(());
        }
        Err(Error::Invalid(self.validate()))
    }

    /// Favor set, incident antichain and disfavor set of `a`, in edge lex order.
    pub fn tripartition(&self, a: Element) -> Tripartition {
        let mut t = Tripartition::default();
        for e in self.base.edges() {
            if e.contains(a) {
                t.incident.push(e);
            } else if self.up(a, e) {
                t.favored.push(e);
            } else {
                t.disfavored.push(e);
            }
        }
        t
    }

    pub fn induced(&self, ids: &[Element]) -> Result<LabeledSwitchboard> {
        let base = self.base.induced(ids)?;
        let mut out = LabeledSwitchboard::all_down(base);
        for (a, &pa) in ids.iter().enumerate() {
            for e in edges_by_index(ids.len()) {
                if self.up(pa, Edge::of(ids[e.lo()], ids[e.hi()])) {
                    out.set_up(a, e, true);
                }
            }
        }
        Ok(out)
    }

    /// Induced substructure on `subset`, renumbered in ascending id order.
    pub fn restrict(&self, subset: &[Element]) -> Result<LabeledSwitchboard> {
        let mut ids = subset.to_vec();
        ids.sort_unstable();
        ids.dedup();
        self.induced(&ids)
    }

    /// Whether `map` (small id → self id) embeds `small` into `self`.
    pub fn embeds(&self, small: &LabeledSwitchboard, map: &[Element]) -> bool {
        if map.len() != small.n() || map.iter().any(|&x| x >= self.n()) {
            return false;
        }
        let mut seen = vec![false; self.n()];
        if map.iter().any(|&x| std::mem::replace(&mut seen[x], true)) {
            return false;
        }
        // Injective, so every image edge is proper.
        let image = |e: Edge| Edge::of(map[e.lo()], map[e.hi()]);
        let edges: Vec<Edge> = edges_by_index(small.n()).collect();
        edges.iter().all(|&e| {
            let ie = image(e);
            (0..small.n()).all(|a| e.contains(a) || small.up(a, e) == self.up(map[a], ie))
                && edges.iter().all(|&f| small.lt(e, f) == self.lt(ie, image(f)))
        })
    }

    /// A bijection `map` with `map[i]` the image of `i` in `other`
    /// preserving order and favor both ways, if one exists.
    pub fn isomorphism(&self, other: &LabeledSwitchboard) -> Option<Vec<Element>> {
        if self.n() != other.n()
            || self.base.order_size() != other.base.order_size()
            || self.up.count_ones() != other.up.count_ones()
        {
            return None;
        }
        let sig_a: Vec<_> = (0..self.n()).map(|x| self.signature(x)).collect();
        let sig_b: Vec<_> = (0..other.n()).map(|x| other.signature(x)).collect();
        let mut map = Vec::with_capacity(self.n());
        let mut used = vec![false; self.n()];
        if self.extend_iso(other, &sig_a, &sig_b, &mut map, &mut used) {
            Some(map)
        } else {
            None
        }
    }

    pub fn isomorphic(&self, other: &LabeledSwitchboard) -> bool {
        self.isomorphism(other).is_some()
    }

    fn signature(&self, x: Element) -> (usize, usize, usize, usize) {
        let favors = self.up.ones_in_row(x).count();
        let favored_by = (0..self.n())
            .map(|a| self.up.ones_in_row(a).filter(|&i| Edge::from_index(i).contains(x)).count())
            .sum();
        let (mut below, mut above) = (0, 0);
        for e in self.base.edges().filter(|e| e.contains(x)) {
            above += self.base.above(e).count();
            below += self.base.below(e).count();
        }
        (favors, favored_by, below, above)
    }

    fn extend_iso(
        &self,
        other: &LabeledSwitchboard,
        sig_a: &[(usize, usize, usize, usize)],
        sig_b: &[(usize, usize, usize, usize)],
        map: &mut Vec<Element>,
        used: &mut [bool],
    ) -> bool {
        let i = map.len();
        if i == self.n() {
            return true;
        }
        for j in 0..other.n() {
            if used[j] || sig_a[i] != sig_b[j] {
                continue;
            }
            map.push(j);
            if self.consistent_at(other, map) {
                used[j] = true;
                if self.extend_iso(other, sig_a, sig_b, map, used) {
                    return true;
                }
                used[j] = false;
            }
            map.pop();
        }
        false
    }

    // Checks every fact whose elements are all mapped and that mentions the
    // most recently mapped element.
    fn consistent_at(&self, other: &LabeledSwitchboard, map: &[Element]) -> bool {
        let i = map.len() - 1;
        let img = |e: Edge| Edge::of(map[e.lo()], map[e.hi()]);
        let k = map.len();
        let edges: Vec<Edge> = edges_by_index(k).collect();
        for &e in &edges {
            for &f in &edges {
                if (e.contains(i) || f.contains(i)) && self.lt(e, f) != other.lt(img(e), img(f)) {
                    return false;
                }
            }
            for (a, &ma) in map.iter().enumerate() {
                if (a == i || e.contains(i)) && self.up(a, e) != other.up(ma, img(e)) {
                    return false;
                }
            }
        }
        true
    }
}

/// The three blocks of edges determined by one element.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tripartition {
    pub favored: Vec<Edge>,
    pub incident: Vec<Edge>,
    pub disfavored: Vec<Edge>,
}

/// Expands a valid switchboard with `a ↑ e` iff some `{a, z} < e`.
pub fn label_canonical(s: &Switchboard) -> Result<LabeledSwitchboard> {
    s.ensure_valid()?;
    let mut l = LabeledSwitchboard::all_down(s.clone());
    for e in edges_by_index(s.n()) {
        for g in s.below(e) {
            l.set_up(g.lo(), e, true);
            l.set_up(g.hi(), e, true);
        }
    }
    Ok(l)
}

/// One axiom failure with the tuple that exhibits it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Irreflexive { e: Edge },
    Asymmetric { e: Edge, f: Edge },
    Transitive { e: Edge, f: Edge, g: Edge },
    /// `e < f` although both contain `x`.
    SwitchboardAxiom { x: Element, e: Edge, f: Edge },
    /// `a ↑ e` although `a ∈ e`.
    Trichotomy { a: Element, e: Edge },
    /// `a ↑ e`, `e < f`, but not `a ↑ f`.
    Upward { a: Element, e: Edge, f: Edge },
    /// `a ↓ e`, `f < e`, but not `a ↓ f`.
    Downward { a: Element, e: Edge, f: Edge },
}

impl Violation {
    pub fn axiom(&self) -> &'static str {
        match self {
            Violation::Irreflexive { .. } => "irreflexive",
            Violation::Asymmetric { .. } => "asymmetric",
            Violation::Transitive { .. } => "transitive",
            Violation::SwitchboardAxiom { .. } => "switchboard",
            Violation::Trichotomy { .. } => "trichotomy",
            Violation::Upward { .. } => "upward",
            Violation::Downward { .. } => "downward",
        }
    }

    /// Re-checks the witness against an unlabeled structure. Label
    /// violations never reproduce here.
    pub fn reproduces_in(&self, s: &Switchboard) -> bool {
        match *self {
            Violation::Irreflexive { e } => s.lt(e, e),
            Violation::Asymmetric { e, f } => s.lt(e, f) && s.lt(f, e),
            Violation::Transitive { e, f, g } => s.lt(e, f) && s.lt(f, g) && !s.lt(e, g),
            Violation::SwitchboardAxiom { x, e, f } => e != f && e.contains(x) && f.contains(x) && s.lt(e, f),
            _ => false,
        }
    }

    /// Re-checks the witness against a labeled structure.
    pub fn reproduces_in_labeled(&self, l: &LabeledSwitchboard) -> bool {
        match *self {
            Violation::Trichotomy { a, e } => e.contains(a) && l.up(a, e),
            Violation::Upward { a, e, f } => l.up(a, e) && l.lt(e, f) && (f.contains(a) || !l.up(a, f)),
            Violation::Downward { a, e, f } => l.down(a, e) && l.lt(f, e) && !l.down(a, f),
            _ => self.reproduces_in(l.base()),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "{} ", self.axiom())?;
        match self {
            Violation::Irreflexive { e } => write!(fm, "({e})"),
            Violation::Asymmetric { e, f } => write!(fm, "({e},{f})"),
            Violation::Transitive { e, f, g } => write!(fm, "({e},{f},{g})"),
            Violation::SwitchboardAxiom { x, e, f } => write!(fm, "({x},{e},{f})"),
            Violation::Trichotomy { a, e } => write!(fm, "({a},{e})"),
            Violation::Upward { a, e, f } | Violation::Downward { a, e, f } => write!(fm, "({a},{e},{f})"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}
