//! Quantifier-free types over a base, the symmetry predicates on pairs, and
//! the sequence construction that forces distinguished and symmetric pairs.

use std::fmt::{self, Write as _};

use crate::amalg::{add_point, free_amalgam_one_point, is_freely_amalgamated};
use crate::board::{check_id_list, LabeledSwitchboard};
use crate::edge::{Edge, Element};
use crate::error::{Error, Result};
use crate::generic::TwoTypeSpec;

/// A tuple slot or a position in the (ascending) base list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TypeTerm {
    Slot(usize),
    Base(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TypeFact {
    Eq(TypeTerm, TypeTerm),
    /// `{a,b} < {c,d}` with each pair in term order.
    Lt([TypeTerm; 2], [TypeTerm; 2]),
    Up(TypeTerm, [TypeTerm; 2]),
    Down(TypeTerm, [TypeTerm; 2]),
}

/// The atomic diagram of a tuple together with a base, sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QfType {
    pub arity: usize,
    pub base_len: usize,
    pub facts: Vec<TypeFact>,
}

impl fmt::Display for TypeTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeTerm::Slot(i) => write!(f, "x{i}"),
            TypeTerm::Base(i) => write!(f, "b{i}"),
        }
    }
}

impl fmt::Display for TypeFact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeFact::Eq(a, b) => write!(f, "eq({a},{b})"),
            TypeFact::Lt([a, b], [c, d]) => write!(f, "lt({a},{b},{c},{d})"),
            TypeFact::Up(a, [b, c]) => write!(f, "up({a},{b},{c})"),
            TypeFact::Down(a, [b, c]) => write!(f, "down({a},{b},{c})"),
        }
    }
}

/// The quantifier-free type of `tuple` over `base`. Base terms refer to
/// positions in `base` sorted ascending.
pub fn qf_type(m: &LabeledSwitchboard, tuple: &[Element], base: &[Element]) -> Result<QfType> {
    check_id_list(m.n(), base)?;
    for &a in tuple {
        m.base().check_element(a)?;
        if base.contains(&a) {
            return Err(Error::Precondition(format!("tuple element {a} lies in the base")));
        }
    }
    let mut b = base.to_vec();
    b.sort_unstable();
    let terms: Vec<(TypeTerm, Element)> = tuple
        .iter()
        .enumerate()
        .map(|(i, &a)| (TypeTerm::Slot(i), a))
        .chain(b.iter().enumerate().map(|(i, &x)| (TypeTerm::Base(i), x)))
        .collect();
    let pairs: Vec<([TypeTerm; 2], Edge)> = terms
        .iter()
        .enumerate()
        .flat_map(|(i, &(s, x))| terms[i + 1..].iter().filter(move |&&(_, y)| y != x).map(move |&(t, y)| ([s, t], Edge::of(x, y))))
        .collect();
    let mut facts = Vec::new();
    for (i, &(s, x)) in terms.iter().enumerate() {
        for &(t, y) in &terms[i + 1..] {
            if x == y {
                facts.push(TypeFact::Eq(s, t));
            }
        }
    }
    for &(p, e) in &pairs {
        for &(q, f) in &pairs {
            if m.lt(e, f) {
                facts.push(TypeFact::Lt(p, q));
            }
        }
        for &(s, x) in &terms {
            if m.up(x, e) {
                facts.push(TypeFact::Up(s, p));
            } else if m.down(x, e) {
                facts.push(TypeFact::Down(s, p));
            }
        }
    }
    facts.sort_unstable();
    Ok(QfType { arity: tuple.len(), base_len: b.len(), facts })
}

fn check_pair(m: &LabeledSwitchboard, base: &[Element], a1: Element, a2: Element) -> Result<()> {
    check_id_list(m.n(), base)?;
    for a in [a1, a2] {
        m.base().check_element(a)?;
        if base.contains(&a) {
            return Err(Error::Precondition(format!("{a} lies in the base")));
        }
    }
    if a1 == a2 {
        return Err(Error::Precondition("the two points must differ".into()));
    }
    Ok(())
}

/// `{a1,b} < {a2,c} ⇔ {a2,b} < {a1,c}` for all distinct `b, c` in the base.
pub fn is_half_symmetric(m: &LabeledSwitchboard, base: &[Element], a1: Element, a2: Element) -> Result<bool> {
    check_pair(m, base, a1, a2)?;
    Ok(half_symmetric(m, base, a1, a2))
}

fn half_symmetric(m: &LabeledSwitchboard, base: &[Element], a1: Element, a2: Element) -> bool {
    base.iter().all(|&b| {
        base.iter()
            .filter(|&&c| c != b)
            .all(|&c| m.lt(Edge::of(a1, b), Edge::of(a2, c)) == m.lt(Edge::of(a2, b), Edge::of(a1, c)))
    })
}

/// Errors with the first differing fact when `a1` and `a2` have different
/// one-types over the base.
pub fn same_one_type(m: &LabeledSwitchboard, base: &[Element], a1: Element, a2: Element) -> Result<()> {
    let t1 = qf_type(m, &[a1], base)?;
    let t2 = qf_type(m, &[a2], base)?;
    if let Some(f) = t1.facts.iter().find(|f| !t2.facts.contains(f)) {
        return Err(Error::Precondition(format!("{f} holds of {a1} but not of {a2}")));
    }
    if let Some(f) = t2.facts.iter().find(|f| !t1.facts.contains(f)) {
        return Err(Error::Precondition(format!("{f} holds of {a2} but not of {a1}")));
    }
    Ok(())
}

/// Half-symmetric, and `a1 ↑ {a2,b} ⇔ a2 ↑ {a1,b}` (likewise ↓) for all `b`
/// in the base. The points must have the same one-type over the base.
pub fn is_symmetric(m: &LabeledSwitchboard, base: &[Element], a1: Element, a2: Element) -> Result<bool> {
    check_pair(m, base, a1, a2)?;
    same_one_type(m, base, a1, a2)?;
    Ok(half_symmetric(m, base, a1, a2)
        && base.iter().all(|&b| {
            let (e1, e2) = (Edge::of(a2, b), Edge::of(a1, b));
            m.up(a1, e1) == m.up(a2, e2) && m.down(a1, e1) == m.down(a2, e2)
        }))
}

/// A base edge strictly between `lo` and `hi`.
pub fn middle(m: &LabeledSwitchboard, base: &[Element], lo: Edge, hi: Edge) -> Option<Edge> {
    base.iter().enumerate().find_map(|(i, &u)| {
        base[i + 1..].iter().map(|&v| Edge::of(u, v)).find(|&g| m.lt(lo, g) && m.lt(g, hi))
    })
}

/// Every order relation between `{a1,b}` and `{a2,c}` (either direction)
/// passes through a base edge.
pub fn is_distinguished(m: &LabeledSwitchboard, base: &[Element], a1: Element, a2: Element) -> Result<bool> {
    check_pair(m, base, a1, a2)?;
    Ok(distinguished_failure(m, base, a1, a2).is_none())
}

/// A cross relation `(lower, upper)` with no base middle, if any.
pub fn distinguished_failure(m: &LabeledSwitchboard, base: &[Element], a1: Element, a2: Element) -> Option<(Edge, Edge)> {
    for &b in base {
        // b = c: the edges share a vertex, so neither bullet applies.
        for &c in base.iter().filter(|&&c| c != b) {
            let (e, f) = (Edge::of(a1, b), Edge::of(a2, c));
            for (lo, hi) in [(f, e), (e, f)] {
                if m.lt(lo, hi) && middle(m, base, lo, hi).is_none() {
                    return Some((lo, hi));
                }
            }
        }
    }
    None
}

/// Per-index flags for the pair `(c₀, c_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexFlags {
    pub realizes_q: bool,
    /// `c_i` and `c₀` freely amalgamated over `B ∪ {c_{i−1}}`; `None` for `i < 2`.
    pub freely_amalgamated: Option<bool>,
    pub distinguished: bool,
    /// `None` when the one-types of `c₀` and `c_i` differ.
    pub symmetric: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct CoreSequenceReport {
    pub structure: LabeledSwitchboard,
    /// Base ids in the structure (ascending).
    pub base: Vec<Element>,
    pub sequence: Vec<Element>,
    /// Index 0 is unused and all false.
    pub flags: Vec<IndexFlags>,
}

/// Places `q` on canonical ids: base `0..k`, `s = k`, `t = k + 1`.
fn canonical_q(q: &TwoTypeSpec) -> Result<LabeledSwitchboard> {
    let mut ids = q.base_ids();
    ids.extend([q.s, q.t]);
    q.structure.induced(&ids)
}

/// Builds `B ∪ {c₀, …, c_k}` where each `(c_i, c_{i+1})` realizes `q` and,
/// for `i ≥ 2`, `c_i` and `c₀` are freely amalgamated over `B ∪ {c_{i−1}}`.
/// `B` keeps ids `0..|B|` and `c_i` gets id `|B| + i`.
pub fn build_core_sequence(q: &TwoTypeSpec, k: usize) -> Result<CoreSequenceReport> {
    q.structure.ensure_valid()?;
    let base_ids = q.base_ids();
    same_one_type(&q.structure, &base_ids, q.s, q.t)?;
    let qc = canonical_q(q)?;
    let nb = base_ids.len();
    let base: Vec<Element> = (0..nb).collect();
    let mut seq = vec![nb];
    let mut structure = if k == 0 {
        qc.induced(&(0..=nb).collect::<Vec<_>>())?
    } else {
        seq.push(nb + 1);
        qc.clone()
    };
    for i in 2..=k {
        let prev = seq[i - 1];
        let c0 = seq[0];
        // The q-extension of B ∪ {c_{i−1}} by the fresh point, and the
        // current structure on B ∪ {c_{i−1}, c₀}, glued freely.
        let mut over: Vec<Element> = base.clone();
        over.push(prev);
        let s = structure.induced(&over)?;
        let mut with_c0 = over.clone();
        with_c0.push(c0);
        let old = structure.induced(&with_c0)?;
        let glued = free_amalgam_one_point(&s, &old, &qc)?;
        // glued: B, c_{i−1}, c₀, fresh. Attach the fresh point to the
        // ambient structure over B ∪ {c_{i−1}, c₀}.
        structure = add_point(&structure, &glued, &with_c0)?;
        seq.push(structure.n() - 1);
    }
    let flags = compute_flags(&structure, &base, &seq, &qc)?;
    Ok(CoreSequenceReport { structure, base, sequence: seq, flags })
}

fn compute_flags(m: &LabeledSwitchboard, base: &[Element], seq: &[Element], qc: &LabeledSwitchboard) -> Result<Vec<IndexFlags>> {
    let nb = base.len();
    let mut flags = vec![IndexFlags { realizes_q: false, freely_amalgamated: None, distinguished: false, symmetric: None }];
    for i in 1..seq.len() {
        let mut ids = base.to_vec();
        ids.extend([seq[i - 1], seq[i]]);
        let realizes_q = m.induced(&ids)?.same_facts(qc);
        let freely_amalgamated = if i >= 2 {
            let mut over = base.to_vec();
            over.push(seq[i - 1]);
            Some(is_freely_amalgamated(m, &over, seq[i], seq[0])?)
        } else {
            None
        };
        let distinguished = is_distinguished(m, base, seq[0], seq[i])?;
        let symmetric = is_symmetric(m, base, seq[0], seq[i]).ok();
        flags.push(IndexFlags { realizes_q, freely_amalgamated, distinguished, symmetric });
        debug_assert!(nb <= m.n());
    }
    Ok(flags)
}

/// One `<predicate> <i> PASS|FAIL` record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerdictLine {
    pub predicate: String,
    pub index: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Verdict {
    pub lines: Vec<VerdictLine>,
    /// Explanations of failures, one per failing line.
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn pass(&self) -> bool {
        self.lines.iter().all(|l| l.pass)
    }

    fn record(&mut self, predicate: &str, index: usize, pass: bool) {
        self.lines.push(VerdictLine { predicate: predicate.to_string(), index, pass });
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            writeln!(out, "{} {} {}", l.predicate, l.index, if l.pass { "PASS" } else { "FAIL" }).unwrap();
        }
        out
    }
}

impl CoreSequenceReport {
    /// The sequence built on top of `q` satisfies the construction contract:
    /// distinct points, each step realizes `q`, free amalgamation from `i = 2`.
    pub fn construction_verdict(&self) -> Verdict {
        let mut v = Verdict::default();
        let mut sorted = self.sequence.clone();
        sorted.sort_unstable();
        sorted.dedup();
        v.record("distinct", 0, sorted.len() == self.sequence.len());
        for (i, f) in self.flags.iter().enumerate().skip(1) {
            v.record("realizes-q", i, f.realizes_q);
            if let Some(free) = f.freely_amalgamated {
                v.record("freely-amalgamated", i, free);
            }
        }
        v
    }
}

/// Distinguished at every `i ≥ max(|B|, 1)`; when `q` (the pair `(c₀, c₁)`)
/// is distinguished, also symmetric at every `i > |B|`.
pub fn check_core_conclusions(report: &CoreSequenceReport) -> Result<Verdict> {
    let nb = report.base.len();
    let k = report.sequence.len() - 1;
    if k <= nb {
        return Err(Error::Precondition(format!("sequence length {k} must exceed the base size {nb}")));
    }
    let m = &report.structure;
    let q_distinguished = report.flags[1].distinguished;
    let mut v = Verdict::default();
    for i in nb.max(1)..=k {
        let f = &report.flags[i];
        v.record("distinguished", i, f.distinguished);
        if !f.distinguished {
            let (lo, hi) = distinguished_failure(m, &report.base, report.sequence[0], report.sequence[i]).unwrap();
            v.notes.push(format!("distinguished {i}: {lo} < {hi} has no base middle"));
        }
        if q_distinguished && i > nb {
            let sym = f.symmetric == Some(true);
            v.record("symmetric", i, sym);
            if !sym {
                v.notes.push(format!("symmetric {i}: c0 and c{i} are not symmetric over the base"));
            }
        }
    }
    Ok(v)
}

#[derive(Clone, Debug)]
pub struct TwoStageTrace {
    pub first: CoreSequenceReport,
    pub q_prime: TwoTypeSpec,
    pub second: CoreSequenceReport,
    pub verdict: Verdict,
}

/// Runs a sequence for `q`, takes `q′ = tp(c₀, c_n / B)` with
/// `n = max(|B|, 1)`, runs a second sequence for `q′` and checks that
/// `(c′₀, c′_{n′})` is symmetric with `n′ = |B| + 1`.
pub fn two_stage_symmetry(q: &TwoTypeSpec, k1: usize, k2: usize) -> Result<TwoStageTrace> {
    let nb = q.base_ids().len();
    let n = nb.max(1);
    if k1 < n {
        return Err(Error::Precondition(format!("first length {k1} must be at least {n}")));
    }
    if k2 < nb + 1 {
        return Err(Error::Precondition(format!("second length {k2} must be at least {}", nb + 1)));
    }
    let first = build_core_sequence(q, k1)?;
    let mut verdict = first.construction_verdict();
    let (c0, cn) = (first.sequence[0], first.sequence[n]);
    let mut ids = first.base.clone();
    ids.extend([c0, cn]);
    let q_prime = TwoTypeSpec::new(first.structure.induced(&ids)?, nb, nb + 1)?;
    let base: Vec<Element> = (0..nb).collect();
    let qd = is_distinguished(&q_prime.structure, &base, nb, nb + 1)?;
    verdict.record("q-prime-distinguished", n, qd);
    if !qd {
        let (lo, hi) = distinguished_failure(&q_prime.structure, &base, nb, nb + 1).unwrap();
        verdict.notes.push(format!("q-prime-distinguished {n}: {lo} < {hi} has no base middle"));
    }
    let second = build_core_sequence(&q_prime, k2)?;
    let sv = second.construction_verdict();
    verdict.lines.extend(sv.lines.into_iter().map(|mut l| {
        l.predicate = format!("second-{}", l.predicate);
        l
    }));
    let i = nb + 1;
    let m = &second.structure;
    let (d0, di) = (second.sequence[0], second.sequence[i]);
    let sym = is_symmetric(m, &second.base, d0, di)?;
    let swap = qf_type(m, &[d0, di], &second.base)? == qf_type(m, &[di, d0], &second.base)?;
    verdict.record("symmetric", i, sym);
    verdict.record("swap-equal", i, swap);
    if !sym {
        verdict.notes.push(format!("symmetric {i}: c'0 and c'{i} are not symmetric over the base"));
    }
    Ok(TwoStageTrace { first, q_prime, second, verdict })
}
