//! Independent reference implementations written straight from the
//! definitions, sharing nothing with the library beyond its public fact
//! listings.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use switchboard::{Edge, LabeledSwitchboard, Switchboard};

pub type E = (usize, usize);

pub fn edge(a: usize, b: usize) -> E {
    (a.min(b), a.max(b))
}

pub fn edges(n: usize) -> Vec<E> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
}

fn disjoint(e: E, f: E) -> bool {
    e.0 != f.0 && e.0 != f.1 && e.1 != f.0 && e.1 != f.1
}

fn on(a: usize, e: E) -> bool {
    a == e.0 || a == e.1
}

/// A labeled switchboard as plain fact sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Naive {
    pub n: usize,
    pub lt: BTreeSet<(E, E)>,
    pub up: BTreeSet<(usize, E)>,
}

impl Naive {
    pub fn of(l: &LabeledSwitchboard) -> Naive {
        let conv = |e: Edge| (e.lo(), e.hi());
        Naive {
            n: l.n(),
            lt: l.lt_pairs().into_iter().map(|(e, f)| (conv(e), conv(f))).collect(),
            up: l.up_facts().into_iter().map(|(a, e)| (a, conv(e))).collect(),
        }
    }

    pub fn to_labeled(&self) -> LabeledSwitchboard {
        let ed = |e: E| Edge::of(e.0, e.1);
        let base = Switchboard::from_pairs(self.n, self.lt.iter().map(|&(e, f)| (ed(e), ed(f)))).unwrap();
        LabeledSwitchboard::new(base, self.up.iter().map(|&(a, e)| (a, ed(e)))).unwrap()
    }

    pub fn lt(&self, e: E, f: E) -> bool {
        self.lt.contains(&(e, f))
    }

    pub fn up(&self, a: usize, e: E) -> bool {
        self.up.contains(&(a, e))
    }

    pub fn down(&self, a: usize, e: E) -> bool {
        !on(a, e) && !self.up(a, e)
    }

    /// The facts among `ids`, renamed to positions in `ids`.
    pub fn induced(&self, ids: &[usize]) -> Naive {
        let mut pos = vec![None; self.n];
        for (i, &x) in ids.iter().enumerate() {
            pos[x] = Some(i);
        }
        let map = |e: E| -> Option<E> { Some(edge(pos[e.0]?, pos[e.1]?)) };
        Naive {
            n: ids.len(),
            lt: self.lt.iter().filter_map(|&(e, f)| Some((map(e)?, map(f)?))).collect(),
            up: self.up.iter().filter_map(|&(a, e)| Some((pos[a]?, map(e)?))).collect(),
        }
    }
}

/// Strict partial order on edges with the Switchboard Axiom.
pub fn order_valid(n: usize, lt: &BTreeSet<(E, E)>) -> bool {
    for &(e, f) in lt {
        if e == f || !disjoint(e, f) || e.1 >= n || f.1 >= n || lt.contains(&(f, e)) {
            return false;
        }
        for &(g, h) in lt {
            if g == f && !lt.contains(&(e, h)) {
                return false;
            }
        }
    }
    true
}

/// Every axiom of a labeled switchboard, from the definitions.
pub fn valid(m: &Naive) -> bool {
    if !order_valid(m.n, &m.lt) {
        return false;
    }
    // Trichotomy: ↑ only off the edge; ↓ is the complement.
    if m.up.iter().any(|&(a, e)| on(a, e) || a >= m.n || e.1 >= m.n) {
        return false;
    }
    for &(e, f) in &m.lt {
        for a in 0..m.n {
            // Upward: a ↑ e < f ⇒ a ↑ f.
            if m.up(a, e) && !m.up(a, f) {
                return false;
            }
            // Downward: a ↓ f > e ⇒ a ↓ e.
            if m.down(a, f) && !m.down(a, e) {
                return false;
            }
        }
    }
    true
}

/// Conditions (i)–(vi) of free amalgamation of `a1`, `a2` over `s`.
pub fn freely_amalgamated(m: &Naive, s: &[usize], a1: usize, a2: usize) -> bool {
    let s_edges: Vec<E> = s.iter().flat_map(|&p| s.iter().filter(move |&&q| q > p).map(move |&q| edge(p, q))).collect();
    let through = |lo: E, hi: E| s_edges.iter().any(|&pq| m.lt(lo, pq) && m.lt(pq, hi));
    for &x in s {
        for &y in s {
            let (e1, e2) = (edge(a1, x), edge(a2, y));
            if m.lt(e1, e2) != through(e1, e2) || m.lt(e2, e1) != through(e2, e1) {
                return false;
            }
        }
    }
    let new = edge(a1, a2);
    let mut local: Vec<usize> = s.to_vec();
    local.extend([a1, a2]);
    for &p in &local {
        for &q in &local {
            if p < q && edge(p, q) != new && (m.lt(new, edge(p, q)) || m.lt(edge(p, q), new)) {
                return false;
            }
        }
    }
    if s.iter().any(|&x| !m.down(x, new)) {
        return false;
    }
    for (fav, other) in [(a1, a2), (a2, a1)] {
        for &x in s {
            let target = edge(other, x);
            let witnessed = s_edges.iter().any(|&pq| m.up(fav, pq) && m.lt(pq, target));
            if m.up(fav, target) != witnessed {
                return false;
            }
        }
    }
    true
}

/// `B ∪ {a1}` and `B ∪ {a2}` carry the same facts under `a1 ↦ a2`.
pub fn same_one_type(m: &Naive, b: &[usize], a1: usize, a2: usize) -> bool {
    let mut i1 = b.to_vec();
    i1.push(a1);
    let mut i2 = b.to_vec();
    i2.push(a2);
    m.induced(&i1) == m.induced(&i2)
}

/// Order facts only.
pub fn same_order_type(m: &Naive, b: &[usize], a1: usize, a2: usize) -> bool {
    let mut i1 = b.to_vec();
    i1.push(a1);
    let mut i2 = b.to_vec();
    i2.push(a2);
    m.induced(&i1).lt == m.induced(&i2).lt
}

pub fn half_symmetric(m: &Naive, b: &[usize], a1: usize, a2: usize) -> bool {
    b.iter().all(|&x| {
        b.iter().filter(|&&y| y != x).all(|&y| m.lt(edge(a1, x), edge(a2, y)) == m.lt(edge(a2, x), edge(a1, y)))
    })
}

pub fn symmetric(m: &Naive, b: &[usize], a1: usize, a2: usize) -> bool {
    half_symmetric(m, b, a1, a2)
        && b.iter().all(|&x| {
            m.up(a1, edge(a2, x)) == m.up(a2, edge(a1, x)) && m.down(a1, edge(a2, x)) == m.down(a2, edge(a1, x))
        })
}

pub fn distinguished(m: &Naive, b: &[usize], a1: usize, a2: usize) -> bool {
    let mids: Vec<E> = b.iter().flat_map(|&u| b.iter().filter(move |&&v| v > u).map(move |&v| edge(u, v))).collect();
    for &x in b {
        for &y in b {
            let (e, f) = (edge(a1, x), edge(a2, y));
            if m.lt(f, e) && !mids.iter().any(|&g| m.lt(f, g) && m.lt(g, e)) {
                return false;
            }
            if m.lt(e, f) && !mids.iter().any(|&g| m.lt(e, g) && m.lt(g, f)) {
                return false;
            }
        }
    }
    true
}

/// Whether swapping `a1` and `a2` (fixing `b`) preserves every fact among
/// `b ∪ {a1, a2}`.
pub fn swap_invariant(m: &Naive, b: &[usize], a1: usize, a2: usize) -> bool {
    let mut i1 = b.to_vec();
    i1.extend([a1, a2]);
    let mut i2 = b.to_vec();
    i2.extend([a2, a1]);
    m.induced(&i1) == m.induced(&i2)
}

pub fn cross_relation(m: &Naive, b: &[usize], a1: usize, a2: usize) -> bool {
    b.iter().any(|&x| b.iter().any(|&y| m.lt(edge(a1, x), edge(a2, y)) || m.lt(edge(a2, y), edge(a1, x))))
}

/// Reachability closure of a directed graph by breadth-first search.
pub fn reach<T: Ord + Copy>(nodes: &BTreeSet<T>, pairs: &BTreeSet<(T, T)>) -> BTreeSet<(T, T)> {
    let mut out = BTreeSet::new();
    for &start in nodes {
        let mut seen = BTreeSet::new();
        let mut queue: VecDeque<T> = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &(a, b) in pairs {
                if a == x && seen.insert(b) {
                    queue.push_back(b);
                }
            }
        }
        out.extend(seen.into_iter().map(|y| (start, y)));
    }
    out
}

/// Longest path ending at each node, by enumerating every path.
pub fn longest_paths(n: usize, pairs: &BTreeSet<(usize, usize)>) -> Vec<usize> {
    fn walk(node: usize, len: usize, n: usize, pairs: &BTreeSet<(usize, usize)>, best: &mut [usize]) {
        best[node] = best[node].max(len);
        for next in 0..n {
            if pairs.contains(&(node, next)) {
                walk(next, len + 1, n, pairs, best);
            }
        }
    }
    let mut best = vec![0; n];
    for start in 0..n {
        walk(start, 0, n, pairs, &mut best);
    }
    best
}

/// Evaluates formula text directly: a recursive descent that never builds
/// a tree. `env` maps variable names to elements.
pub fn eval_text(m: &Naive, text: &str, env: &BTreeMap<String, usize>) -> bool {
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut pos = 0;
    let v = disj(m, &chars, &mut pos, env);
    assert_eq!(pos, chars.len(), "trailing input in {text}");
    v
}

fn disj(m: &Naive, c: &[char], pos: &mut usize, env: &BTreeMap<String, usize>) -> bool {
    let mut v = conj(m, c, pos, env);
    while *pos < c.len() && c[*pos] == '|' {
        *pos += 1;
        let w = conj(m, c, pos, env);
        v = v || w;
    }
    v
}

fn conj(m: &Naive, c: &[char], pos: &mut usize, env: &BTreeMap<String, usize>) -> bool {
    let mut v = unary(m, c, pos, env);
    while *pos < c.len() && c[*pos] == '&' {
        *pos += 1;
        let w = unary(m, c, pos, env);
        v = v && w;
    }
    v
}

fn unary(m: &Naive, c: &[char], pos: &mut usize, env: &BTreeMap<String, usize>) -> bool {
    match c[*pos] {
        '!' => {
            *pos += 1;
            !unary(m, c, pos, env)
        }
        '(' => {
            *pos += 1;
            let v = disj(m, c, pos, env);
            assert_eq!(c[*pos], ')');
            *pos += 1;
            v
        }
        _ => {
            let start = *pos;
            while c[*pos] != '(' {
                *pos += 1;
            }
            let name: String = c[start..*pos].iter().collect();
            *pos += 1;
            let mut args = Vec::new();
            loop {
                let s = *pos;
                while c[*pos] != ',' && c[*pos] != ')' {
                    *pos += 1;
                }
                let tok: String = c[s..*pos].iter().collect();
                args.push(match tok.strip_prefix('@') {
                    Some(id) => id.parse().unwrap(),
                    None => env[&tok],
                });
                let end = c[*pos] == ')';
                *pos += 1;
                if end {
                    break;
                }
            }
            match name.as_str() {
                "lt" => args[0] != args[1] && args[2] != args[3] && m.lt(edge(args[0], args[1]), edge(args[2], args[3])),
                "up" => args[1] != args[2] && m.up(args[0], edge(args[1], args[2])),
                "down" => args[1] != args[2] && m.down(args[0], edge(args[1], args[2])),
                "eq" => args[0] == args[1],
                other => panic!("unknown atom {other}"),
            }
        }
    }
}
