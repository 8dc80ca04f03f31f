//! Search for amalgamation failures among unlabeled switchboards.
//!
//! An instance is a base `A` on ids `0..k` with two one-point extensions `B`
//! and `C` (new point at id `k` in both). In the pushout carrier `B`'s point
//! keeps id `k` and `C`'s point gets id `k + 1`. Every order relation that
//! mentions both new points is free; the instance fails when no choice of
//! free relations gives a switchboard, and `B ≠ C` rules out gluing the two
//! new points together.

use std::fmt::Write as _;

use crate::board::Switchboard;
use crate::edge::{edges_lex, Edge, Element};
use crate::error::{Error, Result};
use crate::format::{parse_switchboard, write_switchboard};

/// Largest number of free pairs a certificate will exhaust (`3^13` cases).
pub const MAX_FREE_PAIRS: usize = 13;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApCertificate {
    pub a: Switchboard,
    pub b: Switchboard,
    pub c: Switchboard,
    /// Unordered pairs of disjoint carrier edges fixed by neither side.
    pub free_pairs: usize,
    /// `3^free_pairs`: each free pair is `<`, `>` or incomparable.
    pub completions: u64,
    /// Completions that are switchboards; zero for a genuine failure.
    pub amalgams: u64,
    /// Whether identifying the two new points gives an amalgam (iff `B = C`).
    pub identification: bool,
}

impl ApCertificate {
    pub fn is_failure(&self) -> bool {
        self.amalgams == 0 && !self.identification
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("%ap-certificate 1\n");
        for (tag, s) in [("A", &self.a), ("B", &self.b), ("C", &self.c)] {
            writeln!(out, "%part {tag}").unwrap();
            out.push_str(&write_switchboard(s));
        }
        writeln!(out, "%end").unwrap();
        writeln!(out, "free-pairs {}", self.free_pairs).unwrap();
        writeln!(out, "completions {}", self.completions).unwrap();
        writeln!(out, "amalgams {}", self.amalgams).unwrap();
        writeln!(out, "identification {}", if self.identification { "possible" } else { "impossible" }).unwrap();
        out
    }

    pub fn parse(text: &str) -> Result<ApCertificate> {
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some("%ap-certificate 1") {
            return Err(Error::Parse { line: 1, msg: "expected `%ap-certificate 1`".into() });
        }
        let mut parts: Vec<(String, String)> = Vec::new();
        let mut tail: Vec<(usize, &str)> = Vec::new();
        let mut in_parts = true;
        for (i, line) in lines.enumerate() {
            let t = line.trim();
            if in_parts {
                if let Some(tag) = t.strip_prefix("%part ") {
                    parts.push((tag.trim().to_string(), String::new()));
                } else if t == "%end" {
                    in_parts = false;
                } else if let Some((_, body)) = parts.last_mut() {
                    body.push_str(line);
                    body.push('\n');
                } else if !t.is_empty() && !t.starts_with('#') {
                    return Err(Error::Parse { line: i + 2, msg: "content before the first `%part`".into() });
                }
            } else if !t.is_empty() && !t.starts_with('#') {
                tail.push((i + 2, t));
            }
        }
        let part = |tag: &str| -> Result<Switchboard> {
            let body = parts
                .iter()
                .find(|(t, _)| t == tag)
                .ok_or_else(|| Error::Format(format!("certificate lacks part {tag}")))?;
            parse_switchboard(&body.1)
        };
        let mut field = |key: &str| -> Result<String> {
            let pos = tail
                .iter()
                .position(|(_, t)| t.split_whitespace().next() == Some(key))
                .ok_or_else(|| Error::Format(format!("certificate lacks `{key}`")))?;
            let (line, t) = tail.remove(pos);
            let v: Vec<&str> = t.split_whitespace().collect();
            if v.len() != 2 {
                return Err(Error::Parse { line, msg: format!("`{key}` takes one value") });
            }
            Ok(v[1].to_string())
        };
        let num = |s: String, key: &str| -> Result<u64> {
            s.parse().map_err(|_| Error::Format(format!("`{key}` needs a number, found `{s}`")))
        };
        let free_pairs = num(field("free-pairs")?, "free-pairs")? as usize;
        let completions = num(field("completions")?, "completions")?;
        let amalgams = num(field("amalgams")?, "amalgams")?;
        let identification = match field("identification")?.as_str() {
            "possible" => true,
            "impossible" => false,
            other => return Err(Error::Format(format!("identification must be possible or impossible, found `{other}`"))),
        };
        if let Some((line, t)) = tail.first() {
            return Err(Error::Parse { line: *line, msg: format!("unexpected `{t}`") });
        }
        Ok(ApCertificate { a: part("A")?, b: part("B")?, c: part("C")?, free_pairs, completions, amalgams, identification })
    }

    /// Recomputes the exhaustion from `A`, `B`, `C` and checks every
    /// recorded number.
    pub fn replay(&self) -> Result<bool> {
        let fresh = certify(&self.a, &self.b, &self.c)?;
        Ok(fresh == *self)
    }
}

/// Extensions of `a` (on ids `0..k`) by one point `k`, in a fixed order.
pub fn one_point_extensions(a: &Switchboard) -> Vec<Switchboard> {
    let k = a.n();
    let n = k + 1;
    let edges: Vec<Edge> = edges_lex(n).collect();
    let pairs: Vec<(Edge, Edge)> = unordered_disjoint_pairs(&edges).into_iter().filter(|(e, f)| e.contains(k) || f.contains(k)).collect();
    let fixed: Vec<(Edge, Edge)> = a.lt_pairs();
    let mut out = Vec::new();
    for_each_assignment(pairs.len(), |choice| {
        let mut s = Switchboard::empty(n);
        for &(e, f) in &fixed {
            s.set_lt(e, f, true);
        }
        apply_choice(&mut s, &pairs, choice);
        if s.is_valid() {
            out.push(s);
        }
    });
    out
}

/// All switchboards on `n` points, in a fixed order.
pub fn all_switchboards(n: usize) -> Vec<Switchboard> {
    if n == 0 {
        return vec![Switchboard::empty(0)];
    }
    all_switchboards(n - 1).iter().flat_map(one_point_extensions).collect()
}

fn unordered_disjoint_pairs(edges: &[Edge]) -> Vec<(Edge, Edge)> {
    let mut out = Vec::new();
    for (i, &e) in edges.iter().enumerate() {
        for &f in &edges[i + 1..] {
            if !e.shares_vertex(f) {
                out.push((e, f));
            }
        }
    }
    out
}

// choice[i]: 0 incomparable, 1 e < f, 2 f < e.
fn for_each_assignment(len: usize, mut f: impl FnMut(&[u8])) {
    let mut choice = vec![0u8; len];
    loop {
        f(&choice);
        let mut i = 0;
        while i < len && choice[i] == 2 {
            choice[i] = 0;
            i += 1;
        }
        if i == len {
            return;
        }
        choice[i] += 1;
    }
}

fn apply_choice(s: &mut Switchboard, pairs: &[(Edge, Edge)], choice: &[u8]) {
    for (&(e, f), &c) in pairs.iter().zip(choice) {
        match c {
            1 => s.set_lt(e, f, true),
            2 => s.set_lt(f, e, true),
            _ => {}
        }
    }
}

fn check_instance(a: &Switchboard, b: &Switchboard, c: &Switchboard) -> Result<()> {
    for s in [a, b, c] {
        s.ensure_valid()?;
    }
    let k = a.n();
    let prefix: Vec<Element> = (0..k).collect();
    for (tag, s) in [("B", b), ("C", c)] {
        if s.n() != k + 1 || !s.induced(&prefix)?.same_facts(a) {
            return Err(Error::Precondition(format!("{tag} is not a one-point extension of A")));
        }
    }
    Ok(())
}

type OrderPairs = Vec<(Edge, Edge)>;

fn pushout_parts(a: &Switchboard, b: &Switchboard, c: &Switchboard) -> (usize, OrderPairs, OrderPairs) {
    let k = a.n();
    let n = k + 2;
    let to_c = |x: Element| if x == k { k + 1 } else { x };
    let mut forced = b.lt_pairs();
    forced.extend(c.lt_pairs().into_iter().map(|(e, f)| (e.map(to_c).unwrap(), f.map(to_c).unwrap())));
    forced.sort_unstable();
    forced.dedup();
    let edges: Vec<Edge> = edges_lex(n).collect();
    let free = unordered_disjoint_pairs(&edges)
        .into_iter()
        .filter(|&(e, f)| {
            let side = |x: Element| !e.contains(x) && !f.contains(x);
            !(side(k + 1) || side(k))
        })
        .collect();
    (n, forced, free)
}

/// Whether some switchboard on the pushout carrier extends both sides. Any
/// such switchboard contains the transitive closure of the forced facts, so
/// it suffices to test the closure.
pub fn strong_amalgam_exists(a: &Switchboard, b: &Switchboard, c: &Switchboard) -> Result<bool> {
    check_instance(a, b, c)?;
    let k = a.n();
    let (n, forced, _) = pushout_parts(a, b, c);
    let closed = Switchboard::from_generators(n, forced)?;
    if !closed.is_valid() {
        return Ok(false);
    }
    let mut c_ids: Vec<Element> = (0..k).collect();
    c_ids.push(k + 1);
    Ok(closed.induced(&(0..=k).collect::<Vec<_>>())?.same_facts(b) && closed.induced(&c_ids)?.same_facts(c))
}

/// Exhausts every completion of the pushout and records the counts.
pub fn certify(a: &Switchboard, b: &Switchboard, c: &Switchboard) -> Result<ApCertificate> {
    check_instance(a, b, c)?;
    let (n, forced, free) = pushout_parts(a, b, c);
    if free.len() > MAX_FREE_PAIRS {
        return Err(Error::CapExceeded(format!("{} free pairs exceed the exhaustion cap of {MAX_FREE_PAIRS}", free.len())));
    }
    let mut amalgams = 0u64;
    let mut completions = 0u64;
    for_each_assignment(free.len(), |choice| {
        completions += 1;
        let mut s = Switchboard::empty(n);
        for &(e, f) in &forced {
            s.set_lt(e, f, true);
        }
        apply_choice(&mut s, &free, choice);
        if s.is_valid() {
            amalgams += 1;
        }
    });
    Ok(ApCertificate {
        a: a.clone(),
        b: b.clone(),
        c: c.clone(),
        free_pairs: free.len(),
        completions,
        amalgams,
        identification: b.same_facts(c),
    })
}

/// Certified failures with pushout carriers of at most `max_n` points, in
/// order of carrier size, stopping after `limit`.
pub fn search_failures(max_n: usize, limit: usize) -> Result<Vec<ApCertificate>> {
    let mut found = Vec::new();
    for k in 0..=max_n.saturating_sub(2) {
        if max_n < 2 {
            break;
        }
        for a in all_switchboards(k) {
            let exts = one_point_extensions(&a);
            for (i, b) in exts.iter().enumerate() {
                for c in &exts[i + 1..] {
                    if found.len() >= limit {
                        return Ok(found);
                    }
                    if !strong_amalgam_exists(&a, b, c)? {
                        let cert = certify(&a, b, c)?;
                        debug_assert!(cert.is_failure());
                        found.push(cert);
                    }
                }
            }
        }
    }
    Ok(found)
}
