//! Canonical text format.
//!
//! ```text
//! %lsb 1            # or `%sb 1` for an unlabeled switchboard
//! n 4
//! name 0 a
//! lt 0 1 2 3        # {0,1} < {2,3}; the full closure is listed
//! up 0 2 3          # 0 ↑ {2,3}
//! dn 2 0 1          # optional, must agree with the derived ↓
//! ```
//!
//! Trailer lines attach extra data: `point <id>`, `pair <id> <id>`, and
//! `%embedding <name>` sections made of `map <from> <to>` lines.
//! The writer emits header, `n`, names, `lt` and `up` only, each group sorted.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::board::{LabeledSwitchboard, Switchboard};
use crate::edge::{Edge, Element};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Structure {
    Plain(Switchboard),
    Labeled(LabeledSwitchboard),
}

impl Structure {
    pub fn n(&self) -> usize {
        match self {
            Structure::Plain(s) => s.n(),
            Structure::Labeled(l) => l.n(),
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            Structure::Plain(s) => write_switchboard(s),
            Structure::Labeled(l) => write_labeled(l),
        }
    }
}

/// A parsed file: the structure plus any trailer data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub structure: Structure,
    pub point: Option<Element>,
    pub pair: Option<(Element, Element)>,
    pub embeddings: Vec<(String, Vec<(Element, Element)>)>,
}

impl Document {
    pub fn labeled(self) -> Result<LabeledSwitchboard> {
        match self.structure {
            Structure::Labeled(l) => Ok(l),
            Structure::Plain(_) => Err(Error::Format("expected a labeled switchboard (%lsb)".into())),
        }
    }
}

pub fn write_switchboard(s: &Switchboard) -> String {
    let mut out = String::from("%sb 1\n");
    write_body(&mut out, s);
    out
}

pub fn write_labeled(l: &LabeledSwitchboard) -> String {
    let mut out = String::from("%lsb 1\n");
    write_body(&mut out, l.base());
    for (a, e) in l.up_facts() {
        writeln!(out, "up {a} {} {}", e.lo(), e.hi()).unwrap();
    }
    out
}

fn write_body(out: &mut String, s: &Switchboard) {
    writeln!(out, "n {}", s.n()).unwrap();
    for (id, name) in s.names() {
        writeln!(out, "name {id} {name}").unwrap();
    }
    for (e, f) in s.lt_pairs() {
        writeln!(out, "lt {} {} {} {}", e.lo(), e.hi(), f.lo(), f.hi()).unwrap();
    }
}

/// Appends `%embedding <name>` followed by sorted `map` lines.
pub fn write_embedding(out: &mut String, name: &str, map: &[Element]) {
    writeln!(out, "%embedding {name}").unwrap();
    for (from, to) in map.iter().enumerate() {
        writeln!(out, "map {from} {to}").unwrap();
    }
}

pub fn parse_switchboard(text: &str) -> Result<Switchboard> {
    match parse_document(text)?.structure {
        Structure::Plain(s) => Ok(s),
        Structure::Labeled(_) => Err(Error::Format("expected an unlabeled switchboard (%sb)".into())),
    }
}

pub fn parse_labeled(text: &str) -> Result<LabeledSwitchboard> {
    parse_document(text)?.labeled()
}

pub fn parse_document(text: &str) -> Result<Document> {
    let mut labeled = None;
    let mut n = None;
    let mut names = BTreeMap::new();
    let mut lts = Vec::new();
    let mut ups = Vec::new();
    let mut dns = Vec::new();
    let mut point = None;
    let mut pair = None;
    let mut embeddings: Vec<(String, Vec<(Element, Element)>)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |msg: String| Error::Parse { line: line_no, msg };
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if labeled.is_none() {
            labeled = Some(match toks.as_slice() {
                ["%sb", "1"] => false,
                ["%lsb", "1"] => true,
                _ => return Err(err(format!("expected header `%sb 1` or `%lsb 1`, found `{line}`"))),
            });
            continue;
        }
        let nums = |k: usize| -> Result<Vec<usize>> {
            if toks.len() != k + 1 {
                return Err(err(format!("`{}` takes {k} arguments", toks[0])));
            }
            toks[1..]
                .iter()
                .map(|t| t.parse::<usize>().map_err(|_| err(format!("`{t}` is not a natural number"))))
                .collect()
        };
        let need_n = || n.ok_or_else(|| err("`n` must precede facts".into()));
        let edge = |a: usize, b: usize| -> Result<Edge> {
            if a >= b {
                return Err(err(format!("edge {a} {b} is not canonical (need {a} < {b})")));
            }
            Edge::new(a, b)
        };
        let in_range = |ids: &[usize], n: usize| -> Result<()> {
            match ids.iter().find(|&&x| x >= n) {
                Some(x) => Err(err(format!("element {x} out of range for n = {n}"))),
                None => Ok(()),
            }
        };
        match toks[0] {
            "n" => {
                if n.is_some() {
                    return Err(err("duplicate `n`".into()));
                }
                n = Some(nums(1)?[0]);
            }
            "name" => {
                let n = need_n()?;
                if toks.len() != 3 {
                    return Err(err("`name` takes an id and a token".into()));
                }
                let id: usize = toks[1].parse().map_err(|_| err(format!("`{}` is not an id", toks[1])))?;
                in_range(&[id], n)?;
                if names.insert(id, toks[2].to_string()).is_some() {
                    return Err(err(format!("element {id} named twice")));
                }
            }
            "lt" => {
                let n = need_n()?;
                let v = nums(4)?;
                in_range(&v, n)?;
                lts.push((edge(v[0], v[1])?, edge(v[2], v[3])?));
            }
            "up" | "dn" => {
                if labeled == Some(false) {
                    return Err(err(format!("`{}` is not allowed in an unlabeled switchboard", toks[0])));
                }
                let n = need_n()?;
                let v = nums(3)?;
                in_range(&v, n)?;
                let fact = (v[0], edge(v[1], v[2])?);
                if toks[0] == "up" {
                    ups.push(fact);
                } else {
                    dns.push((line_no, fact));
                }
            }
            "point" => {
                let n = need_n()?;
                let v = nums(1)?;
                in_range(&v, n)?;
                point = Some(v[0]);
            }
            "pair" => {
                let n = need_n()?;
                let v = nums(2)?;
                in_range(&v, n)?;
                pair = Some((v[0], v[1]));
            }
            "%embedding" => {
                if toks.len() != 2 {
                    return Err(err("`%embedding` takes a name".into()));
                }
                embeddings.push((toks[1].to_string(), Vec::new()));
            }
            "map" => {
                let v = nums(2)?;
                match embeddings.last_mut() {
                    Some((_, maps)) => maps.push((v[0], v[1])),
                    None => return Err(err("`map` outside an `%embedding` section".into())),
                }
            }
            other => return Err(err(format!("unknown directive `{other}`"))),
        }
    }
    let labeled = labeled.ok_or_else(|| Error::Format("empty input".into()))?;
    let n = n.ok_or_else(|| Error::Format("missing `n` line".into()))?;
    let base = Switchboard::from_pairs(n, lts)?.with_names(names)?;
    let structure = if labeled {
        let l = LabeledSwitchboard::new(base, ups)?;
        for (line, (a, e)) in dns {
            if !l.down(a, e) {
                return Err(Error::Parse { line, msg: format!("dn {a} {e} contradicts the derived disfavor relation") });
            }
        }
        Structure::Labeled(l)
    } else {
        Structure::Plain(base)
    };
    Ok(Document { structure, point, pair, embeddings })
}
