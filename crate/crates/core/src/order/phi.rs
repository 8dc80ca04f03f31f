use std::collections::BTreeSet;
use std::fmt;

use super::formula::Formula;
use super::poset::FinitePoset;
use crate::board::LabeledSwitchboard;
use crate::edge::Element;
use crate::error::{Error, Result};

/// A tuple of elements, displayed as `(i,j,…)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tuple(pub Vec<Element>);

impl fmt::Display for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

/// Parameter tuples ordered by strict inclusion of their defined sets.
#[derive(Clone, Debug)]
pub struct PhiPoset {
    pub poset: FinitePoset<Tuple>,
    /// `sets[i]` is the set defined by `poset.carrier()[i]`.
    pub sets: Vec<BTreeSet<Tuple>>,
}

/// All `n^k` tuples in lexicographic order.
fn tuples(n: usize, k: usize) -> Vec<Vec<Element>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out.into_iter().flat_map(|t| (0..n).map(move |x| [t.clone(), vec![x]].concat())).collect();
    }
    out
}

pub fn phi_poset(m: &LabeledSwitchboard, f: &Formula, obj: &[&str], param: &[&str]) -> Result<PhiPoset> {
    let declared: Vec<&str> = obj.iter().chain(param).copied().collect();
    if declared.iter().collect::<BTreeSet<_>>().len() != declared.len() {
        return Err(Error::Precondition("object and parameter variables must be distinct".into()));
    }
    if let Some(v) = f.variables().into_iter().find(|v| !declared.contains(v)) {
        return Err(Error::Precondition(format!("variable {v} is neither an object nor a parameter")));
    }
    if let Some(c) = f.constants().into_iter().find(|&c| c >= m.n()) {
        return Err(Error::Precondition(format!("unknown constant @{c} (n = {})", m.n())));
    }
    let objs = tuples(m.n(), obj.len());
    let params = tuples(m.n(), param.len());
    let mut sets = Vec::with_capacity(params.len());
    let mut bits = Vec::with_capacity(params.len());
    for b in &params {
        let mut set = BTreeSet::new();
        let mut mask = vec![0u64; objs.len().div_ceil(64)];
        for (i, a) in objs.iter().enumerate() {
            let env = |v: &str| {
                obj.iter().position(|&o| o == v).map(|i| a[i]).or_else(|| param.iter().position(|&p| p == v).map(|i| b[i]))
            };
            if f.eval(m, &env)? {
                set.insert(Tuple(a.clone()));
                mask[i / 64] |= 1 << (i % 64);
            }
        }
        sets.push(set);
        bits.push(mask);
    }
    let subset = |x: &[u64], y: &[u64]| x.iter().zip(y).all(|(a, b)| a & !b == 0);
    let mut pairs = Vec::new();
    for i in 0..params.len() {
        for j in 0..params.len() {
            if bits[i] != bits[j] && subset(&bits[i], &bits[j]) {
                pairs.push((Tuple(params[i].clone()), Tuple(params[j].clone())));
            }
        }
    }
    let poset = FinitePoset::new(params.into_iter().map(Tuple).collect(), pairs)?;
    Ok(PhiPoset { poset, sets })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::label_canonical;
    use crate::order::{chain_switchboard, parse_formula};

    #[test]
    fn lt_formula_on_short_chain() {
        let m = label_canonical(&chain_switchboard(2)).unwrap();
        let f = parse_formula("lt(x1,x2,y1,y2)").unwrap();
        let p = phi_poset(&m, &f, &["x1", "x2"], &["y1", "y2"]).unwrap();
        let idx = |t: &[Element]| p.poset.carrier().iter().position(|k| k.0 == t).unwrap();
        let set = |t: &[Element]| p.sets[idx(t)].iter().map(|k| k.0.clone()).collect::<Vec<_>>();
        assert_eq!(set(&[2, 3]), vec![vec![0, 1], vec![1, 0]]);
        assert!(set(&[0, 1]).is_empty());
        assert!(p.poset.lt(&Tuple(vec![0, 1]), &Tuple(vec![2, 3])));
        assert_eq!(p.poset.heights().unwrap().height, 2);
    }

    #[test]
    fn equality_gives_an_antichain() {
        let m = label_canonical(&chain_switchboard(2)).unwrap();
        let p = phi_poset(&m, &parse_formula("eq(x1,y1)").unwrap(), &["x1"], &["y1"]).unwrap();
        assert!(p.poset.pairs().is_empty());
        assert_eq!(p.poset.heights().unwrap().height, 1);
        assert_eq!(p.poset.carrier()[3].to_string(), "(3)");
    }

    #[test]
    fn undeclared_and_unknown_rejected() {
        let m = label_canonical(&chain_switchboard(2)).unwrap();
        assert!(phi_poset(&m, &parse_formula("eq(x1,@7)").unwrap(), &["x1"], &[]).is_err());
        assert!(phi_poset(&m, &parse_formula("eq(x1,z)").unwrap(), &["x1"], &[]).is_err());
        assert!(phi_poset(&m, &parse_formula("eq(x1,x1)").unwrap(), &["x1"], &["x1"]).is_err());
        let p = phi_poset(&m, &parse_formula("eq(x1,@1)").unwrap(), &["x1"], &[]).unwrap();
        assert_eq!(p.poset.carrier().len(), 1);
        assert_eq!(p.poset.to_text(), "node ()\n");
    }
}
