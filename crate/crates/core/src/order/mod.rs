//! Heights of finite posets, the chain switchboard, and quantifier-free
//! formulas with their posets of defined sets.

mod formula;
mod phi;
mod poset;

pub use formula::{parse_formula, Atom, Formula, Term};
pub use phi::{phi_poset, PhiPoset, Tuple};
pub use poset::{chain_switchboard, edge_poset, parse_poset, FinitePoset, Heights};
