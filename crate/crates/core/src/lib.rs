//! Switchboards: strict partial orders on the edges of a finite set in which
//! edges sharing a vertex are incomparable, optionally labeled by a favor
//! relation between elements and edges.
//!
//! The crate covers validation, labeling enumeration, the single-relation
//! presentation, free amalgamation, extension witnesses, quantifier-free
//! types with their symmetry predicates, and heights of definable posets.

mod bits;

pub mod amalg;
pub mod apsearch;
pub mod board;
pub mod edge;
pub mod error;
pub mod format;
pub mod generic;
pub mod labeling;
pub mod order;
pub mod triangle;
pub mod types;

pub use board::{label_canonical, LabeledSwitchboard, Switchboard, ValidationReport, Violation};
pub use edge::{Edge, Element};
pub use error::{Error, Result};
