//! Rule-based part-of-speech tagging.
//!
//! Morphological analysis introduces ambiguity; a constraint grammar removes
//! readings that are illegitimate in context; a finite-state intersection
//! grammar resolves what remains as a side effect of syntactic analysis.

pub mod cg;
pub mod eval;
pub mod fsa;
pub mod fsig;
pub mod morph;
pub mod pipeline;
pub mod tag;
pub mod tokenizer;

pub use fsa::{Dfa, FsaError, Nfa, Regex};
pub use tag::{Boundary, BoundarySet, Cohort, Reading, Sentence, Symbol, SymbolKind};
