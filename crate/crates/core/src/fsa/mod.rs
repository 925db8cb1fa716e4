//! Regular expressions and deterministic automata over the tag alphabet.
//!
//! Automata name only the symbols they care about; every other symbol falls
//! into a shared OTHER column, so a rule that mentions five tags stays small
//! no matter how large the tag inventory grows.

mod dfa;
mod nfa;
mod regex;
pub(crate) mod table;

use thiserror::Error;

use crate::tag::Symbol;

pub use dfa::{Alphabet, Dfa, OTHER_LABEL};
pub use nfa::Nfa;
pub(crate) use nfa::ClassNfa;
pub use regex::{compile, compile_with_cap, Definitions, Regex};
pub(crate) use regex::{concat as concat_tables, Compiler};

/// Default bound on states created by one product or subset construction.
pub const DEFAULT_STATE_CAP: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FsaError {
    #[error("automaton exceeded the state cap of {cap}")]
    StateCap { cap: usize },
    #[error("language has {count} strings, more than the cap of {cap}")]
    EnumerationCap { count: u128, cap: usize },
    #[error("automaton is cyclic; its language cannot be listed")]
    Cyclic,
    #[error("automaton accepts symbols outside its alphabet; its language cannot be listed")]
    OpenAlphabet,
    #[error("unknown reference {0:?}")]
    UnknownRef(String),
    #[error("definition {0:?} refers to itself")]
    CyclicDefinition(String),
    #[error("symbol {0} is not declared")]
    UndeclaredSymbol(Symbol),
    #[error("malformed automaton dump near {0:?}")]
    BadDump(String),
}
