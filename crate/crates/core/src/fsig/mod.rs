//! Finite-state intersection grammar: syntactic-tag lookup, rule
//! compilation and intersection parsing.

mod compile;
mod dsl;
mod parse;
mod syntax;

use thiserror::Error;

use crate::fsa::FsaError;
use crate::tag::Symbol;

pub use compile::{compile_grammar, compile_rule, is_archive, CompiledGrammar, CompiledRule};
pub use dsl::{builtin_definitions, is_reference_name, parse_fsig_grammar, FsigGrammar, ImplicationRule, CLAUSE, ONE_READING};
pub use parse::{
    encode_sentence, fold_survivors, intersection_order, parse, split_string, ParseCaps, ParseResult, ParseStatus,
};
pub use syntax::{boundary_sets, lookup_syntax, BoundaryPolicy, SyntaxMap};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FsigError {
    #[error("grammar line {line}: {msg}")]
    Dsl { line: usize, msg: String },
    #[error("rule {name}: {source}")]
    Rule { name: String, source: FsaError },
    #[error("rule {0}: its target matches nothing")]
    EmptyTarget(String),
    #[error("syntax map line {line}: {msg}")]
    SyntaxMap { line: usize, msg: String },
    #[error("no syntactic tags for {pos} (word {surface:?})")]
    NoMapping { surface: String, pos: Symbol },
    #[error("{0}")]
    Tag(String),
    #[error("compiled archive: {0}")]
    Archive(String),
    #[error("parse result does not fit the sentence")]
    Fold,
}
