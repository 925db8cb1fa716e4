use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Punctuation and other non-word surfaces are replaced by these marker
/// tokens during tokenisation.
pub const SURFACE_MARKERS: &[&str] = &[
    "@comma",
    "@fullstop",
    "@colon",
    "@semicolon",
    "@question",
    "@exclamation",
    "@dash",
    "@lparen",
    "@rparen",
    "@quote",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolKind {
    Boundary,
    Baseform,
    MorphTag,
    SyntacticTag,
    SurfaceMarker,
}

impl SymbolKind {
    /// Classifies a token by its spelling.
    ///
    /// Quoted tokens are base forms; `@`-prefixed or `@`-suffixed tokens are
    /// syntactic tags unless they are one of the five boundaries or a known
    /// surface marker; everything else is a morphological tag.
    pub fn classify(text: &str) -> SymbolKind {
        if Boundary::from_text(text).is_some() {
            SymbolKind::Boundary
        } else if text.len() >= 2 && text.starts_with('"') && text.ends_with('"') {
            SymbolKind::Baseform
        } else if SURFACE_MARKERS.contains(&text) {
            SymbolKind::SurfaceMarker
        } else if text.starts_with('@') || text.ends_with('@') {
            SymbolKind::SyntacticTag
        } else {
            SymbolKind::MorphTag
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SymbolError {
    #[error("empty symbol")]
    Empty,
    #[error("symbol {0:?} contains whitespace")]
    Whitespace(String),
    #[error("{text:?} is not a valid {kind:?} symbol")]
    WrongKind { text: String, kind: SymbolKind },
}

/// An atom of the tag alphabet.
///
/// Symbols compare by kind first and then by text; this order fixes the
/// canonical numbering of automaton states and the enumeration order of
/// accepted strings.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    kind: SymbolKind,
    text: Arc<str>,
}

impl Symbol {
    /// Builds a symbol of an explicit kind. Base forms are given without
    /// their quotes and may contain single spaces (multiword syntagms).
    pub fn new(kind: SymbolKind, text: &str) -> Result<Symbol, SymbolError> {
        if text.is_empty() {
            return Err(SymbolError::Empty);
        }
        let bad_space = match kind {
            SymbolKind::Baseform => text.contains(['\t', '\n', '\r']),
            _ => text.chars().any(char::is_whitespace),
        };
        if bad_space {
            return Err(SymbolError::Whitespace(text.to_string()));
        }
        let ok = match kind {
            SymbolKind::Baseform => !text.contains('"'),
            other => SymbolKind::classify(text) == other,
        };
        if !ok {
            return Err(SymbolError::WrongKind { text: text.to_string(), kind });
        }
        Ok(Symbol { kind, text: Arc::from(text) })
    }

    /// Parses the display form: `"base"` for base forms, bare text otherwise.
    pub fn parse(text: &str) -> Result<Symbol, SymbolError> {
        match SymbolKind::classify(text) {
            SymbolKind::Baseform => Symbol::new(SymbolKind::Baseform, &text[1..text.len() - 1]),
            kind => Symbol::new(kind, text),
        }
    }

    pub fn baseform(text: &str) -> Result<Symbol, SymbolError> {
        Symbol::new(SymbolKind::Baseform, text)
    }

    pub fn boundary(b: Boundary) -> Symbol {
        Symbol { kind: SymbolKind::Boundary, text: Arc::from(b.as_str()) }
    }

    pub fn kind(&self) -> SymbolKind {
        self.kind
    }

    /// Raw text, without quotes for base forms.
    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn is_boundary(&self) -> bool {
        self.kind == SymbolKind::Boundary
    }

    pub fn as_boundary(&self) -> Option<Boundary> {
        match self.kind {
            SymbolKind::Boundary => Boundary::from_text(&self.text),
            _ => None,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SymbolKind::Baseform => write!(f, "\"{}\"", self.text),
            _ => f.write_str(&self.text),
        }
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The five word-boundary alternatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Boundary {
    /// `@@`
    Sentence,
    /// `@/`, between juxtaposed finite clauses
    Clause,
    /// `@<`, opens a centre-embedded clause
    EmbedOpen,
    /// `@>`, closes a centre-embedded clause
    EmbedClose,
    /// `@`
    Word,
}

impl Boundary {
    pub const ALL: [Boundary; 5] = [
        Boundary::Sentence,
        Boundary::Clause,
        Boundary::EmbedOpen,
        Boundary::EmbedClose,
        Boundary::Word,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Boundary::Sentence => "@@",
            Boundary::Clause => "@/",
            Boundary::EmbedOpen => "@<",
            Boundary::EmbedClose => "@>",
            Boundary::Word => "@",
        }
    }

    pub fn from_text(text: &str) -> Option<Boundary> {
        Boundary::ALL.into_iter().find(|b| b.as_str() == text)
    }

    fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A non-empty set of boundary alternatives.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoundarySet(u8);

impl BoundarySet {
    pub fn single(b: Boundary) -> BoundarySet {
        BoundarySet(b.bit())
    }

    pub fn word() -> BoundarySet {
        BoundarySet::single(Boundary::Word)
    }

    pub fn sentence() -> BoundarySet {
        BoundarySet::single(Boundary::Sentence)
    }

    /// `@`, `@/`, `@<`, `@>`: every sentence-internal alternative.
    pub fn clause_alternatives() -> BoundarySet {
        BoundarySet::from_iter([
            Boundary::Word,
            Boundary::Clause,
            Boundary::EmbedOpen,
            Boundary::EmbedClose,
        ])
        .unwrap()
    }

    pub fn from_iter<I: IntoIterator<Item = Boundary>>(items: I) -> Option<BoundarySet> {
        let bits = items.into_iter().fold(0u8, |acc, b| acc | b.bit());
        (bits != 0).then_some(BoundarySet(bits))
    }

    pub fn contains(self, b: Boundary) -> bool {
        self.0 & b.bit() != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_single(self, b: Boundary) -> bool {
        self.0 == b.bit()
    }

    /// Members in canonical order (`@@ @/ @< @> @`).
    pub fn iter(self) -> impl Iterator<Item = Boundary> {
        Boundary::ALL.into_iter().filter(move |b| self.contains(*b))
    }
}

impl fmt::Display for BoundarySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for b in self.iter() {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            f.write_str(b.as_str())?;
        }
        Ok(())
    }
}

impl fmt::Debug for BoundarySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}
