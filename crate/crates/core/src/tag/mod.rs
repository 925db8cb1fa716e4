//! Symbols, readings, cohorts and sentences, plus the text formats that
//! carry them between pipeline stages.

mod resolve;
mod stream;
mod symbol;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

pub use resolve::{resolve_strings, reading_product, ResolveError, DEFAULT_RESOLVE_CAP};
pub use stream::{
    emit_cohort, emit_cohort_stream, emit_sentence, emit_tabular, emit_tabular_sentence, parse_cohort_stream,
    parse_cohorts, StreamError,
};
pub use symbol::{Boundary, BoundarySet, Symbol, SymbolError, SymbolKind, SURFACE_MARKERS};

/// A flat sequence of symbols: one resolved linearisation of a sentence.
pub type SymbolString = Vec<Symbol>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TagError {
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error("reading has no morphological tags")]
    NoMorphTags,
    #[error("{0} is not a morphological tag")]
    NotMorph(Symbol),
    #[error("{0} is not a syntactic tag")]
    NotSyntactic(Symbol),
    #[error("main-verb reading must carry exactly two syntactic tags, found {0}")]
    MainVerbArity(usize),
    #[error("reading carries {0} syntactic tags; only main verbs carry two")]
    TooManySyntactic(usize),
    #[error("cohort {0:?} has no readings")]
    EmptyCohort(String),
    #[error("cohort {surface:?} repeats reading {reading}")]
    DuplicateReading { surface: String, reading: String },
    #[error("empty surface")]
    EmptySurface,
    #[error("sentence has no cohorts")]
    EmptySentence,
    #[error("sentence must open with @@ and its last cohort must end with @@")]
    SentenceEdges,
}

/// One candidate analysis of a word.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Reading {
    baseform: Symbol,
    morph: Vec<Symbol>,
    syn: Vec<Symbol>,
}

fn is_main_verb_tag(s: &Symbol) -> bool {
    matches!(s.text(), "@MV" | "@mv")
}

impl Reading {
    pub fn new(baseform: Symbol, morph: Vec<Symbol>, syn: Vec<Symbol>) -> Result<Reading, TagError> {
        if baseform.kind() != SymbolKind::Baseform {
            return Err(TagError::NotMorph(baseform));
        }
        if morph.is_empty() {
            return Err(TagError::NoMorphTags);
        }
        for (i, t) in morph.iter().enumerate() {
            let ok = match t.kind() {
                SymbolKind::MorphTag => true,
                // punctuation readings carry their marker as the only tag
                SymbolKind::SurfaceMarker => i == 0 && morph.len() == 1,
                _ => false,
            };
            if !ok {
                return Err(TagError::NotMorph(t.clone()));
            }
        }
        if let Some(t) = syn.iter().find(|t| t.kind() != SymbolKind::SyntacticTag) {
            return Err(TagError::NotSyntactic(t.clone()));
        }
        if syn.iter().any(is_main_verb_tag) {
            if syn.len() != 2 {
                return Err(TagError::MainVerbArity(syn.len()));
            }
        } else if syn.len() > 1 {
            return Err(TagError::TooManySyntactic(syn.len()));
        }
        Ok(Reading { baseform, morph, syn })
    }

    /// Parses `"base" TAG TAG ...`, splitting morphological from syntactic
    /// tags by their spelling.
    pub fn parse(line: &str) -> Result<Reading, ReadingParseError> {
        let line = line.trim();
        let rest = line.strip_prefix('"').ok_or(ReadingParseError::MissingBaseform)?;
        let close = rest.find('"').ok_or(ReadingParseError::MissingBaseform)?;
        let baseform = Symbol::baseform(&rest[..close])?;
        let mut morph = Vec::new();
        let mut syn = Vec::new();
        for tok in rest[close + 1..].split_whitespace() {
            let sym = Symbol::parse(tok)?;
            match sym.kind() {
                SymbolKind::MorphTag | SymbolKind::SurfaceMarker if syn.is_empty() => morph.push(sym),
                SymbolKind::SyntacticTag => syn.push(sym),
                _ => return Err(ReadingParseError::Misplaced(tok.to_string())),
            }
        }
        Ok(Reading::new(baseform, morph, syn)?)
    }

    pub fn baseform(&self) -> &Symbol {
        &self.baseform
    }

    pub fn morph_tags(&self) -> &[Symbol] {
        &self.morph
    }

    pub fn syn_tags(&self) -> &[Symbol] {
        &self.syn
    }

    /// Part-of-speech category: the first morphological tag.
    pub fn pos(&self) -> &Symbol {
        &self.morph[0]
    }

    pub fn is_punctuation(&self) -> bool {
        self.morph[0].kind() == SymbolKind::SurfaceMarker
    }

    pub fn has_tag(&self, text: &str) -> bool {
        self.morph.iter().chain(&self.syn).any(|t| t.text() == text)
    }

    /// Base form, morphological tags, syntactic tags, in that order.
    pub fn symbols(&self) -> impl Iterator<Item = &Symbol> {
        std::iter::once(&self.baseform).chain(&self.morph).chain(&self.syn)
    }

    pub fn with_syn(&self, syn: Vec<Symbol>) -> Result<Reading, TagError> {
        Reading::new(self.baseform.clone(), self.morph.clone(), syn)
    }

    pub fn without_syn(&self) -> Reading {
        Reading { baseform: self.baseform.clone(), morph: self.morph.clone(), syn: Vec::new() }
    }
}

impl fmt::Display for Reading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.baseform)?;
        for t in self.morph.iter().chain(&self.syn) {
            write!(f, " {t}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Reading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReadingParseError {
    #[error("reading must start with a quoted base form")]
    MissingBaseform,
    #[error("tag {0:?} out of place")]
    Misplaced(String),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Tag(#[from] TagError),
}

/// A surface token with its alternative readings and the alternatives for
/// the boundary that follows it.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cohort {
    surface: String,
    readings: Vec<Reading>,
    trailing: BoundarySet,
}

impl Cohort {
    pub fn new(surface: impl Into<String>, readings: Vec<Reading>, trailing: BoundarySet) -> Result<Cohort, TagError> {
        let surface = surface.into();
        if surface.trim().is_empty() {
            return Err(TagError::EmptySurface);
        }
        if readings.is_empty() {
            return Err(TagError::EmptyCohort(surface));
        }
        let mut seen = BTreeSet::new();
        for r in &readings {
            if !seen.insert(r) {
                return Err(TagError::DuplicateReading { surface, reading: r.to_string() });
            }
        }
        Ok(Cohort { surface, readings, trailing })
    }

    pub fn surface(&self) -> &str {
        &self.surface
    }

    pub fn readings(&self) -> &[Reading] {
        &self.readings
    }

    pub fn trailing(&self) -> BoundarySet {
        self.trailing
    }

    pub fn is_ambiguous(&self) -> bool {
        self.readings.len() > 1
    }

    pub fn set_trailing(&mut self, trailing: BoundarySet) {
        self.trailing = trailing;
    }

    /// Keeps the readings for which `keep` holds. Refuses to empty the
    /// cohort: returns `false` and leaves it unchanged in that case.
    pub fn retain_readings(&mut self, mut keep: impl FnMut(&Reading) -> bool) -> bool {
        let kept: Vec<Reading> = self.readings.iter().filter(|r| keep(r)).cloned().collect();
        if kept.is_empty() {
            return false;
        }
        self.readings = kept;
        true
    }

    /// Removes reading `idx` unless it is the last one.
    pub fn remove_reading(&mut self, idx: usize) -> bool {
        if self.readings.len() < 2 {
            return false;
        }
        self.readings.remove(idx);
        true
    }

    pub fn replace_readings(&mut self, readings: Vec<Reading>) -> Result<(), TagError> {
        let c = Cohort::new(self.surface.clone(), readings, self.trailing)?;
        self.readings = c.readings;
        Ok(())
    }
}

impl fmt::Debug for Cohort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}{:?}", self.surface, self.readings, self.trailing)
    }
}

/// An ordered run of cohorts delimited by sentence boundaries.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Sentence {
    leading: BoundarySet,
    cohorts: Vec<Cohort>,
}

impl Sentence {
    pub fn new(cohorts: Vec<Cohort>) -> Result<Sentence, TagError> {
        let last = cohorts.last().ok_or(TagError::EmptySentence)?;
        if last.trailing != BoundarySet::sentence() {
            return Err(TagError::SentenceEdges);
        }
        Ok(Sentence { leading: BoundarySet::sentence(), cohorts })
    }

    pub fn leading(&self) -> BoundarySet {
        self.leading
    }

    pub fn cohorts(&self) -> &[Cohort] {
        &self.cohorts
    }

    pub fn cohorts_mut(&mut self) -> &mut [Cohort] {
        &mut self.cohorts
    }

    pub fn len(&self) -> usize {
        self.cohorts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cohorts.is_empty()
    }

    pub fn total_readings(&self) -> usize {
        self.cohorts.iter().map(|c| c.readings.len()).sum()
    }

    pub fn into_cohorts(self) -> Vec<Cohort> {
        self.cohorts
    }
}
