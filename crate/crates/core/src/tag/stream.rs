//! Vertical cohort streams and the tabular display format.
//!
//! Vertical format, one cohort per block:
//!
//! ```text
//! "<that>"
//! 	"that" <**CLB> CS
//! 	"that" DET CENTRAL DEM SG
//! 	@BOUNDARIES: @/ @
//! ```
//!
//! The boundary line is present only when the alternatives differ from the
//! plain `@`. A cohort whose boundary is exactly `@@` closes its sentence.

use std::fmt::Write as _;

use thiserror::Error;

use super::{Boundary, BoundarySet, Cohort, Reading, ReadingParseError, Sentence, SymbolKind, TagError};

const BOUNDARY_PREFIX: &str = "@BOUNDARIES:";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StreamError {
    #[error("line {line}: reading or boundary line before any cohort header")]
    NoHeader { line: usize },
    #[error("line {line}: cohort {surface:?} has no readings")]
    EmptyCohort { line: usize, surface: String },
    #[error("line {line}: unknown boundary token {token:?}")]
    UnknownBoundary { line: usize, token: String },
    #[error("line {line}: malformed line {text:?}")]
    Malformed { line: usize, text: String },
    #[error("line {line}: {source}")]
    Reading { line: usize, source: ReadingParseError },
    #[error("line {line}: {source}")]
    Tag { line: usize, source: TagError },
    #[error("stream ends inside a sentence (last cohort lacks @@)")]
    Unterminated,
}

impl StreamError {
    pub fn line(&self) -> Option<usize> {
        match self {
            StreamError::NoHeader { line }
            | StreamError::EmptyCohort { line, .. }
            | StreamError::UnknownBoundary { line, .. }
            | StreamError::Malformed { line, .. }
            | StreamError::Reading { line, .. }
            | StreamError::Tag { line, .. } => Some(*line),
            StreamError::Unterminated => None,
        }
    }
}

struct Pending {
    line: usize,
    surface: String,
    readings: Vec<Reading>,
    trailing: BoundarySet,
}

impl Pending {
    fn finish(self) -> Result<Cohort, StreamError> {
        if self.readings.is_empty() {
            return Err(StreamError::EmptyCohort { line: self.line, surface: self.surface });
        }
        Cohort::new(self.surface, self.readings, self.trailing)
            .map_err(|source| StreamError::Tag { line: self.line, source })
    }
}

fn is_document_marker(line: &str) -> bool {
    line.starts_with('<') && line.ends_with('>')
}

/// Parses cohort blocks without grouping them into sentences.
pub fn parse_cohorts(text: &str) -> Result<Vec<Cohort>, StreamError> {
    let mut out = Vec::new();
    let mut pending: Option<Pending> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        if let Some(body) = raw.strip_prefix('\t') {
            let cur = pending.as_mut().ok_or(StreamError::NoHeader { line })?;
            if let Some(rest) = body.strip_prefix(BOUNDARY_PREFIX) {
                let mut alts = Vec::new();
                for tok in rest.split_whitespace() {
                    let b = Boundary::from_text(tok)
                        .ok_or_else(|| StreamError::UnknownBoundary { line, token: tok.to_string() })?;
                    alts.push(b);
                }
                cur.trailing = BoundarySet::from_iter(alts)
                    .ok_or_else(|| StreamError::Malformed { line, text: raw.to_string() })?;
            } else {
                let r = Reading::parse(body).map_err(|source| StreamError::Reading { line, source })?;
                cur.readings.push(r);
            }
        } else if let Some(surface) = raw.strip_prefix("\"<").and_then(|s| s.strip_suffix(">\"")) {
            if let Some(p) = pending.take() {
                out.push(p.finish()?);
            }
            pending = Some(Pending {
                line,
                surface: surface.to_string(),
                readings: Vec::new(),
                trailing: BoundarySet::word(),
            });
        } else if is_document_marker(raw.trim()) {
            continue;
        } else {
            return Err(StreamError::Malformed { line, text: raw.to_string() });
        }
    }
    if let Some(p) = pending.take() {
        out.push(p.finish()?);
    }
    Ok(out)
}

/// Parses a vertical stream into sentences, splitting after every cohort
/// whose boundary is exactly `@@`.
pub fn parse_cohort_stream(text: &str) -> Result<Vec<Sentence>, StreamError> {
    let mut sentences = Vec::new();
    let mut current = Vec::new();
    for cohort in parse_cohorts(text)? {
        let closes = cohort.trailing().is_single(Boundary::Sentence);
        current.push(cohort);
        if closes {
            let s = Sentence::new(std::mem::take(&mut current))
                .map_err(|source| StreamError::Tag { line: 0, source })?;
            sentences.push(s);
        }
    }
    if !current.is_empty() {
        return Err(StreamError::Unterminated);
    }
    Ok(sentences)
}

pub fn emit_cohort(out: &mut String, cohort: &Cohort) {
    let _ = writeln!(out, "\"<{}>\"", cohort.surface());
    for r in cohort.readings() {
        let _ = writeln!(out, "\t{r}");
    }
    if cohort.trailing() != BoundarySet::word() {
        let _ = writeln!(out, "\t{BOUNDARY_PREFIX} {}", cohort.trailing());
    }
}

pub fn emit_sentence(sentence: &Sentence) -> String {
    let mut out = String::new();
    for c in sentence.cohorts() {
        emit_cohort(&mut out, c);
    }
    out
}

pub fn emit_cohort_stream(sentences: &[Sentence]) -> String {
    sentences.iter().map(emit_sentence).collect()
}

fn displayed_morph(r: &Reading) -> String {
    r.morph_tags()
        .iter()
        .filter(|t| t.kind() == SymbolKind::MorphTag && !(t.text().starts_with('<') && t.text().len() > 2))
        .map(|t| t.text())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Tabular display: a leading `@@` line, then one line per reading with
/// surface, morphological tags, syntactic tags and boundary separated by
/// tabs, then a blank line. Base forms, punctuation categories and
/// angle-bracketed secondary tags are not displayed.
pub fn emit_tabular_sentence(sentence: &Sentence) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", sentence.leading());
    for c in sentence.cohorts() {
        for r in c.readings() {
            let syn: Vec<&str> = r.syn_tags().iter().map(|t| t.text()).collect();
            let _ = writeln!(out, "{}\t{}\t{}\t{}", c.surface(), displayed_morph(r), syn.join(" "), c.trailing());
        }
    }
    out.push('\n');
    out
}

pub fn emit_tabular(sentences: &[Sentence]) -> String {
    sentences.iter().map(emit_tabular_sentence).collect()
}
