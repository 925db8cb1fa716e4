//! The whole tagger: tokenise, analyse, disambiguate with the constraint
//! grammar, then parse with the intersection grammar, falling back to the
//! constraint-grammar result when parsing yields nothing.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::cg::{self, CgError, TierSelection};
use crate::fsig::{self, CompiledGrammar, FsigError, ParseCaps, ParseStatus, SyntaxMap};
use crate::morph::{self, Heuristics, Lexicon};
use crate::tag::{self, BoundarySet, Cohort, Sentence, Symbol, SURFACE_MARKERS};
use crate::tokenizer::{self, TokenizerConfig};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Cg(#[from] CgError),
}

/// Measurement points along the pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    /// Morphological analysis.
    D0,
    /// D0 plus strict constraints.
    D1,
    /// D1 plus heuristic constraints.
    D2,
    /// D2 plus the intersection parser.
    D3,
}

impl Stage {
    pub const ALL: [Stage; 4] = [Stage::D0, Stage::D1, Stage::D2, Stage::D3];

    pub fn parse(s: &str) -> Option<Stage> {
        Stage::ALL.into_iter().find(|st| st.to_string().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Why a sentence kept its constraint-grammar analysis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Fallback {
    Empty,
    Overflow,
    /// Syntactic-tag lookup or folding failed.
    Error(String),
}

impl fmt::Display for Fallback {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fallback::Empty => f.write_str("no parse"),
            Fallback::Overflow => f.write_str("parse overflow"),
            Fallback::Error(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SentenceAnalysis {
    pub d0: Sentence,
    pub d1: Sentence,
    pub d2: Sentence,
    /// Parser output, or a copy of `d2` when the parser fell back.
    pub d3: Sentence,
    pub status: Option<ParseStatus>,
    /// Parser analyses behind `d3`, after ranking; zero on fallback.
    pub analyses: usize,
    pub fallback: Option<Fallback>,
}

impl SentenceAnalysis {
    pub fn stage(&self, stage: Stage) -> &Sentence {
        match stage {
            Stage::D0 => &self.d0,
            Stage::D1 => &self.d1,
            Stage::D2 => &self.d2,
            Stage::D3 => &self.d3,
        }
    }
}

/// Unit of pipeline input and output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Segment<T> {
    /// A `<...>` line, passed through untouched.
    Marker(String),
    Sentence(T),
}

pub struct Tagger {
    pub tokenizer: TokenizerConfig,
    pub lexicon: Lexicon,
    pub heuristics: Heuristics,
    pub cg: cg::Grammar,
    pub heuristic_tier: bool,
    pub syntax_map: SyntaxMap,
    pub fsig: CompiledGrammar,
    pub caps: ParseCaps,
}

const SENTENCE_END: &[&str] = &["@fullstop", "@question", "@exclamation"];

impl Tagger {
    /// Assembles a tagger. Lexicon surfaces ending in a period become
    /// tokenizer abbreviations, and the constraint grammar is checked
    /// against the tags the analyser can produce.
    pub fn new(
        mut tokenizer: TokenizerConfig,
        lexicon: Lexicon,
        heuristics: Heuristics,
        cg: cg::Grammar,
        syntax_map: SyntaxMap,
        fsig: CompiledGrammar,
    ) -> Result<Tagger, PipelineError> {
        tokenizer.add_abbreviations(lexicon.surfaces().filter(|s| s.len() > 1 && s.ends_with('.')));
        let mut inventory: BTreeSet<Symbol> = lexicon.tag_inventory();
        inventory.extend(morph::default_reading("x").morph_tags().iter().cloned());
        for rule in heuristics.rules() {
            for t in &rule.readings {
                inventory.extend(t.instantiate("x").morph_tags().iter().cloned());
            }
        }
        inventory.extend(SURFACE_MARKERS.iter().filter_map(|m| Symbol::parse(m).ok()));
        cg.check_tags(&inventory)?;
        Ok(Tagger {
            tokenizer,
            lexicon,
            heuristics,
            cg,
            heuristic_tier: true,
            syntax_map,
            fsig,
            caps: ParseCaps::default(),
        })
    }

    /// Tokenises `text` and groups the tokens into sentences. A sentence
    /// ends after a full stop, question or exclamation mark, before a
    /// document marker, or at the end of the input.
    pub fn segments(&self, text: &str) -> Vec<Segment<Vec<String>>> {
        let mut out = Vec::new();
        let mut cur: Vec<String> = Vec::new();
        for tok in tokenizer::tokenize(text, &self.tokenizer) {
            if tokenizer::is_document_marker(&tok) {
                if !cur.is_empty() {
                    out.push(Segment::Sentence(std::mem::take(&mut cur)));
                }
                out.push(Segment::Marker(tok));
                continue;
            }
            let ends = SENTENCE_END.contains(&tok.as_str());
            cur.push(tok);
            if ends {
                out.push(Segment::Sentence(std::mem::take(&mut cur)));
            }
        }
        if !cur.is_empty() {
            out.push(Segment::Sentence(cur));
        }
        out
    }

    /// D0 for one sentence's tokens.
    pub fn analyze(&self, tokens: &[String]) -> Sentence {
        let n = tokens.len();
        let cohorts: Vec<Cohort> = tokens
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let mut c = morph::analyze(t, &self.lexicon, &self.heuristics);
                if i + 1 == n {
                    c.set_trailing(BoundarySet::sentence());
                }
                c
            })
            .collect();
        Sentence::new(cohorts).expect("non-empty sentence closed by @@")
    }

    /// Runs every stage on one sentence. Never fails: parser trouble turns
    /// into a fallback to the D2 analysis.
    pub fn tag_sentence(&self, tokens: &[String]) -> SentenceAnalysis {
        let d0 = self.analyze(tokens);
        let d1 = cg::apply_grammar(&d0, &self.cg, TierSelection::Strict);
        let d2 = if self.heuristic_tier {
            cg::apply_grammar(&d1, &self.cg, TierSelection::StrictThenHeuristic)
        } else {
            d1.clone()
        };
        let (d3, status, analyses, fallback) = match self.parse(&d2) {
            Ok((s, status, n)) => (s, Some(status), n, None),
            Err((status, why)) => (d2.clone(), status, 0, Some(why)),
        };
        SentenceAnalysis { d0, d1, d2, d3, status, analyses, fallback }
    }

    fn parse(&self, d2: &Sentence) -> Result<(Sentence, ParseStatus, usize), (Option<ParseStatus>, Fallback)> {
        let err = |e: FsigError| (None, Fallback::Error(e.to_string()));
        let expanded = fsig::lookup_syntax(d2, &self.syntax_map).map_err(err)?;
        let result = fsig::parse(&fsig::encode_sentence(&expanded), &self.fsig, self.caps);
        match result.status {
            ParseStatus::Empty => Err((Some(result.status), Fallback::Empty)),
            ParseStatus::Overflow => Err((Some(result.status), Fallback::Overflow)),
            status => {
                let preferred = result.preferred_strings();
                let folded = fsig::fold_survivors(&expanded, preferred)
                    .map_err(|e| (Some(status), Fallback::Error(e.to_string())))?;
                Ok((folded, status, preferred.len()))
            }
        }
    }

    pub fn run(&self, text: &str) -> Vec<Segment<SentenceAnalysis>> {
        self.segments(text)
            .into_iter()
            .map(|seg| match seg {
                Segment::Marker(m) => Segment::Marker(m),
                Segment::Sentence(toks) => Segment::Sentence(self.tag_sentence(&toks)),
            })
            .collect()
    }
}

/// Output layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Vertical,
    Tabular,
}

pub fn render_sentence(s: &Sentence, format: Format) -> String {
    match format {
        Format::Vertical => tag::emit_sentence(s),
        Format::Tabular => tag::emit_tabular_sentence(s),
    }
}

pub fn render(items: &[Segment<SentenceAnalysis>], stage: Stage, format: Format) -> String {
    let mut out = String::new();
    for item in items {
        match item {
            Segment::Marker(m) => {
                out.push_str(m);
                out.push('\n');
            }
            Segment::Sentence(a) => out.push_str(&render_sentence(a.stage(stage), format)),
        }
    }
    out
}
