//! Syntactic-tag lookup and boundary introduction.

use super::FsigError;
use crate::tag::{BoundarySet, Cohort, Reading, Sentence, Symbol, SymbolKind};

/// Where clause-boundary alternatives are introduced between words.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BoundaryPolicy {
    /// Clause alternatives only next to finite verbs, or before a
    /// conjunction or relative pronoun; the plain `@` elsewhere.
    #[default]
    Contextual,
    /// Clause alternatives between every pair of words.
    Uniform,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Entry {
    key: Vec<Symbol>,
    alternatives: Vec<Vec<Symbol>>,
}

/// Morphological key to candidate syntactic-tag lists.
///
/// ```text
/// %boundaries uniform
/// N	@SUBJ | @OBJ | @>N
/// V IMP	@MV MC@
/// ```
///
/// A key is a part-of-speech tag optionally refined by further tags; the
/// entry with the most tags that a reading carries wins, earlier lines
/// breaking ties.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SyntaxMap {
    entries: Vec<Entry>,
    policy: BoundaryPolicy,
}

impl SyntaxMap {
    pub fn parse(text: &str) -> Result<SyntaxMap, FsigError> {
        let mut map = SyntaxMap::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let err = |msg: String| FsigError::SyntaxMap { line, msg };
            if let Some(directive) = trimmed.strip_prefix('%') {
                map.policy = match directive.split_whitespace().collect::<Vec<_>>()[..] {
                    ["boundaries", "uniform"] => BoundaryPolicy::Uniform,
                    ["boundaries", "contextual"] => BoundaryPolicy::Contextual,
                    _ => return Err(err(format!("unknown directive %{directive}"))),
                };
                continue;
            }
            let (key, value) = raw.split_once('\t').ok_or_else(|| err("expected KEY<TAB>ALTERNATIVES".into()))?;
            let mut key_syms = Vec::new();
            for tok in key.split_whitespace() {
                let s = Symbol::parse(tok).map_err(|e| err(e.to_string()))?;
                if s.kind() != SymbolKind::MorphTag {
                    return Err(err(format!("{tok} is not a morphological tag")));
                }
                key_syms.push(s);
            }
            if key_syms.is_empty() {
                return Err(err("empty key".into()));
            }
            let mut alternatives = Vec::new();
            for alt in value.split('|') {
                let mut tags = Vec::new();
                for tok in alt.split_whitespace() {
                    let s = Symbol::parse(tok).map_err(|e| err(e.to_string()))?;
                    if s.kind() != SymbolKind::SyntacticTag {
                        return Err(err(format!("{tok} is not a syntactic tag")));
                    }
                    tags.push(s);
                }
                // arity rules are those of readings
                let probe = Reading::new(Symbol::baseform("x").expect("static"), key_syms.clone(), tags.clone());
                if let Err(e) = probe {
                    return Err(err(e.to_string()));
                }
                if tags.is_empty() {
                    return Err(err("empty alternative".into()));
                }
                alternatives.push(tags);
            }
            map.entries.push(Entry { key: key_syms, alternatives });
        }
        Ok(map)
    }

    pub fn policy(&self) -> BoundaryPolicy {
        self.policy
    }

    pub fn set_policy(&mut self, policy: BoundaryPolicy) {
        self.policy = policy;
    }

    /// Candidate syntactic-tag lists for a reading.
    pub fn candidates(&self, r: &Reading) -> Option<&[Vec<Symbol>]> {
        let mut best: Option<&Entry> = None;
        for e in &self.entries {
            let fits = &e.key[0] == r.pos() && e.key[1..].iter().all(|t| r.morph_tags().contains(t));
            if fits && best.is_none_or(|b| e.key.len() > b.key.len()) {
                best = Some(e);
            }
        }
        best.map(|e| e.alternatives.as_slice())
    }

    /// Every syntactic tag the map can introduce.
    pub fn syntactic_tags(&self) -> Vec<Symbol> {
        let mut v: Vec<Symbol> = self.entries.iter().flat_map(|e| e.alternatives.iter().flatten().cloned()).collect();
        v.sort();
        v.dedup();
        v
    }
}

fn has_tag(c: &Cohort, pos: &str, extra: &[&str]) -> bool {
    c.readings()
        .iter()
        .any(|r| r.pos().text() == pos && (extra.is_empty() || extra.iter().any(|t| r.has_tag(t))))
}

fn finite_verb(c: &Cohort) -> bool {
    has_tag(c, "V", &["PRES", "PAST", "IMP", "SUBJUNCTIVE"])
}

fn opens_clause(c: &Cohort) -> bool {
    has_tag(c, "CS", &[]) || has_tag(c, "CC", &[]) || has_tag(c, "PRON", &["<Rel>", "REL"])
}

/// Boundary alternatives after each cohort under `policy`. The last cohort
/// always closes the sentence.
pub fn boundary_sets(cohorts: &[Cohort], policy: BoundaryPolicy) -> Vec<BoundarySet> {
    (0..cohorts.len())
        .map(|i| {
            if i + 1 == cohorts.len() {
                return BoundarySet::sentence();
            }
            let clause = match policy {
                BoundaryPolicy::Uniform => true,
                BoundaryPolicy::Contextual => {
                    opens_clause(&cohorts[i + 1]) || finite_verb(&cohorts[i]) || finite_verb(&cohorts[i + 1])
                }
            };
            if clause {
                BoundarySet::clause_alternatives()
            } else {
                BoundarySet::word()
            }
        })
        .collect()
}

/// Expands each reading into one reading per candidate syntactic-tag list
/// and installs boundary alternatives. Readings that already carry
/// syntactic tags, and punctuation readings, are kept as they are.
pub fn lookup_syntax(sentence: &Sentence, map: &SyntaxMap) -> Result<Sentence, FsigError> {
    let bounds = boundary_sets(sentence.cohorts(), map.policy);
    let mut out = Vec::with_capacity(sentence.len());
    for (c, b) in sentence.cohorts().iter().zip(bounds) {
        let mut readings: Vec<Reading> = Vec::new();
        for r in c.readings() {
            let expanded = if r.is_punctuation() || !r.syn_tags().is_empty() {
                vec![r.clone()]
            } else {
                let alts = map.candidates(r).ok_or_else(|| FsigError::NoMapping {
                    surface: c.surface().to_string(),
                    pos: r.pos().clone(),
                })?;
                alts.iter()
                    .map(|syn| r.with_syn(syn.clone()))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| FsigError::Tag(e.to_string()))?
            };
            for e in expanded {
                if !readings.contains(&e) {
                    readings.push(e);
                }
            }
        }
        out.push(Cohort::new(c.surface(), readings, b).map_err(|e| FsigError::Tag(e.to_string()))?);
    }
    Sentence::new(out).map_err(|e| FsigError::Tag(e.to_string()))
}
