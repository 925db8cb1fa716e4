//! Morphological analysis: full-form lexicon lookup, then word-shape
//! heuristics, then a default nominal reading.

use std::collections::{BTreeMap, BTreeSet};

use regex::Regex;
use thiserror::Error;

use crate::tag::{parse_cohorts, BoundarySet, Cohort, Reading, StreamError, Symbol, SymbolKind, SURFACE_MARKERS};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MorphError {
    #[error("lexicon: {0}")]
    Lexicon(#[from] StreamError),
    #[error("heuristics line {line}: {msg}")]
    Heuristic { line: usize, msg: String },
    #[error("heuristics line {line}: priority {priority} is already taken")]
    DuplicatePriority { line: usize, priority: i64 },
}

/// Surface form to readings. Lookup tries the exact surface first, then its
/// lowercased form.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: BTreeMap<String, Vec<Reading>>,
}

impl Lexicon {
    pub fn new() -> Lexicon {
        Lexicon::default()
    }

    /// Adds readings for `surface`, skipping ones already present.
    pub fn insert(&mut self, surface: &str, readings: impl IntoIterator<Item = Reading>) {
        let entry = self.entries.entry(surface.to_string()).or_default();
        for r in readings {
            if !entry.contains(&r) {
                entry.push(r);
            }
        }
    }

    pub fn lookup(&self, surface: &str) -> Option<&[Reading]> {
        if let Some(r) = self.entries.get(surface) {
            return Some(r);
        }
        let lower = surface.to_lowercase();
        if lower != surface {
            return self.entries.get(&lower).map(Vec::as_slice);
        }
        None
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn surfaces(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Every morphological tag used by some entry.
    pub fn tag_inventory(&self) -> BTreeSet<Symbol> {
        self.entries.values().flatten().flat_map(|r| r.morph_tags().iter().cloned()).collect()
    }
}

/// Reads a lexicon written as vertical cohort blocks. Blocks for the same
/// surface are merged.
pub fn load_lexicon(text: &str) -> Result<Lexicon, MorphError> {
    let mut lex = Lexicon::new();
    for c in parse_cohorts(text)? {
        lex.insert(c.surface(), c.readings().iter().cloned());
    }
    Ok(lex)
}

#[derive(Clone, Debug)]
pub enum Pattern {
    Suffix(String),
    Prefix(String),
    /// Matched against the whole surface.
    Regex(Regex),
}

impl Pattern {
    pub fn parse(text: &str) -> Result<Pattern, String> {
        let (kind, arg) = text.split_once(':').ok_or_else(|| format!("pattern {text:?} lacks a kind"))?;
        if arg.is_empty() {
            return Err(format!("pattern {text:?} is empty"));
        }
        match kind {
            "suffix" => Ok(Pattern::Suffix(arg.to_lowercase())),
            "prefix" => Ok(Pattern::Prefix(arg.to_lowercase())),
            "regexlike" => Regex::new(&format!("^(?:{arg})$"))
                .map(Pattern::Regex)
                .map_err(|e| format!("bad expression {arg:?}: {e}")),
            _ => Err(format!("unknown pattern kind {kind:?}")),
        }
    }

    /// Suffix and prefix tests ignore case and need at least one character
    /// left over.
    pub fn matches(&self, surface: &str) -> bool {
        let lower = surface.to_lowercase();
        match self {
            Pattern::Suffix(s) => lower.len() > s.len() && lower.ends_with(s.as_str()),
            Pattern::Prefix(p) => lower.len() > p.len() && lower.starts_with(p.as_str()),
            Pattern::Regex(re) => re.is_match(surface),
        }
    }

    fn spelling(&self) -> String {
        match self {
            Pattern::Suffix(s) => format!("suffix:{s}"),
            Pattern::Prefix(p) => format!("prefix:{p}"),
            Pattern::Regex(re) => {
                let s = re.as_str();
                format!("regexlike:{}", &s[4..s.len() - 2])
            }
        }
    }
}

impl PartialEq for Pattern {
    fn eq(&self, other: &Pattern) -> bool {
        self.spelling() == other.spelling()
    }
}

impl Eq for Pattern {}

/// A reading whose base form is computed from the surface. `"$"` is the
/// lowercased surface; `"$-ly"` also strips a trailing `ly`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReadingTemplate {
    strip: Option<String>,
    morph: Vec<Symbol>,
}

impl ReadingTemplate {
    pub fn parse(text: &str) -> Result<ReadingTemplate, String> {
        let text = text.trim();
        let rest = text.strip_prefix("\"$").ok_or_else(|| format!("template {text:?} must start with \"$"))?;
        let close = rest.find('"').ok_or_else(|| format!("template {text:?} lacks a closing quote"))?;
        let strip = match &rest[..close] {
            "" => None,
            s => Some(s.strip_prefix('-').ok_or_else(|| format!("bad base form spec {s:?}"))?.to_lowercase()),
        };
        let mut morph = Vec::new();
        for tok in rest[close + 1..].split_whitespace() {
            let sym = Symbol::parse(tok).map_err(|e| e.to_string())?;
            if sym.kind() != SymbolKind::MorphTag {
                return Err(format!("{tok} is not a morphological tag"));
            }
            morph.push(sym);
        }
        if morph.is_empty() {
            return Err(format!("template {text:?} has no tags"));
        }
        Ok(ReadingTemplate { strip, morph })
    }

    pub fn instantiate(&self, surface: &str) -> Reading {
        let mut base = surface.to_lowercase();
        if let Some(s) = &self.strip {
            if base.len() > s.len() && base.ends_with(s.as_str()) {
                base.truncate(base.len() - s.len());
            }
        }
        Reading::new(baseform_symbol(&base), self.morph.clone(), Vec::new())
            .expect("template tags were validated at parse time")
    }
}

fn baseform_symbol(text: &str) -> Symbol {
    let clean: String = text.chars().map(|c| if c == '"' || c.is_control() { '\'' } else { c }).collect();
    Symbol::baseform(&clean).expect("non-empty base form")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeuristicRule {
    pub priority: i64,
    pub pattern: Pattern,
    pub readings: Vec<ReadingTemplate>,
}

/// Word-shape rules tried in ascending priority order; the first match wins.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Heuristics {
    rules: Vec<HeuristicRule>,
}

impl Heuristics {
    pub fn new(rules: Vec<HeuristicRule>) -> Result<Heuristics, MorphError> {
        let mut h = Heuristics::default();
        for (i, r) in rules.into_iter().enumerate() {
            h.push(r, i + 1)?;
        }
        Ok(h)
    }

    fn push(&mut self, rule: HeuristicRule, line: usize) -> Result<(), MorphError> {
        match self.rules.binary_search_by_key(&rule.priority, |r| r.priority) {
            Ok(_) => Err(MorphError::DuplicatePriority { line, priority: rule.priority }),
            Err(at) => {
                self.rules.insert(at, rule);
                Ok(())
            }
        }
    }

    /// One rule per line: `priority TAB pattern TAB template [| template]...`.
    pub fn parse(text: &str) -> Result<Heuristics, MorphError> {
        let mut h = Heuristics::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let err = |msg: String| MorphError::Heuristic { line, msg };
            let fields: Vec<&str> = raw.split('\t').collect();
            let [prio, pat, templates] = fields[..] else {
                return Err(err("expected PRIORITY<TAB>PATTERN<TAB>TEMPLATES".into()));
            };
            let priority: i64 = prio.trim().parse().map_err(|_| err(format!("bad priority {prio:?}")))?;
            let pattern = Pattern::parse(pat.trim()).map_err(err)?;
            let readings = templates
                .split('|')
                .map(ReadingTemplate::parse)
                .collect::<Result<Vec<_>, _>>()
                .map_err(err)?;
            h.push(HeuristicRule { priority, pattern, readings }, line)?;
        }
        Ok(h)
    }

    pub fn rules(&self) -> &[HeuristicRule] {
        &self.rules
    }

    pub fn first_match(&self, surface: &str) -> Option<&HeuristicRule> {
        self.rules.iter().find(|r| r.pattern.matches(surface))
    }
}

/// Reading given to a punctuation marker token.
pub fn punctuation_reading(marker: &str) -> Option<Reading> {
    if !SURFACE_MARKERS.contains(&marker) {
        return None;
    }
    let tag = Symbol::parse(marker).ok()?;
    Reading::new(Symbol::baseform(marker).ok()?, vec![tag], Vec::new()).ok()
}

pub fn default_reading(surface: &str) -> Reading {
    let tags = ["N", "NOM", "SG"].map(|t| Symbol::parse(t).expect("static tag")).to_vec();
    Reading::new(baseform_symbol(surface), tags, Vec::new()).expect("static reading")
}

/// Analyses one token. The cohort's trailing boundary is the plain `@`.
///
/// # Panics
///
/// Panics if `token` is empty.
pub fn analyze(token: &str, lexicon: &Lexicon, heuristics: &Heuristics) -> Cohort {
    assert!(!token.is_empty(), "analyze needs a non-empty token");
    let readings = if let Some(r) = lexicon.lookup(token) {
        r.to_vec()
    } else if let Some(r) = punctuation_reading(token) {
        vec![r]
    } else if let Some(rule) = heuristics.first_match(token) {
        let mut v: Vec<Reading> = Vec::new();
        for t in &rule.readings {
            let r = t.instantiate(token);
            if !v.contains(&r) {
                v.push(r);
            }
        }
        v
    } else {
        vec![default_reading(token)]
    };
    Cohort::new(token, readings, BoundarySet::word()).expect("non-empty cohort")
}

#[cfg(test)]
mod tests {
    use super::*;

    const THAT: &str = "\"<that>\"\n\t\"that\" <**CLB> CS\n\t\"that\" DET CENTRAL DEM SG\n\t\"that\" ADV\n\t\"that\" PRON DEM SG\n\t\"that\" <Rel> PRON SG/PL\n";

    #[test]
    fn that_has_five_readings() {
        let lex = load_lexicon(THAT).unwrap();
        assert_eq!(lex.len(), 1);
        let c = analyze("that", &lex, &Heuristics::default());
        assert_eq!(c.readings().len(), 5);
        assert_eq!(c.readings(), lex.lookup("that").unwrap());
        // sentence-initial capital falls back to the lowercased entry
        assert_eq!(analyze("That", &lex, &Heuristics::default()).readings().len(), 5);
    }

    #[test]
    fn empty_lexicon() {
        assert!(load_lexicon("").unwrap().is_empty());
    }

    #[test]
    fn duplicate_blocks_merge() {
        let text = "\"<run>\"\n\t\"run\" V INF\n\"<run>\"\n\t\"run\" N NOM SG\n\t\"run\" V INF\n";
        let lex = load_lexicon(text).unwrap();
        let got: Vec<String> = lex.lookup("run").unwrap().iter().map(|r| r.to_string()).collect();
        assert_eq!(got, ["\"run\" V INF", "\"run\" N NOM SG"]);
    }

    #[test]
    fn default_and_heuristic_readings() {
        let lex = Lexicon::new();
        let none = Heuristics::default();
        let c = analyze("zzqx", &lex, &none);
        assert_eq!(c.readings().len(), 1);
        assert_eq!(c.readings()[0].to_string(), "\"zzqx\" N NOM SG");

        let h = Heuristics::parse("10\tsuffix:ly\t\"$\" ADV\n20\tsuffix:y\t\"$\" A ABS\n").unwrap();
        let c = analyze("grobly", &lex, &h);
        assert_eq!(c.readings().len(), 1);
        assert_eq!(c.readings()[0].to_string(), "\"grobly\" ADV");
        assert_eq!(analyze("groby", &lex, &h).readings()[0].to_string(), "\"groby\" A ABS");
    }

    #[test]
    fn priority_not_file_order() {
        let h = Heuristics::parse("20\tsuffix:ly\t\"$\" ADV\n5\tregexlike:[a-z]+\t\"$-ly\" A ABS | \"$\" N NOM SG\n").unwrap();
        let c = analyze("grobly", &Lexicon::new(), &h);
        let got: Vec<String> = c.readings().iter().map(|r| r.to_string()).collect();
        assert_eq!(got, ["\"grob\" A ABS", "\"grobly\" N NOM SG"]);
    }

    #[test]
    fn heuristic_errors() {
        assert!(matches!(
            Heuristics::parse("1\tsuffix:a\t\"$\" N\n1\tsuffix:b\t\"$\" N\n"),
            Err(MorphError::DuplicatePriority { line: 2, priority: 1 })
        ));
        assert!(Heuristics::parse("x\tsuffix:a\t\"$\" N\n").is_err());
        assert!(Heuristics::parse("1\tinfix:a\t\"$\" N\n").is_err());
        assert!(Heuristics::parse("1\tsuffix:a\t\"$\" @SUBJ\n").is_err());
        assert!(Heuristics::parse("1\tregexlike:(\t\"$\" N\n").is_err());
    }

    #[test]
    fn punctuation_markers() {
        let c = analyze("@comma", &Lexicon::new(), &Heuristics::default());
        assert!(c.readings()[0].is_punctuation());
        assert_eq!(c.readings()[0].to_string(), "\"@comma\" @comma");
    }
}
