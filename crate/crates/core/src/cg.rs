//! Constraint Grammar disambiguation.
//!
//! Rules remove readings carrying a target tag when a context pattern holds.
//! The engine makes repeated passes over a sentence until nothing changes,
//! and it never removes the last reading of a cohort.
//!
//! ```text
//! # verbs do not follow determiners
//! STRICT REMOVE V IF (-1C DET) ;
//! HEUR REMOVE ADV IF (1 A, 2 N) (*L NOT V) ;
//! ```

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::tag::{Cohort, Reading, Sentence, Symbol, SymbolKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CgError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: a strict rule for target {target} already exists on line {first}")]
    DuplicateTarget { line: usize, first: usize, target: Symbol },
    #[error("line {line}: unknown tag {tag}")]
    UnknownTag { line: usize, tag: Symbol },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tier {
    Strict,
    Heuristic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Position {
    Offset(i32),
    /// Every cohort to the left, nearest first.
    ScanLeft,
    ScanRight,
}

/// One test inside a context pattern.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ContextTest {
    pub position: Position,
    /// Only unambiguous cohorts can satisfy the positive test.
    pub careful: bool,
    /// Negates the whole positive test.
    pub negative: bool,
    /// All of these must occur in one reading.
    pub tags: Vec<Symbol>,
}

/// Conjunction of tests.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ContextPattern {
    pub tests: Vec<ContextTest>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConstraintRule {
    pub tier: Tier,
    pub target: Symbol,
    /// The rule fires when any pattern holds.
    pub contexts: Vec<ContextPattern>,
    pub line: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Grammar {
    rules: Vec<ConstraintRule>,
}

/// Which rule tiers a run may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TierSelection {
    Strict,
    /// Strict rules to fixpoint, then strict and heuristic rules together.
    StrictThenHeuristic,
}

fn reading_matches(r: &Reading, tags: &[Symbol]) -> bool {
    tags.iter().all(|t| r.baseform() == t || r.morph_tags().contains(t) || r.syn_tags().contains(t))
}

fn cohort_matches(c: &Cohort, test: &ContextTest) -> bool {
    (!test.careful || c.readings().len() == 1) && c.readings().iter().any(|r| reading_matches(r, &test.tags))
}

impl ContextTest {
    /// Evaluates the test for the cohort at `at`. Offsets that fall outside
    /// the sentence make positive tests fail and negative tests hold.
    pub fn holds(&self, cohorts: &[Cohort], at: usize) -> bool {
        let positive = match self.position {
            Position::Offset(d) => {
                let p = at as i64 + d as i64;
                p >= 0 && (p as usize) < cohorts.len() && cohort_matches(&cohorts[p as usize], self)
            }
            Position::ScanLeft => cohorts[..at].iter().rev().any(|c| cohort_matches(c, self)),
            Position::ScanRight => cohorts[at + 1..].iter().any(|c| cohort_matches(c, self)),
        };
        positive != self.negative
    }
}

impl ContextPattern {
    pub fn holds(&self, cohorts: &[Cohort], at: usize) -> bool {
        self.tests.iter().all(|t| t.holds(cohorts, at))
    }
}

impl ConstraintRule {
    /// Removes target readings from cohort `at` when a context holds.
    /// Does nothing when every reading carries the target. Returns the
    /// number of readings removed.
    pub fn apply_at(&self, cohorts: &mut [Cohort], at: usize) -> usize {
        let c = &cohorts[at];
        if c.readings().len() < 2 {
            return 0;
        }
        let hits = c.readings().iter().filter(|r| r.morph_tags().contains(&self.target)).count();
        if hits == 0 || hits == c.readings().len() {
            return 0;
        }
        if !self.contexts.iter().any(|p| p.holds(cohorts, at)) {
            return 0;
        }
        let target = &self.target;
        cohorts[at].retain_readings(|r| !r.morph_tags().contains(target));
        hits
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Position::Offset(d) => write!(f, "{d}"),
            Position::ScanLeft => f.write_str("*L"),
            Position::ScanRight => f.write_str("*R"),
        }
    }
}

impl fmt::Display for ConstraintRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tier = match self.tier {
            Tier::Strict => "STRICT",
            Tier::Heuristic => "HEUR",
        };
        write!(f, "{tier} REMOVE {} IF", self.target)?;
        for p in &self.contexts {
            f.write_str(" (")?;
            for (i, t) in p.tests.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}{}", t.position, if t.careful { "C" } else { "" })?;
                if t.negative {
                    f.write_str(" NOT")?;
                }
                for tag in &t.tags {
                    write!(f, " {tag}")?;
                }
            }
            f.write_str(")")?;
        }
        f.write_str(" ;")
    }
}

/// Lexer token with its line.
#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Open,
    Close,
    Comma,
    Semi,
}

fn lex(text: &str) -> Vec<(usize, Tok)> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        let mut word = String::new();
        let flush = |word: &mut String, out: &mut Vec<(usize, Tok)>| {
            if !word.is_empty() {
                out.push((line, Tok::Word(std::mem::take(word))));
            }
        };
        let mut in_quote = false;
        for ch in body.chars() {
            if in_quote {
                word.push(ch);
                in_quote = ch != '"';
                continue;
            }
            match ch {
                '"' => {
                    word.push(ch);
                    in_quote = true;
                }
                '(' | ')' | ',' | ';' => {
                    flush(&mut word, &mut out);
                    out.push((
                        line,
                        match ch {
                            '(' => Tok::Open,
                            ')' => Tok::Close,
                            ',' => Tok::Comma,
                            _ => Tok::Semi,
                        },
                    ));
                }
                c if c.is_whitespace() => flush(&mut word, &mut out),
                c => word.push(c),
            }
        }
        flush(&mut word, &mut out);
    }
    out
}

fn parse_position(word: &str) -> Option<(Position, bool)> {
    let (body, careful) = match word.strip_suffix('C') {
        Some(b) => (b, true),
        None => (word, false),
    };
    let pos = match body {
        "*L" => Position::ScanLeft,
        "*R" => Position::ScanRight,
        n => Position::Offset(n.parse().ok()?),
    };
    Some((pos, careful))
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Parser {
    fn line(&self) -> usize {
        self.toks.get(self.at).or(self.toks.last()).map_or(1, |t| t.0)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, CgError> {
        Err(CgError::Syntax { line: self.line(), msg: msg.into() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|t| t.1.clone());
        self.at += 1;
        t
    }

    fn word(&mut self, what: &str) -> Result<String, CgError> {
        match self.next() {
            Some(Tok::Word(w)) => Ok(w),
            _ => {
                self.at -= 1;
                self.err(format!("expected {what}"))
            }
        }
    }

    fn tag(&mut self) -> Result<Symbol, CgError> {
        let w = self.word("a tag")?;
        let sym = Symbol::parse(&w).map_err(|e| CgError::Syntax { line: self.line(), msg: e.to_string() })?;
        if sym.kind() == SymbolKind::Boundary {
            return self.err(format!("{w} is a boundary, not a tag"));
        }
        Ok(sym)
    }

    fn rule(&mut self) -> Result<ConstraintRule, CgError> {
        let line = self.line();
        let tier = match self.word("STRICT or HEUR")?.as_str() {
            "STRICT" => Tier::Strict,
            "HEUR" => Tier::Heuristic,
            other => return self.err(format!("expected STRICT or HEUR, found {other:?}")),
        };
        if self.word("REMOVE")? != "REMOVE" {
            return self.err("expected REMOVE");
        }
        let target = self.tag()?;
        if target.kind() != SymbolKind::MorphTag {
            return self.err(format!("target {target} is not a morphological tag"));
        }
        if self.word("IF")? != "IF" {
            return self.err("expected IF");
        }
        let mut contexts = Vec::new();
        loop {
            match self.next() {
                Some(Tok::Open) => contexts.push(self.pattern()?),
                Some(Tok::Semi) => break,
                _ => {
                    self.at -= 1;
                    return self.err("expected ( or ;");
                }
            }
        }
        if contexts.is_empty() {
            return Err(CgError::Syntax { line, msg: "rule has no context".into() });
        }
        Ok(ConstraintRule { tier, target, contexts, line })
    }

    fn pattern(&mut self) -> Result<ContextPattern, CgError> {
        let mut tests = Vec::new();
        loop {
            let pw = self.word("a position")?;
            let Some((position, careful)) = parse_position(&pw) else {
                return self.err(format!("bad position {pw:?}"));
            };
            let mut negative = false;
            if self.peek() == Some(&Tok::Word("NOT".into())) {
                self.at += 1;
                negative = true;
            }
            let mut tags = Vec::new();
            while let Some(Tok::Word(_)) = self.peek() {
                tags.push(self.tag()?);
            }
            if tags.is_empty() {
                return self.err("test has no tags");
            }
            tests.push(ContextTest { position, careful, negative, tags });
            match self.next() {
                Some(Tok::Comma) => continue,
                Some(Tok::Close) => break,
                _ => {
                    self.at -= 1;
                    return self.err("expected , or )");
                }
            }
        }
        Ok(ContextPattern { tests })
    }
}

impl Grammar {
    /// Builds a grammar, rejecting a second strict rule for the same target.
    pub fn new(rules: Vec<ConstraintRule>) -> Result<Grammar, CgError> {
        let mut seen: Vec<(&Symbol, usize)> = Vec::new();
        for r in rules.iter().filter(|r| r.tier == Tier::Strict) {
            if let Some(&(_, first)) = seen.iter().find(|(t, _)| *t == &r.target) {
                return Err(CgError::DuplicateTarget { line: r.line, first, target: r.target.clone() });
            }
            seen.push((&r.target, r.line));
        }
        Ok(Grammar { rules })
    }

    pub fn parse(text: &str) -> Result<Grammar, CgError> {
        let mut p = Parser { toks: lex(text), at: 0 };
        let mut rules = Vec::new();
        while p.peek().is_some() {
            rules.push(p.rule()?);
        }
        Grammar::new(rules)
    }

    /// One rule per line, in grammar order.
    pub fn emit(&self) -> String {
        self.rules.iter().map(|r| format!("{r}\n")).collect()
    }

    pub fn rules(&self) -> &[ConstraintRule] {
        &self.rules
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Rejects morphological tags outside `inventory`. Base forms and
    /// punctuation markers in contexts are not checked.
    pub fn check_tags(&self, inventory: &BTreeSet<Symbol>) -> Result<(), CgError> {
        for r in &self.rules {
            let tags = std::iter::once(&r.target)
                .chain(r.contexts.iter().flat_map(|p| p.tests.iter().flat_map(|t| t.tags.iter())));
            for t in tags {
                if t.kind() == SymbolKind::MorphTag && !inventory.contains(t) {
                    return Err(CgError::UnknownTag { line: r.line, tag: t.clone() });
                }
            }
        }
        Ok(())
    }
}

pub fn load_cg_grammar(text: &str) -> Result<Grammar, CgError> {
    Grammar::parse(text)
}

/// Reading totals observed while a grammar runs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Trace {
    /// Total readings before the first pass, then after each pass.
    pub totals: Vec<usize>,
}

impl Trace {
    pub fn passes(&self) -> usize {
        self.totals.len().saturating_sub(1)
    }
}

fn run_passes(cohorts: &mut [Cohort], rules: &[&ConstraintRule], trace: &mut Trace) {
    loop {
        if !cohorts.iter().any(Cohort::is_ambiguous) {
            return;
        }
        let mut removed = 0;
        for rule in rules {
            for at in 0..cohorts.len() {
                removed += rule.apply_at(cohorts, at);
            }
        }
        trace.totals.push(cohorts.iter().map(|c| c.readings().len()).sum());
        if removed == 0 {
            return;
        }
    }
}

/// Runs the grammar to fixpoint and reports per-pass reading totals.
pub fn apply_grammar_traced(sentence: &Sentence, grammar: &Grammar, tiers: TierSelection) -> (Sentence, Trace) {
    let mut out = sentence.clone();
    let mut trace = Trace { totals: vec![sentence.total_readings()] };
    let strict: Vec<&ConstraintRule> = grammar.rules.iter().filter(|r| r.tier == Tier::Strict).collect();
    run_passes(out.cohorts_mut(), &strict, &mut trace);
    if tiers == TierSelection::StrictThenHeuristic && grammar.rules.iter().any(|r| r.tier == Tier::Heuristic) {
        let all: Vec<&ConstraintRule> = grammar.rules.iter().collect();
        run_passes(out.cohorts_mut(), &all, &mut trace);
    }
    (out, trace)
}

pub fn apply_grammar(sentence: &Sentence, grammar: &Grammar, tiers: TierSelection) -> Sentence {
    apply_grammar_traced(sentence, grammar, tiers).0
}
