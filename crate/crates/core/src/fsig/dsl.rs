//! The rule language.
//!
//! ```text
//! define Coord = @CC | @CS ;
//! rule Prep: PREP => _ . @ Coord, _ .. NounPhrase ;
//! rank PreferNoun: V => @>N . _ ;
//! ```
//!
//! Juxtaposition concatenates; `|` is union, `&` intersection, `~`
//! complement, `*` and `+` repetition. `?` is any symbol and `0` the empty
//! string. `.` spans the features of one reading and `..` a finite clause.
//! Capitalised words containing a lowercase letter name definitions; any
//! other word is a symbol.

use std::collections::BTreeSet;

use super::FsigError;
use crate::fsa::{Definitions, Regex};
use crate::tag::{Boundary, Symbol};

/// `X => LC1 _ RC1, ...`: every occurrence of X must sit in one of the
/// listed contexts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImplicationRule {
    pub name: String,
    pub x: Regex,
    pub contexts: Vec<(Regex, Regex)>,
}

impl ImplicationRule {
    pub fn new(name: impl Into<String>, x: Regex, contexts: Vec<(Regex, Regex)>) -> ImplicationRule {
        ImplicationRule { name: name.into(), x, contexts }
    }

    pub fn regexes(&self) -> impl Iterator<Item = &Regex> {
        std::iter::once(&self.x).chain(self.contexts.iter().flat_map(|(l, r)| [l, r]))
    }
}

#[derive(Clone, Debug)]
pub struct FsigGrammar {
    pub definitions: Definitions,
    pub rules: Vec<ImplicationRule>,
    pub rankers: Vec<ImplicationRule>,
}

impl Default for FsigGrammar {
    fn default() -> Self {
        FsigGrammar { definitions: builtin_definitions(), rules: Vec::new(), rankers: Vec::new() }
    }
}

impl FsigGrammar {
    /// Every unresolvable or cyclic reference, one error per rule.
    pub fn check(&self) -> Vec<FsigError> {
        let mut errors = Vec::new();
        for r in self.rules.iter().chain(&self.rankers) {
            let mut syms = BTreeSet::new();
            for re in r.regexes() {
                if let Err(e) = self.definitions.collect(re, &mut syms) {
                    errors.push(FsigError::Rule { name: r.name.clone(), source: e });
                    break;
                }
            }
        }
        errors
    }
}

pub const ONE_READING: &str = ".";
pub const CLAUSE: &str = "..";

fn boundary(b: Boundary) -> Regex {
    Regex::sym(Symbol::boundary(b))
}

/// `.` and `..` plus the helpers they are built from.
pub fn builtin_definitions() -> Definitions {
    let any_boundary = Regex::union(Boundary::ALL.map(boundary));
    let contains = |r: Regex| Regex::concat([Regex::any_string(), r, Regex::any_string()]);
    let flat = Regex::complement(contains(Regex::union(
        [Boundary::Sentence, Boundary::Clause, Boundary::EmbedOpen, Boundary::EmbedClose].map(boundary),
    )));
    let embedded = |inner: Regex| {
        Regex::concat([
            Regex::reference("%flat"),
            Regex::star(Regex::concat([
                boundary(Boundary::EmbedOpen),
                inner,
                boundary(Boundary::EmbedClose),
                Regex::reference("%flat"),
            ])),
        ])
    };
    let mut d = Definitions::new();
    d.define(ONE_READING, Regex::complement(contains(any_boundary)));
    d.define("%flat", flat);
    d.define("%emb1", embedded(Regex::reference("%flat")));
    d.define(CLAUSE, embedded(Regex::reference("%emb1")));
    d
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Word(String),
    Dot,
    DotDot,
    Open,
    Close,
    Bar,
    Amp,
    Tilde,
    Semi,
    Comma,
    Eq,
    Colon,
    Under,
    Arrow,
    Star,
    Plus,
}

fn push_word(word: &str, line: usize, out: &mut Vec<(usize, Tok)>) {
    if word.is_empty() {
        return;
    }
    if word.starts_with('"') {
        out.push((line, Tok::Word(word.to_string())));
        return;
    }
    let mut body = word;
    let mut post = Vec::new();
    while let Some(last) = body.chars().last() {
        match last {
            '*' => post.push(Tok::Star),
            '+' => post.push(Tok::Plus),
            _ => break,
        }
        body = &body[..body.len() - 1];
    }
    post.reverse();
    let mut pre = Vec::new();
    let mut trail = Vec::new();
    if body == "." {
        pre.push(Tok::Dot);
        body = "";
    } else if body == ".." {
        pre.push(Tok::DotDot);
        body = "";
    } else {
        if let Some(rest) = body.strip_prefix("..") {
            pre.push(Tok::DotDot);
            body = rest;
        } else if let Some(rest) = body.strip_prefix('.') {
            pre.push(Tok::Dot);
            body = rest;
        }
        if let Some(rest) = body.strip_suffix("..") {
            trail.push(Tok::DotDot);
            body = rest;
        } else if let Some(rest) = body.strip_suffix('.') {
            trail.push(Tok::Dot);
            body = rest;
        }
    }
    out.extend(pre.into_iter().map(|t| (line, t)));
    if !body.is_empty() {
        out.push((line, Tok::Word(body.to_string())));
    }
    out.extend(trail.into_iter().chain(post).map(|t| (line, t)));
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, FsigError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let chars: Vec<char> = raw.chars().collect();
        let mut word = String::new();
        let mut j = 0;
        while j < chars.len() {
            let ch = chars[j];
            if ch == '"' && word.is_empty() {
                let end = chars[j + 1..].iter().position(|&c| c == '"').ok_or(FsigError::Dsl {
                    line,
                    msg: "unterminated quoted base form".into(),
                })?;
                word = chars[j..j + end + 2].iter().collect();
                j += end + 2;
                continue;
            }
            let special = match ch {
                '#' => break,
                '(' => Some(Tok::Open),
                ')' => Some(Tok::Close),
                '|' => Some(Tok::Bar),
                '&' => Some(Tok::Amp),
                '~' => Some(Tok::Tilde),
                ';' => Some(Tok::Semi),
                ',' => Some(Tok::Comma),
                ':' => Some(Tok::Colon),
                '_' => Some(Tok::Under),
                '=' if chars.get(j + 1) == Some(&'>') => {
                    j += 1;
                    Some(Tok::Arrow)
                }
                '=' => Some(Tok::Eq),
                c if c.is_whitespace() => None,
                c => {
                    word.push(c);
                    j += 1;
                    continue;
                }
            };
            push_word(&std::mem::take(&mut word), line, &mut out);
            if let Some(t) = special {
                out.push((line, t));
            }
            j += 1;
        }
        push_word(&word, line, &mut out);
    }
    Ok(out)
}

/// True for spellings that name a definition rather than a symbol.
pub fn is_reference_name(word: &str) -> bool {
    word.chars().next().is_some_and(char::is_uppercase) && word.chars().any(char::is_lowercase)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Parser {
    fn line(&self) -> usize {
        self.toks.get(self.at).or(self.toks.last()).map_or(1, |t| t.0)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, FsigError> {
        Err(FsigError::Dsl { line: self.line(), msg: msg.into() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), FsigError> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn name(&mut self) -> Result<String, FsigError> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.at += 1;
                Ok(w)
            }
            _ => self.err("expected a name"),
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Some(Tok::Word(_) | Tok::Dot | Tok::DotDot | Tok::Open | Tok::Tilde))
    }

    fn regex(&mut self) -> Result<Regex, FsigError> {
        let mut alts = vec![self.inter()?];
        while self.eat(&Tok::Bar) {
            alts.push(self.inter()?);
        }
        Ok(Regex::union(alts))
    }

    fn inter(&mut self) -> Result<Regex, FsigError> {
        let mut parts = vec![self.concat()?];
        while self.eat(&Tok::Amp) {
            parts.push(self.concat()?);
        }
        Ok(Regex::intersection(parts))
    }

    fn concat(&mut self) -> Result<Regex, FsigError> {
        if !self.starts_atom() {
            return self.err("expected an expression");
        }
        let mut parts = Vec::new();
        while self.starts_atom() {
            parts.push(self.unary()?);
        }
        Ok(Regex::concat(parts))
    }

    /// A possibly empty expression, as allowed on either side of `_`.
    fn optional(&mut self) -> Result<Regex, FsigError> {
        if self.starts_atom() {
            self.regex()
        } else {
            Ok(Regex::Epsilon)
        }
    }

    fn unary(&mut self) -> Result<Regex, FsigError> {
        if self.eat(&Tok::Tilde) {
            return Ok(Regex::complement(self.unary()?));
        }
        let mut r = self.atom()?;
        loop {
            if self.eat(&Tok::Star) {
                r = Regex::star(r);
            } else if self.eat(&Tok::Plus) {
                r = Regex::concat([r.clone(), Regex::star(r)]);
            } else {
                return Ok(r);
            }
        }
    }

    fn atom(&mut self) -> Result<Regex, FsigError> {
        let line = self.line();
        let (_, tok) = self.toks[self.at].clone();
        self.at += 1;
        Ok(match tok {
            Tok::Open => {
                if self.eat(&Tok::Close) {
                    return Ok(Regex::Epsilon);
                }
                let r = self.regex()?;
                self.expect(Tok::Close, ")")?;
                r
            }
            Tok::Dot => Regex::reference(ONE_READING),
            Tok::DotDot => Regex::reference(CLAUSE),
            Tok::Word(w) => match w.as_str() {
                "?" => Regex::Any,
                "0" => Regex::Epsilon,
                _ if is_reference_name(&w) => Regex::reference(w),
                _ => Regex::sym(
                    Symbol::parse(&w).map_err(|e| FsigError::Dsl { line, msg: format!("{w}: {e}") })?,
                ),
            },
            _ => unreachable!("starts_atom checked"),
        })
    }

    fn implication(&mut self, name: String) -> Result<ImplicationRule, FsigError> {
        self.expect(Tok::Colon, ":")?;
        let x = self.regex()?;
        self.expect(Tok::Arrow, "=>")?;
        let mut contexts = Vec::new();
        loop {
            let lc = self.optional()?;
            self.expect(Tok::Under, "_")?;
            let rc = self.optional()?;
            contexts.push((lc, rc));
            if self.eat(&Tok::Semi) {
                break;
            }
            self.expect(Tok::Comma, ", or ;")?;
        }
        Ok(ImplicationRule { name, x, contexts })
    }
}

/// Parses grammar source. Reference errors are reported by
/// [`FsigGrammar::check`] and at compile time.
pub fn parse_fsig_grammar(text: &str) -> Result<FsigGrammar, FsigError> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    let mut g = FsigGrammar::default();
    let mut names = BTreeSet::new();
    while let Some(tok) = p.peek().cloned() {
        let line = p.line();
        let Tok::Word(kw) = tok else {
            return p.err("expected define, rule or rank");
        };
        p.at += 1;
        match kw.as_str() {
            "define" => {
                let name = p.name()?;
                if !is_reference_name(&name) {
                    return Err(FsigError::Dsl {
                        line,
                        msg: format!("definition name {name:?} must be capitalised and contain a lowercase letter"),
                    });
                }
                p.expect(Tok::Eq, "=")?;
                let body = p.regex()?;
                p.expect(Tok::Semi, ";")?;
                if g.definitions.define(name.clone(), body).is_some() {
                    return Err(FsigError::Dsl { line, msg: format!("{name} is defined twice") });
                }
            }
            "rule" | "rank" => {
                let name = p.name()?;
                if !names.insert(name.clone()) {
                    return Err(FsigError::Dsl { line, msg: format!("rule name {name} is used twice") });
                }
                let rule = p.implication(name)?;
                if kw == "rule" {
                    g.rules.push(rule);
                } else {
                    g.rankers.push(rule);
                }
            }
            other => return Err(FsigError::Dsl { line, msg: format!("expected define, rule or rank, found {other:?}") }),
        }
    }
    Ok(g)
}
