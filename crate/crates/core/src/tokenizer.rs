//! Splits raw text into surface tokens.
//!
//! Punctuation at word edges becomes a marker token (`,` → `@comma`),
//! word-internal punctuation stays put (`1.26`, `self-tapping`), configured
//! multiword syntagms are fused longest-first, and lines of the form
//! `<...>` pass through whole as document markers.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::tag::SURFACE_MARKERS;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TokenizerConfigError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TokenizerConfig {
    syntagms: Vec<Vec<String>>,
    punctuation: BTreeMap<char, String>,
    abbreviations: BTreeSet<String>,
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        let punctuation = [
            (',', "@comma"),
            ('.', "@fullstop"),
            (':', "@colon"),
            (';', "@semicolon"),
            ('?', "@question"),
            ('!', "@exclamation"),
            ('(', "@lparen"),
            (')', "@rparen"),
            ('"', "@quote"),
        ]
        .into_iter()
        .map(|(c, m)| (c, m.to_string()))
        .collect();
        TokenizerConfig { syntagms: Vec::new(), punctuation, abbreviations: BTreeSet::new() }
    }
}

impl TokenizerConfig {
    pub fn new(
        syntagms: impl IntoIterator<Item = Vec<String>>,
        punctuation: BTreeMap<char, String>,
    ) -> TokenizerConfig {
        let mut cfg = TokenizerConfig { syntagms: Vec::new(), punctuation, abbreviations: BTreeSet::new() };
        for s in syntagms {
            cfg.add_syntagm(s);
        }
        cfg
    }

    /// Parses the plain-text config:
    ///
    /// ```text
    /// [syntagms]
    /// because of
    /// [punctuation]
    /// ,	@comma
    /// [abbreviations]
    /// e.g.
    /// ```
    ///
    /// A file without a `[punctuation]` section keeps the default map.
    pub fn parse(text: &str) -> Result<TokenizerConfig, TokenizerConfigError> {
        let mut cfg = TokenizerConfig::default();
        let mut custom_punct: Option<BTreeMap<char, String>> = None;
        let mut section = "";
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if trimmed.starts_with('[') && trimmed.ends_with(']') {
                section = match trimmed {
                    "[syntagms]" => "syntagms",
                    "[punctuation]" => "punctuation",
                    "[abbreviations]" => "abbreviations",
                    other => {
                        return Err(TokenizerConfigError::Syntax { line, msg: format!("unknown section {other}") })
                    }
                };
                continue;
            }
            match section {
                "syntagms" => {
                    let words: Vec<String> = trimmed.split_whitespace().map(str::to_string).collect();
                    if words.len() < 2 {
                        return Err(TokenizerConfigError::Syntax {
                            line,
                            msg: "a syntagm needs at least two words".into(),
                        });
                    }
                    cfg.add_syntagm(words);
                }
                "punctuation" => {
                    let (ch, marker) = raw.split_once('\t').ok_or_else(|| TokenizerConfigError::Syntax {
                        line,
                        msg: "expected CHAR<TAB>MARKER".into(),
                    })?;
                    let mut chars = ch.trim().chars();
                    let (Some(c), None) = (chars.next(), chars.next()) else {
                        return Err(TokenizerConfigError::Syntax { line, msg: format!("{ch:?} is not one character") });
                    };
                    let marker = marker.trim();
                    if !SURFACE_MARKERS.contains(&marker) {
                        return Err(TokenizerConfigError::Syntax { line, msg: format!("bad marker {marker:?}") });
                    }
                    custom_punct.get_or_insert_with(BTreeMap::new).insert(c, marker.to_string());
                }
                "abbreviations" => {
                    cfg.abbreviations.insert(trimmed.to_lowercase());
                }
                _ => return Err(TokenizerConfigError::Syntax { line, msg: "entry outside a section".into() }),
            }
        }
        if let Some(p) = custom_punct {
            cfg.punctuation = p;
        }
        Ok(cfg)
    }

    fn add_syntagm(&mut self, words: Vec<String>) {
        let words: Vec<String> = words.into_iter().map(|w| w.to_lowercase()).collect();
        if words.is_empty() || self.syntagms.contains(&words) {
            return;
        }
        self.syntagms.push(words);
        // longest first; ties keep insertion order
        self.syntagms.sort_by_key(|s| std::cmp::Reverse(s.len()));
    }

    /// Words ending in a period that keep it (`e.g.`, `fig.`).
    pub fn add_abbreviations<I: IntoIterator<Item = S>, S: AsRef<str>>(&mut self, words: I) {
        self.abbreviations.extend(words.into_iter().map(|w| w.as_ref().to_lowercase()));
    }

    pub fn syntagms(&self) -> &[Vec<String>] {
        &self.syntagms
    }

    pub fn marker_for(&self, c: char) -> Option<&str> {
        self.punctuation.get(&c).map(String::as_str)
    }

    pub fn is_marker(&self, token: &str) -> bool {
        self.punctuation.values().any(|m| m == token)
    }
}

pub fn is_document_marker(token: &str) -> bool {
    token.len() >= 2 && token.starts_with('<') && token.ends_with('>')
}

fn split_word(word: &str, cfg: &TokenizerConfig, out: &mut Vec<String>) {
    let chars: Vec<char> = word.chars().collect();
    let edge = |c: char| !c.is_alphanumeric();
    let mut lo = 0;
    while lo < chars.len() && edge(chars[lo]) {
        lo += 1;
    }
    let mut hi = chars.len();
    while hi > lo && edge(chars[hi - 1]) {
        hi -= 1;
    }
    // keep a trailing period when the word with it is a known abbreviation
    if hi < chars.len() && chars[hi] == '.' && lo < hi {
        let with_dot: String = chars[lo..=hi].iter().collect();
        if cfg.abbreviations.contains(&with_dot.to_lowercase()) {
            hi += 1;
        }
    }
    let emit_edge = |c: char, out: &mut Vec<String>| match cfg.marker_for(c) {
        Some(m) => out.push(m.to_string()),
        None => out.push(c.to_string()),
    };
    for &c in &chars[..lo] {
        emit_edge(c, out);
    }
    if lo < hi {
        out.push(chars[lo..hi].iter().collect());
    }
    for &c in &chars[hi..] {
        emit_edge(c, out);
    }
}

/// Tokenises `text`. Never fails; unknown edge characters come out as
/// single-character tokens.
pub fn tokenize(text: &str, cfg: &TokenizerConfig) -> Vec<String> {
    let mut raw = Vec::new();
    for line in text.lines() {
        let trimmed = line.trim();
        if is_document_marker(trimmed) && !trimmed[1..trimmed.len() - 1].contains(['<', '>']) {
            raw.push(trimmed.to_string());
            continue;
        }
        for word in trimmed.split_whitespace() {
            split_word(word, cfg, &mut raw);
        }
    }
    fuse_syntagms(raw, cfg)
}

fn fuse_syntagms(tokens: Vec<String>, cfg: &TokenizerConfig) -> Vec<String> {
    if cfg.syntagms.is_empty() {
        return tokens;
    }
    let lower: Vec<String> = tokens.iter().map(|t| t.to_lowercase()).collect();
    let mut out = Vec::with_capacity(tokens.len());
    let mut i = 0;
    while i < tokens.len() {
        let hit = cfg.syntagms.iter().find(|s| {
            i + s.len() <= tokens.len()
                && s.iter().zip(&lower[i..]).all(|(a, b)| a == b)
                && tokens[i..i + s.len()].iter().all(|t| !cfg.is_marker(t) && !is_document_marker(t))
        });
        match hit {
            Some(s) => {
                out.push(tokens[i..i + s.len()].join(" "));
                i += s.len();
            }
            None => {
                out.push(tokens[i].clone());
                i += 1;
            }
        }
    }
    out
}
