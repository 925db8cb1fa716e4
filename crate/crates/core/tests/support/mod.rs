//! Shared generators and brute-force oracles for the integration tests.
//!
//! The oracles decide membership straight from regular-expression
//! semantics over explicit strings; they never build an automaton.

#![allow(dead_code)]

pub mod criteria;

use std::collections::BTreeSet;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rtag_core::fsa::{Definitions, Regex};
use rtag_core::fsig::ImplicationRule;
use rtag_core::tag::{Boundary, BoundarySet, Cohort, Reading, Sentence, Symbol};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn sym(text: &str) -> Symbol {
    Symbol::parse(text).unwrap()
}

pub fn syms(texts: &[&str]) -> Vec<Symbol> {
    texts.iter().map(|t| sym(t)).collect()
}

/// Every string over `alphabet` of length at most `max_len`, shortest first.
pub fn all_strings(alphabet: &[Symbol], max_len: usize) -> Vec<Vec<Symbol>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for s in alphabet {
                let mut v: Vec<Symbol> = w.clone();
                v.push(s.clone());
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

// ---------------------------------------------------------------------------
// Regex oracle

#[derive(Clone, Debug)]
enum Node {
    Sym(Symbol),
    Any,
    Eps,
    Empty,
    Cat(usize, usize),
    Alt(usize, usize),
    And(usize, usize),
    Not(usize),
    Star(usize),
}

/// A set of expressions flattened into one node array, children before
/// parents, references inlined.
///
/// For a word `w`, column `j` of node `n` is the bitmask of start positions
/// `i <= j` such that `w[i..j]` is in the language of `n`. Columns are
/// computed left to right, so a depth-first walk over a trie of words can
/// push and pop them one symbol at a time.
#[derive(Clone, Debug, Default)]
pub struct Matcher {
    nodes: Vec<Node>,
    cols: Vec<Vec<u64>>,
    word: Vec<Symbol>,
}

impl Matcher {
    pub fn new() -> Matcher {
        Matcher::default()
    }

    /// Adds an expression and returns its root node.
    pub fn add(&mut self, re: &Regex, defs: &Definitions) -> usize {
        let id = match re {
            Regex::Symbol(s) => self.push(Node::Sym(s.clone())),
            Regex::Any => self.push(Node::Any),
            Regex::Epsilon => self.push(Node::Eps),
            Regex::Empty => self.push(Node::Empty),
            Regex::Concat(v) => self.fold(v, defs, Node::Cat, Node::Eps),
            Regex::Union(v) => self.fold(v, defs, Node::Alt, Node::Empty),
            Regex::Intersection(v) => {
                let first = self.add(&v[0], defs);
                v[1..].iter().fold(first, |acc, r| {
                    let b = self.add(r, defs);
                    self.push(Node::And(acc, b))
                })
            }
            Regex::Star(r) => {
                let a = self.add(r, defs);
                self.push(Node::Star(a))
            }
            Regex::Complement(r) => {
                let a = self.add(r, defs);
                self.push(Node::Not(a))
            }
            Regex::Ref(name) => {
                let body = defs.get(name).unwrap_or_else(|| panic!("unknown reference {name}")).clone();
                self.add(&body, defs)
            }
        };
        id
    }

    fn fold(&mut self, v: &[Regex], defs: &Definitions, op: fn(usize, usize) -> Node, unit: Node) -> usize {
        if v.is_empty() {
            return self.push(unit);
        }
        let first = self.add(&v[0], defs);
        v[1..].iter().fold(first, |acc, r| {
            let b = self.add(r, defs);
            self.push(op(acc, b))
        })
    }

    fn push(&mut self, n: Node) -> usize {
        self.nodes.push(n);
        self.cols.push(Vec::new());
        self.nodes.len() - 1
    }

    /// Forgets the current word.
    pub fn reset(&mut self) {
        self.word.clear();
        for c in &mut self.cols {
            c.clear();
        }
        self.push_column();
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    /// Extends the word by one symbol.
    pub fn push_symbol(&mut self, s: &Symbol) {
        self.word.push(s.clone());
        self.push_column();
    }

    pub fn pop_symbol(&mut self) {
        self.word.pop();
        for c in &mut self.cols {
            c.pop();
        }
    }

    fn push_column(&mut self) {
        let j = self.word.len();
        assert!(j < 64, "words longer than 63 symbols are not supported");
        let all_upto: u64 = if j == 63 { u64::MAX } else { (1u64 << (j + 1)) - 1 };
        for n in 0..self.nodes.len() {
            let v = match &self.nodes[n] {
                Node::Sym(s) => {
                    if j > 0 && &self.word[j - 1] == s {
                        1 << (j - 1)
                    } else {
                        0
                    }
                }
                Node::Any => {
                    if j > 0 {
                        1 << (j - 1)
                    } else {
                        0
                    }
                }
                Node::Eps => 1 << j,
                Node::Empty => 0,
                Node::Cat(a, b) => {
                    let mut acc = 0;
                    let mut mids = self.cols[*b][j];
                    while mids != 0 {
                        let m = mids.trailing_zeros() as usize;
                        mids &= mids - 1;
                        acc |= self.cols[*a][m];
                    }
                    acc
                }
                Node::Alt(a, b) => self.cols[*a][j] | self.cols[*b][j],
                Node::And(a, b) => self.cols[*a][j] & self.cols[*b][j],
                Node::Not(a) => all_upto & !self.cols[*a][j],
                Node::Star(a) => {
                    let mut acc = 1 << j;
                    let mut mids = self.cols[*a][j] & !(1 << j);
                    while mids != 0 {
                        let m = mids.trailing_zeros() as usize;
                        mids &= mids - 1;
                        acc |= self.cols[n][m];
                    }
                    acc
                }
            };
            self.cols[n].push(v);
        }
    }

    /// Column `j` of `node` for the current word.
    pub fn column(&self, node: usize, j: usize) -> u64 {
        self.cols[node][j]
    }

    /// Whether the whole current word is in the language of `node`.
    pub fn accepts_current(&self, node: usize) -> bool {
        self.cols[node][self.word.len()] & 1 != 0
    }

    pub fn matches(&mut self, node: usize, word: &[Symbol]) -> bool {
        self.load(word);
        self.accepts_current(node)
    }

    pub fn load(&mut self, word: &[Symbol]) {
        self.reset();
        for s in word {
            self.push_symbol(s);
        }
    }
}

/// Membership in one regex, by the oracle.
pub fn regex_matches(re: &Regex, defs: &Definitions, word: &[Symbol]) -> bool {
    let mut m = Matcher::new();
    let root = m.add(re, defs);
    m.matches(root, word)
}

// ---------------------------------------------------------------------------
// Restriction oracle

/// Decides `X => LC1 _ RC1, ...` by looking at every factorisation
/// `w = u x v` with `x` in X: some context must have `u` ending in a string
/// of LC and `v` starting with a string of RC.
pub struct RuleOracle {
    m: Matcher,
    x: usize,
    contexts: Vec<(usize, usize)>,
    /// Per prefix length: for each context, starts `j` of some RC match so far.
    rc_reach: Vec<Vec<u64>>,
    /// Per prefix length: for each context, positions `i` where an LC match ends.
    lc_ends: Vec<Vec<u64>>,
}

impl RuleOracle {
    pub fn new(rule: &ImplicationRule, defs: &Definitions) -> RuleOracle {
        let mut m = Matcher::new();
        let x = m.add(&rule.x, defs);
        let contexts = rule.contexts.iter().map(|(l, r)| (m.add(l, defs), m.add(r, defs))).collect();
        let mut o = RuleOracle { m, x, contexts, rc_reach: Vec::new(), lc_ends: Vec::new() };
        o.reset();
        o
    }

    pub fn reset(&mut self) {
        self.m.reset();
        self.rc_reach.clear();
        self.lc_ends.clear();
        self.record();
    }

    fn record(&mut self) {
        let j = self.m.len();
        let prev_rc = self.rc_reach.last().cloned();
        let prev_lc = self.lc_ends.last().cloned();
        let mut rc = Vec::with_capacity(self.contexts.len());
        let mut lc = Vec::with_capacity(self.contexts.len());
        for (k, &(l, r)) in self.contexts.iter().enumerate() {
            let pr = prev_rc.as_ref().map_or(0, |v| v[k]);
            let pl = prev_lc.as_ref().map_or(0, |v| v[k]);
            rc.push(pr | self.m.column(r, j));
            lc.push(pl | if self.m.column(l, j) != 0 { 1 << j } else { 0 });
        }
        self.rc_reach.push(rc);
        self.lc_ends.push(lc);
    }

    pub fn push_symbol(&mut self, s: &Symbol) {
        self.m.push_symbol(s);
        self.record();
    }

    pub fn pop_symbol(&mut self) {
        self.m.pop_symbol();
        self.rc_reach.pop();
        self.lc_ends.pop();
    }

    /// Whether the current word satisfies the rule.
    pub fn current_ok(&self) -> bool {
        let n = self.m.len();
        let rc = &self.rc_reach[n];
        let lc = &self.lc_ends[n];
        for j in 0..=n {
            let starts = self.m.column(self.x, j);
            if starts == 0 {
                continue;
            }
            let mut allowed = 0u64;
            for k in 0..self.contexts.len() {
                if rc[k] >> j & 1 == 1 {
                    allowed |= lc[k];
                }
            }
            if starts & !allowed != 0 {
                return false;
            }
        }
        true
    }

    pub fn accepts(&mut self, word: &[Symbol]) -> bool {
        self.reset();
        for s in word {
            self.push_symbol(s);
        }
        self.current_ok()
    }
}

// ---------------------------------------------------------------------------
// Random expressions

/// Random expression over `alphabet`, at most `depth` operators deep.
pub fn random_regex(r: &mut impl Rng, alphabet: &[Symbol], depth: usize) -> Regex {
    if depth == 0 || r.gen_bool(0.3) {
        return match r.gen_range(0..10) {
            0 => Regex::Any,
            1 => Regex::Epsilon,
            _ => Regex::sym(alphabet.choose(r).unwrap().clone()),
        };
    }
    let d = depth - 1;
    match r.gen_range(0..10) {
        0..=2 => Regex::concat([random_regex(r, alphabet, d), random_regex(r, alphabet, d)]),
        3..=4 => Regex::union([random_regex(r, alphabet, d), random_regex(r, alphabet, d)]),
        5..=6 => Regex::star(random_regex(r, alphabet, d)),
        7 => Regex::intersection([random_regex(r, alphabet, d), random_regex(r, alphabet, d)]),
        8 => Regex::complement(random_regex(r, alphabet, d)),
        _ => Regex::concat([Regex::any_string(), random_regex(r, alphabet, d), Regex::any_string()]),
    }
}

/// Random implication rule with one or two contexts; either side of a
/// context may be empty.
pub fn random_rule(r: &mut impl Rng, alphabet: &[Symbol], depth: usize, name: &str) -> ImplicationRule {
    let x = random_regex(r, alphabet, depth);
    let n = r.gen_range(1..=2);
    let mut contexts = Vec::new();
    for _ in 0..n {
        let lc = if r.gen_bool(0.3) { Regex::Epsilon } else { random_regex(r, alphabet, depth) };
        let rc = if r.gen_bool(0.3) { Regex::Epsilon } else { random_regex(r, alphabet, depth) };
        contexts.push((lc, rc));
    }
    ImplicationRule::new(name, x, contexts)
}

// ---------------------------------------------------------------------------
// Random sentences

pub const BASEFORMS: &[&str] = &["\"a\"", "\"b\"", "\"c\""];
pub const MORPH: &[&str] = &["N", "V", "A", "SG", "PL"];
pub const SYN: &[&str] = &["@S", "@O", "@X"];
pub const INTERNAL: [Boundary; 4] = [Boundary::Word, Boundary::Clause, Boundary::EmbedOpen, Boundary::EmbedClose];

pub fn random_reading(r: &mut impl Rng, with_syn: bool) -> Reading {
    let base = sym(BASEFORMS.choose(r).unwrap());
    let k = r.gen_range(1..=2);
    let morph: Vec<Symbol> = MORPH.choose_multiple(r, k).map(|t| sym(t)).collect();
    let syn = if with_syn && r.gen_bool(0.7) { vec![sym(SYN.choose(r).unwrap())] } else { Vec::new() };
    Reading::new(base, morph, syn).unwrap()
}

/// Random sentence with up to `max_cohorts` cohorts, `max_readings` distinct
/// readings per cohort and `max_bounds` boundary alternatives per gap.
pub fn random_sentence(r: &mut impl Rng, max_cohorts: usize, max_readings: usize, max_bounds: usize, with_syn: bool) -> Sentence {
    let n = r.gen_range(1..=max_cohorts);
    let mut cohorts = Vec::new();
    for i in 0..n {
        let k = r.gen_range(1..=max_readings);
        let mut readings: Vec<Reading> = Vec::new();
        for _ in 0..k * 4 {
            if readings.len() == k {
                break;
            }
            let rd = random_reading(r, with_syn);
            if !readings.contains(&rd) {
                readings.push(rd);
            }
        }
        let trailing = if i + 1 == n {
            BoundarySet::sentence()
        } else {
            let b = r.gen_range(1..=max_bounds);
            BoundarySet::from_iter(INTERNAL.choose_multiple(r, b).copied()).unwrap()
        };
        cohorts.push(Cohort::new(format!("w{i}"), readings, trailing).unwrap());
    }
    Sentence::new(cohorts).unwrap()
}

/// Symbols that random sentences can contain.
pub fn sentence_alphabet() -> Vec<Symbol> {
    let mut v: Vec<Symbol> = BASEFORMS.iter().chain(MORPH).chain(SYN).map(|t| sym(t)).collect();
    v.extend(Boundary::ALL.map(Symbol::boundary));
    v
}

// ---------------------------------------------------------------------------
// Random constraint grammars

pub const CG_TAGS: &[&str] = &["N", "V", "A", "ADV", "DET", "PREP"];

pub fn random_cg_sentence(r: &mut impl Rng) -> Sentence {
    let n = r.gen_range(1..=8);
    let cohorts = (0..n)
        .map(|i| {
            let k = r.gen_range(1..=4);
            let readings: Vec<Reading> = CG_TAGS
                .choose_multiple(r, k)
                .map(|t| Reading::parse(&format!("\"w{i}\" {t}")).unwrap())
                .collect();
            let trailing = if i + 1 == n { BoundarySet::sentence() } else { BoundarySet::word() };
            Cohort::new(format!("w{i}"), readings, trailing).unwrap()
        })
        .collect();
    Sentence::new(cohorts).unwrap()
}

/// Source text of a random grammar. Strict targets are kept distinct.
pub fn random_cg_source(r: &mut impl Rng) -> String {
    let mut out = String::new();
    let mut strict_targets = BTreeSet::new();
    for _ in 0..r.gen_range(1..=6) {
        let target = *CG_TAGS.choose(r).unwrap();
        let strict = r.gen_bool(0.5) && strict_targets.insert(target);
        out.push_str(if strict { "STRICT" } else { "HEUR" });
        out.push_str(&format!(" REMOVE {target} IF"));
        for _ in 0..r.gen_range(1..=2) {
            let tests: Vec<String> = (0..r.gen_range(1..=2))
                .map(|_| {
                    let pos = match r.gen_range(0..7) {
                        0 => "*L".to_string(),
                        1 => "*R".to_string(),
                        _ => r.gen_range(-2i32..=2).to_string(),
                    };
                    let careful = if r.gen_bool(0.3) { "C" } else { "" };
                    let not = if r.gen_bool(0.3) { "NOT " } else { "" };
                    format!("{pos}{careful} {not}{}", CG_TAGS.choose(r).unwrap())
                })
                .collect();
            out.push_str(&format!(" ({})", tests.join(", ")));
        }
        out.push_str(" ;\n");
    }
    out
}
