//! Sentence automata, intersection parsing and folding results back into
//! cohorts.

use super::compile::{CompiledGrammar, CompiledRule};
use super::FsigError;
use crate::fsa::table::Table;
use crate::fsa::{Alphabet, Dfa, FsaError, DEFAULT_STATE_CAP};
use crate::tag::{Boundary, Reading, Sentence, Symbol, SymbolString};

/// Acyclic automaton accepting exactly the sentence's resolved strings.
pub fn encode_sentence(sentence: &Sentence) -> Dfa {
    let alphabet = Alphabet::new(
        sentence
            .cohorts()
            .iter()
            .flat_map(|c| {
                c.readings().iter().flat_map(|r| r.symbols().cloned()).chain(c.trailing().iter().map(Symbol::boundary))
            })
            .chain(sentence.leading().iter().map(Symbol::boundary)),
    );
    let k = alphabet.classes();
    // state 0 is dead
    let mut trans: Vec<u32> = vec![0; k];
    let mut accept = vec![false];
    let new_state = |trans: &mut Vec<u32>, accept: &mut Vec<bool>| {
        accept.push(false);
        trans.extend(std::iter::repeat_n(0, k));
        (accept.len() - 1) as u32
    };
    let start = new_state(&mut trans, &mut accept);
    let mut entry = new_state(&mut trans, &mut accept);
    for b in sentence.leading().iter() {
        trans[start as usize * k + alphabet.class_of(&Symbol::boundary(b))] = entry;
    }
    for c in sentence.cohorts() {
        let next = new_state(&mut trans, &mut accept);
        for r in c.readings() {
            let mut q = entry;
            for sym in r.symbols() {
                let slot = q as usize * k + alphabet.class_of(sym);
                q = match trans[slot] {
                    0 => {
                        let s = new_state(&mut trans, &mut accept);
                        trans[slot] = s;
                        s
                    }
                    s => s,
                };
            }
            // boundaries never occur inside readings, so a reading end can
            // step straight to the next cohort
            for b in c.trailing().iter() {
                trans[q as usize * k + alphabet.class_of(&Symbol::boundary(b))] = next;
            }
        }
        entry = next;
    }
    accept[entry as usize] = true;
    Dfa::from_table(alphabet, Table { classes: k, trans, accept, start })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParseCaps {
    /// Bound on states of any intermediate product.
    pub state_cap: usize,
    /// Bound on the number of survivors listed.
    pub enum_cap: usize,
}

impl Default for ParseCaps {
    fn default() -> Self {
        ParseCaps { state_cap: DEFAULT_STATE_CAP, enum_cap: 10_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseStatus {
    Unique,
    Ambiguous,
    Empty,
    Overflow,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseResult {
    pub status: ParseStatus,
    /// Surviving strings; those preferred by the rankers come first, each
    /// group in lexicographic order.
    pub survivors: Vec<SymbolString>,
    /// How many leading survivors the rankers prefer.
    pub preferred: usize,
}

impl ParseResult {
    fn failed(status: ParseStatus) -> ParseResult {
        ParseResult { status, survivors: Vec::new(), preferred: 0 }
    }

    pub fn preferred_strings(&self) -> &[SymbolString] {
        &self.survivors[..self.preferred]
    }
}

/// Rules in intersection order: fewest states first, grammar order
/// breaking ties.
pub fn intersection_order(rules: &[CompiledRule]) -> Vec<&CompiledRule> {
    let mut v: Vec<&CompiledRule> = rules.iter().collect();
    v.sort_by_key(|r| r.dfa.state_count());
    v
}

fn intersect_all<'a>(start: &Dfa, rules: impl IntoIterator<Item = &'a CompiledRule>, cap: usize) -> Result<Dfa, FsaError> {
    let mut cur = start.clone();
    for r in rules {
        cur = cur.intersect(&r.dfa, cap)?;
        if cur.is_empty() {
            break;
        }
    }
    Ok(cur)
}

/// Intersects the sentence automaton with every rule, then lets the rankers
/// pick preferred survivors. Each ranker keeps the strings it accepts
/// unless that would leave none.
pub fn parse(sentence: &Dfa, grammar: &CompiledGrammar, caps: ParseCaps) -> ParseResult {
    let cur = match intersect_all(sentence, intersection_order(&grammar.rules), caps.state_cap) {
        Ok(d) => d,
        Err(_) => return ParseResult::failed(ParseStatus::Overflow),
    };
    let count = match cur.count() {
        Some(0) => return ParseResult::failed(ParseStatus::Empty),
        Some(n) if n <= caps.enum_cap as u128 => n,
        _ => return ParseResult::failed(ParseStatus::Overflow),
    };
    let mut preferred = cur.clone();
    if count > 1 {
        for rk in &grammar.rankers {
            if let Ok(t) = preferred.intersect(&rk.dfa, caps.state_cap) {
                if !t.is_empty() {
                    preferred = t;
                }
            }
        }
    }
    let rest = match cur.intersect(&preferred.complement(), caps.state_cap) {
        Ok(d) => d,
        Err(_) => return ParseResult::failed(ParseStatus::Overflow),
    };
    let (Ok(mut survivors), Ok(others)) = (preferred.enumerate(caps.enum_cap), rest.enumerate(caps.enum_cap)) else {
        return ParseResult::failed(ParseStatus::Overflow);
    };
    let preferred = survivors.len();
    survivors.extend(others);
    let status = if count == 1 { ParseStatus::Unique } else { ParseStatus::Ambiguous };
    ParseResult { status, survivors, preferred }
}

/// Splits a resolved string into (reading symbols, boundary) per cohort,
/// after its leading boundary.
pub fn split_string(s: &[Symbol]) -> Option<(Boundary, Vec<(&[Symbol], Boundary)>)> {
    let (first, mut rest) = s.split_first()?;
    let leading = first.as_boundary()?;
    let mut out = Vec::new();
    while !rest.is_empty() {
        let end = rest.iter().position(Symbol::is_boundary)?;
        out.push((&rest[..end], rest[end].as_boundary()?));
        rest = &rest[end + 1..];
    }
    Some((leading, out))
}

/// Keeps only the readings and boundaries that occur in some of `strings`.
pub fn fold_survivors(sentence: &Sentence, strings: &[SymbolString]) -> Result<Sentence, FsigError> {
    let n = sentence.len();
    let mut keep_reading: Vec<Vec<bool>> = sentence.cohorts().iter().map(|c| vec![false; c.readings().len()]).collect();
    let mut keep_bound: Vec<Vec<Boundary>> = vec![Vec::new(); n];
    for s in strings {
        let (_, parts) = split_string(s).ok_or(FsigError::Fold)?;
        if parts.len() != n {
            return Err(FsigError::Fold);
        }
        for (i, (syms, b)) in parts.iter().enumerate() {
            let c = &sentence.cohorts()[i];
            let idx = c
                .readings()
                .iter()
                .position(|r: &Reading| r.symbols().eq(syms.iter()))
                .ok_or(FsigError::Fold)?;
            keep_reading[i][idx] = true;
            if !c.trailing().contains(*b) {
                return Err(FsigError::Fold);
            }
            if !keep_bound[i].contains(b) {
                keep_bound[i].push(*b);
            }
        }
    }
    if strings.is_empty() {
        return Err(FsigError::Fold);
    }
    let mut out = sentence.clone();
    for (i, c) in out.cohorts_mut().iter_mut().enumerate() {
        let mut it = keep_reading[i].iter();
        c.retain_readings(|_| *it.next().unwrap());
        let set = crate::tag::BoundarySet::from_iter(keep_bound[i].iter().copied()).ok_or(FsigError::Fold)?;
        c.set_trailing(set);
    }
    Ok(out)
}
