use std::collections::HashMap;

use super::dfa::{Alphabet, Dfa};
use super::table::Table;
use super::FsaError;
use crate::tag::Symbol;

/// Class-level NFA with epsilon moves, used for concatenation, star and
/// projection. Built from tables and determinised straight back.
#[derive(Clone, Debug, Default)]
pub(crate) struct ClassNfa {
    pub classes: usize,
    pub edges: Vec<Vec<(u32, u32)>>,
    pub eps: Vec<Vec<u32>>,
    pub accept: Vec<bool>,
    pub start: u32,
}

impl ClassNfa {
    pub fn new(classes: usize) -> ClassNfa {
        ClassNfa { classes, ..Default::default() }
    }

    pub fn add_state(&mut self, accepting: bool) -> u32 {
        self.edges.push(Vec::new());
        self.eps.push(Vec::new());
        self.accept.push(accepting);
        (self.accept.len() - 1) as u32
    }

    /// Copies a table in and returns its start state. Dead states are
    /// skipped so the subset construction stays small.
    pub fn embed(&mut self, t: &Table, keep_accept: bool) -> u32 {
        let live = t.live();
        let mut ids = vec![u32::MAX; t.states()];
        for q in 0..t.states() {
            if live[q] || q == t.start as usize {
                ids[q] = self.add_state(keep_accept && t.accept[q]);
            }
        }
        for q in 0..t.states() {
            if ids[q] == u32::MAX {
                continue;
            }
            for c in 0..t.classes {
                let r = t.next(q as u32, c);
                if ids[r as usize] != u32::MAX {
                    self.edges[ids[q] as usize].push((c as u32, ids[r as usize]));
                }
            }
        }
        ids[t.start as usize]
    }

    /// Embeds `t`, returning its start and the list of its accepting states.
    pub fn embed_with_finals(&mut self, t: &Table) -> (u32, Vec<u32>) {
        let before = self.accept.len();
        let s = self.embed(t, true);
        let finals: Vec<u32> = (before..self.accept.len()).filter(|&q| self.accept[q]).map(|q| q as u32).collect();
        for &f in &finals {
            self.accept[f as usize] = false;
        }
        (s, finals)
    }

    fn closure(&self, set: &mut Vec<u32>, mark: &mut [bool]) {
        let mut i = 0;
        while i < set.len() {
            let q = set[i];
            for &r in &self.eps[q as usize] {
                if !mark[r as usize] {
                    mark[r as usize] = true;
                    set.push(r);
                }
            }
            i += 1;
        }
    }

    pub fn determinize(&self, cap: usize) -> Result<Table, FsaError> {
        let n = self.accept.len();
        let k = self.classes;
        let mut mark = vec![false; n];
        let mut start = vec![self.start];
        mark[self.start as usize] = true;
        self.closure(&mut start, &mut mark);
        for &q in &start {
            mark[q as usize] = false;
        }
        start.sort_unstable();

        let mut ids: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut sets: Vec<Vec<u32>> = Vec::new();
        ids.insert(start.clone(), 0);
        sets.push(start);
        let mut trans: Vec<u32> = Vec::new();
        let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); k];
        let mut i = 0;
        while i < sets.len() {
            for b in &mut buckets {
                b.clear();
            }
            for &q in &sets[i] {
                for &(c, r) in &self.edges[q as usize] {
                    buckets[c as usize].push(r);
                }
            }
            for bucket in &mut buckets {
                let mut set: Vec<u32> = Vec::with_capacity(bucket.len());
                for &r in bucket.iter() {
                    if !mark[r as usize] {
                        mark[r as usize] = true;
                        set.push(r);
                    }
                }
                self.closure(&mut set, &mut mark);
                for &q in &set {
                    mark[q as usize] = false;
                }
                set.sort_unstable();
                let id = match ids.get(&set) {
                    Some(&id) => id,
                    None => {
                        let id = sets.len();
                        if id >= cap {
                            return Err(FsaError::StateCap { cap });
                        }
                        ids.insert(set.clone(), id as u32);
                        sets.push(set);
                        id as u32
                    }
                };
                trans.push(id);
            }
            i += 1;
        }
        let accept = sets.iter().map(|s| s.iter().any(|&q| self.accept[q as usize])).collect();
        Ok(Table { classes: k, trans, accept, start: 0 })
    }
}

/// A nondeterministic automaton over symbols with epsilon moves.
///
/// Symbols that never label an edge cannot be read; there is no OTHER
/// class here, so an `Nfa` always denotes a language over its own labels.
#[derive(Clone, Debug, Default)]
pub struct Nfa {
    edges: Vec<Vec<(Option<Symbol>, u32)>>,
    accept: Vec<bool>,
    start: u32,
}

impl Nfa {
    pub fn new() -> Nfa {
        let mut n = Nfa::default();
        n.add_state(false);
        n
    }

    pub fn add_state(&mut self, accepting: bool) -> u32 {
        self.edges.push(Vec::new());
        self.accept.push(accepting);
        (self.accept.len() - 1) as u32
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn set_start(&mut self, q: u32) {
        self.start = q;
    }

    pub fn set_accepting(&mut self, q: u32, accepting: bool) {
        self.accept[q as usize] = accepting;
    }

    /// `None` labels an epsilon move.
    pub fn add_edge(&mut self, from: u32, label: Option<Symbol>, to: u32) {
        self.edges[from as usize].push((label, to));
    }

    pub fn states(&self) -> usize {
        self.accept.len()
    }

    fn eps_closure(&self, set: &mut Vec<bool>) {
        let mut stack: Vec<u32> = (0..set.len() as u32).filter(|&q| set[q as usize]).collect();
        while let Some(q) = stack.pop() {
            for (label, r) in &self.edges[q as usize] {
                if label.is_none() && !set[*r as usize] {
                    set[*r as usize] = true;
                    stack.push(*r);
                }
            }
        }
    }

    /// Direct simulation over state sets.
    pub fn accepts(&self, word: &[Symbol]) -> bool {
        let mut cur = vec![false; self.states()];
        cur[self.start as usize] = true;
        self.eps_closure(&mut cur);
        for sym in word {
            let mut next = vec![false; self.states()];
            for q in 0..self.states() {
                if !cur[q] {
                    continue;
                }
                for (label, r) in &self.edges[q] {
                    if label.as_ref() == Some(sym) {
                        next[*r as usize] = true;
                    }
                }
            }
            self.eps_closure(&mut next);
            cur = next;
        }
        cur.iter().zip(&self.accept).any(|(&c, &a)| c && a)
    }

    /// Subset construction, then minimisation.
    pub fn determinize(&self, cap: usize) -> Result<Dfa, FsaError> {
        let alphabet = Alphabet::new(self.edges.iter().flatten().filter_map(|(l, _)| l.clone()));
        let mut cn = ClassNfa::new(alphabet.classes());
        for &a in &self.accept {
            cn.add_state(a);
        }
        cn.start = self.start;
        for (q, out) in self.edges.iter().enumerate() {
            for (label, r) in out {
                match label {
                    Some(s) => cn.edges[q].push((alphabet.class_of(s) as u32, *r)),
                    None => cn.eps[q].push(*r),
                }
            }
        }
        Ok(Dfa::from_table(alphabet, cn.determinize(cap)?))
    }
}
