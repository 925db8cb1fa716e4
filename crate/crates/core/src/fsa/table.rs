//! Complete deterministic transition tables over dense class indices.
//!
//! Everything symbol-aware lives in `dfa.rs`; this layer only knows that
//! there are `classes` columns.

use std::collections::{HashMap, VecDeque};

use super::FsaError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Table {
    pub classes: usize,
    pub trans: Vec<u32>,
    pub accept: Vec<bool>,
    pub start: u32,
}

#[derive(Clone, Copy)]
pub(crate) enum BoolOp {
    And,
    Or,
}

impl Table {
    pub fn states(&self) -> usize {
        self.accept.len()
    }

    #[inline]
    pub fn next(&self, q: u32, class: usize) -> u32 {
        self.trans[q as usize * self.classes + class]
    }

    /// Single state; accepts everything when `accepting`, nothing otherwise.
    pub fn trivial(classes: usize, accepting: bool) -> Table {
        Table { classes, trans: vec![0; classes], accept: vec![accepting], start: 0 }
    }

    /// Accepts exactly the strings of length one drawn from `allowed`.
    pub fn single_step(classes: usize, allowed: impl Fn(usize) -> bool) -> Table {
        // 0 start, 1 accept, 2 dead
        let mut trans = vec![2u32; classes * 3];
        for c in 0..classes {
            if allowed(c) {
                trans[c] = 1;
            }
        }
        Table { classes, trans, accept: vec![false, true, false], start: 0 }
    }

    pub fn complement(&self) -> Table {
        let mut t = self.clone();
        for a in &mut t.accept {
            *a = !*a;
        }
        t
    }

    /// Reachable part of the product automaton.
    pub fn product(&self, other: &Table, op: BoolOp, cap: usize) -> Result<Table, FsaError> {
        debug_assert_eq!(self.classes, other.classes);
        let k = self.classes;
        let nb = other.states();
        let dense = self.states().saturating_mul(nb) <= 1 << 22;
        let mut dense_ids: Vec<u32> = if dense { vec![u32::MAX; self.states() * nb] } else { Vec::new() };
        let mut sparse_ids: HashMap<(u32, u32), u32> = HashMap::new();
        let mut pairs: Vec<(u32, u32)> = Vec::new();
        let mut trans: Vec<u32> = Vec::new();
        let mut intern = |p: (u32, u32), pairs: &mut Vec<(u32, u32)>| -> Result<u32, FsaError> {
            let slot = if dense {
                let i = p.0 as usize * nb + p.1 as usize;
                if dense_ids[i] != u32::MAX {
                    return Ok(dense_ids[i]);
                }
                Some(i)
            } else {
                if let Some(&id) = sparse_ids.get(&p) {
                    return Ok(id);
                }
                None
            };
            let id = pairs.len();
            if id >= cap {
                return Err(FsaError::StateCap { cap });
            }
            match slot {
                Some(i) => dense_ids[i] = id as u32,
                None => {
                    sparse_ids.insert(p, id as u32);
                }
            }
            pairs.push(p);
            Ok(id as u32)
        };
        intern((self.start, other.start), &mut pairs)?;
        let mut i = 0;
        while i < pairs.len() {
            let (a, b) = pairs[i];
            for c in 0..k {
                let id = intern((self.next(a, c), other.next(b, c)), &mut pairs)?;
                trans.push(id);
            }
            i += 1;
        }
        let accept = pairs
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (self.accept[a as usize], other.accept[b as usize]);
                match op {
                    BoolOp::And => x && y,
                    BoolOp::Or => x || y,
                }
            })
            .collect();
        Ok(Table { classes: k, trans, accept, start: 0 })
    }

    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.states()];
        let mut queue = VecDeque::from([self.start]);
        seen[self.start as usize] = true;
        while let Some(q) = queue.pop_front() {
            for c in 0..self.classes {
                let r = self.next(q, c);
                if !seen[r as usize] {
                    seen[r as usize] = true;
                    queue.push_back(r);
                }
            }
        }
        seen
    }

    /// States from which some accepting state is reachable.
    pub fn live(&self) -> Vec<bool> {
        let n = self.states();
        let mut rev: Vec<Vec<u32>> = vec![Vec::new(); n];
        for q in 0..n {
            for c in 0..self.classes {
                rev[self.next(q as u32, c) as usize].push(q as u32);
            }
        }
        let mut live = self.accept.clone();
        let mut stack: Vec<u32> = (0..n as u32).filter(|&q| live[q as usize]).collect();
        while let Some(q) = stack.pop() {
            for &p in &rev[q as usize] {
                if !live[p as usize] {
                    live[p as usize] = true;
                    stack.push(p);
                }
            }
        }
        live
    }

    pub fn is_empty(&self) -> bool {
        let seen = self.reachable();
        !seen.iter().zip(&self.accept).any(|(&r, &a)| r && a)
    }

    fn restrict(&self, keep: &[bool]) -> Table {
        let mut map = vec![u32::MAX; self.states()];
        let mut next = 0u32;
        for (q, &k) in keep.iter().enumerate() {
            if k {
                map[q] = next;
                next += 1;
            }
        }
        let mut trans = Vec::with_capacity(next as usize * self.classes);
        let mut accept = Vec::with_capacity(next as usize);
        for (q, &k) in keep.iter().enumerate() {
            if k {
                for c in 0..self.classes {
                    trans.push(map[self.next(q as u32, c) as usize]);
                }
                accept.push(self.accept[q]);
            }
        }
        Table { classes: self.classes, trans, accept, start: map[self.start as usize] }
    }

    /// Minimal complete automaton for the same language, canonically
    /// numbered.
    pub fn minimize(&self) -> Table {
        let reach = self.reachable();
        let t = self.restrict(&reach);
        let blocks = hopcroft(&t);
        let nblocks = blocks.iter().copied().max().map_or(0, |m| m as usize + 1);
        let mut trans = vec![0u32; nblocks * t.classes];
        let mut accept = vec![false; nblocks];
        for q in 0..t.states() {
            let b = blocks[q] as usize;
            accept[b] = t.accept[q];
            for c in 0..t.classes {
                trans[b * t.classes + c] = blocks[t.next(q as u32, c) as usize];
            }
        }
        Table { classes: t.classes, trans, accept, start: blocks[t.start as usize] }.canonical()
    }

    /// Renumbers states in breadth-first discovery order, scanning classes
    /// in ascending order. Drops unreachable states.
    pub fn canonical(&self) -> Table {
        let mut map = vec![u32::MAX; self.states()];
        let mut order = vec![self.start];
        map[self.start as usize] = 0;
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            for c in 0..self.classes {
                let r = self.next(q, c);
                if map[r as usize] == u32::MAX {
                    map[r as usize] = order.len() as u32;
                    order.push(r);
                }
            }
            i += 1;
        }
        let mut trans = Vec::with_capacity(order.len() * self.classes);
        for &q in &order {
            for c in 0..self.classes {
                trans.push(map[self.next(q, c) as usize]);
            }
        }
        let accept = order.iter().map(|&q| self.accept[q as usize]).collect();
        Table { classes: self.classes, trans, accept, start: 0 }
    }

    /// Appends `extra` columns that lead every state to a fresh sink.
    pub fn with_extra_classes(&self, extra: usize) -> Table {
        let k = self.classes + extra;
        let sink = self.states() as u32;
        let mut trans = Vec::with_capacity((self.states() + 1) * k);
        for q in 0..self.states() as u32 {
            for c in 0..self.classes {
                trans.push(self.next(q, c));
            }
            trans.extend(std::iter::repeat_n(sink, extra));
        }
        trans.extend(std::iter::repeat_n(sink, k));
        let mut accept = self.accept.clone();
        accept.push(false);
        Table { classes: k, trans, accept, start: self.start }.minimize()
    }

    /// Rewrites columns: new class `i` behaves like old class `map[i]`.
    pub fn remap_classes(&self, map: &[usize]) -> Table {
        let mut trans = Vec::with_capacity(self.states() * map.len());
        for q in 0..self.states() as u32 {
            for &old in map {
                trans.push(self.next(q, old));
            }
        }
        Table { classes: map.len(), trans, accept: self.accept.clone(), start: self.start }
    }
}

/// Hopcroft's partition refinement. Returns a block id per state; the
/// input must be complete and fully reachable.
fn hopcroft(t: &Table) -> Vec<u32> {
    let n = t.states();
    let k = t.classes;
    if n == 0 {
        return Vec::new();
    }
    // predecessor lists in CSR layout, one slab per class
    let mut pred_start = vec![0u32; k * (n + 1)];
    for q in 0..n {
        for c in 0..k {
            let r = t.next(q as u32, c) as usize;
            pred_start[c * (n + 1) + r + 1] += 1;
        }
    }
    for c in 0..k {
        let base = c * (n + 1);
        for i in 0..n {
            pred_start[base + i + 1] += pred_start[base + i];
        }
    }
    let mut fill = pred_start.clone();
    let mut preds = vec![0u32; k * n];
    for q in 0..n {
        for c in 0..k {
            let r = t.next(q as u32, c) as usize;
            let slot = &mut fill[c * (n + 1) + r];
            preds[c * n + *slot as usize] = q as u32;
            *slot += 1;
        }
    }

    let mut p = Partition::new(n, |q| t.accept[q]);
    let mut in_work = vec![false; n];
    let mut work: Vec<u32> = Vec::new();
    for b in 0..p.blocks() {
        in_work[b] = true;
        work.push(b as u32);
    }
    let mut splitter: Vec<u32> = Vec::new();
    let mut touched: Vec<u32> = Vec::new();
    while let Some(b) = work.pop() {
        in_work[b as usize] = false;
        splitter.clear();
        splitter.extend_from_slice(p.members(b));
        for c in 0..k {
            let base = c * (n + 1);
            for &r in &splitter {
                let (lo, hi) = (pred_start[base + r as usize], pred_start[base + r as usize + 1]);
                for &q in &preds[c * n + lo as usize..c * n + hi as usize] {
                    if let Some(blk) = p.mark(q) {
                        touched.push(blk);
                    }
                }
            }
            for &y in &touched {
                if let Some(z) = p.split(y) {
                    if in_work.len() <= z as usize {
                        in_work.resize(z as usize + 1, false);
                    }
                    if in_work[y as usize] {
                        in_work[z as usize] = true;
                        work.push(z);
                    } else {
                        let smaller = if p.size(z) <= p.size(y) { z } else { y };
                        in_work[smaller as usize] = true;
                        work.push(smaller);
                    }
                }
            }
            touched.clear();
        }
    }
    p.block_of
}

struct Partition {
    elems: Vec<u32>,
    loc: Vec<u32>,
    block_of: Vec<u32>,
    start: Vec<u32>,
    end: Vec<u32>,
    mid: Vec<u32>,
}

impl Partition {
    fn new(n: usize, accepting: impl Fn(usize) -> bool) -> Partition {
        let mut elems: Vec<u32> = (0..n as u32).filter(|&q| accepting(q as usize)).collect();
        let split = elems.len() as u32;
        elems.extend((0..n as u32).filter(|&q| !accepting(q as usize)));
        let mut p = Partition {
            loc: vec![0; n],
            block_of: vec![0; n],
            elems,
            start: Vec::new(),
            end: Vec::new(),
            mid: Vec::new(),
        };
        let mut ranges = Vec::new();
        if split > 0 {
            ranges.push((0, split));
        }
        if (split as usize) < n {
            ranges.push((split, n as u32));
        }
        for (b, (s, e)) in ranges.into_iter().enumerate() {
            p.start.push(s);
            p.end.push(e);
            p.mid.push(s);
            for i in s..e {
                let q = p.elems[i as usize] as usize;
                p.loc[q] = i;
                p.block_of[q] = b as u32;
            }
        }
        p
    }

    fn blocks(&self) -> usize {
        self.start.len()
    }

    fn size(&self, b: u32) -> u32 {
        self.end[b as usize] - self.start[b as usize]
    }

    fn members(&self, b: u32) -> &[u32] {
        &self.elems[self.start[b as usize] as usize..self.end[b as usize] as usize]
    }

    /// Moves `q` into the marked prefix of its block. Returns the block when
    /// this is its first mark.
    fn mark(&mut self, q: u32) -> Option<u32> {
        let b = self.block_of[q as usize] as usize;
        let i = self.loc[q as usize];
        let m = self.mid[b];
        if i < m {
            return None;
        }
        let other = self.elems[m as usize];
        self.elems.swap(i as usize, m as usize);
        self.loc[other as usize] = i;
        self.loc[q as usize] = m;
        self.mid[b] = m + 1;
        (m == self.start[b]).then_some(b as u32)
    }

    /// Splits off the marked prefix as a new block, if it is proper.
    fn split(&mut self, b: u32) -> Option<u32> {
        let bi = b as usize;
        let (s, m, e) = (self.start[bi], self.mid[bi], self.end[bi]);
        self.mid[bi] = s;
        if m == e || m == s {
            return None;
        }
        let z = self.start.len() as u32;
        self.start.push(s);
        self.end.push(m);
        self.mid.push(s);
        self.start[bi] = m;
        self.mid[bi] = m;
        for i in s..m {
            self.block_of[self.elems[i as usize] as usize] = z;
        }
        Some(z)
    }
}
