use std::fmt::Write as _;
use std::sync::Arc;

use super::table::{BoolOp, Table};
use super::FsaError;
use crate::tag::{Symbol, SymbolString};

/// Spelling of the OTHER column in transition dumps.
pub const OTHER_LABEL: &str = "#OTHER";

/// Sorted set of explicitly named symbols. Class `i < len` is `symbols[i]`;
/// class `len` is OTHER, standing for every symbol not listed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet(Arc<[Symbol]>);

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = Symbol>) -> Alphabet {
        let mut v: Vec<Symbol> = symbols.into_iter().collect();
        v.sort();
        v.dedup();
        Alphabet(v.into())
    }

    pub fn empty() -> Alphabet {
        Alphabet::new([])
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of transition columns, OTHER included.
    pub fn classes(&self) -> usize {
        self.0.len() + 1
    }

    pub fn other(&self) -> usize {
        self.0.len()
    }

    pub fn class_of(&self, s: &Symbol) -> usize {
        self.0.binary_search(s).unwrap_or(self.0.len())
    }

    pub fn union(&self, other: &Alphabet) -> Alphabet {
        if self == other {
            return self.clone();
        }
        Alphabet::new(self.0.iter().chain(other.0.iter()).cloned())
    }
}

/// Complete, minimal deterministic automaton over an alphabet with an OTHER
/// class. All constructors and operations return canonical forms, so two
/// `Dfa`s for the same language are structurally equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dfa {
    alphabet: Alphabet,
    table: Table,
}

impl Dfa {
    pub(crate) fn from_table(alphabet: Alphabet, table: Table) -> Dfa {
        debug_assert_eq!(alphabet.classes(), table.classes);
        Dfa { alphabet, table }.minimized()
    }

    /// Accepts every string (Σ*).
    pub fn universal() -> Dfa {
        Dfa { alphabet: Alphabet::empty(), table: Table::trivial(1, true) }
    }

    pub fn empty_language() -> Dfa {
        Dfa { alphabet: Alphabet::empty(), table: Table::trivial(1, false) }
    }

    /// Finite language of exactly the given strings.
    pub fn from_strings(strings: &[SymbolString]) -> Dfa {
        let alphabet = Alphabet::new(strings.iter().flatten().cloned());
        let k = alphabet.classes();
        // state 0 is the dead state, 1 the root of the trie
        let mut trans = vec![0u32; 2 * k];
        let mut accept = vec![false, false];
        for s in strings {
            let mut q = 1usize;
            for sym in s {
                let c = alphabet.class_of(sym);
                let next = trans[q * k + c] as usize;
                q = if next != 0 {
                    next
                } else {
                    let id = accept.len();
                    accept.push(false);
                    trans.extend(std::iter::repeat_n(0, k));
                    trans[q * k + c] = id as u32;
                    id
                };
            }
            accept[q] = true;
        }
        Dfa::from_table(alphabet, Table { classes: k, trans, accept, start: 1 })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.table.states()
    }

    pub fn start(&self) -> u32 {
        self.table.start
    }

    pub fn is_accepting(&self, q: u32) -> bool {
        self.table.accept[q as usize]
    }

    pub fn step(&self, q: u32, sym: &Symbol) -> u32 {
        self.table.next(q, self.alphabet.class_of(sym))
    }

    pub fn accepts(&self, word: &[Symbol]) -> bool {
        let q = word.iter().fold(self.table.start, |q, s| self.step(q, s));
        self.table.accept[q as usize]
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn complement(&self) -> Dfa {
        Dfa { alphabet: self.alphabet.clone(), table: self.table.complement() }.minimized()
    }

    /// Columns of `self` re-expressed over a superset alphabet.
    pub(crate) fn aligned(&self, to: &Alphabet) -> Table {
        if &self.alphabet == to {
            return self.table.clone();
        }
        let map: Vec<usize> = to
            .symbols()
            .iter()
            .map(|s| self.alphabet.class_of(s))
            .chain(std::iter::once(self.alphabet.other()))
            .collect();
        self.table.remap_classes(&map)
    }

    fn combine(&self, other: &Dfa, op: BoolOp, cap: usize) -> Result<Dfa, FsaError> {
        let alphabet = self.alphabet.union(&other.alphabet);
        let a = self.aligned(&alphabet);
        let b = other.aligned(&alphabet);
        Ok(Dfa::from_table(alphabet, a.product(&b, op, cap)?))
    }

    /// Product automaton; fails when the reachable product has more than
    /// `cap` states.
    pub fn intersect(&self, other: &Dfa, cap: usize) -> Result<Dfa, FsaError> {
        self.combine(other, BoolOp::And, cap)
    }

    pub fn union(&self, other: &Dfa, cap: usize) -> Result<Dfa, FsaError> {
        self.combine(other, BoolOp::Or, cap)
    }

    /// Language equality. Canonical forms make this structural.
    pub fn equivalent(&self, other: &Dfa) -> bool {
        self == other
    }

    fn minimized(self) -> Dfa {
        let t = self.table.minimize();
        // drop named symbols that behave exactly like OTHER everywhere
        let other = self.alphabet.other();
        let keep: Vec<usize> = (0..other)
            .filter(|&c| (0..t.states() as u32).any(|q| t.next(q, c) != t.next(q, other)))
            .collect();
        if keep.len() == other {
            return Dfa { alphabet: self.alphabet, table: t };
        }
        let alphabet = Alphabet::new(keep.iter().map(|&c| self.alphabet.symbols()[c].clone()));
        let map: Vec<usize> = keep.into_iter().chain(std::iter::once(other)).collect();
        Dfa { alphabet, table: t.remap_classes(&map).canonical() }
    }

    /// Cycles through live states, or live OTHER moves, make the language
    /// impossible to list.
    fn check_enumerable(&self, live: &[bool]) -> Result<(), FsaError> {
        if self.has_live_cycle(live) {
            return Err(FsaError::Cyclic);
        }
        let t = &self.table;
        let other = self.alphabet.other();
        for q in 0..t.states() {
            if live[q] && live[t.next(q as u32, other) as usize] {
                return Err(FsaError::OpenAlphabet);
            }
        }
        Ok(())
    }

    fn has_live_cycle(&self, live: &[bool]) -> bool {
        let t = &self.table;
        let k = t.classes;
        let mut colour = vec![0u8; t.states()];
        for root in 0..t.states() {
            if !live[root] || colour[root] != 0 {
                continue;
            }
            let mut stack: Vec<(u32, usize)> = vec![(root as u32, 0)];
            colour[root] = 1;
            while let Some(top) = stack.last_mut() {
                let (q, c) = *top;
                if c == k {
                    colour[q as usize] = 2;
                    stack.pop();
                    continue;
                }
                top.1 += 1;
                let r = t.next(q, c);
                if !live[r as usize] {
                    continue;
                }
                match colour[r as usize] {
                    0 => {
                        colour[r as usize] = 1;
                        stack.push((r, 0));
                    }
                    1 => return true,
                    _ => {}
                }
            }
        }
        false
    }

    /// True when no cycle passes through states that can still reach
    /// acceptance.
    pub fn is_acyclic(&self) -> bool {
        !self.has_live_cycle(&self.table.live())
    }

    /// Number of accepted strings, or `None` for an infinite language.
    /// Saturates at `u128::MAX`.
    pub fn count(&self) -> Option<u128> {
        let live = self.table.live();
        self.check_enumerable(&live).ok()?;
        let t = &self.table;
        let other = self.alphabet.other();
        let mut memo: Vec<Option<u128>> = vec![None; t.states()];
        fn go(t: &Table, other: usize, live: &[bool], memo: &mut [Option<u128>], q: u32) -> u128 {
            if let Some(v) = memo[q as usize] {
                return v;
            }
            let mut total: u128 = u128::from(t.accept[q as usize]);
            for c in 0..other {
                let r = t.next(q, c);
                if live[r as usize] {
                    total = total.saturating_add(go(t, other, live, memo, r));
                }
            }
            memo[q as usize] = Some(total);
            total
        }
        if !live[t.start as usize] {
            return Some(0);
        }
        Some(go(t, other, &live, &mut memo, t.start))
    }

    /// All accepted strings in lexicographic symbol order. Fails on cyclic
    /// or open-alphabet languages and when more than `max_count` strings
    /// exist.
    pub fn enumerate(&self, max_count: usize) -> Result<Vec<SymbolString>, FsaError> {
        let count = self.count().ok_or_else(|| {
            let live = self.table.live();
            self.check_enumerable(&live).err().unwrap_or(FsaError::Cyclic)
        })?;
        if count > max_count as u128 {
            return Err(FsaError::EnumerationCap { count, cap: max_count });
        }
        let live = self.table.live();
        let mut out = Vec::with_capacity(count as usize);
        if !live[self.table.start as usize] {
            return Ok(out);
        }
        let mut path: Vec<Symbol> = Vec::new();
        self.walk(self.table.start, &live, &mut path, &mut out);
        Ok(out)
    }

    fn walk(&self, q: u32, live: &[bool], path: &mut Vec<Symbol>, out: &mut Vec<SymbolString>) {
        if self.table.accept[q as usize] {
            out.push(path.clone());
        }
        for (c, sym) in self.alphabet.symbols().iter().enumerate() {
            let r = self.table.next(q, c);
            if live[r as usize] {
                path.push(sym.clone());
                self.walk(r, live, path, out);
                path.pop();
            }
        }
    }

    /// Line-based transition table. Each state lists its OTHER move, then
    /// only the symbols whose target differs from it.
    ///
    /// ```text
    /// states 3
    /// start 0
    /// final 1
    /// alphabet a b
    /// 0 #OTHER 2
    /// 0 a 1
    /// ...
    /// ```
    pub fn dump(&self) -> String {
        let t = &self.table;
        let mut out = String::new();
        let _ = writeln!(out, "states {}", t.states());
        let _ = writeln!(out, "start {}", t.start);
        let finals: Vec<String> = (0..t.states()).filter(|&q| t.accept[q]).map(|q| q.to_string()).collect();
        let _ = writeln!(out, "final {}", finals.join(" ").trim_end());
        let syms: Vec<String> = self.alphabet.symbols().iter().map(|s| s.to_string()).collect();
        let _ = writeln!(out, "alphabet {}", syms.join(" "));
        let other = self.alphabet.other();
        for q in 0..t.states() as u32 {
            let def = t.next(q, other);
            let _ = writeln!(out, "{q} {OTHER_LABEL} {def}");
            for (c, s) in self.alphabet.symbols().iter().enumerate() {
                let r = t.next(q, c);
                if r != def {
                    let _ = writeln!(out, "{q} {s} {r}");
                }
            }
        }
        out
    }

    /// Reads the output of [`Dfa::dump`]. Consumes lines until the table is
    /// complete, returning the remaining input.
    pub fn parse_dump(text: &str) -> Result<(Dfa, &str), FsaError> {
        let bad = |line: &str| FsaError::BadDump(line.to_string());
        let mut rest = text;
        let mut header = |key: &str| -> Result<String, FsaError> {
            let line = next_line(&mut rest).ok_or_else(|| bad("<eof>"))?;
            let body = line.strip_prefix(key).ok_or_else(|| bad(line))?;
            Ok(body.trim().to_string())
        };
        let states: usize = header("states")?.parse().map_err(|_| bad("states"))?;
        let start: u32 = header("start")?.parse().map_err(|_| bad("start"))?;
        let finals = header("final")?;
        let alpha_line = header("alphabet")?;
        let mut syms = Vec::new();
        for tok in alpha_line.split_whitespace() {
            if tok == OTHER_LABEL {
                return Err(bad(tok));
            }
            syms.push(Symbol::parse(tok).map_err(|_| bad(tok))?);
        }
        let alphabet = Alphabet::new(syms.iter().cloned());
        if alphabet.len() != syms.len() {
            return Err(bad(&alpha_line));
        }
        let k = alphabet.classes();
        let mut accept = vec![false; states];
        for f in finals.split_whitespace() {
            let q: usize = f.parse().map_err(|_| bad(f))?;
            *accept.get_mut(q).ok_or_else(|| bad(f))? = true;
        }
        let mut trans = vec![u32::MAX; states * k];
        let mut expected = 0usize;
        loop {
            let save = rest;
            let Some(line) = next_line(&mut rest) else { break };
            let parts: Vec<&str> = line.split_whitespace().collect();
            let parsed = match parts.as_slice() {
                [q, label, r] => match (q.parse::<usize>(), r.parse::<u32>()) {
                    (Ok(q), Ok(r)) => Some((q, *label, r)),
                    _ => None,
                },
                _ => None,
            };
            match parsed {
                Some((q, OTHER_LABEL, r)) if q == expected && expected < states => {
                    if r as usize >= states {
                        return Err(bad(line));
                    }
                    trans[q * k..(q + 1) * k].fill(r);
                    expected += 1;
                }
                Some((q, label, r)) if expected > 0 && q == expected - 1 && label != OTHER_LABEL => {
                    let sym = Symbol::parse(label).map_err(|_| bad(line))?;
                    let c = alphabet.class_of(&sym);
                    if c == alphabet.other() || r as usize >= states {
                        return Err(bad(line));
                    }
                    trans[q * k + c] = r;
                }
                _ if expected == states => {
                    rest = save;
                    break;
                }
                _ => return Err(bad(line)),
            }
        }
        if expected != states || states == 0 || start as usize >= states {
            return Err(bad("incomplete table"));
        }
        let dfa = Dfa::from_table(alphabet, Table { classes: k, trans, accept, start });
        Ok((dfa, rest))
    }
}

fn next_line<'a>(rest: &mut &'a str) -> Option<&'a str> {
    let mut cur: &'a str = rest;
    loop {
        if cur.is_empty() {
            *rest = cur;
            return None;
        }
        let (line, tail) = cur.split_once('\n').unwrap_or((cur, ""));
        cur = tail;
        if !line.trim().is_empty() {
            *rest = cur;
            return Some(line);
        }
    }
}
