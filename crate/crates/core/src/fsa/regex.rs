use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use super::dfa::{Alphabet, Dfa};
use super::nfa::ClassNfa;
use super::table::{BoolOp, Table};
use super::{FsaError, DEFAULT_STATE_CAP};
use crate::tag::Symbol;

/// Regular expression over symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Regex {
    Symbol(Symbol),
    /// Any single symbol.
    Any,
    Epsilon,
    /// The empty language.
    Empty,
    Concat(Vec<Regex>),
    Union(Vec<Regex>),
    Star(Box<Regex>),
    Intersection(Vec<Regex>),
    Complement(Box<Regex>),
    Ref(String),
}

impl Regex {
    pub fn sym(s: Symbol) -> Regex {
        Regex::Symbol(s)
    }

    pub fn concat(parts: impl IntoIterator<Item = Regex>) -> Regex {
        let v: Vec<Regex> = parts.into_iter().collect();
        match v.len() {
            0 => Regex::Epsilon,
            1 => v.into_iter().next().unwrap(),
            _ => Regex::Concat(v),
        }
    }

    pub fn union(parts: impl IntoIterator<Item = Regex>) -> Regex {
        let v: Vec<Regex> = parts.into_iter().collect();
        match v.len() {
            0 => Regex::Empty,
            1 => v.into_iter().next().unwrap(),
            _ => Regex::Union(v),
        }
    }

    pub fn intersection(parts: impl IntoIterator<Item = Regex>) -> Regex {
        let v: Vec<Regex> = parts.into_iter().collect();
        match v.len() {
            0 => Regex::star(Regex::Any),
            1 => v.into_iter().next().unwrap(),
            _ => Regex::Intersection(v),
        }
    }

    pub fn star(r: Regex) -> Regex {
        Regex::Star(Box::new(r))
    }

    pub fn complement(r: Regex) -> Regex {
        Regex::Complement(Box::new(r))
    }

    pub fn reference(name: impl Into<String>) -> Regex {
        Regex::Ref(name.into())
    }

    /// Σ*: every string.
    pub fn any_string() -> Regex {
        Regex::star(Regex::Any)
    }

    pub fn children(&self) -> &[Regex] {
        match self {
            Regex::Concat(v) | Regex::Union(v) | Regex::Intersection(v) => v,
            Regex::Star(r) | Regex::Complement(r) => std::slice::from_ref(r),
            _ => &[],
        }
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(Regex::depth).max().unwrap_or(0)
    }
}

impl fmt::Display for Regex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn join(f: &mut fmt::Formatter<'_>, v: &[Regex], sep: &str) -> fmt::Result {
            f.write_str("(")?;
            for (i, r) in v.iter().enumerate() {
                if i > 0 {
                    f.write_str(sep)?;
                }
                write!(f, "{r}")?;
            }
            f.write_str(")")
        }
        match self {
            Regex::Symbol(s) => write!(f, "{s}"),
            Regex::Any => f.write_str("?"),
            Regex::Epsilon => f.write_str("0"),
            Regex::Empty => f.write_str("~(?*)"),
            Regex::Concat(v) => join(f, v, " "),
            Regex::Union(v) => join(f, v, " | "),
            Regex::Intersection(v) => join(f, v, " & "),
            Regex::Star(r) => write!(f, "({r})*"),
            Regex::Complement(r) => write!(f, "~({r})"),
            Regex::Ref(n) => f.write_str(n),
        }
    }
}

/// Named expressions that [`Regex::Ref`] resolves against, plus an optional
/// declared symbol inventory.
#[derive(Clone, Debug, Default)]
pub struct Definitions {
    defs: BTreeMap<String, Regex>,
    declared: Option<BTreeSet<Symbol>>,
}

impl Definitions {
    pub fn new() -> Definitions {
        Definitions::default()
    }

    pub fn define(&mut self, name: impl Into<String>, regex: Regex) -> Option<Regex> {
        self.defs.insert(name.into(), regex)
    }

    pub fn get(&self, name: &str) -> Option<&Regex> {
        self.defs.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.defs.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.defs.keys().map(String::as_str)
    }

    /// Restricts symbol literals to this inventory.
    pub fn declare(&mut self, symbols: impl IntoIterator<Item = Symbol>) {
        self.declared.get_or_insert_with(BTreeSet::new).extend(symbols);
    }

    pub fn declared(&self) -> Option<&BTreeSet<Symbol>> {
        self.declared.as_ref()
    }

    /// Checks references resolve and do not loop; collects literal symbols.
    pub(crate) fn collect(&self, re: &Regex, out: &mut BTreeSet<Symbol>) -> Result<(), FsaError> {
        let mut visiting = Vec::new();
        let mut done = BTreeSet::new();
        self.collect_inner(re, out, &mut visiting, &mut done)
    }

    fn collect_inner(
        &self,
        re: &Regex,
        out: &mut BTreeSet<Symbol>,
        visiting: &mut Vec<String>,
        done: &mut BTreeSet<String>,
    ) -> Result<(), FsaError> {
        match re {
            Regex::Symbol(s) => {
                if let Some(decl) = &self.declared {
                    if !decl.contains(s) {
                        return Err(FsaError::UndeclaredSymbol(s.clone()));
                    }
                }
                out.insert(s.clone());
            }
            Regex::Ref(name) => {
                if done.contains(name) {
                    return Ok(());
                }
                if visiting.contains(name) {
                    return Err(FsaError::CyclicDefinition(name.clone()));
                }
                let body = self.defs.get(name).ok_or_else(|| FsaError::UnknownRef(name.clone()))?;
                visiting.push(name.clone());
                self.collect_inner(body, out, visiting, done)?;
                visiting.pop();
                done.insert(name.clone());
            }
            other => {
                for c in other.children() {
                    self.collect_inner(c, out, visiting, done)?;
                }
            }
        }
        Ok(())
    }
}

/// Compiles a family of expressions over one shared alphabet so their
/// tables can be combined column for column.
pub(crate) struct Compiler<'d> {
    defs: &'d Definitions,
    alphabet: Alphabet,
    cap: usize,
    memo: HashMap<String, Table>,
}

impl<'d> Compiler<'d> {
    pub fn new<'r>(
        defs: &'d Definitions,
        roots: impl IntoIterator<Item = &'r Regex>,
        cap: usize,
    ) -> Result<Compiler<'d>, FsaError> {
        let mut syms = BTreeSet::new();
        for r in roots {
            defs.collect(r, &mut syms)?;
        }
        Ok(Compiler { defs, alphabet: Alphabet::new(syms), cap, memo: HashMap::new() })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn table(&mut self, re: &Regex) -> Result<Table, FsaError> {
        let k = self.alphabet.classes();
        let t = match re {
            Regex::Symbol(s) => {
                let c = self.alphabet.class_of(s);
                Table::single_step(k, |x| x == c)
            }
            Regex::Any => Table::single_step(k, |_| true),
            Regex::Epsilon => Table {
                classes: k,
                trans: [vec![1u32; k], vec![1u32; k]].concat(),
                accept: vec![true, false],
                start: 0,
            },
            Regex::Empty => Table::trivial(k, false),
            Regex::Concat(v) => {
                let mut acc = self.table(&v[0])?;
                for r in &v[1..] {
                    let next = self.table(r)?;
                    acc = concat(&acc, &next, self.cap)?;
                }
                acc
            }
            Regex::Union(v) | Regex::Intersection(v) => {
                let op = if matches!(re, Regex::Union(_)) { BoolOp::Or } else { BoolOp::And };
                let mut acc = self.table(&v[0])?;
                for r in &v[1..] {
                    let next = self.table(r)?;
                    acc = acc.product(&next, op, self.cap)?.minimize();
                }
                acc
            }
            Regex::Star(r) => {
                let inner = self.table(r)?;
                star(&inner, self.cap)?
            }
            Regex::Complement(r) => self.table(r)?.complement(),
            Regex::Ref(name) => {
                if let Some(t) = self.memo.get(name) {
                    return Ok(t.clone());
                }
                let body = self.defs.get(name).ok_or_else(|| FsaError::UnknownRef(name.clone()))?;
                let t = self.table(body)?;
                self.memo.insert(name.clone(), t.clone());
                t
            }
        };
        Ok(t.minimize())
    }

    pub fn dfa(&mut self, re: &Regex) -> Result<Dfa, FsaError> {
        let t = self.table(re)?;
        Ok(Dfa::from_table(self.alphabet.clone(), t))
    }
}

pub(crate) fn concat(a: &Table, b: &Table, cap: usize) -> Result<Table, FsaError> {
    let mut n = ClassNfa::new(a.classes);
    let (sa, finals) = n.embed_with_finals(a);
    let sb = n.embed(b, true);
    for f in finals {
        n.eps[f as usize].push(sb);
    }
    n.start = sa;
    Ok(n.determinize(cap)?.minimize())
}

pub(crate) fn star(a: &Table, cap: usize) -> Result<Table, FsaError> {
    let mut n = ClassNfa::new(a.classes);
    let s0 = n.add_state(true);
    let (sa, finals) = n.embed_with_finals(a);
    n.eps[s0 as usize].push(sa);
    for f in finals {
        n.eps[f as usize].push(s0);
    }
    n.start = s0;
    Ok(n.determinize(cap)?.minimize())
}

/// Compiles `regex` to a minimal [`Dfa`] with the default state cap.
pub fn compile(regex: &Regex, defs: &Definitions) -> Result<Dfa, FsaError> {
    compile_with_cap(regex, defs, DEFAULT_STATE_CAP)
}

pub fn compile_with_cap(regex: &Regex, defs: &Definitions, cap: usize) -> Result<Dfa, FsaError> {
    Compiler::new(defs, [regex], cap)?.dfa(regex)
}
