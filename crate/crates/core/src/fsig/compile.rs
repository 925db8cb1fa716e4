//! Implication rules to automata, and the compiled-grammar archive.

use std::fmt::Write as _;

use super::dsl::{FsigGrammar, ImplicationRule};
use super::FsigError;
use crate::fsa::table::{BoolOp, Table};
use crate::fsa::{concat_tables, ClassNfa, Compiler, Definitions, Dfa, FsaError};

fn concat_all(parts: &[&Table], cap: usize) -> Result<Table, FsaError> {
    let mut acc = parts[0].clone();
    for p in &parts[1..] {
        acc = concat_tables(&acc, p, cap)?;
    }
    Ok(acc)
}

/// Compiles `X => LC1 _ RC1, ...` to the language of strings in which every
/// occurrence of X has, for some i, a prefix ending in LCi and a suffix
/// starting with RCi.
///
/// Candidate occurrences are bracketed with two marker symbols outside the
/// alphabet; bracketings whose surroundings match no context are the bad
/// ones, and erasing the markers from them yields exactly the strings the
/// rule forbids.
pub fn compile_rule(rule: &ImplicationRule, defs: &Definitions, cap: usize) -> Result<Dfa, FsigError> {
    let wrap = |source: FsaError| FsigError::Rule { name: rule.name.clone(), source };
    let mut comp = Compiler::new(defs, rule.regexes(), cap).map_err(wrap)?;
    let x = comp.table(&rule.x).map_err(wrap)?;
    if x.is_empty() {
        return Err(FsigError::EmptyTarget(rule.name.clone()));
    }
    let k = comp.alphabet().classes();
    let (open_class, close_class) = (k, k + 1);
    let lift = |t: &Table| t.with_extra_classes(2);
    let sigma = lift(&Table::trivial(k, true));
    let open = Table::single_step(k + 2, |c| c == open_class);
    let close = Table::single_step(k + 2, |c| c == close_class);

    let occurrences = concat_all(&[&sigma, &open, &lift(&x), &close, &sigma], cap).map_err(wrap)?;
    let mut good: Option<Table> = None;
    for (lc, rc) in &rule.contexts {
        let lc = lift(&comp.table(lc).map_err(wrap)?);
        let rc = lift(&comp.table(rc).map_err(wrap)?);
        let g = concat_all(&[&sigma, &lc, &open, &sigma, &close, &rc, &sigma], cap).map_err(wrap)?;
        good = Some(match good {
            None => g,
            Some(acc) => acc.product(&g, BoolOp::Or, cap).map_err(wrap)?.minimize(),
        });
    }
    let good = good.unwrap_or_else(|| Table::trivial(k + 2, false));
    let bad = occurrences.product(&good.complement(), BoolOp::And, cap).map_err(wrap)?.minimize();

    // erase the markers
    let mut n = ClassNfa::new(k);
    for q in 0..bad.states() {
        n.add_state(bad.accept[q]);
    }
    n.start = bad.start;
    for q in 0..bad.states() as u32 {
        for c in 0..k + 2 {
            let r = bad.next(q, c);
            if c < k {
                n.edges[q as usize].push((c as u32, r));
            } else {
                n.eps[q as usize].push(r);
            }
        }
    }
    let forbidden = n.determinize(cap).map_err(wrap)?;
    Ok(Dfa::from_table(comp.alphabet().clone(), forbidden.complement()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompiledRule {
    pub name: String,
    pub dfa: Dfa,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CompiledGrammar {
    pub rules: Vec<CompiledRule>,
    pub rankers: Vec<CompiledRule>,
}

const ARCHIVE_HEADER: &str = "rtag-fsig-archive 1";

pub fn is_archive(text: &str) -> bool {
    text.lines().next().map(str::trim) == Some(ARCHIVE_HEADER)
}

/// Compiles every rule and ranker, collecting all failures.
pub fn compile_grammar(grammar: &FsigGrammar, cap: usize) -> Result<CompiledGrammar, Vec<FsigError>> {
    let mut errors = Vec::new();
    let mut compile_all = |rules: &[ImplicationRule]| -> Vec<CompiledRule> {
        rules
            .iter()
            .filter_map(|r| match compile_rule(r, &grammar.definitions, cap) {
                Ok(dfa) => Some(CompiledRule { name: r.name.clone(), dfa }),
                Err(e) => {
                    errors.push(e);
                    None
                }
            })
            .collect()
    };
    let rules = compile_all(&grammar.rules);
    let rankers = compile_all(&grammar.rankers);
    if errors.is_empty() {
        Ok(CompiledGrammar { rules, rankers })
    } else {
        Err(errors)
    }
}

impl CompiledGrammar {
    /// Text archive: a header, then each rule's name and transition dump.
    pub fn to_archive(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{ARCHIVE_HEADER}");
        for (kw, list) in [("rule", &self.rules), ("rank", &self.rankers)] {
            for r in list {
                let _ = writeln!(out, "{kw} {}", r.name);
                out.push_str(&r.dfa.dump());
            }
        }
        out
    }

    pub fn from_archive(text: &str) -> Result<CompiledGrammar, FsigError> {
        let bad = |msg: String| FsigError::Archive(msg);
        let mut lines = text.splitn(2, '\n');
        if lines.next().map(str::trim) != Some(ARCHIVE_HEADER) {
            return Err(bad("missing archive header".into()));
        }
        let mut rest = lines.next().unwrap_or("");
        let mut g = CompiledGrammar::default();
        loop {
            let trimmed = rest.trim_start();
            if trimmed.is_empty() {
                break;
            }
            let (head, tail) = trimmed.split_once('\n').unwrap_or((trimmed, ""));
            let (kw, name) = head.trim().split_once(' ').ok_or_else(|| bad(format!("bad entry {head:?}")))?;
            let (dfa, after) = Dfa::parse_dump(tail).map_err(|e| bad(e.to_string()))?;
            let entry = CompiledRule { name: name.trim().to_string(), dfa };
            match kw {
                "rule" => g.rules.push(entry),
                "rank" => g.rankers.push(entry),
                _ => return Err(bad(format!("bad entry {head:?}"))),
            }
            rest = after;
        }
        Ok(g)
    }
}
