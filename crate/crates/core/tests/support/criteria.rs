//! Randomised checks shared by the core integration tests (at reduced
//! size) and the acceptance target (at full size). Each returns a short
//! summary on success and a counterexample on failure.

use std::collections::BTreeSet;

use rand::prelude::*;
use rtag_core::cg::{self, TierSelection};
use rtag_core::fsa::{compile, Definitions, Dfa, Nfa, Regex, DEFAULT_STATE_CAP};
use rtag_core::fsig::{self, compile_rule, CompiledGrammar, CompiledRule, FsigError, ImplicationRule, ParseCaps, ParseStatus};
use rtag_core::tag::{reading_product, resolve_strings, Symbol, SymbolString};

use super::*;

fn show(w: &[Symbol]) -> String {
    if w.is_empty() {
        return "<empty>".into();
    }
    w.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")
}

/// Five symbols; rules only mention the first four, so the fifth is
/// always read through the OTHER column.
pub fn five_symbols() -> Vec<Symbol> {
    syms(&["A", "B", "C", "D", "E"])
}

fn rule_symbols() -> Vec<Symbol> {
    syms(&["A", "B", "C", "D"])
}

// ---------------------------------------------------------------------------
// compile_rule against the factorisation oracle

fn dfs_compare(
    dfa: &Dfa,
    oracle: &mut RuleOracle,
    alphabet: &[Symbol],
    q: u32,
    word: &mut Vec<Symbol>,
    max_len: usize,
    checked: &mut u64,
) -> Result<(), String> {
    *checked += 1;
    let expected = oracle.current_ok();
    if dfa.is_accepting(q) != expected {
        return Err(format!("on {:?}: automaton says {}, oracle says {expected}", show(word), !expected));
    }
    if word.len() == max_len {
        return Ok(());
    }
    for s in alphabet {
        word.push(s.clone());
        oracle.push_symbol(s);
        let r = dfs_compare(dfa, oracle, alphabet, dfa.step(q, s), word, max_len, checked);
        oracle.pop_symbol();
        word.pop();
        r?;
    }
    Ok(())
}

/// Compiles `rules` random rules and compares each with the oracle on every
/// string of length at most `max_len` over five symbols.
pub fn restriction_vs_oracle(seed: u64, rules: usize, max_len: usize) -> Result<String, String> {
    let mut r = rng(seed);
    let alphabet = five_symbols();
    let defs = Definitions::new();
    let (mut done, mut skipped, mut checked) = (0, 0, 0u64);
    let mut accepted_somewhere = 0;
    while done < rules {
        let name = format!("R{done}");
        let rule = if r.gen_bool(0.6) { shaped_rule(&mut r, &rule_symbols(), &name) } else { random_rule(&mut r, &rule_symbols(), 2, &name) };
        let dfa = match compile_rule(&rule, &defs, DEFAULT_STATE_CAP) {
            Ok(d) => d,
            Err(FsigError::EmptyTarget(_)) => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(format!("rule {} failed to compile: {e}", describe(&rule))),
        };
        let mut oracle = RuleOracle::new(&rule, &defs);
        let mut word = Vec::new();
        dfs_compare(&dfa, &mut oracle, &alphabet, dfa.start(), &mut word, max_len, &mut checked)
            .map_err(|e| format!("rule {}: {e}", describe(&rule)))?;
        if !dfa.is_empty() && dfa != Dfa::universal() {
            accepted_somewhere += 1;
        }
        done += 1;
    }
    Ok(format!(
        "{done} rules, {checked} strings, {accepted_somewhere} non-trivial, {skipped} empty targets redrawn"
    ))
}

pub fn describe(rule: &ImplicationRule) -> String {
    let ctx: Vec<String> = rule.contexts.iter().map(|(l, r)| format!("{l} _ {r}")).collect();
    format!("{}: {} => {}", rule.name, rule.x, ctx.join(" , "))
}

// ---------------------------------------------------------------------------
// Parsing against filtering the resolved strings

fn pick(r: &mut impl Rng, alphabet: &[Symbol]) -> Regex {
    Regex::sym(alphabet.choose(r).unwrap().clone())
}

fn context_side(r: &mut impl Rng, alphabet: &[Symbol]) -> Regex {
    match r.gen_range(0..6) {
        0 => Regex::Epsilon,
        1 => Regex::concat([pick(r, alphabet), Regex::any_string()]),
        2 => Regex::concat([Regex::any_string(), pick(r, alphabet)]),
        3 => Regex::complement(Regex::concat([Regex::any_string(), pick(r, alphabet), Regex::any_string()])),
        _ => random_regex(r, alphabet, 2),
    }
}

/// Rules shaped like grammar rules: a one- or two-symbol target and
/// contexts that often anchor on a single symbol.
fn shaped_rule(r: &mut impl Rng, alphabet: &[Symbol], name: &str) -> ImplicationRule {
    let x = match r.gen_range(0..4) {
        0 => Regex::concat([pick(r, alphabet), Regex::Any]),
        1 => Regex::union([pick(r, alphabet), pick(r, alphabet)]),
        _ => pick(r, alphabet),
    };
    let n = r.gen_range(1..=3);
    let contexts = (0..n).map(|_| (context_side(r, alphabet), context_side(r, alphabet))).collect();
    ImplicationRule::new(name, x, contexts)
}

fn sentence_rule(r: &mut impl Rng, name: &str) -> ImplicationRule {
    shaped_rule(r, &sentence_alphabet(), name)
}

fn compiled_pool(r: &mut impl Rng, n: usize, prefix: &str) -> Vec<(ImplicationRule, CompiledRule)> {
    let defs = Definitions::new();
    let mut out = Vec::new();
    while out.len() < n {
        let rule = sentence_rule(r, &format!("{prefix}{}", out.len()));
        if let Ok(dfa) = compile_rule(&rule, &defs, DEFAULT_STATE_CAP) {
            out.push((rule.clone(), CompiledRule { name: rule.name.clone(), dfa }));
        }
    }
    out
}

/// Parses `sentences` random sentences, each under a random selection from
/// a pool of `pool` random rules (plus occasional rankers), and compares
/// the survivors with the resolved strings that every rule's oracle
/// accepts.
pub fn parse_vs_filter(seed: u64, sentences: usize, pool: usize) -> Result<String, String> {
    let mut r = rng(seed);
    let defs = Definitions::new();
    let rules = compiled_pool(&mut r, pool, "R");
    let rankers = compiled_pool(&mut r, 5, "K");
    let caps = ParseCaps { state_cap: DEFAULT_STATE_CAP, enum_cap: 1_000_000 };
    let (mut nonempty, mut ambiguous, mut ranked, mut strings_seen) = (0, 0, 0, 0usize);
    let mut used = BTreeSet::new();
    for case in 0..sentences {
        let s = loop {
            let s = random_sentence(&mut r, 8, 3, 2, true);
            if reading_product(&s) <= 1500 {
                break s;
            }
        };
        let picked: Vec<usize> = if case % 10 == 9 {
            (0..pool).collect()
        } else {
            let k = r.gen_range(1..=3);
            rand::seq::index::sample(&mut r, pool, k).into_vec()
        };
        let rk: Vec<usize> = if r.gen_bool(0.3) { vec![r.gen_range(0..rankers.len())] } else { Vec::new() };
        used.extend(picked.iter().copied());
        let grammar = CompiledGrammar {
            rules: picked.iter().map(|&i| rules[i].1.clone()).collect(),
            rankers: rk.iter().map(|&i| rankers[i].1.clone()).collect(),
        };

        let resolved: Vec<SymbolString> = resolve_strings(&s, u128::MAX).unwrap();
        strings_seen += resolved.len();
        let encoded = fsig::encode_sentence(&s);
        let mut lang = encoded.enumerate(1_000_000).map_err(|e| format!("case {case}: {e}"))?;
        lang.sort();
        let mut expected_lang = resolved.clone();
        expected_lang.sort();
        expected_lang.dedup();
        if lang != expected_lang {
            return Err(format!("case {case}: sentence automaton language differs from resolve_strings"));
        }

        let mut oracles: Vec<RuleOracle> = picked.iter().map(|&i| RuleOracle::new(&rules[i].0, &defs)).collect();
        let expected: BTreeSet<SymbolString> =
            resolved.into_iter().filter(|w| oracles.iter_mut().all(|o| o.accepts(w))).collect();
        let mut preferred_expected = expected.clone();
        if expected.len() > 1 {
            for &i in &rk {
                let mut o = RuleOracle::new(&rankers[i].0, &defs);
                let kept: BTreeSet<SymbolString> = preferred_expected.iter().filter(|w| o.accepts(w)).cloned().collect();
                if !kept.is_empty() {
                    preferred_expected = kept;
                }
            }
        }

        let result = fsig::parse(&encoded, &grammar, caps);
        let want = match expected.len() {
            0 => ParseStatus::Empty,
            1 => ParseStatus::Unique,
            _ => ParseStatus::Ambiguous,
        };
        if result.status != want {
            return Err(format!("case {case}: status {:?}, expected {want:?}", result.status));
        }
        let got: BTreeSet<SymbolString> = result.survivors.iter().cloned().collect();
        if got.len() != result.survivors.len() || got != expected {
            return Err(format!(
                "case {case}: {} survivors, oracle keeps {} (rules {:?})",
                result.survivors.len(),
                expected.len(),
                picked
            ));
        }
        let pref: BTreeSet<SymbolString> = result.preferred_strings().iter().cloned().collect();
        if pref != preferred_expected {
            return Err(format!("case {case}: preferred set differs from the ranker cascade"));
        }
        let (p, rest) = result.survivors.split_at(result.preferred);
        if !p.windows(2).all(|w| w[0] < w[1]) || !rest.windows(2).all(|w| w[0] < w[1]) {
            return Err(format!("case {case}: survivors are not listed in order"));
        }
        if !expected.is_empty() {
            nonempty += 1;
            if expected.len() > 1 {
                ambiguous += 1;
            }
            if pref.len() < expected.len() {
                ranked += 1;
            }
            let folded = fsig::fold_survivors(&s, result.preferred_strings()).map_err(|e| format!("case {case}: {e}"))?;
            for (a, b) in folded.cohorts().iter().zip(s.cohorts()) {
                if a.readings().is_empty() || !a.readings().iter().all(|x| b.readings().contains(x)) {
                    return Err(format!("case {case}: folding invented or emptied a cohort"));
                }
            }
        }
    }
    if used.len() != pool {
        return Err(format!("only {} of {pool} pool rules were exercised", used.len()));
    }
    Ok(format!(
        "{sentences} sentences, {strings_seen} resolved strings, {nonempty} with parses, {ambiguous} ambiguous, {ranked} narrowed by rankers"
    ))
}

// ---------------------------------------------------------------------------
// Constraint grammar safety

pub fn cg_safety(seed: u64, pairs: usize) -> Result<String, String> {
    let mut r = rng(seed);
    let (mut removed, mut max_passes) = (0usize, 0usize);
    for case in 0..pairs {
        let s = random_cg_sentence(&mut r);
        let src = random_cg_source(&mut r);
        let g = cg::load_cg_grammar(&src).map_err(|e| format!("case {case}: {e}\n{src}"))?;
        for tiers in [TierSelection::Strict, TierSelection::StrictThenHeuristic] {
            let (out, trace) = cg::apply_grammar_traced(&s, &g, tiers);
            let fail = |msg: &str| format!("case {case} ({tiers:?}): {msg}\n{src}");
            if out.len() != s.len() {
                return Err(fail("cohort count changed"));
            }
            for (a, b) in out.cohorts().iter().zip(s.cohorts()) {
                if a.readings().is_empty() {
                    return Err(fail("a cohort was emptied"));
                }
                let mut it = b.readings().iter();
                if !a.readings().iter().all(|x| it.any(|y| y == x)) {
                    return Err(fail("output readings are not a subsequence of the input"));
                }
            }
            let initial = s.total_readings();
            if trace.totals.first() != Some(&initial) || trace.totals.last() != Some(&out.total_readings()) {
                return Err(fail("trace totals do not match the sentences"));
            }
            if !trace.totals.windows(2).all(|w| w[1] <= w[0]) {
                return Err(fail(&format!("reading totals increased: {:?}", trace.totals)));
            }
            if trace.passes() > initial {
                return Err(fail(&format!("{} passes for {initial} readings", trace.passes())));
            }
            if cg::apply_grammar(&out, &g, tiers) != out {
                return Err(fail("result is not a fixpoint"));
            }
            removed += initial - out.total_readings();
            max_passes = max_passes.max(trace.passes());
        }
    }
    Ok(format!("{pairs} pairs, {removed} readings removed, at most {max_passes} passes"))
}

// ---------------------------------------------------------------------------
// Automaton algebra

fn random_dfa(r: &mut impl Rng) -> (Regex, Dfa) {
    let re = random_regex(r, &rule_symbols(), 3);
    let d = compile(&re, &Definitions::new()).expect("small expressions compile");
    (re, d)
}

pub fn de_morgan(seed: u64, cases: usize) -> Result<String, String> {
    let mut r = rng(seed);
    let cap = DEFAULT_STATE_CAP;
    for case in 0..cases {
        let (ra, a) = random_dfa(&mut r);
        let (rb, b) = random_dfa(&mut r);
        let lhs = a.union(&b, cap).unwrap().complement();
        let rhs = a.complement().intersect(&b.complement(), cap).unwrap();
        let lhs2 = a.intersect(&b, cap).unwrap().complement();
        let rhs2 = a.complement().union(&b.complement(), cap).unwrap();
        if !lhs.equivalent(&rhs) || !lhs2.equivalent(&rhs2) {
            return Err(format!("case {case}: De Morgan fails for {ra} and {rb}"));
        }
    }
    Ok(format!("{cases} pairs"))
}

pub fn boolean_ops_per_string(seed: u64, cases: usize, max_len: usize) -> Result<String, String> {
    let mut r = rng(seed);
    let words = all_strings(&five_symbols(), max_len);
    let defs = Definitions::new();
    for case in 0..cases {
        let (ra, a) = random_dfa(&mut r);
        let (rb, b) = random_dfa(&mut r);
        let i = a.intersect(&b, DEFAULT_STATE_CAP).unwrap();
        let u = a.union(&b, DEFAULT_STATE_CAP).unwrap();
        let c = a.complement();
        let mut m = Matcher::new();
        let (na, nb) = (m.add(&ra, &defs), m.add(&rb, &defs));
        for w in &words {
            m.load(w);
            let (ia, ib) = (m.accepts_current(na), m.accepts_current(nb));
            if a.accepts(w) != ia || b.accepts(w) != ib {
                return Err(format!("case {case}: compiled {ra} or {rb} disagrees with the oracle on {}", show(w)));
            }
            if i.accepts(w) != (ia && ib) || u.accepts(w) != (ia || ib) || c.accepts(w) == ia {
                return Err(format!("case {case}: boolean operation wrong on {} for {ra} and {rb}", show(w)));
            }
        }
    }
    Ok(format!("{cases} pairs x {} strings", words.len()))
}

/// Equal languages must give identical automata, and different ones must
/// be told apart by a short string.
pub fn canonical_minimization(seed: u64, cases: usize) -> Result<String, String> {
    let mut r = rng(seed);
    let defs = Definitions::new();
    let cap = DEFAULT_STATE_CAP;
    let mut distinguished = 0;
    for case in 0..cases {
        let (ra, a) = random_dfa(&mut r);
        let variants = [
            ("r | r", Regex::union([ra.clone(), ra.clone()])),
            ("r & r", Regex::intersection([ra.clone(), ra.clone()])),
            ("~~r", Regex::complement(Regex::complement(ra.clone()))),
            ("r | (A & B)", Regex::union([ra.clone(), Regex::intersection([Regex::sym(sym("A")), Regex::sym(sym("B"))])])),
            ("r 0", Regex::concat([ra.clone(), Regex::Epsilon])),
        ];
        for (what, v) in variants {
            let d = compile(&v, &defs).unwrap();
            if d != a || d.dump() != a.dump() {
                return Err(format!("case {case}: {what} is not identical to r for r = {ra}"));
            }
        }
        if a.complement().complement() != a {
            return Err(format!("case {case}: double complement changed {ra}"));
        }
        let text = a.dump();
        let (parsed, rest) = Dfa::parse_dump(&text).map_err(|e| e.to_string())?;
        if parsed != a || !rest.trim().is_empty() {
            return Err(format!("case {case}: dump round trip changed {ra}"));
        }
        let (rb, b) = random_dfa(&mut r);
        let same = a == b;
        let bound = a.state_count() + b.state_count();
        let mut alphabet: Vec<Symbol> = a.alphabet().symbols().iter().chain(b.alphabet().symbols()).cloned().collect();
        alphabet.sort();
        alphabet.dedup();
        alphabet.push(sym("E"));
        if bound <= 8 {
            let differs = all_strings(&alphabet, bound - 1).iter().any(|w| a.accepts(w) != b.accepts(w));
            if differs == same {
                return Err(format!("case {case}: structural equality {same} but languages differ: {differs} ({ra} vs {rb})"));
            }
            distinguished += 1;
        }
        let ab = a.intersect(&b, cap).unwrap().union(&a, cap).unwrap();
        if ab != a {
            return Err(format!("case {case}: (a & b) | a is not identical to a"));
        }
    }
    Ok(format!("{cases} cases, {distinguished} random pairs compared exhaustively"))
}

struct RandomNfa {
    nfa: Nfa,
    edges: Vec<(u32, Option<Symbol>, u32)>,
    accept: Vec<bool>,
}

fn random_nfa(r: &mut impl Rng) -> RandomNfa {
    let n = r.gen_range(1..=6);
    let labels = rule_symbols();
    let mut nfa = Nfa::new();
    let mut accept = vec![r.gen_bool(0.3)];
    nfa.set_accepting(0, accept[0]);
    for _ in 1..n {
        let a = r.gen_bool(0.3);
        nfa.add_state(a);
        accept.push(a);
    }
    let mut edges = Vec::new();
    for _ in 0..r.gen_range(0..=n * 3) {
        let from = r.gen_range(0..n) as u32;
        let to = r.gen_range(0..n) as u32;
        let label = if r.gen_bool(0.2) { None } else { Some(labels.choose(r).unwrap().clone()) };
        nfa.add_edge(from, label.clone(), to);
        edges.push((from, label, to));
    }
    RandomNfa { nfa, edges, accept }
}

fn simulate(n: &RandomNfa, w: &[Symbol]) -> bool {
    let closure = |mut set: BTreeSet<u32>| {
        loop {
            let more: Vec<u32> = n
                .edges
                .iter()
                .filter(|(f, l, t)| l.is_none() && set.contains(f) && !set.contains(t))
                .map(|e| e.2)
                .collect();
            if more.is_empty() {
                return set;
            }
            set.extend(more);
        }
    };
    let mut cur = closure(BTreeSet::from([0]));
    for s in w {
        let next = n.edges.iter().filter(|(f, l, _)| cur.contains(f) && l.as_ref() == Some(s)).map(|e| e.2).collect();
        cur = closure(next);
    }
    cur.iter().any(|&q| n.accept[q as usize])
}

pub fn determinization(seed: u64, cases: usize, max_len: usize) -> Result<String, String> {
    let mut r = rng(seed);
    let words = all_strings(&five_symbols(), max_len);
    for case in 0..cases {
        let n = random_nfa(&mut r);
        let d = n.nfa.determinize(DEFAULT_STATE_CAP).map_err(|e| e.to_string())?;
        for w in &words {
            if d.accepts(w) != simulate(&n, w) {
                return Err(format!("case {case}: determinised automaton disagrees on {}", show(w)));
            }
        }
    }
    Ok(format!("{cases} automata x {} strings", words.len()))
}

// ---------------------------------------------------------------------------
// Evaluation arithmetic

/// Rebuilds the reference tally (38,202 words, 67,737 readings, 31 errors)
/// from synthetic cohorts and checks the derived figures against plain
/// floating-point arithmetic.
pub fn reference_tally() -> Result<String, String> {
    use rtag_core::eval;
    use rtag_core::tag::{BoundarySet, Cohort, Reading};

    let reading = |t: &str| Reading::parse(&format!("\"w\" {t}")).unwrap();
    let cohort = |tags: &[&str]| Cohort::new("w", tags.iter().map(|t| reading(t)).collect(), BoundarySet::word()).unwrap();
    let (three, two, one, errors) = (14_636usize, 263usize, 23_303usize, 31usize);
    let mut output = Vec::new();
    let mut gold = Vec::new();
    for _ in 0..three {
        output.push(cohort(&["N", "V", "A"]));
        gold.push(cohort(&["N"]));
    }
    for _ in 0..two {
        output.push(cohort(&["N", "V"]));
        gold.push(cohort(&["V"]));
    }
    for i in 0..one {
        output.push(cohort(&["N"]));
        gold.push(cohort(&[if i < errors { "ADV" } else { "N" }]));
    }
    let m = eval::measure(&output, &gold).map_err(|e| e.to_string())?;
    let words = three + two + one;
    let readings = 3 * three + 2 * two + one;
    if (m.words, m.readings, m.errors) != (38_202, 67_737, 31) || (words, readings) != (38_202, 67_737) {
        return Err(format!("tally {} words, {} readings, {} errors", m.words, m.readings, m.errors));
    }
    let per_word = format!("{:.2}", readings as f64 / words as f64);
    let rate = format!("{:.2}%", 100.0 * errors as f64 / words as f64);
    let ambiguous = format!("{:.1}%", 100.0 * (three + two) as f64 / words as f64);
    let got = (m.readings_per_word(), m.error_rate(), m.ambiguous_percent(1));
    if got != (per_word.clone(), rate.clone(), ambiguous.clone()) || per_word != "1.77" || rate != "0.08%" {
        return Err(format!("got {got:?}, expected ({per_word}, {rate}, {ambiguous})"));
    }
    Ok(format!("{} readings/word, {} error rate, {} ambiguous", got.0, got.1, got.2))
}
