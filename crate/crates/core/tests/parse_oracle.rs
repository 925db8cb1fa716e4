mod support;

use rtag_core::fsa::Dfa;
use rtag_core::fsig::{self, CompiledGrammar, CompiledRule, ParseCaps, ParseStatus};
use rtag_core::tag::{reading_product, resolve_strings, Sentence};
use support::criteria;
use support::*;

#[test]
fn survivors_match_filtered_resolutions() {
    criteria::parse_vs_filter(31, 60, 20).unwrap();
}

fn sentence(text: &str) -> Sentence {
    rtag_core::tag::parse_cohort_stream(text).unwrap().remove(0)
}

#[test]
fn sentence_automaton_is_exactly_the_resolutions() {
    let mut r = rng(32);
    for _ in 0..200 {
        let s = random_sentence(&mut r, 5, 3, 3, true);
        let d = fsig::encode_sentence(&s);
        let mut want = resolve_strings(&s, u128::MAX).unwrap();
        want.sort();
        want.dedup();
        assert_eq!(d.count(), Some(want.len() as u128));
        assert!(want.len() as u128 <= reading_product(&s));
        for w in &want {
            assert!(d.accepts(w));
        }
    }
}

#[test]
fn overflow_when_too_many_survive() {
    let s = sentence("\"<a>\"\n\t\"a\" N\n\t\"a\" V\n\"<b>\"\n\t\"b\" N\n\t\"b\" V\n\t\"b\" A\n\t@BOUNDARIES: @@\n");
    let d = fsig::encode_sentence(&s);
    let empty = CompiledGrammar::default();
    let r = fsig::parse(&d, &empty, ParseCaps { state_cap: 1000, enum_cap: 5 });
    assert_eq!(r.status, ParseStatus::Overflow);
    assert!(r.survivors.is_empty());
    let r = fsig::parse(&d, &empty, ParseCaps { state_cap: 1000, enum_cap: 6 });
    assert_eq!(r.status, ParseStatus::Ambiguous);
    assert_eq!(r.survivors.len(), 6);
}

#[test]
fn folding_keeps_only_surviving_readings() {
    let s = sentence("\"<a>\"\n\t\"a\" N\n\t\"a\" V\n\"<b>\"\n\t\"b\" N\n\t\"b\" V\n\t@BOUNDARIES: @@\n");
    let all = resolve_strings(&s, 100).unwrap();
    let keep: Vec<_> = all.into_iter().filter(|w| w.iter().any(|x| x.to_string() == "V")).take(1).collect();
    let folded = fsig::fold_survivors(&s, &keep).unwrap();
    assert_eq!(folded.total_readings(), 2);
    let rule = CompiledRule { name: "none".into(), dfa: Dfa::empty_language() };
    let grammar = CompiledGrammar { rules: vec![rule], rankers: Vec::new() };
    assert_eq!(fsig::parse(&fsig::encode_sentence(&s), &grammar, ParseCaps::default()).status, ParseStatus::Empty);
}
