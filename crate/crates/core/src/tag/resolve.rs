use thiserror::Error;

use super::{Sentence, Symbol, SymbolString};

pub const DEFAULT_RESOLVE_CAP: u128 = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ResolveError {
    #[error("sentence has {count} linearisations, more than the cap of {cap}")]
    Overflow { count: u128, cap: u128 },
}

/// Number of fully disambiguated linearisations: the product over cohorts
/// of readings times boundary alternatives. Saturates at `u128::MAX`.
pub fn reading_product(sentence: &Sentence) -> u128 {
    let lead = sentence.leading().len() as u128;
    sentence.cohorts().iter().fold(lead, |acc, c| {
        acc.saturating_mul(c.readings().len() as u128).saturating_mul(c.trailing().len() as u128)
    })
}

/// Every linearisation of the sentence: leading boundary, then for each
/// cohort one reading's symbols followed by one trailing boundary.
///
/// Strings come out in choice order (readings as stored, boundaries in
/// canonical order), not sorted.
pub fn resolve_strings(sentence: &Sentence, cap: u128) -> Result<Vec<SymbolString>, ResolveError> {
    let count = reading_product(sentence);
    if count > cap {
        return Err(ResolveError::Overflow { count, cap });
    }
    let mut out: Vec<SymbolString> = sentence.leading().iter().map(|b| vec![Symbol::boundary(b)]).collect();
    for cohort in sentence.cohorts() {
        let mut next = Vec::with_capacity(out.len() * cohort.readings().len() * cohort.trailing().len());
        for prefix in &out {
            for r in cohort.readings() {
                for b in cohort.trailing().iter() {
                    let mut s = prefix.clone();
                    s.extend(r.symbols().cloned());
                    s.push(Symbol::boundary(b));
                    next.push(s);
                }
            }
        }
        out = next;
    }
    Ok(out)
}
