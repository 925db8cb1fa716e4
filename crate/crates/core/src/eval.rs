//! Tagging metrics against a gold corpus, and agreement between two
//! annotations of the same text.
//!
//! Comparison happens at the morphological level: base form and
//! morphological tags, with syntactic tags ignored.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::tag::{parse_cohorts, Cohort, Reading, StreamError, Symbol};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error(transparent)]
    Stream(#[from] StreamError),
    #[error("word {position}: expected {expected:?}, found {found:?}")]
    Misaligned { position: usize, expected: String, found: String },
}

type MorphReading = (Symbol, Vec<Symbol>);

fn morph_set(c: &Cohort) -> BTreeSet<MorphReading> {
    c.readings().iter().map(|r: &Reading| (r.baseform().clone(), r.morph_tags().to_vec())).collect()
}

fn align(a: &[Cohort], b: &[Cohort]) -> Result<(), EvalError> {
    for (i, (x, y)) in a.iter().zip(b).enumerate() {
        if x.surface() != y.surface() {
            return Err(EvalError::Misaligned {
                position: i + 1,
                expected: y.surface().to_string(),
                found: x.surface().to_string(),
            });
        }
    }
    if a.len() != b.len() {
        let n = a.len().min(b.len());
        let show = |v: &[Cohort]| v.get(n).map_or("<end>".to_string(), |c| c.surface().to_string());
        return Err(EvalError::Misaligned { position: n + 1, expected: show(b), found: show(a) });
    }
    Ok(())
}

/// Corpus-level counts; every cohort, punctuation included, is a word.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StageMetrics {
    pub words: u64,
    pub ambiguous: u64,
    pub readings: u64,
    pub errors: u64,
}

/// Formats `num / den * 10^shift` to `decimals` places, rounding half up.
pub fn ratio(num: u64, den: u64, shift: u32, decimals: u32) -> String {
    if den == 0 {
        return "n/a".to_string();
    }
    let scale = 10u128.pow(decimals);
    let scaled = (2 * num as u128 * 10u128.pow(shift) * scale + den as u128) / (2 * den as u128);
    if decimals == 0 {
        return scaled.to_string();
    }
    format!("{}.{:0width$}", scaled / scale, scaled % scale, width = decimals as usize)
}

/// `67737` as `67,737`.
pub fn thousands(n: u64) -> String {
    let s = n.to_string();
    let mut out = String::new();
    for (i, ch) in s.chars().enumerate() {
        if i > 0 && (s.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(ch);
    }
    out
}

impl StageMetrics {
    pub fn merge(self, other: StageMetrics) -> StageMetrics {
        StageMetrics {
            words: self.words + other.words,
            ambiguous: self.ambiguous + other.ambiguous,
            readings: self.readings + other.readings,
            errors: self.errors + other.errors,
        }
    }

    pub fn ambiguous_percent(&self, decimals: u32) -> String {
        format!("{}%", ratio(self.ambiguous, self.words, 2, decimals))
    }

    pub fn readings_per_word(&self) -> String {
        ratio(self.readings, self.words, 0, 2)
    }

    pub fn error_rate(&self) -> String {
        format!("{}%", ratio(self.errors, self.words, 2, 2))
    }

    /// `stage TAB metric TAB value` lines.
    pub fn machine_lines(&self, stage: &str) -> String {
        let mut out = String::new();
        for (k, v) in [
            ("words", self.words.to_string()),
            ("ambiguous_words", self.ambiguous.to_string()),
            ("ambiguous_fraction", self.ambiguous_percent(2)),
            ("readings", self.readings.to_string()),
            ("readings_per_word", self.readings_per_word()),
            ("errors", self.errors.to_string()),
            ("error_rate", self.error_rate()),
        ] {
            let _ = writeln!(out, "{stage}\t{k}\t{v}");
        }
        out
    }
}

/// Compares an output corpus with gold. A word is an error when none of its
/// gold readings survives in the output.
pub fn measure(output: &[Cohort], gold: &[Cohort]) -> Result<StageMetrics, EvalError> {
    align(output, gold)?;
    let mut m = StageMetrics::default();
    for (o, g) in output.iter().zip(gold) {
        let os = morph_set(o);
        m.words += 1;
        m.readings += os.len() as u64;
        if os.len() > 1 {
            m.ambiguous += 1;
        }
        if morph_set(g).is_disjoint(&os) {
            m.errors += 1;
        }
    }
    Ok(m)
}

pub fn measure_streams(output: &str, gold: &str) -> Result<StageMetrics, EvalError> {
    measure(&parse_cohorts(output)?, &parse_cohorts(gold)?)
}

/// Report table, one row per labelled stage, columns aligned.
pub fn report_table(rows: &[(String, StageMetrics)]) -> String {
    let header = ["", "ambiguous words", "readings", "readings/word", "errors", "error rate"].map(String::from);
    let mut table: Vec<[String; 6]> = vec![header];
    for (label, m) in rows {
        table.push([
            label.clone(),
            m.ambiguous_percent(1),
            thousands(m.readings),
            m.readings_per_word(),
            thousands(m.errors),
            m.error_rate(),
        ]);
    }
    let widths: Vec<usize> = (0..6).map(|c| table.iter().map(|r| r[c].chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in &table {
        let mut line = format!("{:<w$}", row[0], w = widths[0]);
        for c in 1..6 {
            let _ = write!(line, "  {:>w$}", row[c], w = widths[c]);
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disagreement {
    /// 1-based word position.
    pub position: usize,
    pub surface: String,
    pub a: Vec<String>,
    pub b: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffReport {
    pub words: u64,
    pub disagreements: Vec<Disagreement>,
}

impl DiffReport {
    pub fn agreement_percent(&self) -> String {
        let agree = self.words - self.disagreements.len() as u64;
        if self.words == 0 {
            return "100.00%".to_string();
        }
        format!("{}%", ratio(agree, self.words, 2, 2))
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let agree = self.words - self.disagreements.len() as u64;
        let _ = writeln!(out, "agreement\t{}\t{agree}/{}", self.agreement_percent(), self.words);
        for d in &self.disagreements {
            let _ = writeln!(out, "{}\t{}\t{}\t{}", d.position, d.surface, d.a.join(" | "), d.b.join(" | "));
        }
        out
    }
}

fn show(set: &BTreeSet<MorphReading>) -> Vec<String> {
    set.iter()
        .map(|(b, tags)| {
            let mut s = b.to_string();
            for t in tags {
                s.push(' ');
                s.push_str(t.text());
            }
            s
        })
        .collect()
}

/// Positions where two annotations choose different reading sets.
pub fn diff_annotations(a: &[Cohort], b: &[Cohort]) -> Result<DiffReport, EvalError> {
    align(a, b)?;
    let mut disagreements = Vec::new();
    for (i, (x, y)) in a.iter().zip(b).enumerate() {
        let (xs, ys) = (morph_set(x), morph_set(y));
        if xs != ys {
            disagreements.push(Disagreement { position: i + 1, surface: x.surface().to_string(), a: show(&xs), b: show(&ys) });
        }
    }
    Ok(DiffReport { words: a.len() as u64, disagreements })
}

pub fn diff_streams(a: &str, b: &str) -> Result<DiffReport, EvalError> {
    diff_annotations(&parse_cohorts(a)?, &parse_cohorts(b)?)
}
