//! `rtag`: compile grammars, tag text, evaluate against gold, diff annotations.

mod config;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use rtag_core::eval::{self, StageMetrics};
use rtag_core::pipeline::{self, Format, Segment, SentenceAnalysis, Stage, Tagger};
use rtag_core::tag::Cohort;
use thiserror::Error;

use config::{read_input, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}", .0.join("\n"))]
    Invalid(Vec<String>),
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Data(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) | CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "rtag", version, about = "Rule-based part-of-speech tagger")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StageArg {
    D0,
    D1,
    D2,
    D3,
}

impl From<StageArg> for Stage {
    fn from(s: StageArg) -> Stage {
        match s {
            StageArg::D0 => Stage::D0,
            StageArg::D1 => Stage::D1,
            StageArg::D2 => Stage::D2,
            StageArg::D3 => Stage::D3,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Vertical,
    Tabular,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate the configured files and write a compiled grammar archive.
    Compile {
        #[command(flatten)]
        config: RunConfig,
        /// Archive destination.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Tag text from a file or standard input.
    Tag {
        #[command(flatten)]
        config: RunConfig,
        /// Snapshot to print.
        #[arg(long, value_enum, env = "RTAG_STAGE", ignore_case = true, default_value = "d3")]
        stage: StageArg,
        /// Output layout; tabular for D3 and vertical otherwise by default.
        #[arg(long, value_enum, env = "RTAG_FORMAT")]
        format: Option<FormatArg>,
        /// Worker threads; output order does not depend on this.
        #[arg(long, env = "RTAG_JOBS", default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        jobs: u32,
        /// Report each sentence's parse outcome on standard error.
        #[arg(long)]
        trace: bool,
        input: Option<PathBuf>,
    },
    /// Tag text and compare every stage with a gold cohort stream.
    Eval {
        #[command(flatten)]
        config: RunConfig,
        /// Gold standard in vertical format.
        #[arg(long)]
        gold: PathBuf,
        /// Stages to report; all four by default.
        #[arg(long, value_enum, ignore_case = true)]
        stage: Vec<StageArg>,
        /// The input is an already tagged cohort stream, reported as one row.
        #[arg(long)]
        tagged: bool,
        /// Print `stage TAB metric TAB value` lines instead of the table.
        #[arg(long)]
        machine: bool,
        #[arg(long, env = "RTAG_JOBS", default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        jobs: u32,
        input: Option<PathBuf>,
    },
    /// Compare two annotations of the same text.
    Diff { a: PathBuf, b: PathBuf },
}

fn tag_all(tagger: &Tagger, text: &str, jobs: u32) -> Result<Vec<Segment<SentenceAnalysis>>, CliError> {
    let segments = tagger.segments(text);
    let one = |seg: &Segment<Vec<String>>| match seg {
        Segment::Marker(m) => Segment::Marker(m.clone()),
        Segment::Sentence(toks) => Segment::Sentence(tagger.tag_sentence(toks)),
    };
    if jobs <= 1 {
        return Ok(segments.iter().map(one).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs as usize)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    Ok(pool.install(|| segments.par_iter().map(one).collect()))
}

fn report_fallbacks(items: &[Segment<SentenceAnalysis>], trace: bool) {
    let mut stderr = std::io::stderr().lock();
    let sentences = items.iter().filter_map(|s| match s {
        Segment::Sentence(a) => Some(a),
        Segment::Marker(_) => None,
    });
    for (i, a) in sentences.enumerate() {
        if let Some(f) = &a.fallback {
            let _ = writeln!(stderr, "rtag: sentence {}: fallback to D2 ({f})", i + 1);
        } else if trace {
            let status = a.status.map_or("-".to_string(), |s| format!("{s:?}").to_lowercase());
            let _ = writeln!(stderr, "rtag: sentence {}: {status}, {} analyses", i + 1, a.analyses);
        }
    }
}

fn stage_label(stage: Stage) -> &'static str {
    match stage {
        Stage::D0 => "D0 (Morph. analysis)",
        Stage::D1 => "D1 (D0 + CG)",
        Stage::D2 => "D2 (D1 + CG heur.)",
        Stage::D3 => "D3 (D2 + FS parser)",
    }
}

fn cohorts_at(items: &[Segment<SentenceAnalysis>], stage: Stage) -> Vec<Cohort> {
    items
        .iter()
        .filter_map(|s| match s {
            Segment::Sentence(a) => Some(a.stage(stage).cohorts().to_vec()),
            Segment::Marker(_) => None,
        })
        .flatten()
        .collect()
}

fn write_stdout(s: &str) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    out.write_all(s.as_bytes()).and_then(|_| out.flush()).map_err(|e| CliError::Io(format!("stdout: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Compile { config, output } => {
            let res = config.resources()?;
            let compiled = config.compile(res.fsig)?;
            let mut report = String::new();
            for (kw, list) in [("rule", &compiled.rules), ("rank", &compiled.rankers)] {
                for r in list {
                    report.push_str(&format!("{kw}\t{}\t{} states\n", r.name, r.dfa.state_count()));
                }
            }
            report.push_str(&format!("{} rules, {} rankers\n", compiled.rules.len(), compiled.rankers.len()));
            fs::write(&output, compiled.to_archive())
                .map_err(|e| CliError::Io(format!("{}: {e}", output.display())))?;
            write_stdout(&report)
        }
        Command::Tag { config, stage, format, jobs, trace, input } => {
            let tagger = config.tagger()?;
            let text = read_input(input.as_deref())?;
            let items = tag_all(&tagger, &text, jobs)?;
            let stage = Stage::from(stage);
            if stage == Stage::D3 || trace {
                report_fallbacks(&items, trace);
            }
            let format = match format {
                Some(FormatArg::Vertical) => Format::Vertical,
                Some(FormatArg::Tabular) => Format::Tabular,
                None if stage == Stage::D3 => Format::Tabular,
                None => Format::Vertical,
            };
            write_stdout(&pipeline::render(&items, stage, format))
        }
        Command::Eval { config, gold, stage, tagged, machine, jobs, input } => {
            let gold_text = read_input(Some(&gold))?;
            let gold = rtag_core::tag::parse_cohorts(&gold_text)
                .map_err(|e| CliError::Data(format!("{}: {e}", gold.display())))?;
            let text = read_input(input.as_deref())?;
            let data = |e: eval::EvalError| CliError::Data(e.to_string());
            let rows: Vec<(String, StageMetrics)> = if tagged {
                let out = rtag_core::tag::parse_cohorts(&text).map_err(|e| CliError::Data(e.to_string()))?;
                vec![("output".to_string(), eval::measure(&out, &gold).map_err(data)?)]
            } else {
                let tagger = config.tagger()?;
                let items = tag_all(&tagger, &text, jobs)?;
                report_fallbacks(&items, false);
                let stages: Vec<Stage> =
                    if stage.is_empty() { Stage::ALL.to_vec() } else { stage.into_iter().map(Stage::from).collect() };
                let mut rows = Vec::new();
                for st in stages {
                    let m = eval::measure(&cohorts_at(&items, st), &gold).map_err(data)?;
                    rows.push((stage_label(st).to_string(), m));
                }
                rows
            };
            let out = if machine {
                rows.iter()
                    .map(|(label, m)| m.machine_lines(label.split(' ').next().unwrap_or(label)))
                    .collect::<String>()
            } else {
                eval::report_table(&rows)
            };
            write_stdout(&out)
        }
        Command::Diff { a, b } => {
            let (ta, tb) = (read_input(Some(&a))?, read_input(Some(&b))?);
            let report = eval::diff_streams(&ta, &tb).map_err(|e| CliError::Data(e.to_string()))?;
            write_stdout(&report.render())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rtag: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
