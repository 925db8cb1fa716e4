//! Loading the tagger's resource files.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use clap::Args;
use rtag_core::cg::{self, Grammar};
use rtag_core::fsig::{self, CompiledGrammar, FsigGrammar, ParseCaps, SyntaxMap};
use rtag_core::morph::{self, Heuristics, Lexicon};
use rtag_core::pipeline::Tagger;
use rtag_core::tokenizer::TokenizerConfig;

use crate::CliError;

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Lexicon in vertical cohort format.
    #[arg(long, env = "RTAG_LEXICON")]
    pub lexicon: Option<PathBuf>,
    /// Guesser rules for words missing from the lexicon.
    #[arg(long, env = "RTAG_MORPH_HEURISTICS")]
    pub morph_heuristics: Option<PathBuf>,
    /// Tokenizer configuration (syntagms, punctuation, abbreviations).
    #[arg(long, env = "RTAG_TOK_CONFIG")]
    pub tok_config: Option<PathBuf>,
    /// Constraint grammar.
    #[arg(long, env = "RTAG_CG")]
    pub cg: Option<PathBuf>,
    /// Intersection grammar, as source or as a compiled archive.
    #[arg(long, env = "RTAG_FSIG")]
    pub fsig: Option<PathBuf>,
    /// Syntactic-tag map.
    #[arg(long, env = "RTAG_SYNTAX_MAP")]
    pub syntax_map: Option<PathBuf>,
    /// Run the heuristic constraint tier (default).
    #[arg(long, overrides_with = "no_heuristics")]
    pub heuristics: bool,
    /// Skip the heuristic constraint tier, so D2 equals D1.
    #[arg(long, env = "RTAG_NO_HEURISTICS", overrides_with = "heuristics")]
    pub no_heuristics: bool,
    /// Bound on automaton states per construction.
    #[arg(long, env = "RTAG_STATE_CAP", default_value_t = 100_000, value_parser = clap::value_parser!(u32).range(1..))]
    pub state_cap: u32,
    /// Bound on the analyses a parse may list before it counts as overflow.
    #[arg(long, env = "RTAG_ENUM_CAP", default_value_t = 10_000, value_parser = clap::value_parser!(u32).range(1..))]
    pub enum_cap: u32,
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Reads a data file, or standard input when no path is given.
pub fn read_input(path: Option<&Path>) -> Result<String, CliError> {
    match path {
        Some(p) if p != Path::new("-") => fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Io(format!("stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn load<T, E: std::fmt::Display>(
    path: &Option<PathBuf>,
    errors: &mut Vec<String>,
    parse: impl FnOnce(&str) -> Result<T, E>,
) -> Option<T>
where
    T: Default,
{
    let Some(p) = path else { return Some(T::default()) };
    match read_file(p) {
        Ok(text) => match parse(&text) {
            Ok(v) => Some(v),
            Err(e) => {
                errors.push(format!("{}: {e}", p.display()));
                None
            }
        },
        Err(e) => {
            errors.push(e.to_string());
            None
        }
    }
}

/// Either a grammar to compile or an already compiled archive.
pub enum FsigSource {
    Grammar(FsigGrammar),
    Compiled(CompiledGrammar),
}

impl Default for FsigSource {
    fn default() -> Self {
        FsigSource::Grammar(FsigGrammar::default())
    }
}

pub struct Resources {
    pub tokenizer: TokenizerConfig,
    pub lexicon: Lexicon,
    pub heuristics: Heuristics,
    pub cg: Grammar,
    pub syntax_map: SyntaxMap,
    pub fsig: FsigSource,
}

impl RunConfig {
    pub fn heuristic_tier(&self) -> bool {
        !self.no_heuristics
    }

    pub fn caps(&self) -> ParseCaps {
        ParseCaps { state_cap: self.state_cap as usize, enum_cap: self.enum_cap as usize }
    }

    /// Reads and parses every configured file, reporting all failures at once.
    pub fn resources(&self) -> Result<Resources, CliError> {
        let mut errors = Vec::new();
        let tokenizer = load(&self.tok_config, &mut errors, TokenizerConfig::parse);
        let lexicon = load(&self.lexicon, &mut errors, morph::load_lexicon);
        let heuristics = load(&self.morph_heuristics, &mut errors, Heuristics::parse);
        let cg = load(&self.cg, &mut errors, cg::load_cg_grammar);
        let syntax_map = load(&self.syntax_map, &mut errors, SyntaxMap::parse);
        let fsig = load(&self.fsig, &mut errors, |text| {
            if fsig::is_archive(text) {
                CompiledGrammar::from_archive(text).map(FsigSource::Compiled)
            } else {
                fsig::parse_fsig_grammar(text).map(FsigSource::Grammar)
            }
        });
        if let FsigSource::Grammar(g) = fsig.as_ref().unwrap_or(&FsigSource::default()) {
            errors.extend(g.check().iter().map(|e| format!("{}: {e}", show(&self.fsig))));
        }
        match (tokenizer, lexicon, heuristics, cg, syntax_map, fsig) {
            (Some(tokenizer), Some(lexicon), Some(heuristics), Some(cg), Some(syntax_map), Some(fsig))
                if errors.is_empty() =>
            {
                Ok(Resources { tokenizer, lexicon, heuristics, cg, syntax_map, fsig })
            }
            _ => Err(CliError::Invalid(errors)),
        }
    }

    pub fn compile(&self, fsig: FsigSource) -> Result<CompiledGrammar, CliError> {
        match fsig {
            FsigSource::Compiled(c) => Ok(c),
            FsigSource::Grammar(g) => fsig::compile_grammar(&g, self.state_cap as usize).map_err(|errs| {
                CliError::Invalid(errs.iter().map(|e| format!("{}: {e}", show(&self.fsig))).collect())
            }),
        }
    }

    pub fn tagger(&self) -> Result<Tagger, CliError> {
        let r = self.resources()?;
        let compiled = self.compile(r.fsig)?;
        let mut t = Tagger::new(r.tokenizer, r.lexicon, r.heuristics, r.cg, r.syntax_map, compiled)
            .map_err(|e| CliError::Invalid(vec![format!("{}: {e}", show(&self.cg))]))?;
        t.heuristic_tier = self.heuristic_tier();
        t.caps = self.caps();
        Ok(t)
    }
}

fn show(p: &Option<PathBuf>) -> String {
    p.as_ref().map_or("<default>".to_string(), |p| p.display().to_string())
}
