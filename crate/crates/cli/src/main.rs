//! `idiomccg` command-line front end.
//!
//! Exit codes: 0 success, 1 linguistic negative (no parse, violations,
//! failed suite lines), 2 operational error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};

use idiomccg::derivation::DerivationDoc;
use idiomccg::lexicon::{parse_lexicon, tokenize, validate_lexicon, Lexicon};
use idiomccg::logical_form::DEFAULT_MAX_STEPS;
use idiomccg::parse_category;
use idiomccg::parser::{parse, Goal, ParseOptions};
use idiomccg::suite::{parse_suite, run_suite};

#[derive(Parser, Debug)]
#[command(
    name = "idiomccg",
    version,
    about = "CCG parser for idioms and multi-word expressions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a sentence and print its derivations.
    Parse {
        #[command(flatten)]
        lexicon: LexiconArgs,
        #[command(flatten)]
        parse: ParseArgs,
        /// Emit the derivation document as JSON.
        #[arg(long)]
        json: bool,
        /// The sentence; several arguments are joined with spaces.
        #[arg(required = true, num_args = 1..)]
        sentence: Vec<String>,
    },
    /// Check a lexicon against the structural constraints.
    Validate {
        #[command(flatten)]
        lexicon: LexiconArgs,
    },
    /// Run a regression suite of sentences with expected readings.
    Test {
        #[command(flatten)]
        lexicon: LexiconArgs,
        #[command(flatten)]
        parse: ParseArgs,
        suite: PathBuf,
    },
}

#[derive(Args, Debug)]
struct LexiconArgs {
    /// Lexicon file.
    #[arg(short = 'l', long = "lexicon")]
    path: PathBuf,
    /// Span length (in tokens) above which a constituent counts as heavy.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    weight_threshold: Option<u32>,
    /// Lower-case the lexicon and input before matching.
    #[arg(long)]
    case_fold: bool,
}

#[derive(Args, Debug)]
struct ParseArgs {
    /// Keep every derivation instead of packing equivalent ones.
    #[arg(long)]
    all_derivations: bool,
    /// Category the spanning edge must unify with (default: any).
    #[arg(long)]
    goal: Option<String>,
    /// Beta-reduction step budget per combination.
    #[arg(long, default_value_t = DEFAULT_MAX_STEPS as u64,
          value_parser = clap::value_parser!(u64).range(1..))]
    max_steps: u64,
}

const EXIT_NEGATIVE: u8 = 1;
const EXIT_OPERATIONAL: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_OPERATIONAL)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Parse {
            lexicon,
            parse,
            json,
            sentence,
        } => cmd_parse(&lexicon, &parse, json, &sentence.join(" ")),
        Command::Validate { lexicon } => cmd_validate(&lexicon),
        Command::Test {
            lexicon,
            parse,
            suite,
        } => cmd_test(&lexicon, &parse, &suite),
    }
}

/// Writes to standard output. A closed pipe (`idiomccg ... | head`) is not
/// an error: the rest of the output is dropped and the exit code stands.
fn emit(text: &str) -> Result<()> {
    match io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Reads and parses a lexicon, reporting syntax errors and warnings on
/// standard error.
fn load_lexicon(args: &LexiconArgs) -> Result<Lexicon> {
    let text = read(&args.path)?;
    let mut lex = match parse_lexicon(&text) {
        Ok(lex) => lex,
        Err(errors) => {
            for e in &errors {
                eprintln!("{}:{e}", args.path.display());
            }
            return Err(anyhow!("{} syntax error(s) in lexicon", errors.len()));
        }
    };
    for w in lex.warnings() {
        eprintln!(
            "{}: line {}: warning: {}",
            args.path.display(),
            w.line,
            w.message
        );
    }
    if let Some(t) = args.weight_threshold {
        lex.set_weight_threshold(t as usize);
    }
    Ok(if args.case_fold {
        lex.case_folded()
    } else {
        lex
    })
}

/// A lexicon fit for parsing: it must validate cleanly.
fn load_valid_lexicon(args: &LexiconArgs) -> Result<Lexicon> {
    let lex = load_lexicon(args)?;
    let report = validate_lexicon(&lex);
    if !report.is_clean() {
        for v in &report.violations {
            eprintln!("{}: {v}", args.path.display());
        }
        return Err(anyhow!(
            "lexicon has {} violation(s)",
            report.violations.len()
        ));
    }
    Ok(lex)
}

fn parse_options(lex: &Lexicon, args: &ParseArgs) -> Result<ParseOptions> {
    let goal = match &args.goal {
        None => Goal::Any,
        Some(text) => Goal::Category(
            parse_category(text, lex.config().default_modality)
                .with_context(|| format!("invalid --goal {text:?}"))?,
        ),
    };
    Ok(ParseOptions {
        goal,
        pack: !args.all_derivations,
        max_steps: args.max_steps as usize,
        ..ParseOptions::default()
    })
}

fn cmd_parse(
    lex_args: &LexiconArgs,
    args: &ParseArgs,
    json: bool,
    sentence: &str,
) -> Result<ExitCode> {
    let lex = load_valid_lexicon(lex_args)?;
    let options = parse_options(&lex, args)?;
    let tokens = tokenize(sentence, lex_args.case_fold);
    let result = parse(&lex, &tokens, &options)?;
    let doc = DerivationDoc::from_parse(&result);
    if json {
        emit(&format!("{}\n", doc.to_json()))?;
    } else {
        emit(&doc.render_ascii())?;
    }
    Ok(if doc.readings.is_empty() {
        ExitCode::from(EXIT_NEGATIVE)
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_validate(args: &LexiconArgs) -> Result<ExitCode> {
    let lex = load_lexicon(args)?;
    let report = validate_lexicon(&lex);
    let mut out = String::new();
    for v in &report.violations {
        out += &format!("{v}\n");
    }
    for n in &report.notes {
        out += &format!("{n}\n");
    }
    out += &format!(
        "{} entries, {} violation(s), {} note(s)\n",
        lex.entries().len(),
        report.violations.len(),
        report.notes.len()
    );
    emit(&out)?;
    Ok(if report.is_clean() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_NEGATIVE)
    })
}

fn cmd_test(lex_args: &LexiconArgs, args: &ParseArgs, suite: &Path) -> Result<ExitCode> {
    let lex = load_valid_lexicon(lex_args)?;
    let options = parse_options(&lex, args)?;
    let cases = parse_suite(&read(suite)?).with_context(|| format!("in {}", suite.display()))?;
    let outcomes = run_suite(&lex, &cases, &options, lex_args.case_fold);
    let mut out = String::new();
    for o in &outcomes {
        out += &format!("{o}\n");
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    out += &format!("{} passed, {failed} failed\n", outcomes.len() - failed);
    emit(&out)?;
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_NEGATIVE)
    })
}
