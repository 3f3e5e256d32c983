//! Independent oracles for testing `idiomccg`.
//!
//! Nothing here reuses the library's substitution, normalization or chart
//! algorithm: terms are normalized innermost-first over de Bruijn indices,
//! and parses are recomputed bracketing by bracketing.

pub mod brute;
pub mod terms;

use std::path::PathBuf;

/// Path of a file relative to the workspace root.
pub fn workspace_file(relative: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .join(relative)
}

pub fn read_workspace_file(relative: &str) -> String {
    let path = workspace_file(relative);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Predicates of the fragment's idiomatic senses.
pub const IDIOM_CONSTANTS: [&str; 6] =
    ["die", "divulge", "smalltalk", "omniway", "revulse", "pass"];

/// An LF is idiomatic when it contains one of the idiom predicates.
pub fn is_idiomatic(lf: &idiomccg::LfTerm) -> bool {
    IDIOM_CONSTANTS.iter().any(|c| lf.contains_constant(c))
}

/// Literal: neither an idiom predicate nor any contingency subscript.
pub fn is_literal(lf: &idiomccg::LfTerm) -> bool {
    !is_idiomatic(lf) && !lf.has_contingency()
}

pub fn fragment() -> idiomccg::Lexicon {
    idiomccg::parse_lexicon(&read_workspace_file("grammars/fg2018.ccg")).expect("fragment parses")
}

pub fn corpus() -> Vec<idiomccg::SuiteCase> {
    idiomccg::parse_suite(&read_workspace_file("grammars/fg2018.suite")).expect("corpus parses")
}
