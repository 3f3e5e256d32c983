//! A CCG parser for multi-word expressions.
//!
//! Idioms are lexical: phrasal idioms subcategorize for singleton
//! string-categories (`(S\NP)/*"the bucket"`), idiomatically combining
//! phrases for head-marked polyvalent arguments (`NP[head=beans,special=+]`).
//! Slash modalities decide which combinatory rules a functor may feed, and
//! logical forms are lambda terms whose constants may carry contingency
//! subscripts (`die_{x} y`).

pub mod category;
pub mod derivation;
pub mod lexicon;
pub mod logical_form;
pub mod parser;
pub mod suite;

pub use category::{
    match_argument, modality_admits, parse_category, unify, validate_category, ArgumentSource,
    Bindings, Category, CategoryViolation, Direction, FeatureBundle, FeatureValue, Modality,
    RuleId, Slash,
};
pub use derivation::{DerivationDoc, NearMiss, Reading, TreeNode};
pub use lexicon::{
    lookup, parse_lexicon, tokenize, validate_lexicon, LexEntry, Lexicon, LexiconConfig, Marker,
    ValidationReport, Violation, ViolationKind,
};
pub use logical_form::{alpha_eq, beta_normalize, parse_lf, pretty_print, substitute, LfTerm};
pub use parser::{
    combine, parse, Chart, Edge, EdgeId, EdgeRule, Goal, ParseError, ParseOptions, ParseResult,
};
pub use suite::{parse_suite, run_suite, CaseOutcome, SuiteCase};
