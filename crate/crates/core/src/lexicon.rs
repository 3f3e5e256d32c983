//! Lexicon file format, tokenizer, lookup and whole-lexicon validation.
//!
//! ```text
//! # comment
//! %atoms Adv Det ;
//! %weight-threshold 4 ;
//! %default-modality diamond ;
//! picked := (S\NP)/*"up"/NP[weight=-] : \y\x\z. cause (init (hold_{x} y z)) z ;
//! book [+lexc] := N[head=book] : book ;
//! every which way := (S\NP)\(S\NP) : \p\x. omni p x ;
//! ```

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::category::{
    parse_category, validate_category, Category, CategoryViolation, Modality, BUILTIN_ATOMS,
};
use crate::logical_form::{parse_lf, LfTerm};

pub const DEFAULT_WEIGHT_THRESHOLD: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Marker {
    /// The word contributes lexical content (`+lexc`).
    LexcPlus,
}

impl Marker {
    fn spelling(self) -> &'static str {
        match self {
            Marker::LexcPlus => "+lexc",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LexEntry {
    pub phon: Vec<String>,
    pub category: Category,
    pub lf: LfTerm,
    pub markers: BTreeSet<Marker>,
    pub source_line: usize,
}

impl LexEntry {
    pub fn new(phon: &str, category: Category, lf: LfTerm) -> Self {
        LexEntry {
            phon: phon.split_whitespace().map(str::to_string).collect(),
            category,
            lf,
            markers: BTreeSet::new(),
            source_line: 0,
        }
    }

    pub fn with_marker(mut self, marker: Marker) -> Self {
        self.markers.insert(marker);
        self
    }

    /// Identity of an entry, ignoring where it was written.
    pub fn same_content(&self, other: &LexEntry) -> bool {
        self.phon == other.phon
            && self.category == other.category
            && self.lf == other.lf
            && self.markers == other.markers
    }

    /// Entries subcategorizing for a singleton or for a `special=+` argument.
    pub fn is_idiomatic(&self) -> bool {
        self.category.contains_singleton() || self.category.has_feature("special", "+")
    }

    pub fn render(&self, default_modality: Modality) -> String {
        let mut out = self.phon.join(" ");
        if !self.markers.is_empty() {
            let markers: Vec<_> = self.markers.iter().map(|m| m.spelling()).collect();
            out.push_str(&format!(" [{}]", markers.join(",")));
        }
        out.push_str(&format!(
            " := {} : {} ;",
            self.category.render(default_modality),
            self.lf
        ));
        out
    }
}

impl fmt::Display for LexEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Modality::Diamond))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LexiconConfig {
    pub weight_threshold: usize,
    pub default_modality: Modality,
}

impl Default for LexiconConfig {
    fn default() -> Self {
        LexiconConfig {
            weight_threshold: DEFAULT_WEIGHT_THRESHOLD,
            default_modality: Modality::Diamond,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct LexiconSyntaxError {
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexiconWarning {
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Debug, Default)]
pub struct Lexicon {
    entries: Vec<Arc<LexEntry>>,
    index: HashMap<String, Vec<usize>>,
    atoms: BTreeSet<String>,
    config: LexiconConfig,
    warnings: Vec<LexiconWarning>,
}

impl Lexicon {
    pub fn new(config: LexiconConfig) -> Self {
        Lexicon {
            config,
            ..Default::default()
        }
    }

    pub fn from_entries(
        config: LexiconConfig,
        entries: impl IntoIterator<Item = LexEntry>,
    ) -> Self {
        let mut lex = Lexicon::new(config);
        for e in entries {
            lex.add_entry(e);
        }
        lex
    }

    pub fn entries(&self) -> &[Arc<LexEntry>] {
        &self.entries
    }

    pub fn config(&self) -> &LexiconConfig {
        &self.config
    }

    pub fn set_weight_threshold(&mut self, threshold: usize) {
        self.config.weight_threshold = threshold;
    }

    pub fn declared_atoms(&self) -> &BTreeSet<String> {
        &self.atoms
    }

    pub fn declare_atom(&mut self, name: &str) {
        self.atoms.insert(name.to_string());
    }

    pub fn is_known_atom(&self, name: &str) -> bool {
        BUILTIN_ATOMS.contains(&name) || self.atoms.contains(name)
    }

    pub fn warnings(&self) -> &[LexiconWarning] {
        &self.warnings
    }

    /// Adds an entry. Returns false (and keeps the lexicon unchanged) for an
    /// exact duplicate.
    pub fn add_entry(&mut self, entry: LexEntry) -> bool {
        if self.entries.iter().any(|e| e.same_content(&entry)) {
            return false;
        }
        let first = entry.phon.first().cloned().unwrap_or_default();
        self.index
            .entry(first)
            .or_default()
            .push(self.entries.len());
        self.entries.push(Arc::new(entry));
        true
    }

    /// A lexicon holding only the entries that satisfy `keep`.
    pub fn retain(&self, mut keep: impl FnMut(&LexEntry) -> bool) -> Lexicon {
        let mut out = Lexicon {
            atoms: self.atoms.clone(),
            config: self.config,
            ..Default::default()
        };
        for e in &self.entries {
            if keep(e) {
                out.add_entry(LexEntry::clone(e));
            }
        }
        out
    }

    /// Lower-cases every surface form, singleton tokens included.
    pub fn case_folded(&self) -> Lexicon {
        let mut out = Lexicon {
            atoms: self.atoms.clone(),
            config: self.config,
            warnings: self.warnings.clone(),
            ..Default::default()
        };
        for e in &self.entries {
            let mut e = LexEntry::clone(e);
            e.phon = e.phon.iter().map(|t| t.to_lowercase()).collect();
            e.category = fold_singletons(&e.category);
            out.add_entry(e);
        }
        out
    }

    /// Serializes back to the file format.
    pub fn render(&self) -> String {
        let mut out = String::new();
        if !self.atoms.is_empty() {
            let atoms: Vec<_> = self.atoms.iter().cloned().collect();
            out.push_str(&format!("%atoms {} ;\n", atoms.join(" ")));
        }
        out.push_str(&format!(
            "%weight-threshold {} ;\n%default-modality {} ;\n",
            self.config.weight_threshold,
            self.config.default_modality.name()
        ));
        for e in &self.entries {
            out.push_str(&e.render(self.config.default_modality));
            out.push('\n');
        }
        out
    }
}

fn fold_singletons(c: &Category) -> Category {
    match c {
        Category::Singleton(t) => Category::Singleton(t.iter().map(|s| s.to_lowercase()).collect()),
        Category::Functor {
            result,
            slash,
            argument,
        } => Category::functor(fold_singletons(result), *slash, fold_singletons(argument)),
        other => other.clone(),
    }
}

/// A statement and the line it starts on.
type Statement = (usize, String);

/// Splits text into `;`-terminated statements, dropping `#` comments. The
/// second value is an unterminated trailing statement, if any.
fn statements(text: &str) -> (Vec<Statement>, Option<Statement>) {
    let mut out = Vec::new();
    let mut current = String::new();
    let mut start_line = 0;
    let mut in_quote = false;
    for (i, raw_line) in text.lines().enumerate() {
        let line_no = i + 1;
        for ch in raw_line.trim_end_matches('\r').chars() {
            if ch == '#' && !in_quote {
                break;
            }
            if ch == '"' {
                in_quote = !in_quote;
            }
            if ch == ';' && !in_quote {
                out.push((start_line, current.trim().to_string()));
                current.clear();
                start_line = 0;
                continue;
            }
            if start_line == 0 && !ch.is_whitespace() {
                start_line = line_no;
            }
            current.push(ch);
        }
        current.push('\n');
    }
    let rest = current.trim();
    let trailing = (!rest.is_empty()).then(|| (start_line, rest.to_string()));
    (out, trailing)
}

/// Parses a lexicon file, reporting every syntax error rather than the first.
pub fn parse_lexicon(text: &str) -> Result<Lexicon, Vec<LexiconSyntaxError>> {
    let mut lex = Lexicon::new(LexiconConfig::default());
    let mut errors = Vec::new();
    let (stmts, trailing) = statements(text);
    if let Some((line, _)) = trailing {
        errors.push(LexiconSyntaxError {
            line,
            message: "statement is not terminated by ';'".into(),
        });
    }
    for (line, stmt) in stmts {
        if stmt.is_empty() {
            continue;
        }
        let result = match stmt.strip_prefix('%') {
            Some(directive) => apply_directive(&mut lex, directive),
            None => parse_entry(&stmt, line, lex.config.default_modality).map(|entry| {
                if !lex.add_entry(entry) {
                    lex.warnings.push(LexiconWarning {
                        line,
                        message: "duplicate of an earlier identical entry".into(),
                    });
                }
            }),
        };
        if let Err(message) = result {
            errors.push(LexiconSyntaxError { line, message });
        }
    }
    if errors.is_empty() {
        Ok(lex)
    } else {
        Err(errors)
    }
}

fn apply_directive(lex: &mut Lexicon, directive: &str) -> Result<(), String> {
    let mut words = directive.split_whitespace();
    let name = words.next().unwrap_or_default();
    let args: Vec<&str> = words.collect();
    match name {
        "atoms" => {
            for a in args {
                let ok = a.chars().next().is_some_and(|c| c.is_ascii_uppercase())
                    && a.chars()
                        .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
                    && !crate::category::is_category_var_name(a);
                if !ok {
                    return Err(format!("invalid atom name {a:?}"));
                }
                lex.declare_atom(a);
            }
            Ok(())
        }
        "weight-threshold" => match args.as_slice() {
            [n] => match n.parse::<usize>() {
                Ok(n) if n >= 1 => {
                    lex.config.weight_threshold = n;
                    Ok(())
                }
                _ => Err(format!(
                    "weight threshold must be a positive integer, got {n:?}"
                )),
            },
            _ => Err("%weight-threshold takes one argument".into()),
        },
        "default-modality" => match args.as_slice() {
            [m] => {
                lex.config.default_modality =
                    Modality::from_name(m).ok_or_else(|| format!("unknown modality {m:?}"))?;
                Ok(())
            }
            _ => Err("%default-modality takes one argument".into()),
        },
        other => Err(format!("unknown directive %{other}")),
    }
}

fn parse_entry(stmt: &str, line: usize, default_modality: Modality) -> Result<LexEntry, String> {
    let (lhs, rhs) = stmt
        .split_once(":=")
        .ok_or_else(|| "expected 'phon := Category : LF'".to_string())?;
    let (phon_text, markers) = match lhs.split_once('[') {
        Some((phon, rest)) => {
            let inner = rest
                .trim_end()
                .strip_suffix(']')
                .ok_or_else(|| "unterminated marker list".to_string())?;
            let mut markers = BTreeSet::new();
            for m in inner.split(',').map(str::trim).filter(|m| !m.is_empty()) {
                match m {
                    "+lexc" => markers.insert(Marker::LexcPlus),
                    other => return Err(format!("unknown marker {other:?}")),
                };
            }
            (phon, markers)
        }
        None => (lhs, BTreeSet::new()),
    };
    let phon: Vec<String> = phon_text.split_whitespace().map(str::to_string).collect();
    if phon.is_empty() {
        return Err("entry has an empty surface form".into());
    }
    if let Some(bad) = phon.iter().find(|t| t.contains(['"', ':', '%'])) {
        return Err(format!("invalid surface token {bad:?}"));
    }
    let split = find_outside_quotes(rhs, ':')
        .ok_or_else(|| "expected ':' between category and logical form".to_string())?;
    let (cat_text, lf_text) = (&rhs[..split], &rhs[split + 1..]);
    let category = parse_category(cat_text.trim(), default_modality).map_err(|e| e.to_string())?;
    let lf = parse_lf(lf_text.trim()).map_err(|e| e.to_string())?;
    Ok(LexEntry {
        phon,
        category,
        lf,
        markers,
        source_line: line,
    })
}

fn find_outside_quotes(s: &str, target: char) -> Option<usize> {
    let mut in_quote = false;
    for (i, c) in s.char_indices() {
        if c == '"' {
            in_quote = !in_quote;
        } else if c == target && !in_quote {
            return Some(i);
        }
    }
    None
}

/// Whitespace tokenization, optionally lower-casing.
pub fn tokenize(sentence: &str, case_fold: bool) -> Vec<String> {
    sentence
        .split_whitespace()
        .map(|t| {
            if case_fold {
                t.to_lowercase()
            } else {
                t.to_string()
            }
        })
        .collect()
}

/// Every entry whose surface form matches the tokens beginning at `start`,
/// with the number of tokens it covers.
pub fn lookup(lex: &Lexicon, tokens: &[String], start: usize) -> Vec<(Arc<LexEntry>, usize)> {
    let Some(first) = tokens.get(start) else {
        return Vec::new();
    };
    lex.index
        .get(first)
        .into_iter()
        .flatten()
        .map(|&i| &lex.entries[i])
        .filter(|e| tokens[start..].starts_with(&e.phon))
        .map(|e| (Arc::clone(e), e.phon.len()))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ViolationKind {
    Category(CategoryViolation),
    UnderivableSingleton(Vec<String>),
    ArityMismatch { slots: usize, abstractions: usize },
    UndeclaredAtom(String),
}

impl ViolationKind {
    pub fn code(&self) -> &'static str {
        match self {
            ViolationKind::Category(c) => c.code(),
            ViolationKind::UnderivableSingleton(_) => "UNDERIVABLE_SINGLETON",
            ViolationKind::ArityMismatch { .. } => "ARITY_MISMATCH",
            ViolationKind::UndeclaredAtom(_) => "UNDECLARED_ATOM",
        }
    }
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ViolationKind::Category(c) => write!(f, "{c}"),
            ViolationKind::UnderivableSingleton(t) => {
                write!(f, "UNDERIVABLE_SINGLETON(\"{}\")", t.join(" "))
            }
            ViolationKind::ArityMismatch {
                slots,
                abstractions,
            } => write!(
                f,
                "ARITY_MISMATCH({slots} argument slots, {abstractions} abstractions)"
            ),
            ViolationKind::UndeclaredAtom(a) => write!(f, "UNDECLARED_ATOM({a})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Violation {
    pub line: usize,
    pub entry: String,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {} in `{}`", self.line, self.kind, self.entry)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NoteKind {
    /// The LF hands the predicate its arguments in another order than the
    /// category consumes them.
    LexicalWrap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Note {
    pub line: usize,
    pub entry: String,
    pub kind: NoteKind,
}

impl fmt::Display for Note {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            NoteKind::LexicalWrap => write!(
                f,
                "line {}: note LEXICAL_WRAP in `{}`",
                self.line, self.entry
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub notes: Vec<Note>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every entry's category, the arity of its LF, singleton
/// derivability and atom declarations.
pub fn validate_lexicon(lex: &Lexicon) -> ValidationReport {
    let mut report = ValidationReport::default();
    for entry in &lex.entries {
        let shown = entry.to_string();
        let mut push = |kind| {
            report.violations.push(Violation {
                line: entry.source_line,
                entry: shown.clone(),
                kind,
            })
        };
        for v in validate_category(&entry.category) {
            push(ViolationKind::Category(v));
        }
        let mut atoms = Vec::new();
        entry.category.atom_names(&mut atoms);
        let mut seen = BTreeSet::new();
        for a in atoms {
            if !lex.is_known_atom(&a) && seen.insert(a.clone()) {
                push(ViolationKind::UndeclaredAtom(a));
            }
        }
        let slots = entry.category.arity();
        let abstractions = entry.lf.leading_abstractions();
        if abstractions < slots {
            push(ViolationKind::ArityMismatch {
                slots,
                abstractions,
            });
        }
        let mut singletons = BTreeSet::new();
        collect_singletons(&entry.category, &mut singletons);
        // A bare singleton category is the entry's own surface string.
        if let Category::Singleton(t) = &entry.category {
            singletons.remove(t);
        }
        for tokens in singletons {
            if !tokens.is_empty() && !has_derivation_seed(lex, &tokens) {
                push(ViolationKind::UnderivableSingleton(tokens));
            }
        }
        if permutes_arguments(&entry.lf) {
            report.notes.push(Note {
                line: entry.source_line,
                entry: shown.clone(),
                kind: NoteKind::LexicalWrap,
            });
        }
    }
    report
}

fn collect_singletons(c: &Category, out: &mut BTreeSet<Vec<String>>) {
    match c {
        Category::Singleton(t) => {
            out.insert(t.clone());
        }
        Category::Functor {
            result, argument, ..
        } => {
            collect_singletons(result, out);
            collect_singletons(argument, out);
        }
        _ => {}
    }
}

/// Whether the token sequence can be tiled by surface forms of entries.
fn has_derivation_seed(lex: &Lexicon, tokens: &[String]) -> bool {
    let mut reachable = vec![false; tokens.len() + 1];
    reachable[0] = true;
    for start in 0..tokens.len() {
        if !reachable[start] {
            continue;
        }
        for (_, len) in lookup(lex, tokens, start) {
            reachable[start + len] = true;
        }
    }
    reachable[tokens.len()]
}

/// True when the predicate's bare-variable arguments appear in a different
/// order than their binders.
fn permutes_arguments(lf: &LfTerm) -> bool {
    let (binders, body) = lf.strip_abstractions();
    let (_, args) = body.spine();
    let positions: Vec<usize> = args
        .iter()
        .filter_map(|a| match a {
            LfTerm::Var(x) => binders.iter().rposition(|b| b == x),
            _ => None,
        })
        .collect();
    positions.windows(2).any(|w| w[0] > w[1])
}
