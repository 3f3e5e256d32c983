//! CKY chart parsing over the eight combinatory rules.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::category::{
    match_argument, modality_admits, unify, validate_category, ArgumentSource, Bindings, Category,
    Direction, FeatureValue, RuleId, Slash,
};
use crate::lexicon::{lookup, LexEntry, Lexicon, Marker};
use crate::logical_form::{beta_normalize, fresh_name, LfTerm, NormalizeError, DEFAULT_MAX_STEPS};

pub const DEFAULT_MAX_TOKENS: usize = 32;

pub type EdgeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeRule {
    Lex,
    Rule(RuleId),
}

impl EdgeRule {
    pub fn label(self) -> &'static str {
        match self {
            EdgeRule::Lex => "LEX",
            EdgeRule::Rule(r) => r.label(),
        }
    }
}

impl fmt::Display for EdgeRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug)]
pub struct Edge {
    pub span: (usize, usize),
    pub category: Category,
    pub lf: LfTerm,
    pub rule: EdgeRule,
    pub children: Vec<EdgeId>,
    pub entry: Option<Arc<LexEntry>>,
}

impl Edge {
    pub fn len(&self) -> usize {
        self.span.1 - self.span.0
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A combination result before it has been placed in a chart.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub category: Category,
    pub lf: LfTerm,
    pub rule: RuleId,
}

/// Edge arena plus per-span cells.
#[derive(Clone, Debug)]
pub struct Chart {
    tokens: Vec<String>,
    edges: Vec<Edge>,
    cells: HashMap<(usize, usize), Vec<EdgeId>>,
    packed: HashSet<(usize, usize, String)>,
    pack: bool,
    weight_threshold: usize,
    fresh: usize,
}

impl Chart {
    pub fn new(tokens: Vec<String>, weight_threshold: usize, pack: bool) -> Self {
        Chart {
            tokens,
            edges: Vec::new(),
            cells: HashMap::new(),
            packed: HashSet::new(),
            pack,
            weight_threshold,
            fresh: 0,
        }
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn cell(&self, start: usize, end: usize) -> &[EdgeId] {
        self.cells.get(&(start, end)).map_or(&[], Vec::as_slice)
    }

    /// Adds an edge unless packing is on and the cell already holds one with
    /// the same category (up to variable names), alpha-equivalent LF and the
    /// same computed lexc value.
    pub fn insert(&mut self, edge: Edge) -> Option<EdgeId> {
        if self.pack {
            let lexc = match &edge.entry {
                Some(entry) => entry.markers.contains(&Marker::LexcPlus),
                None => edge.children.iter().any(|&c| self.covers_lexc(c)),
            };
            let key = (
                edge.span.0,
                edge.span.1,
                format!(
                    "{}\u{0}{}\u{0}{lexc}",
                    edge.category.canonical(),
                    edge.lf.alpha_key()
                ),
            );
            if !self.packed.insert(key) {
                return None;
            }
        }
        let id = self.edges.len();
        self.cells.entry(edge.span).or_default().push(id);
        self.edges.push(edge);
        Some(id)
    }

    /// A lexical edge with the entry's variables renamed apart from every
    /// other edge.
    pub fn lexical_edge(&mut self, entry: &Arc<LexEntry>, start: usize) -> Edge {
        self.fresh += 1;
        let n = self.fresh;
        Edge {
            span: (start, start + entry.phon.len()),
            category: entry
                .category
                .rename_vars(&mut |_, name| format!("{name}#{n}")),
            lf: entry.lf.clone(),
            rule: EdgeRule::Lex,
            children: Vec::new(),
            entry: Some(Arc::clone(entry)),
        }
    }

    pub fn derived_feature(&self, id: EdgeId, attr: &str) -> FeatureValue {
        let edge = &self.edges[id];
        let plus = match attr {
            "weight" => edge.len() > self.weight_threshold,
            "lexc" => self.covers_lexc(id),
            _ => return FeatureValue::constant("-"),
        };
        FeatureValue::constant(if plus { "+" } else { "-" })
    }

    fn covers_lexc(&self, id: EdgeId) -> bool {
        let edge = &self.edges[id];
        match &edge.entry {
            Some(entry) => entry.markers.contains(&Marker::LexcPlus),
            None => edge.children.iter().any(|&c| self.covers_lexc(c)),
        }
    }

    /// The edges of greatest span length present.
    pub fn near_misses(&self) -> Vec<EdgeId> {
        let Some(longest) = self.edges.iter().map(Edge::len).max() else {
            return Vec::new();
        };
        (0..self.edges.len())
            .filter(|&i| self.edges[i].len() == longest)
            .collect()
    }

    /// Every edge reachable from `id` through backpointers, `id` included.
    pub fn subtree(&self, id: EdgeId) -> Vec<EdgeId> {
        let mut out = vec![id];
        let mut i = 0;
        while i < out.len() {
            out.extend(self.edges[out[i]].children.iter().copied());
            i += 1;
        }
        out
    }
}

struct EdgeView<'a> {
    chart: &'a Chart,
    id: EdgeId,
}

impl ArgumentSource for EdgeView<'_> {
    fn tokens(&self) -> &[String] {
        let (s, e) = self.chart.edges[self.id].span;
        &self.chart.tokens[s..e]
    }

    fn category(&self) -> &Category {
        &self.chart.edges[self.id].category
    }

    fn derived_feature(&self, attr: &str) -> FeatureValue {
        self.chart.derived_feature(self.id, attr)
    }
}

fn split(c: &Category) -> Option<(&Category, Slash, &Category)> {
    match c {
        Category::Functor {
            result,
            slash,
            argument,
        } => Some((result, *slash, argument)),
        _ => None,
    }
}

/// Cancelled categories of composition and substitution: a singleton or a
/// computed attribute can only be checked against a real constituent.
fn cancellable(y: &Category) -> bool {
    match y {
        Category::Singleton(_) => false,
        Category::Atom { features, .. } => !features.has_derived(),
        _ => true,
    }
}

fn both_closed(a: &LfTerm, b: &LfTerm) -> BTreeSet<String> {
    let mut avoid = a.free_vars();
    avoid.extend(b.free_vars());
    avoid
}

/// Every rule application over two adjacent edges, results beta-normalized.
/// Results whose category is malformed (for example a schema variable bound
/// to a singleton in result position) are discarded.
pub fn combine(
    chart: &Chart,
    left: EdgeId,
    right: EdgeId,
    max_steps: usize,
) -> Result<Vec<Candidate>, NormalizeError> {
    let l = &chart.edges[left];
    let r = &chart.edges[right];
    let mut raw: Vec<(RuleId, Category, LfTerm)> = Vec::new();
    let none = Bindings::new();

    // Application.
    if let Some((x, slash, y)) = split(&l.category) {
        if slash.direction == Direction::Forward && modality_admits(RuleId::FwdApp, slash.modality)
        {
            if let Some(b) = match_argument(y, &EdgeView { chart, id: right }, &none) {
                raw.push((
                    RuleId::FwdApp,
                    b.apply(x),
                    LfTerm::app(l.lf.clone(), r.lf.clone()),
                ));
            }
        }
    }
    if let Some((x, slash, y)) = split(&r.category) {
        if slash.direction == Direction::Backward && modality_admits(RuleId::BwdApp, slash.modality)
        {
            if let Some(b) = match_argument(y, &EdgeView { chart, id: left }, &none) {
                raw.push((
                    RuleId::BwdApp,
                    b.apply(x),
                    LfTerm::app(r.lf.clone(), l.lf.clone()),
                ));
            }
        }
    }

    if let (Some((lx, ls, ly)), Some((rx, rs, ry))) = (split(&l.category), split(&r.category)) {
        use Direction::{Backward as B, Forward as F};
        // Composition: primary functor consumes the secondary's result.
        let compositions = [
            (RuleId::FwdCompHarmonic, F, F, true),
            (RuleId::BwdCompHarmonic, B, B, false),
            (RuleId::FwdCompCrossing, F, B, true),
            (RuleId::BwdCompCrossing, B, F, false),
        ];
        for (rule, primary_dir, secondary_dir, primary_left) in compositions {
            let ((px, ps, py, pf), (sx, ss, sz, sf)) = if primary_left {
                ((lx, ls, ly, &l.lf), (rx, rs, ry, &r.lf))
            } else {
                ((rx, rs, ry, &r.lf), (lx, ls, ly, &l.lf))
            };
            if ps.direction != primary_dir
                || ss.direction != secondary_dir
                || !modality_admits(rule, ps.modality)
                || !modality_admits(rule, ss.modality)
                || !cancellable(py)
            {
                continue;
            }
            if let Some(b) = unify(py, sx, &none) {
                let cat = Category::functor(b.apply(px), ss, b.apply(sz));
                let v = fresh_name("v", &both_closed(pf, sf));
                let lf = LfTerm::abs(
                    &v,
                    LfTerm::app(pf.clone(), LfTerm::app(sf.clone(), LfTerm::var(&v))),
                );
                raw.push((rule, cat, lf));
            }
        }

        // Substitution: (X/Y)/Z  Y/Z  =>  X/Z, and its mirror.
        let substitutions = [(RuleId::FwdSubst, F, true), (RuleId::BwdSubst, B, false)];
        for (rule, dir, primary_left) in substitutions {
            let ((pxy, pz_slash, pz, pf), (sy, s_slash, sz, sf)) = if primary_left {
                ((lx, ls, ly, &l.lf), (rx, rs, ry, &r.lf))
            } else {
                ((rx, rs, ry, &r.lf), (lx, ls, ly, &l.lf))
            };
            if pz_slash.direction != dir
                || s_slash.direction != dir
                || !modality_admits(rule, pz_slash.modality)
                || !modality_admits(rule, s_slash.modality)
                || !cancellable(pz)
            {
                continue;
            }
            let Some((x, inner, y)) = split(pxy) else {
                continue;
            };
            if inner.direction != dir || !cancellable(y) {
                continue;
            }
            let Some(b) = unify(pz, sz, &none).and_then(|b| unify(y, sy, &b)) else {
                continue;
            };
            let cat = Category::functor(b.apply(x), s_slash, b.apply(pz));
            let v = fresh_name("v", &both_closed(pf, sf));
            let lf = LfTerm::abs(
                &v,
                LfTerm::apply(
                    pf.clone(),
                    [LfTerm::var(&v), LfTerm::app(sf.clone(), LfTerm::var(&v))],
                ),
            );
            raw.push((rule, cat, lf));
        }
    }

    let mut out = Vec::with_capacity(raw.len());
    for (rule, category, lf) in raw {
        if validate_category(&category).is_empty() {
            out.push(Candidate {
                category,
                lf: beta_normalize(&lf, max_steps)?,
                rule,
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Goal {
    Any,
    Category(Category),
}

impl Goal {
    pub fn accepts(&self, category: &Category) -> bool {
        match self {
            Goal::Any => true,
            Goal::Category(goal) => unify(goal, category, &Bindings::new()).is_some(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ParseOptions {
    pub goal: Goal,
    /// Pack edges by (category, LF alpha-class). Off enumerates derivations.
    pub pack: bool,
    pub max_steps: usize,
    pub max_tokens: usize,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            goal: Goal::Any,
            pack: true,
            max_steps: DEFAULT_MAX_STEPS,
            max_tokens: DEFAULT_MAX_TOKENS,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("EMPTY_INPUT: nothing to parse")]
    EmptyInput,
    #[error("TOO_LONG: {len} tokens exceeds the limit of {max}")]
    TooLong { len: usize, max: usize },
    #[error("UNKNOWN_TOKEN: {token:?} at position {position} has no lexical entry")]
    UnknownToken { token: String, position: usize },
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
}

impl ParseError {
    pub fn code(&self) -> &'static str {
        match self {
            ParseError::EmptyInput => "EMPTY_INPUT",
            ParseError::TooLong { .. } => "TOO_LONG",
            ParseError::UnknownToken { .. } => "UNKNOWN_TOKEN",
            ParseError::Normalize(_) => "BUDGET_EXCEEDED",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ParseResult {
    pub chart: Chart,
    /// Spanning edges accepted by the goal, in discovery order.
    pub readings: Vec<EdgeId>,
}

/// Seeds a chart with every lexical edge, failing on a token no entry covers.
pub fn seed_chart(lex: &Lexicon, tokens: &[String], pack: bool) -> Result<Chart, ParseError> {
    let mut chart = Chart::new(tokens.to_vec(), lex.config().weight_threshold, pack);
    let mut covered = vec![false; tokens.len()];
    for start in 0..tokens.len() {
        for (entry, len) in lookup(lex, tokens, start) {
            covered[start..start + len]
                .iter_mut()
                .for_each(|c| *c = true);
            let edge = chart.lexical_edge(&entry, start);
            chart.insert(edge);
        }
    }
    if let Some(position) = covered.iter().position(|c| !c) {
        return Err(ParseError::UnknownToken {
            token: tokens[position].clone(),
            position,
        });
    }
    Ok(chart)
}

pub fn check_length(tokens: &[String], max_tokens: usize) -> Result<(), ParseError> {
    if tokens.is_empty() {
        return Err(ParseError::EmptyInput);
    }
    if tokens.len() > max_tokens {
        return Err(ParseError::TooLong {
            len: tokens.len(),
            max: max_tokens,
        });
    }
    Ok(())
}

/// Exhaustive bottom-up parse of `tokens`.
pub fn parse(
    lex: &Lexicon,
    tokens: &[String],
    options: &ParseOptions,
) -> Result<ParseResult, ParseError> {
    check_length(tokens, options.max_tokens)?;
    let mut chart = seed_chart(lex, tokens, options.pack)?;
    let n = tokens.len();
    for width in 2..=n {
        for start in 0..=n - width {
            let end = start + width;
            for mid in start + 1..end {
                let lefts = chart.cell(start, mid).to_vec();
                let rights = chart.cell(mid, end).to_vec();
                for &l in &lefts {
                    for &r in &rights {
                        for c in combine(&chart, l, r, options.max_steps)? {
                            chart.insert(Edge {
                                span: (start, end),
                                category: c.category,
                                lf: c.lf,
                                rule: EdgeRule::Rule(c.rule),
                                children: vec![l, r],
                                entry: None,
                            });
                        }
                    }
                }
            }
        }
    }
    // Edges kept apart only by their lexc value are one reading.
    let mut seen = HashSet::new();
    let readings = chart
        .cell(0, n)
        .iter()
        .copied()
        .filter(|&id| options.goal.accepts(&chart.edge(id).category))
        .filter(|&id| {
            let e = chart.edge(id);
            !options.pack || seen.insert((e.category.canonical(), e.lf.alpha_key()))
        })
        .collect();
    Ok(ParseResult { chart, readings })
}
