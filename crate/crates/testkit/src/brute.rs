//! Reading sets by exhaustive enumeration of binary bracketings.
//!
//! Every segmentation of the sentence into lexical items and every binary
//! tree over it is evaluated on its own, bottom-up, with the library's
//! `combine`. Nothing is shared between trees, so a packing or scheduling
//! error in the chart parser shows up as a difference in the reading set.

use std::collections::BTreeSet;

use idiomccg::lexicon::{lookup, Lexicon};
use idiomccg::parser::{check_length, combine, Chart, Edge, EdgeId, EdgeRule};

use crate::terms::to_db;

#[derive(Clone, Debug)]
pub enum Bracketing {
    Leaf(usize, usize),
    Node(Box<Bracketing>, Box<Bracketing>),
}

impl Bracketing {
    fn span(&self) -> (usize, usize) {
        match self {
            Bracketing::Leaf(s, e) => (*s, *e),
            Bracketing::Node(l, r) => (l.span().0, r.span().1),
        }
    }
}

/// All bracketings of `start..end` whose leaves are lexical spans.
pub fn bracketings(
    lexical: &BTreeSet<(usize, usize)>,
    start: usize,
    end: usize,
) -> Vec<Bracketing> {
    let mut out = Vec::new();
    if lexical.contains(&(start, end)) {
        out.push(Bracketing::Leaf(start, end));
    }
    for mid in start + 1..end {
        let lefts = bracketings(lexical, start, mid);
        if lefts.is_empty() {
            continue;
        }
        let rights = bracketings(lexical, mid, end);
        for l in &lefts {
            for r in &rights {
                out.push(Bracketing::Node(Box::new(l.clone()), Box::new(r.clone())));
            }
        }
    }
    out
}

/// A reading as compared by the oracle: canonical category text and the
/// nameless LF.
pub type ReadingKey = (String, String);

pub fn reading_key(edge: &Edge) -> ReadingKey {
    (
        edge.category.canonical().to_string(),
        format!("{:?}", to_db(&edge.lf)),
    )
}

/// Union over all bracketings of the spanning results. `None` when the
/// sentence cannot be seeded (empty, too long, or an uncovered token).
pub fn brute_force_readings(
    lex: &Lexicon,
    tokens: &[String],
    max_steps: usize,
) -> Option<BTreeSet<ReadingKey>> {
    check_length(tokens, usize::MAX).ok()?;
    let mut chart = Chart::new(tokens.to_vec(), lex.config().weight_threshold, false);
    let mut lexical = BTreeSet::new();
    let mut covered = vec![false; tokens.len()];
    for start in 0..tokens.len() {
        for (entry, len) in lookup(lex, tokens, start) {
            let edge = chart.lexical_edge(&entry, start);
            chart.insert(edge);
            lexical.insert((start, start + len));
            covered[start..start + len]
                .iter_mut()
                .for_each(|c| *c = true);
        }
    }
    if covered.contains(&false) {
        return None;
    }
    let mut readings = BTreeSet::new();
    for tree in bracketings(&lexical, 0, tokens.len()) {
        for id in evaluate(&mut chart, &tree, max_steps) {
            readings.insert(reading_key(chart.edge(id)));
        }
    }
    Some(readings)
}

/// Every result of one bracketing, duplicates included.
fn evaluate(chart: &mut Chart, tree: &Bracketing, max_steps: usize) -> Vec<EdgeId> {
    match tree {
        Bracketing::Leaf(s, e) => chart
            .cell(*s, *e)
            .iter()
            .copied()
            .filter(|&id| chart.edge(id).rule == EdgeRule::Lex)
            .collect(),
        Bracketing::Node(l, r) => {
            let lefts = evaluate(chart, l, max_steps);
            let rights = evaluate(chart, r, max_steps);
            let span = tree.span();
            let mut out = Vec::new();
            for &a in &lefts {
                for &b in &rights {
                    let results =
                        combine(chart, a, b, max_steps).expect("normalization within budget");
                    for c in results {
                        let id = chart
                            .insert(Edge {
                                span,
                                category: c.category,
                                lf: c.lf,
                                rule: EdgeRule::Rule(c.rule),
                                children: vec![a, b],
                                entry: None,
                            })
                            .expect("unpacked chart keeps every edge");
                        out.push(id);
                    }
                }
            }
            out
        }
    }
}
