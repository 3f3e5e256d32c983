//! Derivation documents: ASCII proof displays and a JSON form.
//!
//! The JSON document has this shape (field order is fixed):
//!
//! ```json
//! {
//!   "sentence": ["John", "left"],
//!   "readings": [
//!     { "category": "S", "lf": "leave j",
//!       "tree": { "span": [0, 2], "category": "S", "lf": "leave j", "rule": "<",
//!                 "children": [ ... ] } }
//!   ],
//!   "near_misses": []
//! }
//! ```

use serde::{Deserialize, Serialize};

use crate::parser::{EdgeId, ParseResult};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeNode {
    pub span: [usize; 2],
    pub category: String,
    pub lf: String,
    pub rule: String,
    pub children: Vec<TreeNode>,
}

impl TreeNode {
    fn height(&self) -> usize {
        self.children
            .iter()
            .map(|c| c.height() + 1)
            .max()
            .unwrap_or(0)
    }

    /// Every rule label used in the tree.
    pub fn labels(&self) -> Vec<&str> {
        let mut out = vec![self.rule.as_str()];
        for c in &self.children {
            out.extend(c.labels());
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reading {
    pub category: String,
    pub lf: String,
    pub tree: TreeNode,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NearMiss {
    pub span: [usize; 2],
    pub category: String,
    pub lf: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationDoc {
    pub sentence: Vec<String>,
    pub readings: Vec<Reading>,
    /// Longest-span edges, filled only when there is no reading.
    pub near_misses: Vec<NearMiss>,
}

pub const RULE_LABELS: [&str; 9] = ["LEX", ">", "<", ">B", "<B", ">Bx", "<Bx", ">S", "<S"];

impl DerivationDoc {
    pub fn from_parse(result: &ParseResult) -> Self {
        let chart = &result.chart;
        let node = |id: EdgeId| build_node(result, id);
        let mut readings: Vec<Reading> = result
            .readings
            .iter()
            .map(|&id| {
                let tree = node(id);
                Reading {
                    category: tree.category.clone(),
                    lf: tree.lf.clone(),
                    tree,
                }
            })
            .collect();
        readings.sort_by(|a, b| (&a.category, &a.lf).cmp(&(&b.category, &b.lf)));
        let mut near_misses = Vec::new();
        if readings.is_empty() {
            near_misses = chart
                .near_misses()
                .into_iter()
                .map(|id| {
                    let e = chart.edge(id);
                    NearMiss {
                        span: [e.span.0, e.span.1],
                        category: e.category.display_names().to_string(),
                        lf: e.lf.to_string(),
                    }
                })
                .collect();
            near_misses
                .sort_by(|a, b| (a.span, &a.category, &a.lf).cmp(&(b.span, &b.category, &b.lf)));
            near_misses.dedup();
        }
        DerivationDoc {
            sentence: chart.tokens().to_vec(),
            readings,
            near_misses,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// One block per reading, or a NO PARSE block with the near misses.
    pub fn render_ascii(&self) -> String {
        let mut out = String::new();
        if self.readings.is_empty() {
            out.push_str(&format!("NO PARSE: {}\n", self.sentence.join(" ")));
            if let Some(first) = self.near_misses.first() {
                let width = first.span[1] - first.span[0];
                out.push_str(&format!(
                    "near misses (longest span {width} of {} tokens):\n",
                    self.sentence.len()
                ));
                for m in &self.near_misses {
                    out.push_str(&format!(
                        "  [{},{}] {} : {}\n",
                        m.span[0], m.span[1], m.category, m.lf
                    ));
                }
            }
            return out;
        }
        let total = self.readings.len();
        for (i, reading) in self.readings.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            out.push_str(&format!("# reading {} of {total}\n", i + 1));
            out.push_str(&render_tree(&self.sentence, &reading.tree));
        }
        out
    }
}

fn build_node(result: &ParseResult, id: EdgeId) -> TreeNode {
    let e = result.chart.edge(id);
    TreeNode {
        span: [e.span.0, e.span.1],
        category: e.category.display_names().to_string(),
        lf: e.lf.to_string(),
        rule: e.rule.label().to_string(),
        children: e.children.iter().map(|&c| build_node(result, c)).collect(),
    }
}

/// Tokens on top; beneath them, bottom-up, an underline with the rule label
/// for each constituent followed by its `category : lf` line.
fn render_tree(tokens: &[String], root: &TreeNode) -> String {
    let widths: Vec<usize> = tokens.iter().map(|t| t.chars().count()).collect();
    let mut columns = Vec::with_capacity(tokens.len());
    let mut at = 0;
    for w in &widths {
        columns.push(at);
        at += w + 2;
    }
    let mut out = tokens.join("  ");
    out.push('\n');

    let mut nodes = Vec::new();
    collect(root, &mut nodes);
    nodes.sort_by_key(|n| (n.height(), n.span[0], n.span[1]));
    for n in nodes {
        let (s, e) = (n.span[0], n.span[1]);
        let indent = columns[s];
        let end = columns[e - 1] + widths[e - 1];
        out.push_str(&" ".repeat(indent));
        out.push_str(&"-".repeat((end - indent).max(1)));
        out.push_str(&n.rule);
        out.push('\n');
        out.push_str(&" ".repeat(indent));
        out.push_str(&format!("{} : {}\n", n.category, n.lf));
    }
    out
}

fn collect<'a>(node: &'a TreeNode, out: &mut Vec<&'a TreeNode>) {
    out.push(node);
    for c in &node.children {
        collect(c, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::{parse_lexicon, tokenize};
    use crate::parser::{parse, ParseOptions};

    fn doc(lexicon: &str, sentence: &str) -> DerivationDoc {
        let lex = parse_lexicon(lexicon).unwrap();
        let res = parse(&lex, &tokenize(sentence, false), &ParseOptions::default()).unwrap();
        DerivationDoc::from_parse(&res)
    }

    const LEX: &str =
        r"John := NP : j ; left := S\NP : \y. leave y ; saw := (S\NP)/NP : \x\y. see x y ;";

    #[test]
    fn single_lexical_edge() {
        let d = doc(LEX, "John");
        assert_eq!(
            d.render_ascii(),
            "# reading 1 of 1\nJohn\n----LEX\nNP : j\n"
        );
    }

    #[test]
    fn binary_derivation() {
        let d = doc(LEX, "John left");
        assert_eq!(
            d.render_ascii(),
            "# reading 1 of 1\n\
             John  left\n\
             ----LEX\n\
             NP : j\n\
             \x20     ----LEX\n\
             \x20     S\\NP : \\y. leave y\n\
             ----------<\n\
             S : leave j\n"
        );
    }

    #[test]
    fn no_parse_lists_near_misses() {
        let d = doc(LEX, "saw John left");
        assert!(d.readings.is_empty());
        let text = d.render_ascii();
        assert!(text.starts_with("NO PARSE: saw John left\n"), "{text}");
        assert!(text.contains("[0,2] S\\NP : \\y. see j y"), "{text}");
        assert!(text.contains("[1,3] S : leave j"), "{text}");
    }

    #[test]
    fn json_shape_and_round_trip() {
        let d = doc(LEX, "John left");
        let json = d.to_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["sentence"], serde_json::json!(["John", "left"]));
        assert_eq!(v["readings"][0]["tree"]["rule"], "<");
        assert_eq!(DerivationDoc::from_json(&json).unwrap(), d);
        let empty = doc(LEX, "saw John left");
        assert!(empty.to_json().contains("\"readings\": []"));
        assert_eq!(DerivationDoc::from_json(&empty.to_json()).unwrap(), empty);
    }

    #[test]
    fn readings_are_sorted() {
        let d = doc(r"b := S : b ; a := S : a ; a := NP : z ;", "a");
        let keys: Vec<_> = d
            .readings
            .iter()
            .map(|r| (r.category.as_str(), r.lf.as_str()))
            .collect();
        assert_eq!(keys, vec![("NP", "z"), ("S", "a")]);
    }
}
