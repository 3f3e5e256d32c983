//! Regression suites: one sentence per line with its expected readings.
//!
//! ```text
//! # sentence <TAB> reading count <TAB> LF | LF ...   (or "-" to skip LFs)
//! John persuaded Mary to hit Harry<TAB>1<TAB>persuade (hit h m) m j
//! I twiddled his thumbs<TAB>0<TAB>-
//! ```

use std::fmt;

use thiserror::Error;

use crate::lexicon::{tokenize, Lexicon};
use crate::logical_form::{alpha_eq, beta_normalize, parse_lf, LfTerm};
use crate::parser::{parse, ParseOptions};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteCase {
    pub line: usize,
    pub sentence: String,
    pub count: usize,
    /// `None` when the line says `-`.
    pub lfs: Option<Vec<LfTerm>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("suite line {line}: {message}")]
pub struct SuiteSyntaxError {
    pub line: usize,
    pub message: String,
}

pub fn parse_suite(text: &str) -> Result<Vec<SuiteCase>, SuiteSyntaxError> {
    let mut cases = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let raw = raw.trim_end_matches('\r');
        if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
            continue;
        }
        let err = |message: String| SuiteSyntaxError { line, message };
        let fields: Vec<&str> = raw.split('\t').collect();
        let [sentence, count, lfs] = fields.as_slice() else {
            return Err(err(format!(
                "expected 3 tab-separated fields, found {}",
                fields.len()
            )));
        };
        let sentence = sentence.trim();
        if sentence.is_empty() {
            return Err(err("empty sentence".into()));
        }
        let count = count
            .trim()
            .parse::<usize>()
            .map_err(|_| err(format!("reading count {:?} is not a number", count.trim())))?;
        let lfs = match lfs.trim() {
            "-" => None,
            text => Some(
                text.split('|')
                    .map(|t| parse_lf(t.trim()).map_err(|e| err(e.to_string())))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
        };
        cases.push(SuiteCase {
            line,
            sentence: sentence.to_string(),
            count,
            lfs,
        });
    }
    Ok(cases)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseOutcome {
    pub line: usize,
    pub sentence: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CaseOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict}  {:>4}  {}", self.line, self.sentence)?;
        if !self.detail.is_empty() {
            write!(f, "  ({})", self.detail)?;
        }
        Ok(())
    }
}

/// Parses each case and compares the reading count and, where given, the
/// readings' LFs (as a set, up to alpha-equivalence after normalization).
/// A parse error is a failed case, not an abort.
pub fn run_case(
    lex: &Lexicon,
    case: &SuiteCase,
    options: &ParseOptions,
    case_fold: bool,
) -> CaseOutcome {
    let outcome = |passed, detail: String| CaseOutcome {
        line: case.line,
        sentence: case.sentence.clone(),
        passed,
        detail,
    };
    let result = match parse(lex, &tokenize(&case.sentence, case_fold), options) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let found: Vec<&LfTerm> = result
        .readings
        .iter()
        .map(|&id| &result.chart.edge(id).lf)
        .collect();
    if found.len() != case.count {
        return outcome(
            false,
            format!("expected {} readings, found {}", case.count, found.len()),
        );
    }
    let Some(expected) = &case.lfs else {
        return outcome(true, String::new());
    };
    let mut wanted = Vec::with_capacity(expected.len());
    for lf in expected {
        match beta_normalize(lf, options.max_steps) {
            Ok(n) => wanted.push(n),
            Err(e) => return outcome(false, format!("expected LF: {e}")),
        }
    }
    if let Some(missing) = wanted
        .iter()
        .find(|w| !found.iter().any(|f| alpha_eq(f, w)))
    {
        return outcome(false, format!("no reading with LF {missing}"));
    }
    if let Some(extra) = found
        .iter()
        .find(|f| !wanted.iter().any(|w| alpha_eq(f, w)))
    {
        return outcome(false, format!("unexpected reading {extra}"));
    }
    outcome(true, String::new())
}

pub fn run_suite(
    lex: &Lexicon,
    cases: &[SuiteCase],
    options: &ParseOptions,
    case_fold: bool,
) -> Vec<CaseOutcome> {
    cases
        .iter()
        .map(|c| run_case(lex, c, options, case_fold))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::parse_lexicon;

    const LEX: &str = r"John := NP : j ; left := S\NP : \y. leave y ;";

    #[test]
    fn parses_lines() {
        let cases = parse_suite(
            "# comment\n\nJohn left\t1\tleave j\nJohn\t1\t- \nleft\t1\t\\y. leave y | x\n",
        )
        .unwrap();
        assert_eq!(cases.len(), 3);
        assert_eq!(cases[0].line, 3);
        assert_eq!(cases[1].lfs, None);
        assert_eq!(cases[2].lfs.as_ref().unwrap().len(), 2);
    }

    #[test]
    fn malformed_lines() {
        assert_eq!(parse_suite("John left 1 -\n").unwrap_err().line, 1);
        assert_eq!(parse_suite("ok\t1\t-\nJohn\tone\t-\n").unwrap_err().line, 2);
        assert_eq!(parse_suite("John\t1\t(leave\n").unwrap_err().line, 1);
        assert!(parse_suite("").unwrap().is_empty());
    }

    #[test]
    fn verdicts() {
        let lex = parse_lexicon(LEX).unwrap();
        let cases = parse_suite(
            "John left\t1\t(\\x. leave x) j\nJohn left\t1\tleave m\nJohn left\t2\t-\nJohn\t1\t-\nJohn xyzzy\t0\t-\n",
        )
        .unwrap();
        let passed: Vec<bool> = run_suite(&lex, &cases, &ParseOptions::default(), false)
            .iter()
            .map(|o| o.passed)
            .collect();
        assert_eq!(passed, vec![true, false, false, true, false]);
    }
}
