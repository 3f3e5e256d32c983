//! Lambda-calculus logical forms.
//!
//! Constants may carry contingency subscripts (`die_{x} y`). Subscripts are
//! ordinary subterms: substitution, reduction and comparison all descend
//! into them.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Name of the conjunction constant printed infix as `&`.
pub const AND: &str = "and";

/// Default reduction-step budget.
pub const DEFAULT_MAX_STEPS: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LfTerm {
    Var(String),
    Const {
        name: String,
        contingencies: Vec<LfTerm>,
    },
    Abs {
        var: String,
        body: Box<LfTerm>,
    },
    App {
        fun: Box<LfTerm>,
        arg: Box<LfTerm>,
    },
}

impl LfTerm {
    pub fn var(name: &str) -> Self {
        LfTerm::Var(name.to_string())
    }

    pub fn constant(name: &str) -> Self {
        LfTerm::Const {
            name: name.to_string(),
            contingencies: Vec::new(),
        }
    }

    pub fn subscripted(name: &str, contingencies: Vec<LfTerm>) -> Self {
        LfTerm::Const {
            name: name.to_string(),
            contingencies,
        }
    }

    pub fn abs(var: &str, body: LfTerm) -> Self {
        LfTerm::Abs {
            var: var.to_string(),
            body: Box::new(body),
        }
    }

    pub fn app(fun: LfTerm, arg: LfTerm) -> Self {
        LfTerm::App {
            fun: Box::new(fun),
            arg: Box::new(arg),
        }
    }

    /// Left-associated application `fun a1 a2 ...`.
    pub fn apply(fun: LfTerm, args: impl IntoIterator<Item = LfTerm>) -> Self {
        args.into_iter().fold(fun, LfTerm::app)
    }

    pub fn and(left: LfTerm, right: LfTerm) -> Self {
        LfTerm::apply(LfTerm::constant(AND), [left, right])
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            LfTerm::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            LfTerm::Const { contingencies, .. } => {
                for c in contingencies {
                    c.collect_free(bound, out);
                }
            }
            LfTerm::Abs { var, body } => {
                bound.push(var.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            LfTerm::App { fun, arg } => {
                fun.collect_free(bound, out);
                arg.collect_free(bound, out);
            }
        }
    }

    fn occurs_free(&self, v: &str) -> bool {
        match self {
            LfTerm::Var(x) => x == v,
            LfTerm::Const { contingencies, .. } => contingencies.iter().any(|c| c.occurs_free(v)),
            LfTerm::Abs { var, body } => var != v && body.occurs_free(v),
            LfTerm::App { fun, arg } => fun.occurs_free(v) || arg.occurs_free(v),
        }
    }

    /// Every constant name in the term, subscripts included.
    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |t| {
            if let LfTerm::Const { name, .. } = t {
                out.insert(name.clone());
            }
        });
        out
    }

    pub fn contains_constant(&self, name: &str) -> bool {
        self.constants().contains(name)
    }

    /// Whether any constant carries a contingency subscript.
    pub fn has_contingency(&self) -> bool {
        let mut found = false;
        self.visit(&mut |t| {
            if let LfTerm::Const { contingencies, .. } = t {
                found |= !contingencies.is_empty();
            }
        });
        found
    }

    fn visit(&self, f: &mut impl FnMut(&LfTerm)) {
        f(self);
        match self {
            LfTerm::Var(_) => {}
            LfTerm::Const { contingencies, .. } => contingencies.iter().for_each(|c| c.visit(f)),
            LfTerm::Abs { body, .. } => body.visit(f),
            LfTerm::App { fun, arg } => {
                fun.visit(f);
                arg.visit(f);
            }
        }
    }

    /// Number of leading abstractions.
    pub fn leading_abstractions(&self) -> usize {
        match self {
            LfTerm::Abs { body, .. } => 1 + body.leading_abstractions(),
            _ => 0,
        }
    }

    /// The leading binders and the body beneath them.
    pub fn strip_abstractions(&self) -> (Vec<&str>, &LfTerm) {
        let mut vars = Vec::new();
        let mut t = self;
        while let LfTerm::Abs { var, body } = t {
            vars.push(var.as_str());
            t = body;
        }
        (vars, t)
    }

    /// Head of an application spine and its arguments, left to right.
    pub fn spine(&self) -> (&LfTerm, Vec<&LfTerm>) {
        let mut args = Vec::new();
        let mut t = self;
        while let LfTerm::App { fun, arg } = t {
            args.push(arg.as_ref());
            t = fun;
        }
        args.reverse();
        (t, args)
    }

    /// The constant heading the predicate-argument structure beneath any
    /// leading abstractions, if there is one.
    pub fn head_constant(&self) -> Option<&str> {
        let (_, body) = self.strip_abstractions();
        match body.spine().0 {
            LfTerm::Const { name, .. } => Some(name),
            _ => None,
        }
    }

    fn size(&self) -> usize {
        match self {
            LfTerm::Var(_) => 1,
            LfTerm::Const { contingencies, .. } => {
                1 + contingencies.iter().map(LfTerm::size).sum::<usize>()
            }
            LfTerm::Abs { body, .. } => 1 + body.size(),
            LfTerm::App { fun, arg } => 1 + fun.size() + arg.size(),
        }
    }

    /// A string equal for two terms iff they are alpha-equivalent.
    pub fn alpha_key(&self) -> String {
        let mut out = String::with_capacity(self.size() * 4);
        self.write_alpha_key(&mut Vec::new(), &mut out);
        out
    }

    fn write_alpha_key(&self, bound: &mut Vec<String>, out: &mut String) {
        match self {
            LfTerm::Var(x) => match bound.iter().rposition(|b| b == x) {
                Some(i) => {
                    out.push('%');
                    out.push_str(&(bound.len() - 1 - i).to_string());
                }
                None => {
                    out.push('$');
                    out.push_str(x);
                }
            },
            LfTerm::Const {
                name,
                contingencies,
            } => {
                out.push_str(name);
                if !contingencies.is_empty() {
                    out.push('{');
                    for (i, c) in contingencies.iter().enumerate() {
                        if i > 0 {
                            out.push(',');
                        }
                        c.write_alpha_key(bound, out);
                    }
                    out.push('}');
                }
            }
            LfTerm::Abs { var, body } => {
                out.push_str("(\\ ");
                bound.push(var.clone());
                body.write_alpha_key(bound, out);
                bound.pop();
                out.push(')');
            }
            LfTerm::App { fun, arg } => {
                out.push_str("(@ ");
                fun.write_alpha_key(bound, out);
                out.push(' ');
                arg.write_alpha_key(bound, out);
                out.push(')');
            }
        }
    }
}

/// A name based on `base` that is not in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "v" } else { stem };
    (1..)
        .map(|i| format!("{stem}{i}"))
        .find(|n| !avoid.contains(n))
        .expect("unbounded name supply")
}

/// Capture-avoiding substitution of `replacement` for free `var` in `term`,
/// subscripts included.
pub fn substitute(term: &LfTerm, var: &str, replacement: &LfTerm) -> LfTerm {
    let fv = replacement.free_vars();
    subst(term, var, replacement, &fv)
}

fn subst(term: &LfTerm, var: &str, replacement: &LfTerm, fv: &BTreeSet<String>) -> LfTerm {
    match term {
        LfTerm::Var(x) if x == var => replacement.clone(),
        LfTerm::Var(_) => term.clone(),
        LfTerm::Const {
            name,
            contingencies,
        } => LfTerm::Const {
            name: name.clone(),
            contingencies: contingencies
                .iter()
                .map(|c| subst(c, var, replacement, fv))
                .collect(),
        },
        LfTerm::App { fun, arg } => LfTerm::app(
            subst(fun, var, replacement, fv),
            subst(arg, var, replacement, fv),
        ),
        LfTerm::Abs { var: bound, .. } if bound == var => term.clone(),
        LfTerm::Abs { var: bound, body } => {
            if !body.occurs_free(var) {
                return term.clone();
            }
            if fv.contains(bound) {
                let mut avoid = fv.clone();
                avoid.extend(body.free_vars());
                avoid.insert(var.to_string());
                let renamed = fresh_name(bound, &avoid);
                let body = substitute(body, bound, &LfTerm::Var(renamed.clone()));
                LfTerm::abs(&renamed, subst(&body, var, replacement, fv))
            } else {
                LfTerm::abs(bound, subst(body, var, replacement, fv))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("BUDGET_EXCEEDED: no normal form within {0} reduction steps")]
    BudgetExceeded(usize),
}

/// Normal-order (leftmost-outermost) beta normalization. Reduction descends
/// into contingency subscripts. Fails once more than `max_steps`
/// contractions have been made.
pub fn beta_normalize(term: &LfTerm, max_steps: usize) -> Result<LfTerm, NormalizeError> {
    let mut steps = 0;
    normal_order(term.clone(), &mut steps, max_steps)
}

fn normal_order(
    mut term: LfTerm,
    steps: &mut usize,
    max_steps: usize,
) -> Result<LfTerm, NormalizeError> {
    // Contract head redexes until the term is in weak head normal form.
    loop {
        match term {
            LfTerm::Abs { var, body } => {
                let body = normal_order(*body, steps, max_steps)?;
                return Ok(LfTerm::Abs {
                    var,
                    body: Box::new(body),
                });
            }
            _ => {
                let (head, args) = unwind(term);
                match head {
                    LfTerm::Abs { var, body } if !args.is_empty() => {
                        *steps += 1;
                        if *steps > max_steps {
                            return Err(NormalizeError::BudgetExceeded(max_steps));
                        }
                        let mut args = args.into_iter();
                        let first = args.next().expect("non-empty");
                        term = LfTerm::apply(substitute(&body, &var, &first), args);
                    }
                    head => {
                        let head = match head {
                            LfTerm::Const {
                                name,
                                contingencies,
                            } => LfTerm::Const {
                                name,
                                contingencies: contingencies
                                    .into_iter()
                                    .map(|c| normal_order(c, steps, max_steps))
                                    .collect::<Result<_, _>>()?,
                            },
                            other => other,
                        };
                        let args = args
                            .into_iter()
                            .map(|a| normal_order(a, steps, max_steps))
                            .collect::<Result<Vec<_>, _>>()?;
                        return Ok(LfTerm::apply(head, args));
                    }
                }
            }
        }
    }
}

fn unwind(term: LfTerm) -> (LfTerm, Vec<LfTerm>) {
    let mut args = Vec::new();
    let mut t = term;
    while let LfTerm::App { fun, arg } = t {
        args.push(*arg);
        t = *fun;
    }
    args.reverse();
    (t, args)
}

/// Equality up to consistent renaming of bound variables.
pub fn alpha_eq(a: &LfTerm, b: &LfTerm) -> bool {
    alpha_eq_in(a, b, &mut Vec::new(), &mut Vec::new())
}

fn alpha_eq_in(a: &LfTerm, b: &LfTerm, env_a: &mut Vec<String>, env_b: &mut Vec<String>) -> bool {
    match (a, b) {
        (LfTerm::Var(x), LfTerm::Var(y)) => {
            let ia = env_a.iter().rposition(|v| v == x);
            let ib = env_b.iter().rposition(|v| v == y);
            match (ia, ib) {
                (Some(i), Some(j)) => env_a.len() - i == env_b.len() - j,
                (None, None) => x == y,
                _ => false,
            }
        }
        (
            LfTerm::Const {
                name: na,
                contingencies: ca,
            },
            LfTerm::Const {
                name: nb,
                contingencies: cb,
            },
        ) => {
            na == nb
                && ca.len() == cb.len()
                && ca
                    .iter()
                    .zip(cb)
                    .all(|(x, y)| alpha_eq_in(x, y, env_a, env_b))
        }
        (LfTerm::Abs { var: va, body: ba }, LfTerm::Abs { var: vb, body: bb }) => {
            env_a.push(va.clone());
            env_b.push(vb.clone());
            let eq = alpha_eq_in(ba, bb, env_a, env_b);
            env_a.pop();
            env_b.pop();
            eq
        }
        (LfTerm::App { fun: fa, arg: aa }, LfTerm::App { fun: fb, arg: ab }) => {
            alpha_eq_in(fa, fb, env_a, env_b) && alpha_eq_in(aa, ab, env_a, env_b)
        }
        _ => false,
    }
}

fn as_conjunction(t: &LfTerm) -> Option<(&LfTerm, &LfTerm)> {
    if let LfTerm::App { fun, arg: right } = t {
        if let LfTerm::App {
            fun: head,
            arg: left,
        } = fun.as_ref()
        {
            if let LfTerm::Const {
                name,
                contingencies,
            } = head.as_ref()
            {
                if name == AND && contingencies.is_empty() {
                    return Some((left, right));
                }
            }
        }
    }
    None
}

/// Deterministic linear rendering, readable back by [`parse_lf`].
pub fn pretty_print(term: &LfTerm) -> String {
    let mut out = String::new();
    Printer::default().top(term, &mut out);
    out
}

impl fmt::Display for LfTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty_print(self))
    }
}

/// Tracks the printed name of each enclosing binder. Binders are renamed
/// when their name would capture a constant or an outer variable on reading.
#[derive(Default)]
struct Printer {
    scope: Vec<(String, String)>,
}

impl Printer {
    fn printed_var(&self, x: &str) -> String {
        self.scope
            .iter()
            .rev()
            .find(|(orig, _)| orig == x)
            .map(|(_, printed)| printed.clone())
            .unwrap_or_else(|| x.to_string())
    }

    fn top(&mut self, t: &LfTerm, out: &mut String) {
        if let LfTerm::Abs { .. } = t {
            self.abstraction(t, out);
        } else if let Some((left, right)) = as_conjunction(t) {
            self.conjunct(left, true, out);
            out.push_str(" & ");
            self.conjunct(right, false, out);
        } else {
            self.application(t, out);
        }
    }

    fn conjunct(&mut self, t: &LfTerm, left: bool, out: &mut String) {
        let needs_parens =
            matches!(t, LfTerm::Abs { .. }) || (!left && as_conjunction(t).is_some());
        if needs_parens {
            out.push('(');
            self.top(t, out);
            out.push(')');
        } else {
            self.top(t, out);
        }
    }

    fn abstraction(&mut self, t: &LfTerm, out: &mut String) {
        let mut pushed = 0;
        let mut t = t;
        while let LfTerm::Abs { var, body } = t {
            let mut avoid: BTreeSet<String> = body.constants();
            for free in t.free_vars() {
                avoid.insert(self.printed_var(&free));
            }
            let printed = if avoid.contains(var) {
                fresh_name(var, &avoid)
            } else {
                var.clone()
            };
            out.push('\\');
            out.push_str(&printed);
            self.scope.push((var.clone(), printed));
            pushed += 1;
            t = body;
        }
        out.push_str(". ");
        self.top(t, out);
        for _ in 0..pushed {
            self.scope.pop();
        }
    }

    fn application(&mut self, t: &LfTerm, out: &mut String) {
        let (head, args) = t.spine();
        self.atom_or_parens(head, out);
        for a in args {
            out.push(' ');
            self.atom_or_parens(a, out);
        }
    }

    fn atom_or_parens(&mut self, t: &LfTerm, out: &mut String) {
        match t {
            LfTerm::Var(x) => out.push_str(&self.printed_var(x)),
            LfTerm::Const {
                name,
                contingencies,
            } => {
                out.push_str(name);
                if !contingencies.is_empty() {
                    out.push_str("_{");
                    for (i, c) in contingencies.iter().enumerate() {
                        if i > 0 {
                            out.push_str(", ");
                        }
                        self.top(c, out);
                    }
                    out.push('}');
                }
            }
            _ => {
                out.push('(');
                self.top(t, out);
                out.push(')');
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("logical form syntax error at column {column}: {message}")]
pub struct LfSyntaxError {
    pub column: usize,
    pub message: String,
}

/// Reads the linear LF syntax: `\x\y. body`, juxtaposition, infix `&`,
/// `_x` / `_{t, u}` subscripts. Identifiers bound by an enclosing lambda are
/// variables; all others are constants.
pub fn parse_lf(text: &str) -> Result<LfTerm, LfSyntaxError> {
    let mut r = LfReader {
        chars: text.chars().collect(),
        pos: 0,
        scope: Vec::new(),
    };
    let t = r.term()?;
    r.skip_ws();
    if r.pos < r.chars.len() {
        return Err(r.error(format!("unexpected '{}'", r.chars[r.pos])));
    }
    Ok(t)
}

impl FromStr for LfTerm {
    type Err = LfSyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_lf(s)
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '\'' || c == '-'
}

struct LfReader {
    chars: Vec<char>,
    pos: usize,
    scope: Vec<String>,
}

impl LfReader {
    fn error(&self, message: impl Into<String>) -> LfSyntaxError {
        LfSyntaxError {
            column: self.pos + 1,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<LfTerm, LfSyntaxError> {
        self.skip_ws();
        if self.peek() == Some('\\') {
            return self.abstraction();
        }
        let mut left = self.application()?;
        loop {
            self.skip_ws();
            if self.peek() != Some('&') {
                return Ok(left);
            }
            self.pos += 1;
            self.skip_ws();
            let right = if self.peek() == Some('\\') {
                self.abstraction()?
            } else {
                self.application()?
            };
            left = LfTerm::and(left, right);
        }
    }

    fn abstraction(&mut self) -> Result<LfTerm, LfSyntaxError> {
        let mut vars = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some('\\') => {
                    self.pos += 1;
                    self.skip_ws();
                    let v = self.ident();
                    if v.is_empty() {
                        return Err(self.error("expected variable after '\\'"));
                    }
                    vars.push(v);
                }
                Some('.') if !vars.is_empty() => {
                    self.pos += 1;
                    break;
                }
                _ => return Err(self.error("expected '.' after lambda binders")),
            }
        }
        let depth = self.scope.len();
        self.scope.extend(vars.iter().cloned());
        let body = self.term();
        self.scope.truncate(depth);
        let body = body?;
        Ok(vars.iter().rev().fold(body, |acc, v| LfTerm::abs(v, acc)))
    }

    fn application(&mut self) -> Result<LfTerm, LfSyntaxError> {
        let mut t = self.atom()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('\\') => {
                    let arg = self.abstraction()?;
                    return Ok(LfTerm::app(t, arg));
                }
                Some(c) if c == '(' || is_ident_char(c) => {
                    let arg = self.atom()?;
                    t = LfTerm::app(t, arg);
                }
                _ => return Ok(t),
            }
        }
    }

    fn atom(&mut self) -> Result<LfTerm, LfSyntaxError> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let t = self.term()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(t)
            }
            Some(c) if is_ident_char(c) => {
                let name = self.ident();
                if self.peek() == Some('_') {
                    self.pos += 1;
                    let subs = self.subscripts()?;
                    if self.scope.contains(&name) {
                        return Err(self.error(format!("variable {name} cannot take a subscript")));
                    }
                    return Ok(LfTerm::subscripted(&name, subs));
                }
                Ok(self.resolve(name))
            }
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
            None => Err(self.error("unexpected end of logical form")),
        }
    }

    fn resolve(&self, name: String) -> LfTerm {
        if self.scope.contains(&name) {
            LfTerm::Var(name)
        } else {
            LfTerm::Const {
                name,
                contingencies: Vec::new(),
            }
        }
    }

    fn subscripts(&mut self) -> Result<Vec<LfTerm>, LfSyntaxError> {
        if self.peek() == Some('{') {
            self.pos += 1;
            let mut subs = vec![self.term()?];
            loop {
                self.skip_ws();
                match self.peek() {
                    Some(',') => {
                        self.pos += 1;
                        subs.push(self.term()?);
                    }
                    Some('}') => {
                        self.pos += 1;
                        return Ok(subs);
                    }
                    _ => return Err(self.error("expected ',' or '}' in subscript")),
                }
            }
        }
        let name = self.ident();
        if name.is_empty() {
            return Err(self.error("expected identifier or '{' after '_'"));
        }
        Ok(vec![self.resolve(name)])
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.peek().is_some_and(is_ident_char) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lf(s: &str) -> LfTerm {
        parse_lf(s).unwrap()
    }

    fn v(x: &str) -> LfTerm {
        LfTerm::var(x)
    }

    fn c(x: &str) -> LfTerm {
        LfTerm::constant(x)
    }

    #[test]
    fn application_is_left_associative() {
        assert_eq!(
            lf("hit x y"),
            LfTerm::app(LfTerm::app(c("hit"), c("x")), c("y"))
        );
    }

    #[test]
    fn bound_identifiers_are_variables() {
        assert_eq!(
            lf(r"\x\y. hit x y"),
            LfTerm::abs(
                "x",
                LfTerm::abs("y", LfTerm::apply(c("hit"), [v("x"), v("y")]))
            )
        );
    }

    #[test]
    fn subscript_spellings() {
        let short = lf(r"\x\y. die_x y");
        let long = lf(r"\x\y. die_{x} y");
        assert_eq!(short, long);
        let t = lf("hold_{a, b}");
        assert_eq!(t, LfTerm::subscripted("hold", vec![c("a"), c("b")]));
    }

    #[test]
    fn conjunction_sugar() {
        assert_eq!(lf("p & q"), LfTerm::and(c("p"), c("q")));
        assert_eq!(
            lf("a & b & c"),
            LfTerm::and(LfTerm::and(c("a"), c("b")), c("c"))
        );
        assert_eq!(pretty_print(&lf("a & (b & c)")), "a & (b & c)");
        assert_eq!(pretty_print(&lf("f (a & b)")), "f (a & b)");
    }

    #[test]
    fn substitute_into_subscript() {
        let t = LfTerm::app(LfTerm::subscripted("die", vec![v("x")]), v("y"));
        let s = substitute(&t, "x", &c("bucketsense"));
        assert_eq!(pretty_print(&s), "die_{bucketsense} y");
    }

    #[test]
    fn substitute_under_binder() {
        let t = LfTerm::abs("y", LfTerm::apply(c("hit"), [v("x"), v("y")]));
        let s = substitute(&t, "x", &c("h"));
        assert_eq!(pretty_print(&s), r"\y. hit h y");
    }

    #[test]
    fn substitute_leaves_bound_occurrences() {
        let t = LfTerm::abs("x", LfTerm::app(c("p"), v("x")));
        assert_eq!(substitute(&t, "x", &c("q")), t);
    }

    #[test]
    fn substitution_avoids_capture() {
        // (\y. x y)[x := y] must not capture the free y
        let t = LfTerm::abs("y", LfTerm::app(v("x"), v("y")));
        let s = substitute(&t, "x", &v("y"));
        let expected = LfTerm::abs("z", LfTerm::app(v("y"), v("z")));
        assert!(alpha_eq(&s, &expected), "{s:?}");
    }

    #[test]
    fn normalizes_persuade() {
        let f = lf(r"\x\p\y. persuade (p x) x y");
        let t = LfTerm::apply(f, [c("m"), lf(r"\y. hit h y"), c("j")]);
        let n = beta_normalize(&t, DEFAULT_MAX_STEPS).unwrap();
        assert!(alpha_eq(&n, &lf("persuade (hit h m) m j")));
        assert_eq!(pretty_print(&n), "persuade (hit h m) m j");
    }

    #[test]
    fn normalizes_identity() {
        let t = LfTerm::app(lf(r"\x. x"), c("a"));
        assert_eq!(beta_normalize(&t, 10).unwrap(), c("a"));
    }

    #[test]
    fn reduces_inside_subscripts() {
        let picked = lf(r"\y\x\z. cause (init (hold_x y z)) z");
        let up = lf(r"\x\p\y. up (p y) x");
        let t = LfTerm::apply(picked, [lf("def book"), up, c("i")]);
        let n = beta_normalize(&t, DEFAULT_MAX_STEPS).unwrap();
        assert_eq!(
            pretty_print(&n),
            r"cause (init (hold_{\x\p\y. up (p y) x} (def book) i)) i"
        );
        // a redex sitting inside a subscript is contracted too
        let inner = LfTerm::subscripted("die", vec![LfTerm::app(lf(r"\x. x"), c("b"))]);
        assert_eq!(
            pretty_print(&beta_normalize(&inner, 10).unwrap()),
            "die_{b}"
        );
    }

    #[test]
    fn budget_is_enforced() {
        let omega = lf(r"(\x. x x) (\x. x x)");
        assert_eq!(
            beta_normalize(&omega, 50),
            Err(NormalizeError::BudgetExceeded(50))
        );
    }

    #[test]
    fn normal_order_finds_normal_form_past_divergent_argument() {
        let t = lf(r"(\x. c) ((\x. x x) (\x. x x))");
        assert_eq!(beta_normalize(&t, 10).unwrap(), c("c"));
    }

    #[test]
    fn alpha_equivalence_examples() {
        let a = LfTerm::abs(
            "x",
            LfTerm::app(LfTerm::subscripted("die", vec![v("x")]), c("y")),
        );
        let b = LfTerm::abs(
            "z",
            LfTerm::app(LfTerm::subscripted("die", vec![v("z")]), c("y")),
        );
        assert!(alpha_eq(&a, &b));
        assert!(!alpha_eq(&lf("die_x y"), &lf("die y")));
        assert!(!alpha_eq(&lf(r"\x. p x"), &lf(r"\x. q x")));
        assert_eq!(a.alpha_key(), b.alpha_key());
        // free variables are compared by name
        assert!(!alpha_eq(&v("x"), &v("y")));
        assert!(!alpha_eq(
            &LfTerm::abs("x", v("x")),
            &LfTerm::abs("x", v("y"))
        ));
    }

    #[test]
    fn printing_examples() {
        let t = LfTerm::apply(
            c("persuade"),
            [LfTerm::apply(c("hit"), [c("h"), c("m")]), c("m"), c("j")],
        );
        assert_eq!(pretty_print(&t), "persuade (hit h m) m j");
        let die = LfTerm::app(LfTerm::subscripted("die", vec![v("x")]), v("y"));
        assert_eq!(pretty_print(&die), "die_{x} y");
        assert_eq!(pretty_print(&LfTerm::abs("x", v("x"))), r"\x. x");
    }

    #[test]
    fn printer_renames_binders_that_would_capture_constants() {
        // \you. p you you' where the inner you is the constant
        let t = LfTerm::abs("you", LfTerm::apply(c("p"), [v("you"), c("you")]));
        let printed = pretty_print(&t);
        assert_eq!(printed, r"\you1. p you1 you");
        assert!(alpha_eq(&lf(&printed), &t));
    }

    #[test]
    fn printer_renames_binders_that_would_capture_outer_variables() {
        // \x. (\x'. ...) where the inner binder's name clashes after renaming
        let t = LfTerm::abs("y", LfTerm::abs("x", LfTerm::app(v("x"), v("y"))));
        assert_eq!(pretty_print(&t), r"\y\x. x y");
        let shadow = LfTerm::abs("x", LfTerm::abs("x", v("x")));
        assert!(alpha_eq(&lf(&pretty_print(&shadow)), &shadow));
    }

    #[test]
    fn abstraction_in_argument_position_is_bracketed() {
        let t = LfTerm::app(c("f"), LfTerm::abs("x", v("x")));
        assert_eq!(pretty_print(&t), r"f (\x. x)");
        assert_eq!(lf(r"f \x. x"), t);
        let conj = LfTerm::and(LfTerm::abs("x", v("x")), c("b"));
        assert_eq!(pretty_print(&conj), r"(\x. x) & b");
        assert_eq!(lf(&pretty_print(&conj)), conj);
    }

    #[test]
    fn head_constant_and_contingency() {
        let t = lf(r"\z. pick_{up} (def book) z");
        assert_eq!(t.head_constant(), Some("pick"));
        assert!(t.has_contingency());
        assert!(!lf("kick (def bucket) j").has_contingency());
        assert_eq!(lf(r"\x. x").head_constant(), None);
    }

    #[test]
    fn syntax_errors_carry_columns() {
        let e = parse_lf(r"\x y").unwrap_err();
        assert!(e.column > 0);
        assert!(parse_lf("f (a").is_err());
        assert!(parse_lf(r"\x. x_{a}").is_err());
        assert!(parse_lf("").is_err());
    }
}
