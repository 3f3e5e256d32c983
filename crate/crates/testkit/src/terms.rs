//! Random simply-typed terms and a rightmost-innermost normalizer.
//!
//! Typing the generated terms guarantees strong normalization, so every
//! reduction strategy must reach the same normal form.

use idiomccg::LfTerm;
use rand::Rng;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ty {
    O,
    Arrow(Box<Ty>, Box<Ty>),
}

impl Ty {
    fn arrow(a: Ty, b: Ty) -> Ty {
        Ty::Arrow(Box::new(a), Box::new(b))
    }
}

fn random_ty(rng: &mut impl Rng, depth: usize) -> Ty {
    if depth == 0 || rng.gen_bool(0.6) {
        Ty::O
    } else {
        Ty::arrow(random_ty(rng, depth - 1), random_ty(rng, depth - 1))
    }
}

/// Constants of type o, with `die`-style contingency subscripts allowed.
const CONSTANTS: [&str; 8] = ["j", "m", "book", "bucket", "secret", "one", "i", "h"];
/// Constants of type o -> o -> o.
const BINARY: [&str; 5] = ["hit", "kick", "persuade", "up", "and"];

pub struct TermGen {
    pub max_depth: usize,
    next_var: usize,
}

impl TermGen {
    pub fn new(max_depth: usize) -> Self {
        TermGen {
            max_depth,
            next_var: 0,
        }
    }

    /// A closed, well-typed term of AST depth at most `max_depth`.
    pub fn term(&mut self, rng: &mut impl Rng) -> LfTerm {
        loop {
            let ty = random_ty(rng, 2);
            let t = self.gen(rng, &ty, &mut Vec::new(), self.max_depth);
            // Leaves of higher type are eta-style abstractions and can
            // overshoot the budget; such draws are rejected.
            if depth(&t) <= self.max_depth {
                return t;
            }
        }
    }

    fn fresh(&mut self, rng: &mut impl Rng) -> String {
        self.next_var += 1;
        // A small name pool makes shadowing and capture situations common.
        let base = ["x", "y", "z", "p", "q"][rng.gen_range(0..5)];
        if rng.gen_bool(0.5) {
            base.to_string()
        } else {
            format!("{base}{}", self.next_var % 3)
        }
    }

    fn gen(
        &mut self,
        rng: &mut impl Rng,
        ty: &Ty,
        ctx: &mut Vec<(String, Ty)>,
        depth: usize,
    ) -> LfTerm {
        let vars: Vec<String> = visible(ctx)
            .into_iter()
            .filter(|(_, t)| t == ty)
            .map(|(n, _)| n)
            .collect();
        if depth <= 1 {
            return self.leaf(rng, ty, ctx, &vars);
        }
        match rng.gen_range(0..10) {
            // A beta-redex of the requested type.
            0..=2 => {
                let arg_ty = random_ty(rng, 1);
                let x = self.fresh(rng);
                ctx.push((x.clone(), arg_ty.clone()));
                let body = self.gen(rng, ty, ctx, depth - 2);
                ctx.pop();
                let arg = self.gen(rng, &arg_ty, ctx, depth - 1);
                LfTerm::app(LfTerm::abs(&x, body), arg)
            }
            // Application of a variable or non-redex function.
            3..=4 => {
                let arg_ty = random_ty(rng, 1);
                let fun_ty = Ty::arrow(arg_ty.clone(), ty.clone());
                let fun = self.gen(rng, &fun_ty, ctx, depth - 1);
                let arg = self.gen(rng, &arg_ty, ctx, depth - 1);
                LfTerm::app(fun, arg)
            }
            5..=6 => match ty {
                Ty::Arrow(a, b) => {
                    let x = self.fresh(rng);
                    ctx.push((x.clone(), (**a).clone()));
                    let body = self.gen(rng, b, ctx, depth - 1);
                    ctx.pop();
                    LfTerm::abs(&x, body)
                }
                Ty::O => {
                    let f = BINARY[rng.gen_range(0..BINARY.len())];
                    let a = self.gen(rng, &Ty::O, ctx, depth - 2);
                    let b = self.gen(rng, &Ty::O, ctx, depth - 2);
                    LfTerm::apply(LfTerm::constant(f), [a, b])
                }
            },
            7 if *ty == Ty::O => {
                // Subscripts may hold terms of any type.
                let n = rng.gen_range(1..=2);
                let subs = (0..n)
                    .map(|_| {
                        let t = random_ty(rng, 1);
                        self.gen(rng, &t, ctx, depth - 1)
                    })
                    .collect();
                LfTerm::subscripted(CONSTANTS[rng.gen_range(0..CONSTANTS.len())], subs)
            }
            _ => self.leaf(rng, ty, ctx, &vars),
        }
    }

    fn leaf(
        &mut self,
        rng: &mut impl Rng,
        ty: &Ty,
        ctx: &mut Vec<(String, Ty)>,
        vars: &[String],
    ) -> LfTerm {
        if !vars.is_empty() && rng.gen_bool(0.7) {
            return LfTerm::var(&vars[rng.gen_range(0..vars.len())]);
        }
        match ty {
            Ty::O => LfTerm::constant(CONSTANTS[rng.gen_range(0..CONSTANTS.len())]),
            Ty::Arrow(a, b) => {
                let x = self.fresh(rng);
                ctx.push((x.clone(), (**a).clone()));
                let inner: Vec<String> = visible(ctx)
                    .into_iter()
                    .filter(|(_, t)| t == &**b)
                    .map(|(n, _)| n)
                    .collect();
                let body = self.leaf(rng, b, ctx, &inner);
                ctx.pop();
                LfTerm::abs(&x, body)
            }
        }
    }
}

/// Variables visible in the context: an inner binder hides outer ones.
fn visible(ctx: &[(String, Ty)]) -> Vec<(String, Ty)> {
    let mut out: Vec<(String, Ty)> = Vec::new();
    for (n, t) in ctx.iter().rev() {
        if !out.iter().any(|(m, _)| m == n) {
            out.push((n.clone(), t.clone()));
        }
    }
    out
}

/// Nameless terms; free variables keep their names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Db {
    Bound(usize),
    Free(String),
    Const(String, Vec<Db>),
    Lam(Box<Db>),
    App(Box<Db>, Box<Db>),
}

pub fn to_db(t: &LfTerm) -> Db {
    fn go(t: &LfTerm, env: &mut Vec<String>) -> Db {
        match t {
            LfTerm::Var(x) => match env.iter().rposition(|b| b == x) {
                Some(i) => Db::Bound(env.len() - 1 - i),
                None => Db::Free(x.clone()),
            },
            LfTerm::Const {
                name,
                contingencies,
            } => Db::Const(
                name.clone(),
                contingencies.iter().map(|c| go(c, env)).collect(),
            ),
            LfTerm::Abs { var, body } => {
                env.push(var.clone());
                let b = go(body, env);
                env.pop();
                Db::Lam(Box::new(b))
            }
            LfTerm::App { fun, arg } => Db::App(Box::new(go(fun, env)), Box::new(go(arg, env))),
        }
    }
    go(t, &mut Vec::new())
}

fn shift(t: &Db, by: isize, cutoff: usize) -> Db {
    match t {
        Db::Bound(i) if *i >= cutoff => Db::Bound((*i as isize + by) as usize),
        Db::Bound(_) | Db::Free(_) => t.clone(),
        Db::Const(n, cs) => Db::Const(n.clone(), cs.iter().map(|c| shift(c, by, cutoff)).collect()),
        Db::Lam(b) => Db::Lam(Box::new(shift(b, by, cutoff + 1))),
        Db::App(f, a) => Db::App(
            Box::new(shift(f, by, cutoff)),
            Box::new(shift(a, by, cutoff)),
        ),
    }
}

fn subst_db(t: &Db, j: usize, s: &Db) -> Db {
    match t {
        Db::Bound(i) if *i == j => s.clone(),
        Db::Bound(_) | Db::Free(_) => t.clone(),
        Db::Const(n, cs) => Db::Const(n.clone(), cs.iter().map(|c| subst_db(c, j, s)).collect()),
        Db::Lam(b) => Db::Lam(Box::new(subst_db(b, j + 1, &shift(s, 1, 0)))),
        Db::App(f, a) => Db::App(Box::new(subst_db(f, j, s)), Box::new(subst_db(a, j, s))),
    }
}

fn beta(body: &Db, arg: &Db) -> Db {
    shift(&subst_db(body, 0, &shift(arg, 1, 0)), -1, 0)
}

/// Rightmost-innermost normalization. `None` once `budget` contractions
/// have been exceeded.
pub fn normalize_innermost(t: &Db, budget: usize) -> Option<Db> {
    let mut steps = 0;
    innermost(t, &mut steps, budget)
}

fn innermost(t: &Db, steps: &mut usize, budget: usize) -> Option<Db> {
    Some(match t {
        Db::Bound(_) | Db::Free(_) => t.clone(),
        Db::Const(n, cs) => {
            let mut out = vec![Db::Bound(0); cs.len()];
            for (i, c) in cs.iter().enumerate().rev() {
                out[i] = innermost(c, steps, budget)?;
            }
            Db::Const(n.clone(), out)
        }
        Db::Lam(b) => Db::Lam(Box::new(innermost(b, steps, budget)?)),
        Db::App(f, a) => {
            let a = innermost(a, steps, budget)?;
            let f = innermost(f, steps, budget)?;
            match f {
                Db::Lam(body) => {
                    *steps += 1;
                    if *steps > budget {
                        return None;
                    }
                    innermost(&beta(&body, &a), steps, budget)?
                }
                f => Db::App(Box::new(f), Box::new(a)),
            }
        }
    })
}

/// Free variables computed over the nameless form.
pub fn free_names(t: &Db) -> Vec<String> {
    let mut out = Vec::new();
    fn go(t: &Db, out: &mut Vec<String>) {
        match t {
            Db::Free(x) => {
                if !out.contains(x) {
                    out.push(x.clone())
                }
            }
            Db::Bound(_) => {}
            Db::Const(_, cs) => cs.iter().for_each(|c| go(c, out)),
            Db::Lam(b) => go(b, out),
            Db::App(f, a) => {
                go(f, out);
                go(a, out);
            }
        }
    }
    go(t, &mut out);
    out
}

pub fn depth(t: &LfTerm) -> usize {
    match t {
        LfTerm::Var(_) => 1,
        LfTerm::Const { contingencies, .. } => {
            1 + contingencies.iter().map(depth).max().unwrap_or(0)
        }
        LfTerm::Abs { body, .. } => 1 + depth(body),
        LfTerm::App { fun, arg } => 1 + depth(fun).max(depth(arg)),
    }
}
