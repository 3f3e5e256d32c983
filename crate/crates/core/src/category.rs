//! The category algebra: atoms with flat feature bundles, functors with
//! directional modal slashes, singleton string-categories and category
//! variables, together with unification, argument matching and the
//! structural validator.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Atomic category symbols that never need a declaration.
pub const BUILTIN_ATOMS: [&str; 6] = ["S", "NP", "N", "VP", "PP", "PredP"];

/// Attributes whose values are computed from the substituting span rather
/// than carried by categories.
pub const DERIVED_ATTRIBUTES: [&str; 2] = ["weight", "lexc"];

/// Slash modality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Modality {
    /// Application only.
    Star,
    /// Harmonic composition.
    Diamond,
    /// Crossing composition.
    Cross,
    /// Admits every rule.
    Dot,
}

impl Modality {
    pub const ALL: [Modality; 4] = [
        Modality::Star,
        Modality::Diamond,
        Modality::Cross,
        Modality::Dot,
    ];

    /// Concrete-syntax suffix written after a slash. Diamond is the bare slash.
    pub fn suffix(self) -> &'static str {
        match self {
            Modality::Star => "*",
            Modality::Diamond => "",
            Modality::Cross => "x",
            Modality::Dot => ".",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Modality::Star => "star",
            Modality::Diamond => "diamond",
            Modality::Cross => "cross",
            Modality::Dot => "dot",
        }
    }

    pub fn from_name(name: &str) -> Option<Modality> {
        Modality::ALL.into_iter().find(|m| m.name() == name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    fn symbol(self) -> char {
        match self {
            Direction::Forward => '/',
            Direction::Backward => '\\',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slash {
    pub direction: Direction,
    pub modality: Modality,
}

impl Slash {
    pub fn new(direction: Direction, modality: Modality) -> Self {
        Slash {
            direction,
            modality,
        }
    }
}

impl fmt::Display for Slash {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.direction.symbol(), self.modality.suffix())
    }
}

/// The combinatory rule inventory.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleId {
    FwdApp,
    BwdApp,
    FwdCompHarmonic,
    BwdCompHarmonic,
    FwdCompCrossing,
    BwdCompCrossing,
    FwdSubst,
    BwdSubst,
}

impl RuleId {
    pub const ALL: [RuleId; 8] = [
        RuleId::FwdApp,
        RuleId::BwdApp,
        RuleId::FwdCompHarmonic,
        RuleId::BwdCompHarmonic,
        RuleId::FwdCompCrossing,
        RuleId::BwdCompCrossing,
        RuleId::FwdSubst,
        RuleId::BwdSubst,
    ];

    /// Derivation label in the usual CCG display convention.
    pub fn label(self) -> &'static str {
        match self {
            RuleId::FwdApp => ">",
            RuleId::BwdApp => "<",
            RuleId::FwdCompHarmonic => ">B",
            RuleId::BwdCompHarmonic => "<B",
            RuleId::FwdCompCrossing => ">Bx",
            RuleId::BwdCompCrossing => "<Bx",
            RuleId::FwdSubst => ">S",
            RuleId::BwdSubst => "<S",
        }
    }

    pub fn from_label(label: &str) -> Option<RuleId> {
        RuleId::ALL.into_iter().find(|r| r.label() == label)
    }

    pub fn is_application(self) -> bool {
        matches!(self, RuleId::FwdApp | RuleId::BwdApp)
    }
}

/// Whether a slash of the given modality may feed `rule`.
pub fn modality_admits(rule: RuleId, modality: Modality) -> bool {
    match rule {
        RuleId::FwdApp | RuleId::BwdApp => true,
        RuleId::FwdCompHarmonic | RuleId::BwdCompHarmonic | RuleId::FwdSubst | RuleId::BwdSubst => {
            matches!(modality, Modality::Diamond | Modality::Dot)
        }
        RuleId::FwdCompCrossing | RuleId::BwdCompCrossing => {
            matches!(modality, Modality::Cross | Modality::Dot)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FeatureValue {
    Const(String),
    Var(String),
}

impl FeatureValue {
    pub fn constant(value: impl Into<String>) -> Self {
        FeatureValue::Const(value.into())
    }

    pub fn var(name: impl Into<String>) -> Self {
        FeatureValue::Var(name.into())
    }
}

impl fmt::Display for FeatureValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeatureValue::Const(c) => f.write_str(c),
            FeatureValue::Var(v) => write!(f, "?{v}"),
        }
    }
}

/// Flat attribute-value map. Absent attributes are underspecified.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FeatureBundle(BTreeMap<String, FeatureValue>);

impl FeatureBundle {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builder-style insert. Panics on a repeated attribute; use
    /// [`FeatureBundle::insert`] when the input is untrusted.
    pub fn with(mut self, attr: &str, value: FeatureValue) -> Self {
        assert!(
            self.insert(attr, value).is_ok(),
            "attribute {attr} given twice"
        );
        self
    }

    /// Inserts an attribute, refusing to overwrite an existing one.
    pub fn insert(&mut self, attr: &str, value: FeatureValue) -> Result<(), FeatureValue> {
        if let Some(existing) = self.0.get(attr) {
            return Err(existing.clone());
        }
        self.0.insert(attr.to_string(), value);
        Ok(())
    }

    pub fn get(&self, attr: &str) -> Option<&FeatureValue> {
        self.0.get(attr)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &FeatureValue)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    fn map_values(&self, mut f: impl FnMut(&FeatureValue) -> FeatureValue) -> Self {
        FeatureBundle(self.0.iter().map(|(k, v)| (k.clone(), f(v))).collect())
    }

    /// Splits off the derived attributes (weight, lexc).
    pub fn split_derived(&self) -> (FeatureBundle, Vec<(String, FeatureValue)>) {
        let mut plain = FeatureBundle::new();
        let mut derived = Vec::new();
        for (k, v) in &self.0 {
            if DERIVED_ATTRIBUTES.contains(&k.as_str()) {
                derived.push((k.clone(), v.clone()));
            } else {
                plain.0.insert(k.clone(), v.clone());
            }
        }
        (plain, derived)
    }

    pub fn has_derived(&self) -> bool {
        DERIVED_ATTRIBUTES.iter().any(|a| self.0.contains_key(*a))
    }
}

impl fmt::Display for FeatureBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return Ok(());
        }
        f.write_str("[")?;
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{k}={v}")?;
        }
        f.write_str("]")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    Atom {
        name: String,
        features: FeatureBundle,
    },
    Functor {
        result: Box<Category>,
        slash: Slash,
        argument: Box<Category>,
    },
    /// A category exactly one surface string can substitute for.
    Singleton(Vec<String>),
    Var(String),
}

impl Category {
    pub fn atom(name: &str) -> Self {
        Category::Atom {
            name: name.to_string(),
            features: FeatureBundle::new(),
        }
    }

    pub fn atom_with(name: &str, features: FeatureBundle) -> Self {
        Category::Atom {
            name: name.to_string(),
            features,
        }
    }

    pub fn functor(result: Category, slash: Slash, argument: Category) -> Self {
        Category::Functor {
            result: Box::new(result),
            slash,
            argument: Box::new(argument),
        }
    }

    pub fn fwd(result: Category, modality: Modality, argument: Category) -> Self {
        Self::functor(result, Slash::new(Direction::Forward, modality), argument)
    }

    pub fn bwd(result: Category, modality: Modality, argument: Category) -> Self {
        Self::functor(result, Slash::new(Direction::Backward, modality), argument)
    }

    pub fn singleton<S: AsRef<str>>(tokens: &[S]) -> Self {
        Category::Singleton(tokens.iter().map(|t| t.as_ref().to_string()).collect())
    }

    pub fn var(name: &str) -> Self {
        Category::Var(name.to_string())
    }

    /// Number of slashes along the result spine, i.e. arguments consumed
    /// before the category bottoms out.
    pub fn arity(&self) -> usize {
        match self {
            Category::Functor { result, .. } => 1 + result.arity(),
            _ => 0,
        }
    }

    pub fn contains_singleton(&self) -> bool {
        match self {
            Category::Singleton(_) => true,
            Category::Functor {
                result, argument, ..
            } => result.contains_singleton() || argument.contains_singleton(),
            _ => false,
        }
    }

    /// Whether any atom carries the given attribute with the given constant value.
    pub fn has_feature(&self, attr: &str, value: &str) -> bool {
        match self {
            Category::Atom { features, .. } => {
                features.get(attr) == Some(&FeatureValue::constant(value))
            }
            Category::Functor {
                result, argument, ..
            } => result.has_feature(attr, value) || argument.has_feature(attr, value),
            _ => false,
        }
    }

    pub fn atom_names(&self, out: &mut Vec<String>) {
        match self {
            Category::Atom { name, .. } => out.push(name.clone()),
            Category::Functor {
                result, argument, ..
            } => {
                result.atom_names(out);
                argument.atom_names(out);
            }
            _ => {}
        }
    }

    fn mentions_var(&self, var: &str) -> bool {
        match self {
            Category::Var(v) => v == var,
            Category::Functor {
                result, argument, ..
            } => result.mentions_var(var) || argument.mentions_var(var),
            _ => false,
        }
    }

    /// Renames every feature and category variable through `f`.
    pub fn rename_vars(&self, f: &mut impl FnMut(VarKind, &str) -> String) -> Category {
        match self {
            Category::Atom { name, features } => Category::Atom {
                name: name.clone(),
                features: features.map_values(|v| match v {
                    FeatureValue::Var(x) => FeatureValue::Var(f(VarKind::Feature, x)),
                    c => c.clone(),
                }),
            },
            Category::Functor {
                result,
                slash,
                argument,
            } => Category::Functor {
                result: Box::new(result.rename_vars(f)),
                slash: *slash,
                argument: Box::new(argument.rename_vars(f)),
            },
            Category::Singleton(t) => Category::Singleton(t.clone()),
            Category::Var(v) => Category::Var(f(VarKind::Category, v)),
        }
    }

    /// Variables renamed to positional names in order of first appearance,
    /// so categories equal up to variable naming compare equal.
    pub fn canonical(&self) -> Category {
        let mut seen: HashMap<(VarKind, String), String> = HashMap::new();
        self.rename_vars(&mut |kind, name| {
            let n = seen.len();
            seen.entry((kind, name.to_string()))
                .or_insert_with(|| match kind {
                    VarKind::Feature => format!("_{n}"),
                    VarKind::Category => format!("V{n}"),
                })
                .clone()
        })
    }

    /// Variables renamed back to their lexical base names for display,
    /// adding a numeric suffix only where two distinct variables share a base.
    pub fn display_names(&self) -> Category {
        let mut order: Vec<(VarKind, String)> = Vec::new();
        self.rename_vars(&mut |kind, name| {
            let key = (kind, name.to_string());
            if !order.contains(&key) {
                order.push(key);
            }
            name.to_string()
        });
        let mut assigned: HashMap<(VarKind, String), String> = HashMap::new();
        let mut used: HashSet<(VarKind, String)> = HashSet::new();
        for (kind, name) in &order {
            let base = name.split('#').next().unwrap_or(name).to_string();
            let mut candidate = base.clone();
            let mut i = 1;
            while used.contains(&(*kind, candidate.clone())) {
                i += 1;
                candidate = format!("{base}{i}");
            }
            used.insert((*kind, candidate.clone()));
            assigned.insert((*kind, name.clone()), candidate);
        }
        self.rename_vars(&mut |kind, name| assigned[&(kind, name.to_string())].clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    Feature,
    Category,
}

impl Category {
    /// Concrete syntax with slashes of `default_modality` written bare and
    /// every other modality explicit (`<>` for diamond).
    pub fn render(&self, default_modality: Modality) -> String {
        let mut out = String::new();
        self.write_with(&mut out, default_modality)
            .expect("writing to a String cannot fail");
        out
    }

    fn write_with(&self, f: &mut impl fmt::Write, default: Modality) -> fmt::Result {
        match self {
            Category::Atom { name, features } => write!(f, "{name}{features}"),
            Category::Var(v) => f.write_str(v),
            Category::Singleton(tokens) => write!(f, "\"{}\"", tokens.join(" ")),
            Category::Functor {
                result,
                slash,
                argument,
            } => {
                // Fully bracketed, so the reading never depends on the
                // left-associativity convention.
                let bracket = matches!(result.as_ref(), Category::Functor { .. });
                if bracket {
                    f.write_char('(')?;
                }
                result.write_with(f, default)?;
                if bracket {
                    f.write_char(')')?;
                }
                f.write_char(slash.direction.symbol())?;
                if slash.modality != default {
                    match slash.modality {
                        Modality::Diamond => f.write_str("<>")?,
                        m => f.write_str(m.suffix())?,
                    }
                }
                match argument.as_ref() {
                    Category::Functor { .. } => {
                        f.write_char('(')?;
                        argument.write_with(f, default)?;
                        f.write_char(')')
                    }
                    _ => argument.write_with(f, default),
                }
            }
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_with(f, Modality::Diamond)
    }
}

/// Variable bindings produced by unification.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Bindings {
    features: HashMap<String, FeatureValue>,
    categories: HashMap<String, Category>,
}

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty() && self.categories.is_empty()
    }

    pub fn feature(&self, var: &str) -> Option<&FeatureValue> {
        self.features.get(var)
    }

    pub fn category(&self, var: &str) -> Option<&Category> {
        self.categories.get(var)
    }

    pub fn resolve_feature(&self, value: &FeatureValue) -> FeatureValue {
        let mut current = value.clone();
        // Chains are acyclic: a variable is only ever bound while unbound.
        while let FeatureValue::Var(v) = &current {
            match self.features.get(v) {
                Some(next) => current = next.clone(),
                None => break,
            }
        }
        current
    }

    /// Substitutes all bound variables, following chains to a fixpoint.
    pub fn apply(&self, category: &Category) -> Category {
        match category {
            Category::Atom { name, features } => Category::Atom {
                name: name.clone(),
                features: features.map_values(|v| self.resolve_feature(v)),
            },
            Category::Functor {
                result,
                slash,
                argument,
            } => Category::Functor {
                result: Box::new(self.apply(result)),
                slash: *slash,
                argument: Box::new(self.apply(argument)),
            },
            Category::Singleton(t) => Category::Singleton(t.clone()),
            Category::Var(v) => match self.categories.get(v) {
                Some(bound) => self.apply(bound),
                None => Category::Var(v.clone()),
            },
        }
    }

    /// Unifies two feature values, extending the bindings.
    pub fn unify_feature(&mut self, a: &FeatureValue, b: &FeatureValue) -> bool {
        let a = self.resolve_feature(a);
        let b = self.resolve_feature(b);
        match (&a, &b) {
            (FeatureValue::Const(x), FeatureValue::Const(y)) => x == y,
            (FeatureValue::Var(x), FeatureValue::Var(y)) if x == y => true,
            (FeatureValue::Var(x), other) | (other, FeatureValue::Var(x)) => {
                self.features.insert(x.clone(), other.clone());
                true
            }
        }
    }

    fn unify_bundles(&mut self, a: &FeatureBundle, b: &FeatureBundle) -> bool {
        a.iter().all(|(attr, va)| match b.get(attr) {
            Some(vb) => self.unify_feature(va, vb),
            None => true,
        })
    }

    fn unify_in_place(&mut self, a: &Category, b: &Category) -> bool {
        match (a, b) {
            (Category::Var(x), other) | (other, Category::Var(x)) => {
                if let Some(bound) = self.categories.get(x).cloned() {
                    return self.unify_in_place(&bound, other);
                }
                let other = self.apply(other);
                match &other {
                    Category::Var(y) if y == x => true,
                    _ if other.mentions_var(x) => false,
                    _ => {
                        self.categories.insert(x.clone(), other);
                        true
                    }
                }
            }
            (
                Category::Atom {
                    name: na,
                    features: fa,
                },
                Category::Atom {
                    name: nb,
                    features: fb,
                },
            ) => na == nb && self.unify_bundles(fa, fb),
            (
                Category::Functor {
                    result: ra,
                    slash: sa,
                    argument: aa,
                },
                Category::Functor {
                    result: rb,
                    slash: sb,
                    argument: ab,
                },
            ) => sa == sb && self.unify_in_place(ra, rb) && self.unify_in_place(aa, ab),
            (Category::Singleton(ta), Category::Singleton(tb)) => ta == tb,
            _ => false,
        }
    }
}

/// Unifies two categories under existing bindings. `None` is failure.
pub fn unify(a: &Category, b: &Category, bindings: &Bindings) -> Option<Bindings> {
    let mut extended = bindings.clone();
    extended.unify_in_place(a, b).then_some(extended)
}

/// A derived constituent offered as an argument.
pub trait ArgumentSource {
    /// Surface tokens the constituent spans.
    fn tokens(&self) -> &[String];
    fn category(&self) -> &Category;
    /// Value of a computed attribute (weight or lexc) for this span.
    fn derived_feature(&self, attr: &str) -> FeatureValue;
}

/// Matches an argument specification against a derived constituent.
///
/// A singleton compares surface tokens and never looks at the constituent's
/// category. A polyvalent specification unifies with the category, with
/// derived attributes checked against the values computed for the span.
pub fn match_argument(
    spec: &Category,
    source: &impl ArgumentSource,
    bindings: &Bindings,
) -> Option<Bindings> {
    match spec {
        Category::Singleton(tokens) => {
            (source.tokens() == tokens.as_slice()).then(|| bindings.clone())
        }
        Category::Atom { name, features } if features.has_derived() => {
            let (plain, derived) = features.split_derived();
            let mut out = unify(
                &Category::atom_with(name, plain),
                source.category(),
                bindings,
            )?;
            for (attr, expected) in derived {
                let actual = source.derived_feature(&attr);
                if !out.unify_feature(&expected, &actual) {
                    return None;
                }
            }
            Some(out)
        }
        _ => unify(spec, source.category(), bindings),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CategoryViolation {
    SingletonAsResult,
    NonStarSingletonSlash,
    EmptySingleton,
}

impl CategoryViolation {
    pub fn code(&self) -> &'static str {
        match self {
            CategoryViolation::SingletonAsResult => "SINGLETON_AS_RESULT",
            CategoryViolation::NonStarSingletonSlash => "NON_STAR_SINGLETON_SLASH",
            CategoryViolation::EmptySingleton => "EMPTY_SINGLETON",
        }
    }
}

impl fmt::Display for CategoryViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// All structural violations in `category`, one per offending node.
pub fn validate_category(category: &Category) -> Vec<CategoryViolation> {
    let mut out = Vec::new();
    collect_violations(category, &mut out);
    out
}

fn collect_violations(category: &Category, out: &mut Vec<CategoryViolation>) {
    match category {
        Category::Singleton(tokens) if tokens.is_empty() => {
            out.push(CategoryViolation::EmptySingleton)
        }
        Category::Functor {
            result,
            slash,
            argument,
        } => {
            if matches!(result.as_ref(), Category::Singleton(_)) {
                out.push(CategoryViolation::SingletonAsResult);
            }
            if matches!(argument.as_ref(), Category::Singleton(_))
                && slash.modality != Modality::Star
            {
                out.push(CategoryViolation::NonStarSingletonSlash);
            }
            collect_violations(result, out);
            collect_violations(argument, out);
        }
        _ => {}
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("category syntax error at column {column}: {message}")]
pub struct CategorySyntaxError {
    pub column: usize,
    pub message: String,
}

/// Whether an identifier is reserved for category variables (`X`, `Y`, `Z`,
/// optionally followed by digits).
pub fn is_category_var_name(ident: &str) -> bool {
    let mut chars = ident.chars();
    matches!(chars.next(), Some('X' | 'Y' | 'Z')) && chars.all(|c| c.is_ascii_digit())
}

/// Parses the ASCII category syntax. Bare slashes take `default_modality`.
pub fn parse_category(
    text: &str,
    default_modality: Modality,
) -> Result<Category, CategorySyntaxError> {
    let mut p = CategoryReader {
        chars: text.chars().collect(),
        pos: 0,
        default_modality,
    };
    let cat = p.category()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error(format!("unexpected '{}'", p.chars[p.pos])));
    }
    Ok(cat)
}

impl FromStr for Category {
    type Err = CategorySyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_category(s, Modality::Diamond)
    }
}

struct CategoryReader {
    chars: Vec<char>,
    pos: usize,
    default_modality: Modality,
}

impl CategoryReader {
    fn error(&self, message: impl Into<String>) -> CategorySyntaxError {
        CategorySyntaxError {
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

    fn category(&mut self) -> Result<Category, CategorySyntaxError> {
        let mut left = self.primary()?;
        loop {
            self.skip_ws();
            let direction = match self.peek() {
                Some('/') => Direction::Forward,
                Some('\\') => Direction::Backward,
                _ => return Ok(left),
            };
            self.pos += 1;
            let modality = self.modality();
            let right = self.primary()?;
            left = Category::functor(left, Slash::new(direction, modality), right);
        }
    }

    fn modality(&mut self) -> Modality {
        match self.peek() {
            Some('*') => {
                self.pos += 1;
                Modality::Star
            }
            Some('x') => {
                self.pos += 1;
                Modality::Cross
            }
            Some('.') => {
                self.pos += 1;
                Modality::Dot
            }
            Some('<') if self.chars.get(self.pos + 1) == Some(&'>') => {
                self.pos += 2;
                Modality::Diamond
            }
            _ => self.default_modality,
        }
    }

    fn primary(&mut self) -> Result<Category, CategorySyntaxError> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.category()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some('"') => {
                self.pos += 1;
                let start = self.pos;
                while self.peek().is_some_and(|c| c != '"') {
                    self.pos += 1;
                }
                if self.peek() != Some('"') {
                    return Err(self.error("unterminated singleton string"));
                }
                let body: String = self.chars[start..self.pos].iter().collect();
                self.pos += 1;
                Ok(Category::Singleton(
                    body.split_whitespace().map(str::to_string).collect(),
                ))
            }
            Some(c) if c.is_ascii_uppercase() => {
                let name = self.ident();
                if is_category_var_name(&name) {
                    if self.peek() == Some('[') {
                        return Err(self.error("category variables take no features"));
                    }
                    return Ok(Category::Var(name));
                }
                let features = if self.peek() == Some('[') {
                    self.features()?
                } else {
                    FeatureBundle::new()
                };
                Ok(Category::Atom { name, features })
            }
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
            None => Err(self.error("unexpected end of category")),
        }
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn features(&mut self) -> Result<FeatureBundle, CategorySyntaxError> {
        self.pos += 1; // '['
        let mut bundle = FeatureBundle::new();
        loop {
            self.skip_ws();
            if self.peek() == Some(']') {
                self.pos += 1;
                return Ok(bundle);
            }
            let attr = self.ident();
            if attr.is_empty() {
                return Err(self.error("expected attribute name"));
            }
            self.skip_ws();
            if self.peek() != Some('=') {
                return Err(self.error(format!("expected '=' after attribute {attr}")));
            }
            self.pos += 1;
            self.skip_ws();
            let is_var = self.peek() == Some('?');
            if is_var {
                self.pos += 1;
            }
            let start = self.pos;
            while self
                .peek()
                .is_some_and(|c| c.is_ascii_alphanumeric() || "+-_'".contains(c))
            {
                self.pos += 1;
            }
            let value: String = self.chars[start..self.pos].iter().collect();
            if value.is_empty() {
                return Err(self.error(format!("missing value for attribute {attr}")));
            }
            let value = if is_var {
                FeatureValue::Var(value)
            } else {
                FeatureValue::Const(value)
            };
            if bundle.insert(&attr, value).is_err() {
                return Err(self.error(format!("attribute {attr} appears twice")));
            }
            self.skip_ws();
            match self.peek() {
                Some(',') => self.pos += 1,
                Some(']') => {}
                _ => return Err(self.error("expected ',' or ']' in feature bundle")),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cat(s: &str) -> Category {
        s.parse().unwrap()
    }

    struct Span {
        tokens: Vec<String>,
        category: Category,
        weight: &'static str,
    }

    impl ArgumentSource for Span {
        fn tokens(&self) -> &[String] {
            &self.tokens
        }
        fn category(&self) -> &Category {
            &self.category
        }
        fn derived_feature(&self, attr: &str) -> FeatureValue {
            match attr {
                "weight" => FeatureValue::constant(self.weight),
                _ => FeatureValue::constant("-"),
            }
        }
    }

    fn span(words: &str, category: &str) -> Span {
        Span {
            tokens: words.split_whitespace().map(String::from).collect(),
            category: cat(category),
            weight: "-",
        }
    }

    #[test]
    fn parses_left_associative_slashes() {
        let c = cat(r#"(S\NP)/*"up"/NP[weight=-]"#);
        assert_eq!(c.arity(), 3);
        match &c {
            Category::Functor {
                result, argument, ..
            } => {
                assert_eq!(argument.to_string(), "NP[weight=-]");
                assert_eq!(result.to_string(), r#"(S\NP)/*"up""#);
            }
            _ => panic!("expected functor"),
        }
        assert_eq!(c.to_string(), r#"((S\NP)/*"up")/NP[weight=-]"#);
    }

    #[test]
    fn modality_syntax() {
        let slashes = |s: &str| match cat(s) {
            Category::Functor { slash, .. } => slash.modality,
            _ => panic!(),
        };
        assert_eq!(slashes("S/NP"), Modality::Diamond);
        assert_eq!(slashes("S/*NP"), Modality::Star);
        assert_eq!(slashes("S/xNP"), Modality::Cross);
        assert_eq!(slashes("S/.NP"), Modality::Dot);
        assert_eq!(slashes("S/<>NP"), Modality::Diamond);
        assert_eq!(
            parse_category("S/NP", Modality::Dot).unwrap(),
            Category::fwd(Category::atom("S"), Modality::Dot, Category::atom("NP"))
        );
    }

    #[test]
    fn category_vars_are_reserved() {
        assert_eq!(cat("X"), Category::var("X"));
        assert_eq!(cat("Y2"), Category::var("Y2"));
        assert!(matches!(cat("XP"), Category::Atom { .. }));
        assert!("X[agr=3s]".parse::<Category>().is_err());
    }

    #[test]
    fn rejects_repeated_attribute() {
        let err = "NP[agr=3s,agr=3p]".parse::<Category>().unwrap_err();
        assert!(err.message.contains("twice"));
    }

    #[test]
    fn underspecified_attribute_unifies() {
        let b = unify(&cat("NP[agr=3s]"), &cat("NP"), &Bindings::new()).unwrap();
        assert!(b.is_empty());
    }

    #[test]
    fn special_discipline_blocks_unlike_coordinands() {
        assert!(unify(
            &cat("S/NP[special=+,head=beans]"),
            &cat("S/NP[special=-]"),
            &Bindings::new()
        )
        .is_none());
    }

    #[test]
    fn category_variable_binds() {
        let b = unify(&cat("X"), &cat(r"S\NP"), &Bindings::new()).unwrap();
        assert_eq!(b.category("X"), Some(&cat(r"S\NP")));
    }

    #[test]
    fn occurs_check_fails() {
        assert!(unify(&cat("X"), &cat("X/NP"), &Bindings::new()).is_none());
        assert!(unify(&cat("X"), &cat("X"), &Bindings::new()).is_some());
    }

    #[test]
    fn singleton_token_equality() {
        let b = Bindings::new();
        assert!(unify(&cat(r#""the bucket""#), &cat(r#""the bucket""#), &b).is_some());
        assert!(unify(&cat(r#""the bucket""#), &cat(r#""the beans""#), &b).is_none());
    }

    #[test]
    fn functor_modalities_must_agree() {
        assert!(unify(&cat("S/NP"), &cat("S/*NP"), &Bindings::new()).is_none());
        assert!(unify(&cat(r"S\NP"), &cat("S/NP"), &Bindings::new()).is_none());
    }

    #[test]
    fn feature_variables_propagate() {
        let functor = cat("NP[head=?h]/N[head=?h]");
        let (result, arg) = match &functor {
            Category::Functor {
                result, argument, ..
            } => (result, argument),
            _ => unreachable!(),
        };
        let b = unify(arg, &cat("N[head=beans]"), &Bindings::new()).unwrap();
        assert_eq!(b.apply(result).to_string(), "NP[head=beans]");
    }

    #[test]
    fn variable_chains_resolve() {
        let mut b = Bindings::new();
        assert!(b.unify_feature(&FeatureValue::var("a"), &FeatureValue::var("b")));
        assert!(b.unify_feature(&FeatureValue::var("b"), &FeatureValue::constant("3s")));
        assert_eq!(
            b.resolve_feature(&FeatureValue::var("a")),
            FeatureValue::constant("3s")
        );
        assert!(!b.unify_feature(&FeatureValue::var("a"), &FeatureValue::constant("1s")));
    }

    #[test]
    fn singleton_argument_ignores_category() {
        let particle = span("up", r"((S\NP)\(S\NP))/NP");
        assert!(match_argument(&cat(r#""up""#), &particle, &Bindings::new()).is_some());
        let blue = span("the blue bucket", "NP");
        assert!(match_argument(&cat(r#""the bucket""#), &blue, &Bindings::new()).is_none());
    }

    #[test]
    fn head_marked_argument_matches_complex_np() {
        let np = span("the beans no one cares about", "NP[head=beans]");
        assert!(match_argument(&cat("NP[head=beans]"), &np, &Bindings::new()).is_some());
        let other = span("the bucket", "NP[head=bucket]");
        assert!(match_argument(&cat("NP[head=beans]"), &other, &Bindings::new()).is_none());
    }

    #[test]
    fn derived_feature_is_checked_not_unified() {
        let mut heavy = span("a b c d e", "NP");
        heavy.weight = "+";
        assert!(match_argument(&cat("NP[weight=-]"), &heavy, &Bindings::new()).is_none());
        let light = span("the book", "NP");
        assert!(match_argument(&cat("NP[weight=-]"), &light, &Bindings::new()).is_some());
        let b = match_argument(&cat("NP[weight=?w]"), &heavy, &Bindings::new()).unwrap();
        assert_eq!(b.feature("w"), Some(&FeatureValue::constant("+")));
    }

    #[test]
    fn validator_examples() {
        assert!(validate_category(&cat(r#"(S\NP)/*"the bucket""#)).is_empty());
        assert_eq!(
            validate_category(&cat(r#""up"/NP"#)),
            vec![CategoryViolation::SingletonAsResult]
        );
        assert_eq!(
            validate_category(&cat(r#"(S\NP)/"the bucket""#)),
            vec![CategoryViolation::NonStarSingletonSlash]
        );
        assert_eq!(
            validate_category(&cat(r#"S/*"""#)),
            vec![CategoryViolation::EmptySingleton]
        );
        // trivial identity functors are still singleton-result functors
        assert_eq!(
            validate_category(&cat(r#""up"/*"up""#)),
            vec![CategoryViolation::SingletonAsResult]
        );
        // nested inside an argument
        assert_eq!(
            validate_category(&cat(r#"S/("up"/*NP)"#)),
            vec![CategoryViolation::SingletonAsResult]
        );
        // a bare singleton lexical category is fine
        assert!(validate_category(&cat(r#""every which way""#)).is_empty());
    }

    #[test]
    fn modality_gating_table() {
        use Modality::*;
        use RuleId::*;
        for m in Modality::ALL {
            assert!(modality_admits(FwdApp, m));
            assert!(modality_admits(BwdApp, m));
        }
        assert!(!modality_admits(FwdCompHarmonic, Star));
        assert!(modality_admits(FwdCompHarmonic, Diamond));
        assert!(!modality_admits(FwdCompHarmonic, Cross));
        assert!(modality_admits(FwdCompHarmonic, Dot));
        assert!(!modality_admits(BwdCompCrossing, Diamond));
        assert!(modality_admits(BwdCompCrossing, Cross));
        assert!(modality_admits(FwdSubst, Dot));
        assert!(!modality_admits(BwdSubst, Star));
    }

    #[test]
    fn display_names_strip_fresh_suffixes() {
        let c = cat("NP[head=?h]/N[head=?h]").rename_vars(&mut |_, v| format!("{v}#3"));
        assert_eq!(c.to_string(), "NP[head=?h#3]/N[head=?h#3]");
        assert_eq!(c.display_names().to_string(), "NP[head=?h]/N[head=?h]");
        let mut n = 0;
        let two = cat("NP[a=?h]/N[a=?h]").rename_vars(&mut |_, v| {
            n += 1;
            format!("{v}#{n}")
        });
        assert_eq!(two.display_names().to_string(), "NP[a=?h]/N[a=?h2]");
    }
}
