use idiomccg::category::{Bindings, Slash};
use idiomccg::{
    alpha_eq, match_argument, parse_category, parse_lf, unify, validate_category, ArgumentSource,
    Category, CategoryViolation, Direction, FeatureBundle, FeatureValue, LfTerm, Modality,
};
use idiomccg_testkit::terms::TermGen;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn feature_value() -> impl Strategy<Value = FeatureValue> {
    prop_oneof![
        prop::sample::select(vec!["3s", "1s", "beans", "+", "-"]).prop_map(FeatureValue::constant),
        prop::sample::select(vec!["a", "b"]).prop_map(FeatureValue::var),
    ]
}

fn atom() -> impl Strategy<Value = Category> {
    (
        prop::sample::select(vec!["S", "NP", "N", "PP"]),
        prop::collection::btree_map(
            prop::sample::select(vec!["agr", "head", "case"]),
            feature_value(),
            0..3,
        ),
    )
        .prop_map(|(name, feats)| {
            let bundle = feats
                .into_iter()
                .fold(FeatureBundle::new(), |b, (k, v)| b.with(k, v));
            Category::atom_with(name, bundle)
        })
}

fn singleton() -> impl Strategy<Value = Category> {
    prop::collection::vec(
        prop::sample::select(vec!["the", "bucket", "up", "beans"]),
        1..3,
    )
    .prop_map(|t| Category::singleton(&t))
}

fn modality() -> impl Strategy<Value = Modality> {
    prop::sample::select(vec![
        Modality::Star,
        Modality::Diamond,
        Modality::Cross,
        Modality::Dot,
    ])
}

fn slash() -> impl Strategy<Value = Slash> {
    (prop::bool::ANY, modality()).prop_map(|(fwd, m)| {
        Slash::new(
            if fwd {
                Direction::Forward
            } else {
                Direction::Backward
            },
            m,
        )
    })
}

/// Any category, including ill-formed singleton placements.
fn category() -> impl Strategy<Value = Category> {
    let leaf = prop_oneof![
        4 => atom(),
        1 => singleton(),
        1 => prop::sample::select(vec!["X", "Y"]).prop_map(Category::var),
    ];
    leaf.prop_recursive(4, 16, 2, |inner| {
        (inner.clone(), slash(), inner).prop_map(|(r, s, a)| Category::functor(r, s, a))
    })
}

/// Categories without singletons or variables, for unification tests.
fn plain_category() -> impl Strategy<Value = Category> {
    atom().prop_recursive(3, 8, 2, |inner| {
        (inner.clone(), slash(), inner).prop_map(|(r, s, a)| Category::functor(r, s, a))
    })
}

/// Independent statement of the structural constraints: a singleton may
/// only stand as the argument of a `*` slash, or alone.
fn well_formed(c: &Category, is_star_argument: bool, is_root: bool) -> bool {
    match c {
        Category::Singleton(t) => !t.is_empty() && (is_star_argument || is_root),
        Category::Functor {
            result,
            slash,
            argument,
        } => {
            well_formed(result, false, false)
                && well_formed(argument, slash.modality == Modality::Star, false)
        }
        _ => true,
    }
}

struct Span {
    tokens: Vec<String>,
    category: Category,
}

impl ArgumentSource for Span {
    fn tokens(&self) -> &[String] {
        &self.tokens
    }
    fn category(&self) -> &Category {
        &self.category
    }
    fn derived_feature(&self, _attr: &str) -> FeatureValue {
        FeatureValue::constant("-")
    }
}

proptest! {
    #[test]
    fn render_parse_round_trip(c in category(), m in modality()) {
        let text = c.render(m);
        prop_assert_eq!(parse_category(&text, m).unwrap(), c.clone(), "{}", text);
        // Display and FromStr agree too.
        prop_assert_eq!(c.to_string().parse::<Category>().unwrap(), c);
    }

    #[test]
    fn validator_agrees_with_placement_rule(c in category()) {
        let violations = validate_category(&c);
        prop_assert_eq!(violations.is_empty(), well_formed(&c, false, true), "{} {:?}", c, violations);
    }

    #[test]
    fn singleton_result_always_reported(s in singleton(), sl in slash(), arg in atom()) {
        let c = Category::functor(s, sl, arg);
        prop_assert!(validate_category(&c).contains(&CategoryViolation::SingletonAsResult));
    }

    #[test]
    fn unification_is_symmetric(a in plain_category(), b in plain_category()) {
        let ab = unify(&a, &b, &Bindings::new());
        let ba = unify(&b, &a, &Bindings::new());
        prop_assert_eq!(ab.is_some(), ba.is_some());
        prop_assert!(unify(&a, &a, &Bindings::new()).is_some());
    }

    #[test]
    fn applying_bindings_is_idempotent(a in category(), b in category()) {
        if let Some(bindings) = unify(&a, &b, &Bindings::new()) {
            for c in [&a, &b] {
                let once = bindings.apply(c);
                prop_assert_eq!(bindings.apply(&once), once);
            }
        }
    }

    #[test]
    fn singleton_matching_ignores_category(
        spec in singleton(),
        offered in prop::collection::vec(prop::sample::select(vec!["the", "bucket", "up", "beans"]), 1..3),
        cat in category(),
    ) {
        let Category::Singleton(wanted) = &spec else { unreachable!() };
        let source = Span { tokens: offered.iter().map(|s| s.to_string()).collect(), category: cat };
        let matched = match_argument(&spec, &source, &Bindings::new()).is_some();
        prop_assert_eq!(matched, *wanted == source.tokens);
    }

    #[test]
    fn lf_print_parse_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t: LfTerm = TermGen::new(6).term(&mut rng);
        let printed = t.to_string();
        let back = parse_lf(&printed).unwrap();
        prop_assert!(alpha_eq(&back, &t), "{} reparsed as {}", printed, back);
        prop_assert_eq!(back.to_string(), printed);
    }
}
