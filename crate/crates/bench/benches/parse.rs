use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use idiomccg::{
    beta_normalize, parse, parse_lexicon, parse_lf, tokenize, validate_lexicon, ParseOptions,
};
use idiomccg_bench::{fragment, FRAGMENT, SENTENCES};

fn parsing(c: &mut Criterion) {
    let lex = fragment();
    let mut group = c.benchmark_group("parse");
    for sentence in SENTENCES {
        let tokens = tokenize(sentence, false);
        for pack in [true, false] {
            let options = ParseOptions {
                pack,
                ..ParseOptions::default()
            };
            let id = format!("{}{}", if pack { "packed/" } else { "unpacked/" }, sentence);
            group.bench_with_input(BenchmarkId::from_parameter(id), &tokens, |b, tokens| {
                b.iter(|| parse(&lex, black_box(tokens), &options).unwrap())
            });
        }
    }
    group.finish();
}

fn lexicon(c: &mut Criterion) {
    c.bench_function("lexicon/parse", |b| {
        b.iter(|| parse_lexicon(black_box(FRAGMENT)).unwrap())
    });
    let lex = fragment();
    c.bench_function("lexicon/validate", |b| {
        b.iter(|| validate_lexicon(black_box(&lex)))
    });
}

fn normalization(c: &mut Criterion) {
    let term = parse_lf(
        r"(\p\q\z. q z & p z) ((\x\y. kick x y) (def bucket)) ((\x\y. drag x y) (def bucket)) j",
    )
    .unwrap();
    c.bench_function("lf/normalize", |b| {
        b.iter(|| beta_normalize(black_box(&term), 10_000).unwrap())
    });
}

criterion_group!(benches, parsing, lexicon, normalization);
criterion_main!(benches);
