//! Inputs shared by the benchmarks in `benches/`.

pub const FRAGMENT: &str = include_str!("../../../grammars/fg2018.ccg");

/// Sentences of increasing length and ambiguity.
pub const SENTENCES: [&str; 5] = [
    "John kicked the bucket",
    "I picked the book up",
    "John persuaded Mary to hit Harry",
    "the beans that you spilled",
    "Mary dragged and John kicked the bucket",
];

pub fn fragment() -> idiomccg::Lexicon {
    idiomccg::parse_lexicon(FRAGMENT).expect("fragment parses")
}
