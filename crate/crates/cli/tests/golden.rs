//! Byte-exact comparison of ASCII derivations with `grammars/golden`.
//! Set `IDIOMCCG_BLESS=1` to rewrite the expected files.

use std::fs;
use std::path::PathBuf;
use std::process::Command;

const CASES: [(&str, &[&str]); 8] = [
    ("persuade", &["John persuaded Mary to hit Harry"]),
    ("particle_shift", &["I picked the book up"]),
    ("particle_adjacent", &["picked up the book"]),
    (
        "beans_relative",
        &["--goal", "NP", "the beans that you spilled"],
    ),
    (
        "bucket_relative",
        &["--goal", "NP", "the bucket that you kicked"],
    ),
    ("twiddle", &["I twiddled my thumbs"]),
    ("twiddle_his", &["I twiddled his thumbs"]),
    ("bean_singular", &["to spill the bean"]),
];

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

#[test]
fn ascii_derivations_match_golden_files() {
    let bless = std::env::var_os("IDIOMCCG_BLESS").is_some();
    let mut mismatches = Vec::new();
    for (name, args) in CASES {
        let out = Command::new(env!("CARGO_BIN_EXE_idiomccg"))
            .arg("parse")
            .arg("-l")
            .arg(root().join("grammars/fg2018.ccg"))
            .args(args)
            .output()
            .expect("binary runs");
        assert!(out.status.code().is_some_and(|c| c <= 1), "{name}: {out:?}");
        let path = root().join(format!("grammars/golden/{name}.expected"));
        if bless {
            fs::write(&path, &out.stdout).unwrap();
            continue;
        }
        let expected = fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        if expected != out.stdout {
            mismatches.push(format!(
                "{name}:\n--- expected\n{}\n--- actual\n{}",
                String::from_utf8_lossy(&expected),
                String::from_utf8_lossy(&out.stdout)
            ));
        }
    }
    assert!(mismatches.is_empty(), "{}", mismatches.join("\n"));
}
