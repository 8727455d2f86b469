//! Regenerate corpus/corpus.json at the workspace root.

use std::path::PathBuf;

use okh::corpus;

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(corpus::DEFAULT_SEED);
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus/corpus.json");
    std::fs::write(&path, corpus::to_json(&corpus::generate(seed))).expect("write corpus");
    println!("wrote {}", path.display());
}
