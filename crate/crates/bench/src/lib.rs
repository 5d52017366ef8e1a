//! Workloads shared by the benchmarks.

use std::path::PathBuf;

use ildtt_core::surface::{parse_module, SourceModule};
use ildtt_core::testgen::{Sample, TermGen};

pub fn corpus_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

/// Every module of the corpus, with its file name.
pub fn corpus_modules() -> Vec<(String, SourceModule)> {
    let root = corpus_root();
    ildtt_core::corpus::corpus_files(&root)
        .unwrap()
        .into_iter()
        .map(|f| {
            let src = std::fs::read_to_string(root.join(&f)).unwrap();
            (f, parse_module(&src).unwrap())
        })
        .collect()
}

/// `n` random well-typed terms of at most the given depth, from a fixed seed.
pub fn samples(n: usize, depth: usize) -> (TermGen, Vec<Sample>) {
    let mut g = TermGen::new(0xbe7c);
    let v = (0..n).map(|_| g.sample(depth)).collect();
    (g, v)
}
