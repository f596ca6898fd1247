//! Fixtures shared by the benchmarks.

use thurston_core::corpus;
use thurston_core::{CoverPresentation, Multicurve};

/// A corpus presentation together with its attached multicurve.
pub fn corpus_pair(name: &str) -> (CoverPresentation, Multicurve) {
    let e = corpus::entry(name).unwrap_or_else(|| panic!("no corpus entry {name}"));
    let p = e.presentation().expect("corpus parses");
    let g = e.multicurve().expect("corpus curves parse").expect("entry has curves");
    (p, g)
}
