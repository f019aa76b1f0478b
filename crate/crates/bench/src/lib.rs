//! Shared inputs for the criterion benches.

use hopfc_core::corpus::{random_cod0_term, rng, trefoil_plus_one, DEFAULT_SEED};
use hopfc_core::tangle::extract_presentation;
use hopfc_core::{BraidedTerm, StringLinkPresentation};

/// Seeded cod-0 terms of the size used by the rewriting acceptance suite.
pub fn rewriting_inputs(count: usize) -> Vec<BraidedTerm> {
    let mut r = rng(DEFAULT_SEED);
    (0..count).map(|k| random_cod0_term(&mut r, 1 + k % 3, 15, 5)).collect()
}

pub fn trefoil_presentation() -> StringLinkPresentation {
    extract_presentation(&trefoil_plus_one()).expect("fixture is a string link")
}
