//! Shared fixtures for the criterion benchmarks.

use modcsf::{BicolouredGraph, PartListing, Poset};

/// A 9-vertex listing with one bicoloured part.
pub fn sample_listing() -> PartListing {
    "v2 v1 v3 v3 v1 b1{2x2:1-1,2-1,2-2}"
        .parse()
        .expect("fixture listing parses")
}

/// The r=4, s=2 graph whose functionals are (2/12, 5/12, 5/12).
pub fn example_graph() -> BicolouredGraph {
    "4x2:1-1,2-1,1-2,3-2,4-2"
        .parse()
        .expect("fixture graph parses")
}

/// A 10-vertex unit interval order.
pub fn staircase_poset() -> Poset {
    "v1 v2 v1 v2 v3 v2 v3 v4 v3 v4"
        .parse::<PartListing>()
        .expect("fixture listing parses")
        .to_poset()
}
