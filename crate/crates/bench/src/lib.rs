//! Shared fixtures for the benchmark suite.

use irrtopo_core::parse::parse_space;
use irrtopo_core::SpacePresentation;

pub fn lambda() -> SpacePresentation {
    parse_space(
        "space vspace; points top; chain A; chain B; rel chain_below A top; rel chain_below B top; sup A = top; sup B = top; topology scott",
    )
    .unwrap()
}

pub fn nat_inf() -> SpacePresentation {
    parse_space(
        "space vspace; points inf; chain N; rel chain_below N inf; sup N = inf; topology alexandroff",
    )
    .unwrap()
}

pub fn rat01() -> SpacePresentation {
    parse_space("space rational; interval 0 closed 1 closed; topology scott").unwrap()
}
