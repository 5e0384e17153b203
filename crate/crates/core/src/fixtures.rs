//! Small reference processes used by tests, the harness and the README.

use crate::lts::Lts;

/// `0 -τ-> 0`, `0 -c-> 1`, `1 -g-> 2`: may pay the cost `c` and then do
/// something good.
pub fn cond_pair_left() -> Lts {
    Lts::builder(3)
        .silent(0, 0)
        .visible(0, "c", 1)
        .visible(1, "g", 2)
        .build()
        .expect("fixture")
}

/// `0 -τ-> 0`, `0 -c-> 1`, declared over `{c, g}`: may pay the cost and then
/// deadlock.
pub fn cond_pair_right() -> Lts {
    Lts::builder(2)
        .silent(0, 0)
        .visible(0, "c", 1)
        .alphabet(&["g"])
        .build()
        .expect("fixture")
}

/// `0 -a-> 1 -a-> 2`, silent loop on `2`.
pub fn refusal_pair_left() -> Lts {
    Lts::builder(3)
        .visible(0, "a", 1)
        .visible(1, "a", 2)
        .silent(2, 2)
        .build()
        .expect("fixture")
}

/// As [`refusal_pair_left`] plus an extra `a`-branch from the initial state to a
/// deadlocked state.
pub fn refusal_pair_right() -> Lts {
    Lts::builder(4)
        .visible(0, "a", 1)
        .visible(1, "a", 2)
        .silent(2, 2)
        .visible(0, "a", 3)
        .build()
        .expect("fixture")
}
