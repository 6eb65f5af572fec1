//! Permutations, words and finite permutation groups.

mod group;
mod perm;
mod word;

pub use group::{orbit, orbits, PermGroup, StabChain};
pub use perm::Permutation;
pub use word::{evaluate_word, GroupWord, Letter};

/// `compose(p, q)` applies `p` first, then `q`.
pub fn compose(p: &Permutation, q: &Permutation) -> crate::Result<Permutation> {
    p.try_compose(q)
}

/// Order of a single permutation (lcm of cycle lengths).
pub fn order_of(p: &Permutation) -> u64 {
    p.order()
}
