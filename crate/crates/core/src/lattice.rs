//! Subgroup lattices.
//!
//! Subgroups are grown from the trivial subgroup by adjoining one element at
//! a time and closing, iterated to a fixpoint. Every subgroup is reached this
//! way, and the cost stays proportional to (#subgroups x n) closures.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::group::{FiniteGroup, GroupError};
use crate::subset::Subset;

/// A subgroup of some [`FiniteGroup`], stored as its member mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Subgroup(Subset);

impl Subgroup {
    pub fn new(group: &FiniteGroup, members: Subset) -> Result<Self, GroupError> {
        if members.is_subset(group.full()) && group.is_subgroup(members) {
            Ok(Subgroup(members))
        } else {
            Err(GroupError::NotASubgroup {
                mask: members.bits(),
            })
        }
    }

    pub fn members(self) -> Subset {
        self.0
    }

    pub fn order(self) -> usize {
        self.0.len()
    }

    /// `hNh^-1 = N` for every `h` in `host`.
    pub fn is_normal_in(self, group: &FiniteGroup, host: Subset) -> bool {
        host.iter().all(|h| {
            self.0
                .iter()
                .all(|x| self.0.contains(group.conjugate(h, x)))
        })
    }
}

/// Subgroup generated by `gens`, with BFS closure under right multiplication.
pub fn generated(group: &FiniteGroup, gens: &[usize]) -> Subset {
    let mut members = Subset::singleton(group.identity());
    let mut queue = vec![group.identity()];
    while let Some(x) = queue.pop() {
        for &g in gens {
            let y = group.mul(x, g);
            if !members.contains(y) {
                members.insert(y);
                queue.push(y);
            }
        }
    }
    members
}

/// Closure of an arbitrary mask to the subgroup it generates.
pub fn closure(group: &FiniteGroup, s: Subset) -> Subgroup {
    Subgroup(generated(group, &s.to_vec()))
}

/// Every subgroup of `group`, sorted by `(size, mask)`.
pub fn all_subgroups(group: &FiniteGroup) -> Vec<Subgroup> {
    let trivial = group.trivial();
    let mut seen: HashSet<Subset> = HashSet::from([trivial]);
    // (members, a generating list)
    let mut frontier: Vec<(Subset, Vec<usize>)> = vec![(trivial, Vec::new())];
    while let Some((members, gens)) = frontier.pop() {
        for x in group.elements() {
            if members.contains(x) {
                continue;
            }
            let mut next_gens = gens.clone();
            next_gens.push(x);
            let next = generated(group, &next_gens);
            if seen.insert(next) {
                frontier.push((next, next_gens));
            }
        }
    }
    let mut out: Vec<Subgroup> = seen.into_iter().map(Subgroup).collect();
    out.sort_by_key(|s| (s.order(), s.members()));
    out
}

/// All `N <= H` that are normal in `H` (not necessarily in the whole group).
pub fn normal_subgroups_of(group: &FiniteGroup, host: Subset) -> Result<Vec<Subgroup>, GroupError> {
    let host = Subgroup::new(group, host)?;
    Ok(normal_subgroups_in(group, host, &all_subgroups(group)))
}

/// Same as [`normal_subgroups_of`], reusing a precomputed lattice.
pub fn normal_subgroups_in(
    group: &FiniteGroup,
    host: Subgroup,
    lattice: &[Subgroup],
) -> Vec<Subgroup> {
    lattice
        .iter()
        .copied()
        .filter(|n| n.members().is_subset(host.members()))
        .filter(|n| n.is_normal_in(group, host.members()))
        .collect()
}

/// Number of pairs `(H, N)` with `N` normal in `H`.
pub fn subquotient_pair_count(group: &FiniteGroup) -> usize {
    let lattice = all_subgroups(group);
    lattice
        .iter()
        .map(|&h| normal_subgroups_in(group, h, &lattice).len())
        .sum()
}
