//! Families of subsets certified as groups under the subset product.

use std::collections::HashMap;

use thiserror::Error;

use crate::group::{validate_cayley, FiniteGroup, GroupError};
use crate::subset::Subset;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("family is empty")]
    Empty,
    #[error("family contains the empty subset")]
    EmptyMember,
    #[error("subset {0} is not a subset of the group")]
    OutOfRange(Subset),
    #[error("product of members {a} and {b} is {product}, which is not in the family")]
    NotClosed {
        a: Subset,
        b: Subset,
        product: Subset,
    },
    #[error("family has no identity element")]
    NoIdentity,
    #[error("induced table is not a group: {0}")]
    NotAGroup(#[from] GroupError),
}

/// A power group: a family of nonempty subsets closed under the subset
/// product and forming a group under it.
///
/// Elements are kept identity first, then ascending by mask, so the abstract
/// table has its identity at index 0 like every other validated table.
#[derive(Clone, Debug)]
pub struct PowerGroupFamily<'g> {
    parent: &'g FiniteGroup,
    elements: Vec<Subset>,
    inverse_map: Vec<usize>,
    table: FiniteGroup,
}

impl<'g> PowerGroupFamily<'g> {
    /// Certifies `members` (duplicates ignored) as a power group of `parent`.
    pub fn certify(
        parent: &'g FiniteGroup,
        members: impl IntoIterator<Item = Subset>,
    ) -> Result<Self, FamilyError> {
        let mut elements: Vec<Subset> = members.into_iter().collect();
        elements.sort();
        elements.dedup();
        if elements.is_empty() {
            return Err(FamilyError::Empty);
        }
        if elements[0].is_empty() {
            return Err(FamilyError::EmptyMember);
        }
        if let Some(&bad) = elements.iter().find(|s| !s.is_subset(parent.full())) {
            return Err(FamilyError::OutOfRange(bad));
        }

        // The identity is the unique idempotent of a group; find it first so
        // the table can be laid out with it at index 0.
        let e = elements
            .iter()
            .position(|&s| parent.is_idempotent(s))
            .ok_or(FamilyError::NoIdentity)?;
        let id = elements.remove(e);
        elements.insert(0, id);

        let index: HashMap<Subset, usize> =
            elements.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let k = elements.len();
        let mut rows = vec![vec![0usize; k]; k];
        for (i, &a) in elements.iter().enumerate() {
            for (j, &b) in elements.iter().enumerate() {
                let product = parent.product(a, b);
                rows[i][j] =
                    *index
                        .get(&product)
                        .ok_or(FamilyError::NotClosed { a, b, product })?;
            }
        }
        let table = validate_cayley(&rows)?;
        // validation relabels only when the identity is not already at 0
        if table.rows() != rows {
            return Err(FamilyError::NoIdentity);
        }
        let inverse_map = table.inverses();
        Ok(PowerGroupFamily {
            parent,
            elements,
            inverse_map,
            table,
        })
    }

    pub fn parent(&self) -> &'g FiniteGroup {
        self.parent
    }

    pub fn elements(&self) -> &[Subset] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn identity_index(&self) -> usize {
        0
    }

    pub fn identity(&self) -> Subset {
        self.elements[0]
    }

    pub fn inverse_map(&self) -> &[usize] {
        &self.inverse_map
    }

    /// Family inverse of the element at `i`: the `A'` with `AA' = A'A = E`.
    pub fn inverse_of(&self, i: usize) -> Subset {
        self.elements[self.inverse_map[i]]
    }

    pub fn abstract_table(&self) -> &FiniteGroup {
        &self.table
    }

    pub fn index_of(&self, s: Subset) -> Option<usize> {
        self.elements.iter().position(|&x| x == s)
    }

    pub fn contains(&self, s: Subset) -> bool {
        self.index_of(s).is_some()
    }

    /// Union of all members.
    pub fn union(&self) -> Subset {
        self.elements.iter().fold(Subset::EMPTY, |acc, &s| acc | s)
    }

    /// Members sorted by mask; equal keys mean equal families.
    pub fn canonical_key(&self) -> Vec<Subset> {
        let mut key = self.elements.clone();
        key.sort();
        key
    }

    /// The sub-family picked out by a mask over abstract element indices
    /// (typically a subgroup of [`Self::abstract_table`]).
    pub fn restrict(&self, indices: Subset) -> Result<PowerGroupFamily<'g>, FamilyError> {
        PowerGroupFamily::certify(self.parent, indices.iter().map(|i| self.elements[i]))
    }

    /// Rechecks every type invariant from scratch.
    pub fn check_invariants(&self) -> bool {
        let k = self.elements.len();
        let distinct = {
            let mut key = self.canonical_key();
            key.dedup();
            key.len() == k
        };
        distinct
            && self.elements.iter().all(|s| !s.is_empty())
            && validate_cayley(&self.table.rows()).is_ok()
            && self.parent.is_idempotent(self.identity())
            && (0..k).all(|i| {
                (0..k).all(|j| {
                    self.parent.product(self.elements[i], self.elements[j])
                        == self.elements[self.table.mul(i, j)]
                })
            })
    }
}

impl PartialEq for PowerGroupFamily<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.parent == other.parent && self.canonical_key() == other.canonical_key()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn s(xs: &[usize]) -> Subset {
        xs.iter().copied().collect()
    }

    #[test]
    fn singletons_form_a_copy_of_the_group() {
        let g = catalog::cyclic(3).unwrap();
        let f = PowerGroupFamily::certify(&g, g.elements().map(Subset::singleton)).unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(f.identity(), s(&[0]));
        assert_eq!(f.abstract_table(), &g);
        assert!(f.check_invariants());
    }

    #[test]
    fn identity_is_placed_first() {
        let g = catalog::cyclic(4).unwrap();
        let f = PowerGroupFamily::certify(&g, [s(&[1, 3]), s(&[0, 2])]).unwrap();
        assert_eq!(f.elements(), &[s(&[0, 2]), s(&[1, 3])]);
        assert_eq!(f.inverse_map(), &[0, 1]);
    }

    #[test]
    fn rejects_non_groups() {
        let g = catalog::cyclic(2).unwrap();
        assert_eq!(
            PowerGroupFamily::certify(&g, [s(&[1])]).unwrap_err(),
            FamilyError::NoIdentity
        );
        assert!(matches!(
            PowerGroupFamily::certify(&g, [s(&[0]), s(&[0, 1])]),
            Err(FamilyError::NotAGroup(_))
        ));
        assert!(matches!(
            PowerGroupFamily::certify(&g, [s(&[0]), s(&[1]), s(&[0, 1])]),
            Err(FamilyError::NotAGroup(_))
        ));
        assert_eq!(
            PowerGroupFamily::certify(&g, std::iter::empty()).unwrap_err(),
            FamilyError::Empty
        );
        assert_eq!(
            PowerGroupFamily::certify(&g, [Subset::EMPTY]).unwrap_err(),
            FamilyError::EmptyMember
        );
        let c3 = catalog::cyclic(3).unwrap();
        assert!(matches!(
            PowerGroupFamily::certify(&c3, [s(&[0]), s(&[1])]),
            Err(FamilyError::NotClosed { .. })
        ));
    }
}
