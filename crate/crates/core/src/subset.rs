//! Subsets of a finite group as `u64` masks, and the induced subset product.

use std::fmt;
use std::ops::{BitAnd, BitOr};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{Caps, FiniteGroup};

/// A set of element indices of some group of order at most 64.
///
/// Ordered by mask value, which is the enumeration order everywhere.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    #[inline]
    pub const fn from_bits(bits: u64) -> Self {
        Subset(bits)
    }

    #[inline]
    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(x: usize) -> Self {
        Subset(1u64 << x)
    }

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << n) - 1)
        }
    }

    #[inline]
    pub fn contains(self, x: usize) -> bool {
        x < 64 && self.0 >> x & 1 == 1
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn is_subset(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Subset) -> bool {
        self.0 & other.0 == 0
    }

    pub fn insert(&mut self, x: usize) {
        self.0 |= 1u64 << x;
    }

    /// Smallest member.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> Members {
        Members(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for Subset {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = Subset::EMPTY;
        for x in iter {
            s.insert(x);
        }
        s
    }
}

impl BitOr for Subset {
    type Output = Subset;
    fn bitor(self, rhs: Subset) -> Subset {
        Subset(self.0 | rhs.0)
    }
}

impl BitAnd for Subset {
    type Output = Subset;
    fn bitand(self, rhs: Subset) -> Subset {
        Subset(self.0 & rhs.0)
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

// Reports carry subsets as sorted element-index arrays.
impl Serialize for Subset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for Subset {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        if let Some(&bad) = v.iter().find(|&&x| x >= 64) {
            return Err(serde::de::Error::custom(format!(
                "element {bad} out of range"
            )));
        }
        Ok(v.into_iter().collect())
    }
}

/// Iterator over the members of a [`Subset`] in increasing order.
pub struct Members(u64);

impl Iterator for Members {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let x = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(x)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Members {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubsetError {
    #[error("subsets belong to different groups")]
    ParentMismatch,
    #[error("subset is empty")]
    Empty,
    #[error("element {element} is not in a group of order {order}")]
    OutOfRange { element: usize, order: usize },
    #[error("group order {order} exceeds the exhaustive cap {cap}")]
    CapExceeded { order: usize, cap: usize },
}

/// A nonempty subset bound to its group.
#[derive(Clone, Copy)]
pub struct GroupSubset<'g> {
    group: &'g FiniteGroup,
    members: Subset,
}

impl<'g> GroupSubset<'g> {
    pub fn new(group: &'g FiniteGroup, members: Subset) -> Result<Self, SubsetError> {
        if members.is_empty() {
            return Err(SubsetError::Empty);
        }
        if !members.is_subset(group.full()) {
            let element = members.iter().find(|&x| x >= group.order()).unwrap_or(64);
            return Err(SubsetError::OutOfRange {
                element,
                order: group.order(),
            });
        }
        Ok(GroupSubset { group, members })
    }

    pub fn from_elements(
        group: &'g FiniteGroup,
        elements: impl IntoIterator<Item = usize>,
    ) -> Result<Self, SubsetError> {
        let mut members = Subset::EMPTY;
        for x in elements {
            if x >= group.order() {
                return Err(SubsetError::OutOfRange {
                    element: x,
                    order: group.order(),
                });
            }
            members.insert(x);
        }
        Self::new(group, members)
    }

    pub fn group(&self) -> &'g FiniteGroup {
        self.group
    }

    pub fn members(&self) -> Subset {
        self.members
    }

    fn same_parent(&self, other: &GroupSubset<'_>) -> bool {
        std::ptr::eq(self.group, other.group) || self.group == other.group
    }

    pub fn product(&self, other: &GroupSubset<'_>) -> Result<GroupSubset<'g>, SubsetError> {
        if !self.same_parent(other) {
            return Err(SubsetError::ParentMismatch);
        }
        Ok(GroupSubset {
            group: self.group,
            members: self.group.product(self.members, other.members),
        })
    }

    pub fn inverse(&self) -> GroupSubset<'g> {
        GroupSubset {
            group: self.group,
            members: self.group.inverse_set(self.members),
        }
    }

    pub fn is_idempotent(&self) -> bool {
        self.group.is_idempotent(self.members)
    }
}

impl PartialEq for GroupSubset<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.same_parent(other) && self.members == other.members
    }
}

impl fmt::Debug for GroupSubset<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.members)
    }
}

/// Every nonempty mask, in ascending order, of a group within the exhaustive cap.
pub(crate) fn nonempty_masks(
    group: &FiniteGroup,
    caps: &Caps,
) -> Result<impl Iterator<Item = Subset>, SubsetError> {
    let n = group.order();
    if n > caps.exhaustive_order || n > 31 {
        return Err(SubsetError::CapExceeded {
            order: n,
            cap: caps.exhaustive_order.min(31),
        });
    }
    Ok((1u64..1u64 << n).map(Subset::from_bits))
}

/// All nonempty `E` with `EE = E`, ascending by mask.
pub fn all_idempotents(group: &FiniteGroup, caps: &Caps) -> Result<Vec<Subset>, SubsetError> {
    Ok(nonempty_masks(group, caps)?
        .filter(|&e| group.is_idempotent(e))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn s(xs: &[usize]) -> Subset {
        xs.iter().copied().collect()
    }

    #[test]
    fn c2_products() {
        let g = catalog::cyclic(2).unwrap();
        assert_eq!(g.product(s(&[0]), s(&[1])), s(&[1]));
        assert_eq!(g.product(s(&[0, 1]), s(&[0, 1])), s(&[0, 1]));
    }

    #[test]
    fn s3_coset_square_is_normal_subgroup() {
        let g = catalog::symmetric(3).unwrap();
        let n = s(&catalog::s3_rotations());
        let t = catalog::s3_transposition();
        let tn = g.left_translate(t, n);
        // brute force over the 3x3 pairs
        let brute: Subset = tn
            .iter()
            .flat_map(|a| tn.iter().map(move |b| (a, b)))
            .map(|(a, b)| g.mul(a, b))
            .collect();
        assert_eq!(brute, n);
        assert_eq!(g.product(tn, tn), n);
    }

    #[test]
    fn inverse_sets() {
        let c4 = catalog::cyclic(4).unwrap();
        assert_eq!(c4.inverse_set(s(&[0])), s(&[0]));
        assert_eq!(c4.inverse_set(s(&[1])), s(&[3]));

        let s3 = catalog::symmetric(3).unwrap();
        let t = catalog::s3_transposition();
        let c = catalog::s3_rotations()[1];
        let c2 = s3.mul(c, c);
        assert_eq!(s3.inv(t), t);
        assert_eq!(s3.inverse_set(s(&[t, c])), s(&[t, c2]));
    }

    #[test]
    fn idempotent_examples() {
        let c2 = catalog::cyclic(2).unwrap();
        assert!(!c2.is_idempotent(s(&[1])));
        let s3 = catalog::symmetric(3).unwrap();
        let t = catalog::s3_transposition();
        let c = catalog::s3_rotations()[1];
        assert!(s3.is_idempotent(s(&[0, t])));
        assert!(!s3.is_idempotent(s(&[0, c])));
        assert_eq!(s3.product(s(&[0, c]), s(&[0, c])), s(&[0, c, s3.mul(c, c)]));
    }

    #[test]
    fn idempotents_of_small_cyclic_groups() {
        let caps = Caps::default();
        let c1 = catalog::cyclic(1).unwrap();
        assert_eq!(all_idempotents(&c1, &caps).unwrap(), vec![s(&[0])]);
        let c2 = catalog::cyclic(2).unwrap();
        assert_eq!(
            all_idempotents(&c2, &caps).unwrap(),
            vec![s(&[0]), s(&[0, 1])]
        );
        let c3 = catalog::cyclic(3).unwrap();
        assert_eq!(
            all_idempotents(&c3, &caps).unwrap(),
            vec![s(&[0]), s(&[0, 1, 2])]
        );
    }

    #[test]
    fn cap_is_enforced() {
        let g = catalog::cyclic(20).unwrap();
        assert!(matches!(
            all_idempotents(&g, &Caps::default()),
            Err(SubsetError::CapExceeded { order: 20, .. })
        ));
    }

    #[test]
    fn bound_subsets_check_parent() {
        let c2 = catalog::cyclic(2).unwrap();
        let c3 = catalog::cyclic(3).unwrap();
        let a = GroupSubset::from_elements(&c2, [1]).unwrap();
        let b = GroupSubset::from_elements(&c3, [1]).unwrap();
        assert_eq!(a.product(&b).unwrap_err(), SubsetError::ParentMismatch);
        assert_eq!(a.product(&a).unwrap().members(), s(&[0]));
        assert_eq!(a.inverse().members(), s(&[1]));
        assert!(!a.is_idempotent());
        assert_eq!(
            GroupSubset::new(&c2, Subset::EMPTY).unwrap_err(),
            SubsetError::Empty
        );
        assert!(matches!(
            GroupSubset::from_elements(&c2, [2]),
            Err(SubsetError::OutOfRange {
                element: 2,
                order: 2
            })
        ));
    }

    #[test]
    fn serializes_as_sorted_array() {
        assert_eq!(serde_json::to_string(&s(&[3, 0, 5])).unwrap(), "[0,3,5]");
        let back: Subset = serde_json::from_str("[5,0,3]").unwrap();
        assert_eq!(back, s(&[0, 3, 5]));
    }
}
