//! Exhaustive power-group search.
//!
//! The identity `E` of any power group is idempotent, and every member `A`
//! satisfies `EA = AE = A`. So each power group sits inside the local monoid
//! at `E`, and in fact inside its group of units. The census therefore runs
//! over idempotents and takes every subgroup of each unit group. The
//! brute-force oracle below checks that claim on tiny groups by trying every
//! family of subsets.

use std::collections::HashSet;

use thiserror::Error;

use crate::family::{FamilyError, PowerGroupFamily};
use crate::group::{Caps, FiniteGroup};
use crate::lattice;
use crate::subset::{all_idempotents, nonempty_masks, Subset, SubsetError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("subset {0} is not idempotent")]
    NotIdempotent(Subset),
    #[error("group order {order} exceeds cap {cap}")]
    CapExceeded { order: usize, cap: usize },
    #[error(transparent)]
    Family(#[from] FamilyError),
}

impl From<SubsetError> for SearchError {
    fn from(e: SubsetError) -> Self {
        match e {
            SubsetError::CapExceeded { order, cap } => SearchError::CapExceeded { order, cap },
            other => unreachable!("subset scan error {other:?}"),
        }
    }
}

/// All nonempty `A` with `EA = AE = A`, for an idempotent `E`.
#[derive(Debug, Clone)]
pub struct LocalMonoid {
    pub idempotent: Subset,
    pub members: Vec<Subset>,
}

pub fn local_monoid(
    group: &FiniteGroup,
    e: Subset,
    caps: &Caps,
) -> Result<LocalMonoid, SearchError> {
    if e.is_empty() || !group.is_idempotent(e) {
        return Err(SearchError::NotIdempotent(e));
    }
    let members = nonempty_masks(group, caps)?
        .filter(|&a| group.product(e, a) == a && group.product(a, e) == a)
        .collect();
    Ok(LocalMonoid {
        idempotent: e,
        members,
    })
}

/// The units of the local monoid at `E`: the largest power group with
/// identity `E`.
pub fn unit_group<'g>(
    group: &'g FiniteGroup,
    e: Subset,
    caps: &Caps,
) -> Result<PowerGroupFamily<'g>, SearchError> {
    let monoid = local_monoid(group, e, caps)?;
    // |AB| >= max(|A|, |B|), so a unit and its inverse are no larger than E.
    let small: Vec<Subset> = monoid
        .members
        .into_iter()
        .filter(|a| a.len() <= e.len())
        .collect();
    let units = small.iter().copied().filter(|&a| {
        small
            .iter()
            .any(|&b| group.product(a, b) == e && group.product(b, a) == e)
    });
    Ok(PowerGroupFamily::certify(group, units)?)
}

fn sort_families(families: &mut [PowerGroupFamily<'_>]) {
    families.sort_by_cached_key(|f| (f.identity(), f.len(), f.canonical_key()));
}

fn families_at<'g>(
    group: &'g FiniteGroup,
    e: Subset,
    caps: &Caps,
) -> Result<Vec<PowerGroupFamily<'g>>, SearchError> {
    let units = unit_group(group, e, caps)?;
    lattice::all_subgroups(units.abstract_table())
        .into_iter()
        .map(|h| units.restrict(h.members()).map_err(SearchError::from))
        .collect()
}

/// Every power group of `group`, ordered by (identity mask, size, members).
pub fn all_power_groups<'g>(
    group: &'g FiniteGroup,
    caps: &Caps,
) -> Result<Vec<PowerGroupFamily<'g>>, SearchError> {
    let idempotents = all_idempotents(group, caps)?;

    #[cfg(feature = "parallel")]
    let per_identity: Vec<Result<Vec<PowerGroupFamily<'g>>, SearchError>> = {
        use rayon::prelude::*;
        idempotents
            .par_iter()
            .map(|&e| families_at(group, e, caps))
            .collect()
    };
    #[cfg(not(feature = "parallel"))]
    let per_identity: Vec<Result<Vec<PowerGroupFamily<'g>>, SearchError>> = idempotents
        .iter()
        .map(|&e| families_at(group, e, caps))
        .collect();

    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for batch in per_identity {
        for f in batch? {
            if seen.insert(f.canonical_key()) {
                out.push(f);
            }
        }
    }
    sort_families(&mut out);
    Ok(out)
}

/// Tries every family of nonempty subsets: `2^(2^n - 1)` candidates.
pub fn brute_force_power_groups<'g>(
    group: &'g FiniteGroup,
    caps: &Caps,
) -> Result<Vec<PowerGroupFamily<'g>>, SearchError> {
    let n = group.order();
    if n > caps.oracle_order || n > 4 {
        return Err(SearchError::CapExceeded {
            order: n,
            cap: caps.oracle_order.min(4),
        });
    }
    let subsets: Vec<Subset> = (1u64..1 << n).map(Subset::from_bits).collect();
    let m = subsets.len();
    let mut out = Vec::new();
    for choice in 1u64..1 << m {
        let family: Vec<Subset> = (0..m)
            .filter(|&i| choice >> i & 1 == 1)
            .map(|i| subsets[i])
            .collect();
        let closed = family.iter().all(|&a| {
            family
                .iter()
                .all(|&b| family.contains(&group.product(a, b)))
        });
        if !closed {
            continue;
        }
        if let Ok(f) = PowerGroupFamily::certify(group, family) {
            out.push(f);
        }
    }
    sort_families(&mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn s(xs: &[usize]) -> Subset {
        xs.iter().copied().collect()
    }

    fn keys(fs: &[PowerGroupFamily<'_>]) -> Vec<Vec<Subset>> {
        fs.iter().map(|f| f.canonical_key()).collect()
    }

    #[test]
    fn local_monoids_of_c2() {
        let g = catalog::cyclic(2).unwrap();
        let caps = Caps::default();
        let m = local_monoid(&g, s(&[0]), &caps).unwrap();
        assert_eq!(m.members, vec![s(&[0]), s(&[1]), s(&[0, 1])]);
        let m = local_monoid(&g, s(&[0, 1]), &caps).unwrap();
        assert_eq!(m.members, vec![s(&[0, 1])]);
        assert_eq!(
            local_monoid(&g, s(&[1]), &caps).unwrap_err(),
            SearchError::NotIdempotent(s(&[1]))
        );
    }

    #[test]
    fn trivial_idempotent_monoid_is_everything() {
        let g = catalog::symmetric(3).unwrap();
        let m = local_monoid(&g, g.trivial(), &Caps::default()).unwrap();
        assert_eq!(m.members.len(), 63);
    }

    #[test]
    fn unit_groups() {
        let caps = Caps::default();
        let c2 = catalog::cyclic(2).unwrap();
        let u = unit_group(&c2, s(&[0]), &caps).unwrap();
        assert_eq!(u.elements(), &[s(&[0]), s(&[1])]);
        let u = unit_group(&c2, s(&[0, 1]), &caps).unwrap();
        assert_eq!(u.elements(), &[s(&[0, 1])]);

        let s3 = catalog::symmetric(3).unwrap();
        let n = s(&catalog::s3_rotations());
        let u = unit_group(&s3, n, &caps).unwrap();
        let tn = s3.left_translate(catalog::s3_transposition(), n);
        assert_eq!(u.elements(), &[n, tn]);
        assert_eq!(u.abstract_table(), &catalog::cyclic(2).unwrap());
    }

    #[test]
    fn census_counts() {
        let caps = Caps::default();
        let count = |name: &str| {
            let g = catalog::parse(name, &caps).unwrap();
            all_power_groups(&g, &caps).unwrap().len()
        };
        assert_eq!(count("trivial"), 1);
        assert_eq!(count("C2"), 3);
        assert_eq!(count("C3"), 3);
        assert_eq!(count("C4"), 6);
        assert_eq!(count("S3"), 12);
    }

    #[test]
    fn c2_families_exactly() {
        let g = catalog::cyclic(2).unwrap();
        let fs = all_power_groups(&g, &Caps::default()).unwrap();
        assert_eq!(
            keys(&fs),
            vec![vec![s(&[0])], vec![s(&[0]), s(&[1])], vec![s(&[0, 1])]]
        );
    }

    #[test]
    fn oracle_small_cases() {
        let caps = Caps::default();
        let t = catalog::cyclic(1).unwrap();
        assert_eq!(
            keys(&brute_force_power_groups(&t, &caps).unwrap()),
            vec![vec![s(&[0])]]
        );
        let c2 = catalog::cyclic(2).unwrap();
        assert_eq!(brute_force_power_groups(&c2, &caps).unwrap().len(), 3);
        let c4 = catalog::cyclic(4).unwrap();
        assert_eq!(
            brute_force_power_groups(&c4, &caps).unwrap().len(),
            lattice::subquotient_pair_count(&c4)
        );
        let c5 = catalog::cyclic(5).unwrap();
        assert!(matches!(
            brute_force_power_groups(&c5, &caps),
            Err(SearchError::CapExceeded { order: 5, .. })
        ));
    }

    #[test]
    fn families_satisfy_invariants() {
        let caps = Caps::default();
        for name in ["D4", "Q8", "C2^3"] {
            let g = catalog::parse(name, &caps).unwrap();
            for f in all_power_groups(&g, &caps).unwrap() {
                assert!(f.check_invariants());
                let size = f.identity().len();
                assert!(f.elements().iter().all(|a| a.len() == size));
                let idempotents = f.elements().iter().filter(|&&a| g.is_idempotent(a)).count();
                assert_eq!(idempotents, 1);
            }
        }
    }
}
