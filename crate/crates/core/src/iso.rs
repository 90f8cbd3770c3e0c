//! Isomorphism of finite groups and the "underlies" relation.
//!
//! `G2` underlies `G1` when `G1` has a power group isomorphic to `G2`.

use serde::{Deserialize, Serialize};

use crate::family::PowerGroupFamily;
use crate::group::{Caps, FiniteGroup};
use crate::lattice;
use crate::search::{all_power_groups, SearchError};
use crate::subset::Subset;

/// Isomorphism invariants; equal for isomorphic groups.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupFingerprint {
    pub order: usize,
    pub abelian: bool,
    /// `(element order, count)` pairs, ascending.
    pub order_histogram: Vec<(usize, usize)>,
    pub center_size: usize,
    /// Conjugacy class sizes, ascending.
    pub class_sizes: Vec<usize>,
}

impl GroupFingerprint {
    pub fn of(group: &FiniteGroup) -> Self {
        let mut hist = std::collections::BTreeMap::new();
        for a in group.elements() {
            *hist.entry(group.element_order(a)).or_insert(0) += 1;
        }
        let mut class_sizes: Vec<usize> =
            group.conjugacy_classes().iter().map(|c| c.len()).collect();
        class_sizes.sort_unstable();
        GroupFingerprint {
            order: group.order(),
            abelian: group.is_abelian(),
            order_histogram: hist.into_iter().collect(),
            center_size: group.center().len(),
            class_sizes,
        }
    }
}

/// Generators picked greedily: each one enlarges the generated subgroup.
pub fn greedy_generators(group: &FiniteGroup) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span = group.trivial();
    // prefer high-order elements; fewer generators, smaller search
    let mut candidates: Vec<usize> = group.elements().collect();
    candidates.sort_by_key(|&a| (std::cmp::Reverse(group.element_order(a)), a));
    for a in candidates {
        if !span.contains(a) {
            gens.push(a);
            span = lattice::generated(group, &gens);
        }
        if span == group.full() {
            break;
        }
    }
    gens
}

/// `map[i]` is the image in the second group of element `i` of the first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Isomorphism(pub Vec<usize>);

impl Isomorphism {
    pub fn is_valid(&self, from: &FiniteGroup, to: &FiniteGroup) -> bool {
        let map = &self.0;
        from.order() == to.order()
            && map.len() == from.order()
            && map.iter().copied().collect::<Subset>() == to.full()
            && from.elements().all(|a| {
                from.elements()
                    .all(|b| map[from.mul(a, b)] == to.mul(map[a], map[b]))
            })
    }
}

/// Extends the assignment `gens[i] -> images[i]` to the generated subgroup.
/// `None` on an inconsistency; unreached elements stay `usize::MAX`.
fn extend(
    from: &FiniteGroup,
    to: &FiniteGroup,
    gens: &[usize],
    images: &[usize],
) -> Option<Vec<usize>> {
    let n = from.order();
    let mut map = vec![usize::MAX; n];
    map[from.identity()] = to.identity();
    let mut queue = vec![from.identity()];
    while let Some(x) = queue.pop() {
        for (&g, &img) in gens.iter().zip(images) {
            let y = from.mul(x, g);
            let fy = to.mul(map[x], img);
            if map[y] == usize::MAX {
                map[y] = fy;
                queue.push(y);
            } else if map[y] != fy {
                return None;
            }
        }
    }
    Some(map)
}

fn search(
    from: &FiniteGroup,
    to: &FiniteGroup,
    gens: &[usize],
    images: &mut Vec<usize>,
) -> Option<Isomorphism> {
    let k = images.len();
    let partial = extend(from, to, &gens[..k], images)?;
    // injectivity on the part generated so far
    let mapped: Vec<usize> = partial
        .iter()
        .copied()
        .filter(|&y| y != usize::MAX)
        .collect();
    if mapped.iter().copied().collect::<Subset>().len() != mapped.len() {
        return None;
    }
    if k == gens.len() {
        let iso = Isomorphism(partial);
        return iso.is_valid(from, to).then_some(iso);
    }
    let want = from.element_order(gens[k]);
    for candidate in to.elements() {
        if to.element_order(candidate) != want {
            continue;
        }
        images.push(candidate);
        if let Some(iso) = search(from, to, gens, images) {
            return Some(iso);
        }
        images.pop();
    }
    None
}

/// Fingerprint prefilter, then backtracking over images of a greedy
/// generating set. The returned map is verified before it is returned.
pub fn are_isomorphic(a: &FiniteGroup, b: &FiniteGroup) -> Option<Isomorphism> {
    if GroupFingerprint::of(a) != GroupFingerprint::of(b) {
        return None;
    }
    isomorphism_unfiltered(a, b)
}

pub(crate) fn isomorphism_unfiltered(a: &FiniteGroup, b: &FiniteGroup) -> Option<Isomorphism> {
    if a.order() != b.order() {
        return None;
    }
    let gens = greedy_generators(a);
    search(a, b, &gens, &mut Vec::new())
}

#[derive(Debug, Clone)]
pub struct UnderliesWitness<'g> {
    pub family: PowerGroupFamily<'g>,
    /// From the target group's elements to family indices.
    pub mapping: Isomorphism,
}

/// Finds a power group of `g1` isomorphic to `g2`.
pub fn underlies<'g>(
    g1: &'g FiniteGroup,
    g2: &FiniteGroup,
    caps: &Caps,
) -> Result<Option<UnderliesWitness<'g>>, SearchError> {
    let census = all_power_groups(g1, caps)?;
    Ok(underlies_in(&census, g2))
}

/// Same as [`underlies`] over a precomputed census of `g1`.
pub fn underlies_in<'g>(
    census: &[PowerGroupFamily<'g>],
    g2: &FiniteGroup,
) -> Option<UnderliesWitness<'g>> {
    let target = GroupFingerprint::of(g2);
    census
        .iter()
        .filter(|f| f.len() == g2.order())
        .filter(|f| GroupFingerprint::of(f.abstract_table()) == target)
        .find_map(|f| {
            isomorphism_unfiltered(g2, f.abstract_table()).map(|mapping| UnderliesWitness {
                family: f.clone(),
                mapping,
            })
        })
}

/// `m[i][j]` is true when `groups[j]` underlies `groups[i]`.
pub fn underlies_matrix(
    groups: &[FiniteGroup],
    caps: &Caps,
) -> Result<Vec<Vec<bool>>, SearchError> {
    let row = |g1: &FiniteGroup| -> Result<Vec<bool>, SearchError> {
        let census = all_power_groups(g1, caps)?;
        Ok(groups
            .iter()
            .map(|g2| underlies_in(&census, g2).is_some())
            .collect())
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        groups.par_iter().map(row).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        groups.iter().map(row).collect()
    }
}

pub fn is_reflexive(m: &[Vec<bool>]) -> bool {
    (0..m.len()).all(|i| m[i][i])
}

/// First `(i, j, k)` with `m[i][j] && m[j][k] && !m[i][k]`, if any.
pub fn transitivity_violation(m: &[Vec<bool>]) -> Option<(usize, usize, usize)> {
    let n = m.len();
    for i in 0..n {
        for j in 0..n {
            if !m[i][j] {
                continue;
            }
            if let Some(k) = (0..n).find(|&k| m[j][k] && !m[i][k]) {
                return Some((i, j, k));
            }
        }
    }
    None
}

pub fn is_transitive(m: &[Vec<bool>]) -> bool {
    transitivity_violation(m).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn g(name: &str) -> FiniteGroup {
        catalog::parse(name, &Caps::default()).unwrap()
    }

    #[test]
    fn cyclic_four_is_not_klein() {
        let (c4, v4) = (g("C4"), g("V4"));
        assert_ne!(GroupFingerprint::of(&c4), GroupFingerprint::of(&v4));
        assert!(are_isomorphic(&c4, &v4).is_none());
        // the search alone also finds nothing
        assert!(isomorphism_unfiltered(&c4, &v4).is_none());
    }

    #[test]
    fn c2xc3_is_c6() {
        let (p, c6) = (g("C2xC3"), g("C6"));
        let iso = are_isomorphic(&p, &c6).unwrap();
        assert!(iso.is_valid(&p, &c6));
    }

    #[test]
    fn self_isomorphism_and_symmetry() {
        let names = [
            "trivial", "C4", "V4", "S3", "D4", "Q8", "C4xC2", "C2^3", "S4", "C4xC4",
        ];
        for a in names {
            let ga = g(a);
            assert!(are_isomorphic(&ga, &ga).unwrap().is_valid(&ga, &ga));
            for b in names {
                let gb = g(b);
                assert_eq!(are_isomorphic(&ga, &gb).is_some(), a == b, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn d4_and_q8_share_nothing_but_order() {
        let (d4, q8) = (g("D4"), g("Q8"));
        assert!(isomorphism_unfiltered(&d4, &q8).is_none());
    }

    #[test]
    fn relabeled_tables_are_isomorphic() {
        let s3 = g("S3");
        // conjugate the table by a permutation fixing 0
        let perm = [0usize, 4, 5, 1, 3, 2];
        let mut inv = [0usize; 6];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let rows: Vec<Vec<usize>> = (0..6)
            .map(|i| (0..6).map(|j| perm[s3.mul(inv[i], inv[j])]).collect())
            .collect();
        let other = FiniteGroup::from_table(&rows).unwrap();
        let iso = are_isomorphic(&s3, &other).unwrap();
        assert!(iso.is_valid(&s3, &other));
    }

    #[test]
    fn underlies_examples() {
        let caps = Caps::default();
        let s3 = g("S3");
        let w = underlies(&s3, &g("C2"), &caps).unwrap().unwrap();
        assert_eq!(w.family.len(), 2);
        assert!(underlies(&s3, &g("C3"), &caps).unwrap().is_some());
        assert!(underlies(&s3, &g("C4"), &caps).unwrap().is_none());
        assert!(underlies(&g("C3"), &g("C2"), &caps).unwrap().is_none());
    }

    #[test]
    fn matrix_helpers() {
        let m = vec![vec![true, true], vec![false, true]];
        assert!(is_reflexive(&m) && is_transitive(&m));
        let bad = vec![
            vec![true, true, false],
            vec![false, true, true],
            vec![false, false, true],
        ];
        assert_eq!(transitivity_violation(&bad), Some((0, 1, 2)));
    }
}
