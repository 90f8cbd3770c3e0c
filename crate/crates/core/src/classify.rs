//! Classification of power groups.
//!
//! A power group is a *subquotient* when it is exactly the coset family
//! `H/N` of a normal subgroup `N` of a subgroup `H`. Four conditions are
//! decided independently here, and for any power group they coincide:
//!
//! - (a) the family is a subquotient;
//! - (b) its identity `E` is a subgroup;
//! - (c) for every member `A` and `x` in `A`, `x^-1` lies in the family
//!   inverse of `A`;
//! - (d) the union of the members is a subgroup that they partition.
//!
//! A *group of cosets* is `{aE | a in H}` for an idempotent `E` and a
//! subgroup `H`, subject to a commutation hypothesis that makes
//! `(aE)(bE) = (ab)E` hold. The definition this module follows states the
//! hypothesis as "for every `a` in `H`, `aH = Ha`", which is vacuous for a
//! subgroup `H`; the product law actually needs `aE = Ea` for `a` in `H`, so
//! that is what [`build_coset_group`] checks (failure: `CommutationFails`).
//! `E` need not be contained in `H`, and `E = G` is accepted.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::family::{FamilyError, PowerGroupFamily};
use crate::group::FiniteGroup;
use crate::lattice::{self, Subgroup};
use crate::subset::Subset;

/// The four conditions, each decided on its own.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub is_subquotient: bool,
    /// The identity is a subgroup.
    #[serde(rename = "thm1_b")]
    pub identity_subgroup: bool,
    /// Elementwise inverses land in family inverses.
    #[serde(rename = "thm1_c")]
    pub inverse_closed: bool,
    /// The union is a subgroup partitioned by the members.
    #[serde(rename = "thm1_d")]
    pub union_partition: bool,
}

impl ConditionReport {
    pub fn all_true(&self) -> bool {
        self.is_subquotient && self.identity_subgroup && self.inverse_closed && self.union_partition
    }

    pub fn all_false(&self) -> bool {
        !(self.is_subquotient
            || self.identity_subgroup
            || self.inverse_closed
            || self.union_partition)
    }

    pub fn consistent(&self) -> bool {
        self.all_true() || self.all_false()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubquotientDescriptor {
    pub h: Subgroup,
    pub n: Subgroup,
}

/// Why a family is not a subquotient; the first failed condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NotSubquotient {
    IdentityNotSubgroup(Subset),
    UnionNotSubgroup(Subset),
    NotNormal {
        n: Subset,
        h: Subset,
        conjugator: usize,
    },
    CosetsDiffer {
        expected: Vec<Subset>,
        found: Vec<Subset>,
    },
}

pub fn check_identity_subgroup(f: &PowerGroupFamily<'_>) -> bool {
    f.parent().is_subgroup(f.identity())
}

pub fn check_inverse_closure(f: &PowerGroupFamily<'_>) -> bool {
    let g = f.parent();
    (0..f.len()).all(|i| g.inverse_set(f.elements()[i]).is_subset(f.inverse_of(i)))
}

pub fn check_partition_union_subgroup(f: &PowerGroupFamily<'_>) -> bool {
    partition_union_subgroup(f.parent(), f.elements())
}

/// Condition (d) on a raw list of subsets.
pub fn partition_union_subgroup(group: &FiniteGroup, members: &[Subset]) -> bool {
    let mut union = Subset::EMPTY;
    for &a in members {
        if !a.is_disjoint(union) {
            return false;
        }
        union = union | a;
    }
    group.is_subgroup(union)
}

/// Left cosets `{hN | h in H}`, as sorted masks.
pub fn cosets(group: &FiniteGroup, h: Subset, n: Subset) -> Vec<Subset> {
    let mut out: Vec<Subset> = h.iter().map(|x| group.left_translate(x, n)).collect();
    out.sort();
    out.dedup();
    out
}

pub fn match_subquotient(
    f: &PowerGroupFamily<'_>,
) -> Result<SubquotientDescriptor, NotSubquotient> {
    let g = f.parent();
    let n = f.identity();
    let h = f.union();
    if !g.is_subgroup(n) {
        return Err(NotSubquotient::IdentityNotSubgroup(n));
    }
    if !g.is_subgroup(h) {
        return Err(NotSubquotient::UnionNotSubgroup(h));
    }
    let nn = Subgroup::new(g, n).expect("checked");
    if let Some(conjugator) = h
        .iter()
        .find(|&x| !nn.is_normal_in(g, Subset::singleton(x)))
    {
        return Err(NotSubquotient::NotNormal { n, h, conjugator });
    }
    let expected = cosets(g, h, n);
    let found = f.canonical_key();
    if expected != found {
        return Err(NotSubquotient::CosetsDiffer { expected, found });
    }
    Ok(SubquotientDescriptor {
        h: Subgroup::new(g, h).expect("checked"),
        n: nn,
    })
}

pub fn conditions(f: &PowerGroupFamily<'_>) -> ConditionReport {
    ConditionReport {
        is_subquotient: match_subquotient(f).is_ok(),
        identity_subgroup: check_identity_subgroup(f),
        inverse_closed: check_inverse_closure(f),
        union_partition: check_partition_union_subgroup(f),
    }
}

/// Every `H/N`, ordered by `H` then `N` in lattice order.
pub fn enumerate_subquotients(
    group: &FiniteGroup,
) -> Vec<(SubquotientDescriptor, PowerGroupFamily<'_>)> {
    let lattice = lattice::all_subgroups(group);
    let mut out = Vec::new();
    for &h in &lattice {
        for n in lattice::normal_subgroups_in(group, h, &lattice) {
            let family = PowerGroupFamily::certify(group, cosets(group, h.members(), n.members()))
                .expect("cosets of a normal subgroup form a group");
            out.push((SubquotientDescriptor { h, n }, family));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CosetError {
    #[error("subset {0} is not idempotent")]
    NotIdempotent(Subset),
    #[error("mask {0} is not a subgroup")]
    NotASubgroup(Subset),
    #[error("aE != Ea for a = {a}")]
    CommutationFails { a: usize },
    #[error("(aE)(bE) != (ab)E for a = {a}, b = {b}")]
    ProductLawFails { a: usize, b: usize },
    #[error(transparent)]
    Family(#[from] FamilyError),
}

#[derive(Debug, Clone)]
pub struct CosetGroupDescriptor<'g> {
    pub idempotent: Subset,
    pub h: Subgroup,
    pub family: PowerGroupFamily<'g>,
}

fn commutes(group: &FiniteGroup, e: Subset, a: usize) -> bool {
    group.left_translate(a, e) == group.right_translate(e, a)
}

/// `{aE | a in H}` for idempotent `E` commuting elementwise with `H`.
pub fn build_coset_group<'g>(
    group: &'g FiniteGroup,
    e: Subset,
    h: Subset,
) -> Result<CosetGroupDescriptor<'g>, CosetError> {
    if e.is_empty() || !e.is_subset(group.full()) || !group.is_idempotent(e) {
        return Err(CosetError::NotIdempotent(e));
    }
    let h = Subgroup::new(group, h).map_err(|_| CosetError::NotASubgroup(h))?;
    if let Some(a) = h.members().iter().find(|&a| !commutes(group, e, a)) {
        return Err(CosetError::CommutationFails { a });
    }
    let coset = |a: usize| group.left_translate(a, e);
    for a in h.members().iter() {
        for b in h.members().iter() {
            if group.product(coset(a), coset(b)) != coset(group.mul(a, b)) {
                return Err(CosetError::ProductLawFails { a, b });
            }
        }
    }
    let family = PowerGroupFamily::certify(group, h.members().iter().map(coset))?;
    Ok(CosetGroupDescriptor {
        idempotent: e,
        h,
        family,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EpimorphismError {
    #[error("phi(ab) != phi(a)phi(b) at a = {a}, b = {b}")]
    HomomorphismFails { a: usize, b: usize },
    #[error("family member {0} is not of the form aE")]
    NotSurjective(Subset),
    #[error("kernel {0} is not a normal subgroup of H")]
    KernelNotNormal(Subset),
    #[error("induced map H/K -> family is not an isomorphism")]
    InducedMapFails,
}

/// Result of checking `phi(a) = aE` on a coset group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsomorphismReport {
    pub kernel: Subgroup,
    /// `quotient[i]` is the i-th coset of the kernel in `H` (sorted by mask).
    pub quotient: Vec<Subset>,
    /// `mapping[i]` is the family index that coset `quotient[i]` maps to.
    pub mapping: Vec<usize>,
}

/// Verifies `phi: H -> family, a -> aE` is an epimorphism, computes its
/// kernel `K`, and checks the induced map `H/K -> family` is an isomorphism.
pub fn coset_group_epimorphism_check(
    d: &CosetGroupDescriptor<'_>,
) -> Result<IsomorphismReport, EpimorphismError> {
    let fam = &d.family;
    let group = fam.parent();
    let h = d.h.members();
    let phi = |a: usize| {
        fam.index_of(group.left_translate(a, d.idempotent))
            .expect("aE is a member by construction")
    };
    for a in h.iter() {
        for b in h.iter() {
            if phi(group.mul(a, b)) != fam.abstract_table().mul(phi(a), phi(b)) {
                return Err(EpimorphismError::HomomorphismFails { a, b });
            }
        }
    }
    let image: Subset = h.iter().map(phi).collect();
    if let Some(missing) = (0..fam.len()).find(|&i| !image.contains(i)) {
        return Err(EpimorphismError::NotSurjective(fam.elements()[missing]));
    }

    let k: Subset = h.iter().filter(|&a| phi(a) == 0).collect();
    let kernel = Subgroup::new(group, k).map_err(|_| EpimorphismError::KernelNotNormal(k))?;
    if !kernel.is_normal_in(group, h) {
        return Err(EpimorphismError::KernelNotNormal(k));
    }

    let quotient_family = PowerGroupFamily::certify(group, cosets(group, h, k))
        .map_err(|_| EpimorphismError::KernelNotNormal(k))?;
    let quotient = quotient_family.elements().to_vec();
    let mut mapping = Vec::with_capacity(quotient.len());
    for coset in &quotient {
        let targets: Subset = coset.iter().map(phi).collect();
        if targets.len() != 1 {
            return Err(EpimorphismError::InducedMapFails);
        }
        mapping.push(targets.first().expect("nonempty"));
    }
    let distinct: Subset = mapping.iter().copied().collect();
    if distinct.len() != fam.len() || quotient.len() != fam.len() {
        return Err(EpimorphismError::InducedMapFails);
    }
    let qt = quotient_family.abstract_table();
    for i in 0..quotient.len() {
        for j in 0..quotient.len() {
            if mapping[qt.mul(i, j)] != fam.abstract_table().mul(mapping[i], mapping[j]) {
                return Err(EpimorphismError::InducedMapFails);
            }
        }
    }
    Ok(IsomorphismReport {
        kernel,
        quotient,
        mapping,
    })
}

/// No subgroup `H` realises the family as `{aE | a in H}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotCosetGroup;

/// Searches subgroups in lattice order for one with `{aE | a in H} = F`.
pub fn is_group_of_cosets<'g>(
    group: &'g FiniteGroup,
    f: &PowerGroupFamily<'g>,
) -> Result<CosetGroupDescriptor<'g>, NotCosetGroup> {
    let e = f.identity();
    let key = f.canonical_key();
    for h in lattice::all_subgroups(group) {
        if !h.members().iter().all(|a| commutes(group, e, a)) {
            continue;
        }
        let mut translates: Vec<Subset> = h
            .members()
            .iter()
            .map(|a| group.left_translate(a, e))
            .collect();
        translates.sort();
        translates.dedup();
        if translates == key {
            return Ok(CosetGroupDescriptor {
                idempotent: e,
                h,
                family: f.clone(),
            });
        }
    }
    Err(NotCosetGroup)
}

/// Classification flags attached to census records.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    #[serde(flatten)]
    pub conditions: ConditionReport,
    pub is_coset_group: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subquotient: Option<SubquotientDescriptor>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coset_h: Option<Subgroup>,
}

pub fn classify<'g>(group: &'g FiniteGroup, f: &PowerGroupFamily<'g>) -> Classification {
    let coset = is_group_of_cosets(group, f).ok();
    Classification {
        conditions: conditions(f),
        is_coset_group: coset.is_some(),
        subquotient: match_subquotient(f).ok(),
        coset_h: coset.map(|d| d.h),
    }
}
