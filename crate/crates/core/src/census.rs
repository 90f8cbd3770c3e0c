//! Census records: one line of JSON per power group.

use serde::{Deserialize, Serialize};

use crate::classify::{classify, match_subquotient, Classification};
use crate::family::PowerGroupFamily;
use crate::group::{Caps, FiniteGroup};
use crate::iso::GroupFingerprint;
use crate::search::{all_power_groups, SearchError};
use crate::subset::Subset;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub group: String,
    pub identity: Subset,
    /// Members sorted by mask, each as a sorted index array.
    pub elements: Vec<Subset>,
    pub abstract_order: usize,
    #[serde(flatten)]
    pub flags: Classification,
    pub fingerprint: GroupFingerprint,
    /// Why the family is not a subquotient, when it is not.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CensusRecord {
    pub fn of(name: &str, group: &FiniteGroup, f: &PowerGroupFamily<'_>) -> Self {
        CensusRecord {
            group: name.to_string(),
            identity: f.identity(),
            elements: f.canonical_key(),
            abstract_order: f.len(),
            flags: classify(group, f),
            fingerprint: GroupFingerprint::of(f.abstract_table()),
            witness: match_subquotient(f).err().map(|e| format!("{e:?}")),
        }
    }
}

/// Every power group of `group` with its classification, sorted by members.
pub fn census(
    name: &str,
    group: &FiniteGroup,
    caps: &Caps,
) -> Result<Vec<CensusRecord>, SearchError> {
    let families = all_power_groups(group, caps)?;
    #[cfg(feature = "parallel")]
    let mut records: Vec<CensusRecord> = {
        use rayon::prelude::*;
        families
            .par_iter()
            .map(|f| CensusRecord::of(name, group, f))
            .collect()
    };
    #[cfg(not(feature = "parallel"))]
    let mut records: Vec<CensusRecord> = families
        .iter()
        .map(|f| CensusRecord::of(name, group, f))
        .collect();
    records.sort_by(|a, b| a.elements.cmp(&b.elements));
    Ok(records)
}

/// One JSON object per line, newline-terminated.
pub fn to_jsonl(records: &[CensusRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("records serialize"));
        out.push('\n');
    }
    out
}

pub fn from_jsonl(text: &str) -> Result<Vec<CensusRecord>, serde_json::Error> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(serde_json::from_str)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn c2_records() {
        let g = catalog::cyclic(2).unwrap();
        let rs = census("C2", &g, &Caps::default()).unwrap();
        assert_eq!(rs.len(), 3);
        assert!(rs
            .iter()
            .all(|r| r.flags.conditions.all_true() && r.flags.is_coset_group));
        let text = to_jsonl(&rs);
        assert_eq!(text.lines().count(), 3);
        assert!(text.lines().next().unwrap().contains("\"thm1_b\":true"));
        assert_eq!(from_jsonl(&text).unwrap(), rs);
    }

    #[test]
    fn records_are_sorted_and_stable() {
        let g = catalog::parse("S3", &Caps::default()).unwrap();
        let a = to_jsonl(&census("S3", &g, &Caps::default()).unwrap());
        let b = to_jsonl(&census("S3", &g, &Caps::default()).unwrap());
        assert_eq!(a, b);
        let rs = from_jsonl(&a).unwrap();
        assert_eq!(rs.len(), 12);
        assert!(rs.windows(2).all(|w| w[0].elements < w[1].elements));
    }
}
