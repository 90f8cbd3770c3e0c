//! Finite groups stored as validated Cayley tables.
//!
//! Elements are the indices `0..n`. After validation the identity is always
//! index 0: a table whose identity sits elsewhere is relabeled by swapping
//! that index with 0, so masks and census output are reproducible.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::subset::Subset;

/// Largest group order any table may have. Subsets are single `u64` masks.
pub const MAX_ORDER: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("empty table")]
    Empty,
    #[error("row {row} has length {len}, expected {order}")]
    NotSquare {
        row: usize,
        len: usize,
        order: usize,
    },
    #[error("order {order} exceeds cap {cap}")]
    SizeCapExceeded { order: usize, cap: usize },
    #[error("entry table[{row}][{col}] = {value} is out of range")]
    NotClosed {
        row: usize,
        col: usize,
        value: usize,
    },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {element} has no inverse (its row lacks the identity)")]
    NoInverse { element: usize },
    #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("unknown group family `{0}`")]
    UnknownFamily(String),
    #[error("parameter {param} out of range for {family}")]
    ParamOutOfRange { family: String, param: usize },
    #[error("mask {mask:#x} is not a subgroup")]
    NotASubgroup { mask: u64 },
    #[error("cannot parse table document: {0}")]
    Parse(String),
}

/// Size limits for group construction and exhaustive searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Largest order accepted when building groups (tables, products).
    pub construction_order: usize,
    /// Largest order for the 2^n subset scans of the power-group census.
    pub exhaustive_order: usize,
    /// Largest order for the doubly exponential brute-force oracle.
    pub oracle_order: usize,
    /// Largest degree accepted by the symmetric-group constructor.
    pub symmetric_degree: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            construction_order: MAX_ORDER,
            exhaustive_order: 16,
            oracle_order: 4,
            symmetric_degree: 4,
        }
    }
}

impl Caps {
    pub fn with_exhaustive_order(mut self, order: usize) -> Self {
        self.exhaustive_order = order;
        self
    }
}

/// Lookup tables turning a right translation `A -> A*b` into one OR per
/// occupied byte of the mask.
struct Translations {
    chunks: usize,
    // [b][chunk][byte] -> image mask
    lut: Vec<u64>,
}

impl Translations {
    fn build(group: &FiniteGroup) -> Self {
        let n = group.order;
        let chunks = n.div_ceil(8);
        let mut lut = vec![0u64; n * chunks * 256];
        for b in 0..n {
            for chunk in 0..chunks {
                let base = (b * chunks + chunk) * 256;
                for byte in 1..256usize {
                    let low = byte.trailing_zeros() as usize;
                    let a = chunk * 8 + low;
                    let rest = lut[base + (byte & (byte - 1))];
                    lut[base + byte] = if a < n {
                        rest | 1u64 << group.mul(a, b)
                    } else {
                        rest
                    };
                }
            }
        }
        Translations { chunks, lut }
    }

    #[inline]
    fn right(&self, mask: u64, b: usize) -> u64 {
        let mut out = 0;
        let base = b * self.chunks * 256;
        for chunk in 0..self.chunks {
            let byte = ((mask >> (8 * chunk)) & 0xff) as usize;
            if byte != 0 {
                out |= self.lut[base + chunk * 256 + byte];
            }
        }
        out
    }
}

pub struct FiniteGroup {
    order: usize,
    table: Vec<u8>,
    identity: usize,
    inverses: Vec<u8>,
    translations: OnceLock<Translations>,
}

/// On-disk Cayley table document: `{"order": n, "table": [[...], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableDocument {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
}

impl FiniteGroup {
    /// Validates a square Cayley table and derives identity and inverses.
    pub fn from_table(rows: &[Vec<usize>]) -> Result<Self, GroupError> {
        validate_cayley(rows)
    }

    /// Builds from a closure `(i, j) -> i*j`; the result is validated.
    pub fn from_fn(order: usize, mul: impl Fn(usize, usize) -> usize) -> Result<Self, GroupError> {
        let rows: Vec<Vec<usize>> = (0..order)
            .map(|i| (0..order).map(|j| mul(i, j)).collect())
            .collect();
        validate_cayley(&rows)
    }

    pub fn from_document(doc: &TableDocument) -> Result<Self, GroupError> {
        if doc.table.len() != doc.order {
            return Err(GroupError::Parse(format!(
                "order is {} but table has {} rows",
                doc.order,
                doc.table.len()
            )));
        }
        validate_cayley(&doc.table)
    }

    pub fn from_json(text: &str) -> Result<Self, GroupError> {
        let doc: TableDocument =
            serde_json::from_str(text).map_err(|e| GroupError::Parse(e.to_string()))?;
        Self::from_document(&doc)
    }

    pub fn to_document(&self) -> TableDocument {
        TableDocument {
            order: self.order,
            table: self.rows(),
        }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    pub fn inverses(&self) -> Vec<usize> {
        self.inverses.iter().map(|&x| x as usize).collect()
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|i| (0..self.order).map(|j| self.mul(i, j)).collect())
            .collect()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// Mask of the whole group.
    pub fn full(&self) -> Subset {
        Subset::full(self.order)
    }

    pub fn trivial(&self) -> Subset {
        Subset::singleton(self.identity)
    }

    pub fn conjugate(&self, h: usize, x: usize) -> usize {
        self.mul(self.mul(h, x), self.inv(h))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a + 1..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn center(&self) -> Subset {
        Subset::from_iter(
            (0..self.order).filter(|&a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a))),
        )
    }

    /// Conjugacy classes, each as a mask, in order of smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Subset> {
        let mut seen = Subset::EMPTY;
        let mut classes = Vec::new();
        for x in 0..self.order {
            if seen.contains(x) {
                continue;
            }
            let class = Subset::from_iter((0..self.order).map(|h| self.conjugate(h, x)));
            seen = seen | class;
            classes.push(class);
        }
        classes
    }

    /// Right translate `A*b` of a mask.
    #[inline]
    pub fn right_translate(&self, a: Subset, b: usize) -> Subset {
        let t = self.translations.get_or_init(|| Translations::build(self));
        Subset::from_bits(t.right(a.bits(), b))
    }

    /// Left translate `b*A` of a mask.
    pub fn left_translate(&self, b: usize, a: Subset) -> Subset {
        Subset::from_iter(a.iter().map(|x| self.mul(b, x)))
    }

    /// The induced product `AB = {ab | a in A, b in B}`, computed as the
    /// union of the right translates `A*b` over `b in B`.
    #[inline]
    pub fn product(&self, a: Subset, b: Subset) -> Subset {
        let mut out = Subset::EMPTY;
        for x in b.iter() {
            out = out | self.right_translate(a, x);
        }
        out
    }

    /// Elementwise inverses `{a^-1 | a in A}`.
    pub fn inverse_set(&self, a: Subset) -> Subset {
        Subset::from_iter(a.iter().map(|x| self.inv(x)))
    }

    pub fn is_idempotent(&self, e: Subset) -> bool {
        self.product(e, e) == e
    }

    /// Contains the identity and is closed under products and inverses.
    pub fn is_subgroup(&self, s: Subset) -> bool {
        s.contains(self.identity)
            && s.iter().all(|x| s.contains(self.inv(x)))
            && s.iter().all(|x| self.right_translate(s, x).is_subset(s))
    }
}

impl Clone for FiniteGroup {
    fn clone(&self) -> Self {
        FiniteGroup {
            order: self.order,
            table: self.table.clone(),
            identity: self.identity,
            inverses: self.inverses.clone(),
            translations: OnceLock::new(),
        }
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table
    }
}

impl Eq for FiniteGroup {}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order)
            .field("table", &self.rows())
            .finish()
    }
}

/// Checks closure, identity, inverses and associativity (plain n^3 loop),
/// in that order, and returns the group with its identity moved to index 0.
pub fn validate_cayley(rows: &[Vec<usize>]) -> Result<FiniteGroup, GroupError> {
    let n = rows.len();
    if n == 0 {
        return Err(GroupError::Empty);
    }
    if n > MAX_ORDER {
        return Err(GroupError::SizeCapExceeded {
            order: n,
            cap: MAX_ORDER,
        });
    }
    for (row, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(GroupError::NotSquare {
                row,
                len: r.len(),
                order: n,
            });
        }
        if let Some((col, &value)) = r.iter().enumerate().find(|(_, &v)| v >= n) {
            return Err(GroupError::NotClosed { row, col, value });
        }
    }
    let at = |i: usize, j: usize| rows[i][j];
    let e = (0..n)
        .find(|&e| (0..n).all(|i| at(e, i) == i && at(i, e) == i))
        .ok_or(GroupError::NoIdentity)?;
    let mut inverses = vec![0usize; n];
    for (i, slot) in inverses.iter_mut().enumerate() {
        *slot = (0..n)
            .find(|&j| at(i, j) == e && at(j, i) == e)
            .ok_or(GroupError::NoInverse { element: i })?;
    }
    for a in 0..n {
        for b in 0..n {
            let ab = at(a, b);
            for c in 0..n {
                if at(ab, c) != at(a, at(b, c)) {
                    return Err(GroupError::NotAssociative { a, b, c });
                }
            }
        }
    }

    // swap e <-> 0
    let relabel = |x: usize| {
        if x == e {
            0
        } else if x == 0 {
            e
        } else {
            x
        }
    };
    let mut table = vec![0u8; n * n];
    let mut inv = vec![0u8; n];
    for i in 0..n {
        for j in 0..n {
            table[relabel(i) * n + relabel(j)] = relabel(at(i, j)) as u8;
        }
        inv[relabel(i)] = relabel(inverses[i]) as u8;
    }
    Ok(FiniteGroup {
        order: n,
        table,
        identity: 0,
        inverses: inv,
        translations: OnceLock::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_group() {
        let g = validate_cayley(&[vec![0]]).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.identity(), 0);
    }

    #[test]
    fn order_two() {
        let g = validate_cayley(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(g.identity(), 0);
        assert_eq!(g.inverses(), vec![0, 1]);
    }

    #[test]
    fn missing_inverse() {
        let err = validate_cayley(&[vec![0, 1], vec![1, 1]]).unwrap_err();
        assert_eq!(err, GroupError::NoInverse { element: 1 });
    }

    #[test]
    fn rejects_bad_tables() {
        assert_eq!(validate_cayley(&[]).unwrap_err(), GroupError::Empty);
        assert!(matches!(
            validate_cayley(&[vec![0, 2], vec![1, 0]]).unwrap_err(),
            GroupError::NotClosed {
                row: 0,
                col: 1,
                value: 2
            }
        ));
        assert!(matches!(
            validate_cayley(&[vec![0, 1], vec![1]]).unwrap_err(),
            GroupError::NotSquare { .. }
        ));
        assert_eq!(
            validate_cayley(&[vec![1, 0], vec![0, 0]]).unwrap_err(),
            GroupError::NoIdentity
        );
    }

    #[test]
    fn non_associative_loop_reports_witness() {
        // A Latin square with identity 0 and every element self-inverse that
        // is not a group (the order-5 loop has no group structure of exponent 2).
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        match validate_cayley(&t).unwrap_err() {
            GroupError::NotAssociative { a, b, c } => {
                assert_ne!(t[t[a][b]][c], t[a][t[b][c]]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn identity_relabeled_to_zero() {
        // C2 with identity stored at index 1.
        let g = validate_cayley(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(g.identity(), 0);
        assert_eq!(g.rows(), vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn translation_tables_match_naive_product() {
        let g = FiniteGroup::from_fn(12, |i, j| (i + j) % 12).unwrap();
        for a in [0b1u64, 0b1011, 0xfff, 0b1000_0000_0001] {
            let a = Subset::from_bits(a);
            for b in 0..12 {
                let naive = Subset::from_iter(a.iter().map(|x| g.mul(x, b)));
                assert_eq!(g.right_translate(a, b), naive);
            }
        }
    }

    #[test]
    fn json_document_round_trip() {
        let g = FiniteGroup::from_fn(3, |i, j| (i + j) % 3).unwrap();
        let text = serde_json::to_string(&g.to_document()).unwrap();
        assert_eq!(text, r#"{"order":3,"table":[[0,1,2],[1,2,0],[2,0,1]]}"#);
        assert_eq!(FiniteGroup::from_json(&text).unwrap(), g);
        assert!(matches!(
            FiniteGroup::from_json(r#"{"order":2,"table":[[0]]}"#),
            Err(GroupError::Parse(_))
        ));
    }
}
