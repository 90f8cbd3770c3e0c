//! Exactly represented subsets of the additive integers.
//!
//! Three shapes are closed under the Minkowski sums needed here:
//!
//! - bounded below and eventually periodic: `offset` is the minimum, then a
//!   finite transient bit word, then a periodic word repeated forever;
//! - bounded above: the negation of a bounded-below set;
//! - two-sided periodic: a nonempty union of residue classes mod `d`.
//!
//! Forms are canonical (minimal period, minimal transient, finite sets always
//! bounded below), so structural equality is set equality.
//!
//! Convention: the naturals include 0. `{a^n | n in N}` with `a = 1` becomes
//! `N0 = {0, 1, 2, ...}`, which is idempotent; without 0 it would not be.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::ConditionReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZSetError {
    #[error("set is empty")]
    Empty,
    #[error("period and modulus must be positive")]
    ZeroPeriod,
    #[error("sum of infinite upward and downward tails is not representable")]
    NotRepresentable,
    #[error("set is not idempotent")]
    NotIdempotent,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("cannot parse `{0}`")]
    Parse(String),
}

/// Bounded-below eventually periodic set, canonical.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tail {
    offset: i64,
    transient: Vec<bool>,
    word: Vec<bool>,
}

impl Tail {
    /// Canonicalizes `offset + {i | bit i}` where bits are `transient`
    /// followed by `word` repeated. `None` if the set is empty.
    pub fn new(offset: i64, mut transient: Vec<bool>, mut word: Vec<bool>) -> Option<Tail> {
        assert!(!word.is_empty(), "period must be positive");
        let p = (1..=word.len())
            .find(|&p| {
                word.len().is_multiple_of(p) && (p..word.len()).all(|i| word[i] == word[i % p])
            })
            .expect("full length is a period");
        word.truncate(p);
        while transient.last() == word.last() && !transient.is_empty() {
            transient.pop();
            word.rotate_right(1);
        }
        let mut offset = offset;
        match transient.iter().position(|&b| b) {
            Some(k) => {
                transient.drain(..k);
                offset += k as i64;
            }
            None => {
                offset += transient.len() as i64;
                transient.clear();
                let j = word.iter().position(|&b| b)?;
                offset += j as i64;
                word.rotate_left(j);
            }
        }
        Some(Tail {
            offset,
            transient,
            word,
        })
    }

    pub fn min(&self) -> i64 {
        self.offset
    }

    pub fn transient(&self) -> &[bool] {
        &self.transient
    }

    pub fn word(&self) -> &[bool] {
        &self.word
    }

    pub fn period(&self) -> usize {
        self.word.len()
    }

    /// First element of the periodic part.
    pub fn periodic_start(&self) -> i64 {
        self.offset + self.transient.len() as i64
    }

    pub fn is_finite(&self) -> bool {
        self.word.iter().all(|&b| !b)
    }

    /// Bit `i` relative to the offset.
    #[inline]
    pub fn bit(&self, i: usize) -> bool {
        let t = self.transient.len();
        if i < t {
            self.transient[i]
        } else {
            self.word[(i - t) % self.word.len()]
        }
    }

    pub fn contains(&self, z: i64) -> bool {
        z >= self.offset && self.bit((z - self.offset) as usize)
    }

    /// Relative bits `0..n`.
    pub fn bits(&self, n: usize) -> Vec<bool> {
        (0..n).map(|i| self.bit(i)).collect()
    }

    fn max_if_finite(&self) -> Option<i64> {
        if !self.is_finite() {
            return None;
        }
        let last = self.transient.iter().rposition(|&b| b).unwrap_or(0);
        Some(self.offset + last as i64)
    }

    fn negate_finite(&self) -> Tail {
        let max = self.max_if_finite().expect("finite");
        let n = (max - self.offset + 1) as usize;
        let bits: Vec<bool> = (0..n).rev().map(|i| self.bit(i)).collect();
        Tail::new(-max, bits, vec![false]).expect("nonempty")
    }

    fn translate(&self, a: i64) -> Tail {
        Tail {
            offset: self.offset + a,
            ..self.clone()
        }
    }

    /// Residue classes mod `d` met by the set.
    fn residues(&self, d: usize) -> Vec<bool> {
        let mut out = vec![false; d];
        let n = self.transient.len() + self.period() * d;
        for i in 0..n {
            if self.bit(i) {
                out[(self.offset + i as i64).rem_euclid(d as i64) as usize] = true;
            }
        }
        out
    }

    fn is_subset(&self, other: &Tail) -> bool {
        if self.offset < other.offset {
            return false;
        }
        let end = self.periodic_start().max(other.periodic_start())
            + self.period().lcm(&other.period()) as i64;
        (self.offset..end).all(|z| !self.contains(z) || other.contains(z))
    }

    fn intersects(&self, other: &Tail) -> bool {
        let start = self.offset.max(other.offset);
        let end = self.periodic_start().max(other.periodic_start())
            + self.period().lcm(&other.period()) as i64;
        (start..end).any(|z| self.contains(z) && other.contains(z))
    }
}

/// Exact Minkowski sum of two bounded-below sets.
///
/// If the parts are `S` (transient `t1`, period `p1`) and `T` (`t2`, `p2`),
/// then past `t1 + t2 + lcm(p1, p2)` the sum repeats with period
/// `lcm(p1, p2)`, so a finite convolution determines it.
fn sum_tails(x: &Tail, y: &Tail) -> Tail {
    let p = x.period().lcm(&y.period());
    let transient = x.transient.len() + y.transient.len() + p;
    let n = transient + p;
    let xs = x.bits(n);
    let ys = y.bits(n);
    let mut out = vec![false; n];
    for (i, _) in xs.iter().enumerate().filter(|(_, &b)| b) {
        for (j, _) in ys[..n - i].iter().enumerate().filter(|(_, &b)| b) {
            out[i + j] = true;
        }
    }
    let word = out.split_off(transient);
    let t = Tail::new(x.offset + y.offset, out, word).expect("sum of nonempty sets");
    debug_assert!(sum_matches_window(x, y, &t));
    t
}

#[cfg(debug_assertions)]
fn sum_matches_window(x: &Tail, y: &Tail, sum: &Tail) -> bool {
    // exact on [x.min + y.min, x.min + y.min + k)
    let k = 2 * (x.transient.len() + y.transient.len()) + 2 * x.period().lcm(&y.period());
    let k = k.min(512);
    let mut brute = vec![false; k];
    for i in (0..k).filter(|&i| x.bit(i)) {
        for j in (0..k - i).filter(|&j| y.bit(j)) {
            brute[i + j] = true;
        }
    }
    (0..k).all(|i| brute[i] == sum.bit(i)) && sum.min() == x.min() + y.min()
}

#[cfg(not(debug_assertions))]
fn sum_matches_window(_: &Tail, _: &Tail, _: &Tail) -> bool {
    true
}

/// Union of residue classes, canonical (minimal modulus).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Residues {
    residues: Vec<bool>,
}

impl Residues {
    pub fn new(mut residues: Vec<bool>) -> Option<Residues> {
        assert!(!residues.is_empty(), "modulus must be positive");
        if !residues.iter().any(|&b| b) {
            return None;
        }
        let d = residues.len();
        let m = (1..=d)
            .find(|&m| d.is_multiple_of(m) && (m..d).all(|i| residues[i] == residues[i % m]))
            .expect("d is a period");
        residues.truncate(m);
        Some(Residues { residues })
    }

    pub fn modulus(&self) -> usize {
        self.residues.len()
    }

    pub fn members(&self) -> Vec<usize> {
        (0..self.modulus()).filter(|&r| self.residues[r]).collect()
    }

    pub fn contains(&self, z: i64) -> bool {
        self.residues[z.rem_euclid(self.modulus() as i64) as usize]
    }

    fn sum_with(&self, other: &[bool]) -> Residues {
        let g = self.modulus().gcd(&other.len());
        let mut out = vec![false; g];
        for r in self.members() {
            for (s, _) in other.iter().enumerate().filter(|(_, &b)| b) {
                out[(r + s) % g] = true;
            }
        }
        Residues::new(out).expect("nonempty")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ZSet {
    BoundedBelow(Tail),
    /// Holds the negation of the set, which is bounded below and infinite.
    BoundedAbove(Tail),
    TwoSided(Residues),
}

impl ZSet {
    /// `offset + {i | bit i}`, bits being `transient` then `word` repeated.
    pub fn bounded_below(
        offset: i64,
        transient: Vec<bool>,
        word: Vec<bool>,
    ) -> Result<ZSet, ZSetError> {
        if word.is_empty() {
            return Err(ZSetError::ZeroPeriod);
        }
        Tail::new(offset, transient, word)
            .map(ZSet::BoundedBelow)
            .ok_or(ZSetError::Empty)
    }

    /// `max - {i | bit i}`, the mirror of [`ZSet::bounded_below`].
    pub fn bounded_above(
        max: i64,
        transient: Vec<bool>,
        word: Vec<bool>,
    ) -> Result<ZSet, ZSetError> {
        Ok(ZSet::bounded_below(-max, transient, word)?.negate())
    }

    /// Union of the classes `r + dZ` for `r` in `residues`.
    pub fn two_sided(d: usize, residues: &[i64]) -> Result<ZSet, ZSetError> {
        if d == 0 {
            return Err(ZSetError::ZeroPeriod);
        }
        let mut bits = vec![false; d];
        for &r in residues {
            bits[r.rem_euclid(d as i64) as usize] = true;
        }
        Residues::new(bits)
            .map(ZSet::TwoSided)
            .ok_or(ZSetError::Empty)
    }

    pub fn finite(elements: &[i64]) -> Result<ZSet, ZSetError> {
        let min = *elements.iter().min().ok_or(ZSetError::Empty)?;
        let max = *elements.iter().max().expect("nonempty");
        let mut bits = vec![false; (max - min + 1) as usize];
        for &x in elements {
            bits[(x - min) as usize] = true;
        }
        ZSet::bounded_below(min, bits, vec![false])
    }

    /// `{0, 1, 2, ...}`.
    pub fn naturals() -> ZSet {
        ZSet::bounded_below(0, vec![], vec![true]).expect("nonempty")
    }

    /// `{n in Z | n >= min}`.
    pub fn at_least(min: i64) -> ZSet {
        ZSet::naturals().translate(min)
    }

    /// The additive monoid generated by `gens` (all positive), containing 0.
    pub fn monoid(gens: &[u64]) -> Result<ZSet, ZSetError> {
        let mut acc = ZSet::finite(&[0])?;
        for &g in gens {
            if g == 0 {
                continue;
            }
            let mut word = vec![false; g as usize];
            word[0] = true;
            acc = zset_sum(&acc, &ZSet::bounded_below(0, vec![], word)?)?;
        }
        Ok(acc)
    }

    pub fn contains(&self, z: i64) -> bool {
        match self {
            ZSet::BoundedBelow(t) => t.contains(z),
            ZSet::BoundedAbove(t) => t.contains(-z),
            ZSet::TwoSided(r) => r.contains(z),
        }
    }

    pub fn min(&self) -> Option<i64> {
        match self {
            ZSet::BoundedBelow(t) => Some(t.min()),
            _ => None,
        }
    }

    pub fn max(&self) -> Option<i64> {
        match self {
            ZSet::BoundedBelow(t) => t.max_if_finite(),
            ZSet::BoundedAbove(t) => Some(-t.min()),
            ZSet::TwoSided(_) => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ZSet::BoundedBelow(t) if t.is_finite())
    }

    pub fn is_two_sided(&self) -> bool {
        matches!(self, ZSet::TwoSided(_))
    }

    pub fn negate(&self) -> ZSet {
        match self {
            ZSet::BoundedBelow(t) if t.is_finite() => ZSet::BoundedBelow(t.negate_finite()),
            ZSet::BoundedBelow(t) => ZSet::BoundedAbove(t.clone()),
            ZSet::BoundedAbove(t) => ZSet::BoundedBelow(t.clone()),
            ZSet::TwoSided(r) => {
                let d = r.modulus();
                let bits = (0..d).map(|i| r.residues[(d - i) % d]).collect();
                ZSet::TwoSided(Residues::new(bits).expect("nonempty"))
            }
        }
    }

    /// `a + S`.
    pub fn translate(&self, a: i64) -> ZSet {
        match self {
            ZSet::BoundedBelow(t) => ZSet::BoundedBelow(t.translate(a)),
            ZSet::BoundedAbove(t) => ZSet::BoundedAbove(t.translate(-a)),
            ZSet::TwoSided(r) => {
                let d = r.modulus() as i64;
                let bits = (0..d).map(|i| r.contains(i - a)).collect();
                ZSet::TwoSided(Residues::new(bits).expect("nonempty"))
            }
        }
    }

    /// Membership on `lo..=hi`.
    pub fn window(&self, lo: i64, hi: i64) -> Vec<bool> {
        (lo..=hi).map(|z| self.contains(z)).collect()
    }

    pub fn members_in(&self, lo: i64, hi: i64) -> Vec<i64> {
        (lo..=hi).filter(|&z| self.contains(z)).collect()
    }

    /// Exact set inclusion.
    pub fn is_subset(&self, other: &ZSet) -> bool {
        use ZSet::*;
        match (self, other) {
            (BoundedBelow(a), BoundedBelow(b)) => a.is_subset(b),
            (BoundedAbove(a), BoundedAbove(b)) => a.is_subset(b),
            (BoundedBelow(a), BoundedAbove(b)) => {
                a.is_finite()
                    && (a.min()..=a.max_if_finite().expect("finite"))
                        .all(|z| !a.contains(z) || b.contains(-z))
            }
            (BoundedAbove(_), BoundedBelow(_))
            | (TwoSided(_), BoundedBelow(_) | BoundedAbove(_)) => false,
            (BoundedBelow(a), TwoSided(r)) => {
                let d = r.modulus();
                a.residues(d)
                    .iter()
                    .enumerate()
                    .all(|(i, &b)| !b || r.residues[i])
            }
            (BoundedAbove(a), TwoSided(_)) => {
                ZSet::BoundedBelow(a.clone()).is_subset(&other.negate())
            }
            (TwoSided(r), TwoSided(s)) => {
                let m = r.modulus().lcm(&s.modulus()) as i64;
                (0..m).all(|z| !r.contains(z) || s.contains(z))
            }
        }
    }

    /// Exact test for a common element.
    pub fn intersects(&self, other: &ZSet) -> bool {
        use ZSet::*;
        match (self, other) {
            (BoundedBelow(a), BoundedBelow(b)) | (BoundedAbove(a), BoundedAbove(b)) => {
                a.intersects(b)
            }
            (BoundedBelow(a), BoundedAbove(b)) | (BoundedAbove(b), BoundedBelow(a)) => {
                (a.min()..=-b.min()).any(|z| a.contains(z) && b.contains(-z))
            }
            (BoundedBelow(a), TwoSided(r)) | (TwoSided(r), BoundedBelow(a)) => {
                let d = r.modulus();
                a.residues(d)
                    .iter()
                    .enumerate()
                    .any(|(i, &b)| b && r.residues[i])
            }
            (BoundedAbove(_), TwoSided(_)) | (TwoSided(_), BoundedAbove(_)) => {
                self.negate().intersects(&other.negate())
            }
            (TwoSided(r), TwoSided(s)) => {
                let m = r.modulus().lcm(&s.modulus()) as i64;
                (0..m).any(|z| r.contains(z) && s.contains(z))
            }
        }
    }

    /// Some `x` in the set with `-x` outside it, if there is one.
    pub fn negation_witness(&self) -> Option<i64> {
        match self {
            ZSet::BoundedBelow(t) => {
                let neg = self.negate();
                // past -min every negation falls below the set
                let end = t.periodic_start().max(1 - t.min()) + t.period() as i64;
                (t.min()..end).find(|&z| t.contains(z) && !neg.contains(z))
            }
            ZSet::BoundedAbove(_) => self.negate().negation_witness().map(|z| -z),
            ZSet::TwoSided(r) => {
                let d = r.modulus() as i64;
                (0..d).find(|&z| r.contains(z) && !r.contains(-z))
            }
        }
    }

    /// Contains 0, closed under addition and negation.
    pub fn is_subgroup(&self) -> bool {
        self.contains(0) && self.negation_witness().is_none() && zset_is_idempotent(self)
    }

    pub fn text(&self) -> String {
        self.to_string()
    }
}

fn bitstring(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

impl fmt::Display for ZSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZSet::BoundedBelow(t) => write!(
                f,
                "BB({}; {}; {}; {})",
                t.min(),
                bitstring(&t.transient),
                t.period(),
                bitstring(&t.word)
            ),
            ZSet::BoundedAbove(t) => write!(
                f,
                "BA({}; {}; {}; {})",
                -t.min(),
                bitstring(&t.transient),
                t.period(),
                bitstring(&t.word)
            ),
            ZSet::TwoSided(r) => {
                let rs: Vec<String> = r.members().iter().map(|x| x.to_string()).collect();
                write!(f, "TS({}; {})", r.modulus(), rs.join(","))
            }
        }
    }
}

fn parse_bits(s: &str) -> Result<Vec<bool>, ZSetError> {
    s.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(ZSetError::Parse(s.to_string())),
        })
        .collect()
}

impl FromStr for ZSet {
    type Err = ZSetError;

    /// Accepts `BB(offset; transient; period; word)`, `BA(max; ...)`,
    /// `TS(d; r1,r2,...)`, a finite list `{0,2,5}`, and the shorthands
    /// `N` (naturals with 0), `-N` and `Z`.
    fn from_str(text: &str) -> Result<ZSet, ZSetError> {
        let bad = || ZSetError::Parse(text.to_string());
        let s = text.trim();
        match s {
            "N" | "N0" => return Ok(ZSet::naturals()),
            "-N" | "-N0" => return Ok(ZSet::naturals().negate()),
            "Z" => return ZSet::two_sided(1, &[0]),
            _ => {}
        }
        if let Some(inner) = s.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
            let xs: Result<Vec<i64>, _> = inner
                .split(',')
                .filter(|p| !p.trim().is_empty())
                .map(|p| p.trim().parse::<i64>())
                .collect();
            return ZSet::finite(&xs.map_err(|_| bad())?);
        }
        let open = s.find('(').ok_or_else(bad)?;
        let tag = &s[..open];
        let inner = s[open + 1..].strip_suffix(')').ok_or_else(bad)?;
        let parts: Vec<&str> = inner.split(';').map(str::trim).collect();
        match (tag, parts.as_slice()) {
            ("BB" | "BA", [offset, transient, period, word]) => {
                let offset: i64 = offset.parse().map_err(|_| bad())?;
                let period: usize = period.parse().map_err(|_| bad())?;
                let transient = parse_bits(transient)?;
                let word = parse_bits(word)?;
                if word.len() != period {
                    return Err(bad());
                }
                if tag == "BB" {
                    ZSet::bounded_below(offset, transient, word)
                } else {
                    ZSet::bounded_above(offset, transient, word)
                }
            }
            ("TS", [d, residues]) => {
                let d: usize = d.parse().map_err(|_| bad())?;
                let rs: Result<Vec<i64>, _> = residues
                    .split(',')
                    .filter(|p| !p.trim().is_empty())
                    .map(|p| p.trim().parse::<i64>())
                    .collect();
                ZSet::two_sided(d, &rs.map_err(|_| bad())?)
            }
            _ => Err(bad()),
        }
    }
}

impl Serialize for ZSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ZSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Exact Minkowski sum `A + B`.
///
/// An infinite bounded-below set plus an infinite bounded-above set is
/// rejected with [`ZSetError::NotRepresentable`]; callers wanting a finite
/// picture must use [`oracle::minkowski_window`] explicitly.
pub fn zset_sum(a: &ZSet, b: &ZSet) -> Result<ZSet, ZSetError> {
    use ZSet::*;
    Ok(match (a, b) {
        (BoundedBelow(x), BoundedBelow(y)) => BoundedBelow(sum_tails(x, y)),
        (BoundedAbove(x), BoundedAbove(y)) => BoundedBelow(sum_tails(x, y)).negate(),
        (BoundedBelow(x), BoundedAbove(y)) | (BoundedAbove(y), BoundedBelow(x)) => {
            if !x.is_finite() {
                return Err(ZSetError::NotRepresentable);
            }
            BoundedBelow(sum_tails(&x.negate_finite(), y)).negate()
        }
        (BoundedBelow(x), TwoSided(r)) | (TwoSided(r), BoundedBelow(x)) => {
            TwoSided(r.sum_with(&x.residues(r.modulus())))
        }
        (BoundedAbove(_), TwoSided(_)) | (TwoSided(_), BoundedAbove(_)) => {
            return zset_sum(&a.negate(), &b.negate()).map(|s| s.negate());
        }
        (TwoSided(r), TwoSided(s)) => TwoSided(r.sum_with(&s.residues)),
    })
}

/// `E + E = E`.
pub fn zset_is_idempotent(e: &ZSet) -> bool {
    // a set plus itself is always representable
    zset_sum(e, e).map(|s| &s == e).unwrap_or(false)
}

/// `dZ` for `d >= 1`, `{0}` for `d = 0`.
pub fn z_subgroup(d: u64) -> ZSet {
    if d == 0 {
        ZSet::finite(&[0]).expect("nonempty")
    } else {
        ZSet::two_sided(d as usize, &[0]).expect("nonempty")
    }
}

/// Checks on the coset family `{a + E | a in dZ}` over a window of
/// representatives. The family itself is infinite unless `E` is two-sided.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZCosetReport {
    pub idempotent: ZSet,
    pub d: u64,
    pub window: (i64, i64),
    pub representatives: usize,
    /// `(a+E) + (b+E) = (a+b) + E` for all window representatives.
    pub product_law: bool,
    /// Number of distinct translates among the representatives.
    pub distinct_translates: usize,
    /// Translates of distinct representatives are distinct.
    pub translates_injective: bool,
    /// The translates in the window are pairwise disjoint.
    pub is_partition: bool,
    /// First overlap found, `(a, b, common element)`.
    pub overlap_witness: Option<(i64, i64, i64)>,
    /// Kernel of `a -> a + E` on `dZ` is `kZ`; 0 means trivial.
    pub kernel_generator: u64,
    /// `None` when the family is infinite (isomorphic to `Z`).
    pub family_order: Option<u64>,
    /// `a + E = b + E` exactly when `a - b` is in the kernel, on the window.
    pub epimorphism_verified: bool,
}

pub fn build_z_coset_group(
    e: &ZSet,
    d: u64,
    window: (i64, i64),
) -> Result<ZCosetReport, ZSetError> {
    if !zset_is_idempotent(e) {
        return Err(ZSetError::NotIdempotent);
    }
    if d == 0 {
        return Err(ZSetError::Precondition("d must be positive".into()));
    }
    let (lo, hi) = window;
    let reps: Vec<i64> = (lo..=hi).filter(|a| a.rem_euclid(d as i64) == 0).collect();
    let coset = |a: i64| e.translate(a);
    let cosets: Vec<ZSet> = reps.iter().map(|&a| coset(a)).collect();

    let mut product_law = true;
    for (i, &a) in reps.iter().enumerate() {
        for (j, &b) in reps.iter().enumerate() {
            if zset_sum(&cosets[i], &cosets[j])? != coset(a + b) {
                product_law = false;
            }
        }
    }

    let mut distinct: Vec<&ZSet> = Vec::new();
    for c in &cosets {
        if !distinct.contains(&c) {
            distinct.push(c);
        }
    }

    let mut overlap_witness = None;
    'outer: for i in 0..reps.len() {
        for j in i + 1..reps.len() {
            if cosets[i] != cosets[j] && cosets[i].intersects(&cosets[j]) {
                let lo = reps[i].min(reps[j]) - 64;
                let hi = reps[i].max(reps[j]) + 256;
                let z = (lo..=hi).find(|&z| cosets[i].contains(z) && cosets[j].contains(z));
                overlap_witness = Some((reps[i], reps[j], z.unwrap_or(i64::MIN)));
                break 'outer;
            }
        }
    }

    let kernel_generator = match e {
        ZSet::TwoSided(r) => (d as usize).lcm(&r.modulus()) as u64,
        _ => 0,
    };
    let in_kernel = |x: i64| {
        if kernel_generator == 0 {
            x == 0
        } else {
            x.rem_euclid(kernel_generator as i64) == 0
        }
    };
    let epimorphism_verified = product_law
        && reps.iter().all(|&a| (coset(a) == *e) == in_kernel(a))
        && reps.iter().enumerate().all(|(i, &a)| {
            reps.iter()
                .enumerate()
                .all(|(j, &b)| (cosets[i] == cosets[j]) == in_kernel(a - b))
        });

    Ok(ZCosetReport {
        idempotent: e.clone(),
        d,
        window,
        representatives: reps.len(),
        product_law,
        distinct_translates: distinct.len(),
        translates_injective: distinct.len() == reps.len(),
        is_partition: overlap_witness.is_none(),
        overlap_witness,
        kernel_generator,
        family_order: (kernel_generator != 0).then(|| kernel_generator / d),
        epimorphism_verified,
    })
}

/// Both halves of the unit characterization over `Z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitVerdict {
    /// `A + E = A`.
    pub absorbs: bool,
    /// `A` is invertible in the local monoid at `E`.
    pub is_unit: bool,
    /// `A = min(A) + E`.
    pub is_translate: bool,
    /// The largest `B` with `B + A` inside `E`, when nonempty.
    pub residual: Option<ZSet>,
}

impl UnitVerdict {
    pub fn agrees(&self) -> bool {
        self.is_unit == self.is_translate
    }
}

/// `{x | x + A is a subset of E}` for bounded-below `A` and `E`.
fn residual(e: &Tail, a: &Tail) -> Option<Tail> {
    // For x >= start_e - min_a every x + a sits in the periodic part of E,
    // so membership repeats with E's period from there on.
    let start = e.min() - a.min();
    let transient = (e.periodic_start() - e.min()) as usize;
    let n = transient + e.period();
    let e_set = ZSet::BoundedBelow(e.clone());
    let bits: Vec<bool> = (0..n)
        .map(|i| {
            let x = start + i as i64;
            ZSet::BoundedBelow(a.translate(x)).is_subset(&e_set)
        })
        .collect();
    let mut bits = bits;
    let word = bits.split_off(transient);
    Tail::new(start, bits, word)
}

/// Decides, for an idempotent bounded-below `E` with minimum 0 and a
/// bounded-below `A`, whether `A` is a unit at `E` and whether `A` is the
/// translate of `E` by its minimum. The two are decided independently.
pub fn decide_unit(e: &ZSet, a: &ZSet) -> Result<UnitVerdict, ZSetError> {
    let (ZSet::BoundedBelow(et), ZSet::BoundedBelow(at)) = (e, a) else {
        return Err(ZSetError::Precondition(
            "E and A must be bounded below".into(),
        ));
    };
    if et.min() != 0 || !zset_is_idempotent(e) {
        return Err(ZSetError::Precondition(
            "E must be idempotent with minimum 0".into(),
        ));
    }
    let absorbs = zset_sum(a, e)? == *a;
    let residual = residual(et, at).map(ZSet::BoundedBelow);
    let is_unit = absorbs
        && match &residual {
            Some(b) => zset_sum(a, b)? == *e,
            None => false,
        };
    let is_translate = *a == e.translate(at.min());
    Ok(UnitVerdict {
        absorbs,
        is_unit,
        is_translate,
        residual,
    })
}

/// The one-element power group `{N0}` of `Z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NaturalsReport {
    pub identity: ZSet,
    pub is_power_group: bool,
    pub identity_is_subgroup: bool,
    /// `(x, -x)` with `x` in `E` and `-x` not.
    pub subgroup_witness: Option<(i64, i64)>,
    pub conditions: ConditionReport,
    /// `x` in `E` whose negation is missing from the family inverse of `E`.
    pub inverse_witness: Option<i64>,
}

pub fn power_group_of_naturals_demo() -> NaturalsReport {
    let e = ZSet::naturals();
    // one element: closed, E is its own identity and inverse
    let closed = zset_sum(&e, &e).as_ref() == Ok(&e);
    let identity_is_subgroup = e.is_subgroup();
    let witness = e.negation_witness();
    let family_inverse = &e;
    let inverse_witness =
        (e.min().unwrap_or(0)..=64).find(|&x| e.contains(x) && !family_inverse.contains(-x));
    let union = e.clone();
    let conditions = ConditionReport {
        is_subquotient: identity_is_subgroup && union.is_subgroup(),
        identity_subgroup: identity_is_subgroup,
        inverse_closed: inverse_witness.is_none(),
        // a single block is trivially a partition of its union
        union_partition: union.is_subgroup(),
    };
    NaturalsReport {
        identity: e,
        is_power_group: closed && zset_is_idempotent(&ZSet::naturals()),
        identity_is_subgroup,
        subgroup_witness: witness.map(|x| (x, -x)),
        conditions,
        inverse_witness,
    }
}

/// Brute-force evaluation on finite windows, independent of [`zset_sum`].
pub mod oracle {
    use super::ZSet;

    /// Materializes `a` and `b` on `[-w, w]`, forms all pairwise sums, and
    /// returns membership on `[-w/2, w/2]`.
    ///
    /// Exact on the half window whenever every sum landing there has a
    /// witness pair inside `[-w, w]`, which holds for sets whose offsets,
    /// transients and periods are small against `w`.
    pub fn minkowski_window(a: &ZSet, b: &ZSet, w: i64) -> Vec<bool> {
        let half = w / 2;
        let xs = a.members_in(-w, w);
        let ys = b.members_in(-w, w);
        let mut out = vec![false; (2 * half + 1) as usize];
        for &x in &xs {
            for &y in &ys {
                let z = x + y;
                if (-half..=half).contains(&z) {
                    out[(z + half) as usize] = true;
                }
            }
        }
        out
    }
}

/// Random representable sets for property suites.
pub mod sample {
    use super::*;

    fn bits<R: Rng>(rng: &mut R, n: usize) -> Vec<bool> {
        (0..n).map(|_| rng.gen_bool(0.5)).collect()
    }

    /// Offset in `[-20, 20]`, transient up to 10 bits, period 1..=8.
    pub fn bounded_below<R: Rng>(rng: &mut R) -> ZSet {
        let offset = rng.gen_range(-20..=20);
        let t = rng.gen_range(0..=10);
        let p = rng.gen_range(1..=8);
        let mut transient = bits(rng, t);
        let word = bits(rng, p);
        if let Some(first) = transient.first_mut() {
            *first = true;
        }
        ZSet::bounded_below(offset, transient, word)
            .unwrap_or_else(|_| ZSet::finite(&[offset]).unwrap())
    }

    /// Mixture of the three shapes, bounded-below most often.
    pub fn any<R: Rng>(rng: &mut R) -> ZSet {
        match rng.gen_range(0..10) {
            0..=5 => bounded_below(rng),
            6..=7 => bounded_below(rng).negate(),
            _ => {
                let d = rng.gen_range(1..=8);
                let mut rs: Vec<i64> = (0..d as i64).filter(|_| rng.gen_bool(0.4)).collect();
                if rs.is_empty() {
                    rs.push(rng.gen_range(0..d as i64));
                }
                ZSet::two_sided(d, &rs).expect("nonempty")
            }
        }
    }

    /// Additively closed set containing 0, from 1 to 3 generators in `1..=9`.
    pub fn idempotent<R: Rng>(rng: &mut R) -> ZSet {
        let k = rng.gen_range(1..=3);
        let gens: Vec<u64> = (0..k).map(|_| rng.gen_range(1..=9)).collect();
        ZSet::monoid(&gens).expect("generators are positive")
    }

    /// A candidate element for the unit test at `E`: translates of `E`,
    /// translates with one bit flipped, translates of other idempotents,
    /// and unrelated sets.
    pub fn candidate<R: Rng>(rng: &mut R, e: &ZSet) -> ZSet {
        let a = rng.gen_range(-15..=15);
        match rng.gen_range(0..4) {
            0 => e.translate(a),
            1 => {
                let base = e.translate(a);
                let flip = a + rng.gen_range(0..24);
                let window: Vec<i64> = (a..=a + 40)
                    .filter(|&z| {
                        if z == flip {
                            !base.contains(z)
                        } else {
                            base.contains(z)
                        }
                    })
                    .collect();
                // keep the tail beyond the window
                let ZSet::BoundedBelow(t) = &base else {
                    unreachable!()
                };
                let tail_start = a + 41;
                let n = (tail_start - a) as usize;
                let mut bitsv = vec![false; n];
                for z in window {
                    bitsv[(z - a) as usize] = true;
                }
                let shift =
                    (tail_start - t.periodic_start()).rem_euclid(t.period() as i64) as usize;
                let mut word = t.word().to_vec();
                word.rotate_left(shift);
                ZSet::bounded_below(a, bitsv, word).unwrap_or_else(|_| base.clone())
            }
            2 => idempotent(rng).translate(a),
            _ => bounded_below(rng),
        }
    }
}
