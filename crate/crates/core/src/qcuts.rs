//! Upper cuts of the rationals indexed by numbers in `Q(sqrt 2)`.
//!
//! For real `r`, `C_r = {x in Q | x > r}`. Since `Q` is dense,
//! `C_r + C_s = C_(r+s)`, so any additive subgroup `L` of `Q(sqrt 2)` gives
//! a power group `{C_r | r in L}` of `(Q, +)` with identity `C_0`. None of
//! the finite-case characterizations hold for it.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::ConditionReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CutError {
    #[error("cannot parse `{0}`")]
    Parse(String),
    #[error("no generators given")]
    NoGenerators,
    #[error("{0} is rational; its cut is a translate of the identity")]
    Rational(String),
}

/// `p + q sqrt 2` with rational `p`, `q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadExt {
    pub p: BigRational,
    pub q: BigRational,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl QuadExt {
    pub fn new(p: BigRational, q: BigRational) -> Self {
        QuadExt { p, q }
    }

    pub fn rational(p: BigRational) -> Self {
        QuadExt {
            p,
            q: BigRational::zero(),
        }
    }

    pub fn from_ints(p: i64, q: i64) -> Self {
        QuadExt {
            p: rat(p),
            q: rat(q),
        }
    }

    pub fn zero() -> Self {
        QuadExt::from_ints(0, 0)
    }

    pub fn sqrt2() -> Self {
        QuadExt::from_ints(0, 1)
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    /// Exact sign, -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        let sp = sign(&self.p);
        let sq = sign(&self.q);
        if sq == 0 {
            return sp;
        }
        if sp == 0 || sp == sq {
            return sq;
        }
        // opposite signs: compare p^2 with 2 q^2
        let lhs = &self.p * &self.p;
        let rhs = &self.q * &self.q * rat(2);
        match lhs.cmp(&rhs) {
            Ordering::Greater => sp,
            Ordering::Less => sq,
            Ordering::Equal => unreachable!("sqrt 2 is irrational"),
        }
    }

    /// `1 / x` for nonzero `x`.
    pub fn recip(&self) -> QuadExt {
        let norm = &self.p * &self.p - &self.q * &self.q * rat(2);
        assert!(!norm.is_zero(), "reciprocal of zero");
        QuadExt {
            p: &self.p / &norm,
            q: -&self.q / &norm,
        }
    }

    /// Largest integer not above `x`.
    pub fn floor(&self) -> BigInt {
        // floor(q sqrt 2) from an integer square root, then fix up by one
        let n = self.q.numer();
        let m = self.q.denom();
        let t = (n * n * BigInt::from(2)).sqrt() / m;
        let s = if n.is_negative() {
            -t - BigInt::one()
        } else {
            t
        };
        let mut f = (self.p.clone() + BigRational::from_integer(s))
            .floor()
            .to_integer();
        let as_q = |k: &BigInt| QuadExt::rational(BigRational::from_integer(k.clone()));
        while as_q(&f) > *self {
            f -= 1;
        }
        while as_q(&(&f + 1)) <= *self {
            f += 1;
        }
        f
    }

    pub fn to_f64(&self) -> f64 {
        self.p.to_f64().unwrap_or(f64::NAN)
            + self.q.to_f64().unwrap_or(f64::NAN) * std::f64::consts::SQRT_2
    }

    pub fn mul_int(&self, k: i64) -> QuadExt {
        QuadExt {
            p: &self.p * rat(k),
            q: &self.q * rat(k),
        }
    }
}

fn sign(x: &BigRational) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

impl Ord for QuadExt {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).signum().cmp(&0)
    }
}

impl PartialOrd for QuadExt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for QuadExt {
    type Output = QuadExt;
    fn add(self, o: QuadExt) -> QuadExt {
        QuadExt {
            p: self.p + o.p,
            q: self.q + o.q,
        }
    }
}

impl Sub for QuadExt {
    type Output = QuadExt;
    fn sub(self, o: QuadExt) -> QuadExt {
        QuadExt {
            p: self.p - o.p,
            q: self.q - o.q,
        }
    }
}

impl Mul for QuadExt {
    type Output = QuadExt;
    fn mul(self, o: QuadExt) -> QuadExt {
        QuadExt {
            p: &self.p * &o.p + &self.q * &o.q * rat(2),
            q: &self.p * &o.q + &self.q * &o.p,
        }
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt {
            p: -self.p,
            q: -self.q,
        }
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.p.is_zero(), self.q.is_zero()) {
            (_, true) => write!(f, "{}", self.p),
            (true, false) if self.q.is_one() => write!(f, "sqrt2"),
            (true, false) => write!(f, "{}*sqrt2", self.q),
            (false, false) => {
                let (op, mag) = if self.q.is_negative() {
                    ("-", -self.q.clone())
                } else {
                    ("+", self.q.clone())
                };
                if mag.is_one() {
                    write!(f, "{} {} sqrt2", self.p, op)
                } else {
                    write!(f, "{} {} {}*sqrt2", self.p, op, mag)
                }
            }
        }
    }
}

impl FromStr for QuadExt {
    type Err = CutError;

    /// Accepts sums of rational terms and rational multiples of `sqrt2`:
    /// `3/2`, `sqrt2`, `-sqrt2`, `1 + 2*sqrt2`, `1/2 - 3/4*sqrt2`.
    fn from_str(text: &str) -> Result<QuadExt, CutError> {
        let bad = || CutError::Parse(text.to_string());
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(bad());
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, c) in s.char_indices() {
            if (c == '+' || c == '-') && i > 0 && !s[..i].ends_with(['*', '/']) {
                terms.push(&s[start..i]);
                start = i;
            }
        }
        terms.push(&s[start..]);
        let mut out = QuadExt::zero();
        for term in terms {
            let (neg, body) = match term.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, term.strip_prefix('+').unwrap_or(term)),
            };
            let parse_rat = |r: &str| -> Result<BigRational, CutError> {
                match r.split_once('/') {
                    Some((n, d)) => {
                        let n: BigInt = n.parse().map_err(|_| bad())?;
                        let d: BigInt = d.parse().map_err(|_| bad())?;
                        if d.is_zero() {
                            return Err(bad());
                        }
                        Ok(BigRational::new(n, d))
                    }
                    None => Ok(BigRational::from_integer(r.parse().map_err(|_| bad())?)),
                }
            };
            let (coef, root) = if body == "sqrt2" {
                (BigRational::one(), true)
            } else if let Some(c) = body.strip_suffix("*sqrt2") {
                (parse_rat(c)?, true)
            } else {
                (parse_rat(body)?, false)
            };
            let coef = if neg { -coef } else { coef };
            if root {
                out.q += coef;
            } else {
                out.p += coef;
            }
        }
        Ok(out)
    }
}

impl Serialize for QuadExt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for QuadExt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// `C_r = {x in Q | x > r}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CutElement {
    pub bound: QuadExt,
}

impl CutElement {
    pub fn new(bound: QuadExt) -> Self {
        CutElement { bound }
    }

    pub fn identity() -> Self {
        CutElement::new(QuadExt::zero())
    }

    /// `x + C_r = C_(x+r)` for rational `x`.
    pub fn translate(&self, x: &BigRational) -> Self {
        CutElement::new(self.bound.clone() + QuadExt::rational(x.clone()))
    }
}

impl fmt::Display for CutElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, inf)", self.bound)
    }
}

pub fn cut_member(x: &BigRational, c: &CutElement) -> bool {
    QuadExt::rational(x.clone()) > c.bound
}

pub fn cut_sum(a: &CutElement, b: &CutElement) -> CutElement {
    CutElement::new(a.bound.clone() + b.bound.clone())
}

/// Searches dyadic `x` with `x in a` and `z - x in b`, refining the grid
/// `2^-k` for `k <= depth`. Finds a decomposition whenever
/// `z - (r + s) > 2^(1-depth)`; never reports one that does not exist.
pub fn decomposition_search(
    z: &BigRational,
    a: &CutElement,
    b: &CutElement,
    depth: u32,
) -> Option<BigRational> {
    let lo = &a.bound;
    let hi = QuadExt::rational(z.clone()) - b.bound.clone();
    if hi <= *lo {
        return None;
    }
    for k in 0..=depth {
        let scale = BigInt::one() << k;
        // smallest grid point strictly above lo
        let n =
            (lo.clone() * QuadExt::rational(BigRational::from_integer(scale.clone()))).floor() + 1;
        let x = BigRational::new(n, scale);
        if QuadExt::rational(x.clone()) < hi {
            debug_assert!(cut_member(&x, a) && cut_member(&(z - &x), b));
            return Some(x);
        }
    }
    None
}

/// Rank over `Q` of the `(p, q)` coordinate vectors.
pub fn rational_rank(xs: &[QuadExt]) -> usize {
    let nonzero: Vec<&QuadExt> = xs
        .iter()
        .filter(|x| !(x.p.is_zero() && x.q.is_zero()))
        .collect();
    let Some(first) = nonzero.first() else {
        return 0;
    };
    let independent = nonzero
        .iter()
        .any(|x| &first.p * &x.q - &first.q * &x.p != BigRational::zero());
    if independent {
        2
    } else {
        1
    }
}

/// Results of checking the cut family generated by some numbers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutReport {
    pub generators: Vec<QuadExt>,
    pub rank: usize,
    /// Coefficient box `[-k, k]` per generator used for the checks.
    pub coefficient_bound: i64,
    pub members_checked: usize,
    pub identity: CutElement,
    pub identity_is_idempotent: bool,
    pub identity_law: bool,
    pub inverses: bool,
    pub associativity: bool,
    /// Sampled rationals whose membership in `C_r + C_s` (by decomposition
    /// search) matched membership in `C_(r+s)`.
    pub sum_samples: usize,
    pub sum_samples_agree: bool,
    pub zero_in_identity: bool,
    /// `x` in the identity with `-x` outside it.
    pub inverse_witness: QuadExt,
    /// `(x, r, s)`: `x` lies in both `C_r` and `C_s`, `r != s`.
    pub partition_witness: Option<(QuadExt, QuadExt, QuadExt)>,
    pub conditions: ConditionReport,
    /// Whether every member is a translate `a + C_0` by a rational `a`.
    pub is_coset_group: bool,
    /// `(r, a, w)`: an irrational bound `r`, the rational `a = floor(r)`, and
    /// a rational `w` in exactly one of `a + C_0` and `C_r`.
    pub coset_witness: Option<(QuadExt, QuadExt, QuadExt)>,
}

impl CutReport {
    pub fn is_power_group(&self) -> bool {
        self.identity_is_idempotent
            && self.identity_law
            && self.inverses
            && self.associativity
            && self.sum_samples_agree
    }
}

fn combos(m: usize, k: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-k..=k).map(move |c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out
}

fn half_powers(x: &QuadExt) -> Vec<BigRational> {
    (0..4)
        .map(|j| BigRational::new(BigInt::one(), BigInt::one() << j))
        .chain([x.p.clone()])
        .collect()
}

/// Checks the group laws of `{C_r | r in Z g_1 + ... + Z g_m}` on the
/// members with coefficients in `[-2, 2]`, samples the sum law against the
/// decomposition search, and evaluates each characterization with witnesses.
pub fn verify_cut_power_group(generators: &[QuadExt]) -> Result<CutReport, CutError> {
    if generators.is_empty() {
        return Err(CutError::NoGenerators);
    }
    let k = 2;
    let members: Vec<CutElement> = combos(generators.len(), k)
        .into_iter()
        .map(|cs| {
            let r = cs
                .iter()
                .zip(generators)
                .fold(QuadExt::zero(), |acc, (&c, g)| acc + g.mul_int(c));
            CutElement::new(r)
        })
        .collect();
    let mut members = members;
    members.sort();
    members.dedup();

    let e = CutElement::identity();
    let identity_is_idempotent = cut_sum(&e, &e) == e;
    let identity_law = members
        .iter()
        .all(|a| cut_sum(a, &e) == *a && cut_sum(&e, a) == *a);
    let inverses = members
        .iter()
        .all(|a| cut_sum(a, &CutElement::new(-a.bound.clone())) == e);
    let associativity = members.iter().take(12).all(|a| {
        members.iter().take(12).all(|b| {
            members
                .iter()
                .take(12)
                .all(|c| cut_sum(&cut_sum(a, b), c) == cut_sum(a, &cut_sum(b, c)))
        })
    });

    // sum law against an independent search, at rationals near each bound
    let depth = 24;
    let mut sum_samples = 0;
    let mut sum_samples_agree = true;
    for a in members.iter().take(9) {
        for b in members.iter().take(9) {
            let s = cut_sum(a, b);
            let base = BigRational::from_integer(s.bound.floor());
            for off in half_powers(&s.bound) {
                for z in [
                    &base + &off,
                    &base - &off,
                    &base + BigRational::one() + &off,
                ] {
                    sum_samples += 1;
                    let found = decomposition_search(&z, a, b, depth).is_some();
                    // with these sample points the gap to the bound is far above 2^-depth
                    if found != cut_member(&z, &s) {
                        sum_samples_agree = false;
                    }
                }
            }
        }
    }

    let zero_in_identity = cut_member(&BigRational::zero(), &e);
    let one = BigRational::one();
    debug_assert!(cut_member(&one, &e) && !cut_member(&-one.clone(), &e));
    let inverse_witness = QuadExt::rational(one);

    // a positive member other than the identity, and a rational above both
    let positive = generators.iter().find(|g| g.signum() != 0).map(|g| {
        if g.signum() < 0 {
            -g.clone()
        } else {
            g.clone()
        }
    });
    let partition_witness = positive.clone().map(|s| {
        let x = BigRational::from_integer(s.floor() + 1);
        (QuadExt::rational(x), QuadExt::zero(), s)
    });
    // the union of all members is Q once some member is nonzero, which is a
    // subgroup, but overlapping members stop it from being a partition
    let union_is_subgroup = positive.is_some();
    let conditions = ConditionReport {
        is_subquotient: zero_in_identity,
        identity_subgroup: zero_in_identity,
        inverse_closed: false,
        union_partition: union_is_subgroup && partition_witness.is_none(),
    };

    let irrational = generators.iter().find(|g| !g.is_rational()).cloned();
    let coset_witness = irrational.as_ref().map(|r| {
        let a = BigRational::from_integer(r.floor());
        let w = not_coset_group_witness(&a, r).expect("irrational bound");
        (r.clone(), QuadExt::rational(a), QuadExt::rational(w))
    });

    Ok(CutReport {
        generators: generators.to_vec(),
        rank: rational_rank(generators),
        coefficient_bound: k,
        members_checked: members.len(),
        identity: e,
        identity_is_idempotent,
        identity_law,
        inverses,
        associativity,
        sum_samples,
        sum_samples_agree,
        zero_in_identity,
        inverse_witness,
        partition_witness,
        conditions,
        is_coset_group: irrational.is_none(),
        coset_witness,
    })
}

/// Continued-fraction convergents of `x`, up to `count` of them.
pub fn convergents(x: &QuadExt, count: usize) -> Vec<BigRational> {
    let mut out = Vec::new();
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut y = x.clone();
    for _ in 0..count {
        let a = y.floor();
        let h = &a * &h1 + &h0;
        let kk = &a * &k1 + &k0;
        out.push(BigRational::new(h.clone(), kk.clone()));
        (h0, h1) = (h1, h);
        (k0, k1) = (k1, kk);
        let frac = y - QuadExt::rational(BigRational::from_integer(a));
        if frac.signum() == 0 {
            break;
        }
        y = frac.recip();
    }
    out
}

/// A rational lying in exactly one of `a + C_0` and `C_r`, for rational `a`
/// and irrational `r`: the first convergent of `r` strictly between them.
/// Shows `C_r` is no rational translate of the identity.
pub fn not_coset_group_witness(a: &BigRational, r: &QuadExt) -> Result<BigRational, CutError> {
    if r.is_rational() {
        return Err(CutError::Rational(r.to_string()));
    }
    let qa = QuadExt::rational(a.clone());
    let (lo, hi) = if qa < *r {
        (qa, r.clone())
    } else {
        (r.clone(), qa)
    };
    // convergents alternate around r and converge, so one lands inside
    let mut count = 8;
    loop {
        if let Some(w) = convergents(r, count).into_iter().find(|c| {
            let c = QuadExt::rational(c.clone());
            lo < c && c < hi
        }) {
            return Ok(w);
        }
        count *= 2;
    }
}

/// Whether `w` lies in exactly one of `a + C_0` and `C_r`.
pub fn separates(w: &BigRational, a: &BigRational, r: &QuadExt) -> bool {
    let in_translate = w > a;
    in_translate != cut_member(w, &CutElement::new(r.clone()))
}

/// Random rationals with numerator and denominator in modest ranges.
pub fn random_rational<R: Rng>(rng: &mut R) -> BigRational {
    let n: i64 = rng.gen_range(-5000..=5000);
    let d: i64 = rng.gen_range(1..=997);
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
