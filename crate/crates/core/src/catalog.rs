//! Named groups.
//!
//! Index conventions:
//! - `cyclic(n)`: index `i` is `g^i`; `i*j = (i + j) mod n`.
//! - `dihedral(n)` (order `2n`): index `f*n + k` is `r^k s^f`, with `s r s = r^-1`.
//! - `symmetric(k)`: permutations of `0..k` in lexicographic order of their
//!   images; the product is composition `(s*t)(x) = s(t(x))`.
//! - `quaternion8()`: `1, -1, i, -i, j, -j, k, -k`.
//! - `klein4()`: `{0,1,2,3}` under bitwise xor.
//! - `direct_product(g, h)`: the pair `(a, b)` is index `a * |h| + b`.

use crate::group::{Caps, FiniteGroup, GroupError, MAX_ORDER};

fn out_of_range(family: &str, param: usize) -> GroupError {
    GroupError::ParamOutOfRange {
        family: family.to_string(),
        param,
    }
}

pub fn cyclic(n: usize) -> Result<FiniteGroup, GroupError> {
    if n == 0 || n > MAX_ORDER {
        return Err(out_of_range("cyclic", n));
    }
    FiniteGroup::from_fn(n, |i, j| (i + j) % n)
}

pub fn dihedral(n: usize) -> Result<FiniteGroup, GroupError> {
    if n == 0 || 2 * n > MAX_ORDER {
        return Err(out_of_range("dihedral", n));
    }
    FiniteGroup::from_fn(2 * n, |x, y| {
        let (f, a) = (x / n, x % n);
        let (g, b) = (y / n, y % n);
        // r^a s^f r^b s^g = r^(a + (-1)^f b) s^(f+g)
        let k = if f == 0 { (a + b) % n } else { (a + n - b) % n };
        ((f + g) % 2) * n + k
    })
}

/// Permutations of `0..k` in lexicographic order.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn go(k: usize, prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        for x in 0..k {
            if !used[x] {
                used[x] = true;
                prefix.push(x);
                go(k, prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(k, &mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

pub fn symmetric(k: usize) -> Result<FiniteGroup, GroupError> {
    symmetric_capped(k, &Caps::default())
}

pub fn symmetric_capped(k: usize, caps: &Caps) -> Result<FiniteGroup, GroupError> {
    if k == 0 || k > caps.symmetric_degree {
        return Err(out_of_range("symmetric", k));
    }
    let perms = permutations(k);
    let order = perms.len();
    if order > caps.construction_order {
        return Err(GroupError::SizeCapExceeded {
            order,
            cap: caps.construction_order,
        });
    }
    let index = |p: &[usize]| perms.iter().position(|q| q == p).expect("permutation");
    FiniteGroup::from_fn(order, |i, j| {
        let composed: Vec<usize> = (0..k).map(|x| perms[i][perms[j][x]]).collect();
        index(&composed)
    })
}

pub fn quaternion8() -> Result<FiniteGroup, GroupError> {
    // unit index u in {0:1, 1:i, 2:j, 3:k}, sign bit s; element index 2u + s
    const UNIT: [[(usize, usize); 4]; 4] = [
        [(0, 0), (1, 0), (2, 0), (3, 0)],
        [(1, 0), (0, 1), (3, 0), (2, 1)],
        [(2, 0), (3, 1), (0, 1), (1, 0)],
        [(3, 0), (2, 0), (1, 1), (0, 1)],
    ];
    FiniteGroup::from_fn(8, |x, y| {
        let (u, s) = (x / 2, x % 2);
        let (v, t) = (y / 2, y % 2);
        let (w, sign) = UNIT[u][v];
        2 * w + (s + t + sign) % 2
    })
}

pub fn klein4() -> Result<FiniteGroup, GroupError> {
    FiniteGroup::from_fn(4, |i, j| i ^ j)
}

pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<FiniteGroup, GroupError> {
    direct_product_capped(g, h, &Caps::default())
}

pub fn direct_product_capped(
    g: &FiniteGroup,
    h: &FiniteGroup,
    caps: &Caps,
) -> Result<FiniteGroup, GroupError> {
    let (n1, n2) = (g.order(), h.order());
    let order = n1 * n2;
    if order > caps.construction_order.min(MAX_ORDER) {
        return Err(GroupError::SizeCapExceeded {
            order,
            cap: caps.construction_order,
        });
    }
    FiniteGroup::from_fn(order, |x, y| {
        g.mul(x / n2, y / n2) * n2 + h.mul(x % n2, y % n2)
    })
}

/// Builds a group from a family tag and integer parameters.
/// `direct_product` takes a list of cyclic orders.
pub fn catalog(name: &str, params: &[usize], caps: &Caps) -> Result<FiniteGroup, GroupError> {
    let one = |family: &str| -> Result<usize, GroupError> {
        match params {
            [p] => Ok(*p),
            _ => Err(out_of_range(family, params.len())),
        }
    };
    match name {
        "cyclic" => cyclic(one(name)?),
        "dihedral" => dihedral(one(name)?),
        "symmetric" => symmetric_capped(one(name)?, caps),
        "quaternion8" => quaternion8(),
        "klein4" => klein4(),
        "direct_product" => {
            let mut acc = cyclic(1)?;
            for &p in params {
                acc = direct_product_capped(&acc, &cyclic(p)?, caps)?;
            }
            Ok(acc)
        }
        other => Err(GroupError::UnknownFamily(other.to_string())),
    }
}

/// Parses names such as `C6`, `D4`, `S3`, `Q8`, `V4`, `C2^3`, `V4xC2`,
/// `trivial`. Factors joined by `x` form a direct product.
pub fn parse(spec: &str, caps: &Caps) -> Result<FiniteGroup, GroupError> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Err(GroupError::UnknownFamily(String::new()));
    }
    let mut acc: Option<FiniteGroup> = None;
    for factor in spec.split(['x', '×']) {
        let (base, power) = match factor.split_once('^') {
            Some((b, p)) => {
                let p: usize = p
                    .trim()
                    .parse()
                    .map_err(|_| GroupError::UnknownFamily(factor.to_string()))?;
                (b.trim(), p)
            }
            None => (factor.trim(), 1),
        };
        let g = parse_base(base, caps)?;
        for _ in 0..power {
            acc = Some(match acc {
                None => g.clone(),
                Some(a) => direct_product_capped(&a, &g, caps)?,
            });
        }
        if power == 0 && acc.is_none() {
            acc = Some(cyclic(1)?);
        }
    }
    acc.ok_or_else(|| GroupError::UnknownFamily(spec.to_string()))
}

fn parse_base(base: &str, caps: &Caps) -> Result<FiniteGroup, GroupError> {
    let unknown = || GroupError::UnknownFamily(base.to_string());
    match base {
        "1" | "trivial" | "C1" => return cyclic(1),
        "Q8" => return quaternion8(),
        "V4" | "K4" | "klein4" => return klein4(),
        _ => {}
    }
    let mut chars = base.chars();
    let tag = chars.next().ok_or_else(unknown)?;
    let n: usize = chars.as_str().parse().map_err(|_| unknown())?;
    match tag {
        'C' | 'Z' => cyclic(n),
        'D' => dihedral(n),
        'S' => symmetric_capped(n, caps),
        _ => Err(unknown()),
    }
}

/// Every group of order at most 8, one per isomorphism class.
pub const SMALL_GROUPS: &[&str] = &[
    "trivial", "C2", "C3", "C4", "V4", "C5", "C6", "S3", "C7", "C8", "C4xC2", "C2^3", "D4", "Q8",
];

/// The catalog used for the underlies matrix.
pub const UNDERLIES_CATALOG: &[&str] = &[
    "trivial", "C2", "C3", "C4", "V4", "C5", "C6", "S3", "C8", "D4", "Q8",
];

/// Parses a list of names with default caps.
pub fn named(names: &[&str]) -> Result<Vec<(String, FiniteGroup)>, GroupError> {
    names
        .iter()
        .map(|&n| Ok((n.to_string(), parse(n, &Caps::default())?)))
        .collect()
}

/// Indices of `{e, c, c^2}` in `symmetric(3)`.
pub fn s3_rotations() -> [usize; 3] {
    // lexicographic order: 012, 021, 102, 120, 201, 210
    [0, 3, 4]
}

/// Index of the transposition swapping 1 and 2 in `symmetric(3)`.
pub fn s3_transposition() -> usize {
    1
}
