//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the report is always printed; exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use powergroup::catalog;
use powergroup::classify::{
    build_coset_group, conditions, coset_group_epimorphism_check, enumerate_subquotients,
    match_subquotient, CosetError,
};
use powergroup::iso::{are_isomorphic, is_reflexive, is_transitive, underlies_matrix};
use powergroup::qcuts::{self, QuadExt};
use powergroup::subset::all_idempotents;
use powergroup::zset::{self, oracle, sample, ZSet};
use powergroup::{
    all_power_groups, brute_force_power_groups, Caps, FiniteGroup, PowerGroupFamily, Subset,
};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn g(name: &str) -> FiniteGroup {
    catalog::parse(name, &Caps::default()).expect("catalog name")
}

fn keys(fs: &[PowerGroupFamily<'_>]) -> BTreeSet<Vec<Subset>> {
    fs.iter().map(|f| f.canonical_key()).collect()
}

/// Subgroups by scanning every mask: in a finite group a nonempty subset
/// closed under the product is a subgroup.
fn subgroups_by_scan(group: &FiniteGroup) -> Vec<Subset> {
    let n = group.order();
    (1u64..1 << n)
        .map(Subset::from_bits)
        .filter(|&s| {
            s.iter()
                .all(|a| s.iter().all(|b| s.contains(group.mul(a, b))))
        })
        .collect()
}

fn normal_in(group: &FiniteGroup, n: Subset, h: Subset) -> bool {
    h.iter().all(|x| {
        n.iter()
            .all(|y| n.contains(group.mul(group.mul(x, y), group.inv(x))))
    })
}

/// Sum over subgroups `H` of the number of normal subgroups of `H`.
fn pair_count_by_scan(group: &FiniteGroup) -> usize {
    let subs = subgroups_by_scan(group);
    subs.iter()
        .map(|&h| {
            subs.iter()
                .filter(|&&n| n.is_subset(h) && normal_in(group, n, h))
                .count()
        })
        .sum()
}

const FINITE_CATALOG: &[(&str, usize)] = &[
    ("trivial", 1),
    ("C2", 3),
    ("C3", 3),
    ("C4", 6),
    ("V4", 12),
    ("C5", 3),
    ("C6", 9),
    ("S3", 12),
    ("C7", 3),
    ("C8", 10),
    ("V4xC2", 66),
    ("C4xC2", 26),
    ("C2^3", 66),
    ("D4", 30),
    ("Q8", 18),
];

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let caps = Caps::default();
    let mut notes = Vec::new();
    let mut ok = true;
    for name in ["trivial", "C2", "C3", "C4", "V4"] {
        let grp = g(name);
        let fast = keys(&all_power_groups(&grp, &caps).unwrap());
        let slow = keys(&brute_force_power_groups(&grp, &caps).unwrap());
        ok &= fast == slow;
        notes.push(format!("{name}={}", slow.len()));
    }
    let c2 = g("C2");
    let s = |xs: &[usize]| xs.iter().copied().collect::<Subset>();
    let expected: BTreeSet<Vec<Subset>> = [vec![s(&[0])], vec![s(&[0]), s(&[1])], vec![s(&[0, 1])]]
        .into_iter()
        .collect();
    ok &= keys(&brute_force_power_groups(&c2, &caps).unwrap()) == expected;
    let t = start.elapsed();
    ok &= t < Duration::from_secs(60);
    outcome(
        ok,
        format!(
            "search == brute force ({}), C2 has exactly 3 families, {t:.2?}",
            notes.join(" ")
        ),
    )
}

fn finite_census() -> Outcome {
    let start = Instant::now();
    let caps = Caps::default();
    let mut ok = true;
    let mut notes = Vec::new();
    for &(name, frozen) in FINITE_CATALOG {
        let grp = g(name);
        let fams = all_power_groups(&grp, &caps).unwrap();
        let scanned = pair_count_by_scan(&grp);
        let all_sub = fams.iter().all(|f| match_subquotient(f).is_ok());
        let good = all_sub && fams.len() == scanned && scanned == frozen;
        if !good {
            notes.push(format!(
                "{name}: census {} scan {scanned} expected {frozen} all_sub {all_sub}",
                fams.len()
            ));
        }
        ok &= good;
    }
    let t = start.elapsed();
    ok &= t < Duration::from_secs(300);
    let detail = if notes.is_empty() {
        format!("{} groups of order <= 8, every family a subquotient, counts match the lattice scan, {t:.2?}", FINITE_CATALOG.len())
    } else {
        notes.join("; ")
    };
    outcome(ok, detail)
}

fn condition_equivalence() -> Outcome {
    let caps = Caps::default();
    let mut records = 0;
    let mut ok = true;
    for &(name, _) in FINITE_CATALOG {
        let grp = g(name);
        for f in all_power_groups(&grp, &caps).unwrap() {
            records += 1;
            ok &= conditions(&f).all_true();
        }
    }
    let nat = zset::power_group_of_naturals_demo();
    let cuts =
        qcuts::verify_cut_power_group(&[QuadExt::from_ints(1, 0), QuadExt::sqrt2()]).unwrap();
    ok &= nat.conditions.all_false() && cuts.conditions.all_false();
    outcome(
        ok,
        format!(
            "all four hold on {records} census records; all fail on N0 over Z and on the Q cuts"
        ),
    )
}

fn naturals() -> Outcome {
    let start = Instant::now();
    let r = zset::power_group_of_naturals_demo();
    let e = ZSet::naturals();
    let direct = e.contains(1) && !e.contains(-1) && zset::zset_sum(&e, &e).unwrap() == e;
    let ok = r.is_power_group
        && !r.identity_is_subgroup
        && r.subgroup_witness == Some((1, -1))
        && direct;
    outcome(
        ok,
        format!(
            "{{N0}} is a power group of Z, 1 in E, -1 not in E, {:.2?}",
            start.elapsed()
        ),
    )
}

fn coset_epimorphisms() -> Outcome {
    let caps = Caps::default();
    let (mut verified, mut failures) = (0, 0);
    for &(name, _) in FINITE_CATALOG {
        let grp = g(name);
        let subs = subgroups_by_scan(&grp);
        for e in all_idempotents(&grp, &caps).unwrap() {
            for &h in &subs {
                match build_coset_group(&grp, e, h) {
                    Ok(d) => match coset_group_epimorphism_check(&d) {
                        Ok(rep) => {
                            // kernel recomputed directly: a in H with aE = E
                            let k: Subset = h
                                .iter()
                                .filter(|&a| grp.left_translate(a, e) == e)
                                .collect();
                            if rep.kernel.members() == k && h.len() / k.len() == d.family.len() {
                                verified += 1;
                            } else {
                                failures += 1;
                            }
                        }
                        Err(_) => failures += 1,
                    },
                    Err(CosetError::CommutationFails { .. }) => {}
                    Err(_) => failures += 1,
                }
            }
        }
    }
    let mut z_checked = 0;
    for text in [
        "N",
        "-N",
        "Z",
        "TS(6; 0,2,4)",
        "BB(0; 10; 1; 1)",
        "TS(4; 0)",
    ] {
        let e: ZSet = text.parse().unwrap();
        for d in 1..=5 {
            let rep = zset::build_z_coset_group(&e, d, (-15, 15)).unwrap();
            z_checked += 1;
            if !(rep.product_law && rep.epimorphism_verified) {
                failures += 1;
            }
        }
    }
    outcome(
        failures == 0,
        format!("{verified} finite coset groups and {z_checked} windows over Z verified, {failures} failures"),
    )
}

fn integer_sets() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut units, mut disagreements) = (0, 0);
    for _ in 0..1000 {
        let e = sample::idempotent(&mut rng);
        let a = sample::candidate(&mut rng, &e);
        let v = zset::decide_unit(&e, &a).unwrap();
        units += usize::from(v.is_unit);
        disagreements += usize::from(!v.agrees());
    }
    let (mut pairs, mut mismatches) = (0, 0);
    while pairs < 1000 {
        let a = sample::any(&mut rng);
        let b = sample::any(&mut rng);
        if let Ok(s) = zset::zset_sum(&a, &b) {
            pairs += 1;
            if s.window(-128, 128) != oracle::minkowski_window(&a, &b, 256) {
                mismatches += 1;
            }
        }
    }
    let t = start.elapsed();
    let ok = disagreements == 0
        && mismatches == 0
        && units > 0
        && units < 1000
        && t < Duration::from_secs(60);
    outcome(
        ok,
        format!("1000 unit trials ({units} units, {disagreements} disagreements), {pairs} sums vs W=256 oracle ({mismatches} mismatches), {t:.2?}"),
    )
}

/// `w > sqrt 2` by integer arithmetic only.
fn above_sqrt2(w: &BigRational) -> bool {
    w.is_positive() && w.numer() * w.numer() > BigInt::from(2) * w.denom() * w.denom()
}

fn rational_cuts() -> Outcome {
    let rep = qcuts::verify_cut_power_group(&[QuadExt::from_ints(1, 0), QuadExt::sqrt2()]).unwrap();
    let mut ok = rep.is_power_group() && rep.identity_is_idempotent && !rep.zero_in_identity;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let sqrt2 = QuadExt::sqrt2();
    let mut verified = 0;
    for _ in 0..100 {
        let a = qcuts::random_rational(&mut rng);
        let w = qcuts::not_coset_group_witness(&a, &sqrt2).unwrap();
        if (w > a) != above_sqrt2(&w) {
            verified += 1;
        }
    }
    ok &= verified == 100;
    outcome(
        ok,
        format!(
            "group laws on {} members, E+E=E, 0 not in E, {verified}/100 separating rationals",
            rep.members_checked
        ),
    )
}

fn underlies() -> Outcome {
    let start = Instant::now();
    let names = catalog::UNDERLIES_CATALOG;
    let groups: Vec<FiniteGroup> = names.iter().map(|n| g(n)).collect();
    let m = underlies_matrix(&groups, &Caps::default()).unwrap();
    let mut agree = true;
    for (i, g1) in groups.iter().enumerate() {
        let subq = enumerate_subquotients(g1);
        for (j, g2) in groups.iter().enumerate() {
            let by_census = subq
                .iter()
                .any(|(_, f)| are_isomorphic(f.abstract_table(), g2).is_some());
            agree &= by_census == m[i][j];
        }
    }
    let t = start.elapsed();
    let ok = is_reflexive(&m) && is_transitive(&m) && agree && t < Duration::from_secs(600);
    outcome(
        ok,
        format!(
            "{} groups: reflexive, transitive, agrees with subquotient census, {t:.2?}",
            names.len()
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("oracle equivalence, orders <= 4", oracle_equivalence),
        ("finite census equals subquotients", finite_census),
        ("four conditions agree", condition_equivalence),
        ("naturals are a power group of Z", naturals),
        ("coset groups are epimorphic images", coset_epimorphisms),
        (
            "units over Z are translates; sums match oracle",
            integer_sets,
        ),
        ("cuts of Q with sqrt2", rational_cuts),
        ("underlies matrix", underlies),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        all &= o.passed;
        println!(
            "[{}] {}. {name}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
