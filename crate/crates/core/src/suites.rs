//! Named invariant suites with machine-readable reports.
//!
//! Suite names are stable; new suites are appended, old ones never renamed.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::catalog::{self, SMALL_GROUPS, UNDERLIES_CATALOG};
use crate::classify::{
    build_coset_group, conditions, coset_group_epimorphism_check, enumerate_subquotients,
    match_subquotient, CosetError,
};
use crate::group::{Caps, FiniteGroup};
use crate::iso::{are_isomorphic, is_reflexive, transitivity_violation, underlies_matrix};
use crate::lattice;
use crate::qcuts::{self, QuadExt};
use crate::search::{all_power_groups, brute_force_power_groups};
use crate::subset::{all_idempotents, Subset};
use crate::zset::{self, oracle, sample, ZSet};

/// Every suite, in the order `verify all` runs them.
pub const SUITES: &[&str] = &[
    "thm1-equivalence",
    "thm2-finite",
    "oracle-equivalence",
    "zsets-thm3",
    "qcuts-thm4",
    "coset-epimorphism",
    "underlies-matrix",
];

pub fn describe(suite: &str) -> &'static str {
    match suite {
        "thm1-equivalence" => "conditions (a)-(d) agree: all true on the finite census, all false on N0 over Z and the Q cuts",
        "thm2-finite" => "every power group of a finite group is a subquotient; census count equals the lattice count",
        "oracle-equivalence" => "idempotent-first search equals brute force over all families (orders <= 4)",
        "zsets-thm3" => "units at E are exactly the translates of E over Z; symbolic sums match the windowed oracle",
        "qcuts-thm4" => "the cuts (r, inf) over r in Z + Z sqrt2 form a power group of Q that is not a group of cosets",
        "coset-epimorphism" => "a -> aE is an epimorphism onto every coset group, with H/K isomorphic to the family",
        "underlies-matrix" => "underlies is reflexive, transitive, and matches the subquotient census",
        _ => "unknown suite",
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub caps: Caps,
    /// Largest group order in finite censuses.
    pub max_order: usize,
    /// Random trials per randomized property.
    pub trials: usize,
    pub seed: u64,
    /// Oracle window half-width for sums over Z.
    pub window: i64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            caps: Caps::default(),
            max_order: 8,
            trials: 1000,
            seed: 0,
            window: 256,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    /// First failing case, serialized.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
    /// Witness records produced along the way.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Value>,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            passed: true,
            checks: Vec::new(),
            counterexample: None,
            witnesses: Vec::new(),
        }
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) -> bool {
        self.passed &= passed;
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
        passed
    }

    fn fail_with(&mut self, example: Value) {
        self.passed = false;
        if self.counterexample.is_none() {
            self.counterexample = Some(example);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown suite `{0}`")]
pub struct UnknownSuite(pub String);

pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<SuiteReport, UnknownSuite> {
    Ok(match name {
        "thm1-equivalence" => conditions_suite(opts),
        "thm2-finite" => finite_census_suite(opts),
        "oracle-equivalence" => oracle_suite(opts),
        "zsets-thm3" => integers_suite(opts),
        "qcuts-thm4" => cuts_suite(opts),
        "coset-epimorphism" => coset_suite(opts),
        "underlies-matrix" => underlies_suite(opts),
        _ => return Err(UnknownSuite(name.to_string())),
    })
}

/// Catalog groups of order at most `max_order`, skipping any over the caps.
pub fn small_groups(max_order: usize, caps: &Caps) -> Vec<(String, FiniteGroup)> {
    SMALL_GROUPS
        .iter()
        .filter_map(|&n| catalog::parse(n, caps).ok().map(|g| (n.to_string(), g)))
        .filter(|(_, g)| g.order() <= max_order)
        .collect()
}

fn keys(fs: &[crate::family::PowerGroupFamily<'_>]) -> BTreeSet<Vec<Subset>> {
    fs.iter().map(|f| f.canonical_key()).collect()
}

fn oracle_suite(opts: &SuiteOptions) -> SuiteReport {
    let mut r = SuiteReport::new("oracle-equivalence");
    let limit = opts.caps.oracle_order.min(4);
    for (name, g) in small_groups(limit, &opts.caps) {
        let fast = all_power_groups(&g, &opts.caps).expect("within caps");
        let slow = brute_force_power_groups(&g, &opts.caps).expect("within caps");
        let (a, b) = (keys(&fast), keys(&slow));
        if !r.check(
            name.clone(),
            a == b,
            format!("{} families by search, {} by brute force", a.len(), b.len()),
        ) {
            let missing: Vec<_> = b.difference(&a).collect();
            let extra: Vec<_> = a.difference(&b).collect();
            r.fail_with(json!({"group": name, "missing": missing, "extra": extra}));
        }
    }
    r
}

fn finite_census_suite(opts: &SuiteOptions) -> SuiteReport {
    let mut r = SuiteReport::new("thm2-finite");
    for (name, g) in small_groups(opts.max_order, &opts.caps) {
        let fams = match all_power_groups(&g, &opts.caps) {
            Ok(f) => f,
            Err(e) => {
                r.check(name.clone(), false, e.to_string());
                continue;
            }
        };
        if let Some(bad) = fams.iter().find(|f| match_subquotient(f).is_err()) {
            r.fail_with(json!({"group": name, "family": bad.canonical_key(),
                "reason": format!("{:?}", match_subquotient(bad).unwrap_err())}));
        }
        let all_sub = fams.iter().all(|f| match_subquotient(f).is_ok());
        let expected = lattice::subquotient_pair_count(&g);
        let subq = enumerate_subquotients(&g);
        let same_set = keys(&fams) == subq.iter().map(|(_, f)| f.canonical_key()).collect();
        let distinct = subq
            .iter()
            .map(|(_, f)| f.canonical_key())
            .collect::<BTreeSet<_>>()
            .len()
            == subq.len();
        let ok = all_sub && fams.len() == expected && same_set && distinct;
        if r.check(
            name.clone(),
            ok,
            format!(
                "{} power groups, {} (H, N) pairs, all subquotients: {all_sub}",
                fams.len(),
                expected
            ),
        ) {
            continue;
        }
        r.fail_with(json!({"group": name, "census": fams.len(), "pairs": expected}));
    }
    r
}

fn conditions_suite(opts: &SuiteOptions) -> SuiteReport {
    let mut r = SuiteReport::new("thm1-equivalence");
    for (name, g) in small_groups(opts.max_order, &opts.caps) {
        let fams = all_power_groups(&g, &opts.caps).expect("within caps");
        let bad = fams.iter().find(|f| !conditions(f).all_true());
        if let Some(f) = bad {
            r.fail_with(
                json!({"group": name, "family": f.canonical_key(), "conditions": conditions(f)}),
            );
        }
        r.check(
            name,
            bad.is_none(),
            format!("{} families, all four conditions hold", fams.len()),
        );
    }
    let demo = zset::power_group_of_naturals_demo();
    r.check(
        "N0 over Z",
        demo.is_power_group && demo.conditions.all_false(),
        format!("conditions {:?}", demo.conditions),
    );
    r.witnesses.push(json!({"naturals": demo}));
    match qcuts::verify_cut_power_group(&[QuadExt::from_ints(1, 0), QuadExt::sqrt2()]) {
        Ok(rep) => {
            r.check(
                "cuts over Z + Z sqrt2",
                rep.is_power_group() && rep.conditions.all_false(),
                format!("conditions {:?}", rep.conditions),
            );
            r.witnesses.push(json!({"cuts": rep}));
        }
        Err(e) => {
            r.check("cuts over Z + Z sqrt2", false, e.to_string());
        }
    }
    r
}

fn coset_suite(opts: &SuiteOptions) -> SuiteReport {
    let mut r = SuiteReport::new("coset-epimorphism");
    for (name, g) in small_groups(opts.max_order, &opts.caps) {
        let idempotents = all_idempotents(&g, &opts.caps).expect("within caps");
        let subgroups = lattice::all_subgroups(&g);
        let (mut built, mut skipped, mut failed) = (0, 0, 0);
        for &e in &idempotents {
            for h in &subgroups {
                match build_coset_group(&g, e, h.members()) {
                    Ok(d) => {
                        built += 1;
                        if let Err(err) = coset_group_epimorphism_check(&d) {
                            failed += 1;
                            r.fail_with(
                                json!({"group": name, "E": e, "H": h, "error": err.to_string()}),
                            );
                        }
                    }
                    Err(CosetError::CommutationFails { .. }) => skipped += 1,
                    Err(err) => {
                        failed += 1;
                        r.fail_with(
                            json!({"group": name, "E": e, "H": h, "error": err.to_string()}),
                        );
                    }
                }
            }
        }
        r.check(
            name,
            failed == 0,
            format!("{built} coset groups verified, {skipped} pairs fail commutation"),
        );
    }
    let z_cases: Vec<ZSet> = ["N", "-N", "Z", "TS(6; 0,2,4)", "BB(0; 10; 1; 1)"]
        .iter()
        .map(|s| s.parse().expect("literal"))
        .chain([ZSet::monoid(&[3, 5]).expect("positive")])
        .collect();
    for e in z_cases {
        for d in 1..=4u64 {
            let rep = zset::build_z_coset_group(&e, d, (-12, 12)).expect("idempotent");
            let ok = rep.product_law && rep.epimorphism_verified;
            if !ok {
                r.fail_with(json!(rep));
            }
            r.check(
                format!("{e} over {d}Z"),
                ok,
                format!(
                    "kernel {}Z, family order {:?}, partition {}",
                    rep.kernel_generator, rep.family_order, rep.is_partition
                ),
            );
        }
    }
    r
}

fn integers_suite(opts: &SuiteOptions) -> SuiteReport {
    let mut r = SuiteReport::new("zsets-thm3");
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let (mut units, mut non_units, mut disagree) = (0, 0, 0);
    for _ in 0..opts.trials {
        let e = sample::idempotent(&mut rng);
        let a = sample::candidate(&mut rng, &e);
        match zset::decide_unit(&e, &a) {
            Ok(v) if v.agrees() => {
                if v.is_unit {
                    units += 1;
                } else {
                    non_units += 1;
                }
            }
            Ok(v) => {
                disagree += 1;
                r.fail_with(json!({"E": e, "A": a, "verdict": v}));
            }
            Err(err) => {
                disagree += 1;
                r.fail_with(json!({"E": e, "A": a, "error": err.to_string()}));
            }
        }
    }
    r.check(
        "units are translates",
        disagree == 0,
        format!(
            "{} trials: {units} units, {non_units} non-units, {disagree} disagreements",
            opts.trials
        ),
    );

    let w = opts.window;
    let (mut compared, mut mismatched, mut unrepresentable) = (0, 0, 0);
    for _ in 0..opts.trials {
        let a = sample::any(&mut rng);
        let b = sample::any(&mut rng);
        match zset::zset_sum(&a, &b) {
            Ok(s) => {
                compared += 1;
                if s.window(-w / 2, w / 2) != oracle::minkowski_window(&a, &b, w) {
                    mismatched += 1;
                    r.fail_with(json!({"A": a, "B": b, "sum": s}));
                }
            }
            Err(_) => unrepresentable += 1,
        }
    }
    r.check(
        "sums match the windowed oracle",
        mismatched == 0,
        format!("{compared} pairs compared on W = {w}, {mismatched} mismatches, {unrepresentable} opposite infinite tails skipped"),
    );

    let idem_ok = (0..opts.trials.min(200)).all(|_| {
        let e = sample::idempotent(&mut rng);
        zset::zset_is_idempotent(&e) && e.min() == Some(0) && zset::zset_is_idempotent(&e.negate())
    });
    r.check(
        "idempotents have minimum 0",
        idem_ok,
        "sampled additively closed sets",
    );

    let demo = zset::power_group_of_naturals_demo();
    let ok =
        demo.is_power_group && !demo.identity_is_subgroup && demo.subgroup_witness == Some((1, -1));
    r.check(
        "N0 is a power group of Z",
        ok,
        format!("witness {:?}", demo.subgroup_witness),
    );
    r.witnesses.push(json!(demo));
    r
}

fn cuts_suite(opts: &SuiteOptions) -> SuiteReport {
    let mut r = SuiteReport::new("qcuts-thm4");
    let gens = [QuadExt::from_ints(1, 0), QuadExt::sqrt2()];
    let rep = qcuts::verify_cut_power_group(&gens).expect("nonempty generators");
    r.check(
        "group laws",
        rep.is_power_group(),
        format!(
            "{} members, {} sampled sums, rank {}",
            rep.members_checked, rep.sum_samples, rep.rank
        ),
    );
    r.check(
        "E + E = E and 0 not in E",
        rep.identity_is_idempotent && !rep.zero_in_identity,
        "E = (0, inf)",
    );
    r.check(
        "members overlap",
        rep.partition_witness.is_some(),
        format!(
            "{:?}",
            rep.partition_witness
                .as_ref()
                .map(|(x, a, b)| format!("{x} in ({a}, inf) and ({b}, inf)"))
        ),
    );
    r.check(
        "conditions all fail",
        rep.conditions.all_false(),
        format!("{:?}", rep.conditions),
    );
    r.check(
        "not a group of cosets",
        !rep.is_coset_group && rep.coset_witness.is_some(),
        "irrational member",
    );
    r.witnesses.push(json!(rep));

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let sqrt2 = QuadExt::sqrt2();
    let mut bad = 0;
    for _ in 0..opts.trials {
        let a = qcuts::random_rational(&mut rng);
        match qcuts::not_coset_group_witness(&a, &sqrt2) {
            Ok(w) if qcuts::separates(&w, &a, &sqrt2) => {}
            other => {
                bad += 1;
                r.fail_with(json!({"a": a.to_string(), "result": format!("{other:?}")}));
            }
        }
    }
    r.check(
        "separating rationals",
        bad == 0,
        format!(
            "{} random translates a + E differ from (sqrt2, inf)",
            opts.trials
        ),
    );
    r
}

fn underlies_suite(opts: &SuiteOptions) -> SuiteReport {
    let mut r = SuiteReport::new("underlies-matrix");
    let groups: Vec<(String, FiniteGroup)> = UNDERLIES_CATALOG
        .iter()
        .filter_map(|&n| {
            catalog::parse(n, &opts.caps)
                .ok()
                .map(|g| (n.to_string(), g))
        })
        .filter(|(_, g)| g.order() <= opts.caps.exhaustive_order)
        .collect();
    let tables: Vec<FiniteGroup> = groups.iter().map(|(_, g)| g.clone()).collect();
    let m = match underlies_matrix(&tables, &opts.caps) {
        Ok(m) => m,
        Err(e) => {
            r.check("matrix", false, e.to_string());
            return r;
        }
    };
    let names: Vec<&str> = groups.iter().map(|(n, _)| n.as_str()).collect();
    r.check(
        "reflexive",
        is_reflexive(&m),
        format!("{} groups", names.len()),
    );
    let violation = transitivity_violation(&m);
    if let Some((i, j, k)) = violation {
        r.fail_with(json!({"g1": names[i], "g2": names[j], "g3": names[k]}));
    }
    let detail = match violation {
        Some((i, j, k)) => format!(
            "{} underlies {} and {} underlies {}, but not {} in {}",
            names[j], names[i], names[k], names[j], names[k], names[i]
        ),
        None => "no violating triple".to_string(),
    };
    r.check("transitive", violation.is_none(), detail);

    let mut disagreements = 0;
    for (i, (n1, g1)) in groups.iter().enumerate() {
        let subq = enumerate_subquotients(g1);
        for (j, (n2, g2)) in groups.iter().enumerate() {
            let by_census = subq.iter().any(|(_, f)| {
                f.len() == g2.order() && are_isomorphic(f.abstract_table(), g2).is_some()
            });
            if by_census != m[i][j] {
                disagreements += 1;
                r.fail_with(
                    json!({"g1": n1, "g2": n2, "matrix": m[i][j], "subquotients": by_census}),
                );
            }
        }
    }
    r.check(
        "agrees with subquotients",
        disagreements == 0,
        format!("{disagreements} disagreements"),
    );
    r.witnesses.push(json!({"names": names, "matrix": m}));
    r
}

/// Matrix as CSV: header row of names, then one row per `G1`.
pub fn matrix_csv(names: &[String], m: &[Vec<bool>]) -> String {
    let mut out = String::from("g1\\g2");
    for n in names {
        out.push(',');
        out.push_str(n);
    }
    out.push('\n');
    for (n, row) in names.iter().zip(m) {
        out.push_str(n);
        for &b in row {
            out.push_str(if b { ",1" } else { ",0" });
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> SuiteOptions {
        SuiteOptions {
            max_order: 6,
            trials: 50,
            ..SuiteOptions::default()
        }
    }

    #[test]
    fn every_suite_runs_and_passes_quickly() {
        for &s in SUITES {
            let rep = run_suite(s, &quick()).unwrap();
            assert!(rep.passed, "{s}: {:#?}", rep.checks);
            assert!(!rep.checks.is_empty());
            assert_ne!(describe(s), "unknown suite");
        }
        assert!(run_suite("nope", &quick()).is_err());
    }

    #[test]
    fn reports_serialize() {
        let rep = run_suite("oracle-equivalence", &quick()).unwrap();
        let text = serde_json::to_string(&rep).unwrap();
        let back: SuiteReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, rep);
    }

    #[test]
    fn csv_shape() {
        let csv = matrix_csv(
            &["A".into(), "B".into()],
            &[vec![true, false], vec![true, true]],
        );
        assert_eq!(csv, "g1\\g2,A,B\nA,1,0\nB,1,1\n");
    }
}
