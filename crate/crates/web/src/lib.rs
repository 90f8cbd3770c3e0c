//! Browser bindings. Every export takes strings and returns a JSON string;
//! failures come back as `{"error": "..."}`.

use powergroup::catalog;
use powergroup::census::census as run_census;
use powergroup::qcuts::{self, CutElement, QuadExt};
use powergroup::zset::{zset_sum as sum, ZSet};
use powergroup::Caps;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest group the page will enumerate.
const WEB_MAX_ORDER: usize = 12;

fn error(msg: impl std::fmt::Display) -> Value {
    json!({ "error": msg.to_string() })
}

pub fn census_value(group: &str) -> Value {
    let caps = Caps::default().with_exhaustive_order(WEB_MAX_ORDER);
    let g = match catalog::parse(group, &caps) {
        Ok(g) if g.order() <= WEB_MAX_ORDER => g,
        Ok(g) => {
            return error(format!(
                "order {} is above the page limit {WEB_MAX_ORDER}",
                g.order()
            ))
        }
        Err(e) => return error(e),
    };
    match run_census(group, &g, &caps) {
        Ok(records) => json!({
            "group": group,
            "order": g.order(),
            "table": g.rows(),
            "records": records,
        }),
        Err(e) => error(e),
    }
}

pub fn zset_sum_value(a: &str, b: &str, lo: i32, hi: i32) -> Value {
    let parse = |s: &str| s.parse::<ZSet>();
    let (a, b) = match (parse(a), parse(b)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return error(e),
    };
    let (lo, hi) = (i64::from(lo), i64::from(hi.max(lo)));
    match sum(&a, &b) {
        Ok(s) => json!({
            "a": a, "b": b, "sum": s, "lo": lo, "hi": hi,
            "a_members": a.members_in(lo, hi),
            "b_members": b.members_in(lo, hi),
            "sum_members": s.members_in(lo, hi),
        }),
        Err(e) => error(e),
    }
}

pub fn cut_witness_value(a: &str) -> Value {
    let a = match a.parse::<QuadExt>() {
        Ok(a) if a.is_rational() => a,
        Ok(_) => return error("a must be rational"),
        Err(e) => return error(e),
    };
    let r = QuadExt::sqrt2();
    match qcuts::not_coset_group_witness(&a.p, &r) {
        Ok(w) => {
            let convergents: Vec<String> = qcuts::convergents(&r, 8)
                .iter()
                .map(|c| c.to_string())
                .collect();
            json!({
                "a": a,
                "a_approx": a.to_f64(),
                "r": r,
                "witness": QuadExt::rational(w.clone()),
                "witness_approx": QuadExt::rational(w.clone()).to_f64(),
                "in_translate": w > a.p,
                "in_cut": qcuts::cut_member(&w, &CutElement::new(r.clone())),
                "convergents": convergents,
            })
        }
        Err(e) => error(e),
    }
}

/// Every power group of a named group, with classification flags.
#[wasm_bindgen]
pub fn census(group: &str) -> String {
    census_value(group).to_string()
}

/// Exact sum of two subsets of Z, with members listed on `[lo, hi]`.
#[wasm_bindgen]
pub fn zset_sum(a: &str, b: &str, lo: i32, hi: i32) -> String {
    zset_sum_value(a, b, lo, hi).to_string()
}

/// A rational separating `a + (0, inf)` from `(sqrt2, inf)`.
#[wasm_bindgen]
pub fn cut_witness(a: &str) -> String {
    cut_witness_value(a).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn census_of_s3() {
        let v = census_value("S3");
        assert_eq!(v["records"].as_array().unwrap().len(), 12);
        assert_eq!(v["order"], 6);
        assert!(census_value("S4")["error"].is_string());
        assert!(census_value("nonsense")["error"].is_string());
    }

    #[test]
    fn sums() {
        let v = zset_sum_value("{0,1}", "N", -2, 4);
        assert_eq!(v["sum_members"], json!([0, 1, 2, 3, 4]));
        assert!(zset_sum_value("N", "-N", 0, 1)["error"].is_string());
        assert!(zset_sum_value("??", "N", 0, 1)["error"].is_string());
    }

    #[test]
    fn witnesses() {
        let v = cut_witness_value("3/2");
        assert_eq!(v["witness"], "17/12");
        assert_eq!(v["in_cut"], true);
        assert_eq!(v["in_translate"], false);
        assert!(cut_witness_value("sqrt2")["error"].is_string());
    }
}
