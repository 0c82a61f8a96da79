//! JSON-in, JSON-out entry points for the static demo page in `www/`.
//!
//! Every operation runs in exact arithmetic and returns a JSON string; errors
//! come back as `{"error": "..."}` so the page can show them inline.

use ineff::allocation::{
    allocation_frontier_ranges, allocation_inefficiency_with, find_min_pareto_match, rsd_exact,
};
use ineff::frontier::frontier_summary;
use ineff::inefficiency::ihat;
use ineff::io::{parse_allocation, parse_context, parse_lottery};
use ineff::{Exact, Extended};
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

/// Contexts larger than this are refused to keep the page responsive.
pub const MAX_ALTERNATIVES: usize = 120;

fn respond(result: Result<Value, String>) -> String {
    match result {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn number(v: &Extended<Exact>) -> Value {
    json!({ "text": v.to_string(), "approx": finite_or_null(v.to_f64()) })
}

fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn checked_context(text: &str) -> Result<ineff::Context<Exact>, String> {
    let c = parse_context::<Exact>(text, false).map_err(|e| e.to_string())?;
    if c.n_alternatives() > MAX_ALTERNATIVES {
        return Err(format!(
            "at most {MAX_ALTERNATIVES} alternatives in the demo"
        ));
    }
    Ok(c)
}

/// Efficient alternatives and frontier ranges of a context.
pub fn frontier_json(context: &str) -> String {
    respond((|| {
        let c = checked_context(context)?;
        let s = frontier_summary(&c).map_err(|e| e.to_string())?;
        let individuals: Vec<Value> = (0..c.n_individuals())
            .map(|i| {
                json!({
                    "u_min": s.u_min[i].to_string(),
                    "u_max": s.u_max[i].to_string(),
                    "indifferent": s.frontier_indifferent[i],
                })
            })
            .collect();
        Ok(json!({
            "efficient": s.efficient_pure.iter().map(|&a| c.names()[a].clone()).collect::<Vec<_>>(),
            "individuals": individuals,
            "dimension": s.dimension(),
        }))
    })())
}

/// Inefficiency of a lottery given as `{name: probability}`.
pub fn inefficiency_json(context: &str, lottery: &str) -> String {
    respond((|| {
        let c = checked_context(context)?;
        let x = parse_lottery(lottery, &c, false).map_err(|e| e.to_string())?;
        let r = ihat(&c, &x).map_err(|e| e.to_string())?;
        Ok(json!({
            "inefficiency": number(&r.value),
            "value": number(&r.v_of_x),
            "best_pure": c.names()[r.argmax_pure],
            "infinite_witness": r.infinite_witness,
        }))
    })())
}

/// Exact random serial dictatorship outcome of an allocation file, with its
/// inefficiency and each individual's worst efficient object.
pub fn rsd_json(allocation: &str) -> String {
    respond((|| {
        let p = parse_allocation::<Exact>(allocation, false).map_err(|e| e.to_string())?;
        let outcome = rsd_exact(&p).map_err(|e| e.to_string())?;
        let ranges = allocation_frontier_ranges(&p);
        let names = p.object_names();
        let distribution: Vec<Value> = outcome
            .entries()
            .iter()
            .map(|(m, prob)| json!({ "matching": m.display_with(names), "probability": prob.to_string() }))
            .collect();
        let worst: Vec<String> = (0..p.n())
            .map(|i| names[find_min_pareto_match(&p, i)].clone())
            .collect();
        Ok(json!({
            "distribution": distribution,
            "inefficiency": number(&allocation_inefficiency_with(&p, &ranges, &outcome)),
            "worst_efficient_object": worst,
        }))
    })())
}

#[wasm_bindgen]
pub fn frontier(context: &str) -> String {
    frontier_json(context)
}

#[wasm_bindgen]
pub fn inefficiency(context: &str, lottery: &str) -> String {
    inefficiency_json(context, lottery)
}

#[wasm_bindgen]
pub fn rsd(allocation: &str) -> String {
    rsd_json(allocation)
}

#[cfg(test)]
mod tests {
    use super::*;

    const ARROW: &str = r#"{"alternatives": ["x", "y", "z"],
        "utilities": [[1, 0.9, 0], [1, 0.9, 0], [0.5, 1, 0]]}"#;

    fn parse(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn frontier_of_arrow() {
        let v = parse(frontier_json(ARROW));
        assert_eq!(v["efficient"], json!(["x", "y"]));
        assert_eq!(v["individuals"][2]["u_min"], "1/2");
        assert_eq!(v["dimension"], 3);
    }

    #[test]
    fn inefficiency_of_z() {
        let v = parse(inefficiency_json(ARROW, r#"{"z": 1}"#));
        assert_eq!(v["inefficiency"]["text"], "7");
        assert_eq!(v["best_pure"], "x");
    }

    #[test]
    fn rsd_of_identical_rankings() {
        let v = parse(rsd_json(
            r#"{"objects": ["a", "b"], "utilities": [[1, 0], [1, 0.9]]}"#,
        ));
        assert_eq!(v["inefficiency"]["text"], "0");
        assert_eq!(v["distribution"][0]["probability"], "1/2");
        assert_eq!(v["worst_efficient_object"], json!(["b", "b"]));
    }

    #[test]
    fn errors_are_reported_inline() {
        let v = parse(inefficiency_json(ARROW, r#"{"w": 1}"#));
        assert!(v["error"].as_str().unwrap().contains("unknown alternative"));
        let v = parse(rsd_json("not json"));
        assert!(v["error"].is_string());
        let infinite = parse(inefficiency_json(
            r#"{"alternatives": ["m1", "m2"], "utilities": [[1, 0], [1, 0]]}"#,
            r#"{"m2": 1}"#,
        ));
        assert_eq!(infinite["inefficiency"]["text"], "inf");
        assert_eq!(infinite["inefficiency"]["approx"], Value::Null);
    }
}
