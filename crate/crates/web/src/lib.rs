//! Browser bindings: a rank-2 singular-set grid, Molien series against the
//! polynomial target, and group-spec inspection. Every export returns a
//! JSON string.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use sympn_core::invariants::{molien, target_series};
use sympn_core::normalizer::singular_sets;
use sympn_core::stubborn::{build, structural_parts, GroupSpec};
use sympn_core::torus::{DyadicAngle, TorusPoint};
use sympn_core::weyl::{SignedPerm, WeylSubgroup};

/// Largest depth the grid view accepts; `4^depth` cells.
pub const MAX_GRID_DEPTH: u32 = 6;
pub const MAX_SERIES_RANK: usize = 5;
pub const MAX_SERIES_DEGREE: usize = 40;

#[derive(Serialize)]
struct Grid {
    reflection: String,
    depth: u32,
    size: usize,
    /// Cell `a·size + b` is the point `(a, b)/size`; each cell lists the
    /// sets containing it among "F", "H", "K".
    cells: Vec<String>,
}

pub fn singular_grid_json(reflection: &str, depth: u32) -> Result<String, String> {
    if depth > MAX_GRID_DEPTH {
        return Err(format!("depth at most {MAX_GRID_DEPTH}"));
    }
    let s: SignedPerm = reflection.trim().parse().map_err(|e| format!("{e}"))?;
    if s.rank() != 2 {
        return Err("the grid shows rank 2 only".into());
    }
    let sets = singular_sets(&s, depth).map_err(|e| e.to_string())?;
    let size = 1i64 << depth;
    let angle = |a: i64| DyadicAngle::new(a, depth).expect("depth is small");
    let points: Vec<TorusPoint> = (0..size)
        .flat_map(|a| (0..size).map(move |b| TorusPoint::new(vec![angle(a), angle(b)])))
        .collect();
    let cells = points
        .iter()
        .map(|t| {
            let mut c = String::new();
            if sets.in_fixed(t) {
                c.push('F');
            }
            if sets.in_hyperplane(t) {
                c.push('H');
            }
            if sets.in_coset(t) {
                c.push('K');
            }
            c
        })
        .collect();
    let grid = Grid {
        reflection: s.to_string(),
        depth,
        size: 1 << depth,
        cells,
    };
    serde_json::to_string(&grid).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Series {
    n: usize,
    grading: &'static str,
    molien: Vec<String>,
    target: Vec<String>,
    equal: bool,
}

pub fn molien_json(n: usize, degree: usize) -> Result<String, String> {
    if n == 0 || n > MAX_SERIES_RANK {
        return Err(format!("rank between 1 and {MAX_SERIES_RANK}"));
    }
    if degree > MAX_SERIES_DEGREE {
        return Err(format!("degree at most {MAX_SERIES_DEGREE}"));
    }
    let m = molien(&WeylSubgroup::full(n), degree);
    let t = target_series(n, degree);
    let text = |s: &sympn_core::invariants::PowerSeries| {
        s.coefficients().iter().map(ToString::to_string).collect()
    };
    let out = Series {
        n,
        grading: "series (torus coordinates in degree 1)",
        molien: text(&m),
        target: text(&t),
        equal: m == t,
    };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct GroupInfo {
    spec: String,
    rank: usize,
    order: usize,
    exponent: u64,
    center_order: usize,
    derived_order: usize,
    diagonal_order: usize,
    torus_order: usize,
}

pub fn group_json(spec: &str) -> Result<String, String> {
    let spec: GroupSpec = spec.parse().map_err(|e| format!("{e}"))?;
    let p = build(&spec).map_err(|e| e.to_string())?;
    let parts = structural_parts(&p);
    let inv = p.invariants();
    let info = GroupInfo {
        spec: spec.to_string(),
        rank: p.rank(),
        order: inv.order,
        exponent: inv.exponent,
        center_order: inv.center_order,
        derived_order: inv.derived_order,
        diagonal_order: parts.diagonal.order(),
        torus_order: parts.torus.order(),
    };
    serde_json::to_string(&info).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn singular_grid(reflection: &str, depth: u32) -> Result<String, JsValue> {
    singular_grid_json(reflection, depth).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn molien_series(n: usize, degree: usize) -> Result<String, JsValue> {
    molien_json(n, degree).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn group_info(spec: &str) -> Result<String, JsValue> {
    group_json(spec).map_err(|e| JsValue::from_str(&e))
}
