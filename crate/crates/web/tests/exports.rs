use serde_json::Value;
use sympn_web::{group_json, molien_json, singular_grid_json};

#[test]
fn grid_for_the_swap() {
    let v: Value = serde_json::from_str(&singular_grid_json("(1 2)|++", 3).unwrap()).unwrap();
    assert_eq!(v["size"], 8);
    let cells = v["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 64);
    // The swap fixes exactly the diagonal, and σ = F there.
    for a in 0..8 {
        for b in 0..8 {
            let c = cells[a * 8 + b].as_str().unwrap();
            assert_eq!(c.contains('F'), a == b, "({a}, {b}): {c}");
            if !c.is_empty() {
                assert!(c.contains('F'), "({a}, {b}): {c}");
            }
        }
    }
    assert!(singular_grid_json("(1 2 3)|+++", 3).is_err());
    assert!(singular_grid_json("(1 2)|++", 9).is_err());
}

#[test]
fn molien_equals_target() {
    let v: Value = serde_json::from_str(&molien_json(2, 8).unwrap()).unwrap();
    assert_eq!(v["equal"], true);
    assert_eq!(v["molien"][4], "2");
    assert!(molien_json(0, 4).is_err());
}

#[test]
fn group_structure() {
    let v: Value = serde_json::from_str(&group_json("gamma:1").unwrap()).unwrap();
    assert_eq!(v["order"], 32);
    assert_eq!(v["diagonal_order"], 16);
    assert!(group_json("gamma").is_err());
}
