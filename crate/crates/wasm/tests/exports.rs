use mees_wasm::{curves_json, mees_json, scatter_json};
use serde_json::Value;

const SYSTEM: &str = "0,2,4;0,1,6,9";

#[test]
fn mees_export() {
    let v: Value = serde_json::from_str(&mees_json(SYSTEM, 0.5).unwrap()).unwrap();
    assert!((v["entanglement"].as_f64().unwrap() - 0.5 * 3f64.ln()).abs() < 1e-10);
    assert_eq!(v["weights"].as_array().unwrap().len(), 3);
    assert!(mees_json(SYSTEM, 0.0).is_err());
    assert!(mees_json("0,1", 0.5).is_err());
}

#[test]
fn curves_export() {
    let v: Value = serde_json::from_str(&curves_json(SYSTEM, 50, 1e-3).unwrap()).unwrap();
    assert_eq!(v["approaches"].as_array().unwrap().len(), 5);
    assert_eq!(v["e_norm"].as_array().unwrap().len(), 50);
    assert_eq!(v["eta"][2].as_array().unwrap().len(), 50);
    assert!(curves_json(SYSTEM, 0, 1e-3).is_err());
    assert!(curves_json(SYSTEM, 10, 2.0).is_err());
}

#[test]
fn scatter_export() {
    let v: Value = serde_json::from_str(&scatter_json(SYSTEM, "mssg-a", 2000, 20, 1).unwrap()).unwrap();
    let total: u64 = v["efficiency"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|c| c.as_array().unwrap().iter().map(|n| n.as_u64().unwrap()))
        .sum();
    assert_eq!(total + v["skipped"].as_u64().unwrap(), 2000);
    assert_eq!(v["measure"], "haar-schmidt");
    assert_eq!(v["mees"]["x"].as_array().unwrap().len(), 100);
    assert!(scatter_json(SYSTEM, "nope", 10, 10, 1).is_err());
    assert!(scatter_json(SYSTEM, "simple", 0, 10, 1).is_err());
    let again = scatter_json(SYSTEM, "mssg-a", 2000, 20, 1).unwrap();
    assert_eq!(again, scatter_json(SYSTEM, "mssg-a", 2000, 20, 1).unwrap());
}
