use ghz_decay_web::api::{critical_summary, critical_vs_d, negativity_curve};

#[test]
fn curve_endpoints() {
    let v = negativity_curve(3, 4, "phase-damping", 1, "", 3).unwrap();
    assert_eq!(v.len(), 3);
    assert!((v[0] - 1.0).abs() < 1e-14);
    assert!((v[1] - 0.0625).abs() < 1e-15);
    assert_eq!(v[2], 0.0);
}

#[test]
fn curve_with_magnitudes() {
    let v = negativity_curve(2, 2, "depolarizing", 1, "0.6,0.8", 2).unwrap();
    assert!((v[0] - 0.48).abs() < 1e-14);
    assert!(negativity_curve(2, 2, "depolarizing", 1, "0.6,x", 2).is_err());
    assert!(negativity_curve(2, 2, "depolarizing", 1, "0.6", 2).is_err());
    assert!(negativity_curve(2, 2, "amplitude-damping", 1, "", 2).is_err());
    assert!(negativity_curve(2, 2, "depolarizing", 1, "", 1).is_err());
}

#[test]
fn critical_curve_increases_in_d() {
    let v = critical_vs_d(4, 2, 20, "p-balanced", 0.01).unwrap();
    assert_eq!(v.len(), 19);
    assert!(v.windows(2).all(|w| w[1] > w[0]));
    assert!(critical_vs_d(4, 5, 2, "p-balanced", 0.01).is_err());
    assert!(critical_vs_d(4, 2, 5, "p-epsilon", 2.0).is_err());
    assert!(critical_vs_d(4, 2, 5, "negativity-curve", 0.01).is_err());
}

#[test]
fn summary_orders_thresholds() {
    let s: serde_json::Value =
        serde_json::from_str(&critical_summary(3, 4, "", 0.01).unwrap()).unwrap();
    let exact = s["p_balanced_exact"].as_f64().unwrap();
    let closed = s["p_balanced_closed_form"].as_f64().unwrap();
    let eps = s["p_epsilon"].as_f64().unwrap();
    assert!(eps < exact && exact < closed);
    assert!(!s["warnings"].as_str().unwrap().is_empty());
    let odd: serde_json::Value =
        serde_json::from_str(&critical_summary(2, 3, "", 0.01).unwrap()).unwrap();
    assert!(odd["p_balanced_closed_form"].is_null());
}
