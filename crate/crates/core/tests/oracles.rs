mod common;

use common::{cutoff_bubble, dimreg_bubble, rel_err};
use renorm::rational::{q, qf};
use renorm::toyrules::{bubble_cutoff_value, bubble_dimreg_value, ToyRuleConfig};

#[test]
fn oracles_agree_with_closed_forms() {
    for lambda in [3.0f64, 10.0, 1000.0] {
        let closed = 0.5 * (1.0 + lambda * lambda).ln() + 0.5 / (1.0 + lambda * lambda) - 0.5;
        assert!(rel_err(cutoff_bubble(lambda, 1.0), closed) < 1e-12);
    }
    // (1/2) B(2 + z/2, −z/2) through the reflection formula
    for z in [-0.5f64, -0.1, 0.3] {
        let x = std::f64::consts::FRAC_PI_2 * z;
        let closed = -(1.0 / z + 0.5) * x / x.sin();
        assert!(rel_err(dimreg_bubble(z), closed) < 1e-10, "z = {z}");
    }
}

#[test]
fn cutoff_value_matches_quadrature() {
    let cfg = ToyRuleConfig {
        z_truncation: 12,
        ..Default::default()
    };
    let v = bubble_cutoff_value(&cfg);
    for lambda in [10.0, 100.0, 1000.0] {
        let err = rel_err(v.evaluate(1.0 / lambda, 1.0), cutoff_bubble(lambda, 1.0));
        assert!(err < 1e-9, "Λ = {lambda}: {err:e}");
    }
}

#[test]
fn cutoff_value_with_mass_and_angular_factor() {
    let cfg = ToyRuleConfig {
        m: qf(1, 2),
        angular_factor: q(3),
        z_truncation: 12,
    };
    let v = bubble_cutoff_value(&cfg);
    for lambda in [20.0, 200.0] {
        let err = rel_err(v.evaluate(1.0 / lambda, 0.5), 3.0 * cutoff_bubble(lambda, 0.5));
        assert!(err < 1e-9, "Λ = {lambda}: {err:e}");
    }
}

#[test]
fn dimreg_value_matches_quadrature() {
    let v = bubble_dimreg_value(&ToyRuleConfig::default());
    for z in [0.05, 0.1, 0.2, -0.1] {
        let err = rel_err(v.evaluate(z, 1.0), dimreg_bubble(z));
        assert!(err < 1e-6, "z = {z}: {err:e}");
    }
}

#[test]
fn dimreg_mass_dependence() {
    // m^z scaling: ∫ p^{3+z}/(p²+m²)² dp = m^z ∫ p^{3+z}/(p²+1)² dp
    let m = 1.5f64;
    let cfg = ToyRuleConfig {
        m: qf(3, 2),
        ..Default::default()
    };
    let v = bubble_dimreg_value(&cfg);
    for z in [0.05, 0.1] {
        let err = rel_err(v.evaluate(z, m), m.powf(z) * dimreg_bubble(z));
        assert!(err < 1e-6, "z = {z}: {err:e}");
    }
}
