//! Independent numerical oracles shared by the integration targets.
#![allow(dead_code)]

use quadrature::double_exponential::integrate;

fn piecewise(f: impl Fn(f64) -> f64 + Copy, cuts: &[f64]) -> f64 {
    cuts.windows(2)
        .map(|w| integrate(f, w[0], w[1], 1e-14).integral)
        .sum()
}

/// `∫_0^Λ p³/(p²+m²)² dp` by quadrature, split on a geometric grid.
pub fn cutoff_bubble(lambda: f64, m: f64) -> f64 {
    let f = move |p: f64| p.powi(3) / (p * p + m * m).powi(2);
    let mut cuts = vec![0.0, 1.0];
    while *cuts.last().unwrap() * 4.0 < lambda {
        let next = cuts.last().unwrap() * 4.0;
        cuts.push(next);
    }
    cuts.push(lambda);
    piecewise(f, &cuts)
}

/// Analytic continuation of `∫_0^∞ p^{3+z}/(p²+1)² dp` to `−4 < z < 2`:
/// the tail `p > 1` is mapped to `q = 1/p` and its `q^{−1−z}` singularity
/// is subtracted and integrated exactly.
pub fn dimreg_bubble(z: f64) -> f64 {
    let head = move |p: f64| p.powf(3.0 + z) / (p * p + 1.0).powi(2);
    let tail = move |q: f64| {
        if q == 0.0 {
            0.0
        } else {
            q.powf(-1.0 - z) * ((1.0 + q * q).powi(-2) - 1.0)
        }
    };
    piecewise(head, &[0.0, 0.5, 1.0]) + piecewise(tail, &[0.0, 0.5, 1.0]) - 1.0 / z
}

pub fn rel_err(approx: f64, exact: f64) -> f64 {
    ((approx - exact) / exact).abs()
}
