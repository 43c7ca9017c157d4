//! Logarithmic-derivative connection coefficients and the gauge relation
//! between the two renormalization group actions.
//!
//! `d` is realized as three independent directional derivatives: `∂_z`,
//! `∂_y`, and the flow direction `t∂_t = ∂_s`.

use crate::characters::{
    convolution_inverse, convolve, Character, CharacterError, Coefficient, LinMap, MapKind,
};
use crate::hopf::{HopfAlgebra, Monomial};
use crate::rational::{to_f64, Q};
use crate::regalg::RegElement;
use crate::rgflow::{act, act_dr, act_mc, at_zero, FlowMap, FlowValue, RgError, Sigma};
use num_traits::{Signed, Zero};
use serde::Serialize;

/// Coefficients of `dz`, `dy` and `dt/t` of `ψ⁻¹ dψ` for `ψ = σ_t φ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionForm {
    pub a: FlowMap,
    pub b: FlowMap,
    pub c: FlowMap,
}

pub fn connection_of(h: &HopfAlgebra, phi: &Character, sigma: Sigma) -> Result<ConnectionForm, RgError> {
    let psi = act(phi, sigma);
    let inv = convolution_inverse(h, &psi)?;
    let component = |d: fn(&FlowValue) -> FlowValue| -> Result<FlowMap, RgError> {
        let dpsi = psi.map_values(MapKind::General, |_, v| d(v));
        let mut out = convolve(h, &inv, &dpsi)?;
        out.kind = MapKind::Infinitesimal;
        Ok(out)
    };
    Ok(ConnectionForm {
        a: component(FlowValue::differentiate_z)?,
        b: component(FlowValue::differentiate_y)?,
        c: component(FlowValue::differentiate_s)?,
    })
}

/// Direction of a logarithmic derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Z,
    Y,
    /// The flow generator of an action at `t = 1`.
    T(Sigma),
}

impl Direction {
    pub fn name(self) -> String {
        match self {
            Direction::Z => "z".into(),
            Direction::Y => "y".into(),
            Direction::T(s) => format!("t[{}]", s.as_str()),
        }
    }

    pub fn all() -> [Direction; 4] {
        [
            Direction::Z,
            Direction::Y,
            Direction::T(Sigma::Dr),
            Direction::T(Sigma::Mc),
        ]
    }
}

/// The derivation `d` in a direction, applied value-wise. Each is a
/// derivation of convolution.
pub fn derive(f: &LinMap<RegElement>, dir: Direction) -> LinMap<RegElement> {
    f.map_values(MapKind::General, |m, v| match dir {
        Direction::Z => v.differentiate_z(),
        Direction::Y => v.differentiate_y(),
        Direction::T(Sigma::Dr) => RegElement::z()
            .mul(v)
            .scale(&Q::from_integer(m.grade().into())),
        Direction::T(Sigma::Mc) => RegElement::z().mul(&v.differentiate_z()).add(&v.differentiate_y()),
    })
}

/// `D(f) = f⁻¹ ⋆ df`.
pub fn log_derivative(
    h: &HopfAlgebra,
    f: &Character,
    dir: Direction,
) -> Result<LinMap<RegElement>, CharacterError> {
    let inv = convolution_inverse(h, f)?;
    let mut out = convolve(h, &inv, &derive(f, dir))?;
    out.kind = MapKind::Infinitesimal;
    Ok(out)
}

/// `k⁻¹ ⋆ x ⋆ k`.
fn conjugate(
    h: &HopfAlgebra,
    k: &Character,
    x: &LinMap<RegElement>,
) -> Result<LinMap<RegElement>, CharacterError> {
    let inv = convolution_inverse(h, k)?;
    convolve(h, &convolve(h, &inv, x)?, k)
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct GaugeEntry {
    pub identity: String,
    pub monomial: String,
    pub lhs: String,
    pub rhs: String,
    pub equal: bool,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct GaugeReport {
    pub entries: Vec<GaugeEntry>,
}

impl GaugeReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.equal)
    }

    pub fn failures(&self) -> impl Iterator<Item = &GaugeEntry> {
        self.entries.iter().filter(|e| !e.equal)
    }
}

/// Checks, monomial by monomial and exactly,
///
/// * pullback: `D(f⁻¹⋆g) = D(g) − k⁻¹⋆D(f)⋆k` with `k = f⁻¹⋆g`;
/// * product: `D(f⋆g) = D(g) + g⁻¹⋆D(f)⋆g`.
pub fn gauge_check(
    h: &HopfAlgebra,
    f: &Character,
    g: &Character,
    dir: Direction,
) -> Result<GaugeReport, CharacterError> {
    let basis = h.basis();
    let df = log_derivative(h, f, dir)?;
    let dg = log_derivative(h, g, dir)?;

    let k = convolve(h, &convolution_inverse(h, f)?, g)?;
    let pull_lhs = log_derivative(h, &k, dir)?;
    let pull_rhs = dg.sub(&conjugate(h, &k, &df)?)?;

    let fg = convolve(h, f, g)?;
    let prod_lhs = log_derivative(h, &fg, dir)?;
    let prod_rhs = dg.add(&conjugate(h, g, &df)?)?;

    let mut entries = Vec::new();
    for (name, lhs, rhs) in [
        ("pullback", &pull_lhs, &pull_rhs),
        ("product", &prod_lhs, &prod_rhs),
    ] {
        for m in &basis {
            let (l, r) = (lhs.get(m), rhs.get(m));
            entries.push(GaugeEntry {
                identity: format!("{name}[{}]", dir.name()),
                monomial: h.render_monomial(m),
                equal: l.agrees_with(&r),
                lhs: l.to_string(),
                rhs: r.to_string(),
            });
        }
    }
    Ok(GaugeReport { entries })
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct EquivarianceReport {
    pub sigma: String,
    pub u: String,
    /// `c(s) = σ_s(c(0))` holds as exponential polynomials, which makes
    /// `c(s + log u) = σ_u(c(s))` hold for every `u`.
    pub structural: bool,
    pub numeric_max_rel_err: f64,
    pub tolerance: f64,
    pub failures: Vec<String>,
}

impl EquivarianceReport {
    pub fn passed(&self) -> bool {
        self.structural && self.numeric_max_rel_err <= self.tolerance
    }
}

pub const EQUIVARIANCE_TOLERANCE: f64 = 1e-9;
const SAMPLE_Z0: f64 = 0.1;
const SAMPLE_M: f64 = 1.0;
const SAMPLE_S: [f64; 3] = [0.0, 0.25, -0.5];

/// `c_φ(·, tu) = σ_u(c_φ(·, t))`, structurally and by numeric evaluation at
/// `z0 = 1/10`, `m = 1`. Negative `u` enter through `|u|`.
pub fn equivariance_check(
    h: &HopfAlgebra,
    phi: &Character,
    sigma: Sigma,
    u: &Q,
) -> Result<EquivarianceReport, RgError> {
    if u.is_zero() {
        return Err(RgError::ZeroScale);
    }
    let c = connection_of(h, phi, sigma)?.c;
    let c0 = at_zero(&c);
    let expected = match sigma {
        Sigma::Dr => act_dr(&c0),
        Sigma::Mc => act_mc(&c0),
    };
    let basis = h.basis();
    let mut failures = Vec::new();
    for m in &basis {
        if !c.get(m).agrees_with(&expected.get(m)) {
            failures.push(format!("structural mismatch at {}", h.render_monomial(m)));
        }
    }
    let structural = failures.is_empty();
    let v = to_f64(&u.abs()).ln();
    let mut worst: f64 = 0.0;
    for m in &basis {
        let value = c.get(m);
        for &s in &SAMPLE_S {
            let lhs = value.evaluate(SAMPLE_Z0, SAMPLE_M, s + v);
            let rhs = acted_numeric(&value, m, sigma, s, v);
            let err = (lhs - rhs).abs() / (1.0 + lhs.abs().max(rhs.abs()));
            if err > EQUIVARIANCE_TOLERANCE {
                failures.push(format!(
                    "numeric mismatch at {} (s={s}): {lhs} vs {rhs}",
                    h.render_monomial(m)
                ));
            }
            worst = worst.max(err);
        }
    }
    Ok(EquivarianceReport {
        sigma: sigma.as_str().into(),
        u: crate::rational::format_q(u),
        structural,
        numeric_max_rel_err: worst,
        tolerance: EQUIVARIANCE_TOLERANCE,
        failures,
    })
}

/// `σ_u` applied to the value at `s`, evaluated numerically.
fn acted_numeric(value: &FlowValue, m: &Monomial, sigma: Sigma, s: f64, v: f64) -> f64 {
    match sigma {
        Sigma::Dr => (m.grade() as f64 * SAMPLE_Z0 * v).exp() * value.evaluate(SAMPLE_Z0, SAMPLE_M, s),
        Sigma::Mc => value.evaluate(SAMPLE_Z0 * v.exp(), SAMPLE_M, s),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::tests::{character, random_character, reg};
    use crate::characters::is_infinitesimal;
    use crate::rational::q;
    use crate::rgflow::{beta, constant_flow};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn m(h: &HopfAlgebra, s: &str) -> Monomial {
        h.parse_monomial(s).unwrap()
    }

    #[test]
    fn connection_examples() {
        let h = HopfAlgebra::with_corpus(2);
        let phi = character(&h, &[("B1", reg(&[(-1, 0, q(3))]))]);
        let form = connection_of(&h, &phi, Sigma::Dr).unwrap();
        assert_eq!(
            at_zero(&form.c).get(&m(&h, "B1")),
            RegElement::constant(q(3))
        );
        assert_eq!(at_zero(&form.a).get(&m(&h, "B1")), reg(&[(-2, 0, q(-3))]));
        let e: Character = LinMap::unit(2);
        let unit_form = connection_of(&h, &e, Sigma::Mc).unwrap();
        assert!(unit_form.a.values.is_empty() && unit_form.b.values.is_empty());
        assert!(unit_form.c.values.is_empty());
    }

    #[test]
    fn c_at_one_is_beta() {
        let h = HopfAlgebra::with_corpus(3);
        let basis = h.basis();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..3 {
            let phi = random_character(&h, &mut rng);
            for sigma in [Sigma::Dr, Sigma::Mc] {
                let form = connection_of(&h, &phi, sigma).unwrap();
                let c0 = at_zero(&form.c);
                assert!(c0.agrees_with(&beta(&h, &phi, sigma).unwrap(), &basis));
                for comp in [&form.a, &form.b, &form.c] {
                    assert!(is_infinitesimal(&h, &at_zero(comp)));
                }
            }
        }
    }

    #[test]
    fn log_derivative_examples() {
        let h = HopfAlgebra::with_corpus(2);
        let e: Character = LinMap::unit(2);
        assert!(log_derivative(&h, &e, Direction::Z).unwrap().values.is_empty());
        let phi = character(&h, &[("B1", reg(&[(-1, 0, q(3))]))]);
        assert_eq!(
            log_derivative(&h, &phi, Direction::Z).unwrap().get(&m(&h, "B1")),
            reg(&[(-2, 0, q(-3))])
        );
        assert!(log_derivative(&h, &phi, Direction::Y).unwrap().values.is_empty());
    }

    #[test]
    fn gauge_identities_hold() {
        let h = HopfAlgebra::with_corpus(3);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let f = random_character(&h, &mut rng);
        let g = random_character(&h, &mut rng);
        let e: Character = LinMap::unit(3);
        for dir in Direction::all() {
            for (a, b) in [(&f, &g), (&f, &f), (&e, &g)] {
                let rep = gauge_check(&h, a, b, dir).unwrap();
                assert!(rep.passed(), "{:?}", rep.failures().next());
            }
        }
        // with f = e the pullback sides both reduce to D(g)
        let rep = gauge_check(&h, &e, &g, Direction::Z).unwrap();
        let dg = log_derivative(&h, &g, Direction::Z).unwrap();
        for entry in rep.entries.iter().filter(|x| x.identity.starts_with("pullback")) {
            let mono = h.parse_monomial(&entry.monomial).unwrap();
            assert_eq!(entry.lhs, dg.get(&mono).to_string());
        }
    }

    #[test]
    fn literal_pullback_sign_fails() {
        // the "+" form of the pullback relation does not hold in general
        let h = HopfAlgebra::with_corpus(2);
        let f = character(&h, &[("B1", reg(&[(-1, 0, q(1))]))]);
        let g = character(&h, &[("B1", reg(&[(-1, 0, q(2))]))]);
        let k = convolve(&h, &convolution_inverse(&h, &f).unwrap(), &g).unwrap();
        let lhs = log_derivative(&h, &k, Direction::Z).unwrap();
        let dg = log_derivative(&h, &g, Direction::Z).unwrap();
        let df = log_derivative(&h, &f, Direction::Z).unwrap();
        let plus = dg.add(&conjugate(&h, &k, &df).unwrap()).unwrap();
        assert!(!lhs.agrees_with(&plus, &h.basis()));
    }

    #[test]
    fn equivariance_examples() {
        let h = HopfAlgebra::with_corpus(2);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let phi = random_character(&h, &mut rng);
        for (sigma, u) in [(Sigma::Dr, q(1)), (Sigma::Dr, q(2)), (Sigma::Mc, q(3)), (Sigma::Mc, q(-3))] {
            let rep = equivariance_check(&h, &phi, sigma, &u).unwrap();
            assert!(rep.passed(), "{rep:?}");
        }
        assert!(equivariance_check(&h, &phi, Sigma::Dr, &q(0)).is_err());
    }

    #[test]
    fn constant_flow_has_trivial_connection_in_s() {
        let h = HopfAlgebra::with_corpus(2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let phi = random_character(&h, &mut rng);
        let psi = constant_flow(&phi);
        let inv = convolution_inverse(&h, &psi).unwrap();
        let d = psi.map_values(MapKind::General, |_, v| v.differentiate_s());
        let c = convolve(&h, &inv, &d).unwrap();
        assert!(c.values.values().all(|v| v.is_zero()));
    }
}
