//! Renormalization group actions, geometric β functions and the inverse
//! flow ρ.
//!
//! Flow values are exponential polynomials `Σ s^k e^{(a+bz)s} c_{k,a,b}` in
//! `s = log t` with regulator-algebra coefficients. The dimensional action
//! multiplies a grade-`n` value by `e^{nzs}`; the cutoff action substitutes
//! `z → e^s z`, `y → y + s`.

use crate::characters::{
    convolution_inverse, convolve, Character, CharacterError, Coefficient, LinMap, MapKind,
};
use crate::hopf::{HopfAlgebra, Monomial};
use crate::rational::{binomial, factorial, pow, Q};
use crate::regalg::{RegElement, DEFAULT_Z_ORDER};
use num_traits::Zero;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RgError {
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error("divergent flow integral at {monomial}: {term}")]
    Divergent { monomial: String, term: String },
    #[error("non-local character: {monomial} keeps singular part {residual}")]
    NonLocal { monomial: String, residual: String },
    #[error("scale factor must be nonzero")]
    ZeroScale,
    #[error("cannot specialize e^({a}s) at a rational s exactly")]
    IrrationalExponent { a: i32 },
}

/// Which renormalization group action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Sigma {
    /// `t^{zY}`: dimensional regularization.
    Dr,
    /// `(z, y) → (tz, y + log t)`: momentum cutoff.
    Mc,
}

impl Sigma {
    pub fn as_str(self) -> &'static str {
        match self {
            Sigma::Dr => "dr",
            Sigma::Mc => "mc",
        }
    }
}

/// Exponent data of one flow term: `s^k e^{(a + b z) s}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FlowKey {
    pub k: u32,
    pub a: i32,
    pub b: i32,
}

impl FlowKey {
    pub const ONE: FlowKey = FlowKey { k: 0, a: 0, b: 0 };

    pub fn new(k: u32, a: i32, b: i32) -> Self {
        FlowKey { k, a, b }
    }
}

impl fmt::Display for FlowKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(k={}, a={}, b={})", self.k, self.a, self.b)
    }
}

/// Exponential polynomial in `s` with regulator-algebra coefficients.
///
/// A coefficient's truncation order bounds the z-powers known inside that
/// term only.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct FlowValue {
    terms: BTreeMap<FlowKey, RegElement>,
}

impl FlowValue {
    pub fn term(key: FlowKey, c: RegElement) -> Self {
        let mut v = FlowValue::default();
        v.add_term(key, c);
        v
    }

    /// The `s`-independent value `c`.
    pub fn constant_in_s(c: RegElement) -> Self {
        Self::term(FlowKey::ONE, c)
    }

    pub fn terms(&self) -> &BTreeMap<FlowKey, RegElement> {
        &self.terms
    }

    pub fn add_term(&mut self, key: FlowKey, c: RegElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().add(&c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn map_coeffs(&self, f: impl Fn(&RegElement) -> RegElement) -> FlowValue {
        let mut out = FlowValue::default();
        for (k, c) in &self.terms {
            out.add_term(*k, f(c));
        }
        out
    }

    /// Value at `s = 0`.
    pub fn at_zero(&self) -> RegElement {
        self.terms
            .iter()
            .filter(|(k, _)| k.k == 0)
            .fold(RegElement::zero(), |acc, (_, c)| acc.add(c))
    }

    /// Value at a rational `s`; `e^{bzs}` is expanded so that each term is
    /// known up to `z^order`. Terms with `a ≠ 0` have no exact rational value.
    pub fn at(&self, s: &Q, order: i32) -> Result<RegElement, RgError> {
        let mut acc = RegElement::zero();
        for (key, c) in &self.terms {
            if key.a != 0 && !s.is_zero() {
                return Err(RgError::IrrationalExponent { a: key.a });
            }
            let sk = pow(s, key.k as i32);
            let bs = s * Q::from_integer(key.b.into());
            let exp = if bs.is_zero() {
                RegElement::one()
            } else {
                RegElement::exp_linear(&bs, order + c.pole_order())
            };
            acc = acc.add(&exp.mul(c).scale(&sk));
        }
        Ok(acc)
    }

    /// Numeric value at `z0`, `y = log(z0·m)` and `s`.
    pub fn evaluate(&self, z0: f64, m: f64, s: f64) -> f64 {
        self.terms
            .iter()
            .map(|(key, c)| {
                s.powi(key.k as i32)
                    * ((key.a as f64 + key.b as f64 * z0) * s).exp()
                    * c.evaluate(z0, m)
            })
            .sum()
    }

    /// `d/ds`.
    pub fn differentiate_s(&self) -> FlowValue {
        let mut out = FlowValue::default();
        for (key, c) in &self.terms {
            if key.k > 0 {
                out.add_term(
                    FlowKey::new(key.k - 1, key.a, key.b),
                    c.scale(&Q::from_integer(key.k.into())),
                );
            }
            let rate = c
                .scale(&Q::from_integer(key.a.into()))
                .add(&RegElement::z().mul(c).scale(&Q::from_integer(key.b.into())));
            out.add_term(*key, rate);
        }
        out
    }

    /// `∂/∂z`, including the `b·s` from the exponent.
    pub fn differentiate_z(&self) -> FlowValue {
        let mut out = FlowValue::default();
        for (key, c) in &self.terms {
            out.add_term(*key, c.differentiate_z());
            if key.b != 0 {
                out.add_term(
                    FlowKey::new(key.k + 1, key.a, key.b),
                    c.scale(&Q::from_integer(key.b.into())),
                );
            }
        }
        out
    }

    pub fn differentiate_y(&self) -> FlowValue {
        self.map_coeffs(RegElement::differentiate_y)
    }

    /// `e^{(a' + b'z)s}·self`.
    pub fn shift_exponent(&self, a: i32, b: i32) -> FlowValue {
        let mut out = FlowValue::default();
        for (key, c) in &self.terms {
            out.add_term(FlowKey::new(key.k, key.a + a, key.b + b), c.clone());
        }
        out
    }
}

impl Coefficient for FlowValue {
    fn zero() -> Self {
        FlowValue::default()
    }
    fn one() -> Self {
        FlowValue::constant_in_s(RegElement::one())
    }
    fn constant(c: Q) -> Self {
        FlowValue::constant_in_s(RegElement::constant(c))
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c.clone());
        }
        out
    }
    fn neg(&self) -> Self {
        self.map_coeffs(RegElement::neg)
    }
    fn mul(&self, other: &Self) -> Self {
        let mut out = FlowValue::default();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                out.add_term(
                    FlowKey::new(k1.k + k2.k, k1.a + k2.a, k1.b + k2.b),
                    c1.mul(c2),
                );
            }
        }
        out
    }
    fn scale(&self, c: &Q) -> Self {
        self.map_coeffs(|v| v.scale(c))
    }
    /// A truncated coefficient makes the whole value known only up to that
    /// z order, so keys missing on one side count as zero up to it.
    fn agrees_with(&self, other: &Self) -> bool {
        let order = self
            .terms
            .values()
            .chain(other.terms.values())
            .filter_map(RegElement::order)
            .min();
        let zero = order.map_or_else(RegElement::zero, |q| RegElement::zero().truncate(q));
        self.terms
            .keys()
            .chain(other.terms.keys())
            .all(|k| {
                self.terms
                    .get(k)
                    .unwrap_or(&zero)
                    .agrees_with(other.terms.get(k).unwrap_or(&zero))
            })
    }
    fn as_constant(&self) -> Option<Q> {
        if self.terms.keys().all(|k| *k == FlowKey::ONE) {
            self.at_zero().as_constant()
        } else {
            None
        }
    }
}

impl fmt::Display for FlowValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(key, c)| {
                let mut factors = Vec::new();
                match key.k {
                    0 => {}
                    1 => factors.push("s".to_string()),
                    k => factors.push(format!("s^{k}")),
                }
                if key.a != 0 || key.b != 0 {
                    factors.push(format!("e^(({})s)", exponent_text(key.a, key.b)));
                }
                factors.push(format!("({c})"));
                factors.join("*")
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for FlowValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn exponent_text(a: i32, b: i32) -> String {
    match (a, b) {
        (a, 0) => a.to_string(),
        (0, 1) => "z".into(),
        (0, b) => format!("{b}z"),
        (a, 1) => format!("{a}+z"),
        (a, b) if b < 0 => format!("{a}{b}z"),
        (a, b) => format!("{a}+{b}z"),
    }
}

/// A one-parameter family of linear maps.
pub type FlowMap = LinMap<FlowValue>;

/// Lifts a map to an `s`-independent flow.
pub fn constant_flow(f: &LinMap<RegElement>) -> FlowMap {
    f.map_values(f.kind, |_, v| FlowValue::constant_in_s(v.clone()))
}

/// Value of every monomial at `s = 0`.
pub fn at_zero(f: &FlowMap) -> LinMap<RegElement> {
    f.map_values(f.kind, |_, v| v.at_zero())
}

/// Value of every monomial at a rational `s` (only for `a = 0` flows).
pub fn at(f: &FlowMap, s: &Q, order: i32) -> Result<LinMap<RegElement>, RgError> {
    let mut out = LinMap::zero(f.grade_cap, f.kind);
    for (m, v) in &f.values {
        out.set(m.clone(), v.at(s, order)?);
    }
    Ok(out)
}

pub fn differentiate_s(f: &FlowMap) -> FlowMap {
    f.map_values(MapKind::General, |_, v| v.differentiate_s())
}

/// `σ_dr`: a grade-`n` value picks up `e^{nzs}`.
pub fn act_dr(f: &LinMap<RegElement>) -> FlowMap {
    f.map_values(f.kind, |m, v| {
        FlowValue::term(FlowKey::new(0, 0, m.grade() as i32), v.clone())
    })
}

/// `σ_mc` on one value: `z^i y^j → e^{is} z^i (y + s)^j`.
pub fn act_mc_value(v: &RegElement) -> FlowValue {
    let mut out = FlowValue::default();
    for (&(i, j), c) in v.terms() {
        for l in 0..=j {
            let mut coeff = RegElement::monomial(i, j - l, c * binomial(j, l));
            if let Some(q) = v.order() {
                coeff = coeff.truncate(q);
            }
            out.add_term(FlowKey::new(l, i, 0), coeff);
        }
    }
    out
}

pub fn act_mc(f: &LinMap<RegElement>) -> FlowMap {
    f.map_values(f.kind, |_, v| act_mc_value(v))
}

pub fn act(f: &LinMap<RegElement>, sigma: Sigma) -> FlowMap {
    match sigma {
        Sigma::Dr => act_dr(f),
        Sigma::Mc => act_mc(f),
    }
}

/// `φ⁻¹ ⋆ zYφ`.
pub fn beta_dr(h: &HopfAlgebra, phi: &Character) -> Result<LinMap<RegElement>, RgError> {
    let zy = phi.map_values(MapKind::General, |m, v| {
        RegElement::z()
            .mul(v)
            .scale(&Q::from_integer(m.grade().into()))
    });
    let inv = convolution_inverse(h, phi)?;
    let mut out = convolve(h, &inv, &zy)?;
    out.kind = MapKind::Infinitesimal;
    Ok(out)
}

/// `φ⁻¹ ⋆ (z∂_z + ∂_y)φ`.
pub fn beta_mc(h: &HopfAlgebra, phi: &Character) -> Result<LinMap<RegElement>, RgError> {
    let gen = phi.map_values(MapKind::General, |_, v| {
        RegElement::z().mul(&v.differentiate_z()).add(&v.differentiate_y())
    });
    let inv = convolution_inverse(h, phi)?;
    let mut out = convolve(h, &inv, &gen)?;
    out.kind = MapKind::Infinitesimal;
    Ok(out)
}

pub fn beta(h: &HopfAlgebra, phi: &Character, sigma: Sigma) -> Result<LinMap<RegElement>, RgError> {
    match sigma {
        Sigma::Dr => beta_dr(h, phi),
        Sigma::Mc => beta_mc(h, phi),
    }
}

/// `d/ds (φ⁻¹ ⋆ σ_s φ)` at `s = 0`, computed on flows.
pub fn beta_from_flow(
    h: &HopfAlgebra,
    phi: &Character,
    sigma: Sigma,
) -> Result<LinMap<RegElement>, RgError> {
    let inv = constant_flow(&convolution_inverse(h, phi)?);
    let path = convolve(h, &inv, &act(phi, sigma))?;
    let mut out = at_zero(&differentiate_s(&path));
    out.kind = MapKind::Infinitesimal;
    Ok(out)
}

/// `z → 0` limit of an infinitesimal map whose values carry no singular
/// part: the constant term of every value.
pub fn limit_z0(h: &HopfAlgebra, alpha: &LinMap<RegElement>) -> Result<LinMap<RegElement>, RgError> {
    let mut out = LinMap::zero(alpha.grade_cap, alpha.kind);
    for (m, v) in &alpha.values {
        let residual = v.pi_minus();
        if !residual.is_zero() || v.order().is_some_and(|q| q < 0) {
            return Err(RgError::NonLocal {
                monomial: h.render_monomial(m),
                residual: residual.to_string(),
            });
        }
        out.set(m.clone(), RegElement::constant(v.coefficient(0, 0)));
    }
    Ok(out)
}

/// `1/(a + bz)^n` as an element of the regulator algebra.
fn inverse_power(a: i32, b: i32, n: u32, order: i32) -> RegElement {
    let (qa, qb) = (Q::from_integer(a.into()), Q::from_integer(b.into()));
    if a == 0 {
        return RegElement::monomial(-(n as i32), 0, pow(&qb, -(n as i32)));
    }
    let lead = pow(&qa, -(n as i32));
    if b == 0 {
        return RegElement::constant(lead);
    }
    // (1 + x)^{-n} = Σ (-1)^r C(n+r-1, r) x^r with x = (b/a) z
    let ratio = qb / qa;
    let mut out = RegElement::zero();
    for r in 0..=order.max(0) as u32 {
        let mut c = binomial(n + r - 1, r) * pow(&ratio, r as i32) * &lead;
        if r % 2 == 1 {
            c = -c;
        }
        out.add_term(r as i32, 0, c);
    }
    out.truncate(order)
}

/// Antiderivative of `s^k e^{(a+bz)s}·coeff` whose lower-limit contribution
/// vanishes formally: `e^{cs} Σ_{j≤k} (−1)^{k−j} (k!/j!) s^j / c^{k−j+1}`.
pub fn flow_integrate(key: FlowKey, coeff: &RegElement) -> Result<FlowValue, String> {
    if key.a < 0 || (key.a == 0 && key.b == 0) {
        return Err(format!(
            "s^{} e^(({})s) with coefficient {}",
            key.k,
            exponent_text(key.a, key.b),
            coeff
        ));
    }
    let order = coeff.order().unwrap_or(DEFAULT_Z_ORDER) + coeff.pole_order();
    let kf = factorial(key.k);
    let mut out = FlowValue::default();
    for j in 0..=key.k {
        let n = key.k - j + 1;
        let mut c = kf.clone() / factorial(j);
        if (key.k - j) % 2 == 1 {
            c = -c;
        }
        let inv = inverse_power(key.a, key.b, n, order);
        out.add_term(FlowKey::new(j, key.a, key.b), inv.mul(coeff).scale(&c));
    }
    Ok(out)
}

/// Solves `∂_s ψ = ψ ⋆ α_σ`, `ψ(1) = 1`, grade by grade, where `α_σ` is the
/// action `σ` applied to the values of `alpha`.
pub fn rho(h: &HopfAlgebra, alpha: &LinMap<RegElement>, sigma: Sigma) -> Result<FlowMap, RgError> {
    let alpha_s = act(alpha, sigma);
    let mut psi: FlowMap = LinMap::unit(alpha.grade_cap);
    psi.kind = MapKind::Multiplicative;
    for m in h.basis() {
        if m.is_unit() {
            continue;
        }
        let mut integrand = alpha_s.get(&m);
        for (l, r, c) in h.reduced_terms(&m).map_err(CharacterError::from)? {
            integrand = integrand.add(&psi.get(&l).mul(&alpha_s.get(&r)).scale(&c));
        }
        let mut value = FlowValue::default();
        for (key, coeff) in integrand.terms() {
            let piece = flow_integrate(*key, coeff).map_err(|term| RgError::Divergent {
                monomial: h.render_monomial(&m),
                term,
            })?;
            value = value.add(&piece);
        }
        psi.set(m, value);
    }
    Ok(psi)
}

/// `σ_dr` applied to a character at a rational `s`, exactly up to `order`.
pub fn act_dr_at(phi: &Character, s: &Q, order: i32) -> Result<Character, RgError> {
    let mut out = at(&act_dr(phi), s, order)?;
    out.kind = phi.kind;
    Ok(out)
}

/// `z·(φ⁻¹ ⋆ Yφ)`, which equals `β_dr(φ)`.
pub fn z_times_log_grading(h: &HopfAlgebra, phi: &Character) -> Result<LinMap<RegElement>, RgError> {
    let y = phi.map_values(MapKind::General, |m, v| v.scale(&Q::from_integer(m.grade().into())));
    let inv = convolution_inverse(h, phi)?;
    let prod = convolve(h, &inv, &y)?;
    Ok(prod.map_values(MapKind::Infinitesimal, |_, v| RegElement::z().mul(v)))
}

/// Text rendering of a flow map with explicit `(k, a, b)` terms.
pub fn render_flow(h: &HopfAlgebra, f: &FlowMap, basis: &[Monomial]) -> String {
    let mut out = String::new();
    for m in basis {
        let v = f.get(m);
        out.push_str(&h.render_monomial(m));
        out.push_str(":\n");
        if v.terms().is_empty() {
            out.push_str("  0\n");
        }
        for (key, c) in v.terms() {
            out.push_str(&format!("  {key}: {c}\n"));
        }
    }
    out
}

/// JSON form: `[{"monomial", "terms": [{"k","a","b","series"}]}]`.
pub fn flow_to_json(h: &HopfAlgebra, f: &FlowMap, basis: &[Monomial]) -> serde_json::Value {
    let entries: Vec<serde_json::Value> = basis
        .iter()
        .map(|m| {
            let terms: Vec<serde_json::Value> = f
                .get(m)
                .terms()
                .iter()
                .map(|(key, c)| {
                    serde_json::json!({
                        "k": key.k, "a": key.a, "b": key.b,
                        "series": c.to_series(),
                    })
                })
                .collect();
            serde_json::json!({"monomial": h.render_monomial(m), "terms": terms})
        })
        .collect();
    serde_json::Value::Array(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::tests::{character, random_character, reg};
    use crate::characters::{is_character, is_infinitesimal};
    use crate::rational::{q, qf};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn m(h: &HopfAlgebra, s: &str) -> Monomial {
        h.parse_monomial(s).unwrap()
    }

    #[test]
    fn flow_agreement_respects_truncation() {
        let known = RegElement::from_terms([((2, 0), q(1))], Some(6));
        let mut a = FlowValue::term(FlowKey::new(0, 2, 0), known.clone());
        let b = a.clone();
        // a z^8 e^{8s} term lies beyond the z^6 truncation
        a.add_term(FlowKey::new(0, 8, 0), RegElement::from_terms([((8, 0), q(3))], Some(8)));
        assert!(a.agrees_with(&b));
        a.add_term(FlowKey::new(0, 5, 0), RegElement::monomial(5, 0, q(1)));
        assert!(!a.agrees_with(&b));
        let exact = FlowValue::term(FlowKey::new(0, 2, 0), RegElement::monomial(2, 0, q(1)));
        let mut other = exact.clone();
        other.add_term(FlowKey::new(0, 8, 0), RegElement::monomial(8, 0, q(1)));
        assert!(!exact.agrees_with(&other));
    }

    #[test]
    fn act_dr_examples() {
        let h = HopfAlgebra::with_corpus(2);
        let phi = character(&h, &[("B1", reg(&[(-1, 0, q(3))]))]);
        let f = act_dr(&phi);
        assert_eq!(f.get(&Monomial::unit()), FlowValue::one());
        assert_eq!(
            f.get(&m(&h, "B1")),
            FlowValue::term(FlowKey::new(0, 0, 1), phi.get(&m(&h, "B1")))
        );
        assert_eq!(
            f.get(&m(&h, "B1.B1")),
            FlowValue::term(FlowKey::new(0, 0, 2), reg(&[(-2, 0, q(9))]))
        );
        assert_eq!(at_zero(&f), phi);
    }

    #[test]
    fn act_mc_examples() {
        let y = act_mc_value(&RegElement::y());
        let mut expected = FlowValue::constant_in_s(RegElement::y());
        expected.add_term(FlowKey::new(1, 0, 0), RegElement::one());
        assert_eq!(y, expected);
        let zinv = act_mc_value(&reg(&[(-1, 0, q(1))]));
        assert_eq!(zinv, FlowValue::term(FlowKey::new(0, -1, 0), reg(&[(-1, 0, q(1))])));
        // e^y = zm is preserved: flowing by s equals evaluating at e^s z0
        let v = reg(&[(-1, 0, q(2)), (0, 1, q(-1)), (0, 2, q(3)), (2, 1, q(1))]);
        let flowed = act_mc_value(&v);
        for &(z0, mm, s) in &[(0.1, 1.0, 0.7), (0.3, 2.0, -0.4)] {
            let lhs = flowed.evaluate(z0, mm, s);
            let rhs = v.evaluate(f64::exp(s) * z0, mm);
            assert!((lhs - rhs).abs() < 1e-10 * (1.0 + rhs.abs()));
        }
    }

    #[test]
    fn beta_dr_examples() {
        let h = HopfAlgebra::with_corpus(2);
        let (a, b, c, d) = (q(2), q(3), q(5), q(-1));
        let phi = character(
            &h,
            &[
                ("B1", reg(&[(-1, 0, a.clone())])),
                ("B2", reg(&[(-2, 0, b.clone()), (-1, 0, c.clone()), (0, 0, d.clone())])),
            ],
        );
        let beta = beta_dr(&h, &phi).unwrap();
        assert_eq!(beta.get(&m(&h, "B1")), RegElement::constant(a.clone()));
        let expected = reg(&[
            (-1, 0, q(2) * (&b - &a * &a)),
            (0, 0, q(2) * &c),
            (1, 0, q(2) * &d),
        ]);
        assert_eq!(beta.get(&m(&h, "B2")), expected);
        assert!(beta.get(&Monomial::unit()).is_zero());
        assert!(is_infinitesimal(&h, &beta));
    }

    #[test]
    fn beta_mc_examples() {
        let h = HopfAlgebra::with_corpus(1);
        let phi = character(
            &h,
            &[("B1", reg(&[(0, 1, q(-1)), (0, 0, qf(-1, 2)), (2, 0, q(1))]))],
        );
        let beta = beta_mc(&h, &phi).unwrap();
        assert_eq!(beta.get(&m(&h, "B1")), reg(&[(0, 0, q(-1)), (2, 0, q(2))]));
        let constant = character(&h, &[("B1", reg(&[(0, 0, q(7))]))]);
        assert!(beta_mc(&h, &constant).unwrap().get(&m(&h, "B1")).is_zero());
        assert!(beta.get(&Monomial::unit()).is_zero());
    }

    #[test]
    fn closed_forms_match_flow_derivatives() {
        let h = HopfAlgebra::with_corpus(3);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let basis = h.basis();
        for _ in 0..5 {
            let phi = random_character(&h, &mut rng);
            for sigma in [Sigma::Dr, Sigma::Mc] {
                let closed = beta(&h, &phi, sigma).unwrap();
                let flowed = beta_from_flow(&h, &phi, sigma).unwrap();
                assert!(closed.agrees_with(&flowed, &basis), "{sigma:?}");
                assert!(is_infinitesimal(&h, &closed));
            }
            let zy = z_times_log_grading(&h, &phi).unwrap();
            assert_eq!(zy.values, beta_dr(&h, &phi).unwrap().values);
        }
    }

    #[test]
    fn limit_examples() {
        let h = HopfAlgebra::with_corpus(2);
        let a = q(3);
        let c = q(5);
        let local = character(
            &h,
            &[
                ("B1", reg(&[(-1, 0, a.clone())])),
                ("B2", reg(&[(-2, 0, &a * &a), (-1, 0, c.clone()), (0, 0, q(2))])),
            ],
        );
        let lim = limit_z0(&h, &beta_dr(&h, &local).unwrap()).unwrap();
        assert_eq!(lim.get(&m(&h, "B2")), RegElement::constant(q(2) * &c));
        let bad = character(
            &h,
            &[
                ("B1", reg(&[(-1, 0, a.clone())])),
                ("B2", reg(&[(-2, 0, q(1)), (-1, 0, c)])),
            ],
        );
        match limit_z0(&h, &beta_dr(&h, &bad).unwrap()) {
            Err(RgError::NonLocal { monomial, .. }) => assert_eq!(monomial, "B2"),
            other => panic!("{other:?}"),
        }
        let zero: LinMap = LinMap::zero(2, MapKind::Infinitesimal);
        assert!(limit_z0(&h, &zero).unwrap().values.is_empty());
    }

    #[test]
    fn integration_examples() {
        let one = RegElement::one();
        let v = flow_integrate(FlowKey::new(0, 0, 1), &one).unwrap();
        assert_eq!(v, FlowValue::term(FlowKey::new(0, 0, 1), reg(&[(-1, 0, q(1))])));
        let v = flow_integrate(FlowKey::new(1, 2, 0), &one).unwrap();
        let mut expected = FlowValue::term(FlowKey::new(1, 2, 0), RegElement::constant(qf(1, 2)));
        expected.add_term(FlowKey::new(0, 2, 0), RegElement::constant(qf(-1, 4)));
        assert_eq!(v, expected);
        let err = flow_integrate(FlowKey::new(1, 0, 0), &one).unwrap_err();
        assert!(err.starts_with("s^1 e^((0)s)"), "{err}");
        assert!(flow_integrate(FlowKey::new(0, -1, 0), &one).is_err());
    }

    #[test]
    fn integration_inverts_differentiation() {
        for key in [FlowKey::new(2, 0, 3), FlowKey::new(1, 1, 2), FlowKey::new(3, 2, -1)] {
            let coeff = reg(&[(-1, 0, q(2)), (0, 1, q(1))]).truncate(6);
            let integral = flow_integrate(key, &coeff).unwrap();
            let back = integral.differentiate_s();
            let expected = FlowValue::term(key, coeff.clone());
            assert!(back.agrees_with(&expected), "{key}: {back}");
        }
    }

    #[test]
    fn rho_inverts_beta_dr() {
        let h = HopfAlgebra::with_corpus(3);
        let basis = h.basis();
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..5 {
            let phi = random_character(&h, &mut rng);
            let psi = rho(&h, &beta_dr(&h, &phi).unwrap(), Sigma::Dr).unwrap();
            assert!(at_zero(&psi).agrees_with(&phi, &basis));
            assert!(psi.agrees_with(&act_dr(&phi), &basis));
            assert!(is_character(&h, &psi));
        }
    }

    #[test]
    fn rho_grade_one() {
        let h = HopfAlgebra::with_corpus(1);
        let mut alpha: LinMap = LinMap::zero(1, MapKind::Infinitesimal);
        alpha.set(m(&h, "B1"), RegElement::constant(q(4)));
        let psi = rho(&h, &alpha, Sigma::Dr).unwrap();
        assert_eq!(
            psi.get(&m(&h, "B1")),
            FlowValue::term(FlowKey::new(0, 0, 1), reg(&[(-1, 0, q(4))]))
        );
    }

    #[test]
    fn rho_mc_aborts_on_poles() {
        let h = HopfAlgebra::with_corpus(1);
        let mut alpha: LinMap = LinMap::zero(1, MapKind::Infinitesimal);
        alpha.set(m(&h, "B1"), reg(&[(-1, 0, q(1)), (1, 0, q(1))]));
        let err = rho(&h, &alpha, Sigma::Mc).unwrap_err();
        assert!(err.to_string().contains("divergent flow integral"), "{err}");
        assert!(err.to_string().contains("B1"), "{err}");
    }

    #[test]
    fn actions_compose() {
        let h = HopfAlgebra::with_corpus(2);
        let basis = h.basis();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let phi = random_character(&h, &mut rng);
        let (s1, s2) = (qf(1, 3), qf(-2, 5));
        let once = act_dr_at(&phi, &(&s1 + &s2), 4).unwrap();
        let twice = act_dr_at(&act_dr_at(&phi, &s1, 8).unwrap(), &s2, 4).unwrap();
        assert!(once.agrees_with(&twice, &basis));

        let flow = act_mc(&phi);
        let (z0, mm) = (0.2, 1.5);
        for mono in &basis {
            let v = flow.get(mono);
            let direct = v.evaluate(z0, mm, 0.3 + 0.5);
            let shifted = v.evaluate(z0 * f64::exp(0.3), mm, 0.5);
            assert!((direct - shifted).abs() < 1e-9 * (1.0 + direct.abs()));
        }
    }
}
