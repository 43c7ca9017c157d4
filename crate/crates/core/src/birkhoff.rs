//! Bogoliubov preparation and Birkhoff decomposition `φ = φ₋⁻¹ ⋆ φ₊`
//! with respect to minimal subtraction.

use crate::characters::{
    character_from_generators, convolution_inverse, convolve, Character, CharacterError, LinMap,
    MapKind,
};
use crate::hopf::{HopfAlgebra, Monomial};
use crate::rational::Q;
use crate::regalg::{RegElement, DEFAULT_Z_ORDER};
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq)]
pub struct BirkhoffResult {
    /// Counterterm character; singular on the augmentation ideal.
    pub phi_minus: Character,
    /// Renormalized character; regular everywhere.
    pub phi_plus: Character,
    /// Prepared values `φ̄` on every basis monomial.
    pub prepared: BTreeMap<Monomial, RegElement>,
}

/// `φ(x) + Σ φ₋(x′)φ(x″)` over the proper coproduct terms of `x`.
pub fn prepare(
    h: &HopfAlgebra,
    phi: &Character,
    phi_minus: &Character,
    x: &Monomial,
) -> Result<RegElement, CharacterError> {
    let mut acc = phi.get(x);
    for (l, r, c) in h.reduced_terms(x)? {
        acc = acc.add(&phi_minus.get(&l).mul(&phi.get(&r)).scale(&c));
    }
    Ok(acc)
}

/// Grade recursion on generators, then multiplicative extension.
pub fn birkhoff_decompose(h: &HopfAlgebra, phi: &Character) -> Result<BirkhoffResult, CharacterError> {
    let mut minus_gen = BTreeMap::new();
    let mut plus_gen = BTreeMap::new();
    // φ₋ restricted to what has been computed so far; generators come in
    // grade order so every proper coproduct factor is already known.
    let mut partial: Character = LinMap::unit(phi.grade_cap);
    for g in h.generators_within_cap() {
        let x = Monomial::generator(g.key.clone());
        let prep = prepare(h, phi, &partial, &x)?;
        let minus = prep.pi_minus().neg();
        let plus = prep.add(&minus);
        minus_gen.insert(g.key.clone(), minus.clone());
        plus_gen.insert(g.key.clone(), plus);
        partial = extend_known(h, &minus_gen);
    }
    let phi_minus = character_from_generators(h, &minus_gen)?;
    let phi_plus = character_from_generators(h, &plus_gen)?;
    let mut prepared = BTreeMap::new();
    for m in h.basis() {
        let v = if m.is_unit() {
            RegElement::one()
        } else {
            prepare(h, phi, &phi_minus, &m)?
        };
        prepared.insert(m, v);
    }
    Ok(BirkhoffResult {
        phi_minus,
        phi_plus,
        prepared,
    })
}

/// Multiplicative extension of a partial generator assignment; monomials
/// touching an unassigned generator are left at zero.
fn extend_known(h: &HopfAlgebra, gens: &BTreeMap<crate::graphs::CanonicalKey, RegElement>) -> Character {
    let mut out = LinMap::zero(h.grade_cap(), MapKind::Multiplicative);
    'basis: for m in h.basis() {
        let mut v = RegElement::one();
        for k in m.keys() {
            match gens.get(k) {
                Some(g) => v = v.mul(g),
                None => continue 'basis,
            }
        }
        out.set(m, v);
    }
    out
}

/// `φ₋⁻¹ ⋆ φ₊`, for checking reconstruction.
pub fn reconstruct(h: &HopfAlgebra, result: &BirkhoffResult) -> Result<Character, CharacterError> {
    let inv = convolution_inverse(h, &result.phi_minus)?;
    convolve(h, &inv, &result.phi_plus)
}

/// Verification of a decomposition, one line per property.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct DecompositionReport {
    pub reconstruction: bool,
    pub minus_singular: bool,
    pub plus_regular: bool,
    pub failures: Vec<String>,
}

impl DecompositionReport {
    pub fn passed(&self) -> bool {
        self.reconstruction && self.minus_singular && self.plus_regular
    }
}

pub fn verify_decomposition(
    h: &HopfAlgebra,
    phi: &Character,
    result: &BirkhoffResult,
) -> Result<DecompositionReport, CharacterError> {
    let basis = h.basis();
    let rebuilt = reconstruct(h, result)?;
    let mut failures = Vec::new();
    let mut reconstruction = true;
    let mut minus_singular = true;
    let mut plus_regular = true;
    for m in &basis {
        if !rebuilt.get(m).agrees_with(&phi.get(m)) {
            reconstruction = false;
            failures.push(format!("reconstruction fails at {}", h.render_monomial(m)));
        }
        if !m.is_unit() {
            let v = result.phi_minus.get(m);
            if !v.pi_minus().agrees_with(&v) {
                minus_singular = false;
                failures.push(format!("counterterm not singular at {}", h.render_monomial(m)));
            }
        }
        let v = result.phi_plus.get(m);
        if !v.pi_minus().is_zero() {
            plus_regular = false;
            failures.push(format!("renormalized value singular at {}", h.render_monomial(m)));
        }
    }
    Ok(DecompositionReport {
        reconstruction,
        minus_singular,
        plus_regular,
        failures,
    })
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct LocalityEntry {
    pub generator: String,
    /// Counterterm is a pure pole polynomial (`None` unless dimreg-type).
    pub pole_only: Option<bool>,
    /// Counterterm unchanged by the dimensional scaling flow.
    pub scale_independent: bool,
    pub offending: Vec<String>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct LocalityReport {
    /// Every generator value is free of `y`.
    pub dimreg_type: bool,
    pub entries: Vec<LocalityEntry>,
}

impl LocalityReport {
    pub fn passed(&self) -> bool {
        self.dimreg_type
            && self
                .entries
                .iter()
                .all(|e| e.pole_only != Some(false) && e.scale_independent)
    }
}

/// Rational scales at which the dimensional flow is sampled.
const FLOW_SAMPLES: [(i64, i64); 3] = [(1, 2), (1, 1), (-2, 1)];

/// Locality of counterterms: pure poles for dimreg-type characters, and
/// independence of the counterterm from the dimensional scaling `t^{zY}`
/// (sampled at a few rational `s = log t`).
pub fn check_locality(h: &HopfAlgebra, phi: &Character) -> Result<LocalityReport, CharacterError> {
    let gens = h.generators_within_cap();
    let dimreg_type = gens
        .iter()
        .all(|g| phi.get(&Monomial::generator(g.key.clone())).y_degree() == 0);
    let base = birkhoff_decompose(h, phi)?;
    let flowed: Vec<BirkhoffResult> = FLOW_SAMPLES
        .iter()
        .map(|&(n, d)| birkhoff_decompose(h, &scale_dr(h, phi, &Q::new(n.into(), d.into()))?))
        .collect::<Result<_, _>>()?;
    let mut entries = Vec::new();
    for g in &gens {
        let x = Monomial::generator(g.key.clone());
        let minus = base.phi_minus.get(&x);
        let mut offending = Vec::new();
        let pole_only = dimreg_type.then(|| {
            let bad: Vec<String> = minus
                .terms()
                .iter()
                .filter(|(&(i, j), _)| i >= 0 || j > 0)
                .map(|(&(i, j), c)| RegElement::monomial(i, j, c.clone()).to_string())
                .collect();
            let ok = bad.is_empty();
            offending.extend(bad);
            ok
        });
        let mut scale_independent = true;
        for (res, &(n, d)) in flowed.iter().zip(FLOW_SAMPLES.iter()) {
            let other = res.phi_minus.get(&x);
            if !other.agrees_with(&minus) {
                scale_independent = false;
                offending.push(format!("s={}: {} vs {}", fmt_frac(n, d), other, minus));
            }
        }
        entries.push(LocalityEntry {
            generator: g.name.clone(),
            pole_only,
            scale_independent,
            offending,
        });
    }
    Ok(LocalityReport {
        dimreg_type,
        entries,
    })
}

fn fmt_frac(n: i64, d: i64) -> String {
    if d == 1 {
        n.to_string()
    } else {
        format!("{n}/{d}")
    }
}

/// `e^{n·z·s}·φ` on each grade-`n` generator, with the exponential expanded
/// far enough that every singular coefficient of the product is exact.
pub fn scale_dr(h: &HopfAlgebra, phi: &Character, s: &Q) -> Result<Character, CharacterError> {
    let mut assign = BTreeMap::new();
    for g in h.generators_within_cap() {
        let v = phi.get(&Monomial::generator(g.key.clone()));
        let order = v.order().unwrap_or(v.pole_order() + DEFAULT_Z_ORDER);
        let c = s * Q::from_integer(g.grade.into());
        let factor = if c.is_zero() {
            RegElement::one()
        } else {
            RegElement::exp_linear(&c, order + v.pole_order())
        };
        assign.insert(g.key.clone(), factor.mul(&v));
    }
    character_from_generators(h, &assign)
}

/// True when `f` is the unit character on `basis`.
pub fn is_unit_character(f: &Character, basis: &[Monomial]) -> bool {
    basis.iter().all(|m| {
        let expected = if m.is_unit() {
            RegElement::constant(Q::one())
        } else {
            RegElement::zero()
        };
        f.get(m).agrees_with(&expected)
    })
}
