//! Linear maps from the Hopf algebra into a coefficient ring.
//!
//! A [`LinMap`] stores its value on every basis monomial up to the grade cap,
//! so non-multiplicative maps (β functions, connection coefficients) are
//! first-class. Characters are the multiplicative ones.

use crate::hopf::{HopfAlgebra, HopfError, Monomial};
use crate::rational::Q;
use crate::regalg::RegElement;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharacterError {
    #[error(transparent)]
    Hopf(#[from] HopfError),
    #[error("grade cap mismatch: {0} vs {1}")]
    CapMismatch(usize, usize),
    #[error("grade cap {map} does not match the algebra's cap {algebra}")]
    AlgebraCap { map: usize, algebra: usize },
    #[error("missing value for generator(s): {}", .0.join(", "))]
    MissingGenerators(Vec<String>),
    #[error("value on the unit is not invertible")]
    NotInvertible,
    #[error("{0} is not an infinitesimal character")]
    NotInfinitesimal(&'static str),
}

/// The ring a [`LinMap`] takes values in.
pub trait Coefficient: Clone + PartialEq + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn constant(c: Q) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, c: &Q) -> Self;
    /// Equality on every coefficient known to both sides.
    fn agrees_with(&self, other: &Self) -> bool;
    /// The value as a rational constant, if it is one.
    fn as_constant(&self) -> Option<Q>;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

impl Coefficient for RegElement {
    fn zero() -> Self {
        RegElement::zero()
    }
    fn one() -> Self {
        RegElement::one()
    }
    fn constant(c: Q) -> Self {
        RegElement::constant(c)
    }
    fn is_zero(&self) -> bool {
        RegElement::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        RegElement::add(self, other)
    }
    fn neg(&self) -> Self {
        RegElement::neg(self)
    }
    fn mul(&self, other: &Self) -> Self {
        RegElement::mul(self, other)
    }
    fn scale(&self, c: &Q) -> Self {
        RegElement::scale(self, c)
    }
    fn agrees_with(&self, other: &Self) -> bool {
        RegElement::agrees_with(self, other)
    }
    fn as_constant(&self) -> Option<Q> {
        RegElement::as_constant(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum MapKind {
    Multiplicative,
    Infinitesimal,
    General,
}

impl MapKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MapKind::Multiplicative => "character",
            MapKind::Infinitesimal => "infinitesimal",
            MapKind::General => "general",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "character" | "multiplicative" => Some(MapKind::Multiplicative),
            "infinitesimal" => Some(MapKind::Infinitesimal),
            "general" => Some(MapKind::General),
            _ => None,
        }
    }
}

/// Values on the monomial basis; absent entries are zero.
#[derive(Clone, PartialEq)]
pub struct LinMap<V = RegElement> {
    pub grade_cap: usize,
    pub kind: MapKind,
    pub values: BTreeMap<Monomial, V>,
}

/// A multiplicative [`LinMap`].
pub type Character = LinMap<RegElement>;

impl<V: Coefficient> fmt::Debug for LinMap<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (k, v) in &self.values {
            m.entry(k, &v.to_string());
        }
        m.finish()
    }
}

impl<V: Coefficient> LinMap<V> {
    pub fn zero(grade_cap: usize, kind: MapKind) -> Self {
        LinMap {
            grade_cap,
            kind,
            values: BTreeMap::new(),
        }
    }

    /// The unit `e`: 1 on the empty monomial, 0 on the augmentation ideal.
    pub fn unit(grade_cap: usize) -> Self {
        let mut e = Self::zero(grade_cap, MapKind::Multiplicative);
        e.values.insert(Monomial::unit(), V::one());
        e
    }

    pub fn get(&self, m: &Monomial) -> V {
        self.values.get(m).cloned().unwrap_or_else(V::zero)
    }

    pub fn set(&mut self, m: Monomial, v: V) {
        if v.is_zero() {
            self.values.remove(&m);
        } else {
            self.values.insert(m, v);
        }
    }

    pub fn map_values<W: Coefficient>(&self, kind: MapKind, f: impl Fn(&Monomial, &V) -> W) -> LinMap<W> {
        let mut out = LinMap::zero(self.grade_cap, kind);
        for (m, v) in &self.values {
            out.set(m.clone(), f(m, v));
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self, CharacterError> {
        check_caps(self.grade_cap, other.grade_cap)?;
        let kind = if self.kind == MapKind::Infinitesimal && other.kind == MapKind::Infinitesimal {
            MapKind::Infinitesimal
        } else {
            MapKind::General
        };
        let mut out = LinMap::zero(self.grade_cap, kind);
        let keys: std::collections::BTreeSet<&Monomial> =
            self.values.keys().chain(other.values.keys()).collect();
        for m in keys {
            out.set(m.clone(), self.get(m).add(&other.get(m)));
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, CharacterError> {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> Self {
        let kind = if self.kind == MapKind::Multiplicative {
            MapKind::General
        } else {
            self.kind
        };
        self.map_values(kind, |_, v| v.scale(c))
    }

    /// Monomial-wise agreement on known coefficients over `basis`.
    pub fn agrees_with(&self, other: &Self, basis: &[Monomial]) -> bool {
        basis.iter().all(|m| self.get(m).agrees_with(&other.get(m)))
    }

    /// First basis monomial where the maps disagree.
    pub fn first_disagreement(&self, other: &Self, basis: &[Monomial]) -> Option<Monomial> {
        basis
            .iter()
            .find(|m| !self.get(m).agrees_with(&other.get(m)))
            .cloned()
    }
}

fn check_caps(a: usize, b: usize) -> Result<(), CharacterError> {
    if a != b {
        return Err(CharacterError::CapMismatch(a, b));
    }
    Ok(())
}

fn check_algebra<V>(h: &HopfAlgebra, f: &LinMap<V>) -> Result<(), CharacterError> {
    if f.grade_cap != h.grade_cap() {
        return Err(CharacterError::AlgebraCap {
            map: f.grade_cap,
            algebra: h.grade_cap(),
        });
    }
    Ok(())
}

/// Extends generator values multiplicatively to the whole basis.
pub fn character_from_generators<V: Coefficient>(
    h: &HopfAlgebra,
    assignments: &BTreeMap<crate::graphs::CanonicalKey, V>,
) -> Result<LinMap<V>, CharacterError> {
    for k in assignments.keys() {
        if !h.is_registered(k) {
            return Err(HopfError::UnknownGenerator(format!("{k:?}")).into());
        }
    }
    let missing: Vec<String> = h
        .generators_within_cap()
        .iter()
        .filter(|g| !assignments.contains_key(&g.key))
        .map(|g| g.name.clone())
        .collect();
    if !missing.is_empty() {
        return Err(CharacterError::MissingGenerators(missing));
    }
    let mut out = LinMap::zero(h.grade_cap(), MapKind::Multiplicative);
    for m in h.basis() {
        let mut v = V::one();
        for k in m.keys() {
            v = v.mul(&assignments[k]);
        }
        out.set(m, v);
    }
    Ok(out)
}

/// Multiplicative extension of a map already known on generators.
pub fn extend_multiplicatively<V: Coefficient>(h: &HopfAlgebra, f: &LinMap<V>) -> LinMap<V> {
    let mut out = LinMap::zero(f.grade_cap, MapKind::Multiplicative);
    for m in h.basis() {
        let mut v = V::one();
        for k in m.keys() {
            v = v.mul(&f.get(&Monomial::generator(k.clone())));
        }
        out.set(m, v);
    }
    out
}

/// `(f⋆g)(x) = Σ f(x′) g(x″)`.
pub fn convolve<V: Coefficient>(
    h: &HopfAlgebra,
    f: &LinMap<V>,
    g: &LinMap<V>,
) -> Result<LinMap<V>, CharacterError> {
    check_caps(f.grade_cap, g.grade_cap)?;
    check_algebra(h, f)?;
    let kind = if f.kind == MapKind::Multiplicative && g.kind == MapKind::Multiplicative {
        MapKind::Multiplicative
    } else {
        MapKind::General
    };
    let mut out = LinMap::zero(f.grade_cap, kind);
    for m in h.basis() {
        let mut acc = V::zero();
        for ((l, r), c) in h.coproduct_monomial(&m)? {
            let fl = f.get(&l);
            if fl.is_zero() {
                continue;
            }
            let gr = g.get(&r);
            if gr.is_zero() {
                continue;
            }
            acc = acc.add(&fl.mul(&gr).scale(&c));
        }
        out.set(m, acc);
    }
    Ok(out)
}

/// Convolution inverse: `f∘S` for characters, the recursive solution of
/// `f⁻¹⋆f = e` otherwise.
pub fn convolution_inverse<V: Coefficient>(
    h: &HopfAlgebra,
    f: &LinMap<V>,
) -> Result<LinMap<V>, CharacterError> {
    check_algebra(h, f)?;
    if f.kind == MapKind::Multiplicative {
        let mut out = LinMap::zero(f.grade_cap, MapKind::Multiplicative);
        for m in h.basis() {
            let mut acc = V::zero();
            for (n, c) in h.antipode_monomial(&m)?.terms {
                acc = acc.add(&f.get(&n).scale(&c));
            }
            out.set(m, acc);
        }
        return Ok(out);
    }
    convolution_inverse_recursive(h, f)
}

/// Grade-by-grade solution of `f⁻¹⋆f = e`; needs `f(1)` a nonzero constant.
pub fn convolution_inverse_recursive<V: Coefficient>(
    h: &HopfAlgebra,
    f: &LinMap<V>,
) -> Result<LinMap<V>, CharacterError> {
    check_algebra(h, f)?;
    let f1 = f
        .get(&Monomial::unit())
        .as_constant()
        .filter(|c| !c.is_zero())
        .ok_or(CharacterError::NotInvertible)?;
    let inv1 = f1.recip();
    let kind = if f.kind == MapKind::Multiplicative {
        MapKind::Multiplicative
    } else {
        MapKind::General
    };
    let mut out: LinMap<V> = LinMap::zero(f.grade_cap, kind);
    for m in h.basis() {
        let mut acc = if m.is_unit() { V::one() } else { V::zero() };
        for ((l, r), c) in h.coproduct_monomial(&m)? {
            if r.is_unit() {
                continue;
            }
            acc = acc.sub(&out.get(&l).mul(&f.get(&r)).scale(&c));
        }
        out.set(m, acc.scale(&inv1));
    }
    Ok(out)
}

/// `[f, g] = f⋆g − g⋆f` for infinitesimal `f`, `g`.
pub fn lie_bracket<V: Coefficient>(
    h: &HopfAlgebra,
    f: &LinMap<V>,
    g: &LinMap<V>,
) -> Result<LinMap<V>, CharacterError> {
    if !is_infinitesimal(h, f) {
        return Err(CharacterError::NotInfinitesimal("left operand"));
    }
    if !is_infinitesimal(h, g) {
        return Err(CharacterError::NotInfinitesimal("right operand"));
    }
    let mut out = convolve(h, f, g)?.sub(&convolve(h, g, f)?)?;
    out.kind = MapKind::Infinitesimal;
    Ok(out)
}

/// `f(1) = 1` and `f(ab) = f(a)f(b)` on every basis factorization.
pub fn is_character<V: Coefficient>(h: &HopfAlgebra, f: &LinMap<V>) -> bool {
    if f.get(&Monomial::unit()) != V::one() {
        return false;
    }
    h.basis().iter().all(|m| {
        m.splittings()
            .iter()
            .all(|(a, b)| f.get(m).agrees_with(&f.get(a).mul(&f.get(b))))
    })
}

/// `f(1) = 0` and `f(ab) = ε(a)f(b) + ε(b)f(a)` on every basis factorization.
pub fn is_infinitesimal<V: Coefficient>(h: &HopfAlgebra, f: &LinMap<V>) -> bool {
    if !f.get(&Monomial::unit()).is_zero() {
        return false;
    }
    h.basis().iter().all(|m| {
        m.splittings().iter().all(|(a, b)| {
            let expected = match (a.is_unit(), b.is_unit()) {
                (true, _) => f.get(b),
                (_, true) => f.get(a),
                _ => V::zero(),
            };
            f.get(m).agrees_with(&expected)
        })
    })
}

/// The infinitesimal character dual to a generator.
pub fn delta<V: Coefficient>(h: &HopfAlgebra, key: &crate::graphs::CanonicalKey) -> Result<LinMap<V>, CharacterError> {
    if !h.is_registered(key) {
        return Err(HopfError::UnknownGenerator(format!("{key:?}")).into());
    }
    let mut out = LinMap::zero(h.grade_cap(), MapKind::Infinitesimal);
    out.set(Monomial::generator(key.clone()), V::one());
    Ok(out)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::rational::{q, qf};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn reg(terms: &[(i32, u32, Q)]) -> RegElement {
        RegElement::from_terms(terms.iter().map(|(i, j, c)| ((*i, *j), c.clone())), None)
    }

    /// Character with the given generator values and zero elsewhere.
    pub(crate) fn character(h: &HopfAlgebra, values: &[(&str, RegElement)]) -> Character {
        let mut assign = BTreeMap::new();
        for g in h.generators_within_cap() {
            assign.insert(g.key.clone(), RegElement::zero());
        }
        for (name, v) in values {
            assign.insert(h.key_by_name(name).unwrap(), v.clone());
        }
        character_from_generators(h, &assign).unwrap()
    }

    pub(crate) fn random_character(h: &HopfAlgebra, rng: &mut ChaCha8Rng) -> Character {
        let mut assign = BTreeMap::new();
        for g in h.generators_within_cap() {
            let mut terms = Vec::new();
            for _ in 0..rng.gen_range(1..=3) {
                let i = rng.gen_range(-(g.grade as i32)..=2);
                let j = rng.gen_range(0..=1u32);
                terms.push(((i, j), qf(rng.gen_range(-5..=5), rng.gen_range(1..=3))));
            }
            assign.insert(g.key.clone(), RegElement::from_terms(terms, None));
        }
        character_from_generators(h, &assign).unwrap()
    }

    fn m(h: &HopfAlgebra, s: &str) -> Monomial {
        h.parse_monomial(s).unwrap()
    }

    #[test]
    fn construction_examples() {
        let h0 = HopfAlgebra::with_corpus(0);
        let trivial = character_from_generators::<RegElement>(&h0, &BTreeMap::new()).unwrap();
        assert_eq!(trivial, LinMap::unit(0));

        let h = HopfAlgebra::with_corpus(2);
        let a = reg(&[(-1, 0, q(3))]);
        let phi = character(&h, &[("B1", a.clone())]);
        assert_eq!(phi.get(&m(&h, "B1.B1")), reg(&[(-2, 0, q(9))]));
        assert!(is_character(&h, &phi));

        let mut partial = BTreeMap::new();
        partial.insert(h.key_by_name("B1").unwrap(), a);
        let err = character_from_generators(&h, &partial).unwrap_err();
        assert!(err.to_string().contains("T1"), "{err}");
    }

    #[test]
    fn convolution_examples() {
        let h = HopfAlgebra::with_corpus(2);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = random_character(&h, &mut rng);
        let g = random_character(&h, &mut rng);
        let fg = convolve(&h, &f, &g).unwrap();
        let b1 = m(&h, "B1");
        let b2 = m(&h, "B2");
        assert_eq!(fg.get(&b1), f.get(&b1).add(&g.get(&b1)));
        let expected = f
            .get(&b2)
            .add(&g.get(&b2))
            .add(&f.get(&b1).mul(&g.get(&b1)).scale(&q(2)));
        assert_eq!(fg.get(&b2), expected);
        assert!(is_character(&h, &fg));
        let e = LinMap::unit(2);
        assert_eq!(convolve(&h, &e, &f).unwrap(), f);
        assert_eq!(convolve(&h, &f, &e).unwrap(), f);
    }

    #[test]
    fn inverse_examples() {
        let h = HopfAlgebra::with_corpus(3);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let phi = random_character(&h, &mut rng);
        let inv = convolution_inverse(&h, &phi).unwrap();
        let b1 = m(&h, "B1");
        let b2 = m(&h, "B2");
        assert_eq!(inv.get(&b1), phi.get(&b1).neg());
        assert_eq!(
            inv.get(&b2),
            phi.get(&b2).neg().add(&phi.get(&b1).mul(&phi.get(&b1)).scale(&q(2)))
        );
        assert_eq!(convolution_inverse(&h, &inv).unwrap(), phi);
        let basis = h.basis();
        let e = LinMap::unit(3);
        assert!(convolve(&h, &inv, &phi).unwrap().agrees_with(&e, &basis));
        assert!(convolve(&h, &phi, &inv).unwrap().agrees_with(&e, &basis));
        let mut general = phi.clone();
        general.kind = MapKind::General;
        let rec = convolution_inverse(&h, &general).unwrap();
        assert!(rec.agrees_with(&inv, &basis));
        let zero: LinMap = LinMap::zero(3, MapKind::General);
        assert_eq!(convolution_inverse(&h, &zero), Err(CharacterError::NotInvertible));
    }

    #[test]
    fn lie_bracket_examples() {
        let h = HopfAlgebra::with_corpus(3);
        let d1: LinMap = delta(&h, &h.key_by_name("B1").unwrap()).unwrap();
        let d2: LinMap = delta(&h, &h.key_by_name("B2").unwrap()).unwrap();
        assert!(lie_bracket(&h, &d1, &d1).unwrap().values.is_empty());
        let br = lie_bracket(&h, &d1, &d2).unwrap();
        // only B3 has both B1⊗B2 and B2⊗B1 terms: 3 − 2
        assert_eq!(br.get(&m(&h, "B3")), RegElement::one());
        assert_eq!(br.get(&m(&h, "B2")), RegElement::zero());
        assert!(is_infinitesimal(&h, &br));
        for g in h.generators_within_cap().iter().filter(|g| g.grade == 1) {
            assert!(br.get(&Monomial::generator(g.key.clone())).is_zero());
        }
        let e: LinMap = LinMap::unit(3);
        assert!(lie_bracket(&h, &e, &d1).is_err());
    }

    #[test]
    fn predicates() {
        let h = HopfAlgebra::with_corpus(2);
        let e: LinMap = LinMap::unit(2);
        assert!(is_character(&h, &e));
        let d: LinMap = delta(&h, &h.key_by_name("B1").unwrap()).unwrap();
        assert!(is_infinitesimal(&h, &d));
        let zero: LinMap = LinMap::zero(2, MapKind::General);
        assert!(is_infinitesimal(&h, &zero));
        assert!(!is_character(&h, &zero));
    }

    #[test]
    fn group_and_adjoint_laws() {
        let h = HopfAlgebra::with_corpus(3);
        let basis = h.basis();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let f = random_character(&h, &mut rng);
            let g = random_character(&h, &mut rng);
            let k = random_character(&h, &mut rng);
            let lhs = convolve(&h, &convolve(&h, &f, &g).unwrap(), &k).unwrap();
            let rhs = convolve(&h, &f, &convolve(&h, &g, &k).unwrap()).unwrap();
            assert!(lhs.agrees_with(&rhs, &basis));
            assert!(is_character(&h, &convolution_inverse(&h, &f).unwrap()));
            let alpha: LinMap = delta(&h, &h.key_by_name("S").unwrap()).unwrap();
            let inv = convolution_inverse(&h, &f).unwrap();
            let adj = convolve(&h, &convolve(&h, &inv, &alpha).unwrap(), &f).unwrap();
            assert!(is_infinitesimal(&h, &adj));
        }
    }

    #[test]
    fn cap_mismatch_is_an_error() {
        let h = HopfAlgebra::with_corpus(2);
        let a: LinMap = LinMap::unit(2);
        let b: LinMap = LinMap::unit(3);
        assert_eq!(convolve(&h, &a, &b), Err(CharacterError::CapMismatch(2, 3)));
    }
}
