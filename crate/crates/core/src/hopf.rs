//! The free commutative Hopf algebra on 1PI generator graphs.
//!
//! Generators are identified by [`CanonicalKey`]. Registering a graph also
//! registers, recursively, every component of its admissible subgraphs and
//! every contraction, so the coproduct closes on the registry. All
//! computations are truncated at a grade cap (loop number); anything beyond
//! the cap is dropped and the `truncated` flag is raised.

use crate::graphs::{corpus, CanonicalKey, Canonicalizer, Graph, GraphError};
use crate::rational::{format_q, Q};
use num_traits::{One, Signed, Zero};
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};
use thiserror::Error;

pub const DEFAULT_GRADE_CAP: usize = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HopfError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("unknown graph name {0:?}")]
    UnknownName(String),
    #[error("monomial {monomial} has grade {grade} beyond the grade cap {cap}")]
    BeyondCap {
        monomial: String,
        grade: usize,
        cap: usize,
    },
}

/// A multiset of generators; the empty multiset is the unit.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<CanonicalKey>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    pub fn generator(key: CanonicalKey) -> Self {
        Monomial(vec![key])
    }

    pub fn from_keys(mut keys: Vec<CanonicalKey>) -> Self {
        keys.sort();
        Monomial(keys)
    }

    pub fn keys(&self) -> &[CanonicalKey] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_generator(&self) -> bool {
        self.0.len() == 1
    }

    pub fn grade(&self) -> usize {
        self.0.iter().map(CanonicalKey::loop_number).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut keys = self.0.clone();
        keys.extend(other.0.iter().cloned());
        Monomial::from_keys(keys)
    }

    /// All ways to split into two sub-multisets `(a, b)` with `a·b = self`,
    /// with multiplicities, e.g. `B1·B1` gives `(1, B1B1)`, `(B1, B1)` twice
    /// and `(B1B1, 1)`.
    pub fn splittings(&self) -> Vec<(Monomial, Monomial)> {
        let n = self.0.len();
        let mut out = Vec::with_capacity(1 << n);
        for mask in 0u32..(1u32 << n) {
            let mut a = Vec::new();
            let mut b = Vec::new();
            for (i, k) in self.0.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    a.push(k.clone());
                } else {
                    b.push(k.clone());
                }
            }
            out.push((Monomial(a), Monomial(b)));
        }
        out
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter().map(|k| k.digest())).finish()
    }
}

/// Rational linear combination of monomials.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct HopfElement {
    pub terms: BTreeMap<Monomial, Q>,
    /// Set when terms beyond the grade cap were dropped.
    pub truncated: bool,
}

impl HopfElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Monomial::unit())
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, Q::one())
    }

    pub fn term(m: Monomial, c: Q) -> Self {
        let mut e = Self::zero();
        e.add_term(m, c);
        e
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &HopfElement) -> HopfElement {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out.truncated |= other.truncated;
        out
    }

    pub fn scale(&self, c: &Q) -> HopfElement {
        let mut out = HopfElement {
            terms: BTreeMap::new(),
            truncated: self.truncated,
        };
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_grade(&self) -> usize {
        self.terms.keys().map(Monomial::grade).max().unwrap_or(0)
    }
}

/// Rational combination of `left ⊗ right` pairs.
pub type TensorElement = BTreeMap<(Monomial, Monomial), Q>;

fn add_tensor(t: &mut TensorElement, l: Monomial, r: Monomial, c: Q) {
    if c.is_zero() {
        return;
    }
    match t.entry((l, r)) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// A registered 1PI generator and its reduced coproduct.
#[derive(Debug, Clone)]
pub struct Generator {
    pub key: CanonicalKey,
    pub name: String,
    pub graph: Graph,
    pub grade: usize,
    /// `Σ γ ⊗ Γ/γ` over admissible subgraphs, with multiplicities.
    pub reduced_coproduct: BTreeMap<(Monomial, Monomial), u64>,
}

#[derive(Default)]
struct Registry {
    generators: BTreeMap<CanonicalKey, Arc<Generator>>,
    names: BTreeMap<String, CanonicalKey>,
    antipodes: HashMap<CanonicalKey, HopfElement>,
}

/// Generator registry plus the structure maps, truncated at a grade cap.
///
/// The registry is append-only and internally synchronized, so one algebra
/// can be shared between threads.
pub struct HopfAlgebra {
    grade_cap: usize,
    canon: Canonicalizer,
    registry: RwLock<Registry>,
}

impl fmt::Debug for HopfAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HopfAlgebra")
            .field("grade_cap", &self.grade_cap)
            .field("generators", &self.generator_names())
            .finish()
    }
}

impl HopfAlgebra {
    pub fn new(grade_cap: usize) -> Self {
        HopfAlgebra {
            grade_cap,
            canon: Canonicalizer::default(),
            registry: RwLock::default(),
        }
    }

    /// An algebra with the built-in corpus registered.
    pub fn with_corpus(grade_cap: usize) -> Self {
        let h = Self::new(grade_cap);
        for (name, g) in corpus::all() {
            h.register(name, &g).expect("corpus graphs are valid generators");
        }
        h
    }

    pub fn grade_cap(&self) -> usize {
        self.grade_cap
    }

    pub fn key_of(&self, g: &Graph) -> Result<CanonicalKey, HopfError> {
        Ok(self.canon.key(g)?)
    }

    /// Registers a generator under `name` together with everything its
    /// coproduct needs. Re-registering an isomorphic graph adds `name` as an
    /// alias; an auto-generated display name is replaced by `name`.
    pub fn register(&self, name: &str, g: &Graph) -> Result<CanonicalKey, HopfError> {
        g.validate_generator()?;
        let key = self.register_inner(g)?;
        let mut reg = self.registry.write().expect("registry lock");
        reg.names.insert(name.to_string(), key.clone());
        let gen = reg.generators.get(&key).expect("registered").clone();
        if is_auto_name(&gen.name) {
            let mut renamed = (*gen).clone();
            renamed.name = name.to_string();
            reg.generators.insert(key.clone(), Arc::new(renamed));
        }
        Ok(key)
    }

    fn register_inner(&self, g: &Graph) -> Result<CanonicalKey, HopfError> {
        let key = self.canon.key(g)?;
        if self
            .registry
            .read()
            .expect("registry lock")
            .generators
            .contains_key(&key)
        {
            return Ok(key);
        }
        let mut reduced = BTreeMap::new();
        for sub in g.admissible_subgraphs() {
            let mut parts = Vec::new();
            for comp in g.components(&sub) {
                parts.push(self.register_inner(&g.component_graph(&sub, &comp))?);
            }
            let quotient = self.register_inner(&g.contract(&sub)?)?;
            *reduced
                .entry((Monomial::from_keys(parts), Monomial::generator(quotient)))
                .or_insert(0u64) += 1;
        }
        let name = default_name(&key);
        let gen = Generator {
            key: key.clone(),
            name: name.clone(),
            graph: key.to_graph(),
            grade: g.loop_number(),
            reduced_coproduct: reduced,
        };
        let mut reg = self.registry.write().expect("registry lock");
        reg.generators
            .entry(key.clone())
            .or_insert_with(|| Arc::new(gen));
        reg.names.entry(name).or_insert_with(|| key.clone());
        Ok(key)
    }

    pub fn generator(&self, key: &CanonicalKey) -> Result<Arc<Generator>, HopfError> {
        self.registry
            .read()
            .expect("registry lock")
            .generators
            .get(key)
            .cloned()
            .ok_or_else(|| HopfError::UnknownGenerator(format!("{key:?}")))
    }

    pub fn generators(&self) -> Vec<Arc<Generator>> {
        let reg = self.registry.read().expect("registry lock");
        let mut out: Vec<_> = reg.generators.values().cloned().collect();
        out.sort_by(|a, b| (a.grade, &a.key).cmp(&(b.grade, &b.key)));
        out
    }

    pub fn generator_names(&self) -> Vec<String> {
        self.generators().iter().map(|g| g.name.clone()).collect()
    }

    pub fn is_registered(&self, key: &CanonicalKey) -> bool {
        self.registry
            .read()
            .expect("registry lock")
            .generators
            .contains_key(key)
    }

    pub fn key_by_name(&self, name: &str) -> Result<CanonicalKey, HopfError> {
        self.registry
            .read()
            .expect("registry lock")
            .names
            .get(name)
            .cloned()
            .ok_or_else(|| HopfError::UnknownName(name.to_string()))
    }

    pub fn name_of(&self, key: &CanonicalKey) -> String {
        self.registry
            .read()
            .expect("registry lock")
            .generators
            .get(key)
            .map(|g| g.name.clone())
            .unwrap_or_else(|| default_name(key))
    }

    /// Parses `"1"`, `"B2"` or `"B1.B1"`.
    pub fn parse_monomial(&self, text: &str) -> Result<Monomial, HopfError> {
        let text = text.trim();
        if text == "1" {
            return Ok(Monomial::unit());
        }
        let keys = text
            .split('.')
            .map(|n| self.key_by_name(n.trim()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Monomial::from_keys(keys))
    }

    /// Generators of grade `1..=cap`, ordered by grade then key.
    pub fn generators_within_cap(&self) -> Vec<Arc<Generator>> {
        self.generators()
            .into_iter()
            .filter(|g| g.grade >= 1 && g.grade <= self.grade_cap)
            .collect()
    }

    /// Every monomial of grade ≤ cap over the registered generators,
    /// ordered by grade, then lexicographically. The unit comes first.
    pub fn basis(&self) -> Vec<Monomial> {
        let gens = self.generators_within_cap();
        let mut out = Vec::new();
        let mut current = Vec::new();
        extend_basis(&gens, 0, 0, self.grade_cap, &mut current, &mut out);
        out.sort_by(|a, b| (a.grade(), a).cmp(&(b.grade(), b)));
        out
    }

    fn check_cap(&self, m: &Monomial) -> Result<(), HopfError> {
        let grade = m.grade();
        if grade > self.grade_cap {
            return Err(HopfError::BeyondCap {
                monomial: self.render_monomial(m),
                grade,
                cap: self.grade_cap,
            });
        }
        for k in m.keys() {
            if !self.is_registered(k) {
                return Err(HopfError::UnknownGenerator(format!("{k:?}")));
            }
        }
        Ok(())
    }

    /// Product with terms beyond the cap dropped (and flagged).
    pub fn mul(&self, a: &HopfElement, b: &HopfElement) -> HopfElement {
        let mut out = HopfElement {
            terms: BTreeMap::new(),
            truncated: a.truncated || b.truncated,
        };
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let m = ma.mul(mb);
                if m.grade() > self.grade_cap {
                    out.truncated = true;
                    continue;
                }
                out.add_term(m, ca * cb);
            }
        }
        out
    }

    /// Coproduct of a single monomial, as an algebra map.
    pub fn coproduct_monomial(&self, m: &Monomial) -> Result<TensorElement, HopfError> {
        self.check_cap(m)?;
        let mut acc: TensorElement = BTreeMap::new();
        acc.insert((Monomial::unit(), Monomial::unit()), Q::one());
        for k in m.keys() {
            let gen = self.generator(k)?;
            let mut factor: TensorElement = BTreeMap::new();
            add_tensor(&mut factor, Monomial::unit(), Monomial::generator(k.clone()), Q::one());
            add_tensor(&mut factor, Monomial::generator(k.clone()), Monomial::unit(), Q::one());
            for ((l, r), c) in &gen.reduced_coproduct {
                add_tensor(&mut factor, l.clone(), r.clone(), Q::from_integer((*c).into()));
            }
            let mut next = BTreeMap::new();
            for ((l1, r1), c1) in &acc {
                for ((l2, r2), c2) in &factor {
                    add_tensor(&mut next, l1.mul(l2), r1.mul(r2), c1 * c2);
                }
            }
            acc = next;
        }
        Ok(acc)
    }

    pub fn coproduct(&self, x: &HopfElement) -> Result<TensorElement, HopfError> {
        let mut out = BTreeMap::new();
        for (m, c) in &x.terms {
            for ((l, r), v) in self.coproduct_monomial(m)? {
                add_tensor(&mut out, l, r, v * c);
            }
        }
        Ok(out)
    }

    /// Coproduct terms other than `1⊗m` and `m⊗1`.
    pub fn reduced_terms(&self, m: &Monomial) -> Result<Vec<(Monomial, Monomial, Q)>, HopfError> {
        Ok(self
            .coproduct_monomial(m)?
            .into_iter()
            .filter(|((l, r), _)| !l.is_unit() && !r.is_unit())
            .map(|((l, r), c)| (l, r, c))
            .collect())
    }

    pub fn counit(&self, x: &HopfElement) -> Q {
        x.terms.get(&Monomial::unit()).cloned().unwrap_or_else(Q::zero)
    }

    pub fn grading(&self, x: &HopfElement) -> HopfElement {
        let mut out = HopfElement {
            terms: BTreeMap::new(),
            truncated: x.truncated,
        };
        for (m, c) in &x.terms {
            out.add_term(m.clone(), c * Q::from_integer(m.grade().into()));
        }
        out
    }

    /// `S(Γ) = −Γ − Σ S(γ)·Γ/γ`, cached per generator.
    pub fn antipode_generator(&self, k: &CanonicalKey) -> Result<HopfElement, HopfError> {
        if let Some(s) = self.registry.read().expect("registry lock").antipodes.get(k) {
            return Ok(s.clone());
        }
        let m = Monomial::generator(k.clone());
        let mut s = HopfElement::term(m.clone(), -Q::one());
        for (l, r, c) in self.reduced_terms(&m)? {
            let sl = self.antipode_monomial(&l)?;
            let prod = self.mul(&sl, &HopfElement::monomial(r));
            s = s.add(&prod.scale(&-c));
        }
        self.registry
            .write()
            .expect("registry lock")
            .antipodes
            .insert(k.clone(), s.clone());
        Ok(s)
    }

    pub fn antipode_monomial(&self, m: &Monomial) -> Result<HopfElement, HopfError> {
        self.check_cap(m)?;
        let mut acc = HopfElement::one();
        for k in m.keys() {
            acc = self.mul(&acc, &self.antipode_generator(k)?);
        }
        Ok(acc)
    }

    pub fn antipode(&self, x: &HopfElement) -> Result<HopfElement, HopfError> {
        let mut out = HopfElement::zero();
        for (m, c) in &x.terms {
            out = out.add(&self.antipode_monomial(m)?.scale(c));
        }
        Ok(out)
    }

    /// `(Δ⊗id)Δ(m) = (id⊗Δ)Δ(m)`.
    pub fn check_coassociativity(&self, m: &Monomial) -> Result<bool, HopfError> {
        let delta = self.coproduct_monomial(m)?;
        let mut left: BTreeMap<(Monomial, Monomial, Monomial), Q> = BTreeMap::new();
        let mut right: BTreeMap<(Monomial, Monomial, Monomial), Q> = BTreeMap::new();
        for ((a, b), c) in &delta {
            for ((a1, a2), c1) in self.coproduct_monomial(a)? {
                *left
                    .entry((a1, a2, b.clone()))
                    .or_insert_with(Q::zero) += c * c1;
            }
            for ((b1, b2), c2) in self.coproduct_monomial(b)? {
                *right
                    .entry((a.clone(), b1, b2))
                    .or_insert_with(Q::zero) += c * c2;
            }
        }
        left.retain(|_, v| !v.is_zero());
        right.retain(|_, v| !v.is_zero());
        Ok(left == right)
    }

    /// `(ε⊗id)Δ(m) = m = (id⊗ε)Δ(m)`.
    pub fn check_counit(&self, m: &Monomial) -> Result<bool, HopfError> {
        let delta = self.coproduct_monomial(m)?;
        let mut left = HopfElement::zero();
        let mut right = HopfElement::zero();
        for ((a, b), c) in &delta {
            if a.is_unit() {
                left.add_term(b.clone(), c.clone());
            }
            if b.is_unit() {
                right.add_term(a.clone(), c.clone());
            }
        }
        let expected = HopfElement::monomial(m.clone());
        Ok(left == expected && right == expected)
    }

    /// `m(S⊗id)Δ(m) = ε(m)·1 = m(id⊗S)Δ(m)` for the given antipode.
    pub fn check_antipode_with<F>(&self, m: &Monomial, antipode: F) -> Result<bool, HopfError>
    where
        F: Fn(&Monomial) -> Result<HopfElement, HopfError>,
    {
        let delta = self.coproduct_monomial(m)?;
        let mut left = HopfElement::zero();
        let mut right = HopfElement::zero();
        for ((a, b), c) in &delta {
            let sa = antipode(a)?;
            let sb = antipode(b)?;
            left = left.add(&self.mul(&sa, &HopfElement::monomial(b.clone())).scale(c));
            right = right.add(&self.mul(&HopfElement::monomial(a.clone()), &sb).scale(c));
        }
        let expected = if m.is_unit() {
            HopfElement::one()
        } else {
            HopfElement::zero()
        };
        Ok(left.terms == expected.terms && right.terms == expected.terms)
    }

    pub fn check_antipode(&self, m: &Monomial) -> Result<bool, HopfError> {
        self.check_antipode_with(m, |x| self.antipode_monomial(x))
    }

    pub fn render_monomial(&self, m: &Monomial) -> String {
        if m.is_unit() {
            return "1".into();
        }
        m.keys()
            .iter()
            .map(|k| self.name_of(k))
            .collect::<Vec<_>>()
            .join(".")
    }

    /// `"2*B1.B1 - B2"`; terms in monomial order.
    pub fn render(&self, x: &HopfElement) -> String {
        let terms: Vec<(Q, String)> = x
            .terms
            .iter()
            .map(|(m, c)| (c.clone(), self.render_monomial(m)))
            .collect();
        let mut s = join_signed(&terms, false);
        if x.truncated {
            s.push_str(" + O(grade>cap)");
        }
        s
    }

    /// `"1⊗B2 + B2⊗1 + 2*(B1⊗B1)"`: `1⊗x` terms, then `x⊗1`, then the rest.
    pub fn render_tensor(&self, t: &TensorElement) -> String {
        let mut ordered: Vec<(&(Monomial, Monomial), &Q)> = t.iter().collect();
        ordered.sort_by_key(|((l, r), _)| {
            let class = if l.is_unit() {
                0
            } else if r.is_unit() {
                1
            } else {
                2
            };
            (class, l.clone(), r.clone())
        });
        let terms: Vec<(Q, String)> = ordered
            .into_iter()
            .map(|((l, r), c)| {
                (
                    c.clone(),
                    format!("{}⊗{}", self.render_monomial(l), self.render_monomial(r)),
                )
            })
            .collect();
        join_signed(&terms, true)
    }
}

fn extend_basis(
    gens: &[Arc<Generator>],
    start: usize,
    grade: usize,
    cap: usize,
    current: &mut Vec<CanonicalKey>,
    out: &mut Vec<Monomial>,
) {
    out.push(Monomial::from_keys(current.clone()));
    for i in start..gens.len() {
        let g = grade + gens[i].grade;
        if g > cap {
            continue;
        }
        current.push(gens[i].key.clone());
        extend_basis(gens, i, g, cap, current, out);
        current.pop();
    }
}

const AUTO_PREFIX: &str = "g";

fn default_name(key: &CanonicalKey) -> String {
    for (name, g) in corpus::all() {
        if crate::graphs::canonical_form(&g).ok().as_ref() == Some(key) {
            return name.to_string();
        }
    }
    format!(
        "{AUTO_PREFIX}{}j{}_{}",
        key.loop_number(),
        key.external_leg_count(),
        &key.digest()[..6]
    )
}

fn is_auto_name(name: &str) -> bool {
    name.starts_with(AUTO_PREFIX) && name.contains('_')
}

/// Joins `c*x` terms with signs; `paren` wraps non-unit-coefficient items.
pub(crate) fn join_signed(terms: &[(Q, String)], paren: bool) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, (c, body)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if i == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if mag.is_one() {
            s.push_str(body);
        } else if paren {
            s.push_str(&format!("{}*({body})", format_q(&mag)));
        } else {
            s.push_str(&format!("{}*{body}", format_q(&mag)));
        }
    }
    s
}
