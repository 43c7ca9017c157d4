//! The regulator algebra: Laurent series in `z`, polynomial in `y`.
//!
//! `y` stands for `log(z·m)`, but the relation is never used to rewrite
//! elements; `z` and `y` stay independent formal symbols. Only `z` carries a
//! truncation order: coefficients of `z^i` with `i > order` are unknown.

use crate::rational::{format_q, parse_q, to_f64, Q};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

pub const DEFAULT_Z_ORDER: i32 = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("bad coefficient {0:?}")]
    BadCoefficient(String),
    #[error("negative y power {0}")]
    NegativeY(i64),
    #[error("more than one z_order marker")]
    DuplicateOrder,
    #[error("term z^{z} lies beyond z_order {order}")]
    BeyondOrder { z: i32, order: i32 },
}

/// `Σ c_ij z^i y^j`, exact or known up to `z^order`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct RegElement {
    terms: BTreeMap<(i32, u32), Q>,
    order: Option<i32>,
}

/// The minimal-subtraction splitting `a = minus + plus`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Splitting {
    pub minus: RegElement,
    pub plus: RegElement,
}

impl RegElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial(0, 0, c)
    }

    /// `c·z^i·y^j`, exact.
    pub fn monomial(i: i32, j: u32, c: Q) -> Self {
        let mut r = Self::zero();
        r.add_term(i, j, c);
        r
    }

    pub fn z() -> Self {
        Self::monomial(1, 0, Q::one())
    }

    pub fn y() -> Self {
        Self::monomial(0, 1, Q::one())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((i32, u32), Q)>, order: Option<i32>) -> Self {
        let mut r = Self::zero();
        for ((i, j), c) in terms {
            r.add_term(i, j, c);
        }
        match order {
            Some(q) => r.truncate(q),
            None => r,
        }
    }

    pub fn terms(&self) -> &BTreeMap<(i32, u32), Q> {
        &self.terms
    }

    pub fn coefficient(&self, i: i32, j: u32) -> Q {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Q::zero)
    }

    /// `None` when exact.
    pub fn order(&self) -> Option<i32> {
        self.order
    }

    pub fn is_exact(&self) -> bool {
        self.order.is_none()
    }

    /// No known nonzero coefficient.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, i: i32, j: u32, c: Q) {
        if c.is_zero() || self.order.is_some_and(|q| i > q) {
            return;
        }
        match self.terms.entry((i, j)) {
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

    /// Forgets everything above `z^order`.
    pub fn truncate(mut self, order: i32) -> Self {
        let q = self.order.map_or(order, |o| o.min(order));
        self.order = Some(q);
        self.terms.retain(|&(i, _), _| i <= q);
        self
    }

    /// Lowest z power present; for a truncated element with no known terms
    /// this is `order + 1`. `None` for the exact zero.
    pub fn valuation(&self) -> Option<i32> {
        match self.terms.keys().next() {
            Some(&(i, _)) => Some(i),
            None => self.order.map(|q| q + 1),
        }
    }

    /// Largest pole order (0 if there is none).
    pub fn pole_order(&self) -> i32 {
        self.terms.keys().next().map_or(0, |&(i, _)| (-i).max(0))
    }

    pub fn y_degree(&self) -> u32 {
        self.terms.keys().map(|&(_, j)| j).max().unwrap_or(0)
    }

    pub fn add(&self, other: &RegElement) -> RegElement {
        let order = min_order(self.order, other.order);
        let mut out = RegElement {
            terms: self.terms.clone(),
            order: None,
        };
        for (&(i, j), c) in &other.terms {
            out.add_term(i, j, c.clone());
        }
        match order {
            Some(q) => out.truncate(q),
            None => out,
        }
    }

    pub fn neg(&self) -> RegElement {
        RegElement {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
            order: self.order,
        }
    }

    pub fn sub(&self, other: &RegElement) -> RegElement {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Q) -> RegElement {
        if c.is_zero() {
            return RegElement {
                terms: BTreeMap::new(),
                order: self.order,
            };
        }
        RegElement {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
            order: self.order,
        }
    }

    /// Exact ring product; the truncation order is tracked pessimistically.
    pub fn mul(&self, other: &RegElement) -> RegElement {
        let order = product_order(self, other);
        let mut out = RegElement::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &other.terms {
                let i = i1 + i2;
                if order.is_some_and(|q| i > q) {
                    continue;
                }
                out.add_term(i, j1 + j2, c1 * c2);
            }
        }
        out.order = order;
        out
    }

    /// `e^{c·z}` known up to `z^order`.
    pub fn exp_linear(c: &Q, order: i32) -> RegElement {
        let mut out = RegElement::zero();
        let mut term = Q::one();
        for k in 0..=order.max(0) {
            if k > 0 {
                term = term * c / Q::from_integer(k.into());
            }
            out.add_term(k, 0, term.clone());
        }
        out.truncate(order)
    }

    /// Projection onto poles and pure-log terms (`i < 0`, or `i = 0, j > 0`).
    pub fn pi_minus(&self) -> RegElement {
        let terms = self
            .terms
            .iter()
            .filter(|(&(i, j), _)| i < 0 || (i == 0 && j > 0))
            .map(|(k, c)| (*k, c.clone()))
            .collect();
        // all singular coefficients are known once the order reaches 0
        let order = self.order.filter(|&q| q < 0);
        RegElement { terms, order }
    }

    pub fn pi_plus(&self) -> RegElement {
        self.sub(&self.pi_minus())
    }

    pub fn split(&self) -> Splitting {
        let minus = self.pi_minus();
        let plus = self.sub(&minus);
        Splitting { minus, plus }
    }

    pub fn differentiate_z(&self) -> RegElement {
        let mut out = RegElement::zero();
        for (&(i, j), c) in &self.terms {
            if i != 0 {
                out.add_term(i - 1, j, c * Q::from_integer(i.into()));
            }
        }
        out.order = self.order.map(|q| q - 1);
        out
    }

    pub fn differentiate_y(&self) -> RegElement {
        let mut out = RegElement::zero();
        for (&(i, j), c) in &self.terms {
            if j != 0 {
                out.add_term(i, j - 1, c * Q::from_integer(j.into()));
            }
        }
        out.order = self.order;
        out
    }

    /// `Σ c_ij z0^i log(z0·m)^j`.
    pub fn evaluate(&self, z0: f64, m: f64) -> f64 {
        let y = (z0 * m).ln();
        self.terms
            .iter()
            .map(|(&(i, j), c)| to_f64(c) * z0.powi(i) * y.powi(j as i32))
            .sum()
    }

    pub fn evaluate_q(&self, z0: &Q, m: &Q) -> f64 {
        self.evaluate(to_f64(z0), to_f64(m))
    }

    /// Equal on every coefficient known to both sides.
    pub fn agrees_with(&self, other: &RegElement) -> bool {
        let bound = min_order(self.order, other.order);
        let within = |i: i32| bound.is_none_or(|q| i <= q);
        let keys = self.terms.keys().chain(other.terms.keys());
        for &(i, j) in keys {
            if within(i) && self.coefficient(i, j) != other.coefficient(i, j) {
                return false;
            }
        }
        true
    }

    /// Constant term, when the element is a constant.
    pub fn as_constant(&self) -> Option<Q> {
        if self.terms.keys().all(|&k| k == (0, 0)) && self.order.is_none_or(|q| q >= 0) {
            Some(self.coefficient(0, 0))
        } else {
            None
        }
    }

    pub fn to_series(&self) -> Vec<SeriesItem> {
        let mut out: Vec<SeriesItem> = self
            .terms
            .iter()
            .map(|(&(i, j), c)| SeriesItem::Term {
                z: i,
                y: j as i64,
                c: Coef::Text(format_q(c)),
            })
            .collect();
        if let Some(q) = self.order {
            out.push(SeriesItem::Order { z_order: q });
        }
        out
    }

    pub fn from_series(items: &[SeriesItem]) -> Result<Self, SeriesError> {
        let mut order = None;
        let mut terms = Vec::new();
        for item in items {
            match item {
                SeriesItem::Order { z_order } => {
                    if order.replace(*z_order).is_some() {
                        return Err(SeriesError::DuplicateOrder);
                    }
                }
                SeriesItem::Term { z, y, c } => {
                    if *y < 0 {
                        return Err(SeriesError::NegativeY(*y));
                    }
                    terms.push(((*z, *y as u32), c.value()?));
                }
            }
        }
        if let Some(q) = order {
            if let Some(((z, _), _)) = terms.iter().find(|((z, _), _)| *z > q) {
                return Err(SeriesError::BeyondOrder { z: *z, order: q });
            }
        }
        Ok(RegElement::from_terms(terms, order))
    }
}

fn min_order(a: Option<i32>, b: Option<i32>) -> Option<i32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn product_order(a: &RegElement, b: &RegElement) -> Option<i32> {
    let (va, vb) = match (a.valuation(), b.valuation()) {
        // an exact zero annihilates everything, including the unknown tail
        (None, _) | (_, None) => return None,
        (Some(x), Some(y)) => (x, y),
    };
    let from_a = a.order.map(|q| q + vb);
    let from_b = b.order.map(|q| q + va);
    min_order(from_a, from_b)
}

impl fmt::Display for RegElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(Q, String)> = self
            .terms
            .iter()
            .map(|(&(i, j), c)| (c.clone(), monomial_text(i, j)))
            .collect();
        let mut parts = String::new();
        for (n, (c, body)) in terms.iter().enumerate() {
            let mag = c.abs();
            if n == 0 {
                if c.is_negative() {
                    parts.push('-');
                }
            } else {
                parts.push_str(if c.is_negative() { " - " } else { " + " });
            }
            match (body.is_empty(), mag.is_one()) {
                (true, _) => parts.push_str(&format_q(&mag)),
                (false, true) => parts.push_str(body),
                (false, false) => parts.push_str(&format!("{}*{body}", format_q(&mag))),
            }
        }
        if parts.is_empty() {
            parts.push('0');
        }
        if let Some(q) = self.order {
            parts.push_str(&format!(" + O(z^{})", q + 1));
        }
        f.write_str(&parts)
    }
}

impl fmt::Debug for RegElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn monomial_text(i: i32, j: u32) -> String {
    let mut parts = Vec::new();
    match i {
        0 => {}
        1 => parts.push("z".to_string()),
        _ => parts.push(format!("z^{i}")),
    }
    match j {
        0 => {}
        1 => parts.push("y".to_string()),
        _ => parts.push(format!("y^{j}")),
    }
    parts.join("*")
}

/// A coefficient in a series literal: `"p/q"` or a bare integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coef {
    Int(i64),
    Text(String),
}

impl Coef {
    pub fn value(&self) -> Result<Q, SeriesError> {
        match self {
            Coef::Int(n) => Ok(Q::from_integer((*n).into())),
            Coef::Text(s) => parse_q(s).ok_or_else(|| SeriesError::BadCoefficient(s.clone())),
        }
    }
}

/// One entry of a series literal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum SeriesItem {
    Term {
        z: i32,
        #[serde(default)]
        y: i64,
        c: Coef,
    },
    Order {
        z_order: i32,
    },
}
