//! Concrete characters: character files and the zero-momentum one-loop
//! bubble under a momentum cutoff and under dimensional regularization.

use crate::characters::{
    character_from_generators, is_character, Character, CharacterError, LinMap, MapKind,
};
use crate::hopf::{HopfAlgebra, HopfError, Monomial};
use crate::rational::{approximate, binomial, factorial, pow, q, qf, to_f64, Q};
use crate::regalg::{RegElement, SeriesError, SeriesItem, DEFAULT_Z_ORDER};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToyRuleConfig {
    pub m: Q,
    /// Constant angular/volume factor multiplying every one-loop value.
    pub angular_factor: Q,
    pub z_truncation: i32,
}

impl Default for ToyRuleConfig {
    fn default() -> Self {
        ToyRuleConfig {
            m: Q::one(),
            angular_factor: Q::one(),
            z_truncation: DEFAULT_Z_ORDER,
        }
    }
}

/// `∫_0^Λ p³/(p²+m²)² dp` with `Λ = 1/|z|`, `y = log(zm)`:
/// `−y − ½ + Σ_{n≥1} ½(−1)^{n+1}(1 + 1/n)(m z)^{2n}`, times the angular factor.
pub fn bubble_cutoff_value(cfg: &ToyRuleConfig) -> RegElement {
    let mut v = RegElement::zero();
    v.add_term(0, 1, -Q::one());
    v.add_term(0, 0, qf(-1, 2));
    let m2 = &cfg.m * &cfg.m;
    let mut n = 1;
    while 2 * n <= cfg.z_truncation {
        let sign = if n % 2 == 1 { Q::one() } else { -Q::one() };
        let c = sign * qf(1, 2) * (Q::one() + qf(1, n as i64)) * pow(&m2, n);
        v.add_term(2 * n, 0, c);
        n += 1;
    }
    v.truncate(cfg.z_truncation).scale(&cfg.angular_factor)
}

/// Bernoulli numbers `B_0..=B_n` (with `B_1 = −1/2`).
pub fn bernoulli(n: usize) -> Vec<Q> {
    let mut b: Vec<Q> = vec![Q::one()];
    for k in 1..=n {
        let mut acc = Q::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += binomial(k as u32 + 1, j as u32) * bj;
        }
        b.push(-acc / q(k as i64 + 1));
    }
    b
}

/// `x/sin x = Σ (−1)^{n+1}(2^{2n} − 2) B_{2n} x^{2n}/(2n)!`, coefficients
/// of `x^{2n}` for `2n ≤ order`.
fn x_over_sin(order: usize) -> Vec<Q> {
    let b = bernoulli(order);
    let mut out = vec![Q::zero(); order + 1];
    for n in 0..=order / 2 {
        let sign = if n % 2 == 0 { -Q::one() } else { Q::one() };
        let two = pow(&q(2), 2 * n as i32);
        out[2 * n] = sign * (two - q(2)) * &b[2 * n] / factorial(2 * n as u32);
    }
    out
}

/// `∫_0^∞ p^{3+z}/(p²+m²)² dp = (m^z/2) B(2 + z/2, −z/2)`
/// `= −m^z (1/z + ½) (πz/2)/sin(πz/2)`, times the angular factor.
///
/// Coefficients involving powers of π (and of `log m` when `m ≠ 1`) are
/// irrational; they are stored as close rational approximations.
pub fn bubble_dimreg_value(cfg: &ToyRuleConfig) -> RegElement {
    let order = cfg.z_truncation.max(0) as usize + 1;
    // g(z) = (πz/2)/sin(πz/2)
    let xs = x_over_sin(order);
    let half_pi = std::f64::consts::FRAC_PI_2;
    let g: Vec<Q> = xs
        .iter()
        .enumerate()
        .map(|(k, c)| {
            if c.is_zero() {
                Q::zero()
            } else {
                approximate(to_f64(c) * half_pi.powi(k as i32))
            }
        })
        .collect();
    // m^z = e^{z log m}
    let mz: Vec<Q> = if cfg.m.is_one() {
        let mut v = vec![Q::zero(); order + 1];
        v[0] = Q::one();
        v
    } else {
        let lm = to_f64(&cfg.m).ln();
        (0..=order)
            .map(|k| approximate(lm.powi(k as i32) / to_f64(&factorial(k as u32))))
            .collect()
    };
    let mut gm = vec![Q::zero(); order + 1];
    for (i, gi) in g.iter().enumerate() {
        for (j, mj) in mz.iter().enumerate() {
            if i + j <= order {
                gm[i + j] += gi * mj;
            }
        }
    }
    // −(1/z + ½)·gm
    let mut v = RegElement::zero();
    for (k, c) in gm.iter().enumerate() {
        v.add_term(k as i32 - 1, 0, -c.clone());
        v.add_term(k as i32, 0, -c / q(2));
    }
    v.truncate(cfg.z_truncation).scale(&cfg.angular_factor)
}

#[derive(Debug, Error)]
pub enum CharacterFileError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("character file schema violation: {0}")]
    Schema(String),
    #[error("unknown graph {0:?}")]
    UnknownGraph(String),
    #[error("grade cap mismatch: file has {file}, run uses {expected}")]
    CapMismatch { file: usize, expected: usize },
    #[error("value on 1 must be 1, found {0}")]
    UnitValue(String),
    #[error("value on {0} disagrees with the multiplicative extension")]
    Inconsistent(String),
    #[error("unknown map kind {0:?}")]
    Kind(String),
    #[error("series for {graph}: {source}")]
    Series {
        graph: String,
        #[source]
        source: SeriesError,
    },
    #[error(transparent)]
    Character(#[from] CharacterError),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterFile {
    pub grade_cap: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    pub values: Vec<ValueEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValueEntry {
    pub graph: String,
    pub series: Vec<SeriesItem>,
}

/// Parses and validates a character file against the registered corpus.
pub fn parse_character(h: &HopfAlgebra, text: &str) -> Result<LinMap, CharacterFileError> {
    let file: CharacterFile =
        serde_json::from_str(text).map_err(|e| CharacterFileError::Schema(e.to_string()))?;
    if file.grade_cap != h.grade_cap() {
        return Err(CharacterFileError::CapMismatch {
            file: file.grade_cap,
            expected: h.grade_cap(),
        });
    }
    let kind = match &file.kind {
        None => MapKind::Multiplicative,
        Some(k) => MapKind::parse(k).ok_or_else(|| CharacterFileError::Kind(k.clone()))?,
    };
    let mut entries: Vec<(Monomial, RegElement, String)> = Vec::new();
    for e in &file.values {
        let mono = h.parse_monomial(&e.graph).map_err(|err| match err {
            HopfError::UnknownName(n) => CharacterFileError::UnknownGraph(n),
            other => CharacterFileError::Character(other.into()),
        })?;
        let value = RegElement::from_series(&e.series).map_err(|source| CharacterFileError::Series {
            graph: e.graph.clone(),
            source,
        })?;
        entries.push((mono, value, e.graph.clone()));
    }
    if kind != MapKind::Multiplicative {
        let mut out = LinMap::zero(file.grade_cap, kind);
        for (m, v, _) in entries {
            out.set(m, v);
        }
        return Ok(out);
    }
    let mut gens = BTreeMap::new();
    for (m, v, _) in &entries {
        if m.is_unit() && v != &RegElement::one() {
            return Err(CharacterFileError::UnitValue(v.to_string()));
        }
        if m.is_generator() {
            gens.insert(m.keys()[0].clone(), v.clone());
        }
    }
    let phi = character_from_generators(h, &gens)?;
    for (m, v, name) in &entries {
        if !m.is_unit() && !m.is_generator() && !phi.get(m).agrees_with(v) {
            return Err(CharacterFileError::Inconsistent(name.clone()));
        }
    }
    Ok(phi)
}

pub fn load_character(h: &HopfAlgebra, path: &Path) -> Result<LinMap, CharacterFileError> {
    let text = std::fs::read_to_string(path).map_err(|e| CharacterFileError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_character(h, &text)
}

/// File form of a map: generator values for characters (zeros included),
/// every nonzero basis value otherwise.
pub fn character_file(h: &HopfAlgebra, f: &LinMap) -> CharacterFile {
    let values = if f.kind == MapKind::Multiplicative && is_character(h, f) {
        h.generators_within_cap()
            .iter()
            .map(|g| {
                let m = Monomial::generator(g.key.clone());
                ValueEntry {
                    graph: h.render_monomial(&m),
                    series: f.get(&m).to_series(),
                }
            })
            .collect()
    } else {
        h.basis()
            .iter()
            .filter(|m| !f.get(m).is_zero())
            .map(|m| ValueEntry {
                graph: h.render_monomial(m),
                series: f.get(m).to_series(),
            })
            .collect()
    };
    let kind = match f.kind {
        MapKind::Multiplicative if is_character(h, f) => None,
        MapKind::Multiplicative => Some(MapKind::General.as_str().to_string()),
        k => Some(k.as_str().to_string()),
    };
    CharacterFile {
        grade_cap: f.grade_cap,
        kind,
        values,
    }
}

pub fn character_to_json(h: &HopfAlgebra, f: &LinMap) -> String {
    serde_json::to_string_pretty(&character_file(h, f)).expect("serializable") + "\n"
}

/// A character equal to `value` on `B1` and zero on every other generator.
pub fn bubble_character(h: &HopfAlgebra, value: RegElement) -> Result<Character, CharacterError> {
    let b1 = h.key_by_name("B1")?;
    let mut assign = BTreeMap::new();
    for g in h.generators_within_cap() {
        assign.insert(g.key.clone(), RegElement::zero());
    }
    assign.insert(b1, value);
    character_from_generators(h, &assign)
}

/// Absolute value of the largest coefficient; used in reports.
pub fn leading_pole(v: &RegElement) -> Q {
    v.terms()
        .iter()
        .next()
        .map(|(_, c)| c.abs())
        .unwrap_or_else(Q::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_expansion() {
        let v = bubble_cutoff_value(&ToyRuleConfig::default());
        assert_eq!(v.coefficient(0, 1), q(-1));
        assert_eq!(v.coefficient(0, 0), qf(-1, 2));
        assert_eq!(v.coefficient(2, 0), q(1));
        assert_eq!(v.coefficient(4, 0), qf(-3, 4));
        assert_eq!(v.coefficient(6, 0), qf(2, 3));
        assert_eq!(v.order(), Some(6));
        let scaled = bubble_cutoff_value(&ToyRuleConfig {
            angular_factor: q(3),
            ..Default::default()
        });
        assert_eq!(scaled.coefficient(0, 1), q(-3));
    }

    #[test]
    fn cutoff_closed_form_for_other_masses() {
        let cfg = ToyRuleConfig {
            m: qf(3, 2),
            z_truncation: 12,
            ..Default::default()
        };
        let v = bubble_cutoff_value(&cfg);
        let (lambda, m) = (50.0f64, 1.5f64);
        let closed = 0.5 * (1.0 + lambda * lambda / (m * m)).ln() + m * m / (2.0 * (lambda * lambda + m * m)) - 0.5;
        let approx = v.evaluate(1.0 / lambda, m);
        assert!((approx - closed).abs() < 1e-12 * closed.abs());
    }

    #[test]
    fn bernoulli_numbers() {
        let b = bernoulli(8);
        assert_eq!(b[1], qf(-1, 2));
        assert_eq!(b[2], qf(1, 6));
        assert_eq!(b[4], qf(-1, 30));
        assert_eq!(b[6], qf(1, 42));
        assert_eq!(b[3], q(0));
        let xs = x_over_sin(4);
        assert_eq!(xs[0], q(1));
        assert_eq!(xs[2], qf(1, 6));
        assert_eq!(xs[4], qf(7, 360));
    }

    #[test]
    fn dimreg_expansion() {
        let v = bubble_dimreg_value(&ToyRuleConfig::default());
        assert_eq!(v.coefficient(-1, 0), q(-1));
        assert_eq!(v.coefficient(0, 0), qf(-1, 2));
        assert_eq!(v.y_degree(), 0);
        // z^1 coefficient: −(π/2)²/6
        let c1 = to_f64(&v.coefficient(1, 0));
        assert!((c1 + std::f64::consts::PI.powi(2) / 24.0).abs() < 1e-15);
        let scaled = bubble_dimreg_value(&ToyRuleConfig {
            angular_factor: q(2),
            ..Default::default()
        });
        assert_eq!(scaled.coefficient(-1, 0), q(-2));
    }

    #[test]
    fn log_and_pole_coefficients_match() {
        let cfg = ToyRuleConfig::default();
        let mc = bubble_cutoff_value(&cfg);
        let dr = bubble_dimreg_value(&cfg);
        // log Λ ↔ 1/z: the y-coefficient equals the residue
        assert_eq!(mc.coefficient(0, 1), dr.coefficient(-1, 0));
    }

    #[test]
    fn character_file_roundtrip() {
        let h = HopfAlgebra::with_corpus(2);
        let phi = bubble_character(&h, bubble_cutoff_value(&ToyRuleConfig::default())).unwrap();
        let text = character_to_json(&h, &phi);
        let back = parse_character(&h, &text).unwrap();
        assert_eq!(back, phi);
    }

    #[test]
    fn character_file_errors() {
        let h = HopfAlgebra::with_corpus(1);
        let ok = r#"{"grade_cap":1,"values":[
            {"graph":"B1","series":[{"z":-1,"y":0,"c":"2"}]},
            {"graph":"T1","series":[]},{"graph":"I2","series":[]},{"graph":"I4","series":[]}]}"#;
        assert!(parse_character(&h, ok).is_ok());
        let missing = r#"{"grade_cap":1,"values":[{"graph":"B1","series":[]}]}"#;
        let err = parse_character(&h, missing).unwrap_err().to_string();
        assert!(err.contains("T1") && err.contains("I2"), "{err}");
        let unknown = r#"{"grade_cap":1,"values":[{"graph":"Q9","series":[]}]}"#;
        assert!(matches!(
            parse_character(&h, unknown),
            Err(CharacterFileError::UnknownGraph(_))
        ));
        let unit = r#"{"grade_cap":1,"values":[{"graph":"1","series":[{"z":0,"y":0,"c":"2"}]}]}"#;
        assert!(matches!(
            parse_character(&h, unit),
            Err(CharacterFileError::UnitValue(_))
        ));
        let cap = r#"{"grade_cap":3,"values":[]}"#;
        assert!(matches!(
            parse_character(&h, cap),
            Err(CharacterFileError::CapMismatch { file: 3, expected: 1 })
        ));
        assert!(matches!(
            parse_character(&h, "{\"values\": 3}"),
            Err(CharacterFileError::Schema(_))
        ));
    }
}
