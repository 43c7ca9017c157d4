//! The invariant suite run by `renorm selftest`.

use crate::birkhoff::{birkhoff_decompose, verify_decomposition};
use crate::characters::{
    character_from_generators, is_infinitesimal, CharacterError, Character,
};
use crate::connection::{equivariance_check, gauge_check, Direction};
use crate::graphs::{canonical_form, corpus, GraphError};
use crate::hopf::{HopfAlgebra, HopfElement, HopfError, Monomial};
use crate::rational::{q, Q};
use crate::regalg::RegElement;
use crate::rgflow::{at_zero, beta, beta_dr, beta_from_flow, rho, z_times_log_grading, RgError, Sigma};
use crate::sample::{random_character, random_reg};
use crate::toyrules::{bubble_character, bubble_cutoff_value, bubble_dimreg_value, ToyRuleConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SelftestError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Hopf(#[from] HopfError),
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error(transparent)]
    Flow(#[from] RgError),
}

/// Deliberate faults, used to check that the suite notices them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corruption {
    /// Adds the generator itself to the antipode of every grade-2 generator.
    Antipode,
}

#[derive(Debug, Clone)]
pub struct SelftestOptions {
    pub seed: u64,
    pub grade_cap: usize,
    pub rota_baxter_pairs: usize,
    pub characters: usize,
    pub corrupt: Option<Corruption>,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        SelftestOptions {
            seed: crate::sample::DEFAULT_SEED,
            grade_cap: 3,
            rota_baxter_pairs: 1000,
            characters: 20,
            corrupt: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct InvariantResult {
    pub name: &'static str,
    pub checks: usize,
    pub passed: bool,
    /// First counterexample, if any.
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct SelftestReport {
    pub seed: u64,
    pub grade_cap: usize,
    pub results: Vec<InvariantResult>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn first_failure(&self) -> Option<&InvariantResult> {
        self.results.iter().find(|r| !r.passed)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "selftest: seed {}, grade cap {}", self.seed, self.grade_cap);
        for r in &self.results {
            let status = if r.passed { "ok  " } else { "FAIL" };
            let _ = write!(out, "{status} {:<22} {:>6} checks", r.name, r.checks);
            if let Some(d) = &r.detail {
                let _ = write!(out, "  ({d})");
            }
            out.push('\n');
        }
        match self.first_failure() {
            None => out.push_str("result: all invariants hold\n"),
            Some(r) => {
                let _ = writeln!(out, "result: first failing invariant: {}", r.name);
            }
        }
        out
    }
}

/// Accumulates pass/fail counts for one invariant, keeping the first failure.
struct Tally {
    name: &'static str,
    checks: usize,
    detail: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            checks: 0,
            detail: None,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.detail.is_none() {
            self.detail = Some(what());
        }
    }

    fn finish(self) -> InvariantResult {
        InvariantResult {
            name: self.name,
            checks: self.checks,
            passed: self.detail.is_none(),
            detail: self.detail,
        }
    }
}

pub fn run(opts: &SelftestOptions) -> Result<SelftestReport, SelftestError> {
    let h = HopfAlgebra::with_corpus(opts.grade_cap);
    let basis = h.basis();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut results = vec![
        canonical_forms()?,
        degree_lemma()?,
    ];

    let mut coassoc = Tally::new("coassociativity");
    let mut counit = Tally::new("counit axiom");
    let mut antipode = Tally::new("antipode axiom");
    for m in &basis {
        let name = || h.render_monomial(m);
        coassoc.check(h.check_coassociativity(m)?, name);
        counit.check(h.check_counit(m)?, name);
        let ok = match opts.corrupt {
            None => h.check_antipode(m)?,
            Some(Corruption::Antipode) => h.check_antipode_with(m, |x| corrupted_antipode(&h, x))?,
        };
        antipode.check(ok, name);
    }
    results.extend([coassoc.finish(), counit.finish(), antipode.finish()]);

    let mut rb = Tally::new("rota-baxter");
    for _ in 0..opts.rota_baxter_pairs {
        let x = random_reg(&mut rng, 4, 4, 6, 8);
        let y = random_reg(&mut rng, 4, 4, 6, 8);
        let (rx, ry) = (x.pi_minus(), y.pi_minus());
        let lhs = rx.mul(&ry).add(&x.mul(&y).pi_minus());
        let rhs = x.mul(&ry).pi_minus().add(&rx.mul(&y).pi_minus());
        rb.check(lhs.agrees_with(&rhs), || format!("x = {x}, y = {y}"));
    }
    results.push(rb.finish());

    let mut birkhoff = Tally::new("birkhoff decomposition");
    worked_example(&mut birkhoff)?;
    let mut betas = Tally::new("beta identities");
    let mut inverse = Tally::new("inverse flow");
    for _ in 0..opts.characters {
        let phi = random_character(&h, &mut rng);
        let r = birkhoff_decompose(&h, &phi)?;
        let rep = verify_decomposition(&h, &phi, &r)?;
        birkhoff.check(rep.passed(), || rep.failures.join("; "));

        let b = beta_dr(&h, &phi)?;
        let zy = z_times_log_grading(&h, &phi)?;
        betas.check(first_diff(&h, &b, &zy, &basis).is_none(), || {
            format!("beta_dr vs z*(phi^-1 * Y phi) at {}", first_diff(&h, &b, &zy, &basis).unwrap_or_default())
        });
        for sigma in [Sigma::Dr, Sigma::Mc] {
            let direct = beta(&h, &phi, sigma)?;
            let flowed = beta_from_flow(&h, &phi, sigma)?;
            betas.check(is_infinitesimal(&h, &direct), || format!("beta_{} not infinitesimal", sigma.as_str()));
            betas.check(first_diff(&h, &direct, &flowed, &basis).is_none(), || {
                format!("beta_{} vs derivative of the flow", sigma.as_str())
            });
        }

        let psi = at_zero(&rho(&h, &b, Sigma::Dr)?);
        inverse.check(first_diff(&h, &psi, &phi, &basis).is_none(), || {
            format!("rho_dr(beta_dr(phi)) at s=0 differs at {}", first_diff(&h, &psi, &phi, &basis).unwrap_or_default())
        });
    }
    results.extend([birkhoff.finish(), betas.finish(), inverse.finish()]);

    let (dr, mc) = toy_pair(2)?;
    let h2 = HopfAlgebra::with_corpus(2);
    let mut gauge = Tally::new("gauge identities");
    for dir in Direction::all() {
        let rep = gauge_check(&h2, &dr, &mc, dir)?;
        for e in &rep.entries {
            gauge.check(e.equal, || format!("{} at {}: {} vs {}", e.identity, e.monomial, e.lhs, e.rhs));
        }
    }
    results.push(gauge.finish());

    let mut equi = Tally::new("equivariance");
    for (phi, sigma) in [(&dr, Sigma::Dr), (&mc, Sigma::Mc)] {
        for u in [q(2), Q::new(1.into(), 3.into()), q(-5)] {
            let rep = equivariance_check(&h2, phi, sigma, &u)?;
            equi.check(rep.passed(), || {
                format!("sigma {} u {}: {}", rep.sigma, rep.u, rep.failures.join("; "))
            });
        }
    }
    results.push(equi.finish());

    Ok(SelftestReport {
        seed: opts.seed,
        grade_cap: opts.grade_cap,
        results,
    })
}

/// The bubble characters of the two regularizations, zero on every other
/// generator.
pub fn toy_pair(grade_cap: usize) -> Result<(Character, Character), CharacterError> {
    let h = HopfAlgebra::with_corpus(grade_cap);
    let cfg = ToyRuleConfig::default();
    Ok((
        bubble_character(&h, bubble_dimreg_value(&cfg))?,
        bubble_character(&h, bubble_cutoff_value(&cfg))?,
    ))
}

fn corrupted_antipode(h: &HopfAlgebra, x: &Monomial) -> Result<HopfElement, HopfError> {
    let s = h.antipode_monomial(x)?;
    if x.is_generator() && x.grade() == 2 {
        Ok(s.add(&HopfElement::monomial(x.clone())))
    } else {
        Ok(s)
    }
}

fn first_diff(h: &HopfAlgebra, a: &Character, b: &Character, basis: &[Monomial]) -> Option<String> {
    a.first_disagreement(b, basis).map(|m| h.render_monomial(&m))
}

fn canonical_forms() -> Result<InvariantResult, SelftestError> {
    let mut t = Tally::new("canonical forms");
    for (name, g) in corpus::all() {
        let key = canonical_form(&g)?;
        let n = g.vertex_count();
        let reversed: Vec<usize> = (0..n).rev().collect();
        let rotated: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        for perm in [reversed, rotated] {
            t.check(canonical_form(&g.relabel(&perm))? == key, || format!("{name} relabelled"));
        }
        t.check(canonical_form(&key.to_graph())? == key, || format!("{name} round trip"));
    }
    Ok(t.finish())
}

fn degree_lemma() -> Result<InvariantResult, SelftestError> {
    let mut t = Tally::new("degree lemma");
    for (name, g) in corpus::all() {
        for sub in g.admissible_subgraphs() {
            let quotient = g.contract(&sub)?;
            let (whole, part, rest) = (
                g.superficial_degree(),
                sub.superficial_degree(&g),
                quotient.superficial_degree(),
            );
            t.check(whole == part + rest, || {
                format!("{name} edges {:?}: {whole} != {part} + {rest}", sub.edges)
            });
        }
    }
    Ok(t.finish())
}

/// Birkhoff on `φ(B1) = a/z`, `φ(B2) = b/z² + c/z + d`: the counterterm of B2
/// must be `−(b − 2a²)/z² − c/z`. Both sides are polynomials of degree ≤ 2 in
/// `a` and ≤ 1 in `b`, `c`, `d`, so agreement on a 3×2×2×2 grid is an identity.
fn worked_example(t: &mut Tally) -> Result<(), SelftestError> {
    let h = HopfAlgebra::with_corpus(2);
    let b1 = h.key_by_name("B1")?;
    let b2 = h.key_by_name("B2")?;
    let b2m = Monomial::generator(b2.clone());
    for a in [q(0), q(1), q(-3)] {
        for b in [q(0), Q::new(5.into(), 2.into())] {
            for c in [q(0), q(-7)] {
                for d in [q(0), q(4)] {
                    let mut assign = BTreeMap::new();
                    for g in h.generators_within_cap() {
                        assign.insert(g.key.clone(), RegElement::zero());
                    }
                    assign.insert(b1.clone(), RegElement::monomial(-1, 0, a.clone()));
                    let v = RegElement::from_terms(
                        [((-2, 0), b.clone()), ((-1, 0), c.clone()), ((0, 0), d.clone())],
                        None,
                    );
                    assign.insert(b2.clone(), v);
                    let phi = character_from_generators(&h, &assign)?;
                    let r = birkhoff_decompose(&h, &phi)?;
                    let two_a2 = q(2) * &a * &a;
                    let expected = RegElement::from_terms(
                        [((-2, 0), -(&b - &two_a2)), ((-1, 0), -c.clone())],
                        None,
                    );
                    let got = r.phi_minus.get(&b2m);
                    t.check(got == expected, || {
                        format!("worked example a={a} b={b} c={c}: counterterm {got}")
                    });
                }
            }
        }
    }
    Ok(())
}
