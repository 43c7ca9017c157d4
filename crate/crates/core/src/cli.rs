//! Command-line front end. Exit codes: 0 success, 1 a verification failed,
//! 2 bad input.

use crate::birkhoff::{birkhoff_decompose, check_locality, verify_decomposition};
use crate::characters::{Character, LinMap, MapKind};
use crate::connection::{equivariance_check, gauge_check, Direction, GaugeReport};
use crate::graphs::load_graph_file;
use crate::hopf::{HopfAlgebra, HopfElement, DEFAULT_GRADE_CAP};
use crate::rational::{format_q, parse_q, Q};
use crate::regalg::DEFAULT_Z_ORDER;
use crate::rgflow::{act, at_zero, beta, flow_to_json, render_flow, rho, Sigma};
use crate::sample::seed_from_env;
use crate::selftest::{self, Corruption, SelftestOptions};
use crate::toyrules::{
    bubble_character, bubble_cutoff_value, bubble_dimreg_value, character_file,
    character_to_json, load_character, ToyRuleConfig,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Parser)]
#[command(name = "renorm", version, about = "Exact Hopf-algebraic renormalization toolkit")]
pub struct Cli {
    /// Graph file (JSON) registered on top of the built-in corpus.
    #[arg(long, global = true)]
    pub graphs: Option<PathBuf>,
    /// Character file (JSON).
    #[arg(long, global = true)]
    pub character: Option<PathBuf>,
    /// Largest loop number kept in the Hopf algebra.
    #[arg(long, global = true, default_value_t = DEFAULT_GRADE_CAP)]
    pub grade_cap: usize,
    /// z truncation order of the built-in one-loop values.
    #[arg(long, global = true, default_value_t = DEFAULT_Z_ORDER)]
    pub z_order: i32,
    /// Mass, as a rational.
    #[arg(long, global = true, default_value = "1")]
    pub m: String,
    /// Angular/volume factor of one-loop values, as a rational.
    #[arg(long, global = true, default_value = "1")]
    pub angular: String,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SigmaArg {
    Dr,
    Mc,
}

impl From<SigmaArg> for Sigma {
    fn from(s: SigmaArg) -> Self {
        match s {
            SigmaArg::Dr => Sigma::Dr,
            SigmaArg::Mc => Sigma::Mc,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CorruptArg {
    Antipode,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate graphs and check degree additivity on their subgraphs.
    GraphCheck,
    /// Coproduct of a generator or monomial.
    Coproduct {
        #[arg(long)]
        graph: String,
    },
    /// Antipode of a generator or monomial, with the antipode axiom checked.
    Antipode {
        #[arg(long)]
        graph: String,
    },
    /// Birkhoff decomposition of a character.
    Birkhoff,
    /// Geometric beta function of a character.
    Beta {
        #[arg(long, value_enum, default_value = "dr")]
        sigma: SigmaArg,
    },
    /// Rebuild the flow of a character from its beta function.
    RhoCheck {
        #[arg(long, value_enum, default_value = "dr")]
        sigma: SigmaArg,
    },
    /// Gauge identities between a dimreg-type and a cutoff-type character.
    GaugeCheck {
        #[arg(long)]
        dr: Option<PathBuf>,
        #[arg(long)]
        mc: Option<PathBuf>,
    },
    /// Equivariance of the connection under rescaling by `u`.
    Equivariance {
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long, value_enum, default_value = "dr")]
        sigma: SigmaArg,
    },
    /// Write the one-loop bubble characters of both regularizations.
    ToyrulesEmit,
    /// Run the invariant suite on the built-in corpus.
    Selftest {
        /// Inject a deliberate fault.
        #[arg(long, value_enum)]
        corrupt: Option<CorruptArg>,
        /// Random characters per randomized invariant.
        #[arg(long, default_value_t = SelftestOptions::default().characters)]
        samples: usize,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Verification(_) => 1,
        }
    }
}

fn input<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

fn failed<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Verification(e.to_string())
}

/// Parsed global configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub grade_cap: usize,
    pub toy: ToyRuleConfig,
    pub format: Format,
    pub out_dir: PathBuf,
}

impl RunConfig {
    fn from_cli(cli: &Cli, default_format: Format) -> Result<Self, CliError> {
        if cli.grade_cap < 1 {
            return Err(input("--grade-cap must be at least 1"));
        }
        if cli.z_order < 1 {
            return Err(input("--z-order must be at least 1"));
        }
        let rational = |flag: &str, s: &str| {
            parse_q(s).ok_or_else(|| input(format!("--{flag}: not a rational number: {s:?}")))
        };
        let m = rational("m", &cli.m)?;
        if m <= Q::from_integer(0.into()) {
            return Err(input("--m must be positive"));
        }
        Ok(RunConfig {
            grade_cap: cli.grade_cap,
            toy: ToyRuleConfig {
                m,
                angular_factor: rational("angular", &cli.angular)?,
                z_truncation: cli.z_order,
            },
            format: cli.format.unwrap_or(default_format),
            out_dir: cli.out_dir.clone().unwrap_or_else(|| PathBuf::from(".")),
        })
    }
}

/// Parses `args` (including the program name), runs the command and writes
/// its report to `out`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok(Outcome { report, passed }) => {
            let _ = out.write_all(report.as_bytes());
            if passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "renorm: {e}");
            e.exit_code()
        }
    }
}

struct Outcome {
    report: String,
    passed: bool,
}

impl Outcome {
    fn ok(report: String) -> Self {
        Outcome {
            report,
            passed: true,
        }
    }
}

fn json_text(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn algebra(cli: &Cli, grade_cap: usize) -> Result<HopfAlgebra, CliError> {
    let h = HopfAlgebra::with_corpus(grade_cap);
    if let Some(path) = &cli.graphs {
        for (name, g) in load_graph_file(path).map_err(input)? {
            h.register(&name, &g)
                .map_err(|e| input(format!("graph {name:?}: {e}")))?;
        }
    }
    Ok(h)
}

fn character_arg(h: &HopfAlgebra, path: Option<&Path>) -> Result<Character, CliError> {
    let path = path.ok_or_else(|| input("--character is required for this command"))?;
    load_character(h, path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn write_file(dir: &Path, name: &str, text: &str) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| input(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, text).map_err(|e| input(format!("{}: {e}", path.display())))?;
    Ok(path)
}

fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let default_format = match cli.command {
        Command::GaugeCheck { .. } => Format::Json,
        _ => Format::Text,
    };
    let cfg = RunConfig::from_cli(cli, default_format)?;
    let json = cfg.format == Format::Json;
    match &cli.command {
        Command::GraphCheck => graph_check(cli, &cfg),
        Command::Coproduct { graph } => {
            let h = algebra(cli, cfg.grade_cap)?;
            let m = h.parse_monomial(graph).map_err(input)?;
            let t = h.coproduct_monomial(&m).map_err(input)?;
            let text = h.render_tensor(&t);
            Ok(Outcome::ok(if json {
                let terms: Vec<_> = t
                    .iter()
                    .map(|((a, b), c)| {
                        json!({"left": h.render_monomial(a), "right": h.render_monomial(b), "c": format_q(c)})
                    })
                    .collect();
                json_text(&json!({"graph": graph, "coproduct": text, "terms": terms}))
            } else {
                text + "\n"
            }))
        }
        Command::Antipode { graph } => {
            let h = algebra(cli, cfg.grade_cap)?;
            let m = h.parse_monomial(graph).map_err(input)?;
            let s = h.antipode(&HopfElement::monomial(m.clone())).map_err(input)?;
            let ok = h.check_antipode(&m).map_err(input)?;
            let text = h.render(&s);
            let report = if json {
                json_text(&json!({"graph": graph, "antipode": text, "axiom_holds": ok}))
            } else {
                format!(
                    "{text}\nantipode axiom: {}\n",
                    if ok { "holds" } else { "FAILS" }
                )
            };
            Ok(Outcome { report, passed: ok })
        }
        Command::Birkhoff => birkhoff(cli, &cfg),
        Command::Beta { sigma } => {
            let h = algebra(cli, cfg.grade_cap)?;
            let phi = character_arg(&h, cli.character.as_deref())?;
            let sigma = Sigma::from(*sigma);
            let b = beta(&h, &phi, sigma).map_err(failed)?;
            let path = act(&phi, sigma);
            let basis = h.basis();
            let report = if json {
                json_text(&json!({
                    "sigma": sigma.as_str(),
                    "beta": character_file(&h, &b),
                    "flow": flow_to_json(&h, &path, &basis),
                }))
            } else {
                let mut s = format!("beta_{}:\n", sigma.as_str());
                for m in &basis {
                    let _ = writeln!(s, "  {}: {}", h.render_monomial(m), b.get(m));
                }
                let _ = writeln!(s, "flow sigma_{}(phi):", sigma.as_str());
                s.push_str(&render_flow(&h, &path, &basis));
                s
            };
            Ok(Outcome::ok(report))
        }
        Command::RhoCheck { sigma } => rho_check(cli, &cfg, (*sigma).into()),
        Command::GaugeCheck { dr, mc } => gauge(cli, &cfg, dr.as_deref(), mc.as_deref()),
        Command::Equivariance { u, sigma } => {
            let h = algebra(cli, cfg.grade_cap)?;
            let phi = character_arg(&h, cli.character.as_deref())?;
            let u = parse_q(u).ok_or_else(|| input(format!("--u: not a rational number: {u:?}")))?;
            let rep = equivariance_check(&h, &phi, (*sigma).into(), &u).map_err(input)?;
            let report = if json {
                json_text(&serde_json::to_value(&rep).expect("serializable"))
            } else {
                let mut s = format!(
                    "equivariance sigma={} u={}: structural {}, max numeric error {:.3e} (tolerance {:.0e})\n",
                    rep.sigma,
                    rep.u,
                    if rep.structural { "holds" } else { "FAILS" },
                    rep.numeric_max_rel_err,
                    rep.tolerance
                );
                for f in &rep.failures {
                    let _ = writeln!(s, "  {f}");
                }
                s
            };
            Ok(Outcome {
                report,
                passed: rep.passed(),
            })
        }
        Command::ToyrulesEmit => {
            let h = algebra(cli, cfg.grade_cap)?;
            let dr = bubble_character(&h, bubble_dimreg_value(&cfg.toy)).map_err(input)?;
            let mc = bubble_character(&h, bubble_cutoff_value(&cfg.toy)).map_err(input)?;
            let p1 = write_file(&cfg.out_dir, "bubble_dr.json", &character_to_json(&h, &dr))?;
            let p2 = write_file(&cfg.out_dir, "bubble_mc.json", &character_to_json(&h, &mc))?;
            Ok(Outcome::ok(format!("wrote {}\nwrote {}\n", p1.display(), p2.display())))
        }
        Command::Selftest { corrupt, samples } => {
            let opts = SelftestOptions {
                seed: seed_from_env(),
                grade_cap: cfg.grade_cap,
                characters: *samples,
                corrupt: corrupt.map(|CorruptArg::Antipode| Corruption::Antipode),
                ..Default::default()
            };
            let rep = selftest::run(&opts).map_err(failed)?;
            let report = if json {
                json_text(&serde_json::to_value(&rep).expect("serializable"))
            } else {
                rep.render_text()
            };
            Ok(Outcome {
                report,
                passed: rep.passed(),
            })
        }
    }
}

fn graph_check(cli: &Cli, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let graphs = match &cli.graphs {
        Some(path) => load_graph_file(path).map_err(input)?,
        None => crate::graphs::corpus::all()
            .into_iter()
            .map(|(n, g)| (n.to_string(), g))
            .collect(),
    };
    let h = algebra(cli, cfg.grade_cap)?;
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (name, g) in &graphs {
        g.validate_generator()
            .map_err(|e| input(format!("graph {name:?}: {e}")))?;
        let subs = g.admissible_subgraphs();
        for sub in &subs {
            let quotient = g.contract(sub).map_err(input)?;
            let total = sub.superficial_degree(g) + quotient.superficial_degree();
            if total != g.superficial_degree() {
                failures.push(format!("{name}: degree not additive on edges {:?}", sub.edges));
            }
        }
        let key = h.key_of(g).map_err(input)?;
        rows.push(json!({
            "name": name,
            "vertices": g.vertex_count(),
            "internal_edges": g.internal_edge_count(),
            "external_legs": g.external_leg_count(),
            "loops": g.loop_number(),
            "degree": g.superficial_degree(),
            "admissible_subgraphs": subs.len(),
            "canonical": key.digest(),
            "registered_as": h.name_of(&key),
        }));
    }
    let report = if cfg.format == Format::Json {
        json_text(&json!({"graphs": rows, "failures": failures}))
    } else {
        let mut s = String::new();
        for r in &rows {
            let _ = writeln!(
                s,
                "{}: loops {}, internal edges {}, legs {}, degree {}, admissible subgraphs {}, key {}",
                r["name"].as_str().unwrap_or_default(),
                r["loops"],
                r["internal_edges"],
                r["external_legs"],
                r["degree"],
                r["admissible_subgraphs"],
                r["canonical"].as_str().unwrap_or_default()
            );
        }
        for f in &failures {
            let _ = writeln!(s, "FAIL {f}");
        }
        s
    };
    Ok(Outcome {
        report,
        passed: failures.is_empty(),
    })
}

fn birkhoff(cli: &Cli, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let h = algebra(cli, cfg.grade_cap)?;
    let phi = character_arg(&h, cli.character.as_deref())?;
    let r = birkhoff_decompose(&h, &phi).map_err(failed)?;
    let rep = verify_decomposition(&h, &phi, &r).map_err(failed)?;
    let locality = check_locality(&h, &phi).map_err(failed)?;
    let mut prepared: LinMap = LinMap::zero(phi.grade_cap, MapKind::General);
    for (m, v) in &r.prepared {
        prepared.set(m.clone(), v.clone());
    }
    let report_json = json!({"decomposition": rep, "locality": locality});
    let dir = &cfg.out_dir;
    let files = [
        write_file(dir, "phi_minus.json", &character_to_json(&h, &r.phi_minus))?,
        write_file(dir, "phi_plus.json", &character_to_json(&h, &r.phi_plus))?,
        write_file(dir, "prepared.json", &character_to_json(&h, &prepared))?,
        write_file(dir, "report.json", &json_text(&report_json))?,
    ];
    let report = if cfg.format == Format::Json {
        json_text(&report_json)
    } else {
        let mut s = String::new();
        for m in h.basis().iter().filter(|m| m.is_generator()) {
            let _ = writeln!(
                s,
                "{}: minus {} | plus {}",
                h.render_monomial(m),
                r.phi_minus.get(m),
                r.phi_plus.get(m)
            );
        }
        let flag = |b: bool| if b { "holds" } else { "FAILS" };
        let _ = writeln!(s, "reconstruction: {}", flag(rep.reconstruction));
        let _ = writeln!(s, "counterterms singular: {}", flag(rep.minus_singular));
        let _ = writeln!(s, "renormalized values regular: {}", flag(rep.plus_regular));
        for f in &rep.failures {
            let _ = writeln!(s, "  {f}");
        }
        let _ = writeln!(
            s,
            "locality ({}): {}",
            if locality.dimreg_type { "dimreg-type" } else { "not dimreg-type" },
            flag(locality.passed())
        );
        for p in &files {
            let _ = writeln!(s, "wrote {}", p.display());
        }
        s
    };
    // Locality is a property of the input, not of the decomposition.
    let passed = rep.passed();
    Ok(Outcome { report, passed })
}

fn rho_check(cli: &Cli, cfg: &RunConfig, sigma: Sigma) -> Result<Outcome, CliError> {
    let h = algebra(cli, cfg.grade_cap)?;
    let phi = character_arg(&h, cli.character.as_deref())?;
    let basis = h.basis();
    let alpha = beta(&h, &phi, sigma).map_err(failed)?;
    let psi = rho(&h, &alpha, sigma).map_err(failed)?;
    let at0 = at_zero(&psi);
    let flow = act(&phi, sigma);
    let mismatch_at_zero = at0.first_disagreement(&phi, &basis).map(|m| h.render_monomial(&m));
    let mismatch_flow = psi.first_disagreement(&flow, &basis).map(|m| h.render_monomial(&m));
    let passed = mismatch_at_zero.is_none() && mismatch_flow.is_none();
    let report = if cfg.format == Format::Json {
        json_text(&json!({
            "sigma": sigma.as_str(),
            "equal_at_zero": mismatch_at_zero.is_none(),
            "equal_as_flow": mismatch_flow.is_none(),
            "first_mismatch_at_zero": mismatch_at_zero,
            "first_mismatch_flow": mismatch_flow,
            "flow": flow_to_json(&h, &psi, &basis),
        }))
    } else {
        let mut s = format!("rho_{} of beta_{}:\n", sigma.as_str(), sigma.as_str());
        s.push_str(&render_flow(&h, &psi, &basis));
        let _ = writeln!(
            s,
            "equal to phi at s=0: {}",
            mismatch_at_zero.as_deref().map_or("yes".to_string(), |m| format!("NO (first at {m})"))
        );
        let _ = writeln!(
            s,
            "equal to the flow of phi: {}",
            mismatch_flow.as_deref().map_or("yes".to_string(), |m| format!("NO (first at {m})"))
        );
        s
    };
    Ok(Outcome { report, passed })
}

fn gauge(cli: &Cli, cfg: &RunConfig, dr: Option<&Path>, mc: Option<&Path>) -> Result<Outcome, CliError> {
    let h = algebra(cli, cfg.grade_cap)?;
    let load = |p: Option<&Path>, fallback: fn(&ToyRuleConfig) -> crate::regalg::RegElement| match p {
        Some(p) => load_character(&h, p).map_err(|e| input(format!("{}: {e}", p.display()))),
        None => bubble_character(&h, fallback(&cfg.toy)).map_err(input),
    };
    let f = load(dr, bubble_dimreg_value)?;
    let g = load(mc, bubble_cutoff_value)?;
    let mut all = GaugeReport { entries: Vec::new() };
    for dir in Direction::all() {
        all.entries
            .extend(gauge_check(&h, &f, &g, dir).map_err(failed)?.entries);
    }
    let report = if cfg.format == Format::Json {
        json_text(&serde_json::to_value(&all.entries).expect("serializable"))
    } else {
        let total = all.entries.len();
        let bad: Vec<_> = all.failures().collect();
        let mut s = format!("gauge identities: {} of {total} hold\n", total - bad.len());
        for e in bad {
            let _ = writeln!(s, "FAIL {} at {}: {} vs {}", e.identity, e.monomial, e.lhs, e.rhs);
        }
        s
    };
    Ok(Outcome {
        passed: all.passed(),
        report,
    })
}
