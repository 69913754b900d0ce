//! The `hde` command line. Graph arguments are file paths in the text
//! format, or builtin specs such as `path:4`, `2*complete:1`, `vee` when no
//! such file exists.

use crate::bounds::{
    alternating_sum, brute_force_upper, closed_form_paths, coeff_vector, hde_exact, hde_lower_chordal, hde_upper, ln_big,
    trivial_upper_bounds, HdeResult, HdeValue, Primal,
};
use crate::certificate::{
    builtin_p4_certificate, exhaustive_soundness, extract_certificate, verify_certificate, Certificate,
};
use crate::constructions::{build_TN_p4, build_Tn_upper, build_tightness_target, filter_to_series_parallel, ProjectedTarget};
use crate::error::{Error, Result};
use crate::graph::{builtin, parse_builtin_spec, Graph, VertexSet};
use crate::hom::{count_homs, enumerate_homs};
use crate::mrf::{coefficient_entropy, is_mrf, pullback, uniform_hom_distribution, verify_chordal_entropy_identity};
use crate::polymatroid::{transform_L, transform_L_inverse, SetFunction};
use crate::rational::{fmt_rational, parse_rational, to_f64, JsonRational, Rational};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "hde", version, about = "Homomorphism domination exponents: exact bounds, targets and certificates")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Shorthand for `--format json`.
    #[arg(long, global = true)]
    pub json: bool,
    /// Tolerance for floating entropy checks.
    #[arg(long, default_value_t = 1e-9, global = true)]
    pub tol: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Homomorphism counting and listing.
    #[command(subcommand)]
    Hom(HomCmd),
    /// Bounds on HDE(F, G).
    #[command(subcommand)]
    Hde(HdeCmd),
    /// Proof certificates.
    #[command(subcommand)]
    Cert(CertCmd),
    /// Target graphs with projections.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Markov random field checks.
    #[command(subcommand)]
    Mrf(MrfCmd),
    /// Parallel parameter sweeps.
    #[command(subcommand)]
    Sweep(SweepCmd),
    /// Self-checks on a fixed corpus.
    #[command(subcommand)]
    Check(CheckCmd),
}

#[derive(Debug, Args)]
pub struct Pair {
    pub f: String,
    pub g: String,
}

#[derive(Debug, Subcommand)]
pub enum HomCmd {
    Count(Pair),
    List {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 10_000)]
        limit: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum HdeCmd {
    Lower(Pair),
    Upper(Pair),
    Exact(Pair),
    /// Best target on at most `--max-target` vertices.
    Brute {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 4)]
        max_target: usize,
    },
    Trivial(Pair),
}

#[derive(Debug, Subcommand)]
pub enum CertCmd {
    Extract {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Verify {
        file: PathBuf,
        /// Also check the inequality on every target with at most this many vertices.
        #[arg(long)]
        soundness: Option<usize>,
    },
    BuiltinP4 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ConstructCmd {
    /// Target from an optimal (or given) point of Q(G).
    Upper {
        g: String,
        #[arg(long)]
        n: u64,
        /// Take q from the upper program for this F.
        #[arg(long, conflicts_with = "q")]
        from: Option<String>,
        /// Explicit q, e.g. `0,1=1/2;2=1/2`.
        #[arg(long)]
        q: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Target from an optimal (or given) point of P(G), G series-parallel.
    Tight {
        g: String,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, conflicts_with = "p")]
        from: Option<String>,
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random target over P_{4n+2}.
    P4 {
        #[arg(long)]
        n: usize,
        #[arg(long = "big-n")]
        big_n: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum MrfCmd {
    /// Uniform distribution on Hom(G, T) as a field over G.
    Check { g: String, t: String },
    /// Pull the uniform field on Hom(G, T) back through `phi: F → G`.
    Pullback {
        f: String,
        g: String,
        t: String,
        #[arg(long, value_delimiter = ',')]
        phi: Vec<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum SweepCmd {
    /// Exact HDE(P_m, P_n) with the closed form alongside.
    Paths {
        #[arg(long, default_value_t = 6)]
        m_max: usize,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum CheckCmd {
    /// Formal identities on a fixed corpus.
    Identities,
}

/// Rendered output of one command.
#[derive(Debug, Clone)]
pub struct Report {
    pub text: String,
    pub json: Value,
    pub csv: Option<String>,
    /// 0 on success, 1 when a domain check fails.
    pub status: i32,
}

impl Report {
    fn ok(text: impl Into<String>, json: Value) -> Self {
        Report {
            text: text.into(),
            json,
            csv: None,
            status: 0,
        }
    }
}

pub fn load_graph(arg: &str) -> Result<Graph> {
    if Path::new(arg).exists() {
        Graph::read_file(arg)
    } else {
        parse_builtin_spec(arg)
    }
}

fn pair(p: &Pair) -> Result<(Graph, Graph)> {
    Ok((load_graph(&p.f)?, load_graph(&p.g)?))
}

/// Parses `0,1=1/2;2=1/4` into a set function on `n` vertices.
pub fn parse_set_function(spec: &str, n: usize) -> Result<SetFunction> {
    let mut f = SetFunction::zero(n);
    for item in spec.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let (set, value) = item
            .split_once('=')
            .ok_or_else(|| Error::InvalidParameter(format!("expected `set=value`, got `{item}`")))?;
        let vs = set
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|v| v.parse::<usize>().map_err(|_| Error::InvalidParameter(format!("bad vertex `{v}`"))))
            .collect::<Result<Vec<_>>>()?;
        let a = VertexSet::from_vertices(n, vs)?;
        let v = parse_rational(value.trim()).ok_or_else(|| Error::InvalidParameter(format!("bad rational `{value}`")))?;
        f.set(a, v);
    }
    Ok(f)
}

fn rational_json(r: &Rational) -> Value {
    let mut v = serde_json::to_value(JsonRational(r.clone())).expect("serializable");
    v["decimal"] = json!(to_f64(r));
    v
}

fn hde_report(r: HdeResult) -> Report {
    let status = i32::from(r.value == HdeValue::Undefined);
    let text = match &r.value {
        HdeValue::Finite(v) => fmt_rational(v),
        HdeValue::Undefined => "undefined".to_string(),
    };
    Report {
        text,
        json: r.to_json(),
        csv: None,
        status,
    }
}

fn target_report(t: &ProjectedTarget, out: Option<&PathBuf>) -> Result<Report> {
    if let Some(path) = out {
        t.write(path)?;
    }
    let text = format!(
        "{} target over {}: {} vertices, {} edges, scale {}, fibers {:?}",
        t.meta.kind,
        t.base.name(),
        t.target.n(),
        t.target.edge_count(),
        t.meta.scale,
        t.fiber_sizes()
    );
    Ok(Report::ok(text, t.sidecar()))
}

fn cert_report(c: &Certificate, out: Option<&PathBuf>) -> Result<Report> {
    if let Some(path) = out {
        c.write_file(path)?;
    }
    let v = verify_certificate(c);
    let text = format!(
        "certificate for HDE({}, {}) >= {} ({} weights, {} multipliers, total weight {}): {}",
        c.f.name(),
        c.g.name(),
        fmt_rational(&c.exponent),
        c.weights.len(),
        c.multipliers.len(),
        fmt_rational(&c.total_weight()),
        if v.ok { "verified" } else { "REJECTED" }
    );
    Ok(Report {
        text,
        json: json!({ "certificate": c.to_json(), "verified": v.ok, "reason": v.reason }),
        csv: None,
        status: i32::from(!v.ok),
    })
}

/// Host for the tightness construction: G itself when chordal, else a
/// 2-tree containing it.
fn tight_target(g: &Graph, p: &SetFunction, n: u64, seed: u64) -> Result<ProjectedTarget> {
    if g.simple_closure().is_chordal() {
        return build_tightness_target(g, p, n, seed);
    }
    let host = g.embed_in_2tree().ok_or_else(|| Error::NotSeriesParallel(g.name().to_string()))?;
    filter_to_series_parallel(&build_tightness_target(&host, p, n, seed)?, g)
}

fn run_hom(cmd: &HomCmd) -> Result<Report> {
    match cmd {
        HomCmd::Count(p) => {
            let (f, g) = pair(p)?;
            let c = count_homs(&f, &g);
            Ok(Report::ok(c.to_string(), json!({ "count": c.to_string() })))
        }
        HomCmd::List { pair: p, limit } => {
            let (f, g) = pair(p)?;
            let homs = enumerate_homs(&f, &g, *limit)?;
            let lines: Vec<String> = homs
                .iter()
                .map(|h| h.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
                .collect();
            let mut r = Report::ok(lines.join("\n"), json!({ "homomorphisms": homs }));
            let header: String = (0..f.n()).map(|v| format!("v{v}")).collect::<Vec<_>>().join(",");
            r.csv = Some(format!("{header}\n{}", lines.join("\n")));
            Ok(r)
        }
    }
}

fn run_hde(cmd: &HdeCmd) -> Result<Report> {
    match cmd {
        HdeCmd::Lower(p) => pair(p).and_then(|(f, g)| hde_lower_chordal(&f, &g)).map(hde_report),
        HdeCmd::Upper(p) => pair(p).and_then(|(f, g)| hde_upper(&f, &g)).map(hde_report),
        HdeCmd::Exact(p) => pair(p).and_then(|(f, g)| hde_exact(&f, &g)).map(hde_report),
        HdeCmd::Brute { pair: p, max_target } => {
            let (f, g) = pair(p)?;
            let b = brute_force_upper(&f, &g, *max_target)?;
            Ok(Report::ok(
                format!("{:.6} (hom(F,T) = {}, hom(G,T) = {})\n{}", b.value, b.hom_f, b.hom_g, b.witness.to_text()),
                json!({
                    "value": b.value,
                    "kind": "upper",
                    "hom_f": b.hom_f.to_string(),
                    "hom_g": b.hom_g.to_string(),
                    "witness": b.witness.to_text(),
                }),
            ))
        }
        HdeCmd::Trivial(p) => {
            let (f, g) = pair(p)?;
            let [v, c, a] = trivial_upper_bounds(&f, &g)?;
            Ok(Report::ok(
                format!(
                    "vertices {}\ncomponents {}\nindependence {}",
                    fmt_rational(&v),
                    fmt_rational(&c),
                    fmt_rational(&a)
                ),
                json!({ "vertices": rational_json(&v), "components": rational_json(&c), "independence": rational_json(&a) }),
            ))
        }
    }
}

fn run_cert(cmd: &CertCmd) -> Result<Report> {
    match cmd {
        CertCmd::Extract { pair: p, out } => {
            let (f, g) = pair(p)?;
            cert_report(&extract_certificate(&f, &g)?, out.as_ref())
        }
        CertCmd::BuiltinP4 { n, out } => cert_report(&builtin_p4_certificate(*n)?, out.as_ref()),
        CertCmd::Verify { file, soundness } => {
            let c = Certificate::read_file(file)?;
            let mut r = cert_report(&c, None)?;
            if let (Some(k), 0) = (soundness, r.status) {
                let s = exhaustive_soundness(&c, *k)?;
                r.text.push_str(&format!(
                    "\nsoundness on {} targets: {} failures",
                    s.targets,
                    s.failures.len()
                ));
                r.json["soundness"] = json!({ "targets": s.targets, "failures": s.failures.len() });
                r.status = i32::from(!s.failures.is_empty());
            }
            Ok(r)
        }
    }
}

fn run_construct(cmd: &ConstructCmd) -> Result<Report> {
    match cmd {
        ConstructCmd::Upper { g, n, from, q, out } => {
            let g = load_graph(g)?;
            let q = match (from, q) {
                (_, Some(spec)) => parse_set_function(spec, g.n())?,
                (Some(f), None) => match hde_upper(&load_graph(f)?, &g)?.primal {
                    Some(Primal::Q(q)) => q,
                    _ => return Err(Error::NoHomomorphism),
                },
                (None, None) => return Err(Error::InvalidParameter("give --q or --from".into())),
            };
            target_report(&build_Tn_upper(&g, &q, *n)?, out.as_ref())
        }
        ConstructCmd::Tight { g, n, seed, from, p, out } => {
            let g = load_graph(g)?;
            let p = match (from, p) {
                (_, Some(spec)) => parse_set_function(spec, g.n())?,
                (Some(f), None) => match hde_lower_chordal(&load_graph(f)?, &g)?.primal {
                    Some(Primal::Local { values, .. }) => {
                        let mut p = SetFunction::zero(g.n());
                        for (a, v) in values {
                            p.set(a, v);
                        }
                        p
                    }
                    Some(Primal::Full(p)) => p,
                    _ => return Err(Error::NoHomomorphism),
                },
                (None, None) => return Err(Error::InvalidParameter("give --p or --from".into())),
            };
            target_report(&tight_target(&g, &p, *n, *seed)?, out.as_ref())
        }
        ConstructCmd::P4 { n, big_n, seed, out } => target_report(&build_TN_p4(*n, *big_n, *seed)?, out.as_ref()),
    }
}

fn run_mrf(cmd: &MrfCmd, tol: f64) -> Result<Report> {
    match cmd {
        MrfCmd::Check { g, t } => {
            let (g, t) = (load_graph(g)?, load_graph(t)?);
            let x = uniform_hom_distribution(&g, &t)?;
            let m = is_mrf(&x, &g, tol)?;
            let mut text = format!(
                "H(X) = {:.9} bits over {} homomorphisms; MRF: {} (worst {:.3e})",
                x.entropy(),
                x.support().count(),
                m.ok,
                m.worst
            );
            let mut ok = m.ok;
            let mut identity = Value::Null;
            if g.simple_closure().is_chordal() {
                let c = verify_chordal_entropy_identity(&x, &g, tol)?;
                text.push_str(&format!("\nclique identity: {} ({:.9} vs {:.9})", c.ok, c.total, c.telescoping));
                ok &= c.ok;
                identity = json!({ "ok": c.ok, "total": c.total, "alternating": c.alternating, "telescoping": c.telescoping });
            }
            Ok(Report {
                text,
                json: json!({ "entropy": x.entropy(), "mrf": m.ok, "worst": m.worst, "identity": identity }),
                csv: None,
                status: i32::from(!ok),
            })
        }
        MrfCmd::Pullback { f, g, t, phi } => {
            let (f, g, t) = (load_graph(f)?, load_graph(g)?, load_graph(t)?);
            let ord = f.elimination_ordering().ok_or_else(|| Error::NotChordal(f.name().to_string()))?;
            let x = uniform_hom_distribution(&g, &t)?;
            let y = pullback(&x, &f, phi, &ord)?;
            let coeff = coefficient_entropy(&x, &f, phi, &ord)?;
            let bound = ln_big(&count_homs(&f, &t)) / std::f64::consts::LN_2;
            let (h, ok) = (y.entropy(), (y.entropy() - coeff).abs() <= tol && y.entropy() <= bound + tol);
            Ok(Report {
                text: format!("H(pullback) = {h:.9}, c_phi . H = {coeff:.9}, log2 hom(F,T) = {bound:.9}"),
                json: json!({ "entropy": h, "coefficient_form": coeff, "log_hom": bound, "ok": ok }),
                csv: None,
                status: i32::from(!ok),
            })
        }
    }
}

fn run_sweep(cmd: &SweepCmd) -> Result<Report> {
    let SweepCmd::Paths { m_max, n_max } = cmd;
    let cells: Vec<(usize, usize)> = (1..=*m_max).flat_map(|m| (1..=*n_max).map(move |n| (m, n))).collect();
    // `None` marks an undefined value (no homomorphism P_m → P_n)
    let rows: Vec<(usize, usize, Option<Rational>, Option<Rational>)> = cells
        .par_iter()
        .map(|&(m, n)| {
            let r = hde_exact(&builtin("path", &[m])?, &builtin("path", &[n])?)?;
            Ok((m, n, r.rational().cloned(), closed_form_paths(m, n)))
        })
        .collect::<Result<_>>()?;
    let mismatches = rows
        .iter()
        .filter(|r| matches!((&r.2, &r.3), (Some(v), Some(c)) if v != c))
        .count();
    let mut csv = String::from("m,n,hde,decimal,closed_form,match\n");
    for (m, n, v, c) in &rows {
        let (hv, dec) = match v {
            Some(v) => (fmt_rational(v), format!("{:.6}", to_f64(v))),
            None => ("undefined".to_string(), String::new()),
        };
        let (cf, ok) = match (v, c) {
            (Some(v), Some(c)) => (fmt_rational(c), if c == v { "yes" } else { "NO" }),
            _ => (String::new(), ""),
        };
        csv.push_str(&format!("{m},{n},{hv},{dec},{cf},{ok}\n"));
    }
    let json = json!({
        "rows": rows.iter().map(|(m, n, v, c)| json!({
            "m": m, "n": n, "hde": v.as_ref().map(rational_json), "closed_form": c.as_ref().map(rational_json),
        })).collect::<Vec<_>>(),
        "mismatches": mismatches,
    });
    Ok(Report {
        text: csv.clone(),
        json,
        csv: Some(csv),
        status: i32::from(mismatches > 0),
    })
}

fn run_identities(tol: f64) -> Result<Report> {
    let mut lines = Vec::new();
    let mut all = true;
    let mut record = |name: String, ok: bool| {
        all &= ok;
        lines.push(format!("{} {name}", if ok { "PASS" } else { "FAIL" }));
    };
    let fs = ["path:3", "path:4", "complete:3", "book:2", "star:3", "vee"];
    let gs = ["complete:3", "path:4", "cycle:5", "dicycle:3", "complete:4"];
    for fs_ in fs {
        let f = parse_builtin_spec(fs_)?;
        let ord = f.elimination_ordering().expect("chordal corpus");
        for gs_ in gs {
            let g = parse_builtin_spec(gs_)?;
            let homs = enumerate_homs(&f, &g, 5000)?;
            let ok = homs
                .iter()
                .all(|phi| coeff_vector(&f, phi, &ord).is_ok_and(|c| c.terms() == alternating_sum(&f, phi).terms()));
            record(format!("telescoping = alternating sum, {fs_} -> {gs_} ({} maps)", homs.len()), ok);
        }
    }
    for (g, t) in [("complete:3", "complete:4"), ("path:4", "cycle:5"), ("book:2", "complete:4")] {
        let x = uniform_hom_distribution(&parse_builtin_spec(g)?, &parse_builtin_spec(t)?)?;
        let c = verify_chordal_entropy_identity(&x, &parse_builtin_spec(g)?, tol)?;
        record(format!("entropy clique identity, uniform Hom({g}, {t})"), c.ok);
    }
    for n in 1..=3 {
        let v = verify_certificate(&builtin_p4_certificate(n)?);
        record(format!("builtin P4 certificate n={n}"), v.ok);
    }
    for n in 1..=4 {
        let f = SetFunction::from_fn(n, |a| Rational::from_integer((a.bits() as i64 * 7 % 11).into()));
        let mut f = f;
        f.set(VertexSet::EMPTY, Rational::zero());
        let back = transform_L_inverse(&transform_L(&f));
        record(format!("L^-1 L = id on {n} vertices"), back == f);
    }
    Ok(Report {
        text: lines.join("\n"),
        json: json!({ "checks": lines, "ok": all }),
        csv: None,
        status: i32::from(!all),
    })
}

pub fn run(config: &RunConfig) -> Result<Report> {
    match &config.command {
        Command::Hom(c) => run_hom(c),
        Command::Hde(c) => run_hde(c),
        Command::Cert(c) => run_cert(c),
        Command::Construct(c) => run_construct(c),
        Command::Mrf(c) => run_mrf(c, config.tol),
        Command::Sweep(c) => run_sweep(c),
        Command::Check(CheckCmd::Identities) => run_identities(config.tol),
    }
}

/// Exit code for an error: 2 for usage and input problems, 1 for domain failures.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::UnknownBuiltin(_) | Error::InvalidParameter(_) | Error::Parse { .. } | Error::Io(_) | Error::Json(_) => 2,
        _ => 1,
    }
}

/// Parses `args`, runs, prints, and returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let format = if config.json { Format::Json } else { config.format };
    match run(&config) {
        Ok(r) => {
            // a closed pipe is not an error worth reporting
            let mut out = std::io::stdout().lock();
            let _ = match format {
                Format::Text => writeln!(out, "{}", r.text.trim_end()),
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&r.json).expect("serializable")),
                Format::Csv => match &r.csv {
                    Some(c) => write!(out, "{c}"),
                    None => {
                        eprintln!("error: this command has no CSV output");
                        return 2;
                    }
                },
            };
            r.status
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &[&str]) -> Result<Report> {
        let mut v = vec!["hde"];
        v.extend_from_slice(args);
        run(&RunConfig::try_parse_from(v).expect("valid arguments"))
    }

    #[test]
    fn headline_commands() {
        assert_eq!(go(&["hde", "exact", "path:4", "path:6"]).unwrap().text, "5/8");
        assert_eq!(go(&["hde", "exact", "vee", "dicycle:3"]).unwrap().text, "1");
        assert_eq!(go(&["hom", "count", "complete:2", "complete:3"]).unwrap().text, "6");
        let r = go(&["hde", "upper", "complete:2", "complete:3"]).unwrap();
        assert_eq!(r.json["value"]["text"], "2/3");
    }

    #[test]
    fn undefined_is_a_domain_failure() {
        let r = go(&["hde", "exact", "complete:3", "complete:2"]).unwrap();
        assert_eq!((r.text.as_str(), r.status), ("undefined", 1));
        let e = go(&["hde", "exact", "nonsense", "path:2"]).unwrap_err();
        assert_eq!(exit_code(&e), 2);
        let e = go(&["hde", "exact", "cycle:4", "path:3"]).unwrap_err();
        assert_eq!(exit_code(&e), 1);
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(main_with(["hde", "construct", "p4", "--n", "1", "--big-n", "4"]), 2);
        assert_eq!(main_with(["hde", "frobnicate"]), 2);
    }

    #[test]
    fn set_function_syntax() {
        let q = parse_set_function("0,1=1/2; 2=1/2", 3).unwrap();
        assert_eq!(*q.get(VertexSet::from_bits(0b011)), crate::rational::rat(1, 2));
        assert!(parse_set_function("0,1", 3).is_err());
        assert!(parse_set_function("5=1", 3).is_err());
    }

    #[test]
    fn sweep_rows_match_closed_forms() {
        let r = go(&["sweep", "paths", "--m-max", "4", "--n-max", "6"]).unwrap();
        assert_eq!(r.status, 0);
        let csv = r.csv.unwrap();
        assert!(csv.contains("2,6,1/3,"));
        assert!(csv.contains("4,6,5/8,"));
        assert_eq!(csv.lines().count(), 25);
    }

    #[test]
    fn constructions_and_certificates() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("t.g");
        let r = go(&["construct", "upper", "complete:2", "--n", "3", "--from", "path:3", "--out", out.to_str().unwrap()]).unwrap();
        assert_eq!(r.status, 0);
        assert!(load_graph(out.to_str().unwrap()).unwrap().n() > 0);
        assert!(dir.path().join("t.g.json").exists());
        let c = dir.path().join("c.json");
        let r = go(&["cert", "builtin-p4", "--n", "2", "--out", c.to_str().unwrap()]).unwrap();
        assert_eq!(r.status, 0);
        let r = go(&["cert", "verify", c.to_str().unwrap(), "--soundness", "3"]).unwrap();
        assert_eq!(r.status, 0, "{}", r.text);
        let r = go(&["construct", "tight", "cycle:4", "--n", "4", "--seed", "1", "--from", "path:2"]).unwrap();
        assert!(r.text.contains("tight-filtered"));
    }

    #[test]
    fn identities_and_mrf() {
        let r = go(&["check", "identities"]).unwrap();
        assert_eq!(r.status, 0, "{}", r.text);
        assert_eq!(go(&["mrf", "check", "path:3", "cycle:5"]).unwrap().status, 0);
        let r = go(&["mrf", "pullback", "path:4", "path:3", "cycle:5", "--phi", "0,1,2,1"]).unwrap();
        assert_eq!(r.status, 0, "{}", r.text);
    }
}
