//! Command-line front end. [`run`] parses arguments, validates them, runs
//! the requested computation and writes a report.
//!
//! Exit codes: `0` when every requested verification passes, `1` on a
//! verification failure (the witness goes to the diagnostic stream), `2`
//! on invalid parameters.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::congruence::{
    dwork_check, ghost_reconstruction_check, ghost_sequence, ghost_vanishing_check, infinite_product_check,
    Convention,
};
use crate::continuation::Continuation;
use crate::engine::{compute_ts, ts_sequence, TsReport};
use crate::error::Error;
use crate::padic::{teichmuller_lift, OmegaParam, PrimeData};
use crate::points::{census_curve, census_hypersurface, count_curve, count_hypersurface, PointCountReport};
use crate::quiver::{QuiverDescription, QuiverModel};
use crate::report::{TheoremReport, Verdict};
use crate::selftest::run_selftest;
use crate::vertex::{
    coefficient_convergence, padic_limit_from, reduce_series, vertex_closed_form_k1, vertex_localization,
    vertex_residue, VertexSeries,
};

/// Identifier written into every JSON report; matches `schema/reports.v1.json`.
pub const SCHEMA_ID: &str = "padic-vertex/reports/v1";

/// Environment variable holding the worker count.
pub const JOBS_ENV: &str = "PADIC_VERTEX_JOBS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "padic-vertex", version, about = "p-adic approximations of vertex functions of T*Gr(k,n)")]
struct Cli {
    /// Worker threads (default: available cores).
    #[arg(long, global = true, env = JOBS_ENV)]
    jobs: Option<usize>,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct FamilyArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    r: u64,
    #[arg(long)]
    q: u64,
}

#[derive(Debug, Subcommand)]
enum QuiverAction {
    /// Describe the quiver and the factor table of the superpotential.
    Show {
        #[command(flatten)]
        family: FamilyArgs,
        /// With `--p`, describe the polynomial superpotential at level `--s`.
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, default_value_t = 1)]
        s: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VertexMethod {
    ClosedForm,
    Localization,
    Residue,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PointFamily {
    Hypersurface,
    Curve,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Quiver model inspection.
    Quiver {
        #[command(subcommand)]
        action: QuiverAction,
    },
    /// The polynomial `T_s(z)`.
    Ts {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        s: u32,
    },
    /// Dwork congruences for `s = 1..=smax` in both sign conventions.
    Dwork {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 2)]
        smax: u32,
    },
    /// Ghost polynomials `G_1..G_smax` with expansion and vanishing checks.
    Ghosts {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 2)]
        smax: u32,
    },
    /// Infinite product formula for the vertex function modulo `p^a`.
    ProductCheck {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        a: u32,
        #[arg(long, default_value_t = 10)]
        dmax: usize,
    },
    /// Vertex function coefficients, cross-checked between methods.
    Vertex {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 5)]
        dmax: usize,
        #[arg(long, value_enum, default_value_t = VertexMethod::All)]
        method: VertexMethod,
        /// With `--p`, also compare against the p-adic limit modulo `p^a`.
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, default_value_t = 1)]
        a: u32,
    },
    /// Analytic continuation `I_s` over the domain of units.
    Continuation {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 2)]
        smax: u32,
    },
    /// Point counts over `F_p` and their relation to `T_1`.
    Points {
        #[arg(long, value_enum)]
        family: PointFamily,
        /// Dimension parameter of the hypersurface family.
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        r: u64,
        #[arg(long, default_value_t = 2)]
        q: u64,
        #[arg(long)]
        p: u64,
        /// A single point; all admissible points when omitted.
        #[arg(long)]
        z0: Option<u64>,
    },
    /// Teichmüller lift of `u` modulo `p^s`.
    Teichmuller {
        #[arg(long)]
        u: u64,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        s: u32,
    },
    /// Run the full acceptance grid.
    Selftest,
}

/// Validated family parameters shared by most commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JobConfig {
    pub k: usize,
    pub n: usize,
    pub omega: OmegaParam,
    pub prime: Option<PrimeData>,
}

impl JobConfig {
    /// Check `n ≥ 2k`, `2r ≤ q` and, when `p` is given, that `p` is an odd
    /// prime with `p ≡ 1 mod q` and `p^s` fits in 64 bits.
    pub fn validate(k: usize, n: usize, r: u64, q: u64, p: Option<u64>, s: u32) -> crate::Result<Self> {
        QuiverModel::new(k, n)?;
        let omega = OmegaParam::new(r, q)?;
        let prime = p.map(|p| PrimeData::new(p, s, &omega)).transpose()?;
        Ok(Self { k, n, omega, prime })
    }

    fn p(&self) -> u64 {
        self.prime.map_or(0, |pd| pd.p())
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_) | Error::DomainViolation(_) | Error::NotIntegral { .. } => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Internal(other.to_string()),
        }
    }
}

struct Output {
    body: String,
    witnesses: Vec<String>,
}

impl Output {
    fn new(body: String, witnesses: Vec<String>) -> Self {
        Self { body, witnesses }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn envelope(kind: &str, value: impl Serialize) -> Value {
    let mut map = Map::new();
    map.insert("schema".into(), Value::from(SCHEMA_ID));
    map.insert("kind".into(), Value::from(kind));
    match serde_json::to_value(value).expect("reports serialize") {
        Value::Object(obj) => map.extend(obj),
        other => {
            map.insert("value".into(), other);
        }
    }
    Value::Object(map)
}

fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn overall(passed: bool) -> Verdict {
    if passed {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn failing(reports: &[TheoremReport]) -> Vec<String> {
    reports.iter().filter(|r| !r.passed()).map(|r| r.summary()).collect()
}

fn reports_body(kind: &str, reports: &[TheoremReport], extra: Value, format: Format) -> Result<String, Failure> {
    match format {
        Format::Json => {
            let mut v = envelope(kind, extra);
            let obj = v.as_object_mut().expect("object");
            obj.insert("reports".into(), serde_json::to_value(reports).expect("reports serialize"));
            obj.insert("verdict".into(), serde_json::to_value(overall(failing(reports).is_empty())).unwrap());
            Ok(render_json(&v))
        }
        Format::Text => Ok(reports.iter().map(|r| r.summary() + "\n").collect()),
        Format::Csv => Err(usage(format!("--format csv is not supported by {kind}"))),
    }
}

fn poly_text(coeffs: &[String]) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.as_str() != "0")
        .map(|(d, c)| match d {
            0 => c.clone(),
            1 => format!("{c}*z"),
            _ => format!("{c}*z^{d}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ").replace("+ -", "- ")
    }
}

fn cmd_quiver(action: QuiverAction, format: Format) -> Result<Output, Failure> {
    let QuiverAction::Show { family, p, s } = action;
    let cfg = JobConfig::validate(family.k, family.n, family.r, family.q, p, s)?;
    let model = QuiverModel::new(cfg.k, cfg.n)?;
    let desc = QuiverDescription::new(&model, &cfg.omega, cfg.prime.as_ref())?;
    let body = match format {
        Format::Json => render_json(&envelope("quiver", &desc)),
        Format::Text => {
            let mut out = format!("T*Gr({}, {}) mirror quiver, omega = {}\n", desc.k, desc.n, desc.omega);
            out += &format!("dims {:?}\neps order {}\n", desc.dims, desc.eps_order.join(" "));
            for f in &desc.factors {
                out += &format!("{:?} ({})^{}\n", f.kind, f.operands.join(", "), f.exponent);
            }
            out
        }
        Format::Csv => return Err(usage("--format csv is not supported by quiver show")),
    };
    Ok(Output::new(body, Vec::new()))
}

fn cmd_ts(family: FamilyArgs, p: u64, s: u32, format: Format) -> Result<Output, Failure> {
    let cfg = JobConfig::validate(family.k, family.n, family.r, family.q, Some(p), s)?;
    let t = compute_ts(cfg.k, cfg.n, &cfg.omega, &cfg.prime.expect("prime given"))?;
    let report = TsReport::from(&t);
    let body = match format {
        Format::Json => render_json(&envelope("ts", &report)),
        Format::Text => format!("T_{s}(z) = {}\n", poly_text(&report.coeffs)),
        Format::Csv => {
            let mut out = String::from("degree,coeff,unsigned\n");
            for (d, (c, u)) in report.coeffs.iter().zip(&report.unsigned_coeffs).enumerate() {
                out += &format!("{d},{c},{u}\n");
            }
            out
        }
    };
    Ok(Output::new(body, Vec::new()))
}

fn sequence_for(cfg: &JobConfig, s_max: u32) -> Result<Vec<crate::engine::TsPolynomial>, Failure> {
    JobConfig::validate(cfg.k, cfg.n, cfg.omega.r(), cfg.omega.q(), Some(cfg.p()), s_max)?;
    Ok(ts_sequence(cfg.k, cfg.n, &cfg.omega, cfg.p(), s_max)?)
}

fn cmd_dwork(family: FamilyArgs, p: u64, smax: u32, format: Format) -> Result<Output, Failure> {
    let cfg = JobConfig::validate(family.k, family.n, family.r, family.q, Some(p), 1)?;
    if smax == 0 {
        return Err(usage("smax must be at least 1"));
    }
    let ts = sequence_for(&cfg, smax + 1)?;
    let mut reports = Vec::new();
    for s in 1..=smax {
        for conv in [Convention::Signed, Convention::Unsigned] {
            reports.push(dwork_check(&ts, s, conv)?);
        }
    }
    let body = reports_body("dwork", &reports, json!({}), format)?;
    Ok(Output::new(body, failing(&reports)))
}

fn cmd_ghosts(family: FamilyArgs, p: u64, smax: u32, format: Format) -> Result<Output, Failure> {
    let cfg = JobConfig::validate(family.k, family.n, family.r, family.q, Some(p), 1)?;
    if smax == 0 {
        return Err(usage("smax must be at least 1"));
    }
    let ts = sequence_for(&cfg, smax)?;
    let unsigned: Vec<_> = ts.iter().map(|t| t.unsigned.clone()).collect();
    let gs = ghost_sequence(&unsigned, p);
    let reports = vec![ghost_reconstruction_check(&gs, &unsigned), ghost_vanishing_check(&gs)];
    let ghosts: Vec<Vec<String>> = (1..=smax as usize)
        .map(|m| {
            gs.get(m)
                .map(|g| g.coeffs().iter().map(|c| c.to_string()).collect())
                .unwrap_or_default()
        })
        .collect();
    let body = match format {
        Format::Text => {
            let mut out: String = ghosts
                .iter()
                .enumerate()
                .map(|(i, g)| format!("G_{}(z) = {}\n", i + 1, poly_text(g)))
                .collect();
            out += &reports_body("ghosts", &reports, json!({}), Format::Text)?;
            out
        }
        _ => reports_body("ghosts", &reports, json!({ "p": p, "ghosts": ghosts }), format)?,
    };
    Ok(Output::new(body, failing(&reports)))
}

fn best_vertex(cfg: &JobConfig, d_max: usize) -> Result<VertexSeries, Failure> {
    Ok(if cfg.k == 1 {
        vertex_closed_form_k1(cfg.n, &cfg.omega, d_max)?
    } else {
        vertex_localization(cfg.k, cfg.n, &cfg.omega, d_max)?
    })
}

fn cmd_product(family: FamilyArgs, p: u64, a: u32, dmax: usize, format: Format) -> Result<Output, Failure> {
    let cfg = JobConfig::validate(family.k, family.n, family.r, family.q, Some(p), a.max(1))?;
    if a == 0 {
        return Err(usage("precision a must be at least 1"));
    }
    let ts = sequence_for(&cfg, a)?;
    let vertex = best_vertex(&cfg, dmax)?;
    let reports = vec![infinite_product_check(a, dmax, &vertex.coeffs, &ts)?];
    let body = reports_body("product_check", &reports, json!({}), format)?;
    Ok(Output::new(body, failing(&reports)))
}

fn agreement(a: &VertexSeries, b: &VertexSeries) -> TheoremReport {
    let mut report = TheoremReport::new("vertex_agreement", "exact", a.coeffs.len().saturating_sub(1) as u64)
        .param("k", a.k)
        .param("n", a.n)
        .param("omega", &a.omega)
        .param("lhs", format!("{:?}", a.provenance).to_lowercase())
        .param("rhs", format!("{:?}", b.provenance).to_lowercase());
    for (d, (x, y)) in a.coeffs.iter().zip(&b.coeffs).enumerate() {
        if x != y {
            report.fail(d, x, y);
        }
    }
    report
}

fn cmd_vertex(
    family: FamilyArgs,
    dmax: usize,
    method: VertexMethod,
    p: Option<u64>,
    a: u32,
    format: Format,
) -> Result<Output, Failure> {
    let cfg = JobConfig::validate(family.k, family.n, family.r, family.q, p, a.max(1))?;
    let mut series: Vec<VertexSeries> = Vec::new();
    if matches!(method, VertexMethod::ClosedForm | VertexMethod::All) {
        if cfg.k == 1 {
            series.push(vertex_closed_form_k1(cfg.n, &cfg.omega, dmax)?);
        } else if method == VertexMethod::ClosedForm {
            return Err(usage("the closed form is only available for k = 1"));
        }
    }
    if matches!(method, VertexMethod::Localization | VertexMethod::All) {
        series.push(vertex_localization(cfg.k, cfg.n, &cfg.omega, dmax)?);
    }
    if matches!(method, VertexMethod::Residue | VertexMethod::All) {
        series.push(vertex_residue(cfg.k, cfg.n, &cfg.omega, dmax)?);
    }
    let mut reports: Vec<TheoremReport> = series.windows(2).map(|w| agreement(&w[0], &w[1])).collect();
    let mut padic = None;
    if let Some(pd) = cfg.prime {
        if a == 0 {
            return Err(usage("precision a must be at least 1"));
        }
        let ts = sequence_for(&cfg, a)?;
        let limit = padic_limit_from(&ts, a, dmax)?;
        let exact = reduce_series(&series[0].coeffs, pd.p(), a)?;
        let mut report = TheoremReport::new("padic_limit", pd.p_pow(), dmax as u64)
            .param("k", cfg.k)
            .param("n", cfg.n)
            .param("omega", cfg.omega)
            .param("p", pd.p())
            .param("a", a);
        for (d, (x, y)) in limit.coeffs.iter().zip(&exact).enumerate() {
            if x != y {
                report.fail(d, x, y);
            }
        }
        reports.push(report);
        if a >= 2 {
            reports.push(coefficient_convergence(&ts, &series[0].coeffs, dmax)?.monotone_report());
        }
        padic = Some(limit);
    }
    let body = match format {
        Format::Text => {
            let mut out = String::new();
            for s in &series {
                let coeffs: Vec<String> = s.coeffs.iter().map(BigRational::to_string).collect();
                out += &format!("{:?}: {}\n", s.provenance, coeffs.join(", "));
            }
            if let Some(l) = &padic {
                let coeffs: Vec<String> = l.coeffs.iter().map(BigInt::to_string).collect();
                out += &format!("mod {}^{}: {}\n", l.p, l.a, coeffs.join(", "));
            }
            out + &reports_body("vertex", &reports, json!({}), Format::Text)?
        }
        _ => {
            let mut extra = json!({ "series": series });
            if let Some(l) = &padic {
                extra["padic_limit"] = serde_json::to_value(l).expect("series serialize");
            }
            reports_body("vertex", &reports, extra, format)?
        }
    };
    Ok(Output::new(body, failing(&reports)))
}

fn cmd_continuation(family: FamilyArgs, p: u64, smax: u32, format: Format) -> Result<Output, Failure> {
    let cfg = JobConfig::validate(family.k, family.n, family.r, family.q, Some(p), 1)?;
    if smax == 0 {
        return Err(usage("smax must be at least 1"));
    }
    JobConfig::validate(cfg.k, cfg.n, family.r, family.q, Some(p), smax + 1)?;
    let cont = Continuation::new(cfg.k, cfg.n, &cfg.omega, p, smax)?;
    let mut reports = vec![cont.unit_report()?];
    if smax >= 2 {
        reports.push(cont.cauchy_report()?);
    }
    let (rows, modular) = cont.modular_identity_check(smax)?;
    reports.push(modular);
    let body = match format {
        Format::Text => {
            let mut out = String::from("u u_inv I(t) I(1/t) prefactor verdict\n");
            for r in &rows {
                out += &format!(
                    "{} {} {} {} {} {:?}\n",
                    r.u, r.u_inv, r.i_at_t, r.i_at_t_inv, r.prefactor, r.verdict
                );
            }
            out + &reports_body("continuation", &reports, json!({}), Format::Text)?
        }
        _ => reports_body(
            "continuation",
            &reports,
            json!({
                "domain": cont.domain(),
                "reflection_sign": cont.reflection_sign(),
                "s": smax,
                "rows": rows,
            }),
            format,
        )?,
    };
    Ok(Output::new(body, failing(&reports)))
}

fn points_csv(rows: &[PointCountReport]) -> Result<String, Failure> {
    let first = rows.first().ok_or_else(|| usage("no admissible points"))?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["z0".to_string(), "N".to_string()];
    if first.m.is_some() {
        header.push("M".into());
    }
    header.extend((0..first.a.len()).map(|i| format!("A_{i}")));
    header.push("T1_tilde".into());
    header.extend(first.checks.keys().cloned());
    w.write_record(&header).map_err(|e| Failure::Internal(e.to_string()))?;
    for r in rows {
        let mut rec = vec![r.z0.to_string(), r.points.to_string()];
        if let Some(m) = r.m {
            rec.push(m.to_string());
        }
        rec.extend(r.a.iter().map(u64::to_string));
        rec.push(r.t1_tilde.to_string());
        rec.extend(first.checks.keys().map(|k| match r.checks.get(k) {
            Some(Verdict::Pass) => "pass".to_string(),
            Some(Verdict::Fail) => "fail".to_string(),
            None => String::new(),
        }));
        w.write_record(&rec).map_err(|e| Failure::Internal(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Internal(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

fn cmd_points(
    family: PointFamily,
    n: usize,
    r: u64,
    q: u64,
    p: u64,
    z0: Option<u64>,
    format: Format,
) -> Result<Output, Failure> {
    let rows = match (family, z0) {
        (PointFamily::Hypersurface, Some(z)) => vec![count_hypersurface(n, p, z)?],
        (PointFamily::Hypersurface, None) => census_hypersurface(n, p)?,
        (PointFamily::Curve, Some(z)) => vec![count_curve(r, q, p, z)?],
        (PointFamily::Curve, None) => census_curve(r, q, p)?,
    };
    let witnesses: Vec<String> = rows
        .iter()
        .flat_map(|row| {
            row.checks
                .iter()
                .filter(|(_, v)| **v == Verdict::Fail)
                .map(move |(name, _)| format!("{name} fails at z0 = {} (N = {})", row.z0, row.points))
        })
        .collect();
    let body = match format {
        Format::Csv => points_csv(&rows)?,
        Format::Json => render_json(&envelope(
            "points",
            json!({
                "family": family_name(family),
                "p": p,
                "rows": rows,
                "verdict": overall(witnesses.is_empty()),
            }),
        )),
        Format::Text => rows
            .iter()
            .map(|row| {
                format!(
                    "z0 = {}: N = {}, {}\n",
                    row.z0,
                    row.points,
                    if row.passed() { "pass" } else { "FAIL" }
                )
            })
            .collect(),
    };
    Ok(Output::new(body, witnesses))
}

fn family_name(f: PointFamily) -> &'static str {
    match f {
        PointFamily::Hypersurface => "hypersurface",
        PointFamily::Curve => "curve",
    }
}

fn cmd_teichmuller(u: u64, p: u64, s: u32, format: Format) -> Result<Output, Failure> {
    if s == 0 {
        return Err(usage("precision s must be at least 1"));
    }
    if p < 3 || !crate::padic::is_prime(p) {
        return Err(usage("p must be an odd prime"));
    }
    let t = teichmuller_lift(u % p, p, s)?;
    let modulus = BigInt::from(p).pow(s);
    let fixed = t.pow(p) == t;
    let reduces = t.value() % BigInt::from(p) == BigInt::from(u % p);
    let mut witnesses = Vec::new();
    if !fixed || !reduces {
        witnesses.push(format!("lift {} of {u} mod {p}^{s} is not a Teichmüller point", t.value()));
    }
    let body = match format {
        Format::Text => format!("{}\n", t.value()),
        Format::Json => render_json(&envelope(
            "teichmuller",
            json!({
                "u": (u % p).to_string(),
                "p": p,
                "s": s,
                "modulus": modulus.to_string(),
                "value": t.value().to_string(),
                "verdict": overall(witnesses.is_empty()),
            }),
        )),
        Format::Csv => return Err(usage("--format csv is not supported by teichmuller")),
    };
    Ok(Output::new(body, witnesses))
}

fn cmd_selftest(format: Format) -> Result<Output, Failure> {
    let results = run_selftest()?;
    let witnesses: Vec<String> = results
        .iter()
        .filter(|c| !c.passed())
        .flat_map(|c| c.failures.iter().map(move |f| format!("criterion {}: {f}", c.id)))
        .collect();
    let passed = results.iter().all(|c| c.passed());
    let body = match format {
        Format::Text => {
            let mut out: String = results.iter().map(|c| c.line() + "\n").collect();
            out += &format!("selftest: {}\n", if passed { "PASS" } else { "FAIL" });
            out
        }
        Format::Json => render_json(&envelope(
            "selftest",
            json!({ "criteria": results, "verdict": overall(passed) }),
        )),
        Format::Csv => return Err(usage("--format csv is not supported by selftest")),
    };
    Ok(Output::new(body, witnesses))
}

fn dispatch(command: Command, format: Option<Format>) -> Result<Output, Failure> {
    let json = format.unwrap_or(Format::Json);
    match command {
        Command::Quiver { action } => cmd_quiver(action, json),
        Command::Ts { family, p, s } => cmd_ts(family, p, s, json),
        Command::Dwork { family, p, smax } => cmd_dwork(family, p, smax, json),
        Command::Ghosts { family, p, smax } => cmd_ghosts(family, p, smax, json),
        Command::ProductCheck { family, p, a, dmax } => cmd_product(family, p, a, dmax, json),
        Command::Vertex {
            family,
            dmax,
            method,
            p,
            a,
        } => cmd_vertex(family, dmax, method, p, a, json),
        Command::Continuation { family, p, smax } => cmd_continuation(family, p, smax, json),
        Command::Points {
            family,
            n,
            r,
            q,
            p,
            z0,
        } => cmd_points(family, n, r, q, p, z0, format.unwrap_or(Format::Csv)),
        Command::Teichmuller { u, p, s } => cmd_teichmuller(u, p, s, json),
        Command::Selftest => cmd_selftest(format.unwrap_or(Format::Text)),
    }
}

/// Parse `argv` (including the program name), run the command and return
/// the process exit code. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    if cli.jobs == Some(0) {
        let _ = writeln!(err, "error: --jobs must be at least 1");
        return 2;
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        builder = builder.num_threads(j);
    }
    let pool = match builder.build() {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 1;
        }
    };
    let format = cli.format;
    let result = pool.install(|| dispatch(cli.command, format));
    match result {
        Ok(output) => {
            if out.write_all(output.body.as_bytes()).is_err() {
                return 1;
            }
            if output.witnesses.is_empty() {
                0
            } else {
                for w in &output.witnesses {
                    let _ = writeln!(err, "verification failed: {w}");
                }
                1
            }
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Internal(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}
