//! The `lpcomb` command line: parse a spec file, run one computation and
//! print a deterministic report.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::compgroup::{alpha_image, c_map, component_group, p_phi, s_tilde, theta_component, Variant};
use crate::endoscopy::{endoscopic_pair, enumerate_elliptic, iota_full, iota_simplified};
use crate::error::{Error, Result};
use crate::gf2::Gf2Vec;
use crate::ledger::{arthur_multiplicity, c_tilde, check_ledger, packet_orbit_stats, sigma_sbar0, stable_multiplicity_coeff};
use crate::params::{Parameter, Theta};
use crate::rational::fmt_q;
use crate::smo::{multiplicity_one_checks, smo_at_place_criterion, SmoInstance};
use crate::spec::{parse_spec, SpecModel};
use crate::weylconst::{shape_constants, Constants, ReductiveShape, DEFAULT_WEYL_BOUND};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Largest character universe the `endoscopy` command enumerates.
const MAX_UNIVERSE_DIM: usize = 8;

#[derive(Parser, Debug)]
#[command(name = "lpcomb", version, about = "Exact combinatorics of Langlands parameters for classical groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Restrict to one parameter of the spec file.
    #[arg(long, global = true)]
    param: Option<String>,
    /// Bound on the order of the Weyl groups that are enumerated.
    #[arg(long, global = true, default_value_t = DEFAULT_WEYL_BOUND)]
    max_weyl_order: u128,
    #[arg(long, global = true, default_value = "id", value_parser = parse_theta)]
    theta: Theta,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Component groups, partition model, α and packet statistics.
    Analyze(InputArgs),
    /// Elliptic endoscopic data of every group and the pairs attached to every parameter.
    Endoscopy(InputArgs),
    /// Weyl-sum constants i, e and σ of reductive shapes such as `Sp2*O3'`.
    Constants {
        /// Shapes, comma separated or repeated.
        #[arg(long, required = true, value_delimiter = ',')]
        shape: Vec<String>,
    },
    /// The twisted ledger identity, row by row.
    Ledger(InputArgs),
    /// Multiplicity coefficients and packet orbit statistics.
    Multiplicity(InputArgs),
    /// Multiplicity one and strong multiplicity one in the character model of the file.
    Smo {
        #[command(flatten)]
        input: InputArgs,
        /// Places excluded from the restricted products.
        #[arg(long, value_delimiter = ',')]
        exception_places: Vec<String>,
        /// Places at which the one-place criterion is evaluated (default: all).
        #[arg(long, value_delimiter = ',')]
        place: Vec<String>,
    },
}

#[derive(clap::Args, Debug)]
struct InputArgs {
    /// Spec file.
    #[arg(long)]
    input: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn parse_theta(s: &str) -> std::result::Result<Theta, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// What a run produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Serialize)]
struct Envelope<'a> {
    command: &'a str,
    input_digest: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<Value>,
    version: &'a str,
}

/// Runs the command line given by `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    let name = command_name(&cli.command);
    let (digest, result) = match load_and_dispatch(&cli) {
        Ok((d, r)) => (d, Ok(r)),
        Err((d, e)) => (d, Err(e)),
    };
    match result {
        Ok(value) => {
            let stdout = match cli.format {
                Format::Json => render_json(&Envelope {
                    command: name,
                    input_digest: digest,
                    result: Some(value),
                    error: None,
                    version: VERSION,
                }),
                Format::Text => render_text(name, digest.as_deref(), &value),
            };
            Outcome { code: 0, stdout, stderr: String::new() }
        }
        Err(e) => {
            let stderr = format!("error[{}]: {e}\n", e.code());
            let stdout = match cli.format {
                Format::Json => render_json(&Envelope {
                    command: name,
                    input_digest: digest,
                    result: None,
                    error: Some(json!({ "code": e.code(), "message": e.to_string() })),
                    version: VERSION,
                }),
                Format::Text => String::new(),
            };
            Outcome { code: 1, stdout, stderr }
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Analyze(_) => "analyze",
        Command::Endoscopy(_) => "endoscopy",
        Command::Constants { .. } => "constants",
        Command::Ledger(_) => "ledger",
        Command::Multiplicity(_) => "multiplicity",
        Command::Smo { .. } => "smo",
    }
}

type Failure = (Option<String>, Error);

fn load_and_dispatch(cli: &Cli) -> std::result::Result<(Option<String>, Value), Failure> {
    let input = match &cli.command {
        Command::Analyze(a) | Command::Endoscopy(a) | Command::Ledger(a) | Command::Multiplicity(a) => Some(&a.input),
        Command::Smo { input, .. } => Some(&input.input),
        Command::Constants { .. } => None,
    };
    let (digest, spec) = match input {
        Some(path) => {
            let bytes = std::fs::read(path)
                .map_err(|e| (None, Error::Parse(format!("cannot read {}: {e}", path.display()))))?;
            let digest = hex(&Sha256::digest(&bytes));
            let text = String::from_utf8(bytes)
                .map_err(|_| (Some(digest.clone()), Error::Parse("input is not UTF-8".into())))?;
            let spec = parse_spec(&text).map_err(|e| (Some(digest.clone()), e))?;
            (Some(digest), spec)
        }
        None => (None, SpecModel::default()),
    };
    dispatch(cli, &spec).map(|v| (digest.clone(), v)).map_err(|e| (digest, e))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn selected<'a>(cli: &'a Cli, spec: &'a SpecModel) -> Result<Vec<(&'a str, &'a Parameter)>> {
    match &cli.param {
        Some(l) => spec
            .param(l)
            .map(|p| vec![(l.as_str(), p)])
            .ok_or_else(|| Error::Precondition(format!("no parameter labelled '{l}'"))),
        None => Ok(spec.params.iter().map(|(l, p)| (l.as_str(), p)).collect()),
    }
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

fn dispatch(cli: &Cli, spec: &SpecModel) -> Result<Value> {
    let consts = Constants::new(cli.max_weyl_order);
    match &cli.command {
        Command::Analyze(_) => {
            let rows = selected(cli, spec)?
                .into_iter()
                .map(|(l, p)| analyze(l, p))
                .collect::<Result<Vec<_>>>()?;
            Ok(json!({ "parameters": rows }))
        }
        Command::Endoscopy(_) => endoscopy(cli, spec),
        Command::Constants { shape } => {
            let rows = shape
                .iter()
                .map(|s| {
                    let sh: ReductiveShape = s.trim().parse()?;
                    Ok(to_value(&shape_constants(&consts, &sh)?))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(json!({ "shapes": rows }))
        }
        Command::Ledger(_) => {
            let mut out = Vec::new();
            for (l, p) in selected(cli, spec)? {
                let rows = check_ledger(&consts, p, cli.theta, None)?;
                out.push(json!({
                    "label": l,
                    "parameter": p.to_string(),
                    "theta": cli.theta,
                    "sigma_sbar0": fmt_q(&sigma_sbar0(&consts, p)?),
                    "rows": to_value(&rows),
                    "summary": if rows.iter().all(|r| r.balanced) { "OK" } else { "UNBALANCED" },
                }));
            }
            Ok(json!({ "parameters": out }))
        }
        Command::Multiplicity(_) => {
            let mut out = Vec::new();
            for (l, p) in selected(cli, spec)? {
                let trivial = if p.is_discrete() {
                    let k = component_group(p, Variant::Sbar).coords.len();
                    Some(arthur_multiplicity(p, &Gf2Vec::zero(k))?)
                } else {
                    None
                };
                out.push(json!({
                    "label": l,
                    "parameter": p.to_string(),
                    "m_phi": p.m_phi(),
                    "c_tilde": fmt_q(&c_tilde(p)?),
                    "stable_coefficient": fmt_q(&stable_multiplicity_coeff(&consts, p)?),
                    "trivial_character_multiplicity": trivial,
                    "packet": to_value(&packet_orbit_stats(p)?),
                }));
            }
            Ok(json!({ "parameters": out }))
        }
        Command::Smo { exception_places, place, .. } => smo(cli, spec, exception_places, place),
    }
}

fn analyze(label: &str, p: &Parameter) -> Result<Value> {
    let sbar = component_group(p, Variant::Sbar);
    let st = s_tilde(p)?;
    let classes: Vec<Value> = p_phi(p, false).classes.iter().map(to_value).collect();
    let alpha: Vec<String> = alpha_image(p, Variant::Sbar)
        .basis()
        .iter()
        .map(|&b| Gf2Vec::from_bits(b, p.char_dim()).to_string())
        .collect();
    Ok(json!({
        "label": label,
        "parameter": p.to_string(),
        "target": p.target().to_string(),
        "discrete": p.is_discrete(),
        "m_phi": p.m_phi(),
        "s_order": sbar.order().to_string(),
        "s_sigma0_order": component_group(p, Variant::SbarSigma0).order().to_string(),
        "s_tilde_order": st.order_linear.to_string(),
        "p_phi": classes,
        "s_tilde_classes": st.classes.iter().map(to_value).collect::<Vec<_>>(),
        "alpha_image_basis": alpha,
        "packet": to_value(&packet_orbit_stats(p)?),
    }))
}

fn endoscopy(cli: &Cli, spec: &SpecModel) -> Result<Value> {
    let d = spec.char_dim;
    if d > MAX_UNIVERSE_DIM {
        return Err(Error::Unsupported(format!("character universe of dimension {d} is too large to enumerate")));
    }
    let universe: Vec<Gf2Vec> = (0..1u64 << d).map(|b| Gf2Vec::from_bits(b, d)).collect();
    let mut groups = Vec::new();
    for (l, g) in &spec.groups {
        if !g.is_simple() {
            continue;
        }
        let data = enumerate_elliptic(g, cli.theta, &universe)?
            .iter()
            .map(|datum| {
                // coefficients of twisted data are not tabulated
                let iota = match iota_full(datum) {
                    Ok(v) => Some(fmt_q(&v)),
                    Err(Error::Unsupported(_)) => None,
                    Err(e) => return Err(e),
                };
                Ok(json!({
                    "datum": datum.to_string(),
                    "endoscopic_group": datum.group().to_string(),
                    "omega": datum.omega,
                    "iota": iota,
                    "iota_simplified": if datum.similitude { Some(fmt_q(&iota_simplified(datum)?)) } else { None },
                }))
            })
            .collect::<Result<Vec<_>>>()?;
        groups.push(json!({ "label": l, "group": g.to_string(), "data": data }));
    }
    let mut params = Vec::new();
    for (l, p) in selected(cli, spec)? {
        if !p.target().is_simple() {
            continue;
        }
        let (group, elems) = theta_component(p, cli.theta)?;
        let mut seen = BTreeSet::new();
        let mut pairs = Vec::new();
        for v in elems {
            let x = c_map(&group, v)?;
            if !seen.insert(x.clone()) {
                continue;
            }
            let (datum, phi2) = endoscopic_pair(p, cli.theta, &x)?;
            pairs.push(json!({
                "x": to_value(&x),
                "datum": datum.to_string(),
                "endoscopic_parameter": phi2.to_string(),
            }));
        }
        params.push(json!({ "label": l, "parameter": p.to_string(), "pairs": pairs }));
    }
    Ok(json!({ "groups": groups, "parameters": params }))
}

fn smo(cli: &Cli, spec: &SpecModel, exceptions: &[String], places: &[String]) -> Result<Value> {
    let model = spec
        .model
        .as_ref()
        .ok_or_else(|| Error::Precondition("smo needs a character model in the spec file".into()))?;
    for v in exceptions.iter().chain(places) {
        model.place(v)?;
    }
    let places: Vec<String> = if places.is_empty() {
        model.places().iter().map(|p| p.id.clone()).collect()
    } else {
        places.to_vec()
    };
    let mut out = Vec::new();
    for (l, p) in selected(cli, spec)? {
        let checks = multiplicity_one_checks(model, p, &spec.profiles, exceptions)?;
        let mut at_places = Vec::new();
        for u in &places {
            for variant in [Variant::Sbar, Variant::SbarSigma0] {
                let inst = SmoInstance::from_parameter(model, p, &spec.profiles, u, variant)?;
                let entry = match smo_at_place_criterion(&inst) {
                    Ok(r) => json!({ "variant": variant, "report": to_value(&r) }),
                    Err(Error::Precondition(m)) => json!({ "variant": variant, "place": u, "skipped": m }),
                    Err(e) => return Err(e),
                };
                at_places.push(entry);
            }
        }
        out.push(json!({
            "label": l,
            "parameter": p.to_string(),
            "multiplicity_one": to_value(&checks),
            "strong_multiplicity_one_at_place": at_places,
        }));
    }
    Ok(json!({ "parameters": out }))
}

fn render_json<T: Serialize>(t: &T) -> String {
    let mut s = serde_json::to_string_pretty(t).expect("envelopes serialize");
    s.push('\n');
    s
}

fn render_text(command: &str, digest: Option<&str>, v: &Value) -> String {
    let mut out = format!("lpcomb {VERSION} {command}\n");
    if let Some(d) = digest {
        out.push_str(&format!("input sha256 {d}\n"));
    }
    write_value(&mut out, v, 0);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| matches!(x, Value::String(_) | Value::Number(_))) => {
            Some(format!("[{}]", a.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        write_value(out, x, indent + 1);
                    }
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        write_value(out, x, indent + 1);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}
