//! Command-line front end.
//!
//! Every subcommand turns a [`JobSpec`] into a list of flat records that are
//! rendered as JSON Lines or CSV. Failures produce a single
//! `{code, field, message}` record on stdout and a nonzero exit status.

mod output;

pub use output::{error_record, format_sig, render, Format, Record};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::Value;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::exec::{self, ExecMode};
use crate::lie::RootSystem;
use crate::linalg::{Mat, Q};
use crate::seifert::{enumerate_components, torsion_prefactor, validate_seifert, ComponentLabel, SeifertData};
use crate::torsion::{seifert_mv_scalar, suite};
use crate::volumes::{
    abelian_components, abelian_mv_verify, abelian_torsion_scalar, density_factor, reidemeister_volume_with,
    VolumeOptions,
};
use output::{float, rational, rationals};

pub const THREADS_ENV: &str = "SEIFERT_VOLUMES_THREADS";

pub const EXIT_OK: i32 = 0;
/// A check ran to completion and found a violated identity.
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CONVERGENCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "seifert-volumes", version, about = "Character varieties, torsion and volumes of Seifert manifolds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// List the component labels (v, u) with their dimensions.
    Components,
    /// Component labels with the torsion prefactor of each.
    Prefactor,
    /// Reidemeister volumes of the positive-dimensional components.
    Volume,
    /// The U(1) case: Euler number, torsion scalar, density and labels.
    Abelian,
    /// Run the torsion property suite on random complexes.
    CheckTorsion,
    /// Cross-check the Mayer–Vietoris scalars against closed forms.
    MvVerify,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Lie type and rank, e.g. A1, C2, G2.
    #[arg(long, global = true)]
    pub group: Option<String>,
    /// Seifert invariants, e.g. "g=0; (2,1),(3,1),(5,1)".
    #[arg(long, global = true)]
    pub seifert: Option<String>,
    /// Bound on ⟨λ+ρ, λ+ρ⟩ for the character sum.
    #[arg(long, global = true)]
    pub truncation: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write records to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Multiple of the basic invariant inner product.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub scale: Option<f64>,
    /// Seed for the randomized checks.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Random instances per property in check-torsion.
    #[arg(long, global = true)]
    pub instances: Option<usize>,
    /// TOML file with any of the flags above; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

/// File form of [`Flags`].
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub group: Option<String>,
    pub seifert: Option<String>,
    pub truncation: Option<u64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub scale: Option<f64>,
    pub seed: Option<u64>,
    pub instances: Option<usize>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| Error::Parse {
            field: "config",
            message: e.message().to_string(),
        })
    }
}

/// A fully resolved job.
#[derive(Debug, Clone, PartialEq)]
pub struct JobSpec {
    pub command: Command,
    pub group: String,
    pub seifert: Option<String>,
    pub truncation: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub scale: f64,
    pub seed: u64,
    pub instances: usize,
}

impl JobSpec {
    pub const DEFAULT_GROUP: &'static str = "A1";
    pub const DEFAULT_TRUNCATION: u64 = 1_000_000;
    pub const DEFAULT_INSTANCES: usize = 100;

    pub fn new(command: Command) -> Self {
        JobSpec {
            command,
            group: Self::DEFAULT_GROUP.into(),
            seifert: None,
            truncation: Self::DEFAULT_TRUNCATION,
            format: Format::Json,
            out: None,
            scale: 1.0,
            seed: 0,
            instances: Self::DEFAULT_INSTANCES,
        }
    }

    pub fn resolve(command: Command, flags: Flags, config: Config) -> JobSpec {
        let d = JobSpec::new(command);
        JobSpec {
            command,
            group: flags.group.or(config.group).unwrap_or(d.group),
            seifert: flags.seifert.or(config.seifert),
            truncation: flags.truncation.or(config.truncation).unwrap_or(d.truncation),
            format: flags.format.or(config.format).unwrap_or(d.format),
            out: flags.out.or(config.out),
            scale: flags.scale.or(config.scale).unwrap_or(d.scale),
            seed: flags.seed.or(config.seed).unwrap_or(d.seed),
            instances: flags.instances.or(config.instances).unwrap_or(d.instances),
        }
    }

    fn seifert(&self) -> Result<SeifertData> {
        let raw = self.seifert.as_deref().ok_or(Error::Parse {
            field: "seifert",
            message: format!("--seifert is required for {}", self.command.name()),
        })?;
        parse_seifert(raw)
    }

    fn group(&self) -> Result<RootSystem> {
        RootSystem::parse(&self.group)
    }
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Components => "components",
            Command::Prefactor => "prefactor",
            Command::Volume => "volume",
            Command::Abelian => "abelian",
            Command::CheckTorsion => "check-torsion",
            Command::MvVerify => "mv-verify",
        }
    }
}

/// Parses `"g=G; (p1,q1),(p2,q2),…"`; whitespace is ignored and the
/// result is validated.
pub fn parse_seifert(raw: &str) -> Result<SeifertData> {
    let bad = |message: String| Error::Parse { field: "seifert", message };
    let compact: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
    let (head, tail) = compact
        .split_once(';')
        .ok_or_else(|| bad(format!("expected \"g=<genus>; (p,q),...\", got {raw:?}")))?;
    let genus: i64 = head
        .strip_prefix("g=")
        .and_then(|g| g.parse().ok())
        .ok_or_else(|| bad(format!("expected g=<integer>, got {head:?}")))?;
    let mut pairs = Vec::new();
    let mut rest = tail;
    while !rest.is_empty() {
        let inner = rest
            .strip_prefix('(')
            .and_then(|r| r.split_once(')'))
            .ok_or_else(|| bad(format!("expected (p,q) at {rest:?}")))?;
        let (pair, after) = inner;
        let (p, q) = pair
            .split_once(',')
            .and_then(|(p, q)| Some((p.parse::<i64>().ok()?, q.parse::<i64>().ok()?)))
            .ok_or_else(|| bad(format!("expected two integers in ({pair})")))?;
        pairs.push((p, q));
        rest = after.strip_prefix(',').unwrap_or(after);
        if after.starts_with(',') && rest.is_empty() {
            return Err(bad("trailing comma".into()));
        }
    }
    validate_seifert(genus, pairs)
}

/// Outcome of a job: records plus whether a check reported a violation.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub records: Vec<Record>,
    pub check_failed: bool,
}

impl From<Vec<Record>> for Report {
    fn from(records: Vec<Record>) -> Self {
        Report {
            records,
            check_failed: false,
        }
    }
}

pub fn run(job: &JobSpec) -> Result<Report> {
    if !(job.scale > 0.0 && job.scale.is_finite()) {
        return Err(Error::Parse {
            field: "scale",
            message: format!("scale must be positive, got {}", job.scale),
        });
    }
    match job.command {
        Command::Components => {
            let (s, rs) = (job.seifert()?, job.group()?);
            Ok(enumerate_components(&s, &rs).iter().map(label_record).collect::<Vec<_>>().into())
        }
        Command::Prefactor => {
            let (s, rs) = (job.seifert()?, job.group()?);
            let mut out = Vec::new();
            for label in enumerate_components(&s, &rs) {
                let pf = torsion_prefactor(&s, &rs, &label)?;
                let mut r = label_record(&label);
                r.insert("prefactor".into(), float(pf.value));
                r.insert("exact_square".into(), pf.exact_square.map_or(Value::Null, rational));
                out.push(r);
            }
            Ok(out.into())
        }
        Command::Volume => volume_records(job).map(Report::from),
        Command::Abelian => abelian_record(&job.seifert()?).map(|r| vec![r].into()),
        Command::CheckTorsion => {
            let reports = suite::run_suite(job.seed, job.instances, ExecMode::Parallel);
            let check_failed = reports.iter().any(|r| r.failed > 0);
            let records = reports
                .iter()
                .map(|p| {
                    let mut r = Record::new();
                    r.insert("property".into(), Value::String(p.property.into()));
                    r.insert("passed".into(), p.passed.into());
                    r.insert("failed".into(), p.failed.into());
                    r.insert("max_relative_error".into(), float(p.max_relative_error));
                    r
                })
                .collect();
            Ok(Report { records, check_failed })
        }
        Command::MvVerify => mv_record(&job.seifert()?, job.seed).map(|(r, ok)| Report {
            records: vec![r],
            check_failed: !ok,
        }),
    }
}

fn label_record(label: &ComponentLabel) -> Record {
    let mut r = Record::new();
    r.insert("v".into(), rationals(label.v.class().coords()));
    r.insert("u".into(), Value::Array(label.u.iter().map(|c| rationals(c.coords())).collect()));
    r.insert("dim".into(), label.dim.into());
    r.insert(
        "occupancy".into(),
        serde_json::to_value(label.occupancy()).expect("occupancy serializes"),
    );
    r
}

/// One record per positive-dimensional label. When there is none the
/// convergence error of the first label is returned.
fn volume_records(job: &JobSpec) -> Result<Vec<Record>> {
    let (s, rs) = (job.seifert()?, job.group()?);
    let labels = enumerate_components(&s, &rs);
    let opts = VolumeOptions::new(job.truncation).with_scale(job.scale);
    let mut out = Vec::new();
    for label in labels.iter().filter(|l| l.dim > 0) {
        let v = reidemeister_volume_with(&s, &rs, label, &opts)?;
        let mut r = label_record(label);
        r.insert("value".into(), float(v.value));
        r.insert("truncation".into(), v.truncation.into());
        r.insert("tail_estimate".into(), float(v.tail_estimate));
        r.insert("tail_kind".into(), serde_json::to_value(v.tail_kind).expect("tail kind serializes"));
        r.insert("terms".into(), v.terms.into());
        let n = v.normalization;
        let mut norm = Record::new();
        norm.insert("scale".into(), float(n.scale));
        norm.insert("constant".into(), float(n.constant));
        norm.insert("center_order".into(), n.center_order.into());
        norm.insert("dimension".into(), n.dimension.into());
        r.insert("normalization".into(), Value::Object(norm));
        out.push(r);
    }
    if out.is_empty() {
        let dim = labels.iter().map(|l| l.dim).max().unwrap_or(0);
        return Err(Error::NonConvergent { dim });
    }
    Ok(out)
}

fn abelian_record(s: &SeifertData) -> Result<Record> {
    let comps = abelian_components(s)?;
    let mut r = Record::new();
    r.insert("seifert".into(), Value::String(s.to_string()));
    r.insert("chi".into(), rational(&comps.euler));
    r.insert("torsion_scalar".into(), rational(abelian_torsion_scalar(s)?));
    r.insert("density_factor".into(), float(density_factor(s)?));
    let labels = comps
        .labels
        .iter()
        .map(|l| {
            let mut m = Record::new();
            m.insert("v".into(), rational(l.v));
            m.insert("u".into(), rationals(&l.u));
            Value::Object(m)
        })
        .collect();
    r.insert("labels".into(), Value::Array(labels));
    Ok(r)
}

/// Abelian scalar from the integer matrices against `χ∏pᵢ`, and the
/// general-rank scalar with one-dimensional `Vᵢ` against `∏pᵢ`, computed
/// for two different random completions.
fn mv_record(s: &SeifertData, seed: u64) -> Result<(Record, bool)> {
    let expected = abelian_torsion_scalar(s)?;
    let from_matrices = abelian_mv_verify(s)?;
    let n = s.n();
    let g = 2 * s.genus() as usize;
    let f = Mat::<Q>::identity(n).vcat(&Mat::zeros(g, n));
    let psi = Mat::<Q>::identity(g);
    let dims = vec![1; n];
    let first = seifert_mv_scalar(s, &dims, &f, &psi, seed)?;
    let second = seifert_mv_scalar(s, &dims, &f, &psi, seed.wrapping_add(1))?;
    let prod: Q = s.pairs().iter().map(|&(p, _)| Q::from_integer(p.into())).product();
    let abelian_ok = from_matrices == expected;
    let seifert_ok = first == prod && second == prod;
    let mut r = Record::new();
    r.insert("seifert".into(), Value::String(s.to_string()));
    r.insert("torsion_scalar".into(), rational(&expected));
    r.insert("abelian_mv".into(), rational(&from_matrices));
    r.insert("abelian_agrees".into(), abelian_ok.into());
    r.insert("seifert_mv_scalar".into(), rational(&first));
    r.insert("seifert_expected".into(), rational(&prod));
    r.insert("seifert_agrees".into(), seifert_ok.into());
    Ok((r, abelian_ok && seifert_ok))
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NonConvergent { .. } | Error::VanishingEuler => EXIT_CONVERGENCE,
        _ => EXIT_INPUT,
    }
}

/// The error field named in the record, when the error concerns one input.
pub fn error_field(e: &Error) -> Option<&'static str> {
    match e {
        Error::InvalidSeifert { .. } => Some("seifert"),
        Error::Parse { field, .. } => Some(field),
        Error::InvalidLieType { .. } => Some("group"),
        Error::NonConvergent { .. } | Error::VanishingEuler => Some("seifert"),
        _ => None,
    }
}

fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => v.trim().parse::<usize>().ok().filter(|&n| n > 0).map(Some).ok_or(Error::Parse {
            field: THREADS_ENV,
            message: format!("expected a positive integer, got {v:?}"),
        }),
    }
}

/// Parses `args`, runs the job and writes its output; returns the exit code.
/// Error records always go to `stdout` as JSON, even with `--out`.
pub fn main_with_args<I, T>(args: I, stdout: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_OK;
            }
            let message = e.to_string();
            let first = message.lines().next().unwrap_or("invalid arguments");
            write_error(stdout, &error_record("usage", None, first.trim_start_matches("error: ")));
            return EXIT_INPUT;
        }
    };
    let code = match execute(cli, stdout) {
        Ok(report) if report.check_failed => EXIT_CHECK_FAILED,
        Ok(_) => EXIT_OK,
        Err(e) => {
            write_error(stdout, &error_record(e.code(), error_field(&e), &e.to_string()));
            exit_code(&e)
        }
    };
    let _ = stdout.flush();
    code
}

fn write_error(stdout: &mut impl Write, rec: &Record) {
    let _ = stdout.write_all(render(std::slice::from_ref(rec), Format::Json).unwrap_or_default().as_bytes());
}

fn execute(cli: Cli, stdout: &mut impl Write) -> Result<Report> {
    exec::init_threads(threads_from_env()?);
    let config = match &cli.flags.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let job = JobSpec::resolve(cli.command, cli.flags, config);
    let report = run(&job)?;
    let text = render(&report.records, job.format)?;
    match &job.out {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String) {
        let mut buf = Vec::new();
        let code = main_with_args(std::iter::once("seifert-volumes").chain(args.iter().copied()), &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn seifert_descriptor() {
        let s = parse_seifert("g=1; (2,1), (3,-1)").unwrap();
        assert_eq!((s.genus(), s.pairs()), (1, &[(2, 1), (3, -1)][..]));
        assert_eq!(parse_seifert(&s.to_string()).unwrap(), s);
        for bad in ["", "g=0", "g=x; (2,1)", "g=0; (2,1", "g=0; (2)", "g=0; (2,1),", "g=0; [2,1]"] {
            assert_eq!(parse_seifert(bad).unwrap_err().code(), "parse", "{bad}");
        }
        assert_eq!(parse_seifert("g=0; (4,2)").unwrap_err().code(), "coprime");
        assert_eq!(parse_seifert("g=-1; (2,1)").unwrap_err().code(), "genus");
    }

    #[test]
    fn flags_override_config() {
        let flags = Flags {
            truncation: Some(7),
            ..Flags::default()
        };
        let config: Config = toml::from_str("truncation = 9\nscale = 2.0\ngroup = \"C2\"").unwrap();
        let job = JobSpec::resolve(Command::Volume, flags, config);
        assert_eq!((job.truncation, job.scale, job.group.as_str()), (7, 2.0, "C2"));
        assert!(toml::from_str::<Config>("colour = 1").is_err());
    }

    #[test]
    fn components_and_errors() {
        let (code, out) = run_args(&["components", "--group", "A1", "--seifert", "g=0; (2,1)"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 3);
        let (code, out) = run_args(&["components", "--seifert", "g=0; (4,2)"]);
        assert_eq!(code, EXIT_INPUT);
        let rec: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(rec["code"], "coprime");
        assert_eq!(rec["field"], "seifert");
        let (code, out) = run_args(&["volume", "--seifert", "g=0; (2,1),(3,1),(5,1)"]);
        assert_eq!(code, EXIT_CONVERGENCE, "{out}");
        let (code, _) = run_args(&["abelian", "--seifert", "g=0; (1,0)"]);
        assert_eq!(code, EXIT_CONVERGENCE);
        let (code, out) = run_args(&["volume", "--bogus"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(out.contains("\"usage\""));
        let (code, out) = run_args(&["volume", "--seifert", "g=2; (1,0)", "--scale", "-1"]);
        assert_eq!((code, out.contains("\"scale\"")), (EXIT_INPUT, true));
    }

    #[test]
    fn abelian_example() {
        let (code, out) = run_args(&["abelian", "--seifert", "g=0; (2,1),(3,1),(5,1)"]);
        assert_eq!(code, 0);
        let rec: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(rec["chi"], "-31/30");
        assert_eq!(rec["torsion_scalar"], "-31");
        assert!(out.contains("\"density_factor\":0.179605302026775,"));
        assert_eq!(rec["labels"].as_array().unwrap().len(), 31);
    }

    #[test]
    fn mv_verify_and_csv() {
        for s in ["g=0; (2,1),(3,1)", "g=1; (2,1)", "g=0; (1,1)", "g=2; (3,2),(5,-1)"] {
            let (code, out) = run_args(&["mv-verify", "--seifert", s]);
            assert_eq!(code, 0, "{out}");
        }
        let (code, out) = run_args(&["prefactor", "--seifert", "g=0; (2,1),(3,1)", "--format", "csv"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().next().unwrap(), "v,u,dim,occupancy,prefactor,exact_square");
    }
}
