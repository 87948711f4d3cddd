//! The `bncert` command line.
//!
//! Exit codes: 0 when the claim is established or a sweep is clean, 1 when a
//! claim is not established or a sweep finds violations, 2 on usage or domain
//! errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::audit::{self, AuditOptions, SweepRange};
use crate::json::{dec, to_canonical};
use crate::numerics::{main_1s_guarantee_raw, rho, Bounds, Instance, MAX_PARAM};
use crate::reduction::{
    decide_excellent, decide_good, verify_certificate, wh_parameters, Certificate, Claim, DecideError,
    GlueReading, GlueSplit, Rejection, Rule, SearchOptions, DEFAULT_DEPTH_LIMIT,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_ESTABLISHED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Stack for decisions and replays; certificates can nest deeply.
const WORKER_STACK: usize = 512 << 20;

#[derive(Debug, Parser)]
#[command(name = "bncert", version, about = "Certified point-passing bounds for Brill-Noether curves")]
pub struct Cli {
    /// Emit canonical JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Brill-Noether number of (d, g, r).
    Rho(Triple),
    /// Every closed-form bound for (d, g, r).
    Bounds(Triple),
    /// Certify that (d, g, r, n) is good.
    Good(Decision),
    /// Certify that (d, g, r, n) is excellent.
    Excellent(Decision),
    /// Apply one named rule at the root and decide its sub-claims automatically.
    Derive(Derive),
    /// Replay a certificate file.
    Verify {
        path: PathBuf,
    },
    /// Exhaustive sweeps.
    Audit(Audit),
    /// Brute-force oracles.
    Oracle {
        #[command(subcommand)]
        which: Oracle,
    },
}

#[derive(Debug, Args)]
pub struct Triple {
    #[arg(allow_negative_numbers = true)]
    pub d: i64,
    #[arg(allow_negative_numbers = true)]
    pub g: i64,
    #[arg(allow_negative_numbers = true)]
    pub r: i64,
}

#[derive(Debug, Args)]
pub struct Quad {
    #[arg(allow_negative_numbers = true)]
    pub d: i64,
    #[arg(allow_negative_numbers = true)]
    pub g: i64,
    #[arg(allow_negative_numbers = true)]
    pub r: i64,
    #[arg(allow_negative_numbers = true)]
    pub n: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReadingArg {
    #[value(name = "n2")]
    N2,
    #[value(name = "n1+n2")]
    Combined,
}

impl From<ReadingArg> for GlueReading {
    fn from(arg: ReadingArg) -> Self {
        match arg {
            ReadingArg::N2 => GlueReading::SecondSummand,
            ReadingArg::Combined => GlueReading::Combined,
        }
    }
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Maximum nesting of recursive sub-decisions.
    #[arg(long, default_value_t = DEFAULT_DEPTH_LIMIT)]
    pub depth: usize,
    /// Which `n` the gluing rule's second hypothesis uses.
    #[arg(long, value_enum, default_value = "n2")]
    pub glue_reading: ReadingArg,
}

impl SearchArgs {
    fn options(&self) -> SearchOptions {
        SearchOptions {
            depth_limit: self.depth,
            glue_reading: self.glue_reading.into(),
        }
    }
}

#[derive(Debug, Args)]
pub struct Decision {
    #[command(flatten)]
    pub quad: Quad,
    /// Write the certificate here on success.
    #[arg(long)]
    pub certificate: Option<PathBuf>,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    BaseExcellent,
    ThmMain1Excellent,
    ExcellentImpliesGood,
    AddCan,
    AddHalf,
    AddLine,
    DescendDegree,
    ExcGood,
    Glue,
    LemmaWh,
}

#[derive(Debug, Args)]
pub struct Derive {
    #[arg(value_enum)]
    pub rule: RuleArg,
    #[command(flatten)]
    pub quad: Quad,
    /// Degree of the rational curve for exc-good.
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<i64>,
    /// Number of degree steps for descend-degree.
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub steps: i64,
    /// Gluing split as `d1,g1,n1,d2,g2,n2,k`.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub split: Option<Vec<i64>>,
    #[arg(long)]
    pub certificate: Option<PathBuf>,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AuditKind {
    Appendix,
    TChoice,
    Needformain,
    Coverage,
}

#[derive(Debug, Args)]
pub struct Audit {
    #[arg(value_enum)]
    pub kind: AuditKind,
    #[arg(long, allow_negative_numbers = true)]
    pub r_min: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    pub r_max: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    pub d_max: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    pub g_max: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    pub n_max: Option<i64>,
    /// Worker threads; defaults to one per core, 1 runs serially.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Subcommand)]
pub enum Oracle {
    /// Number of general points by exhaustive scan over n.
    Guarantee(Triple),
}

/// A failed command: exit code plus message for the diagnostic stream.
struct Failure(i32, String);

impl Failure {
    fn usage(msg: impl ToString) -> Self {
        Failure(EXIT_USAGE, msg.to_string())
    }
}

type Outcome = Result<i32, Failure>;

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    std::thread::scope(|scope| {
        let worker = std::thread::Builder::new()
            .stack_size(WORKER_STACK)
            .spawn_scoped(scope, || dispatch(&cli, out))
            .expect("spawn worker thread");
        match worker.join().expect("worker thread panicked") {
            Ok(code) => code,
            Err(Failure(code, msg)) => {
                let _ = writeln!(err, "bncert: {msg}");
                code
            }
        }
    })
}

pub fn run() -> i32 {
    run_with(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr())
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure(EXIT_USAGE, format!("write failed: {e}")))
}

fn instance(q: &Quad) -> Result<Instance, Failure> {
    Instance::new(q.d, q.g, q.r, q.n).map_err(Failure::usage)
}

fn triple(t: &Triple, r_min: i64) -> Result<(i64, i64, i64), Failure> {
    Instance::new(t.d, t.g, t.r, 0).map_err(Failure::usage)?;
    if t.r < r_min {
        return Err(Failure::usage(format!("r = {} must be at least {r_min}", t.r)));
    }
    Ok((t.d, t.g, t.r))
}

/// Decision commands take `r >= 5`, `n <= d` and `rho >= 0`.
fn decision_instance(q: &Quad) -> Result<Instance, Failure> {
    let inst = instance(q)?;
    if inst.r < 5 {
        return Err(Failure::usage(format!("r = {} is out of scope: decisions need r >= 5", inst.r)));
    }
    if inst.n > inst.d {
        return Err(Failure::usage(format!("n = {} exceeds d = {}", inst.n, inst.d)));
    }
    if inst.rho() < 0 {
        return Err(Failure::usage(format!("rho{inst} = {} is negative", inst.rho())));
    }
    Ok(inst)
}

fn dispatch(cli: &Cli, out: &mut (dyn Write + Send)) -> Outcome {
    match &cli.command {
        Command::Rho(t) => {
            let (d, g, r) = triple(t, 2)?;
            let value = rho(d, g, r);
            let text = if cli.json {
                to_canonical(&RhoOut { d, g, r, rho: value })
            } else {
                format!("rho({d}, {g}, {r}) = {value}\n")
            };
            emit(out, &text)?;
            Ok(EXIT_OK)
        }
        Command::Bounds(t) => {
            let (d, g, r) = triple(t, 2)?;
            let bounds = Bounds::compute(d, g, r);
            let text = if cli.json { to_canonical(&bounds) } else { render_bounds(d, g, r, &bounds) };
            emit(out, &text)?;
            Ok(EXIT_OK)
        }
        Command::Good(args) => {
            let inst = decision_instance(&args.quad)?;
            let result = decide_good(&inst, &args.search.options());
            report_decision(cli.json, Claim::Good, inst, result, args.certificate.as_deref(), out)
        }
        Command::Excellent(args) => {
            let inst = decision_instance(&args.quad)?;
            let result = decide_excellent(&inst);
            report_decision(cli.json, Claim::Excellent, inst, result, args.certificate.as_deref(), out)
        }
        Command::Derive(args) => derive(cli.json, args, out),
        Command::Verify { path } => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
            let cert = Certificate::from_json(&text)
                .map_err(|e| Failure::usage(format!("{} is not a certificate: {e}", path.display())))?;
            let verdict = verify_certificate(&cert);
            let text = if cli.json {
                to_canonical(&VerifyOut {
                    claim: cert.claim,
                    instance: cert.instance,
                    verified: verdict.is_ok(),
                    nodes: cert.node_count() as u64,
                    error: verdict.as_ref().err().map(ToString::to_string),
                })
            } else {
                match &verdict {
                    Ok(()) => format!(
                        "verified: {} {} ({} nodes)\n",
                        cert.claim,
                        cert.instance,
                        cert.node_count()
                    ),
                    Err(e) => format!("verification failed: {e}\n"),
                }
            };
            emit(out, &text)?;
            Ok(if verdict.is_ok() { EXIT_OK } else { EXIT_NOT_ESTABLISHED })
        }
        Command::Audit(args) => run_audit(cli.json, args, out),
        Command::Oracle {
            which: Oracle::Guarantee(t),
        } => {
            let (d, g, r) = triple(t, 3)?;
            let brute = audit::brute_force_guarantee(d, g, r);
            let closed = main_1s_guarantee_raw(d, g, r);
            let agree = match brute {
                Some(v) => v == closed,
                None => closed < 0,
            };
            let text = if cli.json {
                to_canonical(&OracleOut {
                    brute_force: brute,
                    closed_form: closed,
                    agree,
                })
            } else {
                let shown = brute.map_or_else(|| "none".to_string(), |v| v.to_string());
                format!("brute force: {shown}\nclosed form: {closed}\nagree: {agree}\n")
            };
            emit(out, &text)?;
            Ok(if agree { EXIT_OK } else { EXIT_NOT_ESTABLISHED })
        }
    }
}

#[derive(Serialize)]
struct RhoOut {
    #[serde(with = "dec")]
    d: i64,
    #[serde(with = "dec")]
    g: i64,
    #[serde(with = "dec")]
    r: i64,
    #[serde(with = "dec")]
    rho: i64,
}

#[derive(Serialize)]
struct OracleOut {
    #[serde(with = "dec::option")]
    brute_force: Option<i64>,
    #[serde(with = "dec")]
    closed_form: i64,
    agree: bool,
}

#[derive(Serialize)]
struct VerifyOut {
    claim: Claim,
    instance: Instance,
    verified: bool,
    #[serde(serialize_with = "count")]
    nodes: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn count<S: serde::Serializer>(value: &u64, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(value)
}

#[derive(Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
enum DecisionOut<'a> {
    Established {
        claim: Claim,
        instance: Instance,
        certificate: &'a Certificate,
    },
    Rejected {
        claim: Claim,
        instance: Instance,
        rejection: &'a Rejection,
    },
    Incomplete {
        claim: Claim,
        instance: Instance,
        reason: String,
    },
}

fn render_bounds(d: i64, g: i64, r: i64, b: &Bounds) -> String {
    let opt = |v: Option<i64>| v.map_or_else(|| "n/a".to_string(), |v| v.to_string());
    format!(
        "bounds for (d, g, r) = ({d}, {g}, {r})\n\
         rho                {}\n\
         moduli dimension   {}\n\
         naive points       {}\n\
         main guarantee     {}\n\
         hyperplane naive   {}\n\
         hyperplane points  {}\n\
         capacity N_f       {}\n\
         capacity N_f(-1)   {}\n",
        b.rho,
        b.moduli_dim,
        b.naive_points,
        b.main_guarantee,
        b.hyperplane_naive,
        opt(b.main_1s_guarantee),
        b.capacity_normal,
        b.capacity_twist
    )
}

fn write_certificate(path: &Path, cert: &Certificate) -> Result<(), Failure> {
    std::fs::write(path, cert.to_json())
        .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))
}

fn report_decision(
    json: bool,
    claim: Claim,
    inst: Instance,
    result: Result<Certificate, DecideError>,
    certificate: Option<&Path>,
    out: &mut dyn Write,
) -> Outcome {
    match result {
        Ok(cert) => {
            if let Err(e) = verify_certificate(&cert) {
                // A produced certificate that fails replay is a bug, never a verdict.
                return Err(Failure(EXIT_NOT_ESTABLISHED, format!("internal error, certificate did not replay: {e}")));
            }
            if let Some(path) = certificate {
                write_certificate(path, &cert)?;
            }
            let text = if json {
                to_canonical(&DecisionOut::Established {
                    claim,
                    instance: inst,
                    certificate: &cert,
                })
            } else {
                format!("{claim} {inst}: established\n{}", cert.render())
            };
            emit(out, &text)?;
            Ok(EXIT_OK)
        }
        Err(DecideError::Rejected(rej)) => {
            let text = if json {
                to_canonical(&DecisionOut::Rejected {
                    claim,
                    instance: inst,
                    rejection: &rej,
                })
            } else {
                format!("{claim} {inst}: not established\n{rej}\n")
            };
            emit(out, &text)?;
            Ok(EXIT_NOT_ESTABLISHED)
        }
        Err(e @ DecideError::DepthExceeded { .. }) => {
            let text = if json {
                to_canonical(&DecisionOut::Incomplete {
                    claim,
                    instance: inst,
                    reason: e.to_string(),
                })
            } else {
                format!("{claim} {inst}: not established\n{e}\n")
            };
            emit(out, &text)?;
            Ok(EXIT_NOT_ESTABLISHED)
        }
        Err(e) => Err(Failure::usage(e)),
    }
}

fn derive(json: bool, args: &Derive, out: &mut dyn Write) -> Outcome {
    let inst = decision_instance(&args.quad)?;
    let rule = match args.rule {
        RuleArg::BaseExcellent => Rule::BaseExcellent,
        RuleArg::ThmMain1Excellent => Rule::ThmMain1Excellent,
        RuleArg::ExcellentImpliesGood => Rule::ExcellentImpliesGood,
        RuleArg::AddCan => Rule::AddCan,
        RuleArg::AddHalf => Rule::AddHalf,
        RuleArg::AddLine => Rule::AddLine,
        RuleArg::DescendDegree => Rule::DescendDegree { steps: args.steps },
        RuleArg::ExcGood => Rule::ExcGood {
            b: args.b.ok_or_else(|| Failure::usage("exc-good needs --b"))?,
        },
        RuleArg::Glue => {
            let s = match args.split.as_deref() {
                Some(s) if s.len() == 7 => s,
                _ => return Err(Failure::usage("glue needs --split d1,g1,n1,d2,g2,n2,k")),
            };
            Rule::Glue(GlueSplit {
                d1: s[0],
                g1: s[1],
                n1: s[2],
                d2: s[3],
                g2: s[4],
                n2: s[5],
                k: s[6],
                reading: args.search.glue_reading.into(),
            })
        }
        RuleArg::LemmaWh => {
            let p = wh_parameters(&inst);
            Rule::LemmaWh { x: p.x, y: p.y, z: p.z }
        }
    };
    let within = |v: i64| (-MAX_PARAM..=MAX_PARAM).contains(&v);
    let numbers = [args.b.unwrap_or(0), args.steps]
        .into_iter()
        .chain(args.split.iter().flatten().copied());
    if !numbers.into_iter().all(within) {
        return Err(Failure::usage(format!("rule parameters must lie within +-{MAX_PARAM}")));
    }

    let step = match rule.apply(&inst) {
        Ok(step) => step,
        Err(rej) => {
            let result = Err(DecideError::Rejected(rej));
            return report_decision(json, rule.claim(), inst, result, None, out);
        }
    };
    let opts = args.search.options();
    let mut children = Vec::with_capacity(step.children.len());
    if let Rule::LemmaWh { .. } = rule {
        // The recipe node's child is the expanded chain itself.
        let cert = crate::reduction::lemma_wh_reduction(&inst).map_err(DecideError::Rejected);
        return report_decision(json, rule.claim(), inst, cert, args.certificate.as_deref(), out);
    }
    for (claim, child) in &step.children {
        let sub = match claim {
            Claim::Good => decide_good(child, &opts),
            Claim::Excellent => decide_excellent(child),
        };
        match sub {
            Ok(cert) => children.push(cert),
            Err(DecideError::OutOfScope { .. } | DecideError::Domain(_)) => {
                let msg = format!("sub-claim {claim} {child} is outside the decision domain");
                return Err(Failure(EXIT_NOT_ESTABLISHED, msg));
            }
            Err(e) => return report_decision(json, rule.claim(), inst, Err(e), None, out),
        }
    }
    let cert = Certificate::derive(rule, inst, children).map_err(DecideError::Rejected);
    report_decision(json, rule.claim(), inst, cert, args.certificate.as_deref(), out)
}

fn run_audit(json: bool, args: &Audit, out: &mut dyn Write) -> Outcome {
    let base = match args.kind {
        AuditKind::Appendix => SweepRange::appendix(),
        AuditKind::TChoice => SweepRange::t_choice(),
        AuditKind::Needformain => SweepRange::needformain(),
        AuditKind::Coverage => SweepRange {
            r_min: 5,
            r_max: 10,
            d_max: 150,
            g_max: MAX_PARAM,
            n_max: None,
        },
    };
    let d_max = args.d_max.unwrap_or(base.d_max);
    // Unless given, the genus cap follows the degree cap.
    let g_default = match args.kind {
        AuditKind::TChoice => d_max,
        AuditKind::Needformain => d_max + d_max / 5,
        _ => base.g_max,
    };
    let range = SweepRange {
        r_min: args.r_min.unwrap_or(base.r_min),
        r_max: args.r_max.unwrap_or(base.r_max),
        d_max,
        g_max: args.g_max.unwrap_or(g_default),
        n_max: args.n_max,
    };
    range.validate().map_err(Failure::usage)?;
    let opts = AuditOptions {
        jobs: args.jobs.unwrap_or(0),
        search: args.search.options(),
    };
    let report = match args.kind {
        AuditKind::Appendix => audit::audit_appendix(&range, &opts),
        AuditKind::TChoice => audit::audit_t_choice(&range, &opts),
        AuditKind::Needformain => audit::audit_cor_needformain(&range, &opts),
        AuditKind::Coverage => audit::audit_coverage(&range, &opts),
    };
    let text = if json {
        report.to_json()
    } else {
        let mut text = String::new();
        for v in &report.violations {
            let detail = match &v.detail {
                audit::Detail::Rejection(rej) => rej.to_string(),
                audit::Detail::Check(check) => check.to_string(),
                audit::Detail::Message(msg) => msg.clone(),
            };
            text.push_str(&format!("violation at {} [{}]: {detail}\n", v.instance, v.stage));
        }
        if let Some(cases) = &report.excluded_cases {
            let shown: Vec<String> = cases.iter().map(|t| format!("({}, {}, {})", t.d, t.g, t.r)).collect();
            text.push_str(&format!("excluded cases: {{{}}}\n", shown.join(", ")));
        }
        text.push_str(&report.summary());
        text.push('\n');
        text
    };
    emit(out, &text)?;
    Ok(if report.is_clean() { EXIT_OK } else { EXIT_NOT_ESTABLISHED })
}
