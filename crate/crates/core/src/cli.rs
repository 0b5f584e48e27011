//! Command-line front end. `run` is the whole program minus process setup, so
//! tests can drive it with in-memory writers.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{fmt_complex, fmt_g17, AnyBasis, Biquat, NormKind};
use crate::analytic::{parse, ParseError, DEFAULT_NODES};
use crate::espace::{singular_lines, xi_pair, AlgebraParams, E3Point, LineLabel};
use crate::error::Error;
use crate::monogenic::{check_monogenic, GMonogenicMap, GateauxReport, MapSpec};
use crate::series::expand;
use crate::singularity::{
    classify, default_radii, probe_limit, ComponentKind, ProbeOptions, ProbeRecord, ProbeTarget,
    SingularityReport, Trend, DEFAULT_DEPTH,
};

pub const NODES_ENV: &str = "BIQUAT_NODES";

#[derive(Debug, Parser)]
#[command(name = "biquat", version, about = "Complex quaternion analysis toolkit")]
pub struct Cli {
    /// Output format; defaults to text on a terminal and json otherwise.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Quadrature nodes per circle (power of two, >= 16). Overrides BIQUAT_NODES.
    #[arg(long, global = true)]
    pub nodes: Option<usize>,
    /// Seed for probe direction sampling.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Algebra operations on biquaternion JSON files.
    #[command(subcommand)]
    Quat(QuatCmd),
    /// Print the lines L1 and L2 of non-invertible elements.
    Lines {
        #[arg(long)]
        params: PathBuf,
    },
    /// Evaluate a mapping or check its Gateaux derivative.
    #[command(subcommand)]
    Map(MapCmd),
    /// Expand a mapping in a quaternionic Taylor or Laurent series.
    #[command(subcommand)]
    Series(SeriesCmd),
    /// Classify the point `center` for a mapping.
    Classify(ClassifyArgs),
}

#[derive(Debug, Subcommand)]
pub enum QuatCmd {
    /// Left-to-right product of all inputs.
    Mul {
        #[arg(required = true, num_args = 1..)]
        files: Vec<PathBuf>,
    },
    Inv { file: PathBuf },
    Norm { file: PathBuf },
    /// Converts e-basis input to {1, I, J, K} and vice versa.
    Convert { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum MapCmd {
    Eval {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_parser = parse_point)]
        point: E3Point,
    },
    Check {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_parser = parse_point)]
        point: E3Point,
        /// Direction in E3; defaults to each of i1, i2, i3.
        #[arg(long, value_parser = parse_point)]
        h: Option<E3Point>,
        #[arg(long, value_delimiter = ',', default_value = "1e-3,1e-4,1e-5")]
        eps: Vec<f64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum SeriesCmd {
    Taylor(SeriesArgs),
    Laurent(SeriesArgs),
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long, value_parser = parse_point)]
    pub center: E3Point,
    #[arg(long, default_value_t = 1.0)]
    pub rho1: f64,
    #[arg(long, default_value_t = 1.0)]
    pub rho2: f64,
    /// Lowest index; 0 for taylor, -hi by default for laurent.
    #[arg(long, allow_hyphen_values = true)]
    pub lo: Option<i32>,
    #[arg(long)]
    pub hi: i32,
    /// Also evaluate the series and the mapping at this point.
    #[arg(long, value_parser = parse_point)]
    pub eval: Option<E3Point>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long, value_parser = parse_point)]
    pub center: E3Point,
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    pub depth: usize,
    #[arg(long, default_value_t = 1.0)]
    pub rho1: f64,
    #[arg(long, default_value_t = 1.0)]
    pub rho2: f64,
    /// Attach a numerical limit probe to the report.
    #[arg(long)]
    pub probe: bool,
    /// Probe towards a point on center + L1 or center + L2 instead of the center.
    #[arg(long, value_enum)]
    pub line: Option<LineArg>,
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    pub line_offset: f64,
    /// Decreasing probe radii.
    #[arg(long, value_delimiter = ',')]
    pub radii: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LineArg {
    L1,
    L2,
}

fn parse_point(s: &str) -> Result<E3Point, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected x,y,z but got '{s}'"));
    }
    let mut v = [0.0; 3];
    for (slot, p) in v.iter_mut().zip(&parts) {
        let x: f64 = p.parse().map_err(|_| format!("'{p}' is not a number"))?;
        if !x.is_finite() {
            return Err(format!("'{p}' is not finite"));
        }
        *slot = x;
    }
    Ok(E3Point::from_array(v))
}

/// Failure with its exit code: 1 for validation, 2 for parse errors.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn validation(message: impl Into<String>) -> Self {
        CliError { code: 1, message: message.into() }
    }

    fn parse(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let module = match &e {
            Error::NonFinite(_) | Error::SingularElement(_) => "algebra",
            Error::InvalidParams(_) | Error::DegenerateLine { .. } => "espace",
            Error::Parse(_) | Error::EvalSingular(_) | Error::NumericalBreakdown(_) => "analytic",
            Error::Inconclusive(_) => "singularity",
            Error::InvalidArgument(_) => "argument",
        };
        let code = if matches!(e, Error::Parse(_)) { 2 } else { 1 };
        CliError { code, message: format!("[{module}] {e}") }
    }
}

type CliResult<T> = Result<T, CliError>;

/// Output of one command in both renderings.
struct Output {
    json: Value,
    text: String,
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable output")
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write, stdout_is_terminal: bool) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { write!(out, "{rendered}") } else { write!(err, "{rendered}") };
            return code;
        }
    };
    let format = cli.format.unwrap_or(if stdout_is_terminal { Format::Text } else { Format::Json });
    match execute(&cli) {
        Ok(o) => {
            let rendered = match format {
                Format::Json => serde_json::to_string_pretty(&o.json).expect("json"),
                Format::Text => o.text.trim_end().to_string(),
            };
            let _ = writeln!(out, "{rendered}");
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

fn resolve_nodes(flag: Option<usize>) -> CliResult<usize> {
    if let Some(n) = flag {
        return Ok(n);
    }
    match std::env::var(NODES_ENV) {
        Ok(v) => v.trim().parse::<usize>().map_err(|_| {
            CliError::validation(format!("[cli] {NODES_ENV}='{v}' is not a positive integer"))
        }),
        Err(_) => Ok(DEFAULT_NODES),
    }
}

fn execute(cli: &Cli) -> CliResult<Output> {
    let nodes = resolve_nodes(cli.nodes)?;
    if nodes == 0 {
        return Err(CliError::validation("[cli] nodes must be positive"));
    }
    match &cli.command {
        Command::Quat(q) => quat(q),
        Command::Lines { params } => lines(params),
        Command::Map(MapCmd::Eval { spec, point }) => map_eval(spec, *point),
        Command::Map(MapCmd::Check { spec, point, h, eps }) => map_check(spec, *point, *h, eps),
        Command::Series(SeriesCmd::Taylor(a)) => series(a, true, nodes),
        Command::Series(SeriesCmd::Laurent(a)) => series(a, false, nodes),
        Command::Classify(a) => classify_cmd(a, nodes, cli.seed),
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::validation(format!("[cli] cannot read {}: {e}", path.display())))
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let start: usize = text.split_inclusive('\n').take(line.saturating_sub(1)).map(str::len).sum();
    (start + column.saturating_sub(1)).min(text.len())
}

/// Parses JSON text; syntax errors map to exit code 2 with a byte offset.
fn json_value(path: &Path, text: &str) -> CliResult<Value> {
    serde_json::from_str(text).map_err(|e| {
        CliError::parse(format!(
            "[cli] {}: JSON parse error at byte {}: {e}",
            path.display(),
            byte_offset(text, e.line(), e.column())
        ))
    })
}

fn from_value<T: serde::de::DeserializeOwned>(path: &Path, what: &str, v: Value) -> CliResult<T> {
    serde_json::from_value(v)
        .map_err(|e| CliError::validation(format!("[cli] {}: not a valid {what}: {e}", path.display())))
}

fn read_biquat(path: &Path) -> CliResult<(AnyBasis, Biquat)> {
    let text = read(path)?;
    let any: AnyBasis = from_value(path, "biquaternion (e-basis or {one, I, J, K})", json_value(path, &text)?)?;
    Ok((any, any.to_biquat()))
}

fn read_map(path: &Path) -> CliResult<GMonogenicMap> {
    let text = read(path)?;
    let value = json_value(path, &text)?;
    // report expression errors with their byte offset before schema validation
    if let Some(comps) = value.get("components").and_then(Value::as_object) {
        for (name, c) in comps {
            if let Some(expr) = c.as_str() {
                parse(expr).map_err(|e: ParseError| {
                    CliError::parse(format!("[analytic] {}: component {name}: {e}", path.display()))
                })?;
            }
        }
    }
    let spec: MapSpec = from_value(path, "mapping spec", value)?;
    Ok(spec.into_map()?)
}

fn quat(cmd: &QuatCmd) -> CliResult<Output> {
    match cmd {
        QuatCmd::Mul { files } => {
            let mut acc = Biquat::ONE;
            for f in files {
                acc = acc * read_biquat(f)?.1;
            }
            Ok(Output { json: to_json(&acc), text: acc.to_string() })
        }
        QuatCmd::Inv { file } => {
            let inv = read_biquat(file)?.1.inverse()?;
            Ok(Output { json: to_json(&inv), text: inv.to_string() })
        }
        QuatCmd::Norm { file } => {
            let b = read_biquat(file)?.1;
            let (e, ijk) = (b.norm(NormKind::EBasis), b.norm(NormKind::IJKBasis));
            Ok(Output {
                json: json!({ "EBasis": e, "IJKBasis": ijk }),
                text: format!("EBasis: {}\nIJKBasis: {}", fmt_g17(e), fmt_g17(ijk)),
            })
        }
        QuatCmd::Convert { file } => match read_biquat(file)? {
            (AnyBasis::E(b), _) => {
                let q = b.to_ijk();
                Ok(Output { json: to_json(&q), text: q.to_string() })
            }
            (AnyBasis::Ijk(_), b) => Ok(Output { json: to_json(&b), text: b.to_string() }),
        },
    }
}

fn lines(path: &Path) -> CliResult<Output> {
    let text = read(path)?;
    let params: AlgebraParams = from_value(path, "AlgebraParams", json_value(path, &text)?)?;
    let (l1, l2) = singular_lines(&params)?;
    let mut t = String::new();
    for l in [&l1, &l2] {
        let [dx, dy, dz] = l.direction;
        let _ = writeln!(
            t,
            "{}: point {}  direction ({}, {}, {})",
            l.label,
            l.point,
            fmt_g17(dx),
            fmt_g17(dy),
            fmt_g17(dz)
        );
    }
    Ok(Output { json: to_json(&[l1, l2]), text: t })
}

fn map_eval(path: &Path, point: E3Point) -> CliResult<Output> {
    let m = read_map(path)?;
    let value = m.eval(point)?;
    let (xi1, xi2) = xi_pair(point, &m.params);
    Ok(Output {
        json: json!({
            "point": point,
            "xi1": [xi1.re, xi1.im],
            "xi2": [xi2.re, xi2.im],
            "value": value,
            "norm": value.norm_e(),
        }),
        text: format!(
            "xi1 = {}  xi2 = {}\n{}\nnorm = {}",
            fmt_complex(xi1),
            fmt_complex(xi2),
            value,
            fmt_g17(value.norm_e())
        ),
    })
}

fn map_check(path: &Path, point: E3Point, h: Option<E3Point>, eps: &[f64]) -> CliResult<Output> {
    let m = read_map(path)?;
    let dirs = match h {
        Some(h) => vec![h],
        None => vec![E3Point::new(1.0, 0.0, 0.0), E3Point::new(0.0, 1.0, 0.0), E3Point::new(0.0, 0.0, 1.0)],
    };
    let mut reports: Vec<(E3Point, GateauxReport)> = Vec::new();
    for d in dirs {
        reports.push((d, check_monogenic(&m, point, d, eps)?));
    }
    let mut t = String::new();
    for (d, r) in &reports {
        let _ = writeln!(t, "h = {d} ({} ordering)", r.order_side);
        for s in &r.samples {
            let _ = writeln!(t, "  eps = {:e}  residual = {}", s.eps, fmt_g17(s.residual));
        }
        if let Some(o) = r.convergence_order {
            let _ = writeln!(t, "  order = {}", fmt_g17(o));
        }
    }
    let json = Value::Array(
        reports.iter().map(|(d, r)| json!({ "h": d, "report": r })).collect(),
    );
    Ok(Output { json, text: t })
}

fn series(a: &SeriesArgs, taylor: bool, nodes: usize) -> CliResult<Output> {
    let lo = match (taylor, a.lo) {
        (true, Some(lo)) if lo != 0 => {
            return Err(CliError::validation(format!(
                "[series] a Taylor series starts at lo = 0, got --lo {lo}"
            )))
        }
        (true, _) => 0,
        (false, Some(lo)) => lo,
        (false, None) => -a.hi,
    };
    let m = read_map(&a.spec)?;
    let s = expand(&m, a.center, a.rho1, a.rho2, lo, a.hi, nodes)?;
    let mut t = String::new();
    let (xi10, xi20) = s.xi_center();
    let _ = writeln!(
        t,
        "{} series around {} (xi10 = {}, xi20 = {}), n = {}..{}",
        s.side,
        s.center,
        fmt_complex(xi10),
        fmt_complex(xi20),
        s.lo,
        s.hi()
    );
    for n in s.lo..=s.hi() {
        let _ = writeln!(t, "p[{n}] = {}", s.coeff(n));
    }
    let mut json = to_json(&s);
    if let Some(p) = a.eval {
        let (sv, dv, tail) = (s.eval(p)?, m.eval(p)?, s.tail_bound(p)?);
        let residual = (sv - dv).norm_e();
        let _ = writeln!(t, "at {p}: series {sv}\n        direct {dv}");
        let _ = writeln!(t, "residual = {}  tail = {}", fmt_g17(residual), fmt_g17(tail));
        json = json!({
            "series": json,
            "eval": { "point": p, "series_value": sv, "direct_value": dv,
                      "residual": residual, "tail_bound": tail },
        });
    }
    Ok(Output { json, text: t })
}

fn classify_cmd(a: &ClassifyArgs, nodes: usize, seed: u64) -> CliResult<Output> {
    let m = read_map(&a.spec)?;
    let mut report = classify(&m, a.center, a.rho1, a.rho2, a.depth, nodes)?;
    if a.probe {
        let target = match a.line {
            None => ProbeTarget::Center,
            Some(LineArg::L1) => ProbeTarget::OnLine { line: LineLabel::L1, offset: a.line_offset },
            Some(LineArg::L2) => ProbeTarget::OnLine { line: LineLabel::L2, offset: a.line_offset },
        };
        let radii = a.radii.clone().unwrap_or_else(default_radii);
        let opts = ProbeOptions { seed, ..ProbeOptions::default() };
        report.probe = Some(probe_limit(&m, a.center, target, &radii, opts)?);
    }
    Ok(Output { json: to_json(&report), text: report_text(&report) })
}

fn report_text(r: &SingularityReport) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "overall: {:?}", r.overall);
    for (k, v) in r.per_component.iter().enumerate() {
        let kind = match v.kind {
            ComponentKind::Regular => "Regular".to_string(),
            ComponentKind::Pole { order } => format!("Pole(order {order})"),
            ComponentKind::Essential => "Essential".to_string(),
        };
        let idx = v.max_sig_neg_index.map_or("-".to_string(), |i| i.to_string());
        let _ = writeln!(t, "F{}: {kind}  deepest significant index {idx}", k + 1);
    }
    let lines: Vec<String> = r.affected_lines.iter().map(|l| l.to_string()).collect();
    let _ = writeln!(t, "affected lines: {}", if lines.is_empty() { "none".into() } else { lines.join(", ") });
    if let Some(p) = &r.probe {
        let _ = writeln!(t, "{}", probe_text(p));
    }
    t
}

fn probe_text(p: &ProbeRecord) -> String {
    let trend = match &p.trend {
        Trend::Converging(v) => format!("Converging to {v}"),
        Trend::Diverging => "Diverging".into(),
        Trend::Oscillating => "Oscillating".into(),
        Trend::Indeterminate => "Indeterminate".into(),
    };
    let slope = p.slope.map_or("-".into(), fmt_g17);
    format!("probe: {trend}  slope {slope}  spread {}", fmt_g17(p.spread))
}
