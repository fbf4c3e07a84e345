//! The `dcfax` command line.
//!
//! Every subcommand builds one JSON document. With `--pretty` the same
//! document is rendered as an indented `key: value` listing instead.
//!
//! Exit codes: 0 success, 1 negative verdict, 2 usage or input error,
//! 3 resource budget exceeded.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use dcfax::axioms::{self, Shape};
use dcfax::bounds::{self, BitBudget};
use dcfax::io::{parse_ideal_file, read_formula_text, IdealFile};
use dcfax::kernels::{self, KernelPresentation};
use dcfax::{gamma_set, print_poly, prolong, Error, FieldMode};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "dcfax",
    version,
    about = "Prolongations, kernels and axiom checks for differential fields"
)]
struct Cli {
    /// Print an indented listing instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Constants,
    Rational,
}

impl From<ModeArg> for FieldMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Constants => FieldMode::Constants,
            ModeArg::Rational => FieldMode::Rational,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ShapeArg {
    Naive,
    Sharp,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// The realization bound C(r, m, n).
    Bounds { r: u64, m: u64, n: u64 },
    /// List the multi-indices of degree at most r in m variables.
    Gamma {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        r: u32,
    },
    /// Dimensions and coordinate maps of one axiom instance.
    AxiomShape { n: usize, m: usize },
    /// Prolongation conditions of a level-0 ideal.
    ProlongVariety {
        file: PathBuf,
        #[arg(long, conflicts_with = "all")]
        k: Option<usize>,
        /// All derivations at once (the default).
        #[arg(long)]
        all: bool,
    },
    /// Check the containment hypothesis of the naive or sharp axiom.
    CheckContainment {
        file: PathBuf,
        #[arg(long, value_enum)]
        shape: ShapeArg,
    },
    /// Validate a differential kernel.
    KernelCheck { file: PathBuf },
    /// Prolong a kernel to a given length or to its realization bound.
    KernelProlong {
        file: PathBuf,
        #[arg(
            long,
            conflicts_with = "to_bound",
            required_unless_present = "to_bound"
        )]
        to: Option<u32>,
        #[arg(long)]
        to_bound: bool,
    },
    /// Compile a differential formula into an axiom instance.
    CompileFormula {
        file: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value = "constants")]
        mode: ModeArg,
    },
    /// Built-in demonstrations.
    Demo {
        #[command(subcommand)]
        which: DemoCommand,
    },
}

#[derive(Debug, Subcommand)]
enum DemoCommand {
    /// The two-derivation counterexample to the naive axiom.
    Counterexample {
        #[arg(long, value_enum, default_value = "constants")]
        mode: ModeArg,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    code: i32,
    body: Value,
}

impl Report {
    fn ok(body: Value) -> Self {
        Report {
            code: EXIT_OK,
            body,
        }
    }

    fn verdict(positive: bool, body: Value) -> Self {
        Report {
            code: if positive { EXIT_OK } else { EXIT_NEGATIVE },
            body,
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

enum Failure {
    Core(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Core(Error::Resource(_)) => EXIT_RESOURCE,
            _ => EXIT_USAGE,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Io(msg) => msg.clone(),
        }
    }
}

pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let result = BitBudget::from_env()
        .map_err(Failure::from)
        .and_then(|budget| execute(&cli.command, budget));
    match result {
        Ok(report) => {
            let mut stdout = if cli.pretty {
                render(&report.body)
            } else {
                serde_json::to_string_pretty(&report.body).expect("json")
            };
            stdout.push('\n');
            Outcome {
                code: report.code,
                stdout,
                stderr: String::new(),
            }
        }
        Err(e) => Outcome {
            code: e.code(),
            stdout: String::new(),
            stderr: format!("error: {}\n", e.message()),
        },
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<IdealFile, Failure> {
    Ok(parse_ideal_file(&read_file(path)?)?)
}

fn execute(cmd: &Command, budget: BitBudget) -> Result<Report, Failure> {
    match cmd {
        Command::Bounds { r, m, n } => Ok(bounds_cmd(*r, *m, *n, budget)?),
        Command::Gamma { m, r } => {
            if *m == 0 {
                return Err(Error::InvalidDimension("m must be at least 1".into()).into());
            }
            let g = gamma_set(*m, *r)?;
            Ok(Report::ok(json!({
                "m": m,
                "r": r,
                "count": g.len(),
                "elements": g.iter().map(|xi| xi.to_string()).collect::<Vec<_>>(),
            })))
        }
        Command::AxiomShape { n, m } => {
            let shape = axioms::axiom_shape(*n, *m, budget)?;
            let mut body = to_json(&shape);
            body["materialized"] = json!(shape.maps.is_some());
            if let Some(maps) = &shape.maps {
                let labels: Vec<String> = (0..maps.alpha)
                    .map(|p| {
                        let (i, xi) = maps.label(p).expect("position in layout");
                        format!("x{i}_{xi}")
                    })
                    .collect();
                body["coordinates"] = json!(labels);
                body["pi"] = json!(maps.pi_indices);
                body["psi"] = json!(maps.psi_indices);
                body["phi"] = json!(maps.phi_blocks);
            }
            Ok(Report::ok(body))
        }
        Command::ProlongVariety { file, k, all: _ } => {
            let f = load(file)?;
            let ideal = f.ideal();
            let sys = match k {
                Some(k) => prolong::prolong_one(&ideal, *k, &f.ctx)?,
                None => prolong::prolong_delta(&ideal, &f.ctx)?,
            };
            Ok(Report::ok(json!({
                "n": f.ctx.n,
                "m": f.ctx.m,
                "mode": f.ctx.mode,
                "ks": sys.ks,
                "ambient_dimension": sys.ambient_dimension(),
                "base": sys.base.reduced_gb().iter().map(print_poly).collect::<Vec<_>>(),
                "conditions": to_json(&sys.conditions),
            })))
        }
        Command::CheckContainment { file, shape } => {
            let f = load(file)?;
            let (n, m) = (f.ctx.n, f.ctx.m);
            let shape = match shape {
                ShapeArg::Naive => Shape::Naive { m, n },
                ShapeArg::Sharp => Shape::Sharp { n, m },
            };
            let v = axioms::containment_check(&f.ideal(), &f.ctx, shape, budget)?;
            Ok(Report::verdict(v.holds, to_json(&v)))
        }
        Command::KernelCheck { file } => {
            let kp = load(file)?.kernel()?;
            let report = kernels::kernel_validate(&kp)?;
            Ok(Report::verdict(report.valid, to_json(&report)))
        }
        Command::KernelProlong { file, to, to_bound } => {
            let kp = load(file)?.kernel()?;
            Ok(kernel_prolong_cmd(&kp, *to, *to_bound, budget)?)
        }
        Command::CompileFormula { file, m, mode } => {
            let text = read_formula_text(&read_file(file)?);
            let compiled = axioms::compile_formula(&text, *m, (*mode).into(), budget)?;
            Ok(Report::ok(to_json(&compiled)))
        }
        Command::Demo {
            which: DemoCommand::Counterexample { mode },
        } => {
            let report = axioms::counterexample_demo((*mode).into())?;
            let positive = report.kernel_status == "prolonged";
            Ok(Report::verdict(positive, to_json(&report)))
        }
    }
}

fn bounds_cmd(r: u64, m: u64, n: u64, budget: BitBudget) -> Result<Report, Error> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidDimension("m and n must be at least 1".into()));
    }
    let c = bounds::bound_c(r, m, n, budget)?;
    let closed = bounds::closed_form(r, m, n).map(|(name, value)| {
        json!({
            "formula": name,
            "value": value.to_str_radix(10),
            "agrees": value == c,
        })
    });
    let agrees = closed.as_ref().is_none_or(|c| c["agrees"] == json!(true));
    Ok(Report::verdict(
        agrees,
        json!({
            "r": r,
            "m": m,
            "n": n,
            "c": c.to_str_radix(10),
            "bits": c.bits(),
            "closed_form": closed,
        }),
    ))
}

fn kernel_json(kp: &KernelPresentation) -> Value {
    json!({
        "length": kp.r,
        "ideal": kp.ideal.reduced_gb().iter().map(print_poly).collect::<Vec<_>>(),
        "inverted": kp.inverted.iter().map(print_poly).collect::<Vec<_>>(),
    })
}

fn kernel_prolong_cmd(
    kp: &KernelPresentation,
    to: Option<u32>,
    to_bound: bool,
    budget: BitBudget,
) -> Result<Report, Error> {
    let validation = kernels::kernel_validate(kp)?;
    if !validation.valid {
        return Ok(Report::verdict(
            false,
            json!({ "status": "invalid", "validation": to_json(&validation) }),
        ));
    }
    let target = match (to, to_bound) {
        (Some(s), _) => s,
        (None, _) => {
            let c = kernels::realization_bound(kp, budget)?;
            u32::try_from(&c)
                .ok()
                .filter(|&s| s <= kp.r.saturating_add(64))
                .ok_or_else(|| {
                    Error::Resource(format!("realization bound {c} is too far to prolong to"))
                })?
        }
    };
    let res = kernels::kernel_prolong_to(kp, target, budget)?;
    let mut body = json!({
        "status": if res.is_prolonged() { "prolonged" } else { "obstructed" },
        "from": kp.r,
        "target": res.target,
        "reached": res.last.r,
        "bound": res.bound.as_ref().map(|b| b.to_str_radix(10)),
        "realization_certified": res.realization_certified,
        "kernel": kernel_json(&res.last),
        "obstruction": Value::Null,
    });
    if let Some(o) = &res.obstruction {
        let mut w = to_json(o);
        w["relation"] = json!(o.relation());
        w["verified"] = json!(o.verify(&res.last));
        body["obstruction"] = w;
    }
    Ok(Report::verdict(res.is_prolonged(), body))
}

/// Indented `key: value` listing of a JSON document.
pub fn render(v: &Value) -> String {
    let mut out = String::new();
    render_into(v, 0, &mut out);
    while out.ends_with('\n') {
        out.pop();
    }
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.is_empty() => Some("(none)".into()),
        Value::Array(a) if a.iter().all(|x| x.is_number()) => Some(
            a.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" "),
        ),
        _ => None,
    }
}

fn render_into(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            let width = map.keys().map(|k| k.len()).max().unwrap_or(0);
            for (k, x) in map {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k:<width$}  {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}\n"));
                        render_into(x, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        render_into(x, depth + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}
