//! Command-line front end. `run` does all the work and returns the exit code
//! and the text for stdout/stderr, so tests can drive it without a process.

use std::collections::BTreeSet;
use std::io::Read;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use cuspcheck::blowup::{self, TowerState};
use cuspcheck::error::Error;
use cuspcheck::extremal;
use cuspcheck::indicial;
use cuspcheck::io::{self, affine_json, matrix_json, polytope_json, rational_json, vector_json};
use cuspcheck::moments;
use cuspcheck::obstruction::{self, MomentConfiguration, ObstructionReport};
use cuspcheck::polytope::DelzantPolytope;
use cuspcheck::rational::{parse_rational, Rational};

pub mod report;

use report::{digest, render_pretty, Diagnostic, Report, Status};

#[derive(Parser, Debug)]
#[command(name = "cuspcheck", version, about = "Exact checks for toric blow-ups and indicial roots")]
struct Cli {
    /// Render a text table instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Exact output only (the default).
    #[arg(long, global = true, conflicts_with = "float")]
    exact: bool,
    /// Add decimal renderings with this many digits next to the exact values.
    #[arg(long, global = true, value_name = "DIGITS")]
    float: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Input {
    /// Input JSON file, or `-` for stdin.
    #[arg(default_value = "-")]
    input: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate vertices and check the Delzant condition.
    Vertices(Input),
    /// Volume, first and second moments of the polytope and of each facet.
    Moments(Input),
    /// Extremal affine function relative to excluded facets.
    ExtremalAffine {
        #[command(flatten)]
        input: Input,
        /// Facet labels (or indices) to exclude, comma separated.
        #[arg(long, value_delimiter = ',')]
        exclude: Vec<String>,
    },
    /// Chop one vertex.
    Blowup {
        #[command(flatten)]
        input: Input,
        /// Vertex coordinates, comma separated rationals.
        #[arg(long, allow_hyphen_values = true)]
        vertex: String,
        #[arg(long)]
        eps: String,
    },
    /// Repeatedly chop every new fixed point away from a facet.
    Tower {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        facet: String,
        #[arg(long, default_value_t = 1)]
        rounds: usize,
        /// One depth for all rounds, or one per round.
        #[arg(long, value_delimiter = ',')]
        eps: Vec<String>,
    },
    /// Compare the pair's affine function along a facet with the facet's own.
    CheckObstruction {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        facet: String,
    },
    /// Balance, genericity and kernel conditions on a moment configuration.
    CheckHypotheses {
        #[command(flatten)]
        input: Input,
        /// Treat the input as a polytope and use its torus data.
        #[arg(long, requires = "facet")]
        toric: bool,
        #[arg(long)]
        facet: Option<String>,
    },
    /// Indicial roots of a spectrum inside a window.
    IndicialRoots {
        #[arg(long)]
        pairs: String,
        #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
        window: String,
        /// Also certify this weight.
        #[arg(long, allow_hyphen_values = true)]
        eta: Option<f64>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Vertices(_) => "vertices",
            Command::Moments(_) => "moments",
            Command::ExtremalAffine { .. } => "extremal-affine",
            Command::Blowup { .. } => "blowup",
            Command::Tower { .. } => "tower",
            Command::CheckObstruction { .. } => "check-obstruction",
            Command::CheckHypotheses { .. } => "check-hypotheses",
            Command::IndicialRoots { .. } => "indicial-roots",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Entry point used by the binary: colour follows `CUSPCHECK_COLOR`.
pub fn run<I, T>(argv: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let color = std::env::var("CUSPCHECK_COLOR").map(|v| v != "0").unwrap_or(true);
    run_with(argv, stdin, color)
}

pub fn run_with<I, T>(argv: I, stdin: &mut dyn Read, color: bool) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 1, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    let mut report = Report::new(cli.command.name());
    if let Err(f) = execute(&cli.command, stdin, &mut report) {
        report.status = f.status;
        report.result = Value::Null;
        report.diagnostics.extend(f.diagnostics);
    }
    let doc = report.to_json(cli.float);
    let stdout = if cli.pretty {
        render_pretty(&doc, color)
    } else {
        let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
        s.push('\n');
        s
    };
    Outcome { code: report.status.exit_code(), stdout, stderr: String::new() }
}

struct Failure {
    status: Status,
    diagnostics: Vec<Diagnostic>,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self { status: Status::InputError, diagnostics: vec![Diagnostic::error(message)] }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Internal(_) | Error::ChartMismatch => Status::InternalError,
            _ => Status::InputError,
        };
        Self { status, diagnostics: vec![Diagnostic::error(e.to_string())] }
    }
}

impl From<Vec<io::ValidationError>> for Failure {
    fn from(errs: Vec<io::ValidationError>) -> Self {
        Self { status: Status::InputError, diagnostics: errs.into_iter().map(Diagnostic::from).collect() }
    }
}

type Step<T> = std::result::Result<T, Failure>;

fn read_document(path: &str, stdin: &mut dyn Read, report: &mut Report) -> Step<Value> {
    let mut bytes = Vec::new();
    let read = if path == "-" {
        stdin.read_to_end(&mut bytes).map(|_| ())
    } else {
        std::fs::read(path).map(|b| bytes = b)
    };
    read.map_err(|e| Failure::input(format!("cannot read {path}: {e}")))?;
    report.input_digest = Some(digest(&bytes));
    serde_json::from_slice(&bytes).map_err(|e| Failure::input(format!("invalid JSON: {e}")))
}

fn read_polytope(path: &str, stdin: &mut dyn Read, report: &mut Report) -> Step<DelzantPolytope> {
    let doc = read_document(path, stdin, report)?;
    Ok(io::parse_polytope(&doc)?)
}

fn resolve_facet(p: &DelzantPolytope, name: &str) -> Step<usize> {
    if let Some(i) = p.facet_by_label(name) {
        return Ok(i);
    }
    match name.parse::<usize>() {
        Ok(i) if i < p.facets().len() => Ok(i),
        _ => Err(Failure::input(format!("no facet labelled {name:?}"))),
    }
}

fn parse_rational_arg(s: &str, what: &str) -> Step<Rational> {
    parse_rational(s.trim()).map_err(|_| Failure::input(format!("{what}: invalid rational {s:?}")))
}

fn facet_ref(p: &DelzantPolytope, i: usize) -> Value {
    let f = &p.facets()[i];
    json!({ "index": i, "label": f.label, "normal": f.normal, "offset": rational_json(&f.offset) })
}

fn delzant_json(p: &DelzantPolytope) -> Value {
    let rep = p.is_delzant();
    let violations: Vec<Value> = rep
        .violations
        .iter()
        .map(|v| {
            json!({
                "vertex": v.vertex,
                "point": vector_json(&v.point),
                "active_facets": v.active_facets,
                "determinant": v.determinant.as_ref().map(rational_json),
            })
        })
        .collect();
    json!({ "is_delzant": rep.is_delzant, "violations": violations })
}

fn obstruction_json(p: &DelzantPolytope, r: &ObstructionReport) -> Value {
    json!({
        "facet": r.facet,
        "facet_label": p.facets()[r.facet].label,
        "satisfied": r.satisfied,
        "offset": r.offset.as_ref().map(rational_json),
        "difference_gradient": vector_json(&r.difference_gradient),
        "pair": affine_json(&r.pair),
        "restricted": affine_json(&r.restricted),
        "facet_affine": affine_json(&r.facet_affine),
    })
}

fn execute(cmd: &Command, stdin: &mut dyn Read, report: &mut Report) -> Step<()> {
    match cmd {
        Command::Vertices(inp) => {
            let p = read_polytope(&inp.input, stdin, report)?;
            let vertices: Vec<Value> = p
                .vertices()
                .iter()
                .map(|v| json!({ "point": vector_json(&v.point), "active_facets": v.active_facets }))
                .collect();
            report.result = json!({
                "dim": p.dim(),
                "facet_count": p.facets().len(),
                "vertices": vertices,
                "delzant": delzant_json(&p),
            });
        }
        Command::Moments(inp) => {
            let p = read_polytope(&inp.input, stdin, report)?;
            let m = moments::polytope_moments(&p)?;
            let b = moments::boundary_moments(&p, &BTreeSet::new())?;
            let facets: Vec<Value> = b
                .facets
                .iter()
                .map(|f| {
                    json!({
                        "facet": f.facet,
                        "label": p.facets()[f.facet].label,
                        "measure": rational_json(&f.measure),
                        "first_moments": vector_json(&f.first_moments),
                        "second_moments": matrix_json(&f.second_moments),
                    })
                })
                .collect();
            report.result = json!({
                "volume": rational_json(&m.volume),
                "first_moments": vector_json(&m.first_moments),
                "second_moments": matrix_json(&m.second_moments),
                "facets": facets,
            });
        }
        Command::ExtremalAffine { input, exclude } => {
            let p = read_polytope(&input.input, stdin, report)?;
            let excluded = exclude.iter().map(|s| resolve_facet(&p, s)).collect::<Step<BTreeSet<_>>>()?;
            let r = extremal::extremal_affine(&p, &excluded)?;
            if r.multiple_exclusions {
                report
                    .diagnostics
                    .push(Diagnostic::warning("more than one excluded facet: outside the single-divisor setting"));
            }
            report.result = json!({
                "excluded": excluded.iter().collect::<Vec<_>>(),
                "excluded_labels": excluded.iter().map(|&i| p.facets()[i].label.clone()).collect::<Vec<_>>(),
                "affine": affine_json(&r.affine),
                "gram": matrix_json(&r.gram),
                "rhs": vector_json(&r.rhs),
                "residuals": vector_json(&r.residuals),
                "beyond_single_divisor": r.multiple_exclusions,
            });
        }
        Command::Blowup { input, vertex, eps } => {
            let p = read_polytope(&input.input, stdin, report)?;
            let point = vertex
                .split(',')
                .map(|s| parse_rational_arg(s, "--vertex"))
                .collect::<Step<Vec<_>>>()?;
            if point.len() != p.dim() {
                return Err(Failure::input(format!("--vertex has {} coordinates, expected {}", point.len(), p.dim())));
            }
            let eps = parse_rational_arg(eps, "--eps")?;
            let bound = blowup::max_chop_parameter(&p, &point)?;
            let q = blowup::blow_up_vertex(&p, &point, &eps)?;
            let before = moments::polytope_moments(&p)?.volume;
            let after = moments::polytope_moments(&q)?.volume;
            report.result = json!({
                "vertex": vector_json(&point),
                "parameter": rational_json(&eps),
                "max_parameter": rational_json(&bound),
                "exceptional_facet": facet_ref(&q, q.facets().len() - 1),
                "volume_loss": rational_json(&(before - after)),
                "delzant": q.is_delzant().is_delzant,
                "polytope": polytope_json(&q),
            });
        }
        Command::Tower { input, facet, rounds, eps } => {
            let p = read_polytope(&input.input, stdin, report)?;
            let f = resolve_facet(&p, facet)?;
            let schedule = eps.iter().map(|s| parse_rational_arg(s, "--eps")).collect::<Step<Vec<_>>>()?;
            let schedule = match schedule.len() {
                0 => return Err(Failure::input("--eps is required")),
                1 => vec![schedule[0].clone(); *rounds],
                n if n == *rounds => schedule,
                n => return Err(Failure::input(format!("--eps lists {n} depths for {rounds} rounds"))),
            };
            let mut state = TowerState::new(p, f)?;
            let initial = obstruction::check_facet_condition(&state.polytope, f)?;
            let mut log = Vec::new();
            for eps in &schedule {
                let chopped: Vec<Value> = state.designated()?.iter().map(|v| vector_json(&v.point)).collect();
                state = blowup::tower_step(&state, eps)?;
                let check = obstruction::check_facet_condition(&state.polytope, f)?;
                log.push(json!({
                    "round": state.round - 1,
                    "parameter": rational_json(eps),
                    "chopped": chopped,
                    "new_facets": state.last_new_facets().iter().map(|&i| facet_ref(&state.polytope, i)).collect::<Vec<_>>(),
                    "delzant": state.polytope.is_delzant().is_delzant,
                    "obstruction": obstruction_json(&state.polytope, &check),
                }));
            }
            if state.schedule_varies() {
                report.diagnostics.push(Diagnostic::warning(
                    "depth changes between rounds; only equal depths within a round are covered by the symmetry argument",
                ));
            }
            report.result = json!({
                "facet": f,
                "initial_obstruction": obstruction_json(&state.polytope, &initial),
                "rounds": log,
                "all_satisfied": log.iter().all(|r| r["obstruction"]["satisfied"] == json!(true)),
                "polytope": polytope_json(&state.polytope),
            });
        }
        Command::CheckObstruction { input, facet } => {
            let p = read_polytope(&input.input, stdin, report)?;
            let f = resolve_facet(&p, facet)?;
            let r = obstruction::check_facet_condition(&p, f)?;
            if !r.satisfied {
                report.status = Status::Violated;
            }
            report.result = obstruction_json(&p, &r);
        }
        Command::CheckHypotheses { input, toric, facet } => {
            let cfg = if *toric {
                let p = read_polytope(&input.input, stdin, report)?;
                let f = resolve_facet(&p, facet.as_deref().unwrap_or_default())?;
                MomentConfiguration::toric_free(&p, f)?
            } else {
                let doc = read_document(&input.input, stdin, report)?;
                io::parse_configuration(&doc)?
            };
            hypotheses(&cfg, report)?;
        }
        Command::IndicialRoots { pairs, window, eta } => {
            let doc = read_document(pairs, stdin, report)?;
            let spectrum = io::parse_spectrum(&doc)?;
            let (lo, hi) = parse_window(window)?;
            if spectrum.scale != 1.0 && !spectrum.explicit_coefficients {
                report.diagnostics.push(Diagnostic::warning(
                    "scale differs from 1 but no coefficients were given; default model coefficients used",
                ));
            }
            let coeffs = &spectrum.coefficients;
            let roots = indicial::roots_in_window_with(&spectrum.pairs, lo, hi, coeffs)?;
            let mut result = json!({
                "window": [lo, hi],
                "pair_count": spectrum.pairs.len(),
                "coefficients": { "quartic": coeffs.quartic, "mixed": coeffs.mixed, "linear": coeffs.linear },
                "roots": roots.iter().map(root_json).collect::<Vec<_>>(),
            });
            if let Some(eta) = eta {
                let c = indicial::certify_weight_with(&spectrum.pairs, *eta, coeffs)?;
                result["certificate"] = json!({
                    "eta": eta,
                    "certified": c.certified,
                    "distance": c.distance,
                    "nearest": root_json(&c.nearest),
                });
            }
            report.result = result;
        }
    }
    Ok(())
}

fn hypotheses(cfg: &MomentConfiguration, report: &mut Report) -> Step<()> {
    let balance = obstruction::check_balance(cfg)?;
    let generic = obstruction::check_genericity(cfg)?;
    let kernel = match obstruction::check_kernel_condition(cfg) {
        Ok(k) => Some(k),
        Err(Error::MissingEvaluationData) => {
            report
                .diagnostics
                .push(Diagnostic::warning("no eval_matrix given; kernel condition not evaluated"));
            None
        }
        Err(e) => return Err(e.into()),
    };
    let all = balance.satisfied && generic.satisfied && kernel.as_ref().is_none_or(|k| k.satisfied);
    if !all {
        report.status = Status::Violated;
    }
    report.result = json!({
        "configuration": io::configuration_json(cfg),
        "balance": {
            "satisfied": balance.satisfied,
            "sum": vector_json(&balance.sum),
            "residual": vector_json(&balance.residual),
        },
        "genericity": { "satisfied": generic.satisfied, "rank": generic.rank, "h_dim": generic.h_dim },
        "kernel": kernel.map(|k| json!({
            "satisfied": k.satisfied,
            "null_basis": matrix_json(&k.null_basis),
            "outside_t": k.outside_t,
        })),
        "satisfied": all,
    });
    Ok(())
}

fn parse_window(s: &str) -> Step<(f64, f64)> {
    let parts: Vec<&str> = s.split(',').collect();
    let parsed: Option<Vec<f64>> = parts.iter().map(|x| x.trim().parse::<f64>().ok()).collect();
    match parsed.as_deref() {
        Some([lo, hi]) if lo < hi => Ok((*lo, *hi)),
        _ => Err(Failure::input(format!("--window expects lo,hi with lo < hi, got {s:?}"))),
    }
}

fn root_json(r: &indicial::IndicialRoot) -> Value {
    json!({
        "re": r.delta.re,
        "im": r.delta.im,
        "s_re": r.s_value.re,
        "s_im": r.s_value.im,
        "lambda": r.source.lambda,
        "mu": r.source.mu,
        "mult": r.source.multiplicity,
    })
}
