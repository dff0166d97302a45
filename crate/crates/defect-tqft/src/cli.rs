//! Command-line front end: argument parsing, input loading and report
//! emission. Every run produces one document with the fields `command`,
//! `inputs`, `config`, `results` and `residuals`.

use std::collections::BTreeMap;
use std::ffi::OsString;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::defect_data::{build_group_defect_data, build_rt_defect_data, validate_defect_data, DefectData, GroupTable};
use crate::error::{Error, Result};
use crate::fusion::{validate_category, FusionCategoryData};
use crate::gray::{
    check_gray_axioms, check_model_equivalence, evaluate_3d_diagram, AxiomConfig, GrayModel, Movie, Payload,
    ThreeMorphism, TwoMorphismDiagram,
};
use crate::report::ValidationReport;
use crate::strata::{bundled_manifold, refine, validate_bordism, DecoratedSurface, RefineMove, StratifiedBordism};
use crate::tqft_engines::{closed_invariant, state_space, statesum_map, triv_invariant, triv_state_space, Engine};

/// Environment variable overriding the default tolerance.
pub const TOLERANCE_ENV: &str = "DEFECT_TQFT_TOLERANCE";

const COHERENCE_TOL: f64 = 1e-9;
const INVARIANT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Text,
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Triv,
    Statesum,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::Triv => Engine::Triv,
            EngineArg::Statesum => Engine::Statesum,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MoveArg {
    EdgeSubdivide,
    FaceStar,
    CellCone,
}

impl From<MoveArg> for RefineMove {
    fn from(m: MoveArg) -> Self {
        match m {
            MoveArg::EdgeSubdivide => RefineMove::EdgeSubdivide,
            MoveArg::FaceStar => RefineMove::FaceStar,
            MoveArg::CellCone => RefineMove::CellCone,
        }
    }
}

/// Defect TQFTs in three dimensions: validators, invariants and Gray
/// category checks.
#[derive(Debug, Parser)]
#[command(name = "defect-tqft", version)]
struct Cli {
    #[command(flatten)]
    config: ConfigArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ConfigArgs {
    /// Numerical tolerance; defaults to 1e-9 for coherence checks and 1e-6
    /// for invariants.
    #[arg(long, global = true, env = TOLERANCE_ENV)]
    pub tolerance: Option<f64>,
    /// Longest word enumerated from a defect data oracle, 8 unless the
    /// defect data file sets it.
    #[arg(long, global = true)]
    pub max_word_length: Option<usize>,
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub output: OutputFormat,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Checks the pentagon and the other coherence conditions of a category.
    ValidateCategory { category: String },
    /// Checks the chain condition of every line label.
    ValidateDefectData { defect_data: String },
    /// Checks the strata of a bordism against defect data.
    ValidateBordism {
        #[arg(long)]
        defect_data: String,
        #[arg(long)]
        bordism: String,
    },
    /// Dimension of the 3-morphism space between two parallel diagrams.
    HomDim {
        #[arg(long, value_enum)]
        engine: EngineArg,
        #[arg(long)]
        category: String,
        /// File holding `{"source": diagram, "target": diagram}`.
        #[arg(long)]
        diagrams: String,
    },
    /// The value of an engine on a bordism.
    Invariant {
        #[arg(long, value_enum)]
        engine: EngineArg,
        #[arg(long)]
        category: String,
        #[arg(long)]
        bordism: String,
    },
    /// Colouring blocks and rank of the state space of a surface.
    StateSpace {
        #[arg(long, value_enum, default_value_t = EngineArg::Statesum)]
        engine: EngineArg,
        #[arg(long)]
        category: String,
        #[arg(long)]
        surface: String,
    },
    /// Runs the Gray category axiom suite and the model cross-checks.
    GrayCheck {
        #[arg(long, value_enum)]
        engine: EngineArg,
        #[arg(long)]
        category: String,
        #[arg(long)]
        defect_data: String,
        #[arg(long, default_value_t = 40)]
        sample: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Evaluates a movie of diagrams to a 3-morphism.
    EvalDiagram {
        #[arg(long, value_enum)]
        engine: EngineArg,
        #[arg(long)]
        category: String,
        #[arg(long)]
        movie: String,
    },
    /// Applies one refinement move to a bordism.
    Refine {
        #[arg(long)]
        bordism: String,
        #[arg(long = "move", value_enum)]
        mv: MoveArg,
        #[arg(long)]
        site: usize,
        #[arg(long, default_value = "1")]
        neutral: String,
    },
}

/// Result of one run.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub document: Value,
    pub text: String,
}

impl Outcome {
    /// What the binary prints for the chosen output format.
    pub fn rendered(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Text => self.text.clone(),
            OutputFormat::Structured => serde_json::to_string_pretty(&self.document).expect("json value"),
        }
    }
}

fn read_or(name: &str) -> Option<String> {
    std::fs::read_to_string(name).ok()
}

/// A defect data file, or one of `trivial`, `z<n>`, `z2xz2`, `s3`, `rt:<labels>`.
pub fn load_defect_data(name: &str, max_word_len: Option<usize>) -> Result<DefectData> {
    let mut dd = if let Some(text) = read_or(name) {
        DefectData::from_json(&text)?
    } else if let Some(labels) = name.strip_prefix("rt:") {
        build_rt_defect_data(&labels.split(',').map(str::to_string).collect())?
    } else {
        let g = match name {
            "trivial" => GroupTable::trivial(),
            "z2xz2" => GroupTable::direct_product(&GroupTable::cyclic(2), &GroupTable::cyclic(2)),
            "s3" => GroupTable::symmetric3(),
            _ => match name.strip_prefix('z').and_then(|n| n.parse::<usize>().ok()) {
                Some(n) if n >= 1 => GroupTable::cyclic(n),
                _ => return Err(Error::Parse(format!("no defect data file or family named {name}"))),
            },
        };
        build_group_defect_data(&g)?
    };
    if let Some(n) = max_word_len {
        dd.max_word_len = n;
    }
    Ok(dd)
}

/// A bordism file or a bundled manifold name.
pub fn load_bordism(name: &str) -> Result<StratifiedBordism> {
    match read_or(name) {
        Some(text) => StratifiedBordism::from_json(&text),
        None => bundled_manifold(name).map_err(|_| Error::Parse(format!("no bordism file or manifold named {name}"))),
    }
}

/// A surface file, or one of `sphere`, `circle:<l>`, `dipole:<l,..>`,
/// `theta:<a,b,c>`, `torus:<a,b>`.
pub fn load_surface(name: &str) -> Result<DecoratedSurface> {
    if let Some(text) = read_or(name) {
        return DecoratedSurface::from_json(&text);
    }
    let (kind, args) = name.split_once(':').unwrap_or((name, ""));
    let labels: Vec<&str> = args.split(',').filter(|s| !s.is_empty()).collect();
    match (kind, labels.as_slice()) {
        ("sphere", []) => Ok(DecoratedSurface::sphere()),
        ("circle", [l]) => Ok(DecoratedSurface::sphere_with_circle(l)),
        ("dipole", ls) if !ls.is_empty() => Ok(DecoratedSurface::dipole(ls)),
        ("theta", [a, b, c]) => Ok(DecoratedSurface::theta([a, b, c])),
        ("torus", [a, b]) => Ok(DecoratedSurface::torus(a, b)),
        _ => Err(Error::Parse(format!("no surface file or shape named {name}"))),
    }
}

fn load_json<T: serde::de::DeserializeOwned>(path: &str) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
    Ok(serde_json::from_str(&text)?)
}

#[derive(serde::Deserialize)]
struct DiagramPair {
    source: TwoMorphismDiagram,
    target: TwoMorphismDiagram,
}

fn complex(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn payload_json(phi: &ThreeMorphism) -> Value {
    match &phi.payload {
        Payload::Scalar(z) => json!({ "scalar": complex(*z) }),
        Payload::Blocks(blocks) => Value::Array(
            blocks
                .iter()
                .map(|((s, t), m)| {
                    let rows: Vec<Vec<i64>> = m.row_iter().map(|r| r.iter().copied().collect()).collect();
                    json!({ "source": s, "target": t, "matrix": rows })
                })
                .collect(),
        ),
    }
}

fn residual_table(rep: &ValidationReport) -> Value {
    let max: BTreeMap<&str, f64> = rep.residuals.iter().map(|(n, r)| (n.as_str(), *r)).collect();
    json!(max)
}

fn report_text(rep: &ValidationReport) -> String {
    let mut out = String::new();
    if !rep.residuals.is_empty() {
        let width = rep.residuals.iter().map(|(n, _)| n.chars().count()).max().unwrap_or(0);
        for (n, r) in &rep.residuals {
            let count = rep.checked.get(n).copied().unwrap_or(0);
            out.push_str(&format!("{n:<width$}  max residual {r:.3e}  over {count} checks\n"));
        }
    }
    for v in &rep.violations {
        out.push_str(&format!("violation at {}: {}\n", v.location, v.message));
    }
    out.push_str(if rep.is_clean() { "clean\n" } else { "not clean\n" });
    out
}

struct Run {
    inputs: Value,
    results: Value,
    report: Option<ValidationReport>,
    text: String,
}

fn validated(inputs: Value, rep: ValidationReport) -> Run {
    let text = report_text(&rep);
    let results = json!({ "clean": rep.is_clean(), "violations": rep.violations });
    Run { inputs, results, report: Some(rep), text }
}

fn execute(command: &Command, cfg: &ConfigArgs) -> Result<Run> {
    let coherence_tol = cfg.tolerance.unwrap_or(COHERENCE_TOL);
    let invariant_tol = cfg.tolerance.unwrap_or(INVARIANT_TOL);
    Ok(match command {
        Command::ValidateCategory { category } => {
            let cat = FusionCategoryData::load(category)?;
            validated(json!({ "category": category }), validate_category(&cat, coherence_tol))
        }
        Command::ValidateDefectData { defect_data } => {
            let dd = load_defect_data(defect_data, cfg.max_word_length)?;
            validated(json!({ "defect_data": defect_data }), validate_defect_data(&dd))
        }
        Command::ValidateBordism { defect_data, bordism } => {
            let dd = load_defect_data(defect_data, cfg.max_word_length)?;
            let b = load_bordism(bordism)?;
            let mut run = validated(json!({ "defect_data": defect_data, "bordism": bordism }), validate_bordism(&dd, &b));
            let fine = b.check_fine().err().map(|e| e.to_string());
            run.results["fine"] = json!(fine.is_none());
            run.results["counts"] = json!(b.counts());
            run.text.push_str(&format!("fine: {}\n", fine.as_deref().unwrap_or("yes")));
            run
        }
        Command::HomDim { engine, category, diagrams } => {
            let cat = FusionCategoryData::load(category)?;
            let pair: DiagramPair = load_json(diagrams)?;
            let m = GrayModel::new((*engine).into(), &cat);
            let dim = m.hom_space(&pair.source, &pair.target)?.dim;
            let sphere = m.sphere_dimension(&pair.source, &pair.target)?;
            Run {
                inputs: json!({ "engine": Engine::from(*engine), "category": category, "diagrams": diagrams }),
                results: json!({ "dim": dim, "sphere_dim": sphere }),
                report: None,
                text: format!("{dim}\n"),
            }
        }
        Command::Invariant { engine, category, bordism } => {
            let cat = FusionCategoryData::load(category)?;
            let b = load_bordism(bordism)?;
            let inputs = json!({ "engine": Engine::from(*engine), "category": category, "bordism": bordism });
            let (results, text) = match (Engine::from(*engine), b.is_closed()) {
                (Engine::Statesum, true) => {
                    let z = closed_invariant(&cat, &b)?;
                    let text = if z.im.abs() <= invariant_tol { format!("{:.10}\n", z.re) } else { format!("{z}\n") };
                    (json!({ "scalar": complex(z) }), text)
                }
                (Engine::Statesum, false) => {
                    let f = statesum_map(&cat, &b)?;
                    let rows: Vec<Vec<Value>> = f.matrix.row_iter().map(|r| r.iter().map(|z| complex(*z)).collect()).collect();
                    let text = format!("{}x{} map\n", f.matrix.nrows(), f.matrix.ncols());
                    (json!({ "rows": f.matrix.nrows(), "cols": f.matrix.ncols(), "matrix": rows }), text)
                }
                (Engine::Triv, _) => {
                    let f = triv_invariant(&cat, &b)?;
                    let rows: Vec<Vec<i64>> = f.matrix.row_iter().map(|r| r.iter().copied().collect()).collect();
                    let text = if f.matrix.shape() == (1, 1) {
                        format!("{}\n", f.matrix[(0, 0)])
                    } else {
                        format!("{}x{} map\n", f.matrix.nrows(), f.matrix.ncols())
                    };
                    (json!({ "rows": f.matrix.nrows(), "cols": f.matrix.ncols(), "matrix": rows }), text)
                }
            };
            Run { inputs, results, report: None, text }
        }
        Command::StateSpace { engine, category, surface } => {
            let cat = FusionCategoryData::load(category)?;
            let s = load_surface(surface)?;
            let space = match Engine::from(*engine) {
                Engine::Triv => triv_state_space(&cat, &s)?,
                Engine::Statesum => state_space(&cat, &s)?,
            };
            let mut text = String::new();
            for b in &space.blocks {
                text.push_str(&format!("colouring {:?}: dim {}\n", b.colouring, b.dim));
            }
            text.push_str(&format!("total {}\n", space.total_dim));
            if let Some(r) = space.rank {
                text.push_str(&format!("rank {r}\n"));
            }
            Run {
                inputs: json!({ "engine": Engine::from(*engine), "category": category, "surface": surface }),
                results: serde_json::to_value(&space)?,
                report: None,
                text,
            }
        }
        Command::GrayCheck { engine, category, defect_data, sample, seed } => {
            let cat = FusionCategoryData::load(category)?;
            let dd = load_defect_data(defect_data, cfg.max_word_length)?;
            let m = GrayModel::new((*engine).into(), &cat);
            let ac = AxiomConfig { sample: *sample, seed: *seed, tol: coherence_tol, ..AxiomConfig::default() };
            let mut rep = check_gray_axioms(&m, &dd, &ac);
            rep.merge(check_model_equivalence(&m, &dd, &ac));
            let inputs = json!({ "engine": Engine::from(*engine), "category": category, "defect_data": defect_data });
            let mut run = validated(inputs, rep);
            run.results["axiom_config"] = serde_json::to_value(&ac)?;
            run
        }
        Command::EvalDiagram { engine, category, movie } => {
            let cat = FusionCategoryData::load(category)?;
            let mv: Movie = load_json(movie)?;
            let m = GrayModel::new((*engine).into(), &cat);
            let phi = evaluate_3d_diagram(&m, &mv)?;
            let text = match &phi.payload {
                Payload::Scalar(z) => format!("{z}\n"),
                Payload::Blocks(b) => format!("{} blocks\n", b.len()),
            };
            Run {
                inputs: json!({ "engine": Engine::from(*engine), "category": category, "movie": movie }),
                results: json!({ "source": phi.source, "target": phi.target, "payload": payload_json(&phi) }),
                report: None,
                text,
            }
        }
        Command::Refine { bordism, mv, site, neutral } => {
            let b = load_bordism(bordism)?;
            let r = refine(&b, (*mv).into(), *site, neutral)?;
            Run {
                inputs: json!({ "bordism": bordism, "move": RefineMove::from(*mv), "site": site, "neutral": neutral }),
                text: format!("{}\n", serde_json::to_string(&r)?),
                results: serde_json::to_value(&r)?,
                report: None,
            }
        }
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::ValidateCategory { .. } => "validate-category",
        Command::ValidateDefectData { .. } => "validate-defect-data",
        Command::ValidateBordism { .. } => "validate-bordism",
        Command::HomDim { .. } => "hom-dim",
        Command::Invariant { .. } => "invariant",
        Command::StateSpace { .. } => "state-space",
        Command::GrayCheck { .. } => "gray-check",
        Command::EvalDiagram { .. } => "eval-diagram",
        Command::Refine { .. } => "refine",
    }
}

/// Parses `argv` (program name first) and runs the command. Exit code 0 on
/// success with a clean report, 1 on a failed computation or a violated
/// validator, 2 on unparsable arguments or inputs.
pub fn run<I, T>(argv: I) -> (Outcome, OutputFormat)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let outcome = Outcome { code, document: json!({ "error": e.to_string() }), text: e.to_string() };
            return (outcome, OutputFormat::Text);
        }
    };
    let cfg = cli.config.clone();
    let name = command_name(&cli.command);
    if cfg.workers == 0 || cfg.tolerance.is_some_and(|t| !(t > 0.0)) {
        let msg = "workers must be at least 1 and the tolerance positive";
        let outcome = Outcome { code: 2, document: json!({ "command": name, "error": msg }), text: format!("error: {msg}\n") };
        return (outcome, cfg.output);
    }
    let outcome = match execute(&cli.command, &cfg) {
        Ok(run) => {
            let code = match &run.report {
                Some(rep) if !rep.is_clean() => 1,
                _ => 0,
            };
            let residuals = run.report.as_ref().map(residual_table).unwrap_or_else(|| json!({}));
            let document = json!({
                "command": name,
                "inputs": run.inputs,
                "config": cfg,
                "results": run.results,
                "residuals": residuals,
            });
            Outcome { code, document, text: run.text }
        }
        Err(e) => {
            let code = if matches!(e, Error::Parse(_)) { 2 } else { 1 };
            let document = json!({ "command": name, "config": cfg, "error": e.to_string() });
            Outcome { code, document, text: format!("error: {e}\n") }
        }
    };
    (outcome, cfg.output)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &[&str]) -> Outcome {
        let mut argv = vec!["defect-tqft"];
        argv.extend_from_slice(args);
        run(argv).0
    }

    #[test]
    fn validators_exit_codes() {
        assert_eq!(go(&["validate-category", "vec_z2"]).code, 0);
        assert_eq!(go(&["validate-category", "fibonacci_perturbed"]).code, 1);
        assert_eq!(go(&["validate-defect-data", "z3"]).code, 0);
        assert_eq!(go(&["--max-word-length", "4", "validate-defect-data", "s3"]).code, 0);
        assert_eq!(go(&["validate-bordism", "--defect-data", "z2", "--bordism", "s2xs1_fiber_g"]).code, 0);
    }

    #[test]
    fn parse_errors_exit_two() {
        assert_eq!(go(&["frobnicate"]).code, 2);
        assert_eq!(go(&["validate-category", "no_such_category"]).code, 1);
        assert_eq!(go(&["validate-defect-data", "no_such_family"]).code, 2);
        assert_eq!(go(&["--tolerance", "-1", "validate-category", "vec_z2"]).code, 2);
    }

    #[test]
    fn fibonacci_sphere_invariant() {
        let o = go(&["invariant", "--engine", "statesum", "--category", "fibonacci", "--bordism", "s3_boundary_delta4"]);
        assert_eq!(o.code, 0);
        let re = o.document["results"]["scalar"]["re"].as_f64().unwrap();
        assert!((re - 0.2763932).abs() < 1e-6);
        assert!(o.text.starts_with("0.276393"));
    }

    #[test]
    fn structured_output_is_deterministic() {
        let args = ["--output", "structured", "state-space", "--category", "vec_z2", "--surface", "dipole:g,g"];
        let (a, fmt) = run(std::iter::once("defect-tqft").chain(args));
        let (b, _) = run(std::iter::once("defect-tqft").chain(args));
        assert_eq!(fmt, OutputFormat::Structured);
        assert_eq!(a.rendered(fmt), b.rendered(fmt));
        for key in ["command", "inputs", "config", "results", "residuals"] {
            assert!(a.document.get(key).is_some(), "{key}");
        }
        assert_eq!(a.document["results"]["rank"], 1);
    }
}
