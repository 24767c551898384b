//! Command-line frontend: exact fan predicates, equivariant refinement,
//! monoid saturation, degenerations over a valuation ring, and the
//! linearization search, all speaking schema-versioned JSON.
//!
//! Exit codes: 0 success, 1 a checked property failed (with a report), 2
//! parse errors, bad usage, or size guards.

mod document;
mod report;

use std::collections::BTreeSet;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use chamber_forge::cox;
use chamber_forge::dvr::{self, DvrFan, UnipotentAction};
use chamber_forge::lattice::Matrix;
use chamber_forge::monoid::{AffineMonoid, SaturationOutcome};
use chamber_forge::polyhedral::{projectivity, verify_support_function};
use chamber_forge::refine;
use chamber_forge::rootdata::{LatticeForm, RootDatum};
use chamber_forge::{Fan, Int, MatrixGroup};

use document::{
    encode_ray, parse_generators, DvrFanDocument, FanDocument, GroupDocument, JsonInt,
    TraceDocument,
};
use report::Report;

/// Size guards: pattern enumeration is exponential in the ray count, and
/// the polyhedral pipeline is meant for desk-scale ambient ranks.
const MAX_COX_RAYS: usize = 12;
const MAX_FAN_RANK: usize = 4;

#[derive(Parser)]
#[command(name = "chamber-forge", version, about = "Exact polyhedral computations: fans, root data, monoids, and degenerations")]
struct Cli {
    /// Include wall-clock timing in reports (breaks byte-for-byte
    /// reproducibility of the output).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fan predicates and constructions.
    Fan {
        #[command(subcommand)]
        sub: FanCommand,
    },
    /// Root-datum derived fans and strata.
    Rootdatum {
        #[command(subcommand)]
        sub: RootdatumCommand,
    },
    /// Equivariant smooth refinement.
    Refine(RefineArgs),
    /// Affine monoid computations.
    Monoid(MonoidArgs),
    /// Toric degenerations over a discrete valuation ring.
    Dvr {
        #[command(subcommand)]
        sub: DvrCommand,
    },
    /// Refute shear-stable complete plane fans over a bounded ray box.
    Counterexample(CounterexampleArgs),
    /// Linearization search for the coordinate-torus action.
    Cox {
        /// Fan document path.
        path: String,
    },
}

#[derive(Subcommand)]
enum FanCommand {
    /// Validate a fan document and run the requested predicates.
    Check {
        path: String,
        #[arg(long)]
        smooth: bool,
        #[arg(long)]
        complete: bool,
        #[arg(long)]
        projective: bool,
        /// Group document; checks stability under its generators.
        #[arg(long, value_name = "GROUP")]
        stable: Option<String>,
    },
    /// Smallest group-stable fan containing the input.
    Saturate { fan: String, group: String },
}

#[derive(Subcommand)]
enum RootdatumCommand {
    /// Complete fan of Weyl chambers for a preset datum.
    Weylfan(PresetArgs),
    /// Boundary strata poset (adjoint form).
    Strata(PresetArgs),
}

#[derive(Args)]
struct PresetArgs {
    /// Preset name: A1, A2, A3, B2, C2, G2.
    preset: String,
    #[arg(long, value_enum, default_value_t = FormArg::Adjoint)]
    form: FormArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormArg {
    Adjoint,
    Sc,
}

impl From<FormArg> for LatticeForm {
    fn from(f: FormArg) -> LatticeForm {
        match f {
            FormArg::Adjoint => LatticeForm::Adjoint,
            FormArg::Sc => LatticeForm::SimplyConnected,
        }
    }
}

#[derive(Args)]
struct RefineArgs {
    /// Preset root datum; runs the full chamber pipeline.
    #[arg(long, conflicts_with_all = ["fan", "group"])]
    preset: Option<String>,
    #[arg(long, value_enum, default_value_t = FormArg::Adjoint)]
    form: FormArg,
    /// Fan document; needs --group.
    #[arg(long, requires = "group")]
    fan: Option<String>,
    /// Group document for direct refinement.
    #[arg(long)]
    group: Option<String>,
    #[arg(long, default_value_t = refine::DEFAULT_BUDGET)]
    budget: usize,
}

#[derive(Args)]
struct MonoidArgs {
    /// Generators as a JSON array of integer vectors, e.g. "[[0,1],[2,1]]".
    generators: String,
    #[arg(long, group = "op")]
    saturate: bool,
    #[arg(long, group = "op")]
    hilbert: bool,
    #[arg(long = "fiber-checks", group = "op")]
    fiber_checks: bool,
}

#[derive(Subcommand)]
enum DvrCommand {
    /// Recession fan, special-fiber components, constancy.
    Analyze { path: String },
}

#[derive(Args)]
struct CounterexampleArgs {
    /// Row-major 2x2 integer matrix, e.g. "1 1 0 1".
    #[arg(long, default_value = "1 1 0 1")]
    matrix: String,
    /// Sup-norm bound for candidate rays.
    #[arg(long = "ray-bound", default_value_t = 2)]
    ray_bound: u32,
    /// Emit one verdict per candidate instead of the summary.
    #[arg(long)]
    full: bool,
}

/// Failure modes mapped to exit codes.
enum CliError {
    /// Exit 2: unreadable input, bad usage, size guard.
    Usage(String),
    /// Exit 1: a checked property failed; carries the failure report.
    Failure(String, Value),
}

type CliResult = Result<Value, CliError>;

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

fn main() -> ExitCode {
    if let Ok(raw) = std::env::var("CHAMBER_FORGE_THREADS") {
        match raw.parse::<usize>() {
            Ok(n) if n >= 1 => {} // single-threaded build: any positive cap holds
            _ => {
                eprintln!("CHAMBER_FORGE_THREADS must be a positive integer, got {raw:?}");
                return ExitCode::from(2);
            }
        }
    }
    let cli = Cli::parse();
    let started = std::time::Instant::now();
    let (command_name, digest, outcome) = run(&cli.command);
    let timing = cli.timing.then(|| started.elapsed().as_millis());
    match outcome {
        Ok(verdicts) => {
            let report = Report::new(command_name, digest, verdicts, timing);
            emit(&report.render());
            ExitCode::SUCCESS
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failure(msg, payload)) => {
            let report = Report::new(command_name, digest, payload, timing);
            emit(&report.render());
            eprintln!("failed: {msg}");
            ExitCode::from(1)
        }
    }
}

/// Writes the report, tolerating a closed pipe on the other end.
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
}

fn run(command: &Command) -> (String, String, CliResult) {
    match command {
        Command::Fan { sub } => match sub {
            FanCommand::Check {
                path,
                smooth,
                complete,
                projective,
                stable,
            } => (
                "fan check".into(),
                report::digest_files(&[path.as_str()]),
                cmd_fan_check(path, *smooth, *complete, *projective, stable.as_deref()),
            ),
            FanCommand::Saturate { fan, group } => (
                "fan saturate".into(),
                report::digest_files(&[fan.as_str(), group.as_str()]),
                cmd_fan_saturate(fan, group),
            ),
        },
        Command::Rootdatum { sub } => match sub {
            RootdatumCommand::Weylfan(args) => (
                "rootdatum weylfan".into(),
                report::digest_text(&format!("{} {:?}", args.preset, args.form as u8)),
                cmd_weylfan(args),
            ),
            RootdatumCommand::Strata(args) => (
                "rootdatum strata".into(),
                report::digest_text(&format!("{} {:?}", args.preset, args.form as u8)),
                cmd_strata(args),
            ),
        },
        Command::Refine(args) => {
            let digest = match (&args.preset, &args.fan, &args.group) {
                (Some(p), _, _) => report::digest_text(&format!("{p} {:?} {}", args.form as u8, args.budget)),
                (_, Some(f), Some(g)) => report::digest_files(&[f.as_str(), g.as_str()]),
                _ => report::digest_text("refine"),
            };
            ("refine".into(), digest, cmd_refine(args))
        }
        Command::Monoid(args) => (
            "monoid".into(),
            report::digest_text(&args.generators),
            cmd_monoid(args),
        ),
        Command::Dvr { sub } => match sub {
            DvrCommand::Analyze { path } => (
                "dvr analyze".into(),
                report::digest_files(&[path.as_str()]),
                cmd_dvr_analyze(path),
            ),
        },
        Command::Counterexample(args) => (
            "counterexample".into(),
            report::digest_text(&format!("{} {}", args.matrix, args.ray_bound)),
            cmd_counterexample(args),
        ),
        Command::Cox { path } => (
            "cox".into(),
            report::digest_files(&[path.as_str()]),
            cmd_cox(path),
        ),
    }
}

fn load_fan(path: &str) -> Result<(Fan, Vec<String>), CliError> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {path}"))
        .map_err(usage)?;
    let doc: FanDocument = serde_json::from_str(&text).map_err(usage)?;
    if doc.schema_version != document::SCHEMA_VERSION {
        return Err(usage(format!(
            "unsupported schema_version {:?}",
            doc.schema_version
        )));
    }
    if doc.rank > MAX_FAN_RANK {
        return Err(usage(format!(
            "fan rank {} exceeds the guard of {MAX_FAN_RANK}",
            doc.rank
        )));
    }
    let document_violations = doc.listed_ray_violations();
    let fan = doc.decode().map_err(usage)?;
    Ok((fan, document_violations))
}

fn load_group(path: &str) -> Result<MatrixGroup, CliError> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {path}"))
        .map_err(usage)?;
    let doc: GroupDocument = serde_json::from_str(&text).map_err(usage)?;
    doc.decode().map_err(usage)
}

fn validated((fan, mut violations): (Fan, Vec<String>)) -> Result<Fan, CliError> {
    let report = fan.validate();
    violations.extend(report.violations.iter().map(|v| v.to_string()));
    if violations.is_empty() {
        return Ok(fan);
    }
    Err(CliError::Failure(
        "fan document violates the fan invariants".into(),
        json!({ "valid": false, "violations": violations }),
    ))
}

fn cmd_fan_check(
    path: &str,
    smooth: bool,
    complete: bool,
    projective: bool,
    stable: Option<&str>,
) -> CliResult {
    let fan = validated(load_fan(path)?)?;
    let mut verdicts = serde_json::Map::new();
    verdicts.insert("valid".into(), json!(true));
    let mut all_good = true;

    if smooth {
        let report = fan.smoothness();
        let witness = report.witness.as_ref().map(|(cone, index)| {
            json!({
                "cone": cone.rays().iter().map(encode_ray).collect::<Vec<_>>(),
                "index": JsonInt(index.clone()),
            })
        });
        all_good &= report.smooth;
        verdicts.insert(
            "smooth".into(),
            json!({ "verdict": report.smooth, "witness": witness }),
        );
    }
    if complete {
        let verdict = fan.is_complete().map_err(|e| {
            CliError::Failure(e.to_string(), json!({ "complete": { "error": e.to_string() } }))
        })?;
        all_good &= verdict;
        verdicts.insert("complete".into(), json!({ "verdict": verdict }));
    }
    if projective {
        match projectivity(&fan) {
            Ok(Some(w)) => {
                assert!(verify_support_function(&fan, &w));
                let functionals: Vec<Value> = w
                    .functionals
                    .iter()
                    .map(|(cone, m)| {
                        json!({
                            "cone": cone.rays().iter().map(encode_ray).collect::<Vec<_>>(),
                            "functional": m.coords().iter().map(|q| q.to_string()).collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                verdicts.insert(
                    "projective".into(),
                    json!({ "verdict": true, "support_function": functionals }),
                );
            }
            Ok(None) => {
                all_good = false;
                verdicts.insert("projective".into(), json!({ "verdict": false }));
            }
            Err(e) => {
                all_good = false;
                verdicts.insert(
                    "projective".into(),
                    json!({ "verdict": false, "error": e.to_string() }),
                );
            }
        }
    }
    if let Some(group_path) = stable {
        let group = load_group(group_path)?;
        let witness = fan.unstable_witness(&group);
        let verdict = witness.is_none();
        all_good &= verdict;
        let moved = witness.map(|(m, cone)| {
            json!({
                "generator": encode_matrix(&m),
                "cone": cone.rays().iter().map(encode_ray).collect::<Vec<_>>(),
            })
        });
        verdicts.insert("stable".into(), json!({ "verdict": verdict, "witness": moved }));
    }

    let value = Value::Object(verdicts);
    if all_good {
        Ok(value)
    } else {
        Err(CliError::Failure("a requested predicate failed".into(), value))
    }
}

fn cmd_fan_saturate(fan_path: &str, group_path: &str) -> CliResult {
    let fan = validated(load_fan(fan_path)?)?;
    let group = load_group(group_path)?;
    match fan.saturate(&group) {
        Ok(sat) => Ok(json!({
            "group_order": group.order(),
            "fan": FanDocument::from_fan(&sat),
        })),
        Err(e) => Err(CliError::Failure(
            e.to_string(),
            json!({ "error": e.to_string() }),
        )),
    }
}

fn preset_datum(args: &PresetArgs) -> Result<RootDatum<Int>, CliError> {
    RootDatum::preset(&args.preset, args.form.into()).map_err(usage)
}

fn cmd_weylfan(args: &PresetArgs) -> CliResult {
    let rd = preset_datum(args)?;
    let fan = rd.weyl_fan().map_err(|e| {
        CliError::Failure(e.to_string(), json!({ "error": e.to_string() }))
    })?;
    Ok(json!({
        "weyl_order": rd.weyl_group().map_err(usage)?.order(),
        "fan": FanDocument::from_fan(&fan),
    }))
}

fn cmd_strata(args: &PresetArgs) -> CliResult {
    let rd = preset_datum(args)?;
    match rd.boundary_strata() {
        Ok(poset) => {
            let strata: Vec<Value> = poset
                .strata()
                .iter()
                .map(|s| {
                    json!({
                        "vanishing": s.vanishing.iter().collect::<Vec<_>>(),
                        "face": s.face.rays().iter().map(encode_ray).collect::<Vec<_>>(),
                    })
                })
                .collect();
            Ok(json!({
                "count": poset.len(),
                "divisors": poset.divisors().len(),
                "strata": strata,
            }))
        }
        Err(e) => Err(usage(e)), // asking for strata of a non-adjoint form is a usage error
    }
}

fn cmd_refine(args: &RefineArgs) -> CliResult {
    if let Some(preset) = &args.preset {
        let rd = RootDatum::preset(preset, args.form.into()).map_err(usage)?;
        let gamma = rd.diagram_automorphisms();
        let result = refine::good_fan(&rd, &gamma).map_err(|e| {
            CliError::Failure(e.to_string(), json!({ "error": e.to_string() }))
        })?;
        // re-verify the contract before emitting
        let weyl = rd.weyl_group().map_err(usage)?;
        let resat = result.chamber_fan.saturate(&weyl).map_err(usage)?;
        assert_eq!(resat, result.saturated);
        assert!(result.saturated.is_smooth());
        assert!(result.saturated.is_complete().map_err(usage)?);
        assert!(projectivity(&result.saturated).map_err(usage)?.is_some());
        assert!(result.chamber_fan.is_stable(&gamma));
        return Ok(json!({
            "chamber_fan": FanDocument::from_fan(&result.chamber_fan),
            "saturated_fan": FanDocument::from_fan(&result.saturated),
            "trace": TraceDocument::from_trace(&result.trace),
        }));
    }
    let (Some(fan_path), Some(group_path)) = (&args.fan, &args.group) else {
        return Err(usage("refine needs either --preset or --fan with --group"));
    };
    let fan = validated(load_fan(fan_path)?)?;
    let group = load_group(group_path)?;
    match refine::equivariant_smooth_refine(&fan, &group, args.budget) {
        Ok((out, trace)) => {
            assert!(out.is_smooth());
            assert!(out.refines(&fan));
            assert!(out.is_stable(&group));
            Ok(json!({
                "fan": FanDocument::from_fan(&out),
                "trace": TraceDocument::from_trace(&trace),
            }))
        }
        Err(failure) => Err(CliError::Failure(
            failure.error.to_string(),
            json!({
                "error": failure.error.to_string(),
                "trace": TraceDocument::from_trace(&failure.trace),
            }),
        )),
    }
}

fn cmd_monoid(args: &MonoidArgs) -> CliResult {
    let gens = parse_generators(&args.generators).map_err(usage)?;
    let rank = gens.first().map(|g| g.rank()).unwrap_or(0);
    if rank == 0 {
        return Err(usage("monoid needs at least one nonempty generator"));
    }
    let monoid = AffineMonoid::new(rank, gens).map_err(usage)?;
    if args.hilbert {
        let cone = chamber_forge::Cone::from_rays(rank, monoid.generators()).map_err(|e| {
            CliError::Failure(e.to_string(), json!({ "error": e.to_string() }))
        })?;
        let basis = chamber_forge::monoid::hilbert_basis(&cone);
        return Ok(json!({
            "hilbert_basis": basis.iter().map(encode_ray).collect::<Vec<_>>(),
        }));
    }
    if args.fiber_checks {
        let fc = monoid.fiber_checks();
        return Ok(json!({
            "generates_ambient": fc.generates_ambient,
            "saturated": fc.saturated,
        }));
    }
    // --saturate is the default operation
    match monoid.saturation() {
        SaturationOutcome::Pointed(r) => {
            let certificates: Vec<Value> = r
                .certificates
                .iter()
                .map(|c| {
                    json!({
                        "element": encode_ray(&c.element),
                        "multiple": JsonInt(c.multiple.clone()),
                        "combination": c.combination.iter().cloned().map(JsonInt).collect::<Vec<_>>(),
                    })
                })
                .collect();
            Ok(json!({
                "saturated_generators": r.saturated_generators.iter().map(encode_ray).collect::<Vec<_>>(),
                "added": r.added.iter().map(encode_ray).collect::<Vec<_>>(),
                "certificates": certificates,
            }))
        }
        SaturationOutcome::NotPointed(r) => Err(CliError::Failure(
            "the rational cone of the monoid contains a line; no Hilbert basis exists".into(),
            json!({
                "not_pointed": true,
                "saturated": r.saturated,
                "saturated_lattice_basis": r.saturated_lattice_basis.iter().map(encode_ray).collect::<Vec<_>>(),
                "span_equations": r.span_equations.iter().map(encode_ray).collect::<Vec<_>>(),
                "facets": r.facets.iter().map(encode_ray).collect::<Vec<_>>(),
            }),
        )),
    }
}

fn cmd_dvr_analyze(path: &str) -> CliResult {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {path}"))
        .map_err(usage)?;
    let doc: DvrFanDocument = serde_json::from_str(&text).map_err(usage)?;
    if doc.fan.rank > MAX_FAN_RANK {
        return Err(usage(format!(
            "fan rank {} exceeds the guard of {MAX_FAN_RANK}",
            doc.fan.rank
        )));
    }
    let doc_violations = doc.fan.listed_ray_violations();
    let fan = validated((doc.fan.decode().map_err(usage)?, doc_violations))?;
    let dvr = DvrFan::new(doc.base_rank, fan).map_err(usage)?;
    let recession = dvr.recession_fan().map_err(|e| {
        CliError::Failure(e.to_string(), json!({ "error": e.to_string() }))
    })?;
    let components = dvr.special_fiber_components();
    Ok(json!({
        "recession_fan": FanDocument::from_fan(&recession),
        "special_fiber_components": {
            "count": components.len(),
            "vertices": components
                .iter()
                .map(|v| v.coords().iter().map(|q| q.to_string()).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        },
        "constant_family": dvr.is_constant_family(),
    }))
}

fn cmd_counterexample(args: &CounterexampleArgs) -> CliResult {
    let entries: Vec<Int> = args
        .matrix
        .split_whitespace()
        .map(|t| t.parse::<i64>().map(Int::from))
        .collect::<Result<_, _>>()
        .map_err(usage)?;
    if entries.len() != 4 {
        return Err(usage("matrix must have four row-major entries"));
    }
    let m = Matrix::from_rows(vec![entries[..2].to_vec(), entries[2..].to_vec()]);
    let action = UnipotentAction::new(m).map_err(usage)?;
    if action.is_identity() {
        return Err(usage("the identity stabilizes every fan; pick a nontrivial unipotent matrix"));
    }
    if args.ray_bound == 0 || args.ray_bound > 3 {
        return Err(usage("ray bound must be between 1 and 3"));
    }

    // orbit of the vertical ray: distinct points forever
    let mut orbit_table = Vec::new();
    let mut seen = BTreeSet::new();
    let mut current = chamber_forge::LatticeVector::new(vec![Int::from(0), Int::from(1)]);
    for n in 0..=100u32 {
        assert!(seen.insert(current.clone()), "orbit points repeat at step {n}");
        orbit_table.push(json!([n, encode_ray(&current)]));
        current = action.apply(&current);
    }

    let universe = format!(
        "all complete rank-2 fans with primitive rays of sup-norm <= {}",
        args.ray_bound
    );
    let mut verdicts = Vec::new();
    let summary = dvr::refute_bounded_family(&action, args.ray_bound, |fan, refutation| {
        if !args.full && !matches!(refutation, dvr::Refutation::LibraryBug) {
            return;
        }
        let rays: Vec<_> = fan.rays().iter().map(encode_ray).collect();
        let entry = match refutation {
            dvr::Refutation::NotStable { moved_cone } => json!({
                "rays": rays,
                "not_stable": moved_cone.rays().iter().map(encode_ray).collect::<Vec<_>>(),
            }),
            dvr::Refutation::Escape(w) => json!({
                "rays": rays,
                "escape": { "ray": encode_ray(&w.ray), "power": w.power, "image": encode_ray(&w.image) },
            }),
            dvr::Refutation::LibraryBug => json!({ "rays": rays, "library_bug": true }),
        };
        verdicts.push(entry);
    });
    let mut payload = json!({
        "universe": universe,
        "family_size": summary.candidates,
        "refuted_by_instability": summary.not_stable,
        "refuted_by_escape": summary.escapes,
        "unexplained": summary.unexplained,
        "orbit_table": orbit_table,
    });
    if args.full {
        payload["verdicts"] = Value::Array(verdicts);
    }
    if !summary.all_refuted() {
        return Err(CliError::Failure(
            "a candidate fan passed both checks; this is a library bug".into(),
            payload,
        ));
    }
    Ok(payload)
}

fn cmd_cox(path: &str) -> CliResult {
    let fan = validated(load_fan(path)?)?;
    if fan.rays().len() > MAX_COX_RAYS {
        return Err(usage(format!(
            "fan has {} rays; the pattern transcript is exponential and capped at {MAX_COX_RAYS}",
            fan.rays().len()
        )));
    }
    match cox::find_linearization(&fan) {
        Ok(search) => {
            let verdicts: Vec<Value> = search
                .verdicts
                .iter()
                .map(|v| {
                    json!({
                        "pattern": v.pattern.iter().collect::<Vec<_>>(),
                        "nondegenerate": v.nondegenerate,
                        "semistable": v.semistable,
                    })
                })
                .collect();
            Ok(json!({
                "rho": encode_ray(&search.rho),
                "box_bound": search.box_bound,
                "stable_certified": search.stable_certified,
                "patterns": verdicts,
            }))
        }
        Err(e) => Err(CliError::Failure(e.to_string(), json!({ "error": e.to_string() }))),
    }
}

fn encode_matrix(m: &Matrix<Int>) -> Vec<Vec<JsonInt>> {
    (0..m.nrows())
        .map(|r| m.row(r).into_iter().map(JsonInt).collect())
        .collect()
}
