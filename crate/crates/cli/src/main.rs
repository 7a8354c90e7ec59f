//! Command-line front end: parse germ/family descriptions, run the library
//! pipelines, emit deterministic machine-readable reports.
//!
//! Exit codes: 0 when every check in the report passed, 1 on a failed
//! check, 2 on parse errors, 3 on germ validation failure, 64 for an
//! unknown command.

mod schema;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use moriconic::classify::{classify, ClassifyCaps, FilterMode, SurvivorReport};
use moriconic::duval::{
    canonical_cover_row, catanese_quotient, dual_graph, hj_expand, index_divisibility_check,
    involution_rows, topological_index, CoverRow, CyclicQuot, DualGraph, DuValType,
    IndexDivisibility, InvolutionRow, SurfaceSing, TerminalClass,
};
use moriconic::germ::{
    general_elephant_test, presets, structural_predicates, validate_with_cap, ElephantOutcome,
    NormalizedGerm, PredicateReport, ValidationReport,
};
use moriconic::invariants::{
    global_check, local_invariants, GlobalReport, InvariantReport, IpOutcome, SearchCaps,
};
use moriconic::verify::families::{
    action_order_holds, builtin_examples, builtin_names, central_fiber_components,
    check_ideal_equivariance, fixed_points_check, EquivarianceOutcome, EquivariantFamily,
    FiberDecomposition, FixedLocusReport,
};
use moriconic::verify::parse_family;
use schema::{Check, GermDocument, ReportDocument};

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_VALIDATION: u8 = 3;
const EXIT_UNKNOWN_COMMAND: u8 = 64;

#[derive(Parser)]
#[command(
    name = "moriconic",
    version,
    about = "Exact local invariants and bounded classification for terminal threefold germs along curves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Strict,
    Binomial,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a germ and compute w_P, (F.C)_P and i_P (exact or bound).
    ///
    /// --germ takes a built-in name (cax4, main-1-iii, main-2-i, main-2-ii,
    /// pattern-i-m<even>, pattern-ii-m<even>, smooth) or a path to a germ
    /// description file.
    Invariants {
        #[arg(long)]
        germ: String,
        /// Override every search cap (default: six times the subindex).
        #[arg(long)]
        cap: Option<i64>,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate candidate germs for one (mbar, d) cell and run the sieve.
    Classify {
        #[arg(long)]
        mbar: i64,
        #[arg(long)]
        d: i64,
        #[arg(long, value_enum, default_value_t = ModeArg::Binomial)]
        mode: ModeArg,
        /// Override the candidate order caps (default: three times the
        /// subindex, from the case-analysis derivation).
        #[arg(long)]
        cap: Option<i64>,
        #[arg(long)]
        json: bool,
    },
    /// Cyclic quotient resolutions, the involution table, topological
    /// indices and the canonical-cover table.
    Duval {
        /// Resolve 1/N(1,Q): Hirzebruch-Jung expansion and dual graph.
        #[arg(long, num_args = 2, value_names = ["N", "Q"])]
        cyclic: Option<Vec<i64>>,
        /// Instantiate an involution-table row on a Du Val type, e.g. A3 6.
        #[arg(long, num_args = 2, value_names = ["TYPE", "ROW"])]
        catanese: Option<Vec<String>>,
        /// Print all ten involution-table rows.
        #[arg(long)]
        table: bool,
        /// Topological index of a Du Val type, e.g. D4.
        #[arg(long, value_name = "TYPE")]
        top_index: Option<String>,
        /// Index-divisibility test: threefold index then surface type.
        #[arg(long, num_args = 2, value_names = ["M", "TYPE"])]
        check_index: Option<Vec<String>>,
        /// Canonical-cover table row: cA/m, cAx/2, cD/2, cD/3, cE/2, cAx/4.
        #[arg(long, value_name = "CLASS")]
        cover: Option<String>,
        /// Family parameter for --cover.
        #[arg(short)]
        k: Option<i64>,
        /// Index m for the cA/m cover row.
        #[arg(long)]
        index: Option<i64>,
        #[arg(long)]
        json: bool,
    },
    /// Check an equivariant family: ideal stability, central fiber, fixed
    /// locus.
    VerifyExample {
        /// Built-in family name: elliptic-A3, elliptic-A1, cAx4-family,
        /// multiple-fiber, two-nodes.
        #[arg(long)]
        family: Option<String>,
        /// Family parameter where applicable.
        #[arg(short)]
        k: Option<u32>,
        /// Path to a user-supplied system in the text format.
        #[arg(long)]
        system: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    // Die quietly when the consumer closes the pipe (e.g. `| head`).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::InvalidSubcommand | ErrorKind::UnknownArgument => EXIT_UNKNOWN_COMMAND,
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = e.print();
                    return ExitCode::SUCCESS;
                }
                _ => EXIT_PARSE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Invariants { germ, cap, json } => run_invariants(&germ, cap, json),
        Command::Classify {
            mbar,
            d,
            mode,
            cap,
            json,
        } => run_classify(mbar, d, mode, cap, json),
        Command::Duval {
            cyclic,
            catanese,
            table,
            top_index,
            check_index,
            cover,
            k,
            index,
            json,
        } => run_duval(DuvalArgs {
            cyclic,
            catanese,
            table,
            top_index,
            check_index,
            cover,
            k,
            index,
            json,
        }),
        Command::VerifyExample {
            family,
            k,
            system,
            json,
        } => run_verify_example(family.as_deref(), k, system.as_deref(), json),
    }
}

fn fail_parse(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_PARSE)
}

/// Built-in germs for the classification cases.
fn builtin_germ(name: &str) -> Option<NormalizedGerm> {
    match name {
        "cax4" | "main-1-ii" => Some(presets::cax4()),
        "main-1-iii" => Some(presets::main_1_iii()),
        "main-2-i" => Some(presets::main_2_i()),
        "main-2-ii" => Some(presets::main_2_ii()),
        "smooth" => Some(presets::smooth()),
        _ => {
            if let Some(rest) = name.strip_prefix("pattern-i-m") {
                rest.parse().ok().and_then(presets::pattern_i)
            } else if let Some(rest) = name.strip_prefix("pattern-ii-m") {
                rest.parse().ok().and_then(presets::pattern_ii)
            } else {
                None
            }
        }
    }
}

fn load_germ(spec: &str) -> Result<NormalizedGerm, String> {
    if let Some(germ) = builtin_germ(spec) {
        return Ok(germ);
    }
    let path = PathBuf::from(spec);
    if !path.exists() {
        return Err(format!(
            "{spec:?} is neither a built-in germ name nor an existing file"
        ));
    }
    let text = std::fs::read_to_string(&path).map_err(|e| format!("reading {spec:?}: {e}"))?;
    let doc = GermDocument::parse(&text).map_err(|e| format!("parsing {spec:?}: {e}"))?;
    doc.to_germ().map_err(|e| format!("in {spec:?}: {e}"))
}

#[derive(Serialize)]
struct InvariantsResults {
    germ: GermDocument,
    validation: ValidationReport,
    predicates: PredicateReport,
    elephant: ElephantOutcome,
    invariants: Option<InvariantReport>,
    /// Informational: the budget if this is the only singular point.
    single_point_budget: Option<GlobalReport>,
}

fn run_invariants(spec: &str, cap: Option<i64>, json: bool) -> ExitCode {
    let germ = match load_germ(spec) {
        Ok(g) => g,
        Err(e) => return fail_parse(e),
    };
    let caps = match cap {
        Some(c) => SearchCaps::uniform(c),
        None => SearchCaps::for_germ(&germ),
    };
    let validation = validate_with_cap(&germ, caps.class_cap);
    let inputs = json!({ "germ": spec, "cap": caps.class_cap });

    let mut report = ReportDocument::new(
        "invariants",
        inputs,
        InvariantsResults {
            germ: GermDocument::from_germ(&germ),
            validation: validation.clone(),
            predicates: structural_predicates(&germ),
            elephant: general_elephant_test(&germ),
            invariants: None,
            single_point_budget: None,
        },
    );

    if !validation.is_normalized() {
        let (axiom, check) = validation.first_failure().expect("some axiom failed");
        report.check(
            "validation",
            false,
            format!(
                "axiom {axiom} fails: {}",
                check.witness.clone().unwrap_or_default()
            ),
        );
        emit(&report, json);
        return ExitCode::from(EXIT_VALIDATION);
    }
    report.check("validation", true, "all normalization axioms hold");

    match local_invariants(&germ, &caps) {
        Ok(inv) => {
            match &inv.ip {
                IpOutcome::Exact { certified, .. } => {
                    report.check(
                        "ip-exact-certified",
                        *certified,
                        "pair minimum provably global below the cap",
                    );
                }
                IpOutcome::LowerBound { cap_hit, .. } => {
                    if *cap_hit {
                        report
                            .cap_flags
                            .push("triple search hit the cap; bound is sound but coarse".into());
                    }
                }
                IpOutcome::SmoothZero | IpOutcome::Unsupported { .. } => {}
            }
            let summary = global_check(std::slice::from_ref(&inv), 0);
            // Additional points only grow the budget, so a single-point
            // overshoot is already conclusive.
            report.check(
                "single-point-budget",
                summary.budget_ok,
                format!("(-K.C) + w_P + i_P = {} against the bound 4", summary.budget_total),
            );
            report.results.single_point_budget = Some(summary);
            report.results.invariants = Some(inv);
            report.check("invariants-computed", true, "w_P, (F.C)_P, i_P evaluated");
        }
        Err(e) => {
            report.check("invariants-computed", false, e.to_string());
        }
    }

    emit(&report, json);
    exit_by_checks(&report.checks)
}

#[derive(Serialize)]
struct ClassifyResults {
    survivor_count: usize,
    excluded_count: usize,
    report: SurvivorReport,
}

fn run_classify(mbar: i64, d: i64, mode: ModeArg, cap: Option<i64>, json: bool) -> ExitCode {
    if mbar < 1 || d < 1 {
        return fail_parse("mbar and d must be positive");
    }
    let mut caps = ClassifyCaps::for_subindex(mbar);
    if let Some(c) = cap {
        if c < mbar + 1 {
            return fail_parse(format!("cap must be at least mbar + 1 = {}", mbar + 1));
        }
        caps.coord_cap = c;
        caps.a12_cap = c;
        caps.a3_cap = c;
        caps.search = SearchCaps::for_subindex(mbar.max((c + 2) / 3));
    }
    let mode = match mode {
        ModeArg::Strict => FilterMode::Strict,
        ModeArg::Binomial => FilterMode::BinomialJacobian,
    };
    let report = classify(mbar, d, mode, &caps);

    let inputs = json!({ "mbar": mbar, "d": d, "mode": match mode {
        FilterMode::Strict => "strict",
        FilterMode::BinomialJacobian => "binomial",
    }, "caps": caps });
    let unmatched = report.unmatched().count();
    let cap_limited = report.survivors.iter().filter(|s| s.cap_limited).count();
    let survivor_count = report.survivors.len();
    let excluded_count = report.excluded.len();

    let mut doc = ReportDocument::new(
        "classify",
        inputs,
        ClassifyResults {
            survivor_count,
            excluded_count,
            report,
        },
    );
    doc.check(
        "survivors-match-known-patterns",
        unmatched == 0,
        format!("{unmatched} survivor(s) outside the known case list"),
    );
    doc.check(
        "all-candidates-settled",
        cap_limited == 0,
        format!("{cap_limited} cap-limited (inconclusive) survivor(s)"),
    );
    if cap_limited > 0 {
        doc.cap_flags
            .push(format!("{cap_limited} survivor(s) carry cap-limited invariants"));
    }

    emit(&doc, json);
    exit_by_checks(&doc.checks)
}

struct DuvalArgs {
    cyclic: Option<Vec<i64>>,
    catanese: Option<Vec<String>>,
    table: bool,
    top_index: Option<String>,
    check_index: Option<Vec<String>>,
    cover: Option<String>,
    k: Option<i64>,
    index: Option<i64>,
    json: bool,
}

#[derive(Serialize)]
struct DuvalResults {
    #[serde(skip_serializing_if = "Option::is_none")]
    cyclic: Option<CyclicResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    catanese: Option<CataneseResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    table: Option<Vec<InvolutionRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    top_index: Option<TopIndexResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    check_index: Option<CheckIndexResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cover: Option<CoverRow>,
}

#[derive(Serialize)]
struct CyclicResult {
    n: i64,
    q: i64,
    expansion: Vec<i64>,
    dual_graph: DualGraph,
}

#[derive(Serialize)]
struct CataneseResult {
    input: String,
    row: u8,
    quotient: String,
}

#[derive(Serialize)]
struct TopIndexResult {
    input: String,
    index: i64,
}

#[derive(Serialize)]
struct CheckIndexResult {
    threefold_index: i64,
    surface: String,
    outcome: IndexDivisibility,
}

fn parse_duval_type(s: &str) -> Result<DuValType, String> {
    if s.len() < 2 {
        return Err(format!("bad Du Val type {s:?}"));
    }
    let (family, rest) = s.split_at(1);
    let n: i64 = rest
        .parse()
        .map_err(|_| format!("bad Du Val subscript in {s:?}"))?;
    let ty = match family {
        "A" | "a" => DuValType::A(n),
        "D" | "d" => DuValType::D(n),
        "E" | "e" => DuValType::E(n),
        _ => return Err(format!("bad Du Val family in {s:?}")),
    };
    ty.checked().map_err(|e| e.to_string())
}

fn parse_terminal_class(s: &str) -> Result<TerminalClass, String> {
    match s {
        "cA/m" | "cA" => Ok(TerminalClass::CAm),
        "cAx/2" => Ok(TerminalClass::CAx2),
        "cD/2" => Ok(TerminalClass::CD2),
        "cD/3" => Ok(TerminalClass::CD3),
        "cE/2" => Ok(TerminalClass::CE2),
        "cAx/4" => Ok(TerminalClass::CAx4),
        other => Err(format!("unknown terminal class {other:?}")),
    }
}

fn run_duval(args: DuvalArgs) -> ExitCode {
    let mut results = DuvalResults {
        cyclic: None,
        catanese: None,
        table: None,
        top_index: None,
        check_index: None,
        cover: None,
    };
    let mut checks: Vec<Check> = Vec::new();
    let inputs = json!({
        "cyclic": args.cyclic,
        "catanese": args.catanese,
        "table": args.table,
        "top_index": args.top_index,
        "check_index": args.check_index,
        "cover": args.cover,
        "k": args.k,
        "index": args.index,
    });

    if let Some(nq) = &args.cyclic {
        let (n, q) = (nq[0], nq[1]);
        let cq = match CyclicQuot::new(n, q) {
            Ok(cq) => cq,
            Err(e) => return fail_parse(e),
        };
        let expansion = hj_expand(n, q).expect("valid quotient expands");
        results.cyclic = Some(CyclicResult {
            n,
            q,
            dual_graph: dual_graph(&cq),
            expansion,
        });
    }

    if let Some(tr) = &args.catanese {
        let ty = match parse_duval_type(&tr[0]) {
            Ok(t) => t,
            Err(e) => return fail_parse(e),
        };
        let row: u8 = match tr[1].parse() {
            Ok(r) => r,
            Err(_) => return fail_parse(format!("bad row {:?}", tr[1])),
        };
        match catanese_quotient(ty, row) {
            Ok(q) => {
                results.catanese = Some(CataneseResult {
                    input: ty.to_string(),
                    row,
                    quotient: q.to_string(),
                });
            }
            Err(e) => return fail_parse(e),
        }
    }

    if args.table {
        results.table = Some(involution_rows().to_vec());
    }

    if let Some(s) = &args.top_index {
        let ty = match parse_duval_type(s) {
            Ok(t) => t,
            Err(e) => return fail_parse(e),
        };
        results.top_index = Some(TopIndexResult {
            input: ty.to_string(),
            index: topological_index(SurfaceSing::DuVal(ty)),
        });
    }

    if let Some(ms) = &args.check_index {
        let m: i64 = match ms[0].parse() {
            Ok(m) if m >= 2 => m,
            _ => return fail_parse(format!("bad threefold index {:?}", ms[0])),
        };
        let ty = match parse_duval_type(&ms[1]) {
            Ok(t) => t,
            Err(e) => return fail_parse(e),
        };
        let outcome = index_divisibility_check(m, ty);
        checks.push(Check::new(
            "index-divisibility",
            outcome != IndexDivisibility::Fail,
            format!("{outcome:?} for index {m} against {ty}"),
        ));
        results.check_index = Some(CheckIndexResult {
            threefold_index: m,
            surface: ty.to_string(),
            outcome,
        });
    }

    if let Some(class) = &args.cover {
        let class = match parse_terminal_class(class) {
            Ok(c) => c,
            Err(e) => return fail_parse(e),
        };
        let k = args.k.unwrap_or(1);
        let m = args.index.unwrap_or(2);
        match canonical_cover_row(class, k, m) {
            Ok(row) => results.cover = Some(row),
            Err(e) => return fail_parse(e),
        }
    }

    let mut doc = ReportDocument::new("duval", inputs, results);
    doc.checks = checks;
    emit(&doc, args.json);
    exit_by_checks(&doc.checks)
}

#[derive(Serialize)]
struct VerifyResults {
    family: FamilyEcho,
    equivariance: EquivarianceOutcome,
    fiber: Option<FiberDecomposition>,
    fixed_locus: FixedLocusReport,
}

#[derive(Serialize)]
struct FamilyEcho {
    name: String,
    field_order: u32,
    action_order: u32,
    param: Option<u32>,
    generators: Vec<String>,
}

fn run_verify_example(
    family: Option<&str>,
    k: Option<u32>,
    system: Option<&std::path::Path>,
    json: bool,
) -> ExitCode {
    let fam: EquivariantFamily = match (family, system) {
        (Some(name), None) => match builtin_examples(name, k) {
            Ok(f) => f,
            Err(e) => {
                eprintln!("error: {e}");
                eprintln!("built-in families: {}", builtin_names().join(", "));
                return ExitCode::from(EXIT_PARSE);
            }
        },
        (None, Some(path)) => {
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => return fail_parse(format!("reading {path:?}: {e}")),
            };
            match parse_family(&text) {
                Ok(f) => f,
                Err(e) => return fail_parse(e),
            }
        }
        _ => return fail_parse("pass exactly one of --family or --system"),
    };

    let inputs = json!({ "family": fam.name, "k": fam.param });
    let order_ok = action_order_holds(&fam);
    let invertible = fam.action.is_invertible();
    let equivariance = check_ideal_equivariance(&fam);
    let stable = matches!(equivariance, EquivarianceOutcome::Stable { .. });
    let fiber = central_fiber_components(&fam);
    let fixed = fixed_points_check(&fam, &fam.default_candidates);
    let candidates_ok = fixed.all_candidates_pass();
    let n_candidates = fixed.candidates.len();

    let echo = FamilyEcho {
        name: fam.name.clone(),
        field_order: fam.field_order,
        action_order: fam.action.order,
        param: fam.param,
        generators: fam.generators.iter().map(|g| g.to_string()).collect(),
    };

    let (fiber_value, fiber_detail, fiber_ok) = match fiber {
        Ok(f) => {
            let detail = format!("{} reduced component(s)", f.reduced_count);
            (Some(f), detail, true)
        }
        Err(e) => (None, e.to_string(), false),
    };

    let mut doc = ReportDocument::new(
        "verify-example",
        inputs,
        VerifyResults {
            family: echo,
            equivariance,
            fiber: fiber_value,
            fixed_locus: fixed,
        },
    );
    doc.check(
        "action-has-declared-order",
        order_ok,
        "applying the action order-many times fixes every generator",
    );
    doc.check(
        "action-matrix-invertible",
        invertible,
        "projective matrix is invertible",
    );
    doc.check(
        "ideal-equivariance",
        stable,
        "generator images lie in the generator span",
    );
    doc.check("central-fiber-decomposed", fiber_ok, fiber_detail);
    doc.check(
        "candidates-fixed",
        candidates_ok,
        format!("{n_candidates} candidate(s) verified"),
    );

    emit(&doc, json);
    exit_by_checks(&doc.checks)
}

fn exit_by_checks(checks: &[Check]) -> ExitCode {
    if checks.iter().all(|c| c.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_CHECK_FAILED)
    }
}

fn emit<T: Serialize>(doc: &ReportDocument<T>, json: bool) {
    if json {
        println!("{}", doc.to_json());
    } else {
        print_human(doc);
    }
}

fn print_human<T: Serialize>(doc: &ReportDocument<T>) {
    println!("# moriconic {} (schema v{})", doc.command, doc.schema_version);
    let value = serde_json::to_value(&doc.results).expect("results serialize");
    print_value(&value, 0);
    if !doc.cap_flags.is_empty() {
        println!("cap flags:");
        for f in &doc.cap_flags {
            println!("  - {f}");
        }
    }
    if doc.checks.is_empty() {
        println!("checks: none requested");
    } else {
        println!("checks:");
        for c in &doc.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            println!("  [{mark}] {}: {}", c.name, c.detail);
        }
    }
}

/// Compact indented rendering of the JSON report for human eyes; the
/// structure mirrors the machine output exactly.
fn print_value(v: &serde_json::Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        serde_json::Value::Object(map) => {
            for (k, val) in map {
                match val {
                    serde_json::Value::Object(obj)
                        if obj.contains_key("num") && obj.contains_key("den") && obj.len() == 2 =>
                    {
                        println!("{pad}{k}: {}/{}", obj["num"], obj["den"]);
                    }
                    serde_json::Value::Object(_) => {
                        println!("{pad}{k}:");
                        print_value(val, indent + 1);
                    }
                    serde_json::Value::Array(items)
                        if items.len() <= 8
                            && items.iter().all(|i| !i.is_object() && !i.is_array()) =>
                    {
                        let inline: Vec<String> = items.iter().map(render_scalar).collect();
                        println!("{pad}{k}: [{}]", inline.join(", "));
                    }
                    serde_json::Value::Array(_) => {
                        println!("{pad}{k}:");
                        print_value(val, indent + 1);
                    }
                    other => println!("{pad}{k}: {}", render_scalar(other)),
                }
            }
        }
        serde_json::Value::Array(items) => {
            for item in items {
                match item {
                    serde_json::Value::Object(_) | serde_json::Value::Array(_) => {
                        println!("{pad}-");
                        print_value(item, indent + 1);
                    }
                    other => println!("{pad}- {}", render_scalar(other)),
                }
            }
        }
        other => println!("{pad}{}", render_scalar(other)),
    }
}

fn render_scalar(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
