use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use wonderful::arrangement::{
    close_intersections, f_factorization, g_factors, irreducible_elements, is_building_set,
    DEFAULT_IRREDUCIBLE_CAP, DEFAULT_MAX_ELEMENTS,
};
use wonderful::blowup::{check_star_order, run_sequence, suggest_order, OrderStrategy, RunOptions};
use wonderful::diagonal::{AnchoredModel, PolydiagonalModel};
use wonderful::families;
use wonderful::json::{table_docs, AnyInstance, GraphDoc, Instance, TraceDoc};
use wonderful::model::locus_label;
use wonderful::nest::enumerate_nests;
use wonderful::{Error, Model};

#[derive(Parser)]
#[command(
    name = "wonderful",
    version,
    about = "Building sets, nests and blow-up orders of arrangements"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Arrangement JSON file.
    #[arg(long, short)]
    input: Option<PathBuf>,
    /// Built-in family: fm:N, ulyanov:N, m0n:N, kapranov:N[:SEED] or kt:GRAPH.json.
    #[arg(long)]
    gen: Option<String>,
}

#[derive(Args)]
struct Caps {
    /// Largest induced arrangement to build.
    #[arg(long, default_value_t = DEFAULT_MAX_ELEMENTS, value_parser = positive)]
    max_elements: usize,
    /// Largest number of subsets (nests, divisor intersections) to visit.
    #[arg(long, default_value_t = 1 << 16, value_parser = positive)]
    max_subsets: usize,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    Inclusion,
    AscendingDim,
}

impl From<Strategy> for OrderStrategy {
    fn from(s: Strategy) -> Self {
        match s {
            Strategy::Inclusion => OrderStrategy::Inclusion,
            Strategy::AscendingDim => OrderStrategy::AscendingDim,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Fm,
    Ulyanov,
    Kt,
    M0n,
    Kapranov,
    Dp,
}

#[derive(Subcommand)]
enum Command {
    /// Check that the building set is a building set of its induced arrangement.
    Validate {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        caps: Caps,
        /// `dot` prints the Hasse diagram of the induced arrangement.
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// 𝒢-factors of an arrangement element, or its F-factorization with --center.
    Factors {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        caps: Caps,
        element: String,
        #[arg(long)]
        center: Option<String>,
    },
    /// Enumerate nonempty 𝒢-nests.
    Nests {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        caps: Caps,
        #[arg(long, conflicts_with = "list")]
        count: bool,
        #[arg(long)]
        list: bool,
        #[arg(long)]
        max_size: Option<usize>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Check condition (*) for a blow-up order.
    OrderCheck {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        caps: Caps,
        /// Order name in the input, a JSON file of names, `inclusion` or `ascending-dim`.
        #[arg(long)]
        order: Option<String>,
    },
    /// Suggest a blow-up order satisfying (*).
    OrderSuggest {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        caps: Caps,
        #[arg(long, value_enum, default_value = "ascending-dim")]
        strategy: Strategy,
    },
    /// Run the blow-up sequence and report centers, divisors and the nest table.
    Run {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        caps: Caps,
        #[arg(long)]
        order: Option<String>,
        /// Value of m = dim X, or `symbolic`.
        #[arg(long, default_value = "symbolic")]
        m: String,
        /// Write the trace here instead of stdout.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Validate the building-set property at every level.
        #[arg(long)]
        verify: bool,
    },
    /// Emptiness of every intersection of final divisors.
    DivisorTable {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        caps: Caps,
        #[arg(long)]
        order: Option<String>,
        #[arg(long, default_value = "symbolic")]
        m: String,
    },
    /// Irreducible elements of the induced arrangement.
    MinimalBuildingSet {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        caps: Caps,
        #[arg(long, default_value_t = DEFAULT_IRREDUCIBLE_CAP)]
        irreducible_cap: usize,
    },
    /// Emit a building set of a standard family as arrangement JSON.
    Gen {
        #[arg(value_enum)]
        family: Family,
        #[arg(long)]
        n: Option<u32>,
        /// Graph JSON for `kt`.
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Subgraph JSON for `kt`; adds the extension order.
        #[arg(long)]
        subgraph: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Linear arrangement JSON for `dp`.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

/// A command outcome: JSON or text to print and whether the verdict was positive.
struct Report {
    body: String,
    verdict: bool,
}

impl Report {
    fn json(v: Value, verdict: bool) -> Self {
        Report {
            body: serde_json::to_string_pretty(&v).unwrap_or_default(),
            verdict,
        }
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

fn read(path: &Path) -> wonderful::Result<String> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> wonderful::Result<()> {
    fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> wonderful::Result<wonderful::graph::LabeledGraph> {
    let doc: GraphDoc = serde_json::from_str(&read(path)?)
        .map_err(|e| usage(format!("malformed graph JSON: {e}")))?;
    doc.to_graph()
}

fn need_n(n: Option<u32>, min: u32, family: &str) -> wonderful::Result<u32> {
    match n {
        Some(n) if n >= min => Ok(n),
        Some(n) => Err(usage(format!("{family} needs n ≥ {min}, got {n}"))),
        None => Err(usage(format!("{family} needs --n"))),
    }
}

fn ascending<M: Model>(inst: Instance<M>) -> wonderful::Result<Instance<M>> {
    let order = suggest_order(
        &inst.model,
        &inst.building,
        OrderStrategy::AscendingDim,
        DEFAULT_MAX_ELEMENTS,
    )?;
    Ok(inst.with_order("ascending", order))
}

fn generate(
    family: Family,
    n: Option<u32>,
    graph: Option<&Path>,
    subgraph: Option<&Path>,
    seed: u64,
    input: Option<&Path>,
) -> wonderful::Result<AnyInstance> {
    Ok(match family {
        Family::Fm => {
            let n = need_n(n, 2, "fm")?;
            let model = PolydiagonalModel { n };
            let inst = Instance::new(model, families::fm_building_set(n))
                .with_order("fm", families::fm_original_order(n));
            AnyInstance::Polydiagonal(ascending(inst)?)
        }
        Family::Ulyanov => {
            let n = need_n(n, 2, "ulyanov")?;
            let g = families::ulyanov_building_set(n);
            let inst = Instance::new(PolydiagonalModel { n }, g.clone()).with_order("ulyanov", g);
            AnyInstance::Polydiagonal(ascending(inst)?)
        }
        Family::M0n => {
            let n = need_n(n, 4, "m0n")?;
            let inst = Instance::new(AnchoredModel { n }, families::m0n_building_set(n)?)
                .with_order("keel", families::keel_order(n)?);
            if inst.building.is_empty() {
                AnyInstance::Anchored(inst)
            } else {
                AnyInstance::Anchored(ascending(inst)?)
            }
        }
        Family::Kt => {
            let Some(path) = graph else {
                return Err(usage("kt needs --graph"));
            };
            let g = read_graph(path)?;
            let mut inst = Instance::new(
                PolydiagonalModel { n: g.n() },
                families::kt_building_set(&g)?,
            );
            if let Some(sub) = subgraph {
                let g1 = read_graph(sub)?;
                inst = inst.with_order("extension", families::kt_extension_order(&g1, &g)?);
            }
            if inst.building.is_empty() {
                AnyInstance::Polydiagonal(inst)
            } else {
                AnyInstance::Polydiagonal(ascending(inst)?)
            }
        }
        Family::Kapranov => {
            let n = need_n(n, 4, "kapranov")?;
            let (model, named, _) = families::kapranov(n, seed)?;
            let inst = Instance::new(model, named.into_iter().map(|(_, s)| s).collect());
            AnyInstance::Linear(ascending(inst)?)
        }
        Family::Dp => {
            let Some(path) = input else {
                return Err(usage("dp needs --input with a linear arrangement"));
            };
            match AnyInstance::from_json(&read(path)?)? {
                AnyInstance::Linear(inst) => AnyInstance::Linear(inst),
                _ => return Err(usage("dp expects a linear arrangement")),
            }
        }
    })
}

fn load(source: &Source) -> wonderful::Result<AnyInstance> {
    if let Some(path) = &source.input {
        return AnyInstance::from_json(&read(path)?);
    }
    let spec = source.gen.as_deref().unwrap_or_default();
    let (family, rest) = spec
        .split_once(':')
        .ok_or_else(|| usage(format!("bad generator {spec}")))?;
    let number = |s: &str| {
        s.parse::<u32>()
            .map_err(|_| usage(format!("bad number {s}")))
    };
    match family {
        "fm" => generate(Family::Fm, Some(number(rest)?), None, None, 1, None),
        "ulyanov" => generate(Family::Ulyanov, Some(number(rest)?), None, None, 1, None),
        "m0n" => generate(Family::M0n, Some(number(rest)?), None, None, 1, None),
        "kapranov" => {
            let (n, seed) = rest.split_once(':').unwrap_or((rest, "1"));
            let seed = seed
                .parse()
                .map_err(|_| usage(format!("bad seed {seed}")))?;
            generate(Family::Kapranov, Some(number(n)?), None, None, seed, None)
        }
        "kt" => generate(Family::Kt, None, Some(Path::new(rest)), None, 1, None),
        other => Err(usage(format!("unknown generator {other}"))),
    }
}

fn parse_m(s: &str) -> wonderful::Result<Option<i64>> {
    if s == "symbolic" {
        return Ok(None);
    }
    match s.parse::<i64>() {
        Ok(m) if m >= 1 => Ok(Some(m)),
        _ => Err(usage(format!(
            "--m must be a positive integer or `symbolic`, got {s}"
        ))),
    }
}

fn names<M: Model>(model: &M, items: &[M::Elem]) -> Vec<String> {
    items.iter().map(|e| model.label(e)).collect()
}

fn resolve_order<M: Model>(
    inst: &Instance<M>,
    order: Option<&str>,
    caps: &Caps,
) -> wonderful::Result<Vec<M::Elem>> {
    match order {
        None => Ok(inst.building.clone()),
        Some("inclusion") => suggest_order(
            &inst.model,
            &inst.building,
            OrderStrategy::Inclusion,
            caps.max_elements,
        ),
        Some("ascending-dim") => suggest_order(
            &inst.model,
            &inst.building,
            OrderStrategy::AscendingDim,
            caps.max_elements,
        ),
        Some(name) => {
            if let Some(o) = inst.orders.get(name) {
                return Ok(o.clone());
            }
            let text = read(Path::new(name))?;
            let list: Vec<String> = serde_json::from_str(&text)
                .map_err(|e| usage(format!("order file must be a JSON list of names: {e}")))?;
            inst.resolve_all(&list)
        }
    }
}

fn hasse_dot<M: Model>(model: &M, items: &[M::Elem], name: &str) -> wonderful::Result<String> {
    let mut out = format!("digraph {name} {{\n  rankdir=BT;\n");
    for (i, x) in items.iter().enumerate() {
        out.push_str(&format!("  n{i} [label={:?}];\n", model.label(x)));
    }
    for (i, a) in items.iter().enumerate() {
        for (j, b) in items.iter().enumerate() {
            if i == j || !model.contains(b, a)? {
                continue;
            }
            let mut covered = true;
            for (k, c) in items.iter().enumerate() {
                if k != i && k != j && model.contains(c, a)? && model.contains(b, c)? {
                    covered = false;
                    break;
                }
            }
            if covered {
                out.push_str(&format!("  n{i} -> n{j};\n"));
            }
        }
    }
    out.push_str("}\n");
    Ok(out)
}

fn nest_dot(labels: &[Vec<String>]) -> String {
    let mut out = String::from("digraph nests {\n  rankdir=BT;\n");
    for (i, t) in labels.iter().enumerate() {
        out.push_str(&format!("  n{i} [label={:?}];\n", t.join(" ")));
    }
    for (i, a) in labels.iter().enumerate() {
        for (j, b) in labels.iter().enumerate() {
            if b.len() == a.len() + 1 && a.iter().all(|x| b.contains(x)) {
                out.push_str(&format!("  n{i} -> n{j};\n"));
            }
        }
    }
    out.push_str("}\n");
    out
}

fn execute<M: Model + Clone>(command: &Command, inst: &Instance<M>) -> wonderful::Result<Report> {
    let model = &inst.model;
    match command {
        Command::Validate { caps, format, .. } => {
            let verdict = is_building_set(model, &inst.building, caps.max_elements)?;
            let ok = verdict.is_building();
            if let Format::Dot = format {
                return Ok(Report {
                    body: hasse_dot(model, &verdict.arrangement, "arrangement")?,
                    verdict: ok,
                });
            }
            Ok(Report::json(
                json!({
                    "building_set": ok,
                    "witness": verdict.witness.as_ref().map(|w| model.label(w)),
                    "arrangement": names(model, &verdict.arrangement),
                }),
                ok,
            ))
        }
        Command::Factors {
            caps,
            element,
            center,
            ..
        } => {
            let arrangement = close_intersections(model, &inst.building, caps.max_elements)?;
            let s = resolve_in(inst, &arrangement, element)?;
            let factors = g_factors(model, &inst.building, &arrangement, &s)?;
            let mut out = json!({ "element": model.label(&s), "factors": names(model, &factors) });
            if let Some(f) = center {
                let f = inst.resolve(f)?;
                let (a, b) = f_factorization(model, &inst.building, &arrangement, &s, &f)?;
                out["center"] = json!(model.label(&f));
                out["a"] = json!(locus_label(model, &a));
                out["b"] = json!(locus_label(model, &b));
            }
            Ok(Report::json(out, true))
        }
        Command::Nests {
            caps,
            count,
            list,
            max_size,
            format,
            ..
        } => {
            let nests = enumerate_nests(model, &inst.building, *max_size, caps.max_subsets)?;
            let labels: Vec<Vec<String>> = nests.iter().map(|t| names(model, t)).collect();
            if let Format::Dot = format {
                return Ok(Report {
                    body: nest_dot(&labels),
                    verdict: true,
                });
            }
            let v = if *count && !*list {
                json!({ "count": labels.len() })
            } else {
                json!(labels)
            };
            Ok(Report::json(v, true))
        }
        Command::OrderCheck { caps, order, .. } => {
            let order = resolve_order(inst, order.as_deref(), caps)?;
            let v = check_star_order(model, &order, caps.max_elements)?;
            Ok(Report::json(
                json!({
                    "valid": v.is_valid(),
                    "order": names(model, &order),
                    "failing_prefix": v.failing_prefix,
                    "witness": v.witness.as_ref().map(|w| model.label(w)),
                }),
                v.is_valid(),
            ))
        }
        Command::OrderSuggest { caps, strategy, .. } => {
            let order =
                suggest_order(model, &inst.building, (*strategy).into(), caps.max_elements)?;
            Ok(Report::json(json!(names(model, &order)), true))
        }
        Command::Run {
            caps,
            order,
            m,
            trace,
            verify,
            ..
        } => {
            let m = parse_m(m)?;
            let order = resolve_order(inst, order.as_deref(), caps)?;
            let options = RunOptions {
                max_elements: caps.max_elements,
                verify_levels: *verify,
                table: (order.len() as u32) < usize::BITS
                    && (1usize << order.len()) <= caps.max_subsets,
                max_subsets: caps.max_subsets,
            };
            let result = run_sequence(model, &order, &options)?;
            let text =
                serde_json::to_string_pretty(&TraceDoc::from_trace(&result, m)).unwrap_or_default();
            match trace {
                Some(path) => {
                    write(path, &text)?;
                    Ok(Report::json(
                        json!({ "steps": result.steps.len(), "trace": path }),
                        true,
                    ))
                }
                None => Ok(Report {
                    body: text,
                    verdict: true,
                }),
            }
        }
        Command::DivisorTable { caps, order, m, .. } => {
            let m = parse_m(m)?;
            let order = resolve_order(inst, order.as_deref(), caps)?;
            let options = RunOptions {
                max_elements: caps.max_elements,
                verify_levels: false,
                table: true,
                max_subsets: caps.max_subsets,
            };
            let result = run_sequence(model, &order, &options)?;
            let Some(table) = &result.table else {
                return Err(Error::Invariant("missing divisor table".into()));
            };
            let (divisors, rows) = table_docs(table, m);
            Ok(Report::json(
                json!({ "divisors": divisors, "table": rows }),
                true,
            ))
        }
        Command::MinimalBuildingSet {
            caps,
            irreducible_cap,
            ..
        } => {
            let arrangement = close_intersections(model, &inst.elements, caps.max_elements)?;
            let gmin = irreducible_elements(model, &arrangement, *irreducible_cap)?;
            Ok(Report::json(
                json!({ "arrangement": names(model, &arrangement), "minimal_building_set": names(model, &gmin) }),
                true,
            ))
        }
        Command::Gen { .. } => Err(Error::Invariant("gen is dispatched separately".into())),
    }
}

/// Finds `name` among the input elements or, failing that, the induced arrangement.
fn resolve_in<M: Model + Clone>(
    inst: &Instance<M>,
    arrangement: &[M::Elem],
    name: &str,
) -> wonderful::Result<M::Elem> {
    if let Ok(e) = inst.resolve(name) {
        return Ok(e);
    }
    let widened = Instance {
        model: inst.model.clone(),
        elements: arrangement.to_vec(),
        building: Vec::new(),
        orders: BTreeMap::new(),
    };
    widened.resolve(name)
}

fn source_of(command: &Command) -> Option<&Source> {
    match command {
        Command::Validate { source, .. }
        | Command::Factors { source, .. }
        | Command::Nests { source, .. }
        | Command::OrderCheck { source, .. }
        | Command::OrderSuggest { source, .. }
        | Command::Run { source, .. }
        | Command::DivisorTable { source, .. }
        | Command::MinimalBuildingSet { source, .. } => Some(source),
        Command::Gen { .. } => None,
    }
}

fn dispatch(command: &Command) -> wonderful::Result<Report> {
    if let Command::Gen {
        family,
        n,
        graph,
        subgraph,
        seed,
        input,
        output,
    } = command
    {
        let inst = generate(
            *family,
            *n,
            graph.as_deref(),
            subgraph.as_deref(),
            *seed,
            input.as_deref(),
        )?;
        let text = inst.to_json();
        if let Some(path) = output {
            write(path, &text)?;
        }
        return Ok(Report {
            body: text,
            verdict: true,
        });
    }
    let Some(source) = source_of(command) else {
        return Err(Error::Invariant("command without input".into()));
    };
    match load(source)? {
        AnyInstance::Linear(inst) => execute(command, &inst),
        AnyInstance::Polydiagonal(inst) => execute(command, &inst),
        AnyInstance::Anchored(inst) => execute(command, &inst),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli.command) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "{}", report.body.trim_end());
            ExitCode::from(if report.verdict { 0 } else { 1 })
        }
        Err(err) => {
            eprintln!("error: {err}");
            let code = match err {
                Error::Input(_) | Error::Precondition(_) | Error::Unsupported(_) => 2,
                Error::Resource(_) => 3,
                Error::Invariant(_) => 4,
            };
            ExitCode::from(code)
        }
    }
}
