//! Command-line surface: construct families, certify what they generate,
//! and run the spectral, character, walk, and baseline experiments as
//! reproducible batch jobs.
//!
//! Exit codes: 0 success, 2 config error, 3 budget exceeded, 4 failed
//! certification, 5 solver non-convergence (1 for I/O surprises). All
//! artifacts except the `run_meta.json` timing sidecar are byte-identical
//! across reruns with the same config and seed.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use expanderlab::bsgs::{factorial, Bsgs};
use expanderlab::characters::scan::{
    default_lambda1_cap, default_support_floor, roichman_bound_scan, ScanReport,
};
use expanderlab::characters::CharacterTable;
use expanderlab::config::ExperimentConfig;
use expanderlab::construction::{FamilyKind, GeneratingFamily};
use expanderlab::error::{LabError, Result};
use expanderlab::report::{self, Artifact, RunMeta};
use expanderlab::spectral::eigen::second_eigenvalue;
use expanderlab::spectral::expansion::{
    brute_force_expansion, cheeger_interval, BRUTE_FORCE_VERTEX_CAP,
};
use expanderlab::spectral::kazhdan::{kazhdan_numeric, kazhdan_to_expansion, KazhdanReport};
use expanderlab::spectral::baseline::random_cayley_baseline;
use expanderlab::spectral::{build_action_graph, ActionGraph, ExpansionReport, GraphKind};
use expanderlab::walks::{cycle_statistics, point_mixing_exact, transitivity_probe};
use expanderlab::SCHEMA_VERSION;

#[derive(Parser)]
#[command(name = "expanderlab", version, about = "Expanding generating sets workbench")]
struct Cli {
    /// Config document (JSON); defaults apply for every omitted key.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for artifacts.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Caps the worker-thread count.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Export format (used by `export`).
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
    Mm,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExportTarget {
    /// The action graph of the configured family.
    Graph,
    /// The character table of degree `chars_n`.
    Table,
    /// The aggregate report over the output directory.
    Report,
}

#[derive(Subcommand)]
enum Command {
    /// Builds the configured generating family and writes `family.json`.
    Construct,
    /// Checks with a stabilizer chain that the family generates the full
    /// alternating (or symmetric) group of its degree.
    Certify,
    /// Measures the second eigenvalue of the configured action graph.
    Spectrum,
    /// Brackets (and below 23 vertices, exactly computes) the expansion
    /// constant of the configured action graph.
    Expansion,
    /// Numerically estimates the Kazhdan constant of the generated group.
    Kazhdan,
    /// Emits the character table and runs the decay scan.
    Chars,
    /// Runs the configured walk experiment (mixing, statistics, or
    /// transitivity).
    Walk,
    /// Random-generator baseline on a cyclic group.
    Baseline,
    /// Aggregates every artifact in the output directory.
    Report,
    /// Re-emits an artifact in another format.
    Export {
        #[arg(value_enum)]
        target: ExportTarget,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .ok();
    }
    let started = Instant::now();
    match run(&cli) {
        Ok(command) => {
            let meta = RunMeta {
                schema_version: SCHEMA_VERSION,
                tool_version: expanderlab::TOOL_VERSION,
                command,
                wall_seconds: started.elapsed().as_secs_f64(),
                threads: rayon::current_num_threads(),
            };
            if let Err(e) = report::write_json(&cli.out, report::RUN_META_FILE, &meta) {
                eprintln!("error: {e}");
                std::process::exit(1);
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn run(cli: &Cli) -> Result<&'static str> {
    let mut cfg = ExperimentConfig::load(cli.config.as_deref())?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    match cli.command {
        Command::Construct => construct(&cfg, &cli.out).map(|_| "construct"),
        Command::Certify => certify(&cfg, &cli.out).map(|_| "certify"),
        Command::Spectrum => spectrum(&cfg, &cli.out).map(|_| "spectrum"),
        Command::Expansion => expansion(&cfg, &cli.out).map(|_| "expansion"),
        Command::Kazhdan => kazhdan(&cfg, &cli.out).map(|_| "kazhdan"),
        Command::Chars => chars(&cfg, &cli.out).map(|_| "chars"),
        Command::Walk => walk(&cfg, &cli.out).map(|_| "walk"),
        Command::Baseline => baseline(&cfg, &cli.out).map(|_| "baseline"),
        Command::Report => aggregate_report(&cli.out).map(|_| "report"),
        Command::Export { target } => export(&cfg, &cli.out, target, cli.format).map(|_| "export"),
    }
}

// ---------------------------------------------------------------------------
// Family plumbing
// ---------------------------------------------------------------------------

fn build_family(cfg: &ExperimentConfig) -> Result<GeneratingFamily> {
    eprintln!(
        "constructing {} family: K={} d={}",
        cfg.family_kind, cfg.k_side, cfg.d
    );
    cfg.build_family()
}

fn load_family(cfg: &ExperimentConfig, out: &Path) -> Result<GeneratingFamily> {
    let path = match &cfg.family_file {
        Some(f) => {
            let p = PathBuf::from(f);
            Some(if p.is_absolute() { p } else { out.join(p) })
        }
        None => {
            let default = out.join(report::FAMILY_FILE);
            default.exists().then_some(default)
        }
    };
    match path {
        Some(p) => {
            eprintln!("loading family from {}", p.display());
            let text = std::fs::read_to_string(&p).map_err(|e| {
                LabError::Invalid(format!("cannot read family {}: {e}", p.display()))
            })?;
            GeneratingFamily::from_json(&text)
        }
        None => build_family(cfg),
    }
}

fn build_graph(cfg: &ExperimentConfig, family: &GeneratingFamily) -> Result<ActionGraph> {
    let kind = cfg.graph_kind()?;
    let r = (kind == GraphKind::SchreierTuples).then_some(cfg.tuple_r);
    build_action_graph(family, kind, r, cfg.max_vertices)
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

fn construct(cfg: &ExperimentConfig, out: &Path) -> Result<()> {
    let family = build_family(cfg)?;
    let path = report::write_text(out, report::FAMILY_FILE, &family.to_json()?)?;
    eprintln!("wrote {} ({} elements)", path.display(), family.len());
    Ok(())
}

#[derive(Serialize)]
struct CertifyResult {
    degree: usize,
    kind: FamilyKind,
    element_count: usize,
    /// Order of the generated group, decimal.
    order: String,
    expected_order: String,
    matches: bool,
    early_stopped: bool,
    is_alternating: bool,
    is_symmetric: bool,
}

fn certify(cfg: &ExperimentConfig, out: &Path) -> Result<()> {
    let family = load_family(cfg, out)?;
    let n = family.degree();
    if n > cfg.max_bsgs_degree {
        return Err(LabError::Budget(format!(
            "degree {n} exceeds max_bsgs_degree {}",
            cfg.max_bsgs_degree
        )));
    }
    let expected = if family.kind().requires_even() {
        factorial(n) / 2u32
    } else {
        factorial(n)
    };
    eprintln!("building stabilizer chain on {n} points");
    let chain = Bsgs::build_with_target(family.elements(), cfg.seed, Some(expected.clone()))?;
    let matches = *chain.order() == expected;
    let result = CertifyResult {
        degree: n,
        kind: family.kind(),
        element_count: family.len(),
        order: chain.order().to_string(),
        expected_order: expected.to_string(),
        matches,
        early_stopped: chain.early_stopped(),
        is_alternating: chain.is_alternating(),
        is_symmetric: chain.is_symmetric(),
    };
    report::write_json(out, report::CERTIFY_FILE, &Artifact::new("certify", cfg, &result))?;
    eprintln!("order {} (expected {})", result.order, result.expected_order);
    if !matches {
        return Err(LabError::Certification(format!(
            "the family generates a group of order {}, not {}",
            result.order, result.expected_order
        )));
    }
    Ok(())
}

fn spectrum(cfg: &ExperimentConfig, out: &Path) -> Result<()> {
    let family = load_family(cfg, out)?;
    let graph = build_graph(cfg, &family)?;
    let method = cfg.eigen_method(graph.n())?;
    eprintln!("solving λ₂ on {} vertices ({:?})", graph.n(), method);
    let spectral = second_eigenvalue(&graph, method, cfg.tolerance, cfg.seed)?;
    report::write_json(out, report::SPECTRUM_FILE, &Artifact::new("spectrum", cfg, &spectral))?;
    eprintln!("λ₂ = {} (gap {})", spectral.lambda2, spectral.gap);
    Ok(())
}

#[derive(Serialize)]
struct ExpansionResult {
    lambda2: f64,
    cheeger_lower: f64,
    cheeger_upper: f64,
    /// Exact minimizer, present when the graph is small enough to search.
    expansion: Option<ExpansionReport>,
}

fn expansion(cfg: &ExperimentConfig, out: &Path) -> Result<()> {
    let family = load_family(cfg, out)?;
    let graph = build_graph(cfg, &family)?;
    let spectral = second_eigenvalue(&graph, cfg.eigen_method(graph.n())?, cfg.tolerance, cfg.seed)?;
    let (cheeger_lower, cheeger_upper) = cheeger_interval(&spectral)?;
    let exact = if graph.n() <= BRUTE_FORCE_VERTEX_CAP {
        eprintln!("searching all subsets of {} vertices", graph.n());
        Some(brute_force_expansion(&graph)?)
    } else {
        None
    };
    let result = ExpansionResult {
        lambda2: spectral.lambda2,
        cheeger_lower,
        cheeger_upper,
        expansion: exact,
    };
    report::write_json(out, report::EXPANSION_FILE, &Artifact::new("expansion", cfg, &result))?;
    Ok(())
}

#[derive(Serialize)]
struct KazhdanResult {
    report: KazhdanReport,
    /// Expansion lower bound K²/4 implied by the estimate.
    expansion_bound: f64,
}

fn kazhdan(cfg: &ExperimentConfig, out: &Path) -> Result<()> {
    let family = load_family(cfg, out)?;
    eprintln!("enumerating the generated group and its regular representation");
    let estimate = kazhdan_numeric(family.elements(), cfg.seed)?;
    let result = KazhdanResult {
        expansion_bound: kazhdan_to_expansion(estimate.kazhdan)?,
        report: estimate,
    };
    report::write_json(out, report::KAZHDAN_FILE, &Artifact::new("kazhdan", cfg, &result))?;
    eprintln!("Kazhdan estimate {}", result.report.kazhdan);
    Ok(())
}

#[derive(Serialize)]
struct CharsResult {
    table_n: usize,
    table_file: String,
    scan: ScanReport,
}

fn chars(cfg: &ExperimentConfig, out: &Path) -> Result<()> {
    let n = cfg.chars_n;
    eprintln!("building the degree-{n} character table");
    let table = CharacterTable::build(n)?;
    report::write_text(out, report::CHARS_TABLE_FILE, &table.to_csv())?;
    let cap = cfg.scan_lambda1_cap.unwrap_or_else(|| default_lambda1_cap(n));
    let floor = cfg.scan_support_floor.unwrap_or_else(|| default_support_floor(n));
    let scan = roichman_bound_scan(n, cfg.scan_c, cfg.scan_q, cap, floor)?;
    eprintln!(
        "scan over {} pairs: passes={} fitted_c={:?}",
        scan.pairs_in_scope, scan.passes, scan.fitted_c
    );
    let result = CharsResult {
        table_n: n,
        table_file: report::CHARS_TABLE_FILE.into(),
        scan,
    };
    report::write_json(out, report::CHARS_FILE, &Artifact::new("chars", cfg, &result))?;
    Ok(())
}

fn walk(cfg: &ExperimentConfig, out: &Path) -> Result<()> {
    match cfg.walk_kind.as_str() {
        "mixing" => {
            let family = load_family(cfg, out)?;
            eprintln!("iterating the exact point distribution for {} steps", cfg.steps);
            let mixing = point_mixing_exact(&family, cfg.steps)?;
            report::write_text(out, report::TV_CURVE_FILE, &mixing.tv_curve_csv()?)?;
            report::write_json(out, report::WALK_FILE, &Artifact::new("walk", cfg, &mixing))?;
        }
        "statistics" => {
            let family = load_family(cfg, out)?;
            let length = cfg.word_length(family.degree());
            eprintln!("sampling {} words of length {length}", cfg.samples);
            let stats = cycle_statistics(&family, length, cfg.samples, cfg.seed)?;
            report::write_json(out, report::WALK_FILE, &Artifact::new("walk", cfg, &stats))?;
        }
        "transitivity" => {
            let (cube, local) = cfg.build_context()?;
            eprintln!(
                "routing {} tuple pairs (r={}, budget {})",
                cfg.probe_pairs, cfg.probe_r, cfg.probe_t
            );
            let probe = transitivity_probe(
                &cube,
                &local,
                cfg.probe_r,
                cfg.probe_t,
                cfg.probe_pairs,
                cfg.seed,
            )?;
            eprintln!("κ = {}", probe.kappa);
            report::write_json(out, report::WALK_FILE, &Artifact::new("walk", cfg, &probe))?;
        }
        other => {
            return Err(LabError::Invalid(format!(
                "unknown walk_kind '{other}' (mixing | statistics | transitivity)"
            )))
        }
    }
    Ok(())
}

fn baseline(cfg: &ExperimentConfig, out: &Path) -> Result<()> {
    let chain = expanderlab::spectral::baseline::cyclic_group(cfg.baseline_order)?;
    eprintln!(
        "running {} random-set trials on a cyclic group of order {}",
        cfg.baseline_trials, cfg.baseline_order
    );
    let result = random_cayley_baseline(
        &chain,
        cfg.baseline_set_size,
        cfg.baseline_trials,
        cfg.baseline_mode()?,
        cfg.seed,
    )?;
    report::write_json(out, report::BASELINE_FILE, &Artifact::new("baseline", cfg, &result))?;
    eprintln!("median gap {}", result.median_gap);
    Ok(())
}

fn aggregate_report(out: &Path) -> Result<()> {
    let (doc, csv) = report::aggregate(out)?;
    report::write_json(out, report::REPORT_FILE, &doc)?;
    report::write_text(out, report::REPORT_CSV_FILE, &csv)?;
    eprintln!("aggregated report written to {}", out.display());
    Ok(())
}

fn export(cfg: &ExperimentConfig, out: &Path, target: ExportTarget, format: Format) -> Result<()> {
    match (target, format) {
        (ExportTarget::Graph, Format::Dot) => {
            let graph = build_graph(cfg, &load_family(cfg, out)?)?;
            report::write_text(out, report::GRAPH_DOT_FILE, &graph.to_dot("family"))?;
        }
        (ExportTarget::Graph, Format::Mm) => {
            let graph = build_graph(cfg, &load_family(cfg, out)?)?;
            report::write_text(out, report::GRAPH_MM_FILE, &graph.to_matrix_market())?;
        }
        (ExportTarget::Table, Format::Csv) => {
            let table = CharacterTable::build(cfg.chars_n)?;
            report::write_text(out, report::CHARS_TABLE_FILE, &table.to_csv())?;
        }
        (ExportTarget::Report, Format::Json | Format::Csv) => {
            aggregate_report(out)?;
        }
        _ => {
            return Err(LabError::Invalid(
                "unsupported target/format pairing (graph: dot|mm, table: csv, report: json|csv)"
                    .into(),
            ))
        }
    }
    Ok(())
}
