//! Command-line surface for the engine: coset enumeration, low-index
//! subgroup search, subgroup rewriting, abelian invariants, homomorphism
//! censuses, register classification, and certificate replay.

use clap::{Parser, Subcommand, ValueEnum};
use fpp_core::abelian::{abelian_cover_h1, abelianization};
use fpp_core::catalog::{battery_entries, make_named_group, GroupCatalogEntry};
use fpp_core::census::{count_homomorphisms, count_homomorphisms_reduced, quotient_profile};
use fpp_core::classify::{
    build_fingerprints, default_battery, emit_certificates, refine_partition, verify_certificate,
    BuildOptions, Certificate, PartitionReport, Tier,
};
use fpp_core::coset::{enumerate_cosets, CosetTable, Strategy};
use fpp_core::error::EngineError;
use fpp_core::lowindex::low_index_subgroups;
use fpp_core::presentation::{parse_presentation, Presentation};
use fpp_core::register::{expand_commutators, load_register, RegisterEntry};
use fpp_core::rewrite::reidemeister_schreier;
use fpp_core::store::ResultStore;
use fpp_core::word::Word;
use serde_json::json;
use std::path::PathBuf;
use std::sync::Arc;

/// Finite-quotient invariants of finitely presented groups.
#[derive(Parser)]
#[command(name = "fpp", version, about)]
struct Cli {
    /// Work budget for homomorphism censuses (relator-letter evaluations)
    #[arg(long, global = true, default_value_t = fpp_core::census::DEFAULT_WORK_BUDGET)]
    budget: u64,
    /// Coset limit for Todd-Coxeter enumeration
    #[arg(long, global = true, default_value_t = fpp_core::coset::DEFAULT_COSET_LIMIT)]
    limit: usize,
    /// Directory for the content-addressed result cache
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Records,
}

#[derive(Subcommand)]
enum Command {
    /// List the default target battery with orders and classification data
    Targets,
    /// Enumerate cosets of a finitely generated subgroup
    Cosets {
        /// Presentation `< gens | relators >` or a file containing one
        presentation: String,
        /// Subgroup generator word (repeatable); empty = trivial subgroup
        #[arg(short = 'w', long = "word")]
        words: Vec<String>,
        #[arg(long, value_enum, default_value_t = StrategyArg::Hlt)]
        strategy: StrategyArg,
        /// Print the full coset table
        #[arg(long)]
        table: bool,
    },
    /// Conjugacy classes of subgroups up to a given index
    Lowindex {
        presentation: String,
        #[arg(long, default_value_t = 5)]
        max_index: usize,
    },
    /// Present a finite-index subgroup on Schreier generators
    Rewrite {
        presentation: String,
        #[arg(short = 'w', long = "word")]
        words: Vec<String>,
        /// Skip Tietze simplification
        #[arg(long)]
        raw: bool,
    },
    /// Abelianization invariant factors
    Abelianize { presentation: String },
    /// First homology of the finite abelian cover (the commutator subgroup)
    Abcover { presentation: String },
    /// Count homomorphisms and epimorphisms onto one finite target
    Homcount {
        presentation: String,
        /// Catalog name, e.g. S3, Q8, G27, Z13xsZ4_faithful, S3*Z2
        #[arg(long)]
        target: String,
    },
    /// Quotient profiles of one presentation or a whole register
    Census {
        /// Presentation or file; omit when using --register
        presentation: Option<String>,
        #[arg(long)]
        register: Option<PathBuf>,
        /// Catalog name (repeatable); default: the full battery
        #[arg(long = "target")]
        targets: Vec<String>,
    },
    /// Partition a register by finite-quotient fingerprints
    Classify {
        #[arg(long)]
        register: PathBuf,
        /// h1, nilpotent, full, abcover, or all
        #[arg(long, default_value = "all")]
        tier: String,
        /// Also compute the abelian-cover invariant
        #[arg(long)]
        with_abcover: bool,
        /// Write one distinguishing certificate per pair to this JSON file
        #[arg(long)]
        emit_certs: Option<PathBuf>,
    },
    /// Replay distinguishing certificates from a cold start
    VerifyCert {
        #[arg(long)]
        register: PathBuf,
        #[arg(long)]
        certs: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Hlt,
    Felsch,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::Hlt => Strategy::Hlt,
            StrategyArg::Felsch => Strategy::Felsch,
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        // ignore failure if a pool is already installed
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    if let Err(e) = run(&cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

/// Accept an inline `< gens | relators >` body or a path to a file holding one.
fn load_presentation(arg: &str) -> Result<Arc<Presentation>, EngineError> {
    let text = if arg.contains('|') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg)?
    };
    let body = expand_commutators(text.trim())?;
    Ok(Arc::new(parse_presentation("G", &body)?))
}

fn parse_words(p: &Presentation, args: &[String]) -> Result<Vec<Word>, EngineError> {
    args.iter()
        .map(|a| {
            let body = expand_commutators(a)?;
            Ok(p.parse_word(&body)?)
        })
        .collect()
}

/// One output row: (column names, display values, JSON record). The three
/// formats render the same rows.
struct Row {
    cells: Vec<(&'static str, String)>,
}

fn emit_rows(format: Format, rows: &[Row]) {
    match format {
        Format::Text => {
            if rows.is_empty() {
                return;
            }
            let headers: Vec<&str> = rows[0].cells.iter().map(|c| c.0).collect();
            let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
            for r in rows {
                for (i, c) in r.cells.iter().enumerate() {
                    widths[i] = widths[i].max(c.1.len());
                }
            }
            let line = |cells: Vec<&str>| {
                cells
                    .iter()
                    .enumerate()
                    .map(|(i, c)| format!("{:w$}", c, w = widths[i]))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            println!("{}", line(headers).trim_end());
            for r in rows {
                println!(
                    "{}",
                    line(r.cells.iter().map(|c| c.1.as_str()).collect()).trim_end()
                );
            }
        }
        Format::Csv => {
            if rows.is_empty() {
                return;
            }
            let esc = |s: &str| {
                if s.contains(',') || s.contains('"') || s.contains('\n') {
                    format!("\"{}\"", s.replace('"', "\"\""))
                } else {
                    s.to_string()
                }
            };
            println!(
                "{}",
                rows[0].cells.iter().map(|c| esc(c.0)).collect::<Vec<_>>().join(",")
            );
            for r in rows {
                println!(
                    "{}",
                    r.cells.iter().map(|c| esc(&c.1)).collect::<Vec<_>>().join(",")
                );
            }
        }
        Format::Records => {
            for r in rows {
                let obj: serde_json::Map<String, serde_json::Value> = r
                    .cells
                    .iter()
                    .map(|c| (c.0.to_string(), serde_json::Value::String(c.1.clone())))
                    .collect();
                println!("{}", serde_json::Value::Object(obj));
            }
        }
    }
}

fn open_store(cli: &Cli) -> Result<Option<ResultStore>, EngineError> {
    Ok(match &cli.cache_dir {
        Some(dir) => Some(ResultStore::open(dir)?),
        None => None,
    })
}

fn run(cli: &Cli) -> Result<(), EngineError> {
    match &cli.command {
        Command::Targets => cmd_targets(cli),
        Command::Cosets { presentation, words, strategy, table } => {
            let p = load_presentation(presentation)?;
            let ws = parse_words(&p, words)?;
            let t = enumerate_cosets(&p, &ws, cli.limit, (*strategy).into())?;
            println!("index = {}", t.index());
            println!("normal = {}", t.is_normal());
            if *table {
                print_table(&p, &t);
            }
            Ok(())
        }
        Command::Lowindex { presentation, max_index } => {
            let p = load_presentation(presentation)?;
            let classes = low_index_subgroups(
                &p,
                *max_index,
                fpp_core::lowindex::DEFAULT_NODE_BUDGET,
            )?;
            let rows: Vec<Row> = classes
                .iter()
                .map(|c| Row {
                    cells: vec![
                        ("index", c.index.to_string()),
                        ("class_size", c.class_size.to_string()),
                        ("normal", c.normal.to_string()),
                    ],
                })
                .collect();
            emit_rows(cli.format, &rows);
            if cli.format == Format::Text {
                println!("classes = {}", classes.len());
                let total: usize = classes.iter().map(|c| c.class_size).sum();
                println!("subgroups = {total}");
            }
            Ok(())
        }
        Command::Rewrite { presentation, words, raw } => {
            let p = load_presentation(presentation)?;
            let ws = parse_words(&p, words)?;
            let t = enumerate_cosets(&p, &ws, cli.limit, Strategy::Hlt)?;
            let mut rp = reidemeister_schreier(&t);
            if !*raw {
                rp.simplify(fpp_core::rewrite::DEFAULT_TIETZE_BUDGET);
            }
            println!("index = {}", t.index());
            println!("presentation = {}", rp.presentation.format());
            for (i, w) in rp.generator_ambient_words.iter().enumerate() {
                println!(
                    "{} = {}",
                    rp.presentation.generators[i].name,
                    p.format_word(w)
                );
            }
            Ok(())
        }
        Command::Abelianize { presentation } => {
            let p = load_presentation(presentation)?;
            let ab = abelianization(&p);
            match cli.format {
                Format::Records => println!(
                    "{}",
                    json!({"h1": ab.invariants.display(),
                           "free_rank": ab.invariants.free_rank,
                           "torsion": ab.invariants.torsion.iter()
                               .map(|t| t.to_string()).collect::<Vec<_>>()})
                ),
                _ => println!("h1 = {}", ab.invariants.display()),
            }
            Ok(())
        }
        Command::Abcover { presentation } => {
            let p = load_presentation(presentation)?;
            let h1 = abelian_cover_h1(&p, cli.limit, fpp_core::rewrite::DEFAULT_TIETZE_BUDGET)?;
            match cli.format {
                Format::Records => println!("{}", json!({"abcover_h1": h1.display()})),
                _ => println!("abcover_h1 = {}", h1.display()),
            }
            Ok(())
        }
        Command::Homcount { presentation, target } => {
            let p = load_presentation(presentation)?;
            let q = make_named_group(target)?;
            let (hom, epi) = count_homomorphisms_reduced(&p, &q, cli.budget)?;
            // the plain count is an independent path; report any disagreement
            let (hom2, _) = count_homomorphisms(&p, &q, cli.budget)?;
            if hom != hom2 {
                return Err(EngineError::Other(format!(
                    "internal disagreement: reduced count {hom} vs plain count {hom2}"
                )));
            }
            match cli.format {
                Format::Records => println!(
                    "{}",
                    json!({"target": target, "hom_count": hom, "epi_count": epi})
                ),
                _ => {
                    println!("hom = {hom}");
                    println!("epi = {epi}");
                }
            }
            Ok(())
        }
        Command::Census { presentation, register, targets } => {
            cmd_census(cli, presentation.as_deref(), register.as_deref(), targets)
        }
        Command::Classify { register, tier, with_abcover, emit_certs } => {
            cmd_classify(cli, register, tier, *with_abcover, emit_certs.as_deref())
        }
        Command::VerifyCert { register, certs } => cmd_verify(cli, register, certs),
    }
}

fn cmd_targets(cli: &Cli) -> Result<(), EngineError> {
    let entries = battery_entries()?;
    let rows: Vec<Row> = entries
        .iter()
        .map(|e| {
            Ok(Row {
                cells: vec![
                    ("name", e.group.name.clone()),
                    ("order", e.group.order()?.to_string()),
                    ("aut_order", e.aut_order.to_string()),
                    ("solvable", e.is_solvable.to_string()),
                    ("nilpotent", e.is_nilpotent.to_string()),
                ],
            })
        })
        .collect::<Result<_, EngineError>>()?;
    emit_rows(cli.format, &rows);
    Ok(())
}

fn print_table(p: &Presentation, t: &CosetTable) {
    let header: Vec<String> = p.generators.iter().map(|g| g.name.clone()).collect();
    println!("coset  {}", header.join("  "));
    for c in 0..t.index() as u32 {
        let imgs: Vec<String> = (0..p.rank())
            .map(|g| t.apply(c, g, 1).to_string())
            .collect();
        println!("{c:5}  {}", imgs.join("  "));
    }
}

fn census_targets(names: &[String]) -> Result<Vec<GroupCatalogEntry>, EngineError> {
    if names.is_empty() {
        return default_battery();
    }
    names
        .iter()
        .map(|n| Ok(GroupCatalogEntry::build(make_named_group(n)?)?))
        .collect()
}

fn cmd_census(
    cli: &Cli,
    presentation: Option<&str>,
    register: Option<&std::path::Path>,
    target_names: &[String],
) -> Result<(), EngineError> {
    let targets = census_targets(target_names)?;
    let store = open_store(cli)?;
    let sources: Vec<(String, Arc<Presentation>)> = match (presentation, register) {
        (Some(p), None) => vec![("G".to_string(), load_presentation(p)?)],
        (None, Some(path)) => load_register(path)?
            .into_iter()
            .map(|e| (format!("j={} {}", e.j, e.identifier), e.presentation))
            .collect(),
        _ => {
            return Err(EngineError::Register(
                "census needs exactly one of a presentation or --register".into(),
            ))
        }
    };
    let mut rows = Vec::new();
    for (label, p) in &sources {
        for t in &targets {
            let key = ResultStore::key(&["profile", &p.format(), &t.group.name]);
            let prof = match store.as_ref().and_then(|s| s.get(&key)) {
                Some(v) => v,
                None => {
                    let v = quotient_profile(p, t, cli.budget)?;
                    if let Some(s) = &store {
                        s.put(&key, &v)?;
                    }
                    v
                }
            };
            rows.push(Row {
                cells: vec![
                    ("group", label.clone()),
                    ("target", prof.target.clone()),
                    ("target_order", prof.target_order.to_string()),
                    ("hom", prof.hom_count.to_string()),
                    ("epi", prof.epi_count.to_string()),
                    ("quotients", prof.quotient_count.to_string()),
                ],
            });
        }
    }
    emit_rows(cli.format, &rows);
    Ok(())
}

/// Class counts upstream of anything this engine computes: the 100
/// conjugate pairs of surfaces and their 50 distinct fundamental groups.
const SURFACE_CLASSES: usize = 100;
const GROUP_CLASSES: usize = 50;

fn cmd_classify(
    cli: &Cli,
    register: &std::path::Path,
    tier_arg: &str,
    with_abcover: bool,
    emit_certs: Option<&std::path::Path>,
) -> Result<(), EngineError> {
    let entries = load_register(register)?;
    let tiers: Vec<Tier> = if tier_arg == "all" {
        let mut ts = vec![Tier::H1, Tier::Nilpotent, Tier::Full];
        if with_abcover {
            ts.push(Tier::Abcover);
        }
        ts
    } else {
        vec![Tier::parse(tier_arg).ok_or_else(|| {
            EngineError::Register(format!("unknown tier {tier_arg:?}; use h1, nilpotent, full, abcover, or all"))
        })?]
    };
    if tiers.contains(&Tier::Abcover) && !with_abcover {
        return Err(EngineError::Register(
            "the abcover tier needs --with-abcover".into(),
        ));
    }
    let store = open_store(cli)?;
    let opts = BuildOptions {
        budget: cli.budget,
        coset_limit: cli.limit,
        with_abcover,
        ..BuildOptions::default()
    };
    let battery = default_battery()?;
    let fps = build_fingerprints(&entries, &battery, &opts, store.as_ref())?;
    let mut reports = Vec::new();
    for tier in &tiers {
        let report = refine_partition(&fps, *tier)?;
        render_partition(cli.format, &report);
        reports.push((*tier, report));
    }
    if cli.format == Format::Text && tier_arg == "all" && entries.len() == GROUP_CLASSES {
        let count = |t: Tier| {
            reports
                .iter()
                .find(|(x, _)| *x == t)
                .map(|(_, r)| r.class_count.to_string())
                .unwrap_or_default()
        };
        println!(
            "hierarchy: {SURFACE_CLASSES} -> {GROUP_CLASSES} -> {} -> {} -> {}",
            count(Tier::Full),
            count(Tier::Nilpotent),
            count(Tier::H1)
        );
    }
    if let Some(path) = emit_certs {
        let certs = emit_certificates(&fps);
        std::fs::write(path, serde_json::to_string_pretty(&certs).expect("certificates serialize"))?;
        let no_witness = certs
            .iter()
            .filter(|c| {
                matches!(c.witness, fpp_core::classify::Witness::NoWitnessInBattery)
            })
            .count();
        println!(
            "certificates = {} ({} without a witness in the battery)",
            certs.len(),
            no_witness
        );
    }
    Ok(())
}

fn render_partition(format: Format, report: &PartitionReport) {
    match format {
        Format::Text => {
            println!("tier {}: {} classes", report.tier, report.class_count);
            for (i, class) in report.classes.iter().enumerate() {
                let members: Vec<String> = class
                    .iter()
                    .map(|(j, id)| format!("j={j} ({id})"))
                    .collect();
                println!("  [{}] {}", i + 1, members.join(", "));
            }
        }
        Format::Csv => {
            println!("tier,class,j,identifier");
            for (i, class) in report.classes.iter().enumerate() {
                for (j, id) in class {
                    let id = if id.contains(',') {
                        format!("\"{}\"", id.replace('"', "\"\""))
                    } else {
                        id.clone()
                    };
                    println!("{},{},{},{}", report.tier, i + 1, j, id);
                }
            }
        }
        Format::Records => println!("{}", serde_json::to_string(report).unwrap()),
    }
}

fn cmd_verify(
    cli: &Cli,
    register: &std::path::Path,
    certs: &std::path::Path,
) -> Result<(), EngineError> {
    let entries = load_register(register)?;
    let by_j: std::collections::BTreeMap<u32, &RegisterEntry> =
        entries.iter().map(|e| (e.j, e)).collect();
    let certs: Vec<Certificate> = serde_json::from_str(&std::fs::read_to_string(certs)?)
        .map_err(|e| EngineError::Register(format!("certificate file: {e}")))?;
    let opts = BuildOptions {
        budget: cli.budget,
        coset_limit: cli.limit,
        with_abcover: true,
        ..BuildOptions::default()
    };
    let mut failures = 0usize;
    for c in &certs {
        let (left, right) = match (by_j.get(&c.left_j), by_j.get(&c.right_j)) {
            (Some(l), Some(r)) => (*l, *r),
            _ => {
                return Err(EngineError::Register(format!(
                    "certificate references j = {} / {} absent from the register",
                    c.left_j, c.right_j
                )))
            }
        };
        let ok = verify_certificate(c, left, right, &opts)?;
        if !ok {
            failures += 1;
        }
        println!(
            "{} pair ({}, {}) witness {:?}",
            if ok { "ok  " } else { "FAIL" },
            c.left_j,
            c.right_j,
            c.witness
        );
    }
    println!("verified {} certificates, {} failures", certs.len(), failures);
    if failures > 0 {
        return Err(EngineError::Other(format!(
            "{failures} certificates failed replay"
        )));
    }
    Ok(())
}
