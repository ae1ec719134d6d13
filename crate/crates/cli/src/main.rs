//! `sylgal`: classify group specs, run the brute-force pipeline, and cross-check corpora.
//!
//! Exit codes: 0 success, 1 malformed or unreadable input, 2 not covered,
//! 3 bound exceeded, 4 cross-check mismatch.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use sylgal::classify::{self, ClassificationRecord, ClassifyError};
use sylgal::grpzoo::{ExtKind, Family, GroupSpec, ZooError};
use sylgal::pipeline::{self, Bounds, CorpusEntry, CorpusItem, PipelineError, Stage};

const CORPUS_CSV_COLUMNS: [&str; 19] = [
    "group",
    "family",
    "n",
    "q",
    "eps",
    "tower",
    "ext",
    "stage",
    "order",
    "rank_formula",
    "rank_bruteforce",
    "two_generated_formula",
    "k0",
    "k0_sigma",
    "k0_formula",
    "k0_sigma_formula",
    "num_blocks",
    "theorem_a_consistent",
    "seed",
];

const CLASSIFY_CSV_COLUMNS: [&str; 10] = [
    "group",
    "family",
    "n",
    "q",
    "eps",
    "rank",
    "two_generated",
    "k0_formula",
    "k0_sigma_formula",
    "theorem_a_prediction",
];

#[derive(Parser)]
#[command(name = "sylgal", version, about = "Sylow 3-subgroup ranks and principal 3-block Galois counts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form rank and k0 predictions for a group spec.
    Classify {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_enum, default_value = "json")]
        out: OutFormat,
    },
    /// Construct the group and run the full pipeline.
    Bruteforce {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Stop after the given stage.
        #[arg(long, value_enum, default_value = "full")]
        stage: StageArg,
    },
    /// Check every entry of a corpus for internal consistency.
    Crosscheck {
        #[arg(long)]
        corpus: PathBuf,
    },
    /// Run a list of specs (the bundled list by default) and print the entries.
    Corpus {
        /// JSON array of `{"spec": .., "stage": ..}` items.
        #[arg(long)]
        items: Option<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args, Default)]
struct SpecArgs {
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    q: Option<u64>,
    /// `+` (linear) or `-` (unitary).
    #[arg(long, allow_hyphen_values = true)]
    eps: Option<String>,
    /// Comma-separated exponents of a wreath tower, e.g. `1,1,1`.
    #[arg(long)]
    tower: Option<String>,
    /// Generator file.
    #[arg(long)]
    external: Option<PathBuf>,
    /// Sporadic group label.
    #[arg(long)]
    label: Option<String>,
    /// Almost simple extension kind.
    #[arg(long)]
    ext: Option<String>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = Bounds::default().max_order)]
    max_order: u128,
    #[arg(long, default_value_t = Bounds::default().max_classes)]
    max_classes: usize,
    #[arg(long, value_enum, default_value = "json")]
    out: OutFormat,
    /// Record wall-clock timings (makes output nondeterministic).
    #[arg(long)]
    timings: bool,
}

impl RunArgs {
    fn bounds(&self) -> Bounds {
        Bounds {
            max_order: self.max_order,
            max_classes: self.max_classes,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum StageArg {
    Formula,
    Rank,
    Full,
}

impl From<StageArg> for Stage {
    fn from(s: StageArg) -> Stage {
        match s {
            StageArg::Formula => Stage::Formula,
            StageArg::Rank => Stage::Rank,
            StageArg::Full => Stage::Full,
        }
    }
}

#[derive(Debug)]
enum Failure {
    Input(String),
    NotCovered(String),
    Bound(String),
    Mismatch,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::NotCovered(_) => 2,
            Failure::Bound(_) => 3,
            Failure::Mismatch => 4,
        }
    }
}

impl From<ClassifyError> for Failure {
    fn from(e: ClassifyError) -> Failure {
        match e {
            ClassifyError::NotCovered(_) => Failure::NotCovered(e.to_string()),
            ClassifyError::Invalid(_) => Failure::Input(e.to_string()),
        }
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Failure {
        if e.is_bound() {
            return Failure::Bound(e.to_string());
        }
        match e {
            PipelineError::Zoo(ZooError::Unsupported(_)) => Failure::NotCovered(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn parse_eps(s: &str) -> Result<i8, Failure> {
    match s {
        "+" | "+1" | "1" => Ok(1),
        "-" | "-1" => Ok(-1),
        _ => Err(Failure::Input(format!("eps must be + or -, got `{s}`"))),
    }
}

fn build_spec(a: &SpecArgs) -> Result<GroupSpec, Failure> {
    let bad = |m: String| Failure::Input(m);
    let family: Option<Family> = match &a.family {
        Some(f) => Some(f.parse().map_err(|e: ZooError| bad(e.to_string()))?),
        None => None,
    };
    let mut spec = if let Some(path) = &a.external {
        GroupSpec::external(path.to_string_lossy())
    } else if let Some(t) = &a.tower {
        if family.is_some_and(|f| f != Family::WreathTower) {
            return Err(bad("--tower only applies to wreath_tower".into()));
        }
        let tower = t
            .split(',')
            .map(|x| x.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| bad(format!("malformed tower `{t}`")))?;
        GroupSpec::wreath_tower(tower)
    } else {
        let family = family.ok_or_else(|| bad("one of --family, --tower, --external is required".into()))?;
        match family {
            Family::Sporadic => {
                GroupSpec::sporadic(a.label.as_deref().ok_or_else(|| bad("sporadic needs --label".into()))?)
            }
            Family::Sym => GroupSpec::sym(a.n.ok_or_else(|| bad("--n is required".into()))?),
            Family::Alt => GroupSpec::alt(a.n.ok_or_else(|| bad("--n is required".into()))?),
            f => {
                let eps = match &a.eps {
                    Some(e) => parse_eps(e)?,
                    None if f.is_unitary_name() => -1,
                    None => 1,
                };
                GroupSpec::lie(f, a.n.unwrap_or(0), a.q.ok_or_else(|| bad("--q is required".into()))?, eps)
            }
        }
    };
    if let Some(e) = &a.ext {
        let kind: ExtKind = e.parse().map_err(|e: ZooError| bad(e.to_string()))?;
        spec = spec.with_ext(kind);
    }
    spec.validate().map_err(|e| bad(e.to_string()))?;
    Ok(spec)
}

fn json_string<T: Serialize>(x: &T) -> String {
    // through Value so that object keys come out sorted
    let v = serde_json::to_value(x).expect("serializable");
    serde_json::to_string_pretty(&v).expect("serializable")
}

fn cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(Value::Array(a)) => a.iter().map(|x| cell(Some(x))).collect::<Vec<_>>().join(" "),
        Some(x) => x.to_string(),
    }
}

fn csv_rows(columns: &[&str], rows: &[Value]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(columns).expect("in-memory write");
    for r in rows {
        let spec = r.get("spec");
        let record: Vec<String> = columns
            .iter()
            .map(|c| cell(r.get(*c).or_else(|| spec.and_then(|s| s.get(*c)))))
            .collect();
        w.write_record(&record).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8")
}

fn emit(text: &str) {
    let mut out = io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
    if !text.ends_with('\n') {
        let _ = out.write_all(b"\n");
    }
}

fn cmd_classify(spec: &SpecArgs, out: OutFormat) -> Result<(), Failure> {
    let spec = build_spec(spec)?;
    let rec: ClassificationRecord = classify::theorem_a_predict(&spec)?;
    match out {
        OutFormat::Json => emit(&json_string(&rec)),
        OutFormat::Csv => emit(&csv_rows(&CLASSIFY_CSV_COLUMNS, &[serde_json::to_value(&rec).expect("serializable")])),
    }
    Ok(())
}

fn emit_entries(entries: &[CorpusEntry], out: OutFormat) {
    match out {
        OutFormat::Json => emit(&json_string(&entries)),
        OutFormat::Csv => {
            let rows: Vec<Value> = entries.iter().map(pipeline::entry_json).collect();
            emit(&csv_rows(&CORPUS_CSV_COLUMNS, &rows))
        }
    }
}

fn cmd_bruteforce(spec: &SpecArgs, run: &RunArgs, stage: StageArg) -> Result<(), Failure> {
    let spec = build_spec(spec)?;
    let entry = pipeline::run(&spec, stage.into(), run.seed, run.bounds(), run.timings)?;
    match run.out {
        OutFormat::Json => emit(&json_string(&entry)),
        OutFormat::Csv => emit_entries(std::slice::from_ref(&entry), OutFormat::Csv),
    }
    if entry.theorem_a_consistent == Some(false) {
        return Err(Failure::Mismatch);
    }
    Ok(())
}

fn read_json(path: &PathBuf) -> Result<Option<Value>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    if text.trim().is_empty() {
        return Ok(None);
    }
    serde_json::from_str(&text)
        .map(Some)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn cmd_crosscheck(path: &PathBuf) -> Result<(), Failure> {
    let entries: Vec<CorpusEntry> = match read_json(path)? {
        None => Vec::new(),
        Some(v) => serde_json::from_value(v).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?,
    };
    if entries.is_empty() {
        eprintln!("warning: corpus {} is empty", path.display());
        return Ok(());
    }
    let mut mismatches = Vec::new();
    let mut checked = 0usize;
    for (i, e) in entries.iter().enumerate() {
        let checks = e.checks();
        if !checks.is_empty() {
            checked += 1;
        }
        let failed: Vec<_> = checks.iter().filter(|c| !c.ok).collect();
        let stale = e.theorem_a_consistent.is_some() && e.theorem_a_consistent != e.consistency();
        if !failed.is_empty() || stale {
            let mut why: Vec<String> = failed.iter().map(|c| format!("{}: {}", c.name, c.detail)).collect();
            if stale {
                why.push("stored consistency flag disagrees with the recorded legs".into());
            }
            mismatches.push((i, e.group.clone(), why.join("; ")));
        }
    }
    println!(
        "{} entries, {} with cross-checks, {} formula-only or unchecked, {} mismatches",
        entries.len(),
        checked,
        entries.len() - checked,
        mismatches.len()
    );
    if mismatches.is_empty() {
        return Ok(());
    }
    println!("{:<6} {:<20} detail", "index", "group");
    for (i, g, why) in &mismatches {
        println!("{i:<6} {g:<20} {why}");
    }
    Err(Failure::Mismatch)
}

fn cmd_corpus(items: Option<&PathBuf>, run: &RunArgs) -> Result<(), Failure> {
    let items: Vec<CorpusItem> = match items {
        None => pipeline::default_corpus(),
        Some(p) => match read_json(p)? {
            None => Vec::new(),
            Some(v) => serde_json::from_value(v).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?,
        },
    };
    if items.is_empty() {
        eprintln!("warning: no corpus items");
    }
    let bounds = run.bounds();
    let results: Vec<Result<CorpusEntry, (String, Failure)>> = items
        .par_iter()
        .map(|it| {
            pipeline::run(&it.spec, it.stage, run.seed, bounds, run.timings).map_err(|e| (it.spec.name(), e.into()))
        })
        .collect();
    let mut entries = Vec::new();
    let mut first_failure = None;
    for r in results {
        match r {
            Ok(e) => entries.push(e),
            Err((name, f)) => {
                eprintln!("error: {name}: {}", describe(&f));
                first_failure.get_or_insert(f);
            }
        }
    }
    if let Some(f) = first_failure {
        return Err(f);
    }
    emit_entries(&entries, run.out);
    if entries.iter().any(|e| e.theorem_a_consistent == Some(false)) {
        return Err(Failure::Mismatch);
    }
    Ok(())
}

fn describe(f: &Failure) -> String {
    match f {
        Failure::Input(m) | Failure::NotCovered(m) | Failure::Bound(m) => m.clone(),
        Failure::Mismatch => "inconsistent entry".into(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Classify { spec, out } => cmd_classify(spec, *out),
        Command::Bruteforce { spec, run, stage } => cmd_bruteforce(spec, run, *stage),
        Command::Crosscheck { corpus } => cmd_crosscheck(corpus),
        Command::Corpus { items, run } => cmd_corpus(items.as_ref(), run),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::NotCovered(m) => eprintln!("not covered: {m}"),
                Failure::Bound(m) => eprintln!("bound exceeded: {m}"),
                Failure::Input(m) => eprintln!("error: {m}"),
                Failure::Mismatch => eprintln!("cross-check mismatch"),
            }
            ExitCode::from(f.code())
        }
    }
}
