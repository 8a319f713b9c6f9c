//! Command-line front end for the feedback-scheduling library.
//!
//! Thin shell around the library crate: every subcommand parses arguments,
//! calls one library operation, and prints the result as text, CSV or JSON
//! (`--format`). Parallelism lives in the library; `--threads` caps the
//! worker pool. Randomized commands take `--seed` and always print the
//! effective seed to stderr, so unseeded runs can be replayed.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 verification failure
//! (a witness is printed), 3 build failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use fbsched::bounds::{self, BoundReport, BoundValue};
use fbsched::codes;
use fbsched::covering::{family_covers_all, minimal_family_size, OracleLimits, DEFAULT_MAX_PATTERNS};
use fbsched::family_file::{read_family, write_family};
use fbsched::phash;
use fbsched::sim::{self, CodeChoice};
use fbsched::{ActivityPattern, CodeParams, Error, FeedbackMessage, PartitionFamily};

const MANIFEST_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "fbsched",
    version,
    about = "Minimum-feedback collision-free scheduling: bounds, codes, simulations"
)]
struct Cli {
    /// Cap the worker thread pool (default: one worker per core).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output format; text rounds bits to 1 decimal, CSV/JSON keep full precision.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every applicable bound at one (n, k, b, m) point.
    Bounds(BoundsArgs),
    /// Sweep the slot count b and emit the bound table.
    Tradeoff(TradeoffArgs),
    /// Evaluate the shared-slot bounds for a list of per-slot loads m.
    Multislot(MultislotArgs),
    /// Build a verified covering family; writes the family file + manifest.
    Build(BuildArgs),
    /// Exhaustively verify that a family file covers every pattern.
    Verify(VerifyArgs),
    /// Greedy-encode an activity pattern against a family file.
    Encode(EncodeArgs),
    /// Print one user's slot for a given feedback index.
    Decode(DecodeArgs),
    /// Monte Carlo protocol trials for a chosen feedback code.
    Simulate(SimulateArgs),
    /// Compare the greedy-index distribution with the geometric model.
    IndexLaw(IndexLawArgs),
    /// Exact minimum family size by exhaustive search (tiny instances).
    Exact(ExactArgs),
    /// Build one perfect-hash feedback message.
    PhashBuild(PhashBuildArgs),
    /// Average compressed perfect-hash size over random patterns.
    PhashRate(PhashRateArgs),
    /// Bits-per-key comparison: model factors, published constants, and a
    /// measured column from this crate's hash builder.
    BitsPerKey(BitsPerKeyArgs),
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    k: u64,
    /// Slots per partition (default: b = k).
    #[arg(long)]
    b: Option<u64>,
    /// Per-slot capacity.
    #[arg(long, default_value_t = 1)]
    m: u64,
}

#[derive(Args)]
struct TradeoffArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    k: u64,
    #[arg(long)]
    b_min: u64,
    #[arg(long)]
    b_max: u64,
    #[arg(long, default_value_t = 1)]
    step: u64,
    /// Write the table here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MultislotArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    k: u64,
    /// Comma-separated list of per-slot loads, e.g. 1,2,5 (each must divide k).
    #[arg(long, value_delimiter = ',')]
    m_list: Vec<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    k: u64,
    /// Slots per partition (default: b = k).
    #[arg(long)]
    b: Option<u64>,
    #[arg(long, default_value_t = 1)]
    m: u64,
    /// Family file to write; the manifest goes to `<out>.json`.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Per-round failure budget for sizing the family.
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    #[arg(long, default_value_t = 64)]
    max_rounds: u32,
    /// Cap on the number of patterns exhaustive verification may enumerate.
    #[arg(long, default_value_t = DEFAULT_MAX_PATTERNS)]
    max_patterns: u64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Family file; `<family>.json` is consulted for k and m when present.
    #[arg(long)]
    family: PathBuf,
    /// Number of active users (overrides the manifest).
    #[arg(long)]
    k: Option<u64>,
    /// Per-slot capacity (overrides the manifest).
    #[arg(long)]
    m: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_MAX_PATTERNS)]
    max_patterns: u64,
}

#[derive(Args)]
struct EncodeArgs {
    #[arg(long)]
    family: PathBuf,
    /// Comma-separated 0-based user indices, e.g. 0,3,7.
    #[arg(long)]
    pattern: String,
    #[arg(long, default_value_t = 1)]
    m: u64,
}

#[derive(Args)]
struct DecodeArgs {
    #[arg(long)]
    family: PathBuf,
    /// Feedback index as printed by `encode` (0-based).
    #[arg(long)]
    t: usize,
    /// 0-based user index.
    #[arg(long)]
    user: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CodeKind {
    Naive,
    Twouser,
    Family,
    Phash,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, value_enum)]
    code: CodeKind,
    #[arg(long)]
    n: u64,
    /// Active users per trial (default: 2, the two-user code's regime).
    #[arg(long, default_value_t = 2)]
    k: u64,
    /// Slots (default: b = k).
    #[arg(long)]
    b: Option<u64>,
    #[arg(long, default_value_t = 1)]
    m: u64,
    /// Family file, required for --code family.
    #[arg(long)]
    family: Option<PathBuf>,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct IndexLawArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    k: u64,
    #[arg(long)]
    b: u64,
    #[arg(long, default_value_t = 100_000)]
    families: u64,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct ExactArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    k: u64,
    #[arg(long)]
    b: u64,
    #[arg(long, default_value_t = 1)]
    m: u64,
    /// Search guard: largest n the exhaustive oracle will accept.
    #[arg(long, default_value_t = OracleLimits::default().max_n)]
    max_n: u64,
    /// Search guard: largest k the exhaustive oracle will accept.
    #[arg(long, default_value_t = OracleLimits::default().max_k)]
    max_k: u64,
}

#[derive(Args)]
struct PhashBuildArgs {
    /// Comma-separated 0-based user indices, e.g. 0,3,7.
    #[arg(long)]
    pattern: String,
    /// Slot count the hash maps into.
    #[arg(long)]
    b: u32,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = phash::DEFAULT_MAX_DISPLACEMENT)]
    max_displacement: u32,
    #[arg(long, default_value_t = 16)]
    max_rounds: u32,
    /// Write the wire-format blob here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PhashRateArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    k: u64,
    #[arg(long)]
    b: u32,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct BitsPerKeyArgs {
    /// Keys per measured build.
    #[arg(long, default_value_t = 1 << 10)]
    k: u64,
    /// Population the measured patterns are drawn from.
    #[arg(long, default_value_t = 1 << 20)]
    n: u64,
    /// Builds averaged per measured row.
    #[arg(long, default_value_t = 10)]
    trials: u64,
    #[arg(long)]
    seed: Option<u64>,
}

/// A failure that carries its process exit code.
struct Failure {
    code: u8,
    message: String,
}

type CliResult = Result<(), Failure>;

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BuildFailed { .. } | Error::BuildExhausted { .. } => 3,
            _ => 1,
        };
        fail(code, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        fail(1, e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        fail(1, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help/--version land here too; keep their success status.
            let is_usage_error = e.use_stderr();
            let _ = e.print();
            return if is_usage_error {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli.command, cli.format) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command, format: Format) -> CliResult {
    match command {
        Command::Bounds(a) => cmd_bounds(a, format),
        Command::Tradeoff(a) => cmd_tradeoff(a, format),
        Command::Multislot(a) => cmd_multislot(a, format),
        Command::Build(a) => cmd_build(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Encode(a) => cmd_encode(a),
        Command::Decode(a) => cmd_decode(a),
        Command::Simulate(a) => cmd_simulate(a, format),
        Command::IndexLaw(a) => cmd_index_law(a, format),
        Command::Exact(a) => cmd_exact(a, format),
        Command::PhashBuild(a) => cmd_phash_build(a, format),
        Command::PhashRate(a) => cmd_phash_rate(a, format),
        Command::BitsPerKey(a) => cmd_bits_per_key(a, format),
    }
}

/// Resolves an optional seed, always reporting the effective value on stderr.
fn effective_seed(seed: Option<u64>) -> u64 {
    let seed = seed.unwrap_or_else(rand::random);
    eprintln!("seed: {seed}");
    seed
}

fn parse_pattern(text: &str) -> Result<ActivityPattern, Failure> {
    let users = text
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|_| fail(1, format!("bad user index {tok:?} in pattern")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ActivityPattern::from_unsorted(users)?)
}

// ---------------------------------------------------------------------------
// Bound tables.
// ---------------------------------------------------------------------------

fn bits_cell(v: Option<BoundValue>) -> String {
    match v {
        Some(v) => format!("{:9.1}  [{}]", v.bits, v.form),
        None => "      n/a".to_string(),
    }
}

fn print_report_text(r: &BoundReport) {
    println!("n = {}, k = {}, b = {}, m = {}", r.n, r.k, r.b, r.m);
    println!("  fixed_achieve          {}", bits_cell(r.fixed_achieve));
    println!("  fixed_achieve_exact    {}", bits_cell(r.fixed_achieve_exact));
    println!("  fixed_converse_volume  {}", bits_cell(r.fixed_converse_volume));
    println!("  fixed_converse_loglog  {}", bits_cell(r.fixed_converse_loglog));
    println!("  var_achieve            {}", bits_cell(r.var_achieve));
    println!("  var_converse           {}", bits_cell(r.var_converse));
    println!("  fk_lower               {}", bits_cell(r.fk_lower));
    println!("  fk_upper               {}", bits_cell(r.fk_upper));
    match r.snir_t {
        Some(t) => println!("  snir_T                 {t:9.1}"),
        None => println!("  snir_T                       n/a"),
    }
    println!("  naive_bits             {:9}", r.naive_bits);
}

fn reports_csv(rows: &[BoundReport]) -> String {
    let mut out = String::from(bounds::csv_header());
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

fn emit_table(rows: &[BoundReport], format: Format, out: Option<&Path>) -> CliResult {
    let text = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(rows)?;
            s.push('\n');
            s
        }
        _ => reports_csv(rows),
    };
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_bounds(a: BoundsArgs, format: Format) -> CliResult {
    let params = CodeParams::new(a.n, a.k, a.b.unwrap_or(a.k), a.m)?;
    let report = BoundReport::for_params(&params)?;
    match format {
        Format::Text => print_report_text(&report),
        Format::Json => println!("{}", serde_json::to_string_pretty(&report)?),
        Format::Csv => {
            println!("{}", bounds::csv_header());
            println!("{}", report.csv_row());
        }
    }
    Ok(())
}

fn cmd_tradeoff(a: TradeoffArgs, format: Format) -> CliResult {
    let rows = bounds::tradeoff_table(a.n, a.k, a.b_min, a.b_max, a.step)?;
    emit_table(&rows, format, a.out.as_deref())
}

fn cmd_multislot(a: MultislotArgs, format: Format) -> CliResult {
    let rows = bounds::multislot_table(a.n, a.k, &a.m_list)?;
    emit_table(&rows, format, a.out.as_deref())
}

// ---------------------------------------------------------------------------
// Family files: build / verify / encode / decode.
// ---------------------------------------------------------------------------

/// Reproducibility manifest written next to every built family file.
#[derive(Serialize, Deserialize)]
struct Manifest {
    format_version: u32,
    n: u64,
    k: u64,
    b: u64,
    m: u64,
    seed: u64,
    epsilon: f64,
    t: u64,
    certified: bool,
    rounds_used: u32,
}

fn manifest_path(family: &Path) -> PathBuf {
    let mut name = family.as_os_str().to_owned();
    name.push(".json");
    PathBuf::from(name)
}

fn cmd_build(a: BuildArgs) -> CliResult {
    let params = CodeParams::new(a.n, a.k, a.b.unwrap_or(a.k), a.m)?;
    let seed = effective_seed(a.seed);
    let outcome =
        codes::build_verified_family_with(&params, seed, a.max_rounds, a.max_patterns, a.epsilon)?;
    write_family(&outcome.family, &a.out)?;
    let manifest = Manifest {
        format_version: MANIFEST_VERSION,
        n: params.n(),
        k: params.k(),
        b: params.b(),
        m: params.m(),
        seed,
        epsilon: a.epsilon,
        t: outcome.family.len() as u64,
        certified: outcome.certified,
        rounds_used: outcome.rounds_used,
    };
    std::fs::write(
        manifest_path(&a.out),
        serde_json::to_string_pretty(&manifest)? + "\n",
    )?;
    println!(
        "built T = {} partitions (certified, round {}) -> {}",
        manifest.t,
        manifest.rounds_used,
        a.out.display()
    );
    Ok(())
}

fn read_manifest(family: &Path) -> Result<Option<Manifest>, Failure> {
    let path = manifest_path(family);
    if !path.exists() {
        return Ok(None);
    }
    let manifest: Manifest = serde_json::from_str(&std::fs::read_to_string(&path)?)?;
    if manifest.format_version != MANIFEST_VERSION {
        return Err(fail(
            1,
            format!(
                "manifest {} has format version {}, this build expects {MANIFEST_VERSION}",
                path.display(),
                manifest.format_version
            ),
        ));
    }
    Ok(Some(manifest))
}

fn cmd_verify(a: VerifyArgs) -> CliResult {
    let family = read_family(&a.family)?;
    let manifest = read_manifest(&a.family)?;
    let k = a
        .k
        .or(manifest.as_ref().map(|m| m.k))
        .ok_or_else(|| fail(1, "no manifest found; pass --k"))?;
    let m = a.m.or(manifest.as_ref().map(|m| m.m)).unwrap_or(1);
    let params = CodeParams::new(family.n() as u64, k, u64::from(family.b()), m)?;
    match family_covers_all(&family, &params, a.max_patterns)? {
        None => {
            println!(
                "certified: all patterns of {} users covered by T = {} partitions",
                k,
                family.len()
            );
            Ok(())
        }
        Some(witness) => {
            let users: Vec<String> = witness.users().iter().map(|u| u.to_string()).collect();
            Err(fail(
                2,
                format!("uncovered pattern witness: {}", users.join(",")),
            ))
        }
    }
}

fn cmd_encode(a: EncodeArgs) -> CliResult {
    let family = read_family(&a.family)?;
    let pattern = parse_pattern(&a.pattern)?;
    match codes::greedy_encode(&family, &pattern, a.m) {
        Ok(msg) => {
            println!("{}", msg.index);
            Ok(())
        }
        Err(Error::Uncovered) => Err(fail(
            2,
            format!("pattern {} is uncovered by this family", a.pattern.trim()),
        )),
        Err(e) => Err(e.into()),
    }
}

fn cmd_decode(a: DecodeArgs) -> CliResult {
    let family = read_family(&a.family)?;
    let slot = codes::decode(&family, FeedbackMessage { index: a.t }, a.user)?;
    println!("{slot}");
    Ok(())
}

// ---------------------------------------------------------------------------
// Simulations.
// ---------------------------------------------------------------------------

fn cmd_simulate(a: SimulateArgs, format: Format) -> CliResult {
    let b = a.b.unwrap_or(a.k);
    let params = CodeParams::new(a.n, a.k, b, a.m)?;
    let seed = effective_seed(a.seed);
    let family: Option<PartitionFamily> = match a.code {
        CodeKind::Family => {
            let path = a
                .family
                .as_ref()
                .ok_or_else(|| fail(1, "--code family needs --family <file>"))?;
            Some(read_family(path)?)
        }
        _ => None,
    };
    let choice = match a.code {
        CodeKind::Naive => CodeChoice::Naive,
        CodeKind::Twouser => CodeChoice::TwoUser,
        CodeKind::Family => CodeChoice::Family(family.as_ref().expect("loaded above")),
        CodeKind::Phash => CodeChoice::Phash,
    };
    let report = sim::run_trials(&choice, &params, a.trials, seed)?;
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report)?),
        Format::Csv => {
            // The flattened frequency table; summary figures live in JSON/text.
            println!("symbol,count,empirical");
            for &(symbol, count) in &report.frequencies {
                println!(
                    "{symbol},{count},{}",
                    count as f64 / report.scheduled_trials as f64
                );
            }
        }
        Format::Text => {
            println!("trials             {:10}", report.trials);
            println!("scheduled          {:10}", report.scheduled_trials);
            println!("collisions         {:10}", report.collision_events);
            println!("uncovered          {:10}", report.uncovered_events);
            println!("mean fixed bits    {:12.1}", report.mean_fixed_bits);
            println!("empirical entropy  {:12.1}", report.empirical_entropy_bits);
            println!("huffman rate       {:12.1}", report.huffman_rate_bits);
            println!("distinct symbols   {:10}", report.frequencies.len());
        }
    }
    Ok(())
}

fn cmd_index_law(a: IndexLawArgs, format: Format) -> CliResult {
    let seed = effective_seed(a.seed);
    let report = sim::greedy_index_law(a.n, a.k, a.b, a.families, seed)?;
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report)?),
        Format::Csv => {
            println!("t,expected,observed,empirical");
            for row in &report.rows {
                println!("{},{},{},{}", row.t, row.expected, row.observed, row.empirical);
            }
        }
        Format::Text => {
            println!(
                "coverage p = {:.6}, families = {}, TV distance = {:.5}",
                report.coverage_p, report.families, report.tv_distance
            );
            println!("{:>4} {:>12} {:>12}", "t", "expected", "empirical");
            for row in report.rows.iter().take(12) {
                println!("{:4} {:12.6} {:12.6}", row.t, row.expected, row.empirical);
            }
            if report.overflow_observed > 0 {
                println!("overflow: {} families", report.overflow_observed);
            }
        }
    }
    Ok(())
}

fn cmd_exact(a: ExactArgs, format: Format) -> CliResult {
    let params = CodeParams::new(a.n, a.k, a.b, a.m)?;
    let limits = OracleLimits {
        max_n: a.max_n,
        max_k: a.max_k,
        ..OracleLimits::default()
    };
    let (t_star, family) = minimal_family_size(&params, &limits)?;
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Exact {
                t_star: u32,
                witness: Vec<Vec<u32>>,
            }
            let witness = family
                .partitions()
                .iter()
                .map(|p| p.assignment().to_vec())
                .collect();
            println!("{}", serde_json::to_string_pretty(&Exact { t_star, witness })?);
        }
        _ => {
            println!("T*={t_star}");
            for (i, partition) in family.partitions().iter().enumerate() {
                let cells: Vec<String> = partition
                    .assignment()
                    .iter()
                    .map(|s| s.to_string())
                    .collect();
                println!("partition {i}: {}", cells.join(","));
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Perfect hashing.
// ---------------------------------------------------------------------------

fn cmd_phash_build(a: PhashBuildArgs, format: Format) -> CliResult {
    let pattern = parse_pattern(&a.pattern)?;
    let seed = effective_seed(a.seed);
    let (feedback, rounds) = phash::phash_build_with_retry(
        &pattern,
        a.b,
        seed,
        a.max_displacement,
        a.max_rounds,
        &phash::PhashOptions::default(),
    )?;
    let blob = phash::encode_feedback(&feedback)?;
    if let Some(out) = &a.out {
        std::fs::write(out, &blob)?;
    }
    let slots: Vec<(usize, u32)> = pattern
        .users()
        .iter()
        .map(|&u| (u, phash::phash_eval(&feedback, u as u64)))
        .collect();
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Built<'a> {
                feedback: &'a phash::HashFeedback,
                rounds_used: u32,
                bits: u64,
                bits_per_key: f64,
                slots: Vec<(usize, u32)>,
            }
            let report = Built {
                feedback: &feedback,
                rounds_used: rounds,
                bits: feedback.compressed_bits(),
                bits_per_key: feedback.compressed_bits() as f64 / pattern.k() as f64,
                slots,
            };
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        _ => {
            println!(
                "bits = {} ({:.1} per key), buckets = {}, round = {rounds}",
                feedback.compressed_bits(),
                feedback.compressed_bits() as f64 / pattern.k() as f64,
                feedback.bucket_count()
            );
            for (user, slot) in slots {
                println!("user {user}: slot {slot}");
            }
        }
    }
    Ok(())
}

fn cmd_phash_rate(a: PhashRateArgs, format: Format) -> CliResult {
    let seed = effective_seed(a.seed);
    let report = phash::phash_rate_experiment(a.n, a.k, a.b, a.trials, seed)?;
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report)?),
        Format::Csv => {
            println!(
                "n,k,b,trials,mean_bits_per_key,mean_bits,min_bits,max_bits,mean_displacement,retry_rounds,ident_bits_per_user"
            );
            println!(
                "{},{},{},{},{},{},{},{},{},{},{}",
                report.n,
                report.k,
                report.b,
                report.trials,
                report.mean_bits_per_key,
                report.mean_bits,
                report.min_bits,
                report.max_bits,
                report.mean_displacement,
                report.retry_rounds,
                report.ident_bits_per_user
            );
        }
        Format::Text => {
            println!("trials            {:10}", report.trials);
            println!("mean bits/key     {:12.2}", report.mean_bits_per_key);
            println!("mean bits         {:12.1}", report.mean_bits);
            println!("min / max bits    {} / {}", report.min_bits, report.max_bits);
            println!("mean displacement {:12.2}", report.mean_displacement);
            println!("retry rounds      {:10}", report.retry_rounds);
            println!(
                "ident bits/user   {:12.2}  (log2(n/b), payload-side cost)",
                report.ident_bits_per_user
            );
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ComparisonRow {
    method: String,
    beta: f64,
    bits_per_key: f64,
    source: String,
}

fn cmd_bits_per_key(a: BitsPerKeyArgs, format: Format) -> CliResult {
    let seed = effective_seed(a.seed);
    let mut rows: Vec<ComparisonRow> = bounds::bits_per_key_table()
        .into_iter()
        .map(|r| ComparisonRow {
            method: r.method.to_string(),
            beta: r.beta,
            bits_per_key: r.bits_per_key,
            source: r.source.to_string(),
        })
        .collect();
    for beta in [1.0f64, 1.23, 2.0] {
        let b = u32::try_from((a.k as f64 * beta) as u64)
            .map_err(|_| fail(1, "b = beta*k exceeds u32"))?;
        let measured = phash::phash_rate_experiment(a.n, a.k, b, a.trials, seed)?;
        rows.push(ComparisonRow {
            method: "this crate (displacement hashing)".to_string(),
            beta,
            bits_per_key: measured.mean_bits_per_key,
            source: format!("measured, k = {}, {} builds", a.k, a.trials),
        });
    }
    rows.sort_by(|x, y| x.beta.partial_cmp(&y.beta).unwrap());
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&rows)?),
        Format::Csv => {
            println!("method,beta,bits_per_key,source");
            for r in &rows {
                println!("{},{},{},{}", r.method, r.beta, r.bits_per_key, r.source);
            }
        }
        Format::Text => {
            println!(
                "{:<36} {:>6} {:>10}  {}",
                "method", "beta", "bits/key", "source"
            );
            for r in &rows {
                println!(
                    "{:<36} {:>6.2} {:>10.2}  {}",
                    r.method, r.beta, r.bits_per_key, r.source
                );
            }
        }
    }
    Ok(())
}
