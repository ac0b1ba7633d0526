use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use veronese_core::koszul::{EngineConfig, Field, KoszulEngine, WeightScope};
use veronese_core::schur::render_entries;
use veronese_core::tables::{
    certify, make_betti_tally, normalize_twist, render_multigraded, render_table, render_tally,
};
use veronese_core::{Error as CoreError, KoszulPosition, VeroneseParams};

use crate::checks::{self, Outcome};
use crate::runner::{default_threads, RayonRunner};
use crate::store::{self, Dataset, StoreError};

/// Process exit statuses.
pub mod exit {
    pub const SUCCESS: u8 = 0;
    pub const FAILURE: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const INFEASIBLE: u8 = 3;
    pub const INVARIANT: u8 = 4;
}

#[derive(Debug, Parser)]
#[command(
    name = "veronese",
    version,
    about = "Betti tables, Schur and multigraded syzygies of Veronese modules"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute tables for S(b;d) on P^n.
    #[command(allow_negative_numbers = true)]
    Compute(ComputeArgs),
    /// Print a data file as a table, or one position of it.
    Show {
        path: PathBuf,
        /// `p,q`, `(p,q)` or `p q`.
        #[arg(num_args = 1..=2)]
        position: Vec<String>,
    },
    /// Run the invariant suite on a data file.
    Check { path: PathBuf },
    /// Combine two partial data files for the same (n, d, b).
    Merge {
        first: PathBuf,
        second: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Recompute certification flags of a data file.
    Certify {
        path: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum What {
    Total,
    Schur,
    Multi,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Data,
}

#[derive(Debug, clap::Args)]
struct ComputeArgs {
    /// Shorthand `d n [b]` (note the order).
    #[arg(value_name = "D N B", num_args = 0..=3)]
    shorthand: Vec<i64>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    b: Option<i64>,
    #[arg(long, value_enum, default_value_t = What::Total)]
    what: What,
    /// 0 for exact arithmetic over Q, otherwise a prime below 2^31.
    #[arg(long = "char", default_value_t = 32003)]
    characteristic: u64,
    /// Worker threads; defaults to $VERONESE_THREADS or the number of CPUs.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
    /// Largest average weight block accepted without --force.
    #[arg(long, default_value_t = EngineConfig::DEFAULT_BLOCK_CAP, value_parser = clap::value_parser!(u64).range(1..))]
    block_cap: u64,
    /// Skip the feasibility guard.
    #[arg(long)]
    force: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Compute only K_{p,q}; every other entry of the output is unknown.
    #[arg(long, value_name = "P,Q")]
    position: Option<String>,
    /// Suppress per-position progress on stderr.
    #[arg(short, long)]
    quiet: bool,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    fn usage(message: impl Into<String>) -> Self {
        Self::new(exit::USAGE, message)
    }
}

impl From<StoreError> for Failure {
    fn from(e: StoreError) -> Self {
        let code = match e {
            StoreError::Io(_) => exit::FAILURE,
            _ => exit::INVARIANT,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        let code = match e {
            CoreError::Unsupported { .. } | CoreError::BlockTooLarge { .. } => exit::INFEASIBLE,
            CoreError::InvalidParameters(_) | CoreError::BadCharacteristic(_) => exit::USAGE,
            _ => exit::INVARIANT,
        };
        Failure::new(code, e.to_string())
    }
}

type CliResult<T> = Result<T, Failure>;

/// Runs the command line `args` (including the program name) and returns
/// the exit status. Results go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            if code == 0 {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
            }
            return code.clamp(0, 255) as u8;
        }
    };
    let result = match cli.command {
        Command::Compute(args) => compute(&args, out, err),
        Command::Show { path, position } => show(&path, &position, out),
        Command::Check { path } => check(&path, out),
        Command::Merge {
            first,
            second,
            output,
        } => merge(&first, &second, output.as_deref(), out),
        Command::Certify { path, output } => recertify(&path, output.as_deref(), out, err),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text)
            .map_err(|e| Failure::new(exit::FAILURE, format!("{}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::new(exit::FAILURE, e.to_string())),
    }
}

fn load(path: &Path) -> CliResult<Dataset> {
    let file = fs::File::open(path)
        .map_err(|e| Failure::new(exit::FAILURE, format!("{}: {e}", path.display())))?;
    store::import(std::io::BufReader::new(file)).map_err(|e| {
        let f = Failure::from(e);
        Failure::new(f.code, format!("{}: {}", path.display(), f.message))
    })
}

fn resolve_params(args: &ComputeArgs) -> CliResult<(u32, u32, i64)> {
    let (mut d, mut n, mut b) = (args.d, args.n, args.b);
    match args.shorthand.as_slice() {
        [] => {}
        [sd, sn, rest @ ..] => {
            if d.is_some() || n.is_some() || (b.is_some() && !rest.is_empty()) {
                return Err(Failure::usage(
                    "give parameters either positionally (d n b) or with --d/--n/--b",
                ));
            }
            let small = |v: i64, what: &str| {
                u32::try_from(v).map_err(|_| {
                    Failure::usage(format!("{what} must be a nonnegative integer, got {v}"))
                })
            };
            d = Some(small(*sd, "d")?);
            n = Some(small(*sn, "n")?);
            if let Some(sb) = rest.first() {
                b = Some(*sb);
            }
        }
        [_] => return Err(Failure::usage("positional form is `d n [b]`")),
    }
    let d = d.ok_or_else(|| Failure::usage("missing --d"))?;
    let n = n.ok_or_else(|| Failure::usage("missing --n"))?;
    Ok((n, d, b.unwrap_or(0)))
}

fn compute(args: &ComputeArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<u8> {
    let (n, d, b) = resolve_params(args)?;
    if d == 0 {
        return Err(Failure::usage("d must be at least 1"));
    }
    let field = Field::from_characteristic(args.characteristic)?;
    let (b_norm, shift) = normalize_twist(n, d, b);
    let to_i32 =
        |v: i64| i32::try_from(v).map_err(|_| Failure::usage(format!("b = {b} is out of range")));
    let (b_norm, shift) = (to_i32(b_norm)?, to_i32(shift)?);
    to_i32(b)?;
    let params = VeroneseParams::new(n, d, b_norm)?;
    if shift != 0 {
        let _ = writeln!(
            err,
            "twist: S({b};{d}) is S({b_norm};{d}) with rows moved up by {shift}"
        );
    }
    let config = EngineConfig {
        field,
        block_cap: args.block_cap,
        force: args.force,
        scope: WeightScope::Dominant,
    };
    let engine = KoszulEngine::new(params, config);
    let threads = args.threads.map_or_else(default_threads, |t| t as usize);
    let runner =
        RayonRunner::new(threads).map_err(|e| Failure::new(exit::FAILURE, e.to_string()))?;
    let with_schur = matches!(args.what, What::Schur | What::All);
    let with_multi = matches!(args.what, What::Multi | What::All);

    if let Some(text) = &args.position {
        let requested = parse_position(std::slice::from_ref(text))?;
        let pos = KoszulPosition::new(requested.p, requested.q + shift);
        engine.check_position(pos)?;
        if !args.quiet {
            let _ = writeln!(
                err,
                "computing K{pos} of {params} over {} with {} thread(s)",
                field_name(field),
                runner.threads()
            );
        }
        let weights = engine.multigraded_betti_with(&runner, pos)?;
        let mut dataset =
            Dataset::single_position(params, field, pos, &weights, with_schur, with_multi)?
                .retwisted(shift)?;
        dataset.header_mut().timestamp = std::env::var("SOURCE_DATE_EPOCH").ok();
        let text = match args.format {
            Format::Data => store::to_text(&dataset),
            Format::Text => render_position(&dataset, requested),
        };
        emit(&text, args.output.as_deref(), out)?;
        return Ok(exit::SUCCESS);
    }

    if let Err(e) = engine.check_feasible() {
        let est = engine.estimate();
        let _ = writeln!(
            err,
            "estimate: largest average block {} at {}, ~{:e} field operations",
            est.max_average_block, est.position, est.estimated_ops
        );
        return Err(e.into());
    }
    if !args.quiet {
        let _ = writeln!(
            err,
            "computing {params} over {} with {} thread(s)",
            field_name(field),
            runner.threads()
        );
    }
    let quiet = args.quiet;
    let output = engine.compute_table(&runner, &mut |p| {
        if !quiet {
            let _ = writeln!(err, "K{} = {} ({} blocks)", p.position, p.value, p.blocks);
        }
    })?;
    let mut dataset =
        Dataset::from_engine(&output, field, with_schur, with_multi)?.retwisted(shift)?;
    dataset.header_mut().timestamp = std::env::var("SOURCE_DATE_EPOCH").ok();
    let text = match args.format {
        Format::Data => store::to_text(&dataset),
        Format::Text => render_dataset(&dataset, args.what),
    };
    emit(&text, args.output.as_deref(), out)?;
    Ok(exit::SUCCESS)
}

fn field_name(field: Field) -> String {
    match field {
        Field::Rational => "Q".to_string(),
        Field::Prime(p) => format!("GF({p})"),
    }
}

fn render_dataset(ds: &Dataset, what: What) -> String {
    let mut text = String::new();
    let sections = what != What::Total;
    if sections {
        text.push_str("total:\n");
    }
    text.push_str(&render_table(ds.total()));
    if let Some(schur) = ds.schur() {
        text.push_str("schur:\n");
        for (pos, entries) in schur.iter() {
            let _ = writeln!(text, "{pos}: {}", render_entries(entries));
        }
        text.push_str("distinct representations:\n");
        text.push_str(&render_tally(&make_betti_tally(&schur.num_distinct_reps())));
        text.push_str("representations:\n");
        text.push_str(&render_tally(&make_betti_tally(&schur.num_reps())));
    }
    if let Some(multi) = ds.multi() {
        text.push_str("multi:\n");
        for (pos, poly) in multi {
            let _ = writeln!(text, "{pos}: {}", render_multigraded(poly));
        }
    }
    text
}

fn parse_position(tokens: &[String]) -> CliResult<KoszulPosition> {
    let joined = tokens.join(",");
    let inner = joined.trim().trim_start_matches('(').trim_end_matches(')');
    let bad = || Failure::usage(format!("cannot read {joined:?} as a position p,q"));
    let (p, q) = inner.split_once(',').ok_or_else(bad)?;
    let p = p.trim().parse::<u32>().map_err(|_| bad())?;
    let q = q.trim().parse::<i32>().map_err(|_| bad())?;
    Ok(KoszulPosition::new(p, q))
}

/// Value at `pos`, then the Schur and multigraded entries when present.
fn render_position(ds: &Dataset, pos: KoszulPosition) -> String {
    let mut text = format!("{}\n", ds.total().value(pos));
    if let Some(schur) = ds.schur() {
        let entries = schur.get(pos);
        let rendered = if entries.is_empty() {
            "0".to_string()
        } else {
            render_entries(entries)
        };
        let _ = writeln!(text, "schur: {rendered}");
    }
    if let Some(multi) = ds.multi() {
        let rendered = multi
            .get(&pos)
            .map_or_else(|| "0".to_string(), render_multigraded);
        let _ = writeln!(text, "multi: {rendered}");
    }
    text
}

fn show(path: &Path, position: &[String], out: &mut dyn Write) -> CliResult<u8> {
    let ds = load(path)?;
    let text = if position.is_empty() {
        render_table(ds.total())
    } else {
        render_position(&ds, parse_position(position)?)
    };
    emit(&text, None, out)?;
    Ok(exit::SUCCESS)
}

fn check(path: &Path, out: &mut dyn Write) -> CliResult<u8> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(exit::FAILURE, format!("{}: {e}", path.display())))?;
    let ds = match store::parse(&text) {
        Ok(ds) => ds,
        Err(e) => {
            let _ = writeln!(out, "FAIL    parse: {e}");
            return Ok(match e {
                StoreError::Io(_) => exit::FAILURE,
                _ => exit::INVARIANT,
            });
        }
    };
    let _ = writeln!(out, "pass    parse: {}", ds.params());
    let mut failed = false;
    for line in checks::run_all(&ds) {
        failed |= line.outcome == Outcome::Fail;
        let _ = writeln!(out, "{line}");
    }
    Ok(if failed {
        exit::INVARIANT
    } else {
        exit::SUCCESS
    })
}

fn merge(first: &Path, second: &Path, output: Option<&Path>, out: &mut dyn Write) -> CliResult<u8> {
    let a = load(first)?;
    let b = load(second)?;
    let merged = store::merge(&a, &b)?;
    checks::require_consistent(&merged)?;
    emit(&store::to_text(&merged), output, out)?;
    Ok(exit::SUCCESS)
}

fn recertify(
    path: &Path,
    output: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult<u8> {
    let mut ds = load(path)?;
    let certified = certify(ds.total());
    let count = certified.entries().filter(|(_, e)| e.certified).count();
    let _ = writeln!(
        err,
        "{count} of {} stored entries certified",
        certified.len()
    );
    ds.set_total(certified)?;
    emit(&store::to_text(&ds), output, out)?;
    Ok(exit::SUCCESS)
}
