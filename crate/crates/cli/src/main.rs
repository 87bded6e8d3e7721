//! `modcsf`: exact chromatic symmetric functions from the command line.
//!
//! Exit status is 0 when every check passes, 1 when a counterexample or
//! failed check is reported, and 2 for usage, parse and size errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use modcsf::csf::{csf_listing, csf_poset, CsfCache};
use modcsf::modular::{functionals, reduce_listing, three_free_e_expansion};
use modcsf::poset::{enumerate_posets, PosetJson};
use modcsf::verify::{
    check_epositivity_with, count_table, sweep_listing_reduction_with, sweep_three_free,
    verify_modular_samples, VerificationReport,
};
use modcsf::{Basis, BicolouredGraph, LinListing, PartListing, Poset, PosetClass, Reductions};
use serde_json::json;

/// Caps the number of entries in the chromatic symmetric function memo.
const CACHE_ENV: &str = "MODCSF_CSF_CACHE";

#[derive(Parser)]
#[command(
    name = "modcsf",
    version,
    about = "Exact chromatic symmetric functions of posets"
)]
struct Cli {
    /// Worker threads for batch checks (default: all available cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Chromatic symmetric function of a poset or part listing.
    Csf(CsfArgs),
    /// Staged e-expansion of the 3-free poset of a bicoloured graph.
    Expand3free {
        /// Graph literal such as `4x2:1-1,2-1,1-2,3-2,4-2`.
        #[arg(long)]
        graph: String,
        #[arg(long)]
        json: bool,
    },
    /// Rewrites a listing into a convex combination of vertex-only listings.
    Reduce {
        #[command(flatten)]
        input: ListingInput,
        #[arg(long)]
        json: bool,
    },
    /// Randomised checks.
    Verify {
        #[command(subcommand)]
        what: VerifyCommand,
    },
    /// Lists the posets of a class on `n` vertices up to isomorphism.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "all")]
        class: PosetClass,
        /// Print only the number of posets.
        #[arg(long)]
        count_only: bool,
    },
    /// Checks e-positivity over a whole class.
    CheckEpos {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "3p1free")]
        class: PosetClass,
        /// Comma-separated subset of `split,dual,udu_dud`.
        #[arg(long, default_value = "none")]
        reductions: Reductions,
        /// Include wall time in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Sweeps of the listing reduction and the 3-free expansion.
    Sweep {
        #[command(subcommand)]
        what: SweepCommand,
    },
    /// Numbers of posets, (3+1)-free posets and unit interval orders.
    Counts {
        #[arg(long)]
        max_n: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// The modular law on seeded random contexts.
    Modular {
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 8)]
        max_size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        timing: bool,
    },
}

#[derive(Subcommand)]
enum SweepCommand {
    /// Reduces a listing of every (3+1)-free poset on `n` vertices.
    Listings {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        timing: bool,
    },
    /// Expands every bicoloured graph with at most `max-rs` vertices.
    Graphs {
        #[arg(long)]
        max_rs: usize,
        #[arg(long)]
        timing: bool,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ListingInput {
    /// File holding a listing, as text or JSON.
    #[arg(long)]
    listing: Option<PathBuf>,
    /// Listing text such as `v2 v1 b1{2x2:1-1,2-2}`.
    #[arg(long)]
    listing_str: Option<String>,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("source").required(true)))]
struct CsfArgs {
    /// File holding a poset as `{"n": .., "lt": [[a, b], ..]}`.
    #[arg(long, group = "source")]
    poset: Option<PathBuf>,
    #[arg(long, group = "source")]
    listing: Option<PathBuf>,
    #[arg(long, group = "source")]
    listing_str: Option<String>,
    #[arg(long, default_value = "m")]
    basis: Basis,
    #[arg(long)]
    json: bool,
}

/// A failure that maps to exit status 2.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type Outcome = Result<bool, UsageError>;

fn read(path: &PathBuf) -> Result<String, UsageError> {
    fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn parse_listing(text: &str) -> Result<PartListing, UsageError> {
    if text.trim_start().starts_with('{') {
        Ok(PartListing::from_json(serde_json::from_str(text)?)?)
    } else {
        Ok(text.trim().parse()?)
    }
}

fn listing_input(file: &Option<PathBuf>, text: &Option<String>) -> Result<PartListing, UsageError> {
    match (file, text) {
        (Some(path), _) => parse_listing(&read(path)?),
        (None, Some(text)) => parse_listing(text),
        (None, None) => Err(UsageError("a listing is required".into())),
    }
}

fn print_json(value: &serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("JSON values print")
    );
}

fn print_report(report: &VerificationReport, timing: bool) -> bool {
    print_json(&report.to_json(timing));
    eprintln!("{} checked in {:.2}s", report.checked, report.seconds);
    report.passed()
}

fn cache() -> Result<CsfCache, UsageError> {
    let cap = match std::env::var(CACHE_ENV) {
        Ok(v) if !v.trim().is_empty() => Some(
            v.trim()
                .parse::<usize>()
                .map_err(|e| UsageError(format!("{CACHE_ENV}: {e}")))?,
        ),
        _ => None,
    };
    Ok(CsfCache::with_capacity_limit(cap))
}

fn cmd_csf(args: &CsfArgs) -> Outcome {
    let f = match (&args.poset, &args.listing, &args.listing_str) {
        (Some(path), _, _) => {
            let json: PosetJson = serde_json::from_str(&read(path)?)?;
            csf_poset(&Poset::from_json(&json)?)?
        }
        (None, file, text) => csf_listing(&listing_input(file, text)?)?,
    };
    let f = f.to_basis(args.basis);
    if args.json {
        print_json(&f.to_json());
    } else {
        println!("{f}");
    }
    Ok(true)
}

fn cmd_expand(graph: &str, as_json: bool) -> Outcome {
    let g: BicolouredGraph = graph.parse()?;
    let f = functionals(&g)?;
    let e = three_free_e_expansion(&g)?;
    if as_json {
        let values: Vec<String> = f.values().iter().map(|v| v.to_string()).collect();
        print_json(&json!({
            "graph": g.to_string(),
            "functionals": values,
            "expansion": e.to_json(),
        }));
    } else {
        println!("{e}");
    }
    Ok(e.is_e_positive())
}

fn cmd_reduce(input: &ListingInput, as_json: bool) -> Outcome {
    let listing = listing_input(&input.listing, &input.listing_str)?;
    let reduced = reduce_listing(&LinListing::single(listing))?;
    if as_json {
        let terms: Vec<_> = reduced
            .terms()
            .iter()
            .map(|(c, l)| json!({"coeff": c.to_string(), "listing": l.to_string()}))
            .collect();
        print_json(&json!({ "terms": terms }));
    } else {
        println!("{reduced}");
    }
    Ok(true)
}

fn cmd_enumerate(n: usize, class: PosetClass, count_only: bool) -> Outcome {
    let posets = enumerate_posets(n, class)?;
    if count_only {
        println!("{}", posets.len());
    } else {
        for p in &posets {
            println!("{p}");
        }
    }
    Ok(true)
}

fn cmd_counts(max_n: usize, as_json: bool) -> Outcome {
    let rows = count_table(max_n)?;
    if as_json {
        print_json(&serde_json::to_value(&rows)?);
    } else {
        for row in rows {
            let counts: Vec<String> = row.counts.iter().map(|c| c.to_string()).collect();
            println!("{:<8} {}", row.class, counts.join(" "));
        }
    }
    Ok(true)
}

fn run(cli: Cli) -> Outcome {
    match &cli.command {
        Command::Csf(args) => cmd_csf(args),
        Command::Expand3free { graph, json } => cmd_expand(graph, *json),
        Command::Reduce { input, json } => cmd_reduce(input, *json),
        Command::Verify {
            what:
                VerifyCommand::Modular {
                    samples,
                    max_size,
                    seed,
                    timing,
                },
        } => Ok(print_report(
            &verify_modular_samples(*samples, *max_size, *seed)?,
            *timing,
        )),
        Command::Enumerate {
            n,
            class,
            count_only,
        } => cmd_enumerate(*n, *class, *count_only),
        Command::CheckEpos {
            n,
            class,
            reductions,
            timing,
        } => Ok(print_report(
            &check_epositivity_with(*n, *class, *reductions, &cache()?)?,
            *timing,
        )),
        Command::Sweep { what } => match what {
            SweepCommand::Listings { n, timing } => Ok(print_report(
                &sweep_listing_reduction_with(*n, &cache()?)?,
                *timing,
            )),
            SweepCommand::Graphs { max_rs, timing } => {
                Ok(print_report(&sweep_three_free(*max_rs)?, *timing))
            }
        },
        Command::Counts { max_n, json } => cmd_counts(*max_n, *json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
        {
            eprintln!("modcsf: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(message)) => {
            eprintln!("modcsf: {message}");
            ExitCode::from(2)
        }
    }
}
