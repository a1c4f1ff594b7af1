//! Batch front end: subcommands, configuration, report emission.
//!
//! Exit-code contract: 0 when the run succeeds and every checked property
//! holds, 1 when a property fails or a module reports an error (the
//! report carries machine-readable failure records either way), 2 on
//! usage errors. All numeric output is exact decimal strings.

mod report;

pub use report::{FailureRecord, Report, ResultRecord, REPORT_VERSION};

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::audit::{audit, audit_all, reports_to_csv, AuditReport, AuditStatus, GridConfig};
use crate::families::{
    construct, coordinate_spec, paired_formula, size_check, AnchorDims, ConstructionKind,
    ConstructionSpec, Family,
};
use crate::gfq::{FieldDesc, Subspace};
use crate::lattice::{
    cache_header, cache_load, cache_path, cache_save, enumerate_slice, DEFAULT_BUDGET,
};
use crate::qcount::{formula_eval, formula_terms, gauss_binom, required_params, FormulaId, FormulaParams};
use crate::search::{
    pair_leaderboard_csv, search_cross_pairs, search_rwise, stability_probe,
    verify_rwise_nonexistence, SearchConfig, SeedStrategy,
};
use crate::verify::{
    closure_fixed_point, covering_number, is_cross_intersecting, is_rwise_intersecting,
    is_trivial, SampleCfg,
};

#[derive(Debug)]
enum CliError {
    Usage(String),
    Run(String),
}

impl CliError {
    fn run(e: impl std::fmt::Display) -> CliError {
        CliError::Run(e.to_string())
    }
}

type Params = BTreeMap<String, String>;

// ---- argument surface -------------------------------------------------

#[derive(Parser, Debug)]
#[command(name = "qlat", version, about = "Exact subspace-lattice counting and verification")]
struct Cli {
    /// Flat key=value config file; flags override file values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_parser = ["json", "csv", "text"])]
    format: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads for the parallel sweeps (0 = library default).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Enumeration budget (max elements per lattice slice).
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Cache directory (or env QLAT_CACHE_DIR).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Seed for any randomized search or sampling step.
    #[arg(long, global = true)]
    rng_seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct AnchorArgs {
    /// Dimension of the anchor x (contained in every member).
    #[arg(long)]
    x_dim: Option<usize>,
    /// Dimension of the anchor m.
    #[arg(long)]
    m_dim: Option<usize>,
    /// Dimension of the anchor c.
    #[arg(long)]
    c_dim: Option<usize>,
    /// Dimension of the anchor t.
    #[arg(long)]
    t_dim: Option<usize>,
    /// Intersection threshold s (for D).
    #[arg(long)]
    s: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Gaussian binomial coefficient [a ch b] over F_q.
    Qbinom {
        a: i64,
        b: i64,
        #[arg(long)]
        q: u64,
    },
    /// Evaluate a registered counting formula.
    Formula {
        /// One of f1..f4, g1..g5, h1, h2, fprime.
        name: String,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: Option<i64>,
        #[arg(long)]
        t: Option<i64>,
        #[arg(long)]
        k: Option<i64>,
        #[arg(long)]
        l: Option<i64>,
        #[arg(long)]
        m: Option<i64>,
        #[arg(long)]
        d: Option<i64>,
        /// Also print the per-term breakdown.
        #[arg(long)]
        terms: bool,
    },
    /// Enumerate a full lattice slice.
    Enumerate {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Also save the slice to the cache directory.
        #[arg(long)]
        save: bool,
    },
    /// Materialize a named construction and check its size formula.
    Construct {
        /// One of A, B, C, D, E1, E2, E3, H2, M_full.
        name: String,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        /// Member dimension (k or l).
        #[arg(long)]
        dim: usize,
        /// Save the family (cache format + .spec sidecar) here.
        #[arg(long)]
        save: Option<PathBuf>,
        #[command(flatten)]
        anchors: AnchorArgs,
    },
    /// Verify intersection properties.
    Verify {
        /// Re-run the computation recorded in a report and compare claims.
        #[arg(long)]
        from_report: Option<PathBuf>,
        #[command(subcommand)]
        what: Option<VerifyCommand>,
    },
    /// Exact t-covering number of a named construction.
    Tau {
        name: String,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        t: usize,
        #[command(flatten)]
        anchors: AnchorArgs,
    },
    /// Alternate the partner closure on a named seed pair to a fixed point.
    Closure {
        /// Seed pair: cc, ab, or cd.
        #[arg(long)]
        pair: String,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        k1: usize,
        #[arg(long)]
        k2: usize,
    },
    /// Sweep the registered inequality claims.
    Audit {
        /// Run every registered lemma (the default when --lemma is absent).
        #[arg(long)]
        all: bool,
        /// Lemma id, or every registered lemma when omitted.
        #[arg(long, conflicts_with = "all")]
        lemma: Option<String>,
        /// Comma-separated field orders.
        #[arg(long)]
        qs: Option<String>,
        #[arg(long)]
        t_max: Option<i64>,
        #[arg(long)]
        k2_extra: Option<i64>,
        #[arg(long)]
        k1_extra: Option<i64>,
        #[arg(long)]
        n_extra: Option<i64>,
        #[arg(long)]
        m_max: Option<i64>,
    },
    /// Seeded extremal search.
    Search {
        #[command(subcommand)]
        what: SearchCommand,
    },
    /// Slice cache management.
    Cache {
        #[command(subcommand)]
        what: CacheCommand,
    },
}

#[derive(Subcommand, Debug)]
enum VerifyCommand {
    /// Cross-intersection of a named pair.
    Cross {
        /// cc, ab, or cd.
        #[arg(long)]
        pair: String,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        k1: usize,
        #[arg(long)]
        k2: usize,
        /// Sample this many tuples instead of failing on budget overrun.
        #[arg(long)]
        sample: Option<u64>,
    },
    /// r-wise intersection of a named family.
    Rwise {
        /// a-union (A ∪ [M ch k]) or d.
        #[arg(long)]
        family: String,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        sample: Option<u64>,
    },
    /// Triviality (common t-space) of a named pair or family.
    Trivial {
        /// cc, ab, cd, a-union, or d.
        #[arg(long)]
        target: String,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        k1: Option<usize>,
        #[arg(long)]
        k2: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
    },
    /// Re-run the computation recorded in a report and compare claims.
    FromReport { path: PathBuf },
}

#[derive(Subcommand, Debug)]
enum SearchCommand {
    /// Closure search for maximal cross-t pairs.
    Cross {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        k1: usize,
        #[arg(long)]
        k2: usize,
        #[arg(long, default_value = "combined", value_parser = ["all-covers", "random-members", "construction-perturbation", "combined"])]
        strategy: String,
        #[arg(long)]
        max_seeds: Option<u64>,
        #[arg(long)]
        random_seeds: Option<u64>,
        /// Focus reporting on non-trivial pairs.
        #[arg(long)]
        nontrivial: bool,
    },
    /// Greedy search for maximal r-wise families.
    Rwise {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value = "combined", value_parser = ["all-covers", "random-members", "construction-perturbation", "combined"])]
        strategy: String,
        #[arg(long)]
        max_seeds: Option<u64>,
        #[arg(long)]
        random_seeds: Option<u64>,
    },
    /// Exhaustive nonexistence confirmation for r > k - t + 1.
    Nonexistence {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        r: usize,
    },
    /// Stability probe over the r-wise search output.
    Stability {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        t: usize,
    },
}

#[derive(Subcommand, Debug)]
enum CacheCommand {
    /// Enumerate a slice and save it.
    Save {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Explicit file path (defaults to the cache directory layout).
        #[arg(long)]
        path: Option<PathBuf>,
    },
    /// Load a slice and report its contents.
    Load {
        #[arg(long)]
        path: PathBuf,
    },
    /// Validate a cache file and print its header.
    Info {
        #[arg(long)]
        path: PathBuf,
    },
}

// ---- configuration -----------------------------------------------------

#[derive(Clone, Debug)]
struct RunSettings {
    format: String,
    output: Option<PathBuf>,
    budget: u64,
    cache_dir: PathBuf,
    rng_seed: u64,
    workers: usize,
}

fn parse_config_file(path: &PathBuf) -> Result<BTreeMap<String, String>, CliError> {
    const KNOWN: [&str; 5] = ["budget", "cache_dir", "workers", "format", "rng_seed"];
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut out = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Usage(format!(
                "config {}:{}: expected key=value",
                path.display(),
                lineno + 1
            )));
        };
        let key = key.trim();
        if !KNOWN.contains(&key) {
            return Err(CliError::Usage(format!(
                "config {}:{}: unknown key {key}",
                path.display(),
                lineno + 1
            )));
        }
        out.insert(key.to_string(), value.trim().to_string());
    }
    Ok(out)
}

fn settings_from(cli: &Cli) -> Result<RunSettings, CliError> {
    let file = match &cli.config {
        Some(path) => parse_config_file(path)?,
        None => BTreeMap::new(),
    };
    let parse_u64 = |s: &String, what: &str| {
        s.parse::<u64>().map_err(|_| CliError::Usage(format!("{what} must be an integer, got {s}")))
    };
    let budget = match (&cli.budget, file.get("budget")) {
        (Some(v), _) => *v,
        (None, Some(s)) => parse_u64(s, "budget")?,
        (None, None) => DEFAULT_BUDGET,
    };
    let rng_seed = match (&cli.rng_seed, file.get("rng_seed")) {
        (Some(v), _) => *v,
        (None, Some(s)) => parse_u64(s, "rng_seed")?,
        (None, None) => 1,
    };
    let workers = match (&cli.workers, file.get("workers")) {
        (Some(v), _) => *v,
        (None, Some(s)) => parse_u64(s, "workers")? as usize,
        (None, None) => 0,
    };
    let format = cli
        .format
        .clone()
        .or_else(|| file.get("format").cloned())
        .unwrap_or_else(|| "json".to_string());
    if !["json", "csv", "text"].contains(&format.as_str()) {
        return Err(CliError::Usage(format!("unknown format {format}")));
    }
    let cache_dir = cli
        .cache_dir
        .clone()
        .or_else(|| file.get("cache_dir").map(PathBuf::from))
        .or_else(|| std::env::var_os("QLAT_CACHE_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("qlat-cache"));
    Ok(RunSettings { format, output: cli.output.clone(), budget, cache_dir, rng_seed, workers })
}

// ---- normalization: clap arms -> (command, params) ----------------------

fn p_insert(p: &mut Params, key: &str, value: impl ToString) {
    p.insert(key.to_string(), value.to_string());
}

fn normalize(cli: &Cli, settings: &RunSettings) -> (String, Params) {
    let mut p = Params::new();
    p_insert(&mut p, "budget", settings.budget);
    let name;
    match &cli.command {
        Command::Qbinom { a, b, q } => {
            name = "qbinom";
            p_insert(&mut p, "a", a);
            p_insert(&mut p, "b", b);
            p_insert(&mut p, "q", q);
        }
        Command::Formula { name: fname, q, n, t, k, l, m, d, terms } => {
            name = "formula";
            p_insert(&mut p, "name", fname);
            p_insert(&mut p, "q", q);
            for (key, val) in [("n", n), ("t", t), ("k", k), ("l", l), ("m", m), ("d", d)] {
                if let Some(v) = val {
                    p_insert(&mut p, key, v);
                }
            }
            p_insert(&mut p, "terms", terms);
        }
        Command::Enumerate { q, n, k, save } => {
            name = "enumerate";
            p_insert(&mut p, "q", q);
            p_insert(&mut p, "n", n);
            p_insert(&mut p, "k", k);
            p_insert(&mut p, "save", save);
            if *save {
                p_insert(&mut p, "path", cache_path(&settings.cache_dir, *q, *n, *k).display());
            }
        }
        Command::Construct { name: cname, q, n, dim, save, anchors } => {
            name = "construct";
            p_insert(&mut p, "name", cname);
            p_insert(&mut p, "q", q);
            p_insert(&mut p, "n", n);
            p_insert(&mut p, "dim", dim);
            if let Some(path) = save {
                p_insert(&mut p, "save", path.display());
            }
            insert_anchors(&mut p, anchors);
        }
        Command::Verify { from_report: Some(path), what: _ } => {
            name = "verify-from-report";
            p_insert(&mut p, "path", path.display());
        }
        Command::Verify { from_report: None, what: None } => {
            name = "verify";
        }
        Command::Verify { from_report: None, what: Some(what) } => match what {
            VerifyCommand::Cross { pair, q, n, t, k1, k2, sample } => {
                name = "verify-cross";
                p_insert(&mut p, "pair", pair);
                p_insert(&mut p, "q", q);
                p_insert(&mut p, "n", n);
                p_insert(&mut p, "t", t);
                p_insert(&mut p, "k1", k1);
                p_insert(&mut p, "k2", k2);
                if let Some(s) = sample {
                    p_insert(&mut p, "sample", s);
                    p_insert(&mut p, "rng_seed", settings.rng_seed);
                }
            }
            VerifyCommand::Rwise { family, q, n, k, r, t, sample } => {
                name = "verify-rwise";
                p_insert(&mut p, "family", family);
                p_insert(&mut p, "q", q);
                p_insert(&mut p, "n", n);
                p_insert(&mut p, "k", k);
                p_insert(&mut p, "r", r);
                p_insert(&mut p, "t", t);
                if let Some(s) = sample {
                    p_insert(&mut p, "sample", s);
                    p_insert(&mut p, "rng_seed", settings.rng_seed);
                }
            }
            VerifyCommand::Trivial { target, q, n, t, k1, k2, k, r } => {
                name = "verify-trivial";
                p_insert(&mut p, "target", target);
                p_insert(&mut p, "q", q);
                p_insert(&mut p, "n", n);
                p_insert(&mut p, "t", t);
                for (key, val) in [("k1", k1), ("k2", k2), ("k", k), ("r", r)] {
                    if let Some(v) = val {
                        p_insert(&mut p, key, v);
                    }
                }
            }
            VerifyCommand::FromReport { path } => {
                name = "verify-from-report";
                p_insert(&mut p, "path", path.display());
            }
        },
        Command::Tau { name: cname, q, n, dim, t, anchors } => {
            name = "tau";
            p_insert(&mut p, "name", cname);
            p_insert(&mut p, "q", q);
            p_insert(&mut p, "n", n);
            p_insert(&mut p, "dim", dim);
            p_insert(&mut p, "t", t);
            insert_anchors(&mut p, anchors);
        }
        Command::Closure { pair, q, n, t, k1, k2 } => {
            name = "closure";
            p_insert(&mut p, "pair", pair);
            p_insert(&mut p, "q", q);
            p_insert(&mut p, "n", n);
            p_insert(&mut p, "t", t);
            p_insert(&mut p, "k1", k1);
            p_insert(&mut p, "k2", k2);
        }
        Command::Audit { all: _, lemma, qs, t_max, k2_extra, k1_extra, n_extra, m_max } => {
            name = "audit";
            p_insert(&mut p, "lemma", lemma.clone().unwrap_or_else(|| "all".to_string()));
            if let Some(qs) = qs {
                p_insert(&mut p, "qs", qs);
            }
            for (key, val) in [
                ("t_max", t_max),
                ("k2_extra", k2_extra),
                ("k1_extra", k1_extra),
                ("n_extra", n_extra),
                ("m_max", m_max),
            ] {
                if let Some(v) = val {
                    p_insert(&mut p, key, v);
                }
            }
        }
        Command::Search { what } => match what {
            SearchCommand::Cross { q, n, t, k1, k2, strategy, max_seeds, random_seeds, nontrivial } => {
                name = "search-cross";
                p_insert(&mut p, "q", q);
                p_insert(&mut p, "n", n);
                p_insert(&mut p, "t", t);
                p_insert(&mut p, "k1", k1);
                p_insert(&mut p, "k2", k2);
                p_insert(&mut p, "strategy", strategy);
                p_insert(&mut p, "max_seeds", max_seeds.unwrap_or(4096));
                p_insert(&mut p, "random_seeds", random_seeds.unwrap_or(8));
                p_insert(&mut p, "rng_seed", settings.rng_seed);
                p_insert(&mut p, "nontrivial", nontrivial);
            }
            SearchCommand::Rwise { q, n, k, r, t, strategy, max_seeds, random_seeds } => {
                name = "search-rwise";
                p_insert(&mut p, "q", q);
                p_insert(&mut p, "n", n);
                p_insert(&mut p, "k", k);
                p_insert(&mut p, "r", r);
                p_insert(&mut p, "t", t);
                p_insert(&mut p, "strategy", strategy);
                p_insert(&mut p, "max_seeds", max_seeds.unwrap_or(4096));
                p_insert(&mut p, "random_seeds", random_seeds.unwrap_or(4));
                p_insert(&mut p, "rng_seed", settings.rng_seed);
            }
            SearchCommand::Nonexistence { q, n, k, t, r } => {
                name = "search-nonexistence";
                p_insert(&mut p, "q", q);
                p_insert(&mut p, "n", n);
                p_insert(&mut p, "k", k);
                p_insert(&mut p, "t", t);
                p_insert(&mut p, "r", r);
            }
            SearchCommand::Stability { q, n, k, r, t } => {
                name = "search-stability";
                p_insert(&mut p, "q", q);
                p_insert(&mut p, "n", n);
                p_insert(&mut p, "k", k);
                p_insert(&mut p, "r", r);
                p_insert(&mut p, "t", t);
                p_insert(&mut p, "rng_seed", settings.rng_seed);
            }
        },
        Command::Cache { what } => match what {
            CacheCommand::Save { q, n, k, path } => {
                name = "cache-save";
                p_insert(&mut p, "q", q);
                p_insert(&mut p, "n", n);
                p_insert(&mut p, "k", k);
                let path = path
                    .clone()
                    .unwrap_or_else(|| cache_path(&settings.cache_dir, *q, *n, *k));
                p_insert(&mut p, "path", path.display());
            }
            CacheCommand::Load { path } => {
                name = "cache-load";
                p_insert(&mut p, "path", path.display());
            }
            CacheCommand::Info { path } => {
                name = "cache-info";
                p_insert(&mut p, "path", path.display());
            }
        },
    }
    (name.to_string(), p)
}

fn insert_anchors(p: &mut Params, anchors: &AnchorArgs) {
    for (key, val) in [
        ("x_dim", anchors.x_dim),
        ("m_dim", anchors.m_dim),
        ("c_dim", anchors.c_dim),
        ("t_dim", anchors.t_dim),
        ("s", anchors.s),
    ] {
        if let Some(v) = val {
            p_insert(p, key, v);
        }
    }
}

// ---- param readers -------------------------------------------------------

fn need<'a>(p: &'a Params, key: &str) -> Result<&'a str, CliError> {
    p.get(key).map(String::as_str).ok_or_else(|| CliError::Usage(format!("missing parameter {key}")))
}

fn need_u64(p: &Params, key: &str) -> Result<u64, CliError> {
    need(p, key)?.parse().map_err(|_| CliError::Usage(format!("parameter {key} must be an integer")))
}

fn need_usize(p: &Params, key: &str) -> Result<usize, CliError> {
    need(p, key)?.parse().map_err(|_| CliError::Usage(format!("parameter {key} must be an integer")))
}

fn need_i64(p: &Params, key: &str) -> Result<i64, CliError> {
    need(p, key)?.parse().map_err(|_| CliError::Usage(format!("parameter {key} must be an integer")))
}

fn opt_usize(p: &Params, key: &str) -> Result<Option<usize>, CliError> {
    p.get(key)
        .map(|s| s.parse().map_err(|_| CliError::Usage(format!("parameter {key} must be an integer"))))
        .transpose()
}

fn opt_u64(p: &Params, key: &str) -> Result<Option<u64>, CliError> {
    p.get(key)
        .map(|s| s.parse().map_err(|_| CliError::Usage(format!("parameter {key} must be an integer"))))
        .transpose()
}

fn field_for(p: &Params) -> Result<&'static FieldDesc, CliError> {
    FieldDesc::get(need_u64(p, "q")?).map_err(CliError::run)
}

// ---- named pairs and families for verify / closure ----------------------

fn named_pair(
    pair: &str,
    q: u64,
    n: usize,
    t: usize,
    k1: usize,
    k2: usize,
    budget: u64,
) -> Result<(Family, Family), CliError> {
    let field = FieldDesc::get(q).map_err(CliError::run)?;
    let build = |spec: &ConstructionSpec| construct(spec, field, budget).map_err(CliError::run);
    match pair {
        "cc" => {
            let anchor = Subspace::coordinate(n, t, field);
            Ok((
                build(&ConstructionSpec::C { k: k1, t_anchor: anchor.clone() })?,
                build(&ConstructionSpec::C { k: k2, t_anchor: anchor })?,
            ))
        }
        "ab" => {
            let x = Subspace::coordinate(n, t, field);
            let m = Subspace::coordinate(n, k2 + 1, field);
            Ok((
                build(&ConstructionSpec::A { k: k1, x: x.clone(), m: m.clone() })?,
                build(&ConstructionSpec::B { l: k2, x, m })?,
            ))
        }
        "cd" => {
            let anchor = Subspace::coordinate(n, t + 1, field);
            Ok((
                build(&ConstructionSpec::C { k: k1, t_anchor: anchor.clone() })?,
                build(&ConstructionSpec::D { l: k2, s: t, t_anchor: anchor })?,
            ))
        }
        other => Err(CliError::Usage(format!("unknown pair {other}; expected cc, ab, or cd"))),
    }
}

fn named_rwise_family(
    family: &str,
    q: u64,
    n: usize,
    k: usize,
    r: usize,
    t: usize,
    budget: u64,
) -> Result<Family, CliError> {
    let field = FieldDesc::get(q).map_err(CliError::run)?;
    match family {
        "a-union" => {
            if t + r < 3 || t + r - 2 >= k || k + 1 > n {
                return Err(CliError::Usage("a-union needs t + r - 2 < k and k + 1 <= n".into()));
            }
            let x = Subspace::coordinate(n, t + r - 2, field);
            let m = Subspace::coordinate(n, k + 1, field);
            let a = construct(&ConstructionSpec::A { k, x, m: m.clone() }, field, budget)
                .map_err(CliError::run)?;
            let mfull =
                construct(&ConstructionSpec::MFull { k, m }, field, budget).map_err(CliError::run)?;
            let mut members = a.members().to_vec();
            members.extend(mfull.members().iter().cloned());
            Family::from_members(n, k, q, members).map_err(CliError::run)
        }
        "d" => {
            if t + r > n || t + r - 1 > k {
                return Err(CliError::Usage("d needs t + r <= n and t + r - 1 <= k".into()));
            }
            let z = Subspace::coordinate(n, t + r, field);
            construct(&ConstructionSpec::D { l: k, s: t + r - 1, t_anchor: z }, field, budget)
                .map_err(CliError::run)
        }
        other => Err(CliError::Usage(format!("unknown family {other}; expected a-union or d"))),
    }
}

fn spec_from_params(p: &Params) -> Result<(ConstructionSpec, &'static FieldDesc), CliError> {
    let kind = ConstructionKind::from_str(need(p, "name")?).map_err(CliError::Usage)?;
    let field = field_for(p)?;
    let n = need_usize(p, "n")?;
    let dim = need_usize(p, "dim")?;
    let dims = AnchorDims {
        x: opt_usize(p, "x_dim")?,
        m: opt_usize(p, "m_dim")?,
        c: opt_usize(p, "c_dim")?,
        t: opt_usize(p, "t_dim")?,
        s: opt_usize(p, "s")?,
    };
    let spec = coordinate_spec(kind, dim, n, &dims, field).map_err(CliError::run)?;
    Ok((spec, field))
}

// ---- execution ------------------------------------------------------------

fn execute(command: &str, p: &Params) -> Result<Report, CliError> {
    let mut report = Report::new(command, p.clone());
    let budget = opt_u64(p, "budget")?.unwrap_or(DEFAULT_BUDGET);
    match command {
        "qbinom" => {
            let (a, b, q) = (need_i64(p, "a")?, need_i64(p, "b")?, need_u64(p, "q")?);
            let v = gauss_binom(a, b, q).map_err(CliError::run)?;
            report.push_result(format!("qbinom({a},{b};q={q})"), v);
        }
        "formula" => {
            let id = FormulaId::from_str(need(p, "name")?)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let mut fp = FormulaParams { q: need_u64(p, "q")?, ..Default::default() };
            for key in required_params(id) {
                match *key {
                    "q" => {}
                    "n" => fp.n = need_i64(p, "n")?,
                    "t" => fp.t = need_i64(p, "t")?,
                    "k" => fp.k = need_i64(p, "k")?,
                    "l" => fp.l = need_i64(p, "l")?,
                    "m" => fp.m = need_i64(p, "m")?,
                    "d" => fp.d = need_i64(p, "d")?,
                    other => return Err(CliError::Usage(format!("unhandled param {other}"))),
                }
            }
            let v = formula_eval(id, &fp).map_err(CliError::run)?;
            report.push_result(id.to_string(), v);
            if p.get("terms").map(String::as_str) == Some("true") {
                for (i, term) in formula_terms(id, &fp).map_err(CliError::run)?.iter().enumerate() {
                    report.push_result(format!("term_{i}: {}", term.label), &term.value);
                }
            }
        }
        "enumerate" => {
            let field = field_for(p)?;
            let (n, k) = (need_usize(p, "n")?, need_usize(p, "k")?);
            let slice = enumerate_slice(n, k, field, budget).map_err(CliError::run)?;
            report.push_result("count", slice.len());
            if p.get("save").map(String::as_str) == Some("true") {
                let path = PathBuf::from(need(p, "path")?);
                if let Some(dir) = path.parent() {
                    std::fs::create_dir_all(dir).map_err(CliError::run)?;
                }
                cache_save(&slice, &path).map_err(CliError::run)?;
                report.push_result("saved", path.display());
            }
        }
        "construct" => {
            let (spec, field) = spec_from_params(p)?;
            match paired_formula(&spec, field) {
                Ok(_) => {
                    let check = size_check(&spec, field, budget).map_err(CliError::run)?;
                    report.push_result("enumerated", &check.enumerated);
                    report.push_result(format!("formula {}", check.formula_label), &check.formula);
                    report.push_result("match", check.matches);
                    if !check.matches {
                        report.push_failure(
                            "size-mismatch",
                            format!(
                                "enumerated {} but {} = {}",
                                check.enumerated, check.formula_label, check.formula
                            ),
                        );
                    }
                }
                Err(_) => {
                    let fam = construct(&spec, field, budget).map_err(CliError::run)?;
                    report.push_result("enumerated", fam.len());
                    report.push_result("formula", "none");
                }
            }
            if let Some(path) = p.get("save") {
                let fam = construct(&spec, field, budget).map_err(CliError::run)?;
                let descriptor: Vec<String> =
                    p.iter().filter(|(k, _)| *k != "save").map(|(k, v)| format!("{k}={v}")).collect();
                let path = PathBuf::from(path);
                if let Some(dir) = path.parent() {
                    std::fs::create_dir_all(dir).map_err(CliError::run)?;
                }
                crate::families::family_save(&fam, &descriptor.join(" "), &path)
                    .map_err(CliError::run)?;
                report.push_result("saved", path.display());
            }
        }
        "verify-cross" => {
            let (q, n, t) = (need_u64(p, "q")?, need_usize(p, "n")?, need_usize(p, "t")?);
            let (k1, k2) = (need_usize(p, "k1")?, need_usize(p, "k2")?);
            let (f1, f2) = named_pair(need(p, "pair")?, q, n, t, k1, k2, budget)?;
            let field = FieldDesc::get(q).map_err(CliError::run)?;
            let seed = opt_u64(p, "rng_seed")?.unwrap_or(1);
            let sample = opt_u64(p, "sample")?.map(|tuples| SampleCfg { tuples, seed });
            let out = is_cross_intersecting(&[&f1, &f2], t, field, budget, sample)
                .map_err(CliError::run)?;
            report.sampled = out.sampled;
            report.push_result("sizes", format!("{} {}", f1.len(), f2.len()));
            report.push_result("holds", out.holds);
            report.push_result("tuples_checked", out.tuples_checked);
            if let Some(w) = &out.witness {
                report.push_witness_failure(
                    "cross-intersection",
                    format!("tuple meets in dimension {} < {t}", w.achieved_dim),
                    w,
                );
            }
        }
        "verify-rwise" => {
            let (q, n, t) = (need_u64(p, "q")?, need_usize(p, "n")?, need_usize(p, "t")?);
            let (k, r) = (need_usize(p, "k")?, need_usize(p, "r")?);
            let fam = named_rwise_family(need(p, "family")?, q, n, k, r, t, budget)?;
            let field = FieldDesc::get(q).map_err(CliError::run)?;
            let seed = opt_u64(p, "rng_seed")?.unwrap_or(1);
            let sample = opt_u64(p, "sample")?.map(|tuples| SampleCfg { tuples, seed });
            let out =
                is_rwise_intersecting(&fam, r, t, field, budget, sample).map_err(CliError::run)?;
            report.sampled = out.sampled;
            report.push_result("size", fam.len());
            report.push_result("holds", out.holds);
            report.push_result("tuples_checked", out.tuples_checked);
            report.push_result(
                "nontrivial",
                !is_trivial(&[&fam], t, field).map_err(CliError::run)?,
            );
            if let Some(w) = &out.witness {
                report.push_witness_failure(
                    "rwise-intersection",
                    format!("tuple meets in dimension {} < {t}", w.achieved_dim),
                    w,
                );
            }
        }
        "verify-trivial" => {
            let (q, n, t) = (need_u64(p, "q")?, need_usize(p, "n")?, need_usize(p, "t")?);
            let field = FieldDesc::get(q).map_err(CliError::run)?;
            let target = need(p, "target")?;
            let trivial = match target {
                "cc" | "ab" | "cd" => {
                    let (k1, k2) = (need_usize(p, "k1")?, need_usize(p, "k2")?);
                    let (f1, f2) = named_pair(target, q, n, t, k1, k2, budget)?;
                    is_trivial(&[&f1, &f2], t, field).map_err(CliError::run)?
                }
                "a-union" | "d" => {
                    let (k, r) = (need_usize(p, "k")?, need_usize(p, "r")?);
                    let fam = named_rwise_family(target, q, n, k, r, t, budget)?;
                    is_trivial(&[&fam], t, field).map_err(CliError::run)?
                }
                other => return Err(CliError::Usage(format!("unknown target {other}"))),
            };
            report.push_result("trivial", trivial);
        }
        "verify" => {
            return Err(CliError::Usage(
                "verify needs a subcommand (cross, rwise, trivial, from-report) or --from-report".into(),
            ));
        }
        "verify-from-report" => {
            let path = PathBuf::from(need(p, "path")?);
            let text = std::fs::read_to_string(&path).map_err(CliError::run)?;
            let recorded: Report = serde_json::from_str(&text)
                .map_err(|e| CliError::Run(format!("cannot parse report: {e}")))?;
            if recorded.command == "verify-from-report" {
                return Err(CliError::Usage("cannot re-check a re-check report".into()));
            }
            let fresh = execute(&recorded.command, &recorded.params)?;
            report.push_result("checked_command", &recorded.command);
            report.push_result("recorded_results", recorded.results.len());
            let matches = fresh.results == recorded.results;
            report.push_result("claims_match", matches);
            if !matches {
                for (i, (a, b)) in recorded.results.iter().zip(fresh.results.iter()).enumerate() {
                    if a != b {
                        report.push_failure(
                            "claim-mismatch",
                            format!("result {i}: recorded {}={} vs fresh {}={}", a.name, a.value, b.name, b.value),
                        );
                    }
                }
                if recorded.results.len() != fresh.results.len() {
                    report.push_failure(
                        "claim-mismatch",
                        format!(
                            "result count changed: {} vs {}",
                            recorded.results.len(),
                            fresh.results.len()
                        ),
                    );
                }
            }
        }
        "tau" => {
            let (spec, field) = spec_from_params(p)?;
            let t = need_usize(p, "t")?;
            let fam = construct(&spec, field, budget).map_err(CliError::run)?;
            let res = covering_number(&fam, t, field, budget).map_err(CliError::run)?;
            report.push_result("tau", res.tau);
            report.push_result("covers", res.covers.len());
            for (i, c) in res.covers.iter().take(8).enumerate() {
                report.push_result(format!("cover_{i}"), c.digit_rows().join(" "));
            }
        }
        "closure" => {
            let (q, n, t) = (need_u64(p, "q")?, need_usize(p, "n")?, need_usize(p, "t")?);
            let (k1, k2) = (need_usize(p, "k1")?, need_usize(p, "k2")?);
            let (f1, f2) = named_pair(need(p, "pair")?, q, n, t, k1, k2, budget)?;
            let field = FieldDesc::get(q).map_err(CliError::run)?;
            let (c1, c2, rounds) =
                closure_fixed_point(&f1, &f2, t, field, budget).map_err(CliError::run)?;
            report.push_result("rounds", rounds);
            report.push_result("size1", c1.len());
            report.push_result("size2", c2.len());
            report.push_result(
                "product",
                num_bigint::BigUint::from(c1.len()) * num_bigint::BigUint::from(c2.len()),
            );
            report.push_result("trivial", is_trivial(&[&c1, &c2], t, field).map_err(CliError::run)?);
            report.push_result("grew", (c1 != f1 || c2 != f2).to_string());
        }
        "audit" => {
            let mut grid = GridConfig::default();
            if let Some(qs) = p.get("qs") {
                grid.qs = qs
                    .split(',')
                    .map(|s| s.trim().parse::<u64>())
                    .collect::<Result<Vec<u64>, _>>()
                    .map_err(|_| CliError::Usage("qs must be comma-separated integers".into()))?;
            }
            let grid_override = |key: &str, slot: &mut i64| -> Result<(), CliError> {
                if let Some(v) = p.get(key) {
                    *slot = v
                        .parse()
                        .map_err(|_| CliError::Usage(format!("{key} must be an integer")))?;
                }
                Ok(())
            };
            grid_override("t_max", &mut grid.t_max)?;
            grid_override("k2_extra", &mut grid.k2_extra)?;
            grid_override("k1_extra", &mut grid.k1_extra)?;
            grid_override("n_extra", &mut grid.n_extra)?;
            grid_override("m_max", &mut grid.m_max)?;
            let lemma = need(p, "lemma")?;
            let reports: Vec<AuditReport> = if lemma == "all" {
                audit_all(&grid)
            } else {
                vec![audit(lemma, &grid).map_err(CliError::run)?]
            };
            for r in &reports {
                report.push_result(
                    format!("{} ({} tuples, {} observations)", r.lemma, r.tuples_tested, r.observations),
                    r.status.label(),
                );
                if r.status == AuditStatus::Failed {
                    for row in r.rows.iter().filter(|row| row.status == crate::audit::RowStatus::Failed).take(16)
                    {
                        report.push_failure(
                            "inequality",
                            format!(
                                "{} [{}]: {} = {} {} {} = {}",
                                row.lemma,
                                row.params,
                                row.lhs_label,
                                row.lhs,
                                row.relation.symbol(),
                                row.rhs_label,
                                row.rhs
                            ),
                        );
                    }
                }
            }
            report.push_result("csv_rows", reports.iter().map(|r| r.rows.len()).sum::<usize>());
            report.csv_blob = Some(reports_to_csv(&reports));
        }
        "search-cross" => {
            let mut cfg = SearchConfig::cross(
                need_u64(p, "q")?,
                need_usize(p, "n")?,
                need_usize(p, "t")?,
                need_usize(p, "k1")?,
                need_usize(p, "k2")?,
            );
            cfg.strategy = SeedStrategy::from_str(need(p, "strategy")?).map_err(CliError::Usage)?;
            cfg.max_seeds = need_u64(p, "max_seeds")?;
            cfg.random_seeds = need_u64(p, "random_seeds")?;
            cfg.rng_seed = opt_u64(p, "rng_seed")?.unwrap_or(1);
            cfg.budget = budget;
            cfg.nontrivial_only = p.get("nontrivial").map(String::as_str) == Some("true");
            let res = search_cross_pairs(&cfg).map_err(CliError::run)?;
            report.push_result("coverage", res.coverage);
            report.push_result("seeds_run", res.seeds_run);
            report.push_result("fixed_points", res.fixed_points.len());
            report.push_result("product_bound", &res.product_bound);
            if let Some(rv) = &res.regime_value {
                report.push_result("regime_value", rv);
                report.push_result("regime_is_bound", res.regime_is_bound);
            }
            if let Some(best) = &res.best {
                report.push_result("best_product", &best.product);
                report.push_result("best_trivial", best.trivial);
                report.push_result(
                    "best_classification",
                    best.classification.clone().unwrap_or_else(|| "unmatched".into()),
                );
            }
            if let Some(bn) = &res.best_nontrivial {
                report.push_result("best_nontrivial_product", &bn.product);
                report.push_result(
                    "best_nontrivial_classification",
                    bn.classification.clone().unwrap_or_else(|| "unmatched".into()),
                );
            }
            for f in &res.failures {
                report.push_failure("search-bound", f);
            }
            report.csv_blob = Some(pair_leaderboard_csv(&res));
        }
        "search-rwise" => {
            let mut cfg = SearchConfig::rwise(
                need_u64(p, "q")?,
                need_usize(p, "n")?,
                need_usize(p, "t")?,
                need_usize(p, "r")?,
                need_usize(p, "k")?,
            );
            cfg.strategy = SeedStrategy::from_str(need(p, "strategy")?).map_err(CliError::Usage)?;
            cfg.max_seeds = need_u64(p, "max_seeds")?;
            cfg.random_seeds = need_u64(p, "random_seeds")?;
            cfg.rng_seed = opt_u64(p, "rng_seed")?.unwrap_or(1);
            cfg.budget = budget;
            let res = search_rwise(&cfg).map_err(CliError::run)?;
            report.push_result("coverage", res.coverage);
            report.push_result("seeds_run", res.seeds_run);
            report.push_result("exploratory", res.exploratory);
            if let Some(b) = &res.bound {
                report.push_result("size_bound", b);
            }
            report.push_result("families_found", res.records.len());
            if let Some(best) = res.best_nontrivial_size {
                report.push_result("best_nontrivial_size", best);
            }
            for (i, rec) in res.records.iter().enumerate().take(16) {
                report.push_result(
                    format!("family_{i}"),
                    format!(
                        "size={} trivial={} maximal={} class={}",
                        rec.size,
                        rec.trivial,
                        rec.maximal,
                        rec.classification.clone().unwrap_or_else(|| "unmatched".into())
                    ),
                );
            }
            for f in &res.failures {
                report.push_failure("search-bound", f);
            }
        }
        "search-nonexistence" => {
            let rep = verify_rwise_nonexistence(
                need_u64(p, "q")?,
                need_usize(p, "n")?,
                need_usize(p, "k")?,
                need_usize(p, "t")?,
                need_usize(p, "r")?,
                budget,
            )
            .map_err(CliError::run)?;
            report.push_result("chains_examined", rep.chains_examined);
            report.push_result("witnesses_below_t", rep.witnesses_below_t);
            report.push_result("max_witness_len", rep.max_witness_len);
            report.push_result("witness_bound", rep.witness_bound);
            report.push_result("confirmed_empty", rep.confirmed_empty);
            if !rep.confirmed_empty {
                report.push_failure(
                    "nonexistence",
                    "a descent chain exceeded the witness bound; the corollary is violated",
                );
            }
        }
        "search-stability" => {
            let mut cfg = SearchConfig::rwise(
                need_u64(p, "q")?,
                need_usize(p, "n")?,
                need_usize(p, "t")?,
                need_usize(p, "r")?,
                need_usize(p, "k")?,
            );
            cfg.rng_seed = opt_u64(p, "rng_seed")?.unwrap_or(1);
            cfg.budget = budget;
            let rep = stability_probe(&cfg).map_err(CliError::run)?;
            report.push_result("families_probed", rep.records.len());
            report.push_result("all_pairwise_ok", rep.all_pairwise_ok);
            for (i, rec) in rep.records.iter().enumerate() {
                report.push_result(
                    format!("probe_{i}"),
                    format!(
                        "size={} pairwise_ok={} above_h2={:?} contained={:?}",
                        rec.size, rec.pairwise_ok, rec.above_h2_threshold, rec.contained_in_a_union
                    ),
                );
            }
            if !rep.all_pairwise_ok {
                report.push_failure("stability", "a produced family missed the pairwise floor");
            }
        }
        "cache-save" => {
            let field = field_for(p)?;
            let (n, k) = (need_usize(p, "n")?, need_usize(p, "k")?);
            let slice = enumerate_slice(n, k, field, budget).map_err(CliError::run)?;
            let path = PathBuf::from(need(p, "path")?);
            if let Some(dir) = path.parent() {
                std::fs::create_dir_all(dir).map_err(CliError::run)?;
            }
            cache_save(&slice, &path).map_err(CliError::run)?;
            report.push_result("count", slice.len());
            report.push_result("path", path.display());
        }
        "cache-load" => {
            let path = PathBuf::from(need(p, "path")?);
            let slice = cache_load(&path).map_err(CliError::run)?;
            report.push_result("q", slice.q());
            report.push_result("n", slice.ambient());
            report.push_result("k", slice.dim());
            report.push_result("count", slice.len());
        }
        "cache-info" => {
            let path = PathBuf::from(need(p, "path")?);
            let header = cache_header(&path).map_err(CliError::run)?;
            report.push_result("version", header.version);
            report.push_result("q", header.q);
            report.push_result("n", header.n);
            report.push_result("k", header.k);
            report.push_result("count", header.count);
            report.push_result("checksum", header.checksum);
        }
        other => return Err(CliError::Usage(format!("unknown command {other}"))),
    }
    Ok(report)
}

fn emit(report: &Report, format: &str, out: &mut dyn Write) -> std::io::Result<()> {
    match format {
        "json" => out.write_all(report.to_json().as_bytes()),
        "csv" => match &report.csv_blob {
            Some(blob) => out.write_all(blob.as_bytes()),
            None => out.write_all(report.to_csv().as_bytes()),
        },
        _ => out.write_all(report.to_text().as_bytes()),
    }
}

/// Runs the CLI against `argv` (without the program name), writing the
/// report to `out`. Returns the process exit code.
pub fn run_with_writer<I>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = String>,
{
    let mut full_args = vec!["qlat".to_string()];
    full_args.extend(argv);
    let cli = match Cli::try_parse_from(&full_args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return 2;
        }
    };
    let settings = match settings_from(&cli) {
        Ok(s) => s,
        Err(CliError::Usage(msg)) | Err(CliError::Run(msg)) => {
            eprintln!("error: {msg}");
            return 2;
        }
    };
    if settings.workers > 0 {
        // Build the global pool once; later calls with the same settings
        // are a no-op error that is safe to ignore.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(settings.workers).build_global();
    }
    let (command, params) = normalize(&cli, &settings);
    match execute(&command, &params) {
        Ok(report) => {
            let emitted: Box<dyn FnOnce(&mut dyn Write) -> std::io::Result<()>> =
                Box::new(|w| emit(&report, &settings.format, w));
            let io_result = match &settings.output {
                Some(path) => {
                    let mut file = match std::fs::File::create(path) {
                        Ok(f) => f,
                        Err(e) => {
                            eprintln!("error: cannot write {}: {e}", path.display());
                            return 1;
                        }
                    };
                    emitted(&mut file)
                }
                None => emitted(out),
            };
            if let Err(e) = io_result {
                eprintln!("error: {e}");
                return 1;
            }
            if report.ok() {
                0
            } else {
                1
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            2
        }
        Err(CliError::Run(msg)) => {
            // Operational failure: emit a machine-readable failure record.
            let mut report = Report::new(command, params);
            report.push_failure("error", &msg);
            let _ = emit(&report, &settings.format, out);
            eprintln!("error: {msg}");
            1
        }
    }
}

/// Entry point used by the binary.
pub fn run<I>(argv: I) -> i32
where
    I: IntoIterator<Item = String>,
{
    let mut stdout = std::io::stdout();
    run_with_writer(argv, &mut stdout)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String) {
        let mut buf = Vec::new();
        let code = run_with_writer(args.iter().map(|s| s.to_string()), &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn qbinom_prints_35() {
        let (code, out) = run_capture(&["qbinom", "4", "2", "--q", "2"]);
        assert_eq!(code, 0);
        let report: Report = serde_json::from_str(&out).unwrap();
        assert_eq!(report.results[0].value, "35");
    }

    #[test]
    fn formula_g2_matches_the_family_size() {
        let (code, out) =
            run_capture(&["formula", "g2", "--q", "2", "--n", "6", "--l", "2", "--t", "1"]);
        assert_eq!(code, 0);
        let report: Report = serde_json::from_str(&out).unwrap();
        assert_eq!(report.results[0].value, "35");
    }

    #[test]
    fn usage_errors_exit_2() {
        let (code, _) = run_capture(&["qbinom", "4"]);
        assert_eq!(code, 2);
        let (code, _) = run_capture(&["formula", "g9", "--q", "2"]);
        assert_eq!(code, 2); // unknown formula name is a usage error
        let (code, _) = run_capture(&["no-such-command"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn construct_reports_match() {
        let (code, out) = run_capture(&[
            "construct", "B", "--q", "2", "--n", "6", "--dim", "2", "--x-dim", "1", "--m-dim", "3",
        ]);
        assert_eq!(code, 0);
        let report: Report = serde_json::from_str(&out).unwrap();
        assert!(report.results.iter().any(|r| r.name == "enumerated" && r.value == "35"));
        assert!(report.results.iter().any(|r| r.name == "match" && r.value == "true"));
    }

    #[test]
    fn verify_cross_ab_holds() {
        let (code, out) = run_capture(&[
            "verify", "cross", "--pair", "ab", "--q", "2", "--n", "6", "--t", "1", "--k1", "2",
            "--k2", "2",
        ]);
        assert_eq!(code, 0);
        let report: Report = serde_json::from_str(&out).unwrap();
        assert!(report.results.iter().any(|r| r.name == "holds" && r.value == "true"));
        assert!(!report.sampled);
    }

    #[test]
    fn audit_all_flag_and_from_report_flag_forms() {
        let (code, out) = run_capture(&["audit", "--all", "--qs", "2", "--t-max", "1", "--format", "csv"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("lemma,params,lhs,rhs,relation,status\n"));

        let dir = std::env::temp_dir().join(format!("qlat-flagform-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("r.json");
        let (code, _) = run_capture(&["qbinom", "6", "3", "--q", "2", "--output", path.to_str().unwrap()]);
        assert_eq!(code, 0);
        let (code, out) = run_capture(&["verify", "--from-report", path.to_str().unwrap()]);
        assert_eq!(code, 0, "{out}");
        let report: Report = serde_json::from_str(&out).unwrap();
        assert!(report.results.iter().any(|r| r.name == "claims_match" && r.value == "true"));

        let (code, _) = run_capture(&["verify"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn reports_round_trip_through_from_report() {
        let dir = std::env::temp_dir().join(format!("qlat-cli-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("qbinom.json");
        let (code, _) = run_capture(&[
            "qbinom", "5", "2", "--q", "3", "--output", path.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        let (code, out) = run_capture(&["verify", "from-report", path.to_str().unwrap()]);
        assert_eq!(code, 0, "{out}");
        let report: Report = serde_json::from_str(&out).unwrap();
        assert!(report.results.iter().any(|r| r.name == "claims_match" && r.value == "true"));
    }

    #[test]
    fn byte_identical_reports_for_identical_configs() {
        let (c1, out1) = run_capture(&["tau", "B", "--q", "2", "--n", "6", "--dim", "2", "--x-dim", "1", "--m-dim", "3", "--t", "1"]);
        let (c2, out2) = run_capture(&["tau", "B", "--q", "2", "--n", "6", "--dim", "2", "--x-dim", "1", "--m-dim", "3", "--t", "1"]);
        assert_eq!(c1, 0);
        assert_eq!(c2, 0);
        assert_eq!(out1, out2);
        let report: Report = serde_json::from_str(&out1).unwrap();
        assert!(report.results.iter().any(|r| r.name == "tau" && r.value == "2"));
    }

    #[test]
    fn unknown_config_keys_are_rejected() {
        let dir = std::env::temp_dir().join(format!("qlat-cfg-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.conf");
        std::fs::write(&path, "budget=100\nwat=1\n").unwrap();
        let (code, _) = run_capture(&[
            "--config", path.to_str().unwrap(), "qbinom", "4", "2", "--q", "2",
        ]);
        assert_eq!(code, 2);
        std::fs::write(&path, "budget=250000\n").unwrap();
        let (code, _) = run_capture(&[
            "--config", path.to_str().unwrap(), "qbinom", "4", "2", "--q", "2",
        ]);
        assert_eq!(code, 0);
    }

    #[test]
    fn budget_errors_exit_1_with_record() {
        let (code, out) = run_capture(&["enumerate", "--q", "2", "--n", "14", "--k", "4"]);
        assert_eq!(code, 1);
        let report: Report = serde_json::from_str(&out).unwrap();
        assert_eq!(report.failures.len(), 1);
        assert!(report.failures[0].detail.contains("budget"));
    }

    #[test]
    fn audit_csv_has_schema_header() {
        let (code, out) = run_capture(&[
            "audit", "--lemma", "g3_swapped_lt", "--qs", "2", "--t-max", "1", "--format", "csv",
        ]);
        assert_eq!(code, 0);
        assert!(out.starts_with("lemma,params,lhs,rhs,relation,status\n"));
        assert!(out.lines().count() > 1);
    }

    #[test]
    fn no_floating_point_tokens_in_numeric_fields() {
        let (_, out) = run_capture(&["formula", "g3", "--q", "2", "--n", "8", "--t", "1", "--k", "3", "--l", "3", "--terms"]);
        let report: Report = serde_json::from_str(&out).unwrap();
        for r in &report.results {
            // Values are decimal strings or labeled breakdowns; none may
            // contain a float token.
            assert!(!r.value.contains('.'), "float-looking value {}", r.value);
        }
    }
}
