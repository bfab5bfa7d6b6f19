//! Verb dispatch.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;

use fpa_core::densify::{canonical_beta, densify_solve};
use fpa_core::engine::{best_response_from, check_affiliation, verify, win_probs, Normalization};
use fpa_core::model::{BidSpace, CfpaBox, Dfpa, Instance, JumpStrategy, Profile, Symmetry};
use fpa_core::rational::{format_rational, parse_rational};
use fpa_core::reduce::{
    build_auction, encode_profile, extract_assignment, gadget_bids, lift_dfpa_sym_to_cfpa, lift_dfpa_to_cfpa, parse_sat,
    project_strategy, ReductionMap, SatFormula,
};
use fpa_core::search::{
    default_grid, enumerate_pure_equilibria, enumerate_symmetric_pure, jump_grid_search, shrink_bidspace, LogRecord,
    SearchConfig, SearchOutcome,
};
use fpa_core::{Error, Rational};

use crate::exit;
use crate::format::{
    AffiliationRecord, BestResponseRecord, CertificateFile, InstanceFile, LiftFile, LogLine, MapFile, ParamsFile,
    ProfileFile, VerifyRecord,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {message}")]
    Json { path: String, message: String },
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Io { .. } => exit::IO,
            CliError::Json { .. } => exit::PARSE,
            CliError::Usage(_) => exit::USAGE,
            CliError::Core(e) => match e {
                Error::Parse(_) => exit::PARSE,
                Error::Invalid(_)
                | Error::BidderOutOfRange(_)
                | Error::OutsideSupport { .. }
                | Error::NonCanonical(_)
                | Error::Profile(_) => exit::INVALID,
                Error::Budget { .. } => exit::BUDGET,
                Error::Unsupported(_) => exit::UNSUPPORTED,
                Error::Argument(_) => exit::DOMAIN,
            },
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.code() {
            exit::IO => "io",
            exit::PARSE => "parse",
            exit::INVALID => "invalid",
            exit::BUDGET => "budget",
            exit::UNSUPPORTED => "unsupported",
            exit::USAGE => "usage",
            _ => "domain",
        }
    }

    /// One-line JSON error record for stderr.
    pub fn record(&self) -> String {
        #[derive(Serialize)]
        struct Located<'a> {
            location: &'a str,
            message: &'a str,
        }
        #[derive(Serialize)]
        struct Record<'a> {
            error: &'a str,
            code: u8,
            message: String,
            #[serde(skip_serializing_if = "Vec::is_empty")]
            violations: Vec<Located<'a>>,
        }
        let violations = match self {
            CliError::Core(Error::Invalid(r)) => {
                r.0.iter().map(|v| Located { location: &v.location, message: &v.message }).collect()
            }
            _ => Vec::new(),
        };
        let rec = Record { error: self.kind(), code: self.code(), message: self.to_string(), violations };
        serde_json::to_string(&rec).expect("error record serializes")
    }
}

/// Outcome of a verb that ran to completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Fail,
    None,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Ok => exit::OK,
            Status::Fail => exit::FAIL,
            Status::None => exit::NONE,
        }
    }

    fn pass(ok: bool) -> Self {
        if ok { Status::Ok } else { Status::Fail }
    }
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn rational_list(s: &str) -> Result<Vec<Rational>, CliError> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(|t| parse_rational(t).map_err(CliError::from)).collect()
}

#[derive(Parser, Debug)]
#[command(name = "fpa", version, about = "Exact equilibria of first-price auctions with discrete bids")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    /// Write the result here instead of stdout.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct SearchArgs {
    #[arg(long, value_parser = rational_arg, default_value = "0")]
    pub eps: Rational,
    /// Only monotone strategies.
    #[arg(long)]
    pub monotone: bool,
    #[arg(long)]
    pub allow_overbidding: bool,
    /// Maximum number of profiles to enumerate.
    #[arg(long, default_value_t = 10_000_000)]
    pub budget: u64,
    /// One JSON line per checked profile.
    #[arg(long)]
    pub log: Option<PathBuf>,
}

impl SearchArgs {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            eps: self.eps.clone(),
            monotone_only: self.monotone,
            no_overbidding: !self.allow_overbidding,
            symmetric: false,
            budget: self.budget,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check an instance, and optionally a profile, against the model invariants.
    Validate {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        profile: Option<PathBuf>,
    },
    /// Marginal distribution of one bidder's value.
    Marginal {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 0)]
        bidder: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Winning probability and utility of a single bid.
    Utility {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        profile: PathBuf,
        #[arg(long, default_value_t = 0)]
        bidder: usize,
        #[arg(long, value_parser = rational_arg)]
        value: Rational,
        #[arg(long, value_parser = rational_arg)]
        bid: Rational,
        /// Joint rather than interim (conditional) probabilities.
        #[arg(long)]
        raw: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Best bids of one bidder at one value.
    BestResponse {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        profile: PathBuf,
        #[arg(long, default_value_t = 0)]
        bidder: usize,
        #[arg(long, value_parser = rational_arg)]
        value: Rational,
        #[arg(long)]
        allow_overbidding: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Exact ε-equilibrium check. Exit 1 when some deviation gains more than ε.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        profile: PathBuf,
        #[arg(long, value_parser = rational_arg, default_value = "0")]
        eps: Rational,
        #[command(flatten)]
        out: Output,
    },
    /// First pure ε-equilibrium in lexicographic order. Exit 3 when there is none.
    SolvePure {
        #[arg(long)]
        instance: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Same search restricted to one strategy per symmetry group.
    SolveSymmetric {
        #[arg(long)]
        instance: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Step-function equilibrium search on a continuous instance.
    JumpSearch {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_parser = rational_arg, default_value = "0")]
        eps: Rational,
        /// Thresholds range over multiples of 1/mesh plus every box endpoint.
        #[arg(long, default_value_t = 4)]
        mesh: i64,
        /// Explicit comma-separated threshold grid (overrides --mesh).
        #[arg(long)]
        grid: Option<String>,
        /// One step function per symmetry group.
        #[arg(long)]
        symmetric: bool,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        #[arg(long)]
        log: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Replace the bid space by at most `target` bids.
    Shrink {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        target: usize,
        /// Kept bids and the additive loss bound.
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Build the auction for a 3-SAT formula (DIMACS or one parenthesised clause per line).
    FromSat {
        formula: PathBuf,
        #[arg(long)]
        instance: Option<PathBuf>,
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(long)]
        params: Option<PathBuf>,
        /// Gadget weights to use instead of the defaults.
        #[arg(long)]
        deltas: Option<PathBuf>,
    },
    /// Profile encoding a truth assignment, e.g. `--assignment 1,0,1`.
    Encode {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        assignment: String,
        #[command(flatten)]
        out: Output,
    },
    /// Truth assignment encoded by a profile. Exit 3 when the profile encodes none.
    Extract {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        profile: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Spread a discrete instance onto cubes of side δ.
    Lift {
        #[arg(long)]
        instance: PathBuf,
        /// Requested cube side; shrunk when too large. Defaults to automatic.
        #[arg(long, value_parser = rational_arg)]
        delta: Option<Rational>,
        /// Lift metadata, needed by `project`.
        #[arg(long)]
        meta: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Map step functions on a lifted instance back to mixed strategies.
    Project {
        #[arg(long)]
        lift: PathBuf,
        #[arg(long)]
        profile: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Approximate equilibrium of a symmetric continuous instance. Exit 1 if the certificate fails.
    Densify {
        #[arg(long)]
        instance: PathBuf,
        /// Replacement bid space, comma-separated.
        #[arg(long)]
        bids: Option<String>,
        #[arg(long, value_parser = rational_arg, default_value = "1/1099511627776")]
        eps: Rational,
        #[arg(long)]
        strategy: Option<PathBuf>,
        #[arg(long)]
        certificate: Option<PathBuf>,
        /// CSV samples `v,beta,beta_tilde`.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Affiliation check. Exit 1 with a witness pair when it fails.
    CheckAffiliation {
        #[arg(long)]
        instance: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Plot data for a step-function strategy: `v,bid`, or `v,beta,beta_tilde` with --beta.
    EmitPlot {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        profile: PathBuf,
        /// Strategy slot to plot.
        #[arg(long, default_value_t = 0)]
        slot: usize,
        #[arg(long)]
        beta: bool,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[command(flatten)]
        out: Output,
    },
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::Json { path: path.display().to_string(), message: e.to_string() })
}

fn write_text(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io { path: p.display().to_string(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<(), CliError> {
    write_text(path, &to_json(value))
}

fn load_instance(path: &Path) -> Result<Instance, CliError> {
    Ok(read_json::<InstanceFile>(path)?.to_instance()?)
}

fn load_profile(path: &Path, inst: &Instance) -> Result<Profile, CliError> {
    Ok(read_json::<ProfileFile>(path)?.to_profile(inst)?)
}

fn load_map(path: &Path) -> Result<(SatFormula, Dfpa, ReductionMap), CliError> {
    let file: MapFile = read_json(path)?;
    let formula = SatFormula::new(file.variables, file.clauses)?;
    let deltas = file.params.deltas()?;
    let (dfpa, map) = build_auction(&formula, Some(&deltas))?;
    Ok((formula, dfpa, map))
}

fn log_lines(records: &[LogRecord]) -> String {
    records.iter().map(|r| serde_json::to_string(&LogLine::new(r)).expect("log line serializes") + "\n").collect()
}

/// Runs the search with an optional JSON-lines log, then writes the profile.
fn finish_search<P>(
    run: impl FnOnce(Option<&mut dyn FnMut(&LogRecord)>) -> Result<SearchOutcome<P>, Error>,
    log: Option<&Path>,
    out: Option<&Path>,
    to_file: impl FnOnce(&P) -> ProfileFile,
) -> Result<Status, CliError> {
    let mut records = Vec::new();
    let mut sink = |r: &LogRecord| records.push(r.clone());
    let outcome = run(log.map(|_| &mut sink as &mut dyn FnMut(&LogRecord)))?;
    if let Some(path) = log {
        write_text(Some(path), &log_lines(&records))?;
    }
    match outcome {
        SearchOutcome::Found { profile, .. } => {
            write_json(out, &to_file(&profile))?;
            Ok(Status::Ok)
        }
        SearchOutcome::Exhausted { checked } => {
            write_json(out, &serde_json::json!({ "found": false, "checked": checked }))?;
            Ok(Status::None)
        }
    }
}

fn with_bids(inst: &Instance, bids: BidSpace) -> Instance {
    let mut inst = inst.clone();
    match &mut inst {
        Instance::Dfpa(d) => d.bids = bids,
        Instance::DfpaSym(d) => d.bids = bids,
        Instance::CfpaBox(c) => c.bids = bids,
        Instance::CfpaIid(c) => c.bids = bids,
    }
    inst
}

fn parse_assignment(text: &str) -> Result<Vec<bool>, CliError> {
    let tokens: Vec<&str> =
        if text.contains(',') { text.split(',').map(str::trim).collect() } else { text.trim().split("").filter(|t| !t.is_empty()).collect() };
    tokens
        .into_iter()
        .map(|t| match t {
            "1" | "true" | "t" => Ok(true),
            "0" | "false" | "f" => Ok(false),
            other => Err(CliError::Usage(format!("bad assignment entry {other:?}"))),
        })
        .collect()
}

/// `x` rounded to `places` decimals.
pub fn decimal(x: &Rational, places: usize) -> String {
    let scale = parse_rational(&format!("1{}", "0".repeat(places))).expect("power of ten");
    let scaled = (x * &scale).round().to_integer().to_string();
    let (sign, digits) = match scaled.strip_prefix('-') {
        Some(d) => ("-", d),
        None => ("", scaled.as_str()),
    };
    let padded = format!("{digits:0>width$}", width = places + 1);
    let (int, frac) = padded.split_at(padded.len() - places);
    if places == 0 { format!("{sign}{int}") } else { format!("{sign}{int}.{frac}") }
}

/// Sample abscissae: the uniform grid on `[lo, 1]` plus `extra` points inside it.
fn sample_points(lo: &Rational, samples: usize, extra: &[Rational]) -> Vec<Rational> {
    let one = Rational::from_integer(1.into());
    let n = samples.max(1);
    let mut pts: Vec<Rational> = (0..=n)
        .map(|k| lo + (&one - lo) * Rational::new(k.into(), n.into()))
        .chain(extra.iter().filter(|t| *t >= lo && **t <= one).cloned())
        .collect();
    pts.sort();
    pts.dedup();
    pts
}

fn beta_csv(inst: &Instance, strategy: &JumpStrategy, bids: &BidSpace, samples: usize) -> Result<String, CliError> {
    let beta = canonical_beta(inst)?;
    let lo = beta.support_left().clone();
    let mut csv = String::from("v,beta,beta_tilde\n");
    for v in sample_points(&lo, samples, &[]) {
        let b = beta.eval(&v)?;
        let tilde = bids.get(strategy.bid_at(&v));
        writeln!(csv, "{},{},{}", format_rational(&v), decimal(&b, 12), format_rational(tilde)).expect("string write");
    }
    Ok(csv)
}

pub fn run(cli: &Cli) -> Result<Status, CliError> {
    match &cli.command {
        Command::Validate { instance, profile } => {
            let inst = load_instance(instance)?;
            let strategies = match profile {
                Some(p) => Some(load_profile(p, &inst)?.len()),
                None => None,
            };
            let kind = match &inst {
                Instance::Dfpa(_) => "dfpa",
                Instance::DfpaSym(_) => "dfpa-sym",
                Instance::CfpaBox(_) => "cfpa-box",
                Instance::CfpaIid(_) => "cfpa-iid",
            };
            let mut rec = serde_json::json!({ "valid": true, "kind": kind, "bidders": inst.n(), "bids": inst.bids().len() });
            if let Some(k) = strategies {
                rec["strategies"] = k.into();
            }
            write_json(None, &rec)?;
            Ok(Status::Ok)
        }
        Command::Marginal { instance, bidder, out } => {
            let inst = load_instance(instance)?;
            let strs = |v: &[Rational]| v.iter().map(format_rational).collect::<Vec<_>>();
            let rec = match &inst {
                Instance::Dfpa(d) => {
                    if *bidder >= d.prior.n() {
                        return Err(Error::BidderOutOfRange(*bidder).into());
                    }
                    serde_json::json!({ "kind": "discrete", "values": strs(d.prior.value_space(*bidder)), "masses": strs(d.prior.marginal(*bidder)?) })
                }
                Instance::DfpaSym(d) => {
                    let g = d.prior.group_of(*bidder)?;
                    serde_json::json!({ "kind": "discrete", "values": strs(d.prior.value_space(g)), "masses": strs(&d.prior.marginal(g)) })
                }
                Instance::CfpaBox(c) => {
                    if *bidder >= c.density.n() {
                        return Err(Error::BidderOutOfRange(*bidder).into());
                    }
                    let m = c.density.marginal(*bidder)?;
                    serde_json::json!({ "kind": "density", "breakpoints": strs(m.breakpoints()), "densities": strs(m.densities()) })
                }
                Instance::CfpaIid(c) => {
                    if *bidder >= c.n {
                        return Err(Error::BidderOutOfRange(*bidder).into());
                    }
                    serde_json::json!({ "kind": "density", "breakpoints": strs(c.marginal.breakpoints()), "densities": strs(c.marginal.densities()) })
                }
            };
            write_json(out.out.as_deref(), &rec)?;
            Ok(Status::Ok)
        }
        Command::Utility { instance, profile, bidder, value, bid, raw, out } => {
            let inst = load_instance(instance)?;
            let prof = load_profile(profile, &inst)?;
            let norm = if *raw { Normalization::Raw } else { Normalization::Interim };
            let k = inst
                .bids()
                .index_of(bid)
                .ok_or_else(|| CliError::Usage(format!("bid {} is not in the bid space", format_rational(bid))))?;
            let h = win_probs(&inst, &prof, *bidder, value, norm)?;
            let u = (value - bid) * &h[k];
            let rec = serde_json::json!({
                "bidder": bidder,
                "value": format_rational(value),
                "bid": format_rational(bid),
                "normalization": if *raw { "raw" } else { "interim" },
                "win_prob": format_rational(&h[k]),
                "utility": format_rational(&u),
            });
            write_json(out.out.as_deref(), &rec)?;
            Ok(Status::Ok)
        }
        Command::BestResponse { instance, profile, bidder, value, allow_overbidding, out } => {
            let inst = load_instance(instance)?;
            let prof = load_profile(profile, &inst)?;
            let h = win_probs(&inst, &prof, *bidder, value, Normalization::Interim)?;
            let br = best_response_from(value, &h, inst.bids(), !allow_overbidding);
            write_json(out.out.as_deref(), &BestResponseRecord::new(&br, inst.bids()))?;
            Ok(Status::Ok)
        }
        Command::Verify { instance, profile, eps, out } => {
            let inst = load_instance(instance)?;
            let prof = load_profile(profile, &inst)?;
            let report = verify(&inst, &prof, eps)?;
            write_json(out.out.as_deref(), &VerifyRecord::new(&report, inst.bids()))?;
            Ok(Status::pass(report.passed()))
        }
        Command::SolvePure { instance, search, out } => {
            let inst = match load_instance(instance)? {
                Instance::Dfpa(d) => d,
                Instance::DfpaSym(d) => d.expand(),
                _ => return Err(CliError::Usage("solve-pure needs a discrete instance".into())),
            };
            let cfg = search.config();
            finish_search(
                |log| enumerate_pure_equilibria(&inst, &cfg, log),
                search.log.as_deref(),
                out.out.as_deref(),
                |p| ProfileFile::from_profile(&Profile::Pure(p.clone()), &inst.bids),
            )
        }
        Command::SolveSymmetric { instance, search, out } => {
            let Instance::DfpaSym(inst) = load_instance(instance)? else {
                return Err(CliError::Usage("solve-symmetric needs a dfpa-sym instance".into()));
            };
            let cfg = search.config();
            finish_search(
                |log| enumerate_symmetric_pure(&inst, &cfg, log),
                search.log.as_deref(),
                out.out.as_deref(),
                |p| ProfileFile::from_profile(&Profile::Pure(p.clone()), &inst.bids),
            )
        }
        Command::JumpSearch { instance, eps, mesh, grid, symmetric, budget, log, out } => {
            let inst: CfpaBox = match load_instance(instance)? {
                Instance::CfpaBox(c) => c,
                Instance::CfpaIid(c) => c.to_boxes(),
                _ => return Err(CliError::Usage("jump-search needs a continuous instance".into())),
            };
            if *mesh < 1 {
                return Err(CliError::Usage("--mesh must be positive".into()));
            }
            let grid = match grid {
                Some(g) => rational_list(g)?,
                None => default_grid(&inst.density, *mesh),
            };
            let cfg = SearchConfig { eps: eps.clone(), monotone_only: true, no_overbidding: true, symmetric: *symmetric, budget: *budget };
            finish_search(
                |sink| jump_grid_search(&inst, &grid, &cfg, sink),
                log.as_deref(),
                out.out.as_deref(),
                |p| ProfileFile::from_profile(&Profile::Jump(p.clone()), &inst.bids),
            )
        }
        Command::Shrink { instance, target, report, out } => {
            let inst = load_instance(instance)?;
            let shrunk = shrink_bidspace(inst.bids(), *target)?;
            if let Some(path) = report {
                let rec = serde_json::json!({
                    "target": shrunk.target,
                    "guarantee": format_rational(&shrunk.guarantee),
                    "bids": shrunk.bids.bids().iter().map(format_rational).collect::<Vec<_>>(),
                });
                write_json(Some(path), &rec)?;
            }
            write_json(out.out.as_deref(), &InstanceFile::from_instance(&with_bids(&inst, shrunk.bids)))?;
            Ok(Status::Ok)
        }
        Command::FromSat { formula, instance, map, params, deltas } => {
            let f = parse_sat(&read_text(formula)?)?;
            let deltas = match deltas {
                Some(p) => Some(read_json::<ParamsFile>(p)?.deltas()?),
                None => None,
            };
            let (dfpa, m) = build_auction(&f, deltas.as_ref())?;
            let stem = formula.with_extension("");
            let sibling = |suffix: &str| PathBuf::from(format!("{}.{suffix}.json", stem.display()));
            let map_file = MapFile::new(&f, &m);
            write_json(Some(&instance.clone().unwrap_or_else(|| sibling("instance"))), &InstanceFile::from_instance(&Instance::Dfpa(dfpa)))?;
            write_json(Some(&map.clone().unwrap_or_else(|| sibling("map"))), &map_file)?;
            write_json(Some(&params.clone().unwrap_or_else(|| sibling("params"))), &map_file.params)?;
            Ok(Status::Ok)
        }
        Command::Encode { map, assignment, out } => {
            let (formula, _, m) = load_map(map)?;
            let bits = parse_assignment(assignment)?;
            if bits.len() != formula.num_vars {
                return Err(CliError::Usage(format!("assignment has {} entries, formula has {} variables", bits.len(), formula.num_vars)));
            }
            let profile = encode_profile(&bits, &m)?;
            write_json(out.out.as_deref(), &ProfileFile::from_profile(&Profile::Pure(profile), &gadget_bids()))?;
            Ok(Status::Ok)
        }
        Command::Extract { map, profile, out } => {
            let (formula, dfpa, m) = load_map(map)?;
            let Profile::Pure(p) = load_profile(profile, &Instance::Dfpa(dfpa))? else {
                return Err(CliError::Usage("extract needs a pure profile".into()));
            };
            let assignment = extract_assignment(&p, &m)?;
            let satisfied = assignment.as_ref().map(|a| formula.is_satisfied_by(a));
            write_json(out.out.as_deref(), &serde_json::json!({ "assignment": assignment, "satisfies": satisfied }))?;
            Ok(if assignment.is_some() { Status::Ok } else { Status::None })
        }
        Command::Lift { instance, delta, meta, out } => {
            let auto = Rational::from_integer(1.into());
            let delta = delta.as_ref().unwrap_or(&auto);
            let lift = match load_instance(instance)? {
                Instance::Dfpa(d) => lift_dfpa_to_cfpa(&d, delta)?,
                Instance::DfpaSym(d) => lift_dfpa_sym_to_cfpa(&d, delta)?,
                _ => return Err(CliError::Usage("lift needs a discrete instance".into())),
            };
            if let Some(path) = meta {
                write_json(Some(path), &LiftFile::new(&lift))?;
            }
            write_json(out.out.as_deref(), &InstanceFile::from_instance(&Instance::CfpaBox(lift.instance)))?;
            Ok(Status::Ok)
        }
        Command::Project { lift, profile, out } => {
            let lift = read_json::<LiftFile>(lift)?.to_lift()?;
            let lifted = Instance::CfpaBox(lift.instance.clone());
            let Profile::Jump(p) = load_profile(profile, &lifted)? else {
                return Err(CliError::Usage("project needs a jump profile".into()));
            };
            let mixed = project_strategy(&lift, &p)?;
            write_json(out.out.as_deref(), &ProfileFile::from_profile(&Profile::Mixed(mixed), &lift.instance.bids))?;
            Ok(Status::Ok)
        }
        Command::Densify { instance, bids, eps, strategy, certificate, csv, samples } => {
            let mut inst = load_instance(instance)?;
            if let Some(b) = bids {
                inst = with_bids(&inst, BidSpace::new(rational_list(b)?)?);
            }
            let cert = densify_solve(&inst, eps)?;
            let copies = match &inst {
                Instance::CfpaBox(c) if *c.density.symmetry() == Symmetry::None => c.density.n(),
                _ => 1,
            };
            let prof = Profile::Jump(vec![cert.strategy.clone(); copies]);
            write_json(strategy.as_deref(), &ProfileFile::from_profile(&prof, &cert.bids))?;
            if let Some(path) = certificate {
                write_json(Some(path), &CertificateFile::new(&cert))?;
            }
            if let Some(path) = csv {
                write_text(Some(path), &beta_csv(&inst, &cert.strategy, &cert.bids, *samples)?)?;
            }
            Ok(Status::pass(cert.holds()))
        }
        Command::CheckAffiliation { instance, out } => {
            let inst = load_instance(instance)?;
            let w = check_affiliation(&inst);
            write_json(out.out.as_deref(), &AffiliationRecord::new(w.as_ref()))?;
            Ok(Status::pass(w.is_none()))
        }
        Command::EmitPlot { instance, profile, slot, beta, samples, out } => {
            let inst = load_instance(instance)?;
            let Profile::Jump(p) = load_profile(profile, &inst)? else {
                return Err(CliError::Usage("emit-plot needs a jump profile".into()));
            };
            let s = p.get(*slot).ok_or_else(|| CliError::Usage(format!("profile has no slot {slot}")))?;
            let text = if *beta {
                beta_csv(&inst, s, inst.bids(), *samples)?
            } else {
                let zero = Rational::from_integer(0.into());
                let mut csv = String::from("v,bid\n");
                for v in sample_points(&zero, *samples, s.thresholds()) {
                    writeln!(csv, "{},{}", format_rational(&v), format_rational(inst.bids().get(s.bid_at(&v)))).expect("string write");
                }
                csv
            };
            write_text(out.out.as_deref(), &text)?;
            Ok(Status::Ok)
        }
    }
}
