//! Command-line front end. [`run`] returns the process exit status:
//! 0 on success, 1 when a library call fails or a check does not hold,
//! 2 on a usage error.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::bounds::{bounds_report, BoundsReport};
use crate::error::Error;
use crate::format::{parse_hex, read_scheme_file, write_scheme_file};
use crate::gf::{FieldElem, FieldTower};
use crate::repair::{RepairScheme, SchemeReport};
use crate::rs::{PolyF, RsCode};
use crate::schemes::{build, hdfs_code, BuildParams, ConstructionId};
use crate::search::{exhaustive_search, verify_against_table, SearchConfig};
use crate::sim::{provision, ClusterConfig};

#[derive(Parser, Debug)]
#[command(name = "rsrepair", version, about = "Low-bandwidth repair schemes for Reed-Solomon codes")]
struct Cli {
    /// Print the JSON shapes of every report and exit.
    #[arg(long)]
    schema: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Debug, Clone, Default)]
struct CodeArgs {
    /// Extension degree of F = GF(2^m).
    #[arg(long)]
    m: Option<u32>,
    /// Subfield degree of B = GF(2^d).
    #[arg(long)]
    d: Option<u32>,
    /// Field modulus in hex, including the x^m bit.
    #[arg(long, value_parser = hex_arg)]
    modulus: Option<u32>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Args, Debug, Clone)]
struct Source {
    #[arg(long, value_parser = construction_arg, conflicts_with = "scheme_in")]
    construction: Option<ConstructionId>,
    /// Scheme file to load instead of a construction.
    #[arg(long)]
    scheme_in: Option<PathBuf>,
    #[command(flatten)]
    code: CodeArgs,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Describe a field tower.
    Field {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        d: u32,
        #[arg(long, value_parser = hex_arg)]
        modulus: Option<u32>,
        #[arg(long)]
        json: bool,
    },
    /// Build or validate a repair scheme.
    Scheme {
        #[command(subcommand)]
        action: SchemeCommand,
    },
    /// Repair one erasure of a random codeword and print the transcript.
    Repair {
        #[command(flatten)]
        source: Source,
        /// Position of the erased symbol.
        #[arg(long)]
        erase: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Lower bounds on repair bandwidth.
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        d: u32,
        /// Number of helper nodes for the cut-set bound (default n - 1).
        #[arg(long)]
        locality: Option<usize>,
        /// Compare against this scheme's bandwidth.
        #[arg(long)]
        scheme_in: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Exhaustive search for a low-bandwidth scheme.
    Search {
        /// Take the code from this construction.
        #[arg(long, value_parser = construction_arg)]
        construction: Option<ConstructionId>,
        #[command(flatten)]
        code: CodeArgs,
        /// Only monic polynomials whose roots are distinct points of A.
        #[arg(long, alias = "roots-in-A")]
        roots_in_a: bool,
        #[arg(long)]
        max_degree: Option<usize>,
        /// Also admit non-monic polynomials.
        #[arg(long)]
        scalars: bool,
        /// Cap on tuples examined per erasure position.
        #[arg(long)]
        budget: Option<u128>,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        scheme_out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Simulate a striped cluster and account for repair traffic.
    Sim {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 1)]
        stripes: usize,
        /// `all`, or a single position.
        #[arg(long, default_value = "all")]
        fail: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand, Debug)]
enum SchemeCommand {
    /// Build a named construction and validate it.
    Build {
        #[arg(long, value_parser = construction_arg)]
        construction: ConstructionId,
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        scheme_out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Validate a scheme file.
    Validate {
        #[arg(long)]
        scheme_in: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

fn hex_arg(s: &str) -> Result<u32, String> {
    parse_hex(s).ok_or_else(|| format!("'{s}' is not a hex number"))
}

fn construction_arg(s: &str) -> Result<ConstructionId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Usage(String),
    Lib(Error),
    /// A run completed but its check did not hold.
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Lib(e.into())
    }
}

type CliResult = Result<(), Failure>;

/// Parses `args` (including the program name) and runs the command,
/// writing reports to `out` and diagnostics to `err`.
pub fn run_with<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return 2;
            }
            let _ = write!(out, "{}", e.render());
            return 0;
        }
    };
    let result = if cli.schema {
        print_json(out, &schema())
    } else if let Some(cmd) = cli.command {
        dispatch(cmd, out)
    } else {
        Err(Failure::Usage("a subcommand is required (try --help)".into()))
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "usage error: {msg}");
            2
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "error: {}: {e}", e.name());
            1
        }
        Err(Failure::Check(msg)) => {
            let _ = writeln!(err, "check failed: {msg}");
            1
        }
    }
}

/// Runs with the process arguments and standard streams.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

fn print_json<T: Serialize>(out: &mut dyn Write, value: &T) -> CliResult {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Lib(Error::Io(e.to_string())))?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, Failure> {
    match jobs {
        None => Ok(f()),
        Some(0) => Err(Failure::Usage("--jobs must be at least 1".into())),
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j)
                .build()
                .map_err(|e| Failure::Lib(Error::Io(e.to_string())))?;
            Ok(pool.install(f))
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> CliResult {
    match cmd {
        Command::Field { m, d, modulus, json } => cmd_field(out, m, d, modulus, json),
        Command::Scheme { action } => match action {
            SchemeCommand::Build {
                construction,
                code,
                scheme_out,
                json,
            } => {
                let scheme = build_construction(construction, &code)?;
                if let Some(path) = scheme_out {
                    write_scheme_file(&path, &scheme)?;
                }
                print_scheme_report(out, Some(construction), &scheme.validate()?, json)
            }
            SchemeCommand::Validate { scheme_in, json } => {
                let scheme = read_scheme_file(&scheme_in)?;
                print_scheme_report(out, None, &scheme.validate()?, json)
            }
        },
        Command::Repair {
            source,
            erase,
            seed,
            json,
        } => cmd_repair(out, &source, erase, seed, json),
        Command::Bounds {
            n,
            k,
            m,
            d,
            locality,
            scheme_in,
            json,
        } => {
            let report = match scheme_in {
                Some(path) => {
                    let scheme = read_scheme_file(&path)?;
                    let code = scheme.code();
                    let t = code.tower();
                    if (code.n(), code.k(), t.m(), t.d()) != (n, k, m, d) {
                        return Err(Failure::Usage(
                            "--scheme-in does not match --n --k --m --d".into(),
                        ));
                    }
                    bounds_report(code, locality, Some(&scheme.validate()?))?
                }
                None => BoundsReport::compute(n, k, m, d, locality, None)?,
            };
            print_bounds(out, &report, json)
        }
        Command::Search {
            construction,
            code,
            roots_in_a,
            max_degree,
            scalars,
            budget,
            jobs,
            scheme_out,
            json,
        } => {
            let rs = match construction {
                Some(c) => build_construction(c, &code)?.code().clone(),
                None => plain_code(&code)?,
            };
            let mut cfg = SearchConfig {
                roots_in_a_only: roots_in_a,
                max_degree,
                scalars,
                jobs: None,
                ..Default::default()
            };
            if budget.is_some() {
                cfg.per_star_budget = budget;
            }
            let result = with_jobs(jobs, || exhaustive_search(&rs, &cfg))??;
            if let Some(path) = scheme_out {
                write_scheme_file(&path, &result.scheme)?;
            }
            let table = if rs == hdfs_code() {
                Some(verify_against_table(&result)?)
            } else {
                None
            };
            if json {
                return print_json(
                    out,
                    &json!({
                        "candidates": result.candidates,
                        "tuples_per_star": result.tuples_per_star,
                        "candidates_examined": result.candidates_examined,
                        "per_star_bits": result.per_star_bits,
                        "bandwidth_bits": result.report.bandwidth_bits,
                        "bandwidth_subsymbols": result.report.bandwidth_subsymbols,
                        "report": result.report,
                        "table_comparison": table,
                    }),
                );
            }
            writeln!(out, "candidates per position   {}", result.candidates)?;
            writeln!(out, "tuples per position       {}", result.tuples_per_star)?;
            writeln!(out, "tuples examined           {}", result.candidates_examined)?;
            writeln!(out, "elapsed                   {:.3} s", result.elapsed_secs)?;
            print_scheme_report(out, None, &result.report, false)?;
            if let Some(t) = table {
                writeln!(
                    out,
                    "table comparison: {} ({} better, {} worse)",
                    if t.within_table { "within table" } else { "WORSE than table" },
                    t.improvements.len(),
                    t.regressions.len()
                )?;
            }
            Ok(())
        }
        Command::Sim {
            source,
            stripes,
            fail,
            seed,
            jobs,
            json,
        } => {
            let scheme = load_source(&source)?;
            let n = scheme.code().n();
            let failures: Vec<usize> = if fail == "all" {
                (0..n).collect()
            } else {
                let i = fail
                    .parse::<usize>()
                    .map_err(|_| Failure::Usage(format!("--fail expects `all` or a position, got '{fail}'")))?;
                vec![i]
            };
            let cfg = ClusterConfig {
                scheme,
                m_stripes: stripes,
                seed,
            };
            let campaign = with_jobs(jobs, || -> crate::Result<_> {
                let mut cluster = provision(&cfg)?;
                cluster.campaign(&failures)
            })??;
            if json {
                print_json(out, &campaign)?;
            } else {
                writeln!(
                    out,
                    "{:>6} {:>8} {:>10} {:>16} {:>14} {:>18} {:>9}",
                    "index", "point", "b(a*)", "downstream bits", "upstream bits", "naive downstream", "verified"
                )?;
                for r in &campaign.reports {
                    writeln!(
                        out,
                        "{:>6} {:>8} {:>10} {:>16} {:>14} {:>18} {:>9}",
                        r.failed_index,
                        r.failed,
                        r.subsymbols_per_stripe,
                        r.downstream_bits,
                        r.upstream_bits,
                        r.naive_downstream_bits,
                        r.verified
                    )?;
                }
                writeln!(
                    out,
                    "max downstream {} bits, mean {:.1} bits, state conserved: {}",
                    campaign.max_downstream_bits, campaign.mean_downstream_bits, campaign.conserved
                )?;
            }
            if !campaign.all_verified || !campaign.conserved {
                return Err(Failure::Check("a repaired server differs from its lost contents".into()));
            }
            Ok(())
        }
    }
}

fn cmd_field(out: &mut dyn Write, m: u32, d: u32, modulus: Option<u32>, json: bool) -> CliResult {
    let info = FieldTower::new(m, d, modulus)?.info();
    if json {
        return print_json(out, &info);
    }
    writeln!(out, "F = GF(2^{}) over B = GF(2^{}), t = {}", info.m, info.d, info.t)?;
    writeln!(out, "modulus      {}", info.modulus)?;
    writeln!(out, "generator    {} (modulus primitive: {})", info.generator, info.primitive_modulus)?;
    writeln!(out, "B* generator {}", info.subfield_generator)?;
    writeln!(out, "basis Z      {}", info.basis.join(" "))?;
    writeln!(out, "dual V       {}", info.dual_basis.join(" "))?;
    Ok(())
}

fn require<T: Copy>(v: Option<T>, flag: &str, c: ConstructionId) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("--construction {c} needs --{flag}")))
}

fn build_construction(c: ConstructionId, args: &CodeArgs) -> Result<RepairScheme, Failure> {
    let mut p = BuildParams {
        modulus: args.modulus,
        n: args.n,
        k: args.k,
        m: args.m,
        d: args.d,
    };
    match c {
        ConstructionId::Hdfs14_10 => {}
        ConstructionId::TwoCoset => {
            p.m = Some(require(args.m, "m", c)?);
            require(args.n, "n", c)?;
            require(args.k, "k", c)?;
        }
        ConstructionId::Trace | ConstructionId::Naive => {
            p.m = Some(require(args.m, "m", c)?);
            p.d = Some(require(args.d, "d", c)?);
            require(args.k, "k", c)?;
        }
    }
    Ok(build(c, &p)?)
}

/// RS code on the first `n` field elements (default: all of them).
fn plain_code(args: &CodeArgs) -> Result<RsCode, Failure> {
    let missing = |f: &str| Failure::Usage(format!("search needs --construction or --{f}"));
    let m = args.m.ok_or_else(|| missing("m"))?;
    let d = args.d.ok_or_else(|| missing("d"))?;
    let k = args.k.ok_or_else(|| missing("k"))?;
    let tower = FieldTower::new(m, d, args.modulus)?;
    let n = args.n.unwrap_or(tower.field().size());
    if n > tower.field().size() {
        return Err(Error::InvalidDimensions { n, k }.into());
    }
    let points = tower.field().elements().take(n).collect();
    Ok(RsCode::new(tower, points, k)?)
}

fn load_source(src: &Source) -> Result<RepairScheme, Failure> {
    match (&src.construction, &src.scheme_in) {
        (Some(c), _) => build_construction(*c, &src.code),
        (None, Some(path)) => Ok(read_scheme_file(path)?),
        (None, None) => Err(Failure::Usage("give --construction or --scheme-in".into())),
    }
}

/// A random codeword, reproducible from `seed`.
pub fn random_codeword(code: &RsCode, seed: u64) -> crate::Result<Vec<FieldElem>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = code.field().size() as u32;
    let msg = PolyF::from_coeffs(
        (0..code.k())
            .map(|_| FieldElem(rng.gen_range(0..size) as u16))
            .collect(),
    );
    code.encode(&msg)
}

#[derive(Serialize)]
struct RepairOutput<'a> {
    #[serde(flatten)]
    transcript: &'a crate::repair::RepairTranscript,
    expected: FieldElem,
    correct: bool,
}

fn cmd_repair(out: &mut dyn Write, src: &Source, erase: usize, seed: u64, json: bool) -> CliResult {
    let scheme = load_source(src)?;
    let word = random_codeword(scheme.code(), seed)?;
    let expected = *word
        .get(erase)
        .ok_or_else(|| Failure::Usage(format!("--erase {erase} is outside 0..{}", word.len())))?;
    let mut damaged = word.clone();
    damaged[erase] = FieldElem::ZERO;
    let tr = scheme.repair(&damaged, erase)?;
    let correct = tr.reconstructed == expected;
    if json {
        print_json(
            out,
            &RepairOutput {
                transcript: &tr,
                expected,
                correct,
            },
        )?;
    } else {
        writeln!(out, "erased position {} (point {})", tr.star_index, tr.alpha_star)?;
        writeln!(out, "{:>6} {:>6}  queries -> responses", "index", "point")?;
        for e in &tr.exchanges {
            let q: Vec<String> = e.queries.iter().map(|x| x.to_string()).collect();
            let r: Vec<String> = e.responses.iter().map(|x| x.to_string()).collect();
            writeln!(out, "{:>6} {:>6}  [{}] -> [{}]", e.index, e.point, q.join(" "), r.join(" "))?;
        }
        writeln!(
            out,
            "downloaded {} sub-symbols = {} bits",
            tr.downloaded_subsymbols, tr.downloaded_bits
        )?;
        writeln!(out, "reconstructed {} expected {} correct: {}", tr.reconstructed, expected, correct)?;
    }
    if !correct {
        return Err(Failure::Check("reconstructed symbol differs from the erased one".into()));
    }
    Ok(())
}

#[derive(Serialize)]
struct SchemeOutput<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    construction: Option<ConstructionId>,
    #[serde(flatten)]
    report: &'a SchemeReport,
}

fn print_scheme_report(
    out: &mut dyn Write,
    construction: Option<ConstructionId>,
    r: &SchemeReport,
    json: bool,
) -> CliResult {
    if json {
        return print_json(out, &SchemeOutput { construction, report: r });
    }
    if let Some(c) = construction {
        writeln!(out, "construction {c}")?;
    }
    writeln!(out, "F = GF(2^{}) over GF(2^{}), t = {}, n = {}, k = {}", r.m, r.d, r.t, r.n, r.k)?;
    writeln!(out, "{:>8} {:>11} {:>6} {:>9}", "alpha*", "subsymbols", "bits", "locality")?;
    for s in &r.per_star {
        writeln!(out, "{:>8} {:>11} {:>6} {:>9}", s.alpha_star, s.subsymbols, s.bits, s.locality)?;
    }
    writeln!(
        out,
        "bandwidth {} sub-symbols = {} bits, max locality {}",
        r.bandwidth_subsymbols, r.bandwidth_bits, r.max_locality
    )?;
    Ok(())
}

fn print_bounds(out: &mut dyn Write, r: &BoundsReport, json: bool) -> CliResult {
    if json {
        return print_json(out, r);
    }
    writeln!(
        out,
        "n = {}, k = {}, t = {}, |B| = {}, locality = {}",
        r.n, r.k, r.t, r.subfield_size, r.locality
    )?;
    writeln!(out, "{:<10} {:>14} {:>8} {:>12}", "bound", "sub-symbols", "ceiling", "bits")?;
    writeln!(
        out,
        "{:<10} {:>14.4} {:>8} {:>12.2}",
        "linear", r.linear_lb_subsymbols, r.linear_lb_ceiling, r.linear_lb_bits
    )?;
    writeln!(
        out,
        "{:<10} {:>14.4} {:>8} {:>12.2}",
        "cut-set", r.cutset_lb_subsymbols, r.cutset_lb_ceiling, r.cutset_lb_bits
    )?;
    writeln!(
        out,
        "{:<10} {:>14} {:>8} {:>12}",
        "trivial", r.trivial_lb_subsymbols, r.trivial_lb_subsymbols, r.trivial_lb_bits
    )?;
    writeln!(out, "{:<10} {:>14} {:>8} {:>12}", "naive", r.naive_subsymbols, "", r.naive_subsymbols * r.d as usize)?;
    let binding = match r.binding {
        crate::bounds::Regime::Cutset => "cut-set (t >= n - k)",
        crate::bounds::Regime::Trivial => "trivial (t < n - k)",
    };
    writeln!(out, "binding regime: {binding}")?;
    if let (Some(s), Some(b), Some(opt)) = (r.scheme_subsymbols, r.scheme_bits, r.optimal) {
        writeln!(out, "scheme: {s} sub-symbols = {b} bits, optimal: {opt}")?;
    }
    Ok(())
}

/// Documented keys of every JSON report.
fn schema() -> serde_json::Value {
    json!({
        "field": {
            "m": "integer", "d": "integer", "t": "integer",
            "modulus": "hex", "generator": "hex", "primitive_modulus": "bool",
            "subfield_generator": "hex", "basis": ["hex"], "dual_basis": ["hex"]
        },
        "scheme": {
            "construction": "string, omitted for files",
            "m": "integer", "d": "integer", "t": "integer", "n": "integer", "k": "integer",
            "per_star": [{
                "alpha_star": "hex", "dims": ["integer, one per position, 0 at alpha*"],
                "subsymbols": "integer", "bits": "integer", "locality": "integer"
            }],
            "bandwidth_subsymbols": "integer", "bandwidth_bits": "integer", "max_locality": "integer"
        },
        "repair": {
            "star_index": "integer", "alpha_star": "hex",
            "exchanges": [{"index": "integer", "point": "hex", "queries": ["hex"], "responses": ["hex"]}],
            "reconstructed": "hex", "expected": "hex", "correct": "bool",
            "downloaded_subsymbols": "integer", "downloaded_bits": "integer"
        },
        "bounds": {
            "n": "integer", "k": "integer", "m": "integer", "d": "integer", "t": "integer",
            "locality": "integer", "subfield_size": "integer",
            "linear_lb_subsymbols": "real", "linear_lb_bits": "real", "linear_lb_ceiling": "integer",
            "cutset_lb_subsymbols": "real", "cutset_lb_bits": "real", "cutset_lb_ceiling": "integer",
            "trivial_lb_subsymbols": "integer", "trivial_lb_bits": "integer",
            "binding": "cutset | trivial", "naive_subsymbols": "integer",
            "scheme_subsymbols": "integer or null", "scheme_bits": "integer or null",
            "optimal": "bool or null"
        },
        "search": {
            "candidates": "integer", "tuples_per_star": "integer", "candidates_examined": "integer",
            "per_star_bits": ["integer"], "bandwidth_bits": "integer", "bandwidth_subsymbols": "integer",
            "report": "scheme report", "table_comparison": {
                "positions": [{"position": "integer", "table_bits": "integer", "result_bits": "integer"}],
                "improvements": ["integer"], "regressions": ["integer"], "within_table": "bool"
            }
        },
        "sim": {
            "reports": [{
                "failed": "hex", "failed_index": "integer", "m_stripes": "integer",
                "subsymbols_per_stripe": "integer", "downstream_bits": "integer",
                "upstream_bits": "integer", "naive_downstream_bits": "integer", "verified": "bool"
            }],
            "max_downstream_bits": "integer", "mean_downstream_bits": "real",
            "all_verified": "bool", "conserved": "bool"
        }
    })
}
