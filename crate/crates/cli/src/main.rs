//! Command-line front end for computing and analyzing congruence p-schemes.
//!
//! Exit codes: 0 success, 1 usage or input errors, 2 resource caps exceeded,
//! 3 internal invariant violations.

use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ctscheme::analyze::{self, BigIndex, ScanOptions, ScanReport};
use ctscheme::catalog::{self, SequenceDef};
use ctscheme::modring::Modulus;
use ctscheme::scheme::{
    compute_scheme, deserialize, export_dot, minimize, serialize, ComputeOptions,
    CongruenceScheme, SchemeError, SchemeKind,
};
use ctscheme::{AnalyzeError, LaurentPoly};

#[derive(Parser)]
#[command(
    name = "ctscheme",
    about = "Congruence p-schemes for constant-term sequences modulo prime powers",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, ValueEnum)]
enum KindArg {
    Linear,
    Scaling,
    Automatic,
}

impl From<KindArg> for SchemeKind {
    fn from(k: KindArg) -> SchemeKind {
        match k {
            KindArg::Linear => SchemeKind::Linear,
            KindArg::Scaling => SchemeKind::Scaling,
            KindArg::Automatic => SchemeKind::Automatic,
        }
    }
}

#[derive(Args)]
struct SequenceArgs {
    /// Built-in sequence: catalan, motzkin, apery2, apery3
    #[arg(long, conflicts_with = "poly")]
    seq: Option<String>,
    /// Kernel polynomial P as an expression
    #[arg(long, requires = "vars")]
    poly: Option<String>,
    /// Weight polynomial Q (defaults to 1)
    #[arg(long, requires = "poly")]
    weight: Option<String>,
    /// Comma-separated variable names for --poly/--weight
    #[arg(long, value_delimiter = ',')]
    vars: Vec<String>,
}

impl SequenceArgs {
    fn resolve(&self) -> Result<SequenceDef, CliError> {
        match (&self.seq, &self.poly) {
            (Some(name), None) => Ok(catalog::builtin(name).map_err(usage)?),
            (None, Some(p_text)) => {
                let vars: Vec<&str> = self.vars.iter().map(|s| s.as_str()).collect();
                Ok(SequenceDef {
                    name: "scheme".to_string(),
                    p_text: p_text.clone(),
                    q_text: self.weight.clone().unwrap_or_else(|| "1".to_string()),
                    vars: vars.iter().map(|s| s.to_string()).collect(),
                })
            }
            _ => Err(CliError::usage(
                "exactly one of --seq or --poly must be given",
            )),
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute a scheme and write it to a file
    Compute {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[command(flatten)]
        input: SequenceArgs,
        #[arg(short)]
        p: u64,
        #[arg(short)]
        r: u32,
        /// Disable symmetry folding of state weights
        #[arg(long)]
        no_symmetry: bool,
        /// Abort when state discovery exceeds this count
        #[arg(long)]
        max_states: Option<usize>,
        /// Output path (default: <name>-<p>-<r>.json)
        #[arg(short)]
        output: Option<PathBuf>,
    },
    /// Evaluate the sequence at an index (decimal or B^E)
    Nth {
        #[arg(long)]
        scheme: PathBuf,
        #[arg(long)]
        index: String,
    },
    /// The exact set of attained (or missed) residues
    Values {
        #[arg(long)]
        scheme: PathBuf,
        /// Print the complement: residues never attained
        #[arg(long)]
        impossible: bool,
        /// Node cap for the reachability closure
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Derive the p-adic valuation scheme of a scaling scheme
    Valuation {
        #[arg(long)]
        scheme: PathBuf,
        #[arg(short)]
        output: Option<PathBuf>,
    },
    /// Moore-minimize an automatic scheme
    Minimize {
        #[arg(long)]
        scheme: PathBuf,
        #[arg(short)]
        output: Option<PathBuf>,
    },
    /// Smallest index attaining a value
    First {
        #[arg(long)]
        scheme: PathBuf,
        #[arg(long)]
        value: u64,
        #[arg(long, default_value_t = 64)]
        max_digits: usize,
    },
    /// Export the automaton as Graphviz DOT
    Dot {
        #[arg(long)]
        scheme: PathBuf,
        #[arg(short)]
        output: Option<PathBuf>,
    },
    /// Chinese remainder recombination of V:M pairs
    Crt {
        /// residue:modulus pairs, moduli prime powers
        #[arg(required = true)]
        pairs: Vec<String>,
    },
    /// Scan primes for attainment of a residue (0 = divisibility)
    Scan {
        #[arg(long)]
        seq: String,
        #[arg(short)]
        r: u32,
        /// Inclusive prime range LO..HI
        #[arg(long)]
        primes: String,
        /// Also search for the smallest witness index
        #[arg(long)]
        witness: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Write the reports as JSON lines
        #[arg(short)]
        output: Option<PathBuf>,
    },
    /// Missed-residue table modulo p^r for r = 1..rmax
    Census {
        #[arg(long)]
        seq: String,
        #[arg(short)]
        p: u64,
        #[arg(long)]
        rmax: u32,
    },
}

struct CliError {
    message: String,
    code: u8,
}

impl CliError {
    fn usage(message: impl fmt::Display) -> Self {
        CliError {
            message: message.to_string(),
            code: 1,
        }
    }
}

impl From<SchemeError> for CliError {
    fn from(e: SchemeError) -> Self {
        let code = match &e {
            SchemeError::StateCapExceeded { .. } => 2,
            SchemeError::InvariantViolation(_) => 3,
            _ => 1,
        };
        CliError {
            message: e.to_string(),
            code,
        }
    }
}

impl From<AnalyzeError> for CliError {
    fn from(e: AnalyzeError) -> Self {
        let code = match &e {
            AnalyzeError::NodeCapExceeded { .. } | AnalyzeError::DigitCapExceeded { .. } => 2,
            AnalyzeError::Scheme(inner) => return CliError::from_scheme_ref(inner),
            _ => 1,
        };
        CliError {
            message: e.to_string(),
            code,
        }
    }
}

impl CliError {
    fn from_scheme_ref(e: &SchemeError) -> Self {
        let code = match e {
            SchemeError::StateCapExceeded { .. } => 2,
            SchemeError::InvariantViolation(_) => 3,
            _ => 1,
        };
        CliError {
            message: e.to_string(),
            code,
        }
    }
}

fn usage(e: impl fmt::Display) -> CliError {
    CliError::usage(e)
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::usage(format!("{}: {e}", path.display()))
}

fn node_cap(explicit: Option<usize>) -> usize {
    explicit
        .or_else(|| {
            std::env::var("CTSCHEME_NODE_CAP")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(analyze::DEFAULT_NODE_CAP)
}

fn load_scheme(path: &Path) -> Result<CongruenceScheme, CliError> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    Ok(deserialize(&text)?)
}

fn write_scheme(path: &Path, scheme: &CongruenceScheme) -> Result<(), CliError> {
    fs::write(path, serialize(scheme)).map_err(|e| io_error(path, e))
}

fn summary_line(s: &CongruenceScheme) -> String {
    format!(
        "{} {}-scheme with {} states modulo {}",
        s.kind(),
        s.modulus().p(),
        s.num_states(),
        s.modulus().m()
    )
}

fn parse_polys(
    def: &SequenceDef,
    modulus: Modulus,
) -> Result<(LaurentPoly, LaurentPoly), CliError> {
    def.parse(modulus).map_err(usage)
}

fn format_set(values: &[u64]) -> String {
    let inner: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    format!("{{{}}}", inner.join(", "))
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("scheme");
    path.with_file_name(format!("{stem}{suffix}.json"))
}

fn run(cmd: Cmd) -> Result<(), CliError> {
    match cmd {
        Cmd::Compute {
            kind,
            input,
            p,
            r,
            no_symmetry,
            max_states,
            output,
        } => {
            let def = input.resolve()?;
            let modulus = Modulus::new(p, r).map_err(usage)?;
            let (pp, qq) = parse_polys(&def, modulus)?;
            let opts = ComputeOptions {
                use_symmetry: !no_symmetry,
                max_states,
            };
            let scheme = compute_scheme(&pp, &qq, kind.into(), &opts)?;
            let scheme = scheme.with_meta(ctscheme::SchemeMeta {
                p_text: def.p_text.clone(),
                q_text: def.q_text.clone(),
                vars: def.vars.clone(),
                symmetry_folded: !no_symmetry,
            });
            let path = output.unwrap_or_else(|| PathBuf::from(format!("{}-{p}-{r}.json", def.name)));
            write_scheme(&path, &scheme)?;
            println!("{}", summary_line(&scheme));
            Ok(())
        }
        Cmd::Nth { scheme, index } => {
            let s = load_scheme(&scheme)?;
            let n: BigIndex = index.parse().map_err(usage)?;
            println!("{}", analyze::nth_term(&s, &n));
            Ok(())
        }
        Cmd::Values {
            scheme,
            impossible,
            cap,
        } => {
            let s = load_scheme(&scheme)?;
            let values = analyze::value_set(&s, node_cap(cap))?;
            if impossible {
                println!("{}", format_set(&values.impossible()));
            } else {
                let attained: Vec<u64> = values.possible().iter().copied().collect();
                println!("{}", format_set(&attained));
            }
            Ok(())
        }
        Cmd::Valuation { scheme, output } => {
            let s = load_scheme(&scheme)?;
            let v = analyze::valuation_scheme(&s)?;
            let path = output.unwrap_or_else(|| with_suffix(&scheme, "-valuation"));
            write_scheme(&path, &v)?;
            println!("{}", summary_line(&v));
            Ok(())
        }
        Cmd::Minimize { scheme, output } => {
            let s = load_scheme(&scheme)?;
            let min = minimize(&s)?;
            let path = output.unwrap_or_else(|| with_suffix(&scheme, "-min"));
            write_scheme(&path, &min)?;
            println!("{}", summary_line(&min));
            println!("automaton nodes: {}", min.automaton_nodes());
            Ok(())
        }
        Cmd::First {
            scheme,
            value,
            max_digits,
        } => {
            let s = load_scheme(&scheme)?;
            match analyze::first_index(&s, value, max_digits, node_cap(None))? {
                Some(ix) => println!("{ix}"),
                None => println!("not attained"),
            }
            Ok(())
        }
        Cmd::Dot { scheme, output } => {
            let s = load_scheme(&scheme)?;
            let dot = export_dot(&s)?;
            match output {
                Some(path) => fs::write(&path, dot).map_err(|e| io_error(&path, e))?,
                None => print!("{dot}"),
            }
            Ok(())
        }
        Cmd::Crt { pairs } => {
            let mut parts = Vec::with_capacity(pairs.len());
            for pair in &pairs {
                let (v, m) = pair
                    .split_once(':')
                    .ok_or_else(|| CliError::usage(format!("`{pair}` is not V:M")))?;
                let v: u64 = v.parse().map_err(|_| {
                    CliError::usage(format!("`{pair}`: residue is not an integer"))
                })?;
                let m: u64 = m.parse().map_err(|_| {
                    CliError::usage(format!("`{pair}`: modulus is not an integer"))
                })?;
                let modulus = prime_power_modulus(m)
                    .ok_or_else(|| CliError::usage(format!("{m} is not a prime power")))?;
                parts.push(modulus.residue(v));
            }
            let (value, modulus) = analyze::crt_combine(&parts)?;
            println!("{value} mod {modulus}");
            Ok(())
        }
        Cmd::Scan {
            seq,
            r,
            primes,
            witness,
            jobs,
            output,
        } => {
            let def = catalog::builtin(&seq).map_err(usage)?;
            let (lo, hi) = primes
                .split_once("..")
                .and_then(|(a, b)| Some((a.parse().ok()?, b.parse().ok()?)))
                .ok_or_else(|| CliError::usage("--primes expects LO..HI"))?;
            let opts = ScanOptions {
                witness,
                jobs,
                node_cap: node_cap(None),
            };
            println!("{:>6} {:>8} {:>14} {:>14} {:>9}", "prime", "states", "zero mod p^r", "witness", "ms");
            let reports =
                analyze::divisibility_scan_with(&def, lo, hi, r, 0, &opts, |rep| {
                    println!("{}", scan_row(rep));
                });
            if let Some(path) = output {
                let mut file = fs::File::create(&path).map_err(|e| io_error(&path, e))?;
                for rep in &reports {
                    let line = serde_json::to_string(rep)
                        .map_err(|e| CliError::usage(format!("serialize report: {e}")))?;
                    writeln!(file, "{line}").map_err(|e| io_error(&path, e))?;
                }
            }
            Ok(())
        }
        Cmd::Census { seq, p, rmax } => {
            let def = catalog::builtin(&seq).map_err(usage)?;
            let rows = analyze::residue_census(&def, p, rmax, node_cap(None))?;
            println!("{:>3} {:>10} {:>8} {:>8}", "r", "N(r)", "A(r)", "P(r)");
            for row in rows {
                println!(
                    "{:>3} {:>10} {:>8} {:>8.3}",
                    row.r, row.missed, row.fresh, row.proportion
                );
            }
            Ok(())
        }
    }
}

fn scan_row(rep: &ScanReport) -> String {
    let witness = rep
        .witness
        .as_ref()
        .map_or_else(|| "-".to_string(), |w| w.to_string());
    let zero = match &rep.error {
        Some(e) => format!("error: {e}"),
        None if rep.zero_attained => "yes".to_string(),
        None => "no".to_string(),
    };
    format!(
        "{:>6} {:>8} {:>14} {:>14} {:>9}",
        rep.prime, rep.states_scaling, zero, witness, rep.elapsed_ms
    )
}

/// Recognizes m = p^r and builds the corresponding modulus.
fn prime_power_modulus(m: u64) -> Option<Modulus> {
    if m < 2 {
        return None;
    }
    for r in (1..=63u32).rev() {
        let p = (m as f64).powf(1.0 / r as f64).round() as u64;
        for candidate in p.saturating_sub(1)..=p + 1 {
            if candidate >= 2 && candidate.checked_pow(r) == Some(m) {
                if let Ok(modulus) = Modulus::new(candidate, r) {
                    return Some(modulus);
                }
            }
        }
    }
    None
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // keep clap's rendered message but use exit code 1 for usage
            let is_help = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if is_help {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
