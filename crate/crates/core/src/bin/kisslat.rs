use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use kisslat::asymptotics::{self, BoundsSnapshot};
use kisslat::binary_codes::{analyze, BinaryCode};
use kisslat::certify::{self, CertifyOptions, Format};
use kisslat::concatenation::{concat_build, ConcatSpec};
use kisslat::finite_field::{
    find_self_dual_basis, find_self_dual_basis_seeded, parse_modulus, FieldTable, SelfDualBasis,
};
use kisslat::lattice::{
    build_span_basis, enumerate_short, verify_lattice_code, EnumerationOptions, LatticeBasis,
    VerifyOptions,
};
use kisslat::outer_codes::{rho0, rho0_at_genus, GrsCode};
use kisslat::Error;

#[derive(Parser)]
#[command(
    name = "kisslat",
    version,
    about = "Lattices from binary self-orthogonal codes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Finite field utilities.
    #[command(subcommand)]
    Field(FieldCmd),
    /// Binary code utilities.
    #[command(subcommand)]
    Code(CodeCmd),
    /// Outer (GRS) code utilities.
    #[command(subcommand)]
    Outer(OuterCmd),
    /// Concatenate an outer GRS code with an inner binary code.
    Concat(ConcatArgs),
    /// Lattice construction and enumeration.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Asymptotic bound calculations.
    #[command(subcommand)]
    Bounds(BoundsCmd),
    /// Run the full pipeline on a code file and emit a certificate.
    Certify(CertifyArgs),
}

#[derive(Subcommand)]
enum FieldCmd {
    /// Print a trace-orthonormal basis of GF(2^m) over GF(2).
    Selfdual {
        #[arg(long)]
        m: u32,
        /// Defining polynomial in hex, including the leading term.
        #[arg(long)]
        modulus: Option<String>,
        /// Seed for the randomized search (m >= 4).
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Subcommand)]
enum CodeCmd {
    /// Dimension, distance, weight distribution and self-orthogonality as JSON.
    Analyze { file: PathBuf },
}

#[derive(Subcommand)]
enum OuterCmd {
    /// Self-orthogonality and distance of a GRS code file as JSON.
    Check { file: PathBuf },
    /// Threshold rate for a square field size q.
    Rho0 {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        genus: Option<u64>,
    },
}

#[derive(Args)]
struct ConcatArgs {
    #[arg(long)]
    outer: PathBuf,
    #[arg(long)]
    inner: PathBuf,
    #[arg(long)]
    basis: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum LatticeCmd {
    /// Build the Hermite basis of the span lattice of a code.
    Build {
        code: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Count nonzero vectors of norm at most the cap.
    Short {
        basis: PathBuf,
        #[arg(long)]
        cap: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Lift the dimension and cap guards.
        #[arg(long)]
        force: bool,
    },
    /// Check closure, min norm and kissing number for a self-orthogonal code.
    Verify {
        code: PathBuf,
        #[arg(long)]
        cap: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
}

#[derive(Subcommand)]
enum BoundsCmd {
    /// Evaluate E_s(delta) and its normalized exponent.
    Eval {
        #[arg(long)]
        s: u32,
        #[arg(long)]
        delta: f64,
    },
    /// Zeros of E_s on (0, 1).
    Zeros {
        #[arg(long)]
        s: u32,
    },
    /// All constants of the bound as JSON.
    Constants,
    /// Planning table for the tower family as CSV.
    Table {
        #[arg(long)]
        kmax: u32,
    },
}

#[derive(Args)]
struct CertifyArgs {
    file: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    cap: Option<u64>,
    /// Write the certificate here instead of stdout.
    #[arg(long)]
    emit: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: String,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, default_value_t = 1000)]
    closure_trials: u64,
    /// Record per-stage wall-clock times in the certificate.
    #[arg(long)]
    timings: bool,
    /// Lift the dimension and cap guards.
    #[arg(long)]
    force: bool,
}

#[derive(Debug)]
enum CliError {
    Io(PathBuf, std::io::Error),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn print_json<T: Serialize>(value: &T) {
    let v = serde_json::to_value(value).expect("serializable");
    println!(
        "{}",
        serde_json::to_string_pretty(&v).expect("serializable")
    );
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Field(FieldCmd::Selfdual { m, modulus, seed }) => {
            let field = match modulus {
                Some(hex) => FieldTable::new(m, parse_modulus(&hex)?)?,
                None => FieldTable::with_default_modulus(m)?,
            };
            let basis = match seed {
                Some(s) => find_self_dual_basis_seeded(&field, s)?,
                None => find_self_dual_basis(&field)?,
            };
            print!("{}", basis.to_text());
        }
        Command::Code(CodeCmd::Analyze { file }) => {
            let code = BinaryCode::parse(&read(&file)?)?;
            print_json(&analyze(&code)?);
        }
        Command::Outer(OuterCmd::Check { file }) => {
            let grs = GrsCode::parse(&read(&file)?)?;
            let d = grs.min_distance()?;
            let n = grs.len();
            let k = grs.dimension();
            print_json(&json!({
                "q": grs.field().size(),
                "N": n,
                "K": k,
                "self_orthogonal": grs.is_euclidean_self_orthogonal(),
                "min_distance": d,
                "mds": d.map(|d| d == n - k + 1),
            }));
        }
        Command::Outer(OuterCmd::Rho0 { q, genus }) => {
            let t = match genus {
                Some(g) => rho0_at_genus(q, g)?,
                None => rho0(q)?,
            };
            print_json(&t);
        }
        Command::Concat(args) => {
            let outer = GrsCode::parse(&read(&args.outer)?)?;
            let inner = BinaryCode::parse(&read(&args.inner)?)?;
            let basis = SelfDualBasis::parse(&read(&args.basis)?, Some(outer.field()))?;
            let spec = ConcatSpec::new(outer, basis, inner)?;
            let pre = spec.preconditions();
            if !pre.guarantee_self_orthogonal() {
                eprintln!("warning: preconditions for a self-orthogonal image do not hold");
            }
            write(&args.out, &concat_build(&spec)?.to_text())?;
        }
        Command::Lattice(LatticeCmd::Build { code, out }) => {
            let code = BinaryCode::parse(&read(&code)?)?;
            write(&out, &build_span_basis(&code)?.to_text())?;
        }
        Command::Lattice(LatticeCmd::Short {
            basis,
            cap,
            workers,
            force,
        }) => {
            let basis = LatticeBasis::parse(&read(&basis)?)?;
            let report = enumerate_short(
                &basis,
                cap,
                EnumerationOptions {
                    workers,
                    allow_large: force,
                },
            )?;
            print_json(&report);
        }
        Command::Lattice(LatticeCmd::Verify {
            code,
            cap,
            seed,
            workers,
        }) => {
            let code = BinaryCode::parse(&read(&code)?)?;
            let v = verify_lattice_code(
                &code,
                VerifyOptions {
                    cap,
                    seed,
                    enumeration: EnumerationOptions {
                        workers,
                        allow_large: false,
                    },
                    ..VerifyOptions::default()
                },
            )?;
            print_json(&json!({
                "d": v.d,
                "A_d": v.a_d,
                "min_norm": v.short.min_norm,
                "kissing": v.short.kissing,
                "set_closed_sampled": v.set_closed_sampled,
                "norm_equals_d": v.norm_equals_d,
                "kissing_ge_Ad": v.kissing_ge_ad,
                "counterexamples": v.closure.counterexamples,
            }));
        }
        Command::Bounds(BoundsCmd::Eval { s, delta }) => {
            print_json(&json!({
                "s": s,
                "delta": delta,
                "E": asymptotics::exponent(s, delta)?,
                "E_over_q": asymptotics::rate_exponent(s, delta)?,
            }));
        }
        Command::Bounds(BoundsCmd::Zeros { s }) => {
            let (lo, hi) = asymptotics::exponent_zeros(s)?;
            print_json(&json!({ "s": s, "low": lo, "high": hi }));
        }
        Command::Bounds(BoundsCmd::Constants) => {
            print_json(&BoundsSnapshot::compute());
        }
        Command::Bounds(BoundsCmd::Table { kmax }) => {
            print!(
                "{}",
                asymptotics::param_table_csv(&asymptotics::param_table(kmax)?)
            );
        }
        Command::Certify(args) => {
            let format: Format = args.format.parse()?;
            let text = read(&args.file)?;
            let cert = certify::certify(
                &text,
                CertifyOptions {
                    seed: args.seed,
                    cap: args.cap,
                    closure_trials: args.closure_trials,
                    workers: args.workers,
                    allow_large: args.force,
                    record_timings: args.timings,
                    ..CertifyOptions::default()
                },
            )?;
            for w in &cert.warnings {
                eprintln!("warning: {w}");
            }
            let out = certify::emit(&cert, format);
            match args.emit {
                Some(path) => write(&path, &out)?,
                None => print!("{out}"),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
