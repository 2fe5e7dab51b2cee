//! Command-line front end. One invocation, one machine-readable document or
//! literal on standard output; diagnostics go to standard error. Parse
//! failures exit 2, domain failures exit 1.

use clap::{Parser, Subcommand};
use num_rational::Ratio;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use volog::assembly::annulus_interpolate;
use volog::document::{self, DocumentError};
use volog::padic::{plog, teichmuller, LogBranch, PadicContext, PadicError};
use volog::selftest;
use volog::tate::{TateCurve, TatePoint};

#[derive(Parser)]
#[command(name = "volog", version, about = "p-adic integration on curves with semi-stable reduction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// p-adic logarithm of a literal under a chosen branch.
    Log {
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 10)]
        prec: u32,
        /// Value of log(p); 0 selects the Iwasawa branch.
        #[arg(long)]
        branch: String,
        z: String,
    },
    /// Teichmüller lift of a unit literal.
    Teichmuller {
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 10)]
        prec: u32,
        z: String,
    },
    /// Split a cochain document into harmonic + coboundary parts.
    Decompose {
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 10)]
        prec: u32,
        /// Cochain document; "-" reads standard input.
        file: PathBuf,
    },
    /// Replace every edge of a graph document by a path of M edges.
    Subdivide {
        #[arg(short, long)]
        m: u32,
        /// Graph document; "-" reads standard input.
        file: PathBuf,
    },
    /// Normalize a family of primitives: per-vertex offsets plus the
    /// harmonic defect.
    Normalize {
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 10)]
        prec: u32,
        /// Cochain document; "-" reads standard input.
        file: PathBuf,
    },
    /// Value of the corrected primitive at parameter T across an annulus.
    Interpolate {
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 10)]
        prec: u32,
        #[arg(long)]
        base: String,
        #[arg(long)]
        harmonic: String,
        /// Position in [0, 1] as a rational literal.
        #[arg(long)]
        t: String,
    },
    /// Newton polygon of a Laurent document.
    Newton {
        /// Laurent document; "-" reads standard input.
        file: PathBuf,
    },
    /// Residue of dlog f on the standard annulus.
    Residue {
        /// Laurent document; "-" reads standard input.
        file: PathBuf,
    },
    /// Compare the residue with the boundary-order difference.
    LemmaCheck {
        /// Laurent document; "-" reads standard input.
        file: PathBuf,
    },
    /// Vologodsky logarithm on the Tate curve K^x / q^Z.
    TateIntegrate {
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 10)]
        prec: u32,
        #[arg(long)]
        q: String,
        #[arg(long)]
        z: String,
        /// Value of log(p); 0 selects the Iwasawa branch.
        #[arg(long)]
        branch: String,
        /// Emit the intermediate cochain, harmonic part and gamma as JSON.
        #[arg(long)]
        explain: bool,
    },
    /// Run the acceptance suite and report per-criterion results.
    Selftest {
        #[arg(long, hide = true)]
        corrupt_branch: bool,
    },
}

enum CliError {
    Parse(String),
    Domain(String),
}

impl From<DocumentError> for CliError {
    fn from(e: DocumentError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<PadicError> for CliError {
    fn from(e: PadicError) -> Self {
        match e {
            PadicError::Parse { .. } => CliError::Parse(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

macro_rules! domain_errors {
    ($($ty:ty),*) => {$(
        impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError::Domain(e.to_string())
            }
        }
    )*};
}

domain_errors!(
    volog::graph::GraphError,
    volog::laurent::LaurentError,
    volog::tate::TateError,
    volog::assembly::AssemblyError
);

fn main() {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => {}
        Err(CliError::Domain(message)) => {
            eprintln!("error: {message}");
            std::process::exit(1);
        }
        Err(CliError::Parse(message)) => {
            eprintln!("error: {message}");
            std::process::exit(2);
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Log {
            prime,
            prec,
            branch,
            z,
        } => {
            let ctx = context(prime, prec)?;
            let branch = parse_branch(&ctx, &branch)?;
            let z = literal(&ctx, "z", &z)?;
            println!("{}", plog(&z, &branch)?);
        }
        Command::Teichmuller { prime, prec, z } => {
            let ctx = context(prime, prec)?;
            let z = literal(&ctx, "z", &z)?;
            println!("{}", teichmuller(&z, prec)?);
        }
        Command::Decompose { prime, prec, file } => {
            let ctx = context(prime, prec)?;
            let (text, base_dir) = read_input(&file)?;
            let cochain = document::parse_cochain(&text, &ctx, base_dir.as_deref())?;
            let (harmonic, gamma) = cochain.decompose()?;
            emit(&document::decomposition_to_value(&harmonic, &gamma));
        }
        Command::Subdivide { m, file } => {
            let (text, _) = read_input(&file)?;
            let graph = document::parse_graph(&text)?;
            let (subdivided, edge_map) = graph.subdivide(m)?;
            emit(&document::subdivision_to_value(&graph, &subdivided, &edge_map));
        }
        Command::Normalize { prime, prec, file } => {
            let ctx = context(prime, prec)?;
            let (text, base_dir) = read_input(&file)?;
            let cochain = document::parse_cochain(&text, &ctx, base_dir.as_deref())?;
            let family = volog::assembly::PrimitiveFamily::new(cochain, None)?;
            let (offsets, harmonic) = family.normalize()?;
            emit(&document::normalization_to_value(&offsets, &harmonic));
        }
        Command::Interpolate {
            prime,
            prec,
            base,
            harmonic,
            t,
        } => {
            let ctx = context(prime, prec)?;
            let base = literal(&ctx, "base", &base)?;
            let harmonic = literal(&ctx, "harmonic", &harmonic)?;
            let t = Ratio::<i64>::from_str(t.trim())
                .map_err(|_| CliError::Parse(format!("--t: {t} is not a rational literal")))?;
            println!("{}", annulus_interpolate(&base, &harmonic, t)?);
        }
        Command::Newton { file } => {
            let (text, _) = read_input(&file)?;
            let f = document::parse_laurent(&text)?;
            emit(&document::polygon_to_value(&f.newton_polygon()?));
        }
        Command::Residue { file } => {
            let (text, _) = read_input(&file)?;
            let f = document::parse_laurent(&text)?;
            println!("{}", f.annulus_residue_dlog()?);
        }
        Command::LemmaCheck { file } => {
            let (text, _) = read_input(&file)?;
            let f = document::parse_laurent(&text)?;
            emit(&document::lemma_to_value(&f.lemma_check()?));
        }
        Command::TateIntegrate {
            prime,
            prec,
            q,
            z,
            branch,
            explain,
        } => {
            let ctx = context(prime, prec)?;
            let branch = parse_branch(&ctx, &branch)?;
            let q = literal(&ctx, "q", &q)?;
            let z = literal(&ctx, "z", &z)?;
            let curve = TateCurve::new(ctx, q)?;
            let point = TatePoint::new(z)?;
            let run = curve.integrate_explained(&point, &branch)?;
            if explain {
                let mut top = serde_json::Map::new();
                top.insert("cochain".into(), document::edge_value_map(&run.cochain));
                top.insert("harmonic".into(), document::edge_value_map(&run.harmonic));
                top.insert("gamma".into(), document::vertex_value_map(&run.gamma));
                top.insert(
                    "reduced".into(),
                    serde_json::Value::String(run.reduced.to_string()),
                );
                top.insert(
                    "vertex".into(),
                    serde_json::Value::String(
                        run.gamma.graph().vertex_name(run.vertex).to_string(),
                    ),
                );
                top.insert(
                    "result".into(),
                    serde_json::Value::String(run.result.to_string()),
                );
                emit(&serde_json::Value::Object(top));
            } else {
                println!("{}", run.result);
            }
        }
        Command::Selftest { corrupt_branch } => {
            let reports = selftest::run(corrupt_branch);
            print!("{}", selftest::render_reports(&reports));
            if !selftest::all_passed(&reports) {
                std::process::exit(1);
            }
        }
    }
    Ok(())
}

fn context(prime: u64, prec: u32) -> Result<PadicContext, CliError> {
    PadicContext::new(prime, prec).map_err(|e| CliError::Parse(format!("--prime: {e}")))
}

fn parse_branch(ctx: &PadicContext, text: &str) -> Result<LogBranch, CliError> {
    let constant = ctx
        .parse(text)
        .map_err(|e| CliError::Parse(format!("--branch: {e}")))?;
    Ok(LogBranch::new(constant))
}

fn literal(
    ctx: &PadicContext,
    name: &str,
    text: &str,
) -> Result<volog::padic::PadicNumber, CliError> {
    ctx.parse(text)
        .map_err(|e| CliError::Parse(format!("{name}: {e}")))
}

fn read_input(file: &Path) -> Result<(String, Option<PathBuf>), CliError> {
    if file == Path::new("-") {
        let text = std::io::read_to_string(std::io::stdin())
            .map_err(|e| CliError::Parse(format!("standard input: {e}")))?;
        Ok((text, None))
    } else {
        let text = document::read_document(file)?;
        Ok((text, file.parent().map(Path::to_path_buf)))
    }
}

fn emit(value: &serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string(value).expect("output documents serialize")
    );
}
