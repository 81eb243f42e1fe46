//! `gapcert`: spectral enclosures for relatively bounded perturbations.

mod commands;
mod error;
mod params;

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{Map, Value};

use commands::Output;
use error::{CliError, Result};

#[derive(Parser)]
#[command(name = "gapcert", version, about = "Certified spectral enclosures and their finite-dimensional checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hyperbola enclosure, off-real resolvent bound and semibounded lower bound
    Enclose(Common),
    /// Perturbed spectral gap strip
    Strip(Common),
    /// Resolvent norm bound off the real axis or inside a gap strip
    Resolvent(Common),
    /// Symmetric gap around zero
    SymmetricGap(Common),
    /// Sector cover for a family of relative bounds
    GkCover(Common),
    /// Strip of an isolated eigenvalue and its multiplicity
    EigStrip(Common),
    /// Gap criteria for a sequence of spectral gaps
    Gaps(Common),
    /// Band-gap ratio for per-gap constants
    Kappa(Common),
    /// Necessary growth condition on the gap sequence
    GrowthCheck(Common),
    /// Power-law gap sequence example
    Powerlaw(Common),
    /// Block operator matrix results
    Structured(Common),
    /// Two-dimensional Dirac envelope
    DiracEnvelope(Common),
    /// Three-dimensional Dirac operator with Coulomb-type potential
    Coulomb(Common),
    /// Dirac operator on a manifold
    Manifold(Common),
    /// Two-channel Hamiltonian lower bound
    TwoChannel(Common),
    /// Check certified regions against random matrices
    Verify(Common),
    /// Boundary samples of a region
    SampleRegion(Common),
}

#[derive(Args)]
struct Common {
    /// Parameter document (file path, or - for stdin)
    #[arg(long, value_name = "FILE")]
    json: Option<String>,
    /// Write the tabular result as CSV to this file
    #[arg(long, value_name = "FILE")]
    csv: Option<PathBuf>,
    /// Write the JSON result to this file instead of stdout
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
    /// Parameters as --key value pairs
    #[arg(trailing_var_arg = true, allow_hyphen_values = true, value_name = "PARAMS")]
    params: Vec<String>,
}

type Handler = fn(&Map<String, Value>) -> Result<Output>;

impl Command {
    fn split(self) -> (Handler, Common) {
        match self {
            Command::Enclose(c) => (commands::enclose, c),
            Command::Strip(c) => (commands::strip, c),
            Command::Resolvent(c) => (commands::resolvent, c),
            Command::SymmetricGap(c) => (commands::symmetric_gap, c),
            Command::GkCover(c) => (commands::gk_cover, c),
            Command::EigStrip(c) => (commands::eig_strip, c),
            Command::Gaps(c) => (commands::gaps, c),
            Command::Kappa(c) => (commands::kappa, c),
            Command::GrowthCheck(c) => (commands::growth_check, c),
            Command::Powerlaw(c) => (commands::powerlaw, c),
            Command::Structured(c) => (commands::structured, c),
            Command::DiracEnvelope(c) => (commands::dirac_envelope, c),
            Command::Coulomb(c) => (commands::coulomb, c),
            Command::Manifold(c) => (commands::manifold, c),
            Command::TwoChannel(c) => (commands::two_channel, c),
            Command::Verify(c) => (commands::verify, c),
            Command::SampleRegion(c) => (commands::sample_region_cmd, c),
        }
    }
}

fn read_document(source: &str) -> Result<Value> {
    let text = if source == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| CliError::Io(format!("stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(source).map_err(|e| CliError::Io(format!("{source}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Param(format!("{source}: {e}")))
}

/// Output options given after the first parameter land in the trailing list;
/// this pulls them back out.
fn take_reserved(common: &mut Common) -> Result<()> {
    let mut rest = Vec::with_capacity(common.params.len());
    let mut words = std::mem::take(&mut common.params).into_iter();
    while let Some(w) = words.next() {
        let (key, inline) = match w.split_once('=') {
            Some((k, v)) => (k.to_string(), Some(v.to_string())),
            None => (w.clone(), None),
        };
        let slot = match key.as_str() {
            "--json" => &mut common.json,
            "--csv" | "--output" => {
                let v = inline.or_else(|| words.next()).ok_or_else(|| CliError::Param(format!("{key} needs a value")))?;
                let path = Some(PathBuf::from(v));
                if key == "--csv" {
                    common.csv = path;
                } else {
                    common.output = path;
                }
                continue;
            }
            _ => {
                rest.push(w);
                continue;
            }
        };
        let v = inline.or_else(|| words.next()).ok_or_else(|| CliError::Param(format!("{key} needs a value")))?;
        *slot = Some(v);
    }
    common.params = rest;
    Ok(())
}

fn write_csv(path: &PathBuf, table: &commands::Table) -> Result<()> {
    let io_err = |e: csv::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io_err)?;
    w.write_record(&table.header).map_err(io_err)?;
    for row in &table.rows {
        w.write_record(row).map_err(io_err)?;
    }
    w.flush().map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<()> {
    let (command, mut common) = cli.command.split();
    take_reserved(&mut common)?;
    let document = common.json.as_deref().map(read_document).transpose()?;
    let flags = params::parse_pairs(&common.params)?;
    let merged = params::combine(document, flags)?;
    let out = command(&merged)?;
    if let Some(path) = &common.csv {
        let table = out.table.as_ref().ok_or_else(|| CliError::Param("this command has no tabular output".into()))?;
        write_csv(path, table)?;
    }
    let text = serde_json::to_string_pretty(&out.json).map_err(|e| CliError::Numerical(e.to_string()))?;
    match &common.output {
        Some(path) => fs::write(path, text + "\n").map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => match writeln!(io::stdout().lock(), "{text}") {
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(CliError::Io(format!("stdout: {e}"))),
            _ => Ok(()),
        },
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gapcert: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
