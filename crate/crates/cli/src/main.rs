use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use posetal::enumerate::{
    catalog, enumerate_admissible, enumerate_collapses, enumerate_contractions, enumerate_convex_subsets,
    enumerate_downsets, CatalogKind, KernelDatum,
};
use posetal::format::{self, Load};
use posetal::incidence::{Coalgebra, Flavor, Monomial};
use posetal::suites::{run_suite, Suite};
use posetal::{canonical_form, quotient, quotient_grid, species, CheckReport, Error, Relation};

#[derive(Parser)]
#[command(name = "posetal", version, about = "Contractions, collapses and incidence bialgebras of finite posets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the maps of a class out of a poset (or preorder), one JSON object per line.
    Enumerate {
        #[arg(long, value_enum)]
        kind: EnumKind,
        #[arg(long)]
        input: PathBuf,
    },
    /// Comultiply the object in a file.
    Coproduct {
        #[arg(long, value_enum)]
        flavor: FlavorArg,
        /// all, trees, linear, preorders or discrete; defaults to the flavor's natural species.
        #[arg(long)]
        species: Option<String>,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: OutputFormat,
    },
    /// Run an exhaustive check suite; exits 1 on any failure.
    Check {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long, env = "POSETAL_MAX_SIZE")]
        max_size: Option<usize>,
    },
    /// List isomorphism classes of a given size.
    Catalog {
        #[arg(long, value_enum)]
        kind: CatalogArg,
        #[arg(long)]
        n: usize,
    },
    /// Build the quotient grid of a chain of admissible inclusions.
    Grid {
        #[arg(long)]
        chain: PathBuf,
    },
    /// Export the Hasse diagram of a relation in DOT.
    Export {
        #[arg(long)]
        dot: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum EnumKind {
    Contractions,
    Collapses,
    Admissible,
    Downsets,
    Convex,
}

#[derive(Clone, Copy, ValueEnum)]
enum FlavorArg {
    #[value(name = "K", alias = "k")]
    K,
    #[value(name = "D", alias = "d")]
    D,
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "R", alias = "r")]
    R,
}

impl From<FlavorArg> for Flavor {
    fn from(f: FlavorArg) -> Self {
        match f {
            FlavorArg::K => Flavor::K,
            FlavorArg::D => Flavor::D,
            FlavorArg::A => Flavor::A,
            FlavorArg::R => Flavor::R,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Pretty,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Coassoc,
    Bialgebra,
    Comodule,
    Bijection,
    Culf,
    Closure,
    GlueUnique,
    GridCoherence,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum CatalogArg {
    Poset,
    Preorder,
    ConnectedPoset,
    ConnectedPreorder,
}

impl From<CatalogArg> for CatalogKind {
    fn from(k: CatalogArg) -> Self {
        match k {
            CatalogArg::Poset => CatalogKind::Poset,
            CatalogArg::Preorder => CatalogKind::Preorder,
            CatalogArg::ConnectedPoset => CatalogKind::ConnectedPoset,
            CatalogArg::ConnectedPreorder => CatalogKind::ConnectedPreorder,
        }
    }
}

/// Failure modes and their exit codes: 2 for bad input, 1 for a failed
/// check.
enum Failure {
    Input(String),
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn key(rel: &Relation) -> Result<String, Failure> {
    Ok(canonical_form(rel)?.key())
}

fn kernel_line(d: &KernelDatum) -> Result<Value, Failure> {
    let blocks: Vec<Vec<usize>> = d.kernel.blocks().iter().map(|b| b.to_vec()).collect();
    let fibres = d.fibres.iter().map(key).collect::<Result<Vec<_>, _>>()?;
    Ok(json!({
        "kernel": blocks,
        "quotient": format::to_json(&d.quotient),
        "quotient_key": key(&d.quotient)?,
        "fibres": fibres,
    }))
}

fn enumerate(kind: EnumKind, input: &Path) -> Result<Vec<Value>, Failure> {
    let text = read(input)?;
    let load = if matches!(kind, EnumKind::Admissible) { Load::Preorder } else { Load::Poset };
    let rel = format::parse_relation(&text, load)?;
    match kind {
        EnumKind::Contractions => enumerate_contractions(&rel)?.iter().map(kernel_line).collect(),
        EnumKind::Collapses => enumerate_collapses(&rel)?.iter().map(kernel_line).collect(),
        EnumKind::Admissible => enumerate_admissible(&rel)?
            .iter()
            .map(|sub| {
                let q = quotient(&rel, sub)?;
                Ok(json!({
                    "sub_pairs": sub.pairs().map(|(i, j)| [i, j]).collect::<Vec<_>>(),
                    "sub_key": key(sub)?,
                    "quotient": format::to_json(&q),
                    "quotient_key": key(&q)?,
                }))
            })
            .collect(),
        EnumKind::Downsets => Ok(enumerate_downsets(&rel)?
            .iter()
            .map(|c| json!({"downset": c.downset, "upset": c.up().to_vec()}))
            .collect()),
        EnumKind::Convex => {
            Ok(enumerate_convex_subsets(&rel)?.iter().map(|s| json!({"subset": s.to_vec()})).collect())
        }
    }
}

fn coproduct(flavor: Flavor, species_name: Option<&str>, input: &Path, fmt: OutputFormat) -> Result<String, Failure> {
    let spec = match species_name {
        None => flavor.default_species(),
        Some(name) => species::by_name(name).ok_or_else(|| {
            Failure::Input(format!("unknown species `{name}` (expected one of {})", species::NAMES.join(", ")))
        })?,
    };
    let coalgebra = Coalgebra::new(flavor, spec)?;
    let load = if flavor == Flavor::A { Load::Preorder } else { Load::Poset };
    let rels = format::parse_relations(&read(input)?, load)?;
    let mut m = Monomial::unit();
    for rel in &rels {
        m = m.mul(&coalgebra.monomial_of(rel)?);
    }
    let delta = coalgebra.delta(&m)?;
    Ok(match fmt {
        OutputFormat::Json => delta.to_json().to_string(),
        OutputFormat::Pretty => format!("Δ({m}) = {delta}"),
    })
}

fn check(suite: SuiteArg, max_size: Option<usize>) -> Result<Vec<CheckReport>, Failure> {
    let suites: Vec<Suite> = match suite {
        SuiteArg::All => Suite::ALL.to_vec(),
        SuiteArg::Coassoc => vec![Suite::Coassoc],
        SuiteArg::Bialgebra => vec![Suite::Bialgebra],
        SuiteArg::Comodule => vec![Suite::Comodule],
        SuiteArg::Bijection => vec![Suite::Bijection],
        SuiteArg::Culf => vec![Suite::Culf],
        SuiteArg::Closure => vec![Suite::Closure],
        SuiteArg::GlueUnique => vec![Suite::GlueUnique],
        SuiteArg::GridCoherence => vec![Suite::GridCoherence],
    };
    let mut reports = Vec::new();
    for s in suites {
        reports.extend(run_suite(s, max_size)?);
    }
    Ok(reports)
}

fn report_line(r: &CheckReport) -> Value {
    json!({"suite": r.suite, "passed": r.passed(), "checked": r.checked, "failures": r.failures})
}

fn run(cli: Cli, out: &mut impl Write) -> Result<(), Failure> {
    match cli.command {
        Command::Enumerate { kind, input } => {
            for line in enumerate(kind, &input)? {
                writeln!(out, "{line}")?;
            }
        }
        Command::Coproduct { flavor, species, input, format } => {
            writeln!(out, "{}", coproduct(flavor.into(), species.as_deref(), &input, format)?)?;
        }
        Command::Check { suite, max_size } => {
            let reports = check(suite, max_size)?;
            for r in &reports {
                writeln!(out, "{}", report_line(r))?;
            }
            if !reports.iter().all(CheckReport::passed) {
                return Err(Failure::Check);
            }
        }
        Command::Catalog { kind, n } => {
            for entry in catalog(kind.into(), n)? {
                let line = json!({
                    "key": entry.class.key(),
                    "aut_count": entry.class.aut_count(),
                    "rel": format::to_json(&entry.representative),
                });
                writeln!(out, "{line}")?;
            }
        }
        Command::Grid { chain } => {
            let chain = format::parse_relations(&read(&chain)?, Load::Preorder)?;
            let grid = quotient_grid(&chain)?;
            let (verify, coherence) = (grid.verify(), grid.coherence());
            let coherent = verify.passed() && coherence.passed();
            let line = json!({
                "grid": grid,
                "verify": report_line(&verify),
                "coherence": report_line(&coherence),
                "coherent": coherent,
            });
            writeln!(out, "{line}")?;
            if !coherent {
                return Err(Failure::Check);
            }
        }
        Command::Export { dot } => {
            let rel = format::parse_relation(&read(&dot)?, Load::Preorder)?;
            write!(out, "{}", format::to_dot(&rel)?)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = run(cli, &mut out);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
