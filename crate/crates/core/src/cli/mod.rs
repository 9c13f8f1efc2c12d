//! The `rotkit` command-line workbench.
//!
//! Exit codes: 0 on success, 1 on a domain error (message on stderr),
//! 2 on a usage error.

pub mod plot;
pub mod records;

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::census::{
    exact_census_naive, exact_census_with, sample_census, CensusError, CensusOptions, Checkpoint, DEFAULT_MAX_EXACT,
};
use crate::classify::{
    classify_pair, common_diagonals, one_off_diagonals, reduce_fully, ClassifyError, Side, TreePairProblem,
};
use crate::combinatorics::{catalan, dihedral_class_count};
use crate::distance::{exact_distance, DistanceError, DEFAULT_SIZE_CAP};
use crate::stats::{fit_exponential, fit_power_cube, FitError, FitResult};
use crate::tree::{parse_tree, ParseTreeError};
use crate::triangulation::{
    enumerate_class_representatives, parse_triangulation, ParseTriangulationError, Triangulation,
};

use self::plot::PlotError;
use self::records::{read_table, write_census, write_samples, Column, RecordsError};

pub const THREADS_ENV: &str = "ROTKIT_THREADS";

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("tree: {0}")]
    Tree(#[from] ParseTreeError),
    #[error("triangulation: {0}")]
    Triangulation(#[from] ParseTriangulationError),
    #[error("a bare leaf has size 0; instances need at least one internal node")]
    EmptyTree,
    #[error("cannot tell the format of {0:?}: expected a tree starting with '(' or a triangulation `m:(a,b),...`")]
    Unrecognized(String),
}

/// Parses a tree or a triangulation string, detected by its first character.
pub fn parse_instance(text: &str) -> Result<Triangulation, InstanceError> {
    let trimmed = text.trim_start();
    match trimmed.chars().next() {
        Some('(') | Some('L') => {
            let tree = parse_tree(text)?;
            if tree.size() == 0 {
                return Err(InstanceError::EmptyTree);
            }
            Ok(tree.to_triangulation())
        }
        Some(c) if c.is_ascii_digit() => Ok(parse_triangulation(text)?),
        _ => Err(InstanceError::Unrecognized(text.chars().take(40).collect())),
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Distance(#[from] DistanceError),
    #[error(transparent)]
    Census(#[from] CensusError),
    #[error(transparent)]
    Fit(#[from] FitError),
    #[error(transparent)]
    Records(#[from] RecordsError),
    #[error(transparent)]
    Plot(#[from] PlotError),
    #[error("{path}: {source}")]
    File { path: PathBuf, source: std::io::Error },
    #[error("output: {0}")]
    Output(#[from] std::io::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

/// A single size `N` or an inclusive range `A..B` / `A-B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeSpec {
    pub first: u32,
    pub last: u32,
}

impl FromStr for SizeSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("{t:?}: {e}"));
        let (first, last) = match s.split_once("..").or_else(|| s.split_once('-')) {
            Some((a, b)) => (parse(a)?, parse(b)?),
            None => {
                let n = parse(s)?;
                (n, n)
            }
        };
        if first > last {
            return Err(format!("empty size range {first}..{last}"));
        }
        Ok(SizeSpec { first, last })
    }
}

impl SizeSpec {
    fn sizes(self) -> impl Iterator<Item = u32> {
        self.first..=self.last
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Exp,
    Powcube,
}

#[derive(Debug, Parser)]
#[command(
    name = "rotkit",
    version,
    about = "Census and sampling of difficult rotation distance instances"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the Catalan number C_n.
    Catalan {
        #[arg(long)]
        n: u32,
    },
    /// Count triangulations of the (n+2)-gon up to rotation and reflection.
    Classes {
        #[arg(long)]
        size: u32,
        /// Also list one representative per class with its orbit size.
        #[arg(long)]
        list: bool,
    },
    /// Classify a pair as HAS_COMMON, ONE_OFF or DIFFICULT.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Exact rotation distance by bidirectional search.
    Distance {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        /// Refuse sizes above this (memory grows with the Catalan numbers).
        #[arg(long, default_value_t = DEFAULT_SIZE_CAP)]
        cap: usize,
    },
    /// Reduce a pair by common edges and one-off moves; prints JSON.
    Reduce {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Exact census of all ordered pairs of one size (or a range `A..B`).
    Census {
        #[arg(long)]
        size: SizeSpec,
        #[arg(long, env = THREADS_ENV)]
        threads: Option<usize>,
        /// Classify every pair directly instead of using dihedral classes (sizes 3..=7).
        #[arg(long)]
        naive: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Largest size accepted (at most 15); sizes above 12 take hours.
        #[arg(long, default_value_t = DEFAULT_MAX_EXACT)]
        max_size: u32,
        /// Resume file recording finished class representatives (single size only).
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// Monte-Carlo census with uniformly random trees.
    Sample {
        #[arg(long)]
        size: SizeSpec,
        #[arg(long)]
        iters: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, env = THREADS_ENV)]
        threads: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit a decay or growth model to a census or sample CSV; prints JSON.
    Fit {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        column: Column,
        #[arg(long, value_enum, default_value = "exp")]
        model: ModelArg,
    },
    /// Plot ln(fraction) against size as SVG.
    Plot {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        column: Column,
        #[arg(long)]
        output: PathBuf,
        /// Overlay the exponential least-squares fit.
        #[arg(long)]
        fit: bool,
    },
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn pair_from(a: &str, b: &str) -> Result<TreePairProblem, CliError> {
    Ok(TreePairProblem::new(parse_instance(a)?, parse_instance(b)?)?)
}

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path).map(BufReader::new).map_err(|source| CliError::File {
        path: path.to_path_buf(),
        source,
    })
}

fn create(path: &Path) -> Result<File, CliError> {
    File::create(path).map_err(|source| CliError::File {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Serialize)]
struct PartJson {
    size: usize,
    s: String,
    t: String,
}

#[derive(Serialize)]
struct ReductionJson {
    one_off_moves: usize,
    parts: Vec<PartJson>,
}

fn warn_excluded(fit: &FitResult, err: &mut dyn Write) -> Result<(), CliError> {
    if !fit.excluded.is_empty() {
        writeln!(
            err,
            "warning: excluded zero-valued sizes {:?} from the fit",
            fit.excluded
        )?;
    }
    Ok(())
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Catalan { n } => writeln!(out, "{}", catalan(n))?,
        Command::Classes { size, list } => {
            writeln!(out, "{}", dihedral_class_count(size))?;
            if list {
                for (tri, orbit) in enumerate_class_representatives(size) {
                    writeln!(out, "{tri} {orbit}")?;
                }
            }
        }
        Command::Classify { a, b } => {
            let pair = pair_from(&a, &b)?;
            writeln!(out, "{}", classify_pair(&pair)?)?;
            for d in common_diagonals(&pair) {
                writeln!(out, "common {d}")?;
            }
            for w in one_off_diagonals(&pair) {
                let side = match w.side {
                    Side::S => "a",
                    Side::T => "b",
                };
                writeln!(out, "one-off {side} {} via {}", w.target, w.flipped)?;
            }
        }
        Command::Distance { a, b, cap } => {
            let pair = pair_from(&a, &b)?;
            let result = exact_distance(&pair, cap)?;
            writeln!(out, "{}", result.distance)?;
        }
        Command::Reduce { a, b } => {
            let pair = pair_from(&a, &b)?;
            let r = reduce_fully(&pair);
            let json = ReductionJson {
                one_off_moves: r.one_off_moves,
                parts: r
                    .parts
                    .iter()
                    .map(|p| PartJson {
                        size: p.size(),
                        s: p.s().to_string(),
                        t: p.t().to_string(),
                    })
                    .collect(),
            };
            writeln!(out, "{}", serde_json::to_string(&json)?)?;
        }
        Command::Census {
            size,
            threads,
            naive,
            out: path,
            max_size,
            checkpoint,
        } => {
            let options = CensusOptions {
                workers: threads.unwrap_or_else(default_threads),
                max_size,
            };
            let mut checkpoint = match checkpoint {
                Some(path) if size.first == size.last => Some(Checkpoint::open(path, size.first)?),
                Some(_) => {
                    writeln!(err, "warning: --checkpoint ignored for a size range")?;
                    None
                }
                None => None,
            };
            let mut rows = Vec::new();
            for n in size.sizes() {
                rows.push(if naive {
                    exact_census_naive(n)?
                } else {
                    exact_census_with(n, &options, checkpoint.as_mut())?
                });
            }
            write_census(&mut *out, &rows)?;
            if let Some(path) = path {
                write_census(create(&path)?, &rows)?;
            }
        }
        Command::Sample {
            size,
            iters,
            seed,
            threads,
            out: path,
        } => {
            let workers = threads.unwrap_or_else(default_threads);
            writeln!(err, "seed {seed}, {workers} worker(s)")?;
            let mut rows = Vec::new();
            for n in size.sizes() {
                rows.push(sample_census(n, iters, seed, workers)?);
            }
            write_samples(&mut *out, &rows)?;
            if let Some(path) = path {
                write_samples(create(&path)?, &rows)?;
            }
        }
        Command::Fit { input, column, model } => {
            let table = read_table(open(&input)?)?;
            let fit = match model {
                ModelArg::Exp => fit_exponential(&table.fractions(column))?,
                ModelArg::Powcube => fit_power_cube(&table.counts(column)?)?,
            };
            warn_excluded(&fit, err)?;
            writeln!(out, "{}", serde_json::to_string(&fit)?)?;
        }
        Command::Plot {
            input,
            column,
            output,
            fit,
        } => {
            let table = read_table(open(&input)?)?;
            let points = table.fractions(column);
            let fitted = if fit {
                let f = fit_exponential(&points)?;
                warn_excluded(&f, err)?;
                Some(f)
            } else {
                None
            };
            let title = format!("ln fraction of pairs ({}) by size", column.name());
            let svg = plot::render_svg(&points, fitted.as_ref(), &title)?;
            create(&output)?
                .write_all(svg.as_bytes())
                .map_err(|source| CliError::File {
                    path: output.clone(),
                    source,
                })?;
            let plotted = points.iter().filter(|p| p.fraction > 0.0).count();
            writeln!(err, "wrote {plotted} point(s) to {}", output.display())?;
        }
    }
    Ok(())
}

/// Runs the command line `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    0
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    2
                }
            };
        }
    };
    match execute(cli.command, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}
