//! Exhaustive and sampled censuses of common-edge-free and difficult pairs.
//!
//! The exact census pairs one representative of every dihedral class with
//! every triangulation and weights each hit by the class's orbit size; the
//! counts are for all ordered pairs. The naive census classifies every
//! ordered pair directly and serves as the oracle for the symmetry trick.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::mpsc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chords::{ChordIndex, ChordSet, MAX_POLYGON};
use crate::classify::{classify_pair, PairClass, TreePairProblem};
use crate::combinatorics::{count_instances, ExactCount};
use crate::tree::remy_sample;
use crate::triangulation::{enumerate_class_representatives, enumerate_triangulations};

/// Largest size the exact census accepts unless configured otherwise.
pub const DEFAULT_MAX_EXACT: u32 = 12;
/// Largest size the direct all-pairs census accepts.
pub const NAIVE_MAX: u32 = 7;
pub const MIN_CENSUS_SIZE: u32 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRow {
    pub size: u32,
    pub no_common: ExactCount,
    pub difficult: ExactCount,
    pub total: ExactCount,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleRow {
    pub size: u32,
    #[serde(rename = "iters")]
    pub iterations: u64,
    #[serde(rename = "no_common")]
    pub no_common_hits: u64,
    #[serde(rename = "difficult")]
    pub difficult_hits: u64,
    pub seed: u64,
    pub workers: usize,
}

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("size {size} outside the supported range {min}..={max}")]
    SizeOutOfRange { size: u32, min: u32, max: u32 },
    #[error("iteration count must be at least 1")]
    NoIterations,
    #[error("checkpoint {path}: {source}")]
    Checkpoint { path: PathBuf, source: io::Error },
    #[error("checkpoint {path} line {line}: {message}")]
    BadCheckpoint {
        path: PathBuf,
        line: usize,
        message: String,
    },
}

#[derive(Debug, Clone)]
pub struct CensusOptions {
    pub workers: usize,
    /// Largest size accepted by [`exact_census_with`]; at most 15.
    pub max_size: u32,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            workers: 1,
            max_size: DEFAULT_MAX_EXACT,
        }
    }
}

/// Weighted hit counts for one class representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RepresentativeCount {
    pub no_common: u128,
    pub difficult: u128,
}

/// Precomputed bitsets for every triangulation of one size.
struct CensusTables {
    sets: Vec<ChordSet>,
    targets: Vec<ChordSet>,
    representatives: Vec<(ChordSet, ChordSet, u128)>,
}

impl CensusTables {
    fn build(size: u32) -> Self {
        let index = ChordIndex::new(size + 2).expect("size checked against MAX_POLYGON");
        let sets: Vec<ChordSet> = enumerate_triangulations(size).map(|t| index.mask(&t)).collect();
        let targets = sets.iter().map(|&s| index.one_flip_targets(s)).collect();
        let representatives = enumerate_class_representatives(size)
            .map(|(t, orbit)| {
                let s = index.mask(&t);
                (s, index.one_flip_targets(s), orbit as u128)
            })
            .collect();
        CensusTables {
            sets,
            targets,
            representatives,
        }
    }

    fn count(&self, rep: usize) -> RepresentativeCount {
        let (s, s_targets, weight) = self.representatives[rep];
        let (mut no_common, mut difficult) = (0u128, 0u128);
        for (&t, &t_targets) in self.sets.iter().zip(&self.targets) {
            match ChordIndex::classify_prepared(s, s_targets, t, t_targets) {
                PairClass::HasCommon => {}
                PairClass::OneOff => no_common += 1,
                PairClass::Difficult => {
                    no_common += 1;
                    difficult += 1;
                }
            }
        }
        RepresentativeCount {
            no_common: no_common * weight,
            difficult: difficult * weight,
        }
    }
}

/// Append-only record of finished representatives, for resuming long runs.
///
/// Line 1 is `size,<n>`; each further line is `<rep index>,<no_common>,<difficult>`
/// with orbit-weighted counts.
pub struct Checkpoint {
    path: PathBuf,
    size: u32,
    done: BTreeMap<usize, RepresentativeCount>,
    writer: BufWriter<File>,
}

impl Checkpoint {
    /// Opens (or creates) a checkpoint file for a census of `size`.
    pub fn open(path: impl AsRef<Path>, size: u32) -> Result<Self, CensusError> {
        let path = path.as_ref().to_path_buf();
        let io_err = |source| CensusError::Checkpoint {
            path: path.clone(),
            source,
        };
        let bad = |line: usize, message: String| CensusError::BadCheckpoint {
            path: path.clone(),
            line,
            message,
        };
        let (fresh, done) = if path.exists() {
            let text = std::fs::read_to_string(&path).map_err(io_err)?;
            match parse_checkpoint(&text, size).map_err(|e| bad(e.line, e.message))? {
                Some(done) => (false, done),
                None => (true, BTreeMap::new()),
            }
        } else {
            (true, BTreeMap::new())
        };
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(io_err)?;
        let mut writer = BufWriter::new(file);
        if fresh {
            writeln!(writer, "size,{size}").map_err(io_err)?;
        }
        Ok(Checkpoint {
            path,
            size,
            done,
            writer,
        })
    }

    pub fn completed(&self) -> usize {
        self.done.len()
    }

    fn record(&mut self, index: usize, count: RepresentativeCount) -> Result<(), CensusError> {
        self.done.insert(index, count);
        writeln!(self.writer, "{index},{},{}", count.no_common, count.difficult)
            .and_then(|_| self.writer.flush())
            .map_err(|source| CensusError::Checkpoint {
                path: self.path.clone(),
                source,
            })
    }
}

/// A malformed checkpoint line (1-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckpointSyntaxError {
    pub line: usize,
    pub message: String,
}

/// Parses checkpoint text for a census of `size`. Returns `None` for an empty file.
pub fn parse_checkpoint(
    text: &str,
    size: u32,
) -> Result<Option<BTreeMap<usize, RepresentativeCount>>, CheckpointSyntaxError> {
    let mut lines = text.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        return Ok(None);
    };
    let expected = format!("size,{size}");
    if header.trim() != expected {
        return Err(CheckpointSyntaxError {
            line: 1,
            message: format!("expected header `{expected}`"),
        });
    }
    let mut done = BTreeMap::new();
    for (i, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let mut next = || fields.next().and_then(|f| f.trim().parse::<u128>().ok());
        let parsed = match (next(), next(), next(), fields.next()) {
            (Some(index), Some(no_common), Some(difficult), None) => usize::try_from(index)
                .ok()
                .map(|index| (index, RepresentativeCount { no_common, difficult })),
            _ => None,
        };
        let (index, count) = parsed.ok_or_else(|| CheckpointSyntaxError {
            line: i + 1,
            message: "expected `index,no_common,difficult`".into(),
        })?;
        done.insert(index, count);
    }
    Ok(Some(done))
}

fn check_range(size: u32, min: u32, max: u32) -> Result<(), CensusError> {
    if (min..=max).contains(&size) {
        Ok(())
    } else {
        Err(CensusError::SizeOutOfRange { size, min, max })
    }
}

/// Exact census of size `n` using dihedral class representatives.
pub fn exact_census(size: u32, workers: usize) -> Result<CensusRow, CensusError> {
    exact_census_with(
        size,
        &CensusOptions {
            workers,
            ..CensusOptions::default()
        },
        None,
    )
}

/// Exact census with explicit limits and an optional resumable checkpoint.
///
/// Representatives are dealt round-robin to `workers` threads; totals are
/// plain sums, so the result does not depend on the worker count.
pub fn exact_census_with(
    size: u32,
    options: &CensusOptions,
    mut checkpoint: Option<&mut Checkpoint>,
) -> Result<CensusRow, CensusError> {
    let max = options.max_size.min(MAX_POLYGON - 2);
    check_range(size, MIN_CENSUS_SIZE, max)?;
    if let Some(cp) = checkpoint.as_deref() {
        if cp.size != size {
            return Err(CensusError::BadCheckpoint {
                path: cp.path.clone(),
                line: 1,
                message: format!("checkpoint is for size {}, not {size}", cp.size),
            });
        }
    }
    let tables = CensusTables::build(size);
    let pending: Vec<usize> = (0..tables.representatives.len())
        .filter(|i| checkpoint.as_ref().is_none_or(|cp| !cp.done.contains_key(i)))
        .collect();
    let workers = options.workers.max(1);

    let mut results: BTreeMap<usize, RepresentativeCount> =
        checkpoint.as_ref().map(|cp| cp.done.clone()).unwrap_or_default();

    let outcome: Result<(), CensusError> = std::thread::scope(|scope| {
        let (tx, rx) = mpsc::channel::<(usize, RepresentativeCount)>();
        for w in 0..workers {
            let tx = tx.clone();
            let tables = &tables;
            let shard: Vec<usize> = pending.iter().copied().skip(w).step_by(workers).collect();
            scope.spawn(move || {
                for rep in shard {
                    if tx.send((rep, tables.count(rep))).is_err() {
                        return;
                    }
                }
            });
        }
        drop(tx);
        for (rep, count) in rx {
            if let Some(cp) = checkpoint.as_deref_mut() {
                cp.record(rep, count)?;
            }
            results.insert(rep, count);
        }
        Ok(())
    });
    outcome?;

    let (no_common, difficult) = results
        .values()
        .fold((0u128, 0u128), |(a, b), c| (a + c.no_common, b + c.difficult));
    Ok(CensusRow {
        size,
        no_common: no_common.into(),
        difficult: difficult.into(),
        total: count_instances(size),
    })
}

/// Classifies all ordered pairs directly, with no symmetry reduction.
pub fn exact_census_naive(size: u32) -> Result<CensusRow, CensusError> {
    check_range(size, MIN_CENSUS_SIZE, NAIVE_MAX)?;
    let all: Vec<_> = enumerate_triangulations(size).collect();
    let (mut no_common, mut difficult) = (0u64, 0u64);
    for s in &all {
        for t in &all {
            let pair = TreePairProblem::new(s.clone(), t.clone()).expect("same size");
            match classify_pair(&pair).expect("size >= 3") {
                PairClass::HasCommon => {}
                PairClass::OneOff => no_common += 1,
                PairClass::Difficult => {
                    no_common += 1;
                    difficult += 1;
                }
            }
        }
    }
    Ok(CensusRow {
        size,
        no_common: no_common.into(),
        difficult: difficult.into(),
        total: count_instances(size),
    })
}

/// Random stream used by worker `w`: ChaCha8 keyed by `seed_from_u64(seed)`
/// on stream number `w`.
pub fn worker_rng(seed: u64, worker: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(worker as u64);
    rng
}

/// Iterations handled by worker `w`: an even split, with the remainder going
/// to the lowest-numbered workers.
pub fn worker_share(iterations: u64, workers: usize, worker: usize) -> u64 {
    let workers = workers as u64;
    iterations / workers + u64::from((worker as u64) < iterations % workers)
}

/// Monte-Carlo census: classifies `iterations` pairs of independent uniform trees.
///
/// Deterministic for fixed `(seed, workers)`.
pub fn sample_census(size: u32, iterations: u64, seed: u64, workers: usize) -> Result<SampleRow, CensusError> {
    check_range(size, MIN_CENSUS_SIZE, u32::MAX)?;
    if iterations == 0 {
        return Err(CensusError::NoIterations);
    }
    let workers = workers.max(1);
    let run = |w: usize| {
        let mut rng = worker_rng(seed, w);
        let (mut no_common, mut difficult) = (0u64, 0u64);
        for _ in 0..worker_share(iterations, workers, w) {
            let s = remy_sample(size as usize, &mut rng).expect("size >= 3");
            let t = remy_sample(size as usize, &mut rng).expect("size >= 3");
            let pair = TreePairProblem::new(s.to_triangulation(), t.to_triangulation()).expect("same size");
            match classify_pair(&pair).expect("size >= 3") {
                PairClass::HasCommon => {}
                PairClass::OneOff => no_common += 1,
                PairClass::Difficult => {
                    no_common += 1;
                    difficult += 1;
                }
            }
        }
        (no_common, difficult)
    };
    let counts: Vec<(u64, u64)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers).map(|w| scope.spawn(move || run(w))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sampling worker panicked"))
            .collect()
    });
    let (no_common, difficult) = counts.iter().fold((0, 0), |(a, b), &(c, d)| (a + c, b + d));
    Ok(SampleRow {
        size,
        iterations,
        no_common_hits: no_common,
        difficult_hits: difficult,
        seed,
        workers,
    })
}
