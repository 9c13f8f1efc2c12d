//! CSV tables produced by `census` and `sample`.
//!
//! Census schema: `size,no_common,difficult,total`.
//! Sample schema: `size,iters,no_common,difficult,seed,workers`.
//! Both carry a header row; readers pick the schema from it.

use std::io::{Read, Write};

use thiserror::Error;

use crate::census::{CensusRow, SampleRow};
use crate::stats::{CountPoint, FractionPoint};

pub const CENSUS_HEADER: [&str; 4] = ["size", "no_common", "difficult", "total"];
pub const SAMPLE_HEADER: [&str; 6] = ["size", "iters", "no_common", "difficult", "seed", "workers"];

#[derive(Debug, Error)]
pub enum RecordsError {
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("unrecognized header {0:?}; expected census or sample columns")]
    UnknownSchema(Vec<String>),
    #[error("table has no data rows")]
    Empty,
    #[error("row for size {size}: {message}")]
    Inconsistent { size: u32, message: String },
    #[error("column {0} is not available for sampled data")]
    NeedsCensus(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Column {
    NoCommon,
    Difficult,
}

impl Column {
    pub fn name(self) -> &'static str {
        match self {
            Column::NoCommon => "no_common",
            Column::Difficult => "difficult",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Table {
    Census(Vec<CensusRow>),
    Sample(Vec<SampleRow>),
}

impl Table {
    pub fn len(&self) -> usize {
        match self {
            Table::Census(rows) => rows.len(),
            Table::Sample(rows) => rows.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Per-size fraction of the column over the total (or iterations).
    pub fn fractions(&self, column: Column) -> Vec<FractionPoint> {
        match self {
            Table::Census(rows) => rows
                .iter()
                .map(|r| {
                    let hits = match column {
                        Column::NoCommon => &r.no_common,
                        Column::Difficult => &r.difficult,
                    };
                    FractionPoint {
                        size: r.size,
                        fraction: (hits.ln() - r.total.ln()).exp(),
                    }
                })
                .collect(),
            Table::Sample(rows) => rows
                .iter()
                .map(|r| {
                    let hits = match column {
                        Column::NoCommon => r.no_common_hits,
                        Column::Difficult => r.difficult_hits,
                    };
                    FractionPoint {
                        size: r.size,
                        fraction: hits as f64 / r.iterations as f64,
                    }
                })
                .collect(),
        }
    }

    /// Exact per-size counts; census tables only.
    pub fn counts(&self, column: Column) -> Result<Vec<CountPoint>, RecordsError> {
        match self {
            Table::Census(rows) => Ok(rows
                .iter()
                .map(|r| CountPoint {
                    size: r.size,
                    count: match column {
                        Column::NoCommon => r.no_common.clone(),
                        Column::Difficult => r.difficult.clone(),
                    },
                })
                .collect()),
            Table::Sample(_) => Err(RecordsError::NeedsCensus(column.name())),
        }
    }
}

pub fn write_census<W: Write>(out: W, rows: &[CensusRow]) -> Result<(), RecordsError> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    if rows.is_empty() {
        w.write_record(CENSUS_HEADER)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_samples<W: Write>(out: W, rows: &[SampleRow]) -> Result<(), RecordsError> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    if rows.is_empty() {
        w.write_record(SAMPLE_HEADER)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Reads either table, choosing the schema from the header row.
pub fn read_table<R: Read>(input: R) -> Result<Table, RecordsError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    let table = if header == CENSUS_HEADER {
        let rows = reader.deserialize().collect::<Result<Vec<CensusRow>, _>>()?;
        for r in &rows {
            check_census(r)?;
        }
        Table::Census(rows)
    } else if header == SAMPLE_HEADER {
        let rows = reader.deserialize().collect::<Result<Vec<SampleRow>, _>>()?;
        for r in &rows {
            check_sample(r)?;
        }
        Table::Sample(rows)
    } else {
        return Err(RecordsError::UnknownSchema(header));
    };
    if table.is_empty() {
        return Err(RecordsError::Empty);
    }
    Ok(table)
}

fn check_census(r: &CensusRow) -> Result<(), RecordsError> {
    let bad = |message: &str| RecordsError::Inconsistent {
        size: r.size,
        message: message.to_owned(),
    };
    if r.total.is_zero() {
        return Err(bad("total is zero"));
    }
    if !(r.difficult <= r.no_common && r.no_common <= r.total) {
        return Err(bad("expected difficult <= no_common <= total"));
    }
    Ok(())
}

fn check_sample(r: &SampleRow) -> Result<(), RecordsError> {
    if r.iterations == 0 || !(r.difficult_hits <= r.no_common_hits && r.no_common_hits <= r.iterations) {
        return Err(RecordsError::Inconsistent {
            size: r.size,
            message: "expected difficult <= no_common <= iters, iters > 0".to_owned(),
        });
    }
    Ok(())
}
