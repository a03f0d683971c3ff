//! Delimited text files in and out of [`DataMatrix`].
//!
//! With a header, the first row holds the variable labels and the first
//! column the observation labels (the top-left cell is ignored). Without one,
//! every cell is a value and labels are generated.

use std::fs::File;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use infotopo_core::{DataMatrix, Error};

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("cannot open {}", path.display())]
    Open { path: PathBuf, source: io::Error },
    #[error("cannot read {}", path.display())]
    Read { path: PathBuf, source: csv::Error },
    #[error("invalid data in {}", path.display())]
    Data { path: PathBuf, source: Error },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LoadOptions {
    pub delimiter: u8,
    pub has_header: bool,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions { delimiter: b',', has_header: true }
    }
}

pub fn load_matrix(path: &Path, opts: LoadOptions) -> Result<DataMatrix, IngestError> {
    let file = File::open(path).map_err(|source| IngestError::Open { path: path.to_owned(), source })?;
    parse_matrix(file, opts).map_err(|e| match e {
        ParseError::Csv(source) => IngestError::Read { path: path.to_owned(), source },
        ParseError::Data(source) => IngestError::Data { path: path.to_owned(), source },
    })
}

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Data(#[from] Error),
}

/// Parses a matrix from delimited text. Error coordinates are 1-based file
/// line and field numbers.
pub fn parse_matrix<R: Read>(reader: R, opts: LoadOptions) -> Result<DataMatrix, ParseError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .delimiter(opts.delimiter)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut records = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(records.len() + 1, |p| p.line() as usize);
        records.push((line, rec));
    }

    let skip = usize::from(opts.has_header);
    let (col_labels, body) = if opts.has_header {
        let (_, header) = records.first().ok_or_else(|| Error::Shape("empty file".into()))?;
        let labels: Vec<String> = header.iter().skip(1).map(str::to_owned).collect();
        (Some(labels), &records[1..])
    } else {
        (None, &records[..])
    };
    let width = match &col_labels {
        Some(labels) => labels.len() + skip,
        None => body.first().map_or(0, |(_, r)| r.len()),
    };
    if width <= skip {
        return Err(Error::Shape("no variable columns".into()).into());
    }
    if body.len() < 2 {
        return Err(Error::Shape(format!("{} observation(s); at least two are required", body.len())).into());
    }

    let mut values = Vec::with_capacity(body.len() * (width - skip));
    let mut row_labels = Vec::with_capacity(body.len());
    for (i, (line, rec)) in body.iter().enumerate() {
        if rec.len() != width {
            return Err(Error::Shape(format!("line {line} has {} fields, expected {width}", rec.len())).into());
        }
        row_labels.push(if opts.has_header { rec[0].to_owned() } else { format!("o{}", i + 1) });
        for (j, text) in rec.iter().enumerate().skip(skip) {
            let v: f64 = text.parse().map_err(|_| Error::Parse { row: *line, col: j + 1, text: text.to_owned() })?;
            if !v.is_finite() {
                return Err(Error::Value { row: *line, col: j + 1 }.into());
            }
            values.push(v);
        }
    }
    let col_labels = col_labels.unwrap_or_else(|| (1..=width).map(|j| format!("X{j}")).collect());
    Ok(DataMatrix::new(values, row_labels, col_labels)?)
}

/// Writes `d` with labels. Values use the shortest decimal form that reads
/// back to the same double.
pub fn write_matrix<W: Write>(d: &DataMatrix, writer: W, delimiter: u8) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new().delimiter(delimiter).from_writer(writer);
    w.write_record(std::iter::once("").chain(d.col_labels().iter().map(String::as_str)))?;
    for (i, label) in d.row_labels().iter().enumerate() {
        let cells: Vec<String> = d.row(i).iter().map(|v| v.to_string()).collect();
        w.write_record(std::iter::once(label.as_str()).chain(cells.iter().map(String::as_str)))?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_matrix(d: &DataMatrix, path: &Path, delimiter: u8) -> Result<(), IngestError> {
    let file = File::create(path).map_err(|source| IngestError::Open { path: path.to_owned(), source })?;
    write_matrix(d, io::BufWriter::new(file), delimiter)
        .map_err(|source| IngestError::Read { path: path.to_owned(), source })
}
