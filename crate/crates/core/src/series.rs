//! Observed series and their CSV representation.
//!
//! The CSV layout is one observation per row. A header is optional; when
//! present the observations are read from the `value` column and labels from
//! an optional `date` column. Headerless files carry either a single value
//! column or `date,value` pairs.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{require_len, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    values: Vec<f64>,
    labels: Option<Vec<String>>,
}

impl TimeSeries {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self {
            values,
            labels: None,
        })
    }

    pub fn with_labels(values: Vec<f64>, labels: Vec<String>) -> Result<Self> {
        if labels.len() != values.len() {
            return Err(Error::LabelMismatch {
                labels: labels.len(),
                values: values.len(),
            });
        }
        let mut series = Self::new(values)?;
        series.labels = Some(labels);
        Ok(series)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Fails with `InsufficientLength` when the series is too short for any test.
    pub fn require_testable(&self) -> Result<()> {
        require_len(self.len())
    }

    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(reader);

        let mut records = rdr.records();
        let first = match records.next() {
            Some(r) => r?,
            None => return Err(Error::Csv("empty input".into())),
        };

        let header_like = first.iter().any(|f| f.parse::<f64>().is_err());
        let (value_col, date_col, mut pending) = if header_like {
            let names: Vec<String> = first.iter().map(|s| s.to_ascii_lowercase()).collect();
            let value_col = names
                .iter()
                .position(|n| n == "value")
                .ok_or_else(|| Error::Csv("header has no `value` column".into()))?;
            let date_col = names.iter().position(|n| n == "date");
            (value_col, date_col, None)
        } else {
            match first.len() {
                1 => (0, None, Some(first)),
                2 => (1, Some(0), Some(first)),
                n => {
                    return Err(Error::Csv(format!(
                        "headerless input must have 1 or 2 columns, found {n}"
                    )))
                }
            }
        };

        let mut values = Vec::new();
        let mut labels = Vec::new();
        let mut line = 1usize;
        loop {
            let record = match pending.take() {
                Some(r) => r,
                None => match records.next() {
                    Some(r) => {
                        line += 1;
                        r?
                    }
                    None => break,
                },
            };
            if record.iter().all(|f| f.is_empty()) {
                continue;
            }
            let raw = record
                .get(value_col)
                .ok_or_else(|| Error::Csv(format!("row {line}: missing value column")))?;
            let v: f64 = raw
                .parse()
                .map_err(|_| Error::Csv(format!("row {line}: cannot parse `{raw}` as a number")))?;
            values.push(v);
            if let Some(dc) = date_col {
                labels.push(record.get(dc).unwrap_or("").to_string());
            }
        }

        if values.is_empty() {
            return Err(Error::Csv("no observations".into()));
        }
        if date_col.is_some() {
            Self::with_labels(values, labels)
        } else {
            Self::new(values)
        }
    }

    pub fn from_csv_path<P: AsRef<std::path::Path>>(path: P) -> Result<Self> {
        let file = std::fs::File::open(path.as_ref())
            .map_err(|e| Error::Csv(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_csv_reader(std::io::BufReader::new(file))
    }

    /// Writes `t,value` rows (1-based `t`). Values use the shortest
    /// representation that round-trips exactly.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["t", "value"])?;
        for (i, v) in self.values.iter().enumerate() {
            w.write_record([(i + 1).to_string(), v.to_string()])?;
        }
        w.flush().map_err(|e| Error::Csv(e.to_string()))?;
        Ok(())
    }
}

impl AsRef<[f64]> for TimeSeries {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}
