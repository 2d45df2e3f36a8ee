//! Row output as CSV or JSON lines.

use std::fs::{File, OpenOptions};
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use serde::Deserialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    /// One JSON object per line.
    #[value(alias = "jsonl")]
    #[serde(alias = "jsonl")]
    Json,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Str(String),
    Int(u64),
    Float(f64),
    Bool(bool),
    Empty,
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Str(s.to_owned())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Str(s)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as u64)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(x: Option<T>) -> Self {
        x.map_or(Cell::Empty, Into::into)
    }
}

/// Shortest decimal string that parses back to the same `f64`.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:?}")
    }
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Str(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => fmt_float(*x),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> serde_json::Value {
        use serde_json::Value;
        match self {
            Cell::Str(s) => Value::String(s.clone()),
            Cell::Int(i) => Value::from(*i),
            Cell::Float(x) if x.is_finite() => Value::from(*x),
            Cell::Float(x) => Value::String(fmt_float(*x)),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Empty => Value::Null,
        }
    }
}

pub type Row = Vec<Cell>;

/// Streams rows with a fixed header to a file or stdout.
pub struct Sink {
    header: Vec<&'static str>,
    csv: Option<csv::Writer<Box<dyn Write>>>,
    raw: Option<Box<dyn Write>>,
}

impl Sink {
    /// `append` skips the CSV header, for resuming into an existing file.
    pub fn open(
        header: &[&'static str],
        format: Format,
        path: Option<&Path>,
        append: bool,
    ) -> Result<Self> {
        let out: Box<dyn Write> = match path {
            Some(p) if append => Box::new(BufWriter::new(
                OpenOptions::new()
                    .append(true)
                    .open(p)
                    .with_context(|| format!("opening {}", p.display()))?,
            )),
            Some(p) => Box::new(BufWriter::new(
                File::create(p).with_context(|| format!("creating {}", p.display()))?,
            )),
            None => Box::new(BufWriter::new(io::stdout())),
        };
        let mut sink = Self {
            header: header.to_vec(),
            csv: None,
            raw: None,
        };
        match format {
            Format::Csv => {
                let mut w = csv::WriterBuilder::new()
                    .has_headers(false)
                    .from_writer(out);
                if !append {
                    w.write_record(header)?;
                }
                sink.csv = Some(w);
            }
            Format::Json => sink.raw = Some(out),
        }
        Ok(sink)
    }

    pub fn write(&mut self, row: &[Cell]) -> Result<()> {
        assert_eq!(
            row.len(),
            self.header.len(),
            "row width does not match header"
        );
        if let Some(w) = &mut self.csv {
            w.write_record(row.iter().map(Cell::render))?;
        } else if let Some(w) = &mut self.raw {
            let obj: serde_json::Map<String, serde_json::Value> = self
                .header
                .iter()
                .zip(row)
                .map(|(k, v)| ((*k).to_owned(), v.json()))
                .collect();
            let ordered = Ordered(&self.header, &obj);
            serde_json::to_writer(&mut *w, &ordered)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        if let Some(w) = &mut self.csv {
            w.flush()?;
        }
        if let Some(w) = &mut self.raw {
            w.flush()?;
        }
        Ok(())
    }
}

/// Serialises a map in header order rather than key order.
struct Ordered<'a>(
    &'a [&'static str],
    &'a serde_json::Map<String, serde_json::Value>,
);

impl serde::Serialize for Ordered<'_> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for k in self.0 {
            m.serialize_entry(k, &self.1[*k])?;
        }
        m.end()
    }
}

/// Rows already in `path`, as rendered strings keyed by column name. A
/// missing or empty file has none.
pub fn read_rows(path: &Path, format: Format) -> Result<Vec<Vec<(String, String)>>> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(e).with_context(|| format!("reading {}", path.display())),
    };
    let mut rows = Vec::new();
    match format {
        Format::Csv => {
            let mut r = csv::Reader::from_reader(text.as_bytes());
            let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
            for rec in r.records() {
                let rec = rec?;
                rows.push(
                    header
                        .iter()
                        .cloned()
                        .zip(rec.iter().map(str::to_owned))
                        .collect(),
                );
            }
        }
        Format::Json => {
            for line in text.lines().filter(|l| !l.trim().is_empty()) {
                let obj: serde_json::Map<String, serde_json::Value> = serde_json::from_str(line)?;
                rows.push(
                    obj.into_iter()
                        .map(|(k, v)| {
                            let s = match v {
                                serde_json::Value::String(s) => s,
                                serde_json::Value::Null => String::new(),
                                serde_json::Value::Number(n) => match n.as_u64() {
                                    Some(i) => i.to_string(),
                                    None => fmt_float(n.as_f64().unwrap_or(f64::NAN)),
                                },
                                other => other.to_string(),
                            };
                            (k, s)
                        })
                        .collect(),
                );
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1875, 1.0, 1e-300, 0.1 + 0.2, 123456789.123, -2.5e-17] {
            assert_eq!(fmt_float(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_float(1.0), "1.0");
        assert_eq!(fmt_float(f64::NEG_INFINITY), "-inf");
    }

    #[test]
    fn csv_and_json_read_back() {
        let dir = tempfile::tempdir().unwrap();
        for format in [Format::Csv, Format::Json] {
            let path = dir.path().join("rows");
            let mut sink = Sink::open(&["a", "b", "c"], format, Some(&path), false).unwrap();
            sink.write(&["x,y".into(), 0.1875.into(), Cell::Empty])
                .unwrap();
            sink.write(&["z".into(), 3usize.into(), true.into()])
                .unwrap();
            sink.finish().unwrap();
            let rows = read_rows(&path, format).unwrap();
            assert_eq!(rows.len(), 2);
            assert_eq!(rows[0][0], ("a".into(), "x,y".into()));
            assert!(rows[0].contains(&("b".into(), "0.1875".into())));
            assert!(rows[1].contains(&("b".into(), "3".into())));
        }
        assert!(read_rows(&dir.path().join("missing"), Format::Csv)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn json_keeps_header_order() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rows.jsonl");
        let mut sink = Sink::open(&["zeta", "alpha"], Format::Json, Some(&path), false).unwrap();
        sink.write(&[1usize.into(), f64::NEG_INFINITY.into()])
            .unwrap();
        sink.finish().unwrap();
        assert_eq!(
            std::fs::read_to_string(&path).unwrap(),
            "{\"zeta\":1,\"alpha\":\"-inf\"}\n"
        );
    }
}
