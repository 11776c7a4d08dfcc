//! CSV output: `,` separators, `\n` line endings, a header row and floats with
//! 17 significant digits so every value round-trips exactly.

use std::io::Write;

use crate::error::{Error, Result};
use crate::history::Trajectory;

/// `{:.16e}`: 17 significant digits, `NaN` and `inf` spelled the Rust way.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn parse_f64(s: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| Error::Parse(format!("`{s}` is not a number")))
}

/// A table of string cells with a header.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn push_floats(&mut self, row: &[f64]) {
        self.push(row.iter().map(|&v| format_f64(v)).collect());
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Parses one column as floats.
    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let i = self.column_index(name).ok_or_else(|| Error::Parse(format!("no column `{name}`")))?;
        self.rows.iter().map(|r| parse_f64(&r[i])).collect()
    }

    pub fn write_to<W: Write>(&self, out: W) -> Result<()> {
        let mut w = ::csv::WriterBuilder::new().terminator(::csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(&self.header).map_err(csv_error)?;
        for row in &self.rows {
            w.write_record(row).map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("cells are UTF-8")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut r = ::csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
        let header = r.headers().map_err(csv_error)?.iter().map(str::to_string).collect();
        let rows = r
            .records()
            .map(|rec| rec.map(|rec| rec.iter().map(str::to_string).collect()).map_err(csv_error))
            .collect::<Result<_>>()?;
        Ok(Self { header, rows })
    }
}

fn csv_error(e: ::csv::Error) -> Error {
    match e.into_kind() {
        ::csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Parse(format!("{other:?}")),
    }
}

/// `t,x0,...,x{d-1}` for every node.
pub fn trajectory_table(traj: &Trajectory) -> Table {
    let mut table = Table::new(std::iter::once("t".to_string()).chain((0..traj.dim()).map(|i| format!("x{i}"))));
    for (i, x) in traj.states().iter().enumerate() {
        let mut row = Vec::with_capacity(x.len() + 1);
        row.push(traj.time(i));
        row.extend_from_slice(x);
        table.push_floats(&row);
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(format_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(format_f64(-2.0), "-2.0000000000000000e0");
        for v in [0.1, 1.0 / 3.0, -7.25e-300, 6.02e23, f64::MIN_POSITIVE, f64::MAX] {
            assert_eq!(parse_f64(&format_f64(v)).unwrap(), v);
        }
    }

    #[test]
    fn special_values_round_trip() {
        assert_eq!(format_f64(f64::NAN), "NaN");
        assert_eq!(format_f64(f64::INFINITY), "inf");
        assert!(parse_f64("NaN").unwrap().is_nan());
        assert_eq!(parse_f64("inf").unwrap(), f64::INFINITY);
    }

    #[test]
    fn table_round_trip() {
        let mut t = Table::new(["t", "x0"]);
        t.push_floats(&[0.0, 1.5]);
        t.push_floats(&[0.25, -3.0e-7]);
        let text = t.to_csv_string();
        assert!(text.starts_with("t,x0\n"));
        assert!(!text.contains('\r'));
        let back = Table::parse(&text).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.column("x0").unwrap(), vec![1.5, -3.0e-7]);
    }
}
