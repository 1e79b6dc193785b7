//! Minimal tab-separated tables with a header row.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{NormnetError, Result};

/// A parsed table. Rows keep their 1-based source line numbers.
#[derive(Debug, Clone)]
pub struct Table {
    pub file: String,
    pub header: Vec<String>,
    pub rows: Vec<(usize, Vec<String>)>,
}

impl Table {
    pub fn parse(file: &str, text: &str) -> Result<Table> {
        let mut lines = text
            .split('\n')
            .enumerate()
            .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)));
        let header: Vec<String> = match lines.next() {
            Some((_, h)) if !h.is_empty() => h.split('\t').map(str::to_string).collect(),
            _ => return Err(NormnetError::format(file, 1, "missing header row")),
        };
        let mut rows = Vec::new();
        for (line, text) in lines {
            if text.is_empty() {
                continue;
            }
            let fields: Vec<String> = text.split('\t').map(str::to_string).collect();
            if fields.len() != header.len() {
                return Err(NormnetError::format(
                    file,
                    line,
                    format!("expected {} fields, found {}", header.len(), fields.len()),
                ));
            }
            rows.push((line, fields));
        }
        Ok(Table {
            file: file.to_string(),
            header,
            rows,
        })
    }

    pub fn read(path: &Path) -> Result<Table> {
        let text = fs::read_to_string(path).map_err(|e| NormnetError::io(path, e))?;
        let name = path.file_name().map_or_else(
            || path.display().to_string(),
            |n| n.to_string_lossy().into_owned(),
        );
        Table::parse(&name, &text)
    }

    /// Index of a required column.
    pub fn column(&self, name: &str) -> Result<usize> {
        self.header.iter().position(|h| h == name).ok_or_else(|| {
            NormnetError::format(&self.file, 1, format!("missing required column {name:?}"))
        })
    }

    pub fn error(&self, line: usize, message: impl Into<String>) -> NormnetError {
        NormnetError::format(&self.file, line, message)
    }

    /// Parses field `col` of a row, reporting the line on failure.
    pub fn parse_field<T: std::str::FromStr>(
        &self,
        line: usize,
        fields: &[String],
        col: usize,
    ) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        fields[col].parse().map_err(|e| {
            self.error(
                line,
                format!("column {:?}: {e} ({:?})", self.header[col], fields[col]),
            )
        })
    }
}

/// Builds TSV text row by row.
#[derive(Debug, Default)]
pub struct Writer {
    out: String,
}

impl Writer {
    pub fn new(header: &[&str]) -> Writer {
        let mut w = Writer::default();
        w.row(header.iter().copied());
        w
    }

    pub fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        for (i, f) in fields.into_iter().enumerate() {
            if i > 0 {
                self.out.push('\t');
            }
            let _ = write!(self.out, "{}", f.as_ref());
        }
        self.out.push('\n');
    }

    pub fn finish(self) -> String {
        self.out
    }
}

/// Rejects text that would break the line/field structure.
pub fn check_cell(what: &str, value: &str) -> Result<()> {
    if value.contains(['\t', '\n', '\r']) {
        return Err(NormnetError::Validation(format!(
            "{what} {value:?} contains a tab or line break"
        )));
    }
    Ok(())
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| NormnetError::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| NormnetError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_reports_lines() {
        let t = Table::parse("x.tsv", "a\tb\n1\t2\r\n\n3\t4\n").unwrap();
        assert_eq!(t.rows.len(), 2);
        assert_eq!(t.rows[1].0, 4);
        assert_eq!(t.column("b").unwrap(), 1);
        let e = t.column("c").unwrap_err().to_string();
        assert!(e.contains("\"c\""), "{e}");
        let e = Table::parse("x.tsv", "a\tb\n1\n").unwrap_err().to_string();
        assert!(e.starts_with("x.tsv:2:"), "{e}");
        assert!(Table::parse("x.tsv", "").is_err());
    }

    #[test]
    fn writer_joins_fields() {
        let mut w = Writer::new(&["a", "b"]);
        w.row(["1", "2"]);
        assert_eq!(w.finish(), "a\tb\n1\t2\n");
        assert!(check_cell("title", "a\tb").is_err());
    }
}
