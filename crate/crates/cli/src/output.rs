//! CSV and JSON report files. Every file starts with the config hash and seed.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::runner::CliError;

/// A named table with string cells. Numbers are formatted with `Display`,
/// which prints the shortest representation that round-trips.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// Empty for the main table, otherwise appended to the file name.
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self {
            name: name.into(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// Formats any displayable cell.
#[macro_export]
macro_rules! row {
    ($($x:expr),* $(,)?) => { vec![$(format!("{}", $x)),*] };
}

pub fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

/// Provenance stamped on every file of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Stamp {
    pub experiment: String,
    pub config_hash: String,
    pub seed: Option<u64>,
}

impl Stamp {
    fn seed_text(&self) -> String {
        self.seed.map_or_else(|| "none".into(), |s| s.to_string())
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

pub fn write_csv(dir: &Path, stamp: &Stamp, table: &Table) -> Result<PathBuf, CliError> {
    let file = if table.name.is_empty() {
        format!("{}.csv", stamp.experiment)
    } else {
        format!("{}_{}.csv", stamp.experiment, table.name)
    };
    let path = dir.join(file);
    let mut buf = Vec::new();
    writeln!(
        buf,
        "# config_hash={} seed={}",
        stamp.config_hash,
        stamp.seed_text()
    )
    .expect("vec write");
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(&table.header)
            .map_err(|e| io_err(&path, e))?;
        for r in &table.rows {
            w.write_record(r).map_err(|e| io_err(&path, e))?;
        }
        w.flush().map_err(|e| io_err(&path, e))?;
    }
    fs::write(&path, buf).map_err(|e| io_err(&path, e))?;
    Ok(path)
}

pub fn write_json(
    dir: &Path,
    stamp: &Stamp,
    params: &Value,
    result: Value,
) -> Result<PathBuf, CliError> {
    let path = dir.join(format!("{}.json", stamp.experiment));
    let doc = serde_json::json!({
        "experiment": stamp.experiment,
        "config_hash": stamp.config_hash,
        "seed": stamp.seed,
        "params": params,
        "result": result,
    });
    let text = serde_json::to_string_pretty(&doc).map_err(|e| io_err(&path, e))?;
    fs::write(&path, text + "\n").map_err(|e| io_err(&path, e))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_carries_stamp_and_quotes() {
        let dir = std::env::temp_dir().join(format!("slowdec-out-test-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let stamp = Stamp {
            experiment: "dist".into(),
            config_hash: "abc".into(),
            seed: Some(3),
        };
        let mut t = Table::new("samples", &["a", "b"]);
        t.push(row![0.1, "x,y"]);
        let p = write_csv(&dir, &stamp, &t).unwrap();
        let text = fs::read_to_string(&p).unwrap();
        assert!(p.ends_with("dist_samples.csv"));
        assert_eq!(text, "# config_hash=abc seed=3\na,b\n0.1,\"x,y\"\n");
        fs::remove_dir_all(&dir).unwrap();
    }
}
