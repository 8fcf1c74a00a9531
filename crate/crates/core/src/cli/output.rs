//! Artifact files: CSV tables, JSON reports and gnuplot scripts.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

/// Float field at 17 significant digits.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// Writes artifacts into one directory and remembers them so that a failed
/// run can remove what it produced.
#[derive(Debug)]
pub struct ArtifactWriter {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl ArtifactWriter {
    pub fn new(dir: &Path) -> io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(ArtifactWriter { dir: dir.to_path_buf(), written: Vec::new() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    fn track(&mut self, name: &str) -> PathBuf {
        let path = self.dir.join(name);
        self.written.push(path.clone());
        path
    }

    pub fn csv<I>(&mut self, name: &str, header: &[String], rows: I) -> io::Result<()>
    where
        I: IntoIterator<Item = Vec<String>>,
    {
        let path = self.track(name);
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_path(&path)?;
        w.write_record(header)?;
        for row in rows {
            w.write_record(&row)?;
        }
        w.flush()
    }

    pub fn text(&mut self, name: &str, content: &str) -> io::Result<()> {
        let path = self.track(name);
        fs::write(path, content)
    }

    /// Removes every file written so far.
    pub fn discard(&mut self) {
        for p in self.written.drain(..) {
            let _ = fs::remove_file(p);
        }
    }
}

/// Header `iteration,chain,<columns…>`.
pub fn chain_header(columns: &[String]) -> Vec<String> {
    let mut h = vec!["iteration".to_string(), "chain".to_string()];
    h.extend(columns.iter().cloned());
    h
}

/// Gnuplot script drawing `columns` of a chain table against iteration.
pub fn chain_plot_script(table: &str, title: &str, columns: &[String], first_column: usize) -> String {
    let mut s = String::new();
    s += "set datafile separator ','\n";
    s += "set key autotitle columnhead\n";
    s += &format!("set title '{title}'\n");
    s += "set xlabel 'iteration'\n";
    for (i, c) in columns.iter().enumerate() {
        s += &format!(
            "plot '{table}' using 1:(column({col})) every ::1 with lines title '{c}'\npause mouse close\n",
            col = first_column + i
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_uses_lf_and_fixed_digits() {
        let dir = tempfile::tempdir().unwrap();
        let mut w = ArtifactWriter::new(dir.path()).unwrap();
        w.csv("t.csv", &["a".into(), "b".into()], vec![vec!["1".into(), num(0.1)]]).unwrap();
        let s = fs::read_to_string(dir.path().join("t.csv")).unwrap();
        assert_eq!(s, "a,b\n1,1.0000000000000001e-1\n");
        w.discard();
        assert!(!dir.path().join("t.csv").exists());
    }
}
