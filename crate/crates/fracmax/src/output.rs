//! CSV tables and key-value summaries. Floats are written with 17
//! significant digits so every double round-trips.

use std::fmt::Write as _;
use std::path::Path;

/// `{:.16e}`: 17 significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Free text made safe for a CSV cell.
pub fn text(s: &str) -> String {
    s.replace([',', '\n', '\r'], ";")
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Lines written after the rows, each prefixed with `# `.
    pub footer: Vec<String>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            ..Self::default()
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        for line in &self.footer {
            let _ = writeln!(out, "# {line}");
        }
        out
    }
}

/// Ordered `key = value` lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Summary(Vec<(String, String)>);

impl Summary {
    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.0.push((key.to_owned(), value.to_string()));
    }

    pub fn render(&self) -> String {
        self.0.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }
}

/// Everything a command produces, written only once the command succeeded.
#[derive(Debug, Default)]
pub struct Outputs {
    pub files: Vec<(String, String)>,
    pub summary: Summary,
}

impl Outputs {
    pub fn table(&mut self, name: &str, table: &Table) {
        self.files.push((name.to_owned(), table.to_csv()));
    }

    pub fn write(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        for (name, body) in &self.files {
            std::fs::write(dir.join(name), body)?;
        }
        std::fs::write(dir.join("summary.txt"), self.summary.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23] {
            assert_eq!(num(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["1".into(), text("x,y")]);
        t.footer.push("done".into());
        assert_eq!(t.to_csv(), "a,b\n1,x;y\n# done\n");
    }
}
