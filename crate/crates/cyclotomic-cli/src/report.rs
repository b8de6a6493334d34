use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cache::SCHEMA_VERSION;

/// Closed-form dimension at level 1 where one is known; otherwise 0 when w + m is odd.
/// Nothing is predicted at higher levels.
pub fn predicted_dim(level: i64, w: u32, m: usize) -> Option<usize> {
    let (wi, odd) = (i64::from(w), (w as usize + m) % 2 == 1);
    if level != 1 {
        return None;
    }
    let d = match m {
        1 => (w % 2) as i64,
        2 if w % 2 == 1 => 0,
        2 => (wi - 2) / 6,
        3 if w % 2 == 0 => 0,
        // integer part truncating toward zero, so w = 3 gives 0
        3 => ((wi - 3).pow(2) - 1) / 48,
        _ => return odd.then_some(0),
    };
    Some(d as usize)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimRecord {
    pub level: i64,
    pub weight: u32,
    pub depth: usize,
    pub dim: usize,
}

impl DimRecord {
    pub fn predicted(&self) -> Option<usize> {
        predicted_dim(self.level, self.weight, self.depth)
    }

    pub fn agrees(&self) -> Option<bool> {
        self.predicted().map(|p| p == self.dim)
    }

    /// Whether the dimension vanishes, for odd w + m at level 1.
    pub fn parity_zero(&self) -> Option<bool> {
        (self.level == 1 && (self.weight as usize + self.depth) % 2 == 1).then_some(self.dim == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub suite: String,
    pub identity: String,
    pub level: i64,
    pub weight: u32,
    pub depth: usize,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub word: String,
    pub precision: usize,
    pub re: String,
    pub im: String,
    pub tail: f64,
    pub terms: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub dims: Vec<DimRecord>,
    pub checks: Vec<CheckRecord>,
    pub evals: Vec<EvalRecord>,
    /// Wall-clock seconds per stage; never written to the emitted files.
    #[serde(skip)]
    pub timings: Vec<(String, f64)>,
}

fn flag(x: Option<bool>) -> &'static str {
    match x {
        Some(true) => "true",
        Some(false) => "false",
        None => "",
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl Report {
    pub fn new() -> Self {
        Report { schema: SCHEMA_VERSION, ..Default::default() }
    }

    /// Puts records in a canonical order so that output does not depend on scheduling.
    pub fn sort(&mut self) {
        self.dims.sort_by_key(|d| (d.level, d.depth, d.weight));
        self.checks.sort_by(|a, b| {
            (&a.suite, a.level, a.depth, a.weight, &a.identity).cmp(&(&b.suite, b.level, b.depth, b.weight, &b.identity))
        });
    }

    pub fn passed(&self) -> bool {
        self.dims.iter().all(|d| d.agrees() != Some(false) && d.parity_zero() != Some(false))
            && self.checks.iter().all(|c| c.passed)
    }

    pub fn dims_csv(&self) -> String {
        let mut s = String::from("level,weight,depth,dim,predicted,agrees,parity_zero\n");
        for d in &self.dims {
            let pred = d.predicted().map(|p| p.to_string()).unwrap_or_default();
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{}",
                d.level,
                d.weight,
                d.depth,
                d.dim,
                pred,
                flag(d.agrees()),
                flag(d.parity_zero())
            );
        }
        s
    }

    pub fn checks_csv(&self) -> String {
        let mut s = String::from("suite,identity,level,weight,depth,passed,detail\n");
        for c in &self.checks {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{}",
                c.suite,
                csv_field(&c.identity),
                c.level,
                c.weight,
                c.depth,
                c.passed,
                csv_field(&c.detail)
            );
        }
        s
    }

    pub fn evals_csv(&self) -> String {
        let mut s = String::from("word,precision,re,im,tail,terms\n");
        for e in &self.evals {
            let _ = writeln!(s, "{},{},{},{},{:e},{}", csv_field(&e.word), e.precision, e.re, e.im, e.tail, e.terms);
        }
        s
    }

    /// Indented `key: value` text of the whole report.
    pub fn to_text(&self) -> String {
        let mut s = format!("schema: {}\npassed: {}\n", self.schema, self.passed());
        let _ = writeln!(s, "dimensions: {}", self.dims.len());
        for d in &self.dims {
            let _ = writeln!(s, "  - N={} w={} m={}: dim {}", d.level, d.weight, d.depth, d.dim);
        }
        let _ = writeln!(s, "checks: {}", self.checks.len());
        for c in &self.checks {
            let verdict = if c.passed { "pass" } else { "FAIL" };
            let _ = writeln!(s, "  - [{}] {} N={} w={} m={}: {verdict}", c.suite, c.identity, c.level, c.weight, c.depth);
            if !c.detail.is_empty() {
                let _ = writeln!(s, "      {}", c.detail);
            }
        }
        let _ = writeln!(s, "evaluations: {}", self.evals.len());
        for e in &self.evals {
            let _ = writeln!(s, "  - {} = {} + {} i  (tail {:e}, K = {})", e.word, e.re, e.im, e.tail, e.terms);
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Text,
    Both,
}

/// Writes the report under `dir`; CSV tables are only written when they have records,
/// except the dimension table, which is always present.
pub fn emit_tables(report: &Report, dir: &Path, format: Format) -> std::io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut put = |name: &str, body: String| -> std::io::Result<()> {
        let p = dir.join(name);
        fs::write(&p, body)?;
        written.push(p);
        Ok(())
    };
    if format != Format::Text {
        put("dims.csv", report.dims_csv())?;
        if !report.checks.is_empty() {
            put("checks.csv", report.checks_csv())?;
        }
        if !report.evals.is_empty() {
            put("evals.csv", report.evals_csv())?;
        }
    }
    if format != Format::Csv {
        put("report.txt", report.to_text())?;
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn predictions() {
        assert_eq!(predicted_dim(1, 12, 2), Some(1));
        assert_eq!(predicted_dim(1, 3, 3), Some(0));
        assert_eq!(predicted_dim(1, 15, 3), Some(2));
        assert_eq!(predicted_dim(2, 5, 2), None);
        assert_eq!(predicted_dim(1, 9, 4), Some(0));
        assert_eq!(predicted_dim(2, 4, 2), None);
    }

    #[test]
    fn empty_report_is_header_only() {
        assert_eq!(Report::new().dims_csv(), "level,weight,depth,dim,predicted,agrees,parity_zero\n");
    }

    #[test]
    fn detail_fields_are_quoted() {
        let mut r = Report::new();
        r.checks.push(CheckRecord {
            suite: "s".into(),
            identity: "a, b".into(),
            level: 1,
            weight: 2,
            depth: 2,
            passed: true,
            detail: "say \"hi\"".into(),
        });
        assert!(r.checks_csv().ends_with("s,\"a, b\",1,2,2,true,\"say \"\"hi\"\"\"\n"));
    }
}
