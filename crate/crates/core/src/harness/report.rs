//! Report structures and emission.
//!
//! Reports are deterministic: no timestamps, no machine identifiers, map
//! fields in sorted order, rows in sweep order. `report.json` carries the
//! full structure; `rows.csv` is the flat dump with a `# config_hash=...`
//! comment line on top so a CSV in isolation still names its config.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

/// One sweep cell: a function, the parameter point, and the two sides of
/// whatever inequality the suite evaluates at that cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub function_id: String,
    pub parameters: BTreeMap<String, f64>,
    pub left: f64,
    pub right: f64,
    pub ratio: f64,
}

impl Row {
    pub fn new(
        function_id: impl Into<String>,
        parameters: &[(&str, f64)],
        left: f64,
        right: f64,
    ) -> Self {
        Self {
            function_id: function_id.into(),
            parameters: parameters
                .iter()
                .map(|&(k, v)| (k.to_string(), v))
                .collect(),
            left,
            right,
            ratio: left / right,
        }
    }
}

/// One named check with its pinned tolerance and the observed figure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub tolerance: f64,
    pub observed: f64,
    pub passed: bool,
    pub detail: String,
}

impl Verdict {
    /// Pass iff `observed <= tolerance`.
    pub fn bounded(name: &str, observed: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            tolerance,
            observed,
            passed: observed.is_finite() && observed <= tolerance,
            detail: detail.into(),
        }
    }

    /// Pass iff the predicate holds; `observed` is recorded for the reader.
    pub fn claim(name: &str, passed: bool, observed: f64, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            tolerance: f64::NAN,
            observed,
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct Summary {
    pub max_ratio: f64,
    pub argmax_function: String,
    /// Per-function dilation (or other invariance) spreads.
    pub invariance_spreads: BTreeMap<String, f64>,
    /// Named slope fits (decay exponents, growth exponents).
    pub slopes: BTreeMap<String, f64>,
    /// Any other named scalar the suite wants on record.
    pub metrics: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config_hash: String,
    pub grid: String,
    /// Morrey values are sups over a finite ball family and therefore
    /// certified lower bounds of the continuum norms; always true, stamped
    /// so downstream readers cannot miss it.
    pub morrey_values_are_lower_bounds: bool,
    pub zero_mode_policy: String,
    /// Ball family descriptors for the left and right sides.
    pub ball_families: BTreeMap<String, String>,
}

/// Two-resolution comparison appended by `--refine`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stability {
    pub base_max_ratio: f64,
    pub refined_max_ratio: f64,
    /// |refined - base| / base.
    pub drift: f64,
    pub base_worst_spread: f64,
    pub refined_worst_spread: f64,
    pub spreads_tightened: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub config_hash: String,
    pub threads: usize,
    pub refined: bool,
    /// Exponent tuples the suite validated, echoed verbatim.
    pub tuples: Vec<serde_json::Value>,
    pub rows: Vec<Row>,
    pub summary: Summary,
    pub verdicts: Vec<Verdict>,
    pub provenance: Provenance,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stability: Option<Stability>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    /// Flat CSV with a config-hash comment header. Parameter columns are the
    /// sorted union of row parameter names.
    pub fn to_csv(&self) -> String {
        let mut names: Vec<&str> = Vec::new();
        for row in &self.rows {
            for key in row.parameters.keys() {
                if !names.contains(&key.as_str()) {
                    names.push(key);
                }
            }
        }
        names.sort_unstable();
        let mut out = format!("# config_hash={}\n", self.config_hash);
        out.push_str("function_id");
        for n in &names {
            out.push(',');
            out.push_str(n);
        }
        out.push_str(",left,right,ratio\n");
        for row in &self.rows {
            out.push_str(&row.function_id);
            for n in &names {
                out.push(',');
                if let Some(v) = row.parameters.get(*n) {
                    out.push_str(&format!("{v}"));
                }
            }
            out.push_str(&format!(",{},{},{}\n", row.left, row.right, row.ratio));
        }
        out
    }

    /// Write `report.json` and `rows.csv` into `dir`.
    pub fn write_to(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        let mut json = std::fs::File::create(dir.join("report.json"))?;
        json.write_all(self.to_json().as_bytes())?;
        let mut csv = std::fs::File::create(dir.join("rows.csv"))?;
        csv.write_all(self.to_csv().as_bytes())?;
        Ok(())
    }
}

/// Summary line of one report inside a merged overview.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergedEntry {
    pub suite: String,
    pub config_hash: String,
    pub refined: bool,
    pub passed: bool,
    pub verdicts_total: usize,
    pub verdicts_failed: usize,
    pub max_ratio: f64,
}

/// Merge every `report.json` found below `dir` (one level of subdirectories
/// plus the directory itself) into a single overview.
pub fn merge_reports(dir: &Path) -> std::io::Result<(Vec<MergedEntry>, bool)> {
    let mut entries = Vec::new();
    let mut candidates = vec![dir.join("report.json")];
    for child in std::fs::read_dir(dir)? {
        let path = child?.path();
        if path.is_dir() {
            candidates.push(path.join("report.json"));
        }
    }
    for path in candidates {
        if !path.is_file() {
            continue;
        }
        let text = std::fs::read_to_string(&path)?;
        let report: SuiteReport = serde_json::from_str(&text).map_err(|e| {
            std::io::Error::new(
                std::io::ErrorKind::InvalidData,
                format!("{}: {e}", path.display()),
            )
        })?;
        entries.push(MergedEntry {
            suite: report.suite.clone(),
            config_hash: report.config_hash.clone(),
            refined: report.refined,
            passed: report.all_passed(),
            verdicts_total: report.verdicts.len(),
            verdicts_failed: report.verdicts.iter().filter(|v| !v.passed).count(),
            max_ratio: report.summary.max_ratio,
        });
    }
    entries.sort_by(|a, b| {
        a.suite
            .cmp(&b.suite)
            .then_with(|| a.config_hash.cmp(&b.config_hash))
    });
    let all = entries.iter().all(|e| e.passed);
    Ok((entries, all))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_report() -> SuiteReport {
        SuiteReport {
            suite: "hardy".into(),
            config_hash: "abc123".into(),
            threads: 2,
            refined: false,
            tuples: vec![],
            rows: vec![
                Row::new("bump-0", &[("lambda", 1.0), ("alpha", 0.25)], 2.0, 4.0),
                Row::new("bump-1", &[("lambda", 2.0)], 1.0, 4.0),
            ],
            summary: Summary {
                max_ratio: 0.5,
                argmax_function: "bump-0".into(),
                ..Summary::default()
            },
            verdicts: vec![Verdict::bounded("spread", 0.01, 0.05, "max over corpus")],
            provenance: Provenance {
                config_hash: "abc123".into(),
                grid: "n=1 L=32 N=512 h=0.0625".into(),
                morrey_values_are_lower_bounds: true,
                zero_mode_policy: "zero".into(),
                ball_families: BTreeMap::new(),
            },
            stability: None,
        }
    }

    #[test]
    fn csv_has_hash_header_and_union_columns() {
        let csv = sample_report().to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "# config_hash=abc123");
        assert_eq!(
            lines.next().unwrap(),
            "function_id,alpha,lambda,left,right,ratio"
        );
        assert_eq!(lines.next().unwrap(), "bump-0,0.25,1,2,4,0.5");
        assert_eq!(lines.next().unwrap(), "bump-1,,2,1,4,0.25");
    }

    #[test]
    fn json_roundtrips() {
        let report = sample_report();
        let back: SuiteReport = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(report, back);
        assert!(report.all_passed());
    }

    #[test]
    fn bounded_verdict_rejects_non_finite() {
        assert!(!Verdict::bounded("x", f64::NAN, 1.0, "").passed);
        assert!(!Verdict::bounded("x", f64::INFINITY, 1.0, "").passed);
        assert!(Verdict::bounded("x", 0.5, 1.0, "").passed);
    }

    #[test]
    fn merge_walks_subdirectories() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("hardy");
        sample_report().write_to(&a).unwrap();
        let mut failing = sample_report();
        failing.suite = "olsen".into();
        failing.verdicts = vec![Verdict::bounded("spread", 1.0, 0.05, "")];
        failing.write_to(&dir.path().join("olsen")).unwrap();
        let (entries, all) = merge_reports(dir.path()).unwrap();
        assert_eq!(entries.len(), 2);
        assert_eq!(entries[0].suite, "hardy");
        assert!(entries[0].passed);
        assert!(!entries[1].passed);
        assert!(!all);
    }
}
