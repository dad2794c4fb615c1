//! Refinement reports and their CSV / JSON forms.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Result, WenoError};
use crate::weno::Method;

/// Errors below this are treated as round-off and excluded from order checks.
pub const ERROR_FLOOR: f64 = 100.0 * f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Region {
    /// Cell offset `s` from the jump cell in 1-D.
    Interval(i64),
    /// Cell offsets `(s1, s2)` from the origin cell in 2-D.
    Cell(i64, i64),
    Global,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::Interval(s) => write!(f, "{s}"),
            Region::Cell(a, b) => write!(f, "{a}:{b}"),
            Region::Global => f.write_str("global"),
        }
    }
}

impl FromStr for Region {
    type Err = WenoError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || WenoError::Config(format!("bad region `{s}`"));
        if s == "global" {
            return Ok(Region::Global);
        }
        match s.split_once(':') {
            Some((a, b)) => Ok(Region::Cell(
                a.parse().map_err(|_| bad())?,
                b.parse().map_err(|_| bad())?,
            )),
            None => s.parse().map(Region::Interval).map_err(|_| bad()),
        }
    }
}

impl Serialize for Region {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Region {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridKind {
    Uniform,
    /// Seeded random nodes, dyadically refined.
    Random,
    /// Seeded perturbation of a uniform grid, dyadically refined.
    Perturbed,
}

impl GridKind {
    pub fn name(self) -> &'static str {
        match self {
            GridKind::Uniform => "uniform",
            GridKind::Random => "random",
            GridKind::Perturbed => "perturbed",
        }
    }
}

impl FromStr for GridKind {
    type Err = WenoError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(GridKind::Uniform),
            "random" => Ok(GridKind::Random),
            "perturbed" => Ok(GridKind::Perturbed),
            other => Err(WenoError::Config(format!("unknown grid kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub level: u32,
    pub region: Region,
    pub error: f64,
    pub order: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinementReport {
    pub function: String,
    pub method: Method,
    pub r: usize,
    pub grid: GridKind,
    pub seed: u64,
    /// Evaluation points per window (1-D) or per cell (2-D).
    pub eval_points: usize,
    /// Some evaluation fell back to linear weights.
    #[serde(default)]
    pub fallback: bool,
    pub rows: Vec<ReportRow>,
}

/// `log2(coarse / fine)` when both errors are positive.
pub fn numerical_order(coarse: f64, fine: f64) -> Option<f64> {
    (coarse > 0.0 && fine > 0.0).then(|| (coarse / fine).log2())
}

impl RefinementReport {
    /// Builds rows from per-level errors, filling orders between consecutive levels.
    pub(crate) fn from_errors(
        mut meta: RefinementReport,
        levels: &[u32],
        regions: &[Region],
        errors: &[Vec<f64>],
    ) -> Self {
        for (li, &level) in levels.iter().enumerate() {
            for (ri, &region) in regions.iter().enumerate() {
                let error = errors[li][ri];
                let order = if li == 0 {
                    None
                } else {
                    numerical_order(errors[li - 1][ri], error)
                };
                meta.rows.push(ReportRow {
                    level,
                    region,
                    error,
                    order,
                });
            }
        }
        meta
    }

    pub fn levels(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.rows.iter().map(|r| r.level).collect();
        v.dedup();
        v
    }

    pub fn regions(&self) -> Vec<Region> {
        let first = self.rows.first().map(|r| r.level);
        self.rows
            .iter()
            .filter(|r| Some(r.level) == first)
            .map(|r| r.region)
            .collect()
    }

    pub fn row(&self, level: u32, region: Region) -> Option<&ReportRow> {
        self.rows
            .iter()
            .find(|r| r.level == level && r.region == region)
    }

    pub fn error(&self, level: u32, region: Region) -> Option<f64> {
        self.row(level, region).map(|r| r.error)
    }

    pub fn order(&self, level: u32, region: Region) -> Option<f64> {
        self.row(level, region).and_then(|r| r.order)
    }

    /// Last level whose error and predecessor's error are both at or above [`ERROR_FLOOR`].
    pub fn finest_unsaturated(&self, region: Region) -> Option<u32> {
        let levels = self.levels();
        levels
            .windows(2)
            .filter(|w| {
                let a = self.error(w[0], region).unwrap_or(0.0);
                let b = self.error(w[1], region).unwrap_or(0.0);
                a >= ERROR_FLOOR && b >= ERROR_FLOOR
            })
            .map(|w| w[1])
            .next_back()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("level,region,error,order,method,r,grid,seed\n");
        for row in &self.rows {
            let order = row.order.map(|o| format!("{o:.16e}")).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{:.16e},{},{},{},{},{}\n",
                row.level,
                row.region,
                row.error,
                order,
                self.method.name(),
                self.r,
                self.grid.name(),
                self.seed
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| WenoError::Config(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = WenoError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(WenoError::Config(format!("unknown format `{other}`"))),
        }
    }
}

/// Writes the report to `path`.
pub fn emit_report(report: &RefinementReport, format: ReportFormat, path: &Path) -> std::io::Result<()> {
    let text = match format {
        ReportFormat::Csv => report.to_csv(),
        ReportFormat::Json => report.to_json(),
    };
    let mut file = std::fs::File::create(path)?;
    file.write_all(text.as_bytes())?;
    file.flush()
}
