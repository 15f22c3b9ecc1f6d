//! Parameter sweeps over time grids and figure-data reproduction, with
//! deterministic CSV/JSON rendering.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{CavresError, Result};
use crate::quantinfo::{correlation_record, CorrelationRecord};
use crate::statedyn::SystemParams;
use crate::transitions::{log_dense_grid, Partition};

/// Exact header of every correlation CSV; consumers key on it.
pub const CSV_HEADER: &str = "gamma_t,I_cc,C_cc,D_cc,branch_cc,I_rr,C_rr,D_rr,branch_rr";
/// Null marker for unrequested partitions in CSV output.
pub const NULL_MARKER: &str = "NA";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridKind {
    Linear,
    /// Log-spaced from gamma_t = 1e-6 with an explicit t = 0 prepended;
    /// resolves transition times of order 1/(4 nbar).
    #[serde(rename = "log-dense-start")]
    LogDenseStart,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepConfig {
    pub params: SystemParams,
    /// End of the grid in units of gamma t.
    pub t_max_gamma: f64,
    pub n_points: usize,
    pub grid_kind: GridKind,
    pub partitions: Vec<Partition>,
    pub output_format: OutputFormat,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.n_points < 2 {
            return Err(CavresError::Usage(format!(
                "n_points must be >= 2, got {}",
                self.n_points
            )));
        }
        if !(self.t_max_gamma > 0.0) {
            return Err(CavresError::Usage(format!(
                "t_max_gamma must be > 0, got {}",
                self.t_max_gamma
            )));
        }
        if self.partitions.is_empty() {
            return Err(CavresError::Usage("at least one partition required".into()));
        }
        Ok(())
    }

    /// Grid in gamma t units.
    pub fn grid(&self) -> Vec<f64> {
        match self.grid_kind {
            GridKind::Linear => (0..self.n_points)
                .map(|i| self.t_max_gamma * i as f64 / (self.n_points - 1) as f64)
                .collect(),
            GridKind::LogDenseStart => log_dense_grid(1.0, self.t_max_gamma, self.n_points),
        }
    }
}

impl SystemParams {
    fn validate(&self) -> Result<()> {
        SystemParams::new(self.nbar, self.p, self.gamma).map(|_| ())
    }
}

/// One sweep row: correlations per requested partition at one grid point.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub gamma_t: f64,
    pub cavities: Option<CorrelationRecord>,
    pub reservoirs: Option<CorrelationRecord>,
}

/// Evaluate the sweep: one row per grid point, in grid order.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    config.validate()?;
    let want_cc = config.partitions.contains(&Partition::Cavities);
    let want_rr = config.partitions.contains(&Partition::Reservoirs);
    config
        .grid()
        .iter()
        .map(|&gt| {
            let t = gt / config.params.gamma;
            let record = |partition: Partition| -> Result<CorrelationRecord> {
                correlation_record(t, &partition.state(&config.params, t)?)
            };
            Ok(SweepRow {
                gamma_t: gt,
                cavities: want_cc.then(|| record(Partition::Cavities)).transpose()?,
                reservoirs: want_rr.then(|| record(Partition::Reservoirs)).transpose()?,
            })
        })
        .collect()
}

/// Render a float with 12 significant digits, enough to check 1e-10-level
/// identities from files.
pub fn fmt_sig(x: f64) -> String {
    // normalize -0.0 so outputs stay byte-stable across algebraic routes
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

/// Round to the serialized 12-significant-digit value, for JSON numbers.
pub fn round_sig(x: f64) -> f64 {
    fmt_sig(x).parse().unwrap_or(x)
}

pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(rows.len() * 96 + 64);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&fmt_sig(row.gamma_t));
        for record in [&row.cavities, &row.reservoirs] {
            match record {
                Some(r) => {
                    for v in [r.mutual_info, r.classical, r.discord] {
                        out.push(',');
                        out.push_str(&fmt_sig(v));
                    }
                    out.push(',');
                    out.push_str(&r.branch.to_string());
                }
                None => {
                    for _ in 0..4 {
                        out.push(',');
                        out.push_str(NULL_MARKER);
                    }
                }
            }
        }
        out.push('\n');
    }
    out
}

pub fn rows_to_json(rows: &[SweepRow]) -> Result<String> {
    let values: Vec<Value> = rows
        .iter()
        .map(|row| {
            let field = |r: &Option<CorrelationRecord>, pick: fn(&CorrelationRecord) -> f64| {
                r.as_ref().map(|r| round_sig(pick(r)))
            };
            json!({
                "gamma_t": round_sig(row.gamma_t),
                "I_cc": field(&row.cavities, |r| r.mutual_info),
                "C_cc": field(&row.cavities, |r| r.classical),
                "D_cc": field(&row.cavities, |r| r.discord),
                "branch_cc": row.cavities.as_ref().map(|r| r.branch.to_string()),
                "I_rr": field(&row.reservoirs, |r| r.mutual_info),
                "C_rr": field(&row.reservoirs, |r| r.classical),
                "D_rr": field(&row.reservoirs, |r| r.discord),
                "branch_rr": row.reservoirs.as_ref().map(|r| r.branch.to_string()),
            })
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&values)?;
    s.push('\n');
    Ok(s)
}

pub fn render_rows(rows: &[SweepRow], format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Csv => Ok(rows_to_csv(rows)),
        OutputFormat::Json => rows_to_json(rows),
    }
}

/// Figure presets hard-coding the published scenario (p = 0.2; field
/// amplitudes per panel), so reproduction needs no manual configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigurePreset {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
}

impl std::str::FromStr for FigurePreset {
    type Err = CavresError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig1" => Ok(Self::Fig1),
            "fig2" => Ok(Self::Fig2),
            "fig3" => Ok(Self::Fig3),
            "fig4" => Ok(Self::Fig4),
            other => Err(CavresError::Usage(format!(
                "unknown figure '{other}', expected fig1..fig4"
            ))),
        }
    }
}

/// A named dataset produced by a figure preset.
pub struct FigureFile {
    /// Suffix appended to the output basename, e.g. "nbar100" or "early".
    pub tag: String,
    pub content: String,
}

fn preset_config(nbar: f64, grid_kind: GridKind, t_max: f64, format: OutputFormat) -> SweepConfig {
    SweepConfig {
        params: SystemParams { nbar, p: 0.2, gamma: 1.0 },
        t_max_gamma: t_max,
        n_points: 1500,
        grid_kind,
        partitions: vec![Partition::Cavities, Partition::Reservoirs],
        output_format: format,
    }
}

/// Matrix-element curves for both partitions (the fig2 dataset has its own
/// schema since it plots density-matrix elements, not correlations).
fn element_curves(t_lo: f64, t_hi: f64, n_points: usize) -> Result<String> {
    let params = SystemParams::new(100.0, 0.2, 1.0)?;
    let mut out = String::from(
        "gamma_t,d11_cc,d22_cc,d33_cc,d44_cc,o14_cc,o23_cc,d11_rr,d22_rr,d33_rr,d44_rr,o14_rr,o23_rr\n",
    );
    for i in 0..n_points {
        let gt = t_lo + (t_hi - t_lo) * i as f64 / (n_points - 1) as f64;
        out.push_str(&fmt_sig(gt));
        for partition in [Partition::Cavities, Partition::Reservoirs] {
            let rho = partition.state(&params, gt)?;
            for v in [rho.d11, rho.d22, rho.d33, rho.d44, rho.o14, rho.o23] {
                out.push(',');
                out.push_str(&fmt_sig(v));
            }
        }
        out.push('\n');
    }
    Ok(out)
}

/// Produce the datasets for one figure preset.
pub fn run_figure(preset: FigurePreset, format: OutputFormat) -> Result<Vec<FigureFile>> {
    match preset {
        FigurePreset::Fig1 | FigurePreset::Fig3 => {
            let nbars: &[f64] = if preset == FigurePreset::Fig1 {
                &[1.0, 3.0, 10.0, 100.0]
            } else {
                &[1.0, 100.0]
            };
            nbars
                .iter()
                .map(|&nbar| {
                    let config = preset_config(nbar, GridKind::Linear, 15.0, format);
                    let rows = run_sweep(&config)?;
                    Ok(FigureFile {
                        tag: format!("nbar{nbar}"),
                        content: render_rows(&rows, format)?,
                    })
                })
                .collect()
        }
        FigurePreset::Fig2 => {
            // Panel windows: the text only pins "gamma t << 1" and
            // "gamma t >= 2"; we use [0, 0.1] and [2, 15].
            Ok(vec![
                FigureFile { tag: "early".into(), content: element_curves(0.0, 0.1, 1500)? },
                FigureFile { tag: "late".into(), content: element_curves(2.0, 15.0, 1500)? },
            ])
        }
        FigurePreset::Fig4 => {
            let config = preset_config(100.0, GridKind::LogDenseStart, 15.0, format);
            let rows = run_sweep(&config)?;
            Ok(vec![FigureFile {
                tag: "nbar100".into(),
                content: render_rows(&rows, format)?,
            }])
        }
    }
}
