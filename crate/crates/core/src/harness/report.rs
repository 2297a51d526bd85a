use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use super::Algorithm;
use crate::error::{Error, Result};

/// Mean and sample standard deviation (denominator N−1; 0 for one run).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub mean: f64,
    pub std: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len();
        if n == 0 {
            return Summary { mean: f64::NAN, std: f64::NAN };
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let std = if n < 2 {
            0.0
        } else {
            (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64).sqrt()
        };
        Summary { mean, std }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub seed: u64,
    pub ari: Option<f64>,
    pub mse: f64,
    pub wb: f64,
    pub iterations: usize,
    pub converged: bool,
    pub wall_time: f64,
    pub loss_trace: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellStats {
    /// Absent when the dataset has no ground truth.
    pub ari: Option<Summary>,
    pub mse: Summary,
    pub wb: Summary,
    pub iterations: Summary,
    pub time: Summary,
    /// Individual runs in seed order.
    pub runs: Vec<RunRecord>,
}

impl CellStats {
    pub fn from_runs(runs: Vec<RunRecord>) -> Self {
        let col = |f: &dyn Fn(&RunRecord) -> f64| Summary::of(&runs.iter().map(f).collect::<Vec<_>>());
        let ari = runs
            .iter()
            .map(|r| r.ari)
            .collect::<Option<Vec<f64>>>()
            .map(|v| Summary::of(&v));
        Self {
            ari,
            mse: col(&|r| r.mse),
            wb: col(&|r| r.wb),
            iterations: col(&|r| r.iterations as f64),
            time: col(&|r| r.wall_time),
            runs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum CellOutcome {
    Ok(CellStats),
    /// The first run that failed; later seeds were not attempted.
    Failed { seed: u64, exit_code: i32, message: String },
}

/// Which means are the best within the cell's table.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct BestMarks {
    pub ari: bool,
    pub mse: bool,
    pub wb: bool,
    pub time: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cell {
    pub algorithm: Algorithm,
    pub dataset: String,
    /// Outlier fraction for contamination sweeps.
    pub fraction: Option<f64>,
    pub k: usize,
    pub repeats: usize,
    pub base_seed: u64,
    #[serde(flatten)]
    pub outcome: CellOutcome,
    pub best: BestMarks,
}

impl Cell {
    pub fn stats(&self) -> Option<&CellStats> {
        match &self.outcome {
            CellOutcome::Ok(s) => Some(s),
            CellOutcome::Failed { .. } => None,
        }
    }

    fn group(&self) -> (String, Option<u64>) {
        (self.dataset.clone(), self.fraction.map(f64::to_bits))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    /// Convention used for every `std` field.
    pub std_convention: &'static str,
    pub cells: Vec<Cell>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Markdown,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "md" | "markdown" => Ok(OutputFormat::Markdown),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Usage(format!("format must be csv, md, or json, got {other:?}"))),
        }
    }
}

fn mark(cells: &[Cell], idx: &[usize], get: impl Fn(&CellStats) -> Option<f64>, higher: bool) -> Vec<bool> {
    let vals: Vec<Option<f64>> = idx
        .iter()
        .map(|&i| cells[i].stats().and_then(&get).filter(|v| v.is_finite()))
        .collect();
    let best = vals.iter().flatten().copied().reduce(|a, b| if (b > a) == higher { b } else { a });
    vals.iter().map(|v| v.is_some() && *v == best).collect()
}

impl BenchReport {
    pub(super) fn new(mut cells: Vec<Cell>) -> Self {
        let mut groups: Vec<((String, Option<u64>), Vec<usize>)> = Vec::new();
        for (i, c) in cells.iter().enumerate() {
            let g = c.group();
            match groups.iter_mut().find(|(k, _)| *k == g) {
                Some((_, v)) => v.push(i),
                None => groups.push((g, vec![i])),
            }
        }
        for (_, idx) in &groups {
            let ari = mark(&cells, idx, |s| s.ari.map(|a| a.mean), true);
            let mse = mark(&cells, idx, |s| Some(s.mse.mean), false);
            let wb = mark(&cells, idx, |s| Some(s.wb.mean), false);
            let time = mark(&cells, idx, |s| Some(s.time.mean), false);
            for (j, &i) in idx.iter().enumerate() {
                cells[i].best = BestMarks { ari: ari[j], mse: mse[j], wb: wb[j], time: time[j] };
            }
        }
        Self {
            std_convention: "sample (N-1)",
            cells,
        }
    }

    pub fn failed(&self) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(|c| c.stats().is_none())
    }

    /// 0 when every cell succeeded, else the highest failure class.
    pub fn exit_code(&self) -> i32 {
        self.failed()
            .map(|c| match c.outcome {
                CellOutcome::Failed { exit_code, .. } => exit_code,
                CellOutcome::Ok(_) => 0,
            })
            .max()
            .unwrap_or(0)
    }

    /// The cell for an algorithm, optionally at a contamination fraction.
    pub fn cell(&self, algorithm: Algorithm, fraction: Option<f64>) -> Option<&Cell> {
        self.cells.iter().find(|c| c.algorithm == algorithm && c.fraction == fraction)
    }

    pub fn render(&self, format: OutputFormat) -> Result<String> {
        Ok(match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Markdown => self.to_markdown(),
            OutputFormat::Json => self.to_json()?,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Usage(format!("cannot serialize report: {e}")))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "algorithm,dataset,fraction,k,runs,base_seed,status,ari_mean,ari_std_sample,mse_mean,mse_std_sample,\
             wb_mean,wb_std_sample,iters_mean,time_mean_s,time_std_sample,best,error\n",
        );
        let opt = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
        for c in &self.cells {
            let head = format!(
                "{},{},{},{},{},{}",
                c.algorithm,
                csv_field(&c.dataset),
                opt(c.fraction),
                c.k,
                c.repeats,
                c.base_seed
            );
            match &c.outcome {
                CellOutcome::Ok(s) => {
                    let best: Vec<&str> = [
                        (c.best.ari, "ari"),
                        (c.best.mse, "mse"),
                        (c.best.wb, "wb"),
                        (c.best.time, "time"),
                    ]
                    .into_iter()
                    .filter_map(|(b, n)| b.then_some(n))
                    .collect();
                    let _ = writeln!(
                        out,
                        "{head},ok,{},{},{},{},{},{},{},{},{},{},",
                        opt(s.ari.map(|a| a.mean)),
                        opt(s.ari.map(|a| a.std)),
                        s.mse.mean,
                        s.mse.std,
                        s.wb.mean,
                        s.wb.std,
                        s.iterations.mean,
                        s.time.mean,
                        s.time.std,
                        best.join(";"),
                    );
                }
                CellOutcome::Failed { message, .. } => {
                    let _ = writeln!(out, "{head},failed,,,,,,,,,,,{}", csv_field(message));
                }
            }
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let mut seen: Vec<(String, Option<u64>)> = Vec::new();
        for c in &self.cells {
            let g = c.group();
            if seen.contains(&g) {
                continue;
            }
            seen.push(g.clone());
            match c.fraction {
                Some(f) => {
                    let _ = writeln!(out, "### {} with outlier fraction {f}\n", c.dataset);
                }
                None => {
                    let _ = writeln!(out, "### {}\n", c.dataset);
                }
            }
            out.push_str("| Method | K | Runs | ARI | MSE | W/B | Iterations | Time (s) |\n");
            out.push_str("|---|---|---|---|---|---|---|---|\n");
            for c in self.cells.iter().filter(|x| x.group() == g) {
                match &c.outcome {
                    CellOutcome::Ok(s) => {
                        let ari = s
                            .ari
                            .map(|a| cell_text(a, 3, c.best.ari))
                            .unwrap_or_else(|| "n/a".into());
                        let _ = writeln!(
                            out,
                            "| {} | {} | {} | {} | {} | {} | {:.1} | {} |",
                            c.algorithm.label(),
                            c.k,
                            c.repeats,
                            ari,
                            cell_text(s.mse, 3, c.best.mse),
                            cell_text(s.wb, 3, c.best.wb),
                            s.iterations.mean,
                            cell_text(s.time, 4, c.best.time),
                        );
                    }
                    CellOutcome::Failed { seed, message, .. } => {
                        let _ = writeln!(
                            out,
                            "| {} | {} | {} | failed at seed {seed}: {} | | | | |",
                            c.algorithm.label(),
                            c.k,
                            c.repeats,
                            message.replace('|', "/"),
                        );
                    }
                }
            }
            out.push('\n');
        }
        out.push_str(
            "Values are mean ± sample standard deviation (denominator N-1) over the runs of each cell; \
             run i uses seed base_seed + i. Bold marks the best mean in each table.\n",
        );
        out
    }
}

fn cell_text(s: Summary, digits: usize, best: bool) -> String {
    let t = format!("{:.*} ± {:.*}", digits, s.mean, digits, s.std);
    if best {
        format!("**{t}**")
    } else {
        t
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
