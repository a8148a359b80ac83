//! Density sweeps over generated meeting-scheduling instances.
//!
//! Each cell `(density index, instance index)` draws its seed as
//! `derive_seed(master, [density_index, instance_index])`. That seed
//! generates the instance and drives every algorithm run on it, so all
//! algorithms of a cell solve the same instance from the same random
//! streams.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::hash::Hasher;
use std::io;
use std::path::Path;

use fnv::FnvHasher;
use rayon::prelude::*;
use serde::Serialize;

use crate::engine;
use crate::error::{Error, Result};
use crate::generator::{generate, GenConfig};
use crate::model::{self, Instance};
use crate::seeding;
use crate::solvers::{SolverKind, SolverParams};

pub const CSV_HEADER: &str = "algorithm,density,seed,privacy_loss_per_agent,solution_quality_per_agent,total_cost_per_agent,rounds,messages,satisfied";

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub densities: Vec<f64>,
    pub instances: usize,
    /// `density` and `seed` are overwritten per cell.
    pub template: GenConfig,
    pub algorithms: Vec<SolverKind>,
    pub params: SolverParams,
    pub seed: u64,
    pub budget: u32,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            densities: vec![0.1, 0.2, 0.3, 0.4, 0.5],
            instances: 50,
            template: GenConfig::default(),
            algorithms: vec![
                SolverKind::Dsa,
                SolverKind::Dsau,
                SolverKind::Dbo,
                SolverKind::Dbou,
            ],
            params: SolverParams::default(),
            seed: 0,
            budget: 500,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.densities.is_empty() {
            return Err(Error::Config("at least one density is required".into()));
        }
        if self.algorithms.is_empty() {
            return Err(Error::Config("at least one algorithm is required".into()));
        }
        if self.instances == 0 {
            return Err(Error::Config(
                "instances per cell must be at least 1".into(),
            ));
        }
        if self.budget == 0 {
            return Err(Error::ZeroBudget);
        }
        for &density in &self.densities {
            GenConfig {
                density,
                ..self.template.clone()
            }
            .validate()?;
        }
        self.params.validate()
    }

    pub fn cell_seed(&self, density_index: usize, instance_index: usize) -> u64 {
        seeding::derive_seed(self.seed, &[density_index as u64, instance_index as u64])
    }

    pub fn instance(&self, density_index: usize, instance_index: usize) -> Result<Instance> {
        generate(&GenConfig {
            density: self.densities[density_index],
            seed: self.cell_seed(density_index, instance_index),
            ..self.template.clone()
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsRow {
    pub algorithm: SolverKind,
    pub density: f64,
    pub seed: u64,
    pub privacy_loss_per_agent: f64,
    pub solution_quality_per_agent: f64,
    pub total_cost_per_agent: f64,
    pub rounds: u32,
    pub messages: u64,
    pub satisfied: bool,
    #[serde(skip)]
    pub unpenalized_quality_per_agent: f64,
    /// FNV-1a hash of the instance document.
    #[serde(skip)]
    pub instance_hash: u64,
    #[serde(skip)]
    pub instance_index: usize,
}

pub fn instance_hash(inst: &Instance) -> u64 {
    let mut h = FnvHasher::default();
    h.write(model::to_json(inst).as_bytes());
    h.finish()
}

/// Runs every cell, in parallel, and returns the rows ordered by density,
/// instance and then algorithm as listed in the config.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<MetricsRow>> {
    cfg.validate()?;
    let cells: Vec<(usize, usize)> = (0..cfg.densities.len())
        .flat_map(|d| (0..cfg.instances).map(move |i| (d, i)))
        .collect();
    let per_cell: Vec<Vec<MetricsRow>> = cells
        .par_iter()
        .map(|&(d, i)| run_cell(cfg, d, i))
        .collect::<Result<_>>()?;
    Ok(per_cell.into_iter().flatten().collect())
}

fn run_cell(cfg: &SweepConfig, d: usize, i: usize) -> Result<Vec<MetricsRow>> {
    let density = cfg.densities[d];
    let seed = cfg.cell_seed(d, i);
    let inst = cfg.instance(d, i)?;
    let hash = instance_hash(&inst);
    cfg.algorithms
        .iter()
        .map(|&algo| {
            let (out, _) =
                engine::run(&inst, algo, &cfg.params, seed, cfg.budget).map_err(|e| {
                    Error::Cell {
                        density,
                        instance: i,
                        algorithm: algo.to_string(),
                        source: Box::new(e),
                    }
                })?;
            let m = &out.metrics;
            Ok(MetricsRow {
                algorithm: algo,
                density,
                seed,
                privacy_loss_per_agent: m.privacy_loss_per_agent,
                solution_quality_per_agent: m.solution_quality_per_agent,
                total_cost_per_agent: m.total_cost_per_agent,
                rounds: out.rounds,
                messages: out.messages,
                satisfied: m.satisfied,
                unpenalized_quality_per_agent: m.unpenalized_quality_per_agent,
                instance_hash: hash,
                instance_index: i,
            })
        })
        .collect()
}

pub fn write_csv<W: io::Write>(rows: &[MetricsRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn csv_string(rows: &[MetricsRow]) -> Result<String> {
    let mut buf = Vec::new();
    if rows.is_empty() {
        buf.extend_from_slice(CSV_HEADER.as_bytes());
        buf.push(b'\n');
    } else {
        write_csv(rows, &mut buf)?;
    }
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

/// One line per cell instance: which instance every row of that cell ran on.
pub fn instances_csv(rows: &[MetricsRow]) -> String {
    let mut out = String::from("density,instance,seed,instance_hash\n");
    let mut seen = std::collections::BTreeSet::new();
    for r in rows {
        if seen.insert((r.density.to_bits(), r.instance_index)) {
            let _ = writeln!(
                out,
                "{},{},{},{:016x}",
                r.density, r.instance_index, r.seed, r.instance_hash
            );
        }
    }
    out
}

/// Writes `metrics.csv`, `instances.csv` and `summary.txt` into `dir`.
pub fn write_outputs(rows: &[MetricsRow], dir: &Path) -> Result<()> {
    let io_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| Error::Io { path, source }
    };
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    let files = [
        ("metrics.csv", csv_string(rows)?),
        ("instances.csv", instances_csv(rows)),
        ("summary.txt", summary_text(&aggregate(rows))),
    ];
    for (name, body) in files {
        let path = dir.join(name);
        std::fs::write(&path, body).map_err(io_err(&path))?;
    }
    Ok(())
}

/// Mean with a 95% normal-approximation half-width `1.96·s/√n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub half_width: f64,
}

impl Estimate {
    pub fn of(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let half_width = if xs.len() < 2 {
            0.0
        } else {
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
            1.96 * var.sqrt() / n.sqrt()
        };
        Self { mean, half_width }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub algorithm: SolverKind,
    pub density: f64,
    pub runs: usize,
    pub privacy: Estimate,
    pub quality: Estimate,
    pub total: Estimate,
    pub satisfied_rate: f64,
    pub mean_rounds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    /// Sorted by algorithm, then density.
    pub cells: Vec<CellSummary>,
    /// Mean solution quality per agent over all densities, per algorithm.
    pub quality_by_algorithm: Vec<(SolverKind, f64)>,
}

impl Aggregate {
    pub fn cell(&self, algorithm: SolverKind, density: f64) -> Option<&CellSummary> {
        self.cells
            .iter()
            .find(|c| c.algorithm == algorithm && c.density == density)
    }
}

pub fn aggregate(rows: &[MetricsRow]) -> Aggregate {
    let mut groups: BTreeMap<(SolverKind, u64), Vec<&MetricsRow>> = BTreeMap::new();
    for r in rows {
        groups
            .entry((r.algorithm, r.density.to_bits()))
            .or_default()
            .push(r);
    }
    let cells = groups
        .into_values()
        .map(|g| {
            let col = |f: fn(&MetricsRow) -> f64| g.iter().map(|r| f(r)).collect::<Vec<_>>();
            CellSummary {
                algorithm: g[0].algorithm,
                density: g[0].density,
                runs: g.len(),
                privacy: Estimate::of(&col(|r| r.privacy_loss_per_agent)),
                quality: Estimate::of(&col(|r| r.solution_quality_per_agent)),
                total: Estimate::of(&col(|r| r.total_cost_per_agent)),
                satisfied_rate: g.iter().filter(|r| r.satisfied).count() as f64 / g.len() as f64,
                mean_rounds: g.iter().map(|r| r.rounds as f64).sum::<f64>() / g.len() as f64,
            }
        })
        .collect();

    let mut by_algo: BTreeMap<SolverKind, Vec<f64>> = BTreeMap::new();
    for r in rows {
        by_algo
            .entry(r.algorithm)
            .or_default()
            .push(r.solution_quality_per_agent);
    }
    let quality_by_algorithm = by_algo
        .into_iter()
        .map(|(a, xs)| (a, xs.iter().sum::<f64>() / xs.len() as f64))
        .collect();
    Aggregate {
        cells,
        quality_by_algorithm,
    }
}

fn metric_table(
    out: &mut String,
    title: &str,
    agg: &Aggregate,
    pick: fn(&CellSummary) -> Estimate,
) {
    let mut densities: Vec<f64> = agg.cells.iter().map(|c| c.density).collect();
    densities.sort_by(f64::total_cmp);
    densities.dedup();
    let mut algos: Vec<SolverKind> = agg.cells.iter().map(|c| c.algorithm).collect();
    algos.dedup();

    let _ = writeln!(out, "{title}");
    let _ = write!(out, "{:<8}", "density");
    for a in &algos {
        let _ = write!(out, "{:>18}", a.name());
    }
    out.push('\n');
    for d in &densities {
        let _ = write!(out, "{d:<8}");
        for a in &algos {
            match agg.cell(*a, *d) {
                Some(c) => {
                    let e = pick(c);
                    let _ = write!(
                        out,
                        "{:>18}",
                        format!("{:.2} ± {:.2}", e.mean, e.half_width)
                    );
                }
                None => {
                    let _ = write!(out, "{:>18}", "-");
                }
            }
        }
        out.push('\n');
    }
    out.push('\n');
}

/// Plain-text tables: privacy loss, total cost and solution quality per
/// agent by density, satisfaction rates, and quality per algorithm.
pub fn summary_text(agg: &Aggregate) -> String {
    let mut out = String::new();
    metric_table(
        &mut out,
        "privacy loss per agent (mean ± 95% half-width)",
        agg,
        |c| c.privacy,
    );
    metric_table(
        &mut out,
        "total cost per agent (mean ± 95% half-width)",
        agg,
        |c| c.total,
    );
    metric_table(
        &mut out,
        "solution quality per agent (mean ± 95% half-width)",
        agg,
        |c| c.quality,
    );
    metric_table(&mut out, "fraction of runs ending in agreement", agg, |c| {
        Estimate {
            mean: c.satisfied_rate,
            half_width: 0.0,
        }
    });
    let _ = writeln!(out, "average solution quality per agent, all densities");
    for (a, q) in &agg.quality_by_algorithm {
        let _ = writeln!(out, "{:<8}{q:.2}", a.name());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SweepConfig {
        SweepConfig {
            densities: vec![0.2, 0.4],
            instances: 3,
            template: GenConfig {
                n: 5,
                d: 5,
                ..GenConfig::default()
            },
            budget: 200,
            ..SweepConfig::default()
        }
    }

    #[test]
    fn row_count_and_order() {
        let cfg = small();
        let rows = run_sweep(&cfg).unwrap();
        assert_eq!(rows.len(), 2 * 3 * 4);
        assert_eq!(rows[0].algorithm, SolverKind::Dsa);
        assert_eq!(rows[3].algorithm, SolverKind::Dbou);
        assert_eq!(rows[4].instance_index, 1);
        for cell in rows.chunks(4) {
            assert!(cell
                .iter()
                .all(|r| r.instance_hash == cell[0].instance_hash));
            assert!(cell.iter().all(|r| r.seed == cell[0].seed));
        }
    }

    #[test]
    fn csv_is_reproducible() {
        let cfg = small();
        let a = csv_string(&run_sweep(&cfg).unwrap()).unwrap();
        let b = csv_string(&run_sweep(&cfg).unwrap()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.lines().next().unwrap(), CSV_HEADER);
        assert_eq!(a.lines().count(), 1 + 24);
    }

    #[test]
    fn single_row_aggregate() {
        let cfg = SweepConfig {
            densities: vec![0.3],
            instances: 1,
            algorithms: vec![SolverKind::Dsau],
            ..small()
        };
        let rows = run_sweep(&cfg).unwrap();
        let agg = aggregate(&rows);
        let c = &agg.cells[0];
        assert_eq!(c.privacy.mean, rows[0].privacy_loss_per_agent);
        assert_eq!(c.privacy.half_width, 0.0);
        assert_eq!(
            agg.quality_by_algorithm,
            vec![(SolverKind::Dsau, rows[0].solution_quality_per_agent)]
        );
    }

    #[test]
    fn means_are_additive() {
        let rows = run_sweep(&small()).unwrap();
        let agg = aggregate(&rows);
        assert_eq!(agg.quality_by_algorithm.len(), 4);
        for c in &agg.cells {
            assert!((c.total.mean - c.privacy.mean - c.quality.mean).abs() < 1e-9);
        }
        let text = summary_text(&agg);
        assert!(text.contains("privacy loss per agent"));
        assert!(text.contains("dbou"));
    }

    #[test]
    fn half_width() {
        let e = Estimate::of(&[1.0, 3.0]);
        assert_eq!(e.mean, 2.0);
        assert!((e.half_width - 1.96 * 2f64.sqrt() / 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn rejects_empty_configs() {
        assert!(run_sweep(&SweepConfig {
            densities: vec![],
            ..small()
        })
        .is_err());
        assert!(run_sweep(&SweepConfig {
            instances: 0,
            ..small()
        })
        .is_err());
    }
}
