//! Parameter sweeps that pair Monte Carlo flooding with the analytical predictions,
//! the reach-matched calibration of `p`, and result serialization.

use std::io::Write;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::{predict, predict_pn, Prediction, WaitingPrediction};
use crate::degree::DegreeModel;
use crate::error::{FloodError, Result};
use crate::graph::{generate_configuration, generate_er, largest_component, ComponentLabeling, Graph};
use crate::rule::FloodRule;
use crate::seed::{child_rng, child_seed};
use crate::sim::{sample_instances, BatchStats, InstanceSample};

/// Header of every CSV result file.
pub const CSV_HEADER: [&str; 17] = [
    "family",
    "param",
    "rule",
    "rule_param",
    "pn_sim",
    "pn_se",
    "pm_sim",
    "pm_se",
    "pt_sim",
    "pt_se",
    "pn_pred",
    "pm_pred",
    "pt_pred",
    "graphs",
    "instances",
    "n",
    "seed",
];

/// Tolerance on predicted reach used when matching `p` to a simulated heuristic run.
pub const CALIBRATION_TOLERANCE: f64 = 1e-6;

const GRAPH_STREAM: u64 = 0;
const INSTANCE_STREAM: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelFamily {
    /// Erdős–Rényi graphs, Poisson degrees with mean `z`.
    Poisson,
    /// Configuration-model graphs with `P(a) ∝ a^-tau`.
    PowerLaw,
}

impl ModelFamily {
    pub fn name(&self) -> &'static str {
        match self {
            ModelFamily::Poisson => "poisson",
            ModelFamily::PowerLaw => "power_law",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub family: ModelFamily,
    /// `z` values (Poisson) or `tau` values (power law).
    pub grid: Vec<f64>,
    pub n: usize,
    pub rules: Vec<FloodRule>,
    pub graphs: usize,
    pub instances: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    /// Truncation bound of the degree model; `n - 1` when absent.
    pub max_degree: Option<usize>,
    /// Accept grid points at or below the phase transition.
    pub allow_subcritical: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            family: ModelFamily::Poisson,
            grid: vec![],
            n: 2000,
            rules: vec![FloodRule::Uninformed],
            graphs: 5,
            instances: 200,
            seed: 1,
            out: None,
            format: OutputFormat::Csv,
            max_degree: None,
            allow_subcritical: false,
        }
    }
}

impl SweepConfig {
    /// Scale used for publication-size runs.
    pub fn full_scale(mut self) -> Self {
        self.n = 10_000;
        self.graphs = match self.family {
            ModelFamily::Poisson => 15,
            ModelFamily::PowerLaw => 300,
        };
        self.instances = 1000;
        self
    }

    pub fn truncation(&self) -> usize {
        self.max_degree.unwrap_or(self.n.saturating_sub(1)).max(1)
    }

    pub fn model_at(&self, param: f64) -> Result<DegreeModel> {
        let d = self.truncation();
        match self.family {
            ModelFamily::Poisson => DegreeModel::poisson(param, d),
            ModelFamily::PowerLaw => DegreeModel::power_law(param, d),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(FloodError::InvalidConfig(msg));
        if self.grid.is_empty() {
            return bad("parameter grid is empty".into());
        }
        if self.n < 2 {
            return bad(format!("n must be at least 2, got {}", self.n));
        }
        if self.graphs == 0 || self.instances == 0 {
            return bad("graphs and instances must be at least 1".into());
        }
        if self.rules.is_empty() {
            return bad("no flooding rules given".into());
        }
        for rule in &self.rules {
            rule.validate()?;
        }
        for &param in &self.grid {
            let model = self.model_at(param)?;
            if !self.allow_subcritical {
                let (above, ratio) = model.above_phase_transition()?;
                if !above {
                    return bad(format!(
                        "{} point {param} is not above the phase transition (<K^2>/Z = {ratio:.4})",
                        self.family.name()
                    ));
                }
            }
        }
        Ok(())
    }
}

/// One line of results: a grid point under one rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub family: ModelFamily,
    pub param: f64,
    pub rule: String,
    pub rule_param: Option<f64>,
    pub pn_sim: Option<f64>,
    pub pn_se: Option<f64>,
    pub pm_sim: Option<f64>,
    pub pm_se: Option<f64>,
    pub pt_sim: Option<f64>,
    pub pt_se: Option<f64>,
    pub pn_pred: Option<f64>,
    pub pm_pred: Option<f64>,
    pub pt_pred: Option<f64>,
    pub graphs: usize,
    pub instances: usize,
    pub n: usize,
    pub seed: u64,
    /// Set when the point could not be simulated.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

impl SweepRow {
    fn new(config: &SweepConfig, param: f64, rule: &FloodRule) -> Self {
        SweepRow {
            family: config.family,
            param,
            rule: rule.name().to_string(),
            rule_param: rule.parameter(),
            pn_sim: None,
            pn_se: None,
            pm_sim: None,
            pm_se: None,
            pt_sim: None,
            pt_se: None,
            pn_pred: None,
            pm_pred: None,
            pt_pred: None,
            graphs: config.graphs,
            instances: config.instances,
            n: config.n,
            seed: config.seed,
            error: None,
        }
    }

    fn with_prediction(mut self, prediction: Option<&Prediction>) -> Self {
        if let Some(p) = prediction {
            self.pn_pred = Some(p.p_n);
            self.pm_pred = Some(p.p_m);
            self.pt_pred = match p.p_t {
                WaitingPrediction::Value(v) => Some(v),
                _ => None,
            };
        }
        self
    }

    fn with_stats(mut self, stats: &BatchStats) -> Self {
        self.pn_sim = Some(stats.pn.mean);
        self.pn_se = Some(stats.pn.std_err);
        self.pm_sim = Some(stats.pm.mean);
        self.pm_se = Some(stats.pm.std_err);
        self.pt_sim = stats.pt.map(|e| e.mean);
        self.pt_se = stats.pt.map(|e| e.std_err);
        self
    }

    fn failed(mut self, err: &FloodError) -> Self {
        self.error = Some(err.to_string());
        self
    }

    fn csv_record(&self) -> Vec<String> {
        let num = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        vec![
            self.family.name().to_string(),
            self.param.to_string(),
            self.rule.clone(),
            num(self.rule_param),
            num(self.pn_sim),
            num(self.pn_se),
            num(self.pm_sim),
            num(self.pm_se),
            num(self.pt_sim),
            num(self.pt_se),
            num(self.pn_pred),
            num(self.pm_pred),
            num(self.pt_pred),
            self.graphs.to_string(),
            self.instances.to_string(),
            self.n.to_string(),
            self.seed.to_string(),
        ]
    }
}

/// Graph `g` of grid point `point`, exactly as a sweep over `config` generates it.
pub fn point_graph(config: &SweepConfig, point: usize, g: usize, model: &DegreeModel) -> Result<Graph> {
    let param = *config
        .grid
        .get(point)
        .ok_or_else(|| FloodError::InvalidConfig(format!("grid has no point {point}")))?;
    let mut rng = child_rng(config.seed, &[point as u64, g as u64, GRAPH_STREAM]);
    match config.family {
        ModelFamily::Poisson => generate_er(config.n, param, &mut rng),
        ModelFamily::PowerLaw => generate_configuration(config.n, model, &mut rng),
    }
}

/// Graphs sampled for one grid point, shared by every rule at that point.
struct PointGraphs {
    graphs: Vec<(Graph, ComponentLabeling)>,
}

impl PointGraphs {
    fn generate(config: &SweepConfig, point: usize, model: &DegreeModel) -> Result<Self> {
        let graphs = (0..config.graphs)
            .into_par_iter()
            .map(|g| {
                let graph = point_graph(config, point, g, model)?;
                let labeling = largest_component(&graph);
                Ok((graph, labeling))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PointGraphs { graphs })
    }

    /// Pooled statistics over all graph × instance samples. Instance seeds depend
    /// on the point, graph and instance index but not the rule.
    fn simulate(&self, config: &SweepConfig, point: usize, rule: FloodRule) -> Result<BatchStats> {
        let mut pooled: Vec<InstanceSample> = Vec::with_capacity(self.graphs.len() * config.instances);
        let mut component_total = 0;
        for (g, (graph, labeling)) in self.graphs.iter().enumerate() {
            let base = child_seed(config.seed, &[point as u64, g as u64, INSTANCE_STREAM]);
            pooled.extend(sample_instances(graph, labeling, rule, config.instances, base)?);
            component_total += labeling.largest_size();
        }
        BatchStats::from_samples(&pooled, component_total / self.graphs.len())
    }
}

/// Simulates and predicts every rule at every grid point, in grid order then rule order.
///
/// A point whose graphs cannot be generated yields error rows; the sweep continues.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    config.validate()?;
    let mut rows = Vec::with_capacity(config.grid.len() * config.rules.len());
    for (point, &param) in config.grid.iter().enumerate() {
        let model = config.model_at(param)?;
        let predictions: Vec<Option<Prediction>> = config
            .rules
            .iter()
            .map(|&rule| predict(&model, rule, config.n).ok())
            .collect();
        let graphs = PointGraphs::generate(config, point, &model);
        for (rule, prediction) in config.rules.iter().zip(&predictions) {
            let row = SweepRow::new(config, param, rule).with_prediction(prediction.as_ref());
            let row = match graphs.as_ref() {
                Ok(graphs) => match graphs.simulate(config, point, *rule) {
                    Ok(stats) => row.with_stats(&stats),
                    Err(err) => row.failed(&err),
                },
                Err(err) => row.failed(err),
            };
            rows.push(row);
        }
    }
    Ok(rows)
}

/// Predictions only: one row per grid point and rule with the simulated columns empty.
///
/// Points where analytics fail carry the error in the row.
pub fn analyze_grid(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    config.validate()?;
    let mut rows = Vec::with_capacity(config.grid.len() * config.rules.len());
    for &param in &config.grid {
        let model = config.model_at(param)?;
        for rule in &config.rules {
            let mut row = SweepRow::new(config, param, rule);
            row.graphs = 0;
            row.instances = 0;
            rows.push(match predict(&model, *rule, config.n) {
                Ok(prediction) => row.with_prediction(Some(&prediction)),
                Err(err) => row.failed(&err),
            });
        }
    }
    Ok(rows)
}

/// Finds `p` whose predicted reach matches `target_pn` within `tolerance`, by bisection on `[0, 1]`.
pub fn calibrate_p(model: &DegreeModel, target_pn: f64, tolerance: f64) -> Result<f64> {
    if target_pn.is_nan() || target_pn <= 0.0 {
        return Err(FloodError::Calibration(format!(
            "target reach must be positive, got {target_pn}"
        )));
    }
    let reach = |p: f64| predict_pn(model, FloodRule::Probabilistic { p });
    let ceiling = reach(1.0)?;
    if target_pn > ceiling {
        return Err(FloodError::Calibration(format!(
            "target reach {target_pn} exceeds the reach of uninformed flooding ({ceiling})"
        )));
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut mid = 0.5;
    for _ in 0..100 {
        mid = 0.5 * (lo + hi);
        let value = reach(mid)?;
        if (value - target_pn).abs() < tolerance {
            return Ok(mid);
        }
        if value < target_pn {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(mid)
}

/// Heuristic row and its reach-matched probabilistic counterpart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonPair {
    pub heuristic: SweepRow,
    pub probabilistic: SweepRow,
    /// Calibrated `p`, absent when calibration failed.
    pub calibrated_p: Option<f64>,
}

/// At every grid point: simulate the configured heuristic rule, calibrate `p`
/// against its simulated reach, then simulate probabilistic flooding at that
/// `p` on the same graphs and originators.
pub fn run_comparison(config: &SweepConfig) -> Result<Vec<ComparisonPair>> {
    config.validate()?;
    let heuristic = config
        .rules
        .iter()
        .copied()
        .find(|r| matches!(r, FloodRule::Heuristic { .. }))
        .ok_or_else(|| FloodError::InvalidConfig("comparison needs a heuristic rule".into()))?;
    let mut pairs = Vec::with_capacity(config.grid.len());
    for (point, &param) in config.grid.iter().enumerate() {
        let model = config.model_at(param)?;
        let heur_row = SweepRow::new(config, param, &heuristic)
            .with_prediction(predict(&model, heuristic, config.n).ok().as_ref());
        let mut prob_row = SweepRow::new(config, param, &FloodRule::Probabilistic { p: 0.0 });
        prob_row.rule_param = None;

        let graphs = match PointGraphs::generate(config, point, &model) {
            Ok(g) => g,
            Err(err) => {
                pairs.push(ComparisonPair {
                    heuristic: heur_row.failed(&err),
                    probabilistic: prob_row.failed(&err),
                    calibrated_p: None,
                });
                continue;
            }
        };
        let heur_stats = match graphs.simulate(config, point, heuristic) {
            Ok(s) => s,
            Err(err) => {
                pairs.push(ComparisonPair {
                    heuristic: heur_row.failed(&err),
                    probabilistic: prob_row.failed(&err),
                    calibrated_p: None,
                });
                continue;
            }
        };
        let heur_row = heur_row.with_stats(&heur_stats);
        let calibrated = calibrate_p(&model, heur_stats.pn.mean, CALIBRATION_TOLERANCE);
        let (prob_row, calibrated_p) = match calibrated {
            Ok(p) => {
                let rule = FloodRule::Probabilistic { p };
                let row =
                    SweepRow::new(config, param, &rule).with_prediction(predict(&model, rule, config.n).ok().as_ref());
                let row = match graphs.simulate(config, point, rule) {
                    Ok(stats) => row.with_stats(&stats),
                    Err(err) => row.failed(&err),
                };
                (row, Some(p))
            }
            Err(err) => (prob_row.failed(&err), None),
        };
        pairs.push(ComparisonPair {
            heuristic: heur_row,
            probabilistic: prob_row,
            calibrated_p,
        });
    }
    Ok(pairs)
}

/// Flattens comparison pairs into heuristic/probabilistic row order.
pub fn comparison_rows(pairs: &[ComparisonPair]) -> Vec<SweepRow> {
    pairs
        .iter()
        .flat_map(|p| [p.heuristic.clone(), p.probabilistic.clone()])
        .collect()
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    let io = |e: csv::Error| FloodError::Io(e.to_string());
    writer.write_record(CSV_HEADER).map_err(io)?;
    for row in rows {
        writer.write_record(row.csv_record()).map_err(io)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn write_json<W: Write, T: Serialize + ?Sized>(value: &T, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| FloodError::Io(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

pub fn write_rows<W: Write>(rows: &[SweepRow], format: OutputFormat, out: W) -> Result<()> {
    match format {
        OutputFormat::Csv => write_csv(rows, out),
        OutputFormat::Json => write_json(rows, out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn small_config() -> SweepConfig {
        SweepConfig {
            grid: vec![6.0],
            n: 300,
            graphs: 2,
            instances: 10,
            seed: 17,
            ..Default::default()
        }
    }

    #[test]
    fn uninformed_row_is_exactly_one() {
        let rows = run_sweep(&small_config()).unwrap();
        assert_eq!(rows.len(), 1);
        let row = &rows[0];
        assert_eq!(row.pn_sim, Some(1.0));
        assert_eq!(row.pm_sim, Some(1.0));
        assert_eq!(row.pt_sim, Some(1.0));
        assert_abs_diff_eq!(row.pn_pred.unwrap(), 1.0, epsilon = 1e-9);
        assert!(row.error.is_none());
    }

    #[test]
    fn config_validation() {
        let mut c = small_config();
        c.grid.clear();
        assert!(c.validate().is_err());
        let mut c = small_config();
        c.grid = vec![0.9];
        assert!(c.validate().is_err());
        c.allow_subcritical = true;
        assert!(c.validate().is_ok());
        let mut c = small_config();
        c.instances = 0;
        assert!(c.validate().is_err());
        let mut c = small_config();
        c.rules = vec![FloodRule::Heuristic { alpha: 1.0 }];
        assert!(c.validate().is_err());
    }

    #[test]
    fn full_scale_settings() {
        let c = SweepConfig {
            family: ModelFamily::PowerLaw,
            ..Default::default()
        }
        .full_scale();
        assert_eq!((c.n, c.graphs, c.instances), (10_000, 300, 1000));
        let c = SweepConfig::default().full_scale();
        assert_eq!(c.graphs, 15);
    }

    #[test]
    fn calibration_round_trip() {
        let model = DegreeModel::poisson(5.0, 1999).unwrap();
        let target = predict_pn(&model, FloodRule::Probabilistic { p: 0.7 }).unwrap();
        let p = calibrate_p(&model, target, 1e-9).unwrap();
        assert_abs_diff_eq!(p, 0.7, epsilon = 1e-4);
    }

    #[test]
    fn calibration_rejects_unreachable_and_degenerate_targets() {
        let model = DegreeModel::poisson(5.0, 1999).unwrap();
        assert!(matches!(
            calibrate_p(&model, 1.01, 1e-6),
            Err(FloodError::Calibration(_))
        ));
        assert!(matches!(
            calibrate_p(&model, 0.0, 1e-6),
            Err(FloodError::Calibration(_))
        ));
    }

    #[test]
    fn csv_shape() {
        let rows = run_sweep(&small_config()).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
        let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(fields.len(), 17);
        assert_eq!(fields[0], "poisson");
        assert_eq!(fields[2], "uninformed");
        assert_eq!(fields[3], "");
    }

    #[test]
    fn failed_point_yields_error_row() {
        // z = 5 is a valid truncated model but exceeds n - 1 for ER generation
        let config = SweepConfig {
            grid: vec![5.0, 2.0],
            n: 4,
            graphs: 1,
            instances: 3,
            rules: vec![FloodRule::Uninformed, FloodRule::Probabilistic { p: 0.5 }],
            ..Default::default()
        };
        let rows = run_sweep(&config).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows[0].error.is_some() && rows[1].error.is_some());
        assert!(rows[0].pn_sim.is_none());
        assert!(rows[2].error.is_none());
        assert_eq!(rows[2].pn_sim, Some(1.0));
    }
}
