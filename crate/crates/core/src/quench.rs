//! Quench experiments: evolve a density-wave product state and record
//! entanglement, correlations and return probability on a time grid.

use std::io::Write;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{named_state, ConstrainedBasis, FullBasis, NamedState, Space};
use crate::error::{Error, Result};
use crate::observables::{correlation, Anchor, Bipartition};
use crate::operators::{
    broken_pxp2_operator, deformed_operator, lmg_operator, pxp2_operator, sublattice_lmg_operator,
    FactoredOperator, ModelParameters,
};
use crate::solvers::{evolve_with, KrylovOptions};
use crate::state::StateVector;

/// Size limit for quenches in the unconstrained space.
pub const MAX_LMG_SITES: usize = 18;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QuenchModel {
    Pxp2,
    /// Uses `params.chi_drive`.
    Deformed,
    Lmg,
    SublatticeLmg { period: usize },
}

impl std::fmt::Display for QuenchModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            QuenchModel::Pxp2 => write!(f, "pxp2"),
            QuenchModel::Deformed => write!(f, "deformed"),
            QuenchModel::Lmg => write!(f, "lmg"),
            QuenchModel::SublatticeLmg { period } => write!(f, "sublattice_lmg_{period}"),
        }
    }
}

impl std::str::FromStr for QuenchModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pxp2" => Ok(QuenchModel::Pxp2),
            "deformed" => Ok(QuenchModel::Deformed),
            "lmg" => Ok(QuenchModel::Lmg),
            _ => s
                .strip_prefix("sublattice_lmg_")
                .and_then(|p| p.parse().ok())
                .map(|period| QuenchModel::SublatticeLmg { period })
                .ok_or_else(|| {
                    Error::Argument(format!(
                        "unknown model `{s}` (pxp2, deformed, lmg, sublattice_lmg_<p>)"
                    ))
                }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuenchObservable {
    Entropy,
    Correlations,
    OverlapWithInitial,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuenchSpec {
    pub model: QuenchModel,
    pub params: ModelParameters,
    pub initial: NamedState,
    pub times: Vec<f64>,
    pub observables: Vec<QuenchObservable>,
}

impl QuenchSpec {
    pub fn new(model: QuenchModel, params: ModelParameters, initial: NamedState) -> Self {
        Self {
            model,
            params,
            initial,
            times: default_times(),
            observables: vec![QuenchObservable::Entropy, QuenchObservable::Correlations],
        }
    }
}

/// `t = 0` followed by `n` log-spaced points over `[t_min, t_max]`.
pub fn log_times(t_min: f64, t_max: f64, n: usize) -> Vec<f64> {
    let (a, b) = (t_min.ln(), t_max.ln());
    std::iter::once(0.0)
        .chain((0..n).map(|i| (a + (b - a) * i as f64 / (n.max(2) - 1) as f64).exp()))
        .collect()
}

/// 200 log-spaced points over `tJ in [0.1, 100]`, preceded by `t = 0`.
pub fn default_times() -> Vec<f64> {
    log_times(0.1, 100.0, 200)
}

/// Named real columns on a common time grid, with `key = value` metadata.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub t: Vec<f64>,
    pub columns: Vec<(String, Vec<f64>)>,
    pub metadata: Vec<(String, String)>,
}

impl TimeSeries {
    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }

    pub fn entropy(&self) -> Result<&[f64]> {
        self.column(ENTROPY)
            .ok_or_else(|| Error::Argument("time series has no entropy column".into()))
    }

    /// Interpolated value of a column at time `t` (linear in `t`).
    pub fn value_at(&self, name: &str, t: f64) -> Option<f64> {
        let y = self.column(name)?;
        let i = self.t.partition_point(|&x| x < t);
        if i < self.t.len() && self.t[i] == t {
            return Some(y[i]);
        }
        if i == 0 || i == self.t.len() {
            return None;
        }
        let (t0, t1) = (self.t[i - 1], self.t[i]);
        Some(y[i - 1] + (y[i] - y[i - 1]) * (t - t0) / (t1 - t0))
    }

    /// CSV with `# key: value` metadata lines ahead of the header row.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        for (k, v) in &self.metadata {
            writeln!(out, "# {k}: {v}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["t".to_string()];
        header.extend(self.columns.iter().map(|(n, _)| n.clone()));
        w.write_record(&header)?;
        for (i, t) in self.t.iter().enumerate() {
            let mut row = vec![format!("{t:e}")];
            row.extend(self.columns.iter().map(|(_, v)| format!("{:e}", v[i])));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub const ENTROPY: &str = "entropy_bits";
pub const FIDELITY: &str = "overlap_with_initial";

fn correlation_column(r: usize) -> String {
    format!("C_{r}")
}

/// Operator, space and initial state of a quench.
struct Setup {
    space: Box<dyn Space>,
    op: FactoredOperator,
    initial: StateVector,
    anchor_bits: u32,
}

fn setup(spec: &QuenchSpec) -> Result<Setup> {
    let p = &spec.params;
    let len = p.sites;
    let pattern = spec.initial.pattern(len)?;
    match spec.model {
        QuenchModel::Pxp2 | QuenchModel::Deformed => {
            let basis = ConstrainedBasis::enumerate(len, p.bc)?;
            let op = match spec.model {
                QuenchModel::Deformed => deformed_operator(&basis, p)?,
                _ if p.epsilon_break != 0.0 => broken_pxp2_operator(&basis, p)?,
                _ => pxp2_operator(&basis, p)?,
            };
            let initial = named_state(&basis, spec.initial)?;
            Ok(Setup {
                space: Box::new(basis),
                op,
                initial,
                anchor_bits: pattern,
            })
        }
        QuenchModel::Lmg => {
            crate::guard::check("LMG quench sites", len, MAX_LMG_SITES)?;
            let space = FullBasis::new(len)?;
            let op = lmg_operator(len, p.delta)?;
            let initial = named_state(&space, spec.initial)?;
            Ok(Setup {
                space: Box::new(space),
                op,
                initial,
                anchor_bits: pattern,
            })
        }
        QuenchModel::SublatticeLmg { period } => {
            let op = sublattice_lmg_operator(len, period, p.delta)?;
            let n = len / period;
            crate::guard::check("LMG quench sites", n, MAX_LMG_SITES)?;
            let space = FullBasis::new(n)?;
            // the excited sublattice of a density wave starts fully excited
            let bits = if pattern == 0 { 0 } else { crate::basis::mask(n) };
            let mut amps = vec![C64::new(0.0, 0.0); space.dim()];
            amps[bits as usize] = C64::new(1.0, 0.0);
            let initial = StateVector::new(amps, space.tag());
            Ok(Setup {
                space: Box::new(space),
                op,
                initial,
                anchor_bits: bits,
            })
        }
    }
}

fn validate_times(times: &[f64]) -> Result<()> {
    if times.is_empty() || times[0] != 0.0 || times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Argument(
            "time grid must start at 0 and be strictly ascending".into(),
        ));
    }
    Ok(())
}

pub fn run_quench(spec: &QuenchSpec) -> Result<TimeSeries> {
    run_quench_with(spec, &KrylovOptions::default())
}

pub fn run_quench_with(spec: &QuenchSpec, krylov: &KrylovOptions) -> Result<TimeSeries> {
    validate_times(&spec.times)?;
    let s = setup(spec)?;
    let len = s.space.num_sites();
    let wants = |o| spec.observables.contains(&o);
    let bipartition = if wants(QuenchObservable::Entropy) {
        Some(Bipartition::new(s.space.as_ref(), len / 2)?)
    } else {
        None
    };
    let anchor = Anchor::excited_sites(s.anchor_bits, len);

    let mut entropy = Vec::new();
    let mut corr: Vec<Vec<f64>> = vec![Vec::new(); len / 2 + 1];
    let mut fidelity = Vec::new();
    evolve_with(&s.op, &s.initial, &spec.times, krylov, |_, psi| {
        if let Some(bp) = &bipartition {
            entropy.push(bp.entropy(psi)?);
        }
        if wants(QuenchObservable::Correlations) {
            for (col, c) in corr.iter_mut().zip(correlation(s.space.as_ref(), psi, &anchor)?) {
                col.push(c);
            }
        }
        if wants(QuenchObservable::OverlapWithInitial) {
            fidelity.push(s.initial.overlap(psi).norm_sqr());
        }
        Ok(())
    })?;

    let mut columns = Vec::new();
    if bipartition.is_some() {
        columns.push((ENTROPY.to_string(), entropy));
    }
    if wants(QuenchObservable::Correlations) {
        columns.extend(corr.into_iter().enumerate().map(|(r, c)| (correlation_column(r), c)));
    }
    if wants(QuenchObservable::OverlapWithInitial) {
        columns.push((FIDELITY.to_string(), fidelity));
    }
    let p = &spec.params;
    let metadata = vec![
        ("model".to_string(), spec.model.to_string()),
        ("L".to_string(), p.sites.to_string()),
        ("delta".to_string(), p.delta.to_string()),
        ("chi_drive".to_string(), p.chi_drive.to_string()),
        ("epsilon_break".to_string(), p.epsilon_break.to_string()),
        ("bc".to_string(), p.bc.to_string()),
        ("initial".to_string(), spec.initial.to_string()),
        ("entropy_base".to_string(), "2".to_string()),
    ];
    Ok(TimeSeries {
        t: spec.times.clone(),
        columns,
        metadata,
    })
}

/// `(slope, intercept, r^2)` of ordinary least squares `y ~ a x + b`.
pub fn fit_line(x: &[f64], y: &[f64]) -> Result<(f64, f64, f64)> {
    let n = x.len() as f64;
    if x.len() < 2 || x.len() != y.len() {
        return Err(Error::Argument("a line fit needs at least two paired points".into()));
    }
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Argument("degenerate abscissa in line fit".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok((slope, intercept, r2))
}

fn window_points(series: &TimeSeries, window: (f64, f64)) -> Result<(Vec<f64>, Vec<f64>)> {
    let s = series.entropy()?;
    let (t1, t2) = window;
    if !(t1 > 0.0 && t2 > t1) {
        return Err(Error::Argument(format!("fit window [{t1}, {t2}] must satisfy 0 < t1 < t2")));
    }
    let (t, y): (Vec<f64>, Vec<f64>) = series
        .t
        .iter()
        .zip(s)
        .filter(|(&t, _)| t >= t1 && t <= t2)
        .map(|(&t, &y)| (t, y))
        .unzip();
    if t.len() < 2 {
        return Err(Error::Argument(format!("fewer than two grid points in [{t1}, {t2}]")));
    }
    Ok((t, y))
}

/// Least squares of the entropy against `ln t` over a window.
pub fn log_growth_fit(series: &TimeSeries, window: (f64, f64)) -> Result<(f64, f64, f64)> {
    let (t, y) = window_points(series, window)?;
    let lt: Vec<f64> = t.iter().map(|t| t.ln()).collect();
    fit_line(&lt, &y)
}

/// Least squares of the entropy against `t` over a window.
pub fn linear_growth_fit(series: &TimeSeries, window: (f64, f64)) -> Result<(f64, f64, f64)> {
    let (t, y) = window_points(series, window)?;
    fit_line(&t, &y)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthScan {
    /// `(delta, rate)`
    pub rates: Vec<(f64, f64)>,
    pub argmax_delta: f64,
}

pub const DEFAULT_GROWTH_WINDOW: (f64, f64) = (1.0, 10.0);

/// Logarithmic entanglement growth rate for each field, on a log-spaced grid
/// covering the window.
pub fn growth_rate_scan(
    model: QuenchModel,
    params: &ModelParameters,
    deltas: &[f64],
    initial: NamedState,
    window: (f64, f64),
) -> Result<GrowthScan> {
    if deltas.is_empty() {
        return Err(Error::Argument("empty field list".into()));
    }
    let times = log_times(window.0, window.1, 40);
    let rates: Vec<(f64, f64)> = deltas
        .par_iter()
        .map(|&delta| {
            let spec = QuenchSpec {
                model,
                params: ModelParameters { delta, ..*params },
                initial,
                times: times.clone(),
                observables: vec![QuenchObservable::Entropy],
            };
            let series = run_quench(&spec)?;
            Ok((delta, log_growth_fit(&series, window)?.0))
        })
        .collect::<Result<_>>()?;
    let argmax_delta = rates
        .iter()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map(|r| r.0)
        .unwrap();
    Ok(GrowthScan { rates, argmax_delta })
}
