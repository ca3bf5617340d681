use ndarray::{Array1, Array2};
use ndarray_linalg::LeastSquaresSvd;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_LEVELS: usize = 500;
const HISTOGRAM_BINS: usize = 40;
const HISTOGRAM_MAX: f64 = 4.0;

/// Kolmogorov-Smirnov distances of the unfolded spacings to the reference
/// distributions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpacingDistances {
    pub poisson: f64,
    pub wigner_dyson: f64,
    pub semi_poisson: f64,
}

impl SpacingDistances {
    /// Name of the closest reference.
    pub fn closest(&self) -> &'static str {
        let all = [
            ("poisson", self.poisson),
            ("wigner_dyson", self.wigner_dyson),
            ("semi_poisson", self.semi_poisson),
        ];
        all.iter().min_by(|a, b| a.1.total_cmp(&b.1)).unwrap().0
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LevelStatisticsResult {
    pub spacings: Vec<f64>,
    /// `(bin center, density)` over `[0, 4]`.
    pub histogram: Vec<(f64, f64)>,
    pub distances: SpacingDistances,
    pub mean_spacing: f64,
    pub trim_fraction: f64,
    pub fit_degree: usize,
}

pub fn poisson_cdf(s: f64) -> f64 {
    1.0 - (-s).exp()
}

pub fn wigner_dyson_cdf(s: f64) -> f64 {
    1.0 - (-std::f64::consts::PI * s * s / 4.0).exp()
}

pub fn semi_poisson_cdf(s: f64) -> f64 {
    1.0 - (1.0 + 2.0 * s) * (-2.0 * s).exp()
}

pub fn poisson_pdf(s: f64) -> f64 {
    (-s).exp()
}

pub fn wigner_dyson_pdf(s: f64) -> f64 {
    let pi = std::f64::consts::PI;
    pi * s / 2.0 * (-pi * s * s / 4.0).exp()
}

pub fn semi_poisson_pdf(s: f64) -> f64 {
    4.0 * s * (-2.0 * s).exp()
}

/// `sup |F_n - F|` of a sample against a continuous CDF.
pub fn ks_distance(sample: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut s = sample.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    s.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max((f - (i + 1) as f64 / n).abs())
        })
        .fold(0.0, f64::max)
}

/// Least-squares polynomial fit of the level staircase over the central
/// part of the spectrum, returned as `(center, half_width, coefficients)`
/// in the variable `x = (e - center) / half_width`.
fn fit_staircase(energies: &[f64], lo: usize, hi: usize, degree: usize) -> Result<(f64, f64, Vec<f64>)> {
    let (e_lo, e_hi) = (energies[lo], energies[hi - 1]);
    let center = 0.5 * (e_lo + e_hi);
    let half = (0.5 * (e_hi - e_lo)).max(f64::MIN_POSITIVE);
    let n = hi - lo;
    let mut a = Array2::<f64>::zeros((n, degree + 1));
    let mut b = Array1::<f64>::zeros(n);
    for (row, i) in (lo..hi).enumerate() {
        let x = (energies[i] - center) / half;
        let mut p = 1.0;
        for d in 0..=degree {
            a[(row, d)] = p;
            p *= x;
        }
        b[row] = i as f64;
    }
    let fit = a.least_squares(&b)?;
    Ok((center, half, fit.solution.to_vec()))
}

fn staircase_slope(coeffs: &[f64], center: f64, half: f64, e: f64) -> f64 {
    let x = (e - center) / half;
    let mut p = 1.0;
    let mut slope = 0.0;
    for (d, c) in coeffs.iter().enumerate().skip(1) {
        slope += d as f64 * c * p;
        p *= x;
    }
    slope / half
}

/// Unfolded spacings `s_i = (e_{i+1} - e_i) N'(e_i)` over the central
/// `1 - 2 trim_fraction` of an ascending spectrum, with `N` a polynomial fit
/// of the staircase.
pub fn level_statistics(energies: &[f64], trim_fraction: f64, fit_degree: usize) -> Result<LevelStatisticsResult> {
    if energies.len() < MIN_LEVELS {
        return Err(Error::Argument(format!(
            "level statistics need at least {MIN_LEVELS} levels, got {}",
            energies.len()
        )));
    }
    if !(0.0..0.5).contains(&trim_fraction) {
        return Err(Error::Argument(format!("trim fraction {trim_fraction} outside [0, 0.5)")));
    }
    if energies.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Argument("energies must be ascending".into()));
    }
    let n = energies.len();
    let lo = (trim_fraction * n as f64).floor() as usize;
    let hi = n - lo;
    let (center, half, coeffs) = fit_staircase(energies, lo, hi, fit_degree)?;
    let spacings: Vec<f64> = (lo..hi - 1)
        .map(|i| (energies[i + 1] - energies[i]) * staircase_slope(&coeffs, center, half, energies[i]))
        .collect();
    let mean_spacing = spacings.iter().sum::<f64>() / spacings.len() as f64;

    let width = HISTOGRAM_MAX / HISTOGRAM_BINS as f64;
    let mut counts = vec![0usize; HISTOGRAM_BINS];
    for &s in &spacings {
        if (0.0..HISTOGRAM_MAX).contains(&s) {
            counts[(s / width) as usize] += 1;
        }
    }
    let histogram = counts
        .iter()
        .enumerate()
        .map(|(b, &c)| ((b as f64 + 0.5) * width, c as f64 / (spacings.len() as f64 * width)))
        .collect();

    let distances = SpacingDistances {
        poisson: ks_distance(&spacings, poisson_cdf),
        wigner_dyson: ks_distance(&spacings, wigner_dyson_cdf),
        semi_poisson: ks_distance(&spacings, semi_poisson_cdf),
    };
    Ok(LevelStatisticsResult {
        spacings,
        histogram,
        distances,
        mean_spacing,
        trim_fraction,
        fit_degree,
    })
}
