//! Soft-spin description of the paramagnetic phase.
//!
//! With uniform multipliers the modes disperse as
//! `omega_k = 2 sqrt(r (r - chi - lambda cos k - J delta_{k0}))`, `r = 2 Delta`,
//! and `(chi, lambda)` follow from
//!
//! ```text
//! (1/L) sum_k r / omega_k = 1        (unit length)
//! (1/L) sum_k cos k / omega_k = 0    (blockade)
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MAX_NEWTON: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SoftSpinParams {
    pub delta: f64,
    pub j: f64,
    pub sites: usize,
    /// Stiffness, always `2 Delta`.
    pub r: f64,
    pub chi_constraint: f64,
    pub lambda: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DispersionResult {
    pub k_list: Vec<f64>,
    pub omega: Vec<f64>,
}

impl DispersionResult {
    /// `max - min` of `omega_k` over `k != 0`.
    pub fn bandwidth(&self) -> f64 {
        let finite = self.k_list.iter().zip(&self.omega).filter(|(k, _)| **k != 0.0);
        let (lo, hi) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, &w)| {
            (lo.min(w), hi.max(w))
        });
        hi - lo
    }
}

/// Momenta `2 pi n / L` for `n` in `(-L/2, L/2]`.
pub fn momenta(sites: usize) -> Vec<f64> {
    let l = sites as i64;
    (-(l - 1) / 2..=l / 2)
        .map(|n| 2.0 * std::f64::consts::PI * n as f64 / sites as f64)
        .collect()
}

/// `chi ~ 3 Delta / 2`, `lambda ~ -(2 Delta / L)(sqrt(Delta / (Delta - 2J)) - 1)`.
/// `None` for `Delta <= 2J`, where the expansion does not exist.
pub fn closed_form(delta: f64, j: f64, sites: usize) -> Option<(f64, f64)> {
    (delta > 2.0 * j).then(|| {
        let lambda = -(2.0 * delta / sites as f64) * ((delta / (delta - 2.0 * j)).sqrt() - 1.0);
        (1.5 * delta, lambda)
    })
}

struct Sums {
    residual: [f64; 2],
    jacobian: [[f64; 2]; 2],
}

/// `r - chi - lambda cos k - J delta_{k0}` for every momentum, or `None` if
/// any is non-positive.
fn gaps(p: &SoftSpinParams, chi: f64, lambda: f64, ks: &[f64]) -> Option<Vec<f64>> {
    let g: Vec<f64> = ks
        .iter()
        .map(|&k| p.r - chi - lambda * k.cos() - if k == 0.0 { p.j } else { 0.0 })
        .collect();
    g.iter().all(|&x| x > 0.0).then_some(g)
}

fn sums(p: &SoftSpinParams, gaps: &[f64], ks: &[f64]) -> Sums {
    let l = ks.len() as f64;
    let mut s = Sums {
        residual: [-1.0, 0.0],
        jacobian: [[0.0; 2]; 2],
    };
    for (&k, &g) in ks.iter().zip(gaps) {
        let w = 2.0 * (p.r * g).sqrt();
        let c = k.cos();
        // d(1/omega)/d chi = 2 r / omega^3, d(1/omega)/d lambda = 2 r cos k / omega^3
        let d = 2.0 * p.r / (w * w * w);
        s.residual[0] += p.r / w / l;
        s.residual[1] += c / w / l;
        s.jacobian[0][0] += p.r * d / l;
        s.jacobian[0][1] += p.r * d * c / l;
        s.jacobian[1][0] += d * c / l;
        s.jacobian[1][1] += d * c * c / l;
    }
    s
}

fn norm(r: [f64; 2]) -> f64 {
    r[0].hypot(r[1])
}

/// Residuals of both constraint sums at `(chi, lambda)`.
pub fn constraint_residuals(p: &SoftSpinParams) -> Result<[f64; 2]> {
    let ks = momenta(p.sites);
    let g = gaps(p, p.chi_constraint, p.lambda, &ks).ok_or_else(|| Error::Domain {
        message: "omega_k^2 <= 0".into(),
        chi: p.chi_constraint,
        lambda: p.lambda,
    })?;
    Ok(sums(p, &g, &ks).residual)
}

/// Damped Newton solution of the two constraint equations, started from the
/// closed-form asymptotics.
pub fn solve_constraints(delta: f64, j: f64, sites: usize, tol: f64) -> Result<SoftSpinParams> {
    if delta <= 0.0 {
        return Err(Error::Argument(format!("soft-spin theory needs Delta > 0, got {delta}")));
    }
    if sites < 2 || sites % 2 == 1 {
        return Err(Error::Argument(format!("L must be even and at least 2, got {sites}")));
    }
    let ks = momenta(sites);
    let (chi0, lambda0) = closed_form(delta, j, sites).unwrap_or((1.5 * delta, 0.0));
    let mut p = SoftSpinParams {
        delta,
        j,
        sites,
        r: 2.0 * delta,
        chi_constraint: chi0,
        lambda: lambda0,
    };
    let domain = |p: &SoftSpinParams, message: &str| Error::Domain {
        message: message.into(),
        chi: p.chi_constraint,
        lambda: p.lambda,
    };
    let g = gaps(&p, p.chi_constraint, p.lambda, &ks)
        .ok_or_else(|| domain(&p, "omega_k^2 <= 0 at the initial guess; Delta too close to 2J"))?;
    let mut s = sums(&p, &g, &ks);
    for _ in 0..MAX_NEWTON {
        let res = norm(s.residual);
        if res <= tol {
            return Ok(p);
        }
        let [[a, b], [c, d]] = s.jacobian;
        let det = a * d - b * c;
        if det == 0.0 || !det.is_finite() {
            return Err(domain(&p, "singular Jacobian"));
        }
        let step_chi = -(d * s.residual[0] - b * s.residual[1]) / det;
        let step_lambda = -(-c * s.residual[0] + a * s.residual[1]) / det;
        let mut damping = 1.0;
        loop {
            let chi = p.chi_constraint + damping * step_chi;
            let lambda = p.lambda + damping * step_lambda;
            if let Some(g) = gaps(&p, chi, lambda, &ks) {
                let trial = sums(&p, &g, &ks);
                if norm(trial.residual) < res {
                    p.chi_constraint = chi;
                    p.lambda = lambda;
                    s = trial;
                    break;
                }
            }
            damping *= 0.5;
            if damping < 1e-12 {
                if gaps(&p, p.chi_constraint + step_chi, p.lambda + step_lambda, &ks).is_none() {
                    return Err(domain(&p, "omega_k^2 <= 0 along every damped Newton step"));
                }
                return Err(Error::Convergence {
                    iterations: MAX_NEWTON,
                    residual: res,
                });
            }
        }
    }
    Err(Error::Convergence {
        iterations: MAX_NEWTON,
        residual: norm(s.residual),
    })
}

/// `omega_k` on the `L`-point momentum grid.
pub fn dispersion(p: &SoftSpinParams) -> Result<DispersionResult> {
    let ks = momenta(p.sites);
    let g = gaps(p, p.chi_constraint, p.lambda, &ks).ok_or_else(|| Error::Domain {
        message: "omega_k^2 <= 0".into(),
        chi: p.chi_constraint,
        lambda: p.lambda,
    })?;
    Ok(DispersionResult {
        omega: g.iter().map(|&g| 2.0 * (p.r * g).sqrt()).collect(),
        k_list: ks,
    })
}

/// `(epsilon_1, Delta_res)`: the single-magnon gap above the Néel state and
/// the field at which creating a magnon pair costs nothing, `-4 Delta = 2 epsilon_1`.
pub fn resonance_prediction() -> (f64, f64) {
    let epsilon_1 = -1.0;
    (epsilon_1, epsilon_1 / 2.0)
}
