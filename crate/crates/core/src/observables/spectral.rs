use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{bits_valid, ConstrainedBasis, Space};
use crate::error::{Error, Result};
use crate::operators::Operator;
use crate::solvers::{full_spectrum, EigenDecomposition};
use crate::state::StateVector;
use crate::symmetry::{project_operator, SymmetrySector};

/// A sector together with the eigensystem of its block.
#[derive(Clone, Debug)]
pub struct SectorEigensystem {
    pub sector: SymmetrySector,
    pub eig: EigenDecomposition,
}

impl SectorEigensystem {
    /// Eigenstate `a` expanded over the constrained basis.
    pub fn full_vector(&self, a: usize) -> Vec<C64> {
        self.sector.embed(&self.eig.vector(a))
    }
}

/// Projects and fully diagonalizes `op` in each sector, in parallel.
pub fn sector_eigensystems(op: &dyn Operator, sectors: Vec<SymmetrySector>) -> Result<Vec<SectorEigensystem>> {
    sectors
        .into_par_iter()
        .map(|sector| {
            let block = project_operator(op, &sector)?;
            let eig = full_spectrum(&block)?;
            Ok(SectorEigensystem { sector, eig })
        })
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectralDensityResult {
    /// Momentum indices `n_k`.
    pub k_list: Vec<i32>,
    pub omega_grid: Vec<f64>,
    /// `values[k][w]`
    pub values: Vec<Vec<f64>>,
    pub eta: f64,
    /// Excitation energies `E_alpha - E_0` with weights, per momentum,
    /// ascending in energy.
    pub peaks: Vec<Vec<(f64, f64)>>,
    /// `<Omega|sigma^x_{-k} sigma^x_k|Omega>` per momentum.
    pub sum_rule: Vec<f64>,
}

impl SpectralDensityResult {
    /// Lowest excitation energy at momentum `k_list[k]` carrying weight above
    /// `min_weight`.
    pub fn lowest_excitation(&self, k: usize, min_weight: f64) -> Option<f64> {
        self.peaks[k]
            .iter()
            .find(|&&(w, weight)| weight > min_weight && w > 1e-9)
            .map(|&(w, _)| w)
    }

    /// Total weight captured by the supplied eigensystems.
    pub fn captured_weight(&self, k: usize) -> f64 {
        self.peaks[k].iter().map(|&(_, weight)| weight).sum()
    }
}

/// `sigma^x_k |Omega>` with `sigma^x_k = L^{-1/2} sum_j e^{-ikj} sigma^x_j`,
/// restricted to the constrained space.
pub fn sigma_x_k(basis: &ConstrainedBasis, ground: &[C64], momentum: i32) -> Vec<C64> {
    let len = basis.num_sites();
    let k = 2.0 * std::f64::consts::PI * momentum as f64 / len as f64;
    let norm = (len as f64).sqrt();
    let phases: Vec<C64> = (0..len).map(|j| C64::from_polar(1.0 / norm, -k * j as f64)).collect();
    let mut out = vec![C64::new(0.0, 0.0); basis.dim()];
    for (i, &c) in basis.states().iter().enumerate() {
        for (j, &ph) in phases.iter().enumerate() {
            let t = c ^ (1 << j);
            if bits_valid(t, len, basis.bc()) {
                out[basis.index_of(t).unwrap()] += ph * ground[i];
            }
        }
    }
    out
}

fn gaussian(x: f64, eta: f64) -> f64 {
    (-(x * x) / (2.0 * eta * eta)).exp() / (eta * (2.0 * std::f64::consts::PI).sqrt())
}

/// `A(k, w) = sum_alpha |<alpha|sigma^x_k|Omega>|^2 delta(w - E_alpha + E_0)`
/// with a unit-area Gaussian of width `eta` for the delta function.
///
/// Every eigensystem whose momentum is in `k_list` contributes; the
/// ground state is given over the constrained basis.
pub fn spectral_density(
    basis: &ConstrainedBasis,
    systems: &[SectorEigensystem],
    ground: &StateVector,
    ground_energy: f64,
    k_list: &[i32],
    omega_grid: &[f64],
    eta: f64,
) -> Result<SpectralDensityResult> {
    super::check_state(basis, ground)?;
    if eta <= 0.0 {
        return Err(Error::Argument(format!("broadening must be positive, got {eta}")));
    }
    let mut values = Vec::with_capacity(k_list.len());
    let mut peaks = Vec::with_capacity(k_list.len());
    let mut sum_rule = Vec::with_capacity(k_list.len());
    for &n in k_list {
        let v = sigma_x_k(basis, ground.amplitudes(), n);
        sum_rule.push(crate::linalg::norm_sqr(&v));
        let mut p: Vec<(f64, f64)> = Vec::new();
        for sys in systems.iter().filter(|s| s.sector.momentum_index() == n) {
            let coeffs = sys.sector.project(&v);
            if crate::linalg::norm_sqr(&coeffs) == 0.0 {
                continue;
            }
            let amps = sys.eig.coefficients(&coeffs);
            p.extend(
                sys.eig
                    .energies
                    .iter()
                    .zip(amps)
                    .map(|(&e, a)| (e - ground_energy, a.norm_sqr())),
            );
        }
        p.sort_by(|a, b| a.0.total_cmp(&b.0));
        values.push(
            omega_grid
                .iter()
                .map(|&w| p.iter().map(|&(e, weight)| weight * gaussian(w - e, eta)).sum())
                .collect(),
        );
        peaks.push(p);
    }
    Ok(SpectralDensityResult {
        k_list: k_list.to_vec(),
        omega_grid: omega_grid.to_vec(),
        values,
        eta,
        peaks,
        sum_rule,
    })
}
