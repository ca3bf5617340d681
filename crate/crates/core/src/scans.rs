//! Composite calculations on the (PXP)^2 model: one point of a ground-state
//! scan, sector-resolved spectral densities, Néel overlaps and single-sector
//! level lists.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{BoundaryCondition, ConstrainedBasis, Space};
use crate::error::{Error, Result};
use crate::observables::{
    order_parameters, sector_eigensystems, sigma_x_k, spectral_density, Bipartition, OrderParameters,
    SectorEigensystem, SpectralDensityResult,
};
use crate::operators::{broken_pxp2_operator, pxp2_operator, ModelParameters, Operator};
use crate::solvers::{eigenvalues, full_spectrum, ground_state_with, LanczosOptions};
use crate::state::StateVector;
use crate::symmetry::{build_sector, project_operator, sector_labels, SectorLabel, SectorOptions, SymmetrySector};

/// Peaks lighter than this are ignored when locating the lowest excitation.
pub const GAP_MIN_WEIGHT: f64 = 1e-3;

/// Squared norms below this count as no support in a sector.
const SUPPORT_TOL: f64 = 1e-20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Lowest state of `H` among the zero-momentum sectors.
    Symmetric,
    /// Ground state of `H + dH`.
    Broken,
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Branch::Symmetric => "symmetric",
            Branch::Broken => "broken",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroundRow {
    pub delta: f64,
    pub branch: Branch,
    pub energy: f64,
    pub entropy_bits: f64,
    #[serde(flatten)]
    pub order: OrderParameters,
}

/// Zero-momentum sectors, resolved by inversion and excitation parity.
pub fn zero_momentum_sectors(basis: &ConstrainedBasis) -> Result<Vec<SymmetrySector>> {
    momentum_sectors(basis, 0)
}

/// All parity- and (where defined) inversion-resolved sectors at momentum `n`.
pub fn momentum_sectors(basis: &ConstrainedBasis, n: i32) -> Result<Vec<SymmetrySector>> {
    sector_labels(basis.num_sites(), SectorOptions::full())
        .into_iter()
        .filter(|l| l.momentum == n)
        .map(|l| build_sector(basis, l))
        .filter(|s| s.as_ref().map_or(true, |s| s.dim() > 0))
        .collect()
}

/// Lowest eigenpair of `op` among the given sectors. Sector eigenvalues are
/// compared first; only the winning block is diagonalized with eigenvectors.
pub fn lowest_in_sectors(op: &dyn Operator, sectors: &[SymmetrySector]) -> Result<(f64, StateVector, SectorLabel)> {
    let blocks: Vec<_> = sectors
        .par_iter()
        .map(|s| project_operator(op, s))
        .collect::<Result<_>>()?;
    let lows: Vec<f64> = blocks
        .par_iter()
        .map(|b| Ok(eigenvalues(b)?.first().copied().unwrap_or(f64::INFINITY)))
        .collect::<Result<_>>()?;
    let best = (0..sectors.len())
        .min_by(|&a, &b| lows[a].total_cmp(&lows[b]))
        .ok_or_else(|| Error::Argument("no sectors given".into()))?;
    let eig = full_spectrum(&blocks[best])?;
    let sector = &sectors[best];
    Ok((eig.energies[0], sector.embed_state(&eig.vector(0)), sector.label()))
}

fn row(basis: &ConstrainedBasis, delta: f64, branch: Branch, energy: f64, psi: &StateVector) -> Result<GroundRow> {
    let bp = Bipartition::new(basis, basis.num_sites() / 2)?;
    Ok(GroundRow {
        delta,
        branch,
        energy,
        entropy_bits: bp.entropy(psi)?,
        order: order_parameters(basis, psi)?,
    })
}

/// One field value of a ground-state scan.
///
/// The symmetric branch takes the lowest zero-momentum state (translation
/// invariant, hence blind to Néel order); on an open chain it falls back to
/// Lanczos in the whole space. The broken branch adds `dH` with
/// `params.epsilon_break` and runs Lanczos in the whole space.
pub fn ground_point(basis: &ConstrainedBasis, params: &ModelParameters, branch: Branch) -> Result<GroundRow> {
    let delta = params.delta;
    match branch {
        Branch::Symmetric => {
            let op = pxp2_operator(basis, &ModelParameters { epsilon_break: 0.0, ..*params })?;
            if basis.bc() == BoundaryCondition::Periodic {
                let sectors = zero_momentum_sectors(basis)?;
                let (e, psi, _) = lowest_in_sectors(&op, &sectors)?;
                row(basis, delta, branch, e, &psi)
            } else {
                let g = ground_state_with(&op, basis.tag(), &LanczosOptions::default())?;
                row(basis, delta, branch, g.energy, &g.state)
            }
        }
        Branch::Broken => {
            if params.epsilon_break == 0.0 {
                return Err(Error::Argument("broken branch needs a nonzero epsilon_break".into()));
            }
            let op = broken_pxp2_operator(basis, params)?;
            let g = ground_state_with(&op, basis.tag(), &LanczosOptions::default())?;
            row(basis, delta, branch, g.energy, &g.state)
        }
    }
}

/// Sector-resolved spectral density of `sigma^x_k` above the zero-momentum
/// ground state of `op`, with the eigensystems that entered it.
#[derive(Clone, Debug)]
pub struct SpectralPoint {
    pub ground_energy: f64,
    pub ground_sector: SectorLabel,
    pub density: SpectralDensityResult,
    pub systems: Vec<SectorEigensystem>,
}

impl SpectralPoint {
    /// Lowest excitation at `k_list[k]` with weight above [`GAP_MIN_WEIGHT`].
    pub fn gap(&self, k: usize) -> Option<f64> {
        self.density.lowest_excitation(k, GAP_MIN_WEIGHT)
    }
}

/// Diagonalizes the zero-momentum sectors, picks the ground state, and then
/// only those sectors at the requested momenta that `sigma^x_k |Omega>`
/// actually reaches.
pub fn spectral_point(
    basis: &ConstrainedBasis,
    op: &dyn Operator,
    k_list: &[i32],
    omega_grid: &[f64],
    eta: f64,
) -> Result<SpectralPoint> {
    let zero = sector_eigensystems(op, zero_momentum_sectors(basis)?)?;
    let ground = zero
        .iter()
        .filter(|s| s.eig.dim() > 0)
        .min_by(|a, b| a.eig.energies[0].total_cmp(&b.eig.energies[0]))
        .ok_or_else(|| Error::Argument("empty zero-momentum sector".into()))?;
    let ground_energy = ground.eig.energies[0];
    let ground_sector = ground.sector.label();
    let psi = StateVector::new(ground.full_vector(0), basis.tag());

    let mut wanted = Vec::new();
    for &n in k_list.iter().filter(|&&n| n != 0) {
        let v = sigma_x_k(basis, psi.amplitudes(), n);
        for s in momentum_sectors(basis, n)? {
            if crate::linalg::norm_sqr(&s.project(&v)) > SUPPORT_TOL {
                wanted.push(s);
            }
        }
    }
    let mut systems = zero;
    systems.extend(sector_eigensystems(op, wanted)?);
    let density = spectral_density(basis, &systems, &psi, ground_energy, k_list, omega_grid, eta)?;
    Ok(SpectralPoint {
        ground_energy,
        ground_sector,
        density,
        systems,
    })
}

/// Convenience wrapper for the (PXP)^2 model at field `delta`.
pub fn pxp2_spectral_point(
    basis: &ConstrainedBasis,
    delta: f64,
    k_list: &[i32],
    omega_grid: &[f64],
    eta: f64,
) -> Result<SpectralPoint> {
    let op = pxp2_operator(basis, &ModelParameters::new(basis.num_sites(), delta))?;
    spectral_point(basis, &op, k_list, omega_grid, eta)
}

/// Parity- and inversion-resolved sectors in which `target` has weight.
pub fn support_sectors(basis: &ConstrainedBasis, target: &[C64]) -> Result<Vec<SymmetrySector>> {
    let labels = sector_labels(basis.num_sites(), SectorOptions::full());
    let sectors: Vec<Option<SymmetrySector>> = labels
        .into_par_iter()
        .map(|l| {
            let s = build_sector(basis, l)?;
            Ok((crate::linalg::norm_sqr(&s.project(target)) > SUPPORT_TOL).then_some(s))
        })
        .collect::<Result<_>>()?;
    Ok(sectors.into_iter().flatten().collect())
}

/// `(E_alpha, |<alpha|target>|^2)` over every eigenstate of the sectors where
/// `target` has support, sorted by energy.
pub fn overlap_spectrum(basis: &ConstrainedBasis, op: &dyn Operator, target: &StateVector) -> Result<Vec<(f64, f64)>> {
    let systems = sector_eigensystems(op, support_sectors(basis, target.amplitudes())?)?;
    Ok(crate::observables::eigenstate_overlaps(&systems, target))
}

/// Ascending eigenvalues of `op` in one sector.
pub fn sector_levels(basis: &ConstrainedBasis, op: &dyn Operator, label: SectorLabel) -> Result<Vec<f64>> {
    let sector = build_sector(basis, label)?;
    eigenvalues(&project_operator(op, &sector)?)
}

/// `(max, median)` of the overlap weights.
pub fn max_and_median(overlaps: &[(f64, f64)]) -> Option<(f64, f64)> {
    if overlaps.is_empty() {
        return None;
    }
    let mut w: Vec<f64> = overlaps.iter().map(|o| o.1).collect();
    w.sort_by(f64::total_cmp);
    let n = w.len();
    let median = if n % 2 == 1 {
        w[n / 2]
    } else {
        0.5 * (w[n / 2 - 1] + w[n / 2])
    };
    Some((w[n - 1], median))
}
