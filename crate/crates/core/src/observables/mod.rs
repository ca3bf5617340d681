//! Measured quantities: order parameters, correlations, entanglement,
//! spectral densities, eigenstate overlaps and level statistics.

pub mod correlation;
pub mod entanglement;
pub mod level_stats;
pub mod order;
pub mod overlaps;
pub mod spectral;

pub use correlation::{correlation, staggered_contrast, Anchor};
pub use entanglement::{entanglement_entropy, Bipartition, EntanglementResult};
pub use level_stats::{level_statistics, LevelStatisticsResult, SpacingDistances};
pub use order::{order_parameters, OrderParameters};
pub use overlaps::{eigenstate_overlaps, overlaps_in_eigenbasis};
pub use spectral::{sector_eigensystems, sigma_x_k, spectral_density, SectorEigensystem, SpectralDensityResult};

use crate::basis::Space;
use crate::error::{Error, Result};
use crate::state::StateVector;

pub(crate) fn check_state(space: &dyn Space, psi: &StateVector) -> Result<()> {
    if psi.dim() != space.dim() || psi.tag() != space.tag() {
        return Err(Error::Argument(format!(
            "state over {:?} (dim {}) does not live on {:?} (dim {})",
            psi.tag(),
            psi.dim(),
            space.tag(),
            space.dim()
        )));
    }
    Ok(())
}

/// `sum_i f(i)` over fixed-size chunks added in order, independent of the
/// thread count.
pub(crate) fn chunked_sum<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    use rayon::prelude::*;
    const CHUNK: usize = 1 << 12;
    let partial: Vec<f64> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| (c * CHUNK..((c + 1) * CHUNK).min(n)).map(&f).sum())
        .collect();
    partial.into_iter().sum()
}
