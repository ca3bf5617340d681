use num_complex::Complex64 as C64;

use super::spectral::SectorEigensystem;
use crate::solvers::EigenDecomposition;
use crate::state::StateVector;

/// `(E_alpha, |<alpha|target>|^2)` over the eigenstates of all given sectors,
/// sorted by energy. The target is expanded over the constrained basis.
pub fn eigenstate_overlaps(systems: &[SectorEigensystem], target: &StateVector) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for sys in systems {
        let coeffs = sys.sector.project(target.amplitudes());
        out.extend(overlaps_in_eigenbasis(&sys.eig, &coeffs));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Overlaps with a target given by its coefficients in the basis `eig` was
/// computed in.
pub fn overlaps_in_eigenbasis(eig: &EigenDecomposition, target: &[C64]) -> Vec<(f64, f64)> {
    eig.energies
        .iter()
        .zip(eig.coefficients(target))
        .map(|(&e, c)| (e, c.norm_sqr()))
        .collect()
}
