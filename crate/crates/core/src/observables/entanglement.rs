use ndarray::Array2;
use ndarray_linalg::SVDInto;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::check_state;
use crate::basis::{mask, Space};
use crate::error::{Error, Result};
use crate::state::{BasisTag, StateVector};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntanglementResult {
    /// Block A is the sites `[0, cut)`.
    pub cut_position: usize,
    pub entropy_bits: f64,
}

/// Index map splitting each basis configuration into its parts on the blocks
/// `A = [0, cut)` and `B = [cut, L)`.
///
/// The distinct A and B parts occurring in a constrained basis are exactly
/// the open-chain constrained configurations of each block; pairs whose
/// junctions clash never occur and keep a zero amplitude.
#[derive(Clone, Debug)]
pub struct Bipartition {
    cut: usize,
    tag: BasisTag,
    rows: usize,
    cols: usize,
    /// `(row, col)` of each basis state.
    index: Vec<(u32, u32)>,
}

impl Bipartition {
    pub fn new(space: &dyn Space, cut: usize) -> Result<Self> {
        let len = space.num_sites();
        if cut == 0 || cut >= len {
            return Err(Error::Argument(format!("cut {cut} must lie in 1..{len}")));
        }
        let low = mask(cut);
        let mut a_parts: Vec<u32> = space.configs().map(|c| c & low).collect();
        let mut b_parts: Vec<u32> = space.configs().map(|c| c >> cut).collect();
        a_parts.sort_unstable();
        a_parts.dedup();
        b_parts.sort_unstable();
        b_parts.dedup();
        let index = space
            .configs()
            .map(|c| {
                let r = a_parts.binary_search(&(c & low)).unwrap();
                let s = b_parts.binary_search(&(c >> cut)).unwrap();
                (r as u32, s as u32)
            })
            .collect();
        Ok(Self {
            cut,
            tag: space.tag(),
            rows: a_parts.len(),
            cols: b_parts.len(),
            index,
        })
    }

    pub fn cut(&self) -> usize {
        self.cut
    }

    /// Dimensions of the two block spaces.
    pub fn block_dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Amplitude matrix `M[a, b]`.
    pub fn amplitude_matrix(&self, psi: &[C64]) -> Array2<C64> {
        let mut m = Array2::zeros((self.rows, self.cols));
        for (&(r, s), &a) in self.index.iter().zip(psi) {
            m[(r as usize, s as usize)] = a;
        }
        m
    }

    /// Schmidt weights, descending.
    pub fn schmidt_weights(&self, psi: &StateVector) -> Result<Vec<f64>> {
        if psi.tag() != self.tag || psi.dim() != self.index.len() {
            return Err(Error::Argument("state does not match the bipartitioned space".into()));
        }
        let (_, sigma, _) = self.amplitude_matrix(psi.amplitudes()).svd_into(false, false)?;
        Ok(sigma.iter().map(|s| s * s).collect())
    }

    /// Von Neumann entropy of block A in bits.
    pub fn entropy(&self, psi: &StateVector) -> Result<f64> {
        Ok(self
            .schmidt_weights(psi)?
            .into_iter()
            .filter(|&p| p > 0.0)
            .map(|p| -p * p.log2())
            .sum::<f64>()
            .max(0.0))
    }
}

pub fn entanglement_entropy(space: &dyn Space, psi: &StateVector, cut: usize) -> Result<EntanglementResult> {
    check_state(space, psi)?;
    let entropy_bits = Bipartition::new(space, cut)?.entropy(psi)?;
    Ok(EntanglementResult {
        cut_position: cut,
        entropy_bits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{dimension, named_state, BoundaryCondition, ConstrainedBasis, NamedState};

    #[test]
    fn product_and_cat_states() {
        let b = ConstrainedBasis::enumerate(10, BoundaryCondition::Periodic).unwrap();
        let z2 = named_state(&b, NamedState::Z2).unwrap();
        assert!(entanglement_entropy(&b, &z2, 5).unwrap().entropy_bits.abs() < 1e-12);
        let shifted = named_state(&b, NamedState::Z2Shifted).unwrap();
        let ghz: Vec<C64> = z2.amplitudes().iter().zip(shifted.amplitudes()).map(|(x, y)| x + y).collect();
        let ghz = StateVector::new(ghz, b.tag());
        assert!((entanglement_entropy(&b, &ghz, 5).unwrap().entropy_bits - 1.0).abs() < 1e-12);
        assert!(entanglement_entropy(&b, &ghz, 0).is_err());
        assert!(entanglement_entropy(&b, &ghz, 10).is_err());
    }

    #[test]
    fn blocks_are_open_chain_bases() {
        let b = ConstrainedBasis::enumerate(12, BoundaryCondition::Periodic).unwrap();
        let bp = Bipartition::new(&b, 5).unwrap();
        assert_eq!(
            bp.block_dims(),
            (dimension(5, BoundaryCondition::Open), dimension(7, BoundaryCondition::Open))
        );
    }
}
