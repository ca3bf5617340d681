use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::basis::BoundaryCondition;
use crate::linalg;
use crate::symmetry::SectorLabel;

/// Identifies the basis a [`StateVector`] is expanded in.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum BasisTag {
    Constrained { sites: usize, bc: BoundaryCondition },
    Full { sites: usize },
    Sector { sites: usize, label: SectorLabel },
}

impl BasisTag {
    pub fn sites(&self) -> usize {
        match *self {
            BasisTag::Constrained { sites, .. } | BasisTag::Full { sites } | BasisTag::Sector { sites, .. } => {
                sites
            }
        }
    }
}

/// Complex amplitudes over a basis, normalized by every constructor.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<C64>,
    tag: BasisTag,
}

impl StateVector {
    /// Wraps and normalizes `amplitudes`. A zero vector is left as is.
    pub fn new(mut amplitudes: Vec<C64>, tag: BasisTag) -> Self {
        let n = linalg::norm(&amplitudes);
        if n > 0.0 && (n - 1.0).abs() > 1e-14 {
            linalg::scale(&mut amplitudes, 1.0 / n);
        }
        Self { amplitudes, tag }
    }

    pub(crate) fn from_raw(amplitudes: Vec<C64>, tag: BasisTag) -> Self {
        Self { amplitudes, tag }
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn tag(&self) -> BasisTag {
        self.tag
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        linalg::norm(&self.amplitudes)
    }

    /// `<self|other>`
    pub fn overlap(&self, other: &StateVector) -> C64 {
        linalg::dot(&self.amplitudes, &other.amplitudes)
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }
}
