use super::{check_state, chunked_sum};
use crate::basis::{BoundaryCondition, Space};
use crate::error::{Error, Result};
use crate::state::{BasisTag, StateVector};

/// Reference sites `i` of `C(r) = <n_i n_{i+r}>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Anchor {
    Site(usize),
    /// Average over the listed sites.
    Sublattice(Vec<usize>),
}

impl Anchor {
    /// Sites excited in the configuration `bits`, or every site when none is.
    pub fn excited_sites(bits: u32, len: usize) -> Self {
        let sites: Vec<usize> = (0..len).filter(|&i| (bits >> i) & 1 == 1).collect();
        if sites.is_empty() {
            Anchor::Sublattice((0..len).collect())
        } else {
            Anchor::Sublattice(sites)
        }
    }

    fn sites(&self) -> &[usize] {
        match self {
            Anchor::Site(i) => std::slice::from_ref(i),
            Anchor::Sublattice(s) => s,
        }
    }
}

/// `C(r) = <n_i n_{i+r}>` for `r = 0..=L/2`, averaged over the anchor sites.
pub fn correlation(space: &dyn Space, psi: &StateVector, anchor: &Anchor) -> Result<Vec<f64>> {
    check_state(space, psi)?;
    if let BasisTag::Constrained {
        bc: BoundaryCondition::Open,
        ..
    } = space.tag()
    {
        return Err(Error::Unsupported("correlations wrap around a periodic chain".into()));
    }
    let len = space.num_sites();
    let sites = anchor.sites();
    if sites.is_empty() || sites.iter().any(|&i| i >= len) {
        return Err(Error::Argument(format!("anchor sites {sites:?} invalid for L = {len}")));
    }
    let a = psi.amplitudes();
    Ok((0..=len / 2)
        .map(|r| {
            chunked_sum(space.dim(), |j| {
                let c = space.config(j);
                let hits = sites
                    .iter()
                    .filter(|&&i| (c >> i) & 1 == 1 && (c >> ((i + r) % len)) & 1 == 1)
                    .count();
                hits as f64 * a[j].norm_sqr()
            }) / sites.len() as f64
        })
        .collect())
}

/// `C(2) - C(1)`, positive while a period-2 density wave persists.
pub fn staggered_contrast(c: &[f64]) -> f64 {
    c[2] - c[1]
}
