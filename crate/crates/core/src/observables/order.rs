use serde::{Deserialize, Serialize};

use super::{check_state, chunked_sum};
use crate::basis::Space;
use crate::error::Result;
use crate::operators::stagger_sign;
use crate::state::StateVector;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderParameters {
    /// `(1/L) sum_i <sigma^x_i>`
    pub mx: f64,
    /// `(1/L) sum_i <P sigma^x_i P>`
    pub mx_projected: f64,
    /// `(1/L) sum_i s_i <sigma^z_i>`
    pub mz_stag: f64,
    /// Cavity amplitude `<a>` in units of `g sqrt(L)`.
    pub cavity_field: f64,
}

/// Magnetizations of a state over a configuration space.
///
/// A bare `sigma^x_i` that breaks the blockade leads out of the space, where
/// the state has no weight, so on the constrained space `mx` and
/// `mx_projected` coincide.
pub fn order_parameters(space: &dyn Space, psi: &StateVector) -> Result<OrderParameters> {
    check_state(space, psi)?;
    let len = space.num_sites();
    let a = psi.amplitudes();
    let mx = chunked_sum(space.dim(), |j| {
        let c = space.config(j);
        (0..len)
            .filter_map(|i| space.index_of(c ^ (1 << i)))
            .map(|t| (a[t].conj() * a[j]).re)
            .sum()
    }) / len as f64;
    let mz_stag = chunked_sum(space.dim(), |j| {
        let c = space.config(j);
        let s: f64 = (0..len)
            .map(|i| stagger_sign(i) * if (c >> i) & 1 == 1 { 1.0 } else { -1.0 })
            .sum();
        s * a[j].norm_sqr()
    }) / len as f64;
    Ok(OrderParameters {
        mx,
        mx_projected: mx,
        mz_stag,
        cavity_field: mx,
    })
}
