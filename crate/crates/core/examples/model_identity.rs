// The field-free model is minus the square of the PXP model over L, so its
// levels are `-E^2 / L` over the PXP levels `E`.

use pxp2::basis::{BoundaryCondition, ConstrainedBasis};
use pxp2::operators::{build_pxp, build_pxp2, ModelParameters};
use pxp2::solvers::eigenvalues;
use pxp2::Space;

pub fn run(len: usize) -> pxp2::Result<()> {
    let basis = ConstrainedBasis::enumerate(len, BoundaryCondition::Periodic)?;
    let pxp = build_pxp(&basis);
    let h = build_pxp2(&basis, &ModelParameters::new(len, 0.0))?;
    let squared = pxp.multiply(&pxp).scaled(-1.0 / len as f64);
    println!("L = {len}, dim = {}", basis.dim());
    println!("max |H + PXP^2 / L| = {:.2e}", h.max_abs_diff(&squared));
    println!("hermiticity defect  = {:.2e}", h.hermiticity_defect());

    let to_block = |d: ndarray::Array2<f64>| d.mapv(|x| num_complex::Complex64::new(x, 0.0));
    let e_pxp = eigenvalues(&to_block(pxp.to_dense()))?;
    let e_h = eigenvalues(&to_block(h.to_dense()))?;
    let mut mapped: Vec<f64> = e_pxp.iter().map(|e| -e * e / len as f64).collect();
    mapped.sort_by(f64::total_cmp);
    let dev = mapped.iter().zip(&e_h).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("max level deviation from -E^2/L = {dev:.2e}");
    println!("lowest levels: {:?}", &e_h[..4.min(e_h.len())]);
    Ok(())
}

fn main() -> pxp2::Result<()> {
    run(12)
}
