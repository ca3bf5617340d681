// Néel-state weight on every eigenstate: a few towers carry nearly all of it.

use pxp2::basis::{named_state, BoundaryCondition, ConstrainedBasis, NamedState};
use pxp2::operators::{pxp2_operator, ModelParameters};
use pxp2::scans::{max_and_median, overlap_spectrum};

pub fn run(len: usize, delta: f64) -> pxp2::Result<()> {
    let basis = ConstrainedBasis::enumerate(len, BoundaryCondition::Periodic)?;
    let op = pxp2_operator(&basis, &ModelParameters::new(len, delta))?;
    let z2 = named_state(&basis, NamedState::Z2)?;
    let ov = overlap_spectrum(&basis, &op, &z2)?;
    let (max, median) = max_and_median(&ov).expect("nonempty");
    println!("L = {len}, delta = {delta}: {} states, max {max:.4e}, median {median:.4e}", ov.len());
    let mut top = ov.clone();
    top.sort_by(|a, b| b.1.total_cmp(&a.1));
    for (e, w) in top.iter().take(8) {
        println!("  E = {e:>10.5}  |<Z2|E>|^2 = {w:.4e}");
    }
    Ok(())
}

fn main() -> pxp2::Result<()> {
    run(18, 0.0)?;
    run(18, -0.2)
}
