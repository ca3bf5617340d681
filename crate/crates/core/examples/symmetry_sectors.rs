// Momentum, inversion and excitation-parity blocks of the ring.

use pxp2::basis::{BoundaryCondition, ConstrainedBasis};
use pxp2::operators::{pxp2_operator, ModelParameters};
use pxp2::solvers::eigenvalues;
use pxp2::symmetry::{build_sectors_with, project_operator, write_sector_summary, SectorOptions};
use pxp2::Space;

pub fn run(len: usize, delta: f64) -> pxp2::Result<()> {
    let basis = ConstrainedBasis::enumerate(len, BoundaryCondition::Periodic)?;
    let op = pxp2_operator(&basis, &ModelParameters::new(len, delta))?;
    let sectors = build_sectors_with(&basis, SectorOptions::full())?;
    write_sector_summary(&sectors, std::io::stdout())?;

    let mut all = Vec::new();
    for s in &sectors {
        let e = eigenvalues(&project_operator(&op, s)?)?;
        println!("{:<16} dim {:>5}  E_min {:>12.6}", s.label().to_string(), s.dim(), e.first().copied().unwrap_or(f64::NAN));
        all.extend(e);
    }
    all.sort_by(f64::total_cmp);
    println!("levels {} of {}, ground {:.10}", all.len(), basis.dim(), all[0]);
    Ok(())
}

fn main() -> pxp2::Result<()> {
    run(16, 0.5)
}
