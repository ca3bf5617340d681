// Unfolded level spacings of one parity-resolved block compared with the
// Poisson, semi-Poisson and Wigner-Dyson laws.

use pxp2::basis::{BoundaryCondition, ConstrainedBasis};
use pxp2::observables::level_statistics;
use pxp2::operators::{pxp2_operator, ModelParameters};
use pxp2::scans::sector_levels;
use pxp2::symmetry::SectorLabel;

pub fn run(len: usize) -> pxp2::Result<()> {
    let basis = ConstrainedBasis::enumerate(len, BoundaryCondition::Periodic)?;
    let op = pxp2_operator(&basis, &ModelParameters::new(len, 0.0))?;
    let label = SectorLabel::new(0).with_inversion(1).with_parity(1);
    let levels = sector_levels(&basis, &op, label)?;
    let r = level_statistics(&levels, 0.1, 7)?;
    println!("sector {label}: {} levels, {} spacings, mean {:.4}", levels.len(), r.spacings.len(), r.mean_spacing);
    println!("KS  poisson {:.4}  semi-poisson {:.4}  wigner-dyson {:.4}  -> {}",
        r.distances.poisson, r.distances.semi_poisson, r.distances.wigner_dyson, r.distances.closest());
    for (s, p) in r.histogram.iter().take(12) {
        println!("{s:>6.2} {}", "#".repeat((p * 40.0) as usize));
    }
    Ok(())
}

fn main() -> pxp2::Result<()> {
    run(24)
}
