// Lowest `sigma^x` excitations at zero momentum and at `k = pi`.

use pxp2::basis::{BoundaryCondition, ConstrainedBasis};
use pxp2::scans::pxp2_spectral_point;

pub fn run(len: usize, deltas: &[f64]) -> pxp2::Result<()> {
    let basis = ConstrainedBasis::enumerate(len, BoundaryCondition::Periodic)?;
    let k_pi = (len / 2) as i32;
    let grid: Vec<f64> = (0..=300).map(|i| 0.02 * i as f64).collect();
    println!("{:>6} {:>10} {:>10} {:>10}", "delta", "gap k=0", "gap k=pi", "A(pi, 0)");
    for &delta in deltas {
        let p = pxp2_spectral_point(&basis, delta, &[0, k_pi], &grid, 0.05)?;
        let show = |g: Option<f64>| g.map_or("-".to_string(), |g| format!("{g:.4}"));
        println!(
            "{delta:>6.2} {:>10} {:>10} {:>10.4}",
            show(p.gap(0)),
            show(p.gap(1)),
            p.density.values[1][0]
        );
    }
    Ok(())
}

fn main() -> pxp2::Result<()> {
    let deltas: Vec<f64> = (0..=12).map(|i| -1.2 + 0.2 * i as f64).collect();
    run(16, &deltas)
}
