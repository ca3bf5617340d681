// Logarithmic entanglement growth of the Néel quench across the field, for
// the weakly deformed and the full model.

use pxp2::basis::NamedState;
use pxp2::operators::ModelParameters;
use pxp2::quench::{growth_rate_scan, QuenchModel, DEFAULT_GROWTH_WINDOW};

pub fn run(len: usize) -> pxp2::Result<()> {
    let deltas: Vec<f64> = (0..=14).map(|i| -1.2 + 0.1 * i as f64).collect();
    for (model, chi) in [(QuenchModel::Deformed, 0.1), (QuenchModel::Pxp2, 1.0)] {
        let mut params = ModelParameters::new(len, 0.0);
        params.chi_drive = chi;
        let scan = growth_rate_scan(model, &params, &deltas, NamedState::Z2, DEFAULT_GROWTH_WINDOW)?;
        println!("{model} chi = {chi}: argmax delta = {:.2}", scan.argmax_delta);
        for (d, r) in &scan.rates {
            println!("  {d:>5.2} {r:>8.4} {}", "*".repeat((r.max(0.0) * 30.0) as usize));
        }
    }
    Ok(())
}

fn main() -> pxp2::Result<()> {
    run(16)
}
