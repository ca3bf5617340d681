// Self-consistent soft-spin multipliers and the paramagnon dispersion.

use pxp2::softspin::{closed_form, constraint_residuals, dispersion, resonance_prediction, solve_constraints};

pub fn run(len: usize) -> pxp2::Result<()> {
    println!("{:>6} {:>10} {:>10} {:>10} {:>12} {:>10}", "delta", "chi", "chi_cf", "lambda", "lambda_cf", "width");
    for delta in [3.0, 5.0, 10.0, 20.0] {
        let p = solve_constraints(delta, 1.0, len, 1e-12)?;
        let (chi, lambda) = closed_form(delta, 1.0, len).expect("delta > 2J");
        let res = constraint_residuals(&p)?;
        let d = dispersion(&p)?;
        println!(
            "{delta:>6.1} {:>10.4} {chi:>10.4} {:>10.2e} {lambda:>12.2e} {:>10.2e}  |res| {:.1e}",
            p.chi_constraint,
            p.lambda,
            d.bandwidth(),
            res[0].abs().max(res[1].abs())
        );
    }
    let w = |l| -> pxp2::Result<f64> { Ok(dispersion(&solve_constraints(3.0, 1.0, l, 1e-12)?)?.bandwidth()) };
    println!("bandwidth ratio L -> 2L at delta = 3: {:.4}", w(2 * len)? / w(len)?);
    let (eps1, res) = resonance_prediction();
    println!("single magnon gap {eps1}, resonant field {res}");
    Ok(())
}

fn main() -> pxp2::Result<()> {
    run(24)
}
