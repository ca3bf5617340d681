// Sizes of the blockade space against the Fibonacci and Lucas numbers.

use pxp2::basis::{dimension, BoundaryCondition, ConstrainedBasis, Space};

pub fn run(max_len: usize) -> pxp2::Result<()> {
    println!("{:>3} {:>10} {:>10}", "L", "open", "periodic");
    for len in 2..=max_len {
        let open = ConstrainedBasis::enumerate(len, BoundaryCondition::Open)?;
        let ring = ConstrainedBasis::enumerate(len, BoundaryCondition::Periodic)?;
        assert_eq!(open.dim(), dimension(len, BoundaryCondition::Open));
        assert_eq!(ring.dim(), dimension(len, BoundaryCondition::Periodic));
        println!("{len:>3} {:>10} {:>10}", open.dim(), ring.dim());
    }
    let small = ConstrainedBasis::enumerate(5, BoundaryCondition::Periodic)?;
    println!("\nL = 5 ring:");
    small.write_dump(std::io::stdout())?;
    Ok(())
}

fn main() -> pxp2::Result<()> {
    run(24)
}
