// Half-chain entanglement of constrained states computed on the blockade
// basis and again after embedding into the full spin space.

use pxp2::basis::{named_state, BoundaryCondition, ConstrainedBasis, FullBasis, NamedState};
use pxp2::linalg::random_unit;
use pxp2::observables::Bipartition;
use pxp2::{Space, StateVector};

fn embed(basis: &ConstrainedBasis, full: &FullBasis, psi: &StateVector) -> StateVector {
    let mut amps = vec![num_complex::Complex64::new(0.0, 0.0); full.dim()];
    for (i, &bits) in basis.states().iter().enumerate() {
        amps[full.index_of(bits).unwrap()] = psi.amplitudes()[i];
    }
    StateVector::new(amps, full.tag())
}

pub fn run(len: usize) -> pxp2::Result<()> {
    let basis = ConstrainedBasis::enumerate(len, BoundaryCondition::Periodic)?;
    let full = FullBasis::new(len)?;
    let cut = Bipartition::new(&basis, len / 2)?;
    let full_cut = Bipartition::new(&full, len / 2)?;
    println!("block dims: constrained {:?}, full {:?}", cut.block_dims(), full_cut.block_dims());
    let mut states = vec![
        ("vacuum".to_string(), named_state(&basis, NamedState::Vacuum)?),
        ("z2".to_string(), named_state(&basis, NamedState::Z2)?),
    ];
    for seed in 0..3 {
        states.push((format!("random {seed}"), StateVector::new(random_unit(basis.dim(), seed), basis.tag())));
    }
    for (name, psi) in &states {
        let a = cut.entropy(psi)?;
        let b = full_cut.entropy(&embed(&basis, &full, psi))?;
        println!("{name:>10}: S = {a:.12} bits, full space {b:.12}, diff {:.1e}", (a - b).abs());
    }
    Ok(())
}

fn main() -> pxp2::Result<()> {
    run(12)
}
