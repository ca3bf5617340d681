// Early-time vacuum entanglement of the constrained model against the
// unconstrained collective-spin model and its sublattice variant.

use pxp2::basis::NamedState;
use pxp2::operators::ModelParameters;
use pxp2::quench::{log_times, run_quench, QuenchModel, QuenchObservable, QuenchSpec};

pub fn run(len: usize) -> pxp2::Result<()> {
    let times = log_times(0.02, 3.0, 30);
    let curves = [QuenchModel::Pxp2, QuenchModel::Lmg, QuenchModel::SublatticeLmg { period: 2 }]
        .into_iter()
        .map(|model| {
            let spec = QuenchSpec {
                model,
                params: ModelParameters::new(len, 0.0),
                initial: NamedState::Vacuum,
                times: times.clone(),
                observables: vec![QuenchObservable::Entropy],
            };
            Ok((model, run_quench(&spec)?.entropy()?.to_vec()))
        })
        .collect::<pxp2::Result<Vec<_>>>()?;
    print!("{:>8}", "t");
    for (m, _) in &curves {
        print!(" {:>18}", m.to_string());
    }
    println!();
    for (i, t) in times.iter().enumerate().step_by(3) {
        print!("{t:>8.3}");
        for (_, s) in &curves {
            print!(" {:>18.4}", s[i]);
        }
        println!();
    }
    Ok(())
}

fn main() -> pxp2::Result<()> {
    run(16)
}
