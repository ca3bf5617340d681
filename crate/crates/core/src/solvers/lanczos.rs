use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg;
use crate::operators::Operator;
use crate::state::{BasisTag, StateVector};

/// Settings for [`ground_state_with`].
#[derive(Clone, Copy, Debug)]
pub struct LanczosOptions {
    /// Target residual `||H x - E x||`.
    pub tol: f64,
    /// Budget of operator applications.
    pub max_iter: usize,
    /// Krylov vectors kept before an explicit restart.
    pub subspace: usize,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_iter: 5000,
            subspace: 120,
            seed: 0x1a2c05,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GroundState {
    pub energy: f64,
    pub state: StateVector,
    pub residual: f64,
    pub iterations: usize,
}

/// Lowest eigenpair by restarted Lanczos with full reorthogonalization.
pub fn ground_state(op: &dyn Operator, tag: BasisTag, tol: f64, max_iter: usize) -> Result<(f64, StateVector)> {
    let opts = LanczosOptions {
        tol,
        max_iter,
        ..Default::default()
    };
    let g = ground_state_with(op, tag, &opts)?;
    Ok((g.energy, g.state))
}

fn lowest_ritz(alpha: &[f64], beta: &[f64]) -> Result<(f64, Vec<f64>)> {
    let (e, v) = super::dense::symmetric_tridiagonal(alpha, &beta[..alpha.len() - 1])?;
    Ok((e[0], v.column(0).to_vec()))
}

fn combine(basis: &[Vec<C64>], y: &[f64]) -> Vec<C64> {
    let mut x = linalg::zeros(basis[0].len());
    for (v, &c) in basis.iter().zip(y) {
        linalg::axpy(C64::new(c, 0.0), v, &mut x);
    }
    x
}

fn residual(op: &dyn Operator, x: &[C64], energy: f64) -> f64 {
    let mut hx = linalg::zeros(x.len());
    op.apply(x, &mut hx);
    linalg::axpy(C64::new(-energy, 0.0), x, &mut hx);
    linalg::norm(&hx)
}

pub fn ground_state_with(op: &dyn Operator, tag: BasisTag, opts: &LanczosOptions) -> Result<GroundState> {
    let n = op.dim();
    if n == 0 {
        return Err(Error::Argument("empty operator".into()));
    }
    crate::guard::check("Krylov dim", n, crate::guard::MAX_KRYLOV_DIM)?;
    if n == 1 {
        let x = vec![C64::new(1.0, 0.0)];
        let e = op.expectation(&x);
        return Ok(GroundState {
            energy: e,
            state: StateVector::new(x, tag),
            residual: 0.0,
            iterations: 1,
        });
    }
    let m_max = opts.subspace.clamp(2, n);
    let mut start = linalg::random_real_unit(n, opts.seed);
    let mut iterations = 0usize;
    let mut best = f64::INFINITY;

    loop {
        let mut basis: Vec<Vec<C64>> = vec![start.clone()];
        let mut alpha: Vec<f64> = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        let mut w = linalg::zeros(n);
        for j in 0..m_max {
            op.apply(&basis[j], &mut w);
            iterations += 1;
            let a = linalg::dot(&basis[j], &w).re;
            alpha.push(a);
            // two passes of classical Gram-Schmidt against the whole basis
            for _ in 0..2 {
                for v in &basis {
                    let c = linalg::dot(v, &w);
                    linalg::axpy(-c, v, &mut w);
                }
            }
            let b = linalg::norm(&w);
            let ritz = lowest_ritz(&alpha, &beta)?;
            let estimate = b * ritz.1[j].abs();
            best = best.min(estimate);
            let exhausted = b < 1e-13 * a.abs().max(1.0) || j + 1 == n;
            if estimate < 0.1 * opts.tol || exhausted {
                let x = combine(&basis, &ritz.1);
                let nx = linalg::norm(&x);
                let x: Vec<C64> = x.into_iter().map(|z| z / nx).collect();
                let r = residual(op, &x, ritz.0);
                iterations += 1;
                best = best.min(r);
                if r <= opts.tol {
                    return Ok(GroundState {
                        energy: ritz.0,
                        state: StateVector::new(x, tag),
                        residual: r,
                        iterations,
                    });
                }
                start = x;
                break;
            }
            if iterations >= opts.max_iter {
                break;
            }
            beta.push(b);
            basis.push(w.iter().map(|z| z / b).collect());
            if j + 1 == m_max {
                let x = combine(&basis[..j + 1], &ritz.1);
                let nx = linalg::norm(&x);
                start = x.into_iter().map(|z| z / nx).collect();
            }
        }
        if iterations >= opts.max_iter {
            return Err(Error::Convergence {
                iterations,
                residual: best,
            });
        }
    }
}
