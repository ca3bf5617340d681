use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::guard;
use crate::linalg;
use crate::operators::Operator;
use crate::state::StateVector;

const MIN_STEP: f64 = 1e-12;

#[derive(Clone, Copy, Debug)]
pub struct KrylovOptions {
    /// Maximal Krylov subspace dimension.
    pub krylov_dim: usize,
    /// Local error target per step.
    pub tol: f64,
}

impl Default for KrylovOptions {
    fn default() -> Self {
        Self {
            krylov_dim: 30,
            tol: 1e-9,
        }
    }
}

/// Lanczos basis of one step and the eigensystem of its tridiagonal matrix.
struct Subspace {
    vectors: Vec<Vec<C64>>,
    eigenvalues: Vec<f64>,
    eigenvectors: Array2<f64>,
    /// Coupling to the next, discarded Lanczos vector; zero if the subspace
    /// is invariant.
    beta_next: f64,
}

impl Subspace {
    fn build(op: &dyn Operator, psi: &[C64], m_max: usize) -> Result<Self> {
        let n = psi.len();
        let norm = linalg::norm(psi);
        let mut vectors = vec![psi.iter().map(|z| z / norm).collect::<Vec<_>>()];
        let mut alpha = Vec::new();
        let mut beta = Vec::new();
        let mut w = linalg::zeros(n);
        let mut beta_next = 0.0;
        for j in 0..m_max.min(n) {
            op.apply(&vectors[j], &mut w);
            alpha.push(linalg::dot(&vectors[j], &w).re);
            for _ in 0..2 {
                for v in &vectors {
                    let c = linalg::dot(v, &w);
                    linalg::axpy(-c, v, &mut w);
                }
            }
            let b = linalg::norm(&w);
            if b < 1e-13 * alpha[j].abs().max(1.0) {
                break;
            }
            if j + 1 == m_max.min(n) {
                beta_next = b;
                break;
            }
            beta.push(b);
            vectors.push(w.iter().map(|z| z / b).collect());
        }
        let (e, q) = super::dense::symmetric_tridiagonal(&alpha, &beta[..alpha.len() - 1])?;
        Ok(Self {
            vectors,
            eigenvalues: e,
            eigenvectors: q,
            beta_next,
        })
    }

    /// `exp(-i T dt) e_1` and its error estimate.
    fn propagate(&self, dt: f64) -> (Vec<C64>, f64) {
        let m = self.eigenvalues.len();
        let mut c = vec![C64::new(0.0, 0.0); m];
        for (a, &e) in self.eigenvalues.iter().enumerate() {
            let w = C64::from_polar(self.eigenvectors[(0, a)], -e * dt);
            for (i, ci) in c.iter_mut().enumerate() {
                *ci += w * self.eigenvectors[(i, a)];
            }
        }
        let err = self.beta_next * c[m - 1].norm();
        (c, err)
    }

    fn assemble(&self, c: &[C64], norm: f64) -> Vec<C64> {
        let mut out = linalg::zeros(self.vectors[0].len());
        for (v, &ci) in self.vectors.iter().zip(c) {
            linalg::axpy(ci * norm, v, &mut out);
        }
        out
    }
}

/// `e^{-iHt} psi0` at every time of an ascending grid, by Krylov steps with
/// adaptive length.
pub fn evolve(op: &dyn Operator, psi0: &StateVector, times: &[f64], opts: &KrylovOptions) -> Result<Vec<StateVector>> {
    let mut out = Vec::with_capacity(times.len());
    evolve_with(op, psi0, times, opts, |_, psi| {
        out.push(psi.clone());
        Ok(())
    })?;
    Ok(out)
}

/// Like [`evolve`], handing each state to `visit(index, state)` instead of
/// collecting them.
pub fn evolve_with<F>(op: &dyn Operator, psi0: &StateVector, times: &[f64], opts: &KrylovOptions, mut visit: F) -> Result<()>
where
    F: FnMut(usize, &StateVector) -> Result<()>,
{
    guard::check("Krylov dim", op.dim(), guard::MAX_KRYLOV_DIM)?;
    if psi0.dim() != op.dim() {
        return Err(Error::Argument(format!(
            "state dimension {} does not match operator dimension {}",
            psi0.dim(),
            op.dim()
        )));
    }
    if times.first().is_some_and(|&t| t < 0.0) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Argument("time grid must be ascending and start at t >= 0".into()));
    }
    if opts.krylov_dim < 2 {
        return Err(Error::Argument("Krylov dimension must be at least 2".into()));
    }
    let tag = psi0.tag();
    let mut psi = psi0.amplitudes().to_vec();
    let mut t = 0.0f64;
    for (index, &target) in times.iter().enumerate() {
        while t < target {
            let norm = linalg::norm(&psi);
            let space = Subspace::build(op, &psi, opts.krylov_dim)?;
            let remaining = target - t;
            let mut h = remaining;
            let (mut c, mut err) = space.propagate(h);
            while err > opts.tol {
                h *= 0.5;
                if h < MIN_STEP {
                    return Err(Error::Stiffness { time: t, dt: h });
                }
                (c, err) = space.propagate(h);
            }
            psi = space.assemble(&c, norm);
            t = if h == remaining { target } else { t + h };
        }
        visit(index, &StateVector::from_raw(psi.clone(), tag))?;
    }
    Ok(())
}
