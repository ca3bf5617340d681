//! Vector kernels over complex amplitudes.
//!
//! Reductions are split into fixed-size chunks whose partial sums are added
//! in chunk order, so results do not depend on the rayon thread count.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

const CHUNK: usize = 1 << 14;

/// `<a|b> = sum conj(a_i) b_i`
pub fn dot(a: &[C64], b: &[C64]) -> C64 {
    debug_assert_eq!(a.len(), b.len());
    if a.len() <= CHUNK {
        return a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    }
    let partial: Vec<C64> = a
        .par_chunks(CHUNK)
        .zip(b.par_chunks(CHUNK))
        .map(|(x, y)| x.iter().zip(y).map(|(u, v)| u.conj() * v).sum())
        .collect();
    partial.into_iter().sum()
}

pub fn norm_sqr(a: &[C64]) -> f64 {
    if a.len() <= CHUNK {
        return a.iter().map(|x| x.norm_sqr()).sum();
    }
    let partial: Vec<f64> = a
        .par_chunks(CHUNK)
        .map(|x| x.iter().map(|u| u.norm_sqr()).sum())
        .collect();
    partial.into_iter().sum()
}

pub fn norm(a: &[C64]) -> f64 {
    norm_sqr(a).sqrt()
}

pub fn scale(a: &mut [C64], s: f64) {
    a.par_iter_mut().with_min_len(CHUNK).for_each(|x| *x *= s);
}

/// `y += alpha x`
pub fn axpy(alpha: C64, x: &[C64], y: &mut [C64]) {
    y.par_iter_mut()
        .with_min_len(CHUNK)
        .zip(x.par_iter())
        .for_each(|(yi, xi)| *yi += alpha * xi);
}

pub fn zeros(n: usize) -> Vec<C64> {
    vec![C64::new(0.0, 0.0); n]
}

/// Random unit vector with Gaussian-like entries from a fixed seed.
pub fn random_unit(n: usize, seed: u64) -> Vec<C64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<C64> = (0..n)
        .map(|_| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    let nv = norm(&v);
    scale(&mut v, 1.0 / nv);
    v
}

/// Random unit vector with real entries.
pub fn random_real_unit(n: usize, seed: u64) -> Vec<C64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<C64> = (0..n).map(|_| C64::new(rng.gen::<f64>() - 0.5, 0.0)).collect();
    let nv = norm(&v);
    scale(&mut v, 1.0 / nv);
    v
}
