#![allow(dead_code)]

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// No two neighbouring excitations, with the `L-1, 0` bond on a ring.
pub fn allowed(bits: u32, len: usize, periodic: bool) -> bool {
    for i in 0..len {
        let j = i + 1;
        if j == len && !periodic {
            break;
        }
        if (bits >> i) & 1 == 1 && (bits >> (j % len)) & 1 == 1 {
            if len == 1 {
                continue;
            }
            return false;
        }
    }
    true
}

pub fn brute_force_states(len: usize, periodic: bool) -> Vec<u32> {
    (0..(1u32 << len)).filter(|&b| allowed(b, len, periodic)).collect()
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-26 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut e: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    e.sort_by(f64::total_cmp);
    e
}

/// Eigenvalues of a Hermitian matrix through its real `2n x 2n` form; every
/// eigenvalue appears there twice.
pub fn hermitian_eigenvalues(h: &[Vec<C64>]) -> Vec<f64> {
    let n = h.len();
    let mut r = vec![vec![0.0; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            r[i][j] = h[i][j].re;
            r[i + n][j + n] = h[i][j].re;
            r[i][j + n] = -h[i][j].im;
            r[i + n][j] = h[i][j].im;
        }
    }
    jacobi_eigenvalues(r).into_iter().step_by(2).collect()
}

pub fn random_state(dim: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
    let mut v: Vec<C64> = (0..dim)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= n);
    v
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Von Neumann entropy in bits of sites `[0, cut)` for a state given over
/// all `2^L` configurations, from the explicit reduced density matrix.
pub fn partial_trace_entropy(full: &[C64], len: usize, cut: usize) -> f64 {
    let da = 1usize << cut;
    let db = 1usize << (len - cut);
    let mut rho = vec![vec![C64::new(0.0, 0.0); da]; da];
    for a in 0..da {
        for a2 in 0..da {
            let mut s = C64::new(0.0, 0.0);
            for b in 0..db {
                s += full[a | (b << cut)] * full[a2 | (b << cut)].conj();
            }
            rho[a][a2] = s;
        }
    }
    hermitian_eigenvalues(&rho)
        .into_iter()
        .filter(|&p| p > 1e-16)
        .map(|p| -p * p.log2())
        .sum()
}

/// `P_{i-1} sigma^x_i P_{i+1}` applied to one configuration.
pub fn pxp_targets(bits: u32, len: usize, periodic: bool) -> Vec<u32> {
    (0..len)
        .filter_map(|i| {
            let flipped = bits ^ (1 << i);
            allowed(flipped, len, periodic).then_some(flipped)
        })
        .collect()
}
