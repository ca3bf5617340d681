//! Sparse operators and the model Hamiltonians.
//!
//! Every operator in this crate is real in the configuration basis, so the
//! matrix entries are stored as `f64` and act on complex amplitudes. Two
//! representations are provided:
//!
//! * [`SparseOperator`]: an assembled row-compressed matrix.
//! * [`FactoredOperator`]: `diag + sum_t c_t A_t B_t + sum_t c_t A_t`, applied
//!   factor by factor. For the `(PXP)^2` family this needs two passes over
//!   `H_PXP` instead of one pass over its much denser square.

use std::io::Write;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{bits_valid, BoundaryCondition, ConstrainedBasis, FullBasis, Space};
use crate::error::{argument, Error, Result};
use crate::state::StateVector;

/// Size limit for operators on the unconstrained `2^L` space.
pub const MAX_FULL_SPACE_SITES: usize = 20;

/// Anything that can act on a vector of amplitudes.
pub trait Operator: Sync {
    fn dim(&self) -> usize;

    /// `y = A x`
    fn apply(&self, x: &[C64], y: &mut [C64]);

    /// `acc += coef * A x` for a sparse `x` given as `(index, value)` pairs.
    fn apply_columns(&self, coef: C64, x: &[(usize, C64)], acc: &mut SparseAccumulator);

    fn is_hermitian(&self) -> bool;

    fn expectation(&self, psi: &[C64]) -> f64 {
        let mut y = vec![C64::new(0.0, 0.0); psi.len()];
        self.apply(psi, &mut y);
        crate::linalg::dot(psi, &y).re
    }
}

/// Scratch space for sparse-vector products: a dense buffer plus the list of
/// touched indices.
pub struct SparseAccumulator {
    values: Vec<C64>,
    touched: Vec<usize>,
    seen: Vec<bool>,
    scratch: Option<Box<SparseAccumulator>>,
}

impl SparseAccumulator {
    pub fn new(dim: usize) -> Self {
        Self {
            values: vec![C64::new(0.0, 0.0); dim],
            touched: Vec::new(),
            seen: vec![false; dim],
            scratch: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    fn take_scratch(&mut self) -> Box<SparseAccumulator> {
        let dim = self.dim();
        self.scratch
            .take()
            .unwrap_or_else(|| Box::new(SparseAccumulator::new(dim)))
    }

    #[inline]
    pub fn add(&mut self, index: usize, value: C64) {
        if !self.seen[index] {
            self.seen[index] = true;
            self.touched.push(index);
        }
        self.values[index] += value;
    }

    /// Returns the accumulated entries sorted by index and resets the buffer.
    pub fn drain(&mut self) -> Vec<(usize, C64)> {
        self.touched.sort_unstable();
        let out = self
            .touched
            .iter()
            .map(|&i| (i, self.values[i]))
            .collect();
        for &i in &self.touched {
            self.values[i] = C64::new(0.0, 0.0);
            self.seen[i] = false;
        }
        self.touched.clear();
        out
    }
}

/// Real row-compressed sparse matrix.
#[derive(Debug)]
pub struct SparseOperator {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<f64>,
    hermitian: bool,
    transpose: OnceLock<Box<SparseOperator>>,
}

impl Clone for SparseOperator {
    fn clone(&self) -> Self {
        Self {
            dim: self.dim,
            row_ptr: self.row_ptr.clone(),
            cols: self.cols.clone(),
            vals: self.vals.clone(),
            hermitian: self.hermitian,
            transpose: OnceLock::new(),
        }
    }
}

impl SparseOperator {
    /// Assembles a matrix from per-row entry lists. Duplicate columns in a
    /// row are summed in ascending column order; exact zeros are kept out.
    pub fn from_rows(dim: usize, rows: Vec<Vec<(u32, f64)>>, hermitian: bool) -> Self {
        assert_eq!(rows.len(), dim);
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for mut row in rows {
            row.sort_by_key(|&(c, _)| c);
            let mut iter = row.into_iter().peekable();
            while let Some((c, mut v)) = iter.next() {
                while let Some(&(c2, v2)) = iter.peek() {
                    if c2 != c {
                        break;
                    }
                    v += v2;
                    iter.next();
                }
                if v != 0.0 {
                    debug_assert!((c as usize) < dim);
                    cols.push(c);
                    vals.push(v);
                }
            }
            row_ptr.push(cols.len());
        }
        Self {
            dim,
            row_ptr,
            cols,
            vals,
            hermitian,
            transpose: OnceLock::new(),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_rows(dim, vec![Vec::new(); dim], true)
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let rows = diag
            .iter()
            .enumerate()
            .map(|(i, &d)| vec![(i as u32, d)])
            .collect();
        Self::from_rows(diag.len(), rows, true)
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()]
            .iter()
            .zip(&self.vals[r])
            .map(|(&c, &v)| (c as usize, v))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.cols[r.clone()].binary_search(&(j as u32)) {
            Ok(k) => self.vals[r.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn transpose(&self) -> &SparseOperator {
        self.transpose.get_or_init(|| {
            let mut rows = vec![Vec::new(); self.dim];
            for i in 0..self.dim {
                for (j, v) in self.row(i) {
                    rows[j].push((i as u32, v));
                }
            }
            Box::new(SparseOperator::from_rows(self.dim, rows, self.hermitian))
        })
    }

    /// Sparse product `self * other`.
    pub fn multiply(&self, other: &SparseOperator) -> SparseOperator {
        assert_eq!(self.dim, other.dim);
        let rows: Vec<Vec<(u32, f64)>> = (0..self.dim)
            .into_par_iter()
            .with_min_len(256)
            .map_init(
                || (vec![0.0f64; self.dim], vec![false; self.dim], Vec::new()),
                |(acc, seen, touched), i| {
                    for (k, a) in self.row(i) {
                        for (j, b) in other.row(k) {
                            if !seen[j] {
                                seen[j] = true;
                                touched.push(j);
                            }
                            acc[j] += a * b;
                        }
                    }
                    touched.sort_unstable();
                    let row = touched
                        .iter()
                        .map(|&j| {
                            let v = acc[j];
                            acc[j] = 0.0;
                            seen[j] = false;
                            (j as u32, v)
                        })
                        .collect();
                    touched.clear();
                    row
                },
            )
            .collect();
        SparseOperator::from_rows(self.dim, rows, false)
    }

    /// `a * self + b * other`
    pub fn linear_combination(&self, a: f64, other: &SparseOperator, b: f64) -> SparseOperator {
        assert_eq!(self.dim, other.dim);
        let rows = (0..self.dim)
            .map(|i| {
                self.row(i)
                    .map(|(j, v)| (j as u32, a * v))
                    .chain(other.row(i).map(|(j, v)| (j as u32, b * v)))
                    .collect()
            })
            .collect();
        SparseOperator::from_rows(self.dim, rows, self.hermitian && other.hermitian)
    }

    pub fn scaled(&self, s: f64) -> SparseOperator {
        let mut out = self.clone();
        out.vals.iter_mut().for_each(|v| *v *= s);
        out
    }

    pub fn with_hermitian(mut self, hermitian: bool) -> Self {
        self.hermitian = hermitian;
        self
    }

    /// Largest entrywise deviation `max |A - other|`.
    pub fn max_abs_diff(&self, other: &SparseOperator) -> f64 {
        self.linear_combination(1.0, other, -1.0)
            .vals
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// `max |A - A^dagger|`
    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(self.transpose())
    }

    pub fn to_dense(&self) -> ndarray::Array2<f64> {
        let mut m = ndarray::Array2::zeros((self.dim, self.dim));
        for i in 0..self.dim {
            for (j, v) in self.row(i) {
                m[(i, j)] += v;
            }
        }
        m
    }

    /// Coordinate-list export: header `dim nnz`, then `row col real imag`.
    pub fn write_coo<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{} {}", self.dim, self.nnz())?;
        for i in 0..self.dim {
            for (j, v) in self.row(i) {
                writeln!(out, "{i} {j} {v:e} 0")?;
            }
        }
        Ok(())
    }
}

impl Operator for SparseOperator {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[C64], y: &mut [C64]) {
        y.par_iter_mut()
            .enumerate()
            .with_min_len(2048)
            .for_each(|(i, yi)| {
                let mut s = C64::new(0.0, 0.0);
                for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                    s += x[self.cols[k] as usize] * self.vals[k];
                }
                *yi = s;
            });
    }

    fn apply_columns(&self, coef: C64, x: &[(usize, C64)], acc: &mut SparseAccumulator) {
        // column j of A is row j of A^T
        let rows_of = if self.hermitian { self } else { self.transpose() };
        for &(j, xj) in x {
            let c = coef * xj;
            for (i, v) in rows_of.row(j) {
                acc.add(i, c * v);
            }
        }
    }

    fn is_hermitian(&self) -> bool {
        self.hermitian
    }
}

#[derive(Clone, Debug)]
enum Term {
    Linear(f64, Arc<SparseOperator>),
    Product(f64, Arc<SparseOperator>, Arc<SparseOperator>),
}

/// `diag + sum c A B + sum c A`, kept in factored form.
#[derive(Clone, Debug)]
pub struct FactoredOperator {
    dim: usize,
    diagonal: Vec<f64>,
    terms: Vec<Term>,
    hermitian: bool,
}

impl FactoredOperator {
    pub fn new(diagonal: Vec<f64>, hermitian: bool) -> Self {
        Self {
            dim: diagonal.len(),
            diagonal,
            terms: Vec::new(),
            hermitian,
        }
    }

    /// Adds `coef * left * right`.
    pub fn with_product(mut self, coef: f64, left: Arc<SparseOperator>, right: Arc<SparseOperator>) -> Self {
        assert_eq!(left.dim, self.dim);
        assert_eq!(right.dim, self.dim);
        if coef != 0.0 {
            self.terms.push(Term::Product(coef, left, right));
        }
        self
    }

    /// Adds `coef * op`.
    pub fn with_linear(mut self, coef: f64, op: Arc<SparseOperator>) -> Self {
        assert_eq!(op.dim, self.dim);
        if coef != 0.0 {
            self.terms.push(Term::Linear(coef, op));
        }
        self
    }

    pub fn diagonal_part(&self) -> &[f64] {
        &self.diagonal
    }

    /// Assembles the full sparse matrix.
    pub fn to_sparse(&self) -> SparseOperator {
        let mut total = SparseOperator::from_diagonal(&self.diagonal);
        for term in &self.terms {
            total = match term {
                Term::Linear(c, a) => total.linear_combination(1.0, a, *c),
                Term::Product(c, a, b) => total.linear_combination(1.0, &a.multiply(b), *c),
            };
        }
        total.with_hermitian(self.hermitian)
    }
}

impl Operator for FactoredOperator {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[C64], y: &mut [C64]) {
        y.par_iter_mut()
            .zip(x.par_iter())
            .zip(self.diagonal.par_iter())
            .with_min_len(4096)
            .for_each(|((yi, xi), d)| *yi = xi * d);
        let mut tmp = vec![C64::new(0.0, 0.0); self.dim];
        let mut tmp2 = vec![C64::new(0.0, 0.0); self.dim];
        for term in &self.terms {
            match term {
                Term::Linear(c, a) => {
                    a.apply(x, &mut tmp);
                    crate::linalg::axpy(C64::new(*c, 0.0), &tmp, y);
                }
                Term::Product(c, a, b) => {
                    b.apply(x, &mut tmp);
                    a.apply(&tmp, &mut tmp2);
                    crate::linalg::axpy(C64::new(*c, 0.0), &tmp2, y);
                }
            }
        }
    }

    fn apply_columns(&self, coef: C64, x: &[(usize, C64)], acc: &mut SparseAccumulator) {
        for &(j, xj) in x {
            acc.add(j, coef * xj * self.diagonal[j]);
        }
        let mut inner = acc.take_scratch();
        for term in &self.terms {
            match term {
                Term::Linear(c, a) => a.apply_columns(coef * c, x, acc),
                Term::Product(c, a, b) => {
                    b.apply_columns(C64::new(1.0, 0.0), x, &mut inner);
                    let mid = inner.drain();
                    a.apply_columns(coef * c, &mid, acc);
                }
            }
        }
        acc.scratch = Some(inner);
    }

    fn is_hermitian(&self) -> bool {
        self.hermitian
    }
}

/// Parameters of the effective blockade model, energies in units of `J`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParameters {
    pub sites: usize,
    /// Field `Delta` multiplying `sum_i sigma^z_i`.
    pub delta: f64,
    pub bc: BoundaryCondition,
    /// Deformation of the pair-creation terms; 1 is the undeformed model.
    pub chi_drive: f64,
    /// Strength of the symmetry-breaking perturbation.
    pub epsilon_break: f64,
}

impl ModelParameters {
    pub fn new(sites: usize, delta: f64) -> Self {
        Self {
            sites,
            delta,
            bc: BoundaryCondition::Periodic,
            chi_drive: 1.0,
            epsilon_break: 0.0,
        }
    }

    fn check(&self, basis: &ConstrainedBasis) -> Result<()> {
        if basis.num_sites() != self.sites || basis.bc() != self.bc {
            return argument(format!(
                "parameters (L={}, {}) do not match basis (L={}, {})",
                self.sites,
                self.bc,
                basis.num_sites(),
                basis.bc()
            ));
        }
        Ok(())
    }
}

/// `J = g^2 / (2 omega_c)` from adiabatically eliminating the cavity mode.
pub fn effective_coupling(g: f64, omega_c: f64) -> Result<f64> {
    if omega_c <= 0.0 || !omega_c.is_finite() {
        return argument(format!("cavity detuning must be positive, got {omega_c}"));
    }
    Ok(g * g / (2.0 * omega_c))
}

/// Sign of site `i` in the staggered field. The sign counts sites from 1,
/// so the Néel state with site 0 excited has negative staggered
/// magnetization.
#[inline]
pub fn stagger_sign(site: usize) -> f64 {
    if site % 2 == 0 {
        -1.0
    } else {
        1.0
    }
}

/// Maps each basis state through `f(bits) -> Option<bits'>` and returns the
/// 0/1 matrix with entry `(index(bits'), index(bits)) = 1`.
fn flip_matrix<F>(space: &dyn Space, f: F, hermitian: bool) -> SparseOperator
where
    F: Fn(u32) -> Vec<u32> + Sync,
{
    let dim = space.dim();
    let mut rows: Vec<Vec<(u32, f64)>> = vec![Vec::new(); dim];
    for j in 0..dim {
        for target in f(space.config(j)) {
            if let Some(i) = space.index_of(target) {
                rows[i].push((j as u32, 1.0));
            }
        }
    }
    SparseOperator::from_rows(dim, rows, hermitian)
}

fn check_site(basis: &ConstrainedBasis, site: usize) -> Result<()> {
    if site >= basis.num_sites() {
        return argument(format!("site {site} outside chain of length {}", basis.num_sites()));
    }
    Ok(())
}

/// `P_{i-1} sigma^x_i P_{i+1}`: flips site `i` when both neighbours are empty.
pub fn projected_sigma_x(basis: &ConstrainedBasis, site: usize) -> Result<SparseOperator> {
    check_site(basis, site)?;
    let (len, bc) = (basis.num_sites(), basis.bc());
    Ok(flip_matrix(
        basis,
        |c| {
            let t = c ^ (1 << site);
            if bits_valid(t, len, bc) { vec![t] } else { vec![] }
        },
        true,
    ))
}

/// Projected raising operator `P sigma^+_i P` (ground to excited).
pub fn projected_sigma_plus(basis: &ConstrainedBasis, site: usize) -> Result<SparseOperator> {
    check_site(basis, site)?;
    let (len, bc) = (basis.num_sites(), basis.bc());
    Ok(flip_matrix(
        basis,
        |c| {
            let t = c | (1 << site);
            if t != c && bits_valid(t, len, bc) { vec![t] } else { vec![] }
        },
        false,
    ))
}

/// `S^+ = sum_i P sigma^+_i P`.
pub fn collective_raising(basis: &ConstrainedBasis) -> SparseOperator {
    let (len, bc) = (basis.num_sites(), basis.bc());
    flip_matrix(
        basis,
        |c| {
            (0..len)
                .map(|i| c | (1 << i))
                .filter(|&t| t != c && bits_valid(t, len, bc))
                .collect()
        },
        false,
    )
}

/// `H_PXP = sum_i P_{i-1} sigma^x_i P_{i+1}`
pub fn build_pxp(basis: &ConstrainedBasis) -> SparseOperator {
    let (len, bc) = (basis.num_sites(), basis.bc());
    flip_matrix(
        basis,
        |c| {
            (0..len)
                .map(|i| c ^ (1 << i))
                .filter(|&t| bits_valid(t, len, bc))
                .collect()
        },
        true,
    )
}

/// Diagonal of `sum_i sigma^z_i = 2 N_exc - L`.
pub fn sigma_z_total(space: &dyn Space) -> Vec<f64> {
    let len = space.num_sites() as f64;
    space.configs().map(|c| 2.0 * c.count_ones() as f64 - len).collect()
}

/// Diagonal of `sum_i s_i sigma^z_i` with the sign of [`stagger_sign`].
pub fn staggered_sigma_z(space: &dyn Space) -> Vec<f64> {
    let len = space.num_sites();
    space
        .configs()
        .map(|c| {
            (0..len)
                .map(|i| stagger_sign(i) * if (c >> i) & 1 == 1 { 1.0 } else { -1.0 })
                .sum()
        })
        .collect()
}

fn scaled_diag(diag: Vec<f64>, s: f64) -> Vec<f64> {
    diag.into_iter().map(|d| d * s).collect()
}

/// `H = -(1/L) H_PXP^2 + Delta sum_i sigma^z_i` in factored form.
pub fn pxp2_operator(basis: &ConstrainedBasis, params: &ModelParameters) -> Result<FactoredOperator> {
    params.check(basis)?;
    let x = Arc::new(build_pxp(basis));
    let len = basis.num_sites() as f64;
    Ok(FactoredOperator::new(scaled_diag(sigma_z_total(basis), params.delta), true)
        .with_product(-1.0 / len, x.clone(), x))
}

/// Assembled `-(1/L) sum_{i,j} X_i X_j + Delta sum_i sigma^z_i`, including
/// the `i = j` terms.
pub fn build_pxp2(basis: &ConstrainedBasis, params: &ModelParameters) -> Result<SparseOperator> {
    Ok(pxp2_operator(basis, params)?.to_sparse())
}

/// Deformed model: spin-conserving part plus `chi`-weighted pair creation
/// and annihilation, with the per-pair prefactor `-1/L` so that `chi = 1`
/// reproduces [`pxp2_operator`].
pub fn deformed_operator(basis: &ConstrainedBasis, params: &ModelParameters) -> Result<FactoredOperator> {
    params.check(basis)?;
    let chi = params.chi_drive;
    if !(0.0..=1.0).contains(&chi) {
        return argument(format!("chi_drive must lie in [0, 1], got {chi}"));
    }
    let len = basis.num_sites() as f64;
    let diag = scaled_diag(sigma_z_total(basis), params.delta);
    if chi == 1.0 {
        let x = Arc::new(build_pxp(basis));
        return Ok(FactoredOperator::new(diag, true).with_product(-1.0 / len, x.clone(), x));
    }
    let plus = collective_raising(basis);
    let minus = Arc::new(plus.transpose().clone().with_hermitian(false));
    let plus = Arc::new(plus);
    Ok(FactoredOperator::new(diag, true)
        .with_product(-1.0 / len, plus.clone(), minus.clone())
        .with_product(-1.0 / len, minus.clone(), plus.clone())
        .with_product(-chi / len, plus.clone(), plus)
        .with_product(-chi / len, minus.clone(), minus))
}

pub fn build_deformed(basis: &ConstrainedBasis, params: &ModelParameters) -> Result<SparseOperator> {
    Ok(deformed_operator(basis, params)?.to_sparse())
}

/// `dH = -eps sum_i (X_i + s_i sigma^z_i)`.
pub fn build_symmetry_breaking(basis: &ConstrainedBasis, epsilon: f64) -> Result<SparseOperator> {
    let len = basis.num_sites();
    if basis.bc() == BoundaryCondition::Periodic && len % 2 == 1 {
        return argument(format!("staggered field is frustrated on a ring of odd length {len}"));
    }
    let diag = scaled_diag(staggered_sigma_z(basis), -epsilon);
    Ok(SparseOperator::from_diagonal(&diag).linear_combination(1.0, &build_pxp(basis), -epsilon))
}

/// `H + dH` with `eps = params.epsilon_break`, factored.
pub fn broken_pxp2_operator(basis: &ConstrainedBasis, params: &ModelParameters) -> Result<FactoredOperator> {
    params.check(basis)?;
    let len = basis.num_sites();
    if basis.bc() == BoundaryCondition::Periodic && len % 2 == 1 {
        return argument(format!("staggered field is frustrated on a ring of odd length {len}"));
    }
    let eps = params.epsilon_break;
    let x = Arc::new(build_pxp(basis));
    let diag: Vec<f64> = sigma_z_total(basis)
        .into_iter()
        .zip(staggered_sigma_z(basis))
        .map(|(z, s)| params.delta * z - eps * s)
        .collect();
    Ok(FactoredOperator::new(diag, true)
        .with_product(-1.0 / len as f64, x.clone(), x.clone())
        .with_linear(-eps, x))
}

fn check_full_space(sites: usize) -> Result<FullBasis> {
    if sites > MAX_FULL_SPACE_SITES {
        return Err(Error::Resource {
            guard: "full-space sites",
            requested: sites,
            limit: MAX_FULL_SPACE_SITES,
        });
    }
    FullBasis::new(sites)
}

/// `S^x = sum_i sigma^x_i` on the unconstrained space.
pub fn collective_sigma_x(space: &FullBasis) -> SparseOperator {
    let len = space.num_sites();
    flip_matrix(space, |c| (0..len).map(|i| c ^ (1 << i)).collect(), true)
}

/// `-prefactor (S^x)^2 + Delta S^z` on `sites` unconstrained spins.
pub fn lmg_with_prefactor(sites: usize, prefactor: f64, delta: f64) -> Result<FactoredOperator> {
    let space = check_full_space(sites)?;
    let sx = Arc::new(collective_sigma_x(&space));
    Ok(FactoredOperator::new(scaled_diag(sigma_z_total(&space), delta), true)
        .with_product(-prefactor, sx.clone(), sx))
}

/// `H_LMG = -(1/L)(S^x)^2 + Delta S^z`, factored.
pub fn lmg_operator(sites: usize, delta: f64) -> Result<FactoredOperator> {
    lmg_with_prefactor(sites, 1.0 / sites as f64, delta)
}

pub fn build_lmg(sites: usize, delta: f64) -> Result<SparseOperator> {
    Ok(lmg_operator(sites, delta)?.to_sparse())
}

/// LMG model on one of the `period` sublattices of an `L`-site chain. The
/// interaction keeps the `1/L` normalization of the full chain.
pub fn sublattice_lmg_operator(sites: usize, period: usize, delta: f64) -> Result<FactoredOperator> {
    if !(2..=4).contains(&period) {
        return argument(format!("sublattice period must be 2, 3 or 4, got {period}"));
    }
    if sites % period != 0 {
        return argument(format!("period {period} does not divide L = {sites}"));
    }
    lmg_with_prefactor(sites / period, 1.0 / sites as f64, delta)
}

pub fn build_sublattice_lmg(sites: usize, period: usize, delta: f64) -> Result<SparseOperator> {
    Ok(sublattice_lmg_operator(sites, period, delta)?.to_sparse())
}

/// Blockade projection of the fully x-polarized product state, normalized.
pub fn projected_polarized_state(basis: &ConstrainedBasis) -> StateVector {
    // every product amplitude is 2^{-L/2}; the projector keeps them unchanged
    let amp = 2f64.powf(-(basis.num_sites() as f64) / 2.0);
    StateVector::new(vec![C64::new(amp, 0.0); basis.dim()], basis.tag())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{named_state, NamedState, SpinConfiguration};
    use approx::assert_abs_diff_eq;

    fn ring(len: usize) -> ConstrainedBasis {
        ConstrainedBasis::enumerate(len, BoundaryCondition::Periodic).unwrap()
    }

    fn idx(b: &ConstrainedBasis, s: &str) -> usize {
        b.index(s.parse::<SpinConfiguration>().unwrap()).unwrap()
    }

    #[test]
    fn projected_flip_examples() {
        let b = ring(4);
        let x1 = projected_sigma_x(&b, 1).unwrap();
        assert_eq!(x1.get(idx(&b, "0100"), idx(&b, "0000")), 1.0);
        // right neighbour excited: no flip
        let col = idx(&b, "0010");
        assert!((0..b.dim()).all(|i| x1.get(i, col) == 0.0));
        let sq = x1.multiply(&x1);
        assert_eq!(sq.get(idx(&b, "0000"), idx(&b, "0000")), 1.0);
        assert!(projected_sigma_x(&b, 4).is_err());
    }

    #[test]
    fn pxp_open_two_sites() {
        let b = ConstrainedBasis::enumerate(2, BoundaryCondition::Open).unwrap();
        let h = build_pxp(&b).to_dense();
        // states: 00, 10, 01
        let expected = ndarray::arr2(&[[0.0, 1.0, 1.0], [1.0, 0.0, 0.0], [1.0, 0.0, 0.0]]);
        assert_eq!(h, expected);
    }

    #[test]
    fn pxp2_expectations() {
        let b = ring(8);
        let h = build_pxp2(&b, &ModelParameters::new(8, 0.0)).unwrap();
        let vac = named_state(&b, NamedState::Vacuum).unwrap();
        let z2 = named_state(&b, NamedState::Z2).unwrap();
        assert_abs_diff_eq!(h.expectation(vac.amplitudes()), -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(h.expectation(z2.amplitudes()), -0.5, epsilon = 1e-14);
    }

    #[test]
    fn pxp2_identity_and_hermiticity() {
        for len in [6, 8, 10] {
            let b = ring(len);
            let x = build_pxp(&b);
            let h = build_pxp2(&b, &ModelParameters::new(len, 0.0)).unwrap();
            let reference = x.multiply(&x).scaled(-1.0 / len as f64);
            assert!(h.max_abs_diff(&reference) <= 1e-12);
            let h = build_pxp2(&b, &ModelParameters::new(len, 0.37)).unwrap();
            assert!(h.hermiticity_defect() <= 1e-12);
        }
    }

    #[test]
    fn factored_and_assembled_agree() {
        let b = ring(10);
        let p = ModelParameters::new(10, -0.3);
        let f = pxp2_operator(&b, &p).unwrap();
        let s = f.to_sparse();
        let x = crate::linalg::random_unit(b.dim(), 3);
        let mut y1 = vec![C64::new(0.0, 0.0); b.dim()];
        let mut y2 = y1.clone();
        f.apply(&x, &mut y1);
        s.apply(&x, &mut y2);
        let diff = y1.iter().zip(&y2).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(diff < 1e-12);

        // sparse column application reproduces a column of the matrix
        let mut acc = SparseAccumulator::new(b.dim());
        f.apply_columns(C64::new(1.0, 0.0), &[(5, C64::new(1.0, 0.0))], &mut acc);
        for (i, v) in acc.drain() {
            assert!((v.re - s.get(i, 5)).abs() < 1e-14);
        }
    }

    #[test]
    fn lmg_small_cases() {
        let h = build_lmg(2, 0.0).unwrap().to_dense();
        let (mut ev, _) = ndarray_linalg::EighInto::eigh_into(h, ndarray_linalg::UPLO::Lower).unwrap();
        ev.as_slice_mut().unwrap().sort_by(f64::total_cmp);
        for (a, b) in ev.iter().zip([-2.0, -2.0, 0.0, 0.0]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
        }
        let delta = 0.7;
        let h = build_lmg(4, delta).unwrap();
        assert_abs_diff_eq!(h.get(0, 0), -1.0 - 4.0 * delta, epsilon = 1e-14);
        assert!(build_lmg(21, 0.0).is_err());
    }

    #[test]
    fn deformed_limits() {
        let b = ring(8);
        let mut p = ModelParameters::new(8, 0.4);
        let full = build_pxp2(&b, &p).unwrap();
        p.chi_drive = 1.0;
        assert!(build_deformed(&b, &p).unwrap().max_abs_diff(&full) <= 1e-12);
        // the chi = 1 path must also agree when assembled from ladder operators
        p.chi_drive = 0.999_999_999_999;
        assert!(build_deformed(&b, &p).unwrap().max_abs_diff(&full) <= 1e-10);

        p.chi_drive = 0.0;
        p.delta = 0.0;
        let xy = build_deformed(&b, &p).unwrap();
        let z2 = named_state(&b, NamedState::Z2).unwrap();
        assert_abs_diff_eq!(xy.expectation(z2.amplitudes()), -0.5, epsilon = 1e-14);
        // conserves the excitation number
        for i in 0..b.dim() {
            for (j, _) in xy.row(i) {
                assert_eq!(b.config(i).count_ones(), b.config(j).count_ones());
            }
        }
        p.chi_drive = 1.5;
        assert!(build_deformed(&b, &p).is_err());
    }

    #[test]
    fn symmetry_breaking_field() {
        let b = ring(4);
        let eps = 1e-4;
        let dh = build_symmetry_breaking(&b, eps).unwrap();
        let z2 = named_state(&b, NamedState::Z2).unwrap();
        assert_abs_diff_eq!(dh.expectation(z2.amplitudes()), eps * 4.0, epsilon = 1e-18);
        assert_eq!(build_symmetry_breaking(&b, 0.0).unwrap().nnz(), 0);
        let off: Vec<_> = (0..b.dim())
            .flat_map(|i| dh.row(i).filter(move |&(j, _)| j != i).map(move |(j, v)| (i, j, v)))
            .collect();
        let x = build_pxp(&b);
        assert!(off.iter().all(|&(i, j, v)| v == -eps * x.get(i, j)));
        assert!(build_symmetry_breaking(&ring(5), eps).is_err());
    }

    #[test]
    fn coupling_formula() {
        assert_eq!(effective_coupling(1.0, 2.0).unwrap(), 0.25);
        assert_eq!(effective_coupling(0.0, 5.0).unwrap(), 0.0);
        assert_eq!(effective_coupling(2.0, 1.0).unwrap(), 2.0);
        assert!(effective_coupling(1.0, 0.0).is_err());
    }

    #[test]
    fn polarized_state_is_uniform() {
        let b = ring(10);
        let psi = projected_polarized_state(&b);
        let a0 = psi.amplitudes()[0];
        assert!(psi.amplitudes().iter().all(|a| (a - a0).norm() < 1e-15 && a.re > 0.0));
        assert_abs_diff_eq!(psi.norm(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn sublattice_lmg_uses_chain_normalization() {
        let h = build_sublattice_lmg(12, 3, 0.0).unwrap();
        assert_eq!(h.dim(), 1 << 4);
        // <0|-(1/12)(S^x)^2|0> = -4/12
        assert_abs_diff_eq!(h.get(0, 0), -4.0 / 12.0, epsilon = 1e-15);
        assert!(build_sublattice_lmg(10, 3, 0.0).is_err());
    }

    #[test]
    fn coo_export() {
        let b = ConstrainedBasis::enumerate(2, BoundaryCondition::Open).unwrap();
        let mut out = Vec::new();
        build_pxp(&b).write_coo(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().next(), Some("3 4"));
        assert_eq!(text.lines().count(), 5);
    }
}
