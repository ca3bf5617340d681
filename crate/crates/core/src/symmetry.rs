//! Translation, inversion and excitation-parity sectors of a periodic chain.
//!
//! A sector basis vector is built from an orbit representative `r` as
//! `sum_j chi(g_j) g_j |r>` over the group elements, then normalized. With
//! `T` moving site `i` to `i + 1`, the characters are `e^{-ikj}` for `T^j` and
//! `sigma e^{-ikj}` for `T^j I`, so every vector is a `T` eigenstate with
//! eigenvalue `e^{ik}`.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{reflect, translate, BoundaryCondition, ConstrainedBasis, Space};
use crate::error::{Error, Result};
use crate::linalg;
use crate::operators::{Operator, SparseAccumulator};
use crate::state::{BasisTag, StateVector};

const COMMUTATOR_TOL: f64 = 1e-10;

/// Quantum numbers of a sector. `momentum` is `n_k` with `k = 2 pi n_k / L`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SectorLabel {
    pub momentum: i32,
    pub inversion: Option<i8>,
    pub excitation_parity: Option<i8>,
}

impl SectorLabel {
    pub fn new(momentum: i32) -> Self {
        Self {
            momentum,
            inversion: None,
            excitation_parity: None,
        }
    }

    pub fn with_inversion(mut self, sign: i8) -> Self {
        self.inversion = Some(sign);
        self
    }

    pub fn with_parity(mut self, sign: i8) -> Self {
        self.excitation_parity = Some(sign);
        self
    }

    pub fn k(&self, sites: usize) -> f64 {
        2.0 * std::f64::consts::PI * self.momentum as f64 / sites as f64
    }

    /// Momentum 0 or pi, where the sector vectors are real.
    pub fn is_real(&self, sites: usize) -> bool {
        self.momentum == 0 || 2 * self.momentum as i64 == sites as i64
    }
}

impl fmt::Display for SectorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = |s: Option<i8>| match s {
            Some(1) => "+",
            Some(_) => "-",
            None => "*",
        };
        write!(
            f,
            "n_k={} I={} P={}",
            self.momentum,
            sign(self.inversion),
            sign(self.excitation_parity)
        )
    }
}

/// Which symmetries beyond translation to resolve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SectorOptions {
    /// Inversion, at `k = 0` and `k = pi` only.
    pub inversion: bool,
    /// `(-1)^N` with `N` the number of excitations.
    pub excitation_parity: bool,
}

impl Default for SectorOptions {
    fn default() -> Self {
        Self {
            inversion: true,
            excitation_parity: false,
        }
    }
}

impl SectorOptions {
    pub fn full() -> Self {
        Self {
            inversion: true,
            excitation_parity: true,
        }
    }
}

/// Orthonormal basis of one symmetry block, stored as sparse vectors over the
/// constrained basis.
#[derive(Clone, Debug)]
pub struct SymmetrySector {
    label: SectorLabel,
    states: Arc<[u32]>,
    sites: usize,
    representatives: Vec<(u32, f64)>,
    vectors: Vec<Vec<(usize, C64)>>,
}

impl SymmetrySector {
    pub fn label(&self) -> SectorLabel {
        self.label
    }

    pub fn momentum_index(&self) -> i32 {
        self.label.momentum
    }

    pub fn inversion_parity(&self) -> Option<i8> {
        self.label.inversion
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn full_dim(&self) -> usize {
        self.states.len()
    }

    /// `(representative configuration, amplitude of the representative in
    /// its normalized sector vector)`
    pub fn representatives(&self) -> &[(u32, f64)] {
        &self.representatives
    }

    /// Sector vector `s` as `(constrained index, amplitude)` pairs.
    pub fn vector(&self, s: usize) -> &[(usize, C64)] {
        &self.vectors[s]
    }

    pub fn is_real(&self) -> bool {
        self.label.is_real(self.sites)
    }

    pub fn tag(&self) -> BasisTag {
        BasisTag::Sector {
            sites: self.sites,
            label: self.label,
        }
    }

    /// Sector coefficients `<v_s|psi>` of a state over the constrained basis.
    pub fn project(&self, full: &[C64]) -> Vec<C64> {
        assert_eq!(full.len(), self.full_dim());
        self.vectors
            .iter()
            .map(|v| v.iter().map(|&(i, a)| a.conj() * full[i]).sum())
            .collect()
    }

    /// Expands sector coefficients into the constrained basis.
    pub fn embed(&self, coeffs: &[C64]) -> Vec<C64> {
        assert_eq!(coeffs.len(), self.dim());
        let mut out = linalg::zeros(self.full_dim());
        for (v, &c) in self.vectors.iter().zip(coeffs) {
            for &(i, a) in v {
                out[i] += a * c;
            }
        }
        out
    }

    pub fn embed_state(&self, coeffs: &[C64]) -> StateVector {
        StateVector::new(
            self.embed(coeffs),
            BasisTag::Constrained {
                sites: self.sites,
                bc: BoundaryCondition::Periodic,
            },
        )
    }

    /// Full-space index -> (sector vector, amplitude).
    fn lookup(&self) -> Vec<(u32, C64)> {
        let mut table = vec![(u32::MAX, C64::new(0.0, 0.0)); self.full_dim()];
        for (s, v) in self.vectors.iter().enumerate() {
            for &(i, a) in v {
                table[i] = (s as u32, a);
            }
        }
        table
    }

    fn index_of(&self, bits: u32) -> usize {
        self.states
            .binary_search(&bits)
            .expect("symmetry image left the constrained basis")
    }
}

/// Smallest configuration in the translation orbit of `bits` and the orbit
/// length.
pub fn orbit_representative(bits: u32, len: usize) -> (u32, usize) {
    let mut best = bits;
    let mut c = bits;
    for j in 1..=len {
        c = translate(c, len);
        if c == bits {
            return (best, j);
        }
        best = best.min(c);
    }
    unreachable!("translation has order L")
}

fn phase(momentum: i32, len: usize, j: usize) -> C64 {
    if momentum == 0 {
        C64::new(1.0, 0.0)
    } else if 2 * momentum as i64 == len as i64 {
        C64::new(if j % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
    } else {
        let k = 2.0 * std::f64::consts::PI * momentum as f64 / len as f64;
        C64::from_polar(1.0, -k * j as f64)
    }
}

fn momentum_range(len: usize) -> std::ops::RangeInclusive<i32> {
    -(((len as i32) - 1) / 2)..=(len as i32) / 2
}

fn check_periodic(basis: &ConstrainedBasis) -> Result<()> {
    if basis.bc() != BoundaryCondition::Periodic {
        return Err(Error::Unsupported(
            "symmetry sectors need a periodic chain".into(),
        ));
    }
    Ok(())
}

/// Translation-orbit representatives with their lengths, ascending.
fn orbits(basis: &ConstrainedBasis) -> Vec<(u32, usize)> {
    let len = basis.num_sites();
    basis
        .states()
        .par_iter()
        .filter_map(|&c| {
            let (rep, period) = orbit_representative(c, len);
            (rep == c).then_some((c, period))
        })
        .collect()
}

/// Every sector label produced by [`build_sectors_with`].
pub fn sector_labels(sites: usize, options: SectorOptions) -> Vec<SectorLabel> {
    let mut labels = Vec::new();
    for n in momentum_range(sites) {
        let base = SectorLabel::new(n);
        let with_inv: Vec<SectorLabel> = if options.inversion && base.is_real(sites) {
            vec![base.with_inversion(1), base.with_inversion(-1)]
        } else {
            vec![base]
        };
        for l in with_inv {
            if options.excitation_parity {
                labels.push(l.with_parity(1));
                labels.push(l.with_parity(-1));
            } else {
                labels.push(l);
            }
        }
    }
    labels
}

/// Momentum and inversion sectors, the default blocking.
pub fn build_sectors(basis: &ConstrainedBasis) -> Result<Vec<SymmetrySector>> {
    build_sectors_with(basis, SectorOptions::default())
}

pub fn build_sectors_with(basis: &ConstrainedBasis, options: SectorOptions) -> Result<Vec<SymmetrySector>> {
    check_periodic(basis)?;
    let orbit_list = orbits(basis);
    let states: Arc<[u32]> = basis.states().into();
    sector_labels(basis.num_sites(), options)
        .into_par_iter()
        .map(|label| assemble(basis, &states, &orbit_list, label))
        .collect()
}

/// Builds a single sector.
pub fn build_sector(basis: &ConstrainedBasis, label: SectorLabel) -> Result<SymmetrySector> {
    check_periodic(basis)?;
    let len = basis.num_sites();
    if !momentum_range(len).contains(&label.momentum) {
        return Err(Error::Argument(format!(
            "momentum index {} outside (-L/2, L/2] for L = {len}",
            label.momentum
        )));
    }
    if label.inversion.is_some() && !label.is_real(len) {
        return Err(Error::Unsupported(
            "inversion is resolved only at k = 0 and k = pi".into(),
        ));
    }
    for s in [label.inversion, label.excitation_parity].into_iter().flatten() {
        if s != 1 && s != -1 {
            return Err(Error::Argument(format!("symmetry eigenvalue must be +-1, got {s}")));
        }
    }
    let states: Arc<[u32]> = basis.states().into();
    assemble(basis, &states, &orbits(basis), label)
}

fn assemble(
    basis: &ConstrainedBasis,
    states: &Arc<[u32]>,
    orbit_list: &[(u32, usize)],
    label: SectorLabel,
) -> Result<SymmetrySector> {
    let len = basis.num_sites();
    let mut representatives = Vec::new();
    let mut vectors = Vec::new();
    for &(rep, _) in orbit_list {
        if let Some(p) = label.excitation_parity {
            let sign = if rep.count_ones() % 2 == 0 { 1 } else { -1 };
            if sign != p {
                continue;
            }
        }
        let mirrored = label
            .inversion
            .map(|sigma| (sigma, orbit_representative(reflect(rep, len), len).0));
        if let Some((_, rep_mirror)) = mirrored {
            // the pair of orbits is handled once, at the smaller representative
            if rep_mirror < rep {
                continue;
            }
        }
        let mut amps: BTreeMap<u32, C64> = BTreeMap::new();
        let mut c = rep;
        for j in 0..len {
            *amps.entry(c).or_default() += phase(label.momentum, len, j);
            c = translate(c, len);
        }
        if let Some((sigma, _)) = mirrored {
            let mut c = reflect(rep, len);
            for j in 0..len {
                *amps.entry(c).or_default() += phase(label.momentum, len, j) * sigma as f64;
                c = translate(c, len);
            }
        }
        let norm = amps.values().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        let v: Vec<(usize, C64)> = amps
            .into_iter()
            .filter(|(_, a)| a.norm() > 1e-12 * norm)
            .map(|(bits, a)| {
                let i = basis.index_of(bits).expect("orbit left the constrained basis");
                (i, a / norm)
            })
            .collect();
        let rep_amp = v
            .iter()
            .find(|&&(i, _)| states[i] == rep)
            .map_or(0.0, |(_, a)| a.norm());
        representatives.push((rep, rep_amp));
        vectors.push(v);
    }
    Ok(SymmetrySector {
        label,
        states: states.clone(),
        sites: len,
        representatives,
        vectors,
    })
}

/// Checks `||H g x - g H x|| <= tol` for every symmetry `g` the sector
/// resolves, with `x` a fixed random vector.
fn check_commutation(op: &dyn Operator, sector: &SymmetrySector) -> Result<()> {
    let dim = sector.full_dim();
    let len = sector.sites;
    let x = linalg::random_unit(dim, 0x5eed);
    let mut hx = linalg::zeros(dim);
    op.apply(&x, &mut hx);
    let scale = linalg::norm(&hx).max(1.0);

    let mut generators: Vec<Box<dyn Fn(&[C64]) -> Vec<C64> + Sync>> = Vec::new();
    let translated: Vec<usize> = sector
        .states
        .par_iter()
        .map(|&c| sector.index_of(translate(c, len)))
        .collect();
    generators.push(Box::new(move |v: &[C64]| {
        let mut out = linalg::zeros(v.len());
        for (i, &j) in translated.iter().enumerate() {
            out[j] = v[i];
        }
        out
    }));
    if sector.label.inversion.is_some() {
        let reflected: Vec<usize> = sector
            .states
            .par_iter()
            .map(|&c| sector.index_of(reflect(c, len)))
            .collect();
        generators.push(Box::new(move |v: &[C64]| {
            let mut out = linalg::zeros(v.len());
            for (i, &j) in reflected.iter().enumerate() {
                out[j] = v[i];
            }
            out
        }));
    }
    if sector.label.excitation_parity.is_some() {
        let signs: Vec<f64> = sector
            .states
            .iter()
            .map(|c| if c.count_ones() % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        generators.push(Box::new(move |v: &[C64]| {
            v.iter().zip(&signs).map(|(a, s)| a * s).collect()
        }));
    }

    let mut worst = 0.0f64;
    let mut hgx = linalg::zeros(dim);
    for g in &generators {
        let gx = g(&x);
        op.apply(&gx, &mut hgx);
        let ghx = g(&hx);
        let diff: Vec<C64> = hgx.iter().zip(&ghx).map(|(a, b)| a - b).collect();
        worst = worst.max(linalg::norm(&diff));
    }
    if worst > COMMUTATOR_TOL * scale {
        return Err(Error::SymmetryViolation { deviation: worst });
    }
    Ok(())
}

/// Dense block `B[s, r] = <v_s|H|v_r>` of an operator commuting with the
/// sector's symmetries.
pub fn project_operator(op: &dyn Operator, sector: &SymmetrySector) -> Result<Array2<C64>> {
    if op.dim() != sector.full_dim() {
        return Err(Error::Argument(format!(
            "operator dimension {} does not match basis dimension {}",
            op.dim(),
            sector.full_dim()
        )));
    }
    crate::guard::check("dense diagonalization dim", sector.dim(), crate::guard::MAX_DENSE_DIM)?;
    check_commutation(op, sector)?;
    let lookup = sector.lookup();
    let dim = sector.dim();
    let columns: Vec<Vec<(usize, C64)>> = (0..dim)
        .into_par_iter()
        .map_init(
            || SparseAccumulator::new(sector.full_dim()),
            |acc, r| {
                op.apply_columns(C64::new(1.0, 0.0), &sector.vectors[r], acc);
                let mut col: BTreeMap<usize, C64> = BTreeMap::new();
                for (i, v) in acc.drain() {
                    let (s, a) = lookup[i];
                    if s != u32::MAX {
                        *col.entry(s as usize).or_default() += a.conj() * v;
                    }
                }
                col.into_iter().collect()
            },
        )
        .collect();
    let mut block = Array2::zeros((dim, dim));
    for (r, col) in columns.into_iter().enumerate() {
        for (s, v) in col {
            block[(s, r)] = v;
        }
    }
    Ok(block)
}

/// Sector summary CSV with columns `n_k,parity,dim`; `parity` joins the
/// resolved inversion and excitation-parity signs.
pub fn write_sector_summary<W: Write>(sectors: &[SymmetrySector], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n_k", "parity", "dim"])?;
    for s in sectors {
        let sign = |x: Option<i8>| match x {
            Some(1) => "+",
            Some(_) => "-",
            None => "",
        };
        let parity = match (s.label.inversion, s.label.excitation_parity) {
            (i, None) => sign(i).to_string(),
            (i, p) => format!("{}{}", sign(i), sign(p)),
        };
        w.write_record([s.momentum_index().to_string(), parity, s.dim().to_string()])?;
    }
    w.flush()?;
    Ok(())
}
