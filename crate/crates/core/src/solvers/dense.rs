use ndarray::{Array1, Array2, ShapeBuilder};
use ndarray_linalg::{EigValsh, EighInto, UPLO};
use num_complex::Complex64 as C64;

use crate::error::Result;
use crate::guard;

/// Complete eigensystem of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    /// Ascending.
    pub energies: Vec<f64>,
    /// Column `a` is the eigenvector of `energies[a]`.
    pub vectors: Array2<C64>,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn vector(&self, a: usize) -> Vec<C64> {
        self.vectors.column(a).to_vec()
    }

    /// Coefficients `<alpha|c>` of a vector in the eigenbasis.
    pub fn coefficients(&self, c: &[C64]) -> Vec<C64> {
        let c = Array1::from(c.to_vec());
        self.vectors.t().mapv(|z| z.conj()).dot(&c).to_vec()
    }
}

/// Column-major copy; the complex LAPACK wrappers misread row-major
/// Hermitian input as its conjugate.
fn fortran(block: &Array2<C64>) -> Array2<C64> {
    let mut f = Array2::zeros(block.raw_dim().f());
    f.assign(block);
    f
}

fn imag_free(block: &Array2<C64>) -> bool {
    block.iter().all(|z| z.im == 0.0)
}

fn check_square(block: &Array2<C64>) -> Result<usize> {
    let (n, m) = block.dim();
    if n != m {
        return Err(crate::Error::Argument(format!("block is {n} x {m}, not square")));
    }
    guard::check("dense diagonalization dim", n, guard::MAX_DENSE_DIM)?;
    Ok(n)
}

/// All eigenpairs of a Hermitian block.
///
/// Real blocks go through the complex solver as well: the real symmetric
/// eigenvectors returned by the linked LAPACK are wrong from `n = 130` on.
pub fn full_spectrum(block: &Array2<C64>) -> Result<EigenDecomposition> {
    let n = check_square(block)?;
    if n == 0 {
        return Ok(EigenDecomposition {
            energies: Vec::new(),
            vectors: Array2::zeros((0, 0)),
        });
    }
    let (energies, vectors) = fortran(block).eigh_into(UPLO::Lower)?;
    Ok(EigenDecomposition {
        energies: energies.to_vec(),
        vectors,
    })
}

/// Eigensystem of the symmetric tridiagonal matrix with diagonal `alpha` and
/// off-diagonal `beta`; eigenvectors are the columns of the returned matrix.
pub(crate) fn symmetric_tridiagonal(alpha: &[f64], beta: &[f64]) -> Result<(Vec<f64>, Array2<f64>)> {
    let m = alpha.len();
    let mut t = Array2::<C64>::zeros((m, m).f());
    for i in 0..m {
        t[(i, i)] = C64::new(alpha[i], 0.0);
        if i + 1 < m {
            t[(i + 1, i)] = C64::new(beta[i], 0.0);
            t[(i, i + 1)] = C64::new(beta[i], 0.0);
        }
    }
    let (e, v) = t.eigh_into(UPLO::Lower)?;
    let mut q = Array2::<f64>::zeros((m, m));
    for (a, col) in v.columns().into_iter().enumerate() {
        let pivot = col.iter().copied().max_by(|x, y| x.norm().total_cmp(&y.norm())).unwrap_or_default();
        let phase = pivot.conj() / pivot.norm();
        for (i, z) in col.iter().enumerate() {
            q[(i, a)] = (z * phase).re;
        }
    }
    Ok((e.to_vec(), q))
}

/// Eigenvalues only, ascending.
pub fn eigenvalues(block: &Array2<C64>) -> Result<Vec<f64>> {
    let n = check_square(block)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let e = if imag_free(block) {
        block.mapv(|z| z.re).eigvalsh(UPLO::Lower)?
    } else {
        fortran(block).eigvalsh(UPLO::Lower)?
    };
    Ok(e.to_vec())
}
