//! Dense kernels for the small matrices used throughout the crate.
//!
//! Everything here is sized for Hilbert spaces of dimension ≤ 16: a cyclic
//! Jacobi eigensolver for real symmetric matrices, singular values built on
//! top of it, Shannon/von Neumann entropy in bits, and just enough complex
//! matrix support to conjugate states with qudit displacement operators.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative tolerance used to decide whether a matrix is symmetric.
pub const SYMMETRY_TOL: f64 = 1e-13;

const JACOBI_MAX_SWEEPS: usize = 100;

/// Dense real `n × n` matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "matrix dimension must be positive");
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from row-major entries; `data.len()` must be `n²`.
    pub fn from_vec(n: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 || data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: data.len(),
            });
        }
        Ok(Self { n, data })
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_vec(n, data)
    }

    /// `u vᵀ`
    pub fn outer(u: &[f64], v: &[f64]) -> Self {
        assert_eq!(u.len(), v.len(), "outer product of unequal lengths");
        Self::from_fn(u.len(), |i, j| u[i] * v[j])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "matmul dimension mismatch");
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.n, v.len(), "matvec dimension mismatch");
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "add dimension mismatch");
        Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scaled(-1.0))
    }

    /// `self += s * other`
    pub fn add_scaled(&mut self, s: f64, other: &Self) {
        assert_eq!(self.n, other.n, "add dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Frobenius (Hilbert–Schmidt) norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Largest `|A[i,j] − A[j,i]|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    pub fn is_symmetric(&self) -> bool {
        self.asymmetry() <= SYMMETRY_TOL * self.max_abs().max(1.0)
    }
}

impl Index<(usize, usize)> for SquareMatrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for SquareMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

impl fmt::Debug for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SquareMatrix({}x{}) [", self.n, self.n)?;
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| format!("{:>10.6}", self[(i, j)])).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Dense complex `n × n` matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSquareMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexSquareMatrix {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "matrix dimension must be positive");
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_real(m: &SquareMatrix) -> Self {
        Self::from_fn(m.dim(), |i, j| Complex64::new(m[(i, j)], 0.0))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "add dimension mismatch");
        Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scaled(Complex64::new(-1.0, 0.0)))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest imaginary part in absolute value.
    pub fn max_imag(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.im.abs()))
    }

    /// Real part, discarding imaginary components.
    pub fn real_part(&self) -> SquareMatrix {
        SquareMatrix::from_fn(self.n, |i, j| self[(i, j)].re)
    }

    /// `‖U†U − I‖₂ ≤ 1e-12`
    pub fn is_unitary(&self) -> bool {
        let prod = cmatmul(&self.dagger(), self).expect("same dimension");
        prod.sub(&Self::identity(self.n)).norm() <= 1e-12
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (na, nb) = (self.n, other.n);
        Self::from_fn(na * nb, |r, c| self[(r / nb, c / nb)] * other[(r % nb, c % nb)])
    }
}

impl Index<(usize, usize)> for ComplexSquareMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexSquareMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// Complex matrix product.
pub fn cmatmul(a: &ComplexSquareMatrix, b: &ComplexSquareMatrix) -> Result<ComplexSquareMatrix> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch {
            expected: a.n,
            got: b.n,
        });
    }
    let n = a.n;
    let mut out = ComplexSquareMatrix::zeros(n);
    for i in 0..n {
        for k in 0..n {
            let x = a.data[i * n + k];
            for j in 0..n {
                out.data[i * n + j] += x * b.data[k * n + j];
            }
        }
    }
    Ok(out)
}

/// Eigen-decomposition of a real symmetric matrix.
///
/// `values` are ascending and `vectors[i]` is the unit eigenvector paired
/// with `values[i]`. Within a degenerate eigenspace the choice of basis is
/// whatever the solver produced; callers must not rely on it.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min_value(&self) -> f64 {
        self.values[0]
    }

    /// `Σ f(λ_i) v_i v_iᵀ`
    pub fn compose(&self, mut f: impl FnMut(f64) -> f64) -> SquareMatrix {
        let n = self.values.len();
        let mut out = SquareMatrix::zeros(n);
        for (&lambda, v) in self.values.iter().zip(&self.vectors) {
            let w = f(lambda);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let wi = w * v[i];
                for j in 0..n {
                    out[(i, j)] += wi * v[j];
                }
            }
        }
        out
    }

    /// `V Λ Vᵀ`
    pub fn reconstruct(&self) -> SquareMatrix {
        self.compose(|x| x)
    }
}

/// Cyclic Jacobi sweeps on a symmetric working copy. Returns the unsorted
/// diagonal, the accumulated rotation (columns are eigenvectors) and whether
/// the off-diagonal norm fell below the convergence threshold.
fn jacobi(mut a: SquareMatrix) -> (Vec<f64>, SquareMatrix, bool) {
    let n = a.dim();
    let mut v = SquareMatrix::identity(n);
    let tol = 1e-14 * n as f64 * a.max_abs();

    let off_norm = |a: &SquareMatrix| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)] * a[(i, j)];
                }
            }
        }
        s.sqrt()
    };

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_norm(&a) <= tol {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                // theta == 0 gives signum 1 (positive zero), i.e. a 45° rotation
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        converged = off_norm(&a) <= tol;
    }
    let diag = (0..n).map(|i| a[(i, i)]).collect();
    (diag, v, converged)
}

fn sorted_spectrum(diag: Vec<f64>, v: &SquareMatrix) -> Spectrum {
    let n = diag.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));

    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = order
        .iter()
        .map(|&col| {
            let mut vec: Vec<f64> = (0..n).map(|r| v[(r, col)]).collect();
            // fix the sign: largest-magnitude component positive
            let pivot = vec
                .iter()
                .enumerate()
                .fold((0, 0.0f64), |best, (i, x)| if x.abs() > best.1 + 1e-12 { (i, x.abs()) } else { best })
                .0;
            if vec[pivot] < 0.0 {
                vec.iter_mut().for_each(|x| *x = -*x);
            }
            vec
        })
        .collect();
    Spectrum { values, vectors }
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a real symmetric
/// matrix, by cyclic Jacobi rotations.
pub fn sym_eig(a: &SquareMatrix) -> Result<Spectrum> {
    let asym = a.asymmetry();
    if asym > SYMMETRY_TOL * a.max_abs().max(1.0) {
        return Err(Error::NotSymmetric(asym));
    }
    let work = SquareMatrix::from_fn(a.dim(), |i, j| 0.5 * (a[(i, j)] + a[(j, i)]));
    let (diag, v, converged) = jacobi(work);
    if !converged {
        return Err(Error::NoConvergence(JACOBI_MAX_SWEEPS));
    }
    Ok(sorted_spectrum(diag, &v))
}

/// Eigenvalues only, ascending.
pub fn sym_eigvals(a: &SquareMatrix) -> Result<Vec<f64>> {
    sym_eig(a).map(|s| s.values)
}

/// Singular values in descending order.
///
/// Symmetric input takes the direct route (`|λ|` of its eigenvalues);
/// anything else goes through the eigenvalues of `AᵀA`.
pub fn singular_values(a: &SquareMatrix) -> Vec<f64> {
    let mut sv: Vec<f64> = if a.is_symmetric() {
        let work = SquareMatrix::from_fn(a.dim(), |i, j| 0.5 * (a[(i, j)] + a[(j, i)]));
        jacobi(work).0.into_iter().map(f64::abs).collect()
    } else {
        jacobi(gram(a)).0.into_iter().map(|x| x.max(0.0).sqrt()).collect()
    };
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

/// `AᵀA`, built so that the result is exactly symmetric.
pub fn gram(a: &SquareMatrix) -> SquareMatrix {
    let n = a.dim();
    let mut g = SquareMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let s: f64 = (0..n).map(|k| a[(k, i)] * a[(k, j)]).sum();
            g[(i, j)] = s;
            g[(j, i)] = s;
        }
    }
    g
}

/// Shannon entropy in bits, `−Σ p log₂ p` with `0 log 0 = 0`.
///
/// Entries in `[−1e-12, 0)` are treated as zero.
pub fn entropy_bits(p: &[f64]) -> Result<f64> {
    if let Some(&bad) = p.iter().find(|&&x| x < -1e-12 || !x.is_finite()) {
        return Err(Error::InvalidState(format!("negative probability {bad:e}")));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > 1e-10 {
        return Err(Error::BadDistribution(sum));
    }
    let h: f64 = p
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.log2())
        .sum();
    Ok(h.max(0.0))
}
