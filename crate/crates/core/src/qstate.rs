//! Bipartite state algebra.
//!
//! Composite basis convention: `|i⟩_A |k⟩_B` has index `i·d_B + k`.

use crate::error::{Error, Result};
use crate::numkernel::{sym_eigvals, SquareMatrix};

/// Local dimensions of a bipartite system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BipartiteDims {
    pub da: usize,
    pub db: usize,
}

impl BipartiteDims {
    pub fn new(da: usize, db: usize) -> Result<Self> {
        if da < 2 || db < 2 {
            return Err(Error::Config(format!("local dimensions must be >= 2, got ({da}, {db})")));
        }
        Ok(Self { da, db })
    }

    pub const QUBITS: Self = Self { da: 2, db: 2 };
    pub const QUTRITS: Self = Self { da: 3, db: 3 };

    pub fn total(&self) -> usize {
        self.da * self.db
    }

    /// `min(d_A, d_B)`
    pub fn min_local(&self) -> usize {
        self.da.min(self.db)
    }

    #[inline]
    pub fn index(&self, i: usize, k: usize) -> usize {
        i * self.db + k
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Real symmetric, unit-trace, positive semidefinite matrix on `H_A ⊗ H_B`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: SquareMatrix,
    dims: BipartiteDims,
}

impl DensityMatrix {
    /// Validates symmetry, unit trace (±1e-10) and positivity (min eigenvalue ≥ −1e-10).
    pub fn new(mat: SquareMatrix, dims: BipartiteDims) -> Result<Self> {
        check_dims(&mat, dims)?;
        if !mat.is_symmetric() {
            return Err(Error::NotSymmetric(mat.asymmetry()));
        }
        let tr = mat.trace();
        if (tr - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!("trace {tr} != 1")));
        }
        let min = sym_eigvals(&mat)?[0];
        if min < -1e-10 {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { mat, dims })
    }

    /// For constructions that are positive and normalized by design.
    pub(crate) fn new_unchecked(mat: SquareMatrix, dims: BipartiteDims) -> Self {
        debug_assert_eq!(mat.dim(), dims.total());
        Self { mat, dims }
    }

    pub fn maximally_mixed(dims: BipartiteDims) -> Self {
        let d = dims.total();
        Self::new_unchecked(SquareMatrix::identity(d).scaled(1.0 / d as f64), dims)
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.mat
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn into_matrix(self) -> SquareMatrix {
        self.mat
    }

    /// Reduced state of the subsystem that is kept.
    pub fn reduced(&self, keep: Subsystem) -> SquareMatrix {
        let traced = match keep {
            Subsystem::A => Subsystem::B,
            Subsystem::B => Subsystem::A,
        };
        partial_trace(&self.mat, self.dims, traced).expect("dims validated at construction")
    }
}

fn check_dims(m: &SquareMatrix, dims: BipartiteDims) -> Result<()> {
    if m.dim() != dims.total() {
        return Err(Error::DimensionMismatch {
            expected: dims.total(),
            got: m.dim(),
        });
    }
    Ok(())
}

/// `A ⊗ B`
pub fn kron(a: &SquareMatrix, b: &SquareMatrix) -> SquareMatrix {
    let nb = b.dim();
    SquareMatrix::from_fn(a.dim() * nb, |r, c| a[(r / nb, c / nb)] * b[(r % nb, c % nb)])
}

/// Kronecker product of two vectors.
pub fn kron_vec(u: &[f64], v: &[f64]) -> Vec<f64> {
    u.iter().flat_map(|&x| v.iter().map(move |&y| x * y)).collect()
}

/// Transposes the indices of one tensor factor. Pure index permutation, so
/// trace and symmetry are preserved exactly.
pub fn partial_transpose(m: &SquareMatrix, dims: BipartiteDims, side: Subsystem) -> Result<SquareMatrix> {
    check_dims(m, dims)?;
    let (da, db) = (dims.da, dims.db);
    let mut out = SquareMatrix::zeros(m.dim());
    for i in 0..da {
        for k in 0..db {
            for j in 0..da {
                for l in 0..db {
                    let src = match side {
                        Subsystem::B => m[(dims.index(i, l), dims.index(j, k))],
                        Subsystem::A => m[(dims.index(j, k), dims.index(i, l))],
                    };
                    out[(dims.index(i, k), dims.index(j, l))] = src;
                }
            }
        }
    }
    Ok(out)
}

/// Traces out `traced`, returning the operator on the other factor.
pub fn partial_trace(m: &SquareMatrix, dims: BipartiteDims, traced: Subsystem) -> Result<SquareMatrix> {
    check_dims(m, dims)?;
    let (da, db) = (dims.da, dims.db);
    Ok(match traced {
        Subsystem::B => SquareMatrix::from_fn(da, |i, j| (0..db).map(|k| m[(dims.index(i, k), dims.index(j, k))]).sum()),
        Subsystem::A => SquareMatrix::from_fn(db, |k, l| (0..da).map(|i| m[(dims.index(i, k), dims.index(i, l))]).sum()),
    })
}

/// `(1/√d) Σ |i⟩|i⟩`
pub fn max_entangled(d: usize) -> Vec<f64> {
    assert!(d >= 2, "dimension must be at least 2");
    let amp = 1.0 / (d as f64).sqrt();
    let mut v = vec![0.0; d * d];
    for i in 0..d {
        v[i * d + i] = amp;
    }
    v
}

/// `(|01⟩ − |10⟩)/√2`
pub fn singlet() -> Vec<f64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    vec![0.0, h, -h, 0.0]
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub(crate) fn check_normalized(v: &[f64]) -> Result<()> {
    let nv = norm(v);
    if (nv - 1.0).abs() > 1e-10 {
        return Err(Error::Unnormalized(nv));
    }
    Ok(())
}

/// `|v⟩⟨v|` for a unit vector.
pub fn dm_from_pure(v: &[f64], dims: BipartiteDims) -> Result<DensityMatrix> {
    if v.len() != dims.total() {
        return Err(Error::DimensionMismatch {
            expected: dims.total(),
            got: v.len(),
        });
    }
    check_normalized(v)?;
    Ok(DensityMatrix::new_unchecked(SquareMatrix::outer(v, v), dims))
}

/// `Tr(ρ²)` for a real symmetric matrix.
pub fn purity(m: &SquareMatrix) -> f64 {
    m.as_slice().iter().map(|x| x * x).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut v: Vec<f64>) -> Vec<f64> {
        v.sort_by(f64::total_cmp);
        v
    }

    #[test]
    fn kron_examples() {
        assert_eq!(kron(&SquareMatrix::identity(2), &SquareMatrix::identity(3)), SquareMatrix::identity(6));
        assert_eq!(
            kron(&SquareMatrix::diag(&[2.0, 5.0]), &SquareMatrix::identity(2)),
            SquareMatrix::diag(&[2.0, 2.0, 5.0, 5.0])
        );
        let a = SquareMatrix::from_rows(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
        let b = SquareMatrix::from_fn(3, |i, j| (i * 3 + j) as f64 - 2.0);
        let ab = kron(&a, &b);
        assert!((ab.trace() - a.trace() * b.trace()).abs() < 1e-12);
        // (A⊗B)[(i·dB+k),(j·dB+l)] = A[i,j]·B[k,l]
        assert_eq!(ab[(5, 1)], a[(1, 0)] * b[(2, 1)]);
    }

    #[test]
    fn pt_of_product_state() {
        let ra = SquareMatrix::from_rows(&[&[0.7, 0.2], &[0.2, 0.3]]).unwrap();
        let rb = SquareMatrix::from_rows(&[&[0.5, 0.1, 0.0], &[0.1, 0.3, 0.05], &[0.0, 0.05, 0.2]]).unwrap();
        let dims = BipartiteDims::new(2, 3).unwrap();
        let rho = kron(&ra, &rb);
        let pt = partial_transpose(&rho, dims, Subsystem::B).unwrap();
        assert_eq!(pt, kron(&ra, &rb.transpose()));
        let e1 = sorted(sym_eigvals(&pt).unwrap());
        let e0 = sorted(sym_eigvals(&rho).unwrap());
        for (x, y) in e1.iter().zip(&e0) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!(e1[0] >= -1e-14);
    }

    #[test]
    fn pt_of_singlet() {
        let rho = dm_from_pure(&singlet(), BipartiteDims::QUBITS).unwrap();
        let pt = partial_transpose(rho.matrix(), rho.dims(), Subsystem::B).unwrap();
        let e = sorted(sym_eigvals(&pt).unwrap());
        let want = [-0.5, 0.5, 0.5, 0.5];
        for (x, y) in e.iter().zip(&want) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn pt_involution() {
        let dims = BipartiteDims::new(3, 2).unwrap();
        let m = SquareMatrix::from_fn(6, |i, j| (i * 6 + j) as f64);
        for side in [Subsystem::A, Subsystem::B] {
            let twice = partial_transpose(&partial_transpose(&m, dims, side).unwrap(), dims, side).unwrap();
            assert_eq!(twice, m);
            assert_eq!(partial_transpose(&m, dims, side).unwrap().trace(), m.trace());
        }
        assert!(partial_transpose(&m, BipartiteDims::QUTRITS, Subsystem::A).is_err());
    }

    #[test]
    fn partial_trace_examples() {
        let ra = SquareMatrix::from_rows(&[&[0.7, 0.2], &[0.2, 0.3]]).unwrap();
        let rb = SquareMatrix::diag(&[0.5, 0.25, 0.25]);
        let dims = BipartiteDims::new(2, 3).unwrap();
        let rho = kron(&ra, &rb);
        let got = partial_trace(&rho, dims, Subsystem::B).unwrap();
        assert!(got.sub(&ra).max_abs() < 1e-15);
        let got = partial_trace(&rho, dims, Subsystem::A).unwrap();
        assert!(got.sub(&rb).max_abs() < 1e-15);

        let me = dm_from_pure(&max_entangled(3), BipartiteDims::QUTRITS).unwrap();
        let red = me.reduced(Subsystem::A);
        assert!(red.sub(&SquareMatrix::identity(3).scaled(1.0 / 3.0)).max_abs() < 1e-15);
        assert!((red.trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn max_entangled_examples() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v2 = max_entangled(2);
        for (x, y) in v2.iter().zip(&[h, 0.0, 0.0, h]) {
            assert!((x - y).abs() < 1e-15);
        }
        let v = max_entangled(3);
        let a = 1.0 / 3f64.sqrt();
        for (i, &x) in v.iter().enumerate() {
            assert_eq!(x, if [0, 4, 8].contains(&i) { a } else { 0.0 });
        }
        let red = dm_from_pure(&v, BipartiteDims::QUTRITS).unwrap().reduced(Subsystem::B);
        assert!((purity(&red) - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn singlet_and_pure_states() {
        let s = singlet();
        assert!((norm(&s) - 1.0).abs() < 1e-15);
        let rho = dm_from_pure(&s, BipartiteDims::QUBITS).unwrap();
        assert!((rho.matrix()[(1, 2)] + 0.5).abs() < 1e-15);
        assert!((rho.matrix()[(1, 1)] - 0.5).abs() < 1e-15);
        assert!((purity(rho.matrix()) - 1.0).abs() < 1e-14);

        let e0 = dm_from_pure(&[1.0, 0.0, 0.0, 0.0], BipartiteDims::QUBITS).unwrap();
        assert_eq!(e0.matrix(), &SquareMatrix::diag(&[1.0, 0.0, 0.0, 0.0]));

        assert!(matches!(
            dm_from_pure(&[1.0, 1.0, 0.0, 0.0], BipartiteDims::QUBITS),
            Err(Error::Unnormalized(_))
        ));
    }

    #[test]
    fn density_validation() {
        let dims = BipartiteDims::QUBITS;
        assert!(DensityMatrix::new(SquareMatrix::identity(4).scaled(0.25), dims).is_ok());
        assert!(DensityMatrix::new(SquareMatrix::identity(4), dims).is_err());
        assert!(DensityMatrix::new(SquareMatrix::diag(&[1.5, -0.5, 0.0, 0.0]), dims).is_err());
        assert!(DensityMatrix::new(SquareMatrix::identity(3).scaled(1.0 / 3.0), dims).is_err());
        assert!(BipartiteDims::new(1, 3).is_err());
    }
}
