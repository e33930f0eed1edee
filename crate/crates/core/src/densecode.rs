//! Dense coding over a shared bipartite state.
//!
//! Alice encodes `(x, y)` by applying `U_{x,y} ⊗ I` to her half and sends it;
//! Bob's accessible information is bounded by the Holevo quantity of the
//! resulting ensemble.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numkernel::{cmatmul, ComplexSquareMatrix, SquareMatrix};
use crate::qstate::{self, DensityMatrix, Subsystem};
use crate::thermal::{entropy_of, vn_entropy};

/// Which party sends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Party 1 encodes, party 2 decodes; usefulness uses `S(ρ₂)`.
    OneToTwo,
    TwoToOne,
}

/// `U_{x,y} = Σ_j e^{2πi jx/d} |j+y mod d⟩⟨j|`, returned at index `x·d + y`.
pub fn heisenberg_weyl(d: usize) -> Vec<ComplexSquareMatrix> {
    assert!(d >= 2, "dimension must be at least 2");
    let mut out = Vec::with_capacity(d * d);
    for x in 0..d {
        for y in 0..d {
            let mut u = ComplexSquareMatrix::zeros(d);
            for j in 0..d {
                let phase = 2.0 * std::f64::consts::PI * ((j * x) % d) as f64 / d as f64;
                u[((j + y) % d, j)] = Complex64::from_polar(1.0, phase);
            }
            out.push(u);
        }
    }
    out
}

/// Weighted family of states on a common space.
#[derive(Debug, Clone)]
pub struct Ensemble {
    members: Vec<(f64, DensityMatrix)>,
}

impl Ensemble {
    pub fn new(members: Vec<(f64, DensityMatrix)>) -> Result<Self> {
        let Some((_, first)) = members.first() else {
            return Err(Error::BadDistribution(0.0));
        };
        let dims = first.dims();
        for (p, rho) in &members {
            if rho.dims() != dims {
                return Err(Error::DimensionMismatch {
                    expected: dims.total(),
                    got: rho.dims().total(),
                });
            }
            if !(*p >= 0.0) {
                return Err(Error::BadDistribution(*p));
            }
        }
        let sum: f64 = members.iter().map(|(p, _)| p).sum();
        if (sum - 1.0).abs() > 1e-10 {
            return Err(Error::BadDistribution(sum));
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[(f64, DensityMatrix)] {
        &self.members
    }

    /// `ρ̄ = Σ p_i ρ_i`
    pub fn average(&self) -> SquareMatrix {
        let n = self.members[0].1.matrix().dim();
        let mut acc = SquareMatrix::zeros(n);
        for (p, rho) in &self.members {
            acc.add_scaled(*p, rho.matrix());
        }
        acc
    }
}

/// `χ = S(ρ̄) − Σ p_i S(ρ_i)`
pub fn holevo_chi(e: &Ensemble) -> Result<f64> {
    let mut mixed = 0.0;
    for (p, rho) in e.members() {
        if *p > 0.0 {
            mixed += p * vn_entropy(rho)?;
        }
    }
    Ok(entropy_of(&e.average())? - mixed)
}

/// `(1/|U|) Σ (U ⊗ I) ρ (U ⊗ I)†` with the unitaries acting on subsystem A.
pub fn average_state(rho: &DensityMatrix, unitaries: &[ComplexSquareMatrix]) -> Result<ComplexSquareMatrix> {
    let dims = rho.dims();
    if unitaries.is_empty() {
        return Err(Error::Config("empty unitary family".into()));
    }
    let r = ComplexSquareMatrix::from_real(rho.matrix());
    let id_b = ComplexSquareMatrix::identity(dims.db);
    let mut acc = ComplexSquareMatrix::zeros(dims.total());
    for u in unitaries {
        if u.dim() != dims.da {
            return Err(Error::DimensionMismatch {
                expected: dims.da,
                got: u.dim(),
            });
        }
        let big = u.kron(&id_b);
        let conj = cmatmul(&cmatmul(&big, &r)?, &big.dagger())?;
        acc = acc.add(&conj);
    }
    Ok(acc.scaled(Complex64::new(1.0 / unitaries.len() as f64, 0.0)))
}

fn require_equal_locals(rho: &DensityMatrix) -> Result<usize> {
    let dims = rho.dims();
    if dims.da != dims.db {
        return Err(Error::DimensionMismatch {
            expected: dims.da,
            got: dims.db,
        });
    }
    Ok(dims.da)
}

/// Holevo quantity of the uniform Heisenberg–Weyl ensemble, computed from
/// the averaged state directly. Every member has entropy `S(ρ)`.
pub fn dense_coding_chi(rho: &DensityMatrix) -> Result<f64> {
    let d = require_equal_locals(rho)?;
    let avg = average_state(rho, &heisenberg_weyl(d))?;
    let im = avg.max_imag();
    if im > 1e-12 {
        return Err(Error::Consistency(format!("averaged state has imaginary part {im:e}")));
    }
    let re = avg.real_part();
    let re = SquareMatrix::from_fn(re.dim(), |i, j| 0.5 * (re[(i, j)] + re[(j, i)]));
    Ok(entropy_of(&re)? - vn_entropy(rho)?)
}

/// `C_DC = log₂ d + S(ρ_B) − S(ρ_AB)`, the optimal capacity when A sends.
pub fn cdc(rho: &DensityMatrix) -> Result<f64> {
    let d = require_equal_locals(rho)?;
    let sb = entropy_of(&rho.reduced(Subsystem::B))?;
    let s = vn_entropy(rho)?;
    Ok(((d as f64).log2() + sb - s).max(0.0))
}

/// `max(S(ρ_receiver) − S(ρ), 0)`
pub fn udc(rho: &DensityMatrix, direction: Direction) -> Result<f64> {
    let keep = match direction {
        Direction::OneToTwo => Subsystem::B,
        Direction::TwoToOne => Subsystem::A,
    };
    let sr = entropy_of(&rho.reduced(keep))?;
    Ok((sr - vn_entropy(rho)?).max(0.0))
}

/// `(U ⊗ I) ρ (U ⊗ I)†` for a real state; errors if the result is not real.
pub fn encode_real(rho: &DensityMatrix, u: &ComplexSquareMatrix) -> Result<DensityMatrix> {
    let avg = average_state(rho, std::slice::from_ref(u))?;
    let im = avg.max_imag();
    if im > 1e-12 {
        return Err(Error::Consistency(format!("encoded state is complex ({im:e})")));
    }
    DensityMatrix::new(symmetrize(&avg.real_part()), rho.dims())
}

fn symmetrize(m: &SquareMatrix) -> SquareMatrix {
    SquareMatrix::from_fn(m.dim(), |i, j| 0.5 * (m[(i, j)] + m[(j, i)]))
}

/// `I_A/d_A ⊗ Tr_A ρ`
pub fn locally_scrambled(rho: &DensityMatrix) -> SquareMatrix {
    let dims = rho.dims();
    let ia = SquareMatrix::identity(dims.da).scaled(1.0 / dims.da as f64);
    qstate::kron(&ia, &rho.reduced(Subsystem::B))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{dm_from_pure, kron_vec, max_entangled, singlet, BipartiteDims};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: &ComplexSquareMatrix, b: &ComplexSquareMatrix, tol: f64) -> bool {
        a.sub(b).norm() < tol
    }

    fn random_state(rng: &mut ChaCha8Rng, dims: BipartiteDims) -> DensityMatrix {
        let n = dims.total();
        let a = SquareMatrix::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
        let g = a.matmul(&a.transpose());
        let t = g.trace();
        DensityMatrix::new(symmetrize(&g.scaled(1.0 / t)), dims).unwrap()
    }

    #[test]
    fn hw_qubit_is_pauli_family() {
        let u = heisenberg_weyl(2);
        let o = c(0.0, 0.0);
        let l = c(1.0, 0.0);
        let sx = ComplexSquareMatrix::from_fn(2, |i, j| if i != j { l } else { o });
        let sz = ComplexSquareMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 0) => l,
            (1, 1) => -l,
            _ => o,
        });
        let sy = ComplexSquareMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 1) => c(0.0, -1.0),
            (1, 0) => c(0.0, 1.0),
            _ => o,
        });
        assert!(close(&u[0], &ComplexSquareMatrix::identity(2), 1e-15));
        assert!(close(&u[1], &sx, 1e-15));
        assert!(close(&u[2], &sz, 1e-15));
        assert!(close(&u[3], &sy.scaled(c(0.0, -1.0)), 1e-15));
    }

    #[test]
    fn hw_qutrit_shift() {
        let u = &heisenberg_weyl(3)[1];
        for j in 0..3 {
            for i in 0..3 {
                let want = if i == (j + 1) % 3 { 1.0 } else { 0.0 };
                assert!((u[(i, j)] - c(want, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn hw_unitary_and_orthogonal() {
        for d in 2..=5 {
            let us = heisenberg_weyl(d);
            assert_eq!(us.len(), d * d);
            for (a, ua) in us.iter().enumerate() {
                assert!(ua.is_unitary());
                for (b, ub) in us.iter().enumerate() {
                    let tr = cmatmul(&ua.dagger(), ub).unwrap().trace();
                    let want = if a == b { d as f64 } else { 0.0 };
                    assert!((tr - c(want, 0.0)).norm() < 1e-12, "d={d} a={a} b={b} tr={tr}");
                }
            }
        }
    }

    #[test]
    fn chi_examples() {
        let dims = BipartiteDims::QUBITS;
        let rho = dm_from_pure(&singlet(), dims).unwrap();
        let one = Ensemble::new(vec![(1.0, rho.clone())]).unwrap();
        assert!(holevo_chi(&one).unwrap().abs() < 1e-12);
        let same = Ensemble::new(vec![(0.3, rho.clone()), (0.7, rho.clone())]).unwrap();
        assert!(holevo_chi(&same).unwrap().abs() < 1e-12);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bells = [[h, 0.0, 0.0, h], [h, 0.0, 0.0, -h], [0.0, h, h, 0.0], [0.0, h, -h, 0.0]];
        let members = bells.iter().map(|v| (0.25, dm_from_pure(v, dims).unwrap())).collect();
        let e = Ensemble::new(members).unwrap();
        assert!((holevo_chi(&e).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn ensemble_rejects() {
        let rho = DensityMatrix::maximally_mixed(BipartiteDims::QUBITS);
        assert!(matches!(Ensemble::new(vec![(0.5, rho.clone())]), Err(Error::BadDistribution(_))));
        assert!(Ensemble::new(vec![(1.2, rho.clone()), (-0.2, rho.clone())]).is_err());
        let other = DensityMatrix::maximally_mixed(BipartiteDims::QUTRITS);
        assert!(matches!(
            Ensemble::new(vec![(0.5, rho), (0.5, other)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn averaging_identity() {
        let dims = BipartiteDims::QUTRITS;
        let mixed = DensityMatrix::maximally_mixed(dims);
        let avg = average_state(&mixed, &heisenberg_weyl(3)).unwrap();
        assert!(close(&avg, &ComplexSquareMatrix::from_real(mixed.matrix()), 1e-14));

        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let rho = random_state(&mut rng, dims);
            let avg = average_state(&rho, &heisenberg_weyl(3)).unwrap();
            let want = ComplexSquareMatrix::from_real(&locally_scrambled(&rho));
            assert!(close(&avg, &want, 1e-12));
        }

        let s = dm_from_pure(&singlet(), BipartiteDims::QUBITS).unwrap();
        let avg = average_state(&s, &heisenberg_weyl(2)).unwrap();
        assert!(close(&avg, &ComplexSquareMatrix::identity(4).scaled(c(0.25, 0.0)), 1e-14));
    }

    #[test]
    fn average_rejects_wrong_dimension() {
        let rho = DensityMatrix::maximally_mixed(BipartiteDims::QUTRITS);
        assert!(matches!(
            average_state(&rho, &heisenberg_weyl(2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn cdc_landmarks() {
        let l3 = 3f64.log2();
        let q = BipartiteDims::QUTRITS;
        let prod = dm_from_pure(&kron_vec(&[0.6, 0.8, 0.0], &[0.0, 0.0, 1.0]), q).unwrap();
        assert!((cdc(&prod).unwrap() - l3).abs() < 1e-6);
        let me = dm_from_pure(&max_entangled(3), q).unwrap();
        assert!((cdc(&me).unwrap() - 2.0 * l3).abs() < 1e-6);
        let s = dm_from_pure(&singlet(), BipartiteDims::QUBITS).unwrap();
        assert!((cdc(&s).unwrap() - 2.0).abs() < 1e-12);
        assert!(cdc(&DensityMatrix::maximally_mixed(q)).unwrap().abs() < 1e-12);
    }

    #[test]
    fn cdc_requires_equal_locals() {
        let rho = DensityMatrix::maximally_mixed(BipartiteDims::new(2, 3).unwrap());
        assert!(matches!(cdc(&rho), Err(Error::DimensionMismatch { .. })));
        assert!(udc(&rho, Direction::OneToTwo).unwrap().abs() < 1e-12);
    }

    #[test]
    fn cdc_matches_chi() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for dims in [BipartiteDims::QUBITS, BipartiteDims::QUTRITS] {
            for _ in 0..20 {
                let rho = random_state(&mut rng, dims);
                let a = cdc(&rho).unwrap();
                let b = dense_coding_chi(&rho).unwrap();
                assert!((a - b).abs() < 1e-10, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn chi_of_real_encodings_matches_cdc() {
        // the qubit family is real, so every encoded state is real
        let s = dm_from_pure(&singlet(), BipartiteDims::QUBITS).unwrap();
        let us = heisenberg_weyl(2);
        let members = us.iter().map(|u| (0.25, encode_real(&s, u).unwrap())).collect();
        let chi = holevo_chi(&Ensemble::new(members).unwrap()).unwrap();
        assert!((chi - cdc(&s).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn udc_examples() {
        let l3 = 3f64.log2();
        let q = BipartiteDims::QUTRITS;
        let me = dm_from_pure(&max_entangled(3), q).unwrap();
        for dir in [Direction::OneToTwo, Direction::TwoToOne] {
            assert!((udc(&me, dir).unwrap() - l3).abs() < 1e-6);
        }
        let a = SquareMatrix::diag(&[0.5, 0.3, 0.2]);
        let b = SquareMatrix::diag(&[0.9, 0.1, 0.0]);
        let prod = DensityMatrix::new(qstate::kron(&a, &b), q).unwrap();
        for dir in [Direction::OneToTwo, Direction::TwoToOne] {
            assert_eq!(udc(&prod, dir).unwrap(), 0.0);
        }
    }
}
