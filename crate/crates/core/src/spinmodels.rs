//! Two-site Hamiltonians: the spin-1 bilinear-biquadratic chain in a
//! site-dependent z field, and the spin-½ anisotropic XY chain.
//!
//! Single-site basis for spin 1 is `|1⟩, |0⟩, |−1⟩` (indices 0, 1, 2), i.e.
//! `S_z = diag(1, 0, −1)`. Two-site states follow the row-major composite
//! convention of [`crate::qstate`].

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numkernel::{sym_eigvals, ComplexSquareMatrix, SquareMatrix};
use crate::qstate::kron;

/// Parameters of `H = J S₁·S₂ + K (S₁·S₂)² + B₁ S₁z + B₂ S₂z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QutritChainParams {
    pub j: f64,
    pub k: f64,
    pub b1: f64,
    pub b2: f64,
}

impl QutritChainParams {
    pub fn new(j: f64, k: f64, b1: f64, b2: f64) -> Self {
        Self { j, k, b1, b2 }
    }

    /// Field values swapped between the two sites.
    pub fn swapped(&self) -> Self {
        Self { b1: self.b2, b2: self.b1, ..*self }
    }

    /// Both fields reversed.
    pub fn flipped(&self) -> Self {
        Self { b1: -self.b1, b2: -self.b2, ..*self }
    }

    pub fn is_finite(&self) -> bool {
        [self.j, self.k, self.b1, self.b2].iter().all(|x| x.is_finite())
    }
}

/// Parameters of the two-qubit XY chain `J(S₁⁺S₂⁻ + h.c.) + Jγ(S₁⁺S₂⁺ + h.c.) + B(S₁z + S₂z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XYParams {
    pub j: f64,
    pub gamma: f64,
    pub b: f64,
}

/// Composite indices of the product states that appear in the closed-form
/// eigenvectors, for basis labels `1 → 0`, `0 → 1`, `−1 → 2`.
pub mod basis {
    pub const P1_P1: usize = 0;
    pub const P1_Z: usize = 1;
    pub const P1_M1: usize = 2;
    pub const Z_P1: usize = 3;
    pub const Z_Z: usize = 4;
    pub const Z_M1: usize = 5;
    pub const M1_P1: usize = 6;
    pub const M1_Z: usize = 7;
    pub const M1_M1: usize = 8;

    /// Total-`S_z = 0` sector, in the order used by [`super::central_block`].
    pub const CENTRAL: [usize; 3] = [Z_Z, P1_M1, M1_P1];
}

/// Spin-1 `S_y` as printed, `(1/√2)[[0,−i,0],[i,0,−i],[0,i,0]]`.
pub fn spin1_sy() -> ComplexSquareMatrix {
    let a = std::f64::consts::FRAC_1_SQRT_2;
    let mut sy = ComplexSquareMatrix::zeros(3);
    sy[(0, 1)] = Complex64::new(0.0, -a);
    sy[(1, 0)] = Complex64::new(0.0, a);
    sy[(1, 2)] = Complex64::new(0.0, -a);
    sy[(2, 1)] = Complex64::new(0.0, a);
    sy
}

/// Single-site spin-1 operators.
#[derive(Debug, Clone)]
pub struct Spin1Operators {
    pub sx: SquareMatrix,
    /// `S_y ⊗ S_y`, which is real although `S_y` is not.
    pub sysy: SquareMatrix,
    pub sz: SquareMatrix,
}

/// `S_x`, `S_y ⊗ S_y` and `S_z`. The two-site `S_y` product is formed in
/// complex arithmetic and its imaginary residue checked before discarding.
pub fn spin1_operators() -> Result<Spin1Operators> {
    let a = std::f64::consts::FRAC_1_SQRT_2;
    let sx = SquareMatrix::from_rows(&[&[0.0, a, 0.0], &[a, 0.0, a], &[0.0, a, 0.0]])?;
    let sz = SquareMatrix::diag(&[1.0, 0.0, -1.0]);
    let sy = spin1_sy();
    let sysy_c = sy.kron(&sy);
    let residue = sysy_c.max_imag();
    if residue >= 1e-15 {
        return Err(Error::Consistency(format!("Sy⊗Sy imaginary residue {residue:e}")));
    }
    Ok(Spin1Operators {
        sx,
        sysy: sysy_c.real_part(),
        sz,
    })
}

/// `S₁·S₂ = Sx⊗Sx + Sy⊗Sy + Sz⊗Sz` on the two-qutrit space.
pub fn spin_dot() -> SquareMatrix {
    let ops = spin1_operators().expect("spin-1 operators are consistent");
    let mut d = kron(&ops.sx, &ops.sx);
    d.add_scaled(1.0, &ops.sysy);
    d.add_scaled(1.0, &kron(&ops.sz, &ops.sz));
    d
}

/// The 9×9 two-qutrit Hamiltonian.
pub fn hamiltonian_qutrit(p: &QutritChainParams) -> SquareMatrix {
    let ops = spin1_operators().expect("spin-1 operators are consistent");
    let d = spin_dot();
    let id3 = SquareMatrix::identity(3);

    let mut h = d.scaled(p.j);
    h.add_scaled(p.k, &d.matmul(&d));
    h.add_scaled(p.b1, &kron(&ops.sz, &id3));
    h.add_scaled(p.b2, &kron(&id3, &ops.sz));
    h
}

/// The six eigenvalues available in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormEnergies {
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    pub e7: f64,
    pub e8: f64,
    pub e9: f64,
}

impl ClosedFormEnergies {
    pub fn as_array(&self) -> [f64; 6] {
        [self.e1, self.e2, self.e3, self.e7, self.e8, self.e9]
    }
}

fn split(p: &QutritChainParams) -> f64 {
    ((p.b1 - p.b2).powi(2) + 4.0 * p.j * p.j).sqrt()
}

pub fn closed_form_energies(p: &QutritChainParams) -> ClosedFormEnergies {
    let r = split(p);
    let sum = p.b1 + p.b2;
    ClosedFormEnergies {
        e1: p.j + sum + p.k,
        e2: 0.5 * (sum + 2.0 * p.k) + 0.5 * r,
        e3: 0.5 * (sum + 2.0 * p.k) - 0.5 * r,
        e7: -0.5 * (sum - 2.0 * p.k) + 0.5 * r,
        e8: -0.5 * (sum - 2.0 * p.k) - 0.5 * r,
        e9: p.j - sum + p.k,
    }
}

/// Closed-form eigenvectors paired with [`ClosedFormEnergies`].
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormVectors {
    pub phi1: Vec<f64>,
    pub phi2: Vec<f64>,
    pub phi3: Vec<f64>,
    pub phi7: Vec<f64>,
    pub phi8: Vec<f64>,
    pub phi9: Vec<f64>,
}

impl ClosedFormVectors {
    pub fn as_array(&self) -> [&Vec<f64>; 6] {
        [&self.phi1, &self.phi2, &self.phi3, &self.phi7, &self.phi8, &self.phi9]
    }
}

fn unit(index: usize) -> Vec<f64> {
    let mut v = vec![0.0; 9];
    v[index] = 1.0;
    v
}

pub fn closed_form_vectors(p: &QutritChainParams) -> Result<ClosedFormVectors> {
    use basis::*;
    let r = split(p);
    let a = p.b1 - p.b2 + r;
    let b = 2.0 * p.j;
    let f = p.b2 - p.b1 + r;
    let g = b;

    let nab = (a * a + b * b).sqrt();
    if nab == 0.0 {
        return Err(Error::DegenerateParameters("a² + b² vanishes (J = 0, B₁ ≤ B₂)"));
    }
    let nfg = (f * f + g * g).sqrt();
    if nfg == 0.0 {
        return Err(Error::DegenerateParameters("f² + g² vanishes (J = 0, B₂ ≤ B₁)"));
    }

    let mut phi2 = vec![0.0; 9];
    phi2[P1_Z] = a / nab;
    phi2[Z_P1] = b / nab;
    let mut phi3 = vec![0.0; 9];
    phi3[P1_Z] = b / nab;
    phi3[Z_P1] = -a / nab;

    let mut phi7 = vec![0.0; 9];
    phi7[M1_Z] = f / nfg;
    phi7[Z_M1] = g / nfg;
    let mut phi8 = vec![0.0; 9];
    phi8[M1_Z] = g / nfg;
    phi8[Z_M1] = -f / nfg;

    Ok(ClosedFormVectors {
        phi1: unit(P1_P1),
        phi2,
        phi3,
        phi7,
        phi8,
        phi9: unit(M1_M1),
    })
}

/// `H` restricted to `span{|00⟩, |1,−1⟩, |−1,1⟩}`, whose eigenvalues are the
/// three levels with no closed form.
pub fn central_block(p: &QutritChainParams) -> SquareMatrix {
    let h = hamiltonian_qutrit(p);
    SquareMatrix::from_fn(3, |i, j| h[(basis::CENTRAL[i], basis::CENTRAL[j])])
}

/// Largest matrix element of `H` coupling the central sector to its complement.
pub fn central_block_leakage(p: &QutritChainParams) -> f64 {
    let h = hamiltonian_qutrit(p);
    let mut worst = 0.0f64;
    for &i in &basis::CENTRAL {
        for j in (0..9).filter(|j| !basis::CENTRAL.contains(j)) {
            worst = worst.max(h[(i, j)].abs()).max(h[(j, i)].abs());
        }
    }
    worst
}

/// Eigenvalues of the central block, ascending.
pub fn central_energies(p: &QutritChainParams) -> [f64; 3] {
    let v = sym_eigvals(&central_block(p)).expect("central block is symmetric");
    [v[0], v[1], v[2]]
}

/// The 4×4 XY Hamiltonian in the basis `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩`.
pub fn hamiltonian_xy(p: &XYParams) -> SquareMatrix {
    // spin-½ ladder operators: S⁺ = |↑⟩⟨↓| with ↑ ↦ 0
    let sp = SquareMatrix::from_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).expect("2x2");
    let sm = sp.transpose();
    let sz = SquareMatrix::diag(&[0.5, -0.5]);
    let id2 = SquareMatrix::identity(2);

    let mut h = kron(&sp, &sm).add(&kron(&sm, &sp)).scaled(p.j);
    h.add_scaled(p.j * p.gamma, &kron(&sp, &sp).add(&kron(&sm, &sm)));
    h.add_scaled(p.b, &kron(&sz, &id2).add(&kron(&id2, &sz)));
    h
}

/// `E₁ = J, E₂ = −J, E₃ = √(B² + (Jγ)²), E₄ = −E₃`
pub fn xy_energies(p: &XYParams) -> [f64; 4] {
    let r = (p.b * p.b + (p.j * p.gamma).powi(2)).sqrt();
    [p.j, -p.j, r, -r]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{cmatmul, sym_eig};

    fn params() -> QutritChainParams {
        QutritChainParams::new(-1.0, -1.7, 1.3, -1.3)
    }

    fn residual(h: &SquareMatrix, v: &[f64], e: f64) -> f64 {
        h.matvec(v).iter().zip(v).map(|(x, y)| (x - e * y).powi(2)).sum::<f64>().sqrt()
    }

    #[test]
    fn spin1_matrices() {
        let ops = spin1_operators().unwrap();
        assert_eq!(ops.sz, SquareMatrix::diag(&[1.0, 0.0, -1.0]));
        assert_eq!(ops.sysy.trace(), 0.0);

        let sy = spin1_sy();
        let sy2 = cmatmul(&sy, &sy).unwrap();
        assert!(sy2.max_imag() < 1e-16);
        let casimir = ops.sx.matmul(&ops.sx).add(&sy2.real_part()).add(&ops.sz.matmul(&ops.sz));
        assert!(casimir.sub(&SquareMatrix::identity(3).scaled(2.0)).max_abs() < 1e-15);
    }

    #[test]
    fn spin_dot_spectrum() {
        // total spin 2, 1, 0 → S₁·S₂ = 1 (×5), −1 (×3), −2 (×1)
        let e = sym_eigvals(&spin_dot()).unwrap();
        let want = [-2.0, -1.0, -1.0, -1.0, 1.0, 1.0, 1.0, 1.0, 1.0];
        for (x, y) in e.iter().zip(&want) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn trace_is_twelve_k() {
        for &(j, k, b1, b2) in &[(-1.0, -1.7, 1.3, -1.3), (0.4, 2.5, -3.0, 0.2), (1.0, 0.0, 0.0, 0.0)] {
            let h = hamiltonian_qutrit(&QutritChainParams::new(j, k, b1, b2));
            assert!((h.trace() - 12.0 * k).abs() < 1e-12);
            assert!(h.asymmetry() == 0.0);
        }
    }

    #[test]
    fn top_state_is_eigenvector() {
        let p = QutritChainParams::new(0.3, -0.8, 0.9, 2.1);
        let h = hamiltonian_qutrit(&p);
        let e1 = p.j + p.b1 + p.b2 + p.k;
        assert!((h[(0, 0)] - e1).abs() < 1e-14);
        assert!(residual(&h, &unit(0), e1) < 1e-14);
    }

    #[test]
    fn field_only_is_diagonal() {
        let (b, c) = (0.7, -1.9);
        let h = hamiltonian_qutrit(&QutritChainParams::new(0.0, 0.0, b, c));
        let m = [1.0, 0.0, -1.0];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        let want = if i == k && j == l { b * m[i] + c * m[j] } else { 0.0 };
                        assert!((h[(i * 3 + j, k * 3 + l)] - want).abs() < 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn closed_form_energy_substitution() {
        let e = closed_form_energies(&params());
        assert!((e.e1 + 2.7).abs() < 1e-14);
        assert!((e.e9 + 2.7).abs() < 1e-14);
        assert!((e.e2 - (-1.7 + 0.5 * 10.76f64.sqrt())).abs() < 1e-14);
        assert!((e.e3 - (-1.7 - 0.5 * 10.76f64.sqrt())).abs() < 1e-14);
        let gap = ((params().b1 - params().b2).powi(2) + 4.0).sqrt();
        assert!((e.e2 - e.e3 - gap).abs() < 1e-14);
        assert!((e.e7 - e.e8 - gap).abs() < 1e-14);
    }

    #[test]
    fn closed_form_vectors_are_eigenvectors() {
        for p in [params(), QutritChainParams::new(2.0, 0.5, -0.3, 1.1), QutritChainParams::new(-1.0, -1.0, 0.7, 0.7)] {
            let h = hamiltonian_qutrit(&p);
            let e = closed_form_energies(&p).as_array();
            let v = closed_form_vectors(&p).unwrap();
            for (vec, en) in v.as_array().iter().zip(e) {
                assert!(residual(&h, vec, en) <= 1e-10, "{p:?}");
            }
            let dot: f64 = v.phi2.iter().zip(&v.phi3).map(|(x, y)| x * y).sum();
            assert_eq!(dot, 0.0);
        }
    }

    #[test]
    fn closed_form_vectors_basis_states() {
        let v = closed_form_vectors(&params()).unwrap();
        assert_eq!(v.phi1, unit(0));
        assert_eq!(v.phi9, unit(8));
    }

    #[test]
    fn symmetric_field_limit() {
        let p = QutritChainParams::new(-1.0, -1.7, 0.4, 0.4);
        let v = closed_form_vectors(&p).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // a = |2J|, b = 2J < 0
        assert!((v.phi2[basis::P1_Z] - h).abs() < 1e-15 && (v.phi2[basis::Z_P1] + h).abs() < 1e-15);
        assert!((v.phi3[basis::P1_Z] + h).abs() < 1e-15 && (v.phi3[basis::Z_P1] + h).abs() < 1e-15);
    }

    #[test]
    fn degenerate_normalizer() {
        let p = QutritChainParams::new(0.0, 1.0, 0.5, 0.5);
        assert!(matches!(closed_form_vectors(&p), Err(Error::DegenerateParameters(_))));
    }

    #[test]
    fn central_block_completes_spectrum() {
        for p in [params(), QutritChainParams::new(-1.0, 0.0, 0.0, 0.0), QutritChainParams::new(0.6, -2.0, 3.0, -0.4)] {
            assert!(central_block_leakage(&p) < 1e-14);
            let mut all: Vec<f64> = closed_form_energies(&p).as_array().to_vec();
            all.extend(central_energies(&p));
            all.sort_by(f64::total_cmp);
            let full = sym_eigvals(&hamiltonian_qutrit(&p)).unwrap();
            for (x, y) in all.iter().zip(&full) {
                assert!((x - y).abs() < 1e-10, "{p:?}");
            }
        }
    }

    #[test]
    fn xy_spectrum() {
        for p in [XYParams { j: 1.0, gamma: 0.8, b: 0.3 }, XYParams { j: -0.7, gamma: 0.2, b: -1.5 }] {
            let mut want = xy_energies(&p).to_vec();
            want.sort_by(f64::total_cmp);
            let got = sym_eigvals(&hamiltonian_xy(&p)).unwrap();
            for (x, y) in got.iter().zip(&want) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn xy_crossing() {
        let e = xy_energies(&XYParams { j: 1.0, gamma: 0.8, b: 0.6 });
        assert!((e[1] - e[3]).abs() < 1e-12);
    }

    #[test]
    fn xx_singlet_eigenvector() {
        let p = XYParams { j: 1.0, gamma: 0.0, b: 0.4 };
        let s = sym_eig(&hamiltonian_xy(&p)).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let singlet = [0.0, h, -h, 0.0];
        assert!(residual(&hamiltonian_xy(&p), &singlet, -1.0) < 1e-15);
        assert!(s.values.iter().any(|&e| (e + 1.0).abs() < 1e-12));
    }
}
