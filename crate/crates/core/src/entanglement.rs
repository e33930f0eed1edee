//! Entanglement measures and I-concurrence bounds.
//!
//! * [`negativity`]: sum of the negative eigenvalues of the partial transpose.
//! * [`wootters_concurrence`]: two-qubit concurrence.
//! * [`iconcurrence_pure`]: I-concurrence `√(2[1 − Tr ρ_A²])` of a pure state.
//! * [`chen_lower_bound`]: negativity rescaled by `√(8/(m(m−1)))`.
//! * [`alb`]: best single-`κ` bound from the τ-matrix construction over the
//!   antisymmetric basis [`AntisymBasis`].
//! * [`ub_mixture`]: `Σ λ_j C(|Φ_j⟩)` over an eigen-decomposition, an upper
//!   bound on the mixed-state I-concurrence.

use crate::densecode::{cdc, udc, Direction};
use crate::error::{Error, Result};
use crate::numkernel::{singular_values, sym_eig, sym_eigvals, Spectrum, SquareMatrix};
use crate::qstate::{check_normalized, partial_transpose, BipartiteDims, DensityMatrix, Subsystem};
use crate::thermal::{self, GibbsState};

/// Eigenvalues of `ρ` below this are dropped before building τ-matrices.
pub const RANK_CUTOFF: f64 = 1e-14;

/// `Σ |min(μ_i, 0)|` over the eigenvalues of `ρ^{T_B}`.
pub fn negativity(rho: &DensityMatrix) -> f64 {
    negativity_on(rho, Subsystem::B)
}

/// Negativity with the partial transpose taken on `side`.
pub fn negativity_on(rho: &DensityMatrix, side: Subsystem) -> f64 {
    let pt = partial_transpose(rho.matrix(), rho.dims(), side).expect("dims validated at construction");
    sym_eigvals(&pt)
        .expect("partial transpose of a symmetric matrix is symmetric")
        .into_iter()
        .filter(|&x| x < 0.0)
        .map(|x| -x)
        .sum()
}

/// `σ_y ⊗ σ_y`, which is real.
fn sigma_yy() -> SquareMatrix {
    let mut s = SquareMatrix::zeros(4);
    s[(0, 3)] = -1.0;
    s[(3, 0)] = -1.0;
    s[(1, 2)] = 1.0;
    s[(2, 1)] = 1.0;
    s
}

/// Spectral square root with negative eigenvalues clamped to zero.
fn sqrt_psd(m: &SquareMatrix) -> Result<SquareMatrix> {
    let s = sym_eig(m)?;
    let r = s.compose(|x| x.max(0.0).sqrt());
    Ok(SquareMatrix::from_fn(r.dim(), |i, j| 0.5 * (r[(i, j)] + r[(j, i)])))
}

/// Two-qubit concurrence `max{Λ₁ − Λ₂ − Λ₃ − Λ₄, 0}` for a real `ρ`.
///
/// The `Λ_j` are taken from the symmetric matrix `√ρ S ρ S √ρ`
/// (`S = σ_y⊗σ_y`), which is similar to `ρ S ρ* S`.
pub fn wootters_concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.dims() != BipartiteDims::QUBITS {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: rho.dims().total(),
        });
    }
    let sq = sqrt_psd(rho.matrix())?;
    let s = sigma_yy();
    let m = sq.matmul(&s).matmul(rho.matrix()).matmul(&s).matmul(&sq);
    let m = SquareMatrix::from_fn(4, |i, j| 0.5 * (m[(i, j)] + m[(j, i)]));
    let mut lambda: Vec<f64> = sym_eigvals(&m)?.into_iter().map(|x| x.max(0.0).sqrt()).collect();
    lambda.sort_by(|a, b| b.total_cmp(a));
    Ok((lambda[0] - lambda[1..].iter().sum::<f64>()).max(0.0))
}

/// Reduced state `ρ_A = M Mᵀ` of a pure state with amplitudes `M[i][k]`.
fn reduced_a(v: &[f64], dims: BipartiteDims) -> SquareMatrix {
    SquareMatrix::from_fn(dims.da, |i, j| (0..dims.db).map(|k| v[dims.index(i, k)] * v[dims.index(j, k)]).sum())
}

/// I-concurrence of a pure state, `√(2[1 − Tr ρ_A²])`.
pub fn iconcurrence_pure(v: &[f64], dims: BipartiteDims) -> Result<f64> {
    if v.len() != dims.total() {
        return Err(Error::DimensionMismatch {
            expected: dims.total(),
            got: v.len(),
        });
    }
    check_normalized(v)?;
    Ok(iconcurrence_unchecked(v, dims))
}

/// `1 − Tr ρ_A²` summed as principal 2×2 minors of `ρ_A`, which stays
/// accurate near product states.
fn iconcurrence_unchecked(v: &[f64], dims: BipartiteDims) -> f64 {
    let r = reduced_a(v, dims);
    let mut minors = 0.0;
    for i in 0..r.dim() {
        for j in (i + 1)..r.dim() {
            minors += r[(i, i)] * r[(j, j)] - r[(i, j)] * r[(j, i)];
        }
    }
    (4.0 * minors).max(0.0).sqrt()
}

/// `√(8/(m(m−1)))`, `m = min(d_A, d_B)`.
pub fn chen_factor(dims: BipartiteDims) -> f64 {
    let m = dims.min_local() as f64;
    (8.0 / (m * (m - 1.0))).sqrt()
}

/// `C(ρ) ≥ √(8/(m(m−1))) N(ρ)`
pub fn chen_lower_bound(rho: &DensityMatrix) -> f64 {
    chen_factor(rho.dims()) * negativity(rho)
}

/// One nonzero entry of `χ_α`: amplitude `coef` on `|first⟩|second⟩` of the
/// doubled space `(H_A⊗H_B)⊗(H_A⊗H_B)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiTerm {
    pub first: usize,
    pub second: usize,
    pub coef: f64,
}

/// Basis `χ_α = t_{m_A} ⊗ t_{m_B}` of the doubly antisymmetric subspace,
/// `t = |j⟩|k⟩ − |k⟩|j⟩` (unnormalized, `j < k`), ordered by `(m_A, m_B)`.
#[derive(Debug, Clone)]
pub struct AntisymBasis {
    dims: BipartiteDims,
    terms: Vec<[ChiTerm; 4]>,
}

impl AntisymBasis {
    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    /// `n = d_A(d_A−1)d_B(d_B−1)/4`
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self, alpha: usize) -> &[ChiTerm; 4] {
        &self.terms[alpha]
    }

    /// Dense `χ_α` of length `(d_A d_B)²`, composite index `first·d_A d_B + second`.
    pub fn vector(&self, alpha: usize) -> Vec<f64> {
        let d = self.dims.total();
        let mut v = vec![0.0; d * d];
        for t in &self.terms[alpha] {
            v[t.first * d + t.second] += t.coef;
        }
        v
    }

    /// `⟨χ_α| (|u⟩ ⊗ |w⟩)`
    pub fn overlap(&self, alpha: usize, u: &[f64], w: &[f64]) -> f64 {
        self.terms[alpha].iter().map(|t| t.coef * u[t.first] * w[t.second]).sum()
    }
}

fn antisym_pairs(d: usize) -> Vec<(usize, usize)> {
    (0..d).flat_map(|j| ((j + 1)..d).map(move |k| (j, k))).collect()
}

pub fn build_antisym_basis(dims: BipartiteDims) -> AntisymBasis {
    let pa = antisym_pairs(dims.da);
    let pb = antisym_pairs(dims.db);
    let mut terms = Vec::with_capacity(pa.len() * pb.len());
    for &(ja, ka) in &pa {
        for &(jb, kb) in &pb {
            // t_A(a1,a2) t_B(b1,b2) placed on |a1 b1⟩|a2 b2⟩
            let entry = |a1: usize, a2: usize, b1: usize, b2: usize, coef: f64| ChiTerm {
                first: dims.index(a1, b1),
                second: dims.index(a2, b2),
                coef,
            };
            terms.push([
                entry(ja, ka, jb, kb, 1.0),
                entry(ja, ka, kb, jb, -1.0),
                entry(ka, ja, jb, kb, -1.0),
                entry(ka, ja, kb, jb, 1.0),
            ]);
        }
    }
    AntisymBasis { dims, terms }
}

/// `T^α_{jk} = √(λ_j λ_k) ⟨χ_α|Φ_j⟩|Φ_k⟩` from an explicit decomposition
/// `ρ = Σ λ_j |Φ_j⟩⟨Φ_j|`; weights below [`RANK_CUTOFF`] are dropped.
pub fn tau_from_decomposition(weights: &[f64], vectors: &[Vec<f64>], basis: &AntisymBasis) -> Vec<SquareMatrix> {
    let kept: Vec<(f64, &Vec<f64>)> = weights
        .iter()
        .zip(vectors)
        .filter(|(&w, _)| w >= RANK_CUTOFF)
        .map(|(&w, v)| (w.sqrt(), v))
        .collect();
    let r = kept.len().max(1);
    (0..basis.len())
        .map(|alpha| {
            if kept.is_empty() {
                return SquareMatrix::zeros(r);
            }
            let mut t = SquareMatrix::zeros(r);
            for j in 0..r {
                for k in j..r {
                    let x = kept[j].0 * kept[k].0 * basis.overlap(alpha, kept[j].1, kept[k].1);
                    t[(j, k)] = x;
                    t[(k, j)] = x;
                }
            }
            t
        })
        .collect()
}

/// τ-matrices of `ρ` built from its own eigen-decomposition.
pub fn tau_matrices(rho: &DensityMatrix, basis: &AntisymBasis) -> Result<Vec<SquareMatrix>> {
    if rho.dims() != basis.dims() {
        return Err(Error::DimensionMismatch {
            expected: basis.dims().total(),
            got: rho.dims().total(),
        });
    }
    let s = sym_eig(rho.matrix())?;
    Ok(tau_from_decomposition(&s.values, &s.vectors, basis))
}

/// `max{ζ₁ − Σ_{j>1} ζ_j, 0}` over the singular values of `τ`.
pub fn tau_bound(tau: &SquareMatrix) -> f64 {
    let z = singular_values(tau);
    (z[0] - z[1..].iter().sum::<f64>()).max(0.0)
}

/// Best of the single-`κ` bounds (`τ = T^κ`).
pub fn alb_from_tau(taus: &[SquareMatrix]) -> f64 {
    taus.iter().map(tau_bound).fold(0.0, f64::max)
}

/// Algebraic lower bound on the I-concurrence.
pub fn alb(rho: &DensityMatrix) -> Result<f64> {
    let basis = build_antisym_basis(rho.dims());
    Ok(alb_from_tau(&tau_matrices(rho, &basis)?))
}

/// `√(Σ_α |T^α|²)` for a pure state (every `T^α` is 1×1). Equals the
/// pure-state I-concurrence.
pub fn mintert_pure(v: &[f64], dims: BipartiteDims) -> Result<f64> {
    check_normalized(v)?;
    let basis = build_antisym_basis(dims);
    Ok((0..basis.len()).map(|a| basis.overlap(a, v, v).powi(2)).sum::<f64>().sqrt())
}

/// `UB = Σ_j λ_j C(|Φ_j⟩)`. Depends on the eigenvector choice inside
/// degenerate levels; any choice gives a valid upper bound.
pub fn ub_mixture(spectrum: &Spectrum, weights: &[f64], dims: BipartiteDims) -> Result<f64> {
    if spectrum.len() != dims.total() || weights.len() != spectrum.len() {
        return Err(Error::DimensionMismatch {
            expected: dims.total(),
            got: weights.len(),
        });
    }
    Ok(spectrum
        .vectors
        .iter()
        .zip(weights)
        .filter(|(_, &w)| w > 0.0)
        .map(|(v, &w)| w * iconcurrence_unchecked(v, dims))
        .sum())
}

/// Every measure the sweeps emit, for a single state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub negativity: f64,
    pub chen_lb: f64,
    pub alb: f64,
    pub ub: f64,
    pub purity: f64,
    pub entropy: f64,
    pub cdc: f64,
    pub udc_12: f64,
    pub udc_21: f64,
}

impl BoundReport {
    pub const FIELDS: [&'static str; 9] = ["negativity", "chen_lb", "alb", "ub", "purity", "entropy", "cdc", "udc_12", "udc_21"];

    pub fn get(&self, field: &str) -> Option<f64> {
        Some(match field {
            "negativity" => self.negativity,
            "chen_lb" => self.chen_lb,
            "alb" => self.alb,
            "ub" => self.ub,
            "purity" => self.purity,
            "entropy" => self.entropy,
            "cdc" => self.cdc,
            "udc_12" => self.udc_12,
            "udc_21" => self.udc_21,
            _ => return None,
        })
    }

    /// Report for a thermal state, reusing the Hamiltonian eigenbasis as the
    /// decomposition of `ρ`.
    pub fn thermal(g: &GibbsState, dims: BipartiteDims) -> Result<Self> {
        let rho = g.density(dims)?;
        bound_report(&rho, g.spectrum(), g.weights())
    }
}

/// Collects every measure. `spectrum` and `weights` must form an
/// eigen-decomposition of `rho` (`ρ = Σ w_j v_j v_jᵀ`); they feed the
/// τ-matrices and the upper bound.
pub fn bound_report(rho: &DensityMatrix, spectrum: &Spectrum, weights: &[f64]) -> Result<BoundReport> {
    let dims = rho.dims();
    let basis = build_antisym_basis(dims);
    let taus = tau_from_decomposition(weights, &spectrum.vectors, &basis);
    let negativity = negativity(rho);
    Ok(BoundReport {
        negativity,
        chen_lb: chen_factor(dims) * negativity,
        alb: alb_from_tau(&taus),
        ub: ub_mixture(spectrum, weights, dims)?,
        purity: thermal::purity(rho),
        entropy: thermal::vn_entropy(rho)?,
        cdc: cdc(rho)?,
        udc_12: udc(rho, Direction::OneToTwo)?,
        udc_21: udc(rho, Direction::TwoToOne)?,
    })
}
