//! Thermal states and temperature thresholds.
//!
//! Units: `k_B = 1`, so temperature and energy share units and `β = 1/T`.
//!
//! Two thresholds are provided. [`tstar`] is the temperature at which the
//! Gibbs purity enters the separable ball around `I/d`; every state above it
//! is separable. [`estimate_ts`] scans an entanglement measure and reports
//! where it last exceeds a tolerance, which is a lower estimate of the true
//! separability temperature.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numkernel::{entropy_bits, sym_eigvals, Spectrum, SquareMatrix};
use crate::qstate::{self, BipartiteDims, DensityMatrix};

/// Energies closer than this to the minimum count as ground states.
pub const GROUND_DEGENERACY_WINDOW: f64 = 1e-9;

/// `λ_i = e^{−β(E_i − E_min)} / Z'`. The shift leaves the normalized
/// weights unchanged and keeps every exponent non-positive.
pub fn boltzmann_weights(energies: &[f64], beta: f64) -> Vec<f64> {
    let emin = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let mut w: Vec<f64> = energies.iter().map(|&e| (-beta * (e - emin)).exp()).collect();
    let z: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= z);
    w
}

/// Purity of the Gibbs weights at inverse temperature `beta`.
pub fn gibbs_purity(energies: &[f64], beta: f64) -> f64 {
    boltzmann_weights(energies, beta).iter().map(|w| w * w).sum()
}

/// Spectrum of a Hamiltonian together with its Boltzmann weights.
#[derive(Debug, Clone)]
pub struct GibbsState {
    spectrum: Spectrum,
    beta: f64,
    weights: Vec<f64>,
}

impl GibbsState {
    pub fn new(spectrum: Spectrum, temperature: f64) -> Result<Self> {
        if !(temperature > 0.0) {
            return Err(Error::NonPositiveTemperature(temperature));
        }
        Self::with_beta(spectrum, 1.0 / temperature)
    }

    /// `beta = 0` is the infinite-temperature state.
    pub fn with_beta(spectrum: Spectrum, beta: f64) -> Result<Self> {
        if !(beta >= 0.0) || !beta.is_finite() {
            return Err(Error::NonPositiveTemperature(1.0 / beta));
        }
        let weights = boltzmann_weights(&spectrum.values, beta);
        Ok(Self { spectrum, beta, weights })
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn temperature(&self) -> f64 {
        1.0 / self.beta
    }

    /// `ρ = Σ λ_i |Φ_i⟩⟨Φ_i|`
    pub fn density(&self, dims: BipartiteDims) -> Result<DensityMatrix> {
        let d = self.spectrum.len();
        if d != dims.total() {
            return Err(Error::DimensionMismatch {
                expected: dims.total(),
                got: d,
            });
        }
        let spread = self.spectrum.values[d - 1] - self.spectrum.values[0];
        if spread == 0.0 || self.beta == 0.0 {
            return Ok(DensityMatrix::maximally_mixed(dims));
        }
        let mut it = self.weights.iter();
        let rho = self.spectrum.compose(|_| *it.next().expect("one weight per level"));
        Ok(DensityMatrix::new_unchecked(symmetrized(&rho), dims))
    }
}

fn symmetrized(m: &SquareMatrix) -> SquareMatrix {
    SquareMatrix::from_fn(m.dim(), |i, j| 0.5 * (m[(i, j)] + m[(j, i)]))
}

/// Thermal state `exp(−H/T)/Z` from the spectrum of `H`.
pub fn gibbs(spectrum: &Spectrum, temperature: f64, dims: BipartiteDims) -> Result<DensityMatrix> {
    GibbsState::new(spectrum.clone(), temperature)?.density(dims)
}

/// Zero-temperature limit: uniform mixture over the lowest level(s).
pub fn ground_state(spectrum: &Spectrum, dims: BipartiteDims) -> Result<DensityMatrix> {
    let d = spectrum.len();
    if d != dims.total() {
        return Err(Error::DimensionMismatch {
            expected: dims.total(),
            got: d,
        });
    }
    let emin = spectrum.min_value();
    let g = ground_degeneracy(&spectrum.values, GROUND_DEGENERACY_WINDOW);
    let rho = spectrum.compose(|e| if e - emin <= GROUND_DEGENERACY_WINDOW { 1.0 / g as f64 } else { 0.0 });
    Ok(DensityMatrix::new_unchecked(symmetrized(&rho), dims))
}

fn ground_degeneracy(energies: &[f64], window: f64) -> usize {
    let emin = energies.iter().copied().fold(f64::INFINITY, f64::min);
    energies.iter().filter(|&&e| e - emin <= window).count()
}

/// `P(ρ) = Tr ρ²`
pub fn purity(rho: &DensityMatrix) -> f64 {
    qstate::purity(rho.matrix())
}

/// `dP/dβ = Σ_ij 2 λ_i² λ_j (E_j − E_i)`.
///
/// Summed pairwise as `2 Σ_{i<j} λ_i λ_j (λ_i − λ_j)(E_j − E_i)`; every
/// term is non-negative because the weights are monotone in energy.
pub fn purity_beta_derivative(g: &GibbsState) -> f64 {
    let e = &g.spectrum.values;
    let l = &g.weights;
    let mut acc = 0.0;
    for i in 0..e.len() {
        for j in (i + 1)..e.len() {
            acc += l[i] * l[j] * (l[i] - l[j]) * (e[j] - e[i]);
        }
    }
    2.0 * acc
}

/// Local dimensions of an `m`-partite system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultipartiteDims(Vec<usize>);

impl MultipartiteDims {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.len() < 2 || dims.iter().any(|&d| d < 2) {
            return Err(Error::Config(format!("need at least two parties of dimension >= 2, got {dims:?}")));
        }
        Ok(Self(dims))
    }

    pub fn parties(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    /// Purity below which a state is certainly separable: `1/(d − 2^{2−m})`.
    pub fn purity_threshold(&self) -> f64 {
        let d = self.total() as f64;
        1.0 / (d - 2f64.powi(2 - self.parties() as i32))
    }

    /// Hilbert–Schmidt radius of the separable ball around `I/d`,
    /// `[2^{(m−2)/2} √(d(d − 2^{−(m−2)}))]^{−1}`; equals `[d(d−1)]^{−½}` for
    /// two parties, the largest such radius.
    pub fn ball_radius(&self) -> f64 {
        let d = self.total() as f64;
        let m = self.parties() as i32;
        1.0 / (2f64.powf((m - 2) as f64 / 2.0) * (d * (d - 2f64.powi(-(m - 2)))).sqrt())
    }
}

impl From<BipartiteDims> for MultipartiteDims {
    fn from(d: BipartiteDims) -> Self {
        Self(vec![d.da, d.db])
    }
}

/// Purity-ball separability test. `true` certifies separability; `false`
/// is inconclusive.
pub fn gb_separable(rho: &SquareMatrix, dims: &MultipartiteDims) -> Result<bool> {
    if rho.dim() != dims.total() {
        return Err(Error::DimensionMismatch {
            expected: dims.total(),
            got: rho.dim(),
        });
    }
    let tr = rho.trace();
    if (tr - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidState(format!("trace {tr} != 1")));
    }
    Ok(qstate::purity(rho) <= dims.purity_threshold())
}

/// Temperature at which the Gibbs purity equals the separable-ball
/// threshold. `None` when the Gibbs family never leaves the ball (all
/// levels equal, or a ground space so degenerate that `P(T→0) ≤ threshold`).
pub fn tstar(spectrum: &Spectrum, dims: &MultipartiteDims) -> Option<f64> {
    let e = &spectrum.values;
    let thr = dims.purity_threshold();
    let spread = e[e.len() - 1] - e[0];
    if spread <= 1e-12 {
        return None;
    }
    let g = ground_degeneracy(e, 1e-12 * e[0].abs().max(1.0));
    if 1.0 / g as f64 <= thr {
        return None;
    }

    let purity_at = |beta: f64| gibbs_purity(e, beta);
    let mut lo = 0.0;
    let mut hi = 1.0 / spread;
    let mut doublings = 0;
    while purity_at(hi) <= thr {
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > 2000 || !hi.is_finite() {
            return None;
        }
    }
    while hi - lo > 1e-10 * hi {
        let mid = 0.5 * (lo + hi);
        if purity_at(mid) <= thr {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(2.0 / (lo + hi))
}

/// Scan settings for [`estimate_ts`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TsScan {
    pub tmax: f64,
    pub grid: usize,
    pub tol: f64,
}

impl Default for TsScan {
    fn default() -> Self {
        Self {
            tmax: 10.0,
            grid: 400,
            tol: 1e-9,
        }
    }
}

/// Final bracket width of the bisection in [`estimate_ts`].
pub const TS_BRACKET: f64 = 1e-6;

/// Largest temperature at which `measure` of the Gibbs state still exceeds
/// `scan.tol`, located on the grid `T_k = k·tmax/grid` and refined by
/// bisection. Returns `tmax` if the measure is still above tolerance there.
pub fn estimate_ts<F>(spectrum: &Spectrum, dims: BipartiteDims, measure: F, scan: TsScan) -> Result<Option<f64>>
where
    F: Fn(&DensityMatrix) -> f64 + Sync,
{
    if !(scan.tmax > 0.0) || scan.grid < 2 || !(scan.tol > 0.0) {
        return Err(Error::Config(format!("invalid T_s scan {scan:?}")));
    }
    let entangled = |t: f64| -> Result<bool> { Ok(measure(&gibbs(spectrum, t, dims)?) > scan.tol) };
    let step = scan.tmax / scan.grid as f64;

    let flags = (1..=scan.grid)
        .into_par_iter()
        .map(|k| entangled(step * k as f64))
        .collect::<Result<Vec<bool>>>()?;

    let Some(last) = flags.iter().rposition(|&f| f) else {
        return Ok(None);
    };
    if last + 1 == scan.grid {
        return Ok(Some(scan.tmax));
    }
    let (mut lo, mut hi) = (step * (last + 1) as f64, step * (last + 2) as f64);
    while hi - lo > TS_BRACKET {
        let mid = 0.5 * (lo + hi);
        if entangled(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

/// Von Neumann entropy in bits of any real symmetric unit-trace matrix.
pub fn entropy_of(m: &SquareMatrix) -> Result<f64> {
    let p = sym_eigvals(m)?;
    let p: Vec<f64> = p.into_iter().map(|x| if (-1e-12..0.0).contains(&x) { 0.0 } else { x }).collect();
    entropy_bits(&p)
}

/// `S(ρ) = −Tr ρ log₂ ρ`
pub fn vn_entropy(rho: &DensityMatrix) -> Result<f64> {
    entropy_of(rho.matrix())
}
