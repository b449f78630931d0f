//! Truncated number-basis representation of one and two bosonic modes.
//!
//! Everything here is exact at the given cutoff and therefore serves as the
//! brute-force oracle for the Gaussian and phase-space layers: state
//! constructors (coherent, cat, squeezed, squeezed cat), operator matrices
//! (ladder, quadrature, displacement, squeeze), evolution under the bilinear
//! coupling `exp(-i theta X_A X_B)`, partial transposition, trace norm, and
//! the logarithmic negativity of arbitrary bipartite states.
//!
//! Conventions: `hbar = 1`, `X = (a + a^dag)/sqrt(2)`, `P = -i(a - a^dag)/sqrt(2)`,
//! displacement `D(gamma) = exp(gamma a^dag - gamma^* a)` moving a state
//! towards `+gamma` in phase space, squeeze
//! `S(xi) = exp((xi^* a^2 - xi a^dag^2)/2)` with `xi = r e^{i theta}`.
//! Physical scaling enters only through `theta = lambda t / hbar` supplied by
//! the caller.

use crate::error::{Error, Result};
use crate::linalg::{self, expm_antihermitian, matmul};
use ndarray::linalg::kron;
use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

/// Tolerated norm deficit of a constructed state.
pub const TAIL_TOL: f64 = 1e-10;
/// Required reported tail for coherent-family constructors.
pub const COHERENT_TAIL_LIMIT: f64 = 1e-12;
/// Bulk-unitarity bound for operator matrices.
pub const BULK_UNITARITY_TOL: f64 = 1e-8;
/// Fraction of the truncated position spectrum treated as unreliable.
pub const SPECTRAL_GUARD_FRACTION: f64 = 0.1;
/// Maximal state weight allowed in the guarded spectral band.
pub const SPECTRAL_BAND_WEIGHT_LIMIT: f64 = 1e-10;

/// Minimal cutoff for coherent-like content of amplitude `alpha`:
/// `ceil(|alpha|^2 + 8 |alpha| + 16)`, a Poisson tail bound with a wide
/// safety margin.
pub fn coherent_cutoff(alpha_mag: f64) -> usize {
    (alpha_mag * alpha_mag + 8.0 * alpha_mag + 16.0).ceil() as usize
}

/// Minimal cutoff for squeezed content of parameter `r`: `ceil(8 e^{2r})`.
pub fn squeeze_cutoff(r: f64) -> usize {
    (8.0 * (2.0 * r.abs()).exp()).ceil() as usize
}

fn guard_band(cutoff: usize) -> usize {
    ((cutoff as f64) * SPECTRAL_GUARD_FRACTION).ceil() as usize
}

/// A pure single-mode state in the number basis, unit norm.
#[derive(Debug, Clone)]
pub struct FockVector {
    amplitudes: Array1<C64>,
    truncated_tail_weight: f64,
}

impl FockVector {
    /// Number-basis amplitudes.
    pub fn amplitudes(&self) -> &Array1<C64> {
        &self.amplitudes
    }

    pub fn cutoff(&self) -> usize {
        self.amplitudes.len()
    }

    /// Constructor's estimate of the probability weight lost to truncation:
    /// the exact norm deficit where the untruncated series is known
    /// (coherent, cat), otherwise the occupancy of the top tenth of the
    /// retained basis.
    pub fn truncated_tail_weight(&self) -> f64 {
        self.truncated_tail_weight
    }

    pub fn vacuum(cutoff: usize) -> Self {
        Self::number_state(0, cutoff)
    }

    pub fn number_state(n: usize, cutoff: usize) -> Self {
        assert!(n < cutoff, "number state {n} needs cutoff > {n}");
        let mut amplitudes = Array1::zeros(cutoff);
        amplitudes[n] = C64::new(1.0, 0.0);
        Self { amplitudes, truncated_tail_weight: 0.0 }
    }

    /// Coherent state `|alpha> = e^{-|alpha|^2/2} sum_n alpha^n/sqrt(n!) |n>`.
    pub fn coherent(alpha: C64, cutoff: usize) -> Result<Self> {
        let needed = coherent_cutoff(alpha.norm());
        if cutoff < needed {
            return Err(Error::CutoffTooSmall {
                cutoff,
                rule: format!("coherent content |alpha|={:.3} needs at least {}", alpha.norm(), needed),
            });
        }
        let mut amplitudes = Array1::zeros(cutoff);
        let mut c = C64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
        let mut kept = 0.0f64;
        for n in 0..cutoff {
            amplitudes[n] = c;
            kept += c.norm_sqr();
            c *= alpha / ((n + 1) as f64).sqrt();
        }
        let tail = (1.0 - kept).max(0.0);
        if tail >= COHERENT_TAIL_LIMIT {
            return Err(Error::CutoffTooSmall {
                cutoff,
                rule: format!("coherent tail weight {tail:.3e} exceeds {COHERENT_TAIL_LIMIT:.0e}"),
            });
        }
        let norm = kept.sqrt();
        Ok(Self {
            amplitudes: amplitudes.mapv(|z| z / norm),
            truncated_tail_weight: tail,
        })
    }

    /// Cat state `C (|alpha> + e^{i phi} |-alpha>)` for real `alpha >= 0`,
    /// with `C = (2 + 2 cos(phi) e^{-2 alpha^2})^{-1/2}`.
    pub fn cat(alpha: f64, phi: f64, cutoff: usize) -> Result<Self> {
        if alpha < 0.0 {
            return Err(Error::InvalidState("cat amplitude must be nonnegative".into()));
        }
        let plus = Self::coherent(C64::new(alpha, 0.0), cutoff)?;
        let minus = Self::coherent(C64::new(-alpha, 0.0), cutoff)?;
        let phase = C64::from_polar(1.0, phi);
        let raw: Array1<C64> = &plus.amplitudes + &minus.amplitudes.mapv(|z| phase * z);
        let norm_sq: f64 = raw.iter().map(|z| z.norm_sqr()).sum();
        if norm_sq < 1e-12 {
            return Err(Error::InvalidState(
                "cat superposition has vanishing norm (alpha -> 0 with phi = pi)".into(),
            ));
        }
        let norm = norm_sq.sqrt();
        let tail = plus.truncated_tail_weight.max(minus.truncated_tail_weight);
        Ok(Self {
            amplitudes: raw.mapv(|z| z / norm),
            truncated_tail_weight: tail,
        })
    }

    /// Squeezed vacuum `S(xi) |0>`.
    pub fn squeezed_vacuum(xi: C64, cutoff: usize) -> Result<Self> {
        let s = FockMatrix::squeeze(xi, cutoff)?;
        Ok(s.apply(&Self::vacuum(cutoff)))
    }

    /// Squeezed cat `(D(alpha) + D(-alpha)) S(xi) |0> / N` for real
    /// `alpha >= 0`, with the closed-form normalisation
    /// `N = sqrt(2 (1 + exp(-2 alpha^2 |cosh r + sinh r e^{i theta}|^2)))`.
    /// The numerically computed norm must match `N` to 1e-8, otherwise the
    /// cutoff is rejected as too small.
    pub fn squeezed_cat(alpha: f64, xi: C64, cutoff: usize) -> Result<Self> {
        if alpha < 0.0 {
            return Err(Error::InvalidState("cat amplitude must be nonnegative".into()));
        }
        let squeezed = Self::squeezed_vacuum(xi, cutoff)?;
        let d_plus = FockMatrix::displacement(C64::new(alpha, 0.0), cutoff)?;
        let d_minus = FockMatrix::displacement(C64::new(-alpha, 0.0), cutoff)?;
        let raw: Array1<C64> =
            &d_plus.apply(&squeezed).amplitudes + &d_minus.apply(&squeezed).amplitudes;
        let numeric_norm: f64 = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();

        let r = xi.norm();
        let theta = if r == 0.0 { 0.0 } else { xi.arg() };
        let stretch = (C64::new(r.cosh(), 0.0) + C64::from_polar(r.sinh(), theta)).norm_sqr();
        let closed_norm = (2.0 * (1.0 + (-2.0 * alpha * alpha * stretch).exp())).sqrt();
        if (numeric_norm - closed_norm).abs() > 1e-8 * closed_norm {
            return Err(Error::CutoffTooSmall {
                cutoff,
                rule: format!(
                    "squeezed-cat norm {numeric_norm:.12} deviates from the closed form {closed_norm:.12}"
                ),
            });
        }
        let band_start = cutoff - guard_band(cutoff);
        let band_weight: f64 = raw
            .iter()
            .skip(band_start)
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            / (numeric_norm * numeric_norm);
        Ok(Self {
            amplitudes: raw.mapv(|z| z / numeric_norm),
            truncated_tail_weight: band_weight,
        })
    }

    /// Wrap externally supplied amplitudes, normalising them.
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidState("empty amplitude vector".into()));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState("non-finite amplitude".into()));
        }
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if norm_sq <= 0.0 {
            return Err(Error::InvalidState("zero amplitude vector".into()));
        }
        let norm = norm_sq.sqrt();
        Ok(Self {
            amplitudes: Array1::from(amplitudes).mapv(|z| z / norm),
            truncated_tail_weight: 0.0,
        })
    }

    /// The same state embedded in a larger cutoff.
    pub fn padded(&self, cutoff: usize) -> Result<Self> {
        if cutoff < self.cutoff() {
            return Err(Error::CutoffTooSmall {
                cutoff,
                rule: format!("cannot shrink a state of cutoff {}", self.cutoff()),
            });
        }
        let mut amplitudes = Array1::zeros(cutoff);
        amplitudes.slice_mut(ndarray::s![..self.cutoff()]).assign(&self.amplitudes);
        Ok(Self { amplitudes, truncated_tail_weight: self.truncated_tail_weight })
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Inner product `<self|other>`; cutoffs must match.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.cutoff() != other.cutoff() {
            return Err(Error::InvalidState(format!(
                "inner product needs equal cutoffs ({} vs {})",
                self.cutoff(),
                other.cutoff()
            )));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `<a>` through the ladder structure.
    fn mean_annihilation(&self) -> C64 {
        let c = &self.amplitudes;
        (0..self.cutoff() - 1)
            .map(|n| c[n].conj() * ((n + 1) as f64).sqrt() * c[n + 1])
            .sum()
    }

    /// `<a^2>`.
    fn mean_annihilation_sq(&self) -> C64 {
        let c = &self.amplitudes;
        (0..self.cutoff().saturating_sub(2))
            .map(|n| c[n].conj() * (((n + 1) * (n + 2)) as f64).sqrt() * c[n + 2])
            .sum()
    }

    pub fn mean_number(&self) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(n, z)| n as f64 * z.norm_sqr())
            .sum()
    }

    /// `<X>` with `X = (a + a^dag)/sqrt(2)`.
    pub fn mean_position(&self) -> f64 {
        std::f64::consts::SQRT_2 * self.mean_annihilation().re
    }

    /// Variance of the position quadrature.
    pub fn position_variance(&self) -> f64 {
        let mean_sq = self.mean_annihilation_sq().re + self.mean_number() + 0.5;
        let mean = self.mean_position();
        mean_sq - mean * mean
    }

    pub fn position_spread(&self) -> f64 {
        self.position_variance().sqrt()
    }

    /// Probability weight carried by the top `SPECTRAL_GUARD_FRACTION` of the
    /// position spectrum of the truncated mode.
    pub fn spectral_band_weight(&self) -> Result<f64> {
        let (values, vectors) = position_eigensystem(self.cutoff())?;
        let band = band_indices(&values, self.cutoff());
        let mut weight = 0.0;
        for &k in &band {
            let mut amp = C64::new(0.0, 0.0);
            for i in 0..self.cutoff() {
                amp += vectors[(i, k)].conj() * self.amplitudes[i];
            }
            weight += amp.norm_sqr();
        }
        Ok(weight)
    }
}

/// A dense single-mode operator in the number basis.
#[derive(Debug, Clone)]
pub struct FockMatrix {
    entries: Array2<C64>,
}

impl FockMatrix {
    pub fn matrix(&self) -> &Array2<C64> {
        &self.entries
    }

    pub fn cutoff(&self) -> usize {
        self.entries.nrows()
    }

    pub fn identity(cutoff: usize) -> Self {
        Self { entries: Array2::eye(cutoff) }
    }

    pub fn annihilation(cutoff: usize) -> Self {
        let mut entries = Array2::zeros((cutoff, cutoff));
        for n in 0..cutoff - 1 {
            entries[(n, n + 1)] = C64::new(((n + 1) as f64).sqrt(), 0.0);
        }
        Self { entries }
    }

    pub fn creation(cutoff: usize) -> Self {
        Self { entries: linalg::dagger(&Self::annihilation(cutoff).entries) }
    }

    /// `X = (a + a^dag)/sqrt(2)`: real symmetric tridiagonal.
    pub fn position(cutoff: usize) -> Self {
        let mut entries = Array2::zeros((cutoff, cutoff));
        for n in 0..cutoff - 1 {
            let v = C64::new((((n + 1) as f64) / 2.0).sqrt(), 0.0);
            entries[(n, n + 1)] = v;
            entries[(n + 1, n)] = v;
        }
        Self { entries }
    }

    /// `P = -i (a - a^dag)/sqrt(2)`.
    pub fn momentum(cutoff: usize) -> Self {
        let mut entries = Array2::zeros((cutoff, cutoff));
        for n in 0..cutoff - 1 {
            let v = (((n + 1) as f64) / 2.0).sqrt();
            entries[(n, n + 1)] = C64::new(0.0, -v);
            entries[(n + 1, n)] = C64::new(0.0, v);
        }
        Self { entries }
    }

    /// Displacement `D(gamma) = exp(gamma a^dag - gamma^* a)`.
    ///
    /// Guard: `|gamma| <= sqrt(cutoff)/2`, keeping the displaced content well
    /// inside the truncated basis. The matrix is unitary on the whole
    /// truncated space by construction; accuracy claims hold on the bulk
    /// (all but the top tenth of indices).
    pub fn displacement(gamma: C64, cutoff: usize) -> Result<Self> {
        let bound = (cutoff as f64).sqrt() / 2.0;
        if gamma.norm() > bound {
            return Err(Error::GuardViolation(format!(
                "displacement |gamma|={:.3} exceeds sqrt(cutoff)/2={:.3} at cutoff {}",
                gamma.norm(),
                bound,
                cutoff
            )));
        }
        let mut generator = Array2::zeros((cutoff, cutoff));
        for n in 0..cutoff - 1 {
            let root = ((n + 1) as f64).sqrt();
            generator[(n + 1, n)] = gamma * root;
            generator[(n, n + 1)] = -gamma.conj() * root;
        }
        Ok(Self { entries: expm_antihermitian(&generator)? })
    }

    /// Squeeze `S(xi) = exp((xi^* a^2 - xi a^dag^2)/2)`.
    ///
    /// Guard: `8 e^{2r} <= cutoff` so the anti-squeezed quadrature fits.
    pub fn squeeze(xi: C64, cutoff: usize) -> Result<Self> {
        let r = xi.norm();
        let needed = squeeze_cutoff(r);
        if cutoff < needed {
            return Err(Error::GuardViolation(format!(
                "squeezing r={r:.3} needs cutoff >= {needed}, got {cutoff}"
            )));
        }
        let mut generator = Array2::zeros((cutoff, cutoff));
        for n in 0..cutoff.saturating_sub(2) {
            let root = (((n + 1) * (n + 2)) as f64).sqrt();
            generator[(n, n + 2)] = xi.conj() * (0.5 * root);
            generator[(n + 2, n)] = -xi * (0.5 * root);
        }
        Ok(Self { entries: expm_antihermitian(&generator)? })
    }

    pub fn apply(&self, state: &FockVector) -> FockVector {
        assert_eq!(self.cutoff(), state.cutoff(), "cutoff mismatch");
        FockVector {
            amplitudes: apply_matrix(&self.entries, &state.amplitudes),
            truncated_tail_weight: state.truncated_tail_weight,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { entries: matmul(&self.entries, &other.entries) }
    }

    pub fn dagger(&self) -> Self {
        Self { entries: linalg::dagger(&self.entries) }
    }

    /// `max |(U^dag U - I)_ij|` over the bulk (indices below
    /// `cutoff - ceil(cutoff/10)`).
    pub fn bulk_unitarity_defect(&self) -> f64 {
        linalg::unitarity_defect(&self.entries, self.cutoff() - guard_band(self.cutoff()))
    }
}

/// A two-mode state as a dense density matrix over the product basis
/// `|i>_A |j>_B` with row index `i * cutoff_b + j`.
#[derive(Debug, Clone)]
pub struct BipartiteFockState {
    density: Array2<C64>,
    cutoff_a: usize,
    cutoff_b: usize,
}

impl BipartiteFockState {
    pub fn density(&self) -> &Array2<C64> {
        &self.density
    }

    pub fn cutoffs(&self) -> (usize, usize) {
        (self.cutoff_a, self.cutoff_b)
    }

    pub fn dimension(&self) -> usize {
        self.cutoff_a * self.cutoff_b
    }

    pub fn trace(&self) -> C64 {
        (0..self.dimension()).map(|i| self.density[(i, i)]).sum()
    }

    /// Product state `|a><a| (x) |b><b|`.
    pub fn from_product(a: &FockVector, b: &FockVector) -> Self {
        let amplitude = pure_amplitude_matrix(a, b);
        Self::from_pure_amplitudes(amplitude).expect("product of unit vectors is normalised")
    }

    /// Pure bipartite state from its amplitude matrix `c[i, j]`.
    pub fn from_pure_amplitudes(mut amplitudes: Array2<C64>) -> Result<Self> {
        let (na, nb) = amplitudes.dim();
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if norm_sq < 0.25 {
            return Err(Error::InvalidState(format!(
                "pure amplitude matrix norm {:.3e} too far from 1",
                norm_sq.sqrt()
            )));
        }
        let norm = norm_sq.sqrt();
        amplitudes.mapv_inplace(|z| z / norm);
        let dim = na * nb;
        let flat: Vec<C64> = amplitudes.iter().copied().collect();
        let mut density = Array2::zeros((dim, dim));
        for i in 0..dim {
            for j in 0..dim {
                density[(i, j)] = flat[i] * flat[j].conj();
            }
        }
        Ok(Self { density, cutoff_a: na, cutoff_b: nb })
    }

    /// Wrap an externally supplied density matrix, validating trace,
    /// Hermiticity and positivity (the latter costs a full
    /// eigendecomposition).
    pub fn from_density(density: Array2<C64>, cutoff_a: usize, cutoff_b: usize) -> Result<Self> {
        let dim = cutoff_a * cutoff_b;
        if density.dim() != (dim, dim) {
            return Err(Error::InvalidState(format!(
                "density of shape {:?} does not match cutoffs ({cutoff_a}, {cutoff_b})",
                density.dim()
            )));
        }
        let trace: C64 = (0..dim).map(|i| density[(i, i)]).sum();
        if (trace - C64::new(1.0, 0.0)).norm() > 1e-10 {
            return Err(Error::InvalidState(format!("trace {trace} is not 1")));
        }
        let mut herm_defect = 0.0f64;
        for i in 0..dim {
            for j in i..dim {
                herm_defect = herm_defect.max((density[(i, j)] - density[(j, i)].conj()).norm());
            }
        }
        if herm_defect > 1e-12 {
            return Err(Error::InvalidState(format!(
                "density is not Hermitian (defect {herm_defect:.3e})"
            )));
        }
        let eigenvalues = linalg::eigvalsh(&density)?;
        if eigenvalues.first().copied().unwrap_or(0.0) < -1e-10 {
            return Err(Error::InvalidState(format!(
                "density is not positive semidefinite (min eigenvalue {:.3e})",
                eigenvalues[0]
            )));
        }
        Ok(Self { density, cutoff_a, cutoff_b })
    }

    /// Partial trace over mode B.
    pub fn reduced_a(&self) -> Array2<C64> {
        let mut out = Array2::zeros((self.cutoff_a, self.cutoff_a));
        for i in 0..self.cutoff_a {
            for k in 0..self.cutoff_a {
                let mut acc = C64::new(0.0, 0.0);
                for j in 0..self.cutoff_b {
                    acc += self.density[(i * self.cutoff_b + j, k * self.cutoff_b + j)];
                }
                out[(i, k)] = acc;
            }
        }
        out
    }

    /// Partial trace over mode A.
    pub fn reduced_b(&self) -> Array2<C64> {
        let mut out = Array2::zeros((self.cutoff_b, self.cutoff_b));
        for j in 0..self.cutoff_b {
            for l in 0..self.cutoff_b {
                let mut acc = C64::new(0.0, 0.0);
                for i in 0..self.cutoff_a {
                    acc += self.density[(i * self.cutoff_b + j, i * self.cutoff_b + l)];
                }
                out[(j, l)] = acc;
            }
        }
        out
    }
}

fn pure_amplitude_matrix(a: &FockVector, b: &FockVector) -> Array2<C64> {
    let mut m = Array2::zeros((a.cutoff(), b.cutoff()));
    for i in 0..a.cutoff() {
        for j in 0..b.cutoff() {
            m[(i, j)] = a.amplitudes[i] * b.amplitudes[j];
        }
    }
    m
}

/// Eigendecomposition of the truncated position operator, ascending.
fn position_eigensystem(cutoff: usize) -> Result<(Vec<f64>, Array2<C64>)> {
    linalg::eigh(FockMatrix::position(cutoff).matrix())
}

/// Indices of the guarded band: the `ceil(cutoff/10)` eigenvalues of largest
/// magnitude of the truncated position operator.
fn band_indices(values: &[f64], cutoff: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].abs().partial_cmp(&values[a].abs()).unwrap());
    order.truncate(guard_band(cutoff));
    order
}

fn density_band_weight(reduced: &Array2<C64>, cutoff: usize) -> Result<f64> {
    let (values, vectors) = position_eigensystem(cutoff)?;
    let band = band_indices(&values, cutoff);
    let mut weight = 0.0;
    for &k in &band {
        // <v_k| rho |v_k>
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..cutoff {
            for j in 0..cutoff {
                acc += vectors[(i, k)].conj() * reduced[(i, j)] * vectors[(j, k)];
            }
        }
        weight += acc.re;
    }
    Ok(weight)
}

fn check_band_weight(weight: f64, mode: &str) -> Result<()> {
    if weight > SPECTRAL_BAND_WEIGHT_LIMIT {
        return Err(Error::GuardViolation(format!(
            "mode {mode} carries weight {weight:.3e} in the top tenth of the truncated \
             position spectrum (limit {SPECTRAL_BAND_WEIGHT_LIMIT:.0e}); raise the cutoff"
        )));
    }
    Ok(())
}

/// Evolve a product of pure states under `U = exp(-i theta X_A X_B)`,
/// diagonalising the position operator of each mode:
/// `U = (V_A (x) V_B) exp(-i theta Lambda_A (x) Lambda_B) (V_A (x) V_B)^dag`.
pub fn evolve_bilinear_product(
    a: &FockVector,
    b: &FockVector,
    theta: f64,
) -> Result<BipartiteFockState> {
    check_band_weight(a.spectral_band_weight()?, "A")?;
    check_band_weight(b.spectral_band_weight()?, "B")?;
    let (xa, va) = position_eigensystem(a.cutoff())?;
    let (xb, vb) = position_eigensystem(b.cutoff())?;

    // rotate into the joint position eigenbasis
    let u = apply_matrix(&linalg::dagger(&va), a.amplitudes());
    let w = apply_matrix(&linalg::dagger(&vb), b.amplitudes());

    let mut phased = Array2::zeros((a.cutoff(), b.cutoff()));
    for k in 0..a.cutoff() {
        for l in 0..b.cutoff() {
            let phase = C64::from_polar(1.0, -theta * xa[k] * xb[l]);
            phased[(k, l)] = phase * u[k] * w[l];
        }
    }
    // back to the number basis: C' = V_A M V_B^T
    let amplitudes = matmul(&matmul(&va, &phased), &vb.t().to_owned());
    BipartiteFockState::from_pure_amplitudes(amplitudes)
}

/// Evolve an arbitrary bipartite state under `U = exp(-i theta X_A X_B)`.
pub fn evolve_bilinear(state: &BipartiteFockState, theta: f64) -> Result<BipartiteFockState> {
    let (na, nb) = state.cutoffs();
    check_band_weight(density_band_weight(&state.reduced_a(), na)?, "A")?;
    check_band_weight(density_band_weight(&state.reduced_b(), nb)?, "B")?;
    if theta == 0.0 {
        return Ok(state.clone());
    }
    let (xa, va) = position_eigensystem(na)?;
    let (xb, vb) = position_eigensystem(nb)?;
    let w = kron(&va, &vb);
    let w_dag = linalg::dagger(&w);
    let rotated = matmul(&matmul(&w_dag, &state.density), &w);
    let dim = na * nb;
    let mut phases = Vec::with_capacity(dim);
    for k in 0..na {
        for l in 0..nb {
            phases.push(C64::from_polar(1.0, -theta * xa[k] * xb[l]));
        }
    }
    let mut twisted = rotated;
    for i in 0..dim {
        for j in 0..dim {
            twisted[(i, j)] = phases[i] * twisted[(i, j)] * phases[j].conj();
        }
    }
    let density = matmul(&matmul(&w, &twisted), &w_dag);
    Ok(BipartiteFockState { density, cutoff_a: na, cutoff_b: nb })
}

fn apply_matrix(m: &Array2<C64>, v: &Array1<C64>) -> Array1<C64> {
    let (rows, cols) = m.dim();
    let mut out = Array1::zeros(rows);
    for i in 0..rows {
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..cols {
            acc += m[(i, j)] * v[j];
        }
        out[i] = acc;
    }
    out
}

/// Partial transpose with respect to mode B:
/// `rho^Gamma_{(i l),(k j)} = rho_{(i j),(k l)}`.
pub fn partial_transpose_b(state: &BipartiteFockState) -> Array2<C64> {
    let (na, nb) = state.cutoffs();
    let mut out = Array2::zeros(state.density.dim());
    for i in 0..na {
        for k in 0..na {
            for j in 0..nb {
                for l in 0..nb {
                    out[(i * nb + l, k * nb + j)] = state.density[(i * nb + j, k * nb + l)];
                }
            }
        }
    }
    out
}

/// Trace norm `sum |lambda_i|` of a Hermitian matrix by full
/// eigendecomposition.
pub fn trace_norm_hermitian(m: &Array2<C64>) -> Result<f64> {
    let n = m.nrows();
    let mut defect = 0.0f64;
    for i in 0..n {
        for j in i..n {
            defect = defect.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    if defect > 1e-10 {
        return Err(Error::InvalidState(format!(
            "trace norm input is not Hermitian (defect {defect:.3e})"
        )));
    }
    Ok(linalg::eigvalsh(m)?.iter().map(|x| x.abs()).sum())
}

/// Logarithmic negativity `E_N = log2 || rho^Gamma_B ||_1` of a bipartite
/// state.
pub fn log_negativity_fock(state: &BipartiteFockState) -> Result<f64> {
    let transposed = partial_transpose_b(state);
    let trace_norm = trace_norm_hermitian(&transposed)?;
    Ok(trace_norm.log2().max(0.0))
}
