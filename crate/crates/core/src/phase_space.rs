//! Wigner functions on rectangular phase-space grids: closed forms for cat
//! and squeezed states, reconstruction from Fock data, marginals, and overlap
//! integrals.
//!
//! Conventions: `W(X, P) = (2/pi) int dy e^{-2iPy} <X+y| rho |X-y>`, so the
//! full integral of `W` is 2, the marginals carry a factor 1/2, and
//! `|<psi|phi>|^2 = (pi/2) int W_psi W_phi`. All quadratures are composite
//! Simpson on uniform grids with odd sample counts.

use crate::error::{Error, Result};
use crate::fock::FockVector;
use crate::linalg;
use ndarray::Array2;
use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::sync::Arc;

/// Quadrature tolerance quoted by the normalisation and purity contracts.
pub const QUADRATURE_TOL: f64 = 1e-6;
/// Required decay of the position/momentum probability density at grid edges.
pub const EDGE_DECAY: f64 = 1e-12;
/// Samples per unit phase-space length before fringe scaling.
pub const BASE_SAMPLES_PER_UNIT: f64 = 64.0;

/// A rectangular uniform sampling of phase space. Sample counts are odd so
/// composite Simpson applies directly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub nx: usize,
    pub np: usize,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, p_min: f64, p_max: f64, nx: usize, np: usize) -> Result<Self> {
        let spec = Self { x_min, x_max, p_min, p_max, nx, np };
        spec.validate()?;
        Ok(spec)
    }

    /// Symmetric extents `[-x_half, x_half] x [-p_half, p_half]`.
    pub fn symmetric(x_half: f64, p_half: f64, nx: usize, np: usize) -> Result<Self> {
        Self::new(-x_half, x_half, -p_half, p_half, nx, np)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_max > self.x_min) || !(self.p_max > self.p_min) {
            return Err(Error::InvalidGrid(format!(
                "extents must increase (x: {}..{}, p: {}..{})",
                self.x_min, self.x_max, self.p_min, self.p_max
            )));
        }
        if !self.x_min.is_finite() || !self.x_max.is_finite() || !self.p_min.is_finite() || !self.p_max.is_finite() {
            return Err(Error::InvalidGrid("non-finite extents".into()));
        }
        for (name, n) in [("nx", self.nx), ("np", self.np)] {
            if n < 3 || n % 2 == 0 {
                return Err(Error::InvalidGrid(format!(
                    "{name} = {n}; Simpson quadrature needs an odd count >= 3"
                )));
            }
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn dp(&self) -> f64 {
        (self.p_max - self.p_min) / (self.np - 1) as f64
    }

    pub fn xs(&self) -> Vec<f64> {
        let dx = self.dx();
        (0..self.nx).map(|i| self.x_min + i as f64 * dx).collect()
    }

    pub fn ps(&self) -> Vec<f64> {
        let dp = self.dp();
        (0..self.np).map(|k| self.p_min + k as f64 * dp).collect()
    }
}

fn odd_count(length: f64, rate: f64) -> usize {
    let n = (length * rate).ceil() as usize + 1;
    if n % 2 == 0 { n + 1 } else { n }
}

/// Default grid for a cat state: extents `+-(sqrt(2)|alpha| + 6)` in X and
/// `+-(sqrt(2)|Im alpha| + 6)` in P, sampled at 64 per unit length scaled by
/// `max(1, 2 dX_cat / pi)` so interference fringes stay well resolved.
pub fn auto_grid_for_cat(alpha: C64) -> GridSpec {
    let x_half = std::f64::consts::SQRT_2 * alpha.norm() + 6.0;
    let p_half = std::f64::consts::SQRT_2 * alpha.im.abs() + 6.0;
    let fringe = 2.0 * std::f64::consts::SQRT_2 * alpha.norm() / PI;
    let rate = BASE_SAMPLES_PER_UNIT * fringe.max(1.0);
    GridSpec::symmetric(x_half, p_half, odd_count(2.0 * x_half, rate), odd_count(2.0 * p_half, rate))
        .expect("auto grid is valid")
}

/// Default grid for a squeezed vacuum state: extents six marginal widths,
/// 64 samples per unit.
pub fn auto_grid_for_squeezed(params: &SqueezedWignerParams) -> GridSpec {
    let sigma = params.covariance();
    let x_half = (6.0 * sigma[0].sqrt()).max(6.0);
    let p_half = (6.0 * sigma[2].sqrt()).max(6.0);
    GridSpec::symmetric(
        x_half,
        p_half,
        odd_count(2.0 * x_half, BASE_SAMPLES_PER_UNIT),
        odd_count(2.0 * p_half, BASE_SAMPLES_PER_UNIT),
    )
    .expect("auto grid is valid")
}

/// Sampled Wigner function.
#[derive(Debug, Clone)]
pub struct WignerGrid {
    spec: GridSpec,
    values: Array2<f64>,
}

impl WignerGrid {
    pub fn from_parts(spec: GridSpec, values: Array2<f64>) -> Result<Self> {
        spec.validate()?;
        if values.dim() != (spec.nx, spec.np) {
            return Err(Error::InvalidGrid(format!(
                "value array {:?} does not match (nx, np) = ({}, {})",
                values.dim(),
                spec.nx,
                spec.np
            )));
        }
        Ok(Self { spec, values })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    /// Row-major values, `values[(ix, ip)] = W(x_min + ix dx, p_min + ip dp)`.
    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    /// `int int W dX dP`; 2 for a correctly normalised state.
    pub fn integral(&self) -> f64 {
        simpson_2d(&self.values, self.spec.dx(), self.spec.dp())
    }

    /// Position distribution `<X|rho|X> = (1/2) int W dP`, one value per X sample.
    pub fn marginal_position(&self) -> Vec<f64> {
        let wp = simpson_weights(self.spec.np);
        let dp3 = self.spec.dp() / 3.0;
        (0..self.spec.nx)
            .map(|i| {
                0.5 * dp3
                    * self
                        .values
                        .row(i)
                        .iter()
                        .zip(wp.iter())
                        .map(|(v, w)| v * w)
                        .sum::<f64>()
            })
            .collect()
    }

    /// Momentum distribution `<P|rho|P> = (1/2) int W dX`, one value per P sample.
    pub fn marginal_momentum(&self) -> Vec<f64> {
        let wx = simpson_weights(self.spec.nx);
        let dx3 = self.spec.dx() / 3.0;
        (0..self.spec.np)
            .map(|k| {
                0.5 * dx3
                    * self
                        .values
                        .column(k)
                        .iter()
                        .zip(wx.iter())
                        .map(|(v, w)| v * w)
                        .sum::<f64>()
            })
            .collect()
    }
}

/// Composite Simpson weights (1, 4, 2, ..., 4, 1) for an odd sample count.
pub fn simpson_weights(n: usize) -> Vec<f64> {
    assert!(n >= 3 && n % 2 == 1, "Simpson needs an odd count >= 3");
    (0..n)
        .map(|i| {
            if i == 0 || i == n - 1 {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            }
        })
        .collect()
}

/// Composite Simpson quadrature of tabulated values on a uniform 2-D grid.
pub fn simpson_2d(values: &Array2<f64>, dx: f64, dp: f64) -> f64 {
    let (nx, np) = values.dim();
    let wx = simpson_weights(nx);
    let wp = simpson_weights(np);
    let mut total = 0.0;
    for i in 0..nx {
        let mut row = 0.0;
        for k in 0..np {
            row += wp[k] * values[(i, k)];
        }
        total += wx[i] * row;
    }
    total * dx * dp / 9.0
}

/// Parameters of a cat state `C(|alpha> + e^{i phi}|-alpha>)`.
#[derive(Debug, Clone, Copy)]
pub struct CatWignerParams {
    pub alpha: C64,
    pub phi: f64,
}

/// Parameters of a squeezed vacuum state with `xi = r e^{i theta}`.
#[derive(Debug, Clone, Copy)]
pub struct SqueezedWignerParams {
    pub r: f64,
    pub theta: f64,
}

impl SqueezedWignerParams {
    /// Covariance entries `(sigma_xx, sigma_xp, sigma_pp)`:
    /// `sigma_xx = cosh 2r - sinh 2r cos theta`,
    /// `sigma_xp = -sinh 2r sin theta`,
    /// `sigma_pp = cosh 2r + sinh 2r cos theta`.
    pub fn covariance(&self) -> [f64; 3] {
        let c = (2.0 * self.r).cosh();
        let s = (2.0 * self.r).sinh();
        [
            c - s * self.theta.cos(),
            -s * self.theta.sin(),
            c + s * self.theta.cos(),
        ]
    }

    /// `det sigma_sqz`, identically 1 for a pure squeezed vacuum.
    pub fn covariance_det(&self) -> f64 {
        let [xx, xp, pp] = self.covariance();
        xx * pp - xp * xp
    }
}

/// Pointwise cat-state Wigner function:
/// two Gaussian lobes at `+-sqrt(2)(Re alpha, Im alpha)` plus an interference
/// term `2 e^{-|r|^2} cos(2 r^T Omega r' + phi)` at the origin, with
/// prefactor `2 C^2 / pi`.
pub fn wigner_cat_at(params: &CatWignerParams, x: f64, p: f64) -> f64 {
    let ax = std::f64::consts::SQRT_2 * params.alpha.re;
    let ap = std::f64::consts::SQRT_2 * params.alpha.im;
    let c2 = 1.0 / (2.0 + 2.0 * params.phi.cos() * (-2.0 * params.alpha.norm_sqr()).exp());
    let lobe_minus = (-((x - ax).powi(2) + (p - ap).powi(2))).exp();
    let lobe_plus = (-((x + ax).powi(2) + (p + ap).powi(2))).exp();
    // r^T Omega r' with Omega = (0, 1; -1, 0)
    let cross = x * ap - p * ax;
    let fringe = 2.0 * (-(x * x + p * p)).exp() * (2.0 * cross + params.phi).cos();
    2.0 * c2 / PI * (lobe_minus + lobe_plus + fringe)
}

fn require_coverage(spec: &GridSpec, x_lo: f64, x_hi: f64, p_lo: f64, p_hi: f64, rule: &str) -> Result<()> {
    if spec.x_min > x_lo || spec.x_max < x_hi || spec.p_min > p_lo || spec.p_max < p_hi {
        return Err(Error::InsufficientExtent(format!(
            "{rule}: needs x in [{x_lo:.2}, {x_hi:.2}], p in [{p_lo:.2}, {p_hi:.2}]; \
             got x in [{:.2}, {:.2}], p in [{:.2}, {:.2}]",
            spec.x_min, spec.x_max, spec.p_min, spec.p_max
        )));
    }
    Ok(())
}

/// Cat-state Wigner function on a grid. Extents must cover
/// `+-(sqrt(2)|alpha| + 6)` in X and `+-(sqrt(2)|Im alpha| + 6)` in P.
pub fn wigner_cat(params: &CatWignerParams, spec: &GridSpec) -> Result<WignerGrid> {
    wigner_cat_displaced(params, C64::new(0.0, 0.0), spec)
}

/// Cat-state Wigner displaced by `beta`:
/// `W(X - sqrt(2) Re beta, P - sqrt(2) Im beta)`.
pub fn wigner_cat_displaced(params: &CatWignerParams, beta: C64, spec: &GridSpec) -> Result<WignerGrid> {
    spec.validate()?;
    let x_half = std::f64::consts::SQRT_2 * params.alpha.norm() + 6.0;
    let p_half = std::f64::consts::SQRT_2 * params.alpha.im.abs() + 6.0;
    let sx = std::f64::consts::SQRT_2 * beta.re;
    let sp = std::f64::consts::SQRT_2 * beta.im;
    require_coverage(
        spec,
        -x_half + sx.min(0.0),
        x_half + sx.max(0.0),
        -p_half + sp.min(0.0),
        p_half + sp.max(0.0),
        "cat coverage (sqrt(2)|alpha| + 6 around the displaced centre)",
    )?;
    let xs = spec.xs();
    let ps = spec.ps();
    let mut values = Array2::zeros((spec.nx, spec.np));
    for (i, &x) in xs.iter().enumerate() {
        for (k, &p) in ps.iter().enumerate() {
            values[(i, k)] = wigner_cat_at(params, x - sx, p - sp);
        }
    }
    WignerGrid::from_parts(*spec, values)
}

/// Squeezed-vacuum Wigner function `(2/pi) e^{-r^T sigma^{-1} r}` on a grid.
/// Extents must cover six marginal widths on each axis.
pub fn wigner_squeezed(params: &SqueezedWignerParams, spec: &GridSpec) -> Result<WignerGrid> {
    spec.validate()?;
    let [xx, xp, pp] = params.covariance();
    require_coverage(
        spec,
        -6.0 * xx.sqrt(),
        6.0 * xx.sqrt(),
        -6.0 * pp.sqrt(),
        6.0 * pp.sqrt(),
        "squeezed coverage (six marginal widths)",
    )?;
    let det = params.covariance_det();
    // inverse of the 2x2 covariance
    let (ixx, ixp, ipp) = (pp / det, -xp / det, xx / det);
    let xs = spec.xs();
    let ps = spec.ps();
    let mut values = Array2::zeros((spec.nx, spec.np));
    for (i, &x) in xs.iter().enumerate() {
        for (k, &p) in ps.iter().enumerate() {
            let quad = ixx * x * x + 2.0 * ixp * x * p + ipp * p * p;
            values[(i, k)] = 2.0 / PI * (-quad).exp();
        }
    }
    WignerGrid::from_parts(*spec, values)
}

/// Normalised harmonic-oscillator eigenfunctions `phi_0 .. phi_{n_max - 1}`
/// at a point, by the stable three-term recurrence.
fn hermite_functions(n_max: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max);
    if n_max == 0 {
        return out;
    }
    let phi0 = PI.powf(-0.25) * (-0.5 * x * x).exp();
    out.push(phi0);
    if n_max == 1 {
        return out;
    }
    out.push(std::f64::consts::SQRT_2 * x * phi0);
    for n in 1..(n_max - 1) {
        let next = (2.0 / (n as f64 + 1.0)).sqrt() * x * out[n]
            - ((n as f64) / (n as f64 + 1.0)).sqrt() * out[n - 1];
        out.push(next);
    }
    out
}

/// Position wavefunction `psi(x) = sum_n c_n phi_n(x)` at the given points.
pub fn position_wavefunction(state: &FockVector, xs: &[f64]) -> Vec<C64> {
    xs.iter()
        .map(|&x| {
            let phis = hermite_functions(state.cutoff(), x);
            state
                .amplitudes()
                .iter()
                .zip(phis.iter())
                .map(|(c, phi)| c * phi)
                .sum()
        })
        .collect()
}

/// Momentum wavefunction `psi~(p) = sum_n c_n (-i)^n phi_n(p)`.
pub fn momentum_wavefunction(state: &FockVector, ps: &[f64]) -> Vec<C64> {
    let phase_cycle = [
        C64::new(1.0, 0.0),
        C64::new(0.0, -1.0),
        C64::new(-1.0, 0.0),
        C64::new(0.0, 1.0),
    ];
    ps.iter()
        .map(|&p| {
            let phis = hermite_functions(state.cutoff(), p);
            state
                .amplitudes()
                .iter()
                .enumerate()
                .zip(phis.iter())
                .map(|((n, c), phi)| c * phase_cycle[n % 4] * phi)
                .sum()
        })
        .collect()
}

/// Evaluates `T_k = sum_{j=0}^{la-1} a_j e^{-i chi k j}` for `k = 0..n_out-1`
/// through Bluestein's identity `kj = (k^2 + j^2 - (k-j)^2)/2`, turning the
/// sum into one circular convolution.
struct ChirpEngine {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    kernel_hat: Vec<C64>,
    la: usize,
    n_out: usize,
    chi: f64,
    len: usize,
}

impl ChirpEngine {
    fn new(la: usize, n_out: usize, chi: f64) -> Self {
        let len = (la + n_out - 1).next_power_of_two();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(len);
        let inverse = planner.plan_fft_inverse(len);
        let mut kernel = vec![C64::new(0.0, 0.0); len];
        for m in -(la as i64 - 1)..=(n_out as i64 - 1) {
            let idx = (m.rem_euclid(len as i64)) as usize;
            kernel[idx] = C64::from_polar(1.0, 0.5 * chi * (m * m) as f64);
        }
        forward.process(&mut kernel);
        Self { forward, inverse, kernel_hat: kernel, la, n_out, chi, len }
    }

    fn run(&self, a: &[C64]) -> Vec<C64> {
        assert_eq!(a.len(), self.la);
        let mut buf = vec![C64::new(0.0, 0.0); self.len];
        for (j, &v) in a.iter().enumerate() {
            let ang = -0.5 * self.chi * (j * j) as f64;
            buf[j] = v * C64::from_polar(1.0, ang);
        }
        self.forward.process(&mut buf);
        for (b, k) in buf.iter_mut().zip(self.kernel_hat.iter()) {
            *b *= k;
        }
        self.inverse.process(&mut buf);
        let scale = 1.0 / self.len as f64;
        (0..self.n_out)
            .map(|k| {
                let ang = -0.5 * self.chi * (k * k) as f64;
                buf[k] * C64::from_polar(scale, ang)
            })
            .collect()
    }
}

/// Wigner function of a pure state from its Fock amplitudes:
/// `W(X, P) = (2/pi) int dy e^{-2iPy} psi(X+y) conj(psi(X-y))`,
/// evaluated with harmonic-oscillator position wavefunctions and composite
/// Simpson in `y`. One oscillatory sum per grid column, batched over all P
/// values by a chirp transform.
pub fn wigner_from_fock(state: &FockVector, spec: &GridSpec) -> Result<WignerGrid> {
    spec.validate()?;
    // the state must live inside the grid in both representations
    let psi_edges = position_wavefunction(state, &[spec.x_min, spec.x_max]);
    if psi_edges.iter().any(|z| z.norm_sqr() > EDGE_DECAY) {
        return Err(Error::InsufficientExtent(format!(
            "position density exceeds {EDGE_DECAY:.0e} at the x extents"
        )));
    }
    let psi_tilde_edges = momentum_wavefunction(state, &[spec.p_min, spec.p_max]);
    if psi_tilde_edges.iter().any(|z| z.norm_sqr() > EDGE_DECAY) {
        return Err(Error::InsufficientExtent(format!(
            "momentum density exceeds {EDGE_DECAY:.0e} at the p extents"
        )));
    }

    // effective occupation bounds the state's own bandwidth in y
    let mut cumulative = 0.0;
    let mut n_eff = state.cutoff() - 1;
    let total: f64 = state.amplitudes().iter().map(|z| z.norm_sqr()).sum();
    for (n, z) in state.amplitudes().iter().enumerate() {
        cumulative += z.norm_sqr();
        if cumulative >= total * (1.0 - 1e-13) {
            n_eff = n;
            break;
        }
    }
    let p_state = (2.0 * (n_eff as f64 + 1.0)).sqrt();
    let p_abs = spec.p_min.abs().max(spec.p_max.abs());
    // keep the first Simpson alias (at pi/h) beyond the integrand bandwidth
    let bandwidth = 2.0 * p_abs + 2.0 * (p_state + 4.0);
    let h_rule = PI / bandwidth;
    let refine = (spec.dx() / h_rule).ceil().max(1.0) as usize;
    let h = spec.dx() / refine as f64;

    let n_fine = (spec.nx - 1) * refine + 1;
    let fine_xs: Vec<f64> = (0..n_fine).map(|j| spec.x_min + j as f64 * h).collect();
    let psi = position_wavefunction(state, &fine_xs);

    let m_half = n_fine - 1; // y spans [-(x_max - x_min), x_max - x_min]
    let la = 2 * m_half + 1;
    let weights = simpson_weights(la);
    let chi = 2.0 * spec.dp() * h;
    let engine = ChirpEngine::new(la, spec.np, chi);

    let mut values = Array2::zeros((spec.nx, spec.np));
    let mut column = vec![C64::new(0.0, 0.0); la];
    let prefactor = 2.0 / PI * h / 3.0;
    for i in 0..spec.nx {
        let fi = (i * refine) as i64;
        for (jp, slot) in column.iter_mut().enumerate() {
            let offset = jp as i64 - m_half as i64;
            let plus = fi + offset;
            let minus = fi - offset;
            *slot = if plus >= 0 && plus < n_fine as i64 && minus >= 0 && minus < n_fine as i64 {
                let g = psi[plus as usize] * psi[minus as usize].conj();
                // fold in the Simpson weight and the phase e^{-2i p_min j h};
                // together with the chirp factor e^{-i chi k j} this makes
                // e^{-2i P_k j h}, indexed from the start of the y window
                let ang = -2.0 * spec.p_min * jp as f64 * h;
                g * C64::from_polar(weights[jp] * prefactor, ang)
            } else {
                C64::new(0.0, 0.0)
            };
        }
        let transformed = engine.run(&column);
        // undo the index shift: y_j = (j - m_half) h contributed e^{-2iP k j h}
        // with j counted from zero, so multiply by e^{+2i P_k m_half h}
        for (k, t) in transformed.iter().enumerate() {
            let p_k = spec.p_min + k as f64 * spec.dp();
            let shift = C64::from_polar(1.0, 2.0 * p_k * m_half as f64 * h);
            values[(i, k)] = (t * shift).re;
        }
    }
    WignerGrid::from_parts(*spec, values)
}

/// Wigner function of a single-mode density matrix by spectral mixture:
/// eigendecompose `rho` and accumulate the pure-state Wigner functions of
/// eigenvectors with weight above 1e-14. O(cutoff) pure-state passes.
pub fn wigner_from_density(rho: &Array2<C64>, spec: &GridSpec) -> Result<WignerGrid> {
    let n = rho.nrows();
    if rho.ncols() != n {
        return Err(Error::InvalidState("density matrix must be square".into()));
    }
    let mut defect = 0.0f64;
    for i in 0..n {
        for j in i..n {
            defect = defect.max((rho[(i, j)] - rho[(j, i)].conj()).norm());
        }
    }
    if defect > 1e-12 {
        return Err(Error::InvalidState(format!(
            "density matrix is not Hermitian (defect {defect:.3e})"
        )));
    }
    let (weights, vectors) = linalg::eigh(rho)?;
    let mut total: Option<Array2<f64>> = None;
    for (k, &w) in weights.iter().enumerate() {
        if w < -1e-10 {
            return Err(Error::InvalidState(format!(
                "density matrix has negative eigenvalue {w:.3e}"
            )));
        }
        if w <= 1e-14 {
            continue;
        }
        let vector = FockVector::from_amplitudes((0..n).map(|i| vectors[(i, k)]).collect())?;
        let part = wigner_from_fock(&vector, spec)?;
        match &mut total {
            None => total = Some(part.values().mapv(|v| v * w)),
            Some(acc) => {
                acc.zip_mut_with(part.values(), |a, b| *a += w * b);
            }
        }
    }
    let values = total.ok_or_else(|| Error::InvalidState("density matrix has zero trace".into()))?;
    WignerGrid::from_parts(*spec, values)
}

/// State overlap from sampled Wigner functions:
/// `|<psi|phi>|^2 = (pi/2) int int W_1 W_2`. Both grids must share the exact
/// same sampling; for pure states the result lies in [0, 1] up to quadrature
/// error.
pub fn overlap_grid(w1: &WignerGrid, w2: &WignerGrid) -> Result<f64> {
    if w1.spec() != w2.spec() {
        return Err(Error::GridMismatch(format!(
            "{:?} vs {:?}",
            w1.spec(),
            w2.spec()
        )));
    }
    let product = w1.values() * w2.values();
    Ok(PI / 2.0 * simpson_2d(&product, w1.spec().dx(), w1.spec().dp()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{coherent_cutoff, FockMatrix, FockVector};
    use approx::assert_abs_diff_eq;

    fn vacuum_grid_spec() -> GridSpec {
        GridSpec::symmetric(6.5, 6.5, 131, 131).unwrap()
    }

    #[test]
    fn grid_spec_rejects_even_counts() {
        assert!(GridSpec::symmetric(6.0, 6.0, 128, 129).is_err());
        assert!(GridSpec::symmetric(6.0, 6.0, 129, 2).is_err());
        assert!(GridSpec::new(1.0, -1.0, -1.0, 1.0, 9, 9).is_err());
    }

    #[test]
    fn chirp_transform_matches_direct_sum() {
        let la = 47;
        let n_out = 23;
        let chi = 0.137;
        let a: Vec<C64> = (0..la)
            .map(|j| C64::new((j as f64 * 0.31).sin(), (j as f64 * 0.17).cos()))
            .collect();
        let engine = ChirpEngine::new(la, n_out, chi);
        let fast = engine.run(&a);
        for k in 0..n_out {
            let direct: C64 = a
                .iter()
                .enumerate()
                .map(|(j, &v)| v * C64::from_polar(1.0, -chi * (k * j) as f64))
                .sum();
            assert!((fast[k] - direct).norm() < 1e-10, "k={k}");
        }
    }

    #[test]
    fn hermite_functions_are_orthonormal() {
        // quadrature on a wide fine grid
        let n = 6;
        let xs: Vec<f64> = (0..2001).map(|i| -10.0 + i as f64 * 0.01).collect();
        let mut gram = [[0.0f64; 6]; 6];
        for &x in &xs {
            let phis = hermite_functions(n, x);
            for a in 0..n {
                for b in 0..n {
                    gram[a][b] += phis[a] * phis[b] * 0.01;
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let expected = if a == b { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(gram[a][b], expected, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn vacuum_wigner_matches_closed_form() {
        let spec = vacuum_grid_spec();
        let grid = wigner_from_fock(&FockVector::vacuum(12), &spec).unwrap();
        let xs = spec.xs();
        let ps = spec.ps();
        let mut worst = 0.0f64;
        for (i, &x) in xs.iter().enumerate() {
            for (k, &p) in ps.iter().enumerate() {
                let exact = 2.0 / PI * (-(x * x + p * p)).exp();
                worst = worst.max((grid.values()[(i, k)] - exact).abs());
            }
        }
        assert!(worst < 1e-8, "max deviation {worst:.3e}");
    }

    #[test]
    fn vacuum_normalisation_and_purity() {
        let spec = vacuum_grid_spec();
        let grid = wigner_from_fock(&FockVector::vacuum(12), &spec).unwrap();
        assert_abs_diff_eq!(grid.integral(), 2.0, epsilon = 1e-8);
        assert_abs_diff_eq!(overlap_grid(&grid, &grid).unwrap(), 1.0, epsilon = 1e-8);
    }

    #[test]
    fn cat_wigner_origin_value() {
        // independent of alpha at phi = 0: W(0,0) = 2/pi
        for &alpha in &[0.8, 1.7, 2.5] {
            let params = CatWignerParams { alpha: C64::new(alpha, 0.0), phi: 0.0 };
            assert_abs_diff_eq!(wigner_cat_at(&params, 0.0, 0.0), 2.0 / PI, epsilon = 1e-12);
        }
    }

    #[test]
    fn cat_wigner_zero_amplitude_is_vacuum() {
        let params = CatWignerParams { alpha: C64::new(0.0, 0.0), phi: 0.0 };
        for &(x, p) in &[(0.0f64, 0.0f64), (0.7, -0.3), (1.5, 2.0)] {
            let expected = 2.0 / PI * (-(x * x + p * p)).exp();
            assert_abs_diff_eq!(wigner_cat_at(&params, x, p), expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn cat_closed_form_matches_fock_reconstruction() {
        let alpha = 2.5f64;
        let params = CatWignerParams { alpha: C64::new(alpha, 0.0), phi: 0.0 };
        let spec = GridSpec::symmetric(
            std::f64::consts::SQRT_2 * alpha + 6.0,
            6.0,
            385,
            257,
        )
        .unwrap();
        let closed = wigner_cat(&params, &spec).unwrap();
        let state = FockVector::cat(alpha, 0.0, coherent_cutoff(alpha)).unwrap();
        let reconstructed = wigner_from_fock(&state, &spec).unwrap();
        let mut worst = 0.0f64;
        for i in 0..spec.nx {
            for k in 0..spec.np {
                worst = worst.max((closed.values()[(i, k)] - reconstructed.values()[(i, k)]).abs());
            }
        }
        assert!(worst < 1e-6, "max deviation {worst:.3e}");
    }

    #[test]
    fn cat_coverage_rule_enforced() {
        let params = CatWignerParams { alpha: C64::new(2.5, 0.0), phi: 0.0 };
        let spec = GridSpec::symmetric(6.0, 6.0, 129, 129).unwrap();
        assert!(matches!(
            wigner_cat(&params, &spec),
            Err(Error::InsufficientExtent(_))
        ));
    }

    #[test]
    fn squeezed_wigner_matches_fock_reconstruction() {
        let params = SqueezedWignerParams { r: 1.0, theta: std::f64::consts::PI };
        let spec = GridSpec::symmetric(18.0, 6.0, 361, 121).unwrap();
        let closed = wigner_squeezed(&params, &spec).unwrap();
        let state = FockVector::squeezed_vacuum(
            C64::from_polar(1.0, std::f64::consts::PI),
            96,
        )
        .unwrap();
        let reconstructed = wigner_from_fock(&state, &spec).unwrap();
        let mut worst = 0.0f64;
        for i in 0..spec.nx {
            for k in 0..spec.np {
                worst = worst.max((closed.values()[(i, k)] - reconstructed.values()[(i, k)]).abs());
            }
        }
        assert!(worst < 1e-6, "max deviation {worst:.3e}");
    }

    #[test]
    fn squeezed_position_marginal_variance() {
        // r = 2, theta = pi: position variance e^4 / 2
        let params = SqueezedWignerParams { r: 2.0, theta: std::f64::consts::PI };
        let x_half = 6.0 * (2.0f64).exp();
        let spec = GridSpec::symmetric(x_half, 1.0, 1201, 61).unwrap();
        let grid = wigner_squeezed(&params, &spec).unwrap();
        let marginal = grid.marginal_position();
        let xs = spec.xs();
        let wx = simpson_weights(spec.nx);
        let dx3 = spec.dx() / 3.0;
        let norm: f64 = marginal.iter().zip(&wx).map(|(m, w)| m * w).sum::<f64>() * dx3;
        let second: f64 = marginal
            .iter()
            .zip(&wx)
            .zip(&xs)
            .map(|((m, w), x)| m * w * x * x)
            .sum::<f64>()
            * dx3;
        assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(second, (4.0f64).exp() / 2.0, epsilon = 1e-6 * (4.0f64).exp());
    }

    #[test]
    fn squeezed_covariance_determinant_is_one() {
        for &(r, theta) in &[(0.0, 0.0), (1.3, 0.7), (2.0, std::f64::consts::PI)] {
            let params = SqueezedWignerParams { r, theta };
            assert_abs_diff_eq!(params.covariance_det(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn marginals_match_wavefunctions() {
        let state = FockVector::cat(1.5, 0.0, coherent_cutoff(1.5)).unwrap();
        let spec = GridSpec::symmetric(8.5, 8.5, 341, 341).unwrap();
        let grid = wigner_from_fock(&state, &spec).unwrap();

        let xs = spec.xs();
        let marginal_x = grid.marginal_position();
        let psi = position_wavefunction(&state, &xs);
        let mut worst = 0.0f64;
        for (m, w) in marginal_x.iter().zip(psi.iter()) {
            worst = worst.max((m - w.norm_sqr()).abs());
        }
        assert!(worst < 1e-6, "position marginal deviation {worst:.3e}");

        let ps = spec.ps();
        let marginal_p = grid.marginal_momentum();
        let psi_tilde = momentum_wavefunction(&state, &ps);
        let mut worst = 0.0f64;
        for (m, w) in marginal_p.iter().zip(psi_tilde.iter()) {
            worst = worst.max((m - w.norm_sqr()).abs());
        }
        assert!(worst < 1e-6, "momentum marginal deviation {worst:.3e}");
    }

    #[test]
    fn momentum_fringe_spacing_matches_delocalisation() {
        // fringes along P with period pi / dX_cat
        let alpha = 2.5f64;
        let params = CatWignerParams { alpha: C64::new(alpha, 0.0), phi: 0.0 };
        let delta_x_cat = std::f64::consts::SQRT_2 * alpha;
        let period = PI / delta_x_cat;
        let w0 = wigner_cat_at(&params, 0.0, 0.0);
        let w_half = wigner_cat_at(&params, 0.0, period / 2.0);
        let w_full = wigner_cat_at(&params, 0.0, period);
        assert!(w0 > 0.0 && w_half < 0.0);
        assert_abs_diff_eq!(w_full, w0 * (-(period * period)).exp(), epsilon = 1e-12);
    }

    #[test]
    fn displaced_cat_overlap_example() {
        // beta = 0.1i, alpha = 2.5: overlap e^{-0.01} cos^2(0.5) = 0.76249
        let alpha = 2.5f64;
        let beta = C64::new(0.0, 0.1);
        let params = CatWignerParams { alpha: C64::new(alpha, 0.0), phi: 0.0 };
        let spec = GridSpec::symmetric(
            std::f64::consts::SQRT_2 * alpha + 6.0,
            6.2,
            513,
            1339,
        )
        .unwrap();
        let original = wigner_cat(&params, &spec).unwrap();
        let displaced = wigner_cat_displaced(&params, beta, &spec).unwrap();
        let overlap = overlap_grid(&original, &displaced).unwrap();
        let closed = (-0.01f64).exp() * 0.5f64.cos().powi(2);
        assert_abs_diff_eq!(overlap, closed, epsilon = 2e-6);
        assert_abs_diff_eq!(closed, 0.762488, epsilon = 1e-6);

        // Fock cross-check of the same overlap
        let cutoff = coherent_cutoff(alpha);
        let cat = FockVector::cat(alpha, 0.0, cutoff).unwrap();
        let displaced_cat = FockMatrix::displacement(beta, cutoff).unwrap().apply(&cat);
        let fock_overlap = cat.inner(&displaced_cat).unwrap().norm_sqr();
        assert_abs_diff_eq!(overlap, fock_overlap, epsilon = 1e-6);
    }

    #[test]
    fn overlap_rejects_mismatched_grids() {
        let a = wigner_from_fock(&FockVector::vacuum(8), &vacuum_grid_spec()).unwrap();
        let other = GridSpec::symmetric(6.5, 6.5, 133, 131).unwrap();
        let b = wigner_from_fock(&FockVector::vacuum(8), &other).unwrap();
        assert!(matches!(overlap_grid(&a, &b), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn from_fock_rejects_insufficient_extent() {
        let state = FockVector::cat(2.5, 0.0, coherent_cutoff(2.5)).unwrap();
        let spec = GridSpec::symmetric(4.0, 6.0, 129, 129).unwrap();
        assert!(matches!(
            wigner_from_fock(&state, &spec),
            Err(Error::InsufficientExtent(_))
        ));
    }

    #[test]
    fn density_route_matches_pure_route() {
        let state = FockVector::coherent(C64::new(0.9, 0.4), 26).unwrap();
        let spec = GridSpec::symmetric(7.0, 7.0, 141, 141).unwrap();
        let pure = wigner_from_fock(&state, &spec).unwrap();
        let n = state.cutoff();
        let mut rho = Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                rho[(i, j)] = state.amplitudes()[i] * state.amplitudes()[j].conj();
            }
        }
        let mixed = wigner_from_density(&rho, &spec).unwrap();
        let mut worst = 0.0f64;
        for i in 0..spec.nx {
            for k in 0..spec.np {
                worst = worst.max((pure.values()[(i, k)] - mixed.values()[(i, k)]).abs());
            }
        }
        assert!(worst < 1e-9, "max deviation {worst:.3e}");
    }

    #[test]
    fn auto_grids_follow_resolution_rule() {
        let spec = auto_grid_for_cat(C64::new(2.5, 0.0));
        let rate = BASE_SAMPLES_PER_UNIT * (2.0 * std::f64::consts::SQRT_2 * 2.5 / PI);
        assert!(spec.nx % 2 == 1 && spec.np % 2 == 1);
        assert!((spec.nx - 1) as f64 >= (spec.x_max - spec.x_min) * rate - 2.0);
        let vac = auto_grid_for_squeezed(&SqueezedWignerParams { r: 0.0, theta: 0.0 });
        assert!(vac.nx >= 64 * 12 && vac.np >= 64 * 12);
    }
}
