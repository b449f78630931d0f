//! Two-mode Gaussian states under the bilinear coupling `H = lambda X_A X_B`:
//! covariance-matrix evolution in closed form, partial transposition,
//! symplectic spectra, and the logarithmic negativity.
//!
//! Quadrature ordering is `(X_A, P_A, X_B, P_B)` throughout, with `[X, P] = i`
//! and the vacuum covariance equal to the identity (matrix entries are twice
//! the symmetrised second moments).

use crate::error::{Error, Result};
use crate::scenario::ScenarioConfig;
use nalgebra::{Matrix4, Vector4};

/// Tolerance on `|sigma - sigma^T|` for accepting a covariance matrix.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Slack on the physicality bound `nu_min >= 1`, absorbing float drift over
/// long evolutions.
pub const PHYSICALITY_TOL: f64 = 1e-10;

/// The symplectic form `Omega` of two modes, `Omega_ij = -i [r_i, r_j]`:
/// block diagonal with `(0, 1; -1, 0)` blocks in the `(X, P)` pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticForm(Matrix4<f64>);

impl SymplecticForm {
    pub fn standard() -> Self {
        let mut m = Matrix4::zeros();
        for mode in 0..2 {
            m[(2 * mode, 2 * mode + 1)] = 1.0;
            m[(2 * mode + 1, 2 * mode)] = -1.0;
        }
        SymplecticForm(m)
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }
}

impl Default for SymplecticForm {
    fn default() -> Self {
        Self::standard()
    }
}

/// A two-mode Gaussian state: real symmetric 4x4 covariance matrix plus a
/// displacement 4-vector, both dimensionless.
///
/// [`GaussianTwoModeState::new`] enforces symmetry and physicality
/// (`nu_min >= 1 - PHYSICALITY_TOL`). The one construction path that may
/// legitimately leave the physical cone is [`partial_transpose`], whose
/// output exists only to be fed to [`symplectic_eigenvalues`].
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianTwoModeState {
    sigma: Matrix4<f64>,
    displacement: Vector4<f64>,
}

impl GaussianTwoModeState {
    pub fn new(sigma: Matrix4<f64>, displacement: Vector4<f64>) -> Result<Self> {
        check_symmetric(&sigma)?;
        let nu = symplectic_eigenvalues(&sigma)?;
        if nu[0] < 1.0 - PHYSICALITY_TOL {
            return Err(Error::NonPhysical { nu_min: nu[0] });
        }
        Ok(Self { sigma, displacement })
    }

    /// Both modes in vacuum: `sigma = I`, zero displacement.
    pub fn vacuum() -> Self {
        Self {
            sigma: Matrix4::identity(),
            displacement: Vector4::zeros(),
        }
    }

    /// Uncorrelated modes with common position variance `delta_x2` and
    /// momentum variance `delta_p2`:
    /// `sigma = diag(2 dX^2, 2 dP^2, 2 dX^2, 2 dP^2)`.
    pub fn from_spreads(delta_x2: f64, delta_p2: f64) -> Result<Self> {
        if !(delta_x2 > 0.0) || !(delta_p2 > 0.0) {
            return Err(Error::InvalidState(format!(
                "variances must be positive (got dX^2={delta_x2}, dP^2={delta_p2})"
            )));
        }
        let sigma = Matrix4::from_diagonal(&Vector4::new(
            2.0 * delta_x2,
            2.0 * delta_p2,
            2.0 * delta_x2,
            2.0 * delta_p2,
        ));
        Self::new(sigma, Vector4::zeros())
    }

    pub fn sigma(&self) -> &Matrix4<f64> {
        &self.sigma
    }

    pub fn displacement(&self) -> &Vector4<f64> {
        &self.displacement
    }

    /// Symplectic spectrum of this state's covariance matrix, ascending.
    pub fn symplectic_spectrum(&self) -> Result<[f64; 2]> {
        symplectic_eigenvalues(&self.sigma)
    }

    fn check_physical(&self) -> Result<()> {
        let nu = self.symplectic_spectrum()?;
        if nu[0] < 1.0 - PHYSICALITY_TOL {
            return Err(Error::NonPhysical { nu_min: nu[0] });
        }
        Ok(())
    }
}

/// Generator of the Heisenberg flow for `H = lambda X_A X_B`:
/// `d<r>/dt = K <r>` with `K[P_A, X_B] = K[P_B, X_A] = -lambda/hbar` and all
/// other entries zero. `K^2 = 0` for this coupling.
#[derive(Debug, Clone, Copy)]
pub struct CouplingGenerator {
    k: Matrix4<f64>,
    lambda_over_hbar: f64,
}

impl CouplingGenerator {
    /// Build from the coupling rate `lambda / hbar` in 1/s.
    pub fn new(lambda_over_hbar: f64) -> Self {
        let mut k = Matrix4::zeros();
        k[(1, 2)] = -lambda_over_hbar;
        k[(3, 0)] = -lambda_over_hbar;
        Self { k, lambda_over_hbar }
    }

    pub fn from_scenario(scenario: &ScenarioConfig) -> Result<Self> {
        Ok(Self::new(scenario.coupling()?.lambda_over_hbar))
    }

    pub fn k_matrix(&self) -> &Matrix4<f64> {
        &self.k
    }

    pub fn lambda_over_hbar(&self) -> f64 {
        self.lambda_over_hbar
    }
}

fn check_symmetric(sigma: &Matrix4<f64>) -> Result<()> {
    let mut worst = 0.0f64;
    for i in 0..4 {
        for j in (i + 1)..4 {
            worst = worst.max((sigma[(i, j)] - sigma[(j, i)]).abs());
        }
    }
    if worst > SYMMETRY_TOL {
        return Err(Error::NotSymmetric {
            max_asymmetry: worst,
            tolerance: SYMMETRY_TOL,
        });
    }
    Ok(())
}

/// Matrix exponential of a real 4x4 matrix by scaling and squaring with a
/// diagonal Pade(6,6) approximant.
pub fn expm4(a: &Matrix4<f64>) -> Matrix4<f64> {
    let norm = a.iter().fold(0.0f64, |acc, x| acc + x.abs()); // crude upper bound on ||A||
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a / 2f64.powi(squarings as i32);

    const C: [f64; 7] = [
        1.0,
        0.5,
        5.0 / 44.0,
        1.0 / 66.0,
        1.0 / 792.0,
        1.0 / 15_840.0,
        1.0 / 665_280.0,
    ];
    let mut power = Matrix4::identity();
    let mut numer = Matrix4::identity() * C[0];
    let mut denom = Matrix4::identity() * C[0];
    let mut sign = 1.0;
    for &c in C.iter().skip(1) {
        power *= scaled;
        sign = -sign;
        numer += power * c;
        denom += power * (sign * c);
    }
    let mut result = denom
        .try_inverse()
        .expect("Pade denominator of a scaled matrix is invertible")
        * numer;
    for _ in 0..squarings {
        result = result * result;
    }
    result
}

/// Evolve a state for time `t` (seconds, negative allowed) under the bilinear
/// coupling: `sigma(t) = e^{Kt} sigma e^{K^T t}`, displacement mapped by
/// `e^{Kt}`.
///
/// The propagator always goes through the general matrix exponential; because
/// `K^2 = 0` here, the closed form `I + Kt` is used as a cross-check and the
/// two must agree to 1e-13.
pub fn evolve(
    state: &GaussianTwoModeState,
    generator: &CouplingGenerator,
    t_seconds: f64,
) -> Result<GaussianTwoModeState> {
    state.check_physical()?;
    let kt = generator.k_matrix() * t_seconds;
    let propagator = expm4(&kt);
    if (kt * kt).iter().all(|x| *x == 0.0) {
        let fast = Matrix4::identity() + kt;
        let dev = (propagator - fast).iter().fold(0.0f64, |m, x| m.max(x.abs()));
        assert!(
            dev <= 1e-13,
            "general matrix exponential disagrees with the nilpotent fast path ({dev:.3e})"
        );
    }
    let sigma = propagator * state.sigma * propagator.transpose();
    // exact symmetrisation; the product is symmetric up to rounding
    let sigma = (sigma + sigma.transpose()) * 0.5;
    let displacement = propagator * state.displacement;
    Ok(GaussianTwoModeState { sigma, displacement })
}

/// Partial transposition with respect to mode B: momentum sign flip
/// `sigma -> P sigma P`, `P = diag(1, 1, 1, -1)`. Applying it twice is the
/// identity. The result may be non-physical; that is the point.
pub fn partial_transpose(state: &GaussianTwoModeState) -> GaussianTwoModeState {
    let p = Matrix4::from_diagonal(&Vector4::new(1.0, 1.0, 1.0, -1.0));
    GaussianTwoModeState {
        sigma: p * state.sigma * p,
        displacement: p * state.displacement,
    }
}

/// Partial transposition with respect to mode A instead
/// (`P = diag(1, -1, 1, 1)`); yields the same logarithmic negativity.
pub fn partial_transpose_mode_a(state: &GaussianTwoModeState) -> GaussianTwoModeState {
    let p = Matrix4::from_diagonal(&Vector4::new(1.0, -1.0, 1.0, 1.0));
    GaussianTwoModeState {
        sigma: p * state.sigma * p,
        displacement: p * state.displacement,
    }
}

/// Symplectic eigenvalues of a symmetric 4x4 matrix: the two distinct
/// absolute eigenvalues of `i Omega sigma` (each doubly degenerate),
/// ascending.
pub fn symplectic_eigenvalues(sigma: &Matrix4<f64>) -> Result<[f64; 2]> {
    check_symmetric(sigma)?;
    let m = SymplecticForm::standard().matrix() * sigma;
    let eigenvalues = m.complex_eigenvalues();
    let mut magnitudes: Vec<f64> = eigenvalues.iter().map(|z| z.norm()).collect();
    magnitudes.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    // the raw spectrum is (nu1, nu1, nu2, nu2); average the pairs
    Ok([
        0.5 * (magnitudes[0] + magnitudes[1]),
        0.5 * (magnitudes[2] + magnitudes[3]),
    ])
}

/// Logarithmic negativity of a physical two-mode Gaussian state:
/// `E_N = max(0, -log2 nu_min)` with `nu_min` the smallest symplectic
/// eigenvalue of the partially transposed covariance matrix.
pub fn log_negativity_gaussian(state: &GaussianTwoModeState) -> Result<f64> {
    state.check_physical()?;
    let transposed = partial_transpose(state);
    let nu = symplectic_eigenvalues(&transposed.sigma)?;
    Ok((-nu[0].log2()).max(0.0))
}

/// Closed-form `nu_min^2` of the partially transposed covariance after
/// evolving `sigma = diag(2 dX^2, 2 dP^2, 2 dX^2, 2 dP^2)` to interaction
/// strength `eta = dX^2 lambda t / hbar`:
///
/// `nu_min^2 = 4 dX^2 dP^2 + 8 eta (eta - sqrt(dX^2 dP^2 + eta^2))`.
pub fn nu_min_squared_bilinear(delta_x2: f64, delta_p2: f64, eta: f64) -> f64 {
    let s = delta_x2 * delta_p2;
    4.0 * s + 8.0 * eta * (eta - (s + eta * eta).sqrt())
}

/// Leading-order logarithmic negativity of a pure initial state,
/// `E_N = 2 eta / ln 2`.
pub fn log_negativity_small_eta(eta: f64) -> f64 {
    2.0 * eta / std::f64::consts::LN_2
}

/// Entangling rate of the Gaussian configuration,
/// `dE_N/dt = 2 lambda dX^2 / (hbar ln 2) = 4 G M_A M_B dx^2 / (hbar D^3 ln 2)`,
/// for a physical position spread `delta_x_m` in metres.
///
/// Computed through the coupling constant and the dimensionless spread, so it
/// shares no arithmetic with the cat-state rate it must match.
pub fn entangling_rate_gaussian(scenario: &ScenarioConfig, delta_x_m: f64) -> Result<f64> {
    if !(scenario.separation > 0.0) {
        return Err(Error::InvalidScenario(format!(
            "separation must be positive (got {} m)",
            scenario.separation
        )));
    }
    if scenario.mass_a < 0.0 || scenario.mass_b < 0.0 {
        return Err(Error::InvalidScenario("masses must be nonnegative".into()));
    }
    if delta_x_m < 0.0 {
        return Err(Error::InvalidScenario("position spread must be nonnegative".into()));
    }
    let lambda = 2.0 * scenario.gravitational_constant * scenario.mass_a * scenario.mass_b
        * scenario.length_scale
        * scenario.length_scale
        / scenario.separation.powi(3);
    let delta_x_dimensionless = scenario.dimensionless_spread(delta_x_m);
    Ok(2.0 * lambda * delta_x_dimensionless * delta_x_dimensionless
        / (scenario.hbar * std::f64::consts::LN_2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn pure_state() -> GaussianTwoModeState {
        GaussianTwoModeState::from_spreads(0.5, 0.5).unwrap()
    }

    /// Evolve to a given interaction strength eta with unit lambda/hbar.
    fn evolved(delta_x2: f64, delta_p2: f64, eta: f64) -> GaussianTwoModeState {
        let state = GaussianTwoModeState::from_spreads(delta_x2, delta_p2).unwrap();
        let generator = CouplingGenerator::new(1.0);
        evolve(&state, &generator, eta / delta_x2).unwrap()
    }

    #[test]
    fn omega_squares_to_minus_identity() {
        let omega = SymplecticForm::standard();
        let sq = omega.matrix() * omega.matrix();
        assert_eq!(sq, -Matrix4::<f64>::identity());
    }

    #[test]
    fn zero_generator_leaves_state_unchanged() {
        let state = GaussianTwoModeState::from_spreads(1.3, 0.7).unwrap();
        let out = evolve(&state, &CouplingGenerator::new(0.0), 17.0).unwrap();
        assert_eq!(out.sigma(), state.sigma());
    }

    #[test]
    fn evolved_covariance_matches_closed_form() {
        // lambda t / hbar = 0.1 on the two-mode vacuum
        let state = pure_state();
        let out = evolve(&state, &CouplingGenerator::new(1.0), 0.1).unwrap();
        let s = out.sigma();
        assert_abs_diff_eq!(s[(0, 3)], -0.1, epsilon = 1e-14);
        assert_abs_diff_eq!(s[(3, 0)], -0.1, epsilon = 1e-14);
        assert_abs_diff_eq!(s[(1, 2)], -0.1, epsilon = 1e-14);
        assert_abs_diff_eq!(s[(1, 1)], 1.01, epsilon = 1e-14);
        assert_abs_diff_eq!(s[(3, 3)], 1.01, epsilon = 1e-14);
        assert_abs_diff_eq!(s[(0, 0)], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s[(2, 2)], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn evolution_reverses() {
        let state = GaussianTwoModeState::from_spreads(2.0, 0.5).unwrap();
        let generator = CouplingGenerator::new(0.8);
        let there = evolve(&state, &generator, 3.0).unwrap();
        let back = evolve(&there, &generator, -3.0).unwrap();
        let dev = (back.sigma() - state.sigma())
            .iter()
            .fold(0.0f64, |m, x| m.max(x.abs()));
        assert!(dev < 1e-12, "round trip deviation {dev:.3e}");
    }

    #[test]
    fn partial_transpose_properties() {
        let diagonal = GaussianTwoModeState::from_spreads(1.0, 2.0).unwrap();
        assert_eq!(partial_transpose(&diagonal).sigma(), diagonal.sigma());

        let state = evolved(0.5, 0.5, 0.2);
        let c = state.sigma()[(0, 3)];
        assert!(c != 0.0);
        let pt = partial_transpose(&state);
        assert_eq!(pt.sigma()[(0, 3)], -c);
        let back = partial_transpose(&pt);
        assert_eq!(back.sigma(), state.sigma());
    }

    #[test]
    fn symplectic_eigenvalues_of_vacuum_and_squeezed() {
        let nu = symplectic_eigenvalues(&Matrix4::identity()).unwrap();
        assert_abs_diff_eq!(nu[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(nu[1], 1.0, epsilon = 1e-12);

        // local squeezing of mode A leaves the spectrum at (1, 1)
        let r = 1.0f64;
        let squeezed = Matrix4::from_diagonal(&Vector4::new(
            (2.0 * r).exp(),
            (-2.0 * r).exp(),
            1.0,
            1.0,
        ));
        let nu = symplectic_eigenvalues(&squeezed).unwrap();
        assert_abs_diff_eq!(nu[0], 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(nu[1], 1.0, epsilon = 1e-10);
    }

    #[test]
    fn symplectic_eigenvalues_reject_asymmetry() {
        let mut m = Matrix4::identity();
        m[(0, 1)] = 1e-6;
        assert!(matches!(
            symplectic_eigenvalues(&m),
            Err(Error::NotSymmetric { .. })
        ));
    }

    #[test]
    fn nu_min_matches_closed_form_spot_checks() {
        for &(dx2, dp2, eta) in &[
            (0.5, 0.5, 0.01),
            (0.5, 0.5, 0.3),
            (1.0, 1.0, 0.6),
            (2.0, 0.125, 0.05),
            (0.25, 1.0, 0.11),
        ] {
            let state = evolved(dx2, dp2, eta);
            let nu = symplectic_eigenvalues(&partial_transpose(&state).sigma()).unwrap();
            let expected = nu_min_squared_bilinear(dx2, dp2, eta);
            let rel = ((nu[0] * nu[0] - expected) / expected).abs();
            assert!(rel < 1e-12, "dx2={dx2} dp2={dp2} eta={eta}: rel dev {rel:.3e}");
        }
    }

    #[test]
    fn log_negativity_of_vacuum_is_zero() {
        assert_eq!(log_negativity_gaussian(&GaussianTwoModeState::vacuum()).unwrap(), 0.0);
    }

    #[test]
    fn log_negativity_pure_small_eta() {
        let eta = 0.01;
        let state = evolved(0.5, 0.5, eta);
        let e_n = log_negativity_gaussian(&state).unwrap();
        let exact = -0.5 * nu_min_squared_bilinear(0.5, 0.5, eta).log2();
        assert_abs_diff_eq!(e_n, exact, epsilon = 1e-13);
        // 0.028853...; the linear-rate form is good to O(eta^2)
        assert_abs_diff_eq!(e_n, log_negativity_small_eta(eta), epsilon = 1e-4);
        assert_abs_diff_eq!(e_n, 0.028853, epsilon = 5e-6);
    }

    #[test]
    fn mixed_state_threshold_at_three_quarters() {
        // dX = dP = 1: no entanglement below eta = 3/4, entanglement above
        for &eta in &[0.1, 0.5, 0.7, 0.745] {
            let state = evolved(1.0, 1.0, eta);
            assert_eq!(log_negativity_gaussian(&state).unwrap(), 0.0, "eta={eta}");
        }
        for &eta in &[0.755, 0.8, 1.5] {
            let state = evolved(1.0, 1.0, eta);
            assert!(log_negativity_gaussian(&state).unwrap() > 0.0, "eta={eta}");
        }
        // the closed form puts the root exactly at 3/4
        assert_abs_diff_eq!(nu_min_squared_bilinear(1.0, 1.0, 0.75), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn transposing_either_mode_gives_same_negativity() {
        let state = evolved(0.5, 0.5, 0.37);
        let nu_b = symplectic_eigenvalues(&partial_transpose(&state).sigma()).unwrap();
        let nu_a = symplectic_eigenvalues(&partial_transpose_mode_a(&state).sigma()).unwrap();
        assert_abs_diff_eq!(nu_a[0], nu_b[0], epsilon = 1e-12);
    }

    #[test]
    fn log_negativity_rejects_nonphysical_input() {
        let bad = partial_transpose(&evolved(0.5, 0.5, 0.4));
        assert!(matches!(
            log_negativity_gaussian(&bad),
            Err(Error::NonPhysical { .. })
        ));
    }

    #[test]
    fn rate_zero_mass_and_scaling() {
        let mut scenario = ScenarioConfig::new(1e-14, 1e-14, 1e-4, 2e-7, 1e-7);
        let rate = entangling_rate_gaussian(&scenario, 1e-7).unwrap();
        assert!(rate > 0.0);

        scenario.mass_a = 0.0;
        scenario.mass_b = 0.0;
        assert_eq!(entangling_rate_gaussian(&scenario, 1e-7).unwrap(), 0.0);

        scenario.separation = 0.0;
        assert!(entangling_rate_gaussian(&scenario, 1e-7).is_err());
    }

    #[test]
    fn rate_inverse_cube_scaling_is_exact() {
        let near = ScenarioConfig::new(1e-14, 1e-14, 1e-4, 2e-7, 1e-7);
        let far = ScenarioConfig::new(1e-14, 1e-14, 2e-4, 2e-7, 1e-7);
        let r_near = entangling_rate_gaussian(&near, 1e-7).unwrap();
        let r_far = entangling_rate_gaussian(&far, 1e-7).unwrap();
        assert_eq!(r_near / r_far, 8.0);
    }

    #[test]
    fn rate_matches_finite_difference_slope() {
        let scenario = ScenarioConfig::new(1e-14, 1e-14, 1e-4, 2e-7, 1e-7);
        let delta_x_m = 1e-7;
        let rate = entangling_rate_gaussian(&scenario, delta_x_m).unwrap();

        let coupling = scenario.coupling().unwrap();
        let delta_x = scenario.dimensionless_spread(delta_x_m);
        let delta_x2 = delta_x * delta_x;
        // pick t so that eta = dX^2 lambda t / hbar = 1e-5
        let t = 1e-5 / (delta_x2 * coupling.lambda_over_hbar);
        let state = GaussianTwoModeState::from_spreads(delta_x2, 0.25 / delta_x2).unwrap();
        let generator = CouplingGenerator::from_scenario(&scenario).unwrap();
        let e_n = log_negativity_gaussian(&evolve(&state, &generator, t).unwrap()).unwrap();
        let slope = e_n / t;
        let rel = ((slope - rate) / rate).abs();
        assert!(rel < 1e-3, "slope off by {rel:.2e}");
    }

    #[test]
    fn general_exponential_agrees_with_nilpotent_fast_path() {
        let generator = CouplingGenerator::new(0.35);
        let kt = generator.k_matrix() * 2.2;
        let fast = Matrix4::identity() + kt;
        let dev = (expm4(&kt) - fast).iter().fold(0.0f64, |m, x| m.max(x.abs()));
        assert!(dev < 1e-13);
    }

    #[test]
    fn expm4_matches_series_on_generic_matrix() {
        let a = Matrix4::new(
            0.2, -0.1, 0.05, 0.0, //
            0.3, 0.1, 0.0, -0.2, //
            0.0, 0.25, -0.15, 0.1, //
            0.05, 0.0, 0.2, 0.05,
        );
        let mut series = Matrix4::identity();
        let mut term = Matrix4::identity();
        for k in 1..30 {
            term = term * a / (k as f64);
            series += term;
        }
        let dev = (expm4(&a) - series).iter().fold(0.0f64, |m, x| m.max(x.abs()));
        assert!(dev < 1e-14, "dev {dev:.3e}");
    }

    /// Random physical covariance matrices via reverse Williamson:
    /// `sigma = S diag(nu1, nu1, nu2, nu2) S^T` with `S = exp(Omega Q)`
    /// symplectic for symmetric `Q`.
    fn random_physical(q_entries: [f64; 10], nu1: f64, nu2: f64) -> GaussianTwoModeState {
        let mut q = Matrix4::zeros();
        let mut idx = 0;
        for i in 0..4 {
            for j in i..4 {
                q[(i, j)] = q_entries[idx];
                q[(j, i)] = q_entries[idx];
                idx += 1;
            }
        }
        let s = expm4(&(SymplecticForm::standard().matrix() * q));
        let d = Matrix4::from_diagonal(&Vector4::new(nu1, nu1, nu2, nu2));
        let sigma = s * d * s.transpose();
        let sigma = (sigma + sigma.transpose()) * 0.5;
        GaussianTwoModeState::new(sigma, Vector4::zeros()).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn evolution_preserves_physicality_and_purity(
            q in proptest::array::uniform10(-0.6..0.6f64),
            nu1 in 1.0..2.5f64,
            nu2 in 1.0..2.5f64,
            rate in -1.0..1.0f64,
            t in -3.0..3.0f64,
        ) {
            let state = random_physical(q, nu1, nu2);
            let out = evolve(&state, &CouplingGenerator::new(rate), t).unwrap();
            let nu = out.symplectic_spectrum().unwrap();
            prop_assert!(nu[0] >= 1.0 - PHYSICALITY_TOL);
            let det_before = state.sigma().determinant();
            let det_after = out.sigma().determinant();
            prop_assert!(((det_after - det_before) / det_before).abs() < 1e-10);
        }

        #[test]
        fn partial_transpose_is_involutive(
            q in proptest::array::uniform10(-0.6..0.6f64),
            nu1 in 1.0..2.5f64,
            nu2 in 1.0..2.5f64,
        ) {
            let state = random_physical(q, nu1, nu2);
            let twice = partial_transpose(&partial_transpose(&state));
            prop_assert_eq!(twice.sigma(), state.sigma());
        }
    }
}
