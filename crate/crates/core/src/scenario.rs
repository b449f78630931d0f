//! Physical-parameter record for a two-body experiment and the single place
//! where SI quantities are converted to the dimensionless coupling used by
//! the state-level modules.

use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

/// CODATA 2018 Newtonian constant of gravitation, m^3 kg^-1 s^-2.
pub const GRAVITATIONAL_CONSTANT_SI: f64 = 6.674_30e-11;
/// Reduced Planck constant, J s.
pub const HBAR_SI: f64 = 1.054_571_817e-34;

/// Parameters of one experimental configuration, in SI units.
///
/// Two bodies of mass `mass_a` and `mass_b` sit a distance `separation`
/// apart along the axis that also carries their delocalisation.
/// `superposition_distance` is the spatial splitting of a cat-like
/// preparation, `length_scale` the arbitrary reference length that maps
/// physical positions to dimensionless quadratures (`x = length_scale * X`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub mass_a: f64,
    pub mass_b: f64,
    /// Centre-to-centre separation D, m. Must exceed `superposition_distance`.
    pub separation: f64,
    /// Superposition splitting d, m. Zero means no cat preparation.
    pub superposition_distance: f64,
    /// Reference length x0, m.
    pub length_scale: f64,
    pub gravitational_constant: f64,
    pub hbar: f64,
    /// Sample times, s, sorted and nonnegative.
    pub time_grid: Vec<f64>,
}

impl ScenarioConfig {
    /// A configuration with CODATA constants and an empty time grid.
    pub fn new(mass_a: f64, mass_b: f64, separation: f64, superposition_distance: f64, length_scale: f64) -> Self {
        Self {
            mass_a,
            mass_b,
            separation,
            superposition_distance,
            length_scale,
            gravitational_constant: GRAVITATIONAL_CONSTANT_SI,
            hbar: HBAR_SI,
            time_grid: Vec::new(),
        }
    }

    pub fn with_time_grid(mut self, times: Vec<f64>) -> Self {
        self.time_grid = times;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mass_a > 0.0) || !(self.mass_b > 0.0) {
            return Err(Error::InvalidScenario(format!(
                "masses must be positive (got {} kg, {} kg)",
                self.mass_a, self.mass_b
            )));
        }
        if !(self.separation > 0.0) {
            return Err(Error::InvalidScenario(format!(
                "separation must be positive (got {} m)",
                self.separation
            )));
        }
        if !(self.superposition_distance >= 0.0) {
            return Err(Error::InvalidScenario(format!(
                "superposition distance must be nonnegative (got {} m)",
                self.superposition_distance
            )));
        }
        if self.superposition_distance >= self.separation {
            return Err(Error::InvalidScenario(format!(
                "superposition distance {} m must stay below the separation {} m",
                self.superposition_distance, self.separation
            )));
        }
        if !(self.length_scale > 0.0) {
            return Err(Error::InvalidScenario(format!(
                "length scale must be positive (got {} m)",
                self.length_scale
            )));
        }
        if !(self.gravitational_constant > 0.0) || !(self.hbar > 0.0) {
            return Err(Error::InvalidScenario(
                "physical constants must be positive".into(),
            ));
        }
        let mut prev = 0.0f64;
        for (k, &t) in self.time_grid.iter().enumerate() {
            if !(t >= 0.0) {
                return Err(Error::InvalidScenario(format!(
                    "time grid entry {k} is negative ({t} s)"
                )));
            }
            if t < prev {
                return Err(Error::InvalidScenario(format!(
                    "time grid is not sorted at entry {k}"
                )));
            }
            prev = t;
        }
        Ok(())
    }

    /// The one SI-to-dimensionless conversion point: the bilinear coupling
    /// `lambda = 2 G M_A M_B x0^2 / D^3` and its rate `lambda / hbar`.
    pub fn coupling(&self) -> Result<CouplingStrength> {
        self.validate()?;
        let lambda = 2.0 * self.gravitational_constant * self.mass_a * self.mass_b
            * self.length_scale
            * self.length_scale
            / self.separation.powi(3);
        Ok(CouplingStrength {
            lambda,
            lambda_over_hbar: lambda / self.hbar,
        })
    }

    /// Dimensionless position spread corresponding to a physical spread in m.
    pub fn dimensionless_spread(&self, delta_x_m: f64) -> f64 {
        delta_x_m / self.length_scale
    }

    /// Physical position spread of the cat preparation, `d / 2` in m.
    pub fn cat_position_spread(&self) -> f64 {
        self.superposition_distance / 2.0
    }

    /// Coherent amplitude that puts the cat branches at `+-d/2`:
    /// `alpha = d / (2 sqrt(2) x0)`.
    pub fn cat_alpha(&self) -> f64 {
        self.superposition_distance / (2.0 * std::f64::consts::SQRT_2 * self.length_scale)
    }

    /// Whether the small-splitting regime `d << D` holds (d below 10% of D).
    pub fn small_splitting_regime(&self) -> bool {
        self.superposition_distance < 0.1 * self.separation
    }
}

/// Bilinear coupling strength produced by [`ScenarioConfig::coupling`].
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CouplingStrength {
    /// lambda, J.
    pub lambda: f64,
    /// lambda / hbar, 1/s.
    pub lambda_over_hbar: f64,
}

impl CouplingStrength {
    /// Dimensionless interaction angle `theta = lambda t / hbar`.
    pub fn theta(&self, t_seconds: f64) -> f64 {
        self.lambda_over_hbar * t_seconds
    }

    /// Displacement imprinted on one mode when the other sits at the
    /// dimensionless position `x_other`: `beta = -i theta x_other / sqrt(2)`,
    /// purely imaginary.
    pub fn displacement_param(&self, x_other: f64, t_seconds: f64) -> C64 {
        C64::new(0.0, -self.theta(t_seconds) * x_other / std::f64::consts::SQRT_2)
    }
}
