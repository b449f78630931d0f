//! Continuous-variable toolkit for studying how two mechanical modes become
//! entangled under a weak bilinear coupling such as gravity, and how that
//! entangling rate relates to the force sensitivity of the states involved.
//!
//! The crate is organised around three redundant descriptions of the same
//! physics, which are cross-checked against each other throughout the test
//! suite:
//!
//! - [`gaussian`]: two-mode Gaussian states as 4x4 covariance matrices,
//!   evolved in closed form and scored with the logarithmic negativity via
//!   symplectic eigenvalues.
//! - [`fock`]: truncated number-basis vectors and operators. Slow but exact
//!   at the given cutoff; serves as the brute-force oracle for everything
//!   else, including non-Gaussian (cat and squeezed-cat) states.
//! - [`phase_space`]: Wigner functions on sampled grids, with closed forms
//!   for cat and squeezed states, reconstruction from Fock data, and overlap
//!   integrals.
//!
//! [`sensing`] collects the protocol-level results built on those layers:
//! gravitational phase build-up, displaced-state overlaps, and the
//! entangling-rate comparison between Gaussian and cat-state configurations.
//! [`scenario`] holds the physical-parameter record and performs the single
//! conversion from SI quantities to the dimensionless coupling used
//! everywhere else.
//!
//! Quadrature convention: dimensionless operators with `[X, P] = i`, vacuum
//! covariance equal to the identity (diagonal entries are twice the
//! variances), and Wigner functions normalised so the full phase-space
//! integral is 2. All functions are pure; every public type is an immutable
//! value, so concurrent use needs no synchronisation. The dense linear
//! algebra backend honours `OPENBLAS_NUM_THREADS`.

pub mod error;
pub mod fock;
pub mod gaussian;
pub mod linalg;
pub mod phase_space;
pub mod scenario;
pub mod sensing;

pub use error::{Error, Result};
pub use scenario::{CouplingStrength, ScenarioConfig};
