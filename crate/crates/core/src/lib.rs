//! Exact configuration counting on the finite-field plane `F_q²`.
//!
//! The crate counts unit distances, parallelograms with a prescribed side
//! length and rhombi in subsets of `F_q²` (q an odd prime), evaluates the
//! Fourier-analytic expansions of those counts, checks the accompanying
//! inequalities on concrete instances, and computes the VC dimension of the
//! distance set-system `{N(x) : x ∈ E}` together with a constructive
//! three-point shattering witness.
//!
//! Every count is an exact integer produced by two independent routes (a
//! brute-force oracle and a fast method); the spectral route is a
//! floating-point cross-check that must land on the same integer.
//!
//! ```
//! use ffplane::{counting, Method, Plane, PointSet};
//!
//! let plane = Plane::new(3).unwrap();
//! let full = PointSet::full(&plane);
//! let t = plane.field().element(1);
//! let par = counting::count_par_t(&plane, [&full, &full, &full, &full], t, Method::Fast).unwrap();
//! assert_eq!(par.value, 324);
//! ```

pub mod bounds;
pub mod cli;
pub mod counting;
pub mod error;
pub mod field;
pub mod fourier;
pub mod geometry;
pub mod rng;
pub mod vc;

pub use counting::{CountResult, Method};
pub use error::{Error, Result};
pub use field::{FieldElement, PrimeField};
pub use geometry::{Plane, Point, PointSet};

/// Complex values used for characters and Fourier coefficients.
pub type ComplexValue = num_complex::Complex64;

/// Absolute tolerance for identities between complex character sums.
pub const COMPLEX_TOL: f64 = 1e-9;

/// Maximum distance from an integer a floating-point count may have.
pub const COUNT_TOL: f64 = 1e-6;
