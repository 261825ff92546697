//! Twist-operator correlation functions of the O(n) loop model, the SLE₈/₃
//! winding probabilities built from them, numerical checks of the
//! differential equations and monodromy behind the closed forms, and a
//! chordal SLE Monte Carlo engine to test the probabilities directly.

pub mod correlators;
pub mod error;
pub mod geometry;
pub mod mc;
pub mod ode;
pub mod params;
pub mod special;
pub mod stats;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{Anchors, Point, WindingCoords};
pub use mc::{EmpiricalWinding, SimConfig, Side, TrackedPoint};
pub use ode::{MonodromyResult, OdeSpec};
pub use stats::GofReport;
pub use params::ModelParams;
pub use num_complex::Complex64;
