//! Cheeger sets, the cut-locus potential and explicit calibration fields for
//! planar convex domains, plus closed-form radial and one-dimensional
//! free-boundary solvers.
//!
//! ```
//! use cutlocus_core::{cheeger::solve_cheeger, geom2d::Domain};
//!
//! let square = Domain::unit_square();
//! let c = solve_cheeger(&square).unwrap();
//! assert!((c.h - (2.0 + std::f64::consts::PI.sqrt())).abs() < 1e-9);
//! ```

pub mod error;
pub mod exec;
pub mod calibration;
pub mod cheeger;
pub mod config;
pub mod cutlocus;
pub mod geom2d;
pub mod io;
pub mod oned;
pub mod radial_disk;

pub use error::{Error, Result};
pub use exec::ExecMode;
