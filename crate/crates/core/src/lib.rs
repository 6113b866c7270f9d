//! Bivariate copula toolkit: copula families, margins, Sklar-style joint
//! models, samplers, dependence measures, rank statistics, and parameter
//! estimation.
//!
//! ```
//! use copulakit_core::copulas::CopulaFamily;
//! use copulakit_core::dependence::kendall_tau;
//! use copulakit_core::sampling::{sample_copula, RandomSource};
//!
//! let clayton = CopulaFamily::clayton(2.0).unwrap();
//! assert!((kendall_tau(&clayton).unwrap() - 0.5).abs() < 1e-15);
//!
//! let mut src = RandomSource::new(42);
//! let pairs = sample_copula(&mut src, &clayton, 1000).unwrap();
//! assert_eq!(pairs.len(), 1000);
//! ```

pub mod copulas;
pub mod dependence;
pub mod empirical;
pub mod error;
pub mod estimation;
pub mod exec;
pub mod margins;
pub mod numerics;
pub mod sampling;

pub use copulas::{ArchimedeanGenerator, CopulaFamily, JointModel};
pub use error::{Error, Result};
pub use margins::Margin;
pub use sampling::{PseudoObservationPair, RandomSource};
