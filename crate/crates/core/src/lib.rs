//! Exact computations with modules over Iwasawa algebras.
//!
//! The crate is organised bottom-up:
//!
//! * [`padic`]: `Z/p^K` with explicit precision.
//! * [`zpoly`]: exact integer polynomials, the input format that lets every
//!   driver re-reduce at a larger precision.
//! * [`lambda`]: `Z_p[[X]]` truncated polynomials and series, Weierstrass
//!   division and preparation, resultant valuations.
//! * [`oracle`]: Smith normal form over `Z/p^K` and certified orders and
//!   ranks of finite presentations.
//! * [`gamma`]: modules over the one-variable algebra and their
//!   coinvariant growth.
//! * [`multivar`]: quotients `M/A_m(S)` over the several-variable algebra.
//! * [`skew`]: modules over the skew group ring of `Z_p^{d-1} x| Z_p`.
//! * [`asymptotics`]: exact integer fitting of growth laws.

pub mod asymptotics;
pub mod corpus;
pub mod error;
pub mod exec;
pub mod gamma;
pub mod lambda;
pub mod linalg;
pub mod multivar;
pub mod oracle;
pub mod padic;
pub mod serial;
pub mod skew;
pub mod zpoly;

pub use error::{Error, Level, Result};
pub use exec::Exec;
pub use padic::{Ctx, PadicInt, PrimeContext, Valuation};
pub use zpoly::ZPoly;
