//! Counting block derangements `E(n_1, ..., n_S)`: the maximal number of totally
//! mixed Nash equilibria of a generic game, several exact ways to compute it,
//! bounds on the number of all equilibria, and asymptotic estimates.

pub mod asymptotics;
pub mod error;
pub mod hypergeo;
pub mod kernel;
pub mod laguerre;
pub mod master;
pub mod method;
pub mod nash;
pub mod oeis;
pub mod oracle;
pub mod poly;
pub mod recurrences;

pub use error::{Error, Result};
pub use kernel::{binomial, factorial, multinomial, ExactCount, Profile, Rational};
pub use method::{e, Method};
