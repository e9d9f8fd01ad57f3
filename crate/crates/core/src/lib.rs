//! Arithmetic groups in `SL(n,Z)` and `Sp(n,Z)`: density, arithmeticity and
//! the level and index of the closure in the congruence topology.

pub mod arith;
pub mod config;
pub mod density;
pub mod error;
pub mod families;
pub mod gammas;
pub mod group;
pub mod intmat;
pub mod level;
pub mod modgroup;
pub mod primeset;

pub use config::Config;
pub use error::{Error, Result};
pub use gammas::{Ambient, Kind};
pub use group::{GroupSpec, Transvection};
pub use intmat::{GroupWord, IntMatrix, RationalSpan};
pub use modgroup::{delta, DeltaMemo, LayeredChain, ResidueMatrix};
