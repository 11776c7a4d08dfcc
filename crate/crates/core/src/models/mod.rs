//! Concrete systems: a manufactured neutral DDE with a known solution, the
//! lunar-like rotation problem and its forcing orbit.

pub mod kepler;
pub mod lunar;
pub mod manufactured;
pub mod params;

pub use kepler::{solve_kepler, KeplerOrbit};
pub use lunar::{LunarModel, LunarParams};
pub use manufactured::ManufacturedDde;
pub use params::KeyValues;
