//! Golden-coded index coding for the 2×2 MIMO broadcast channel.

pub mod algebra;
pub mod analysis;
pub mod codec;
pub mod error;
pub mod gaussian;
pub mod lattice;
pub mod partition;
pub mod search;
pub mod sim;
pub mod verify;
pub mod zmat;

pub use error::{Error, Result};
pub use gaussian::GaussianInteger;
