//! Toric varieties, toric morphisms, line bundle cohomology and higher direct images.

pub mod builtin;
pub mod cohomology;
pub mod contract;
pub mod cox;
pub mod error;
pub mod fan;
pub mod frobenius;
pub mod hdi;
pub mod json;
pub mod lattice;
pub mod linalg;
pub mod maps;
pub mod variety;

pub use error::{Result, ToricError};
pub use fan::{Fan, SubFan};
pub use lattice::LatticeBox;
pub use maps::{KernelCharacterData, ToricMorphism};
pub use variety::{DivisorClass, TDivisor, ToricVariety};
