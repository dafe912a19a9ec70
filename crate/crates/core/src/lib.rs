pub mod error;
pub mod field;
pub mod matrix;
pub mod poly;
pub mod upoly;

pub use error::{Error, Result};
pub mod proj;
pub mod quartic;
pub mod umbral;
pub mod binary;
pub mod curve;
pub mod contravariant;
pub mod series;
pub mod census;
pub mod delpezzo;
pub mod zeta;
pub mod theta;
pub mod heis;
pub mod wahl;
