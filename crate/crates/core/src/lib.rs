pub mod arrangement;
pub mod comalg;
pub mod correlator;
pub mod error;
pub mod exactmath;
pub mod numcheck;
pub mod weyl;

pub use arrangement::Arrangement;
pub use error::{Error, Result};
pub use exactmath::{QMatrix, QPoly, Rational, ZPoly};
