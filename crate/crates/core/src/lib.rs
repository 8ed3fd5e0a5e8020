pub mod backlund;
pub mod error;
pub mod hyp1f1;
pub mod jets;
pub mod oscillator;
pub mod painleve;
pub mod residual;
pub mod susy;

pub use error::{Error, Result};
