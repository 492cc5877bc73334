pub mod addchow;
pub mod drw;
pub mod error;
pub mod forms;
pub mod json;
pub mod milnorfield;
pub mod relmilnor;
pub mod sample;
pub mod scalars;
pub mod trunc;
pub mod verify;
pub mod witt;

pub use error::{Error, Result};
