pub mod error;
pub mod fields;
pub mod io;
pub mod mollify;
pub mod spectral;
pub mod trkal;
