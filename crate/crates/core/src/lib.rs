pub mod expr;
pub mod quad;
pub mod measure;
pub mod spectral;
pub mod transforms;
pub mod circle;
pub mod verify;
