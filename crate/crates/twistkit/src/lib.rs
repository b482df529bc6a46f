pub mod atlas;
pub mod chains;
pub mod curves;
pub mod error;
pub mod homo;
pub mod model;
pub mod ribbon;
pub mod suite;
pub mod surface;
pub mod twists;
pub mod window;
pub mod word;

pub use atlas::Atlas;
pub use curves::Curve;
pub use error::{Error, Result};
pub use twists::MappingClass;
