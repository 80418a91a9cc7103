pub mod ambient;
pub mod error;
pub mod gauss;
pub mod invariants;
pub mod metric;
pub mod monge;
pub mod renorm;
pub mod series;
pub mod surface;
pub mod tw;
pub mod tw3;

pub use error::{Error, Result};
pub use gauss::GaussRational;
pub use series::{MultiSeries, Vars};
