//! Exact invariants of products of Hilbert schemes of points on surfaces.

mod bigser;
pub mod cli;
pub mod decision;
pub mod error;
pub mod invariants;
pub mod partitions;
pub mod scanner;
pub mod series;
pub mod surfaces;

pub use error::{Error, Result};
pub use partitions::{Majorization, Partition};
pub use series::{Exponent, TruncatedSeries};
pub use surfaces::{Catalog, StructuralClass, SurfaceInvariants};
