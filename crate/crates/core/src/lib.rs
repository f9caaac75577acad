//! Numerical invariants of finite topological spaces — LS-category of maps,
//! sequential topological complexity, simplicial (co)homology, cup-product
//! bounds, cohomological dimension of free-abelian homomorphisms — together
//! with exhaustive audits of their behavior under retraction squares.

pub mod chains;
pub mod corpus;
pub mod covers;
pub mod error;
pub mod grouphom;
pub mod homotopy;
pub mod linalg;
pub mod products;
pub mod report;
pub mod retracts;
pub mod setcover;
pub mod snf;
pub mod space;

pub use error::{Error, Result};
