//! Oriented Khovanov homology of link diagrams, computed with exact integer
//! arithmetic.

pub mod algebra;
pub mod bracket;
pub mod complex;
pub mod corpus;
pub mod diagram;
pub mod homology;
pub mod matrix;
pub mod resolution;

pub use bracket::LaurentPoly;
pub use diagram::{parse_pd, DiagramError, LinkDiagram, Sign};
