//! Odd arc algebras over the integers: construction from chronological
//! cobordism data, odd centers, the odd Springer cohomology of the
//! `(n,n)`-variety, quasialgebra associators and cocycle twists.

pub mod arc;
pub mod center;
pub mod chronology;
pub mod coeff;
pub mod diagram;
pub mod even;
pub mod exterior;
pub mod linalg;
pub mod quasi;
pub mod springer;
pub mod tqft;
