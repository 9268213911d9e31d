//! Exact computations with restricted sl2 representations: indecomposable
//! module constructions, local Jordan types over the projective line, graded
//! kernels and images of the associated global operators, splitting types of
//! the resulting sheaves, and Heller shifts.

pub mod fi;
pub mod field;
pub mod matrix;
pub mod nullcone;
pub mod graded;
pub mod heller;
pub mod partition;
pub mod poly;
pub mod report;
pub mod sl2;
pub mod theta;
pub mod verify;
