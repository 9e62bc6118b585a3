//! Dimensions of planar linear systems with multiple base points, and
//! certificates of non-speciality built by cutting lattice diagrams.

pub mod cli;
pub mod cutting;
pub mod diagram;
pub mod homogeneous;
pub mod interp;
pub mod negcurve;
