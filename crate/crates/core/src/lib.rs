//! Exact classification toolkit for first-class filiform Leibniz algebras.

pub mod action;
pub mod algebra;
pub mod linalg;
pub mod oracle;
pub mod sample;
pub mod scalar;
pub mod strata;
pub mod verify;
