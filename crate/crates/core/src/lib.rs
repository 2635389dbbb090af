#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod extremal;
pub mod integrals;
pub mod phi;
pub mod quadrature;
pub mod radius;
pub mod report;
pub mod series;
pub mod verify;

pub use error::BohrError;
pub use phi::{PhiFamily, PhiSpec};
pub use series::TruncatedSeries;
