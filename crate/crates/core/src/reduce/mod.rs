//! The reductions of the equivalence cycle, one [`OnlineSolver`] per link.
//!
//! [`OnlineSolver`]: crate::solver::OnlineSolver

pub mod bmmp;
pub mod eq_from_bool;
pub mod folklore;
pub mod minmax_from_dom;

pub use bmmp::BmmpFromEq;
pub use eq_from_bool::{EqFromBool, FrequencyTable};
pub use folklore::{BoolFromBmmp, BoolFromMinWit, DomFromEq, MinWitFromMinMax, RankMap};
pub use minmax_from_dom::MinMaxFromDom;
