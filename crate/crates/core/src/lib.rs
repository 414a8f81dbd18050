//! Certified evaluation of Hardy–Littlewood maximal functions of distribution
//! functions of self-similar measures, with the covering and gap machinery
//! used to detach the maximal function from the function itself.

pub mod cantor;
pub mod covering;
pub mod dimension;
pub mod enclosure;
pub mod error;
pub mod gaps;
pub mod maximal;
pub mod measures;
pub mod rational;
pub mod verify;

pub use dimension::Dimension;
pub use enclosure::Enclosure;
pub use error::{Error, Result};
pub use measures::{node_budget, parse_measure, sum_measures, AffineMap, CylinderInterval, IFSMeasure, MeasureSum};
pub use rational::{parse_rational, Rational};
