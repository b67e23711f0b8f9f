//! Exact two-round point placement on a line.

pub mod algorithm;
pub mod atlas;
pub mod conditions;
pub mod dot;
pub mod error;
pub mod experiment;
pub mod io;
pub mod lowerbound;
pub mod model;
pub mod oracle;
pub mod rational;
pub mod rigidity;

pub use error::{Error, Result};
pub use model::{canonicalize, Placement, PointId, Ppg, QueryEdge, Role, Round, ValenceState};
pub use rational::Rational;
