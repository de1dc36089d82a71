//! Exact computations with vector fields, differential forms and Lie algebra
//! cochains on the torus `T^N` and on affine space `R^N`.

pub mod cochain;
pub mod cocycles;
pub mod error;
pub mod extension;
pub mod fields;
pub mod forms;
pub mod harness;
pub mod lie;
pub mod linalg;
pub mod rational;
pub mod report;
pub mod ring;
pub mod sampling;
pub mod weil;

pub use error::{Error, Result};
pub use fields::{MatrixFunction, VectorField};
pub use forms::{FormClass, PForm, Subset};
pub use rational::Rational;
pub use report::{CheckReport, Status, Witness};
pub use ring::{Model, MultiIndex, RingElement};
