//! Coordinates, the standard symplectic form, shapes and samplers.
//!
//! Phase points of `R^{2n}` are stored as `(x_1, ..., x_n, y_1, ..., y_n)`.
//! With that order the form is `omega(u, v) = u^T J v` for
//! `J = [[0, I], [-I, 0]]`. Every other module relies on this convention.

mod parse;
mod point;
mod sample;
mod shape;

pub use parse::parse_shape;
pub use point::{form_eval, standard_j, PhasePoint, SymplecticForm};
pub use sample::{sample, sample_point, CounterRng, SampleMode, SampleSpec};
pub use shape::{contains, includes, scale_shape, volume, Factor, ShapeDescriptor};
