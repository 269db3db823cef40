//! Exterior calculus over polynomial coefficients: vector fields, forms,
//! frames and coordinate diffeomorphisms.

pub mod diffeo;
pub mod form;
pub mod frame;
pub mod vector;

pub use diffeo::DiffeoMap;
pub use form::{lie_derivative_vector, Form, IndexRef};
pub use frame::{increasing_tuples, Frame};
pub use vector::VectorField;
