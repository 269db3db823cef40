//! Exact generalised geometry on polynomial coordinate charts.
//!
//! The crate builds, bottom-up, the objects needed to study T-duality as a
//! relation between Courant algebroids:
//!
//! * [`exterior`] — polynomial vector fields, forms, frames and
//!   diffeomorphisms with exact Cartan calculus;
//! * [`courant`] — the `H`-twisted standard Courant algebroid, `B`-field
//!   transforms and classical isomorphisms;
//! * [`genmetric`] — generalised metrics `(g, b)` and their transverse
//!   (degenerate) versions;
//! * [`reduction`] — frame-generated isotropic subbundles and reduction;
//! * [`fiber`] — pointwise exact linear algebra of relations;
//! * [`tduality`] — the relation `R`, the topological and geometric
//!   conditions and the Buscher rules;
//! * [`para`] — para-Hermitian frames, fluxes and the para-Buscher rules;
//! * [`workbench`] — JSON problem and report documents and the packaged
//!   lens-space, Heisenberg and circle examples.
//!
//! Every computation is exact over the rationals; checks are zero tests.

pub mod chart;
pub mod courant;
pub mod error;
pub mod exterior;
pub mod fiber;
pub mod genmetric;
pub mod linalg;
pub mod para;
pub mod poly;
pub mod polymat;
pub mod rational;
pub mod reduction;
pub mod sampling;
pub mod tduality;
pub mod workbench;

pub use chart::Chart;
pub use error::{GeomError, Result};
pub use exterior::{DiffeoMap, Form, Frame, VectorField};
pub use linalg::QMat;
pub use poly::Poly;
pub use polymat::PolyMat;
pub use rational::Q;
