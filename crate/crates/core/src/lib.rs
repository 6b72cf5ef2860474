//! Exact and numerical analysis of meromorphic plane-curve germs `F = f/g`.
//!
//! Given two coprime polynomial germs `f, g` vanishing at the origin of the
//! plane, this crate decides the tameness conditions that govern the Milnor
//! fibrations of `F` (semitameness via the resolution graph, (i)-tameness of
//! the suspension via Jacobian-curve containment), and computes the
//! topological invariants of the local and global Milnor fibers: Milnor
//! numbers by two independent routes, Euler characteristics, fiber surfaces
//! over the resolution subgraphs, and the gluing data joining the two local
//! fibers into the global one. A numerical module transports tube fibers to
//! the sphere along an explicitly constructed vector field and checks the
//! monotonicity properties of that flow.
//!
//! The exact layer works over arbitrary-precision rationals and explicit
//! algebraic extension towers; the numerical layer uses IEEE doubles with
//! pinned tolerances and a seeded RNG so that every run is reproducible.

pub mod error;
pub mod exact;
pub mod flow;
pub mod invariants;
pub mod parallel;
pub mod puiseux;
pub mod report;
pub mod resolution;
pub mod tameness;

pub use error::Error;
pub use exact::bipoly::BiPoly;
pub use exact::parse::parse_poly;
pub use exact::rat::Rat;
