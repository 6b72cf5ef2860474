//! Topological invariants of the Milnor fibers: Milnor numbers (two
//! independent routes), local and global Euler characteristics, Hurwitz
//! fiber surfaces over the resolution subgraphs, and the gluing bookkeeping
//! joining the two local fibers into the global one.

mod chi;
mod hurwitz;
mod milnor;

pub use chi::{chi_global, chi_local};
pub use hurwitz::{glue_report, hurwitz_fiber, FiberComponent, FiberSurface, GlueData, Provenance};
pub use milnor::{generic_member_mu, milnor_number, GenericMu, MilnorMethod};
