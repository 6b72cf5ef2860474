//! Newton polygon and Puiseux-branch machinery: fractional-power expansions
//! of curve germs at the origin and germ-level containment tests.

mod branch;
mod newton;
mod subset;

pub use branch::{puiseux_branches, BranchTerm, PuiseuxBranch};
pub use newton::{newton_polygon, NewtonPolygon, NewtonSegment};
pub use subset::{contact_order, germ_subset, Contact, SubsetVerdict};
