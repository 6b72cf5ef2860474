//! Exact tameness verdicts (semitameness via the resolution graph,
//! (i)-tameness of suspensions via Jacobian containment) and the numeric
//! probes of the non-transversality locus and of the rank matrix.

pub mod numeric;
mod probe;
mod verdicts;

pub use probe::{a_matrix, m_locus_probe, AMatrixResult, ProbeConfig, ProbeSample};
pub use verdicts::{itame_suspension, semitame, semitame_from_graph, TameProperty, TameVerdict};
