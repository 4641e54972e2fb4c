//! Hilbert-valued measures of finite total variation: finite windows, their
//! distribution functions, approximation schemes and global (whole-line) families.

mod approx;
mod finite;
mod global;
mod nonatomic;
mod polar;
mod vector;

pub use approx::{delta_approximation, mollify, project_tail, regularity_gap, RegularityKind};
pub use finite::{Atom, Node, Segment, VectorMeasure};
pub use global::{AsymptoticProfile, Family, GlobalMeasure, SpikeTrain};
pub use nonatomic::{equi_integrability_modulus, wna_modulus, wna_profile, WnaProfile, WNA_THRESHOLD};
pub use polar::{polar_decompose, Polar};
pub use vector::HilbertVector;
