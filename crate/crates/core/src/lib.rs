//! Decide whether a polynomial dynamical system on the positive orthant is
//! generated by a weakly reversible deficiency-one mass-action system, and
//! build one when it is.
//!
//! The input is the pair `(Y_s, W)`: distinct monomial exponents (source
//! vertices) as columns of `Y_s`, and the coefficient vector of each
//! monomial as the matching column of `W`, so that `dx/dt = W x^{Y_s}`.
//! All arithmetic is exact.

pub mod cone;
pub mod error;
pub mod gen;
pub mod lp;
pub mod network;
pub mod ratmat;
pub mod wr_def_one;
pub mod wr_single;

pub use cone::{extreme_rays, extreme_rays_bruteforce, GeneratorKind, Ray};
pub use error::{Error, Result};
pub use gen::{generate, GenSpec, TargetType};
pub use network::{
    net_reaction_data, structure_report, EGraph, MassActionSystem, NetReactionData, StructureReport,
};
pub use ratmat::{RatMatrix, RatVector, Rational};
pub use wr_def_one::{realize_def_one, verify_outcome, Flag, RealizationOutcome, RealizationType};
pub use wr_single::{realize_single_class, SingleClassOutcome};
