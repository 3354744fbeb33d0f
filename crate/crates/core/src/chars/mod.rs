//! Characters of the singlet, triplet, lattice and affine sl(2) modules at
//! levels `-1/2` and `-4/3`, and a verifier for the branching identities
//! relating them.

mod families;
mod params;
mod quotient;
mod recipe;
mod registry;

pub use families::{flow_weights, max_coefficient, IrrLabel, SumPolicy, Truncation};
pub use params::ModelParams;
pub use quotient::{EtaQuotient, Numerator};
pub use recipe::{
    character, fock_char, heis_lorentz_char, irr_affine_char, lattice_char, singlet_char,
    singlet_graded_dims, standard_affine_char, triplet_char, Affine, CharLabel, Partner, Recipe,
};
pub use registry::{
    identities, identity, verify_branching, verify_case, BranchResult, Case, Identity,
};
