//! Free field OPEs on the rank two lattice `Zβ₊ ⊕ Zβ₋` of signature (1, 1).

mod checks;
mod contract;
mod expand;
mod field;
mod generators;
mod lattice;

pub use checks::{
    check_fs_match, check_howe_commutation, check_kernel_membership, check_null,
    check_null_relations, derivative_rule_mismatch, expected_weight, f_closed_form_p5,
    null_relations, primary_check, singlet_vector, skew_symmetry_mismatch, skew_transform,
    virasoro_central_charge, CheckEntry, Composites, PrimaryCheck, Report,
};
pub use contract::{pair_contraction, w_factor_vs_vertex, z_factor_vs_vertex};
pub use expand::{mode_coefficient, normal_order, ope, screening_apply, OpeExpansion};
pub use field::{Factor, FieldExpr, FieldTerm, Monomial};
pub use generators::{make_generators, Generators};
pub use lattice::{
    cocycle, d_lattice_coords, integral_pairing, pairing, Alphas, Dir, LatticeVector, Momentum,
};
