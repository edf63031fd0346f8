//! The tridiagonal GUE model: sampling, Monte-Carlo cumulants, and exact
//! checks of the tree expansions at small sizes.

mod expansion;
mod tridiag;

pub use expansion::{
    build_fh, build_fh_blocks, cull_closed_form, cull_sets, expansion_term, fh_covariance, kill_zero_leading,
    maintool_check, motzkin_assignments, random_maintool_instance, redux_conditions, refined_expansion_check, CullSets,
    MainToolCheck, RefinedExpansion,
};
pub use tridiag::{
    mc_cumulant, pairwise_sum, sample_tridiagonal, sample_tridiagonal_with, McEstimate, TridiagonalSample,
};
