//! Seeded instance generators and checkers for the toric inequalities.

mod batch;
mod checks;
mod generate;

pub use batch::{
    parse_seed_range, run_batch, run_manifest, BatchOptions, Manifest, ManifestEntry, STATEMENTS,
};
pub use checks::{
    check_alpha_t_mixed, check_concave_integral, check_loss_mixed, check_loss_product, check_loss_single,
    check_monte_carlo, check_ratio_monotone, check_res_vol_lower_bound, check_slice_lower_bound,
    monte_carlo_volume, reproduce_count_su, count_su_simplex, MonteCarlo, MC_SIGMAS,
};
pub use generate::{
    random_concave_function, random_nested_pair, random_polytope, random_primitive, random_rational,
    random_subbody, random_toric_data, random_toric_data_on, rng_for, InstanceSpec,
};
