//! Experiment drivers: stability-region sweeps, GLM benchmarks and the
//! verification suite.

mod bench;
mod region;
mod verify;

pub use bench::{
    decade_etas, glm_bench, BenchReport, BenchRow, BenchSummary, GlmBenchConfig, StartPoint,
};
pub use region::{region_sweep, GridRange, RegionCell, RegionGrid, RegionSweepConfig};
pub use verify::{
    check_acceleration, check_duality, check_glm_bench, check_implicit_solver,
    check_invariant_domination, check_reductions, check_region, check_sgdm_window,
    check_tau_threshold, check_tstep_decay, fitted_decay_ratio, gd_band_violations, region_config,
    run_check, verify_suite, CheckResult, Golden, VerifyConfig, VerifyReport, CHECK_COUNT,
};
