//! Bound verifiers. Each check evaluates both sides of an inequality on a
//! concrete instance and returns a [`BoundReport`] with the slack.

mod constants;
mod report;
mod suite;
mod verify;

pub use constants::{
    compute_l, constants_table, exp_taylor, g, l_lower_certificate, l_product, schrijver_constant, vdw_from_g,
    vdw_product, ConstantsRow, LValue,
};
pub use report::{digest, is_violation, BoundReport, Verdict, VIOLATION_TOLERANCE};
pub use suite::{run_suite, SUITES};
pub use verify::{
    cf_midpoint, der_midpoint_deficit, verify_cf_logconcavity, verify_exchange, verify_exp_waer,
    verify_inner_product, verify_main_thm, verify_monomial_bounds, verify_newton_multivariate, verify_schrijver,
    Decomposition, Function, MainKind, NewtonKind,
};
