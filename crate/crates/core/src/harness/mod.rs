//! Random generators and executable contracts.
//!
//! [`check_all`] runs the five suites; every report is a pure function of
//! the configuration.

mod checks;
pub mod gen;
mod report;

pub use checks::{
    branch, check_all, check_disquotation, check_spec_diff, check_spec_factor, check_spec_norm_rat_expr,
    check_spec_norm_rat_fun, singular_candidates, trial_division, DIFF_POINTS_PER_TERM, DIFF_SAMPLE_RANGE,
    RANDOM_POINTS_PER_FUN, TRIAL_DIVISION_LIMIT,
};
pub use gen::{
    gen_diff_expr, gen_numeral, gen_rat_expr, gen_rat_fun, well_scaled, Gen, MAX_SUBTERM_MAGNITUDE,
};
pub use report::{BranchStats, Report};

use crate::error::{KernelError, Result};

/// Generator settings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenConfig {
    pub seed: u64,
    /// Nesting depth of generated operator trees, before sugar.
    pub max_depth: u32,
    /// Bound on numerators and denominators of generated literals.
    pub coeff_bound: i64,
    /// Positive cases per check.
    pub cases: usize,
}

impl Default for GenConfig {
    fn default() -> GenConfig {
        GenConfig { seed: 1, max_depth: 6, coeff_bound: 12, cases: 500 }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_depth < 1 || self.cases < 1 || self.coeff_bound < 1 {
            return Err(KernelError::PredicateViolation(
                "need max_depth >= 1, cases >= 1 and coeff_bound >= 1".into(),
            ));
        }
        Ok(())
    }
}

/// The suites runnable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Factor,
    NormExpr,
    NormFun,
    Diff,
    Disquote,
    All,
}

impl std::str::FromStr for Suite {
    type Err = KernelError;

    fn from_str(s: &str) -> Result<Suite> {
        Ok(match s {
            "factor" => Suite::Factor,
            "norm-expr" => Suite::NormExpr,
            "norm-fun" => Suite::NormFun,
            "diff" => Suite::Diff,
            "disquote" => Suite::Disquote,
            "all" => Suite::All,
            _ => return Err(KernelError::PredicateViolation(format!("unknown suite {s:?}"))),
        })
    }
}

pub fn run_suite(suite: Suite, cfg: &GenConfig) -> Vec<Report> {
    match suite {
        Suite::Factor => vec![check_spec_factor(cfg)],
        Suite::NormExpr => vec![check_spec_norm_rat_expr(cfg)],
        Suite::NormFun => vec![check_spec_norm_rat_fun(cfg)],
        Suite::Diff => vec![check_spec_diff(cfg)],
        Suite::Disquote => vec![check_disquotation(cfg)],
        Suite::All => check_all(cfg),
    }
}
