//! Theorem-level checks. Each side of a statement is computed as a submodule of a coordinate
//! space of truncated forms and the two are compared exactly.
//!
//! Precision: a scenario's `N` bounds coefficient degree in the conventional basis; the
//! computation runs below weight `N + q` (optionally more) and dimensions are reported on the
//! coordinates of coefficient degree below `N`.

pub mod chain;
pub mod compare;
pub mod decompose;
pub mod lemma3;
pub mod report;
pub mod thm1;
pub mod thm2;

pub use chain::{chain_kernel, Factor};
pub use compare::{comparison_subspaces, explore, explore_report, verify_strict_inclusions, Comparison, ExploreBounds, ExploreRow, Sheaf};
pub use decompose::{express_as_dlog_products, verify_decompose, DlogFactorization, DlogTerm, Factorizer};
pub use lemma3::{decompose_graded, verify_lemma3_grid, u_filtration, verify_lemma3_cell, GradedDecomposition, GradedSolver};
pub use report::{ModelParams, SubResult, VerificationReport, Witness};
pub use thm1::{
    log_part_lhs, log_part_lhs_at, milnor_rhs_span, rhs_span_thm1, rhs_span_thm1_at, verify_appendix_b, verify_bgk_n1,
    verify_ses_finv, verify_thm1, Thm1Options,
};
pub use thm2::{thm2_generators, thm2_modules, verify_cor1, verify_cor1_divisor, verify_thm2_divisor, verify_thm2_restricted, Thm2Generator};

use crate::error::Result;
use crate::forms::{mask_mono, non_log, GradedSpace, LogForm};
use crate::modlin::{Ring, Subspace};

/// A submodule of a [`GradedSpace`].
#[derive(Clone, Debug)]
pub struct FormSubspace {
    pub ring: Ring,
    pub space: GradedSpace,
    pub sub: Subspace,
}

impl FormSubspace {
    pub fn dim(&self) -> usize {
        self.sub.rank()
    }

    pub fn contains(&self, f: &LogForm) -> Result<bool> {
        self.sub.contains(&self.space.vector(f)?)
    }

    pub fn form(&self, v: &[u32]) -> LogForm {
        self.space.form(self.ring, v)
    }

    pub fn basis_forms(&self) -> Vec<LogForm> {
        self.sub.rows().iter().map(|r| self.form(r)).collect()
    }

    /// Coordinates of coefficient degree below `n` in the basis with log poles on `[0, e)`.
    pub fn spec_coords(&self, n: u32, e: usize) -> Vec<usize> {
        (0..self.space.dim())
            .filter(|&k| {
                let (m, s) = self.space.basis(k);
                let nl = non_log(s, e);
                m.divisible_by(&mask_mono(nl)) && m.degree() < n + nl.count_ones()
            })
            .collect()
    }

    pub fn dim_below(&self, n: u32, e: usize) -> Result<usize> {
        Ok(self.sub.project(&self.spec_coords(n, e))?.rank())
    }
}
