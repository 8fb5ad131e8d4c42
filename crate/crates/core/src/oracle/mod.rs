//! Brute-force permutation-group ground truth for small finite abelian groups.
//!
//! Everything here works on the element index space of a [`FiniteGroup`] and never
//! consults the ring classification.

mod aut;
mod finite;
mod holomorph;
mod perm;
mod regular;

pub use aut::{automorphism_count, automorphism_maps, for_each_automorphism, DEFAULT_AUT_LIMIT};
pub use finite::{FiniteGroup, HARD_MAX_ORDER};
pub use holomorph::{
    enumerate_holomorph, full_symmetric_normalizer, holomorph_generators, rho, NormalizerReport,
    DEFAULT_HOL_LIMIT, DEFAULT_SYM_LIMIT,
};
pub use perm::{Perm, PermGroup};
pub use regular::{
    abelian_invariant_factors, compute_h_and_t, enumerate_k, enumerate_k_equivariant,
    enumerate_k_literal, enumerate_normal_regular, HtReport, KMember, OracleConfig,
    RegularSubgroup, SearchPath,
};

use thiserror::Error;

use crate::group::GroupError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("subgroup closure exceeded {limit} elements")]
    ClosureBound { limit: usize },
    #[error("automorphism group exceeds {limit} elements")]
    AutBound { limit: u64 },
    #[error("holomorph of order {order} exceeds the bound {limit}")]
    HolBound { order: u128, limit: u128 },
    #[error("full symmetric scan needs |G| <= {limit}, got {order}")]
    SymBound { order: usize, limit: usize },
    #[error("regular subgroup is not abelian: {0}")]
    NonAbelian(String),
    #[error("oracle consistency failure: {0}")]
    Inconsistent(String),
}

impl OracleError {
    /// True for failures caused by a size limit rather than a wrong answer.
    pub fn is_bound(&self) -> bool {
        matches!(
            self,
            OracleError::ClosureBound { .. }
                | OracleError::AutBound { .. }
                | OracleError::HolBound { .. }
                | OracleError::SymBound { .. }
                | OracleError::Group(GroupError::OrderBound { .. })
                | OracleError::Group(GroupError::Infinite)
        )
    }
}
