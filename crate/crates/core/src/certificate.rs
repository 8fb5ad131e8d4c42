//! Oracle certificates: every member of `K(G)` with its permutations, its recovered ring and,
//! for members of `H(G)`, the conjugating involution.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::gamma::{ring_from_nu, theta_permutation};
use crate::group::GroupShape;
use crate::oracle::{
    compute_h_and_t, full_symmetric_normalizer, holomorph_generators, rho, FiniteGroup,
    OracleConfig, OracleError, SearchPath,
};

pub const CERTIFICATE_VERSION: &str = concat!("multiholo-", env!("CARGO_PKG_VERSION"), "/cert-1");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizedShape {
    pub rank: usize,
    pub two_part: Vec<u32>,
    pub odd_part: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizerSummary {
    pub normalizer_order: usize,
    pub hol_order: usize,
    pub t_order: usize,
    pub elementary_abelian: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateMember {
    pub index: usize,
    pub invariant_factors: Vec<u128>,
    pub regular: bool,
    pub normal_in_hol: bool,
    pub in_h: bool,
    pub normalizer_is_hol: Option<bool>,
    /// The ring `g.h = nu(h)(g) - g - h`.
    pub ring: Value,
    /// `nu(g)` for every element index `g`, as image sequences.
    pub permutations: Vec<Vec<u16>>,
    /// Present for members of `H(G)`; conjugates `rho(G)` onto this member.
    pub theta: Option<Vec<u16>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub version: String,
    pub group: String,
    pub normalized: NormalizedShape,
    pub order: usize,
    pub aut_order: u64,
    pub hol_order: u128,
    pub search_path: String,
    pub k_count: usize,
    pub h_count: usize,
    /// Regular subgroups normal in `Hol(G)` that are not abelian; they carry no ring.
    pub nonabelian_count: usize,
    pub members: Vec<CertificateMember>,
    pub symmetric_normalizer: Option<NormalizerSummary>,
}

/// Runs the oracle and records a certificate. Every flag is re-checked on the final permutations.
pub fn oracle_certificate(
    shape: &GroupShape,
    cfg: &OracleConfig,
) -> Result<Certificate, OracleError> {
    let report = compute_h_and_t(shape, cfg)?;
    let g = FiniteGroup::new(shape, cfg.max_order)?;
    let hol_gens = holomorph_generators(&g, cfg.aut_limit)?;
    let rhos: Vec<_> = (0..g.len()).map(|h| rho(&g, h)).collect();
    let mut members = Vec::with_capacity(report.members.len());
    for (index, m) in report.members.iter().enumerate() {
        let sub = &m.subgroup;
        let normal_in_hol = hol_gens.iter().all(|t| sub.group().is_normalized_by(t));
        let ring = ring_from_nu(shape, sub.members(), cfg.max_order)
            .map_err(|e| OracleError::Inconsistent(format!("member {index}: {e}")))?;
        let theta = if m.in_h {
            let th = theta_permutation(&ring, cfg.max_order)
                .map_err(|e| OracleError::Inconsistent(e.to_string()))?
                .ok_or_else(|| {
                    OracleError::Inconsistent(format!("member {index}: theta is not a bijection"))
                })?;
            let th_inv = th.inverse();
            for (h, r) in rhos.iter().enumerate() {
                if th_inv.then(r).then(&th) != *sub.nu(th.apply(h)) {
                    return Err(OracleError::Inconsistent(format!(
                        "member {index}: theta does not conjugate rho({h})"
                    )));
                }
            }
            Some(th.images().to_vec())
        } else {
            None
        };
        members.push(CertificateMember {
            index,
            invariant_factors: m.invariant_factors.clone(),
            regular: sub.group().is_regular(),
            normal_in_hol,
            in_h: m.in_h,
            normalizer_is_hol: m.normalizer_is_hol,
            ring: ring.to_json(),
            permutations: sub.members().iter().map(|p| p.images().to_vec()).collect(),
            theta,
        });
    }
    let symmetric_normalizer = if g.len() <= cfg.sym_limit {
        let scan =
            full_symmetric_normalizer(shape, cfg.sym_limit, cfg.hol_limit.max(report.hol_order))?;
        Some(NormalizerSummary {
            normalizer_order: scan.normalizer_order,
            hol_order: scan.hol_order,
            t_order: scan.t_order,
            elementary_abelian: scan.elementary_abelian,
        })
    } else {
        None
    };
    Ok(Certificate {
        version: CERTIFICATE_VERSION.to_string(),
        group: shape.to_string(),
        normalized: NormalizedShape {
            rank: shape.rank(),
            two_part: shape.two_part().to_vec(),
            odd_part: shape.odd_part().to_vec(),
        },
        order: report.group_order,
        aut_order: report.aut_order,
        hol_order: report.hol_order,
        search_path: match report.path {
            SearchPath::Literal => "literal",
            SearchPath::Equivariant => "equivariant",
        }
        .to_string(),
        k_count: report.k_count,
        h_count: report.h_count,
        nonabelian_count: report.nonabelian.len(),
        members,
        symmetric_normalizer,
    })
}
