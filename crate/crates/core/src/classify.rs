//! Case analysis for `T(G)`: the ring count together with a shape-only label.

use std::fmt;

use serde_json::{json, Value};

use crate::group::GroupShape;
use crate::ring::{h_rings, k_extras, KSearchOptions, RingError, RingStructure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseLabel {
    /// `n = 0`, `e1 > e2`, `e1 >= 3`, and `m = 2` or `e2 > e3`.
    T4Torsion,
    /// `n = 1`, `e1 >= 2`, and `m = 1` or `e1 > e2`.
    T4Rank1,
    T2Cyclic,
    T2M2E4,
    T2HomogTail,
    T2EqualPair,
    T2Rank1Block,
    T2Rank1Exp2,
    T2Rank2,
    T1,
}

impl CaseLabel {
    pub const ALL: [CaseLabel; 10] = [
        CaseLabel::T4Torsion,
        CaseLabel::T4Rank1,
        CaseLabel::T2Cyclic,
        CaseLabel::T2M2E4,
        CaseLabel::T2HomogTail,
        CaseLabel::T2EqualPair,
        CaseLabel::T2Rank1Block,
        CaseLabel::T2Rank1Exp2,
        CaseLabel::T2Rank2,
        CaseLabel::T1,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseLabel::T4Torsion => "T4-torsion",
            CaseLabel::T4Rank1 => "T4-rank1",
            CaseLabel::T2Cyclic => "T2-cyclic",
            CaseLabel::T2M2E4 => "T2-m2-e4",
            CaseLabel::T2HomogTail => "T2-homog-tail",
            CaseLabel::T2EqualPair => "T2-equal-pair",
            CaseLabel::T2Rank1Block => "T2-rank1-block",
            CaseLabel::T2Rank1Exp2 => "T2-rank1-exp2",
            CaseLabel::T2Rank2 => "T2-rank2",
            CaseLabel::T1 => "T1",
        }
    }

    /// `|T(G)|` for shapes carrying this label.
    pub fn t_order(self) -> usize {
        match self {
            CaseLabel::T4Torsion | CaseLabel::T4Rank1 => 4,
            CaseLabel::T1 => 1,
            _ => 2,
        }
    }

    /// Reads the label straight off the invariants, without building any ring.
    pub fn of(shape: &GroupShape) -> CaseLabel {
        let n = shape.rank();
        let e = shape.two_part();
        let m = e.len();
        let e_at = |i: usize| e.get(i).copied().unwrap_or(0);
        let (e1, e2, e3) = (e_at(0), e_at(1), e_at(2));
        if n == 0 && m >= 2 && e1 >= 3 && e1 > e2 && (m == 2 || e2 > e3) {
            CaseLabel::T4Torsion
        } else if n == 1 && m >= 1 && e1 >= 2 && (m == 1 || e1 > e2) {
            CaseLabel::T4Rank1
        } else if n == 0 && m == 1 && e1 >= 3 {
            CaseLabel::T2Cyclic
        } else if n == 0 && m == 2 && e1 == 2 && e2 == 1 {
            CaseLabel::T2M2E4
        } else if n == 0 && m > 2 && e1 >= 3 && e1 > e2 && e2 == e3 {
            CaseLabel::T2HomogTail
        } else if n == 0 && m >= 2 && e1 == e2 && e1 >= 3 && (m == 2 || e2 > e3) {
            CaseLabel::T2EqualPair
        } else if n == 1 && m >= 2 && e1 == e2 && e1 >= 2 {
            CaseLabel::T2Rank1Block
        } else if n == 1 && m == 1 && e1 == 1 {
            CaseLabel::T2Rank1Exp2
        } else if n == 2 && m >= 1 && (m == 1 || e1 > e2) {
            CaseLabel::T2Rank2
        } else {
            CaseLabel::T1
        }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseReport {
    /// The descriptor as given; defaults to the normalized form.
    pub group: String,
    pub normalized: GroupShape,
    pub case: CaseLabel,
    pub t_order: usize,
    pub rings: Vec<RingStructure>,
    /// Rings with `(G, o)` not isomorphic to `G`, when they were searched for.
    pub k_extras: Option<Vec<RingStructure>>,
}

impl CaseReport {
    /// The shape label agrees with the ring count.
    pub fn is_consistent(&self) -> bool {
        self.case.t_order() == self.t_order && self.t_order == self.rings.len()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "group": self.group,
            "normalized": {
                "rank": self.normalized.rank(),
                "two_part": self.normalized.two_part(),
                "odd_part": self.normalized.odd_part(),
            },
            "case": self.case.as_str(),
            "t_order": self.t_order,
            "rings": self.rings.iter().map(RingStructure::to_json).collect::<Vec<_>>(),
            "k_extras": self.k_extras.as_ref().map(|k| k.iter().map(RingStructure::to_json).collect::<Vec<_>>()),
        })
    }
}

impl fmt::Display for CaseReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "group: {} (normalized {})", self.group, self.normalized)?;
        writeln!(f, "case: {}", self.case)?;
        writeln!(f, "|T(G)| = {}", self.t_order)?;
        for (i, r) in self.rings.iter().enumerate() {
            writeln!(f, "ring {i}:")?;
            for line in r.to_string().lines() {
                writeln!(f, "  {line}")?;
            }
        }
        if let Some(extras) = &self.k_extras {
            writeln!(f, "K-only rings: {}", extras.len())?;
            for (i, r) in extras.iter().enumerate() {
                writeln!(f, "k-ring {i}:")?;
                for line in r.to_string().lines() {
                    writeln!(f, "  {line}")?;
                }
            }
        }
        Ok(())
    }
}

pub fn classify(shape: &GroupShape) -> CaseReport {
    let rings = h_rings(shape);
    CaseReport {
        group: shape.to_string(),
        normalized: shape.clone(),
        case: CaseLabel::of(shape),
        t_order: rings.len(),
        rings,
        k_extras: None,
    }
}

/// [`classify`] plus the search for rings outside `H(G)`.
pub fn classify_with_k(shape: &GroupShape, opts: &KSearchOptions) -> Result<CaseReport, RingError> {
    let mut report = classify(shape);
    report.k_extras = Some(k_extras(shape, opts)?);
    Ok(report)
}
