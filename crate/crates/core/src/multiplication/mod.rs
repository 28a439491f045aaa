//! Surjectivity of section multiplication as a sumset problem on lattice polygons.
//!
//! A lattice point `p` of `P_{D+E}` is in the image of `H^0(D) ⊗ H^0(E)` exactly when it
//! splits as `q1 + q2` with `q1 ∈ P_D ∩ M` and `q2 ∈ P_E ∩ M`. This module finds such
//! splits two ways: by exhaustion, and by a structured construction for `D` ample and
//! `E` globally generated that follows the polygon geometry (fiber polygon, triangle
//! reduction, adapted coordinates). Every witness is validated before it is returned.

mod brute;
mod report;
mod structured;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ConvexLatticePolygon, LatticeVector};

pub use brute::decompose_bruteforce;
pub use report::{
    check_surjectivity, check_surjectivity_with, cokernel_dim, sumset_by_pairs, sumset_size,
    CokernelReport, SurjectivityReport, DEFAULT_PAIR_BUDGET,
};
pub(crate) use report::cokernel_of_polygons;
pub use structured::{
    decompose_homothetic_triangles, decompose_structured, triangle_reduce, StructuredDecomposer,
    TriangleReduction,
};

/// How a witness was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecompositionPath {
    InteriorVertex,
    BoundaryLattice,
    /// `P_E`, or its reduced triangle, is a segment or a point; split along it.
    SegmentInterval,
    #[serde(rename = "triangle_region_A")]
    TriangleRegionA,
    #[serde(rename = "triangle_region_B")]
    TriangleRegionB,
    #[serde(rename = "triangle_region_C")]
    TriangleRegionC,
    FallbackSearch,
}

impl DecompositionPath {
    pub const ALL: [DecompositionPath; 7] = [
        DecompositionPath::InteriorVertex,
        DecompositionPath::BoundaryLattice,
        DecompositionPath::SegmentInterval,
        DecompositionPath::TriangleRegionA,
        DecompositionPath::TriangleRegionB,
        DecompositionPath::TriangleRegionC,
        DecompositionPath::FallbackSearch,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DecompositionPath::InteriorVertex => "interior_vertex",
            DecompositionPath::BoundaryLattice => "boundary_lattice",
            DecompositionPath::SegmentInterval => "segment_interval",
            DecompositionPath::TriangleRegionA => "triangle_region_A",
            DecompositionPath::TriangleRegionB => "triangle_region_B",
            DecompositionPath::TriangleRegionC => "triangle_region_C",
            DecompositionPath::FallbackSearch => "fallback_search",
        }
    }
}

impl fmt::Display for DecompositionPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `p = q1 + q2` with `q1 ∈ P_D ∩ M` and `q2 ∈ P_E ∩ M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DecompositionWitness {
    pub p: LatticeVector,
    pub q1: LatticeVector,
    pub q2: LatticeVector,
    pub path: DecompositionPath,
}

impl DecompositionWitness {
    /// Builds a witness after checking all three conditions.
    pub fn validated(
        pd: &ConvexLatticePolygon,
        pe: &ConvexLatticePolygon,
        p: LatticeVector,
        q1: LatticeVector,
        q2: LatticeVector,
        path: DecompositionPath,
    ) -> Result<Self> {
        let w = DecompositionWitness { p, q1, q2, path };
        if w.is_valid(pd, pe)? {
            Ok(w)
        } else {
            Err(Error::InvalidWitness { point: p })
        }
    }

    pub fn is_valid(&self, pd: &ConvexLatticePolygon, pe: &ConvexLatticePolygon) -> Result<bool> {
        Ok(self.q1.checked_add(self.q2) == Some(self.p)
            && pd.contains_lattice(self.q1)?
            && pe.contains_lattice(self.q2)?)
    }
}

/// Which decomposition engine [`check_surjectivity`] runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckMode {
    Structured,
    #[default]
    Brute,
    Both,
}

impl CheckMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckMode::Structured => "structured",
            CheckMode::Brute => "brute",
            CheckMode::Both => "both",
        }
    }

    pub fn runs_structured(self) -> bool {
        matches!(self, CheckMode::Structured | CheckMode::Both)
    }

    pub fn runs_brute(self) -> bool {
        matches!(self, CheckMode::Brute | CheckMode::Both)
    }
}

impl fmt::Display for CheckMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "structured" => Ok(CheckMode::Structured),
            "brute" => Ok(CheckMode::Brute),
            "both" => Ok(CheckMode::Both),
            other => Err(Error::Parse {
                path: "mode".into(),
                message: format!("unknown mode `{other}` (expected structured, brute or both)"),
            }),
        }
    }
}
