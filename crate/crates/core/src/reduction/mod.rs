//! Rounding a divisor with sections down to a globally generated one, and cokernel
//! sweeps over families of divisors.

mod filter;
mod sweep;

use crate::error::{Error, Result};
use crate::geometry::{Axis, ConvexLatticePolygon};
use crate::toric::{polygon_of, Fan, TorusDivisor};

pub use filter::{FamilyFilter, FilterTerm};
pub use sweep::{
    sweep_cokernel, sweep_cokernel_with, SweepInstance, SweepOptions, SweepResult,
    DEFAULT_SWEEP_BUDGET,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionResult {
    pub original: TorusDivisor,
    pub reduced: TorusDivisor,
    /// Ray indices with `b_i < a_i`, increasing.
    pub j: Vec<usize>,
    /// `P_{D'}`, equal to the convex hull of the lattice points of `P_D`.
    pub hull_polygon: ConvexLatticePolygon,
}

/// `b_i = max over s ∈ P_D ∩ M of -<s, v_i>`.
///
/// The lattice points of `P_{D'}` are those of `P_D`, and `D'` is globally generated.
pub fn reduce_to_globally_generated(fan: &Fan, d: &TorusDivisor) -> Result<ReductionResult> {
    let p = polygon_of(fan, d)?;
    reduce_polygon(fan, d, &p)
}

/// As [`reduce_to_globally_generated`] with `P_D` already computed.
pub(crate) fn reduce_polygon(
    fan: &Fan,
    d: &TorusDivisor,
    p: &ConvexLatticePolygon,
) -> Result<ReductionResult> {
    let cols = p.slices(Axis::Columns)?;
    if cols.is_empty() {
        return Err(Error::precondition("divisor has no sections"));
    }
    let mut b = Vec::with_capacity(fan.len());
    for v in fan.rays() {
        let (vx, vy) = (v.x as i128, v.y as i128);
        let mut best = i128::MIN;
        for s in &cols {
            let base = s.at as i128 * vx;
            let lo = base + s.lo as i128 * vy;
            let hi = base + s.hi as i128 * vy;
            best = best.max(-lo.min(hi));
        }
        b.push(i64::try_from(best).map_err(|_| Error::Overflow)?);
    }
    let j = b
        .iter()
        .zip(d.coeffs())
        .enumerate()
        .filter(|(_, (b, a))| b < a)
        .map(|(i, _)| i)
        .collect();
    let reduced = TorusDivisor::new(b);
    let hull_polygon = polygon_of(fan, &reduced)?;
    Ok(ReductionResult {
        original: d.clone(),
        reduced,
        j,
        hull_polygon,
    })
}

/// For each `j ∈ J`, the number of lattice points on the face of `P_{D'}` in
/// direction `v_j` (1 when the face is a vertex).
pub fn edge_lattice_report(fan: &Fan, result: &ReductionResult) -> Result<Vec<(usize, u64)>> {
    result
        .j
        .iter()
        .map(|&j| {
            let face = result
                .hull_polygon
                .face(fan.ray(j), result.reduced.coeffs()[j])?;
            Ok((j, face.lattice_count()?))
        })
        .collect()
}
