use super::{DecompositionPath, DecompositionWitness};
use crate::error::{Error, Result};
use crate::geometry::{lattice_points, minkowski_sum, ConvexLatticePolygon, LatticeVector};

/// Exhaustive search for `p = q1 + q2`: walks the lattice points `q1` of `P_D` in
/// lexicographic order and returns the first with `p - q1 ∈ P_E`.
///
/// `Ok(None)` means `p` lies in `P_D + P_E` but is not a sum of lattice points.
pub fn decompose_bruteforce(
    pd: &ConvexLatticePolygon,
    pe: &ConvexLatticePolygon,
    p: LatticeVector,
) -> Result<Option<DecompositionWitness>> {
    let sum = minkowski_sum(pd, pe)?;
    if !sum.contains_lattice(p)? {
        return Err(Error::out_of_range(format!("{p} is outside P_D + P_E")));
    }
    for q1 in lattice_points(pd)? {
        let q2 = p.checked_sub(q1).ok_or(Error::Overflow)?;
        if pe.contains_lattice(q2)? {
            return DecompositionWitness::validated(
                pd,
                pe,
                p,
                q1,
                q2,
                DecompositionPath::FallbackSearch,
            )
            .map(Some);
        }
    }
    Ok(None)
}
