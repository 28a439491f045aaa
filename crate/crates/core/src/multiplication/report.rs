use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::{CheckMode, DecompositionPath, DecompositionWitness, StructuredDecomposer};
use crate::error::{Error, Result};
use crate::exec::{try_map, Execution};
use crate::geometry::{lattice_points, Axis, ConvexLatticePolygon, LatticeVector, Slice};
use crate::toric::{polygon_of, Fan, TorusDivisor};

/// Default cap on `h0(D) * h0(E)` for pairwise sumset enumeration.
pub const DEFAULT_PAIR_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurjectivityReport {
    pub mode: CheckMode,
    /// Lattice points of `P_{D+E}`.
    pub total_points: u64,
    pub decomposed: u64,
    /// One witness per decomposed point, in lexicographic order of `p`.
    pub witnesses: Vec<DecompositionWitness>,
    pub undecomposed: Vec<LatticeVector>,
    pub surjective: bool,
    pub structured_fallbacks: u64,
}

impl SurjectivityReport {
    pub fn path_count(&self, path: DecompositionPath) -> u64 {
        self.witnesses.iter().filter(|w| w.path == path).count() as u64
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CokernelReport {
    pub h0_d: u64,
    pub h0_e: u64,
    pub h0_sum: u64,
    pub sumset_size: u64,
    pub coker_dim: u64,
    /// Lattice points of `P_{D+E}` outside the sumset, in lexicographic order.
    pub missing_points: Vec<LatticeVector>,
}

impl CokernelReport {
    pub fn is_surjective(&self) -> bool {
        self.coker_dim == 0
    }
}

fn pair_count(pd: &ConvexLatticePolygon, pe: &ConvexLatticePolygon, budget: u64) -> Result<u64> {
    let n = pd.lattice_count()?.saturating_mul(pe.lattice_count()?);
    if n > budget {
        return Err(Error::BudgetExceeded { required: n, budget });
    }
    Ok(n)
}

/// `(P_D ∩ M) + (P_E ∩ M)` by hashing every pairwise sum, in lexicographic order.
pub fn sumset_by_pairs(
    pd: &ConvexLatticePolygon,
    pe: &ConvexLatticePolygon,
    budget: u64,
) -> Result<Vec<LatticeVector>> {
    pair_count(pd, pe, budget)?;
    let se = lattice_points(pe)?;
    let mut out = HashSet::new();
    for q1 in lattice_points(pd)? {
        for q2 in &se {
            out.insert(q1.checked_add(*q2).ok_or(Error::Overflow)?);
        }
    }
    let mut out: Vec<_> = out.into_iter().collect();
    out.sort();
    Ok(out)
}

/// The sumset as merged `y`-intervals per column, indexed from `first` column.
struct ColumnUnion {
    first: i64,
    columns: Vec<Vec<(i64, i64)>>,
}

impl ColumnUnion {
    fn new(pd: &ConvexLatticePolygon, pe: &ConvexLatticePolygon) -> Result<Self> {
        let cd = pd.slices(Axis::Columns)?;
        let ce = pe.slices(Axis::Columns)?;
        let (Some(d0), Some(e0)) = (cd.first(), ce.first()) else {
            return Ok(ColumnUnion {
                first: 0,
                columns: Vec::new(),
            });
        };
        let first = d0.at + e0.at;
        let last = cd[cd.len() - 1].at + ce[ce.len() - 1].at;
        let mut columns = vec![Vec::new(); (last - first + 1) as usize];
        for s in &cd {
            for t in &ce {
                columns[(s.at + t.at - first) as usize].push((s.lo + t.lo, s.hi + t.hi));
            }
        }
        for col in &mut columns {
            col.sort_unstable();
            let mut merged: Vec<(i64, i64)> = Vec::with_capacity(col.len());
            for &(lo, hi) in col.iter() {
                match merged.last_mut() {
                    Some(last) if lo <= last.1 + 1 => last.1 = last.1.max(hi),
                    _ => merged.push((lo, hi)),
                }
            }
            *col = merged;
        }
        Ok(ColumnUnion { first, columns })
    }

    fn size(&self) -> u64 {
        self.columns
            .iter()
            .flatten()
            .map(|(lo, hi)| (hi - lo + 1) as u64)
            .sum()
    }

    fn column(&self, x: i64) -> &[(i64, i64)] {
        let i = x - self.first;
        if i < 0 || i as usize >= self.columns.len() {
            return &[];
        }
        &self.columns[i as usize]
    }

    /// Appends the points of `s` not covered by the union.
    fn push_gaps(&self, s: &Slice, out: &mut Vec<LatticeVector>) {
        let mut y = s.lo;
        for &(lo, hi) in self.column(s.at) {
            if lo > s.hi {
                break;
            }
            out.extend((y..lo).map(|t| LatticeVector::new(s.at, t)));
            y = y.max(hi + 1);
        }
        out.extend((y..=s.hi).map(|t| LatticeVector::new(s.at, t)));
    }
}

/// Number of lattice points of `(P_D ∩ M) + (P_E ∩ M)`.
pub fn sumset_size(pd: &ConvexLatticePolygon, pe: &ConvexLatticePolygon) -> Result<u64> {
    Ok(ColumnUnion::new(pd, pe)?.size())
}

pub(crate) fn cokernel_of_polygons(
    pd: &ConvexLatticePolygon,
    pe: &ConvexLatticePolygon,
    psum: &ConvexLatticePolygon,
) -> Result<CokernelReport> {
    let h0_d = pd.lattice_count()?;
    let h0_e = pe.lattice_count()?;
    if h0_d == 0 || h0_e == 0 {
        return Err(Error::precondition("both factors need sections"));
    }
    let union = ColumnUnion::new(pd, pe)?;
    let sumset_size = union.size();
    let mut h0_sum = 0;
    let mut missing_points = Vec::new();
    for s in psum.slices(Axis::Columns)? {
        h0_sum += s.len();
        union.push_gaps(&s, &mut missing_points);
    }
    let coker_dim = h0_sum
        .checked_sub(sumset_size)
        .ok_or_else(|| Error::precondition("sumset is not contained in P_{D+E}"))?;
    debug_assert_eq!(coker_dim, missing_points.len() as u64);
    Ok(CokernelReport {
        h0_d,
        h0_e,
        h0_sum,
        sumset_size,
        coker_dim,
        missing_points,
    })
}

/// Dimension of the cokernel of `H^0(D) ⊗ H^0(E) -> H^0(D + E)`.
pub fn cokernel_dim(fan: &Fan, d: &TorusDivisor, e: &TorusDivisor) -> Result<CokernelReport> {
    let pd = polygon_of(fan, d)?;
    let pe = polygon_of(fan, e)?;
    let psum = polygon_of(fan, &d.checked_add(e)?)?;
    cokernel_of_polygons(&pd, &pe, &psum)
}

/// Lexicographically smallest `q1` for every reachable sum.
fn brute_witnesses(
    pd: &ConvexLatticePolygon,
    pe: &ConvexLatticePolygon,
) -> Result<HashMap<LatticeVector, LatticeVector>> {
    pair_count(pd, pe, DEFAULT_PAIR_BUDGET)?;
    let se = lattice_points(pe)?;
    let mut first = HashMap::new();
    for q1 in lattice_points(pd)? {
        for q2 in &se {
            first
                .entry(q1.checked_add(*q2).ok_or(Error::Overflow)?)
                .or_insert(q1);
        }
    }
    Ok(first)
}

/// [`check_surjectivity_with`] on the default execution.
pub fn check_surjectivity(
    fan: &Fan,
    d: &TorusDivisor,
    e: &TorusDivisor,
    mode: CheckMode,
) -> Result<SurjectivityReport> {
    check_surjectivity_with(fan, d, e, mode, Execution::default())
}

/// Tries to decompose every lattice point of `P_{D+E}`.
///
/// Structured mode needs `D` ample and `E` globally generated; brute mode accepts any
/// pair with sections. Mode `both` runs the two and fails with
/// [`Error::OracleDisagreement`] if they differ on whether a point decomposes.
pub fn check_surjectivity_with(
    fan: &Fan,
    d: &TorusDivisor,
    e: &TorusDivisor,
    mode: CheckMode,
    exec: Execution,
) -> Result<SurjectivityReport> {
    let psum = polygon_of(fan, &d.checked_add(e)?)?;
    let points = lattice_points(&psum)?;
    let structured = if mode.runs_structured() {
        let sd = StructuredDecomposer::new(fan, d, e)?;
        Some(try_map(exec, &points, |p| sd.decompose(*p))?)
    } else {
        None
    };
    let (pd, pe) = (polygon_of(fan, d)?, polygon_of(fan, e)?);
    if pd.lattice_count()? == 0 || pe.lattice_count()? == 0 {
        return Err(Error::precondition("both factors need sections"));
    }
    let brute = if mode.runs_brute() {
        Some(brute_witnesses(&pd, &pe)?)
    } else {
        None
    };
    let mut witnesses = Vec::with_capacity(points.len());
    let mut undecomposed = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let b = brute.as_ref().map(|m| m.get(p).copied());
        match (&structured, b) {
            (Some(s), b) => {
                if b == Some(None) {
                    return Err(Error::OracleDisagreement { point: *p });
                }
                witnesses.push(s[i]);
            }
            (None, Some(Some(q1))) => witnesses.push(DecompositionWitness::validated(
                &pd,
                &pe,
                *p,
                q1,
                *p - q1,
                DecompositionPath::FallbackSearch,
            )?),
            (None, _) => undecomposed.push(*p),
        }
    }
    let structured_fallbacks = if structured.is_some() {
        witnesses
            .iter()
            .filter(|w| w.path == DecompositionPath::FallbackSearch)
            .count() as u64
    } else {
        0
    };
    Ok(SurjectivityReport {
        mode,
        total_points: points.len() as u64,
        decomposed: witnesses.len() as u64,
        surjective: undecomposed.is_empty(),
        witnesses,
        undecomposed,
        structured_fallbacks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::hull;
    use crate::toric::{generate_family, FamilySpec};

    fn lv(x: i64, y: i64) -> LatticeVector {
        LatticeVector::new(x, y)
    }

    fn div(c: &[i64]) -> TorusDivisor {
        TorusDivisor::new(c.to_vec())
    }

    fn f2() -> Fan {
        generate_family(&FamilySpec::Hirzebruch(2)).unwrap()
    }

    #[test]
    fn p2_lines() {
        let fan = generate_family(&FamilySpec::ProjectivePlane).unwrap();
        let o1 = div(&[0, 0, 1]);
        for mode in [CheckMode::Structured, CheckMode::Brute, CheckMode::Both] {
            let r = check_surjectivity(&fan, &o1, &o1, mode).unwrap();
            assert!(r.surjective);
            assert_eq!((r.total_points, r.decomposed), (6, 6));
        }
        let c = cokernel_dim(&fan, &o1, &div(&[0, 0, 2])).unwrap();
        assert_eq!(c.coker_dim, 0);
    }

    #[test]
    fn f2_ample_times_gg() {
        let fan = f2();
        let r = check_surjectivity(&fan, &div(&[1, 0, 1, 1]), &div(&[1, 1, 1, 1]), CheckMode::Both)
            .unwrap();
        assert!(r.surjective);
        assert_eq!(r.total_points, r.decomposed);
    }

    #[test]
    fn f2_golden_cokernel() {
        let fan = f2();
        let (l, e) = (div(&[1, 0, 1, 1]), div(&[0, 1, 0, 0]));
        let c = cokernel_dim(&fan, &l, &e).unwrap();
        assert_eq!((c.h0_d, c.h0_e, c.h0_sum), (8, 1, 9));
        assert_eq!(c.sumset_size, 8);
        assert_eq!(c.coker_dim, 1);
        assert_eq!(c.missing_points, vec![lv(-1, -1)]);
        let r = check_surjectivity(&fan, &l, &e, CheckMode::Brute).unwrap();
        assert!(!r.surjective);
        assert_eq!(r.undecomposed, vec![lv(-1, -1)]);
        assert_eq!(r.total_points, 9);
        for k in 2..=30 {
            let c = cokernel_dim(&fan, &l, &div(&[0, k, 0, 0])).unwrap();
            assert_eq!(c.coker_dim, 1, "k = {k}");
        }
    }

    #[test]
    fn cokernel_needs_sections() {
        let fan = f2();
        assert!(matches!(
            cokernel_dim(&fan, &div(&[1, 0, 1, 1]), &div(&[-1, 0, 0, 0])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn union_matches_pairs() {
        let a = hull(&[lv(0, 0), lv(1, 1)]).unwrap();
        let b = hull(&[lv(1, 0), lv(0, 1)]).unwrap();
        let pairs = sumset_by_pairs(&a, &b, DEFAULT_PAIR_BUDGET).unwrap();
        assert_eq!(pairs, vec![lv(0, 1), lv(1, 0), lv(1, 2), lv(2, 1)]);
        assert_eq!(sumset_size(&a, &b).unwrap(), 4);
        let t = hull(&[lv(0, 0), lv(5, 2), lv(1, 4)]).unwrap();
        let s = hull(&[lv(0, 0), lv(3, 1)]).unwrap();
        assert_eq!(
            sumset_size(&t, &s).unwrap(),
            sumset_by_pairs(&t, &s, DEFAULT_PAIR_BUDGET).unwrap().len() as u64
        );
    }

    #[test]
    fn pair_budget() {
        let t = hull(&[lv(0, 0), lv(3, 0), lv(0, 3)]).unwrap();
        assert_eq!(
            sumset_by_pairs(&t, &t, 10),
            Err(Error::BudgetExceeded {
                required: 100,
                budget: 10
            })
        );
    }

    #[test]
    fn sequential_matches_parallel() {
        let fan = f2();
        let (d, e) = (div(&[2, 1, 1, 2]), div(&[1, 1, 1, 1]));
        let a = check_surjectivity_with(&fan, &d, &e, CheckMode::Both, Execution::Sequential);
        let b = check_surjectivity_with(&fan, &d, &e, CheckMode::Both, Execution::Parallel);
        assert_eq!(a.unwrap(), b.unwrap());
    }
}
