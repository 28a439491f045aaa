use num_integer::Integer;

use super::{DecompositionPath, DecompositionWitness};
use crate::error::{Error, Result};
use crate::geometry::{
    decompose_interval, hull, hull_rational, minkowski_sum, Axis, ConvexLatticePolygon, Dim, Face,
    LatticeVector, RationalInterval, RationalPoint,
};
use crate::toric::{classify_polygon, polygon_of, Fan, PositivityClass, TorusDivisor};

/// The smallest sub-polygon of `P_E` through both endpoints of one of its edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleReduction {
    pub m1: LatticeVector,
    pub m2: LatticeVector,
    /// Offsets `c_i = max(-<m1, v_i>, -<m2, v_i>)`.
    pub c: Vec<i64>,
    /// `{ u : <u, v_i> >= -c_i }`; a triangle or the segment `[m1, m2]`.
    pub triangle: ConvexLatticePolygon,
    /// Lattice lengths of `σ_{k+1}` and `σ_k` of the triangle, for 2-dimensional results.
    pub legs: Option<(i64, i64)>,
    /// Index `k` of the right-angle corner between rays `k` and `k + 1`.
    pub corner: Option<usize>,
}

/// Linear coordinates `u -> (<u, f1>, <u, f2>)` with `det(f1, f2) = 1`.
#[derive(Debug, Clone, Copy)]
struct Chart {
    f1: LatticeVector,
    f2: LatticeVector,
}

fn to_i64(v: i128) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::Overflow)
}

impl Chart {
    fn new(f1: LatticeVector, f2: LatticeVector) -> Result<Self> {
        if f1.cross(f2) != 1 {
            return Err(Error::precondition("chart basis must have determinant 1"));
        }
        Ok(Chart { f1, f2 })
    }

    fn apply(&self, u: LatticeVector) -> Result<LatticeVector> {
        Ok(LatticeVector::new(to_i64(u.dot(self.f1))?, to_i64(u.dot(self.f2))?))
    }

    fn unapply(&self, c: LatticeVector) -> Result<LatticeVector> {
        let (x, y) = (c.x as i128, c.y as i128);
        let ux = self.f2.y as i128 * x - self.f1.y as i128 * y;
        let uy = -(self.f2.x as i128) * x + self.f1.x as i128 * y;
        Ok(LatticeVector::new(to_i64(ux)?, to_i64(uy)?))
    }

    fn image(&self, p: &ConvexLatticePolygon, shift: LatticeVector) -> Result<ConvexLatticePolygon> {
        p.linear_image(self.f1, self.f2)?.translate(shift)
    }
}

/// Turns the recoverable failures of a construction step into `None`.
fn soft<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Precondition(_) | Error::OutOfRange(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn edge_of(face: Face) -> Option<(LatticeVector, LatticeVector)> {
    match face {
        Face::Edge(a, b) => Some((a.to_lattice()?, b.to_lattice()?)),
        _ => None,
    }
}

fn reduce_edge(
    fan: &Fan,
    m1: LatticeVector,
    m2: LatticeVector,
    edge_index: usize,
) -> Result<TriangleReduction> {
    let n = fan.len();
    let c = fan
        .rays()
        .iter()
        .map(|v| to_i64((-m1.dot(*v)).max(-m2.dot(*v))))
        .collect::<Result<Vec<_>>>()?;
    let triangle = polygon_of(fan, &TorusDivisor::new(c.clone()))?;
    let mut out = TriangleReduction {
        m1,
        m2,
        c,
        triangle,
        legs: None,
        corner: None,
    };
    match out.triangle.dim() {
        Dim::Segment => return Ok(out),
        Dim::Polygon if out.triangle.vertices().len() == 3 && out.triangle.has_lattice_vertices() => {}
        _ => return Err(Error::precondition("reduced polygon is not a lattice triangle")),
    }
    for k in 0..n {
        let k1 = (k + 1) % n;
        if k == edge_index || k1 == edge_index {
            continue;
        }
        let fk = out.triangle.face(fan.ray(k), out.c[k])?;
        let fk1 = out.triangle.face(fan.ray(k1), out.c[k1])?;
        if let (Some((p, q)), Some((r, s))) = (edge_of(fk), edge_of(fk1)) {
            out.legs = Some(((s - r).gcd(), (q - p).gcd()));
            out.corner = Some(k);
            return Ok(out);
        }
    }
    Err(Error::precondition("reduced triangle has no corner between consecutive rays"))
}

/// Shrinks `P_E` around the edge `σ_edge_index(E)` containing `q` in its relative
/// interior. `E` must be globally generated.
pub fn triangle_reduce(
    fan: &Fan,
    e: &TorusDivisor,
    q: RationalPoint,
    edge_index: usize,
) -> Result<TriangleReduction> {
    let pe = polygon_of(fan, e)?;
    if !classify_polygon(fan, e, &pe)?.is_globally_generated() {
        return Err(Error::precondition("triangle reduction needs a globally generated divisor"));
    }
    if edge_index >= fan.len() {
        return Err(Error::precondition(format!("no ray with index {edge_index}")));
    }
    let face = pe.face(fan.ray(edge_index), e.coeffs()[edge_index])?;
    let Some((m1, m2)) = edge_of(face) else {
        return Err(Error::precondition(format!("σ_{edge_index} is not an edge")));
    };
    let seg = hull(&[m1, m2])?;
    let endpoint = q == RationalPoint::from_lattice(m1) || q == RationalPoint::from_lattice(m2);
    if endpoint || !seg.contains(&q)? {
        return Err(Error::precondition(format!(
            "{q} is not in the relative interior of σ_{edge_index}"
        )));
    }
    reduce_edge(fan, m1, m2, edge_index)
}

/// Lattice shape of a triangle up to translation and dilation.
fn triangle_shape(t: &ConvexLatticePolygon) -> Option<[LatticeVector; 2]> {
    let vs = t.lattice_vertices()?;
    if vs.len() != 3 {
        return None;
    }
    let (a, b) = (vs[1] - vs[0], vs[2] - vs[0]);
    let g = a.gcd().gcd(&b.gcd()).gcd(&(vs[2] - vs[1]).gcd());
    Some([
        LatticeVector::new(a.x / g, a.y / g),
        LatticeVector::new(b.x / g, b.y / g),
    ])
}

/// Splits `p` over two lattice triangles that are translates of nonnegative multiples
/// of one triangle (a point counts as the zero multiple). Returns the pair with the
/// lexicographically smallest `q1`.
pub fn decompose_homothetic_triangles(
    t1: &ConvexLatticePolygon,
    t2: &ConvexLatticePolygon,
    p: LatticeVector,
) -> Result<(LatticeVector, LatticeVector)> {
    let shape = |t: &ConvexLatticePolygon| match t.dim() {
        Dim::Point if t.has_lattice_vertices() => Ok(None),
        Dim::Polygon => triangle_shape(t)
            .map(Some)
            .ok_or_else(|| Error::precondition("expected a lattice triangle")),
        _ => Err(Error::precondition("expected a lattice triangle or a lattice point")),
    };
    if let (Some(s1), Some(s2)) = (shape(t1)?, shape(t2)?) {
        if s1 != s2 {
            return Err(Error::precondition("triangles are not homothetic"));
        }
    }
    if !minkowski_sum(t1, t2)?.contains_lattice(p)? {
        return Err(Error::out_of_range(format!("{p} is outside T1 + T2")));
    }
    let fiber = t1.intersection(&t2.reflect_through(p)?)?;
    let q1 = fiber
        .first_lattice_point()?
        .ok_or(Error::TheoremViolation { point: p })?;
    Ok((q1, p - q1))
}

/// Adapted coordinates around the corner of a reduced triangle.
#[derive(Debug, Clone)]
struct TrianglePlan {
    chart: Chart,
    shift_d: LatticeVector,
    shift_t: LatticeVector,
    pd: ConvexLatticePolygon,
    t: ConvexLatticePolygon,
    legs: (i64, i64),
    region_c: Option<ConvexLatticePolygon>,
}

#[derive(Debug, Clone)]
enum EdgePlan {
    NotAnEdge,
    Segment(LatticeVector, LatticeVector),
    Triangle(Box<TrianglePlan>),
    Unusable,
}

/// Structured decomposition for a fixed ample `D` and globally generated `E`, with the
/// per-edge triangle reductions computed once.
#[derive(Debug, Clone)]
pub struct StructuredDecomposer {
    rays: Vec<LatticeVector>,
    b: Vec<i64>,
    pd: ConvexLatticePolygon,
    pe: ConvexLatticePolygon,
    plans: Vec<EdgePlan>,
}

impl StructuredDecomposer {
    pub fn new(fan: &Fan, d: &TorusDivisor, e: &TorusDivisor) -> Result<Self> {
        let pd = polygon_of(fan, d)?;
        let pe = polygon_of(fan, e)?;
        if classify_polygon(fan, d, &pd)? != PositivityClass::Ample {
            return Err(Error::precondition("structured decomposition needs D ample"));
        }
        if !classify_polygon(fan, e, &pe)?.is_globally_generated() {
            return Err(Error::precondition("structured decomposition needs E globally generated"));
        }
        let mut plans = Vec::with_capacity(fan.len());
        for i in 0..fan.len() {
            let plan = match pe.dim() {
                Dim::Polygon => match edge_of(pe.face(fan.ray(i), e.coeffs()[i])?) {
                    None => EdgePlan::NotAnEdge,
                    Some((m1, m2)) => match soft(reduce_edge(fan, m1, m2, i))? {
                        None => EdgePlan::Unusable,
                        Some(red) => Self::plan(fan, d, &pd, red, i)?,
                    },
                },
                _ => EdgePlan::NotAnEdge,
            };
            plans.push(plan);
        }
        Ok(StructuredDecomposer {
            rays: fan.rays().to_vec(),
            b: e.coeffs().to_vec(),
            pd,
            pe,
            plans,
        })
    }

    fn plan(
        fan: &Fan,
        d: &TorusDivisor,
        pd: &ConvexLatticePolygon,
        red: TriangleReduction,
        edge: usize,
    ) -> Result<EdgePlan> {
        let (Some(k), Some(legs)) = (red.corner, red.legs) else {
            return Ok(EdgePlan::Segment(red.m1, red.m2));
        };
        let n = fan.len();
        let k1 = (k + 1) % n;
        let chart = Chart::new(fan.ray(k), fan.ray(k1))?;
        let a = d.coeffs();
        let shift_d = LatticeVector::new(a[k], a[k1]);
        let shift_t = LatticeVector::new(red.c[k], red.c[k1]);
        let t = chart.image(&red.triangle, shift_t)?;
        let expected = hull(&[
            LatticeVector::new(0, 0),
            LatticeVector::new(legs.0, 0),
            LatticeVector::new(0, legs.1),
        ])?;
        if t != expected {
            return Ok(EdgePlan::Unusable);
        }
        let pd_chart = chart.image(pd, shift_d)?;
        let region_c = match edge_of(pd.face(fan.ray(edge), a[edge])?) {
            Some((w1, w2)) => {
                let (w1, w2) = (chart.apply(w1)? + shift_d, chart.apply(w2)? + shift_d);
                let corner = LatticeVector::new(w1.x.min(w2.x), w1.y.min(w2.y));
                Some(hull(&[corner, w1, w2])?)
            }
            None => None,
        };
        Ok(EdgePlan::Triangle(Box::new(TrianglePlan {
            chart,
            shift_d,
            shift_t,
            pd: pd_chart,
            t,
            legs,
            region_c,
        })))
    }

    pub fn polygon_d(&self) -> &ConvexLatticePolygon {
        &self.pd
    }

    pub fn polygon_e(&self) -> &ConvexLatticePolygon {
        &self.pe
    }

    fn accept(
        &self,
        p: LatticeVector,
        q2: LatticeVector,
        path: DecompositionPath,
    ) -> Result<Option<DecompositionWitness>> {
        let Some(q1) = p.checked_sub(q2) else {
            return Ok(None);
        };
        let w = DecompositionWitness { p, q1, q2, path };
        Ok(w.is_valid(&self.pd, &self.pe)?.then_some(w))
    }

    /// Decomposes a lattice point `p` of `P_{D+E}`.
    pub fn decompose(&self, p: LatticeVector) -> Result<DecompositionWitness> {
        self.run(p, true)
    }

    /// As [`StructuredDecomposer::decompose`] without the search for a lattice point of
    /// the fiber on the boundary of `P_E`, so that boundary cases always go through the
    /// triangle reduction.
    pub fn decompose_by_reduction(&self, p: LatticeVector) -> Result<DecompositionWitness> {
        self.run(p, false)
    }

    fn run(&self, p: LatticeVector, boundary_search: bool) -> Result<DecompositionWitness> {
        let fiber = self.pe.intersection(&self.pd.reflect_through(p)?)?;
        if fiber.is_empty() {
            return Err(Error::out_of_range(format!("{p} is outside P_D + P_E")));
        }
        let v0 = fiber.vertices()[0];
        if self.pe.interior_contains(&v0)? {
            if let Some(q2) = v0.to_lattice() {
                if let Some(w) = self.accept(p, q2, DecompositionPath::InteriorVertex)? {
                    return Ok(w);
                }
            }
        }
        if boundary_search {
            if let Some(q2) = self.boundary_lattice(&fiber)? {
                if let Some(w) = self.accept(p, q2, DecompositionPath::BoundaryLattice)? {
                    return Ok(w);
                }
            }
        }
        if let Some(w) = self.reduced(&v0, p)? {
            return Ok(w);
        }
        match fiber.first_lattice_point()? {
            Some(q2) => DecompositionWitness::validated(
                &self.pd,
                &self.pe,
                p,
                p - q2,
                q2,
                DecompositionPath::FallbackSearch,
            ),
            None => Err(Error::TheoremViolation { point: p }),
        }
    }

    /// Lexicographically smallest lattice point of the fiber on the boundary of `P_E`.
    fn boundary_lattice(&self, fiber: &ConvexLatticePolygon) -> Result<Option<LatticeVector>> {
        if self.pe.dim() != Dim::Polygon {
            return fiber.first_lattice_point();
        }
        let mut best: Option<LatticeVector> = None;
        for (v, b) in self.rays.iter().zip(&self.b) {
            let cand = match fiber.face(*v, *b)? {
                Face::Empty => None,
                Face::Vertex(x) => x.to_lattice(),
                Face::Edge(x, y) => hull_rational(&[x, y])?.first_lattice_point()?,
            };
            if let Some(c) = cand {
                best = Some(best.map_or(c, |b| b.min(c)));
            }
        }
        Ok(best)
    }

    fn reduced(&self, q: &RationalPoint, p: LatticeVector) -> Result<Option<DecompositionWitness>> {
        if self.pe.dim() == Dim::Point {
            let q2 = self.pe.lattice_vertices().expect("globally generated")[0];
            return self.accept(p, q2, DecompositionPath::SegmentInterval);
        }
        if self.pe.dim() == Dim::Segment {
            let vs = self.pe.lattice_vertices().expect("globally generated");
            return self.along_segment(vs[0], vs[1], p);
        }
        for (i, plan) in self.plans.iter().enumerate() {
            let (num, den) = q.dot(self.rays[i])?;
            if num != -(self.b[i] as i128) * den {
                continue;
            }
            return match plan {
                EdgePlan::Segment(m1, m2) => self.along_segment(*m1, *m2, p),
                EdgePlan::Triangle(tp) => self.in_triangle(tp, p),
                EdgePlan::NotAnEdge | EdgePlan::Unusable => continue,
            };
        }
        Ok(None)
    }

    /// `q2` on the lattice segment `[m1, m2]`, found by splitting along its direction.
    fn along_segment(
        &self,
        m1: LatticeVector,
        m2: LatticeVector,
        p: LatticeVector,
    ) -> Result<Option<DecompositionWitness>> {
        let d = m2 - m1;
        let len = d.gcd();
        let w = LatticeVector::new(d.x / len, d.y / len);
        let eg = w.x.extended_gcd(&w.y);
        let s = eg.gcd.signum();
        let phi = LatticeVector::new(eg.x * s, eg.y * s);
        let psi = LatticeVector::new(-w.y, w.x);
        let chart = Chart::new(phi, psi)?;
        let pd = chart.image(&self.pd, LatticeVector::new(0, 0))?;
        let (pc, mc) = (chart.apply(p)?, chart.apply(m1)?);
        let level = pc.y - mc.y;
        let Some(row) = pd.line_interval(Axis::Rows, level)? else {
            return Ok(None);
        };
        let seg = RationalInterval::integral(mc.x, mc.x + len);
        let Some((c1, _)) = soft(decompose_interval(row, seg, pc.x as i128))? else {
            return Ok(None);
        };
        let q1 = chart.unapply(LatticeVector::new(to_i64(c1)?, level))?;
        self.accept(p, p - q1, DecompositionPath::SegmentInterval)
    }

    fn in_triangle(&self, tp: &TrianglePlan, p: LatticeVector) -> Result<Option<DecompositionWitness>> {
        let pc = tp.chart.apply(p)? + tp.shift_d + tp.shift_t;
        let back = |q2c: LatticeVector| tp.chart.unapply(q2c - tp.shift_t);
        let (a, b) = tp.legs;
        if let Some(row) = tp.pd.line_interval(Axis::Rows, pc.y)? {
            let leg = RationalInterval::integral(0, a);
            if let Some((_, c2)) = soft(decompose_interval(row, leg, pc.x as i128))? {
                let q2 = back(LatticeVector::new(to_i64(c2)?, 0))?;
                if let Some(w) = self.accept(p, q2, DecompositionPath::TriangleRegionA)? {
                    return Ok(Some(w));
                }
            }
        }
        if let Some(col) = tp.pd.line_interval(Axis::Columns, pc.x)? {
            let leg = RationalInterval::integral(0, b);
            if let Some((_, c2)) = soft(decompose_interval(col, leg, pc.y as i128))? {
                let q2 = back(LatticeVector::new(0, to_i64(c2)?))?;
                if let Some(w) = self.accept(p, q2, DecompositionPath::TriangleRegionB)? {
                    return Ok(Some(w));
                }
            }
        }
        if let Some(rc) = &tp.region_c {
            if let Some((_, q2c)) = soft(decompose_homothetic_triangles(rc, &tp.t, pc))? {
                if let Some(w) = self.accept(p, back(q2c)?, DecompositionPath::TriangleRegionC)? {
                    return Ok(Some(w));
                }
            }
        }
        Ok(None)
    }
}

/// Decomposes `p ∈ P_{D+E} ∩ M` for `D` ample and `E` globally generated without
/// exhaustive search where the polygon geometry allows it.
pub fn decompose_structured(
    fan: &Fan,
    d: &TorusDivisor,
    e: &TorusDivisor,
    p: LatticeVector,
) -> Result<DecompositionWitness> {
    StructuredDecomposer::new(fan, d, e)?.decompose(p)
}
