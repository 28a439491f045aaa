use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;

use super::vector::{ceil_div, ck_add, ck_mul, ck_sub, floor_div, narrow, orient, COORD_BOUND};
use super::{LatticeVector, RationalInterval, RationalPoint};
use crate::Rational;
use crate::error::{Error, Result};

/// The closed half-plane `{ u : <u, normal> >= -offset }` with a primitive normal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HalfPlane {
    normal: LatticeVector,
    offset: i64,
}

impl HalfPlane {
    pub fn new(normal: LatticeVector, offset: i64) -> Result<Self> {
        if !normal.is_primitive() {
            return Err(Error::NonPrimitiveNormal(normal));
        }
        normal.check_bound()?;
        if offset.unsigned_abs() > COORD_BOUND as u64 {
            return Err(Error::CoordinateBound(offset as i128));
        }
        Ok(HalfPlane { normal, offset })
    }

    pub fn normal(&self) -> LatticeVector {
        self.normal
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn contains(&self, u: LatticeVector) -> bool {
        u.dot(self.normal) >= -(self.offset as i128)
    }
}

impl fmt::Display for HalfPlane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<u,{}> >= {}", self.normal, -self.offset)
    }
}

/// `a*x + b*y >= r`, the working form of every linear inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Constraint {
    pub a: i128,
    pub b: i128,
    pub r: i128,
}

impl Constraint {
    pub fn new(a: i128, b: i128, r: i128) -> Self {
        let g = a.gcd(&b).gcd(&r);
        if g > 1 {
            Constraint { a: a / g, b: b / g, r: r / g }
        } else {
            Constraint { a, b, r }
        }
    }

    fn from_halfplane(h: &HalfPlane) -> Self {
        Constraint {
            a: h.normal.x as i128,
            b: h.normal.y as i128,
            r: -(h.offset as i128),
        }
    }

    /// Sign of `a*x + b*y - r` at `p`.
    pub fn side(&self, p: &RationalPoint) -> Result<Ordering> {
        let lhs = ck_add(ck_mul(self.a, p.x_num())?, ck_mul(self.b, p.y_num())?)?;
        Ok(lhs.cmp(&ck_mul(self.r, p.den())?))
    }

    pub fn holds_at(&self, v: LatticeVector) -> Result<bool> {
        let lhs = ck_add(ck_mul(self.a, v.x as i128)?, ck_mul(self.b, v.y as i128)?)?;
        Ok(lhs >= self.r)
    }

    fn is_parallel(&self, o: &Constraint) -> Result<bool> {
        Ok(ck_mul(self.a, o.b)? == ck_mul(self.b, o.a)?)
    }

    /// Intersection point of the two boundary lines, `None` when parallel.
    pub fn meet(&self, o: &Constraint) -> Result<Option<RationalPoint>> {
        let det = ck_sub(ck_mul(self.a, o.b)?, ck_mul(o.a, self.b)?)?;
        if det == 0 {
            return Ok(None);
        }
        let xn = ck_sub(ck_mul(self.r, o.b)?, ck_mul(o.r, self.b)?)?;
        let yn = ck_sub(ck_mul(self.a, o.r)?, ck_mul(o.a, self.r)?)?;
        RationalPoint::new(xn, yn, det).map(Some)
    }

    fn to_halfplane(self) -> Option<HalfPlane> {
        let g = self.a.gcd(&self.b);
        if g == 0 || self.r % g != 0 {
            return None;
        }
        let normal = LatticeVector::new(
            i64::try_from(self.a / g).ok()?,
            i64::try_from(self.b / g).ok()?,
        );
        let offset = i64::try_from(-(self.r / g)).ok()?;
        Some(HalfPlane { normal, offset })
    }
}

fn normal_angle_cmp(p: (i128, i128), q: (i128, i128)) -> Ordering {
    let half = |(x, y): (i128, i128)| u8::from(!(y > 0 || (y == 0 && x > 0)));
    half(p)
        .cmp(&half(q))
        .then_with(|| 0.cmp(&(p.0 * q.1 - p.1 * q.0)))
}

/// True when the normals positively span the plane, i.e. every region they cut out
/// is bounded.
fn positively_spanning(cs: &[Constraint]) -> bool {
    let mut dirs: Vec<(i128, i128)> = cs
        .iter()
        .map(|c| {
            let g = c.a.gcd(&c.b);
            (c.a / g, c.b / g)
        })
        .collect();
    dirs.sort_by(|p, q| normal_angle_cmp(*p, *q));
    dirs.dedup();
    if dirs.len() < 3 {
        return false;
    }
    (0..dirs.len()).all(|i| {
        let (p, q) = (dirs[i], dirs[(i + 1) % dirs.len()]);
        p.0 * q.1 - p.1 * q.0 > 0
    })
}

/// Vertices of `{ u : c(u) for all c }`, `None` for the empty set.
pub(crate) fn solve(cs: &[Constraint]) -> Result<Option<Vec<RationalPoint>>> {
    let mut live = Vec::with_capacity(cs.len());
    for c in cs {
        if c.a == 0 && c.b == 0 {
            if c.r > 0 {
                return Ok(None);
            }
        } else {
            live.push(*c);
        }
    }
    let Some(first) = live.first().copied() else {
        return Err(Error::UnboundedRegion);
    };

    let mut all_parallel = true;
    for c in &live {
        if !first.is_parallel(c)? {
            all_parallel = false;
            break;
        }
    }
    if all_parallel {
        // One-dimensional problem in t = <u, n0>: each constraint is k*t >= r.
        let g = first.a.gcd(&first.b);
        let (n0a, n0b) = (first.a / g, first.b / g);
        let mut lower: Option<(i128, i128)> = None;
        let mut upper: Option<(i128, i128)> = None;
        for c in &live {
            let k = if n0a != 0 { c.a / n0a } else { c.b / n0b };
            // t >= r/k for k > 0, t <= r/k for k < 0; stored with positive denominator.
            let bound = if k > 0 { (c.r, k) } else { (-c.r, -k) };
            let slot = if k > 0 { &mut lower } else { &mut upper };
            let tighter = match slot {
                None => true,
                Some((n, d)) => {
                    let lhs = ck_mul(bound.0, *d)?;
                    let rhs = ck_mul(*n, bound.1)?;
                    if k > 0 {
                        lhs > rhs
                    } else {
                        lhs < rhs
                    }
                }
            };
            if tighter {
                *slot = Some(bound);
            }
        }
        if let (Some((ln, ld)), Some((un, ud))) = (lower, upper) {
            if ck_mul(ln, ud)? > ck_mul(un, ld)? {
                return Ok(None);
            }
        }
        return Err(Error::UnboundedRegion);
    }

    let mut feasible = Vec::new();
    for i in 0..live.len() {
        for j in (i + 1)..live.len() {
            let Some(p) = live[i].meet(&live[j])? else {
                continue;
            };
            let mut ok = true;
            for c in &live {
                if c.side(&p)? == Ordering::Less {
                    ok = false;
                    break;
                }
            }
            if ok {
                feasible.push(p);
            }
        }
    }
    if feasible.is_empty() {
        return Ok(None);
    }
    if !positively_spanning(&live) {
        return Err(Error::UnboundedRegion);
    }
    hull_points(feasible).map(Some)
}

/// Monotone-chain hull; output is counterclockwise from the lexicographic minimum with
/// no collinear triples. Empty input gives an empty list.
pub(crate) fn hull_points(mut pts: Vec<RationalPoint>) -> Result<Vec<RationalPoint>> {
    let mut overflow = false;
    pts.sort_by(|a, b| {
        a.try_cmp(b).unwrap_or_else(|_| {
            overflow = true;
            Ordering::Equal
        })
    });
    if overflow {
        return Err(Error::Overflow);
    }
    pts.dedup();
    if pts.len() <= 2 {
        return Ok(pts);
    }
    let mut chain: Vec<RationalPoint> = Vec::with_capacity(pts.len() + 1);
    for pass in 0..2 {
        let start = chain.len();
        let iter: Box<dyn Iterator<Item = &RationalPoint>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for p in iter {
            while chain.len() >= start + 2
                && orient(&chain[chain.len() - 2], &chain[chain.len() - 1], p)? != Ordering::Greater
            {
                chain.pop();
            }
            chain.push(*p);
        }
        chain.pop();
    }
    Ok(chain)
}

/// Affine dimension class of a polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dim {
    Empty,
    Point,
    Segment,
    Polygon,
}

/// A face `P ∩ { <u,v> = -c }`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Face {
    Empty,
    Vertex(RationalPoint),
    /// Endpoints in lexicographic order.
    Edge(RationalPoint, RationalPoint),
}

impl Face {
    pub fn is_edge(&self) -> bool {
        matches!(self, Face::Edge(..))
    }

    pub fn endpoints(&self) -> Vec<RationalPoint> {
        match *self {
            Face::Empty => vec![],
            Face::Vertex(p) => vec![p],
            Face::Edge(p, q) => vec![p, q],
        }
    }

    /// Number of lattice points on the face.
    pub fn lattice_count(&self) -> Result<u64> {
        match self {
            Face::Empty => Ok(0),
            Face::Vertex(p) => Ok(u64::from(p.is_lattice())),
            Face::Edge(p, q) => {
                let seg = ConvexLatticePolygon::from_canonical(vec![*p, *q], None)?;
                seg.lattice_count()
            }
        }
    }

    /// Face-wise Minkowski sum; `None` if either face is empty.
    pub fn sum(&self, other: &Face) -> Result<Option<Face>> {
        let (a, b) = (self.endpoints(), other.endpoints());
        if a.is_empty() || b.is_empty() {
            return Ok(None);
        }
        let mut sums = Vec::with_capacity(4);
        for p in &a {
            for q in &b {
                sums.push(p.checked_add(q)?);
            }
        }
        let hull = hull_points(sums)?;
        Ok(Some(match hull.as_slice() {
            [p] => Face::Vertex(*p),
            [p, q] => Face::Edge(*p, *q),
            _ => return Err(Error::precondition("faces are not parallel segments")),
        }))
    }
}

/// Which coordinate indexes the slices of a lattice sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Horizontal lines `y = const`; the range runs over `x`.
    Rows,
    /// Vertical lines `x = const`; the range runs over `y`.
    Columns,
}

/// Integer points `lo..=hi` on the line `at` of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Slice {
    pub at: i64,
    pub lo: i64,
    pub hi: i64,
}

impl Slice {
    pub fn len(&self) -> u64 {
        (self.hi - self.lo + 1) as u64
    }

    pub fn is_empty(&self) -> bool {
        self.hi < self.lo
    }
}

/// A bounded convex region with exact rational vertices.
///
/// The vertex list is canonical (counterclockwise from the lexicographically smallest
/// vertex, no collinear triples), so equality of regions is equality of vertex lists.
#[derive(Debug, Clone)]
pub struct ConvexLatticePolygon {
    hrep: Vec<HalfPlane>,
    vertices: Vec<RationalPoint>,
    facets: Vec<Constraint>,
}

impl PartialEq for ConvexLatticePolygon {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
    }
}

impl Eq for ConvexLatticePolygon {}

impl ConvexLatticePolygon {
    pub fn empty() -> Self {
        ConvexLatticePolygon {
            hrep: Vec::new(),
            vertices: Vec::new(),
            facets: Vec::new(),
        }
    }

    /// Builds from a vertex list already in canonical order.
    pub(crate) fn from_canonical(
        vertices: Vec<RationalPoint>,
        hrep: Option<Vec<HalfPlane>>,
    ) -> Result<Self> {
        let facets = facets_of(&vertices)?;
        let hrep = hrep.unwrap_or_else(|| facets.iter().filter_map(|c| c.to_halfplane()).collect());
        Ok(ConvexLatticePolygon {
            hrep,
            vertices,
            facets,
        })
    }

    /// Convex hull of arbitrary rational points.
    pub fn from_points(points: Vec<RationalPoint>) -> Result<Self> {
        Self::from_canonical(hull_points(points)?, None)
    }

    pub fn dim(&self) -> Dim {
        match self.vertices.len() {
            0 => Dim::Empty,
            1 => Dim::Point,
            2 => Dim::Segment,
            _ => Dim::Polygon,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[RationalPoint] {
        &self.vertices
    }

    /// Defining half-planes: the input of [`intersect_halfplanes`], or the facets with
    /// integral data for polygons built from points.
    pub fn hrep(&self) -> &[HalfPlane] {
        &self.hrep
    }

    pub fn has_lattice_vertices(&self) -> bool {
        self.vertices.iter().all(RationalPoint::is_lattice)
    }

    /// Vertices as lattice points, if they all are.
    pub fn lattice_vertices(&self) -> Option<Vec<LatticeVector>> {
        self.vertices.iter().map(RationalPoint::to_lattice).collect()
    }

    pub fn contains(&self, p: &RationalPoint) -> Result<bool> {
        if self.is_empty() {
            return Ok(false);
        }
        for c in &self.facets {
            if c.side(p)? == Ordering::Less {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn contains_lattice(&self, v: LatticeVector) -> Result<bool> {
        if self.is_empty() {
            return Ok(false);
        }
        for c in &self.facets {
            if !c.holds_at(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// True when `p` satisfies every facet strictly. Only 2-dimensional polygons have
    /// interior points.
    pub fn interior_contains(&self, p: &RationalPoint) -> Result<bool> {
        if self.dim() != Dim::Polygon {
            return Ok(false);
        }
        for c in &self.facets {
            if c.side(p)? != Ordering::Greater {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn translate(&self, t: LatticeVector) -> Result<Self> {
        let t = RationalPoint::from_lattice(t);
        let vs = self
            .vertices
            .iter()
            .map(|v| v.checked_add(&t))
            .collect::<Result<Vec<_>>>()?;
        Self::from_canonical(vs, None)
    }

    /// The point reflection `{ -u : u in P }`.
    pub fn negate(&self) -> Result<Self> {
        let vs = self.vertices.iter().map(RationalPoint::neg).collect();
        Self::from_points(vs)
    }

    /// `{ p - u : u in P }`.
    pub fn reflect_through(&self, p: LatticeVector) -> Result<Self> {
        self.negate()?.translate(p)
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        if self.is_empty() || other.is_empty() {
            return Ok(Self::empty());
        }
        let mut cs = self.facets.clone();
        cs.extend_from_slice(&other.facets);
        match solve(&cs)? {
            None => Ok(Self::empty()),
            Some(vs) => Self::from_canonical(vs, None),
        }
    }

    fn coord_range(&self, axis: Axis) -> Option<(i64, i64)> {
        let coord = |p: &RationalPoint| match axis {
            Axis::Rows => (p.y_num(), p.den()),
            Axis::Columns => (p.x_num(), p.den()),
        };
        let mut lo = i128::MAX;
        let mut hi = i128::MIN;
        for p in &self.vertices {
            let (n, d) = coord(p);
            lo = lo.min(ceil_div(n, d));
            hi = hi.max(floor_div(n, d));
        }
        if lo > hi {
            return None;
        }
        Some((lo as i64, hi as i64))
    }

    /// Integer points grouped by lines of the sweep, in increasing order of line; only
    /// nonempty slices are returned.
    pub fn slices(&self, axis: Axis) -> Result<Vec<Slice>> {
        let Some((first, last)) = self.coord_range(axis) else {
            return Ok(Vec::new());
        };
        let mut out = Vec::with_capacity((last - first + 1) as usize);
        for at in first..=last {
            let mut lo = i128::MIN;
            let mut hi = i128::MAX;
            let at128 = at as i128;
            for c in &self.facets {
                // (fixed, free) coefficients for this axis.
                let (kf, kv) = match axis {
                    Axis::Rows => (c.b, c.a),
                    Axis::Columns => (c.a, c.b),
                };
                let rhs = ck_sub(c.r, ck_mul(kf, at128)?)?;
                match kv.cmp(&0) {
                    Ordering::Greater => lo = lo.max(ceil_div(rhs, kv)),
                    Ordering::Less => hi = hi.min(floor_div(rhs, kv)),
                    Ordering::Equal => {
                        if rhs > 0 {
                            lo = i128::MAX;
                            hi = i128::MIN;
                            break;
                        }
                    }
                }
            }
            if lo <= hi {
                out.push(Slice {
                    at,
                    lo: narrow(lo)?,
                    hi: narrow(hi)?,
                });
            }
        }
        Ok(out)
    }

    pub fn lattice_count(&self) -> Result<u64> {
        Ok(self.slices(Axis::Columns)?.iter().map(Slice::len).sum())
    }

    /// Lexicographically smallest lattice point.
    pub fn first_lattice_point(&self) -> Result<Option<LatticeVector>> {
        let Some((first, last)) = self.coord_range(Axis::Columns) else {
            return Ok(None);
        };
        for x in first..=last {
            if let Some(s) = self.column(x)? {
                return Ok(Some(LatticeVector::new(x, s.lo)));
            }
        }
        Ok(None)
    }

    fn column(&self, x: i64) -> Result<Option<Slice>> {
        let mut lo = i128::MIN;
        let mut hi = i128::MAX;
        for c in &self.facets {
            let rhs = ck_sub(c.r, ck_mul(c.a, x as i128)?)?;
            match c.b.cmp(&0) {
                Ordering::Greater => lo = lo.max(ceil_div(rhs, c.b)),
                Ordering::Less => hi = hi.min(floor_div(rhs, c.b)),
                Ordering::Equal => {
                    if rhs > 0 {
                        return Ok(None);
                    }
                }
            }
        }
        if lo > hi {
            return Ok(None);
        }
        Ok(Some(Slice {
            at: x,
            lo: narrow(lo)?,
            hi: narrow(hi)?,
        }))
    }

    /// `P ∩ { u : <u,v> = -c }`.
    pub fn face(&self, v: LatticeVector, c: i64) -> Result<Face> {
        if self.is_empty() {
            return Ok(Face::Empty);
        }
        let line = Constraint::new(v.x as i128, v.y as i128, -(c as i128));
        let signs = self
            .vertices
            .iter()
            .map(|p| line.side(p))
            .collect::<Result<Vec<_>>>()?;
        let mut hits: Vec<RationalPoint> = self
            .vertices
            .iter()
            .zip(&signs)
            .filter(|(_, s)| **s == Ordering::Equal)
            .map(|(p, _)| *p)
            .collect();
        let k = self.vertices.len();
        if k >= 2 {
            let edges = if k == 2 { 1 } else { k };
            for i in 0..edges {
                let j = (i + 1) % k;
                let crossing = matches!(
                    (signs[i], signs[j]),
                    (Ordering::Less, Ordering::Greater) | (Ordering::Greater, Ordering::Less)
                );
                if crossing {
                    // For segments facets[0] is the supporting line; for polygons facet i
                    // supports edge i.
                    if let Some(p) = line.meet(&self.facets[i])? {
                        hits.push(p);
                    }
                }
            }
        }
        let hits = hull_points(hits)?;
        Ok(match hits.as_slice() {
            [] => Face::Empty,
            [p] => Face::Vertex(*p),
            [p, q] => Face::Edge(*p, *q),
            _ => unreachable!("a line meets a convex region in at most a segment"),
        })
    }

    /// Value `min <u, v>` over the region.
    pub fn min_dot(&self, v: LatticeVector) -> Result<Option<crate::Rational>> {
        let mut best: Option<crate::Rational> = None;
        for p in &self.vertices {
            let (n, d) = p.dot(v)?;
            let q = crate::Rational::new(n, d);
            best = Some(match best {
                Some(b) if b <= q => b,
                _ => q,
            });
        }
        Ok(best)
    }

    /// Image under the linear map `u -> (<u, f1>, <u, f2>)`.
    pub fn linear_image(&self, f1: LatticeVector, f2: LatticeVector) -> Result<Self> {
        let vs = self
            .vertices
            .iter()
            .map(|p| {
                let (a, d) = p.dot(f1)?;
                let (b, _) = p.dot(f2)?;
                RationalPoint::new(a, b, d)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_points(vs)
    }

    /// Exact rational extent of the region on one line of a sweep, `None` when the line
    /// misses it.
    pub fn line_interval(&self, axis: Axis, at: i64) -> Result<Option<RationalInterval>> {
        if self.is_empty() {
            return Ok(None);
        }
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for c in &self.facets {
            let (kf, kv) = match axis {
                Axis::Rows => (c.b, c.a),
                Axis::Columns => (c.a, c.b),
            };
            let rhs = ck_sub(c.r, ck_mul(kf, at as i128)?)?;
            match kv.cmp(&0) {
                Ordering::Greater => {
                    let t = Rational::new(rhs, kv);
                    lo = Some(lo.map_or(t, |l| l.max(t)));
                }
                Ordering::Less => {
                    let t = Rational::new(rhs, kv);
                    hi = Some(hi.map_or(t, |h| h.min(t)));
                }
                Ordering::Equal => {
                    if rhs > 0 {
                        return Ok(None);
                    }
                }
            }
        }
        match (lo, hi) {
            (Some(l), Some(h)) if l <= h => Ok(Some(RationalInterval::new(l, h))),
            (Some(_), Some(_)) => Ok(None),
            _ => Err(Error::UnboundedRegion),
        }
    }

    fn edge_vectors(&self) -> Result<Vec<RationalPoint>> {
        let k = self.vertices.len();
        if k < 2 {
            return Ok(Vec::new());
        }
        (0..k)
            .map(|i| self.vertices[(i + 1) % k].checked_sub(&self.vertices[i]))
            .collect()
    }
}

fn facets_of(vs: &[RationalPoint]) -> Result<Vec<Constraint>> {
    let through = |p: &RationalPoint, n: (i128, i128)| -> Result<Constraint> {
        Ok(Constraint::new(
            ck_mul(p.den(), n.0)?,
            ck_mul(p.den(), n.1)?,
            ck_add(ck_mul(p.x_num(), n.0)?, ck_mul(p.y_num(), n.1)?)?,
        ))
    };
    match vs {
        [] => Ok(Vec::new()),
        [p] => Ok(vec![
            through(p, (1, 0))?,
            through(p, (-1, 0))?,
            through(p, (0, 1))?,
            through(p, (0, -1))?,
        ]),
        [p, q] => {
            let (dx, dy) = q
                .checked_sub(p)?
                .primitive_direction()
                .ok_or_else(|| Error::precondition("degenerate segment"))?;
            Ok(vec![
                through(p, (-dy, dx))?,
                through(p, (dy, -dx))?,
                through(p, (dx, dy))?,
                through(q, (-dx, -dy))?,
            ])
        }
        _ => {
            let k = vs.len();
            (0..k)
                .map(|i| {
                    let (dx, dy) = vs[(i + 1) % k]
                        .checked_sub(&vs[i])?
                        .primitive_direction()
                        .ok_or_else(|| Error::precondition("repeated vertex"))?;
                    through(&vs[i], (-dy, dx))
                })
                .collect()
        }
    }
}

/// Canonical convex hull of a list of lattice points.
pub fn hull(points: &[LatticeVector]) -> Result<ConvexLatticePolygon> {
    let pts = points
        .iter()
        .map(|p| p.check_bound().map(RationalPoint::from_lattice))
        .collect::<Result<Vec<_>>>()?;
    ConvexLatticePolygon::from_points(pts)
}

/// Canonical convex hull of rational points.
pub fn hull_rational(points: &[RationalPoint]) -> Result<ConvexLatticePolygon> {
    ConvexLatticePolygon::from_points(points.to_vec())
}

/// Intersection of closed half-planes. The original half-planes are kept as the
/// polygon's `hrep`.
pub fn intersect_halfplanes(planes: &[HalfPlane]) -> Result<ConvexLatticePolygon> {
    if planes.is_empty() {
        return Err(Error::precondition("at least one half-plane is required"));
    }
    let cs: Vec<Constraint> = planes.iter().map(Constraint::from_halfplane).collect();
    match solve(&cs)? {
        None => Ok(ConvexLatticePolygon {
            hrep: planes.to_vec(),
            vertices: Vec::new(),
            facets: Vec::new(),
        }),
        Some(vs) => ConvexLatticePolygon::from_canonical(vs, Some(planes.to_vec())),
    }
}

/// Minkowski sum by merging edge sequences in angular order.
pub fn minkowski_sum(
    a: &ConvexLatticePolygon,
    b: &ConvexLatticePolygon,
) -> Result<ConvexLatticePolygon> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyInput);
    }
    let ea = a.edge_vectors()?;
    let eb = b.edge_vectors()?;
    let mut merged: Vec<RationalPoint> = Vec::with_capacity(ea.len() + eb.len());
    let (mut i, mut j) = (0, 0);
    while i < ea.len() || j < eb.len() {
        let next = if i == ea.len() {
            j += 1;
            eb[j - 1]
        } else if j == eb.len() {
            i += 1;
            ea[i - 1]
        } else {
            match ea[i].edge_angle_cmp(&eb[j])? {
                Ordering::Less => {
                    i += 1;
                    ea[i - 1]
                }
                Ordering::Greater => {
                    j += 1;
                    eb[j - 1]
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                    ea[i - 1].checked_add(&eb[j - 1])?
                }
            }
        };
        merged.push(next);
    }
    let mut cur = a.vertices[0].checked_add(&b.vertices[0])?;
    let mut vs = Vec::with_capacity(merged.len().max(1));
    vs.push(cur);
    for e in merged.iter().take(merged.len().saturating_sub(1)) {
        cur = cur.checked_add(e)?;
        vs.push(cur);
    }
    ConvexLatticePolygon::from_canonical(vs, None)
}

/// All lattice points, sorted lexicographically.
pub fn lattice_points(p: &ConvexLatticePolygon) -> Result<Vec<LatticeVector>> {
    let mut out = Vec::new();
    for s in p.slices(Axis::Columns)? {
        out.extend((s.lo..=s.hi).map(|y| LatticeVector::new(s.at, y)));
    }
    Ok(out)
}

/// Lattice point count by Pick's theorem; requires a nonempty polygon with lattice
/// vertices.
pub fn pick_count(p: &ConvexLatticePolygon) -> Result<u64> {
    let vs = p
        .lattice_vertices()
        .ok_or_else(|| Error::precondition("pick_count needs lattice vertices"))?;
    if vs.is_empty() {
        return Err(Error::precondition("pick_count needs a nonempty polygon"));
    }
    let k = vs.len();
    let mut twice_area: i128 = 0;
    let mut boundary: i128 = 0;
    if k >= 2 {
        for i in 0..k {
            let (u, w) = (vs[i], vs[(i + 1) % k]);
            twice_area = ck_add(twice_area, u.cross(w))?;
            boundary += (w - u).gcd() as i128;
        }
    }
    if k == 2 {
        // The cyclic walk traverses the segment twice.
        twice_area = 0;
    }
    Ok(((twice_area + boundary) / 2 + 1) as u64)
}

/// `P ∩ { u : <u,v> = -c }`; see [`ConvexLatticePolygon::face`].
pub fn face_in_direction(p: &ConvexLatticePolygon, v: LatticeVector, c: i64) -> Result<Face> {
    p.face(v, c)
}
