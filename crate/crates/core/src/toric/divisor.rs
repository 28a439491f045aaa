use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::Fan;
use crate::error::{Error, Result};
use crate::geometry::{intersect_halfplanes, ConvexLatticePolygon, Face, HalfPlane, LatticeVector};
use crate::Rational;

/// A torus-invariant divisor `sum a_i D_i`, coefficients aligned with [`Fan::rays`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorusDivisor {
    coeffs: Vec<i64>,
}

impl TorusDivisor {
    pub fn new(coeffs: Vec<i64>) -> Self {
        TorusDivisor { coeffs }
    }

    pub fn zero(n: usize) -> Self {
        TorusDivisor { coeffs: vec![0; n] }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn check_len(&self, fan: &Fan) -> Result<()> {
        if self.len() != fan.len() {
            return Err(Error::LengthMismatch {
                expected: fan.len(),
                got: self.len(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &TorusDivisor) -> Result<TorusDivisor> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()
            .map(TorusDivisor::new)
    }

    /// The linearly equivalent divisor whose polygon is `P_D + m`, i.e.
    /// `a_i - <m, v_i>`.
    pub fn translated(&self, fan: &Fan, m: LatticeVector) -> Result<TorusDivisor> {
        self.check_len(fan)?;
        self.coeffs
            .iter()
            .zip(fan.rays())
            .map(|(a, v)| {
                let c = *a as i128 - m.dot(*v);
                i64::try_from(c).map_err(|_| Error::Overflow)
            })
            .collect::<Result<Vec<_>>>()
            .map(TorusDivisor::new)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|&a| a >= 0)
    }

    /// Coefficients joined by `|`, the CSV encoding.
    pub fn to_key(&self) -> String {
        self.coeffs
            .iter()
            .map(i64::to_string)
            .collect::<Vec<_>>()
            .join("|")
    }
}

impl fmt::Display for TorusDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

impl From<Vec<i64>> for TorusDivisor {
    fn from(v: Vec<i64>) -> Self {
        TorusDivisor::new(v)
    }
}

/// Positivity of a divisor on a fixed fan. Exactly one class applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PositivityClass {
    Ample,
    GloballyGeneratedNotAmple,
    EffectiveSectionsOnly,
    NoSections,
}

impl PositivityClass {
    pub const ALL: [PositivityClass; 4] = [
        PositivityClass::Ample,
        PositivityClass::GloballyGeneratedNotAmple,
        PositivityClass::EffectiveSectionsOnly,
        PositivityClass::NoSections,
    ];

    pub fn is_globally_generated(self) -> bool {
        matches!(
            self,
            PositivityClass::Ample | PositivityClass::GloballyGeneratedNotAmple
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PositivityClass::Ample => "ample",
            PositivityClass::GloballyGeneratedNotAmple => "globally_generated_not_ample",
            PositivityClass::EffectiveSectionsOnly => "effective_sections_only",
            PositivityClass::NoSections => "no_sections",
        }
    }
}

impl fmt::Display for PositivityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PositivityClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "ample" => PositivityClass::Ample,
            "globally_generated_not_ample" | "gg" => PositivityClass::GloballyGeneratedNotAmple,
            "effective_sections_only" | "sections" => PositivityClass::EffectiveSectionsOnly,
            "no_sections" | "none" => PositivityClass::NoSections,
            other => {
                return Err(Error::Parse {
                    path: "class".into(),
                    message: format!("unknown positivity class `{other}`"),
                })
            }
        })
    }
}

/// `P_D = { u : <u, v_i> >= -a_i for all i }`.
pub fn polygon_of(fan: &Fan, d: &TorusDivisor) -> Result<ConvexLatticePolygon> {
    d.check_len(fan)?;
    let planes = fan
        .rays()
        .iter()
        .zip(d.coeffs())
        .map(|(v, a)| HalfPlane::new(*v, *a))
        .collect::<Result<Vec<_>>>()?;
    intersect_halfplanes(&planes)
}

/// Number of sections, the lattice point count of `P_D`.
pub fn h0(fan: &Fan, d: &TorusDivisor) -> Result<u64> {
    polygon_of(fan, d)?.lattice_count()
}

/// `σ_i(D) = P_D ∩ { <u, v_i> = -a_i }`.
pub fn sigma_face(fan: &Fan, d: &TorusDivisor, i: usize) -> Result<Face> {
    polygon_of(fan, d)?.face(fan.ray(i), d.coeffs()[i % d.len()])
}

/// Classification from an already computed polygon of `d`.
pub fn classify_polygon(
    fan: &Fan,
    d: &TorusDivisor,
    p: &ConvexLatticePolygon,
) -> Result<PositivityClass> {
    if p.is_empty() {
        return Ok(PositivityClass::NoSections);
    }
    let mut tight = true;
    for (v, a) in fan.rays().iter().zip(d.coeffs()) {
        let m = p.min_dot(*v)?.expect("nonempty");
        if m != Rational::from_integer(-(*a as i128)) {
            tight = false;
            break;
        }
    }
    if tight && p.has_lattice_vertices() {
        for (v, a) in fan.rays().iter().zip(d.coeffs()) {
            if !p.face(*v, *a)?.is_edge() {
                return Ok(PositivityClass::GloballyGeneratedNotAmple);
            }
        }
        return Ok(PositivityClass::Ample);
    }
    if p.lattice_count()? > 0 {
        Ok(PositivityClass::EffectiveSectionsOnly)
    } else {
        Ok(PositivityClass::NoSections)
    }
}

/// Ample when every `σ_i(D)` is a nondegenerate edge; globally generated when every
/// offset is attained by `P_D` and all vertices are lattice points.
pub fn classify(fan: &Fan, d: &TorusDivisor) -> Result<PositivityClass> {
    let p = polygon_of(fan, d)?;
    classify_polygon(fan, d, &p)
}
