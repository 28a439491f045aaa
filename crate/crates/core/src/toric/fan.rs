use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::LatticeVector;

/// A complete smooth fan in the plane: primitive rays in counterclockwise order with
/// `det(v_i, v_{i+1}) = 1` for every consecutive pair (indices mod `n`).
///
/// Rays are stored starting from the ray of smallest polar angle in `[0, 2pi)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fan {
    rays: Vec<LatticeVector>,
    input_offset: usize,
}

impl Fan {
    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    /// Ray `i`, indices taken mod `n`.
    pub fn ray(&self, i: usize) -> LatticeVector {
        self.rays[i % self.rays.len()]
    }

    /// Position in the validated input of the ray stored first.
    pub fn input_offset(&self) -> usize {
        self.input_offset
    }

    /// Reorders a coefficient list aligned with the rays as originally given to
    /// [`validate_fan`] so that it aligns with [`Fan::rays`].
    pub fn align_input_coeffs(&self, coeffs: &[i64]) -> Result<Vec<i64>> {
        let n = self.len();
        if coeffs.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: coeffs.len(),
            });
        }
        Ok((0..n).map(|i| coeffs[(i + self.input_offset) % n]).collect())
    }

    /// Inverse of [`Fan::align_input_coeffs`].
    pub fn to_input_order(&self, coeffs: &[i64]) -> Vec<i64> {
        let n = self.len();
        (0..n)
            .map(|i| coeffs[(i + n - self.input_offset % n) % n])
            .collect()
    }

    /// Rays in the order originally given to [`validate_fan`].
    pub fn input_rays(&self) -> Vec<LatticeVector> {
        let n = self.len();
        (0..n)
            .map(|j| self.rays[(j + n - self.input_offset % n) % n])
            .collect()
    }

    /// Position in the original input of stored ray `i`.
    pub fn input_index(&self, i: usize) -> usize {
        (i + self.input_offset) % self.len()
    }

    /// The fan obtained by inserting `v_i + v_{i+1}` between rays `i` and `i + 1`.
    pub fn blowup(&self, corner: usize) -> Result<Fan> {
        let n = self.len();
        if corner >= n {
            return Err(Error::out_of_range(format!(
                "corner {corner} of a fan with {n} rays"
            )));
        }
        let mut rays = self.rays.clone();
        let new = self.ray(corner) + self.ray(corner + 1);
        rays.insert(corner + 1, new);
        validate_fan(&rays)
    }
}

impl fmt::Display for Fan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, r) in self.rays.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{r}")?;
        }
        f.write_str("]")
    }
}

/// Validates and normalizes a list of rays.
///
/// Checks, in order: at least three rays, primitivity, distinctness, strictly
/// increasing angular order over a single turn, then `det(v_i, v_{i+1})` for each
/// consecutive pair. A non-positive determinant means the pair does not bound a
/// strictly convex cone and is reported as incompleteness.
pub fn validate_fan(rays: &[LatticeVector]) -> Result<Fan> {
    let n = rays.len();
    if n < 3 {
        return Err(Error::NonCompleteFan(format!(
            "{n} rays cannot cover the plane"
        )));
    }
    for (index, &ray) in rays.iter().enumerate() {
        ray.check_bound()?;
        if !ray.is_primitive() {
            return Err(Error::NonPrimitiveRay { index, ray });
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if rays[i] == rays[j] {
                return Err(Error::DuplicateRay {
                    ray: rays[i],
                    first: i,
                    second: j,
                });
            }
        }
    }
    let start = (0..n)
        .min_by(|&i, &j| rays[i].angle_cmp(rays[j]))
        .expect("nonempty");
    let rotated: Vec<LatticeVector> = (0..n).map(|i| rays[(start + i) % n]).collect();
    if let Some(w) = rotated
        .windows(2)
        .find(|w| w[0].angle_cmp(w[1]) != Ordering::Less)
    {
        return Err(Error::NonCompleteFan(format!(
            "rays are not in counterclockwise order ({} before {})",
            w[0], w[1]
        )));
    }
    for i in 0..n {
        let det = rays[i].cross(rays[(i + 1) % n]);
        if det <= 0 {
            return Err(Error::NonCompleteFan(format!(
                "rays {} and {} span no strictly convex cone",
                rays[i],
                rays[(i + 1) % n]
            )));
        }
        if det != 1 {
            return Err(Error::NonSmoothFan { index: i, det });
        }
    }
    Ok(Fan {
        rays: rotated,
        input_offset: start,
    })
}
