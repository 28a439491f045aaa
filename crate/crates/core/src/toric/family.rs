use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{classify, validate_fan, Fan, PositivityClass, TorusDivisor};
use crate::error::{Error, Result};
use crate::geometry::LatticeVector;

/// Default upper limit on the ray count of generated fans.
pub const MAX_RAYS: usize = 12;

/// Default number of draws before [`random_divisor`] gives up.
pub const SAMPLING_BUDGET: u64 = 100_000;

/// A named smooth complete fan: `P^2`, `P^1 x P^1`, a Hirzebruch surface, or a chain
/// of corner blowups of one of these.
///
/// Text form: `p2`, `p1xp1`, `f<a>` (or `hirzebruch:<a>`), followed by any number of
/// `/<corner>` suffixes, e.g. `p2/0/3`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FamilySpec {
    ProjectivePlane,
    ProductP1P1,
    Hirzebruch(u32),
    Blowup(Box<FamilySpec>, usize),
}

impl FamilySpec {
    pub fn blowup(self, corner: usize) -> FamilySpec {
        FamilySpec::Blowup(Box::new(self), corner)
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::ProjectivePlane => f.write_str("p2"),
            FamilySpec::ProductP1P1 => f.write_str("p1xp1"),
            FamilySpec::Hirzebruch(a) => write!(f, "f{a}"),
            FamilySpec::Blowup(base, c) => write!(f, "{base}/{c}"),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |m: String| Error::Parse {
            path: "family".into(),
            message: m,
        };
        let mut parts = s.trim().split('/');
        let base = parts.next().unwrap_or_default().to_ascii_lowercase();
        let mut spec = match base.as_str() {
            "p2" => FamilySpec::ProjectivePlane,
            "p1xp1" => FamilySpec::ProductP1P1,
            b => {
                let digits = b
                    .strip_prefix("hirzebruch:")
                    .or_else(|| b.strip_prefix('f'))
                    .ok_or_else(|| bad(format!("unknown family `{b}`")))?;
                FamilySpec::Hirzebruch(
                    digits
                        .parse()
                        .map_err(|_| bad(format!("bad Hirzebruch index `{digits}`")))?,
                )
            }
        };
        for c in parts {
            let corner = c
                .parse()
                .map_err(|_| bad(format!("bad corner index `{c}`")))?;
            spec = spec.blowup(corner);
        }
        Ok(spec)
    }
}

pub fn generate_family(spec: &FamilySpec) -> Result<Fan> {
    generate_family_with_limit(spec, MAX_RAYS)
}

pub fn generate_family_with_limit(spec: &FamilySpec, max_rays: usize) -> Result<Fan> {
    let v = LatticeVector::new;
    match spec {
        FamilySpec::ProjectivePlane => validate_fan(&[v(1, 0), v(0, 1), v(-1, -1)]),
        FamilySpec::ProductP1P1 => validate_fan(&[v(1, 0), v(0, 1), v(-1, 0), v(0, -1)]),
        FamilySpec::Hirzebruch(a) => {
            validate_fan(&[v(1, 0), v(0, 1), v(-1, *a as i64), v(0, -1)])
        }
        FamilySpec::Blowup(base, corner) => {
            let fan = generate_family_with_limit(base, max_rays)?;
            if fan.len() + 1 > max_rays {
                return Err(Error::FanTooLarge {
                    rays: fan.len() + 1,
                    limit: max_rays,
                });
            }
            fan.blowup(*corner)
        }
    }
}

/// Rejection-samples a divisor of the requested class with coefficients uniform in
/// `[0, max_coeff]`. Deterministic in `seed`.
pub fn random_divisor(
    fan: &Fan,
    class: PositivityClass,
    max_coeff: i64,
    seed: u64,
) -> Result<TorusDivisor> {
    random_divisor_with_budget(fan, class, max_coeff, seed, SAMPLING_BUDGET)
}

pub fn random_divisor_with_budget(
    fan: &Fan,
    class: PositivityClass,
    max_coeff: i64,
    seed: u64,
    budget: u64,
) -> Result<TorusDivisor> {
    if max_coeff < 0 {
        return Err(Error::precondition("max_coeff must be nonnegative"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..budget {
        let d = TorusDivisor::new(
            (0..fan.len())
                .map(|_| rng.gen_range(0..=max_coeff))
                .collect(),
        );
        if classify(fan, &d)? == class {
            return Ok(d);
        }
    }
    Err(Error::SamplingExhausted {
        class: class.to_string(),
        draws: budget,
    })
}
