//! Smooth complete fans, torus-invariant divisors and their polygons.

mod divisor;
mod family;
mod fan;

pub use divisor::{
    classify, classify_polygon, h0, polygon_of, sigma_face, PositivityClass, TorusDivisor,
};
pub use family::{
    generate_family, generate_family_with_limit, random_divisor, random_divisor_with_budget,
    FamilySpec, MAX_RAYS, SAMPLING_BUDGET,
};
pub use fan::{validate_fan, Fan};
