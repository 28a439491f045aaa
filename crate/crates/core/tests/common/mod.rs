#![allow(dead_code)]

use toric_sections::toric::{
    classify, generate_family, random_divisor, Fan, FamilySpec, PositivityClass, TorusDivisor,
};

pub const FANS: [&str; 9] = [
    "p2", "p1xp1", "f1", "f2", "f3", "p2/0", "p2/0/0", "f2/1/3", "p1xp1/2",
];

pub fn fan(name: &str) -> Fan {
    generate_family(&name.parse::<FamilySpec>().unwrap()).unwrap()
}

pub fn ample(fan: &Fan, max: i64, seed: u64) -> TorusDivisor {
    random_divisor(fan, PositivityClass::Ample, max, seed).unwrap()
}

/// Globally generated, ample or not.
pub fn gg(fan: &Fan, max: i64, seed: u64) -> TorusDivisor {
    let class = if seed.is_multiple_of(2) {
        PositivityClass::Ample
    } else {
        PositivityClass::GloballyGeneratedNotAmple
    };
    let d = random_divisor(fan, class, max, seed).unwrap();
    debug_assert!(classify(fan, &d).unwrap().is_globally_generated());
    d
}
