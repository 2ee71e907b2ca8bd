#![allow(dead_code, unused_imports)]

use flatveech::numerics::Rational;

pub use flatveech::fixtures::{random_octagonal, random_polygon, random_quadratic_triangle, random_star};

pub fn pow2_inv(bits: usize) -> Rational {
    Rational::new(1.into(), num_bigint::BigInt::from(1u64) << bits)
}
