//! Scalar abstraction for the exponent arithmetic.
//!
//! The exponent linear program is solved the same way over exact rationals
//! and over floats; only the scalar type changes.

use num_traits::{FromPrimitive, Num, ToPrimitive};
use std::fmt::Debug;

pub trait Scalar: Num + Clone + PartialOrd + FromPrimitive + ToPrimitive + Debug {
    fn ratio(numer: i64, denom: i64) -> Self {
        Self::from_i64(numer).expect("integer numerator") / Self::from_i64(denom).expect("integer denominator")
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where T: Num + Clone + PartialOrd + FromPrimitive + ToPrimitive + Debug {}
