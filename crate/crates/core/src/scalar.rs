//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use nalgebra::RealField;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};
use rand::Rng;
use rand_distr::StandardNormal;

/// Real floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal. Every finite `f64` maps to some value of `Self`.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Widens to `f64` for reporting.
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }

    /// Draws one standard normal variate.
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// `Self` as an `nalgebra` field. Kept separate from the `Float` bound
    /// because both traits define the same method names.
    type Field: RealField + Copy;

    fn to_field(self) -> Self::Field;

    fn from_field(x: Self::Field) -> Self;
}

macro_rules! impl_real {
    ($t:ty) => {
        impl Real for $t {
            fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
                rng.sample(StandardNormal)
            }

            type Field = $t;

            fn to_field(self) -> $t {
                self
            }

            fn from_field(x: $t) -> Self {
                x
            }
        }
    };
}

impl_real!(f32);
impl_real!(f64);

/// Degrees to radians.
pub fn deg_to_rad<T: Real>(deg: T) -> T {
    deg.to_radians()
}

/// Radians to degrees.
pub fn rad_to_deg<T: Real>(rad: T) -> T {
    rad.to_degrees()
}
