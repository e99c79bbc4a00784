//! Scalar abstraction shared by every numerical module.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Real floating point scalar the simulation is generic over.
///
/// Implemented for `f32` and `f64`. Tolerances quoted for `f64` are widened
/// to a small multiple of machine epsilon when the scalar cannot resolve them.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable in scalar type")
    }

    /// `tol` unless the type's precision is coarser, in which case 64 ulps.
    fn tol(tol: f64) -> Self {
        let floor = Self::epsilon() * Self::lit(64.0);
        Self::lit(tol).max(floor)
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `ln(sinh(z) / z)` for `z ≥ 0`, stable from the origin to overflow range.
pub fn ln_sinhc<T: Real>(z: T) -> T {
    let z = z.abs();
    if z < T::lit(2.0) {
        // sinh(z)/z - 1 = sum_{k>=1} z^{2k} / (2k+1)!
        let z2 = z * z;
        let mut term = T::one();
        let mut sum = T::zero();
        let mut k = 1;
        loop {
            let denom = T::from_usize((2 * k) * (2 * k + 1)).expect("small integer");
            term = term * z2 / denom;
            sum = sum + term;
            if term <= T::epsilon() * sum || k > 40 {
                break;
            }
            k += 1;
        }
        sum.ln_1p()
    } else if z < T::lit(20.0) {
        (z.sinh() / z).ln()
    } else {
        z - T::LN_2() - z.ln() + (-(-(z + z)).exp()).ln_1p()
    }
}

/// `coth(x)` for `x > 0`.
pub fn coth<T: Real>(x: T) -> T {
    x.tanh().recip()
}
