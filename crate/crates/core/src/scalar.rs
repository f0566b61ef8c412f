//! Scalar types the library is generic over.
//!
//! [`Scalar`] covers everything moment sequences and reports can be computed
//! in, including `f32`/`f64`. [`ExactScalar`] is the subset allowed as
//! group-algebra coefficients: rational types only.

use std::fmt::Debug;
use std::hash::Hash;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, ToPrimitive};

/// A field-like numeric type usable as a coefficient.
pub trait Scalar:
    Clone + Debug + PartialEq + Num + Neg<Output = Self> + Send + Sync + 'static
{
    /// Whether arithmetic in this type is exact.
    const EXACT: bool;

    /// Converts an exact rational into this type.
    ///
    /// Fixed-width rational types panic when the value does not fit.
    fn from_rational(r: &BigRational) -> Self;

    /// Lossy conversion used only when reporting.
    fn to_f64(&self) -> f64;

    fn is_positive(&self) -> bool;

    fn from_int(i: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(i)))
    }
}

/// Marker for scalars with exact arithmetic.
pub trait ExactScalar: Scalar + Eq + Hash {}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_positive(&self) -> bool {
        num_traits::Signed::is_positive(self)
    }
}

impl ExactScalar for BigRational {}

macro_rules! fixed_ratio {
    ($int:ty) => {
        impl Scalar for Ratio<$int> {
            const EXACT: bool = true;

            fn from_rational(r: &BigRational) -> Self {
                let numer = r.numer().to_string().parse::<$int>();
                let denom = r.denom().to_string().parse::<$int>();
                match (numer, denom) {
                    (Ok(p), Ok(q)) => Ratio::new(p, q),
                    _ => panic!("rational {} does not fit in Ratio<{}>", r, stringify!($int)),
                }
            }

            fn to_f64(&self) -> f64 {
                *self.numer() as f64 / *self.denom() as f64
            }

            fn is_positive(&self) -> bool {
                *self.numer() > 0
            }
        }

        impl ExactScalar for Ratio<$int> {}
    };
}

fixed_ratio!(i64);
fixed_ratio!(i128);

macro_rules! float_scalar {
    ($float:ty) => {
        impl Scalar for $float {
            const EXACT: bool = false;

            fn from_rational(r: &BigRational) -> Self {
                Scalar::to_f64(r) as $float
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn is_positive(&self) -> bool {
                *self > 0.0
            }
        }
    };
}

float_scalar!(f32);
float_scalar!(f64);

/// Parses "p/q" or "p" into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q == BigInt::from(0) {
                return None;
            }
            Some(BigRational::new(p, q))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Renders an exact rational as "p/q", or "p" when integral.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// The descending factorial `(n)_k = n (n-1) ... (n-k+1)`; zero when `k > n`.
pub fn falling_factorial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    (0..k).fold(BigInt::from(1), |acc, i| acc * BigInt::from(n - i))
}

pub fn factorial(n: usize) -> BigInt {
    falling_factorial(n, n)
}
