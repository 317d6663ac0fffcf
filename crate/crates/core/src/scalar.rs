//! Exact rational scalars.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational. All evaluation happens in this field.
pub type Scalar = BigRational;

pub fn int(value: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(value))
}

pub fn ratio(numer: i64, denom: i64) -> Scalar {
    Scalar::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn factorial(k: usize) -> Scalar {
    let mut acc = BigInt::one();
    for i in 2..=k {
        acc *= i;
    }
    Scalar::from_integer(acc)
}

/// `(-1)^e` as a scalar.
pub fn sign_power(e: usize) -> Scalar {
    if e % 2 == 0 {
        Scalar::one()
    } else {
        -Scalar::one()
    }
}

/// Parses `p`, `-p`, `+p` or `p/q`.
pub fn parse(text: &str) -> Option<Scalar> {
    let text = text.trim();
    let text = text.strip_prefix('+').unwrap_or(text);
    match text.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Scalar::new(p, q))
        }
        None => text.parse::<BigInt>().ok().map(Scalar::from_integer),
    }
}

/// Exact text form: `p` for integers, `p/q` otherwise.
pub fn format(value: &Scalar) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Magnitude of the numerator, used to rank residual entries.
pub fn numerator_magnitude(value: &Scalar) -> BigInt {
    value.numer().abs()
}
