//! Exact scalars.
//!
//! `BigRational` already normalizes to lowest terms with a positive
//! denominator, so the scalar type is a plain alias. The integer subring is
//! recognized through [`is_integral`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn from_big(n: BigInt) -> Scalar {
    BigRational::from_integer(n)
}

pub fn is_integral(s: &Scalar) -> bool {
    s.denom().is_one()
}

pub fn to_integer(s: &Scalar) -> Option<BigInt> {
    is_integral(s).then(|| s.numer().clone())
}

/// True when every prime factor of the denominator divides `tau`.
///
/// Models membership in `Z[1/tau]`.
pub fn is_tau_integral(s: &Scalar, tau: &BigInt) -> bool {
    let mut d = s.denom().clone();
    if tau.is_zero() {
        return d.is_one();
    }
    loop {
        let g = num_integer::Integer::gcd(&d, tau);
        if g.is_one() {
            return d.is_one();
        }
        d /= g;
    }
}

/// `p/q` rendering used in every report.
pub fn render(s: &Scalar) -> String {
    if is_integral(s) {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}
