//! Scalar helpers: exact rationals and small combinatorial functions.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// The coefficient field used throughout the crate.
pub type Rat = num_rational::BigRational;

/// Integer as a rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// The fraction `n/d` (`d` must be nonzero).
pub fn frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

pub fn to_i64(r: &Rat) -> Option<i64> {
    if is_integer(r) {
        r.numer().to_i64()
    } else {
        None
    }
}

/// Binomial coefficient `C(n, k)` with the usual convention that it vanishes
/// for `k < 0` or `k > n`.
pub fn binom(n: i64, k: i64) -> Rat {
    if k < 0 || k > n {
        return Rat::zero();
    }
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    Rat::from_integer(acc)
}

/// Renders a rational exactly: integers without denominator, otherwise `n/d`.
pub fn render(r: &Rat) -> String {
    if is_integer(r) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Scales a rational vector to a primitive integer vector (content 1, first
/// nonzero entry positive). Zero vectors are returned unchanged.
pub fn primitive_integer_vector(v: &[Rat]) -> Vec<BigInt> {
    use num_integer::Integer;
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let mut ints: Vec<BigInt> = v.iter().map(|x| x.numer() * &lcm / x.denom()).collect();
    let mut gcd = BigInt::zero();
    for x in &ints {
        gcd = gcd.gcd(x);
    }
    if gcd.is_zero() {
        return ints;
    }
    for x in ints.iter_mut() {
        *x = &*x / &gcd;
    }
    if let Some(first) = ints.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in ints.iter_mut() {
                *x = -&*x;
            }
        }
    }
    ints
}
