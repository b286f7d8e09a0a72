//! Exact scalars.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// `p/q` or `p`, with the sign on the numerator.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Inverse of [`format_rational`]; surrounding whitespace is ignored.
pub fn parse_rational(text: &str) -> crate::Result<Rational> {
    text.trim().parse::<Rational>().map_err(|_| crate::Error::Parse {
        offset: 0,
        message: format!("not a rational number: {text:?}"),
    })
}

/// Generalized binomial coefficient `n (n-1) ... (n-k+1) / k!`, valid for negative `n`.
pub fn binomial(n: i64, k: u32) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k as i64 {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

pub fn factorial(k: u32) -> BigInt {
    (1..=k as i64).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

#[cfg(test)]
mod tests {
    #[test]
    fn parse_round_trip() {
        for r in [super::rat(-3, 2), super::int(7), super::rat(0, 5)] {
            assert_eq!(super::parse_rational(&super::format_rational(&r)).unwrap(), r);
        }
        assert!(super::parse_rational("1/0").is_err());
        assert!(super::parse_rational("x").is_err());
    }

    use super::*;

    #[test]
    fn binomial_negative_upper() {
        assert_eq!(binomial(-1, 3), BigInt::from(-1));
        assert_eq!(binomial(-2, 2), BigInt::from(3));
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(2, 3), BigInt::from(0));
        assert_eq!(binomial(7, 0), BigInt::from(1));
    }

    #[test]
    fn formats() {
        assert_eq!(format_rational(&rat(-3, 6)), "-1/2");
        assert_eq!(format_rational(&int(4)), "4");
    }
}
