//! Exact rationals over arbitrary-precision integers.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `numerator / denominator` in lowest terms with a positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalScalar {
    num: BigInt,
    den: BigInt,
}

impl RationalScalar {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        let (num, den) = (num.into(), den.into());
        assert!(!den.is_zero(), "zero denominator");
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_zero() { (num, den) } else { (num / &g, den / &g) };
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        if num.is_zero() {
            den = BigInt::one();
        }
        Self { num, den }
    }

    pub fn integer(n: i64) -> Self {
        Self::new(n, 1)
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    pub fn one() -> Self {
        Self::integer(1)
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn recip(&self) -> Self {
        Self::new(self.den.clone(), self.num.clone())
    }

    /// Nearest `f64`, ties to even (normal range).
    pub fn to_f64(&self) -> f64 {
        if self.num.is_zero() {
            return 0.0;
        }
        let negative = self.num.sign() == Sign::Minus;
        let n = self.num.abs();
        let d = &self.den;
        // scale so the quotient has 54 or 55 bits: 53 kept, one rounding bit
        let shift = 54 - (n.bits() as i64 - d.bits() as i64);
        let (sn, sd) = if shift >= 0 { (n << shift as usize, d.clone()) } else { (n, d << (-shift) as usize) };
        let (mut q, r) = sn.div_rem(&sd);
        let mut sticky = !r.is_zero();
        let mut exp = -shift;
        if q.bits() == 55 {
            sticky |= q.is_odd();
            q >>= 1;
            exp += 1;
        }
        let round = q.is_odd();
        q >>= 1;
        exp += 1;
        if round && (sticky || q.is_odd()) {
            q += 1u32;
        }
        let mantissa = q.to_f64().expect("at most 54 bits");
        let v = mantissa * 2f64.powi(exp as i32);
        if negative {
            -v
        } else {
            v
        }
    }
}

impl fmt::Display for RationalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl PartialOrd for RationalScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RationalScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

impl Add for &RationalScalar {
    type Output = RationalScalar;
    fn add(self, o: &RationalScalar) -> RationalScalar {
        RationalScalar::new(&self.num * &o.den + &o.num * &self.den, &self.den * &o.den)
    }
}

impl Sub for &RationalScalar {
    type Output = RationalScalar;
    fn sub(self, o: &RationalScalar) -> RationalScalar {
        RationalScalar::new(&self.num * &o.den - &o.num * &self.den, &self.den * &o.den)
    }
}

impl Mul for &RationalScalar {
    type Output = RationalScalar;
    fn mul(self, o: &RationalScalar) -> RationalScalar {
        RationalScalar::new(&self.num * &o.num, &self.den * &o.den)
    }
}

impl Div for &RationalScalar {
    type Output = RationalScalar;
    fn div(self, o: &RationalScalar) -> RationalScalar {
        assert!(!o.is_zero(), "division by zero");
        RationalScalar::new(&self.num * &o.den, &self.den * &o.num)
    }
}

impl Neg for &RationalScalar {
    type Output = RationalScalar;
    fn neg(self) -> RationalScalar {
        RationalScalar { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for RationalScalar {
            type Output = RationalScalar;
            fn $m(self, o: RationalScalar) -> RationalScalar {
                (&self).$m(&o)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);
