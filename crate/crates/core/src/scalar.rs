//! Scalar abstraction shared by every numerical routine.
//!
//! Numerical code in this crate is written once against [`Real`] and
//! instantiated with `f32`/`f64` for exploration and with [`Mp`] (an MPFR
//! float of fixed bit precision) where inequalities must be separated at
//! 50 or more significant digits.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, ToPrimitive, Zero};

pub trait Real:
    Num
    + Clone
    + fmt::Debug
    + fmt::Display
    + PartialOrd
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Send
    + Sync
    + 'static
{
    /// Mantissa precision in bits.
    const MANTISSA_BITS: u32;

    fn from_f64(x: f64) -> Self;
    fn from_i64(x: i64) -> Self;
    fn from_u128(x: u128) -> Self;
    fn from_bigint(x: &BigInt) -> Self;
    fn to_f64(&self) -> f64;

    fn abs(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sin_cos(&self) -> (Self, Self);
    fn atan2(&self, x: &Self) -> Self;
    fn floor(&self) -> Self;
    fn is_finite(&self) -> bool;
    fn pi() -> Self;

    fn from_ratio(r: &BigRational) -> Self {
        Self::from_bigint(r.numer()) / Self::from_bigint(r.denom())
    }

    fn from_u64(x: u64) -> Self {
        Self::from_u128(x as u128)
    }

    /// Unit roundoff `2^(1 - MANTISSA_BITS)`.
    fn epsilon() -> Self {
        Self::from_f64(2f64.powi(1 - Self::MANTISSA_BITS as i32))
    }

    /// Decimal digits carried by the mantissa.
    fn working_digits() -> u32 {
        (Self::MANTISSA_BITS as f64 * std::f64::consts::LOG10_2).floor() as u32
    }

    /// `self^e` for `self > 0`.
    fn powf(&self, e: &Self) -> Self {
        (self.ln() * e.clone()).exp()
    }

    fn powi(&self, n: i32) -> Self {
        let mut base = if n < 0 { Self::one() / self.clone() } else { self.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc *= base.clone();
            }
            base = base.clone() * base;
            k >>= 1;
        }
        acc
    }

    fn hypot(&self, other: &Self) -> Self {
        let a = self.abs();
        let b = other.abs();
        let (big, small) = if a >= b { (a, b) } else { (b, a) };
        if big.is_zero() {
            return big;
        }
        let r = small / big.clone();
        big * (Self::one() + r.clone() * r).sqrt()
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

macro_rules! impl_real_prim {
    ($t:ty, $bits:expr) => {
        impl Real for $t {
            const MANTISSA_BITS: u32 = $bits;

            fn from_f64(x: f64) -> Self {
                x as $t
            }
            fn from_i64(x: i64) -> Self {
                x as $t
            }
            fn from_u128(x: u128) -> Self {
                x as $t
            }
            fn from_bigint(x: &BigInt) -> Self {
                x.to_f64().unwrap_or(f64::NAN) as $t
            }
            fn from_ratio(r: &BigRational) -> Self {
                r.to_f64().unwrap_or(f64::NAN) as $t
            }
            fn to_f64(&self) -> f64 {
                *self as f64
            }
            fn abs(&self) -> Self {
                <$t>::abs(*self)
            }
            fn sqrt(&self) -> Self {
                <$t>::sqrt(*self)
            }
            fn exp(&self) -> Self {
                <$t>::exp(*self)
            }
            fn ln(&self) -> Self {
                <$t>::ln(*self)
            }
            fn sin_cos(&self) -> (Self, Self) {
                <$t>::sin_cos(*self)
            }
            fn atan2(&self, x: &Self) -> Self {
                <$t>::atan2(*self, *x)
            }
            fn floor(&self) -> Self {
                <$t>::floor(*self)
            }
            fn is_finite(&self) -> bool {
                <$t>::is_finite(*self)
            }
            fn pi() -> Self {
                std::f64::consts::PI as $t
            }
            fn epsilon() -> Self {
                <$t>::EPSILON
            }
            fn powf(&self, e: &Self) -> Self {
                <$t>::powf(*self, *e)
            }
            fn powi(&self, n: i32) -> Self {
                <$t>::powi(*self, n)
            }
            fn hypot(&self, other: &Self) -> Self {
                <$t>::hypot(*self, *other)
            }
        }
    };
}

impl_real_prim!(f32, 24);
impl_real_prim!(f64, 53);

/// MPFR float with a compile-time precision of `BITS` mantissa bits.
#[derive(Clone)]
pub struct Mp<const BITS: u32>(pub rug::Float);

impl<const BITS: u32> Mp<BITS> {
    fn wrap(x: rug::Float) -> Self {
        if x.prec() == BITS {
            Mp(x)
        } else {
            Mp(rug::Float::with_val(BITS, x))
        }
    }

    pub fn inner(&self) -> &rug::Float {
        &self.0
    }
}

impl<const BITS: u32> fmt::Debug for Mp<BITS> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mp<{}>({})", BITS, self.0)
    }
}

impl<const BITS: u32> fmt::Display for Mp<BITS> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl<const BITS: u32> PartialEq for Mp<BITS> {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl<const BITS: u32> PartialOrd for Mp<BITS> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

macro_rules! mp_binop {
    ($tr:ident, $m:ident, $atr:ident, $am:ident) => {
        impl<const BITS: u32> $tr for Mp<BITS> {
            type Output = Self;
            fn $m(self, rhs: Self) -> Self {
                Mp::wrap($tr::$m(self.0, &rhs.0))
            }
        }
        impl<const BITS: u32> $atr for Mp<BITS> {
            fn $am(&mut self, rhs: Self) {
                $atr::$am(&mut self.0, &rhs.0);
            }
        }
    };
}

mp_binop!(Add, add, AddAssign, add_assign);
mp_binop!(Sub, sub, SubAssign, sub_assign);
mp_binop!(Mul, mul, MulAssign, mul_assign);
mp_binop!(Div, div, DivAssign, div_assign);

impl<const BITS: u32> Rem for Mp<BITS> {
    type Output = Self;
    fn rem(self, rhs: Self) -> Self {
        Mp::wrap(self.0 % &rhs.0)
    }
}

impl<const BITS: u32> Neg for Mp<BITS> {
    type Output = Self;
    fn neg(self) -> Self {
        Mp(-self.0)
    }
}

impl<const BITS: u32> Zero for Mp<BITS> {
    fn zero() -> Self {
        Mp(rug::Float::new(BITS))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl<const BITS: u32> One for Mp<BITS> {
    fn one() -> Self {
        Mp(rug::Float::with_val(BITS, 1u32))
    }
}

impl<const BITS: u32> Num for Mp<BITS> {
    type FromStrRadixErr = String;

    fn from_str_radix(s: &str, radix: u32) -> Result<Self, String> {
        let parsed = rug::Float::parse_radix(s, radix as i32).map_err(|e| e.to_string())?;
        Ok(Mp(rug::Float::with_val(BITS, parsed)))
    }
}

impl<const BITS: u32> Real for Mp<BITS> {
    const MANTISSA_BITS: u32 = BITS;

    fn from_f64(x: f64) -> Self {
        Mp(rug::Float::with_val(BITS, x))
    }
    fn from_i64(x: i64) -> Self {
        Mp(rug::Float::with_val(BITS, x))
    }
    fn from_u128(x: u128) -> Self {
        Mp(rug::Float::with_val(BITS, x))
    }
    fn from_bigint(x: &BigInt) -> Self {
        let parsed = rug::Float::parse(x.to_string()).expect("decimal integer parses");
        Mp(rug::Float::with_val(BITS, parsed))
    }
    fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }
    fn abs(&self) -> Self {
        Mp(self.0.clone().abs())
    }
    fn sqrt(&self) -> Self {
        Mp(self.0.clone().sqrt())
    }
    fn exp(&self) -> Self {
        Mp(self.0.clone().exp())
    }
    fn ln(&self) -> Self {
        Mp(self.0.clone().ln())
    }
    fn sin_cos(&self) -> (Self, Self) {
        let (s, c) = self.0.clone().sin_cos(rug::Float::new(BITS));
        (Mp(s), Mp(c))
    }
    fn atan2(&self, x: &Self) -> Self {
        Mp(self.0.clone().atan2(&x.0))
    }
    fn floor(&self) -> Self {
        Mp(self.0.clone().floor())
    }
    fn is_finite(&self) -> bool {
        self.0.is_finite()
    }
    fn pi() -> Self {
        Mp(rug::Float::with_val(BITS, rug::float::Constant::Pi))
    }
    fn epsilon() -> Self {
        let one = rug::Float::with_val(BITS, 1u32);
        Mp(one >> (BITS - 1))
    }
    fn powf(&self, e: &Self) -> Self {
        Mp::wrap(rug::ops::Pow::pow(self.0.clone(), &e.0))
    }
    fn hypot(&self, other: &Self) -> Self {
        Mp(self.0.clone().hypot(&other.0))
    }
}
