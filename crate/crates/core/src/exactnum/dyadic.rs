use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rounding direction for [`Dyadic`] conversions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Floor,
    Ceil,
    Nearest,
}

/// A dyadic rational `mant * 2^exp`, kept normalized (odd mantissa, or zero with `exp == 0`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { mant: BigInt::one(), exp: 0 }
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Self {
        Dyadic::new(v.into(), 0)
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Self {
        Dyadic { mant: BigInt::one(), exp: e }
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    /// Number of significant bits of the mantissa.
    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// Exponent of the leading bit: `2^(top-1) <= |x| < 2^top`. Zero maps to `i64::MIN`.
    pub fn magnitude_exp(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.exp + self.mant.bits() as i64
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << (self.exp as usize))
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << ((-self.exp) as usize))
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits() as i64;
        let shift = (bits - 60).max(0);
        let top = (&self.mant >> (shift as usize)).to_f64().unwrap_or(0.0);
        let e = self.exp + shift;
        if e > 2000 {
            return top.signum() * f64::INFINITY;
        }
        if e < -2200 {
            return 0.0;
        }
        top * (2f64).powi(e as i32)
    }

    /// log2 of the absolute value; `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.mant.bits() as i64;
        let shift = (bits - 60).max(0);
        let top = (self.mant.abs() >> (shift as usize)).to_f64().unwrap_or(1.0);
        top.log2() + (self.exp + shift) as f64
    }

    /// Round to at most `prec` significant bits.
    pub fn round(&self, prec: u32, dir: Round) -> Self {
        let prec = prec.max(2) as u64;
        let bits = self.mant.bits();
        if bits <= prec {
            return self.clone();
        }
        let shift = (bits - prec) as usize;
        let q = shift_round(&self.mant, shift, dir);
        Dyadic::new(q, self.exp + shift as i64)
    }

    /// Round to a multiple of `2^exp_floor` (absolute grid).
    pub fn round_to_grid(&self, grid_exp: i64, dir: Round) -> Self {
        if self.is_zero() || self.exp >= grid_exp {
            return self.clone();
        }
        let shift = (grid_exp - self.exp) as usize;
        Dyadic::new(shift_round(&self.mant, shift, dir), grid_exp)
    }

    /// Nearest-ish dyadic with `prec` bits and a rigorous bound on the error.
    pub fn from_rational(x: &BigRational, prec: u32, dir: Round) -> Self {
        if x.is_zero() {
            return Dyadic::zero();
        }
        let num = x.numer();
        let den = x.denom();
        // choose k so that |x| * 2^k has about prec bits
        let k = prec as i64 + den.bits() as i64 - num.bits() as i64 + 1;
        let scaled = if k >= 0 {
            div_round(&(num << (k as usize)), den, dir)
        } else {
            div_round(num, &(den << ((-k) as usize)), dir)
        };
        Dyadic::new(scaled, -k)
    }

    pub fn from_f64(v: f64) -> Self {
        if v == 0.0 || !v.is_finite() {
            return Dyadic::zero();
        }
        let bits = v.to_bits();
        let sign = if (bits >> 63) != 0 { -1 } else { 1 };
        let exponent = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & 0xfffffffffffff;
        let (m, e) = if exponent == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exponent - 1075)
        };
        Dyadic::new(BigInt::from(m) * sign, e)
    }

    /// Upper bound for `sqrt(self)` with about `prec` bits; `self` must be nonnegative.
    pub fn sqrt_upper(&self, prec: u32) -> Self {
        self.sqrt_round(prec, true)
    }

    pub fn sqrt_lower(&self, prec: u32) -> Self {
        self.sqrt_round(prec, false)
    }

    fn sqrt_round(&self, prec: u32, upper: bool) -> Self {
        assert!(!self.is_negative(), "sqrt of negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        // make exponent even and mantissa at least 2*prec bits
        let mut mant = self.mant.clone();
        let mut exp = self.exp;
        let want = 2 * prec as i64 + 4;
        let have = mant.bits() as i64;
        if have < want {
            let sh = want - have;
            mant <<= sh as usize;
            exp -= sh;
        }
        if exp.rem_euclid(2) != 0 {
            mant <<= 1usize;
            exp -= 1;
        }
        let s = mant.sqrt();
        let exact = &s * &s == mant;
        let s = if upper && !exact { s + 1 } else { s };
        Dyadic::new(s, exp / 2)
    }

    pub fn max(a: &Dyadic, b: &Dyadic) -> Dyadic {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn min(a: &Dyadic, b: &Dyadic) -> Dyadic {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    /// Integer `floor(self * 2^scale)`/`ceil(...)` for fixed-point conversion.
    pub fn to_fixed(&self, scale: i64, dir: Round) -> BigInt {
        let e = self.exp + scale;
        if e >= 0 {
            &self.mant << (e as usize)
        } else {
            shift_round(&self.mant, (-e) as usize, dir)
        }
    }
}

fn shift_round(m: &BigInt, shift: usize, dir: Round) -> BigInt {
    if shift == 0 {
        return m.clone();
    }
    // arithmetic shift on BigInt floors toward -inf
    let floor = m >> shift;
    let exact = (&floor << shift) == *m;
    match dir {
        Round::Floor => floor,
        Round::Ceil => {
            if exact {
                floor
            } else {
                floor + 1
            }
        }
        Round::Nearest => {
            let half = BigInt::one() << (shift - 1);
            let rem = m - (&floor << shift);
            if rem >= half {
                floor + 1
            } else {
                floor
            }
        }
    }
}

fn div_round(n: &BigInt, d: &BigInt, dir: Round) -> BigInt {
    let (q, r) = n.div_mod_floor(d);
    if r.is_zero() {
        return q;
    }
    match dir {
        Round::Floor => q,
        Round::Ceil => q + 1,
        Round::Nearest => {
            if (&r << 1usize) >= d.abs() {
                q + 1
            } else {
                q
            }
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exp.min(other.exp);
        let a = &self.mant << ((self.exp - e) as usize);
        let b = &other.mant << ((other.exp - e) as usize);
        a.cmp(&b)
    }
}

impl<'a> Add<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(rhs.exp);
        let a = &self.mant << ((self.exp - e) as usize);
        let b = &rhs.mant << ((rhs.exp - e) as usize);
        Dyadic::new(a + b, e)
    }
}

impl<'a> Sub<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &rhs.mant, self.exp + rhs.exp)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mant: -self.mant, exp: self.exp }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mant, self.exp)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}
