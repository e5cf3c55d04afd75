//! Complex disks with dyadic midpoints and outward-rounded radii.

use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::dyadic::{Dyadic, Round};

/// Number of bits kept in radii; radii are always rounded upward.
const RADIUS_BITS: u32 = 62;

/// A closed complex disk `{ z : |z - mid| <= rad }`.
///
/// Every operation returns a disk that contains the exact result of the
/// operation applied to any points of the operand disks.
#[derive(Clone, PartialEq, Eq)]
pub struct ComplexBall {
    re: Dyadic,
    im: Dyadic,
    rad: Dyadic,
    prec: u32,
}

fn up(d: &Dyadic) -> Dyadic {
    d.round(RADIUS_BITS, Round::Ceil)
}

impl ComplexBall {
    pub fn exact(re: Dyadic, im: Dyadic, prec: u32) -> Self {
        ComplexBall { re, im, rad: Dyadic::zero(), prec }
    }

    pub fn new(re: Dyadic, im: Dyadic, rad: Dyadic, prec: u32) -> Self {
        assert!(!rad.is_negative(), "negative radius");
        let mut b = ComplexBall { re, im, rad: up(&rad), prec };
        b.round_mid();
        b
    }

    pub fn zero(prec: u32) -> Self {
        ComplexBall::exact(Dyadic::zero(), Dyadic::zero(), prec)
    }

    pub fn one(prec: u32) -> Self {
        ComplexBall::exact(Dyadic::one(), Dyadic::zero(), prec)
    }

    pub fn from_int(v: i64, prec: u32) -> Self {
        ComplexBall::new(Dyadic::from_int(v), Dyadic::zero(), Dyadic::zero(), prec)
    }

    pub fn from_rational(x: &BigRational, prec: u32) -> Self {
        let mid = Dyadic::from_rational(x, prec, Round::Nearest);
        let err = (x - mid.to_rational()).abs();
        let rad = if err.is_zero() { Dyadic::zero() } else { Dyadic::from_rational(&err, RADIUS_BITS, Round::Ceil) };
        ComplexBall { re: mid, im: Dyadic::zero(), rad, prec }
    }

    pub fn from_rational_parts(re: &BigRational, im: &BigRational, prec: u32) -> Self {
        let a = ComplexBall::from_rational(re, prec);
        let b = ComplexBall::from_rational(im, prec);
        ComplexBall { re: a.re, im: b.re, rad: up(&(&a.rad + &b.rad)), prec }
    }

    pub fn re(&self) -> &Dyadic {
        &self.re
    }

    pub fn im(&self) -> &Dyadic {
        &self.im
    }

    pub fn radius(&self) -> &Dyadic {
        &self.rad
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn with_precision(&self, prec: u32) -> Self {
        let mut b = self.clone();
        b.prec = prec;
        b.round_mid();
        b
    }

    pub fn with_radius(&self, rad: Dyadic) -> Self {
        ComplexBall { re: self.re.clone(), im: self.im.clone(), rad: up(&rad), prec: self.prec }
    }

    /// Enlarge the radius by `extra`.
    pub fn inflate(&self, extra: &Dyadic) -> Self {
        self.with_radius(&self.rad + &extra.abs())
    }

    /// Drop the radius, keeping only the midpoint.
    pub fn midpoint(&self) -> Self {
        ComplexBall::exact(self.re.clone(), self.im.clone(), self.prec)
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    fn round_mid(&mut self) {
        let re = self.re.round(self.prec, Round::Nearest);
        let im = self.im.round(self.prec, Round::Nearest);
        let err = &(&self.re - &re).abs() + &(&self.im - &im).abs();
        if !err.is_zero() {
            self.rad = up(&(&self.rad + &err));
        }
        self.re = re;
        self.im = im;
    }

    /// Upper bound of `|mid|`.
    fn mid_abs_upper(&self) -> Dyadic {
        if self.im.is_zero() {
            return self.re.abs();
        }
        if self.re.is_zero() {
            return self.im.abs();
        }
        let sq = &(&self.re * &self.re) + &(&self.im * &self.im);
        sq.sqrt_upper(self.prec.max(RADIUS_BITS) + 4)
    }

    fn mid_abs_lower(&self) -> Dyadic {
        if self.im.is_zero() {
            return self.re.abs();
        }
        if self.re.is_zero() {
            return self.im.abs();
        }
        let sq = &(&self.re * &self.re) + &(&self.im * &self.im);
        sq.sqrt_lower(self.prec.max(RADIUS_BITS) + 4)
    }

    /// Upper bound for the modulus of every point in the disk.
    pub fn abs_upper(&self) -> Dyadic {
        (&self.mid_abs_upper() + &self.rad).round(self.prec.max(RADIUS_BITS) + 4, Round::Ceil)
    }

    /// Lower bound for the modulus of every point in the disk (zero if it contains 0).
    pub fn abs_lower(&self) -> Dyadic {
        let m = self.mid_abs_lower();
        let d = &m - &self.rad;
        if d.is_negative() {
            Dyadic::zero()
        } else {
            d.round(self.prec.max(RADIUS_BITS), Round::Floor)
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.abs_lower().is_zero()
    }

    /// Whether the exact complex number `re + i im` lies in the disk.
    pub fn contains_rational(&self, re: &BigRational, im: &BigRational) -> bool {
        let dr = re - self.re.to_rational();
        let di = im - self.im.to_rational();
        let r = self.rad.to_rational();
        &dr * &dr + &di * &di <= &r * &r
    }

    pub fn contains_f64(&self, re: f64, im: f64, slack: f64) -> bool {
        let dr = re - self.re.to_f64();
        let di = im - self.im.to_f64();
        (dr * dr + di * di).sqrt() <= self.rad.to_f64() + slack
    }

    /// Whether `other` lies entirely inside `self`.
    pub fn contains_ball(&self, other: &ComplexBall) -> bool {
        let d = (&other.re - &self.re, &other.im - &self.im);
        let dist_sq = &(&d.0 * &d.0) + &(&d.1 * &d.1);
        let slack = &self.rad - &other.rad;
        if slack.is_negative() {
            return false;
        }
        dist_sq <= &slack * &slack
    }

    /// Whether two disks are certainly disjoint.
    pub fn disjoint(&self, other: &ComplexBall) -> bool {
        let d = (&other.re - &self.re, &other.im - &self.im);
        let dist_sq = &(&d.0 * &d.0) + &(&d.1 * &d.1);
        let r = &self.rad + &other.rad;
        dist_sq > &r * &r
    }

    pub fn overlaps(&self, other: &ComplexBall) -> bool {
        !self.disjoint(other)
    }

    pub fn conj(&self) -> Self {
        ComplexBall { re: self.re.clone(), im: -&self.im, rad: self.rad.clone(), prec: self.prec }
    }

    pub fn add(&self, o: &ComplexBall) -> Self {
        let prec = self.prec.max(o.prec);
        ComplexBall::new(&self.re + &o.re, &self.im + &o.im, &self.rad + &o.rad, prec)
    }

    pub fn sub(&self, o: &ComplexBall) -> Self {
        let prec = self.prec.max(o.prec);
        ComplexBall::new(&self.re - &o.re, &self.im - &o.im, &self.rad + &o.rad, prec)
    }

    pub fn neg(&self) -> Self {
        ComplexBall { re: -&self.re, im: -&self.im, rad: self.rad.clone(), prec: self.prec }
    }

    pub fn mul(&self, o: &ComplexBall) -> Self {
        let prec = self.prec.max(o.prec);
        let re = &(&self.re * &o.re) - &(&self.im * &o.im);
        let im = &(&self.re * &o.im) + &(&self.im * &o.re);
        let mut rad = Dyadic::zero();
        if !self.rad.is_zero() || !o.rad.is_zero() {
            let a = &self.re.abs() + &self.im.abs();
            let b = &o.re.abs() + &o.im.abs();
            rad = &(&(&a * &o.rad) + &(&b * &self.rad)) + &(&self.rad * &o.rad);
        }
        ComplexBall::new(re, im, rad, prec)
    }

    pub fn mul_rational(&self, x: &BigRational) -> Self {
        self.mul(&ComplexBall::from_rational(x, self.prec))
    }

    pub fn mul_int(&self, k: i64) -> Self {
        let kd = Dyadic::from_int(k);
        ComplexBall::new(&self.re * &kd, &self.im * &kd, &self.rad * &kd.abs(), self.prec)
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        ComplexBall {
            re: self.re.mul_pow2(k),
            im: self.im.mul_pow2(k),
            rad: self.rad.mul_pow2(k),
            prec: self.prec,
        }
    }

    pub fn sqr(&self) -> Self {
        self.mul(self)
    }

    pub fn pow(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = ComplexBall::one(self.prec);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.sqr();
            }
        }
        acc
    }

    /// Reciprocal; `None` when the disk may contain zero.
    pub fn inv(&self) -> Option<Self> {
        let low = self.mid_abs_lower();
        if low <= self.rad {
            return None;
        }
        let re = self.re.to_rational();
        let im = self.im.to_rational();
        let n2 = &re * &re + &im * &im;
        let exact_re = &re / &n2;
        let exact_im = -(&im / &n2);
        let mid = ComplexBall::from_rational_parts(&exact_re, &exact_im, self.prec);
        if self.rad.is_zero() {
            return Some(mid);
        }
        // |1/(b+d) - 1/b| <= r / (|b| (|b| - r))
        let gap = &low - &self.rad;
        let denom = (&low * &gap).to_rational();
        let extra = self.rad.to_rational() / denom;
        Some(mid.inflate(&Dyadic::from_rational(&extra, RADIUS_BITS, Round::Ceil)))
    }

    pub fn div(&self, o: &ComplexBall) -> Option<Self> {
        o.inv().map(|i| self.mul(&i))
    }

    /// Bounds of the real part.
    pub fn real_interval(&self) -> (Dyadic, Dyadic) {
        (&self.re - &self.rad, &self.re + &self.rad)
    }

    pub fn imag_interval(&self) -> (Dyadic, Dyadic) {
        (&self.im - &self.rad, &self.im + &self.rad)
    }

    pub fn mid_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// log2 of the radius, `-inf` for exact balls.
    pub fn log2_radius(&self) -> f64 {
        self.rad.log2_abs()
    }
}

impl fmt::Debug for ComplexBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.mid_f64();
        write!(f, "[({re:.17e} + {im:.17e}i) +/- {:.3e}]", self.rad.to_f64())
    }
}

impl fmt::Display for ComplexBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Serialized form of a ball: exact dyadic parts as decimal strings `mant*2^exp`
/// plus floating previews for readers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallRecord {
    pub re: String,
    pub im: String,
    pub rad: String,
    pub re_f64: f64,
    pub im_f64: f64,
    pub rad_f64: f64,
    pub precision: u32,
}

fn dyadic_string(d: &Dyadic) -> String {
    format!("{}p{}", d.mantissa(), d.exponent())
}

fn parse_dyadic(s: &str) -> Option<Dyadic> {
    let (m, e) = s.split_once('p')?;
    Some(Dyadic::new(m.parse().ok()?, e.parse().ok()?))
}

impl From<&ComplexBall> for BallRecord {
    fn from(b: &ComplexBall) -> Self {
        BallRecord {
            re: dyadic_string(&b.re),
            im: dyadic_string(&b.im),
            rad: dyadic_string(&b.rad),
            re_f64: b.re.to_f64(),
            im_f64: b.im.to_f64(),
            rad_f64: b.rad.to_f64(),
            precision: b.prec,
        }
    }
}

impl BallRecord {
    pub fn to_ball(&self) -> Option<ComplexBall> {
        Some(ComplexBall {
            re: parse_dyadic(&self.re)?,
            im: parse_dyadic(&self.im)?,
            rad: parse_dyadic(&self.rad)?,
            prec: self.precision,
        })
    }
}
