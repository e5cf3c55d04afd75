use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::linear::LinearSystemSpec;
use super::spec::Kind;
use crate::error::{Error, Result};
use crate::exactnum::{ratpoly, roots, ComplexBall, Dyadic, FieldElement, Round};
use crate::polyseries::Poly;

/// Relative margin applied to the certified minimum modulus of singular points.
pub const CUTOFF_MARGIN_BITS: i64 = 10;
const MAX_ORBIT: usize = 64;
const MAX_PREC: u32 = 4096;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "witness", rename_all = "kebab-case")]
pub enum RegularityWitness {
    /// The system has no finite singular point besides possibly 0.
    NoSingularPoints,
    /// `α^{q^n}` is a singular point.
    Singular { n: usize, point: String },
    /// Every orbit point with index below `cutoff` was checked; later ones are too small.
    Cutoff { cutoff: usize },
    /// Differential systems: `T(α) != 0`.
    NotAPole,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegularityReport {
    pub regular: bool,
    #[serde(flatten)]
    pub witness: RegularityWitness,
}

/// Polynomial whose roots are the finite singular points: `T · numer(det A)`.
pub fn singular_polynomial(system: &LinearSystemSpec) -> Poly {
    match system.kind {
        Kind::Differential => system.denominator().clone(),
        Kind::Mahler { .. } => system.denominator().mul(&system.det_reduced_numerator()),
    }
}

/// Certified lower bound for the moduli of the nonzero roots of `s` at embedding `emb`.
fn min_root_modulus(s: &Poly, emb: usize) -> Option<BigRational> {
    let v = s.valuation()?;
    let core: Vec<_> = s.coeffs()[v..].to_vec();
    if core.len() <= 1 {
        return None;
    }
    if core.iter().all(|c| c.as_rational().is_some()) {
        let rat: Vec<BigRational> = core.iter().map(|c| c.as_rational().unwrap().clone()).collect();
        let sf = ratpoly::divrem(&rat, &ratpoly::gcd(&rat, &ratpoly::derivative(&rat))).0;
        if let Ok(rs) = roots::isolate(&sf, 64) {
            return rs.iter().map(|b| b.abs_lower().to_rational()).min();
        }
    }
    // Cauchy: nonzero roots satisfy |z| >= |s_0| / (|s_0| + max |s_i|)
    let prec = 96;
    let balls: Vec<ComplexBall> = core.iter().map(|c| c.embed(emb, prec)).collect();
    let s0 = balls[0].abs_lower().to_rational();
    let big = balls[1..].iter().map(|b| b.abs_upper().to_rational()).max().unwrap();
    Some(&s0 / (&s0 + big))
}

/// Regularity of `α` for the system. Mahler systems need `|α| < 1` at embedding `emb`.
pub fn is_regular(system: &LinearSystemSpec, alpha: &FieldElement, emb: usize) -> Result<RegularityReport> {
    let s = singular_polynomial(system);
    if let Kind::Differential = system.kind {
        let regular = !system.denominator().eval(alpha).is_zero();
        let witness = if regular { RegularityWitness::NotAPole } else { RegularityWitness::Singular { n: 0, point: alpha.to_string() } };
        return Ok(RegularityReport { regular, witness });
    }
    let q = system.kind.q().unwrap() as u64;
    let abs = alpha_modulus(alpha, emb, 128);
    if !(abs.1 < BigRational::one()) {
        return Err(Error::Precondition("Mahler regularity requires a certified |α| < 1".into()));
    }
    if s.is_constant() {
        return Ok(RegularityReport { regular: true, witness: RegularityWitness::NoSingularPoints });
    }
    let zero_orbit = alpha.is_zero();
    let bound = min_root_modulus(&s, emb);
    let shrink = BigRational::one() - BigRational::new(BigInt::one(), BigInt::one() << CUTOFF_MARGIN_BITS);
    let mut point = alpha.clone();
    for n in 0..=MAX_ORBIT {
        if s.eval(&point).is_zero() {
            return Ok(RegularityReport { regular: false, witness: RegularityWitness::Singular { n, point: point.to_string() } });
        }
        if zero_orbit {
            return Ok(RegularityReport { regular: true, witness: RegularityWitness::Cutoff { cutoff: 0 } });
        }
        let Some(b) = &bound else {
            return Ok(RegularityReport { regular: true, witness: RegularityWitness::NoSingularPoints });
        };
        let next = point.pow(q);
        // |α|^{q^{n+1}} below the margin-scaled minimum modulus ends the search
        let (_, upper) = alpha_modulus(&next, emb, 128);
        if upper < b * &shrink {
            return Ok(RegularityReport { regular: true, witness: RegularityWitness::Cutoff { cutoff: n + 1 } });
        }
        point = next;
    }
    Err(Error::CannotCertify("orbit did not fall below the singular-point modulus bound".into()))
}

/// Certified `(lower, upper)` rational bounds of `|σ_emb(x)|`.
fn alpha_modulus(x: &FieldElement, emb: usize, prec: u32) -> (BigRational, BigRational) {
    if let Some(r) = x.as_rational() {
        return (r.abs(), r.abs());
    }
    let b = x.embed(emb, prec);
    (b.abs_lower().to_rational(), b.abs_upper().to_rational())
}

/// Least `ℓ >= 1` with `|α|^{q^ℓ} < ρ`, decided by certified comparison.
pub fn choose_ell(rho: &BigRational, alpha: &FieldElement, q: usize, emb: usize) -> Result<usize> {
    if !rho.is_positive() {
        return Err(Error::Precondition("ρ must be positive".into()));
    }
    let (lo, hi) = alpha_modulus(alpha, emb, 128);
    if lo.is_zero() || hi >= BigRational::one() {
        return Err(Error::Precondition("choose_ell needs 0 < |α| < 1".into()));
    }
    for ell in 1..=MAX_ORBIT {
        let e = (q as u64).checked_pow(ell as u32).ok_or_else(|| Error::CannotCertify("exponent overflow".into()))?;
        match compare_power(alpha, emb, e, rho)? {
            std::cmp::Ordering::Less => return Ok(ell),
            _ => continue,
        }
    }
    Err(Error::CannotCertify("no ℓ found below the iteration cap".into()))
}

/// Compare `|σ(α)|^e` with `ρ`, exactly when possible.
fn compare_power(alpha: &FieldElement, emb: usize, e: u64, rho: &BigRational) -> Result<std::cmp::Ordering> {
    if let Some(r) = alpha.as_rational() {
        if e <= 4096 {
            let p = num_traits::pow(r.abs(), e as usize);
            return Ok(p.cmp(rho));
        }
    }
    let mut prec = 128u32;
    while prec <= MAX_PREC {
        let b = alpha.embed(emb, prec);
        let lo = b.abs_lower();
        let hi = b.abs_upper();
        let lo_e = pow_dyadic(&lo, e, prec, Round::Floor);
        let hi_e = pow_dyadic(&hi, e, prec, Round::Ceil);
        let rd = rho.clone();
        if hi_e.to_rational() < rd {
            return Ok(std::cmp::Ordering::Less);
        }
        if lo_e.to_rational() > rd {
            return Ok(std::cmp::Ordering::Greater);
        }
        prec *= 2;
    }
    Err(Error::CannotCertify("|α|^(q^ℓ) and ρ could not be separated".into()))
}

fn pow_dyadic(x: &Dyadic, mut e: u64, prec: u32, dir: Round) -> Dyadic {
    let mut base = x.clone();
    let mut acc = Dyadic::one();
    while e > 0 {
        if e & 1 == 1 {
            acc = (&acc * &base).round(prec, dir);
        }
        e >>= 1;
        if e > 0 {
            base = (&base * &base).round(prec, dir);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{ratio, NumberField};
    use crate::systems::RatFunc;

    fn pole_system(k: &NumberField) -> LinearSystemSpec {
        let entry = RatFunc::new(Poly::one(k), Poly::from_rationals(k, &[ratio(-1, 2), ratio(1, 1)]));
        LinearSystemSpec::from_entries(Kind::Mahler { q: 2 }, k, vec![vec![entry]]).unwrap()
    }

    #[test]
    fn pole_orbit_examples() {
        let k = NumberField::rationals();
        let sys = pole_system(&k);
        let r = is_regular(&sys, &k.from_rational(ratio(1, 2)), 0).unwrap();
        assert!(!r.regular);
        assert!(matches!(r.witness, RegularityWitness::Singular { n: 0, .. }));
        let r = is_regular(&sys, &k.from_rational(ratio(1, 4)), 0).unwrap();
        assert!(r.regular);
        assert_eq!(r.witness, RegularityWitness::Cutoff { cutoff: 1 });
        assert!(is_regular(&sys, &k.from_int(2), 0).is_err());
    }

    #[test]
    fn orbit_reaching_pole_after_one_step() {
        let k = NumberField::new(vec![ratio(-1, 2), ratio(0, 1), ratio(1, 1)]).unwrap();
        let sys = pole_system(&k);
        let r = is_regular(&sys, &k.generator(), 0).unwrap();
        assert!(matches!(r.witness, RegularityWitness::Singular { n: 1, .. }));
    }

    #[test]
    fn ell_examples() {
        let k = NumberField::rationals();
        let e = |a: (i64, i64), q, r: (i64, i64)| choose_ell(&ratio(r.0, r.1), &k.from_rational(ratio(a.0, a.1)), q, 0).unwrap();
        assert_eq!(e((7, 10), 2, (3, 10)), 2);
        assert_eq!(e((1, 10), 2, (1, 2)), 1);
        assert_eq!(e((1, 2), 3, (1, 10)), 2);
        // |α|^q equal to ρ is not below it
        assert_eq!(e((1, 2), 2, (1, 4)), 2);
        let s = NumberField::new(vec![ratio(-1, 2), ratio(0, 1), ratio(1, 1)]).unwrap();
        assert_eq!(choose_ell(&ratio(3, 10), &s.generator(), 2, 0).unwrap(), 2);
        assert!(choose_ell(&ratio(1, 2), &s.generator(), 2, 0).is_err());
    }
}
