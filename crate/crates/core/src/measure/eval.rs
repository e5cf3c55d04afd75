use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{ComplexBall, Dyadic, FieldElement, Round};
use crate::polyseries::{MultiPoly, TruncSeries};
use crate::systems::{choose_ell, FunctionSpec, Kind};

/// Extra working bits on top of the requested precision.
const GUARD_BITS: u32 = 32;
const MAX_TERMS: usize = 1 << 20;
const HEURISTIC_SAFETY_BITS: i64 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvalMode {
    /// Radius includes a proven tail bound.
    Certified,
    /// Radius from the difference of two truncations, times 16; not a proof.
    Heuristic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalOptions {
    pub mode: EvalMode,
    /// Mahler functions: evaluate at `α^{q^ℓ}` and transport back through the equation.
    pub pull_back: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { mode: EvalMode::Certified, pull_back: true }
    }
}

#[derive(Clone, Debug)]
pub struct Evaluation {
    pub value: ComplexBall,
    pub rigorous: bool,
    /// Series terms summed at the innermost evaluation point.
    pub terms: usize,
    /// Number of functional-equation steps used to transport the value back to `α`.
    pub pull_back_steps: usize,
}

/// Upper bound of `|σ(x)|` as a rational.
fn modulus_upper(x: &FieldElement, emb: usize, prec: u32) -> BigRational {
    match x.as_rational() {
        Some(r) => r.abs(),
        None => x.embed(emb, prec).abs_upper().to_rational(),
    }
}

fn dyadic_up(x: &BigRational) -> Dyadic {
    Dyadic::from_rational(x, 64, Round::Ceil)
}

/// `Σ_{n < N} c_n x^n` in ball arithmetic.
fn horner(s: &TruncSeries, x: &ComplexBall, emb: usize, wp: u32) -> ComplexBall {
    let mut acc = ComplexBall::zero(wp);
    for c in s.coeffs().iter().rev() {
        acc = acc.mul(x);
        if !c.is_zero() {
            acc = acc.add(&c.embed(emb, wp));
        }
    }
    acc
}

/// Smallest `N` with `2 B y^N / N! <= 2^{-bits}` and `N >= 2y`, bounding the tail
/// of a series with `|f_n| <= B C^n / n!` at `|z| <= x`, `y = C x`.
fn factorial_cutoff(b: &BigRational, y: &BigRational, bits: u32) -> Result<(usize, Dyadic)> {
    let target = Dyadic::pow2(-(bits as i64));
    let y_up = dyadic_up(y);
    let mut term = dyadic_up(b);
    let min_n = (y * BigRational::from_integer(2.into())).ceil().to_integer().to_usize().unwrap_or(usize::MAX);
    for n in 0..MAX_TERMS {
        let tail = term.mul_pow2(1);
        if n >= min_n && n >= 1 && tail <= target {
            return Ok((n, tail));
        }
        let next = (&term * &y_up).to_rational() / BigRational::from_integer(BigInt::from(n + 1));
        term = dyadic_up(&next);
    }
    Err(Error::PrecisionExhausted("factorial tail bound needs too many terms".into()))
}

/// Smallest `N` with `B y^N / (1 - y) <= 2^{-bits}` for `y < 1`.
fn geometric_cutoff(b: &BigRational, y: &BigRational, bits: u32) -> Result<(usize, Dyadic)> {
    let target = Dyadic::pow2(-(bits as i64));
    let one = BigRational::one();
    let scale = dyadic_up(&(b / (&one - y)));
    let y_up = dyadic_up(y);
    let mut term = scale;
    for n in 0..MAX_TERMS {
        if term <= target {
            return Ok((n, term));
        }
        term = (&term * &y_up).round(64, Round::Ceil);
    }
    Err(Error::PrecisionExhausted("geometric tail bound needs too many terms".into()))
}

fn heuristic(spec: &FunctionSpec, alpha: &FieldElement, emb: usize, prec: u32) -> Result<Evaluation> {
    let wp = prec + GUARD_BITS;
    let x = alpha.embed(emb, wp);
    let mut n = 32usize;
    loop {
        let s = spec.extend_series(2 * n)?;
        let a = horner(&s.truncate(n), &x, emb, wp);
        let b = horner(&s, &x, emb, wp);
        let diff = b.sub(&a).abs_upper();
        let scale = Dyadic::max(&b.abs_upper(), &Dyadic::one());
        if diff.is_zero() || diff <= (&scale * &Dyadic::pow2(-(prec as i64) - 4)) || 2 * n >= MAX_TERMS {
            let rad = diff.mul_pow2(HEURISTIC_SAFETY_BITS);
            return Ok(Evaluation { value: b.inflate(&rad), rigorous: false, terms: 2 * n, pull_back_steps: 0 });
        }
        n *= 2;
    }
}

fn direct(spec: &FunctionSpec, alpha: &FieldElement, emb: usize, prec: u32) -> Result<Evaluation> {
    let wp = prec + GUARD_BITS;
    let growth = spec.growth.as_ref().ok_or_else(|| {
        Error::TailBoundUnavailable(format!("function {:?} has no coefficient growth bound", spec.name))
    })?;
    let x = modulus_upper(alpha, emb, wp);
    let y = &growth.rate * &x;
    let (n, tail) = match spec.kind {
        Kind::Differential => factorial_cutoff(&growth.constant, &y, prec + 2)?,
        Kind::Mahler { .. } => {
            if y >= BigRational::one() {
                return Err(Error::Precondition("growth rate times |α| must be below 1".into()));
            }
            geometric_cutoff(&growth.constant, &y, prec + 2)?
        }
    };
    let s = spec.extend_series(n.max(1))?;
    let value = horner(&s, &alpha.embed(emb, wp), emb, wp).inflate(&tail);
    Ok(Evaluation { value, rigorous: true, terms: n, pull_back_steps: 0 })
}

/// Value of the solution at `σ_emb(α)`.
pub fn eval_at(spec: &FunctionSpec, alpha: &FieldElement, emb: usize, prec: u32, opts: EvalOptions) -> Result<Evaluation> {
    if alpha.is_zero() {
        let f0 = spec.extend_series(1)?.coeff(0).clone();
        return Ok(Evaluation { value: f0.embed(emb, prec), rigorous: true, terms: 1, pull_back_steps: 0 });
    }
    if opts.mode == EvalMode::Heuristic {
        return heuristic(spec, alpha, emb, prec);
    }
    let Kind::Mahler { q } = spec.kind else {
        return direct(spec, alpha, emb, prec);
    };
    let growth = spec.growth.as_ref().ok_or_else(|| {
        Error::TailBoundUnavailable(format!("function {:?} has no coefficient growth bound", spec.name))
    })?;
    let x = modulus_upper(alpha, emb, prec + GUARD_BITS);
    let y = &growth.rate * &x;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let inside_radius = spec.radius.as_ref().is_none_or(|r| x < *r);
    if (y <= half || !opts.pull_back) && inside_radius {
        return direct(spec, alpha, emb, prec);
    }
    if !opts.pull_back {
        return Err(Error::Precondition("α lies outside the declared radius and pull-back is disabled".into()));
    }
    let mut rho = BigRational::one() / (&growth.rate * BigRational::from_integer(2.into()));
    if let Some(r) = &spec.radius {
        rho = rho.min(r.clone());
    }
    let ell = choose_ell(&rho, alpha, q, emb)?;
    pull_back(spec, alpha, emb, prec, q, ell)
}

/// Values at `β_k = α^{q^k}` for `k >= ell` directly, then `k = ell-1, …, 0` from
/// `a_0(β_k) f(β_k) = b(β_k) - Σ_{j>=1} a_j(β_k) f(β_{k+j})`.
fn pull_back(spec: &FunctionSpec, alpha: &FieldElement, emb: usize, prec: u32, q: usize, ell: usize) -> Result<Evaluation> {
    let m = spec.order();
    // each step can lose precision dividing by a_0(β); give every level extra bits
    let wp = prec + GUARD_BITS * (ell as u32 + 1);
    let mut betas = vec![alpha.clone()];
    for _ in 0..ell + m {
        let b = betas.last().unwrap().pow(q as u64);
        betas.push(b);
    }
    let mut vals: Vec<Option<ComplexBall>> = vec![None; ell + m];
    let mut terms = 0;
    for k in ell..ell + m {
        let e = direct(spec, &betas[k], emb, wp)?;
        terms = terms.max(e.terms);
        vals[k] = Some(e.value);
    }
    for k in (0..ell).rev() {
        let beta = &betas[k];
        let a0 = spec.coeffs[0].eval(beta);
        if a0.is_zero() {
            return Err(Error::Singular(format!("leading coefficient vanishes at α^(q^{k})")));
        }
        let mut acc = match &spec.rhs {
            Some(b) => b.eval(beta).embed(emb, wp),
            None => ComplexBall::zero(wp),
        };
        for j in 1..=m {
            let aj = spec.coeffs[j].eval(beta);
            if !aj.is_zero() {
                acc = acc.sub(&aj.embed(emb, wp).mul(vals[k + j].as_ref().unwrap()));
            }
        }
        let v = acc.div(&a0.embed(emb, wp)).ok_or_else(|| Error::PrecisionExhausted("a_0(β) ball contains zero".into()))?;
        vals[k] = Some(v);
    }
    Ok(Evaluation { value: vals[0].take().unwrap(), rigorous: true, terms, pull_back_steps: ell })
}

/// `ω = (1, f_1(α), …, f_m(α))`.
#[derive(Clone, Debug)]
pub struct ValueVector {
    pub values: Vec<ComplexBall>,
    pub precision: u32,
    pub rigorous: bool,
    /// The values are known to be real, so imaginary parts of the balls can be ignored.
    pub real: bool,
}

impl ValueVector {
    pub fn from_balls(values: Vec<ComplexBall>, precision: u32) -> Self {
        let mut all = vec![ComplexBall::one(precision)];
        all.extend(values);
        let real = all.iter().all(|b| b.is_real());
        ValueVector { values: all, precision, rigorous: true, real }
    }

    /// Number of functions `m`.
    pub fn nvars(&self) -> usize {
        self.values.len() - 1
    }
}

/// Anything that can produce `ω` at a requested precision.
pub trait ValueSource: Sync {
    fn values(&self, prec: u32) -> Result<ValueVector>;
}

impl ValueSource for ValueVector {
    fn values(&self, _prec: u32) -> Result<ValueVector> {
        Ok(self.clone())
    }
}

/// Functions evaluated at a common algebraic point.
#[derive(Clone, Debug)]
pub struct Instance {
    pub functions: Vec<FunctionSpec>,
    pub alpha: FieldElement,
    pub embedding: usize,
    pub options: EvalOptions,
}

impl ValueSource for Instance {
    fn values(&self, prec: u32) -> Result<ValueVector> {
        let mut balls = Vec::with_capacity(self.functions.len());
        let mut rigorous = true;
        for f in &self.functions {
            let e = eval_at(f, &self.alpha, self.embedding, prec, self.options)?;
            rigorous &= e.rigorous;
            balls.push(e.value);
        }
        let mut v = ValueVector::from_balls(balls, prec);
        v.rigorous = rigorous;
        // a real point in a real embedding with coefficients from the field gives real values
        v.real = self.alpha.field().embedding(self.embedding, 64).is_real() && self.alpha.embed(self.embedding, 64).is_real();
        Ok(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZeroStatus {
    Nonzero,
    /// The ball contains 0; nothing is claimed.
    UndeterminedZero,
    /// `P` lies in the ideal of supplied value relations.
    CertifiedZero,
}

#[derive(Clone, Debug)]
pub struct PolyValue {
    pub value: ComplexBall,
    pub status: ZeroStatus,
}

/// `P(f_1(α), …, f_m(α))` in ball arithmetic.
pub fn poly_value(p: &MultiPoly<BigInt>, omega: &ValueVector) -> Result<PolyValue> {
    let m = omega.nvars();
    if p.nvars() != m {
        return Err(Error::DimensionMismatch { expected: m, found: p.nvars() });
    }
    let prec = omega.precision + GUARD_BITS;
    if p.is_zero() {
        return Ok(PolyValue { value: ComplexBall::zero(prec), status: ZeroStatus::CertifiedZero });
    }
    let maxdeg = p.total_degree();
    let powers: Vec<Vec<ComplexBall>> = omega.values[1..]
        .iter()
        .map(|w| {
            let mut v = vec![ComplexBall::one(prec)];
            for k in 1..=maxdeg {
                v.push(v[k - 1].mul(w));
            }
            v
        })
        .collect();
    let value = p.fold(ComplexBall::zero(prec), |acc, e, c| {
        let mut t = ComplexBall::from_rational(&BigRational::from_integer(c.clone()), prec);
        for (i, &k) in e.iter().enumerate() {
            if k > 0 {
                t = t.mul(&powers[i][k as usize]);
            }
        }
        acc.add(&t)
    });
    let status = if value.contains_zero() { ZeroStatus::UndeterminedZero } else { ZeroStatus::Nonzero };
    Ok(PolyValue { value, status })
}
