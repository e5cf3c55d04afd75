use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::eval::{ValueSource, ValueVector, ZeroStatus};
use super::lll::integer_relations;
use crate::error::{Error, Result};
use crate::exactnum::{ComplexBall, Dyadic, FieldElement, NumberField, Round};
use crate::polyseries::{MonomialBasis, MonomialOrder, MultiPoly};
use crate::relations::{buchberger, reduce};

/// Fixed-point bits beyond the value precision.
const FIXED_GUARD: u32 = 16;
/// Slack subtracted from the fitted `log2 C1` to absorb floating-point rounding.
const FIT_SLACK: f64 = 1e-9;
/// Largest scan for which every record may be retained.
pub const RETAIN_ALL_LIMIT: u64 = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Every integer polynomial up to the height bound.
    Exhaustive,
    /// Exhaustive up to a budgeted height, plus integer-relation candidates up to the bound.
    Lattice,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Retention {
    All,
    /// For each height, the record of smallest `|P|`, plus all zero-status records.
    Frontier,
}

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub d: usize,
    pub h_max: u64,
    pub t: u32,
    pub strategy: Strategy,
    pub retention: Retention,
    pub precision: u32,
    /// Rounds of precision doubling for records whose ball contains zero.
    pub max_refinements: u32,
    /// Generators of the ideal of relations among the values, over `field`.
    pub value_relations: Vec<MultiPoly<FieldElement>>,
    pub field: NumberField,
    /// Record budget of the exhaustive part of the lattice strategy.
    pub lattice_budget: u64,
}

impl ScanConfig {
    pub fn new(d: usize, h_max: u64, precision: u32) -> Self {
        ScanConfig {
            d,
            h_max,
            t: 1,
            strategy: Strategy::Exhaustive,
            retention: Retention::Frontier,
            precision,
            max_refinements: 3,
            value_relations: Vec::new(),
            field: NumberField::rationals(),
            lattice_budget: 1 << 20,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    /// Coefficients in graded monomial-basis order.
    pub coeffs: Vec<i64>,
    pub polynomial: String,
    pub degree: usize,
    pub height: u64,
    /// Certified bounds of `|P(ω)|` as `mantissa p exponent`.
    pub abs_lower: String,
    pub abs_upper: String,
    pub log2_abs_lower: Option<f64>,
    pub log2_abs_upper: Option<f64>,
    /// `-log|P| / (d^t log H(P))` from the lower bound, for `H(P) >= 2`.
    pub exponent: Option<f64>,
    pub status: ZeroStatus,
    pub precision: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Fit {
    pub c1_log2: f64,
    pub c1: f64,
    pub c2: f64,
}

impl Fit {
    /// `|P| >= C1 H^{-C2 d^t}` using the record's certified lower bound.
    pub fn holds(&self, r: &Record, d: usize, t: u32) -> bool {
        match (r.status, r.log2_abs_lower) {
            (ZeroStatus::Nonzero, Some(l)) => {
                let dt = (d as f64).powi(t as i32);
                l >= self.c1_log2 - self.c2 * dt * (r.height as f64).log2()
            }
            _ => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasureReport {
    pub m: usize,
    pub d: usize,
    pub t: u32,
    pub h_max: u64,
    pub strategy: Strategy,
    pub retention: Retention,
    pub precision: u32,
    pub basis_size: usize,
    pub enumerated: u64,
    pub nonzero: u64,
    pub exhaustive_height: u64,
    pub lattice_candidates: usize,
    pub refinement_rounds: u32,
    pub rigorous_values: bool,
    pub max_exponent: Option<f64>,
    pub min_exponent: Option<f64>,
    pub fit: Option<Fit>,
    pub undetermined: Vec<Record>,
    pub certified_zero: Vec<Record>,
    pub frontier: Vec<Record>,
    pub records: Vec<Record>,
}

impl MeasureReport {
    /// Whether the fitted bound holds for every retained nonzero record.
    pub fn fit_is_valid(&self) -> bool {
        let Some(fit) = &self.fit else { return true };
        self.frontier.iter().chain(&self.records).all(|r| fit.holds(r, self.d, self.t))
    }
}

/// Monomial values as fixed-point integer intervals at scale `2^-scale`.
struct FixedOmega {
    scale: i64,
    precision: u32,
    re: Vec<[BigInt; 2]>,
    im: Option<Vec<[BigInt; 2]>>,
}

fn monomial_balls(omega: &ValueVector, basis: &MonomialBasis) -> Vec<ComplexBall> {
    let prec = omega.precision + FIXED_GUARD;
    let mut out: Vec<ComplexBall> = Vec::with_capacity(basis.len());
    for mu in basis.exponents() {
        match mu.iter().position(|&e| e > 0) {
            None => out.push(ComplexBall::one(prec)),
            Some(i) => {
                let mut prev = mu.clone();
                prev[i] -= 1;
                let b = out[basis.index_of(&prev).unwrap()].mul(&omega.values[i + 1]);
                out.push(b);
            }
        }
    }
    out
}

fn fixed_omega(omega: &ValueVector, basis: &MonomialBasis) -> FixedOmega {
    let scale = (omega.precision + FIXED_GUARD) as i64;
    let balls = monomial_balls(omega, basis);
    let interval = |mid: &Dyadic, rad: &Dyadic| [(mid - rad).to_fixed(scale, Round::Floor), (mid + rad).to_fixed(scale, Round::Ceil)];
    let re = balls.iter().map(|b| interval(b.re(), b.radius())).collect();
    let im = (!omega.real).then(|| balls.iter().map(|b| interval(b.im(), b.radius())).collect());
    FixedOmega { scale, precision: omega.precision, re, im }
}

fn linear_interval(c: &[i64], parts: &[[BigInt; 2]]) -> [BigInt; 2] {
    let mut lo = BigInt::zero();
    let mut hi = BigInt::zero();
    for (&ci, [l, h]) in c.iter().zip(parts) {
        if ci >= 0 {
            lo += l * ci;
            hi += h * ci;
        } else {
            lo += h * ci;
            hi += l * ci;
        }
    }
    [lo, hi]
}

/// Distance of an interval from 0 (zero when it contains 0).
fn distance(iv: &[BigInt; 2]) -> BigUint {
    if iv[0].sign() == Sign::Plus {
        iv[0].magnitude().clone()
    } else if iv[1].sign() == Sign::Minus {
        iv[1].magnitude().clone()
    } else {
        BigUint::zero()
    }
}

fn farthest(iv: &[BigInt; 2]) -> BigUint {
    iv[0].magnitude().max(iv[1].magnitude()).clone()
}

fn canonical(c: &[i64]) -> bool {
    c.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
}

fn height(c: &[i64]) -> u64 {
    c.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0)
}

fn to_poly(c: &[i64], basis: &MonomialBasis) -> MultiPoly<BigInt> {
    MultiPoly::from_terms(basis.nvars(), c.iter().enumerate().map(|(i, &x)| (basis.exponent(i).to_vec(), BigInt::from(x))))
}

fn dyadic_string(d: &Dyadic) -> String {
    format!("{}p{}", d.mantissa(), d.exponent())
}

/// Certified `(lower, upper)` of `|P(ω)|`; lower is zero when the enclosure meets 0.
fn abs_bounds(c: &[i64], fx: &FixedOmega) -> (Dyadic, Dyadic) {
    let re = linear_interval(c, &fx.re);
    let s = -fx.scale;
    match &fx.im {
        None => (Dyadic::new(distance(&re).into(), s), Dyadic::new(farthest(&re).into(), s)),
        Some(im_parts) => {
            let im = linear_interval(c, im_parts);
            let (dr, di) = (distance(&re), distance(&im));
            let (fr, fi) = (farthest(&re), farthest(&im));
            let lo2 = Dyadic::new((&dr * &dr + &di * &di).into(), 2 * s);
            let hi2 = Dyadic::new((&fr * &fr + &fi * &fi).into(), 2 * s);
            let bits = fx.precision + FIXED_GUARD;
            (lo2.sqrt_lower(bits), hi2.sqrt_upper(bits))
        }
    }
}

fn make_record(c: &[i64], basis: &MonomialBasis, fx: &FixedOmega, dt: f64) -> Record {
    let (lo, hi) = abs_bounds(c, fx);
    let status = if lo.is_zero() { ZeroStatus::UndeterminedZero } else { ZeroStatus::Nonzero };
    let h = height(c);
    let degree = c.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, _)| basis.exponent(i).iter().sum::<u32>() as usize).max().unwrap_or(0);
    let log_lo = (!lo.is_zero()).then(|| lo.log2_abs());
    let exponent = match (status, log_lo) {
        (ZeroStatus::Nonzero, Some(l)) if h >= 2 => Some(-l / (dt * (h as f64).log2())),
        _ => None,
    };
    Record {
        coeffs: c.to_vec(),
        polynomial: to_poly(c, basis).to_string(),
        degree,
        height: h,
        abs_lower: dyadic_string(&lo),
        abs_upper: dyadic_string(&hi),
        log2_abs_lower: log_lo,
        log2_abs_upper: (!hi.is_zero()).then(|| hi.log2_abs()),
        exponent,
        status,
        precision: fx.precision,
    }
}

type Best = Option<(BigUint, u128)>;

/// Per-worker accumulator of the exhaustive pass.
struct Acc {
    best: Vec<Best>,
    worst: Vec<Best>,
    undetermined: Vec<u128>,
    all: Vec<u128>,
    count: u64,
    nonzero: u64,
}

impl Acc {
    fn new(h: usize) -> Self {
        Acc { best: vec![None; h + 1], worst: vec![None; h + 1], undetermined: Vec::new(), all: Vec::new(), count: 0, nonzero: 0 }
    }

    fn offer(&mut self, h: usize, key: &BigUint, idx: u128) {
        let better = match &self.best[h] {
            None => true,
            Some((k, i)) => (key, idx) < (k, *i),
        };
        if better {
            self.best[h] = Some((key.clone(), idx));
        }
        let worse = match &self.worst[h] {
            None => true,
            Some((k, i)) => key > k || (key == k && idx < *i),
        };
        if worse {
            self.worst[h] = Some((key.clone(), idx));
        }
    }

    fn merge(mut self, o: Acc) -> Acc {
        for (h, b) in o.best.into_iter().enumerate() {
            if let Some((k, i)) = b {
                let better = self.best[h].as_ref().is_none_or(|(k0, i0)| (&k, i) < (k0, *i0));
                if better {
                    self.best[h] = Some((k, i));
                }
            }
        }
        for (h, w) in o.worst.into_iter().enumerate() {
            if let Some((k, i)) = w {
                let worse = self.worst[h].as_ref().is_none_or(|(k0, i0)| k > *k0 || (k == *k0 && i < *i0));
                if worse {
                    self.worst[h] = Some((k, i));
                }
            }
        }
        self.undetermined.extend(o.undetermined);
        self.all.extend(o.all);
        self.count += o.count;
        self.nonzero += o.nonzero;
        self
    }
}

fn decode(mut idx: u128, p: usize, h: u64) -> Vec<i64> {
    let base = 2 * h as u128 + 1;
    let mut c = vec![0i64; p];
    for i in (0..p).rev() {
        c[i] = (idx % base) as i64 - h as i64;
        idx /= base;
    }
    c
}

/// Exhaustive pass over all canonical coefficient vectors with height `<= h`.
fn exhaustive(fx: &FixedOmega, p: usize, h: u64, keep_all: bool) -> Acc {
    let base = 2 * h + 1;
    let outer_count = base.pow(p as u32 - 1);
    let hs = h as i64;
    (0..outer_count)
        .into_par_iter()
        .fold(
            || Acc::new(h as usize),
            |mut acc, o| {
                let outer = decode(o as u128, p - 1, h);
                let outer_zero = outer.iter().all(|&x| x == 0);
                if !outer_zero && !canonical(&outer) {
                    return acc;
                }
                let h_outer = height(&outer);
                let mut pad = outer.clone();
                pad.push(0);
                let last = p - 1;
                let base_re = linear_interval(&pad, &fx.re);
                let base_im = fx.im.as_ref().map(|im| linear_interval(&pad, im));
                let start = if outer_zero { 1 } else { -hs };
                // c < 0 pairs (lo, hi) with (w_hi, w_lo); c >= 0 with (w_lo, w_hi)
                let wr = &fx.re[last];
                let wi = fx.im.as_ref().map(|im| &im[last]);
                let mut re = [&base_re[0] + &wr[1] * start, &base_re[1] + &wr[0] * start];
                let mut im = base_im.as_ref().map(|b| {
                    let w = wi.unwrap();
                    [&b[0] + &w[1] * start, &b[1] + &w[0] * start]
                });
                for c in start..=hs {
                    if c == 0 {
                        re = base_re.clone();
                        im = base_im.clone();
                    } else if c > 0 {
                        if c == 1 && start < 0 || c == 1 && start == 1 {
                            re = [&base_re[0] + &wr[0], &base_re[1] + &wr[1]];
                            im = base_im.as_ref().map(|b| {
                                let w = wi.unwrap();
                                [&b[0] + &w[0], &b[1] + &w[1]]
                            });
                        } else {
                            re[0] += &wr[0];
                            re[1] += &wr[1];
                            if let (Some(v), Some(w)) = (im.as_mut(), wi) {
                                v[0] += &w[0];
                                v[1] += &w[1];
                            }
                        }
                    } else if c > start {
                        re[0] += &wr[1];
                        re[1] += &wr[0];
                        if let (Some(v), Some(w)) = (im.as_mut(), wi) {
                            v[0] += &w[1];
                            v[1] += &w[0];
                        }
                    }
                    let idx = o as u128 * base as u128 + (c + hs) as u128;
                    let hh = h_outer.max(c.unsigned_abs()) as usize;
                    acc.count += 1;
                    if keep_all {
                        acc.all.push(idx);
                    }
                    let key = match &im {
                        None => distance(&re),
                        Some(v) => {
                            let (a, b) = (distance(&re), distance(v));
                            &a * &a + &b * &b
                        }
                    };
                    if key.is_zero() {
                        acc.undetermined.push(idx);
                    } else {
                        acc.nonzero += 1;
                        acc.offer(hh, &key, idx);
                    }
                }
                acc
            },
        )
        .reduce(|| Acc::new(h as usize), Acc::merge)
}

fn cmp_records(a: &Record, b: &Record) -> Ordering {
    let la = parse_lower(a);
    let lb = parse_lower(b);
    la.cmp(&lb).then_with(|| a.coeffs.cmp(&b.coeffs))
}

fn parse_lower(r: &Record) -> Dyadic {
    let (m, e) = r.abs_lower.split_once('p').expect("dyadic string");
    Dyadic::new(m.parse().expect("mantissa"), e.parse().expect("exponent"))
}

/// Integer-relation candidates from the ball midpoints at several scales.
fn lattice_candidates(fx: &FixedOmega, h_min: u64, h_max: u64) -> Vec<Vec<i64>> {
    let mids = |parts: &[[BigInt; 2]]| -> Vec<BigInt> { parts.iter().map(|[l, h]| (l + h) >> 1usize).collect() };
    let re = mids(&fx.re);
    let im = fx.im.as_ref().map(|v| mids(v));
    let mut out = BTreeSet::new();
    let mut k = 8i64;
    while k <= fx.scale {
        let shift = (fx.scale - k) as usize;
        let xs: Vec<BigInt> = re.iter().map(|x| x >> shift).collect();
        let ys: Option<Vec<BigInt>> = im.as_ref().map(|v| v.iter().map(|x| x >> shift).collect());
        for c in integer_relations(&xs, ys.as_deref()) {
            let Some(mut c) = c.iter().map(|x| x.to_i64()).collect::<Option<Vec<i64>>>() else { continue };
            if !canonical(&c) {
                c.iter_mut().for_each(|x| *x = -*x);
            }
            let h = height(&c);
            if h > h_min && h <= h_max {
                out.insert(c);
            }
        }
        k += 8;
    }
    out.into_iter().collect()
}

/// Largest height whose exhaustive scan stays within `budget` records.
fn budget_height(p: usize, h_max: u64, budget: u64) -> u64 {
    let mut h = 0;
    while h < h_max {
        let n = (2 * (h + 1) + 1) as f64;
        if n.powi(p as i32) / 2.0 > budget as f64 {
            break;
        }
        h += 1;
    }
    h.max(1)
}

/// Rigorous scan of integer polynomials `P` with `deg P <= d`, `H(P) <= H_max` at `ω`.
pub fn liouville_scan(source: &dyn ValueSource, cfg: &ScanConfig) -> Result<MeasureReport> {
    if cfg.d < 1 || cfg.h_max < 1 {
        return Err(Error::Precondition("need d >= 1 and H_max >= 1".into()));
    }
    let omega = source.values(cfg.precision)?;
    let m = omega.nvars();
    if m == 0 {
        return Err(Error::Precondition("no function values".into()));
    }
    let basis = MonomialBasis::new(m, cfg.d);
    let p = basis.len();
    let dt = (cfg.d as f64).powi(cfg.t as i32);
    let h_exh = match cfg.strategy {
        Strategy::Exhaustive => cfg.h_max,
        Strategy::Lattice => budget_height(p, cfg.h_max, cfg.lattice_budget),
    };
    let space = (2.0 * h_exh as f64 + 1.0).powi(p as i32);
    if space > 2f64.powi(100) {
        return Err(Error::Precondition(format!("enumeration of {space:.3e} records is out of range")));
    }
    let keep_all = cfg.retention == Retention::All;
    if keep_all && space / 2.0 > RETAIN_ALL_LIMIT as f64 {
        return Err(Error::Precondition(format!("retaining all of {space:.3e} records exceeds {RETAIN_ALL_LIMIT}")));
    }
    let fx = fixed_omega(&omega, &basis);
    let acc = exhaustive(&fx, p, h_exh, keep_all);

    let mut frontier: BTreeMap<u64, Record> = BTreeMap::new();
    for (h, b) in acc.best.iter().enumerate() {
        if let Some((_, idx)) = b {
            frontier.insert(h as u64, make_record(&decode(*idx, p, h_exh), &basis, &fx, dt));
        }
    }
    let worst: Vec<Record> = acc.worst.iter().flatten().map(|(_, idx)| make_record(&decode(*idx, p, h_exh), &basis, &fx, dt)).collect();
    let mut undetermined: Vec<Vec<i64>> = {
        let mut u = acc.undetermined.clone();
        u.sort_unstable();
        u.into_iter().map(|i| decode(i, p, h_exh)).collect()
    };
    let mut records: Vec<Record> = if keep_all {
        let mut a = acc.all.clone();
        a.sort_unstable();
        a.into_iter().map(|i| make_record(&decode(i, p, h_exh), &basis, &fx, dt)).collect()
    } else {
        Vec::new()
    };
    let mut enumerated = acc.count;
    let mut nonzero = acc.nonzero;

    let offer = |frontier: &mut BTreeMap<u64, Record>, r: Record| {
        let replace = frontier.get(&r.height).is_none_or(|cur| cmp_records(&r, cur) == Ordering::Less);
        if replace {
            frontier.insert(r.height, r);
        }
    };

    let mut lattice_count = 0;
    if cfg.strategy == Strategy::Lattice && cfg.h_max > h_exh {
        let cands = lattice_candidates(&fx, h_exh, cfg.h_max);
        lattice_count = cands.len();
        for c in cands {
            enumerated += 1;
            let r = make_record(&c, &basis, &fx, dt);
            if keep_all {
                records.push(r.clone());
            }
            if r.status == ZeroStatus::Nonzero {
                nonzero += 1;
                offer(&mut frontier, r);
            } else {
                undetermined.push(c);
            }
        }
    }

    // records whose ball meets zero are retried at doubled precision
    let mut rounds = 0;
    let mut prec = cfg.precision;
    let mut undetermined_records: Vec<Record> = Vec::new();
    while !undetermined.is_empty() && rounds < cfg.max_refinements {
        rounds += 1;
        prec *= 2;
        let fine = fixed_omega(&source.values(prec)?, &basis);
        let mut still = Vec::new();
        for c in undetermined {
            let r = make_record(&c, &basis, &fine, dt);
            if r.status == ZeroStatus::Nonzero {
                nonzero += 1;
                if keep_all {
                    if let Some(slot) = records.iter_mut().find(|x| x.coeffs == r.coeffs) {
                        *slot = r.clone();
                    }
                }
                offer(&mut frontier, r);
            } else {
                still.push(c);
            }
        }
        undetermined = still;
    }
    let final_fx = if rounds == 0 { None } else { Some(fixed_omega(&source.values(prec)?, &basis)) };
    let gb = if cfg.value_relations.is_empty() { Vec::new() } else { buchberger(&cfg.value_relations, MonomialOrder::GrLex) };
    let mut certified_zero = Vec::new();
    for c in undetermined {
        let mut r = make_record(&c, &basis, final_fx.as_ref().unwrap_or(&fx), dt);
        if !gb.is_empty() {
            let pk = to_poly(&c, &basis).map(|x| cfg.field.from_bigint(x.clone()));
            if reduce(&pk, &gb, MonomialOrder::GrLex).is_zero() {
                r.status = ZeroStatus::CertifiedZero;
            }
        }
        if keep_all {
            if let Some(slot) = records.iter_mut().find(|x| x.coeffs == r.coeffs) {
                *slot = r.clone();
            }
        }
        if r.status == ZeroStatus::CertifiedZero {
            certified_zero.push(r);
        } else {
            undetermined_records.push(r);
        }
    }

    let frontier: Vec<Record> = frontier.into_values().collect();
    let max_exponent = frontier.iter().filter_map(|r| r.exponent).fold(None, |a: Option<f64>, e| Some(a.map_or(e, |x| x.max(e))));
    let min_exponent = worst.iter().filter_map(|r| r.exponent).fold(None, |a: Option<f64>, e| Some(a.map_or(e, |x| x.min(e))));
    let fit = if frontier.is_empty() {
        None
    } else {
        let c2 = max_exponent.unwrap_or(0.0).max(0.0);
        let c1_log2 = frontier
            .iter()
            .filter_map(|r| r.log2_abs_lower.map(|l| l + c2 * dt * (r.height as f64).log2()))
            .fold(f64::INFINITY, f64::min)
            - FIT_SLACK;
        Some(Fit { c1_log2, c1: c1_log2.exp2(), c2 })
    };
    Ok(MeasureReport {
        m,
        d: cfg.d,
        t: cfg.t,
        h_max: cfg.h_max,
        strategy: cfg.strategy,
        retention: cfg.retention,
        precision: cfg.precision,
        basis_size: p,
        enumerated,
        nonzero,
        exhaustive_height: h_exh,
        lattice_candidates: lattice_count,
        refinement_rounds: rounds,
        rigorous_values: omega.rigorous,
        max_exponent,
        min_exponent,
        fit,
        undetermined: undetermined_records,
        certified_zero,
        frontier,
        records,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WdPoint {
    pub height: u64,
    /// Largest `w` with `0 < |P(ξ)| < H(P)^{-w}` witnessed by some `P` with `H(P) <= height`.
    pub exponent: Option<f64>,
    pub witness: Option<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WdEstimate {
    pub d: usize,
    pub points: Vec<WdPoint>,
    pub estimate: Option<f64>,
    /// Polynomials whose value could not be separated from zero; excluded from the estimate.
    pub excluded: Vec<Record>,
}

/// Best approximation exponents over a height schedule, nondecreasing in the height.
pub fn estimate_wd(source: &dyn ValueSource, d: usize, schedule: &[u64], cfg: &ScanConfig) -> Result<WdEstimate> {
    let h_max = schedule.iter().copied().max().ok_or_else(|| Error::Precondition("empty height schedule".into()))?;
    let mut c = cfg.clone();
    c.d = d;
    c.h_max = h_max;
    c.retention = Retention::Frontier;
    let report = liouville_scan(source, &c)?;
    let witnessed: Vec<(u64, f64, Vec<i64>)> = report
        .frontier
        .iter()
        .filter(|r| r.height >= 2)
        .filter_map(|r| r.log2_abs_upper.map(|u| (r.height, -u / (r.height as f64).log2(), r.coeffs.clone())))
        .collect();
    let mut sorted = schedule.to_vec();
    sorted.sort_unstable();
    let points: Vec<WdPoint> = sorted
        .iter()
        .map(|&h| {
            let best = witnessed.iter().filter(|(hh, _, _)| *hh <= h).fold(None::<&(u64, f64, Vec<i64>)>, |a, x| match a {
                Some(y) if y.1 >= x.1 => Some(y),
                _ => Some(x),
            });
            WdPoint { height: h, exponent: best.map(|b| b.1), witness: best.map(|b| b.2.clone()) }
        })
        .collect();
    let estimate = points.last().and_then(|p| p.exponent);
    let mut excluded = report.undetermined;
    excluded.extend(report.certified_zero);
    Ok(WdEstimate { d, points, estimate, excluded })
}

/// `|P(ω)|` bounds for a single coefficient vector in the monomial basis of degree `d`.
pub fn record_for(omega: &ValueVector, d: usize, t: u32, coeffs: &[i64]) -> Result<Record> {
    let basis = MonomialBasis::new(omega.nvars(), d);
    if coeffs.len() != basis.len() {
        return Err(Error::DimensionMismatch { expected: basis.len(), found: coeffs.len() });
    }
    let fx = fixed_omega(omega, &basis);
    Ok(make_record(coeffs, &basis, &fx, (d as f64).powi(t as i32)))
}

/// One line of a streamed record table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub coeffs: Vec<i64>,
    pub degree: usize,
    pub height: u64,
    pub log2_abs_lower: Option<f64>,
    pub log2_abs_upper: Option<f64>,
    pub exponent: Option<f64>,
    pub status: ZeroStatus,
}

/// Every canonical polynomial with `H(P) <= h_max`, in enumeration order, evaluated at the
/// precision of `omega`. Zero status comes from the ball alone.
pub fn for_each_row(omega: &ValueVector, d: usize, h_max: u64, t: u32, sink: &mut dyn FnMut(&Row) -> Result<()>) -> Result<u64> {
    let basis = MonomialBasis::new(omega.nvars(), d);
    let p = basis.len();
    let total = (2 * h_max as u128 + 1).checked_pow(p as u32).filter(|&n| n <= 1u128 << 64).ok_or_else(|| Error::Precondition("enumeration out of range".into()))?;
    let fx = fixed_omega(omega, &basis);
    let degrees: Vec<usize> = basis.exponents().iter().map(|e| e.iter().sum::<u32>() as usize).collect();
    let dt = (d as f64).powi(t as i32);
    let mut count = 0;
    for idx in 0..total {
        let c = decode(idx, p, h_max);
        if !canonical(&c) {
            continue;
        }
        let (lo, hi) = abs_bounds(&c, &fx);
        let height = height(&c);
        let status = if lo.is_zero() { ZeroStatus::UndeterminedZero } else { ZeroStatus::Nonzero };
        let log2_abs_lower = (!lo.is_zero()).then(|| lo.log2_abs());
        let exponent = log2_abs_lower.filter(|_| height >= 2).map(|l| -l / (dt * (height as f64).log2()));
        let degree = c.iter().zip(&degrees).filter(|(x, _)| **x != 0).map(|(_, g)| *g).max().unwrap_or(0);
        let row = Row { degree, height, log2_abs_lower, log2_abs_upper: (!hi.is_zero()).then(|| hi.log2_abs()), exponent, status, coeffs: c };
        sink(&row)?;
        count += 1;
    }
    Ok(count)
}
