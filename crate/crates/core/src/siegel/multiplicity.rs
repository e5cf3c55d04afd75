use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::FieldElement;
use crate::polyseries::{all_monomials, MonomialBasis, TruncSeries};

/// Sampled coefficients lie in `[-COEFF_RANGE, COEFF_RANGE]`.
pub const COEFF_RANGE: i64 = 100;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultiplicityReport {
    pub trials: usize,
    pub z_degree: usize,
    pub x_degree: usize,
    pub transcendence_degree: u32,
    pub order: usize,
    pub seed: u64,
    /// Valuation of each trial, in trial order.
    pub valuations: Vec<usize>,
    pub histogram: BTreeMap<usize, usize>,
    /// `max val / (M N^t)` as an exact fraction and as a float.
    pub max_ratio: String,
    pub max_ratio_f64: f64,
}

/// Random coefficients `p_{μ,j}` for one trial: one row per monomial, `M + 1` entries each.
fn sample(seed: u64, trial: usize, p: usize, m: usize) -> Vec<Vec<i64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    loop {
        let c: Vec<Vec<i64>> = (0..p).map(|_| (0..=m).map(|_| rng.gen_range(-COEFF_RANGE..=COEFF_RANGE)).collect()).collect();
        if c.iter().flatten().any(|&x| x != 0) {
            return c;
        }
    }
}

/// First nonzero coefficient index of `Σ_μ P_μ(z) f^μ(z)`, computed coefficient by coefficient.
fn lazy_valuation(coeffs: &[Vec<i64>], mono: &[TruncSeries], order: usize) -> Option<usize> {
    let field = mono[0].field();
    let lifted: Vec<Vec<Option<FieldElement>>> = coeffs
        .iter()
        .map(|row| row.iter().map(|&c| (c != 0).then(|| field.from_int(c))).collect())
        .collect();
    for k in 0..order {
        let mut acc = field.zero();
        for (row, s) in lifted.iter().zip(mono) {
            for (j, c) in row.iter().enumerate() {
                if j > k {
                    break;
                }
                if let Some(c) = c {
                    let sk = s.coeff(k - j);
                    if !sk.is_zero() {
                        acc = acc.add(&c.mul(sk));
                    }
                }
            }
        }
        if !acc.is_zero() {
            return Some(k);
        }
    }
    None
}

/// Valuations of `R_0(z, f)` for pseudo-random `R_0` with `deg_z <= M`, total `X`-degree `<= N`.
pub fn check_multiplicity(f: &[TruncSeries], t: u32, trials: usize, m: usize, n: usize, seed: u64) -> Result<MultiplicityReport> {
    if f.is_empty() {
        return Err(Error::Precondition("no functions supplied".into()));
    }
    let basis = MonomialBasis::new(f.len(), n);
    let mono = all_monomials(&basis, f)?;
    let order = mono[0].order();
    let vals: Vec<Option<usize>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let c = sample(seed, trial, basis.len(), m);
            lazy_valuation(&c, &mono, order)
        })
        .collect();
    let mut valuations = Vec::with_capacity(trials);
    for (i, v) in vals.into_iter().enumerate() {
        match v {
            Some(v) => valuations.push(v),
            None => {
                return Err(Error::TruncationTooSmall {
                    order,
                    reason: format!("trial {i} vanishes on the whole truncation"),
                })
            }
        }
    }
    let mut histogram = BTreeMap::new();
    for &v in &valuations {
        *histogram.entry(v).or_insert(0) += 1;
    }
    let scale = BigInt::from(m.max(1)) * BigInt::from(n.max(1)).pow(t);
    let max_val = valuations.iter().copied().max().unwrap_or(0);
    let ratio = BigRational::new(BigInt::from(max_val), scale);
    Ok(MultiplicityReport {
        trials,
        z_degree: m,
        x_degree: n,
        transcendence_degree: t,
        order,
        seed,
        valuations,
        histogram,
        max_ratio: ratio.to_string(),
        max_ratio_f64: ratio.to_f64().unwrap_or(f64::INFINITY),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::NumberField;

    #[test]
    fn constant_function_has_valuation_zero_mostly() {
        let k = NumberField::rationals();
        let one = TruncSeries::one(&k, 16);
        let r = check_multiplicity(&[one], 1, 20, 2, 2, 7).unwrap();
        assert_eq!(r.valuations.len(), 20);
        assert!(r.valuations.iter().all(|&v| v <= 2));
        let again = check_multiplicity(&[TruncSeries::one(&k, 16)], 1, 20, 2, 2, 7).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn vanishing_truncation_is_reported() {
        let k = NumberField::rationals();
        let zero = TruncSeries::zero(&k, 4);
        // with f = 0 only the constant monomial survives; M = 0 and a zero constant term is rare,
        // so use the zero series at X-degree 0 where R_0 = P(z) and the truncation has order 0
        let empty = TruncSeries::zero(&k, 0);
        assert!(matches!(check_multiplicity(&[empty], 1, 1, 0, 0, 1), Err(Error::TruncationTooSmall { .. })));
        assert!(check_multiplicity(&[zero], 1, 3, 1, 1, 1).is_ok());
    }
}
