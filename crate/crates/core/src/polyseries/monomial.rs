use std::collections::HashMap;

use num_bigint::BigUint;

use super::series::TruncSeries;
use crate::error::{Error, Result};

/// Number of monomials of total degree at most `d` in `m` variables.
pub fn basis_size(m: usize, d: usize) -> usize {
    let mut acc = BigUint::from(1u32);
    for i in 1..=m {
        acc = acc * BigUint::from(d + i) / BigUint::from(i);
    }
    usize::try_from(acc).expect("basis size overflows usize")
}

/// All exponent tuples of total degree at most `d` in graded-lex order:
/// degree ascending, and within a degree the tuple with larger leading
/// exponents first (`1, X1, X2, X1^2, X1 X2, X2^2` for two variables).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialBasis {
    m: usize,
    d: usize,
    exps: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

fn of_degree(m: usize, d: u32, out: &mut Vec<Vec<u32>>) {
    fn rec(prefix: &mut Vec<u32>, left: u32, slots: usize, out: &mut Vec<Vec<u32>>) {
        if slots == 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            rec(prefix, left - e, slots - 1, out);
            prefix.pop();
        }
    }
    rec(&mut Vec::with_capacity(m), d, m, out);
}

impl MonomialBasis {
    pub fn new(m: usize, d: usize) -> Self {
        assert!(m >= 1, "at least one variable");
        let mut exps = Vec::with_capacity(basis_size(m, d));
        for deg in 0..=d as u32 {
            of_degree(m, deg, &mut exps);
        }
        let index = exps.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        MonomialBasis { m, d, exps, index }
    }

    pub fn nvars(&self) -> usize {
        self.m
    }

    pub fn degree_bound(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    /// Exponent tuple at a 0-based position.
    pub fn exponent(&self, i: usize) -> &[u32] {
        &self.exps[i]
    }

    pub fn exponents(&self) -> &[Vec<u32>] {
        &self.exps
    }

    /// 0-based position of an exponent tuple.
    pub fn index_of(&self, mu: &[u32]) -> Option<usize> {
        self.index.get(mu).copied()
    }

    /// Number of monomials of degree at most `k`; they occupy the first positions.
    pub fn prefix_len(&self, k: usize) -> usize {
        basis_size(self.m, k.min(self.d))
    }
}

fn check_orders(f: &[TruncSeries]) -> Result<usize> {
    let order = f.first().map(|s| s.order()).ok_or_else(|| Error::Precondition("no series supplied".into()))?;
    if f.iter().any(|s| s.order() != order) {
        return Err(Error::Precondition("series must share a truncation order".into()));
    }
    Ok(order)
}

/// `f^μ`, truncated to the common order of the `f_i`.
pub fn monomial_eval(basis: &MonomialBasis, f: &[TruncSeries], mu: &[u32]) -> Result<TruncSeries> {
    if mu.len() != basis.nvars() || f.len() != basis.nvars() {
        return Err(Error::DimensionMismatch { expected: basis.nvars(), found: mu.len().min(f.len()) });
    }
    if mu.iter().map(|&e| e as usize).sum::<usize>() > basis.degree_bound() {
        return Err(Error::Precondition(format!("exponent {mu:?} exceeds the basis degree bound")));
    }
    let order = check_orders(f)?;
    let mut acc = TruncSeries::one(f[0].field(), order);
    for (fi, &e) in f.iter().zip(mu) {
        for _ in 0..e {
            acc = acc.mul(fi);
        }
    }
    Ok(acc)
}

/// `f^μ` for every monomial of the basis, each built from an earlier one by a single product.
pub fn all_monomials(basis: &MonomialBasis, f: &[TruncSeries]) -> Result<Vec<TruncSeries>> {
    if f.len() != basis.nvars() {
        return Err(Error::DimensionMismatch { expected: basis.nvars(), found: f.len() });
    }
    let order = check_orders(f)?;
    let mut out: Vec<TruncSeries> = Vec::with_capacity(basis.len());
    for mu in basis.exponents() {
        let Some(i) = mu.iter().position(|&e| e > 0) else {
            out.push(TruncSeries::one(f[0].field(), order));
            continue;
        };
        let mut prev = mu.clone();
        prev[i] -= 1;
        let p = basis.index_of(&prev).expect("predecessor precedes in graded order");
        let s = out[p].mul(&f[i]);
        out.push(s);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{ratio, NumberField};
    use proptest::prelude::*;

    fn brute_count(m: usize, d: usize) -> usize {
        // enumerate (d+1)^m tuples and keep those with small total degree
        let mut count = 0;
        let total = (d + 1).pow(m as u32);
        for mut code in 0..total {
            let mut s = 0;
            for _ in 0..m {
                s += code % (d + 1);
                code /= d + 1;
            }
            if s <= d {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn sizes() {
        assert_eq!(basis_size(2, 2), 6);
        assert_eq!(basis_size(1, 5), 6);
        assert_eq!(basis_size(3, 4), brute_count(3, 4));
        assert_eq!(basis_size(3, 4), 35);
    }

    #[test]
    fn graded_lex_order() {
        let b = MonomialBasis::new(2, 2);
        let e: Vec<Vec<u32>> = b.exponents().to_vec();
        assert_eq!(e, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn exp_squared() {
        let k = NumberField::rationals();
        let mut fact = 1i64;
        let exp: Vec<_> = (0..10)
            .map(|n| {
                if n > 0 {
                    fact *= n;
                }
                k.from_rational(ratio(1, fact))
            })
            .collect();
        let f = vec![TruncSeries::new(&k, exp)];
        let b = MonomialBasis::new(1, 2);
        let s = monomial_eval(&b, &f, &[2]).unwrap();
        let mut fact = 1i64;
        for n in 0..10 {
            if n > 0 {
                fact *= n;
            }
            assert_eq!(*s.coeff(n as usize), k.from_rational(ratio(1 << n, fact)));
        }
        assert!(monomial_eval(&b, &f, &[3]).is_err());
        assert_eq!(monomial_eval(&b, &f, &[0]).unwrap(), TruncSeries::one(&k, 10));
    }

    proptest! {
        #[test]
        fn index_round_trip(m in 1usize..4, d in 0usize..6) {
            let b = MonomialBasis::new(m, d);
            prop_assert_eq!(b.len(), basis_size(m, d));
            for (i, mu) in b.exponents().iter().enumerate() {
                prop_assert_eq!(b.index_of(mu), Some(i));
            }
        }

        #[test]
        fn monomials_multiply(a in prop::collection::vec(-3i64..3, 6), c in prop::collection::vec(-3i64..3, 6),
                              mu in prop::collection::vec(0u32..2, 2), nu in prop::collection::vec(0u32..2, 2)) {
            let k = NumberField::rationals();
            let f = vec![
                TruncSeries::new(&k, a.iter().map(|&x| k.from_int(x)).collect()),
                TruncSeries::new(&k, c.iter().map(|&x| k.from_int(x)).collect()),
            ];
            let b = MonomialBasis::new(2, 4);
            let sum: Vec<u32> = mu.iter().zip(&nu).map(|(x, y)| x + y).collect();
            let lhs = monomial_eval(&b, &f, &sum).unwrap();
            let rhs = monomial_eval(&b, &f, &mu).unwrap().mul(&monomial_eval(&b, &f, &nu).unwrap());
            prop_assert_eq!(lhs, rhs);
            let all = all_monomials(&b, &f).unwrap();
            prop_assert_eq!(&all[b.index_of(&sum).unwrap()], &monomial_eval(&b, &f, &sum).unwrap());
        }
    }
}
