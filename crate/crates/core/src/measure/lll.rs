use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

fn round(x: &BigRational) -> BigInt {
    let two = BigInt::from(2);
    (x.numer() * &two + x.denom()).div_floor(&(x.denom() * &two))
}

/// Gram–Schmidt coefficients `μ` and squared norms `|b*_i|^2`.
fn gram_schmidt(b: &[Vec<BigInt>]) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    let n = b.len();
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    let mut bstar: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    let mut norms = Vec::with_capacity(n);
    for i in 0..n {
        let mut v: Vec<BigRational> = b[i].iter().map(|x| BigRational::from_integer(x.clone())).collect();
        for j in 0..i {
            if norms[j] == BigRational::zero() {
                continue;
            }
            let bi: BigRational = b[i].iter().zip(&bstar[j]).map(|(x, y)| y * BigRational::from_integer(x.clone())).sum();
            mu[i][j] = bi / &norms[j];
            for (vk, sk) in v.iter_mut().zip(&bstar[j]) {
                *vk -= &mu[i][j] * sk;
            }
        }
        norms.push(v.iter().map(|x| x * x).sum());
        bstar.push(v);
    }
    (mu, norms)
}

/// LLL reduction with `δ = 3/4`, exact rational Gram–Schmidt. Rows are basis vectors.
pub fn lll_reduce(mut b: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let n = b.len();
    if n < 2 {
        return b;
    }
    let delta = BigRational::new(3.into(), 4.into());
    let (mut mu, mut norms) = gram_schmidt(&b);
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let r = round(&mu[k][j]);
            if r.is_zero() {
                continue;
            }
            let (head, tail) = b.split_at_mut(k);
            for (x, y) in tail[0].iter_mut().zip(&head[j]) {
                *x -= &r * y;
            }
            let rr = BigRational::from_integer(r);
            for i in 0..j {
                let v = &mu[j][i] * &rr;
                mu[k][i] -= v;
            }
            mu[k][j] -= &rr;
        }
        let lhs = norms[k].clone();
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &norms[k - 1];
        if lhs >= rhs {
            k += 1;
        } else {
            b.swap(k, k - 1);
            (mu, norms) = gram_schmidt(&b);
            k = (k - 1).max(1);
        }
    }
    b
}

/// Candidate integer relations for real vectors `x` (and optionally `y`) given as integers
/// at a common scale: short vectors of the lattice spanned by `(e_i, x_i, y_i)`.
pub fn integer_relations(x: &[BigInt], y: Option<&[BigInt]>) -> Vec<Vec<BigInt>> {
    let p = x.len();
    let rows: Vec<Vec<BigInt>> = (0..p)
        .map(|i| {
            let mut r: Vec<BigInt> = (0..p).map(|j| BigInt::from(i64::from(i == j))).collect();
            r.push(x[i].clone());
            if let Some(y) = y {
                r.push(y[i].clone());
            }
            r
        })
        .collect();
    lll_reduce(rows).into_iter().map(|r| r[..p].to_vec()).filter(|c| c.iter().any(|v| !v.is_zero())).collect()
}

/// Whether `b` is size-reduced and satisfies the Lovász condition.
pub fn is_lll_reduced(b: &[Vec<BigInt>]) -> bool {
    let (mu, norms) = gram_schmidt(b);
    let half = BigRational::new(1.into(), 2.into());
    let delta = BigRational::new(3.into(), 4.into());
    for i in 0..b.len() {
        for j in 0..i {
            if mu[i][j].abs() > half {
                return false;
            }
        }
        if i > 0 && norms[i] < (&delta - &mu[i][i - 1] * &mu[i][i - 1]) * &norms[i - 1] {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> Vec<BigInt> {
        x.iter().map(|&a| BigInt::from(a)).collect()
    }

    #[test]
    fn classic_example() {
        let b = vec![v(&[1, 1, 1]), v(&[-1, 0, 2]), v(&[3, 5, 6])];
        let r = lll_reduce(b);
        assert!(is_lll_reduced(&r));
        assert_eq!(r[0], v(&[0, 1, 0]));
    }

    #[test]
    fn finds_relation_of_one_third() {
        // 1 and 1/3 at scale 2^40: relation 1 - 3 * (1/3) = 0
        let s = BigInt::from(1u64 << 40);
        let x = vec![s.clone(), &s / 3];
        let rels = integer_relations(&x, None);
        assert!(rels.iter().any(|c| c == &v(&[1, -3]) || c == &v(&[-1, 3])));
    }
}
