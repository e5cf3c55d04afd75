//! Exact kernels, ranks and determinants over Q, K and K[z].

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exactnum::{FieldElement, NumberField};
use crate::polyseries::Poly;

/// Scale a rational row to a primitive integer row.
fn integer_row(row: &[BigRational]) -> Vec<BigInt> {
    let den = row.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    row.iter().map(|c| (c * BigRational::from(den.clone())).to_integer()).collect()
}

/// Fraction-free (Bareiss) echelon form of an integer matrix.
/// Returns the nonzero rows and their pivot columns.
pub fn bareiss_echelon(rows: Vec<Vec<BigInt>>, ncols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut m = rows;
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            if m[i][c].is_zero() {
                // still needs the fraction-free scaling of the remaining columns
                for j in c + 1..ncols {
                    let v = &m[r][c] * &m[i][j];
                    m[i][j] = v / &prev;
                }
                continue;
            }
            for j in c + 1..ncols {
                let v = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                m[i][j] = v / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

/// Kernel of an echelon system given as rational rows with pivot columns.
fn kernel_from_echelon(rows: &[Vec<BigRational>], pivots: &[usize], ncols: usize) -> Vec<Vec<BigRational>> {
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut out = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![BigRational::zero(); ncols];
        v[f] = BigRational::one();
        for (i, &pc) in pivots.iter().enumerate().rev() {
            let mut s = BigRational::zero();
            for j in pc + 1..ncols {
                if !rows[i][j].is_zero() && !v[j].is_zero() {
                    s += &rows[i][j] * &v[j];
                }
            }
            v[pc] = -s / &rows[i][pc];
        }
        out.push(v);
    }
    out
}

/// Basis of `{x : M x = 0}` over Q, via fraction-free elimination.
pub fn kernel_rational(rows: &[Vec<BigRational>], ncols: usize) -> Vec<Vec<BigRational>> {
    let ints: Vec<Vec<BigInt>> = rows.iter().map(|r| integer_row(r)).filter(|r| r.iter().any(|x| !x.is_zero())).collect();
    let (ech, piv) = bareiss_echelon(ints, ncols);
    let rat: Vec<Vec<BigRational>> = ech.into_iter().map(|r| r.into_iter().map(BigRational::from).collect()).collect();
    kernel_from_echelon(&rat, &piv, ncols)
}

pub fn rank_rational(rows: &[Vec<BigRational>], ncols: usize) -> usize {
    let ints: Vec<Vec<BigInt>> = rows.iter().map(|r| integer_row(r)).filter(|r| r.iter().any(|x| !x.is_zero())).collect();
    bareiss_echelon(ints, ncols).1.len()
}

/// Reduced row echelon form over K; returns rows and pivot columns.
pub fn rref_field(rows: Vec<Vec<FieldElement>>, ncols: usize) -> (Vec<Vec<FieldElement>>, Vec<usize>) {
    let mut m = rows;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for j in c..ncols {
            m[r][j] = m[r][j].mul(&inv);
        }
        for i in 0..m.len() {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..ncols {
                let v = m[i][j].sub(&f.mul(&m[r][j]));
                m[i][j] = v;
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

/// Basis of the kernel over K. Over Q this uses fraction-free elimination.
pub fn kernel_field(field: &NumberField, rows: Vec<Vec<FieldElement>>, ncols: usize) -> Vec<Vec<FieldElement>> {
    if field.is_rational() {
        let rat: Vec<Vec<BigRational>> = rows.iter().map(|r| r.iter().map(|x| x.coords()[0].clone()).collect()).collect();
        return kernel_rational(&rat, ncols)
            .into_iter()
            .map(|v| v.into_iter().map(|x| field.from_rational(x)).collect())
            .collect();
    }
    let (ech, piv) = rref_field(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![field.zero(); ncols];
            v[f] = field.one();
            for (i, &pc) in piv.iter().enumerate() {
                v[pc] = ech[i][f].neg();
            }
            v
        })
        .collect()
}

pub fn rank_field(field: &NumberField, rows: Vec<Vec<FieldElement>>, ncols: usize) -> usize {
    if field.is_rational() {
        let rat: Vec<Vec<BigRational>> = rows.iter().map(|r| r.iter().map(|x| x.coords()[0].clone()).collect()).collect();
        return rank_rational(&rat, ncols);
    }
    rref_field(rows, ncols).1.len()
}

/// Fraction-free elimination over K[z]: returns the rank and, for square
/// input, the determinant (zero when singular).
pub fn bareiss_poly(rows: Vec<Vec<Poly>>, ncols: usize, field: &NumberField) -> (usize, Poly) {
    let n = rows.len();
    let mut m = rows;
    let mut prev = Poly::one(field);
    let mut r = 0;
    let mut sign_flip = false;
    for c in 0..ncols {
        let Some(p) = (r..n).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            m.swap(r, p);
            sign_flip = !sign_flip;
        }
        for i in r + 1..n {
            for j in c + 1..ncols {
                let v = m[r][c].mul(&m[i][j]).sub(&m[i][c].mul(&m[r][j]));
                m[i][j] = v.exact_div(&prev).expect("Bareiss division is exact");
            }
            m[i][c] = Poly::zero(field);
        }
        prev = m[r][c].clone();
        r += 1;
        if r == n {
            break;
        }
    }
    let det = if r == n && n == ncols {
        if sign_flip {
            prev.neg()
        } else {
            prev
        }
    } else {
        Poly::zero(field)
    };
    (r, det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, ratio};
    use proptest::prelude::*;

    fn mat(v: &[&[i64]]) -> Vec<Vec<BigRational>> {
        v.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
    }

    fn apply(m: &[Vec<BigRational>], x: &[BigRational]) -> Vec<BigRational> {
        m.iter().map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    #[test]
    fn small_kernel() {
        let m = mat(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = kernel_rational(&m, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(apply(&m, v).iter().all(|x| x.is_zero()));
        }
        assert_eq!(rank_rational(&m, 3), 1);
    }

    #[test]
    fn field_kernel_agrees_with_rational() {
        let k = NumberField::new(vec![rat(-2), rat(0), rat(1)]).unwrap();
        let t = k.generator();
        // rows (1, θ) and (θ, 2) are dependent since θ^2 = 2
        let rows = vec![vec![k.one(), t.clone()], vec![t.clone(), k.from_int(2)]];
        let ker = kernel_field(&k, rows, 2);
        assert_eq!(ker.len(), 1);
        assert_eq!(ker[0][0].add(&t.mul(&ker[0][1])), k.zero());
    }

    #[test]
    fn polynomial_determinant() {
        let k = NumberField::rationals();
        let p = |c: &[i64]| Poly::from_ints(&k, c);
        let m = vec![vec![p(&[1]), p(&[0])], vec![p(&[0, -1]), p(&[1])]];
        let (r, d) = bareiss_poly(m, 2, &k);
        assert_eq!(r, 2);
        assert_eq!(d, p(&[1]));
        let m = vec![vec![p(&[0, 1]), p(&[1])], vec![p(&[1]), p(&[0, 1])]];
        assert_eq!(bareiss_poly(m, 2, &k).1, p(&[-1, 0, 1]));
        let m = vec![vec![p(&[0, 1]), p(&[0, 0, 1])], vec![p(&[1]), p(&[0, 1])]];
        assert_eq!(bareiss_poly(m, 2, &k).0, 1);
    }

    proptest! {
        #[test]
        fn kernel_vectors_annihilate(entries in prop::collection::vec(-6i64..6, 12), dens in prop::collection::vec(1i64..5, 12)) {
            let m: Vec<Vec<BigRational>> = (0..3).map(|i| (0..4).map(|j| ratio(entries[4 * i + j], dens[4 * i + j])).collect()).collect();
            let ker = kernel_rational(&m, 4);
            prop_assert_eq!(ker.len() + rank_rational(&m, 4), 4);
            for v in &ker {
                prop_assert!(apply(&m, v).iter().all(|x| x.is_zero()));
            }
        }
    }
}
