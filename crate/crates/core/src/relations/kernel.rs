use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactnum::{FieldElement, NumberField};
use crate::linalg;
use crate::polyseries::{all_monomials, MonomialBasis, MonomialOrder, MultiPoly, Poly, TruncSeries};

/// Default certification margin: a relation basis is flagged certified when the
/// truncation order is at least `margin · max(M, 1) · D^m`.
pub const DEFAULT_MARGIN: usize = 4;

/// Polynomial relations `Q(z, X)` with `deg_z Q <= M`, `deg_X Q <= D` that vanish at
/// `X = f(z)` modulo `z^order`.
#[derive(Clone, Debug)]
pub struct RelationBasis {
    pub field: NumberField,
    pub nvars: usize,
    pub generators: Vec<MultiPoly<Poly>>,
    pub z_degree: usize,
    pub x_degree: usize,
    pub order: usize,
    pub certified: bool,
}

/// Truncation order at which [`relation_kernel`] flags its result as certified.
pub fn certification_order(m: usize, d: usize, z_degree: usize, margin: usize) -> usize {
    margin * z_degree.max(1) * d.pow(m as u32)
}

/// Scale so the grlex-leading coefficient is 1, then clear coordinate denominators.
pub fn normalize(p: &MultiPoly<FieldElement>) -> MultiPoly<FieldElement> {
    let Some((_, lead)) = p.leading(MonomialOrder::GrLex) else {
        return p.clone();
    };
    let inv = lead.inv().expect("leading coefficient is nonzero");
    let monic = p.map(|c| c.mul(&inv));
    let den = monic.fold(BigInt::one(), |acc, _, c| acc.lcm(&c.denominator()));
    monic.map(|c| c.scale_int(&den))
}

fn normalize_z(p: &MultiPoly<Poly>) -> MultiPoly<Poly> {
    let Some((_, lead)) = p.leading(MonomialOrder::GrLex) else {
        return p.clone();
    };
    let top = lead.leading().expect("nonzero coefficient");
    let inv = top.inv().expect("nonzero");
    let monic = p.map(|c| c.scale(&inv));
    let den = monic.fold(BigInt::one(), |acc, _, c| acc.lcm(&c.denominator()));
    let den = BigRational::from_integer(den);
    monic.map(|c| c.scale_rational(&den))
}

/// Kernel of a tall matrix: solve on a short prefix of rows, then cut that kernel down by
/// the remaining rows.
fn staged_kernel(field: &NumberField, mut rows: Vec<Vec<FieldElement>>, ncols: usize) -> Vec<Vec<FieldElement>> {
    let head = (ncols + 8).min(rows.len());
    let tail = rows.split_off(head);
    let k0 = linalg::kernel_field(field, rows, ncols);
    if k0.is_empty() || tail.is_empty() {
        return k0;
    }
    let dot = |row: &[FieldElement], v: &[FieldElement]| {
        row.iter().zip(v).filter(|(a, b)| !a.is_zero() && !b.is_zero()).fold(field.zero(), |acc, (a, b)| acc.add(&a.mul(b)))
    };
    let restricted: Vec<Vec<FieldElement>> = tail
        .par_iter()
        .map(|row| k0.iter().map(|v| dot(row, v)).collect::<Vec<_>>())
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    if restricted.is_empty() {
        return k0;
    }
    linalg::kernel_field(field, restricted, k0.len())
        .into_iter()
        .map(|c| {
            (0..ncols).map(|j| k0.iter().zip(&c).fold(field.zero(), |acc, (v, x)| acc.add(&v[j].mul(x)))).collect()
        })
        .collect()
}

/// Exact kernel of the coefficient-evaluation map `Q ↦ Q(z, f(z)) mod z^order`.
pub fn relation_kernel(f: &[TruncSeries], d: usize, z_degree: usize, order: usize, margin: usize) -> Result<RelationBasis> {
    if f.is_empty() {
        return Err(Error::Precondition("no functions supplied".into()));
    }
    let m = f.len();
    let field = f[0].field().clone();
    let basis = MonomialBasis::new(m, d);
    let width = z_degree + 1;
    let unknowns = basis.len() * width;
    let available = f.iter().map(|s| s.order()).min().unwrap();
    if order <= unknowns || available < order {
        return Err(Error::TruncationTooSmall {
            order: order.min(available),
            reason: format!("need more than {unknowns} known coefficients (series known to {available})"),
        });
    }
    let g: Vec<TruncSeries> = f.iter().map(|s| s.truncate(order)).collect();
    let mono = all_monomials(&basis, &g)?;
    let rows: Vec<Vec<FieldElement>> = (0..order)
        .into_par_iter()
        .map(|k| {
            let mut row = vec![field.zero(); unknowns];
            for (i, s) in mono.iter().enumerate() {
                for j in 0..width.min(k + 1) {
                    row[i * width + j] = s.coeff(k - j).clone();
                }
            }
            row
        })
        .collect();
    let kernel = staged_kernel(&field, rows, unknowns);
    let generators = kernel
        .iter()
        .map(|v| {
            let terms = (0..basis.len()).map(|i| {
                (basis.exponent(i).to_vec(), Poly::new(&field, v[i * width..(i + 1) * width].to_vec()))
            });
            normalize_z(&MultiPoly::from_terms(m, terms))
        })
        .collect();
    Ok(RelationBasis {
        field,
        nvars: m,
        generators,
        z_degree,
        x_degree: d,
        order,
        certified: order >= certification_order(m, d, z_degree, margin),
    })
}

impl RelationBasis {
    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    /// `Q(z, f(z))` for each generator, on the truncation of `f`.
    pub fn residuals(&self, f: &[TruncSeries]) -> Result<Vec<TruncSeries>> {
        let basis = MonomialBasis::new(self.nvars, self.x_degree);
        let mono = all_monomials(&basis, f)?;
        let order = mono[0].order();
        Ok(self
            .generators
            .iter()
            .map(|q| {
                q.fold(TruncSeries::zero(&self.field, order), |acc, e, c| {
                    acc.add(&mono[basis.index_of(e).unwrap()].mul_poly(c))
                })
            })
            .collect())
    }
}

/// `Q(α, X)` for each relation, dropping those that vanish identically, normalized.
pub fn specialize(rel: &RelationBasis, alpha: &FieldElement) -> Vec<MultiPoly<FieldElement>> {
    rel.generators
        .iter()
        .map(|q| q.map(|c| c.eval(alpha)))
        .filter(|q| !q.is_zero())
        .map(|q| normalize(&q))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::ratio;

    fn k() -> NumberField {
        NumberField::rationals()
    }

    fn zp(c: &[i64]) -> Poly {
        Poly::from_ints(&k(), c)
    }

    #[test]
    fn specialization_examples() {
        let rel = RelationBasis {
            field: k(),
            nvars: 2,
            generators: vec![
                MultiPoly::from_terms(2, vec![(vec![1, 0], zp(&[-1, 1]))]),
                MultiPoly::from_terms(2, vec![(vec![1, 0], zp(&[0, 1])), (vec![0, 1], zp(&[-1]))]),
            ],
            z_degree: 1,
            x_degree: 1,
            order: 10,
            certified: false,
        };
        let s = specialize(&rel, &k().from_int(1));
        assert_eq!(s.len(), 1);
        let s = specialize(&rel, &k().from_rational(ratio(1, 2)));
        assert_eq!(s.len(), 2);
        let expect = MultiPoly::from_terms(2, vec![(vec![1, 0], k().from_int(1)), (vec![0, 1], k().from_int(-2))]);
        assert_eq!(s[1], expect);
    }

    #[test]
    fn certification_threshold() {
        assert_eq!(certification_order(2, 2, 0, 4), 16);
        assert_eq!(certification_order(1, 3, 2, 4), 24);
    }
}
