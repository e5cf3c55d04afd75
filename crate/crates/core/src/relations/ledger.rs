use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::groebner::{buchberger, reduce};
use super::kernel::{relation_kernel, RelationBasis};
use crate::error::{Error, Result};
use crate::exactnum::{FieldElement, NumberField};
use crate::linalg;
use crate::polyseries::{MonomialBasis, MonomialOrder, MultiPoly, Poly, TruncSeries};

/// Linear forms `ψ(X^ν Q)` in the coordinates of a monomial basis, with their rank.
#[derive(Clone, Debug)]
pub struct LinearForms {
    pub forms: Vec<Vec<FieldElement>>,
    pub rank: usize,
}

/// Coordinates of `p` in the monomial basis; `None` when `p` has a monomial outside it.
pub fn psi(p: &MultiPoly<FieldElement>, basis: &MonomialBasis, field: &NumberField) -> Option<Vec<FieldElement>> {
    let mut v = vec![field.zero(); basis.len()];
    for (e, c) in p.terms() {
        v[basis.index_of(e)?] = c.clone();
    }
    Some(v)
}

/// Every multiple `X^ν Q` of `polys` lying in the basis degree range, as coordinate vectors.
fn multiples(polys: &[MultiPoly<FieldElement>], basis: &MonomialBasis, field: &NumberField) -> Vec<Vec<FieldElement>> {
    let one = field.one();
    let d = basis.degree_bound();
    let mut out = Vec::new();
    for q in polys {
        let dq = q.total_degree();
        if dq > d {
            continue;
        }
        for i in 0..basis.prefix_len(d - dq) {
            let v = psi(&q.mul_term(basis.exponent(i), &one), basis, field).expect("degree checked");
            out.push(v);
        }
    }
    out
}

/// Forms from a graded Gröbner basis; the rank is the dimension of the ideal in degree `<= D`.
pub fn linear_forms_from_relations(gb: &[MultiPoly<FieldElement>], basis: &MonomialBasis, field: &NumberField) -> Result<LinearForms> {
    let top = gb.iter().map(|g| g.total_degree()).max().unwrap_or(0);
    if top > basis.degree_bound() {
        return Err(Error::DegreeBoundTooSmall { needed: top, bound: basis.degree_bound() });
    }
    let forms = multiples(gb, basis, field);
    let rank = linalg::rank_field(field, forms.clone(), basis.len());
    Ok(LinearForms { forms, rank })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionLedger {
    pub m: usize,
    pub t: usize,
    pub delta: usize,
    pub d: usize,
    pub h: usize,
    pub p: usize,
    pub q: usize,
    pub r: usize,
    pub s: usize,
    pub u: usize,
    pub v: usize,
    pub w: usize,
    /// `v · h < w`.
    pub vh_below_w: bool,
    /// `u / (δ^t d^t)`.
    pub u_ratio: String,
    pub relations_certified: bool,
}

impl DimensionLedger {
    /// `p = q + w`, `u = s - r`, `v = p - s`.
    pub fn identities_hold(&self) -> bool {
        self.p == self.q + self.w && self.u + self.r == self.s && self.v + self.s == self.p && self.r <= self.s
    }
}

#[derive(Clone, Debug)]
pub struct LedgerParams {
    pub delta: usize,
    pub d: usize,
    pub h: usize,
    pub t: usize,
    /// z-degree bound for the functional relations.
    pub z_degree: usize,
    pub order: usize,
    pub margin: usize,
}

/// Rank over `K(z)` of the functional relations, viewed as vectors in `K[z]^p`.
pub fn functional_rank(rel: &RelationBasis, basis: &MonomialBasis) -> usize {
    let zero = Poly::zero(&rel.field);
    let rows: Vec<Vec<Poly>> = rel
        .generators
        .iter()
        .map(|g| {
            let mut row = vec![zero.clone(); basis.len()];
            for (e, c) in g.terms() {
                row[basis.index_of(e).expect("relation within basis")] = c.clone();
            }
            row
        })
        .collect();
    if rows.is_empty() {
        return 0;
    }
    linalg::bareiss_poly(rows, basis.len(), &rel.field).0
}

/// Dimension ledger at degree `δ d`. `value_relations` generate the relations among the
/// values; `P` must not lie in the ideal they generate.
pub fn ledger(f: &[TruncSeries], p_poly: &MultiPoly<BigInt>, value_relations: &[MultiPoly<FieldElement>], params: &LedgerParams) -> Result<DimensionLedger> {
    if f.is_empty() {
        return Err(Error::Precondition("no functions supplied".into()));
    }
    if p_poly.is_zero() {
        return Err(Error::Precondition("P must be nonzero".into()));
    }
    let m = f.len();
    if p_poly.nvars() != m {
        return Err(Error::DimensionMismatch { expected: m, found: p_poly.nvars() });
    }
    let field = f[0].field().clone();
    let top = params.delta * params.d;
    let basis = MonomialBasis::new(m, top);
    let p = basis.len();

    let rel = relation_kernel(f, top, params.z_degree, params.order, params.margin)?;
    let q = functional_rank(&rel, &basis);

    let ord = MonomialOrder::GrLex;
    let gb = buchberger(value_relations, ord);
    let pk = p_poly.map(|c| field.from_bigint(c.clone()));
    if reduce(&pk, &gb, ord).is_zero() {
        return Err(Error::PInIdeal);
    }
    if pk.total_degree() > top {
        return Err(Error::DegreeBoundTooSmall { needed: pk.total_degree(), bound: top });
    }
    let value_forms = linear_forms_from_relations(&gb, &basis, &field)?;
    let r = value_forms.rank;
    let mut all = value_forms.forms;
    all.extend(multiples(std::slice::from_ref(&pk), &basis, &field));
    let s = linalg::rank_field(&field, all, p);

    let w = p - q;
    let (u, v) = (s - r, p - s);
    let scale = BigInt::from(params.delta).pow(params.t as u32) * BigInt::from(params.d).pow(params.t as u32);
    let ledger = DimensionLedger {
        m,
        t: params.t,
        delta: params.delta,
        d: params.d,
        h: params.h,
        p,
        q,
        r,
        s,
        u,
        v,
        w,
        vh_below_w: v * params.h < w,
        u_ratio: BigRational::new(BigInt::from(u), scale).to_string(),
        relations_certified: rel.certified,
    };
    debug_assert!(ledger.identities_hold());
    Ok(ledger)
}
