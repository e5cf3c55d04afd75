use num_rational::BigRational;
use serde::Serialize;

use super::form::AuxiliaryForm;
use crate::error::{Error, Result};
use crate::exactnum::{FieldElement, NumberField};
use crate::linalg;
use crate::polyseries::{Poly, TruncSeries, Valuation};

/// Precision used for reported heights.
pub const HEIGHT_PREC: u32 = 64;

#[derive(Clone, Debug)]
pub struct AuxiliaryResult {
    pub form: AuxiliaryForm,
    pub valuation: Valuation,
    pub height: BigRational,
    pub kernel_dim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct AuxiliarySummary {
    pub valuation: String,
    pub height: String,
    pub kernel_dim: usize,
}

/// Default target `w (n + 1) - ⌈ε n⌉ - 1`.
pub fn default_vstar(w: usize, n: usize, eps: &BigRational) -> usize {
    let en = (eps * BigRational::from_integer(n.into())).ceil().to_integer();
    let en: usize = en.try_into().unwrap_or(0);
    (w * (n + 1)).saturating_sub(en + 1)
}

fn candidates(basis: &[Vec<FieldElement>]) -> Vec<Vec<FieldElement>> {
    let mut out: Vec<Vec<FieldElement>> = basis.to_vec();
    for a in 0..basis.len() {
        for b in a + 1..basis.len() {
            let sum: Vec<FieldElement> = basis[a].iter().zip(&basis[b]).map(|(x, y)| x.add(y)).collect();
            let diff: Vec<FieldElement> = basis[a].iter().zip(&basis[b]).map(|(x, y)| x.sub(y)).collect();
            out.push(sum);
            out.push(diff);
        }
    }
    out.retain(|v| v.iter().any(|x| !x.is_zero()));
    out
}

fn to_form(field: &NumberField, v: &[FieldElement], p: usize, n: usize) -> AuxiliaryForm {
    let coeffs = (0..p).map(|i| Poly::new(field, v[i * (n + 1)..(i + 1) * (n + 1)].to_vec())).collect();
    AuxiliaryForm::new(coeffs, n).cleared()
}

/// Nonzero form `Σ P_i Y_i` with `deg P_i <= n` and `val_z Σ P_i g_i >= v*`, chosen
/// with the smallest height among kernel basis vectors and their `±1` pairwise combinations.
pub fn build_auxiliary(g: &[TruncSeries], n: usize, vstar: usize) -> Result<AuxiliaryResult> {
    let p = g.len();
    if p == 0 {
        return Err(Error::Precondition("no series supplied".into()));
    }
    let unknowns = p * (n + 1);
    if unknowns <= vstar {
        return Err(Error::Precondition(format!("need p(n+1) = {unknowns} > v* = {vstar}")));
    }
    let order = g.iter().map(|s| s.order()).min().unwrap();
    if order < vstar + 1 {
        return Err(Error::Precondition(format!("series known to order {order}, need at least {}", vstar + 1)));
    }
    let field = g[0].field().clone();
    let rows: Vec<Vec<FieldElement>> = (0..vstar)
        .map(|k| {
            let mut row = vec![field.zero(); unknowns];
            for (i, s) in g.iter().enumerate() {
                for j in 0..=n.min(k) {
                    row[i * (n + 1) + j] = s.coeff(k - j).clone();
                }
            }
            row
        })
        .collect();
    let kernel = linalg::kernel_field(&field, rows, unknowns);
    if kernel.is_empty() {
        return Err(Error::NoSolution("kernel is trivial despite more unknowns than equations".into()));
    }
    let mut best: Option<(BigRational, AuxiliaryForm)> = None;
    for v in candidates(&kernel) {
        let form = to_form(&field, &v, p, n);
        let h = form.height(HEIGHT_PREC)?;
        if best.as_ref().is_none_or(|(bh, _)| h < *bh) {
            best = Some((h, form));
        }
    }
    let (height, form) = best.expect("kernel is nonempty");
    let valuation = form.valuation_on(g)?;
    if valuation.lower() < vstar {
        return Err(Error::NoSolution(format!("constructed form has valuation {valuation} below {vstar}")));
    }
    Ok(AuxiliaryResult { form, valuation, height, kernel_dim: kernel.len() })
}

impl AuxiliaryResult {
    pub fn summary(&self) -> AuxiliarySummary {
        AuxiliarySummary { valuation: self.valuation.to_string(), height: self.height.to_string(), kernel_dim: self.kernel_dim }
    }
}

/// Whether two forms agree up to a nonzero scalar in K.
pub fn proportional(a: &AuxiliaryForm, b: &AuxiliaryForm) -> bool {
    if a.dim() != b.dim() {
        return false;
    }
    let mut ratio: Option<FieldElement> = None;
    for (pa, pb) in a.coeffs.iter().zip(&b.coeffs) {
        let len = pa.coeffs().len().max(pb.coeffs().len());
        for k in 0..len {
            let (x, y) = (pa.coeff(k), pb.coeff(k));
            match (x.is_zero(), y.is_zero()) {
                (true, true) => continue,
                (true, false) | (false, true) => return false,
                _ => {}
            }
            let r = x.div(&y).unwrap();
            match &ratio {
                None => ratio = Some(r),
                Some(r0) if *r0 != r => return false,
                _ => {}
            }
        }
    }
    ratio.is_some_and(|r| !r.is_zero()) || (a.is_zero() && b.is_zero())
}
