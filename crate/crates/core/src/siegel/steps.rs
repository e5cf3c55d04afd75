use serde::Serialize;

use super::form::AuxiliaryForm;
use crate::error::{Error, Result};
use crate::polyseries::{Poly, TruncSeries};
use crate::systems::{Kind, LinearSystemSpec};

fn check(form: &AuxiliaryForm, system: &LinearSystemSpec) -> Result<()> {
    if form.dim() != system.size() {
        return Err(Error::DimensionMismatch { expected: system.size(), found: form.dim() });
    }
    Ok(())
}

fn contract(nt: &[Vec<Poly>], p: &[Poly]) -> Vec<Poly> {
    let k = p[0].field().clone();
    nt.iter()
        .map(|row| row.iter().zip(p).fold(Poly::zero(&k), |acc, (a, b)| acc.add(&a.mul(b))))
        .collect()
}

/// `Θ(L)`: coefficients `B = T P' + Nᵀ P`, so that `Θ(L)(z, g) = T · d/dz L(z, g)`.
pub fn theta_step(form: &AuxiliaryForm, system: &LinearSystemSpec) -> Result<AuxiliaryForm> {
    check(form, system)?;
    if system.kind != Kind::Differential {
        return Err(Error::KindMismatch("Θ applies to differential systems".into()));
    }
    let t = system.denominator();
    let np = contract(&system.numerator_transpose(), &form.coeffs);
    let coeffs: Vec<Poly> = form.coeffs.iter().zip(np).map(|(p, c)| t.mul(&p.derivative()).add(&c)).collect();
    let degree_bound = coeffs.iter().map(|p| p.deg0()).max().unwrap_or(0).max(form.degree_bound);
    Ok(AuxiliaryForm { coeffs, degree_bound, generation: form.generation + 1 })
}

/// Result of a Mahler step, with the power `d` of `T` used for clearing.
#[derive(Clone, Debug)]
pub struct MahlerStep {
    pub form: AuxiliaryForm,
    pub clearing_power: u32,
}

/// `C = Nᵀ P(z^q)`; when `T` divides every `C_j` (keeping integral coordinates) the new
/// coefficients are `C / T` and `d = 0`, otherwise `C` with `d = 1`. In both cases
/// `R'(z, g(z)) = T(z)^d R(z^q, g(z^q))`.
pub fn mahler_step(form: &AuxiliaryForm, system: &LinearSystemSpec) -> Result<MahlerStep> {
    check(form, system)?;
    let Kind::Mahler { q } = system.kind else {
        return Err(Error::KindMismatch("Mahler steps apply to Mahler systems".into()));
    };
    let lifted: Vec<Poly> = form.coeffs.iter().map(|p| p.substitute_power(q)).collect();
    let c = contract(&system.numerator_transpose(), &lifted);
    let t = system.denominator();
    let divided: Option<Vec<Poly>> = c.iter().map(|cj| cj.exact_div(t)).collect();
    let integral_in = c.iter().all(|p| p.denominator() == 1.into());
    let (coeffs, d) = match divided {
        Some(b) if !integral_in || b.iter().all(|p| p.denominator() == 1.into()) => (b, 0),
        _ => (c, 1),
    };
    let degree_bound = coeffs.iter().map(|p| p.deg0()).max().unwrap_or(0);
    Ok(MahlerStep { form: AuxiliaryForm { coeffs, degree_bound, generation: form.generation + 1 }, clearing_power: d })
}

/// Left minus right side of the Θ identity, `Θ(L)(z,g) - T (L(z,g))'`.
pub fn theta_defect(form: &AuxiliaryForm, system: &LinearSystemSpec, g: &[TruncSeries]) -> Result<TruncSeries> {
    let next = theta_step(form, system)?;
    let lhs = next.evaluate(g)?;
    let rhs = form.evaluate(g)?.derivative().mul_poly(system.denominator());
    let n = lhs.order().min(rhs.order());
    Ok(lhs.truncate(n).sub(&rhs.truncate(n)))
}

/// `R_{k+1}(z,g(z)) - T^d R_k(z^q, g(z^q))` on the common truncation.
pub fn mahler_defect(form: &AuxiliaryForm, system: &LinearSystemSpec, g: &[TruncSeries]) -> Result<TruncSeries> {
    let q = system.kind.q().ok_or_else(|| Error::KindMismatch("Mahler system expected".into()))?;
    let step = mahler_step(form, system)?;
    let lhs = step.form.evaluate(g)?;
    let mut rhs = form.evaluate(g)?.substitute_power(q);
    for _ in 0..step.clearing_power {
        rhs = rhs.mul_poly(system.denominator());
    }
    let n = lhs.order().min(rhs.order());
    Ok(lhs.truncate(n).sub(&rhs.truncate(n)))
}

/// One row of an iteration trace.
#[derive(Clone, Debug, Serialize)]
pub struct IterationRecord {
    pub generation: usize,
    pub valuation: String,
    pub degree: usize,
    pub height: String,
    pub clearing_power: u32,
}

/// Apply `k` Θ or Mahler steps, recording valuation on `g`, degree and height after each.
pub fn iterate(form: &AuxiliaryForm, system: &LinearSystemSpec, g: &[TruncSeries], k: usize, prec: u32) -> Result<(Vec<AuxiliaryForm>, Vec<IterationRecord>)> {
    let mut forms = vec![form.clone()];
    let mut trace = vec![IterationRecord {
        generation: form.generation,
        valuation: form.valuation_on(g)?.to_string(),
        degree: form.max_degree(),
        height: form.height(prec)?.to_string(),
        clearing_power: 0,
    }];
    let mut cur = form.clone();
    for _ in 0..k {
        let (next, d) = match system.kind {
            Kind::Differential => (theta_step(&cur, system)?, 0),
            Kind::Mahler { .. } => {
                let s = mahler_step(&cur, system)?;
                (s.form, s.clearing_power)
            }
        };
        trace.push(IterationRecord {
            generation: next.generation,
            valuation: next.valuation_on(g)?.to_string(),
            degree: next.max_degree(),
            height: next.height(prec)?.to_string(),
            clearing_power: d,
        });
        forms.push(next.clone());
        cur = next;
    }
    Ok((forms, trace))
}
