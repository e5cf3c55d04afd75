use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use super::spec::{FunctionSpec, Kind};
use crate::error::{Error, Result};
use crate::exactnum::NumberField;
use crate::linalg;
use crate::polyseries::{MonomialBasis, MultiPoly, Poly, TruncSeries};

/// A rational function `num / den` over K.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFunc {
    pub num: Poly,
    pub den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            let one = Poly::one(den.field());
            return RatFunc { num, den: one };
        }
        let g = num.gcd(&den);
        let num = num.exact_div(&g).unwrap();
        let den = den.exact_div(&g).unwrap();
        let lead = den.leading().unwrap().inv().unwrap();
        RatFunc { num: num.scale(&lead), den: den.scale(&lead) }
    }

    pub fn poly(p: Poly) -> Self {
        let one = Poly::one(p.field());
        RatFunc { num: p, den: one }
    }
}

/// `L Y = A Y` with `A = N / T`: `T` a polynomial and `N = T·A` a polynomial matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSystemSpec {
    pub kind: Kind,
    field: NumberField,
    den: Poly,
    num: Vec<Vec<Poly>>,
}

impl LinearSystemSpec {
    /// Build from rational-function entries. `T` is the least common denominator,
    /// normalized to trailing coefficient 1 and then scaled so that `T` and `T·A`
    /// have integral coordinates.
    pub fn from_entries(kind: Kind, field: &NumberField, entries: Vec<Vec<RatFunc>>) -> Result<Self> {
        let n = entries.len();
        if n == 0 || entries.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("system matrix must be square and nonempty".into()));
        }
        let mut t = Poly::one(field);
        for e in entries.iter().flatten() {
            t = t.lcm(&e.den);
        }
        let t = t.trailing_normalized();
        let mut num: Vec<Vec<Poly>> = entries
            .iter()
            .map(|row| row.iter().map(|e| e.num.mul(&t.exact_div(&e.den).expect("lcm is a multiple"))).collect())
            .collect();
        let mut scale = t.denominator();
        for p in num.iter().flatten() {
            scale = scale.lcm(&p.denominator());
        }
        let s = BigRational::from(scale);
        let t = t.scale_rational(&s);
        for p in num.iter_mut().flatten() {
            *p = p.scale_rational(&s);
        }
        let sys = LinearSystemSpec { kind, field: field.clone(), den: t, num };
        if kind.is_mahler() && sys.det_numerator().is_zero() {
            return Err(Error::Invalid("Mahler system matrix must be invertible".into()));
        }
        Ok(sys)
    }

    /// Build from a polynomial matrix and denominator without renormalizing.
    pub fn from_parts(kind: Kind, den: Poly, num: Vec<Vec<Poly>>) -> Self {
        let field = den.field().clone();
        LinearSystemSpec { kind, field, den, num }
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn size(&self) -> usize {
        self.num.len()
    }

    /// The common denominator `T`.
    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    /// The polynomial matrix `T·A`.
    pub fn numerator(&self) -> &[Vec<Poly>] {
        &self.num
    }

    /// Reduced entry `A_ij`.
    pub fn entry(&self, i: usize, j: usize) -> RatFunc {
        RatFunc::new(self.num[i][j].clone(), self.den.clone())
    }

    pub fn entries(&self) -> Vec<Vec<RatFunc>> {
        (0..self.size()).map(|i| (0..self.size()).map(|j| self.entry(i, j)).collect()).collect()
    }

    /// `det(T·A)`.
    pub fn det_numerator(&self) -> Poly {
        linalg::bareiss_poly(self.num.clone(), self.size(), &self.field).1
    }

    /// Numerator of `det A` in lowest terms.
    pub fn det_reduced_numerator(&self) -> Poly {
        let d = self.det_numerator();
        if d.is_zero() {
            return d;
        }
        let tm = self.den.pow(self.size() as u32);
        d.exact_div(&d.gcd(&tm)).unwrap()
    }

    /// `T·L Y - N·Y` for a candidate solution vector, on its valid truncation.
    pub fn residual(&self, y: &[TruncSeries]) -> Result<Vec<TruncSeries>> {
        if y.len() != self.size() {
            return Err(Error::DimensionMismatch { expected: self.size(), found: y.len() });
        }
        let order = y.iter().map(|s| s.order()).min().unwrap_or(0);
        let (ly, valid): (Vec<TruncSeries>, usize) = match self.kind {
            Kind::Differential => (y.iter().map(|s| s.derivative()).collect(), order.saturating_sub(1)),
            Kind::Mahler { q } => (y.iter().map(|s| s.substitute_power(q)).collect(), order),
        };
        Ok((0..self.size())
            .map(|i| {
                let mut acc = ly[i].truncate(valid).mul_poly(&self.den);
                for (j, yj) in y.iter().enumerate() {
                    acc = acc.sub(&yj.truncate(valid).mul_poly(&self.num[i][j]));
                }
                acc
            })
            .collect())
    }

    /// The transpose of `N`, used by the form recursions.
    pub fn numerator_transpose(&self) -> Vec<Vec<Poly>> {
        let n = self.size();
        (0..n).map(|i| (0..n).map(|j| self.num[j][i].clone()).collect()).collect()
    }
}

fn frac(num: Poly, den: &Poly) -> RatFunc {
    RatFunc::new(num, den.clone())
}

/// Companion system of a scalar equation. For `Σ a_j L^j f = b` with `b != 0` the vector
/// gains a leading constant coordinate 1.
pub fn companion(spec: &FunctionSpec) -> Result<LinearSystemSpec> {
    spec.validate()?;
    let k = &spec.field;
    let m = spec.order();
    let off = usize::from(spec.is_inhomogeneous());
    let n = m + off;
    let zero = || RatFunc::poly(Poly::zero(k));
    let one = || RatFunc::poly(Poly::one(k));
    let am = &spec.coeffs[m];
    let mut rows: Vec<Vec<RatFunc>> = (0..n).map(|_| (0..n).map(|_| zero()).collect()).collect();
    if off == 1 && spec.kind.is_mahler() {
        rows[0][0] = one();
    }
    for i in off..n - 1 {
        rows[i][i + 1] = one();
    }
    for j in 0..m {
        rows[n - 1][off + j] = frac(spec.coeffs[j].neg(), am);
    }
    if let Some(b) = &spec.rhs {
        rows[n - 1][0] = frac(b.clone(), am);
    }
    LinearSystemSpec::from_entries(spec.kind, k, rows)
}

/// The vector solving the companion system: `(f, ∂f, …)` or `(f(z), f(z^q), …)`,
/// preceded by 1 for inhomogeneous equations.
pub fn companion_solution(spec: &FunctionSpec, order: usize) -> Result<Vec<TruncSeries>> {
    let m = spec.order();
    let mut out = Vec::new();
    if spec.is_inhomogeneous() {
        out.push(TruncSeries::one(&spec.field, order));
    }
    match spec.kind {
        Kind::Differential => {
            let mut s = spec.extend_series(order + m)?;
            for _ in 0..m {
                out.push(s.truncate(order));
                s = s.derivative();
            }
        }
        Kind::Mahler { q } => {
            let mut s = spec.extend_series(order)?;
            for _ in 0..m {
                out.push(s.truncate(order));
                s = s.substitute_power(q);
            }
        }
    }
    Ok(out)
}

/// Block-diagonal sum; the denominator becomes the lcm of the summands'.
pub fn direct_sum(systems: &[LinearSystemSpec]) -> Result<LinearSystemSpec> {
    let first = systems.first().ok_or_else(|| Error::Invalid("no systems to sum".into()))?;
    if systems.iter().any(|s| s.kind != first.kind) {
        return Err(Error::KindMismatch("all summands must share kind and q".into()));
    }
    if systems.len() == 1 {
        return Ok(first.clone());
    }
    let k = first.field();
    let n: usize = systems.iter().map(|s| s.size()).sum();
    let mut rows: Vec<Vec<RatFunc>> = (0..n).map(|_| (0..n).map(|_| RatFunc::poly(Poly::zero(k))).collect()).collect();
    let mut off = 0;
    for s in systems {
        for i in 0..s.size() {
            for j in 0..s.size() {
                rows[off + i][off + j] = s.entry(i, j);
            }
        }
        off += s.size();
    }
    LinearSystemSpec::from_entries(first.kind, k, rows)
}

fn mat_mul(a: &[Vec<Poly>], b: &[Vec<Poly>], k: &NumberField) -> Vec<Vec<Poly>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(Poly::zero(k), |acc, l| acc.add(&a[i][l].mul(&b[l][j]))))
                .collect()
        })
        .collect()
}

/// `A_ℓ(z) = A(z^{q^{ℓ-1}}) ⋯ A(z)`, a system for base `q^ℓ`.
pub fn mahler_compose(system: &LinearSystemSpec, ell: usize) -> Result<LinearSystemSpec> {
    let Kind::Mahler { q } = system.kind else {
        return Err(Error::KindMismatch("composition applies to Mahler systems".into()));
    };
    if ell == 0 {
        return Err(Error::Precondition("ℓ must be at least 1".into()));
    }
    if ell == 1 {
        return Ok(system.clone());
    }
    let k = system.field();
    let mut num: Vec<Vec<Poly>> = system.num.clone();
    let mut den = system.den.clone();
    let mut step = 1usize;
    for _ in 1..ell {
        step *= q;
        let lifted: Vec<Vec<Poly>> = system.num.iter().map(|r| r.iter().map(|p| p.substitute_power(step)).collect()).collect();
        num = mat_mul(&lifted, &num, k);
        den = den.mul(&system.den.substitute_power(step));
    }
    let entries = num.into_iter().map(|r| r.into_iter().map(|p| frac(p, &den)).collect()).collect();
    LinearSystemSpec::from_entries(Kind::Mahler { q: q.pow(ell as u32) }, k, entries)
}

/// An affine system `T·L f = N f + c` on the function vector itself.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineSystem {
    pub kind: Kind,
    pub den: Poly,
    pub num: Vec<Vec<Poly>>,
    pub shift: Vec<Poly>,
}

impl AffineSystem {
    /// Interpret a linear system either directly on `f` (size `m`) or on `(1, f)` (size `m + 1`)
    /// with a constant leading coordinate.
    pub fn from_linear(sys: &LinearSystemSpec, m: usize) -> Result<Self> {
        let k = sys.field();
        if sys.size() == m {
            return Ok(AffineSystem {
                kind: sys.kind,
                den: sys.den.clone(),
                num: sys.num.clone(),
                shift: vec![Poly::zero(k); m],
            });
        }
        if sys.size() == m + 1 {
            let row0_ok = (1..=m).all(|j| sys.num[0][j].is_zero())
                && match sys.kind {
                    Kind::Differential => sys.num[0][0].is_zero(),
                    Kind::Mahler { .. } => sys.num[0][0] == sys.den,
                };
            if !row0_ok {
                return Err(Error::Invalid("leading coordinate of the system is not the constant 1".into()));
            }
            return Ok(AffineSystem {
                kind: sys.kind,
                den: sys.den.clone(),
                num: (1..=m).map(|i| (1..=m).map(|j| sys.num[i][j].clone()).collect()).collect(),
                shift: (1..=m).map(|i| sys.num[i][0].clone()).collect(),
            });
        }
        Err(Error::DimensionMismatch { expected: m, found: sys.size() })
    }

    /// Assemble from first-order scalar equations `a_1 L f_i + a_0 f_i = b_i`.
    pub fn from_first_order(specs: &[FunctionSpec]) -> Result<Self> {
        let first = specs.first().ok_or_else(|| Error::Invalid("no functions".into()))?;
        if specs.iter().any(|s| s.order() != 1) {
            return Err(Error::Precondition(
                "functions of order above 1 need an explicit system on the function vector".into(),
            ));
        }
        if specs.iter().any(|s| s.kind != first.kind) {
            return Err(Error::KindMismatch("functions must share kind and q".into()));
        }
        let k = &first.field;
        let m = specs.len();
        let mut rows: Vec<Vec<RatFunc>> = (0..=m).map(|_| (0..=m).map(|_| RatFunc::poly(Poly::zero(k))).collect()).collect();
        if first.kind.is_mahler() {
            rows[0][0] = RatFunc::poly(Poly::one(k));
        }
        for (i, s) in specs.iter().enumerate() {
            rows[i + 1][i + 1] = frac(s.coeffs[0].neg(), &s.coeffs[1]);
            if let Some(b) = &s.rhs {
                rows[i + 1][0] = frac(b.clone(), &s.coeffs[1]);
            }
        }
        let sys = LinearSystemSpec::from_entries(first.kind, k, rows)?;
        AffineSystem::from_linear(&sys, m)
    }

    pub fn nvars(&self) -> usize {
        self.num.len()
    }

    /// Linear system satisfied by the monomials `f^μ`, `|μ| <= D`, in basis order.
    pub fn induced(&self, basis: &MonomialBasis) -> Result<LinearSystemSpec> {
        let m = self.nvars();
        if basis.nvars() != m {
            return Err(Error::DimensionMismatch { expected: m, found: basis.nvars() });
        }
        let k = self.den.field().clone();
        let p = basis.len();
        let mut num = vec![vec![Poly::zero(&k); p]; p];
        // L f_i as a degree-1 polynomial in X over K[z]: (Σ_j N_ij X_j + c_i) / T
        let lin: Vec<MultiPoly<Poly>> = (0..m)
            .map(|i| {
                let mut terms: Vec<(Vec<u32>, Poly)> = (0..m)
                    .map(|j| {
                        let mut e = vec![0u32; m];
                        e[j] = 1;
                        (e, self.num[i][j].clone())
                    })
                    .collect();
                terms.push((vec![0u32; m], self.shift[i].clone()));
                MultiPoly::from_terms(m, terms)
            })
            .collect();
        let den = match self.kind {
            Kind::Differential => {
                for (row, mu) in basis.exponents().iter().enumerate() {
                    for i in 0..m {
                        if mu[i] == 0 {
                            continue;
                        }
                        let mut lower = mu.clone();
                        lower[i] -= 1;
                        let base: MultiPoly<Poly> = MultiPoly::from_terms(m, [(lower, Poly::constant(k.from_int(mu[i] as i64)))]);
                        let prod = base.mul(&lin[i]);
                        for (e, c) in prod.terms() {
                            let col = basis.index_of(e).expect("degree does not grow");
                            num[row][col] = num[row][col].add(c);
                        }
                    }
                }
                self.den.clone()
            }
            Kind::Mahler { .. } => {
                let d = basis.degree_bound();
                for (row, mu) in basis.exponents().iter().enumerate() {
                    let deg: u32 = mu.iter().sum();
                    let tpow = self.den.pow(d as u32 - deg);
                    let mut prod: MultiPoly<Poly> = MultiPoly::from_terms(m, [(vec![0u32; m], tpow)]);
                    for i in 0..m {
                        for _ in 0..mu[i] {
                            prod = prod.mul(&lin[i]);
                        }
                    }
                    for (e, c) in prod.terms() {
                        let col = basis.index_of(e).expect("degree does not grow");
                        num[row][col] = num[row][col].add(c);
                    }
                }
                self.den.pow(d as u32)
            }
        };
        let entries = num.into_iter().map(|r| r.into_iter().map(|c| frac(c, &den)).collect()).collect();
        LinearSystemSpec::from_entries(self.kind, &k, entries)
    }
}

/// Clear a rational scalar so a polynomial has integral, primitive coordinates.
pub fn integral_primitive(p: &Poly) -> Poly {
    let d = p.denominator();
    let scaled = p.scale_rational(&BigRational::from(d));
    let g = scaled
        .coeffs()
        .iter()
        .flat_map(|c| c.coords().iter())
        .fold(BigInt::from(0), |acc, r| acc.gcd(r.numer()));
    if g.is_one() || g == BigInt::from(0) {
        scaled
    } else {
        scaled.scale_rational(&BigRational::new(BigInt::one(), g))
    }
}
