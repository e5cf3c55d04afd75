use crate::exactnum::FieldElement;
use crate::polyseries::{MonomialOrder, MultiPoly};

type Poly = MultiPoly<FieldElement>;

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn sub_exp(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn lead(p: &Poly, ord: MonomialOrder) -> (Vec<u32>, FieldElement) {
    let (e, c) = p.leading(ord).expect("nonzero polynomial");
    (e.clone(), c.clone())
}

fn make_monic(p: &Poly, ord: MonomialOrder) -> Poly {
    let (_, c) = lead(p, ord);
    let inv = c.inv().expect("nonzero leading coefficient");
    p.map(|x| x.mul(&inv))
}

/// Complete reduction of `p` modulo `basis`: no term of the result is divisible by a
/// leading monomial of the basis.
pub fn reduce(p: &Poly, basis: &[Poly], ord: MonomialOrder) -> Poly {
    let leads: Vec<(Vec<u32>, FieldElement)> = basis.iter().filter(|g| !g.is_zero()).map(|g| lead(g, ord)).collect();
    let polys: Vec<&Poly> = basis.iter().filter(|g| !g.is_zero()).collect();
    let mut rest = p.clone();
    let mut rem = MultiPoly::zero(p.nvars());
    while let Some((e, c)) = rest.leading(ord).map(|(e, c)| (e.clone(), c.clone())) {
        match leads.iter().position(|(le, _)| divides(le, &e)) {
            Some(i) => {
                let factor = c.div(&leads[i].1).expect("nonzero");
                rest = rest.sub(&polys[i].mul_term(&sub_exp(&e, &leads[i].0), &factor));
            }
            None => {
                rem.add_term(e.clone(), c.clone());
                rest = rest.sub(&MultiPoly::from_terms(p.nvars(), vec![(e, c)]));
            }
        }
    }
    rem
}

/// `S(f, g)` with the leading terms cancelled.
pub fn s_polynomial(f: &Poly, g: &Poly, ord: MonomialOrder) -> Poly {
    let (ef, cf) = lead(f, ord);
    let (eg, cg) = lead(g, ord);
    let l = lcm(&ef, &eg);
    let a = f.mul_term(&sub_exp(&l, &ef), &cf.inv().expect("nonzero"));
    let b = g.mul_term(&sub_exp(&l, &eg), &cg.inv().expect("nonzero"));
    a.sub(&b)
}

/// Reduced Gröbner basis with monic generators, sorted by decreasing leading monomial.
///
/// Pairs are processed smallest `lcm` first; pairs with coprime leading monomials are skipped.
pub fn buchberger(generators: &[Poly], ord: MonomialOrder) -> Vec<Poly> {
    let mut g: Vec<Poly> = generators.iter().filter(|p| !p.is_zero()).map(|p| make_monic(p, ord)).collect();
    if g.is_empty() {
        return g;
    }
    let mut pairs: Vec<(usize, usize)> = (0..g.len()).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    while !pairs.is_empty() {
        let pick = (0..pairs.len())
            .min_by(|&x, &y| {
                let lx = lcm(&lead(&g[pairs[x].0], ord).0, &lead(&g[pairs[x].1], ord).0);
                let ly = lcm(&lead(&g[pairs[y].0], ord).0, &lead(&g[pairs[y].1], ord).0);
                ord.cmp(&lx, &ly).then(pairs[x].cmp(&pairs[y]))
            })
            .unwrap();
        let (i, j) = pairs.remove(pick);
        let (ei, ej) = (lead(&g[i], ord).0, lead(&g[j], ord).0);
        if ei.iter().zip(&ej).all(|(a, b)| *a == 0 || *b == 0) {
            continue;
        }
        let r = reduce(&s_polynomial(&g[i], &g[j], ord), &g, ord);
        if !r.is_zero() {
            let n = g.len();
            g.push(make_monic(&r, ord));
            pairs.extend((0..n).map(|k| (k, n)));
        }
    }
    interreduce(g, ord)
}

fn interreduce(g: Vec<Poly>, ord: MonomialOrder) -> Vec<Poly> {
    // drop generators whose leading monomial is divisible by another's
    let mut minimal: Vec<Poly> = Vec::new();
    for (i, p) in g.iter().enumerate() {
        let e = lead(p, ord).0;
        let redundant = g.iter().enumerate().any(|(j, q)| {
            let f = lead(q, ord).0;
            j != i && divides(&f, &e) && (f != e || j < i)
        });
        if !redundant {
            minimal.push(p.clone());
        }
    }
    let mut out: Vec<Poly> = (0..minimal.len())
        .map(|i| {
            let others: Vec<Poly> = minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, q)| q.clone()).collect();
            make_monic(&reduce(&minimal[i], &others, ord), ord)
        })
        .collect();
    out.sort_by(|a, b| ord.cmp(&lead(b, ord).0, &lead(a, ord).0));
    out
}

/// Whether every S-polynomial of `basis` reduces to zero.
pub fn is_groebner(basis: &[Poly], ord: MonomialOrder) -> bool {
    (0..basis.len()).all(|j| (0..j).all(|i| reduce(&s_polynomial(&basis[i], &basis[j], ord), basis, ord).is_zero()))
}
