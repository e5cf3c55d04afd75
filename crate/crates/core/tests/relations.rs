use num_bigint::BigInt;
use proptest::prelude::*;
use transcend::exactnum::{FieldElement, NumberField};
use transcend::polyseries::{basis_size, MonomialBasis, MonomialOrder, MultiPoly, Poly, TruncSeries};
use transcend::relations::*;
use transcend::systems::{FunctionSpec, Kind};
use transcend::Error;

fn q() -> NumberField {
    NumberField::rationals()
}

fn p(c: &[i64]) -> Poly {
    Poly::from_ints(&q(), c)
}

fn series(kind: Kind, coeffs: Vec<Poly>, init: &[i64], rhs: Option<Poly>, order: usize) -> TruncSeries {
    let k = q();
    let mut s = FunctionSpec::new(&k, kind, coeffs, init.iter().map(|&x| k.from_int(x)).collect()).unwrap();
    if let Some(b) = rhs {
        s = s.with_rhs(b);
    }
    s.extend_series(order).unwrap()
}

fn cos_sin(order: usize) -> Vec<TruncSeries> {
    let eq = || vec![p(&[1]), p(&[]), p(&[1])];
    vec![series(Kind::Differential, eq(), &[1, 0], None, order), series(Kind::Differential, eq(), &[0, 1], None, order)]
}

fn exp(order: usize) -> TruncSeries {
    series(Kind::Differential, vec![p(&[-1]), p(&[1])], &[1], None, order)
}

fn fredholm(order: usize) -> TruncSeries {
    series(Kind::Mahler { q: 2 }, vec![p(&[-1]), p(&[1])], &[0, 1], Some(p(&[0, -1])), order)
}

fn mp(n: usize, terms: &[(&[u32], i64)]) -> MultiPoly<FieldElement> {
    let k = q();
    MultiPoly::from_terms(n, terms.iter().map(|(e, c)| (e.to_vec(), k.from_int(*c))))
}

fn ip(n: usize, terms: &[(&[u32], i64)]) -> MultiPoly<BigInt> {
    MultiPoly::from_terms(n, terms.iter().map(|(e, c)| (e.to_vec(), BigInt::from(*c))))
}

fn pyth() -> MultiPoly<FieldElement> {
    mp(2, &[(&[2, 0], 1), (&[0, 2], 1), (&[0, 0], -1)])
}

fn constant_part(rel: &RelationBasis) -> Vec<MultiPoly<FieldElement>> {
    specialize(rel, &q().zero())
}

#[test]
fn pythagorean_relation_is_found() {
    let rel = relation_kernel(&cos_sin(12), 2, 0, 12, DEFAULT_MARGIN).unwrap();
    assert_eq!(rel.dim(), 1);
    assert_eq!(constant_part(&rel), vec![pyth()]);
    assert!(rel.residuals(&cos_sin(12)).unwrap().iter().all(|r| r.is_zero()));
    assert!(!rel.certified);
    let rel = relation_kernel(&cos_sin(16), 2, 0, 16, DEFAULT_MARGIN).unwrap();
    assert!(rel.certified);
}

#[test]
fn exp_has_no_small_relation() {
    let rel = relation_kernel(&[exp(20)], 2, 2, 20, DEFAULT_MARGIN).unwrap();
    assert_eq!(rel.dim(), 0);
}

#[test]
fn square_relation_is_found() {
    let f = fredholm(40);
    let f2 = f.mul(&f);
    let rel = relation_kernel(&[f, f2], 2, 0, 40, DEFAULT_MARGIN).unwrap();
    assert_eq!(rel.dim(), 1);
    assert_eq!(constant_part(&rel), vec![mp(2, &[(&[2, 0], 1), (&[0, 1], -1)])]);
}

#[test]
fn kernel_dimension_is_stable_past_the_margin() {
    let dims: Vec<usize> = [16, 24, 40].iter().map(|&t| relation_kernel(&cos_sin(t), 2, 1, t, DEFAULT_MARGIN).unwrap().dim()).collect();
    // X1^2 + X2^2 - 1 and z times it
    assert_eq!(dims, vec![2, 2, 2]);
}

#[test]
fn truncation_too_small() {
    assert!(matches!(relation_kernel(&cos_sin(6), 2, 0, 6, 4), Err(Error::TruncationTooSmall { .. })));
    assert!(matches!(relation_kernel(&cos_sin(10), 2, 0, 12, 4), Err(Error::TruncationTooSmall { .. })));
}

#[test]
fn linear_forms_examples() {
    let k = q();
    let gb = buchberger(&[pyth()], MonomialOrder::GrLex);
    let f2 = linear_forms_from_relations(&gb, &MonomialBasis::new(2, 2), &k).unwrap();
    assert_eq!((f2.forms.len(), f2.rank), (1, 1));
    let f3 = linear_forms_from_relations(&gb, &MonomialBasis::new(2, 3), &k).unwrap();
    assert_eq!((f3.forms.len(), f3.rank), (3, 3));
    let empty = linear_forms_from_relations(&[], &MonomialBasis::new(2, 3), &k).unwrap();
    assert_eq!((empty.forms.len(), empty.rank), (0, 0));
    assert!(matches!(
        linear_forms_from_relations(&gb, &MonomialBasis::new(2, 1), &k),
        Err(Error::DegreeBoundTooSmall { needed: 2, bound: 1 })
    ));
}

fn params(dd: usize, t: usize, order: usize) -> LedgerParams {
    LedgerParams { delta: dd, d: 1, h: 1, t, z_degree: 0, order, margin: DEFAULT_MARGIN }
}

fn cos_sin_ledger(dd: usize) -> DimensionLedger {
    let order = certification_order(2, dd, 0, DEFAULT_MARGIN).max(basis_size(2, dd) + 1);
    let f = cos_sin(order);
    ledger(&f, &ip(2, &[(&[1, 0], 1)]), &[pyth()], &params(dd, 1, order)).unwrap()
}

#[test]
fn ledger_cos_sin_degree_two() {
    let l = cos_sin_ledger(2);
    assert_eq!((l.p, l.q, l.r, l.s, l.u, l.v, l.w), (6, 1, 1, 4, 3, 2, 5));
    assert!(l.vh_below_w);
    assert!(l.identities_hold());
    assert!(l.relations_certified);
}

#[test]
fn ledger_cos_sin_degree_four() {
    let l = cos_sin_ledger(4);
    assert_eq!((l.p, l.q, l.w), (15, 6, 9));
}

#[test]
fn ledger_exp_degree_three() {
    let f = vec![exp(40)];
    let l = ledger(&f, &ip(1, &[(&[1], 1)]), &[], &params(3, 1, 40)).unwrap();
    assert_eq!((l.p, l.q, l.r, l.s, l.u, l.v, l.w), (4, 0, 0, 3, 3, 1, 4));
}

#[test]
fn ledger_rejects_p_in_ideal() {
    let f = cos_sin(20);
    let p_rel = ip(2, &[(&[2, 0], 1), (&[0, 2], 1), (&[0, 0], -1)]);
    assert!(matches!(ledger(&f, &p_rel, &[pyth()], &params(2, 1, 20)), Err(Error::PInIdeal)));
}

/// Monomials of degree <= D not divisible by X1^2: X2^b and X1 X2^b, so 2D + 1 of them.
#[test]
fn hilbert_serre_growth_is_linear() {
    let w: Vec<i64> = (2..=7).map(|dd| cos_sin_ledger(dd).w as i64).collect();
    for (i, dd) in (2..=7).enumerate() {
        assert_eq!(w[i], 2 * dd + 1);
    }
    let second: Vec<i64> = w.windows(3).map(|x| x[2] - 2 * x[1] + x[0]).collect();
    assert!(second.iter().all(|&x| x == 0));
}

#[test]
fn shipped_ideals_are_groebner_bases() {
    let ideals: Vec<(Vec<MultiPoly<FieldElement>>, MonomialOrder)> = vec![
        (vec![pyth()], MonomialOrder::GrLex),
        (vec![mp(2, &[(&[1, 0], 1), (&[0, 1], -1)]), mp(2, &[(&[0, 2], 1), (&[0, 0], -1)])], MonomialOrder::Lex),
        (vec![mp(2, &[(&[2, 0], 1)]), mp(2, &[(&[1, 1], 1)])], MonomialOrder::GrLex),
    ];
    for (gens, ord) in ideals {
        let gb = buchberger(&gens, ord);
        assert!(is_groebner(&gb, ord));
        assert!(gens.iter().all(|g| reduce(g, &gb, ord).is_zero()));
    }
}

fn arb_poly() -> impl Strategy<Value = MultiPoly<FieldElement>> {
    prop::collection::vec(((0u32..3, 0u32..3), -5i64..6), 1..4).prop_map(|terms| {
        let k = q();
        MultiPoly::from_terms(2, terms.into_iter().map(|((a, b), c)| (vec![a, b], k.from_int(c))))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn buchberger_output_is_a_basis_of_the_input(gens in prop::collection::vec(arb_poly(), 1..4)) {
        for ord in [MonomialOrder::GrLex, MonomialOrder::Lex] {
            let gb = buchberger(&gens, ord);
            prop_assert!(is_groebner(&gb, ord));
            for g in &gens {
                prop_assert!(reduce(g, &gb, ord).is_zero());
            }
        }
    }

    #[test]
    fn ledger_identities(dd in 2usize..5, a in 0u32..2, b in 0u32..2) {
        prop_assume!(a + b >= 1);
        let order = certification_order(2, dd, 0, DEFAULT_MARGIN).max(basis_size(2, dd) + 1);
        let f = cos_sin(order);
        let l = ledger(&f, &ip(2, &[(&[a, b], 1), (&[0, 0], 2)]), &[pyth()], &params(dd, 1, order)).unwrap();
        prop_assert!(l.identities_hold());
        prop_assert_eq!(l.q, l.r);
    }
}
