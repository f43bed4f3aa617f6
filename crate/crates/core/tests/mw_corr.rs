use mwt::field::Field;
use mwt::gw::{scharlau_transfer, GWClass};
use mwt::mw_corr::{self, EtaleScheme, MWCor};
use mwt::sample;
use mwt::transfers::{primitive_extension, Transfers};
use proptest::prelude::*;

fn gf(q: u64) -> Field {
    Field::gf(q).unwrap()
}

fn scheme(fields: &[u64]) -> EtaleScheme {
    let f: Vec<Field> = fields.iter().map(|&q| gf(q)).collect();
    EtaleScheme::new(&gf(3), &f).unwrap()
}

#[test]
fn composing_with_the_identity() {
    let x = scheme(&[9, 3]);
    let y = scheme(&[9]);
    let mut ctx = Transfers::new();
    let mut rng = sample::rng(12);
    let a = mw_corr::random_cor(&x, &y, &mut rng).unwrap();
    let l = mw_corr::compose(&mut ctx, &MWCor::identity(&x).unwrap(), &a).unwrap();
    assert!(l.eq_cor(&a).unwrap());
    assert!(mw_corr::unit_check(&mut ctx, &a).unwrap());
}

#[test]
fn transposed_graph_of_gf9_gives_the_trace_form() {
    let gf3 = gf(3);
    let ext = primitive_extension(&gf3, &gf(9)).unwrap();
    let mut ctx = Transfers::new();
    let g = MWCor::transpose_graph(&ext).unwrap();
    let out = mw_corr::act_on_class(&mut ctx, &g, &[GWClass::one(&gf(9))]).unwrap();
    let trace_form = GWClass::diagonal(&gf3, &[gf3.from_i64(1), gf3.from_i64(2)]).unwrap();
    assert!(out.eq_gw(&trace_form).unwrap());
    assert!(out.eq_gw(&scharlau_transfer(&GWClass::one(&gf(9)), &ext).unwrap()).unwrap());
    let (via_cor, via_tr) = mw_corr::graph_transfer_sides(&mut ctx, &ext, &GWClass::one(&gf(9))).unwrap();
    assert!(via_cor.eq_gw(&via_tr).unwrap());
}

#[test]
fn classes_over_a_point_round_trip() {
    let x = scheme(&[9, 3, 27]);
    let mut rng = sample::rng(2);
    let classes: Vec<GWClass> = x
        .components()
        .iter()
        .map(|c| sample::gw(c.field(), 3, &mut rng).unwrap())
        .collect();
    let back = MWCor::from_gw(&x, &classes).unwrap().to_gw().unwrap();
    for (a, b) in back.iter().zip(&classes) {
        assert!(a.eq_gw(b).unwrap());
    }
    assert!(MWCor::from_gw(&x, &classes[..1]).is_err());
}

#[test]
fn empty_scheme_and_disjoint_union() {
    let k = gf(3);
    let e = EtaleScheme::empty(&k).unwrap();
    assert!(e.is_empty());
    let x = scheme(&[9]).disjoint_union(&scheme(&[3])).unwrap();
    assert_eq!(x.len(), 2);
    let z = MWCor::zero(&e, &x).unwrap();
    assert!(z.eq_cor(&MWCor::zero(&e, &x).unwrap()).unwrap());
}

fn shapes() -> Vec<Vec<u64>> {
    vec![vec![3], vec![9], vec![9, 3], vec![3, 3], vec![27]]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn composition_is_associative(seed in any::<u64>(), i in 0usize..5, j in 0usize..5, k in 0usize..5, l in 0usize..5) {
        let s = shapes();
        let (x, y, z, w) = (scheme(&s[i]), scheme(&s[j]), scheme(&s[k]), scheme(&s[l]));
        let mut rng = sample::rng(seed);
        let a = mw_corr::random_cor(&x, &y, &mut rng).unwrap();
        let b = mw_corr::random_cor(&y, &z, &mut rng).unwrap();
        let c = mw_corr::random_cor(&z, &w, &mut rng).unwrap();
        let mut ctx = Transfers::new();
        prop_assert!(mw_corr::associativity_check(&mut ctx, &a, &b, &c).unwrap());
    }

    #[test]
    fn composition_is_additive(seed in any::<u64>(), i in 0usize..5, j in 0usize..5) {
        let s = shapes();
        let (x, y, z) = (scheme(&s[i]), scheme(&s[j]), scheme(&[9, 3]));
        let mut rng = sample::rng(seed);
        let a = mw_corr::random_cor(&x, &y, &mut rng).unwrap();
        let a2 = mw_corr::random_cor(&x, &y, &mut rng).unwrap();
        let b = mw_corr::random_cor(&y, &z, &mut rng).unwrap();
        let mut ctx = Transfers::new();
        let lhs = mw_corr::compose(&mut ctx, &a.add(&a2).unwrap(), &b).unwrap();
        let rhs = mw_corr::compose(&mut ctx, &a, &b).unwrap().add(&mw_corr::compose(&mut ctx, &a2, &b).unwrap()).unwrap();
        prop_assert!(lhs.eq_cor(&rhs).unwrap());
    }
}
