mod common;

use common::{multisets, Tables};
use mwt::field::embed::Embedding;
use mwt::field::parse::make_field;
use mwt::field::tensor::SimpleExtension;
use mwt::field::{Elem, Field};
use mwt::gw::{scharlau_transfer, GWClass};
use mwt::sample;
use proptest::prelude::*;

fn form(k: &Field, entries: &[i64]) -> GWClass {
    let e: Vec<Elem> = entries.iter().map(|&a| k.from_i64(a)).collect();
    GWClass::diagonal(k, &e).unwrap()
}

#[test]
fn angle_product_is_angle_of_product() {
    let k = Field::prime(7).unwrap();
    for a in 1..7 {
        for b in 1..7 {
            let lhs = form(&k, &[a]).mul(&form(&k, &[b])).unwrap();
            assert!(lhs.eq_gw(&form(&k, &[a * b])).unwrap());
        }
    }
}

#[test]
fn one_one_equals_two_two_over_gf3() {
    let k = Field::prime(3).unwrap();
    let t = Tables::new(&k);
    let two = k.index_of(&k.from_i64(2)) as u8;
    assert!(t.isometric(&[1, 1], &[two, two]));
    assert!(form(&k, &[1, 1]).eq_gw(&form(&k, &[2, 2])).unwrap());
}

#[test]
fn hyperbolic_over_q() {
    let q = make_field("Q").unwrap();
    assert!(form(&q, &[1, -1]).eq_gw(&GWClass::hyperbolic(&q)).unwrap());
    assert!(!form(&q, &[1, 1]).eq_gw(&GWClass::hyperbolic(&q)).unwrap());
    assert_eq!(form(&q, &[1, 1]).signature().unwrap(), 2);
    assert_eq!(GWClass::hyperbolic(&q).signature().unwrap(), 0);
}

#[test]
fn n_epsilon_small_values() {
    let k = Field::prime(5).unwrap();
    assert!(GWClass::n_epsilon(0, &k).unwrap().eq_gw(&GWClass::zero(&k)).unwrap());
    assert!(GWClass::n_epsilon(2, &k).unwrap().eq_gw(&GWClass::hyperbolic(&k)).unwrap());
    let three = GWClass::n_epsilon(3, &k).unwrap();
    assert_eq!(three.rank(), 3);
    let d = three.determinant();
    let ratio = k.div(&d, &k.from_i64(-1)).unwrap();
    assert!(k.is_square_finite(&ratio).unwrap());
    assert!(GWClass::n_epsilon(-1, &k).is_err());
}

#[test]
fn four_ones_is_twice_hyperbolic_over_gf5() {
    let k = Field::prime(5).unwrap();
    let t = Tables::new(&k);
    let m1 = k.index_of(&k.from_i64(-1)) as u8;
    assert!(t.isometric(&[1, 1, 1, 1], &[1, m1, 1, m1]));
    let two_h = GWClass::hyperbolic(&k).scale(2);
    assert!(form(&k, &[1, 1, 1, 1]).eq_gw(&two_h).unwrap());
}

#[test]
fn trace_form_of_gf9_over_gf3() {
    let gf3 = Field::prime(3).unwrap();
    let gf9 = Field::gf(9).unwrap();
    let ext = SimpleExtension::from_generator(Embedding::natural(&gf3, &gf9).unwrap(), &gf9.gen()).unwrap();
    let tr = scharlau_transfer(&GWClass::one(&gf9), &ext).unwrap();
    assert_eq!(tr.rank(), 2);
    // Gram matrix of (x, y) -> Tr(xy) on the basis 1, g, computed by hand from the traces.
    let trace = |a: &Elem| ext.trace(a).unwrap();
    let g = gf9.gen();
    let t11 = trace(&gf9.one());
    let t12 = trace(&g);
    let t22 = trace(&gf9.mul(&g, &g));
    let det = gf3.sub(&gf3.mul(&t11, &t22), &gf3.mul(&t12, &t12));
    let ratio = gf3.div(&tr.determinant(), &det).unwrap();
    assert!(gf3.is_square_finite(&ratio).unwrap());
    let id = SimpleExtension::trivial(&gf3).unwrap();
    let q = form(&gf3, &[1, 2]);
    assert!(scharlau_transfer(&q, &id).unwrap().eq_gw(&q).unwrap());
}

#[test]
fn reduced_form_keeps_the_class() {
    let k = Field::gf(9).unwrap();
    let mut rng = sample::rng(7);
    for _ in 0..50 {
        let q = sample::gw(&k, 5, &mut rng).unwrap();
        let r = q.reduced();
        assert!(r.eq_gw(&q).unwrap());
        assert_eq!(r.rank(), q.rank());
    }
}

#[test]
fn parse_round_trip() {
    let k = Field::prime(5).unwrap();
    let q = GWClass::parse(&k, "<1,2> - <3>").unwrap();
    assert_eq!(q.rank(), 1);
    assert!(GWClass::parse(&k, &q.to_string()).unwrap().eq_gw(&q).unwrap());
    assert!(GWClass::parse(&k, "<0>").is_err());
    assert!(GWClass::parse(&k, "<1,").is_err());
}

#[test]
fn classification_matches_isometry_over_gf3_and_gf5() {
    for q in [3u64, 5] {
        let k = Field::gf(q).unwrap();
        let t = Tables::new(&k);
        let units: Vec<u8> = (1..q as u8).collect();
        for n in 1..=3 {
            let forms = multisets(&units, n);
            for a in &forms {
                for b in &forms {
                    let ea: Vec<Elem> = a.iter().map(|&i| t.elems[i as usize].clone()).collect();
                    let eb: Vec<Elem> = b.iter().map(|&i| t.elems[i as usize].clone()).collect();
                    let engine = GWClass::diagonal(&k, &ea)
                        .unwrap()
                        .eq_gw(&GWClass::diagonal(&k, &eb).unwrap())
                        .unwrap();
                    assert_eq!(engine, t.isometric(a, b), "{a:?} vs {b:?} over GF({q})");
                }
            }
        }
    }
}

fn fields() -> Vec<Field> {
    ["GF(3)", "GF(5)", "GF(9)", "GF(7)"].iter().map(|d| make_field(d).unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn n_epsilon_is_multiplicative(m in 0i64..6, n in 0i64..6, i in 0usize..4) {
        let k = &fields()[i];
        let lhs = GWClass::n_epsilon(m * n, k).unwrap();
        let rhs = GWClass::n_epsilon(m, k).unwrap().mul(&GWClass::n_epsilon(n, k).unwrap()).unwrap();
        prop_assert!(lhs.eq_gw(&rhs).unwrap());
    }

    #[test]
    fn hyperbolic_absorbs_units(seed in any::<u64>(), i in 0usize..4) {
        let k = &fields()[i];
        let mut rng = sample::rng(seed);
        let a = sample::unit(k, &mut rng).unwrap();
        let h = GWClass::hyperbolic(k);
        prop_assert!(h.mul(&GWClass::angle(k, &a).unwrap()).unwrap().eq_gw(&h).unwrap());
    }

    #[test]
    fn witt_cancellation(seed in any::<u64>(), i in 0usize..4) {
        let k = &fields()[i];
        let mut rng = sample::rng(seed);
        let p = sample::gw(k, 3, &mut rng).unwrap();
        let q = sample::gw(k, 3, &mut rng).unwrap();
        let r = sample::gw(k, 3, &mut rng).unwrap();
        prop_assert_eq!(p.add(&r).unwrap().eq_gw(&q.add(&r).unwrap()).unwrap(), p.eq_gw(&q).unwrap());
    }

    #[test]
    fn rational_forms_mod_hyperbolic(a in 1i64..30, b in 1i64..30) {
        let q = make_field("Q").unwrap();
        let x = form(&q, &[a, -a]);
        prop_assert!(x.eq_witt(&GWClass::zero(&q)).unwrap());
        let y = form(&q, &[a, b]);
        prop_assert!(y.eq_gw(&form(&q, &[b, a])).unwrap());
        prop_assert!(y.eq_gw(&form(&q, &[a * 4, b * 9])).unwrap());
    }
}
