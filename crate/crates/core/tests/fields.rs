mod common;

use mwt::field::embed::Embedding;
use mwt::field::factor::{factor, is_irreducible, roots};
use mwt::field::parse::{make_field, parse_elem};
use mwt::field::place::{places_of_support, PlaceKind};
use mwt::field::tensor::{tensor_decompose, SimpleExtension};
use mwt::field::{poly, Elem, Field, Poly};
use mwt::{sample, Error};

use common::poly_in;
use proptest::prelude::*;

fn elem(k: &Field, s: &str) -> Elem {
    parse_elem(k, s).unwrap()
}

#[test]
fn gf9_has_characteristic_three() {
    let k = make_field("GF(9)").unwrap();
    assert_eq!(k.characteristic(), 3);
    assert_eq!(k.order(), Some(9));
    assert_eq!(k.elements().unwrap().len(), 9);
}

#[test]
fn quadratic_extension_of_gf3_has_nine_elements() {
    let k = make_field("GF(3)[x]/(x^2+1)").unwrap();
    assert_eq!(k.order(), Some(9));
    let x = k.gen();
    assert!(k.add(&k.mul(&x, &x), &k.one()).is_zero());
}

#[test]
fn characteristic_two_is_rejected() {
    assert_eq!(make_field("GF(4)").unwrap_err(), Error::CharacteristicTwo);
    assert_eq!(make_field("GF(2)").unwrap_err(), Error::CharacteristicTwo);
    assert!(matches!(make_field("GF(6)"), Err(Error::NotPrimePower(6))));
}

#[test]
fn reducible_moduli_and_bad_descriptors_are_rejected() {
    assert!(matches!(make_field("GF(5)[x]/(x^2+1)"), Err(Error::Reducible(_))));
    assert!(matches!(make_field("GF(3"), Err(Error::Parse { .. })));
    assert!(matches!(make_field("R"), Err(Error::Parse { .. })));
}

#[test]
fn x2_plus_1_splits_over_gf5() {
    let k = Field::prime(5).unwrap();
    let f = factor(&k, &poly_in(&k, "x^2+1")).unwrap();
    let mut lin: Vec<Poly> = f.factors.iter().map(|(p, e)| {
        assert_eq!(*e, 1);
        p.clone()
    }).collect();
    lin.sort_by_key(|p| k.index_of(&p.coeffs()[0]));
    assert_eq!(lin, vec![poly_in(&k, "x-3"), poly_in(&k, "x-2")]);
    for r in roots(&k, &poly_in(&k, "x^2+1")).unwrap() {
        assert!(k.add(&k.mul(&r, &r), &k.one()).is_zero());
    }
}

#[test]
fn x2_plus_1_is_irreducible_over_gf3() {
    let k = Field::prime(3).unwrap();
    let f = poly_in(&k, "x^2+1");
    assert!(is_irreducible(&k, &f).unwrap());
    assert!(k.elements().unwrap().iter().all(|a| !poly::eval(&k, &f, a).is_zero()));
}

#[test]
fn cube_root_gives_a_triple_factor() {
    let root = make_field("GF(3)(s)[y]/(y^3-s)").unwrap();
    let s = root.constant(root.base().unwrap().gen());
    let f = Poly::new(vec![root.neg(&s), root.zero(), root.zero(), root.one()]);
    let fac = factor(&root, &f).unwrap();
    assert_eq!(fac.factors.len(), 1);
    let (p, e) = &fac.factors[0];
    assert_eq!(*e, 3);
    assert_eq!(p, &Poly::linear(&root, &root.gen()));
}

#[test]
fn gf9_over_gf3_splits_over_gf9() {
    let gf3 = Field::prime(3).unwrap();
    let gf9 = Field::gf(9).unwrap();
    let ext = SimpleExtension::from_generator(Embedding::natural(&gf3, &gf9).unwrap(), &gf9.gen()).unwrap();
    let comps = tensor_decompose(&ext, &Embedding::natural(&gf3, &gf9).unwrap()).unwrap();
    assert_eq!(comps.len(), 2);
    for c in &comps {
        assert_eq!(c.residue, gf9);
        assert_eq!(c.length, 1);
    }
}

#[test]
fn purely_inseparable_tensor_has_one_component_of_length_three() {
    let f = make_field("GF(3)(s)[x]/(x^3-s)").unwrap();
    let ext = SimpleExtension::structural(&f).unwrap();
    let to_l = ext.base_embedding().clone().then(ext.to_field().clone());
    let comps = tensor_decompose(&ext, &to_l).unwrap();
    assert_eq!(comps.len(), 1);
    assert_eq!(comps[0].length, 3);
    assert_eq!(comps[0].degree(), 1);
}

#[test]
fn trivial_tensor_is_the_base() {
    let e = Field::prime(7).unwrap();
    let ext = SimpleExtension::trivial(&e).unwrap();
    let comps = tensor_decompose(&ext, &Embedding::identity(&e)).unwrap();
    assert_eq!(comps.len(), 1);
    assert_eq!(comps[0].length, 1);
    assert_eq!(comps[0].residue, e);
}

#[test]
fn trace_and_norm_in_gf9() {
    let gf3 = Field::prime(3).unwrap();
    let gf9 = Field::gf(9).unwrap();
    let ext = SimpleExtension::from_generator(Embedding::natural(&gf3, &gf9).unwrap(), &gf9.gen()).unwrap();
    assert_eq!(ext.trace(&gf9.one()).unwrap(), gf3.from_i64(2));
    for u in gf9.elements().unwrap().into_iter().skip(1) {
        let n = ext.norm(&u).unwrap();
        let galois = gf9.pow(&u, 4).unwrap();
        assert_eq!(Embedding::natural(&gf3, &gf9).unwrap().apply(&n).unwrap(), galois);
    }
    let id = SimpleExtension::trivial(&gf3).unwrap();
    for a in gf3.elements().unwrap() {
        assert_eq!(id.trace(&a).unwrap(), a);
    }
}

fn support_labels(k: &Field, s: &str) -> Vec<String> {
    let mut v: Vec<String> = places_of_support(k, &elem(k, s))
        .unwrap()
        .iter()
        .map(|p| p.label())
        .collect();
    v.sort();
    v
}

#[test]
fn support_of_rational_functions() {
    let k = make_field("GF(3)(t)").unwrap();
    let t = support_labels(&k, "t");
    assert_eq!(t.len(), 2);
    assert!(t.iter().any(|l| l.contains("inf") || l.contains('∞')));
    assert_eq!(support_labels(&k, "(t^2+1)/(t-1)").len(), 3);
    assert!(support_labels(&k, "1").is_empty());
    assert!(places_of_support(&k, &k.zero()).is_err());
    let same_degree = places_of_support(&k, &elem(&k, "(t+1)/(t-1)")).unwrap();
    assert!(same_degree.iter().all(|p| matches!(p.kind(), PlaceKind::Finite(_))));
}

fn finite_fields() -> Vec<Field> {
    [3u64, 5, 7, 9, 25, 27].iter().map(|&q| Field::gf(q).unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(i in 0usize..6, seed in any::<u64>()) {
        let k = &finite_fields()[i];
        let mut rng = sample::rng(seed);
        let a = k.random_finite(&mut rng);
        let b = k.random_finite(&mut rng);
        let c = k.random_finite(&mut rng);
        prop_assert_eq!(k.mul(&a, &k.add(&b, &c)), k.add(&k.mul(&a, &b), &k.mul(&a, &c)));
        prop_assert_eq!(k.mul(&a, &b), k.mul(&b, &a));
        prop_assert!(k.add(&a, &k.neg(&a)).is_zero());
        if !a.is_zero() {
            prop_assert!(k.is_one(&k.mul(&a, &k.inv(&a).unwrap())));
        }
    }

    #[test]
    fn rational_function_arithmetic(seed in any::<u64>()) {
        let k = make_field("GF(5)(t)").unwrap();
        let mut rng = sample::rng(seed);
        let a = sample::unit(&k, &mut rng).unwrap();
        let b = sample::unit(&k, &mut rng).unwrap();
        let q = k.div(&a, &b).unwrap();
        prop_assert_eq!(k.mul(&q, &b), a);
    }

    #[test]
    fn factoring_is_multiplicative(seed in any::<u64>()) {
        let k = Field::prime(5).unwrap();
        let mut rng = sample::rng(seed);
        let p = sample::irreducible(&k, 2, &mut rng).unwrap();
        let q = sample::irreducible(&k, 3, &mut rng).unwrap();
        let pq = poly::mul(&k, &p, &q);
        let f = factor(&k, &pq).unwrap();
        let mut got: Vec<Poly> = f.factors.iter().map(|(g, _)| g.clone()).collect();
        got.sort_by_key(|g| g.deg());
        prop_assert_eq!(got, vec![p, q]);
        prop_assert_eq!(f.expand(&k), pq);
    }

    #[test]
    fn tensor_degrees_add_up(i in 0usize..3, seed in any::<u64>()) {
        let (e, big, l) = [(3u64, 9u64, 9u64), (3, 27, 9), (5, 25, 25)][i];
        let e = Field::gf(e).unwrap();
        let big = Field::gf(big).unwrap();
        let l = Field::gf(l).unwrap();
        let mut rng = sample::rng(seed);
        // Any element generating F over E.
        let theta = loop {
            let a = big.random_finite(&mut rng);
            let ext = SimpleExtension::from_generator(Embedding::natural(&e, &big).unwrap(), &a);
            if let Ok(x) = ext {
                if x.degree() == big.dim_over_ground() / e.dim_over_ground() {
                    break x;
                }
            }
        };
        let comps = tensor_decompose(&theta, &Embedding::natural(&e, &l).unwrap()).unwrap();
        let total: usize = comps.iter().map(|c| c.length as usize * c.degree()).sum();
        prop_assert_eq!(total, theta.degree());
    }

    #[test]
    fn support_of_a_product(seed in any::<u64>()) {
        let k = make_field("GF(3)(t)").unwrap();
        let mut rng = sample::rng(seed);
        let f = sample::unit(&k, &mut rng).unwrap();
        let g = sample::unit(&k, &mut rng).unwrap();
        let sf = places_of_support(&k, &f).unwrap();
        let sg = places_of_support(&k, &g).unwrap();
        for p in places_of_support(&k, &k.mul(&f, &g)).unwrap() {
            prop_assert!(sf.contains(&p) || sg.contains(&p));
        }
    }
}
