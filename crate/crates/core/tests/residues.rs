mod common;

use common::poly_in;
use mwt::field::parse::{make_field, parse_elem};
use mwt::field::place::Place;
use mwt::field::{Elem, Field};
use mwt::residues::{self, Coresidues};
use mwt::{sample, MWElement, Projection};
use proptest::prelude::*;

fn place(f: &Field, pi: &str) -> Place {
    Place::finite(f, poly_in(f.base().unwrap(), pi)).unwrap()
}

fn mw(f: &Field, s: &str) -> MWElement {
    MWElement::parse(f, s).unwrap()
}

/// Restriction of a constant class to `F(t)`.
fn restrict(f: &Field, c: &MWElement) -> MWElement {
    c.map_entries(f, |u| Ok(f.constant(u.clone()))).unwrap()
}

#[test]
fn residue_of_uniformizer_times_unit() {
    let f = make_field("GF(5)(t)").unwrap();
    let v = place(&f, "x");
    let kappa = v.residue_field().clone();
    for u in ["t+2", "3", "(t^2+1)/(t+3)"] {
        let x = mw(&f, &format!("[t,{u}]"));
        let ubar = v.reduce(&parse_elem(&f, u).unwrap()).unwrap();
        let r = residues::theta(&x, &v).unwrap().1;
        assert!(r.eq_in(&MWElement::bracket(&kappa, &ubar).unwrap()).unwrap(), "{u}");
        assert!(residues::theta(&mw(&f, &format!("[{u}]")), &v).unwrap().1.is_zero().unwrap());
    }
}

#[test]
fn residue_carries_the_place_twist() {
    let f = make_field("GF(3)(t)").unwrap();
    let r = residues::residue(&mw(&f, "[t]"), &place(&f, "x")).unwrap();
    assert!(!r.twist().is_trivial());
    assert!(r.untwisted().eq_in(&MWElement::one(&place(&f, "x").residue_field().clone())).unwrap());
}

#[test]
fn specialization_examples() {
    let f = make_field("GF(5)(t)").unwrap();
    let v = place(&f, "x");
    let k = v.residue_field().clone();
    assert!(residues::specialize(&mw(&f, "[t+1]"), &v).unwrap().is_zero().unwrap());
    for a in 1..5 {
        let s = residues::specialize(&mw(&f, &format!("[t+{a}]")), &v).unwrap();
        assert!(s.eq_in(&MWElement::bracket(&k, &k.from_i64(a)).unwrap()).unwrap());
    }
    assert!(residues::specialize(&mw(&f, "[t]"), &v).is_err());
}

#[test]
fn coresidue_of_one_at_a_rational_point() {
    let f = make_field("GF(3)(t)").unwrap();
    let x = place(&f, "x-1");
    let kappa = x.residue_field().clone();
    let g = residues::coresidue(&MWElement::one(&kappa), &x).unwrap();
    assert!(g.eq_in(&mw(&f, "[t-1]")).unwrap());
    let fin = residues::finite_support(&g).unwrap();
    assert_eq!(fin, vec![x.clone()]);
    assert!(residues::theta(&g, &x).unwrap().1.eq_in(&MWElement::one(&kappa)).unwrap());
}

#[test]
fn reconstruct_examples() {
    let f = make_field("GF(3)(t)").unwrap();
    let base = f.base().unwrap().clone();
    let mut cores = Coresidues::new();
    let c = MWElement::parse(&base, "[2]").unwrap();
    let rec = residues::milnor_reconstruct(&restrict(&f, &c), &mut cores).unwrap();
    assert!(rec.constant.eq_in(&c).unwrap());
    assert!(rec.residues.is_empty());

    let rec = residues::milnor_reconstruct(&mw(&f, "[t]"), &mut cores).unwrap();
    assert!(rec.constant.is_zero().unwrap());
    assert_eq!(rec.residues.len(), 1);
    let (y, r) = &rec.residues[0];
    assert_eq!(y, &place(&f, "x"));
    assert!(r.eq_in(&MWElement::one(y.residue_field())).unwrap());
}

#[test]
fn padic_residue_over_q() {
    let q = make_field("Q").unwrap();
    let v = Place::padic(5).unwrap();
    let x = MWElement::parse(&q, "[5,2]").unwrap();
    let kappa = v.residue_field().clone();
    let r = residues::theta(&x, &v).unwrap().1;
    assert!(r.eq_in(&MWElement::bracket(&kappa, &kappa.from_i64(2)).unwrap()).unwrap());
}

/// `(-1)^{ab} g^a / f^b` reduced at the place, with `a = v(f)` and `b = v(g)`.
fn tame_symbol(v: &Place, f: &Elem, g: &Elem) -> Elem {
    let k = v.field();
    let a = v.valuation(f).unwrap();
    let b = v.valuation(g).unwrap();
    let mut x = k.div(&k.pow(g, a).unwrap(), &k.pow(f, b).unwrap()).unwrap();
    if (a * b) % 2 != 0 {
        x = k.neg(&x);
    }
    v.reduce(&x).unwrap()
}

fn ratfields() -> Vec<Field> {
    ["GF(3)(t)", "GF(5)(t)"].iter().map(|d| make_field(d).unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn milnor_residue_is_the_tame_symbol(seed in any::<u64>(), i in 0usize..2, deg in 1usize..3) {
        let f = &ratfields()[i];
        let mut rng = sample::rng(seed);
        let pi = sample::irreducible(f.base().unwrap(), deg, &mut rng).unwrap();
        let v = Place::finite(f, pi.clone()).unwrap();
        let pie = f.from_poly(pi);
        let g = f.mul(&pie, &sample::unit(f, &mut rng).unwrap());
        let h = sample::unit(f, &mut rng).unwrap();
        let x = MWElement::brackets(f, &[g.clone(), h.clone()]).unwrap();
        let r = residues::theta(&x, &v).unwrap().1;
        let kappa = v.residue_field();
        let expect = MWElement::bracket(kappa, &tame_symbol(&v, &g, &h)).unwrap();
        prop_assert!(r.eq_proj(&expect, Projection::Milnor).unwrap());
    }

    #[test]
    fn reconstruction_is_the_identity(seed in any::<u64>(), i in 0usize..2, n in 0i64..3) {
        let f = &ratfields()[i];
        let mut rng = sample::rng(seed);
        let gamma = sample::mw(f, n, 2, &mut rng).unwrap();
        let mut cores = Coresidues::new();
        let rec = residues::milnor_reconstruct(&gamma, &mut cores).unwrap();
        prop_assert!(rec.assemble(f, &mut cores).unwrap().eq_in(&gamma).unwrap());
    }

    #[test]
    fn coresidue_is_a_section(seed in any::<u64>(), deg in 1usize..4) {
        let f = &ratfields()[0];
        let mut rng = sample::rng(seed);
        let pi = sample::irreducible(f.base().unwrap(), deg, &mut rng).unwrap();
        let x = Place::finite(f, pi).unwrap();
        let beta = sample::mw(x.residue_field(), 0, 2, &mut rng).unwrap();
        let g = residues::coresidue(&beta, &x).unwrap();
        prop_assert!(residues::theta(&g, &x).unwrap().1.eq_in(&beta).unwrap());
        for y in residues::finite_support(&g).unwrap() {
            if y != x {
                prop_assert!(residues::theta(&g, &y).unwrap().1.is_zero().unwrap());
            }
        }
    }

    #[test]
    fn constants_are_unramified(seed in any::<u64>(), n in 0i64..3) {
        let f = &ratfields()[1];
        let base = f.base().unwrap();
        let mut rng = sample::rng(seed);
        let c = sample::mw(base, n, 2, &mut rng).unwrap();
        let pi = sample::irreducible(base, 2, &mut rng).unwrap();
        let v = Place::finite(f, pi).unwrap();
        let (_, r) = residues::theta(&restrict(f, &c), &v).unwrap();
        prop_assert!(r.is_zero().unwrap());
        let back = residues::specialize(&restrict(f, &c), &Place::finite(f, poly_in(base, "x")).unwrap()).unwrap();
        prop_assert!(back.eq_in(&c).unwrap());
    }
}
