mod common;

use common::poly_in;
use mwt::field::place::{Place, PlaceKind};
use mwt::field::Field;
use mwt::harness::{finite_morphisms, random_closed, random_generic};
use mwt::residues;
use mwt::rost_schmid::{self as rs, Cycle, Morphism, Point, Scheme};
use mwt::transfers::Transfers;
use mwt::{sample, MWElement, Projection};
use proptest::prelude::*;

fn gf(q: u64) -> Field {
    Field::gf(q).unwrap()
}

fn constant_cycle(x: &Scheme, c: &MWElement) -> Cycle {
    let point = Cycle::generic(&Scheme::point(x.base()), c).unwrap();
    rs::pullback(&Morphism::structure(x).unwrap(), &point).unwrap()
}

#[test]
fn constant_classes_are_cycles() {
    let mut rng = sample::rng(4);
    for x in [Scheme::affine_line(&gf(3)), Scheme::projective_line(&gf(5))] {
        for n in -1..=2 {
            let c = sample::mw(x.base(), n, 2, &mut rng).unwrap();
            assert!(rs::differential(&constant_cycle(&x, &c)).unwrap().is_zero());
        }
    }
}

#[test]
fn differential_of_t_on_the_affine_line() {
    let k = gf(3);
    let x = Scheme::affine_line(&k);
    let d = rs::differential(&Cycle::parse(&x, "{ gen: [t] }").unwrap()).unwrap();
    let expect = Cycle::closed(&x, 1, vec![(PlaceKind::Finite(poly_in(&k, "x")), MWElement::one(&k))]).unwrap();
    assert!(d.eq_proj(&expect, Projection::Full).unwrap());
}

#[test]
fn differential_of_a_coresidue_is_a_single_entry() {
    let k = gf(3);
    let x = Scheme::affine_line(&k);
    let mut rng = sample::rng(11);
    for deg in 1..=3 {
        let pi = sample::irreducible(&k, deg, &mut rng).unwrap();
        let p = Place::finite(x.function_field(), pi.clone()).unwrap();
        let beta = sample::mw(p.residue_field(), 0, 2, &mut rng).unwrap();
        let g = residues::coresidue(&beta, &p).unwrap();
        let d = rs::differential(&Cycle::generic(&x, &g.untwisted()).unwrap()).unwrap();
        let expect = Cycle::closed(&x, 1, vec![(PlaceKind::Finite(pi), beta)]).unwrap();
        assert!(d.eq_proj(&expect, Projection::Full).unwrap(), "deg {deg}: {d}");
    }
}

#[test]
fn squaring_collapses_opposite_points() {
    let k = gf(5);
    let p1 = Scheme::projective_line(&k);
    let f = Morphism::power(&p1, 2).unwrap();
    let mut ctx = Transfers::new();
    let one = MWElement::one(&k);
    let c = Cycle::closed(
        &p1,
        1,
        vec![
            (PlaceKind::Finite(poly_in(&k, "x-2")), one.clone()),
            (PlaceKind::Finite(poly_in(&k, "x+2")), one.clone()),
        ],
    )
    .unwrap();
    let push = rs::pushforward(&mut ctx, &f, &c).unwrap();
    let points: Vec<&Point> = push.entries().map(|(p, _)| p).collect();
    assert_eq!(points, vec![&Point::Closed(PlaceKind::Finite(poly_in(&k, "x-4")))]);
    // Each of the two points maps isomorphically onto `(t - 4)`, so the entry is a sum of two
    // rank one forms.
    let (_, v) = push.entries().next().unwrap();
    let gw = mwt::gw::GWClass::from_mw(v).unwrap();
    assert_eq!(gw.rank(), 2);
}

/// Over `(t^2 + t + 1)` the squaring map induces the Frobenius on `GF(25)`, which the
/// push-forward must apply even though source and target residue fields coincide.
#[test]
fn squaring_respects_a_frobenius_residue_map() {
    let p1 = Scheme::projective_line(&gf(5));
    let f = Morphism::power(&p1, 2).unwrap();
    let c = Cycle::parse(&p1, "{ gen: [2, t^2 + 2*t + 4] - 2*[(3*t^2 + 3*t + 3)/(t + 2), 2*t + 3] }").unwrap();
    let mut ctx = Transfers::new();
    let lhs = rs::differential(&rs::pushforward(&mut ctx, &f, &c).unwrap()).unwrap();
    let rhs = rs::pushforward(&mut ctx, &f, &rs::differential(&c).unwrap()).unwrap();
    assert!(lhs.eq_proj(&rhs, Projection::Full).unwrap(), "{lhs} vs {rhs}");
}

#[test]
fn identities_act_trivially() {
    let mut rng = sample::rng(6);
    let x = Scheme::projective_line(&gf(5));
    let c = random_generic(&x, 1, &mut rng).unwrap();
    let id = Morphism::power(&x, 1).unwrap();
    let mut ctx = Transfers::new();
    assert!(rs::pushforward(&mut ctx, &id, &c).unwrap().eq_proj(&c, Projection::Full).unwrap());
    let bc = Morphism::base_change(&x, &gf(5)).unwrap();
    assert!(rs::pullback(&bc, &c).unwrap().eq_proj(&c, Projection::Full).unwrap());
    assert!(rs::gw_action(&gf(5).one(), &c).unwrap().eq_proj(&c, Projection::Full).unwrap());
}

#[test]
fn boundary_away_from_the_support_vanishes() {
    let k = gf(3);
    let x = Scheme::affine_line(&k);
    let c = Cycle::parse(&x, "{ gen: [t] }").unwrap();
    let z = [PlaceKind::Finite(poly_in(&k, "x-1")), PlaceKind::Finite(poly_in(&k, "x^2+1"))];
    assert!(rs::boundary(&c, &z).unwrap().is_zero());
    let at_origin = rs::boundary(&c, &[PlaceKind::Finite(poly_in(&k, "x"))]).unwrap();
    assert!(!at_origin.is_zero());
}

#[test]
fn a0_of_a_point_is_the_field() {
    let k = gf(9);
    let x = Scheme::point(&k);
    let mut rng = sample::rng(8);
    let v = sample::mw(&k, 1, 2, &mut rng).unwrap();
    let m = rs::a0(&Cycle::generic(&x, &v).unwrap()).unwrap();
    assert!(m.unramified);
    assert!(m.constant.unwrap().eq_in(&v).unwrap());
}

#[test]
fn a0_of_the_affine_line_has_constant_witnesses() {
    let k = gf(5);
    let x = Scheme::affine_line(&k);
    let mut rng = sample::rng(10);
    for n in 0..=2 {
        let c = sample::mw(&k, n, 2, &mut rng).unwrap();
        let m = rs::a0(&constant_cycle(&x, &c)).unwrap();
        assert!(m.unramified);
        assert!(m.constant.unwrap().eq_in(&c).unwrap());
    }
    let ramified = rs::a0(&Cycle::parse(&x, "{ gen: [t] }").unwrap()).unwrap();
    assert!(!ramified.unramified);
    assert!(ramified.constant.is_none());
}

#[test]
fn cycle_literals() {
    let x = Scheme::projective_line(&gf(5));
    let c = Cycle::parse(&x, "{ (t^2+2): 1, inf: -2 }").unwrap();
    assert_eq!(c.codim(), 1);
    assert!(Cycle::parse(&x, &c.to_string()).unwrap().eq_proj(&c, Projection::Full).unwrap());
    assert!(Cycle::parse(&x, "{ (t^2+1): 1 }").is_err());
    assert!(Cycle::parse(&x, "gen: [t]").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn pushforward_commutes_with_d(seed in any::<u64>(), i in 0usize..2, n in -1i64..3) {
        let f = finite_morphisms().unwrap().remove(i);
        let mut rng = sample::rng(seed);
        let mut ctx = Transfers::new();
        let c = random_generic(&f.source(), n, &mut rng).unwrap();
        let lhs = rs::differential(&rs::pushforward(&mut ctx, &f, &c).unwrap()).unwrap();
        let rhs = rs::pushforward(&mut ctx, &f, &rs::differential(&c).unwrap()).unwrap();
        prop_assert!(lhs.eq_proj(&rhs, Projection::Full).unwrap());
    }

    #[test]
    fn pullback_commutes_with_d(seed in any::<u64>(), n in -1i64..3) {
        let p3 = Scheme::projective_line(&gf(3));
        let g = Morphism::base_change(&p3, &gf(9)).unwrap();
        let mut rng = sample::rng(seed);
        let c = random_generic(&p3, n, &mut rng).unwrap();
        let lhs = rs::pullback(&g, &rs::differential(&c).unwrap()).unwrap();
        let rhs = rs::differential(&rs::pullback(&g, &c).unwrap()).unwrap();
        prop_assert!(lhs.eq_proj(&rhs, Projection::Full).unwrap());
    }

    #[test]
    fn gw_action_commutes_with_d(seed in any::<u64>(), n in -1i64..3) {
        let x = Scheme::projective_line(&gf(5));
        let mut rng = sample::rng(seed);
        let c = random_generic(&x, n, &mut rng).unwrap();
        let a = sample::unit(x.base(), &mut rng).unwrap();
        let lhs = rs::differential(&rs::gw_action(&a, &c).unwrap()).unwrap();
        let rhs = rs::gw_action(&a, &rs::differential(&c).unwrap()).unwrap();
        prop_assert!(lhs.eq_proj(&rhs, Projection::Full).unwrap());
    }

    #[test]
    fn pushforward_is_additive(seed in any::<u64>(), n in 0i64..2) {
        let f = finite_morphisms().unwrap().remove(0);
        let mut rng = sample::rng(seed);
        let mut ctx = Transfers::new();
        let a = random_closed(&f.source(), n, &mut rng).unwrap();
        let b = random_closed(&f.source(), n, &mut rng).unwrap();
        let lhs = rs::pushforward(&mut ctx, &f, &a.add(&b).unwrap()).unwrap();
        let rhs = rs::pushforward(&mut ctx, &f, &a).unwrap().add(&rs::pushforward(&mut ctx, &f, &b).unwrap()).unwrap();
        prop_assert!(lhs.eq_proj(&rhs, Projection::Full).unwrap());
    }
}
