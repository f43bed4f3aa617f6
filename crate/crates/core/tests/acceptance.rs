//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and exits nonzero if
//! any criterion fails or overruns its time budget.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{multisets, Tables};
use mwt::field::embed::Embedding;
use mwt::field::factor::factor;
use mwt::field::parse::make_field;
use mwt::field::place::Place;
use mwt::field::tensor::SimpleExtension;
use mwt::field::{poly, Elem, Field, Poly};
use mwt::gw::{scharlau_transfer, GWClass};
use mwt::harness::{self, base_change_catalog, catalog_extension, finite_morphisms, random_closed, random_generic, Config, Status};
use mwt::mw_corr::{self, EtaleScheme};
use mwt::residues::{self, Coresidues};
use mwt::rost_schmid::{self as rs, Cycle, Morphism, Scheme};
use mwt::transfers::{self, primitive_extension, Mutation, Transfers};
use mwt::{sample, MWElement, Projection};
use rand::Rng;

const PROJECTIONS: [Projection; 3] = [Projection::Full, Projection::Milnor, Projection::Witt];

/// `Ok` carries a summary, `Err` a witness.
type Verdict = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($w:tt)*) => {
        if !$cond {
            return Err(format!($($w)*));
        }
    };
}

/// Unwraps an engine result, turning errors into a failing verdict.
macro_rules! tri {
    ($e:expr) => {
        $e.map_err(|e| format!("engine error: {e}"))?
    };
}

struct Criterion {
    name: &'static str,
    budget: Duration,
    run: fn() -> Verdict,
}

fn gf(q: u64) -> Field {
    Field::gf(q).unwrap()
}

fn units(t: &Tables) -> Vec<u8> {
    (1..t.q as u8).collect()
}

fn diagonal(k: &Field, t: &Tables, entries: &[u8]) -> GWClass {
    let elems: Vec<Elem> = entries.iter().map(|&i| t.elems[i as usize].clone()).collect();
    GWClass::diagonal(k, &elems).unwrap()
}

// ---- 1 ----

fn gw_tables() -> Verdict {
    let mut forms = 0;
    for q in [3, 5, 7, 9] {
        let k = gf(q);
        let t = Tables::new(&k);
        let squares = t.squares();
        let units = units(&t);
        ensure!((q as usize - 1) / squares.len() == 2, "GF({q}) has {} square classes", (q as usize - 1) / squares.len());
        let mut reps: Vec<GWClass> = Vec::new();
        for &u in &units {
            let a = diagonal(&k, &t, &[u]);
            if !reps.iter().any(|r| r.eq_gw(&a).unwrap()) {
                reps.push(a);
            }
        }
        ensure!(reps.len() == 2, "engine finds {} rank one classes over GF({q})", reps.len());
        let ns = *units.iter().find(|u| !squares.contains(u)).unwrap();
        for n in 1..=4 {
            // Representatives `⟨ns, .., ns, 1, .., 1⟩` indexed by the number of nonsquare entries.
            let shapes: Vec<Vec<u8>> = (0..=n).map(|j| [vec![ns; j], vec![1; n - j]].concat()).collect();
            let mut class_of = Vec::new();
            for j in 0..=n {
                let c = (0..j).find(|&i| t.isometric(&shapes[i], &shapes[j])).map_or(j, |i| class_of[i]);
                class_of.push(c);
            }
            let engine_shapes: Vec<GWClass> = shapes.iter().map(|s| diagonal(&k, &t, s)).collect();
            for i in 0..=n {
                for j in 0..=n {
                    let e = tri!(engine_shapes[i].eq_gw(&engine_shapes[j]));
                    ensure!(e == (class_of[i] == class_of[j]), "GF({q}): {:?} vs {:?}", shapes[i], shapes[j]);
                }
            }
            // Engine key (rank, determinant square class) against the brute-force class.
            let mut pairs: Vec<(bool, usize)> = Vec::new();
            for form in multisets(&units, n) {
                let j = form.iter().filter(|u| !squares.contains(u)).count();
                ensure!(t.isometric(&form, &shapes[j]), "GF({q}): {form:?} is not isometric to {:?}", shapes[j]);
                let g = diagonal(&k, &t, &form);
                ensure!(tri!(g.eq_gw(&engine_shapes[j])), "GF({q}): engine separates {form:?} from {:?}", shapes[j]);
                let key = tri!(k.is_square_finite(&g.determinant()));
                pairs.push((key, class_of[j]));
                forms += 1;
            }
            pairs.sort_unstable();
            pairs.dedup();
            let keys = pairs.iter().map(|p| p.0).collect::<std::collections::BTreeSet<_>>().len();
            let classes = pairs.iter().map(|p| p.1).collect::<std::collections::BTreeSet<_>>().len();
            ensure!(
                pairs.len() == keys && pairs.len() == classes,
                "GF({q}), rank {n}: rank and discriminant do not match isometry classes: {pairs:?}"
            );
        }
    }
    Ok(format!("{forms} forms classified"))
}

// ---- 2 ----

fn witt_structure() -> Verdict {
    let mut out = Vec::new();
    for q in [3u64, 5, 7, 9] {
        let k = gf(q);
        let t = Tables::new(&k);
        let units = units(&t);
        let mut anisotropic: Vec<Vec<u8>> = Vec::new();
        for n in 0..=3 {
            for form in multisets(&units, n) {
                if t.isotropic(&form) || anisotropic.iter().any(|a| t.isometric(a, &form)) {
                    continue;
                }
                ensure!(n <= 2, "GF({q}): anisotropic form {form:?} of rank 3");
                anisotropic.push(form);
            }
        }
        let minus_one = t.neg(1);
        let hyperbolic = |m: usize| m % 2 == 0 && t.isometric(&vec![1; m], &[1, minus_one].repeat(m / 2));
        let exp = (1..=8).find(|&m| hyperbolic(m)).unwrap_or(0);
        let expected = if q % 4 == 3 { 4 } else { 2 };
        ensure!(anisotropic.len() == 4, "W(GF({q})) has order {}", anisotropic.len());
        ensure!(exp == expected, "W(GF({q})) has exponent {exp}");
        // The engine's Witt equivalence on the same forms.
        let mut engine_classes: Vec<GWClass> = Vec::new();
        for n in 0..=2 {
            for form in multisets(&units, n) {
                let g = diagonal(&k, &t, &form);
                if !engine_classes.iter().any(|c| c.eq_witt(&g).unwrap()) {
                    engine_classes.push(g);
                }
            }
        }
        let zero = GWClass::zero(&k);
        let engine_exp = (1..=8).find(|&m| GWClass::one(&k).scale(m).eq_witt(&zero).unwrap()).unwrap_or(0);
        ensure!(engine_classes.len() == 4, "engine: W(GF({q})) has order {}", engine_classes.len());
        ensure!(engine_exp == expected as i64, "engine: W(GF({q})) has exponent {engine_exp}");
        out.push(format!("q={q}: exponent {exp}"));
    }
    Ok(out.join(", "))
}

// ---- 3 ----

fn ratfields() -> Vec<Field> {
    vec![make_field("GF(3)(t)").unwrap(), make_field("GF(5)(t)").unwrap()]
}

fn split_exact() -> Verdict {
    let mut rng = sample::rng(3);
    let mut count = 0;
    for ff in ratfields() {
        let k = ff.base().unwrap().clone();
        for n in 0..=2 {
            for _ in 0..100 {
                let gamma = tri!(sample::mw(&ff, n, 2, &mut rng));
                let mut cores = Coresidues::new();
                let rec = tri!(residues::milnor_reconstruct(&gamma, &mut cores));
                let back = tri!(rec.assemble(&ff, &mut cores));
                ensure!(tri!(back.eq_in(&gamma)), "{ff}, γ = {gamma}: reassembled as {back}");
                count += 1;
            }
        }
        let emb = Embedding::natural(&k, &ff).unwrap();
        for _ in 0..100 {
            let n = rng.gen_range(0..=2);
            let c = tri!(sample::mw(&k, n, 2, &mut rng));
            let rc = tri!(c.map_field(&emb));
            let mut places = tri!(residues::finite_support(&rc));
            for d in 1..=3 {
                places.push(tri!(Place::finite(&ff, tri!(sample::irreducible(&k, d, &mut rng)))));
            }
            for y in places {
                let r = tri!(residues::residue(&rc, &y));
                ensure!(tri!(r.is_zero()), "{ff}, c = {c}: residue {r} at {}", y.label());
            }
        }
    }
    Ok(format!("{count} reconstructions, 200 restrictions"))
}

// ---- 4 ----

fn coresidue_contract() -> Verdict {
    let ff = make_field("GF(3)(t)").unwrap();
    let k = ff.base().unwrap().clone();
    let mut rng = sample::rng(4);
    for i in 0..50 {
        let x = tri!(Place::finite(&ff, tri!(sample::irreducible(&k, 1 + i % 3, &mut rng))));
        let n = rng.gen_range(-1..=2);
        let beta = tri!(sample::mw(x.residue_field(), n, 2, &mut rng));
        let gamma = tri!(residues::coresidue(&beta, &x));
        let back = tri!(residues::theta(&gamma, &x)).1;
        ensure!(tri!(back.eq_in(&beta)), "x = {}, β = {beta}: ∂_x ρ_x β = {back}", x.label());
        for y in tri!(residues::finite_support(&gamma)) {
            if y != x {
                let r = tri!(residues::residue(&gamma, &y));
                ensure!(tri!(r.is_zero()), "x = {}, β = {beta}: residue {r} at {}", x.label(), y.label());
            }
        }
    }
    Ok("50 pairs".into())
}

// ---- 5 ----

fn functoriality() -> Verdict {
    let mut rng = sample::rng(5);
    let mut chains = 0;
    for (p, top) in [(3u64, 6u32), (5, 4)] {
        let divisors: Vec<u32> = (1..=top).filter(|d| top % d == 0).collect();
        for &a in &divisors {
            for &b in divisors.iter().filter(|&&b| b > a && b % a == 0) {
                for &c in divisors.iter().filter(|&&c| c > b && c % b == 0) {
                    let (e, k, f) = (gf(p.pow(a)), gf(p.pow(b)), gf(p.pow(c)));
                    let direct = tri!(primitive_extension(&e, &f));
                    let lower = tri!(primitive_extension(&e, &k));
                    let upper = tri!(primitive_extension(&k, &f));
                    let mut ctx = Transfers::new();
                    for n in -2..=2 {
                        for _ in 0..10 {
                            let beta = tri!(sample::mw(&f, n, 2, &mut rng));
                            for proj in PROJECTIONS {
                                let ok = tri!(transfers::functoriality_check(&mut ctx, &direct, &lower, &upper, &beta, proj));
                                ensure!(ok, "{e} ⊂ {k} ⊂ {f}, {proj:?}, β = {beta}");
                            }
                        }
                    }
                    chains += 1;
                }
            }
        }
    }
    ensure!(chains == 3, "expected 3 chains, found {chains}");
    Ok(format!("{chains} chains"))
}

// ---- 6 ----

fn unicity() -> Verdict {
    let mut ctx = Transfers::new();
    let mut checks = 0;
    for (e, f) in [(3, 9), (5, 25)] {
        let (e, f) = (gf(e), gf(f));
        let q = e.order().unwrap();
        let emb = Embedding::natural(&e, &f).unwrap();
        let elems = tri!(f.elements());
        let gens = elems.iter().filter(|x| f.pow(x, q as i64).unwrap() != **x);
        for theta in gens {
            let ext = tri!(SimpleExtension::from_generator(emb.clone(), theta));
            for a in elems.iter().filter(|a| !a.is_zero()) {
                let (bt, sch, eq) = tri!(transfers::unicity_check(&mut ctx, &ext, a));
                ensure!(eq, "{f}/{e}, θ = {}, a = {}: {bt} ≠ {sch}", f.format(theta), f.format(a));
                checks += 1;
            }
        }
    }
    let q = Field::rationals();
    let qi = make_field("Q[i]/(i^2+1)").unwrap();
    let emb = Embedding::natural(&q, &qi).unwrap();
    let gaussian = |x: i64, y: i64| qi.add(&qi.from_i64(x), &qi.mul(&qi.from_i64(y), &qi.gen()));
    let mut scalars: Vec<Elem> = Vec::new();
    for x in -1..=1 {
        for y in -1..=1 {
            if (x, y) != (0, 0) {
                scalars.push(gaussian(x, y));
            }
        }
    }
    scalars.extend([gaussian(2, 0), gaussian(1, 2), gaussian(3, -2)]);
    for x in -2..=2 {
        for y in [-2, -1, 1, 2] {
            let theta = gaussian(x, y);
            let ext = tri!(SimpleExtension::from_generator(emb.clone(), &theta));
            for a in &scalars {
                let (bt, sch, eq) = tri!(transfers::unicity_check(&mut ctx, &ext, a));
                ensure!(eq, "{qi}/Q, θ = {}, a = {}: {bt} ≠ {sch}", qi.format(&theta), qi.format(a));
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} generator and scalar pairs"))
}

// ---- 7 ----

fn strong_base_change() -> Verdict {
    let expected: [&[(usize, u32)]; 4] = [&[(1, 1), (1, 1)], &[(3, 1)], &[(1, 1), (1, 1)], &[(1, 3)]];
    let mut rng = sample::rng(7);
    let mut ctx = Transfers::new();
    for ((ext, to_l), comps) in tri!(base_change_catalog()).iter().zip(expected) {
        let f = ext.field();
        let l = to_l.dst();
        let one = MWElement::one(f);
        let rep = tri!(transfers::verify_base_change(&mut ctx, ext, to_l, &one, Projection::Full));
        ensure!(rep.components == comps, "{f} ⊗ {l}: components {:?}", rep.components);
        ensure!(rep.equal, "{f} ⊗ {l}, β = 1: {} ≠ {}", rep.left, rep.right);
        if comps == [(1, 3)] {
            let weight = MWElement::n_eps(l, 3);
            ensure!(tri!(rep.right.eq_in(&weight)), "{f} ⊗ {l}: right side {} is not 3_ε", rep.right);
            ensure!(!tri!(rep.right.eq_in(&MWElement::from_int(l, 3))), "{f} ⊗ {l}: 3_ε collapses to 3");
        }
        for n in -1..=1 {
            for _ in 0..10 {
                let beta = tri!(sample::mw(f, n, 2, &mut rng));
                for proj in PROJECTIONS {
                    let rep = tri!(transfers::verify_base_change(&mut ctx, ext, to_l, &beta, proj));
                    ensure!(rep.equal, "{f} ⊗ {l}, {proj:?}, β = {beta}: {} ≠ {}", rep.left, rep.right);
                }
            }
        }
    }
    Ok("4 base changes".into())
}

// ---- 8 ----

fn projection_formulas() -> Verdict {
    let mut rng = sample::rng(8);
    let mut ctx = Transfers::new();
    let cfg = Config::default();
    for e in cfg.catalog.entries() {
        let ext = tri!(catalog_extension(e));
        let f = ext.field();
        for _ in 0..50 {
            let n = rng.gen_range(-1..=1);
            let a = tri!(sample::unit(e, &mut rng));
            let mu = tri!(sample::mw(f, n, 2, &mut rng));
            let b = tri!(sample::unit(f, &mut rng));
            let nu = tri!(sample::mw(e, n, 2, &mut rng));
            for proj in PROJECTIONS {
                let ok = tri!(transfers::projection_check_base(&mut ctx, &ext, &a, &mu, proj));
                ensure!(ok, "{f}/{e}, {proj:?}, a = {}, μ = {mu}", e.format(&a));
                let ok = tri!(transfers::projection_check_top(&mut ctx, &ext, &b, &nu, proj));
                ensure!(ok, "{f}/{e}, {proj:?}, a = {}, μ = {nu}", f.format(&b));
            }
        }
        if e.is_ratfunc() {
            let k = e.base().unwrap();
            for i in 0..50 {
                let pi = match i % 3 {
                    0 => Poly::x(k),
                    1 => Poly::linear(k, &k.one()),
                    _ => tri!(sample::irreducible(k, 2, &mut rng)),
                };
                let v = tri!(Place::finite(e, pi));
                let n = rng.gen_range(0..=2);
                let x = tri!(sample::mw(e, n, 2, &mut rng));
                for proj in PROJECTIONS {
                    let ok = tri!(transfers::restriction_square_check(&x, &v, f, proj));
                    ensure!(ok, "{f}/{e}, v = {}, {proj:?}, x = {x}", v.label());
                }
            }
        }
    }
    Ok(format!("{} extensions", cfg.catalog.entries().len()))
}

// ---- 9 ----

fn residue_compatibility() -> Verdict {
    let ff = make_field("GF(3)(t)").unwrap();
    let k = ff.base().unwrap().clone();
    let ext = tri!(catalog_extension(&ff));
    let f = ext.field().clone();
    let mut rng = sample::rng(9);
    let mut ctx = Transfers::new();
    let ramified = tri!(Place::finite(&ff, Poly::x(&k)));
    let split = tri!(Place::finite(&ff, Poly::linear(&k, &k.one())));
    let over_ramified = tri!(transfers::places_over(&ramified, &f));
    ensure!(over_ramified.len() == 1 && over_ramified[0].e == 2, "(t) does not ramify in {f}");
    let over_split: Vec<u32> = tri!(transfers::places_over(&split, &f)).iter().map(|w| w.e).collect();
    ensure!(over_split == [1, 1], "(t - 1) does not split in {f}: {over_split:?}");
    for v in [&ramified, &split] {
        for _ in 0..30 {
            let n = rng.gen_range(0..=2);
            let beta = tri!(sample::mw(&f, n, 2, &mut rng));
            let (l, r) = tri!(transfers::residue_transfer_sides(&mut ctx, &ext, v, &beta));
            for proj in PROJECTIONS {
                ensure!(tri!(l.eq_proj(&r, proj)), "v = {}, {proj:?}, β = {beta}: {l} ≠ {r}", v.label());
            }
        }
    }
    Ok("60 classes".into())
}

// ---- 10 ----

fn rost_schmid() -> Verdict {
    let mut rng = sample::rng(10);
    let mut ctx = Transfers::new();
    let gf3 = gf(3);
    let gf9 = gf(9);
    let p3 = Scheme::projective_line(&gf3);
    let p9 = Scheme::projective_line(&gf9);
    let p5 = Scheme::projective_line(&gf(5));
    // Two factorizations of the same map for each morphism family.
    let composites = [
        (
            tri!(Morphism::power(&p9, 2).and_then(|m| m.then(Morphism::base_change(&p3, &gf9)?))),
            tri!(Morphism::base_change(&p3, &gf9).and_then(|m| m.then(Morphism::power(&p3, 2)?))),
        ),
        (
            tri!(Morphism::power(&p5, 2).and_then(|m| m.then(Morphism::power(&p5, 3)?))),
            tri!(Morphism::power(&p5, 3).and_then(|m| m.then(Morphism::power(&p5, 2)?))),
        ),
    ];
    let descend = tri!(Morphism::base_change(&p3, &gf9));
    for f in tri!(finite_morphisms()) {
        let x = f.source();
        for _ in 0..25 {
            let n = rng.gen_range(-1..=2);
            let c = tri!(random_generic(&x, n, &mut rng));
            let dc = tri!(rs::differential(&c));
            let lhs = tri!(rs::differential(&tri!(rs::pushforward(&mut ctx, &f, &c))));
            let rhs = tri!(rs::pushforward(&mut ctx, &f, &dc));
            ensure!(tri!(lhs.eq_proj(&rhs, Projection::Full)), "push along {x} → {}, c = {c}: {lhs} ≠ {rhs}", f.target());
            let a = tri!(sample::unit(x.base(), &mut rng));
            let lhs = tri!(rs::differential(&tri!(rs::gw_action(&a, &c))));
            let rhs = tri!(rs::gw_action(&a, &dc));
            ensure!(tri!(lhs.eq_proj(&rhs, Projection::Full)), "GW action on {x}, c = {c}: {lhs} ≠ {rhs}");
            let down = tri!(random_generic(&p3, n, &mut rng));
            let lhs = tri!(rs::pullback(&descend, &tri!(rs::differential(&down))));
            let rhs = tri!(rs::differential(&tri!(rs::pullback(&descend, &down))));
            ensure!(tri!(lhs.eq_proj(&rhs, Projection::Full)), "pull-back to {p9}, c = {down}: {lhs} ≠ {rhs}");
        }
    }
    for (a, b) in &composites {
        let x = a.source();
        for _ in 0..25 {
            let n = rng.gen_range(-1..=2);
            for c in [tri!(random_generic(&x, n, &mut rng)), tri!(random_closed(&x, n, &mut rng))] {
                let l = tri!(rs::pushforward(&mut ctx, a, &c));
                let r = tri!(rs::pushforward(&mut ctx, b, &c));
                ensure!(tri!(l.eq_proj(&r, Projection::Full)), "{x} → {}, c = {c}: {l} ≠ {r}", a.target());
            }
        }
    }
    Ok("25 cycles per map".into())
}

// ---- 11 ----

fn constant_cycle(x: &Scheme, c: &MWElement) -> Result<Cycle, mwt::Error> {
    let point = Cycle::generic(&Scheme::point(x.base()), c)?;
    rs::pullback(&Morphism::structure(x)?, &point)
}

/// Whether `⟨c N / D⟩` is unramified on `P^1`, from the factorizations of `N` and `D`.
fn even_valuations(k: &Field, num: &Poly, den: &Poly) -> Result<bool, mwt::Error> {
    let mut exps: Vec<(Poly, i64)> = Vec::new();
    for (p, sign) in [(num, 1), (den, -1)] {
        for (g, m) in factor(k, p)?.factors {
            match exps.iter_mut().find(|(h, _)| *h == g) {
                Some(e) => e.1 += sign * m as i64,
                None => exps.push((g, sign * m as i64)),
            }
        }
    }
    Ok(exps.iter().all(|(_, e)| e % 2 == 0) && (num.deg() - den.deg()) % 2 == 0)
}

fn monic_polys(k: &Field, max_deg: usize) -> Vec<Poly> {
    let elems = k.elements().unwrap();
    let mut out = vec![Poly::one(k)];
    let mut frontier = vec![Poly::one(k)];
    for _ in 0..max_deg {
        let mut next = Vec::new();
        for p in &frontier {
            for c in &elems {
                next.push(poly::add(k, &poly::shift(k, p, 1), &Poly::constant(c.clone())));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn a0() -> Verdict {
    let mut rng = sample::rng(11);
    for (i, q) in [3, 5, 9].iter().cycle().take(50).enumerate() {
        let k = gf(*q);
        let x = Scheme::affine_line(&k);
        let c = tri!(sample::mw(&k, (i % 4) as i64 - 1, 2, &mut rng));
        let gamma = tri!(constant_cycle(&x, &c));
        let m = tri!(rs::a0(&gamma));
        ensure!(m.unramified, "{x}: res({c}) reported ramified");
        let w = m.constant.ok_or_else(|| format!("{x}: no witness for res({c})"))?;
        ensure!(tri!(w.eq_in(&c)), "{x}: witness {w} for res({c})");
        ensure!(tri!(tri!(constant_cycle(&x, &w)).eq_proj(&gamma, Projection::Full)), "{x}: res({w}) ≠ γ");
    }
    for _ in 0..20 {
        let x = Scheme::affine_line(&gf(5));
        let n = rng.gen_range(0..=2);
        let c = tri!(random_generic(&x, n, &mut rng));
        let closed = tri!(rs::differential(&c)).is_zero();
        let m = tri!(rs::a0(&c));
        ensure!(m.unramified == closed, "{x}, c = {c}: unramified {} but d c = 0 is {closed}", m.unramified);
    }
    for d in ["GF(9)", "Q", "GF(3)(t)", "Q[i]/(i^2+1)"] {
        let k = make_field(d).unwrap();
        let x = Scheme::point(&k);
        for n in -1..=2 {
            let v = tri!(sample::mw(&k, n, 2, &mut rng));
            let m = tri!(rs::a0(&tri!(Cycle::generic(&x, &v))));
            let w = m.constant.filter(|_| m.unramified).ok_or_else(|| format!("Spec {k}: {v} rejected"))?;
            ensure!(tri!(w.eq_in(&v)), "Spec {k}: {v} came back as {w}");
        }
    }
    // `⟨c N / D⟩` on `P^1_{GF(3)}` is unramified exactly when every valuation is even.
    let k = gf(3);
    let p1 = Scheme::projective_line(&k);
    let ff = p1.function_field().clone();
    let polys = monic_polys(&k, 2);
    let mut unramified = 0;
    for num in &polys {
        for den in &polys {
            for c in [k.one(), k.from_i64(2)] {
                let f = ff.mul(&ff.constant(c.clone()), &ff.div(&ff.from_poly(num.clone()), &ff.from_poly(den.clone())).unwrap());
                let gamma = tri!(Cycle::generic(&p1, &tri!(MWElement::angle(&ff, &f))));
                let m = tri!(rs::a0(&gamma));
                let expect = tri!(even_valuations(&k, num, den));
                ensure!(m.unramified == expect, "P^1, ⟨{}⟩: unramified {}", ff.format(&f), m.unramified);
                if expect {
                    let w = m.constant.ok_or_else(|| format!("P^1, ⟨{}⟩: no witness", ff.format(&f)))?;
                    ensure!(tri!(w.eq_in(&tri!(MWElement::angle(&k, &c)))), "P^1, ⟨{}⟩: witness {w}", ff.format(&f));
                    unramified += 1;
                }
            }
        }
    }
    Ok(format!("50 kernel witnesses, {unramified} unramified angles on P^1"))
}

// ---- 12 ----

fn random_scheme<R: Rng>(rng: &mut R) -> EtaleScheme {
    let fields: Vec<Field> = (0..rng.gen_range(1..=2)).map(|_| gf([3, 9, 27][rng.gen_range(0..3)])).collect();
    EtaleScheme::new(&gf(3), &fields).unwrap()
}

fn correspondences() -> Verdict {
    let mut rng = sample::rng(12);
    let mut ctx = Transfers::new();
    for _ in 0..20 {
        let [x, y, z, w] = [0; 4].map(|_| random_scheme(&mut rng));
        let a = tri!(mw_corr::random_cor(&x, &y, &mut rng));
        let b = tri!(mw_corr::random_cor(&y, &z, &mut rng));
        let c = tri!(mw_corr::random_cor(&z, &w, &mut rng));
        ensure!(tri!(mw_corr::associativity_check(&mut ctx, &a, &b, &c)), "associativity: {a}{b}{c}");
        for m in [&a, &b, &c] {
            ensure!(tri!(mw_corr::unit_check(&mut ctx, m)), "unit law: {m}");
        }
    }
    for top in [9, 27] {
        let ext = tri!(primitive_extension(&gf(3), &gf(top)));
        let f = ext.field().clone();
        let mut classes = vec![GWClass::one(&f)];
        for _ in 0..10 {
            classes.push(tri!(sample::gw(&f, 3, &mut rng)));
        }
        for q in classes {
            let (via_cor, via_tr) = tri!(mw_corr::graph_transfer_sides(&mut ctx, &ext, &q));
            let direct = tri!(GWClass::from_mw(&tri!(transfers::transfer(&q.to_mw(), &ext))));
            let trace = tri!(scharlau_transfer(&q, &ext));
            ensure!(
                tri!(via_cor.eq_gw(&via_tr)) && tri!(via_cor.eq_gw(&direct)) && tri!(via_cor.eq_gw(&trace)),
                "{f}/GF(3), q = {q}: correspondence {via_cor}, transfer {direct}, trace form {trace}"
            );
        }
    }
    Ok("20 triples, 22 graph transfers".into())
}

// ---- 13 ----

fn tower_probe() -> Verdict {
    let cfg = Config {
        samples: 25,
        only: Some(vec!["transfer.tower_independence".into()]),
        ..Config::default()
    };
    let report = tri!(harness::run(&cfg));
    let r = report.get("transfer.tower_independence").ok_or("check missing from report")?;
    match r.status {
        Status::Pass => Ok("both tower pairs agree on 25 elements".into()),
        Status::Finding => Ok(format!("finding (exit {}): {}", report.exit_code(), r.witness.clone().unwrap_or_default())),
        _ => Err(format!("{:?}: {}", r.status, r.witness.clone().unwrap_or_default())),
    }
}

// ---- 14 ----

fn mutation_sensitivity() -> Verdict {
    let checks = ["transfer.unicity", "transfer.base_change.catalog"];
    let mut caught = [false; 2];
    let mut detail = Vec::new();
    for m in [Mutation::FlipInfinitySign, Mutation::DropEpsilon] {
        let cfg = Config {
            only: Some(checks.iter().map(|s| s.to_string()).collect()),
            mutation: Some(m),
            ..Config::default()
        };
        let report = tri!(harness::run(&cfg));
        let mut any = false;
        for (i, id) in checks.iter().enumerate() {
            let r = report.get(id).ok_or_else(|| format!("{id} missing from report"))?;
            let failed = r.status == Status::Fail && r.witness.as_deref().is_some_and(|w| !w.is_empty());
            caught[i] |= failed;
            any |= failed;
            detail.push(format!("{m:?}/{id}: {}", if failed { "fail" } else { "pass" }));
        }
        ensure!(any, "{m:?} goes unnoticed: {}", detail.join(", "));
        ensure!(report.exit_code() == 2, "{m:?}: exit code {}", report.exit_code());
    }
    for (i, id) in checks.iter().enumerate() {
        ensure!(caught[i], "no mutation fails {id}: {}", detail.join(", "));
    }
    Ok(detail.join(", "))
}

fn criteria() -> Vec<Criterion> {
    let s = Duration::from_secs;
    vec![
        Criterion { name: "GW tables over GF(3), GF(5), GF(7), GF(9)", budget: s(10), run: gw_tables },
        Criterion { name: "Witt ring order and exponent", budget: s(1), run: witt_structure },
        Criterion { name: "split exact sequence over GF(3)(t), GF(5)(t)", budget: s(60), run: split_exact },
        Criterion { name: "coresidue is a section vanishing elsewhere", budget: s(60), run: coresidue_contract },
        Criterion { name: "transfer functoriality on subfield chains", budget: s(120), run: functoriality },
        Criterion { name: "canonical transfer equals trace form", budget: s(60), run: unicity },
        Criterion { name: "base change with length weights", budget: s(60), run: strong_base_change },
        Criterion { name: "projection formulas and restriction square", budget: s(60), run: projection_formulas },
        Criterion { name: "residues commute with transfers", budget: s(30), run: residue_compatibility },
        Criterion { name: "Rost-Schmid commutation and functoriality", budget: s(60), run: rost_schmid },
        Criterion { name: "unramified classes on lines and points", budget: s(30), run: a0 },
        Criterion { name: "correspondence category laws", budget: s(30), run: correspondences },
        Criterion { name: "tower presentation probe", budget: s(60), run: tower_probe },
        Criterion { name: "mutations are detected", budget: s(60), run: mutation_sensitivity },
    ]
}

fn main() -> ExitCode {
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, c) in criteria().into_iter().enumerate() {
        let start = Instant::now();
        let verdict = panic::catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panic: {msg}"))
        });
        let elapsed = start.elapsed();
        let verdict = match verdict {
            Ok(_) if elapsed > c.budget => Err(format!("took {:.1}s, budget {}s", elapsed.as_secs_f64(), c.budget.as_secs())),
            v => v,
        };
        let (tag, detail) = match &verdict {
            Ok(d) => ("PASS", d),
            Err(w) => ("FAIL", w),
        };
        println!("{tag} criterion {:>2}: {} [{:.2}s] {detail}", i + 1, c.name, elapsed.as_secs_f64());
        failed += verdict.is_err() as usize;
    }
    println!("acceptance: {} of 14 criteria passed", 14 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
