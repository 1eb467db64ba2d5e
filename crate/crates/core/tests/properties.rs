use std::collections::BTreeMap;

use proptest::prelude::*;

use hypergrass_core::combin::subsets;
use hypergrass_core::dequant::{homotopy_h, plus_h, s_h, Prec};
use hypergrass_core::grassmannian::Grassmannian;
use hypergrass_core::num::{q, Q};
use hypergrass_core::plucker::{GPVector, MatroidBases};
use hypergrass_core::realization::{dressian_member, extend_prescribed, shift_all, torus_scale};
use hypergrass_core::search::Kind;
use hypergrass_core::structures::Homomorphism;
use hypergrass_core::{Element, Field};

fn sign_vector(field: Field, m: usize) -> impl Strategy<Value = Vec<Element>> {
    let vals: Vec<Element> = match field {
        Field::S => vec![Element::sign(1), Element::sign(-1), Element::sign(0)],
        _ => vec![Element::zero(Field::K), Element::one(Field::K)],
    };
    prop::collection::vec(prop::sample::select(vals), m).prop_filter("nonzero", |v| v.iter().any(|x| !x.is_zero()))
}

fn positive_q() -> impl Strategy<Value = Q> {
    (1i64..12, 1i64..6).prop_map(|(a, b)| q(a, b))
}

fn om24() -> impl Strategy<Value = GPVector> {
    let g = Grassmannian::enumerate(Field::S, 2, 4, Kind::Strong).unwrap();
    prop::sample::select(g.points().to_vec())
}

/// An oriented matroid in Gr(2, S^4) moved into TR by a random torus element.
fn tr_realization() -> impl Strategy<Value = GPVector> {
    (om24(), prop::collection::vec(positive_q(), 4)).prop_map(|(p, l)| {
        let v = p.pushforward(&Homomorphism::inclusion(Field::S, Field::TR)).unwrap();
        let l: Vec<Element> = l.into_iter().map(|x| Element::real(Field::TR, x).unwrap()).collect();
        torus_scale(&v, &l).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn strong_implies_weak(field in prop::sample::select(vec![Field::S, Field::K]), c in sign_vector(Field::S, 10)) {
        let coords: Vec<Element> = c.iter().map(|x| if field == Field::K {
            if x.is_zero() { Element::zero(Field::K) } else { Element::one(Field::K) }
        } else { x.clone() }).collect();
        prop_assume!(coords.iter().any(|x| !x.is_zero()));
        let v = GPVector::new(field, 2, 5, coords).unwrap();
        if v.is_strong().unwrap() {
            prop_assert!(v.is_weak().unwrap());
        }
    }

    #[test]
    fn normalize_is_projective(c in sign_vector(Field::S, 10), neg in any::<bool>()) {
        let v = GPVector::new(Field::S, 2, 5, c).unwrap();
        let n = v.normalize();
        prop_assert_eq!(n.normalize(), n.clone());
        let w = v.scale(&Element::sign(if neg { -1 } else { 1 })).unwrap();
        prop_assert_eq!(w.normalize(), n);
    }

    #[test]
    fn pushforward_keeps_gp(v in tr_realization()) {
        prop_assert!(v.is_strong().unwrap());
        for h in [Homomorphism::phase(Field::TR, Field::S), Homomorphism::inclusion(Field::TR, Field::TC), Homomorphism::kappa(Field::TR)] {
            let w = v.pushforward(&h).unwrap();
            prop_assert!(w.is_strong().unwrap(), "{} {:?}", h.name(), w);
            prop_assert!(w.is_weak().unwrap());
        }
    }

    #[test]
    fn restrict_commutes_with_pushforward(v in tr_realization(), drop in 1usize..=4) {
        let a: Vec<usize> = (1..=4).filter(|&x| x != drop).collect();
        let h = Homomorphism::phase(Field::TR, Field::S);
        if let Ok(r) = v.restrict(&a) {
            prop_assert_eq!(r.pushforward(&h).unwrap(), v.pushforward(&h).unwrap().restrict(&a).unwrap());
        } else {
            prop_assert!(v.pushforward(&h).unwrap().restrict(&a).is_err());
        }
    }

    #[test]
    fn prescribed_values_are_kept(v in tr_realization(), drop in 1usize..=4, vals in prop::collection::vec((positive_q(), any::<bool>()), 3)) {
        let a: Vec<usize> = (1..=4).filter(|&x| x != drop).collect();
        let pt: Vec<Element> = (0..3).map(|i| {
            let hat: Vec<usize> = a.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &x)| x).collect();
            if v.coord(&hat).is_zero() {
                Element::zero(Field::TR)
            } else {
                let (m, neg) = &vals[i];
                Element::real(Field::TR, if *neg { -m.clone() } else { m.clone() }).unwrap()
            }
        }).collect();
        let out = extend_prescribed(&v, &a, &pt).unwrap();
        for (i, p) in pt.iter().enumerate() {
            let hat: Vec<usize> = a.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &x)| x).collect();
            prop_assert_eq!(out.coord(&hat), p);
        }
        prop_assert_eq!(out.support(), v.support());
        prop_assert!(out.is_strong().unwrap());
    }

    #[test]
    fn dressian_shift_invariance(x in prop::collection::vec(-6i64..6, 6), c in (-9i64..9, 1i64..5)) {
        let m = MatroidBases::uniform(2, 4);
        let x: BTreeMap<Vec<usize>, Q> = subsets(4, 2).into_iter().zip(x).map(|(s, v)| (s, q(v, 1))).collect();
        let a = dressian_member(&x, &m).unwrap().member;
        let b = dressian_member(&shift_all(&x, &q(c.0, c.1)), &m).unwrap().member;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn homotopy_is_multiplicative(a in positive_q(), b in positive_q(), neg in any::<bool>(), k in 0i64..=4) {
        let mut prec = Prec::default();
        let t = q(k, 4);
        let x = Element::real(Field::TR, if neg { -a.clone() } else { a.clone() }).unwrap();
        let y = Element::real(Field::TR, b).unwrap();
        let hx = homotopy_h(&mut prec, &x, &t).unwrap();
        let hy = homotopy_h(&mut prec, &y, &t).unwrap();
        let hxy = homotopy_h(&mut prec, &x.mul(&y).unwrap(), &t).unwrap();
        if let (Some(p), Some(r), Some(s)) = (hx.exact(), hy.exact(), hxy.exact()) {
            prop_assert_eq!(p.mul(r).unwrap(), s.clone());
        }
        if t == q(1, 1) {
            prop_assert_eq!(hx.exact().unwrap().modulus(), &q(1, 1));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 60, ..ProptestConfig::default() })]

    #[test]
    fn plus_h_commutative_with_identity(a in -20i64..20, b in -20i64..20, h in prop::sample::select(vec![q(1, 1), q(1, 3), q(1, 9), q(2, 5)])) {
        let mut p = Prec::default();
        let x = p.q(&q(a, 4));
        let y = p.q(&q(b, 3));
        let zero = p.int(0);
        let xy = plus_h(&mut p, &x, &y, &h).unwrap();
        let yx = plus_h(&mut p, &y, &x, &h).unwrap();
        prop_assert!(p.close(&xy, &yx));
        let x0 = plus_h(&mut p, &x, &zero, &h).unwrap();
        prop_assert!(p.close(&x0, &x));
        let fwd = s_h(&mut p, &x, &h).unwrap();
        let back = s_h(&mut p, &fwd, &h.recip()).unwrap();
        prop_assert!(p.close(&back, &x));
    }
}
