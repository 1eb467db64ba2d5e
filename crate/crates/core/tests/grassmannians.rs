use hypergrass_core::grassmannian::{induced_map, naive_points, Grassmannian};
use hypergrass_core::plucker::GPVector;
use hypergrass_core::poset::BitSet;
use hypergrass_core::search::Kind;
use hypergrass_core::structures::Homomorphism;
use hypergrass_core::topology::{alternating, order_complex, simplicial_image_failure, DEFAULT_SIMPLEX_CAP};
use hypergrass_core::Field;

#[test]
fn rank_one_counts() {
    for n in 1..=6u32 {
        let k = Grassmannian::enumerate(Field::K, 1, n as usize, Kind::Strong).unwrap();
        assert_eq!(k.len() as u64, 2u64.pow(n) - 1);
        let s = Grassmannian::enumerate(Field::S, 1, n as usize, Kind::Strong).unwrap();
        assert_eq!(s.len() as u64, (3u64.pow(n) - 1) / 2);
    }
    assert_eq!(Grassmannian::enumerate(Field::S, 1, 3, Kind::Strong).unwrap().chirotopes(), naive_points(Field::S, 1, 3, Kind::Strong).unwrap());
}

#[test]
fn strong_is_weak_in_small_cases() {
    for field in [Field::S, Field::K] {
        for n in 2..=4 {
            let s = Grassmannian::enumerate(field, 2, n, Kind::Strong).unwrap();
            let w = Grassmannian::enumerate(field, 2, n, Kind::Weak).unwrap();
            assert_eq!(s.chirotopes(), w.chirotopes());
        }
    }
}

#[test]
fn matroid_posets_are_cones() {
    for (r, n) in [(1, 3), (2, 4), (2, 5), (3, 5)] {
        let g = Grassmannian::enumerate(Field::K, r, n, Kind::Strong).unwrap();
        let p = g.weak_map_poset();
        assert!(p.is_contractible_via_max());
        assert!(g.chirotopes()[p.maxima()[0]].chars().all(|c| c == '1'));
        let c = order_complex(&p, DEFAULT_SIMPLEX_CAP).unwrap();
        let b = c.homology_mod2();
        assert_eq!(b[0], 1);
        assert!(b[1..].iter().all(|&x| x == 0));
        assert_eq!(alternating(&b), c.euler_characteristic());
    }
}

#[test]
fn kappa_is_simplicial() {
    let s = Grassmannian::enumerate(Field::S, 2, 4, Kind::Strong).unwrap();
    let k = Grassmannian::enumerate(Field::K, 2, 4, Kind::Strong).unwrap();
    let f = induced_map(&Homomorphism::kappa(Field::S), &s, &k).unwrap();
    let sp = s.weak_map_poset();
    let kp = k.weak_map_poset();
    assert!(sp.is_monotone(&f, &kp));
    let c = order_complex(&sp, DEFAULT_SIMPLEX_CAP).unwrap();
    assert!(c.boundary_squares_to_zero());
    assert_eq!(simplicial_image_failure(&c, &f, &kp), None);
}

#[test]
fn projective_lines_and_planes() {
    for n in 2..=3 {
        let g = Grassmannian::enumerate(Field::S, 1, n, Kind::Strong).unwrap();
        let c = order_complex(&g.weak_map_poset(), DEFAULT_SIMPLEX_CAP).unwrap();
        assert_eq!(c.homology_mod2(), vec![1; n]);
    }
}

#[test]
fn corank_one_count() {
    for r in 1..=3u32 {
        let g = Grassmannian::enumerate(Field::S, r as usize, r as usize + 1, Kind::Strong).unwrap();
        assert_eq!(g.len() as u64, (3u64.pow(r + 1) - 1) / 2);
        // every nonzero alternating function is GP
        assert!(g.chirotopes().iter().all(|c| !c.starts_with('-')));
    }
}

#[test]
fn file_round_trip() {
    let g = Grassmannian::enumerate(Field::S, 2, 4, Kind::Strong).unwrap();
    let lines: Vec<String> = g.chirotopes().iter().rev().cloned().collect();
    let h = Grassmannian::from_chirotopes(Field::S, 2, 4, Kind::Strong, &lines).unwrap();
    assert_eq!(g, h);
    let bad = vec![String::from("+-++++")];
    assert!(Grassmannian::from_chirotopes(Field::S, 2, 4, Kind::Strong, &bad).is_err());
    let closure = g.weak_map_poset().closure(&BitSet::from_indices(g.len(), [0]));
    assert!(closure.contains(0));
    assert!(GPVector::parse_chirotope(Field::S, 2, 4, "+-+").is_err());
}
