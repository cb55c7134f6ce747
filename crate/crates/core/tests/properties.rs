use std::sync::OnceLock;

use proptest::prelude::*;

use girthmaps::bijection::{map_to_mobile, mobile_to_map};
use girthmaps::map::{parse_map, MapFile, PlaneMap};
use girthmaps::mobile::{enumerate_mobiles, MobileFile, MobileSpec};
use girthmaps::oracle::rooted_maps_by_insertion;
use girthmaps::orientation::{suitable_orientation, GirthSpec};
use girthmaps::series::FaceVars;

fn maps() -> &'static [PlaneMap] {
    static MAPS: OnceLock<Vec<PlaneMap>> = OnceLock::new();
    MAPS.get_or_init(|| rooted_maps_by_insertion(5).unwrap().into_iter().flatten().filter(|p| !p.map.is_empty()).collect())
}

fn any_map() -> impl Strategy<Value = PlaneMap> {
    (0..maps().len()).prop_map(|i| maps()[i].clone())
}

fn shuffled(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rooted_code_ignores_labels((p, perm) in any_map().prop_flat_map(|p| { let n = p.map.len(); (Just(p), shuffled(n)) })) {
        let q = p.map.relabel(&perm);
        prop_assert_eq!(q.rooted_code(perm[p.root]), p.rooted_code());
    }

    #[test]
    fn euler_relation(p in any_map()) {
        let m = &p.map;
        prop_assert_eq!(m.n_vertices() as i64 - m.n_edges() as i64 + m.face_degrees().len() as i64, 2);
    }

    #[test]
    fn dual_of_dual_is_the_map(p in any_map()) {
        let (d, _) = p.dual();
        let dd = PlaneMap { map: d, root: p.root }.dual().0;
        prop_assert_eq!(dd.rooted_code(p.map.alpha(p.root)), p.rooted_code());
    }

    #[test]
    fn subdivision_doubles_girth(p in any_map()) {
        let s = p.subdivide().plane;
        prop_assert!(s.map.is_bipartite());
        prop_assert_eq!(s.map.girth(), p.map.girth().map(|g| 2 * g));
    }

    #[test]
    fn map_file_round_trip(p in any_map()) {
        let text = serde_json::to_string(&MapFile::from_plane(&p)).unwrap();
        prop_assert_eq!(parse_map(&text).unwrap().plane().rooted_code(), p.rooted_code());
    }

    #[test]
    fn mobile_ignores_the_outer_corner((p, k) in any_map().prop_flat_map(|p| { let k = p.outer_degree(); (Just(p), 0..k) })) {
        let d = p.outer_degree();
        prop_assume!(p.map.girth() == Some(d));
        let other = p.with_root(p.outer_halves()[k]);
        let a = map_to_mobile(&p, None, GirthSpec::Plain(d as i64)).unwrap();
        let b = map_to_mobile(&other, None, GirthSpec::Plain(d as i64)).unwrap();
        prop_assert_eq!(a.mobile.canonical_code(), b.mobile.canonical_code());
    }

    #[test]
    fn orientation_exists_only_on_members(p in any_map()) {
        let d = p.outer_degree();
        let member = p.map.girth() == Some(d);
        prop_assert_eq!(suitable_orientation(&p, None, GirthSpec::Plain(d as i64)).is_ok(), member);
    }

    #[test]
    fn series_ring_laws(a in prop::collection::vec(-5i64..5, 4), b in prop::collection::vec(-5i64..5, 4)) {
        let vars = FaceVars::faces(&[1, 2], 4);
        let poly = |c: &[i64]| {
            let mut s = vars.zero();
            for (i, &k) in c.iter().enumerate() {
                s = &s + &vars.x(1).pow(i as u32).scale(&k.into());
            }
            &s + &vars.x(2)
        };
        let (x, y) = (poly(&a), poly(&b));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x + &y) * &x, &(&x * &x) + &(&y * &x));
        prop_assert_eq!(x.pow(3), &(&x * &x) * &x);
    }
}

#[test]
fn mobiles_survive_file_and_closure() {
    for d in 1..=3 {
        let spec = MobileSpec::DBranching(d);
        for t in enumerate_mobiles(spec, 4, 2) {
            let text = serde_json::to_string(&MobileFile::from_mobile(&t)).unwrap();
            let back: MobileFile = serde_json::from_str(&text).unwrap();
            let u = back.to_mobile().unwrap();
            assert_eq!(u.canonical_code(), t.canonical_code());
            let m = mobile_to_map(&u, spec).unwrap();
            let again = map_to_mobile(m.plane(), None, GirthSpec::Plain(d)).unwrap();
            assert_eq!(again.mobile.canonical_code(), t.canonical_code());
        }
    }
}
