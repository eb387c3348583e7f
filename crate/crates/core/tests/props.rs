use proptest::prelude::*;

use sphere_rigidity_core::extraction::{extend_linear, PointMap};
use sphere_rigidity_core::lattice::{pointwise_product, sup_distance, sup_norm};
use sphere_rigidity_core::rational::{format_rational, parse_rational, Rational};
use sphere_rigidity_core::setcalc::{in_d_by_distance, in_d_by_sets, max_set};
use sphere_rigidity_core::{perm, SpaceModel, SphereFn};

fn rational() -> impl Strategy<Value = Rational> {
    (-1000i128..=1000, 1i128..=64).prop_map(|(n, d)| Rational::new(n, d))
}

/// Sphere functions on `n` points: values in `[0, 1]` with one forced peak.
fn sphere_fn(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    (prop::collection::vec((0i128..=48, 1i128..=48), n), 0..n).prop_map(|(raw, peak)| {
        raw.into_iter()
            .enumerate()
            .map(|(i, (a, b))| if i == peak { Rational::from_integer(1) } else { Rational::new(a.min(b), b) })
            .collect()
    })
}

proptest! {
    #[test]
    fn text_form_round_trips(q in rational()) {
        let text = format_rational(&q);
        prop_assert_eq!(parse_rational(&text).unwrap(), q);
        prop_assert_eq!(format_rational(&parse_rational(&text).unwrap()), text);
    }

    #[test]
    fn triangle_inequality(a in sphere_fn(4), b in sphere_fn(4), c in sphere_fn(4)) {
        let s = SpaceModel::numbered("p", 4).unwrap();
        let (a, b, c) = (SphereFn::new(&s, a).unwrap(), SphereFn::new(&s, b).unwrap(), SphereFn::new(&s, c).unwrap());
        let d = |x: &SphereFn, y: &SphereFn| sup_distance(x, y).unwrap();
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c));
        prop_assert_eq!(d(&a, &b), d(&b, &a));
    }

    #[test]
    fn d_membership_routes_agree_off_grid(a in sphere_fn(3), b in sphere_fn(3)) {
        let s = SpaceModel::numbered("p", 3).unwrap();
        let (f, h) = (SphereFn::new(&s, a).unwrap(), SphereFn::new(&s, b).unwrap());
        prop_assert_eq!(in_d_by_distance(&f, &h).unwrap(), in_d_by_sets(&f, &h).unwrap());
    }

    #[test]
    fn products_with_common_peak_keep_the_peak(a in sphere_fn(3), b in sphere_fn(3)) {
        let s = SpaceModel::numbered("p", 3).unwrap();
        let (f, g) = (SphereFn::new(&s, a).unwrap(), SphereFn::new(&s, b).unwrap());
        let common = !max_set(&f).is_disjoint(&max_set(&g));
        prop_assert_eq!(pointwise_product(&f, &g).is_ok(), common);
    }

    #[test]
    fn linear_extension_is_linear_and_isometric(
        p in 0usize..24,
        a in rational(),
        f in prop::collection::vec(rational(), 4),
        g in prop::collection::vec(rational(), 4),
    ) {
        let x = SpaceModel::numbered("p", 4).unwrap();
        let y = SpaceModel::numbered("q", 4).unwrap();
        let assignment = perm::permutations(4).nth(p).unwrap();
        let ext = extend_linear(&PointMap::new(&y, &x, assignment).unwrap());
        let combo: Vec<Rational> = f.iter().zip(&g).map(|(u, v)| a * u + v).collect();
        let lhs = ext.apply(&combo).unwrap();
        let (ef, eg) = (ext.apply(&f).unwrap(), ext.apply(&g).unwrap());
        let rhs: Vec<Rational> = ef.iter().zip(&eg).map(|(u, v)| a * u + v).collect();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(sup_norm(&ef), sup_norm(&f));
        prop_assert_eq!(ext.apply_inverse(&ef).unwrap(), f);
    }
}
