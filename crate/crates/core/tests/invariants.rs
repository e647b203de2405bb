use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use orblab::abc::{self, AbcTriple};
use orblab::belyi::{self, BelyiMap, Target};
use orblab::chatelet::{self, ChateletSurface, Place};
use orblab::orbifold::{self, OrbifoldDivisor, PrimeSet, ScanOptions};
use orblab::poly::ZPoly;
use orblab::ProjPoint;
use proptest::prelude::*;

fn pt(s: &str) -> ProjPoint {
    s.parse().unwrap()
}

fn halves(pts: &[&str]) -> OrbifoldDivisor {
    OrbifoldDivisor::halves(&pts.iter().map(|s| pt(s)).collect::<Vec<_>>()).unwrap()
}

#[test]
fn scan_points_are_members() {
    let d = halves(&["0", "1", "inf", "-1"]);
    let s: PrimeSet = [3].into_iter().collect();
    let pts = orbifold::scan_orbifold_points(&d, &s, 400, ScanOptions::default()).unwrap();
    assert!(!pts.is_empty());
    for p in &pts {
        assert!(orbifold::is_orbifold_point(p, &d, &s).member, "{p}");
    }
}

#[test]
fn squaring_maps_orbifold_points_to_orbifold_points() {
    // x - y and x + y powerful makes x^2 - y^2 powerful
    let f = BelyiMap::parse("x^2").unwrap();
    let up = halves(&["1", "-1"]);
    let down = halves(&["0", "1", "inf"]);
    let none = PrimeSet::new();
    let pts = orbifold::scan_orbifold_points(&up, &none, 300, ScanOptions::default()).unwrap();
    assert!(pts.len() > 3);
    for p in pts {
        assert!(orbifold::is_orbifold_point(&f.evaluate(&p), &down, &none).member, "{p}");
    }
}

#[test]
fn quality_is_log_ratio() {
    let t = AbcTriple::from_i64s(-3, 2, 1).unwrap();
    assert_eq!(t.quality(), 3f64.ln() / 6f64.ln());
    let t = AbcTriple::from_i64s(-1, -1, 2).unwrap();
    assert_eq!((t.height(), t.conductor()), (BigInt::from(2), BigInt::from(2)));
}

#[test]
fn split_surface_has_points_everywhere() {
    let s = ChateletSurface::new(BigRational::from_integer(1.into()), ZPoly::from_i64s(&[2, 0, 0, 0, 1])).unwrap();
    assert!(s.is_split());
    let (ok, reports) = chatelet::everywhere_locally_solvable(&s);
    assert!(ok);
    assert_eq!(reports[0].place, Place::Real);
}

proptest! {
    #[test]
    fn ratio_triples_sum_to_zero(x in -10_000i64..10_000, y in 1i64..10_000) {
        prop_assume!(x.gcd(&y) == 1 && x != 0 && x != y);
        let r = ProjPoint::from_ints(x, y).unwrap();
        let t = abc::triple_from_ratio(&r).unwrap();
        prop_assert_eq!(t.a() + t.b() + t.c(), BigInt::from(0));
        prop_assert_eq!(abc::height_from_places(&t), BigRational::from_integer(t.height()));
        let (n0, n1, ninf) = abc::conductor_split(&r).unwrap();
        prop_assert_eq!(n0 * n1 * ninf, t.conductor());
    }

    #[test]
    fn composed_maps_stay_belyi(picks in proptest::collection::vec(0usize..4, 1..4)) {
        let basics = belyi::basic_maps();
        let f = picks.iter().fold(BelyiMap::identity(), |acc, i| basics[*i].compose(&acc));
        prop_assert!(belyi::is_belyi(&f));
        let ram = belyi::ramification_data(&f);
        // Riemann-Hurwitz on P^1 -> P^1
        let total: usize = Target::ALL.iter().map(|t| ram.fiber(*t).branching()).sum();
        prop_assert_eq!(total, 2 * f.degree() - 2);
    }
}
