use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tube::model_spaces::{IdealPoint, ModelSpace, NumericMode, Point, Toward};
use tube::oracle::{GeodesicWitnesses, OracleSession};
use tube::rankone::*;
use tube::scalar::Scalar;

fn axis(sp: &ModelSpace) -> tube::model_spaces::Geodesic {
    let o = Point::Hyper([1.0, 0.0, 0.0]);
    sp.geodesic_between_ideals(&IdealPoint::Angle(0.0), &IdealPoint::Angle(std::f64::consts::PI), &o).unwrap()
}

#[test]
fn closed_and_euclidean_scissors_are_trivial() {
    let sp = ModelSpace::hyperbolic();
    let a = axis(&sp);
    let x = a.at(0.3).unwrap();
    let s = Scissors::closed(&sp, &a, &x).unwrap();
    assert_eq!(displacement_formula(&sp, &s).unwrap(), 0.0);
    assert!(displacement_composed(&sp, &s).unwrap().abs() < 1e-12);

    let e = ModelSpace::euclidean(NumericMode::ExactRational);
    let l = |y: i64| e.geodesic_through(&Point::xy_q(0, y, 1), &Point::xy_q(1, y, 1)).unwrap();
    let s = Scissors::new(&e, l(0), l(2), l(2), l(5), Point::xy_q(3, 2, 1)).unwrap();
    let m = Point::xy_q(7, 0, 2);
    assert!(e.same_point(&s.translate(&e, &m).unwrap(), &m));
    assert_eq!(displacement_formula(&e, &s).unwrap(), 0.0);
}

#[test]
fn find_scissors_respects_neighbourhood() {
    let sp = ModelSpace::hyperbolic();
    let a = axis(&sp);
    let x0 = a.at(0.0).unwrap();
    let s = find_scissors(&sp, &a, &x0, Neighborhood { ideal_radius: 0.5, offset: 0.1 }, 7).unwrap();
    let off = sp.dist_f(&s.x, &x0);
    assert!(off > 0.0 && off <= 0.1);
    assert_eq!(
        find_scissors(&sp, &a, &x0, Neighborhood { ideal_radius: 0.5, offset: 0.0 }, 7).unwrap_err(),
        RankOneError::Degenerate
    );
    for rad in [0.5, 0.1, 0.01, 0.001] {
        let s = find_scissors(&sp, &a, &x0, Neighborhood { ideal_radius: rad, offset: 0.5 }, 3).unwrap();
        let Some(IdealPoint::Angle(b)) = s.b.end_plus() else { panic!() };
        let Some(IdealPoint::Angle(om)) = a.end_plus() else { panic!() };
        let gap = tube::model_spaces::lorentz::angle_diff(b, om);
        assert!(gap <= rad);
    }
}

#[test]
fn translation_is_a_shift() {
    let sp = ModelSpace::hyperbolic();
    let a = axis(&sp);
    let s = Scissors::from_center(&sp, &a, 0.4, 0.35).unwrap();
    let f = displacement_formula(&sp, &s).unwrap();
    for t in [-2.0, -0.5, 0.0, 1.0, 3.0] {
        let m = a.at(t).unwrap();
        assert!((s.shift_at(&sp, &m).unwrap() - f).abs() <= 1e-9);
    }
    assert!(f > 0.0);
}

#[test]
fn displacement_triples() {
    let sp = ModelSpace::hyperbolic();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut o = OracleSession::new(sp.clone());
    let mut w = GeodesicWitnesses::new(1);
    let t = Instant::now();
    for i in 0..20 {
        let p = sp.random_point(&mut rng, 2.0);
        let q = sp.random_point(&mut rng, 2.0);
        let a = sp.geodesic_through(&p, &q).unwrap().complete();
        let (tc, _) = sp.project(&Point::Hyper([1.0, 0.0, 0.0]), &a).unwrap();
        let a = a.centered_at(tc.to_f64()).unwrap();
        let s = find_scissors(&sp, &a, &a.at(0.0).unwrap(), Neighborhood { ideal_radius: 1.0, offset: 0.1 }, i).unwrap();
        // start so that the orbit x₀ … Tⁿx₀ is centered on the origin
        let x0 = a.at(-500.0 * displacement_formula(&sp, &s).unwrap()).unwrap();
        let r = displacement_record(&mut o, &s, &x0, 1000, &mut w).unwrap();
        assert!((r.delta_formula - r.delta_composed).abs() <= 1e-8, "{r:?}");
        assert!(r.delta_oracle > r.delta_formula - 1e-3 && r.delta_oracle <= r.delta_formula + 1e-8, "{r:?}");
    }
    println!("triples {:?} {:?}", t.elapsed(), o.counts());
}

#[test]
fn target_displacement() {
    let sp = ModelSpace::hyperbolic();
    let a = axis(&sp);
    let x0 = a.at(0.0).unwrap();
    let mut prev = f64::INFINITY;
    for q in [4.0, 8.0, 16.0, 32.0] {
        let s = find_scissors_with_displacement(&sp, &a, &x0, 1.0 / q, 2.0).unwrap();
        assert!((displacement_formula(&sp, &s).unwrap() - 1.0 / q).abs() <= 1e-10);
        let h = s.height(&sp).unwrap();
        assert!(h < prev);
        prev = h;
    }
    assert!(matches!(
        find_scissors_with_displacement(&sp, &a, &x0, 1.0, 0.1),
        Err(RankOneError::TargetAboveDelta { .. })
    ));
}

#[test]
fn reconstruct_sample() {
    let sp = ModelSpace::hyperbolic();
    let a = axis(&sp);
    let mut o = OracleSession::new(sp.clone());
    let mut w = GeodesicWitnesses::new(1);
    let t = Instant::now();
    let e = reconstruct_rankone(&mut o, &a, 0.0, 3.7, RankOneOptions { tol: 1e-4, ..Default::default() }, &mut w).unwrap();
    println!("{e:?} {:?} {:?}", t.elapsed(), o.counts());
    assert!((e.value - 3.7).abs() <= 1e-4);
    let t = Instant::now();
    let e = reconstruct_rankone(&mut o, &a, 0.2, 0.2 - 7.123456789, RankOneOptions::default(), &mut w).unwrap();
    println!("{e:?} {:?} {:?}", t.elapsed(), o.counts());
    assert!((e.value - 7.123456789).abs() <= 1e-6);
    let e = reconstruct_rankone(&mut o, &a, 1.0, 1.0, RankOneOptions::default(), &mut w).unwrap();
    assert_eq!(e.value, 0.0);
}

#[test]
fn shadows() {
    let e = ModelSpace::euclidean(NumericMode::ExactRational);
    let y = Toward::Point(Point::xy_q(-1, 0, 1));
    let o = Point::xy_q(0, 0, 1);
    assert!(shadow_member(&e, &y, &o, &Toward::Point(Point::xy_q(2, 0, 1))).unwrap());
    assert!(!shadow_member(&e, &y, &o, &Toward::Point(Point::xy_q(0, 1, 1))).unwrap());
    let plus_x = IdealPoint::Direction([Scalar::int(1), Scalar::int(0)]);
    assert!(shadow_member(&e, &y, &o, &Toward::Ideal(plus_x)).unwrap());
    let pts = spherical_shadow_sample(&e, &Point::xy_q(-1, 0, 1), &o, &Scalar::ratio(1, 2), 4).unwrap();
    assert_eq!(pts.len(), 1);
    assert!(e.same_point(&pts[0], &Point::xy_q(1, 0, 2)));

    let f = ModelSpace::euclidean(NumericMode::FloatWithTolerance);
    let y = Point::Plane([Scalar::Float(-2.0), Scalar::Float(0.0)]);
    let x0 = Point::Plane([Scalar::Float(0.0), Scalar::Float(0.0)]);
    let table = shadow_continuity_probe(&f, &y, &x0, 1.0, &[1e-1, 1e-2, 1e-3]).unwrap();
    assert!(monotone_to_zero(&table));
    let (_, eps) = table[2];
    let pred = euclidean_shadow_epsilon(2.0, 1.0, 1e-3);
    assert!((eps - pred).abs() <= 0.1 * pred, "{eps} {pred}");
}
