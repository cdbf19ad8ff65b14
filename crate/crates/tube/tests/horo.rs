use tube::horo::{bridge_chain, chain_transfer, normalize_pair, transfer, AsymptoticChain, Side};
use tube::model_spaces::{IdealPoint, ModelSpace, NumericMode, Point};
use tube::oracle::{GeodesicWitnesses, HoroVerdict, OracleSession};
use tube::scalar::Scalar;
use tube::sequences::make_rsequence;

fn plane() -> ModelSpace {
    ModelSpace::euclidean(NumericMode::ExactRational)
}

#[test]
fn horoball_membership_euclidean() {
    let sp = plane();
    let c = sp.geodesic_through(&Point::xy_q(0, 0, 1), &Point::xy_q(1, 0, 1)).unwrap();
    let s = make_rsequence(&c, Scalar::int(0)).unwrap();
    let mut o = OracleSession::new(sp.clone());
    let mut w = GeodesicWitnesses::new(2);
    assert_eq!(o.horoball_member(&s, 0, &Point::xy_q(5, 0, 1), 10, &mut w), HoroVerdict::Inside);
    assert_eq!(o.horoball_member(&s, 0, &Point::xy_q(-1, 0, 1), 10, &mut w), HoroVerdict::Outside);
    assert_eq!(o.horoball_member(&s, 0, &Point::xy_q(0, 3, 1), 10, &mut w), HoroVerdict::OnHorosphere);
    // too few steps to see the probes of S(y, 1/2) inside
    assert_eq!(o.horoball_member(&s, 0, &Point::xy_q(0, 3, 1), 5, &mut w), HoroVerdict::Indeterminate);
}

#[test]
fn hyperbolic_normalization_residual() {
    let sp = ModelSpace::hyperbolic();
    let a = IdealPoint::Angle(0.3);
    let c1 = sp.geodesic_between_ideals(&a, &IdealPoint::Angle(2.0), &sp.random_point(&mut rand::thread_rng(), 1.0)).unwrap();
    let c2 = sp.geodesic_between_ideals(&a, &IdealPoint::Angle(4.1), &sp.random_point(&mut rand::thread_rng(), 1.0)).unwrap();
    let (n1, n2) = normalize_pair(&sp, &c1, &c2, &a).unwrap();
    let base = n1.at(0.0).unwrap();
    for k in -10..=10 {
        let t = k as f64 * 0.7;
        let b1 = sp.busemann(&a, &base, &n1.at(t).unwrap()).unwrap().to_f64();
        let b2 = sp.busemann(&a, &base, &n2.at(t).unwrap()).unwrap().to_f64();
        assert!((b1 - b2).abs() <= 1e-9, "{b1} {b2}");
    }
    let m = c1.at(1.3).unwrap();
    let img = transfer(&sp, &c1, &c2, &a, &m).unwrap();
    let res = sp.busemann(&a, &m, &img).unwrap().to_f64();
    assert!(res.abs() <= 1e-9);
    let back = transfer(&sp, &c2, &c1, &a, &img).unwrap();
    assert!(sp.dist_f(&back, &m) <= 1e-9);
}

#[test]
fn euclidean_chain_preserves_distances() {
    let sp = plane();
    let l = |x0: i64, y0: i64, x1: i64, y1: i64| sp.geodesic_through(&Point::xy_q(x0, y0, 1), &Point::xy_q(x1, y1, 1)).unwrap();
    let a0 = l(0, 0, 1, 0);
    let a1 = l(3, 2, 5, 2);
    let a2 = l(7, -1, 2, -1);
    let a3 = l(0, 4, 1, 4);
    let chain = AsymptoticChain::new(&sp, vec![a0.clone(), a1, a2, a3], &[Side::Plus, Side::Minus, Side::Plus]).unwrap();
    let pts: Vec<Point> = [-3, 0, 2, 9].iter().map(|&t| a0.eval(&Scalar::ratio(t, 2)).unwrap()).collect();
    let imgs: Vec<Point> = pts.iter().map(|p| chain_transfer(&sp, &chain, p).unwrap()).collect();
    for i in 0..pts.len() {
        for j in 0..pts.len() {
            let d0 = sp.dist_f(&pts[i], &pts[j]);
            let d1 = sp.dist_f(&imgs[i], &imgs[j]);
            assert!((d0 - d1).abs() <= 1e-10);
        }
    }
    let one = AsymptoticChain::new(&sp, vec![a0.clone(), l(0, 1, 1, 1)], &[Side::Plus]).unwrap();
    let direct = transfer(&sp, &a0, &l(0, 1, 1, 1), &a0.end_plus().unwrap(), &pts[1]).unwrap();
    assert!(sp.same_point(&chain_transfer(&sp, &one, &pts[1]).unwrap(), &direct));
}

#[test]
fn broken_chain_rejected() {
    let sp = plane();
    let a = sp.geodesic_through(&Point::xy_q(0, 0, 1), &Point::xy_q(1, 0, 1)).unwrap();
    let b = sp.geodesic_through(&Point::xy_q(0, 0, 1), &Point::xy_q(1, 1, 1)).unwrap();
    assert!(AsymptoticChain::new(&sp, vec![a, b], &[Side::Plus]).is_err());
}

#[test]
fn bridge_chain_hyperbolic() {
    let sp = ModelSpace::hyperbolic();
    let o = Point::Hyper([1.0, 0.0, 0.0]);
    let a = sp.geodesic_between_ideals(&IdealPoint::Angle(0.0), &IdealPoint::Angle(3.0), &o).unwrap();
    let a2 = sp.geodesic_between_ideals(&IdealPoint::Angle(1.5), &IdealPoint::Angle(4.5), &o).unwrap();
    let chain = bridge_chain(&sp, &a, &a2, &o).unwrap();
    assert_eq!(chain.len(), 2);
    let m = a.at(0.4).unwrap();
    let img = chain_transfer(&sp, &chain, &m).unwrap();
    let back = chain_transfer(&sp, &chain.reversed(&sp).unwrap(), &img).unwrap();
    assert!(sp.dist_f(&back, &m) <= 1e-9);
}
