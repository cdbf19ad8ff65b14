use std::collections::BTreeMap;

use tube::exact::Rational;
use tube::flatstrip::{build_tape, tape_width, FlatStrip, Tape, TapeIndex};
use tube::model_spaces::{ModelSpace, NumericMode, Point};
use tube::oracle::{GeodesicWitnesses, OracleSession, Verdict};
use tube::scalar::Scalar;
use tube::sequences::make_rsequence;

fn tape(sp: &ModelSpace, p: u32, phase: Scalar) -> Tape {
    let c = sp.geodesic_through(&Point::xy_q(1, 2, 3), &Point::xy_q(4, 6, 3)).unwrap().complete();
    let strip = FlatStrip::maximal(sp, &c).unwrap();
    build_tape(&strip, &make_rsequence(&c, phase).unwrap(), p).unwrap()
}

#[test]
fn width_law() {
    let sp = ModelSpace::euclidean(NumericMode::ExactRational);
    let mut o = OracleSession::new(sp.clone());
    let mut w = GeodesicWitnesses::new(1);
    for p in 1..=8 {
        let t = tape(&sp, p, Scalar::ratio(1, 7));
        let lower = &t.strip().lower;
        for j in 1..=p {
            let top = t.point(TapeIndex { i: 3, j, z: 0 });
            let (_, foot) = sp.project(&top, lower).unwrap();
            let sep = sp.dist_f(&top, &foot);
            assert!((sep - tape_width(p)).abs() <= 1e-9, "p={p} {sep}");
        }
        assert_eq!(t.certify(&mut o, &mut w), Verdict::True, "p={p}");
        // neighbouring levels are at unit distance
        for j in 1..=p {
            for i in 0..3u8 {
                let a = t.point(TapeIndex { i, j, z: 0 });
                let b = t.point(t.normalize(i + 1, j as i64, 0));
                assert!((sp.dist_f(&a, &b) - 1.0).abs() < 1e-12);
            }
        }
    }
}

/// All base points with offsets in `[−r, r]`, keyed by exact offset.
fn enumerate(t: &Tape, r: i64) -> BTreeMap<Rational, Vec<TapeIndex>> {
    let phi = t.base_param(1, 0);
    let mut out: BTreeMap<Rational, Vec<TapeIndex>> = BTreeMap::new();
    let span = r + 2 * t.p as i64 + 2;
    for j in 1..=t.p {
        for z in -span..=span {
            let off = &t.base_param(j, z) - &phi;
            let off = off.as_rational().unwrap();
            if off.abs() <= Rational::from_int(r) {
                out.entry(off).or_default().push(TapeIndex { i: 0, j, z });
            }
        }
    }
    out
}

#[test]
fn subdivision_law() {
    let sp = ModelSpace::euclidean(NumericMode::ExactRational);
    for p in 1..=12 {
        let t = tape(&sp, p, Scalar::int(0));
        let e = enumerate(&t, 3);
        let want: Vec<Rational> = (-3 * p as i64..=3 * p as i64).map(|b| Rational::new(b, p as i64)).collect();
        assert_eq!(e.keys().cloned().collect::<Vec<_>>(), want, "p={p}");
        assert!(e.values().all(|v| v.len() == 1), "p={p}");
        for b in 0..p as i64 {
            let ix = t.residue_index(b);
            assert_eq!(e[&Rational::new(b, p as i64)], vec![ix]);
        }
    }
}

#[test]
fn rational_points_match_enumeration() {
    let sp = ModelSpace::euclidean(NumericMode::ExactRational);
    let c = sp.geodesic_through(&Point::xy_q(1, 2, 3), &Point::xy_q(4, 6, 3)).unwrap().complete();
    let mut checked = 0;
    for p in 1..=12u32 {
        let t = tape(&sp, p, Scalar::ratio(-2, 5));
        let e = enumerate(&t, 4);
        for n in 1..=6i64 {
            if p as i64 % n != 0 {
                continue;
            }
            for m in 1..3 * n {
                if (1..=n).any(|g| g > 1 && m % g == 0 && n % g == 0) {
                    continue;
                }
                let q = Rational::new(m, n);
                let (pt, ix) = t.rational_point(&q).unwrap();
                let want = c.eval(&(&Scalar::ratio(-2, 5) + &Scalar::rational(q.clone()))).unwrap();
                assert!(sp.dist_f(&pt, &want) <= 1e-9, "p={p} q={q}");
                assert_eq!(e[&q], vec![ix], "p={p} q={q}");
                checked += 1;
            }
        }
    }
    assert!(checked > 100);
    // non-multiples are refused
    let t = tape(&sp, 4, Scalar::int(0));
    assert!(t.rational_point(&Rational::new(1, 3)).is_err());
}

#[test]
fn csv_export() {
    let sp = ModelSpace::euclidean(NumericMode::ExactRational);
    let csv = tape(&sp, 3, Scalar::int(0)).csv(5);
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "i,j,z,u,t");
    assert_eq!(rows.len(), 1 + 4 * 3 * 11);
}
