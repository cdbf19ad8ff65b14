use std::time::Instant;

use tube::properties::{relation_soundness, run_all, shipped_spaces};

#[test]
fn geometric_suites() {
    let t = Instant::now();
    let res = run_all(400, 17);
    for r in &res {
        println!("{:<26} {:<16} cases {:>5} worst {:.3e} {}", r.suite, r.space, r.cases, r.worst, if r.passed { "ok" } else { &r.note });
    }
    println!("{:?}", t.elapsed());
    assert!(res.iter().all(|r| r.passed && r.cases > 0));
}

#[test]
fn relation_soundness_per_space() {
    for (name, sp) in shipped_spaces() {
        let t = Instant::now();
        let s = relation_soundness(name, &sp, 10_000, 3);
        println!("{s:?} {:?}", t.elapsed());
        assert!(s.passed());
    }
}

#[test]
fn unit_filter_agrees_with_exact() {
    use rand::{Rng, SeedableRng};
    use tube::scalar::Scalar;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
    for (name, sp) in shipped_spaces().into_iter().filter(|(_, sp)| sp.is_exact()) {
        let (mut decided, mut deferred) = (0, 0);
        for i in 0..4000 {
            let x = sp.random_point(&mut rng, 3.0);
            let y = match i % 3 {
                0 => sp.random_point(&mut rng, 3.0),
                // on the unit sphere, or just off it
                k => {
                    let r = if k == 1 { Scalar::int(1) } else { Scalar::ratio(1_000_000_000 + rng.gen_range(-3..=3), 1_000_000_000) };
                    let pts = sp.sphere_points(&x, &r, &[rng.gen_range(0.0..std::f64::consts::TAU)]);
                    let Some(p) = pts.into_iter().next() else { continue };
                    p
                }
            };
            let exact = sp.distance(&x, &y).unwrap().cmp_int(1);
            match sp.unit_filter(&x, &y) {
                Some(o) => {
                    assert_eq!(o, exact, "{name} {x:?} {y:?}");
                    decided += 1;
                }
                None => deferred += 1,
            }
        }
        println!("{name}: decided {decided}, deferred {deferred}");
        assert!(decided > 0 && deferred > 0);
    }
}
