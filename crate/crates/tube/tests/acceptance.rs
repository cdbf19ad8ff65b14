//! One line per acceptance criterion; exits nonzero if any fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use tube::batch::{displacement_cases, flat_cases, rankone_cases, summarize};
use tube::exact::Rational;
use tube::flatstrip::{build_tape, tape_width, FlatStrip, Tape, TapeIndex};
use tube::model_spaces::{IdealPoint, ModelSpace, NumericMode, Point};
use tube::properties::{relation_soundness, run_all, sample_tree, shipped_spaces};
use tube::rankone::{
    displacement_continuity_probe, euclidean_shadow_epsilon, monotone_to_zero, shadow_continuity_probe,
    RankOneOptions, Scissors,
};
use tube::scalar::Scalar;
use tube::sequences::make_rsequence;

struct Line {
    ok: bool,
    budget: Option<Duration>,
}

fn report(n: u32, name: &str, start: Instant, budget: Option<Duration>, ok: bool, detail: String) -> Line {
    let took = start.elapsed();
    let in_time = budget.is_none_or(|b| took < b);
    let pass = ok && in_time;
    let limit = budget.map_or(String::new(), |b| format!(" (limit {:.0}s)", b.as_secs_f64()));
    println!(
        "[{}] {n}. {name}: {detail}; {:.2}s{limit}",
        if pass { "PASS" } else { "FAIL" },
        took.as_secs_f64()
    );
    Line { ok: pass, budget }
}

fn tape(sp: &ModelSpace, p: u32, phase: Scalar) -> Tape {
    let c = sp.geodesic_through(&Point::xy_q(1, 2, 3), &Point::xy_q(4, 6, 3)).unwrap().complete();
    let strip = FlatStrip::maximal(sp, &c).unwrap();
    build_tape(&strip, &make_rsequence(&c, phase).unwrap(), p).unwrap()
}

fn width_law() -> Line {
    let start = Instant::now();
    let sp = ModelSpace::euclidean(NumericMode::ExactRational);
    let mut worst: f64 = 0.0;
    for p in 1..=8 {
        let t = tape(&sp, p, Scalar::ratio(1, 7));
        for j in 1..=p {
            let top = t.point(TapeIndex { i: 3, j, z: 0 });
            let (_, foot) = sp.project(&top, &t.strip().lower).unwrap();
            worst = worst.max((sp.dist_f(&top, &foot) - tape_width(p)).abs());
        }
    }
    report(1, "tape width law", start, Some(Duration::from_secs(5)), worst <= 1e-9, format!("max |sep − s(p)| = {worst:.1e}"))
}

fn rational_points() -> Line {
    let start = Instant::now();
    let sp = ModelSpace::euclidean(NumericMode::ExactRational);
    let c = sp.geodesic_through(&Point::xy_q(1, 2, 3), &Point::xy_q(4, 6, 3)).unwrap().complete();
    let phase = Scalar::ratio(-2, 5);
    let (mut checked, mut bad, mut worst) = (0, 0, 0.0f64);
    for p in 1..=12u32 {
        let t = tape(&sp, p, phase.clone());
        // brute force: every base point of the tape with offset in [−4, 4]
        let phi = t.base_param(1, 0);
        let mut e: BTreeMap<Rational, Vec<TapeIndex>> = BTreeMap::new();
        let span = 4 + 2 * p as i64 + 2;
        for j in 1..=p {
            for z in -span..=span {
                let off = (&t.base_param(j, z) - &phi).as_rational().unwrap();
                if off.abs() <= Rational::from_int(4) {
                    e.entry(off).or_default().push(TapeIndex { i: 0, j, z });
                }
            }
        }
        for n in (1..=6i64).filter(|n| p as i64 % n == 0) {
            for m in 1..3 * n {
                let q = Rational::new(m, n);
                if q.denom() != n.into() {
                    continue;
                }
                let (pt, ix) = t.rational_point(&q).unwrap();
                let want = c.eval(&(&phase + &Scalar::rational(q.clone()))).unwrap();
                worst = worst.max(sp.dist_f(&pt, &want));
                if e.get(&q) != Some(&vec![ix]) {
                    bad += 1;
                }
                checked += 1;
            }
        }
    }
    report(
        2,
        "rational-point recovery",
        start,
        Some(Duration::from_secs(10)),
        bad == 0 && worst <= 1e-9 && checked > 0,
        format!("{checked} (q, p) pairs, {bad} index mismatches, max error {worst:.1e}"),
    )
}

fn flat_reconstruction() -> Line {
    let start = Instant::now();
    let spaces = [
        ("euclidean", ModelSpace::euclidean(NumericMode::ExactRational)),
        ("tree_cross_line", ModelSpace::tree_cross_line(sample_tree(), NumericMode::ExactRational)),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, sp) in spaces {
        let cases = flat_cases(&sp, 100, 2024, 1e-6, false);
        let (worst, failed) = summarize(&cases);
        let inexact = cases.iter().filter(|c| !c.exact_ok()).count();
        ok &= worst <= 1e-6 && failed == 0 && inexact == 0;
        parts.push(format!("{name}: 100 pairs, max error {worst:.1e}, {failed} failed, {inexact} rationals not exact"));
    }
    report(3, "flat reconstruction", start, Some(Duration::from_secs(60)), ok, parts.join("; "))
}

fn displacement_triples() -> Line {
    let start = Instant::now();
    let sp = ModelSpace::hyperbolic();
    let n = 1000u64;
    let recs = displacement_cases(&sp, 20, n, 7);
    let (mut ok, mut fc, mut lo, mut hi) = (true, 0.0f64, f64::INFINITY, f64::NEG_INFINITY);
    let mut failed = 0;
    for r in &recs {
        match r {
            Ok(r) => {
                let d = r.delta_oracle - r.delta_formula;
                fc = fc.max((r.delta_formula - r.delta_composed).abs());
                lo = lo.min(d);
                hi = hi.max(d);
                ok &= (r.delta_formula - r.delta_composed).abs() <= 1e-8 && d > -1.0 / n as f64 && d <= 1e-8;
            }
            Err(_) => failed += 1,
        }
    }
    ok &= failed == 0;
    report(
        4,
        "displacement triples",
        start,
        Some(Duration::from_secs(60)),
        ok,
        format!("20 scissors, n = {n}, max |formula − composed| = {fc:.1e}, oracle − formula ∈ [{lo:.2e}, {hi:.2e}], {failed} failed"),
    )
}

fn rankone() -> Line {
    let start = Instant::now();
    let cases = rankone_cases(&ModelSpace::hyperbolic(), 100, 99, RankOneOptions::default(), false);
    let (worst, failed) = summarize(&cases);
    let floors = cases.iter().filter(|c| c.floor.is_some_and(|f| f == c.truth.floor() as u64)).count();
    report(
        5,
        "rank-one reconstruction",
        start,
        Some(Duration::from_secs(300)),
        worst <= 1e-6 && failed == 0 && floors == 100,
        format!("100 pairs, max error {worst:.1e}, {failed} failed, {floors}/100 integer parts certified"),
    )
}

fn soundness() -> Line {
    let start = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for (i, (name, sp)) in shipped_spaces().into_iter().enumerate() {
        let s = relation_soundness(name, &sp, 10_000, 31 + i as u64);
        ok &= s.passed();
        parts.push(format!("{name} {}/{}", s.mismatches, s.indeterminate));
    }
    report(6, "relation soundness", start, None, ok, format!("10^4 pairs per space, mismatches/indeterminate: {}", parts.join(", ")))
}

fn suites() -> Line {
    let start = Instant::now();
    let res = run_all(400, 17);
    let failed: Vec<String> = res.iter().filter(|r| !r.passed).map(|r| format!("{}/{}", r.suite, r.space)).collect();
    report(
        7,
        "property suites",
        start,
        Some(Duration::from_secs(120)),
        failed.is_empty(),
        format!("{} suites, failed: [{}]", res.len(), failed.join(", ")),
    )
}

fn continuity() -> Line {
    let start = Instant::now();
    let f = ModelSpace::euclidean(NumericMode::FloatWithTolerance);
    let y = Point::Plane([Scalar::Float(-2.0), Scalar::Float(0.0)]);
    let x0 = Point::Plane([Scalar::Float(0.0), Scalar::Float(0.0)]);
    let deltas = [1e-1, 1e-2, 1e-3];
    let table = shadow_continuity_probe(&f, &y, &x0, 1.0, &deltas).unwrap();
    let eps = table[2].1;
    let pred = euclidean_shadow_epsilon(2.0, 1.0, 1e-3);
    let rel = (eps - pred).abs() / pred;

    let h = ModelSpace::hyperbolic();
    let o = Point::Hyper([1.0, 0.0, 0.0]);
    let a = h
        .geodesic_between_ideals(&IdealPoint::Angle(0.0), &IdealPoint::Angle(std::f64::consts::PI), &o)
        .unwrap();
    let hy = a.at(-1.5).unwrap();
    let hshadow = shadow_continuity_probe(&h, &hy, &o, 1.0, &deltas).unwrap();
    let s = Scissors::from_center(&h, &a, 0.4, 0.35).unwrap();
    let disp = displacement_continuity_probe(&h, &s, &[1e-2, 1e-3, 1e-4]).unwrap();

    let ok = monotone_to_zero(&table) && monotone_to_zero(&hshadow) && monotone_to_zero(&disp) && rel <= 0.1;
    report(
        8,
        "continuity probes",
        start,
        None,
        ok,
        format!("euclidean ε(1e-3) = {eps:.4e} vs closed form {pred:.4e} ({:.1}%); ε and |Δδ| tables monotone: {}", 100.0 * rel, ok),
    )
}

fn main() -> ExitCode {
    let lines = [
        width_law(),
        rational_points(),
        flat_reconstruction(),
        displacement_triples(),
        rankone(),
        soundness(),
        suites(),
        continuity(),
    ];
    let passed = lines.iter().filter(|l| l.ok).count();
    let timed = lines.iter().filter(|l| l.budget.is_some()).count();
    println!("acceptance: {passed}/{} criteria passed ({timed} with runtime limits)", lines.len());
    if passed == lines.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
