//! Scenario execution.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tube::batch::{centered_record, centered_scissors, flat_cases, rankone_cases, CaseRecord};
use tube::flatstrip::{build_tape, min_tape_order, tape_width, FlatStrip, TapeIndex};
use tube::model_spaces::{Geodesic, ModelSpace, Point};
use tube::oracle::{GeodesicWitnesses, OracleSession, Verdict};
use tube::properties::{relation_soundness, run_space, SuiteResult};
use tube::rankone::{displacement_formula, RankOneOptions, Scissors};
use tube::sequences::{make_rsequence, RankOptions};

use crate::config::{Scenario, ScenarioConfig};
use crate::report::{CurvePoint, Polyline, Report, TapeReport};

pub fn run(cfg: &ScenarioConfig) -> Report {
    let mut rep = Report::new(cfg.scenario.name(), &cfg.space_name, cfg.echo.clone());
    let res = match cfg.scenario {
        Scenario::ReconstructFlat => reconstruct_flat(cfg, &mut rep),
        Scenario::ReconstructRankone => reconstruct_rankone(cfg, &mut rep),
        Scenario::VerifyProperties => verify_properties(cfg, &mut rep),
        Scenario::TapeDemo => tape_demo(cfg, &mut rep),
        Scenario::ScissorsDemo => scissors_demo(cfg, &mut rep),
    };
    if let Err(e) = res {
        rep.failure = Some(e);
    }
    rep.passed = rep.failure.is_none() && !rep.suites.is_empty() && rep.suites.iter().all(|s| s.passed);
    rep
}

/// Case-level verdict: every error within `tol`, no failures.
fn case_suite(name: &str, space: &str, tol: f64, cases: &[CaseRecord]) -> SuiteResult {
    let mut s = SuiteResult::new(name, space, tol);
    for c in cases {
        match (&c.failure, c.error) {
            (Some(f), _) => s.fail(format!("{} → {}: {f}", c.t1, c.t2)),
            (None, Some(e)) => s.record(e),
            (None, None) => s.fail("no value".into()),
        }
    }
    s
}

fn reconstruct_flat(cfg: &ScenarioConfig, rep: &mut Report) -> Result<(), String> {
    let cases = flat_cases(&cfg.space, cfg.cases, cfg.seed, cfg.tolerance, cfg.timing);
    let mut suite = case_suite("reconstruct_flat", &cfg.space_name, cfg.tolerance, &cases);
    if let Some(c) = cases.iter().find(|c| !c.exact_ok()) {
        suite.fail(format!("{} → {}: rational offset not recovered exactly", c.t1, c.t2));
    }
    rep.oracle_calls = cases.iter().map(|c| c.oracle_calls).sum();
    rep.suites.push(suite);
    rep.cases = cases;
    Ok(())
}

fn reconstruct_rankone(cfg: &ScenarioConfig, rep: &mut Report) -> Result<(), String> {
    let opts = RankOneOptions {
        tol: cfg.tolerance,
        offset: cfg.offset,
        check_rank: true,
        rank: RankOptions { k_max: cfg.k_max, window: cfg.window, candidates: cfg.candidates },
    };
    let cases = rankone_cases(&cfg.space, cfg.cases, cfg.seed, opts, cfg.timing);
    let mut suite = case_suite("reconstruct_rankone", &cfg.space_name, cfg.tolerance, &cases);
    if let Some(c) = cases.iter().find(|c| c.failure.is_none() && c.floor != Some(c.truth.floor() as u64)) {
        suite.fail(format!("{} → {}: certified integer part {:?}", c.t1, c.t2, c.floor));
    }
    rep.oracle_calls = cases.iter().map(|c| c.oracle_calls).sum();
    rep.suites.push(suite);
    rep.cases = cases;
    Ok(())
}

fn verify_properties(cfg: &ScenarioConfig, rep: &mut Report) -> Result<(), String> {
    rep.suites = run_space(&cfg.space_name, &cfg.space, cfg.cases, cfg.seed);
    let snd = relation_soundness(&cfg.space_name, &cfg.space, cfg.pairs, cfg.seed);
    let mut s = SuiteResult::new("relation_soundness", &cfg.space_name, 0.0);
    s.cases = snd.pairs;
    s.worst = snd.mismatches as f64;
    if !snd.passed() {
        s.fail(format!("{} mismatches, {} indeterminate", snd.mismatches, snd.indeterminate));
    }
    rep.suites.push(s);
    rep.oracle_calls = snd.oracle_calls;
    rep.soundness = Some(snd);
    Ok(())
}

fn random_line(sp: &ModelSpace, seed: u64) -> Geodesic {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let (a, b) = (sp.random_point(&mut rng, 3.0), sp.random_point(&mut rng, 3.0));
        if let Ok(c) = sp.geodesic_through(&a, &b) {
            return c.complete();
        }
    }
}

fn tape_demo(cfg: &ScenarioConfig, rep: &mut Report) -> Result<(), String> {
    let sp = &cfg.space;
    let c = random_line(sp, cfg.seed);
    let strip = FlatStrip::maximal(sp, &c).map_err(|e| e.to_string())?;
    let p = cfg.order;
    let min = min_tape_order(strip.width.as_ref());
    if p <= min {
        return Err(format!("order {p} does not fit the strip; need more than {min}"));
    }
    let base = make_rsequence(&c, sp.zero()).map_err(|e| e.to_string())?;
    let tape = build_tape(&strip, &base, p).map_err(|e| e.to_string())?;

    let mut width = SuiteResult::new("tape_width", &cfg.space_name, 1e-9);
    for j in 1..=p {
        let top = tape.point(TapeIndex { i: 3, j, z: 0 });
        let (_, foot) = sp.project(&top, &strip.lower).map_err(|e| e.to_string())?;
        width.record((sp.dist_f(&top, &foot) - tape_width(p)).abs());
    }
    let mut session = OracleSession::new(sp.clone());
    let mut w = GeodesicWitnesses::new(cfg.seed);
    let v = tape.certify(&mut session, &mut w);
    let mut rel = SuiteResult::new("tape_relations", &cfg.space_name, 0.0);
    rel.cases = 2 * p as usize;
    if v != Verdict::True {
        rel.fail(format!("relations certified {v:?}"));
    }
    rep.suites.extend([width, rel]);
    rep.oracle_calls = session.counts().total;
    rep.tape = Some(TapeReport {
        p,
        width: tape_width(p),
        certified: v == Verdict::True,
        window: cfg.tape_window,
        rows: tape.rows(cfg.tape_window),
    });
    Ok(())
}

fn disk(p: &Point) -> Option<(f64, f64)> {
    match p {
        Point::Hyper([t, x, y]) => Some((x / (1.0 + t), y / (1.0 + t))),
        _ => None,
    }
}

fn polylines(id: usize, s: &Scissors) -> Vec<Polyline> {
    let mut out = Vec::new();
    for (line, g) in [("a", &s.a), ("b", &s.b), ("c", &s.c), ("d", &s.d)] {
        let points = (-16..=16)
            .filter_map(|k| {
                let t = k as f64 / 4.0;
                let (x, y) = disk(&g.at(t).ok()?)?;
                Some([t, x, y])
            })
            .collect();
        out.push(Polyline { scissors: id, line, points });
    }
    out
}

fn scissors_demo(cfg: &ScenarioConfig, rep: &mut Report) -> Result<(), String> {
    let sp = &cfg.space;
    let n = cfg.iterations;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut session = OracleSession::new(sp.clone());
    let mut w = GeodesicWitnesses::new(cfg.seed);
    let mut agree = SuiteResult::new("formula_vs_composed", &cfg.space_name, 1e-8);
    let mut limit = SuiteResult::new("oracle_floor_limit", &cfg.space_name, 1.0 / n as f64);
    let result = (|| -> Result<(), String> {
        for id in 0..cfg.cases {
            let (a, s) = centered_scissors(sp, &mut rng)?;
            let r = centered_record(&mut session, &a, &s, n, &mut w)?;
            agree.record((r.delta_formula - r.delta_composed).abs());
            // δ_oracle ∈ (δ_formula − 1/n, δ_formula + 1e-8]
            let below = r.delta_formula - r.delta_oracle;
            limit.record(below.max(0.0));
            if !(below < 1.0 / n as f64 && r.delta_oracle <= r.delta_formula + 1e-8) {
                limit.fail(format!("scissors {id}: oracle {} vs formula {}", r.delta_oracle, r.delta_formula));
            }
            if id == 0 {
                let d = displacement_formula(sp, &s).map_err(|e| e.to_string())?;
                let mut k = 10u64;
                while k < n {
                    for m in [1, 2, 5] {
                        if m * k < n {
                            let e = centered_record(&mut session, &a, &s, m * k, &mut w)?;
                            rep.error_curve.push(CurvePoint { n: m * k, error: d - e.delta_oracle });
                        }
                    }
                    k *= 10;
                }
                rep.error_curve.push(CurvePoint { n, error: d - r.delta_oracle });
            }
            rep.scissors.extend(polylines(id, &s));
            rep.displacement.push(r);
        }
        Ok(())
    })();
    rep.suites.extend([agree, limit]);
    rep.oracle_calls = session.counts().total;
    result
}
