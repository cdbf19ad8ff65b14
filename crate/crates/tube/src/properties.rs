//! Seeded property suites over the shipped spaces.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::horo::transfer;
use crate::model_spaces::tree::MetricTree;
use crate::model_spaces::{Geodesic, ModelSpace, NumericMode, Point, SpaceKind};
use crate::oracle::{GeodesicWitnesses, HoroVerdict, OracleSession, RelationKind, Verdict};
use crate::rankone::{displacement_composed, displacement_formula, Scissors};
use crate::sequences::make_rsequence;

/// Tree used by the tree-based sample spaces: a path `a – b – c` with two
/// rays at each end and one at `b`.
pub const SAMPLE_TREE: &str = "vertex a\nvertex b\nvertex c\nedge a b 1\nedge b c 3/2\nray a\nray a\nray b\nray c\nray c\n";

pub fn sample_tree() -> MetricTree {
    MetricTree::parse(SAMPLE_TREE).expect("sample tree")
}

/// Every shipped space kind, exact where supported.
pub fn shipped_spaces() -> Vec<(&'static str, ModelSpace)> {
    vec![
        ("euclidean", ModelSpace::euclidean(NumericMode::ExactRational)),
        ("hyperbolic", ModelSpace::hyperbolic()),
        ("metric_tree", ModelSpace::metric_tree(sample_tree(), NumericMode::ExactRational)),
        ("tree_cross_line", ModelSpace::tree_cross_line(sample_tree(), NumericMode::ExactRational)),
    ]
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub space: String,
    pub cases: usize,
    /// Largest violation seen (0 when none).
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub note: String,
}

impl SuiteResult {
    pub fn new(suite: &str, space: &str, tolerance: f64) -> Self {
        SuiteResult {
            suite: suite.into(),
            space: space.into(),
            cases: 0,
            worst: 0.0,
            tolerance,
            passed: true,
            note: String::new(),
        }
    }

    /// One case with the given violation of the tolerance bound.
    pub fn record(&mut self, violation: f64) {
        self.cases += 1;
        self.worst = self.worst.max(violation);
        if !(violation <= self.tolerance) {
            self.passed = false;
        }
    }

    pub fn fail(&mut self, msg: String) {
        self.passed = false;
        if self.note.is_empty() {
            self.note = msg;
        }
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn two_points(sp: &ModelSpace, r: &mut ChaCha8Rng, scale: f64) -> (Point, Point) {
    loop {
        let (p, q) = (sp.random_point(r, scale), sp.random_point(r, scale));
        if !sp.same_point(&p, &q) {
            return (p, q);
        }
    }
}

fn line(sp: &ModelSpace, r: &mut ChaCha8Rng, scale: f64) -> Geodesic {
    loop {
        let (p, q) = two_points(sp, r, scale);
        if let Ok(g) = sp.geodesic_through(&p, &q) {
            return g.complete();
        }
    }
}

/// A complete geodesic with both ends representable; in `T × ℝ` these are
/// the horizontal and vertical lines.
fn line_with_ends(sp: &ModelSpace, r: &mut ChaCha8Rng, scale: f64) -> Geodesic {
    loop {
        let c = line(sp, r, scale);
        if c.end_plus().is_some() && c.end_minus().is_some() {
            return c;
        }
        if let (Point::Product(t, h), Point::Product(t2, h2)) = (sp.random_point(r, scale), sp.random_point(r, scale)) {
            let q = if r.gen_bool(0.5) { Point::Product(t2, h.clone()) } else { Point::Product(t.clone(), h2) };
            if let Ok(g) = sp.geodesic_through(&Point::Product(t, h), &q) {
                let g = g.complete();
                if g.end_plus().is_some() && g.end_minus().is_some() {
                    return g;
                }
            }
        }
    }
}

/// Triangle inequality and comparison-triangle thinness, tolerance `10⁻¹⁰`.
pub fn cat0_comparison(name: &str, sp: &ModelSpace, n: usize, seed: u64) -> SuiteResult {
    let mut out = SuiteResult::new("cat0_comparison", name, 1e-10);
    let mut r = rng(seed);
    for _ in 0..n {
        // hyperboloid roundoff grows like e^{2R}; stay within radius 2
        let (p, q) = two_points(sp, &mut r, 2.0);
        let x = sp.random_point(&mut r, 2.0);
        let tri = sp.dist_f(&p, &x) - sp.dist_f(&p, &q) - sp.dist_f(&q, &x);
        out.record(tri.max(0.0));
        match sp.comparison_check((&p, &q, &x), 8) {
            Ok(v) => out.record(v.max(0.0)),
            Err(e) => out.fail(format!("comparison: {e}")),
        }
    }
    out
}

/// Unit speed of geodesics, tolerance `10⁻¹⁰`.
pub fn geodesic_isometry(name: &str, sp: &ModelSpace, n: usize, seed: u64) -> SuiteResult {
    let mut out = SuiteResult::new("geodesic_isometry", name, 1e-10);
    let mut r = rng(seed);
    for _ in 0..n {
        let c = line(sp, &mut r, 2.0);
        let (s, t) = (r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0));
        let (Ok(a), Ok(b)) = (c.at(s), c.at(t)) else {
            out.fail("evaluation".into());
            continue;
        };
        out.record((sp.dist_f(&a, &b) - (s - t).abs()).abs());
    }
    out
}

/// Second differences of `s ↦ d(c₁(sL₁), c₂(sL₂))` on a grid, tolerance `10⁻⁸`.
pub fn convexity(name: &str, sp: &ModelSpace, n: usize, seed: u64) -> SuiteResult {
    let mut out = SuiteResult::new("convexity", name, 1e-8);
    let mut r = rng(seed);
    for _ in 0..n {
        let (p1, q1) = two_points(sp, &mut r, 2.0);
        let (p2, q2) = two_points(sp, &mut r, 2.0);
        let (Ok(c1), Ok(c2)) = (sp.geodesic_through(&p1, &q1), sp.geodesic_through(&p2, &q2)) else { continue };
        let (l1, l2) = (sp.dist_f(&p1, &q1), sp.dist_f(&p2, &q2));
        let f: Vec<f64> = (0..=16)
            .map(|k| {
                let s = k as f64 / 16.0;
                sp.dist_f(&c1.at(s * l1).expect("in segment"), &c2.at(s * l2).expect("in segment"))
            })
            .collect();
        for w in f.windows(3) {
            out.record((-(w[0] - 2.0 * w[1] + w[2])).max(0.0));
        }
    }
    out
}

/// `|β(x) − β(y)| ≤ d(x, y)`, tolerance `10⁻¹⁰`.
pub fn busemann_lipschitz(name: &str, sp: &ModelSpace, n: usize, seed: u64) -> SuiteResult {
    let mut out = SuiteResult::new("busemann_lipschitz", name, 1e-10);
    let mut r = rng(seed);
    for _ in 0..n {
        let c = line_with_ends(sp, &mut r, 2.0);
        let Some(xi) = (if r.gen_bool(0.5) { c.end_plus() } else { c.end_minus() }) else { continue };
        let base = sp.random_point(&mut r, 2.0);
        let (x, y) = two_points(sp, &mut r, 3.0);
        match (sp.busemann(&xi, &base, &x), sp.busemann(&xi, &base, &y)) {
            (Ok(bx), Ok(by)) => out.record(((bx.to_f64() - by.to_f64()).abs() - sp.dist_f(&x, &y)).max(0.0)),
            _ => out.fail("busemann".into()),
        }
    }
    out
}

/// `R₂₁ ∘ R₁₂ = id` and `R₁₂` is an isometry of parametrizations,
/// tolerance `10⁻⁹`.
pub fn transfer_invertibility(name: &str, sp: &ModelSpace, n: usize, seed: u64) -> SuiteResult {
    let mut out = SuiteResult::new("transfer_invertibility", name, 1e-9);
    let mut r = rng(seed);
    for _ in 0..n {
        let c1 = line(sp, &mut r, 1.5);
        let Some(xi) = c1.end_plus() else { continue };
        let y = sp.random_point(&mut r, 1.5);
        let Ok(c2) = sp.geodesic_to_ideal(&y, &xi) else { continue };
        let c2 = c2.complete();
        let (s, t) = (r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0));
        let (m, m2) = (c1.at(s).expect("complete"), c1.at(t).expect("complete"));
        let run = || -> Result<(f64, f64), crate::horo::HoroError> {
            let a = transfer(sp, &c1, &c2, &xi, &m)?;
            let b = transfer(sp, &c1, &c2, &xi, &m2)?;
            let back = transfer(sp, &c2, &c1, &xi, &a)?;
            Ok((sp.dist_f(&back, &m), (sp.dist_f(&a, &b) - (s - t).abs()).abs()))
        };
        match run() {
            Ok((e1, e2)) => {
                out.record(e1);
                out.record(e2);
            }
            Err(e) => out.fail(format!("transfer: {e}")),
        }
    }
    out
}

/// `δT ≥ 0` on random hyperbolic scissors, with the formula matching the
/// composed transfers within `10⁻⁸`.
pub fn displacement_nonnegative(name: &str, sp: &ModelSpace, n: usize, seed: u64) -> SuiteResult {
    let mut out = SuiteResult::new("displacement_nonnegative", name, 1e-8);
    if sp.kind() != SpaceKind::HyperbolicPlane {
        out.note = "hyperbolic only".into();
        return out;
    }
    let mut r = rng(seed);
    for _ in 0..n {
        let (p, q) = two_points(sp, &mut r, 0.5);
        let Ok(a) = sp.geodesic_through(&p, &q) else { continue };
        let t0 = r.gen_range(-1.0..1.0);
        let h = r.gen_range(0.01..1.0) * if r.gen_bool(0.5) { 1.0 } else { -1.0 };
        let Ok(s) = Scissors::from_center(sp, &a, t0, h) else { continue };
        match (displacement_formula(sp, &s), displacement_composed(sp, &s)) {
            (Ok(f), Ok(c)) => {
                out.record((-f).max(0.0));
                out.record((f - c).abs());
                if !(f > 0.0) {
                    out.fail(format!("δ = {f} for a scissors off its base"));
                }
            }
            _ => out.fail("displacement".into()),
        }
    }
    out
}

/// Horoball verdicts are monotone in `N_max` and settle on the sign of
/// `β(y) − β(x₀)` when it is at least `0.25` in size.
pub fn horoball_convergence(name: &str, sp: &ModelSpace, n: usize, seed: u64) -> SuiteResult {
    let mut out = SuiteResult::new("horoball_convergence", name, 0.0);
    let mut r = rng(seed);
    let mut session = OracleSession::new(sp.clone());
    let mut w = GeodesicWitnesses::new(1);
    // float hyperboloid coordinates are unusable far beyond radius 10
    let levels: &[u32] = if sp.is_exact() { &[1, 2, 4, 8, 16, 32] } else { &[1, 2, 4, 8] };
    for _ in 0..n {
        let c = line_with_ends(sp, &mut r, 1.0);
        let Some(xi) = c.end_plus() else { continue };
        let Ok(s) = make_rsequence(&c, sp.zero()) else { continue };
        let y = sp.random_point(&mut r, 1.5);
        let Ok(b) = sp.busemann(&xi, &s.at(0), &y) else { continue };
        let b = b.to_f64();
        let mut settled: Option<HoroVerdict> = None;
        let mut bad = 0.0;
        for &nm in levels {
            let v = session.horoball_member(&s, 0, &y, nm, &mut w);
            if matches!(v, HoroVerdict::Inside | HoroVerdict::Outside) {
                if settled.is_some_and(|p| p != v) {
                    bad = 1.0;
                }
                settled = Some(v);
            } else if settled.is_some() {
                bad = 1.0;
            }
        }
        if b.abs() >= 0.25 {
            let want = if b < 0.0 { HoroVerdict::Inside } else { HoroVerdict::Outside };
            if settled != Some(want) {
                bad = 1.0;
            }
        }
        out.record(bad);
    }
    out
}

/// Relation verdicts against the model distance: zero mismatches, at most
/// 1% indeterminate.
#[derive(Clone, Debug, serde::Serialize)]
pub struct Soundness {
    pub space: String,
    pub pairs: usize,
    pub mismatches: usize,
    pub indeterminate: usize,
    pub oracle_calls: u64,
}

impl Soundness {
    pub fn passed(&self) -> bool {
        self.mismatches == 0 && self.indeterminate * 100 <= self.pairs
    }
}

pub fn relation_soundness(name: &str, sp: &ModelSpace, pairs: usize, seed: u64) -> Soundness {
    let mut r = rng(seed);
    let mut session = OracleSession::new(sp.clone());
    let mut w = GeodesicWitnesses::new(1);
    let mut out = Soundness { space: name.into(), pairs, mismatches: 0, indeterminate: 0, oracle_calls: 0 };
    for i in 0..pairs {
        let x = sp.random_point(&mut r, 2.0);
        // in exact mode every fourth pair sits on an integer sphere
        let y = if sp.is_exact() && i % 4 == 0 {
            let z = sp.random_point(&mut r, 2.0);
            match sp.geodesic_through(&x, &z) {
                Ok(g) => g.complete().at(r.gen_range(1..4) as f64).expect("complete"),
                Err(_) => z,
            }
        } else {
            sp.random_point(&mut r, 2.0)
        };
        let d = sp.distance(&x, &y).expect("same space");
        let n = r.gen_range(1..=4u32);
        let kind = [RelationKind::Closed, RelationKind::Boundary, RelationKind::Interior][r.gen_range(0..3)];
        if !sp.is_exact() && (d.value().to_f64() - n as f64).abs() <= 1e-9 {
            // inside the refusal band
            out.pairs -= 1;
            continue;
        }
        let v = session.relation_member(&x, &y, kind, n, &mut w);
        let c = d.cmp_int(n as i64);
        let truth = match kind {
            RelationKind::Closed => c.is_le(),
            RelationKind::Boundary => c.is_eq(),
            RelationKind::Interior => c.is_lt(),
        };
        match v {
            Verdict::Indeterminate => out.indeterminate += 1,
            v if (v == Verdict::True) != truth => out.mismatches += 1,
            _ => {}
        }
    }
    out.oracle_calls = session.counts().total;
    out
}

/// All geometric suites that apply to one space.
pub fn run_space(name: &str, sp: &ModelSpace, n: usize, seed: u64) -> Vec<SuiteResult> {
    let mut out = vec![
        cat0_comparison(name, sp, n, seed),
        geodesic_isometry(name, sp, n, seed + 1),
        convexity(name, sp, n / 4, seed + 2),
        busemann_lipschitz(name, sp, n, seed + 3),
    ];
    if matches!(sp.kind(), SpaceKind::EuclideanPlane | SpaceKind::HyperbolicPlane) {
        out.push(transfer_invertibility(name, sp, n, seed + 4));
    }
    if sp.kind() == SpaceKind::HyperbolicPlane {
        out.push(displacement_nonnegative(name, sp, n, seed + 5));
    }
    out.push(horoball_convergence(name, sp, n / 10, seed + 6));
    out
}

/// All geometric suites on every shipped space.
pub fn run_all(n: usize, seed: u64) -> Vec<SuiteResult> {
    shipped_spaces().into_iter().flat_map(|(name, sp)| run_space(name, &sp, n, seed)).collect()
}
