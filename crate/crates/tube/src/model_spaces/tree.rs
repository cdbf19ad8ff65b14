//! Finite metric trees with infinite rays attached at vertices.
//!
//! Text format, one item per line (`#` starts a comment):
//!
//! ```text
//! vertex a
//! vertex b
//! edge a b 3/2
//! ray a
//! ray b
//! ```
//!
//! Edge lengths are positive rationals (`p/q`, integers or decimals).

use std::cmp::Ordering;

use smallvec::SmallVec;

use crate::exact::Rational;
use crate::scalar::Scalar;

use super::GeometryError;

/// A closed edge or an infinite ray. Edges sort before rays; this order is
/// what "lexicographically smallest continuation" refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Seg {
    Edge(usize),
    Ray(usize),
}

#[derive(Clone, Debug)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub length: Rational,
}

/// Point on a segment, `offset` measured from the edge's `u` end or from the
/// ray's attachment vertex.
#[derive(Clone, Debug)]
pub struct TreePoint {
    pub seg: Seg,
    pub offset: Scalar,
}

/// A direction of travel along a segment; `forward` means increasing offset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Germ {
    pub seg: Seg,
    pub forward: bool,
}

#[derive(Clone, Debug)]
pub struct MetricTree {
    names: Vec<String>,
    edges: Vec<Edge>,
    rays: Vec<usize>,
    adj: Vec<Vec<Germ>>,
    vdist: Vec<Vec<Rational>>,
    hop: Vec<Vec<Option<Germ>>>,
}

impl MetricTree {
    pub fn new(
        names: Vec<String>,
        edges: Vec<Edge>,
        rays: Vec<usize>,
    ) -> Result<Self, GeometryError> {
        let n = names.len();
        let bad = |m: String| Err(GeometryError::BadTree(m));
        if n == 0 {
            return bad("no vertices".into());
        }
        if rays.len() < 2 {
            return bad("at least two rays are required".into());
        }
        let mut adj = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            if e.u >= n || e.v >= n {
                return bad(format!("edge {} references a missing vertex", i));
            }
            if e.u == e.v {
                return bad(format!("edge {} is a loop", i));
            }
            if e.length.signum() <= 0 {
                return bad(format!("edge {} has nonpositive length", i));
            }
            adj[e.u].push(Germ { seg: Seg::Edge(i), forward: true });
            adj[e.v].push(Germ { seg: Seg::Edge(i), forward: false });
        }
        for (i, &w) in rays.iter().enumerate() {
            if w >= n {
                return bad(format!("ray {} references a missing vertex", i));
            }
            adj[w].push(Germ { seg: Seg::Ray(i), forward: true });
        }
        if edges.len() + 1 != n {
            return bad("edge count must be vertex count minus one".into());
        }
        for (v, g) in adj.iter_mut().enumerate() {
            g.sort();
            if g.len() < 2 {
                return bad(format!(
                    "vertex {} has degree {}; every vertex needs two directions",
                    names[v],
                    g.len()
                ));
            }
        }
        let mut t = MetricTree {
            names,
            edges,
            rays,
            adj,
            vdist: Vec::new(),
            hop: Vec::new(),
        };
        t.fill_tables()?;
        Ok(t)
    }

    fn fill_tables(&mut self) -> Result<(), GeometryError> {
        let n = self.names.len();
        self.vdist = vec![vec![Rational::zero(); n]; n];
        self.hop = vec![vec![None; n]; n];
        for s in 0..n {
            let mut seen = vec![false; n];
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for g in &self.adj[v] {
                    if let Seg::Edge(i) = g.seg {
                        let e = &self.edges[i];
                        let w = if g.forward { e.v } else { e.u };
                        if !seen[w] {
                            seen[w] = true;
                            self.vdist[s][w] = &self.vdist[s][v] + &e.length;
                            self.hop[s][w] = if v == s { Some(*g) } else { self.hop[s][v] };
                            stack.push(w);
                        }
                    }
                }
            }
            if seen.iter().any(|b| !b) {
                return Err(GeometryError::BadTree("tree is not connected".into()));
            }
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self, GeometryError> {
        let mut names: Vec<String> = Vec::new();
        let mut edges = Vec::new();
        let mut rays = Vec::new();
        let bad = |l: usize, m: &str| GeometryError::BadTree(format!("line {}: {}", l + 1, m));
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            let idx = |name: &str, names: &Vec<String>| names.iter().position(|x| x == name);
            match f[0] {
                "vertex" if f.len() == 2 => {
                    if idx(f[1], &names).is_some() {
                        return Err(bad(ln, "duplicate vertex"));
                    }
                    names.push(f[1].to_string());
                }
                "edge" if f.len() == 4 => {
                    let u = idx(f[1], &names).ok_or_else(|| bad(ln, "unknown vertex"))?;
                    let v = idx(f[2], &names).ok_or_else(|| bad(ln, "unknown vertex"))?;
                    let length = Rational::parse(f[3]).ok_or_else(|| bad(ln, "bad length"))?;
                    edges.push(Edge { u, v, length });
                }
                "ray" if f.len() == 2 => {
                    rays.push(idx(f[1], &names).ok_or_else(|| bad(ln, "unknown vertex"))?);
                }
                _ => return Err(bad(ln, "expected `vertex`, `edge` or `ray`")),
            }
        }
        MetricTree::new(names, edges, rays)
    }

    /// Writes the tree back in the text format.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for n in &self.names {
            s.push_str(&format!("vertex {}\n", n));
        }
        for e in &self.edges {
            s.push_str(&format!("edge {} {} {}\n", self.names[e.u], self.names[e.v], e.length));
        }
        for &r in &self.rays {
            s.push_str(&format!("ray {}\n", self.names[r]));
        }
        s
    }

    /// Star with `k` unit rays at one vertex.
    pub fn star(k: usize) -> Self {
        MetricTree::new(vec!["o".into()], vec![], vec![0; k]).expect("valid star")
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn rays(&self) -> &[usize] {
        &self.rays
    }

    pub fn germs_at(&self, v: usize) -> &[Germ] {
        &self.adj[v]
    }

    pub fn seg_len(&self, s: Seg) -> Option<&Rational> {
        match s {
            Seg::Edge(i) => Some(&self.edges[i].length),
            Seg::Ray(_) => None,
        }
    }

    /// Vertex reached when leaving along `g` and running to the segment's end.
    fn far_end(&self, g: Germ) -> Option<usize> {
        match g.seg {
            Seg::Edge(i) => Some(if g.forward { self.edges[i].v } else { self.edges[i].u }),
            Seg::Ray(i) => {
                if g.forward {
                    None
                } else {
                    Some(self.rays[i])
                }
            }
        }
    }

    pub fn check_point(&self, p: &TreePoint) -> Result<(), GeometryError> {
        let ok = match p.seg {
            Seg::Edge(i) => {
                i < self.edges.len()
                    && p.offset.signum() >= 0
                    && p.offset <= Scalar::rational(self.edges[i].length.clone())
            }
            Seg::Ray(i) => i < self.rays.len() && p.offset.signum() >= 0,
        };
        if ok {
            Ok(())
        } else {
            Err(GeometryError::InvalidPoint(format!("{:?}", p)))
        }
    }

    pub fn vertex_point(&self, v: usize, exact: bool) -> TreePoint {
        let g = self.adj[v][0];
        let off = if g.forward {
            Scalar::zero_like(exact)
        } else {
            Scalar::zero_like(exact).lift(self.seg_len(g.seg).cloned().unwrap_or_else(Rational::zero))
        };
        TreePoint { seg: g.seg, offset: off }
    }

    /// The vertex a point sits on, if any.
    pub fn vertex_of(&self, p: &TreePoint) -> Option<usize> {
        match p.seg {
            Seg::Edge(i) => {
                let e = &self.edges[i];
                if p.offset.is_zero() {
                    Some(e.u)
                } else if p.offset == p.offset.lift(e.length.clone()) {
                    Some(e.v)
                } else {
                    None
                }
            }
            Seg::Ray(i) => {
                if p.offset.is_zero() {
                    Some(self.rays[i])
                } else {
                    None
                }
            }
        }
    }

    /// Segment ends of a point with the distance to each.
    fn ends(&self, p: &TreePoint) -> SmallVec<[(usize, Scalar); 2]> {
        let mut out = SmallVec::new();
        match p.seg {
            Seg::Edge(i) => {
                let e = &self.edges[i];
                out.push((e.u, p.offset.clone()));
                out.push((e.v, p.offset.lift(e.length.clone()) - &p.offset));
            }
            Seg::Ray(i) => out.push((self.rays[i], p.offset.clone())),
        }
        out
    }

    pub fn vdist(&self, a: usize, b: usize) -> &Rational {
        &self.vdist[a][b]
    }

    pub fn distance(&self, p: &TreePoint, q: &TreePoint) -> Scalar {
        if p.seg == q.seg {
            return (&p.offset - &q.offset).abs();
        }
        let mut best: Option<Scalar> = None;
        for (a, da) in self.ends(p) {
            for (b, db) in self.ends(q) {
                let d = &(&da + &db) + &da.lift(self.vdist[a][b].clone());
                if best.as_ref().is_none_or(|x| d < *x) {
                    best = Some(d);
                }
            }
        }
        best.expect("points have ends")
    }

    /// Float distance and a bound on the magnitudes that entered it.
    pub fn distance_f64(&self, p: &TreePoint, q: &TreePoint) -> (f64, f64) {
        let (po, qo) = (p.offset.to_f64(), q.offset.to_f64());
        if p.seg == q.seg {
            return ((po - qo).abs(), po.abs() + qo.abs());
        }
        let ends = |x: &TreePoint, o: f64| -> SmallVec<[(usize, f64); 2]> {
            match x.seg {
                Seg::Edge(i) => {
                    let e = &self.edges[i];
                    smallvec::smallvec![(e.u, o), (e.v, e.length.to_f64() - o)]
                }
                Seg::Ray(i) => smallvec::smallvec![(self.rays[i], o)],
            }
        };
        let mut best = f64::INFINITY;
        let mut mag: f64 = 0.0;
        for (a, da) in ends(p, po) {
            for (b, db) in ends(q, qo) {
                let v = self.vdist[a][b].to_f64();
                best = best.min(da + db + v);
                mag = mag.max(da.abs() + db.abs() + v + po.abs() + qo.abs());
            }
        }
        (best, mag)
    }

    pub fn same_point(&self, p: &TreePoint, q: &TreePoint) -> bool {
        self.distance(p, q).is_zero()
    }

    /// Direction at `p` of the path toward `q`; `None` when `p == q`.
    pub fn germ_toward(&self, p: &TreePoint, q: &TreePoint) -> Option<Germ> {
        if self.same_point(p, q) {
            return None;
        }
        match self.vertex_of(p) {
            None => {
                if p.seg == q.seg {
                    return Some(Germ { seg: p.seg, forward: q.offset > p.offset });
                }
                let ends = self.ends(p);
                let mut best: Option<(Scalar, bool)> = None;
                for (k, (a, da)) in ends.iter().enumerate() {
                    let d = da + &self.distance(&self.vertex_point(*a, da.is_exact()), q);
                    if best.as_ref().is_none_or(|(x, _)| d < *x) {
                        // the `u` end (k == 0) is reached moving backward
                        best = Some((d, k == 1));
                    }
                }
                Some(Germ { seg: p.seg, forward: best.unwrap().1 })
            }
            Some(v) => {
                if let Some(g) = self.adj[v].iter().find(|g| g.seg == q.seg) {
                    return Some(*g);
                }
                let mut best: Option<(Scalar, usize)> = None;
                for (b, db) in self.ends(q) {
                    let d = &db + &db.lift(self.vdist[v][b].clone());
                    if best.as_ref().is_none_or(|(x, _)| d < *x) {
                        best = Some((d, b));
                    }
                }
                self.hop[v][best.unwrap().1]
            }
        }
    }

    /// Direction at `p` toward the end of ray `r`.
    pub fn germ_toward_end(&self, p: &TreePoint, r: usize) -> Germ {
        let w = self.rays[r];
        if p.seg == Seg::Ray(r) || self.vertex_of(p) == Some(w) {
            return Germ { seg: Seg::Ray(r), forward: true };
        }
        let target = self.vertex_point(w, p.offset.is_exact());
        self.germ_toward(p, &target).expect("p is not the attachment vertex")
    }

    /// Germs available at `p` (two at interior points, the vertex degree at a vertex).
    pub fn germs_of(&self, p: &TreePoint) -> SmallVec<[Germ; 4]> {
        match self.vertex_of(p) {
            Some(v) => self.adj[v].iter().copied().collect(),
            None => {
                let mut g = SmallVec::new();
                g.push(Germ { seg: p.seg, forward: false });
                g.push(Germ { seg: p.seg, forward: true });
                g
            }
        }
    }

    /// Offset on `g.seg` where a walk leaving `p` along `g` starts.
    fn start_offset(&self, p: &TreePoint, g: Germ) -> Scalar {
        if p.seg == g.seg {
            return p.offset.clone();
        }
        if g.forward {
            p.offset.lift(Rational::zero())
        } else {
            p.offset.lift(self.seg_len(g.seg).cloned().expect("backward walk on an edge"))
        }
    }

    fn leg_len(&self, g: Germ, start: &Scalar) -> Option<Scalar> {
        match (g.seg, g.forward) {
            (Seg::Ray(_), true) => None,
            (_, false) => Some(start.clone()),
            (Seg::Edge(i), true) => Some(start.lift(self.edges[i].length.clone()) - start),
        }
    }

    /// Lexicographically smallest germ at `v` other than along `arrived`.
    pub fn lex_continue(&self, v: usize, arrived: Seg) -> Germ {
        *self.adj[v]
            .iter()
            .find(|g| g.seg != arrived)
            .expect("vertices have degree two or more")
    }

    /// Walk from `p` along `g`, steering toward `target` while it lies ahead,
    /// then continuing lexicographically until a ray carries the walk to infinity.
    fn walk(&self, p: &TreePoint, g: Germ, target: Target<'_>) -> Vec<Leg> {
        let mut legs = Vec::new();
        let mut g = g;
        let mut off = self.start_offset(p, g);
        let mut pending = match target {
            Target::None => false,
            Target::Point(q) => !self.same_point(p, q),
            Target::End(_) => true,
        };
        loop {
            let len = self.leg_len(g, &off);
            if let Target::Point(q) = target {
                if q.seg == g.seg {
                    pending = false;
                }
            }
            legs.push(Leg { seg: g.seg, start: off.clone(), forward: g.forward, len: len.clone() });
            if len.is_none() {
                return legs;
            }
            let v = self.far_end(g).expect("finite leg ends at a vertex");
            if let Target::Point(q) = target {
                if self.vertex_of(q) == Some(v) {
                    pending = false;
                }
            }
            let next = match target {
                Target::Point(q) if pending => {
                    let here = self.vertex_point(v, off.is_exact());
                    self.germ_toward(&here, q).expect("target ahead")
                }
                Target::End(r) if pending => {
                    let here = self.vertex_point(v, off.is_exact());
                    self.germ_toward_end(&here, r)
                }
                _ => self.lex_continue(v, g.seg),
            };
            g = next;
            off = if g.forward {
                off.lift(Rational::zero())
            } else {
                off.lift(self.seg_len(g.seg).cloned().expect("edge"))
            };
        }
    }

    /// Opposite germ at `p` of `g` (lexicographic choice at branch points).
    pub fn opposite(&self, p: &TreePoint, g: Germ) -> Germ {
        match self.vertex_of(p) {
            None => Germ { seg: g.seg, forward: !g.forward },
            Some(v) => self.lex_continue(v, g.seg),
        }
    }

    /// Complete unit-speed line through `p` with `line(0) = p`, leaving
    /// forward along `g` toward `target` and backward along `back`.
    pub fn line_from(&self, p: &TreePoint, g: Germ, target: Target<'_>, back: Germ) -> TreeLine {
        let fw = self.walk(p, g, target);
        let bw = self.walk(p, back, Target::None);
        TreeLine::assemble(&fw, &bw, &p.offset)
    }

    /// Complete line through `p` and `q` (`p ≠ q`) with `line(0) = p`.
    pub fn line_through(&self, p: &TreePoint, q: &TreePoint) -> Option<TreeLine> {
        let g = self.germ_toward(p, q)?;
        let back = self.opposite(p, g);
        Some(self.line_from(p, g, Target::Point(q), back))
    }

    /// Line from end `e_minus` to end `e_plus`, parametrized so that `line(0)`
    /// is the attachment vertex of `e_minus`.
    pub fn line_between_ends(&self, e_minus: usize, e_plus: usize, exact: bool) -> Option<TreeLine> {
        if e_minus == e_plus {
            return None;
        }
        let w = self.vertex_point(self.rays[e_minus], exact);
        let g = self.germ_toward_end(&w, e_plus);
        let back = Germ { seg: Seg::Ray(e_minus), forward: true };
        Some(self.line_from(&w, g, Target::End(e_plus), back))
    }

    /// Ray-side line from `p` into end `r`, extended backward lexicographically.
    pub fn line_to_end(&self, p: &TreePoint, r: usize) -> TreeLine {
        let g = self.germ_toward_end(p, r);
        let back = self.opposite(p, g);
        self.line_from(p, g, Target::End(r), back)
    }

    /// Busemann function of end `r` normalized to vanish at `base`.
    pub fn busemann(&self, r: usize, base: &TreePoint, x: &TreePoint) -> Scalar {
        &self.horofunction(r, x) - &self.horofunction(r, base)
    }

    fn horofunction(&self, r: usize, x: &TreePoint) -> Scalar {
        if x.seg == Seg::Ray(r) {
            return -&x.offset;
        }
        let w = self.vertex_point(self.rays[r], x.offset.is_exact());
        self.distance(x, &w)
    }

    /// All points at distance `radius > 0` from `p`, skipping the germs in `skip`.
    pub fn sphere(&self, p: &TreePoint, radius: &Scalar, skip: &[Germ]) -> Vec<TreePoint> {
        let mut out = Vec::new();
        for g in self.germs_of(p) {
            if skip.contains(&g) {
                continue;
            }
            self.sphere_walk(p, g, radius.clone(), &mut out);
        }
        out
    }

    fn sphere_walk(&self, p: &TreePoint, g: Germ, remaining: Scalar, out: &mut Vec<TreePoint>) {
        let start = self.start_offset(p, g);
        match self.leg_len(g, &start) {
            Some(len) if remaining > len => {
                let v = self.far_end(g).expect("finite leg");
                let here = self.vertex_point(v, start.is_exact());
                for h in self.adj[v].clone() {
                    if h.seg != g.seg {
                        self.sphere_walk(&here, h, &remaining - &len, out);
                    }
                }
            }
            _ => {
                let off = if g.forward { &start + &remaining } else { &start - &remaining };
                out.push(TreePoint { seg: g.seg, offset: off });
            }
        }
    }

    /// Point at distance `s ≥ 0` from `p` along `g` and then lexicographically.
    pub fn advance(&self, p: &TreePoint, g: Germ, s: &Scalar) -> TreePoint {
        let line = self.line_from(p, g, Target::None, self.opposite(p, g));
        line.eval(s).expect("complete line")
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }
}

#[derive(Clone, Copy)]
pub enum Target<'a> {
    None,
    Point(&'a TreePoint),
    End(usize),
}

#[derive(Clone, Debug)]
struct Leg {
    seg: Seg,
    start: Scalar,
    forward: bool,
    len: Option<Scalar>,
}

/// One segment of a tree line: on `[lo, hi]` (open-ended when `None`) the
/// offset is `off_ref ± (t − t_ref)`.
#[derive(Clone, Debug)]
pub struct Piece {
    pub seg: Seg,
    pub lo: Option<Scalar>,
    pub hi: Option<Scalar>,
    t_ref: Scalar,
    off_ref: Scalar,
    forward: bool,
}

impl Piece {
    fn contains(&self, t: &Scalar) -> bool {
        self.lo.as_ref().is_none_or(|l| t >= l) && self.hi.as_ref().is_none_or(|h| t <= h)
    }

    fn offset_at(&self, t: &Scalar) -> Scalar {
        let dt = t - &self.t_ref;
        if self.forward {
            &self.off_ref + &dt
        } else {
            &self.off_ref - &dt
        }
    }

    fn param_at(&self, off: &Scalar) -> Scalar {
        let d = off - &self.off_ref;
        if self.forward {
            &self.t_ref + &d
        } else {
            &self.t_ref - &d
        }
    }
}

/// Unit-speed path in a tree, usually bi-infinite.
#[derive(Clone, Debug)]
pub struct TreeLine {
    pieces: Vec<Piece>,
}

impl TreeLine {
    fn assemble(fw: &[Leg], bw: &[Leg], zero_like: &Scalar) -> TreeLine {
        let mut pieces = Vec::new();
        // Backward legs occupy negative parameters, farthest first.
        let mut a = zero_like.lift(Rational::zero());
        let mut back = Vec::new();
        for leg in bw {
            let hi = -&a;
            let lo = leg.len.as_ref().map(|l| &(-&a) - l);
            back.push(Piece {
                seg: leg.seg,
                lo,
                hi: Some(hi.clone()),
                t_ref: hi,
                off_ref: leg.start.clone(),
                forward: !leg.forward,
            });
            if let Some(l) = &leg.len {
                a = &a + l;
            }
        }
        back.reverse();
        pieces.extend(back);
        let mut a = zero_like.lift(Rational::zero());
        for leg in fw {
            let hi = leg.len.as_ref().map(|l| &a + l);
            pieces.push(Piece {
                seg: leg.seg,
                lo: Some(a.clone()),
                hi: hi.clone(),
                t_ref: a.clone(),
                off_ref: leg.start.clone(),
                forward: leg.forward,
            });
            if let Some(h) = hi {
                a = h;
            }
        }
        // Drop zero-length pieces; they only arise at vertices.
        pieces.retain(|p| match (&p.lo, &p.hi) {
            (Some(l), Some(h)) => l < h,
            _ => true,
        });
        TreeLine { pieces }
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn eval(&self, t: &Scalar) -> Option<TreePoint> {
        let p = self.pieces.iter().find(|p| p.contains(t))?;
        Some(TreePoint { seg: p.seg, offset: p.offset_at(t) })
    }

    /// Parameter of `x` if it lies on the line.
    pub fn param_of(&self, tree: &MetricTree, x: &TreePoint) -> Option<Scalar> {
        for p in &self.pieces {
            if p.seg == x.seg {
                let t = p.param_at(&x.offset);
                if p.contains(&t) {
                    return Some(t);
                }
            }
        }
        let v = tree.vertex_of(x)?;
        for p in &self.pieces {
            for b in [&p.lo, &p.hi].into_iter().flatten() {
                let y = TreePoint { seg: p.seg, offset: p.offset_at(b) };
                if tree.vertex_of(&y) == Some(v) {
                    return Some(b.clone());
                }
            }
        }
        None
    }

    /// Nearest parameter to `x` and the distance realizing it.
    pub fn project(&self, tree: &MetricTree, x: &TreePoint) -> (Scalar, Scalar) {
        if let Some(t) = self.param_of(tree, x) {
            let z = t.lift(Rational::zero());
            return (t, z);
        }
        let mut best: Option<(Scalar, Scalar)> = None;
        for p in &self.pieces {
            for b in [&p.lo, &p.hi].into_iter().flatten() {
                let y = TreePoint { seg: p.seg, offset: p.offset_at(b) };
                let d = tree.distance(x, &y);
                if best.as_ref().is_none_or(|(_, e)| d < *e) {
                    best = Some((b.clone(), d));
                }
            }
        }
        best.expect("line has a finite breakpoint")
    }

    pub fn shifted(&self, s: &Scalar) -> TreeLine {
        let pieces = self
            .pieces
            .iter()
            .map(|p| Piece {
                seg: p.seg,
                lo: p.lo.as_ref().map(|l| l - s),
                hi: p.hi.as_ref().map(|h| h - s),
                t_ref: &p.t_ref - s,
                off_ref: p.off_ref.clone(),
                forward: p.forward,
            })
            .collect();
        TreeLine { pieces }
    }

    pub fn reversed(&self) -> TreeLine {
        let pieces = self
            .pieces
            .iter()
            .rev()
            .map(|p| Piece {
                seg: p.seg,
                lo: p.hi.as_ref().map(|h| -h),
                hi: p.lo.as_ref().map(|l| -l),
                t_ref: -&p.t_ref,
                off_ref: p.off_ref.clone(),
                forward: !p.forward,
            })
            .collect();
        TreeLine { pieces }
    }

    /// Ray id reached as `t → +∞`.
    pub fn end_plus(&self) -> Option<usize> {
        match self.pieces.last() {
            Some(Piece { seg: Seg::Ray(r), hi: None, .. }) => Some(*r),
            _ => None,
        }
    }

    /// Ray id reached as `t → −∞`.
    pub fn end_minus(&self) -> Option<usize> {
        match self.pieces.first() {
            Some(Piece { seg: Seg::Ray(r), lo: None, .. }) => Some(*r),
            _ => None,
        }
    }

    /// Germ of travel at parameter `t`, in the `+t` direction or against it.
    pub fn germ_at(&self, t: &Scalar, forward: bool) -> Germ {
        let p = if forward {
            self.pieces.iter().find(|p| p.contains(t) && p.hi.as_ref().is_none_or(|h| h > t))
        } else {
            self.pieces.iter().rev().find(|p| p.contains(t) && p.lo.as_ref().is_none_or(|l| l < t))
        };
        let p = p.expect("line extends both ways");
        Germ { seg: p.seg, forward: if forward { p.forward } else { !p.forward } }
    }
}

impl PartialEq for TreePoint {
    fn eq(&self, o: &Self) -> bool {
        self.seg == o.seg && self.offset.partial_cmp(&o.offset) == Some(Ordering::Equal)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tripod() -> MetricTree {
        MetricTree::parse(
            "vertex o\nvertex a\nvertex b\nvertex c\n\
             edge o a 1\nedge o b 2\nedge o c 3/2\nray a\nray b\nray c\n",
        )
        .unwrap()
    }

    fn pt(seg: Seg, n: i64, d: i64) -> TreePoint {
        TreePoint { seg, offset: Scalar::ratio(n, d) }
    }

    #[test]
    fn parse_and_validate() {
        let t = tripod();
        assert_eq!(t.vertex_count(), 4);
        assert!(MetricTree::parse("vertex a\nray a\n").is_err());
        assert!(MetricTree::parse("vertex a\nvertex b\nedge a b 1\nray a\nray a\n").is_err());
        assert!(MetricTree::parse("vertex a\nvertex b\nedge a b -1\nray a\nray b\n").is_err());
        let again = MetricTree::parse(&t.to_text()).unwrap();
        assert_eq!(again.to_text(), t.to_text());
    }

    #[test]
    fn distances() {
        let t = tripod();
        let p = pt(Seg::Edge(0), 1, 5);
        let q = pt(Seg::Edge(0), 9, 10);
        assert_eq!(t.distance(&p, &q), Scalar::ratio(7, 10));
        let r = pt(Seg::Ray(1), 1, 1); // 1 past b, b is 2 from o
        assert_eq!(t.distance(&p, &r), Scalar::ratio(16, 5));
    }

    #[test]
    fn line_through_and_back() {
        let t = tripod();
        let p = pt(Seg::Edge(0), 1, 2);
        let q = pt(Seg::Edge(1), 1, 1);
        let line = t.line_through(&p, &q).unwrap();
        let d = t.distance(&p, &q);
        assert_eq!(line.eval(&d).unwrap(), q);
        assert!(t.same_point(&line.eval(&Scalar::int(0)).unwrap(), &p));
        for k in -20..20 {
            let a = Scalar::ratio(k, 3);
            let b = Scalar::ratio(k + 7, 3);
            let pa = line.eval(&a).unwrap();
            let pb = line.eval(&b).unwrap();
            assert_eq!(t.distance(&pa, &pb), Scalar::ratio(7, 3));
            assert_eq!(line.param_of(&t, &pa).unwrap(), a);
        }
        assert_eq!(line.end_plus(), Some(1));
        assert_eq!(line.end_minus(), Some(0));
    }

    #[test]
    fn busemann_along_ray() {
        let t = tripod();
        let base = t.vertex_point(0, true);
        let line = t.line_to_end(&base, 2);
        for k in 0..10 {
            let s = Scalar::ratio(k, 2);
            let x = line.eval(&s).unwrap();
            assert_eq!(t.busemann(2, &base, &x), -s);
        }
    }

    #[test]
    fn sphere_branches() {
        let t = tripod();
        let o = t.vertex_point(0, true);
        let s = t.sphere(&o, &Scalar::ratio(1, 2), &[]);
        assert_eq!(s.len(), 3);
        let far = t.sphere(&o, &Scalar::int(3), &[]);
        assert_eq!(far.len(), 3);
        for p in far {
            assert_eq!(t.distance(&o, &p), Scalar::int(3));
        }
    }
}
