//! Hyperboloid model helpers. Bilinear form `-x0 y0 + x1 y1 + x2 y2`.

pub type V3 = [f64; 3];

pub fn dot(a: &V3, b: &V3) -> f64 {
    -a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn add(a: &V3, b: &V3) -> V3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub(a: &V3, b: &V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn scale(k: f64, a: &V3) -> V3 {
    [k * a[0], k * a[1], k * a[2]]
}

pub fn comb(s: f64, a: &V3, t: f64, b: &V3) -> V3 {
    [s * a[0] + t * b[0], s * a[1] + t * b[1], s * a[2] + t * b[2]]
}

/// Vector Lorentz-orthogonal to both arguments.
pub fn cross(a: &V3, b: &V3) -> V3 {
    let c = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ];
    [-c[0], c[1], c[2]]
}

/// Distance between hyperboloid points, stable for nearby points.
pub fn dist(p: &V3, q: &V3) -> f64 {
    let c = -dot(p, q);
    if c < 1.0 + 1e-4 {
        // |p - q|_L^2 = 2(c - 1) = 4 sinh^2(d/2)
        let w = sub(p, q);
        let n = dot(&w, &w).max(0.0);
        2.0 * (0.5 * n.sqrt()).asinh()
    } else {
        c.acosh()
    }
}

/// Rescale a timelike vector onto the upper sheet.
pub fn to_sheet(p: &V3) -> V3 {
    let n = (-dot(p, p)).sqrt();
    let s = if p[0] < 0.0 { -1.0 / n } else { 1.0 / n };
    scale(s, p)
}

/// Unit spacelike rescale.
pub fn unit_space(v: &V3) -> V3 {
    scale(1.0 / dot(v, v).sqrt(), v)
}

/// Point from polar data around the origin: distance `r`, angle `phi`.
pub fn polar(r: f64, phi: f64) -> V3 {
    [r.cosh(), r.sinh() * phi.cos(), r.sinh() * phi.sin()]
}

/// Null vector of the boundary point at angle `theta`.
pub fn null_of(theta: f64) -> V3 {
    [1.0, theta.cos(), theta.sin()]
}

/// Boundary angle of a future null direction, in `[0, 2π)`.
pub fn angle_of(l: &V3) -> f64 {
    let a = l[2].atan2(l[1]);
    if a < 0.0 {
        a + std::f64::consts::TAU
    } else {
        a
    }
}

/// Unit tangent at `p` pointing toward `q` (a point or a null vector).
pub fn tangent_toward(p: &V3, q: &V3) -> V3 {
    let w = add(q, &scale(dot(p, q), p));
    unit_space(&w)
}

/// Gram-Schmidt tangent frame at `p`.
pub fn frame(p: &V3) -> (V3, V3) {
    let cand = [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]];
    let mut basis: Vec<V3> = Vec::new();
    for c in cand.iter() {
        let mut w = add(c, &scale(dot(p, c), p));
        for b in &basis {
            w = sub(&w, &scale(dot(&w, b), b));
        }
        let n = dot(&w, &w);
        if n > 1e-6 {
            basis.push(scale(1.0 / n.sqrt(), &w));
        }
        if basis.len() == 2 {
            break;
        }
    }
    (basis[0], basis[1])
}

pub fn exp(p: &V3, v: &V3, t: f64) -> V3 {
    comb(t.cosh(), p, t.sinh(), v)
}

pub fn angle_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(std::f64::consts::TAU);
    d.min(std::f64::consts::TAU - d)
}

pub type M3 = [[f64; 3]; 3];

pub fn apply(m: &M3, v: &V3) -> V3 {
    [0, 1, 2].map(|i| m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2])
}

/// Boost taking the sheet point `m` to the origin `(1, 0, 0)`.
pub fn boost_to_origin(m: &V3) -> M3 {
    let c = m[0];
    let s = (m[1] * m[1] + m[2] * m[2]).sqrt();
    if s == 0.0 {
        return [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    }
    let u = [m[1] / s, m[2] / s];
    [
        [c, -s * u[0], -s * u[1]],
        [-s * u[0], 1.0 + (c - 1.0) * u[0] * u[0], (c - 1.0) * u[0] * u[1]],
        [-s * u[1], (c - 1.0) * u[1] * u[0], 1.0 + (c - 1.0) * u[1] * u[1]],
    ]
}
