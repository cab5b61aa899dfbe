//! Planar convex geometry in floating point, with tolerances that err toward
//! "intersects" and "contains" so that outer approximations stay sound.

use std::ops::{Add, Sub};

use serde::Serialize;

/// A point `(a, b)` of the plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Point2 {
    pub a: f64,
    pub b: f64,
}

impl Point2 {
    pub const fn new(a: f64, b: f64) -> Self {
        Point2 { a, b }
    }

    pub fn scale(self, t: f64) -> Point2 {
        Point2::new(self.a * t, self.b * t)
    }

    pub fn dot(self, o: Point2) -> f64 {
        self.a * o.a + self.b * o.b
    }

    pub fn norm(self) -> f64 {
        self.a.hypot(self.b)
    }

    pub fn is_finite(self) -> bool {
        self.a.is_finite() && self.b.is_finite()
    }
}

impl Add for Point2 {
    type Output = Point2;

    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for Point2 {
    type Output = Point2;

    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.a - o.a, self.b - o.b)
    }
}

/// `(q - p) × (r - p)`.
pub fn cross(p: Point2, q: Point2, r: Point2) -> f64 {
    (q.a - p.a) * (r.b - p.b) - (q.b - p.b) * (r.a - p.a)
}

/// Convex polygon with counter-clockwise vertices. Zero, one or two vertices
/// encode the empty set, a point and a segment.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ConvexPolygon {
    vertices: Vec<Point2>,
}

impl ConvexPolygon {
    pub fn empty() -> Self {
        ConvexPolygon::default()
    }

    /// Axis-aligned rectangle `[a0, a1] × [b0, b1]`; empty when inverted.
    pub fn rect(a0: f64, a1: f64, b0: f64, b1: f64) -> Self {
        if a0 > a1 || b0 > b1 {
            return ConvexPolygon::empty();
        }
        ConvexPolygon::hull(&[
            Point2::new(a0, b0),
            Point2::new(a1, b0),
            Point2::new(a1, b1),
            Point2::new(a0, b1),
        ])
    }

    /// Convex hull (Andrew's monotone chain); collinear points are dropped.
    pub fn hull(points: &[Point2]) -> Self {
        let mut pts: Vec<Point2> = points.iter().copied().filter(|p| p.is_finite()).collect();
        pts.sort_by(|p, q| p.a.total_cmp(&q.a).then(p.b.total_cmp(&q.b)));
        pts.dedup();
        if pts.len() <= 2 {
            return ConvexPolygon { vertices: pts };
        }
        let mut lower: Vec<Point2> = Vec::with_capacity(pts.len());
        for &p in &pts {
            while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
                lower.pop();
            }
            lower.push(p);
        }
        let mut upper: Vec<Point2> = Vec::with_capacity(pts.len());
        for &p in pts.iter().rev() {
            while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
                upper.pop();
            }
            upper.push(p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        ConvexPolygon { vertices: lower }
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn area(&self) -> f64 {
        let n = self.vertices.len();
        if n < 3 {
            return 0.0;
        }
        let mut s = 0.0;
        for i in 0..n {
            let (p, q) = (self.vertices[i], self.vertices[(i + 1) % n]);
            s += p.a * q.b - q.a * p.b;
        }
        0.5 * s
    }

    /// Every consecutive turn is a left turn, up to `tol`.
    pub fn is_convex(&self, tol: f64) -> bool {
        let n = self.vertices.len();
        n < 3 || (0..n).all(|i| cross(self.vertices[i], self.vertices[(i + 1) % n], self.vertices[(i + 2) % n]) >= -tol)
    }

    /// Membership with slack `tol` toward inclusion.
    pub fn contains(&self, p: Point2, tol: f64) -> bool {
        match self.vertices.len() {
            0 => false,
            1 => (p - self.vertices[0]).norm() <= tol,
            2 => segment_distance(self.vertices[0], self.vertices[1], p) <= tol,
            n => (0..n).all(|i| {
                let (u, v) = (self.vertices[i], self.vertices[(i + 1) % n]);
                let len = (v - u).norm();
                cross(u, v, p) >= -tol * len
            }),
        }
    }

    /// `self ⊕ [-t, t]²`, a superset of the `t`-neighbourhood.
    pub fn inflate(&self, t: f64) -> ConvexPolygon {
        if self.is_empty() || t <= 0.0 {
            return self.clone();
        }
        let mut pts = Vec::with_capacity(4 * self.vertices.len());
        for v in &self.vertices {
            for (da, db) in [(-t, -t), (t, -t), (t, t), (-t, t)] {
                pts.push(Point2::new(v.a + da, v.b + db));
            }
        }
        ConvexPolygon::hull(&pts)
    }

    /// Intersection with the half-plane `n·p <= c` (Sutherland–Hodgman step).
    pub fn clip_half_plane(&self, n: Point2, c: f64) -> ConvexPolygon {
        let vs = &self.vertices;
        if vs.is_empty() {
            return ConvexPolygon::empty();
        }
        let inside = |p: Point2| n.dot(p) <= c;
        if vs.len() == 1 {
            return if inside(vs[0]) {
                self.clone()
            } else {
                ConvexPolygon::empty()
            };
        }
        let mut out = Vec::with_capacity(vs.len() + 2);
        let m = vs.len();
        let edges = if m == 2 { 1 } else { m };
        for i in 0..edges {
            let (p, q) = (vs[i], vs[(i + 1) % m]);
            let (fp, fq) = (n.dot(p) - c, n.dot(q) - c);
            if fp <= 0.0 {
                out.push(p);
            }
            if (fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0) {
                let t = fp / (fp - fq);
                out.push(p + (q - p).scale(t));
            }
        }
        if m == 2 && n.dot(vs[1]) <= c {
            out.push(vs[1]);
        }
        ConvexPolygon::hull(&out)
    }

    /// Intersection with `[a0, a1] × [b0, b1]`.
    pub fn clip_rect(&self, a0: f64, a1: f64, b0: f64, b1: f64) -> ConvexPolygon {
        if a0 > a1 || b0 > b1 {
            return ConvexPolygon::empty();
        }
        self.clip_half_plane(Point2::new(1.0, 0.0), a1)
            .clip_half_plane(Point2::new(-1.0, 0.0), -a0)
            .clip_half_plane(Point2::new(0.0, 1.0), b1)
            .clip_half_plane(Point2::new(0.0, -1.0), -b0)
    }

    fn axes(&self) -> Vec<Point2> {
        let vs = &self.vertices;
        match vs.len() {
            0 | 1 => Vec::new(),
            2 => {
                let d = vs[1] - vs[0];
                vec![d, Point2::new(-d.b, d.a)]
            }
            n => (0..n)
                .map(|i| {
                    let d = vs[(i + 1) % n] - vs[i];
                    Point2::new(-d.b, d.a)
                })
                .collect(),
        }
    }

    fn project(&self, axis: Point2) -> (f64, f64) {
        self.vertices
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                let x = axis.dot(*v);
                (lo.min(x), hi.max(x))
            })
    }

    /// Separating-axis test. Only a gap wider than `tol` (relative to the
    /// axis length) counts as separation, so near-touching sets intersect.
    pub fn intersects(&self, other: &ConvexPolygon, tol: f64) -> bool {
        if self.is_empty() || other.is_empty() {
            return false;
        }
        let mut axes = self.axes();
        axes.extend(other.axes());
        if self.vertices.len() == 1 && other.vertices.len() == 1 {
            return (self.vertices[0] - other.vertices[0]).norm() <= tol;
        }
        for axis in axes {
            let len = axis.norm();
            if len == 0.0 {
                continue;
            }
            let (l1, h1) = self.project(axis);
            let (l2, h2) = other.project(axis);
            if l1 > h2 + tol * len || l2 > h1 + tol * len {
                return false;
            }
        }
        true
    }

    /// Same point set up to `tol`: each vertex of one lies in the other.
    pub fn approx_subset(&self, other: &ConvexPolygon, tol: f64) -> bool {
        self.vertices.iter().all(|v| other.contains(*v, tol))
    }
}

/// A polygon with its projections onto its own edge normals cached, for
/// repeated separating-axis tests against small polygons.
#[derive(Clone, Debug)]
pub struct SatCache {
    poly: ConvexPolygon,
    axes: Vec<(Point2, f64, f64, f64)>,
}

impl SatCache {
    pub fn new(poly: &ConvexPolygon) -> Self {
        let axes = poly
            .axes()
            .into_iter()
            .filter_map(|axis| {
                let len = axis.norm();
                (len > 0.0).then(|| {
                    let (lo, hi) = poly.project(axis);
                    (axis, len, lo, hi)
                })
            })
            .collect();
        SatCache {
            poly: poly.clone(),
            axes,
        }
    }

    pub fn polygon(&self) -> &ConvexPolygon {
        &self.poly
    }

    /// Same answer as [`ConvexPolygon::intersects`].
    pub fn intersects(&self, other: &ConvexPolygon, tol: f64) -> bool {
        if self.poly.is_empty() || other.is_empty() {
            return false;
        }
        if self.poly.vertices.len() == 1 && other.vertices.len() == 1 {
            return (self.poly.vertices[0] - other.vertices[0]).norm() <= tol;
        }
        for &(axis, len, l1, h1) in &self.axes {
            let (l2, h2) = other.project(axis);
            if l1 > h2 + tol * len || l2 > h1 + tol * len {
                return false;
            }
        }
        for axis in other.axes() {
            let len = axis.norm();
            if len == 0.0 {
                continue;
            }
            let (l1, h1) = self.poly.project(axis);
            let (l2, h2) = other.project(axis);
            if l1 > h2 + tol * len || l2 > h1 + tol * len {
                return false;
            }
        }
        true
    }
}

/// Distance from `p` to the segment `[u, v]`.
pub fn segment_distance(u: Point2, v: Point2, p: Point2) -> f64 {
    let d = v - u;
    let len2 = d.dot(d);
    if len2 == 0.0 {
        return (p - u).norm();
    }
    let t = ((p - u).dot(d) / len2).clamp(0.0, 1.0);
    (p - (u + d.scale(t))).norm()
}
