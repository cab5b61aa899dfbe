//! The planar step map `(a, b) ↦ (bz + 1 - z/2, az)`, outer approximations of
//! the sets `S_K` of points that can take `K` steps inside the box
//! `B = [0, f2 - ε]²`, and emptiness certificates.
//!
//! # Outer approximation
//!
//! For `z ∈ [0, 1/2]` the step sends `x` along the segment from `e = (1, 0)`
//! to `(b/2 + 3/4, a/2)`. Over a grid cell `C` these segments sweep exactly
//! `conv({e} ∪ M(C))`, where `M(a, b) = (b/2 + 3/4, a/2)`. A cell is kept when
//! that swept polygon meets `P_{K-1}`; a rejected cell therefore contains no
//! point of `S_K`. `P_K` is the hull of the kept cells, inflated by `tol` and
//! clipped to `B`, so `S_K ⊆ P_K` for every `K` regardless of grid size.
//!
//! Only the leftmost and rightmost kept cell of each row matter for the hull,
//! and cells outside the previous row range need no test because
//! `S_K ⊆ S_{K-1}`.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::ExactField;
use crate::geometry::{ConvexPolygon, Point2, SatCache};
use crate::optimize::f2_value;
use crate::report::{fmt_real, polygon_overlay_svg};

/// Where every reach segment starts.
pub const EXIT: Point2 = Point2::new(1.0, 0.0);

fn check_z(z: f64) -> Result<()> {
    if !(0.0..=0.5).contains(&z) {
        return Err(Error::invalid(format!("z = {z} lies outside [0, 1/2]")));
    }
    Ok(())
}

/// `(b z + 1 - z/2, a z)`.
pub fn step(x: Point2, z: f64) -> Result<Point2> {
    check_z(z)?;
    Ok(Point2::new(x.b * z + 1.0 - z / 2.0, x.a * z))
}

/// [`step`] over an exact field.
pub fn step_exact<F: ExactField + PartialOrd>(a: &F, b: &F, z: &F) -> Result<(F, F)> {
    if *z < F::from_ratio(0, 1) || *z > F::from_ratio(1, 2) {
        return Err(Error::invalid("z lies outside [0, 1/2]"));
    }
    let next_a = b.clone() * z.clone() + F::from_ratio(1, 1) - z.clone() / F::from_ratio(2, 1);
    let next_b = a.clone() * z.clone();
    Ok((next_a, next_b))
}

/// Endpoints of `{step(x, z) : z ∈ [0, 1/2]}`.
pub fn reach_segment(x: Point2) -> (Point2, Point2) {
    (EXIT, Point2::new(x.b / 2.0 + 0.75, x.a / 2.0))
}

fn check_fixed_z(z: f64) -> Result<()> {
    if !(0.0..1.0).contains(&z) {
        return Err(Error::invalid(format!("fixed point needs z in [0, 1), got {z}")));
    }
    Ok(())
}

/// The point left unchanged by `step(·, z)`: `a = (1 - z/2)/(1 - z²)`, `b = a z`.
pub fn fixed_point(z: f64) -> Result<Point2> {
    check_fixed_z(z)?;
    let a = (1.0 - z / 2.0) / (1.0 - z * z);
    Ok(Point2::new(a, a * z))
}

/// [`fixed_point`] over an exact field.
pub fn fixed_point_exact<F: ExactField + PartialOrd>(z: &F) -> Result<(F, F)> {
    if *z < F::from_ratio(0, 1) || *z >= F::from_ratio(1, 1) {
        return Err(Error::invalid("fixed point needs z in [0, 1)"));
    }
    let one = F::from_ratio(1, 1);
    let a = (one.clone() - z.clone() / F::from_ratio(2, 1)) / (one - z.clone() * z.clone());
    let b = a.clone() * z.clone();
    Ok((a, b))
}

/// The box `[0, f2 - ε]²`. Empty when `ε > f2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SearchBox {
    pub epsilon: f64,
    pub bound: f64,
}

impl SearchBox {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::invalid(format!("epsilon must be positive, got {epsilon}")));
        }
        Ok(SearchBox {
            epsilon,
            bound: f2_value() - epsilon,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.bound < 0.0
    }

    pub fn contains(&self, x: Point2) -> bool {
        (0.0..=self.bound).contains(&x.a) && (0.0..=self.bound).contains(&x.b)
    }

    pub fn polygon(&self) -> ConvexPolygon {
        ConvexPolygon::rect(0.0, self.bound, 0.0, self.bound)
    }
}

/// Grid resolution, slack, and iteration cap.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IterationConfig {
    pub grid: usize,
    pub tol: f64,
    pub k_max: usize,
}

impl Default for IterationConfig {
    fn default() -> Self {
        IterationConfig {
            grid: 512,
            tol: 1e-12,
            k_max: 10_000,
        }
    }
}

impl IterationConfig {
    fn validate(&self) -> Result<()> {
        if self.grid < 64 {
            return Err(Error::invalid(format!("grid must be at least 64, got {}", self.grid)));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::invalid("tol must be positive"));
        }
        if self.k_max == 0 {
            return Err(Error::invalid("k_max must be at least 1"));
        }
        Ok(())
    }
}

/// Why an iteration stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StopReason {
    /// `P_k` is empty.
    Emptied { k: usize },
    /// `P_k` used the same cells as `P_{k-1}`, so every later iterate repeats it.
    Stagnated { k: usize },
    /// `k_max` polygons computed, none empty.
    Exhausted,
}

/// Outer approximations `P_1, P_2, ...` of `S_1, S_2, ...`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SkRun {
    pub search_box: SearchBox,
    pub config: IterationConfig,
    pub polygons: Vec<ConvexPolygon>,
    pub stop: StopReason,
}

struct Grid {
    n: usize,
    bound: f64,
}

impl Grid {
    fn coord(&self, i: usize) -> f64 {
        if i == self.n {
            self.bound
        } else {
            self.bound * i as f64 / self.n as f64
        }
    }

    /// The region swept by reach segments from cell `(i, j)` (column `i` in
    /// `a`, row `j` in `b`).
    fn swept(&self, i: usize, j: usize) -> ConvexPolygon {
        let (a0, a1) = (self.coord(i), self.coord(i + 1));
        let (b0, b1) = (self.coord(j), self.coord(j + 1));
        ConvexPolygon::hull(&[
            EXIT,
            Point2::new(b0 / 2.0 + 0.75, a0 / 2.0),
            Point2::new(b1 / 2.0 + 0.75, a0 / 2.0),
            Point2::new(b0 / 2.0 + 0.75, a1 / 2.0),
            Point2::new(b1 / 2.0 + 0.75, a1 / 2.0),
        ])
    }
}

type RowRange = Option<(usize, usize)>;

/// Iterates the outer approximation until it empties, stagnates, or `k_max`
/// polygons have been produced.
pub fn sk_iterate(search_box: &SearchBox, config: &IterationConfig) -> Result<SkRun> {
    config.validate()?;
    let mut run = SkRun {
        search_box: *search_box,
        config: *config,
        polygons: Vec::new(),
        stop: StopReason::Exhausted,
    };
    if search_box.is_empty() {
        run.polygons.push(ConvexPolygon::empty());
        run.stop = StopReason::Emptied { k: 1 };
        return Ok(run);
    }
    let grid = Grid {
        n: config.grid,
        bound: search_box.bound,
    };
    let mut rows: Vec<RowRange> = vec![Some((0, grid.n - 1)); grid.n];
    let mut prev = search_box.polygon();
    for k in 1..=config.k_max {
        let cache = SatCache::new(&prev);
        let kept = |i: usize, j: usize| cache.intersects(&grid.swept(i, j), config.tol);
        let next_rows: Vec<RowRange> = rows
            .par_iter()
            .enumerate()
            .map(|(j, range)| {
                let (lo, hi) = (*range)?;
                let left = (lo..=hi).find(|&i| kept(i, j))?;
                let right = (left..=hi).rev().find(|&i| kept(i, j)).unwrap_or(left);
                Some((left, right))
            })
            .collect();
        if next_rows.iter().all(Option::is_none) {
            run.polygons.push(ConvexPolygon::empty());
            run.stop = StopReason::Emptied { k };
            return Ok(run);
        }
        let stagnant = next_rows == rows;
        let mut corners = Vec::new();
        for (j, range) in next_rows.iter().enumerate() {
            if let Some((l, r)) = *range {
                let (b0, b1) = (grid.coord(j), grid.coord(j + 1));
                let (a0, a1) = (grid.coord(l), grid.coord(r + 1));
                corners.extend([
                    Point2::new(a0, b0),
                    Point2::new(a0, b1),
                    Point2::new(a1, b0),
                    Point2::new(a1, b1),
                ]);
            }
        }
        let poly =
            ConvexPolygon::hull(&corners)
                .inflate(config.tol)
                .clip_rect(0.0, search_box.bound, 0.0, search_box.bound);
        run.polygons.push(poly.clone());
        if stagnant {
            run.stop = StopReason::Stagnated { k };
            return Ok(run);
        }
        rows = next_rows;
        prev = poly;
    }
    Ok(run)
}

/// Outcome of [`certify_empty`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Certification {
    /// The outer approximation of `S_k` is empty, hence so is `S_k`.
    Certified { k: usize },
    /// No empty approximation within `k_max` steps (or the grid stagnated at `last_k`).
    NotCertified { last_k: usize },
}

impl Certification {
    pub fn k(&self) -> Option<usize> {
        match self {
            Certification::Certified { k } => Some(*k),
            Certification::NotCertified { .. } => None,
        }
    }
}

impl SkRun {
    pub fn certification(&self) -> Certification {
        match self.stop {
            StopReason::Emptied { k } => Certification::Certified { k },
            StopReason::Stagnated { k } => Certification::NotCertified { last_k: k },
            StopReason::Exhausted => Certification::NotCertified {
                last_k: self.polygons.len(),
            },
        }
    }

    /// Largest `K` with `x ∈ P_1, ..., P_K` (0 if `x` is outside the box).
    pub fn survival_depth(&self, x: Point2) -> usize {
        if !self.search_box.contains(x) {
            return 0;
        }
        self.polygons
            .iter()
            .take_while(|p| p.contains(x, self.config.tol))
            .count()
    }

    /// CSV `k,vertex_index,a,b` over all polygons; `k = 0` is the box.
    pub fn snapshots_csv(&self) -> String {
        let mut s = String::from("k,vertex_index,a,b\n");
        let boxed = std::iter::once(self.search_box.polygon()).chain(self.polygons.iter().cloned());
        for (k, poly) in boxed.enumerate() {
            for (i, v) in poly.vertices().iter().enumerate() {
                let _ = writeln!(s, "{k},{i},{},{}", fmt_real(v.a), fmt_real(v.b));
            }
        }
        s
    }

    /// SVG overlay of the box and the successive polygons.
    pub fn snapshots_svg(&self) -> String {
        let polys: Vec<Vec<(f64, f64)>> = std::iter::once(self.search_box.polygon())
            .chain(self.polygons.iter().cloned())
            .map(|p| p.vertices().iter().map(|v| (v.a, v.b)).collect())
            .collect();
        polygon_overlay_svg(
            &format!(
                "S_K outer approximations, epsilon = {}",
                fmt_real(self.search_box.epsilon)
            ),
            "a",
            "b",
            &polys,
        )
    }
}

/// Runs [`sk_iterate`] and reports the first empty index.
pub fn certify_empty(search_box: &SearchBox, config: &IterationConfig) -> Result<Certification> {
    Ok(sk_iterate(search_box, config)?.certification())
}

const STEP_TOL: f64 = 1e-12;

/// The largest `z ∈ [0, 1/2]` with `step(x, z) ∈ P`, or `None`.
pub fn max_step(p: &ConvexPolygon, x: Point2) -> Option<f64> {
    let d = Point2::new(x.b - 0.5, x.a);
    let at = |z: f64| EXIT + d.scale(z);
    let vs = p.vertices();
    if d.norm() <= STEP_TOL {
        return p.contains(EXIT, STEP_TOL).then_some(0.5);
    }
    match vs.len() {
        0 => None,
        1 => {
            let z = ((vs[0] - EXIT).dot(d) / d.dot(d)).clamp(0.0, 0.5);
            ((at(z) - vs[0]).norm() <= STEP_TOL).then_some(z)
        }
        2 => {
            // the segment [u, v] against the ray piece {e + z d}
            let (u, v) = (vs[0], vs[1]);
            let w = v - u;
            let denom = d.a * w.b - d.b * w.a;
            let rel = u - EXIT;
            if denom.abs() <= STEP_TOL * d.norm() * w.norm() {
                // parallel: only collinear overlap counts
                if (rel.a * d.b - rel.b * d.a).abs() > STEP_TOL * d.norm() {
                    return None;
                }
                let (zu, zv) = (rel.dot(d) / d.dot(d), (v - EXIT).dot(d) / d.dot(d));
                let (lo, hi) = (zu.min(zv), zu.max(zv));
                return (hi >= -STEP_TOL && lo <= 0.5 + STEP_TOL).then(|| hi.min(0.5));
            }
            let z = (rel.a * w.b - rel.b * w.a) / denom;
            let s = (rel.a * d.b - rel.b * d.a) / denom;
            let ok = (-STEP_TOL..=0.5 + STEP_TOL).contains(&z) && (-STEP_TOL..=1.0 + STEP_TOL).contains(&s);
            ok.then(|| z.clamp(0.0, 0.5))
        }
        n => {
            // Cyrus–Beck against inward edge normals of a counter-clockwise polygon
            let (mut lo, mut hi) = (0.0f64, 0.5f64);
            for i in 0..n {
                let (u, v) = (vs[i], vs[(i + 1) % n]);
                let edge = v - u;
                let normal = Point2::new(-edge.b, edge.a);
                let c = normal.dot(EXIT - u);
                let g = normal.dot(d);
                // need c + z g >= 0
                if g.abs() <= STEP_TOL * normal.norm() * d.norm() {
                    if c < -STEP_TOL * normal.norm() {
                        return None;
                    }
                } else if g > 0.0 {
                    lo = lo.max(-c / g);
                } else {
                    hi = hi.min(-c / g);
                }
            }
            (lo <= hi + STEP_TOL).then(|| hi.max(0.0))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{ratio, Sqrt3};
    use num_rational::BigRational;

    fn pt(a: f64, b: f64) -> Point2 {
        Point2::new(a, b)
    }

    #[test]
    fn step_examples() {
        assert_eq!(step(pt(1.0, 0.0), 0.5).unwrap(), pt(0.75, 0.5));
        assert_eq!(step(pt(0.3, 0.8), 0.0).unwrap(), pt(1.0, 0.0));
        assert!(step(pt(0.0, 0.0), 0.6).is_err());
        assert!(step(pt(0.0, 0.0), -0.1).is_err());
        let x = fixed_point(2.0 - 3f64.sqrt()).unwrap();
        let y = step(x, 2.0 - 3f64.sqrt()).unwrap();
        assert!((x.a - y.a).abs() < 1e-15 && (x.b - y.b).abs() < 1e-15);
    }

    #[test]
    fn reach_segment_examples() {
        assert_eq!(reach_segment(pt(0.0, 0.0)), (EXIT, pt(0.75, 0.0)));
        assert_eq!(reach_segment(pt(1.0, 0.0)).1, pt(0.75, 0.5));
        let x = pt(0.4, 0.3);
        let (s, t) = reach_segment(x);
        let mid = Point2::new((s.a + t.a) / 2.0, (s.b + t.b) / 2.0);
        let q = step(x, 0.25).unwrap();
        assert!((mid.a - q.a).abs() < 1e-15 && (mid.b - q.b).abs() < 1e-15);
    }

    #[test]
    fn fixed_points_exact() {
        let z = Sqrt3::new(ratio(2, 1), ratio(-1, 1));
        let (a, b) = fixed_point_exact(&z).unwrap();
        assert_eq!(a, Sqrt3::new(ratio(1, 2), ratio(1, 4)));
        assert_eq!(b, Sqrt3::from_ratio(1, 4));
        assert_eq!(step_exact(&a, &b, &z).unwrap(), (a.clone(), b.clone()));

        let q = ratio(1, 4);
        let (a, b) = fixed_point_exact(&q).unwrap();
        assert_eq!((a.clone(), b.clone()), (ratio(14, 15), ratio(7, 30)));
        assert_eq!(step_exact(&a, &b, &q).unwrap(), (a, b));
        assert_eq!(fixed_point(0.0).unwrap(), pt(1.0, 0.0));
        assert!(fixed_point(1.0).is_err());
        assert!(fixed_point_exact(&ratio(1, 1)).is_err());
    }

    #[test]
    fn constant_z_orbit_contracts_by_z_squared() {
        let z = ratio(1, 3);
        let (fa, fb) = fixed_point_exact(&z).unwrap();
        let mut orbit = vec![(BigRational::from_integer(1.into()), BigRational::from_integer(0.into()))];
        for _ in 0..6 {
            let (a, b) = orbit.last().unwrap();
            orbit.push(step_exact(a, b, &z).unwrap());
        }
        let z2 = &z * &z;
        for n in 2..orbit.len() {
            assert_eq!(&orbit[n].0 - &fa, &z2 * (&orbit[n - 2].0 - &fa));
            assert_eq!(&orbit[n].1 - &fb, &z2 * (&orbit[n - 2].1 - &fb));
        }
    }

    #[test]
    fn max_step_examples() {
        let unit = ConvexPolygon::rect(0.0, 1.0, 0.0, 1.0);
        assert_eq!(max_step(&unit, pt(0.3, 0.2)), Some(0.5));
        let exit = ConvexPolygon::hull(&[EXIT]);
        assert_eq!(max_step(&exit, pt(0.3, 0.2)), Some(0.0));
        let small = ConvexPolygon::rect(0.0, 0.9, 0.0, 0.9);
        assert!((max_step(&small, pt(1.0, 0.0)).unwrap() - 0.5).abs() < 1e-12);
        // the segment from (1,0) toward (0.75, 0.5) leaves b <= 0.1 at z = 0.1
        let low = ConvexPolygon::rect(0.0, 1.0, 0.0, 0.1);
        assert!((max_step(&low, pt(1.0, 0.0)).unwrap() - 0.1).abs() < 1e-12);
        let far = ConvexPolygon::rect(0.0, 0.5, 0.0, 0.5);
        assert_eq!(max_step(&far, pt(1.0, 0.0)), None);
        let seg = ConvexPolygon::hull(&[pt(0.9, -1.0), pt(0.9, 1.0)]);
        assert!((max_step(&seg, pt(1.0, 0.0)).unwrap() - 0.2).abs() < 1e-12);
    }

    #[test]
    fn box_validation() {
        assert!(SearchBox::new(0.0).is_err());
        assert!(SearchBox::new(-0.1).is_err());
        assert!(SearchBox::new(f64::NAN).is_err());
        let b = SearchBox::new(1.0).unwrap();
        assert!(b.is_empty());
        let cfg = IterationConfig {
            grid: 64,
            ..Default::default()
        };
        assert_eq!(certify_empty(&b, &cfg).unwrap(), Certification::Certified { k: 1 });
        assert!(certify_empty(&SearchBox::new(0.1).unwrap(), &IterationConfig { grid: 8, ..cfg }).is_err());
    }

    #[test]
    fn wide_margin_empties_at_once() {
        // every reach segment has a >= 3/4 > f2 - 0.2
        let cfg = IterationConfig {
            grid: 64,
            ..Default::default()
        };
        let run = sk_iterate(&SearchBox::new(0.2).unwrap(), &cfg).unwrap();
        assert_eq!(run.certification(), Certification::Certified { k: 1 });
    }

    #[test]
    fn polygons_are_nested_and_convex() {
        let cfg = IterationConfig {
            grid: 64,
            tol: 1e-12,
            k_max: 200,
        };
        let run = sk_iterate(&SearchBox::new(0.1).unwrap(), &cfg).unwrap();
        assert!(run.certification().k().is_some(), "{:?}", run.stop);
        let mut prev = run.search_box.polygon();
        for p in &run.polygons {
            assert!(p.is_convex(1e-12));
            assert!(p.approx_subset(&prev, 2.0 * cfg.tol));
            prev = p.clone();
        }
        let csv = run.snapshots_csv();
        assert!(csv.starts_with("k,vertex_index,a,b\n0,0,0,0\n"));
        assert!(run.snapshots_svg().contains("<polygon"));
    }
}
