//! 2-D convex geometry over the complex plane: hulls of zero sets, Minkowski
//! sums with segments, and tolerance-aware containment.
//!
//! Regions degrade gracefully: empty, a single point, a segment, or a convex
//! polygon with CCW vertices and no three consecutive collinear.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::Result;

/// Collinearity / coincidence tolerance, scaled by coordinate magnitude.
const GEOM_EPS: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum ConvexRegion {
    Empty,
    Point(Complex64),
    Segment(Complex64, Complex64),
    Polygon(Vec<Complex64>),
}

/// A closed segment in the plane. Theorem regions use `[0, t] * w` segments
/// through the origin, built with [`Segment::from_origin`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    #[serde(with = "crate::json::complex")]
    pub a: Complex64,
    #[serde(with = "crate::json::complex")]
    pub b: Complex64,
}

impl Segment {
    pub fn new(a: Complex64, b: Complex64) -> Self {
        Segment { a, b }
    }

    /// The segment `[0, w]`.
    pub fn from_origin(w: Complex64) -> Self {
        Segment { a: Complex64::new(0.0, 0.0), b: w }
    }
}

fn cross(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

impl ConvexRegion {
    pub fn kind(&self) -> &'static str {
        match self {
            ConvexRegion::Empty => "empty",
            ConvexRegion::Point(_) => "point",
            ConvexRegion::Segment(..) => "segment",
            ConvexRegion::Polygon(_) => "polygon",
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, ConvexRegion::Empty)
    }

    pub fn vertices(&self) -> Vec<Complex64> {
        match self {
            ConvexRegion::Empty => Vec::new(),
            ConvexRegion::Point(p) => vec![*p],
            ConvexRegion::Segment(a, b) => vec![*a, *b],
            ConvexRegion::Polygon(vs) => vs.clone(),
        }
    }

    /// Largest pairwise vertex distance; 0 for points, error-free on empty.
    pub fn diameter(&self) -> f64 {
        let vs = self.vertices();
        let mut d = 0.0f64;
        for i in 0..vs.len() {
            for j in (i + 1)..vs.len() {
                d = d.max((vs[i] - vs[j]).norm());
            }
        }
        d
    }
}

#[derive(Serialize, Deserialize)]
struct RegionJson {
    kind: String,
    #[serde(with = "crate::json::complex_vec")]
    vertices: Vec<Complex64>,
}

impl Serialize for ConvexRegion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RegionJson { kind: self.kind().to_string(), vertices: self.vertices() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ConvexRegion {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RegionJson::deserialize(d)?;
        let n = raw.vertices.len();
        match (raw.kind.as_str(), n) {
            ("empty", 0) => Ok(ConvexRegion::Empty),
            ("point", 1) => Ok(ConvexRegion::Point(raw.vertices[0])),
            ("segment", 2) => Ok(ConvexRegion::Segment(raw.vertices[0], raw.vertices[1])),
            ("polygon", n) if n >= 3 => Ok(ConvexRegion::Polygon(raw.vertices)),
            (kind, n) => Err(D::Error::custom(format!(
                "region kind {kind:?} inconsistent with {n} vertices"
            ))),
        }
    }
}

/// Andrew monotone chain over the input points, with degenerate
/// classification: all-coincident collapses to a point, all-collinear to a
/// segment.
pub fn convex_hull(points: &[Complex64]) -> ConvexRegion {
    if points.is_empty() {
        return ConvexRegion::Empty;
    }
    let scale = points
        .iter()
        .map(|p| p.re.abs().max(p.im.abs()))
        .fold(0.0, f64::max);
    let coincide_tol = GEOM_EPS * scale.max(1e-300);
    let area_tol = GEOM_EPS * scale * scale;

    let mut pts: Vec<Complex64> = points.to_vec();
    pts.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    pts.dedup_by(|a, b| (*a - *b).norm() <= coincide_tol);

    if pts.len() == 1 {
        return ConvexRegion::Point(pts[0]);
    }

    let chain = |iter: &mut dyn Iterator<Item = Complex64>| -> Vec<Complex64> {
        let mut out: Vec<Complex64> = Vec::new();
        for p in iter {
            while out.len() >= 2 && cross(out[out.len() - 2], out[out.len() - 1], p) <= area_tol {
                out.pop();
            }
            out.push(p);
        }
        out
    };
    let mut lower = chain(&mut pts.iter().copied());
    let mut upper = chain(&mut pts.iter().rev().copied());
    lower.pop();
    upper.pop();
    lower.append(&mut upper);

    match lower.len() {
        0 | 1 => ConvexRegion::Point(pts[0]),
        2 => {
            if (lower[0] - lower[1]).norm() <= coincide_tol {
                ConvexRegion::Point(lower[0])
            } else {
                ConvexRegion::Segment(lower[0], lower[1])
            }
        }
        _ => ConvexRegion::Polygon(lower),
    }
}

/// `{x + y : x in r, y in s}`, implemented as the hull of vertex sums.
/// Convexity is preserved; the vertex count grows by at most 2.
pub fn minkowski_sum_segment(r: &ConvexRegion, s: &Segment) -> ConvexRegion {
    if r.is_empty() {
        return ConvexRegion::Empty;
    }
    let sums: Vec<Complex64> = r
        .vertices()
        .iter()
        .flat_map(|&v| [v + s.a, v + s.b])
        .collect();
    convex_hull(&sums)
}

fn dist_point_segment(z: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let t = (((z - a).re * ab.re) + ((z - a).im * ab.im)) / len2;
    let t = t.clamp(0.0, 1.0);
    (z - (a + ab * t)).norm()
}

/// Euclidean distance to the set for exterior points; negative distance to
/// the boundary for polygon interiors; zero on the set.
pub fn signed_distance(r: &ConvexRegion, z: Complex64) -> Result<f64> {
    match r {
        ConvexRegion::Empty => Err(Error::EmptyRegion),
        ConvexRegion::Point(p) => Ok((z - p).norm()),
        ConvexRegion::Segment(a, b) => Ok(dist_point_segment(z, *a, *b)),
        ConvexRegion::Polygon(vs) => {
            let n = vs.len();
            let mut inside = true;
            let mut boundary_dist = f64::INFINITY;
            for i in 0..n {
                let a = vs[i];
                let b = vs[(i + 1) % n];
                if cross(a, b, z) < 0.0 {
                    inside = false;
                }
                boundary_dist = boundary_dist.min(dist_point_segment(z, a, b));
            }
            Ok(if inside { -boundary_dist } else { boundary_dist })
        }
    }
}

/// `true` iff `z` is within `tol` of the region. Empty regions contain
/// nothing.
pub fn contains(r: &ConvexRegion, z: Complex64, tol: f64) -> bool {
    match signed_distance(r, z) {
        Ok(d) => d <= tol,
        Err(_) => false,
    }
}

/// Hausdorff distance between two convex regions. For convex sets the
/// directed distance is attained at a vertex.
pub fn hausdorff_distance(a: &ConvexRegion, b: &ConvexRegion) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return if a.is_empty() && b.is_empty() {
            Ok(0.0)
        } else {
            Err(Error::EmptyRegion)
        };
    }
    let directed = |from: &ConvexRegion, to: &ConvexRegion| -> f64 {
        from.vertices()
            .iter()
            .map(|&v| signed_distance(to, v).expect("nonempty").max(0.0))
            .fold(0.0, f64::max)
    };
    Ok(directed(a, b).max(directed(b, a)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hull_of_triangle_with_interior_point() {
        let r = convex_hull(&[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), c(0.25, 0.25)]);
        match &r {
            ConvexRegion::Polygon(vs) => {
                assert_eq!(vs.len(), 3);
                for v in [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)] {
                    assert!(vs.iter().any(|&u| (u - v).norm() < 1e-12));
                }
            }
            other => panic!("expected polygon, got {other:?}"),
        }
        // every input point is contained
        for p in [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), c(0.25, 0.25)] {
            assert!(contains(&r, p, 1e-9));
        }
    }

    #[test]
    fn hull_degenerate_kinds() {
        assert_eq!(
            convex_hull(&[c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]),
            ConvexRegion::Segment(c(-1.0, 0.0), c(1.0, 0.0))
        );
        assert_eq!(
            convex_hull(&[c(1.0, 0.0), c(-1.0, 0.0)]),
            ConvexRegion::Segment(c(-1.0, 0.0), c(1.0, 0.0))
        );
        assert_eq!(convex_hull(&[c(2.0, 3.0); 4]), ConvexRegion::Point(c(2.0, 3.0)));
        assert_eq!(convex_hull(&[]), ConvexRegion::Empty);
    }

    #[test]
    fn polygon_is_ccw() {
        let r = convex_hull(&[c(-1.0, -1.0), c(1.0, -1.0), c(1.0, 1.0), c(-1.0, 1.0)]);
        let vs = match r {
            ConvexRegion::Polygon(vs) => vs,
            other => panic!("{other:?}"),
        };
        let n = vs.len();
        for i in 0..n {
            assert!(cross(vs[i], vs[(i + 1) % n], vs[(i + 2) % n]) > 0.0);
        }
    }

    #[test]
    fn minkowski_segment_cases() {
        // [-1,1] + [0,2] = [-1,3]
        let r = ConvexRegion::Segment(c(-1.0, 0.0), c(1.0, 0.0));
        let s = Segment::from_origin(c(2.0, 0.0));
        assert_eq!(
            minkowski_sum_segment(&r, &s),
            ConvexRegion::Segment(c(-1.0, 0.0), c(3.0, 0.0))
        );

        // point translation sweeps a segment
        let r = ConvexRegion::Point(c(5.0, 0.0));
        let s = Segment::from_origin(c(0.0, 2.0));
        assert_eq!(
            minkowski_sum_segment(&r, &s),
            ConvexRegion::Segment(c(5.0, 0.0), c(5.0, 2.0))
        );

        // square + real segment: oracle by enumerating all vertex sums
        let sq = convex_hull(&[c(1.0, 1.0), c(-1.0, 1.0), c(1.0, -1.0), c(-1.0, -1.0)]);
        let s = Segment::from_origin(c(2.0, 0.0));
        let sum = minkowski_sum_segment(&sq, &s);
        let expected = convex_hull(&[
            c(-1.0, -1.0), c(3.0, -1.0), c(3.0, 1.0), c(-1.0, 1.0),
            c(1.0, -1.0), c(1.0, 1.0),
        ]);
        assert_eq!(sum, expected);
        if let ConvexRegion::Polygon(vs) = &sum {
            assert_eq!(vs.len(), 4);
        } else {
            panic!("expected polygon");
        }

        assert_eq!(
            minkowski_sum_segment(&ConvexRegion::Empty, &s),
            ConvexRegion::Empty
        );
    }

    #[test]
    fn signed_distance_cases() {
        let seg = ConvexRegion::Segment(c(-1.0, 0.0), c(1.0, 0.0));
        assert!((signed_distance(&seg, c(2.0, 0.0)).unwrap() - 1.0).abs() < 1e-15);

        let sq = convex_hull(&[c(1.0, 1.0), c(-1.0, 1.0), c(1.0, -1.0), c(-1.0, -1.0)]);
        assert!((signed_distance(&sq, c(0.0, 0.0)).unwrap() + 1.0).abs() < 1e-15);

        // triangle (0, 1, i): distance from 1+i is to the hypotenuse x+y=1
        let tri = convex_hull(&[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)]);
        let d = signed_distance(&tri, c(1.0, 1.0)).unwrap();
        assert!((d - 0.5f64.sqrt()).abs() < 1e-15);

        assert!(matches!(
            signed_distance(&ConvexRegion::Empty, c(0.0, 0.0)),
            Err(Error::EmptyRegion)
        ));
    }

    #[test]
    fn containment_cases() {
        let seg = ConvexRegion::Segment(c(-1.0, 0.0), c(3.0, 0.0));
        assert!(contains(&seg, c(1.0 + 2.0f64.sqrt(), 0.0), 1e-9));
        assert!(!contains(&seg, c(0.0, 2.0), 1e-9));
        let tri = convex_hull(&[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)]);
        assert!(contains(&tri, c(0.25, 0.25), 0.0));
        assert!(!contains(&ConvexRegion::Empty, c(0.0, 0.0), 1e9));
    }

    #[test]
    fn json_round_trip() {
        let r = convex_hull(&[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)]);
        let text = serde_json::to_string(&r).unwrap();
        assert!(text.contains("\"kind\":\"polygon\""));
        let back: ConvexRegion = serde_json::from_str(&text).unwrap();
        assert_eq!(r, back);
    }
}
