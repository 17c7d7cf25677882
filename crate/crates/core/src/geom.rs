//! Exact lattice geometry: integer vectors, cyclic angular order and convex
//! lattice polygons.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

/// A vector in `Z^2`. Used for deck translations, homology classes, height
/// changes and lattice-polygon vertices alike.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: i64,
    pub y: i64,
}

pub const fn v2(x: i64, y: i64) -> Vec2 {
    Vec2 { x, y }
}

pub const ZERO: Vec2 = v2(0, 0);

impl Vec2 {
    pub fn det(self, other: Vec2) -> i64 {
        self.x * other.y - self.y * other.x
    }

    pub fn dot(self, other: Vec2) -> i64 {
        self.x * other.x + self.y * other.y
    }

    /// Counterclockwise rotation by 90 degrees.
    pub fn rot90(self) -> Vec2 {
        v2(-self.y, self.x)
    }

    /// Clockwise rotation by 90 degrees.
    pub fn rot270(self) -> Vec2 {
        v2(self.y, -self.x)
    }

    pub fn is_zero(self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub fn gcd(self) -> i64 {
        gcd(self.x.unsigned_abs(), self.y.unsigned_abs()) as i64
    }

    pub fn is_primitive(self) -> bool {
        self.gcd() == 1
    }

    pub fn primitive(self) -> Vec2 {
        let g = self.gcd();
        if g == 0 {
            self
        } else {
            v2(self.x / g, self.y / g)
        }
    }

    pub fn scale(self, k: i64) -> Vec2 {
        v2(self.x * k, self.y * k)
    }

    /// Index of the half plane the vector points into, for angular sorting:
    /// 0 for the upper half plane (including the positive x-axis), 1 for the
    /// lower one (including the negative x-axis). Zero vectors sort first.
    fn half(self) -> u8 {
        if self.is_zero() {
            return 0;
        }
        if self.y > 0 || (self.y == 0 && self.x > 0) {
            0
        } else {
            1
        }
    }

    /// Total order by angle counterclockwise from the positive x-axis.
    /// Collinear vectors compare equal regardless of length.
    pub fn angle_cmp(self, other: Vec2) -> Ordering {
        self.half()
            .cmp(&other.half())
            .then_with(|| 0.cmp(&self.det(other)))
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        v2(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Vec2 {
    fn add_assign(&mut self, o: Vec2) {
        *self = *self + o;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        v2(self.x - o.x, self.y - o.y)
    }
}

impl SubAssign for Vec2 {
    fn sub_assign(&mut self, o: Vec2) {
        *self = *self - o;
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        v2(-self.x, -self.y)
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

/// Convex hull of a point set, counterclockwise, starting at the
/// lexicographically smallest vertex. Collinear boundary points are dropped,
/// so the result lists extreme points only.
pub fn convex_hull(points: &[Vec2]) -> Vec<Vec2> {
    let mut pts: Vec<Vec2> = points.to_vec();
    pts.sort();
    pts.dedup();
    let n = pts.len();
    if n <= 2 {
        return pts;
    }
    let mut lower: Vec<Vec2> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 {
            let a = lower[lower.len() - 2];
            let b = lower[lower.len() - 1];
            if (b - a).det(p - a) <= 0 {
                lower.pop();
            } else {
                break;
            }
        }
        lower.push(p);
    }
    let mut upper: Vec<Vec2> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 {
            let a = upper[upper.len() - 2];
            let b = upper[upper.len() - 1];
            if (b - a).det(p - a) <= 0 {
                upper.pop();
            } else {
                break;
            }
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        // All points collinear; fall back to the two extremes.
        let mut ends = vec![pts[0], pts[n - 1]];
        ends.dedup();
        return ends;
    }
    lower
}

/// A convex lattice polygon: counterclockwise extreme vertices, first vertex
/// lexicographically smallest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticePolygon {
    vertices: Vec<Vec2>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PolygonError {
    #[error("polygon is degenerate: fewer than 3 extreme points")]
    Degenerate,
}

impl LatticePolygon {
    /// Convex hull of `points`; errors if the hull is a point or a segment.
    pub fn hull(points: &[Vec2]) -> Result<LatticePolygon, PolygonError> {
        let verts = convex_hull(points);
        if verts.len() < 3 {
            return Err(PolygonError::Degenerate);
        }
        Ok(LatticePolygon { vertices: verts })
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn translate(&self, d: Vec2) -> LatticePolygon {
        let verts: Vec<Vec2> = self.vertices.iter().map(|&p| p + d).collect();
        LatticePolygon::hull(&verts).expect("translate preserves shape")
    }

    /// Translate so the lexicographically smallest vertex sits at the origin.
    pub fn normalize(&self) -> LatticePolygon {
        self.translate(-self.vertices[0])
    }

    /// Twice the Euclidean area (an integer, by the shoelace formula).
    pub fn twice_area(&self) -> i64 {
        let v = &self.vertices;
        let mut s = 0i64;
        for i in 0..v.len() {
            let a = v[i];
            let b = v[(i + 1) % v.len()];
            s += a.det(b);
        }
        s
    }

    pub fn contains(&self, p: Vec2) -> bool {
        let v = &self.vertices;
        for i in 0..v.len() {
            let a = v[i];
            let b = v[(i + 1) % v.len()];
            if (b - a).det(p - a) < 0 {
                return false;
            }
        }
        true
    }

    pub fn is_vertex(&self, p: Vec2) -> bool {
        self.vertices.contains(&p)
    }

    /// All lattice points inside or on the polygon.
    pub fn lattice_points(&self) -> Vec<Vec2> {
        let xs: Vec<i64> = self.vertices.iter().map(|p| p.x).collect();
        let ys: Vec<i64> = self.vertices.iter().map(|p| p.y).collect();
        let (x0, x1) = (*xs.iter().min().unwrap(), *xs.iter().max().unwrap());
        let (y0, y1) = (*ys.iter().min().unwrap(), *ys.iter().max().unwrap());
        let mut out = Vec::new();
        for x in x0..=x1 {
            for y in y0..=y1 {
                if self.contains(v2(x, y)) {
                    out.push(v2(x, y));
                }
            }
        }
        out
    }

    /// Counterclockwise boundary edges as `(start, end)` vertex pairs.
    pub fn edges(&self) -> Vec<(Vec2, Vec2)> {
        let v = &self.vertices;
        (0..v.len())
            .map(|i| (v[i], v[(i + 1) % v.len()]))
            .collect()
    }

    /// The primitive outward normals of the boundary, each repeated by the
    /// lattice length of its edge. For a counterclockwise polygon the outward
    /// normal of an edge vector `e` is `e` rotated clockwise by 90 degrees.
    pub fn outward_normals(&self) -> Vec<Vec2> {
        let mut out = Vec::new();
        for (a, b) in self.edges() {
            let e = b - a;
            let len = e.gcd();
            let n = e.primitive().rot270();
            for _ in 0..len {
                out.push(n);
            }
        }
        out
    }

    /// The two primitive edge vectors at `corner`, pointing away from it
    /// along the boundary: first toward the previous vertex, then toward the
    /// next one in counterclockwise order.
    pub fn corner_dirs(&self, corner: Vec2) -> Option<(Vec2, Vec2)> {
        let i = self.vertices.iter().position(|&p| p == corner)?;
        let n = self.vertices.len();
        let prev = self.vertices[(i + n - 1) % n];
        let next = self.vertices[(i + 1) % n];
        Some(((prev - corner).primitive(), (next - corner).primitive()))
    }
}
