//! Planar polygon predicates and the overlap measure used for interference checks.
//!
//! Polygons are vertex lists with an implicit closing edge. Input orientation is
//! arbitrary; routines that depend on it normalize to anticlockwise internally.

use crate::geom::Vec2;
use crate::scalar::Scalar;

/// Twice the signed area; positive for anticlockwise order.
pub fn signed_area<T: Scalar>(pts: &[Vec2<T>]) -> T {
    let n = pts.len();
    let mut acc = T::zero();
    for i in 0..n {
        acc = acc + pts[i].cross(pts[(i + 1) % n]);
    }
    acc / T::lit(2.0)
}

pub fn area<T: Scalar>(pts: &[Vec2<T>]) -> T {
    signed_area(pts).abs()
}

fn ccw<T: Scalar>(pts: &[Vec2<T>]) -> Vec<Vec2<T>> {
    let mut v = pts.to_vec();
    if signed_area(&v) < T::zero() {
        v.reverse();
    }
    v
}

fn extent<T: Scalar>(pts: &[Vec2<T>]) -> T {
    pts.iter().fold(T::one(), |m, p| m.max(p.x.abs()).max(p.y.abs()))
}

/// Absolute geometric tolerance for coordinates of magnitude `scale`.
fn tol_for<T: Scalar>(scale: T) -> T {
    T::lit(1000.0) * T::epsilon() * scale
}

pub fn dist_point_segment<T: Scalar>(p: Vec2<T>, a: Vec2<T>, b: Vec2<T>) -> T {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 <= T::zero() {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / len2).max(T::zero()).min(T::one());
    p.dist(a + ab.scale(t))
}

/// Distance from `p` to the nearest point of the polygon boundary, and the edge index.
pub fn dist_to_boundary<T: Scalar>(p: Vec2<T>, poly: &[Vec2<T>]) -> (T, usize) {
    let n = poly.len();
    let mut best = (T::infinity(), 0);
    for i in 0..n {
        let d = dist_point_segment(p, poly[i], poly[(i + 1) % n]);
        if d < best.0 {
            best = (d, i);
        }
    }
    best
}

/// Even-odd containment test (boundary points may fall either way).
pub fn contains<T: Scalar>(poly: &[Vec2<T>], p: Vec2<T>) -> bool {
    let n = poly.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (poly[i], poly[j]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Inside,
    Outside,
    Boundary,
}

pub fn locate<T: Scalar>(poly: &[Vec2<T>], p: Vec2<T>, tol: T) -> Location {
    if dist_to_boundary(p, poly).0 <= tol {
        Location::Boundary
    } else if contains(poly, p) {
        Location::Inside
    } else {
        Location::Outside
    }
}

fn orient<T: Scalar>(a: Vec2<T>, b: Vec2<T>, c: Vec2<T>) -> T {
    (b - a).cross(c - a)
}

/// Closed-segment intersection test, touching included.
pub fn segments_intersect<T: Scalar>(a: Vec2<T>, b: Vec2<T>, c: Vec2<T>, d: Vec2<T>, tol: T) -> bool {
    let sgn = |v: T, scale: T| {
        if v > tol * scale {
            1
        } else if v < -tol * scale {
            -1
        } else {
            0
        }
    };
    let s1 = sgn(orient(a, b, c), (b - a).norm());
    let s2 = sgn(orient(a, b, d), (b - a).norm());
    let s3 = sgn(orient(c, d, a), (d - c).norm());
    let s4 = sgn(orient(c, d, b), (d - c).norm());
    if s1 * s2 < 0 && s3 * s4 < 0 {
        return true;
    }
    dist_point_segment(c, a, b) <= tol
        || dist_point_segment(d, a, b) <= tol
        || dist_point_segment(a, c, d) <= tol
        || dist_point_segment(b, c, d) <= tol
}

/// True when no two non-adjacent edges of the closed polygon meet and adjacent
/// edges share only their common vertex.
pub fn is_simple<T: Scalar>(poly: &[Vec2<T>]) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    let tol = tol_for(extent(poly));
    for i in 0..n {
        if poly[i].dist(poly[(i + 1) % n]) <= tol {
            return false;
        }
    }
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        for j in (i + 1)..n {
            let (c, d) = (poly[j], poly[(j + 1) % n]);
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                // folding back onto the previous edge
                let (prev, shared, next) = if j == i + 1 { (a, b, d) } else { (c, a, b) };
                let u = shared - prev;
                let v = next - shared;
                if u.cross(v).abs() <= tol * u.norm() * v.norm().max(T::one()) && u.dot(v) < T::zero() {
                    return false;
                }
                continue;
            }
            if segments_intersect(a, b, c, d, tol) {
                return false;
            }
        }
    }
    true
}

/// Open polyline variant of [`is_simple`].
pub fn polyline_is_simple<T: Scalar>(pts: &[Vec2<T>]) -> bool {
    let n = pts.len();
    if n < 2 {
        return true;
    }
    let tol = tol_for(extent(pts));
    for i in 0..n - 1 {
        for j in (i + 2)..n - 1 {
            if segments_intersect(pts[i], pts[i + 1], pts[j], pts[j + 1], tol) {
                return false;
            }
        }
    }
    for i in 1..n - 1 {
        let u = pts[i] - pts[i - 1];
        let v = pts[i + 1] - pts[i];
        if u.cross(v).abs() <= tol * u.norm() * v.norm().max(T::one()) && u.dot(v) < T::zero() {
            return false;
        }
    }
    true
}

/// Parameters along `p0→p1` where it meets the boundary of `other`.
fn cut_params<T: Scalar>(p0: Vec2<T>, p1: Vec2<T>, other: &[Vec2<T>], tol: T) -> Vec<T> {
    let d = p1 - p0;
    let dl = d.norm();
    let mut ts = vec![T::zero(), T::one()];
    let m = other.len();
    for k in 0..m {
        let (q0, q1) = (other[k], other[(k + 1) % m]);
        let e = q1 - q0;
        let el = e.norm();
        let denom = d.cross(e);
        let w = q0 - p0;
        if denom.abs() > T::lit(1e-12) * dl * el {
            let t = w.cross(e) / denom;
            let u = w.cross(d) / denom;
            let slack = tol / el.max(tol);
            if t > T::zero() && t < T::one() && u >= -slack && u <= T::one() + slack {
                ts.push(t);
            }
        } else if w.cross(d).abs() <= tol * dl {
            for q in [q0, q1] {
                let t = (q - p0).dot(d) / (dl * dl);
                if t > T::zero() && t < T::one() {
                    ts.push(t);
                }
            }
        }
    }
    ts.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    ts.dedup_by(|a, b| (*a - *b).abs() <= T::lit(1e-14));
    ts
}

/// Boundary-integral contribution of the parts of `a`'s edges lying inside `b`.
/// `keep_shared` decides whether same-direction shared boundary pieces count.
fn inside_contribution<T: Scalar>(a: &[Vec2<T>], b: &[Vec2<T>], keep_shared: bool, tol: T) -> T {
    let n = a.len();
    let mut acc = T::zero();
    let half = T::lit(0.5);
    for i in 0..n {
        let (p0, p1) = (a[i], a[(i + 1) % n]);
        let d = p1 - p0;
        let ts = cut_params(p0, p1, b, tol);
        for w in ts.windows(2) {
            let (s0, s1) = (p0 + d.scale(w[0]), p0 + d.scale(w[1]));
            if s0.dist(s1) <= tol {
                continue;
            }
            let mid = (s0 + s1).scale(half);
            let take = match locate(b, mid, tol) {
                Location::Inside => true,
                Location::Outside => false,
                Location::Boundary => {
                    let (_, k) = dist_to_boundary(mid, b);
                    let e = b[(k + 1) % b.len()] - b[k];
                    keep_shared && d.dot(e) > T::zero()
                }
            };
            if take {
                acc = acc + s0.cross(s1) * half;
            }
        }
    }
    acc
}

/// Area of `a ∩ b` for simple polygons, including non-convex ones.
///
/// The intersection boundary is assembled from the pieces of each boundary that
/// lie inside the other polygon. Pieces shared by both boundaries count once when
/// the interiors lie on the same side and not at all when they lie on opposite
/// sides, so polygons that merely touch along an edge report zero.
pub fn intersection_area<T: Scalar>(a: &[Vec2<T>], b: &[Vec2<T>]) -> T {
    if a.len() < 3 || b.len() < 3 {
        return T::zero();
    }
    let a = ccw(a);
    let b = ccw(b);
    let tol = tol_for(extent(&a).max(extent(&b)));
    let total = inside_contribution(&a, &b, true, tol) + inside_contribution(&b, &a, false, tol);
    total.max(T::zero())
}

/// Deepest vertex of either polygon found strictly inside the other, measured
/// to the other's boundary.
pub fn max_penetration<T: Scalar>(a: &[Vec2<T>], b: &[Vec2<T>]) -> T {
    let tol = tol_for(extent(a).max(extent(b)));
    let depth = |src: &[Vec2<T>], dst: &[Vec2<T>]| {
        src.iter()
            .filter(|p| locate(dst, **p, tol) == Location::Inside)
            .map(|p| dist_to_boundary(*p, dst).0)
            .fold(T::zero(), |m, d| m.max(d))
    };
    depth(a, b).max(depth(b, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: f64, y: f64) -> Vec2<f64> {
        Vec2::new(x, y)
    }

    fn square(x0: f64, y0: f64, s: f64) -> Vec<Vec2<f64>> {
        vec![v(x0, y0), v(x0 + s, y0), v(x0 + s, y0 + s), v(x0, y0 + s)]
    }

    #[test]
    fn overlapping_squares() {
        let a = square(0.0, 0.0, 2.0);
        let b = square(1.0, 1.0, 2.0);
        assert!((intersection_area(&a, &b) - 1.0).abs() < 1e-12);
        let mut rb = b.clone();
        rb.reverse();
        assert!((intersection_area(&a, &rb) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn touching_squares_have_zero_overlap() {
        let a = square(0.0, 0.0, 1.0);
        let b = square(1.0, 0.0, 1.0);
        assert!(intersection_area(&a, &b) <= 1e-15);
        let c = square(1.0, 0.5, 1.0);
        assert!(intersection_area(&a, &c) <= 1e-15);
    }

    #[test]
    fn identical_and_nested() {
        let a = square(0.0, 0.0, 3.0);
        assert!((intersection_area(&a, &a) - 9.0).abs() < 1e-12);
        let inner = square(1.0, 1.0, 1.0);
        assert!((intersection_area(&a, &inner) - 1.0).abs() < 1e-12);
        assert!((intersection_area(&inner, &a) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn non_convex_l_shape() {
        // L-shape of area 3 against a square covering its notch and one arm
        let l = vec![v(0.0, 0.0), v(2.0, 0.0), v(2.0, 1.0), v(1.0, 1.0), v(1.0, 2.0), v(0.0, 2.0)];
        let s = square(0.5, 0.5, 1.0);
        // square [0.5,1.5]² minus the notch [1,1.5]²
        assert!((intersection_area(&l, &s) - 0.75).abs() < 1e-12);
        assert!((area(&l) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn bowtie_is_not_simple() {
        let bow = vec![v(0.0, 0.0), v(1.0, 1.0), v(1.0, 0.0), v(0.0, 1.0)];
        assert!(!is_simple(&bow));
        assert!(is_simple(&square(0.0, 0.0, 1.0)));
        let spike = vec![v(0.0, 0.0), v(2.0, 0.0), v(1.0, 0.0), v(1.0, 1.0)];
        assert!(!is_simple(&spike));
    }

    #[test]
    fn polyline_simplicity() {
        assert!(polyline_is_simple(&[v(0.0, 0.0), v(1.0, 0.0), v(1.0, 1.0)]));
        assert!(!polyline_is_simple(&[v(0.0, 0.0), v(2.0, 0.0), v(2.0, 1.0), v(1.0, -1.0)]));
    }

    #[test]
    fn penetration_of_corner() {
        let a = square(0.0, 0.0, 2.0);
        let b = square(1.5, 1.75, 2.0);
        assert!((max_penetration(&a, &b) - 0.25).abs() < 1e-12);
        assert_eq!(max_penetration(&a, &square(3.0, 0.0, 1.0)), 0.0);
    }
}
