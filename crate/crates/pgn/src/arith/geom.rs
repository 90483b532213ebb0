//! Planar geometry on the slice x1 + x2 + x3 = 1, all predicates exact.

use super::point::Point;
use super::rational::{q, Rational};
use crate::error::Error;

pub fn e(j: usize) -> Point {
    Point::unit(3, j)
}

/// (0, 1/2, 1/2)
pub fn f1() -> Point {
    Point(vec![Rational::zero(), q(1, 2), q(1, 2)])
}

/// (1/3, 1/3, 1/3)
pub fn f2() -> Point {
    Point(vec![q(1, 3), q(1, 3), q(1, 3)])
}

/// e3
pub fn f3() -> Point {
    e(3)
}

pub fn on_plane(p: &Point) -> bool {
    p.dim() == 3 && p.sum() == Rational::one()
}

/// Affine chart (x2 + x3/2, x3); orientation-preserving image of the planar embedding.
fn chart(p: &Point) -> (Rational, Rational) {
    (&p[1] + &p[2] * q(1, 2), p[2].clone())
}

fn cross(o: &(Rational, Rational), a: &(Rational, Rational), b: &(Rational, Rational)) -> Rational {
    (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
}

/// Orientation of the triangle (o, a, b): positive when counterclockwise.
pub fn orient(o: &Point, a: &Point, b: &Point) -> Rational {
    cross(&chart(o), &chart(a), &chart(b))
}

/// Convex hull vertices, counterclockwise, starting at the lexicographically smallest chart point.
pub fn hull2(points: &[Point]) -> Result<Vec<Point>, Error> {
    for p in points {
        if !on_plane(p) {
            return Err(Error::Domain(format!("point {p} is not on the plane x1+x2+x3=1")));
        }
    }
    let mut pts: Vec<((Rational, Rational), &Point)> = points.iter().map(|p| (chart(p), p)).collect();
    pts.sort_by(|a, b| a.0.cmp(&b.0));
    pts.dedup_by(|a, b| a.0 == b.0);
    if pts.len() <= 2 {
        return Ok(pts.into_iter().map(|(_, p)| p.clone()).collect());
    }
    let mut lower: Vec<usize> = Vec::new();
    for i in 0..pts.len() {
        while lower.len() >= 2
            && cross(&pts[lower[lower.len() - 2]].0, &pts[lower[lower.len() - 1]].0, &pts[i].0) <= Rational::zero()
        {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for i in (0..pts.len()).rev() {
        while upper.len() >= 2
            && cross(&pts[upper[upper.len() - 2]].0, &pts[upper[upper.len() - 1]].0, &pts[i].0) <= Rational::zero()
        {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    Ok(lower.into_iter().map(|i| pts[i].1.clone()).collect())
}

/// Membership in the convex polygon returned by `hull2` (boundary included).
pub fn hull_contains(hull: &[Point], p: &Point) -> bool {
    match hull.len() {
        0 => false,
        1 => hull[0] == *p,
        2 => on_segment(p, &hull[0], &hull[1]),
        n => (0..n).all(|i| orient(&hull[i], &hull[(i + 1) % n], p) >= Rational::zero()),
    }
}

/// `p` lies on the closed segment [a, b].
pub fn on_segment(p: &Point, a: &Point, b: &Point) -> bool {
    if a == b {
        return p == a;
    }
    let k = (0..a.dim()).find(|&k| a[k] != b[k]).expect("distinct points");
    let t = (&p[k] - &a[k]) / (&b[k] - &a[k]);
    if t.is_negative() || t > Rational::one() {
        return false;
    }
    (0..a.dim()).all(|i| p[i] == &a[i] + &t * (&b[i] - &a[i]))
}

/// The λ with `b = λ a + (1 - λ) e_j`, when such a λ exists and `a != e_j`.
pub fn toward_lambda(a: &Point, b: &Point, j: usize) -> Option<Rational> {
    let n = a.dim();
    let k = (0..n).find(|&k| k != j - 1 && !a[k].is_zero())?;
    let lam = &b[k] / &a[k];
    let ok = (0..n).filter(|&i| i != j - 1).all(|i| b[i] == &lam * &a[i]);
    if ok && b.sum() == a.sum() {
        Some(lam)
    } else {
        None
    }
}

/// Intersection of the lines (a1 a2) and (b1 b2) in the plane; `None` when parallel or degenerate.
pub fn line_intersect(a1: &Point, a2: &Point, b1: &Point, b2: &Point) -> Option<Point> {
    let d1 = a2.sub(a1);
    let d2 = b2.sub(b1);
    let det = &d1[0] * &d2[1] - &d1[1] * &d2[0];
    if det.is_zero() {
        return None;
    }
    let w = b1.sub(a1);
    let s = (&w[0] * &d2[1] - &w[1] * &d2[0]) / det;
    Some(a1.add(&d1.scale(&s)))
}

/// Central projection from e1 onto the line x1 = x2.
pub fn proj1(p: &Point) -> Option<Point> {
    let den = Rational::one() - &p[0] + &p[1];
    if den.is_zero() {
        return None;
    }
    let t = den.recip().ok()?;
    Some(e(1).add(&p.sub(&e(1)).scale(&t)))
}

/// Central projection from e3 onto the line x2 = x3.
pub fn proj3(p: &Point) -> Option<Point> {
    let den = Rational::one() + &p[1] - &p[2];
    if den.is_zero() {
        return None;
    }
    let t = den.recip().ok()?;
    Some(e(3).add(&p.sub(&e(3)).scale(&t)))
}

/// Closed triangle x1 <= x2 <= x3 with x1 >= 0 on the plane.
pub fn in_delta_closed(p: &Point) -> bool {
    on_plane(p) && !p[0].is_negative() && p[0] <= p[1] && p[1] <= p[2]
}

/// Open triangle 0 < x1 < x2 < x3.
pub fn in_delta_open(p: &Point) -> bool {
    on_plane(p) && p[0].is_positive() && p[0] < p[1] && p[1] < p[2]
}

/// Closed edge [f2, f3]: x1 = x2 <= x3.
pub fn on_l_closed(p: &Point) -> bool {
    on_plane(p) && !p[0].is_negative() && p[0] == p[1] && p[1] <= p[2]
}

/// Open edge (f2, f3).
pub fn on_l(p: &Point) -> bool {
    on_plane(p) && p[0].is_positive() && p[0] == p[1] && p[1] < p[2]
}

/// Closed edge [f2, f1]: x1 <= x2 = x3.
pub fn on_lstar_closed(p: &Point) -> bool {
    on_plane(p) && !p[0].is_negative() && p[0] <= p[1] && p[1] == p[2]
}

/// Open edge (f2, f1).
pub fn on_lstar(p: &Point) -> bool {
    on_plane(p) && p[0].is_positive() && p[0] < p[1] && p[1] == p[2]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> Point {
        Point(vec![q(a.0, a.1), q(b.0, b.1), q(c.0, c.1)])
    }

    #[test]
    fn triangle_hull() {
        let h = hull2(&[f1(), f2(), f3()]).unwrap();
        assert_eq!(h, vec![f2(), f1(), f3()]);
        assert_eq!(hull2(&[f2(), f2(), f2()]).unwrap(), vec![f2()]);
        assert!(hull2(&[Point::ints(&[1, 1, 1])]).is_err());
    }

    #[test]
    fn hull_drops_collinear_and_interior() {
        let mid = f1().lerp(&f3(), &q(1, 2));
        let inner = p3((1, 7), (2, 7), (4, 7));
        let h = hull2(&[f1(), f2(), f3(), mid.clone(), inner.clone()]).unwrap();
        assert_eq!(h.len(), 3);
        assert!(hull_contains(&h, &mid));
        assert!(hull_contains(&h, &inner));
        assert!(!hull_contains(&h, &p3((1, 2), (1, 4), (1, 4))));
    }

    #[test]
    fn lambdas_and_lines() {
        let a = p3((1, 4), (1, 4), (1, 2));
        let b = p3((1, 5), (2, 5), (2, 5));
        assert_eq!(toward_lambda(&a, &b, 2), Some(q(4, 5)));
        assert_eq!(toward_lambda(&a, &b, 1), None);
        let x = line_intersect(&e(1), &a, &f2(), &f1()).unwrap();
        assert!(on_lstar_closed(&x) || x[1] == x[2]);
        assert_eq!(proj1(&p3((1, 7), (2, 7), (4, 7))).unwrap(), a);
        assert_eq!(proj3(&p3((1, 7), (2, 7), (4, 7))).unwrap(), b);
    }

    #[test]
    fn segments() {
        assert!(on_segment(&f2(), &f2(), &f3()));
        assert!(on_segment(&p3((1, 6), (1, 6), (2, 3)), &f2(), &f3()));
        assert!(!on_segment(&e(1), &f2(), &f3()));
    }
}
