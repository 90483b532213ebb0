use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use super::rational::Rational;
use crate::error::Error;

/// A point of Q^n, coordinates indexed from 0 in code and from 1 in reports.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct Point(pub Vec<Rational>);

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        Point(coords)
    }

    pub fn ints(v: &[i64]) -> Self {
        Point(v.iter().map(|&x| Rational::int(x)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        Point(vec![Rational::zero(); n])
    }

    /// Unit vector e_j with 1-based index j.
    pub fn unit(n: usize, j: usize) -> Self {
        let mut p = Point::zeros(n);
        p.0[j - 1] = Rational::one();
        p
    }

    /// The all-ones vector e.
    pub fn ones(n: usize) -> Self {
        Point(vec![Rational::one(); n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn sum(&self) -> Rational {
        self.0.iter().sum()
    }

    pub fn add(&self, o: &Point) -> Point {
        Point(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Point) -> Point {
        Point(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &Rational) -> Point {
        Point(self.0.iter().map(|a| a * s).collect())
    }

    pub fn add_scalar(&self, s: &Rational) -> Point {
        Point(self.0.iter().map(|a| a + s).collect())
    }

    /// `t*self + (1-t)*o`.
    pub fn lerp(&self, o: &Point, t: &Rational) -> Point {
        let u = Rational::one() - t;
        Point(self.0.iter().zip(&o.0).map(|(a, b)| a * t + b * &u).collect())
    }

    /// `self / self.sum()`; errors on a zero sum.
    pub fn normalized(&self) -> Result<Point, Error> {
        let s = self.sum();
        let inv = s.recip()?;
        Ok(self.scale(&inv))
    }

    pub fn dist_inf(&self, o: &Point) -> Rational {
        self.0
            .iter()
            .zip(&o.0)
            .map(|(a, b)| (a - b).abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Componentwise `self <= o`.
    pub fn le(&self, o: &Point) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] < w[1])
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(Rational::to_f64).collect()
    }

    pub fn check_dim(&self, n: usize) -> Result<(), Error> {
        if self.dim() != n {
            return Err(Error::Dimension { expected: n, found: self.dim() });
        }
        Ok(())
    }
}

impl Index<usize> for Point {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl IndexMut<usize> for Point {
    fn index_mut(&mut self, i: usize) -> &mut Rational {
        &mut self.0[i]
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Closed or right-unbounded interval of nonnegative rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Option<Rational>,
}

impl Interval {
    pub fn new(lo: Rational, hi: Option<Rational>) -> Result<Self, Error> {
        if lo.is_negative() {
            return Err(Error::Domain(format!("interval start {lo} is negative")));
        }
        if let Some(h) = &hi {
            if *h < lo {
                return Err(Error::Domain(format!("interval [{lo},{h}] is reversed")));
            }
        }
        Ok(Interval { lo, hi })
    }

    pub fn contains(&self, q: &Rational) -> bool {
        *q >= self.lo && self.hi.as_ref().is_none_or(|h| q <= h)
    }

    pub fn is_bounded(&self) -> bool {
        self.hi.is_some()
    }
}

/// Coordinates of `p` in nondecreasing order.
pub fn phi_sort(p: &Point) -> Point {
    let mut v = p.0.clone();
    v.sort();
    Point(v)
}

/// Componentwise infimum and supremum of a finite set.
pub fn comp_inf_sup<'a>(points: impl IntoIterator<Item = &'a Point>) -> Result<(Point, Point), Error> {
    let mut it = points.into_iter();
    let first = it.next().ok_or(Error::EmptySet)?;
    let mut lo = first.clone();
    let mut hi = first.clone();
    for p in it {
        p.check_dim(lo.dim())?;
        for i in 0..lo.dim() {
            if p[i] < lo[i] {
                lo[i] = p[i].clone();
            }
            if p[i] > hi[i] {
                hi[i] = p[i].clone();
            }
        }
    }
    Ok((lo, hi))
}

/// Two-sided Hausdorff distance between finite sets under the sup norm.
pub fn set_dist(e: &[Point], f: &[Point]) -> Result<Rational, Error> {
    if e.is_empty() || f.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = e[0].dim();
    for p in e.iter().chain(f) {
        p.check_dim(n)?;
    }
    let one_side = |a: &[Point], b: &[Point]| {
        a.iter()
            .map(|p| b.iter().map(|x| p.dist_inf(x)).min().expect("nonempty"))
            .max()
            .expect("nonempty")
    };
    let d1 = one_side(e, f);
    let d2 = one_side(f, e);
    Ok(Rational::max_of(&d1, &d2))
}

/// Hausdorff distance of the `to_f64` images.
pub fn set_dist_f64(e: &[Point], f: &[Point]) -> f64 {
    let ef: Vec<Vec<f64>> = e.iter().map(Point::to_f64).collect();
    let ff: Vec<Vec<f64>> = f.iter().map(Point::to_f64).collect();
    let d = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let one_side = |a: &[Vec<f64>], b: &[Vec<f64>]| {
        a.iter().map(|p| b.iter().map(|x| d(p, x)).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
    };
    one_side(&ef, &ff).max(one_side(&ff, &ef))
}

/// Exact test of `set_dist(e, f) <= bound`, decided in floating point when the margin allows.
pub fn set_dist_at_most(e: &[Point], f: &[Point], bound: &Rational) -> Result<bool, Error> {
    if e.is_empty() || f.is_empty() {
        return Err(Error::EmptySet);
    }
    let b = bound.to_f64();
    let d = set_dist_f64(e, f);
    let slack = 1e-9 * b.abs() + 1e-12;
    if d <= b - slack {
        return Ok(true);
    }
    if d >= b + slack {
        return Ok(false);
    }
    let covered = |a: &[Point], c: &[Point]| a.iter().all(|p| c.iter().any(|x| p.dist_inf(x) <= *bound));
    Ok(covered(e, f) && covered(f, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    #[test]
    fn sorting() {
        assert_eq!(phi_sort(&Point::ints(&[2, 4, 3])), Point::ints(&[2, 3, 4]));
        assert_eq!(phi_sort(&Point::ints(&[1, 2, 4])), Point::ints(&[1, 2, 4]));
    }

    #[test]
    fn inf_sup() {
        let pts = [
            Point(vec![q(1, 7), q(2, 7), q(4, 7)]),
            Point(vec![q(1, 4), q(1, 4), q(1, 2)]),
            Point(vec![q(1, 5), q(2, 5), q(2, 5)]),
        ];
        let (lo, hi) = comp_inf_sup(&pts).unwrap();
        assert_eq!(lo, Point(vec![q(1, 7), q(1, 4), q(2, 5)]));
        assert_eq!(hi, Point(vec![q(1, 4), q(2, 5), q(4, 7)]));
        let (lo, hi) = comp_inf_sup(&[Point::ints(&[0, 1]), Point::ints(&[1, 0])]).unwrap();
        assert_eq!((lo, hi), (Point::ints(&[0, 0]), Point::ints(&[1, 1])));
        let (lo, hi) = comp_inf_sup(&[Point::ints(&[1, 2, 3])]).unwrap();
        assert_eq!(lo, hi);
        assert_eq!(comp_inf_sup(&[] as &[Point]), Err(Error::EmptySet));
    }

    #[test]
    fn hausdorff() {
        let e = [Point::ints(&[0, 0])];
        let f = [Point::ints(&[1, 3])];
        assert_eq!(set_dist(&e, &f).unwrap(), Rational::int(3));
        let e = [Point::ints(&[0, 0]), Point::ints(&[2, 0])];
        let f = [Point::ints(&[1, 0])];
        assert_eq!(set_dist(&e, &f).unwrap(), Rational::one());
        assert_eq!(set_dist(&e, &e).unwrap(), Rational::zero());
        assert!(set_dist(&e, &[]).is_err());
    }
}
