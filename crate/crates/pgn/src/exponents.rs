//! F-sets, the maps mu_T and the six exponents in dimension 3.

use serde::{Deserialize, Serialize};

use crate::arith::{comp_inf_sup, Point, Rational};
use crate::error::{Error, Result};
use crate::nsystem::NSystem;
use crate::spectrum::SpectrumPoint6;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearMap {
    pub rows: Vec<Vec<Rational>>,
}

impl LinearMap {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let m = LinearMap { rows };
        m.check()?;
        Ok(m)
    }

    pub fn check(&self) -> Result<()> {
        let n = self.rows.first().map(Vec::len).ok_or_else(|| Error::Parse("linear map has no rows".into()))?;
        if n < 2 {
            return Err(Error::Parse("linear map needs at least two columns".into()));
        }
        for r in &self.rows {
            if r.len() != n {
                return Err(Error::Dimension { expected: n, found: r.len() });
            }
        }
        Ok(())
    }

    pub fn identity(n: usize) -> Self {
        LinearMap { rows: (1..=n).map(|j| Point::unit(n, j).0).collect() }
    }

    /// The single row x1 + ... + xi.
    pub fn psi(n: usize, i: usize) -> Self {
        LinearMap { rows: vec![partial_sum(n, i)] }
    }

    /// Rows x1 + ... + xi for i = 1..n-1.
    pub fn psi_all(n: usize) -> Self {
        LinearMap { rows: (1..n).map(|i| partial_sum(n, i)).collect() }
    }

    /// (x, -x): its mu gives the lower exponents and minus the upper ones.
    pub fn phi(n: usize) -> Self {
        let mut rows = Self::identity(n).rows;
        rows.extend(Self::identity(n).rows.into_iter().map(|r| r.into_iter().map(|x| -x).collect()));
        LinearMap { rows }
    }

    pub fn cols(&self) -> usize {
        self.rows[0].len()
    }

    pub fn apply(&self, x: &Point) -> Result<Point> {
        x.check_dim(self.cols())?;
        Ok(Point(self.rows.iter().map(|r| r.iter().zip(x.iter()).map(|(a, b)| a * b).sum()).collect()))
    }
}

fn partial_sum(n: usize, i: usize) -> Vec<Rational> {
    (0..n).map(|j| if j < i { Rational::one() } else { Rational::zero() }).collect()
}

/// Vertices of F(P) (exact) or of a window of ratios (approximate).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FSet {
    pub vertices: Vec<Point>,
    pub exact: bool,
}

/// Ratios q^-1 P(q) at one period of division numbers, or at the division numbers of `window`.
pub fn f_set(s: &NSystem, window: Option<(&Rational, &Rational)>) -> Result<FSet> {
    let (pts, exact) = match window {
        Some((u, v)) => {
            let r = s.restrict(u, v)?;
            (r.division_data(), false)
        }
        None if s.is_self_similar() => (s.period_division_points()?, true),
        None => return Err(Error::Precondition("F-set needs a self-similar system or a window".into())),
    };
    let mut vertices: Vec<Point> = Vec::new();
    for d in pts {
        if d.q.is_zero() {
            continue;
        }
        let r = d.value.scale(&d.q.recip()?);
        if !vertices.contains(&r) {
            vertices.push(r);
        }
    }
    if vertices.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(FSet { vertices, exact })
}

/// Componentwise infimum of T over the vertices of `f`.
pub fn mu_t(t: &LinearMap, f: &FSet) -> Result<Point> {
    let imgs = f.vertices.iter().map(|v| t.apply(v)).collect::<Result<Vec<_>>>()?;
    Ok(comp_inf_sup(&imgs)?.0)
}

pub fn six_exponents(s: &NSystem) -> Result<SpectrumPoint6> {
    if s.n != 3 {
        return Err(Error::Dimension { expected: 3, found: s.n });
    }
    if !s.is_self_similar() {
        return Err(Error::NotSelfSimilar);
    }
    if !s.is_proper() {
        return Err(Error::NotProper);
    }
    exponents_of_vertices(&f_set(s, None)?.vertices)
}

/// Lower and upper exponents of a vertex set in the plane x1+x2+x3=1.
pub fn exponents_of_vertices(v: &[Point]) -> Result<SpectrumPoint6> {
    let (lower, upper) = comp_inf_sup(v)?;
    SpectrumPoint6::new(lower, upper)
}
