//! Canvases and pre-canvases, and their compilation into n-systems.

use serde::{Deserialize, Serialize};

use crate::arith::{Point, Rational};
use crate::error::{Error, Result};
use crate::nsystem::{Event, NSystem, SelfSimilar};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Periodic {
    pub prefix_len: usize,
    pub rho: Rational,
}

/// A finite or eventually periodic canvas. For periodic canvases the period is
/// `points[prefix_len..]` and the last listed point must equal `rho * points[prefix_len]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Canvas {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mesh: Option<Rational>,
    pub points: Vec<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub periodic: Option<Periodic>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub condition: String,
    pub index: usize,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    /// 1-based pairs (k_i, l_{i+1}) for consecutive points.
    pub transitions: Vec<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<Failure>,
}

impl ValidationReport {
    fn fail(transitions: Vec<(usize, usize)>, condition: &str, index: usize, detail: String) -> Self {
        ValidationReport {
            ok: false,
            transitions,
            failure: Some(Failure { condition: condition.into(), index, detail }),
        }
    }

    pub fn into_result(self) -> Result<Vec<(usize, usize)>> {
        match self.failure {
            None => Ok(self.transitions),
            Some(f) => Err(Error::Condition { condition: f.condition, index: f.index, detail: f.detail }),
        }
    }
}

/// The unique pair (k, l), 1-based, with `a` minus coordinate k equal to `b` minus coordinate l
/// and `a_k < b_l`; both points strictly increasing.
pub fn transition(a: &Point, b: &Point) -> Option<(usize, usize)> {
    let n = a.dim();
    if b.dim() != n {
        return None;
    }
    for k in 0..n {
        // b must equal a without a_k plus one extra value
        let rest: Vec<&Rational> = a.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, x)| x).collect();
        let mut i = 0;
        let mut extra = None;
        let mut ok = true;
        for (j, y) in b.iter().enumerate() {
            if i < rest.len() && rest[i] == y {
                i += 1;
            } else if extra.is_none() {
                extra = Some(j);
            } else {
                ok = false;
                break;
            }
        }
        if ok && i == rest.len() {
            if let Some(l) = extra {
                if a[k] < b[l] {
                    return Some((k + 1, l + 1));
                }
            }
        }
    }
    None
}

impl Canvas {
    pub fn finite(points: Vec<Point>) -> Self {
        let n = points.first().map_or(0, Point::dim);
        Canvas { n, mesh: None, points, periodic: None }
    }

    pub fn periodic(points: Vec<Point>, prefix_len: usize, rho: Rational) -> Self {
        let n = points.first().map_or(0, Point::dim);
        Canvas { n, mesh: None, points, periodic: Some(Periodic { prefix_len, rho }) }
    }

    pub fn with_mesh(mut self, mesh: Rational) -> Self {
        self.mesh = Some(mesh);
        self
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Canvas::finite(rows.iter().map(|r| Point::ints(r)).collect())
    }

    /// Checks (C1)-(C3); `strict` demands k_i < l_i at interior points.
    pub fn validate(&self, strict: bool) -> ValidationReport {
        let mut tr = Vec::new();
        if self.n < 2 {
            return ValidationReport::fail(tr, "shape", 0, format!("dimension {} < 2", self.n));
        }
        if self.points.len() < 2 {
            return ValidationReport::fail(tr, "shape", 0, "fewer than two points".into());
        }
        for (i, p) in self.points.iter().enumerate() {
            if p.dim() != self.n {
                return ValidationReport::fail(tr, "shape", i + 1, format!("point has {} coordinates, expected {}", p.dim(), self.n));
            }
            if !p[0].is_positive() || !p.is_strictly_increasing() {
                return ValidationReport::fail(tr, "C1", i + 1, format!("{p} is not strictly increasing and positive"));
            }
            if let Some(d) = &self.mesh {
                if !d.is_positive() {
                    return ValidationReport::fail(tr, "mesh", 0, format!("mesh {d} is not positive"));
                }
                if !p.iter().all(|x| x.is_multiple_of(d)) {
                    return ValidationReport::fail(tr, "mesh", i + 1, format!("{p} not in {d}Z^n"));
                }
            }
        }
        for i in 0..self.points.len() - 1 {
            match transition(&self.points[i], &self.points[i + 1]) {
                Some(t) => tr.push(t),
                None => {
                    return ValidationReport::fail(
                        tr,
                        "C2",
                        i + 1,
                        format!("{} -> {} is not a single coordinate increase", self.points[i], self.points[i + 1]),
                    )
                }
            }
        }
        for i in 1..tr.len() {
            let (k, l) = (tr[i].0, tr[i - 1].1);
            if k > l || (strict && k == l) {
                let cond = if k > l { "C3" } else { "C3-strict" };
                return ValidationReport::fail(tr, cond, i + 1, format!("k={k}, l={l}"));
            }
        }
        if let Some(per) = &self.periodic {
            let s = self.points.len();
            if per.prefix_len + 2 > s {
                return ValidationReport::fail(tr, "periodic", per.prefix_len, "period needs at least two listed points".into());
            }
            if per.rho <= Rational::one() {
                return ValidationReport::fail(tr, "periodic", 0, format!("ratio {} must exceed 1", per.rho));
            }
            let start = &self.points[per.prefix_len];
            if self.points[s - 1] != start.scale(&per.rho) {
                return ValidationReport::fail(
                    tr,
                    "periodic",
                    s,
                    format!("last point {} is not {} times {}", self.points[s - 1], per.rho, start),
                );
            }
            let k = tr[per.prefix_len].0;
            let l = tr[s - 2].1;
            if k > l || (strict && k == l) {
                return ValidationReport::fail(tr, "periodic-gluing", s, format!("k={k}, l={l}"));
            }
        }
        ValidationReport { ok: true, transitions: tr, failure: None }
    }

    pub fn switch_numbers(&self) -> Vec<Rational> {
        self.points.iter().map(Point::sum).collect()
    }

    /// Drops interior points with k_i = l_i.
    pub fn reduce(&self) -> Result<Canvas> {
        let tr = self.validate(false).into_result()?;
        let s = self.points.len();
        let per = self.periodic.as_ref();
        let start = per.map(|p| p.prefix_len);
        let mut keep = Vec::with_capacity(s);
        let mut new_prefix = per.map(|p| p.prefix_len);
        for i in 0..s {
            let interior = i > 0 && i + 1 < s;
            let drop = interior && tr[i].0 == tr[i - 1].1 && Some(i) != start;
            if drop {
                if let Some(np) = new_prefix.as_mut() {
                    if i < per.unwrap().prefix_len {
                        *np -= 1;
                    }
                }
            } else {
                keep.push(self.points[i].clone());
            }
        }
        Ok(Canvas {
            n: self.n,
            mesh: self.mesh.clone(),
            points: keep,
            periodic: per.map(|p| Periodic { prefix_len: new_prefix.unwrap(), rho: p.rho.clone() }),
        })
    }

    /// Compiles the canvas into its n-system; periodic canvases give self-similar systems.
    pub fn build_system(&self) -> Result<NSystem> {
        let tr = match self.validate(false).into_result() {
            Ok(t) => t,
            Err(Error::Condition { condition, detail, .. }) if condition.starts_with("periodic") => {
                return Err(Error::NotClosable(detail))
            }
            Err(e) => return Err(e),
        };
        let qs = self.switch_numbers();
        let s = self.points.len();
        let mut events = Vec::new();
        for i in 0..s {
            let left = if i > 0 { Some(tr[i - 1].1) } else { None };
            let right = if i + 1 < s {
                Some(tr[i].0)
            } else {
                self.periodic.as_ref().map(|p| tr[p.prefix_len].0)
            };
            let is_period_start = self.periodic.as_ref().is_some_and(|p| p.prefix_len == i);
            let interior = i > 0 && i + 1 < s;
            if !(interior && left == right && !is_period_start) {
                events.push(Event { q: qs[i].clone(), value: self.points[i].clone(), left_rise: left, right_rise: right });
            }
            if i + 1 < s {
                let (k, l) = tr[i];
                let a = &self.points[i];
                let target = &self.points[i + 1][l - 1];
                let riser = &a[k - 1];
                let mut pos = k;
                for j in k..self.n {
                    let c = &a[j];
                    if c >= target {
                        break;
                    }
                    let mut v: Vec<Rational> = a.iter().enumerate().filter(|&(t, _)| t != k - 1).map(|(_, x)| x.clone()).collect();
                    v.insert(pos - 1, c.clone());
                    events.push(Event {
                        q: &qs[i] + (c - riser),
                        value: Point(v),
                        left_rise: Some(pos),
                        right_rise: Some(pos + 1),
                    });
                    pos += 1;
                }
                debug_assert_eq!(pos, l);
            }
        }
        let lo = qs[0].clone();
        let (hi, ss) = match &self.periodic {
            None => (Some(qs[s - 1].clone()), None),
            Some(p) => (None, Some(SelfSimilar { rho: p.rho.clone(), period_start: qs[p.prefix_len].clone() })),
        };
        NSystem::from_parts(self.n, lo, hi, events, ss, self.mesh.clone())
    }

    /// The worked 3-canvas with nine points used throughout the tests.
    pub fn nine_point() -> Canvas {
        Canvas::from_ints(&[
            &[1, 2, 4],
            &[2, 4, 5],
            &[2, 5, 6],
            &[2, 6, 8],
            &[2, 8, 17],
            &[2, 10, 17],
            &[10, 13, 17],
            &[13, 14, 17],
            &[14, 17, 18],
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;


    #[test]
    fn nine_point_transitions() {
        let r = Canvas::nine_point().validate(true);
        assert!(r.ok);
        assert_eq!(r.transitions, vec![(1, 3), (2, 3), (2, 3), (2, 3), (2, 2), (1, 2), (1, 2), (1, 3)]);
        let sw: Vec<_> = Canvas::nine_point().switch_numbers().iter().map(|x| x.to_string()).collect();
        assert_eq!(sw, ["7", "11", "13", "16", "27", "29", "40", "44", "49"]);
    }

    #[test]
    fn small_canvases() {
        let c = Canvas::from_ints(&[&[1, 2, 4], &[2, 4, 8]]);
        assert_eq!(c.validate(true).transitions, vec![(1, 3)]);
        let r = Canvas::from_ints(&[&[1, 2, 4], &[1, 2, 4]]).validate(false);
        assert_eq!(r.failure.unwrap().condition, "C2");
        let c = Canvas::from_ints(&[&[1, 3, 9, 12], &[1, 3, 12, 15], &[1, 6, 12, 15], &[6, 9, 12, 15]]);
        let sw: Vec<_> = c.switch_numbers().iter().map(|x| x.to_string()).collect();
        assert_eq!(sw, ["25", "31", "34", "42"]);
    }

    #[test]
    fn shape_and_c1_failures() {
        let mut c = Canvas::from_ints(&[&[1, 2, 4], &[2, 4, 8]]);
        c.n = 4;
        assert_eq!(c.validate(true).failure.unwrap().condition, "shape");
        let c = Canvas::from_ints(&[&[1, 1, 4], &[1, 4, 8]]);
        assert_eq!(c.validate(true).failure.unwrap().condition, "C1");
        let c = Canvas::from_ints(&[&[0, 1, 4], &[1, 4, 8]]);
        assert_eq!(c.validate(true).failure.unwrap().condition, "C1");
        let c = Canvas::from_ints(&[&[1, 2, 4], &[2, 4, 8]]).with_mesh(q(3, 2));
        assert_eq!(c.validate(true).failure.unwrap().condition, "mesh");
    }

    #[test]
    fn precanvas_vs_canvas() {
        // (1,2,4) -> (2,4,5) is (1,3); (2,4,5) -> (3,4,5) is (1,1)
        let c = Canvas::from_ints(&[&[1, 2, 4], &[2, 4, 5], &[4, 5, 6], &[5, 6, 7]]);
        assert_eq!(c.validate(false).transitions, vec![(1, 3), (1, 3), (1, 3)]);
        // (1,3,4) has l = k = 2 and is not a switch point
        let c = Canvas::from_ints(&[&[1, 2, 4], &[1, 3, 4], &[1, 4, 5]]);
        let r = c.validate(false);
        assert!(r.ok);
        assert_eq!(r.transitions, vec![(2, 2), (2, 3)]);
        assert_eq!(c.validate(true).failure.unwrap().condition, "C3-strict");
        let reduced = c.reduce().unwrap();
        assert_eq!(reduced.points, vec![Point::ints(&[1, 2, 4]), Point::ints(&[1, 4, 5])]);
        assert_eq!(reduced.build_system().unwrap(), c.build_system().unwrap());
        assert!(reduced.validate(true).ok);
    }

    #[test]
    fn periodic_checks() {
        let c = Canvas::periodic(vec![Point::ints(&[1, 2, 4]), Point::ints(&[2, 4, 8])], 0, Rational::int(2));
        assert!(c.validate(true).ok);
        let c = Canvas::periodic(vec![Point::ints(&[1, 2, 4]), Point::ints(&[2, 4, 8])], 0, Rational::int(3));
        assert_eq!(c.validate(true).failure.unwrap().condition, "periodic");
        assert!(matches!(c.build_system(), Err(Error::NotClosable(_))));
    }
}
