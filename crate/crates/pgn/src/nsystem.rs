//! n-systems stored as ordered division events.

use serde::{Deserialize, Serialize};

use crate::arith::{Interval, Point, Rational};
use crate::canvas::{Canvas, Failure, Periodic};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    pub q: Rational,
    pub value: Point,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right_rise: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left_rise: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfSimilar {
    pub rho: Rational,
    pub period_start: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    Switch,
    Division,
    Boundary,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisionPoint {
    pub q: Rational,
    pub value: Point,
    pub kind: EventKind,
}

/// Piecewise-linear map P : I -> R^n with sorted coordinates summing to q.
///
/// Self-similar systems keep events on `[domain.lo, rho * period_start]`; the last event
/// repeats the period start scaled by rho.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "SystemJson", try_from = "SystemJson")]
pub struct NSystem {
    pub n: usize,
    pub domain: Interval,
    pub events: Vec<Event>,
    pub selfsimilar: Option<SelfSimilar>,
    pub mesh: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SystemReport {
    pub valid: bool,
    pub violations: Vec<Failure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub proper: Option<bool>,
}

#[derive(Serialize, Deserialize)]
struct SelfSimilarJson {
    rho: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    period_start: Option<Rational>,
}

#[derive(Serialize, Deserialize)]
struct SystemJson {
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mesh: Option<Rational>,
    domain: (Rational, Option<Rational>),
    events: Vec<Event>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    selfsimilar: Option<SelfSimilarJson>,
}

impl From<NSystem> for SystemJson {
    fn from(s: NSystem) -> Self {
        let lo = s.domain.lo.clone();
        SystemJson {
            n: s.n,
            mesh: s.mesh,
            domain: (s.domain.lo, s.domain.hi),
            events: s.events,
            selfsimilar: s.selfsimilar.map(|ss| SelfSimilarJson {
                period_start: if ss.period_start == lo { None } else { Some(ss.period_start) },
                rho: ss.rho,
            }),
        }
    }
}

impl TryFrom<SystemJson> for NSystem {
    type Error = Error;
    fn try_from(j: SystemJson) -> Result<Self> {
        let domain = Interval::new(j.domain.0.clone(), j.domain.1)?;
        Ok(NSystem {
            n: j.n,
            selfsimilar: j.selfsimilar.map(|s| SelfSimilar {
                rho: s.rho,
                period_start: s.period_start.unwrap_or_else(|| j.domain.0.clone()),
            }),
            domain,
            events: j.events,
            mesh: j.mesh,
        })
    }
}

fn viol(out: &mut Vec<Failure>, condition: &str, index: usize, detail: String) {
    out.push(Failure { condition: condition.into(), index, detail });
}

impl NSystem {
    /// Assembles a system and rejects it unless it validates.
    pub fn from_parts(
        n: usize,
        lo: Rational,
        hi: Option<Rational>,
        events: Vec<Event>,
        selfsimilar: Option<SelfSimilar>,
        mesh: Option<Rational>,
    ) -> Result<NSystem> {
        let s = NSystem { n, domain: Interval::new(lo, hi)?, events, selfsimilar, mesh };
        s.ensure_valid()?;
        Ok(s)
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let r = self.validate();
        match r.violations.into_iter().next() {
            None => Ok(()),
            Some(f) => Err(Error::Condition { condition: f.condition, index: f.index, detail: f.detail }),
        }
    }

    pub fn is_self_similar(&self) -> bool {
        self.selfsimilar.is_some()
    }

    pub fn rho(&self) -> Option<&Rational> {
        self.selfsimilar.as_ref().map(|s| &s.rho)
    }

    fn period_start_index(&self) -> Option<usize> {
        let ps = &self.selfsimilar.as_ref()?.period_start;
        self.events.iter().position(|e| &e.q == ps)
    }

    /// Checks (S1)-(S3), event consistency, self-similar closure and mesh alignment.
    pub fn validate(&self) -> SystemReport {
        let mut v = Vec::new();
        let n = self.n;
        let ev = &self.events;
        if n < 2 {
            viol(&mut v, "shape", 0, format!("dimension {n} < 2"));
            return SystemReport { valid: false, violations: v, proper: None };
        }
        if ev.is_empty() {
            viol(&mut v, "shape", 0, "no events".into());
            return SystemReport { valid: false, violations: v, proper: None };
        }
        for (i, e) in ev.iter().enumerate() {
            if e.value.dim() != n {
                viol(&mut v, "shape", i, format!("value has {} coordinates, expected {n}", e.value.dim()));
                return SystemReport { valid: false, violations: v, proper: None };
            }
            for r in [e.left_rise, e.right_rise].into_iter().flatten() {
                if r == 0 || r > n {
                    viol(&mut v, "shape", i, format!("rise index {r} outside 1..={n}"));
                    return SystemReport { valid: false, violations: v, proper: None };
                }
            }
        }
        if ev[0].q != self.domain.lo {
            viol(&mut v, "domain", 0, format!("first event {} differs from domain start {}", ev[0].q, self.domain.lo));
        }
        match (&self.domain.hi, &self.selfsimilar) {
            (Some(h), None) => {
                if &ev[ev.len() - 1].q != h {
                    viol(&mut v, "domain", ev.len() - 1, format!("last event differs from domain end {h}"));
                }
                if ev[ev.len() - 1].right_rise.is_some() {
                    viol(&mut v, "domain", ev.len() - 1, "right rise at domain end".into());
                }
            }
            (None, Some(_)) => {}
            (Some(_), Some(_)) => viol(&mut v, "selfsimilar", 0, "self-similar system with bounded domain".into()),
            (None, None) => viol(&mut v, "domain", 0, "unbounded domain without self-similar tag".into()),
        }
        if ev[0].left_rise.is_some() {
            viol(&mut v, "domain", 0, "left rise at domain start".into());
        }
        for (i, e) in ev.iter().enumerate() {
            if e.value[0].is_negative() || !e.value.is_nondecreasing() {
                viol(&mut v, "S1", i, format!("value {} not sorted and nonnegative", e.value));
            }
            if e.value.sum() != e.q {
                viol(&mut v, "S1", i, format!("coordinates of {} do not sum to {}", e.value, e.q));
            }
        }
        for i in 0..ev.len().saturating_sub(1) {
            let (a, b) = (&ev[i], &ev[i + 1]);
            if a.q >= b.q {
                viol(&mut v, "order", i + 1, format!("event abscissa {} not after {}", b.q, a.q));
                continue;
            }
            let r = match (a.right_rise, b.left_rise) {
                (Some(r), Some(l)) if r == l => r,
                _ => {
                    viol(&mut v, "S2", i, format!("rise indices disagree between {} and {}", a.q, b.q));
                    continue;
                }
            };
            let mut expect = a.value.clone();
            expect[r - 1] = &expect[r - 1] + (&b.q - &a.q);
            if expect != b.value {
                viol(&mut v, "S2", i, format!("{} -> {} is not a unit-slope rise of component {r}", a.value, b.value));
            }
        }
        for (i, e) in ev.iter().enumerate() {
            if let (Some(l), Some(k)) = (e.left_rise, e.right_rise) {
                if k > l && !(l..k).all(|j| e.value[j - 1] == e.value[j]) {
                    viol(&mut v, "S3", i, format!("k={k} > l={l} but {} has distinct coordinates", e.value));
                }
            }
        }
        let mut proper = None;
        if let Some(ss) = &self.selfsimilar {
            if ss.rho <= Rational::one() {
                viol(&mut v, "selfsimilar", 0, format!("ratio {} must exceed 1", ss.rho));
            }
            match self.period_start_index() {
                None => viol(&mut v, "selfsimilar", 0, format!("period start {} is not an event", ss.period_start)),
                Some(p) => {
                    let last = &ev[ev.len() - 1];
                    let start = &ev[p];
                    if p + 1 >= ev.len() {
                        viol(&mut v, "selfsimilar", p, "empty period".into());
                    } else {
                        if last.q != &start.q * &ss.rho || last.value != start.value.scale(&ss.rho) {
                            viol(&mut v, "selfsimilar", ev.len() - 1, "closing event is not rho times the period start".into());
                        }
                        if last.right_rise != start.right_rise {
                            viol(&mut v, "selfsimilar", ev.len() - 1, "closing event right rise differs from period start".into());
                        }
                        if let (Some(k), Some(l)) = (start.right_rise, last.left_rise) {
                            if k > l {
                                viol(&mut v, "gluing", ev.len() - 1, format!("k={k} > l={l} at the period seam"));
                            }
                        }
                        if p > 0 && start.left_rise != last.left_rise {
                            viol(&mut v, "selfsimilar", p, "period start left rise differs from closing event".into());
                        }
                    }
                    proper = Some(start.value[0].is_positive());
                }
            }
        }
        if let Some(d) = &self.mesh {
            if !d.is_positive() {
                viol(&mut v, "mesh", 0, format!("mesh {d} is not positive"));
            } else if v.is_empty() {
                for (i, e) in ev.iter().enumerate() {
                    let sw = matches!(self.kind_at(i), Some(EventKind::Switch | EventKind::Boundary));
                    if sw && !e.value.iter().all(|x| x.is_multiple_of(d)) {
                        viol(&mut v, "mesh", i, format!("switch point {} not in {d}Z^n", e.value));
                    }
                }
            }
        }
        SystemReport { valid: v.is_empty(), violations: v, proper }
    }

    /// Left rise of event `i` in the periodic extension.
    fn periodic_left(&self, i: usize) -> Option<usize> {
        if Some(i) == self.period_start_index() && i == 0 {
            return self.events.last().and_then(|e| e.left_rise);
        }
        self.events[i].left_rise
    }

    /// Classification of event `i`, `None` when the derivative does not change there.
    pub fn kind_at(&self, i: usize) -> Option<EventKind> {
        let e = &self.events[i];
        let last = i + 1 == self.events.len();
        if i == 0 && !(self.is_self_similar() && self.period_start_index() == Some(0)) {
            return Some(EventKind::Boundary);
        }
        if last && !self.is_self_similar() {
            return Some(EventKind::Boundary);
        }
        let l = if i == 0 { self.periodic_left(0) } else { e.left_rise };
        match (e.right_rise, l) {
            (Some(k), Some(l)) if k < l => Some(EventKind::Switch),
            (Some(k), Some(l)) if k > l => Some(EventKind::Division),
            (Some(_), Some(_)) => None,
            _ => Some(EventKind::Boundary),
        }
    }

    /// Division events with their kinds; one fundamental period for self-similar systems.
    pub fn division_data(&self) -> Vec<DivisionPoint> {
        let end = if self.is_self_similar() { self.events.len() - 1 } else { self.events.len() };
        (0..end)
            .filter_map(|i| {
                let kind = if i == 0 { self.kind_at(0).unwrap_or(EventKind::Boundary) } else { self.kind_at(i)? };
                Some(DivisionPoint { q: self.events[i].q.clone(), value: self.events[i].value.clone(), kind })
            })
            .collect()
    }

    /// Division points of the periodic regime inside one period `[w, rho w)`.
    pub fn period_division_points(&self) -> Result<Vec<DivisionPoint>> {
        let p = self.period_start_index().ok_or(Error::NotSelfSimilar)?;
        let last = self.events.len() - 1;
        let mut out = Vec::new();
        for i in p..last {
            let e = &self.events[i];
            let l = if i == p { self.events[last].left_rise } else { e.left_rise };
            let kind = match (e.right_rise, l) {
                (Some(k), Some(l)) if k < l => EventKind::Switch,
                (Some(k), Some(l)) if k > l => EventKind::Division,
                _ => continue,
            };
            out.push(DivisionPoint { q: e.q.clone(), value: e.value.clone(), kind });
        }
        Ok(out)
    }

    fn reduce_q(&self, q: &Rational) -> Result<(Rational, Rational)> {
        if *q < self.domain.lo {
            return Err(Error::Domain(format!("{q} is below the domain start {}", self.domain.lo)));
        }
        let mut factor = Rational::one();
        let mut x = q.clone();
        match (&self.selfsimilar, &self.domain.hi) {
            (Some(ss), _) => {
                let end = &self.events[self.events.len() - 1].q;
                while &x > end {
                    x = &x / &ss.rho;
                    factor = &factor * &ss.rho;
                }
            }
            (None, Some(h)) => {
                if q > h {
                    return Err(Error::Domain(format!("{q} is beyond the domain end {h}")));
                }
            }
            (None, None) => return Err(Error::Domain("unbounded domain without self-similar tag".into())),
        }
        Ok((x, factor))
    }

    /// P(q), exact.
    pub fn eval(&self, q: &Rational) -> Result<Point> {
        let (x, factor) = self.reduce_q(q)?;
        let ev = &self.events;
        let idx = ev.partition_point(|e| e.q <= x);
        if idx == 0 {
            return Err(Error::Domain(format!("{q} is outside the domain")));
        }
        let e = &ev[idx - 1];
        let mut v = e.value.clone();
        if e.q != x {
            let r = e.right_rise.ok_or_else(|| Error::Domain(format!("{q} is outside the domain")))?;
            v[r - 1] = &v[r - 1] + (&x - &e.q);
        }
        Ok(if factor == Rational::one() { v } else { v.scale(&factor) })
    }

    /// Left and right rise indices at `q` (either may be `None` at the domain ends).
    pub fn rises_at(&self, q: &Rational) -> Result<(Option<usize>, Option<usize>)> {
        let (x, _) = self.reduce_q(q)?;
        let ev = &self.events;
        let idx = ev.partition_point(|e| e.q <= x);
        let e = &ev[idx - 1];
        if e.q == x {
            let mut left = e.left_rise;
            let last = idx == ev.len();
            if self.is_self_similar() && *q > self.domain.lo && Some(idx - 1) == self.period_start_index() {
                left = ev[ev.len() - 1].left_rise;
            }
            let right = if last && self.is_self_similar() { ev[self.period_start_index().unwrap()].right_rise } else { e.right_rise };
            Ok((left, right))
        } else {
            Ok((e.right_rise, e.right_rise))
        }
    }

    /// Stored events followed, for self-similar systems, by their scaled copies up to `qmax`.
    pub fn events_upto(&self, qmax: &Rational) -> Vec<Event> {
        let mut out: Vec<Event> = Vec::new();
        let Some(ss) = &self.selfsimilar else {
            return self.events.iter().filter(|e| &e.q <= qmax).cloned().collect();
        };
        let p = self.period_start_index().expect("valid self-similar system");
        let last = self.events.len() - 1;
        out.extend(self.events[..p].iter().filter(|e| &e.q <= qmax).cloned());
        let mut factor = Rational::one();
        'outer: loop {
            for i in p..last {
                let e = &self.events[i];
                let q = &e.q * &factor;
                if &q > qmax {
                    break 'outer;
                }
                let mut left = e.left_rise;
                if i == p && (factor != Rational::one() || p > 0) {
                    left = self.events[last].left_rise;
                }
                out.push(Event { q, value: e.value.scale(&factor), right_rise: e.right_rise, left_rise: left });
            }
            factor = &factor * &ss.rho;
        }
        out
    }

    /// Division points in `[a, b]` (both ends included as boundary points).
    pub fn division_points_between(&self, a: &Rational, b: &Rational) -> Result<Vec<DivisionPoint>> {
        let r = self.restrict(a, b)?;
        Ok(r.division_data())
    }

    /// Restriction to `[a, b]` as a finite system.
    pub fn restrict(&self, a: &Rational, b: &Rational) -> Result<NSystem> {
        if a > b {
            return Err(Error::Domain(format!("[{a},{b}] is reversed")));
        }
        let va = self.eval(a)?;
        let vb = self.eval(b)?;
        let (_, ra) = self.rises_at(a)?;
        let (lb, _) = self.rises_at(b)?;
        let mut events = vec![Event { q: a.clone(), value: va, right_rise: if a == b { None } else { ra }, left_rise: None }];
        if a != b {
            for e in self.events_upto(b) {
                if &e.q > a && &e.q < b && e.left_rise != e.right_rise {
                    events.push(e);
                }
            }
            events.push(Event { q: b.clone(), value: vb, right_rise: None, left_rise: lb });
        }
        NSystem::from_parts(self.n, a.clone(), Some(b.clone()), events, None, self.mesh.clone())
    }

    pub fn rescale(&self, rho: &Rational) -> Result<NSystem> {
        if !rho.is_positive() {
            return Err(Error::Domain(format!("rescaling ratio {rho} must be positive")));
        }
        let events = self
            .events
            .iter()
            .map(|e| Event { q: &e.q * rho, value: e.value.scale(rho), right_rise: e.right_rise, left_rise: e.left_rise })
            .collect();
        NSystem::from_parts(
            self.n,
            &self.domain.lo * rho,
            self.domain.hi.as_ref().map(|h| h * rho),
            events,
            self.selfsimilar.as_ref().map(|s| SelfSimilar { rho: s.rho.clone(), period_start: &s.period_start * rho }),
            self.mesh.as_ref().map(|d| d * rho),
        )
    }

    /// Concatenates `self` on [u,v] with `r` on [v,w] (r may be self-similar).
    pub fn glue(&self, r: &NSystem) -> Result<NSystem> {
        if self.n != r.n {
            return Err(Error::Dimension { expected: self.n, found: r.n });
        }
        let v = self.domain.hi.clone().ok_or_else(|| Error::Domain("left system must have a bounded domain".into()))?;
        if v != r.domain.lo {
            return Err(Error::ValueMismatch(format!("domains meet at {v} and {}", r.domain.lo)));
        }
        let pv = self.eval(&v)?;
        let rv = r.eval(&v)?;
        if pv != rv {
            return Err(Error::ValueMismatch(format!("P(v)={pv}, R(v)={rv}")));
        }
        let l = self.events[self.events.len() - 1].left_rise;
        let k = r.events[0].right_rise;
        let (Some(l), Some(k)) = (l, k) else {
            return Err(Error::Domain("degenerate one-point domain".into()));
        };
        if k > l {
            return Err(Error::SlopeCondition { k, l });
        }
        let mut events: Vec<Event> = self.events[..self.events.len() - 1].to_vec();
        let keep_joint = k != l || r.selfsimilar.as_ref().is_some_and(|s| s.period_start == v);
        if keep_joint {
            events.push(Event { q: v.clone(), value: pv, right_rise: Some(k), left_rise: Some(l) });
        }
        events.extend(r.events[1..].iter().cloned());
        let mesh = if self.mesh == r.mesh { self.mesh.clone() } else { None };
        NSystem::from_parts(self.n, self.domain.lo.clone(), r.domain.hi.clone(), events, r.selfsimilar.clone(), mesh)
    }

    /// Self-similar extension with ratio v/u of a system on [u,v].
    pub fn selfsim_extend(&self) -> Result<NSystem> {
        self.selfsim_extend_checked(None)
    }

    pub fn selfsim_extend_checked(&self, claimed_rho: Option<&Rational>) -> Result<NSystem> {
        if self.is_self_similar() {
            return Err(Error::Domain("system is already self-similar".into()));
        }
        let u = self.domain.lo.clone();
        let v = self.domain.hi.clone().expect("finite system");
        if !u.is_positive() || u == v {
            return Err(Error::NotProportional("domain start must be positive and the domain nondegenerate".into()));
        }
        let rho = &v / &u;
        if let Some(c) = claimed_rho {
            if *c != rho {
                return Err(Error::RatioMismatch { claimed: c.to_string(), actual: rho.to_string() });
            }
        }
        let pu = &self.events[0].value;
        let pv = &self.events[self.events.len() - 1].value;
        if *pv != pu.scale(&rho) {
            return Err(Error::NotProportional(format!("{pv} is not {rho} times {pu}")));
        }
        let k = self.events[0].right_rise.expect("nondegenerate");
        let l = self.events[self.events.len() - 1].left_rise.expect("nondegenerate");
        if k > l {
            return Err(Error::SlopeCondition { k, l });
        }
        let mut events = self.events.clone();
        let last = events.len() - 1;
        events[last].right_rise = Some(k);
        NSystem::from_parts(self.n, u.clone(), None, events, Some(SelfSimilar { rho, period_start: u }), self.mesh.clone())
    }

    /// Properness; finite systems are never proper.
    pub fn is_proper(&self) -> bool {
        match self.period_start_index() {
            Some(p) => self.events[p].value[0].is_positive(),
            None => false,
        }
    }

    /// True when every switch point has n distinct positive coordinates.
    pub fn is_nondegenerate(&self) -> bool {
        (0..self.events.len()).all(|i| match self.kind_at(i) {
            Some(EventKind::Switch | EventKind::Boundary) => {
                let v = &self.events[i].value;
                v[0].is_positive() && v.is_strictly_increasing()
            }
            _ => true,
        })
    }

    /// Mesh if present, else the largest delta with all switch points in delta Z^n.
    pub fn effective_mesh(&self) -> Option<Rational> {
        if self.mesh.is_some() {
            return self.mesh.clone();
        }
        let mut vals = Vec::new();
        for i in 0..self.events.len() {
            if matches!(self.kind_at(i), Some(EventKind::Switch | EventKind::Boundary)) {
                vals.extend(self.events[i].value.iter().cloned());
            }
        }
        Rational::gcd_all(vals.iter())
    }

    /// The canvas of switch points: finite for compact domains, periodic for self-similar systems.
    pub fn canvas(&self) -> Result<Canvas> {
        if !self.is_nondegenerate() {
            return Err(Error::Domain("degenerate system has no canvas".into()));
        }
        let mut points = Vec::new();
        let mut prefix_len = 0;
        let ps = self.period_start_index();
        for i in 0..self.events.len() {
            let keep = Some(i) == ps || matches!(self.kind_at(i), Some(EventKind::Switch | EventKind::Boundary));
            if keep {
                if Some(i) == ps {
                    prefix_len = points.len();
                }
                points.push(self.events[i].value.clone());
            }
        }
        if let Some(last) = self.events.last() {
            if points.last() != Some(&last.value) {
                points.push(last.value.clone());
            }
        }
        Ok(Canvas {
            n: self.n,
            mesh: self.mesh.clone(),
            points,
            periodic: self.selfsimilar.as_ref().map(|s| Periodic { prefix_len, rho: s.rho.clone() }),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    fn nine_point() -> NSystem {
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
        .build_system()
        .unwrap()
    }

    fn ss124() -> NSystem {
        Canvas::periodic(vec![Point::ints(&[1, 2, 4]), Point::ints(&[2, 4, 8])], 0, Rational::int(2))
            .build_system()
            .unwrap()
    }

    #[test]
    fn nine_point_eval() {
        let s = nine_point();
        assert_eq!(s.eval(&Rational::int(7)).unwrap(), Point::ints(&[1, 2, 4]));
        assert_eq!(s.eval(&Rational::int(9)).unwrap(), Point::ints(&[2, 3, 4]));
        assert_eq!(s.eval(&Rational::int(49)).unwrap(), Point::ints(&[14, 17, 18]));
        assert!(s.eval(&Rational::int(50)).is_err());
        assert!(s.eval(&Rational::int(6)).is_err());
        assert!(s.validate().valid);
    }

    #[test]
    fn nine_point_division_numbers() {
        let s = nine_point();
        let dd = s.division_data();
        let sw: Vec<String> =
            dd.iter().filter(|d| d.kind != EventKind::Division).map(|d| d.q.to_string()).collect();
        assert_eq!(sw, ["7", "11", "13", "16", "27", "29", "40", "44", "49"]);
        let first: Vec<String> = dd.iter().take_while(|d| d.q <= 11).map(|d| d.q.to_string()).collect();
        assert_eq!(first, ["7", "8", "10", "11"]);
    }

    #[test]
    fn selfsimilar_period() {
        let s = ss124();
        assert_eq!(s.eval(&Rational::int(28)).unwrap(), Point::ints(&[4, 8, 16]));
        assert_eq!(s.eval(&q(63, 1)).unwrap(), s.eval(&q(63, 8)).unwrap().scale(&Rational::int(8)));
        let dd = s.division_data();
        let got: Vec<(String, Point, EventKind)> = dd.iter().map(|d| (d.q.to_string(), d.value.clone(), d.kind)).collect();
        assert_eq!(
            got,
            vec![
                ("7".into(), Point::ints(&[1, 2, 4]), EventKind::Switch),
                ("8".into(), Point::ints(&[2, 2, 4]), EventKind::Division),
                ("10".into(), Point::ints(&[2, 4, 4]), EventKind::Division),
            ]
        );
        assert!(s.is_proper());
    }

    #[test]
    fn one_segment() {
        let s = Canvas::from_ints(&[&[1, 2, 4], &[1, 2, 5]]).build_system().unwrap();
        assert_eq!(s.events.len(), 2);
        assert!(s.division_data().iter().all(|d| d.kind == EventKind::Boundary));
        assert_eq!(s.eval(&q(15, 2)).unwrap(), Point(vec![q(1, 1), q(2, 1), q(9, 2)]));
    }

    #[test]
    fn validate_catches() {
        let mut s = nine_point();
        s.events[0].value = Point::ints(&[1, 4, 2]);
        let r = s.validate();
        assert!(r.violations.iter().any(|f| f.condition == "S1"));
        let s = NSystem {
            n: 3,
            domain: Interval::new(Rational::int(7), Some(Rational::int(8))).unwrap(),
            events: vec![
                Event { q: Rational::int(7), value: Point::ints(&[1, 2, 4]), right_rise: Some(3), left_rise: None },
                Event { q: Rational::int(8), value: Point::ints(&[1, 2, 5]), right_rise: Some(3), left_rise: Some(1) },
            ],
            selfsimilar: None,
            mesh: None,
        };
        let r = s.validate();
        assert!(r.violations.iter().any(|f| f.condition == "S2"));
        let mut s = nine_point();
        // force k=3 > l=1 at an event with distinct values
        let i = s.events.iter().position(|e| e.q == 11).unwrap();
        s.events[i].left_rise = Some(1);
        s.events[i - 1].right_rise = Some(1);
        s.events[i].right_rise = Some(3);
        assert!(s.validate().violations.iter().any(|f| f.condition == "S3"));
    }

    #[test]
    fn rescale_roundtrip() {
        let s = nine_point();
        assert_eq!(s.rescale(&Rational::one()).unwrap(), s);
        let t = s.rescale(&Rational::int(2)).unwrap();
        assert_eq!(t.domain.lo, Rational::int(14));
        assert_eq!(t.domain.hi, Some(Rational::int(98)));
        assert_eq!(t.eval(&Rational::int(14)).unwrap(), Point::ints(&[2, 4, 8]));
        assert_eq!(t.rescale(&q(1, 2)).unwrap(), s);
        let u = ss124().rescale(&Rational::int(2)).unwrap();
        for k in 14..80 {
            let x = q(k, 1);
            assert_eq!(u.eval(&x).unwrap(), ss124().eval(&x).unwrap());
        }
        assert!(s.rescale(&Rational::zero()).is_err());
    }

    #[test]
    fn glue_and_restrict() {
        let s = nine_point();
        let a = s.restrict(&Rational::int(7), &Rational::int(27)).unwrap();
        let b = s.restrict(&Rational::int(27), &Rational::int(49)).unwrap();
        assert_eq!(a.glue(&b).unwrap(), s);
        let p = Canvas::from_ints(&[&[1, 2, 4], &[2, 4, 8]]).build_system().unwrap();
        let r = p.rescale(&Rational::int(2)).unwrap();
        let g = p.glue(&r).unwrap();
        assert!(g.validate().valid);
        let bad = s.restrict(&Rational::int(27), &Rational::int(49)).unwrap().rescale(&q(28, 27)).unwrap();
        assert!(matches!(a.glue(&bad), Err(Error::ValueMismatch(_))));
    }

    #[test]
    fn glue_slope_violation() {
        // left ends rising coordinate 1, right starts rising coordinate 3
        let p = Canvas::from_ints(&[&[1, 2, 4], &[2, 4, 5], &[3, 4, 5]]).build_system().unwrap();
        let r = Canvas::from_ints(&[&[3, 4, 5], &[3, 4, 6]]).build_system().unwrap();
        assert!(matches!(p.glue(&r), Err(Error::SlopeCondition { k: 3, l: 1 })));
    }

    #[test]
    fn selfsim_extension() {
        let p = Canvas::from_ints(&[&[1, 2, 4], &[2, 4, 8]]).build_system().unwrap();
        let s = p.selfsim_extend().unwrap();
        assert_eq!(s, ss124());
        assert!(matches!(nine_point().selfsim_extend(), Err(Error::NotProportional(_))));
        assert!(matches!(p.selfsim_extend_checked(Some(&Rational::int(3))), Err(Error::RatioMismatch { .. })));
    }

    #[test]
    fn canvas_roundtrip() {
        let s = nine_point();
        let c = s.canvas().unwrap();
        assert_eq!(c.build_system().unwrap(), s);
        let t = ss124();
        assert_eq!(t.canvas().unwrap().build_system().unwrap(), t);
    }

    #[test]
    fn json_roundtrip() {
        for s in [nine_point(), ss124()] {
            let j = serde_json::to_string(&s).unwrap();
            let back: NSystem = serde_json::from_str(&j).unwrap();
            assert_eq!(back, s);
        }
        let j = serde_json::to_value(ss124()).unwrap();
        assert_eq!(j["domain"], serde_json::json!(["7", null]));
        assert_eq!(j["selfsimilar"], serde_json::json!({"rho": "2"}));
    }
}
