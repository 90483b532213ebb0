//! Deformations of rigid systems: coordinate-raising extension, translation, segment adjustment,
//! and self-similarization.

use serde::{Deserialize, Serialize};

use crate::arith::{set_dist, set_dist_at_most, set_dist_f64, Point, Rational};
use crate::canvas::{transition, Canvas};
use crate::error::{Error, Result};
use crate::nsystem::NSystem;

/// Piecewise-linear nondecreasing map given by its breakpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReparamMap {
    pub breakpoints: Vec<(Rational, Rational)>,
}

impl ReparamMap {
    pub fn identity(u: &Rational, v: &Rational) -> Self {
        ReparamMap { breakpoints: vec![(u.clone(), u.clone()), (v.clone(), v.clone())] }.simplified()
    }

    pub fn domain(&self) -> (&Rational, &Rational) {
        (&self.breakpoints[0].0, &self.breakpoints[self.breakpoints.len() - 1].0)
    }

    pub fn eval(&self, q: &Rational) -> Result<Rational> {
        let b = &self.breakpoints;
        let (lo, hi) = self.domain();
        if q < lo || q > hi {
            return Err(Error::Domain(format!("{q} is outside [{lo},{hi}]")));
        }
        let i = b.partition_point(|(x, _)| x <= q);
        if i == 0 || i == b.len() {
            return Ok(b[i.saturating_sub(1)].1.clone());
        }
        let ((x0, y0), (x1, y1)) = (&b[i - 1], &b[i]);
        Ok(y0 + (y1 - y0) * ((q - x0) / (x1 - x0)))
    }

    /// `self` after `inner`.
    pub fn compose(&self, inner: &ReparamMap) -> Result<ReparamMap> {
        let mut qs: Vec<Rational> = inner.breakpoints.iter().map(|p| p.0.clone()).collect();
        for w in inner.breakpoints.windows(2) {
            let ((x0, y0), (x1, y1)) = (&w[0], &w[1]);
            if y0 == y1 {
                continue;
            }
            for (t, _) in &self.breakpoints {
                if (t > y0 && t < y1) || (t < y0 && t > y1) {
                    qs.push(x0 + (x1 - x0) * ((t - y0) / (y1 - y0)));
                }
            }
        }
        qs.sort();
        qs.dedup();
        let pts = qs
            .into_iter()
            .map(|q| {
                let y = self.eval(&inner.eval(&q)?)?;
                Ok((q, y))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ReparamMap { breakpoints: pts }.simplified())
    }

    fn simplified(mut self) -> Self {
        self.breakpoints.dedup_by(|a, b| a.0 == b.0);
        let mut out: Vec<(Rational, Rational)> = Vec::new();
        for p in self.breakpoints {
            while out.len() >= 2 {
                let (a, b) = (&out[out.len() - 2], &out[out.len() - 1]);
                let collinear = (&b.1 - &a.1) * (&p.0 - &b.0) == (&p.1 - &b.1) * (&b.0 - &a.0);
                if collinear {
                    out.pop();
                } else {
                    break;
                }
            }
            out.push(p);
        }
        ReparamMap { breakpoints: out }
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.breakpoints.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 <= w[1].1)
    }
}

fn finite_canvas(p: &NSystem) -> Result<(Canvas, Rational)> {
    if p.is_self_similar() || p.domain.hi.is_none() {
        return Err(Error::Precondition("a system on a compact interval is required".into()));
    }
    let mesh = p.effective_mesh().ok_or_else(|| Error::Precondition("system has no mesh".into()))?;
    let c = p.canvas()?;
    c.validate(false).into_result()?;
    Ok((c, mesh))
}

fn check_target(c: &Point, pv: &Point, mesh: &Rational) -> Result<()> {
    if c.dim() != pv.dim() {
        return Err(Error::Dimension { expected: pv.dim(), found: c.dim() });
    }
    if !c[0].is_positive() || !c.is_strictly_increasing() {
        return Err(Error::TargetNotIncreasing(c.to_string()));
    }
    if let Some(j) = (0..c.dim()).find(|&j| !c[j].is_multiple_of(mesh)) {
        return Err(Error::MeshMisaligned { mesh: mesh.to_string(), detail: format!("coordinate {} = {}", j + 1, c[j]) });
    }
    if let Some(j) = (0..c.dim()).find(|&j| c[j] < pv[j]) {
        return Err(Error::TargetBelow { index: j + 1 });
    }
    Ok(())
}

/// One pass raising coordinate `m` (1-based) of the last canvas point to `cm`.
fn raise_one(points: &[Point], m: usize, cm: &Rational) -> (Vec<Point>, ReparamMap) {
    let s = points.len();
    let n = points[0].dim();
    let last = &points[s - 1];
    let dm = cm - &last[m - 1];
    let qs: Vec<Rational> = points.iter().map(Point::sum).collect();
    let r = (0..s)
        .find(|&r| (r..s).all(|i| (m - 1..n).all(|j| points[i][j] == last[j])))
        .expect("the last point qualifies");
    let replace = |p: &Point| {
        let mut p = p.clone();
        p[m - 1] = cm.clone();
        p
    };
    let insert = r == 0 || transition(&points[r - 1], &points[r]).map(|t| t.1) != Some(m);
    let mut out: Vec<Point> = points[..=r].to_vec();
    if insert {
        out.extend(points[r..].iter().map(replace));
    } else {
        out.truncate(r);
        out.extend(points[r..].iter().map(replace));
    }
    let qr = &qs[r];
    let map = ReparamMap {
        breakpoints: vec![
            (qs[0].clone(), qs[0].clone()),
            (qr.clone(), qr.clone()),
            (qr + &dm, qr.clone()),
            (&qs[s - 1] + &dm, qs[s - 1].clone()),
        ],
    }
    .simplified();
    (out, map)
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtendReport {
    /// P~ = P and A = id wherever P_n(q) < P_n(v).
    pub prefix_preserved: bool,
    pub endpoint_matches: bool,
    /// 0 <= P~_j(q) - P_j(A(q)) <= c_j - P_j(v) at division numbers and map breakpoints.
    pub sandwich: bool,
    pub map_surjective: bool,
}

impl ExtendReport {
    pub fn ok(&self) -> bool {
        self.prefix_preserved && self.endpoint_matches && self.sandwich && self.map_surjective
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Extension {
    pub system: NSystem,
    pub map: ReparamMap,
    /// Canvases after the passes m = n, ..., 1 (skipped passes omitted).
    pub passes: Vec<(usize, Canvas)>,
    pub report: ExtendReport,
}

/// Rigid system on [u, c1+...+cn] ending at `c`, with the reparametrization onto [u, v].
pub fn extend_to(p: &NSystem, c: &Point) -> Result<Extension> {
    let (canvas, mesh) = finite_canvas(p)?;
    let mut pts = canvas.points.clone();
    let pv = pts[pts.len() - 1].clone();
    check_target(c, &pv, &mesh)?;
    let u = p.domain.lo.clone();
    let v = p.domain.hi.clone().expect("finite");
    let mut map = ReparamMap::identity(&u, &v);
    let mut passes = Vec::new();
    for m in (1..=p.n).rev() {
        if c[m - 1] == pts[pts.len() - 1][m - 1] {
            continue;
        }
        let (next, a) = raise_one(&pts, m, &c[m - 1]);
        pts = next;
        map = map.compose(&a)?;
        passes.push((m, Canvas::finite(pts.clone()).with_mesh(mesh.clone())));
    }
    let system = if passes.is_empty() {
        p.clone()
    } else {
        let mut s = Canvas::finite(pts).with_mesh(mesh.clone()).build_system()?;
        s.mesh = p.mesh.clone().or(Some(mesh));
        s
    };
    let report = check_extension(p, c, &system, &map)?;
    Ok(Extension { system, map, passes, report })
}

fn event_qs(s: &NSystem) -> Vec<Rational> {
    s.events.iter().map(|e| e.q.clone()).collect()
}

pub fn check_extension(p: &NSystem, c: &Point, out: &NSystem, map: &ReparamMap) -> Result<ExtendReport> {
    let v = p.domain.hi.clone().expect("finite");
    let pv = p.eval(&v)?;
    let n = p.n;
    let mut prefix_preserved = true;
    for q in event_qs(p) {
        let x = p.eval(&q)?;
        if x[n - 1] < pv[n - 1] && (out.eval(&q)? != x || map.eval(&q)? != q) {
            prefix_preserved = false;
        }
    }
    let w = out.domain.hi.clone().expect("finite");
    let endpoint_matches = out.eval(&w)? == *c && w == c.sum();
    let mut qs = event_qs(out);
    qs.extend(map.breakpoints.iter().map(|b| b.0.clone()));
    qs.sort();
    qs.dedup();
    let mut sandwich = true;
    for q in &qs {
        let a = p.eval(&map.eval(q)?)?;
        let t = out.eval(q)?;
        for j in 0..n {
            let d = &t[j] - &a[j];
            if d.is_negative() || d > &c[j] - &pv[j] {
                sandwich = false;
            }
        }
    }
    let (lo, hi) = map.domain();
    let map_surjective = map.is_nondecreasing()
        && *lo == p.domain.lo
        && *hi == w
        && map.breakpoints[0].1 == p.domain.lo
        && map.breakpoints[map.breakpoints.len() - 1].1 == v;
    Ok(ExtendReport { prefix_preserved, endpoint_matches, sandwich, map_surjective })
}

/// Ratios q^-1 P(q) at division numbers in [lo, hi] and at midpoints between them.
pub fn ratio_samples(s: &NSystem, lo: &Rational, hi: &Rational) -> Result<Vec<Point>> {
    let mut qs: Vec<Rational> = s.restrict(lo, hi)?.events.iter().map(|e| e.q.clone()).collect();
    let mids: Vec<Rational> = qs.windows(2).map(|w| (&w[0] + &w[1]) * Rational::frac(1, 2)).collect();
    qs.extend(mids);
    qs.sort();
    qs.into_iter().map(|q| Ok(s.eval(&q)?.scale(&q.recip()?))).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Drift {
    /// Sampled Hausdorff distance, in floating point.
    pub dist: f64,
    /// n(n+1)eps, present when v > nu.
    pub bound: Option<Rational>,
    /// Exact verdict of dist <= bound.
    pub within: Option<bool>,
}

/// Drift of the sampled ratio sets under an extension.
pub fn extension_drift(p: &NSystem, ext: &Extension) -> Result<Drift> {
    let u = &p.domain.lo;
    let v = p.domain.hi.as_ref().expect("finite");
    let w = ext.system.domain.hi.as_ref().expect("finite");
    let e = ratio_samples(p, u, v)?;
    let et = ratio_samples(&ext.system, u, w)?;
    let n = Rational::int(p.n as i64);
    let bound = if *v > &n * u {
        let pv = p.eval(v)?;
        let c = ext.system.eval(w)?;
        let eps = (0..p.n).map(|j| (&c[j] - &pv[j]) / v).max().expect("n >= 2");
        Some(&n * (&n + Rational::one()) * eps)
    } else {
        None
    };
    let within = bound.as_ref().map(|b| set_dist_at_most(&e, &et, b)).transpose()?;
    Ok(Drift { dist: set_dist_f64(&e, &et), bound, within })
}

/// P(q) = b e + R(q - nb) on [u + nb, v + nb].
pub fn translate_by(r: &NSystem, b: &Rational) -> Result<NSystem> {
    let (canvas, mesh) = finite_canvas(r)?;
    if b.is_negative() {
        return Err(Error::Domain(format!("translation {b} is negative")));
    }
    if !b.is_multiple_of(&mesh) {
        return Err(Error::MeshMisaligned { mesh: mesh.to_string(), detail: format!("translation {b}") });
    }
    if b.is_zero() {
        return Ok(r.clone());
    }
    let pts = canvas.points.iter().map(|p| p.add_scalar(b)).collect();
    let mut s = Canvas::finite(pts).with_mesh(mesh.clone()).build_system()?;
    s.mesh = r.mesh.clone().or(Some(mesh));
    Ok(s)
}

/// Largest drift over division numbers of R, and the bound (n+1)b/(u+nb).
pub fn translation_drift(r: &NSystem, p: &NSystem, b: &Rational) -> Result<(Rational, Rational)> {
    let nb = b * Rational::int(r.n as i64);
    let mut worst = Rational::zero();
    for e in &r.events {
        let q2 = &e.q + &nb;
        let d = p.eval(&q2)?.scale(&q2.recip()?).dist_inf(&e.value.scale(&e.q.recip()?));
        worst = Rational::max_of(&worst, &d);
    }
    let bound = b * Rational::int(r.n as i64 + 1) / (&r.domain.lo + &nb);
    Ok((worst, bound))
}

#[derive(Clone, Debug, Serialize)]
pub struct AdjustReport {
    pub u0: Rational,
    pub v0: Rational,
    pub b: Rational,
    pub u: Rational,
    pub v: Rational,
    pub slope_e1: bool,
    pub lower_bound_u: bool,
    pub upper_bound_u: bool,
    pub bound_v: bool,
    /// Sampled dist(F(R), E) against 4(n+1) eps1.
    pub dist: Rational,
    pub dist_bound: Rational,
}

impl AdjustReport {
    pub fn ok(&self) -> bool {
        self.slope_e1 && self.lower_bound_u && self.upper_bound_u && self.bound_v && self.dist <= self.dist_bound
    }
}

/// One period of ratio samples of a self-similar system.
pub fn fset_samples(r: &NSystem) -> Result<Vec<Point>> {
    let ss = r.selfsimilar.as_ref().ok_or(Error::NotSelfSimilar)?;
    ratio_samples(r, &ss.period_start, &(&ss.period_start * &ss.rho))
}

fn ceil_to(x: &Rational, mesh: &Rational) -> Rational {
    (x / mesh).ceil() * mesh
}

/// The translated window of `r` whose start ratio sits just above `x`.
///
/// `min_ratio` asks for v/u at least that large; `max_scan` bounds the number of candidates tried.
pub fn adjust_segment(
    r: &NSystem,
    x: &Point,
    eps1: &Rational,
    eps2: &Rational,
    min_ratio: &Rational,
    max_scan: usize,
) -> Result<(NSystem, AdjustReport)> {
    if !r.is_proper() {
        return Err(Error::NotProper);
    }
    if !eps1.is_positive() || !eps2.is_positive() {
        return Err(Error::Domain("eps1 and eps2 must be positive".into()));
    }
    let mesh = r.effective_mesh().ok_or_else(|| Error::Precondition("system has no mesh".into()))?;
    let ss = r.selfsimilar.as_ref().expect("proper systems are self-similar here");
    let n = r.n;
    let nq = Rational::int(n as i64);
    let one = Rational::one();
    let is_e1 = |q: &Rational| -> Result<bool> { Ok(r.rises_at(q)?.1 == Some(1)) };
    let in_set = r
        .events
        .iter()
        .any(|e| e.right_rise == Some(1) && e.value.scale(&e.q.recip().unwrap_or_else(|_| one.clone())) == *x);
    if !in_set {
        return Err(Error::Precondition(format!("{x} is not a ratio at a division number with right slope e1")));
    }
    let period = ss.rho.clone();
    let mut horizon = &ss.period_start * &period;
    let mut scanned = 0;
    let mut tried: Vec<Rational> = Vec::new();
    while scanned < max_scan {
        for ev in r.events_upto(&horizon) {
            if tried.contains(&ev.q) {
                continue;
            }
            tried.push(ev.q.clone());
            scanned += 1;
            let u0 = ev.q.clone();
            if !u0.is_multiple_of(&mesh) || !is_e1(&u0)? {
                continue;
            }
            let ratio0 = r.eval(&u0)?.scale(&u0.recip()?);
            if ratio0.dist_inf(x) > *eps1 {
                continue;
            }
            let b = ceil_to(&(Rational::int(2) * eps1 * &u0), &mesh);
            if b > Rational::int(3) * eps1 * &u0 {
                continue;
            }
            // v0 = u0 rho^j with j large enough for the ratio, the v-bound and the window
            let mut v0 = &u0 * &period;
            let mut j = 0;
            loop {
                let nb = &nq * &b;
                let v = &v0 + &nb;
                let ratio_v = r.eval(&v0)?.add_scalar(&b).scale(&v.recip()?);
                let drift = ratio_v.dist_inf(&r.eval(&v0)?.scale(&v0.recip()?));
                if drift <= *eps2 && &v / &(&u0 + &nb) >= *min_ratio {
                    break;
                }
                v0 = &v0 * &period;
                j += 1;
                if j > 200 {
                    return Err(Error::HorizonExhausted("no admissible v0".into()));
                }
            }
            let window = r.restrict(&u0, &v0)?;
            let p = translate_by(&window, &b)?;
            let nb = &nq * &b;
            let (u, v) = (&u0 + &nb, &v0 + &nb);
            let pu = p.eval(&u)?.scale(&u.recip()?);
            let pv = p.eval(&v)?.scale(&v.recip()?);
            let lo = x.add_scalar(eps1).scale(&(&one + &nq * Rational::int(3) * eps1).recip()?);
            let hi = x.add_scalar(&(Rational::int(4) * eps1));
            let f = fset_samples(r)?;
            let e = ratio_samples(&p, &u, &v)?;
            let report = AdjustReport {
                slope_e1: p.rises_at(&u)?.1 == Some(1),
                lower_bound_u: lo.le(&pu),
                upper_bound_u: pu.le(&hi),
                bound_v: pv.dist_inf(x) <= Rational::int(2) * eps2,
                dist: set_dist(&f, &e)?,
                dist_bound: Rational::int(4) * (&nq + &one) * eps1,
                u0,
                v0,
                b,
                u,
                v,
            };
            return Ok((p, report));
        }
        horizon = &horizon * &period;
    }
    Err(Error::HorizonExhausted(format!("no admissible u0 among {max_scan} division numbers")))
}

#[derive(Clone, Debug, Serialize)]
pub struct SelfSimReport {
    pub fast_path: bool,
    pub m: Rational,
    pub eps1: Rational,
    /// Sampled distance between the F-sets of input and output.
    pub dist: Rational,
    pub eps: Rational,
}

/// A self-similar rigid system of the same mesh whose F-set is within `eps` of that of `r`.
pub fn selfsimilarize(r: &NSystem, eps: &Rational) -> Result<(NSystem, SelfSimReport)> {
    if !eps.is_positive() {
        return Err(Error::Domain(format!("eps {eps} must be positive")));
    }
    if !r.is_proper() {
        return Err(Error::NotProper);
    }
    let rho = r.rho().expect("proper").clone();
    if rho.is_integer() && rho >= Rational::int(2) && r.effective_mesh().is_some() {
        let report = SelfSimReport { fast_path: true, m: rho, eps1: Rational::zero(), dist: Rational::zero(), eps: eps.clone() };
        return Ok((r.clone(), report));
    }
    selfsimilarize_general(r, eps)
}

/// The full procedure: adjust a window, extend to m P(u), close up.
pub fn selfsimilarize_general(r: &NSystem, eps: &Rational) -> Result<(NSystem, SelfSimReport)> {
    if !r.is_proper() {
        return Err(Error::NotProper);
    }
    let n = r.n as i64;
    let one = Rational::one();
    let eps1 = Rational::min_of(&one, eps) / Rational::int(16 * n * n * (n + 1));
    let eps2 = &eps1 * Rational::frac(1, 2);
    let x = r
        .period_division_points()?
        .into_iter()
        .find(|d| r.rises_at(&d.q).map(|t| t.1 == Some(1)).unwrap_or(false))
        .map(|d| d.value.scale(&d.q.recip().expect("positive")))
        .or_else(|| {
            r.events
                .iter()
                .find(|e| e.right_rise == Some(1))
                .map(|e| e.value.scale(&e.q.recip().expect("positive")))
        })
        .ok_or_else(|| Error::Precondition("no division number with right slope e1".into()))?;
    let nq = Rational::int(n);
    // v/u >= 1/(n eps1) gives ceil((1+3n eps1) v/u) <= (1+4n eps1) v/u
    let min_ratio = Rational::max_of(&(&nq * &eps1).recip()?, &(&nq + &one));
    let (p, _) = adjust_segment(r, &x, &eps1, &eps2, &min_ratio, 10_000)?;
    let u = p.domain.lo.clone();
    let v = p.domain.hi.clone().expect("finite");
    let m = ((&one + Rational::int(3) * &nq * &eps1) * &v / &u).ceil();
    if m > (&one + Rational::int(4) * &nq * &eps1) * &v / &u {
        return Err(Error::HorizonExhausted("v/u too small for the closing factor".into()));
    }
    let c = p.eval(&u)?.scale(&m);
    let ext = extend_to(&p, &c)?;
    let s = ext.system.selfsim_extend_checked(Some(&m))?;
    let dist = set_dist(&fset_samples(r)?, &fset_samples(&s)?)?;
    Ok((s, SelfSimReport { fast_path: false, m, eps1, dist, eps: eps.clone() }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    fn example() -> NSystem {
        Canvas::from_ints(&[&[1, 3, 9, 12], &[1, 3, 12, 15], &[1, 6, 12, 15], &[6, 9, 12, 15]])
            .with_mesh(Rational::one())
            .build_system()
            .unwrap()
    }

    fn rows(c: &Canvas) -> Vec<Point> {
        c.points.clone()
    }

    fn pts(v: &[&[i64]]) -> Vec<Point> {
        v.iter().map(|r| Point::ints(r)).collect()
    }

    #[test]
    fn worked_extension() {
        let p = example();
        assert_eq!((p.domain.lo.clone(), p.domain.hi.clone().unwrap()), (Rational::int(25), Rational::int(42)));
        let ext = extend_to(&p, &Point::ints(&[8, 12, 16, 20])).unwrap();
        let by_m: Vec<usize> = ext.passes.iter().map(|x| x.0).collect();
        assert_eq!(by_m, vec![4, 3, 2, 1]);
        assert_eq!(rows(&ext.passes[0].1), pts(&[&[1, 3, 9, 12], &[1, 3, 12, 20], &[1, 6, 12, 20], &[6, 9, 12, 20]]));
        assert_eq!(
            rows(&ext.passes[1].1),
            pts(&[&[1, 3, 9, 12], &[1, 3, 12, 20], &[1, 3, 16, 20], &[1, 6, 16, 20], &[6, 9, 16, 20]])
        );
        assert_eq!(
            rows(&ext.passes[2].1),
            pts(&[&[1, 3, 9, 12], &[1, 3, 12, 20], &[1, 3, 16, 20], &[1, 6, 16, 20], &[6, 12, 16, 20]])
        );
        assert_eq!(
            rows(&ext.passes[3].1),
            pts(&[&[1, 3, 9, 12], &[1, 3, 12, 20], &[1, 3, 16, 20], &[1, 6, 16, 20], &[6, 12, 16, 20], &[8, 12, 16, 20]])
        );
        assert_eq!(ext.system.domain.hi.clone().unwrap(), Rational::int(56));
        assert!(ext.report.ok(), "{:?}", ext.report);
        assert_eq!(ext.map.eval(&Rational::int(56)).unwrap(), Rational::int(42));
    }

    #[test]
    fn identity_extension() {
        let p = example();
        let ext = extend_to(&p, &Point::ints(&[6, 9, 12, 15])).unwrap();
        assert_eq!(ext.system, p);
        assert_eq!(ext.map, ReparamMap::identity(&Rational::int(25), &Rational::int(42)));
        assert!(ext.passes.is_empty());
    }

    #[test]
    fn extension_errors() {
        let p = example();
        assert!(matches!(extend_to(&p, &Point::ints(&[8, 8, 16, 20])), Err(Error::TargetNotIncreasing(_))));
        assert!(matches!(extend_to(&p, &Point::ints(&[5, 12, 16, 20])), Err(Error::TargetBelow { index: 1 })));
        let half = Point(vec![q(13, 2), Rational::int(12), Rational::int(16), Rational::int(20)]);
        assert!(matches!(extend_to(&p, &half), Err(Error::MeshMisaligned { .. })));
    }

    #[test]
    fn map_composition() {
        let a = ReparamMap { breakpoints: vec![(q(0, 1), q(0, 1)), (q(2, 1), q(2, 1)), (q(4, 1), q(2, 1)), (q(6, 1), q(4, 1))] };
        let b = ReparamMap { breakpoints: vec![(q(0, 1), q(0, 1)), (q(1, 1), q(1, 1)), (q(3, 1), q(1, 1)), (q(4, 1), q(2, 1))] };
        let c = b.compose(&a).unwrap();
        for k in 0..=12 {
            let t = q(k, 2);
            assert_eq!(c.eval(&t).unwrap(), b.eval(&a.eval(&t).unwrap()).unwrap());
        }
        assert!(c.is_nondecreasing());
    }

    #[test]
    fn translation() {
        let r = Canvas::nine_point().build_system().unwrap();
        assert_eq!(translate_by(&r, &Rational::zero()).unwrap(), r);
        let p = translate_by(&r, &Rational::one()).unwrap();
        assert_eq!(p.domain.lo, Rational::int(10));
        assert_eq!(p.domain.hi.clone().unwrap(), Rational::int(52));
        assert_eq!(p.canvas().unwrap().points[0], Point::ints(&[2, 3, 5]));
        let d = p.eval(&Rational::int(10)).unwrap().scale(&q(1, 10)).dist_inf(&Point::ints(&[1, 2, 4]).scale(&q(1, 7)));
        assert_eq!(d, q(1, 14));
        let (worst, bound) = translation_drift(&r, &p, &Rational::one()).unwrap();
        assert_eq!(bound, q(4, 10));
        assert!(worst <= bound);
        assert!(translate_by(&r, &q(1, 2)).is_err());
        assert!(translate_by(&r, &Rational::int(-1)).is_err());
    }

    fn ss124() -> NSystem {
        Canvas::periodic(vec![Point::ints(&[1, 2, 4]), Point::ints(&[2, 4, 8])], 0, Rational::int(2))
            .with_mesh(Rational::one())
            .build_system()
            .unwrap()
    }

    #[test]
    fn adjust_small_system() {
        let r = ss124();
        let x = Point::ints(&[1, 2, 4]).scale(&q(1, 7));
        let eps1 = q(1, 10);
        let (p, rep) = adjust_segment(&r, &x, &eps1, &q(1, 10), &Rational::int(4), 10_000).unwrap();
        assert!(rep.ok(), "{rep:?}");
        let u = &rep.u;
        assert!(p.eval(u).unwrap().scale(&u.recip().unwrap()).le(&x.add_scalar(&q(2, 5))));
        assert!(adjust_segment(&r, &Point::ints(&[1, 1, 2]).scale(&q(1, 4)), &eps1, &eps1, &Rational::int(4), 100).is_err());
    }

    #[test]
    fn selfsim_fast_path() {
        let (s, rep) = selfsimilarize(&ss124(), &q(1, 100)).unwrap();
        assert!(rep.fast_path);
        assert_eq!(s, ss124());
    }

    #[test]
    fn selfsim_general_small() {
        let r = ss124();
        let (s, rep) = selfsimilarize_general(&r, &q(1, 100)).unwrap();
        assert!(s.is_self_similar());
        assert!(rep.m.is_integer() && rep.m >= Rational::int(2));
        assert!(rep.dist <= q(1, 100), "{}", rep.dist);
        let v = crate::exponents::f_set(&s, None).unwrap().vertices;
        let target = crate::exponents::f_set(&r, None).unwrap().vertices;
        assert!(set_dist(&v, &target).unwrap() <= q(1, 100));
    }
}
