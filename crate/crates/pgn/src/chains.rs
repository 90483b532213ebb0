//! Closed chains and elementary paths in the triangle x1 <= x2 <= x3 of the plane x1+x2+x3 = 1.

use serde::{Deserialize, Serialize};

use crate::arith::geom::{self, e, f1, f2, hull2, line_intersect, on_segment, toward_lambda};
use crate::arith::{comp_inf_sup, Point, Rational};
use crate::canvas::{Canvas, Failure};
use crate::error::{Error, Result};
use crate::nsystem::NSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VertexClass {
    #[serde(rename = "on-L")]
    L,
    #[serde(rename = "on-L*")]
    LStar,
    #[serde(rename = "interior")]
    Interior,
    #[serde(rename = "f2")]
    F2,
    #[serde(rename = "boundary")]
    Boundary,
    #[serde(rename = "outside")]
    Outside,
}

pub fn classify(p: &Point) -> VertexClass {
    if p.dim() != 3 || !geom::in_delta_closed(p) {
        VertexClass::Outside
    } else if *p == f2() {
        VertexClass::F2
    } else if geom::on_l(p) {
        VertexClass::L
    } else if geom::on_lstar(p) {
        VertexClass::LStar
    } else if geom::in_delta_open(p) {
        VertexClass::Interior
    } else {
        VertexClass::Boundary
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedChain {
    pub vertices: Vec<Point>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub ok: bool,
    pub classes: Vec<VertexClass>,
    /// Edge i goes from vertex i toward e_j, j listed here (0 when undetermined).
    pub directions: Vec<usize>,
    /// Canvas transition pairs read off the stretches between interior vertices.
    pub transitions: Vec<(usize, usize)>,
    pub failures: Vec<Failure>,
}

/// The direction j and ratio lambda in (0,1) with b = lambda a + (1 - lambda) e_j.
pub fn edge(a: &Point, b: &Point) -> Option<(usize, Rational)> {
    (1..=3).find_map(|j| {
        let lam = toward_lambda(a, b, j)?;
        (lam.is_positive() && lam < Rational::one()).then_some((j, lam))
    })
}

fn fail(out: &mut Vec<Failure>, c: &str, i: usize, d: String) {
    out.push(Failure { condition: c.into(), index: i, detail: d });
}

pub fn validate_chain(c: &ClosedChain) -> ChainReport {
    let v = &c.vertices;
    let m = v.len();
    let mut failures = Vec::new();
    let classes: Vec<VertexClass> = v.iter().map(classify).collect();
    let mut directions = vec![0; m];
    if m < 3 {
        fail(&mut failures, "shape", 0, format!("{m} vertices, at least 3 needed"));
        return ChainReport { ok: false, classes, directions, transitions: vec![], failures };
    }
    for (i, cl) in classes.iter().enumerate() {
        if !matches!(cl, VertexClass::L | VertexClass::LStar | VertexClass::Interior) {
            fail(&mut failures, "vertex", i, format!("{} is {cl:?}", v[i]));
        }
    }
    for i in 0..m {
        match edge(&v[i], &v[(i + 1) % m]) {
            Some((j, _)) => directions[i] = j,
            None => fail(&mut failures, "segment", i, format!("{} is not between {} and any e_j", v[(i + 1) % m], v[i])),
        }
    }
    if !failures.is_empty() {
        return ChainReport { ok: false, classes, directions, transitions: vec![], failures };
    }
    for i in 0..m {
        let din = directions[(i + m - 1) % m];
        let dout = directions[i];
        let next = classes[(i + 1) % m];
        let ok = match classes[i] {
            VertexClass::L => din == 1 && dout == 2 && matches!(next, VertexClass::LStar | VertexClass::Interior),
            VertexClass::LStar => din == 2 && dout == 3 && next == VertexClass::Interior,
            _ => match (din, dout) {
                (3, 1) | (2, 1) => next == VertexClass::L,
                (3, 2) => matches!(next, VertexClass::LStar | VertexClass::Interior),
                _ => false,
            },
        };
        if !ok {
            fail(&mut failures, "walk", i, format!("{:?} vertex entered toward e{din}, left toward e{dout}", classes[i]));
        }
    }
    let has_base = (0..m).any(|i| classes[i] == VertexClass::L && classes[(i + 1) % m] == VertexClass::LStar);
    if !has_base {
        fail(&mut failures, "base", 0, "no edge from L to L*".into());
    }
    let mut transitions = Vec::new();
    if failures.is_empty() {
        let start = (0..m).find(|&i| classes[i] == VertexClass::Interior);
        if let Some(s) = start {
            let mut dirs = Vec::new();
            for t in 0..m {
                let i = (s + t) % m;
                dirs.push(directions[i]);
                if classes[(i + 1) % m] == VertexClass::Interior {
                    let pair = match dirs.as_slice() {
                        [1, 2, 3] => Some((1, 3)),
                        [2, 3] => Some((2, 3)),
                        [2] => Some((2, 2)),
                        [1, 2] => Some((1, 2)),
                        _ => None,
                    };
                    match pair {
                        Some(p) => transitions.push(p),
                        None => fail(&mut failures, "walk", i, format!("stretch {dirs:?} is not a canvas transition")),
                    }
                    dirs.clear();
                }
            }
        } else {
            fail(&mut failures, "walk", 0, "no interior vertex".into());
        }
    }
    ChainReport { ok: failures.is_empty(), classes, directions, transitions, failures }
}

fn ensure_chain(c: &ClosedChain) -> Result<ChainReport> {
    let r = validate_chain(c);
    match r.failures.first() {
        None => Ok(r),
        Some(f) => Err(Error::InvalidChain(format!("{} at vertex {}: {}", f.condition, f.index, f.detail))),
    }
}

fn rotate(v: &[Point], s: usize) -> Vec<Point> {
    v[s..].iter().chain(&v[..s]).cloned().collect()
}

/// Rotation starting at the L vertex closest to f2 that is followed by an L* vertex.
pub fn canonicalize(c: &ClosedChain) -> Result<ClosedChain> {
    let r = ensure_chain(c)?;
    let v = &c.vertices;
    let m = v.len();
    let starts = (0..m).filter(|&i| r.classes[i] == VertexClass::L && r.classes[(i + 1) % m] == VertexClass::LStar);
    let best = starts
        .map(|i| rotate(v, i))
        .max_by(|a, b| a[0][0].cmp(&b[0][0]).then_with(|| b.cmp(a)))
        .expect("validated chain has a base edge");
    Ok(ClosedChain { vertices: best })
}

/// Ratios at the division points of one period, in order.
pub fn chain_from_system(s: &NSystem) -> Result<ClosedChain> {
    if s.n != 3 {
        return Err(Error::Dimension { expected: 3, found: s.n });
    }
    if !s.is_self_similar() {
        return Err(Error::NotSelfSimilar);
    }
    if !s.is_nondegenerate() || !s.is_proper() {
        return Err(Error::Precondition("system is degenerate".into()));
    }
    let mut v: Vec<Point> = Vec::new();
    for d in s.period_division_points()? {
        let r = d.value.scale(&d.q.recip()?);
        if v.last() != Some(&r) {
            v.push(r);
        }
    }
    while v.len() > 1 && v.first() == v.last() {
        v.pop();
    }
    canonicalize(&ClosedChain { vertices: v })
}

/// Periodic canvas whose system has F-set equal to the chain; minimal integral scaling.
pub fn canvas_from_chain(c: &ClosedChain) -> Result<Canvas> {
    let r = ensure_chain(c)?;
    let m = c.vertices.len();
    let s = (0..m).find(|&i| r.classes[i] == VertexClass::Interior).expect("validated");
    let v = rotate(&c.vertices, s);
    let mut scale = Rational::one();
    let mut pts = vec![v[0].clone()];
    for i in 0..m {
        let (_, lam) = edge(&v[i], &v[(i + 1) % m]).expect("validated");
        scale = &scale / &lam;
        if i + 1 < m && classify(&v[i + 1]) == VertexClass::Interior {
            pts.push(v[i + 1].scale(&scale));
        }
    }
    let rho = scale;
    if rho <= Rational::one() {
        return Err(Error::InvalidChain(format!("ratio {rho} does not exceed 1")));
    }
    pts.push(v[0].scale(&rho));
    let all: Vec<Rational> = pts.iter().flat_map(|p| p.iter().cloned()).collect();
    let g = Rational::gcd_all(all.iter()).expect("nonempty");
    let inv = g.recip()?;
    let pts: Vec<Point> = pts.iter().map(|p| p.scale(&inv)).collect();
    Ok(Canvas::periodic(pts, 0, rho).with_mesh(Rational::one()))
}

/// Self-similar 3-system realizing the chain; re-validated through its own F-set.
pub fn system_from_chain(c: &ClosedChain) -> Result<NSystem> {
    let canvas = canvas_from_chain(c)?;
    let s = canvas.build_system()?;
    let back = chain_from_system(&s)?;
    if back != canonicalize(c)? {
        return Err(Error::InvalidChain("compiled system does not reproduce the chain".into()));
    }
    Ok(s)
}

/// Chain whose hull is the hull of both inputs.
pub fn join_chains(c1: &ClosedChain, c2: &ClosedChain) -> Result<ClosedChain> {
    let (mut a, mut b) = (canonicalize(c1)?, canonicalize(c2)?);
    if a == b {
        return Ok(a);
    }
    if a.vertices[0][0] < b.vertices[0][0] {
        std::mem::swap(&mut a, &mut b);
    }
    let (a1, as1) = (&a.vertices[0], &a.vertices[1]);
    let (a2, as2) = (&b.vertices[0], &b.vertices[1]);
    if a1 == a2 {
        let mut v = a.vertices.clone();
        v.extend(b.vertices.iter().cloned());
        return canonicalize(&ClosedChain { vertices: v });
    }
    let cc = line_intersect(&e(1), a1, a2, as2).ok_or_else(|| Error::InvalidChain("parallel join lines".into()))?;
    let cs = line_intersect(&e(3), as1, a2, as2).ok_or_else(|| Error::InvalidChain("parallel join lines".into()))?;
    let mut v = a.vertices.clone();
    v.push(a1.clone());
    v.push(as1.clone());
    v.push(cs);
    v.extend(b.vertices[1..].iter().cloned());
    v.push(a2.clone());
    v.push(cc);
    v.dedup();
    canonicalize(&ClosedChain { vertices: v })
}

/// The path A A* B* C* C B (closed back to A).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementaryPath {
    #[serde(rename = "A")]
    pub a: Point,
    #[serde(rename = "Astar")]
    pub a_star: Point,
    #[serde(rename = "Bstar")]
    pub b_star: Point,
    #[serde(rename = "Cstar")]
    pub c_star: Point,
    #[serde(rename = "C")]
    pub c: Point,
    #[serde(rename = "B")]
    pub b: Point,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathReport {
    pub valid: bool,
    pub strict: bool,
    pub failures: Vec<String>,
}

impl ElementaryPath {
    pub fn new(a: Point, a_star: Point, b_star: Point, c_star: Point, c: Point, b: Point) -> Self {
        ElementaryPath { a, a_star, b_star, c_star, c, b }
    }

    pub fn vertices(&self) -> [&Point; 6] {
        [&self.a, &self.a_star, &self.b_star, &self.c_star, &self.c, &self.b]
    }

    pub fn validate(&self) -> PathReport {
        let mut f = Vec::new();
        if self.vertices().iter().any(|p| !geom::on_plane(p)) {
            f.push("vertex off the plane".to_string());
            return PathReport { valid: false, strict: false, failures: f };
        }
        let (a, as_, bs, cs, c, b) = (&self.a, &self.a_star, &self.b_star, &self.c_star, &self.c, &self.b);
        let mut need = |ok: bool, what: &str| {
            if !ok {
                f.push(what.to_string());
            }
        };
        need(geom::on_l_closed(a), "A not on closed L");
        need(geom::on_lstar_closed(as_), "A* not on closed L*");
        need(on_segment(as_, a, &e(2)), "A* not on [A,e2]");
        need(on_segment(bs, as_, &f1()), "B* not on [A*,f1]");
        need(geom::in_delta_closed(cs), "C* outside the closed triangle");
        need(on_segment(cs, bs, &e(3)), "C* not on [B*,e3]");
        need(geom::in_delta_closed(c), "C outside the closed triangle");
        need(on_segment(c, cs, &e(2)), "C not on [C*,e2]");
        need(on_segment(b, a, &e(3)), "B not on [A,e3]");
        need(on_segment(b, c, &e(1)), "B not on [C,e1]");
        let valid = f.is_empty();
        let strict = valid
            && geom::on_l(a)
            && geom::on_l(b)
            && geom::on_lstar(as_)
            && geom::on_lstar(bs)
            && geom::in_delta_open(c)
            && geom::in_delta_open(cs);
        PathReport { valid, strict, failures: f }
    }

    pub fn is_strict(&self) -> bool {
        self.validate().strict
    }

    /// Closed-form infimum and supremum over the path.
    pub fn inf_sup(&self) -> (Point, Point) {
        let inf = Point(vec![
            self.c[0].clone(),
            Rational::min_of(&self.c_star[1], &self.b[1]),
            self.a_star[2].clone(),
        ]);
        let sup = Point(vec![
            self.a[0].clone(),
            Rational::max_of(&self.b_star[1], &self.c[1]),
            self.c_star[2].clone(),
        ]);
        (inf, sup)
    }
}

pub fn path_inf_sup(p: &ElementaryPath) -> (Point, Point) {
    p.inf_sup()
}

/// Brute-force extrema over the six vertices.
pub fn path_inf_sup_vertices(p: &ElementaryPath) -> (Point, Point) {
    comp_inf_sup(p.vertices()).expect("six vertices")
}

fn min_coordinate_gap(pts: &[&Point]) -> Option<Rational> {
    let mut best: Option<Rational> = None;
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i + 1..] {
            for k in 0..3 {
                let d = (&p[k] - &q[k]).abs();
                if d.is_positive() && best.as_ref().is_none_or(|b| d < *b) {
                    best = Some(d);
                }
            }
        }
    }
    best
}

/// 1/64 of the smallest positive coordinate difference among the path vertices.
pub fn default_gap(p: &ElementaryPath) -> Rational {
    min_coordinate_gap(&p.vertices()).map_or_else(|| Rational::frac(1, 64), |g| g * Rational::frac(1, 64))
}

/// Closed chain through the six path vertices with saw teeth along [A*,B*] and [B,A].
pub fn densify_path(p: &ElementaryPath, m: usize, h: usize, gap: &Rational) -> Result<ClosedChain> {
    if !p.is_strict() {
        return Err(Error::Precondition("densification needs a strict elementary path".into()));
    }
    if !gap.is_positive() {
        return Err(Error::Domain(format!("gap {gap} must be positive")));
    }
    let count = |d: Rational, min: usize| -> usize {
        let k = (d / gap).ceil();
        let k = k.numer().to_string().parse::<usize>().unwrap_or(usize::MAX);
        k.max(min).max(1)
    };
    let mut v = vec![p.a.clone(), p.a_star.clone()];
    if p.a_star != p.b_star {
        let n = count(p.a_star.dist_inf(&p.b_star), m);
        let pts: Vec<Point> = (0..=n).map(|i| p.b_star.lerp(&p.a_star, &Rational::frac(i as i64, n as i64))).collect();
        for i in 0..n {
            let tooth = line_intersect(&e(3), &pts[i], &e(2), &pts[i + 1])
                .ok_or_else(|| Error::InvalidPath("degenerate tooth".into()))?;
            v.push(tooth);
            v.push(pts[i + 1].clone());
        }
    }
    v.push(p.c_star.clone());
    v.push(p.c.clone());
    v.push(p.b.clone());
    if p.a != p.b {
        let n = count(p.a.dist_inf(&p.b), h);
        let pts: Vec<Point> = (0..=n).map(|i| p.b.lerp(&p.a, &Rational::frac(i as i64, n as i64))).collect();
        for i in (0..n).rev() {
            let tooth = line_intersect(&e(2), &pts[i + 1], &e(1), &pts[i])
                .ok_or_else(|| Error::InvalidPath("degenerate tooth".into()))?;
            v.push(tooth);
            if i > 0 {
                v.push(pts[i].clone());
            }
        }
    } else {
        v.pop();
    }
    v.dedup();
    let chain = ClosedChain { vertices: v };
    let target = hull2(&p.vertices().map(Clone::clone))?;
    if hull2(&chain.vertices)? != target || !validate_chain(&chain).ok {
        return Err(Error::GapTooLarge { suggested: (gap * Rational::frac(1, 2)).to_string() });
    }
    Ok(chain)
}

/// Densification with the fewest teeth found by halving the gap from the longest base side.
pub fn densify_auto(p: &ElementaryPath) -> Result<ClosedChain> {
    let d = Rational::max_of(&p.a_star.dist_inf(&p.b_star), &p.a.dist_inf(&p.b));
    let mut gap = if d.is_positive() { d } else { Rational::one() };
    for _ in 0..40 {
        match densify_path(p, 1, 1, &gap) {
            Err(Error::GapTooLarge { .. }) => gap = gap * Rational::frac(1, 2),
            other => return other,
        }
    }
    Err(Error::GapTooLarge { suggested: gap.to_string() })
}

struct Simple {
    a_stars: Vec<Point>,
    c_stars: Vec<Point>,
    /// C_h, ..., C_1 and A_h, ..., A_1 in chain order.
    cs: Vec<Point>,
    as_: Vec<Point>,
}

fn split_simple(v: &[Point], cls: &[VertexClass]) -> Result<Vec<Simple>> {
    let m = v.len();
    let bad = || Error::InvalidChain("chain does not split into simple chains".into());
    let mut out = Vec::new();
    let mut i = 0;
    while i < m {
        // v[i] is the L start of a simple chain
        let mut s = Simple { a_stars: vec![], c_stars: vec![], cs: vec![], as_: vec![] };
        let mut j = i + 1;
        while j < m + 1 && cls[j % m] == VertexClass::LStar {
            s.a_stars.push(v[j % m].clone());
            s.c_stars.push(v[(j + 1) % m].clone());
            j += 2;
        }
        if s.a_stars.is_empty() {
            return Err(bad());
        }
        // after C*_g: an interior vertex reached toward e2, or directly an L vertex
        if cls[j % m] == VertexClass::Interior {
            s.cs.push(v[j % m].clone());
            j += 1;
        } else {
            s.cs.push(s.c_stars.last().unwrap().clone());
        }
        loop {
            if cls[j % m] != VertexClass::L {
                return Err(bad());
            }
            s.as_.push(v[j % m].clone());
            if cls[(j + 1) % m] == VertexClass::LStar {
                break;
            }
            s.cs.push(v[(j + 1) % m].clone());
            j += 2;
        }
        out.push(s);
        i = j;
    }
    Ok(out)
}

/// Strict elementary paths whose union has the same hull as the chain.
pub fn extract_paths(c: &ClosedChain) -> Result<Vec<ElementaryPath>> {
    let c = canonicalize(c)?;
    let v = &c.vertices;
    let cls: Vec<VertexClass> = v.iter().map(classify).collect();
    let a0 = v[0].clone();
    let as0 = v
        .iter()
        .zip(&cls)
        .filter(|(_, k)| **k == VertexClass::LStar)
        .map(|(p, _)| p)
        .max_by(|a, b| a[0].cmp(&b[0]))
        .expect("validated chain has an L* vertex")
        .clone();
    if !on_segment(&as0, &a0, &e(2)) {
        return Err(Error::InvalidChain("anchors are not aligned toward e2".into()));
    }
    let mut paths: Vec<ElementaryPath> = Vec::new();
    let mut push = |p: ElementaryPath| -> Result<()> {
        if !p.is_strict() {
            return Err(Error::InvalidPath(format!("extracted path is not strict: {:?}", p.validate().failures)));
        }
        if !paths.contains(&p) {
            paths.push(p);
        }
        Ok(())
    };
    for s in split_simple(v, &cls)? {
        let g = s.a_stars.len();
        let anchor = ElementaryPath::new(
            a0.clone(),
            as0.clone(),
            s.a_stars[g - 1].clone(),
            s.c_stars[g - 1].clone(),
            s.cs[0].clone(),
            s.as_[0].clone(),
        );
        let k0 = hull2(&anchor.vertices().map(Clone::clone))?;
        push(anchor)?;
        for i in 0..g - 1 {
            if geom::hull_contains(&k0, &s.c_stars[i]) {
                continue;
            }
            let ct = line_intersect(&e(1), &a0, &s.c_stars[i], &s.a_stars[i + 1])
                .ok_or_else(|| Error::InvalidChain("no crossing with the line e1 A0".into()))?;
            push(ElementaryPath::new(a0.clone(), as0.clone(), s.a_stars[i].clone(), s.c_stars[i].clone(), ct, a0.clone()))?;
        }
        // s.cs[t] sits between s.as_[t-1] and s.as_[t]
        for t in 1..s.cs.len() {
            if geom::hull_contains(&k0, &s.cs[t]) {
                continue;
            }
            let cst = line_intersect(&e(3), &as0, &s.as_[t - 1], &s.cs[t])
                .ok_or_else(|| Error::InvalidChain("no crossing with the line e3 A*0".into()))?;
            push(ElementaryPath::new(a0.clone(), as0.clone(), as0.clone(), cst, s.cs[t].clone(), s.as_[t].clone()))?;
        }
    }
    let all: Vec<Point> = paths.iter().flat_map(|p| p.vertices().map(Clone::clone)).collect();
    if hull2(&all)? != hull2(v)? {
        return Err(Error::InvalidChain("extracted paths do not cover the chain hull".into()));
    }
    Ok(paths)
}
