//! The six-exponent spectrum in dimension 3: membership, path constructions, realization, sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::geom::{self, e, f1, line_intersect, proj1, proj3};
use crate::arith::{q, Point, Rational};
use crate::chains::{densify_auto, join_chains, system_from_chain, ClosedChain, ElementaryPath};
use crate::error::{Error, Result};
use crate::exponents::six_exponents;
use crate::nsystem::NSystem;

/// (lower; upper) = (α̲1, α̲2, α̲3; ᾱ1, ᾱ2, ᾱ3).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumPoint6 {
    pub lower: Point,
    pub upper: Point,
}

impl SpectrumPoint6 {
    pub fn new(lower: Point, upper: Point) -> Result<Self> {
        lower.check_dim(3)?;
        upper.check_dim(3)?;
        Ok(SpectrumPoint6 { lower, upper })
    }

    /// From (α̲1, α̲2, α̲3, ᾱ1, ᾱ2, ᾱ3).
    pub fn from_six(v: [Rational; 6]) -> Self {
        let [a, b, c, d, e, f] = v;
        SpectrumPoint6 { lower: Point(vec![a, b, c]), upper: Point(vec![d, e, f]) }
    }

    pub fn fracs(v: [(i64, i64); 6]) -> Self {
        Self::from_six(v.map(|(n, d)| q(n, d)))
    }

    pub fn all_third() -> Self {
        Self::fracs([(1, 3); 6])
    }

    pub fn six(&self) -> [Rational; 6] {
        [
            self.lower[0].clone(),
            self.lower[1].clone(),
            self.lower[2].clone(),
            self.upper[0].clone(),
            self.upper[1].clone(),
            self.upper[2].clone(),
        ]
    }

    pub fn dualize(&self) -> Self {
        let [l1, l2, l3, u1, u2, u3] = self.six();
        Self::from_six([u3, u2, u1, l3, l2, l1])
    }

    pub fn dist_inf(&self, o: &SpectrumPoint6) -> Rational {
        Rational::max_of(&self.lower.dist_inf(&o.lower), &self.upper.dist_inf(&o.upper))
    }

    fn check(&self) -> Result<()> {
        self.lower.check_dim(3)?;
        self.upper.check_dim(3)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
}

impl Relation {
    fn flip(self) -> Self {
        match self {
            Relation::Le => Relation::Ge,
            Relation::Ge => Relation::Le,
            Relation::Eq => Relation::Eq,
        }
    }

    fn holds(self, l: &Rational, r: &Rational) -> bool {
        match self {
            Relation::Le => l <= r,
            Relation::Ge => l >= r,
            Relation::Eq => l == r,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Atom {
    pub name: String,
    pub lhs: Rational,
    pub relation: Relation,
    pub rhs: Rational,
    pub satisfied: bool,
    pub equality: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintReport {
    pub satisfied: bool,
    pub atoms: Vec<Atom>,
}

impl ConstraintReport {
    fn from_atoms(atoms: Vec<Atom>) -> Self {
        ConstraintReport { satisfied: atoms.iter().all(|a| a.satisfied), atoms }
    }

    pub fn atom(&self, name: &str) -> Option<&Atom> {
        self.atoms.iter().find(|a| a.name == name)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.atoms.iter().filter(|a| !a.satisfied).map(|a| a.name.as_str()).collect()
    }

    pub fn equalities(&self) -> Vec<&str> {
        self.atoms.iter().filter(|a| a.equality).map(|a| a.name.as_str()).collect()
    }
}

pub fn beta(l1: &Rational, u2: &Rational) -> Rational {
    let one = Rational::one();
    l1 * u2 + (&one - u2 * q(2, 1)) * (&one - u2)
}

pub fn gamma(l1: &Rational, u1: &Rational, u2: &Rational) -> Rational {
    let one = Rational::one();
    let two = Rational::int(2);
    l1 * (&one - u1) * (&one - u2) + (&one - l1) * (&one - &two * u1) * (&one - &two * u2)
}

/// The atoms of eq1..eq7 evaluated on `a`; `cf` is the constant closing eq1.
fn atoms(a: &SpectrumPoint6, cf: Rational, dual: bool) -> Vec<Atom> {
    let [l1, l2, _l3, u1, u2, u3] = a.six();
    let l3 = &a.lower[2];
    let one = Rational::one();
    let two = Rational::int(2);
    let third = q(1, 3);
    let b = beta(&l1, &u2);
    let g = gamma(&l1, &u1, &u2);
    let half_rest = (&one - &l1) * q(1, 2);
    use Relation::*;
    let raw: Vec<(&str, Rational, Relation, Rational)> = vec![
        ("eq1a", l1.clone(), Le, u1.clone()),
        ("eq1b", u1.clone(), Le, third.clone()),
        ("eq1c", third, Le, l3.clone()),
        ("eq1d", l3.clone(), Le, u2.clone()),
        ("eq1e", u2.clone(), Le, half_rest.clone()),
        ("eq1f", half_rest, Le, cf),
        ("eq2", (&one - &two * &u1) * (&one - &two * l3), Eq, &u1 * l3),
        ("eq3", (&l1 + &two * &u1 - q(3, 1) * &l1 * &u1) * &u2, Le, (&one - &l1) * &u1),
        ("eq4a", l2.clone(), Le, u1.clone()),
        ("eq4b", (&one - &l1 + &u2) * &l2, Le, u2.clone()),
        ("eq5a", &b * &l2, Le, &l1 * &u2),
        ("eq5b", &g * &l2, Le, (&one - &u1) * &l1 * &u2),
        ("eq6a", &b * &u3, Ge, (&one - &two * &u2) * (&one - &l1 - &u2)),
        ("eq6b", &g * &u3, Ge, (&one - &l1) * (&one - &two * &u1) * (&one - &two * &u2)),
        ("eq7", (&one - &u1) * &u3, Ge, (&one - &l1) * (&one - &two * &u1)),
    ];
    raw.into_iter()
        .map(|(n, lhs, rel, rhs)| {
            let relation = if dual { rel.flip() } else { rel };
            Atom {
                name: if dual { format!("dual-{n}") } else { n.to_string() },
                satisfied: relation.holds(&lhs, &rhs),
                equality: lhs == rhs,
                lhs,
                relation,
                rhs,
            }
        })
        .collect()
}

pub fn check_primal(a: &SpectrumPoint6) -> ConstraintReport {
    ConstraintReport::from_atoms(atoms(a, q(1, 2), false))
}

/// The primal expressions on the symbol-swapped point, with relations reversed and the closing constant 0.
pub fn check_dual(a: &SpectrumPoint6) -> ConstraintReport {
    ConstraintReport::from_atoms(atoms(&a.dualize(), Rational::zero(), true))
}

pub fn sum_bound(a: &SpectrumPoint6) -> Atom {
    let lhs = &a.lower[1] + &a.upper[2];
    let rhs = Rational::one();
    Atom {
        name: "sum-bound".into(),
        satisfied: lhs <= rhs,
        equality: lhs == rhs,
        lhs,
        relation: Relation::Le,
        rhs,
    }
}

pub fn membership(a: &SpectrumPoint6) -> (bool, ConstraintReport) {
    let mut all = check_primal(a).atoms;
    all.extend(check_dual(a).atoms);
    all.push(sum_bound(a));
    let r = ConstraintReport::from_atoms(all);
    (r.satisfied, r)
}

pub fn is_member(a: &SpectrumPoint6) -> bool {
    membership(a).0
}

/// The α̲3 on the curve J above ᾱ1: (1 - 2a)/(2 - 3a).
pub fn jarnik_solve(abar1: &Rational) -> Result<Rational> {
    if abar1.is_negative() || *abar1 > q(1, 3) {
        return Err(Error::Domain(format!("{abar1} is outside [0, 1/3]")));
    }
    let one = Rational::one();
    Ok((&one - abar1 * q(2, 1)) / (Rational::int(2) - abar1 * q(3, 1)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathConstruction {
    pub exists: bool,
    pub branch: String,
    pub path: Option<ElementaryPath>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl PathConstruction {
    fn none(branch: &str, note: String) -> Self {
        PathConstruction { exists: false, branch: branch.into(), path: None, checks: vec![], notes: vec![note] }
    }

    pub fn strict(&self) -> bool {
        self.exists && self.path.as_ref().is_some_and(ElementaryPath::is_strict)
    }
}

fn pt(a: Rational, b: Rational, c: Rational) -> Point {
    Point(vec![a, b, c])
}

fn finish(path: ElementaryPath, branch: &str, mut checks: Vec<(&str, bool)>, notes: Vec<String>) -> PathConstruction {
    let rep = path.validate();
    checks.insert(0, ("geometry", rep.valid));
    let exists = checks.iter().all(|c| c.1);
    let mut notes = notes;
    notes.extend(rep.failures);
    PathConstruction {
        exists,
        branch: branch.into(),
        path: Some(path),
        checks: checks.into_iter().map(|(n, ok)| Check { name: n.into(), ok }).collect(),
        notes,
    }
}

/// The elementary path with x1(A)=ᾱ1, x3(A*)=α̲3, x2(B*)=ᾱ2, x1(C)=α̲1.
pub fn construct_path_lower(a: &SpectrumPoint6) -> Result<PathConstruction> {
    a.check()?;
    let [l1, l2, l3, u1, u2, u3] = a.six();
    let one = Rational::one();
    let two = Rational::int(2);
    let pa = pt(u1.clone(), u1.clone(), &one - &two * &u1);
    let pas = pt(&one - &two * &l3, l3.clone(), l3.clone());
    let pbs = pt(&one - &two * &u2, u2.clone(), u2.clone());
    let pd = pt(l1.clone(), l1.clone(), &one - &two * &l1);
    let pe = pt(l1.clone(), u2.clone(), &one - &l1 - &u2);
    let pf = (&one - &u1).recip().ok().map(|r| {
        pt(l1.clone(), (&one - &l1) * &u1 * &r, (&one - &l1) * (&one - &two * &u1) * &r)
    });
    let Some(pf) = pf else {
        return Ok(PathConstruction::none("undefined", "F is undefined at ᾱ1 = 1".into()));
    };
    let pg = proj1(&pe);
    let (branch, b, c, cs) = if u2 == q(1, 2) {
        ("B=A, C=C*=F", pa.clone(), pf.clone(), Some(pf.clone()))
    } else if pg.as_ref().is_some_and(|g| pd[0] <= g[0] && g[0] < pa[0]) {
        let g = pg.unwrap();
        ("B=G, C=E", g, pe.clone(), line_intersect(&e(3), &pbs, &e(2), &pe))
    } else {
        ("B=A, C=F", pa.clone(), pf.clone(), line_intersect(&e(3), &pbs, &e(2), &pf))
    };
    let Some(cs) = cs else {
        return Ok(PathConstruction::none(branch, "C* is undefined".into()));
    };
    let path = ElementaryPath::new(pa, pas, pbs, cs, c, b);
    let p = &path;
    let checks = vec![
        ("x1(A)=abar1", p.a[0] == u1),
        ("x3(A*)=alow3", p.a_star[2] == l3),
        ("x2(B*)=abar2", p.b_star[1] == u2),
        ("x1(C)=alow1", p.c[0] == l1),
        ("x2(C)<=abar2", p.c[1] <= u2),
        ("x2(B)>=alow2", p.b[1] >= l2),
        ("x2(C*)>=alow2", p.c_star[1] >= l2),
        ("x3(C*)<=abar3", p.c_star[2] <= u3),
        ("x2(C)=abar2 or B=A", p.c[1] == u2 || p.b == p.a),
        ("B*=f1 implies B=A, C*=C", p.b_star != f1() || (p.b == p.a && p.c_star == p.c)),
    ];
    Ok(finish(path, branch, checks, vec![]))
}

/// The elementary path with x1(A)=ᾱ1, x3(A*)=α̲3, x2(B)=α̲2, x3(C*)=ᾱ3.
pub fn construct_path_upper(a: &SpectrumPoint6) -> Result<PathConstruction> {
    a.check()?;
    let [l1, l2, l3, u1, u2, u3] = a.six();
    let one = Rational::one();
    let two = Rational::int(2);
    let half = q(1, 2);
    let mut notes = Vec::new();
    let pa = pt(u1.clone(), u1.clone(), &one - &two * &u1);
    let pas = pt(&one - &two * &l3, l3.clone(), l3.clone());
    let pb = pt(l2.clone(), l2.clone(), &one - &two * &l2);
    let ds_on_lstar = u3 <= half;
    let pds = if ds_on_lstar {
        pt(&one - &two * &u3, u3.clone(), u3.clone())
    } else {
        notes.push("D* on [f1,f3]".to_string());
        pt(Rational::zero(), &one - &u3, u3.clone())
    };
    let pes = pt(&one - &l2 - &u3, l2.clone(), u3.clone());
    let pfs = (&one - &l3).recip().ok().map(|r| {
        pt((&one - &u3) * (&one - &two * &l3) * &r, (&one - &u3) * &l3 * &r, u3.clone())
    });
    let Some(pfs) = pfs else {
        return Ok(PathConstruction::none("undefined", "F* is undefined at alow3 = 1".into()));
    };
    let pgs = proj3(&pes);
    let in_range = |g: &Point| g[0] < pas[0] && (!ds_on_lstar || g[0] >= pds[0]);
    let (branch, bs, cs, c) = if l2.is_zero() {
        ("B*=A*, C=C*=F*", pas.clone(), pfs.clone(), Some(pfs.clone()))
    } else if pgs.as_ref().is_some_and(in_range) {
        let g = pgs.unwrap();
        ("B*=G*, C*=E*", g, pes.clone(), line_intersect(&e(1), &pb, &e(2), &pes))
    } else {
        ("B*=A*, C*=F*", pas.clone(), pfs.clone(), line_intersect(&e(1), &pb, &e(2), &pfs))
    };
    let Some(c) = c else {
        return Ok(PathConstruction::none(branch, "C is undefined".into()));
    };
    let path = ElementaryPath::new(pa, pas, bs, cs, c, pb);
    let p = &path;
    let checks = vec![
        ("x1(A)=abar1", p.a[0] == u1),
        ("x3(A*)=alow3", p.a_star[2] == l3),
        ("x2(B)=alow2", p.b[1] == l2),
        ("x3(C*)=abar3", p.c_star[2] == u3),
        ("x2(C*)>=alow2", p.c_star[1] >= l2),
        ("x2(B*)<=abar2", p.b_star[1] <= u2),
        ("x2(C)<=abar2", p.c[1] <= u2),
        ("x1(C)>=alow1", p.c[0] >= l1),
        ("x2(C*)=alow2 or B*=A*", p.c_star[1] == l2 || p.b_star == p.a_star),
        ("B=f3 implies B*=A*, C=C*", p.b != geom::f3() || (p.b_star == p.a_star && p.c == p.c_star)),
    ];
    Ok(finish(path, branch, checks, notes))
}

#[derive(Clone, Debug, Serialize)]
pub struct Realization {
    pub system: NSystem,
    pub chain: ClosedChain,
    pub exact: bool,
    /// The point actually realized; differs from the request only when approximate.
    pub target: SpectrumPoint6,
    pub achieved: SpectrumPoint6,
    pub distance: Rational,
}

/// Exact realization through the two strict paths; `None` when either path is missing or not strict.
pub fn realize_exact(a: &SpectrumPoint6) -> Result<Option<(NSystem, ClosedChain)>> {
    let lo = construct_path_lower(a)?;
    let up = construct_path_upper(a)?;
    if !lo.strict() || !up.strict() {
        return Ok(None);
    }
    let c1 = densify_auto(lo.path.as_ref().unwrap())?;
    let c2 = densify_auto(up.path.as_ref().unwrap())?;
    let chain = join_chains(&c1, &c2)?;
    let s = system_from_chain(&chain)?;
    let got = six_exponents(&s)?;
    if got != *a {
        return Err(Error::Precondition(format!("realized exponents {got:?} differ from the request")));
    }
    Ok(Some((s, chain)))
}

/// Members with strict paths on both sides, used as inward directions.
pub fn reference_points() -> Vec<SpectrumPoint6> {
    vec![
        SpectrumPoint6::fracs([(1, 7), (1, 4), (2, 5), (1, 4), (2, 5), (4, 7)]),
        SpectrumPoint6::fracs([(55, 288), (5401, 20736), (14, 39), (11, 36), (5251, 13824), (223, 432)]),
        SpectrumPoint6::fracs([(7, 144), (707, 6912), (10, 27), (7, 24), (8317, 20736), (239, 288)]),
    ]
}

/// Convex combination (1-eps) a + eps r with α̲3 snapped back onto J.
pub fn shrink_toward(a: &SpectrumPoint6, r: &SpectrumPoint6, eps: &Rational) -> Result<SpectrumPoint6> {
    let lerp = |x: &Point, y: &Point| y.lerp(x, eps);
    let mut out = SpectrumPoint6 { lower: lerp(&a.lower, &r.lower), upper: lerp(&a.upper, &r.upper) };
    out.lower.0[2] = jarnik_solve(&out.upper[0])?;
    Ok(out)
}

/// Exact witness when both paths are strict; otherwise a witness for a nearby member within `tol`.
pub fn realize(a: &SpectrumPoint6, tol: &Rational) -> Result<Realization> {
    a.check()?;
    if !is_member(a) {
        return Err(Error::NotMember);
    }
    if let Some((system, chain)) = realize_exact(a)? {
        return Ok(Realization {
            system,
            chain,
            exact: true,
            target: a.clone(),
            achieved: a.clone(),
            distance: Rational::zero(),
        });
    }
    let mut eps = tol.clone();
    for _ in 0..20 {
        for r in reference_points() {
            let b = shrink_toward(a, &r, &eps)?;
            if !is_member(&b) || b.dist_inf(a) > *tol {
                continue;
            }
            if let Ok(Some((system, chain))) = realize_exact(&b) {
                let distance = b.dist_inf(a);
                return Ok(Realization { system, chain, exact: false, achieved: b.clone(), target: b, distance });
            }
        }
        eps = eps * q(1, 2);
    }
    Err(Error::NoPath("no strict perturbation found within the tolerance".into()))
}

/// (α̲1-ε³+δ2, α̲2-η²-δ3, α̲3-η, ᾱ1+ε, ᾱ2+ε²+δ1, ᾱ3+η³+δ4) with α̲3-η = J(ᾱ1+ε).
pub fn perturb(a: &SpectrumPoint6, eps: &Rational, d: &[Rational; 4]) -> Result<SpectrumPoint6> {
    let [l1, l2, l3, u1, u2, u3] = a.six();
    let nu1 = &u1 + eps;
    let nl3 = jarnik_solve(&nu1)?;
    let eta = &l3 - &nl3;
    Ok(SpectrumPoint6::from_six([
        &l1 - eps.pow(3) + &d[1],
        &l2 - eta.pow(2) - &d[2],
        nl3,
        nu1,
        &u2 + eps.pow(2) + &d[0],
        &u3 + eta.pow(3) + &d[3],
    ]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Witness {
    Box,
    Canvas,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sample {
    pub point: SpectrumPoint6,
    pub member: bool,
    pub witness: Witness,
}

const GRID: i64 = 48;

fn uniform(rng: &mut ChaCha8Rng, lo: &Rational, hi: &Rational) -> Rational {
    let k = rng.gen_range(0..=GRID);
    lo + (hi - lo) * q(k, GRID)
}

/// ᾱ1 on a grid, α̲3 on J, the other four in their eq1 and dual-eq1 boxes.
pub fn sample_box(rng: &mut ChaCha8Rng) -> SpectrumPoint6 {
    let zero = Rational::zero();
    let one = Rational::one();
    let u1 = uniform(rng, &zero, &q(1, 3));
    let l3 = jarnik_solve(&u1).expect("grid stays in range");
    let l1 = uniform(rng, &zero, &u1);
    let u2 = uniform(rng, &l3, &((&one - &l1) * q(1, 2)));
    let u3 = uniform(rng, &Rational::max_of(&l3, &(&one - &u1 * q(2, 1))), &one);
    let l2 = uniform(rng, &((&one - &u3) * q(1, 2)), &u1);
    SpectrumPoint6::from_six([l1, l2, l3, u1, u2, u3])
}

fn index_rng(seed: u64, i: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    rng
}

/// Even indices sample the box, odd indices sample random strict periodic canvases.
pub fn sample_spectrum(count: usize, seed: u64) -> Vec<Sample> {
    (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = index_rng(seed, i);
            if i % 2 == 0 {
                let point = sample_box(&mut rng);
                Sample { member: is_member(&point), point, witness: Witness::Box }
            } else {
                loop {
                    let c = crate::random::random_periodic_canvas3(&mut rng);
                    if let Ok(point) = c.build_system().and_then(|s| six_exponents(&s)) {
                        return Sample { member: is_member(&point), point, witness: Witness::Canvas };
                    }
                }
            }
        })
        .collect()
}

pub fn samples_csv(samples: &[Sample]) -> Result<String> {
    let names = ["alow1", "alow2", "alow3", "abar1", "abar2", "abar3"];
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    header.extend(names.iter().map(|s| format!("{s}_exact")));
    header.push("member".into());
    header.push("witness".into());
    let err = |e: csv::Error| Error::Parse(e.to_string());
    w.write_record(&header).map_err(err)?;
    for s in samples {
        let six = s.point.six();
        let mut row: Vec<String> = six.iter().map(|x| x.to_decimal(12)).collect();
        row.extend(six.iter().map(|x| x.to_string()));
        row.push(s.member.to_string());
        row.push(match s.witness {
            Witness::Box => "box".into(),
            Witness::Canvas => "canvas".into(),
        });
        w.write_record(&row).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}
