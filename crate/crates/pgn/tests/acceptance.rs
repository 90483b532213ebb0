//! Acceptance criteria; one PASS/FAIL line each.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use pgn::arith::{q, Point, Rational};
use pgn::canvas::Canvas;
use pgn::chains::{chain_from_system, join_chains, system_from_chain, ClosedChain};
use pgn::deform::{extend_to, extension_drift};
use pgn::exponents::six_exponents;
use pgn::nsystem::{EventKind, NSystem};
use pgn::power::power_transform;
use pgn::random::{random_finite_canvas, random_periodic_canvas3};
use pgn::spectrum::{
    check_dual, check_primal, construct_path_lower, construct_path_upper, is_member, jarnik_solve, membership,
    realize, sample_box, sum_bound, SpectrumPoint6,
};

const POWER_TOL: f64 = 1e-9;
const POWER_LIMIT_TOL: f64 = 1e-2;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_nine_point() -> Outcome {
    let canvas = Canvas::nine_point();
    let s = canvas.build_system().map_err(|e| e.to_string())?;
    let switches: Vec<usize> = (0..s.events.len())
        .filter(|&i| matches!(s.kind_at(i), Some(EventKind::Switch | EventKind::Boundary)))
        .collect();
    let qs: Vec<Rational> = switches.iter().map(|&i| s.events[i].q.clone()).collect();
    let want: Vec<Rational> = [7, 11, 13, 16, 27, 29, 40, 44, 49].iter().map(|&k| Rational::int(k)).collect();
    ensure(qs == want, || format!("switch numbers {qs:?}"))?;
    for (i, p) in switches.iter().zip(&canvas.points) {
        ensure(s.events[*i].value == *p, || format!("P({}) = {}", s.events[*i].q, s.events[*i].value))?;
    }
    let t = canvas.validate(true).transitions;
    let want_t = vec![(1, 3), (2, 3), (2, 3), (2, 3), (2, 2), (1, 2), (1, 2), (1, 3)];
    ensure(t == want_t, || format!("transitions {t:?}"))?;
    Ok("9 switch numbers, values and transitions exact".into())
}

fn pts(v: &[&[i64]]) -> Vec<Point> {
    v.iter().map(|r| Point::ints(r)).collect()
}

fn c2_extension() -> Outcome {
    let p = Canvas::from_ints(&[&[1, 3, 9, 12], &[1, 3, 12, 15], &[1, 6, 12, 15], &[6, 9, 12, 15]])
        .with_mesh(Rational::one())
        .build_system()
        .map_err(|e| e.to_string())?;
    let ext = extend_to(&p, &Point::ints(&[8, 12, 16, 20])).map_err(|e| e.to_string())?;
    let want = [
        pts(&[&[1, 3, 9, 12], &[1, 3, 12, 20], &[1, 6, 12, 20], &[6, 9, 12, 20]]),
        pts(&[&[1, 3, 9, 12], &[1, 3, 12, 20], &[1, 3, 16, 20], &[1, 6, 16, 20], &[6, 9, 16, 20]]),
        pts(&[&[1, 3, 9, 12], &[1, 3, 12, 20], &[1, 3, 16, 20], &[1, 6, 16, 20], &[6, 12, 16, 20]]),
        pts(&[&[1, 3, 9, 12], &[1, 3, 12, 20], &[1, 3, 16, 20], &[1, 6, 16, 20], &[6, 12, 16, 20], &[8, 12, 16, 20]]),
    ];
    ensure(ext.passes.len() == 4, || format!("{} passes", ext.passes.len()))?;
    for ((m, c), w) in ext.passes.iter().zip(&want) {
        ensure(c.points == *w, || format!("pass m={m}: {:?}", c.points))?;
    }
    let dom = (ext.system.domain.lo.clone(), ext.system.domain.hi.clone());
    ensure(dom == (Rational::int(25), Some(Rational::int(56))), || format!("domain {dom:?}"))?;
    Ok("P(4)..P(1) exact, domain [25,56]".into())
}

fn random_target(rng: &mut ChaCha8Rng, pv: &Point) -> Point {
    let mut bump = 0;
    let v = pv
        .0
        .iter()
        .map(|x| {
            bump += rng.gen_range(0..=4);
            x + Rational::int(bump)
        })
        .collect();
    Point(v)
}

fn c3_sandwich() -> Outcome {
    let results: Vec<Result<bool, String>> = (0..500u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(3_000 + i);
            let n = 3 + (i % 2) as usize;
            let steps = rng.gen_range(6..=24);
            let p = random_finite_canvas(&mut rng, n, steps)
                .with_mesh(Rational::one())
                .build_system()
                .map_err(|e| format!("system {i}: {e}"))?;
            let pv = p.eval(p.domain.hi.as_ref().unwrap()).map_err(|e| e.to_string())?;
            let c = random_target(&mut rng, &pv);
            let ext = extend_to(&p, &c).map_err(|e| format!("system {i}: {e}"))?;
            if !ext.report.ok() {
                return Err(format!("system {i}: {:?}", ext.report));
            }
            let drift = extension_drift(&p, &ext).map_err(|e| e.to_string())?;
            match (drift.within, drift.bound) {
                (Some(false), Some(b)) => Err(format!("system {i}: drift {} > {b}", drift.dist)),
                (Some(true), _) => Ok(true),
                _ => Ok(false),
            }
        })
        .collect();
    let mut drift_checked = 0;
    for r in results {
        drift_checked += r? as usize;
    }
    Ok(format!("500 systems; drift bound applicable and held in {drift_checked}"))
}

fn a124() -> SpectrumPoint6 {
    SpectrumPoint6::fracs([(1, 7), (1, 4), (2, 5), (1, 4), (2, 5), (4, 7)])
}

fn c4_selfsimilar() -> Outcome {
    let s = Canvas::periodic(pts(&[&[1, 2, 4], &[2, 4, 8]]), 0, Rational::int(2))
        .build_system()
        .map_err(|e| e.to_string())?;
    let got = six_exponents(&s).map_err(|e| e.to_string())?;
    ensure(got == a124(), || format!("exponents {:?}", got.six()))?;
    let (member, rep) = membership(&got);
    ensure(member, || format!("failed {:?}", rep.failed()))?;
    let eqs = rep.equalities();
    for name in ["eq3", "eq6b", "eq7", "dual-eq3", "dual-eq6b", "dual-eq7"] {
        ensure(eqs.contains(&name), || format!("{name} not an equality; equalities {eqs:?}"))?;
    }
    Ok(format!("exponents exact; equalities {eqs:?}"))
}

fn c5_jarnik() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let one = Rational::one();
    let two = Rational::int(2);
    ensure(jarnik_solve(&Rational::zero()).ok() == Some(q(1, 2)), || "0 does not map to 1/2".into())?;
    ensure(jarnik_solve(&q(1, 3)).ok() == Some(q(1, 3)), || "1/3 does not map to 1/3".into())?;
    for _ in 0..100 {
        let den = rng.gen_range(1..=10_000i64);
        let x = q(rng.gen_range(0..=den), 3 * den);
        let y = jarnik_solve(&x).map_err(|e| e.to_string())?;
        // (1-2y)(1-2x) = xy with y = alow3, x = abar1
        ensure((&one - &two * &y) * (&one - &two * &x) == &x * &y, || format!("curve fails at {x}"))?;
        let a = SpectrumPoint6::from_six([Rational::zero(), x.clone(), y.clone(), x.clone(), y.clone(), one.clone()]);
        let eq2 = check_primal(&a).atom("eq2").cloned().ok_or("no eq2 atom")?;
        ensure(eq2.satisfied && eq2.equality, || format!("eq2 not tight at {x}: {eq2:?}"))?;
    }
    Ok("100 points on the curve, eq2 tight".into())
}

fn grid(rng: &mut ChaCha8Rng, lo: &Rational, hi: &Rational) -> Rational {
    lo + (hi - lo) * q(rng.gen_range(0..=24), 24)
}

/// ᾱ1 on a grid with α̲3 snapped to the curve; the rest loosely ordered.
fn wide_sample(rng: &mut ChaCha8Rng) -> SpectrumPoint6 {
    let zero = Rational::zero();
    let one = Rational::one();
    let u1 = grid(rng, &zero, &q(1, 3));
    let l3 = jarnik_solve(&u1).expect("in range");
    let l1 = grid(rng, &zero, &u1);
    let u2 = grid(rng, &q(1, 3), &q(1, 2));
    let u3 = grid(rng, &l3, &one);
    let l2 = grid(rng, &l1, &q(1, 2));
    SpectrumPoint6::from_six([l1, l2, l3, u1, u2, u3])
}

fn c6_equivalence() -> Outcome {
    let mut counts = [0usize; 4];
    for i in 0..1000u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(6_000 + i);
        let a = if i % 2 == 0 { sample_box(&mut rng) } else { wide_sample(&mut rng) };
        let primal = check_primal(&a).satisfied;
        let lower = construct_path_lower(&a).map_err(|e| e.to_string())?.exists;
        ensure(primal == lower, || format!("lower mismatch at {:?}: eq={primal} path={lower}", a.six()))?;
        let dual = check_dual(&a).satisfied && sum_bound(&a).satisfied;
        let upper = construct_path_upper(&a).map_err(|e| e.to_string())?.exists;
        ensure(dual == upper, || format!("upper mismatch at {:?}: eq={dual} path={upper}", a.six()))?;
        counts[primal as usize] += 1;
        counts[2 + dual as usize] += 1;
    }
    Ok(format!(
        "1000 points agree; primal yes/no {}/{}, dual yes/no {}/{}",
        counts[1], counts[0], counts[3], counts[2]
    ))
}

fn c7_necessity() -> Outcome {
    let res: Result<Vec<()>, String> = (0..500u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(7_000 + i);
            let c = random_periodic_canvas3(&mut rng);
            let s = c.build_system().map_err(|e| format!("canvas {i}: {e}"))?;
            chain_from_system(&s).map_err(|e| format!("canvas {i}: {e}"))?;
            let a = six_exponents(&s).map_err(|e| format!("canvas {i}: {e}"))?;
            ensure(is_member(&a), || format!("canvas {i}: {:?} not a member", a.six()))
        })
        .collect();
    res.map(|v| format!("{} canvases, all members", v.len()))
}

/// Seeded interior members with strict paths on both sides.
fn interior_members(count: usize, seed: u64) -> Vec<SpectrumPoint6> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < count {
        let a = sample_box(&mut rng);
        let strict = |a: &SpectrumPoint6| {
            construct_path_lower(a).map(|p| p.strict()).unwrap_or(false)
                && construct_path_upper(a).map(|p| p.strict()).unwrap_or(false)
        };
        if is_member(&a) && strict(&a) && !out.contains(&a) {
            out.push(a);
        }
    }
    out
}

fn realized(points: &[SpectrumPoint6]) -> Result<Vec<(NSystem, ClosedChain)>, String> {
    points
        .par_iter()
        .map(|a| {
            let r = realize(a, &Rational::zero()).map_err(|e| format!("{:?}: {e}", a.six()))?;
            if !r.exact {
                return Err(format!("{:?}: not realized exactly", a.six()));
            }
            Ok((r.system, r.chain))
        })
        .collect()
}

fn c8_realization(members: &[SpectrumPoint6]) -> Result<(String, Vec<(NSystem, ClosedChain)>), String> {
    let out = realized(members)?;
    for (a, (s, _)) in members.iter().zip(&out) {
        let got = six_exponents(s).map_err(|e| e.to_string())?;
        ensure(got == *a, || format!("{:?} realized as {:?}", a.six(), got.six()))?;
        let back = system_from_chain(&chain_from_system(s).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let again = six_exponents(&back).map_err(|e| e.to_string())?;
        ensure(again == *a, || format!("{:?}: round trip gives {:?}", a.six(), again.six()))?;
    }
    Ok((format!("{} members realized exactly, round trips preserved", out.len()), out))
}

fn c9_closure(members: &[SpectrumPoint6], sys: &[(NSystem, ClosedChain)]) -> Outcome {
    let half = members.len() / 2;
    let res: Result<Vec<()>, String> = (0..half)
        .into_par_iter()
        .map(|i| {
            let (a, b) = (&members[i], &members[i + half]);
            let joined = join_chains(&sys[i].1, &sys[i + half].1).map_err(|e| e.to_string())?;
            let s = system_from_chain(&joined).map_err(|e| e.to_string())?;
            let got = six_exponents(&s).map_err(|e| e.to_string())?;
            let lower = Point((0..3).map(|j| Rational::min_of(&a.lower[j], &b.lower[j])).collect());
            let upper = Point((0..3).map(|j| Rational::max_of(&a.upper[j], &b.upper[j])).collect());
            let want = SpectrumPoint6::new(lower, upper).map_err(|e| e.to_string())?;
            ensure(got == want, || format!("pair {i}: {:?} vs {:?}", got.six(), want.six()))
        })
        .collect();
    res.map(|v| format!("{} pairs joined exactly", v.len()))
}

fn c10_power() -> Outcome {
    let third = 1.0 / 3.0;
    let mut worst_limit: f64 = 0.0;
    for i in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(10_000 + i);
        let s = random_periodic_canvas3(&mut rng).build_system().map_err(|e| e.to_string())?;
        for lambda in [1.0, 0.5, 0.1, 1e-3] {
            let p = power_transform(&s, lambda).map_err(|e| e.to_string())?;
            let f = p.validate(POWER_TOL);
            ensure(f.is_empty(), || format!("system {i}, lambda {lambda}: {f:?}"))?;
            for (e, fe) in s.events.iter().zip(&p.events) {
                for (a, b) in e.value.iter().zip(&fe.value) {
                    let want = a.to_f64().powf(lambda);
                    ensure((want - b).abs() <= POWER_TOL * want.max(1.0), || format!("image mismatch at {}", e.q))?;
                }
            }
            if lambda == 1e-3 {
                for v in p.ratio_vertices() {
                    let d = v.iter().map(|x| (x - third).abs()).fold(0.0, f64::max);
                    worst_limit = worst_limit.max(d);
                }
            }
        }
    }
    ensure(worst_limit <= POWER_LIMIT_TOL, || format!("vertex at distance {worst_limit:e} from the centre"))?;
    Ok(format!("50 systems x 4 exponents valid; lambda=1e-3 vertices within {worst_limit:.2e}"))
}

fn report(id: usize, limit: Duration, start: Instant, out: Outcome) -> bool {
    let t = start.elapsed();
    let (ok, msg) = match out {
        Ok(m) if t <= limit => (true, m),
        Ok(m) => (false, format!("{m}; too slow")),
        Err(m) => (false, m),
    };
    println!("{} criterion {id:>2} ({:.2}s / {}s): {msg}", if ok { "PASS" } else { "FAIL" }, t.as_secs_f64(), limit.as_secs());
    ok
}

fn main() -> ExitCode {
    let s = |x| Duration::from_secs(x);
    let mut ok = true;
    let t = Instant::now();
    ok &= report(1, s(1), t, c1_nine_point());
    let t = Instant::now();
    ok &= report(2, s(1), t, c2_extension());
    let t = Instant::now();
    ok &= report(3, s(30), t, c3_sandwich());
    let t = Instant::now();
    ok &= report(4, s(1), t, c4_selfsimilar());
    let t = Instant::now();
    ok &= report(5, s(1), t, c5_jarnik());
    let t = Instant::now();
    ok &= report(6, s(60), t, c6_equivalence());
    let t = Instant::now();
    ok &= report(7, s(60), t, c7_necessity());
    let t = Instant::now();
    let members = interior_members(200, 8);
    let (out8, systems) = match c8_realization(&members) {
        Ok((m, v)) => (Ok(m), v),
        Err(e) => (Err(e), Vec::new()),
    };
    ok &= report(8, s(120), t, out8);
    let t = Instant::now();
    let out9 = if systems.len() == members.len() {
        c9_closure(&members, &systems)
    } else {
        Err("realizations unavailable".into())
    };
    ok &= report(9, s(60), t, out9);
    let t = Instant::now();
    ok &= report(10, s(30), t, c10_power());
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
