//! Seeded generators of random strict canvases.

use rand::Rng;

use crate::arith::{Point, Rational};
use crate::canvas::{transition, Canvas};

fn ints(v: &[i64]) -> Point {
    Point::ints(v)
}

/// Strict periodic integral 3-canvas closing with three (1,3) moves onto rho times its first point.
pub fn random_periodic_canvas3<R: Rng>(rng: &mut R) -> Canvas {
    let a1 = rng.gen_range(1..=4);
    let a2 = a1 + rng.gen_range(1..=4);
    let a3 = a2 + rng.gen_range(1..=4);
    let first = [a1, a2, a3];
    let mut cur = first;
    let mut pts = vec![ints(&cur)];
    let mut last_l = 3;
    for _ in 0..rng.gen_range(0..=5) {
        let [x1, x2, x3] = cur;
        let mut moves: Vec<u8> = vec![0];
        if last_l == 3 {
            moves.push(1);
            if x3 - x2 >= 2 {
                moves.push(2);
            }
        }
        if x3 - x2 >= 2 {
            moves.push(3);
        }
        let next = match moves[rng.gen_range(0..moves.len())] {
            0 => [x2, x3, x3 + rng.gen_range(1..=4)],
            1 => [x1, x3, x3 + rng.gen_range(1..=4)],
            2 => [x1, rng.gen_range(x2 + 1..x3), x3],
            _ => [x2, rng.gen_range(x2 + 1..x3), x3],
        };
        last_l = if next[2] != x3 { 3 } else { 2 };
        cur = next;
        pts.push(ints(&cur));
    }
    let mut rho = 2;
    while rho * first[0] <= cur[2] {
        rho += 1;
    }
    rho += rng.gen_range(0..=1);
    let target = first.map(|x| rho * x);
    for t in target {
        cur = [cur[1], cur[2], t];
        pts.push(ints(&cur));
    }
    Canvas::periodic(pts, 0, Rational::int(rho))
}

/// Strict finite integral n-canvas with `steps` transitions.
pub fn random_finite_canvas<R: Rng>(rng: &mut R, n: usize, steps: usize) -> Canvas {
    let mut cur: Vec<i64> = Vec::with_capacity(n);
    let mut x = 0;
    for _ in 0..n {
        x += rng.gen_range(1..=3);
        cur.push(x);
    }
    let mut pts = vec![Point::ints(&cur)];
    let mut last_l = n;
    for _ in 0..steps {
        let k = rng.gen_range(0..last_l.saturating_sub(1).max(1).min(n));
        let removed = cur.remove(k);
        let floor = removed.max(cur[0]);
        let mut y = floor + rng.gen_range(1..=2 * n as i64);
        while cur.contains(&y) {
            y += 1;
        }
        cur.push(y);
        cur.sort_unstable();
        let p = Point::ints(&cur);
        let (_, l) = transition(pts.last().unwrap(), &p).expect("single coordinate increase");
        last_l = l;
        pts.push(p);
    }
    Canvas::finite(pts)
}
