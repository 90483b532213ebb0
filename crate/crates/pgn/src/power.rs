//! The power transform P -> P^lambda; the only floating-point part of the crate.

use serde::Serialize;

use crate::canvas::Failure;
use crate::error::{Error, Result};
use crate::nsystem::NSystem;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FloatEvent {
    pub q: f64,
    pub value: Vec<f64>,
    pub right_rise: Option<usize>,
    pub left_rise: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FloatNSystem {
    pub n: usize,
    pub events: Vec<FloatEvent>,
    pub rho: Option<f64>,
    /// Index of the period start for self-similar systems.
    pub period_start: Option<usize>,
}

/// Image of `s` under coordinatewise `a -> a^lambda`, reparametrized by the coordinate sum.
pub fn power_transform(s: &NSystem, lambda: f64) -> Result<FloatNSystem> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::Domain(format!("lambda {lambda} outside (0,1]")));
    }
    for (i, e) in s.events.iter().enumerate() {
        if i > 0 && !e.value[0].is_positive() {
            return Err(Error::Precondition(format!("value {} at {} is not positive", e.value, e.q)));
        }
    }
    let events = s
        .events
        .iter()
        .map(|e| {
            let value: Vec<f64> = e.value.iter().map(|a| a.to_f64().powf(lambda)).collect();
            FloatEvent { q: value.iter().sum(), value, right_rise: e.right_rise, left_rise: e.left_rise }
        })
        .collect();
    let period_start = s.selfsimilar.as_ref().and_then(|ss| s.events.iter().position(|e| e.q == ss.period_start));
    Ok(FloatNSystem { n: s.n, events, rho: s.rho().map(|r| r.to_f64().powf(lambda)), period_start })
}

impl FloatNSystem {
    /// (S1)-(S3) and the self-similar closure, each up to `tol * max(1, q)`.
    pub fn validate(&self, tol: f64) -> Vec<Failure> {
        let mut out = Vec::new();
        let mut push = |c: &str, i: usize, d: String| out.push(Failure { condition: c.into(), index: i, detail: d });
        let ev = &self.events;
        for (i, e) in ev.iter().enumerate() {
            let t = tol * e.q.abs().max(1.0);
            if e.value[0] < -t || e.value.windows(2).any(|w| w[0] > w[1] + t) {
                push("S1", i, format!("{:?} not sorted", e.value));
            }
            if (e.value.iter().sum::<f64>() - e.q).abs() > t {
                push("S1", i, format!("sum differs from {}", e.q));
            }
            if let (Some(l), Some(k)) = (e.left_rise, e.right_rise) {
                if k > l && (l..k).any(|j| (e.value[j - 1] - e.value[j]).abs() > t) {
                    push("S3", i, format!("k={k} > l={l} with distinct coordinates"));
                }
            }
        }
        for i in 0..ev.len().saturating_sub(1) {
            let (a, b) = (&ev[i], &ev[i + 1]);
            let t = tol * b.q.abs().max(1.0);
            let Some(r) = a.right_rise else {
                push("S2", i, "missing rise".into());
                continue;
            };
            let dq = b.q - a.q;
            if dq <= 0.0 {
                push("order", i + 1, "abscissas not increasing".into());
            }
            for j in 0..self.n {
                let d = b.value[j] - a.value[j];
                let want = if j + 1 == r { dq } else { 0.0 };
                if (d - want).abs() > t {
                    push("S2", i, format!("component {} moves by {d}, expected {want}", j + 1));
                }
            }
        }
        if let (Some(rho), Some(p)) = (self.rho, self.period_start) {
            let (a, b) = (&ev[p], &ev[ev.len() - 1]);
            let t = tol * b.q.abs().max(1.0);
            if (b.q - rho * a.q).abs() > t || a.value.iter().zip(&b.value).any(|(x, y)| (y - rho * x).abs() > t) {
                push("selfsimilar", ev.len() - 1, "closing event is not rho times the period start".into());
            }
        }
        out
    }

    /// Ratios at the events of one period (or all events for finite systems).
    pub fn ratio_vertices(&self) -> Vec<Vec<f64>> {
        let (a, b) = match self.period_start {
            Some(p) => (p, self.events.len() - 1),
            None => (0, self.events.len()),
        };
        self.events[a..b]
            .iter()
            .filter(|e| e.q > 0.0)
            .map(|e| e.value.iter().map(|x| x / e.q).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{Point, Rational};
    use crate::canvas::Canvas;

    fn ss124() -> NSystem {
        Canvas::periodic(vec![Point::ints(&[1, 2, 4]), Point::ints(&[2, 4, 8])], 0, Rational::int(2))
            .build_system()
            .unwrap()
    }

    #[test]
    fn identity_power() {
        let s = ss124();
        let p = power_transform(&s, 1.0).unwrap();
        for (e, f) in s.events.iter().zip(&p.events) {
            assert!((e.q.to_f64() - f.q).abs() < 1e-12);
            for (a, b) in e.value.iter().zip(&f.value) {
                assert!((a.to_f64() - b).abs() < 1e-12);
            }
        }
        assert!(p.validate(1e-9).is_empty());
    }

    #[test]
    fn half_power() {
        let p = power_transform(&ss124(), 0.5).unwrap();
        let e = &p.events[0];
        assert!((e.value[1] - 2f64.sqrt()).abs() < 1e-12);
        assert!((e.q - (3.0 + 2f64.sqrt())).abs() < 1e-12);
        assert!((p.rho.unwrap() - 2f64.sqrt()).abs() < 1e-12);
        assert!(p.validate(1e-9).is_empty());
    }

    #[test]
    fn small_lambda_collapses() {
        let p = power_transform(&ss124(), 1e-4).unwrap();
        for v in p.ratio_vertices() {
            assert!(v.iter().all(|x| (x - 1.0 / 3.0).abs() < 1e-3));
        }
        assert!(power_transform(&ss124(), 0.0).is_err());
        assert!(power_transform(&ss124(), 1.5).is_err());
    }
}
