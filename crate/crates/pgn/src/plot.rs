//! Deterministic SVG and CSV output for systems and chains.

use std::fmt::Write as _;

use crate::arith::{geom, Point, Rational};
use crate::error::{Error, Result};
use crate::nsystem::{EventKind, NSystem};

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 500.0;
pub const MARGIN: f64 = 10.0;

const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn f2s(x: f64) -> String {
    let s = format!("{x:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

/// Division points (plus both ends) of `s` over `[lo, qmax]`.
fn samples(s: &NSystem, qmax: &Rational) -> Result<Vec<(Rational, Point, Option<EventKind>)>> {
    let lo = s.domain.lo.clone();
    if *qmax < lo {
        return Err(Error::Domain(format!("plot end {qmax} is below the domain start {lo}")));
    }
    let r = s.restrict(&lo, qmax)?;
    let mut out = Vec::new();
    for (i, e) in r.events.iter().enumerate() {
        let kind = if i == 0 || i + 1 == r.events.len() {
            let (mut l, rr) = s.rises_at(&e.q)?;
            if let (None, Some(rho)) = (l, s.rho()) {
                l = s.rises_at(&(&e.q * rho))?.0;
            }
            match (rr, l) {
                (Some(k), Some(l)) if k < l => Some(EventKind::Switch),
                (Some(k), Some(l)) if k > l => Some(EventKind::Division),
                _ => Some(EventKind::Boundary),
            }
        } else {
            r.kind_at(i)
        };
        out.push((e.q.clone(), e.value.clone(), kind));
    }
    Ok(out)
}

/// Default plot end: three periods for self-similar systems, the domain end otherwise.
pub fn default_qmax(s: &NSystem) -> Rational {
    match (&s.selfsimilar, &s.domain.hi) {
        (Some(ss), _) => {
            let last = &s.events[s.events.len() - 1].q;
            last * &ss.rho * &ss.rho
        }
        (None, Some(h)) => h.clone(),
        (None, None) => s.events[s.events.len() - 1].q.clone(),
    }
}

fn nice_step(range: f64) -> f64 {
    if range <= 0.0 {
        return 1.0;
    }
    let raw = range / 10.0;
    let mag = 10f64.powf(raw.log10().floor());
    for m in [1.0, 2.0, 5.0, 10.0] {
        if m * mag >= raw {
            return (m * mag).max(1.0);
        }
    }
    10.0 * mag
}

/// Combined graph of `s` on `[lo, qmax]`: one polyline per component, dashed verticals at switch numbers.
pub fn system_svg(s: &NSystem, qmax: &Rational) -> Result<String> {
    let pts = samples(s, qmax)?;
    let x0 = s.domain.lo.to_f64();
    let x1 = qmax.to_f64();
    let ymax = pts.iter().map(|p| p.1[s.n - 1].to_f64()).fold(0.0, f64::max);
    let (left, right, top, bottom) = (MARGIN + 40.0, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN - 20.0);
    let xw = if x1 > x0 { x1 - x0 } else { 1.0 };
    let yh = if ymax > 0.0 { ymax } else { 1.0 };
    let sx = |x: f64| left + (x - x0) / xw * (right - left);
    let sy = |y: f64| bottom - y / yh * (bottom - top);

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = WIDTH,
        h = HEIGHT
    )
    .unwrap();
    writeln!(out, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();
    writeln!(
        out,
        r#"<path d="M{} {} L{} {} L{} {}" fill="none" stroke="black" stroke-width="1"/>"#,
        f2s(left),
        f2s(top),
        f2s(left),
        f2s(bottom),
        f2s(right),
        f2s(bottom)
    )
    .unwrap();
    let xs = nice_step(xw);
    let mut t = (x0 / xs).ceil() * xs;
    while t <= x1 + 1e-9 {
        writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="10" text-anchor="middle">{}</text>"#,
            f2s(sx(t)),
            f2s(bottom + 14.0),
            t
        )
        .unwrap();
        t += xs;
    }
    let ys = nice_step(yh);
    let mut t = 0.0;
    while t <= ymax + 1e-9 {
        writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="10" text-anchor="end">{}</text>"#,
            f2s(left - 4.0),
            f2s(sy(t) + 3.0),
            t
        )
        .unwrap();
        t += ys;
    }
    for (q, _, kind) in &pts {
        if *kind == Some(EventKind::Switch) {
            let x = f2s(sx(q.to_f64()));
            writeln!(
                out,
                r##"<line x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="#888888" stroke-dasharray="4 3"/>"##,
                f2s(top),
                f2s(bottom)
            )
            .unwrap();
        }
    }
    for j in 0..s.n {
        let coords: Vec<String> =
            pts.iter().map(|(q, v, _)| format!("{},{}", f2s(sx(q.to_f64())), f2s(sy(v[j].to_f64())))).collect();
        writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
            coords.join(" "),
            COLORS[j % COLORS.len()]
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// CSV rows `q,P1,...,Pn,kind` at division numbers and both ends of `[lo, qmax]`.
pub fn system_csv(s: &NSystem, qmax: &Rational) -> Result<String> {
    let pts = samples(s, qmax)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["q".to_string()];
    header.extend((1..=s.n).map(|j| format!("P{j}")));
    header.push("kind".into());
    w.write_record(&header).map_err(|e| Error::Parse(e.to_string()))?;
    for (q, v, kind) in pts {
        let mut row = vec![q.to_string()];
        row.extend(v.iter().map(|x| x.to_string()));
        row.push(
            match kind {
                Some(EventKind::Switch) => "switch",
                Some(EventKind::Division) => "division",
                _ => "boundary",
            }
            .into(),
        );
        w.write_record(&row).map_err(|e| Error::Parse(e.to_string()))?;
    }
    String::from_utf8(w.into_inner().map_err(|e| Error::Parse(e.to_string()))?).map_err(|e| Error::Parse(e.to_string()))
}

/// Planar embedding (x2 + x3/2, x3 sqrt(3)/2).
fn embed(p: &Point) -> (f64, f64) {
    let v = p.to_f64();
    (v[1] + v[2] / 2.0, v[2] * 3f64.sqrt() / 2.0)
}

/// The triangle f1 f2 f3 with its two median edges and `chain` as a thick closed polyline.
pub fn chain_svg(chain: &[Point]) -> String {
    let (f1, f2, f3) = (geom::f1(), geom::f2(), geom::f3());
    let corners = [embed(&f1), embed(&f2), embed(&f3)];
    let (xmin, xmax) = corners.iter().fold((f64::MAX, f64::MIN), |a, c| (a.0.min(c.0), a.1.max(c.0)));
    let (ymin, ymax) = corners.iter().fold((f64::MAX, f64::MIN), |a, c| (a.0.min(c.1), a.1.max(c.1)));
    let pad = 30.0;
    let scale = ((WIDTH - 2.0 * (MARGIN + pad)) / (xmax - xmin)).min((HEIGHT - 2.0 * (MARGIN + pad)) / (ymax - ymin));
    let ox = (WIDTH - scale * (xmax - xmin)) / 2.0;
    let oy = (HEIGHT - scale * (ymax - ymin)) / 2.0;
    let map = |p: &Point| {
        let (x, y) = embed(p);
        (ox + (x - xmin) * scale, HEIGHT - (oy + (y - ymin) * scale))
    };
    let pt = |p: &Point| {
        let (x, y) = map(p);
        format!("{},{}", f2s(x), f2s(y))
    };
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = WIDTH,
        h = HEIGHT
    )
    .unwrap();
    writeln!(out, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();
    writeln!(out, r#"<polygon points="{} {} {}" fill="none" stroke="black" stroke-width="1"/>"#, pt(&f1), pt(&f2), pt(&f3))
        .unwrap();
    for (a, b) in [(&f2, &f3), (&f2, &f1)] {
        let (x1, y1) = map(a);
        let (x2, y2) = map(b);
        writeln!(
            out,
            r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#888888" stroke-dasharray="4 3"/>"##,
            f2s(x1),
            f2s(y1),
            f2s(x2),
            f2s(y2)
        )
        .unwrap();
    }
    for (p, name, dx) in [(&f1, "f1", 6.0), (&f2, "f2", -18.0), (&f3, "f3", 6.0)] {
        let (x, y) = map(p);
        writeln!(out, r#"<text x="{}" y="{}" font-size="12">{name}</text>"#, f2s(x + dx), f2s(y + 4.0)).unwrap();
    }
    if !chain.is_empty() {
        let pts: Vec<String> = chain.iter().map(pt).collect();
        writeln!(out, r##"<polygon points="{}" fill="none" stroke="#d62728" stroke-width="2.5"/>"##, pts.join(" ")).unwrap();
        for p in chain {
            let (x, y) = map(p);
            writeln!(out, r##"<circle cx="{}" cy="{}" r="2.5" fill="#d62728"/>"##, f2s(x), f2s(y)).unwrap();
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canvas::Canvas;

    fn ss124() -> NSystem {
        Canvas::periodic(vec![Point::ints(&[1, 2, 4]), Point::ints(&[2, 4, 8])], 0, Rational::int(2))
            .build_system()
            .unwrap()
    }

    #[test]
    fn csv_three_periods() {
        let s = ss124();
        let csv = system_csv(&s, &default_qmax(&s)).unwrap();
        let rows: Vec<&str> = csv.lines().collect();
        assert_eq!(rows[0], "q,P1,P2,P3,kind");
        assert_eq!(rows.len(), 11);
        assert_eq!(rows[1], "7,1,2,4,switch");
        assert_eq!(rows[2], "8,2,2,4,division");
        assert_eq!(rows[10], "56,8,16,32,switch");
    }

    #[test]
    fn svg_is_deterministic() {
        let s = Canvas::nine_point().build_system().unwrap();
        let q = default_qmax(&s);
        let a = system_svg(&s, &q).unwrap();
        assert_eq!(a, system_svg(&s, &q).unwrap());
        assert!(a.starts_with("<svg"));
        assert_eq!(a.matches("<polyline").count(), 3);
        assert_eq!(a.matches("stroke-dasharray").count(), 7);
        let c = chain_svg(&[geom::f2()]);
        assert!(c.contains(">f1<") && c.contains(">f3<"));
    }
}
