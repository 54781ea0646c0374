//! Static SVG line plots.

use std::fmt::Write;

use kgl_core::invariant::Family;
use kgl_core::scaled::ScaledComplex;
use kgl_core::verification::sampling::invert_phi;
use kgl_core::InvariantFunction;

const W: f64 = 640.0;
const H: f64 = 400.0;
const PAD: f64 = 50.0;
const N: usize = 400;
const COLORS: [&str; 2] = ["#1f77b4", "#d62728"];

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

/// Plot names and SVG documents for `u`.
pub fn figures(u: &InvariantFunction) -> Vec<(String, String)> {
    let mut out = Vec::new();
    if let Some(psi) = &u.psi {
        let ts: Vec<f64> = (0..=N).map(|k| psi.period * k as f64 / N as f64).collect();
        out.push((
            "psi.svg".into(),
            line_plot(
                "psi over one period",
                "t",
                &[
                    Series { label: "psi(t)".into(), points: ts.iter().map(|&t| (t, psi.eval(t, 0))).collect() },
                    Series {
                        label: "-psi''+psi'+1".into(),
                        points: ts.iter().map(|&t| (t, psi.cone_integrand(t))).collect(),
                    },
                ],
            ),
        ));
    }
    match u.family {
        Family::Enoki | Family::Intermediate => {
            let points = (1..N)
                .filter_map(|k| {
                    let r = k as f64 / N as f64;
                    let p = [ScaledComplex::from_real(r), ScaledComplex::ZERO];
                    u.eval_u(&p).ok().map(|v| (r, v))
                })
                .collect();
            out.push(("v.svg".into(), line_plot("v(r) = u(r, 0)", "r", &[Series { label: "v(r)".into(), points }])));
        }
        Family::Ih => {
            let ed = u.eigen.expect("ih carries eigen data");
            // points with phi_1 = -e^t, phi_2 = 0
            let points = (0..=N)
                .filter_map(|k| {
                    let t = -3.0 + 6.0 * k as f64 / N as f64;
                    let [x, y] = invert_phi(&ed, -t.exp(), 0.0);
                    let p = [ScaledComplex::from_polar(x, 0.0), ScaledComplex::from_polar(y, 0.0)];
                    u.eval_u(&p).ok().map(|v| (t, v))
                })
                .collect();
            out.push((
                "slice.svg".into(),
                line_plot("u against log(-phi)", "log(-phi)", &[Series { label: "u".into(), points }]),
            ));
        }
    }
    out
}

pub fn line_plot(title: &str, xlabel: &str, series: &[Series]) -> String {
    let all = series.iter().flat_map(|s| s.points.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !(x1 > x0) {
        x1 = x0 + 1.0;
    }
    // constant curves get a unit window around them
    if !(y1 - y0 > 1e-12 * (1.0 + y0.abs())) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="16">{}</text>"#, W / 2.0, esc(title));
    let _ = writeln!(
        s,
        r#"<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - 2.0 * PAD,
        H - 2.0 * PAD
    );
    for (v, x, y, anchor) in [
        (x0, PAD, H - PAD + 16.0, "start"),
        (x1, W - PAD, H - PAD + 16.0, "end"),
        (y0, PAD - 4.0, H - PAD, "end"),
        (y1, PAD - 4.0, PAD + 10.0, "end"),
    ] {
        let _ = writeln!(s, r#"<text x="{x}" y="{y}" text-anchor="{anchor}" font-size="11">{v:.4}</text>"#);
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="12">{}</text>"#,
        W / 2.0,
        H - 12.0,
        esc(xlabel)
    );
    for (i, ser) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> = ser.points.iter().map(|&(x, y)| format!("{:.3},{:.3}", sx(x), sy(y))).collect();
        let _ =
            writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, pts.join(" "));
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="12" fill="{color}">{}</text>"#,
            W - PAD - 150.0,
            PAD + 16.0 * (i + 1) as f64,
            esc(&ser.label)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn esc(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
