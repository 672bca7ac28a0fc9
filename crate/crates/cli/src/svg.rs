use std::fmt::Write as _;

use dmrx_core::{Method, PerformanceReport, SweepAxis};

use crate::{PlotKind, SweepSpec};

const WIDTH: f64 = 780.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 190.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

const STYLES: [(&str, &str); 6] = [
    ("#1f77b4", ""),
    ("#d62728", "8 4"),
    ("#2ca02c", "2 3"),
    ("#9467bd", "12 3 2 3"),
    ("#ff7f0e", "4 2"),
    ("#17becf", "1 1"),
];

fn style(method: Method) -> (&'static str, &'static str) {
    STYLES[Method::ALL.iter().position(|&m| m == method).unwrap_or(0)]
}

/// Axis mapping, linear or base-10 logarithmic.
struct Scale {
    lo: f64,
    hi: f64,
    log: bool,
    px_lo: f64,
    px_hi: f64,
}

impl Scale {
    fn map(&self, v: f64) -> f64 {
        let (v, lo, hi) = if self.log {
            (v.log10(), self.lo.log10(), self.hi.log10())
        } else {
            (v, self.lo, self.hi)
        };
        let t = if hi > lo { (v - lo) / (hi - lo) } else { 0.5 };
        self.px_lo + t * (self.px_hi - self.px_lo)
    }

    fn ticks(&self) -> Vec<f64> {
        if self.log {
            let (a, b) = (self.lo.log10().floor() as i32, self.hi.log10().ceil() as i32);
            return (a..=b).map(|e| 10f64.powi(e)).collect();
        }
        let span = self.hi - self.lo;
        if span <= 0.0 {
            return vec![self.lo];
        }
        let raw = span / 6.0;
        let mag = 10f64.powf(raw.log10().floor());
        let step = [1.0, 2.0, 2.5, 5.0, 10.0]
            .iter()
            .map(|m| m * mag)
            .find(|s| *s >= raw)
            .unwrap_or(10.0 * mag);
        let first = (self.lo / step).ceil() as i64;
        let last = (self.hi / step + 1e-9).floor() as i64;
        (first..=last).map(|k| k as f64 * step).collect()
    }
}

fn label(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-2 || v.abs() >= 1e4) {
        format!("{v:.0e}")
    } else {
        let s = format!("{v:.2}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

/// Self-contained SVG line plot of the sweep.
pub fn render_svg(spec: &SweepSpec, reports: &[PerformanceReport]) -> String {
    let value = |r: &PerformanceReport| match spec.plot {
        PlotKind::SecrecyRate => r.rates.secrecy_rate,
        PlotKind::Ber => r.ber.as_ref().map_or(f64::NAN, |b| b.ber),
    };
    let xs = spec.axis.values();
    let x_log = matches!(spec.axis, SweepAxis::PmWatt(_)) && xs.iter().all(|&x| x > 0.0);
    let x = Scale {
        lo: xs.first().copied().unwrap_or(0.0),
        hi: xs.last().copied().unwrap_or(1.0),
        log: x_log,
        px_lo: LEFT,
        px_hi: WIDTH - RIGHT,
    };

    let finite: Vec<f64> = reports.iter().map(value).filter(|v| v.is_finite()).collect();
    let y = match spec.plot {
        PlotKind::SecrecyRate => {
            let top = finite.iter().copied().fold(0.0, f64::max);
            Scale {
                lo: 0.0,
                hi: if top > 0.0 { top * 1.05 } else { 1.0 },
                log: false,
                px_lo: HEIGHT - BOTTOM,
                px_hi: TOP,
            }
        }
        PlotKind::Ber => {
            let min = finite.iter().copied().filter(|&v| v > 0.0).fold(1.0, f64::min);
            Scale {
                lo: 10f64.powf(min.log10().floor()).min(0.1),
                hi: 1.0,
                log: true,
                px_lo: HEIGHT - BOTTOM,
                px_hi: TOP,
            }
        }
    };

    let (x_title, y_title) = (
        match spec.axis {
            SweepAxis::SnrDb(_) => "SNR (dB)",
            SweepAxis::PmWatt(_) => "jamming power P_M (W)",
        },
        match spec.plot {
            PlotKind::SecrecyRate => "secrecy rate (bits/s/Hz)",
            PlotKind::Ber => "bit error rate",
        },
    );

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{} : {} vs {}</text>"#,
        (LEFT + WIDTH - RIGHT) / 2.0,
        spec.name,
        y_title,
        x_title
    );

    // grid and ticks
    for t in x.ticks() {
        let px = x.map(t);
        let _ = writeln!(
            s,
            r##"<line x1="{px:.1}" y1="{TOP}" x2="{px:.1}" y2="{:.1}" stroke="#e0e0e0"/><text x="{px:.1}" y="{:.1}" text-anchor="middle">{}</text>"##,
            HEIGHT - BOTTOM,
            HEIGHT - BOTTOM + 18.0,
            label(t)
        );
    }
    for t in y.ticks() {
        let py = y.map(t);
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{py:.1}" x2="{:.1}" y2="{py:.1}" stroke="#e0e0e0"/><text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"##,
            WIDTH - RIGHT,
            LEFT - 6.0,
            py + 4.0,
            label(t)
        );
    }
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{:.1}" height="{:.1}" fill="none" stroke="black"/>"#,
        WIDTH - RIGHT - LEFT,
        HEIGHT - BOTTOM - TOP
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{x_title}</text>"#,
        (LEFT + WIDTH - RIGHT) / 2.0,
        HEIGHT - 18.0
    );
    let _ = writeln!(
        s,
        r#"<text transform="translate(20 {:.1}) rotate(-90)" text-anchor="middle">{y_title}</text>"#,
        (TOP + HEIGHT - BOTTOM) / 2.0
    );

    // curves; points that cannot be drawn (zero BER on a log axis) split the line
    for (k, &method) in spec.methods.iter().enumerate() {
        let (colour, dash) = style(method);
        let mut segments: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
        for r in reports.iter().filter(|r| r.method == method) {
            let v = value(r);
            if v.is_finite() && (!y.log || v > 0.0) {
                segments.last_mut().unwrap().push((x.map(r.axis_value), y.map(v)));
            } else if !segments.last().unwrap().is_empty() {
                segments.push(Vec::new());
            }
        }
        for seg in segments.iter().filter(|s| !s.is_empty()) {
            let points: Vec<String> = seg.iter().map(|(a, b)| format!("{a:.1},{b:.1}")).collect();
            let _ = writeln!(
                s,
                r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="1.8" stroke-dasharray="{dash}"/>"#,
                points.join(" ")
            );
            for (a, b) in seg {
                let _ = writeln!(s, r#"<circle cx="{a:.1}" cy="{b:.1}" r="2.5" fill="{colour}"/>"#);
            }
        }
        let ly = TOP + 16.0 + 20.0 * k as f64;
        let lx = WIDTH - RIGHT + 14.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{colour}" stroke-width="1.8" stroke-dasharray="{dash}"/><text x="{:.1}" y="{:.1}">{}</text>"#,
            lx + 30.0,
            lx + 36.0,
            ly + 4.0,
            method.name()
        );
    }
    s.push_str("</svg>\n");
    s
}
