//! Output formatting shared by the library and the command line: fixed-precision
//! reals and small static SVG plots.

use std::fmt::Write as _;

/// Significant digits used for every real written to CSV or JSON.
pub const REAL_DIGITS: usize = 15;

/// Formats `x` with [`REAL_DIGITS`] significant digits, plain decimal when the
/// magnitude allows it.
pub fn fmt_real(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-5..=15).contains(&mag) {
        return format!("{:.*e}", REAL_DIGITS - 1, x);
    }
    let decimals = (REAL_DIGITS as i32 - 1 - mag).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// A named polyline for [`line_plot_svg`].
pub struct Series<'a> {
    pub label: &'a str,
    pub points: &'a [(f64, f64)],
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    const W: f64 = 640.0;
    const H: f64 = 420.0;
    const PAD: f64 = 50.0;

    fn fit<'a>(pts: impl Iterator<Item = &'a (f64, f64)>) -> Frame {
        let mut f = Frame {
            x0: f64::INFINITY,
            x1: f64::NEG_INFINITY,
            y0: f64::INFINITY,
            y1: f64::NEG_INFINITY,
        };
        for &(x, y) in pts {
            f.x0 = f.x0.min(x);
            f.x1 = f.x1.max(x);
            f.y0 = f.y0.min(y);
            f.y1 = f.y1.max(y);
        }
        if !f.x0.is_finite() {
            (f.x0, f.x1, f.y0, f.y1) = (0.0, 1.0, 0.0, 1.0);
        }
        if f.x1 - f.x0 < 1e-12 {
            f.x1 = f.x0 + 1.0;
        }
        if f.y1 - f.y0 < 1e-12 {
            f.y1 = f.y0 + 1.0;
        }
        f
    }

    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        let sx = Self::PAD + (x - self.x0) / (self.x1 - self.x0) * (Self::W - 2.0 * Self::PAD);
        let sy = Self::H - Self::PAD - (y - self.y0) / (self.y1 - self.y0) * (Self::H - 2.0 * Self::PAD);
        (sx, sy)
    }

    fn open(&self, title: &str, xlabel: &str, ylabel: &str) -> String {
        let mut s = String::new();
        let (w, h, p) = (Self::W, Self::H, Self::PAD);
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<rect x="{p}" y="{p}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            w - 2.0 * p,
            h - 2.0 * p
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="20" text-anchor="middle">{}</text>"#,
            w / 2.0,
            esc(title)
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            w / 2.0,
            h - 12.0,
            esc(xlabel)
        );
        let _ = writeln!(
            s,
            r#"<text x="14" y="{}" text-anchor="middle" transform="rotate(-90 14 {})">{}</text>"#,
            h / 2.0,
            h / 2.0,
            esc(ylabel)
        );
        for (v, anchor, x, y) in [
            (self.x0, "start", p, h - p + 16.0),
            (self.x1, "end", w - p, h - p + 16.0),
            (self.y0, "end", p - 4.0, h - p),
            (self.y1, "end", p - 4.0, p + 4.0),
        ] {
            let _ = writeln!(s, r#"<text x="{x}" y="{y}" text-anchor="{anchor}">{}</text>"#, short(v));
        }
        s
    }
}

fn short(v: f64) -> String {
    format!("{v:.4}")
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Static line plot of one or more series.
pub fn line_plot_svg(title: &str, xlabel: &str, ylabel: &str, series: &[Series<'_>]) -> String {
    let frame = Frame::fit(series.iter().flat_map(|s| s.points.iter()));
    let mut s = frame.open(title, xlabel, ylabel);
    for (i, ser) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> = ser
            .points
            .iter()
            .map(|&p| {
                let (x, y) = frame.map(p);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            pts.join(" ")
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" fill="{color}">{}</text>"#,
            Frame::PAD + 8.0,
            Frame::PAD + 16.0 + 14.0 * i as f64,
            esc(ser.label)
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Overlay of closed polygons, drawn in order (outermost first is typical).
pub fn polygon_overlay_svg(title: &str, xlabel: &str, ylabel: &str, polygons: &[Vec<(f64, f64)>]) -> String {
    let frame = Frame::fit(polygons.iter().flatten());
    let mut s = frame.open(title, xlabel, ylabel);
    let n = polygons.len().max(1);
    for (i, poly) in polygons.iter().enumerate() {
        if poly.is_empty() {
            continue;
        }
        let shade = 230 - (180 * i / n) as u32;
        let pts: Vec<String> = poly
            .iter()
            .map(|&p| {
                let (x, y) = frame.map(p);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            s,
            r#"<polygon fill="rgb({shade},{shade},255)" fill-opacity="0.6" stroke="navy" stroke-width="0.8" points="{}"/>"#,
            pts.join(" ")
        );
    }
    s.push_str("</svg>\n");
    s
}
