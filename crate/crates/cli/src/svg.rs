//! Hand-written SVG plots.

use std::fmt::Write;

/// One point of an angle plot: specified angle, mean evaluated angle, std.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnglePoint {
    pub spec: f64,
    pub mean: f64,
    pub std: f64,
}

const W: f64 = 480.0;
const H: f64 = 480.0;
const PAD: f64 = 56.0;
const X_MIN: f64 = -30.0;
const X_MAX: f64 = 360.0;
const Y_MIN: f64 = -210.0;
const Y_MAX: f64 = 570.0;

fn sx(x: f64) -> f64 {
    PAD + (x - X_MIN) / (X_MAX - X_MIN) * (W - 2.0 * PAD)
}

fn sy(y: f64) -> f64 {
    H - PAD - (y - Y_MIN) / (Y_MAX - Y_MIN) * (H - 2.0 * PAD)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn open(out: &mut String) {
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#).unwrap();
}

/// `y = x + offset` clipped to the plot window.
fn diagonal(out: &mut String, offset: f64, style: &str) {
    let x0 = X_MIN.max(Y_MIN - offset);
    let x1 = X_MAX.min(Y_MAX - offset);
    if x0 >= x1 {
        return;
    }
    writeln!(
        out,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" {style}/>"#,
        sx(x0),
        sy(x0 + offset),
        sx(x1),
        sy(x1 + offset)
    )
    .unwrap();
}

/// Specified versus evaluated angle with the identity line, gray lines at
/// +/-180 degrees and dashed lines at +/-90 degrees.
pub fn angle_plot(title: &str, points: &[AnglePoint]) -> String {
    let mut out = String::new();
    open(&mut out);
    writeln!(out, r#"<text x="{:.2}" y="24" text-anchor="middle">{}</text>"#, W / 2.0, escape(title)).unwrap();

    // axes and ticks
    writeln!(
        out,
        r#"<rect x="{PAD}" y="{PAD}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        W - 2.0 * PAD,
        H - 2.0 * PAD
    )
    .unwrap();
    for t in (0..=330).step_by(90) {
        let x = sx(t as f64);
        writeln!(out, r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#, H - PAD, H - PAD + 5.0).unwrap();
        writeln!(out, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{t}</text>"#, H - PAD + 18.0).unwrap();
    }
    for t in (-180..=540).step_by(90) {
        let y = sy(t as f64);
        writeln!(out, r#"<line x1="{:.2}" y1="{y:.2}" x2="{PAD}" y2="{y:.2}" stroke="black"/>"#, PAD - 5.0).unwrap();
        writeln!(out, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{t}</text>"#, PAD - 8.0, y + 4.0).unwrap();
    }
    writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">specified angle (deg)</text>"#,
        W / 2.0,
        H - 14.0
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">evaluated angle (deg)</text>"#,
        H / 2.0,
        H / 2.0
    )
    .unwrap();

    diagonal(&mut out, 0.0, r#"stroke="black" stroke-width="3""#);
    for off in [-180.0, 180.0] {
        diagonal(&mut out, off, r#"stroke="gray" stroke-width="1.5""#);
    }
    for off in [-90.0, 90.0] {
        diagonal(&mut out, off, r#"stroke="black" stroke-dasharray="6 4""#);
    }

    for p in points {
        let (x, y) = (sx(p.spec), sy(p.mean));
        if p.std > 0.0 {
            writeln!(
                out,
                r#"<line class="errorbar" x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="steelblue"/>"#,
                sy(p.mean - p.std),
                sy(p.mean + p.std)
            )
            .unwrap();
        }
        writeln!(out, r#"<circle class="point" cx="{x:.2}" cy="{y:.2}" r="4" fill="steelblue"/>"#).unwrap();
    }
    out.push_str("</svg>\n");
    out
}

/// Bar histogram of similarities over [-1, 1] with guides at 1/2 and
/// sqrt(3)/2.
pub fn histogram(title: &str, counts: &[usize]) -> String {
    let mut out = String::new();
    open(&mut out);
    writeln!(out, r#"<text x="{:.2}" y="24" text-anchor="middle">{}</text>"#, W / 2.0, escape(title)).unwrap();
    let (x0, x1, y0, y1) = (PAD, W - PAD, H - PAD, PAD);
    let hx = |v: f64| x0 + (v + 1.0) / 2.0 * (x1 - x0);
    let max = counts.iter().copied().max().unwrap_or(0).max(1) as f64;
    writeln!(out, r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#).unwrap();
    writeln!(out, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#).unwrap();
    let n = counts.len().max(1) as f64;
    let bw = (x1 - x0) / n;
    for (i, &c) in counts.iter().enumerate() {
        let h = c as f64 / max * (y0 - y1);
        writeln!(
            out,
            r#"<rect class="bar" x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="steelblue" stroke="white"/>"#,
            x0 + i as f64 * bw,
            y0 - h,
            bw,
            h
        )
        .unwrap();
    }
    for t in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        writeln!(out, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{t}</text>"#, hx(t), y0 + 18.0).unwrap();
    }
    for g in [0.5, 3f64.sqrt() / 2.0] {
        writeln!(
            out,
            r#"<line x1="{:.2}" y1="{y0}" x2="{:.2}" y2="{y1}" stroke="black" stroke-dasharray="6 4"/>"#,
            hx(g),
            hx(g)
        )
        .unwrap();
    }
    writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">cosine similarity</text>"#,
        W / 2.0,
        H - 14.0
    )
    .unwrap();
    writeln!(out, r#"<text x="{x0}" y="{:.2}">max bin {}</text>"#, y1 - 8.0, max as usize).unwrap();
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_circle_per_point() {
        let pts: Vec<_> = (0..12)
            .map(|k| AnglePoint {
                spec: 30.0 * k as f64,
                mean: 30.0 * k as f64 + 5.0,
                std: if k % 2 == 0 { 10.0 } else { 0.0 },
            })
            .collect();
        let svg = angle_plot("m <1>", &pts);
        assert_eq!(svg.matches(r#"class="point""#).count(), 12);
        assert_eq!(svg.matches(r#"class="errorbar""#).count(), 6);
        assert_eq!(svg.matches("stroke-dasharray").count(), 2);
        assert!(svg.contains("m &lt;1&gt;"));
        assert_eq!(svg, angle_plot("m <1>", &pts));
    }

    #[test]
    fn histogram_bars() {
        let svg = histogram("h", &[0; 40]);
        assert_eq!(svg.matches(r#"class="bar""#).count(), 40);
    }
}
