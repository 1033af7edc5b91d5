//! Minimal hand-written SVG charts. Only `rect` elements are used for bars,
//! so a distribution chart contains exactly one `rect` per color.

use std::fmt::Write;

const WIDTH: f64 = 900.0;
const HEIGHT: f64 = 360.0;
const MARGIN_LEFT: f64 = 50.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 90.0;

pub fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn open(out: &mut String, title: &str) {
    let _ = write!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n\
         <text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
        WIDTH / 2.0,
        escape(title)
    );
}

fn plot_height() -> f64 {
    HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
}

fn y_of(v: f64, lo: f64, hi: f64) -> f64 {
    let t = ((v - lo) / (hi - lo)).clamp(0.0, 1.0);
    MARGIN_TOP + plot_height() * (1.0 - t)
}

fn axes(out: &mut String, lo: f64, hi: f64, ticks: &[f64]) {
    let bottom = y_of(lo, lo, hi);
    let _ = writeln!(
        out,
        "<line x1=\"{MARGIN_LEFT}\" y1=\"{MARGIN_TOP}\" x2=\"{MARGIN_LEFT}\" y2=\"{bottom:.2}\" stroke=\"#000\"/>\n\
         <line x1=\"{MARGIN_LEFT}\" y1=\"{bottom:.2}\" x2=\"{:.2}\" y2=\"{bottom:.2}\" stroke=\"#000\"/>",
        WIDTH - MARGIN_RIGHT
    );
    for &t in ticks {
        let y = y_of(t, lo, hi);
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">{t}</text>",
            MARGIN_LEFT - 4.0,
            y + 3.0
        );
    }
}

/// One bar per color, height = rating, fill = the color itself.
pub fn distribution_chart(title: &str, bars: &[(&str, f64)]) -> String {
    let mut out = String::new();
    open(&mut out, title);
    axes(&mut out, 0.0, 1.0, &[0.0, 0.5, 1.0]);
    let slot = (WIDTH - MARGIN_LEFT - MARGIN_RIGHT) / bars.len().max(1) as f64;
    let base = y_of(0.0, 0.0, 1.0);
    for (i, (hex, v)) in bars.iter().enumerate() {
        let top = y_of(*v, 0.0, 1.0);
        let _ = writeln!(
            out,
            "<rect x=\"{:.2}\" y=\"{top:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{hex}\" stroke=\"#888\" stroke-width=\"0.3\"/>",
            MARGIN_LEFT + i as f64 * slot + slot * 0.1,
            slot * 0.8,
            base - top
        );
    }
    out.push_str("</svg>\n");
    out
}

pub struct Series<'a> {
    pub label: &'a str,
    pub color: &'a str,
    pub values: Vec<Option<f64>>,
}

/// Grouped bars per category (correlations in [-1, 1] or [0, 1]) with an
/// optional horizontal marker per category, drawn as a line.
pub fn grouped_bar_chart(
    title: &str,
    categories: &[String],
    series: &[Series<'_>],
    markers: Option<(&str, &[Option<f64>])>,
) -> String {
    let all = series
        .iter()
        .flat_map(|s| s.values.iter().flatten())
        .chain(markers.iter().flat_map(|(_, m)| m.iter().flatten()));
    let lo = if all.clone().any(|v| *v < 0.0) {
        -1.0
    } else {
        0.0
    };
    let hi = 1.0;
    let mut out = String::new();
    open(&mut out, title);
    axes(
        &mut out,
        lo,
        hi,
        &if lo < 0.0 {
            vec![-1.0, 0.0, 1.0]
        } else {
            vec![0.0, 0.5, 1.0]
        },
    );
    let slot = (WIDTH - MARGIN_LEFT - MARGIN_RIGHT) / categories.len().max(1) as f64;
    let bar_w = slot * 0.8 / series.len().max(1) as f64;
    let zero = y_of(0.0, lo, hi);
    for (ci, cat) in categories.iter().enumerate() {
        let x0 = MARGIN_LEFT + ci as f64 * slot + slot * 0.1;
        for (si, s) in series.iter().enumerate() {
            if let Some(Some(v)) = s.values.get(ci) {
                let y = y_of(*v, lo, hi);
                let _ = writeln!(
                    out,
                    "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{bar_w:.2}\" height=\"{:.2}\" fill=\"{}\"/>",
                    x0 + si as f64 * bar_w,
                    y.min(zero),
                    (zero - y).abs(),
                    s.color
                );
            }
        }
        if let Some((color, m)) = markers {
            if let Some(Some(v)) = m.get(ci) {
                let y = y_of(*v, lo, hi);
                let _ = writeln!(
                    out,
                    "<line x1=\"{x0:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"{color}\" stroke-width=\"2\"/>",
                    x0 + slot * 0.8
                );
            }
        }
        let lx = x0 + slot * 0.4;
        let ly = HEIGHT - MARGIN_BOTTOM + 8.0;
        let _ = writeln!(
            out,
            "<text x=\"{lx:.2}\" y=\"{ly:.2}\" font-family=\"sans-serif\" font-size=\"9\" text-anchor=\"end\" transform=\"rotate(-60 {lx:.2} {ly:.2})\">{}</text>",
            escape(cat)
        );
    }
    let mut legend_x = MARGIN_LEFT;
    let legend = series
        .iter()
        .map(|s| (s.label, s.color))
        .chain(markers.map(|(c, _)| ("split-half reliability", c)));
    for (label, color) in legend {
        let _ = writeln!(
            out,
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"5\" fill=\"{color}\"/>\n\
             <text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\">{}</text>",
            legend_x + 5.0,
            HEIGHT - 12.0,
            legend_x + 14.0,
            HEIGHT - 8.0,
            escape(label)
        );
        legend_x += 30.0 + 7.0 * label.len() as f64;
    }
    out.push_str("</svg>\n");
    out
}

/// Labelled points, axes scaled to the data range.
pub fn scatter(title: &str, x_label: &str, y_label: &str, points: &[(String, f64, f64)]) -> String {
    let (mut x_lo, mut x_hi) = range(points.iter().map(|p| p.1));
    let (y_lo, y_hi) = range(points.iter().map(|p| p.2));
    if x_hi == x_lo {
        x_lo -= 1.0;
        x_hi += 1.0;
    }
    let x_of =
        |v: f64| MARGIN_LEFT + (WIDTH - MARGIN_LEFT - MARGIN_RIGHT) * (v - x_lo) / (x_hi - x_lo);
    let mut out = String::new();
    open(&mut out, title);
    axes(&mut out, y_lo, y_hi, &[y_lo, y_hi]);
    for (label, x, y) in points {
        let (px, py) = (x_of(*x), y_of(*y, y_lo, y_hi));
        let _ = writeln!(
            out,
            "<circle cx=\"{px:.2}\" cy=\"{py:.2}\" r=\"3\" fill=\"#1f77b4\"><title>{}</title></circle>\n\
             <text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"8\">{}</text>",
            escape(label),
            px + 4.0,
            py - 2.0,
            escape(label)
        );
    }
    let _ = writeln!(
        out,
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n\
         <text x=\"14\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 {:.2})\">{}</text>",
        WIDTH / 2.0,
        HEIGHT - MARGIN_BOTTOM + 30.0,
        escape(x_label),
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(y_label)
    );
    out.push_str("</svg>\n");
    out
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if lo == hi {
        (lo - 1.0, hi + 1.0)
    } else {
        (lo, hi)
    }
}
