//! Minimal SVG charts: log-scale line plots and a kept-column raster.

use std::fmt::Write;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const PALETTE: &[&str] = &[
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

pub struct Series<'a> {
    pub label: &'a str,
    /// `(k, value)` pairs; non-positive values are skipped on the log axis.
    pub points: Vec<(f64, f64)>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn header(out: &mut String, title: &str) {
    let _ = write!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = write!(
        out,
        r#"<rect width="100%" height="100%" fill="white"/><text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        LEFT + (WIDTH - LEFT - RIGHT) / 2.0,
        escape(title)
    );
}

/// Line plot with a logarithmic y axis and integer decade ticks.
pub fn log_line_plot(title: &str, y_label: &str, series: &[Series<'_>]) -> String {
    let finite = |&(_, y): &(f64, f64)| y.is_finite() && y > 0.0;
    let pts = || series.iter().flat_map(|s| s.points.iter().filter(|p| finite(p)));
    let x_max = pts().map(|p| p.0).fold(1.0, f64::max);
    let (mut lo, mut hi) = pts().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
        (lo.min(p.1.log10()), hi.max(p.1.log10()))
    });
    if !lo.is_finite() {
        (lo, hi) = (0.0, 1.0);
    }
    let (lo, hi) = (lo.floor(), hi.ceil().max(lo.floor() + 1.0));
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + plot_w * x / x_max;
    let sy = |y: f64| TOP + plot_h * (hi - y.log10()) / (hi - lo);

    let mut out = String::new();
    header(&mut out, title);
    let _ = write!(
        out,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    let step = ((hi - lo) / 8.0).ceil().max(1.0);
    let mut d = lo;
    while d <= hi {
        let y = TOP + plot_h * (hi - d) / (hi - lo);
        let _ = write!(
            out,
            r##"<line x1="{LEFT}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#ddd"/><text x="{:.1}" y="{:.1}" text-anchor="end">1e{d}</text>"##,
            LEFT + plot_w,
            LEFT - 6.0,
            y + 4.0
        );
        d += step;
    }
    for i in 0..=4 {
        let x = x_max * i as f64 / 4.0;
        let _ = write!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{:.0}</text>"#,
            sx(x),
            TOP + plot_h + 18.0,
            x
        );
    }
    let _ = write!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">iteration k</text><text x="16" y="{:.1}" transform="rotate(-90 16 {:.1})" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 12.0,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0,
        escape(y_label)
    );
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = s
            .points
            .iter()
            .filter(|p| finite(p))
            .map(|&(x, y)| format!("{:.1},{:.1}", sx(x), sy(y)))
            .collect();
        if !path.is_empty() {
            let _ = write!(
                out,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                path.join(" ")
            );
        }
        let ly = TOP + 14.0 + 18.0 * i as f64;
        let lx = LEFT + plot_w + 10.0;
        let _ = write!(
            out,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
            lx + 18.0,
            lx + 24.0,
            ly + 4.0,
            escape(s.label)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// One row per iteration, one cell per history column (newest left):
/// dark when kept, light when dropped, blank when absent.
pub fn column_raster(title: &str, masks: &[(usize, &[bool])]) -> String {
    let rows = masks.iter().map(|(k, _)| k + 1).max().unwrap_or(1) as f64;
    let cols = masks.iter().map(|(_, m)| m.len()).max().unwrap_or(0).max(1) as f64;
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let (cw, rh) = (plot_w / cols, plot_h / rows);

    let mut out = String::new();
    header(&mut out, title);
    for (k, mask) in masks {
        for (j, &kept) in mask.iter().enumerate() {
            let fill = if kept { "#1f3b73" } else { "#f2b8b5" };
            let _ = write!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{fill}"/>"#,
                LEFT + cw * j as f64,
                TOP + rh * *k as f64,
                cw,
                rh
            );
        }
    }
    let _ = write!(
        out,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/><text x="{:.1}" y="{:.1}" text-anchor="middle">history column (newest left)</text><text x="16" y="{:.1}" transform="rotate(-90 16 {:.1})" text-anchor="middle">iteration k (down)</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 12.0,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_plot_skips_non_positive_values() {
        let s = Series {
            label: "a<b",
            points: vec![(0.0, 1.0), (1.0, 0.0), (2.0, 1e-3), (3.0, f64::NAN)],
        };
        let svg = log_line_plot("t", "residual", &[s]);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(svg.contains("a&lt;b"));
    }

    #[test]
    fn raster_draws_one_cell_per_flag() {
        let masks: Vec<(usize, &[bool])> = vec![(1, &[true][..]), (2, &[true, false][..])];
        let svg = column_raster("t", &masks);
        assert_eq!(svg.matches("#1f3b73").count(), 2);
        assert_eq!(svg.matches("#f2b8b5").count(), 1);
    }
}
