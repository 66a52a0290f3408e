//! Minimal line plots: self-contained SVG, or a gnuplot script with inline data.
//!
//! Coordinates are plotted as given; any logarithmic transform happens before
//! the points reach a [`LinePlot`]. Non-finite points are skipped.

use std::fmt::Write as _;

use crate::experiments::{group_curves, Field, SweepRecord};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 200.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 55.0;
const TICKS: usize = 6;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#000000", "#8c564b", "#17becf", "#2ca02c", "#9467bd", "#ff7f0e", "#7f7f7f", "#bcbd22",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinePlot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Round tick step (1, 2 or 5 times a power of ten) covering `span` in about `TICKS` steps.
fn tick_step(span: f64) -> f64 {
    let raw = span / TICKS as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let nice = if norm <= 1.0 {
        1.0
    } else if norm <= 2.0 {
        2.0
    } else if norm <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn padded_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        return (lo - 0.5, hi + 0.5);
    }
    let step = tick_step(hi - lo);
    ((lo / step).floor() * step, (hi / step).ceil() * step)
}

fn tick_label(v: f64, step: f64) -> String {
    let decimals = if step >= 1.0 {
        0
    } else {
        (-step.log10().floor()) as usize
    };
    format!("{:.*}", decimals, v)
}

impl LinePlot {
    fn finite_points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.series
            .iter()
            .flat_map(|s| s.points.iter().copied())
            .filter(|(x, y)| x.is_finite() && y.is_finite())
    }

    pub fn to_svg(&self) -> String {
        let (x0, x1) = padded_range(self.finite_points().map(|p| p.0));
        let (y0, y1) = padded_range(self.finite_points().map(|p| p.1));
        let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        let sx = |x: f64| MARGIN_LEFT + (x - x0) / (x1 - x0) * plot_w;
        let sy = |y: f64| MARGIN_TOP + plot_h - (y - y0) / (y1 - y0) * plot_h;

        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
            MARGIN_LEFT + plot_w / 2.0,
            escape(&self.title)
        );

        // Grid and ticks.
        for (lo, hi, horizontal) in [(x0, x1, false), (y0, y1, true)] {
            let step = tick_step(hi - lo);
            let mut v = (lo / step).ceil() * step;
            while v <= hi + step * 1e-9 {
                if horizontal {
                    let y = sy(v);
                    let _ = writeln!(
                        svg,
                        r##"<line x1="{MARGIN_LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd" stroke-dasharray="4 3"/>"##,
                        MARGIN_LEFT + plot_w
                    );
                    let _ = writeln!(
                        svg,
                        r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                        MARGIN_LEFT - 6.0,
                        y + 4.0,
                        tick_label(v, step)
                    );
                } else {
                    let x = sx(v);
                    let _ = writeln!(
                        svg,
                        r##"<line x1="{x:.2}" y1="{MARGIN_TOP}" x2="{x:.2}" y2="{:.2}" stroke="#dddddd" stroke-dasharray="4 3"/>"##,
                        MARGIN_TOP + plot_h
                    );
                    let _ = writeln!(
                        svg,
                        r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                        MARGIN_TOP + plot_h + 18.0,
                        tick_label(v, step)
                    );
                }
                v += step;
            }
        }
        let _ = writeln!(
            svg,
            r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            MARGIN_LEFT + plot_w / 2.0,
            HEIGHT - 12.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            svg,
            r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"#,
            MARGIN_TOP + plot_h / 2.0,
            MARGIN_TOP + plot_h / 2.0,
            escape(&self.y_label)
        );

        for (i, series) in self.series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let coords: Vec<String> = series
                .points
                .iter()
                .filter(|(x, y)| x.is_finite() && y.is_finite())
                .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                .collect();
            if !coords.is_empty() {
                let _ = writeln!(
                    svg,
                    r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                    coords.join(" ")
                );
            }
            let ly = MARGIN_TOP + 10.0 + 16.0 * i as f64;
            let lx = MARGIN_LEFT + plot_w + 12.0;
            let _ = writeln!(
                svg,
                r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#,
                lx + 18.0
            );
            let _ = writeln!(
                svg,
                r#"<text x="{}" y="{}">{}</text>"#,
                lx + 24.0,
                ly + 4.0,
                escape(&series.name)
            );
        }
        svg.push_str("</svg>\n");
        svg
    }

    /// A gnuplot script that renders the same plot to `output` (PNG).
    pub fn to_gnuplot(&self, output: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "set terminal pngcairo size {WIDTH},{HEIGHT}");
        let _ = writeln!(s, "set output '{}'", output.replace('\'', "''"));
        let _ = writeln!(s, "set title \"{}\"", self.title.replace('"', "'"));
        let _ = writeln!(s, "set xlabel \"{}\"", self.x_label.replace('"', "'"));
        let _ = writeln!(s, "set ylabel \"{}\"", self.y_label.replace('"', "'"));
        let _ = writeln!(s, "set grid\nset key outside right");
        for (i, series) in self.series.iter().enumerate() {
            let _ = writeln!(s, "$d{i} << EOD");
            for &(x, y) in series.points.iter().filter(|(x, y)| x.is_finite() && y.is_finite()) {
                let _ = writeln!(s, "{x} {y}");
            }
            let _ = writeln!(s, "EOD");
        }
        let plots: Vec<String> = self
            .series
            .iter()
            .enumerate()
            .map(|(i, series)| format!("$d{i} with linespoints title \"{}\"", series.name.replace('"', "'")))
            .collect();
        let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
        s
    }
}

/// One series per curve of the records, plotting `y` against `x`.
pub fn plot_records(title: &str, records: &[SweepRecord], x: Field, y: Field) -> LinePlot {
    LinePlot {
        title: title.into(),
        x_label: x.name().into(),
        y_label: y.name().into(),
        series: group_curves(records)
            .into_iter()
            .map(|(key, rows)| Series {
                name: key.to_string(),
                points: rows.iter().map(|r| (r.field(x), r.field(y))).collect(),
            })
            .collect(),
    }
}
