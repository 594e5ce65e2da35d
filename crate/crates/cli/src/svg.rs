//! Minimal self-contained SVG plots.

use std::fmt::Write;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    /// `x` holds left bin edges; bars run to the next edge (the last bar
    /// reuses the previous width, or 1 when there is a single bin).
    Histogram,
    Line,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Series {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

const W: f64 = 640.0;
const H: f64 = 420.0;
const PAD: f64 = 56.0;

fn bounds(v: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = v.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, lo + 0.5)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn emit_svg(series: &Series, kind: PlotKind, config_hash: &str) -> Result<String, CliError> {
    if series.x.is_empty() || series.x.len() != series.y.len() {
        return Err(CliError::Usage("cannot plot an empty or ragged series".into()));
    }
    let widths: Vec<f64> = match kind {
        PlotKind::Histogram => {
            let n = series.x.len();
            (0..n)
                .map(|i| {
                    if i + 1 < n {
                        series.x[i + 1] - series.x[i]
                    } else if n > 1 {
                        series.x[n - 1] - series.x[n - 2]
                    } else {
                        1.0
                    }
                })
                .collect()
        }
        PlotKind::Line => vec![0.0; series.x.len()],
    };
    let (x0, x1) = bounds(series.x.iter().zip(&widths).flat_map(|(x, w)| [*x, x + w]));
    let (mut y0, y1) = bounds(series.y.iter().copied());
    if kind == PlotKind::Histogram {
        y0 = y0.min(0.0);
    }
    let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(s, "<!-- config-hash: {config_hash} -->");
    let _ = writeln!(s, "<desc>config-hash {config_hash}</desc>");
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="15">{}</text>"#,
        W / 2.0,
        escape(&series.title)
    );
    // axes
    let _ = writeln!(
        s,
        r#"<path d="M{PAD} {} L{} {} M{PAD} {} L{PAD} {PAD}" stroke="black" fill="none"/>"#,
        H - PAD,
        W - PAD,
        H - PAD,
        H - PAD
    );
    for (v, anchor_x, anchor_y, label) in
        [(x0, sx(x0), H - PAD + 16.0, "middle"), (x1, sx(x1), H - PAD + 16.0, "middle")]
    {
        let _ = writeln!(
            s,
            r#"<text x="{anchor_x:.2}" y="{anchor_y:.2}" text-anchor="{label}" font-family="sans-serif" font-size="11">{v:.4}</text>"#
        );
    }
    for v in [y0, y1] {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="11">{v:.4}</text>"#,
            PAD - 4.0,
            sy(v) + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="13">{}</text>"#,
        W / 2.0,
        H - 14.0,
        escape(&series.x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 16 {})">{}</text>"#,
        H / 2.0,
        H / 2.0,
        escape(&series.y_label)
    );
    match kind {
        PlotKind::Histogram => {
            for ((x, y), w) in series.x.iter().zip(&series.y).zip(&widths) {
                let (left, right) = (sx(*x), sx(x + w));
                let (top, base) = (sy(y.max(y0)), sy(y0));
                let _ = writeln!(
                    s,
                    r##"<rect x="{left:.2}" y="{top:.2}" width="{:.2}" height="{:.2}" fill="#4a72b0" stroke="white"/>"##,
                    (right - left).max(0.0),
                    (base - top).max(0.0)
                );
            }
        }
        PlotKind::Line => {
            let pts: Vec<String> =
                series.x.iter().zip(&series.y).map(|(x, y)| format!("{:.2},{:.2}", sx(*x), sy(*y))).collect();
            let _ = writeln!(
                s,
                r##"<polyline points="{}" fill="none" stroke="#4a72b0" stroke-width="1.5"/>"##,
                pts.join(" ")
            );
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}
