//! Log-log SVG plot of cost against `1/d_H`, one series per model and
//! algorithm. The output depends only on the CSV text.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::error::{LabError, Result};
use crate::fit::{fit_power_law, scaling_points};
use crate::record::parse_csv;

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 72.0;
const RIGHT: f64 = 210.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 56.0;
const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

struct Axis {
    lo: f64,
    hi: f64,
}

impl Axis {
    fn new(values: impl Iterator<Item = f64>) -> Axis {
        let (mut lo, mut hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
        if hi - lo < 1e-9 {
            lo -= 0.5;
            hi += 0.5;
        }
        let pad = 0.05 * (hi - lo);
        Axis { lo: lo - pad, hi: hi + pad }
    }

    fn frac(&self, log_v: f64) -> f64 {
        (log_v - self.lo) / (self.hi - self.lo)
    }

    /// Tick values (as `(log10 value, label)`) at 1, 2, 5 times powers of ten,
    /// thinned to decades when there are many.
    fn ticks(&self) -> Vec<(f64, String)> {
        let mut out = Vec::new();
        let decades = (self.hi - self.lo).ceil() as i32;
        let mantissas: &[u32] = if decades > 2 { &[1] } else { &[1, 2, 5] };
        for k in self.lo.floor() as i32..=self.hi.ceil() as i32 {
            for &m in mantissas {
                let lv = (m as f64).log10() + k as f64;
                if lv >= self.lo && lv <= self.hi {
                    out.push((lv, tick_label(m, k)));
                }
            }
        }
        out
    }
}

fn tick_label(m: u32, k: i32) -> String {
    if k >= 0 {
        format!("{}", m as u64 * 10u64.pow(k as u32))
    } else {
        let digits = (-k) as usize;
        format!("0.{}{}", "0".repeat(digits - 1), m)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders the CSV produced by an experiment.
pub fn render_svg(csv_text: &str) -> Result<String> {
    let records = parse_csv(csv_text)?;
    let names: std::collections::BTreeSet<String> =
        records.iter().filter(|r| r.error.is_none()).map(|r| r.series()).collect();
    let series: BTreeMap<String, Vec<(f64, f64)>> = names
        .into_iter()
        .map(|name| {
            let mut pts = scaling_points(&records, &name);
            pts.retain(|&(x, y)| x > 0.0 && y > 0.0 && x.is_finite());
            pts.sort_by(|a, b| a.0.total_cmp(&b.0));
            (name, pts)
        })
        .filter(|(_, pts)| !pts.is_empty())
        .collect();
    if series.is_empty() {
        return Err(LabError::Fit("no plottable rows".into()));
    }
    let all = || series.values().flatten();
    let xa = Axis::new(all().map(|p| p.0.log10()));
    let ya = Axis::new(all().map(|p| p.1.log10()));
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let px = |x: f64| LEFT + xa.frac(x.log10()) * pw;
    let py = |y: f64| TOP + (1.0 - ya.frac(y.log10())) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r##"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="#444"/>"##);
    for (lv, label) in xa.ticks() {
        let x = LEFT + xa.frac(lv) * pw;
        let _ = writeln!(s, r##"<line x1="{x:.2}" y1="{TOP}" x2="{x:.2}" y2="{:.2}" stroke="#ddd"/>"##, TOP + ph);
        let _ = writeln!(s, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{label}</text>"#, TOP + ph + 16.0);
    }
    for (lv, label) in ya.ticks() {
        let y = TOP + (1.0 - ya.frac(lv)) * ph;
        let _ = writeln!(s, r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/>"##, LEFT + pw);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{label}</text>"#, LEFT - 6.0, y + 4.0);
    }
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">1 / d_H</text>"#, LEFT + pw / 2.0, HEIGHT - 12.0);
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">queries or samples</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0
    );
    for (i, (name, pts)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
        let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#, path.join(" "));
        for &(x, y) in pts {
            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#, px(x), py(y));
        }
        let label = match fit_power_law(pts) {
            Ok(f) => format!("{name} (slope {:.2})", f.slope),
            Err(_) => name.clone(),
        };
        let ly = TOP + 14.0 + 20.0 * i as f64;
        let lx = LEFT + pw + 14.0;
        let _ = writeln!(s, r#"<line x1="{lx:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-width="2"/>"#, ly - 4.0, lx + 18.0, ly - 4.0);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{ly:.2}">{}</text>"#, lx + 24.0, escape(&label));
    }
    s.push_str("</svg>\n");
    Ok(s)
}
