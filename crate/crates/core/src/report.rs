//! CSV, JSON and SVG serialization of scans, tables and audits. Numbers are
//! written with 12 significant digits so outputs diff cleanly.

use std::fmt::Write as _;

use serde::Serialize;

use crate::boundary::{DiniSample, ScanReport};
use crate::bracket::Bracket;
use crate::geometry::Point;
use crate::localize::{AuditRecord, LocalizationRow, MetricRatioRow, SuiteReport};

/// `x` with 12 significant digits.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.11e}")
    }
}

fn opt(b: Option<Bracket>) -> (String, String) {
    b.map(|b| (num(b.lower), num(b.upper))).unwrap_or_else(|| (String::new(), String::new()))
}

/// Coordinates as `re+imi` joined by `;`.
pub fn point(p: &Point) -> String {
    p.iter()
        .map(|c| format!("{}{}{}i", num(c.re), if c.im < 0.0 || c.im.is_sign_negative() { "" } else { "+" }, num(c.im)))
        .collect::<Vec<_>>()
        .join(";")
}

pub fn scan_csv(r: &ScanReport) -> String {
    let mut s = String::from("n,t_n,lower,upper\n");
    for row in &r.rows {
        let _ = writeln!(s, "{},{},{},{}", row.n, num(row.t), num(row.value.lower), num(row.value.upper));
    }
    s
}

pub fn localization_csv(rows: &[LocalizationRow]) -> String {
    let mut s = String::from(
        "n,t_n,k_omega_lower,k_omega_upper,k_int_lower,k_int_upper,ratio_lower,ratio_upper,diff_lower,diff_upper,flagged\n",
    );
    for r in rows {
        let (rl, ru) = opt(r.ratio);
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.n,
            num(r.t),
            num(r.k_omega.lower),
            num(r.k_omega.upper),
            num(r.k_intersection.lower),
            num(r.k_intersection.upper),
            rl,
            ru,
            num(r.difference.lower),
            num(r.difference.upper),
            r.flagged
        );
    }
    s
}

pub fn metric_ratio_csv(rows: &[MetricRatioRow]) -> String {
    let mut s = String::from("n,t_n,kappa_omega_lower,kappa_omega_upper,kappa_int_lower,kappa_int_upper,ratio_lower,ratio_upper\n");
    for r in rows {
        let (rl, ru) = opt(r.ratio);
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            r.n,
            num(r.t),
            num(r.kappa_omega.lower),
            num(r.kappa_omega.upper),
            num(r.kappa_intersection.lower),
            num(r.kappa_intersection.upper),
            rl,
            ru
        );
    }
    s
}

pub fn audit_csv(rows: &[AuditRecord]) -> String {
    let mut s = String::from("index,inputs,lhs_lower,lhs_upper,rhs_lower,rhs_upper,status,slack\n");
    for (i, r) in rows.iter().enumerate() {
        let inputs = r.inputs.iter().map(point).collect::<Vec<_>>().join(" | ");
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            i,
            inputs,
            num(r.lhs.lower),
            num(r.lhs.upper),
            num(r.rhs.lower),
            num(r.rhs.upper),
            serde_json::to_value(r.status).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
            num(r.slack)
        );
    }
    s
}

pub fn dini_csv(rows: &[DiniSample]) -> String {
    let mut s = String::from("index,z,w,k_lower,k_upper,bound,violated\n");
    for (i, r) in rows.iter().enumerate() {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            i,
            point(&r.z),
            point(&r.w),
            num(r.distance.lower),
            num(r.distance.upper),
            num(r.bound),
            r.violated
        );
    }
    s
}

/// Pretty JSON with a trailing newline.
pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

#[derive(Clone, Debug)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(name: &str, points: Vec<(f64, f64)>) -> Self {
        Self {
            name: name.into(),
            points,
        }
    }
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Self-contained line plot. With `log_x` the abscissa is `log10 x` and
/// nonpositive `x` values are dropped.
pub fn svg_plot(title: &str, x_label: &str, y_label: &str, series: &[Series], log_x: bool) -> String {
    let (w, h) = (640.0, 400.0);
    let (ml, mr, mt, mb) = (70.0, 20.0, 40.0, 50.0);
    let tx = |x: f64| if log_x { x.log10() } else { x };
    let pts: Vec<Vec<(f64, f64)>> = series
        .iter()
        .map(|s| {
            s.points
                .iter()
                .filter(|p| p.1.is_finite() && (!log_x || p.0 > 0.0))
                .map(|&(x, y)| (tx(x), y))
                .collect()
        })
        .collect();
    let all: Vec<&(f64, f64)> = pts.iter().flatten().collect();
    let bounds = |f: fn(&(f64, f64)) -> f64| {
        let lo = all.iter().map(|p| f(p)).fold(f64::INFINITY, f64::min);
        let hi = all.iter().map(|p| f(p)).fold(f64::NEG_INFINITY, f64::max);
        if !lo.is_finite() {
            (0.0, 1.0)
        } else if hi - lo < 1e-12 {
            (lo - 0.5, hi + 0.5)
        } else {
            let pad = 0.05 * (hi - lo);
            (lo - pad, hi + pad)
        }
    };
    let (x0, x1) = bounds(|p| p.0);
    let (y0, y1) = bounds(|p| p.1);
    let sx = |x: f64| ml + (x - x0) / (x1 - x0) * (w - ml - mr);
    let sy = |y: f64| h - mb - (y - y0) / (y1 - y0) * (h - mt - mb);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{:.1}" y="22" text-anchor="middle" font-size="15">{}</text>"#, w / 2.0, escape(title));
    let _ = writeln!(
        s,
        r##"<rect x="{ml}" y="{mt}" width="{:.1}" height="{:.1}" fill="none" stroke="#444"/>"##,
        w - ml - mr,
        h - mt - mb
    );
    for k in 0..=4 {
        let fx = x0 + (x1 - x0) * k as f64 / 4.0;
        let fy = y0 + (y1 - y0) * k as f64 / 4.0;
        let lx = if log_x { format!("{:.3e}", 10f64.powf(fx)) } else { format!("{fx:.3}") };
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            sx(fx),
            h - mb + 16.0,
            lx
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{:.4}</text>"#,
            ml - 6.0,
            sy(fy) + 4.0,
            fy
        );
    }
    let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, (ml + w - mr) / 2.0, h - 12.0, escape(x_label));
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
        (mt + h - mb) / 2.0,
        (mt + h - mb) / 2.0,
        escape(y_label)
    );
    for (i, (ser, p)) in series.iter().zip(&pts).enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = p.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        if path.len() > 1 {
            let _ = writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="1.8" points="{}"/>"#, path.join(" "));
        }
        for &(x, y) in p {
            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}"/>"#, sx(x), sy(y));
        }
        let ly = mt + 14.0 + 16.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{ly:.1}" text-anchor="end" fill="{color}">{}</text>"#,
            w - mr - 8.0,
            escape(&ser.name)
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Convergence plot of a localization table against `t_n`.
pub fn localization_svg(title: &str, rows: &[LocalizationRow], ratio: bool) -> String {
    let series = if ratio {
        vec![
            Series::new("ratio upper", rows.iter().filter_map(|r| r.ratio.map(|b| (r.t, b.upper))).collect()),
            Series::new("ratio lower", rows.iter().filter_map(|r| r.ratio.map(|b| (r.t, b.lower))).collect()),
        ]
    } else {
        vec![
            Series::new("difference upper", rows.iter().map(|r| (r.t, r.difference.upper)).collect()),
            Series::new("difference lower", rows.iter().map(|r| (r.t, r.difference.lower)).collect()),
        ]
    };
    svg_plot(title, "t_n", if ratio { "ratio" } else { "difference" }, &series, true)
}

pub fn scan_svg(title: &str, r: &ScanReport) -> String {
    let series = vec![
        Series::new("upper", r.rows.iter().map(|x| (x.t, x.value.upper)).collect()),
        Series::new("lower", r.rows.iter().map(|x| (x.t, x.value.lower)).collect()),
    ];
    svg_plot(title, "t_n", r.kind.as_str(), &series, true)
}

/// Every output file of a suite run as `(file name, contents)`, in a fixed
/// order.
pub fn suite_files(suite: &SuiteReport) -> Vec<(String, String)> {
    let mut out = vec![("suite.json".to_string(), json(suite))];
    for inst in &suite.instances {
        for s in &inst.scans {
            if let Some(r) = &s.report {
                out.push((format!("{}_{}.csv", inst.name, s.kind.as_str()), scan_csv(r)));
            }
        }
        for (label, t, ratio) in [("multiplicative", &inst.multiplicative, true), ("additive", &inst.additive, false)] {
            if t.rows.is_empty() {
                continue;
            }
            out.push((format!("{}_{label}.csv", inst.name), localization_csv(&t.rows)));
            out.push((
                format!("{}_{label}.svg", inst.name),
                localization_svg(&format!("{} {label}", inst.name), &t.rows, ratio),
            ));
        }
    }
    out
}
