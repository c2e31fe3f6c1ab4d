//! Browser bindings: planar ε-geodesics, localization tables and a metric
//! heatmap. Each export returns a JSON string; the `*_json` functions are
//! the same operations without the wasm boundary.

use klab_core::localize::{self, LocalizationRow};
use klab_core::{find_epsilon_geodesic, kobayashi_distance, DomainSpec, Estimator, EstimatorConfig, NeighbourhoodSpec, Point, Tangent, C64};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn domain(name: &str) -> Result<DomainSpec, String> {
    match name {
        "disc" => Ok(DomainSpec::UnitDisc),
        "half-plane" => Ok(DomainSpec::HalfPlane),
        "lens" => Ok(DomainSpec::Lens),
        "punctured-plane" => Ok(DomainSpec::PuncturedPlane),
        "ball2" => Ok(DomainSpec::ball(2)),
        _ => Err(format!("unknown domain `{name}`")),
    }
}

fn estimator(d: DomainSpec) -> Result<Estimator, String> {
    Estimator::new(d, EstimatorConfig::fast()).map_err(|e| e.to_string())
}

/// Plot window `(x0, x1, y0, y1)` for a planar domain.
fn window(d: &DomainSpec) -> (f64, f64, f64, f64) {
    match d {
        DomainSpec::HalfPlane => (-2.0, 2.0, 0.0, 4.0),
        DomainSpec::Lens => (0.45, 1.05, -0.3, 0.3),
        DomainSpec::PuncturedPlane => (-2.0, 2.0, -2.0, 2.0),
        _ => (-1.0, 1.0, -1.0, 1.0),
    }
}

pub fn geodesic_json(name: &str, z: (f64, f64), w: (f64, f64), epsilon: f64) -> Result<String, String> {
    let est = estimator(domain(name)?)?;
    let (z, w) = (Point::scalar(C64::new(z.0, z.1)), Point::scalar(C64::new(w.0, w.1)));
    let k = kobayashi_distance(&est, &z, &w).map_err(|e| e.to_string())?;
    let cert = find_epsilon_geodesic(&est, &z, &w, epsilon).map_err(|e| e.to_string())?;
    let path: Vec<[f64; 2]> = cert.path.nodes.iter().map(|p| [p[0].re, p[0].im]).collect();
    Ok(json!({
        "window": window(est.domain()),
        "distance": k,
        "length": cert.length,
        "epsilon": cert.epsilon,
        "path": path,
    })
    .to_string())
}

pub fn localization_json(name: &str, steps: usize) -> Result<String, String> {
    let est = estimator(domain(name)?)?;
    let mut p = vec![C64::new(0.0, 0.0); est.domain().dimension()];
    p[0] = C64::new(1.0, 0.0);
    let p = Point(p);
    let u = NeighbourhoodSpec::ball(p.clone(), 0.5);
    let seq = localize::table_sequence(&est, &p, steps.clamp(4, 12)).map_err(|e| e.to_string())?;
    let rows: Vec<LocalizationRow> = localize::multiplicative_table(&est, &u, &seq).map_err(|e| e.to_string())?;
    let out: Vec<_> = rows
        .iter()
        .map(|r| {
            json!({
                "n": r.n,
                "t": r.t,
                "k_omega": r.k_omega.upper,
                "k_local": r.k_intersection.upper,
                "ratio": r.ratio.map(|b| b.upper),
                "difference": r.difference.upper,
            })
        })
        .collect();
    Ok(json!({ "rows": out }).to_string())
}

/// `log10 κ` upper bounds on an `n × n` grid; `null` outside the domain.
pub fn heatmap_json(name: &str, n: usize, v: (f64, f64)) -> Result<String, String> {
    let est = estimator(domain(name)?)?;
    if est.domain().dimension() != 1 {
        return Err("the heatmap needs a planar domain".into());
    }
    let n = n.clamp(4, 160);
    let (x0, x1, y0, y1) = window(est.domain());
    let v = Tangent::scalar(C64::new(v.0, v.1));
    let mut values = Vec::with_capacity(n * n);
    for i in 0..n {
        // row 0 at the top
        let y = y1 - (y1 - y0) * (i as f64 + 0.5) / n as f64;
        for j in 0..n {
            let x = x0 + (x1 - x0) * (j as f64 + 0.5) / n as f64;
            let z = [C64::new(x, y)];
            let val = est
                .domain()
                .contains(&z)
                .ok()
                .filter(|&inside| inside)
                .map(|_| est.metric_fast(&z, &v).upper.log10())
                .filter(|x| x.is_finite());
            values.push(val);
        }
    }
    Ok(json!({ "window": [x0, x1, y0, y1], "n": n, "values": values }).to_string())
}

#[wasm_bindgen]
pub fn geodesic(domain: &str, z_re: f64, z_im: f64, w_re: f64, w_im: f64, epsilon: f64) -> Result<String, JsValue> {
    geodesic_json(domain, (z_re, z_im), (w_re, w_im), epsilon).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn localization(domain: &str, steps: usize) -> Result<String, JsValue> {
    localization_json(domain, steps).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn heatmap(domain: &str, n: usize, v_re: f64, v_im: f64) -> Result<String, JsValue> {
    heatmap_json(domain, n, (v_re, v_im)).map_err(|e| JsValue::from_str(&e))
}
