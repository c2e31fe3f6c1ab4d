//! Piecewise-linear curves, their Kobayashi–Royden length, the integrated
//! form of the distance, and ε-geodesic certificates.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::bracket::{Bracket, Method};
use crate::config::EstimatorConfig;
use crate::geometry::{dist, sub, Point};
use crate::metric::Estimator;
use crate::planar::{PlanarConstraint, PlanarDomain};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Path {
    pub nodes: Vec<Point>,
    pub params: Vec<f64>,
}

impl Path {
    pub fn new(nodes: Vec<Point>, params: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 || nodes.len() != params.len() {
            return Err(Error::InvalidInput(
                "a path needs at least two nodes and one parameter per node".into(),
            ));
        }
        if params.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput("path parameters must increase strictly".into()));
        }
        let n = nodes[0].dim();
        if nodes.iter().any(|p| p.dim() != n || !p.is_finite()) {
            return Err(Error::InvalidInput("path nodes must be finite points of one dimension".into()));
        }
        Ok(Self { nodes, params })
    }

    /// Nodes with parameters `0, 1/(N−1), …, 1`.
    pub fn uniform(nodes: Vec<Point>) -> Result<Self> {
        let m = nodes.len().max(2) - 1;
        let params = (0..nodes.len()).map(|i| i as f64 / m as f64).collect();
        Self::new(nodes, params)
    }

    pub fn segment(z: &Point, w: &Point, nodes: usize) -> Self {
        let m = nodes.max(2) - 1;
        let d = sub(w, z);
        let mut pts: Vec<Point> = (0..=m).map(|i| z.offset(i as f64 / m as f64, &d)).collect();
        pts[m] = w.clone();
        Self::uniform(pts).expect("valid segment")
    }

    pub fn constant(z: &Point) -> Self {
        Self::uniform(vec![z.clone(), z.clone()]).expect("two nodes")
    }

    pub fn start(&self) -> &Point {
        &self.nodes[0]
    }

    pub fn end(&self) -> &Point {
        &self.nodes[self.nodes.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// The point at parameter `t` of the piecewise-linear interpolant.
    pub fn at(&self, t: f64) -> Point {
        let i = match self.params.binary_search_by(|p| p.total_cmp(&t)) {
            Ok(i) => return self.nodes[i].clone(),
            Err(i) => i.clamp(1, self.params.len() - 1),
        };
        let (t0, t1) = (self.params[i - 1], self.params[i]);
        let s = ((t - t0) / (t1 - t0)).clamp(0.0, 1.0);
        let d = sub(&self.nodes[i], &self.nodes[i - 1]);
        self.nodes[i - 1].offset(s, &d)
    }
}

/// A path together with the evidence that it is an ε-geodesic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicCertificate {
    pub path: Path,
    /// Kobayashi–Royden length (upper quadrature value).
    pub length: f64,
    /// Certified upper bound for `k_Ω` between the endpoints.
    pub distance_upper: f64,
    /// Achieved slack `max(0, length − distance_upper)`.
    pub epsilon: f64,
    pub cfg: EstimatorConfig,
}

impl GeodesicCertificate {
    pub fn holds(&self, eps: f64) -> bool {
        self.length <= self.distance_upper + eps + 1e-9
    }
}

// Gauss–Legendre nodes and weights on [0, 1]
const GL: [&[(f64, f64)]; 4] = [
    &[(0.5, 1.0)],
    &[(0.211_324_865_405_187_1, 0.5), (0.788_675_134_594_812_9, 0.5)],
    &[
        (0.112_701_665_379_258_3, 0.277_777_777_777_777_8),
        (0.5, 0.444_444_444_444_444_4),
        (0.887_298_334_620_741_7, 0.277_777_777_777_777_8),
    ],
    &[
        (0.069_431_844_202_973_7, 0.173_927_422_568_726_9),
        (0.330_009_478_207_571_9, 0.326_072_577_431_273_1),
        (0.669_990_521_792_428_1, 0.326_072_577_431_273_1),
        (0.930_568_155_797_026_3, 0.173_927_422_568_726_9),
    ],
];

/// Length bracket of the straight segment `a → b`.
pub fn segment_length(est: &Estimator, a: &[C64], b: &[C64], seg: usize) -> Result<Bracket> {
    if a == b {
        return Ok(Bracket::zero());
    }
    let cfg = est.config();
    let domain = est.domain();
    let delta = domain.boundary_distance_unchecked(a).min(domain.boundary_distance_unchecked(b));
    // sub-pieces scale with the segment length relative to the boundary distance
    let mut pieces = (2.0 * dist(a, b) / delta).ceil().clamp(1.0, 64.0) as usize;
    if delta < cfg.refine_delta {
        pieces *= 2;
    }
    let rule = GL[cfg.quad_points - 1];
    let v = sub(b, a);
    let (mut lo, mut up) = (0.0, 0.0);
    let h = 1.0 / pieces as f64;
    for p in 0..pieces {
        for &(x, wgt) in rule {
            let s = (p as f64 + x) * h;
            let pt: Vec<C64> = a.iter().zip(&v).map(|(a, v)| a + v * s).collect();
            if !domain.contains_unchecked(&pt) {
                return Err(Error::PathEscapes(seg));
            }
            let k = est.metric_fast(&pt, &v);
            lo += wgt * h * k.lower;
            up += wgt * h * k.upper;
        }
    }
    Ok(Bracket::new(lo, up, Method::Curve, Method::Curve))
}

/// Per-segment length brackets.
pub fn segment_lengths(est: &Estimator, path: &Path) -> Result<Vec<Bracket>> {
    est.domain().check_dim(path.start().dim())?;
    for (i, p) in path.nodes.iter().enumerate() {
        if !est.domain().contains_unchecked(p) {
            return Err(Error::PathEscapes(i.saturating_sub(1)));
        }
    }
    let idx: Vec<usize> = (0..path.len() - 1).collect();
    crate::par::map(&idx, |&i| segment_length(est, &path.nodes[i], &path.nodes[i + 1], i))
        .into_iter()
        .collect()
}

/// Kobayashi–Royden length `∫ κ_Ω(γ; γ′)` by composite Gauss–Legendre
/// quadrature of the metric bracket.
pub fn kr_length(est: &Estimator, path: &Path) -> Result<Bracket> {
    let segs = segment_lengths(est, path)?;
    let (lo, up) = segs
        .iter()
        .fold((0.0, 0.0), |(l, u), b| (l + b.lower, u + b.upper));
    Ok(Bracket::new(lo, up, Method::Curve, Method::Curve))
}

/// Order-independent key so that `(z, w)` and `(w, z)` run identical
/// computations.
fn canonical<'a>(z: &'a Point, w: &'a Point) -> (&'a Point, &'a Point, bool) {
    let key = |p: &Point| -> Vec<(u64, u64)> {
        p.iter().map(|c| (c.re.to_bits(), c.im.to_bits())).collect()
    };
    if key(z) <= key(w) {
        (z, w, false)
    } else {
        (w, z, true)
    }
}

fn reversed(path: Path) -> Path {
    let t_end = *path.params.last().expect("nonempty");
    let t0 = path.params[0];
    let nodes = path.nodes.into_iter().rev().collect();
    let params = path.params.iter().rev().map(|t| t0 + t_end - t).collect();
    Path { nodes, params }
}

/// Initial curves: the geodesic of the complex-line slice (exact on model
/// domains), the straight segment, and a logarithmic spiral that avoids the
/// origin for kinds built on the punctured plane.
fn initial_paths(est: &Estimator, z: &Point, w: &Point, nodes: usize) -> Vec<Path> {
    let m = nodes.max(2) - 1;
    let d = sub(w, z);
    let mut out = Vec::new();
    if let Some(cs) = est.domain().constraints() {
        let pcs: Vec<PlanarConstraint> = cs.iter().filter_map(|c| c.slice(z, &d)).collect();
        if let Ok(g) = PlanarDomain::new(&pcs) {
            let pts = g.geodesic(C64::new(0.0, 0.0), C64::new(1.0, 0.0), m);
            if pts.iter().all(|p| p.re.is_finite() && p.im.is_finite() && g.contains(*p)) {
                let mut nodes: Vec<Point> = pts.iter().map(|&s| Point(z.iter().zip(&d).map(|(a, b)| a + b * s).collect())).collect();
                nodes[0] = z.clone();
                nodes[m] = w.clone();
                if let Ok(p) = Path::uniform(nodes) {
                    out.push(p);
                }
            }
        }
    }
    out.push(Path::segment(z, w, nodes));
    if est.domain().constraints().is_none() {
        let nodes: Vec<Point> = (0..=m)
            .map(|i| {
                let s = i as f64 / m as f64;
                Point(
                    z.iter()
                        .zip(w.iter())
                        .map(|(a, b)| {
                            if *a == C64::new(0.0, 0.0) || *b == C64::new(0.0, 0.0) {
                                a + (b - a) * s
                            } else {
                                (a.ln() * (1.0 - s) + b.ln() * s).exp()
                            }
                        })
                        .collect(),
                )
            })
            .collect();
        if let Ok(p) = Path::uniform(nodes) {
            out.push(p);
        }
    }
    out
}

/// Node-perturbation pattern search minimizing the upper length.
fn minimize_curve(est: &Estimator, path: Path) -> Result<(Path, Vec<Bracket>)> {
    let mut path = path;
    let mut segs = segment_lengths(est, &path)?;
    let n = path.start().dim();
    let domain = est.domain();
    let mut step = 0.25;
    let mut dirs = Vec::new();
    for j in 0..n {
        for u in [C64::new(1.0, 0.0), C64::new(-1.0, 0.0), C64::new(0.0, 1.0), C64::new(0.0, -1.0)] {
            let mut e = vec![C64::new(0.0, 0.0); n];
            e[j] = u;
            dirs.push(e);
        }
    }
    for _ in 0..est.config().curve_sweeps {
        let mut improved = false;
        for i in 1..path.len() - 1 {
            let node = path.nodes[i].clone();
            let scale = step * domain.boundary_distance_unchecked(&node);
            let mut best = segs[i - 1].upper + segs[i].upper;
            for e in &dirs {
                let cand = node.offset(scale, e);
                if !domain.contains_unchecked(&cand) {
                    continue;
                }
                let (Ok(a), Ok(b)) = (
                    segment_length(est, &path.nodes[i - 1], &cand, i - 1),
                    segment_length(est, &cand, &path.nodes[i + 1], i),
                ) else {
                    continue;
                };
                if a.upper + b.upper < best - 1e-15 {
                    best = a.upper + b.upper;
                    path.nodes[i] = cand.clone();
                    segs[i - 1] = a;
                    segs[i] = b;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
            if step < 1e-4 {
                break;
            }
        }
    }
    Ok((path, segs))
}

fn total(segs: &[Bracket]) -> Bracket {
    let (lo, up) = segs
        .iter()
        .fold((0.0, 0.0), |(l, u), b| (l + b.lower, u + b.upper));
    Bracket::new(lo, up, Method::Curve, Method::Curve)
}

/// Shortest curve found from the initial candidates, optionally refined by
/// node perturbation.
pub fn curve_upper(est: &Estimator, z: &Point, w: &Point, nodes: usize, refine: bool) -> Result<(Path, Bracket)> {
    let mut best: Option<(Path, Vec<Bracket>)> = None;
    for p in initial_paths(est, z, w, nodes) {
        if let Ok(segs) = segment_lengths(est, &p) {
            let better = best
                .as_ref()
                .map(|(_, s)| total(&segs).upper < total(s).upper)
                .unwrap_or(true);
            if better {
                best = Some((p, segs));
            }
        }
    }
    let (path, segs) = best.ok_or(Error::PathEscapes(0))?;
    let (path, segs) = if refine { minimize_curve(est, path)? } else { (path, segs) };
    Ok((path, total(&segs)))
}

/// Kobayashi distance bracket: certified lower bounds from the metric
/// module, uppers from analytic discs and from curve lengths.
pub fn kobayashi_distance(est: &Estimator, z: &Point, w: &Point) -> Result<Bracket> {
    Ok(distance_with_path(est, z, w)?.0)
}

fn distance_with_path(est: &Estimator, z: &Point, w: &Point) -> Result<(Bracket, Option<Path>)> {
    est.check_point(z)?;
    est.check_point(w)?;
    if z == w {
        return Ok((Bracket::zero(), None));
    }
    let (a, b, flipped) = canonical(z, w);
    let mut br = match est.lempert_unchecked(a, b, true) {
        Ok(br) => br,
        Err(Error::Unsupported(_)) => {
            let (lo, ml) = est.distance_lower(a, b, true);
            Bracket::new(lo, f64::INFINITY, ml, Method::Vacuous)
        }
        Err(e) => return Err(e),
    };
    let mut path = None;
    if !(br.rel_width() <= est.config().search_gap) {
        if let Ok((p, len)) = curve_upper(est, a, b, est.config().path_nodes, true) {
            if len.upper < br.upper {
                br.cut(len.upper, Method::Curve);
                path = Some(if flipped { reversed(p) } else { p });
            }
        }
    }
    if !br.upper.is_finite() {
        return Err(Error::Unsupported("no finite upper bound for this pair".into()));
    }
    Ok((br.clamped(), path))
}

/// Finds a path whose length is within `eps` of the certified distance
/// upper bound, doubling the node count up to the configured cap.
pub fn find_epsilon_geodesic(est: &Estimator, z: &Point, w: &Point, eps: f64) -> Result<GeodesicCertificate> {
    if !(eps > 0.0) {
        return Err(Error::InvalidInput("epsilon must be positive".into()));
    }
    let cfg = est.config().clone();
    let (dist_b, found) = distance_with_path(est, z, w)?;
    if z == w {
        return Ok(GeodesicCertificate {
            path: Path::constant(z),
            length: 0.0,
            distance_upper: 0.0,
            epsilon: 0.0,
            cfg,
        });
    }
    let upper = dist_b.upper;
    let make = |path: Path, length: f64| GeodesicCertificate {
        path,
        length,
        distance_upper: upper,
        epsilon: (length - upper).max(0.0),
        cfg: cfg.clone(),
    };
    if let Some(p) = found {
        let len = kr_length(est, &p)?.upper;
        if len <= upper + eps {
            return Ok(make(p, len));
        }
    }
    let (a, b, flipped) = canonical(z, w);
    let mut nodes = cfg.path_nodes;
    loop {
        for refine in [false, true] {
            if let Ok((p, len)) = curve_upper(est, a, b, nodes, refine) {
                if len.upper <= upper + eps {
                    let p = if flipped { reversed(p) } else { p };
                    return Ok(make(p, len.upper));
                }
            }
        }
        if nodes >= cfg.max_path_nodes {
            return Err(Error::CertificateFailed(cfg.max_path_nodes));
        }
        nodes = (2 * nodes - 1).min(cfg.max_path_nodes);
    }
}

/// Joins `σ_z` (ending at `o`) and `σ_w` (starting at `o`). The joined
/// length is the exact sum; `ε′` is measured against a fresh distance upper
/// bound between the outer endpoints.
pub fn concatenate(est: &Estimator, first: &GeodesicCertificate, second: &GeodesicCertificate) -> Result<GeodesicCertificate> {
    if dist(first.path.end(), second.path.start()) > 1e-12 {
        return Err(Error::EndpointMismatch);
    }
    let mut nodes = first.path.nodes.clone();
    let mut params = first.path.params.clone();
    let shift = params.last().copied().unwrap_or(0.0) - second.path.params[0];
    for (p, t) in second.path.nodes.iter().zip(&second.path.params).skip(1) {
        nodes.push(p.clone());
        params.push(t + shift);
    }
    let path = Path { nodes, params };
    let length = first.length + second.length;
    let upper = kobayashi_distance(est, path.start(), path.end())?.upper;
    Ok(GeodesicCertificate {
        path,
        length,
        distance_upper: upper,
        epsilon: (length - upper).max(0.0),
        cfg: est.config().clone(),
    })
}

/// Same trace with parameters equal to cumulative Kobayashi–Royden length,
/// so the speed is 1 on average over every segment. Zero-length segments
/// are merged.
pub fn reparametrize_arclength(est: &Estimator, path: &Path) -> Result<Path> {
    let segs = segment_lengths(est, path)?;
    let total_len: f64 = segs.iter().map(|b| b.upper).sum();
    if !(total_len > 0.0) {
        return Err(Error::ZeroLength);
    }
    let mut nodes = vec![path.nodes[0].clone()];
    let mut params = vec![0.0];
    let mut acc = 0.0;
    for (i, s) in segs.iter().enumerate() {
        if s.upper <= 0.0 {
            continue;
        }
        acc += s.upper;
        nodes.push(path.nodes[i + 1].clone());
        params.push(acc);
    }
    Path::new(nodes, params)
}

/// Distance from a point to a path, sampled at the nodes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathDistance {
    /// `min_i k(γ(t_i), o)` as a bracket.
    pub bracket: Bracket,
    /// Node attaining the smallest upper bound.
    pub argmin: usize,
    /// Half the largest segment length: the continuous minimum is at least
    /// `bracket.lower − slack`.
    pub slack: f64,
}

pub fn path_distance_to_point(est: &Estimator, path: &Path, o: &Point) -> Result<PathDistance> {
    est.check_point(o)?;
    let segs = segment_lengths(est, path)?;
    let rows: Vec<Result<Bracket>> = crate::par::map(&path.nodes, |p| {
        if p == o {
            return Ok(Bracket::zero());
        }
        let (a, b, _) = canonical(p, o);
        match est.lempert_unchecked(a, b, false) {
            Ok(br) => Ok(br),
            Err(Error::Unsupported(_)) => kobayashi_distance(est, p, o),
            Err(e) => Err(e),
        }
    });
    let rows: Vec<Bracket> = rows.into_iter().collect::<Result<_>>()?;
    let lower = rows.iter().map(|b| b.lower).fold(f64::INFINITY, f64::min);
    let (argmin, up) = rows
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.upper.total_cmp(&b.1.upper).then(a.0.cmp(&b.0)))
        .map(|(i, b)| (i, *b))
        .expect("nonempty");
    let slack = segs.iter().map(|b| b.upper).fold(0.0, f64::max) / 2.0;
    Ok(PathDistance {
        bracket: Bracket::new(lower, up.upper, Method::Derived, up.method_upper),
        argmin,
        slack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DomainSpec;
    use approx::assert_relative_eq;

    fn est(d: DomainSpec) -> Estimator {
        Estimator::new(d, EstimatorConfig::default()).unwrap()
    }

    #[test]
    fn segment_length_in_the_disc() {
        let e = est(DomainSpec::UnitDisc);
        let p = Path::segment(&Point::from(0.0), &Point::from(0.5), 33);
        let l = kr_length(&e, &p).unwrap();
        assert_relative_eq!(l.upper, 0.5f64.atanh(), max_relative = 1e-9);
        assert_relative_eq!(l.lower, l.upper, max_relative = 1e-12);
        let c = Path::constant(&Point::from(0.3));
        assert_eq!(kr_length(&e, &c).unwrap().upper, 0.0);
        let pd = est(DomainSpec::polydisc(2));
        let p = Path::segment(&Point::real(&[0.0, 0.0]), &Point::real(&[0.5, 0.0]), 33);
        assert_relative_eq!(kr_length(&pd, &p).unwrap().upper, 0.5f64.atanh(), max_relative = 1e-9);
    }

    #[test]
    fn escaping_paths_are_rejected() {
        let e = est(DomainSpec::UnitDisc);
        let p = Path::uniform(vec![Point::from(0.0), Point::from(1.5)]).unwrap();
        assert!(matches!(kr_length(&e, &p), Err(Error::PathEscapes(_))));
    }

    #[test]
    fn distance_examples() {
        let e = est(DomainSpec::UnitDisc);
        let b = kobayashi_distance(&e, &Point::from(0.0), &Point::from(0.5)).unwrap();
        assert!(b.contains(0.5f64.atanh(), 1e-12) && b.width() <= 1e-4);
        let l = est(DomainSpec::Lens);
        let (z, w) = (Point::scalar(C64::new(0.6, 0.1)), Point::scalar(C64::new(0.9, -0.2)));
        let b = kobayashi_distance(&l, &z, &w).unwrap();
        let exact = l.oracle_distance(&z, &w).unwrap();
        assert!(b.contains(exact, 1e-9), "{b:?} {exact}");
    }

    #[test]
    fn geodesics_and_certificates() {
        let e = est(DomainSpec::UnitDisc);
        let g = find_epsilon_geodesic(&e, &Point::from(0.0), &Point::from(0.5), 0.01).unwrap();
        assert!(g.holds(0.01));
        let g = find_epsilon_geodesic(&e, &Point::from(-0.9), &Point::from(0.9), 0.05).unwrap();
        assert!(g.holds(0.05));
        let exact = (1.8f64 / 1.81).atanh();
        assert!(g.length >= exact - 1e-6 && g.length <= exact + 0.05);
        let g = find_epsilon_geodesic(&e, &Point::from(0.3), &Point::from(0.3), 0.05).unwrap();
        assert_eq!(g.length, 0.0);
        assert!(find_epsilon_geodesic(&e, &Point::from(0.3), &Point::from(0.1), 0.0).is_err());
    }

    #[test]
    fn punctured_plane_curves_avoid_the_puncture() {
        let e = est(DomainSpec::PuncturedPlane);
        let g = find_epsilon_geodesic(&e, &Point::from(-1.0), &Point::from(1.0), 0.05).unwrap();
        assert!(g.path.nodes.iter().all(|p| p[0].norm() > 0.5));
        assert_eq!(g.length, 0.0);
    }

    #[test]
    fn concatenation() {
        let e = est(DomainSpec::UnitDisc);
        let a = find_epsilon_geodesic(&e, &Point::from(0.5), &Point::from(0.0), 0.01).unwrap();
        let b = find_epsilon_geodesic(&e, &Point::from(0.0), &Point::from(-0.5), 0.01).unwrap();
        let j = concatenate(&e, &a, &b).unwrap();
        assert_eq!(j.length, a.length + b.length);
        assert_relative_eq!(j.length, 2.0 * 0.5f64.atanh(), max_relative = 1e-9);
        assert_relative_eq!(j.epsilon, 2.0 * 0.5f64.atanh() - 0.8f64.atanh(), epsilon = 1e-9);
        let c = GeodesicCertificate {
            path: Path::constant(&Point::from(0.0)),
            length: 0.0,
            distance_upper: 0.0,
            epsilon: 0.0,
            cfg: EstimatorConfig::default(),
        };
        let k = concatenate(&e, &a, &c).unwrap();
        assert_relative_eq!(k.epsilon, a.epsilon, epsilon = 1e-12);
        assert_eq!(concatenate(&e, &b, &b), Err(Error::EndpointMismatch));
    }

    #[test]
    fn arclength_parameters() {
        let e = est(DomainSpec::UnitDisc);
        let p = Path::segment(&Point::from(0.0), &Point::from(0.9), 10);
        let q = reparametrize_arclength(&e, &p).unwrap();
        for (node, t) in q.nodes.iter().zip(&q.params) {
            assert_relative_eq!(*t, node[0].re.atanh(), epsilon = 1e-7);
        }
        let r = reparametrize_arclength(&e, &q).unwrap();
        for (a, b) in q.params.iter().zip(&r.params) {
            assert_relative_eq!(a, b, epsilon = 1e-12);
        }
        assert_eq!(reparametrize_arclength(&e, &Path::constant(&Point::from(0.1))), Err(Error::ZeroLength));
    }

    #[test]
    fn distance_to_path() {
        let e = est(DomainSpec::UnitDisc);
        let p = Path::segment(&Point::from(-0.5), &Point::from(0.5), 11);
        let d = path_distance_to_point(&e, &p, &Point::from(0.0)).unwrap();
        assert_eq!(d.bracket.upper, 0.0);
        let p = Path::segment(&Point::from(0.8), &Point::from(0.9), 11);
        let d = path_distance_to_point(&e, &p, &Point::from(0.0)).unwrap();
        assert_relative_eq!(d.bracket.lower, 0.8f64.atanh(), epsilon = 1e-12);
        assert_eq!(d.argmin, 0);
    }
}
