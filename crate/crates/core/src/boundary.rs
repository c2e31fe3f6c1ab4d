//! Gromov products and boundary-point classifiers as finite convergence
//! scans. Divergence claims are read off lower bounds and boundedness claims
//! off upper bounds.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bracket::{Bracket, Method};
use crate::geometry::{make_sequence, normalized, BoundarySequence, NeighbourhoodSpec, Point, Schedule, Split};
use crate::metric::Estimator;
use crate::paths::{find_epsilon_geodesic, kobayashi_distance, path_distance_to_point};
use crate::{Error, Result};

/// Rows inspected by the verdict rules.
pub const WINDOW: usize = 4;
/// Final lower bound a diverging scan must reach.
pub const DIVERGENCE_THRESHOLD: f64 = 3.0;
/// Width of the band that counts as bounded.
pub const BAND: f64 = 0.5;
/// Lower bounds at or below this count as zero.
pub const ZERO_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GromovSample {
    pub z: Point,
    pub w: Point,
    pub o: Point,
    pub value: Bracket,
}

/// `(z|w)_o = ½(k(z,o) + k(w,o) − k(z,w))` with conservative bracket
/// arithmetic. The lower end is clipped at 0, which the triangle inequality
/// guarantees.
pub fn gromov_product(est: &Estimator, z: &Point, w: &Point, o: &Point) -> Result<GromovSample> {
    let zo = kobayashi_distance(est, z, o)?;
    let wo = if w == z { zo } else { kobayashi_distance(est, w, o)? };
    let zw = kobayashi_distance(est, z, w)?;
    let lower = (0.5 * (zo.lower + wo.lower - zw.upper)).max(0.0);
    let upper = 0.5 * (zo.upper + wo.upper - zw.lower);
    Ok(GromovSample {
        z: z.clone(),
        w: w.clone(),
        o: o.clone(),
        value: Bracket::new(lower, upper.max(lower), Method::Derived, Method::Derived),
    })
}

/// Finite surrogate for a limit statement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Diverging,
    Bounded,
    BoundedBelow,
    Unbounded,
    Positive,
    Vanishing,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Diverging => "diverging",
            Verdict::Bounded => "bounded",
            Verdict::BoundedBelow => "bounded-below",
            Verdict::Unbounded => "unbounded",
            Verdict::Positive => "positive",
            Verdict::Vanishing => "vanishing",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanKind {
    WPoint,
    WeakW,
    VPoint,
    GromovProperty,
    KPoint,
    HyperbolicityAt,
    HyperbolicityNear,
    WellBehaved,
}

impl ScanKind {
    pub const ALL: [ScanKind; 8] = [
        ScanKind::WPoint,
        ScanKind::WeakW,
        ScanKind::VPoint,
        ScanKind::GromovProperty,
        ScanKind::KPoint,
        ScanKind::HyperbolicityAt,
        ScanKind::HyperbolicityNear,
        ScanKind::WellBehaved,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ScanKind::WPoint => "wpoint",
            ScanKind::WeakW => "weak-w",
            ScanKind::VPoint => "vpoint",
            ScanKind::GromovProperty => "gromov",
            ScanKind::KPoint => "kpoint",
            ScanKind::HyperbolicityAt => "hyperbolic-at",
            ScanKind::HyperbolicityNear => "hyperbolic-near",
            ScanKind::WellBehaved => "well-behaved",
        }
    }

    /// True when this verdict is the one a v-, w- or k-point (or a
    /// hyperbolic point) produces.
    pub fn passes(&self, v: Verdict) -> bool {
        match self {
            ScanKind::WPoint | ScanKind::WeakW | ScanKind::WellBehaved => v == Verdict::Diverging,
            ScanKind::GromovProperty => v == Verdict::Bounded,
            ScanKind::VPoint | ScanKind::KPoint => v == Verdict::BoundedBelow,
            ScanKind::HyperbolicityAt | ScanKind::HyperbolicityNear => v == Verdict::Positive,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub n: usize,
    pub t: f64,
    pub value: Bracket,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub kind: ScanKind,
    pub rows: Vec<ScanRow>,
    pub verdict: Verdict,
    /// Least-squares slope of the lower bounds against `n`.
    pub trend_slope: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl ScanReport {
    pub fn passes(&self) -> bool {
        self.kind.passes(self.verdict)
    }

    fn new(kind: ScanKind, rows: Vec<ScanRow>, verdict: Verdict) -> Self {
        let trend_slope = slope(&rows.iter().map(|r| (r.n as f64, r.value.lower)).collect::<Vec<_>>());
        Self {
            kind,
            rows,
            verdict,
            trend_slope,
            note: None,
        }
    }

    fn with_note(mut self, note: &str) -> Self {
        self.note = Some(note.into());
        self
    }
}

pub fn slope(pts: &[(f64, f64)]) -> f64 {
    let pts: Vec<&(f64, f64)> = pts.iter().filter(|p| p.1.is_finite()).collect();
    if pts.len() < 2 {
        return 0.0;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

fn tail(rows: &[ScanRow]) -> &[ScanRow] {
    &rows[rows.len().saturating_sub(WINDOW)..]
}

/// Diverging: the last lowers increase strictly and the final one reaches the
/// threshold. Bounded: the last uppers stay inside a band.
pub fn divergence_verdict(rows: &[ScanRow]) -> Verdict {
    if rows.len() < WINDOW {
        return Verdict::Inconclusive;
    }
    let t = tail(rows);
    let increasing = t.windows(2).all(|w| w[1].value.lower > w[0].value.lower);
    if increasing && t[WINDOW - 1].value.lower >= DIVERGENCE_THRESHOLD {
        return Verdict::Diverging;
    }
    let (lo, hi) = t.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), r| {
        (a.min(r.value.upper), b.max(r.value.upper))
    });
    if hi.is_finite() && hi - lo <= BAND {
        return Verdict::Bounded;
    }
    Verdict::Inconclusive
}

/// Bounded below: over the last rows the lower bounds neither drop by more
/// than the band nor trend downward. Unbounded: the uppers decrease strictly
/// and the final one is below `−threshold`.
pub fn lower_bound_verdict(rows: &[ScanRow]) -> Verdict {
    if rows.len() < WINDOW {
        return Verdict::Inconclusive;
    }
    let t = tail(rows);
    let decreasing = t.windows(2).all(|w| w[1].value.upper < w[0].value.upper);
    if decreasing && t[WINDOW - 1].value.upper <= -DIVERGENCE_THRESHOLD {
        return Verdict::Unbounded;
    }
    let first = t[0].value.lower;
    let floor = t.iter().map(|r| r.value.lower).fold(f64::INFINITY, f64::min);
    let s = slope(&t.iter().map(|r| (r.n as f64, r.value.lower)).collect::<Vec<_>>());
    if first.is_finite() && floor >= first - BAND && s >= -0.1 {
        return Verdict::BoundedBelow;
    }
    Verdict::Inconclusive
}

/// Positive: every lower bound is positive and the last ones do not collapse
/// toward 0. Vanishing: the last uppers are zero or decrease to below 1e-3.
pub fn positivity_verdict(rows: &[ScanRow]) -> Verdict {
    if rows.is_empty() {
        return Verdict::Inconclusive;
    }
    let t = tail(rows);
    if t.iter().all(|r| r.value.upper <= ZERO_TOL)
        || (t.len() == WINDOW
            && t.windows(2).all(|w| w[1].value.upper < w[0].value.upper)
            && t[WINDOW - 1].value.upper < 1e-3)
    {
        return Verdict::Vanishing;
    }
    let floor = rows.iter().map(|r| r.value.lower).fold(f64::INFINITY, f64::min);
    let last = t[t.len() - 1].value.lower;
    if floor > ZERO_TOL && last >= 0.5 * t[0].value.lower {
        return Verdict::Positive;
    }
    Verdict::Inconclusive
}

/// Sequence length, tangential split and neighbourhood radius shared by the
/// scans.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanPlan {
    pub steps: usize,
    pub split: f64,
    /// Radius of the default neighbourhood `U = ball(p, radius)`.
    pub radius: f64,
    pub epsilon: f64,
}

impl Default for ScanPlan {
    fn default() -> Self {
        Self {
            steps: 12,
            split: 0.25,
            radius: 0.5,
            epsilon: 0.05,
        }
    }
}

impl ScanPlan {
    pub fn validate(&self) -> Result<()> {
        if self.steps < WINDOW || self.steps > crate::geometry::MAX_SEQUENCE_LEN {
            return Err(Error::InvalidInput(format!(
                "scan steps must be in {WINDOW}..={}",
                crate::geometry::MAX_SEQUENCE_LEN
            )));
        }
        if !(self.split > 0.0 && self.split < 1.0) || !(self.radius > 0.0) || !(self.epsilon > 0.0) {
            return Err(Error::InvalidInput("split must be in (0,1); radius and epsilon positive".into()));
        }
        Ok(())
    }

    pub fn neighbourhood(&self, p: &Point) -> NeighbourhoodSpec {
        NeighbourhoodSpec::ball(p.clone(), self.radius)
    }
}

impl std::str::FromStr for ScanKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScanKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown scan `{s}`")))
    }
}

/// Runs one scan. `u` is used by the w- and k-point scans, `q` and `o` by the
/// scans built on a fixed base point.
pub fn run_scan(
    est: &Estimator,
    kind: ScanKind,
    p: &Point,
    u: &NeighbourhoodSpec,
    q: Option<&Point>,
    o: &Point,
    plan: &ScanPlan,
) -> Result<ScanReport> {
    match kind {
        ScanKind::WPoint => w_point_scan(est, p, u, plan),
        ScanKind::WeakW => weak_w_scan(est, p, o, plan),
        ScanKind::VPoint => v_point_scan(est, p, q, o, plan),
        ScanKind::GromovProperty => gromov_property_scan(est, p, q, o, plan),
        ScanKind::KPoint => k_point_scan(est, p, u, plan),
        ScanKind::HyperbolicityAt => hyperbolicity_at_scan(est, p, plan),
        ScanKind::HyperbolicityNear => hyperbolicity_near_scan(est, p, plan),
        ScanKind::WellBehaved => well_behaved_scan(est, p, o, plan),
    }
}

/// `z_n → p` along the approach direction, optionally split into pairs.
pub fn approach(est: &Estimator, p: &Point, plan: &ScanPlan, split: bool) -> Result<BoundarySequence> {
    plan.validate()?;
    let dir = est.domain().approach_direction(p)?;
    let split = split.then_some(Split::Tangential { factor: plan.split });
    make_sequence(est.domain(), p, &Schedule::dyadic(plan.steps), Some(&dir), split.as_ref())
}

fn scan_rows<F>(seq: &BoundarySequence, f: F) -> Result<Vec<ScanRow>>
where
    F: Fn(usize) -> Result<Bracket> + Sync + Send,
{
    let idx: Vec<usize> = (0..seq.len()).collect();
    crate::par::map(&idx, |&i| f(i))
        .into_iter()
        .enumerate()
        .map(|(i, b)| {
            b.map(|value| ScanRow {
                n: seq.indices[i],
                t: seq.offsets[i],
                value,
            })
        })
        .collect()
}

fn sample_inside(est: &Estimator, x: &[C64]) -> bool {
    est.domain().contains_unchecked(x) && est.domain().boundary_distance_unchecked(x) >= 1e-3
}

/// Basepoints in `Ω ∖ U`: eight just outside `∂U`, eight spread out
/// (farthest-point sampling from a seeded cloud).
pub fn o_grid(est: &Estimator, u: &NeighbourhoodSpec) -> Result<Vec<Point>> {
    u.validate()?;
    est.domain().check_dim(u.dim())?;
    let n = u.dim();
    let reach = match &u.shape {
        crate::geometry::NeighbourhoodShape::EuclideanBall { radius } => 2.0 * radius + 1.0,
        crate::geometry::NeighbourhoodShape::HalfSpace { offset, .. } => 2.0 * offset + 1.0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(est.config().seed ^ 0x0961d);
    let cons = u.constraint();
    let mut cloud: Vec<(f64, Vec<C64>)> = Vec::new();
    for _ in 0..4096 {
        let x: Vec<C64> = u
            .center
            .iter()
            .map(|c| c + C64::new(rng.gen_range(-reach..reach), rng.gen_range(-reach..reach)))
            .collect();
        if !cons.contains(&x) && sample_inside(est, &x) {
            cloud.push((cons.value(&x), x));
        }
    }
    // points straight outward from the center also reach thin regions
    if let crate::geometry::NeighbourhoodShape::EuclideanBall { radius } = &u.shape {
        if let Ok(dir) = est.domain().approach_direction(&u.center) {
            for s in [1.02, 1.1, 1.5] {
                let x = u.center.offset(radius * s, &dir);
                if sample_inside(est, &x) {
                    cloud.push((cons.value(&x), x.0));
                }
            }
        }
    }
    if cloud.is_empty() {
        return Err(Error::EmptySet);
    }
    cloud.sort_by(|a, b| a.0.total_cmp(&b.0));
    let near_pool: Vec<Vec<C64>> = cloud.iter().take(64.max(cloud.len() / 16)).map(|c| c.1.clone()).collect();
    let mut out = farthest_points(&near_pool, 8);
    let all: Vec<Vec<C64>> = cloud.into_iter().map(|c| c.1).collect();
    out.extend(farthest_points(&all, 8));
    out.dedup();
    debug_assert!(out.iter().all(|x| x.len() == n));
    Ok(out.into_iter().map(Point).collect())
}

fn farthest_points(pool: &[Vec<C64>], k: usize) -> Vec<Vec<C64>> {
    let mut out: Vec<Vec<C64>> = Vec::new();
    if pool.is_empty() {
        return out;
    }
    out.push(pool[0].clone());
    let mut dmin: Vec<f64> = pool.iter().map(|x| crate::geometry::dist(x, &pool[0])).collect();
    while out.len() < k.min(pool.len()) {
        let (i, d) = dmin
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
            .expect("nonempty");
        if *d <= 0.0 {
            break;
        }
        let x = pool[i].clone();
        for (dm, y) in dmin.iter_mut().zip(pool) {
            *dm = dm.min(crate::geometry::dist(y, &x));
        }
        out.push(x);
    }
    out
}

/// `min_{o ∈ grid} (z_n|w_n)_o` with `o` ranging over a grid in `Ω ∖ U`.
pub fn w_point_scan(est: &Estimator, p: &Point, u: &NeighbourhoodSpec, plan: &ScanPlan) -> Result<ScanReport> {
    u.check_centered_on(est.domain())?;
    let grid = o_grid(est, u)?;
    let seq = approach(est, p, plan, true)?;
    let rows = scan_rows(&seq, |i| {
        let mut best: Option<Bracket> = None;
        for o in &grid {
            let g = gromov_product(est, seq.z(i), seq.w(i), o)?.value;
            best = Some(match best {
                None => g,
                Some(b) => Bracket::new(b.lower.min(g.lower), b.upper.min(g.upper), Method::Derived, Method::Derived),
            });
        }
        best.ok_or(Error::EmptySet)
    })?;
    let v = divergence_verdict(&rows);
    Ok(ScanReport::new(ScanKind::WPoint, rows, v))
}

/// `(z_n|w_n)_o` for a fixed basepoint.
pub fn weak_w_scan(est: &Estimator, p: &Point, o: &Point, plan: &ScanPlan) -> Result<ScanReport> {
    est.check_point(o)?;
    let seq = approach(est, p, plan, true)?;
    let rows = scan_rows(&seq, |i| Ok(gromov_product(est, seq.z(i), seq.w(i), o)?.value))?;
    let v = divergence_verdict(&rows);
    Ok(ScanReport::new(ScanKind::WeakW, rows, v))
}

fn far_point(est: &Estimator, p: &Point, q: Option<&Point>) -> Result<Point> {
    let q = match q {
        Some(q) => q.clone(),
        None => est.domain().antipode(p).ok_or_else(|| {
            Error::Unsupported("no antipodal boundary point; pass q explicitly".into())
        })?,
    };
    est.domain().check_dim(q.dim())?;
    if crate::geometry::dist(&q, p) <= 1e-12 {
        return Err(Error::InvalidInput("q must differ from p".into()));
    }
    Ok(q)
}

/// `k(z_n, w_n).lower − k(z_n, o).upper` with `z_n → p`, `w_n → q`.
pub fn v_point_scan(est: &Estimator, p: &Point, q: Option<&Point>, o: &Point, plan: &ScanPlan) -> Result<ScanReport> {
    est.check_point(o)?;
    let q = far_point(est, p, q)?;
    let zs = approach(est, p, plan, false)?;
    let ws = approach(est, &q, plan, false)?;
    let rows = scan_rows(&zs, |i| {
        let zw = kobayashi_distance(est, zs.z(i), ws.z(i))?;
        let zo = kobayashi_distance(est, zs.z(i), o)?;
        let lo = zw.lower - zo.upper;
        Ok(Bracket::new(lo, (zw.upper - zo.lower).max(lo), Method::Derived, Method::Derived))
    })?;
    let v = lower_bound_verdict(&rows);
    Ok(ScanReport::new(ScanKind::VPoint, rows, v))
}

/// `(z_n|w_n)_o` with `z_n → p`, `w_n → q`.
pub fn gromov_property_scan(est: &Estimator, p: &Point, q: Option<&Point>, o: &Point, plan: &ScanPlan) -> Result<ScanReport> {
    est.check_point(o)?;
    let q = far_point(est, p, q)?;
    let zs = approach(est, p, plan, false)?;
    let ws = approach(est, &q, plan, false)?;
    let rows = scan_rows(&zs, |i| Ok(gromov_product(est, zs.z(i), ws.z(i), o)?.value))?;
    let v = divergence_verdict(&rows);
    Ok(ScanReport::new(ScanKind::GromovProperty, rows, v))
}

/// `k(z_n, Ω ∖ U) − ½ log(1/δ_Ω(z_n))`, with the distance to the complement
/// read from the Lempert function to `Ω ∖ U` (equal to `k` on convex kinds).
pub fn k_point_scan(est: &Estimator, p: &Point, u: &NeighbourhoodSpec, plan: &ScanPlan) -> Result<ScanReport> {
    u.check_centered_on(est.domain())?;
    let seq = approach(est, p, plan, false)?.restrict_to(u)?;
    let rows = scan_rows(&seq, |i| {
        let z = seq.z(i);
        let l = est.lempert_tilde_to_set(z, u)?;
        let log_term = 0.5 * (1.0 / est.domain().boundary_distance_unchecked(z)).ln();
        let (lo, up) = (l.lower.min(1.0).atanh(), l.upper.min(1.0).atanh());
        Ok(Bracket::new(lo - log_term, up - log_term, l.method_lower, l.method_upper))
    })?;
    let v = lower_bound_verdict(&rows);
    Ok(ScanReport::new(ScanKind::KPoint, rows, v))
}

/// Unbounded kinds: `l(z_n, w_n)` with `z_n → p` and `‖w_n‖ = 2^n`. Bounded
/// kinds are hyperbolic at every boundary point; their rows record
/// `k(z_n, Ω ∖ U′)` for `U′ = ball(p, radius)`.
pub fn hyperbolicity_at_scan(est: &Estimator, p: &Point, plan: &ScanPlan) -> Result<ScanReport> {
    let seq = approach(est, p, plan, false)?;
    if est.domain().is_bounded() {
        let u = plan.neighbourhood(p);
        let seq = seq.restrict_to(&u)?;
        let rows = scan_rows(&seq, |i| {
            let l = est.lempert_tilde_to_set(seq.z(i), &u)?;
            Ok(Bracket::new(l.lower.atanh(), l.upper.min(1.0).atanh(), l.method_lower, l.method_upper))
        })?;
        return Ok(ScanReport::new(ScanKind::HyperbolicityAt, rows, Verdict::Positive).with_note("bounded domain"));
    }
    let dir = seq.direction.clone();
    let rows = scan_rows(&seq, |i| {
        let r = 2f64.powi(seq.indices[i] as i32);
        let far = far_in_domain(est, p, &dir, r)?;
        est.lempert(seq.z(i), &far)
    })?;
    let v = positivity_verdict(&rows);
    Ok(ScanReport::new(ScanKind::HyperbolicityAt, rows, v))
}

fn far_in_domain(est: &Estimator, p: &Point, dir: &[C64], r: f64) -> Result<Point> {
    let base = normalized(p).unwrap_or_else(|| dir.to_vec());
    for cand in [p.offset(r, dir), p.offset(r, &base), Point(base.iter().map(|c| c * r).collect())] {
        if est.domain().contains_unchecked(&cand) {
            return Ok(cand);
        }
    }
    Err(Error::SequenceEscapes(0))
}

/// `k(z_n, w_n).lower` on distinct pairs co-approaching `p`.
pub fn hyperbolicity_near_scan(est: &Estimator, p: &Point, plan: &ScanPlan) -> Result<ScanReport> {
    let seq = approach(est, p, plan, true)?;
    let rows = scan_rows(&seq, |i| kobayashi_distance(est, seq.z(i), seq.w(i)))?;
    let v = positivity_verdict(&rows);
    Ok(ScanReport::new(ScanKind::HyperbolicityNear, rows, v))
}

/// Distance from `o` to ε-geodesics joining `z_n` and `w_n`.
pub fn well_behaved_scan(est: &Estimator, p: &Point, o: &Point, plan: &ScanPlan) -> Result<ScanReport> {
    est.check_point(o)?;
    let seq = approach(est, p, plan, true)?;
    let rows = scan_rows(&seq, |i| {
        let g = find_epsilon_geodesic(est, seq.z(i), seq.w(i), plan.epsilon)?;
        Ok(path_distance_to_point(est, &g.path, o)?.bracket)
    })?;
    let v = divergence_verdict(&rows);
    Ok(ScanReport::new(ScanKind::WellBehaved, rows, v))
}

/// Right-hand side of the logarithmic upper estimate
/// `k(z,w) ≤ log(1 + 2‖z−w‖ / √(δ(z)δ(w)))`.
pub fn dini_bound(est: &Estimator, z: &Point, w: &Point) -> Result<f64> {
    let dz = est.domain().boundary_distance(z)?;
    let dw = est.domain().boundary_distance(w)?;
    Ok((1.0 + 2.0 * crate::geometry::dist(z, w) / (dz * dw).sqrt()).ln())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiniSample {
    pub z: Point,
    pub w: Point,
    pub distance: Bracket,
    pub bound: f64,
    pub violated: bool,
}

/// Random pairs within `reach` of `p` checked against [`dini_bound`].
pub fn dini_audit(est: &Estimator, p: &Point, samples: usize, reach: f64) -> Result<Vec<DiniSample>> {
    est.domain().check_dim(p.dim())?;
    let mut rng = ChaCha8Rng::seed_from_u64(est.config().seed ^ 0xd1a1);
    let mut pairs = Vec::with_capacity(samples);
    let mut tries = 0;
    while pairs.len() < samples {
        tries += 1;
        if tries > 1000 * samples.max(1) {
            return Err(Error::EmptySet);
        }
        let mut draw = || -> Point {
            Point(
                p.iter()
                    .map(|c| c + C64::new(rng.gen_range(-reach..reach), rng.gen_range(-reach..reach)))
                    .collect(),
            )
        };
        let (z, w) = (draw(), draw());
        if sample_inside(est, &z) && sample_inside(est, &w) {
            pairs.push((z, w));
        }
    }
    crate::par::map(&pairs, |(z, w)| {
        let distance = kobayashi_distance(est, z, w)?;
        let bound = dini_bound(est, z, w)?;
        Ok(DiniSample {
            z: z.clone(),
            w: w.clone(),
            distance,
            bound,
            violated: distance.lower > bound + 1e-9,
        })
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::EstimatorConfig;
    use crate::geometry::DomainSpec;
    use approx::assert_relative_eq;

    fn est(d: DomainSpec) -> Estimator {
        Estimator::new(d, EstimatorConfig::default()).unwrap()
    }

    #[test]
    fn gromov_examples() {
        let e = est(DomainSpec::UnitDisc);
        let (r, o) = (0.6, Point::from(0.0));
        let g = gromov_product(&e, &Point::from(r), &Point::from(r), &o).unwrap();
        assert_relative_eq!(g.value.mid(), r.atanh(), epsilon = 1e-9);
        let g = gromov_product(&e, &Point::from(r), &Point::from(-r), &o).unwrap();
        assert!(g.value.upper < 1e-9);
        let z = Point::scalar(C64::new(0.3, 0.2));
        let w = Point::from(-0.4);
        let g = gromov_product(&e, &z, &z, &w).unwrap();
        let k = kobayashi_distance(&e, &z, &w).unwrap();
        assert_eq!((g.value.lower, g.value.upper), (k.lower, k.upper));
        let pd = est(DomainSpec::polydisc(2));
        let g = gromov_product(&pd, &Point::real(&[r, 0.0]), &Point::real(&[r, 0.0]), &Point::real(&[0.0, 0.0])).unwrap();
        assert_relative_eq!(g.value.mid(), r.atanh(), epsilon = 1e-9);
    }

    fn rows(vals: &[(f64, f64)]) -> Vec<ScanRow> {
        vals.iter()
            .enumerate()
            .map(|(i, &(l, u))| ScanRow {
                n: i + 1,
                t: 0.5f64.powi(i as i32 + 1),
                value: Bracket::new(l, u, Method::Derived, Method::Derived),
            })
            .collect()
    }

    #[test]
    fn verdict_rules() {
        let grow: Vec<(f64, f64)> = (1..=8).map(|n| (0.5 * n as f64, 0.5 * n as f64 + 0.1)).collect();
        assert_eq!(divergence_verdict(&rows(&grow)), Verdict::Diverging);
        let flat = vec![(0.0, 0.0); 8];
        assert_eq!(divergence_verdict(&rows(&flat)), Verdict::Bounded);
        assert_eq!(positivity_verdict(&rows(&flat)), Verdict::Vanishing);
        let slow: Vec<(f64, f64)> = (1..=8).map(|n| (0.1 * n as f64, 0.2 * n as f64)).collect();
        assert_eq!(divergence_verdict(&rows(&slow)), Verdict::Inconclusive);
        let down: Vec<(f64, f64)> = (1..=8).map(|n| (-0.6 * n as f64, -0.5 * n as f64)).collect();
        assert_eq!(lower_bound_verdict(&rows(&down)), Verdict::Unbounded);
        assert_eq!(lower_bound_verdict(&rows(&grow)), Verdict::BoundedBelow);
        assert_eq!(divergence_verdict(&rows(&grow[..3])), Verdict::Inconclusive);
    }

    #[test]
    fn disc_scans() {
        let e = est(DomainSpec::UnitDisc);
        let p = Point::from(1.0);
        let o = Point::from(0.0);
        let plan = ScanPlan::default();
        let r = weak_w_scan(&e, &p, &o, &plan).unwrap();
        assert_eq!(r.verdict, Verdict::Diverging, "{r:?}");
        assert!((r.trend_slope - 0.5 * 2f64.ln()).abs() < 0.05, "{}", r.trend_slope);
        let r = w_point_scan(&e, &p, &plan.neighbourhood(&p), &plan).unwrap();
        assert_eq!(r.verdict, Verdict::Diverging, "{r:?}");
        let r = v_point_scan(&e, &p, None, &o, &plan).unwrap();
        assert_eq!(r.verdict, Verdict::BoundedBelow, "{r:?}");
        let r = gromov_property_scan(&e, &p, None, &o, &plan).unwrap();
        assert_eq!(r.verdict, Verdict::Bounded);
        assert!(r.rows.last().unwrap().value.upper < 1e-6);
        assert!(v_point_scan(&e, &p, Some(&p), &o, &plan).is_err());
        let r = k_point_scan(&e, &p, &plan.neighbourhood(&p), &plan).unwrap();
        assert_eq!(r.verdict, Verdict::BoundedBelow, "{r:?}");
        let ups: Vec<f64> = r.rows.iter().map(|r| r.value.upper).collect();
        let lows: Vec<f64> = r.rows.iter().map(|r| r.value.lower).collect();
        let (hi, lo) = (ups.iter().cloned().fold(f64::MIN, f64::max), lows.iter().cloned().fold(f64::MAX, f64::min));
        assert!(hi - lo <= 2.0, "{lo} {hi}");
        let r = hyperbolicity_at_scan(&e, &p, &plan).unwrap();
        assert_eq!(r.verdict, Verdict::Positive);
        let r = hyperbolicity_near_scan(&e, &p, &plan).unwrap();
        assert_eq!(r.verdict, Verdict::Positive);
    }

    #[test]
    fn punctured_plane_scans_fail() {
        let e = est(DomainSpec::PuncturedPlane);
        let p = Point::from(0.0);
        let plan = ScanPlan::default();
        let r = weak_w_scan(&e, &p, &Point::from(1.0), &plan).unwrap();
        assert_eq!(r.verdict, Verdict::Bounded);
        let r = w_point_scan(&e, &p, &plan.neighbourhood(&p), &plan).unwrap();
        assert_eq!(r.verdict, Verdict::Bounded);
        let r = k_point_scan(&e, &p, &plan.neighbourhood(&p), &plan).unwrap();
        assert_eq!(r.verdict, Verdict::Unbounded);
        let r = hyperbolicity_at_scan(&e, &p, &plan).unwrap();
        assert_eq!(r.verdict, Verdict::Vanishing);
        let r = hyperbolicity_near_scan(&e, &p, &plan).unwrap();
        assert_eq!(r.verdict, Verdict::Vanishing);
        assert!(v_point_scan(&e, &p, None, &Point::from(1.0), &plan).is_err());
    }

    #[test]
    fn half_plane_is_hyperbolic_at_zero() {
        let e = est(DomainSpec::HalfPlane);
        let r = hyperbolicity_at_scan(&e, &Point::from(0.0), &ScanPlan::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Positive, "{r:?}");
    }

    #[test]
    fn dini_examples() {
        let e = est(DomainSpec::UnitDisc);
        assert_eq!(dini_bound(&e, &Point::from(0.4), &Point::from(0.4)).unwrap(), 0.0);
        let b = dini_bound(&e, &Point::from(0.9), &Point::from(0.8)).unwrap();
        assert_relative_eq!(b, (1.0 + 0.2 / 0.02f64.sqrt()).ln(), epsilon = 1e-12);
        assert!((0.1f64 / 0.28).atanh() <= b);
        let audit = dini_audit(&e, &Point::from(1.0), 50, 0.2).unwrap();
        assert!(audit.iter().all(|s| !s.violated));
    }

    #[test]
    fn o_grid_avoids_the_neighbourhood() {
        let e = est(DomainSpec::ball(2));
        let u = NeighbourhoodSpec::ball(Point::real(&[1.0, 0.0]), 0.5);
        let g = o_grid(&e, &u).unwrap();
        assert!(g.len() >= 10);
        assert!(g.iter().all(|o| !u.contains(o) && e.domain().contains(o).unwrap()));
    }
}
