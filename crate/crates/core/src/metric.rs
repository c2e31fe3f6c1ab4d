//! Pointwise estimators for `κ_Ω`, `l_Ω` and lower bounds for `k_Ω`.
//!
//! Lower bounds come from closed forms, holomorphic projections onto planar
//! regions containing the image of `Ω`, balls containing `Ω`, and the
//! ambient domain of an intersection. Upper bounds come from explicit discs:
//! extremal discs of complex-line slices, products of factor discs, the disc
//! of radius `δ_Ω(z)`, and optimized polynomial discs.

use std::ops::Range;

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::bracket::{Bracket, Method};
use crate::config::{DiscSearch, EstimatorConfig};
use crate::disc::{lempert_disc, metric_disc};
use crate::geometry::{
    dist, inner, norm, norm_sqr, normalized, sub, Constraint, DomainSpec, NeighbourhoodShape,
    NeighbourhoodSpec,
};
use crate::optim::{nelder_mead, NmOptions};
use crate::planar::{PlanarConstraint, PlanarDomain};
use crate::{Error, Result};

/// Kobayashi distance of the unit ball for the metric normalized to
/// `κ(0; v) = ‖v‖`.
pub fn ball_distance(z: &[C64], w: &[C64]) -> f64 {
    let (nz, nw) = (norm(z), norm(w));
    let mut wedge = 0.0;
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            wedge += (z[i] * w[j] - z[j] * w[i]).norm_sqr();
        }
    }
    let num = (dist(z, w).powi(2) - wedge).max(0.0);
    let den = (1.0 - nz) * (1.0 + nz) * (1.0 - nw) * (1.0 + nw);
    (num / den).sqrt().asinh()
}

pub fn ball_metric(z: &[C64], v: &[C64]) -> f64 {
    let nz = norm(z);
    let s = (1.0 - nz) * (1.0 + nz);
    (norm_sqr(v) / s + inner(v, z).norm_sqr() / (s * s)).sqrt()
}

/// A quadric constraint `Σ w_j |x_j − c_j|² < r²` as the unit ball of its
/// support coordinates under the diagonal chart `x_j ↦ √w_j (x_j − c_j) / r`.
/// The chart is holomorphic, so ball distances of images are lower bounds
/// for any domain inside the quadric.
fn ball_chart(c: &Constraint) -> Option<(Vec<usize>, Vec<C64>, Vec<f64>)> {
    if let Constraint::Quadric {
        center,
        weights,
        radius,
    } = c
    {
        let support: Vec<usize> = (0..weights.len()).filter(|&j| weights[j] != 0.0).collect();
        if support.is_empty() {
            return None;
        }
        let scales = support.iter().map(|&j| weights[j].sqrt() / radius).collect();
        let c: Vec<C64> = support.iter().map(|&j| center[j]).collect();
        return Some((support, c, scales));
    }
    None
}

fn chart(x: &[C64], support: &[usize], center: &[C64], scales: &[f64], affine: bool) -> Vec<C64> {
    support
        .iter()
        .zip(center)
        .zip(scales)
        .map(|((&j, c), k)| if affine { (x[j] - c) * k } else { x[j] * k })
        .collect()
}

#[derive(Clone, Copy)]
enum Pair<'a> {
    Distance(&'a [C64]),
    Metric(&'a [C64]),
}

/// Estimator for one domain. Cheap to construct; holds no mutable state.
#[derive(Clone, Debug)]
pub struct Estimator {
    domain: DomainSpec,
    cfg: EstimatorConfig,
    constraints: Option<Vec<Constraint>>,
    /// Uniformization when the domain is a planar region with a model.
    planar: Option<PlanarDomain>,
    factors: Vec<(Estimator, Range<usize>)>,
    ambient: Option<Box<Estimator>>,
}

impl Estimator {
    pub fn new(domain: DomainSpec, cfg: EstimatorConfig) -> Result<Self> {
        domain.validate()?;
        cfg.validate()?;
        Ok(Self::build(domain, cfg))
    }

    fn build(domain: DomainSpec, cfg: EstimatorConfig) -> Self {
        let constraints = domain.constraints();
        let planar = match (&constraints, domain.dimension()) {
            (Some(cs), 1) => {
                let pcs: Vec<PlanarConstraint> = cs
                    .iter()
                    .filter_map(|c| c.slice(&[C64::new(0.0, 0.0)], &[C64::new(1.0, 0.0)]))
                    .collect();
                PlanarDomain::new(&pcs).ok()
            }
            _ => None,
        };
        let factors = match &domain {
            DomainSpec::Product { left, right } => {
                let nl = left.dimension();
                let n = domain.dimension();
                vec![
                    (Self::build((**left).clone(), cfg.clone()), 0..nl),
                    (Self::build((**right).clone(), cfg.clone()), nl..n),
                ]
            }
            DomainSpec::Polydisc { dim } if *dim > 1 => (0..*dim)
                .map(|j| (Self::build(DomainSpec::UnitDisc, cfg.clone()), j..j + 1))
                .collect(),
            _ => Vec::new(),
        };
        let ambient = match &domain {
            DomainSpec::Intersection { domain: d, .. } => {
                Some(Box::new(Self::build((**d).clone(), cfg.clone())))
            }
            _ => None,
        };
        Self {
            domain,
            cfg,
            constraints,
            planar,
            factors,
            ambient,
        }
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn config(&self) -> &EstimatorConfig {
        &self.cfg
    }

    pub fn with_config(&self, cfg: EstimatorConfig) -> Self {
        Self::build(self.domain.clone(), cfg)
    }

    /// Estimator for another domain with the same settings.
    pub fn for_domain(&self, domain: DomainSpec) -> Result<Self> {
        Self::new(domain, self.cfg.clone())
    }

    pub fn is_convex(&self) -> bool {
        self.constraints.is_some()
    }

    pub fn check_point(&self, z: &[C64]) -> Result<()> {
        if !self.domain.contains(z)? {
            return Err(Error::OutsideDomain);
        }
        Ok(())
    }

    fn search_enabled(&self, b: &Bracket) -> bool {
        match self.cfg.disc_search {
            DiscSearch::Always => true,
            DiscSearch::Never => false,
            DiscSearch::Auto => b.rel_width() > self.cfg.search_gap,
        }
    }

    // ---------------------------------------------------------------- oracles

    /// Exact Kobayashi distance for kinds with a closed form.
    pub fn oracle_distance(&self, z: &[C64], w: &[C64]) -> Option<f64> {
        if z == w {
            return Some(0.0);
        }
        match &self.domain {
            DomainSpec::PuncturedPlane => Some(0.0),
            DomainSpec::EuclideanBall { .. } => Some(ball_distance(z, w)),
            DomainSpec::Polydisc { .. } | DomainSpec::Product { .. } => {
                if let DomainSpec::Polydisc { dim: 1 } = self.domain {
                    return self.planar.as_ref().map(|g| g.distance(z[0], w[0]));
                }
                self.factors
                    .iter()
                    .map(|(f, r)| f.oracle_distance(&z[r.clone()], &w[r.clone()]))
                    .try_fold(0.0f64, |acc, x| x.map(|x| acc.max(x)))
            }
            _ => self.planar.as_ref().map(|g| g.distance(z[0], w[0])),
        }
    }

    /// Exact `κ_Ω(z; v)` for kinds with a closed form.
    pub fn oracle_metric(&self, z: &[C64], v: &[C64]) -> Option<f64> {
        match &self.domain {
            DomainSpec::PuncturedPlane => Some(0.0),
            DomainSpec::EuclideanBall { .. } => Some(ball_metric(z, v)),
            DomainSpec::Polydisc { .. } | DomainSpec::Product { .. } => {
                if let DomainSpec::Polydisc { dim: 1 } = self.domain {
                    return self.planar.as_ref().map(|g| g.metric(z[0], v[0]));
                }
                self.factors
                    .iter()
                    .map(|(f, r)| f.oracle_metric(&z[r.clone()], &v[r.clone()]))
                    .try_fold(0.0f64, |acc, x| x.map(|x| acc.max(x)))
            }
            _ => self.planar.as_ref().map(|g| g.metric(z[0], v[0])),
        }
    }

    // ----------------------------------------------------------- lower bounds

    fn directions(&self, z: &[C64], pair: Pair) -> Vec<Vec<C64>> {
        let n = z.len();
        let mut dirs = Vec::new();
        for j in 0..n {
            let mut e = vec![C64::new(0.0, 0.0); n];
            e[j] = C64::new(1.0, 0.0);
            dirs.push(e);
        }
        match pair {
            Pair::Distance(w) => dirs.extend(normalized(&sub(w, z))),
            Pair::Metric(v) => dirs.extend(normalized(v)),
        }
        let cs = self.constraints.as_deref().unwrap_or(&[]);
        let mut centers = Vec::new();
        for c in cs {
            match c {
                Constraint::Quadric {
                    center, weights, ..
                } => {
                    let rel = |x: &[C64]| -> Vec<C64> {
                        x.iter()
                            .zip(center)
                            .zip(weights)
                            .map(|((x, c), w)| (x - c) * *w)
                            .collect()
                    };
                    dirs.extend(normalized(&rel(z)));
                    if let Pair::Distance(w) = pair {
                        dirs.extend(normalized(&rel(w)));
                    }
                    centers.push(center.clone());
                }
                Constraint::HalfSpace { normal, .. } => dirs.push(normal.clone()),
            }
        }
        for i in 0..centers.len() {
            for j in i + 1..centers.len() {
                dirs.extend(normalized(&sub(&centers[i], &centers[j])));
            }
        }
        dirs
    }

    fn projection_bound(&self, u: &[C64], z: &[C64], pair: Pair) -> f64 {
        let Some(cs) = &self.constraints else {
            return 0.0;
        };
        let projected: Vec<PlanarConstraint> = cs.iter().filter_map(|c| c.project(u)).collect();
        if projected.is_empty() {
            return 0.0;
        }
        let zu = inner(z, u);
        let eval = |g: &PlanarDomain| -> f64 {
            match pair {
                Pair::Distance(w) => {
                    let wu = inner(w, u);
                    if g.contains(zu) && g.contains(wu) {
                        g.distance(zu, wu)
                    } else {
                        0.0
                    }
                }
                Pair::Metric(v) => {
                    if g.contains(zu) {
                        g.metric(zu, inner(v, u))
                    } else {
                        0.0
                    }
                }
            }
        };
        match PlanarDomain::new(&projected) {
            Ok(g) => eval(&g),
            Err(_) => {
                let mut best = 0.0f64;
                for i in 0..projected.len() {
                    for j in i..projected.len() {
                        let sub = if i == j {
                            vec![projected[i]]
                        } else {
                            vec![projected[i], projected[j]]
                        };
                        if let Ok(g) = PlanarDomain::new(&sub) {
                            best = best.max(eval(&g));
                        }
                    }
                }
                best
            }
        }
    }

    fn ball_bounds(&self, z: &[C64], pair: Pair) -> f64 {
        let Some(cs) = &self.constraints else {
            return 0.0;
        };
        cs.iter()
            .filter_map(ball_chart)
            .map(|(s, c, k)| {
                let zc = chart(z, &s, &c, &k, true);
                if norm(&zc) >= 1.0 {
                    return 0.0;
                }
                match pair {
                    Pair::Distance(w) => {
                        let wc = chart(w, &s, &c, &k, true);
                        if norm(&wc) >= 1.0 {
                            0.0
                        } else {
                            ball_distance(&zc, &wc)
                        }
                    }
                    Pair::Metric(v) => ball_metric(&zc, &chart(v, &s, &c, &k, false)),
                }
            })
            .fold(0.0, f64::max)
    }

    /// Best lower bound over the projection family, optionally refined by a
    /// local search over the projection direction.
    fn holomorphic_lower(&self, z: &[C64], pair: Pair, refine: bool) -> (f64, Method) {
        let mut best = (0.0, Method::Vacuous);
        let b = self.ball_bounds(z, pair);
        if b > best.0 {
            best = (b, Method::Inclusion);
        }
        let mut best_u: Option<Vec<C64>> = None;
        let mut best_proj = 0.0;
        for u in self.directions(z, pair) {
            let p = self.projection_bound(&u, z, pair);
            if p > best_proj {
                best_proj = p;
                best_u = Some(u);
            }
        }
        if refine {
            if let Some(u0) = &best_u {
                let x0: Vec<f64> = u0.iter().flat_map(|c| [c.re, c.im]).collect();
                let f = |x: &[f64]| -> f64 {
                    let u: Vec<C64> = x.chunks(2).map(|p| C64::new(p[0], p[1])).collect();
                    match normalized(&u) {
                        Some(u) => -self.projection_bound(&u, z, pair),
                        None => 0.0,
                    }
                };
                let r = nelder_mead(
                    f,
                    &x0,
                    &NmOptions {
                        max_evals: 400,
                        step: 0.05,
                        ftol: 1e-13,
                        restarts: 1,
                    },
                );
                best_proj = best_proj.max(-r.f);
            }
        }
        if best_proj > best.0 {
            best = (best_proj, Method::HalfSpace);
        }
        best
    }

    /// Carathéodory-type lower bound for `k_Ω(z, w)`. Vacuous (0) on kinds
    /// that admit no bounded holomorphic functions of the family.
    pub fn caratheodory_lower(&self, z: &[C64], w: &[C64]) -> Result<(f64, Method)> {
        self.check_point(z)?;
        self.check_point(w)?;
        if z == w {
            return Ok((0.0, Method::Exact));
        }
        Ok(self.caratheodory_unchecked(z, w, true))
    }

    fn caratheodory_unchecked(&self, z: &[C64], w: &[C64], refine: bool) -> (f64, Method) {
        if !self.factors.is_empty() {
            return self
                .factors
                .iter()
                .map(|(f, r)| f.caratheodory_unchecked(&z[r.clone()], &w[r.clone()], refine))
                .fold((0.0, Method::Vacuous), |a, b| if b.0 > a.0 { b } else { a });
        }
        let mut best = self.holomorphic_lower(z, Pair::Distance(w), refine);
        if let Some(amb) = &self.ambient {
            let a = amb.caratheodory_unchecked(z, w, refine);
            if a.0 > best.0 {
                best = (a.0, Method::Inclusion);
            }
        }
        best
    }

    /// Best certified lower bound for `k_Ω(z, w)`.
    pub fn distance_lower(&self, z: &[C64], w: &[C64], refine: bool) -> (f64, Method) {
        if z == w {
            return (0.0, Method::Exact);
        }
        if self.cfg.oracles {
            if let Some(k) = self.oracle_distance(z, w) {
                return (k, Method::Oracle);
            }
        }
        let mut best = self.caratheodory_unchecked(z, w, refine);
        if self.cfg.oracles {
            if let Some(amb) = &self.ambient {
                if let Some(k) = amb.oracle_distance(z, w) {
                    if k > best.0 {
                        best = (k, Method::Inclusion);
                    }
                }
            }
        }
        best
    }

    fn metric_lower(&self, z: &[C64], v: &[C64], refine: bool) -> (f64, Method) {
        if self.cfg.oracles {
            if let Some(k) = self.oracle_metric(z, v) {
                return (k, Method::Oracle);
            }
        }
        if !self.factors.is_empty() {
            return self
                .factors
                .iter()
                .map(|(f, r)| f.metric_lower(&z[r.clone()], &v[r.clone()], refine))
                .fold((0.0, Method::Vacuous), |a, b| if b.0 > a.0 { b } else { a });
        }
        let mut best = self.holomorphic_lower(z, Pair::Metric(v), refine);
        if let Some(amb) = &self.ambient {
            let a = amb.metric_lower(z, v, refine);
            if a.0 > best.0 {
                best = (a.0, Method::Inclusion);
            }
        }
        best
    }

    // ----------------------------------------------------------- upper bounds

    /// The slice `{ζ : z + ζ d ∈ Ω}` as a planar region.
    fn slice(&self, z: &[C64], d: &[C64]) -> Option<std::result::Result<PlanarDomain, Vec<PlanarConstraint>>> {
        let cs = self.constraints.as_ref()?;
        let pcs: Vec<PlanarConstraint> = cs.iter().filter_map(|c| c.slice(z, d)).collect();
        Some(PlanarDomain::new(&pcs).map_err(|_| pcs))
    }

    /// Upper bound for `l_Ω(z, w)` from discs inside the complex line
    /// through `z` and `w`.
    fn slice_distance_upper(&self, z: &[C64], w: &[C64]) -> Option<f64> {
        let d = sub(w, z);
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        match self.slice(z, &d)? {
            Ok(g) => (g.contains(zero) && g.contains(one)).then(|| g.distance(zero, one)),
            Err(pcs) => {
                let g = PlanarDomain {
                    constraints: pcs,
                    model: crate::planar::PlanarModel::Plane,
                };
                (0..=8)
                    .filter_map(|i| {
                        let c = C64::new(i as f64 / 8.0, 0.0);
                        let rho = g.boundary_distance(c);
                        (rho > c.norm().max((one - c).norm())).then(|| {
                            PlanarDomain::disc(c, rho).distance(zero, one)
                        })
                    })
                    .reduce(f64::min)
            }
        }
    }

    fn slice_metric_upper(&self, z: &[C64], v: &[C64]) -> Option<f64> {
        let zero = C64::new(0.0, 0.0);
        match self.slice(z, v)? {
            Ok(g) => g.contains(zero).then(|| g.metric(zero, C64::new(1.0, 0.0))),
            Err(pcs) => {
                let rho = pcs.iter().map(|c| -c.value(zero)).fold(f64::INFINITY, f64::min);
                (rho > 0.0).then(|| 1.0 / rho)
            }
        }
    }

    fn lempert_upper_cheap(&self, z: &[C64], w: &[C64]) -> (f64, Method) {
        if z == w {
            return (0.0, Method::Exact);
        }
        if let DomainSpec::PuncturedPlane = self.domain {
            // ζ ↦ z·exp(ζ log(w/z)/α) omits 0 for every α > 0
            return (0.0, Method::Oracle);
        }
        if !self.factors.is_empty() {
            let up = self
                .factors
                .iter()
                .map(|(f, r)| f.lempert_upper_cheap(&z[r.clone()], &w[r.clone()]).0)
                .fold(0.0, f64::max);
            return (up, Method::Product);
        }
        let mut best = (f64::INFINITY, Method::Vacuous);
        if let Some(s) = self.slice_distance_upper(z, w) {
            best = (s, Method::Slice);
        }
        let dz = self.domain.boundary_distance_unchecked(z);
        let dw = self.domain.boundary_distance_unchecked(w);
        let r = dist(z, w);
        for d in [dz, dw] {
            if r < d {
                let k = (r / d).atanh();
                if k < best.0 {
                    best = (k, Method::InscribedDisc);
                }
            }
        }
        best
    }

    fn metric_upper_cheap(&self, z: &[C64], v: &[C64]) -> (f64, Method) {
        if let DomainSpec::PuncturedPlane = self.domain {
            // ζ ↦ z·exp(λζ v/z) for every λ > 0
            return (0.0, Method::Oracle);
        }
        if !self.factors.is_empty() {
            let up = self
                .factors
                .iter()
                .map(|(f, r)| f.metric_upper_cheap(&z[r.clone()], &v[r.clone()]).0)
                .fold(0.0, f64::max);
            return (up, Method::Product);
        }
        let mut best = (
            norm(v) / self.domain.boundary_distance_unchecked(z),
            Method::InscribedDisc,
        );
        if let Some(s) = self.slice_metric_upper(z, v) {
            if s < best.0 {
                best = (s, Method::Slice);
            }
        }
        best
    }

    // ------------------------------------------------------------- operations

    /// Bracket for `κ_Ω(z; v)` without input validation or disc search; the
    /// integrand of curve lengths.
    pub fn metric_fast(&self, z: &[C64], v: &[C64]) -> Bracket {
        if v.iter().all(|c| *c == C64::new(0.0, 0.0)) {
            return Bracket::zero();
        }
        let (up, mu) = self.metric_upper_cheap(z, v);
        let (lo, ml) = if self.cfg.oracles {
            match self.oracle_metric(z, v) {
                Some(k) => (k, Method::Oracle),
                None => self.metric_lower(z, v, false),
            }
        } else {
            self.metric_lower(z, v, false)
        };
        Bracket::new(lo, up, ml, mu).clamped()
    }

    /// Kobayashi–Royden metric `κ_Ω(z; v)`.
    pub fn kr_metric(&self, z: &[C64], v: &[C64]) -> Result<Bracket> {
        self.check_point(z)?;
        self.domain.check_dim(v.len())?;
        if v.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidInput("tangent vector must be finite".into()));
        }
        let mut b = self.metric_fast(z, v);
        if b.upper == 0.0 {
            return Ok(b);
        }
        if self.search_enabled(&b) {
            let (lo, ml) = self.metric_lower(z, v, true);
            b.raise(lo, ml);
            if self.search_enabled(&b) {
                if let Some(fit) = metric_disc(&self.domain, z, v, &self.cfg) {
                    b.cut(fit.value, Method::DiscOptimization);
                }
            }
        }
        Ok(b.clamped())
    }

    /// Lempert function `l_Ω(z, w) = tanh⁻¹ l̃_Ω(z, w)`.
    pub fn lempert(&self, z: &[C64], w: &[C64]) -> Result<Bracket> {
        self.check_point(z)?;
        self.check_point(w)?;
        self.lempert_unchecked(z, w, true)
    }

    pub(crate) fn lempert_unchecked(&self, z: &[C64], w: &[C64], search: bool) -> Result<Bracket> {
        if z == w {
            return Ok(Bracket::zero());
        }
        let (up, mu) = self.lempert_upper_cheap(z, w);
        let (lo, ml) = self.distance_lower(z, w, false);
        let mut b = Bracket::new(lo, up, ml, mu);
        if search && self.search_enabled(&b) {
            let (lo, ml) = self.distance_lower(z, w, true);
            b.raise(lo, ml);
            if self.search_enabled(&b) && self.is_convex() {
                for (a, c) in [(z, w), (w, z)] {
                    if let Some(fit) = lempert_disc(&self.domain, a, c, &self.cfg) {
                        b.cut(fit.value.atanh(), Method::DiscOptimization);
                    }
                }
            }
        }
        if !b.upper.is_finite() {
            return Err(Error::Unsupported(
                "no analytic disc through both points is available for this kind".into(),
            ));
        }
        Ok(b.clamped())
    }

    /// Bracket for `inf { l̃_Ω(z, s) : s ∈ Ω ∖ D }` with `D = Ω ∩ N`, sampled
    /// over `∂N ∩ Ω`. The lower end is heuristic: it is the certified lower
    /// bound at the best sampled target minus the improvement that local
    /// refinement found beyond the initial sample.
    pub fn lempert_tilde_to_set(&self, z: &[C64], d: &NeighbourhoodSpec) -> Result<Bracket> {
        self.check_point(z)?;
        d.validate()?;
        self.domain.check_dim(d.dim())?;
        if !d.contains(z) {
            return Err(Error::InvalidInput("base point must lie in D".into()));
        }
        let targets = self.set_targets(d);
        let inside: Vec<&Vec<C64>> = targets
            .iter()
            .filter(|s| self.domain.contains_unchecked(s) && self.domain.defining(s) < -1e-12)
            .collect();
        if inside.is_empty() {
            return Err(Error::EmptySet);
        }
        let score = |s: &[C64]| -> f64 {
            if !self.domain.contains_unchecked(s) {
                return f64::INFINITY;
            }
            self.lempert_unchecked(z, s, false)
                .map(|b| b.upper)
                .unwrap_or(f64::INFINITY)
        };
        let scores = crate::par::map(&inside, |s| score(s));
        let (i0, s0) = scores
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1).then(a.0.cmp(&b.0)))
            .expect("nonempty");
        let first = *s0;
        // refine the best target along ∂N
        let param = self.target_param(d);
        let x0 = param.encode(inside[i0]);
        let r = nelder_mead(
            |x| score(&param.decode(x)),
            &x0,
            &NmOptions {
                max_evals: 300,
                step: 0.05,
                ftol: 1e-12,
                restarts: 1,
            },
        );
        let (best_s, best_up) = if r.f < first {
            (param.decode(&r.x), r.f)
        } else {
            (inside[i0].clone(), first)
        };
        let slack = (first - best_up).max(0.0);
        let (lo, _) = self.distance_lower(z, &best_s, false);
        let lo = (lo - slack).max(0.0);
        Ok(Bracket::new(lo.tanh(), best_up.tanh(), Method::Heuristic, Method::Slice).clamped())
    }

    fn set_targets(&self, d: &NeighbourhoodSpec) -> Vec<Vec<C64>> {
        let k = self.cfg.set_targets;
        let n = d.dim();
        let param = self.target_param(d);
        if n == 1 {
            return (0..k)
                .map(|i| param.decode(&[2.0 * std::f64::consts::PI * i as f64 / k as f64]))
                .collect();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed ^ 0x7a67);
        let mut out = Vec::with_capacity(k + 4 * n);
        for j in 0..n {
            for s in [C64::new(1.0, 0.0), C64::new(-1.0, 0.0), C64::new(0.0, 1.0), C64::new(0.0, -1.0)] {
                let mut x = vec![0.0; 2 * n];
                x[2 * j] = s.re;
                x[2 * j + 1] = s.im;
                out.push(param.decode(&x));
            }
        }
        for _ in 0..k {
            let x: Vec<f64> = (0..2 * n).map(|_| StandardNormal.sample(&mut rng)).collect();
            out.push(param.decode(&x));
        }
        out
    }

    fn target_param(&self, d: &NeighbourhoodSpec) -> TargetParam {
        TargetParam {
            spec: d.clone(),
            // scale tangential moves on a half-space boundary by the domain size
            extent: if self.domain.is_bounded() { 1.0 } else { 4.0 },
        }
    }
}

/// Parametrization of `∂N` used by the target search.
struct TargetParam {
    spec: NeighbourhoodSpec,
    extent: f64,
}

impl TargetParam {
    fn decode(&self, x: &[f64]) -> Vec<C64> {
        let c = &self.spec.center;
        let n = c.dim();
        match &self.spec.shape {
            NeighbourhoodShape::EuclideanBall { radius } => {
                if n == 1 && x.len() == 1 {
                    return vec![c[0] + C64::from_polar(*radius, x[0])];
                }
                let u: Vec<C64> = x.chunks(2).map(|p| C64::new(p[0], p[1])).collect();
                let u = normalized(&u).unwrap_or_else(|| {
                    let mut e = vec![C64::new(0.0, 0.0); n];
                    e[0] = C64::new(1.0, 0.0);
                    e
                });
                c.iter().zip(&u).map(|(c, u)| c + u * *radius).collect()
            }
            NeighbourhoodShape::HalfSpace { normal, offset } => {
                let y: Vec<C64> = if n == 1 && x.len() == 1 {
                    vec![C64::new(0.0, x[0].tan().clamp(-1e6, 1e6) * self.extent) * normal[0]]
                } else {
                    x.chunks(2).map(|p| C64::new(p[0], p[1]) * self.extent).collect()
                };
                let along = inner(&y, normal).re;
                c.iter()
                    .zip(normal.iter())
                    .zip(&y)
                    .map(|((c, nn), y)| c + nn * *offset + y - nn * along)
                    .collect()
            }
        }
    }

    fn encode(&self, s: &[C64]) -> Vec<f64> {
        let c = &self.spec.center;
        let n = c.dim();
        match &self.spec.shape {
            NeighbourhoodShape::EuclideanBall { .. } => {
                if n == 1 {
                    vec![(s[0] - c[0]).arg()]
                } else {
                    s.iter().zip(c.iter()).flat_map(|(s, c)| [(s - c).re, (s - c).im]).collect()
                }
            }
            NeighbourhoodShape::HalfSpace { normal, offset } => {
                let y: Vec<C64> = s
                    .iter()
                    .zip(c.iter())
                    .zip(normal.iter())
                    .map(|((s, c), nn)| s - c - nn * *offset)
                    .collect();
                if n == 1 {
                    vec![((y[0] / normal[0]).im / self.extent).atan()]
                } else {
                    y.iter().flat_map(|y| [y.re / self.extent, y.im / self.extent]).collect()
                }
            }
        }
    }
}
