//! Polynomial analytic discs `φ(ζ) = base + Σ c_j ζ^j` and the optimizers
//! that turn them into upper bounds for `κ_Ω` and `l̃_Ω` on convex domains.
//!
//! Containment of a candidate is certified on the whole closed disc, not
//! just at samples: the boundary distance of a convex domain is concave, so
//! it is at least `min(δ(φ(ζ_k)), δ(φ(ζ_{k+1})))` on every chord, and the
//! curve `θ ↦ φ(re^{iθ})` stays within `(h²/8)·Σ j²|c_j|r^j` of its chords.
//! If the boundary circle is inside, so is the disc (maximum principle on
//! supporting half-spaces).

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::config::EstimatorConfig;
use crate::geometry::{norm, Constraint, DomainSpec};
use crate::optim::{multistart, NmOptions};
use crate::planar::{PlanarConstraint, PlanarDomain};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyticDisc {
    pub base: Vec<C64>,
    /// `coeffs[j-1]` multiplies `ζ^j`.
    pub coeffs: Vec<Vec<C64>>,
    pub margin: f64,
}

impl AnalyticDisc {
    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn eval(&self, zeta: C64) -> Vec<C64> {
        let mut out = self.base.clone();
        let mut p = C64::new(1.0, 0.0);
        for c in &self.coeffs {
            p *= zeta;
            for (o, cj) in out.iter_mut().zip(c) {
                *o += cj * p;
            }
        }
        out
    }

    /// `φ'(0)`.
    pub fn velocity(&self) -> &[C64] {
        &self.coeffs[0]
    }

    /// `ζ ↦ φ(rζ)`.
    pub fn rescaled(&self, r: f64) -> AnalyticDisc {
        let mut s = 1.0;
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                s *= r;
                c.iter().map(|x| x * s).collect()
            })
            .collect();
        AnalyticDisc {
            base: self.base.clone(),
            coeffs,
            margin: self.margin,
        }
    }

    /// Certifies `φ(Δ̄) ⊂ Ω` with `samples` points on the unit circle.
    /// Only meaningful for convex `Ω`; returns false otherwise.
    pub fn certify(&self, domain: &DomainSpec, samples: usize) -> bool {
        if domain.constraints().is_none() {
            return false;
        }
        let h = 2.0 * PI / samples as f64;
        let curvature: f64 = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| ((i + 1) * (i + 1)) as f64 * norm(c))
            .sum();
        let err = h * h / 8.0 * curvature;
        let mut first = f64::NAN;
        let mut prev = f64::NAN;
        for k in 0..samples {
            let x = self.eval(C64::from_polar(1.0, h * k as f64));
            if !domain.contains_unchecked(&x) || domain.defining(&x) > -self.margin {
                return false;
            }
            let d = domain.boundary_distance_unchecked(&x);
            if k == 0 {
                first = d;
            } else if prev.min(d) <= err {
                return false;
            }
            prev = d;
        }
        prev.min(first) > err
    }

    /// Largest `r ∈ (0, 1]` (to bisection accuracy) such that `φ(r·)` is
    /// certified; `None` if even tiny radii fail.
    pub fn certified_radius(&self, domain: &DomainSpec, samples: usize) -> Option<f64> {
        if self.certify(domain, samples) {
            return Some(1.0);
        }
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..40 {
            let mid = 0.5 * (lo + hi);
            if self.rescaled(mid).certify(domain, samples) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo > 0.0).then_some(lo)
    }
}

/// An optimized and certified disc with the bound it proves.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscFit {
    pub disc: AnalyticDisc,
    /// `κ` upper bound, or `l̃` upper bound for two-point problems.
    pub value: f64,
    /// Radius applied by the certification repair.
    pub radius: f64,
    pub start: usize,
    pub evals: usize,
}

fn circle(m: usize) -> Vec<C64> {
    (0..m)
        .map(|k| C64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64))
        .collect()
}

fn unpack(x: &[f64], n: usize) -> Vec<Vec<C64>> {
    x.chunks(2 * n)
        .map(|c| c.chunks(2).map(|p| C64::new(p[0], p[1])).collect())
        .collect()
}

/// `count` starts: the `seeds` themselves, then Gaussian perturbations of the
/// last `dim` entries of the first seed.
fn starts(dim: usize, count: usize, scale: f64, seed: u64, seeds: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let first = seeds[0].clone();
    let mut out = seeds;
    while out.len() < count.max(1) {
        out.push(
            first
                .iter()
                .enumerate()
                .map(|(i, f)| {
                    let g: f64 = StandardNormal.sample(&mut rng);
                    if i + dim >= first.len() { f + scale * g } else { *f }
                })
                .collect(),
        );
    }
    out
}

fn slice(cs: &[Constraint], z: &[C64], d: &[C64]) -> Option<PlanarDomain> {
    let pcs: Vec<PlanarConstraint> = cs.iter().filter_map(|c| c.slice(z, d)).collect();
    PlanarDomain::new(&pcs).ok()
}

/// Coefficients `a_k` (of `ζ^k`, `k = 1..=d`) of a disc through `z` are
/// corrected to hit `z + dw` at `α` and rewritten as the `q` of
/// `ζ dw/α + ζ(ζ − α) q(ζ)`.
fn interpolating_q(mut a: Vec<Vec<C64>>, dw: &[C64], alpha: f64) -> Vec<Vec<C64>> {
    let d = a.len();
    for (i, dwi) in dw.iter().enumerate() {
        let at_alpha: C64 = a.iter().enumerate().map(|(k, ak)| ak[i] * alpha.powi(k as i32 + 1)).sum();
        a[0][i] += (dwi - at_alpha) / alpha;
        // r(ζ) = a(ζ)/ζ − dw/α vanishes at α; divide by (ζ − α)
        a[0][i] -= dwi / alpha;
    }
    let n = dw.len();
    let mut q = vec![vec![C64::new(0.0, 0.0); n]; d - 1];
    q[d - 2] = a[d - 1].clone();
    for k in (1..d - 1).rev() {
        for i in 0..n {
            q[k - 1][i] = a[k][i] + q[k][i] * alpha;
        }
    }
    q
}

/// `α` and `q` from the slice extremal through `0` and `1`, truncated to
/// degree `d`.
fn pair_seed(g: &PlanarDomain, dw: &[C64], d: usize) -> Option<(f64, Vec<Vec<C64>>)> {
    let (e, alpha) = g.extremal_for_pair(C64::new(0.0, 0.0), C64::new(1.0, 0.0))?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return None;
    }
    let a = e.taylor(d).iter().map(|c| dw.iter().map(|x| x * c).collect()).collect();
    Some((alpha, interpolating_q(a, dw, alpha)))
}

/// Planar factors when every constraint involves a single coordinate.
fn factors(cs: &[Constraint], n: usize) -> Option<Vec<PlanarDomain>> {
    if n < 2 {
        return None;
    }
    let origin = vec![C64::new(0.0, 0.0); n];
    let mut parts: Vec<Vec<PlanarConstraint>> = vec![Vec::new(); n];
    for c in cs {
        let support: Vec<usize> = match c {
            Constraint::Quadric { weights, .. } => (0..n).filter(|&j| weights[j] != 0.0).collect(),
            Constraint::HalfSpace { normal, .. } => (0..n).filter(|&j| normal[j].norm() != 0.0).collect(),
        };
        if support.len() != 1 {
            return None;
        }
        let mut e = origin.clone();
        e[support[0]] = C64::new(1.0, 0.0);
        parts[support[0]].push(c.slice(&origin, &e)?);
    }
    parts.iter().map(|p| PlanarDomain::new(p).ok()).collect()
}

/// Taylor coefficients `a_k` (`k = 1..=d`) of `ζ ↦ e_j(λ_j ζ)` per coordinate.
fn product_taylor(per: Vec<Vec<C64>>, d: usize) -> Vec<Vec<C64>> {
    (0..d).map(|k| per.iter().map(|c| c[k]).collect()).collect()
}

/// Product-domain metric seed: each factor follows its own extremal, slowed
/// so that all share the velocity `v/κ`.
fn product_metric_seed(gs: &[PlanarDomain], z: &[C64], v: &[C64], d: usize) -> Option<Vec<Vec<C64>>> {
    let kappa = gs.iter().zip(z).zip(v).map(|((g, a), b)| g.metric(*a, *b)).fold(0.0, f64::max);
    if !(kappa > 0.0 && kappa.is_finite()) {
        return None;
    }
    let per = gs
        .iter()
        .zip(z)
        .zip(v)
        .map(|((g, a), b)| {
            let mut lin = vec![C64::new(0.0, 0.0); d];
            lin[0] = b / kappa;
            match g.extremal_for_metric(*a, *b) {
                Some(e) => {
                    let t = e.taylor(d);
                    let lam = b / (kappa * t[0]);
                    t.iter().enumerate().map(|(k, c)| c * lam.powi(k as i32 + 1)).collect()
                }
                None => lin,
            }
        })
        .collect();
    Some(product_taylor(per, d))
}

/// Product-domain pair seed: factor extremals reparametrized to reach their
/// targets at the common `α = max α_j`.
fn product_pair_seed(gs: &[PlanarDomain], z: &[C64], w: &[C64], d: usize) -> Option<(f64, Vec<Vec<C64>>)> {
    let ex: Vec<Option<(crate::planar::ExtremalDisc<'_>, f64)>> =
        gs.iter().zip(z).zip(w).map(|((g, a), b)| g.extremal_for_pair(*a, *b)).collect();
    let alpha = ex.iter().flatten().map(|e| e.1).fold(0.0, f64::max);
    if !(alpha > 0.0 && alpha < 1.0) {
        return None;
    }
    let dw: Vec<C64> = w.iter().zip(z).map(|(a, b)| a - b).collect();
    let per = ex
        .iter()
        .zip(&dw)
        .map(|(e, dwi)| match e {
            Some((e, aj)) => {
                let lam = aj / alpha;
                e.taylor(d).iter().enumerate().map(|(k, c)| c * lam.powi(k as i32 + 1)).collect()
            }
            None => {
                let mut lin = vec![C64::new(0.0, 0.0); d];
                lin[0] = dwi / alpha;
                lin
            }
        })
        .collect();
    Some((alpha, interpolating_q(product_taylor(per, d), &dw, alpha)))
}

fn pack(coeffs: &[Vec<C64>]) -> Vec<f64> {
    coeffs.iter().flatten().flat_map(|c| [c.re, c.im]).collect()
}

fn ray_exit_all(cs: &[Constraint], x: &[C64], u: &[C64], margin: f64) -> f64 {
    cs.iter()
        .map(|c| c.ray_exit(x, u, margin))
        .fold(f64::INFINITY, f64::min)
}

/// Upper bound for `κ_Ω(z; v)` from discs `z + t(v̂ζ + Σ_{j≥2} b_j ζ^j)`:
/// for each shape the largest admissible `t` is read off from ray exits at
/// the sample points, and the shape is optimized to maximize it.
pub fn metric_disc(
    domain: &DomainSpec,
    z: &[C64],
    v: &[C64],
    cfg: &EstimatorConfig,
) -> Option<DiscFit> {
    let cs = domain.constraints()?;
    let n = z.len();
    let vn = norm(v);
    if vn == 0.0 {
        return None;
    }
    let vh: Vec<C64> = v.iter().map(|x| x / vn).collect();
    let zs = circle(cfg.boundary_samples);
    let d = cfg.degree;
    let nvar = 2 * n * (d - 1);
    let margin = cfg.margin;

    let reach = |x: &[f64]| -> f64 {
        let b = unpack(x, n);
        let mut u = vec![C64::new(0.0, 0.0); n];
        zs.iter()
            .map(|&zeta| {
                let mut p = zeta;
                for (o, c) in u.iter_mut().zip(&vh) {
                    *o = c * zeta;
                }
                for bj in &b {
                    p *= zeta;
                    for (o, c) in u.iter_mut().zip(bj) {
                        *o += c * p;
                    }
                }
                ray_exit_all(&cs, z, &u, margin)
            })
            .fold(f64::INFINITY, f64::min)
    };
    let objective = |x: &[f64]| -> f64 {
        let t = reach(x);
        if t.is_finite() {
            -t
        } else {
            // unbounded directions: the metric vanishes along them
            -1e12
        }
    };
    // first start: Taylor polynomial of the extremal disc of the slice
    let mut x0 = vec![0.0; nvar];
    if let Some(g) = slice(&cs, z, v) {
        if let Some(e) = g.extremal_for_metric(C64::new(0.0, 0.0), C64::new(1.0, 0.0)) {
            let t = e.taylor(d);
            let b: Vec<Vec<C64>> = t[1..]
                .iter()
                .map(|cj| vh.iter().map(|h| h * (cj / t[0])).collect())
                .collect();
            x0 = pack(&b);
        }
    }
    let mut seeds = vec![x0];
    if let Some(a) = factors(&cs, n).and_then(|gs| product_metric_seed(&gs, z, v, d)) {
        let t0 = a[0].iter().zip(&vh).map(|(x, h)| (x * h.conj()).re).sum::<f64>();
        if t0 > 0.0 {
            let b: Vec<Vec<C64>> = a[1..].iter().map(|ak| ak.iter().map(|x| x / t0).collect()).collect();
            seeds.insert(0, pack(&b));
        }
    }
    let st = starts(nvar, cfg.multistarts, 0.3, cfg.seed, seeds);
    let opts = NmOptions {
        max_evals: cfg.max_evals,
        step: 0.2,
        ..Default::default()
    };
    let (start, best) = multistart(objective, &st, &opts);
    let t = reach(&best.x).min(1e12);
    if !(t > 0.0) {
        return None;
    }
    let mut coeffs = vec![vh.iter().map(|c| c * t).collect::<Vec<C64>>()];
    coeffs.extend(unpack(&best.x, n).into_iter().map(|b| b.iter().map(|c| c * t).collect()));
    let disc = AnalyticDisc {
        base: z.to_vec(),
        coeffs,
        margin,
    };
    let r = disc.certified_radius(domain, cfg.certify_samples)?;
    let disc = disc.rescaled(r);
    let speed = norm(disc.velocity());
    Some(DiscFit {
        value: vn / speed,
        disc,
        radius: r,
        start,
        evals: best.evals,
    })
}

/// Upper bound for `l̃_Ω(z, w)` from discs
/// `φ(ζ) = z + ζ(w − z)/α + ζ(ζ − α) q(ζ)` with `0 < α < 1`, minimizing `α`
/// under an exact penalty for leaving `Ω`.
pub fn lempert_disc(
    domain: &DomainSpec,
    z: &[C64],
    w: &[C64],
    cfg: &EstimatorConfig,
) -> Option<DiscFit> {
    let cs = domain.constraints()?;
    let n = z.len();
    let dw: Vec<C64> = w.iter().zip(z).map(|(a, b)| a - b).collect();
    let scale = norm(&dw);
    if scale == 0.0 {
        return None;
    }
    let zs = circle(cfg.boundary_samples);
    let d = cfg.degree.max(2);
    let nq = 2 * n * (d - 1);
    let margin = cfg.margin;

    let build = |x: &[f64]| -> (f64, AnalyticDisc) {
        let alpha = 1.0 / (1.0 + (-x[0]).exp());
        let q = unpack(&x[1..], n);
        // ζ(ζ − α)Σ q_j ζ^j  =  Σ q_j ζ^{j+2} − α Σ q_j ζ^{j+1}
        let mut coeffs = vec![vec![C64::new(0.0, 0.0); n]; d];
        for (i, c) in coeffs[0].iter_mut().enumerate() {
            *c = dw[i] / alpha;
        }
        for (j, qj) in q.iter().enumerate() {
            for i in 0..n {
                let qv = qj[i] * scale;
                coeffs[j + 1][i] += qv;
                coeffs[j][i] -= qv * alpha;
            }
        }
        (
            alpha,
            AnalyticDisc {
                base: z.to_vec(),
                coeffs,
                margin,
            },
        )
    };
    let violation = |disc: &AnalyticDisc| -> f64 {
        zs.iter()
            .map(|&zeta| {
                let x = disc.eval(zeta);
                cs.iter().map(|c| c.value(&x)).fold(f64::MIN, f64::max)
            })
            .fold(f64::MIN, f64::max)
            + margin
    };
    let objective = |x: &[f64]| -> f64 {
        let (alpha, disc) = build(x);
        alpha + 1e6 * violation(&disc).max(0.0)
    };

    // feasible straight start: z + ζ (w − z)/α stays inside iff 1/α ≤ reach
    let reach = zs
        .iter()
        .map(|&zeta| {
            let u: Vec<C64> = dw.iter().map(|c| c * zeta).collect();
            ray_exit_all(&cs, z, &u, margin)
        })
        .fold(f64::INFINITY, f64::min);
    let alpha0 = (1.0 / reach).clamp(1e-6, 0.999_999);
    let mut x0 = vec![0.0; 1 + nq];
    x0[0] = (alpha0 / (1.0 - alpha0)).ln();
    let to_x = |alpha: f64, q: Vec<Vec<C64>>| {
        let mut x = vec![(alpha / (1.0 - alpha)).ln()];
        let qs: Vec<Vec<C64>> = q.iter().map(|qj| qj.iter().map(|c| c / scale).collect()).collect();
        x.extend(pack(&qs));
        x
    };
    let mut seeds = Vec::new();
    if let Some((alpha, q)) = factors(&cs, n).and_then(|gs| product_pair_seed(&gs, z, w, d)) {
        seeds.push(to_x(alpha, q));
    }
    if let Some((alpha, q)) = slice(&cs, z, &dw).and_then(|g| pair_seed(&g, &dw, d)) {
        seeds.push(to_x(alpha, q));
    }
    seeds.push(x0);
    let st = starts(nq, cfg.multistarts, 0.3, cfg.seed ^ 0x5eed, seeds);
    let opts = NmOptions {
        max_evals: cfg.max_evals,
        step: 0.2,
        ..Default::default()
    };
    let (start, best) = multistart(objective, &st, &opts);
    let (alpha, disc) = build(&best.x);
    let r = disc.certified_radius(domain, cfg.certify_samples)?;
    let value = alpha / r;
    if !(value < 1.0) {
        return None;
    }
    Some(DiscFit {
        disc: disc.rescaled(r),
        value,
        radius: r,
        start,
        evals: best.evals,
    })
}
