//! Closed forms written independently of the library, plus seeded samplers.
#![allow(dead_code)]

use klab_core::{DomainSpec, Point, Tangent, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn poincare(a: C64, b: C64) -> f64 {
    ((a - b) / (C64::new(1.0, 0.0) - a.conj() * b)).norm().atanh()
}

pub fn poincare_metric(z: C64, v: C64) -> f64 {
    v.norm() / (1.0 - z.norm_sqr())
}

/// `tanh² k = 1 − (1−|z|²)(1−|w|²)/|1−⟨z,w⟩|²`.
pub fn ball(z: &[C64], w: &[C64]) -> f64 {
    let nz: f64 = z.iter().map(|x| x.norm_sqr()).sum();
    let nw: f64 = w.iter().map(|x| x.norm_sqr()).sum();
    let zw: C64 = z.iter().zip(w).map(|(a, b)| a * b.conj()).sum();
    let t2 = 1.0 - (1.0 - nz) * (1.0 - nw) / (C64::new(1.0, 0.0) - zw).norm_sqr();
    t2.max(0.0).sqrt().atanh()
}

/// `κ_B(z; v)` as the derivative of the distance along `v`.
pub fn ball_metric(z: &[C64], v: &[C64]) -> f64 {
    let s = 1.0 - z.iter().map(|a| a.norm_sqr()).sum::<f64>();
    let vv: f64 = v.iter().map(|a| a.norm_sqr()).sum();
    let zv: C64 = z.iter().zip(v).map(|(a, b)| a.conj() * b).sum();
    ((vv * s + zv.norm_sqr()) / (s * s)).sqrt()
}

pub fn polydisc(z: &[C64], w: &[C64]) -> f64 {
    z.iter().zip(w).map(|(a, b)| poincare(*a, *b)).fold(0.0, f64::max)
}

pub fn polydisc_metric(z: &[C64], v: &[C64]) -> f64 {
    z.iter().zip(v).map(|(a, b)| poincare_metric(*a, *b)).fold(0.0, f64::max)
}

/// Upper half-plane via the Cayley transform.
pub fn half_plane(a: C64, b: C64) -> f64 {
    let i = C64::new(0.0, 1.0);
    poincare((a - i) / (a + i), (b - i) / (b + i))
}

/// `{|ζ|<1} ∩ {|ζ−1|<½}` sent to the upper half-plane by a Möbius map
/// taking the corners to 0 and ∞ followed by a power map.
pub fn lens_chart(z: C64) -> C64 {
    let y = (1.0f64 - 0.875 * 0.875).sqrt();
    let (a, b) = (C64::new(0.875, y), C64::new(0.875, -y));
    let m = |x: C64| (x - a) / (x - b);
    let tau = 2.0 * std::f64::consts::PI;
    let rel = |x: C64, from: f64| (m(x).arg() - from).rem_euclid(tau);
    let (p1, p2) = (m(c(1.0, 0.0)).arg(), m(c(0.5, 0.0)).arg());
    let (start, opening) = if rel(c(0.75, 0.0), p1) < rel(c(0.5, 0.0), p1) {
        (p1, rel(c(0.5, 0.0), p1))
    } else {
        (p2, rel(c(1.0, 0.0), p2))
    };
    let u = m(z) * C64::from_polar(1.0, -start);
    C64::from_polar(u.norm().powf(std::f64::consts::PI / opening), u.arg() * std::f64::consts::PI / opening)
}

pub fn lens(a: C64, b: C64) -> f64 {
    half_plane(lens_chart(a), lens_chart(b))
}

/// Exact distance on the kinds with a closed form.
pub fn distance(d: &DomainSpec, z: &[C64], w: &[C64]) -> Option<f64> {
    Some(match d {
        DomainSpec::UnitDisc => poincare(z[0], w[0]),
        DomainSpec::EuclideanBall { .. } => ball(z, w),
        DomainSpec::Polydisc { .. } => polydisc(z, w),
        DomainSpec::HalfPlane => half_plane(z[0], w[0]),
        DomainSpec::Lens => lens(z[0], w[0]),
        DomainSpec::PuncturedPlane => 0.0,
        DomainSpec::Ellipsoid { semi_axes } => {
            let s = |x: &[C64]| -> Vec<C64> { x.iter().zip(semi_axes).map(|(v, a)| v / a).collect() };
            ball(&s(z), &s(w))
        }
        _ => return None,
    })
}

pub fn metric(d: &DomainSpec, z: &[C64], v: &[C64]) -> Option<f64> {
    Some(match d {
        DomainSpec::UnitDisc => poincare_metric(z[0], v[0]),
        DomainSpec::EuclideanBall { .. } => ball_metric(z, v),
        DomainSpec::Polydisc { .. } => polydisc_metric(z, v),
        _ => return None,
    })
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point of `d` inside the box `[−r, r]²ⁿ` (shifted up for the
/// half-plane) with boundary distance at least `min_delta`.
pub fn point_in(d: &DomainSpec, rng: &mut ChaCha8Rng, r: f64, min_delta: f64) -> Point {
    loop {
        let z: Vec<C64> = (0..d.dimension())
            .map(|_| {
                let x = C64::new(rng.gen_range(-r..r), rng.gen_range(-r..r));
                if matches!(d, DomainSpec::HalfPlane) {
                    C64::new(x.re, x.im.abs())
                } else {
                    x
                }
            })
            .collect();
        if d.contains(&z).unwrap() && d.boundary_distance(&z).unwrap() >= min_delta {
            return Point(z);
        }
    }
}

pub fn direction(n: usize, rng: &mut ChaCha8Rng) -> Tangent {
    loop {
        let v: Vec<C64> = (0..n).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let nv = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if nv > 0.1 {
            return Tangent(v.iter().map(|x| x / nv).collect());
        }
    }
}
