//! Planar circle domains and their uniformizations.
//!
//! A region cut out of ℂ by at most two discs or half-planes is simply
//! connected and has an explicit conformal map onto the upper half-plane
//! `H`: Cayley for a disc, an affine map for a half-plane, a power map for a
//! wedge, a Möbius map followed by a power map for a lune, and the
//! exponential for a strip. On `H` the metric is `|dw| / (2 Im w)`, which
//! gives closed forms for the Kobayashi metric, distance and geodesics of all
//! these regions.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::{Error, Result};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// `{|ζ − center| < radius}` or `{Re((ζ − point)·conj(normal)) < 0}` with
/// `normal` the unit outward normal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PlanarConstraint {
    Disc { center: C64, radius: f64 },
    HalfPlane { point: C64, normal: C64 },
}

impl PlanarConstraint {
    /// Signed distance to the boundary circle or line, negative inside.
    pub fn value(&self, z: C64) -> f64 {
        match *self {
            PlanarConstraint::Disc { center, radius } => (z - center).norm() - radius,
            PlanarConstraint::HalfPlane { point, normal } => ((z - point) * normal.conj()).re,
        }
    }

    pub fn contains(&self, z: C64) -> bool {
        self.value(z) < 0.0
    }

    fn contains_constraint(&self, other: &PlanarConstraint) -> bool {
        match (*self, *other) {
            (
                PlanarConstraint::Disc { center, radius },
                PlanarConstraint::Disc {
                    center: c2,
                    radius: r2,
                },
            ) => (center - c2).norm() + r2 <= radius,
            (PlanarConstraint::HalfPlane { .. }, PlanarConstraint::Disc { center, radius }) => {
                self.value(center) <= -radius
            }
            (
                PlanarConstraint::HalfPlane { normal, .. },
                PlanarConstraint::HalfPlane {
                    point: p2,
                    normal: n2,
                },
            ) => (normal - n2).norm() < 1e-14 && self.value(p2) <= 0.0,
            (PlanarConstraint::Disc { .. }, PlanarConstraint::HalfPlane { .. }) => false,
        }
    }
}

/// Conformal model of a planar region; every variant maps onto `H`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PlanarModel {
    /// All of ℂ: the metric vanishes.
    Plane,
    Disc { center: C64, radius: f64 },
    HalfPlane { point: C64, normal: C64 },
    /// `ζ ↦ (rot·(ζ − apex))^power`.
    Wedge { apex: C64, rot: C64, power: f64 },
    /// `ζ ↦ (rot·(ζ − a)/(ζ − b))^power`.
    Lune { a: C64, b: C64, rot: C64, power: f64 },
    /// `ζ ↦ exp(iπ (ζ − point)·conj(normal) / width)`, `normal` pointing inward.
    Strip { point: C64, normal: C64, width: f64 },
}

/// A region of ℂ with its uniformization.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanarDomain {
    pub constraints: Vec<PlanarConstraint>,
    pub model: PlanarModel,
}

fn wrap(a: f64) -> f64 {
    let mut a = a % (2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    } else if a <= -PI {
        a += 2.0 * PI;
    }
    a
}

/// Wedge `{Re(w conj n1) < 0} ∩ {Re(w conj n2) < 0}` at the origin, returned
/// as `(rot, opening)` with `rot·wedge = {0 < arg < opening}`.
fn wedge_at_origin(n1: C64, n2: C64) -> Result<(C64, f64)> {
    let (a1, a2) = (n1.arg(), n2.arg());
    let delta = wrap(a2 - a1);
    let opening = PI - delta.abs();
    if opening <= 1e-12 {
        return Err(Error::EmptySet);
    }
    let start = if delta >= 0.0 { a2 } else { a1 } + PI / 2.0;
    Ok((C64::from_polar(1.0, -start), opening))
}

fn circle_line_points(
    center: C64,
    radius: f64,
    point: C64,
    normal: C64,
) -> Option<(C64, C64)> {
    let s = ((center - point) * normal.conj()).re;
    if s.abs() >= radius {
        return None;
    }
    let foot = center - normal * s;
    let h = (radius * radius - s * s).sqrt();
    let t = I * normal;
    Some((foot + t * h, foot - t * h))
}

fn circle_circle_points(c1: C64, r1: f64, c2: C64, r2: f64) -> Option<(C64, C64)> {
    let d = (c2 - c1).norm();
    if d >= r1 + r2 || d <= (r1 - r2).abs() || d == 0.0 {
        return None;
    }
    let a = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
    let h = (r1 * r1 - a * a).max(0.0).sqrt();
    let e = (c2 - c1) / d;
    let m = c1 + e * a;
    Some((m + I * e * h, m - I * e * h))
}

/// Outward normal of the half-plane image of `c` under `w = (ζ − a)/(ζ − b)`;
/// `a`, `b` lie on the boundary of `c`.
fn mobius_image_normal(c: &PlanarConstraint, a: C64, b: C64) -> C64 {
    let m = |z: C64| (z - a) / (z - b);
    let (dir, inside) = match *c {
        PlanarConstraint::Disc { center, radius: _ } => {
            let p1 = center + I * (b - center);
            let p2 = center - I * (b - center);
            let p = if (p1 - a).norm() >= (p2 - a).norm() { p1 } else { p2 };
            (m(p), m(center))
        }
        PlanarConstraint::HalfPlane { point: _, normal } => {
            // the line through a and b goes through M(∞) = 1
            (C64::new(1.0, 0.0), m(a - normal * (a - b).norm().max(1.0)))
        }
    };
    let u = dir / dir.norm();
    let n = I * u;
    if (inside * n.conj()).re < 0.0 {
        n
    } else {
        -n
    }
}

impl PlanarDomain {
    /// Builds the model for the intersection of the given constraints.
    /// Redundant constraints are pruned first; more than two essential
    /// constraints are reported as unsupported.
    pub fn new(constraints: &[PlanarConstraint]) -> Result<Self> {
        let mut cs: Vec<PlanarConstraint> = Vec::new();
        'outer: for (i, c) in constraints.iter().enumerate() {
            for (j, d) in constraints.iter().enumerate() {
                // drop c if some other constraint is strictly tighter
                // (first occurrence wins among equal ones)
                if i != j && c.contains_constraint(d) && (!d.contains_constraint(c) || j < i) {
                    continue 'outer;
                }
            }
            cs.push(*c);
        }
        let model = match cs.as_slice() {
            [] => PlanarModel::Plane,
            [PlanarConstraint::Disc { center, radius }] => {
                if *radius <= 0.0 {
                    return Err(Error::EmptySet);
                }
                PlanarModel::Disc {
                    center: *center,
                    radius: *radius,
                }
            }
            [PlanarConstraint::HalfPlane { point, normal }] => PlanarModel::HalfPlane {
                point: *point,
                normal: *normal,
            },
            [c1, c2] => Self::two_piece(c1, c2)?,
            _ => {
                return Err(Error::Unsupported(format!(
                    "{} essential planar constraints",
                    cs.len()
                )))
            }
        };
        Ok(Self {
            constraints: cs,
            model,
        })
    }

    fn two_piece(c1: &PlanarConstraint, c2: &PlanarConstraint) -> Result<PlanarModel> {
        use PlanarConstraint::*;
        let (a, b) = match (*c1, *c2) {
            (
                Disc {
                    center: x,
                    radius: r,
                },
                Disc {
                    center: y,
                    radius: s,
                },
            ) => circle_circle_points(x, r, y, s).ok_or(Error::EmptySet)?,
            (Disc { center, radius }, HalfPlane { point, normal })
            | (HalfPlane { point, normal }, Disc { center, radius }) => {
                circle_line_points(center, radius, point, normal).ok_or(Error::EmptySet)?
            }
            (
                HalfPlane {
                    point: p1,
                    normal: n1,
                },
                HalfPlane {
                    point: p2,
                    normal: n2,
                },
            ) => {
                let cross = (n1.conj() * n2).im;
                if cross.abs() < 1e-14 {
                    // opposite normals: a strip
                    let width = -((p2 - p1) * n1.conj()).re;
                    if width <= 0.0 {
                        return Err(Error::EmptySet);
                    }
                    return Ok(PlanarModel::Strip {
                        point: p1,
                        normal: -n1,
                        width,
                    });
                }
                // apex: Re(x conj n1) = Re(p1 conj n1), Re(x conj n2) = Re(p2 conj n2)
                let (h1, h2) = ((p1 * n1.conj()).re, (p2 * n2.conj()).re);
                let det = n1.re * n2.im - n1.im * n2.re;
                let apex = C64::new(
                    (h1 * n2.im - h2 * n1.im) / det,
                    (n1.re * h2 - n2.re * h1) / det,
                );
                let (rot, opening) = wedge_at_origin(n1, n2)?;
                return Ok(PlanarModel::Wedge {
                    apex,
                    rot,
                    power: PI / opening,
                });
            }
        };
        let n1 = mobius_image_normal(c1, a, b);
        let n2 = mobius_image_normal(c2, a, b);
        let (rot, opening) = wedge_at_origin(n1, n2)?;
        Ok(PlanarModel::Lune {
            a,
            b,
            rot,
            power: PI / opening,
        })
    }

    pub fn disc(center: C64, radius: f64) -> Self {
        Self::new(&[PlanarConstraint::Disc { center, radius }]).expect("positive radius")
    }

    pub fn contains(&self, z: C64) -> bool {
        z.re.is_finite() && z.im.is_finite() && self.constraints.iter().all(|c| c.contains(z))
    }

    pub fn boundary_distance(&self, z: C64) -> f64 {
        self.constraints
            .iter()
            .map(|c| -c.value(z))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_plane(&self) -> bool {
        self.model == PlanarModel::Plane
    }

    /// The uniformizing map onto `H` and its derivative.
    pub fn to_uhp(&self, z: C64) -> (C64, C64) {
        match self.model {
            PlanarModel::Plane => (I, C64::new(0.0, 0.0)),
            PlanarModel::Disc { center, radius } => {
                let u = (z - center) / radius;
                let f = I * (1.0 + u) / (1.0 - u);
                let df = 2.0 * I / ((1.0 - u) * (1.0 - u) * radius);
                (f, df)
            }
            PlanarModel::HalfPlane { point, normal } => {
                (-I * (z - point) * normal.conj(), -I * normal.conj())
            }
            PlanarModel::Wedge { apex, rot, power } => {
                let u = rot * (z - apex);
                let f = u.powf(power);
                (f, power * f / u * rot)
            }
            PlanarModel::Lune { a, b, rot, power } => {
                let m = (z - a) / (z - b);
                let u = rot * m;
                let f = u.powf(power);
                let dm = (a - b) / ((z - b) * (z - b));
                (f, power * f / m * dm)
            }
            PlanarModel::Strip {
                point,
                normal,
                width,
            } => {
                let k = I * PI * normal.conj() / width;
                let f = (k * (z - point)).exp();
                (f, f * k)
            }
        }
    }

    /// Inverse of [`PlanarDomain::to_uhp`].
    pub fn from_uhp(&self, w: C64) -> C64 {
        match self.model {
            PlanarModel::Plane => w,
            PlanarModel::Disc { center, radius } => center + radius * (w - I) / (w + I),
            PlanarModel::HalfPlane { point, normal } => point + I * w * normal,
            PlanarModel::Wedge { apex, rot, power } => apex + w.powf(1.0 / power) / rot,
            PlanarModel::Lune { a, b, rot, power } => {
                let m = w.powf(1.0 / power) / rot;
                (a - b * m) / (1.0 - m)
            }
            PlanarModel::Strip {
                point,
                normal,
                width,
            } => point + w.ln() * width / (I * PI) * normal,
        }
    }

    /// Kobayashi–Royden metric `κ(z; v)`.
    pub fn metric(&self, z: C64, v: C64) -> f64 {
        match self.model {
            PlanarModel::Plane => 0.0,
            PlanarModel::Disc { center, radius } => {
                let d = (z - center).norm();
                radius * v.norm() / ((radius - d) * (radius + d))
            }
            _ => {
                let (f, df) = self.to_uhp(z);
                df.norm() * v.norm() / (2.0 * f.im)
            }
        }
    }

    /// Kobayashi distance.
    pub fn distance(&self, a: C64, b: C64) -> f64 {
        if a == b {
            return 0.0;
        }
        match self.model {
            PlanarModel::Plane => 0.0,
            PlanarModel::Disc { center, radius } => {
                let (x, y) = ((a - center).norm(), (b - center).norm());
                let den = ((radius - x) * (radius + x) * (radius - y) * (radius + y)).sqrt();
                (radius * (a - b).norm() / den).asinh()
            }
            _ => {
                let (fa, fb) = (self.to_uhp(a).0, self.to_uhp(b).0);
                uhp_distance(fa, fb)
            }
        }
    }

    /// `m + 1` points along the geodesic from `a` to `b`, equally spaced in
    /// Kobayashi length.
    pub fn geodesic(&self, a: C64, b: C64, m: usize) -> Vec<C64> {
        let m = m.max(1);
        if self.is_plane() || a == b {
            return (0..=m).map(|j| a + (b - a) * (j as f64 / m as f64)).collect();
        }
        let (fa, fb) = (self.to_uhp(a).0, self.to_uhp(b).0);
        let mut out: Vec<C64> = uhp_geodesic(fa, fb, m)
            .into_iter()
            .map(|w| self.from_uhp(w))
            .collect();
        out[0] = a;
        out[m] = b;
        out
    }
}

/// Extremal disc `Δ → G` of a planar region, `ζ ↦ G⁻¹(T(ζ·phase))` with
/// `T` the Cayley-type map of `H` centred at `center`.
#[derive(Clone, Debug)]
pub struct ExtremalDisc<'a> {
    domain: &'a PlanarDomain,
    center: C64,
    phase: C64,
}

impl ExtremalDisc<'_> {
    pub fn eval(&self, zeta: C64) -> C64 {
        let a = self.center;
        let om = zeta * self.phase;
        self.domain.from_uhp((a - a.conj() * om) / (1.0 - om))
    }

    /// First `degree` Taylor coefficients `c_1, …, c_degree` (the constant
    /// term is the base point), by a discrete Fourier transform on `|ζ| = ρ`.
    pub fn taylor(&self, degree: usize) -> Vec<C64> {
        let (m, rho) = (128usize, 0.5);
        let vals: Vec<C64> = (0..m)
            .map(|k| self.eval(C64::from_polar(rho, 2.0 * PI * k as f64 / m as f64)))
            .collect();
        (1..=degree)
            .map(|j| {
                let s: C64 = vals
                    .iter()
                    .enumerate()
                    .map(|(k, f)| f * C64::from_polar(1.0, -2.0 * PI * (j * k) as f64 / m as f64))
                    .sum();
                s / (m as f64 * rho.powi(j as i32))
            })
            .collect()
    }
}

impl PlanarDomain {
    /// Extremal disc for `κ(z; v)`: maps 0 to `z` with derivative a positive
    /// multiple of `v`.
    pub fn extremal_for_metric(&self, z: C64, v: C64) -> Option<ExtremalDisc<'_>> {
        if self.is_plane() || v == C64::new(0.0, 0.0) {
            return None;
        }
        let (a, df) = self.to_uhp(z);
        let d0 = 2.0 * I * a.im / df;
        let phase = C64::from_polar(1.0, v.arg() - d0.arg());
        Some(ExtremalDisc {
            domain: self,
            center: a,
            phase,
        })
    }

    /// Extremal disc through `z` and `w`: returns the disc with `0 ↦ z` and
    /// `α ↦ w`, together with `α = tanh k(z, w)`.
    pub fn extremal_for_pair(&self, z: C64, w: C64) -> Option<(ExtremalDisc<'_>, f64)> {
        if self.is_plane() || z == w {
            return None;
        }
        let a = self.to_uhp(z).0;
        let b = self.to_uhp(w).0;
        let t = (b - a) / (b - a.conj());
        let alpha = t.norm();
        Some((
            ExtremalDisc {
                domain: self,
                center: a,
                phase: t / alpha,
            },
            alpha,
        ))
    }
}

/// Distance on `H` for the metric `|dw| / (2 Im w)`.
pub fn uhp_distance(a: C64, b: C64) -> f64 {
    ((a - b).norm() / (2.0 * (a.im * b.im).sqrt())).asinh()
}

/// Geodesic on `H` through `a` and `b`, `m + 1` points equally spaced.
pub fn uhp_geodesic(a: C64, b: C64, m: usize) -> Vec<C64> {
    let k = uhp_distance(a, b);
    let t = (b - a) / (b - a.conj());
    let phase = if t.norm() > 0.0 { t / t.norm() } else { C64::new(1.0, 0.0) };
    (0..=m)
        .map(|j| {
            let om = phase * (k * j as f64 / m as f64).tanh();
            (a - a.conj() * om) / (1.0 - om)
        })
        .collect()
}

/// Poincaré distance on the unit disc.
pub fn disc_distance(a: C64, b: C64) -> f64 {
    PlanarDomain::disc(C64::new(0.0, 0.0), 1.0).distance(a, b)
}

/// Poincaré metric on the unit disc.
pub fn disc_metric(z: C64, v: C64) -> f64 {
    v.norm() / (1.0 - z.norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn lens() -> PlanarDomain {
        PlanarDomain::new(&[
            PlanarConstraint::Disc {
                center: c(0.0, 0.0),
                radius: 1.0,
            },
            PlanarConstraint::Disc {
                center: c(1.0, 0.0),
                radius: 0.5,
            },
        ])
        .unwrap()
    }

    #[test]
    fn disc_closed_forms() {
        let d = PlanarDomain::disc(c(0.0, 0.0), 1.0);
        assert_relative_eq!(d.distance(c(0.0, 0.0), c(0.5, 0.0)), 0.5f64.atanh(), epsilon = 1e-15);
        assert_relative_eq!(d.metric(c(0.5, 0.0), c(1.0, 0.0)), 4.0 / 3.0, epsilon = 1e-15);
        // via the Cayley map
        let (f, df) = d.to_uhp(c(0.3, 0.2));
        let k = df.norm() / (2.0 * f.im);
        assert_relative_eq!(k, d.metric(c(0.3, 0.2), c(1.0, 0.0)), epsilon = 1e-12);
        let uhp = uhp_distance(d.to_uhp(c(0.3, 0.2)).0, d.to_uhp(c(-0.4, 0.1)).0);
        assert_relative_eq!(uhp, d.distance(c(0.3, 0.2), c(-0.4, 0.1)), epsilon = 1e-12);
    }

    #[test]
    fn half_plane_model() {
        let h = PlanarDomain::new(&[PlanarConstraint::HalfPlane {
            point: c(0.0, 0.0),
            normal: c(0.0, -1.0),
        }])
        .unwrap();
        let z = c(0.7, 0.3);
        assert_relative_eq!(h.to_uhp(z).0.re, z.re, epsilon = 1e-15);
        assert_relative_eq!(h.to_uhp(z).0.im, z.im, epsilon = 1e-15);
        assert_relative_eq!(h.metric(z, c(1.0, 0.0)), 1.0 / 0.6, epsilon = 1e-15);
    }

    #[test]
    fn quarter_plane_is_a_wedge() {
        // {Re > 0} ∩ {Im > 0}; z ↦ z² maps it onto H
        let q = PlanarDomain::new(&[
            PlanarConstraint::HalfPlane {
                point: c(0.0, 0.0),
                normal: c(-1.0, 0.0),
            },
            PlanarConstraint::HalfPlane {
                point: c(0.0, 0.0),
                normal: c(0.0, -1.0),
            },
        ])
        .unwrap();
        let (a, b) = (c(0.3, 0.7), c(1.2, 0.1));
        let want = uhp_distance(a * a, b * b);
        assert_relative_eq!(q.distance(a, b), want, epsilon = 1e-12);
    }

    #[test]
    fn strip_matches_exponential() {
        // {0 < Im < π}; exp maps it onto H
        let s = PlanarDomain::new(&[
            PlanarConstraint::HalfPlane {
                point: c(0.0, 0.0),
                normal: c(0.0, -1.0),
            },
            PlanarConstraint::HalfPlane {
                point: c(0.0, PI),
                normal: c(0.0, 1.0),
            },
        ])
        .unwrap();
        let (a, b) = (c(0.3, 1.0), c(-1.0, 2.5));
        assert_relative_eq!(s.distance(a, b), uhp_distance(a.exp(), b.exp()), epsilon = 1e-12);
    }

    #[test]
    fn nested_constraints_are_pruned() {
        let d = PlanarDomain::new(&[
            PlanarConstraint::Disc {
                center: c(0.0, 0.0),
                radius: 1.0,
            },
            PlanarConstraint::Disc {
                center: c(0.1, 0.0),
                radius: 0.5,
            },
            PlanarConstraint::HalfPlane {
                point: c(2.0, 0.0),
                normal: c(1.0, 0.0),
            },
        ])
        .unwrap();
        assert_eq!(d.constraints.len(), 1);
        assert!(matches!(d.model, PlanarModel::Disc { .. }));
    }

    #[test]
    fn lens_maps_onto_the_upper_half_plane() {
        let l = lens();
        assert!(matches!(l.model, PlanarModel::Lune { .. }));
        for z in [c(0.75, 0.0), c(0.6, 0.2), c(0.95, -0.1), c(0.52, 0.01)] {
            assert!(l.contains(z));
            let (f, _) = l.to_uhp(z);
            assert!(f.im > 0.0, "{z} -> {f}");
            let back = l.from_uhp(f);
            assert_relative_eq!(back.re, z.re, epsilon = 1e-12);
            assert_relative_eq!(back.im, z.im, epsilon = 1e-12);
        }
    }

    #[test]
    fn lens_metric_has_curvature_minus_four() {
        // Δ log κ = 4 κ² for the metric κ(z)|dz|
        let l = lens();
        let h = 1e-4;
        for z in [c(0.75, 0.0), c(0.7, 0.15), c(0.9, -0.05)] {
            let lk = |w: C64| l.metric(w, c(1.0, 0.0)).ln();
            let lap = (lk(z + h) + lk(z - h) + lk(z + I * h) + lk(z - I * h) - 4.0 * lk(z)) / (h * h);
            let k = l.metric(z, c(1.0, 0.0));
            assert_relative_eq!(lap, 4.0 * k * k, max_relative = 1e-5);
        }
    }

    #[test]
    fn lens_distance_integrates_the_metric() {
        // along its own geodesic the length equals the distance
        let l = lens();
        let (a, b) = (c(0.6, 0.1), c(0.9, -0.2));
        let pts = l.geodesic(a, b, 400);
        let len: f64 = pts
            .windows(2)
            .map(|w| l.metric((w[0] + w[1]) / 2.0, w[1] - w[0]))
            .sum();
        assert_relative_eq!(len, l.distance(a, b), max_relative = 1e-5);
        // and the straight segment is not shorter
        let n = 2000;
        let straight: f64 = (0..n)
            .map(|j| {
                let t = (j as f64 + 0.5) / n as f64;
                l.metric(a + (b - a) * t, (b - a) / n as f64)
            })
            .sum();
        assert!(straight >= l.distance(a, b) - 1e-9);
    }

    #[test]
    fn disc_geodesic_is_a_diameter() {
        let d = PlanarDomain::disc(c(0.0, 0.0), 1.0);
        let pts = d.geodesic(c(-0.9, 0.0), c(0.9, 0.0), 8);
        for p in &pts {
            assert!(p.im.abs() < 1e-12);
        }
        assert_relative_eq!(pts[4].re, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn extremal_discs_interpolate() {
        let l = lens();
        let (z, v) = (c(0.7, 0.05), c(0.3, 0.4));
        let e = l.extremal_for_metric(z, v).unwrap();
        let h = 1e-6;
        let d = (e.eval(c(h, 0.0)) - e.eval(c(-h, 0.0))) / (2.0 * h);
        assert_relative_eq!((e.eval(c(0.0, 0.0)) - z).norm(), 0.0, epsilon = 1e-12);
        assert_relative_eq!(d.arg(), v.arg(), epsilon = 1e-6);
        // |v| / |f'(0)| is the metric
        assert_relative_eq!(v.norm() / d.norm(), l.metric(z, v), max_relative = 1e-6);
        let w = c(0.9, -0.1);
        let (e, alpha) = l.extremal_for_pair(z, w).unwrap();
        assert_relative_eq!(alpha.atanh(), l.distance(z, w), max_relative = 1e-12);
        assert_relative_eq!((e.eval(c(alpha, 0.0)) - w).norm(), 0.0, epsilon = 1e-10);
        let d = PlanarDomain::disc(c(0.0, 0.0), 1.0);
        let e = d.extremal_for_metric(c(0.5, 0.0), c(1.0, 0.0)).unwrap();
        let t = e.taylor(4);
        // (ζ + 1/2)/(1 + ζ/2) = 1/2 + (3/4)ζ − (3/8)ζ² + …
        assert_relative_eq!(t[0].re, 0.75, epsilon = 1e-12);
        assert_relative_eq!(t[1].re, -0.375, epsilon = 1e-12);
    }

    #[test]
    fn disjoint_constraints_are_empty() {
        let r = PlanarDomain::new(&[
            PlanarConstraint::Disc {
                center: c(0.0, 0.0),
                radius: 1.0,
            },
            PlanarConstraint::Disc {
                center: c(3.0, 0.0),
                radius: 1.0,
            },
        ]);
        assert_eq!(r, Err(Error::EmptySet));
    }
}
