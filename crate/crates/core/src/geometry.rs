//! The domain zoo and its Euclidean boundary geometry.
//!
//! Every kind except the punctured plane is convex and compiles to a finite
//! list of [`Constraint`]s (real quadrics and real half-spaces). Boundary
//! distance, ray exits, complex-line slices and linear projections are all
//! computed constraint by constraint, which keeps the estimators in
//! [`crate::metric`] independent of the kind.

use std::ops::Deref;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::planar::PlanarConstraint;
use crate::{Error, Result};

/// Tolerance on the defining function for a point to count as a boundary point.
pub const BOUNDARY_TOL: f64 = 1e-10;

pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

pub fn norm_sqr(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum()
}

pub fn norm(a: &[C64]) -> f64 {
    norm_sqr(a).sqrt()
}

pub fn dist(a: &[C64], b: &[C64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// `a + s * b`
pub fn axpy(a: &[C64], s: C64, b: &[C64]) -> Vec<C64> {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

pub fn sub(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[C64], s: C64) -> Vec<C64> {
    a.iter().map(|x| x * s).collect()
}

pub fn normalized(a: &[C64]) -> Option<Vec<C64>> {
    let n = norm(a);
    (n > 0.0 && n.is_finite()).then(|| scale(a, C64::new(1.0 / n, 0.0)))
}

/// A point of ℂⁿ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub Vec<C64>);

/// A tangent vector at a point of ℂⁿ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Tangent(pub Vec<C64>);

macro_rules! vector_newtype {
    ($t:ident) => {
        impl $t {
            pub fn new(coords: Vec<C64>) -> Self {
                Self(coords)
            }

            pub fn real(coords: &[f64]) -> Self {
                Self(coords.iter().map(|&x| C64::new(x, 0.0)).collect())
            }

            pub fn scalar(z: C64) -> Self {
                Self(vec![z])
            }

            pub fn dim(&self) -> usize {
                self.0.len()
            }

            pub fn norm(&self) -> f64 {
                norm(&self.0)
            }

            pub fn is_finite(&self) -> bool {
                self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
            }
        }

        impl Deref for $t {
            type Target = [C64];
            fn deref(&self) -> &[C64] {
                &self.0
            }
        }

        impl From<C64> for $t {
            fn from(z: C64) -> Self {
                Self(vec![z])
            }
        }

        impl From<f64> for $t {
            fn from(x: f64) -> Self {
                Self(vec![C64::new(x, 0.0)])
            }
        }

        impl From<Vec<C64>> for $t {
            fn from(v: Vec<C64>) -> Self {
                Self(v)
            }
        }
    };
}

vector_newtype!(Point);
vector_newtype!(Tangent);

impl Point {
    pub fn offset(&self, t: f64, dir: &[C64]) -> Point {
        Point(axpy(&self.0, C64::new(t, 0.0), dir))
    }
}

/// Shape of a neighbourhood of a boundary point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum NeighbourhoodShape {
    /// `{x : ‖x − center‖ < radius}`
    EuclideanBall { radius: f64 },
    /// `{x : Re⟨x − center, normal⟩ < offset}` for a unit `normal`.
    HalfSpace { normal: Tangent, offset: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NeighbourhoodSpec {
    pub center: Point,
    pub shape: NeighbourhoodShape,
}

impl NeighbourhoodSpec {
    pub fn ball(center: Point, radius: f64) -> Self {
        Self {
            center,
            shape: NeighbourhoodShape::EuclideanBall { radius },
        }
    }

    pub fn half_space(center: Point, normal: Tangent, offset: f64) -> Self {
        Self {
            center,
            shape: NeighbourhoodShape::HalfSpace { normal, offset },
        }
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    pub fn validate(&self) -> Result<()> {
        if !self.center.is_finite() || self.center.dim() == 0 {
            return Err(Error::InvalidInput("neighbourhood center must be finite".into()));
        }
        match &self.shape {
            NeighbourhoodShape::EuclideanBall { radius } => {
                if !(*radius > 0.0 && radius.is_finite()) {
                    return Err(Error::InvalidInput(format!(
                        "neighbourhood radius must be positive, got {radius}"
                    )));
                }
            }
            NeighbourhoodShape::HalfSpace { normal, offset } => {
                if normal.dim() != self.center.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: self.center.dim(),
                        got: normal.dim(),
                    });
                }
                if (normal.norm() - 1.0).abs() > 1e-9 {
                    return Err(Error::InvalidInput("half-space normal must be a unit vector".into()));
                }
                if !(*offset > 0.0 && offset.is_finite()) {
                    return Err(Error::InvalidInput("half-space offset must be positive".into()));
                }
            }
        }
        Ok(())
    }

    pub fn contains(&self, z: &[C64]) -> bool {
        self.constraint().contains(z)
    }

    /// Distance from `z ∈ U` to `∂U`.
    pub fn boundary_distance(&self, z: &[C64]) -> f64 {
        self.constraint().boundary_distance(z)
    }

    pub fn constraint(&self) -> Constraint {
        match &self.shape {
            NeighbourhoodShape::EuclideanBall { radius } => Constraint::Quadric {
                center: self.center.0.clone(),
                weights: vec![1.0; self.center.dim()],
                radius: *radius,
            },
            NeighbourhoodShape::HalfSpace { normal, offset } => Constraint::HalfSpace {
                level: offset + inner(&self.center, normal).re,
                normal: normal.0.clone(),
            },
        }
    }

    /// Requires the center to be a boundary point of `domain`.
    pub fn check_centered_on(&self, domain: &DomainSpec) -> Result<()> {
        self.validate()?;
        domain.check_dim(self.center.dim())?;
        let rho = domain.defining(&self.center);
        if rho.abs() > BOUNDARY_TOL {
            return Err(Error::NotOnBoundary(rho));
        }
        Ok(())
    }
}

/// A domain Ω ⊂ ℂⁿ from the closed list of supported kinds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "kebab-case")]
pub enum DomainSpec {
    UnitDisc,
    EuclideanBall {
        dim: usize,
    },
    Polydisc {
        dim: usize,
    },
    /// The upper half-plane `{Im ζ > 0}`.
    HalfPlane,
    /// `{Σ |z_j|² / a_j² < 1}`.
    Ellipsoid {
        semi_axes: Vec<f64>,
    },
    /// `ℂ ∖ {0}`.
    PuncturedPlane,
    /// `{|ζ| < 1} ∩ {|ζ − 1| < 1/2}`.
    Lens,
    Product {
        left: Box<DomainSpec>,
        right: Box<DomainSpec>,
    },
    Intersection {
        domain: Box<DomainSpec>,
        neighbourhood: NeighbourhoodSpec,
    },
}

/// One convex piece of a domain. Values are normalized so that the set is
/// `{value < 0}` and the boundary is `{value = 0}`.
#[derive(Clone, Debug, PartialEq)]
pub enum Constraint {
    /// `Σ w_j |x_j − c_j|² < r²`; coordinates with zero weight are free.
    Quadric {
        center: Vec<C64>,
        weights: Vec<f64>,
        radius: f64,
    },
    /// `Re⟨x, normal⟩ < level`, `normal` a unit vector.
    HalfSpace { normal: Vec<C64>, level: f64 },
}

impl Constraint {
    pub fn value(&self, x: &[C64]) -> f64 {
        match self {
            Constraint::Quadric {
                center,
                weights,
                radius,
            } => {
                let s: f64 = x
                    .iter()
                    .zip(center)
                    .zip(weights)
                    .map(|((x, c), w)| w * (x - c).norm_sqr())
                    .sum();
                s / (radius * radius) - 1.0
            }
            Constraint::HalfSpace { normal, level } => inner(x, normal).re - level,
        }
    }

    pub fn contains(&self, x: &[C64]) -> bool {
        self.value(x) < 0.0
    }

    fn isotropic_weight(weights: &[f64]) -> Option<f64> {
        let mut w0 = None;
        for &w in weights.iter().filter(|w| **w != 0.0) {
            match w0 {
                None => w0 = Some(w),
                Some(v) if (v - w).abs() <= 1e-15 * v => {}
                Some(_) => return None,
            }
        }
        w0
    }

    /// Euclidean distance from `x` (inside) to the boundary of this piece.
    pub fn boundary_distance(&self, x: &[C64]) -> f64 {
        match self {
            Constraint::Quadric {
                center,
                weights,
                radius,
            } => {
                if let Some(w) = Self::isotropic_weight(weights) {
                    let r2: f64 = x
                        .iter()
                        .zip(center)
                        .zip(weights)
                        .filter(|(_, w)| **w != 0.0)
                        .map(|((x, c), _)| (x - c).norm_sqr())
                        .sum();
                    (radius / w.sqrt() - r2.sqrt()).max(0.0)
                } else {
                    let rel: Vec<(f64, f64)> = x
                        .iter()
                        .zip(center)
                        .zip(weights)
                        .filter(|(_, w)| **w != 0.0)
                        .map(|((x, c), w)| ((x - c).norm(), w / (radius * radius)))
                        .collect();
                    ellipsoid_distance(&rel)
                }
            }
            Constraint::HalfSpace { normal, level } => (level - inner(x, normal).re).max(0.0),
        }
    }

    /// Unit outward normal (real gradient direction) at `x`.
    pub fn outward_normal(&self, x: &[C64]) -> Option<Vec<C64>> {
        match self {
            Constraint::Quadric {
                center, weights, ..
            } => {
                let g: Vec<C64> = x
                    .iter()
                    .zip(center)
                    .zip(weights)
                    .map(|((x, c), w)| (x - c) * *w)
                    .collect();
                normalized(&g)
            }
            Constraint::HalfSpace { normal, .. } => Some(normal.clone()),
        }
    }

    /// Largest `t ≥ 0` with `value(x + s·u) ≤ −margin` for all `s ∈ [0, t]`.
    pub fn ray_exit(&self, x: &[C64], u: &[C64], margin: f64) -> f64 {
        match self {
            Constraint::Quadric {
                center,
                weights,
                radius,
            } => {
                let r2 = radius * radius;
                let (mut a, mut b, mut c) = (0.0, 0.0, 0.0);
                for j in 0..x.len() {
                    let w = weights[j] / r2;
                    if w == 0.0 {
                        continue;
                    }
                    let d = x[j] - center[j];
                    a += w * u[j].norm_sqr();
                    b += w * (d * u[j].conj()).re;
                    c += w * d.norm_sqr();
                }
                let c = c - 1.0 + margin;
                if c >= 0.0 {
                    return 0.0;
                }
                if a <= 0.0 {
                    return f64::INFINITY;
                }
                let disc = (b * b - a * c).sqrt();
                if b > 0.0 {
                    -c / (b + disc)
                } else {
                    (disc - b) / a
                }
            }
            Constraint::HalfSpace { normal, level } => {
                let s = level - margin - inner(x, normal).re;
                if s <= 0.0 {
                    return 0.0;
                }
                let g = inner(u, normal).re;
                if g <= 0.0 {
                    f64::INFINITY
                } else {
                    s / g
                }
            }
        }
    }

    /// Restriction to the complex line `ζ ↦ x + ζ d`. `None` when the line
    /// never meets the boundary of this piece.
    pub fn slice(&self, x: &[C64], d: &[C64]) -> Option<PlanarConstraint> {
        match self {
            Constraint::Quadric {
                center,
                weights,
                radius,
            } => {
                let (mut a, mut b, mut c) = (0.0, C64::new(0.0, 0.0), 0.0);
                for j in 0..x.len() {
                    let w = weights[j];
                    if w == 0.0 {
                        continue;
                    }
                    let y = x[j] - center[j];
                    a += w * d[j].norm_sqr();
                    b += d[j] * y.conj() * w;
                    c += w * y.norm_sqr();
                }
                if a <= 1e-300 {
                    return None;
                }
                let ctr = -b.conj() / a;
                let r2 = (radius * radius - c) / a + b.norm_sqr() / (a * a);
                Some(PlanarConstraint::Disc {
                    center: ctr,
                    radius: r2.max(0.0).sqrt(),
                })
            }
            Constraint::HalfSpace { normal, level } => {
                let g = inner(d, normal);
                let gn = g.norm();
                if gn <= 1e-300 {
                    return None;
                }
                let rhs = level - inner(x, normal).re;
                let m = g.conj() / gn;
                Some(PlanarConstraint::HalfPlane {
                    point: m * (rhs / gn),
                    normal: m,
                })
            }
        }
    }

    /// Image under the linear functional `x ↦ ⟨x, u⟩` (`u` a unit vector):
    /// a planar region containing the image of this piece, if bounded in
    /// that direction.
    pub fn project(&self, u: &[C64]) -> Option<PlanarConstraint> {
        match self {
            Constraint::Quadric {
                center,
                weights,
                radius,
            } => {
                let mut s = 0.0;
                for (uj, w) in u.iter().zip(weights) {
                    let m = uj.norm_sqr();
                    if m == 0.0 {
                        continue;
                    }
                    if *w == 0.0 {
                        return None;
                    }
                    s += m / w;
                }
                Some(PlanarConstraint::Disc {
                    center: inner(center, u),
                    radius: radius * s.sqrt(),
                })
            }
            Constraint::HalfSpace { normal, level } => {
                // u = e^{iθ} n  ⇒  ⟨x, u⟩ = g ⟨x, n⟩ with g = ⟨n, u⟩
                let g = inner(normal, u);
                if (g.norm() - 1.0).abs() > 1e-12 {
                    return None;
                }
                Some(PlanarConstraint::HalfPlane {
                    point: g * *level,
                    normal: g,
                })
            }
        }
    }

    fn shifted(&self, offset: usize, total: usize) -> Constraint {
        let embed_c = |v: &[C64]| {
            let mut out = vec![C64::new(0.0, 0.0); total];
            out[offset..offset + v.len()].copy_from_slice(v);
            out
        };
        match self {
            Constraint::Quadric {
                center,
                weights,
                radius,
            } => {
                let mut w = vec![0.0; total];
                w[offset..offset + weights.len()].copy_from_slice(weights);
                Constraint::Quadric {
                    center: embed_c(center),
                    weights: w,
                    radius: *radius,
                }
            }
            Constraint::HalfSpace { normal, level } => Constraint::HalfSpace {
                normal: embed_c(normal),
                level: *level,
            },
        }
    }
}

/// Distance from an interior point to the ellipsoid `Σ w_j |y_j|² = 1`.
/// `rel[j] = (|x_j|, w_j)`.
///
/// Solves the one-dimensional secular equation for the Lagrange multiplier by
/// bisection; the degenerate case where every coordinate along the shortest
/// axis vanishes is handled separately.
pub fn ellipsoid_distance(rel: &[(f64, f64)]) -> f64 {
    let wmax = rel.iter().map(|r| r.1).fold(0.0, f64::max);
    if wmax <= 0.0 {
        return f64::INFINITY;
    }
    let secular = |mu: f64| -> f64 {
        rel.iter()
            .map(|&(x, w)| {
                let d = 1.0 - mu * w;
                w * x * x / (d * d)
            })
            .sum::<f64>()
    };
    let top_mass: f64 = rel
        .iter()
        .filter(|r| r.1 >= wmax * (1.0 - 1e-14))
        .map(|r| r.0 * r.0)
        .sum();
    if top_mass <= 1e-300 {
        // Lagrange multiplier pinned at 1/w_max: the remaining coordinates
        // are scaled and the shortest-axis coordinates absorb the slack.
        let mut filled = 0.0;
        let mut d2 = 0.0;
        for &(x, w) in rel.iter().filter(|r| r.1 < wmax * (1.0 - 1e-14)) {
            let y = x / (1.0 - w / wmax);
            filled += w * y * y;
            d2 += (y - x) * (y - x);
        }
        if filled <= 1.0 {
            return (d2 + (1.0 - filled) / wmax).sqrt();
        }
    }
    let (mut lo, mut hi) = (0.0, 1.0 / wmax);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if secular(mid) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mu = 0.5 * (lo + hi);
    rel.iter()
        .map(|&(x, w)| {
            let d = x * mu * w / (1.0 - mu * w);
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

impl DomainSpec {
    pub fn ball(dim: usize) -> Self {
        DomainSpec::EuclideanBall { dim }
    }

    pub fn polydisc(dim: usize) -> Self {
        DomainSpec::Polydisc { dim }
    }

    pub fn product(left: DomainSpec, right: DomainSpec) -> Self {
        DomainSpec::Product {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn intersect(self, neighbourhood: NeighbourhoodSpec) -> Self {
        DomainSpec::Intersection {
            domain: Box::new(self),
            neighbourhood,
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            DomainSpec::UnitDisc
            | DomainSpec::HalfPlane
            | DomainSpec::PuncturedPlane
            | DomainSpec::Lens => 1,
            DomainSpec::EuclideanBall { dim } | DomainSpec::Polydisc { dim } => *dim,
            DomainSpec::Ellipsoid { semi_axes } => semi_axes.len(),
            DomainSpec::Product { left, right } => left.dimension() + right.dimension(),
            DomainSpec::Intersection { domain, .. } => domain.dimension(),
        }
    }

    pub fn is_bounded(&self) -> bool {
        match self {
            DomainSpec::HalfPlane | DomainSpec::PuncturedPlane => false,
            DomainSpec::Product { left, right } => left.is_bounded() && right.is_bounded(),
            DomainSpec::Intersection {
                domain,
                neighbourhood,
            } => {
                domain.is_bounded()
                    || matches!(
                        neighbourhood.shape,
                        NeighbourhoodShape::EuclideanBall { .. }
                    )
            }
            _ => true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            DomainSpec::EuclideanBall { dim } | DomainSpec::Polydisc { dim } if *dim == 0 => {
                Err(Error::InvalidDomain("dimension must be at least 1".into()))
            }
            DomainSpec::Ellipsoid { semi_axes } => {
                if semi_axes.is_empty() {
                    return Err(Error::InvalidDomain("ellipsoid needs at least one axis".into()));
                }
                if semi_axes.iter().any(|a| !(*a > 0.0 && a.is_finite())) {
                    return Err(Error::InvalidDomain("semi-axes must be positive".into()));
                }
                Ok(())
            }
            DomainSpec::Product { left, right } => {
                left.validate()?;
                right.validate()
            }
            DomainSpec::Intersection {
                domain,
                neighbourhood,
            } => {
                domain.validate()?;
                neighbourhood.validate()?;
                domain.check_dim(neighbourhood.dim())
            }
            _ => Ok(()),
        }
    }

    pub fn check_dim(&self, got: usize) -> Result<()> {
        let expected = self.dimension();
        if expected != got {
            return Err(Error::DimensionMismatch { expected, got });
        }
        Ok(())
    }

    /// The convex pieces of the domain, or `None` for kinds that are not
    /// convex (anything built on the punctured plane).
    pub fn constraints(&self) -> Option<Vec<Constraint>> {
        let n = self.dimension();
        let origin = vec![C64::new(0.0, 0.0); n];
        Some(match self {
            DomainSpec::UnitDisc => vec![Constraint::Quadric {
                center: origin,
                weights: vec![1.0],
                radius: 1.0,
            }],
            DomainSpec::EuclideanBall { dim } => vec![Constraint::Quadric {
                center: origin,
                weights: vec![1.0; *dim],
                radius: 1.0,
            }],
            DomainSpec::Polydisc { dim } => (0..*dim)
                .map(|j| {
                    let mut w = vec![0.0; *dim];
                    w[j] = 1.0;
                    Constraint::Quadric {
                        center: origin.clone(),
                        weights: w,
                        radius: 1.0,
                    }
                })
                .collect(),
            DomainSpec::HalfPlane => vec![Constraint::HalfSpace {
                normal: vec![C64::new(0.0, -1.0)],
                level: 0.0,
            }],
            DomainSpec::Ellipsoid { semi_axes } => vec![Constraint::Quadric {
                center: origin,
                weights: semi_axes.iter().map(|a| 1.0 / (a * a)).collect(),
                radius: 1.0,
            }],
            DomainSpec::PuncturedPlane => return None,
            DomainSpec::Lens => vec![
                Constraint::Quadric {
                    center: vec![C64::new(0.0, 0.0)],
                    weights: vec![1.0],
                    radius: 1.0,
                },
                Constraint::Quadric {
                    center: vec![C64::new(1.0, 0.0)],
                    weights: vec![1.0],
                    radius: 0.5,
                },
            ],
            DomainSpec::Product { left, right } => {
                let nl = left.dimension();
                let mut out: Vec<Constraint> = left
                    .constraints()?
                    .iter()
                    .map(|c| c.shifted(0, n))
                    .collect();
                out.extend(right.constraints()?.iter().map(|c| c.shifted(nl, n)));
                out
            }
            DomainSpec::Intersection {
                domain,
                neighbourhood,
            } => {
                let mut out = domain.constraints()?;
                out.push(neighbourhood.constraint());
                out
            }
        })
    }

    pub fn contains(&self, z: &[C64]) -> Result<bool> {
        self.check_dim(z.len())?;
        Ok(self.contains_unchecked(z))
    }

    pub(crate) fn contains_unchecked(&self, z: &[C64]) -> bool {
        if z.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return false;
        }
        match self {
            DomainSpec::PuncturedPlane => z[0] != C64::new(0.0, 0.0),
            DomainSpec::Product { left, right } => {
                let nl = left.dimension();
                left.contains_unchecked(&z[..nl]) && right.contains_unchecked(&z[nl..])
            }
            DomainSpec::Intersection {
                domain,
                neighbourhood,
            } => domain.contains_unchecked(z) && neighbourhood.contains(z),
            _ => self
                .constraints()
                .map(|cs| cs.iter().all(|c| c.contains(z)))
                .unwrap_or(false),
        }
    }

    /// Defining function: negative inside, zero on the boundary.
    pub fn defining(&self, z: &[C64]) -> f64 {
        match self {
            DomainSpec::PuncturedPlane => -z[0].norm_sqr(),
            DomainSpec::Product { left, right } => {
                let nl = left.dimension();
                left.defining(&z[..nl]).max(right.defining(&z[nl..]))
            }
            DomainSpec::Intersection {
                domain,
                neighbourhood,
            } => domain
                .defining(z)
                .max(neighbourhood.constraint().value(z)),
            _ => self
                .constraints()
                .map(|cs| cs.iter().map(|c| c.value(z)).fold(f64::MIN, f64::max))
                .unwrap_or(f64::NAN),
        }
    }

    /// `δ_Ω(z) = inf{‖z − y‖ : y ∈ ∂Ω}` for `z ∈ Ω`.
    pub fn boundary_distance(&self, z: &[C64]) -> Result<f64> {
        if !self.contains(z)? {
            return Err(Error::OutsideDomain);
        }
        Ok(self.boundary_distance_unchecked(z))
    }

    pub(crate) fn boundary_distance_unchecked(&self, z: &[C64]) -> f64 {
        match self {
            DomainSpec::PuncturedPlane => z[0].norm(),
            DomainSpec::Product { left, right } => {
                let nl = left.dimension();
                left.boundary_distance_unchecked(&z[..nl])
                    .min(right.boundary_distance_unchecked(&z[nl..]))
            }
            DomainSpec::Intersection {
                domain,
                neighbourhood,
            } => domain
                .boundary_distance_unchecked(z)
                .min(neighbourhood.boundary_distance(z)),
            _ => self
                .constraints()
                .map(|cs| {
                    cs.iter()
                        .map(|c| c.boundary_distance(z))
                        .fold(f64::INFINITY, f64::min)
                })
                .unwrap_or(0.0),
        }
    }

    /// Unit inner normal at a smooth boundary point.
    pub fn inner_normal(&self, p: &[C64]) -> Result<Tangent> {
        self.check_dim(p.len())?;
        if let DomainSpec::PuncturedPlane = self {
            return Err(Error::NonSmoothBoundary("the puncture of C \\ {0}".into()));
        }
        let rho = self.defining(p);
        if rho.abs() > BOUNDARY_TOL {
            return Err(Error::NotOnBoundary(rho));
        }
        let cs = self
            .constraints()
            .ok_or_else(|| Error::NonSmoothBoundary("non-convex kind".into()))?;
        let active: Vec<&Constraint> = cs
            .iter()
            .filter(|c| c.value(p).abs() <= BOUNDARY_TOL)
            .collect();
        match active.as_slice() {
            [c] => {
                let n = c
                    .outward_normal(p)
                    .ok_or_else(|| Error::NonSmoothBoundary("degenerate gradient".into()))?;
                Ok(Tangent(scale(&n, C64::new(-1.0, 0.0))))
            }
            [] => Err(Error::NotOnBoundary(rho)),
            _ => Err(Error::NonSmoothBoundary(format!(
                "{} boundary pieces meet at this point",
                active.len()
            ))),
        }
    }

    /// Direction used to approach `p`: the inner normal where the boundary is
    /// smooth, a radial direction at corners and at the puncture.
    pub fn approach_direction(&self, p: &[C64]) -> Result<Tangent> {
        match self.inner_normal(p) {
            Ok(n) => Ok(n),
            Err(Error::NonSmoothBoundary(_)) => {
                let dir = match normalized(p) {
                    Some(u) => scale(&u, C64::new(-1.0, 0.0)),
                    None => {
                        let mut e = vec![C64::new(0.0, 0.0); p.len()];
                        e[0] = C64::new(1.0, 0.0);
                        e
                    }
                };
                let probe = axpy(p, C64::new(1e-6, 0.0), &dir);
                if self.contains_unchecked(&probe) {
                    Ok(Tangent(dir))
                } else {
                    Err(Error::NonSmoothBoundary(
                        "no radial approach direction into the domain".into(),
                    ))
                }
            }
            Err(e) => Err(e),
        }
    }

    /// The boundary point diametrically opposite `p` through the origin, if it
    /// is a boundary point.
    pub fn antipode(&self, p: &[C64]) -> Option<Point> {
        let q: Vec<C64> = p.iter().map(|z| -z).collect();
        (q != p && self.defining(&q).abs() <= BOUNDARY_TOL).then_some(Point(q))
    }

    /// A fixed interior point, used as the default base point `o`.
    pub fn base_point(&self) -> Point {
        let zero = C64::new(0.0, 0.0);
        match self {
            DomainSpec::HalfPlane => Point(vec![C64::new(0.0, 1.0)]),
            DomainSpec::PuncturedPlane => Point(vec![C64::new(1.0, 0.0)]),
            DomainSpec::Lens => Point(vec![C64::new(0.75, 0.0)]),
            DomainSpec::Product { left, right } => {
                let mut z = left.base_point().0;
                z.extend(right.base_point().0);
                Point(z)
            }
            DomainSpec::Intersection {
                domain,
                neighbourhood,
            } => {
                // deepest point on the segment from the ambient base point to
                // the neighbourhood centre
                let a = domain.base_point();
                let c = &neighbourhood.center;
                (0..=64)
                    .map(|k| {
                        let t = k as f64 / 64.0;
                        Point(a.iter().zip(c.iter()).map(|(x, y)| x + (y - x) * t).collect())
                    })
                    .filter(|z| self.contains_unchecked(z))
                    .map(|z| (self.boundary_distance_unchecked(&z), z))
                    .fold(None, |best: Option<(f64, Point)>, cur| match best {
                        Some(b) if b.0 >= cur.0 => Some(b),
                        _ => Some(cur),
                    })
                    .map(|b| b.1)
                    .unwrap_or(a)
            }
            _ => Point(vec![zero; self.dimension()]),
        }
    }

    /// True when `domain ⊂ self`. Decided structurally: an intersection is a
    /// subdomain of its ambient domain (and of anything containing that).
    pub fn contains_domain(&self, domain: &DomainSpec) -> bool {
        if self == domain {
            return true;
        }
        match domain {
            DomainSpec::Intersection { domain: inner, .. } => self.contains_domain(inner),
            _ => false,
        }
    }

    /// Short human-readable name.
    pub fn label(&self) -> String {
        match self {
            DomainSpec::UnitDisc => "disc".into(),
            DomainSpec::EuclideanBall { dim } => format!("ball{dim}"),
            DomainSpec::Polydisc { dim } => format!("polydisc{dim}"),
            DomainSpec::HalfPlane => "half-plane".into(),
            DomainSpec::Ellipsoid { semi_axes } => format!("ellipsoid{semi_axes:?}"),
            DomainSpec::PuncturedPlane => "punctured-plane".into(),
            DomainSpec::Lens => "lens".into(),
            DomainSpec::Product { left, right } => format!("{}x{}", left.label(), right.label()),
            DomainSpec::Intersection { domain, .. } => format!("{}-cap-U", domain.label()),
        }
    }
}

/// Offsets `t_n` of a boundary-approach sequence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Schedule {
    /// `t_n = 2^{-n}`, `n = 1..=count`.
    Dyadic { count: usize },
    /// Explicit `(n, t_n)` pairs.
    Custom { offsets: Vec<f64> },
}

impl Schedule {
    pub fn dyadic(count: usize) -> Self {
        Schedule::Dyadic { count }
    }

    fn rows(&self) -> Vec<(usize, f64)> {
        match self {
            Schedule::Dyadic { count } => (1..=*count).map(|n| (n, 0.5f64.powi(n as i32))).collect(),
            Schedule::Custom { offsets } => offsets.iter().enumerate().map(|(i, t)| (i + 1, *t)).collect(),
        }
    }
}

/// How the two points of a pair are separated at each step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Split {
    /// `±factor · i · direction`, scaled by `t_n`.
    Tangential { factor: f64 },
    /// Explicit offsets, scaled by `t_n`.
    Offsets { first: Tangent, second: Tangent },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundarySequence {
    pub anchor: Point,
    pub direction: Tangent,
    pub indices: Vec<usize>,
    pub offsets: Vec<f64>,
    pub split: Option<[Tangent; 2]>,
    /// `(z_n, w_n)`; `w_n = z_n` without a split.
    pub points: Vec<(Point, Point)>,
}

impl BoundarySequence {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn z(&self, i: usize) -> &Point {
        &self.points[i].0
    }

    pub fn w(&self, i: usize) -> &Point {
        &self.points[i].1
    }

    /// Keeps the steps whose points both lie in `u`, with their labels.
    pub fn restrict_to(&self, u: &NeighbourhoodSpec) -> Result<BoundarySequence> {
        let keep: Vec<usize> = (0..self.len())
            .filter(|&i| u.contains(self.z(i)) && u.contains(self.w(i)))
            .collect();
        if keep.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(BoundarySequence {
            anchor: self.anchor.clone(),
            direction: self.direction.clone(),
            indices: keep.iter().map(|&i| self.indices[i]).collect(),
            offsets: keep.iter().map(|&i| self.offsets[i]).collect(),
            split: self.split.clone(),
            points: keep.iter().map(|&i| self.points[i].clone()).collect(),
        })
    }
}

pub const MAX_SEQUENCE_LEN: usize = 16;

/// Points `z_n = p + t_n (direction + s)` approaching the boundary point `p`.
/// `direction = None` uses [`DomainSpec::inner_normal`], which refuses
/// non-smooth boundary points.
pub fn make_sequence(
    domain: &DomainSpec,
    p: &Point,
    schedule: &Schedule,
    direction: Option<&Tangent>,
    split: Option<&Split>,
) -> Result<BoundarySequence> {
    domain.check_dim(p.dim())?;
    let rho = domain.defining(p);
    if rho.abs() > BOUNDARY_TOL {
        return Err(Error::NotOnBoundary(rho));
    }
    let direction = match direction {
        Some(d) => {
            domain.check_dim(d.dim())?;
            Tangent(normalized(d).ok_or_else(|| Error::InvalidInput("zero direction".into()))?)
        }
        None => domain.inner_normal(p)?,
    };
    let rows = schedule.rows();
    if rows.is_empty() || rows.len() > MAX_SEQUENCE_LEN {
        return Err(Error::InvalidInput(format!(
            "sequence length must be in 1..={MAX_SEQUENCE_LEN}"
        )));
    }
    if rows.iter().any(|r| !(r.1 > 0.0)) || rows.windows(2).any(|w| w[1].1 >= w[0].1) {
        return Err(Error::InvalidInput("offsets must be positive and strictly decreasing".into()));
    }
    let split = split.map(|s| match s {
        Split::Tangential { factor } => {
            let rot = scale(&direction, C64::new(0.0, *factor));
            [Tangent(rot.clone()), Tangent(scale(&rot, C64::new(-1.0, 0.0)))]
        }
        Split::Offsets { first, second } => [first.clone(), second.clone()],
    });
    let mut points = Vec::with_capacity(rows.len());
    for (i, &(_, t)) in rows.iter().enumerate() {
        let base = p.offset(t, &direction);
        let pair = match &split {
            Some([a, b]) => (base.offset(t, a), base.offset(t, b)),
            None => (base.clone(), base),
        };
        if !domain.contains_unchecked(&pair.0) || !domain.contains_unchecked(&pair.1) {
            return Err(Error::SequenceEscapes(i));
        }
        points.push(pair);
    }
    Ok(BoundarySequence {
        anchor: p.clone(),
        direction,
        indices: rows.iter().map(|r| r.0).collect(),
        offsets: rows.iter().map(|r| r.1).collect(),
        split,
        points,
    })
}
