use serde::{Deserialize, Serialize};

/// Where a bound came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Closed-form value on a model domain.
    Oracle,
    /// Optimized polynomial analytic disc, certified by sampling.
    DiscOptimization,
    /// Holomorphic projection onto a planar region containing the image.
    HalfSpace,
    /// Kobayashi–Royden length of an explicit curve.
    Curve,
    /// Comparison with a larger domain.
    Inclusion,
    /// Extremal disc of a complex-line slice.
    Slice,
    /// Product of discs in the factors.
    Product,
    /// Disc of radius `δ_Ω(z)` centred at `z`.
    InscribedDisc,
    /// Trivially exact (`z = w` or `v = 0`).
    Exact,
    /// No nontrivial bound available.
    Vacuous,
    /// Sampled, not certified.
    Heuristic,
    /// Combination of brackets by interval arithmetic.
    Derived,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Oracle => "oracle",
            Method::DiscOptimization => "disc-optimization",
            Method::HalfSpace => "half-space",
            Method::Curve => "curve",
            Method::Inclusion => "inclusion",
            Method::Slice => "slice",
            Method::Product => "product",
            Method::InscribedDisc => "inscribed-disc",
            Method::Exact => "exact",
            Method::Vacuous => "vacuous",
            Method::Heuristic => "heuristic",
            Method::Derived => "derived",
        }
    }
}

/// Two-sided enclosure `lower ≤ value ≤ upper`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub lower: f64,
    pub upper: f64,
    pub method_lower: Method,
    pub method_upper: Method,
}

/// Uppers that undercut lowers by less than this (relative) are rounding
/// noise between two exact computations and get clamped.
pub const CLAMP_REL: f64 = 1e-9;

impl Bracket {
    pub fn new(lower: f64, upper: f64, method_lower: Method, method_upper: Method) -> Self {
        Self {
            lower,
            upper,
            method_lower,
            method_upper,
        }
    }

    pub fn exact(value: f64) -> Self {
        Self::new(value, value, Method::Exact, Method::Exact)
    }

    pub fn zero() -> Self {
        Self::exact(0.0)
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn rel_width(&self) -> f64 {
        let scale = self.upper.abs().max(self.lower.abs());
        if scale == 0.0 {
            0.0
        } else {
            self.width() / scale
        }
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn contains(&self, x: f64, tol: f64) -> bool {
        self.lower - tol <= x && x <= self.upper + tol
    }

    pub fn is_consistent(&self) -> bool {
        self.lower <= self.upper + 1e-12 && self.lower.is_finite() && self.upper.is_finite()
    }

    /// Raises the lower bound if `value` is larger.
    pub fn raise(&mut self, value: f64, method: Method) {
        if value > self.lower {
            self.lower = value;
            self.method_lower = method;
        }
    }

    /// Lowers the upper bound if `value` is smaller.
    pub fn cut(&mut self, value: f64, method: Method) {
        if value < self.upper {
            self.upper = value;
            self.method_upper = method;
        }
    }

    /// Resolves rounding-level crossings of two exact computations.
    pub fn clamped(mut self) -> Self {
        if self.upper < self.lower {
            let tol = CLAMP_REL * self.lower.abs().max(1e-300) + 1e-15;
            if self.lower - self.upper <= tol {
                self.upper = self.lower;
            }
        }
        self
    }

    pub fn add(&self, other: &Bracket) -> Bracket {
        Bracket::new(
            self.lower + other.lower,
            self.upper + other.upper,
            Method::Derived,
            Method::Derived,
        )
    }

    pub fn sub(&self, other: &Bracket) -> Bracket {
        Bracket::new(
            self.lower - other.upper,
            self.upper - other.lower,
            Method::Derived,
            Method::Derived,
        )
    }

    pub fn scale(&self, s: f64) -> Bracket {
        let (a, b) = (self.lower * s, self.upper * s);
        Bracket::new(a.min(b), a.max(b), self.method_lower, self.method_upper)
    }
}
