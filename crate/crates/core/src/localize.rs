//! Localization experiments: the Royden inequality audit, containment of
//! ε-geodesics near a boundary point, and the convergence tables comparing
//! `k_{Ω∩U}` with `k_Ω`.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::boundary::{self, ScanKind, ScanPlan, ScanReport, Verdict};
use crate::bracket::{Bracket, Method};
use crate::config::EstimatorConfig;
use crate::geometry::{
    make_sequence, BoundarySequence, DomainSpec, NeighbourhoodSpec, Point, Schedule, Split, Tangent,
};
use crate::metric::Estimator;
use crate::paths::{find_epsilon_geodesic, kobayashi_distance};
use crate::{Error, Result};

/// Denominators at or below this are not divided by.
pub const DENOMINATOR_FLOOR: f64 = 1e-9;
/// Slack allowed by the audits.
/// Differences this small are treated as exact zeros.
pub const ROUNDOFF: f64 = 1e-12;
pub const AUDIT_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalizationRow {
    pub n: usize,
    pub t: f64,
    pub z: Point,
    pub w: Point,
    pub k_omega: Bracket,
    pub k_intersection: Bracket,
    /// `k_{Ω∩U} / k_Ω`; `None` when the denominator's lower bound vanishes.
    pub ratio: Option<Bracket>,
    pub difference: Bracket,
    pub flagged: bool,
}

/// Conservative quotient `a / b` for `b.lower > 0`.
pub fn ratio(a: &Bracket, b: &Bracket) -> Option<Bracket> {
    (b.lower > DENOMINATOR_FLOOR).then(|| {
        Bracket::new(a.lower / b.upper, a.upper / b.lower, Method::Derived, Method::Derived)
    })
}

fn intersection(est: &Estimator, u: &NeighbourhoodSpec) -> Result<Estimator> {
    u.check_centered_on(est.domain())?;
    est.for_domain(est.domain().clone().intersect(u.clone()))
}

/// One row comparing the two distances at a pair in `Ω ∩ U`.
pub fn localization_row(est: &Estimator, local: &Estimator, n: usize, t: f64, z: &Point, w: &Point) -> Result<LocalizationRow> {
    let k_omega = kobayashi_distance(est, z, w)?;
    let k_intersection = kobayashi_distance(local, z, w)?;
    let ratio = ratio(&k_intersection, &k_omega);
    Ok(LocalizationRow {
        n,
        t,
        z: z.clone(),
        w: w.clone(),
        k_omega,
        k_intersection,
        flagged: ratio.is_none(),
        ratio,
        difference: k_intersection.sub(&k_omega),
    })
}

fn table(est: &Estimator, u: &NeighbourhoodSpec, seq: &BoundarySequence) -> Result<Vec<LocalizationRow>> {
    let local = intersection(est, u)?;
    let seq = seq.restrict_to(u)?;
    let idx: Vec<usize> = (0..seq.len()).collect();
    crate::par::map(&idx, |&i| localization_row(est, &local, seq.indices[i], seq.offsets[i], seq.z(i), seq.w(i)))
        .into_iter()
        .collect()
}

/// Ratio table `k_{Ω∩U}(z_n, w_n) / k_Ω(z_n, w_n)`. Needs distinct pairs.
pub fn multiplicative_table(est: &Estimator, u: &NeighbourhoodSpec, seq: &BoundarySequence) -> Result<Vec<LocalizationRow>> {
    if seq.split.is_none() || seq.points.iter().any(|(z, w)| z == w) {
        return Err(Error::InvalidInput("the ratio table needs z_n != w_n".into()));
    }
    table(est, u, seq)
}

/// Difference table `k_{Ω∩U}(z_n, w_n) − k_Ω(z_n, w_n)`.
pub fn additive_table(est: &Estimator, u: &NeighbourhoodSpec, seq: &BoundarySequence) -> Result<Vec<LocalizationRow>> {
    table(est, u, seq)
}

/// Default sequence for the tables: `t_n = 2^{-n}` along the approach
/// direction with tangential split `±i t_n / 4`.
pub fn table_sequence(est: &Estimator, p: &Point, steps: usize) -> Result<BoundarySequence> {
    let dir = est.domain().approach_direction(p)?;
    make_sequence(
        est.domain(),
        p,
        &Schedule::dyadic(steps),
        Some(&dir),
        Some(&Split::Tangential { factor: 0.25 }),
    )
}

/// Ratio upper bounds nonincreasing over the last `window` rows and the final
/// one at most `bound`.
pub fn ratio_converges(rows: &[LocalizationRow], window: usize, bound: f64) -> bool {
    let ups: Option<Vec<f64>> = rows.iter().map(|r| r.ratio.map(|b| b.upper)).collect();
    let Some(ups) = ups else { return false };
    if ups.len() < window || window == 0 {
        return false;
    }
    let t = &ups[ups.len() - window..];
    t.windows(2).all(|w| w[1] <= w[0] + 1e-12) && t[window - 1] <= bound
}

/// Difference upper bounds trending down (negative least-squares slope over
/// the last `window` rows, or already at roundoff level) and the final one at
/// most `bound`.
pub fn difference_converges(rows: &[LocalizationRow], window: usize, bound: f64) -> bool {
    if rows.len() < window || window < 2 || rows.iter().any(|r| r.flagged) {
        return false;
    }
    let t = &rows[rows.len() - window..];
    let s = boundary::slope(&t.iter().map(|r| (r.n as f64, r.difference.upper)).collect::<Vec<_>>());
    let vanished = t.iter().all(|r| r.difference.upper.abs() <= ROUNDOFF);
    (s < 0.0 || vanished) && t[window - 1].difference.upper <= bound
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricRatioRow {
    pub n: usize,
    pub t: f64,
    pub z: Point,
    pub kappa_omega: Bracket,
    pub kappa_intersection: Bracket,
    pub ratio: Option<Bracket>,
}

/// `κ_{Ω∩U}(z_n; v) / κ_Ω(z_n; v)` along the approach sequence.
pub fn metric_ratio_table(est: &Estimator, u: &NeighbourhoodSpec, seq: &BoundarySequence, v: &Tangent) -> Result<Vec<MetricRatioRow>> {
    let local = intersection(est, u)?;
    est.domain().check_dim(v.dim())?;
    if v.norm() == 0.0 {
        return Err(Error::InvalidInput("direction must be nonzero".into()));
    }
    let seq = seq.restrict_to(u)?;
    let idx: Vec<usize> = (0..seq.len()).collect();
    crate::par::map(&idx, |&i| {
        let z = seq.z(i);
        let kappa_omega = est.kr_metric(z, v)?;
        let kappa_intersection = local.kr_metric(z, v)?;
        Ok(MetricRatioRow {
            n: seq.indices[i],
            t: seq.offsets[i],
            z: z.clone(),
            kappa_omega,
            kappa_intersection,
            ratio: ratio(&kappa_intersection, &kappa_omega),
        })
    })
    .into_iter()
    .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AuditStatus {
    /// `lhs.upper ≤ rhs.lower + tol`.
    Certified,
    /// The brackets overlap.
    Consistent,
    /// `lhs.lower > rhs.upper + tol`.
    Violation,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditRecord {
    pub inputs: Vec<Point>,
    pub lhs: Bracket,
    pub rhs: Bracket,
    pub status: AuditStatus,
    pub passed: bool,
    /// `rhs.lower − lhs.upper`.
    pub slack: f64,
}

impl AuditRecord {
    pub fn new(inputs: Vec<Point>, lhs: Bracket, rhs: Bracket) -> Self {
        let status = if lhs.upper <= rhs.lower + AUDIT_TOL {
            AuditStatus::Certified
        } else if lhs.lower <= rhs.upper + AUDIT_TOL {
            AuditStatus::Consistent
        } else {
            AuditStatus::Violation
        };
        Self {
            inputs,
            lhs,
            rhs,
            passed: status != AuditStatus::Violation,
            slack: rhs.lower - lhs.upper,
            status,
        }
    }
}

/// Checks `l̃_Ω(z, Ω∖D) · κ_D(z; v) ≤ κ_Ω(z; v)` at each `(z, v)`, where
/// `sub` is an intersection `D = Ω ∩ N`.
pub fn royden_audit(est: &Estimator, sub: &DomainSpec, samples: &[(Point, Tangent)]) -> Result<Vec<AuditRecord>> {
    let n = match sub {
        DomainSpec::Intersection { domain, neighbourhood } if est.domain().contains_domain(domain) => neighbourhood,
        _ => return Err(Error::NotSubdomain),
    };
    let local = est.for_domain(sub.clone())?;
    crate::par::map(samples, |(z, v)| {
        local.check_point(z)?;
        let l = est.lempert_tilde_to_set(z, n)?;
        let kd = local.kr_metric(z, v)?;
        let ko = est.kr_metric(z, v)?;
        let lhs = Bracket::new(l.lower * kd.lower, l.upper * kd.upper, Method::Derived, Method::Derived);
        Ok(AuditRecord::new(vec![z.clone(), Point(v.0.clone())], lhs, ko))
    })
    .into_iter()
    .collect()
}

/// Seeded sample points of `domain` with unit directions.
pub fn sample_plan(domain: &DomainSpec, count: usize, seed: u64) -> Result<Vec<(Point, Tangent)>> {
    let n = domain.dimension();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut tries = 0usize;
    while out.len() < count {
        tries += 1;
        if tries > 10_000 * count.max(1) {
            return Err(Error::EmptySet);
        }
        let z: Vec<C64> = (0..n).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        if !domain.contains(&z)? || domain.boundary_distance(&z)? < 1e-3 {
            continue;
        }
        let v: Vec<C64> = (0..n).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let Some(v) = crate::geometry::normalized(&v) else { continue };
        out.push((Point(z), Tangent(v)));
    }
    Ok(out)
}

/// ε-geodesics between seeded pairs in `Ω ∩ W` must stay in `Ω ∩ V`. Each
/// record has `lhs` = the largest defining value of `V` over the path nodes
/// and `rhs = 0`.
pub fn claim2_containment(
    est: &Estimator,
    v: &NeighbourhoodSpec,
    w: &NeighbourhoodSpec,
    eps: f64,
    pairs: usize,
) -> Result<Vec<AuditRecord>> {
    v.check_centered_on(est.domain())?;
    w.check_centered_on(est.domain())?;
    let inner = est.domain().clone().intersect(w.clone());
    let pts = sample_plan(&inner, 2 * pairs, est.config().seed ^ 0xc1a2)?;
    let jobs: Vec<(Point, Point)> = pts.chunks(2).map(|c| (c[0].0.clone(), c[1].0.clone())).collect();
    let cons = v.constraint();
    crate::par::map(&jobs, |(a, b)| {
        let g = find_epsilon_geodesic(est, a, b, eps)?;
        let worst = g.path.nodes.iter().map(|x| cons.value(x)).fold(f64::NEG_INFINITY, f64::max);
        let rec = AuditRecord {
            inputs: vec![a.clone(), b.clone()],
            lhs: Bracket::exact(worst),
            rhs: Bracket::zero(),
            status: if worst < 0.0 { AuditStatus::Certified } else { AuditStatus::Violation },
            passed: worst < 0.0,
            slack: -worst,
        };
        Ok(rec)
    })
    .into_iter()
    .collect()
}

/// Outcome of one scan inside the corollary suite; refused scans keep the
/// reason.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanOutcome {
    pub kind: ScanKind,
    pub verdict: Option<Verdict>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub refused: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub report: Option<ScanReport>,
}

impl ScanOutcome {
    pub fn new(kind: ScanKind, r: Result<ScanReport>) -> Self {
        match r {
            Ok(rep) => Self {
                kind,
                verdict: Some(rep.verdict),
                passed: rep.passes(),
                refused: None,
                report: Some(rep),
            },
            Err(e) => Self {
                kind,
                verdict: None,
                passed: false,
                refused: Some(e.to_string()),
                report: None,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableOutcome {
    pub rows: Vec<LocalizationRow>,
    pub converges: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub refused: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceReport {
    pub name: String,
    pub domain: DomainSpec,
    pub point: Point,
    pub scans: Vec<ScanOutcome>,
    pub multiplicative: TableOutcome,
    pub additive: TableOutcome,
    pub all_passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub cfg: EstimatorConfig,
    pub plan: ScanPlan,
    pub instances: Vec<InstanceReport>,
}

/// Table length used by the suite.
pub const TABLE_STEPS: usize = 10;

/// Runs the classifier scans and both localization tables on a fixed
/// instance list: the ball in `ℂ²` at `(1,0)`, the disc at `1`, and the
/// punctured plane at `0` as a negative control.
pub fn corollary_suite(cfg: &EstimatorConfig, plan: &ScanPlan) -> Result<SuiteReport> {
    cfg.validate()?;
    plan.validate()?;
    let instances = vec![
        ("ball2", DomainSpec::ball(2), Point::real(&[1.0, 0.0]), 0.1),
        ("disc", DomainSpec::UnitDisc, Point::from(1.0), 0.05),
        ("punctured-plane", DomainSpec::PuncturedPlane, Point::from(0.0), 0.1),
    ];
    let mut out = Vec::new();
    for (name, domain, p, diff_bound) in instances {
        let est = Estimator::new(domain.clone(), cfg.clone())?;
        out.push(run_instance(&est, name, &p, plan, diff_bound));
    }
    Ok(SuiteReport {
        cfg: cfg.clone(),
        plan: plan.clone(),
        instances: out,
    })
}

fn run_instance(est: &Estimator, name: &str, p: &Point, plan: &ScanPlan, diff_bound: f64) -> InstanceReport {
    let u = plan.neighbourhood(p);
    let o = est.domain().base_point();
    let scans = vec![
        ScanOutcome::new(ScanKind::KPoint, boundary::k_point_scan(est, p, &u, plan)),
        ScanOutcome::new(ScanKind::VPoint, boundary::v_point_scan(est, p, None, &o, plan)),
        ScanOutcome::new(ScanKind::WPoint, boundary::w_point_scan(est, p, &u, plan)),
        ScanOutcome::new(ScanKind::WeakW, boundary::weak_w_scan(est, p, &o, plan)),
        ScanOutcome::new(ScanKind::HyperbolicityAt, boundary::hyperbolicity_at_scan(est, p, plan)),
        ScanOutcome::new(ScanKind::HyperbolicityNear, boundary::hyperbolicity_near_scan(est, p, plan)),
    ];
    let seq = table_sequence(est, p, TABLE_STEPS);
    let table_outcome = |rows: Result<Vec<LocalizationRow>>, check: &dyn Fn(&[LocalizationRow]) -> bool| match rows {
        Ok(rows) if rows.iter().all(|r| r.flagged) => TableOutcome {
            rows,
            converges: false,
            refused: Some("denominator vanishes on every row".into()),
        },
        Ok(rows) => TableOutcome {
            converges: check(&rows),
            rows,
            refused: None,
        },
        Err(e) => TableOutcome {
            rows: Vec::new(),
            converges: false,
            refused: Some(e.to_string()),
        },
    };
    let (mult, add) = match &seq {
        Ok(seq) => (
            table_outcome(multiplicative_table(est, &u, seq), &|r| ratio_converges(r, WINDOW, 1.15)),
            table_outcome(additive_table(est, &u, seq), &|r| difference_converges(r, WINDOW, diff_bound)),
        ),
        Err(e) => {
            let refused = TableOutcome {
                rows: Vec::new(),
                converges: false,
                refused: Some(e.to_string()),
            };
            (refused.clone(), refused)
        }
    };
    let all_passed = scans.iter().all(|s| s.passed) && mult.converges && add.converges;
    InstanceReport {
        name: name.into(),
        domain: est.domain().clone(),
        point: p.clone(),
        scans,
        multiplicative: mult,
        additive: add,
        all_passed,
    }
}

const WINDOW: usize = 4;

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn est(d: DomainSpec) -> Estimator {
        Estimator::new(d, EstimatorConfig::default()).unwrap()
    }

    #[test]
    fn royden_sharp_case() {
        let e = est(DomainSpec::UnitDisc);
        let half = DomainSpec::UnitDisc.intersect(NeighbourhoodSpec::ball(Point::from(0.0), 0.5));
        let recs = royden_audit(
            &e,
            &half,
            &[(Point::from(0.0), Tangent::from(1.0)), (Point::from(0.25), Tangent::from(1.0))],
        )
        .unwrap();
        assert_relative_eq!(recs[0].lhs.upper, 1.0, epsilon = 1e-6);
        assert_relative_eq!(recs[0].rhs.lower, 1.0, epsilon = 1e-6);
        assert_eq!(recs[0].status, AuditStatus::Certified);
        assert!(recs[1].lhs.upper < recs[1].rhs.lower);
        assert!(royden_audit(&e, &DomainSpec::ball(2), &[]).is_err());
    }

    #[test]
    fn disc_tables() {
        let e = est(DomainSpec::UnitDisc);
        let p = Point::from(1.0);
        let u = NeighbourhoodSpec::ball(p.clone(), 0.5);
        let seq = table_sequence(&e, &p, 10).unwrap();
        let m = multiplicative_table(&e, &u, &seq).unwrap();
        assert_eq!(m.last().unwrap().n, 10);
        assert!(m.iter().all(|r| r.ratio.unwrap().lower >= 1.0 - 1e-6 && r.difference.lower >= -1e-6));
        assert!(ratio_converges(&m, 6, 1.10), "{:?}", m.iter().map(|r| r.ratio.unwrap().upper).collect::<Vec<_>>());
        let a = additive_table(&e, &u, &seq).unwrap();
        assert!(difference_converges(&a, 4, 0.05));
        let same = make_sequence(e.domain(), &p, &Schedule::dyadic(6), None, None).unwrap();
        assert!(multiplicative_table(&e, &u, &same).is_err());
        let a = additive_table(&e, &u, &same).unwrap();
        assert!(a.iter().all(|r| r.difference.lower == 0.0 && r.difference.upper == 0.0));
    }

    #[test]
    fn metric_ratio_tends_to_one() {
        let e = est(DomainSpec::UnitDisc);
        let p = Point::from(1.0);
        let u = NeighbourhoodSpec::ball(p.clone(), 0.5);
        let seq = make_sequence(e.domain(), &p, &Schedule::dyadic(10), None, None).unwrap();
        let rows = metric_ratio_table(&e, &u, &seq, &Tangent::from(1.0)).unwrap();
        assert!(rows.last().unwrap().ratio.unwrap().upper <= 1.05);
    }

    #[test]
    fn claim2_in_the_disc() {
        let e = est(DomainSpec::UnitDisc);
        let p = Point::from(1.0);
        let recs = claim2_containment(
            &e,
            &NeighbourhoodSpec::ball(p.clone(), 0.5),
            &NeighbourhoodSpec::ball(p, 0.125),
            0.05,
            10,
        )
        .unwrap();
        assert!(recs.iter().all(|r| r.passed));
    }
}
