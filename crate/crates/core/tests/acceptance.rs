//! Acceptance criteria 1–9. Runs as a plain binary: one PASS/FAIL line per
//! criterion, nonzero exit status if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::*;
use klab_core::boundary::{self, dini_audit, ScanKind, ScanPlan, Verdict};
use klab_core::config::EstimatorConfig;
use klab_core::geometry::{make_sequence, Schedule, Split};
use klab_core::disc::{lempert_disc, metric_disc};
use klab_core::localize::{self, AuditStatus};
use klab_core::paths::{concatenate, find_epsilon_geodesic};
use klab_core::report;
use klab_core::{kobayashi_distance, DomainSpec, Estimator, NeighbourhoodSpec, Point, Tangent};

type Outcome = Result<String, String>;

fn no_oracles() -> EstimatorConfig {
    EstimatorConfig {
        oracles: false,
        ..Default::default()
    }
}

fn check(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn within(budget: Duration, t: Instant) -> Result<(), String> {
    if t.elapsed() <= budget {
        Ok(())
    } else {
        Err(format!("runtime {:?} exceeds {:?}", t.elapsed(), budget))
    }
}

/// Metric and Lempert brackets against closed forms, and the polynomial-disc
/// optimizer on its own.
fn criterion_1() -> Outcome {
    let t0 = Instant::now();
    let domains = [DomainSpec::UnitDisc, DomainSpec::ball(2), DomainSpec::polydisc(2)];
    let mut worst_est: f64 = 0.0;
    let mut worst_opt: f64 = 0.0;
    let mut failures = Vec::new();
    for d in &domains {
        let est = Estimator::new(d.clone(), no_oracles()).map_err(|e| e.to_string())?;
        let mut r = rng(11);
        let samples: Vec<(Point, Tangent, Point)> = (0..20)
            .map(|_| {
                let z = point_in(d, &mut r, 1.0, 0.02);
                let v = direction(d.dimension(), &mut r);
                let w = point_in(d, &mut r, 1.0, 0.02);
                (z, v, w)
            })
            .collect();
        for (z, v, w) in &samples {
            let exact_k = metric(d, z, v).unwrap();
            let b = est.kr_metric(z, v).map_err(|e| e.to_string())?;
            let rel = (b.upper - exact_k) / exact_k;
            worst_est = worst_est.max(rel);
            if !(b.lower <= exact_k * (1.0 + 1e-6) && exact_k <= b.upper + 1e-6 && rel <= 0.02) {
                failures.push(format!("{} kappa {b:?} vs {exact_k}", d.label()));
            }
            let exact_l = distance(d, z, w).unwrap();
            let b = est.lempert(z, w).map_err(|e| e.to_string())?;
            let rel = (b.upper - exact_l) / exact_l;
            worst_est = worst_est.max(rel);
            if !(b.lower <= exact_l * (1.0 + 1e-6) && exact_l <= b.upper + 1e-6 && rel <= 0.02) {
                failures.push(format!("{} lempert {b:?} vs {exact_l}", d.label()));
            }
        }
        // the optimizer alone, away from the boundary; degree 8 truncation
        // of the extremal leaves a few percent, degree 12 does not
        let cfg = EstimatorConfig {
            degree: 12,
            max_evals: 20_000,
            ..Default::default()
        };
        let mut r = rng(12);
        for _ in 0..10 {
            let z = point_in(d, &mut r, 0.7, 0.3);
            let v = direction(d.dimension(), &mut r);
            let w = point_in(d, &mut r, 0.7, 0.3);
            let exact_k = metric(d, &z, &v).unwrap();
            let fit = metric_disc(d, &z, &v, &cfg).ok_or("metric disc search found no certified disc")?;
            let rel = (fit.value - exact_k) / exact_k;
            worst_opt = worst_opt.max(rel);
            if !(fit.value >= exact_k - 1e-6 && rel <= 0.02) {
                failures.push(format!("{} disc kappa {} vs {exact_k}", d.label(), fit.value));
            }
            let exact_l = distance(d, &z, &w).unwrap();
            let fit = lempert_disc(d, &z, &w, &cfg).ok_or("two-point disc search found no certified disc")?;
            let l = fit.value.atanh();
            let rel = (l - exact_l) / exact_l;
            worst_opt = worst_opt.max(rel);
            if !(l >= exact_l - 1e-6 && rel <= 0.02) {
                failures.push(format!("{} disc lempert {l} vs {exact_l}", d.label()));
            }
        }
    }
    within(Duration::from_secs(120), t0)?;
    check(
        failures.is_empty(),
        format!(
            "estimator max rel excess {worst_est:.2e}, optimizer max rel excess {worst_opt:.2e}, {:.1?}{}",
            t0.elapsed(),
            if failures.is_empty() { String::new() } else { format!("; {}", failures.join("; ")) }
        ),
    )
}

/// Distance brackets on 50 random pairs per model domain.
fn criterion_2() -> Outcome {
    let t0 = Instant::now();
    let domains = [
        (DomainSpec::UnitDisc, true),
        (DomainSpec::ball(2), true),
        (DomainSpec::polydisc(2), true),
        (DomainSpec::HalfPlane, true),
        (DomainSpec::Lens, true),
        (
            DomainSpec::Ellipsoid {
                semi_axes: vec![1.0, 2.0],
            },
            true,
        ),
        (DomainSpec::PuncturedPlane, false),
    ];
    let mut lines = Vec::new();
    let mut ok = true;
    for (d, convex) in &domains {
        let est = Estimator::new(d.clone(), no_oracles()).map_err(|e| e.to_string())?;
        let mut r = rng(21);
        let mut worst: f64 = 0.0;
        let mut misses = 0;
        for _ in 0..50 {
            let z = point_in(d, &mut r, 2.0, 1e-3);
            let w = point_in(d, &mut r, 2.0, 1e-3);
            let exact = distance(d, &z, &w).unwrap();
            let b = kobayashi_distance(&est, &z, &w).map_err(|e| e.to_string())?;
            if !b.contains(exact, 1e-9 * exact.max(1.0)) {
                misses += 1;
            }
            if *convex {
                worst = worst.max(b.rel_width());
            }
        }
        ok &= misses == 0 && worst <= 0.05;
        lines.push(format!("{} misses {misses} width {worst:.1e}", d.label()));
    }
    within(Duration::from_secs(300), t0)?;
    check(ok, format!("{}, {:.1?}", lines.join(", "), t0.elapsed()))
}

fn royden_case(d: DomainSpec, sub: NeighbourhoodSpec, count: usize) -> Result<(usize, usize, usize), String> {
    let est = Estimator::new(d.clone(), EstimatorConfig::default()).map_err(|e| e.to_string())?;
    let sub = d.intersect(sub);
    let samples = localize::sample_plan(&sub, count, 31).map_err(|e| e.to_string())?;
    let recs = localize::royden_audit(&est, &sub, &samples).map_err(|e| e.to_string())?;
    let count = |s| recs.iter().filter(|r| r.status == s).count();
    Ok((count(AuditStatus::Certified), count(AuditStatus::Consistent), count(AuditStatus::Violation)))
}

/// Royden inequality audit and its sharp case.
fn criterion_3() -> Outcome {
    let half = royden_case(DomainSpec::UnitDisc, NeighbourhoodSpec::ball(Point::from(0.0), 0.5), 100)?;
    let cap = royden_case(DomainSpec::ball(2), NeighbourhoodSpec::ball(Point::real(&[1.0, 0.0]), 0.5), 100)?;
    let est = Estimator::new(DomainSpec::UnitDisc, EstimatorConfig::default()).map_err(|e| e.to_string())?;
    let sub = DomainSpec::UnitDisc.intersect(NeighbourhoodSpec::ball(Point::from(0.0), 0.5));
    let sharp = localize::royden_audit(&est, &sub, &[(Point::from(0.0), Tangent::from(1.0))]).map_err(|e| e.to_string())?;
    let s = &sharp[0];
    let sharp_ok = (s.lhs.upper - 1.0).abs() <= 1e-6 && (s.lhs.lower - 1.0).abs() <= 1e-6 && (s.rhs.lower - 1.0).abs() <= 1e-6;
    check(
        half.2 == 0 && cap.2 == 0 && sharp_ok,
        format!(
            "half-disc certified/consistent/violations {:?}, cap {:?}, sharp lhs [{:.9}, {:.9}] rhs {:.9}",
            half, cap, s.lhs.lower, s.lhs.upper, s.rhs.lower
        ),
    )
}

fn disc_tables() -> Result<(Vec<klab_core::LocalizationRow>, Estimator, NeighbourhoodSpec), String> {
    let est = Estimator::new(DomainSpec::UnitDisc, EstimatorConfig::default()).map_err(|e| e.to_string())?;
    let p = Point::from(1.0);
    let u = NeighbourhoodSpec::ball(p.clone(), 0.5);
    let seq = localize::table_sequence(&est, &p, 10).map_err(|e| e.to_string())?;
    let rows = localize::multiplicative_table(&est, &u, &seq).map_err(|e| e.to_string())?;
    Ok((rows, est, u))
}

/// Multiplicative localization on the disc.
fn criterion_4() -> Outcome {
    let t0 = Instant::now();
    let (rows, est, u) = disc_tables()?;
    let ups: Vec<(usize, f64)> = rows.iter().map(|r| (r.n, r.ratio.map(|b| b.upper).unwrap_or(f64::INFINITY))).collect();
    let tail: Vec<f64> = ups.iter().filter(|(n, _)| (5..=10).contains(n)).map(|x| x.1).collect();
    let monotone = tail.len() == 6 && tail.windows(2).all(|w| w[1] <= w[0]);
    let at8 = ups.iter().find(|(n, _)| *n == 8).map(|x| x.1).unwrap_or(f64::INFINITY);
    let lower_ok = rows.iter().all(|r| r.ratio.map(|b| b.lower >= 1.0 - 1e-6).unwrap_or(false));
    let local = est.for_domain(DomainSpec::UnitDisc.intersect(u)).map_err(|e| e.to_string())?;
    let control = localize::localization_row(&est, &local, 0, 0.0, &Point::scalar(c(0.6, 0.2)), &Point::scalar(c(0.6, -0.2)))
        .map_err(|e| e.to_string())?;
    let control_ratio = control.ratio.map(|b| b.lower).unwrap_or(0.0);
    within(Duration::from_secs(120), t0)?;
    check(
        monotone && at8 <= 1.10 && lower_ok && control_ratio >= 1.05,
        format!("ratio.upper n=5..10 {tail:.6?}, n=8 {at8:.6}, control {control_ratio:.4}"),
    )
}

/// Additive localization on the disc and on the ball.
fn criterion_5() -> Outcome {
    let (rows, _, _) = disc_tables()?;
    let last = rows.last().ok_or("empty table")?;
    let disc_ok = last.n == 10 && last.difference.upper <= 0.05 && localize::difference_converges(&rows, 4, 0.05);
    let est = Estimator::new(DomainSpec::ball(2), EstimatorConfig::default()).map_err(|e| e.to_string())?;
    let p = Point::real(&[1.0, 0.0]);
    let u = NeighbourhoodSpec::ball(p.clone(), 0.5);
    let seq = localize::table_sequence(&est, &p, 10).map_err(|e| e.to_string())?;
    let ball = localize::additive_table(&est, &u, &seq).map_err(|e| e.to_string())?;
    let ball_last = ball.last().ok_or("empty table")?;
    // second ball sequence split along the complex tangent, off the normal line
    let tangent = Tangent(vec![c(0.0, 0.0), c(0.0, 0.25)]);
    let seq = make_sequence(
        est.domain(),
        &p,
        &Schedule::dyadic(10),
        Some(&est.domain().approach_direction(&p).map_err(|e| e.to_string())?),
        Some(&Split::Offsets {
            first: tangent.clone(),
            second: Tangent(tangent.0.iter().map(|x| -x).collect()),
        }),
    )
    .map_err(|e| e.to_string())?;
    let cross = localize::additive_table(&est, &u, &seq).map_err(|e| e.to_string())?;
    let cross_last = cross.last().ok_or("empty table")?;
    let ball_ok = localize::difference_converges(&ball, 4, 0.1) && localize::difference_converges(&cross, 4, 0.1);
    check(
        disc_ok && ball_ok,
        format!(
            "disc difference.upper at n=10 {:.3e}; ball final normal split {:.3e}, complex-tangential split {:.3e}",
            last.difference.upper, ball_last.difference.upper, cross_last.difference.upper
        ),
    )
}

struct Instance {
    name: &'static str,
    domain: DomainSpec,
    p: Point,
    o: Point,
}

fn instances() -> Vec<Instance> {
    vec![
        Instance {
            name: "disc",
            domain: DomainSpec::UnitDisc,
            p: Point::from(1.0),
            o: Point::from(0.0),
        },
        Instance {
            name: "ball2",
            domain: DomainSpec::ball(2),
            p: Point::real(&[1.0, 0.0]),
            o: Point::real(&[0.0, 0.0]),
        },
        Instance {
            name: "polydisc2",
            domain: DomainSpec::polydisc(2),
            p: Point::real(&[1.0, 0.0]),
            o: Point::real(&[0.0, 0.0]),
        },
        Instance {
            name: "punctured-plane",
            domain: DomainSpec::PuncturedPlane,
            p: Point::from(0.0),
            o: Point::from(1.0),
        },
    ]
}

/// Classifier concordance on the disc and the ball, failure on the punctured
/// plane.
fn criterion_6() -> Outcome {
    let plan = ScanPlan::default();
    let mut lines = Vec::new();
    let mut ok = true;
    for inst in instances().into_iter().filter(|i| i.name != "polydisc2") {
        let est = Estimator::new(inst.domain.clone(), EstimatorConfig::default()).map_err(|e| e.to_string())?;
        let u = plan.neighbourhood(&inst.p);
        let results = [
            (ScanKind::KPoint, boundary::k_point_scan(&est, &inst.p, &u, &plan)),
            (ScanKind::WPoint, boundary::w_point_scan(&est, &inst.p, &u, &plan)),
            (ScanKind::VPoint, boundary::v_point_scan(&est, &inst.p, None, &inst.o, &plan)),
            (ScanKind::HyperbolicityAt, boundary::hyperbolicity_at_scan(&est, &inst.p, &plan)),
            (ScanKind::HyperbolicityNear, boundary::hyperbolicity_near_scan(&est, &inst.p, &plan)),
        ];
        let expect_pass = inst.name != "punctured-plane";
        let verdicts: Vec<String> = results
            .iter()
            .map(|(k, r)| match r {
                Ok(r) => format!("{}={}", k.as_str(), r.verdict),
                Err(_) => format!("{}=refused", k.as_str()),
            })
            .collect();
        let all = results.iter().all(|(_, r)| r.as_ref().map(|r| r.passes()).unwrap_or(false));
        let none = results.iter().all(|(_, r)| !r.as_ref().map(|r| r.passes()).unwrap_or(false));
        ok &= if expect_pass { all } else { none };
        lines.push(format!("{}: {}", inst.name, verdicts.join(" ")));
    }
    check(ok, lines.join("; "))
}

/// Weak w-point scan against well-behaved ε-geodesics, and the concatenation
/// bound.
fn criterion_7() -> Outcome {
    let plan = ScanPlan::default();
    let mut lines = Vec::new();
    let mut ok = true;
    for inst in instances() {
        let est = Estimator::new(inst.domain.clone(), EstimatorConfig::default()).map_err(|e| e.to_string())?;
        let a = boundary::weak_w_scan(&est, &inst.p, &inst.o, &plan).map_err(|e| e.to_string())?;
        let b = boundary::well_behaved_scan(&est, &inst.p, &inst.o, &plan).map_err(|e| e.to_string())?;
        let same = a.verdict == b.verdict || a.verdict == Verdict::Inconclusive || b.verdict == Verdict::Inconclusive;
        ok &= same && a.verdict != Verdict::Inconclusive;
        lines.push(format!("{} {}/{}", inst.name, a.verdict, b.verdict));
    }
    let eps = 0.05;
    let mut worst_gap = f64::NEG_INFINITY;
    for inst in instances().into_iter().take(2) {
        let est = Estimator::new(inst.domain.clone(), EstimatorConfig::default()).map_err(|e| e.to_string())?;
        let seq = boundary::approach(&est, &inst.p, &plan, true).map_err(|e| e.to_string())?;
        for i in [2, 5, 8, 11] {
            let (z, w) = (seq.z(i), seq.w(i));
            let sz = find_epsilon_geodesic(&est, z, &inst.o, eps).map_err(|e| e.to_string())?;
            let sw = find_epsilon_geodesic(&est, &inst.o, w, eps).map_err(|e| e.to_string())?;
            let joined = concatenate(&est, &sz, &sw).map_err(|e| e.to_string())?;
            let c = boundary::gromov_product(&est, z, w, &inst.o).map_err(|e| e.to_string())?.value.upper;
            let gap = joined.epsilon - (2.0 * c + 2.0 * eps + 0.01);
            worst_gap = worst_gap.max(gap);
        }
    }
    ok &= worst_gap <= 0.0;
    check(ok, format!("{}; concatenation max(eps' - bound) {worst_gap:.3e}", lines.join(", ")))
}

/// The logarithmic upper estimate on near-boundary pairs.
fn criterion_8() -> Outcome {
    let mut total = 0;
    let mut violations = 0;
    for (d, p) in [(DomainSpec::UnitDisc, Point::from(1.0)), (DomainSpec::ball(2), Point::real(&[1.0, 0.0]))] {
        let est = Estimator::new(d, EstimatorConfig::default()).map_err(|e| e.to_string())?;
        let audit = dini_audit(&est, &p, 500, 0.2).map_err(|e| e.to_string())?;
        total += audit.len();
        violations += audit.iter().filter(|s| s.violated).count();
    }
    check(violations == 0, format!("{violations} violations over {total} pairs"))
}

/// Byte-identical suite outputs across runs and thread counts.
fn criterion_9() -> Outcome {
    let cfg = EstimatorConfig::default();
    let plan = ScanPlan::default();
    let run = || -> Result<Vec<(String, String)>, String> {
        let s = localize::corollary_suite(&cfg, &plan).map_err(|e| e.to_string())?;
        Ok(report::suite_files(&s))
    };
    let a = run()?;
    let b = run()?;
    #[cfg(feature = "parallel")]
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .map_err(|e| e.to_string())?
        .install(run)?;
    #[cfg(not(feature = "parallel"))]
    let single = b.clone();
    let bytes: usize = a.iter().map(|f| f.1.len()).sum();
    check(
        a == b && a == single,
        format!("{} files, {bytes} bytes, identical across 2 runs and a single-thread run", a.len()),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("oracle equivalence (metric)", criterion_1),
        ("oracle equivalence (distance)", criterion_2),
        ("Royden audit", criterion_3),
        ("multiplicative localization", criterion_4),
        ("additive localization", criterion_5),
        ("classifier concordance", criterion_6),
        ("well-behaved geodesics vs weak w-point", criterion_7),
        ("logarithmic upper estimate audit", criterion_8),
        ("determinism", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = f();
        let (tag, msg) = match &r {
            Ok(m) => ("PASS", m.clone()),
            Err(m) => ("FAIL", m.clone()),
        };
        if r.is_err() {
            failed += 1;
        }
        println!("criterion {} [{name}]: {tag} ({msg}) [{:.1?}]", i + 1, t.elapsed());
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 9 acceptance criteria passed");
}
