use std::fs;
use std::str::FromStr;

use klab_core::boundary::{self, ScanKind, Verdict};
use klab_core::localize::{self, AuditStatus, LocalizationRow, ScanOutcome, AUDIT_TOL};
use klab_core::report::{self, Series};
use klab_core::{find_epsilon_geodesic, kobayashi_distance, Bracket, DomainSpec, Error, Estimator, NeighbourhoodSpec, Point, C64};
use serde_json::json;

use crate::config::{Format, RunConfig, SchemaError, Sub};

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Schema = 1,
    Violation = 2,
    Inconclusive = 3,
    Failure = 4,
}

#[derive(Debug)]
pub struct Failure {
    pub exit: Exit,
    pub message: String,
}

impl From<SchemaError> for Failure {
    fn from(e: SchemaError) -> Self {
        Failure {
            exit: Exit::Schema,
            message: e.0,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        // bad inputs surface as configuration errors, the rest as failures
        let exit = match e {
            Error::DimensionMismatch { .. }
            | Error::OutsideDomain
            | Error::InvalidDomain(_)
            | Error::NotOnBoundary(_)
            | Error::NonSmoothBoundary(_)
            | Error::InvalidInput(_) => Exit::Schema,
            _ => Exit::Failure,
        };
        Failure {
            exit,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            exit: Exit::Failure,
            message: e.to_string(),
        }
    }
}

pub struct Outcome {
    pub exit: Exit,
    pub summary: String,
    pub files: Vec<(String, String)>,
}

type CmdResult = Result<Outcome, Failure>;

fn need<'a, T>(x: &'a Option<T>, flag: &str) -> Result<&'a T, Failure> {
    x.as_ref().ok_or_else(|| Failure {
        exit: Exit::Schema,
        message: format!("this command needs --{flag}"),
    })
}

fn estimator(cfg: &RunConfig) -> Result<Estimator, Failure> {
    Ok(Estimator::new(cfg.domain()?.clone(), cfg.estimator.clone())?)
}

/// Compact coordinates for summary lines; files keep full precision.
fn pt(p: &[C64]) -> String {
    let short = |x: f64| {
        let s = format!("{x:.6}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        if s == "-0" { "0".to_string() } else { s.to_string() }
    };
    let c: Vec<String> = p
        .iter()
        .map(|z| match (z.re, z.im) {
            (re, im) if im == 0.0 => short(re),
            (re, im) if re == 0.0 => format!("{}i", short(im)),
            (re, im) => format!("{}{}{}i", short(re), if im < 0.0 { "-" } else { "+" }, short(im.abs())),
        })
        .collect();
    format!("({})", c.join(", "))
}

fn bracket(b: &Bracket) -> String {
    format!(
        "[{}, {}] ({} / {})",
        report::num(b.lower),
        report::num(b.upper),
        b.method_lower.as_str(),
        b.method_upper.as_str()
    )
}

fn bracket_csv(rows: &[(&str, &Bracket)]) -> String {
    let mut s = String::from("quantity,lower,upper,method_lower,method_upper\n");
    for (name, b) in rows {
        s += &format!(
            "{name},{},{},{},{}\n",
            report::num(b.lower),
            report::num(b.upper),
            b.method_lower.as_str(),
            b.method_upper.as_str()
        );
    }
    s
}

/// Writes the files whose format was requested; returns how many were written.
pub fn write_files(cfg: &RunConfig, files: &[(String, String)]) -> Result<usize, Failure> {
    fs::create_dir_all(&cfg.output)?;
    let mut written = 0;
    for (name, body) in files {
        if Format::of_file(name).is_some_and(|f| cfg.wants(f)) {
            fs::write(cfg.output.join(name), body)?;
            written += 1;
        }
    }
    Ok(written)
}

pub fn cmd_metric(cfg: &RunConfig) -> CmdResult {
    let est = estimator(cfg)?;
    let z = need(&cfg.z, "z")?;
    let v = need(&cfg.v, "v")?;
    let b = est.kr_metric(z, v)?;
    let doc = json!({ "domain": est.domain(), "z": z, "v": v, "kappa": b });
    Ok(Outcome {
        exit: Exit::Ok,
        summary: format!("metric {} z={} v={}: kappa {}", est.domain().label(), pt(z), pt(v), bracket(&b)),
        files: vec![
            ("metric.json".into(), report::json(&doc)),
            ("metric.csv".into(), bracket_csv(&[("kappa", &b)])),
        ],
    })
}

pub fn cmd_distance(cfg: &RunConfig) -> CmdResult {
    let est = estimator(cfg)?;
    let z = need(&cfg.z, "z")?;
    let w = need(&cfg.w, "w")?;
    let k = kobayashi_distance(&est, z, w)?;
    let l = est.lempert(z, w)?;
    let doc = json!({ "domain": est.domain(), "z": z, "w": w, "distance": k, "lempert": l });
    // the distance never exceeds the Lempert function
    let exit = if k.lower > l.upper + AUDIT_TOL { Exit::Violation } else { Exit::Ok };
    Ok(Outcome {
        exit,
        summary: format!(
            "distance {} z={} w={}: k {}, l {}",
            est.domain().label(),
            pt(z),
            pt(w),
            bracket(&k),
            bracket(&l)
        ),
        files: vec![
            ("distance.json".into(), report::json(&doc)),
            ("distance.csv".into(), bracket_csv(&[("distance", &k), ("lempert", &l)])),
        ],
    })
}

pub fn cmd_geodesic(cfg: &RunConfig) -> CmdResult {
    let est = estimator(cfg)?;
    let z = need(&cfg.z, "z")?;
    let w = need(&cfg.w, "w")?;
    let cert = find_epsilon_geodesic(&est, z, w, cfg.epsilon)?;
    let n = z.dim();
    let mut csv = String::from("i,t");
    for j in 0..n {
        csv += &format!(",re{j},im{j}");
    }
    csv.push('\n');
    for (i, (x, t)) in cert.path.nodes.iter().zip(&cert.path.params).enumerate() {
        csv += &format!("{i},{}", report::num(*t));
        for c in x.iter() {
            csv += &format!(",{},{}", report::num(c.re), report::num(c.im));
        }
        csv.push('\n');
    }
    let series: Vec<Series> = (0..n)
        .map(|j| Series::new(&format!("z{j}"), cert.path.nodes.iter().map(|x| (x[j].re, x[j].im)).collect()))
        .collect();
    let svg = report::svg_plot("epsilon-geodesic", "Re", "Im", &series, false);
    Ok(Outcome {
        exit: if cert.holds(cfg.epsilon) { Exit::Ok } else { Exit::Violation },
        summary: format!(
            "geodesic {} z={} w={}: length {} <= k.upper {} + {} ({} nodes)",
            est.domain().label(),
            pt(z),
            pt(w),
            report::num(cert.length),
            report::num(cert.distance_upper),
            report::num(cert.epsilon),
            cert.path.len()
        ),
        files: vec![
            ("geodesic.json".into(), report::json(&cert)),
            ("geodesic.csv".into(), csv),
            ("geodesic.svg".into(), svg),
        ],
    })
}

fn neighbourhood(cfg: &RunConfig, p: &Point) -> NeighbourhoodSpec {
    cfg.neighbourhood.clone().unwrap_or_else(|| cfg.schedule.neighbourhood(p))
}

pub fn cmd_classify(cfg: &RunConfig) -> CmdResult {
    let est = estimator(cfg)?;
    let p = cfg.boundary_point()?;
    let u = neighbourhood(cfg, &p);
    let o = cfg.base_point()?;
    let kinds: Vec<ScanKind> = if cfg.scan == "all" {
        ScanKind::ALL.to_vec()
    } else {
        vec![ScanKind::from_str(&cfg.scan)?]
    };
    let single = kinds.len() == 1;
    let mut outcomes = Vec::new();
    for kind in kinds {
        let r = boundary::run_scan(&est, kind, &p, &u, cfg.q.as_ref(), &o, &cfg.schedule);
        if single {
            if let Err(e) = r {
                return Err(e.into());
            }
        }
        outcomes.push(ScanOutcome::new(kind, r));
    }
    let mut files = vec![("classify.json".into(), report::json(&outcomes))];
    for s in &outcomes {
        if let Some(r) = &s.report {
            files.push((format!("{}.csv", s.kind.as_str()), report::scan_csv(r)));
            files.push((
                format!("{}.svg", s.kind.as_str()),
                report::scan_svg(&format!("{} scan, {}", s.kind.as_str(), est.domain().label()), r),
            ));
        }
    }
    let uncertain = outcomes
        .iter()
        .any(|s| s.verdict.is_none_or(|v| v == Verdict::Inconclusive));
    let verdicts: Vec<String> = outcomes
        .iter()
        .map(|s| match s.verdict {
            Some(v) => format!("{}={}{}", s.kind.as_str(), v, if s.passed { "" } else { "(fail)" }),
            None => format!("{}=refused", s.kind.as_str()),
        })
        .collect();
    Ok(Outcome {
        exit: if uncertain && cfg.require_certain { Exit::Inconclusive } else { Exit::Ok },
        summary: format!("classify {} p={}: {}", est.domain().label(), pt(&p), verdicts.join(" ")),
        files,
    })
}

/// Rows where `k_{Ω∩U} < k_Ω` is certified, which inclusion forbids.
fn inclusion_violations(rows: &[LocalizationRow]) -> usize {
    rows.iter()
        .filter(|r| r.k_intersection.upper < r.k_omega.lower - AUDIT_TOL)
        .count()
}

pub fn cmd_localize(cfg: &RunConfig) -> CmdResult {
    let est = estimator(cfg)?;
    let p = cfg.boundary_point()?;
    let u = neighbourhood(cfg, &p);
    let seq = localize::table_sequence(&est, &p, cfg.schedule.steps)?;
    let want_mult = cfg.table != "additive";
    let want_add = cfg.table != "multiplicative";
    let rows = if want_mult {
        localize::multiplicative_table(&est, &u, &seq)?
    } else {
        localize::additive_table(&est, &u, &seq)?
    };
    let ratio_ok = localize::ratio_converges(&rows, 4, 1.10);
    let diff_ok = localize::difference_converges(&rows, 4, 0.1);
    let doc = json!({
        "domain": est.domain(),
        "point": p,
        "neighbourhood": u,
        "rows": rows,
        "ratio_converges": want_mult.then_some(ratio_ok),
        "difference_converges": want_add.then_some(diff_ok),
    });
    let mut files = vec![("localize.json".into(), report::json(&doc))];
    let label = est.domain().label();
    if want_mult {
        files.push(("multiplicative.csv".into(), report::localization_csv(&rows)));
        files.push(("multiplicative.svg".into(), report::localization_svg(&format!("{label}: ratio"), &rows, true)));
    }
    if want_add {
        files.push(("additive.csv".into(), report::localization_csv(&rows)));
        files.push(("additive.svg".into(), report::localization_svg(&format!("{label}: difference"), &rows, false)));
    }
    let flagged = rows.iter().filter(|r| r.flagged).count();
    let bad = inclusion_violations(&rows);
    let last = rows.last();
    let mut parts = vec![format!("{} rows", rows.len())];
    if let Some(r) = last {
        if want_mult {
            parts.push(match r.ratio {
                Some(b) => format!("final ratio.upper {}", report::num(b.upper)),
                None => "final ratio refused".into(),
            });
            parts.push(format!("ratio converges: {ratio_ok}"));
        }
        if want_add {
            parts.push(format!("final difference.upper {}", report::num(r.difference.upper)));
            parts.push(format!("difference converges: {diff_ok}"));
        }
    }
    if flagged > 0 {
        parts.push(format!("{flagged} rows flagged"));
    }
    let exit = if bad > 0 {
        parts.push(format!("{bad} inclusion violations"));
        Exit::Violation
    } else if flagged > 0 && cfg.require_certain {
        Exit::Inconclusive
    } else {
        Exit::Ok
    };
    Ok(Outcome {
        exit,
        summary: format!("localize {label} p={}: {}", pt(&p), parts.join(", ")),
        files,
    })
}

fn royden_sub(cfg: &RunConfig) -> Result<DomainSpec, Failure> {
    let domain = cfg.domain()?;
    let n = domain.dimension();
    let u = match cfg.sub.as_ref().unwrap_or(&Sub::HalfDisc) {
        Sub::HalfDisc => NeighbourhoodSpec::ball(cfg.base_point()?, 0.5),
        Sub::Cap => NeighbourhoodSpec::ball(cfg.boundary_point()?, 0.5),
        Sub::Neighbourhood(u) => u.clone(),
    };
    if u.dim() != n {
        return Err(SchemaError(format!("the subdomain lives in dimension {}, the domain in {n}", u.dim())).into());
    }
    u.validate()?;
    Ok(domain.clone().intersect(u))
}

pub fn cmd_royden(cfg: &RunConfig) -> CmdResult {
    let est = estimator(cfg)?;
    let sub = royden_sub(cfg)?;
    let samples = localize::sample_plan(&sub, cfg.samples, cfg.seed)?;
    let recs = localize::royden_audit(&est, &sub, &samples)?;
    let count = |s| recs.iter().filter(|r| r.status == s).count();
    let (certified, consistent, violations) = (
        count(AuditStatus::Certified),
        count(AuditStatus::Consistent),
        count(AuditStatus::Violation),
    );
    let doc = json!({ "domain": est.domain(), "subdomain": sub, "records": recs });
    Ok(Outcome {
        exit: if violations > 0 { Exit::Violation } else { Exit::Ok },
        summary: format!(
            "royden {} in {}: {} samples, {certified} certified, {consistent} consistent, {violations} violations",
            sub.label(),
            est.domain().label(),
            recs.len()
        ),
        files: vec![
            ("royden.json".into(), report::json(&doc)),
            ("royden.csv".into(), report::audit_csv(&recs)),
        ],
    })
}

pub fn cmd_report(cfg: &RunConfig) -> CmdResult {
    let suite = localize::corollary_suite(&cfg.estimator, &cfg.schedule)?;
    let parts: Vec<String> = suite
        .instances
        .iter()
        .map(|i| format!("{}={}", i.name, if i.all_passed { "pass" } else { "fail" }))
        .collect();
    Ok(Outcome {
        exit: Exit::Ok,
        summary: format!("report: {}", parts.join(" ")),
        files: report::suite_files(&suite),
    })
}
