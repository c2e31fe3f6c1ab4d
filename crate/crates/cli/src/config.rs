//! Run configuration: a JSON document (optionally from `--config`) with
//! command-line overrides merged in, validated against
//! `docs/config.schema.json` before anything is computed.

use std::path::PathBuf;
use std::sync::OnceLock;

use klab_core::{DomainSpec, EstimatorConfig, NeighbourhoodSpec, Point, ScanPlan, Tangent, C64};
use serde::Deserialize;
use serde_json::{Map, Value};

pub const SCHEMA: &str = include_str!("../../../docs/config.schema.json");
pub const DEFAULT_SEED: u64 = 0xC0B1;

#[derive(Debug)]
pub struct SchemaError(pub String);

impl std::fmt::Display for SchemaError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn validator() -> &'static jsonschema::Validator {
    static V: OnceLock<jsonschema::Validator> = OnceLock::new();
    V.get_or_init(|| {
        let schema: Value = serde_json::from_str(SCHEMA).expect("shipped schema is valid JSON");
        jsonschema::validator_for(&schema).expect("shipped schema compiles")
    })
}

/// Checks a raw configuration document against the shipped schema.
pub fn validate(doc: &Value) -> Result<(), SchemaError> {
    let errors: Vec<String> = validator()
        .iter_errors(doc)
        .map(|e| format!("{}: {}", e.instance_path(), e))
        .collect();
    if errors.is_empty() {
        Ok(())
    } else {
        Err(SchemaError(errors.join("; ")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Svg,
}

impl Format {
    pub fn of_file(name: &str) -> Option<Format> {
        match name.rsplit('.').next()? {
            "json" => Some(Format::Json),
            "csv" => Some(Format::Csv),
            "svg" => Some(Format::Svg),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum DomainField {
    Short(String),
    Full(DomainSpec),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum SubField {
    Short(String),
    Full(NeighbourhoodSpec),
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    domain: Option<DomainField>,
    point: Option<Point>,
    q: Option<Point>,
    o: Option<Point>,
    z: Option<Point>,
    w: Option<Point>,
    v: Option<Point>,
    neighbourhood: Option<NeighbourhoodSpec>,
    sub: Option<SubField>,
    #[serde(default)]
    schedule: ScanPlan,
    #[serde(default)]
    estimator: Option<EstimatorConfig>,
    scan: Option<String>,
    table: Option<String>,
    samples: Option<usize>,
    epsilon: Option<f64>,
    output: Option<PathBuf>,
    seed: Option<u64>,
    formats: Option<Vec<Format>>,
    #[serde(default)]
    require_certain: bool,
}

/// How the Royden subdomain was specified.
#[derive(Clone, Debug, PartialEq)]
pub enum Sub {
    HalfDisc,
    Cap,
    Neighbourhood(NeighbourhoodSpec),
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    domain: Option<DomainSpec>,
    pub point: Option<Point>,
    pub q: Option<Point>,
    pub o: Option<Point>,
    pub z: Option<Point>,
    pub w: Option<Point>,
    pub v: Option<Tangent>,
    pub neighbourhood: Option<NeighbourhoodSpec>,
    pub sub: Option<Sub>,
    pub schedule: ScanPlan,
    pub estimator: EstimatorConfig,
    pub scan: String,
    pub table: String,
    pub samples: usize,
    pub epsilon: f64,
    pub output: PathBuf,
    pub seed: u64,
    pub formats: Vec<Format>,
    pub require_certain: bool,
}

impl RunConfig {
    /// Validates `doc` and builds the typed configuration. `seed` overrides
    /// the estimator seed.
    pub fn from_value(doc: &Value) -> Result<RunConfig, SchemaError> {
        validate(doc)?;
        let raw: RawConfig = serde_json::from_value(doc.clone()).map_err(|e| SchemaError(e.to_string()))?;
        let domain = match raw.domain {
            None => None,
            Some(DomainField::Full(d)) => Some(d),
            Some(DomainField::Short(s)) => Some(shorthand(&s)?),
        };
        if let Some(d) = &domain {
            d.validate().map_err(|e| SchemaError(e.to_string()))?;
        }
        let seed = raw.seed.unwrap_or(DEFAULT_SEED);
        let mut estimator = raw.estimator.unwrap_or_default();
        estimator.seed = seed;
        estimator.validate().map_err(|e| SchemaError(e.to_string()))?;
        raw.schedule.validate().map_err(|e| SchemaError(e.to_string()))?;
        let sub = raw.sub.map(|s| match s {
            SubField::Short(s) if s == "half-disc" => Sub::HalfDisc,
            SubField::Short(_) => Sub::Cap,
            SubField::Full(n) => Sub::Neighbourhood(n),
        });
        let cfg = RunConfig {
            domain,
            point: raw.point,
            q: raw.q,
            o: raw.o,
            z: raw.z,
            w: raw.w,
            v: raw.v.map(|p| Tangent(p.0)),
            neighbourhood: raw.neighbourhood,
            sub,
            schedule: raw.schedule,
            estimator,
            scan: raw.scan.unwrap_or_else(|| "all".into()),
            table: raw.table.unwrap_or_else(|| "both".into()),
            samples: raw.samples.unwrap_or(100),
            epsilon: raw.epsilon.unwrap_or(0.05),
            output: raw.output.unwrap_or_else(|| PathBuf::from("klab-out")),
            seed,
            formats: raw.formats.unwrap_or_else(|| vec![Format::Json, Format::Csv, Format::Svg]),
            require_certain: raw.require_certain,
        };
        cfg.check_dimensions()?;
        Ok(cfg)
    }

    pub fn domain(&self) -> Result<&DomainSpec, SchemaError> {
        self.domain
            .as_ref()
            .ok_or_else(|| SchemaError("this command needs a domain (--domain)".into()))
    }

    fn check_dimensions(&self) -> Result<(), SchemaError> {
        let Some(domain) = &self.domain else {
            return Ok(());
        };
        let n = domain.dimension();
        let named = [
            ("point", self.point.as_ref().map(|p| p.dim())),
            ("q", self.q.as_ref().map(|p| p.dim())),
            ("o", self.o.as_ref().map(|p| p.dim())),
            ("z", self.z.as_ref().map(|p| p.dim())),
            ("w", self.w.as_ref().map(|p| p.dim())),
            ("v", self.v.as_ref().map(|p| p.dim())),
            ("neighbourhood", self.neighbourhood.as_ref().map(|u| u.dim())),
        ];
        for (name, dim) in named {
            if let Some(d) = dim {
                if d != n {
                    return Err(SchemaError(format!("{name} has {d} coordinates, the domain has {n}")));
                }
            }
        }
        Ok(())
    }

    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }

    /// The boundary point, defaulting to `(1, 0, …, 0)` when that is one.
    pub fn boundary_point(&self) -> Result<Point, SchemaError> {
        if let Some(p) = &self.point {
            return Ok(p.clone());
        }
        let domain = self.domain()?;
        let mut e = vec![C64::new(0.0, 0.0); domain.dimension()];
        e[0] = C64::new(1.0, 0.0);
        if domain.defining(&e).abs() <= 1e-10 {
            Ok(Point(e))
        } else {
            Err(SchemaError("this command needs a boundary point (--point)".into()))
        }
    }

    pub fn base_point(&self) -> Result<Point, SchemaError> {
        match &self.o {
            Some(o) => Ok(o.clone()),
            None => Ok(self.domain()?.base_point()),
        }
    }
}

/// `disc`, `ball2`, `polydisc3`, `half-plane`, `lens`, `punctured-plane`,
/// `ellipsoid:1,2`.
pub fn shorthand(s: &str) -> Result<DomainSpec, SchemaError> {
    let bad = || SchemaError(format!("unknown domain shorthand `{s}`"));
    Ok(match s {
        "disc" => DomainSpec::UnitDisc,
        "half-plane" => DomainSpec::HalfPlane,
        "lens" => DomainSpec::Lens,
        "punctured-plane" => DomainSpec::PuncturedPlane,
        _ => {
            if let Some(axes) = s.strip_prefix("ellipsoid:") {
                let semi_axes = axes
                    .split(',')
                    .map(|a| a.parse::<f64>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>, _>>()?;
                DomainSpec::Ellipsoid { semi_axes }
            } else if let Some(n) = s.strip_prefix("polydisc") {
                DomainSpec::polydisc(n.parse().map_err(|_| bad())?)
            } else if let Some(n) = s.strip_prefix("ball") {
                DomainSpec::ball(n.parse().map_err(|_| bad())?)
            } else {
                return Err(bad());
            }
        }
    })
}

/// Parses `0.3,0` or `1+0.5i,-2i` into JSON `[[re, im], …]`.
pub fn parse_point(s: &str) -> Result<Value, SchemaError> {
    let coords = s
        .split(',')
        .map(|c| {
            c.trim()
                .parse::<C64>()
                .map_err(|_| SchemaError(format!("cannot parse `{c}` as a complex number")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Value::Array(
        coords.iter().map(|z| serde_json::json!([z.re, z.im])).collect(),
    ))
}

/// Reads the config file (if any) and applies overrides on top.
pub fn merge(base: Option<Value>, overrides: Map<String, Value>) -> Result<Value, SchemaError> {
    let mut doc = match base {
        None => Map::new(),
        Some(Value::Object(m)) => m,
        Some(_) => return Err(SchemaError("the configuration must be a JSON object".into())),
    };
    for (k, v) in overrides {
        match (doc.get_mut(&k), v) {
            (Some(Value::Object(old)), Value::Object(new)) if k == "estimator" || k == "schedule" => {
                old.extend(new);
            }
            (_, v) => {
                doc.insert(k, v);
            }
        }
    }
    Ok(Value::Object(doc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn shipped_schema_accepts_defaults_and_rejects_typos() {
        assert!(validate(&json!({"domain": "disc"})).is_ok());
        assert!(validate(&json!({"domain": "disk"})).is_err());
        assert!(validate(&json!({"domain": "disc", "estimator": {"degre": 3}})).is_err());
        assert!(validate(&json!({"domain": {"kind": "euclidean-ball", "params": {"dim": 2}}})).is_ok());
        assert!(validate(&json!({"domain": "disc", "point": [[1.0, 0.0, 3.0]]})).is_err());
    }

    #[test]
    fn shorthands_expand() {
        assert_eq!(shorthand("ball2").unwrap(), DomainSpec::ball(2));
        assert_eq!(shorthand("polydisc3").unwrap(), DomainSpec::polydisc(3));
        assert_eq!(
            shorthand("ellipsoid:1,2").unwrap(),
            DomainSpec::Ellipsoid {
                semi_axes: vec![1.0, 2.0]
            }
        );
        assert!(shorthand("torus").is_err());
    }

    #[test]
    fn points_parse_as_complex_coordinates() {
        assert_eq!(parse_point("0.3,0").unwrap(), json!([[0.3, 0.0], [0.0, 0.0]]));
        assert_eq!(parse_point("1+0.5i").unwrap(), json!([[1.0, 0.5]]));
        assert!(parse_point("x").is_err());
    }

    #[test]
    fn seed_defaults_and_overrides_reach_the_estimator() {
        let c = RunConfig::from_value(&json!({"domain": "disc"})).unwrap();
        assert_eq!(c.seed, DEFAULT_SEED);
        assert_eq!(c.estimator.seed, DEFAULT_SEED);
        let c = RunConfig::from_value(&json!({"domain": "disc", "seed": 7})).unwrap();
        assert_eq!(c.estimator.seed, 7);
    }

    #[test]
    fn dimension_mismatch_is_a_schema_error() {
        assert!(RunConfig::from_value(&json!({"domain": "ball2", "z": [[0.1, 0.0]]})).is_err());
    }

    #[test]
    fn overrides_merge_into_nested_objects() {
        let base = json!({"domain": "disc", "estimator": {"degree": 6}});
        let mut o = Map::new();
        o.insert("estimator".into(), json!({"oracles": false}));
        let m = merge(Some(base), o).unwrap();
        assert_eq!(m["estimator"], json!({"degree": 6, "oracles": false}));
    }
}
