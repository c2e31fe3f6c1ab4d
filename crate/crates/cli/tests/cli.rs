use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn klab(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_klab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("KLAB_THREADS")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn classify_wpoint_on_the_disc_diverges() {
    let dir = tempfile::tempdir().unwrap();
    let o = klab(&["classify", "--domain", "disc", "--point", "1", "--scan", "wpoint"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("wpoint=diverging"), "{}", stdout(&o));
    let csv = std::fs::read_to_string(dir.path().join("wpoint.csv")).unwrap();
    assert!(csv.starts_with("n,t_n,lower,upper\n"));
    assert_eq!(csv.lines().count(), 13);
    let report = read_json(&dir.path().join("classify.json"));
    assert_eq!(report[0]["verdict"], "diverging");
}

#[test]
fn royden_half_disc_audit_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = klab(&["royden", "--domain", "disc", "--sub", "half-disc"], dir.path());
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("0 violations"), "{}", stdout(&o));
    let csv = std::fs::read_to_string(dir.path().join("royden.csv")).unwrap();
    assert_eq!(csv.lines().count(), 101);
}

#[test]
fn ball_distance_brackets_the_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let o = klab(
        &["distance", "--domain", "ball2", "--z", "0.3,0", "--w", "0.6,0", "--no-oracles"],
        dir.path(),
    );
    assert_eq!(code(&o), 0);
    let doc = read_json(&dir.path().join("distance.json"));
    let exact = ((0.6f64 - 0.3) / (1.0 - 0.18)).atanh();
    let (lo, up) = (doc["distance"]["lower"].as_f64().unwrap(), doc["distance"]["upper"].as_f64().unwrap());
    assert!(lo <= exact + 1e-12 && exact <= up + 1e-12, "[{lo}, {up}] vs {exact}");
    assert_ne!(doc["distance"]["method_lower"], "oracle");
}

#[test]
fn metric_and_geodesic_write_their_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = klab(&["metric", "--domain", "polydisc2", "--z", "0.5,0.1", "--v", "1,1"], dir.path());
    assert_eq!(code(&o), 0);
    let doc = read_json(&dir.path().join("metric.json"));
    assert!((doc["kappa"]["upper"].as_f64().unwrap() - 4.0 / 3.0).abs() < 1e-9);

    let o = klab(&["geodesic", "--domain", "lens", "--z", "0.7+0.1i", "--w", "0.9-0.2i"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["geodesic.json", "geodesic.csv", "geodesic.svg"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let svg = std::fs::read_to_string(dir.path().join("geodesic.svg")).unwrap();
    assert!(svg.starts_with("<svg") && !svg.contains("href"));
}

#[test]
fn formats_filter_the_output() {
    let dir = tempfile::tempdir().unwrap();
    let o = klab(&["localize", "--domain", "disc", "--point", "1", "--format", "csv"], dir.path());
    assert_eq!(code(&o), 0);
    let names: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    assert!(!names.is_empty() && names.iter().all(|n| n.ends_with(".csv")), "{names:?}");
}

#[test]
fn schema_violations_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&klab(&["distance", "--domain", "disk", "--z", "0", "--w", "0.5"], dir.path())), 1);
    assert_eq!(code(&klab(&["distance", "--domain", "disc", "--z", "2", "--w", "0.5"], dir.path())), 1);
    assert_eq!(code(&klab(&["distance", "--domain", "ball2", "--z", "0", "--w", "0.5,0"], dir.path())), 1);
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"domain": "disc", "estimator": {"degre": 4}}"#).unwrap();
    let o = klab(&["distance", "--config", cfg.to_str().unwrap(), "--z", "0", "--w", "0.5"], dir.path());
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("degre"));
}

#[test]
fn config_file_and_flags_merge() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"domain": {"kind": "euclidean-ball", "params": {"dim": 2}}, "z": [[0.3, 0.0], [0.0, 0.0]], "w": [[0.0, 0.0], [0.0, 0.0]]}"#,
    )
    .unwrap();
    let o = klab(&["distance", "--config", cfg.to_str().unwrap(), "--w", "0.6,0"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let doc = read_json(&dir.path().join("distance.json"));
    assert_eq!(doc["w"][0][0], 0.6);
}

#[test]
fn inconclusive_verdicts_exit_with_three_on_request() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["classify", "--domain", "punctured-plane", "--point", "0"];
    assert_eq!(code(&klab(&args, dir.path())), 0);
    let mut strict = args.to_vec();
    strict.push("--require-certain");
    assert_eq!(code(&klab(&strict, dir.path())), 3);
}

#[test]
fn thread_count_does_not_change_the_report() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let run = |dir: &Path, threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_klab"))
            .args(["report", "--out"])
            .arg(dir)
            .env("KLAB_THREADS", threads)
            .output()
            .unwrap()
    };
    assert_eq!(code(&run(a.path(), "1")), 0);
    assert_eq!(code(&run(b.path(), "4")), 0);
    let mut names: Vec<_> = std::fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 30);
    for n in names {
        let x = std::fs::read(a.path().join(&n)).unwrap();
        let y = std::fs::read(b.path().join(&n)).unwrap();
        assert!(x == y, "{n:?} differs");
    }
    assert_eq!(code(&run(a.path(), "0")), 1);
}
