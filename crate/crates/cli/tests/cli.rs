use std::f64::consts::{FRAC_PI_3, PI};
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn opuc(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_opuc"));
    cmd.args(args);
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn run_config(dir: &Path, sub: &str, config: &Value, out: &str) -> Output {
    let cfg = dir.join(format!("{out}.json"));
    fs::write(&cfg, config.to_string()).unwrap();
    let out_dir = dir.join(out);
    opuc(
        &["--config", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap(), sub],
        &[("OPUC_THREADS", "2")],
    )
}

fn summary(dir: &Path, out: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join(out).join("summary.json")).unwrap()).unwrap()
}

fn constant_half(a: f64) -> Value {
    json!({ "orientation": "half-line", "kind": "constant", "value": [a, 0.0] })
}

fn lopez() -> Value {
    json!({ "orientation": "whole-line", "kind": "lopez", "n0": 0, "k": 2, "a": 0.5, "b": 0.5, "t": 0.0, "t0": 0.0 })
}

#[test]
fn sigma_ac_constant_half() {
    let tmp = TempDir::new().unwrap();
    let o = run_config(tmp.path(), "sigma-ac", &json!({ "descriptor": constant_half(0.5), "grid": { "size": 4096 } }), "s");
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let s = summary(tmp.path(), "s");
    let arcs = s["result"]["arcs"].as_array().unwrap();
    assert_eq!(arcs.len(), 1);
    let lo = arcs[0][0].as_f64().unwrap();
    let hi = arcs[0][1].as_f64().unwrap();
    assert!((lo - FRAC_PI_3).abs() < 2e-3 && (hi - 5.0 * FRAC_PI_3).abs() < 2e-3);
    assert_eq!(s["config"]["command"], "sigma-ac");
    assert_eq!(s["config"]["grid"]["size"], 4096);
    let csv = fs::read_to_string(tmp.path().join("s/boundary.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4097);
}

#[test]
fn moments_table_for_lopez() {
    let tmp = TempDir::new().unwrap();
    let cfg = json!({ "descriptor": lopez(), "sites": [0, 1, 2, 3], "ell_max": 4 });
    let o = run_config(tmp.path(), "moments", &cfg, "m");
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(tmp.path().join("m/moments.csv")).unwrap();
    let mut seen = 0;
    for line in csv.lines().skip(1) {
        let f: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        let (ell, re, im) = (f[1] as usize, f[2], f[3]);
        match ell {
            1 | 3 => assert!(re.abs() < 1e-12 && im.abs() < 1e-12),
            2 => assert!((re + 0.25).abs() < 1e-12 && im.abs() < 1e-12),
            _ => {}
        }
        seen += 1;
    }
    assert_eq!(seen, 16);
}

#[test]
fn right_limits_of_sparse() {
    let tmp = TempDir::new().unwrap();
    let cfg = json!({ "descriptor": {
        "orientation": "half-line", "kind": "sparse",
        "support": { "set": "powers", "base": 4 }, "value": [0.5, 0.0]
    }});
    let o = run_config(tmp.path(), "right-limits", &cfg, "r");
    assert_eq!(o.status.code(), Some(0));
    let s = summary(tmp.path(), "r");
    assert_eq!(s["result"]["count"], 2);
    let kinds: Vec<&str> = s["result"]["limits"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l["limit"]["kind"].as_str().unwrap())
        .collect();
    assert_eq!(kinds, ["constant", "finite-support"]);
}

#[test]
fn outputs_are_byte_identical() {
    let tmp = TempDir::new().unwrap();
    let cfg = json!({
        "base": constant_half(0.2),
        "scale": { "law": "constant", "value": 0.3 },
        "distribution": { "law": "discrete", "values": [-1.0, 1.0] },
        "seeds": [1, 2],
        "grid": { "size": 64, "outer_radius": 0.99, "radius_count": 3 }
    });
    assert_eq!(run_config(tmp.path(), "random-experiment", &cfg, "a").status.code(), Some(0));
    let cfg2 = tmp.path().join("b.json");
    fs::write(&cfg2, cfg.to_string()).unwrap();
    let out_b = tmp.path().join("b");
    let o = opuc(
        &["random-experiment", "--config", cfg2.to_str().unwrap(), "--out", out_b.to_str().unwrap()],
        &[("OPUC_THREADS", "1")],
    );
    assert_eq!(o.status.code(), Some(0));
    for f in ["summary.json", "seeds.csv"] {
        let a = fs::read(tmp.path().join("a").join(f)).unwrap();
        let b = fs::read(out_b.join(f)).unwrap();
        assert_eq!(a, b, "{f}");
    }
}

#[test]
fn schema_violations_exit_2() {
    let tmp = TempDir::new().unwrap();
    let o = run_config(tmp.path(), "sigma-ac", &json!({ "descriptor": constant_half(0.5), "bogus": 1 }), "x");
    assert_eq!(o.status.code(), Some(2));

    let o = run_config(tmp.path(), "sigma-ac", &json!({ "command": "moments", "descriptor": constant_half(0.5) }), "y");
    assert_eq!(o.status.code(), Some(2));

    let o = run_config(tmp.path(), "sigma-ac", &json!({ "descriptor": constant_half(1.5) }), "z");
    assert_eq!(o.status.code(), Some(2));

    let o = run_config(tmp.path(), "sigma-ac", &json!({ "descriptor": constant_half(0.5), "grid": { "size": 8 } }), "w");
    assert_eq!(o.status.code(), Some(2));

    let cfg = tmp.path().join("ok.json");
    fs::write(&cfg, json!({ "descriptor": constant_half(0.5), "grid": { "size": 64 } }).to_string()).unwrap();
    let o = opuc(&["sigma-ac", "--config", cfg.to_str().unwrap()], &[("OPUC_THREADS", "zero")]);
    assert_eq!(o.status.code(), Some(2));
    let o = opuc(&["no-such-command", "--config", cfg.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn numeric_failure_exits_3_with_diagnostic() {
    let tmp = TempDir::new().unwrap();
    // the sparse sequence has no rational boundary values
    let cfg = json!({
        "descriptor": { "orientation": "half-line", "kind": "sparse", "support": { "set": "squares" }, "value": [0.5, 0.0] },
        "points": [[1.0, 0.0]]
    });
    let o = run_config(tmp.path(), "schur-eval", &cfg, "e");
    assert_eq!(o.status.code(), Some(3));
    let diag: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(diag["error"], "NonRationalBoundary");
    assert!(tmp.path().join("e/error.json").exists());
}

#[test]
fn every_subcommand_runs() {
    let tmp = TempDir::new().unwrap();
    let jac = json!({ "orientation": "whole-line", "kind": "periodic", "values": [{ "a": 1.0, "b": 0.5 }, { "a": 2.0, "b": 0.5 }] });
    let small = json!({ "size": 128 });
    let cases = [
        ("schur-eval", json!({ "descriptor": constant_half(0.5), "points": [[0.3, 0.2], [1.0, 0.0]], "structured": true })),
        ("sigma-ac", json!({ "descriptor": constant_half(0.3), "grid": small })),
        ("reflectionless", json!({ "descriptor": { "orientation": "whole-line", "kind": "constant", "value": [0.5, 0.0] }, "grid": small })),
        ("classify-khrushchev", json!({ "descriptor": lopez() })),
        ("classify-simon", json!({ "descriptor": jac, "probe": { "start": 0, "len": 4 }, "points": [[0.2, 0.8]] })),
        ("moments", json!({ "jacobi": jac, "sites": [0, 1], "ell_max": 4 })),
        ("ratio", json!({ "descriptor": { "orientation": "half-line", "kind": "constant", "value": [0.0, 0.0] }, "points": [[0.5, 0.0]], "n_max": 64 })),
        ("pearson-defect", json!({ "descriptor": constant_half(0.5), "n": [8], "a": [[1.2, 5.0]], "s": [[0.0, PI]], "grid": { "size": 256 } })),
        ("right-limits", json!({ "descriptor": constant_half(0.5) })),
        ("sparse-check", json!({ "descriptor": { "orientation": "half-line", "kind": "sparse", "support": { "set": "powers", "base": 4 }, "value": [0.5, 0.0] }, "config": { "kmax": 8, "n": 4096 } })),
        ("random-experiment", json!({ "base": constant_half(0.5), "scale": { "law": "constant", "value": 0.0 }, "distribution": { "law": "uniform", "lo": -1.0, "hi": 1.0 }, "seeds": [3], "grid": small })),
    ];
    for (i, (sub, cfg)) in cases.iter().enumerate() {
        let name = format!("c{i}");
        let o = run_config(tmp.path(), sub, cfg, &name);
        assert_eq!(o.status.code(), Some(0), "{sub}: {}", String::from_utf8_lossy(&o.stderr));
        let s = summary(tmp.path(), &name);
        assert_eq!(s["command"], *sub);
        assert_eq!(s["config"]["command"], *sub);
    }
    let s = summary(tmp.path(), "c4");
    assert_eq!(s["result"]["class_label"], "S(5, 0.5)");
    let s = summary(tmp.path(), "c3");
    assert_eq!(s["result"]["class"], "k");
    let s = summary(tmp.path(), "c9");
    assert_eq!(s["result"]["verdict"], "singular-indicated");
}
