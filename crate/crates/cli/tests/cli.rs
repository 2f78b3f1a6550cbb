use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn gwsym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gwsym"))
        .args(args)
        .env_remove("GWSYM_CACHE")
        .output()
        .expect("binary runs")
}

fn gwsym_env(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gwsym"))
        .args(args)
        .env("GWSYM_CACHE", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert!(
        o.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn gw_plane_quartics() {
    let v = json(&gwsym(&["gw", "P2", "--d", "4", "--ins", "2x11"]));
    assert_eq!(v["value"], "620");
    assert_eq!(v["engine"], "wdvv");
    assert_eq!(v["vdim_check"]["on_dimension"], true);
    assert_eq!(v["insertions"].as_array().unwrap().len(), 11);
}

#[test]
fn gw_lines_in_p3() {
    assert_eq!(
        json(&gwsym(&["gw", "P3", "--d", "1", "--ins", "2,2,2,2"]))["value"],
        "2"
    );
    let v = json(&gwsym(&[
        "gw", "P3", "--d", "1", "--ins", "2,2,2,2", "--engine", "descend",
    ]));
    assert_eq!(v["value"], "2");
    assert_eq!(v["engine"], "descend");
}

#[test]
fn gw_twisted_cubics_on_the_quintic() {
    let pt = json(&gwsym(&[
        "gw", "CI:6:5", "--d", "3", "--ins", "pt,pt", "--engine", "descend",
    ]));
    assert_eq!(pt["value"], "2088000");
    let h5 = json(&gwsym(&[
        "gw", "CI:6:5", "--d", "3", "--ins", "5,5", "--engine", "descend",
    ]));
    assert_eq!(h5["value"], "52200000");
}

#[test]
fn gw_descendant_and_products() {
    let v = json(&gwsym(&["gw", "P2", "--d", "3", "--ins", "2x5,psi2:2"]));
    assert_eq!(v["value"], "7");
    assert_eq!(v["engine"], "descend");
    let a = json(&gwsym(&[
        "gw",
        "P1xP1",
        "--d",
        "1,2",
        "--ins",
        "(1,1)x4,psi1:(1,0)",
    ]));
    let b = json(&gwsym(&[
        "gw",
        "P1xP1",
        "--d",
        "2,1",
        "--ins",
        "(1,1)x4,psi1:(0,1)",
    ]));
    assert_eq!(a["value"], b["value"]);
}

#[test]
fn tables() {
    assert_eq!(
        stdout(&gwsym(&["table", "nd", "--dmax", "4"])),
        "d,n_d\n1,1\n2,1\n3,12\n4,620\n"
    );
    let ladder = stdout(&gwsym(&["table", "nd_a", "--d", "3"]));
    let values: Vec<&str> = ladder
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap())
        .collect();
    assert_eq!(values, ["12", "10", "7", "3", "1", "1/4", "1/24", "1/216"]);
    assert_eq!(
        stdout(&gwsym(&["table", "jfun", "--target", "P2", "--d", "1"])),
        "t_exponent,monomial,coefficient\n-3,H^0,1\n-4,H^1,-3\n-5,H^2,6\n"
    );
    let rows = json(&gwsym(&["table", "nd", "--dmax", "2", "--format", "json"]));
    assert_eq!(rows[1]["n_d"], "1");
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| gwsym(args).status.code().unwrap();
    assert_eq!(code(&["gw", "P2", "--d", "1", "--ins", "7"]), 2);
    assert_eq!(code(&["gw", "Q2", "--d", "1", "--ins", "2"]), 2);
    assert_eq!(code(&["gw", "P2", "--d", "1", "--ins", "psi1:2,psi1:2"]), 2);
    assert_eq!(code(&["gw", "CI:4:5", "--d", "1", "--ins", "1"]), 3);
    assert_eq!(
        code(&["gw", "P1xP1", "--d", "1,1", "--ins", "(1,1)", "--engine", "wdvv"]),
        3
    );
    assert_eq!(code(&["verify", "bogus"]), 2);
    assert_eq!(code(&["verify", "wdvv", "--dmax", "9"]), 2);
    assert_eq!(code(&["cache", "stats"]), 2);
}

#[test]
fn verify_passes_and_is_worker_independent() {
    let one = gwsym(&["verify", "theorem3", "--target", "P2", "--seed", "7"]);
    assert_eq!(one.status.code(), Some(0));
    let four = gwsym(&[
        "--workers",
        "4",
        "verify",
        "theorem3",
        "--target",
        "P2",
        "--seed",
        "7",
    ]);
    assert_eq!(one.stdout, four.stdout);
    let report: Value = serde_json::from_slice(&one.stdout).unwrap();
    assert_eq!(report["failures"].as_array().unwrap().len(), 0);
    assert_eq!(report["seed"], 7);
    assert_eq!(
        gwsym(&["verify", "cross_engine", "--dmax", "5"])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("store.json");
    let out = dir.path().join("out.json");
    json(&gwsym_env(
        &["gw", "P2", "--d", "3", "--ins", "2x8"],
        &store,
    ));
    json(&gwsym_env(
        &["gw", "P1xP1", "--d", "1,1", "--ins", "(1,1)x3"],
        &store,
    ));
    let before = json(&gwsym_env(&["cache", "stats"], &store));
    assert!(before["entries"].as_u64().unwrap() > 0);
    json(&gwsym_env(
        &["cache", "export", out.to_str().unwrap()],
        &store,
    ));
    std::fs::remove_file(&store).unwrap();
    json(&gwsym_env(
        &["cache", "import", out.to_str().unwrap()],
        &store,
    ));
    assert_eq!(json(&gwsym_env(&["cache", "stats"], &store)), before);
    assert_eq!(std::fs::read(&store).unwrap(), std::fs::read(&out).unwrap());
    let again = json(&gwsym_env(
        &["gw", "P2", "--d", "3", "--ins", "2x8"],
        &store,
    ));
    assert_eq!(again["value"], "12");
}

#[test]
fn cache_flag_beats_environment_and_config() {
    let dir = tempfile::tempdir().unwrap();
    let env_store = dir.path().join("env.json");
    let flag_store = dir.path().join("flag.json");
    let cfg_store = dir.path().join("cfg.json");
    let config = dir.path().join("config.json");
    std::fs::write(
        &config,
        format!(r#"{{"cache_path": {:?}}}"#, cfg_store.to_str().unwrap()),
    )
    .unwrap();
    let cfg = config.to_str().unwrap();
    json(&gwsym_env(
        &[
            "--cache",
            flag_store.to_str().unwrap(),
            "gw",
            "P2",
            "--d",
            "1",
            "--ins",
            "2,2",
        ],
        &env_store,
    ));
    assert!(flag_store.exists() && !env_store.exists());
    json(&gwsym_env(
        &["--config", cfg, "gw", "P2", "--d", "1", "--ins", "2,2"],
        &env_store,
    ));
    assert!(env_store.exists() && !cfg_store.exists());
    json(&gwsym(&[
        "--config", cfg, "gw", "P2", "--d", "1", "--ins", "2,2",
    ]));
    assert!(cfg_store.exists());
}

#[test]
fn cache_errors() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("store.json");
    let missing = dir.path().join("missing.json");
    let code = |args: &[&str]| gwsym_env(args, &store).status.code().unwrap();
    assert_eq!(code(&["cache", "import", missing.to_str().unwrap()]), 5);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"version": 2, "targets": [], "entries": {}}"#).unwrap();
    assert_eq!(code(&["cache", "import", bad.to_str().unwrap()]), 4);
    std::fs::write(
        &bad,
        r#"{"version": 1, "targets": ["P2"], "entries": {"wdvv/P2|3|2;2;2;2;2;2;2;2": "13"}}"#,
    )
    .unwrap();
    json(&gwsym_env(
        &["gw", "P2", "--d", "3", "--ins", "2x8"],
        &store,
    ));
    assert_eq!(code(&["cache", "import", bad.to_str().unwrap()]), 4);
}
