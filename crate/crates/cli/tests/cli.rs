use std::process::{Command, Output};

fn ionload(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ionload"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn rate_defaults() {
    let o = ionload(&["rate"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("rate:       5.2234"), "{s}");
    assert!(s.contains("volume_stubby"));
}

#[test]
fn rate_flags_and_json() {
    let o = ionload(&["rate", "--energy", "6 pJ", "--length", "200 um", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rate = v["result"]["rate"].as_f64().unwrap();
    // Rate scales as E² and L: 52.23 / 100 * 2.
    assert!((rate - 1.0447).abs() < 1e-3, "{rate}");
    assert_eq!(v["result"]["warnings"].as_array().unwrap().len(), 0);
}

#[test]
fn config_file_with_override() {
    let dir = std::env::temp_dir().join(format!("ionload-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("point.cfg");
    std::fs::write(&cfg, "# point\nlaser.energy = 30 pJ\nvapor.density = 3e5 cm-3\n").unwrap();
    let path = cfg.to_str().unwrap();
    let base = stdout(&ionload(&["rate", "--config", path, "--format", "csv"]));
    let over = stdout(&ionload(&[
        "rate",
        "--config",
        path,
        "--set",
        "laser.energy=60 pJ",
        "--format",
        "csv",
    ]));
    let rate = |s: &str| {
        s.lines()
            .nth(1)
            .unwrap()
            .split(',')
            .nth(3)
            .unwrap()
            .parse::<f64>()
            .unwrap()
    };
    assert!((rate(&over) / rate(&base) - 4.0).abs() < 1e-9);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn scan_writes_csv_and_report() {
    let dir = std::env::temp_dir().join(format!("ionload-scan-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("scan.cfg");
    std::fs::write(
        &cfg,
        "scan.axis = waist\nscan.min = 10 um\nscan.max = 40 um\nscan.points = 4\n",
    )
    .unwrap();
    let out = dir.join("out.csv");
    let o = ionload(&[
        "scan",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("cadmium reference"));
    let table = std::fs::read_to_string(&out).unwrap();
    assert_eq!(table.lines().count(), 5);
    assert!(table.starts_with("waist_um,p0,"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn bloch_prints_all_variants() {
    let o = ionload(&[
        "bloch",
        "--theta",
        "3.14159",
        "--x",
        "0.01",
        "--gamma-cw-ratio",
        "0",
        "--ode",
    ]);
    assert!(o.status.success());
    let s = stdout(&o);
    for label in ["closed:", "simplified:", "weak (bracket):", "weak (theta^2):", "ode:"] {
        assert!(s.contains(label), "{s}");
    }
}

#[test]
fn mc_is_reproducible() {
    let args = ["mc", "--samples", "20000", "--seed", "4", "--format", "csv"];
    let a = ionload(&args);
    assert!(a.status.success());
    assert_eq!(
        stdout(&a),
        stdout(&ionload(&[
            "--threads",
            "1",
            "mc",
            "--samples",
            "20000",
            "--seed",
            "4",
            "--format",
            "csv"
        ]))
    );
    assert_eq!(stdout(&a).lines().count(), 4);
}

#[test]
fn presets_tables() {
    let s = stdout(&ionload(&["presets"]));
    assert!(s.lines().any(|l| l.starts_with("Cd")));
    let t = stdout(&ionload(&["presets", "traps", "--csv"]));
    assert!(t.lines().count() >= 6);
    let j: serde_json::Value = serde_json::from_slice(&ionload(&["presets", "--format", "json"]).stdout).unwrap();
    assert_eq!(j.as_array().unwrap().len(), 9);
}

#[test]
fn check_passes() {
    let o = ionload(&["check", "--sets", "2", "--samples", "20000"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS monte carlo bit-identical"));
}

#[test]
fn exit_codes() {
    assert_eq!(ionload(&["rate", "--energy", "-5 pJ"]).status.code(), Some(1));
    assert_eq!(ionload(&["rate", "--set", "laser.bogus=1"]).status.code(), Some(1));
    assert_eq!(
        ionload(&["scan", "--config", "/nonexistent/file.cfg"]).status.code(),
        Some(1)
    );
    assert_eq!(ionload(&["nonsense"]).status.code(), Some(1));
    assert_eq!(ionload(&["--help"]).status.code(), Some(0));
}
