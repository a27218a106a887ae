use std::fs;
use std::process::Command;

const CONFIG: &str = r#"
[scenario.gg10]
atomic = "gg"
field = "fock"
n = 1
m = 0
t_max = 25.0
samples = 2501
measures = ["concurrence", "negativity:atoms"]

[scenario.hot]
atomic = "phi"
field = "coherent"
alpha_re = 3.0
n_max = 3

[sweep.gg10]
scenario = "gg10"
phis = [0.0, 1.0, 2.0]
"#;

fn tatm(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_tatm")).args(args).output().unwrap()
}

#[test]
fn run_writes_deterministic_csv_and_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(&cfg, CONFIG).unwrap();
    let cfg = cfg.to_str().unwrap();
    let mut outputs = Vec::new();
    for sub in ["a", "b"] {
        let out = dir.path().join(sub);
        let o = tatm(&["run", "--config", cfg, "--scenario", "gg10", "--out-dir", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        outputs.push(fs::read(out.join("gg10.csv")).unwrap());
        let verdict = fs::read_to_string(out.join("gg10.verdict.toml")).unwrap();
        assert!(verdict.contains("label = \"DI\""), "{verdict}");
    }
    assert_eq!(outputs[0], outputs[1]);
    let text = String::from_utf8(outputs.remove(0)).unwrap();
    assert!(text.lines().any(|l| l == "t,concurrence,negativity_atoms"));
}

#[test]
fn sweep_is_ordered_by_phi() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(&cfg, CONFIG).unwrap();
    let o = tatm(&["sweep", "--config", cfg.to_str().unwrap(), "--out-dir", dir.path().to_str().unwrap(), "--jobs", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("gg10.sweep.csv")).unwrap();
    let phis: Vec<f64> = csv
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("phi"))
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(phis.len(), 3 * 2501);
    assert!(phis.windows(2).all(|w| w[0] <= w[1]));
    assert!(dir.path().join("gg10.verdicts.csv").exists());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(&cfg, CONFIG).unwrap();
    let cfg = cfg.to_str().unwrap();
    let out = dir.path().to_str().unwrap();

    let o = tatm(&["run", "--config", cfg, "--scenario", "hot", "--out-dir", out]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("'hot'") && err.contains("tail"), "{err}");

    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "[scenario.x]\natomic = \"gg\"\nfield = \"fock\"\nn = 1\nxi_re = 0.2\n").unwrap();
    let o = tatm(&["run", "--config", bad.to_str().unwrap(), "--out-dir", out]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 5"), "{err}");

    // outputs are still written when the classifier cannot label the series
    let o = tatm(&["run", "--config", cfg, "--scenario", "gg10", "--t-max", "6", "--out-dir", out]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("horizon"));
    assert!(dir.path().join("gg10.verdict.toml").exists());

    let o = tatm(&["run", "--config", cfg, "--scenario", "nope", "--out-dir", out]);
    assert_eq!(o.status.code(), Some(1));

    let o = tatm(&["scan", "--config", cfg, "--out-dir", out]);
    assert_eq!(o.status.code(), Some(1));
}
