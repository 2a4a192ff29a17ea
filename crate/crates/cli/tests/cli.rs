use std::fs;
use std::process::{Command, Output};

const NORTH_TO_SOUTH: [&str; 8] =
    ["--theta0", "0", "--phi0", "0", "--thetas", "3.141592653589793", "--phis", "0"];
const GENERIC: [&str; 8] = ["--theta0", "0.4", "--phi0", "1", "--thetas", "2", "--phis", "5"];

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bloch-steer")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn table_value(table: &str, row: &str, column: usize) -> f64 {
    let line = table.lines().find(|l| l.split_whitespace().next() == Some(row)).expect("row present");
    line.split_whitespace().nth(column).unwrap().parse().unwrap()
}

#[test]
fn plan_north_to_south_bang() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().to_str().unwrap();
    let mut args = vec!["plan"];
    args.extend(NORTH_TO_SOUTH);
    args.extend(["--scheme", "three", "--shape", "bang", "--lambda", "1", "--out-dir", out_dir]);
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let table = stdout(&o);
    let t_f = table_value(&table, "t_f", 1);
    assert!((t_f - std::f64::consts::FRAC_PI_2).abs() < 1e-14);
    assert!((table_value(&table, "j", 2) - std::f64::consts::PI).abs() < 1e-12);

    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("schedule.json")).unwrap()).unwrap();
    assert_eq!(doc["scheme"], "three");
    assert_eq!(doc["segments"].as_array().unwrap().len(), 1);
    assert_eq!(doc["segments"][0]["axis"], "y");

    let csv = fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "t,re0,im0,re1,im1,bloch_x,bloch_y,bloch_z,u_z,u_y");
    assert_eq!(lines.count(), 512);
    assert!(dir.path().join("performance.txt").exists());
}

#[test]
fn negative_lambda_is_an_input_error() {
    let mut args = vec!["plan"];
    args.extend(GENERIC);
    args.extend(["--lambda", "-1"]);
    assert_eq!(run(&args).status.code(), Some(1));
}

#[test]
fn invalid_polar_angle_is_an_input_error() {
    let o = run(&["plan", "--theta0", "4", "--phi0", "0", "--thetas", "1", "--phis", "0"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["plan", "--theta0", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn compare_orders_by_cost() {
    let mut args = vec!["compare"];
    args.extend(GENERIC);
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let shapes: Vec<&str> = text.lines().skip(1).map(|l| l.split_whitespace().next().unwrap()).collect();
    assert_eq!(shapes, ["bang", "quadratic", "triangle"]);
    let js: Vec<f64> = text.lines().skip(1).map(|l| l.split_whitespace().nth(1).unwrap().parse().unwrap()).collect();
    assert!(js[0] < js[1] && js[1] < js[2]);
}

fn sweep_rows(args: &[&str]) -> Vec<Vec<String>> {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "lambda,shape,t_f,energy,j,te_product,magnitude,clamped,j_numeric");
    lines.map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

#[test]
fn sweep_product_is_lambda_invariant() {
    let mut args = vec!["sweep"];
    args.extend(GENERIC);
    args.extend(["--shape", "bang", "--lambdas", "0.25,1,4"]);
    let rows = sweep_rows(&args);
    assert_eq!(rows.len(), 3);
    let p: Vec<f64> = rows.iter().map(|r| r[5].parse().unwrap()).collect();
    assert!((p[0] - p[1]).abs() < 1e-12 && (p[1] - p[2]).abs() < 1e-12);
}

#[test]
fn sweep_product_ratios() {
    let mut args = vec!["sweep"];
    args.extend(GENERIC);
    args.extend(["--lambdas", "1"]);
    let rows = sweep_rows(&args);
    let p: Vec<f64> = rows.iter().map(|r| r[5].parse().unwrap()).collect();
    // bang, triangle, quadratic: 1/4, 1/3, 3/10 of Σ²
    assert!((p[1] / p[0] - 4.0 / 3.0).abs() < 1e-12);
    assert!((p[2] / p[0] - 6.0 / 5.0).abs() < 1e-12);
}

#[test]
fn bounded_sweep_rows_are_clamped() {
    let mut args = vec!["sweep"];
    args.extend(GENERIC);
    args.extend(["--shape", "bang", "--lambdas", "1,4", "--bound", "0.2"]);
    for row in sweep_rows(&args) {
        assert_eq!(row[7], "true");
        let j: f64 = row[4].parse().unwrap();
        let j_num: f64 = row[8].parse().unwrap();
        assert!((j - j_num).abs() <= 1e-8 * j);
    }
}

#[test]
fn simulate_replays_plan() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().to_str().unwrap();
    let mut args = vec!["plan"];
    args.extend(GENERIC);
    args.extend(["--scheme", "one", "--shape", "triangle", "--out-dir", out_dir]);
    assert_eq!(run(&args).status.code(), Some(0));
    let schedule = dir.path().join("schedule.json");
    let schedule = schedule.to_str().unwrap();
    let mut args = vec!["simulate", "--schedule", schedule];
    args.extend(GENERIC);
    assert_eq!(run(&args).status.code(), Some(0));

    // replaying toward a different target fails verification
    let o = run(&["simulate", "--schedule", schedule, "--theta0", "0.4", "--phi0", "1", "--thetas", "0.1", "--phis", "5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn simulate_rejects_malformed_schedule() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, "{\"scheme\": \"three\"}").unwrap();
    let o = run(&["simulate", "--schedule", path.to_str().unwrap(), "--theta0", "0", "--phi0", "0"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn encoded_default_and_custom_lindblad() {
    let mut args = vec!["encoded"];
    args.extend(GENERIC);
    args.extend(["--shape", "quadratic", "--seed", "3"]);
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(table_value(&text, "dfs_residual", 1) <= 1e-12);
    assert!(table_value(&text, "open_fidelity", 1) > 1.0 - 1e-6);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("noise.json");
    fs::write(&path, r#"{"operators": [[[[1,0],[0,0]]]], "alpha": [[[1,0]]]}"#).unwrap();
    let mut bad = args.clone();
    bad.extend(["--lindblad", path.to_str().unwrap()]);
    assert_eq!(run(&bad).status.code(), Some(1));
}
