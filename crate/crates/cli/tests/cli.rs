use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use motionkit::projd::same_point;
use motionkit::{interp_conic, ConicFamily, DualNumber, DualQuaternion, FactorizationResult, MotionPoly};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_motionkit")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn dq(p: [f64; 4], d: [f64; 4]) -> DualQuaternion {
    DualQuaternion::from_arrays(p, d)
}

/// `t² + 1 + ε(√3t + 𝐣t + 2𝐢)`
fn example_c() -> MotionPoly {
    let s3 = 3f64.sqrt();
    MotionPoly::new(vec![
        dq([1.0, 0.0, 0.0, 0.0], [0.0, 2.0, 0.0, 0.0]),
        dq([0.0; 4], [s3, 0.0, 1.0, 0.0]),
        DualQuaternion::ONE,
    ])
}

fn write_json<T: serde::Serialize>(dir: &Path, name: &str, v: &T) -> String {
    let p = dir.join(name);
    fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p.to_str().unwrap().to_string()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

fn factor_example(dir: &Path) -> std::path::PathBuf {
    let c = write_json(dir, "c.json", &example_c());
    let out = dir.join("f.json");
    let o = run(&["factor", "--input", &c, "--v2", "0", "--v3", "0.5773502691896258", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    out
}

#[test]
fn factor_example_reproduces_printed_factors() {
    let dir = tempfile::tempdir().unwrap();
    let out = factor_example(dir.path());
    let v = read_json(&out);
    assert_eq!(v["case"], "b");
    let facts: Vec<FactorizationResult> = serde_json::from_value(v["factorizations"].clone()).unwrap();
    assert_eq!(facts.len(), 2);
    let s3 = 3f64.sqrt();
    // F1 = t + (√3𝐢 − 𝐤)/2 − ε(𝐢 − 3𝐣 + √3𝐤)/3
    let f1 = MotionPoly::new(vec![dq([0.0, s3 / 2.0, 0.0, -0.5], [0.0, -1.0 / 3.0, 1.0, -s3 / 3.0]), DualQuaternion::ONE]);
    // G1 = t − (√3𝐢 + 𝐤)/2 + ε(3√3 + 𝐢 + 3𝐣 − √3𝐤)/3
    let g1 = MotionPoly::new(vec![dq([0.0, -s3 / 2.0, 0.0, -0.5], [s3, 1.0 / 3.0, 1.0, -s3 / 3.0]), DualQuaternion::ONE]);
    assert!(facts.iter().any(|f| f.factors[0].approx_eq(&f1, 1e-12)));
    assert!(facts.iter().any(|f| f.factors[0].approx_eq(&g1, 1e-12)));
    for f in &facts {
        assert!(f.product().approx_eq(&example_c(), 1e-12));
    }
}

#[test]
fn factor_rejects_case_a_off_study() {
    // (t − 𝐢)(t − 𝐣) + ε: dual norm 2t² does not vanish at t = ±i
    let c = MotionPoly::new(vec![dq([0.0, 0.0, 0.0, 1.0], [1.0, 0.0, 0.0, 0.0]), dq([0.0, -1.0, -1.0, 0.0], [0.0; 4]), DualQuaternion::ONE]);
    let o = run(&["factor", "--input", &serde_json::to_string(&c).unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("Study quadric"), "{}", stderr(&o));
    let mut ok = c.clone();
    ok.coeffs[0].dual = DualQuaternion::ZERO.dual;
    let o = run(&["factor", "--input", &serde_json::to_string(&ok).unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["case"], "a");
}

#[test]
fn factor_rejects_bad_input() {
    let lin = MotionPoly::new(vec![DualQuaternion::I, DualQuaternion::ONE]);
    assert_eq!(code(&run(&["factor", "--input", &serde_json::to_string(&lin).unwrap()])), 2);
    assert_eq!(code(&run(&["factor", "--input", "{\"coeffs\": 3}"])), 2);
    assert_eq!(code(&run(&["factor", "--input", "/nonexistent/c.json"])), 2);
}

#[test]
fn linkage_report_for_example() {
    let dir = tempfile::tempdir().unwrap();
    let f = factor_example(dir.path());
    let out = dir.path().join("l.json");
    let o = run(&["linkage", "--first", f.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = read_json(&out);
    assert_eq!(v["types"], "RCRC");
    assert_eq!(v["dof_cgk"], 0);
    for p in v["axes"].as_array().unwrap() {
        let (angle, dist) = (p["angle"].as_f64().unwrap(), p["distance"].as_f64().unwrap());
        if p["parallel"].as_bool().unwrap() {
            assert!((dist - 1.0).abs() < 1e-9);
        } else {
            assert!((angle - PI / 3.0).abs() < 1e-9);
            assert!((dist - 4.0 / 3.0).abs() < 1e-9);
        }
    }
}

fn bennett_c() -> MotionPoly {
    // rotations about the 𝐢 axis and about the 𝐣 direction through (0, 0, 1)
    let f = MotionPoly::new(vec![dq([0.3, -1.0, 0.0, 0.0], [0.0; 4]), DualQuaternion::ONE]);
    let g = MotionPoly::new(vec![dq([-0.2, 0.0, -1.0, 0.0], [0.0, 1.0, 0.0, 0.0]), DualQuaternion::ONE]);
    &f * &g
}

#[test]
fn bennett_factorizations_give_rrrr() {
    let dir = tempfile::tempdir().unwrap();
    let c = write_json(dir.path(), "c.json", &bennett_c());
    let f = dir.path().join("f.json");
    let o = run(&["factor", "--input", &c, "--out", f.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(read_json(&f)["case"], "none");
    let o = run(&["linkage", "--first", f.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["types"], "RRRR");
    assert_eq!(v["dof_cgk"], -2);
}

#[test]
fn mismatched_linkage_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let a = factor_example(dir.path());
    let c = write_json(dir.path(), "b.json", &bennett_c());
    let b = dir.path().join("fb.json");
    assert_eq!(code(&run(&["factor", "--input", &c, "--out", b.to_str().unwrap()])), 0);
    let o = run(&["linkage", "--first", a.to_str().unwrap(), "--second", b.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("different motions"));
}

#[test]
fn motion_constructors() {
    let o = run(&["motion", "--kind", "darboux", "--amplitude", "1.5"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let poly: MotionPoly = serde_json::from_value(v["poly"].clone()).unwrap();
    assert_eq!(poly.degree(), 1);
    assert_eq!(poly.coeff(0), dq([1.0, 0.0, 0.0, 0.0], [1.5, 0.0, 0.0, 0.0]));

    let o = run(&["motion", "--kind", "helical", "--pitch", "2"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["trig"]["kind"]["kind"], "helical");
    assert!(v["poly"].is_null());

    assert_eq!(code(&run(&["motion", "--kind", "helical"])), 2);
    assert_eq!(code(&run(&["motion", "--kind", "translation", "--direction", "0,0,0"])), 2);
    assert_eq!(code(&run(&["motion", "--kind", "darboux", "--amplitude", "1", "--color", "red"])), 2);
}

#[test]
fn motion_conic_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let pts = [
        dq([1.0, 0.0, 0.0, 0.0], [0.0, 0.5, 0.0, 0.0]),
        dq([0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]),
        dq([0.5, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]),
    ];
    let files: Vec<String> = pts.iter().enumerate().map(|(k, p)| write_json(dir.path(), &format!("p{k}.json"), p)).collect();
    let o = run(&["motion", "--kind", "conic", "--points", &files[0], &files[1], &files[2], "--gamma0", "1,0.5", "--gamma2", "2,-1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let got: MotionPoly = serde_json::from_slice(&o.stdout).unwrap();
    let fam = ConicFamily::new(pts[0], pts[1], pts[2], DualNumber::new(1.0, 0.5), DualNumber::new(2.0, -1.0));
    assert_eq!(got, interp_conic(&fam).unwrap());
}

#[test]
fn fit_through_poses() {
    let c = bennett_c();
    let pts = [c.eval(-1.0), c.eval(0.5), c.eval(2.0)];
    let args: Vec<String> = pts.iter().map(|p| serde_json::to_string(p).unwrap()).collect();
    let through = |poly: &MotionPoly| {
        same_point(poly.eval(0.0), pts[0], 1e-8) && same_point(poly.eval(1.0), pts[1], 1e-8) && same_point(poly.leading(), pts[2], 1e-8)
    };
    let o = run(&["fit", "bennett", "--points", &args[0], &args[1], &args[2]]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let poly: MotionPoly = serde_json::from_slice(&o.stdout).unwrap();
    assert!(through(&poly));
    assert!(poly.is_study(1e-8));
    let o = run(&["fit", "nullcone", "--points", &args[0], &args[1], &args[2]]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let sols: Vec<Value> = serde_json::from_slice(&o.stdout).unwrap();
    assert!((1..=4).contains(&sols.len()));
    for s in &sols {
        let poly: MotionPoly = serde_json::from_value(s["poly"].clone()).unwrap();
        assert!(through(&poly));
    }
    assert_eq!(code(&run(&["fit", "bennett", "--points", &args[0], &args[0], &args[2]])), 2);
}

fn polyline_points(svg: &str, stroke: &str) -> Vec<(f64, f64)> {
    let line = svg.lines().find(|l| l.starts_with("<polyline") && l.contains(&format!("stroke=\"{stroke}\""))).unwrap();
    let pts = line.split("points=\"").nth(1).unwrap().trim_end_matches("\"/>");
    pts.split(' ')
        .map(|p| {
            let (x, y) = p.split_once(',').unwrap();
            (x.parse().unwrap(), y.parse().unwrap())
        })
        .collect()
}

#[test]
fn develop_svg_shapes() {
    let o = run(&["develop", "--kind", "rotation", "--samples", "9"]);
    assert_eq!(code(&o), 0);
    let pts = polyline_points(&String::from_utf8(o.stdout).unwrap(), "black");
    assert!(pts.iter().all(|p| p.1 == pts[0].1));

    let o = run(&["develop", "--kind", "helical", "--pitch", "1", "--t-range", "0,2pi", "--samples", "9", "--osculate", "pi/2"]);
    assert_eq!(code(&o), 0);
    let svg = String::from_utf8(o.stdout).unwrap();
    let line = polyline_points(&svg, "black");
    // straight line of slope −1 in SVG coordinates (z up)
    for w in line.windows(2) {
        assert!(((w[1].1 - w[0].1) + (w[1].0 - w[0].0)).abs() < 2e-3);
    }
    let sine = polyline_points(&svg, "blue");
    assert_eq!(sine.len(), 9);
    // tangent at the marked parameter
    assert!((sine[2].0 - line[2].0).abs() < 1e-9 && (sine[2].1 - line[2].1).abs() < 2e-3);
    assert!(svg.contains("<circle"));

    let o = run(&["develop", "--kind", "darboux", "--amplitude", "1", "--samples", "5", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let csv = String::from_utf8(o.stdout).unwrap();
    for row in csv.lines().skip(1) {
        let (u, z) = row.split_once(',').unwrap();
        let (u, z): (f64, f64) = (u.parse().unwrap(), z.parse().unwrap());
        assert!((z - u.sin()).abs() < 1e-12);
    }
}

#[test]
fn develop_stationary_angle_is_input_error() {
    let m = r#"{"angle": {"type": "poly", "coeffs": [0.0, 0.0, 1.0]}, "height": {"type": "poly", "coeffs": [0.0]}}"#;
    let o = run(&["develop", "--input", m, "--t-range", "-1,1", "--samples", "3"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("stationary"));
}

#[test]
fn sample_trajectory_csv() {
    let d = run(&["motion", "--kind", "darboux", "--amplitude", "1"]);
    let o = run(&["sample", "--input", &String::from_utf8(d.stdout).unwrap(), "--point", "1,0,0", "--t-range", "0,pi", "--samples", "3"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let csv = String::from_utf8(o.stdout).unwrap();
    let rows: Vec<Vec<f64>> = csv.lines().skip(1).map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 3);
    // at ω = π/2 the point (1, 0, 0) is rotated to (0, 1, 1)
    let r = &rows[1];
    let a = [r[2] / r[1], r[3] / r[1], r[4] / r[1]];
    assert!(a[0].abs() < 1e-12 && (a[1] - 1.0).abs() < 1e-12 && (a[2] - 1.0).abs() < 1e-12);
}

#[test]
fn output_is_atomic_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = factor_example(dir.path());
    let first = fs::read(&a).unwrap();
    let b = factor_example(dir.path());
    assert_eq!(first, fs::read(&b).unwrap());
    let names: Vec<String> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    assert!(names.iter().all(|n| n == "c.json" || n == "f.json"), "{names:?}");
}

#[test]
fn tolerance_from_environment() {
    let c = serde_json::to_string(&example_c()).unwrap();
    let bad = Command::new(env!("CARGO_BIN_EXE_motionkit")).env("MOTIONKIT_TOL", "abc").args(["factor", "--input", &c]).output().unwrap();
    assert_eq!(code(&bad), 2);
    let ok = Command::new(env!("CARGO_BIN_EXE_motionkit")).env("MOTIONKIT_TOL", "1e-10").args(["factor", "--input", &c]).output().unwrap();
    assert_eq!(code(&ok), 0);
    assert_eq!(code(&run(&["--tol", "-1", "factor", "--input", &c])), 2);
}
