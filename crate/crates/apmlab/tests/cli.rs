//! CLI behaviour: the advertised file formats, exit codes, and output
//! shapes of every subcommand.

use apmlab::cli::run;
use apmlab::models;

fn run_args(args: &[&str]) -> i32 {
    let mut argv: Vec<String> = vec!["apm".into()];
    argv.extend(args.iter().map(|s| s.to_string()));
    run(argv)
}

#[test]
fn classify_emits_profile_json() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("m.json");
    std::fs::write(&model, models::reference_with_alpha(0.2, 0.2).to_json()).unwrap();
    let out = dir.path().join("profile.json");
    let code = run_args(&[
        "classify",
        "--model",
        model.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&out).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!((v["tau"].as_f64().unwrap() - 0.2f64.ln_1p() / 0.5f64.ln()).abs() < 1e-12);
    assert!((v["alpha"].as_f64().unwrap() - 0.2).abs() < 1e-12);
    assert_eq!(v["class_tag"].as_str().unwrap(), "H3_1");
    assert!((v["s0"].as_f64().unwrap() + 1.2).abs() < 1e-12);
}

#[test]
fn henon_csv_has_parabolic_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("henon.csv");
    let code = run_args(&[
        "henon",
        "--orientable",
        "--m",
        "-1.5:3.5:0.01",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&out).unwrap();
    let parabolic_plus = text.lines().filter(|l| l.contains("parabolic+1")).count();
    let parabolic_minus = text.lines().filter(|l| l.contains("parabolic-1")).count();
    assert!(parabolic_plus >= 1, "no parabolic+1 row near M=-1");
    assert!(parabolic_minus >= 1, "no parabolic-1 row near M=3");
    assert!(text.starts_with("M,x,y,trace,stability,psi\n"));
}

#[test]
fn cascade_csv_passes_for_reference_model() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("m.json");
    std::fs::write(&model, models::reference_with_alpha(0.2, 0.2).to_json()).unwrap();
    let out = dir.path().join("cascade.csv");
    let code = run_args(&[
        "cascade",
        "--model",
        model.to_str().unwrap(),
        "--k",
        "6:10",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&out).unwrap();
    let mut rows = 0;
    for line in text.lines().skip(1) {
        rows += 1;
        assert!(line.ends_with(",true"), "row failed: {line}");
    }
    assert_eq!(rows, 5);
}

#[test]
fn rescale_check_csv() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("m.json");
    std::fs::write(&model, models::reference_symplectic(0.2).to_json()).unwrap();
    let out = dir.path().join("rescale.csv");
    let code = run_args(&[
        "rescale-check",
        "--model",
        model.to_str().unwrap(),
        "--k",
        "6:12",
        "--ball",
        "2.0",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("k,nu1,nu2,M,residual,budget,pass\n"));
    for line in text.lines().skip(1) {
        assert!(line.ends_with(",true"), "row failed budget: {line}");
    }
}

#[test]
fn symbolic_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("m.json");
    std::fs::write(&model, models::class2().to_json()).unwrap();
    let out = dir.path().join("symbolic.json");
    let code = run_args(&[
        "symbolic",
        "--model",
        model.to_str().unwrap(),
        "--code",
        "6:1,7:2",
        "--verify",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["admissible"], serde_json::json!(true));
    assert_eq!(v["orbit"]["found"], serde_json::json!(true));
    assert!(v["orbit"]["residual"].as_f64().unwrap() < 1e-10);
}

#[test]
fn diagram_emits_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("m.json");
    std::fs::write(&model, models::reference_symplectic(0.0).to_json()).unwrap();
    let out = dir.path().join("diagram.csv");
    let svg = dir.path().join("diagram.svg");
    let code = run_args(&[
        "diagram",
        "--model",
        model.to_str().unwrap(),
        "--k",
        "6:8",
        "--alpha",
        "-0.05:0.05:0.005",
        "--svg",
        svg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("k,curve,alpha,mu\n"));
    assert!(text.lines().count() > 3 * 2 * 10);
    let svg_text = std::fs::read_to_string(&svg).unwrap();
    assert!(svg_text.starts_with("<svg"));
    assert!(svg_text.contains("polyline"));
}

#[test]
fn nf_reduce_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let jet = dir.path().join("jet.json");
    // Birkhoff form with beta1 = 0.3: reduction must report it unchanged
    std::fs::write(
        &jet,
        r#"{"order": 7,
            "fx": [[1,0,0.5],[2,1,0.15]],
            "fy": [[0,1,2.0],[1,2,-0.6],[2,3,0.18]]}"#,
    )
    .unwrap();
    let out = dir.path().join("nf.json");
    let code = run_args(&[
        "nf-reduce",
        "--jet",
        jet.to_str().unwrap(),
        "--n",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let betas = v["betas"].as_array().unwrap();
    assert!((betas[0].as_f64().unwrap() - 0.3).abs() < 1e-12);
}

#[test]
fn json_output_mode() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("m.json");
    std::fs::write(&model, models::reference_with_alpha(0.2, 0.2).to_json()).unwrap();
    let out = dir.path().join("cascade.json");
    let code = run_args(&[
        "cascade",
        "--model",
        model.to_str().unwrap(),
        "--k",
        "6:8",
        "--json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0]["kind"], serde_json::json!("Ek"));
    assert!(rows[0]["mu_plus_detected"].as_f64().is_some());

    let out2 = dir.path().join("henon.json");
    let code = run_args(&[
        "henon",
        "--nonorientable",
        "--m",
        "0.1:0.9:0.4",
        "--json",
        "--out",
        out2.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out2).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
    assert!(v[0]["two_cycles"][0]["trace"].as_f64().is_some());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // malformed model: exit 2
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(run_args(&["classify", "--model", bad.to_str().unwrap()]), 2);
    // inconsistent model (|bc| != 1): exit 2
    let inconsistent = dir.path().join("inconsistent.json");
    std::fs::write(
        &inconsistent,
        r#"{"saddle": {"lambda": 0.5, "betas": []},
            "global": {"family": "exact", "x_plus": 1.0, "y_minus": 1.0, "mu": 0.0,
                       "b": -2.0, "c": 1.0, "d": 1.0, "sigma": 0.0, "f03": 0.0}}"#,
    )
    .unwrap();
    assert_eq!(run_args(&["classify", "--model", inconsistent.to_str().unwrap()]), 2);
    // numerical failure: rescale ball far beyond the chart: exit 3
    let model = dir.path().join("m.json");
    std::fs::write(&model, models::reference_symplectic(0.0).to_json()).unwrap();
    assert_eq!(
        run_args(&[
            "rescale-check",
            "--model",
            model.to_str().unwrap(),
            "--k",
            "1:2",
            "--ball",
            "50.0",
        ]),
        2, // chart overflow is reported as a validation error naming the bound
    );
    // unknown flag: exit 2
    assert_eq!(run_args(&["classify", "--frobnicate"]), 2);
    // missing orientation flag on henon: exit 2
    assert_eq!(run_args(&["henon", "--m", "0.0:1.0:0.5"]), 2);
}

#[test]
fn model_json_parses_written_form() {
    // round-trip through the documented schema keys
    let text = r#"{
      "saddle": {"lambda": 0.5, "betas": [0.1]},
      "global": {"family": "exact", "x_plus": 1.0, "y_minus": 1.0, "mu": 0.001,
                 "b": -1.0, "c": 1.0, "d": 1.0, "sigma": 1.0, "f03": 0.2},
      "q": 1,
      "chart": {"eps_x": 0.25, "eps_y": 0.25}
    }"#;
    let model = apmlab::globalmap::ModelMap::from_json(text).unwrap();
    assert_eq!(model.q, 1);
    assert_eq!(model.saddle.betas(), &[0.1]);
    let back = apmlab::globalmap::ModelMap::from_json(&model.to_json()).unwrap();
    assert_eq!(back.to_json(), model.to_json());
}
