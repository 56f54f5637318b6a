use serde_json::Value;
use superholo::cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("superholo").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut v = vec!["--json"];
    v.extend_from_slice(args);
    let (code, out, err) = call(&v);
    assert!(err.is_empty(), "{err}");
    (code, serde_json::from_str(&out).expect("json output"))
}

#[test]
fn lambda_of_fan_arc() {
    let (code, out, _) = call(&["lambda", "--polygon", "fan:5", "--arc", "2,5"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("lambda(2,5) = "));
    let (code, v) = json(&["lambda", "--polygon", "fan:4", "--arc", "2,4"]);
    assert_eq!(code, 0);
    assert_eq!(v["arc"], serde_json::json!([2, 4]));
    assert_eq!(v["lambda"], "l_12*l_13^(-1)*l_34 + l_12^(1/2)*l_13^(-1)*l_14^(1/2)*l_23^(1/2)*l_34^(1/2)*t_123.t_134 + l_13^(-1)*l_14*l_23");
}

#[test]
fn every_check_verifies() {
    for args in [
        vec!["holonomy", "--polygon", "zigzag:6"],
        vec!["holonomy", "--polygon", "fan:6", "--arc", "2,5"],
        vec!["flat-check", "--polygon", "zigzag:7", "--seed", "3", "--orientations", "5"],
        vec!["generic-check", "--polygon", "zigzag:8"],
        vec!["combo-check", "--polygon", "zigzag:6"],
        vec!["dimers", "--polygon", "fan:6"],
        vec!["fib", "--n", "8"],
        vec!["osp-check", "--words", "50"],
        vec!["osp-check", "--polygon", "fan:5", "--words", "20"],
        vec!["appendix-check", "--words", "10"],
    ] {
        let (code, out, err) = call(&args);
        assert_eq!(code, 0, "{args:?}\n{out}\n{err}");
        let (code, _) = json(&args);
        assert_eq!(code, 0, "{args:?}");
    }
}

#[test]
fn invalid_input_exits_2() {
    for args in [
        vec!["lambda", "--polygon", "fan:5", "--arc", "0,3"],
        vec!["lambda", "--polygon", "fan:5", "--arc", "2,9"],
        vec!["lambda", "--polygon", "fan:5", "--arc", "3,3"],
        vec!["lambda", "--polygon", "hexagon", "--arc", "1,3"],
        vec!["holonomy", "--polygon", "fan:2"],
        vec!["dimers", "--polygon", "fan:5", "--arc", "1,4"],
        vec!["fib", "--n", "1"],
        vec!["no-such-command"],
    ] {
        let (code, _, err) = call(&args);
        assert_eq!(code, 2, "{args:?}");
        assert!(!err.is_empty());
    }
}

#[test]
fn polygon_from_json() {
    let path = std::env::temp_dir().join(format!("superholo-cli-{}.json", std::process::id()));
    let text = r#"{"n": 5, "diagonals": [[1, 3], [3, 5]], "orientation": {}, "mu_names": {}}"#;
    std::fs::write(&path, text).unwrap();
    let p = path.to_str().unwrap();
    let (code, out, err) = call(&["generic-check", "--polygon", p]);
    assert_eq!(code, 0, "{out}{err}");
    let (code, _, _) = call(&["lambda", "--polygon", p, "--arc", "2,5"]);
    assert_eq!(code, 0);
    std::fs::write(&path, r#"{"n": 5, "diagonals": [[0, 3]]}"#).unwrap();
    let (code, _, _) = call(&["lambda", "--polygon", p, "--arc", "2,5"]);
    assert_eq!(code, 2);
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn fib_table_json() {
    let (code, v) = json(&["fib", "--n", "4"]);
    assert_eq!(code, 0);
    let rows = v["rows"].as_array().expect("rows");
    let z: Vec<&str> = rows.iter().map(|r| r["z"].as_str().unwrap()).collect();
    assert_eq!(z, ["1", "2 + σθ", "5 + 6σθ"]);
}
