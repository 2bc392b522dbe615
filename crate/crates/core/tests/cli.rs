use std::path::PathBuf;
use std::process::Command;

use padic_triple::cli::{parse_config, run, slope_polygon, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};
use padic_triple::spectral::Slope;

fn sample_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs/sample.conf")
}

fn invoke(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("ptriple").chain(args.iter().copied());
    let code = run(argv, &mut stdin.as_bytes(), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn temp_config(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ptriple-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn machine_value<'a>(out: &'a str, key: &str) -> &'a str {
    out.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(": ")))
        .unwrap_or_else(|| panic!("no key {key} in\n{out}"))
}

#[test]
fn sample_euler_rows_match_hand_computation() {
    let path = sample_path();
    let (code, out, err) = invoke(&["--machine", "euler", "--config", path.to_str().unwrap()], "");
    assert_eq!(code, EXIT_OK, "{err}");
    let w = "([2,2],[2,2],[6,2])";
    // p0: (1-3)(1-9)(1-9)(1-27) and (1-81)(1-243)
    assert_eq!(machine_value(&out, &format!("{w}.p0.ep")), "3328");
    assert_eq!(machine_value(&out, &format!("{w}.p0.ep1")), "19360");
    assert_eq!(machine_value(&out, &format!("{w}.p0.ratio")), "104/605");
    // p1: (1-3)^3 (1-81) and (1-9)(1-27)
    assert_eq!(machine_value(&out, &format!("{w}.p1.ep")), "640");
    assert_eq!(machine_value(&out, &format!("{w}.p1.ep1")), "208");
    assert_eq!(machine_value(&out, &format!("{w}.p1.ratio")), "40/13");
    // (104/605)(40/13) = 64/121
    assert_eq!(machine_value(&out, &format!("{w}.product")), "64/121");
    assert_eq!(machine_value(&out, &format!("{w}.archimedean")), "9");
    assert_eq!(machine_value(&out, &format!("{w}.computable")), "576/121");
}

#[test]
fn table_and_machine_agree() {
    let path = sample_path();
    let (_, table, _) = invoke(&["euler", "--config", path.to_str().unwrap()], "");
    for cell in ["3328", "19360", "104/605", "640", "208", "40/13", "64/121"] {
        assert!(table.contains(cell), "{cell} missing from\n{table}");
    }
    assert!(table.lines().next().unwrap().starts_with("weights"));
}

#[test]
fn zero_beta_gives_trivial_factors() {
    let path = temp_config(
        "zero.conf",
        "[field]\np = 5\nprimes = a:1, b:1\n[weights]\ntriple = 2,2 ; 2,2 ; 6,2\n\
         [eigen a]\nalpha = 1,1,1\nbeta = 0,0,0\n[eigen b]\nalpha = 2,3,4\nbeta = 0,0,0\n",
    );
    let (code, out, err) = invoke(&["--machine", "euler", "--config", path.to_str().unwrap()], "");
    assert_eq!(code, EXIT_OK, "{err}");
    for l in out.lines().filter(|l| l.contains(".ep") || l.contains(".ratio") || l.contains(".product")) {
        assert!(l.ends_with(": 1"), "{l}");
    }
}

#[test]
fn symbolic_eigen_data() {
    let path = temp_config(
        "sym.conf",
        "[field]\np = 3\n[weights]\ntriple = 2 ; 2 ; 6\n[eigen p0]\nalpha = symbolic\nbeta = symbolic\n",
    );
    let (code, out, err) = invoke(&["--machine", "euler", "--config", path.to_str().unwrap()], "");
    assert_eq!(code, EXIT_OK, "{err}");
    let ep = machine_value(&out, "(2,2,6).p0.ep");
    for v in ["a1", "a2", "b1", "b2", "b3"] {
        assert!(ep.contains(v), "{ep}");
    }
}

#[test]
fn missing_eigenvalue_names_the_field() {
    let path = temp_config("missing.conf", "[field]\np = 3\n[weights]\ntriple = 2 ; 2 ; 6\n[eigen p0]\nalpha = 1,1,1\n");
    let (code, _, err) = invoke(&["euler", "--config", path.to_str().unwrap()], "");
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("[eigen p0] is missing 'beta'"), "{err}");
}

#[test]
fn config_errors_are_usage_errors() {
    let path = temp_config("bad.conf", "[field]\np = 3\n[caps]\nlevel = -1\n");
    let (code, _, err) = invoke(&["slopes", "--config", path.to_str().unwrap()], "");
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("line 4"), "{err}");
    let (code, _, err) = invoke(&["euler", "--config", "/nonexistent/x.conf"], "");
    assert_eq!(code, EXIT_USAGE);
    assert!(err.starts_with("error:"));
}

#[test]
fn verify_exit_codes() {
    let (code, out, _) = invoke(&["verify", "serre-tate"], "");
    assert_eq!(code, EXIT_OK);
    assert!(out.lines().filter(|l| l.starts_with("PASS")).count() >= 5);
    let (code, _, err) = invoke(&["verify", "nonsense"], "");
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("unknown suite"));
    let (code, out, _) = invoke(&["--machine", "verify", "all"], "");
    assert_eq!(code, EXIT_OK);
    assert_eq!(machine_value(&out, "failed"), "0");
    assert_ne!(EXIT_FAILURE, EXIT_OK);
}

#[test]
fn usage_and_help() {
    assert_eq!(invoke(&[], "").0, EXIT_USAGE);
    assert_eq!(invoke(&["frobnicate"], "").0, EXIT_USAGE);
    assert_eq!(invoke(&["qexp", "--op", "W"], "").0, EXIT_USAGE);
    let (code, out, _) = invoke(&["--help"], "");
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("verify"));
}

#[test]
fn qexp_operators() {
    let input = "1:1\n2:4\n3:2\n9:1/2\n";
    let (code, out, _) = invoke(&["qexp", "--op", "U"], input);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "1:2\n3:1/2\n");
    let (_, out, _) = invoke(&["qexp", "--op", "V"], "1:2\n3:1/2\n");
    assert_eq!(out, "3:2\n9:1/2\n");
    let (_, out, _) = invoke(&["qexp", "--op", "Theta"], "2:1\n5:3\n");
    assert_eq!(out, "2:2\n5:15\n");
    let (_, out, _) = invoke(&["qexp", "--op", "deplete"], input);
    assert_eq!(out, "1:1\n2:4\n");
    let (code, _, err) = invoke(&["qexp", "--op", "U"], "1:1\nbad\n");
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("line 2"), "{err}");
    let (code, _, _) = invoke(&["qexp", "--op", "V", "--cap", "10"], "4:1\n");
    assert_eq!(code, EXIT_USAGE);
}

/// `U` on `Sym^k` is triangular in `x^{k−j}y^j` with diagonal `Σ_{i<p} p^j = p^{j+1}`.
fn classical_slopes(k: i64) -> Vec<Slope> {
    (0..=k).map(|j| Slope::from_integer(j + 1)).collect()
}

#[test]
fn slopes_contain_classical_slopes() {
    let cfg = parse_config(&std::fs::read_to_string(sample_path()).unwrap()).unwrap();
    for k in 0..=3 {
        let np = slope_polygon(&cfg, 1, &[k]).unwrap();
        for s in classical_slopes(k) {
            assert!(np.multiplicity(s) >= 1, "k={k} slope {s}");
        }
        // slopes below the classicity threshold k + 1 are exactly the classical ones below it
        assert_eq!(np.count_below(Slope::from_integer(k + 1)), k as usize);
    }
    let (code, out, _) = invoke(&["--machine", "slopes", "--config", sample_path().to_str().unwrap()], "");
    assert_eq!(code, EXIT_OK);
    assert_eq!(machine_value(&out, "p1.k=0,2.threshold"), "3");
    assert_eq!(machine_value(&out, "p1.k=0,2.below"), "2");
}

#[test]
fn slopes_on_residue_degree_two() {
    let path = temp_config(
        "f2.conf",
        "[field]\np = 3\nprecision = 12\nprimes = p0:1, p1:2\n[caps]\ndegree = 2\n[slopes]\nprime = p1\ngrid = 0,1,1\n",
    );
    let (code, out, err) = invoke(&["--machine", "slopes", "--config", path.to_str().unwrap()], "");
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.contains("p1.k=0,1,1.slopes: "), "{out}");
}

#[test]
fn empty_grid_is_an_empty_table() {
    let path = temp_config("empty.conf", "[field]\np = 3\n[slopes]\ngrid =\n");
    let (code, out, _) = invoke(&["slopes", "--config", path.to_str().unwrap()], "");
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 2);
}

#[test]
fn binary_runs() {
    let out = Command::new(env!("CARGO_BIN_EXE_ptriple"))
        .args(["--machine", "euler", "--config"])
        .arg(sample_path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("p0.ratio: 104/605"));
    let out = Command::new(env!("CARGO_BIN_EXE_ptriple")).args(["verify", "nope"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
}
