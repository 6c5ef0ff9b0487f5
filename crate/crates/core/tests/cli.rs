use sqz_decomp::cli::{run, EXIT_IMPOSSIBLE, EXIT_INPUT, EXIT_OK, HEADER};

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("sqz-decomp").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn value<'a>(report: &'a str, key: &str) -> Option<&'a str> {
    report.lines().find_map(|l| l.strip_prefix(key)?.strip_prefix(" = ").or_else(|| l.strip_prefix(key)?.strip_prefix('=')))
}

const OBSTRUCTED: &str = "0 0 1; 1 0 1; 0 1 1";

#[test]
fn obstructed_companion_is_impossible() {
    let (code, out, _) = call(&["decompose", "--field", "3", "--matrix", OBSTRUCTED]);
    assert_eq!(code, EXIT_IMPOSSIBLE);
    assert!(out.starts_with(HEADER));
    assert_eq!(value(&out, "outcome"), Some("impossible"));
    assert_eq!(value(&out, "evidence"), Some("exhaustive"));
    assert_eq!(value(&out, "checks"), Some("pass"));
}

#[test]
fn random_gf5_matrix_decomposes_and_verifies() {
    let m = "1 2 3 4 0 1 2; 3 3 0 1 4 2 2; 0 0 1 2 3 4 0; 4 1 1 0 2 3 1; 2 2 2 2 0 0 1; 1 0 4 3 2 1 0; 0 3 0 3 0 3 4";
    let (code, out, _) = call(&["decompose", "--field", "5", "--matrix", m]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert_eq!(value(&out, "outcome"), Some("decomposed"));
    assert_eq!(value(&out, "checks"), Some("pass"));

    let dir = std::env::temp_dir().join(format!("sqz-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.txt");
    std::fs::write(&path, &out).unwrap();
    let (code, verified, err) = call(&["verify", "--input", path.to_str().unwrap()]);
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(code, EXIT_OK, "{verified}{err}");
    assert_eq!(value(&verified, "checks"), Some("pass"));
}

#[test]
fn verify_rejects_tampered_report() {
    let (_, out, _) = call(&["decompose", "--field", "5", "--matrix", "1 1; 0 1"]);
    let m_block = out.find("M =").unwrap();
    let mut tampered = out.clone();
    let tail = tampered.split_off(m_block);
    let tail = tail.replacen("\n0 ", "\n1 ", 1);
    tampered.push_str(&tail);
    assert_ne!(tampered, out);
    let dir = std::env::temp_dir().join(format!("sqz-cli-t-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.txt");
    std::fs::write(&path, &tampered).unwrap();
    let (code, verified, _) = call(&["verify", "--input", path.to_str().unwrap()]);
    std::fs::remove_dir_all(&dir).unwrap();
    assert_ne!(code, EXIT_OK, "{tampered}\n{verified}");
}

#[test]
fn zero_one_by_one() {
    let (code, out, _) = call(&["decompose", "--field", "3", "--matrix", "0", "--format", "kv"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(value(&out, "D"), Some("0"));
    assert_eq!(value(&out, "M"), Some("0"));
}

#[test]
fn obstruction_check_needs_obstructed_input() {
    let (code, _, err) = call(&["obstruction-check", "--field", "3", "--matrix", "1 0 0; 0 1 0; 0 0 1"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(!err.is_empty());
    let (code, out, _) = call(&["obstruction-check", "--field", "3", "--matrix", OBSTRUCTED]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(value(&out, "polynomial").is_some());
}

#[test]
fn census_too_large_is_input_error() {
    let (code, _, err) = call(&["census", "--field", "5", "--order", "5"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("exhaustive limit"), "{err}");
}

#[test]
fn census_order_two() {
    let (code, out, _) = call(&["census", "--field", "3", "--order", "2", "--format", "kv"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("non_decomposable=0"), "{out}");
}

#[test]
fn rcf_of_identity() {
    let (code, out, _) = call(&["rcf", "--field", "3", "--matrix", "1 0; 0 1"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(value(&out, "factors"), Some("x+2, x+2"));
}

#[test]
fn output_is_deterministic() {
    let doubled = "0 0 1 0 0 0; 1 0 1 0 0 0; 0 1 1 0 0 0; 0 0 0 0 0 1; 0 0 0 1 0 1; 0 0 0 0 1 1";
    let args = ["decompose", "--field", "3", "--mode", "random", "--budget", "5000", "--seed", "7", "--matrix", doubled];
    let first = call(&args);
    assert_eq!(first.0, EXIT_IMPOSSIBLE);
    assert_eq!(value(&first.1, "evidence"), Some("randomized seed=7 candidates=5000 hits=0"));
    for threads in ["1", "3"] {
        let mut with_threads = args.to_vec();
        with_threads.extend(["--threads", threads]);
        assert_eq!(call(&with_threads), first);
    }
}

#[test]
fn bad_arguments() {
    assert_eq!(call(&["decompose", "--field", "4", "--matrix", "1"]).0, EXIT_INPUT);
    assert_eq!(call(&["decompose", "--matrix", "1"]).0, EXIT_INPUT);
    assert_eq!(call(&["decompose", "--field", "3"]).0, EXIT_INPUT);
    assert_eq!(call(&["decompose", "--field", "3", "--matrix", "1 2; 3"]).0, EXIT_INPUT);
    assert_eq!(call(&["decompose", "--field", "3", "--budget", "0", "--matrix", "1"]).0, EXIT_INPUT);
    assert_eq!(call(&["nope"]).0, EXIT_INPUT);
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("decompose"));
}
