use std::fs;
use std::path::PathBuf;
use std::process::Command;
use std::sync::atomic::{AtomicUsize, Ordering};

use nfdiv_cli::{run, EXIT_FINDING, EXIT_OK, EXIT_RESOURCE, EXIT_USAGE};

const CUBIC: &str = "poly:-1,-2,1,1;disc=49;galois=true";

fn tmp(name: &str) -> PathBuf {
    static N: AtomicUsize = AtomicUsize::new(0);
    let i = N.fetch_add(1, Ordering::SeqCst);
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(format!("cli-{}-{i}-{name}", std::process::id()))
}

/// Runs in-process with `--out`, returns the status and the file.
fn nfdiv(args: &[&str]) -> (i32, String) {
    let out = tmp("out.csv");
    let mut full = vec!["nfdiv".to_string()];
    full.extend(args.iter().map(|s| s.to_string()));
    full.push("--out".into());
    full.push(out.display().to_string());
    let code = run(full);
    (code, fs::read_to_string(&out).unwrap_or_default())
}

fn overrides_file() -> String {
    let p = tmp("overrides.txt");
    fs::write(&p, "# cubic, totally ramified at 7\n7 3,1,1\n").unwrap();
    p.display().to_string()
}

fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).filter(|l| !l.starts_with('#')).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn note<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines().find_map(|l| l.strip_prefix(&format!("# {key}=")))
}

fn assert_trailer(text: &str, header: &str) {
    assert_eq!(text.lines().next(), Some(header));
    let last = text.lines().last().unwrap();
    let hash = last.strip_prefix("# config_hash=").expect("hash line last");
    assert_eq!(hash.len(), 64);
}

#[test]
fn gaussian_table_at_ten() {
    let (code, text) = nfdiv(&["sum", "--fn", "a@quad:-4", "--xmax", "10"]);
    assert_eq!(code, EXIT_OK);
    assert_trailer(&text, "x,S,M,delta,ratio");
    let r = rows(&text);
    let last = r.last().unwrap();
    assert_eq!((last[0].as_str(), last[1].as_str()), ("10", "9"));
    let xs: Vec<u64> = r.iter().map(|r| r[0].parse().unwrap()).collect();
    assert!(xs.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn sum_ratios_near_one() {
    for (f, x) in [("sigma:1@quad:-4", "10^6"), ("a@quad:-4", "10^5")] {
        let (code, text) = nfdiv(&["sum", "--fn", f, "--xmax", x]);
        assert_eq!(code, EXIT_OK);
        let ratio: f64 = rows(&text).last().unwrap()[4].parse().unwrap();
        assert!((ratio - 1.0).abs() < 0.01, "{f}: {ratio}");
        assert!(note(&text, "note").is_none());
    }
}

#[test]
fn leading_only_reports_are_labelled() {
    let ov = overrides_file();
    let (code, text) = nfdiv(&["sum", "--fn", &format!("tau2:2@{CUBIC}"), "--xmax", "2000", "--overrides", &ov]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(note(&text, "note"), Some("Delta up to lower-order main terms"));
}

#[test]
fn moment_hooks() {
    let (code, text) = nfdiv(&["moment", "--fn", "a@quad:-4", "--xmax", "5000", "--main", "exact"]);
    assert_eq!(code, EXIT_OK);
    assert_trailer(&text, "X,moment,fitted_exponent_so_far");
    for r in rows(&text) {
        assert_eq!(r[1].parse::<f64>().unwrap(), 0.0);
    }
    let (_, text) = nfdiv(&["moment", "--fn", "one", "--xmax", "10", "--main", "identity", "--points", "1"]);
    let r = rows(&text);
    assert_eq!(r.len(), 1);
    assert!((r[0][1].parse::<f64>().unwrap() - 3.0).abs() < 1e-12);
}

#[test]
fn useries_cubic_and_pair() {
    let ov = overrides_file();
    let (code, text) = nfdiv(&["useries", "--fn", &format!("tau2:2@{CUBIC}"), "--nmax", "10^4", "--overrides", &ov]);
    assert_eq!(code, EXIT_OK);
    assert_trailer(&text, "n,numerator,denominator");
    assert_eq!(note(&text, "m"), Some("7"));
    assert_eq!(note(&text, "failing_primes"), Some("7"));
    assert_eq!(rows(&text).len(), 10_000);
    assert_eq!(rows(&text)[0], vec!["1", "1", "1"]);

    let (code, text) = nfdiv(&["useries", "--fn", "a^2@quad:-4 * a^2@quad:5", "--nmax", "3000"]);
    assert_eq!(code, EXIT_OK);
    for p in note(&text, "failing_primes").unwrap().split_whitespace() {
        assert!(p == "2" || p == "5", "{p}");
    }
}

#[test]
fn useries_power_hook_is_delta() {
    let (code, text) = nfdiv(&["useries", "--fn", "a^2@quad:-4 * a@quad:5", "--nmax", "500", "--zpower"]);
    assert_eq!(code, EXIT_OK);
    for r in rows(&text) {
        let expected = if r[0] == "1" { "1" } else { "0" };
        assert_eq!((r[1].as_str(), r[2].as_str()), (expected, "1"), "n = {}", r[0]);
    }
    assert_eq!(note(&text, "failing_primes"), Some(""));
}

#[test]
fn useries_flags_unexpected_primes() {
    // tau2:2 over Q(i): tau_2(p^2) = 2 at inert p while a(p) = 0
    let (code, text) = nfdiv(&["useries", "--fn", "tau2:2@quad:-4", "--nmax", "200"]);
    assert_eq!(code, EXIT_FINDING);
    assert!(note(&text, "failing_primes").unwrap().split_whitespace().any(|p| p == "3"));
}

#[test]
fn constants_table() {
    let (code, text) = nfdiv(&["constants", "--fields", "quad:-4", "quad:5"]);
    assert_eq!(code, EXIT_OK);
    assert_trailer(&text, "name,field,value,error,provenance");
    let r = rows(&text);
    let get = |field: &str| r.iter().find(|r| r[0] == "residue" && r[1] == field).unwrap()[2].parse::<f64>().unwrap();
    assert!((get("quad:-4") - 0.785_398_163_4).abs() < 1e-10);
    assert!((get("quad:5") - 0.430_408_941_0).abs() < 1e-10);
    assert!(r.iter().all(|r| r[4] == "closed-form"));
}

#[test]
fn constants_fallback_is_self_consistent() {
    let (code, text) = nfdiv(&["constants", "--fields", "quad:-4", "--fallback", "--nmax", "2^18"]);
    assert_eq!(code, EXIT_OK);
    let r = rows(&text);
    let closed = &r.iter().find(|r| r[0] == "residue").unwrap();
    let fb = &r.iter().find(|r| r[0] == "residue_fallback").unwrap();
    assert_eq!(fb[4], "fallback");
    let diff = (closed[2].parse::<f64>().unwrap() - fb[2].parse::<f64>().unwrap()).abs();
    assert!(diff <= fb[3].parse::<f64>().unwrap(), "{closed:?} {fb:?}");
}

#[test]
fn constants_for_a_pair() {
    let (_, text) = nfdiv(&["constants", "--fn", "sigma:1@quad:-4 * sigma:1@quad:5"]);
    let main = rows(&text).into_iter().find(|r| r[0] == "main_coefficient").unwrap();
    let v: f64 = main[main.len() - 3].parse().unwrap();
    assert!((v - 0.333_081_632_99).abs() < 1e-10);
}

#[test]
fn verify_default_suite() {
    let (code, text) = nfdiv(&["verify", "--nmax", "10^4"]);
    assert_eq!(code, EXIT_OK);
    assert_trailer(&text, "section,check,field,prime,lhs,rhs");
    assert_eq!(note(&text, "unexpected"), Some("0"));
    assert_ne!(note(&text, "exceptional"), Some("0"));
    // every exceptional finding sits at a ramified prime
    for line in text.lines().filter(|l| l.starts_with("exceptional,")) {
        let p: u64 = line.rsplit(',').nth(2).unwrap().parse().unwrap();
        assert!([2, 3, 5, 7].contains(&p), "{line}");
    }
}

#[test]
fn verify_negative_control() {
    let (code, text) = nfdiv(&["verify", "--fields", "quad:-4", "--nmax", "1000"]);
    assert_eq!(code, EXIT_OK);
    let inert: Vec<u64> = nfdiv::primes::primes_up_to(1000).into_iter().filter(|p| p % 4 == 3).collect();
    let failed: Vec<u64> = text
        .lines()
        .filter(|l| l.starts_with("expected-failure,tau(p^2) k=2,"))
        .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    assert_eq!(failed, inert);
}

#[test]
fn verify_rejects_shared_ramification() {
    let out = Command::new(env!("CARGO_BIN_EXE_nfdiv"))
        .args(["verify", "--fields", "quad:-4", "poly:-5,0,1;disc=20;galois=true", "--nmax", "100"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("not coprime"), "{err}");
}

#[test]
fn config_file_and_flag_precedence() {
    let cfg = tmp("run.cfg");
    fs::write(&cfg, "# Gaussian ideals\nfn = a@quad:-4\nxmax = 1000\ngrid-ratio = 2\n").unwrap();
    let c = cfg.display().to_string();
    let (code, text) = nfdiv(&["sum", "--config", &c, "--xmax", "10"]);
    assert_eq!(code, EXIT_OK);
    let xs: Vec<String> = rows(&text).into_iter().map(|r| r[0].clone()).collect();
    assert_eq!(xs, ["1", "2", "4", "8", "10"]);
    // the hash follows the effective config, not the file
    let (_, direct) = nfdiv(&["sum", "--fn", "a@quad:-4", "--xmax", "10", "--grid-ratio", "2"]);
    assert_eq!(text, direct);
}

#[test]
fn config_errors_have_positions() {
    let cfg = tmp("bad.cfg");
    fs::write(&cfg, "fn = a@quad:-4\n\nxmax = lots\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_nfdiv")).args(["sum", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3, column 8"), "{err}");

    let (code, _) = nfdiv(&["sum", "--fn", "a@quad:x", "--xmax", "10"]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _) = nfdiv(&["sum", "--fn", "a@quad:-4"]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _) = nfdiv(&["useries", "--fn", "a@quad:-4", "--nmax", "10^6"]);
    assert_eq!(code, EXIT_USAGE);
    assert_eq!(run(["nfdiv", "frobnicate"]), EXIT_USAGE);
}

#[test]
fn memory_budget_is_a_resource_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_nfdiv"))
        .args(["sum", "--fn", "a@quad:-4", "--xmax", "10^6", "--mem-limit", "1M"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_RESOURCE));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("required") && err.contains("1048576"), "{err}");
}

#[test]
fn missing_override_is_a_config_error() {
    let (code, _) = nfdiv(&["split", "--fields", CUBIC, "--prime", "7"]);
    assert_eq!(code, EXIT_USAGE);
    let ov = overrides_file();
    let (code, text) = nfdiv(&["split", "--fields", CUBIC, "quad:-4", "--prime", "7", "--overrides", &ov]);
    assert_eq!(code, EXIT_OK);
    assert_trailer(&text, "field,p,splitting,e,f,g,a_p");
    assert!(text.contains(",7,\"3,1,1\",3,1,1,1\n"));
    assert!(text.contains("quad:-4,7,\"1,2,1\",1,2,1,0\n"));
}

#[test]
fn field_info_lists_ramification() {
    let (code, text) = nfdiv(&["field-info", "--fields", "cyclo:12"]);
    assert_eq!(code, EXIT_OK);
    assert!(text.contains("cyclo:12,ramified_primes,2 3\n"));
    assert!(text.contains("cyclo:12,family,cyclotomic t=12\n"));
}

#[test]
fn output_is_thread_count_independent() {
    let a = nfdiv(&["sum", "--fn", "sigma:1@quad:-4", "--xmax", "200000", "--threads", "1"]);
    let b = nfdiv(&["sum", "--fn", "sigma:1@quad:-4", "--xmax", "200000", "--threads", "4"]);
    assert_eq!(a, b);
    let a = nfdiv(&["moment", "--fn", "a@quad:-4", "--xmax", "50000", "--threads", "1"]);
    let b = nfdiv(&["moment", "--fn", "a@quad:-4", "--xmax", "50000", "--threads", "3"]);
    assert_eq!(a, b);
}
