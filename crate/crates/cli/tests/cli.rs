use std::process::{Command, Output};

use franel::suite::run_check;

fn franel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_franel")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn compute_franel() {
    let o = franel(&["compute", "--seq", "franel", "--n", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1 2 10 56 346 2252 15184\n");
}

#[test]
fn compute_other_sequences() {
    let o = franel(&["compute", "--seq", "apery", "--n", "3"]);
    assert_eq!(stdout(&o), "1 5 73 1445\n");
    let o = franel(&["compute", "--seq", "genfranel", "--r", "2", "--n", "4"]);
    assert_eq!(stdout(&o), "1 2 6 20 70\n");
    let o = franel(&["compute", "--seq", "fpoly", "--x", "1", "--n", "4"]);
    assert_eq!(stdout(&o), "1 2 10 56 346\n");
    let o = franel(&["compute", "--seq", "franel", "--n", "4", "--primes", "5..5", "--mod-exp", "3"]);
    assert_eq!(stdout(&o), "p=5: 1 2 10 56 96\n");
    let o = franel(&["compute", "--seq", "fpoly", "--n", "4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_row_matches_library() {
    let o = franel(&["verify", "--id", "C15", "--primes", "5..5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let row = &rows.as_array().unwrap()[0];
    let lib = run_check("C15", 5).unwrap();
    assert_eq!(row["check_id"], lib.check_id.as_str());
    assert_eq!(row["class"], lib.class.as_str());
    assert_eq!(row["prime"], lib.prime);
    assert_eq!(row["modulus_exponent"], lib.modulus_exponent);
    assert_eq!(row["lhs"], lib.lhs_string().as_str());
    assert_eq!(row["rhs"], lib.rhs_string().as_str());
    assert_eq!(row["pass"], lib.pass);
    assert_eq!(row["params"], serde_json::json!({}));
}

#[test]
fn json_schema_fields() {
    let o = franel(&["verify", "--id", "T14_r,C112_r", "--primes", "5..13", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for row in rows.as_array().unwrap() {
        let obj = row.as_object().unwrap();
        for key in ["check_id", "class", "prime", "modulus_exponent", "params", "lhs", "rhs", "pass"] {
            assert!(obj.contains_key(key), "{key} missing in {row}");
        }
        assert!(row["lhs"].as_str().unwrap().parse::<u64>().is_ok());
        assert!(row["params"].is_object());
    }
}

#[test]
fn worker_count_does_not_change_output() {
    let base = ["verify", "--primes", "5..199", "--format", "json", "--workers"];
    let one = franel(&[&base[..], &["1"]].concat());
    let eight = franel(&[&base[..], &["8"]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, eight.stdout);
    let csv1 = franel(&["verify", "--primes", "5..31", "--format", "csv", "--workers", "1"]);
    let csv3 = franel(&["verify", "--primes", "5..31", "--format", "csv", "--workers", "3"]);
    assert_eq!(csv1.stdout, csv3.stdout);
    assert!(stdout(&csv1).starts_with("check_id,class,prime,modulus_exponent,params,lhs,rhs,pass"));
}

#[test]
fn eval_exit_codes() {
    let good = franel(&["eval", "sum(k=0..p-1,(-1)^k*f(k)) ≡ jacobi(p,3) (mod p^2)", "--primes", "5..19"]);
    assert_eq!(good.status.code(), Some(0));
    let ascii = franel(&["eval", "sum(k=0..p-1,(-1)^k*f(k)) =mod= jacobi(p,3) (mod p^2)", "--primes", "5..19"]);
    assert_eq!(ascii.status.code(), Some(0));
    let wrong = franel(&["eval", "sum(k=0..p-1,(-1)^k*f(k)) ≡ 1 (mod p^2)", "--primes", "5..23", "--format", "json"]);
    assert_eq!(wrong.status.code(), Some(1));
    let rows: serde_json::Value = serde_json::from_str(&stdout(&wrong)).unwrap();
    for row in rows.as_array().unwrap() {
        let p = row["prime"].as_u64().unwrap();
        assert_eq!(row["pass"].as_bool().unwrap(), p % 3 == 1, "p = {p}");
        assert_eq!(row["class"], "expression");
    }
    let syntax = franel(&["eval", "sum(k=0..p, f(k)", "--primes", "5..7"]);
    assert_eq!(syntax.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&syntax.stderr).contains("1:17"));
    let value = franel(&["eval", "binom(2*3, 3)", "--primes", "23..23"]);
    assert_eq!(stdout(&value), "p=23 mod p^1: 20\n");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(franel(&["verify", "--primes", "9..5"]).status.code(), Some(2));
    assert_eq!(franel(&["verify", "--primes", "4..4"]).status.code(), Some(2));
    assert_eq!(franel(&["verify", "--primes", "5..7", "--id", "nope"]).status.code(), Some(2));
    assert_eq!(franel(&["verify", "--primes", "5..7", "--workers", "0"]).status.code(), Some(2));
    assert_eq!(franel(&["verify", "--primes", "5..7", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(franel(&["frobnicate"]).status.code(), Some(2));
    let o = franel(&["verify", "--primes", "5..7", "--id", "C15", "--out", "/nonexistent/dir/out.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn out_file_receives_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    let o = franel(&["verify", "--id", "C15", "--primes", "5..7", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(path).unwrap();
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn scans() {
    let o = franel(&["scan-ar", "--r", "1,2", "--primes", "5..199"]);
    assert_eq!(stdout(&o), "a_1 = -1 (odd, 44 primes)\na_2 = 5 (odd, 44 primes)\n");
    let o = franel(&["cornacchia", "--primes", "7..13", "--format", "json"]);
    let rows: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rows[0], serde_json::json!({"p": 7, "x": 2, "y": 1}));
    assert_eq!(rows[1], serde_json::json!({"p": 11, "x": null, "y": null}));
    let o = franel(&["check-3adic", "--n", "100"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 negative margins"));
    let o = franel(&["identities"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 8);
}
