use std::process::{Command, Output};

use algcoeff::arith::{BigIndex, PrimeField};
use algcoeff::oracle::catalan_mod_p;

const QUARTIC: &str = "-x+(1+x)*y-(1+x^2)*y^2-y^3+(1+x)*y^4";
const CUBIC: &str = "x-(1+x)*y+x^2*y^2+(1+x)*y^3";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_algcoeff"))
        .args(args)
        .output()
        .expect("spawn algcoeff")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

#[test]
fn coeff_examples() {
    assert_eq!(stdout(&["coeff", "-p", "11", "-E", QUARTIC, "-N", "6"]), "5\n");
    assert_eq!(stdout(&["coeff", "-p", "5", "-E", "x+y-y^3", "-N", "0"]), "0\n");
    let lucas = catalan_mod_p(&BigIndex::parse("10^50").unwrap(), PrimeField::new(7).unwrap());
    for method in ["auto", "diagonal", "diagonal-fast", "mahler"] {
        let got = stdout(&["coeff", "-p", "7", "-E", "y-x-y^2", "-N", "10^50", "--method", method]);
        assert_eq!(got, format!("{}\n", lucas.value()), "{method}");
    }
}

#[test]
fn auxiliary_subcommands() {
    let text = stdout(&["mahler-eq", "-p", "5", "-E", "x+y-y^3"]);
    assert_eq!(text, "K = 2\nc_0 = x^4 + 4*x^6 + 4*x^8\nc_1 = 4 + 4*x^4 + 2*x^6\nc_2 = 1\n");
    let text = stdout(&["furstenberg", "-p", "7", "-E", CUBIC]);
    assert!(text.contains("\nd_x = 2\nd_y = 4\n"), "{text}");
    assert_eq!(
        stdout(&["expand", "-p", "11", "-n", "12", "-E", QUARTIC]),
        "0 1 0 1 1 3 5 2 4 10 10 9\n"
    );
}

#[test]
fn invalid_input_exits_with_2() {
    assert_eq!(code(&["coeff", "-p", "4", "-E", "x+y", "-N", "1"]), 2);
    assert_eq!(code(&["coeff", "-p", "5", "-E", "x+y^2", "-N", "1"]), 2);
    assert_eq!(code(&["coeff", "-p", "5", "-E", "x+y-y^3", "-N", "-1"]), 2);
    assert_eq!(code(&["coeff", "-p", "5", "-E", "x+y-(y^3", "-N", "1"]), 2);
    assert_eq!(code(&["coeff", "-p", "5", "-E", "x+y^99999999", "-N", "1"]), 2);
    assert_eq!(code(&["coeff", "-p", "5", "-E", "0", "-N", "1"]), 2);
    assert_eq!(code(&["mahler-eq", "-p", "5", "-E", "y-x"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    let out = run(&["coeff", "-p", "5", "-E", "x+y-(y^3", "-N", "1"]);
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn output_is_deterministic() {
    let args = ["bench", "--primes", "7,11", "--digits", "20", "--methods", "diagonal,diagonal-fast", "--seed", "5"];
    let strip = |s: String| -> Vec<String> {
        // drop the timing columns
        s.lines()
            .map(|l| {
                let f: Vec<&str> = l.split(',').collect();
                format!("{},{},{},{},{},{}", f[0], f[1], f[2], f[3], f[4], f[7])
            })
            .collect()
    };
    let a = stdout(&args);
    assert!(a.starts_with("method,p,d,h,ndigits,pre_ms,query_ms,ops\n"));
    assert_eq!(a.lines().count(), 5);
    assert_eq!(strip(a), strip(stdout(&args)));
    let args = ["linrep", "-p", "7", "-E", CUBIC];
    assert_eq!(stdout(&args), stdout(&args));
}

#[test]
fn linrep_to_file() {
    let dir = std::env::temp_dir().join(format!("algcoeff-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("rep.json");
    let path_s = path.to_str().unwrap();
    stdout(&["linrep", "-p", "7", "-E", CUBIC, "-N", "100", "--out", path_s]);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["p"], 7);
    assert_eq!(v["dx"], 2);
    assert_eq!(v["dy"], 4);
    let dim = 3 * 5;
    assert_eq!(v["L"].as_array().unwrap().len(), dim);
    assert_eq!(v["C"].as_array().unwrap().len(), dim);
    // 100 = (2, 0, 2) in base 7
    let a = v["A"].as_object().unwrap();
    assert_eq!(a.keys().collect::<Vec<_>>(), ["0", "2"]);
    let rows = a["2"].as_array().unwrap();
    assert_eq!(rows.len(), dim);
    assert!(rows.iter().all(|r| r.as_array().unwrap().len() == dim));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn selfcheck_reports_counts() {
    let out = run(&["selfcheck", "--instances", "3", "--seed", "1", "--max-n", "100"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("instances: 3"), "{text}");
    let expected = if text.contains("failed: 0 ") { 0 } else { 3 };
    assert_eq!(out.status.code(), Some(expected));
    assert!(text.contains("diagonal-fast"));
}
