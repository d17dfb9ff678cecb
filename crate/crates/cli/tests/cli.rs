use std::process::{Command, Output};

fn thompson(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thompson")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = thompson(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    thompson(args).status.code().expect("exit code")
}

macro_rules! golden {
    ($name:ident, $file:literal, $args:expr) => {
        #[test]
        fn $name() {
            assert_eq!(stdout(&$args), include_str!(concat!("golden/", $file)));
        }
    };
}

golden!(eval_zeta, "eval_zeta.txt", ["eval", "zeta", "1/2"]);
golden!(conjugate_case_b, "conjugate_case_b.txt", ["conjugate", "zeta", "--by", "case-b-alpha"]);
golden!(core_case_a_stages, "core_case_a_stages.txt", ["core", "kappa0", "kappa1", "--stages"]);
golden!(core_x0_x1, "core_x0_x1.dot", ["core", "x0", "x1", "--output", "dot"]);
golden!(generates_x0_x1, "generates_x0_x1.txt", ["generates", "x0", "x1"]);
golden!(generates_case_a, "generates_case_a.json", ["generates", "kappa0", "kappa1", "--output", "json"]);
golden!(pipeline_x0_zeta, "pipeline_x0_zeta.txt", ["pipeline", "x0", "zeta", "--a", "1/4"]);
golden!(repro_case_b, "repro_case_b.json", ["repro", "case-b", "--output", "json"]);
golden!(repro_all_seed42, "repro_all_seed42.txt", ["repro", "all", "--seed", "42"]);
golden!(order_torsion5, "order_torsion5.txt", ["order", "torsion:5"]);

#[test]
fn known_values() {
    assert_eq!(stdout(&["eval", "zeta", "1/4"]), "1/2\n");
    assert_eq!(stdout(&["compose", "zeta", "--with-inverse-of-self"]), "(e)->(e)\n");
}

#[test]
fn case_b_identities() {
    let x1 = stdout(&["conjugate", "zeta", "--by", "case-b-alpha"]);
    assert_eq!(x1, "(0,100,101,11)->(0,10,110,111)\n");
    assert_eq!(stdout(&["compose", "zeta", x1.trim()]), "(00,01,1)->(0,10,11)\n");
}

#[test]
fn elements_round_trip() {
    for e in ["(00,01,10,11)->(0,100,101,11)", "(0,10,11)->(10,11,0)", "(00,010,011,1)->(00,01,10,11)"] {
        assert_eq!(stdout(&["compose", e]).trim(), e);
        assert_eq!(stdout(&["inverse", stdout(&["inverse", e]).trim()]).trim(), e);
    }
    // Unreduced input is canonicalised.
    assert_eq!(stdout(&["compose", "(00,01,1)->(00,01,1)"]), "(e)->(e)\n");
}

#[test]
fn rotation_and_order() {
    assert_eq!(stdout(&["rotation", "torsion:7"]), "1/7\n");
    assert_eq!(stdout(&["order", "x0", "--order-bound", "16"]), "infinite\n");
    assert_eq!(stdout(&["order", "rot:3/8"]), "finite 8\n");
}

#[test]
fn core_of_identity() {
    assert_eq!(stdout(&["core", "identity"]), "digraph core {\n  0;\n}\n");
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["eval", "(0,1)->(0)", "1/2"]), 2);
    assert_eq!(code(&["eval", "zeta", "1/3"]), 2);
    assert_eq!(code(&["rotation", "x0"]), 3);
    assert_eq!(code(&["core", "torsion:3"]), 3);
    assert_eq!(code(&["eval", "zeta", "1/2", "--output", "dot"]), 2);
    assert_eq!(code(&["repro", "no-such-suite"]), 2);
    assert_eq!(code(&["repro", "case-b"]), 0);
}

#[test]
fn json_reports_carry_the_schema() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&["eval", "zeta", "1/2", "--output", "json"])).unwrap();
    assert_eq!(v["schema"], "thompson-repro/1");
    assert_eq!(v["image"], "5/8");
    let r: serde_json::Value = serde_json::from_str(&stdout(&["repro", "case-b", "--output", "json"])).unwrap();
    assert_eq!(r["schema"], "thompson-repro/1");
    assert_eq!(r["passed"], true);
}

#[test]
fn repro_is_byte_stable() {
    let a = thompson(&["repro", "all", "--seed", "42"]);
    let b = thompson(&["repro", "all", "--seed", "42"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(a.status.success());
}
