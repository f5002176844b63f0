use std::process::Command;

use quasishuffle::cli::{ArtifactValue, CaseReport, Verdict, CASE_NAMES, REPORT_SCHEMA};
use quasishuffle::laurent::displayed_phi_powers;
use quasishuffle::ncpoly::{NCPoly, Rules};
use quasishuffle::reduction::{displayed_burgers, PdeSystem};
use quasishuffle::scalar::{CycScalar, Rational};

fn qsh(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qsh")).args(args).output().expect("qsh runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn exit_codes() {
    assert_eq!(qsh(&["expand", "4*(P^3 o P) - (P o P o P o P)"]).0, 0);
    assert_eq!(qsh(&["expand", "P o P . P"]).0, 3);
    assert_eq!(qsh(&["run", "no-such-case"]).0, 3);
    assert_eq!(qsh(&["run", "burgers", "--mode", "abstract"]).0, 3);
    assert_eq!(qsh(&["--bogus"]).0, 3);
    assert_eq!(qsh(&["run", "kp-id", "--depth", "2"]).0, 2);
    assert_eq!(qsh(&["run", "kp-id"]).0, 0);
    assert_eq!(qsh(&["run", "v2v-chain"]).0, 1);
    assert_eq!(qsh(&["--help"]).0, 0);
}

#[test]
fn expand_normal_form() {
    let (code, out, _) = qsh(&["expand", "4*(P^3 o P) - (P o P o P o P)"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "3*(4) - 6*(2,2) - 12*(1,1,2) - 12*(1,2,1) - 12*(2,1,1) - 24*(1,1,1,1)");
    let (_, _, err) = qsh(&["expand", "P o P . P"]);
    assert!(err.contains("6"), "{err}");
}

#[test]
fn case_list() {
    let (_, out, _) = qsh(&["cases"]);
    assert_eq!(out.lines().collect::<Vec<_>>(), CASE_NAMES.to_vec());
}

#[test]
fn json_report_round_trips_through_the_polynomial_parser() {
    let (code, out, _) = qsh(&["run", "phi-p2-p3", "--format", "json"]);
    assert_eq!(code, 0);
    let r = CaseReport::from_json(&out).unwrap();
    assert_eq!(r.schema, REPORT_SCHEMA);
    assert_eq!(r.verdict, Verdict::Pass);
    let shown = displayed_phi_powers().unwrap();
    for (name, want) in ["Phi(P)", "Phi(P^2)", "Phi(P^3)"].iter().zip(&shown) {
        let Some(ArtifactValue::Poly { text, ast, .. }) = r.artifact(name) else { panic!("{name} missing") };
        let from_ast = NCPoly::<Rational>::from_json(ast, Rules::Free).unwrap();
        assert_eq!(&from_ast, want, "{name}");
        assert_eq!(&from_ast.to_string(), text);
    }
}

#[test]
fn json_pde_round_trips() {
    let (code, out, _) = qsh(&["run", "burgers", "--format", "json"]);
    assert_eq!(code, 0);
    let r = CaseReport::from_json(&out).unwrap();
    let pde = r
        .artifacts
        .iter()
        .find_map(|a| match &a.value {
            ArtifactValue::Pde { ast, .. } => Some(ast.clone()),
            _ => None,
        })
        .expect("a pde artifact");
    let sys = PdeSystem::<CycScalar>::from_json(&pde, Rules::Commutative).unwrap();
    let want = displayed_burgers(Rules::Commutative).unwrap();
    assert_eq!(sys.equations.iter().map(|e| e.expanded()).collect::<Vec<_>>(), want);
}

#[test]
fn output_is_deterministic() {
    for args in [&["run", "kp-flow", "--format", "json"][..], &["run", "akns-to-kp", "--format", "latex"], &["phi", "--target", "akns", "--mode", "matrix2", "P^2 o P"]] {
        let a = qsh(args);
        let b = qsh(args);
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn golden_file_matches() {
    let (code, out, _) = qsh(&["golden"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("match"));
}
