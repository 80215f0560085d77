use std::process::{Command, Output};

use weaken_core::parse::{parse_ctx, parse_subst, parse_term, parse_ty};
use weaken_core::{check_subst, check_term};

fn weaken(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weaken"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = weaken(args);
    assert!(
        out.status.success(),
        "{args:?} exited {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    stdout(&out).trim_end().to_string()
}

#[test]
fn trace_of_church_two_body() {
    let text = ok(&["trace", "(\\ (#^ (#^ #)))", "id , (\\ suc #)"]);
    let lines: Vec<serde_json::Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let rules: Vec<&str> = lines[..lines.len() - 1]
        .iter()
        .map(|l| l["rule"].as_str().unwrap())
        .collect();
    assert_eq!(&rules[..5], ["inst-5", "inst-6", "inst-4", "inst-2", "inst-3"]);
    for l in &lines[..lines.len() - 1] {
        assert!(l["before"].is_string() && l["after"].is_string());
    }
    assert_eq!(
        lines.last().unwrap()["result"],
        "\\ ((\\ suc #)^ ((\\ suc #)^ #))"
    );
}

#[test]
fn trace_without_substitution_normalizes() {
    let text = ok(&["trace", "(\\ #) zero"]);
    assert!(text.contains("\"rule\":\"beta\""));
    assert!(text.ends_with("{\"result\":\"zero\"}"));
}

#[test]
fn unicode_aliases_are_accepted() {
    assert_eq!(
        ok(&["subst", "ƛ (●↑ · (●↑ · ●))", "id ▷ ƛ suc ●"]),
        "\\ ((\\ suc #)^ ((\\ suc #)^ #))"
    );
}

#[test]
fn equiv_exit_codes() {
    assert!(weaken(&["equiv", "#^^ (#^) #", "(#^ #)^ #"]).status.success());
    let out = weaken(&["equiv", "#^", "#", "--ctx", "[N, N]", "--ty", "N"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("not equivalent"));
}

#[test]
fn domain_errors_exit_one() {
    let out = weaken(&["check", "\\ (# #"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("1:7"));
    let out = weaken(&["check", "zero", "--ty", "N -> N"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("type mismatch at root"));
    let out = weaken(&["embed", "λ. 3", "--ctx", "[N]"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(weaken(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(weaken(&["normalize", "zero", "--step-limit", "0"]).status.code(), Some(2));
    assert_eq!(weaken(&["subst", "zero"]).status.code(), Some(2));
}

#[test]
fn check_prints_judgements() {
    assert_eq!(
        ok(&["check", "#^^ #^ #"]),
        "[N -> N -> N, N, N] |- #^^ #^ # : N"
    );
    assert_eq!(
        ok(&["check", "--subst", "id^^ , # , #^", "--src", "[N, N -> N]"]),
        "id^^ , # , #^ : [N, N -> N] |= [N -> N, N]"
    );
}

#[test]
fn outputs_reparse_and_recheck() {
    let out = weaken(&[
        "subst", "\\ (#^ (#^ #))", "id , \\ suc #", "--json",
    ]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let ctx = parse_ctx(doc["ctx"].as_str().unwrap()).unwrap();
    let ty = parse_ty(doc["ty"].as_str().unwrap()).unwrap();
    let term = parse_term(doc["term"].as_str().unwrap()).unwrap();
    assert!(check_term(&ctx, &ty, &term).is_ok());

    let out = weaken(&["compose", "id^ , #", "id , zero", "--ctx", "[N]", "--json"]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let s = parse_subst(doc["subst"].as_str().unwrap()).unwrap();
    let src = parse_ctx(doc["src"].as_str().unwrap()).unwrap();
    let dst = parse_ctx(doc["dst"].as_str().unwrap()).unwrap();
    assert!(check_subst(&src, &dst, &s).is_ok());

    let normal = ok(&["normalize", "(\\ \\ #^ (#^ #)) (\\ suc #)"]);
    assert_eq!(normal, "\\ suc (suc #)");
    assert_eq!(ok(&["normalize", &normal]), normal);
}

#[test]
fn fused_and_sequential_instantiation_agree() {
    let args = ["subst", "\\ #^ (suc #)", "id^ , #", "id , \\ suc #", "--ctx", "[N -> N]"];
    let plain = ok(&args);
    let mut fused = args.to_vec();
    fused.push("--fuse");
    assert_eq!(ok(&fused), plain);
    assert_eq!(plain, "\\ ((\\ suc #)^ (suc #))");
}

#[test]
fn compose_examples() {
    assert_eq!(ok(&["compose", "id", "id , zero"]), "id , zero");
    assert_eq!(ok(&["compose", "id^ ; id , zero"]), "id");
}

#[test]
fn erase_and_embed_round_trip() {
    assert_eq!(ok(&["erase", "(#^ #)^ #"]), "2 1 0");
    assert_eq!(ok(&["embed", "2 1 0"]), "#^^ #^ #");
    assert_eq!(ok(&["embed", "λ. λ. 1 (1 0)"]), "\\ (\\ (#^ (#^ #)))");
    assert_eq!(ok(&["embed", "zero"]), "zero");
}

#[test]
fn arguments_may_be_files() {
    let dir = std::env::temp_dir().join(format!("weaken-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("two.lam");
    std::fs::write(&path, "\\ \\ #^ (#^ #)\n").unwrap();
    let out = ok(&["check", path.to_str().unwrap()]);
    assert_eq!(out, "[] |- \\ (\\ (#^ (#^ #))) : (N -> N) -> N -> N");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn props_json_is_stable() {
    let args = ["props", "--seed", "5", "--cases", "30", "--size", "20", "--json"];
    let a = ok(&args);
    let b = ok(&args);
    assert_eq!(a, b);
    let doc: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(doc["seed"], 5);
    assert_eq!(doc["laws"].as_array().unwrap().len(), weaken_core::laws::LAWS.len());
    assert_eq!(doc["laws"][0]["failures"], 0);
}

#[test]
fn props_rejects_unknown_laws() {
    assert_eq!(weaken(&["props", "--law", "nope"]).status.code(), Some(1));
    let single = ok(&["props", "--law", "fusion", "--cases", "10"]);
    assert!(single.contains("fusion"));
    assert!(!single.contains("assoc"));
}
