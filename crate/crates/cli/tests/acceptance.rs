//! Acceptance criteria, one pass/fail line each. Runs as a plain binary so
//! the lines are printed whether or not a criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use weaken_core::classical::erase_term;
use weaken_core::engine;
use weaken_core::laws::{run_laws, Report, SuiteConfig};
use weaken_core::parse::parse_term;
use weaken_core::{check_term, Ctx, Ty, TypedTerm};

const BIN: &str = env!("CARGO_BIN_EXE_weaken");

fn fun() -> Ty {
    Ty::arrow(Ty::Nat, Ty::Nat)
}

fn typed(ctx: &[Ty], ty: Ty, text: &str) -> TypedTerm {
    check_term(&Ctx::new(ctx.to_vec()), &ty, &parse_term(text).unwrap()).unwrap()
}

type Verdict = Result<String, String>;

fn suite_failures(report: &Report, laws: &[&str]) -> Verdict {
    let mut detail = Vec::new();
    for law in laws {
        let r = report.law(law).ok_or(format!("{law} did not run"))?;
        if r.failures > 0 {
            let c = r.counterexample.as_ref().map(|c| c.to_string()).unwrap_or_default();
            return Err(format!("{law}: {} of {} failed\n{c}", r.failures, r.cases));
        }
        detail.push(format!("{law} {}/{}", r.cases, r.cases));
    }
    Ok(detail.join(", "))
}

fn golden_instantiation() -> Verdict {
    let start = Instant::now();
    let body = typed(&[fun()], fun(), "\\ (#^ (#^ #))");
    let inc = typed(&[], fun(), "\\ suc #");
    let s = engine::cons(&engine::identity(&Ctx::empty()), &inc).map_err(|e| e.to_string())?;
    let mut steps = Vec::new();
    let out = engine::instantiate_traced(&body, &s, &mut steps).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let want = parse_term("\\ ((\\ suc #)^ ((\\ suc #)^ #))").unwrap();
    if out.term() != &want {
        return Err(format!("got {}", out.term()));
    }
    let rules: Vec<&str> = steps.iter().map(|s| s.rule.as_str()).collect();
    if !rules.starts_with(&["inst-5", "inst-6", "inst-4", "inst-2", "inst-3"]) {
        return Err(format!("rule sequence {rules:?}"));
    }
    if elapsed >= Duration::from_secs(1) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("{} in {elapsed:?}, rules {}", out.term(), rules.join(" ")))
}

fn golden_normalize() -> Verdict {
    let m = typed(&[], fun(), "(\\ (\\ (#^ (#^ #)))) (\\ suc #)");
    let out = engine::normalize(&m, weaken_core::DEFAULT_STEP_LIMIT).map_err(|e| e.to_string())?;
    if out.term() != &parse_term("\\ suc (suc #)").unwrap() {
        return Err(format!("normalize(two inc) = {}", out.term()));
    }
    Ok(format!("two inc normalizes to {}", out.term()))
}

fn equivalence_golden() -> Verdict {
    let (a, b, c) = (Ty::Nat, fun(), Ty::Nat);
    let ctx = [Ty::arrow(a.clone(), Ty::arrow(b.clone(), c.clone())), a, b];
    let m0 = typed(&ctx, c.clone(), "#^^ (#^) #");
    let m1 = typed(&ctx, c, "(#^ #)^ #");
    if m0.term() == m1.term() {
        return Err("M0 and M1 parsed to the same term".into());
    }
    if erase_term(&m0) != erase_term(&m1) {
        return Err("erasures differ".into());
    }
    let status = Command::new(BIN)
        .args(["equiv", "#^^ (#^) #", "(#^ #)^ #"])
        .output()
        .map_err(|e| e.to_string())?;
    if !status.status.success() {
        return Err(format!("equiv exited with {:?}", status.status.code()));
    }
    let canonical = engine::normalize(&m1, 10).map_err(|e| e.to_string())?;
    if canonical.term() != m0.term() {
        return Err(format!("M1 normalizes to {}", canonical.term()));
    }
    Ok(format!("{} vs {}, equiv exit 0", m0.term(), m1.term()))
}

fn determinism() -> Verdict {
    let run = || {
        Command::new(BIN)
            .args(["props", "--seed", "1", "--cases", "1000"])
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    if !a.status.success() || !b.status.success() {
        return Err(format!(
            "props exited with {:?} and {:?}\n{}",
            a.status.code(),
            b.status.code(),
            String::from_utf8_lossy(&a.stdout)
        ));
    }
    if a.stdout != b.stdout {
        return Err("reports differ".into());
    }
    Ok(format!("{} identical bytes", a.stdout.len()))
}

fn main() -> ExitCode {
    let cfg = SuiteConfig {
        seed: 1,
        cases: 1000,
        size: 40,
    };

    let start = Instant::now();
    let fusion = run_laws(&cfg, &["fusion"]).expect("valid configuration");
    let fusion_time = start.elapsed();
    let rest = run_laws(
        &cfg,
        &[
            "left-id",
            "right-id",
            "assoc",
            "introduction",
            "double-subst",
            "commute-subst",
            "erasure-homomorphism",
            "evaluation-agreement",
        ],
    )
    .expect("valid configuration");

    let mut results: Vec<(u32, &str, Verdict)> = Vec::new();
    results.push((1, "golden instantiation of two's body", golden_instantiation()));
    results.push((2, "fusion", {
        suite_failures(&fusion, &["fusion"]).and_then(|d| {
            if fusion_time < Duration::from_secs(10) {
                Ok(format!("{d} in {fusion_time:?}"))
            } else {
                Err(format!("took {fusion_time:?}"))
            }
        })
    }));
    results.push((3, "identity and associativity", suite_failures(&rest, &["left-id", "right-id", "assoc"])));
    results.push((4, "introduction", suite_failures(&rest, &["introduction"])));
    results.push((5, "double and commuting substitution", suite_failures(&rest, &["double-subst", "commute-subst"])));
    results.push((6, "erasure homomorphism", suite_failures(&rest, &["erasure-homomorphism"])));
    results.push((7, "evaluation agreement", {
        suite_failures(&rest, &["evaluation-agreement"]).and_then(|d| {
            let cases = rest.law("evaluation-agreement").map_or(0, |l| l.cases);
            if cases < 500 {
                return Err(format!("only {cases} cases"));
            }
            golden_normalize().map(|g| format!("{d}; {g}"))
        })
    }));
    results.push((8, "M0 and M1 are equivalent", equivalence_golden()));
    results.push((9, "type preservation", {
        let checked = fusion.type_preservation.checked + rest.type_preservation.checked;
        let failed = fusion.type_preservation.failures + rest.type_preservation.failures;
        if failed == 0 && checked > 0 {
            Ok(format!("{checked} outputs rechecked"))
        } else {
            Err(format!("{failed} of {checked} outputs failed to recheck"))
        }
    }));
    results.push((10, "deterministic reports", determinism()));

    let mut ok = true;
    for (n, name, verdict) in &results {
        match verdict {
            Ok(detail) => println!("criterion {n:>2} PASS  {name}: {detail}"),
            Err(why) => {
                ok = false;
                println!("criterion {n:>2} FAIL  {name}: {why}");
            }
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
