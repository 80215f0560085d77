//! Seeded property suites for the substitution laws and the classical
//! cross-checks.
//!
//! Every case draws its inputs from a generator seeded by
//! `(seed, law, case index)`, so a report depends only on the suite
//! configuration and a failing case can be replayed on its own.

use std::fmt::{self, Write as _};

use rand::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::Serialize;

use crate::classical::{
    classical_normalize, embed, erase_subst, erase_term, psubst, ParallelSubst,
};
use crate::engine;
use crate::gen::{GenConfig, Generator};
use crate::print::print_subst_judgement;
use crate::syntax::{Ctx, Ty};
use crate::typeck::{check_subst, check_term, TypedSubst, TypedTerm};
use crate::{Error, Result, DEFAULT_STEP_LIMIT};

pub const LAWS: &[&str] = &[
    "fusion",
    "left-id",
    "right-id",
    "assoc",
    "introduction",
    "double-subst",
    "commute-subst",
    "erasure-homomorphism",
    "composition-denotation",
    "embed-section",
    "canonical-idempotence",
    "evaluation-agreement",
    "force-semantics",
    "scope-preservation",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub cases: usize,
    /// Term size bound handed to the generator.
    pub size: usize,
}

impl Default for SuiteConfig {
    fn default() -> SuiteConfig {
        SuiteConfig {
            seed: 0,
            cases: 1000,
            size: 40,
        }
    }
}

impl SuiteConfig {
    /// Cases run for `law`. Normalization is far more expensive than the
    /// structural laws, so evaluation agreement runs half as many.
    pub fn cases_for(&self, law: &str) -> usize {
        match law {
            "evaluation-agreement" => (self.cases / 2).max(self.cases.min(1)),
            _ => self.cases,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Input {
    pub name: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub law: String,
    pub case: usize,
    pub inputs: Vec<Input>,
    pub problem: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "counterexample for {} (case {}):", self.law, self.case)?;
        for input in &self.inputs {
            writeln!(f, "  {} = {}", input.name, input.value)?;
        }
        for line in self.problem.lines() {
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub law: String,
    pub cases: usize,
    pub failures: usize,
    pub counterexample: Option<Counterexample>,
}

/// Re-typechecks of every engine output produced while running the suites.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TypePreservation {
    pub checked: usize,
    pub failures: usize,
    pub counterexample: Option<Counterexample>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub seed: u64,
    pub cases: usize,
    pub size: usize,
    pub laws: Vec<LawReport>,
    pub type_preservation: TypePreservation,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.type_preservation.failures == 0 && self.laws.iter().all(|l| l.failures == 0)
    }

    pub fn law(&self, name: &str) -> Option<&LawReport> {
        self.laws.iter().find(|l| l.law == name)
    }

    pub fn counterexamples(&self) -> impl Iterator<Item = &Counterexample> {
        self.laws
            .iter()
            .filter_map(|l| l.counterexample.as_ref())
            .chain(self.type_preservation.counterexample.as_ref())
    }

    /// Plain-text rendering. Contains no timings, so equal configurations
    /// render to identical bytes.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "seed {} cases {} size {}", self.seed, self.cases, self.size);
        for law in &self.laws {
            let _ = writeln!(
                out,
                "{:<24} {:>6} cases {:>4} failures",
                law.law, law.cases, law.failures
            );
        }
        let tp = &self.type_preservation;
        let _ = writeln!(
            out,
            "{:<24} {:>6} checks {:>3} failures",
            "type-preservation", tp.checked, tp.failures
        );
        for c in self.counterexamples() {
            out.push_str(&c.to_string());
        }
        out.push_str(if self.passed() { "ok\n" } else { "FAILED\n" });
        out
    }
}

/// Runs every suite in [`LAWS`].
pub fn run(cfg: &SuiteConfig) -> Result<Report> {
    run_laws(cfg, LAWS)
}

pub fn run_laws(cfg: &SuiteConfig, laws: &[&str]) -> Result<Report> {
    if cfg.size == 0 {
        return Err(Error::InvalidConfig("size must be at least 1".into()));
    }
    let mut tally = TypePreservation::default();
    let mut reports = Vec::with_capacity(laws.len());
    for &law in laws {
        let body = lookup(law)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown law `{law}`")))?;
        let cases = cfg.cases_for(law);
        let mut report = LawReport {
            law: law.to_string(),
            cases,
            failures: 0,
            counterexample: None,
        };
        for index in 0..cases {
            let gen_cfg = GenConfig {
                seed: case_seed(cfg.seed, law, index),
                max_term_size: cfg.size,
                ..GenConfig::default()
            };
            let mut case = Case {
                g: Generator::new(gen_cfg)?,
                size: cfg.size,
                law,
                index,
                inputs: Vec::new(),
                tally: &mut tally,
            };
            if let Err(problem) = body(&mut case) {
                report.failures += 1;
                if report.counterexample.is_none() {
                    report.counterexample = Some(Counterexample {
                        law: law.to_string(),
                        case: index,
                        inputs: case.inputs,
                        problem,
                    });
                }
            }
        }
        reports.push(report);
    }
    Ok(Report {
        seed: cfg.seed,
        cases: cfg.cases,
        size: cfg.size,
        laws: reports,
        type_preservation: tally,
    })
}

fn case_seed(seed: u64, law: &str, index: usize) -> u64 {
    // FNV-1a over the law name keeps suites independent of their order
    let name = law
        .bytes()
        .fold(0xcbf2_9ce4_8422_2325_u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    let mut rng = SplitMix64::seed_from_u64(seed ^ name);
    rng.next_u64() ^ (index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

type Outcome = std::result::Result<(), String>;

struct Case<'a> {
    g: Generator,
    size: usize,
    law: &'a str,
    index: usize,
    inputs: Vec<Input>,
    tally: &'a mut TypePreservation,
}

impl Case<'_> {
    fn note(&mut self, name: &str, value: String) {
        self.inputs.push(Input {
            name: name.to_string(),
            value,
        });
    }

    fn ctx(&mut self) -> Ctx {
        self.g.gen_ctx()
    }

    fn ty(&mut self) -> Ty {
        self.g.gen_type(0)
    }

    fn term(&mut self, name: &str, ctx: &Ctx, ty: &Ty) -> std::result::Result<TypedTerm, String> {
        let raw = self.g.gen_term(ctx, ty, self.size).map_err(|e| e.to_string())?;
        let m = check_term(ctx, ty, &raw)
            .map_err(|e| format!("generated term {raw} is ill-typed: {e}"))?;
        self.note(name, m.to_string());
        Ok(m)
    }

    fn subst(&mut self, name: &str, src: &Ctx, dst: &Ctx) -> std::result::Result<TypedSubst, String> {
        let head = (self.size / 4).max(1);
        let raw = self.g.gen_subst(src, dst, head).map_err(|e| e.to_string())?;
        let s = check_subst(src, dst, &raw).map_err(|e| {
            format!("generated substitution {} is ill-typed: {e}", print_subst_judgement(&raw, src, dst))
        })?;
        self.note(name, s.to_string());
        Ok(s)
    }

    fn preserved(&mut self, what: &str, ok: bool, shown: String) -> Outcome {
        self.tally.checked += 1;
        if ok {
            return Ok(());
        }
        let problem = format!("{what} produced an ill-typed result: {shown}");
        self.tally.failures += 1;
        if self.tally.counterexample.is_none() {
            self.tally.counterexample = Some(Counterexample {
                law: format!("type-preservation ({})", self.law),
                case: self.index,
                inputs: self.inputs.clone(),
                problem: problem.clone(),
            });
        }
        Err(problem)
    }

    fn term_out(&mut self, what: &str, m: &TypedTerm) -> Outcome {
        let ok = check_term(m.ctx(), m.ty(), m.term()).is_ok();
        self.preserved(what, ok, m.to_string())
    }

    fn subst_out(&mut self, what: &str, s: &TypedSubst) -> Outcome {
        let ok = check_subst(s.src(), s.dst(), s.subst()).is_ok();
        self.preserved(what, ok, s.to_string())
    }
}

fn same<T: PartialEq + fmt::Display>(lhs: &T, rhs: &T) -> Outcome {
    if lhs == rhs {
        Ok(())
    } else {
        Err(format!("lhs: {lhs}\nrhs: {rhs}"))
    }
}

fn show_env(env: &ParallelSubst) -> EnvDisplay<'_> {
    EnvDisplay(env)
}

struct EnvDisplay<'a>(&'a ParallelSubst);

impl PartialEq for EnvDisplay<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl fmt::Display for EnvDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, t) in self.0.images.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str("]")
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn lookup(law: &str) -> Option<fn(&mut Case) -> Outcome> {
    Some(match law {
        "fusion" => fusion,
        "left-id" => left_id,
        "right-id" => right_id,
        "assoc" => assoc,
        "introduction" => introduction,
        "double-subst" => double_subst,
        "commute-subst" => commute_subst,
        "erasure-homomorphism" => erasure_homomorphism,
        "composition-denotation" => composition_denotation,
        "embed-section" => embed_section,
        "canonical-idempotence" => canonical_idempotence,
        "evaluation-agreement" => evaluation_agreement,
        "force-semantics" => force_semantics,
        "scope-preservation" => scope_preservation,
        _ => return None,
    })
}

// M [σ] [τ] = M [σ ; τ]
fn fusion(c: &mut Case) -> Outcome {
    let (delta, gamma, theta) = (c.ctx(), c.ctx(), c.ctx());
    let ty = c.ty();
    let m = c.term("M", &delta, &ty)?;
    let s = c.subst("s", &gamma, &delta)?;
    let t = c.subst("t", &theta, &gamma)?;
    let inner = engine::instantiate(&m, &s).map_err(err)?;
    c.term_out("instantiate", &inner)?;
    let lhs = engine::instantiate(&inner, &t).map_err(err)?;
    c.term_out("instantiate", &lhs)?;
    let st = engine::compose(&s, &t).map_err(err)?;
    c.subst_out("compose", &st)?;
    let rhs = engine::instantiate(&m, &st).map_err(err)?;
    c.term_out("instantiate", &rhs)?;
    same(lhs.term(), rhs.term())
}

// id ; t = t
fn left_id(c: &mut Case) -> Outcome {
    let (gamma, theta) = (c.ctx(), c.ctx());
    let t = c.subst("t", &theta, &gamma)?;
    let out = engine::compose(&engine::identity(&gamma), &t).map_err(err)?;
    c.subst_out("compose", &out)?;
    same(out.subst(), t.subst())
}

// s ; id = s
fn right_id(c: &mut Case) -> Outcome {
    let (delta, gamma) = (c.ctx(), c.ctx());
    let s = c.subst("s", &gamma, &delta)?;
    let out = engine::compose(&s, &engine::identity(&gamma)).map_err(err)?;
    c.subst_out("compose", &out)?;
    same(out.subst(), s.subst())
}

// (s ; t) ; u = s ; (t ; u)
fn assoc(c: &mut Case) -> Outcome {
    let (delta, gamma, theta, xi) = (c.ctx(), c.ctx(), c.ctx(), c.ctx());
    let s = c.subst("s", &gamma, &delta)?;
    let t = c.subst("t", &theta, &gamma)?;
    let u = c.subst("u", &xi, &theta)?;
    let st = engine::compose(&s, &t).map_err(err)?;
    c.subst_out("compose", &st)?;
    let lhs = engine::compose(&st, &u).map_err(err)?;
    c.subst_out("compose", &lhs)?;
    let tu = engine::compose(&t, &u).map_err(err)?;
    c.subst_out("compose", &tu)?;
    let rhs = engine::compose(&s, &tu).map_err(err)?;
    c.subst_out("compose", &rhs)?;
    same(lhs.subst(), rhs.subst())
}

// (N^) [M]₀ = N
fn introduction(c: &mut Case) -> Outcome {
    let gamma = c.ctx();
    let (a, b) = (c.ty(), c.ty());
    let n = c.term("N", &gamma, &a)?;
    let m = c.term("M", &gamma, &b)?;
    let out = engine::subst0(&engine::weaken(&n, b), &m).map_err(err)?;
    c.term_out("subst0", &out)?;
    same(out.term(), n.term())
}

// N [M]₁ [L]₀ = N [L^]₀ [M]₀
fn double_subst(c: &mut Case) -> Outcome {
    let gamma = c.ctx();
    let (a, b, ty) = (c.ty(), c.ty(), c.ty());
    let n = c.term("N", &gamma.extend(a.clone()).extend(b.clone()), &ty)?;
    let m = c.term("M", &gamma, &a)?;
    let l = c.term("L", &gamma, &b)?;
    let n1 = engine::subst1(&n, &m).map_err(err)?;
    c.term_out("subst1", &n1)?;
    let lhs = engine::subst0(&n1, &l).map_err(err)?;
    c.term_out("subst0", &lhs)?;
    let n0 = engine::subst0(&n, &engine::weaken(&l, a)).map_err(err)?;
    c.term_out("subst0", &n0)?;
    let rhs = engine::subst0(&n0, &m).map_err(err)?;
    c.term_out("subst0", &rhs)?;
    same(lhs.term(), rhs.term())
}

// N [M]₀ [L]₀ = N [L]₁ [M [L]₀]₀
fn commute_subst(c: &mut Case) -> Outcome {
    let gamma = c.ctx();
    let (a, b, ty) = (c.ty(), c.ty(), c.ty());
    let gb = gamma.extend(b.clone());
    let n = c.term("N", &gb.extend(a.clone()), &ty)?;
    let m = c.term("M", &gb, &a)?;
    let l = c.term("L", &gamma, &b)?;
    let nm = engine::subst0(&n, &m).map_err(err)?;
    c.term_out("subst0", &nm)?;
    let lhs = engine::subst0(&nm, &l).map_err(err)?;
    c.term_out("subst0", &lhs)?;
    let nl = engine::subst1(&n, &l).map_err(err)?;
    c.term_out("subst1", &nl)?;
    let ml = engine::subst0(&m, &l).map_err(err)?;
    c.term_out("subst0", &ml)?;
    let rhs = engine::subst0(&nl, &ml).map_err(err)?;
    c.term_out("subst0", &rhs)?;
    same(lhs.term(), rhs.term())
}

// erase (M [σ]) = psubst (erase M) (erase σ)
fn erasure_homomorphism(c: &mut Case) -> Outcome {
    let (delta, gamma) = (c.ctx(), c.ctx());
    let ty = c.ty();
    let m = c.term("M", &delta, &ty)?;
    let s = c.subst("s", &gamma, &delta)?;
    let out = engine::instantiate(&m, &s).map_err(err)?;
    c.term_out("instantiate", &out)?;
    let rhs = psubst(&erase_term(&m), &erase_subst(&s)).map_err(err)?;
    same(&erase_term(&out), &rhs)
}

// erase (σ ; τ) = erase σ, each image substituted by erase τ
fn composition_denotation(c: &mut Case) -> Outcome {
    let (delta, gamma, theta) = (c.ctx(), c.ctx(), c.ctx());
    let s = c.subst("s", &gamma, &delta)?;
    let t = c.subst("t", &theta, &gamma)?;
    let st = engine::compose(&s, &t).map_err(err)?;
    c.subst_out("compose", &st)?;
    let env = erase_subst(&t);
    let images = erase_subst(&s)
        .images
        .iter()
        .map(|img| psubst(img, &env))
        .collect::<Result<Vec<_>>>()
        .map_err(err)?;
    let lhs = erase_subst(&st);
    let rhs = ParallelSubst::new(images);
    same(&show_env(&lhs), &show_env(&rhs))
}

// erase (embed t) = t
fn embed_section(c: &mut Case) -> Outcome {
    let ctx = c.ctx();
    let ty = c.ty();
    let m = c.term("M", &ctx, &ty)?;
    let t = erase_term(&m);
    c.note("t", t.to_string());
    let back = embed(&t, &ctx, &ty).map_err(err)?;
    c.term_out("embed", &back)?;
    same(&erase_term(&back), &t)
}

// embed ∘ erase is idempotent
fn canonical_idempotence(c: &mut Case) -> Outcome {
    let ctx = c.ctx();
    let ty = c.ty();
    let m = c.term("M", &ctx, &ty)?;
    let once = embed(&erase_term(&m), &ctx, &ty).map_err(err)?;
    c.term_out("embed", &once)?;
    let twice = embed(&erase_term(&once), &ctx, &ty).map_err(err)?;
    c.term_out("embed", &twice)?;
    same(twice.term(), once.term())
}

// erase (normalize M) = classical_normalize (erase M)
fn evaluation_agreement(c: &mut Case) -> Outcome {
    let ctx = c.ctx();
    let ty = c.ty();
    let m = c.term("M", &ctx, &ty)?;
    if let Some((next, _)) = engine::beta_step(&m) {
        c.term_out("beta_step", &next)?;
    }
    let out = engine::normalize(&m, DEFAULT_STEP_LIMIT).map_err(err)?;
    c.term_out("normalize", &out)?;
    let rhs = classical_normalize(&erase_term(&m), DEFAULT_STEP_LIMIT).map_err(err)?;
    same(&erase_term(&out), &rhs)
}

// erase (force M) = erase M, with M weakened so force has work to do
fn force_semantics(c: &mut Case) -> Outcome {
    let ctx = c.ctx();
    let (ty, extra) = (c.ty(), c.ty());
    let base = c.term("M", &ctx, &ty)?;
    for m in [base.clone(), engine::weaken(&base, extra)] {
        let out = engine::force(&m);
        c.term_out("force", &out)?;
        same(&erase_term(&out), &erase_term(&m))?;
    }
    Ok(())
}

// erasures stay within their context, before and after instantiation
fn scope_preservation(c: &mut Case) -> Outcome {
    let (delta, gamma) = (c.ctx(), c.ctx());
    let ty = c.ty();
    let m = c.term("M", &delta, &ty)?;
    let s = c.subst("s", &gamma, &delta)?;
    let out = engine::instantiate(&m, &s).map_err(err)?;
    c.term_out("instantiate", &out)?;
    for (t, depth) in [(&m, delta.len()), (&out, gamma.len())] {
        let e = erase_term(t);
        if !e.is_well_scoped(depth) {
            return Err(format!("{e} escapes a context of length {depth}"));
        }
    }
    Ok(())
}
