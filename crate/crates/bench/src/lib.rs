//! Workloads shared by the engine benchmarks.

use weaken_core::engine;
use weaken_core::{check_term, Ctx, GenConfig, Generator, Term, Ty, TypedSubst, TypedTerm};

/// Church numeral `n` at type `(N -> N) -> N -> N`.
pub fn church(n: usize) -> Term {
    let mut body = Term::Var;
    for _ in 0..n {
        body = Term::app(Term::weaken(Term::Var), body);
    }
    Term::lam(Term::lam(body))
}

/// `church(n) inc zero`, closed and of type `N`.
pub fn church_applied(n: usize) -> TypedTerm {
    let t = Term::app(Term::app(church(n), Term::inc()), Term::Zero);
    check_term(&Ctx::empty(), &Ty::Nat, &t).expect("well typed")
}

/// A batch of random well-typed (term, substitution) pairs.
pub fn random_instantiations(seed: u64, count: usize, size: usize) -> Vec<(TypedTerm, TypedSubst)> {
    let mut g = Generator::new(GenConfig::with_seed(seed)).expect("valid config");
    (0..count)
        .map(|_| {
            let src = g.gen_ctx();
            let dst = g.gen_ctx();
            let ty = g.gen_type(0);
            let m = g.gen_term(&dst, &ty, size).expect("satisfiable");
            let s = g.gen_subst(&src, &dst, size / 4).expect("satisfiable");
            let m = check_term(&dst, &ty, &m).expect("generated terms typecheck");
            let s = weaken_core::check_subst(&src, &dst, &s).expect("generated substs typecheck");
            (m, s)
        })
        .collect()
}

pub fn run_instantiations(batch: &[(TypedTerm, TypedSubst)]) -> usize {
    batch
        .iter()
        .map(|(m, s)| engine::instantiate(m, s).expect("contexts line up").term().size())
        .sum()
}
