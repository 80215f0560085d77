//! Instantiation, composition and reduction.
//!
//! Instantiation `M [σ]` and composition `σ ; τ` look at the (right-hand)
//! substitution first and only inspect the term, or the left substitution,
//! when it is a cons. The clause numbering in [`Rule`] follows the defining
//! equations:
//!
//! ```text
//! M [id]              = M                      inst-1
//! M [σ^]              = (M [σ])^               inst-2
//! # [σ , P]           = P                      inst-3
//! M^ [σ , P]          = M [σ]                  inst-4
//! (\ N) [σ@(_ , _)]   = \ (N [σ^ , #])         inst-5
//! (L M) [σ@(_ , _)]   = L [σ] (M [σ])          inst-6
//! zero [σ@(_ , _)]    = zero                   inst-7
//! (suc M) [σ@(_ , _)] = suc (M [σ])            inst-8
//!
//! σ ; id              = σ                      comp-1
//! σ ; τ^              = (σ ; τ)^               comp-2
//! id ; τ@(_ , _)      = τ                      comp-3
//! σ^ ; (τ , Q)        = σ ; τ                  comp-4
//! (σ , P) ; τ@(_ , _) = (σ ; τ) , P [τ]        comp-5
//! ```
//!
//! Trace steps show the rewritten redex and its contractum; a pending
//! instantiation is written `{M}[σ]` and a pending composition `{σ ; τ}`.

use serde::{Serialize, Serializer};

use crate::classical;
use crate::print::{print_subst, print_term, print_term_atom};
use crate::syntax::{Ctx, Subst, Term, Ty};
use crate::typeck::{TypedSubst, TypedTerm};
use crate::{Error, Result};

pub const DEFAULT_STEP_LIMIT: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Inst1,
    Inst2,
    Inst3,
    Inst4,
    Inst5,
    Inst6,
    Inst7,
    Inst8,
    Comp1,
    Comp2,
    Comp3,
    Comp4,
    Comp5,
    Beta,
    ForceLam,
    ForceApp,
    ForceSuc,
    ForceZero,
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::Inst1 => "inst-1",
            Rule::Inst2 => "inst-2",
            Rule::Inst3 => "inst-3",
            Rule::Inst4 => "inst-4",
            Rule::Inst5 => "inst-5",
            Rule::Inst6 => "inst-6",
            Rule::Inst7 => "inst-7",
            Rule::Inst8 => "inst-8",
            Rule::Comp1 => "comp-1",
            Rule::Comp2 => "comp-2",
            Rule::Comp3 => "comp-3",
            Rule::Comp4 => "comp-4",
            Rule::Comp5 => "comp-5",
            Rule::Beta => "beta",
            Rule::ForceLam => "force-lam",
            Rule::ForceApp => "force-app",
            Rule::ForceSuc => "force-suc",
            Rule::ForceZero => "force-zero",
        }
    }
}

impl std::fmt::Display for Rule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Rule {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub rule: Rule,
    pub before: String,
    pub after: String,
}

/// Receives trace steps in the order the clauses fire.
pub trait TraceSink {
    fn record(&mut self, step: TraceStep);
}

impl TraceSink for Vec<TraceStep> {
    fn record(&mut self, step: TraceStep) {
        self.push(step);
    }
}

fn pending(m: &Term, s: &Subst) -> String {
    format!("{{{}}}[{}]", print_term(m), print_subst(s))
}

fn pending_comp(s: &Subst, t: &Subst) -> String {
    format!("{{{} ; {}}}", print_subst(s), print_subst(t))
}

/// Raw-syntax operations. These trust their inputs to be well typed.
pub mod raw {
    use super::*;

    pub(crate) struct Machine<'a> {
        sink: Option<&'a mut dyn TraceSink>,
        emitted: usize,
    }

    impl<'a> Machine<'a> {
        pub(crate) fn new(sink: Option<&'a mut dyn TraceSink>) -> Machine<'a> {
            Machine { sink, emitted: 0 }
        }

        fn emit(&mut self, rule: Rule, text: impl FnOnce() -> (String, String)) {
            if let Some(sink) = self.sink.as_deref_mut() {
                self.emitted += 1;
                let (before, after) = text();
                sink.record(TraceStep {
                    rule,
                    before,
                    after,
                });
            }
        }

        pub(crate) fn instantiate(&mut self, m: &Term, s: &Subst) -> Term {
            match s {
                Subst::Id => {
                    self.emit(Rule::Inst1, || (pending(m, s), print_term(m)));
                    m.clone()
                }
                Subst::Weaken(inner) => {
                    self.emit(Rule::Inst2, || (pending(m, s), format!("{}^", pending(m, inner))));
                    Term::weaken(self.instantiate(m, inner))
                }
                Subst::Cons(tail, head) => match m {
                    Term::Var => {
                        self.emit(Rule::Inst3, || (pending(m, s), print_term(head)));
                        (**head).clone()
                    }
                    Term::Weaken(body) => {
                        self.emit(Rule::Inst4, || (pending(m, s), pending(body, tail)));
                        self.instantiate(body, tail)
                    }
                    Term::Lam(body) => {
                        let lifted = Subst::cons(Subst::weaken(s.clone()), Term::Var);
                        self.emit(Rule::Inst5, || {
                            (pending(m, s), format!("\\ {}", pending(body, &lifted)))
                        });
                        Term::lam(self.instantiate(body, &lifted))
                    }
                    Term::App(fun, arg) => {
                        self.emit(Rule::Inst6, || {
                            (pending(m, s), format!("{} {}", pending(fun, s), pending(arg, s)))
                        });
                        let fun = self.instantiate(fun, s);
                        let arg = self.instantiate(arg, s);
                        Term::app(fun, arg)
                    }
                    Term::Zero => {
                        self.emit(Rule::Inst7, || (pending(m, s), "zero".to_owned()));
                        Term::Zero
                    }
                    Term::Suc(body) => {
                        self.emit(Rule::Inst8, || {
                            (pending(m, s), format!("suc {}", pending(body, s)))
                        });
                        Term::suc(self.instantiate(body, s))
                    }
                },
            }
        }

        pub(crate) fn compose(&mut self, s: &Subst, t: &Subst) -> Subst {
            match t {
                Subst::Id => {
                    self.emit(Rule::Comp1, || (pending_comp(s, t), print_subst(s)));
                    s.clone()
                }
                Subst::Weaken(inner) => {
                    self.emit(Rule::Comp2, || {
                        (pending_comp(s, t), format!("{}^", pending_comp(s, inner)))
                    });
                    Subst::weaken(self.compose(s, inner))
                }
                Subst::Cons(t_tail, _) => match s {
                    Subst::Id => {
                        self.emit(Rule::Comp3, || (pending_comp(s, t), print_subst(t)));
                        t.clone()
                    }
                    Subst::Weaken(s_inner) => {
                        self.emit(Rule::Comp4, || (pending_comp(s, t), pending_comp(s_inner, t_tail)));
                        self.compose(s_inner, t_tail)
                    }
                    Subst::Cons(s_tail, head) => {
                        self.emit(Rule::Comp5, || {
                            (
                                pending_comp(s, t),
                                format!("{} , {}", pending_comp(s_tail, t), pending(head, t)),
                            )
                        });
                        let tail = self.compose(s_tail, t);
                        let head = self.instantiate(head, t);
                        Subst::cons(tail, head)
                    }
                },
            }
        }

        /// Distributes outer weakenings until the head constructor is
        /// visible. Variable spines come back unchanged.
        pub(crate) fn force(&mut self, m: &Term) -> Term {
            let Term::Weaken(inner) = m else {
                return m.clone();
            };
            let forced = self.force(inner);
            if forced.as_index().is_some() {
                return Term::weaken(forced);
            }
            let before = || format!("{}^", print_term_atom(&forced));
            match &forced {
                Term::Lam(body) => {
                    let shift_under = Subst::cons(Subst::Id.weaken_by(2), Term::Var);
                    self.emit(Rule::ForceLam, || {
                        (before(), format!("\\ {}", pending(body, &shift_under)))
                    });
                    Term::lam(self.instantiate(body, &shift_under))
                }
                Term::App(fun, arg) => {
                    let out = Term::app(Term::weaken((**fun).clone()), Term::weaken((**arg).clone()));
                    self.emit(Rule::ForceApp, || (before(), print_term(&out)));
                    out
                }
                Term::Suc(body) => {
                    let out = Term::suc(Term::weaken((**body).clone()));
                    self.emit(Rule::ForceSuc, || (before(), print_term(&out)));
                    out
                }
                Term::Zero => {
                    self.emit(Rule::ForceZero, || (before(), "zero".to_owned()));
                    Term::Zero
                }
                Term::Var | Term::Weaken(_) => unreachable!("forced term has a visible head"),
            }
        }

        /// Contracts the leftmost-outermost redex of the forced view. When
        /// a redex is found, `contraction` is set to the number of steps
        /// emitted before the contraction started.
        fn step(&mut self, m: &Term, contraction: &mut usize) -> Option<Term> {
            match self.force(m) {
                Term::App(fun, arg) => {
                    let fun = self.force(&fun);
                    if let Term::Lam(body) = &fun {
                        *contraction = self.emitted;
                        return Some(self.instantiate(body, &Subst::cons(Subst::Id, *arg)));
                    }
                    if let Some(fun) = self.step(&fun, contraction) {
                        return Some(Term::app(fun, *arg));
                    }
                    self.step(&arg, contraction).map(|arg| Term::app(fun, arg))
                }
                Term::Lam(body) => self.step(&body, contraction).map(Term::lam),
                Term::Suc(body) => self.step(&body, contraction).map(Term::suc),
                _ => None,
            }
        }

        pub(crate) fn beta_step(&mut self, m: &Term) -> Option<Term> {
            if self.sink.is_none() {
                return self.step(m, &mut 0);
            }
            // Buffered so the beta step is reported ahead of the steps of
            // its contraction.
            let mut buffer: Vec<TraceStep> = Vec::new();
            let mut split = 0;
            let result = Machine::new(Some(&mut buffer)).step(m, &mut split)?;
            let contraction = buffer.split_off(split);
            for s in buffer {
                self.emit(s.rule, || (s.before, s.after));
            }
            self.emit(Rule::Beta, || (print_term(m), print_term(&result)));
            for s in contraction {
                self.emit(s.rule, || (s.before, s.after));
            }
            Some(result)
        }

        pub(crate) fn normalize(&mut self, m: &Term, limit: usize) -> Result<Term> {
            let mut current = m.clone();
            let mut steps = 0;
            while let Some(next) = self.beta_step(&current) {
                if steps == limit {
                    return Err(Error::StepLimit { limit });
                }
                steps += 1;
                current = next;
            }
            Ok(classical::embed_raw(&classical::erase_raw(&current)))
        }
    }

    pub fn instantiate(m: &Term, s: &Subst) -> Term {
        Machine::new(None).instantiate(m, s)
    }

    pub fn compose(s: &Subst, t: &Subst) -> Subst {
        Machine::new(None).compose(s, t)
    }

    pub fn force(m: &Term) -> Term {
        Machine::new(None).force(m)
    }

    pub fn beta_step(m: &Term) -> Option<Term> {
        Machine::new(None).beta_step(m)
    }

    pub fn normalize(m: &Term, limit: usize) -> Result<Term> {
        Machine::new(None).normalize(m, limit)
    }

    pub fn subst0(n: &Term, m: &Term) -> Term {
        instantiate(n, &Subst::cons(Subst::Id, m.clone()))
    }

    pub fn subst1(n: &Term, m: &Term) -> Term {
        instantiate(n, &lift(Subst::cons(Subst::Id, m.clone())))
    }

    /// `σ^ , #`, the substitution pushed under a binder.
    pub fn lift(s: Subst) -> Subst {
        Subst::cons(Subst::weaken(s), Term::Var)
    }
}

fn mismatch(expected: &Ctx, found: &Ctx) -> Error {
    Error::ContextMismatch {
        expected: expected.to_string(),
        found: found.to_string(),
    }
}

fn require_ctx(expected: &Ctx, found: &Ctx) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(mismatch(expected, found))
    }
}

/// `M [σ]` for `M : Δ ⊢ A` and `σ : Γ ⊨ Δ`, giving `Γ ⊢ A`.
pub fn instantiate(m: &TypedTerm, s: &TypedSubst) -> Result<TypedTerm> {
    instantiate_with(m, s, None)
}

pub fn instantiate_traced(
    m: &TypedTerm,
    s: &TypedSubst,
    sink: &mut dyn TraceSink,
) -> Result<TypedTerm> {
    instantiate_with(m, s, Some(sink))
}

fn instantiate_with(
    m: &TypedTerm,
    s: &TypedSubst,
    sink: Option<&mut dyn TraceSink>,
) -> Result<TypedTerm> {
    require_ctx(s.dst(), m.ctx())?;
    let term = raw::Machine::new(sink).instantiate(m.term(), s.subst());
    Ok(TypedTerm::assume(term, s.src().clone(), m.ty().clone()))
}

/// `σ ; τ` for `σ : Θ ⊨ Δ` and `τ : Γ ⊨ Θ`, giving `Γ ⊨ Δ`.
pub fn compose(s: &TypedSubst, t: &TypedSubst) -> Result<TypedSubst> {
    compose_with(s, t, None)
}

pub fn compose_traced(
    s: &TypedSubst,
    t: &TypedSubst,
    sink: &mut dyn TraceSink,
) -> Result<TypedSubst> {
    compose_with(s, t, Some(sink))
}

fn compose_with(
    s: &TypedSubst,
    t: &TypedSubst,
    sink: Option<&mut dyn TraceSink>,
) -> Result<TypedSubst> {
    require_ctx(t.dst(), s.src())?;
    let subst = raw::Machine::new(sink).compose(s.subst(), t.subst());
    Ok(TypedSubst::assume(subst, t.src().clone(), s.dst().clone()))
}

/// The identity substitution on `ctx`.
pub fn identity(ctx: &Ctx) -> TypedSubst {
    TypedSubst::assume(Subst::Id, ctx.clone(), ctx.clone())
}

/// `M^ : Γ ▷ A ⊢ B` from `M : Γ ⊢ B`.
pub fn weaken(m: &TypedTerm, extra: Ty) -> TypedTerm {
    TypedTerm::assume(
        Term::weaken(m.term().clone()),
        m.ctx().extend(extra),
        m.ty().clone(),
    )
}

/// `σ^ : Γ ▷ A ⊨ Δ` from `σ : Γ ⊨ Δ`.
pub fn weaken_subst(s: &TypedSubst, extra: Ty) -> TypedSubst {
    TypedSubst::assume(
        Subst::weaken(s.subst().clone()),
        s.src().extend(extra),
        s.dst().clone(),
    )
}

/// `σ , M : Γ ⊨ Δ ▷ A` from `σ : Γ ⊨ Δ` and `M : Γ ⊢ A`.
pub fn cons(s: &TypedSubst, m: &TypedTerm) -> Result<TypedSubst> {
    require_ctx(s.src(), m.ctx())?;
    Ok(TypedSubst::assume(
        Subst::cons(s.subst().clone(), m.term().clone()),
        s.src().clone(),
        s.dst().extend(m.ty().clone()),
    ))
}

/// `N [M]₀ = N [id , M]`.
pub fn subst0(n: &TypedTerm, m: &TypedTerm) -> Result<TypedTerm> {
    let s = cons(&identity(m.ctx()), m)?;
    instantiate(n, &s)
}

/// `N [M]₁ = N [(id , M)^ , #]` for `N : Γ ▷ A ▷ B ⊢ C` and `M : Γ ⊢ A`.
pub fn subst1(n: &TypedTerm, m: &TypedTerm) -> Result<TypedTerm> {
    let Some((outer, inner_ty)) = n.ctx().split_last() else {
        return Err(mismatch(&m.ctx().extend(m.ty().clone()), n.ctx()));
    };
    let inner_ty = inner_ty.clone();
    let s = cons(&identity(m.ctx()), m)?;
    require_ctx(s.dst(), &outer)?;
    let lifted = weaken_subst(&s, inner_ty.clone());
    let var = TypedTerm::assume(Term::Var, m.ctx().extend(inner_ty.clone()), inner_ty);
    instantiate(n, &cons(&lifted, &var)?)
}

/// Rewrites top-level weakenings until the head constructor is visible.
pub fn force(m: &TypedTerm) -> TypedTerm {
    let term = raw::force(m.term());
    TypedTerm::assume(term, m.ctx().clone(), m.ty().clone())
}

pub fn force_traced(m: &TypedTerm, sink: &mut dyn TraceSink) -> TypedTerm {
    let term = raw::Machine::new(Some(sink)).force(m.term());
    TypedTerm::assume(term, m.ctx().clone(), m.ty().clone())
}

/// One leftmost-outermost beta step, or `None` on a normal form.
pub fn beta_step(m: &TypedTerm) -> Option<(TypedTerm, TraceStep)> {
    let next = raw::beta_step(m.term())?;
    let step = TraceStep {
        rule: Rule::Beta,
        before: print_term(m.term()),
        after: print_term(&next),
    };
    Some((TypedTerm::assume(next, m.ctx().clone(), m.ty().clone()), step))
}

/// Like [`beta_step`], also reporting the force and instantiation steps.
pub fn beta_step_traced(m: &TypedTerm, sink: &mut dyn TraceSink) -> Option<TypedTerm> {
    let next = raw::Machine::new(Some(sink)).beta_step(m.term())?;
    Some(TypedTerm::assume(next, m.ctx().clone(), m.ty().clone()))
}

/// Reduces to beta normal form and returns its weakening-canonical form.
pub fn normalize(m: &TypedTerm, step_limit: usize) -> Result<TypedTerm> {
    normalize_with(m, step_limit, None)
}

pub fn normalize_traced(
    m: &TypedTerm,
    step_limit: usize,
    sink: &mut dyn TraceSink,
) -> Result<TypedTerm> {
    normalize_with(m, step_limit, Some(sink))
}

fn normalize_with(
    m: &TypedTerm,
    step_limit: usize,
    sink: Option<&mut dyn TraceSink>,
) -> Result<TypedTerm> {
    let term = raw::Machine::new(sink).normalize(m.term(), step_limit)?;
    Ok(TypedTerm::assume(term, m.ctx().clone(), m.ty().clone()))
}
