//! Typechecking raw syntax against the intrinsic rules.
//!
//! Checking pushes the expected type inward and solves the remaining
//! unknowns (lambda domains, the argument type of an application) by
//! first-order unification over type metavariables. A raw term is accepted
//! exactly when some typing derivation exists, so bare lambdas in function
//! position need no annotation.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::parse::{Annotated, Ascription};
use crate::print::{print_subst_judgement, print_term_judgement};
use crate::syntax::{Ctx, Subst, Term, Ty};

/// One step from a node to one of its children.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PathStep {
    WeakenBody,
    LamBody,
    AppFun,
    AppArg,
    SucBody,
    SubstWeaken,
    ConsTail,
    ConsHead,
}

impl PathStep {
    fn label(self) -> &'static str {
        match self {
            PathStep::WeakenBody | PathStep::SubstWeaken => "weaken",
            PathStep::LamBody => "body",
            PathStep::AppFun => "fun",
            PathStep::AppArg => "arg",
            PathStep::SucBody => "suc",
            PathStep::ConsTail => "tail",
            PathStep::ConsHead => "head",
        }
    }
}

/// Location of a subterm, as the steps taken from the root.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Path(Vec<PathStep>);

impl Path {
    pub fn root() -> Path {
        Path(Vec::new())
    }

    pub fn steps(&self) -> &[PathStep] {
        &self.0
    }
}

impl From<Vec<PathStep>> for Path {
    fn from(steps: Vec<PathStep>) -> Path {
        Path(steps)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        let labels: Vec<&str> = self.0.iter().map(|s| s.label()).collect();
        f.write_str(&labels.join("."))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("type mismatch at {path}: expected {expected}, found {found}")]
    Mismatch {
        expected: String,
        found: String,
        path: Path,
    },
    #[error("variable or weakening in the empty context at {path}")]
    EmptyContext { path: Path },
    #[error("head of application at {path} has type {found}, not a function type")]
    NotAFunction { found: String, path: Path },
    #[error("cannot infer a type at {path}; add an ascription")]
    CannotInfer { path: Path },
    #[error("context mismatch at {path}: expected {expected}, found {found}")]
    ContextMismatch {
        expected: String,
        found: String,
        path: Path,
    },
}

/// A term sealed with the context and type it checks at.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TypedTerm {
    term: Term,
    ctx: Ctx,
    ty: Ty,
}

impl TypedTerm {
    /// Seals a triple the caller knows to be well typed.
    pub(crate) fn assume(term: Term, ctx: Ctx, ty: Ty) -> TypedTerm {
        debug_assert!(
            check_term(&ctx, &ty, &term).is_ok(),
            "ill-typed result {}",
            print_term_judgement(&ctx, &term, &ty)
        );
        TypedTerm { term, ctx, ty }
    }

    pub fn term(&self) -> &Term {
        &self.term
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn ty(&self) -> &Ty {
        &self.ty
    }

    pub fn into_term(self) -> Term {
        self.term
    }
}

impl fmt::Display for TypedTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term_judgement(&self.ctx, &self.term, &self.ty))
    }
}

/// A substitution `src ⊨ dst`, sealed after checking.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TypedSubst {
    subst: Subst,
    src: Ctx,
    dst: Ctx,
}

impl TypedSubst {
    pub(crate) fn assume(subst: Subst, src: Ctx, dst: Ctx) -> TypedSubst {
        debug_assert!(
            check_subst(&src, &dst, &subst).is_ok(),
            "ill-typed result {}",
            print_subst_judgement(&subst, &src, &dst)
        );
        TypedSubst { subst, src, dst }
    }

    pub fn subst(&self) -> &Subst {
        &self.subst
    }

    /// Context the images live over.
    pub fn src(&self) -> &Ctx {
        &self.src
    }

    /// Context whose variables are replaced.
    pub fn dst(&self) -> &Ctx {
        &self.dst
    }

    pub fn into_subst(self) -> Subst {
        self.subst
    }
}

impl fmt::Display for TypedSubst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_subst_judgement(&self.subst, &self.src, &self.dst))
    }
}

/// Types with metavariables.
#[derive(Clone, Debug, PartialEq, Eq)]
enum MTy {
    Nat,
    Arrow(Box<MTy>, Box<MTy>),
    Meta(usize),
}

impl MTy {
    fn arrow(a: MTy, b: MTy) -> MTy {
        MTy::Arrow(Box::new(a), Box::new(b))
    }
}

impl From<&Ty> for MTy {
    fn from(ty: &Ty) -> MTy {
        match ty {
            Ty::Nat => MTy::Nat,
            Ty::Arrow(a, b) => MTy::arrow(MTy::from(&**a), MTy::from(&**b)),
        }
    }
}

impl fmt::Display for MTy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MTy::Nat => f.write_str("N"),
            MTy::Meta(n) => write!(f, "?{n}"),
            MTy::Arrow(a, b) if matches!(**a, MTy::Arrow(..)) => write!(f, "({a}) -> {b}"),
            MTy::Arrow(a, b) => write!(f, "{a} -> {b}"),
        }
    }
}

#[derive(Default)]
struct Unifier {
    bindings: Vec<Option<MTy>>,
}

impl Unifier {
    fn fresh(&mut self) -> MTy {
        self.bindings.push(None);
        MTy::Meta(self.bindings.len() - 1)
    }

    /// Follows bindings at the root only.
    fn walk(&self, ty: &MTy) -> MTy {
        let mut ty = ty.clone();
        while let MTy::Meta(n) = ty {
            match &self.bindings[n] {
                Some(bound) => ty = bound.clone(),
                None => break,
            }
        }
        ty
    }

    fn zonk(&self, ty: &MTy) -> MTy {
        match self.walk(ty) {
            MTy::Arrow(a, b) => MTy::arrow(self.zonk(&a), self.zonk(&b)),
            other => other,
        }
    }

    fn occurs(&self, meta: usize, ty: &MTy) -> bool {
        match self.walk(ty) {
            MTy::Meta(n) => n == meta,
            MTy::Nat => false,
            MTy::Arrow(a, b) => self.occurs(meta, &a) || self.occurs(meta, &b),
        }
    }

    fn unify(&mut self, a: &MTy, b: &MTy) -> bool {
        match (self.walk(a), self.walk(b)) {
            (MTy::Nat, MTy::Nat) => true,
            (MTy::Meta(m), MTy::Meta(n)) if m == n => true,
            (MTy::Meta(m), other) | (other, MTy::Meta(m)) => {
                if self.occurs(m, &other) {
                    return false;
                }
                self.bindings[m] = Some(other);
                true
            }
            (MTy::Arrow(a1, b1), MTy::Arrow(a2, b2)) => {
                self.unify(&a1, &a2) && self.unify(&b1, &b2)
            }
            _ => false,
        }
    }

    fn resolve(&self, ty: &MTy) -> Option<Ty> {
        match self.walk(ty) {
            MTy::Nat => Some(Ty::Nat),
            MTy::Meta(_) => None,
            MTy::Arrow(a, b) => Some(Ty::arrow(self.resolve(&a)?, self.resolve(&b)?)),
        }
    }

    /// Resolves, reading unsolved metavariables as `N`.
    fn resolve_defaulting(&self, ty: &MTy) -> Ty {
        match self.walk(ty) {
            MTy::Nat | MTy::Meta(_) => Ty::Nat,
            MTy::Arrow(a, b) => Ty::arrow(self.resolve_defaulting(&a), self.resolve_defaulting(&b)),
        }
    }

    fn show_ctx(&self, ctx: &[MTy]) -> String {
        let entries: Vec<String> = ctx.iter().map(|t| self.zonk(t).to_string()).collect();
        format!("[{}]", entries.join(", "))
    }
}

fn mctx(ctx: &Ctx) -> Vec<MTy> {
    ctx.entries().iter().map(MTy::from).collect()
}

struct Checker {
    unifier: Unifier,
    path: Vec<PathStep>,
    ascriptions: HashMap<Vec<PathStep>, Vec<Ty>>,
}

impl Checker {
    fn new(ascriptions: &[Ascription]) -> Checker {
        Checker {
            unifier: Unifier::default(),
            path: Vec::new(),
            ascriptions: Checker::located(ascriptions),
        }
    }

    fn located(ascriptions: &[Ascription]) -> HashMap<Vec<PathStep>, Vec<Ty>> {
        let mut map: HashMap<Vec<PathStep>, Vec<Ty>> = HashMap::new();
        for a in ascriptions {
            map.entry(a.path.steps().to_vec())
                .or_default()
                .push(a.ty.clone());
        }
        map
    }

    fn here(&self) -> Path {
        Path(self.path.clone())
    }

    fn expect(&mut self, expected: &MTy, found: &MTy) -> Result<(), TypeError> {
        if self.unifier.unify(expected, found) {
            Ok(())
        } else {
            Err(TypeError::Mismatch {
                expected: self.unifier.zonk(expected).to_string(),
                found: self.unifier.zonk(found).to_string(),
                path: self.here(),
            })
        }
    }

    fn under<T>(
        &mut self,
        step: PathStep,
        f: impl FnOnce(&mut Self) -> Result<T, TypeError>,
    ) -> Result<T, TypeError> {
        self.path.push(step);
        let out = f(self)?;
        self.path.pop();
        Ok(out)
    }

    fn term(&mut self, ctx: &[MTy], expected: &MTy, term: &Term) -> Result<(), TypeError> {
        if let Some(tys) = self.ascriptions.get(&self.path).cloned() {
            for ty in &tys {
                self.expect(&MTy::from(ty), expected)?;
            }
        }
        match term {
            Term::Var => match ctx.last() {
                Some(last) => self.expect(expected, last),
                None => Err(TypeError::EmptyContext { path: self.here() }),
            },
            Term::Weaken(m) => match ctx.split_last() {
                Some((_, rest)) => {
                    self.under(PathStep::WeakenBody, |c| c.term(rest, expected, m))
                }
                None => Err(TypeError::EmptyContext { path: self.here() }),
            },
            Term::Lam(body) => {
                let (dom, cod) = match self.unifier.walk(expected) {
                    MTy::Arrow(a, b) => (*a, *b),
                    _ => {
                        let (a, b) = (self.unifier.fresh(), self.unifier.fresh());
                        self.expect(expected, &MTy::arrow(a.clone(), b.clone()))?;
                        (a, b)
                    }
                };
                let mut inner = ctx.to_vec();
                inner.push(dom);
                self.under(PathStep::LamBody, |c| c.term(&inner, &cod, body))
            }
            Term::App(fun, arg) => {
                let fun_ty = self.unifier.fresh();
                self.under(PathStep::AppFun, |c| c.term(ctx, &fun_ty, fun))?;
                if self.unifier.walk(&fun_ty) == MTy::Nat {
                    return Err(TypeError::NotAFunction {
                        found: "N".to_owned(),
                        path: self.here(),
                    });
                }
                let dom = self.unifier.fresh();
                let want = MTy::arrow(dom.clone(), expected.clone());
                if !self.unifier.unify(&want, &fun_ty) {
                    let mut path = self.path.clone();
                    path.push(PathStep::AppFun);
                    return Err(TypeError::Mismatch {
                        expected: self.unifier.zonk(&want).to_string(),
                        found: self.unifier.zonk(&fun_ty).to_string(),
                        path: Path(path),
                    });
                }
                self.under(PathStep::AppArg, |c| c.term(ctx, &dom, arg))
            }
            Term::Zero => self.expect(expected, &MTy::Nat),
            Term::Suc(m) => {
                self.expect(expected, &MTy::Nat)?;
                self.under(PathStep::SucBody, |c| c.term(ctx, &MTy::Nat, m))
            }
        }
    }

    fn unify_ctx(&mut self, expected: &[MTy], found: &[MTy]) -> Result<(), TypeError> {
        let ok = expected.len() == found.len()
            && expected
                .iter()
                .zip(found)
                .all(|(a, b)| self.unifier.unify(a, b));
        if ok {
            Ok(())
        } else {
            Err(TypeError::ContextMismatch {
                expected: self.unifier.show_ctx(expected),
                found: self.unifier.show_ctx(found),
                path: self.here(),
            })
        }
    }

    /// Checks `subst : src ⊨ dst` with both contexts known up to metas.
    fn subst(&mut self, src: &[MTy], dst: &[MTy], subst: &Subst) -> Result<(), TypeError> {
        match subst {
            Subst::Id => self.unify_ctx(dst, src),
            Subst::Weaken(s) => match src.split_last() {
                Some((_, rest)) => self.under(PathStep::SubstWeaken, |c| c.subst(rest, dst, s)),
                None => Err(TypeError::EmptyContext { path: self.here() }),
            },
            Subst::Cons(tail, head) => match dst.split_last() {
                Some((last, rest)) => {
                    self.under(PathStep::ConsTail, |c| c.subst(src, rest, tail))?;
                    self.under(PathStep::ConsHead, |c| c.term(src, last, head))
                }
                None => Err(TypeError::EmptyContext { path: self.here() }),
            },
        }
    }

    /// Reconstructs the source context of `subst` from its target; the
    /// length is fixed by the constructors, the entries may stay unknown.
    fn subst_src(&mut self, dst: &[MTy], subst: &Subst) -> Result<Vec<MTy>, TypeError> {
        match subst {
            Subst::Id => Ok(dst.to_vec()),
            Subst::Weaken(s) => {
                let mut src = self.under(PathStep::SubstWeaken, |c| c.subst_src(dst, s))?;
                src.push(self.unifier.fresh());
                Ok(src)
            }
            Subst::Cons(tail, head) => match dst.split_last() {
                Some((last, rest)) => {
                    let src = self.under(PathStep::ConsTail, |c| c.subst_src(rest, tail))?;
                    self.under(PathStep::ConsHead, |c| c.term(&src, last, head))?;
                    Ok(src)
                }
                None => Err(TypeError::EmptyContext { path: self.here() }),
            },
        }
    }

    fn resolve_ctx(&self, ctx: &[MTy]) -> Ctx {
        Ctx::new(ctx.iter().map(|t| self.unifier.resolve_defaulting(t)).collect())
    }
}

/// Checks `raw` at `ty` in `ctx`.
pub fn check_term(ctx: &Ctx, ty: &Ty, raw: &Term) -> Result<TypedTerm, TypeError> {
    let mut c = Checker::new(&[]);
    c.term(&mctx(ctx), &MTy::from(ty), raw)?;
    Ok(TypedTerm {
        term: raw.clone(),
        ctx: ctx.clone(),
        ty: ty.clone(),
    })
}

/// Synthesizes the type of `raw`. Fails with `CannotInfer` when the type is
/// not determined, as for the bare identity lambda.
pub fn infer_term(ctx: &Ctx, raw: &Term) -> Result<Ty, TypeError> {
    let mut c = Checker::new(&[]);
    let ty = c.unifier.fresh();
    c.term(&mctx(ctx), &ty, raw)?;
    c.unifier
        .resolve(&ty)
        .ok_or(TypeError::CannotInfer { path: Path::root() })
}

/// Checks `raw : src ⊨ dst`.
pub fn check_subst(src: &Ctx, dst: &Ctx, raw: &Subst) -> Result<TypedSubst, TypeError> {
    let mut c = Checker::new(&[]);
    c.subst(&mctx(src), &mctx(dst), raw)?;
    Ok(TypedSubst {
        subst: raw.clone(),
        src: src.clone(),
        dst: dst.clone(),
    })
}

/// Reconstructs the source context of `raw` given its target context.
pub fn infer_subst_src(dst: &Ctx, raw: &Subst) -> Result<Ctx, TypeError> {
    let mut c = Checker::new(&[]);
    let src = c.subst_src(&mctx(dst), raw)?;
    src.iter()
        .map(|t| c.unifier.resolve(t))
        .collect::<Option<Vec<Ty>>>()
        .map(Ctx::new)
        .ok_or(TypeError::CannotInfer { path: Path::root() })
}

/// Checks one or more terms against a shared context and type, either of
/// which may be omitted. Missing pieces are solved from the terms and any
/// ascriptions; whatever remains undetermined becomes `N`.
pub fn elaborate_terms(
    terms: &[Annotated<Term>],
    ctx: Option<&Ctx>,
    ty: Option<&Ty>,
) -> Result<Vec<TypedTerm>, TypeError> {
    let mut c = Checker::new(&[]);
    let mctx_ = match ctx {
        Some(ctx) => mctx(ctx),
        None => {
            let depth = terms.iter().map(|t| t.value.scope_depth()).max().unwrap_or(0);
            (0..depth).map(|_| c.unifier.fresh()).collect()
        }
    };
    let mty = match ty {
        Some(ty) => MTy::from(ty),
        None => c.unifier.fresh(),
    };
    for t in terms {
        c.ascriptions = Checker::located(&t.ascriptions);
        c.term(&mctx_, &mty, &t.value)?;
    }
    let ctx = c.resolve_ctx(&mctx_);
    let ty = c.unifier.resolve_defaulting(&mty);
    terms
        .iter()
        .map(|t| check_term(&ctx, &ty, &t.value))
        .collect()
}

/// Elaborates a single term; see [`elaborate_terms`].
pub fn elaborate_term(
    term: &Annotated<Term>,
    ctx: Option<&Ctx>,
    ty: Option<&Ty>,
) -> Result<TypedTerm, TypeError> {
    let mut out = elaborate_terms(std::slice::from_ref(term), ctx, ty)?;
    Ok(out.remove(0))
}

/// Length bookkeeping for a substitution built on `id` over some `Γ`:
/// (extra source entries, extra target entries, least `|Γ|` its cons heads
/// need to be in scope).
fn spine(s: &Subst) -> (usize, usize, usize) {
    match s {
        Subst::Id => (0, 0, 0),
        Subst::Weaken(s) => {
            let (a, b, need) = spine(s);
            (a + 1, b, need)
        }
        Subst::Cons(s, head) => {
            let (a, b, need) = spine(s);
            (a, b + 1, need.max(head.scope_depth().saturating_sub(a)))
        }
    }
}

/// Smallest target length for the first substitution of `chain` that lets
/// every cons head be in scope and is at least `min_dst`. With `src`
/// given, the length is whatever makes the last source line up with it.
fn chain_dst_len(chain: &[Subst], min_dst: usize, src: Option<usize>) -> usize {
    let Some(first) = chain.first() else {
        return src.unwrap_or(0).max(min_dst);
    };
    let b0 = spine(first).1 as i64;
    // offset = |Γᵢ| - |Γ₀| for the base context of each link
    let mut offset = 0i64;
    let mut lower = (min_dst as i64 - b0).max(0);
    let mut last_a = 0i64;
    for (i, s) in chain.iter().enumerate() {
        let (a, b, need) = spine(s);
        if i > 0 {
            offset += last_a - b as i64;
        }
        lower = lower.max(need as i64 - offset).max(-offset);
        last_a = a as i64;
    }
    let base = match src {
        Some(n) => (n as i64 - last_a - offset).max(0),
        None => lower,
    };
    (base + b0) as usize
}

fn chain_with(
    c: &mut Checker,
    chain: &[Annotated<Subst>],
    dst: Vec<MTy>,
    src: Option<&Ctx>,
) -> Result<Vec<Vec<MTy>>, TypeError> {
    let mut contexts = vec![dst];
    for (i, s) in chain.iter().enumerate() {
        c.ascriptions = Checker::located(&s.ascriptions);
        let cur = contexts.last().cloned().unwrap_or_default();
        let next = match src {
            Some(src) if i + 1 == chain.len() => {
                let src = mctx(src);
                c.subst(&src, &cur, &s.value)?;
                src
            }
            _ => c.subst_src(&cur, &s.value)?,
        };
        contexts.push(next);
    }
    Ok(contexts)
}

fn seal_chain(
    c: &Checker,
    chain: &[Annotated<Subst>],
    contexts: &[Vec<MTy>],
) -> Result<Vec<TypedSubst>, TypeError> {
    let resolved: Vec<Ctx> = contexts.iter().map(|ctx| c.resolve_ctx(ctx)).collect();
    chain
        .iter()
        .enumerate()
        .map(|(i, s)| check_subst(&resolved[i + 1], &resolved[i], &s.value))
        .collect()
}

fn open_ctx(c: &mut Checker, ctx: Option<&Ctx>, len: usize) -> Vec<MTy> {
    match ctx {
        Some(ctx) => mctx(ctx),
        None => (0..len).map(|_| c.unifier.fresh()).collect(),
    }
}

fn raw_chain(chain: &[Annotated<Subst>]) -> Vec<Subst> {
    chain.iter().map(|s| s.value.clone()).collect()
}

/// Elaborates `σ₁ ; σ₂ ; …` where `σ₁` replaces the variables of `dst` and
/// each later substitution replaces the variables of the previous source.
/// `src`, if given, pins the source of the last one. An omitted `dst` is
/// taken as short as the chain allows.
pub fn elaborate_subst_chain(
    chain: &[Annotated<Subst>],
    dst: Option<&Ctx>,
    src: Option<&Ctx>,
) -> Result<Vec<TypedSubst>, TypeError> {
    let mut c = Checker::new(&[]);
    let len = chain_dst_len(&raw_chain(chain), 0, src.map(Ctx::len));
    let dst = open_ctx(&mut c, dst, len);
    let contexts = chain_with(&mut c, chain, dst, src)?;
    seal_chain(&c, chain, &contexts)
}

/// Elaborates a term together with a chain of substitutions to apply to it,
/// so that the term's context and the chain's first target are solved
/// together.
pub fn elaborate_instantiation(
    term: &Annotated<Term>,
    ctx: Option<&Ctx>,
    ty: Option<&Ty>,
    chain: &[Annotated<Subst>],
    src: Option<&Ctx>,
) -> Result<(TypedTerm, Vec<TypedSubst>), TypeError> {
    let mut c = Checker::new(&[]);
    let len = chain_dst_len(&raw_chain(chain), term.value.scope_depth(), src.map(Ctx::len));
    let dst = open_ctx(&mut c, ctx, len);
    let mty = match ty {
        Some(ty) => MTy::from(ty),
        None => c.unifier.fresh(),
    };
    c.ascriptions = Checker::located(&term.ascriptions);
    c.term(&dst, &mty, &term.value)?;
    let contexts = chain_with(&mut c, chain, dst, src)?;
    let ctx = c.resolve_ctx(&contexts[0]);
    let ty = c.unifier.resolve_defaulting(&mty);
    let typed = check_term(&ctx, &ty, &term.value)?;
    Ok((typed, seal_chain(&c, chain, &contexts)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_subst, parse_term, parse_term_annotated};

    fn arrow(a: Ty, b: Ty) -> Ty {
        Ty::arrow(a, b)
    }

    fn nat() -> Ty {
        Ty::Nat
    }

    #[test]
    fn open_term_checks() {
        let (a, b, c) = (nat(), arrow(nat(), nat()), nat());
        let ctx = Ctx::new(vec![arrow(a.clone(), arrow(b.clone(), c.clone())), a, b]);
        let m0 = Term::app(Term::app(Term::index(2), Term::index(1)), Term::Var);
        assert!(check_term(&ctx, &c, &m0).is_ok());
    }

    #[test]
    fn church_two_checks_at_its_type() {
        let church = arrow(arrow(nat(), nat()), arrow(nat(), nat()));
        assert!(check_term(&Ctx::empty(), &church, &Term::two()).is_ok());
    }

    #[test]
    fn var_in_empty_context() {
        assert_eq!(
            check_term(&Ctx::empty(), &nat(), &Term::Var),
            Err(TypeError::EmptyContext { path: Path::root() })
        );
        assert!(matches!(
            check_term(&Ctx::empty(), &nat(), &Term::weaken(Term::Zero)),
            Err(TypeError::EmptyContext { .. })
        ));
    }

    #[test]
    fn mismatch_reports_path() {
        let err = check_term(&Ctx::empty(), &nat(), &Term::suc(Term::lam(Term::Var))).unwrap_err();
        match err {
            TypeError::Mismatch { expected, path, .. } => {
                assert_eq!(expected, "N");
                assert_eq!(path.to_string(), "suc");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn applying_a_number() {
        let err = check_term(&Ctx::empty(), &nat(), &Term::app(Term::Zero, Term::Zero)).unwrap_err();
        assert!(matches!(err, TypeError::NotAFunction { .. }), "{err}");
    }

    #[test]
    fn self_application_fails_occurs_check() {
        let omega = Term::lam(Term::app(Term::Var, Term::Var));
        assert!(infer_term(&Ctx::empty(), &omega).is_err());
    }

    #[test]
    fn beta_redex_needs_no_annotation() {
        let church = arrow(arrow(nat(), nat()), arrow(nat(), nat()));
        let t = Term::app(Term::two(), Term::inc());
        assert!(check_term(&Ctx::empty(), &arrow(nat(), nat()), &t).is_ok());
        assert!(check_term(&Ctx::empty(), &church, &t).is_err());
    }

    #[test]
    fn inference() {
        let ctx = Ctx::new(vec![arrow(nat(), nat())]);
        assert_eq!(infer_term(&ctx, &Term::Var), Ok(arrow(nat(), nat())));
        assert_eq!(infer_term(&Ctx::empty(), &Term::Zero), Ok(nat()));
        assert_eq!(
            infer_term(&Ctx::empty(), &Term::lam(Term::Var)),
            Err(TypeError::CannotInfer { path: Path::root() })
        );
    }

    #[test]
    fn flip_substitution() {
        let (a, b) = (nat(), arrow(nat(), nat()));
        let src = Ctx::new(vec![a.clone(), b.clone()]);
        let dst = Ctx::new(vec![b, a]);
        let flip = parse_subst("id^^ , # , #^").unwrap();
        assert!(check_subst(&src, &dst, &flip).is_ok());
        // swapping two entries is its own inverse
        assert!(check_subst(&dst, &src, &flip).is_ok());
        assert!(check_subst(&src, &src, &flip).is_err());
        assert_eq!(infer_subst_src(&dst, &flip), Ok(src));
    }

    #[test]
    fn lifted_substitution() {
        let src = Ctx::new(vec![nat()]);
        let dst = Ctx::new(vec![arrow(nat(), nat()), nat()]);
        let s = parse_subst("(id , \\ suc #)^ , #").unwrap();
        assert!(check_subst(&src, &dst, &s).is_ok());
        let unlifted = parse_subst("id , \\ suc # , #").unwrap();
        assert!(check_subst(&src, &dst, &unlifted).is_err());
    }

    #[test]
    fn identity_substitution() {
        assert!(check_subst(&Ctx::empty(), &Ctx::empty(), &Subst::Id).is_ok());
        let err = check_subst(&Ctx::new(vec![nat()]), &Ctx::empty(), &Subst::Id).unwrap_err();
        assert!(matches!(err, TypeError::ContextMismatch { .. }), "{err}");
    }

    #[test]
    fn weakening_needs_source_entry() {
        let err = check_subst(&Ctx::empty(), &Ctx::empty(), &Subst::weaken(Subst::Id)).unwrap_err();
        assert!(matches!(err, TypeError::EmptyContext { .. }));
    }

    #[test]
    fn elaboration_solves_context() {
        let m0 = parse_term_annotated("#^^ (#^) #").unwrap();
        let m1 = parse_term_annotated("(#^ #)^ #").unwrap();
        let typed = elaborate_terms(&[m0, m1], None, None).unwrap();
        assert_eq!(typed[0].ctx().to_string(), "[N -> N -> N, N, N]");
        assert_eq!(typed[0].ty(), &nat());
        assert_eq!(typed[0].ctx(), typed[1].ctx());
    }

    #[test]
    fn ascriptions_constrain_elaboration() {
        let t = parse_term_annotated("(\\ # : (N -> N) -> N -> N)").unwrap();
        let typed = elaborate_term(&t, None, None).unwrap();
        assert_eq!(typed.ty().to_string(), "(N -> N) -> N -> N");
        let bad = parse_term_annotated("(zero : N -> N)").unwrap();
        assert!(elaborate_term(&bad, None, None).is_err());
    }

    #[test]
    fn chain_elaboration() {
        let chain = crate::parse::parse_subst_chain("id^ ; id , zero").unwrap();
        let typed = elaborate_subst_chain(&chain, Some(&Ctx::empty()), None).unwrap();
        assert_eq!(typed[0].src().to_string(), "[N]");
        assert_eq!(typed[1].src(), &Ctx::empty());
    }

    #[test]
    fn chain_target_is_inferred() {
        let chain = crate::parse::parse_subst_chain("id , #^").unwrap();
        let typed = elaborate_subst_chain(&chain, None, None).unwrap();
        assert_eq!(typed[0].src().len(), 2);
        assert_eq!(typed[0].dst().len(), 3);
        let chain = crate::parse::parse_subst_chain("id , zero ; id^").unwrap();
        let typed = elaborate_subst_chain(&chain, None, None).unwrap();
        assert_eq!(typed[0].dst().to_string(), "[N]");
        assert_eq!(typed[1].src().to_string(), "[N]");
        let src = Ctx::new(vec![nat(), nat()]);
        let typed = elaborate_subst_chain(&chain, None, Some(&src)).unwrap();
        assert_eq!(typed[0].dst().to_string(), "[N, N]");
    }

    #[test]
    fn instantiation_elaborates_term_and_chain_together() {
        let body = parse_term_annotated("\\ (#^ (#^ #))").unwrap();
        let chain = crate::parse::parse_subst_chain("id , \\ suc #").unwrap();
        let (m, s) = elaborate_instantiation(&body, None, None, &chain, None).unwrap();
        assert_eq!(m.ctx().to_string(), "[N -> N]");
        assert_eq!(m.ty().to_string(), "N -> N");
        assert_eq!(s[0].src(), &Ctx::empty());
        let m = parse_term_annotated("#").unwrap();
        let chain = crate::parse::parse_subst_chain("id , \\ suc #").unwrap();
        let (m, _) = elaborate_instantiation(&m, None, None, &chain, None).unwrap();
        assert_eq!(m.ty().to_string(), "N -> N");
    }

    #[test]
    fn weakening_preserves_typing() {
        let t = parse_term("\\ suc #").unwrap();
        let ty = arrow(nat(), nat());
        for extra in [nat(), ty.clone()] {
            let ctx = Ctx::empty().extend(extra);
            assert!(check_term(&ctx, &ty, &Term::weaken(t.clone())).is_ok());
        }
    }
}
