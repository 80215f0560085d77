//! Raw syntax of the explicit-weakening calculus.
//!
//! Terms and substitutions are plain trees. Nothing here enforces typing;
//! [`crate::typeck`] checks raw values and seals them into
//! [`crate::TypedTerm`] / [`crate::TypedSubst`].

use std::fmt;

/// Simple types: naturals and functions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Ty {
    Nat,
    Arrow(Box<Ty>, Box<Ty>),
}

impl Ty {
    pub fn arrow(domain: Ty, codomain: Ty) -> Ty {
        Ty::Arrow(Box::new(domain), Box::new(codomain))
    }

    /// Number of arrows along the codomain spine.
    pub fn arity(&self) -> usize {
        match self {
            Ty::Nat => 0,
            Ty::Arrow(_, b) => 1 + b.arity(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Ty::Nat => 0,
            Ty::Arrow(a, b) => 1 + a.depth().max(b.depth()),
        }
    }
}

/// A typing context. The last entry is de Bruijn index zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Ctx(Vec<Ty>);

impl Ctx {
    pub fn empty() -> Ctx {
        Ctx(Vec::new())
    }

    pub fn new(entries: Vec<Ty>) -> Ctx {
        Ctx(entries)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Entries from outermost to innermost.
    pub fn entries(&self) -> &[Ty] {
        &self.0
    }

    /// `Γ ▷ A`.
    pub fn extend(&self, ty: Ty) -> Ctx {
        let mut entries = self.0.clone();
        entries.push(ty);
        Ctx(entries)
    }

    /// Splits `Γ ▷ A` into `(Γ, A)`.
    pub fn split_last(&self) -> Option<(Ctx, &Ty)> {
        let (last, rest) = self.0.split_last()?;
        Some((Ctx(rest.to_vec()), last))
    }

    pub fn last(&self) -> Option<&Ty> {
        self.0.last()
    }

    /// Type of de Bruijn index `index`, counted from the right.
    pub fn lookup(&self, index: usize) -> Option<&Ty> {
        self.0.len().checked_sub(index + 1).map(|i| &self.0[i])
    }
}

impl From<Vec<Ty>> for Ctx {
    fn from(entries: Vec<Ty>) -> Ctx {
        Ctx(entries)
    }
}

/// Terms. `Var` is de Bruijn index zero; every other index is a stack of
/// `Weaken` nodes over `Var`, though `Weaken` may wrap any term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var,
    Weaken(Box<Term>),
    Lam(Box<Term>),
    App(Box<Term>, Box<Term>),
    Zero,
    Suc(Box<Term>),
}

impl Term {
    pub fn weaken(body: Term) -> Term {
        Term::Weaken(Box::new(body))
    }

    pub fn lam(body: Term) -> Term {
        Term::Lam(Box::new(body))
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Box::new(fun), Box::new(arg))
    }

    pub fn suc(body: Term) -> Term {
        Term::Suc(Box::new(body))
    }

    /// Index `n` as `Var` under `n` weakenings.
    pub fn index(n: usize) -> Term {
        (0..n).fold(Term::Var, |t, _| Term::weaken(t))
    }

    /// Wraps `self` in `n` weakenings.
    pub fn weaken_by(self, n: usize) -> Term {
        (0..n).fold(self, |t, _| Term::weaken(t))
    }

    /// Node count.
    pub fn size(&self) -> usize {
        match self {
            Term::Var | Term::Zero => 1,
            Term::Weaken(m) | Term::Lam(m) | Term::Suc(m) => 1 + m.size(),
            Term::App(l, m) => 1 + l.size() + m.size(),
        }
    }

    /// If `self` is `Var` under `k` weakenings, returns `k`.
    pub fn as_index(&self) -> Option<usize> {
        match self {
            Term::Var => Some(0),
            Term::Weaken(m) => m.as_index().map(|k| k + 1),
            _ => None,
        }
    }

    /// Smallest context length in which the term is well scoped.
    pub fn scope_depth(&self) -> usize {
        match self {
            Term::Var => 1,
            Term::Zero => 0,
            Term::Weaken(m) => m.scope_depth() + 1,
            Term::Lam(n) => n.scope_depth().saturating_sub(1),
            Term::App(l, m) => l.scope_depth().max(m.scope_depth()),
            Term::Suc(m) => m.scope_depth(),
        }
    }

    /// `inc = ƛ (suc ●)`.
    pub fn inc() -> Term {
        Term::lam(Term::suc(Term::Var))
    }

    /// Church numeral two, `ƛ (ƛ (● ↑ · (● ↑ · ●)))`.
    pub fn two() -> Term {
        let one = || Term::weaken(Term::Var);
        Term::lam(Term::lam(Term::app(one(), Term::app(one(), Term::Var))))
    }
}

/// Substitutions `Γ ⊨ Δ`: replace every variable of `Δ` by a term over `Γ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Subst {
    Id,
    Weaken(Box<Subst>),
    Cons(Box<Subst>, Box<Term>),
}

impl Subst {
    pub fn weaken(body: Subst) -> Subst {
        Subst::Weaken(Box::new(body))
    }

    pub fn cons(tail: Subst, head: Term) -> Subst {
        Subst::Cons(Box::new(tail), Box::new(head))
    }

    pub fn weaken_by(self, n: usize) -> Subst {
        (0..n).fold(self, |s, _| Subst::weaken(s))
    }

    pub fn is_cons(&self) -> bool {
        matches!(self, Subst::Cons(..))
    }

    /// Sum of head sizes plus one per constructor.
    pub fn size(&self) -> usize {
        match self {
            Subst::Id => 1,
            Subst::Weaken(s) => 1 + s.size(),
            Subst::Cons(s, m) => 1 + s.size() + m.size(),
        }
    }
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::print::print_ty(self))
    }
}

impl fmt::Display for Ctx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::print::print_ctx(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::print::print_term(self))
    }
}

impl fmt::Display for Subst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::print::print_subst(self))
    }
}
