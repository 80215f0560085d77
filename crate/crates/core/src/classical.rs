//! Classical de Bruijn terms with numbered variables, used as an oracle.
//!
//! Nothing here calls into the engine: shifting, parallel substitution and
//! normalization are the textbook definitions. [`erase_term`] and [`embed`]
//! translate between the two representations.

use std::fmt;

use crate::parse::{Annotated, Parser, SyntaxError, Tok};
use crate::syntax::{Ctx, Subst, Term, Ty};
use crate::typeck::{check_term, elaborate_term, TypedSubst, TypedTerm};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ClassicalTerm {
    Var(usize),
    Lam(Box<ClassicalTerm>),
    App(Box<ClassicalTerm>, Box<ClassicalTerm>),
    Zero,
    Suc(Box<ClassicalTerm>),
}

use ClassicalTerm as C;

impl ClassicalTerm {
    pub fn lam(body: C) -> C {
        C::Lam(Box::new(body))
    }

    pub fn app(fun: C, arg: C) -> C {
        C::App(Box::new(fun), Box::new(arg))
    }

    pub fn suc(body: C) -> C {
        C::Suc(Box::new(body))
    }

    /// True when every free index is below `depth`.
    pub fn is_well_scoped(&self, depth: usize) -> bool {
        match self {
            C::Var(i) => *i < depth,
            C::Zero => true,
            C::Lam(b) => b.is_well_scoped(depth + 1),
            C::App(f, a) => f.is_well_scoped(depth) && a.is_well_scoped(depth),
            C::Suc(b) => b.is_well_scoped(depth),
        }
    }

    fn first_out_of_scope(&self, depth: usize, binders: usize) -> Option<usize> {
        match self {
            C::Var(i) if *i >= depth + binders => Some(*i - binders),
            C::Var(_) | C::Zero => None,
            C::Lam(b) => b.first_out_of_scope(depth, binders + 1),
            C::App(f, a) => f
                .first_out_of_scope(depth, binders)
                .or_else(|| a.first_out_of_scope(depth, binders)),
            C::Suc(b) => b.first_out_of_scope(depth, binders),
        }
    }
}

/// Images of a substitution, `images[i]` replacing index `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParallelSubst {
    pub images: Vec<ClassicalTerm>,
}

impl ParallelSubst {
    pub fn new(images: Vec<ClassicalTerm>) -> ParallelSubst {
        ParallelSubst { images }
    }

    pub fn identity(len: usize) -> ParallelSubst {
        ParallelSubst::new((0..len).map(C::Var).collect())
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }
}

fn shift_signed(t: &C, amount: isize, cutoff: usize) -> C {
    match t {
        C::Var(i) if *i >= cutoff => C::Var(i.checked_add_signed(amount).expect("negative index")),
        C::Var(i) => C::Var(*i),
        C::Zero => C::Zero,
        C::Lam(b) => C::lam(shift_signed(b, amount, cutoff + 1)),
        C::App(f, a) => C::app(shift_signed(f, amount, cutoff), shift_signed(a, amount, cutoff)),
        C::Suc(b) => C::suc(shift_signed(b, amount, cutoff)),
    }
}

/// Adds `amount` to every index at or above `cutoff`.
pub fn shift(t: &ClassicalTerm, amount: usize, cutoff: usize) -> ClassicalTerm {
    shift_signed(t, amount as isize, cutoff)
}

/// Simultaneous substitution of `env.images[i]` for each free index `i`.
pub fn psubst(t: &ClassicalTerm, env: &ParallelSubst) -> Result<ClassicalTerm> {
    Ok(match t {
        C::Var(i) => env.images.get(*i).cloned().ok_or(Error::Scope {
            index: *i,
            depth: env.len(),
        })?,
        C::Zero => C::Zero,
        C::Lam(b) => {
            let mut images = Vec::with_capacity(env.len() + 1);
            images.push(C::Var(0));
            images.extend(env.images.iter().map(|m| shift(m, 1, 0)));
            C::lam(psubst(b, &ParallelSubst::new(images))?)
        }
        C::App(f, a) => C::app(psubst(f, env)?, psubst(a, env)?),
        C::Suc(b) => C::suc(psubst(b, env)?),
    })
}

/// Each weakening becomes a shift by one.
pub fn erase_raw(m: &Term) -> ClassicalTerm {
    match m {
        Term::Var => C::Var(0),
        Term::Weaken(b) => shift(&erase_raw(b), 1, 0),
        Term::Lam(b) => C::lam(erase_raw(b)),
        Term::App(f, a) => C::app(erase_raw(f), erase_raw(a)),
        Term::Zero => C::Zero,
        Term::Suc(b) => C::suc(erase_raw(b)),
    }
}

pub fn erase_term(m: &TypedTerm) -> ClassicalTerm {
    erase_raw(m.term())
}

/// Denotation of a substitution whose target has `dst_len` entries.
pub fn erase_subst_raw(s: &Subst, dst_len: usize) -> ParallelSubst {
    match s {
        Subst::Id => ParallelSubst::identity(dst_len),
        Subst::Weaken(b) => {
            let inner = erase_subst_raw(b, dst_len);
            ParallelSubst::new(inner.images.iter().map(|m| shift(m, 1, 0)).collect())
        }
        Subst::Cons(tail, head) => {
            let mut images = vec![erase_raw(head)];
            images.extend(erase_subst_raw(tail, dst_len.saturating_sub(1)).images);
            ParallelSubst::new(images)
        }
    }
}

pub fn erase_subst(s: &TypedSubst) -> ParallelSubst {
    erase_subst_raw(s.subst(), s.dst().len())
}

/// Index `n` becomes `#` under `n` weakenings; nothing else is weakened.
pub fn embed_raw(t: &ClassicalTerm) -> Term {
    match t {
        C::Var(i) => Term::index(*i),
        C::Lam(b) => Term::lam(embed_raw(b)),
        C::App(f, a) => Term::app(embed_raw(f), embed_raw(a)),
        C::Zero => Term::Zero,
        C::Suc(b) => Term::suc(embed_raw(b)),
    }
}

/// Embeds a classical term, checking it at `ty` in `ctx`.
pub fn embed(t: &ClassicalTerm, ctx: &Ctx, ty: &Ty) -> Result<TypedTerm> {
    if let Some(index) = t.first_out_of_scope(ctx.len(), 0) {
        return Err(Error::Scope {
            index,
            depth: ctx.len(),
        });
    }
    Ok(check_term(ctx, ty, &embed_raw(t))?)
}

/// [`embed`] with the context and type optional; see
/// [`elaborate_term`](crate::typeck::elaborate_term).
pub fn embed_open(t: &ClassicalTerm, ctx: Option<&Ctx>, ty: Option<&Ty>) -> Result<TypedTerm> {
    if let Some(ctx) = ctx {
        if let Some(index) = t.first_out_of_scope(ctx.len(), 0) {
            return Err(Error::Scope {
                index,
                depth: ctx.len(),
            });
        }
    }
    Ok(elaborate_term(&Annotated::bare(embed_raw(t)), ctx, ty)?)
}

/// `body[0 := arg]` with the binder removed.
fn subst_top(body: &C, arg: &C) -> C {
    fn go(t: &C, arg: &C, depth: usize) -> C {
        match t {
            C::Var(i) if *i == depth => shift(arg, depth, 0),
            C::Var(i) if *i > depth => C::Var(i - 1),
            C::Var(i) => C::Var(*i),
            C::Zero => C::Zero,
            C::Lam(b) => C::lam(go(b, arg, depth + 1)),
            C::App(f, a) => C::app(go(f, arg, depth), go(a, arg, depth)),
            C::Suc(b) => C::suc(go(b, arg, depth)),
        }
    }
    go(body, arg, 0)
}

fn step(t: &C) -> Option<C> {
    match t {
        C::App(f, a) => {
            if let C::Lam(body) = &**f {
                return Some(subst_top(body, a));
            }
            if let Some(f) = step(f) {
                return Some(C::app(f, (**a).clone()));
            }
            step(a).map(|a| C::app((**f).clone(), a))
        }
        C::Lam(b) => step(b).map(C::lam),
        C::Suc(b) => step(b).map(C::suc),
        C::Var(_) | C::Zero => None,
    }
}

/// Leftmost-outermost reduction to beta normal form.
pub fn classical_normalize(t: &ClassicalTerm, step_limit: usize) -> Result<ClassicalTerm> {
    let mut current = t.clone();
    let mut steps = 0;
    while let Some(next) = step(&current) {
        if steps == step_limit {
            return Err(Error::StepLimit { limit: step_limit });
        }
        steps += 1;
        current = next;
    }
    Ok(current)
}

pub fn print_classical(t: &ClassicalTerm) -> String {
    fn term(t: &C, out: &mut String) {
        match t {
            C::Lam(b) => {
                out.push_str("λ. ");
                term(b, out);
            }
            C::App(f, a) => {
                fun(f, out);
                out.push(' ');
                atom(a, out);
            }
            C::Suc(b) => {
                out.push_str("suc ");
                atom(b, out);
            }
            _ => atom(t, out),
        }
    }
    fn fun(t: &C, out: &mut String) {
        match t {
            C::App(..) | C::Suc(..) => term(t, out),
            _ => atom(t, out),
        }
    }
    fn atom(t: &C, out: &mut String) {
        match t {
            C::Var(i) => out.push_str(&i.to_string()),
            C::Zero => out.push_str("zero"),
            _ => {
                out.push('(');
                term(t, out);
                out.push(')');
            }
        }
    }
    let mut out = String::new();
    term(t, &mut out);
    out
}

impl fmt::Display for ClassicalTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_classical(self))
    }
}

/// Parses `λ. body` (or `\. body`), numbered variables, juxtaposition,
/// `zero` and `suc`.
pub fn parse_classical(text: &str) -> Result<ClassicalTerm, SyntaxError> {
    fn term(p: &mut Parser) -> Result<C, SyntaxError> {
        if p.eat(&Tok::Lambda) {
            p.eat(&Tok::Dot);
            return Ok(C::lam(term(p)?));
        }
        let mut fun = if p.eat(&Tok::Suc) {
            C::suc(arg(p)?.ok_or_else(|| p.error())?)
        } else {
            arg(p)?.ok_or_else(|| p.error())?
        };
        loop {
            if p.eat(&Tok::Lambda) {
                p.eat(&Tok::Dot);
                return Ok(C::app(fun, C::lam(term(p)?)));
            }
            match arg(p)? {
                Some(a) => fun = C::app(fun, a),
                None => return Ok(fun),
            }
        }
    }
    fn arg(p: &mut Parser) -> Result<Option<C>, SyntaxError> {
        if let Tok::Int(i) = *p.peek() {
            p.bump();
            return Ok(Some(C::Var(i)));
        }
        p.expect_desc("an index");
        if p.eat(&Tok::Zero) {
            return Ok(Some(C::Zero));
        }
        if p.eat(&Tok::LParen) {
            let t = term(p)?;
            p.expect(&Tok::RParen)?;
            return Ok(Some(t));
        }
        Ok(None)
    }
    let mut p = Parser::new(text)?;
    let t = term(&mut p)?;
    p.finish()?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_subst, parse_term};
    use crate::typeck::check_subst;

    fn v(i: usize) -> C {
        C::Var(i)
    }

    fn inc() -> C {
        C::lam(C::suc(v(0)))
    }

    #[test]
    fn shift_examples() {
        assert_eq!(shift(&v(0), 1, 0), v(1));
        assert_eq!(shift(&C::lam(v(0)), 5, 0), C::lam(v(0)));
        assert_eq!(shift(&C::lam(v(1)), 1, 0), C::lam(v(2)));
        assert_eq!(shift(&v(0), 3, 1), v(0));
    }

    #[test]
    fn psubst_examples() {
        let env = ParallelSubst::new(vec![C::Zero]);
        assert_eq!(psubst(&v(0), &env).unwrap(), C::Zero);
        let body = C::lam(C::app(v(1), v(0)));
        let env = ParallelSubst::new(vec![inc()]);
        assert_eq!(psubst(&body, &env).unwrap(), C::lam(C::app(inc(), v(0))));
        let t = C::lam(C::app(v(2), C::app(v(0), v(1))));
        assert_eq!(psubst(&t, &ParallelSubst::identity(2)).unwrap(), t);
        assert_eq!(
            psubst(&v(3), &ParallelSubst::identity(2)),
            Err(Error::Scope { index: 3, depth: 2 })
        );
    }

    #[test]
    fn erase_examples() {
        let m0 = parse_term("#^^ (#^) #").unwrap();
        let m1 = parse_term("(#^ #)^ #").unwrap();
        let want = C::app(C::app(v(2), v(1)), v(0));
        assert_ne!(m0, m1);
        assert_eq!(erase_raw(&m0), want);
        assert_eq!(erase_raw(&m1), want);
        assert_eq!(
            erase_raw(&Term::two()),
            C::lam(C::lam(C::app(v(1), C::app(v(1), v(0)))))
        );
    }

    #[test]
    fn erase_subst_examples() {
        let n = Ty::Nat;
        let id = check_subst(&Ctx::new(vec![n.clone()]), &Ctx::new(vec![n.clone()]), &Subst::Id).unwrap();
        assert_eq!(erase_subst(&id), ParallelSubst::new(vec![v(0)]));
        let s = check_subst(&Ctx::empty(), &Ctx::new(vec![n.clone()]), &parse_subst("id , zero").unwrap()).unwrap();
        assert_eq!(erase_subst(&s), ParallelSubst::new(vec![C::Zero]));
        let f = Ty::arrow(Ty::Nat, Ty::Nat);
        let flip = check_subst(
            &Ctx::new(vec![n.clone(), f.clone()]),
            &Ctx::new(vec![f, n]),
            &parse_subst("id^^ , # , #^").unwrap(),
        )
        .unwrap();
        assert_eq!(erase_subst(&flip), ParallelSubst::new(vec![v(1), v(0)]));
    }

    #[test]
    fn embed_examples() {
        assert_eq!(embed_raw(&v(2)), Term::index(2));
        assert_eq!(embed_raw(&C::Zero), Term::Zero);
        let m0 = parse_term("#^^ (#^) #").unwrap();
        let m1 = parse_term("(#^ #)^ #").unwrap();
        assert_eq!(embed_raw(&erase_raw(&m1)), m0);
        let ctx = Ctx::new(vec![Ty::Nat]);
        assert_eq!(
            embed(&v(1), &ctx, &Ty::Nat),
            Err(Error::Scope { index: 1, depth: 1 })
        );
        assert!(matches!(
            embed(&C::lam(v(0)), &ctx, &Ty::Nat),
            Err(Error::Type(_))
        ));
        assert!(embed(&C::lam(v(1)), &ctx, &Ty::arrow(Ty::Nat, Ty::Nat)).is_ok());
    }

    #[test]
    fn normalize_examples() {
        let two = C::lam(C::lam(C::app(v(1), C::app(v(1), v(0)))));
        let out = classical_normalize(&C::app(two, inc()), 100).unwrap();
        assert_eq!(out, C::lam(C::suc(C::suc(v(0)))));
        assert_eq!(classical_normalize(&C::Zero, 1).unwrap(), C::Zero);
        let id_app = C::app(C::lam(v(0)), C::Zero);
        assert_eq!(classical_normalize(&id_app, 1).unwrap(), C::Zero);
        assert_eq!(
            classical_normalize(&id_app, 0),
            Err(Error::StepLimit { limit: 0 })
        );
    }

    #[test]
    fn beta_under_binder_shifts_free_variables() {
        // λ. (λ. 1) 0  →  λ. 0
        let t = C::lam(C::app(C::lam(v(1)), v(0)));
        assert_eq!(classical_normalize(&t, 10).unwrap(), C::lam(v(0)));
        // (λ. λ. 1) 3  under no binder → λ. 4
        let t = C::app(C::lam(C::lam(v(1))), v(3));
        assert_eq!(classical_normalize(&t, 10).unwrap(), C::lam(v(4)));
    }

    #[test]
    fn printing_and_parsing() {
        let two = C::lam(C::lam(C::app(v(1), C::app(v(1), v(0)))));
        assert_eq!(print_classical(&two), "λ. λ. 1 (1 0)");
        assert_eq!(parse_classical("λ. λ. 1 (1 0)").unwrap(), two);
        assert_eq!(parse_classical("\\. \\. 1 (1 0)").unwrap(), two);
        assert_eq!(print_classical(&C::suc(C::suc(v(0)))), "suc (suc 0)");
        assert!(parse_classical("λ.").is_err());
    }
}
