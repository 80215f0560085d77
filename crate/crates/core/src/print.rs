//! Canonical printer for the ASCII concrete syntax.
//!
//! Output re-parses to the same tree. A lambda body is parenthesized when it
//! is itself an application or a lambda; application arguments and the
//! operand of `suc` or `^` are atoms.

use crate::syntax::{Ctx, Subst, Term, Ty};

pub fn print_ty(ty: &Ty) -> String {
    let mut out = String::new();
    write_ty(ty, &mut out);
    out
}

fn write_ty(ty: &Ty, out: &mut String) {
    match ty {
        Ty::Nat => out.push('N'),
        Ty::Arrow(a, b) => {
            if matches!(**a, Ty::Arrow(..)) {
                out.push('(');
                write_ty(a, out);
                out.push(')');
            } else {
                write_ty(a, out);
            }
            out.push_str(" -> ");
            write_ty(b, out);
        }
    }
}

pub fn print_ctx(ctx: &Ctx) -> String {
    let entries: Vec<String> = ctx.entries().iter().map(print_ty).collect();
    format!("[{}]", entries.join(", "))
}

pub fn print_term(term: &Term) -> String {
    let mut out = String::new();
    write_term(term, &mut out);
    out
}

/// Prints a term so that it can stand as an application argument.
pub fn print_term_atom(term: &Term) -> String {
    let mut out = String::new();
    write_atom(term, &mut out);
    out
}

fn write_term(term: &Term, out: &mut String) {
    match term {
        Term::Lam(body) => {
            out.push_str("\\ ");
            if matches!(**body, Term::App(..) | Term::Lam(..)) {
                out.push('(');
                write_term(body, out);
                out.push(')');
            } else {
                write_term(body, out);
            }
        }
        Term::App(fun, arg) => {
            write_fun(fun, out);
            out.push(' ');
            write_atom(arg, out);
        }
        Term::Suc(body) => {
            out.push_str("suc ");
            write_atom(body, out);
        }
        _ => write_atom(term, out),
    }
}

fn write_fun(term: &Term, out: &mut String) {
    match term {
        Term::App(..) | Term::Suc(..) => write_term(term, out),
        _ => write_atom(term, out),
    }
}

fn write_atom(term: &Term, out: &mut String) {
    match term {
        Term::Var => out.push('#'),
        Term::Zero => out.push_str("zero"),
        Term::Weaken(body) => {
            write_atom(body, out);
            out.push('^');
        }
        _ => {
            out.push('(');
            write_term(term, out);
            out.push(')');
        }
    }
}

pub fn print_subst(subst: &Subst) -> String {
    let mut out = String::new();
    write_subst(subst, &mut out);
    out
}

fn write_subst(subst: &Subst, out: &mut String) {
    match subst {
        Subst::Id => out.push_str("id"),
        Subst::Weaken(body) => {
            if body.is_cons() {
                out.push('(');
                write_subst(body, out);
                out.push(')');
            } else {
                write_subst(body, out);
            }
            out.push('^');
        }
        Subst::Cons(tail, head) => {
            write_subst(tail, out);
            out.push_str(" , ");
            write_term(head, out);
        }
    }
}

/// `ctx |- term : ty`
pub fn print_term_judgement(ctx: &Ctx, term: &Term, ty: &Ty) -> String {
    format!("{} |- {} : {}", print_ctx(ctx), print_term(term), print_ty(ty))
}

/// `subst : src |= dst`
pub fn print_subst_judgement(subst: &Subst, src: &Ctx, dst: &Ctx) -> String {
    format!(
        "{} : {} |= {}",
        print_subst(subst),
        print_ctx(src),
        print_ctx(dst)
    )
}
