//! Seeded, type-directed generation of well-typed terms and substitutions.
//!
//! The random source is SplitMix64, so a given configuration produces the
//! same values on every platform.

use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::print::{print_ctx, print_ty};
use crate::syntax::{Ctx, Subst, Term, Ty};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct GenConfig {
    pub seed: u64,
    /// Upper bound on term size, in nodes.
    pub max_term_size: usize,
    pub max_ctx_len: usize,
    pub max_ty_depth: usize,
    /// Probability of wrapping a generated term in a weakening whenever the
    /// context is nonempty.
    pub weaken_bias: f64,
}

impl Default for GenConfig {
    fn default() -> GenConfig {
        GenConfig {
            seed: 0,
            max_term_size: 40,
            max_ctx_len: 5,
            max_ty_depth: 3,
            weaken_bias: 0.3,
        }
    }
}

impl GenConfig {
    pub fn with_seed(seed: u64) -> GenConfig {
        GenConfig {
            seed,
            ..GenConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_term_size == 0 {
            return Err(Error::InvalidConfig("max_term_size must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.weaken_bias) {
            return Err(Error::InvalidConfig(format!(
                "weaken_bias {} is outside [0, 1]",
                self.weaken_bias
            )));
        }
        Ok(())
    }
}

/// Size of the smallest term of `ty` in `ctx`.
fn min_size(ctx: &[Ty], ty: &Ty) -> usize {
    let structural = match ty {
        Ty::Nat => 1,
        Ty::Arrow(a, b) => {
            let mut inner = ctx.to_vec();
            inner.push((**a).clone());
            1 + min_size(&inner, b)
        }
    };
    let var = ctx.iter().rev().position(|t| t == ty).map(|k| k + 1);
    var.map_or(structural, |v| v.min(structural))
}

#[derive(Clone, Copy)]
enum Shape {
    Var,
    Zero,
    Suc,
    Lam,
    App,
}

pub struct Generator {
    cfg: GenConfig,
    rng: SplitMix64,
}

impl Generator {
    pub fn new(cfg: GenConfig) -> Result<Generator> {
        cfg.validate()?;
        let rng = SplitMix64::seed_from_u64(cfg.seed);
        Ok(Generator { cfg, rng })
    }

    pub fn config(&self) -> &GenConfig {
        &self.cfg
    }

    fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n as u64) as usize
    }

    fn chance(&mut self, p: f64) -> bool {
        // 53 random bits, independent of the float sampling in `rand`
        let x = (self.rng.gen::<u64>() >> 11) as f64 / (1u64 << 53) as f64;
        x < p
    }

    /// `N` at `max_ty_depth`, otherwise `N` or an arrow by coin flip.
    pub fn gen_type(&mut self, depth: usize) -> Ty {
        if depth >= self.cfg.max_ty_depth || self.chance(0.5) {
            Ty::Nat
        } else {
            let a = self.gen_type(depth + 1);
            let b = self.gen_type(depth + 1);
            Ty::arrow(a, b)
        }
    }

    pub fn gen_ctx(&mut self) -> Ctx {
        let len = self.below(self.cfg.max_ctx_len + 1);
        Ctx::new((0..len).map(|_| self.gen_type(1)).collect())
    }

    /// A term of `ty` in `ctx` with at most `size` nodes (capped at
    /// `max_term_size`), or the smallest such term when `size` is too small.
    pub fn gen_term(&mut self, ctx: &Ctx, ty: &Ty, size: usize) -> Result<Term> {
        let min = min_size(ctx.entries(), ty);
        let budget = size.min(self.cfg.max_term_size).max(min);
        if min > self.cfg.max_term_size {
            return Err(Error::Unsatisfiable {
                ctx: print_ctx(ctx),
                ty: print_ty(ty),
                size,
            });
        }
        Ok(self.term(ctx.entries(), ty, budget))
    }

    fn term(&mut self, ctx: &[Ty], ty: &Ty, budget: usize) -> Term {
        debug_assert!(budget >= min_size(ctx, ty));
        let weaken_fits = |ctx: &[Ty]| match ctx.split_last() {
            Some((_, rest)) => min_size(rest, ty) < budget,
            None => false,
        };
        let can_weaken = weaken_fits(ctx);
        if can_weaken && self.chance(self.cfg.weaken_bias) {
            return self.weakened(ctx, ty, budget);
        }
        let mut shapes = Vec::with_capacity(4);
        if ctx.last() == Some(ty) {
            shapes.push(Shape::Var);
        }
        match ty {
            Ty::Nat => {
                shapes.push(Shape::Zero);
                if budget >= 2 {
                    shapes.push(Shape::Suc);
                }
            }
            Ty::Arrow(a, b) => {
                let mut inner = ctx.to_vec();
                inner.push((**a).clone());
                if min_size(&inner, b) < budget {
                    shapes.push(Shape::Lam);
                }
            }
        }
        if budget >= 3 {
            shapes.push(Shape::App);
        }
        loop {
            if shapes.is_empty() {
                return self.weakened(ctx, ty, budget);
            }
            let pick = self.below(shapes.len());
            if let Some(t) = self.shape(shapes[pick], ctx, ty, budget) {
                return t;
            }
            shapes.swap_remove(pick);
        }
    }

    fn weakened(&mut self, ctx: &[Ty], ty: &Ty, budget: usize) -> Term {
        let rest = &ctx[..ctx.len() - 1];
        Term::weaken(self.term(rest, ty, budget - 1))
    }

    fn shape(&mut self, shape: Shape, ctx: &[Ty], ty: &Ty, budget: usize) -> Option<Term> {
        Some(match (shape, ty) {
            (Shape::Var, _) => Term::Var,
            (Shape::Zero, _) => Term::Zero,
            (Shape::Suc, _) => Term::suc(self.term(ctx, &Ty::Nat, budget - 1)),
            (Shape::Lam, Ty::Arrow(a, b)) => {
                let mut inner = ctx.to_vec();
                inner.push((**a).clone());
                Term::lam(self.term(&inner, b, budget - 1))
            }
            (Shape::App, _) => {
                let dom = self.gen_type(self.cfg.max_ty_depth.saturating_sub(1));
                let fun_ty = Ty::arrow(dom.clone(), ty.clone());
                let min_fun = min_size(ctx, &fun_ty);
                let min_arg = min_size(ctx, &dom);
                if min_fun + min_arg + 1 > budget {
                    return None;
                }
                let spare = budget - 1 - min_fun - min_arg;
                let extra = self.below(spare + 1);
                let fun = self.term(ctx, &fun_ty, min_fun + extra);
                let arg = self.term(ctx, &dom, budget - 1 - fun.size());
                Term::app(fun, arg)
            }
            (Shape::Lam, Ty::Nat) => return None,
        })
    }

    /// A substitution `src ⊨ dst` whose cons heads are at most `size` nodes.
    pub fn gen_subst(&mut self, src: &Ctx, dst: &Ctx, size: usize) -> Result<Subst> {
        let size = size.max(1);
        for ty in dst.entries() {
            if min_size(src.entries(), ty) > self.cfg.max_term_size {
                return Err(Error::Unsatisfiable {
                    ctx: print_ctx(src),
                    ty: print_ty(ty),
                    size,
                });
            }
        }
        Ok(self.subst(src.entries(), dst.entries(), size))
    }

    fn subst(&mut self, src: &[Ty], dst: &[Ty], size: usize) -> Subst {
        #[derive(Clone, Copy)]
        enum Pick {
            Id,
            Weaken,
            Cons,
        }
        let mut picks = Vec::with_capacity(3);
        if src == dst {
            picks.push(Pick::Id);
        }
        if !src.is_empty() {
            picks.push(Pick::Weaken);
        }
        if !dst.is_empty() {
            picks.push(Pick::Cons);
        }
        match picks[self.below(picks.len())] {
            Pick::Id => Subst::Id,
            Pick::Weaken => Subst::weaken(self.subst(&src[..src.len() - 1], dst, size)),
            Pick::Cons => {
                let (head_ty, rest) = dst.split_last().expect("nonempty target");
                let tail = self.subst(src, rest, size);
                let budget = size.max(min_size(src, head_ty));
                let head = self.term(src, head_ty, budget);
                Subst::cons(tail, head)
            }
        }
    }
}

pub fn gen_type(cfg: &GenConfig, depth: usize) -> Result<Ty> {
    Ok(Generator::new(cfg.clone())?.gen_type(depth))
}

pub fn gen_term(cfg: &GenConfig, ctx: &Ctx, ty: &Ty, size: usize) -> Result<Term> {
    Generator::new(cfg.clone())?.gen_term(ctx, ty, size)
}

pub fn gen_subst(cfg: &GenConfig, src: &Ctx, dst: &Ctx, size: usize) -> Result<Subst> {
    Generator::new(cfg.clone())?.gen_subst(src, dst, size)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::typeck::{check_subst, check_term};

    #[test]
    fn type_depth_limit_forces_nat() {
        let cfg = GenConfig::default();
        assert_eq!(gen_type(&cfg, cfg.max_ty_depth).unwrap(), Ty::Nat);
        let flat = GenConfig {
            max_ty_depth: 0,
            ..GenConfig::default()
        };
        assert_eq!(gen_type(&flat, 0).unwrap(), Ty::Nat);
    }

    #[test]
    fn seeded_generation_is_deterministic() {
        let cfg = GenConfig::with_seed(42);
        assert_eq!(gen_type(&cfg, 0).unwrap(), gen_type(&cfg, 0).unwrap());
        let ctx = Ctx::new(vec![Ty::Nat, Ty::arrow(Ty::Nat, Ty::Nat)]);
        let ty = Ty::arrow(Ty::Nat, Ty::Nat);
        assert_eq!(
            gen_term(&cfg, &ctx, &ty, 30).unwrap(),
            gen_term(&cfg, &ctx, &ty, 30).unwrap()
        );
        assert_eq!(
            gen_subst(&cfg, &ctx, &ctx, 10).unwrap(),
            gen_subst(&cfg, &ctx, &ctx, 10).unwrap()
        );
    }

    #[test]
    fn size_one_leaves() {
        for seed in 0..50 {
            let cfg = GenConfig {
                seed,
                weaken_bias: 0.0,
                ..GenConfig::default()
            };
            assert_eq!(gen_term(&cfg, &Ctx::empty(), &Ty::Nat, 1).unwrap(), Term::Zero);
            let t = gen_term(&cfg, &Ctx::new(vec![Ty::Nat]), &Ty::Nat, 1).unwrap();
            assert!(t == Term::Var || t == Term::Zero, "{t}");
        }
    }

    #[test]
    fn small_sizes_grow_to_the_minimal_inhabitant() {
        let cfg = GenConfig::default();
        let ty = Ty::arrow(Ty::Nat, Ty::arrow(Ty::Nat, Ty::Nat));
        let t = gen_term(&cfg, &Ctx::empty(), &ty, 1).unwrap();
        assert!(check_term(&Ctx::empty(), &ty, &t).is_ok());
        assert_eq!(t.size(), 3);
    }

    #[test]
    fn oversized_minimum_is_unsatisfiable() {
        let cfg = GenConfig {
            max_term_size: 2,
            ..GenConfig::default()
        };
        let ty = Ty::arrow(Ty::Nat, Ty::arrow(Ty::Nat, Ty::Nat));
        assert!(matches!(
            gen_term(&cfg, &Ctx::empty(), &ty, 1),
            Err(Error::Unsatisfiable { .. })
        ));
    }

    #[test]
    fn invalid_configs() {
        let bad = GenConfig {
            weaken_bias: 1.5,
            ..GenConfig::default()
        };
        assert!(Generator::new(bad).is_err());
        let bad = GenConfig {
            max_term_size: 0,
            ..GenConfig::default()
        };
        assert!(Generator::new(bad).is_err());
    }

    #[test]
    fn substitution_shapes() {
        let src = Ctx::new(vec![Ty::Nat]);
        for seed in 0..20 {
            let cfg = GenConfig::with_seed(seed);
            let s = gen_subst(&cfg, &src, &Ctx::empty(), 5).unwrap();
            assert_eq!(s, Subst::weaken(Subst::Id));
        }
        let saw_id = (0..50).any(|seed| {
            gen_subst(&GenConfig::with_seed(seed), &src, &src, 5).unwrap() == Subst::Id
        });
        assert!(saw_id);
    }

    #[test]
    fn generated_values_typecheck() {
        let mut g = Generator::new(GenConfig::with_seed(7)).unwrap();
        for _ in 0..300 {
            let ctx = g.gen_ctx();
            let ty = g.gen_type(0);
            let t = g.gen_term(&ctx, &ty, 40).unwrap();
            assert!(t.size() <= 40, "{t}");
            check_term(&ctx, &ty, &t).unwrap();
            let dst = g.gen_ctx();
            let s = g.gen_subst(&ctx, &dst, 10).unwrap();
            check_subst(&ctx, &dst, &s).unwrap();
        }
    }
}
