//! Evaluation of types, contexts and terms in a families model.
//!
//! An intuitionistic context denotes the finite set of its environments: a
//! variable of type `A` ranges over the global elements `Hom(I, ⟦A⟧)`. A term
//! `Δ;Ξ ⊢ t : A` denotes, at each environment, the morphism `⨂⟦Ξ⟧ → ⟦A⟧`
//! obtained by evaluating `t` on the generators of `⨂⟦Ξ⟧`. Elimination of a
//! positive type sums the body over the components of the scrutinee, which is
//! exactly composing with the distributivity isomorphisms.

use std::cell::Cell;
use std::collections::HashMap;

use super::{Config, ModelError, Mor, SObj, SmcBackend, ENUM_LIMIT};
use crate::checker::{self, open2, Derivation, DualContext, Signature};
use crate::syntax::{Syntax, Term, Ty, Var};

/// An environment: the value of each intuitionistic variable, in order.
pub type Point<E> = Vec<(String, E)>;

/// A family of morphisms, one per environment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Denotation<E> {
    pub points: Vec<(Point<E>, Mor<E>)>,
}

pub struct Interp<'a, B: SmcBackend> {
    pub backend: &'a B,
    pub sig: &'a Signature,
    pub cfg: &'a Config,
    fresh: Cell<usize>,
}

#[derive(Clone)]
struct Scope<E> {
    ctx: DualContext,
    vals: HashMap<String, E>,
}

impl<E: Clone> Scope<E> {
    fn with_int(&self, x: &str, ty: Ty, v: E) -> Self {
        let mut s = self.clone();
        s.ctx = s.ctx.with_int(x, ty);
        s.vals.insert(x.to_string(), v);
        s
    }

    fn with_lin(&self, x: &str, ty: Ty, v: E) -> Self {
        let mut s = self.clone();
        s.ctx = s.ctx.with_lin(x, ty);
        s.vals.insert(x.to_string(), v);
        s
    }
}

fn ill(m: impl Into<String>) -> ModelError {
    ModelError::Ill(m.into())
}

impl<'a, B: SmcBackend> Interp<'a, B> {
    pub fn new(backend: &'a B, sig: &'a Signature, cfg: &'a Config) -> Self {
        Interp {
            backend,
            sig,
            cfg,
            fresh: Cell::new(0),
        }
    }

    fn fresh(&self, hint: &str) -> String {
        let n = self.fresh.get();
        self.fresh.set(n + 1);
        format!("{}%m{}", hint, n)
    }

    fn scope(&self, int: &[(String, Ty)], point: &Point<B::Elem>) -> Scope<B::Elem> {
        let mut ctx = DualContext::new();
        for (x, t) in int {
            ctx = ctx.with_int(x, t.clone());
        }
        Scope {
            ctx,
            vals: point.iter().cloned().collect(),
        }
    }

    /// `⟦Δ⟧`, enumerated variable by variable.
    pub fn interp_ctx(&self, int: &[(String, Ty)]) -> Result<Vec<Point<B::Elem>>, ModelError> {
        let mut out: Vec<Point<B::Elem>> = vec![vec![]];
        for (i, (x, ty)) in int.iter().enumerate() {
            let mut next = Vec::new();
            for p in &out {
                let s = self.scope(&int[..i], p);
                let o = self.ty(&s, ty)?;
                for v in self.backend.points(&o)? {
                    let mut q = p.clone();
                    q.push((x.clone(), v));
                    next.push(q);
                }
                if next.len() as u128 > ENUM_LIMIT {
                    return Err(ModelError::TooLarge("environments of the context".into()));
                }
            }
            out = next;
        }
        Ok(out)
    }

    /// The object `⟦A⟧` at one environment of `Δ`.
    pub fn interp_type(&self, int: &[(String, Ty)], point: &Point<B::Elem>, ty: &Ty) -> Result<SObj, ModelError> {
        self.ty(&self.scope(int, point), ty)
    }

    /// The global element a term without linear variables denotes.
    pub fn value(&self, int: &[(String, Ty)], point: &Point<B::Elem>, t: &Term, ty: &Ty) -> Result<B::Elem, ModelError> {
        self.eval(&self.scope(int, point), t, ty)
    }

    fn ty(&self, s: &Scope<B::Elem>, ty: &Ty) -> Result<SObj, ModelError> {
        let b = self.backend;
        let o = match ty {
            Ty::Base(name, args) => SObj::Atom(self.base(s, name, args)?),
            Ty::Unit => SObj::Unit,
            Ty::Tensor(x, y) => SObj::tensor(self.ty(s, x)?, self.ty(s, y)?),
            Ty::Lolli(x, y) => SObj::hom(self.ty(s, x)?, self.ty(s, y)?),
            Ty::Top => SObj::top(),
            Ty::With(x, y) => SObj::Prod(vec![self.ty(s, x)?, self.ty(s, y)?]),
            Ty::Zero => SObj::initial(),
            Ty::Plus(x, y) => SObj::Coprod(vec![self.ty(s, x)?, self.ty(s, y)?]),
            Ty::Bang(a) => {
                let n = b.points(&self.ty(s, a)?)?.len();
                SObj::Coprod(vec![SObj::Unit; n])
            }
            Ty::Sigma(_, a, body) => SObj::Coprod(self.fibres(s, a, body)?),
            Ty::Pi(_, a, body) => SObj::Prod(self.fibres(s, a, body)?),
            Ty::Id(a, l, r) => {
                if self.eval(s, l, a)? == self.eval(s, r, a)? {
                    SObj::Unit
                } else {
                    SObj::initial()
                }
            }
            Ty::Two => SObj::two(),
        };
        b.admit(&o)?;
        Ok(o)
    }

    /// `⟦B⟧(a)` for every global element `a` of `⟦A⟧`.
    fn fibres(&self, s: &Scope<B::Elem>, a: &Ty, body: &Ty) -> Result<Vec<SObj>, ModelError> {
        let oa = self.ty(s, a)?;
        let x = self.fresh("x");
        let opened = body.instantiate(&Term::free(x.as_str()));
        self.backend
            .points(&oa)?
            .into_iter()
            .map(|p| self.ty(&s.with_int(&x, a.clone(), p), &opened))
            .collect()
    }

    /// Element indices of the arguments of a base type or constant.
    fn key(&self, s: &Scope<B::Elem>, params: &[(String, Ty)], args: &[Term]) -> Result<Vec<u128>, ModelError> {
        let mut sub = Vec::new();
        let mut key = Vec::new();
        for ((p, pty), a) in params.iter().zip(args) {
            let t = pty.subst_many(&sub);
            let o = self.ty(s, &t)?;
            let v = self.eval(s, a, &t)?;
            key.push(self.backend.point_index(&o, &v));
            sub.push((p.clone(), a.clone()));
        }
        Ok(key)
    }

    fn base(&self, s: &Scope<B::Elem>, name: &str, args: &[Term]) -> Result<u32, ModelError> {
        let decl = self.sig.types.get(name).ok_or_else(|| ill(format!("unknown base type `{}`", name)))?;
        let key = self.key(s, &decl.params, args)?;
        let lo = self.backend.atom_min();
        if self.cfg.discrete_two {
            // indices 1 and 2 are tt and ff in both backends
            let off = decl.params.iter().zip(&key).any(|((_, t), k)| *t == Ty::Two && !(1..=2).contains(k));
            if off {
                return Ok(lo);
            }
        }
        Ok(self.cfg.type_size(name, &key, lo))
    }

    fn infer(&self, s: &Scope<B::Elem>, t: &Term) -> Result<Ty, ModelError> {
        checker::infer_relaxed(self.sig, &s.ctx, t).map_err(|d| ill(d.message))
    }

    fn eval(&self, s: &Scope<B::Elem>, t: &Term, ty: &Ty) -> Result<B::Elem, ModelError> {
        let b = self.backend;
        match t {
            Term::Var(Var::Free(x)) => s.vals.get(x).cloned().ok_or_else(|| ill(format!("no value for `{}`", x))),
            Term::Var(Var::Bound(_)) => Err(ill("dangling bound variable")),
            Term::Const(name, args) => {
                let decl = self.sig.consts.get(name).ok_or_else(|| ill(format!("unknown constant `{}`", name)))?;
                let key = self.key(s, &decl.params, args)?;
                let o = self.ty(s, ty)?;
                let n = b.npoints(&o).ok_or_else(|| ModelError::TooLarge(name.clone()))?;
                Ok(b.point(&o, self.cfg.const_point(name, &key, n)))
            }
            Term::Star => Ok(b.unit()),
            Term::LetUnit { scrut, body, .. } => {
                let v = self.eval(s, scrut, &Ty::Unit)?;
                if b.coords(&SObj::Unit, &v).is_empty() {
                    Ok(b.zero(&self.ty(s, ty)?))
                } else {
                    self.eval(s, body, ty)
                }
            }
            Term::Tensor(l, r) => {
                let Ty::Tensor(x, y) = ty else { return Err(ill("tensor at a non-tensor type")) };
                let (vl, vr) = (self.eval(s, l, x)?, self.eval(s, r, y)?);
                Ok(b.tensor(&self.ty(s, x)?, &self.ty(s, y)?, &vl, &vr))
            }
            Term::LetTensor { scrut, body, .. } => {
                let Ty::Tensor(x, y) = self.infer(s, scrut)? else { return Err(ill("let-tensor of a non-tensor")) };
                let v = self.eval(s, scrut, &Ty::Tensor(x.clone(), y.clone()))?;
                let (ox, oy) = (self.ty(s, &x)?, self.ty(s, &y)?);
                let (nx, ny) = (self.fresh("x"), self.fresh("y"));
                let opened = open2(body, &nx, &ny);
                let mut parts = Vec::new();
                for (u, w) in b.untensor(&ox, &oy, &v) {
                    let s2 = s.with_lin(&nx, (*x).clone(), u).with_lin(&ny, (*y).clone(), w);
                    parts.push(self.eval(&s2, &opened, ty)?);
                }
                Ok(b.sum(&self.ty(s, ty)?, &parts))
            }
            Term::Lam(_, _, body) => {
                let Ty::Lolli(x, y) = ty else { return Err(ill("lambda at a non-function type")) };
                let (ox, oy) = (self.ty(s, x)?, self.ty(s, y)?);
                let n = self.fresh("x");
                let opened = body.instantiate(&Term::free(n.as_str()));
                let images = (0..b.ngens(&ox))
                    .map(|k| self.eval(&s.with_lin(&n, (**x).clone(), b.gen(&ox, k)), &opened, y))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(b.hom(&ox, &oy, &images))
            }
            Term::App(f, a) => {
                let fty = self.infer(s, f)?;
                let Ty::Lolli(x, y) = &fty else { return Err(ill("application of a non-function")) };
                let vf = self.eval(s, f, &fty)?;
                let va = self.eval(s, a, x)?;
                Ok(b.apply(&self.ty(s, x)?, &self.ty(s, y)?, &vf, &va))
            }
            Term::TopUnit | Term::Abort(..) => Ok(b.zero(&self.ty(s, ty)?)),
            Term::Pair(l, r) => {
                let Ty::With(x, y) = ty else { return Err(ill("pair at a non-product type")) };
                let parts = [self.ty(s, x)?, self.ty(s, y)?];
                Ok(b.tuple(&parts, &[self.eval(s, l, x)?, self.eval(s, r, y)?]))
            }
            Term::Fst(p) | Term::Snd(p) => {
                let pty = self.infer(s, p)?;
                let Ty::With(x, y) = &pty else { return Err(ill("projection from a non-product")) };
                let parts = [self.ty(s, x)?, self.ty(s, y)?];
                let v = self.eval(s, p, &pty)?;
                Ok(b.proj(&parts, &v, if matches!(t, Term::Fst(_)) { 0 } else { 1 }))
            }
            Term::Inl(_, a) | Term::Inr(_, a) => {
                let Ty::Plus(x, y) = ty else { return Err(ill("injection at a non-sum type")) };
                let parts = [self.ty(s, x)?, self.ty(s, y)?];
                let (i, inner) = if matches!(t, Term::Inl(..)) { (0, x) } else { (1, y) };
                Ok(b.inject(&parts, i, &self.eval(s, a, inner)?))
            }
            Term::Case { scrut, left, right, .. } => {
                let sty = self.infer(s, scrut)?;
                let Ty::Plus(x, y) = &sty else { return Err(ill("case on a non-sum")) };
                let parts = [self.ty(s, x)?, self.ty(s, y)?];
                let v = self.eval(s, scrut, &sty)?;
                let mut out = Vec::new();
                for (i, e) in b.cases(&parts, &v) {
                    let (branch, bty) = if i == 0 { (left, x) } else { (right, y) };
                    let n = self.fresh("c");
                    let s2 = s.with_lin(&n, (**bty).clone(), e);
                    out.push(self.eval(&s2, &branch.instantiate(&Term::free(n.as_str())), ty)?);
                }
                Ok(b.sum(&self.ty(s, ty)?, &out))
            }
            Term::Bang(a) => {
                let Ty::Bang(x) = ty else { return Err(ill("! at a non-! type")) };
                let ox = self.ty(s, x)?;
                let k = b.point_index(&ox, &self.eval(s, a, x)?) as usize;
                let parts = vec![SObj::Unit; b.points(&ox)?.len()];
                Ok(b.inject(&parts, k, &b.unit()))
            }
            Term::LetBang { scrut, body, .. } => {
                let sty = self.infer(s, scrut)?;
                let Ty::Bang(x) = &sty else { return Err(ill("let-! of a non-! term")) };
                let ox = self.ty(s, x)?;
                let pts = b.points(&ox)?;
                let parts = vec![SObj::Unit; pts.len()];
                let v = self.eval(s, scrut, &sty)?;
                let n = self.fresh("x");
                let opened = body.instantiate(&Term::free(n.as_str()));
                let mut out = Vec::new();
                for (k, _) in b.cases(&parts, &v) {
                    out.push(self.eval(&s.with_int(&n, (**x).clone(), pts[k].clone()), &opened, ty)?);
                }
                Ok(b.sum(&self.ty(s, ty)?, &out))
            }
            Term::SigmaIntro(a, r) => {
                let Ty::Sigma(_, x, fam) = ty else { return Err(ill("Σ pair at a non-Σ type")) };
                let ox = self.ty(s, x)?;
                let k = b.point_index(&ox, &self.eval(s, a, x)?) as usize;
                let parts = self.fibres(s, x, fam)?;
                let v = self.eval(s, r, &fam.instantiate(a))?;
                Ok(b.inject(&parts, k, &v))
            }
            Term::LetSigma { scrut, body, .. } => {
                let sty = self.infer(s, scrut)?;
                let Ty::Sigma(_, x, fam) = &sty else { return Err(ill("let-Σ of a non-Σ term")) };
                let pts = b.points(&self.ty(s, x)?)?;
                let parts = self.fibres(s, x, fam)?;
                let v = self.eval(s, scrut, &sty)?;
                let (nx, ny) = (self.fresh("x"), self.fresh("y"));
                let opened = open2(body, &nx, &ny);
                let yty = fam.instantiate(&Term::free(nx.as_str()));
                let mut out = Vec::new();
                for (k, e) in b.cases(&parts, &v) {
                    let s2 = s.with_int(&nx, (**x).clone(), pts[k].clone()).with_lin(&ny, yty.clone(), e);
                    out.push(self.eval(&s2, &opened, ty)?);
                }
                Ok(b.sum(&self.ty(s, ty)?, &out))
            }
            Term::PiLam(_, _, body) => {
                let Ty::Pi(_, x, fam) = ty else { return Err(ill("Π abstraction at a non-Π type")) };
                let pts = b.points(&self.ty(s, x)?)?;
                let parts = self.fibres(s, x, fam)?;
                let n = self.fresh("x");
                let v = Term::free(n.as_str());
                let (opened, fty) = (body.instantiate(&v), fam.instantiate(&v));
                let vals = pts
                    .into_iter()
                    .map(|p| self.eval(&s.with_int(&n, (**x).clone(), p), &opened, &fty))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(b.tuple(&parts, &vals))
            }
            Term::PiApp(f, a) => {
                let fty = self.infer(s, f)?;
                let Ty::Pi(_, x, fam) = &fty else { return Err(ill("Π application of a non-Π term")) };
                let ox = self.ty(s, x)?;
                let parts = self.fibres(s, x, fam)?;
                let vf = self.eval(s, f, &fty)?;
                let k = b.point_index(&ox, &self.eval(s, a, x)?) as usize;
                Ok(b.proj(&parts, &vf, k))
            }
            Term::Refl(_) => Ok(b.unit()),
            Term::IdElim {
                motive,
                branch,
                left,
                right,
                proof,
                ..
            } => {
                let a = self.infer(s, left)?;
                let (vl, vr) = (self.eval(s, left, &a)?, self.eval(s, right, &a)?);
                let pty = Ty::Id(Box::new(a.clone()), left.clone(), right.clone());
                let vp = self.eval(s, proof, &pty)?;
                if vl != vr || b.coords(&SObj::Unit, &vp).is_empty() {
                    return Ok(b.zero(&self.ty(s, ty)?));
                }
                let n = self.fresh("z");
                let z = Term::free(n.as_str());
                let goal = motive.instantiate(&z).instantiate(&z);
                self.eval(&s.with_int(&n, a, vl), &branch.instantiate(&z), &goal)
            }
            Term::Tt | Term::Ff => {
                let two = [SObj::Unit, SObj::Unit];
                Ok(b.inject(&two, if matches!(t, Term::Tt) { 0 } else { 1 }, &b.unit()))
            }
            Term::If {
                motive,
                scrut,
                then_branch,
                else_branch,
                ..
            } => {
                let v = self.eval(s, scrut, &Ty::Two)?;
                let o = self.ty(s, ty)?;
                match b.coords(&SObj::two(), &v).as_slice() {
                    [0] => self.eval(s, then_branch, &motive.instantiate(&Term::Tt)),
                    [1] => self.eval(s, else_branch, &motive.instantiate(&Term::Ff)),
                    [0, 1] => {
                        // tt + ff: the copairing, when both branches land in the same object
                        let (tt_ty, ff_ty) = (motive.instantiate(&Term::Tt), motive.instantiate(&Term::Ff));
                        if self.ty(s, &tt_ty)? == o && self.ty(s, &ff_ty)? == o {
                            let both = [self.eval(s, then_branch, &tt_ty)?, self.eval(s, else_branch, &ff_ty)?];
                            Ok(b.sum(&o, &both))
                        } else {
                            Ok(b.zero(&o))
                        }
                    }
                    _ => Ok(b.zero(&o)),
                }
            }
        }
    }

    /// The morphism family of `Δ;Ξ ⊢ t : A`.
    pub fn denote(&self, ctx: &DualContext, t: &Term, ty: &Ty) -> Result<Denotation<B::Elem>, ModelError> {
        let b = self.backend;
        let mut points = Vec::new();
        for p in self.interp_ctx(&ctx.int)? {
            let s = self.scope(&ctx.int, &p);
            let objs = ctx
                .lin
                .iter()
                .map(|e| self.ty(&s, &e.ty))
                .collect::<Result<Vec<_>, _>>()?;
            let dom = objs.iter().cloned().reduce(SObj::tensor).unwrap_or(SObj::Unit);
            let cod = self.ty(&s, ty)?;
            let radices: Vec<usize> = objs.iter().map(|o| b.ngens(o)).collect();
            let total = radices.iter().try_fold(1u128, |acc, r| acc.checked_mul(*r as u128));
            if !total.is_some_and(|n| n <= ENUM_LIMIT) {
                return Err(ModelError::TooLarge("generators of the linear context".into()));
            }
            let mut scope = s.clone();
            for e in &ctx.lin {
                scope.ctx = scope.ctx.with_lin(&e.name, e.ty.clone());
            }
            let mut images = Vec::new();
            for k in 0..b.ngens(&dom) {
                let mut rest = k;
                let mut digits = vec![0; radices.len()];
                for (d, r) in digits.iter_mut().zip(&radices).rev() {
                    *d = rest % r;
                    rest /= r;
                }
                let mut s2 = scope.clone();
                for ((e, o), d) in ctx.lin.iter().zip(&objs).zip(digits) {
                    s2.vals.insert(e.name.clone(), b.gen(o, d));
                }
                images.push(self.eval(&s2, t, ty)?);
            }
            points.push((p, Mor { dom: dom.clone(), cod, images }));
        }
        Ok(Denotation { points })
    }

    pub fn denote_derivation(&self, d: &Derivation) -> Result<Denotation<B::Elem>, ModelError> {
        self.denote(&d.ctx, &d.term, &d.ty)
    }

    /// Do two terms of the same type denote the same family?
    pub fn denot_equal(&self, ctx: &DualContext, t: &Term, u: &Term, ty: &Ty) -> Result<bool, ModelError> {
        Ok(self.denote(ctx, t, ty)? == self.denote(ctx, u, ty)?)
    }

    /// With `x : A ⊢ f : B` and `y : B ⊢ g : A` over `Δ`, do `g ∘ f` and
    /// `f ∘ g` denote identities at every environment?
    #[allow(clippy::too_many_arguments)]
    pub fn check_iso(
        &self,
        int: &[(String, Ty)],
        a: &Ty,
        b: &Ty,
        x: &str,
        f: &Term,
        y: &str,
        g: &Term,
    ) -> Result<bool, ModelError> {
        let mut ctx = DualContext::new();
        for (n, t) in int {
            ctx = ctx.with_int(n, t.clone());
        }
        let df = self.denote(&ctx.clone().with_lin(x, a.clone()), f, b)?;
        let dg = self.denote(&ctx.with_lin(y, b.clone()), g, a)?;
        let be = self.backend;
        Ok(df.points.iter().zip(&dg.points).all(|((_, mf), (_, mg))| {
            mg.after(be, mf) == Mor::identity(be, &mf.dom) && mf.after(be, mg) == Mor::identity(be, &mg.dom)
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::check_module;
    use crate::equality::EqualityMode;
    use crate::model::{Gf2, PointedSets};
    use crate::surface::parse_module;
    use crate::syntax::build::*;

    fn sig() -> Signature {
        check_module(&parse_module("type A\ntype B\n").unwrap(), EqualityMode::default()).signature
    }

    fn sized(a: u32, b: u32) -> Config {
        let mut c = Config::default();
        c.set_type("A", vec![], a);
        c.set_type("B", vec![], b);
        c
    }

    #[test]
    fn closed_terms_have_one_point() {
        let (s, c) = (sig(), sized(2, 3));
        let d = Interp::new(&PointedSets, &s, &c).denote(&DualContext::new(), &Term::Tt, &Ty::Two).unwrap();
        assert_eq!(d.points.len(), 1);
        assert_eq!(d.points[0].1.images.len(), 1);
    }

    #[test]
    fn identity_denotes_identity() {
        let (s, c) = (sig(), sized(3, 1));
        let ctx = DualContext::new().with_lin("x", base("A"));
        for d in [
            Interp::new(&PointedSets, &s, &c).denote(&ctx, &Term::free("x"), &base("A")).map(|d| d.points[0].1 == Mor::identity(&PointedSets, &d.points[0].1.dom)),
            Interp::new(&Gf2, &s, &c).denote(&ctx, &Term::free("x"), &base("A")).map(|d| d.points[0].1 == Mor::identity(&Gf2, &d.points[0].1.dom)),
        ] {
            assert_eq!(d, Ok(true));
        }
    }

    #[test]
    fn swap_is_an_iso_of_tensors() {
        let (s, c) = (sig(), sized(2, 3));
        let ab = tensor_ty(base("A"), base("B"));
        let ba = tensor_ty(base("B"), base("A"));
        let f = let_tensor(ba.clone(), Term::free("w"), "x", "y", tensor(Term::free("y"), Term::free("x")));
        let g = let_tensor(ab.clone(), Term::free("v"), "y", "x", tensor(Term::free("x"), Term::free("y")));
        for ok in [
            Interp::new(&PointedSets, &s, &c).check_iso(&[], &ab, &ba, "w", &f, "v", &g),
            Interp::new(&Gf2, &s, &c).check_iso(&[], &ab, &ba, "w", &f, "v", &g),
        ] {
            assert_eq!(ok, Ok(true));
        }
    }

    #[test]
    fn duplication_is_not_an_iso() {
        let (s, c) = (sig(), sized(2, 2));
        // !A -> !A ⊗ !A and projection back: a retraction, not an iso
        let ba = bang_ty(base("A"));
        let bb = tensor_ty(ba.clone(), ba.clone());
        let f = let_bang(bb.clone(), Term::free("w"), "x", tensor(bang(Term::free("x")), bang(Term::free("x"))));
        let g = let_tensor(
            ba.clone(),
            Term::free("v"),
            "p",
            "q",
            let_bang(ba.clone(), Term::free("q"), "z", let_bang(ba.clone(), Term::free("p"), "x", bang(Term::free("x")))),
        );
        assert_eq!(Interp::new(&PointedSets, &s, &c).check_iso(&[], &ba, &bb, "w", &f, "v", &g), Ok(false));
    }

    #[test]
    fn values_pick_out_global_elements() {
        let (s, c) = (sig(), sized(1, 1));
        let it = Interp::new(&Gf2, &s, &c);
        let tt = it.value(&[], &vec![], &Term::Tt, &Ty::Two).unwrap();
        let ff = it.value(&[], &vec![], &Term::Ff, &Ty::Two).unwrap();
        assert_ne!(tt, ff);
    }
}
