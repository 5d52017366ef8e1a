use std::collections::BTreeMap;

use super::context::{DualContext, Signature};
use super::open2;
use crate::diag::{Diagnostic, Span};
use crate::equality::{self, EqualityMode};
use crate::surface::{print_term, print_ty};
use crate::syntax::{Syntax, Term, Ty};

/// One rule instance. `ctx.int` is `Δ` at this node; `ctx.lin` lists the
/// linear variables this node consumed. Binder names introduced by the rule
/// are listed in `binders`, in the order the rule binds them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub rule: &'static str,
    pub term: Term,
    pub ty: Ty,
    pub ctx: DualContext,
    /// Set when `⊤-I` or `0-E` inside this node absorbed resources.
    pub slack: bool,
    pub binders: Vec<String>,
    pub children: Vec<Derivation>,
}

impl Derivation {
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(|c| c.size()).sum::<usize>()
    }

    /// Visit every node, parents first.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Derivation)) {
        f(self);
        for c in &self.children {
            c.walk(f);
        }
    }

    pub fn rules(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        self.walk(&mut |d| out.push(d.rule));
        out
    }

    /// Re-derive every conclusion from its premises, independently of the
    /// checker that built the tree.
    pub fn replay(&self, sig: &Signature) -> Result<(), Diagnostic> {
        self.replay_node(sig)?;
        for c in &self.children {
            c.replay(sig)?;
        }
        Ok(())
    }

    fn fail(&self, msg: impl Into<String>) -> Diagnostic {
        Diagnostic::error(
            Span::default(),
            format!("invalid {} step at `{}`: {}", self.rule, print_term(&self.term), msg.into()),
        )
        .with_rule(self.rule)
    }

    fn same_ty(&self, sig: &Signature, a: &Ty, b: &Ty) -> bool {
        a == b || equality::type_equal(sig, &self.ctx.int, a, b, EqualityMode::default())
    }

    fn expect_ty(&self, sig: &Signature, found: &Ty, want: &Ty) -> Result<(), Diagnostic> {
        if self.same_ty(sig, found, want) {
            Ok(())
        } else {
            Err(self.fail(format!("expected {}, found {}", print_ty(want), print_ty(found))))
        }
    }

    fn lin_names(&self) -> BTreeMap<&str, usize> {
        let mut m = BTreeMap::new();
        for e in &self.ctx.lin {
            *m.entry(e.name.as_str()).or_insert(0) += 1;
        }
        m
    }

    fn replay_node(&self, sig: &Signature) -> Result<(), Diagnostic> {
        use Term::*;
        let ch = &self.children;
        let arity = match self.rule {
            "Int-Var" | "Lin-Var" | "I-I" | "⊤-I" | "2-I1" | "2-I2" => 0,
            "Const" => ch.len(),
            "⊸-I" | "Π-I" | "&-E1" | "&-E2" | "0-E" | "⊕-I1" | "⊕-I2" | "!-I" | "Id-I" | "Tm-Conv" => 1,
            "⊕-E" | "2-E" => 3,
            "Id-E" => 4,
            _ => 2,
        };
        if ch.len() != arity {
            return Err(self.fail(format!("expected {} premise(s), found {}", arity, ch.len())));
        }
        let c = |i: usize| &ch[i];
        let bind = |i: usize| Term::free(self.binders[i].clone());
        let need_binders = |n: usize| -> Result<(), Diagnostic> {
            if self.binders.len() == n {
                Ok(())
            } else {
                Err(self.fail("wrong number of bound names"))
            }
        };
        let sub = |i: usize, t: &Term| -> Result<(), Diagnostic> {
            if ch[i].term == *t {
                Ok(())
            } else {
                Err(self.fail(format!(
                    "premise {} concludes `{}` instead of `{}`",
                    i + 1,
                    print_term(&ch[i].term),
                    print_term(t)
                )))
            }
        };
        let int_premise = |i: usize| -> Result<(), Diagnostic> {
            if ch[i].ctx.lin.is_empty() {
                Ok(())
            } else {
                Err(self.fail("an intuitionistic premise consumes linear variables"))
            }
        };

        match (self.rule, &self.term) {
            ("Int-Var", Var(crate::syntax::Var::Free(x))) => {
                let ty = self.ctx.int_ty(x).ok_or_else(|| self.fail("variable not in Δ"))?;
                self.expect_ty(sig, &self.ty, ty)?;
            }
            ("Lin-Var", Var(crate::syntax::Var::Free(x))) => {
                if self.ctx.lin.len() != 1 || self.ctx.lin[0].name != *x {
                    return Err(self.fail("a linear variable must consume exactly itself"));
                }
                self.expect_ty(sig, &self.ty, &self.ctx.lin[0].ty)?;
            }
            ("Const", Const(name, args)) => {
                let decl = sig.consts.get(name).ok_or_else(|| self.fail("unknown constant"))?;
                let mut s = Vec::new();
                for (i, ((p, pty), a)) in decl.params.iter().zip(args).enumerate() {
                    sub(i, a)?;
                    int_premise(i)?;
                    self.expect_ty(sig, &c(i).ty, &pty.subst_many(&s))?;
                    s.push((p.clone(), a.clone()));
                }
                self.expect_ty(sig, &self.ty, &decl.ty.subst_many(&s))?;
            }
            ("I-I", Star) => self.expect_ty(sig, &self.ty, &Ty::Unit)?,
            ("⊤-I", TopUnit) => self.expect_ty(sig, &self.ty, &Ty::Top)?,
            ("2-I1", Tt) | ("2-I2", Ff) => self.expect_ty(sig, &self.ty, &Ty::Two)?,
            ("I-E", LetUnit { motive, scrut, body }) => {
                sub(0, scrut)?;
                sub(1, body)?;
                self.expect_ty(sig, &c(0).ty, &Ty::Unit)?;
                self.expect_ty(sig, &c(1).ty, motive)?;
                self.expect_ty(sig, &self.ty, motive)?;
            }
            ("⊗-I", Tensor(a, b)) => {
                sub(0, a)?;
                sub(1, b)?;
                let want = Ty::Tensor(Box::new(c(0).ty.clone()), Box::new(c(1).ty.clone()));
                self.expect_ty(sig, &self.ty, &want)?;
            }
            ("⊗-E", LetTensor { motive, scrut, body, .. }) | ("Σ-E", LetSigma { motive, scrut, body, .. }) => {
                need_binders(2)?;
                sub(0, scrut)?;
                sub(1, &open2(body, &self.binders[0], &self.binders[1]))?;
                let ok = matches!((&c(0).ty, self.rule), (Ty::Tensor(..), "⊗-E") | (Ty::Sigma(..), "Σ-E"));
                if !ok {
                    return Err(self.fail("scrutinee has the wrong type"));
                }
                self.expect_ty(sig, &c(1).ty, motive)?;
                self.expect_ty(sig, &self.ty, motive)?;
            }
            ("⊸-I", Lam(_, a, body)) => {
                need_binders(1)?;
                sub(0, &body.instantiate(&bind(0)))?;
                let want = Ty::Lolli(a.clone(), Box::new(c(0).ty.clone()));
                self.expect_ty(sig, &self.ty, &want)?;
            }
            ("⊸-E", App(f, a)) => {
                sub(0, f)?;
                sub(1, a)?;
                let Ty::Lolli(dom, cod) = &c(0).ty else {
                    return Err(self.fail("function premise is not a ⊸"));
                };
                self.expect_ty(sig, &c(1).ty, dom)?;
                self.expect_ty(sig, &self.ty, cod)?;
            }
            ("&-I", Pair(a, b)) => {
                sub(0, a)?;
                sub(1, b)?;
                let want = Ty::With(Box::new(c(0).ty.clone()), Box::new(c(1).ty.clone()));
                self.expect_ty(sig, &self.ty, &want)?;
            }
            ("&-E1", Fst(p)) | ("&-E2", Snd(p)) => {
                sub(0, p)?;
                let Ty::With(a, b) = &c(0).ty else {
                    return Err(self.fail("projection from a non-product"));
                };
                self.expect_ty(sig, &self.ty, if self.rule == "&-E1" { a } else { b })?;
            }
            ("0-E", Abort(ty, s)) => {
                sub(0, s)?;
                self.expect_ty(sig, &c(0).ty, &Ty::Zero)?;
                self.expect_ty(sig, &self.ty, ty)?;
            }
            ("⊕-I1", Inl(other, a)) | ("⊕-I2", Inr(other, a)) => {
                sub(0, a)?;
                let here = Box::new(c(0).ty.clone());
                let want = if self.rule == "⊕-I1" {
                    Ty::Plus(here, other.clone())
                } else {
                    Ty::Plus(other.clone(), here)
                };
                self.expect_ty(sig, &self.ty, &want)?;
            }
            ("⊕-E", Case { motive, scrut, left, right, .. }) => {
                need_binders(2)?;
                sub(0, scrut)?;
                sub(1, &left.instantiate(&bind(0)))?;
                sub(2, &right.instantiate(&bind(1)))?;
                if !matches!(c(0).ty, Ty::Plus(..)) {
                    return Err(self.fail("scrutinee is not a sum"));
                }
                self.expect_ty(sig, &c(1).ty, motive)?;
                self.expect_ty(sig, &c(2).ty, motive)?;
                self.expect_ty(sig, &self.ty, motive)?;
            }
            ("!-I", Bang(a)) => {
                sub(0, a)?;
                int_premise(0)?;
                self.expect_ty(sig, &self.ty, &Ty::Bang(Box::new(c(0).ty.clone())))?;
            }
            ("!-E", LetBang { motive, scrut, body, .. }) => {
                need_binders(1)?;
                sub(0, scrut)?;
                sub(1, &body.instantiate(&bind(0)))?;
                if !matches!(c(0).ty, Ty::Bang(_)) {
                    return Err(self.fail("scrutinee is not a `!`"));
                }
                self.expect_ty(sig, &c(1).ty, motive)?;
                self.expect_ty(sig, &self.ty, motive)?;
            }
            ("Σ-I", SigmaIntro(a, b)) => {
                sub(0, a)?;
                sub(1, b)?;
                int_premise(0)?;
                let Ty::Sigma(_, ta, tb) = &self.ty else {
                    return Err(self.fail("conclusion is not a Sg type"));
                };
                self.expect_ty(sig, &c(0).ty, ta)?;
                self.expect_ty(sig, &c(1).ty, &tb.instantiate(a))?;
            }
            ("Π-I", PiLam(_, a, body)) => {
                need_binders(1)?;
                sub(0, &body.instantiate(&bind(0)))?;
                let Ty::Pi(_, ta, tb) = &self.ty else {
                    return Err(self.fail("conclusion is not a Pi type"));
                };
                self.expect_ty(sig, a, ta)?;
                let inner = DualContext {
                    int: c(0).ctx.int.clone(),
                    lin: vec![],
                };
                let want = tb.instantiate(&bind(0));
                if !(c(0).ty == want || equality::type_equal(sig, &inner.int, &c(0).ty, &want, EqualityMode::default())) {
                    return Err(self.fail("body type does not match"));
                }
            }
            ("Π-E", PiApp(f, a)) => {
                sub(0, f)?;
                sub(1, a)?;
                int_premise(1)?;
                let Ty::Pi(_, ta, tb) = &c(0).ty else {
                    return Err(self.fail("function premise is not a Pi"));
                };
                self.expect_ty(sig, &c(1).ty, ta)?;
                self.expect_ty(sig, &self.ty, &tb.instantiate(a))?;
            }
            ("Id-I", Refl(a)) => {
                sub(0, a)?;
                int_premise(0)?;
                let want = Ty::Id(Box::new(c(0).ty.clone()), a.clone(), a.clone());
                self.expect_ty(sig, &self.ty, &want)?;
            }
            ("Id-E", IdElim { motive, branch, left, right, proof, .. }) => {
                need_binders(1)?;
                sub(0, left)?;
                sub(1, right)?;
                sub(2, proof)?;
                sub(3, &branch.instantiate(&bind(0)))?;
                int_premise(0)?;
                int_premise(1)?;
                let a = c(0).ty.clone();
                self.expect_ty(sig, &c(1).ty, &a)?;
                self.expect_ty(sig, &c(2).ty, &Ty::Id(Box::new(a), left.clone(), right.clone()))?;
                let z = bind(0);
                let want = motive.instantiate(&z).instantiate(&z);
                if !(c(3).ty == want || equality::type_equal(sig, &c(3).ctx.int, &c(3).ty, &want, EqualityMode::default())) {
                    return Err(self.fail("branch type does not match the motive"));
                }
                self.expect_ty(sig, &self.ty, &motive.instantiate(right).instantiate(left))?;
            }
            ("2-E", If { motive, scrut, then_branch, else_branch, .. }) => {
                sub(0, scrut)?;
                sub(1, then_branch)?;
                sub(2, else_branch)?;
                int_premise(0)?;
                self.expect_ty(sig, &c(0).ty, &Ty::Two)?;
                self.expect_ty(sig, &c(1).ty, &motive.instantiate(&Tt))?;
                self.expect_ty(sig, &c(2).ty, &motive.instantiate(&Ff))?;
                self.expect_ty(sig, &self.ty, &motive.instantiate(scrut))?;
            }
            ("Tm-Conv", t) => {
                sub(0, t)?;
                self.expect_ty(sig, &c(0).ty, &self.ty)?;
            }
            _ => return Err(self.fail("rule does not match the term")),
        }
        self.replay_resources()
    }

    fn replay_resources(&self) -> Result<(), Diagnostic> {
        let mine = self.lin_names();
        if mine.values().any(|n| *n > 1) {
            return Err(self.fail("a linear variable is consumed twice"));
        }
        let strip = |d: &Derivation| -> BTreeMap<String, usize> {
            d.lin_names()
                .into_iter()
                .filter(|(n, _)| !self.binders.iter().any(|b| b == n))
                .map(|(n, k)| (n.to_string(), k))
                .collect()
        };
        let mine: BTreeMap<String, usize> = mine.into_iter().map(|(n, k)| (n.to_string(), k)).collect();
        let additive: &[usize] = match self.rule {
            "&-I" => &[0, 1],
            "⊕-E" | "2-E" => &[1, 2],
            _ => &[],
        };
        let mut total: BTreeMap<String, usize> = BTreeMap::new();
        for (i, c) in self.children.iter().enumerate() {
            if additive.contains(&i) {
                continue;
            }
            for (n, k) in strip(c) {
                *total.entry(n).or_insert(0) += k;
            }
        }
        if !additive.is_empty() {
            let branches: Vec<_> = additive.iter().map(|i| (strip(&self.children[*i]), self.children[*i].slack)).collect();
            let union: BTreeMap<String, usize> = branches
                .iter()
                .flat_map(|(m, _)| m.keys().cloned())
                .map(|n| (n, 1))
                .collect();
            for (m, slack) in &branches {
                if !slack && *m != union {
                    return Err(self.fail("additive premises consume different resources"));
                }
            }
            for (n, k) in union {
                *total.entry(n).or_insert(0) += k;
            }
        }
        if self.rule == "Tm-Conv" {
            total = strip(&self.children[0]);
        }
        if total != mine {
            return Err(self.fail("consumed resources do not add up"));
        }
        if total.values().any(|n| *n > 1) {
            return Err(self.fail("premises share a linear variable"));
        }
        Ok(())
    }
}
