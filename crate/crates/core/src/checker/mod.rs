//! Bidirectional type checking with resource threading.
//!
//! The linear region is a stack of usage flags; every rule consumes or
//! threads them, additive rules run their branches from the same input and
//! reconcile the outputs. `⊤-I` and `0-E` set a slack bit that lets the
//! enclosing scopes leave resources unused.

mod context;
mod derivation;
mod module;

pub use context::{ConstDecl, DualContext, LinEntry, ResourceState, Signature, TypeDecl, Usage};
pub use derivation::Derivation;
pub use module::{check_module, dual_context, DeclOutcome, DeclReport, ModuleReport};

use std::collections::BTreeSet;

use crate::diag::{Diagnostic, Span};
use crate::equality::{self, EqualityMode};
use crate::surface::{print_term, print_ty};
use crate::syntax::{Hint, Syntax, Term, Ty};

type Res<T> = Result<T, Diagnostic>;

fn err(rule: &str, msg: impl Into<String>) -> Diagnostic {
    Diagnostic::error(Span::default(), msg).with_rule(rule)
}

/// Strip the `#n` suffix of a fresh name.
pub fn display_name(name: &str) -> &str {
    name.split('#').next().unwrap_or(name)
}

pub struct Checker<'s> {
    sig: &'s Signature,
    pub mode: EqualityMode,
    /// Ignore linearity entirely (type synthesis for the equality engine).
    relaxed: bool,
    /// Overwrite non-dependent motives with the expected type.
    repair: bool,
    int: Vec<(String, Ty)>,
    lin: Vec<(String, Ty)>,
    used: Vec<bool>,
    slack: bool,
    floor: usize,
    premise: Vec<&'static str>,
    fresh: usize,
    /// Every rule instance used so far, formation rules included.
    pub log: BTreeSet<&'static str>,
}

impl<'s> Checker<'s> {
    pub fn new(sig: &'s Signature) -> Self {
        Checker {
            sig,
            mode: EqualityMode::default(),
            relaxed: false,
            repair: false,
            int: Vec::new(),
            lin: Vec::new(),
            used: Vec::new(),
            slack: false,
            floor: 0,
            premise: Vec::new(),
            fresh: 0,
            log: BTreeSet::new(),
        }
    }

    pub fn relaxed(sig: &'s Signature) -> Self {
        let mut c = Self::new(sig);
        c.relaxed = true;
        c
    }

    pub fn repairing(sig: &'s Signature) -> Self {
        let mut c = Self::relaxed(sig);
        c.repair = true;
        c
    }

    pub fn signature(&self) -> &'s Signature {
        self.sig
    }

    /// Validate `ctx` and adopt it. Any previous state is discarded.
    pub fn enter(&mut self, ctx: &DualContext) -> Res<()> {
        self.int.clear();
        self.lin.clear();
        self.used.clear();
        self.slack = false;
        self.floor = 0;
        self.log.insert("C-Emp");
        for (n, ty) in &ctx.int {
            if self.int.iter().any(|(m, _)| m == n) {
                return Err(err("Int-C-Ext", format!("`{}` is declared twice in the context", n)));
            }
            self.check_type(ty).map_err(|e| relabel(e, "Int-C-Ext"))?;
            self.log.insert("Int-C-Ext");
            self.int.push((n.clone(), ty.clone()));
        }
        for e in &ctx.lin {
            if self.int.iter().chain(self.lin.iter()).any(|(m, _)| *m == e.name) {
                return Err(err("Lin-C-Ext", format!("`{}` is declared twice in the context", e.name)));
            }
            self.check_type(&e.ty).map_err(|e| relabel(e, "Lin-C-Ext"))?;
            self.log.insert("Lin-C-Ext");
            self.lin.push((e.name.clone(), e.ty.clone()));
            self.used.push(e.usage == Usage::Consumed);
        }
        Ok(())
    }

    pub fn state(&self) -> ResourceState {
        ResourceState {
            consumed: self.used.clone(),
            slack: self.slack,
        }
    }

    pub fn context(&self) -> DualContext {
        DualContext {
            int: self.int.clone(),
            lin: self
                .lin
                .iter()
                .zip(&self.used)
                .map(|((n, t), u)| LinEntry {
                    name: n.clone(),
                    ty: t.clone(),
                    usage: if *u { Usage::Consumed } else { Usage::Fresh },
                })
                .collect(),
        }
    }

    /// Fail unless every linear variable of the adopted context was consumed
    /// (or slack absorbed the rest).
    pub fn finish(&self) -> Res<()> {
        if self.relaxed || self.slack {
            return Ok(());
        }
        let unused: Vec<_> = self
            .lin
            .iter()
            .zip(&self.used)
            .filter(|(_, u)| !**u)
            .map(|((n, _), _)| format!("`{}`", display_name(n)))
            .collect();
        if unused.is_empty() {
            Ok(())
        } else {
            Err(err(
                "Lin-Var",
                format!("linear variable {} is never used", unused.join(", ")),
            ))
        }
    }

    pub fn fresh_name(&mut self, hint: &str) -> String {
        let base = match display_name(hint) {
            "" | "_" => "x",
            b => b,
        };
        loop {
            self.fresh += 1;
            let n = format!("{}#{}", base, self.fresh);
            if !self.int.iter().any(|(m, _)| *m == n) && !self.lin.iter().any(|(m, _)| *m == n) {
                return n;
            }
        }
    }

    fn conv(&mut self, found: &Ty, expected: &Ty) -> bool {
        found == expected || equality::type_equal(self.sig, &self.int, found, expected, self.mode)
    }

    fn premise_rule(&self, default: &'static str) -> &'static str {
        self.premise.last().copied().unwrap_or(default)
    }

    // ---- scopes -------------------------------------------------------

    fn with_lin<R>(
        &mut self,
        hint: &Hint,
        ty: Ty,
        rule: &'static str,
        f: impl FnOnce(&mut Self, &str) -> Res<R>,
    ) -> Res<(String, R)> {
        let name = self.fresh_name(&hint.0);
        self.lin.push((name.clone(), ty));
        self.used.push(false);
        let outer = std::mem::replace(&mut self.slack, false);
        let r = f(self, &name);
        let inner = self.slack;
        let used = self.used.pop().unwrap_or(true);
        self.lin.pop();
        self.slack = outer || inner;
        let r = r?;
        if !used && !inner && !self.relaxed {
            return Err(err(
                rule,
                format!("linear variable `{}` is never used", display_name(&name)),
            ));
        }
        Ok((name, r))
    }

    fn with_int<R>(&mut self, hint: &Hint, ty: Ty, f: impl FnOnce(&mut Self, &str) -> Res<R>) -> Res<(String, R)> {
        let name = self.fresh_name(&hint.0);
        self.int.push((name.clone(), ty));
        let r = f(self, &name);
        self.int.pop();
        Ok((name, r?))
    }

    /// Run `f` in `Δ;·`: outer linear variables become invisible.
    fn int_premise<R>(&mut self, rule: &'static str, f: impl FnOnce(&mut Self) -> Res<R>) -> Res<R> {
        let floor = std::mem::replace(&mut self.floor, self.lin.len());
        let slack = std::mem::replace(&mut self.slack, false);
        self.premise.push(rule);
        let r = f(self);
        self.premise.pop();
        self.floor = floor;
        self.slack = slack;
        r
    }

    /// Run two additive premises from the same resources and reconcile them.
    fn additive<A, B>(
        &mut self,
        rule: &'static str,
        left: impl FnOnce(&mut Self) -> Res<A>,
        right: impl FnOnce(&mut Self) -> Res<B>,
    ) -> Res<(A, B)> {
        let start = self.used.clone();
        let outer = std::mem::replace(&mut self.slack, false);
        let a = left(self)?;
        let (u1, s1) = (std::mem::replace(&mut self.used, start), self.slack);
        self.slack = false;
        let b = right(self)?;
        let (u2, s2) = (std::mem::take(&mut self.used), self.slack);
        if self.relaxed {
            self.used = u1.iter().zip(&u2).map(|(a, b)| *a || *b).collect();
            self.slack = outer;
            return Ok((a, b));
        }
        let names = |pick: &dyn Fn(bool, bool) -> bool| -> Vec<String> {
            self.lin
                .iter()
                .enumerate()
                .filter(|(i, _)| pick(u1[*i], u2[*i]))
                .map(|(_, (n, _))| format!("`{}`", display_name(n)))
                .collect()
        };
        let (used, slack) = match (s1, s2) {
            (false, false) => {
                let only_l = names(&|a, b| a && !b);
                let only_r = names(&|a, b| b && !a);
                if !only_l.is_empty() || !only_r.is_empty() {
                    let mut parts = Vec::new();
                    if !only_l.is_empty() {
                        parts.push(format!("{} used only in the first branch", only_l.join(", ")));
                    }
                    if !only_r.is_empty() {
                        parts.push(format!("{} used only in the second branch", only_r.join(", ")));
                    }
                    return Err(err(
                        rule,
                        format!("branches consume different resources: {}", parts.join("; ")),
                    ));
                }
                (u1, outer)
            }
            (true, false) | (false, true) => {
                let (small, big) = if s1 { (&u1, &u2) } else { (&u2, &u1) };
                let extra: Vec<_> = self
                    .lin
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| small[*i] && !big[*i])
                    .map(|(_, (n, _))| format!("`{}`", display_name(n)))
                    .collect();
                if !extra.is_empty() {
                    return Err(err(
                        rule,
                        format!(
                            "{} consumed by the slack branch but not by the other branch",
                            extra.join(", ")
                        ),
                    ));
                }
                (big.clone(), outer)
            }
            (true, true) => (u1.iter().zip(&u2).map(|(a, b)| *a || *b).collect(), true),
        };
        self.used = used;
        self.slack = slack;
        Ok((a, b))
    }

    // ---- derivation nodes --------------------------------------------

    fn node(
        &mut self,
        body: impl FnOnce(&mut Self) -> Res<(&'static str, Ty, Vec<String>, Vec<Derivation>, Term)>,
    ) -> Res<Derivation> {
        let before = self.used.clone();
        let outer = std::mem::replace(&mut self.slack, false);
        let r = body(self);
        let local = self.slack;
        self.slack = outer || local;
        let (rule, ty, binders, children, rebuilt) = r?;
        self.log.insert(rule);
        let consumed = before
            .iter()
            .enumerate()
            .filter(|(i, was)| !**was && self.used.get(*i).copied().unwrap_or(false))
            .map(|(i, _)| LinEntry {
                name: self.lin[i].0.clone(),
                ty: self.lin[i].1.clone(),
                usage: Usage::Consumed,
            })
            .collect();
        Ok(Derivation {
            rule,
            term: rebuilt,
            ty,
            ctx: DualContext {
                int: self.int.clone(),
                lin: consumed,
            },
            slack: local,
            binders,
            children,
        })
    }

    // ---- types --------------------------------------------------------

    /// `Δ ⊢ A type`.
    pub fn check_type(&mut self, ty: &Ty) -> Res<()> {
        match ty {
            Ty::Base(name, args) => {
                let decl = self
                    .sig
                    .types
                    .get(name)
                    .ok_or_else(|| err("Ty-F", format!("unknown type `{}`", name)))?;
                if decl.params.len() != args.len() {
                    return Err(err(
                        "Ty-F",
                        format!(
                            "type `{}` expects {} argument(s), got {}",
                            name,
                            decl.params.len(),
                            args.len()
                        ),
                    ));
                }
                let params = decl.params.clone();
                self.int_premise("Ty-F", |c| c.check_args(&params, args).map(|_| ()))
                    .map_err(|e| e.with_rule("Ty-F"))?;
                self.log.insert("Ty-F");
            }
            Ty::Unit => {
                self.log.insert("I-F");
            }
            Ty::Top => {
                self.log.insert("⊤-F");
            }
            Ty::Zero => {
                self.log.insert("0-F");
            }
            Ty::Two => {
                self.log.insert("2-F");
            }
            Ty::Tensor(a, b) | Ty::Lolli(a, b) | Ty::With(a, b) | Ty::Plus(a, b) => {
                let rule = match ty {
                    Ty::Tensor(..) => "⊗-F",
                    Ty::Lolli(..) => "⊸-F",
                    Ty::With(..) => "&-F",
                    _ => "⊕-F",
                };
                self.check_type(a).map_err(|e| relabel(e, rule))?;
                self.check_type(b).map_err(|e| relabel(e, rule))?;
                self.log.insert(rule);
            }
            Ty::Bang(a) => {
                self.check_type(a).map_err(|e| relabel(e, "!-F"))?;
                self.log.insert("!-F");
            }
            Ty::Sigma(h, a, b) | Ty::Pi(h, a, b) => {
                let rule = if matches!(ty, Ty::Sigma(..)) { "Σ-F" } else { "Π-F" };
                self.check_type(a).map_err(|e| relabel(e, rule))?;
                self.with_int(h, (**a).clone(), |c, x| c.check_type(&b.instantiate(&Term::free(x))))
                    .map_err(|e| relabel(e, rule))?;
                self.log.insert(rule);
            }
            Ty::Id(a, l, r) => {
                self.check_type(a).map_err(|e| relabel(e, "Id-F"))?;
                self.int_premise("Id-F", |c| {
                    c.check(l, a)?;
                    c.check(r, a)
                })
                .map_err(|e| e.with_rule("Id-F"))?;
                self.log.insert("Id-F");
            }
        }
        Ok(())
    }

    /// Check arguments against a parameter telescope, returning their derivations.
    fn check_args(&mut self, params: &[(String, Ty)], args: &[Term]) -> Res<Vec<Derivation>> {
        let mut sub: Vec<(String, Term)> = Vec::new();
        let mut out = Vec::new();
        for ((p, pty), a) in params.iter().zip(args) {
            let want = pty.subst_many(&sub);
            out.push(self.check(a, &want)?);
            sub.push((p.clone(), a.clone()));
        }
        Ok(out)
    }

    // ---- terms --------------------------------------------------------

    /// Check `t` against `expected`, inserting a conversion step when the
    /// synthesised type differs syntactically.
    pub fn check(&mut self, t: &Term, expected: &Ty) -> Res<Derivation> {
        use Term::*;
        match (t, expected) {
            (Lam(h, ann, body), Ty::Lolli(a, b)) => self.node(|c| {
                if !c.repair {
                    c.check_type(ann)?;
                    if !c.conv(ann, a) {
                        return Err(mismatch("⊸-I", a, ann));
                    }
                }
                let (x, d) = c.with_lin(h, (**a).clone(), "⊸-I", |c, x| {
                    c.check(&body.instantiate(&Term::free(x)), b)
                })?;
                let term = Lam(h.clone(), a.clone(), Box::new(d.term.close(&x)));
                Ok(("⊸-I", expected.clone(), vec![x], vec![d], term))
            }),
            (PiLam(h, ann, body), Ty::Pi(_, a, b)) => self.node(|c| {
                if !c.repair {
                    c.check_type(ann)?;
                    if !c.conv(ann, a) {
                        return Err(mismatch("Π-I", a, ann));
                    }
                }
                let (x, d) = c.with_int(h, (**a).clone(), |c, x| {
                    let v = Term::free(x);
                    c.check(&body.instantiate(&v), &b.instantiate(&v))
                })?;
                let term = PiLam(h.clone(), a.clone(), Box::new(d.term.close(&x)));
                Ok(("Π-I", expected.clone(), vec![x], vec![d], term))
            }),
            (Tensor(l, r), Ty::Tensor(a, b)) => self.node(|c| {
                let dl = c.check(l, a)?;
                let dr = c.check(r, b)?;
                let term = Tensor(Box::new(dl.term.clone()), Box::new(dr.term.clone()));
                Ok(("⊗-I", expected.clone(), vec![], vec![dl, dr], term))
            }),
            (Pair(l, r), Ty::With(a, b)) => self.node(|c| {
                let (dl, dr) = c.additive("&-I", |c| c.check(l, a), |c| c.check(r, b))?;
                let term = Pair(Box::new(dl.term.clone()), Box::new(dr.term.clone()));
                Ok(("&-I", expected.clone(), vec![], vec![dl, dr], term))
            }),
            (Inl(ann, l), Ty::Plus(a, b)) | (Inr(ann, l), Ty::Plus(b, a)) => {
                let left = matches!(t, Inl(..));
                let rule = if left { "⊕-I1" } else { "⊕-I2" };
                self.node(|c| {
                    if !c.repair {
                        c.check_type(ann)?;
                        if !c.conv(ann, b) {
                            return Err(mismatch(rule, b, ann));
                        }
                    }
                    let d = c.check(l, a)?;
                    let inner = Box::new(d.term.clone());
                    let term = if left { Inl(b.clone(), inner) } else { Inr(b.clone(), inner) };
                    Ok((rule, expected.clone(), vec![], vec![d], term))
                })
            }
            (SigmaIntro(l, r), Ty::Sigma(_, a, b)) => self.node(|c| {
                let dl = c.int_premise("Σ-I", |c| c.check(l, a))?;
                let dr = c.check(r, &b.instantiate(l))?;
                let term = SigmaIntro(Box::new(dl.term.clone()), Box::new(dr.term.clone()));
                Ok(("Σ-I", expected.clone(), vec![], vec![dl, dr], term))
            }),
            (Bang(a), Ty::Bang(ta)) => self.node(|c| {
                let d = c.int_premise("!-I", |c| c.check(a, ta))?;
                let term = Bang(Box::new(d.term.clone()));
                Ok(("!-I", expected.clone(), vec![], vec![d], term))
            }),
            (LetUnit { .. } | LetTensor { .. } | LetSigma { .. } | LetBang { .. } | Case { .. }, _)
                if self.repair =>
            {
                self.infer_frame(t, Some(expected))
            }
            (Abort(_, s), _) if self.repair => self.node(|c| {
                let d = c.check(s, &Ty::Zero)?;
                c.slack = true;
                let term = Abort(Box::new(expected.clone()), Box::new(d.term.clone()));
                Ok(("0-E", expected.clone(), vec![], vec![d], term))
            }),
            (IdElim { .. }, _) if self.repair => {
                let saved = (self.used.clone(), self.slack);
                if let Ok(d) = self.infer(t) {
                    if self.conv(&d.ty, expected) {
                        return Ok(self.convert(d, expected));
                    }
                }
                self.used = saved.0;
                self.slack = saved.1;
                let Term::IdElim { mx, my, z, branch, left, right, proof, .. } = t else {
                    unreachable!()
                };
                let flat = Term::IdElim {
                    motive: Box::new(expected.clone()),
                    mx: mx.clone(),
                    my: my.clone(),
                    z: z.clone(),
                    branch: branch.clone(),
                    left: left.clone(),
                    right: right.clone(),
                    proof: proof.clone(),
                };
                let d = self.infer(&flat)?;
                Ok(self.convert(d, expected))
            }
            _ => {
                let d = self.infer(t)?;
                if d.ty == *expected {
                    return Ok(d);
                }
                if !self.conv(&d.ty, expected) {
                    return Err(mismatch(intro_rule(t).unwrap_or("Tm-Conv"), expected, &d.ty));
                }
                Ok(self.convert(d, expected))
            }
        }
    }

    fn convert(&mut self, d: Derivation, expected: &Ty) -> Derivation {
        if d.ty == *expected {
            return d;
        }
        self.log.insert("Tm-Conv");
        Derivation {
            rule: "Tm-Conv",
            term: d.term.clone(),
            ty: expected.clone(),
            ctx: d.ctx.clone(),
            slack: d.slack,
            binders: vec![],
            children: vec![d],
        }
    }

    /// Synthesise the type of `t`.
    pub fn infer(&mut self, t: &Term) -> Res<Derivation> {
        use Term::*;
        match t {
            Term::Var(crate::syntax::Var::Bound(i)) => Err(err("Int-Var", format!("dangling bound variable #{}", i))),
            Term::Var(crate::syntax::Var::Free(x)) => self.node(|c| c.lookup(x).map(|(r, ty)| (r, ty, vec![], vec![], t.clone()))),
            Const(name, args) => self.node(|c| {
                let decl = c
                    .sig
                    .consts
                    .get(name)
                    .ok_or_else(|| err("Const", format!("unknown constant `{}`", name)))?;
                if decl.params.len() != args.len() {
                    return Err(err(
                        "Const",
                        format!(
                            "constant `{}` expects {} argument(s), got {}",
                            name,
                            decl.params.len(),
                            args.len()
                        ),
                    ));
                }
                let (params, ty) = (decl.params.clone(), decl.ty.clone());
                let ds = c.int_premise("Const", |c| c.check_args(&params, args)).map_err(|e| at_premise(e, "Const"))?;
                let sub: Vec<_> = params.iter().map(|(p, _)| p.clone()).zip(args.iter().cloned()).collect();
                let term = Const(name.clone(), ds.iter().map(|d| d.term.clone()).collect());
                Ok(("Const", ty.subst_many(&sub), vec![], ds, term))
            }),
            Star => self.node(|_| Ok(("I-I", Ty::Unit, vec![], vec![], Star))),
            Tt => self.node(|_| Ok(("2-I1", Ty::Two, vec![], vec![], Tt))),
            Ff => self.node(|_| Ok(("2-I2", Ty::Two, vec![], vec![], Ff))),
            TopUnit => self.node(|c| {
                c.slack = true;
                Ok(("⊤-I", Ty::Top, vec![], vec![], TopUnit))
            }),
            Tensor(a, b) => self.node(|c| {
                let da = c.infer(a)?;
                let db = c.infer(b)?;
                let ty = Ty::Tensor(Box::new(da.ty.clone()), Box::new(db.ty.clone()));
                let term = Tensor(Box::new(da.term.clone()), Box::new(db.term.clone()));
                Ok(("⊗-I", ty, vec![], vec![da, db], term))
            }),
            Lam(h, ann, body) => self.node(|c| {
                c.check_type(ann)?;
                let (x, d) = c.with_lin(h, (**ann).clone(), "⊸-I", |c, x| {
                    c.infer(&body.instantiate(&Term::free(x)))
                })?;
                let ty = Ty::Lolli(ann.clone(), Box::new(d.ty.clone()));
                let term = Lam(h.clone(), ann.clone(), Box::new(d.term.close(&x)));
                Ok(("⊸-I", ty, vec![x], vec![d], term))
            }),
            App(f, a) => self.node(|c| {
                let df = c.infer(f)?;
                let Ty::Lolli(dom, cod) = &df.ty else {
                    return Err(err(
                        "⊸-E",
                        format!("`{}` is applied but has type {}", print_term(f), print_ty(&df.ty)),
                    ));
                };
                let (dom, cod) = ((**dom).clone(), (**cod).clone());
                let da = c.check(a, &dom)?;
                let term = App(Box::new(df.term.clone()), Box::new(da.term.clone()));
                Ok(("⊸-E", cod, vec![], vec![df, da], term))
            }),
            Pair(a, b) => self.node(|c| {
                let (da, db) = c.additive("&-I", |c| c.infer(a), |c| c.infer(b))?;
                let ty = Ty::With(Box::new(da.ty.clone()), Box::new(db.ty.clone()));
                let term = Pair(Box::new(da.term.clone()), Box::new(db.term.clone()));
                Ok(("&-I", ty, vec![], vec![da, db], term))
            }),
            Fst(p) | Snd(p) => {
                let first = matches!(t, Fst(_));
                let rule = if first { "&-E1" } else { "&-E2" };
                self.node(|c| {
                    let d = c.infer(p)?;
                    let Ty::With(a, b) = &d.ty else {
                        return Err(err(rule, format!("projection from non-product type {}", print_ty(&d.ty))));
                    };
                    let ty = if first { (**a).clone() } else { (**b).clone() };
                    let inner = Box::new(d.term.clone());
                    let term = if first { Fst(inner) } else { Snd(inner) };
                    Ok((rule, ty, vec![], vec![d], term))
                })
            }
            Abort(ty, s) => self.node(|c| {
                c.check_type(ty)?;
                let d = c.check(s, &Ty::Zero).map_err(|e| at_premise(e, "0-E"))?;
                c.slack = true;
                let term = Abort(ty.clone(), Box::new(d.term.clone()));
                Ok(("0-E", (**ty).clone(), vec![], vec![d], term))
            }),
            Inl(other, a) | Inr(other, a) => {
                let left = matches!(t, Inl(..));
                let rule = if left { "⊕-I1" } else { "⊕-I2" };
                self.node(|c| {
                    c.check_type(other)?;
                    let d = c.infer(a)?;
                    let here = Box::new(d.ty.clone());
                    let ty = if left { Ty::Plus(here, other.clone()) } else { Ty::Plus(other.clone(), here) };
                    let inner = Box::new(d.term.clone());
                    let term = if left { Inl(other.clone(), inner) } else { Inr(other.clone(), inner) };
                    Ok((rule, ty, vec![], vec![d], term))
                })
            }
            Bang(a) => self.node(|c| {
                let d = c.int_premise("!-I", |c| c.infer(a))?;
                let ty = Ty::Bang(Box::new(d.ty.clone()));
                let term = Bang(Box::new(d.term.clone()));
                Ok(("!-I", ty, vec![], vec![d], term))
            }),
            SigmaIntro(a, b) => self.node(|c| {
                let da = c.int_premise("Σ-I", |c| c.infer(a))?;
                let db = c.infer(b)?;
                // the most dependent reading: abstract every occurrence of `a`
                let x = c.fresh_name("x");
                let body = equality::util::replace_ty(&db.ty, &da.term, &Term::free(x.as_str())).close(&x);
                let ty = Ty::Sigma(Hint::new("x"), Box::new(da.ty.clone()), Box::new(body));
                let term = SigmaIntro(Box::new(da.term.clone()), Box::new(db.term.clone()));
                Ok(("Σ-I", ty, vec![], vec![da, db], term))
            }),
            PiLam(h, ann, body) => self.node(|c| {
                c.check_type(ann)?;
                let (x, d) = c.with_int(h, (**ann).clone(), |c, x| c.infer(&body.instantiate(&Term::free(x))))?;
                let ty = Ty::Pi(h.clone(), ann.clone(), Box::new(d.ty.close(&x)));
                let term = PiLam(h.clone(), ann.clone(), Box::new(d.term.close(&x)));
                Ok(("Π-I", ty, vec![x], vec![d], term))
            }),
            PiApp(f, a) => self.node(|c| {
                let df = c.infer(f)?;
                let Ty::Pi(_, dom, cod) = &df.ty else {
                    return Err(err(
                        "Π-E",
                        format!("`{}` is applied to `!` but has type {}", print_term(f), print_ty(&df.ty)),
                    ));
                };
                let (dom, cod) = ((**dom).clone(), (**cod).clone());
                let da = c.int_premise("Π-E", |c| c.check(a, &dom))?;
                let term = PiApp(Box::new(df.term.clone()), Box::new(da.term.clone()));
                Ok(("Π-E", cod.instantiate(a), vec![], vec![df, da], term))
            }),
            Refl(a) => self.node(|c| {
                let d = c.int_premise("Id-I", |c| c.infer(a))?;
                let ty = Ty::Id(Box::new(d.ty.clone()), a.clone(), a.clone());
                let term = Refl(Box::new(d.term.clone()));
                Ok(("Id-I", ty, vec![], vec![d], term))
            }),
            IdElim {
                motive,
                mx,
                my,
                z,
                branch,
                left,
                right,
                proof,
            } => self.node(|c| {
                let (dl, dr) = c.int_premise("Id-E", |c| {
                    let dl = c.infer(left)?;
                    let dr = c.check(right, &dl.ty)?;
                    Ok((dl, dr))
                })
                .map_err(|e| at_premise(e, "Id-E"))?;
                let a = dl.ty.clone();
                c.with_int(mx, a.clone(), |c, x| {
                    c.with_int(my, a.clone(), |c, x2| {
                        c.check_type(&motive.instantiate(&Term::free(x2)).instantiate(&Term::free(x)))
                    })
                })
                .map_err(|e| relabel(e, "Id-E"))?;
                let want = Ty::Id(Box::new(a.clone()), left.clone(), right.clone());
                let dp = c.check(proof, &want).map_err(|e| at_premise(e, "Id-E"))?;
                let (zn, db) = c.with_int(z, a.clone(), |c, zn| {
                    let v = Term::free(zn);
                    let goal = motive.instantiate(&v).instantiate(&v);
                    c.check(&branch.instantiate(&v), &goal)
                })?;
                let ty = motive.instantiate(right).instantiate(left);
                let term = IdElim {
                    motive: motive.clone(),
                    mx: mx.clone(),
                    my: my.clone(),
                    z: z.clone(),
                    branch: Box::new(db.term.close(&zn)),
                    left: Box::new(dl.term.clone()),
                    right: Box::new(dr.term.clone()),
                    proof: Box::new(dp.term.clone()),
                };
                Ok(("Id-E", ty, vec![zn], vec![dl, dr, dp, db], term))
            }),
            If {
                motive,
                z,
                scrut,
                then_branch,
                else_branch,
            } => self.node(|c| {
                let ds = c.int_premise("2-E", |c| c.check(scrut, &Ty::Two)).map_err(|e| at_premise(e, "2-E"))?;
                c.with_int(z, Ty::Two, |c, zn| c.check_type(&motive.instantiate(&Term::free(zn))))
                    .map_err(|e| relabel(e, "2-E"))?;
                let (dt, de) = c.additive(
                    "2-E",
                    |c| c.check(then_branch, &motive.instantiate(&Tt)),
                    |c| c.check(else_branch, &motive.instantiate(&Ff)),
                )?;
                let term = If {
                    motive: motive.clone(),
                    z: z.clone(),
                    scrut: Box::new(ds.term.clone()),
                    then_branch: Box::new(dt.term.clone()),
                    else_branch: Box::new(de.term.clone()),
                };
                Ok(("2-E", motive.instantiate(scrut), vec![], vec![ds, dt, de], term))
            }),
            LetUnit { .. } | LetTensor { .. } | LetSigma { .. } | LetBang { .. } | Case { .. } => {
                self.infer_frame(t, None)
            }
        }
    }

    /// The let-style eliminators. Their motive is the (non-dependent) type of
    /// the whole expression; in repair mode it is replaced by `expected`.
    fn infer_frame(&mut self, t: &Term, expected: Option<&Ty>) -> Res<Derivation> {
        use Term::*;
        let (motive, scrut) = match t {
            LetUnit { motive, scrut, .. }
            | LetTensor { motive, scrut, .. }
            | LetSigma { motive, scrut, .. }
            | LetBang { motive, scrut, .. }
            | Case { motive, scrut, .. } => (motive, scrut),
            _ => unreachable!(),
        };
        let rule = match t {
            LetUnit { .. } => "I-E",
            LetTensor { .. } => "⊗-E",
            LetSigma { .. } => "Σ-E",
            LetBang { .. } => "!-E",
            _ => "⊕-E",
        };
        let motive: Ty = match expected {
            Some(e) => e.clone(),
            None => (**motive).clone(),
        };
        let m = Box::new(motive.clone());
        self.node(|c| {
            if expected.is_none() {
                c.check_type(&motive).map_err(|e| relabel(e, rule))?;
            }
            let ds = c.infer(scrut)?;
            let bad = |what: &str| {
                err(
                    rule,
                    format!(
                        "scrutinee `{}` should have {} type but has type {}",
                        print_term(scrut),
                        what,
                        print_ty(&ds.ty)
                    ),
                )
            };
            let s = Box::new(ds.term.clone());
            match (t, &ds.ty) {
                (LetUnit { body, .. }, sty) => {
                    let ds = if *sty == Ty::Unit {
                        ds
                    } else if c.conv(sty, &Ty::Unit) {
                        c.convert(ds, &Ty::Unit)
                    } else {
                        return Err(bad("unit"));
                    };
                    let db = c.check(body, &motive)?;
                    let term = LetUnit {
                        motive: m,
                        scrut: s,
                        body: Box::new(db.term.clone()),
                    };
                    Ok((rule, motive.clone(), vec![], vec![ds, db], term))
                }
                (LetTensor { x, y, body, .. }, Ty::Tensor(a, b)) => {
                    let (xn, (yn, db)) = c.with_lin(x, (**a).clone(), rule, |c, xn| {
                        c.with_lin(y, (**b).clone(), rule, |c, yn| {
                            c.check(&open2(body, xn, yn), &motive)
                        })
                    })?;
                    let term = LetTensor {
                        motive: m,
                        scrut: s,
                        x: x.clone(),
                        y: y.clone(),
                        body: Box::new(db.term.close(&xn).close(&yn)),
                    };
                    Ok((rule, motive.clone(), vec![xn, yn], vec![ds, db], term))
                }
                (LetSigma { x, y, body, .. }, Ty::Sigma(_, a, b)) => {
                    let (xn, (yn, db)) = c.with_int(x, (**a).clone(), |c, xn| {
                        let bty = b.instantiate(&Term::free(xn));
                        c.with_lin(y, bty, rule, |c, yn| c.check(&open2(body, xn, yn), &motive))
                    })?;
                    let term = LetSigma {
                        motive: m,
                        scrut: s,
                        x: x.clone(),
                        y: y.clone(),
                        body: Box::new(db.term.close(&xn).close(&yn)),
                    };
                    Ok((rule, motive.clone(), vec![xn, yn], vec![ds, db], term))
                }
                (LetBang { x, body, .. }, Ty::Bang(a)) => {
                    let (xn, db) = c.with_int(x, (**a).clone(), |c, xn| {
                        c.check(&body.instantiate(&Term::free(xn)), &motive)
                    })?;
                    let term = LetBang {
                        motive: m,
                        scrut: s,
                        x: x.clone(),
                        body: Box::new(db.term.close(&xn)),
                    };
                    Ok((rule, motive.clone(), vec![xn], vec![ds, db], term))
                }
                (Case { x, left, y, right, .. }, Ty::Plus(a, b)) => {
                    let (a, b) = ((**a).clone(), (**b).clone());
                    let ((xn, dl), (yn, dr)) = c.additive(
                        rule,
                        |c| c.with_lin(x, a, rule, |c, xn| c.check(&left.instantiate(&Term::free(xn)), &motive)),
                        |c| c.with_lin(y, b, rule, |c, yn| c.check(&right.instantiate(&Term::free(yn)), &motive)),
                    )?;
                    let term = Case {
                        motive: m,
                        scrut: s,
                        x: x.clone(),
                        left: Box::new(dl.term.close(&xn)),
                        y: y.clone(),
                        right: Box::new(dr.term.close(&yn)),
                    };
                    Ok((rule, motive.clone(), vec![xn, yn], vec![ds, dl, dr], term))
                }
                (LetTensor { .. }, _) => Err(bad("a tensor")),
                (LetSigma { .. }, _) => Err(bad("a Sg")),
                (LetBang { .. }, _) => Err(bad("a `!`")),
                _ => Err(bad("a sum")),
            }
        })
    }

    fn lookup(&mut self, x: &str) -> Res<(&'static str, Ty)> {
        if let Some(i) = self.lin.iter().rposition(|(n, _)| n == x) {
            if !self.relaxed {
                if i < self.floor {
                    let rule = self.premise_rule("Lin-Var");
                    return Err(err(
                        rule,
                        format!(
                            "linear variable `{}` cannot be used where only intuitionistic variables are available",
                            display_name(x)
                        ),
                    ));
                }
                if self.used[i] {
                    return Err(err(
                        "Lin-Var",
                        format!("linear variable `{}` is used more than once", display_name(x)),
                    ));
                }
            }
            self.used[i] = true;
            return Ok(("Lin-Var", self.lin[i].1.clone()));
        }
        if let Some((_, ty)) = self.int.iter().rev().find(|(n, _)| n == x) {
            return Ok(("Int-Var", ty.clone()));
        }
        Err(err("Int-Var", format!("unbound variable `{}`", display_name(x))))
    }
}

/// Open a body with two binders (`x` outer, `y` inner).
pub(crate) fn open2(body: &Term, x: &str, y: &str) -> Term {
    body.instantiate(&Term::free(y)).instantiate(&Term::free(x))
}

fn mismatch(rule: &str, expected: &Ty, found: &Ty) -> Diagnostic {
    err(
        rule,
        format!("type mismatch: expected {}, found {}", print_ty(expected), print_ty(found)),
    )
}

/// A failed premise that only says "wrong type" is blamed on the rule that
/// imposed the type.
fn at_premise(mut e: Diagnostic, rule: &str) -> Diagnostic {
    if e.rule.as_deref().is_some_and(|r| r == "Tm-Conv" || r.ends_with("-F")) {
        e.rule = Some(rule.to_string());
    }
    e
}

/// The introduction rule of an introduction form.
fn intro_rule(t: &Term) -> Option<&'static str> {
    use Term::*;
    Some(match t {
        Star => "I-I",
        Tensor(..) => "⊗-I",
        Lam(..) => "⊸-I",
        TopUnit => "⊤-I",
        Pair(..) => "&-I",
        Inl(..) => "⊕-I1",
        Inr(..) => "⊕-I2",
        Bang(_) => "!-I",
        SigmaIntro(..) => "Σ-I",
        PiLam(..) => "Π-I",
        Refl(_) => "Id-I",
        Tt => "2-I1",
        Ff => "2-I2",
        _ => return None,
    })
}

fn relabel(mut e: Diagnostic, rule: &str) -> Diagnostic {
    if e.rule.as_deref().is_some_and(|r| r.ends_with("-F")) {
        e.rule = Some(rule.to_string());
    }
    e
}

// ---- convenience entry points ------------------------------------------

/// `Δ;Ξ ctx`: every type is well formed in the intuitionistic prefix.
pub fn check_context(sig: &Signature, ctx: &DualContext) -> Res<()> {
    Checker::new(sig).enter(ctx)
}

pub fn check_type(sig: &Signature, ctx: &DualContext, ty: &Ty) -> Res<()> {
    let mut c = Checker::new(sig);
    c.enter(ctx)?;
    c.check_type(ty)
}

/// Synthesise a type; returns the derivation and the remaining resources.
pub fn infer(sig: &Signature, ctx: &DualContext, t: &Term) -> Res<(Derivation, ResourceState)> {
    let mut c = Checker::new(sig);
    c.enter(ctx)?;
    let d = c.infer(t)?;
    Ok((d, c.state()))
}

/// `Δ;Ξ ⊢ t : A` with every linear variable of `Ξ` consumed.
pub fn check(sig: &Signature, ctx: &DualContext, t: &Term, ty: &Ty) -> Res<Derivation> {
    let mut c = Checker::new(sig);
    c.enter(ctx)?;
    c.check_type(ty)?;
    let d = c.check(t, ty)?;
    c.finish()?;
    Ok(d)
}

/// Synthesis ignoring linearity.
pub fn infer_relaxed(sig: &Signature, ctx: &DualContext, t: &Term) -> Res<Ty> {
    let mut c = Checker::relaxed(sig);
    c.enter(ctx)?;
    Ok(c.infer(t)?.ty)
}

/// Re-elaborate `t` against `ty`, replacing stale let motives and abort
/// annotations by the types they must have.
pub fn repair(sig: &Signature, ctx: &DualContext, t: &Term, ty: &Ty) -> Res<Term> {
    let mut c = Checker::repairing(sig);
    c.enter(ctx)?;
    Ok(c.check(t, ty)?.term)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equality::EqualityMode;
    use crate::surface::parse_module;
    use crate::syntax::build::*;

    fn run(src: &str) -> ModuleReport {
        check_module(&parse_module(src).unwrap(), EqualityMode::default())
    }

    fn sig_ab() -> Signature {
        run("type A\ntype B\n").signature
    }

    #[test]
    fn identity_checks() {
        let ctx = DualContext::new().with_lin("x", base("A"));
        let d = check(&sig_ab(), &ctx, &Term::free("x"), &base("A")).unwrap();
        assert_eq!(d.ty, base("A"));
    }

    #[test]
    fn unused_linear_variable_is_an_error() {
        let ctx = DualContext::new().with_lin("x", base("A")).with_lin("y", base("B"));
        let e = check(&sig_ab(), &ctx, &Term::free("x"), &base("A")).unwrap_err();
        assert!(e.rule.is_some(), "{:?}", e);
    }

    #[test]
    fn duplicated_linear_variable_is_an_error() {
        let ctx = DualContext::new().with_lin("x", base("A"));
        let t = tensor(Term::free("x"), Term::free("x"));
        assert!(check(&sig_ab(), &ctx, &t, &tensor_ty(base("A"), base("A"))).is_err());
    }

    #[test]
    fn intuitionistic_variables_may_be_reused() {
        let ctx = DualContext::new().with_int("x", base("A"));
        let t = tensor(bang(Term::free("x")), bang(Term::free("x")));
        let ty = tensor_ty(bang_ty(base("A")), bang_ty(base("A")));
        assert!(check(&sig_ab(), &ctx, &t, &ty).is_ok());
    }

    #[test]
    fn with_branches_share_their_resources() {
        let ctx = DualContext::new().with_lin("x", base("A"));
        let t = pair(Term::free("x"), Term::free("x"));
        assert!(check(&sig_ab(), &ctx, &t, &with(base("A"), base("A"))).is_ok());
    }

    #[test]
    fn linear_variables_may_not_appear_in_types() {
        let ctx = DualContext::new().with_lin("x", base("A"));
        let ty = id_ty(base("A"), Term::free("x"), Term::free("x"));
        assert!(check_type(&sig_ab(), &ctx, &ty).is_err());
    }

    #[test]
    fn contexts_are_checked_in_order() {
        let sig = run("type F (x : 2)\n").signature;
        let good = DualContext::new().with_int("b", Ty::Two).with_lin("y", Ty::Base("F".into(), vec![Term::free("b")]));
        assert!(check_context(&sig, &good).is_ok());
        let bad = DualContext::new().with_lin("y", Ty::Base("F".into(), vec![Term::free("b")]));
        assert!(check_context(&sig, &bad).is_err());
    }

    #[test]
    fn relaxed_inference_ignores_linearity() {
        let ctx = DualContext::new().with_lin("x", base("A"));
        let t = tensor(Term::free("x"), Term::free("x"));
        assert_eq!(infer_relaxed(&sig_ab(), &ctx, &t).unwrap(), tensor_ty(base("A"), base("A")));
    }

    #[test]
    fn module_reports_failing_declarations() {
        let r = run("type A\ndef bad (x : A) (y : A) : A := x\ndef good (x : A) : A := x\n");
        assert!(r.find("bad").unwrap().failed());
        assert!(r.find("bad").unwrap().rules.is_empty());
        assert!(!r.find("good").unwrap().failed());
        assert!(r.find("good").unwrap().rules.iter().any(|x| *x == "Lin-Var"));
    }
}
