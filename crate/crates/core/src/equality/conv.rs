//! Type-directed comparison of normal forms.

use super::norm::{is_stale, Normalizer};
use super::util::{erased_eq, free_var, is_frame, is_neutral, occurs, replace};
use super::{EqualityMode, Verdict};
use crate::checker::{open2, Checker, DualContext, Signature};
use crate::syntax::{build, Hint, Syntax, Term, Ty};

pub struct Cmp<'s> {
    pub sig: &'s Signature,
    pub mode: EqualityMode,
    pub n: Normalizer,
    pub int: Vec<(String, Ty)>,
    pub lin: Vec<(String, Ty)>,
    fuel: usize,
    pub starved: bool,
    pub trace: Vec<&'static str>,
}

type NRes = Result<Ty, Verdict>;

impl<'s> Cmp<'s> {
    pub fn new(sig: &'s Signature, mode: EqualityMode, ctx: &DualContext) -> Self {
        Cmp {
            sig,
            mode,
            n: Normalizer::default(),
            int: ctx.int.clone(),
            lin: ctx.lin.iter().map(|e| (e.name.clone(), e.ty.clone())).collect(),
            fuel: mode.fuel,
            starved: false,
            trace: Vec::new(),
        }
    }

    pub fn note(&mut self, r: &'static str) {
        if !self.trace.contains(&r) {
            self.trace.push(r);
        }
    }

    fn lookup(&self, x: &str) -> Option<Ty> {
        self.lin
            .iter()
            .rev()
            .chain(self.int.iter().rev())
            .find(|(n, _)| n == x)
            .map(|(_, t)| t.clone())
    }

    fn context(&self) -> DualContext {
        let mut c = DualContext::new();
        for (n, t) in &self.int {
            c = c.with_int(n, t.clone());
        }
        for (n, t) in &self.lin {
            c = c.with_lin(n, t.clone());
        }
        c
    }

    /// Synthesised type of a neutral term, ignoring linearity.
    fn type_of(&self, t: &Term) -> Option<Ty> {
        let mut c = Checker::relaxed(self.sig);
        c.mode = EqualityMode {
            ext_positive: false,
            ..self.mode
        };
        // the context was validated when it was formed
        c.enter(&self.context()).ok()?;
        c.infer(t).ok().map(|d| d.ty)
    }

    /// Normalise both sides and compare at `ty`.
    pub fn terms(&mut self, l: &Term, r: &Term, ty: &Ty) -> Verdict {
        let (nl, nr) = (self.n.norm(l), self.n.norm(r));
        self.at(&nl, &nr, ty)
    }

    fn with_lin<R>(&mut self, h: &Hint, ty: Ty, f: impl FnOnce(&mut Self, &str) -> R) -> R {
        let x = self.n.fresh(h);
        self.lin.push((x.clone(), ty));
        let r = f(self, &x);
        self.lin.pop();
        r
    }

    fn with_int<R>(&mut self, h: &Hint, ty: Ty, f: impl FnOnce(&mut Self, &str) -> R) -> R {
        let x = self.n.fresh(h);
        self.int.push((x.clone(), ty));
        let r = f(self, &x);
        self.int.pop();
        r
    }

    /// Compare two normal forms at `ty`.
    pub fn at(&mut self, l: &Term, r: &Term, ty: &Ty) -> Verdict {
        if self.n.hit {
            return Verdict::Undecided;
        }
        if erased_eq(l, r) {
            self.note("Tm-Eq-R");
            return Verdict::True;
        }
        if self.mode.eta_negative {
            match ty {
                Ty::Lolli(a, b) => {
                    if !matches!((l, r), (Term::Lam(..), Term::Lam(..))) {
                        self.note("⊸-U");
                    }
                    return self.with_lin(&Hint::new("x"), (**a).clone(), |c, x| {
                        let v = Term::free(x);
                        let la = c.n.norm(&build::app(l.clone(), v.clone()));
                        let ra = c.n.norm(&build::app(r.clone(), v));
                        c.at(&la, &ra, b)
                    });
                }
                Ty::Pi(h, a, b) => {
                    if !matches!((l, r), (Term::PiLam(..), Term::PiLam(..))) {
                        self.note("Π-U");
                    }
                    return self.with_int(h, (**a).clone(), |c, x| {
                        let v = Term::free(x);
                        let la = c.n.norm(&build::pi_app(l.clone(), v.clone()));
                        let ra = c.n.norm(&build::pi_app(r.clone(), v.clone()));
                        c.at(&la, &ra, &b.instantiate(&v))
                    });
                }
                Ty::With(a, b) => {
                    if !matches!((l, r), (Term::Pair(..), Term::Pair(..))) {
                        self.note("&-U");
                    }
                    let fl = self.n.norm(&Term::Fst(Box::new(l.clone())));
                    let fr = self.n.norm(&Term::Fst(Box::new(r.clone())));
                    let v1 = self.at(&fl, &fr, a);
                    if v1 == Verdict::False {
                        return v1;
                    }
                    let sl = self.n.norm(&Term::Snd(Box::new(l.clone())));
                    let sr = self.n.norm(&Term::Snd(Box::new(r.clone())));
                    return v1.and(self.at(&sl, &sr, b));
                }
                Ty::Top => {
                    self.note("⊤-U");
                    return Verdict::True;
                }
                _ => {}
            }
        }
        let v = self.structural(l, r, ty);
        if v == Verdict::True || !self.mode.ext_positive {
            return v;
        }
        self.expand(l, r, ty, v)
    }

    fn structural(&mut self, l: &Term, r: &Term, ty: &Ty) -> Verdict {
        use Term::*;
        use Verdict::*;
        match (l, r) {
            (LetUnit { scrut: s1, body: b1, .. }, LetUnit { scrut: s2, body: b2, .. }) => match self.neutral(s1, s2) {
                Ok(_) => self.at(b1, b2, ty),
                Err(v) => v,
            },
            (LetTensor { scrut: s1, x, y, body: b1, .. }, LetTensor { scrut: s2, body: b2, .. }) => {
                match self.neutral(s1, s2) {
                    Ok(Ty::Tensor(a, b)) => self.with_lin(x, *a, |c, xn| {
                        c.with_lin(y, *b, |c, yn| c.at(&open2(b1, xn, yn), &open2(b2, xn, yn), ty))
                    }),
                    Ok(_) => Undecided,
                    Err(v) => v,
                }
            }
            (LetSigma { scrut: s1, x, y, body: b1, .. }, LetSigma { scrut: s2, body: b2, .. }) => {
                match self.neutral(s1, s2) {
                    Ok(Ty::Sigma(_, a, b)) => self.with_int(x, *a, |c, xn| {
                        let bt = b.instantiate(&Term::free(xn));
                        c.with_lin(y, bt, |c, yn| c.at(&open2(b1, xn, yn), &open2(b2, xn, yn), ty))
                    }),
                    Ok(_) => Undecided,
                    Err(v) => v,
                }
            }
            (LetBang { scrut: s1, x, body: b1, .. }, LetBang { scrut: s2, body: b2, .. }) => {
                match self.neutral(s1, s2) {
                    Ok(Ty::Bang(a)) => self.with_int(x, *a, |c, xn| {
                        let v = Term::free(xn);
                        c.at(&b1.instantiate(&v), &b2.instantiate(&v), ty)
                    }),
                    Ok(_) => Undecided,
                    Err(v) => v,
                }
            }
            (
                Case { scrut: s1, x, left: l1, y, right: r1, .. },
                Case { scrut: s2, left: l2, right: r2, .. },
            ) => match self.neutral(s1, s2) {
                Ok(Ty::Plus(a, b)) => {
                    let v1 = self.with_lin(x, *a, |c, xn| {
                        let v = Term::free(xn);
                        c.at(&l1.instantiate(&v), &l2.instantiate(&v), ty)
                    });
                    if v1 == False {
                        return False;
                    }
                    v1.and(self.with_lin(y, *b, |c, yn| {
                        let v = Term::free(yn);
                        c.at(&r1.instantiate(&v), &r2.instantiate(&v), ty)
                    }))
                }
                Ok(_) => Undecided,
                Err(v) => v,
            },
            (
                IdElim { motive, z, branch: b1, proof: p1, left: l1, right: r1, .. },
                IdElim { branch: b2, proof: p2, left: l2, right: r2, .. },
            ) => match self.neutral(p1, p2) {
                Ok(Ty::Id(a, _, _)) => self.with_int(z, *a, |c, zn| {
                    let v = Term::free(zn);
                    let (mut b1, mut b2) = (b1.instantiate(&v), b2.instantiate(&v));
                    let mut bt = if is_stale(motive) {
                        ty.clone()
                    } else {
                        motive.instantiate(&v).instantiate(&v)
                    };
                    // Eliminating a proof variable between two endpoint
                    // variables: by Id-U the branch only matters on the diagonal.
                    if free_var(p1).is_some() && erased_eq(l1, l2) && erased_eq(r1, r2) {
                        for e in [l1, r1] {
                            if let Some(x) = free_var(e) {
                                if c.int.iter().any(|(n, _)| n == x) {
                                    b1 = b1.subst(x, &v);
                                    b2 = b2.subst(x, &v);
                                    bt = bt.subst(x, &v);
                                }
                            }
                        }
                    }
                    c.at(&b1, &b2, &bt)
                }),
                Ok(_) => Undecided,
                Err(v) => v,
            },
            (Abort(_, s1), Abort(_, s2)) => match self.neutral(s1, s2) {
                Ok(_) => True,
                Err(v) => v,
            },
            (Star, Star) | (Tt, Tt) | (Ff, Ff) | (TopUnit, TopUnit) => True,
            (Tensor(a1, b1), Tensor(a2, b2)) => match ty {
                Ty::Tensor(a, b) => {
                    let v = self.at(a1, a2, a);
                    if v == False {
                        return False;
                    }
                    v.and(self.at(b1, b2, b))
                }
                _ => Undecided,
            },
            (Pair(a1, b1), Pair(a2, b2)) => match ty {
                Ty::With(a, b) => {
                    let v = self.at(a1, a2, a);
                    if v == False {
                        return False;
                    }
                    v.and(self.at(b1, b2, b))
                }
                _ => Undecided,
            },
            (Inl(_, a1), Inl(_, a2)) => match ty {
                Ty::Plus(a, _) => self.at(a1, a2, a),
                _ => Undecided,
            },
            (Inr(_, a1), Inr(_, a2)) => match ty {
                Ty::Plus(_, b) => self.at(a1, a2, b),
                _ => Undecided,
            },
            (Bang(a1), Bang(a2)) => match ty {
                Ty::Bang(a) => self.at(a1, a2, a),
                _ => Undecided,
            },
            (Refl(a1), Refl(a2)) => match ty {
                Ty::Id(a, _, _) => self.at(a1, a2, a),
                _ => Undecided,
            },
            (SigmaIntro(a1, b1), SigmaIntro(a2, b2)) => match ty {
                Ty::Sigma(_, a, b) => {
                    let v = self.at(a1, a2, a);
                    if v == False {
                        return False;
                    }
                    v.and(self.at(b1, b2, &b.instantiate(a1)))
                }
                _ => Undecided,
            },
            (Lam(h, _, b1), Lam(_, _, b2)) => match ty {
                Ty::Lolli(a, b) => self.with_lin(h, (**a).clone(), |c, x| {
                    let v = Term::free(x);
                    c.at(&b1.instantiate(&v), &b2.instantiate(&v), b)
                }),
                _ => Undecided,
            },
            (PiLam(h, _, b1), PiLam(_, _, b2)) => match ty {
                Ty::Pi(_, a, b) => self.with_int(h, (**a).clone(), |c, x| {
                    let v = Term::free(x);
                    c.at(&b1.instantiate(&v), &b2.instantiate(&v), &b.instantiate(&v))
                }),
                _ => Undecided,
            },
            _ if is_neutral(l) && is_neutral(r) => match self.neutral(l, r) {
                Ok(_) => True,
                Err(v) => v,
            },
            _ => False,
        }
    }

    /// Compare two neutral terms; on success return their common type.
    fn neutral(&mut self, l: &Term, r: &Term) -> NRes {
        use Term::*;
        let ok = |v: Verdict, ty: Ty| if v == Verdict::True { Ok(ty) } else { Err(v) };
        match (l, r) {
            (Var(a), Var(b)) if a == b => match free_var(l).and_then(|x| self.lookup(x)) {
                Some(t) => Ok(t),
                None => Err(Verdict::Undecided),
            },
            (Const(c1, a1), Const(c2, a2)) if c1 == c2 && a1.len() == a2.len() => {
                let Some(decl) = self.sig.consts.get(c1).cloned() else {
                    return Err(Verdict::Undecided);
                };
                let mut sub: Vec<(String, Term)> = Vec::new();
                let mut v = Verdict::True;
                for ((p, pty), (x, y)) in decl.params.iter().zip(a1.iter().zip(a2)) {
                    v = v.and(self.terms(x, y, &pty.subst_many(&sub)));
                    if v == Verdict::False {
                        return Err(v);
                    }
                    sub.push((p.clone(), x.clone()));
                }
                ok(v, decl.ty.subst_many(&sub))
            }
            (App(f1, a1), App(f2, a2)) => match self.neutral(f1, f2)? {
                Ty::Lolli(a, b) => ok(self.at(a1, a2, &a), *b),
                _ => Err(Verdict::Undecided),
            },
            (PiApp(f1, a1), PiApp(f2, a2)) => match self.neutral(f1, f2)? {
                Ty::Pi(_, a, b) => ok(self.at(a1, a2, &a), b.instantiate(a1)),
                _ => Err(Verdict::Undecided),
            },
            (Fst(p1), Fst(p2)) | (Snd(p1), Snd(p2)) => match self.neutral(p1, p2)? {
                Ty::With(a, b) => Ok(if matches!(l, Fst(_)) { *a } else { *b }),
                _ => Err(Verdict::Undecided),
            },
            (
                If { motive: m1, z, scrut: s1, then_branch: t1, else_branch: e1 },
                If { motive: m2, scrut: s2, then_branch: t2, else_branch: e2, .. },
            ) => {
                self.neutral(s1, s2)?;
                let mv = self.with_int(z, Ty::Two, |c, zn| {
                    let v = Term::free(zn);
                    c.types(&m1.instantiate(&v), &m2.instantiate(&v))
                });
                if mv != Verdict::True {
                    return Err(mv);
                }
                let v = self.at(t1, t2, &m1.instantiate(&Tt));
                if v == Verdict::False {
                    return Err(v);
                }
                ok(v.and(self.at(e1, e2, &m1.instantiate(&Ff))), m1.instantiate(s1))
            }
            _ => Err(Verdict::False),
        }
    }

    /// Positive extensionality: bounded U-expansions and splitting on
    /// boolean variables.
    fn expand(&mut self, l: &Term, r: &Term, ty: &Ty, base: Verdict) -> Verdict {
        let mut undecided = base == Verdict::Undecided;
        let mut cands: Vec<Cand> = Vec::new();
        for (side, this, other) in [(Side::Right, l, r), (Side::Left, r, l)] {
            if is_frame(this) {
                if let Some(s) = super::util::frame_scrut(this) {
                    if occurs(other, s) {
                        cands.push(Cand::Eta(side, this.clone(), s.clone()));
                    }
                }
            }
        }
        for x in self.bool_scrutinees(l).into_iter().chain(self.bool_scrutinees(r)) {
            if !cands.iter().any(|c| matches!(c, Cand::Split(y) if *y == x)) {
                cands.push(Cand::Split(x));
            }
        }
        for cand in cands {
            if self.fuel == 0 {
                self.starved = true;
                undecided = true;
                break;
            }
            self.fuel -= 1;
            let v = match cand {
                Cand::Eta(side, frame, s) => {
                    let Some(eta) = self.eta(&frame, &s) else { continue };
                    if side == Side::Left {
                        self.note("Tm-Eq-S");
                    }
                    let target = if side == Side::Right { r } else { l };
                    let (expanded, _) = replace(target, &s, &eta);
                    let expanded = self.n.norm(&expanded);
                    if side == Side::Right {
                        self.at(l, &expanded, ty)
                    } else {
                        self.at(&expanded, r, ty)
                    }
                }
                Cand::Split(x) => {
                    self.note("2-U");
                    self.split(&x, l, r, ty)
                }
            };
            match v {
                Verdict::True => return Verdict::True,
                Verdict::Undecided => undecided = true,
                Verdict::False => {}
            }
        }
        if undecided {
            Verdict::Undecided
        } else {
            Verdict::False
        }
    }

    /// The U-expansion of `s` matching the eliminator `frame`.
    fn eta(&mut self, frame: &Term, s: &Term) -> Option<Term> {
        use Term::*;
        let sty = self.type_of(s)?;
        let fresh = |c: &mut Self, h: &str| c.n.fresh(&Hint::new(h));
        let t = match (frame, &sty) {
            (LetUnit { .. }, Ty::Unit) => {
                self.note("I-U");
                build::let_unit(Ty::Unit, s.clone(), Star)
            }
            (LetTensor { .. }, Ty::Tensor(..)) => {
                self.note("⊗-U");
                let (x, y) = (fresh(self, "x"), fresh(self, "y"));
                build::let_tensor(sty.clone(), s.clone(), &x, &y, build::tensor(Term::free(x.as_str()), Term::free(y.as_str())))
            }
            (LetSigma { .. }, Ty::Sigma(..)) => {
                self.note("Σ-U");
                let (x, y) = (fresh(self, "x"), fresh(self, "y"));
                build::let_sigma(sty.clone(), s.clone(), &x, &y, build::sigma_intro(Term::free(x.as_str()), Term::free(y.as_str())))
            }
            (LetBang { .. }, Ty::Bang(_)) => {
                self.note("!-U");
                let x = fresh(self, "x");
                build::let_bang(sty.clone(), s.clone(), &x, build::bang(Term::free(x.as_str())))
            }
            (Case { .. }, Ty::Plus(a, b)) => {
                self.note("⊕-U");
                let (x, y) = (fresh(self, "x"), fresh(self, "y"));
                build::case(
                    sty.clone(),
                    s.clone(),
                    &x,
                    Inl(b.clone(), Box::new(Term::free(x.as_str()))),
                    &y,
                    Inr(a.clone(), Box::new(Term::free(y.as_str()))),
                )
            }
            (IdElim { .. }, Ty::Id(a, l, r)) => {
                free_var(l)?;
                free_var(r)?;
                self.note("Id-U");
                let (mx, my, z) = (fresh(self, "x"), fresh(self, "x'"), fresh(self, "z"));
                let motive = Ty::Id(a.clone(), Box::new(Term::free(mx.as_str())), Box::new(Term::free(my.as_str())));
                build::id_elim(
                    &mx,
                    &my,
                    motive,
                    (**l).clone(),
                    (**r).clone(),
                    s.clone(),
                    &z,
                    Refl(Box::new(Term::free(z.as_str()))),
                )
            }
            (Abort(..), Ty::Zero) => {
                self.note("0-U");
                Abort(Box::new(Ty::Zero), Box::new(s.clone()))
            }
            _ => return None,
        };
        Some(t)
    }

    /// Boolean variables of the context that some `if` in `t` branches on.
    fn bool_scrutinees(&self, t: &Term) -> Vec<String> {
        let mut out = Vec::new();
        collect_ifs(t, &mut out);
        out.retain(|x| self.int.iter().any(|(n, ty)| n == x && *ty == Ty::Two));
        out
    }

    fn split(&mut self, x: &str, l: &Term, r: &Term, ty: &Ty) -> Verdict {
        let mut v = Verdict::True;
        for val in [Term::Tt, Term::Ff] {
            let saved = (self.int.clone(), self.lin.clone());
            for (_, t) in self.int.iter_mut().chain(self.lin.iter_mut()) {
                *t = t.subst(x, &val);
            }
            let ls = self.n.norm(&l.subst(x, &val));
            let rs = self.n.norm(&r.subst(x, &val));
            let here = self.at(&ls, &rs, &ty.subst(x, &val));
            self.int = saved.0;
            self.lin = saved.1;
            v = v.and(here);
            if v == Verdict::False {
                break;
            }
        }
        v
    }

    /// Judgemental equality of types.
    pub fn types(&mut self, a: &Ty, b: &Ty) -> Verdict {
        if a == b {
            self.note("Ty-Eq-R");
            return Verdict::True;
        }
        use Ty::*;
        match (a, b) {
            (Base(n1, a1), Base(n2, a2)) if n1 == n2 && a1.len() == a2.len() => {
                let Some(decl) = self.sig.types.get(n1).cloned() else {
                    return Verdict::False;
                };
                let mut sub: Vec<(String, Term)> = Vec::new();
                let mut v = Verdict::True;
                for ((p, pty), (x, y)) in decl.params.iter().zip(a1.iter().zip(a2)) {
                    v = v.and(self.terms(x, y, &pty.subst_many(&sub)));
                    if v == Verdict::False {
                        return v;
                    }
                    sub.push((p.clone(), x.clone()));
                }
                v
            }
            (Tensor(a1, b1), Tensor(a2, b2))
            | (Lolli(a1, b1), Lolli(a2, b2))
            | (With(a1, b1), With(a2, b2))
            | (Plus(a1, b1), Plus(a2, b2)) => {
                let v = self.types(a1, a2);
                if v == Verdict::False {
                    return v;
                }
                v.and(self.types(b1, b2))
            }
            (Bang(a1), Bang(a2)) => self.types(a1, a2),
            (Sigma(h, a1, b1), Sigma(_, a2, b2)) | (Pi(h, a1, b1), Pi(_, a2, b2)) => {
                let v = self.types(a1, a2);
                if v == Verdict::False {
                    return v;
                }
                v.and(self.with_int(h, (**a1).clone(), |c, x| {
                    let v = Term::free(x);
                    c.types(&b1.instantiate(&v), &b2.instantiate(&v))
                }))
            }
            (Id(t1, l1, r1), Id(t2, l2, r2)) => {
                let v = self.types(t1, t2);
                if v == Verdict::False {
                    return v;
                }
                let v = v.and(self.terms(l1, l2, t1));
                if v == Verdict::False {
                    return v;
                }
                v.and(self.terms(r1, r2, t1))
            }
            _ => Verdict::False,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

enum Cand {
    /// Expand occurrences of the scrutinee of a leading frame on the other side.
    Eta(Side, Term, Term),
    Split(String),
}

fn collect_ifs(t: &Term, out: &mut Vec<String>) {
    if let Term::If { scrut, .. } = t {
        if let Some(x) = free_var(scrut) {
            if !out.iter().any(|y| y == x) {
                out.push(x.to_string());
            }
        }
    }
    super::util::map_parts(
        t,
        &mut |s| {
            collect_ifs(s, out);
            s.clone()
        },
        &mut |y| y.clone(),
    );
}
