//! Abstract syntax of types and terms.
//!
//! Binding uses a locally nameless representation: variables bound inside a
//! term are de Bruijn indices, free variables are names. Binder names are kept
//! as [`Hint`]s for printing only and never take part in equality, so the
//! derived `PartialEq` on [`Term`] and [`Ty`] is alpha-equivalence.
//!
//! Multi-binders (`let t be x (x) y in c`, `let t be !x (x) y in c`) bind their
//! variables left to right, so in the body `y` is index 0 and `x` is index 1.

use std::collections::{BTreeMap, BTreeSet};
use std::hash::{Hash, Hasher};

/// Display name of a bound variable. Ignored by `==` and hashing.
#[derive(Clone, Debug, Default)]
pub struct Hint(pub String);

impl Hint {
    pub fn new(s: impl Into<String>) -> Self {
        Hint(s.into())
    }
}

impl PartialEq for Hint {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Hint {}

impl Hash for Hint {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    Bound(usize),
    Free(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Ty {
    /// A declared base type applied to intuitionistic arguments.
    Base(String, Vec<Term>),
    Unit,
    Tensor(Box<Ty>, Box<Ty>),
    Lolli(Box<Ty>, Box<Ty>),
    Top,
    With(Box<Ty>, Box<Ty>),
    Zero,
    Plus(Box<Ty>, Box<Ty>),
    Bang(Box<Ty>),
    /// `Sg !x:A. B`, binding `x` in `B`.
    Sigma(Hint, Box<Ty>, Box<Ty>),
    /// `Pi !x:A. B`, binding `x` in `B`.
    Pi(Hint, Box<Ty>, Box<Ty>),
    Id(Box<Ty>, Box<Term>, Box<Term>),
    Two,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Var),
    /// A signature constant applied to intuitionistic arguments.
    Const(String, Vec<Term>),
    Star,
    LetUnit {
        motive: Box<Ty>,
        scrut: Box<Term>,
        body: Box<Term>,
    },
    Tensor(Box<Term>, Box<Term>),
    LetTensor {
        motive: Box<Ty>,
        scrut: Box<Term>,
        x: Hint,
        y: Hint,
        body: Box<Term>,
    },
    Lam(Hint, Box<Ty>, Box<Term>),
    App(Box<Term>, Box<Term>),
    TopUnit,
    Pair(Box<Term>, Box<Term>),
    Fst(Box<Term>),
    Snd(Box<Term>),
    /// `abort[B] t`, the eliminator of `0`.
    Abort(Box<Ty>, Box<Term>),
    /// `inl[B] a : A (+) B`; carries the right summand.
    Inl(Box<Ty>, Box<Term>),
    /// `inr[A] b : A (+) B`; carries the left summand.
    Inr(Box<Ty>, Box<Term>),
    Case {
        motive: Box<Ty>,
        scrut: Box<Term>,
        x: Hint,
        left: Box<Term>,
        y: Hint,
        right: Box<Term>,
    },
    Bang(Box<Term>),
    LetBang {
        motive: Box<Ty>,
        scrut: Box<Term>,
        x: Hint,
        body: Box<Term>,
    },
    /// `!a (x) b`, the introduction form of `Sg`.
    SigmaIntro(Box<Term>, Box<Term>),
    LetSigma {
        motive: Box<Ty>,
        scrut: Box<Term>,
        x: Hint,
        y: Hint,
        body: Box<Term>,
    },
    PiLam(Hint, Box<Ty>, Box<Term>),
    PiApp(Box<Term>, Box<Term>),
    Refl(Box<Term>),
    /// `idelim[x x'. D] (a, a', p) with z -> d`. The motive binds `x`
    /// (index 1) and `x'` (index 0); the branch binds `z`.
    IdElim {
        motive: Box<Ty>,
        mx: Hint,
        my: Hint,
        z: Hint,
        branch: Box<Term>,
        left: Box<Term>,
        right: Box<Term>,
        proof: Box<Term>,
    },
    Tt,
    Ff,
    /// `if[z. A] t then u else v`; the motive binds `z`.
    If {
        motive: Box<Ty>,
        z: Hint,
        scrut: Box<Term>,
        then_branch: Box<Term>,
        else_branch: Box<Term>,
    },
}

impl Term {
    pub fn free(name: impl Into<String>) -> Term {
        Term::Var(Var::Free(name.into()))
    }

    pub fn bound(i: usize) -> Term {
        Term::Var(Var::Bound(i))
    }

    pub fn as_free(&self) -> Option<&str> {
        match self {
            Term::Var(Var::Free(n)) => Some(n),
            _ => None,
        }
    }
}

fn bx<T>(t: T) -> Box<T> {
    Box::new(t)
}

/// Rebuild a term, replacing each variable occurrence by `f(var, depth)`,
/// where `depth` counts the binders crossed so far.
pub fn map_term<F>(t: &Term, depth: usize, f: &mut F) -> Term
where
    F: FnMut(&Var, usize) -> Term,
{
    use Term::*;
    match t {
        Var(v) => f(v, depth),
        Const(c, args) => Const(c.clone(), args.iter().map(|a| map_term(a, depth, f)).collect()),
        Star => Star,
        LetUnit {
            motive,
            scrut,
            body,
        } => LetUnit {
            motive: bx(map_ty(motive, depth, f)),
            scrut: bx(map_term(scrut, depth, f)),
            body: bx(map_term(body, depth, f)),
        },
        Tensor(a, b) => Tensor(bx(map_term(a, depth, f)), bx(map_term(b, depth, f))),
        LetTensor {
            motive,
            scrut,
            x,
            y,
            body,
        } => LetTensor {
            motive: bx(map_ty(motive, depth, f)),
            scrut: bx(map_term(scrut, depth, f)),
            x: x.clone(),
            y: y.clone(),
            body: bx(map_term(body, depth + 2, f)),
        },
        Lam(h, ty, body) => Lam(
            h.clone(),
            bx(map_ty(ty, depth, f)),
            bx(map_term(body, depth + 1, f)),
        ),
        App(a, b) => App(bx(map_term(a, depth, f)), bx(map_term(b, depth, f))),
        TopUnit => TopUnit,
        Pair(a, b) => Pair(bx(map_term(a, depth, f)), bx(map_term(b, depth, f))),
        Fst(a) => Fst(bx(map_term(a, depth, f))),
        Snd(a) => Snd(bx(map_term(a, depth, f))),
        Abort(ty, a) => Abort(bx(map_ty(ty, depth, f)), bx(map_term(a, depth, f))),
        Inl(ty, a) => Inl(bx(map_ty(ty, depth, f)), bx(map_term(a, depth, f))),
        Inr(ty, a) => Inr(bx(map_ty(ty, depth, f)), bx(map_term(a, depth, f))),
        Case {
            motive,
            scrut,
            x,
            left,
            y,
            right,
        } => Case {
            motive: bx(map_ty(motive, depth, f)),
            scrut: bx(map_term(scrut, depth, f)),
            x: x.clone(),
            left: bx(map_term(left, depth + 1, f)),
            y: y.clone(),
            right: bx(map_term(right, depth + 1, f)),
        },
        Bang(a) => Bang(bx(map_term(a, depth, f))),
        LetBang {
            motive,
            scrut,
            x,
            body,
        } => LetBang {
            motive: bx(map_ty(motive, depth, f)),
            scrut: bx(map_term(scrut, depth, f)),
            x: x.clone(),
            body: bx(map_term(body, depth + 1, f)),
        },
        SigmaIntro(a, b) => SigmaIntro(bx(map_term(a, depth, f)), bx(map_term(b, depth, f))),
        LetSigma {
            motive,
            scrut,
            x,
            y,
            body,
        } => LetSigma {
            motive: bx(map_ty(motive, depth, f)),
            scrut: bx(map_term(scrut, depth, f)),
            x: x.clone(),
            y: y.clone(),
            body: bx(map_term(body, depth + 2, f)),
        },
        PiLam(h, ty, body) => PiLam(
            h.clone(),
            bx(map_ty(ty, depth, f)),
            bx(map_term(body, depth + 1, f)),
        ),
        PiApp(a, b) => PiApp(bx(map_term(a, depth, f)), bx(map_term(b, depth, f))),
        Refl(a) => Refl(bx(map_term(a, depth, f))),
        IdElim {
            motive,
            mx,
            my,
            z,
            branch,
            left,
            right,
            proof,
        } => IdElim {
            motive: bx(map_ty(motive, depth + 2, f)),
            mx: mx.clone(),
            my: my.clone(),
            z: z.clone(),
            branch: bx(map_term(branch, depth + 1, f)),
            left: bx(map_term(left, depth, f)),
            right: bx(map_term(right, depth, f)),
            proof: bx(map_term(proof, depth, f)),
        },
        Tt => Tt,
        Ff => Ff,
        If {
            motive,
            z,
            scrut,
            then_branch,
            else_branch,
        } => If {
            motive: bx(map_ty(motive, depth + 1, f)),
            z: z.clone(),
            scrut: bx(map_term(scrut, depth, f)),
            then_branch: bx(map_term(then_branch, depth, f)),
            else_branch: bx(map_term(else_branch, depth, f)),
        },
    }
}

pub fn map_ty<F>(t: &Ty, depth: usize, f: &mut F) -> Ty
where
    F: FnMut(&Var, usize) -> Term,
{
    use Ty::*;
    match t {
        Base(n, args) => Base(n.clone(), args.iter().map(|a| map_term(a, depth, f)).collect()),
        Unit => Unit,
        Tensor(a, b) => Tensor(bx(map_ty(a, depth, f)), bx(map_ty(b, depth, f))),
        Lolli(a, b) => Lolli(bx(map_ty(a, depth, f)), bx(map_ty(b, depth, f))),
        Top => Top,
        With(a, b) => With(bx(map_ty(a, depth, f)), bx(map_ty(b, depth, f))),
        Zero => Zero,
        Plus(a, b) => Plus(bx(map_ty(a, depth, f)), bx(map_ty(b, depth, f))),
        Bang(a) => Bang(bx(map_ty(a, depth, f))),
        Sigma(h, a, b) => Sigma(
            h.clone(),
            bx(map_ty(a, depth, f)),
            bx(map_ty(b, depth + 1, f)),
        ),
        Pi(h, a, b) => Pi(
            h.clone(),
            bx(map_ty(a, depth, f)),
            bx(map_ty(b, depth + 1, f)),
        ),
        Id(a, l, r) => Id(
            bx(map_ty(a, depth, f)),
            bx(map_term(l, depth, f)),
            bx(map_term(r, depth, f)),
        ),
        Two => Two,
    }
}

/// Things that contain variables: terms and types share the binding operations.
pub trait Syntax: Sized {
    fn map_vars<F: FnMut(&Var, usize) -> Term>(&self, f: &mut F) -> Self;

    /// Replace the outermost dangling index (0 at top level) by `u`, which
    /// must be locally closed. Higher dangling indices shift down by one.
    fn instantiate(&self, u: &Term) -> Self {
        self.map_vars(&mut |v, d| match v {
            Var::Bound(i) if *i == d => u.clone(),
            Var::Bound(i) if *i > d => Term::bound(i - 1),
            other => Term::Var(other.clone()),
        })
    }

    /// Abstract the free name `name` into a new outermost binder.
    fn close(&self, name: &str) -> Self {
        self.map_vars(&mut |v, d| match v {
            Var::Free(n) if n == name => Term::bound(d),
            Var::Bound(i) if *i >= d => Term::bound(i + 1),
            other => Term::Var(other.clone()),
        })
    }

    /// Capture-avoiding substitution of a locally closed `u` for the free name `x`.
    fn subst(&self, x: &str, u: &Term) -> Self {
        self.map_vars(&mut |v, _| match v {
            Var::Free(n) if n == x => u.clone(),
            other => Term::Var(other.clone()),
        })
    }

    /// Simultaneous substitution for several free names.
    fn subst_many(&self, sub: &[(String, Term)]) -> Self {
        if sub.is_empty() {
            return self.map_vars(&mut |v, _| Term::Var(v.clone()));
        }
        self.map_vars(&mut |v, _| match v {
            Var::Free(n) => sub
                .iter()
                .find(|(k, _)| k == n)
                .map(|(_, u)| u.clone())
                .unwrap_or_else(|| Term::Var(v.clone())),
            other => Term::Var(other.clone()),
        })
    }

    /// Rename a free variable.
    fn rename(&self, from: &str, to: &str) -> Self {
        self.subst(from, &Term::free(to))
    }

    fn is_locally_closed(&self) -> bool {
        let mut ok = true;
        self.map_vars(&mut |v, d| {
            if let Var::Bound(i) = v {
                if *i >= d {
                    ok = false;
                }
            }
            Term::Var(v.clone())
        });
        ok
    }

    fn mentions(&self, name: &str) -> bool {
        let mut hit = false;
        self.map_vars(&mut |v, _| {
            if matches!(v, Var::Free(n) if n == name) {
                hit = true;
            }
            Term::Var(v.clone())
        });
        hit
    }

    fn free_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.map_vars(&mut |v, _| {
            if let Var::Free(n) = v {
                out.insert(n.clone());
            }
            Term::Var(v.clone())
        });
        out
    }
}

impl Syntax for Term {
    fn map_vars<F: FnMut(&Var, usize) -> Term>(&self, f: &mut F) -> Self {
        map_term(self, 0, f)
    }
}

impl Syntax for Ty {
    fn map_vars<F: FnMut(&Var, usize) -> Term>(&self, f: &mut F) -> Self {
        map_ty(self, 0, f)
    }
}

/// Alpha-equivalence. With locally nameless binders this is structural equality.
pub fn alpha_eq(t: &Term, u: &Term) -> bool {
    t == u
}

pub fn alpha_eq_ty(a: &Ty, b: &Ty) -> bool {
    a == b
}

/// Substitution of an intuitionistic term for an intuitionistic variable.
pub fn subst_int<S: Syntax>(target: &S, a: &Term, x: &str) -> S {
    target.subst(x, a)
}

/// Substitution of a term for a linear variable.
pub fn subst_lin(b: &Term, a: &Term, x: &str) -> Term {
    b.subst(x, a)
}

/// Free variables split by the position they occur in: a name is reported as
/// intuitionistic when it occurs inside a type or an argument that the rules
/// type in an empty linear context, and counted in the linear multiset for
/// every occurrence in a resource position.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FreeVars {
    pub int: BTreeSet<String>,
    pub lin: BTreeMap<String, usize>,
}

impl FreeVars {
    pub fn lin_count(&self, x: &str) -> usize {
        self.lin.get(x).copied().unwrap_or(0)
    }
}

pub fn free_vars(t: &Term) -> FreeVars {
    let mut fv = FreeVars::default();
    fv_term(t, false, &mut fv);
    fv
}

fn fv_ty(t: &Ty, fv: &mut FreeVars) {
    for n in t.free_names() {
        fv.int.insert(n);
    }
}

fn fv_int(t: &Term, fv: &mut FreeVars) {
    for n in t.free_names() {
        fv.int.insert(n);
    }
}

fn fv_term(t: &Term, int_pos: bool, fv: &mut FreeVars) {
    use Term::*;
    if int_pos {
        fv_int(t, fv);
        return;
    }
    match t {
        Var(crate::syntax::Var::Free(n)) => *fv.lin.entry(n.clone()).or_default() += 1,
        Var(_) => {}
        Const(_, args) => args.iter().for_each(|a| fv_int(a, fv)),
        Star | TopUnit | Tt | Ff => {}
        LetUnit {
            motive,
            scrut,
            body,
        } => {
            fv_ty(motive, fv);
            fv_term(scrut, false, fv);
            fv_term(body, false, fv);
        }
        LetTensor {
            motive,
            scrut,
            body,
            ..
        }
        | LetSigma {
            motive,
            scrut,
            body,
            ..
        }
        | LetBang {
            motive,
            scrut,
            body,
            ..
        } => {
            fv_ty(motive, fv);
            fv_term(scrut, false, fv);
            fv_term(body, false, fv);
        }
        Tensor(a, b) | App(a, b) => {
            fv_term(a, false, fv);
            fv_term(b, false, fv);
        }
        Pair(a, b) => {
            // Both components draw on the same resources; count the union.
            let mut l = FreeVars::default();
            let mut r = FreeVars::default();
            fv_term(a, false, &mut l);
            fv_term(b, false, &mut r);
            merge_additive(fv, l, r);
        }
        Lam(_, ty, body) | PiLam(_, ty, body) => {
            fv_ty(ty, fv);
            fv_term(body, false, fv);
        }
        Fst(a) | Snd(a) => fv_term(a, false, fv),
        Abort(ty, a) | Inl(ty, a) | Inr(ty, a) => {
            fv_ty(ty, fv);
            fv_term(a, false, fv);
        }
        Case {
            motive,
            scrut,
            left,
            right,
            ..
        } => {
            fv_ty(motive, fv);
            fv_term(scrut, false, fv);
            let mut l = FreeVars::default();
            let mut r = FreeVars::default();
            fv_term(left, false, &mut l);
            fv_term(right, false, &mut r);
            merge_additive(fv, l, r);
        }
        Bang(a) | Refl(a) => fv_int(a, fv),
        SigmaIntro(a, b) | PiApp(b, a) => {
            fv_int(a, fv);
            fv_term(b, false, fv);
        }
        IdElim {
            motive,
            branch,
            left,
            right,
            proof,
            ..
        } => {
            fv_ty(motive, fv);
            fv_int(left, fv);
            fv_int(right, fv);
            fv_term(proof, false, fv);
            fv_term(branch, false, fv);
        }
        If {
            motive,
            scrut,
            then_branch,
            else_branch,
            ..
        } => {
            fv_ty(motive, fv);
            fv_int(scrut, fv);
            let mut l = FreeVars::default();
            let mut r = FreeVars::default();
            fv_term(then_branch, false, &mut l);
            fv_term(else_branch, false, &mut r);
            merge_additive(fv, l, r);
        }
    }
}

fn merge_additive(fv: &mut FreeVars, l: FreeVars, r: FreeVars) {
    fv.int.extend(l.int.iter().cloned());
    fv.int.extend(r.int.iter().cloned());
    let mut keys: BTreeSet<String> = l.lin.keys().cloned().collect();
    keys.extend(r.lin.keys().cloned());
    for k in keys {
        let n = l.lin_count(&k).max(r.lin_count(&k));
        *fv.lin.entry(k).or_default() += n;
    }
}

/// Number of term constructors (embedded types are not counted).
pub fn term_size(t: &Term) -> usize {
    node_count(t)
}

fn node_count(t: &Term) -> usize {
    use Term::*;
    1 + match t {
        Var(_) | Star | TopUnit | Tt | Ff => 0,
        Const(_, a) => a.iter().map(node_count).sum(),
        LetUnit { scrut, body, .. }
        | LetTensor { scrut, body, .. }
        | LetBang { scrut, body, .. }
        | LetSigma { scrut, body, .. } => node_count(scrut) + node_count(body),
        Tensor(a, b) | App(a, b) | Pair(a, b) | SigmaIntro(a, b) | PiApp(a, b) => {
            node_count(a) + node_count(b)
        }
        Lam(_, _, b) | PiLam(_, _, b) => node_count(b),
        Fst(a) | Snd(a) | Abort(_, a) | Inl(_, a) | Inr(_, a) | Bang(a) | Refl(a) => {
            node_count(a)
        }
        Case {
            scrut, left, right, ..
        } => node_count(scrut) + node_count(left) + node_count(right),
        IdElim {
            branch,
            left,
            right,
            proof,
            ..
        } => node_count(branch) + node_count(left) + node_count(right) + node_count(proof),
        If {
            scrut,
            then_branch,
            else_branch,
            ..
        } => node_count(scrut) + node_count(then_branch) + node_count(else_branch),
    }
}

/// Term depth (longest path of term constructors).
pub fn term_depth(t: &Term) -> usize {
    use Term::*;
    1 + match t {
        Var(_) | Star | TopUnit | Tt | Ff => 0,
        Const(_, a) => a.iter().map(term_depth).max().unwrap_or(0),
        LetUnit { scrut, body, .. }
        | LetTensor { scrut, body, .. }
        | LetBang { scrut, body, .. }
        | LetSigma { scrut, body, .. } => term_depth(scrut).max(term_depth(body)),
        Tensor(a, b) | App(a, b) | Pair(a, b) | SigmaIntro(a, b) | PiApp(a, b) => {
            term_depth(a).max(term_depth(b))
        }
        Lam(_, _, b) | PiLam(_, _, b) => term_depth(b),
        Fst(a) | Snd(a) | Abort(_, a) | Inl(_, a) | Inr(_, a) | Bang(a) | Refl(a) => {
            term_depth(a)
        }
        Case {
            scrut, left, right, ..
        } => term_depth(scrut).max(term_depth(left)).max(term_depth(right)),
        IdElim {
            branch,
            left,
            right,
            proof,
            ..
        } => term_depth(branch)
            .max(term_depth(left))
            .max(term_depth(right))
            .max(term_depth(proof)),
        If {
            scrut,
            then_branch,
            else_branch,
            ..
        } => term_depth(scrut)
            .max(term_depth(then_branch))
            .max(term_depth(else_branch)),
    }
}

/// Smart constructors used by the parser, the equality engine and tests.
pub mod build {
    use super::*;

    pub fn lam(x: &str, ty: Ty, body: Term) -> Term {
        Term::Lam(Hint::new(x), bx(ty), bx(body.close(x)))
    }

    pub fn pi_lam(x: &str, ty: Ty, body: Term) -> Term {
        Term::PiLam(Hint::new(x), bx(ty), bx(body.close(x)))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(bx(f), bx(a))
    }

    pub fn pi_app(f: Term, a: Term) -> Term {
        Term::PiApp(bx(f), bx(a))
    }

    pub fn tensor(a: Term, b: Term) -> Term {
        Term::Tensor(bx(a), bx(b))
    }

    pub fn pair(a: Term, b: Term) -> Term {
        Term::Pair(bx(a), bx(b))
    }

    pub fn bang(a: Term) -> Term {
        Term::Bang(bx(a))
    }

    pub fn sigma_intro(a: Term, b: Term) -> Term {
        Term::SigmaIntro(bx(a), bx(b))
    }

    pub fn let_unit(motive: Ty, scrut: Term, body: Term) -> Term {
        Term::LetUnit {
            motive: bx(motive),
            scrut: bx(scrut),
            body: bx(body),
        }
    }

    pub fn let_tensor(motive: Ty, scrut: Term, x: &str, y: &str, body: Term) -> Term {
        Term::LetTensor {
            motive: bx(motive),
            scrut: bx(scrut),
            x: Hint::new(x),
            y: Hint::new(y),
            body: bx(body.close(x).close(y)),
        }
    }

    pub fn let_sigma(motive: Ty, scrut: Term, x: &str, y: &str, body: Term) -> Term {
        Term::LetSigma {
            motive: bx(motive),
            scrut: bx(scrut),
            x: Hint::new(x),
            y: Hint::new(y),
            body: bx(body.close(x).close(y)),
        }
    }

    pub fn let_bang(motive: Ty, scrut: Term, x: &str, body: Term) -> Term {
        Term::LetBang {
            motive: bx(motive),
            scrut: bx(scrut),
            x: Hint::new(x),
            body: bx(body.close(x)),
        }
    }

    pub fn case(motive: Ty, scrut: Term, x: &str, left: Term, y: &str, right: Term) -> Term {
        Term::Case {
            motive: bx(motive),
            scrut: bx(scrut),
            x: Hint::new(x),
            left: bx(left.close(x)),
            y: Hint::new(y),
            right: bx(right.close(y)),
        }
    }

    pub fn if_(z: &str, motive: Ty, scrut: Term, t: Term, e: Term) -> Term {
        Term::If {
            motive: bx(motive.close(z)),
            z: Hint::new(z),
            scrut: bx(scrut),
            then_branch: bx(t),
            else_branch: bx(e),
        }
    }

    #[allow(clippy::too_many_arguments)]
    pub fn id_elim(
        mx: &str,
        my: &str,
        motive: Ty,
        left: Term,
        right: Term,
        proof: Term,
        z: &str,
        branch: Term,
    ) -> Term {
        Term::IdElim {
            motive: bx(motive.close(mx).close(my)),
            mx: Hint::new(mx),
            my: Hint::new(my),
            z: Hint::new(z),
            branch: bx(branch.close(z)),
            left: bx(left),
            right: bx(right),
            proof: bx(proof),
        }
    }

    pub fn sigma(x: &str, a: Ty, b: Ty) -> Ty {
        Ty::Sigma(Hint::new(x), bx(a), bx(b.close(x)))
    }

    pub fn pi(x: &str, a: Ty, b: Ty) -> Ty {
        Ty::Pi(Hint::new(x), bx(a), bx(b.close(x)))
    }

    pub fn base(name: &str) -> Ty {
        Ty::Base(name.to_string(), vec![])
    }

    pub fn lolli(a: Ty, b: Ty) -> Ty {
        Ty::Lolli(bx(a), bx(b))
    }

    pub fn tensor_ty(a: Ty, b: Ty) -> Ty {
        Ty::Tensor(bx(a), bx(b))
    }

    pub fn with(a: Ty, b: Ty) -> Ty {
        Ty::With(bx(a), bx(b))
    }

    pub fn plus(a: Ty, b: Ty) -> Ty {
        Ty::Plus(bx(a), bx(b))
    }

    pub fn bang_ty(a: Ty) -> Ty {
        Ty::Bang(bx(a))
    }

    pub fn id_ty(a: Ty, l: Term, r: Term) -> Ty {
        Ty::Id(bx(a), bx(l), bx(r))
    }
}

#[cfg(test)]
mod tests {
    use super::build::*;
    use super::*;

    fn a() -> Ty {
        base("A")
    }

    #[test]
    fn renaming_bound_variable_is_alpha_equal() {
        assert!(alpha_eq(
            &lam("x", a(), Term::free("x")),
            &lam("y", a(), Term::free("y"))
        ));
    }

    #[test]
    fn distinct_bodies_are_not_alpha_equal() {
        assert!(!alpha_eq(
            &lam("x", a(), Term::free("x")),
            &lam("x", a(), Term::TopUnit)
        ));
    }

    #[test]
    fn id_substitution_replaces_both_endpoints() {
        let t = id_ty(a(), Term::free("x"), Term::free("x"));
        let got = subst_int(&t, &Term::free("a"), "x");
        assert_eq!(got, id_ty(a(), Term::free("a"), Term::free("a")));
    }

    #[test]
    fn vacuous_substitution_is_identity() {
        let b = Ty::Base("B".into(), vec![Term::free("z")]);
        assert_eq!(subst_int(&b, &Term::free("a"), "x"), b);
    }

    #[test]
    fn substitution_commutes_with_sigma_binder() {
        let bx_ = Ty::Base("B".into(), vec![Term::free("x")]);
        let c = Ty::Base("C".into(), vec![Term::free("x"), Term::free("y")]);
        let s = sigma("y", bx_.clone(), c.clone());
        let a_ = Term::free("a");
        let got = subst_int(&s, &a_, "x");
        let want = sigma("y", subst_int(&bx_, &a_, "x"), subst_int(&c, &a_, "x"));
        assert_eq!(got, want);
    }

    #[test]
    fn substitution_does_not_capture() {
        // (\!y:A. x)[y/x] must not bind the substituted y.
        let t = pi_lam("y", a(), Term::free("x"));
        let got = t.subst("x", &Term::free("y"));
        match got {
            Term::PiLam(_, _, body) => assert_eq!(*body, Term::free("y")),
            _ => unreachable!(),
        }
    }

    #[test]
    fn linear_substitution_replaces_single_site() {
        let t = tensor(Term::free("x"), Term::free("w"));
        assert_eq!(
            subst_lin(&t, &Term::free("v"), "x"),
            tensor(Term::free("v"), Term::free("w"))
        );
    }

    #[test]
    fn free_vars_examples() {
        assert_eq!(free_vars(&lam("x", a(), Term::free("x"))), FreeVars::default());
        let xx = tensor(Term::free("x"), Term::free("x"));
        assert_eq!(free_vars(&xx).lin_count("x"), 2);
        let r = free_vars(&Term::Refl(Box::new(Term::free("a"))));
        assert!(r.lin.is_empty());
        assert!(r.int.contains("a"));
    }

    #[test]
    fn close_then_instantiate_round_trips() {
        let t = tensor(Term::free("x"), Term::free("y"));
        let closed = t.close("x");
        assert!(!closed.is_locally_closed());
        assert_eq!(closed.instantiate(&Term::free("x")), t);
    }
}
