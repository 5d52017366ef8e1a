use crate::syntax::{Term, Ty, Var};

fn bx<T>(t: T) -> Box<T> {
    Box::new(t)
}

/// Rebuild `t` with `ft` applied to every immediate subterm and `fy` to
/// every immediate type annotation. Binder bodies are passed as they are
/// (with their dangling indices).
pub fn map_parts(t: &Term, ft: &mut dyn FnMut(&Term) -> Term, fy: &mut dyn FnMut(&Ty) -> Ty) -> Term {
    use Term::*;
    match t {
        Var(_) | Star | TopUnit | Tt | Ff => t.clone(),
        Const(c, args) => Const(c.clone(), args.iter().map(&mut *ft).collect()),
        LetUnit { motive, scrut, body } => LetUnit {
            motive: bx(fy(motive)),
            scrut: bx(ft(scrut)),
            body: bx(ft(body)),
        },
        Tensor(a, b) => Tensor(bx(ft(a)), bx(ft(b))),
        LetTensor { motive, scrut, x, y, body } => LetTensor {
            motive: bx(fy(motive)),
            scrut: bx(ft(scrut)),
            x: x.clone(),
            y: y.clone(),
            body: bx(ft(body)),
        },
        Lam(h, a, b) => Lam(h.clone(), bx(fy(a)), bx(ft(b))),
        App(a, b) => App(bx(ft(a)), bx(ft(b))),
        Pair(a, b) => Pair(bx(ft(a)), bx(ft(b))),
        Fst(a) => Fst(bx(ft(a))),
        Snd(a) => Snd(bx(ft(a))),
        Abort(ty, a) => Abort(bx(fy(ty)), bx(ft(a))),
        Inl(ty, a) => Inl(bx(fy(ty)), bx(ft(a))),
        Inr(ty, a) => Inr(bx(fy(ty)), bx(ft(a))),
        Case { motive, scrut, x, left, y, right } => Case {
            motive: bx(fy(motive)),
            scrut: bx(ft(scrut)),
            x: x.clone(),
            left: bx(ft(left)),
            y: y.clone(),
            right: bx(ft(right)),
        },
        Bang(a) => Bang(bx(ft(a))),
        LetBang { motive, scrut, x, body } => LetBang {
            motive: bx(fy(motive)),
            scrut: bx(ft(scrut)),
            x: x.clone(),
            body: bx(ft(body)),
        },
        SigmaIntro(a, b) => SigmaIntro(bx(ft(a)), bx(ft(b))),
        LetSigma { motive, scrut, x, y, body } => LetSigma {
            motive: bx(fy(motive)),
            scrut: bx(ft(scrut)),
            x: x.clone(),
            y: y.clone(),
            body: bx(ft(body)),
        },
        PiLam(h, a, b) => PiLam(h.clone(), bx(fy(a)), bx(ft(b))),
        PiApp(a, b) => PiApp(bx(ft(a)), bx(ft(b))),
        Refl(a) => Refl(bx(ft(a))),
        IdElim { motive, mx, my, z, branch, left, right, proof } => IdElim {
            motive: bx(fy(motive)),
            mx: mx.clone(),
            my: my.clone(),
            z: z.clone(),
            branch: bx(ft(branch)),
            left: bx(ft(left)),
            right: bx(ft(right)),
            proof: bx(ft(proof)),
        },
        If { motive, z, scrut, then_branch, else_branch } => If {
            motive: bx(fy(motive)),
            z: z.clone(),
            scrut: bx(ft(scrut)),
            then_branch: bx(ft(then_branch)),
            else_branch: bx(ft(else_branch)),
        },
    }
}

/// Drop every annotation: comparisons happen at a known type, so the
/// annotations carry no information.
pub fn erase(t: &Term) -> Term {
    map_parts(t, &mut |s| erase(s), &mut |_| Ty::Unit)
}

pub fn erased_eq(a: &Term, b: &Term) -> bool {
    a == b || erase(a) == erase(b)
}

/// Replace every occurrence of the locally closed `target` by `with`.
pub fn replace(t: &Term, target: &Term, with: &Term) -> (Term, bool) {
    if erased_eq(t, target) {
        return (with.clone(), true);
    }
    let mut hit = false;
    let out = map_parts(
        t,
        &mut |s| {
            let (r, h) = replace(s, target, with);
            hit |= h;
            r
        },
        &mut |y| y.clone(),
    );
    (out, hit)
}

/// `replace` on every term embedded in a type.
pub fn replace_ty(ty: &Ty, target: &Term, with: &Term) -> Ty {
    use Ty::*;
    let r = |t: &Ty| Box::new(replace_ty(t, target, with));
    let rt = |t: &Term| Box::new(replace(t, target, with).0);
    match ty {
        Base(n, args) => Base(n.clone(), args.iter().map(|a| replace(a, target, with).0).collect()),
        Unit | Top | Zero | Two => ty.clone(),
        Tensor(a, b) => Tensor(r(a), r(b)),
        Lolli(a, b) => Lolli(r(a), r(b)),
        With(a, b) => With(r(a), r(b)),
        Plus(a, b) => Plus(r(a), r(b)),
        Bang(a) => Bang(r(a)),
        Sigma(h, a, b) => Sigma(h.clone(), r(a), r(b)),
        Pi(h, a, b) => Pi(h.clone(), r(a), r(b)),
        Id(a, l, m) => Id(r(a), rt(l), rt(m)),
    }
}

pub fn occurs(t: &Term, target: &Term) -> bool {
    if erased_eq(t, target) {
        return true;
    }
    let mut hit = false;
    map_parts(
        t,
        &mut |s| {
            hit = hit || occurs(s, target);
            s.clone()
        },
        &mut |y| y.clone(),
    );
    hit
}

/// Let-style eliminators and `abort`: the things commuting conversions move.
pub fn is_frame(t: &Term) -> bool {
    matches!(
        t,
        Term::LetUnit { .. }
            | Term::LetTensor { .. }
            | Term::LetSigma { .. }
            | Term::LetBang { .. }
            | Term::Case { .. }
            | Term::IdElim { .. }
            | Term::Abort(..)
    )
}

pub fn is_neutral(t: &Term) -> bool {
    matches!(
        t,
        Term::Var(_) | Term::Const(..) | Term::App(..) | Term::PiApp(..) | Term::Fst(_) | Term::Snd(_) | Term::If { .. }
    )
}

/// The expression a frame eliminates.
pub fn frame_scrut(t: &Term) -> Option<&Term> {
    match t {
        Term::LetUnit { scrut, .. }
        | Term::LetTensor { scrut, .. }
        | Term::LetSigma { scrut, .. }
        | Term::LetBang { scrut, .. }
        | Term::Case { scrut, .. }
        | Term::Abort(_, scrut) => Some(scrut),
        Term::IdElim { proof, .. } => Some(proof),
        _ => None,
    }
}

/// Does the part of the frame that stays outside its body mention a name?
pub fn header_mentions(t: &Term, names: &[String]) -> bool {
    use crate::syntax::Syntax;
    let m = |s: &Term| names.iter().any(|n| s.mentions(n));
    match t {
        Term::IdElim { left, right, proof, .. } => m(left) || m(right) || m(proof),
        _ => frame_scrut(t).is_some_and(m),
    }
}

/// The variable or constant at the head of an elimination spine.
pub fn head(t: &Term) -> Option<&Term> {
    match t {
        Term::Var(_) | Term::Const(..) => Some(t),
        Term::App(f, _) | Term::PiApp(f, _) | Term::Fst(f) | Term::Snd(f) => head(f),
        Term::If { scrut, .. } => head(scrut),
        _ => None,
    }
}

pub fn free_var(t: &Term) -> Option<&str> {
    match t {
        Term::Var(Var::Free(n)) => Some(n),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::build::*;
    use crate::syntax::Hint;

    #[test]
    fn erasure_ignores_annotations() {
        let a = lam("x", base("A"), Term::free("x"));
        let b = lam("y", base("B"), Term::free("y"));
        assert!(erased_eq(&a, &b));
        assert!(!erased_eq(&a, &Term::Lam(Hint::new("x"), Box::new(base("A")), Box::new(Term::Star))));
    }

    #[test]
    fn replace_finds_nested_occurrences() {
        let t = app(Term::free("f"), tensor(Term::free("u"), Term::free("v")));
        let (r, hit) = replace(&t, &Term::free("u"), &Term::Star);
        assert!(hit);
        assert_eq!(r, app(Term::free("f"), tensor(Term::Star, Term::free("v"))));
        assert!(occurs(&t, &Term::free("v")));
        assert!(!occurs(&t, &Term::free("w")));
    }
}
