//! Normalisation: C-rules as reductions, commuting conversions as hoisting of
//! let-frames out of linear positions, and a canonical order for adjacent
//! independent frames.

use super::util::{erase, frame_scrut, head, header_mentions, is_frame, map_parts};
use crate::checker::{display_name, open2};
use crate::surface::print_term;
use crate::syntax::{Hint, Syntax, Term, Ty, Var};

pub const DEFAULT_CEILING: usize = 100_000;

/// Placeholder motive for an `idelim` that has been moved: its type is
/// whatever the surrounding position requires.
pub fn stale_motive() -> Ty {
    Ty::Base("?".into(), vec![])
}

pub fn is_stale(t: &Ty) -> bool {
    matches!(t, Ty::Base(n, a) if n == "?" && a.is_empty())
}

fn bx<T>(t: T) -> Box<T> {
    Box::new(t)
}

#[derive(Debug)]
pub struct Normalizer {
    pub steps: usize,
    pub ceiling: usize,
    pub hit: bool,
    /// Rules used, in order of first use.
    pub trace: Vec<&'static str>,
    fresh: usize,
}

impl Default for Normalizer {
    fn default() -> Self {
        Normalizer {
            steps: 0,
            ceiling: DEFAULT_CEILING,
            hit: false,
            trace: Vec::new(),
            fresh: 0,
        }
    }
}

impl Normalizer {
    pub fn fresh(&mut self, h: &Hint) -> String {
        self.fresh += 1;
        let base = match display_name(&h.0) {
            "" => "v",
            b => b.split('%').next().unwrap_or("v"),
        };
        format!("{}%{}", base, self.fresh)
    }

    pub fn note(&mut self, rule: &'static str) {
        if !self.trace.contains(&rule) {
            self.trace.push(rule);
        }
    }

    fn tick(&mut self, rule: &'static str) -> bool {
        self.steps += 1;
        if self.steps > self.ceiling {
            self.hit = true;
            return false;
        }
        self.note(rule);
        true
    }

    pub fn norm(&mut self, t: &Term) -> Term {
        if self.hit {
            return t.clone();
        }
        let t = self.children(t);
        self.root(t)
    }

    fn under1(&mut self, h: &Hint, body: &Term) -> Term {
        let x = self.fresh(h);
        self.norm(&body.instantiate(&Term::free(x.as_str()))).close(&x)
    }

    fn under2(&mut self, hx: &Hint, hy: &Hint, body: &Term) -> Term {
        let x = self.fresh(hx);
        let y = self.fresh(hy);
        self.norm(&open2(body, &x, &y)).close(&x).close(&y)
    }

    fn children(&mut self, t: &Term) -> Term {
        use Term::*;
        match t {
            LetTensor { motive, scrut, x, y, body } => LetTensor {
                motive: motive.clone(),
                scrut: bx(self.norm(scrut)),
                x: x.clone(),
                y: y.clone(),
                body: bx(self.under2(x, y, body)),
            },
            LetSigma { motive, scrut, x, y, body } => LetSigma {
                motive: motive.clone(),
                scrut: bx(self.norm(scrut)),
                x: x.clone(),
                y: y.clone(),
                body: bx(self.under2(x, y, body)),
            },
            LetBang { motive, scrut, x, body } => LetBang {
                motive: motive.clone(),
                scrut: bx(self.norm(scrut)),
                x: x.clone(),
                body: bx(self.under1(x, body)),
            },
            Lam(h, a, b) => Lam(h.clone(), a.clone(), bx(self.under1(h, b))),
            PiLam(h, a, b) => PiLam(h.clone(), a.clone(), bx(self.under1(h, b))),
            Case { motive, scrut, x, left, y, right } => Case {
                motive: motive.clone(),
                scrut: bx(self.norm(scrut)),
                x: x.clone(),
                left: bx(self.under1(x, left)),
                y: y.clone(),
                right: bx(self.under1(y, right)),
            },
            IdElim { motive, mx, my, z, branch, left, right, proof } => IdElim {
                motive: motive.clone(),
                mx: mx.clone(),
                my: my.clone(),
                z: z.clone(),
                branch: bx(self.under1(z, branch)),
                left: bx(self.norm(left)),
                right: bx(self.norm(right)),
                proof: bx(self.norm(proof)),
            },
            _ => super::util::map_parts(t, &mut |s| self.norm(s), &mut |y| y.clone()),
        }
    }

    /// Reduce at the root of a term whose children are already normal.
    pub fn root(&mut self, t: Term) -> Term {
        if self.hit {
            return t;
        }
        if let Some(r) = self.contract(&t) {
            return r;
        }
        if let Some(r) = self.try_hoist(&t) {
            return r;
        }
        if is_frame(&t) {
            return self.settle(t);
        }
        t
    }

    fn contract(&mut self, t: &Term) -> Option<Term> {
        use Term::*;
        let r = match t {
            App(f, a) => match &**f {
                Lam(_, _, b) if self.tick("⊸-C") => self.norm(&b.instantiate(a)),
                _ => return None,
            },
            PiApp(f, a) => match &**f {
                PiLam(_, _, b) if self.tick("Π-C") => self.norm(&b.instantiate(a)),
                _ => return None,
            },
            Fst(p) => match &**p {
                Pair(a, _) if self.tick("&-C1") => (**a).clone(),
                _ => return None,
            },
            Snd(p) => match &**p {
                Pair(_, b) if self.tick("&-C2") => (**b).clone(),
                _ => return None,
            },
            LetUnit { scrut, body, .. } => match &**scrut {
                Star if self.tick("I-C") => (**body).clone(),
                _ => return None,
            },
            LetTensor { scrut, body, .. } => match &**scrut {
                Tensor(a, b) if self.tick("⊗-C") => self.norm(&body.instantiate(b).instantiate(a)),
                _ => return None,
            },
            LetSigma { scrut, body, .. } => match &**scrut {
                SigmaIntro(a, b) if self.tick("Σ-C") => self.norm(&body.instantiate(b).instantiate(a)),
                _ => return None,
            },
            LetBang { scrut, body, .. } => match &**scrut {
                Bang(a) if self.tick("!-C") => self.norm(&body.instantiate(a)),
                _ => return None,
            },
            Case { scrut, left, right, .. } => match &**scrut {
                Inl(_, a) if self.tick("⊕-C1") => self.norm(&left.instantiate(a)),
                Inr(_, b) if self.tick("⊕-C2") => self.norm(&right.instantiate(b)),
                _ => return None,
            },
            IdElim { proof, branch, .. } => match &**proof {
                Refl(a) if self.tick("Id-C") => self.norm(&branch.instantiate(a)),
                _ => return None,
            },
            If { scrut, then_branch, else_branch, .. } => match &**scrut {
                Tt if self.tick("2-C1") => (**then_branch).clone(),
                Ff if self.tick("2-C2") => (**else_branch).clone(),
                _ => return None,
            },
            _ => return None,
        };
        Some(r)
    }

    /// Commuting conversion: a frame in a linear position of `t` moves
    /// above `t`.
    fn try_hoist(&mut self, t: &Term) -> Option<Term> {
        use Term::*;
        macro_rules! slot {
            ($child:expr, $plug:expr) => {
                if is_frame($child) {
                    let frame = (*$child).clone();
                    return Some(self.hoist(&frame, &$plug));
                }
            };
        }
        match t {
            App(f, a) => {
                slot!(&**f, |c: Term| App(bx(c), a.clone()));
                slot!(&**a, |c: Term| App(f.clone(), bx(c)));
            }
            PiApp(f, a) => slot!(&**f, |c: Term| PiApp(bx(c), a.clone())),
            Tensor(a, b) => {
                slot!(&**a, |c: Term| Tensor(bx(c), b.clone()));
                slot!(&**b, |c: Term| Tensor(a.clone(), bx(c)));
            }
            SigmaIntro(a, b) => slot!(&**b, |c: Term| SigmaIntro(a.clone(), bx(c))),
            Inl(ty, a) => slot!(&**a, |c: Term| Inl(ty.clone(), bx(c))),
            Inr(ty, a) => slot!(&**a, |c: Term| Inr(ty.clone(), bx(c))),
            Fst(p) => slot!(&**p, |c: Term| Fst(bx(c))),
            Snd(p) => slot!(&**p, |c: Term| Snd(bx(c))),
            Abort(ty, s) => slot!(&**s, |c: Term| Abort(ty.clone(), bx(c))),
            LetUnit { motive, scrut, body } => slot!(&**scrut, |c: Term| LetUnit {
                motive: motive.clone(),
                scrut: bx(c),
                body: body.clone(),
            }),
            LetTensor { motive, scrut, x, y, body } => slot!(&**scrut, |c: Term| LetTensor {
                motive: motive.clone(),
                scrut: bx(c),
                x: x.clone(),
                y: y.clone(),
                body: body.clone(),
            }),
            LetSigma { motive, scrut, x, y, body } => slot!(&**scrut, |c: Term| LetSigma {
                motive: motive.clone(),
                scrut: bx(c),
                x: x.clone(),
                y: y.clone(),
                body: body.clone(),
            }),
            LetBang { motive, scrut, x, body } => slot!(&**scrut, |c: Term| LetBang {
                motive: motive.clone(),
                scrut: bx(c),
                x: x.clone(),
                body: body.clone(),
            }),
            Case { motive, scrut, x, left, y, right } => slot!(&**scrut, |c: Term| Case {
                motive: motive.clone(),
                scrut: bx(c),
                x: x.clone(),
                left: left.clone(),
                y: y.clone(),
                right: right.clone(),
            }),
            IdElim { mx, my, z, branch, left, right, proof, .. } => slot!(&**proof, |c: Term| IdElim {
                motive: bx(stale_motive()),
                mx: mx.clone(),
                my: my.clone(),
                z: z.clone(),
                branch: branch.clone(),
                left: left.clone(),
                right: right.clone(),
                proof: bx(c),
            }),
            Lam(h, ann, body) | PiLam(h, ann, body) => {
                let x = self.fresh(h);
                let open = body.instantiate(&Term::free(x.as_str()));
                if is_frame(&open) && !header_mentions(&open, std::slice::from_ref(&x)) {
                    let pi = matches!(t, PiLam(..));
                    let plug = |c: Term| {
                        let b = bx(c.close(&x));
                        if pi {
                            PiLam(h.clone(), ann.clone(), b)
                        } else {
                            Lam(h.clone(), ann.clone(), b)
                        }
                    };
                    return Some(self.hoist(&open, &plug));
                }
            }
            _ => {}
        }
        None
    }

    fn cc_rule(frame: &Term) -> &'static str {
        match frame {
            Term::LetUnit { .. } => "CC-I",
            Term::LetTensor { .. } => "CC-⊗",
            Term::LetSigma { .. } => "CC-Σ",
            Term::LetBang { .. } => "CC-!",
            Term::Case { .. } => "CC-⊕",
            Term::IdElim { .. } => "CC-Id",
            _ => "CC-0",
        }
    }

    /// `N[F[c]]` ↦ `F[N[c]]`, where `plug` builds `N[-]`.
    fn hoist(&mut self, frame: &Term, plug: &dyn Fn(Term) -> Term) -> Term {
        if !self.tick(Self::cc_rule(frame)) {
            return plug(frame.clone());
        }
        if let Term::Abort(ty, s) = frame {
            return Term::Abort(ty.clone(), s.clone());
        }
        if let Term::Case { motive, scrut, x, left, y, right } = frame {
            let xn = self.fresh(x);
            let yn = self.fresh(y);
            let l = self.root(plug(left.instantiate(&Term::free(xn.as_str()))));
            let r = self.root(plug(right.instantiate(&Term::free(yn.as_str()))));
            return Term::Case {
                motive: motive.clone(),
                scrut: scrut.clone(),
                x: x.clone(),
                left: bx(l.close(&xn)),
                y: y.clone(),
                right: bx(r.close(&yn)),
            };
        }
        let (names, body) = self.open_single(frame).expect("single-body frame");
        let nb = self.root(plug(body));
        let mut out = close_single(frame, &names, nb);
        if let Term::IdElim { motive, .. } = &mut out {
            *motive = bx(stale_motive());
        }
        self.settle(out)
    }

    /// Open a frame with a single body.
    pub fn open_single(&mut self, t: &Term) -> Option<(Vec<String>, Term)> {
        use Term::*;
        Some(match t {
            LetUnit { body, .. } => (vec![], (**body).clone()),
            LetTensor { x, y, body, .. } | LetSigma { x, y, body, .. } => {
                let (xn, yn) = (self.fresh(x), self.fresh(y));
                let b = open2(body, &xn, &yn);
                (vec![xn, yn], b)
            }
            LetBang { x, body, .. } => {
                let xn = self.fresh(x);
                let b = body.instantiate(&Term::free(xn.as_str()));
                (vec![xn], b)
            }
            IdElim { z, branch, .. } => {
                let zn = self.fresh(z);
                let b = branch.instantiate(&Term::free(zn.as_str()));
                (vec![zn], b)
            }
            _ => return None,
        })
    }

    /// Sink a frame below independent frames that sort before it, push it
    /// into the branches of a `case`, or let an `abort` swallow it.
    fn settle(&mut self, t: Term) -> Term {
        if self.hit {
            return t;
        }
        let Some((names, body)) = self.open_single(&t) else {
            return t;
        };
        let indep = |s: &Term| !names.iter().any(|n| s.mentions(n));
        match &body {
            Term::Abort(ty, s) if indep(s) => {
                if !self.tick("CC-0") {
                    return t;
                }
                return Term::Abort(ty.clone(), s.clone());
            }
            Term::Case { motive, scrut, x, left, y, right } if indep(scrut) => {
                if !self.tick(Self::cc_rule(&t)) {
                    return t;
                }
                let xn = self.fresh(x);
                let yn = self.fresh(y);
                let l = close_single(&t, &names, left.instantiate(&Term::free(xn.as_str())));
                let r = close_single(&t, &names, right.instantiate(&Term::free(yn.as_str())));
                let l = self.settle(l);
                let r = self.settle(r);
                return Term::Case {
                    motive: motive.clone(),
                    scrut: scrut.clone(),
                    x: x.clone(),
                    left: bx(l.close(&xn)),
                    y: y.clone(),
                    right: bx(r.close(&yn)),
                };
            }
            g if is_frame(g) && !matches!(g, Term::Abort(..)) && !header_mentions(g, &names) && sort_key(g) < sort_key(&t) => {
                if !self.tick(Self::cc_rule(g)) {
                    return t;
                }
                let (gnames, gbody) = self.open_single(g).expect("single-body frame");
                let inner = self.settle(close_single(&t, &names, gbody));
                let mut out = close_single(g, &gnames, inner);
                if let Term::IdElim { motive, .. } = &mut out {
                    *motive = bx(stale_motive());
                }
                return out;
            }
            _ => {}
        }
        t
    }
}

/// Contract η-redexes of the negative types, bottom up: `\x. f x` to `f`,
/// `\!x. f !x` to `f`, `<fst p, snd p>` to `p`. Normal forms are compared
/// η-long anyway; this only picks the short representative.
pub fn eta_contract(t: &Term, trace: &mut Vec<&'static str>) -> Term {
    use Term::*;
    let t = map_parts(t, &mut |u| eta_contract(u, trace), &mut |a| a.clone());
    // a body `f x` whose `f` does not mention the bound variable
    let unbind = |f: &Term| {
        let g = f.instantiate(&Term::free("#eta"));
        (!g.mentions("#eta")).then_some(g)
    };
    let out = match &t {
        Lam(_, _, b) => match &**b {
            App(f, x) if **x == Term::bound(0) => unbind(f).map(|g| (g, "⊸-U")),
            _ => None,
        },
        PiLam(_, _, b) => match &**b {
            PiApp(f, x) if **x == Term::bound(0) => unbind(f).map(|g| (g, "Π-U")),
            _ => None,
        },
        Pair(l, r) => match (&**l, &**r) {
            (Fst(p), Snd(q)) if p == q => Some(((**p).clone(), "&-U")),
            _ => None,
        },
        _ => None,
    };
    match out {
        Some((g, rule)) => {
            if !trace.contains(&rule) {
                trace.push(rule);
            }
            g
        }
        None => t,
    }
}

/// Put a new body into a single-body frame, closing the given names.
pub fn close_single(t: &Term, names: &[String], body: Term) -> Term {
    use Term::*;
    match t {
        LetUnit { motive, scrut, .. } => LetUnit {
            motive: motive.clone(),
            scrut: scrut.clone(),
            body: bx(body),
        },
        LetTensor { motive, scrut, x, y, .. } => LetTensor {
            motive: motive.clone(),
            scrut: scrut.clone(),
            x: x.clone(),
            y: y.clone(),
            body: bx(body.close(&names[0]).close(&names[1])),
        },
        LetSigma { motive, scrut, x, y, .. } => LetSigma {
            motive: motive.clone(),
            scrut: scrut.clone(),
            x: x.clone(),
            y: y.clone(),
            body: bx(body.close(&names[0]).close(&names[1])),
        },
        LetBang { motive, scrut, x, .. } => LetBang {
            motive: motive.clone(),
            scrut: scrut.clone(),
            x: x.clone(),
            body: bx(body.close(&names[0])),
        },
        IdElim { motive, mx, my, z, left, right, proof, .. } => IdElim {
            motive: motive.clone(),
            mx: mx.clone(),
            my: my.clone(),
            z: z.clone(),
            branch: bx(body.close(&names[0])),
            left: left.clone(),
            right: right.clone(),
            proof: proof.clone(),
        },
        _ => unreachable!("not a single-body frame"),
    }
}

/// Order of adjacent independent frames: scrutinees headed by locally bound
/// variables first, then context variables, then constants; ties broken by
/// the printed scrutinee with local names erased.
pub fn sort_key(frame: &Term) -> (u8, String) {
    let Some(s) = frame_scrut(frame) else {
        return (3, String::new());
    };
    let rank = match head(s) {
        Some(Term::Var(Var::Free(n))) if n.contains('%') => 0,
        Some(Term::Var(_)) => 1,
        Some(Term::Const(..)) => 2,
        _ => 3,
    };
    let anon = s.map_vars(&mut |v, _| match v {
        Var::Free(n) if n.contains('%') => Term::free("_"),
        other => Term::Var(other.clone()),
    });
    (rank, print_term(&erase(&anon)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::build::*;

    fn v(n: &str) -> Term {
        Term::free(n)
    }

    #[test]
    fn beta_for_linear_functions() {
        let t = app(lam("x", base("A"), v("x")), v("a"));
        let mut n = Normalizer::default();
        assert_eq!(n.norm(&t), v("a"));
        assert_eq!(n.trace, vec!["⊸-C"]);
    }

    #[test]
    fn bang_let_round_trip_reduces() {
        // let !a (x) * be !x (x) y in let y be * in c  ~>  c[a/x]
        let c = tensor(bang(v("x")), v("u"));
        let t = let_sigma(
            base("C"),
            sigma_intro(v("a"), Term::Star),
            "x",
            "y",
            let_unit(base("C"), v("y"), c),
        );
        let mut n = Normalizer::default();
        assert_eq!(n.norm(&t), tensor(bang(v("a")), v("u")));
    }

    #[test]
    fn lets_hoist_out_of_application_arguments() {
        let inner = let_bang(base("B"), v("p"), "x", bang(v("x")));
        let t = app(v("f"), inner);
        let mut n = Normalizer::default();
        let r = n.norm(&t);
        assert_eq!(r, let_bang(base("B"), v("p"), "x", app(v("f"), bang(v("x")))));
        assert!(n.trace.contains(&"CC-!"));
    }

    #[test]
    fn lets_do_not_leave_pairs() {
        let inner = let_unit(base("B"), v("u"), v("b"));
        let t = pair(inner.clone(), v("c"));
        let mut n = Normalizer::default();
        assert_eq!(n.norm(&t), t);
    }

    #[test]
    fn independent_lets_are_ordered() {
        let a = let_unit(base("B"), v("u"), let_unit(base("B"), v("w"), v("b")));
        let b = let_unit(base("B"), v("w"), let_unit(base("B"), v("u"), v("b")));
        let mut n = Normalizer::default();
        let (na, nb) = (n.norm(&a), n.norm(&b));
        assert_eq!(na, nb);
    }

    #[test]
    fn abort_swallows_linear_context() {
        let t = tensor(v("a"), Term::Abort(Box::new(base("B")), Box::new(v("z"))));
        let mut n = Normalizer::default();
        assert!(matches!(n.norm(&t), Term::Abort(_, s) if *s == v("z")));
    }

    #[test]
    fn ceiling_stops_runaway_reduction() {
        let t = app(lam("x", base("A"), v("x")), v("a"));
        let mut n = Normalizer {
            ceiling: 0,
            ..Normalizer::default()
        };
        n.norm(&t);
        assert!(n.hit);
    }

    #[test]
    fn eta_redexes_contract() {
        let mut tr = Vec::new();
        let f = v("f");
        let t = pi_lam("x", base("A"), pi_app(f.clone(), v("x")));
        assert_eq!(eta_contract(&t, &mut tr), f);
        let t = lam("x", base("A"), app(f.clone(), v("x")));
        assert_eq!(eta_contract(&t, &mut tr), f);
        let t = pair(Term::Fst(bx(f.clone())), Term::Snd(bx(f.clone())));
        assert_eq!(eta_contract(&t, &mut tr), f);
        assert_eq!(tr, vec!["Π-U", "⊸-U", "&-U"]);
        // the bound variable still occurs in the function
        let t = pi_lam("x", base("A"), pi_app(pi_app(v("g"), v("x")), v("x")));
        assert_eq!(eta_contract(&t, &mut tr), t);
    }
}
