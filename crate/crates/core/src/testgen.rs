//! Random well-typed terms for property tests and benchmarks.
//!
//! Generation is type directed: the generator is given a goal type and the
//! linear variables that must be used exactly once, and picks among the
//! introduction form of the goal, an eliminator for one of the linear
//! variables, or a detour (a function applied to an argument, an `if`, an
//! `idelim` on a reflexivity proof). Dead ends return `None` and the caller
//! retries; every sample is confirmed by the checker before it is returned.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use crate::checker::{self, DualContext, Signature};
use crate::surface::parse_module;
use crate::syntax::build::*;
use crate::syntax::{alpha_eq_ty, term_depth, Syntax, Term, Ty};

/// The signature every generated term lives over.
pub const SIGNATURE: &str = "\
type A
type B
type F (x : 2)
const a0 : A
const b0 : B
const f : A -o B
const g : B -o A
const m : A -o B -o A
const fam (x : 2) : F(x)
const u (x : 2) : F(x) -o A
";

#[derive(Clone, Debug)]
pub struct Sample {
    pub ctx: DualContext,
    pub term: Term,
    pub ty: Ty,
}

pub struct TermGen {
    rng: StdRng,
    sig: Signature,
    fresh: usize,
}

type Vars = Vec<(String, Ty)>;

fn a() -> Ty {
    base("A")
}

fn b() -> Ty {
    base("B")
}

fn fam_ty(t: Term) -> Ty {
    Ty::Base("F".into(), vec![t])
}

fn c(name: &str) -> Term {
    Term::Const(name.into(), vec![])
}

impl TermGen {
    pub fn new(seed: u64) -> Self {
        let m = parse_module(SIGNATURE).expect("generator signature parses");
        let sig = checker::check_module(&m, Default::default()).signature;
        TermGen {
            rng: StdRng::seed_from_u64(seed),
            sig,
            fresh: 0,
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    /// The intuitionistic context samples are drawn in.
    pub fn base_context() -> Vars {
        vec![("p".into(), Ty::Two), ("q".into(), a())]
    }

    fn name(&mut self, hint: &str) -> String {
        self.fresh += 1;
        format!("{}{}", hint, self.fresh)
    }

    /// A type that a linear variable can sensibly have.
    pub fn lin_ty(&mut self, size: usize, int: &Vars) -> Ty {
        let twos: Vec<&String> = int.iter().filter(|(_, t)| *t == Ty::Two).map(|(n, _)| n).collect();
        if size == 0 {
            return match self.rng.gen_range(0..5) {
                0 | 1 => a(),
                2 => b(),
                3 => Ty::Unit,
                _ => match twos.choose(&mut self.rng) {
                    Some(p) => fam_ty(Term::free(p.as_str())),
                    None => fam_ty(Term::Tt),
                },
            };
        }
        let s = size - 1;
        match self.rng.gen_range(0..10) {
            0 => Ty::Tensor(Box::new(self.lin_ty(s, int)), Box::new(self.lin_ty(s, int))),
            1 => Ty::Lolli(Box::new(self.lin_ty(s, int)), Box::new(self.lin_ty(s, int))),
            2 => Ty::With(Box::new(self.lin_ty(s, int)), Box::new(self.lin_ty(s, int))),
            3 => Ty::Plus(Box::new(self.lin_ty(s, int)), Box::new(self.lin_ty(s, int))),
            4 => Ty::Bang(Box::new(self.int_ty(s))),
            5 => sigma("x", Ty::Two, fam_ty(Term::free("x"))),
            6 => pi("x", Ty::Two, fam_ty(Term::free("x"))),
            7 => sigma("x", a(), self.lin_ty(s, int)),
            _ => self.lin_ty(0, int),
        }
    }

    /// A type for an intuitionistic variable.
    pub fn int_ty(&mut self, size: usize) -> Ty {
        match self.rng.gen_range(0..6) {
            0 | 1 => Ty::Two,
            2 => a(),
            3 => id_ty(Ty::Two, Term::Tt, Term::Tt),
            4 if size > 0 => Ty::Bang(Box::new(self.int_ty(size - 1))),
            _ => b(),
        }
    }

    /// A well-typed term of depth at most `depth` in a random context.
    pub fn sample(&mut self, depth: usize) -> Sample {
        loop {
            let int = Self::base_context();
            let nlin = self.rng.gen_range(0..3);
            let lin: Vars = (0..nlin)
                .map(|_| {
                    let n = self.name("l");
                    let size = self.rng.gen_range(0..3);
                    (n, self.lin_ty(size, &int))
                })
                .collect();
            let size = self.rng.gen_range(0..4);
            let ty = self.lin_ty(size, &int);
            let budget = self.rng.gen_range(2..=depth.max(2));
            let Some(term) = self.term(&int, &lin, &ty, budget) else { continue };
            if term_depth(&term) > depth {
                continue;
            }
            let mut ctx = DualContext::new();
            for (n, t) in &int {
                ctx = ctx.with_int(n, t.clone());
            }
            for (n, t) in &lin {
                ctx = ctx.with_lin(n, t.clone());
            }
            if checker::check(&self.sig, &ctx, &term, &ty).is_ok() {
                return Sample { ctx, term, ty };
            }
        }
    }

    /// A closed intuitionistic term of type `ty` over `int`.
    pub fn int_term(&mut self, int: &Vars, ty: &Ty, depth: usize) -> Option<Term> {
        self.term(int, &[], ty, depth)
    }

    fn split(&mut self, lin: &[(String, Ty)]) -> (Vars, Vars) {
        let mut l = Vec::new();
        let mut r = Vec::new();
        for v in lin {
            if self.rng.gen_bool(0.5) {
                l.push(v.clone());
            } else {
                r.push(v.clone());
            }
        }
        (l, r)
    }

    /// A term of type `ty` using each of `lin` exactly once.
    pub fn term(&mut self, int: &Vars, lin: &[(String, Ty)], ty: &Ty, depth: usize) -> Option<Term> {
        for _ in 0..4 {
            let choice = if depth == 0 { 0 } else { self.rng.gen_range(0..10) };
            let t = match choice {
                0 | 1 => self.atom(int, lin, ty),
                2..=4 => self.intro(int, lin, ty, depth - 1),
                5 | 6 if !lin.is_empty() => self.consume(int, lin, ty, depth - 1),
                7 => self.detour(int, lin, ty, depth - 1),
                8 => self.branch(int, lin, ty, depth - 1),
                _ => self.intro(int, lin, ty, depth - 1),
            };
            if t.is_some() {
                return t;
            }
        }
        if depth > 0 && !lin.is_empty() {
            return self.consume(int, lin, ty, depth - 1);
        }
        None
    }

    /// Variables, constants and nullary introductions.
    fn atom(&mut self, int: &Vars, lin: &[(String, Ty)], ty: &Ty) -> Option<Term> {
        if *ty == Ty::Top {
            return Some(Term::TopUnit);
        }
        match lin {
            [(x, t)] if alpha_eq_ty(t, ty) => return Some(Term::free(x.as_str())),
            [] => {}
            _ => return None,
        }
        let mut opts: Vec<Term> = int
            .iter()
            .filter(|(_, t)| alpha_eq_ty(t, ty))
            .map(|(n, _)| Term::free(n.as_str()))
            .collect();
        match ty {
            Ty::Two => opts.extend([Term::Tt, Term::Ff]),
            Ty::Unit => opts.push(Term::Star),
            Ty::Base(n, args) if n == "A" && args.is_empty() => opts.push(c("a0")),
            Ty::Base(n, args) if n == "B" && args.is_empty() => opts.push(c("b0")),
            Ty::Base(n, args) if n == "F" => opts.push(Term::Const("fam".into(), args.clone())),
            Ty::Id(_, l, r) if l == r => opts.push(Term::Refl(l.clone())),
            Ty::Lolli(d, r) if **d == a() && **r == b() => opts.push(c("f")),
            Ty::Lolli(d, r) if **d == b() && **r == a() => opts.push(c("g")),
            _ => {}
        }
        opts.choose(&mut self.rng).cloned()
    }

    fn intro(&mut self, int: &Vars, lin: &[(String, Ty)], ty: &Ty, d: usize) -> Option<Term> {
        Some(match ty {
            Ty::Unit if lin.is_empty() => Term::Star,
            Ty::Two if lin.is_empty() => {
                if self.rng.gen_bool(0.5) {
                    Term::Tt
                } else {
                    Term::Ff
                }
            }
            Ty::Top => Term::TopUnit,
            Ty::Tensor(l, r) => {
                let (a, b) = self.split(lin);
                tensor(self.term(int, &a, l, d)?, self.term(int, &b, r, d)?)
            }
            Ty::Lolli(dom, cod) => {
                let z = self.name("z");
                let mut lin2 = lin.to_vec();
                lin2.push((z.clone(), (**dom).clone()));
                lam(&z, (**dom).clone(), self.term(int, &lin2, cod, d)?)
            }
            Ty::With(l, r) => pair(self.term(int, lin, l, d)?, self.term(int, lin, r, d)?),
            Ty::Plus(l, r) => {
                if self.rng.gen_bool(0.5) {
                    Term::Inl(r.clone(), Box::new(self.term(int, lin, l, d)?))
                } else {
                    Term::Inr(l.clone(), Box::new(self.term(int, lin, r, d)?))
                }
            }
            Ty::Bang(inner) if lin.is_empty() => bang(self.term(int, &[], inner, d)?),
            Ty::Pi(_, dom, cod) => {
                let z = self.name("w");
                let mut int2 = int.clone();
                int2.push((z.clone(), (**dom).clone()));
                pi_lam(&z, (**dom).clone(), self.term(&int2, lin, &cod.instantiate(&Term::free(z.as_str())), d)?)
            }
            Ty::Sigma(_, dom, cod) => {
                let a = self.term(int, &[], dom, d)?;
                let body = self.term(int, lin, &cod.instantiate(&a), d)?;
                sigma_intro(a, body)
            }
            Ty::Id(_, l, r) if l == r && lin.is_empty() => Term::Refl(l.clone()),
            _ => return self.atom(int, lin, ty),
        })
    }

    /// Eliminate one linear variable and continue towards `ty`.
    fn consume(&mut self, int: &Vars, lin: &[(String, Ty)], ty: &Ty, d: usize) -> Option<Term> {
        let k = self.rng.gen_range(0..lin.len());
        let (x, xt) = lin[k].clone();
        let mut rest: Vars = lin.to_vec();
        rest.remove(k);
        let xv = Term::free(x.as_str());
        let mot = ty.clone();
        // continue with `y : yt` in place of x
        let then = |g: &mut Self, y: &str, yt: Ty, rest: &Vars| -> Option<Term> {
            let mut r = rest.clone();
            r.push((y.to_string(), yt));
            g.term(int, &r, ty, d)
        };
        Some(match &xt {
            Ty::Unit => let_unit(mot, xv, self.term(int, &rest, ty, d)?),
            Ty::Tensor(l, r) => {
                let (p, q) = (self.name("p"), self.name("q"));
                let mut r2 = rest.clone();
                r2.push((p.clone(), (**l).clone()));
                r2.push((q.clone(), (**r).clone()));
                let body = self.term(int, &r2, ty, d)?;
                let_tensor(mot, xv, &p, &q, body)
            }
            Ty::With(l, r) => {
                let y = self.name("y");
                let (proj, yt) = if self.rng.gen_bool(0.5) {
                    (Term::Fst(Box::new(xv)), (**l).clone())
                } else {
                    (Term::Snd(Box::new(xv)), (**r).clone())
                };
                app(lam(&y, yt.clone(), then(self, &y, yt, &rest)?), proj)
            }
            Ty::Plus(l, r) => {
                let (p, q) = (self.name("p"), self.name("q"));
                let left = then(self, &p, (**l).clone(), &rest)?;
                let right = then(self, &q, (**r).clone(), &rest)?;
                case(mot, xv, &p, left, &q, right)
            }
            Ty::Bang(inner) => {
                let v = self.name("v");
                let mut int2 = int.clone();
                int2.push((v.clone(), (**inner).clone()));
                let_bang(mot, xv, &v, self.term(&int2, &rest, ty, d)?)
            }
            Ty::Sigma(_, dom, cod) => {
                let (v, y) = (self.name("v"), self.name("y"));
                let mut int2 = int.clone();
                int2.push((v.clone(), (**dom).clone()));
                let mut r2 = rest.clone();
                r2.push((y.clone(), cod.instantiate(&Term::free(v.as_str()))));
                let_sigma(mot, xv, &v, &y, self.term(&int2, &r2, ty, d)?)
            }
            Ty::Lolli(dom, cod) => {
                let (l1, l2) = self.split(&rest);
                let arg = self.term(int, &l1, dom, d)?;
                let y = self.name("y");
                app(lam(&y, (**cod).clone(), then(self, &y, (**cod).clone(), &l2)?), app(xv, arg))
            }
            Ty::Pi(_, dom, cod) => {
                let a = self.term(int, &[], dom, d)?;
                let yt = cod.instantiate(&a);
                let y = self.name("y");
                app(lam(&y, yt.clone(), then(self, &y, yt, &rest)?), pi_app(xv, a))
            }
            Ty::Zero => Term::Abort(Box::new(mot), Box::new(xv)),
            Ty::Base(n, args) => {
                let y = self.name("y");
                // A and B are converted into each other; F(t) into A
                let (conv, yt) = match (n.as_str(), rest.iter().position(|(_, t)| *t == b())) {
                    ("A", Some(j)) if self.rng.gen_bool(0.6) => {
                        let w = rest.remove(j).0;
                        (app(app(c("m"), xv), Term::free(w.as_str())), a())
                    }
                    ("A", _) => (app(c("f"), xv), b()),
                    ("B", _) => (app(c("g"), xv), a()),
                    ("F", _) => (app(Term::Const("u".into(), args.clone()), xv), a()),
                    _ => return None,
                };
                if rest.is_empty() && alpha_eq_ty(&yt, ty) {
                    conv
                } else {
                    app(lam(&y, yt.clone(), then(self, &y, yt, &rest)?), conv)
                }
            }
            _ => return None,
        })
    }

    /// A function applied to an argument: `(λz. t) a` or `f a` with a linear
    /// variable's type as the cut.
    fn detour(&mut self, int: &Vars, lin: &[(String, Ty)], ty: &Ty, d: usize) -> Option<Term> {
        let (l1, l2) = self.split(lin);
        let cut = match l2.first() {
            Some((_, t)) if self.rng.gen_bool(0.5) => t.clone(),
            _ => {
                let size = self.rng.gen_range(0..2);
                self.lin_ty(size, int)
            }
        };
        if self.rng.gen_bool(0.3) {
            // through Π: (λ!w. t)(!a)
            let w = self.name("w");
            let dom = self.int_ty(0);
            let a = self.term(int, &[], &dom, d)?;
            let mut int2 = int.clone();
            int2.push((w.clone(), dom.clone()));
            let body = self.term(&int2, lin, ty, d)?;
            return Some(pi_app(pi_lam(&w, dom, body), a));
        }
        let f = self.term(int, &l1, &Ty::Lolli(Box::new(cut.clone()), Box::new(ty.clone())), d)?;
        let x = self.term(int, &l2, &cut, d)?;
        Some(app(f, x))
    }

    /// `if` on an intuitionistic boolean, or `idelim` on a reflexivity proof.
    fn branch(&mut self, int: &Vars, lin: &[(String, Ty)], ty: &Ty, d: usize) -> Option<Term> {
        if self.rng.gen_bool(0.7) {
            let s = self.term(int, &[], &Ty::Two, d)?;
            // a dependent motive when the goal is a family over an
            // intuitionistic boolean variable
            if let Ty::Base(n, args) = ty {
                if n == "F" && lin.is_empty() {
                    if let [arg] = args.as_slice() {
                        if int.iter().any(|(v, t)| *t == Ty::Two && *arg == Term::free(v.as_str())) {
                            let z = self.name("z");
                            let t = self.term(int, &[], &fam_ty(Term::Tt), d)?;
                            let e = self.term(int, &[], &fam_ty(Term::Ff), d)?;
                            return Some(if_(&z, fam_ty(Term::free(z.as_str())), arg.clone(), t, e));
                        }
                    }
                }
            }
            let z = self.name("z");
            let t = self.term(int, lin, ty, d)?;
            let e = self.term(int, lin, ty, d)?;
            return Some(if_(&z, ty.clone(), s, t, e));
        }
        let dom = if self.rng.gen_bool(0.5) { Ty::Two } else { a() };
        let a = self.term(int, &[], &dom, d)?;
        let (l1, l2) = self.split(lin);
        let proof = self.term(int, &l1, &id_ty(dom.clone(), a.clone(), a.clone()), d)?;
        let z = self.name("z");
        let mut int2 = int.clone();
        int2.push((z.clone(), dom));
        let body = self.term(&int2, &l2, ty, d)?;
        let (mx, my) = (self.name("x"), self.name("x"));
        Some(id_elim(&mx, &my, ty.clone(), a.clone(), a, proof, &z, body))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::print_term;

    #[test]
    fn samples_check_and_respect_depth() {
        let mut g = TermGen::new(1);
        for _ in 0..50 {
            let s = g.sample(7);
            assert!(term_depth(&s.term) <= 7);
            assert!(
                checker::check(g.signature(), &s.ctx, &s.term, &s.ty).is_ok(),
                "{}",
                print_term(&s.term)
            );
        }
    }

    #[test]
    fn generation_is_reproducible() {
        let xs: Vec<Term> = {
            let mut g = TermGen::new(9);
            (0..10).map(|_| g.sample(5).term).collect()
        };
        let mut g = TermGen::new(9);
        for x in xs {
            assert_eq!(g.sample(5).term, x);
        }
    }

    #[test]
    fn samples_are_varied() {
        let mut g = TermGen::new(3);
        let mut heads = std::collections::BTreeSet::new();
        for _ in 0..200 {
            let t = g.sample(7).term;
            heads.insert(format!("{:?}", t).split(['(', ' ', '{']).next().unwrap().to_string());
        }
        assert!(heads.len() >= 8, "{:?}", heads);
    }
}
