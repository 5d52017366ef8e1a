use std::collections::BTreeSet;

use super::parser::{CtxEntry, Decl, DeclKind, SourceModule, KEYWORDS};
use crate::syntax::{Syntax, Term, Ty, Var};

/// Output options. Unicode connectives are for display only; the parser reads ASCII.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Style {
    pub unicode: bool,
}

impl Style {
    pub const ASCII: Style = Style { unicode: false };
    pub const UNICODE: Style = Style { unicode: true };

    fn pick(&self, ascii: &'static str, uni: &'static str) -> &'static str {
        if self.unicode {
            uni
        } else {
            ascii
        }
    }
}

struct Printer {
    style: Style,
    /// Names of enclosing binders, innermost last.
    names: Vec<String>,
    /// Free names of the whole input; binders never reuse them.
    avoid: BTreeSet<String>,
}

// Term precedences.
const T_ANY: u8 = 0;
const T_APP: u8 = 1;
const T_PREFIX: u8 = 2;
const T_ATOM: u8 = 3;

// Type precedences.
const Y_ANY: u8 = 0;
const Y_ADD: u8 = 1;
const Y_TENSOR: u8 = 2;
const Y_UNARY: u8 = 3;
const Y_ATOM: u8 = 4;

fn paren(s: String, need: bool) -> String {
    if need {
        format!("({})", s)
    } else {
        s
    }
}

impl Printer {
    fn new(style: Style, avoid: BTreeSet<String>) -> Self {
        Printer {
            style,
            names: vec![],
            avoid,
        }
    }

    fn fresh(&self, hint: &str) -> String {
        let trimmed = hint.split('#').next().unwrap_or("");
        let base = if trimmed.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_')
            && trimmed
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
        {
            trimmed.to_string()
        } else {
            "x".to_string()
        };
        let taken = |n: &str| {
            KEYWORDS.contains(&n) || self.avoid.contains(n) || self.names.iter().any(|m| m == n)
        };
        if !taken(&base) {
            return base;
        }
        (1..)
            .map(|i| format!("{}{}", base, i))
            .find(|n| !taken(n))
            .unwrap()
    }

    fn bind<T>(&mut self, hint: &str, f: impl FnOnce(&mut Self, &str) -> T) -> T {
        let n = self.fresh(hint);
        self.names.push(n.clone());
        let r = f(self, &n);
        self.names.pop();
        r
    }

    fn var(&self, v: &Var) -> String {
        match v {
            Var::Free(n) => n.clone(),
            Var::Bound(i) => {
                if *i < self.names.len() {
                    self.names[self.names.len() - 1 - i].clone()
                } else {
                    format!("?{}", i)
                }
            }
        }
    }

    fn args(&mut self, args: &[Term]) -> String {
        let parts: Vec<String> = args.iter().map(|a| self.term(a, T_ANY)).collect();
        format!("({})", parts.join(", "))
    }

    fn ty(&mut self, t: &Ty, prec: u8) -> String {
        let st = self.style;
        match t {
            Ty::Base(n, args) => {
                if args.is_empty() {
                    n.clone()
                } else {
                    format!("{}{}", n, self.args(args))
                }
            }
            Ty::Unit => "I".into(),
            Ty::Top => st.pick("Top", "⊤").into(),
            Ty::Zero => "0".into(),
            Ty::Two => "2".into(),
            Ty::Id(a, l, r) => format!(
                "Id {} ({}, {})",
                self.ty(a, Y_ATOM),
                self.term(l, T_ANY),
                self.term(r, T_ANY)
            ),
            Ty::Bang(a) => paren(format!("!{}", self.ty(a, Y_UNARY)), prec > Y_UNARY),
            Ty::Tensor(a, b) => paren(
                format!(
                    "{} {} {}",
                    self.ty(a, Y_UNARY),
                    st.pick("(x)", "⊗"),
                    self.ty(b, Y_TENSOR)
                ),
                prec > Y_TENSOR,
            ),
            Ty::With(a, b) | Ty::Plus(a, b) => {
                let op = if matches!(t, Ty::With(..)) {
                    "&"
                } else {
                    st.pick("(+)", "⊕")
                };
                paren(
                    format!("{} {} {}", self.ty(a, Y_ADD), op, self.ty(b, Y_TENSOR)),
                    prec > Y_ADD,
                )
            }
            Ty::Lolli(a, b) => paren(
                format!(
                    "{} {} {}",
                    self.ty(a, Y_ADD),
                    st.pick("-o", "⊸"),
                    self.ty(b, Y_ANY)
                ),
                prec > Y_ANY,
            ),
            Ty::Sigma(h, a, b) | Ty::Pi(h, a, b) => {
                let kw = if matches!(t, Ty::Sigma(..)) {
                    st.pick("Sg", "Σ")
                } else {
                    st.pick("Pi", "Π")
                };
                let a = self.ty(a, Y_ANY);
                let s = self.bind(&h.0, |p, x| format!("{} !{}:{}. {}", kw, x, a, p.ty(b, Y_ANY)));
                paren(s, prec > Y_ANY)
            }
        }
    }

    fn term(&mut self, t: &Term, prec: u8) -> String {
        let st = self.style;
        match t {
            Term::Var(v) => self.var(v),
            Term::Const(c, args) => {
                if args.is_empty() {
                    c.clone()
                } else {
                    format!("{}{}", c, self.args(args))
                }
            }
            Term::Star => "*".into(),
            Term::TopUnit => st.pick("<>", "⟨⟩").into(),
            Term::Tt => "tt".into(),
            Term::Ff => "ff".into(),
            Term::Pair(a, b) => {
                let (a, b) = (self.term(a, T_ANY), self.term(b, T_ANY));
                if st.unicode {
                    format!("⟨{}, {}⟩", a, b)
                } else {
                    format!("<{}, {}>", a, b)
                }
            }
            Term::Bang(a) => paren(format!("!{}", self.term(a, T_PREFIX)), prec > T_PREFIX),
            Term::Fst(a) => paren(format!("fst {}", self.term(a, T_PREFIX)), prec > T_PREFIX),
            Term::Snd(a) => paren(format!("snd {}", self.term(a, T_PREFIX)), prec > T_PREFIX),
            Term::Refl(a) => paren(format!("refl !{}", self.term(a, T_PREFIX)), prec > T_PREFIX),
            Term::Inl(ty, a) | Term::Inr(ty, a) | Term::Abort(ty, a) => {
                let kw = match t {
                    Term::Inl(..) => "inl",
                    Term::Inr(..) => "inr",
                    _ => "abort",
                };
                let ty = self.ty(ty, Y_ANY);
                paren(
                    format!("{}[{}] {}", kw, ty, self.term(a, T_PREFIX)),
                    prec > T_PREFIX,
                )
            }
            Term::App(f, a) => {
                let s = format!("{} {}", self.term(f, T_APP), self.term(a, T_ATOM));
                paren(s, prec > T_APP)
            }
            Term::PiApp(f, a) => {
                let s = format!("{} !{}", self.term(f, T_APP), self.term(a, T_ATOM));
                paren(s, prec > T_APP)
            }
            Term::Tensor(a, b) => {
                let left = if matches!(**a, Term::Bang(_)) {
                    format!("({})", self.term(a, T_ANY))
                } else {
                    self.term(a, T_APP)
                };
                let s = format!("{} {} {}", left, st.pick("(x)", "⊗"), self.term(b, T_ANY));
                paren(s, prec > T_ANY)
            }
            Term::SigmaIntro(a, b) => {
                let s = format!(
                    "!{} {} {}",
                    self.term(a, T_PREFIX),
                    st.pick("(x)", "⊗"),
                    self.term(b, T_ANY)
                );
                paren(s, prec > T_ANY)
            }
            Term::Lam(h, ty, body) | Term::PiLam(h, ty, body) => {
                let bang = if matches!(t, Term::PiLam(..)) { "!" } else { "" };
                let ty = self.ty(ty, Y_ANY);
                let lam = st.pick("\\", "λ");
                let s = self.bind(&h.0, |p, x| {
                    format!("{}{}{}:{}. {}", lam, bang, x, ty, p.term(body, T_ANY))
                });
                paren(s, prec > T_ANY)
            }
            Term::LetUnit {
                motive,
                scrut,
                body,
            } => {
                let s = format!(
                    "let[{}] {} be * in {}",
                    self.ty(motive, Y_ANY),
                    self.term(scrut, T_ANY),
                    self.term(body, T_ANY)
                );
                paren(s, prec > T_ANY)
            }
            Term::LetTensor {
                motive,
                scrut,
                x,
                y,
                body,
            }
            | Term::LetSigma {
                motive,
                scrut,
                x,
                y,
                body,
            } => {
                let sigma = matches!(t, Term::LetSigma { .. });
                let head = format!(
                    "let[{}] {} be ",
                    self.ty(motive, Y_ANY),
                    self.term(scrut, T_ANY)
                );
                let tens = st.pick("(x)", "⊗");
                let s = self.bind(&x.0, |p, xn| {
                    p.bind(&y.0, |p, yn| {
                        format!(
                            "{}{}{} {} {} in {}",
                            head,
                            if sigma { "!" } else { "" },
                            xn,
                            tens,
                            yn,
                            p.term(body, T_ANY)
                        )
                    })
                });
                paren(s, prec > T_ANY)
            }
            Term::LetBang {
                motive,
                scrut,
                x,
                body,
            } => {
                let head = format!(
                    "let[{}] {} be ",
                    self.ty(motive, Y_ANY),
                    self.term(scrut, T_ANY)
                );
                let s = self.bind(&x.0, |p, xn| {
                    format!("{}!{} in {}", head, xn, p.term(body, T_ANY))
                });
                paren(s, prec > T_ANY)
            }
            Term::Case {
                motive,
                scrut,
                x,
                left,
                y,
                right,
            } => {
                let head = format!(
                    "case[{}] {} of",
                    self.ty(motive, Y_ANY),
                    self.term(scrut, T_ANY)
                );
                let l = self.bind(&x.0, |p, xn| format!("inl {} -> {}", xn, p.term(left, T_ANY)));
                let r = self.bind(&y.0, |p, yn| format!("inr {} -> {}", yn, p.term(right, T_ANY)));
                paren(format!("{} {} | {}", head, l, r), prec > T_ANY)
            }
            Term::If {
                motive,
                z,
                scrut,
                then_branch,
                else_branch,
            } => {
                let m = self.bind(&z.0, |p, zn| format!("{}. {}", zn, p.ty(motive, Y_ANY)));
                let s = format!(
                    "if[{}] {} then {} else {}",
                    m,
                    self.term(scrut, T_ANY),
                    self.term(then_branch, T_ANY),
                    self.term(else_branch, T_ANY)
                );
                paren(s, prec > T_ANY)
            }
            Term::IdElim {
                motive,
                mx,
                my,
                z,
                branch,
                left,
                right,
                proof,
            } => {
                let m = self.bind(&mx.0, |p, a| {
                    p.bind(&my.0, |p, b| format!("{} {}. {}", a, b, p.ty(motive, Y_ANY)))
                });
                let args = format!(
                    "({}, {}, {})",
                    self.term(left, T_ANY),
                    self.term(right, T_ANY),
                    self.term(proof, T_ANY)
                );
                let d = self.bind(&z.0, |p, zn| format!("{} -> {}", zn, p.term(branch, T_ANY)));
                paren(format!("idelim[{}] {} with {}", m, args, d), prec > T_ANY)
            }
        }
    }
}

pub fn print_term(t: &Term) -> String {
    print_term_with(t, Style::ASCII)
}

pub fn print_term_with(t: &Term, style: Style) -> String {
    Printer::new(style, t.free_names()).term(t, T_ANY)
}

pub fn print_ty(t: &Ty) -> String {
    print_ty_with(t, Style::ASCII)
}

pub fn print_ty_with(t: &Ty, style: Style) -> String {
    Printer::new(style, t.free_names()).ty(t, Y_ANY)
}

fn print_ctx(p: &mut Printer, ctx: &[CtxEntry], force_int: bool) -> String {
    ctx.iter()
        .map(|e| {
            let bang = if e.linear || force_int { "" } else { "!" };
            format!("({}{} : {})", bang, e.name, p.ty(&e.ty, Y_ANY))
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn join_nonempty(parts: &[String]) -> String {
    parts
        .iter()
        .filter(|s| !s.is_empty())
        .cloned()
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn print_decl(d: &Decl, style: Style) -> String {
    let mut avoid = BTreeSet::new();
    collect_decl_names(d, &mut avoid);
    let mut p = Printer::new(style, avoid);
    let label = |kw: &str| {
        if d.name.starts_with(&format!("{}@", kw)) {
            String::new()
        } else {
            format!("#{}", d.name)
        }
    };
    match &d.kind {
        DeclKind::Type { params } => {
            join_nonempty(&["type".into(), d.name.clone(), print_ctx(&mut p, params, true)])
        }
        DeclKind::Const { params, ty } => format!(
            "{} : {}",
            join_nonempty(&["const".into(), d.name.clone(), print_ctx(&mut p, params, true)]),
            p.ty(ty, Y_ANY)
        ),
        DeclKind::Def { ctx, ty, body } => format!(
            "{} : {} := {}",
            join_nonempty(&["def".into(), d.name.clone(), print_ctx(&mut p, ctx, false)]),
            p.ty(ty, Y_ANY),
            p.term(body, T_ANY)
        ),
        DeclKind::Check { ctx, term, ty } => format!(
            "{} |- {} : {}",
            join_nonempty(&["check".into(), label("check"), print_ctx(&mut p, ctx, false)]),
            p.term(term, T_ANY),
            p.ty(ty, Y_ANY)
        ),
        DeclKind::Eq {
            ctx,
            left,
            right,
            ty,
        } => format!(
            "{} |- {} == {} : {}",
            join_nonempty(&["eq".into(), label("eq"), print_ctx(&mut p, ctx, false)]),
            p.term(left, T_ANY),
            p.term(right, T_ANY),
            p.ty(ty, Y_ANY)
        ),
        DeclKind::Iso {
            ctx,
            a,
            b,
            fwd_var,
            fwd,
            bwd_var,
            bwd,
        } => format!(
            "{} |- {} ~= {} via {}. {}, {}. {}",
            join_nonempty(&["iso".into(), label("iso"), print_ctx(&mut p, ctx, false)]),
            p.ty(a, Y_ANY),
            p.ty(b, Y_ANY),
            fwd_var,
            p.term(fwd, T_ANY),
            bwd_var,
            p.term(bwd, T_ANY)
        ),
    }
}

fn collect_decl_names(d: &Decl, out: &mut BTreeSet<String>) {
    let ctx_names = |ctx: &[CtxEntry], out: &mut BTreeSet<String>| {
        for e in ctx {
            out.insert(e.name.clone());
            out.extend(e.ty.free_names());
        }
    };
    match &d.kind {
        DeclKind::Type { params } => ctx_names(params, out),
        DeclKind::Const { params, ty } => {
            ctx_names(params, out);
            out.extend(ty.free_names());
        }
        DeclKind::Def { ctx, ty, body } => {
            ctx_names(ctx, out);
            out.extend(ty.free_names());
            out.extend(body.free_names());
        }
        DeclKind::Check { ctx, term, ty } => {
            ctx_names(ctx, out);
            out.extend(ty.free_names());
            out.extend(term.free_names());
        }
        DeclKind::Eq {
            ctx,
            left,
            right,
            ty,
        } => {
            ctx_names(ctx, out);
            out.extend(ty.free_names());
            out.extend(left.free_names());
            out.extend(right.free_names());
        }
        DeclKind::Iso {
            ctx,
            a,
            b,
            fwd_var,
            fwd,
            bwd_var,
            bwd,
        } => {
            ctx_names(ctx, out);
            out.extend(a.free_names());
            out.extend(b.free_names());
            out.insert(fwd_var.clone());
            out.insert(bwd_var.clone());
            out.extend(fwd.free_names());
            out.extend(bwd.free_names());
        }
    }
}

pub fn print_module(m: &SourceModule, style: Style) -> String {
    let mut s = String::new();
    for d in &m.decls {
        s.push_str(&print_decl(d, style));
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::parser::{parse_module, parse_term, ParseEnv};
    use crate::syntax::build::*;

    #[test]
    fn tensor_prints_ascii() {
        assert_eq!(
            print_term(&tensor(Term::free("a"), Term::free("b"))),
            "a (x) b"
        );
    }

    #[test]
    fn sigma_prints() {
        assert_eq!(print_ty(&sigma("x", base("A"), base("B"))), "Sg !x:A. B");
    }

    #[test]
    fn unicode_is_opt_in() {
        let t = lolli(base("A"), tensor_ty(base("A"), Ty::Top));
        assert_eq!(print_ty_with(&t, Style::UNICODE), "A ⊸ A ⊗ ⊤");
    }

    #[test]
    fn binders_avoid_capturing_free_names() {
        // \y:A. x with x := y must print a binder distinct from y.
        let t = lam("y", base("A"), Term::free("x")).subst("x", &Term::free("y"));
        let s = print_term(&t);
        let back = parse_term(&s, &ParseEnv::default(), &["y".into()]).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn module_round_trip() {
        let src = "type A\ntype F (x : A)\nconst c : A\n\
                   def f (y : Pi !x:A. F(x)) : Pi !x:A. F(x) := \\!x:A. y !x\n\
                   check #k (!a : A) |- refl !a : Id A (a, a)\n\
                   eq (y : I) |- let[I] y be * in * == y : I\n";
        let m = parse_module(src).unwrap();
        let printed = print_module(&m, Style::ASCII);
        let m2 = parse_module(&printed).unwrap();
        assert_eq!(m, m2.clone().with_spans_of(&m));
    }

    impl SourceModule {
        fn with_spans_of(mut self, other: &SourceModule) -> SourceModule {
            for (d, o) in self.decls.iter_mut().zip(&other.decls) {
                d.span = o.span;
                if d.name.contains('@') {
                    d.name = o.name.clone();
                }
            }
            self
        }
    }
}
