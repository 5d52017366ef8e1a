use std::collections::BTreeMap;

use super::lexer::{lex, Tok, Token};
use crate::diag::{Diagnostic, Span};
use crate::syntax::{build, Syntax, Term, Ty};

/// A context entry as written: `(!x : A)` is intuitionistic, `(x : A)` linear.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CtxEntry {
    pub name: String,
    pub ty: Ty,
    pub linear: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeclKind {
    Type {
        params: Vec<CtxEntry>,
    },
    Const {
        params: Vec<CtxEntry>,
        ty: Ty,
    },
    Def {
        ctx: Vec<CtxEntry>,
        ty: Ty,
        body: Term,
    },
    Check {
        ctx: Vec<CtxEntry>,
        term: Term,
        ty: Ty,
    },
    Eq {
        ctx: Vec<CtxEntry>,
        left: Term,
        right: Term,
        ty: Ty,
    },
    /// `A ~= B via x. f, y. g` with `x : A |- f : B` and `y : B |- g : A`.
    Iso {
        ctx: Vec<CtxEntry>,
        a: Ty,
        b: Ty,
        fwd_var: String,
        fwd: Term,
        bwd_var: String,
        bwd: Term,
    },
}

impl DeclKind {
    pub fn keyword(&self) -> &'static str {
        match self {
            DeclKind::Type { .. } => "type",
            DeclKind::Const { .. } => "const",
            DeclKind::Def { .. } => "def",
            DeclKind::Check { .. } => "check",
            DeclKind::Eq { .. } => "eq",
            DeclKind::Iso { .. } => "iso",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decl {
    pub name: String,
    pub span: Span,
    pub kind: DeclKind,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SourceModule {
    pub decls: Vec<Decl>,
}

impl SourceModule {
    pub fn find(&self, name: &str) -> Option<&Decl> {
        self.decls.iter().find(|d| d.name == name)
    }
}

/// Names known to the parser: arities of base types and constants, and the
/// bodies of earlier definitions (which are inlined at use sites).
#[derive(Clone, Debug, Default)]
pub struct ParseEnv {
    pub types: BTreeMap<String, usize>,
    pub consts: BTreeMap<String, usize>,
    pub defs: BTreeMap<String, Term>,
}

impl ParseEnv {
    pub fn from_module(m: &SourceModule) -> Self {
        let mut env = ParseEnv::default();
        for d in &m.decls {
            env.record(d);
        }
        env
    }

    fn record(&mut self, d: &Decl) {
        match &d.kind {
            DeclKind::Type { params } => {
                self.types.insert(d.name.clone(), params.len());
            }
            DeclKind::Const { params, .. } => {
                self.consts.insert(d.name.clone(), params.len());
            }
            DeclKind::Def { body, .. } => {
                self.defs.insert(d.name.clone(), body.clone());
            }
            _ => {}
        }
    }
}

const DECL_KEYWORDS: &[&str] = &["type", "const", "def", "check", "eq", "iso"];

pub const KEYWORDS: &[&str] = &[
    "type", "const", "def", "check", "eq", "iso", "via", "let", "be", "in", "case", "of", "inl",
    "inr", "abort", "fst", "snd", "refl", "idelim", "with", "if", "then", "else", "tt", "ff", "I",
    "Top", "Sg", "Pi", "Id",
];

type PResult<T> = Result<T, Diagnostic>;

struct Parser<'e> {
    toks: Vec<Token>,
    pos: usize,
    env: &'e mut ParseEnv,
    /// Names that resolve to variables: binders in scope and context entries.
    vars: Vec<String>,
}

impl<'e> Parser<'e> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(Diagnostic::error(self.span(), msg))
    }

    fn expect(&mut self, t: Tok) -> PResult<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.err(format!(
                "expected {}, found {}",
                t.describe(),
                self.peek().describe()
            ))
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn expect_kw(&mut self, kw: &str) -> PResult<()> {
        if self.is_kw(kw) {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected `{}`, found {}", kw, self.peek().describe()))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            other => self.err(format!("expected a name, found {}", other.describe())),
        }
    }

    fn with_var<T>(&mut self, x: &str, f: impl FnOnce(&mut Self) -> PResult<T>) -> PResult<T> {
        self.vars.push(x.to_string());
        let r = f(self);
        self.vars.pop();
        r
    }

    // ---- types ----

    fn ty(&mut self) -> PResult<Ty> {
        if self.is_kw("Sg") || self.is_kw("Pi") {
            return self.binder_ty();
        }
        let l = self.additive_ty()?;
        if *self.peek() == Tok::Lolli {
            self.bump();
            let r = self.ty()?;
            return Ok(build::lolli(l, r));
        }
        Ok(l)
    }

    fn binder_ty(&mut self) -> PResult<Ty> {
        let sigma = self.is_kw("Sg");
        self.bump();
        self.expect(Tok::Bang)?;
        let x = self.ident()?;
        self.expect(Tok::Colon)?;
        let a = self.ty()?;
        self.expect(Tok::Dot)?;
        let b = self.with_var(&x, |p| p.ty())?;
        Ok(if sigma {
            build::sigma(&x, a, b)
        } else {
            build::pi(&x, a, b)
        })
    }

    fn additive_ty(&mut self) -> PResult<Ty> {
        let mut l = self.tensor_ty()?;
        loop {
            match self.peek() {
                Tok::Amp => {
                    self.bump();
                    let r = self.tensor_ty()?;
                    l = build::with(l, r);
                }
                Tok::PlusOp => {
                    self.bump();
                    let r = self.tensor_ty()?;
                    l = build::plus(l, r);
                }
                _ => return Ok(l),
            }
        }
    }

    fn tensor_ty(&mut self) -> PResult<Ty> {
        let l = self.unary_ty()?;
        if *self.peek() == Tok::TensorOp {
            self.bump();
            let r = self.tensor_ty()?;
            return Ok(build::tensor_ty(l, r));
        }
        Ok(l)
    }

    fn unary_ty(&mut self) -> PResult<Ty> {
        if *self.peek() == Tok::Bang {
            self.bump();
            return Ok(build::bang_ty(self.unary_ty()?));
        }
        if self.is_kw("Sg") || self.is_kw("Pi") {
            return self.binder_ty();
        }
        self.atom_ty()
    }

    fn atom_ty(&mut self) -> PResult<Ty> {
        let mut t = match self.peek().clone() {
            Tok::Ident(s) if s == "I" => {
                self.bump();
                Ty::Unit
            }
            Tok::Ident(s) if s == "Top" => {
                self.bump();
                Ty::Top
            }
            Tok::Zero => {
                self.bump();
                Ty::Zero
            }
            Tok::Two => {
                self.bump();
                Ty::Two
            }
            Tok::LParen => {
                self.bump();
                let t = self.ty()?;
                self.expect(Tok::RParen)?;
                t
            }
            Tok::Ident(s) if s == "Id" => {
                self.bump();
                let a = self.atom_ty()?;
                self.expect(Tok::LParen)?;
                let l = self.term()?;
                self.expect(Tok::Comma)?;
                let r = self.term()?;
                self.expect(Tok::RParen)?;
                build::id_ty(a, l, r)
            }
            Tok::TensorOp => {
                self.bump();
                Ty::Base("x".into(), vec![])
            }
            Tok::Ident(_) => {
                let name = self.ident()?;
                let arity = self.env.types.get(&name).copied().unwrap_or(0);
                let args = self.args(arity)?;
                Ty::Base(name, args)
            }
            other => return self.err(format!("expected a type, found {}", other.describe())),
        };
        while *self.peek() == Tok::LBracket {
            let (u, x) = self.subst_suffix()?;
            t = t.subst(&x, &u);
        }
        Ok(t)
    }

    /// Argument list of a constant or base type of the given arity.
    fn args(&mut self, arity: usize) -> PResult<Vec<Term>> {
        if arity == 0 {
            return Ok(vec![]);
        }
        if *self.peek() == Tok::TensorOp {
            // `B(x)` lexes as `B` followed by the tensor token.
            self.bump();
            let v = vec![self.resolve("x")];
            return self.check_arity(v, arity);
        }
        self.expect(Tok::LParen)?;
        let mut v = vec![self.term()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            v.push(self.term()?);
        }
        self.expect(Tok::RParen)?;
        self.check_arity(v, arity)
    }

    fn check_arity(&self, v: Vec<Term>, arity: usize) -> PResult<Vec<Term>> {
        if v.len() != arity {
            return self.err(format!(
                "expected {} argument(s), found {}",
                arity,
                v.len()
            ));
        }
        Ok(v)
    }

    fn subst_suffix(&mut self) -> PResult<(Term, String)> {
        self.expect(Tok::LBracket)?;
        let u = self.term()?;
        self.expect(Tok::Slash)?;
        let x = self.ident()?;
        self.expect(Tok::RBracket)?;
        Ok((u, x))
    }

    fn motive(&mut self, rule: &str, form: &str) -> PResult<Ty> {
        if *self.peek() != Tok::LBracket {
            return Err(Diagnostic::error(
                self.span(),
                format!("missing motive annotation: write `{}`", form),
            )
            .with_rule(rule));
        }
        self.bump();
        let t = self.ty()?;
        self.expect(Tok::RBracket)?;
        Ok(t)
    }

    // ---- terms ----

    fn term(&mut self) -> PResult<Term> {
        match self.peek().clone() {
            Tok::Backslash => self.lambda(),
            Tok::Ident(s) => match s.as_str() {
                "let" => self.let_(),
                "case" => self.case(),
                "if" => self.if_(),
                "idelim" => self.idelim(),
                _ => self.tensor(),
            },
            _ => self.tensor(),
        }
    }

    fn lambda(&mut self) -> PResult<Term> {
        self.expect(Tok::Backslash)?;
        let dependent = *self.peek() == Tok::Bang;
        if dependent {
            self.bump();
        }
        let x = self.ident()?;
        self.expect(Tok::Colon)?;
        let a = self.ty()?;
        self.expect(Tok::Dot)?;
        let body = self.with_var(&x, |p| p.term())?;
        Ok(if dependent {
            build::pi_lam(&x, a, body)
        } else {
            build::lam(&x, a, body)
        })
    }

    fn let_(&mut self) -> PResult<Term> {
        self.expect_kw("let")?;
        let motive = self.motive("let", "let[C] t be ... in ...")?;
        let scrut = self.term()?;
        self.expect_kw("be")?;
        match self.peek().clone() {
            Tok::Star => {
                self.bump();
                self.expect_kw("in")?;
                let body = self.term()?;
                Ok(build::let_unit(motive, scrut, body))
            }
            Tok::Bang => {
                self.bump();
                let x = self.ident()?;
                if *self.peek() == Tok::TensorOp {
                    self.bump();
                    let y = self.ident()?;
                    self.expect_kw("in")?;
                    let body = self.with_var(&x, |p| p.with_var(&y, |p| p.term()))?;
                    Ok(build::let_sigma(motive, scrut, &x, &y, body))
                } else {
                    self.expect_kw("in")?;
                    let body = self.with_var(&x, |p| p.term())?;
                    Ok(build::let_bang(motive, scrut, &x, body))
                }
            }
            _ => {
                let x = self.ident()?;
                self.expect(Tok::TensorOp)?;
                let y = self.ident()?;
                self.expect_kw("in")?;
                let body = self.with_var(&x, |p| p.with_var(&y, |p| p.term()))?;
                Ok(build::let_tensor(motive, scrut, &x, &y, body))
            }
        }
    }

    fn case(&mut self) -> PResult<Term> {
        self.expect_kw("case")?;
        let motive = self.motive("⊕-E", "case[C] t of inl x -> c | inr y -> d")?;
        let scrut = self.term()?;
        self.expect_kw("of")?;
        self.expect_kw("inl")?;
        let x = self.ident()?;
        self.expect(Tok::Arrow)?;
        let left = self.with_var(&x, |p| p.term())?;
        self.expect(Tok::Bar)?;
        self.expect_kw("inr")?;
        let y = self.ident()?;
        self.expect(Tok::Arrow)?;
        let right = self.with_var(&y, |p| p.term())?;
        Ok(build::case(motive, scrut, &x, left, &y, right))
    }

    fn if_(&mut self) -> PResult<Term> {
        self.expect_kw("if")?;
        if *self.peek() != Tok::LBracket {
            return Err(Diagnostic::error(
                self.span(),
                "missing motive annotation: write `if[z. A] t then u else v`",
            )
            .with_rule("2-E"));
        }
        self.bump();
        let z = self.ident()?;
        self.expect(Tok::Dot)?;
        let motive = self.with_var(&z, |p| p.ty())?;
        self.expect(Tok::RBracket)?;
        let scrut = self.term()?;
        self.expect_kw("then")?;
        let t = self.term()?;
        self.expect_kw("else")?;
        let e = self.term()?;
        Ok(build::if_(&z, motive, scrut, t, e))
    }

    fn idelim(&mut self) -> PResult<Term> {
        self.expect_kw("idelim")?;
        if *self.peek() != Tok::LBracket {
            return Err(Diagnostic::error(
                self.span(),
                "missing motive annotation: write `idelim[x x'. D] (a, a', p) with z -> d`",
            )
            .with_rule("Id-E"));
        }
        self.bump();
        let x = self.ident()?;
        let x2 = self.ident()?;
        self.expect(Tok::Dot)?;
        let motive = self.with_var(&x, |p| p.with_var(&x2, |p| p.ty()))?;
        self.expect(Tok::RBracket)?;
        self.expect(Tok::LParen)?;
        let a = self.term()?;
        self.expect(Tok::Comma)?;
        let a2 = self.term()?;
        self.expect(Tok::Comma)?;
        let p = self.term()?;
        self.expect(Tok::RParen)?;
        self.expect_kw("with")?;
        let z = self.ident()?;
        self.expect(Tok::Arrow)?;
        let d = self.with_var(&z, |p| p.term())?;
        Ok(build::id_elim(&x, &x2, motive, a, a2, p, &z, d))
    }

    fn tensor(&mut self) -> PResult<Term> {
        let (l, bare_bang) = self.app()?;
        if *self.peek() == Tok::TensorOp {
            self.bump();
            let r = self.term()?;
            return Ok(match (bare_bang, l) {
                (true, Term::Bang(a)) => build::sigma_intro(*a, r),
                (_, l) => build::tensor(l, r),
            });
        }
        Ok(l)
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) => {
                matches!(s.as_str(), "tt" | "ff") || !KEYWORDS.contains(&s.as_str())
            }
            Tok::Star | Tok::TopUnit | Tok::Lt | Tok::LParen => true,
            _ => false,
        }
    }

    /// Application spine. The flag reports a bare `!a` with no arguments,
    /// which before `(x)` forms a dependent pair.
    fn app(&mut self) -> PResult<(Term, bool)> {
        let bare = *self.peek() == Tok::Bang;
        let mut f = self.prefix()?;
        let mut nargs = 0;
        loop {
            if *self.peek() == Tok::Bang {
                self.bump();
                let a = self.atom()?;
                f = build::pi_app(f, a);
            } else if self.starts_atom() {
                let a = self.atom()?;
                f = build::app(f, a);
            } else {
                break;
            }
            nargs += 1;
        }
        Ok((f, bare && nargs == 0))
    }

    fn prefix(&mut self) -> PResult<Term> {
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(build::bang(self.prefix()?))
            }
            Tok::Ident(s) => match s.as_str() {
                "fst" | "snd" => {
                    self.bump();
                    let a = self.prefix()?;
                    Ok(if s == "fst" {
                        Term::Fst(Box::new(a))
                    } else {
                        Term::Snd(Box::new(a))
                    })
                }
                "inl" | "inr" => {
                    self.bump();
                    let form = format!("{}[B] a", s);
                    let rule = if s == "inl" { "⊕-I1" } else { "⊕-I2" };
                    let ann = self.motive(rule, &form)?;
                    let a = self.prefix()?;
                    Ok(if s == "inl" {
                        Term::Inl(Box::new(ann), Box::new(a))
                    } else {
                        Term::Inr(Box::new(ann), Box::new(a))
                    })
                }
                "abort" => {
                    self.bump();
                    let ann = self.motive("0-E", "abort[B] t")?;
                    let a = self.prefix()?;
                    Ok(Term::Abort(Box::new(ann), Box::new(a)))
                }
                "refl" => {
                    self.bump();
                    self.expect(Tok::Bang)?;
                    let a = self.prefix()?;
                    Ok(Term::Refl(Box::new(a)))
                }
                _ => self.atom(),
            },
            _ => self.atom(),
        }
    }

    fn resolve(&mut self, name: &str) -> Term {
        if self.vars.iter().any(|v| v == name) {
            return Term::free(name);
        }
        if let Some(body) = self.env.defs.get(name) {
            return body.clone();
        }
        Term::free(name)
    }

    fn atom(&mut self) -> PResult<Term> {
        let mut t = match self.peek().clone() {
            Tok::Ident(s) if s == "tt" => {
                self.bump();
                Term::Tt
            }
            Tok::Ident(s) if s == "ff" => {
                self.bump();
                Term::Ff
            }
            Tok::Ident(_) => {
                let name = self.ident()?;
                if !self.vars.contains(&name) {
                    if let Some(&arity) = self.env.consts.get(&name) {
                        let args = self.args(arity)?;
                        Term::Const(name, args)
                    } else {
                        self.resolve(&name)
                    }
                } else {
                    Term::free(name)
                }
            }
            Tok::TensorOp => {
                self.bump();
                self.resolve("x")
            }
            Tok::Star => {
                self.bump();
                Term::Star
            }
            Tok::TopUnit => {
                self.bump();
                Term::TopUnit
            }
            Tok::Lt => {
                self.bump();
                let a = self.term()?;
                self.expect(Tok::Comma)?;
                let b = self.term()?;
                self.expect(Tok::Gt)?;
                build::pair(a, b)
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                t
            }
            other => return self.err(format!("expected a term, found {}", other.describe())),
        };
        while *self.peek() == Tok::LBracket {
            let (u, x) = self.subst_suffix()?;
            t = t.subst(&x, &u);
        }
        Ok(t)
    }

    // ---- declarations ----

    fn at_ctx_entry(&self) -> bool {
        *self.peek() == Tok::LParen
            && match self.peek_at(1) {
                Tok::Ident(_) => *self.peek_at(2) == Tok::Colon,
                Tok::Bang => {
                    matches!(self.peek_at(2), Tok::Ident(_)) && *self.peek_at(3) == Tok::Colon
                }
                _ => false,
            }
    }

    /// Parses context entries, leaving their names in scope.
    fn ctx(&mut self, force_int: bool) -> PResult<Vec<CtxEntry>> {
        let mut out = Vec::new();
        while self.at_ctx_entry() {
            self.bump();
            let linear = if *self.peek() == Tok::Bang {
                self.bump();
                false
            } else {
                !force_int
            };
            let name = self.ident()?;
            self.expect(Tok::Colon)?;
            let ty = self.ty()?;
            self.expect(Tok::RParen)?;
            if out.iter().any(|e: &CtxEntry| e.name == name) {
                return self.err(format!("duplicate context entry `{}`", name));
            }
            self.vars.push(name.clone());
            out.push(CtxEntry { name, ty, linear });
        }
        Ok(out)
    }

    fn label(&mut self, kind: &str, line: usize) -> String {
        if let Tok::Label(l) = self.peek().clone() {
            self.bump();
            l
        } else {
            format!("{}@{}", kind, line)
        }
    }

    fn decl(&mut self) -> PResult<Decl> {
        let span = self.span();
        let kw = match self.peek().clone() {
            Tok::Ident(s) if DECL_KEYWORDS.contains(&s.as_str()) => s,
            other => {
                return self.err(format!(
                    "expected a declaration (type, const, def, check, eq, iso), found {}",
                    other.describe()
                ))
            }
        };
        self.bump();
        self.vars.clear();
        let (name, kind) = match kw.as_str() {
            "type" => {
                let name = self.ident()?;
                let params = self.ctx(true)?;
                (name, DeclKind::Type { params })
            }
            "const" => {
                let name = self.ident()?;
                let params = self.ctx(true)?;
                self.expect(Tok::Colon)?;
                let ty = self.ty()?;
                (name, DeclKind::Const { params, ty })
            }
            "def" => {
                let name = self.ident()?;
                let ctx = self.ctx(false)?;
                self.expect(Tok::Colon)?;
                let ty = self.ty()?;
                self.expect(Tok::Assign)?;
                let body = self.term()?;
                (name, DeclKind::Def { ctx, ty, body })
            }
            "check" => {
                let name = self.label("check", span.line);
                let ctx = self.ctx(false)?;
                if *self.peek() == Tok::Turnstile {
                    self.bump();
                }
                let term = self.term()?;
                self.expect(Tok::Colon)?;
                let ty = self.ty()?;
                (name, DeclKind::Check { ctx, term, ty })
            }
            "eq" => {
                let name = self.label("eq", span.line);
                let ctx = self.ctx(false)?;
                if *self.peek() == Tok::Turnstile {
                    self.bump();
                }
                let left = self.term()?;
                self.expect(Tok::EqEq)?;
                let right = self.term()?;
                self.expect(Tok::Colon)?;
                let ty = self.ty()?;
                (
                    name,
                    DeclKind::Eq {
                        ctx,
                        left,
                        right,
                        ty,
                    },
                )
            }
            _ => {
                let name = self.label("iso", span.line);
                let ctx = self.ctx(false)?;
                if *self.peek() == Tok::Turnstile {
                    self.bump();
                }
                let a = self.ty()?;
                self.expect(Tok::Iso)?;
                let b = self.ty()?;
                self.expect_kw("via")?;
                let fwd_var = self.ident()?;
                self.expect(Tok::Dot)?;
                let fwd = self.with_var(&fwd_var.clone(), |p| p.term())?;
                self.expect(Tok::Comma)?;
                let bwd_var = self.ident()?;
                self.expect(Tok::Dot)?;
                let bwd = self.with_var(&bwd_var.clone(), |p| p.term())?;
                (
                    name,
                    DeclKind::Iso {
                        ctx,
                        a,
                        b,
                        fwd_var,
                        fwd,
                        bwd_var,
                        bwd,
                    },
                )
            }
        };
        match self.peek() {
            Tok::Eof => {}
            Tok::Ident(s) if DECL_KEYWORDS.contains(&s.as_str()) => {}
            other => {
                return self.err(format!(
                    "unexpected {} after declaration",
                    other.describe()
                ))
            }
        }
        Ok(Decl { name, span, kind })
    }

    fn recover(&mut self) {
        self.bump();
        while *self.peek() != Tok::Eof {
            if matches!(self.peek(), Tok::Ident(s) if DECL_KEYWORDS.contains(&s.as_str())) {
                return;
            }
            self.bump();
        }
    }
}

/// Parses a whole module. Errors are collected per declaration; parsing resumes
/// at the next declaration keyword.
pub fn parse_module(src: &str) -> Result<SourceModule, Vec<Diagnostic>> {
    let mut env = ParseEnv::default();
    parse_module_with(src, &mut env)
}

pub fn parse_module_with(
    src: &str,
    env: &mut ParseEnv,
) -> Result<SourceModule, Vec<Diagnostic>> {
    let toks = lex(src).map_err(|d| vec![d])?;
    let mut p = Parser {
        toks,
        pos: 0,
        env,
        vars: vec![],
    };
    let mut decls: Vec<Decl> = Vec::new();
    let mut diags = Vec::new();
    while *p.peek() != Tok::Eof {
        match p.decl() {
            Ok(d) => {
                if decls.iter().any(|e| e.name == d.name) {
                    diags.push(Diagnostic::error(
                        d.span,
                        format!("duplicate declaration `{}`", d.name),
                    ));
                    continue;
                }
                p.env.record(&d);
                decls.push(d);
            }
            Err(e) => {
                diags.push(e);
                p.recover();
            }
        }
    }
    if diags.is_empty() {
        Ok(SourceModule { decls })
    } else {
        Err(diags)
    }
}

fn parse_fragment<T>(
    src: &str,
    env: &ParseEnv,
    vars: &[String],
    f: impl FnOnce(&mut Parser) -> PResult<T>,
) -> Result<T, Diagnostic> {
    let toks = lex(src)?;
    let mut env = env.clone();
    let mut p = Parser {
        toks,
        pos: 0,
        env: &mut env,
        vars: vars.to_vec(),
    };
    let t = f(&mut p)?;
    if *p.peek() != Tok::Eof {
        return p.err(format!("unexpected {}", p.peek().describe()));
    }
    Ok(t)
}

/// Parses a standalone term; `vars` are names that resolve as variables.
pub fn parse_term(src: &str, env: &ParseEnv, vars: &[String]) -> Result<Term, Diagnostic> {
    parse_fragment(src, env, vars, |p| p.term())
}

pub fn parse_ty(src: &str, env: &ParseEnv, vars: &[String]) -> Result<Ty, Diagnostic> {
    parse_fragment(src, env, vars, |p| p.ty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::build::*;

    fn env() -> ParseEnv {
        let mut e = ParseEnv::default();
        e.types.insert("A".into(), 0);
        e.types.insert("B".into(), 0);
        e.types.insert("F".into(), 1);
        e
    }

    fn term(s: &str) -> Term {
        parse_term(s, &env(), &[]).unwrap()
    }

    #[test]
    fn top_unit() {
        let m = parse_module("check <> : Top").unwrap();
        match &m.decls[0].kind {
            DeclKind::Check { term, ty, .. } => {
                assert_eq!(*term, Term::TopUnit);
                assert_eq!(*ty, Ty::Top);
            }
            _ => panic!(),
        }
        assert_eq!(m.decls[0].name, "check@1");
    }

    #[test]
    fn missing_motive_is_diagnosed() {
        let e = parse_module("check let t be * in * : I").unwrap_err();
        assert_eq!(e.len(), 1);
        assert!(e[0].message.contains("missing motive"));
    }

    #[test]
    fn pi_witness_shape() {
        let src = "type A\ntype B\ndef f (y : Pi !x:A. B) : !A -o B := \\x':!A. let[B] x' be !x in y !x";
        let m = parse_module(src).unwrap();
        let DeclKind::Def { body, .. } = &m.decls[2].kind else {
            panic!()
        };
        let want = lam(
            "x'",
            bang_ty(base("A")),
            let_bang(
                base("B"),
                Term::free("x'"),
                "x",
                pi_app(Term::free("y"), Term::free("x")),
            ),
        );
        assert_eq!(*body, want);
    }

    #[test]
    fn sigma_intro_versus_tensor_of_bang() {
        let a = term("!a (x) b");
        assert_eq!(a, sigma_intro(Term::free("a"), Term::free("b")));
        let b = term("(!a) (x) b");
        assert_eq!(b, tensor(bang(Term::free("a")), Term::free("b")));
    }

    #[test]
    fn pi_application_versus_bang_argument() {
        assert_eq!(term("f !a"), pi_app(Term::free("f"), Term::free("a")));
        assert_eq!(
            term("f (!a)"),
            app(Term::free("f"), bang(Term::free("a")))
        );
    }

    #[test]
    fn base_type_with_single_variable_argument() {
        let t = parse_ty("F(x)", &env(), &["x".into()]).unwrap();
        assert_eq!(t, Ty::Base("F".into(), vec![Term::free("x")]));
    }

    #[test]
    fn type_precedence() {
        let t = parse_ty("!A (x) B & A -o B", &env(), &[]).unwrap();
        let want = lolli(
            with(tensor_ty(bang_ty(base("A")), base("B")), base("A")),
            base("B"),
        );
        assert_eq!(t, want);
    }

    #[test]
    fn defs_are_inlined_and_substituted() {
        let src = "type A\ndef g (y : A) : A := y\ncheck (z : A) |- g[z/y] : A";
        let m = parse_module(src).unwrap();
        let DeclKind::Check { term, .. } = &m.decls[2].kind else {
            panic!()
        };
        assert_eq!(*term, Term::free("z"));
    }

    #[test]
    fn recovery_continues_after_error() {
        let e = parse_module("check ) : I\ncheck * : I\ncheck ( : I").unwrap_err();
        assert_eq!(e.len(), 2);
        assert_eq!(e[1].span.line, 3);
    }

    #[test]
    fn contexts_mark_linearity() {
        let m = parse_module("type A\ncheck (!x : A) (y : A) |- y : A").unwrap();
        let DeclKind::Check { ctx, .. } = &m.decls[1].kind else {
            panic!()
        };
        assert!(!ctx[0].linear);
        assert!(ctx[1].linear);
    }
}
