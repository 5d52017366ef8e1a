use std::collections::BTreeSet;

use super::context::{ConstDecl, DualContext, Signature, TypeDecl};
use super::{Checker, Derivation};
use crate::diag::{Diagnostic, Severity, Span};
use crate::equality::{self, EqualityMode, Verdict};
use crate::surface::{CtxEntry, Decl, DeclKind, SourceModule};
use crate::syntax::{Syntax, Term, Ty};

#[derive(Clone, Debug)]
pub enum DeclOutcome {
    Declared,
    Checked(Box<Derivation>),
    Equal {
        verdict: Verdict,
        trace: Vec<String>,
    },
    /// Round trips `g[f/y] ≡ x` and `f[g/x] ≡ y`.
    Iso {
        there_and_back: Verdict,
        back_and_there: Verdict,
        trace: Vec<String>,
    },
    Failed,
}

#[derive(Clone, Debug)]
pub struct DeclReport {
    pub name: String,
    pub keyword: &'static str,
    pub span: Span,
    pub ctx: DualContext,
    pub outcome: DeclOutcome,
    pub diagnostics: Vec<Diagnostic>,
    /// Rules used while checking this declaration.
    pub rules: BTreeSet<&'static str>,
    /// Derivations of every judgement checked for this declaration.
    pub derivations: Vec<Derivation>,
}

impl DeclReport {
    pub fn verdict(&self) -> Option<Verdict> {
        match &self.outcome {
            DeclOutcome::Equal { verdict, .. } => Some(*verdict),
            DeclOutcome::Iso {
                there_and_back,
                back_and_there,
                ..
            } => Some(there_and_back.and(*back_and_there)),
            _ => None,
        }
    }

    pub fn failed(&self) -> bool {
        self.diagnostics.iter().any(|d| d.severity == Severity::Error)
    }
}

#[derive(Clone, Debug, Default)]
pub struct ModuleReport {
    pub signature: Signature,
    pub decls: Vec<DeclReport>,
}

impl ModuleReport {
    pub fn diagnostics(&self) -> impl Iterator<Item = &Diagnostic> {
        self.decls.iter().flat_map(|d| d.diagnostics.iter())
    }

    pub fn ok(&self) -> bool {
        !self.decls.iter().any(|d| d.failed())
    }

    pub fn find(&self, name: &str) -> Option<&DeclReport> {
        self.decls.iter().find(|d| d.name == name)
    }
}

/// Split a written context into its two regions, keeping the order in each.
pub fn dual_context(entries: &[CtxEntry]) -> DualContext {
    let mut ctx = DualContext::new();
    for e in entries {
        ctx = if e.linear {
            ctx.with_lin(&e.name, e.ty.clone())
        } else {
            ctx.with_int(&e.name, e.ty.clone())
        };
    }
    ctx
}

fn params(entries: &[CtxEntry]) -> Vec<(String, Ty)> {
    entries.iter().map(|e| (e.name.clone(), e.ty.clone())).collect()
}

/// Check every declaration in order. Failing declarations are reported and
/// skipped; later declarations still run.
pub fn check_module(m: &SourceModule, mode: EqualityMode) -> ModuleReport {
    let mut report = ModuleReport::default();
    for d in &m.decls {
        let r = check_decl(&mut report.signature, d, mode);
        report.decls.push(r);
    }
    report
}

fn check_decl(sig: &mut Signature, d: &Decl, mode: EqualityMode) -> DeclReport {
    let mut rep = DeclReport {
        name: d.name.clone(),
        keyword: d.kind.keyword(),
        span: d.span,
        ctx: DualContext::new(),
        outcome: DeclOutcome::Failed,
        diagnostics: Vec::new(),
        rules: BTreeSet::new(),
        derivations: Vec::new(),
    };
    if matches!(d.kind, DeclKind::Type { .. } | DeclKind::Const { .. }) && sig.is_declared(&d.name) {
        rep.diagnostics
            .push(Diagnostic::error(d.span, format!("`{}` is declared twice", d.name)));
        return rep;
    }
    let result = run_decl(sig, d, mode, &mut rep);
    match result {
        Ok(outcome) => {
            match &outcome {
                DeclOutcome::Equal { verdict, .. } => verdict_diag(&mut rep, d, *verdict, "the two sides"),
                DeclOutcome::Iso {
                    there_and_back,
                    back_and_there,
                    ..
                } => {
                    verdict_diag(&mut rep, d, *there_and_back, "backward after forward");
                    verdict_diag(&mut rep, d, *back_and_there, "forward after backward");
                }
                _ => {}
            }
            rep.outcome = outcome;
        }
        Err(e) => rep.diagnostics.push(e.at(d.span)),
    }
    rep
}

fn verdict_diag(rep: &mut DeclReport, d: &Decl, v: Verdict, what: &str) {
    match v {
        Verdict::True => {}
        Verdict::False => rep.diagnostics.push(
            Diagnostic::error(d.span, format!("{} are not judgementally equal", what)).with_rule("Tm-Eq"),
        ),
        Verdict::Undecided => rep.diagnostics.push(Diagnostic {
            severity: Severity::Warning,
            span: d.span,
            message: format!("could not decide whether {} are equal", what),
            rule: Some("Tm-Eq".into()),
        }),
    }
}

fn run_decl(sig: &mut Signature, d: &Decl, mode: EqualityMode, rep: &mut DeclReport) -> Result<DeclOutcome, Diagnostic> {
    let snapshot = sig.clone();
    let mut c = Checker::new(&snapshot);
    c.mode = mode;
    let outcome = match &d.kind {
        DeclKind::Type { params: ps } => {
            c.enter(&dual_context(ps))?;
            sig.types.insert(d.name.clone(), TypeDecl { params: params(ps) });
            sig.order.push(d.name.clone());
            DeclOutcome::Declared
        }
        DeclKind::Const { params: ps, ty } => {
            c.enter(&dual_context(ps))?;
            c.check_type(ty)?;
            sig.consts.insert(
                d.name.clone(),
                ConstDecl {
                    params: params(ps),
                    ty: ty.clone(),
                },
            );
            sig.order.push(d.name.clone());
            DeclOutcome::Declared
        }
        DeclKind::Def { ctx, ty, body } | DeclKind::Check { ctx, term: body, ty } => {
            rep.ctx = dual_context(ctx);
            let dv = judge(&mut c, &rep.ctx, body, ty)?;
            rep.derivations.push(dv.clone());
            DeclOutcome::Checked(Box::new(dv))
        }
        DeclKind::Eq { ctx, left, right, ty } => {
            rep.ctx = dual_context(ctx);
            let dl = judge(&mut c, &rep.ctx, left, ty)?;
            let dr = judge(&mut c, &rep.ctx, right, ty)?;
            rep.derivations.push(dl);
            rep.derivations.push(dr);
            let e = equality::equal(&snapshot, &rep.ctx, left, right, ty, mode);
            DeclOutcome::Equal {
                verdict: e.verdict,
                trace: e.trace,
            }
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
            rep.ctx = dual_context(ctx);
            c.enter(&rep.ctx)?;
            c.check_type(a)?;
            c.check_type(b)?;
            let ctx_a = rep.ctx.clone().with_lin(fwd_var, a.clone());
            let ctx_b = rep.ctx.clone().with_lin(bwd_var, b.clone());
            let df = judge(&mut c, &ctx_a, fwd, b)?;
            let dg = judge(&mut c, &ctx_b, bwd, a)?;
            rep.derivations.push(df);
            rep.derivations.push(dg);
            // g[f/y] : A in ctx,(x:A) and f[g/x] : B in ctx,(y:B)
            let gf = bwd.subst(bwd_var, fwd);
            let fg = fwd.subst(fwd_var, bwd);
            rep.rules.insert("Lin-Tm-Subst");
            let e1 = equality::equal(&snapshot, &ctx_a, &gf, &Term::free(fwd_var.as_str()), a, mode);
            let e2 = equality::equal(&snapshot, &ctx_b, &fg, &Term::free(bwd_var.as_str()), b, mode);
            let mut trace = e1.trace;
            trace.extend(e2.trace);
            DeclOutcome::Iso {
                there_and_back: e1.verdict,
                back_and_there: e2.verdict,
                trace,
            }
        }
    };
    rep.rules.extend(c.log.iter().copied());
    Ok(outcome)
}

/// `Δ;Ξ ⊢ t : A` with the whole linear context consumed.
fn judge(c: &mut Checker, ctx: &DualContext, t: &Term, ty: &Ty) -> Result<Derivation, Diagnostic> {
    c.enter(ctx)?;
    c.check_type(ty)?;
    let d = c.check(t, ty)?;
    c.finish()?;
    Ok(d)
}
