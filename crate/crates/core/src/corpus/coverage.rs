//! Which typing and equality rules the corpus exercises, positively and
//! negatively.
//!
//! A rule is hit positively when a passing entry's derivation or equality
//! trace uses it, or when one of the structural probes below succeeds on a
//! passing entry. It is hit negatively by a passing `type-error` entry that
//! blames it, or a passing `eq-false` entry tagged with it. Rules whose
//! rejection says nothing (admissible structure, the equivalence rules,
//! formation rules without premises) carry a reason instead.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use super::{CorpusReport, Entry, Expect, Loaded};
use crate::checker::{self, DeclOutcome, DualContext, LinEntry, Signature};
use crate::equality::{self, context_equal, type_equal, EqualityMode, Verdict};
use crate::surface::DeclKind;
use crate::syntax::{alpha_eq, alpha_eq_ty, build, Syntax, Term, Ty};

#[derive(Clone, Copy, Debug)]
pub struct RuleInfo {
    pub name: &'static str,
    pub group: &'static str,
    /// Why no negative test is expected, if none is.
    pub no_negative: Option<&'static str>,
}

const fn r(name: &'static str, group: &'static str) -> RuleInfo {
    RuleInfo {
        name,
        group,
        no_negative: None,
    }
}

const fn na(name: &'static str, group: &'static str, why: &'static str) -> RuleInfo {
    RuleInfo {
        name,
        group,
        no_negative: Some(why),
    }
}

const ADMISSIBLE: &str = "always derivable from its premises";
const EQUIV: &str = "an equivalence-relation rule";
const NO_PREMISE: &str = "no premises";
const VACUOUS: &str = "holds for every pair once 0 is in scope";

pub const RULES: &[RuleInfo] = &[
    na("C-Emp", "context", NO_PREMISE),
    r("Int-C-Ext", "context"),
    r("Lin-C-Ext", "context"),
    r("Int-Var", "context"),
    r("Lin-Var", "context"),
    na("Int-Weak", "structural", ADMISSIBLE),
    na("Int-Exch", "structural", ADMISSIBLE),
    na("Lin-Exch", "structural", ADMISSIBLE),
    na("Int-Ty-Subst", "structural", ADMISSIBLE),
    na("Int-Tm-Subst", "structural", ADMISSIBLE),
    na("Lin-Tm-Subst", "structural", ADMISSIBLE),
    r("Ty-F", "signature"),
    r("Const", "signature"),
    na("C-Eq-R", "equality", EQUIV),
    na("C-Eq-S", "equality", EQUIV),
    na("C-Eq-T", "equality", EQUIV),
    na("Int-C-Ext-Eq", "equality", ADMISSIBLE),
    na("Lin-C-Ext-Eq", "equality", ADMISSIBLE),
    na("Ty-Eq-R", "equality", EQUIV),
    na("Ty-Eq-S", "equality", EQUIV),
    na("Ty-Eq-T", "equality", EQUIV),
    na("Tm-Eq-R", "equality", EQUIV),
    na("Tm-Eq-S", "equality", EQUIV),
    na("Tm-Eq-T", "equality", EQUIV),
    na("Int-Ty-Subst-Eq", "equality", ADMISSIBLE),
    na("Int-Tm-Subst-Eq", "equality", ADMISSIBLE),
    na("Lin-Tm-Subst-Eq", "equality", ADMISSIBLE),
    na("Ty-Conv", "equality", ADMISSIBLE),
    r("Tm-Conv", "equality"),
    r("Σ-F", "Σ"),
    r("Σ-I", "Σ"),
    r("Σ-E", "Σ"),
    r("Σ-C", "Σ"),
    r("Σ-U", "Σ"),
    r("Π-F", "Π"),
    r("Π-I", "Π"),
    r("Π-E", "Π"),
    r("Π-C", "Π"),
    r("Π-U", "Π"),
    r("Id-F", "Id"),
    r("Id-I", "Id"),
    r("Id-E", "Id"),
    r("Id-C", "Id"),
    r("Id-U", "Id"),
    na("I-F", "I", NO_PREMISE),
    r("I-I", "I"),
    r("I-E", "I"),
    r("I-C", "I"),
    r("I-U", "I"),
    r("⊗-F", "⊗"),
    r("⊗-I", "⊗"),
    r("⊗-E", "⊗"),
    r("⊗-C", "⊗"),
    r("⊗-U", "⊗"),
    r("⊸-F", "⊸"),
    r("⊸-I", "⊸"),
    r("⊸-E", "⊸"),
    r("⊸-C", "⊸"),
    r("⊸-U", "⊸"),
    na("⊤-F", "⊤", NO_PREMISE),
    r("⊤-I", "⊤"),
    r("⊤-U", "⊤"),
    r("&-F", "&"),
    r("&-I", "&"),
    r("&-E1", "&"),
    r("&-E2", "&"),
    r("&-C1", "&"),
    r("&-C2", "&"),
    r("&-U", "&"),
    na("0-F", "0", NO_PREMISE),
    r("0-E", "0"),
    na("0-U", "0", VACUOUS),
    r("⊕-F", "⊕"),
    r("⊕-I1", "⊕"),
    r("⊕-I2", "⊕"),
    r("⊕-E", "⊕"),
    r("⊕-C1", "⊕"),
    r("⊕-C2", "⊕"),
    r("⊕-U", "⊕"),
    r("!-F", "!"),
    r("!-I", "!"),
    r("!-E", "!"),
    r("!-C", "!"),
    r("!-U", "!"),
    na("2-F", "2", NO_PREMISE),
    r("2-I1", "2"),
    r("2-I2", "2"),
    r("2-E", "2"),
    r("2-C1", "2"),
    r("2-C2", "2"),
    r("2-U", "2"),
    r("CC-I", "commuting"),
    r("CC-⊗", "commuting"),
    r("CC-Σ", "commuting"),
    r("CC-!", "commuting"),
    r("CC-⊕", "commuting"),
    r("CC-Id", "commuting"),
    na("CC-0", "commuting", VACUOUS),
];

#[derive(Clone, Debug)]
pub struct CoverageRow {
    pub rule: RuleInfo,
    /// `file#decl` of every entry exercising the rule.
    pub positive: Vec<String>,
    pub negative: Vec<String>,
}

impl CoverageRow {
    pub fn complete(&self) -> bool {
        !self.positive.is_empty() && (self.rule.no_negative.is_some() || !self.negative.is_empty())
    }
}

#[derive(Clone, Debug, Default)]
pub struct Coverage {
    pub rows: Vec<CoverageRow>,
    /// Rule names found in logs that the table does not list.
    pub unknown: BTreeSet<String>,
}

impl Coverage {
    pub fn complete(&self) -> bool {
        self.rows.iter().all(|r| r.complete())
    }

    pub fn missing(&self) -> Vec<&CoverageRow> {
        self.rows.iter().filter(|r| !r.complete()).collect()
    }

    /// The table as Markdown.
    pub fn table(&self) -> String {
        let mut s = String::from("| group | rule | positive | negative | example |\n|---|---|---|---|---|\n");
        for row in &self.rows {
            let neg = match row.rule.no_negative {
                Some(why) if row.negative.is_empty() => format!("n/a ({})", why),
                _ => row.negative.len().to_string(),
            };
            let example = row.positive.first().map(String::as_str).unwrap_or("—");
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} | {} |",
                row.rule.group,
                row.rule.name,
                row.positive.len(),
                neg,
                example
            );
        }
        s
    }
}

/// Build the coverage table from a corpus run.
pub fn coverage(report: &CorpusReport) -> Coverage {
    let mut pos: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut neg: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let hit = |m: &mut BTreeMap<String, Vec<String>>, rule: &str, at: String| {
        let v = m.entry(rule.to_string()).or_default();
        if !v.contains(&at) {
            v.push(at);
        }
    };
    for o in report.outcomes.iter().filter(|o| o.pass) {
        let e = &o.entry;
        let at = format!("{}#{}", e.file, e.name);
        let Some(d) = report.decl(e) else { continue };
        match e.expect {
            Expect::TypeError => {
                if let Some(rule) = d.diagnostics.iter().find_map(|x| x.rule.clone()) {
                    hit(&mut neg, &rule, at);
                }
            }
            Expect::EqFalse => {
                d.rules.iter().for_each(|r| hit(&mut pos, r, at.clone()));
                if let Some(rule) = &e.rule {
                    hit(&mut neg, rule, at);
                }
            }
            _ => {
                d.rules.iter().for_each(|r| hit(&mut pos, r, at.clone()));
                if let DeclOutcome::Equal { trace, .. } | DeclOutcome::Iso { trace, .. } = &d.outcome {
                    trace.iter().for_each(|r| hit(&mut pos, r, at.clone()));
                }
            }
        }
    }
    for (rule, at) in probes(report) {
        hit(&mut pos, rule, at);
    }
    let mut unknown: BTreeSet<String> = pos.keys().cloned().collect();
    let rows = RULES
        .iter()
        .map(|info| {
            unknown.remove(info.name);
            CoverageRow {
                rule: *info,
                positive: pos.get(info.name).cloned().unwrap_or_default(),
                negative: neg.get(info.name).cloned().unwrap_or_default(),
            }
        })
        .collect();
    Coverage { rows, unknown }
}

// ---- structural probes ------------------------------------------------

/// A passing entry together with its elaborated judgement.
struct Judgement<'a> {
    at: String,
    sig: &'a Signature,
    ctx: &'a DualContext,
    mode: EqualityMode,
    form: Form<'a>,
}

enum Form<'a> {
    Check(&'a Term, &'a Ty),
    Eq(&'a Term, &'a Term, &'a Ty),
}

fn judgements<'a>(report: &'a CorpusReport) -> Vec<Judgement<'a>> {
    let mut out = Vec::new();
    for o in report.outcomes.iter().filter(|o| o.pass) {
        let e: &Entry = &o.entry;
        let Some(file): Option<&Loaded> = report.file(&e.file) else { continue };
        let (Some(d), Some(src), Some(rep)) = (
            file.decl(e.mode, &e.name),
            file.module.find(&e.name),
            file.reports.get(&e.mode),
        ) else {
            continue;
        };
        let form = match (&src.kind, e.expect) {
            (DeclKind::Check { term, ty, .. } | DeclKind::Def { body: term, ty, .. }, Expect::Ok) => Form::Check(term, ty),
            (DeclKind::Eq { left, right, ty, .. }, Expect::EqTrue) => Form::Eq(left, right, ty),
            _ => continue,
        };
        out.push(Judgement {
            at: format!("{}#{}", e.file, e.name),
            sig: &rep.signature,
            ctx: &d.ctx,
            mode: e.mode.mode(),
            form,
        });
    }
    out
}

fn mentions<S: Syntax + PartialEq>(s: &S, x: &str) -> bool {
    *s != s.subst(x, &Term::Star)
}

/// `(λ!z:!A. z)(!a)`, a term judgementally but not syntactically equal to `a`.
fn redex(a: &Term, ty: &Ty) -> Term {
    build::pi_app(build::pi_lam("z", ty.clone(), Term::free("z")), a.clone())
}

fn fresh(ctx: &DualContext, base: &str) -> String {
    (0..).map(|i| format!("{}{}", base, i)).find(|n| !ctx.contains(n)).unwrap()
}

fn with_int_at(ctx: &DualContext, i: usize, name: &str, ty: Ty) -> DualContext {
    let mut c = ctx.clone();
    c.int.insert(i, (name.to_string(), ty));
    c
}

/// A closed term of type `ty` in the prefix `int[..i]`, other than the
/// variable at `i` itself.
fn substitute_for(sig: &Signature, ctx: &DualContext, i: usize) -> Option<Term> {
    let ty = &ctx.int[i].1;
    if *ty == Ty::Two {
        return Some(Term::Tt);
    }
    if let Some((y, _)) = ctx.int[..i].iter().find(|(_, t)| alpha_eq_ty(t, ty)) {
        return Some(Term::free(y.as_str()));
    }
    sig.consts
        .iter()
        .find(|(_, c)| c.params.is_empty() && alpha_eq_ty(&c.ty, ty))
        .map(|(n, _)| Term::Const(n.clone(), vec![]))
}

/// Remove intuitionistic variable `i`, substituting `a` into what follows.
fn drop_int(ctx: &DualContext, i: usize, a: &Term) -> DualContext {
    let x = ctx.int[i].0.clone();
    let mut c = DualContext::new();
    for (j, (n, t)) in ctx.int.iter().enumerate() {
        if j != i {
            c = c.with_int(n, if j > i { t.subst(&x, a) } else { t.clone() });
        }
    }
    for l in &ctx.lin {
        c = c.with_lin(&l.name, l.ty.subst(&x, a));
    }
    c
}

fn probes(report: &CorpusReport) -> Vec<(&'static str, String)> {
    let js = judgements(report);
    let mut out = Vec::new();
    for j in &js {
        let (sig, ctx, mode) = (j.sig, j.ctx, j.mode);
        let mut hit = |r: &'static str| out.push((r, j.at.clone()));
        let eq = |c: &DualContext, l: &Term, r: &Term, ty: &Ty| equality::equal(sig, c, l, r, ty, mode).verdict == Verdict::True;
        match j.form {
            Form::Check(t, ty) => {
                let holds = |c: &DualContext, t: &Term, ty: &Ty| checker::check(sig, c, t, ty).is_ok();
                let w = fresh(ctx, "w");
                if holds(&with_int_at(ctx, 0, &w, Ty::Two), t, ty)
                    && holds(&with_int_at(ctx, ctx.int.len(), &w, Ty::Two), t, ty)
                {
                    hit("Int-Weak");
                }
                for i in 0..ctx.int.len().saturating_sub(1) {
                    if !mentions(&ctx.int[i + 1].1, &ctx.int[i].0) {
                        let mut c = ctx.clone();
                        c.int.swap(i, i + 1);
                        if holds(&c, t, ty) {
                            hit("Int-Exch");
                        }
                        break;
                    }
                }
                if ctx.lin.len() >= 2 {
                    let mut c = ctx.clone();
                    c.lin.reverse();
                    if holds(&c, t, ty) {
                        hit("Lin-Exch");
                    }
                }
                for i in 0..ctx.int.len() {
                    let x = ctx.int[i].0.clone();
                    if let Some(a) = substitute_for(sig, ctx, i) {
                        let c = drop_int(ctx, i, &a);
                        let ty2 = ty.subst(&x, &a);
                        if mentions(ty, &x) && checker::check_type(sig, &c, &ty2).is_ok() {
                            hit("Int-Ty-Subst");
                        }
                        if mentions(t, &x) && holds(&c, &t.subst(&x, &a), &ty2) {
                            hit("Int-Tm-Subst");
                        }
                    }
                    if mentions(ty, &x) {
                        type_conversions(sig, ctx, i, t, ty, mode, &mut hit);
                    }
                }
                context_conversions(sig, ctx, t, ty, mode, &mut hit);
            }
            Form::Eq(l, r, ty) => {
                if eq(ctx, r, l, ty) {
                    hit("Tm-Eq-S");
                }
                for i in 0..ctx.int.len() {
                    let (x, a_ty) = &ctx.int[i];
                    if !(mentions(l, x) || mentions(r, x)) {
                        continue;
                    }
                    if let Some(a) = substitute_for(sig, ctx, i) {
                        let c = drop_int(ctx, i, &a);
                        if eq(&c, &l.subst(x, &a), &r.subst(x, &redex(&a, a_ty)), &ty.subst(x, &a)) {
                            hit("Int-Tm-Subst-Eq");
                        }
                    }
                }
                for (k, LinEntry { name, ty: a_ty, .. }) in ctx.lin.iter().enumerate() {
                    let v = fresh(ctx, "v");
                    let mut c = ctx.clone();
                    c.lin[k].name = v.clone();
                    let a = build::app(build::lam("z", a_ty.clone(), Term::free("z")), Term::free(v.as_str()));
                    if eq(&c, &l.subst(name, &a), &r.subst(name, &Term::free(v.as_str())), ty) {
                        hit("Lin-Tm-Subst-Eq");
                    }
                }
            }
        }
    }
    // chains: the right side of one step is the left side of the next
    for (a, b) in js.iter().zip(js.iter().skip(1)) {
        let (Form::Eq(l1, r1, t1), Form::Eq(l2, r2, t2)) = (&a.form, &b.form) else { continue };
        if a.at.split('#').next() == b.at.split('#').next()
            && a.ctx == b.ctx
            && alpha_eq_ty(t1, t2)
            && alpha_eq(r1, l2)
            && !alpha_eq(l1, r2)
            && equality::equal(a.sig, a.ctx, l1, r2, t1, a.mode).verdict == Verdict::True
        {
            out.push(("Tm-Eq-T", format!("{}+{}", a.at, b.at.split('#').nth(1).unwrap_or(""))));
        }
    }
    out
}

/// Convert the type of a checked term along `x ↦ (λ!z.z)(!x)`.
fn type_conversions(
    sig: &Signature,
    ctx: &DualContext,
    i: usize,
    t: &Term,
    ty: &Ty,
    mode: EqualityMode,
    hit: &mut dyn FnMut(&'static str),
) {
    let (x, a_ty) = &ctx.int[i];
    let b0 = ty.clone();
    let b1 = ty.subst(x, &redex(&Term::free(x.as_str()), a_ty));
    let b2 = ty.subst(x, &redex(&redex(&Term::free(x.as_str()), a_ty), a_ty));
    let teq = |a: &Ty, b: &Ty| type_equal(sig, &ctx.int, a, b, mode);
    if teq(&b1, &b1.clone()) {
        hit("Ty-Eq-R");
    }
    if teq(&b0, &b1) && teq(&b1, &b0) {
        hit("Ty-Eq-S");
    }
    if teq(&b0, &b1) && teq(&b1, &b2) && teq(&b0, &b2) {
        hit("Ty-Eq-T");
    }
    if checker::check(sig, ctx, t, &b1).is_ok() {
        hit("Ty-Conv");
    }
    if let Some(a) = substitute_for(sig, ctx, i) {
        let c = drop_int(ctx, i, &a);
        if type_equal(sig, &c.int, &b0.subst(x, &a), &b1.subst(x, &a), mode) {
            hit("Int-Ty-Subst-Eq");
        }
    }
}

/// Replace context types by converted ones and re-check.
fn context_conversions(
    sig: &Signature,
    ctx: &DualContext,
    t: &Term,
    ty: &Ty,
    mode: EqualityMode,
    hit: &mut dyn FnMut(&'static str),
) {
    let ceq = |a: &DualContext, b: &DualContext| context_equal(sig, a, b, mode);
    if ceq(ctx, ctx) {
        hit("C-Eq-R");
    }
    let convert = |s: &Ty, depth: usize| -> Option<(Ty, Ty)> {
        let (x, a_ty) = ctx.int[..depth].iter().find(|(x, _)| mentions(s, x))?;
        let once = redex(&Term::free(x.as_str()), a_ty);
        Some((s.subst(x, &once), s.subst(x, &redex(&once, a_ty))))
    };
    for k in 0..ctx.int.len() {
        if let Some((s1, s2)) = convert(&ctx.int[k].1, k) {
            let (mut c1, mut c2) = (ctx.clone(), ctx.clone());
            c1.int[k].1 = s1;
            c2.int[k].1 = s2;
            if ceq(ctx, &c1) && checker::check(sig, &c1, t, ty).is_ok() {
                hit("Int-C-Ext-Eq");
                if ceq(&c1, ctx) {
                    hit("C-Eq-S");
                }
                if ceq(&c1, &c2) && ceq(ctx, &c2) {
                    hit("C-Eq-T");
                }
            }
            break;
        }
    }
    for k in 0..ctx.lin.len() {
        if let Some((s1, s2)) = convert(&ctx.lin[k].ty, ctx.int.len()) {
            let (mut c1, mut c2) = (ctx.clone(), ctx.clone());
            c1.lin[k].ty = s1;
            c2.lin[k].ty = s2;
            if ceq(ctx, &c1) && checker::check(sig, &c1, t, ty).is_ok() {
                hit("Lin-C-Ext-Eq");
                if ceq(&c1, ctx) {
                    hit("C-Eq-S");
                }
                if ceq(&c1, &c2) && ceq(ctx, &c2) {
                    hit("C-Eq-T");
                }
            }
            break;
        }
    }
}
