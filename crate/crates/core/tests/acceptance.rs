//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Every expected value is recomputed here from first principles (counting
//! formulas, hand-written normal forms, independent walks over the syntax)
//! rather than read back from the library. A criterion listed in
//! `KNOWN_UNATTAINABLE` prints FAIL without failing the test; any other FAIL
//! does fail it.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ildtt_core::checker::{self, DeclReport, DualContext, Signature};
use ildtt_core::corpus::{coverage, denotational_check, oracle_configs, run_dir, CorpusReport, Expect, ModeTag};
use ildtt_core::equality::{equal, normalize, type_equal, EqualityMode, Verdict};
use ildtt_core::model::{Config, Gf2, Interp, PointedSets, SmcBackend};
use ildtt_core::surface::{parse_term, DeclKind, ParseEnv};
use ildtt_core::syntax::build::{if_, let_bang, pi_app, pi_lam};
use ildtt_core::syntax::{alpha_eq, term_depth, Syntax, Term, Ty};
use ildtt_core::testgen::TermGen;

/// Π over 2 in GF(2) vector spaces has a fibre for each of the four global
/// elements of I ⊕ I, so it is not A[tt] & A[ff] for every family.
const KNOWN_UNATTAINABLE: &[usize] = &[4];

/// Whole-run budget.
const TIME_LIMIT: Duration = Duration::from_secs(60);
const SUBST_INSTANCES: usize = 200;
const RANDOM_TERMS: usize = 1000;
const RANDOM_DEPTH: usize = 7;
const LINEARITY_CASES: usize = 20;

struct Line {
    n: usize,
    title: &'static str,
    pass: bool,
    detail: String,
}

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn decl<'a>(r: &'a CorpusReport, file: &str, name: &str) -> &'a DeclReport {
    let e = r
        .outcomes
        .iter()
        .find(|o| o.entry.file == file && o.entry.name == name)
        .unwrap_or_else(|| panic!("{}#{} not in manifest", file, name));
    r.decl(&e.entry).unwrap()
}

fn kind<'a>(r: &'a CorpusReport, file: &str, name: &str) -> &'a DeclKind {
    &r.file(file).unwrap().module.find(name).unwrap().kind
}

fn sig<'a>(r: &'a CorpusReport, file: &str) -> &'a Signature {
    &r.file(file).unwrap().reports[&ModeTag::Default].signature
}

/// Parse a term against a corpus file's declarations, with `ctx` in scope.
fn term(r: &CorpusReport, file: &str, ctx: &DualContext, src: &str) -> Term {
    let env = ParseEnv::from_module(&r.file(file).unwrap().module);
    let vars: Vec<String> = ctx.int.iter().map(|(n, _)| n.clone()).chain(ctx.lin.iter().map(|l| l.name.clone())).collect();
    parse_term(src, &env, &vars).unwrap()
}

// ---- 1 -----------------------------------------------------------------

fn rule_coverage(r: &CorpusReport) -> Line {
    let cov = coverage(r);
    println!("{}", cov.table());
    let missing: Vec<_> = cov.missing().iter().map(|m| m.rule.name).collect();
    let negatives_needed = cov.rows.iter().filter(|x| x.rule.no_negative.is_none()).count();
    Line {
        n: 1,
        title: "rule coverage",
        pass: r.ok() && missing.is_empty() && cov.unknown.is_empty(),
        detail: format!(
            "{} rules, {} with required negatives; corpus {}/{} entries as expected; missing {:?}; unlisted {:?}",
            cov.rows.len(),
            negatives_needed,
            r.outcomes.iter().filter(|o| o.pass).count(),
            r.outcomes.len(),
            missing,
            r.unlisted
        ),
    }
}

// ---- 2 -----------------------------------------------------------------

fn iso_round_trips(r: &CorpusReport) -> Line {
    let cases = [
        ("pi_lolli.ildtt", "g_f", "y"),
        ("pi_lolli.ildtt", "f_g", "y'"),
        ("sigma_tensor.ildtt", "g_f", "y"),
        ("sigma_tensor.ildtt", "f_g", "y'"),
    ];
    let cfgs = oracle_configs(0..6, 2);
    let (mut exact, mut denot, mut total) = (0, 0, 0);
    for (file, name, var) in cases {
        let d = decl(r, file, name);
        let DeclKind::Eq { left, right, ty, .. } = kind(r, file, name) else { panic!() };
        // the round trip is the bare variable on the nose
        let mode = EqualityMode::extensional();
        if alpha_eq(right, &Term::free(var)) && equal(sig(r, file), &d.ctx, left, right, ty, mode).verdict == Verdict::True {
            exact += 1;
        }
        let ok = |b: &dyn Fn(&Config) -> Result<bool, String>| cfgs.iter().all(|c| b(c) == Ok(true));
        let s = sig(r, file);
        let p = ok(&|c| Interp::new(&PointedSets, s, c).denot_equal(&d.ctx, left, right, ty).map_err(|e| e.to_string()));
        let g = ok(&|c| Interp::new(&Gf2, s, c).denot_equal(&d.ctx, left, right, ty).map_err(|e| e.to_string()));
        denot += p as usize + g as usize;
        total += 1;
    }
    Line {
        n: 2,
        title: "iso round-trips",
        pass: exact == 4 && denot == 8,
        detail: format!(
            "{}/{} exact in the equality engine; {}/8 confirmed by both backends over {} models (tolerance: exact)",
            exact,
            total,
            denot,
            cfgs.len()
        ),
    }
}

// ---- 3 -----------------------------------------------------------------

fn bang_as_sigma(r: &CorpusReport) -> Line {
    let f = "bang_sigma.ildtt";
    let s = sig(r, f);
    let derived = ["bang_intro", "bang_elim", "sigma_intro", "sigma_elim"]
        .iter()
        .filter(|n| decl(r, f, n).verdict().is_none() && !decl(r, f, n).failed())
        .count();
    // C: the Σ/I encoding of let !a be !x in c normalises to c[a/x]
    let d = decl(r, f, "bang_beta");
    let DeclKind::Def { body, ty, .. } = kind(r, f, "bang_beta") else { panic!() };
    let nf = normalize(s, &d.ctx, body, ty, EqualityMode::default());
    let c_ok = alpha_eq(&nf.term, &term(r, f, &d.ctx, "c(a) w")) && !nf.ceiling_hit;
    // U: each step holds, the steps link up, and the chain ends in t
    let steps = ["bang_U_step1", "bang_U_step2", "bang_U_step3"];
    let mut u_ok = decl(r, f, "bang_U").verdict() == Some(Verdict::True);
    let mut prev: Option<Term> = None;
    let mut last = None;
    for st in steps {
        let DeclKind::Eq { left, right, .. } = kind(r, f, st) else { panic!() };
        u_ok &= decl(r, f, st).verdict() == Some(Verdict::True);
        if let Some(p) = &prev {
            u_ok &= alpha_eq(p, left);
        }
        prev = Some(right.clone());
        last = Some(right.clone());
    }
    u_ok &= last.is_some_and(|t| alpha_eq(&t, &Term::free("t")));
    let iso = decl(r, f, "bang_as_sigma").verdict() == Some(Verdict::True);
    Line {
        n: 3,
        title: "! = ΣI",
        pass: derived == 4 && c_ok && u_ok && iso,
        detail: format!(
            "derived !-I/!-E {}/4 check; C chain normal form `{}` (want c(a) w); U chain ends in t: {}; iso: {}",
            derived,
            ildtt_core::surface::print_term(&nf.term),
            u_ok,
            iso
        ),
    }
}

// ---- 4 -----------------------------------------------------------------

fn pi_sigma_over_two(r: &CorpusReport) -> Line {
    let f = "two.ildtt";
    let entries: Vec<_> = r.outcomes.iter().filter(|o| o.entry.file == f).collect();
    let syntactic = entries.iter().filter(|o| o.pass).count();
    let s = sig(r, f);
    let iso = |name: &str| match kind(r, f, name) {
        DeclKind::Iso {
            a,
            b,
            fwd_var,
            fwd,
            bwd_var,
            bwd,
            ..
        } => (a.clone(), b.clone(), fwd_var.clone(), fwd.clone(), bwd_var.clone(), bwd.clone()),
        _ => panic!(),
    };
    let (pa, pb, px, pf, py, pg) = iso("pi_two");
    let (sa, sb, sx, sf, sy, sg) = iso("sigma_two");
    let fam = |v: &Term| Ty::Base("F".into(), vec![v.clone()]);
    let pi_ty = ildtt_core::syntax::build::pi("x", Ty::Two, fam(&Term::free("x")));

    // GF(2): global elements of I ⊕ I are 0, tt, ff, tt+ff (indices 0..4);
    // every family with fibre dimensions in 0..=2
    let (mut holds, mut total, mut discrete_holds, mut discrete_total, mut dim_mismatch) = (0, 0, 0, 0, 0);
    for code in 0..81u32 {
        let dims: Vec<u32> = (0..4).map(|k| code / 3u32.pow(k) % 3).collect();
        let mut cfg = Config::default();
        for (k, d) in dims.iter().enumerate() {
            cfg.set_type("F", vec![k as u128], *d);
        }
        for c in ["c0", "d0", "a0", "b0"] {
            cfg.set_const(c, vec![], 0);
        }
        let it = Interp::new(&Gf2, s, &cfg);
        // dim Π = sum over all four fibres; dim & = dim F(tt) + dim F(ff)
        let pi_dim = Gf2.size(&it.interp_type(&[], &vec![], &pi_ty).unwrap()).unwrap();
        if pi_dim != dims.iter().sum::<u32>() as u128 {
            dim_mismatch += 1;
        }
        let ok = it.check_iso(&[], &pa, &pb, &px, &pf, &py, &pg) == Ok(true)
            && it.check_iso(&[], &sa, &sb, &sx, &sf, &sy, &sg) == Ok(true);
        total += 1;
        holds += ok as usize;
        if dims[0] == 0 && dims[3] == 0 {
            discrete_total += 1;
            discrete_holds += ok as usize;
        }
    }
    // pointed sets: three global elements (base, tt, ff); record only
    let (mut p_holds, mut p_total, mut p_base_trivial) = (0, 0, 0);
    for code in 0..27u32 {
        let sizes: Vec<u32> = (0..3).map(|k| code / 3u32.pow(k) % 3 + 1).collect();
        let mut cfg = Config::default();
        for (k, n) in sizes.iter().enumerate() {
            cfg.set_type("F", vec![k as u128], *n);
        }
        let it = Interp::new(&PointedSets, s, &cfg);
        let ok = it.check_iso(&[], &pa, &pb, &px, &pf, &py, &pg) == Ok(true)
            && it.check_iso(&[], &sa, &sb, &sx, &sf, &sy, &sg) == Ok(true);
        p_total += 1;
        p_holds += ok as usize;
        p_base_trivial += (ok == (sizes[0] == 1)) as usize;
    }
    Line {
        n: 4,
        title: "Π/Σ over 2",
        pass: syntactic == entries.len() && holds == total && dim_mismatch == 0,
        detail: format!(
            "syntactic {}/{}; gf2 all families: iso holds for {}/{} (Hom(I, I⊕I) has 4 elements); \
             families vanishing off tt/ff: {}/{}; dim Π = Σ fibres: {} mismatches; \
             pset (recorded): {}/{} hold; holds iff the base fibre is one point: {}/{}",
            syntactic,
            entries.len(),
            holds,
            total,
            discrete_holds,
            discrete_total,
            dim_mismatch,
            p_holds,
            p_total,
            p_base_trivial,
            p_total
        ),
    }
}

// ---- 5 -----------------------------------------------------------------

fn cardinalities(r: &CorpusReport) -> Line {
    let s = sig(r, "bang.ildtt");
    let int = vec![("x".to_string(), Ty::Two)];
    let b = Ty::Base("B".into(), vec![Term::free("x")]);
    let bang_b = Ty::Bang(Box::new(b.clone()));
    let (mut checked, mut bad) = (0, 0);
    // pointed sets: |B(d)| ∈ 1..=4 at each of the three points of 2
    for code in 0..64u32 {
        let mut cfg = Config::default();
        for k in 0..3 {
            cfg.set_type("B", vec![k], code / 4u32.pow(k as u32) % 4 + 1);
        }
        let it = Interp::new(&PointedSets, s, &cfg);
        for p in it.interp_ctx(&int).unwrap() {
            let nb = PointedSets.size(&it.interp_type(&int, &p, &b).unwrap()).unwrap();
            let nbang = PointedSets.size(&it.interp_type(&int, &p, &bang_b).unwrap()).unwrap();
            checked += 1;
            bad += (nbang != nb + 1) as usize;
        }
    }
    // GF(2): dim B(d) ∈ 0..=3 at each of the four points of 2
    for code in 0..256u32 {
        let mut cfg = Config::default();
        for k in 0..4 {
            cfg.set_type("B", vec![k], code / 4u32.pow(k as u32) % 4);
        }
        let it = Interp::new(&Gf2, s, &cfg);
        for p in it.interp_ctx(&int).unwrap() {
            let db = Gf2.size(&it.interp_type(&int, &p, &b).unwrap()).unwrap();
            let dbang = Gf2.size(&it.interp_type(&int, &p, &bang_b).unwrap()).unwrap();
            checked += 1;
            bad += (dbang != 1u128 << db) as usize;
        }
    }
    Line {
        n: 5,
        title: "cardinalities",
        pass: bad == 0,
        detail: format!(
            "{} fibres: |!B| = |B|+1 (pset, |B| ≤ 4) and dim !B = 2^dim B (gf2, dim ≤ 3); {} mismatches (tolerance: exact)",
            checked, bad
        ),
    }
}

// ---- 6 -----------------------------------------------------------------

fn seely(r: &CorpusReport) -> Line {
    let f = "seely.ildtt";
    let s = sig(r, f);
    let parts = |name: &str| match kind(r, f, name) {
        DeclKind::Iso {
            a,
            b,
            fwd_var,
            fwd,
            bwd_var,
            bwd,
            ..
        } => (a.clone(), b.clone(), fwd_var.clone(), fwd.clone(), bwd_var.clone(), bwd.clone()),
        _ => panic!(),
    };
    let (ta, tb, tx, tf, ty_, tg) = parts("bang_top");
    let (wa, wb, wx, wf, wy, wg) = parts("bang_with");
    let (mut ok, mut total, mut card_bad) = (0, 0, 0);
    for na in 1..=4u32 {
        for nb in 1..=4u32 {
            let mut cfg = Config::default();
            cfg.set_type("A", vec![], na);
            cfg.set_type("B", vec![], nb);
            let it = Interp::new(&PointedSets, s, &cfg);
            let size = |t: &Ty| PointedSets.size(&it.interp_type(&[], &vec![], t).unwrap()).unwrap();
            // |!(A&B)| = |A||B| + 1 and |!A ⊗ !B| = (|A|+1-1)(|B|+1-1) + 1
            let want = (na * nb + 1) as u128;
            card_bad += (size(&wa) != want || size(&wb) != want) as usize;
            card_bad += (size(&ta) != 2 || size(&tb) != 2) as usize;
            let good = it.check_iso(&[], &wa, &wb, &wx, &wf, &wy, &wg) == Ok(true)
                && it.check_iso(&[], &ta, &tb, &tx, &tf, &ty_, &tg) == Ok(true);
            ok += good as usize;
            total += 1;
        }
    }
    Line {
        n: 6,
        title: "Seely",
        pass: ok == total && card_bad == 0,
        detail: format!(
            "!⊤ ≅ I and !(A&B) ≅ !A⊗!B with explicit inverses: {}/{} models (|A|,|B| ≤ 4); cardinality mismatches {}",
            ok, total, card_bad
        ),
    }
}

// ---- 7 -----------------------------------------------------------------

fn soundness(r: &CorpusReport) -> Line {
    let cfgs = oracle_configs(0..8, 2);
    let mut rows = denotational_check(r, &PointedSets, &cfgs);
    rows.extend(denotational_check(r, &PointedSets, &oracle_configs(0..4, 3)));
    rows.extend(denotational_check(r, &Gf2, &cfgs));
    let trues: Vec<_> = rows.iter().filter(|x| x.expect == Expect::EqTrue).collect();
    let agree = trues.iter().filter(|x| x.agrees()).count();
    let pairs: std::collections::BTreeSet<_> = trues.iter().map(|x| x.at.clone()).collect();
    // tt and ff as global elements of 2 in GF(2)
    let sig = Signature::new();
    let cfg = Config::default();
    let it = Interp::new(&Gf2, &sig, &cfg);
    let distinct = it.denot_equal(&DualContext::new(), &Term::Tt, &Term::Ff, &Ty::Two) == Ok(false);
    Line {
        n: 7,
        title: "soundness oracle",
        pass: agree == trues.len() && !trues.is_empty() && distinct,
        detail: format!(
            "{} eq-true pairs, {}/{} interpretations agree across pset and gf2; ⟦tt⟧ ≠ ⟦ff⟧ in gf2: {}",
            pairs.len(),
            agree,
            trues.len(),
            distinct
        ),
    }
}

// ---- 8 -----------------------------------------------------------------

/// Count Σ/Π/Id nodes at which substitution fails to pass through the
/// former componentwise.
fn commutes(ty: &Ty, x: &str, a: &Term, counts: &mut BTreeMap<&'static str, usize>) -> bool {
    let whole = ty.subst(x, a);
    match ty {
        Ty::Sigma(h, d, c) | Ty::Pi(h, d, c) => {
            let parts = (Box::new(d.subst(x, a)), Box::new(c.subst(x, a)));
            let rebuilt = if matches!(ty, Ty::Sigma(..)) {
                *counts.entry("Σ").or_default() += 1;
                Ty::Sigma(h.clone(), parts.0, parts.1)
            } else {
                *counts.entry("Π").or_default() += 1;
                Ty::Pi(h.clone(), parts.0, parts.1)
            };
            whole == rebuilt && commutes(d, x, a, counts) && commutes(c, x, a, counts)
        }
        Ty::Id(t, l, r) => {
            *counts.entry("Id").or_default() += 1;
            whole == Ty::Id(Box::new(t.subst(x, a)), Box::new(l.subst(x, a)), Box::new(r.subst(x, a)))
                && commutes(t, x, a, counts)
        }
        Ty::Tensor(l, r) | Ty::Lolli(l, r) | Ty::With(l, r) | Ty::Plus(l, r) => {
            commutes(l, x, a, counts) && commutes(r, x, a, counts)
        }
        Ty::Bang(t) => commutes(t, x, a, counts),
        _ => true,
    }
}

/// A random intuitionistic term of type `ty` over `vars`.
fn random_subst(rng: &mut ChaCha8Rng, vars: &[(String, Ty)], ty: &Ty, depth: usize) -> Option<Term> {
    let mut leaves: Vec<Term> = vars.iter().filter(|(_, t)| t == ty).map(|(n, _)| Term::free(n.as_str())).collect();
    if *ty == Ty::Two {
        leaves.extend([Term::Tt, Term::Ff]);
    }
    if let Ty::Id(_, l, r) = ty {
        if l == r {
            leaves.push(Term::Refl(l.clone()));
        }
    }
    if leaves.is_empty() {
        return None;
    }
    if depth == 0 || rng.gen_bool(0.3) {
        return Some(leaves[rng.gen_range(0..leaves.len())].clone());
    }
    let inner = random_subst(rng, vars, ty, depth - 1)?;
    Some(match rng.gen_range(0..3) {
        0 => pi_app(pi_lam("z", ty.clone(), Term::free("z")), inner),
        1 => let_bang(ty.clone(), Term::Bang(Box::new(inner)), "z", Term::free("z")),
        _ => {
            let cond = random_subst(rng, vars, &Ty::Two, depth - 1)?;
            let other = random_subst(rng, vars, ty, depth - 1)?;
            if_("z", ty.clone(), cond, inner, other)
        }
    })
}

/// ⟦t[a/x]⟧ at every point equals ⟦t⟧ at the point extended by ⟦a⟧.
fn reindexes<B: SmcBackend>(
    it: &Interp<B>,
    ctx: &DualContext,
    i: usize,
    a: &Term,
    small: &DualContext,
    t: &Term,
    ty: &Ty,
) -> Result<bool, String>
where
    B::Elem: PartialEq,
{
    let e = |x: ildtt_core::model::ModelError| x.to_string();
    let (x, xty) = &ctx.int[i];
    let big = it.denote(ctx, t, ty).map_err(e)?;
    let sub = it.denote(small, &t.subst(x, a), &ty.subst(x, a)).map_err(e)?;
    for (p, m) in &sub.points {
        let v = it.value(&small.int[..i], &p[..i].to_vec(), a, xty).map_err(e)?;
        let mut q = p.clone();
        q.insert(i, (x.clone(), v));
        let Some((_, m2)) = big.points.iter().find(|(pt, _)| *pt == q) else { return Ok(false) };
        if m != m2 {
            return Ok(false);
        }
        for (n, (_, t)) in small.int.iter().enumerate().skip(i) {
            let lhs = it.interp_type(&small.int[..n], &p[..n].to_vec(), t).map_err(e)?;
            let orig = &ctx.int[n + 1].1;
            let rhs = it.interp_type(&ctx.int[..n + 1], &q[..n + 1].to_vec(), orig).map_err(e)?;
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn substitution(r: &CorpusReport) -> Line {
    // judgements with an intuitionistic variable, from passing entries
    let mut pool: Vec<(String, &Signature, DualContext, Term, Ty)> = Vec::new();
    for o in r.outcomes.iter().filter(|o| o.pass) {
        let e = &o.entry;
        let file = r.file(&e.file).unwrap();
        let d = r.decl(e).unwrap();
        if d.ctx.int.is_empty() {
            continue;
        }
        let s = &file.reports[&e.mode].signature;
        match (&file.module.find(&e.name).unwrap().kind, e.expect) {
            (DeclKind::Check { term, ty, .. } | DeclKind::Def { body: term, ty, .. }, Expect::Ok) => {
                pool.push((format!("{}#{}", e.file, e.name), s, d.ctx.clone(), term.clone(), ty.clone()))
            }
            (DeclKind::Eq { left, right, ty, .. }, Expect::EqTrue) => {
                for t in [left, right] {
                    pool.push((format!("{}#{}", e.file, e.name), s, d.ctx.clone(), t.clone(), ty.clone()));
                }
            }
            _ => {}
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut instances, mut ty_ok, mut checks_ok, mut re_ok, mut attempts) = (0, 0, 0, 0, 0);
    let mut counts = BTreeMap::new();
    let mut failures = Vec::new();
    while instances < SUBST_INSTANCES && attempts < 50 * SUBST_INSTANCES {
        attempts += 1;
        let (at, s, ctx0, t, ty) = &pool[rng.gen_range(0..pool.len())];
        let i0 = rng.gen_range(0..ctx0.int.len());
        let xty = ctx0.int[i0].1.clone();
        // weaken by a fresh variable of the same type just before x, so a
        // substitute always exists
        let mut ctx = ctx0.clone();
        ctx.int.insert(i0, ("y_".into(), xty.clone()));
        let i = i0 + 1;
        let x = ctx.int[i].0.clone();
        let Some(a) = random_subst(&mut rng, &ctx.int[..i], &xty, 3) else { continue };
        if checker::check(s, &DualContext { int: ctx.int[..i].to_vec(), lin: vec![] }, &a, &xty).is_err() {
            continue;
        }
        instances += 1;
        // the substituted context
        let mut small = DualContext::new();
        for (n, (name, t)) in ctx.int.iter().enumerate() {
            if n != i {
                small = small.with_int(name, if n > i { t.subst(&x, &a) } else { t.clone() });
            }
        }
        for l in &ctx.lin {
            small = small.with_lin(&l.name, l.ty.subst(&x, &a));
        }
        // the judgement's type also under a Π and a Σ binding a copy of x's type
        let wrapped = [
            ildtt_core::syntax::build::pi("w_", xty.clone(), ty.clone()),
            ildtt_core::syntax::build::sigma("w_", xty.clone(), ty.clone()),
        ];
        let types: Vec<&Ty> = ctx.int.iter().skip(i + 1).map(|(_, t)| t).chain(ctx.lin.iter().map(|l| &l.ty)).chain([ty]).collect();
        let commuted = types.iter().chain(wrapped.iter().collect::<Vec<_>>().iter()).all(|t| commutes(t, &x, &a, &mut counts));
        let conv = wrapped.iter().chain([ty]).all(|w| {
            let once = w.subst(&x, &a);
            checker::check_type(s, &DualContext { int: small.int.clone(), lin: vec![] }, &once).is_ok() && type_equal(s, &small.int, &once, &w.subst(&x, &a), EqualityMode::default())
        });
        ty_ok += (commuted && conv) as usize;
        let checks = checker::check(s, &small, &t.subst(&x, &a), &ty.subst(&x, &a)).is_ok();
        checks_ok += checks as usize;
        let cfg = Config::random(instances as u64, 2);
        let p = reindexes(&Interp::new(&PointedSets, s, &cfg), &ctx, i, &a, &small, t, ty);
        let g = reindexes(&Interp::new(&Gf2, s, &cfg), &ctx, i, &a, &small, t, ty);
        let good = p == Ok(true) && g == Ok(true);
        re_ok += good as usize;
        if !(good && checks && commuted) && failures.len() < 3 {
            failures.push(format!("{} [{} := {}] {:?} {:?}", at, x, ildtt_core::surface::print_term(&a), p, g));
        }
    }
    Line {
        n: 8,
        title: "substitution stability",
        pass: instances == SUBST_INSTANCES && ty_ok == instances && checks_ok == instances && re_ok == instances,
        detail: format!(
            "{} instances from {} corpus judgements; formers commute {}/{} (nodes {:?}); still typed {}/{}; \
             denotations reindex strictly in pset and gf2 {}/{}{}",
            instances,
            pool.len(),
            ty_ok,
            instances,
            counts,
            checks_ok,
            instances,
            re_ok,
            instances,
            if failures.is_empty() { String::new() } else { format!("; e.g. {:?}", failures) }
        ),
    }
}

// ---- 9 -----------------------------------------------------------------

fn linearity(r: &CorpusReport) -> Line {
    let files = ["negative/contraction.ildtt", "negative/weakening.ildtt", "negative/leakage.ildtt", "negative/slack.ildtt"];
    let cases: Vec<_> = r.outcomes.iter().filter(|o| files.contains(&o.entry.file.as_str())).collect();
    let rejected = cases
        .iter()
        .filter(|o| {
            let d = r.decl(&o.entry).unwrap();
            o.entry.expect == Expect::TypeError
                && o.entry.rule.is_some()
                && d.diagnostics.first().and_then(|x| x.rule.as_ref()) == o.entry.rule.as_ref()
        })
        .count();
    Line {
        n: 9,
        title: "linearity",
        pass: cases.len() == LINEARITY_CASES && rejected == LINEARITY_CASES,
        detail: format!("{}/{} negative cases rejected with the expected rule", rejected, cases.len()),
    }
}

// ---- 10 ----------------------------------------------------------------

fn determinism(r: &CorpusReport) -> Line {
    let mode = EqualityMode::default();
    let (mut corpus_terms, mut corpus_bad) = (0, 0);
    for o in r.outcomes.iter().filter(|o| o.pass) {
        let e = &o.entry;
        let Some(d) = r.decl(e) else { continue };
        let file = r.file(&e.file).unwrap();
        let s = &file.reports[&e.mode].signature;
        let terms: Vec<(Term, Ty, DualContext)> = match &file.module.find(&e.name).unwrap().kind {
            DeclKind::Check { term, ty, .. } | DeclKind::Def { body: term, ty, .. } if e.expect == Expect::Ok => {
                vec![(term.clone(), ty.clone(), d.ctx.clone())]
            }
            DeclKind::Eq { left, right, ty, .. } if matches!(e.expect, Expect::EqTrue | Expect::EqFalse) => {
                vec![(left.clone(), ty.clone(), d.ctx.clone()), (right.clone(), ty.clone(), d.ctx.clone())]
            }
            _ => vec![],
        };
        for (t, ty, ctx) in terms {
            let a = normalize(s, &ctx, &t, &ty, mode);
            let b = normalize(s, &ctx, &t, &ty, mode);
            corpus_terms += 1;
            corpus_bad += (!alpha_eq(&a.term, &b.term) || a.ceiling_hit || b.ceiling_hit) as usize;
        }
    }
    let mut g = TermGen::new(7);
    let (mut random_bad, mut max_steps, mut deepest, mut reduced) = (0, 0, 0, 0);
    for _ in 0..RANDOM_TERMS {
        let s = g.sample(RANDOM_DEPTH);
        deepest = deepest.max(term_depth(&s.term));
        let a = normalize(g.signature(), &s.ctx, &s.term, &s.ty, mode);
        let b = normalize(g.signature(), &s.ctx, &s.term, &s.ty, mode);
        random_bad += (!alpha_eq(&a.term, &b.term) || a.ceiling_hit || b.ceiling_hit) as usize;
        max_steps = max_steps.max(a.steps);
        reduced += (a.steps > 0) as usize;
    }
    Line {
        n: 10,
        title: "determinism",
        pass: corpus_bad == 0 && random_bad == 0 && deepest <= RANDOM_DEPTH,
        detail: format!(
            "corpus {} terms, {} unstable/ceiling; {} random terms (depth ≤ {}, deepest {}, {} with redexes, max {} steps), {} unstable/ceiling",
            corpus_terms, corpus_bad, RANDOM_TERMS, RANDOM_DEPTH, deepest, reduced, max_steps, random_bad
        ),
    }
}

#[test]
fn acceptance() {
    let start = Instant::now();
    let report = run_dir(&root()).expect("corpus loads");
    let lines = vec![
        rule_coverage(&report),
        iso_round_trips(&report),
        bang_as_sigma(&report),
        pi_sigma_over_two(&report),
        cardinalities(&report),
        seely(&report),
        soundness(&report),
        substitution(&report),
        linearity(&report),
        determinism(&report),
    ];
    let elapsed = start.elapsed();
    // straight to the process's stdout, so the summary survives output capture
    let mut out = std::io::stdout().lock();
    for l in &lines {
        let _ = writeln!(
            out,
            "criterion {:>2} {:<24} {}  {}",
            l.n,
            l.title,
            if l.pass { "PASS" } else { "FAIL" },
            l.detail
        );
    }
    let _ = writeln!(out, "elapsed {:.1?} (limit {:?})", elapsed, TIME_LIMIT);
    drop(out);
    let unexpected: Vec<usize> = lines
        .iter()
        .filter(|l| !l.pass && !KNOWN_UNATTAINABLE.contains(&l.n))
        .map(|l| l.n)
        .collect();
    assert!(unexpected.is_empty(), "criteria failed: {:?}", unexpected);
    assert!(elapsed < TIME_LIMIT, "acceptance run took {:?}", elapsed);
}
