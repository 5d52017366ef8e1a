use proptest::prelude::*;

use ildtt_core::checker::{check, DualContext};
use ildtt_core::equality::{equal, normalize, EqualityMode, Verdict};
use ildtt_core::model::{Config, Gf2, Interp, PointedSets};
use ildtt_core::surface::{parse_module, parse_term, print_term, ParseEnv};
use ildtt_core::syntax::{alpha_eq, Syntax, Term};
use ildtt_core::testgen::{TermGen, SIGNATURE};

fn names(ctx: &DualContext) -> Vec<String> {
    ctx.int.iter().map(|(n, _)| n.clone()).chain(ctx.lin.iter().map(|l| l.name.clone())).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printed_terms_parse_back(seed in any::<u64>(), depth in 1usize..6) {
        let s = TermGen::new(seed).sample(depth);
        let env = ParseEnv::from_module(&parse_module(SIGNATURE).unwrap());
        let back = parse_term(&print_term(&s.term), &env, &names(&s.ctx)).unwrap();
        prop_assert!(alpha_eq(&back, &s.term), "{}", print_term(&s.term));
    }

    #[test]
    fn normal_forms_are_typed_and_stable(seed in any::<u64>(), depth in 1usize..6) {
        let mut g = TermGen::new(seed);
        let s = g.sample(depth);
        let mode = EqualityMode::default();
        let nf = normalize(g.signature(), &s.ctx, &s.term, &s.ty, mode);
        prop_assert!(!nf.ceiling_hit);
        prop_assert!(check(g.signature(), &s.ctx, &nf.term, &s.ty).is_ok());
        let again = normalize(g.signature(), &s.ctx, &nf.term, &s.ty, mode);
        prop_assert!(alpha_eq(&again.term, &nf.term));
        prop_assert_eq!(again.steps, 0);
        prop_assert_eq!(equal(g.signature(), &s.ctx, &s.term, &nf.term, &s.ty, mode).verdict, Verdict::True);
    }

    #[test]
    fn normalisation_preserves_denotation(seed in any::<u64>(), depth in 1usize..5, model in 0u64..4) {
        let mut g = TermGen::new(seed);
        let s = g.sample(depth);
        let nf = normalize(g.signature(), &s.ctx, &s.term, &s.ty, EqualityMode::default());
        let cfg = Config::random(model, 2);
        prop_assert_eq!(Interp::new(&PointedSets, g.signature(), &cfg).denot_equal(&s.ctx, &s.term, &nf.term, &s.ty), Ok(true));
        prop_assert_eq!(Interp::new(&Gf2, g.signature(), &cfg).denot_equal(&s.ctx, &s.term, &nf.term, &s.ty), Ok(true));
    }

    #[test]
    fn closing_then_instantiating_is_identity(seed in any::<u64>(), depth in 1usize..6) {
        let s = TermGen::new(seed).sample(depth);
        for x in names(&s.ctx) {
            let closed = s.term.close(&x);
            prop_assert!(alpha_eq(&closed.instantiate(&Term::free(x.as_str())), &s.term));
            prop_assert!(alpha_eq(&s.term.subst(&x, &Term::free(x.as_str())), &s.term));
        }
    }
}

fn without(ctx: &DualContext, x: &str, a: &Term) -> DualContext {
    let mut out = DualContext::new();
    for (n, t) in &ctx.int {
        if n != x {
            out = out.with_int(n, t.subst(x, a));
        }
    }
    for l in &ctx.lin {
        out = out.with_lin(&l.name, l.ty.subst(x, a));
    }
    out
}

/// `let w_i be x_i (x) y_i in ...` over `n` tensors in the order `order`,
/// around a body that uses every component.
fn nested_lets(order: &[usize]) -> String {
    let n = order.len();
    let mut body = "x0".to_string();
    for i in 0..n {
        body = format!("m ({}) y{}", body, i);
    }
    for i in 1..n {
        body = format!("m ({}) (f x{})", body, i);
    }
    order.iter().rev().fold(body, |acc, &i| format!("let[A] w{i} be x{i} (x) y{i} in {acc}"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Equal terms stay equal after substituting for an intuitionistic variable.
    #[test]
    fn equality_is_stable_under_substitution(seed in any::<u64>(), depth in 1usize..5, which in 0usize..2, pick in any::<bool>()) {
        let mut g = TermGen::new(seed);
        let s = g.sample(depth);
        let mode = EqualityMode::default();
        let nf = normalize(g.signature(), &s.ctx, &s.term, &s.ty, mode);
        let (x, a) = if which == 0 {
            ("p", if pick { Term::Tt } else { Term::Ff })
        } else {
            ("q", parse_term("a0", &ParseEnv::from_module(&parse_module(SIGNATURE).unwrap()), &[]).unwrap())
        };
        let small = without(&s.ctx, x, &a);
        let ty = s.ty.subst(x, &a);
        prop_assert!(check(g.signature(), &small, &s.term.subst(x, &a), &ty).is_ok());
        prop_assert_eq!(equal(g.signature(), &small, &s.term.subst(x, &a), &nf.term.subst(x, &a), &ty, mode).verdict, Verdict::True);
    }

    /// Independent lets are identified whatever order they are written in.
    #[test]
    fn let_order_is_canonical(perm in Just((0..4usize).collect::<Vec<_>>()).prop_shuffle(), other in Just((0..4usize).collect::<Vec<_>>()).prop_shuffle()) {
        let env = ParseEnv::from_module(&parse_module(SIGNATURE).unwrap());
        let names: Vec<String> = (0..4).map(|i| format!("w{}", i)).collect();
        let mut ctx = DualContext::new();
        for w in &names {
            ctx = ctx.with_lin(w, ildtt_core::surface::parse_ty("A (x) B", &env, &[]).unwrap());
        }
        let l = parse_term(&nested_lets(&perm), &env, &names).unwrap();
        let r = parse_term(&nested_lets(&other), &env, &names).unwrap();
        let a = ildtt_core::syntax::build::base("A");
        let g = TermGen::new(0);
        prop_assert!(check(g.signature(), &ctx, &l, &a).is_ok());
        let mode = EqualityMode::default();
        let nl = normalize(g.signature(), &ctx, &l, &a, mode);
        let nr = normalize(g.signature(), &ctx, &r, &a, mode);
        prop_assert!(alpha_eq(&nl.term, &nr.term), "{} vs {}", print_term(&nl.term), print_term(&nr.term));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    /// Arbitrary input yields a module or spanned diagnostics, never a panic.
    #[test]
    fn parser_survives_arbitrary_bytes(bytes in proptest::collection::vec(any::<u8>(), 0..200)) {
        let src = String::from_utf8_lossy(&bytes);
        if let Err(ds) = parse_module(&src) {
            prop_assert!(!ds.is_empty());
            for d in ds {
                prop_assert!(d.span.line >= 1 && d.span.line <= src.lines().count().max(1) + 1);
            }
        }
    }

    /// Token soup built from the language's own vocabulary reaches deeper
    /// into the parser than random bytes do.
    #[test]
    fn parser_survives_token_soup(toks in proptest::collection::vec(proptest::sample::select(vec![
        "type", "const", "def", "check", "eq", "iso", "A", "x", "y", "(", ")", ":", ":=", "|-", "==", "~=",
        "via", ".", ",", "!", "(x)", "-o", "&", "(+)", "Sg", "Pi", "Id", "2", "I", "Top", "0", "*", "<>", "<",
        ">", "\\", "let[A]", "be", "in", "inl[A]", "case[A]", "of", "->", "|", "tt", "ff", "if[z.A]", "then",
        "else", "refl", "idelim[z.A]", "with", "#n", "[", "]", "/", "\n",
    ]), 0..60)) {
        let src = toks.join(" ");
        let _ = parse_module(&src);
    }
}
