//! Judgemental equality: normalise, then compare at a type.
//!
//! Negative types (⊸, Π, &, ⊤) are compared η-long. Positive uniqueness rules
//! and splitting on booleans are only tried when `ext_positive` is on, and only
//! within a fuel budget; running out of fuel yields [`Verdict::Undecided`].

mod conv;
pub mod norm;
pub mod util;

use crate::checker::{self, DualContext, Signature};
use crate::syntax::{Term, Ty};

pub use norm::{Normalizer, DEFAULT_CEILING};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EqualityMode {
    pub eta_negative: bool,
    pub ext_positive: bool,
    /// Number of positive expansions one comparison may try.
    pub fuel: usize,
}

impl Default for EqualityMode {
    fn default() -> Self {
        let fuel = std::env::var("ILDTT_FUEL")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(8);
        EqualityMode {
            eta_negative: true,
            ext_positive: false,
            fuel,
        }
    }
}

impl EqualityMode {
    pub fn extensional() -> Self {
        EqualityMode {
            ext_positive: true,
            ..Self::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    True,
    False,
    Undecided,
}

impl Verdict {
    pub fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (False, _) | (_, False) => False,
            (True, True) => True,
            _ => Undecided,
        }
    }

    pub fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::True => "true",
            Verdict::False => "false",
            Verdict::Undecided => "undecided",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Equality {
    pub verdict: Verdict,
    /// Rule names, in order of first use.
    pub trace: Vec<String>,
    pub steps: usize,
    pub ceiling_hit: bool,
}

#[derive(Clone, Debug)]
pub struct CanonForm {
    pub term: Term,
    pub trace: Vec<String>,
    pub steps: usize,
    pub ceiling_hit: bool,
}

fn merged(a: &[&'static str], b: &[&'static str]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for r in a.iter().chain(b) {
        if !out.iter().any(|s| s == r) {
            out.push(r.to_string());
        }
    }
    out
}

/// Decide `Δ;Ξ ⊢ t ≡ u : A`. Both terms are assumed well typed.
pub fn equal(sig: &Signature, ctx: &DualContext, t: &Term, u: &Term, ty: &Ty, mode: EqualityMode) -> Equality {
    let mut c = conv::Cmp::new(sig, mode, ctx);
    let mut v = c.terms(t, u, ty);
    if c.n.hit {
        v = Verdict::Undecided;
    }
    if v == Verdict::False && c.starved {
        v = Verdict::Undecided;
    }
    Equality {
        verdict: v,
        trace: merged(&c.n.trace, &c.trace),
        steps: c.n.steps,
        ceiling_hit: c.n.hit,
    }
}

/// `Δ ⊢ A ≡ B type`.
pub fn type_equal(sig: &Signature, int: &[(String, Ty)], a: &Ty, b: &Ty, mode: EqualityMode) -> bool {
    if a == b {
        return true;
    }
    let mut ctx = DualContext::new();
    for (n, t) in int {
        ctx = ctx.with_int(n, t.clone());
    }
    let mut c = conv::Cmp::new(sig, mode, &ctx);
    c.types(a, b) == Verdict::True
}

/// `⊢ Δ;Ξ ≡ Δ';Ξ'`: same names in the same regions, pointwise equal types,
/// each compared in the intuitionistic prefix of the left context.
pub fn context_equal(sig: &Signature, a: &DualContext, b: &DualContext, mode: EqualityMode) -> bool {
    if a.int.len() != b.int.len() || a.lin.len() != b.lin.len() {
        return false;
    }
    for (i, ((x, s), (y, t))) in a.int.iter().zip(&b.int).enumerate() {
        if x != y || !type_equal(sig, &a.int[..i], s, t, mode) {
            return false;
        }
    }
    a.lin
        .iter()
        .zip(&b.lin)
        .all(|(x, y)| x.name == y.name && type_equal(sig, &a.int, &x.ty, &y.ty, mode))
}

/// The canonical form of a well-typed term, with every annotation that the
/// normaliser moved re-elaborated.
///
/// With `eta_negative` on, negative η-redexes are contracted afterwards.
pub fn normalize(sig: &Signature, ctx: &DualContext, t: &Term, ty: &Ty, mode: EqualityMode) -> CanonForm {
    let mut n = Normalizer::default();
    let mut raw = n.norm(t);
    let mut trace = n.trace.clone();
    if mode.eta_negative {
        raw = norm::eta_contract(&raw, &mut trace);
    }
    let term = checker::repair(sig, ctx, &raw, ty).unwrap_or(raw);
    CanonForm {
        term,
        trace: trace.iter().map(|s| s.to_string()).collect(),
        steps: n.steps,
        ceiling_hit: n.hit,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::check_module;
    use crate::surface::{parse_module, parse_term, ParseEnv};
    use crate::syntax::build::*;

    const SIG: &str = "type A\ntype B\nconst f : A -o B\n";

    fn setup() -> (Signature, ParseEnv) {
        let m = parse_module(SIG).unwrap();
        (check_module(&m, EqualityMode::default()).signature, ParseEnv::from_module(&m))
    }

    fn eq(ctx: &DualContext, l: &str, r: &str, ty: &Ty, mode: EqualityMode) -> Verdict {
        let (sig, env) = setup();
        let vars: Vec<String> = ctx.int.iter().map(|(n, _)| n.clone()).chain(ctx.lin.iter().map(|l| l.name.clone())).collect();
        let l = parse_term(l, &env, &vars).unwrap();
        let r = parse_term(r, &env, &vars).unwrap();
        equal(&sig, ctx, &l, &r, ty, mode).verdict
    }

    #[test]
    fn eta_for_linear_functions_is_switchable() {
        let ctx = DualContext::new();
        let ty = lolli(base("A"), base("B"));
        assert_eq!(eq(&ctx, "f", "\\x:A. f x", &ty, EqualityMode::default()), Verdict::True);
        let no_eta = EqualityMode {
            eta_negative: false,
            ..EqualityMode::default()
        };
        assert_eq!(eq(&ctx, "f", "\\x:A. f x", &ty, no_eta), Verdict::False);
    }

    #[test]
    fn positive_eta_needs_the_extensional_mode() {
        let ctx = DualContext::new().with_lin("w", tensor_ty(base("A"), base("B")));
        let ty = tensor_ty(base("A"), base("B"));
        let l = "let[A (x) B] w be x (x) y in x (x) y";
        assert_eq!(eq(&ctx, l, "w", &ty, EqualityMode::default()), Verdict::False);
        assert_eq!(eq(&ctx, l, "w", &ty, EqualityMode::extensional()), Verdict::True);
    }

    #[test]
    fn booleans_are_distinct() {
        let ctx = DualContext::new();
        assert_eq!(eq(&ctx, "tt", "ff", &Ty::Two, EqualityMode::extensional()), Verdict::False);
    }

    #[test]
    fn verdicts_combine() {
        use Verdict::*;
        assert_eq!(True.and(Undecided), Undecided);
        assert_eq!(Undecided.and(False), False);
        assert_eq!(Verdict::from_bool(true).to_string(), "true");
    }

    #[test]
    fn context_equality_is_pointwise() {
        let (sig, _) = setup();
        let a = DualContext::new().with_int("x", base("A")).with_lin("y", base("B"));
        let b = DualContext::new().with_int("x", base("A")).with_lin("y", base("A"));
        assert!(context_equal(&sig, &a, &a, EqualityMode::default()));
        assert!(!context_equal(&sig, &a, &b, EqualityMode::default()));
    }

    #[test]
    fn only_the_extensional_mode_tries_positive_rules() {
        assert!(EqualityMode::extensional().ext_positive);
        assert!(!EqualityMode::default().ext_positive);
    }
}
