use ildtt_core::checker::{DualContext, Signature};
use ildtt_core::model::{Config, Gf2, Interp, PointedSets, SmcBackend};
use ildtt_core::surface::parse_module;
use ildtt_core::checker::check_module;
use ildtt_core::equality::EqualityMode;
use ildtt_core::syntax::{Term, Ty};

fn two() -> Vec<(String, Ty)> {
    vec![("x".to_string(), Ty::Two)]
}

#[test]
fn points_of_two() {
    let sig = Signature::new();
    let cfg = Config::default();
    // basepoint, tt, ff
    assert_eq!(Interp::new(&PointedSets, &sig, &cfg).interp_ctx(&two()).unwrap().len(), 3);
    // 0, tt, ff, tt + ff
    assert_eq!(Interp::new(&Gf2, &sig, &cfg).interp_ctx(&two()).unwrap().len(), 4);
}

#[test]
fn tt_and_ff_differ_in_both_backends() {
    let sig = Signature::new();
    let cfg = Config::default();
    let ctx = DualContext::new();
    assert_eq!(Interp::new(&PointedSets, &sig, &cfg).denot_equal(&ctx, &Term::Tt, &Term::Ff, &Ty::Two), Ok(false));
    assert_eq!(Interp::new(&Gf2, &sig, &cfg).denot_equal(&ctx, &Term::Tt, &Term::Ff, &Ty::Two), Ok(false));
}

#[test]
fn configured_sizes_are_used() {
    let m = parse_module("type A\ntype F (x : 2)\n").unwrap();
    let sig = check_module(&m, EqualityMode::default()).signature;
    let cfg = Config::parse("type A = 3\ntype F(1) = 2\ntype F(*) = 1\n").unwrap();
    let a = Ty::Base("A".into(), vec![]);
    let it = Interp::new(&PointedSets, &sig, &cfg);
    assert_eq!(PointedSets.size(&it.interp_type(&[], &vec![], &a).unwrap()).unwrap(), 3);
    let f = Ty::Base("F".into(), vec![Term::free("x")]);
    let sizes: Vec<u128> = it
        .interp_ctx(&two())
        .unwrap()
        .iter()
        .map(|p| PointedSets.size(&it.interp_type(&two(), p, &f).unwrap()).unwrap())
        .collect();
    assert_eq!(sizes, vec![1, 2, 1]);
    // over GF(2) the same numbers are dimensions
    let g = Interp::new(&Gf2, &sig, &cfg);
    assert_eq!(Gf2.size(&g.interp_type(&[], &vec![], &a).unwrap()).unwrap(), 3);
}

#[test]
fn bad_configs_are_rejected_with_a_line() {
    let e = Config::parse("seed 1\ntype A 3\n").unwrap_err();
    assert_eq!(e.line, 2);
    assert!(Config::parse("wibble\n").is_err());
}
