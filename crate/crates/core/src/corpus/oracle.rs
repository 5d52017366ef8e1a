//! Compare the equality engine with the families model.

use super::{CorpusReport, Expect};
use crate::model::{Config, Interp, SmcBackend};
use crate::surface::DeclKind;
use crate::syntax::{Syntax, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleRow {
    /// `file#decl`.
    pub at: String,
    pub backend: &'static str,
    pub seed: u64,
    pub expect: Expect,
    /// Whether both sides (or both round trips) denote the same thing.
    pub equal: Result<bool, String>,
}

impl OracleRow {
    /// An `eq-true` entry must denote equal things; an `eq-false` one is
    /// only recorded.
    pub fn agrees(&self) -> bool {
        match self.expect {
            Expect::EqTrue => self.equal == Ok(true),
            _ => true,
        }
    }
}

/// Interpret every passing `eq-true` and `eq-false` entry under each
/// configuration.
pub fn denotational_check<B: SmcBackend>(report: &CorpusReport, backend: &B, cfgs: &[Config]) -> Vec<OracleRow> {
    let mut out = Vec::new();
    for o in report.outcomes.iter().filter(|o| o.pass) {
        let e = &o.entry;
        if !matches!(e.expect, Expect::EqTrue | Expect::EqFalse) {
            continue;
        }
        let Some(file) = report.file(&e.file) else { continue };
        let (Some(rep), Some(src)) = (file.reports.get(&e.mode), file.module.find(&e.name)) else {
            continue;
        };
        let Some(d) = rep.find(&e.name) else { continue };
        for cfg in cfgs {
            let it = Interp::new(backend, &rep.signature, cfg);
            let equal = match &src.kind {
                DeclKind::Eq { left, right, ty, .. } => it.denot_equal(&d.ctx, left, right, ty),
                DeclKind::Iso {
                    a,
                    b,
                    fwd_var,
                    fwd,
                    bwd_var,
                    bwd,
                    ..
                } => {
                    // the round trip as a term, then both composites
                    let ctx_a = d.ctx.clone().with_lin(fwd_var, a.clone());
                    it.denot_equal(&ctx_a, &bwd.subst(bwd_var, fwd), &Term::free(fwd_var.as_str()), a)
                        .and_then(|r| Ok(r && it.check_iso(&d.ctx.int, a, b, fwd_var, fwd, bwd_var, bwd)?))
                }
                _ => continue,
            };
            out.push(OracleRow {
                at: format!("{}#{}", e.file, e.name),
                backend: backend.name(),
                seed: cfg.seed,
                expect: e.expect,
                equal: equal.map_err(|x| x.to_string()),
            });
        }
    }
    out
}

/// Configurations for the soundness comparison: random base objects of size
/// up to `max`, with families over 2 vanishing off the two canonical points.
pub fn oracle_configs(seeds: std::ops::Range<u64>, max: u32) -> Vec<Config> {
    seeds
        .map(|s| Config {
            discrete_two: true,
            ..Config::random(s, max)
        })
        .collect()
}
