use std::collections::BTreeMap;

use crate::syntax::Ty;

/// A base type family: `type B (x1 : A1) ... (xn : An)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeDecl {
    pub params: Vec<(String, Ty)>,
}

/// A term constant usable in an empty linear context: `const c (x : A) : T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstDecl {
    pub params: Vec<(String, Ty)>,
    pub ty: Ty,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub types: BTreeMap<String, TypeDecl>,
    pub consts: BTreeMap<String, ConstDecl>,
    /// Declaration order, for printing and model configuration.
    pub order: Vec<String>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_declared(&self, name: &str) -> bool {
        self.types.contains_key(name) || self.consts.contains_key(name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Usage {
    Fresh,
    Consumed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinEntry {
    pub name: String,
    pub ty: Ty,
    pub usage: Usage,
}

/// `Δ;Ξ`: an intuitionistic region and a linear region with usage flags.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DualContext {
    pub int: Vec<(String, Ty)>,
    pub lin: Vec<LinEntry>,
}

impl DualContext {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_int(mut self, name: &str, ty: Ty) -> Self {
        self.int.push((name.to_string(), ty));
        self
    }

    pub fn with_lin(mut self, name: &str, ty: Ty) -> Self {
        self.lin.push(LinEntry {
            name: name.to_string(),
            ty,
            usage: Usage::Fresh,
        });
        self
    }

    pub fn int_ty(&self, name: &str) -> Option<&Ty> {
        self.int.iter().rev().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    pub fn lin_ty(&self, name: &str) -> Option<&Ty> {
        self.lin.iter().rev().find(|e| e.name == name).map(|e| &e.ty)
    }

    pub fn lin_names(&self) -> Vec<String> {
        self.lin.iter().map(|e| e.name.clone()).collect()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.int.iter().any(|(n, _)| n == name) || self.lin.iter().any(|e| e.name == name)
    }
}

/// Usage flags of the linear variables in scope plus the slack bit set by
/// `⊤-I` and `0-E`, which may absorb any resources still available.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ResourceState {
    pub consumed: Vec<bool>,
    pub slack: bool,
}

impl ResourceState {
    pub fn unused<'a>(&self, ctx: &'a DualContext) -> Vec<&'a str> {
        ctx.lin
            .iter()
            .zip(&self.consumed)
            .filter(|(_, used)| !**used)
            .map(|(e, _)| e.name.as_str())
            .collect()
    }
}
